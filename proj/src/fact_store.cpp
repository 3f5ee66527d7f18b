#include "colpot/fact_store.hpp"

#include <algorithm>

namespace colpot {

namespace {

Channel normalized(Channel channel) {
    channel.dynamic = channel.name.starts_with("CG:");
    return channel;
}

}  // namespace

FactStore FactStore::build(std::vector<AsrSignature> signatures, const ActionMapping& mapping,
                           const FilterSet* filters) {
    std::sort(signatures.begin(), signatures.end(),
              [](const AsrSignature& a, const AsrSignature& b) { return a.app < b.app; });
    for (std::size_t i = 1; i < signatures.size(); ++i) {
        if (signatures[i].app == signatures[i - 1].app) {
            throw ValidationError("duplicate app id \"" + signatures[i].app + "\"");
        }
    }

    FactStore store;
    store.signatures_ = std::move(signatures);
    store.apps_.reserve(store.signatures_.size());
    store.actions_.reserve(store.signatures_.size());
    for (std::size_t i = 0; i < store.signatures_.size(); ++i) {
        const AsrSignature& sig = store.signatures_[i];
        if (sig.app.empty()) {
            throw ValidationError("signature with empty app id");
        }
        store.apps_.push_back(sig.app);
        store.index_.emplace(sig.app, i);
        store.actions_.push_back(actions_of(sig, mapping));

        for (const Channel& raw : sig.sends) {
            Channel channel = normalized(raw);
            if (filters && is_excluded(*filters, channel)) continue;
            store.channels_[channel].senders.push_back(sig.app);
        }
        for (const Channel& raw : sig.receives) {
            Channel channel = normalized(raw);
            if (filters && is_excluded(*filters, channel)) continue;
            store.channels_[channel].receivers.push_back(sig.app);
        }
    }
    // Apps were visited in sorted order, so the per-channel lists are
    // already sorted and duplicate-free.

    store.out_edges_.resize(store.apps_.size());
    for (const auto& [channel, facts] : store.channels_) {
        if (facts.receivers.empty()) continue;
        for (const std::string& sender : facts.senders) {
            store.out_edges_[store.index_.at(sender)].push_back(
                OutEdge{channel, &facts.receivers});
        }
    }
    return store;
}

bool FactStore::has_app(const std::string& app) const { return index_.contains(app); }

std::size_t FactStore::index_of(const std::string& app) const {
    auto it = index_.find(app);
    if (it == index_.end()) {
        throw std::out_of_range("unknown app id \"" + app + "\"");
    }
    return it->second;
}

const AsrSignature& FactStore::signature(const std::string& app) const {
    return signatures_[index_of(app)];
}

const std::set<HighLevelAction>& FactStore::actions(const std::string& app) const {
    return actions_[index_of(app)];
}

std::set<Channel> FactStore::communicate(const std::string& from, const std::string& to) const {
    const std::size_t from_idx = index_of(from);
    const std::size_t to_idx = index_of(to);
    std::set<Channel> channels;
    if (from_idx == to_idx) return channels;
    for (const OutEdge& edge : out_edges_[from_idx]) {
        if (std::binary_search(edge.receivers->begin(), edge.receivers->end(), to)) {
            channels.insert(edge.channel);
        }
    }
    return channels;
}

const std::vector<FactStore::OutEdge>& FactStore::out_edges(const std::string& app) const {
    return out_edges_[index_of(app)];
}

std::size_t FactStore::fact_count() const {
    std::size_t count = 0;
    for (const auto& [channel, facts] : channels_) {
        count += facts.senders.size() + facts.receivers.size();
    }
    return count;
}

}  // namespace colpot
