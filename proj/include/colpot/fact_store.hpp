#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "colpot/action_mapping.hpp"
#include "colpot/filtering.hpp"
#include "colpot/signature.hpp"

namespace colpot {

// Apps on each side of one channel, sorted, duplicate-free.
struct ChannelFacts {
    std::vector<std::string> senders;
    std::vector<std::string> receivers;
};

// Immutable indexed view of a corpus: per-app signatures and action sets
// plus channel-keyed send/receive indexes ready for traversal.
//
// Channels are joined on (kind, name); the dynamic flag is normalized at
// build time to "name starts with CG:" so it never splits a channel.
// When a FilterSet is supplied, excluded channels contribute no facts at
// all (the signatures themselves are kept verbatim).
class FactStore {
public:
    static FactStore build(std::vector<AsrSignature> signatures,
                           const ActionMapping& mapping,
                           const FilterSet* filters = nullptr);

    const std::vector<std::string>& apps() const { return apps_; }
    bool has_app(const std::string& app) const;

    // Throw std::out_of_range for unknown app ids.
    const AsrSignature& signature(const std::string& app) const;
    const std::set<HighLevelAction>& actions(const std::string& app) const;

    const std::map<Channel, ChannelFacts>& channels() const { return channels_; }

    // Channels through which `from` can talk to `to`: sent by `from` and
    // received by `to`. Empty when from == to.
    std::set<Channel> communicate(const std::string& from, const std::string& to) const;

    // Traversal support: per-app outgoing channels with their receiver lists.
    struct OutEdge {
        Channel channel;
        const std::vector<std::string>* receivers;  // sorted, owned by the store
    };
    const std::vector<OutEdge>& out_edges(const std::string& app) const;

    // Total number of indexed send + receive facts (for shrink checks).
    std::size_t fact_count() const;

private:
    std::vector<std::string> apps_;
    std::map<std::string, std::size_t> index_;
    std::vector<AsrSignature> signatures_;           // by app index
    std::vector<std::set<HighLevelAction>> actions_; // by app index
    std::map<Channel, ChannelFacts> channels_;
    std::vector<std::vector<OutEdge>> out_edges_;    // by app index

    std::size_t index_of(const std::string& app) const;
};

}  // namespace colpot
