#include "colpot/filtering.hpp"

#include <charconv>
#include <sstream>

namespace colpot {

namespace {

std::string trim(std::string_view text) {
    std::size_t begin = text.find_first_not_of(" \t\r");
    if (begin == std::string_view::npos) return "";
    std::size_t end = text.find_last_not_of(" \t\r");
    return std::string(text.substr(begin, end - begin + 1));
}

}  // namespace

std::set<std::string> parse_intent_list(std::string_view text) {
    std::set<std::string> actions;
    std::istringstream stream{std::string(text)};
    std::string raw_line;
    for (int line_no = 1; std::getline(stream, raw_line); ++line_no) {
        std::string line = raw_line;
        if (std::size_t hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        line = trim(line);
        if (line.empty()) continue;
        if (line.find_first_of(" \t") != std::string::npos) {
            throw ParseError("intent action must not contain whitespace",
                             "line " + std::to_string(line_no));
        }
        actions.insert(std::move(line));
    }
    return actions;
}

bool is_excluded(const FilterSet& filters, const Channel& channel) {
    switch (channel.kind) {
        case ChannelKind::Intent:
            return filters.os_intents.contains(channel.name) ||
                   filters.trusted_intents.contains(channel.name) ||
                   filters.common_intents.contains(channel.name);
        case ChannelKind::ExternalStorage:
            return filters.drop_external_storage;
        case ChannelKind::SharedPrefs:
            return false;
    }
    return false;
}

std::map<std::string, IntentRatio> compute_intent_ratios(
    const std::vector<AsrSignature>& signatures) {
    std::map<std::string, std::set<std::string>> senders;
    std::map<std::string, std::set<std::string>> receivers;
    std::set<std::string> actions;
    for (const AsrSignature& sig : signatures) {
        for (const Channel& channel : sig.sends) {
            if (channel.kind != ChannelKind::Intent) continue;
            senders[channel.name].insert(sig.app);
            actions.insert(channel.name);
        }
        for (const Channel& channel : sig.receives) {
            if (channel.kind != ChannelKind::Intent) continue;
            receivers[channel.name].insert(sig.app);
            actions.insert(channel.name);
        }
    }
    std::map<std::string, IntentRatio> ratios;
    for (const std::string& action : actions) {
        IntentRatio ratio;
        if (auto it = senders.find(action); it != senders.end()) {
            ratio.senders = it->second.size();
        }
        if (auto it = receivers.find(action); it != receivers.end()) {
            ratio.receivers = it->second.size();
        }
        ratios.emplace(action, ratio);
    }
    return ratios;
}

RatioThreshold RatioThreshold::parse(std::string_view text) {
    const std::string trimmed = trim(text);
    if (trimmed.empty()) {
        throw ValidationError("empty ratio threshold");
    }
    std::string digits;
    std::int64_t den = 1;
    bool seen_dot = false;
    for (char c : trimmed) {
        if (c == '.') {
            if (seen_dot) throw ValidationError("invalid ratio threshold \"" + trimmed + "\"");
            seen_dot = true;
            continue;
        }
        if (c < '0' || c > '9') {
            throw ValidationError("invalid ratio threshold \"" + trimmed + "\"");
        }
        digits.push_back(c);
        if (seen_dot) {
            if (den > (1LL << 50)) {
                throw ValidationError("ratio threshold has too many decimals");
            }
            den *= 10;
        }
    }
    if (digits.empty()) {
        throw ValidationError("invalid ratio threshold \"" + trimmed + "\"");
    }
    std::int64_t num = 0;
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), num);
    if (ec != std::errc{} || ptr != digits.data() + digits.size()) {
        throw ValidationError("ratio threshold out of range \"" + trimmed + "\"");
    }
    if (num <= 0) {
        throw ValidationError("ratio threshold must be positive");
    }
    return RatioThreshold{num, den};
}

bool ratio_at_least(const IntentRatio& ratio, const RatioThreshold& threshold) {
    if (ratio.infinite()) return true;
    // senders / receivers >= num / den, without division.
    return static_cast<__int128>(ratio.senders) * threshold.den >=
           static_cast<__int128>(threshold.num) * ratio.receivers;
}

std::set<std::string> derive_trusted_list(const std::vector<AsrSignature>& signatures,
                                          const RatioThreshold& threshold) {
    if (threshold.num <= 0 || threshold.den <= 0) {
        throw ValidationError("ratio threshold must be positive");
    }
    std::set<std::string> trusted;
    for (const auto& [action, ratio] : compute_intent_ratios(signatures)) {
        if (ratio_at_least(ratio, threshold)) {
            trusted.insert(action);
        }
    }
    return trusted;
}

std::vector<AsrSignature> filter_by_label(const std::vector<AsrSignature>& signatures,
                                          Label label) {
    std::vector<AsrSignature> out;
    for (const AsrSignature& sig : signatures) {
        if (sig.label == label) out.push_back(sig);
    }
    return out;
}

}  // namespace colpot
