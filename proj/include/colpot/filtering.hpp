#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "colpot/signature.hpp"

namespace colpot {

// Channel exclusion configuration used to scale analysis to large corpora.
// Intent channels whose action appears in any of the three lists are
// excluded; external-storage channels are excluded when
// `drop_external_storage` is set; shared-preferences channels are never
// excluded.
struct FilterSet {
    std::set<std::string> os_intents;       // system broadcast actions
    std::set<std::string> trusted_intents;  // actions with benign send/receive ratios
    std::set<std::string> common_intents;   // curated high-frequency app actions
    bool drop_external_storage{false};
};

// Parses an intent-action list: one action per line, '#' comments, blank
// lines skipped. Throws ParseError ("line N") when an action contains
// internal whitespace.
std::set<std::string> parse_intent_list(std::string_view text);

bool is_excluded(const FilterSet& filters, const Channel& channel);

// Send/receive popularity of one intent action across a corpus, counting
// distinct apps on each side.
struct IntentRatio {
    std::uint64_t senders{0};
    std::uint64_t receivers{0};
    // No receiver at all: the action leads nowhere, its ratio is treated as
    // infinite and always clears any threshold.
    bool infinite() const { return receivers == 0; }
};

// Ratio per intent action appearing anywhere (send or receive side) in the
// given signatures.
std::map<std::string, IntentRatio> compute_intent_ratios(
    const std::vector<AsrSignature>& signatures);

// Exact rational threshold, so boundary cases like 4.99 vs 5 are decided
// without floating-point error.
struct RatioThreshold {
    std::int64_t num{5};
    std::int64_t den{1};

    // Accepts integers ("5") and plain decimals ("4.99"). Throws
    // ValidationError on anything else or a non-positive value.
    static RatioThreshold parse(std::string_view text);
};

// senders/receivers >= threshold, decided by cross-multiplication;
// infinite ratios always pass.
bool ratio_at_least(const IntentRatio& ratio, const RatioThreshold& threshold);

// Intent actions of the given signatures whose ratio clears the threshold
// (boundary inclusive). Callers wanting the conventional behaviour pass
// only clean-labeled signatures; see filter_by_label.
std::set<std::string> derive_trusted_list(const std::vector<AsrSignature>& signatures,
                                          const RatioThreshold& threshold = {});

std::vector<AsrSignature> filter_by_label(const std::vector<AsrSignature>& signatures,
                                          Label label);

}  // namespace colpot
