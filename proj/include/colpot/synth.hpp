#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "colpot/signature.hpp"

namespace colpot {

// Knobs for the synthetic corpus generator. All probabilities must lie in
// [0, 1]; planted structures need 2 * pairs + 3 * triplets distinct apps.
struct SynthParams {
    std::size_t apps{100};

    // Label mix (remainder is clean).
    double p_malware{0.2};
    double p_unwanted{0.2};

    // Channel fact densities.
    double p_send_intent{0.5};   // app sends 1..3 pool intents
    double p_recv_intent{0.5};   // app receives 1..3 pool intents
    double p_shared_prefs{0.10}; // app sends and/or receives a prefs file
    double p_ext_write{0.08};
    double p_ext_read{0.15};
    double p_dynamic{0.05};      // an intent fact uses a dynamic "CG:" name instead

    // Permission densities.
    double p_sensitive{0.45};
    double p_outside{0.50};
    double p_money{0.04};
    double p_control{0.12};

    // Channel name pools; 0 means derive from corpus size.
    std::size_t intent_pool{0};
    std::size_t prefs_pool{0};

    // Planted collusion structures with ground truth.
    std::size_t planted_pairs{0};
    std::size_t planted_triplets{0};

    // Throws ValidationError when out of range.
    void validate() const;
};

// Ground truth for one planted structure: the apps in head-to-tail order
// and the dedicated channel per hop.
struct PlantRecord {
    std::string kind;  // "info_pair" or "info_triplet"
    std::string resource;
    std::vector<std::string> apps;
    std::vector<Channel> channels;
};

struct SynthCorpus {
    std::vector<AsrSignature> signatures;  // sorted by app id
    std::vector<PlantRecord> plants;
};

// Deterministic: the same seed and params always produce the same corpus,
// independent of platform or standard library.
SynthCorpus generate_synthetic_corpus(std::uint64_t seed, const SynthParams& params);

std::string plants_to_json(const std::vector<PlantRecord>& plants);

}  // namespace colpot
