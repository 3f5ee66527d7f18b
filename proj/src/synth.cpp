#include "colpot/synth.hpp"

#include <json.hpp>

#include <algorithm>
#include <random>

#include "colpot/inference.hpp"

namespace colpot {

namespace {

// Thin wrapper keeping every draw on the raw mt19937_64 stream, whose
// output sequence is fixed by the standard; no distribution adapters, so
// results are identical on any platform or standard library.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    std::size_t below(std::size_t n) { return n == 0 ? 0 : next() % n; }

    double next_unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    bool chance(double p) {
        if (p <= 0.0) return false;
        if (p >= 1.0) return true;
        return next_unit() < p;
    }

private:
    std::mt19937_64 engine_;
};

std::string padded(std::size_t value, int width) {
    std::string digits = std::to_string(value);
    while (static_cast<int>(digits.size()) < width) digits.insert(digits.begin(), '0');
    return digits;
}

const std::vector<std::string> kSensitivePool = {
    "READ_CONTACTS", "READ_SMS",        "GET_ACCOUNTS",
    "READ_PHONE_STATE", "ACCESS_FINE_LOCATION", "READ_CALL_LOG"};
const std::vector<std::string> kOutsidePool = {"BLUETOOTH_ADMIN", "CHANGE_WIFI_STATE", "NFC"};
const std::vector<std::string> kMoneyPool = {"SEND_SMS", "CALL_PHONE", "USE_SIP"};
const std::vector<std::string> kControlPool = {
    "KILL_BACKGROUND_PROCESSES", "GET_TASKS", "WRITE_SETTINGS", "DISABLE_KEYGUARD"};

void check_probability(double value, const char* name) {
    if (value < 0.0 || value > 1.0 || value != value) {
        throw ValidationError(std::string(name) + " must lie in [0, 1]");
    }
}

}  // namespace

void SynthParams::validate() const {
    if (apps == 0) {
        throw ValidationError("apps must be positive");
    }
    check_probability(p_malware, "p_malware");
    check_probability(p_unwanted, "p_unwanted");
    if (p_malware + p_unwanted > 1.0) {
        throw ValidationError("p_malware + p_unwanted must not exceed 1");
    }
    check_probability(p_send_intent, "p_send_intent");
    check_probability(p_recv_intent, "p_recv_intent");
    check_probability(p_shared_prefs, "p_shared_prefs");
    check_probability(p_ext_write, "p_ext_write");
    check_probability(p_ext_read, "p_ext_read");
    check_probability(p_dynamic, "p_dynamic");
    check_probability(p_sensitive, "p_sensitive");
    check_probability(p_outside, "p_outside");
    check_probability(p_money, "p_money");
    check_probability(p_control, "p_control");
    if (2 * planted_pairs + 3 * planted_triplets > apps) {
        throw ValidationError("planted structures need more apps than the corpus has");
    }
}

SynthCorpus generate_synthetic_corpus(std::uint64_t seed, const SynthParams& params) {
    params.validate();
    Rng rng(seed);

    const std::size_t intent_pool =
        params.intent_pool ? params.intent_pool : std::max<std::size_t>(6, params.apps / 8);
    const std::size_t prefs_pool =
        params.prefs_pool ? params.prefs_pool : std::max<std::size_t>(3, params.apps / 30);
    const std::size_t dynamic_pool = std::max<std::size_t>(4, intent_pool / 4);

    auto pool_intent = [&](std::size_t i) { return "synth.action." + padded(i, 3); };
    auto pool_dynamic = [&](std::size_t i) { return "CG:tok" + padded(i, 3); };
    auto pool_prefs = [&](std::size_t i) { return "synth.prefs." + padded(i, 2); };

    SynthCorpus corpus;
    corpus.signatures.reserve(params.apps);

    for (std::size_t i = 0; i < params.apps; ++i) {
        AsrSignature sig;
        sig.app = "synth.app" + padded(i, 5);

        const double label_draw = rng.next_unit();
        if (label_draw < params.p_malware) {
            sig.label = Label::Malware;
        } else if (label_draw < params.p_malware + params.p_unwanted) {
            sig.label = Label::Unwanted;
        } else {
            sig.label = Label::Clean;
        }

        if (rng.chance(params.p_sensitive)) {
            sig.permissions.insert(kSensitivePool[rng.below(kSensitivePool.size())]);
            if (rng.chance(0.4)) {
                sig.permissions.insert(kSensitivePool[rng.below(kSensitivePool.size())]);
            }
        }
        if (rng.chance(params.p_outside)) {
            sig.permissions.insert("INTERNET");
            if (rng.chance(0.15)) {
                sig.permissions.insert(kOutsidePool[rng.below(kOutsidePool.size())]);
            }
        }
        if (rng.chance(params.p_money)) {
            sig.permissions.insert(kMoneyPool[rng.below(kMoneyPool.size())]);
        }
        if (rng.chance(params.p_control)) {
            sig.permissions.insert(kControlPool[rng.below(kControlPool.size())]);
            if (rng.chance(0.3)) {
                sig.permissions.insert(kControlPool[rng.below(kControlPool.size())]);
            }
        }

        auto draw_intent = [&]() -> Channel {
            if (rng.chance(params.p_dynamic)) {
                return Channel{ChannelKind::Intent, pool_dynamic(rng.below(dynamic_pool)),
                               true};
            }
            return Channel{ChannelKind::Intent, pool_intent(rng.below(intent_pool)), false};
        };
        if (rng.chance(params.p_send_intent)) {
            const std::size_t count = 1 + rng.below(3);
            for (std::size_t c = 0; c < count; ++c) sig.sends.insert(draw_intent());
        }
        if (rng.chance(params.p_recv_intent)) {
            const std::size_t count = 1 + rng.below(3);
            for (std::size_t c = 0; c < count; ++c) sig.receives.insert(draw_intent());
        }

        // High-frequency actions shared across much of the corpus; these are
        // what the curated common-intent list is meant to suppress.
        if (rng.chance(0.25)) {
            sig.sends.insert(Channel{ChannelKind::Intent, "android.intent.action.VIEW", false});
        }
        if (rng.chance(0.20)) {
            sig.receives.insert(
                Channel{ChannelKind::Intent, "android.intent.action.VIEW", false});
        }
        if (rng.chance(0.15)) {
            sig.sends.insert(Channel{ChannelKind::Intent, "android.intent.action.SEND", false});
        }
        if (rng.chance(0.10)) {
            sig.receives.insert(
                Channel{ChannelKind::Intent, "android.intent.action.SEND", false});
        }

        if (rng.chance(params.p_shared_prefs)) {
            sig.sends.insert(
                Channel{ChannelKind::SharedPrefs, pool_prefs(rng.below(prefs_pool)), false});
        }
        if (rng.chance(params.p_shared_prefs)) {
            sig.receives.insert(
                Channel{ChannelKind::SharedPrefs, pool_prefs(rng.below(prefs_pool)), false});
        }

        if (rng.chance(params.p_ext_write)) {
            sig.sends.insert(Channel::external());
            sig.permissions.insert("WRITE_EXTERNAL_STORAGE");
        }
        if (rng.chance(params.p_ext_read)) {
            sig.receives.insert(Channel::external());
            sig.permissions.insert("READ_EXTERNAL_STORAGE");
        }

        corpus.signatures.push_back(std::move(sig));
    }

    const std::vector<std::string>& trio = default_resources();

    for (std::size_t k = 0; k < params.planted_pairs; ++k) {
        AsrSignature& head = corpus.signatures[2 * k];
        AsrSignature& tail = corpus.signatures[2 * k + 1];
        const Channel channel{ChannelKind::Intent, "synth.plant.p" + padded(k, 3), false};
        const std::string& resource = trio[k % trio.size()];
        head.permissions.insert(resource);
        head.sends.insert(channel);
        tail.receives.insert(channel);
        tail.permissions.insert("INTERNET");
        corpus.plants.push_back(
            PlantRecord{"info_pair", resource, {head.app, tail.app}, {channel}});
    }

    for (std::size_t t = 0; t < params.planted_triplets; ++t) {
        const std::size_t base = params.apps - 3 * (t + 1);
        AsrSignature& head = corpus.signatures[base];
        AsrSignature& middle = corpus.signatures[base + 1];
        AsrSignature& tail = corpus.signatures[base + 2];
        const Channel first{ChannelKind::Intent, "synth.plant.t" + padded(t, 3) + ".hop1",
                            false};
        const Channel second{ChannelKind::SharedPrefs,
                             "synth.plant.t" + padded(t, 3) + ".hop2", false};
        const std::string& resource = trio[t % trio.size()];
        head.permissions.insert(resource);
        head.sends.insert(first);
        middle.receives.insert(first);
        middle.sends.insert(second);
        tail.receives.insert(second);
        tail.permissions.insert("INTERNET");
        corpus.plants.push_back(PlantRecord{
            "info_triplet", resource, {head.app, middle.app, tail.app}, {first, second}});
    }

    std::sort(corpus.signatures.begin(), corpus.signatures.end(),
              [](const AsrSignature& a, const AsrSignature& b) { return a.app < b.app; });
    return corpus;
}

std::string plants_to_json(const std::vector<PlantRecord>& plants) {
    nlohmann::json doc;
    nlohmann::json rows = nlohmann::json::array();
    for (const PlantRecord& plant : plants) {
        nlohmann::json row;
        row["kind"] = plant.kind;
        row["resource"] = plant.resource;
        row["apps"] = plant.apps;
        nlohmann::json channels = nlohmann::json::array();
        for (const Channel& channel : plant.channels) {
            nlohmann::json value;
            value["dynamic"] = channel.dynamic;
            value["kind"] = to_string(channel.kind);
            value["name"] = channel.name;
            channels.push_back(std::move(value));
        }
        row["channels"] = std::move(channels);
        rows.push_back(std::move(row));
    }
    doc["plants"] = std::move(rows);
    return doc.dump(2) + "\n";
}

}  // namespace colpot
