#include <doctest.h>

#include "colpot/fact_store.hpp"
#include "support/test_oracles.hpp"

using namespace colpot;

namespace {

std::string fixture_app(int n) {
    return "com.example.app" + std::string(n < 10 ? "0" : "") + std::to_string(n);
}

}  // namespace

TEST_CASE("store indexes the validation corpus") {
    const FactStore store = testing::validation_store();
    REQUIRE(store.apps().size() == 11);
    CHECK(store.apps().front() == "com.example.app01");
    CHECK(store.apps().back() == "com.example.app11");
    CHECK(std::is_sorted(store.apps().begin(), store.apps().end()));
    CHECK(store.has_app("com.example.app05"));
    CHECK_FALSE(store.has_app("com.example.app99"));

    CHECK(store.actions("com.example.app03") ==
          std::set<HighLevelAction>{HighLevelAction::SensitiveInfo,
                                    HighLevelAction::InformationOutside});

    const auto& doc_drop =
        store.channels().at(Channel{ChannelKind::SharedPrefs, "doc_drop", false});
    CHECK(doc_drop.senders == std::vector<std::string>{"com.example.app01"});
    CHECK(doc_drop.receivers == std::vector<std::string>{"com.example.app02"});
}

TEST_CASE("communicate follows send/receive matches") {
    const FactStore store = testing::validation_store();
    CHECK(store.communicate(fixture_app(1), fixture_app(2)) ==
          std::set<Channel>{Channel{ChannelKind::SharedPrefs, "doc_drop", false}});
    CHECK(store.communicate(fixture_app(2), fixture_app(1)).empty());
    CHECK(store.communicate(fixture_app(7), fixture_app(8)) ==
          std::set<Channel>{Channel{ChannelKind::Intent, "contacts.payload", false}});
    CHECK(store.communicate(fixture_app(8), fixture_app(9)) ==
          std::set<Channel>{Channel::external()});
    CHECK(store.communicate(fixture_app(3), fixture_app(3)).empty());
    CHECK_THROWS_AS((void)store.communicate("nope", fixture_app(1)), std::out_of_range);
    CHECK_THROWS_AS((void)store.actions("nope"), std::out_of_range);
}

TEST_CASE("out edges expose per-app traversal structure") {
    const FactStore store = testing::validation_store();
    const auto& edges = store.out_edges(fixture_app(7));
    REQUIRE(edges.size() == 3);  // contacts.payload, SEND, upload.text
    std::set<std::string> names;
    for (const auto& edge : edges) names.insert(edge.channel.name);
    CHECK(names == std::set<std::string>{"contacts.payload", "android.intent.action.SEND",
                                         "upload.text"});
    // app02 sends nothing, so it has no out edges.
    CHECK(store.out_edges(fixture_app(2)).empty());
}

TEST_CASE("the dynamic flag never splits a channel") {
    AsrSignature sender;
    sender.app = "a";
    sender.sends.insert(Channel{ChannelKind::Intent, "CG:shared", false});  // inconsistent flag
    AsrSignature receiver;
    receiver.app = "b";
    receiver.receives.insert(Channel{ChannelKind::Intent, "CG:shared", true});

    const FactStore store =
        FactStore::build({sender, receiver}, ActionMapping::builtin_default());
    const auto channels = store.communicate("a", "b");
    REQUIRE(channels.size() == 1);
    // Normalized: a CG: name is dynamic no matter what the input claimed.
    CHECK(channels.begin()->dynamic);

    // And a non-CG name is not.
    AsrSignature s2 = sender, r2 = receiver;
    s2.sends = {Channel{ChannelKind::Intent, "plain", true}};
    r2.receives = {Channel{ChannelKind::Intent, "plain", false}};
    const FactStore store2 = FactStore::build({s2, r2}, ActionMapping::builtin_default());
    REQUIRE(store2.communicate("a", "b").size() == 1);
    CHECK_FALSE(store2.communicate("a", "b").begin()->dynamic);
}

TEST_CASE("duplicate and empty app ids are rejected") {
    AsrSignature a;
    a.app = "same";
    CHECK_THROWS_AS((void)FactStore::build({a, a}, ActionMapping::builtin_default()),
                    ValidationError);
    AsrSignature blank;
    CHECK_THROWS_AS((void)FactStore::build({blank}, ActionMapping::builtin_default()),
                    ValidationError);
}

TEST_CASE("filters suppress facts at build time") {
    FilterSet filters;
    filters.common_intents = {"android.intent.action.SEND"};

    const FactStore unfiltered = testing::validation_store();
    const FactStore filtered = testing::validation_store(&filters);

    CHECK(filtered.apps() == unfiltered.apps());  // apps always survive
    CHECK(unfiltered.communicate(fixture_app(1), fixture_app(10)).size() == 1);
    CHECK(filtered.communicate(fixture_app(1), fixture_app(10)).empty());
    // Unrelated channels are untouched.
    CHECK(filtered.communicate(fixture_app(7), fixture_app(8)).size() == 1);
    CHECK(filtered.fact_count() < unfiltered.fact_count());
    CHECK_FALSE(
        filtered.channels().contains(Channel{ChannelKind::Intent,
                                             "android.intent.action.SEND", false}));
}

TEST_CASE("filtered facts are a subset across random corpora") {
    for (std::uint64_t seed = 100; seed < 130; ++seed) {
        const auto sigs = testing::random_corpus(seed);
        const FilterSet filters = testing::random_filter_set(seed * 31 + 1, sigs);
        const FactStore full = FactStore::build(sigs, ActionMapping::builtin_default());
        const FactStore cut =
            FactStore::build(sigs, ActionMapping::builtin_default(), &filters);
        CAPTURE(seed);
        CHECK(cut.fact_count() <= full.fact_count());
        for (const auto& [channel, facts] : cut.channels()) {
            REQUIRE(full.channels().contains(channel));
            const auto& full_facts = full.channels().at(channel);
            CHECK(facts.senders == full_facts.senders);
            CHECK(facts.receivers == full_facts.receivers);
        }
    }
}
