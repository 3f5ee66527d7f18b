#include <doctest.h>

#include <json.hpp>

#include "colpot/corpus_stats.hpp"
#include "support/test_oracles.hpp"

using namespace colpot;

namespace {

std::string fixture_app(int n) {
    return "com.example.app" + std::string(n < 10 ? "0" : "") + std::to_string(n);
}

using CellMap = std::map<std::pair<int, int>, std::set<Threat>>;

constexpr Threat I = Threat::InformationTheft;
constexpr Threat M = Threat::MoneyTheft;
constexpr Threat S = Threat::ServiceMisuse;

// The expected pairwise matrix of the 11-app validation corpus at
// max_len = 3 with no filters.
CellMap expected_cells() {
    return CellMap{
        {{1, 2}, {I}},  {{1, 10}, {I}}, {{1, 11}, {I}}, {{3, 4}, {I, M}}, {{3, 5}, {S}},
        {{3, 6}, {S}},  {{5, 3}, {I}},  {{5, 10}, {I}}, {{5, 11}, {I}},   {{6, 3}, {I}},
        {{6, 4}, {I}},  {{7, 2}, {I}},  {{7, 8}, {I}},  {{7, 9}, {I}},    {{7, 10}, {I}},
        {{7, 11}, {I}}, {{8, 9}, {I}},  {{10, 11}, {I}}};
}

void check_matrix(const CollusionMatrix& matrix, const CellMap& expected) {
    REQUIRE(matrix.apps.size() == 11);
    CHECK(matrix.non_empty_cells() == expected.size());
    for (int from = 1; from <= 11; ++from) {
        for (int to = 1; to <= 11; ++to) {
            const auto it = expected.find({from, to});
            const std::set<Threat> want = it == expected.end() ? std::set<Threat>{} : it->second;
            CAPTURE(from);
            CAPTURE(to);
            CHECK(matrix.cell(fixture_app(from), fixture_app(to)) == want);
        }
    }
}

}  // namespace

TEST_CASE("golden pairwise matrix of the validation corpus") {
    const FactStore store = testing::validation_store();
    check_matrix(build_collusion_matrix(store, 3), expected_cells());
}

TEST_CASE("three-app findings vanish at max_len 2") {
    const FactStore store = testing::validation_store();
    CellMap expected = expected_cells();
    // These three cells exist only through a middleman.
    expected.erase({5, 3});
    expected.erase({6, 4});
    expected.erase({7, 9});
    check_matrix(build_collusion_matrix(store, 2), expected);
}

TEST_CASE("matrix helpers") {
    const FactStore store = testing::validation_store();
    const auto matrix = build_collusion_matrix(store, 3);
    CHECK_THROWS_AS((void)matrix.cell("ghost", fixture_app(1)), std::out_of_range);
    const std::string art = matrix.render();
    CHECK(art.find("1 = com.example.app01") != std::string::npos);
    CHECK(art.find('I') != std::string::npos);
}

TEST_CASE("report aggregates label, channel, and potential statistics") {
    const FactStore store = testing::validation_store();
    const CorpusReport report = build_report(store, default_resources(), 3);

    CHECK(report.app_count == 11);
    CHECK(report.label_counts.at(Label::Malware) == 9);
    CHECK(report.label_counts.at(Label::Clean) == 2);
    CHECK_FALSE(report.label_counts.contains(Label::Unwanted));

    SUBCASE("distinct channels per label, kind, and direction") {
        auto row = [&](Label label, ChannelKind kind, bool send) -> std::size_t {
            for (const ChannelKindCount& r : report.channel_kind_counts) {
                if (r.label == label && r.kind == kind && r.send == send) {
                    return r.unique_channels;
                }
            }
            FAIL("row not found");
            return 0;
        };
        CHECK(row(Label::Malware, ChannelKind::Intent, true) == 8);
        CHECK(row(Label::Malware, ChannelKind::SharedPrefs, true) == 1);
        CHECK(row(Label::Malware, ChannelKind::ExternalStorage, true) == 1);
        CHECK(row(Label::Clean, ChannelKind::Intent, true) == 1);
        CHECK(row(Label::Clean, ChannelKind::SharedPrefs, false) == 0);
        CHECK(row(Label::Clean, ChannelKind::Intent, false) == 2);
        // 2 labels x 2 directions x 3 kinds.
        CHECK(report.channel_kind_counts.size() == 12);
    }

    SUBCASE("top channels rank by app count") {
        // Among malware senders, android.intent.action.SEND is used by
        // apps 1, 5 and 7; every other send channel has one user.
        REQUIRE_FALSE(report.top_channels.empty());
        const TopChannel& first = report.top_channels.front();
        CHECK(first.label == Label::Malware);
        CHECK(first.send);
        CHECK(first.channel.name == "android.intent.action.SEND");
        CHECK(first.apps == 3);
    }

    SUBCASE("resource potential percentages") {
        auto row = [&](Label label, const std::string& resource) -> const ResourcePotential& {
            for (const ResourcePotential& r : report.potential) {
                if (r.label == label && r.resource == resource) return r;
            }
            static ResourcePotential missing;
            FAIL("row not found");
            return missing;
        };
        // Malware heads with READ_CONTACTS findings: app05 and app07 of 9.
        CHECK(row(Label::Malware, "READ_CONTACTS").apps_with_findings == 2);
        CHECK(row(Label::Malware, "READ_CONTACTS").apps_total == 9);
        CHECK(row(Label::Malware, "READ_CONTACTS").pct() == doctest::Approx(22.22));
        // GET_ACCOUNTS: app06 heads findings; app10 does among clean apps.
        CHECK(row(Label::Malware, "GET_ACCOUNTS").apps_with_findings == 1);
        CHECK(row(Label::Clean, "GET_ACCOUNTS").apps_with_findings == 1);
        CHECK(row(Label::Clean, "GET_ACCOUNTS").pct() == doctest::Approx(50.0));
        // app04 holds READ_SMS but sends nothing.
        CHECK(row(Label::Malware, "READ_SMS").apps_with_findings == 0);
        CHECK(report.potential.size() == 6);  // 2 labels x 3 resources
    }

    SUBCASE("per-app distinct set counts") {
        auto row = [&](const std::string& app, const std::string& resource,
                       std::size_t size) -> std::size_t {
            for (const AppSetCount& r : report.per_app_set_counts) {
                if (r.app == app && r.resource == resource && r.set_size == size) {
                    return r.sets;
                }
            }
            return 0;
        };
        // app07 heads two-app extraction sets {7,2} {7,8} {7,10} {7,11}
        // and three-app sets {7,8,9} {7,10,11}.
        CHECK(row(fixture_app(7), "READ_CONTACTS", 2) == 4);
        CHECK(row(fixture_app(7), "READ_CONTACTS", 3) == 2);
        // app05 heads {5,10} and {5,11} directly, {3,5,6} and {5,10,11}
        // through a middleman.
        CHECK(row(fixture_app(5), "READ_CONTACTS", 2) == 2);
        CHECK(row(fixture_app(5), "READ_CONTACTS", 3) == 2);
    }

    SUBCASE("communication edges for small corpora") {
        REQUIRE(report.has_matrix);
        CHECK(report.comm_edges.size() == 17);
        const auto edge = std::find_if(
            report.comm_edges.begin(), report.comm_edges.end(), [&](const CommEdge& e) {
                return e.from == fixture_app(8) && e.to == fixture_app(1);
            });
        REQUIRE(edge != report.comm_edges.end());
        CHECK(edge->channels == std::vector<Channel>{Channel::external()});
    }
}

TEST_CASE("report JSON is deterministic and structured") {
    const FactStore store = testing::validation_store();
    const std::string one = report_to_json(build_report(store, default_resources(), 3, 1));
    const std::string four = report_to_json(build_report(store, default_resources(), 3, 4));
    CHECK(one == four);

    const auto doc = nlohmann::json::parse(one);
    CHECK(doc["app_count"] == 11);
    CHECK(doc["max_len"] == 3);
    CHECK(doc["label_counts"]["malware"] == 9);
    CHECK(doc["collusion_matrix"]["cells"].size() == 18);
    CHECK(doc["communication_matrix"]["edges"].size() == 17);
    CHECK(doc["resources"].size() == 3);
    CHECK(doc["findings_total"].get<std::size_t>() > 18);
}

TEST_CASE("large corpora omit the matrices") {
    std::vector<AsrSignature> sigs;
    for (int i = 0; i < 60; ++i) {
        AsrSignature sig;
        sig.app = "bulk" + std::to_string(i);
        sigs.push_back(sig);
    }
    const FactStore store = FactStore::build(sigs, ActionMapping::builtin_default());
    const CorpusReport report = build_report(store, default_resources(), 3);
    CHECK_FALSE(report.has_matrix);
    const auto doc = nlohmann::json::parse(report_to_json(report));
    CHECK(doc["collusion_matrix"].is_null());
    CHECK(doc["communication_matrix"].is_null());
}

TEST_CASE("findings NDJSON shape") {
    const FactStore store = testing::validation_store();
    const auto findings = threat_findings(store, 3);
    const std::string ndjson = findings_to_ndjson(findings);

    std::size_t lines = 0;
    std::istringstream stream(ndjson);
    std::string line;
    std::string previous;
    while (std::getline(stream, line)) {
        ++lines;
        const auto doc = nlohmann::json::parse(line);
        CHECK(doc.contains("apps"));
        CHECK(doc.contains("channels"));
        CHECK(doc.contains("threat"));
        CHECK(doc.contains("c2c_capable"));
        CHECK(doc["apps"].size() == doc["channels"].size() + 1);
        previous = line;
    }
    CHECK(lines == findings.size());

    // resource appears only on resource-query findings.
    const auto first = nlohmann::json::parse(ndjson.substr(0, ndjson.find('\n')));
    CHECK(first["threat"] == "information_theft");
}

TEST_CASE("CSV outputs") {
    const FactStore store = testing::validation_store();
    std::vector<QueryTiming> timings;
    const CorpusReport report = build_report(store, default_resources(), 3, 2, &timings);

    const std::string channels = channel_counts_csv(report);
    CHECK(channels.starts_with("label,kind,direction,unique_channels\n"));
    CHECK(std::count(channels.begin(), channels.end(), '\n') == 13);  // header + 12 rows
    CHECK(channels.find("malware,intent,send,8") != std::string::npos);

    REQUIRE(timings.size() == 11);
    const std::string csv = timings_csv(timings);
    CHECK(csv.starts_with("app,max_len,microseconds,findings\n"));
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 12);
    CHECK(csv.find("com.example.app07,3,") != std::string::npos);
}
