#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <fstream>

#include <json.hpp>

#include "colpot/corpus_stats.hpp"
#include "support/test_oracles.hpp"

using namespace colpot;
namespace fs = std::filesystem;

namespace {

struct CliResult {
    int code{-1};
    std::string out;
    std::string err;
};

fs::path fresh_dir(const std::string& tag) {
    static int counter = 0;
    const fs::path dir = fs::temp_directory_path() /
                         ("colpot_test_" + tag + "_" + std::to_string(++counter));
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

CliResult run_cli(const std::string& args) {
    const fs::path dir = fs::temp_directory_path() / "colpot_cli_io";
    fs::create_directories(dir);
    static int counter = 0;
    const fs::path out_path = dir / ("out" + std::to_string(++counter) + ".txt");
    const fs::path err_path = dir / ("err" + std::to_string(counter) + ".txt");

    const std::string command = std::string(COLPOT_CLI_PATH) + " " + args + " > " +
                                out_path.string() + " 2> " + err_path.string();
    const int raw = std::system(command.c_str());

    CliResult result;
    result.code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    result.out = testing::read_file(out_path.string());
    result.err = testing::read_file(err_path.string());
    fs::remove(out_path);
    fs::remove(err_path);
    return result;
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream stream(path, std::ios::binary);
    stream << content;
}

std::string validation_dir() { return testing::fixture_dir() + "/validation"; }

}  // namespace

TEST_CASE("cli: ingest normalizes a signature directory") {
    const fs::path dir = fresh_dir("ingest");
    const fs::path out = dir / "store.ndjson";
    const auto result = run_cli("ingest --input " + validation_dir() + " --out " + out.string());
    CHECK(result.code == 0);
    CHECK(result.err.find("ingested 11 signatures") != std::string::npos);

    const std::string ndjson = testing::read_file(out.string());
    CHECK(std::count(ndjson.begin(), ndjson.end(), '\n') == 11);
    // Canonical: reserializing what we parsed reproduces the bytes.
    std::istringstream stream(ndjson);
    std::string line;
    std::string previous_app;
    while (std::getline(stream, line)) {
        const auto sig = parse_signature_json(line);
        CHECK(serialize_signature(sig) == line);
        CHECK(previous_app < sig.app);
        previous_app = sig.app;
    }
    fs::remove_all(dir);
}

TEST_CASE("cli: ingest reports every bad file and fails") {
    const fs::path dir = fresh_dir("ingest_bad");
    write_file(dir / "good.json", R"({"app":"ok.app"})");
    write_file(dir / "broken1.json", R"({"app":42})");
    write_file(dir / "broken2.json", R"({"app":"x","sends":[{"name":"y"}]})");
    const auto result = run_cli("ingest --input " + dir.string());
    CHECK(result.code == 2);
    CHECK(result.err.find("broken1.json") != std::string::npos);
    CHECK(result.err.find("broken2.json") != std::string::npos);
    CHECK(result.err.find("sends[0].kind") != std::string::npos);
    fs::remove_all(dir);
}

TEST_CASE("cli: ingest rejects duplicate app ids") {
    const fs::path dir = fresh_dir("ingest_dup");
    write_file(dir / "a.json", R"({"app":"same.app"})");
    write_file(dir / "b.json", R"({"app":"same.app"})");
    const auto result = run_cli("ingest --input " + dir.string());
    CHECK(result.code == 2);
    CHECK(result.err.find("duplicate app id") != std::string::npos);
    fs::remove_all(dir);
}

TEST_CASE("cli: ingest warns about unknown keys") {
    const fs::path dir = fresh_dir("ingest_warn");
    write_file(dir / "a.json", R"({"app":"w.app","odd_key":1})");
    const auto result = run_cli("ingest --input " + dir.string());
    CHECK(result.code == 0);
    CHECK(result.err.find("odd_key") != std::string::npos);
    fs::remove_all(dir);
}

TEST_CASE("cli: analyze matches the library and is thread-stable") {
    const fs::path dir = fresh_dir("analyze");
    const fs::path f1 = dir / "f1.ndjson";
    const fs::path f4 = dir / "f4.ndjson";

    const auto r1 = run_cli("analyze --input " + validation_dir() + " --max-len 3 --threads 1 --out " + f1.string());
    const auto r4 = run_cli("analyze --input " + validation_dir() + " --max-len 3 --threads 4 --out " + f4.string());
    REQUIRE(r1.code == 0);
    REQUIRE(r4.code == 0);

    const std::string one = testing::read_file(f1.string());
    CHECK(one == testing::read_file(f4.string()));

    const auto expected = findings_to_ndjson(threat_findings(testing::validation_store(), 3));
    CHECK(one == expected);
    fs::remove_all(dir);
}

TEST_CASE("cli: analyze accepts filters and custom resources") {
    const fs::path dir = fresh_dir("analyze_opts");
    const fs::path common = dir / "common.txt";
    write_file(common, "android.intent.action.SEND\n");

    const auto result =
        run_cli("analyze --input " + validation_dir() + " --filters common=" + common.string() +
                " --drop-external-storage --resources READ_CONTACTS --max-len 2");
    CHECK(result.code == 0);

    // Compute the same thing through the library.
    FilterSet filters;
    filters.common_intents = {"android.intent.action.SEND"};
    filters.drop_external_storage = true;
    const FactStore store = testing::validation_store(&filters);
    const auto expected = findings_to_ndjson(run_analysis(store, {"READ_CONTACTS"}, 2));
    CHECK(result.out == expected);
    fs::remove_all(dir);
}

TEST_CASE("cli: validation failures exit with 2") {
    CHECK(run_cli("analyze --input /nonexistent/path/xyz").code == 2);
    CHECK(run_cli("analyze --input " + validation_dir() + " --max-len 1").code == 2);
    CHECK(run_cli("analyze --input " + validation_dir() + " --filters bogus").code == 2);
    CHECK(run_cli("analyze --input " + validation_dir() + " --filters color=red").code == 2);
    CHECK(run_cli("nonsense-subcommand").code == 2);
    CHECK(run_cli("analyze").code == 2);               // missing --input
    CHECK(run_cli("analyze --no-such-flag").code == 2);
    CHECK(run_cli("").code == 2);                      // subcommand required
    CHECK(run_cli("--help").code == 0);
    CHECK(run_cli("synth --seed 1 --apps 10 --plant-pairs 9").code == 2);
}

TEST_CASE("cli: build-filters derives trusted intents with ratios") {
    const fs::path dir = fresh_dir("filters");
    // Corpus: "hub.action" sent by 5 clean apps, received by 1; "quiet" 1:1.
    std::string ndjson;
    for (int i = 0; i < 5; ++i) {
        AsrSignature sig;
        sig.app = "clean.sender" + std::to_string(i);
        sig.label = Label::Clean;
        sig.sends.insert(Channel{ChannelKind::Intent, "hub.action", false});
        if (i == 0) sig.sends.insert(Channel{ChannelKind::Intent, "quiet.action", false});
        ndjson += serialize_signature(sig) + "\n";
    }
    AsrSignature receiver;
    receiver.app = "clean.receiver";
    receiver.label = Label::Clean;
    receiver.receives.insert(Channel{ChannelKind::Intent, "hub.action", false});
    receiver.receives.insert(Channel{ChannelKind::Intent, "quiet.action", false});
    ndjson += serialize_signature(receiver) + "\n";
    AsrSignature mal;
    mal.app = "mal.sender";
    mal.label = Label::Malware;
    mal.sends.insert(Channel{ChannelKind::Intent, "quiet.action", false});
    for (int i = 0; i < 9; ++i) {
        mal.sends.insert(Channel{ChannelKind::Intent, "mal.hub", false});
    }
    ndjson += serialize_signature(mal) + "\n";

    const fs::path corpus = dir / "corpus.ndjson";
    const fs::path out = dir / "trusted.txt";
    write_file(corpus, ndjson);

    const auto result =
        run_cli("build-filters --input " + corpus.string() + " --out " + out.string());
    REQUIRE(result.code == 0);
    const auto trusted = parse_intent_list(testing::read_file(out.string()));
    // hub.action: 5/1 clears 5; quiet.action: 1/1 does not; mal.hub is not
    // clean-labeled so it is not even considered.
    CHECK(trusted == std::set<std::string>{"hub.action"});
    CHECK(testing::read_file(out.string()).find("senders=5") != std::string::npos);

    const auto all = run_cli("build-filters --input " + corpus.string() +
                             " --all-labels --threshold 0.5");
    CHECK(all.code == 0);
    CHECK(all.out.find("mal.hub") != std::string::npos);

    CHECK(run_cli("build-filters --input " + corpus.string() + " --threshold x").code == 2);
    fs::remove_all(dir);
}

TEST_CASE("cli: report emits JSON and optional CSVs") {
    const fs::path dir = fresh_dir("report");
    const fs::path out = dir / "report.json";
    const fs::path channels = dir / "channels.csv";
    const fs::path timings = dir / "timings.csv";

    const auto result = run_cli("report --input " + validation_dir() + " --out " + out.string() +
                                " --channels-csv " + channels.string() + " --timings-csv " +
                                timings.string());
    REQUIRE(result.code == 0);

    const auto doc = nlohmann::json::parse(testing::read_file(out.string()));
    CHECK(doc["app_count"] == 11);
    CHECK(doc["collusion_matrix"]["cells"].size() == 18);

    CHECK(testing::read_file(channels.string())
              .starts_with("label,kind,direction,unique_channels\n"));
    CHECK(testing::read_file(timings.string()).starts_with("app,max_len,microseconds,findings\n"));

    // Stdout report runs too, and the JSON is thread-stable.
    const auto stdout_run = run_cli("report --input " + validation_dir() + " --threads 1");
    const auto stdout_run4 = run_cli("report --input " + validation_dir() + " --threads 4");
    CHECK(stdout_run.code == 0);
    CHECK(stdout_run.out == stdout_run4.out);
    fs::remove_all(dir);
}

TEST_CASE("cli: synth is reproducible and self-consistent") {
    const fs::path dir = fresh_dir("synth");
    const fs::path c1 = dir / "c1.ndjson";
    const fs::path c2 = dir / "c2.ndjson";
    const fs::path plants = dir / "plants.json";

    const auto r1 = run_cli("synth --seed 11 --apps 60 --plant-pairs 3 --out " + c1.string() +
                            " --plants-out " + plants.string());
    const auto r2 = run_cli("synth --seed 11 --apps 60 --plant-pairs 3 --out " + c2.string());
    REQUIRE(r1.code == 0);
    REQUIRE(r2.code == 0);
    CHECK(testing::read_file(c1.string()) == testing::read_file(c2.string()));

    const auto plant_doc = nlohmann::json::parse(testing::read_file(plants.string()));
    CHECK(plant_doc["plants"].size() == 3);

    // The generated corpus feeds straight back into ingest.
    const auto ingest = run_cli("ingest --input " + c1.string());
    CHECK(ingest.code == 0);
    CHECK(ingest.err.find("ingested 60 signatures") != std::string::npos);
    fs::remove_all(dir);
}
