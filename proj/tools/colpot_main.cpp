// colpot: collusion-potential analysis over app access/send/receive
// signatures. Subcommands: ingest, analyze, build-filters, report, synth.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "colpot/corpus_stats.hpp"
#include "colpot/synth.hpp"

namespace fs = std::filesystem;

namespace {

// Raised after the error has already been written to stderr.
struct ExitWith {
    int code;
};

std::string read_file(const fs::path& path) {
    std::ifstream stream(path, std::ios::binary);
    if (!stream) {
        throw colpot::ValidationError("cannot read file \"" + path.string() + "\"");
    }
    std::ostringstream buffer;
    buffer << stream.rdbuf();
    return buffer.str();
}

void write_output(const std::string& out_path, const std::string& content) {
    if (out_path.empty()) {
        std::cout << content;
        return;
    }
    std::ofstream stream(out_path, std::ios::binary);
    if (!stream || !(stream << content)) {
        throw colpot::ValidationError("cannot write file \"" + out_path + "\"");
    }
}

struct LoadResult {
    std::vector<colpot::AsrSignature> signatures;
    std::vector<std::string> errors;
    std::vector<std::string> warnings;
};

void parse_signature_text(const std::string& text, const std::string& origin,
                          LoadResult& result) {
    std::vector<std::string> warnings;
    try {
        result.signatures.push_back(colpot::parse_signature_json(text, &warnings));
    } catch (const colpot::ParseError& e) {
        result.errors.push_back(origin + ": " + e.what());
    }
    for (const std::string& warning : warnings) {
        result.warnings.push_back(origin + ": " + warning);
    }
}

// `input` may be a directory of one-object-per-file .json signatures or a
// newline-delimited JSON file with one signature per line.
LoadResult load_signatures(const std::string& input) {
    LoadResult result;
    const fs::path path(input);
    if (fs::is_directory(path)) {
        std::vector<fs::path> files;
        for (const auto& entry : fs::directory_iterator(path)) {
            if (entry.is_regular_file() && entry.path().extension() == ".json") {
                files.push_back(entry.path());
            }
        }
        std::sort(files.begin(), files.end());
        if (files.empty()) {
            throw colpot::ValidationError("no .json files in directory \"" + input + "\"");
        }
        for (const fs::path& file : files) {
            parse_signature_text(read_file(file), file.string(), result);
        }
    } else if (fs::is_regular_file(path)) {
        std::istringstream stream(read_file(path));
        std::string line;
        for (int line_no = 1; std::getline(stream, line); ++line_no) {
            if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
            parse_signature_text(line, input + ":line " + std::to_string(line_no), result);
        }
    } else {
        throw colpot::ValidationError("input \"" + input + "\" is not a file or directory");
    }
    return result;
}

std::vector<colpot::AsrSignature> finish_load(LoadResult result) {
    for (const std::string& warning : result.warnings) {
        std::cerr << "warning: " << warning << "\n";
    }
    if (!result.errors.empty()) {
        for (const std::string& error : result.errors) {
            std::cerr << "error: " << error << "\n";
        }
        throw ExitWith{2};
    }
    return std::move(result.signatures);
}

colpot::ActionMapping load_mapping(const std::string& mapping_path) {
    if (mapping_path.empty()) {
        return colpot::ActionMapping::builtin_default();
    }
    try {
        return colpot::ActionMapping::parse(read_file(mapping_path));
    } catch (const colpot::ParseError& e) {
        throw colpot::ParseError(e.what(), mapping_path);
    }
}

std::set<std::string> load_intent_list(const std::string& path) {
    try {
        return colpot::parse_intent_list(read_file(path));
    } catch (const colpot::ParseError& e) {
        throw colpot::ParseError(e.what(), path);
    }
}

// --filters value: comma-separated key=path pairs, keys os|trusted|common.
std::optional<colpot::FilterSet> build_filter_set(const std::string& filters_arg,
                                                  bool drop_external_storage) {
    if (filters_arg.empty() && !drop_external_storage) {
        return std::nullopt;
    }
    colpot::FilterSet filters;
    filters.drop_external_storage = drop_external_storage;
    std::istringstream stream(filters_arg);
    std::string piece;
    while (std::getline(stream, piece, ',')) {
        if (piece.empty()) continue;
        const std::size_t eq = piece.find('=');
        if (eq == std::string::npos) {
            throw colpot::ValidationError("--filters entries must look like key=path (got \"" +
                                          piece + "\")");
        }
        const std::string key = piece.substr(0, eq);
        const std::string path = piece.substr(eq + 1);
        if (key == "os") {
            filters.os_intents = load_intent_list(path);
        } else if (key == "trusted") {
            filters.trusted_intents = load_intent_list(path);
        } else if (key == "common") {
            filters.common_intents = load_intent_list(path);
        } else {
            throw colpot::ValidationError("unknown --filters key \"" + key +
                                          "\" (expected os, trusted, or common)");
        }
    }
    return filters;
}

std::vector<std::string> split_resources(const std::string& csv) {
    if (csv.empty()) {
        return colpot::default_resources();
    }
    std::vector<std::string> resources;
    std::istringstream stream(csv);
    std::string piece;
    while (std::getline(stream, piece, ',')) {
        if (!piece.empty()) resources.push_back(piece);
    }
    if (resources.empty()) {
        throw colpot::ValidationError("--resources must name at least one permission");
    }
    return resources;
}

struct AnalysisOptions {
    std::string input;
    std::string mapping;
    std::string filters_arg;
    bool drop_external_storage{false};
    int max_len{3};
    std::string resources_csv;
    unsigned threads{0};
    std::string out;
};

void add_analysis_options(CLI::App* cmd, AnalysisOptions& opts) {
    cmd->add_option("--input", opts.input,
                    "signature directory (*.json) or NDJSON file")
        ->required();
    cmd->add_option("--mapping", opts.mapping,
                    "permission-to-action table (default: built-in)");
    cmd->add_option("--filters", opts.filters_arg,
                    "channel exclusion lists, e.g. os=F1,trusted=F2,common=F3");
    cmd->add_flag("--drop-external-storage", opts.drop_external_storage,
                  "exclude the shared external-storage channel");
    cmd->add_option("--max-len", opts.max_len, "maximum apps per communication path")
        ->capture_default_str();
    cmd->add_option("--resources", opts.resources_csv,
                    "comma-separated resource permissions "
                    "(default: GET_ACCOUNTS,READ_CONTACTS,READ_SMS)");
    cmd->add_option("--threads", opts.threads, "worker threads (0 = hardware)")
        ->capture_default_str();
    cmd->add_option("--out", opts.out, "output file (default: stdout)");
}

colpot::FactStore build_store(const AnalysisOptions& opts) {
    auto signatures = finish_load(load_signatures(opts.input));
    const colpot::ActionMapping mapping = load_mapping(opts.mapping);
    const auto filters = build_filter_set(opts.filters_arg, opts.drop_external_storage);
    return colpot::FactStore::build(std::move(signatures), mapping,
                                    filters ? &*filters : nullptr);
}

void cmd_ingest(const std::string& input, const std::string& out) {
    auto signatures = finish_load(load_signatures(input));
    std::sort(signatures.begin(), signatures.end(),
              [](const colpot::AsrSignature& a, const colpot::AsrSignature& b) {
                  return a.app < b.app;
              });
    for (std::size_t i = 1; i < signatures.size(); ++i) {
        if (signatures[i].app == signatures[i - 1].app) {
            throw colpot::ValidationError("duplicate app id \"" + signatures[i].app + "\"");
        }
    }
    std::string ndjson;
    for (const colpot::AsrSignature& sig : signatures) {
        ndjson += colpot::serialize_signature(sig);
        ndjson += "\n";
    }
    write_output(out, ndjson);
    std::cerr << "ingested " << signatures.size() << " signatures\n";
}

void cmd_analyze(const AnalysisOptions& opts) {
    const colpot::FactStore store = build_store(opts);
    const auto findings = colpot::run_analysis(store, split_resources(opts.resources_csv),
                                               opts.max_len, opts.threads);
    write_output(opts.out, colpot::findings_to_ndjson(findings));
    std::cerr << "emitted " << findings.size() << " findings for " << store.apps().size()
              << " apps\n";
}

void cmd_build_filters(const std::string& input, const std::string& threshold_text,
                       bool all_labels, const std::string& out) {
    auto signatures = finish_load(load_signatures(input));
    const auto threshold = colpot::RatioThreshold::parse(threshold_text);
    const auto subset =
        all_labels ? signatures : colpot::filter_by_label(signatures, colpot::Label::Clean);
    const auto ratios = colpot::compute_intent_ratios(subset);

    std::ostringstream text;
    text << "# trusted intent actions: send/receive app ratio >= " << threshold_text << "\n";
    text << "# derived from " << subset.size() << " signatures ("
         << (all_labels ? "all labels" : "clean only") << ")\n";
    std::size_t kept = 0;
    for (const auto& [action, ratio] : ratios) {
        if (!colpot::ratio_at_least(ratio, threshold)) continue;
        text << action << "  # senders=" << ratio.senders << " receivers=" << ratio.receivers
             << "\n";
        ++kept;
    }
    write_output(out, text.str());
    std::cerr << "kept " << kept << " of " << ratios.size() << " intent actions\n";
}

void cmd_report(const AnalysisOptions& opts, const std::string& channels_csv,
                const std::string& timings_csv_path) {
    const colpot::FactStore store = build_store(opts);
    std::vector<colpot::QueryTiming> timings;
    const colpot::CorpusReport report =
        colpot::build_report(store, split_resources(opts.resources_csv), opts.max_len,
                             opts.threads, timings_csv_path.empty() ? nullptr : &timings);
    write_output(opts.out, colpot::report_to_json(report));
    if (!channels_csv.empty()) {
        write_output(channels_csv, colpot::channel_counts_csv(report));
    }
    if (!timings_csv_path.empty()) {
        write_output(timings_csv_path, colpot::timings_csv(timings));
    }
    std::cerr << "report covers " << report.app_count << " apps, "
              << report.findings.size() << " findings\n";
}

struct SynthOptions {
    std::uint64_t seed{0};
    colpot::SynthParams params;
    std::string out;
    std::string plants_out;
};

void cmd_synth(const SynthOptions& opts) {
    const colpot::SynthCorpus corpus =
        colpot::generate_synthetic_corpus(opts.seed, opts.params);
    std::string ndjson;
    for (const colpot::AsrSignature& sig : corpus.signatures) {
        ndjson += colpot::serialize_signature(sig);
        ndjson += "\n";
    }
    write_output(opts.out, ndjson);
    if (!opts.plants_out.empty()) {
        write_output(opts.plants_out, colpot::plants_to_json(corpus.plants));
    }
    std::cerr << "generated " << corpus.signatures.size() << " signatures, "
              << corpus.plants.size() << " planted structures\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"collusion-potential analysis over app access/send/receive signatures"};
    app.require_subcommand(1);

    std::string ingest_input, ingest_out;
    CLI::App* ingest = app.add_subcommand("ingest", "validate signatures, emit canonical NDJSON");
    ingest->add_option("--input", ingest_input, "signature directory or NDJSON file")
        ->required();
    ingest->add_option("--out", ingest_out, "output file (default: stdout)");
    ingest->callback([&] { cmd_ingest(ingest_input, ingest_out); });

    AnalysisOptions analyze_opts;
    CLI::App* analyze = app.add_subcommand("analyze", "enumerate collusion-potential findings");
    add_analysis_options(analyze, analyze_opts);
    analyze->callback([&] { cmd_analyze(analyze_opts); });

    std::string bf_input, bf_threshold{"5"}, bf_out;
    bool bf_all_labels = false;
    CLI::App* build_filters =
        app.add_subcommand("build-filters", "derive a trusted-intent list from ratios");
    build_filters->add_option("--input", bf_input, "signature directory or NDJSON file")
        ->required();
    build_filters
        ->add_option("--threshold", bf_threshold, "minimum send/receive app ratio")
        ->capture_default_str();
    build_filters->add_flag("--all-labels", bf_all_labels,
                            "use every signature, not only clean-labeled ones");
    build_filters->add_option("--out", bf_out, "output file (default: stdout)");
    build_filters->callback(
        [&] { cmd_build_filters(bf_input, bf_threshold, bf_all_labels, bf_out); });

    AnalysisOptions report_opts;
    std::string report_channels_csv, report_timings_csv;
    CLI::App* report = app.add_subcommand("report", "corpus statistics and matrices as JSON");
    add_analysis_options(report, report_opts);
    report->add_option("--channels-csv", report_channels_csv,
                       "also write per-label channel counts as CSV");
    report->add_option("--timings-csv", report_timings_csv,
                       "also write per-app query timings as CSV");
    report->callback([&] { cmd_report(report_opts, report_channels_csv, report_timings_csv); });

    SynthOptions synth_opts;
    CLI::App* synth = app.add_subcommand("synth", "generate a synthetic signature corpus");
    synth->add_option("--seed", synth_opts.seed, "RNG seed")->required();
    synth->add_option("--apps", synth_opts.params.apps, "corpus size")->capture_default_str();
    synth->add_option("--plant-pairs", synth_opts.params.planted_pairs,
                      "planted two-app information-theft structures");
    synth->add_option("--plant-triplets", synth_opts.params.planted_triplets,
                      "planted three-app information-theft structures");
    synth->add_option("--intent-pool", synth_opts.params.intent_pool,
                      "intent name pool size (0 = derive from corpus size)");
    synth->add_option("--prefs-pool", synth_opts.params.prefs_pool,
                      "shared-prefs name pool size (0 = derive from corpus size)");
    synth->add_option("--p-malware", synth_opts.params.p_malware, "malware label fraction");
    synth->add_option("--p-unwanted", synth_opts.params.p_unwanted, "unwanted label fraction");
    synth->add_option("--p-send-intent", synth_opts.params.p_send_intent,
                      "chance an app sends pool intents");
    synth->add_option("--p-recv-intent", synth_opts.params.p_recv_intent,
                      "chance an app receives pool intents");
    synth->add_option("--p-shared-prefs", synth_opts.params.p_shared_prefs,
                      "chance of shared-prefs use per direction");
    synth->add_option("--p-ext-write", synth_opts.params.p_ext_write,
                      "chance an app writes external storage");
    synth->add_option("--p-ext-read", synth_opts.params.p_ext_read,
                      "chance an app reads external storage");
    synth->add_option("--p-dynamic", synth_opts.params.p_dynamic,
                      "chance an intent fact uses a dynamic name");
    synth->add_option("--p-sensitive", synth_opts.params.p_sensitive,
                      "chance of sensitive-data permissions");
    synth->add_option("--p-outside", synth_opts.params.p_outside,
                      "chance of network permissions");
    synth->add_option("--p-money", synth_opts.params.p_money,
                      "chance of money-spending permissions");
    synth->add_option("--p-control", synth_opts.params.p_control,
                      "chance of service-control permissions");
    synth->add_option("--out", synth_opts.out, "output file (default: stdout)");
    synth->add_option("--plants-out", synth_opts.plants_out,
                      "write planted ground truth as JSON");
    synth->callback([&] { cmd_synth(synth_opts); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const ExitWith& e) {
        return e.code;
    } catch (const colpot::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const colpot::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
