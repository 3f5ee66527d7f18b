// Python bindings for the collusion-potential engine. Exposed as
// colpot._core; the colpot package re-exports the public names.

#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>
#include <optional>
#include <sstream>

#include "colpot/corpus_stats.hpp"
#include "colpot/inference.hpp"
#include "colpot/synth.hpp"

namespace py = pybind11;
using namespace colpot;

namespace {

std::shared_ptr<FactStore> build_store(std::vector<AsrSignature> signatures,
                                       const ActionMapping* mapping,
                                       const FilterSet* filters) {
    const ActionMapping& table = mapping ? *mapping : ActionMapping::builtin_default();
    return std::make_shared<FactStore>(FactStore::build(std::move(signatures), table, filters));
}

std::vector<std::string> resources_or_default(
    const std::optional<std::vector<std::string>>& resources) {
    return resources ? *resources : default_resources();
}

std::string channel_repr(const Channel& channel) {
    std::ostringstream out;
    out << "Channel(kind=" << to_string(channel.kind) << ", name='" << channel.name
        << "', dynamic=" << (channel.dynamic ? "True" : "False") << ")";
    return out.str();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "App-collusion potential detection engine";

    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const ParseError& error) {
            const std::string message = error.where() + ": " + error.what();
            PyErr_SetString(PyExc_ValueError, message.c_str());
        } catch (const ValidationError& error) {
            PyErr_SetString(PyExc_ValueError, error.what());
        }
    });

    py::enum_<ChannelKind>(m, "ChannelKind")
        .value("INTENT", ChannelKind::Intent)
        .value("SHARED_PREFS", ChannelKind::SharedPrefs)
        .value("EXTERNAL_STORAGE", ChannelKind::ExternalStorage);

    py::enum_<Label>(m, "Label")
        .value("MALWARE", Label::Malware)
        .value("UNWANTED", Label::Unwanted)
        .value("CLEAN", Label::Clean)
        .value("UNLABELED", Label::Unlabeled);

    py::enum_<HighLevelAction>(m, "HighLevelAction")
        .value("SENSITIVE_INFO", HighLevelAction::SensitiveInfo)
        .value("INFORMATION_OUTSIDE", HighLevelAction::InformationOutside)
        .value("MONEY", HighLevelAction::Money)
        .value("CONTROL_SERVICE", HighLevelAction::ControlService);

    py::enum_<Threat>(m, "Threat")
        .value("INFORMATION_THEFT", Threat::InformationTheft)
        .value("MONEY_THEFT", Threat::MoneyTheft)
        .value("SERVICE_MISUSE", Threat::ServiceMisuse);

    py::class_<Channel>(m, "Channel")
        .def(py::init([](ChannelKind kind, std::string name, bool dynamic) {
                 return Channel{kind, std::move(name), dynamic};
             }),
             py::arg("kind"), py::arg("name"), py::arg("dynamic") = false)
        .def_readwrite("kind", &Channel::kind)
        .def_readwrite("name", &Channel::name)
        .def_readwrite("dynamic", &Channel::dynamic)
        .def_static("external", &Channel::external)
        .def(py::self == py::self)
        .def(py::self < py::self)
        .def("__hash__",
             [](const Channel& c) {
                 return py::hash(py::make_tuple(static_cast<int>(c.kind), c.name, c.dynamic));
             })
        .def("__repr__", &channel_repr);

    py::class_<AsrSignature>(m, "AsrSignature")
        .def(py::init<>())
        .def(py::init([](std::string app, std::set<std::string> permissions,
                         std::set<Channel> sends, std::set<Channel> receives, Label label) {
                 AsrSignature sig;
                 sig.app = std::move(app);
                 sig.permissions = std::move(permissions);
                 sig.sends = std::move(sends);
                 sig.receives = std::move(receives);
                 sig.label = label;
                 return sig;
             }),
             py::arg("app"), py::arg("permissions") = std::set<std::string>{},
             py::arg("sends") = std::set<Channel>{}, py::arg("receives") = std::set<Channel>{},
             py::arg("label") = Label::Unlabeled)
        .def_readwrite("app", &AsrSignature::app)
        .def_readwrite("permissions", &AsrSignature::permissions)
        .def_readwrite("sends", &AsrSignature::sends)
        .def_readwrite("receives", &AsrSignature::receives)
        .def_readwrite("label", &AsrSignature::label)
        .def(py::self == py::self)
        .def("__repr__",
             [](const AsrSignature& sig) { return "AsrSignature(app='" + sig.app + "')"; });

    m.def(
        "parse_signature",
        [](const std::string& text) {
            std::vector<std::string> warnings;
            AsrSignature sig = parse_signature_json(text, &warnings);
            return py::make_tuple(std::move(sig), std::move(warnings));
        },
        py::arg("json_text"),
        "Parse one signature JSON object; returns (signature, warnings).");
    m.def("serialize_signature", &serialize_signature, py::arg("signature"),
          "Canonical single-line JSON for a signature.");
    m.def("parse_manifest", [](const std::string& xml) { return parse_manifest(xml); },
          py::arg("manifest_xml"));
    m.def("merge_signature", &merge_signature, py::arg("manifest_part"), py::arg("code_facts"));
    m.def("strip_permission_prefix", &strip_permission_prefix, py::arg("permission"));

    py::class_<ActionMapping>(m, "ActionMapping")
        .def(py::init<>())
        .def_static("parse", [](const std::string& text) { return ActionMapping::parse(text); },
                    py::arg("text"))
        .def_static("builtin_default",
                    []() { return ActionMapping(ActionMapping::builtin_default()); })
        .def_static("default_text", []() { return std::string(ActionMapping::default_text()); })
        .def("add", &ActionMapping::add, py::arg("permission"), py::arg("action"))
        .def("size", &ActionMapping::size)
        .def("entries", &ActionMapping::entries);
    m.def("actions_of", &actions_of, py::arg("signature"), py::arg("mapping"));

    py::class_<FilterSet>(m, "FilterSet")
        .def(py::init<>())
        .def_readwrite("os_intents", &FilterSet::os_intents)
        .def_readwrite("trusted_intents", &FilterSet::trusted_intents)
        .def_readwrite("common_intents", &FilterSet::common_intents)
        .def_readwrite("drop_external_storage", &FilterSet::drop_external_storage);
    m.def("parse_intent_list", [](const std::string& text) { return parse_intent_list(text); },
          py::arg("text"));
    m.def("is_excluded", &is_excluded, py::arg("filters"), py::arg("channel"));
    m.def(
        "compute_intent_ratios",
        [](const std::vector<AsrSignature>& sigs) {
            std::map<std::string, std::pair<std::uint64_t, std::uint64_t>> out;
            for (const auto& [action, ratio] : compute_intent_ratios(sigs)) {
                out[action] = {ratio.senders, ratio.receivers};
            }
            return out;
        },
        py::arg("signatures"),
        "Per intent action: (distinct sender apps, distinct receiver apps).");
    m.def(
        "derive_trusted_list",
        [](const std::vector<AsrSignature>& sigs, const std::string& threshold) {
            return derive_trusted_list(sigs, RatioThreshold::parse(threshold));
        },
        py::arg("signatures"), py::arg("threshold") = "5");
    m.def("filter_by_label", &filter_by_label, py::arg("signatures"), py::arg("label"));

    py::class_<FactStore, std::shared_ptr<FactStore>>(m, "FactStore")
        .def_static("build", &build_store, py::arg("signatures"),
                    py::arg("mapping") = nullptr, py::arg("filters") = nullptr,
                    "Index a corpus; mapping defaults to the built-in table.")
        .def("apps", &FactStore::apps)
        .def("has_app", &FactStore::has_app, py::arg("app"))
        .def("signature", &FactStore::signature, py::arg("app"))
        .def("actions", &FactStore::actions, py::arg("app"))
        .def("communicate", &FactStore::communicate, py::arg("from_app"), py::arg("to_app"))
        .def("fact_count", &FactStore::fact_count);

    py::class_<CommPath>(m, "CommPath")
        .def_readonly("apps", &CommPath::apps)
        .def_readonly("channels", &CommPath::channels)
        .def(py::self == py::self)
        .def("__repr__", [](const CommPath& path) {
            std::string out = "CommPath(";
            for (std::size_t i = 0; i < path.apps.size(); ++i) {
                if (i) out += " -> ";
                out += path.apps[i];
            }
            return out + ")";
        });

    py::class_<Finding>(m, "Finding")
        .def_readonly("threat", &Finding::threat)
        .def_readonly("path", &Finding::path)
        .def_readonly("resource", &Finding::resource)
        .def_readonly("c2c_capable", &Finding::c2c_capable)
        .def(py::self == py::self)
        .def("__repr__", [](const Finding& finding) {
            std::string out = "Finding(" + to_string(finding.threat);
            if (!finding.resource.empty()) out += ", resource=" + finding.resource;
            for (const std::string& app : finding.path.apps) out += ", " + app;
            return out + ")";
        });

    m.def(
        "comm_paths",
        [](const FactStore& store, const std::string& from, const std::string& to, int max_len) {
            return comm_paths(store, from, to, max_len);
        },
        py::arg("store"), py::arg("from_app"), py::arg("to_app"), py::arg("max_len") = 3,
        "All simple communication paths from one app to another.");
    m.def("direct_threat_findings", &direct_threat_findings, py::arg("store"));
    m.def("service_misuse_findings", &service_misuse_findings, py::arg("store"),
          py::arg("max_len") = 3);
    m.def("coll_resource", &coll_resource, py::arg("store"), py::arg("permission"),
          py::arg("max_len") = 3);
    m.def("default_resources", []() { return default_resources(); });
    m.def(
        "run_analysis",
        [](const FactStore& store, const std::optional<std::vector<std::string>>& resources,
           int max_len, unsigned threads) {
            return run_analysis(store, resources_or_default(resources), max_len, threads);
        },
        py::arg("store"), py::arg("resources") = py::none(), py::arg("max_len") = 3,
        py::arg("threads") = 0,
        "Full analysis: direct rules, service-misuse paths, resource queries.");
    m.def("estimate_max_sets", &estimate_max_sets, py::arg("n"), py::arg("k"),
          "Exact C(n, k) as a decimal string.");

    m.def(
        "report_json",
        [](const FactStore& store, const std::optional<std::vector<std::string>>& resources,
           int max_len, unsigned threads) {
            return report_to_json(
                build_report(store, resources_or_default(resources), max_len, threads));
        },
        py::arg("store"), py::arg("resources") = py::none(), py::arg("max_len") = 3,
        py::arg("threads") = 0, "Deterministic corpus report as a JSON string.");
    m.def("findings_to_ndjson", &findings_to_ndjson, py::arg("findings"));

    m.def(
        "generate_synthetic_corpus",
        [](std::uint64_t seed, std::size_t apps, std::size_t planted_pairs,
           std::size_t planted_triplets) {
            SynthParams params;
            params.apps = apps;
            params.planted_pairs = planted_pairs;
            params.planted_triplets = planted_triplets;
            const SynthCorpus corpus = generate_synthetic_corpus(seed, params);
            return py::make_tuple(corpus.signatures, plants_to_json(corpus.plants));
        },
        py::arg("seed"), py::arg("apps") = 100, py::arg("planted_pairs") = 0,
        py::arg("planted_triplets") = 0,
        "Deterministic synthetic corpus; returns (signatures, plants_json).");
}
