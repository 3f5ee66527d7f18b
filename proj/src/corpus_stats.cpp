#include "colpot/corpus_stats.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace colpot {

namespace {

using nlohmann::json;

const std::vector<Label> kLabelOrder = {Label::Malware, Label::Unwanted, Label::Clean,
                                        Label::Unlabeled};
const std::vector<ChannelKind> kKindOrder = {ChannelKind::Intent, ChannelKind::SharedPrefs,
                                             ChannelKind::ExternalStorage};

constexpr std::size_t kTopChannelCount = 10;

char threat_letter(Threat threat) {
    switch (threat) {
        case Threat::InformationTheft: return 'I';
        case Threat::MoneyTheft: return 'M';
        case Threat::ServiceMisuse: return 'S';
    }
    return '?';
}

}  // namespace

std::size_t CollusionMatrix::non_empty_cells() const {
    std::size_t count = 0;
    for (const auto& row : cells) {
        for (const auto& cell : row) {
            if (!cell.empty()) ++count;
        }
    }
    return count;
}

const std::set<Threat>& CollusionMatrix::cell(const std::string& from,
                                              const std::string& to) const {
    auto locate = [this](const std::string& app) {
        auto it = std::find(apps.begin(), apps.end(), app);
        if (it == apps.end()) {
            throw std::out_of_range("unknown app id \"" + app + "\"");
        }
        return static_cast<std::size_t>(it - apps.begin());
    };
    return cells[locate(from)][locate(to)];
}

std::string CollusionMatrix::render() const {
    std::ostringstream out;
    for (std::size_t i = 0; i < apps.size(); ++i) {
        out << (i + 1) << " = " << apps[i] << "\n";
    }
    out << "     ";
    for (std::size_t j = 0; j < apps.size(); ++j) {
        out << " " << (j + 1) / 10 << (j + 1) % 10 << " ";
    }
    out << "\n";
    for (std::size_t i = 0; i < apps.size(); ++i) {
        out << " " << (i + 1) / 10 << (i + 1) % 10 << " |";
        for (std::size_t j = 0; j < apps.size(); ++j) {
            std::string mark;
            for (Threat threat : cells[i][j]) mark.push_back(threat_letter(threat));
            if (mark.empty()) mark = ".";
            mark.resize(3, ' ');
            out << " " << mark;
        }
        out << "\n";
    }
    return out.str();
}

CollusionMatrix build_collusion_matrix(const FactStore& store,
                                       const std::vector<Finding>& findings) {
    CollusionMatrix matrix;
    matrix.apps = store.apps();
    matrix.cells.assign(matrix.apps.size(),
                        std::vector<std::set<Threat>>(matrix.apps.size()));
    std::map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < matrix.apps.size(); ++i) index.emplace(matrix.apps[i], i);
    for (const Finding& finding : findings) {
        const std::size_t from = index.at(finding.path.apps.front());
        const std::size_t to = index.at(finding.path.apps.back());
        matrix.cells[from][to].insert(finding.threat);
    }
    return matrix;
}

CollusionMatrix build_collusion_matrix(const FactStore& store, int max_len) {
    return build_collusion_matrix(store, threat_findings(store, max_len));
}

double ResourcePotential::pct() const {
    if (apps_total == 0) return 0.0;
    const double raw = 100.0 * static_cast<double>(apps_with_findings) /
                       static_cast<double>(apps_total);
    return std::round(raw * 100.0) / 100.0;
}

CorpusReport build_report(const FactStore& store, const std::vector<std::string>& resources,
                          int max_len, unsigned threads, std::vector<QueryTiming>* timings) {
    CorpusReport report;
    report.app_count = store.apps().size();
    report.max_len = max_len;
    for (const std::string& resource : resources) {
        report.resources.push_back(strip_permission_prefix(resource));
    }
    report.findings = run_analysis(store, report.resources, max_len, threads, timings);

    for (const std::string& app : store.apps()) {
        ++report.label_counts[store.signature(app).label];
    }

    // Distinct channels and per-channel app counts per label slice.
    std::map<Label, std::map<bool, std::map<Channel, std::set<std::string>>>> usage;
    for (const std::string& app : store.apps()) {
        const AsrSignature& sig = store.signature(app);
        for (const Channel& channel : sig.sends) {
            usage[sig.label][true][Channel{channel.kind, channel.name,
                                           channel.name.starts_with("CG:")}]
                .insert(app);
        }
        for (const Channel& channel : sig.receives) {
            usage[sig.label][false][Channel{channel.kind, channel.name,
                                            channel.name.starts_with("CG:")}]
                .insert(app);
        }
    }
    for (Label label : kLabelOrder) {
        if (!report.label_counts.contains(label)) continue;
        for (bool send : {true, false}) {
            for (ChannelKind kind : kKindOrder) {
                ChannelKindCount row{label, kind, send, 0};
                if (usage.contains(label)) {
                    for (const auto& [channel, apps] : usage[label][send]) {
                        if (channel.kind == kind) ++row.unique_channels;
                    }
                }
                report.channel_kind_counts.push_back(row);
            }
            // Top channels for this label/direction across all kinds.
            std::vector<TopChannel> ranked;
            if (usage.contains(label)) {
                for (const auto& [channel, apps] : usage[label][send]) {
                    ranked.push_back(TopChannel{label, send, channel, apps.size()});
                }
            }
            std::sort(ranked.begin(), ranked.end(),
                      [](const TopChannel& a, const TopChannel& b) {
                          if (a.apps != b.apps) return a.apps > b.apps;
                          return a.channel < b.channel;
                      });
            if (ranked.size() > kTopChannelCount) ranked.resize(kTopChannelCount);
            report.top_channels.insert(report.top_channels.end(), ranked.begin(),
                                       ranked.end());
        }
    }

    // Heads with findings per resource, and distinct app sets per head.
    std::map<std::string, std::set<std::string>> heads_per_resource;
    std::map<std::tuple<std::string, std::string, std::size_t>,
             std::set<std::vector<std::string>>>
        sets;
    for (const Finding& finding : report.findings) {
        const std::string& head = finding.path.apps.front();
        if (!finding.resource.empty()) {
            heads_per_resource[finding.resource].insert(head);
        }
        std::vector<std::string> members = finding.path.apps;
        std::sort(members.begin(), members.end());
        sets[{head, finding.resource, finding.path.apps.size()}].insert(std::move(members));
    }
    for (Label label : kLabelOrder) {
        auto label_total = report.label_counts.find(label);
        if (label_total == report.label_counts.end()) continue;
        for (const std::string& resource : report.resources) {
            ResourcePotential row{label, resource, 0, label_total->second};
            if (auto it = heads_per_resource.find(resource); it != heads_per_resource.end()) {
                for (const std::string& head : it->second) {
                    if (store.signature(head).label == label) ++row.apps_with_findings;
                }
            }
            report.potential.push_back(row);
        }
    }
    for (const auto& [key, app_sets] : sets) {
        report.per_app_set_counts.push_back(AppSetCount{
            std::get<0>(key), std::get<1>(key), std::get<2>(key), app_sets.size()});
    }

    if (report.app_count <= kMatrixAppLimit) {
        report.has_matrix = true;
        report.matrix = build_collusion_matrix(store, report.findings);
        for (const std::string& from : store.apps()) {
            for (const std::string& to : store.apps()) {
                if (from == to) continue;
                std::set<Channel> channels = store.communicate(from, to);
                if (channels.empty()) continue;
                report.comm_edges.push_back(
                    CommEdge{from, to, {channels.begin(), channels.end()}});
            }
        }
    }
    return report;
}

namespace {

json channel_ref_to_json(const Channel& channel) {
    json value;
    value["kind"] = to_string(channel.kind);
    value["name"] = channel.name;
    return value;
}

json finding_to_json(const Finding& finding) {
    json value;
    value["apps"] = finding.path.apps;
    value["c2c_capable"] = finding.c2c_capable;
    json channels = json::array();
    for (const Channel& channel : finding.path.channels) {
        channels.push_back(channel_ref_to_json(channel));
    }
    value["channels"] = std::move(channels);
    if (!finding.resource.empty()) value["resource"] = finding.resource;
    value["threat"] = to_string(finding.threat);
    return value;
}

}  // namespace

std::string report_to_json(const CorpusReport& report) {
    json doc;
    doc["app_count"] = report.app_count;
    doc["max_len"] = report.max_len;
    doc["resources"] = report.resources;
    doc["findings_total"] = report.findings.size();

    json labels;
    for (const auto& [label, count] : report.label_counts) {
        labels[to_string(label)] = count;
    }
    doc["label_counts"] = std::move(labels);

    json kind_counts = json::array();
    for (const ChannelKindCount& row : report.channel_kind_counts) {
        json value;
        value["direction"] = row.send ? "send" : "receive";
        value["kind"] = to_string(row.kind);
        value["label"] = to_string(row.label);
        value["unique_channels"] = row.unique_channels;
        kind_counts.push_back(std::move(value));
    }
    doc["channel_kind_counts"] = std::move(kind_counts);

    json top = json::array();
    for (const TopChannel& row : report.top_channels) {
        json value;
        value["apps"] = row.apps;
        value["direction"] = row.send ? "send" : "receive";
        value["kind"] = to_string(row.channel.kind);
        value["label"] = to_string(row.label);
        value["name"] = row.channel.name;
        top.push_back(std::move(value));
    }
    doc["top_channels"] = std::move(top);

    json potential = json::array();
    for (const ResourcePotential& row : report.potential) {
        json value;
        value["apps_total"] = row.apps_total;
        value["apps_with_findings"] = row.apps_with_findings;
        value["label"] = to_string(row.label);
        value["pct"] = row.pct();
        value["resource"] = row.resource;
        potential.push_back(std::move(value));
    }
    doc["potential"] = std::move(potential);

    json set_counts = json::array();
    for (const AppSetCount& row : report.per_app_set_counts) {
        json value;
        value["app"] = row.app;
        value["resource"] = row.resource;
        value["set_size"] = row.set_size;
        value["sets"] = row.sets;
        set_counts.push_back(std::move(value));
    }
    doc["per_app_set_counts"] = std::move(set_counts);

    if (report.has_matrix) {
        json cells = json::array();
        for (std::size_t i = 0; i < report.matrix.apps.size(); ++i) {
            for (std::size_t j = 0; j < report.matrix.apps.size(); ++j) {
                const auto& cell = report.matrix.cells[i][j];
                if (cell.empty()) continue;
                json value;
                value["from"] = report.matrix.apps[i];
                value["to"] = report.matrix.apps[j];
                json threats = json::array();
                for (Threat threat : cell) threats.push_back(to_string(threat));
                value["threats"] = std::move(threats);
                cells.push_back(std::move(value));
            }
        }
        json matrix;
        matrix["apps"] = report.matrix.apps;
        matrix["cells"] = std::move(cells);
        doc["collusion_matrix"] = std::move(matrix);

        json edges = json::array();
        for (const CommEdge& edge : report.comm_edges) {
            json value;
            value["from"] = edge.from;
            value["to"] = edge.to;
            json channels = json::array();
            for (const Channel& channel : edge.channels) {
                channels.push_back(channel_ref_to_json(channel));
            }
            value["channels"] = std::move(channels);
            edges.push_back(std::move(value));
        }
        json comm;
        comm["edges"] = std::move(edges);
        doc["communication_matrix"] = std::move(comm);
    } else {
        doc["collusion_matrix"] = nullptr;
        doc["communication_matrix"] = nullptr;
    }

    return doc.dump(2) + "\n";
}

std::string findings_to_ndjson(const std::vector<Finding>& findings) {
    std::ostringstream out;
    for (const Finding& finding : findings) {
        out << finding_to_json(finding).dump() << "\n";
    }
    return out.str();
}

std::string channel_counts_csv(const CorpusReport& report) {
    std::ostringstream out;
    out << "label,kind,direction,unique_channels\n";
    for (const ChannelKindCount& row : report.channel_kind_counts) {
        out << to_string(row.label) << "," << to_string(row.kind) << ","
            << (row.send ? "send" : "receive") << "," << row.unique_channels << "\n";
    }
    return out.str();
}

std::string timings_csv(const std::vector<QueryTiming>& timings) {
    std::ostringstream out;
    out << "app,max_len,microseconds,findings\n";
    for (const QueryTiming& row : timings) {
        out << row.app << "," << row.max_len << "," << row.microseconds << ","
            << row.findings << "\n";
    }
    return out.str();
}

}  // namespace colpot
