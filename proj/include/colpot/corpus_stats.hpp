#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "colpot/inference.hpp"

namespace colpot {

// Pairwise collusion-potential matrix: cells[i][j] holds the threat classes
// of findings whose head is apps[i] and tail is apps[j].
struct CollusionMatrix {
    std::vector<std::string> apps;
    std::vector<std::vector<std::set<Threat>>> cells;

    std::size_t non_empty_cells() const;
    const std::set<Threat>& cell(const std::string& from, const std::string& to) const;

    // Small ASCII rendering (I = information theft, M = money theft,
    // S = service misuse), rows are heads.
    std::string render() const;
};

CollusionMatrix build_collusion_matrix(const FactStore& store,
                                       const std::vector<Finding>& findings);
CollusionMatrix build_collusion_matrix(const FactStore& store, int max_len);

// Distinct channels used by apps of one label, per kind and direction.
struct ChannelKindCount {
    Label label{Label::Unlabeled};
    ChannelKind kind{ChannelKind::Intent};
    bool send{false};
    std::size_t unique_channels{0};
};

// One of the most-used channels of a label/direction slice.
struct TopChannel {
    Label label{Label::Unlabeled};
    bool send{false};
    Channel channel;
    std::size_t apps{0};
};

// Share of a label's apps that head at least one finding for a resource.
struct ResourcePotential {
    Label label{Label::Unlabeled};
    std::string resource;
    std::size_t apps_with_findings{0};
    std::size_t apps_total{0};
    double pct() const;
};

// Distinct app sets of one size in which an app heads findings for a
// resource (resource is empty for rule-level findings).
struct AppSetCount {
    std::string app;
    std::string resource;
    std::size_t set_size{0};
    std::size_t sets{0};
};

struct CommEdge {
    std::string from;
    std::string to;
    std::vector<Channel> channels;
};

// Aggregate analysis results over a corpus. Everything here is a pure
// function of the store and parameters, so serialized reports are
// deterministic; timings vary run to run and are kept separate.
struct CorpusReport {
    std::size_t app_count{0};
    int max_len{0};
    std::vector<std::string> resources;
    std::map<Label, std::size_t> label_counts;
    std::vector<ChannelKindCount> channel_kind_counts;
    std::vector<TopChannel> top_channels;          // top 10 per label/direction
    std::vector<ResourcePotential> potential;
    std::vector<AppSetCount> per_app_set_counts;
    std::vector<Finding> findings;
    bool has_matrix{false};                        // filled only for small corpora
    CollusionMatrix matrix;
    std::vector<CommEdge> comm_edges;              // who-can-talk-to-whom, small corpora
};

// Corpora at or below this size get the full matrices in their report.
inline constexpr std::size_t kMatrixAppLimit = 50;

CorpusReport build_report(const FactStore& store, const std::vector<std::string>& resources,
                          int max_len, unsigned threads = 0,
                          std::vector<QueryTiming>* timings = nullptr);

// Deterministic JSON (sorted keys, stable array orders).
std::string report_to_json(const CorpusReport& report);

// One compact JSON object per finding per line, in the given order. Keys:
// apps, c2c_capable, channels (kind/name pairs), resource (when set),
// threat.
std::string findings_to_ndjson(const std::vector<Finding>& findings);

// CSV "label,kind,direction,unique_channels".
std::string channel_counts_csv(const CorpusReport& report);

// CSV "app,max_len,microseconds,findings".
std::string timings_csv(const std::vector<QueryTiming>& timings);

}  // namespace colpot
