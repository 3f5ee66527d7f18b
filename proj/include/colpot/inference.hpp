#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "colpot/fact_store.hpp"

namespace colpot {

// A simple communication path: two or more pairwise-distinct apps plus the
// concrete channel used for each hop (channels.size() == apps.size() - 1).
struct CommPath {
    std::vector<std::string> apps;
    std::vector<Channel> channels;

    bool operator==(const CommPath&) const = default;
};

// Canonical path order: shorter first, then app sequence, then channels.
bool operator<(const CommPath& a, const CommPath& b);

// Collusion threat classes.
enum class Threat { InformationTheft, MoneyTheft, ServiceMisuse };

std::string to_string(Threat threat);

// One detected collusion-potential instance. `resource` is empty for
// rule-level findings and names the probed permission for resource-query
// findings. `c2c_capable` is set on money findings whose sending side can
// also move information off the device (command-and-control capable pair).
struct Finding {
    Threat threat{Threat::InformationTheft};
    CommPath path;
    std::string resource;
    bool c2c_capable{false};

    bool operator==(const Finding&) const = default;
};

// Canonical finding order: threat, then resource, then path.
bool operator<(const Finding& a, const Finding& b);

// All simple communication paths from `from` to `to` using between 2 and
// max_len apps, every per-hop channel choice enumerated, in canonical
// order. Throws ValidationError when max_len < 2 or from == to, and
// std::out_of_range for unknown apps.
std::vector<CommPath> comm_paths(const FactStore& store, const std::string& from,
                                 const std::string& to, int max_len);

// Single-hop rule findings:
//  - information theft: sender can access sensitive information, receiver
//    can move information outside;
//  - money theft: receiver can spend money (c2c_capable when the sender
//    can also move information outside).
std::vector<Finding> direct_threat_findings(const FactStore& store);

// Service-misuse findings: every simple path (up to max_len apps) whose
// head can move information outside (issue commands) and whose tail can
// control device services.
std::vector<Finding> service_misuse_findings(const FactStore& store, int max_len);

// Resource-query findings: every simple path (up to max_len apps) whose
// head holds `permission` and whose tail can move information outside,
// reported as information theft of that resource.
std::vector<Finding> coll_resource(const FactStore& store, const std::string& permission,
                                   int max_len);

// Resources probed by default: GET_ACCOUNTS, READ_CONTACTS, READ_SMS.
const std::vector<std::string>& default_resources();

// Wall time of the path exploration done for one head app.
struct QueryTiming {
    std::string app;
    int max_len{0};
    std::uint64_t microseconds{0};
    std::size_t findings{0};
};

// Full analysis: direct rules, service-misuse paths, and one resource
// query per entry of `resources`. Results are deduplicated and sorted in
// canonical order; output is byte-identical for any thread count
// (0 = hardware default). When `timings` is given it receives one row per
// app, in app order.
std::vector<Finding> run_analysis(const FactStore& store,
                                  const std::vector<std::string>& resources, int max_len,
                                  unsigned threads = 0,
                                  std::vector<QueryTiming>* timings = nullptr);

// run_analysis with the default resources.
std::vector<Finding> threat_findings(const FactStore& store, int max_len);

// Exact count of k-element app sets choosable from n apps, as a decimal
// string (the search-space size an analysis would face). Throws
// ValidationError when n or k is negative or k > n.
std::string estimate_max_sets(std::int64_t n, std::int64_t k);

}  // namespace colpot
