#include "colpot/inference.hpp"

#include <gmp.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <thread>

namespace colpot {

bool operator<(const CommPath& a, const CommPath& b) {
    if (a.apps.size() != b.apps.size()) return a.apps.size() < b.apps.size();
    if (a.apps != b.apps) return a.apps < b.apps;
    return a.channels < b.channels;
}

std::string to_string(Threat threat) {
    switch (threat) {
        case Threat::InformationTheft: return "information_theft";
        case Threat::MoneyTheft: return "money_theft";
        case Threat::ServiceMisuse: return "service_misuse";
    }
    return "information_theft";
}

bool operator<(const Finding& a, const Finding& b) {
    if (a.threat != b.threat) return a.threat < b.threat;
    if (a.resource != b.resource) return a.resource < b.resource;
    if (a.path < b.path) return true;
    if (b.path < a.path) return false;
    return a.c2c_capable < b.c2c_capable;
}

namespace {

void check_max_len(int max_len) {
    if (max_len < 2) {
        throw ValidationError("max_len must be at least 2 (got " +
                              std::to_string(max_len) + ")");
    }
}

bool contains(const std::vector<std::string>& apps, const std::string& app) {
    return std::find(apps.begin(), apps.end(), app) != apps.end();
}

void dfs_paths(const FactStore& store, const std::string& to, int max_len, CommPath& current,
               std::vector<CommPath>& out) {
    const std::string& here = current.apps.back();
    for (const FactStore::OutEdge& edge : store.out_edges(here)) {
        for (const std::string& receiver : *edge.receivers) {
            if (receiver == to) {
                CommPath found = current;
                found.apps.push_back(receiver);
                found.channels.push_back(edge.channel);
                out.push_back(std::move(found));
            } else if (static_cast<int>(current.apps.size()) + 1 < max_len &&
                       !contains(current.apps, receiver)) {
                current.apps.push_back(receiver);
                current.channels.push_back(edge.channel);
                dfs_paths(store, to, max_len, current, out);
                current.apps.pop_back();
                current.channels.pop_back();
            }
        }
    }
}

}  // namespace

std::vector<CommPath> comm_paths(const FactStore& store, const std::string& from,
                                 const std::string& to, int max_len) {
    check_max_len(max_len);
    if (from == to) {
        throw ValidationError("path endpoints must differ (got \"" + from + "\" twice)");
    }
    // Validate both endpoints up front.
    (void)store.signature(from);
    (void)store.signature(to);

    std::vector<CommPath> paths;
    CommPath current;
    current.apps.push_back(from);
    dfs_paths(store, to, max_len, current, paths);
    std::sort(paths.begin(), paths.end());
    return paths;
}

namespace {

bool has_action(const FactStore& store, std::size_t app_idx, HighLevelAction action) {
    return store.actions(store.apps()[app_idx]).contains(action);
}

// Per-head exhaustive walk shared by the service-misuse rule and the
// resource queries: every simple path of up to max_len apps starting at
// `head` is inspected once, and tail predicates decide what it yields.
struct HeadScanConfig {
    bool service{false};                   // head can issue commands outside
    std::vector<std::string> resources;    // resources the head holds
};

void scan_from(const FactStore& store, const HeadScanConfig& config, int max_len,
               CommPath& current, std::vector<Finding>& out) {
    const std::string& here = current.apps.back();
    for (const FactStore::OutEdge& edge : store.out_edges(here)) {
        for (const std::string& receiver : *edge.receivers) {
            if (contains(current.apps, receiver)) continue;
            current.apps.push_back(receiver);
            current.channels.push_back(edge.channel);

            const auto& tail_actions = store.actions(receiver);
            if (config.service && tail_actions.contains(HighLevelAction::ControlService)) {
                out.push_back(Finding{Threat::ServiceMisuse, current, "", false});
            }
            if (!config.resources.empty() &&
                tail_actions.contains(HighLevelAction::InformationOutside)) {
                for (const std::string& resource : config.resources) {
                    out.push_back(Finding{Threat::InformationTheft, current, resource, false});
                }
            }

            if (static_cast<int>(current.apps.size()) < max_len) {
                scan_from(store, config, max_len, current, out);
            }
            current.apps.pop_back();
            current.channels.pop_back();
        }
    }
}

std::vector<Finding> scan_head(const FactStore& store, std::size_t head_idx,
                               const std::vector<std::string>& resources, bool service,
                               int max_len) {
    HeadScanConfig config;
    const std::string& head = store.apps()[head_idx];
    config.service = service && has_action(store, head_idx, HighLevelAction::InformationOutside);
    const auto& permissions = store.signature(head).permissions;
    for (const std::string& resource : resources) {
        if (permissions.contains(resource)) config.resources.push_back(resource);
    }

    std::vector<Finding> findings;
    if (!config.service && config.resources.empty()) return findings;
    CommPath current;
    current.apps.push_back(head);
    scan_from(store, config, max_len, current, findings);
    return findings;
}

void sort_and_dedup(std::vector<Finding>& findings) {
    std::sort(findings.begin(), findings.end());
    findings.erase(std::unique(findings.begin(), findings.end()), findings.end());
}

}  // namespace

std::vector<Finding> direct_threat_findings(const FactStore& store) {
    std::vector<Finding> findings;
    for (const auto& [channel, facts] : store.channels()) {
        for (const std::string& sender : facts.senders) {
            const auto& sender_actions = store.actions(sender);
            const bool sender_sensitive =
                sender_actions.contains(HighLevelAction::SensitiveInfo);
            const bool sender_outside =
                sender_actions.contains(HighLevelAction::InformationOutside);
            for (const std::string& receiver : facts.receivers) {
                if (receiver == sender) continue;
                const auto& receiver_actions = store.actions(receiver);
                CommPath path{{sender, receiver}, {channel}};
                if (sender_sensitive &&
                    receiver_actions.contains(HighLevelAction::InformationOutside)) {
                    findings.push_back(Finding{Threat::InformationTheft, path, "", false});
                }
                if (receiver_actions.contains(HighLevelAction::Money)) {
                    findings.push_back(
                        Finding{Threat::MoneyTheft, std::move(path), "", sender_outside});
                }
            }
        }
    }
    sort_and_dedup(findings);
    return findings;
}

std::vector<Finding> service_misuse_findings(const FactStore& store, int max_len) {
    check_max_len(max_len);
    std::vector<Finding> findings;
    for (std::size_t i = 0; i < store.apps().size(); ++i) {
        auto head_findings = scan_head(store, i, {}, true, max_len);
        findings.insert(findings.end(), std::make_move_iterator(head_findings.begin()),
                        std::make_move_iterator(head_findings.end()));
    }
    sort_and_dedup(findings);
    return findings;
}

std::vector<Finding> coll_resource(const FactStore& store, const std::string& permission,
                                   int max_len) {
    check_max_len(max_len);
    const std::string resource = strip_permission_prefix(permission);
    if (resource.empty()) {
        throw ValidationError("resource permission must not be empty");
    }
    std::vector<Finding> findings;
    for (std::size_t i = 0; i < store.apps().size(); ++i) {
        auto head_findings = scan_head(store, i, {resource}, false, max_len);
        findings.insert(findings.end(), std::make_move_iterator(head_findings.begin()),
                        std::make_move_iterator(head_findings.end()));
    }
    sort_and_dedup(findings);
    return findings;
}

const std::vector<std::string>& default_resources() {
    static const std::vector<std::string> resources = {"GET_ACCOUNTS", "READ_CONTACTS",
                                                       "READ_SMS"};
    return resources;
}

std::vector<Finding> run_analysis(const FactStore& store,
                                  const std::vector<std::string>& resources, int max_len,
                                  unsigned threads, std::vector<QueryTiming>* timings) {
    check_max_len(max_len);
    std::vector<std::string> clean_resources;
    for (const std::string& resource : resources) {
        std::string canonical = strip_permission_prefix(resource);
        if (canonical.empty()) {
            throw ValidationError("resource permission must not be empty");
        }
        clean_resources.push_back(std::move(canonical));
    }

    const std::size_t head_count = store.apps().size();
    std::vector<std::vector<Finding>> per_head(head_count);
    std::vector<QueryTiming> per_head_timing(head_count);

    unsigned worker_count = threads == 0 ? std::thread::hardware_concurrency() : threads;
    if (worker_count == 0) worker_count = 1;
    worker_count = static_cast<unsigned>(
        std::min<std::size_t>(worker_count, std::max<std::size_t>(head_count, 1)));

    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= head_count) break;
            const auto start = std::chrono::steady_clock::now();
            per_head[i] = scan_head(store, i, clean_resources, true, max_len);
            const auto stop = std::chrono::steady_clock::now();
            per_head_timing[i] = QueryTiming{
                store.apps()[i], max_len,
                static_cast<std::uint64_t>(
                    std::chrono::duration_cast<std::chrono::microseconds>(stop - start)
                        .count()),
                per_head[i].size()};
        }
    };

    if (worker_count <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(worker_count);
        for (unsigned t = 0; t < worker_count; ++t) pool.emplace_back(worker);
        for (std::thread& t : pool) t.join();
    }

    std::vector<Finding> findings = direct_threat_findings(store);
    for (std::vector<Finding>& head_findings : per_head) {
        findings.insert(findings.end(), std::make_move_iterator(head_findings.begin()),
                        std::make_move_iterator(head_findings.end()));
    }
    sort_and_dedup(findings);

    if (timings) {
        timings->assign(per_head_timing.begin(), per_head_timing.end());
    }
    return findings;
}

std::vector<Finding> threat_findings(const FactStore& store, int max_len) {
    return run_analysis(store, default_resources(), max_len);
}

std::string estimate_max_sets(std::int64_t n, std::int64_t k) {
    if (n < 0 || k < 0) {
        throw ValidationError("set-count arguments must be non-negative");
    }
    if (k > n) {
        throw ValidationError("cannot choose " + std::to_string(k) + " apps from " +
                              std::to_string(n));
    }
    mpz_t value;
    mpz_init(value);
    mpz_bin_uiui(value, static_cast<unsigned long>(n), static_cast<unsigned long>(k));
    std::vector<char> buffer(mpz_sizeinbase(value, 10) + 2);
    mpz_get_str(buffer.data(), 10, value);
    mpz_clear(value);
    return std::string(buffer.data());
}

}  // namespace colpot
