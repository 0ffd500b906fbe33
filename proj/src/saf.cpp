#include "anypath/saf.hpp"

#include "anypath/anypath_math.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>

namespace anypath {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kImprovementEps = 1e-12;

void check_probs_size(std::span<const double> probs, const Topology& topo) {
    if (probs.size() != static_cast<std::size_t>(topo.link_count()))
        throw std::invalid_argument("probability map size does not match topology link count");
}
} // namespace

ForwardingTable shortest_anypath_first(std::span<const double> probs, const Topology& topo) {
    check_probs_size(probs, topo);
    const int n = topo.node_count();

    ForwardingTable table;
    table.destination = topo.destination();
    table.entries.resize(static_cast<std::size_t>(n));
    for (int v = 1; v <= n; ++v) {
        table.entry(v).node = v;
        table.entry(v).distance = kInf;
    }
    table.entry(topo.destination()).distance = 0.0;

    // candidate relay probabilities per node, parallel to forwarding_set
    std::vector<std::vector<double>> cand_probs(static_cast<std::size_t>(n) + 1);
    std::vector<std::vector<double>> cand_dists(static_cast<std::size_t>(n) + 1);
    std::vector<char> settled(static_cast<std::size_t>(n) + 1, 0);

    using QueueItem = std::pair<double, NodeId>; // (distance, node), min-heap
    std::priority_queue<QueueItem, std::vector<QueueItem>, std::greater<>> queue;
    queue.emplace(0.0, topo.destination());

    while (!queue.empty()) {
        auto [dist, j] = queue.top();
        queue.pop();
        if (settled[static_cast<std::size_t>(j)] || dist != table.entry(j).distance)
            continue;
        settled[static_cast<std::size_t>(j)] = 1;

        for (NodeId pred : topo.in_neighbors(j)) {
            if (settled[static_cast<std::size_t>(pred)])
                continue;
            int li = topo.link_index(pred, j);
            double p = probs[static_cast<std::size_t>(li)];
            if (p <= 0.0)
                continue;
            auto& cp = cand_probs[static_cast<std::size_t>(pred)];
            auto& cd = cand_dists[static_cast<std::size_t>(pred)];
            cp.push_back(p);
            cd.push_back(dist);
            double candidate = anypath_distance(cp, cd);
            ForwardingEntry& e = table.entry(pred);
            if (candidate < e.distance - kImprovementEps) {
                e.distance = candidate;
                e.forwarding_set.push_back(j);
                queue.emplace(candidate, pred);
            } else {
                cp.pop_back();
                cd.pop_back();
            }
        }
    }
    return table;
}

ForwardingTable brute_force_anypath(std::span<const double> probs, const Topology& topo) {
    check_probs_size(probs, topo);
    const int n = topo.node_count();
    if (n > 12)
        throw std::invalid_argument("brute_force_anypath is limited to 12 nodes");

    std::vector<double> dist(static_cast<std::size_t>(n) + 1, kInf);
    std::vector<std::vector<NodeId>> best_set(static_cast<std::size_t>(n) + 1);
    dist[static_cast<std::size_t>(topo.destination())] = 0.0;

    // Gauss-Seidel sweeps from the all-infinite upper bound; distances only
    // decrease, and after k sweeps the k closest nodes are exact, so n + 1
    // sweeps reach the fixed point.
    for (int sweep = 0; sweep <= n; ++sweep) {
        bool changed = false;
        for (NodeId v = 1; v <= n; ++v) {
            if (v == topo.destination())
                continue;
            auto nbrs = topo.neighbors(v);
            std::vector<std::pair<NodeId, double>> usable; // (relay, link prob), finite relays only
            for (auto [to, _] : nbrs) {
                int li = topo.link_index(v, to);
                double p = probs[static_cast<std::size_t>(li)];
                if (p > 0.0 && !std::isinf(dist[static_cast<std::size_t>(to)]))
                    usable.emplace_back(to, p);
            }
            if (usable.empty())
                continue;
            // priority order is by current distance, ties by node id
            std::sort(usable.begin(), usable.end(), [&](const auto& a, const auto& b) {
                double da = dist[static_cast<std::size_t>(a.first)];
                double db = dist[static_cast<std::size_t>(b.first)];
                return da != db ? da < db : a.first < b.first;
            });
            const std::size_t m = usable.size();
            for (std::size_t mask = 1; mask < (std::size_t{1} << m); ++mask) {
                // evaluate d + sum of weighted relay distances, written out
                // directly so the oracle does not share the SAF code path
                double miss_all = 1.0;
                for (std::size_t b = 0; b < m; ++b)
                    if (mask & (std::size_t{1} << b))
                        miss_all *= 1.0 - usable[b].second;
                double ratio = 1.0 - miss_all;
                if (ratio <= 0.0)
                    continue;
                double rest = 0.0;
                double miss_prefix = 1.0;
                for (std::size_t b = 0; b < m; ++b) {
                    if (!(mask & (std::size_t{1} << b)))
                        continue;
                    double p = usable[b].second;
                    rest += (p * miss_prefix / ratio) * dist[static_cast<std::size_t>(usable[b].first)];
                    miss_prefix *= 1.0 - p;
                }
                double candidate = 1.0 / ratio + rest;
                if (candidate < dist[static_cast<std::size_t>(v)] - 1e-15) {
                    dist[static_cast<std::size_t>(v)] = candidate;
                    best_set[static_cast<std::size_t>(v)].clear();
                    for (std::size_t b = 0; b < m; ++b)
                        if (mask & (std::size_t{1} << b))
                            best_set[static_cast<std::size_t>(v)].push_back(usable[b].first);
                    changed = true;
                }
            }
        }
        if (!changed)
            break;
    }

    ForwardingTable table;
    table.destination = topo.destination();
    table.entries.resize(static_cast<std::size_t>(n));
    for (NodeId v = 1; v <= n; ++v) {
        ForwardingEntry& e = table.entry(v);
        e.node = v;
        e.distance = dist[static_cast<std::size_t>(v)];
        e.forwarding_set = best_set[static_cast<std::size_t>(v)];
        std::sort(e.forwarding_set.begin(), e.forwarding_set.end(), [&](NodeId a, NodeId b) {
            double da = dist[static_cast<std::size_t>(a)];
            double db = dist[static_cast<std::size_t>(b)];
            return da != db ? da < db : a < b;
        });
    }
    return table;
}

std::vector<double> evaluate_table_cost(const ForwardingTable& table, std::span<const double> true_probs,
                                        const Topology& topo) {
    check_probs_size(true_probs, topo);
    const int n = topo.node_count();
    if (table.entries.size() != static_cast<std::size_t>(n))
        throw std::invalid_argument("table does not match topology node count");

    // relays must be strictly closer in table distance; this also yields the
    // bottom-up evaluation order
    for (NodeId v = 1; v <= n; ++v) {
        const ForwardingEntry& e = table.entry(v);
        if (v == table.destination && !e.forwarding_set.empty())
            throw std::invalid_argument("destination entry must have an empty forwarding set");
        for (NodeId r : e.forwarding_set) {
            if (topo.link_index(v, r) < 0)
                throw std::invalid_argument("forwarding set member is not an out-neighbor");
            if (!(table.entry(r).distance < e.distance))
                throw std::invalid_argument("cyclic distance dependency: relay not strictly closer");
        }
    }

    std::vector<NodeId> order(static_cast<std::size_t>(n));
    for (NodeId v = 1; v <= n; ++v)
        order[static_cast<std::size_t>(v - 1)] = v;
    std::sort(order.begin(), order.end(), [&](NodeId a, NodeId b) {
        double da = table.entry(a).distance;
        double db = table.entry(b).distance;
        return da != db ? da < db : a < b;
    });

    std::vector<double> cost(static_cast<std::size_t>(n) + 1, kInf);
    cost[static_cast<std::size_t>(table.destination)] = 0.0;
    for (NodeId v : order) {
        if (v == table.destination)
            continue;
        const ForwardingEntry& e = table.entry(v);
        if (e.forwarding_set.empty())
            continue; // unreachable under the policy: stays infinite
        std::vector<double> probs;
        std::vector<double> dists;
        probs.reserve(e.forwarding_set.size());
        dists.reserve(e.forwarding_set.size());
        for (NodeId r : e.forwarding_set) {
            probs.push_back(true_probs[static_cast<std::size_t>(topo.link_index(v, r))]);
            dists.push_back(cost[static_cast<std::size_t>(r)]);
        }
        cost[static_cast<std::size_t>(v)] = anypath_distance(probs, dists);
    }
    return {cost.begin() + 1, cost.end()};
}

double table_self_consistency_residual(const ForwardingTable& table, std::span<const double> probs,
                                       const Topology& topo) {
    double residual = 0.0;
    for (NodeId v = 1; v <= topo.node_count(); ++v) {
        const ForwardingEntry& e = table.entry(v);
        if (v == table.destination || std::isinf(e.distance))
            continue;
        std::vector<double> set_probs;
        std::vector<double> set_dists;
        for (NodeId r : e.forwarding_set) {
            set_probs.push_back(probs[static_cast<std::size_t>(topo.link_index(v, r))]);
            set_dists.push_back(table.entry(r).distance);
        }
        double recomputed = anypath_distance(set_probs, set_dists);
        residual = std::max(residual, std::abs(recomputed - e.distance));
    }
    return residual;
}

} // namespace anypath
