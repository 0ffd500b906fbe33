#pragma once

#include "anypath/topology.hpp"

#include <span>
#include <vector>

namespace anypath {

struct ForwardingEntry {
    NodeId node = 0;
    double distance = 0.0; // expected transmissions to destination; +inf when unreachable
    std::vector<NodeId> forwarding_set; // priority order: lowest remaining distance first
};

/// Per-node anypath distances and priority-ordered forwarding sets toward one
/// destination. Entries are indexed by node id - 1.
struct ForwardingTable {
    NodeId destination = 0;
    std::vector<ForwardingEntry> entries;

    const ForwardingEntry& entry(NodeId node) const { return entries[static_cast<std::size_t>(node - 1)]; }
    ForwardingEntry& entry(NodeId node) { return entries[static_cast<std::size_t>(node - 1)]; }
    double source_distance(const Topology& topo) const { return entry(topo.source()).distance; }
};

/// Shortest Anypath First: settles nodes in ascending anypath distance from
/// the destination; when a node settles, each in-neighbor appends it to its
/// candidate forwarding set iff that strictly lowers the neighbor's distance
/// (by more than 1e-12). `probs` holds one probability per topology link, in
/// link-index order (true values or estimates).
ForwardingTable shortest_anypath_first(std::span<const double> probs, const Topology& topo);

/// Exact minimum anypath distances by exhaustive search over forwarding-set
/// choices (test oracle). Guarded to node_count <= 12.
ForwardingTable brute_force_anypath(std::span<const double> probs, const Topology& topo);

/// Recomputes every node's expected cost bottom-up, keeping the table's
/// forwarding sets and priority order but substituting `true_probs`. Nodes
/// whose set has true delivery ratio 0 get +infinity. Throws if a forwarding
/// set member does not have a strictly smaller table distance than its owner
/// (cyclic dependency).
std::vector<double> evaluate_table_cost(const ForwardingTable& table, std::span<const double> true_probs,
                                        const Topology& topo);

/// Max over nodes of |stored distance - distance recomputed from the node's
/// own forwarding set|; the self-consistency residual (0 for exact tables,
/// ignoring unreachable entries).
double table_self_consistency_residual(const ForwardingTable& table, std::span<const double> probs,
                                       const Topology& topo);

} // namespace anypath
