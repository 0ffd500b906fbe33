#pragma once

#include "anypath/rng.hpp"
#include "anypath/saf.hpp"
#include "anypath/topology.hpp"

#include <span>
#include <vector>

namespace anypath {

/// One Bernoulli reception sample for a directed link.
struct LinkObservation {
    int link_index = -1;
    bool received = false;
};

/// Result of one broadcast: per-target reception booleans, each drawn
/// independently per link.
struct ReceptionOutcome {
    NodeId transmitter = 0;
    std::vector<std::pair<NodeId, bool>> receivers;
};

struct HopRecord {
    NodeId node = 0;
    int attempts = 0; // broadcasts sent from this node, including re-broadcasts
};

struct PacketTrace {
    std::vector<HopRecord> hops;
    bool delivered = false;
    long total_transmissions = 0;
    std::vector<LinkObservation> observations; // every link sample drawn while routing
};

struct ProbeRound {
    std::vector<LinkObservation> observations; // exactly one per directed link, link-index order
    int transmissions = 0;                     // one dummy broadcast per node with out-degree > 0
};

/// True with probability p; consumes exactly one draw from the stream.
bool sample_link(double p, RngStream& rng);

/// Broadcast from `transmitter` to `targets`: one independent link sample per
/// target, one transmission. Probabilities are per topology link index.
ReceptionOutcome broadcast(NodeId transmitter, std::span<const NodeId> targets, std::span<const double> true_probs,
                           const Topology& topo, RngStream& rng);

/// Forward one packet from the source using the table's forwarding sets:
/// broadcast, hand off to the highest-priority receiver, re-broadcast when
/// nobody received. Stops at the destination, or gives up (delivered=false)
/// once a hop exhausts `retry_cap` attempts. Each transmitting node draws
/// from its own substream of `key`, so traces are reproducible independent
/// of scheduling.
PacketTrace route_packet(const ForwardingTable& table, std::span<const double> true_probs, const Topology& topo,
                         const SlotKey& key, int retry_cap);

/// Exploration probe: every node broadcasts one dummy packet, sampling each
/// of its out-links once.
ProbeRound probe_all_links(const Topology& topo, std::span<const double> true_probs, const SlotKey& key);

} // namespace anypath
