#include "anypath/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace anypath {

bool sample_link(double p, RngStream& rng) {
    if (!(p >= 0.0 && p <= 1.0))
        throw std::invalid_argument("delivery probability outside [0,1]");
    return rng.next_bernoulli(p);
}

ReceptionOutcome broadcast(NodeId transmitter, std::span<const NodeId> targets, std::span<const double> true_probs,
                           const Topology& topo, RngStream& rng) {
    if (targets.empty())
        throw std::invalid_argument("broadcast requires a nonempty target set");
    ReceptionOutcome out;
    out.transmitter = transmitter;
    out.receivers.reserve(targets.size());
    for (NodeId t : targets) {
        int li = topo.link_index(transmitter, t);
        if (li < 0)
            throw std::invalid_argument("broadcast target " + std::to_string(t) + " is not a neighbor of " +
                                        std::to_string(transmitter));
        out.receivers.emplace_back(t, sample_link(true_probs[static_cast<std::size_t>(li)], rng));
    }
    return out;
}

PacketTrace route_packet(const ForwardingTable& table, std::span<const double> true_probs, const Topology& topo,
                         const SlotKey& key, int retry_cap) {
    if (retry_cap < 1)
        throw std::invalid_argument("retry cap must be positive");
    if (std::isinf(table.source_distance(topo)))
        throw std::invalid_argument("source has no finite route in this table");

    PacketTrace trace;
    NodeId current = topo.source();
    while (current != table.destination) {
        const ForwardingEntry& entry = table.entry(current);
        if (entry.forwarding_set.empty())
            throw std::invalid_argument("malformed table: empty forwarding set at node " + std::to_string(current));

        RngStream rng = key.stream(SlotKey::kRoute, static_cast<std::uint64_t>(current));
        HopRecord hop{current, 0};
        NodeId relay = 0;
        while (hop.attempts < retry_cap) {
            ++hop.attempts;
            ReceptionOutcome outcome = broadcast(current, entry.forwarding_set, true_probs, topo, rng);
            for (auto [to, received] : outcome.receivers)
                trace.observations.push_back({topo.link_index(current, to), received});
            // receivers are in priority order; the first one wins
            for (auto [to, received] : outcome.receivers) {
                if (received) {
                    relay = to;
                    break;
                }
            }
            if (relay != 0)
                break;
        }
        trace.total_transmissions += hop.attempts;
        trace.hops.push_back(hop);
        if (relay == 0) {
            trace.delivered = false;
            return trace;
        }
        current = relay;
    }
    trace.delivered = true;
    return trace;
}

ProbeRound probe_all_links(const Topology& topo, std::span<const double> true_probs, const SlotKey& key) {
    ProbeRound round;
    round.observations.reserve(static_cast<std::size_t>(topo.link_count()));
    for (NodeId n = 1; n <= topo.node_count(); ++n) {
        auto nbrs = topo.neighbors(n);
        if (nbrs.empty())
            continue;
        ++round.transmissions;
        RngStream rng = key.stream(SlotKey::kProbe, static_cast<std::uint64_t>(n));
        for (auto [to, _] : nbrs) {
            int li = topo.link_index(n, to);
            round.observations.push_back({li, sample_link(true_probs[static_cast<std::size_t>(li)], rng)});
        }
    }
    return round;
}

} // namespace anypath
