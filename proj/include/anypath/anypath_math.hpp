#pragma once

#include <span>
#include <vector>

namespace anypath {

/// Probability that at least one member of a forwarding set receives a
/// broadcast, assuming independent links: 1 - prod(1 - p_j).
double hyperlink_delivery_ratio(std::span<const double> probs);

/// Expected broadcasts until some forwarding-set member receives: 1 / ratio.
/// Returns +infinity for ratio == 0 (callers must exclude such sets).
double hyperlink_cost(double ratio);

/// Probability that each relay is the effective forwarder given delivery
/// succeeded. `ordered_probs` is in relay priority order (closest first);
/// weight j is p_j * prod_{k<j}(1 - p_k), normalized by the delivery ratio.
/// Weights are nonnegative and sum to 1.
std::vector<double> relay_weights(std::span<const double> ordered_probs);

/// Weighted average of relay distances (dot product).
double remaining_cost(std::span<const double> weights, std::span<const double> relay_distances);

/// Full anypath distance through one forwarding set:
/// hyperlink cost plus relay-weighted remaining cost. Saturates to +infinity
/// when the set's delivery ratio is 0 or a positively-weighted relay is
/// unreachable.
double anypath_distance(std::span<const double> ordered_probs, std::span<const double> relay_distances);

} // namespace anypath
