#include "anypath/anypath_math.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace anypath {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

void check_probs(std::span<const double> probs) {
    if (probs.empty())
        throw std::invalid_argument("forwarding set must be nonempty");
    for (double p : probs)
        if (!(p >= 0.0 && p <= 1.0))
            throw std::invalid_argument("delivery probability outside [0,1]");
}
} // namespace

double hyperlink_delivery_ratio(std::span<const double> probs) {
    check_probs(probs);
    double miss_all = 1.0;
    for (double p : probs)
        miss_all *= 1.0 - p;
    return 1.0 - miss_all;
}

double hyperlink_cost(double ratio) {
    if (!(ratio >= 0.0 && ratio <= 1.0))
        throw std::invalid_argument("delivery ratio outside [0,1]");
    if (ratio == 0.0)
        return kInf;
    return 1.0 / ratio;
}

std::vector<double> relay_weights(std::span<const double> ordered_probs) {
    check_probs(ordered_probs);
    double miss_all = 1.0;
    for (double p : ordered_probs)
        miss_all *= 1.0 - p;
    double ratio = 1.0 - miss_all;
    if (ratio <= 0.0)
        throw std::invalid_argument("relay weights undefined: all probabilities are zero");
    std::vector<double> weights(ordered_probs.size());
    double miss_prefix = 1.0; // prod of (1 - p_k) over higher-priority relays
    for (std::size_t j = 0; j < ordered_probs.size(); ++j) {
        weights[j] = ordered_probs[j] * miss_prefix / ratio;
        miss_prefix *= 1.0 - ordered_probs[j];
    }
    return weights;
}

double remaining_cost(std::span<const double> weights, std::span<const double> relay_distances) {
    if (weights.size() != relay_distances.size())
        throw std::invalid_argument("weights and relay distances differ in length");
    double sum = 0.0;
    for (std::size_t j = 0; j < weights.size(); ++j) {
        if (weights[j] == 0.0)
            continue; // zero-weight relay contributes nothing even if unreachable
        if (std::isinf(relay_distances[j]))
            return kInf;
        sum += weights[j] * relay_distances[j];
    }
    return sum;
}

double anypath_distance(std::span<const double> ordered_probs, std::span<const double> relay_distances) {
    if (ordered_probs.size() != relay_distances.size())
        throw std::invalid_argument("probabilities and relay distances differ in length");
    double ratio = hyperlink_delivery_ratio(ordered_probs);
    if (ratio == 0.0)
        return kInf;
    double rest = remaining_cost(relay_weights(ordered_probs), relay_distances);
    if (std::isinf(rest))
        return kInf;
    return hyperlink_cost(ratio) + rest;
}

} // namespace anypath
