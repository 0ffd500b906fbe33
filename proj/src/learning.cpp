#include "anypath/learning.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace anypath {

LinkEstimator::LinkEstimator(int link_count, double prior_alpha, double prior_beta, double min_prob)
    : counts_(static_cast<std::size_t>(std::max(link_count, 0))), prior_alpha_(prior_alpha), prior_beta_(prior_beta),
      min_prob_(min_prob) {
    if (link_count < 0)
        throw std::invalid_argument("link count must be nonnegative");
    if (prior_alpha < 0.0 || prior_beta < 0.0)
        throw std::invalid_argument("priors must be nonnegative");
    if (!(min_prob > 0.0 && min_prob < 1.0))
        throw std::invalid_argument("min_prob must lie in (0,1)");
}

void LinkEstimator::update(int link_index, bool success) {
    Counts& c = counts_.at(static_cast<std::size_t>(link_index));
    ++c.trials;
    if (success)
        ++c.successes;
}

double LinkEstimator::estimate(int link_index) const {
    const Counts& c = counts_.at(static_cast<std::size_t>(link_index));
    double denom = static_cast<double>(c.trials) + prior_alpha_ + prior_beta_;
    double raw = denom > 0.0 ? (static_cast<double>(c.successes) + prior_alpha_) / denom : 0.0;
    return std::clamp(raw, min_prob_, 1.0);
}

std::vector<double> LinkEstimator::estimates() const {
    std::vector<double> out(counts_.size());
    for (std::size_t i = 0; i < counts_.size(); ++i)
        out[i] = estimate(static_cast<int>(i));
    return out;
}

std::vector<double> LinkEstimator::thompson_sample(RngStream& rng) const {
    if (!(prior_alpha_ > 0.0 && prior_beta_ > 0.0))
        throw std::invalid_argument("Thompson sampling requires positive priors");
    std::vector<double> out(counts_.size());
    for (std::size_t i = 0; i < counts_.size(); ++i) {
        const Counts& c = counts_[i];
        double a = static_cast<double>(c.successes) + prior_alpha_;
        double b = static_cast<double>(c.trials - c.successes) + prior_beta_;
        out[i] = std::clamp(rng.next_beta(a, b), min_prob_, 1.0);
    }
    return out;
}

long budget_unit_count(const Topology& topo, BudgetMode mode) {
    long n = topo.node_count();
    long n_max = topo.max_out_degree();
    if (mode == BudgetMode::PerLink)
        return n * n_max;
    if (n_max >= 62 || n > std::numeric_limits<long>::max() >> n_max)
        return std::numeric_limits<long>::max(); // saturate rather than overflow
    return n * (1L << n_max);
}

long exploration_budget(long t, const DseeState& state) {
    if (t < 1)
        throw std::invalid_argument("slot counter starts at 1");
    double log_term = std::log(static_cast<double>(t) + 1.0);
    double scaled = std::ceil(state.f_scale * log_term * log_term);
    long factor = std::max(1L, static_cast<long>(scaled));
    return state.unit_count * factor;
}

Phase dsee_step(DseeState& state) {
    bool explore = state.exploration_count < exploration_budget(state.t, state);
    if (explore)
        ++state.exploration_count;
    ++state.t;
    return explore ? Phase::Explore : Phase::Exploit;
}

Phase egreedy_step(double epsilon, RngStream& rng) {
    if (!(epsilon >= 0.0 && epsilon <= 1.0))
        throw std::invalid_argument("epsilon must lie in [0,1]");
    return rng.next_unit() < epsilon ? Phase::Explore : Phase::Exploit;
}

} // namespace anypath
