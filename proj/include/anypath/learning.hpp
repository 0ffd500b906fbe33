#pragma once

#include "anypath/rng.hpp"
#include "anypath/topology.hpp"

#include <cstdint>
#include <vector>

namespace anypath {

/// Per-link success/trial counters with Beta-prior smoothing. Estimates are
/// clamped to [min_prob, 1]: costs are inverse probabilities, so an exact-zero
/// estimate from early samples would make a hyperlink look infinitely
/// expensive forever.
class LinkEstimator {
public:
    LinkEstimator(int link_count, double prior_alpha, double prior_beta, double min_prob);

    void update(int link_index, bool success);
    double estimate(int link_index) const;
    std::vector<double> estimates() const;

    /// One independent Beta(successes+alpha, failures+beta) draw per link,
    /// clamped like estimate(). Requires positive priors.
    std::vector<double> thompson_sample(RngStream& rng) const;

    long successes(int link_index) const { return counts_.at(static_cast<std::size_t>(link_index)).successes; }
    long trials(int link_index) const { return counts_.at(static_cast<std::size_t>(link_index)).trials; }
    int link_count() const { return static_cast<int>(counts_.size()); }
    double prior_alpha() const { return prior_alpha_; }
    double prior_beta() const { return prior_beta_; }
    double min_prob() const { return min_prob_; }

private:
    struct Counts {
        long successes = 0;
        long trials = 0;
    };
    std::vector<Counts> counts_;
    double prior_alpha_;
    double prior_beta_;
    double min_prob_;
};

enum class Phase { Explore, Exploit };

enum class BudgetMode { PerLink, PerHyperlink };

/// Number of random quantities the exploration budget scales with:
/// links (N * N_max) under independence, hyperlinks (N * 2^N_max) otherwise.
long budget_unit_count(const Topology& topo, BudgetMode mode);

/// Deterministic exploration/exploitation scheduler state. The slot counter
/// and the count of past exploration slots fully determine the phase
/// sequence; channel randomness never enters.
struct DseeState {
    long t = 1;
    long exploration_count = 0;
    double f_scale = 1.0;
    BudgetMode budget_mode = BudgetMode::PerLink;
    long unit_count = 1;
};

/// Exploration budget at slot t: unit_count * max(1, ceil(f_scale * ln^2(t+1))).
/// The squared log realizes f(t) * log(t) with f(t) = f_scale * ln(t+1); the
/// floor guarantees at least one exploration round at t = 1.
long exploration_budget(long t, const DseeState& state);

/// Explore iff fewer exploration slots have happened than the current budget
/// allows; advances the slot counter and, on Explore, the exploration count.
Phase dsee_step(DseeState& state);

/// Explore with probability epsilon.
Phase egreedy_step(double epsilon, RngStream& rng);

} // namespace anypath
