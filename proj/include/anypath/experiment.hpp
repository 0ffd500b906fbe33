#pragma once

#include "anypath/learning.hpp"
#include "anypath/saf.hpp"
#include "anypath/topology.hpp"

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace anypath {

enum class PolicyKind { Dsee, Genie, EGreedy, Thompson };

/// Raised when a CSV input does not match the pinned schema.
class schema_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

const char* policy_name(PolicyKind policy);
PolicyKind policy_from_name(const std::string& name);

struct ExperimentConfig {
    long horizon = 5000;
    int epochs = 100;
    std::uint64_t base_seed = 0;
    PolicyKind policy = PolicyKind::Dsee;
    double f_scale = 1.0;
    BudgetMode budget_mode = BudgetMode::PerLink;
    double epsilon = 0.1;
    double prior_alpha = 1.0;
    double prior_beta = 1.0;
    double min_prob = 1e-3;
    int retry_cap = 1000;
    double explore_slot_cost = kAutoExploreCost; // < 0 means auto: one dummy broadcast per node, cost N
    int jobs = 1;

    static constexpr double kAutoExploreCost = -1.0;

    void validate() const; // throws std::invalid_argument on bad values
    double resolved_explore_cost(const Topology& topo) const;
};

struct SlotRecord {
    Phase phase = Phase::Exploit;
    double inst_regret = 0.0;
    double cum_regret = 0.0;
    double avg_regret = 0.0;
    long transmissions = 0;
    int delivered = -1; // -1 on explore slots (blank in CSV), else 0/1
};

struct RegretTrace {
    int epoch = 0;
    std::vector<SlotRecord> slots;
    long explore_slots = 0;
    long delivered_packets = 0;
    long infinite_cost_events = 0; // exploit slots whose evaluated cost hit the cap
};

/// Per-slot mean and standard error of cumulative and time-averaged regret
/// across epochs.
struct AggregateTrace {
    std::vector<double> mean_cum_regret;
    std::vector<double> se_cum_regret;
    std::vector<double> mean_avg_regret;
    std::vector<double> se_avg_regret;
};

struct ExperimentResult {
    AggregateTrace aggregate;
    std::vector<RegretTrace> traces; // filled only when keep_traces was requested
    long infinite_cost_events = 0;
    long explore_slots = 0;   // summed over epochs
    long delivered_packets = 0;
    long exploit_slots = 0;
};

/// Optimal anypath cost under the true probabilities (SAF on truth).
double genie_cost(const Topology& topo);

/// Regret charged to an exploitation slot: expected cost of the chosen table
/// under the TRUE probabilities minus the genie cost, floored at 0. Infinite
/// evaluated cost is capped at 100 * N (reported via `hit_cap`).
double exploit_slot_regret(const ForwardingTable& policy_table, const Topology& topo, double d_opt,
                           bool* hit_cap = nullptr);

/// Regret charged to an exploration slot: max(0, explore_cost - d_opt).
double explore_slot_regret(double explore_cost, double d_opt);

/// Run one epoch of `config.horizon` slots. Fully deterministic given
/// (config.base_seed, epoch_index); epochs never share mutable state.
RegretTrace run_epoch(const ExperimentConfig& config, const Topology& topo, int epoch_index);

/// Run all epochs (in parallel when config.jobs > 1; results are identical
/// either way) and aggregate.
ExperimentResult run_experiment(const ExperimentConfig& config, const Topology& topo, bool keep_traces = false);

/// Per-slot trace CSV:
/// epoch,t,phase,inst_regret,cum_regret,avg_regret,transmissions,delivered
void write_trace_csv(std::ostream& out, const std::vector<RegretTrace>& traces);

/// Aggregated CSV: t,mean_cum_regret,se_cum_regret,mean_avg_regret,se_avg_regret
void write_aggregate_csv(std::ostream& out, const AggregateTrace& aggregate);

/// Parse-back of write_trace_csv output (schema checked strictly).
std::vector<RegretTrace> read_trace_csv(std::istream& in);

} // namespace anypath
