// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Usage: acceptance <anypathsim-binary> <data-dir>

#include "anypath/anypath_math.hpp"
#include "anypath/channel.hpp"
#include "anypath/experiment.hpp"
#include "anypath/learning.hpp"
#include "anypath/saf.hpp"
#include "anypath/topology.hpp"

#include "test_util.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

using namespace anypath;

namespace {

int g_failures = 0;

void criterion(int number, bool pass, const std::string& detail) {
    std::printf("%s criterion %2d: %s\n", pass ? "PASS" : "FAIL", number, detail.c_str());
    if (!pass)
        ++g_failures;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

// 1. SAF distances equal the brute-force oracle on small random topologies.
void check_saf_oracle() {
    double worst = 0.0;
    bool pass = true;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        Topology topo = testutil::random_topology(seed, 5, 0.1, 1.0);
        ForwardingTable saf = shortest_anypath_first(topo.link_probs(), topo);
        ForwardingTable oracle = brute_force_anypath(topo.link_probs(), topo);
        for (NodeId v = 1; v <= topo.node_count(); ++v) {
            double a = saf.entry(v).distance;
            double b = oracle.entry(v).distance;
            if (std::isinf(a) || std::isinf(b)) {
                pass = pass && std::isinf(a) == std::isinf(b);
                continue;
            }
            worst = std::max(worst, std::abs(a - b));
        }
    }
    pass = pass && worst <= 1e-9;
    criterion(1, pass, "SAF equals brute-force oracle on 20 seeded topologies (max |diff| = " + fmt(worst) + ")");
}

// 2. Anypath never costs more than the shortest single path.
void check_anypath_dominance() {
    double worst_violation = 0.0;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        Topology topo = testutil::random_topology(seed + 9000, 10, 0.1, 1.0);
        double anypath_d = shortest_anypath_first(topo.link_probs(), topo).source_distance(topo);
        double single = testutil::single_path_distance(topo.link_probs(), topo);
        worst_violation = std::max(worst_violation, anypath_d - single);
    }
    criterion(2, worst_violation <= 1e-9,
              "anypath source distance <= single-path distance on 50 seeded topologies (max excess = " +
                  fmt(worst_violation) + ")");
}

// 3. Relay weights sum to 1 within 1e-12.
void check_weight_normalization() {
    RngStream rng{0xACCE5ULL};
    double worst = 0.0;
    for (int rep = 0; rep < 10000; ++rep) {
        std::vector<double> probs(1 + static_cast<std::size_t>(rng.next_unit() * 7));
        bool any = false;
        for (double& p : probs) {
            p = rng.next_unit();
            any = any || p > 0.0;
        }
        if (!any)
            probs[0] = 0.5;
        auto weights = relay_weights(probs);
        double sum = 0.0;
        for (double w : weights)
            sum += w;
        worst = std::max(worst, std::abs(sum - 1.0));
    }
    criterion(3, worst <= 1e-12, "relay weights sum to 1 over 10^4 random vectors (max |sum-1| = " + fmt(worst) + ")");
}

// 4. Monte Carlo transmissions match the closed-form table cost within 2%.
void check_monte_carlo_consistency(const Topology& three, const Topology& seven) {
    bool pass = true;
    std::string detail;
    int topo_index = 0;
    for (const Topology* topo : {&three, &seven}) {
        ++topo_index;
        ForwardingTable table = shortest_anypath_first(topo->link_probs(), *topo);
        double expected = evaluate_table_cost(table, topo->link_probs(), *topo)[static_cast<std::size_t>(topo->source() - 1)];
        double total = 0.0;
        const int packets = 200000;
        for (int i = 0; i < packets; ++i) {
            PacketTrace trace = route_packet(table, topo->link_probs(), *topo,
                                             SlotKey{0xC4ULL, static_cast<std::uint64_t>(topo_index),
                                                     static_cast<std::uint64_t>(i)},
                                             1000);
            total += static_cast<double>(trace.total_transmissions);
        }
        double mean = total / packets;
        double rel = std::abs(mean - expected) / expected;
        pass = pass && rel <= 0.02;
        if (!detail.empty())
            detail += ", ";
        detail += "mean " + fmt(mean) + " vs " + fmt(expected) + " (" + fmt(rel * 100.0) + "%)";
    }
    criterion(4, pass, "Monte Carlo transmissions within 2% of closed form: " + detail);
}

// 5. Conditioned relay-choice frequencies match the relay weights.
void check_relay_frequencies(const Topology& three) {
    // node 1's priority-ordered hyperlink in the worked example: [3, 2] with probs [0.5, 0.8]
    std::vector<NodeId> targets{3, 2};
    std::vector<double> probs = three.link_probs();
    long first = 0, second = 0;
    RngStream rng{0xC5ULL};
    const long trials = 200000;
    long done = 0;
    while (done < trials) {
        ReceptionOutcome out = broadcast(1, targets, probs, three, rng);
        if (!out.receivers[0].second && !out.receivers[1].second)
            continue; // condition on delivery
        ++done;
        if (out.receivers[0].second)
            ++first;
        else
            ++second;
    }
    double f1 = static_cast<double>(first) / trials;
    double f2 = static_cast<double>(second) / trials;
    bool pass = std::abs(f1 - 5.0 / 9.0) <= 0.01 && std::abs(f2 - 4.0 / 9.0) <= 0.01;
    criterion(5, pass,
              "conditioned relay frequencies [" + fmt(f1) + ", " + fmt(f2) + "] within 0.01 of [5/9, 4/9]");
}

// 6 & 7 share one DSEE run on the seven-node reference.
struct DseeRunOutcome {
    ExperimentResult result;
    long unit_count = 0;
};

DseeRunOutcome run_reference_dsee(const Topology& seven) {
    ExperimentConfig config;
    config.policy = PolicyKind::Dsee;
    config.horizon = 5000;
    config.epochs = 100;
    config.base_seed = 42;
    DseeRunOutcome out;
    out.result = run_experiment(config, seven, true);
    out.unit_count = budget_unit_count(seven, BudgetMode::PerLink);
    return out;
}

void check_regret_convergence(const DseeRunOutcome& run) {
    const auto& mean_avg = run.result.aggregate.mean_avg_regret;
    double at_200 = mean_avg[199];
    double at_5000 = mean_avg[4999];
    bool mean_ok = at_5000 < 0.5 * at_200;
    int epoch_ok = 0;
    for (const RegretTrace& trace : run.result.traces)
        if (trace.slots[4999].avg_regret < 0.5 * trace.slots[199].avg_regret)
            ++epoch_ok;
    bool pass = mean_ok && epoch_ok >= 95;
    criterion(6, pass,
              "time-averaged regret converges: mean " + fmt(at_5000) + " at t=5000 vs " + fmt(at_200) +
                  " at t=200, per-epoch holds in " + std::to_string(epoch_ok) + "/100");
}

void check_sublinear_regret(const DseeRunOutcome& run) {
    const auto& mean_cum = run.result.aggregate.mean_cum_regret;
    double rate_500 = mean_cum[499] / 500.0;
    double rate_5000 = mean_cum[4999] / 5000.0;
    bool rate_ok = rate_5000 < rate_500;

    auto fitted = [&](long horizon) {
        double lt = std::log(static_cast<double>(horizon));
        return mean_cum[static_cast<std::size_t>(horizon - 1)] / (static_cast<double>(run.unit_count) * lt * lt);
    };
    double c1000 = fitted(1000), c2000 = fitted(2000), c5000 = fitted(5000);
    double lo = std::min({c1000, c2000, c5000});
    double hi = std::max({c1000, c2000, c5000});
    bool fit_ok = hi <= 1.5 * lo;
    criterion(7, rate_ok && fit_ok,
              "cumulative regret is sub-linear (R/T " + fmt(rate_5000) + " < " + fmt(rate_500) +
                  ") with stable log^2 constant (C = " + fmt(c1000) + ", " + fmt(c2000) + ", " + fmt(c5000) + ")");
}

// 8. Genie accumulates exactly zero regret.
void check_genie_zero_regret(const Topology& three, const Topology& seven) {
    bool pass = true;
    for (const Topology* topo : {&three, &seven}) {
        ExperimentConfig config;
        config.policy = PolicyKind::Genie;
        config.horizon = 1000;
        config.epochs = 2;
        config.base_seed = 42;
        ExperimentResult result = run_experiment(config, *topo, true);
        for (const RegretTrace& trace : result.traces)
            for (const SlotRecord& rec : trace.slots)
                pass = pass && rec.cum_regret == 0.0;
    }
    criterion(8, pass, "genie policy records identically zero regret on both bundled topologies (T=1000)");
}

// 9. After 200 exploration samples per link, estimates are inside 0.15.
void check_estimator_accuracy(const Topology& seven) {
    int epochs_ok = 0;
    for (int epoch = 0; epoch < 100; ++epoch) {
        LinkEstimator est(seven.link_count(), 1.0, 1.0, 1e-3);
        for (int round = 0; round < 200; ++round) {
            ProbeRound probe = probe_all_links(seven, seven.link_probs(),
                                               SlotKey{0xC9ULL, static_cast<std::uint64_t>(epoch),
                                                       static_cast<std::uint64_t>(round)});
            for (const LinkObservation& obs : probe.observations)
                est.update(obs.link_index, obs.received);
        }
        double worst = 0.0;
        for (int li = 0; li < seven.link_count(); ++li)
            worst = std::max(worst, std::abs(est.estimate(li) - seven.link_probs()[static_cast<std::size_t>(li)]));
        if (worst <= 0.15)
            ++epochs_ok;
    }
    criterion(9, epochs_ok >= 95,
              "max |estimate - p| <= 0.15 after 200 samples/link in " + std::to_string(epochs_ok) + "/100 epochs");
}

// 10. CLI determinism: identical invocations produce byte-identical CSVs.
void check_cli_determinism(const std::string& cli, const std::string& topology_path) {
    namespace fs = std::filesystem;
    fs::path tmp = fs::path("acceptance_tmp");
    fs::remove_all(tmp);
    fs::create_directories(tmp);
    auto invoke = [&](const std::string& out_dir) {
        std::string cmd = "\"" + cli + "\" run --topology \"" + topology_path +
                          "\" --policy dsee --horizon 2000 --epochs 10 --seed 7 --per-epoch --output \"" + out_dir +
                          "\" > \"" + out_dir + ".log\" 2>&1";
        return std::system(cmd.c_str());
    };
    int rc1 = invoke((tmp / "a").string());
    int rc2 = invoke((tmp / "b").string());
    bool ran = rc1 == 0 && rc2 == 0;
    bool agg_same = ran && read_file(tmp / "a" / "dsee_agg.csv") == read_file(tmp / "b" / "dsee_agg.csv");
    bool trace_same = ran && read_file(tmp / "a" / "dsee_trace.csv") == read_file(tmp / "b" / "dsee_trace.csv");
    bool nonempty = ran && !read_file(tmp / "a" / "dsee_agg.csv").empty();
    criterion(10, ran && agg_same && trace_same && nonempty,
              std::string("two identical CLI runs produce byte-identical CSVs") +
                  (ran ? "" : " (CLI invocation failed)"));
}

// 11. Epsilon-greedy pays more cumulative regret than DSEE at T = 5000.
void check_baseline_ordering(const Topology& seven, const DseeRunOutcome& dsee_run, long* egreedy_capped) {
    ExperimentConfig config;
    config.policy = PolicyKind::EGreedy;
    config.epsilon = 0.1;
    config.horizon = 5000;
    config.epochs = 100;
    config.base_seed = 42;
    ExperimentResult egreedy = run_experiment(config, seven, false);
    *egreedy_capped = egreedy.infinite_cost_events;
    double eg = egreedy.aggregate.mean_cum_regret[4999];
    double ds = dsee_run.result.aggregate.mean_cum_regret[4999];
    criterion(11, eg > ds,
              "egreedy mean cumulative regret " + fmt(eg) + " > dsee " + fmt(ds) + " at T=5000");
}

} // namespace

int main(int argc, char** argv) {
    if (argc < 3) {
        std::fprintf(stderr, "usage: acceptance <anypathsim-binary> <data-dir>\n");
        return 2;
    }
    const std::string cli = argv[1];
    const std::filesystem::path data_dir = argv[2];

    Topology three = Topology::load((data_dir / "three_node.topo").string());
    Topology seven = Topology::load((data_dir / "seven_node.topo").string());

    check_saf_oracle();
    check_anypath_dominance();
    check_weight_normalization();
    check_monte_carlo_consistency(three, seven);
    check_relay_frequencies(three);

    DseeRunOutcome dsee_run = run_reference_dsee(seven);
    check_regret_convergence(dsee_run);
    check_sublinear_regret(dsee_run);
    check_genie_zero_regret(three, seven);
    check_estimator_accuracy(seven);
    check_cli_determinism(cli, (data_dir / "three_node.topo").string());
    long egreedy_capped = 0;
    check_baseline_ordering(seven, dsee_run, &egreedy_capped);

    // reference topologies must never hit the infinite-cost cap
    long capped = dsee_run.result.infinite_cost_events + egreedy_capped;
    std::printf("%s invariant: no capped-cost slots on the reference topologies (%ld observed)\n",
                capped == 0 ? "PASS" : "FAIL", capped);
    if (capped != 0)
        ++g_failures;

    if (g_failures == 0)
        std::printf("all acceptance criteria passed\n");
    else
        std::printf("%d acceptance criteria FAILED\n", g_failures);
    return g_failures == 0 ? 0 : 1;
}
