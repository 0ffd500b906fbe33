// anypathsim — mesh anypath-routing simulator with online link estimation.
//
// Subcommands:
//   validate  parse a topology file and report its genie distance table
//   run       run a learning policy against a topology, emit regret CSVs
//   summary   compare trace CSVs produced by `run`

#include "anypath/experiment.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitValidation = 2;
constexpr int kExitRuntime = 3;

std::string fmt_real(double v, const char* format = "%.10f") {
    char buf[64];
    std::snprintf(buf, sizeof buf, format, v);
    return buf;
}

int cmd_validate(const std::string& topology_path) {
    anypath::Topology topo = anypath::Topology::load(topology_path);
    anypath::ForwardingTable table = anypath::shortest_anypath_first(topo.link_probs(), topo);
    std::printf("nodes: %d\n", topo.node_count());
    std::printf("links: %d\n", topo.link_count());
    std::printf("max-out-degree: %d\n", topo.max_out_degree());
    std::printf("genie distances:\n");
    for (anypath::NodeId v = 1; v <= topo.node_count(); ++v) {
        const anypath::ForwardingEntry& e = table.entry(v);
        if (v == topo.destination()) {
            std::printf("  node %d: 0.0000000000  (destination)\n", v);
            continue;
        }
        if (std::isinf(e.distance)) {
            std::printf("  node %d: unreachable\n", v);
            continue;
        }
        std::string set;
        for (anypath::NodeId r : e.forwarding_set) {
            if (!set.empty())
                set += ' ';
            set += std::to_string(r);
        }
        std::printf("  node %d: %s  (forwarding set: %s)\n", v, fmt_real(e.distance).c_str(), set.c_str());
    }
    std::printf("source distance: %s\n", fmt_real(table.source_distance(topo)).c_str());
    return 0;
}

struct RunOptions {
    std::string topology_path;
    std::string output_dir = "./out";
    std::string budget_mode = "per-link";
    std::string explore_cost = "auto";
    std::vector<double> prior{1.0, 1.0};
    bool per_epoch = false;
    anypath::ExperimentConfig config;
    std::string policy = "dsee";
    long long seed = 0;
};

int cmd_run(RunOptions& opt) {
    anypath::ExperimentConfig& config = opt.config;
    config.policy = anypath::policy_from_name(opt.policy);
    config.base_seed = static_cast<std::uint64_t>(opt.seed);
    config.prior_alpha = opt.prior.at(0);
    config.prior_beta = opt.prior.at(1);
    if (opt.budget_mode == "per-link")
        config.budget_mode = anypath::BudgetMode::PerLink;
    else if (opt.budget_mode == "per-hyperlink")
        config.budget_mode = anypath::BudgetMode::PerHyperlink;
    else
        throw CLI::ValidationError("--budget-mode", "must be per-link or per-hyperlink");
    if (opt.explore_cost == "auto") {
        config.explore_slot_cost = anypath::ExperimentConfig::kAutoExploreCost;
    } else {
        try {
            std::size_t pos = 0;
            config.explore_slot_cost = std::stod(opt.explore_cost, &pos);
            if (pos != opt.explore_cost.size() || config.explore_slot_cost < 0.0)
                throw std::invalid_argument("");
        } catch (const std::exception&) {
            throw CLI::ValidationError("--explore-cost", "must be a nonnegative real or 'auto'");
        }
    }
    config.validate(); // reject bad values before touching any file

    anypath::Topology topo = anypath::Topology::load(opt.topology_path);
    anypath::ExperimentResult result = anypath::run_experiment(config, topo, opt.per_epoch);

    std::filesystem::path out_dir(opt.output_dir);
    std::filesystem::create_directories(out_dir);
    std::filesystem::path agg_path = out_dir / (std::string(anypath::policy_name(config.policy)) + "_agg.csv");
    {
        std::ofstream out(agg_path, std::ios::binary);
        if (!out)
            throw std::runtime_error("cannot write " + agg_path.string());
        anypath::write_aggregate_csv(out, result.aggregate);
    }
    std::filesystem::path trace_path;
    if (opt.per_epoch) {
        trace_path = out_dir / (std::string(anypath::policy_name(config.policy)) + "_trace.csv");
        std::ofstream out(trace_path, std::ios::binary);
        if (!out)
            throw std::runtime_error("cannot write " + trace_path.string());
        anypath::write_trace_csv(out, result.traces);
    }

    const std::size_t last = result.aggregate.mean_cum_regret.size() - 1;
    const long total_slots = config.horizon * config.epochs;
    std::printf("policy: %s\n", anypath::policy_name(config.policy));
    std::printf("epochs: %d  horizon: %ld  seed: %llu\n", config.epochs, config.horizon,
                static_cast<unsigned long long>(config.base_seed));
    std::printf("final cumulative regret (mean over epochs): %s\n",
                fmt_real(result.aggregate.mean_cum_regret[last], "%.6f").c_str());
    std::printf("final time-averaged regret (mean over epochs): %s\n",
                fmt_real(result.aggregate.mean_avg_regret[last], "%.6f").c_str());
    std::printf("exploration-slot fraction: %s\n",
                fmt_real(static_cast<double>(result.explore_slots) / static_cast<double>(total_slots), "%.4f").c_str());
    if (result.exploit_slots > 0)
        std::printf("delivery rate: %s\n",
                    fmt_real(static_cast<double>(result.delivered_packets) / static_cast<double>(result.exploit_slots),
                             "%.4f")
                        .c_str());
    if (result.infinite_cost_events > 0)
        std::printf("infinite-cost slots (capped): %ld\n", result.infinite_cost_events);
    std::printf("aggregate CSV: %s\n", agg_path.string().c_str());
    if (opt.per_epoch)
        std::printf("trace CSV: %s\n", trace_path.string().c_str());
    return 0;
}

int cmd_summary(const std::vector<std::string>& paths, const std::string& plot_path) {
    struct Row {
        std::string label;
        double final_cum = 0.0;
        double final_avg = 0.0;
        double explore_fraction = 0.0;
        double delivery_rate = 0.0;
        std::vector<double> mean_avg_per_t;
    };
    std::vector<Row> rows;
    for (const std::string& path : paths) {
        std::ifstream in(path, std::ios::binary);
        if (!in)
            throw std::runtime_error("cannot open " + path);
        std::vector<anypath::RegretTrace> traces = anypath::read_trace_csv(in);
        Row row;
        row.label = std::filesystem::path(path).stem().string();
        long total_slots = 0, explore_slots = 0, exploit_slots = 0, delivered = 0;
        std::size_t horizon = 0;
        for (const auto& trace : traces)
            horizon = std::max(horizon, trace.slots.size());
        row.mean_avg_per_t.assign(horizon, 0.0);
        std::vector<long> counts(horizon, 0);
        for (const auto& trace : traces) {
            total_slots += static_cast<long>(trace.slots.size());
            explore_slots += trace.explore_slots;
            exploit_slots += static_cast<long>(trace.slots.size()) - trace.explore_slots;
            delivered += trace.delivered_packets;
            row.final_cum += trace.slots.back().cum_regret;
            row.final_avg += trace.slots.back().avg_regret;
            for (std::size_t i = 0; i < trace.slots.size(); ++i) {
                row.mean_avg_per_t[i] += trace.slots[i].avg_regret;
                ++counts[i];
            }
        }
        const double n = static_cast<double>(traces.size());
        row.final_cum /= n;
        row.final_avg /= n;
        row.explore_fraction = static_cast<double>(explore_slots) / static_cast<double>(total_slots);
        row.delivery_rate =
            exploit_slots > 0 ? static_cast<double>(delivered) / static_cast<double>(exploit_slots) : 0.0;
        for (std::size_t i = 0; i < horizon; ++i)
            row.mean_avg_per_t[i] /= static_cast<double>(counts[i]);
        rows.push_back(std::move(row));
    }

    std::printf("%-24s %14s %14s %10s %10s\n", "trace", "final_R(T)", "final_R(T)/T", "explore", "delivery");
    for (const Row& row : rows)
        std::printf("%-24s %14.6f %14.6f %10.4f %10.4f\n", row.label.c_str(), row.final_cum, row.final_avg,
                    row.explore_fraction, row.delivery_rate);

    if (!plot_path.empty()) {
        std::ofstream out(plot_path, std::ios::binary);
        if (!out)
            throw std::runtime_error("cannot write " + plot_path);
        std::size_t horizon = 0;
        for (const Row& row : rows)
            horizon = std::max(horizon, row.mean_avg_per_t.size());
        out << "t";
        for (const Row& row : rows)
            out << ',' << row.label;
        out << '\n';
        for (std::size_t i = 0; i < horizon; ++i) {
            out << (i + 1);
            for (const Row& row : rows) {
                out << ',';
                if (i < row.mean_avg_per_t.size()) {
                    char buf[40];
                    std::snprintf(buf, sizeof buf, "%.9g", row.mean_avg_per_t[i]);
                    out << buf;
                }
            }
            out << '\n';
        }
        std::printf("plot data: %s\n", plot_path.c_str());
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"anypath routing simulator with online link-probability learning"};
    app.require_subcommand(1);

    std::string validate_topology;
    CLI::App* validate = app.add_subcommand("validate", "check a topology file and print its genie distances");
    validate->add_option("--topology", validate_topology, "topology file")->required();

    RunOptions run_opt;
    CLI::App* run = app.add_subcommand("run", "run a policy and write regret CSVs");
    run->add_option("--topology", run_opt.topology_path, "topology file")->required();
    run->add_option("--horizon", run_opt.config.horizon, "slots per epoch")->capture_default_str();
    run->add_option("--epochs", run_opt.config.epochs, "independent epochs")->capture_default_str();
    run->add_option("--seed", run_opt.seed, "base random seed")->capture_default_str();
    run->add_option("--policy", run_opt.policy, "dsee|genie|egreedy|thompson")->capture_default_str();
    run->add_option("--f-scale", run_opt.config.f_scale, "exploration budget scale")->capture_default_str();
    run->add_option("--budget-mode", run_opt.budget_mode, "per-link|per-hyperlink")->capture_default_str();
    run->add_option("--epsilon", run_opt.config.epsilon, "egreedy exploration probability")->capture_default_str();
    run->add_option("--prior", run_opt.prior, "Beta prior alpha beta")->expected(2);
    run->add_option("--min-prob", run_opt.config.min_prob, "estimate clamp floor")->capture_default_str();
    run->add_option("--retry-cap", run_opt.config.retry_cap, "max broadcasts per hop")->capture_default_str();
    run->add_option("--explore-cost", run_opt.explore_cost, "exploration slot cost, or 'auto' (= node count)")
        ->capture_default_str();
    run->add_option("--output", run_opt.output_dir, "output directory")->capture_default_str();
    run->add_option("--jobs", run_opt.config.jobs, "parallel epoch workers")->capture_default_str();
    run->add_flag("--per-epoch", run_opt.per_epoch, "also write the per-epoch trace CSV");

    std::vector<std::string> summary_paths;
    std::string plot_path;
    CLI::App* summary = app.add_subcommand("summary", "summarize trace CSVs");
    summary->add_option("paths", summary_paths, "trace CSV files")->required();
    summary->add_option("--plot-data", plot_path, "write merged t vs mean avg-regret CSV");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (validate->parsed())
            return cmd_validate(validate_topology);
        if (run->parsed())
            return cmd_run(run_opt);
        return cmd_summary(summary_paths, plot_path);
    } catch (const CLI::ValidationError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitUsage;
    } catch (const anypath::topology_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitValidation;
    } catch (const anypath::schema_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitValidation;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitRuntime;
    }
}
