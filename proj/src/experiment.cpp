#include "anypath/experiment.hpp"

#include "anypath/channel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace anypath {

namespace {

constexpr double kInfiniteCostCapPerNode = 100.0;

void append_real(std::string& out, double v) {
    char buf[40];
    int n = std::snprintf(buf, sizeof buf, "%.9g", v);
    out.append(buf, static_cast<std::size_t>(n));
}

double parse_real(const std::string& tok) {
    try {
        std::size_t pos = 0;
        double v = std::stod(tok, &pos);
        if (pos != tok.size())
            throw schema_error("bad numeric field '" + tok + "'");
        return v;
    } catch (const std::logic_error&) {
        throw schema_error("bad numeric field '" + tok + "'");
    }
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    for (;;) {
        std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            fields.push_back(line.substr(start));
            return fields;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
}

} // namespace

const char* policy_name(PolicyKind policy) {
    switch (policy) {
    case PolicyKind::Dsee: return "dsee";
    case PolicyKind::Genie: return "genie";
    case PolicyKind::EGreedy: return "egreedy";
    case PolicyKind::Thompson: return "thompson";
    }
    return "unknown";
}

PolicyKind policy_from_name(const std::string& name) {
    if (name == "dsee") return PolicyKind::Dsee;
    if (name == "genie") return PolicyKind::Genie;
    if (name == "egreedy") return PolicyKind::EGreedy;
    if (name == "thompson") return PolicyKind::Thompson;
    throw std::invalid_argument("unknown policy '" + name + "'");
}

void ExperimentConfig::validate() const {
    if (horizon < 1)
        throw std::invalid_argument("horizon must be >= 1");
    if (epochs < 1)
        throw std::invalid_argument("epochs must be >= 1");
    if (!(epsilon >= 0.0 && epsilon <= 1.0))
        throw std::invalid_argument("epsilon must lie in [0,1]");
    if (!(min_prob > 0.0 && min_prob < 1.0))
        throw std::invalid_argument("min-prob must lie in (0,1)");
    if (prior_alpha < 0.0 || prior_beta < 0.0)
        throw std::invalid_argument("priors must be nonnegative");
    if (f_scale <= 0.0)
        throw std::invalid_argument("f-scale must be positive");
    if (retry_cap < 1)
        throw std::invalid_argument("retry-cap must be >= 1");
    if (jobs < 1)
        throw std::invalid_argument("jobs must be >= 1");
}

double ExperimentConfig::resolved_explore_cost(const Topology& topo) const {
    return explore_slot_cost < 0.0 ? static_cast<double>(topo.node_count()) : explore_slot_cost;
}

double genie_cost(const Topology& topo) {
    ForwardingTable table = shortest_anypath_first(topo.link_probs(), topo);
    double d = table.source_distance(topo);
    if (std::isinf(d))
        throw std::runtime_error("destination unreachable: genie cost undefined");
    return d;
}

double exploit_slot_regret(const ForwardingTable& policy_table, const Topology& topo, double d_opt, bool* hit_cap) {
    std::vector<double> costs = evaluate_table_cost(policy_table, topo.link_probs(), topo);
    double cost = costs[static_cast<std::size_t>(topo.source() - 1)];
    bool capped = std::isinf(cost);
    if (capped)
        cost = kInfiniteCostCapPerNode * topo.node_count();
    if (hit_cap)
        *hit_cap = capped;
    return std::max(0.0, cost - d_opt);
}

double explore_slot_regret(double explore_cost, double d_opt) {
    return std::max(0.0, explore_cost - d_opt);
}

RegretTrace run_epoch(const ExperimentConfig& config, const Topology& topo, int epoch_index) {
    config.validate();
    const double d_opt = genie_cost(topo);
    const double explore_cost = config.resolved_explore_cost(topo);

    LinkEstimator estimator(topo.link_count(), config.prior_alpha, config.prior_beta, config.min_prob);
    DseeState dsee;
    dsee.f_scale = config.f_scale;
    dsee.budget_mode = config.budget_mode;
    dsee.unit_count = budget_unit_count(topo, config.budget_mode);

    ForwardingTable genie_table;
    if (config.policy == PolicyKind::Genie)
        genie_table = shortest_anypath_first(topo.link_probs(), topo);

    RegretTrace trace;
    trace.epoch = epoch_index;
    trace.slots.resize(static_cast<std::size_t>(config.horizon));

    double cum = 0.0;
    for (long t = 1; t <= config.horizon; ++t) {
        SlotKey key{config.base_seed, static_cast<std::uint64_t>(epoch_index), static_cast<std::uint64_t>(t)};
        Phase phase = Phase::Exploit;
        switch (config.policy) {
        case PolicyKind::Dsee:
            phase = dsee_step(dsee);
            break;
        case PolicyKind::EGreedy: {
            RngStream coin = key.stream(SlotKey::kPolicy);
            phase = egreedy_step(config.epsilon, coin);
            break;
        }
        case PolicyKind::Genie:
        case PolicyKind::Thompson:
            phase = Phase::Exploit;
            break;
        }

        SlotRecord& rec = trace.slots[static_cast<std::size_t>(t - 1)];
        rec.phase = phase;
        if (phase == Phase::Explore) {
            ProbeRound probe = probe_all_links(topo, topo.link_probs(), key);
            for (const LinkObservation& obs : probe.observations)
                estimator.update(obs.link_index, obs.received);
            rec.inst_regret = explore_slot_regret(explore_cost, d_opt);
            rec.transmissions = probe.transmissions;
            rec.delivered = -1;
            ++trace.explore_slots;
        } else {
            ForwardingTable table;
            switch (config.policy) {
            case PolicyKind::Genie:
                table = genie_table;
                break;
            case PolicyKind::Thompson: {
                RngStream draw = key.stream(SlotKey::kThompson);
                table = shortest_anypath_first(estimator.thompson_sample(draw), topo);
                break;
            }
            default:
                table = shortest_anypath_first(estimator.estimates(), topo);
                break;
            }
            PacketTrace packet = route_packet(table, topo.link_probs(), topo, key, config.retry_cap);
            if (config.policy != PolicyKind::Genie) {
                for (const LinkObservation& obs : packet.observations)
                    estimator.update(obs.link_index, obs.received);
            }
            bool hit_cap = false;
            rec.inst_regret = exploit_slot_regret(table, topo, d_opt, &hit_cap);
            if (hit_cap)
                ++trace.infinite_cost_events;
            rec.transmissions = packet.total_transmissions;
            rec.delivered = packet.delivered ? 1 : 0;
            if (packet.delivered)
                ++trace.delivered_packets;
        }
        cum += rec.inst_regret;
        rec.cum_regret = cum;
        rec.avg_regret = cum / static_cast<double>(t);
    }
    return trace;
}

ExperimentResult run_experiment(const ExperimentConfig& config, const Topology& topo, bool keep_traces) {
    config.validate();
    const int epochs = config.epochs;
    const std::size_t horizon = static_cast<std::size_t>(config.horizon);

    std::vector<RegretTrace> traces(static_cast<std::size_t>(epochs));
    int jobs = std::min(config.jobs, epochs);
    if (jobs <= 1) {
        for (int e = 0; e < epochs; ++e)
            traces[static_cast<std::size_t>(e)] = run_epoch(config, topo, e);
    } else {
        std::vector<std::thread> workers;
        workers.reserve(static_cast<std::size_t>(jobs));
        for (int w = 0; w < jobs; ++w) {
            workers.emplace_back([&, w] {
                for (int e = w; e < epochs; e += jobs)
                    traces[static_cast<std::size_t>(e)] = run_epoch(config, topo, e);
            });
        }
        for (auto& worker : workers)
            worker.join();
    }

    // reduce in epoch order so the aggregate is independent of scheduling
    ExperimentResult result;
    AggregateTrace& agg = result.aggregate;
    agg.mean_cum_regret.assign(horizon, 0.0);
    agg.se_cum_regret.assign(horizon, 0.0);
    agg.mean_avg_regret.assign(horizon, 0.0);
    agg.se_avg_regret.assign(horizon, 0.0);
    std::vector<double> sum_cum(horizon, 0.0), sumsq_cum(horizon, 0.0);
    std::vector<double> sum_avg(horizon, 0.0), sumsq_avg(horizon, 0.0);
    for (const RegretTrace& trace : traces) {
        for (std::size_t i = 0; i < horizon; ++i) {
            double c = trace.slots[i].cum_regret;
            double a = trace.slots[i].avg_regret;
            sum_cum[i] += c;
            sumsq_cum[i] += c * c;
            sum_avg[i] += a;
            sumsq_avg[i] += a * a;
        }
        result.infinite_cost_events += trace.infinite_cost_events;
        result.explore_slots += trace.explore_slots;
        result.delivered_packets += trace.delivered_packets;
        result.exploit_slots += config.horizon - trace.explore_slots;
    }
    const double n = static_cast<double>(epochs);
    for (std::size_t i = 0; i < horizon; ++i) {
        agg.mean_cum_regret[i] = sum_cum[i] / n;
        agg.mean_avg_regret[i] = sum_avg[i] / n;
        if (epochs > 1) {
            double var_cum = std::max(0.0, (sumsq_cum[i] - n * agg.mean_cum_regret[i] * agg.mean_cum_regret[i]) / (n - 1.0));
            double var_avg = std::max(0.0, (sumsq_avg[i] - n * agg.mean_avg_regret[i] * agg.mean_avg_regret[i]) / (n - 1.0));
            agg.se_cum_regret[i] = std::sqrt(var_cum / n);
            agg.se_avg_regret[i] = std::sqrt(var_avg / n);
        }
    }
    if (keep_traces)
        result.traces = std::move(traces);
    return result;
}

void write_trace_csv(std::ostream& out, const std::vector<RegretTrace>& traces) {
    std::string buf;
    buf.reserve(1 << 16);
    buf += "epoch,t,phase,inst_regret,cum_regret,avg_regret,transmissions,delivered\n";
    for (const RegretTrace& trace : traces) {
        long t = 0;
        for (const SlotRecord& rec : trace.slots) {
            ++t;
            buf += std::to_string(trace.epoch);
            buf += ',';
            buf += std::to_string(t);
            buf += ',';
            buf += rec.phase == Phase::Explore ? "explore" : "exploit";
            buf += ',';
            append_real(buf, rec.inst_regret);
            buf += ',';
            append_real(buf, rec.cum_regret);
            buf += ',';
            append_real(buf, rec.avg_regret);
            buf += ',';
            buf += std::to_string(rec.transmissions);
            buf += ',';
            if (rec.delivered >= 0)
                buf += rec.delivered ? '1' : '0';
            buf += '\n';
            if (buf.size() > (1 << 16) - 256) {
                out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
                buf.clear();
            }
        }
    }
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
}

void write_aggregate_csv(std::ostream& out, const AggregateTrace& aggregate) {
    std::string buf;
    buf.reserve(1 << 16);
    buf += "t,mean_cum_regret,se_cum_regret,mean_avg_regret,se_avg_regret\n";
    for (std::size_t i = 0; i < aggregate.mean_cum_regret.size(); ++i) {
        buf += std::to_string(i + 1);
        buf += ',';
        append_real(buf, aggregate.mean_cum_regret[i]);
        buf += ',';
        append_real(buf, aggregate.se_cum_regret[i]);
        buf += ',';
        append_real(buf, aggregate.mean_avg_regret[i]);
        buf += ',';
        append_real(buf, aggregate.se_avg_regret[i]);
        buf += '\n';
        if (buf.size() > (1 << 16) - 256) {
            out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
            buf.clear();
        }
    }
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
}

std::vector<RegretTrace> read_trace_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line))
        throw schema_error("empty trace CSV");
    if (!line.empty() && line.back() == '\r')
        line.pop_back();
    if (line != "epoch,t,phase,inst_regret,cum_regret,avg_regret,transmissions,delivered")
        throw schema_error("trace CSV header mismatch");

    std::vector<RegretTrace> traces;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;
        auto fields = split_csv(line);
        if (fields.size() != 8)
            throw schema_error("line " + std::to_string(lineno) + ": expected 8 fields");
        int epoch = static_cast<int>(parse_real(fields[0]));
        long t = static_cast<long>(parse_real(fields[1]));
        if (traces.empty() || traces.back().epoch != epoch) {
            traces.emplace_back();
            traces.back().epoch = epoch;
        }
        RegretTrace& trace = traces.back();
        if (t != static_cast<long>(trace.slots.size()) + 1)
            throw schema_error("line " + std::to_string(lineno) + ": slots out of order");
        SlotRecord rec;
        if (fields[2] == "explore")
            rec.phase = Phase::Explore;
        else if (fields[2] == "exploit")
            rec.phase = Phase::Exploit;
        else
            throw schema_error("line " + std::to_string(lineno) + ": bad phase '" + fields[2] + "'");
        rec.inst_regret = parse_real(fields[3]);
        rec.cum_regret = parse_real(fields[4]);
        rec.avg_regret = parse_real(fields[5]);
        rec.transmissions = static_cast<long>(parse_real(fields[6]));
        rec.delivered = fields[7].empty() ? -1 : (parse_real(fields[7]) != 0.0 ? 1 : 0);
        if (rec.phase == Phase::Explore)
            ++trace.explore_slots;
        else if (rec.delivered == 1)
            ++trace.delivered_packets;
        trace.slots.push_back(rec);
    }
    if (traces.empty())
        throw schema_error("trace CSV has no data rows");
    return traces;
}

} // namespace anypath
