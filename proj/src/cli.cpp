#include "csitlab/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"

#include "csitlab/csit_equiv.hpp"
#include "csitlab/dmc_ppm.hpp"
#include "csitlab/errors.hpp"
#include "csitlab/oracles.hpp"
#include "csitlab/wideband.hpp"

namespace csitlab::cli {

namespace {

constexpr double kLn2 = 0.6931471805599453;

using nlohmann::json;

json get_or(const json& obj, const std::string& key, json fallback) {
    if (obj.is_object() && obj.contains(key)) return obj.at(key);
    return fallback;
}

double num_field(const json& obj, const std::string& key, double fallback) {
    const json v = get_or(obj, key, json(fallback));
    if (!v.is_number()) throw ConfigError("field '" + key + "' must be a number");
    return v.get<double>();
}

std::int64_t int_field(const json& obj, const std::string& key,
                       std::int64_t fallback) {
    const json v = get_or(obj, key, json(fallback));
    if (!v.is_number_integer())
        throw ConfigError("field '" + key + "' must be an integer");
    return v.get<std::int64_t>();
}

FadingTail tail_from_config(const json& obj) {
    if (obj.is_null()) return FadingTail::rayleigh();
    if (!obj.is_object()) throw ConfigError("'tail' must be an object");
    const std::string kind = get_or(obj, "kind", json("rayleigh")).get<std::string>();
    if (kind == "rayleigh") return FadingTail::rayleigh();
    if (kind == "exp_mean")
        return FadingTail::exponential_mean(num_field(obj, "m", 1.0));
    if (kind == "polynomial")
        return FadingTail::polynomial(num_field(obj, "tail_exponent", 1.0));
    throw ConfigError("tail.kind must be rayleigh, exp_mean, or polynomial");
}

std::vector<std::int64_t> int_list(const json& v, const std::string& key) {
    std::vector<std::int64_t> out;
    if (v.is_number_integer()) {
        out.push_back(v.get<std::int64_t>());
    } else if (v.is_array()) {
        for (const auto& x : v) {
            if (!x.is_number_integer())
                throw ConfigError("field '" + key + "' must hold integers");
            out.push_back(x.get<std::int64_t>());
        }
    } else {
        throw ConfigError("field '" + key + "' must be an integer or a list");
    }
    if (out.empty()) throw ConfigError("field '" + key + "' is empty");
    return out;
}

} // namespace

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

void emit_plotdata(const std::vector<SweepRow>& rows,
                   const std::filesystem::path& path) {
    if (rows.empty()) throw EmptyError("no records to write");
    std::ofstream out(path, std::ios::binary); // binary: LF regardless of host
    if (!out) throw ConfigError("cannot open " + path.string() + " for writing");

    std::string header;
    for (const auto& [k, _] : rows.front().keys) {
        if (!header.empty()) header += ',';
        header += k;
    }
    for (const auto& m : rows.front().metrics) {
        if (!header.empty()) header += ',';
        header += m.name;
        if (m.lo) header += ',' + m.name + "_lo," + m.name + "_hi";
    }
    out << header << '\n';

    for (const auto& row : rows) {
        std::string line;
        for (const auto& [_, v] : row.keys) {
            if (!line.empty()) line += ',';
            line += v;
        }
        for (const auto& m : row.metrics) {
            if (!line.empty()) line += ',';
            line += format_double(m.value);
            if (m.lo)
                line += ',' + format_double(*m.lo) + ',' + format_double(*m.hi);
        }
        out << line << '\n';
    }
}

DiscreteChannelSpec demo_channel() {
    return DiscreteChannelSpec(
        {"G", "B"}, {"0", "1"}, {"0", "1"}, Distribution({0.5, 0.5}),
        {Distribution({0.9, 0.1}), Distribution({0.9, 0.1}),
         Distribution({0.1, 0.9}), Distribution({0.9, 0.1})},
        {0.0, 1.0}, 0);
}

DiscreteChannelSpec channel_from_config(const json& config) {
    const json c = get_or(config, "channel", json());
    if (c.is_null()) return demo_channel();
    if (c.is_string()) return DiscreteChannelSpec::load(c.get<std::string>());
    if (c.is_object()) return DiscreteChannelSpec::from_json(c);
    throw ConfigError("'channel' must be a path or an inline channel object");
}

namespace {

struct RunContext {
    json config;
    std::filesystem::path out_dir;
    std::uint64_t seed = 1;
    std::int64_t trials = 100000;
    std::chrono::steady_clock::time_point started;
    json summary_metrics = json::object();
    std::vector<std::string> outputs;
};

void write_summary(const RunContext& ctx, const std::string& subcommand) {
    const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                             std::chrono::steady_clock::now() - ctx.started)
                             .count();
    json summary;
    summary["subcommand"] = subcommand;
    summary["config"] = ctx.config;
    summary["seed"] = ctx.seed;
    summary["wall_clock_ms"] = elapsed;
    summary["finished_unix_ms"] =
        std::chrono::duration_cast<std::chrono::milliseconds>(
            std::chrono::system_clock::now().time_since_epoch())
            .count();
    summary["metrics"] = ctx.summary_metrics;
    summary["outputs"] = ctx.outputs;
    const auto path = ctx.out_dir / (subcommand + "_summary.json");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot open " + path.string());
    out << summary.dump(2) << '\n';
}

Metric plain(const std::string& name, double v) { return {name, v, {}, {}}; }

Metric with_ci(const std::string& name, const WilsonInterval& w) {
    return {name, w.value, w.lo, w.hi};
}

WidebandParams wideband_params_from(const json& wb, std::int64_t w) {
    const auto T = int_field(wb, "T", 4);
    const double P = num_field(wb, "P", 1.0);
    const double eps = num_field(wb, "epsilon", 0.1);
    CsitQuality csit{num_field(wb, "beta", 1.0)};
    WidebandParams p = WidebandParams::with_defaults(
        w, T, P, eps, tail_from_config(get_or(wb, "tail", json())), csit);
    if (wb.contains("K")) p.K = int_field(wb, "K", p.K);
    if (wb.contains("delta")) p.delta = num_field(wb, "delta", p.delta);
    if (wb.contains("lambda")) p.lambda = num_field(wb, "lambda", p.lambda);
    p.validate();
    return p;
}

int run_wideband_sim(RunContext& ctx) {
    const json wb = get_or(ctx.config, "wideband", json::object());
    const auto ws = int_list(get_or(wb, "w", json(100)), "wideband.w");

    std::vector<SweepRow> rows;
    for (std::int64_t w : ws) {
        const WidebandParams p = wideband_params_from(wb, w);
        const WidebandSimStats stats = simulate_trials(p, ctx.trials, ctx.seed);
        SweepRow row;
        row.keys = {{"w", std::to_string(w)},
                    {"T", std::to_string(p.T)},
                    {"trials", std::to_string(stats.trials)},
                    {"seed", std::to_string(ctx.seed)}};
        row.metrics = {with_ci("p1", stats.p1()),
                       plain("p1_exact", type1_prob_exact(static_cast<double>(w))),
                       with_ci("p2", stats.p2()),
                       with_ci("correct", stats.p_correct()),
                       plain("lambda", p.lambda)};
        rows.push_back(std::move(row));
    }
    const auto csv = ctx.out_dir / "wideband_sim.csv";
    emit_plotdata(rows, csv);
    ctx.outputs.push_back(csv.string());
    ctx.summary_metrics["points"] = rows.size();
    return 0;
}

int run_wideband_rate(RunContext& ctx) {
    const json rc = get_or(ctx.config, "rate", json::object());
    std::vector<double> ws;
    const json sweep = get_or(rc, "sweep_w", json("1e4:1e12"));
    if (sweep.is_string()) {
        const std::string s = sweep.get<std::string>();
        const auto colon = s.find(':');
        if (colon == std::string::npos)
            throw ConfigError("rate.sweep_w must look like '1e4:1e12'");
        const double lo = std::stod(s.substr(0, colon));
        const double hi = std::stod(s.substr(colon + 1));
        const double ppd = num_field(rc, "points_per_decade", 1.0);
        if (!(lo >= 2.0) || !(hi >= lo) || !(ppd > 0))
            throw ConfigError("rate.sweep_w range is invalid");
        for (double e = std::log10(lo); e <= std::log10(hi) + 1e-9; e += 1.0 / ppd)
            ws.push_back(std::round(std::pow(10.0, e)));
    } else {
        for (const auto& x : sweep) ws.push_back(x.get<double>());
    }

    const double P = num_field(rc, "P", 1.0);
    const double eps = num_field(rc, "epsilon", 0.01);
    const FadingTail tail = tail_from_config(get_or(rc, "tail", json()));
    CsitQuality csit{num_field(rc, "beta", 1.0)};

    std::vector<SweepRow> rows;
    int infeasible = 0;
    for (double w : ws) {
        // T cancels from every formula here; use 1.
        WidebandParams p = WidebandParams::with_defaults(
            static_cast<std::int64_t>(w), 1, P, eps, tail, csit);
        SweepRow row;
        row.keys = {{"w", format_double(w)}};
        try {
            const double a = alpha_star(p);
            const RateSummary r = achievable_rate(p);
            row.metrics = {plain("K", static_cast<double>(p.K)),
                           plain("delta", p.delta),
                           plain("lambda", p.lambda),
                           plain("alpha_star", a),
                           plain("rate_per_piece", r.per_piece),
                           plain("rate_total", r.total),
                           plain("rate_total_bits", r.total / kLn2),
                           plain("capacity_ref", r.capacity_ref),
                           plain("ratio", r.total / r.capacity_ref)};
            rows.push_back(std::move(row));
        } catch (const InfeasibleError&) {
            ++infeasible;
        }
    }
    if (rows.empty()) throw InfeasibleError("every sweep point was infeasible");
    const auto csv = ctx.out_dir / "wideband_rate.csv";
    emit_plotdata(rows, csv);
    ctx.outputs.push_back(csv.string());
    ctx.summary_metrics["points"] = rows.size();
    ctx.summary_metrics["infeasible_points"] = infeasible;
    return 0;
}

int run_dmc_capacity(RunContext& ctx) {
    const DiscreteChannelSpec chan = channel_from_config(ctx.config);
    const auto cap = static_cast<std::uint64_t>(
        int_field(ctx.config, "enumeration_cap", 1000000));
    const CapacityPerUnitCost result = capacity_per_unit_cost(chan, cap);

    // Ranked finite candidates for plotting; ties resolved by index order.
    struct Cand {
        std::string name;
        double div, cost, ratio;
    };
    std::vector<Cand> cands;
    const Distribution base = induced_output_dist(chan, chan.all_zero_mapping());
    for (std::uint64_t i = 0; i < chan.mapping_count(); ++i) {
        const StrategyMapping u = chan.mapping_from_index(i);
        const double c = expected_cost(chan, u);
        const double d = relative_entropy(induced_output_dist(chan, u), base);
        if (c == 0.0 && d == 0.0) continue;
        const double ratio = (c == 0.0 || std::isinf(d))
                                 ? std::numeric_limits<double>::infinity()
                                 : d / c;
        cands.push_back({chan.format_mapping(u), d, c, ratio});
    }
    std::stable_sort(cands.begin(), cands.end(),
                     [](const Cand& a, const Cand& b) { return a.ratio > b.ratio; });
    if (cands.size() > 100) cands.resize(100);

    std::vector<SweepRow> rows;
    for (const auto& c : cands) {
        SweepRow row;
        row.keys = {{"mapping", c.name}};
        row.metrics = {plain("divergence", c.div), plain("cost", c.cost),
                       plain("ratio", c.ratio), plain("ratio_bits", c.ratio / kLn2)};
        rows.push_back(std::move(row));
    }
    const auto csv = ctx.out_dir / "dmc_capacity.csv";
    emit_plotdata(rows, csv);
    ctx.outputs.push_back(csv.string());
    ctx.summary_metrics["value"] = result.value;
    ctx.summary_metrics["value_bits"] = result.value / kLn2;
    ctx.summary_metrics["infinite"] = result.is_infinite();
    ctx.summary_metrics["argmax"] = chan.format_mapping(result.argmax);
    std::cout << "capacity per unit cost: " << format_double(result.value)
              << " nats/cost at " << chan.format_mapping(result.argmax) << "\n";
    return 0;
}

StrategyMapping mapping_from_json(const DiscreteChannelSpec& chan, const json& v) {
    if (v.is_string() && v.get<std::string>() == "best")
        return capacity_per_unit_cost(chan).argmax;
    if (!v.is_array() || v.size() != chan.state_count())
        throw ConfigError("'u' must be \"best\" or one input name per state");
    StrategyMapping u;
    for (const auto& inp : v) {
        const auto& names = chan.input_names();
        const auto it = std::find(names.begin(), names.end(), inp.get<std::string>());
        if (it == names.end())
            throw ConfigError("unknown input name in 'u'");
        u.map.push_back(static_cast<std::int32_t>(it - names.begin()));
    }
    return u;
}

int run_ppm_sim(RunContext& ctx) {
    const DiscreteChannelSpec chan = channel_from_config(ctx.config);
    const json pc = get_or(ctx.config, "ppm", json::object());
    const auto ns = int_list(get_or(pc, "n", json(100)), "ppm.n");

    PpmCodeParams params;
    params.M = int_field(pc, "M", 4);
    params.delta = num_field(pc, "delta", 0.05);
    params.u = mapping_from_json(chan, get_or(pc, "u", json("best")));

    std::vector<SweepRow> rows;
    for (std::int64_t n : ns) {
        params.n = n;
        const double cap = pc.contains("cost_cap") && pc["cost_cap"].is_number()
                               ? pc["cost_cap"].get<double>()
                               : default_cost_cap(chan, params);
        const PpmSimStats stats =
            ppm_simulate(chan, params, ctx.trials, cap, ctx.seed);
        const double thresh = params.decode_threshold(chan);
        SweepRow row;
        row.keys = {{"n", std::to_string(n)},
                    {"M", std::to_string(params.M)},
                    {"trials", std::to_string(stats.trials)}};
        row.metrics = {plain("threshold", thresh),
                       plain("cost_cap", cap),
                       with_ci("p_correct", stats.rate_correct()),
                       with_ci("p_no_interval", stats.rate_no_interval()),
                       with_ci("p_multi_interval", stats.rate_multi_interval()),
                       with_ci("p_cost_overflow", stats.rate_cost_overflow()),
                       with_ci("p_error", stats.rate_error()),
                       plain("wrong_cross_freq",
                             stats.wrong_crossing_frequency(params.M)),
                       plain("wrong_cross_ref",
                             std::exp(-static_cast<double>(n) * thresh))};
        rows.push_back(std::move(row));
    }
    const auto csv = ctx.out_dir / "ppm_sim.csv";
    emit_plotdata(rows, csv);
    ctx.outputs.push_back(csv.string());
    ctx.summary_metrics["points"] = rows.size();
    ctx.summary_metrics["mapping"] = chan.format_mapping(params.u);
    return 0;
}

int run_equivalence(RunContext& ctx) {
    const DiscreteChannelSpec chan = channel_from_config(ctx.config);
    const int grid = static_cast<int>(int_field(ctx.config, "grid_resolution", 64));
    const EquivalenceReport rep = equivalence_check(chan, grid);

    SweepRow row;
    row.keys = {{"grid_resolution", std::to_string(grid)},
                {"verdict", to_string(rep.verdict)}};
    row.metrics = {plain("mu", rep.mu),
                   plain("noncausal_value", rep.noncausal_value),
                   plain("noncausal_value_bits", rep.noncausal_value / kLn2),
                   plain("causal_value", rep.causal_value),
                   plain("causal_value_bits", rep.causal_value / kLn2)};
    const auto csv = ctx.out_dir / "equivalence.csv";
    emit_plotdata({row}, csv);
    ctx.outputs.push_back(csv.string());

    ctx.summary_metrics["mu"] = rep.mu;
    ctx.summary_metrics["verdict"] = to_string(rep.verdict);
    ctx.summary_metrics["noncausal_value"] = rep.noncausal_value;
    ctx.summary_metrics["causal_value"] = rep.causal_value;
    ctx.summary_metrics["p_hat_star"] = rep.p_hat_star.probs();
    ctx.summary_metrics["u_star"] = chan.format_mapping(rep.u_star);
    std::cout << "equivalence verdict: " << to_string(rep.verdict)
              << " (mu = " << format_double(rep.mu) << ")\n";
    return 0;
}

int run_oracle(RunContext& ctx) {
    const DiscreteChannelSpec chan = channel_from_config(ctx.config);
    std::vector<SweepRow> rows;
    int failures = 0;

    auto record = [&](const std::string& check, double oracle, double estimate,
                      double sigma) {
        const double z = sigma > 0.0 ? (estimate - oracle) / sigma : 0.0;
        const bool ok = std::fabs(z) <= 3.0;
        if (!ok) ++failures;
        SweepRow row;
        row.keys = {{"check", check}};
        row.metrics = {plain("oracle", oracle), plain("estimate", estimate),
                       plain("sigma", sigma), plain("z", z)};
        rows.push_back(std::move(row));
        std::cout << (ok ? "[PASS] " : "[FAIL] ") << check
                  << ": oracle=" << format_double(oracle)
                  << " estimate=" << format_double(estimate)
                  << " z=" << format_double(z) << "\n";
    };

    // Interval code: exact enumeration against Monte Carlo.
    {
        PpmCodeParams params;
        params.n = 4;
        params.M = 2;
        params.delta = 0.05;
        params.u = capacity_per_unit_cost(chan).argmax;
        const double cap = default_cost_cap(chan, params);
        const ExactErrorBreakdown exact = exact_ppm_error(chan, params, cap);
        const PpmSimStats mc = ppm_simulate(chan, params, ctx.trials, cap, ctx.seed);
        const double n = static_cast<double>(mc.trials);
        auto sig = [&](double p) { return std::sqrt(std::max(p * (1 - p), 1e-12) / n); };
        record("ppm_correct", exact.p_correct, mc.rate_correct().value,
               sig(exact.p_correct));
        record("ppm_no_interval", exact.p_no_interval,
               mc.rate_no_interval().value, sig(exact.p_no_interval));
        record("ppm_multi_interval", exact.p_multi_interval,
               mc.rate_multi_interval().value, sig(exact.p_multi_interval));
        record("ppm_cost_overflow", exact.p_cost_overflow,
               mc.rate_cost_overflow().value, sig(exact.p_cost_overflow));
    }

    // Band-energy decoder: quadrature reference against Monte Carlo.
    for (double lambda : {50.0, 5.0}) {
        WidebandParams p = WidebandParams::with_defaults(12, 4, 1.0, 0.1);
        p.lambda = lambda;
        const WidebandExact exact = wideband_small_exact(12, 4, lambda);
        const WidebandSimStats mc = simulate_trials(p, ctx.trials, ctx.seed);
        const double n = static_cast<double>(mc.trials);
        const double sigma =
            std::sqrt(std::max(exact.p2_numeric * (1 - exact.p2_numeric), 1e-12) / n);
        record("wideband_p2_lambda" + format_double(lambda), exact.p2_numeric,
               mc.p2().value, sigma);
        record("wideband_p1_lambda" + format_double(lambda), exact.p1_exact,
               mc.p1().value,
               std::sqrt(std::max(exact.p1_exact * (1 - exact.p1_exact), 1e-12) / n));
    }

    // Capacity slope: iterative cost-constrained solver against enumeration.
    {
        const CapacityPerUnitCost enumd = capacity_per_unit_cost(chan);
        const CostSlopeResult slope = ba_cost_slope(chan);
        record("capacity_slope", enumd.value, slope.slope,
               0.05 / 3.0 * enumd.value); // 5% tolerance mapped onto z = 3
    }

    const auto csv = ctx.out_dir / "oracle_checks.csv";
    emit_plotdata(rows, csv);
    ctx.outputs.push_back(csv.string());
    ctx.summary_metrics["failures"] = failures;
    return failures == 0 ? 0 : 1;
}

} // namespace

int run(const std::string& subcommand, json config) {
    RunContext ctx;
    ctx.config = std::move(config);
    ctx.started = std::chrono::steady_clock::now();
    ctx.seed = static_cast<std::uint64_t>(int_field(ctx.config, "seed", 1));
    ctx.trials = int_field(ctx.config, "trials", 100000);
    if (ctx.trials < 1) throw ConfigError("trials must be >= 1");
    ctx.out_dir = get_or(ctx.config, "out", json("out")).get<std::string>();
    std::filesystem::create_directories(ctx.out_dir);

    int status = 0;
    if (subcommand == "wideband-sim")
        status = run_wideband_sim(ctx);
    else if (subcommand == "wideband-rate")
        status = run_wideband_rate(ctx);
    else if (subcommand == "dmc-capacity")
        status = run_dmc_capacity(ctx);
    else if (subcommand == "ppm-sim")
        status = run_ppm_sim(ctx);
    else if (subcommand == "equivalence")
        status = run_equivalence(ctx);
    else if (subcommand == "oracle")
        status = run_oracle(ctx);
    else
        throw ConfigError("unknown subcommand: " + subcommand);

    write_summary(ctx, subcommand);
    return status;
}

namespace {

void set_dotted(json& config, const std::string& path, const std::string& raw) {
    json value = json::parse(raw, nullptr, false);
    if (value.is_discarded()) value = raw; // plain string
    json* node = &config;
    std::size_t start = 0;
    while (true) {
        const std::size_t dot = path.find('.', start);
        const std::string key = path.substr(start, dot - start);
        if (key.empty()) throw ConfigError("bad override path: " + path);
        if (dot == std::string::npos) {
            (*node)[key] = value;
            return;
        }
        node = &(*node)[key];
        start = dot + 1;
    }
}

} // namespace

int main(int argc, const char* const* argv) {
    CLI::App app{"channel-coding laboratory for transmitter-side state knowledge"};
    app.require_subcommand(1);

    const std::vector<std::pair<std::string, std::string>> subs = {
        {"wideband-sim", "Monte Carlo error rates of the band-hopping code"},
        {"wideband-rate", "achievable-rate formulas across a bandwidth sweep"},
        {"dmc-capacity", "capacity per unit cost by strategy enumeration"},
        {"ppm-sim", "Monte Carlo of the interval code with the divergence decoder"},
        {"equivalence", "causal vs non-causal rate-per-cost comparison"},
        {"oracle", "cross-check simulators against exact references"},
    };

    std::string config_path;
    for (const auto& [name, desc] : subs) {
        auto* sub = app.add_subcommand(name, desc);
        sub->add_option("config", config_path, "JSON config file");
        sub->allow_extras();
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        auto* sub = app.get_subcommands().front();
        json config = json::object();
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            if (!in) throw ConfigError("cannot open config: " + config_path);
            try {
                in >> config;
            } catch (const json::exception& e) {
                throw ConfigError(config_path + ": " + e.what());
            }
        }

        // Remaining tokens are --key value overrides with dotted paths.
        const auto extras = sub->remaining();
        for (std::size_t i = 0; i < extras.size(); ++i) {
            std::string key = extras[i];
            if (key.rfind("--", 0) != 0)
                throw ConfigError("expected --key, got: " + key);
            key = key.substr(2);
            if (i + 1 >= extras.size())
                throw ConfigError("missing value for --" + key);
            set_dotted(config, key, extras[++i]);
        }

        return run(sub->get_name(), std::move(config));
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "unexpected error: " << e.what() << "\n";
        return 3;
    }
}

} // namespace csitlab::cli
