#include "csitlab/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>
#include <boost/math/special_functions/gamma.hpp>

#include "csitlab/errors.hpp"
#include "csitlab/wideband.hpp"

namespace csitlab {

ExactErrorBreakdown exact_ppm_error(const DiscreteChannelSpec& chan,
                                    const PpmCodeParams& params,
                                    double cost_cap, std::uint64_t term_cap) {
    params.validate(chan);
    const std::size_t len = static_cast<std::size_t>(params.M * params.n);
    const double s_count = std::pow(static_cast<double>(chan.state_count()),
                                    static_cast<double>(len));
    const double y_count = std::pow(static_cast<double>(chan.output_count()),
                                    static_cast<double>(len));
    if (s_count * y_count > static_cast<double>(term_cap))
        throw CapExceededError("exact enumeration needs " +
                               std::to_string(s_count * y_count) +
                               " weighted terms, cap is " +
                               std::to_string(term_cap));

    const double thresh = params.decode_threshold(chan);
    const std::int64_t msg = 0;
    const auto n_states = static_cast<std::uint64_t>(s_count);
    const auto n_outputs = static_cast<std::uint64_t>(y_count);
    const std::size_t ny = chan.output_count();

    // term[y][k] = (k/n) ln((k/n) / base(y)): the divergence of an interval
    // type is a sum of these, which turns the inner enumeration into table
    // lookups.
    const Distribution base = induced_output_dist(chan, chan.all_zero_mapping());
    const auto n_d = static_cast<double>(params.n);
    std::vector<std::vector<double>> term(ny);
    for (std::size_t y = 0; y < ny; ++y) {
        term[y].assign(static_cast<std::size_t>(params.n) + 1, 0.0);
        for (std::int64_t k = 1; k <= params.n; ++k) {
            const double p = static_cast<double>(k) / n_d;
            term[y][static_cast<std::size_t>(k)] =
                base[y] > 0.0 ? p * std::log(p / base[y])
                              : std::numeric_limits<double>::infinity();
        }
    }

    ExactErrorBreakdown acc;
    std::vector<std::int32_t> states(len), outputs(len);
    std::vector<std::int64_t> counts(ny);
    std::vector<double> divs(static_cast<std::size_t>(params.M));
    for (std::uint64_t si = 0; si < n_states; ++si) {
        std::uint64_t rest = si;
        double p_state = 1.0;
        for (std::size_t i = 0; i < len; ++i) {
            states[i] = static_cast<std::int32_t>(rest % chan.state_count());
            rest /= chan.state_count();
            p_state *= chan.state_dist()[static_cast<std::size_t>(states[i])];
        }
        if (p_state == 0.0) continue;

        const std::vector<std::int32_t> inputs =
            ppm_encode(msg, states, chan, params);
        double cost = 0.0;
        for (std::size_t i = 0; i < len; ++i)
            cost += chan.cost(static_cast<std::size_t>(inputs[i]));

        for (std::uint64_t yi = 0; yi < n_outputs; ++yi) {
            std::uint64_t yrest = yi;
            double p_out = 1.0;
            for (std::size_t i = 0; i < len; ++i) {
                outputs[i] = static_cast<std::int32_t>(yrest % ny);
                yrest /= ny;
                p_out *= chan.row(static_cast<std::size_t>(inputs[i]),
                                  static_cast<std::size_t>(states[i]))
                             [static_cast<std::size_t>(outputs[i])];
            }
            if (p_out == 0.0) continue;
            const double weight = p_state * p_out;

            for (std::int64_t k = 0; k < params.M; ++k) {
                std::fill(counts.begin(), counts.end(), 0);
                const std::size_t lo = static_cast<std::size_t>(k * params.n);
                for (std::size_t i = lo;
                     i < lo + static_cast<std::size_t>(params.n); ++i)
                    ++counts[static_cast<std::size_t>(outputs[i])];
                double d = 0.0;
                for (std::size_t y = 0; y < ny; ++y)
                    d += term[y][static_cast<std::size_t>(counts[y])];
                divs[static_cast<std::size_t>(k)] = d;
            }
            switch (classify_ppm_trial(divs, thresh, msg, cost, cost_cap)) {
            case PpmOutcomeKind::Correct: acc.p_correct += weight; break;
            case PpmOutcomeKind::NoInterval: acc.p_no_interval += weight; break;
            case PpmOutcomeKind::MultiInterval: acc.p_multi_interval += weight; break;
            case PpmOutcomeKind::CostOverflow: acc.p_cost_overflow += weight; break;
            }
        }
    }
    return acc;
}

namespace {

struct StrategyDmc {
    std::vector<std::vector<double>> rows; // P(y | u), one row per mapping
    std::vector<double> cost;
};

StrategyDmc to_strategy_dmc(const DiscreteChannelSpec& chan,
                            std::uint64_t strategy_cap) {
    const std::uint64_t total = chan.mapping_count();
    if (total > strategy_cap)
        throw CapExceededError("strategy alphabet " + std::to_string(total) +
                               " exceeds cap " + std::to_string(strategy_cap));
    StrategyDmc dmc;
    dmc.rows.reserve(total);
    dmc.cost.reserve(total);
    for (std::uint64_t idx = 0; idx < total; ++idx) {
        const StrategyMapping u = chan.mapping_from_index(idx);
        dmc.rows.push_back(induced_output_dist(chan, u).probs());
        dmc.cost.push_back(expected_cost(chan, u));
    }
    return dmc;
}

struct BaPoint {
    double nu = 0.0;
    double capacity = 0.0;
};

// Maximize I(p) - s * E_p[cost] by the usual alternating update; returns the
// traced (nu, C) point at the optimum for this multiplier.
BaPoint ba_at_multiplier(const StrategyDmc& dmc, double s, double tol,
                         std::int64_t max_iterations) {
    const std::size_t nu_inputs = dmc.rows.size();
    const std::size_t ny = dmc.rows[0].size();
    std::vector<double> p(nu_inputs, 1.0 / static_cast<double>(nu_inputs));
    std::vector<double> q(ny), t(nu_inputs);
    double last_capacity = -1.0;
    for (std::int64_t it = 0; it < max_iterations; ++it) {
        std::fill(q.begin(), q.end(), 0.0);
        for (std::size_t u = 0; u < nu_inputs; ++u)
            for (std::size_t y = 0; y < ny; ++y) q[y] += p[u] * dmc.rows[u][y];

        double capacity = 0.0;
        double t_max = -std::numeric_limits<double>::infinity();
        for (std::size_t u = 0; u < nu_inputs; ++u) {
            double d = 0.0;
            for (std::size_t y = 0; y < ny; ++y) {
                const double r = dmc.rows[u][y];
                if (r > 0.0) d += r * std::log(r / q[y]);
            }
            capacity += p[u] * d;
            t[u] = d - s * dmc.cost[u];
            t_max = std::max(t_max, t[u]);
        }
        if (std::fabs(capacity - last_capacity) < tol) {
            BaPoint pt;
            pt.capacity = capacity;
            for (std::size_t u = 0; u < nu_inputs; ++u) pt.nu += p[u] * dmc.cost[u];
            return pt;
        }
        last_capacity = capacity;

        double z = 0.0;
        for (std::size_t u = 0; u < nu_inputs; ++u) {
            p[u] *= std::exp(t[u] - t_max); // shift keeps exp in range
            z += p[u];
        }
        for (std::size_t u = 0; u < nu_inputs; ++u) p[u] /= z;
    }
    throw NoConvergenceError("Blahut-Arimoto did not converge at multiplier " +
                             std::to_string(s));
}

} // namespace

CostSlopeResult ba_cost_slope(const DiscreteChannelSpec& chan,
                              const std::vector<double>& cost_grid,
                              std::uint64_t strategy_cap, double tol,
                              std::int64_t max_iterations) {
    const StrategyDmc dmc = to_strategy_dmc(chan, strategy_cap);
    if (*std::max_element(dmc.cost.begin(), dmc.cost.end()) == 0.0)
        throw DomainError("all strategies cost zero; the cost grid is infeasible");

    CostSlopeResult res;
    if (cost_grid.empty()) {
        // Geometric multiplier sweep, 32 values per decade, from s = 1 until
        // the traced cost collapses.
        const double per_decade = 32.0;
        for (int k = 0;; ++k) {
            const double s = std::pow(10.0, static_cast<double>(k) / per_decade);
            const BaPoint pt = ba_at_multiplier(dmc, s, tol, max_iterations);
            if (pt.nu < 1e-13 || k > static_cast<int>(per_decade) * 8) break;
            res.curve.emplace_back(pt.nu, pt.capacity);
        }
    } else {
        for (double nu_target : cost_grid) {
            if (!(nu_target > 0.0))
                throw DomainError("cost grid entries must be > 0");
            // nu(s) is nonincreasing in s; bracket then bisect.
            double lo = 1e-6, hi = 1.0;
            while (ba_at_multiplier(dmc, hi, tol, max_iterations).nu > nu_target &&
                   hi < 1e8)
                hi *= 4.0;
            while (ba_at_multiplier(dmc, lo, tol, max_iterations).nu < nu_target &&
                   lo > 1e-12)
                lo /= 4.0;
            for (int it = 0; it < 80; ++it) {
                const double mid = std::sqrt(lo * hi);
                if (ba_at_multiplier(dmc, mid, tol, max_iterations).nu > nu_target)
                    lo = mid;
                else
                    hi = mid;
            }
            const BaPoint pt = ba_at_multiplier(dmc, std::sqrt(lo * hi), tol,
                                                max_iterations);
            res.curve.emplace_back(pt.nu, pt.capacity);
        }
    }

    std::sort(res.curve.begin(), res.curve.end());
    res.curve.erase(std::remove_if(res.curve.begin(), res.curve.end(),
                                   [](const auto& p) { return p.first < 1e-13; }),
                    res.curve.end());
    if (res.curve.size() < 2)
        throw DomainError("cost sweep produced fewer than two usable points");

    const double nu1 = res.curve[0].first, r1 = res.curve[0].second / nu1;
    const double nu2 = res.curve[1].first, r2 = res.curve[1].second / nu2;
    // Richardson for C(nu)/nu = slope - k nu + O(nu^2).
    res.slope = r1 + (r1 - r2) * nu1 / (nu2 - nu1);

    // Divergence probe: C(nu)/nu still climbing decade over decade near zero.
    auto ratio_near = [&](double nu) {
        const auto it = std::min_element(
            res.curve.begin(), res.curve.end(), [&](const auto& a, const auto& b) {
                return std::fabs(std::log(a.first / nu)) <
                       std::fabs(std::log(b.first / nu));
            });
        return it->second / it->first;
    };
    const double r0 = r1;
    const double r10 = ratio_near(nu1 * 10.0);
    const double r100 = ratio_near(nu1 * 100.0);
    res.divergent = r0 > 1.05 * r10 && r10 > 1.05 * r100;
    return res;
}

std::vector<std::pair<double, double>> gauss_gen_laguerre(int nodes,
                                                          double alpha) {
    if (nodes < 1) throw DomainError("need at least one quadrature node");
    if (!(alpha > -1.0)) throw DomainError("gen-Laguerre needs alpha > -1");
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(nodes, nodes);
    for (int i = 0; i < nodes; ++i) {
        J(i, i) = 2.0 * i + alpha + 1.0;
        if (i > 0) {
            const double b = std::sqrt(i * (i + alpha));
            J(i, i - 1) = b;
            J(i - 1, i) = b;
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
    std::vector<std::pair<double, double>> out(static_cast<std::size_t>(nodes));
    for (int i = 0; i < nodes; ++i) {
        const double v0 = es.eigenvectors()(0, i);
        out[static_cast<std::size_t>(i)] = {es.eigenvalues()(i), v0 * v0};
    }
    return out;
}

std::vector<std::pair<double, double>> gauss_hermite(int nodes) {
    if (nodes < 1) throw DomainError("need at least one quadrature node");
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(nodes, nodes);
    for (int i = 1; i < nodes; ++i) {
        const double b = std::sqrt(0.5 * i);
        J(i, i - 1) = b;
        J(i - 1, i) = b;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
    std::vector<std::pair<double, double>> out(static_cast<std::size_t>(nodes));
    for (int i = 0; i < nodes; ++i) {
        const double v0 = es.eigenvectors()(0, i);
        out[static_cast<std::size_t>(i)] = {es.eigenvalues()(i), v0 * v0};
    }
    return out;
}

WidebandExact wideband_small_exact(std::int64_t w, std::int64_t T,
                                   double lambda, int nodes) {
    if (w < 2 || w > 64) throw DomainError("exact reference expects 2 <= w <= 64");
    if (T < 1 || T > 16) throw DomainError("exact reference expects 1 <= T <= 16");
    if (!(lambda >= 0.0)) throw DomainError("lambda must be >= 0");
    if (nodes < 64) throw DomainError("use at least 64 quadrature nodes");

    WidebandExact out;
    out.p1_exact = type1_prob_exact(static_cast<double>(w));
    if (T == 1) return out; // no competing slot

    const double phi = threshold(static_cast<double>(w));
    const auto h_rule = gauss_gen_laguerre(nodes, 0.0); // Exp(1) beyond phi
    const auto a_rule = gauss_hermite(nodes);           // N(0, 1/2): x = a
    const auto q_rule =
        gauss_gen_laguerre(nodes, static_cast<double>(w) - 1.5);

    const double wt = static_cast<double>(w);
    double p2_given_success = 0.0;
    for (const auto& [hs, hw] : h_rule) {
        const double root = std::sqrt(lambda * (phi + hs));
        for (const auto& [av, aw] : a_rule) {
            double inner = 0.0;
            const double shifted = root + av;
            for (const auto& [qv, qw] : q_rule) {
                const double s = shifted * shifted + qv;
                const double cdf = boost::math::gamma_p(wt, s);
                inner += qw * (1.0 - std::pow(cdf, static_cast<double>(T - 1)));
            }
            p2_given_success += hw * aw * inner;
        }
    }
    out.p2_numeric = (1.0 - out.p1_exact) * p2_given_success;
    return out;
}

} // namespace csitlab
