#include "vcell/power_solver.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include "vcell/format.hpp"

namespace vcell {

namespace {

constexpr double kLn2 = std::numbers::ln2;

// Simultaneous update of all components. For the component (u,b,k) the
// update is
//   p' = W_k a(u,b,k) / (lambda_u ln2 + W_k T(u,b,k)),
// where T(u,b,k) sums, over every other component (u',b'), the marginal
// damage user u's transmission does to that component's surrogate rate:
//   T(u,b,k) = sum_{(u',b') != (u,b)} a(u',b',k) g(u,b',k) / D(u',b',k)
// with D the interference-plus-noise each component sees. Factoring the sum
// through per-BS totals makes a sweep O(U*B*K).
void sweep_once(const CellView& view, const Tensor3& p, const Tensor3& alpha,
                const std::vector<char>* frozen, double lambda_tol,
                Tensor3& out, std::vector<double>& lambda) {
    const std::size_t U = view.num_users(), B = view.num_bs(), K = view.num_bands();

    Matrix ptot = aggregate_user_band(p);

    // price(u,b,k) = alpha / D, the per-component sensitivity
    Tensor3 price(U, B, K);
    Matrix sprice(B, K, 0.0);
    for (std::size_t b = 0; b < B; ++b)
        for (std::size_t k = 0; k < K; ++k) {
            double rx = 0.0;
            for (std::size_t u = 0; u < U; ++u) rx += view.gain(u, b, k) * ptot(u, k);
            double col = 0.0;
            for (std::size_t u = 0; u < U; ++u) {
                const std::size_t idx = (u * B + b) * K + k;
                double pr = 0.0;
                const double a = alpha(u, b, k);
                if (a > 0.0 && !(frozen && (*frozen)[idx])) {
                    const double denom =
                        view.noise(b, k) + rx - view.gain(u, b, k) * p(u, b, k);
                    pr = a / denom;
                }
                price(u, b, k) = pr;
                col += pr;
            }
            sprice(b, k) = col;
        }

    std::vector<double> num(B * K), den(B * K);
    std::vector<std::size_t> comp_b(B * K), comp_k(B * K);

    for (std::size_t u = 0; u < U; ++u) {
        // q(k) = sum_b g(u,b,k) * sprice(b,k); own term subtracted per component
        std::size_t n_active = 0;
        for (std::size_t k = 0; k < K; ++k) {
            double q = 0.0;
            for (std::size_t b = 0; b < B; ++b) q += view.gain(u, b, k) * sprice(b, k);
            for (std::size_t b = 0; b < B; ++b) {
                const std::size_t idx = (u * B + b) * K + k;
                const double a = alpha(u, b, k);
                out(u, b, k) = 0.0;
                if (!(a > 0.0) || (frozen && (*frozen)[idx])) continue;
                const double t = std::max(0.0, q - view.gain(u, b, k) * price(u, b, k));
                num[n_active] = view.band_width[k] * a;
                den[n_active] = view.band_width[k] * t;
                comp_b[n_active] = b;
                comp_k[n_active] = k;
                ++n_active;
            }
        }
        if (n_active == 0) {
            lambda[u] = 0.0;
            continue;
        }
        const double lam = solve_lambda(view.budget_mw[u],
                                        std::span(num.data(), n_active),
                                        std::span(den.data(), n_active), lambda_tol);
        lambda[u] = lam;
        for (std::size_t i = 0; i < n_active; ++i) {
            const double v = num[i] / (lam * kLn2 + den[i]);
            if (!std::isfinite(v))
                throw std::runtime_error("fixed_point_sweep: non-finite power update");
            out(u, comp_b[i], comp_k[i]) = v;
        }
    }
}

} // namespace

std::pair<double, double> alpha_beta(double z0) {
    const double z = std::max(z0, 1e-100);
    const double a = z / (1.0 + z);
    const double b = std::log1p(z) - a * std::log(z);
    return {a, b};
}

double solve_lambda(double budget, std::span<const double> num,
                    std::span<const double> den, double tol) {
    if (!(budget > 0.0)) throw std::invalid_argument("solve_lambda: budget must be > 0");

    auto total = [&](double lam) {
        double s = 0.0;
        for (std::size_t i = 0; i < num.size(); ++i)
            if (num[i] > 0.0) s += num[i] / (lam * kLn2 + den[i]);
        return s;
    };

    if (total(0.0) <= budget) return 0.0;

    double sum_num = 0.0;
    for (double n : num)
        if (n > 0.0) sum_num += n;

    // total(hi) <= sum_num / (hi ln2) = budget, so the root is in [0, hi].
    // Stop on the feasible side once the complementary-slackness product
    // lambda * (budget - total) is negligible against the budget.
    double lo = 0.0, hi = sum_num / (budget * kLn2);
    for (int it = 0; it < 300; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double f = total(mid);
        if (f <= budget && (budget - f) * std::max(1.0, mid) <= tol * budget)
            return mid;
        if (f > budget)
            lo = mid;
        else
            hi = mid;
        if (hi - lo <= 1e-16 * std::max(1.0, hi)) break;
    }
    return hi;
}

Tensor3 fixed_point_sweep(const CellView& view, const Tensor3& power,
                          const Tensor3& alpha, double lambda_tol,
                          std::vector<double>* lambda_out) {
    Tensor3 out(power.dim0(), power.dim1(), power.dim2());
    std::vector<double> lambda(view.num_users(), 0.0);
    sweep_once(view, power, alpha, nullptr, lambda_tol, out, lambda);
    if (lambda_out) *lambda_out = std::move(lambda);
    return out;
}

PowerSolveResult solve_power_continuous(const CellView& view,
                                        const SolverSettings& settings,
                                        const ChannelAssignment* init_gamma,
                                        const Matrix* init_user_band) {
    const std::size_t U = view.num_users(), B = view.num_bs(), K = view.num_bands();
    PowerSolveResult res;
    res.power = Tensor3(U, B, K, 0.0);
    if (U == 0) {
        res.converged = true;
        return res;
    }

    Tensor3 p(U, B, K, 0.0);
    Tensor3 alpha(U, B, K, 1.0);

    if (init_gamma) {
        for (std::size_t u = 0; u < U; ++u)
            for (std::size_t k = 0; k < K; ++k) {
                std::size_t selected = 0;
                for (std::size_t b = 0; b < B; ++b)
                    if ((*init_gamma)(u, b, k)) ++selected;
                const double target = init_user_band
                                          ? (*init_user_band)(u, k)
                                          : view.budget_mw[u] / double(K);
                for (std::size_t b = 0; b < B; ++b) {
                    alpha(u, b, k) = (*init_gamma)(u, b, k) ? 1.0 : 0.0;
                    p(u, b, k) = (*init_gamma)(u, b, k) ? target / double(selected) : 0.0;
                }
            }
    } else {
        for (std::size_t u = 0; u < U; ++u)
            for (std::size_t b = 0; b < B; ++b)
                for (std::size_t k = 0; k < K; ++k)
                    p(u, b, k) = view.budget_mw[u] / double(B * K);
    }
    for (auto& v : p.data()) v = std::max(v, settings.power_floor);

    std::vector<char> frozen(p.size(), 0);
    std::vector<int> pinned(p.size(), 0);
    std::vector<double> lambda(U, 0.0);

    double best_rate = component_sum_rate(view, p);
    Tensor3 best_p = p;
    Tensor3 best_alpha = alpha;
    std::vector<double> best_lambda = lambda;
    double prev_rate = best_rate;

    Tensor3 next(U, B, K);

    for (int outer = 0; outer < settings.outer_max; ++outer) {
        if (outer > 0) {
            const Tensor3 z = sinr(view, p);
            for (std::size_t i = 0; i < p.size(); ++i) {
                if (frozen[i]) {
                    alpha.data()[i] = 0.0;
                    continue;
                }
                const double zi = z.data()[i];
                alpha.data()[i] = zi / (1.0 + zi);
                if (settings.check_surrogate && zi > 0.0) {
                    const auto [a, b] = alpha_beta(zi);
                    const double at_z0 = a * std::log(zi) + b - std::log1p(zi);
                    double worst = std::abs(at_z0);
                    for (const double zs : {0.25 * zi, 4.0 * zi}) {
                        const double gap = a * std::log(zs) + b - std::log1p(zs);
                        worst = std::max(worst, gap); // bound violated when positive
                    }
                    res.max_surrogate_violation =
                        std::max(res.max_surrogate_violation, worst);
                }
            }
        }

        int sweeps = 0;
        double rel = 0.0;
        for (int s = 0; s < settings.inner_max; ++s) {
            ++sweeps;
            sweep_once(view, p, alpha, &frozen, settings.lambda_tol, next, lambda);
            rel = 0.0;
            for (std::size_t u = 0; u < U; ++u) {
                const double scale = view.budget_mw[u];
                for (std::size_t b = 0; b < B; ++b)
                    for (std::size_t k = 0; k < K; ++k) {
                        const std::size_t i = (u * B + b) * K + k;
                        double v = next.data()[i];
                        if (frozen[i]) {
                            v = 0.0;
                        } else if (v <= settings.power_floor) {
                            v = settings.power_floor;
                            if (++pinned[i] >= settings.freeze_after) {
                                frozen[i] = 1;
                                v = 0.0;
                            }
                        } else {
                            pinned[i] = 0;
                        }
                        rel = std::max(rel, std::abs(v - p.data()[i]) / scale);
                        next.data()[i] = v;
                    }
            }
            std::swap(p, next);
            if (rel < settings.fp_tol) break;
        }

        const double rate = component_sum_rate(view, p);
        if (settings.collect_trace)
            res.trace.push_back({outer, sweeps, rate, rel, lambda});
        if (rate > best_rate) {
            best_rate = rate;
            best_p = p;
            best_alpha = alpha;
            best_lambda = lambda;
        }
        res.outer_iters = outer + 1;
        if (std::abs(rate - prev_rate) <=
            settings.fp_tol * std::max(1.0, std::abs(prev_rate))) {
            res.converged = true;
            break;
        }
        prev_rate = rate;
    }

    res.power = std::move(best_p);
    res.rate_bps = best_rate;
    res.alpha = std::move(best_alpha);
    res.lambda = std::move(best_lambda);
    return res;
}

std::vector<double> power_concentration(const Tensor3& power) {
    std::vector<double> shares;
    for (std::size_t u = 0; u < power.dim0(); ++u)
        for (std::size_t k = 0; k < power.dim2(); ++k) {
            double tot = 0.0, top = 0.0;
            for (std::size_t b = 0; b < power.dim1(); ++b) {
                tot += power(u, b, k);
                top = std::max(top, power(u, b, k));
            }
            if (tot > 0.0) shares.push_back(top / tot);
        }
    return shares;
}

void write_solver_trace_csv(const std::vector<SolverTraceRow>& trace, std::ostream& out) {
    out << "outer,sweeps,rate_bps,max_rel_change,lambda\n";
    for (const auto& row : trace) {
        out << row.outer << ',' << row.sweeps << ',' << format_double(row.rate_bps)
            << ',' << format_double(row.max_rel_change) << ',';
        for (std::size_t i = 0; i < row.lambda.size(); ++i) {
            if (i) out << ';';
            out << format_double(row.lambda[i]);
        }
        out << '\n';
    }
}

} // namespace vcell
