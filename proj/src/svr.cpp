#include "tuberegress/svr.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

#include "tuberegress/errors.hpp"

namespace tuberegress {

namespace {

constexpr double kTau = 1e-12;           // floor for the pair curvature
constexpr long long kHardIterCap = 10'000'000;

// The dual is solved over 2n box variables z = (alpha, alpha*) with signs
// s = (+1, -1) and the single constraint sum(s .* z) = 0. Everything the
// working-set selection needs reduces to two per-point values,
//   v_alpha(m) = y_m - g_m - eps   (role of alpha_m,  sign +1)
//   v_star(m)  = y_m - g_m + eps   (role of alpha*_m, sign -1)
// where g = K beta. A role is "up" (can serve as i) or "low" (can serve as j)
// depending on its headroom in the box; optimality is
//   max_up v - min_low v < tol.
struct Smo {
    const Matrix& X;
    const std::vector<double>& y;
    const SvrParams& p;
    ResolvedKernel kernel;
    size_t n;

    std::vector<double> alpha;      // z[0..n)
    std::vector<double> alpha_star; // z[n..2n)
    std::vector<double> beta;       // alpha - alpha_star
    std::vector<double> g;          // K beta, fresh on active points
    std::vector<double> diag;
    std::vector<uint8_t> active;
    std::vector<uint8_t> cold_streak;
    KernelCache cache;
    long long iterations = 0;
    bool any_shrunk = false;
    SmoTrace* trace;

    Smo(const Matrix& X_, const std::vector<double>& y_, const SvrParams& p_, SmoTrace* trace_)
        : X(X_), y(y_), p(p_), kernel(resolve_kernel(p_.kernel, X_)), n(X_.rows),
          alpha(n, 0.0), alpha_star(n, 0.0), beta(n, 0.0), g(n, 0.0), diag(n),
          active(n, 1), cold_streak(n, 0),
          cache(std::max<size_t>(p_.cache_mb, 1) * 1024 * 1024), trace(trace_) {
        for (size_t i = 0; i < n; ++i) diag[i] = kernel_eval(kernel, X.row(i), X.row(i));
    }

    double v_alpha(size_t m) const { return y[m] - g[m] - p.epsilon; }
    double v_star(size_t m) const { return y[m] - g[m] + p.epsilon; }

    // A selected role: data index, which half, and its v value.
    struct Role {
        size_t m = 0;
        bool star = false;
        double v = 0.0;
        bool valid = false;
    };

    Role max_up(bool full_set) const {
        Role best;
        best.v = -std::numeric_limits<double>::infinity();
        for (size_t m = 0; m < n; ++m) {
            if (!full_set && !active[m]) continue;
            if (alpha[m] < p.C) {
                const double v = v_alpha(m);
                if (v > best.v) best = {m, false, v, true};
            }
            if (alpha_star[m] > 0.0) {
                const double v = v_star(m);
                if (v > best.v) best = {m, true, v, true};
            }
        }
        return best;
    }

    double min_low(bool full_set) const {
        double out = std::numeric_limits<double>::infinity();
        for (size_t m = 0; m < n; ++m) {
            if (!full_set && !active[m]) continue;
            if (alpha[m] > 0.0) out = std::min(out, v_alpha(m));
            if (alpha_star[m] < p.C) out = std::min(out, v_star(m));
        }
        return out;
    }

    // Second-order partner: largest (v_i - v_t)^2 / curvature among low roles
    // with v_t < v_i.
    Role pick_low(const Role& up, const std::vector<double>& row_i) const {
        Role best;
        double best_gain = -1.0;
        const double di = diag[up.m];
        for (size_t m = 0; m < n; ++m) {
            if (!active[m]) continue;
            const double quad = std::max(di + diag[m] - 2.0 * row_i[m], kTau);
            if (alpha[m] > 0.0) {
                const double v = v_alpha(m);
                if (v < up.v) {
                    const double diff = up.v - v;
                    const double gain = diff * diff / quad;
                    if (gain > best_gain) {
                        best_gain = gain;
                        best = {m, false, v, true};
                    }
                }
            }
            if (alpha_star[m] < p.C) {
                const double v = v_star(m);
                if (v < up.v) {
                    const double diff = up.v - v;
                    const double gain = diff * diff / quad;
                    if (gain > best_gain) {
                        best_gain = gain;
                        best = {m, true, v, true};
                    }
                }
            }
        }
        return best;
    }

    // exact dual objective from the current state (needs fresh g everywhere)
    double objective_full() const {
        double quad = 0.0, lin = 0.0, eps_term = 0.0;
        for (size_t m = 0; m < n; ++m) {
            quad += beta[m] * g[m];
            lin += y[m] * beta[m];
            eps_term += alpha[m] + alpha_star[m];
        }
        return 0.5 * quad + p.epsilon * eps_term - lin;
    }

    void refresh_inactive_gradient() {
        std::vector<size_t> stale;
        for (size_t m = 0; m < n; ++m) {
            if (!active[m]) {
                g[m] = 0.0;
                stale.push_back(m);
            }
        }
        if (stale.empty()) return;
        for (size_t k = 0; k < n; ++k) {
            if (beta[k] == 0.0) continue;
            auto row = cache.row(k, X, kernel);
            for (size_t m : stale) g[m] += beta[k] * (*row)[m];
        }
    }

    void unshrink() {
        refresh_inactive_gradient();
        std::fill(active.begin(), active.end(), uint8_t{1});
        std::fill(cold_streak.begin(), cold_streak.end(), uint8_t{0});
        any_shrunk = false;
    }

    // Freeze bound points whose every possible role has violation below tol
    // for two consecutive checks (one full sweep apart).
    void shrink_pass(double up_max, double low_min) {
        for (size_t m = 0; m < n; ++m) {
            if (!active[m]) continue;
            const bool a_bound = (alpha[m] == 0.0 || alpha[m] == p.C);
            const bool s_bound = (alpha_star[m] == 0.0 || alpha_star[m] == p.C);
            bool cold = a_bound && s_bound;
            if (cold) {
                if (alpha[m] < p.C && v_alpha(m) - low_min >= p.tol) cold = false;
                if (alpha_star[m] > 0.0 && v_star(m) - low_min >= p.tol) cold = false;
                if (alpha[m] > 0.0 && up_max - v_alpha(m) >= p.tol) cold = false;
                if (alpha_star[m] < p.C && up_max - v_star(m) >= p.tol) cold = false;
            }
            if (cold) {
                if (cold_streak[m] >= 1) {
                    active[m] = 0;
                    any_shrunk = true;
                } else {
                    cold_streak[m] = 1;
                }
            } else {
                cold_streak[m] = 0;
            }
        }
    }

    // One pair update. Returns the achieved step delta.
    double update_pair(const Role& up, const Role& low, const std::vector<double>& row_i) {
        const size_t iq = up.m, jq = low.m;
        const double quad = std::max(diag[iq] + diag[jq] - 2.0 * row_i[jq], kTau);
        double delta = (up.v - low.v) / quad;

        const double cap_i = up.star ? alpha_star[iq] : p.C - alpha[iq];
        const double cap_j = low.star ? p.C - alpha_star[jq] : alpha[jq];
        delta = std::min({delta, cap_i, cap_j});

        if (up.star) {
            alpha_star[iq] = (delta == cap_i) ? 0.0 : alpha_star[iq] - delta;
        } else {
            alpha[iq] = (delta == cap_i) ? p.C : alpha[iq] + delta;
        }
        if (low.star) {
            alpha_star[jq] = (delta == cap_j) ? p.C : alpha_star[jq] + delta;
        } else {
            alpha[jq] = (delta == cap_j) ? 0.0 : alpha[jq] - delta;
        }
        beta[iq] = alpha[iq] - alpha_star[iq];
        beta[jq] = alpha[jq] - alpha_star[jq];

        if (iq != jq) {
            auto row_j = cache.row(jq, X, kernel);
            const bool full = trace != nullptr;
            for (size_t m = 0; m < n; ++m) {
                if (!full && !active[m]) continue;
                g[m] += delta * (row_i[m] - (*row_j)[m]);
            }
        }
        return delta;
    }

    // Main loop. Returns final violating-pair gap over the full set.
    double solve() {
        const long long iter_cap = (p.max_iter < 0) ? kHardIterCap : std::min(p.max_iter, kHardIterCap);
        const size_t shrink_interval = std::min<size_t>(std::max<size_t>(n, 1), 1000);
        size_t since_shrink_check = 0;

        for (;;) {
            Role up = max_up(false);
            double low_min = min_low(false);
            double gap = up.valid && std::isfinite(low_min)
                             ? up.v - low_min
                             : -std::numeric_limits<double>::infinity();

            if (gap < p.tol) {
                if (p.shrinking && any_shrunk) {
                    unshrink();
                    up = max_up(false);
                    low_min = min_low(false);
                    gap = up.valid && std::isfinite(low_min)
                              ? up.v - low_min
                              : -std::numeric_limits<double>::infinity();
                    if (gap < p.tol) return gap;
                } else {
                    return gap;
                }
            }

            if (iterations >= iter_cap) {
                if (any_shrunk) unshrink();
                Role fup = max_up(true);
                const double flow = min_low(true);
                return fup.valid && std::isfinite(flow) ? fup.v - flow
                                                        : -std::numeric_limits<double>::infinity();
            }

            auto row_i = cache.row(up.m, X, kernel);
            Role low = pick_low(up, *row_i);
            if (!low.valid) {
                // nothing below v_i on the low side: optimal over active set
                if (p.shrinking && any_shrunk) {
                    unshrink();
                    continue;
                }
                return gap;
            }

            update_pair(up, low, *row_i);
            ++iterations;
            if (trace) trace->objective.push_back(objective_full());

            if (p.shrinking && ++since_shrink_check >= shrink_interval) {
                since_shrink_check = 0;
                const Role u2 = max_up(false);
                const double l2 = min_low(false);
                if (u2.valid && std::isfinite(l2)) shrink_pass(u2.v, l2);
            }
        }
    }

    // Mean implied bias over free variables, else midpoint of the feasible
    // interval from the full-set extremes.
    double compute_bias() {
        double sum = 0.0;
        size_t count = 0;
        for (size_t m = 0; m < n; ++m) {
            if (alpha[m] > 0.0 && alpha[m] < p.C) {
                sum += v_alpha(m);
                ++count;
            }
            if (alpha_star[m] > 0.0 && alpha_star[m] < p.C) {
                sum += v_star(m);
                ++count;
            }
        }
        if (count > 0) return sum / static_cast<double>(count);
        const Role up = max_up(true);
        const double low = min_low(true);
        if (up.valid && std::isfinite(low)) return 0.5 * (up.v + low);
        if (up.valid) return up.v;
        return std::isfinite(low) ? low : 0.0;
    }
};

} // namespace

SvrModel svr_fit(const Matrix& X, const std::vector<double>& y, const SvrParams& p, SmoTrace* trace) {
    if (X.rows == 0 || X.rows != y.size()) {
        throw DataError(Errc::dimension_mismatch,
                        "DimensionMismatch: X has " + std::to_string(X.rows) + " rows, y has " +
                            std::to_string(y.size()));
    }
    if (!(p.C > 0.0) || !(p.epsilon >= 0.0) || !(p.tol > 0.0)) {
        throw ConfigError(Errc::config_invalid, "SvrParams require C > 0, epsilon >= 0, tol > 0");
    }
    for (double v : X.data) {
        if (!std::isfinite(v)) throw DataError(Errc::non_finite_input, "NonFiniteInput in X");
    }
    for (double v : y) {
        if (!std::isfinite(v)) throw DataError(Errc::non_finite_input, "NonFiniteInput in y");
    }

    Smo smo(X, y, p, trace);
    const double final_gap = smo.solve();
    if (smo.any_shrunk) smo.unshrink();

    SvrModel m;
    m.kernel_spec = p.kernel;
    m.kernel = smo.kernel;
    m.n_train = X.rows;
    m.n_features = X.cols;
    m.n_iterations = smo.iterations;
    m.kkt_gap = final_gap;
    m.converged = final_gap < p.tol;
    m.bias = smo.compute_bias();
    m.dual_objective_value = smo.objective_full();

    std::vector<size_t> sv;
    for (size_t i = 0; i < smo.n; ++i) {
        if (smo.beta[i] != 0.0) sv.push_back(i);
    }
    m.support_rows = X.take_rows(sv);
    m.support_indices = sv;
    m.beta.reserve(sv.size());
    m.support_targets.reserve(sv.size());
    for (size_t i : sv) {
        m.beta.push_back(smo.beta[i]);
        m.support_targets.push_back(y[i]);
    }
    return m;
}

double svr_predict_one(const SvrModel& m, std::span<const double> x) {
    if (x.size() != m.n_features) {
        throw DataError(Errc::dimension_mismatch,
                        "DimensionMismatch: query has " + std::to_string(x.size()) +
                            " features, model expects " + std::to_string(m.n_features));
    }
    double f = m.bias;
    for (size_t k = 0; k < m.beta.size(); ++k) {
        f += m.beta[k] * kernel_eval(m.kernel, m.support_rows.row(k), x);
    }
    return f;
}

std::vector<double> svr_predict(const SvrModel& m, const Matrix& X) {
    std::vector<double> out(X.rows);
    for (size_t i = 0; i < X.rows; ++i) out[i] = svr_predict_one(m, X.row(i));
    return out;
}

double dual_objective(const SvrModel& m) { return m.dual_objective_value; }

double dual_objective_recompute(const SvrModel& m, double epsilon) {
    // 0.5 b'Kb + eps*sum|beta| - y'b over the support set; the canonical
    // decomposition sum(alpha+alpha*) = sum|beta| holds because no exit state
    // keeps both halves of a pair positive when epsilon > 0.
    const size_t k = m.beta.size();
    double quad = 0.0, lin = 0.0, eps_term = 0.0;
    for (size_t a = 0; a < k; ++a) {
        for (size_t b = 0; b < k; ++b) {
            quad += m.beta[a] * m.beta[b] * kernel_eval(m.kernel, m.support_rows.row(a), m.support_rows.row(b));
        }
        lin += m.support_targets[a] * m.beta[a];
        eps_term += std::abs(m.beta[a]);
    }
    return 0.5 * quad + epsilon * eps_term - lin;
}

double kkt_violation(const SvrModel& m, const Matrix& X, const std::vector<double>& y,
                     const SvrParams& p) {
    const size_t n = X.rows;
    std::vector<double> beta_full(n, 0.0);
    double box_excess = 0.0;
    for (size_t k = 0; k < m.beta.size(); ++k) {
        if (k < m.support_indices.size() && m.support_indices[k] < n) {
            beta_full[m.support_indices[k]] = m.beta[k];
        }
        box_excess = std::max(box_excess, std::abs(m.beta[k]) - p.C);
    }
    std::vector<double> g(n, 0.0);
    for (size_t k = 0; k < m.beta.size(); ++k) {
        for (size_t i = 0; i < n; ++i) {
            g[i] += m.beta[k] * kernel_eval(m.kernel, m.support_rows.row(k), X.row(i));
        }
    }
    double up = -std::numeric_limits<double>::infinity();
    double low = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < n; ++i) {
        const double a = std::max(beta_full[i], 0.0);
        const double s = std::max(-beta_full[i], 0.0);
        const double va = y[i] - g[i] - p.epsilon;
        const double vs = y[i] - g[i] + p.epsilon;
        if (a < p.C) up = std::max(up, va);
        if (s > 0.0) up = std::max(up, vs);
        if (a > 0.0) low = std::min(low, va);
        if (s < p.C) low = std::min(low, vs);
    }
    double gap = -std::numeric_limits<double>::infinity();
    if (std::isfinite(up) && std::isfinite(low)) gap = up - low;
    if (box_excess > 0.0) gap = std::max(gap, box_excess);
    return gap;
}

nlohmann::ordered_json svr_model_to_json(const SvrModel& m) {
    nlohmann::ordered_json j;
    j["params"] = {
        {"kernel", kernel_kind_name(m.kernel_spec.kind)},
        {"gamma", gamma_spec_name(m.kernel_spec.gamma)},
        {"coef0", m.kernel_spec.coef0},
        {"degree", m.kernel_spec.degree},
    };
    j["resolved_gamma"] = m.kernel.gamma;
    j["beta"] = m.beta;
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (size_t i = 0; i < m.support_rows.rows; ++i) {
        auto r = m.support_rows.row(i);
        rows.push_back(std::vector<double>(r.begin(), r.end()));
    }
    j["support_rows"] = std::move(rows);
    j["support_indices"] = m.support_indices;
    j["support_targets"] = m.support_targets;
    j["b"] = m.bias;
    j["dual_objective"] = m.dual_objective_value;
    j["n_iterations"] = m.n_iterations;
    j["converged"] = m.converged;
    j["kkt_gap"] = m.kkt_gap;
    j["n_train"] = m.n_train;
    j["n_features"] = m.n_features;
    return j;
}

SvrModel svr_model_from_json(const nlohmann::ordered_json& j) {
    SvrModel m;
    m.kernel_spec.kind = kernel_kind_from_name(j.at("params").at("kernel").get<std::string>());
    m.kernel_spec.gamma = gamma_spec_from_name(j.at("params").at("gamma").get<std::string>());
    m.kernel_spec.coef0 = j.at("params").at("coef0").get<double>();
    m.kernel_spec.degree = j.at("params").at("degree").get<int>();
    m.kernel.kind = m.kernel_spec.kind;
    m.kernel.gamma = j.at("resolved_gamma").get<double>();
    m.kernel.coef0 = m.kernel_spec.coef0;
    m.kernel.degree = m.kernel_spec.degree;
    m.beta = j.at("beta").get<std::vector<double>>();
    const auto& rows = j.at("support_rows");
    m.n_features = j.at("n_features").get<size_t>();
    m.support_rows = Matrix(rows.size(), m.n_features);
    for (size_t i = 0; i < rows.size(); ++i) {
        const auto r = rows[i].get<std::vector<double>>();
        std::copy(r.begin(), r.end(), m.support_rows.row(i).begin());
    }
    m.support_indices = j.at("support_indices").get<std::vector<size_t>>();
    m.support_targets = j.at("support_targets").get<std::vector<double>>();
    m.bias = j.at("b").get<double>();
    m.dual_objective_value = j.at("dual_objective").get<double>();
    m.n_iterations = j.at("n_iterations").get<long long>();
    m.converged = j.at("converged").get<bool>();
    m.kkt_gap = j.at("kkt_gap").get<double>();
    m.n_train = j.at("n_train").get<size_t>();
    return m;
}

} // namespace tuberegress
