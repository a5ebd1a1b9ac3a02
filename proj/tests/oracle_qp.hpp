#pragma once

// Brute-force constrained-QP oracle for the epsilon-SVR dual, independent of
// the solver under test. Solves
//   min 0.5 z'Qz + p'z   s.t.  0 <= z <= C,  s'z = 0
// over the 2n variables z = (alpha, alpha*) with signs s = (+1, -1) by
// accelerated projected gradient; the projection onto the box-plus-hyperplane
// set is computed exactly by bisection on the hyperplane multiplier.

#include <algorithm>
#include <cmath>
#include <vector>

#include "tuberegress/kernel.hpp"
#include "tuberegress/matrix.hpp"

namespace oracle {

struct DualProblem {
    size_t n = 0;
    std::vector<double> K; // n x n row-major
    std::vector<double> p; // size 2n
    double C = 1.0;

    static DualProblem build(const tuberegress::Matrix& X, const std::vector<double>& y, double C,
                             double epsilon, const tuberegress::ResolvedKernel& kernel) {
        DualProblem qp;
        qp.n = X.rows;
        qp.C = C;
        qp.K.resize(qp.n * qp.n);
        for (size_t i = 0; i < qp.n; ++i) {
            for (size_t j = 0; j < qp.n; ++j) {
                qp.K[i * qp.n + j] = tuberegress::kernel_eval(kernel, X.row(i), X.row(j));
            }
        }
        qp.p.resize(2 * qp.n);
        for (size_t i = 0; i < qp.n; ++i) {
            qp.p[i] = epsilon - y[i];
            qp.p[qp.n + i] = epsilon + y[i];
        }
        return qp;
    }

    double sign(size_t t) const { return t < n ? 1.0 : -1.0; }

    // gradient of the quadratic: grad_t = s_t * (K beta)_{t mod n} + p_t
    std::vector<double> gradient(const std::vector<double>& z) const {
        std::vector<double> beta(n);
        for (size_t i = 0; i < n; ++i) beta[i] = z[i] - z[n + i];
        std::vector<double> g(2 * n);
        for (size_t i = 0; i < n; ++i) {
            double acc = 0.0;
            for (size_t j = 0; j < n; ++j) acc += K[i * n + j] * beta[j];
            g[i] = acc + p[i];
            g[n + i] = -acc + p[n + i];
        }
        return g;
    }

    double objective(const std::vector<double>& z) const {
        std::vector<double> beta(n);
        for (size_t i = 0; i < n; ++i) beta[i] = z[i] - z[n + i];
        double quad = 0.0;
        for (size_t i = 0; i < n; ++i) {
            double acc = 0.0;
            for (size_t j = 0; j < n; ++j) acc += K[i * n + j] * beta[j];
            quad += beta[i] * acc;
        }
        double lin = 0.0;
        for (size_t t = 0; t < 2 * n; ++t) lin += p[t] * z[t];
        return 0.5 * quad + lin;
    }

    // exact projection onto {0 <= z <= C, s'z = 0}
    std::vector<double> project(const std::vector<double>& v) const {
        auto constraint = [&](double lam) {
            double acc = 0.0;
            for (size_t t = 0; t < 2 * n; ++t) {
                const double s = sign(t);
                acc += s * std::clamp(v[t] - lam * s, 0.0, C);
            }
            return acc; // non-increasing in lam
        };
        double span = 0.0;
        for (size_t t = 0; t < 2 * n; ++t) span = std::max(span, std::abs(v[t]));
        double lo = -(span + C + 1.0);
        double hi = span + C + 1.0;
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (constraint(mid) > 0.0) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        const double lam = 0.5 * (lo + hi);
        std::vector<double> z(2 * n);
        for (size_t t = 0; t < 2 * n; ++t) z[t] = std::clamp(v[t] - lam * sign(t), 0.0, C);
        return z;
    }

    double lipschitz() const {
        // inf-norm bound on the Hessian [K -K; -K K]
        double worst = 0.0;
        for (size_t i = 0; i < n; ++i) {
            double row = 0.0;
            for (size_t j = 0; j < n; ++j) row += std::abs(K[i * n + j]);
            worst = std::max(worst, 2.0 * row);
        }
        return std::max(worst, 1e-9);
    }

    // FISTA; returns the optimal objective value
    double solve(size_t iterations = 100000) const {
        const double eta = 1.0 / lipschitz();
        std::vector<double> z(2 * n, 0.0);
        std::vector<double> w = z, z_prev = z;
        double t_mom = 1.0;
        for (size_t k = 0; k < iterations; ++k) {
            const std::vector<double> g = gradient(w);
            std::vector<double> step(2 * n);
            for (size_t t = 0; t < 2 * n; ++t) step[t] = w[t] - eta * g[t];
            z_prev = z;
            z = project(step);
            const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t_mom * t_mom));
            for (size_t t = 0; t < 2 * n; ++t) {
                w[t] = z[t] + ((t_mom - 1.0) / t_next) * (z[t] - z_prev[t]);
            }
            t_mom = t_next;
        }
        return objective(z);
    }
};

// one-dimensional grid refinement for n = 2: beta1 = t, beta2 = -t
inline double grid_oracle_n2(const tuberegress::Matrix& X, const std::vector<double>& y, double C,
                             double epsilon, const tuberegress::ResolvedKernel& kernel) {
    const double k11 = tuberegress::kernel_eval(kernel, X.row(0), X.row(0));
    const double k22 = tuberegress::kernel_eval(kernel, X.row(1), X.row(1));
    const double k12 = tuberegress::kernel_eval(kernel, X.row(0), X.row(1));
    const double a = k11 + k22 - 2.0 * k12;
    auto f = [&](double t) {
        return 0.5 * a * t * t + 2.0 * epsilon * std::abs(t) - t * (y[0] - y[1]);
    };
    double lo = -C, hi = C;
    double best_t = 0.0, best = f(0.0);
    for (int round = 0; round < 60; ++round) {
        const double step = (hi - lo) / 400.0;
        for (int i = 0; i <= 400; ++i) {
            const double t = lo + step * i;
            const double v = f(t);
            if (v < best) {
                best = v;
                best_t = t;
            }
        }
        lo = std::max(-C, best_t - 2.0 * step);
        hi = std::min(C, best_t + 2.0 * step);
    }
    return best;
}

} // namespace oracle
