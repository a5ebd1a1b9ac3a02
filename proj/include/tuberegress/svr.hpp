#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "tuberegress/kernel.hpp"
#include "tuberegress/matrix.hpp"

namespace tuberegress {

struct SvrParams {
    double C = 1.0;
    double epsilon = 0.1;
    KernelSpec kernel;
    double tol = 1e-3;        // maximal violating-pair gap threshold
    long long max_iter = -1;  // -1 = unlimited (hard safety cap of 1e7 pair updates)
    bool shrinking = true;
    size_t cache_mb = 500;
};

// Optional per-iteration probe; when attached the solver keeps the full
// gradient fresh so the recorded objective is exact.
struct SmoTrace {
    std::vector<double> objective;
};

// Fitted dual solution. beta[k] = alpha_k - alpha*_k for the k-th stored
// support vector; only rows with beta != 0 are stored.
struct SvrModel {
    Matrix support_rows;
    std::vector<size_t> support_indices; // into the training matrix
    std::vector<double> support_targets;
    std::vector<double> beta;
    double bias = 0.0;
    KernelSpec kernel_spec;
    ResolvedKernel kernel;
    double dual_objective_value = 0.0;
    long long n_iterations = 0;
    bool converged = true;
    double kkt_gap = 0.0;
    size_t n_train = 0;
    size_t n_features = 0;
};

// epsilon-SVR by sequential minimal optimization on the dual, maximal
// violating pair selection with second-order partner choice, optional
// shrinking. X must be pre-scaled by the caller.
SvrModel svr_fit(const Matrix& X, const std::vector<double>& y, const SvrParams& p,
                 SmoTrace* trace = nullptr);

std::vector<double> svr_predict(const SvrModel& m, const Matrix& X);
double svr_predict_one(const SvrModel& m, std::span<const double> x);

// Dual objective reached at the end of training (stored).
double dual_objective(const SvrModel& m);
// Same quantity recomputed from the support set in the canonical
// decomposition alpha = max(beta, 0), alpha* = max(-beta, 0).
double dual_objective_recompute(const SvrModel& m, double epsilon);

// Maximal violating-pair gap of the model against its training data, with any
// box excess max(|beta_i| - C, 0) folded in. Expects the training matrix the
// model was fitted on (support_indices address its rows).
double kkt_violation(const SvrModel& m, const Matrix& X, const std::vector<double>& y,
                     const SvrParams& p);

nlohmann::ordered_json svr_model_to_json(const SvrModel& m);
SvrModel svr_model_from_json(const nlohmann::ordered_json& j);

} // namespace tuberegress
