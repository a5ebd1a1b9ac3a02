#include "tuberegress/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "tuberegress/errors.hpp"
#include "tuberegress/parallel.hpp"
#include "tuberegress/rng.hpp"

namespace tuberegress {

double r2_score(std::span<const double> y, std::span<const double> yhat) {
    const size_t n = y.size();
    const double mean = population_mean(y);
    double ss_res = 0.0, ss_tot = 0.0;
    for (size_t i = 0; i < n; ++i) {
        ss_res += (y[i] - yhat[i]) * (y[i] - yhat[i]);
        ss_tot += (y[i] - mean) * (y[i] - mean);
    }
    if (ss_tot == 0.0) return ss_res == 0.0 ? 1.0 : 0.0;
    return 1.0 - ss_res / ss_tot;
}

double mape_percent_strict(std::span<const double> y, std::span<const double> yhat) {
    double acc = 0.0;
    for (size_t i = 0; i < y.size(); ++i) {
        if (y[i] == 0.0) {
            throw DataError(Errc::zero_target, "ZeroTarget: MAPE undefined at index " + std::to_string(i));
        }
        acc += std::abs(y[i] - yhat[i]) / std::abs(y[i]);
    }
    return 100.0 * acc / static_cast<double>(y.size());
}

MetricsBundle compute_metrics(std::span<const double> y, std::span<const double> yhat) {
    if (y.size() != yhat.size() || y.size() < 2) {
        throw DataError(Errc::dimension_mismatch, "compute_metrics: needs equal lengths, n >= 2");
    }
    const size_t n = y.size();
    MetricsBundle m;
    m.r2 = r2_score(y, yhat);

    double se = 0.0, ae = 0.0;
    std::vector<double> residual(n);
    bool any_zero = false;
    for (size_t i = 0; i < n; ++i) {
        const double e = y[i] - yhat[i];
        residual[i] = e;
        se += e * e;
        ae += std::abs(e);
        if (y[i] == 0.0) any_zero = true;
    }
    m.rmse = std::sqrt(se / static_cast<double>(n));
    m.mae = ae / static_cast<double>(n);

    const double var_y = population_std(y) * population_std(y);
    const double var_res = population_std(residual) * population_std(residual);
    m.explained_variance = var_y == 0.0 ? (var_res == 0.0 ? 1.0 : 0.0) : 1.0 - var_res / var_y;

    if (!any_zero) m.mape_percent = mape_percent_strict(y, yhat);
    return m;
}

std::vector<std::vector<size_t>> kfold_indices(size_t n, size_t k, uint64_t seed) {
    if (k < 2 || k > n) {
        throw DataError(Errc::k_too_large, "KTooLarge: k=" + std::to_string(k) + " with n=" + std::to_string(n));
    }
    std::vector<size_t> idx(n);
    std::iota(idx.begin(), idx.end(), size_t{0});
    Rng rng(seed);
    rng.shuffle(idx);

    std::vector<std::vector<size_t>> folds(k);
    const size_t base = n / k;
    const size_t extra = n % k; // first `extra` folds get one more row
    size_t pos = 0;
    for (size_t f = 0; f < k; ++f) {
        const size_t len = base + (f < extra ? 1 : 0);
        folds[f].assign(idx.begin() + static_cast<long>(pos), idx.begin() + static_cast<long>(pos + len));
        pos += len;
    }
    return folds;
}

CvResult summarize_cv(std::vector<double> fold_scores) {
    CvResult r;
    r.mean = population_mean(fold_scores);
    r.stddev = population_std(fold_scores);
    r.ci_low = r.mean - 1.96 * r.stddev;
    r.ci_high = r.mean + 1.96 * r.stddev;
    r.fold_scores = std::move(fold_scores);
    return r;
}

CvResult cross_validate(const FoldScorer& fold_scorer, const Dataset& ds, size_t k, uint64_t seed,
                        unsigned n_jobs) {
    const auto folds = kfold_indices(ds.n_rows(), k, seed);
    std::vector<double> scores(k);
    parallel_for(k, n_jobs, [&](size_t f) {
        std::vector<uint8_t> in_val(ds.n_rows(), 0);
        for (size_t i : folds[f]) in_val[i] = 1;
        std::vector<size_t> train_idx;
        train_idx.reserve(ds.n_rows() - folds[f].size());
        for (size_t i = 0; i < ds.n_rows(); ++i) {
            if (!in_val[i]) train_idx.push_back(i);
        }
        const Dataset fold_train = ds.take_rows(train_idx);
        const Dataset fold_val = ds.take_rows(folds[f]);
        try {
            scores[f] = fold_scorer(fold_train, fold_val);
        } catch (const Error& e) {
            throw FitError(Errc::fit_failed,
                           "fold " + std::to_string(f) + " failed: " + std::string(e.what()));
        }
    });
    return summarize_cv(std::move(scores));
}

} // namespace tuberegress
