#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "tuberegress/dataset.hpp"

namespace tuberegress {

struct MetricsBundle {
    double r2 = 0.0;
    double rmse = 0.0;
    double mae = 0.0;
    double explained_variance = 0.0;
    // absent when any target is exactly zero (ZeroTarget); the other metrics
    // are still returned
    std::optional<double> mape_percent;
};

MetricsBundle compute_metrics(std::span<const double> y, std::span<const double> yhat);
double r2_score(std::span<const double> y, std::span<const double> yhat);
// Throws DataError(zero_target) when any y is exactly 0.
double mape_percent_strict(std::span<const double> y, std::span<const double> yhat);

// Shuffled indices partitioned into k near-equal validation folds (sizes
// differ by at most 1), deterministic per seed.
std::vector<std::vector<size_t>> kfold_indices(size_t n, size_t k, uint64_t seed);

struct CvResult {
    std::vector<double> fold_scores;
    double mean = 0.0;
    double stddev = 0.0; // population
    double ci_low = 0.0; // mean -/+ 1.96 * stddev
    double ci_high = 0.0;
};

CvResult summarize_cv(std::vector<double> fold_scores);

// fold_scorer fits everything (preprocessor and model) on the training part
// only and returns the fold's validation R^2.
using FoldScorer = std::function<double(const Dataset& fold_train, const Dataset& fold_val)>;

CvResult cross_validate(const FoldScorer& fold_scorer, const Dataset& ds, size_t k, uint64_t seed,
                        unsigned n_jobs = 0);

} // namespace tuberegress
