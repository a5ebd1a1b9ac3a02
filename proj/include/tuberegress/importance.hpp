#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "tuberegress/dataset.hpp"
#include "tuberegress/features.hpp"

namespace tuberegress {

// Kraskov k-nearest-neighbour mutual information estimate in nats, negatives
// clamped to 0. A seeded jitter at 1e-10 scale breaks ties in discrete-valued
// columns.
double mutual_information(std::span<const double> x, std::span<const double> y, size_t k,
                          uint64_t jitter_seed = 1);

struct FeatureImportance {
    std::string feature;
    double mi = 0.0;          // raw scores
    double pearson_abs = 0.0;
    double rf = 0.0;
    double mi_norm = 0.0;     // min-max normalized across features
    double pearson_norm = 0.0;
    double rf_norm = 0.0;
    double ensemble = 0.0;
    size_t rank = 0; // 1 = best
};

struct ImportanceReport {
    std::vector<FeatureImportance> entries; // sorted by rank
};

struct ImportanceWeights {
    double mi = 0.4;
    double pearson = 0.3;
    double rf = 0.3;
};

// The three scorers on the training split, min-max normalized per scorer and
// pooled as a weighted ensemble; ties broken by column order.
ImportanceReport ensemble_scores(const Dataset& ds, const ImportanceWeights& w, size_t forest_size,
                                 uint64_t seed, unsigned n_jobs = 0);

FeatureSet top_k(const ImportanceReport& report, size_t k);

} // namespace tuberegress
