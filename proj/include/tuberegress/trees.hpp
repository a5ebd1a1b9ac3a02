#pragma once

#include <cstdint>
#include <vector>

#include "tuberegress/matrix.hpp"

namespace tuberegress {

struct MaxFeatures {
    enum class Mode { all, sqrt_mode, fraction };
    Mode mode = Mode::all;
    double fraction = 1.0;

    static MaxFeatures all() { return {Mode::all, 1.0}; }
    static MaxFeatures sqrt_mode() { return {Mode::sqrt_mode, 0.0}; }
    static MaxFeatures fraction_of(double f) { return {Mode::fraction, f}; }
};

struct TreeParams {
    int max_depth = -1; // -1 = unlimited
    size_t min_samples_split = 2;
    size_t min_samples_leaf = 1;
    MaxFeatures max_features;
    uint64_t seed = 0;
    bool bootstrap = true; // forest-level; single trees ignore it
};

// Binary nodes in an array; feature == -1 marks a leaf. Split nodes carry the
// weighted impurity decrease (sse_node - sse_left - sse_right) / n_total used
// by impurity importance.
struct TreeNode {
    int feature = -1;
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    double value = 0.0; // leaf mean
    double impurity_decrease = 0.0;
    size_t n_samples = 0;
};

struct RegressionTree {
    std::vector<TreeNode> nodes;
    size_t n_features = 0;
};

struct RandomForest {
    std::vector<RegressionTree> trees;
    std::vector<uint64_t> tree_seeds;
    size_t n_features = 0;
};

// Greedy CART by maximal variance reduction; split candidates are midpoints
// between consecutive distinct sorted values; ties break toward the smaller
// feature index, then the smaller threshold.
RegressionTree tree_fit(const Matrix& X, const std::vector<double>& y, const TreeParams& p);

double tree_predict_one(const RegressionTree& t, std::span<const double> x);
std::vector<double> tree_predict(const RegressionTree& t, const Matrix& X);

RandomForest forest_fit(const Matrix& X, const std::vector<double>& y, size_t n_estimators,
                        const TreeParams& p, unsigned n_jobs = 0);
std::vector<double> forest_predict(const RandomForest& f, const Matrix& X);

// Per-feature impurity decrease summed over splits, averaged over trees,
// normalized to sum to 1 (all-zero stays all-zero).
std::vector<double> impurity_importance(const RandomForest& f);

} // namespace tuberegress
