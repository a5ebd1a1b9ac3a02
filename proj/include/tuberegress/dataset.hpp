#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "tuberegress/matrix.hpp"

namespace tuberegress {

// Validated feature matrix + target vector with named columns.
struct Dataset {
    std::vector<std::string> columns; // feature names, size == X.cols
    Matrix X;                         // n x d
    std::vector<double> y;            // length n
    std::string target_name = "target";
    std::string provenance;

    size_t n_rows() const { return X.rows; }
    size_t n_cols() const { return X.cols; }

    bool has_column(const std::string& name) const;
    size_t column_index(const std::string& name) const; // throws DataError(unknown_feature)
    std::vector<double> column_copy(size_t j) const { return X.column_copy(j); }

    Dataset take_rows(std::span<const size_t> idx) const;
};

struct SplitPair {
    Dataset train;
    Dataset test;
    std::vector<size_t> train_indices; // indices into the parent dataset
    std::vector<size_t> test_indices;
    double test_fraction = 0.0;
    size_t n_bins = 0;
    uint64_t seed = 0;
};

struct ColumnSummary {
    std::string name;
    double mean, median, stddev, min, max, q1, q3;
};

struct SummaryStats {
    std::vector<ColumnSummary> columns; // features first, target last
};

// q-th quantile of a sorted sample, linear interpolation between order
// statistics (h = (n-1)q convention).
double quantile_sorted(std::span<const double> sorted_values, double q);

double population_mean(std::span<const double> v);
double population_std(std::span<const double> v);
double pearson_correlation(std::span<const double> a, std::span<const double> b);

// Load and validate a CSV: header row, all cells finite numbers, no missing
// entries, no bitwise-duplicate rows. `target_column` is removed from the
// feature matrix and becomes y.
Dataset load_csv(const std::string& path, const std::string& target_column);

SummaryStats summary_stats(const Dataset& ds);

// Pearson correlation matrix over the feature columns, optionally with the
// target appended as the last row/column. Zero-variance columns correlate 0
// with everything; the diagonal is exactly 1.
Matrix correlation_matrix(const Dataset& ds, bool include_target);

// Stratified split on quantile bins of the target. Bin edges are computed on
// the parent dataset; rows inside each bin are shuffled by a deterministic
// generator seeded from `seed`, then allotted to test by largest remainder so
// the total test count is exact and each bin is within one row of
// test_fraction * bin_size.
SplitPair stratified_split(const Dataset& ds, double test_fraction, size_t n_bins, uint64_t seed);

// Uniform sample of n rows without replacement, in draw order.
Dataset sample_subset(const Dataset& ds, size_t n, uint64_t seed);
std::vector<size_t> sample_subset_indices(size_t n_rows, size_t n, uint64_t seed);

} // namespace tuberegress
