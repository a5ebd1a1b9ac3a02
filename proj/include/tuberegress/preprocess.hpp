#pragma once

#include <string>
#include <vector>

#include "tuberegress/dataset.hpp"

namespace tuberegress {

enum class ScalerKind { standard, min_max, robust };

std::string scaler_kind_name(ScalerKind k);
ScalerKind scaler_kind_from_name(const std::string& name);

// Mapping column name -> scaler. Unmapped columns pass through unchanged.
struct ColumnPartition {
    std::vector<std::pair<std::string, ScalerKind>> entries;

    bool contains(const std::string& name) const;
    const ScalerKind* find(const std::string& name) const;
    void add(const std::string& name, ScalerKind kind); // throws on duplicates
    // Drop entries whose column is not present in `columns`.
    ColumnPartition restricted_to(const std::vector<std::string>& columns) const;
};

// The canonical three-group partition over the 8 raw + 10 derived columns.
ColumnPartition default_partition();

// Frozen per-column statistics from a training fold. center/scale encode
//   standard: (mean, population std)
//   min_max:  (min, max - min)
//   robust:   (median, Q3 - Q1)
// A zero scale marks the column degenerate: transform sends it to all zeros.
struct FittedColumnScaler {
    std::string column;
    ScalerKind kind;
    double center = 0.0;
    double scale = 0.0;

    bool operator==(const FittedColumnScaler&) const = default;
};

struct FittedPreprocessor {
    std::vector<FittedColumnScaler> scalers;
    size_t fitted_on = 0; // row count of the fitting data

    bool operator==(const FittedPreprocessor&) const = default;
};

FittedPreprocessor fit_preprocessor(const Dataset& train, const ColumnPartition& partition);
Dataset transform(const FittedPreprocessor& fp, const Dataset& ds);
Dataset inverse_transform(const FittedPreprocessor& fp, const Dataset& ds);

} // namespace tuberegress
