#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>

#include <nlohmann/json_fwd.hpp>

#include "tuberegress/dataset.hpp"
#include "tuberegress/features.hpp"
#include "tuberegress/preprocess.hpp"
#include "tuberegress/svr.hpp"

namespace tuberegress {

// The four cumulative stages:
//   A = no scaling, raw features, default params
//   B = partition scaling, raw features, default params
//   C = partition scaling, engineered feature set, default params
//   D = partition scaling, engineered feature set, tuned params
struct AblationConfig {
    size_t subset_n = 3000;
    uint64_t subset_seed = 42;
    SvrParams default_params;     // C=1, eps=0.1, gamma=scale unless overridden
    SvrParams tuned_params;       // the tuned tuple; the search is not re-run here
    FeatureSet engineered_features;
    ColumnPartition partition;
    unsigned n_jobs = 0;
};

struct StageOutcome {
    char id = 'A';
    std::string scaling;  // "none" | "partition"
    std::string features; // "raw" | "engineered"
    std::string params;   // "default" | "tuned"
    double test_r2 = 0.0;
    size_t n_features = 0;
};

struct AblationResult {
    std::array<StageOutcome, 4> stages;
    double delta_b_a = 0.0;
    double delta_c_b = 0.0;
    double delta_d_c = 0.0;
    double delta_d_a = 0.0;
    // percent-of-total attribution; absent when the total delta is zero
    std::optional<double> scaling_share_pct;
    std::optional<double> features_share_pct;
    std::optional<double> tuning_share_pct;
    uint64_t subset_row_digest = 0; // audit: all stages consumed identical rows
};

// train/test are the raw split datasets; the SVR stages all train on the same
// subset_n-row subset drawn once with subset_seed.
AblationResult run_ablation(const Dataset& train, const Dataset& test, const AblationConfig& cfg);

nlohmann::ordered_json ablation_report(const AblationResult& r);

} // namespace tuberegress
