#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <nlohmann/json_fwd.hpp>

#include "tuberegress/model_selection.hpp"
#include "tuberegress/preprocess.hpp"
#include "tuberegress/svr.hpp"

namespace tuberegress {

struct Seeds {
    uint64_t split = 42;
    uint64_t subset = 42;
    uint64_t search = 18942018;
    uint64_t forest = 42;
    uint64_t cv = 42;
};

// Effective experiment configuration: defaults, overlaid by the config file,
// the --fixture profile, then individual CLI flags.
struct ExperimentConfig {
    std::string dataset_path = "data/california_housing.csv";
    std::string target = "MedHouseVal";
    std::string out_dir = "out";
    Seeds seeds;
    double test_fraction = 0.3;
    size_t n_bins = 10;
    size_t subset_n = 3000;
    size_t feature_k = 12;
    std::optional<ColumnPartition> scaler_override;
    SvrParams svr_default;     // C=1, eps=0.1, rbf, gamma=scale
    double tuned_C = 10.0;     // stage-D tuple; the ablation does not re-search
    double tuned_epsilon = 0.5;
    GammaSpec tuned_gamma = GammaSpec::scale();
    ParamSpace search_space;
    size_t search_n_iter = 20;
    size_t search_cv = 3;
    size_t cv_folds = 10;
    size_t forest_estimators = 100;
    size_t knn_k = 5;
    double ridge_lambda = 1.0;
    unsigned n_jobs = 0;
    std::string external_scores; // optional path for cmd_compare
    bool fixture = false;

    static ExperimentConfig from_file(const std::string& path);
    void apply_json(const nlohmann::ordered_json& j);
    void apply_fixture_profile();

    ColumnPartition partition() const; // override or the canonical mapping
    SvrParams tuned_params() const;

    // Full echo for reports.
    nlohmann::ordered_json echo_json() const;
    // Result-affecting subset only (out_dir, n_jobs and external file paths
    // excluded), serialized canonically; basis of the artifact hash.
    nlohmann::ordered_json canonical_json() const;
    std::string config_hash() const;
};

} // namespace tuberegress
