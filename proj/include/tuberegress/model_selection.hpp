#pragma once

#include <cstdint>
#include <vector>

#include "tuberegress/dataset.hpp"
#include "tuberegress/preprocess.hpp"
#include "tuberegress/svr.hpp"

namespace tuberegress {

struct ParamSpace {
    std::vector<double> c_choices = {0.1, 1.0, 10.0, 100.0};
    std::vector<double> epsilon_choices = {0.01, 0.1, 0.5, 1.0};
    std::vector<GammaSpec> gamma_choices = {GammaSpec::scale(), GammaSpec::auto_mode(),
                                            GammaSpec::fixed(0.1), GammaSpec::fixed(1.0)};
    KernelSpec::Kind kernel = KernelSpec::Kind::rbf;
    double coef0 = 0.0;
    int degree = 3;

    size_t grid_size() const { return c_choices.size() * epsilon_choices.size() * gamma_choices.size(); }
    // cell index -> params, C-major then epsilon then gamma
    SvrParams cell(size_t index, const SvrParams& base) const;
};

struct Trial {
    size_t trial_index = 0;
    size_t cell_index = 0;
    uint64_t trial_seed = 0;
    SvrParams params;
    std::vector<double> fold_scores;
    double mean_score = 0.0;
};

struct SearchResult {
    std::vector<Trial> trials;
    size_t best_index = 0; // into trials
    SvrParams best_params;
    double best_mean_score = 0.0;
    size_t total_fits = 0; // n_iter * cv, refit not counted
    SvrModel best_model;   // refit on the whole provided training data
    FittedPreprocessor best_preprocessor;
};

// Highest mean score; ties resolve to lower C, then lower epsilon, then gamma
// in the order scale, auto, numeric ascending. Returns the index into trials.
size_t tie_break(const std::vector<Trial>& trials);

// Randomized search over the grid, sampling without replacement, each
// candidate scored by mean R^2 over cv folds with the leakage-safe pipeline
// (preprocessor refitted on each fold's training part). The same fold split
// is used for every candidate. The winner is refit on all of `ds`.
SearchResult randomized_search(const Dataset& ds, const ParamSpace& space, size_t n_iter, size_t cv,
                               uint64_t seed, const ColumnPartition& partition, const SvrParams& base,
                               unsigned n_jobs = 0);

} // namespace tuberegress
