#include "tuberegress/model_selection.hpp"

#include <algorithm>
#include <numeric>

#include "tuberegress/errors.hpp"
#include "tuberegress/evaluation.hpp"
#include "tuberegress/parallel.hpp"
#include "tuberegress/rng.hpp"

namespace tuberegress {

SvrParams ParamSpace::cell(size_t index, const SvrParams& base) const {
    const size_t ng = gamma_choices.size();
    const size_t ne = epsilon_choices.size();
    SvrParams p = base;
    p.kernel.kind = kernel;
    p.kernel.coef0 = coef0;
    p.kernel.degree = degree;
    p.kernel.gamma = gamma_choices[index % ng];
    p.epsilon = epsilon_choices[(index / ng) % ne];
    p.C = c_choices[index / (ng * ne)];
    return p;
}

namespace {

int gamma_order(const GammaSpec& g) {
    switch (g.mode) {
        case GammaSpec::Mode::scale: return 0;
        case GammaSpec::Mode::auto_mode: return 1;
        case GammaSpec::Mode::fixed: return 2;
    }
    return 3;
}

bool param_key_less(const SvrParams& a, const SvrParams& b) {
    if (a.C != b.C) return a.C < b.C;
    if (a.epsilon != b.epsilon) return a.epsilon < b.epsilon;
    const int ga = gamma_order(a.kernel.gamma), gb = gamma_order(b.kernel.gamma);
    if (ga != gb) return ga < gb;
    return a.kernel.gamma.value < b.kernel.gamma.value;
}

} // namespace

size_t tie_break(const std::vector<Trial>& trials) {
    if (trials.empty()) {
        throw ConfigError(Errc::config_invalid, "tie_break on empty trial list");
    }
    size_t best = 0;
    for (size_t i = 1; i < trials.size(); ++i) {
        if (trials[i].mean_score > trials[best].mean_score) {
            best = i;
        } else if (trials[i].mean_score == trials[best].mean_score &&
                   param_key_less(trials[i].params, trials[best].params)) {
            best = i;
        }
    }
    return best;
}

SearchResult randomized_search(const Dataset& ds, const ParamSpace& space, size_t n_iter, size_t cv,
                               uint64_t seed, const ColumnPartition& partition, const SvrParams& base,
                               unsigned n_jobs) {
    const size_t grid = space.grid_size();
    if (grid == 0 || n_iter == 0) {
        throw ConfigError(Errc::config_invalid, "empty search grid or n_iter == 0");
    }
    if (n_iter > grid) {
        throw ConfigError(Errc::grid_too_small,
                          "GridTooSmall: n_iter=" + std::to_string(n_iter) + " exceeds grid of " +
                              std::to_string(grid));
    }
    if (cv < 2) {
        throw ConfigError(Errc::config_invalid, "search cv must be >= 2");
    }

    // candidates drawn uniformly without replacement
    std::vector<size_t> cells(grid);
    std::iota(cells.begin(), cells.end(), size_t{0});
    Rng rng(seed);
    rng.partial_shuffle(cells, n_iter);
    cells.resize(n_iter);

    // one fold split shared by every candidate so scores are comparable
    const auto folds = kfold_indices(ds.n_rows(), cv, derive_seed(seed, 0xF01D5));
    const ColumnPartition part = partition.restricted_to(ds.columns);

    std::vector<Trial> trials(n_iter);
    for (size_t t = 0; t < n_iter; ++t) {
        trials[t].trial_index = t;
        trials[t].cell_index = cells[t];
        trials[t].trial_seed = derive_seed(seed, t);
        trials[t].params = space.cell(cells[t], base);
    }

    // flat job pool over (trial, fold) pairs
    std::vector<std::vector<size_t>> fold_train(cv);
    for (size_t f = 0; f < cv; ++f) {
        std::vector<uint8_t> in_val(ds.n_rows(), 0);
        for (size_t i : folds[f]) in_val[i] = 1;
        for (size_t i = 0; i < ds.n_rows(); ++i) {
            if (!in_val[i]) fold_train[f].push_back(i);
        }
    }
    for (auto& t : trials) t.fold_scores.assign(cv, 0.0);
    parallel_for(n_iter * cv, n_jobs, [&](size_t job) {
        const size_t t = job / cv;
        const size_t f = job % cv;
        const Dataset tr = ds.take_rows(fold_train[f]);
        const Dataset va = ds.take_rows(folds[f]);
        const FittedPreprocessor fp = fit_preprocessor(tr, part);
        const Dataset tr_s = transform(fp, tr);
        const Dataset va_s = transform(fp, va);
        const SvrModel model = svr_fit(tr_s.X, tr_s.y, trials[t].params);
        const std::vector<double> pred = svr_predict(model, va_s.X);
        trials[t].fold_scores[f] = r2_score(va.y, pred);
    });
    for (auto& t : trials) {
        t.mean_score = population_mean(t.fold_scores);
    }

    SearchResult result;
    result.best_index = tie_break(trials);
    result.best_params = trials[result.best_index].params;
    result.best_mean_score = trials[result.best_index].mean_score;
    result.total_fits = n_iter * cv;
    result.trials = std::move(trials);

    // refit on the whole provided training data (logged separately, not part
    // of total_fits)
    result.best_preprocessor = fit_preprocessor(ds, part);
    const Dataset scaled = transform(result.best_preprocessor, ds);
    result.best_model = svr_fit(scaled.X, scaled.y, result.best_params);
    return result;
}

} // namespace tuberegress
