#include "tuberegress/trees.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "tuberegress/errors.hpp"
#include "tuberegress/parallel.hpp"
#include "tuberegress/rng.hpp"

namespace tuberegress {

namespace {

struct Builder {
    const std::vector<std::vector<double>>& cols; // feature-major
    const std::vector<double>& y;
    const TreeParams& p;
    size_t n_feature_candidates;
    Rng rng;
    std::vector<size_t> samples; // partitioned in place as nodes split
    std::vector<TreeNode> nodes;
    std::vector<std::pair<double, double>> scratch; // (x, y) pairs for sorting
    std::vector<size_t> feature_pool;
    double inv_n_total;

    Builder(const std::vector<std::vector<double>>& cols_, const std::vector<double>& y_,
            const TreeParams& p_, std::vector<size_t> sample_idx, uint64_t seed)
        : cols(cols_), y(y_), p(p_), rng(seed), samples(std::move(sample_idx)) {
        const size_t d = cols.size();
        switch (p.max_features.mode) {
            case MaxFeatures::Mode::all: n_feature_candidates = d; break;
            case MaxFeatures::Mode::sqrt_mode:
                n_feature_candidates = std::max<size_t>(1, static_cast<size_t>(std::sqrt(static_cast<double>(d))));
                break;
            case MaxFeatures::Mode::fraction:
                n_feature_candidates =
                    std::max<size_t>(1, static_cast<size_t>(p.max_features.fraction * static_cast<double>(d)));
                break;
        }
        n_feature_candidates = std::min(n_feature_candidates, d);
        feature_pool.resize(d);
        std::iota(feature_pool.begin(), feature_pool.end(), size_t{0});
        inv_n_total = samples.empty() ? 0.0 : 1.0 / static_cast<double>(samples.size());
    }

    struct Split {
        bool found = false;
        size_t feature = 0;
        double threshold = 0.0;
        double reduction = -1.0; // sse_node - (sse_left + sse_right)
    };

    // build node over samples[begin, end); returns node id
    int build(size_t begin, size_t end, int depth) {
        const size_t m = end - begin;
        double sum = 0.0, sum2 = 0.0;
        double ymin = y[samples[begin]], ymax = ymin;
        for (size_t i = begin; i < end; ++i) {
            const double v = y[samples[i]];
            sum += v;
            sum2 += v * v;
            ymin = std::min(ymin, v);
            ymax = std::max(ymax, v);
        }
        const double mean = sum / static_cast<double>(m);
        const double sse_node = std::max(0.0, sum2 - sum * mean);

        const int id = static_cast<int>(nodes.size());
        nodes.push_back({});
        nodes[id].value = mean;
        nodes[id].n_samples = m;

        const bool depth_stop = p.max_depth >= 0 && depth >= p.max_depth;
        if (depth_stop || m < p.min_samples_split || m < 2 * p.min_samples_leaf || ymin == ymax) {
            return id;
        }

        // candidate features, ascending so ties resolve to the smaller index
        if (n_feature_candidates < feature_pool.size()) {
            rng.partial_shuffle(feature_pool, n_feature_candidates);
        }
        std::vector<size_t> candidates(feature_pool.begin(),
                                       feature_pool.begin() + static_cast<long>(n_feature_candidates));
        std::sort(candidates.begin(), candidates.end());

        Split best;
        for (size_t f : candidates) {
            const std::vector<double>& col = cols[f];
            scratch.resize(m);
            for (size_t i = 0; i < m; ++i) {
                const size_t s = samples[begin + i];
                scratch[i] = {col[s], y[s]};
            }
            std::sort(scratch.begin(), scratch.end(),
                      [](const auto& a, const auto& b) { return a.first < b.first; });
            double lsum = 0.0, lsum2 = 0.0;
            for (size_t i = 0; i + 1 < m; ++i) {
                lsum += scratch[i].second;
                lsum2 += scratch[i].second * scratch[i].second;
                if (scratch[i].first == scratch[i + 1].first) continue;
                const size_t nl = i + 1, nr = m - nl;
                if (nl < p.min_samples_leaf || nr < p.min_samples_leaf) continue;
                const double rsum = sum - lsum, rsum2 = sum2 - lsum2;
                const double sse_l = std::max(0.0, lsum2 - lsum * lsum / static_cast<double>(nl));
                const double sse_r = std::max(0.0, rsum2 - rsum * rsum / static_cast<double>(nr));
                const double reduction = sse_node - sse_l - sse_r;
                // strict > keeps the first best: smaller feature index, then
                // smaller threshold
                if (reduction > best.reduction) {
                    double mid = scratch[i].first + 0.5 * (scratch[i + 1].first - scratch[i].first);
                    if (mid >= scratch[i + 1].first) mid = scratch[i].first;
                    best = {true, f, mid, reduction};
                }
            }
        }

        if (!best.found || best.reduction <= 0.0) return id;

        // partition samples in place: x <= threshold left, x > threshold right
        const std::vector<double>& col = cols[best.feature];
        size_t mid = begin;
        for (size_t i = begin; i < end; ++i) {
            if (col[samples[i]] <= best.threshold) {
                std::swap(samples[mid], samples[i]);
                ++mid;
            }
        }

        nodes[id].feature = static_cast<int>(best.feature);
        nodes[id].threshold = best.threshold;
        nodes[id].impurity_decrease = best.reduction * inv_n_total;
        const int left = build(begin, mid, depth + 1);
        const int right = build(mid, end, depth + 1);
        nodes[id].left = left;
        nodes[id].right = right;
        return id;
    }
};

std::vector<std::vector<double>> to_columns(const Matrix& X) {
    std::vector<std::vector<double>> cols(X.cols, std::vector<double>(X.rows));
    for (size_t i = 0; i < X.rows; ++i) {
        auto r = X.row(i);
        for (size_t j = 0; j < X.cols; ++j) cols[j][i] = r[j];
    }
    return cols;
}

RegressionTree fit_on_columns(const std::vector<std::vector<double>>& cols, const std::vector<double>& y,
                              const TreeParams& p, std::vector<size_t> sample_idx, uint64_t seed) {
    Builder b(cols, y, p, std::move(sample_idx), seed);
    b.nodes.reserve(2 * b.samples.size() / std::max<size_t>(p.min_samples_leaf, 1) + 1);
    b.build(0, b.samples.size(), 0);
    RegressionTree t;
    t.nodes = std::move(b.nodes);
    t.n_features = cols.size();
    return t;
}

} // namespace

RegressionTree tree_fit(const Matrix& X, const std::vector<double>& y, const TreeParams& p) {
    if (X.rows == 0 || X.rows != y.size()) {
        throw DataError(Errc::dimension_mismatch, "tree_fit: X/y size mismatch");
    }
    std::vector<size_t> idx(X.rows);
    std::iota(idx.begin(), idx.end(), size_t{0});
    return fit_on_columns(to_columns(X), y, p, std::move(idx), p.seed);
}

double tree_predict_one(const RegressionTree& t, std::span<const double> x) {
    int id = 0;
    while (t.nodes[id].feature >= 0) {
        const TreeNode& nd = t.nodes[id];
        id = (x[static_cast<size_t>(nd.feature)] <= nd.threshold) ? nd.left : nd.right;
    }
    return t.nodes[id].value;
}

std::vector<double> tree_predict(const RegressionTree& t, const Matrix& X) {
    std::vector<double> out(X.rows);
    for (size_t i = 0; i < X.rows; ++i) out[i] = tree_predict_one(t, X.row(i));
    return out;
}

RandomForest forest_fit(const Matrix& X, const std::vector<double>& y, size_t n_estimators,
                        const TreeParams& p, unsigned n_jobs) {
    if (n_estimators == 0) {
        throw ConfigError(Errc::config_invalid, "forest needs n_estimators >= 1");
    }
    if (X.rows == 0 || X.rows != y.size()) {
        throw DataError(Errc::dimension_mismatch, "forest_fit: X/y size mismatch");
    }
    const auto cols = to_columns(X);
    RandomForest f;
    f.n_features = X.cols;
    f.trees.resize(n_estimators);
    f.tree_seeds.resize(n_estimators);
    for (size_t k = 0; k < n_estimators; ++k) f.tree_seeds[k] = derive_seed(p.seed, k);

    parallel_for(n_estimators, n_jobs, [&](size_t k) {
        Rng rng(f.tree_seeds[k]);
        std::vector<size_t> idx(X.rows);
        if (p.bootstrap) {
            for (size_t i = 0; i < X.rows; ++i) idx[i] = static_cast<size_t>(rng.uniform_below(X.rows));
        } else {
            std::iota(idx.begin(), idx.end(), size_t{0});
        }
        f.trees[k] = fit_on_columns(cols, y, p, std::move(idx), rng.next_u64());
    });
    return f;
}

std::vector<double> forest_predict(const RandomForest& f, const Matrix& X) {
    std::vector<double> out(X.rows, 0.0);
    for (const auto& t : f.trees) {
        for (size_t i = 0; i < X.rows; ++i) out[i] += tree_predict_one(t, X.row(i));
    }
    const double inv = 1.0 / static_cast<double>(f.trees.size());
    for (double& v : out) v *= inv;
    return out;
}

std::vector<double> impurity_importance(const RandomForest& f) {
    std::vector<double> imp(f.n_features, 0.0);
    for (const auto& t : f.trees) {
        for (const auto& nd : t.nodes) {
            if (nd.feature >= 0) imp[static_cast<size_t>(nd.feature)] += nd.impurity_decrease;
        }
    }
    const double inv_trees = 1.0 / static_cast<double>(f.trees.size());
    double total = 0.0;
    for (double& v : imp) {
        v *= inv_trees;
        total += v;
    }
    if (total > 0.0) {
        for (double& v : imp) v /= total;
    }
    return imp;
}

} // namespace tuberegress
