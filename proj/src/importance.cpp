#include "tuberegress/importance.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "tuberegress/errors.hpp"
#include "tuberegress/parallel.hpp"
#include "tuberegress/rng.hpp"
#include "tuberegress/trees.hpp"

namespace tuberegress {

namespace {

double digamma(double x) {
    double acc = 0.0;
    while (x < 6.0) {
        acc -= 1.0 / x;
        x += 1.0;
    }
    const double inv = 1.0 / x;
    const double inv2 = inv * inv;
    return acc + std::log(x) - 0.5 * inv -
           inv2 * (1.0 / 12.0 - inv2 * (1.0 / 120.0 - inv2 / 252.0));
}

void add_jitter(std::vector<double>& v, uint64_t seed) {
    double max_abs = 0.0;
    for (double x : v) max_abs = std::max(max_abs, std::abs(x));
    const double scale = 1e-10 * std::max(1.0, max_abs);
    Rng rng(seed);
    for (double& x : v) x += scale * rng.normal();
}

// count of values in the open interval (center - radius, center + radius),
// minus the point itself
size_t count_within(const std::vector<double>& sorted, double center, double radius) {
    const auto lo = std::upper_bound(sorted.begin(), sorted.end(), center - radius);
    const auto hi = std::lower_bound(sorted.begin(), sorted.end(), center + radius);
    const auto n = hi - lo;
    return n > 0 ? static_cast<size_t>(n) - 1 : 0;
}

} // namespace

double mutual_information(std::span<const double> x_in, std::span<const double> y_in, size_t k,
                          uint64_t jitter_seed) {
    const size_t n = x_in.size();
    if (n != y_in.size() || n <= k || k < 1) {
        throw DataError(Errc::k_too_large, "mutual_information: need n > k >= 1");
    }

    std::vector<double> x(x_in.begin(), x_in.end());
    std::vector<double> y(y_in.begin(), y_in.end());
    add_jitter(x, derive_seed(jitter_seed, 0x6d69));
    add_jitter(y, derive_seed(jitter_seed, 0x6d6a));

    // order points by x so the joint k-NN search can walk outward: the joint
    // Chebyshev distance is bounded below by the x distance, which stops the
    // scan early
    std::vector<size_t> order(n);
    std::iota(order.begin(), order.end(), size_t{0});
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) { return x[a] < x[b]; });
    std::vector<double> xs(n), ys(n);
    for (size_t i = 0; i < n; ++i) {
        xs[i] = x[order[i]];
        ys[i] = y[order[i]];
    }
    std::vector<double> x_sorted = xs;
    std::vector<double> y_sorted = ys;
    std::sort(y_sorted.begin(), y_sorted.end());

    std::vector<double> best(k);
    double psi_acc = 0.0;
    for (size_t i = 0; i < n; ++i) {
        size_t filled = 0;
        double worst = std::numeric_limits<double>::infinity();
        auto consider = [&](size_t j) {
            const double d = std::max(std::abs(xs[j] - xs[i]), std::abs(ys[j] - ys[i]));
            if (filled < k) {
                best[filled++] = d;
                if (filled == k) worst = *std::max_element(best.begin(), best.end());
            } else if (d < worst) {
                auto it = std::max_element(best.begin(), best.end());
                *it = d;
                worst = *std::max_element(best.begin(), best.end());
            }
        };
        size_t left = i, right = i + 1;
        for (;;) {
            const bool can_left = left > 0 && (filled < k || xs[i] - xs[left - 1] < worst);
            const bool can_right = right < n && (filled < k || xs[right] - xs[i] < worst);
            if (!can_left && !can_right) break;
            if (can_left && (!can_right || xs[i] - xs[left - 1] <= xs[right] - xs[i])) {
                consider(--left);
            } else {
                consider(right++);
            }
        }
        const double eps_i = worst;
        const size_t nx = count_within(x_sorted, xs[i], eps_i);
        const size_t ny = count_within(y_sorted, ys[i], eps_i);
        psi_acc += digamma(static_cast<double>(nx) + 1.0) + digamma(static_cast<double>(ny) + 1.0);
    }

    const double mi = digamma(static_cast<double>(k)) + digamma(static_cast<double>(n)) -
                      psi_acc / static_cast<double>(n);
    return std::max(mi, 0.0);
}

namespace {

std::vector<double> min_max_normalize(const std::vector<double>& raw) {
    const auto [mn, mx] = std::minmax_element(raw.begin(), raw.end());
    std::vector<double> out(raw.size(), 0.0);
    if (*mx > *mn) {
        for (size_t i = 0; i < raw.size(); ++i) out[i] = (raw[i] - *mn) / (*mx - *mn);
    }
    return out;
}

} // namespace

ImportanceReport ensemble_scores(const Dataset& ds, const ImportanceWeights& w, size_t forest_size,
                                 uint64_t seed, unsigned n_jobs) {
    const size_t d = ds.n_cols();
    if (d == 0 || ds.n_rows() < 8) {
        throw DataError(Errc::dimension_mismatch, "ensemble_scores: needs features and n >= 8");
    }

    std::vector<double> mi_raw(d), pe_raw(d), rf_raw(d);
    parallel_for(d, n_jobs, [&](size_t j) {
        const std::vector<double> col = ds.column_copy(j);
        mi_raw[j] = mutual_information(col, ds.y, 3, derive_seed(seed, j));
        pe_raw[j] = std::abs(pearson_correlation(col, ds.y));
    });

    TreeParams tp;
    tp.seed = derive_seed(seed, 0x7266);
    RandomForest forest = forest_fit(ds.X, ds.y, forest_size, tp, n_jobs);
    rf_raw = impurity_importance(forest);

    const std::vector<double> mi_n = min_max_normalize(mi_raw);
    const std::vector<double> pe_n = min_max_normalize(pe_raw);
    const std::vector<double> rf_n = min_max_normalize(rf_raw);

    ImportanceReport report;
    report.entries.resize(d);
    for (size_t j = 0; j < d; ++j) {
        auto& e = report.entries[j];
        e.feature = ds.columns[j];
        e.mi = mi_raw[j];
        e.pearson_abs = pe_raw[j];
        e.rf = rf_raw[j];
        e.mi_norm = mi_n[j];
        e.pearson_norm = pe_n[j];
        e.rf_norm = rf_n[j];
        e.ensemble = w.mi * mi_n[j] + w.pearson * pe_n[j] + w.rf * rf_n[j];
    }

    // descending ensemble, ties by column order
    std::vector<size_t> order(d);
    std::iota(order.begin(), order.end(), size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
        return report.entries[a].ensemble > report.entries[b].ensemble;
    });
    std::vector<FeatureImportance> sorted;
    sorted.reserve(d);
    for (size_t r = 0; r < d; ++r) {
        FeatureImportance e = report.entries[order[r]];
        e.rank = r + 1;
        sorted.push_back(std::move(e));
    }
    report.entries = std::move(sorted);
    return report;
}

FeatureSet top_k(const ImportanceReport& report, size_t k) {
    if (k == 0 || k > report.entries.size()) {
        throw DataError(Errc::k_too_large,
                        "KTooLarge: k=" + std::to_string(k) + " of " + std::to_string(report.entries.size()));
    }
    FeatureSet fs;
    fs.names.reserve(k);
    for (size_t i = 0; i < k; ++i) fs.names.push_back(report.entries[i].feature);
    return fs;
}

} // namespace tuberegress
