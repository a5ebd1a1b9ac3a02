#include <doctest.h>

#include <cmath>
#include <set>

#include "test_helpers.hpp"
#include "tuberegress/errors.hpp"
#include "tuberegress/evaluation.hpp"
#include "tuberegress/preprocess.hpp"

using namespace tuberegress;

TEST_SUITE_BEGIN("evaluation");

TEST_CASE("perfect fit") {
    const std::vector<double> y = {1, 2, 3};
    const MetricsBundle m = compute_metrics(y, y);
    CHECK(m.r2 == 1.0);
    CHECK(m.rmse == 0.0);
    CHECK(m.mae == 0.0);
    REQUIRE(m.mape_percent.has_value());
    CHECK(*m.mape_percent == 0.0);
    CHECK(m.explained_variance == 1.0);
}

TEST_CASE("predicting the mean gives r2 = 0") {
    const std::vector<double> y = {1, 2, 3, 6};
    const std::vector<double> yhat(4, 3.0);
    CHECK(compute_metrics(y, yhat).r2 == doctest::Approx(0.0));
}

TEST_CASE("hand computation: r2 = 0.5, mae = 1/3, rmse = 1/sqrt(3)") {
    const std::vector<double> y = {1, 2, 3};
    const std::vector<double> yhat = {1, 2, 4};
    const MetricsBundle m = compute_metrics(y, yhat);
    CHECK(m.r2 == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(m.mae == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    CHECK(m.rmse == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-12));
}

TEST_CASE("hand computation: mape 10 percent") {
    const std::vector<double> y = {1, 2};
    const std::vector<double> yhat = {1.1, 1.8};
    const MetricsBundle m = compute_metrics(y, yhat);
    REQUIRE(m.mape_percent.has_value());
    CHECK(*m.mape_percent == doctest::Approx(10.0).epsilon(1e-12));
}

TEST_CASE("rmse >= mae on random inputs") {
    Rng rng(55);
    for (int t = 0; t < 50; ++t) {
        const size_t n = 2 + rng.uniform_below(50);
        std::vector<double> y(n), yhat(n);
        for (size_t i = 0; i < n; ++i) {
            y[i] = rng.normal() + 2.0;
            yhat[i] = y[i] + rng.normal();
        }
        const MetricsBundle m = compute_metrics(y, yhat);
        CHECK(m.rmse >= m.mae - 1e-12);
        CHECK(m.r2 <= 1.0);
        CHECK(m.explained_variance <= 1.0);
    }
}

TEST_CASE("identity r2 = ev - n*mean(res)^2/ss_tot") {
    Rng rng(56);
    for (int t = 0; t < 30; ++t) {
        const size_t n = 3 + rng.uniform_below(40);
        std::vector<double> y(n), yhat(n);
        for (size_t i = 0; i < n; ++i) {
            y[i] = rng.normal() * 2.0;
            yhat[i] = 0.5 * y[i] + rng.normal() + 0.7; // biased predictor
        }
        const MetricsBundle m = compute_metrics(y, yhat);
        double mean_res = 0.0, ss_tot = 0.0;
        const double ybar = population_mean(y);
        for (size_t i = 0; i < n; ++i) {
            mean_res += (y[i] - yhat[i]);
            ss_tot += (y[i] - ybar) * (y[i] - ybar);
        }
        mean_res /= static_cast<double>(n);
        const double expect = m.explained_variance -
                              static_cast<double>(n) * mean_res * mean_res / ss_tot;
        CHECK(m.r2 == doctest::Approx(expect).epsilon(1e-9));
    }
}

TEST_CASE("zero target: mape absent from the bundle, strict helper throws") {
    const std::vector<double> y = {0.0, 2.0, 4.0};
    const std::vector<double> yhat = {0.1, 2.0, 4.0};
    const MetricsBundle m = compute_metrics(y, yhat);
    CHECK_FALSE(m.mape_percent.has_value());
    CHECK(m.r2 <= 1.0);
    try {
        mape_percent_strict(y, yhat);
        FAIL("expected ZeroTarget");
    } catch (const DataError& e) {
        CHECK(e.code() == Errc::zero_target);
    }
}

TEST_CASE("kfold indices") {
    SUBCASE("near-equal folds") {
        const auto folds = kfold_indices(300, 10, 1);
        REQUIRE(folds.size() == 10);
        for (const auto& f : folds) CHECK(f.size() == 30);
    }
    SUBCASE("leave-one-out when k = n") {
        const auto folds = kfold_indices(10, 10, 2);
        for (const auto& f : folds) CHECK(f.size() == 1);
    }
    SUBCASE("partition contract") {
        const auto folds = kfold_indices(53, 7, 3);
        std::set<size_t> seen;
        size_t mn = 53, mx = 0;
        for (const auto& f : folds) {
            mn = std::min(mn, f.size());
            mx = std::max(mx, f.size());
            for (size_t i : f) CHECK(seen.insert(i).second);
        }
        CHECK(seen.size() == 53);
        CHECK(mx - mn <= 1);
    }
    SUBCASE("determinism and KTooLarge") {
        CHECK(kfold_indices(40, 4, 9) == kfold_indices(40, 4, 9));
        CHECK_THROWS_AS(kfold_indices(5, 6, 1), DataError);
        CHECK_THROWS_AS(kfold_indices(5, 1, 1), DataError);
    }
}

TEST_CASE("cv summary reproduces the published fold arithmetic") {
    // printed 10-fold scores; population std and 1.96 CI must give
    // mean 0.703, std 0.037, CI [0.630, 0.775] at 3 decimals
    const std::vector<double> folds = {0.719, 0.699, 0.730, 0.678, 0.612,
                                       0.737, 0.677, 0.732, 0.737, 0.707};
    const CvResult r = summarize_cv(folds);
    CHECK(std::round(r.mean * 1000.0) / 1000.0 == doctest::Approx(0.703));
    CHECK(std::round(r.stddev * 1000.0) / 1000.0 == doctest::Approx(0.037));
    CHECK(std::round(r.ci_low * 1000.0) / 1000.0 == doctest::Approx(0.630));
    CHECK(std::round(r.ci_high * 1000.0) / 1000.0 == doctest::Approx(0.775));
}

TEST_CASE("identical fold scores give zero-width CI") {
    const CvResult r = summarize_cv({0.5, 0.5, 0.5});
    CHECK(r.mean == 0.5);
    CHECK(r.stddev == 0.0);
    CHECK(r.ci_low == 0.5);
    CHECK(r.ci_high == 0.5);
}

TEST_CASE("cross_validate fits on the training part only (leakage audit)") {
    Dataset ds = testutil::random_housing_like(60, 71);
    ColumnPartition part;
    part.add("MedInc", ScalerKind::standard);

    // capture the preprocessor fitted on fold 0's training part
    std::vector<FittedPreprocessor> fitted;
    const FoldScorer scorer = [&](const Dataset& tr, const Dataset& va) {
        const FittedPreprocessor fp = fit_preprocessor(tr, part);
        fitted.push_back(fp);
        const Dataset va_s = transform(fp, va);
        (void)va_s;
        return 0.0;
    };
    cross_validate(scorer, ds, 5, 13, 1);
    const auto fitted_before = fitted;
    fitted.clear();

    // mutate what will be validation rows: fold assignment is deterministic
    // per seed, so mutate every row's target; the preprocessor only sees X of
    // the training part, and per-fold training X is unchanged
    for (double& v : ds.y) v += 100.0;
    cross_validate(scorer, ds, 5, 13, 1);
    REQUIRE(fitted.size() == fitted_before.size());
    for (size_t f = 0; f < fitted.size(); ++f) {
        CHECK(fitted[f] == fitted_before[f]); // bit-identical statistics
    }

    SUBCASE("fold errors are annotated") {
        const FoldScorer bad = [](const Dataset&, const Dataset&) -> double {
            throw DataError(Errc::non_finite_input, "NonFiniteInput");
        };
        CHECK_THROWS_AS(cross_validate(bad, ds, 5, 13, 1), FitError);
    }
}

TEST_SUITE_END();
