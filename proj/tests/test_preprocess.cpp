#include <doctest.h>

#include <cmath>

#include "test_helpers.hpp"
#include "tuberegress/errors.hpp"
#include "tuberegress/features.hpp"
#include "tuberegress/preprocess.hpp"

using namespace tuberegress;
using testutil::make_dataset;

TEST_SUITE_BEGIN("preprocess");

namespace {

Dataset single_column(std::vector<double> values) {
    std::vector<std::vector<double>> rows;
    rows.reserve(values.size());
    for (double v : values) rows.push_back({v});
    std::vector<double> y(values.size(), 0.0);
    return make_dataset({"c"}, rows, y);
}

} // namespace

TEST_CASE("standard scaler uses population std") {
    ColumnPartition part;
    part.add("c", ScalerKind::standard);
    const FittedPreprocessor fp = fit_preprocessor(single_column({1, 2, 3}), part);
    CHECK(fp.scalers[0].center == doctest::Approx(2.0));
    CHECK(fp.scalers[0].scale == doctest::Approx(std::sqrt(2.0 / 3.0)));

    const Dataset out = transform(fp, single_column({3}));
    CHECK(out.X.at(0, 0) == doctest::Approx(1.0 / std::sqrt(2.0 / 3.0))); // ~1.2247
    CHECK(out.X.at(0, 0) == doctest::Approx(1.224744871).epsilon(1e-6));
}

TEST_CASE("minmax scaler") {
    ColumnPartition part;
    part.add("c", ScalerKind::min_max);
    const FittedPreprocessor fp = fit_preprocessor(single_column({2, 4, 6}), part);
    CHECK(fp.scalers[0].center == 2.0);
    CHECK(fp.scalers[0].scale == 4.0);
    const Dataset out = transform(fp, single_column({2, 4, 6}));
    CHECK(out.X.at(0, 0) == doctest::Approx(0.0));
    CHECK(out.X.at(1, 0) == doctest::Approx(0.5));
    CHECK(out.X.at(2, 0) == doctest::Approx(1.0));
}

TEST_CASE("robust scaler order-statistic interpolation") {
    ColumnPartition part;
    part.add("c", ScalerKind::robust);
    const FittedPreprocessor fp = fit_preprocessor(single_column({1, 2, 3, 4, 100}), part);
    CHECK(fp.scalers[0].center == 3.0); // median
    CHECK(fp.scalers[0].scale == 2.0);  // Q3 - Q1 = 4 - 2
    const Dataset out = transform(fp, single_column({100}));
    CHECK(out.X.at(0, 0) == doctest::Approx(48.5));
}

TEST_CASE("transform on the fitting data: standard mean 0 std 1, minmax [0,1], robust median 0") {
    const Dataset raw = testutil::random_housing_like(64, 21);
    ColumnPartition part;
    part.add("MedInc", ScalerKind::standard);
    part.add("Latitude", ScalerKind::min_max);
    part.add("Population", ScalerKind::robust);
    const FittedPreprocessor fp = fit_preprocessor(raw, part);
    const Dataset out = transform(fp, raw);

    const auto med_inc = out.column_copy(out.column_index("MedInc"));
    CHECK(std::abs(population_mean(med_inc)) < 1e-9);
    CHECK(std::abs(population_std(med_inc) - 1.0) < 1e-9);

    const auto lat = out.column_copy(out.column_index("Latitude"));
    for (double v : lat) {
        CHECK(v >= -1e-9);
        CHECK(v <= 1.0 + 1e-9);
    }

    auto pop = out.column_copy(out.column_index("Population"));
    std::sort(pop.begin(), pop.end());
    CHECK(std::abs(quantile_sorted(pop, 0.5)) < 1e-9);
}

TEST_CASE("degenerate columns transform to zeros") {
    ColumnPartition part;
    part.add("c", ScalerKind::standard);
    const FittedPreprocessor fp = fit_preprocessor(single_column({7, 7, 7}), part);
    const Dataset out = transform(fp, single_column({7, 9}));
    CHECK(out.X.at(0, 0) == 0.0);
    CHECK(out.X.at(1, 0) == 0.0);

    SUBCASE("inverse_transform rejects the degenerate column") {
        try {
            inverse_transform(fp, out);
            FAIL("expected DegenerateColumn");
        } catch (const DataError& e) {
            CHECK(e.code() == Errc::degenerate_column);
        }
    }
}

TEST_CASE("round trip identity to 1e-9 relative") {
    const Dataset raw = testutil::random_housing_like(40, 4);
    const ColumnPartition part = default_partition().restricted_to(raw.columns);
    const FittedPreprocessor fp = fit_preprocessor(raw, part);
    const Dataset back = inverse_transform(fp, transform(fp, raw));
    for (size_t i = 0; i < raw.n_rows(); ++i) {
        for (size_t j = 0; j < raw.n_cols(); ++j) {
            const double a = raw.X.at(i, j), b = back.X.at(i, j);
            CHECK(std::abs(a - b) <= 1e-9 * std::max(1.0, std::abs(a)));
        }
    }

    SUBCASE("minmax midpoint maps back to 4") {
        ColumnPartition mm;
        mm.add("c", ScalerKind::min_max);
        const FittedPreprocessor f2 = fit_preprocessor(single_column({2, 6}), mm);
        Dataset half = single_column({0.0});
        half.X.at(0, 0) = 0.5;
        CHECK(inverse_transform(f2, half).X.at(0, 0) == doctest::Approx(4.0));
    }
}

TEST_CASE("leakage: fitted statistics depend only on the fitting data") {
    const Dataset train = testutil::random_housing_like(32, 8);
    Dataset val = testutil::random_housing_like(16, 9);
    const ColumnPartition part = default_partition().restricted_to(train.columns);

    const FittedPreprocessor fp1 = fit_preprocessor(train, part);
    const Dataset train_scaled_1 = transform(fp1, train);
    transform(fp1, val);

    // perturb validation rows; refit on the same train data
    for (double& v : val.X.data) v += 123.456;
    const FittedPreprocessor fp2 = fit_preprocessor(train, part);
    const Dataset train_scaled_2 = transform(fp2, train);
    transform(fp2, val);

    CHECK(fp1 == fp2); // bit-identical statistics
    CHECK(train_scaled_1.X.data == train_scaled_2.X.data);
}

TEST_CASE("default partition matches the canonical three-group mapping") {
    const ColumnPartition p = default_partition();
    CHECK(*p.find("AveOccup") == ScalerKind::robust);
    CHECK(*p.find("MedInc") == ScalerKind::standard);
    CHECK(*p.find("Coastal_Proximity") == ScalerKind::min_max);

    const char* robust[] = {"AveRooms", "AveBedrms", "Population", "AveOccup",
                            "Room_Value_Score", "Population_Density", "Income_Density"};
    const char* minmax[] = {"Latitude", "Longitude", "HouseAge", "Location_Score", "Coastal_Proximity"};
    const char* standard[] = {"MedInc", "Income_per_Room", "Age_Income_Interaction",
                              "Modernization_Score", "Rooms_per_Person", "Bedroom_Ratio"};
    for (const char* c : robust) CHECK(*p.find(c) == ScalerKind::robust);
    for (const char* c : minmax) CHECK(*p.find(c) == ScalerKind::min_max);
    for (const char* c : standard) CHECK(*p.find(c) == ScalerKind::standard);
    CHECK(p.entries.size() == 18);

    // every mapped name exists in the engineered schema
    const Dataset engineered = derive_features(testutil::random_housing_like(4, 2));
    for (const auto& [name, kind] : p.entries) CHECK(engineered.has_column(name));
}

TEST_CASE("errors: unknown column at fit, schema mismatch at transform") {
    ColumnPartition part;
    part.add("nope", ScalerKind::standard);
    try {
        fit_preprocessor(single_column({1, 2}), part);
        FAIL("expected UnknownColumn");
    } catch (const DataError& e) {
        CHECK(e.code() == Errc::unknown_column);
    }

    ColumnPartition ok;
    ok.add("c", ScalerKind::standard);
    const FittedPreprocessor fp = fit_preprocessor(single_column({1, 2}), ok);
    const Dataset other = make_dataset({"d"}, {{1.0}}, {0.0});
    try {
        transform(fp, other);
        FAIL("expected SchemaMismatch");
    } catch (const DataError& e) {
        CHECK(e.code() == Errc::schema_mismatch);
    }
}

TEST_CASE("unmapped columns pass through unchanged") {
    const Dataset ds = make_dataset({"a", "b"}, {{1, 10}, {2, 20}, {3, 30}}, {0, 0, 0});
    ColumnPartition part;
    part.add("a", ScalerKind::standard);
    const Dataset out = transform(fit_preprocessor(ds, part), ds);
    CHECK(out.X.at(0, 1) == 10.0);
    CHECK(out.X.at(2, 1) == 30.0);
}

TEST_SUITE_END();
