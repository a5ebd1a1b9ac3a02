#include <doctest.h>

#include <cmath>

#include "test_helpers.hpp"
#include "tuberegress/errors.hpp"
#include "tuberegress/features.hpp"

using namespace tuberegress;

TEST_SUITE_BEGIN("features");

namespace {

Dataset one_row(double med_inc, double house_age, double ave_rooms, double ave_bedrms,
                double population, double ave_occup, double latitude, double longitude) {
    return testutil::make_dataset(
        {"MedInc", "HouseAge", "AveRooms", "AveBedrms", "Population", "AveOccup", "Latitude", "Longitude"},
        {{med_inc, house_age, ave_rooms, ave_bedrms, population, ave_occup, latitude, longitude}}, {1.0});
}

double col(const Dataset& ds, size_t row, const std::string& name) {
    return ds.X.at(row, ds.column_index(name));
}

} // namespace

TEST_CASE("direct arithmetic of the derived formulas") {
    const Dataset ds = derive_features(one_row(3, 10, 5, 1, 100, 2, 34.05, -118));
    CHECK(ds.n_cols() == 18);
    CHECK(col(ds, 0, "Income_per_Room") == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(col(ds, 0, "Room_Value_Score") == doctest::Approx(15.0).epsilon(1e-15));
    CHECK(col(ds, 0, "Coastal_Proximity") == 0.0);
    CHECK(col(ds, 0, "Location_Score") == doctest::Approx(34.05 * -118.0 / 1000.0));
    CHECK(col(ds, 0, "Bedroom_Ratio") == doctest::Approx(1.0 / 6.0));
    CHECK(col(ds, 0, "Population_Density") == doctest::Approx(100.0 / 3.0));
    CHECK(col(ds, 0, "Age_Income_Interaction") == doctest::Approx(30.0));
    CHECK(col(ds, 0, "Modernization_Score") == doctest::Approx(3.0 / 11.0));
    CHECK(col(ds, 0, "Rooms_per_Person") == doctest::Approx(5.0 / 3.0));
    CHECK(col(ds, 0, "Income_Density") == doctest::Approx(0.3));
}

TEST_CASE("boundary of the +1 guard") {
    const Dataset ds = derive_features(one_row(4, 0, 5, 1, 100, 2, 35, -120));
    CHECK(col(ds, 0, "Modernization_Score") == doctest::Approx(4.0));
    CHECK(col(ds, 0, "Age_Income_Interaction") == 0.0);
}

TEST_CASE("derived columns appended after raw, in canonical order") {
    const Dataset ds = derive_features(testutil::random_housing_like(5, 1));
    const auto& recipes = derived_feature_recipes();
    REQUIRE(recipes.size() == 10);
    for (size_t r = 0; r < recipes.size(); ++r) {
        CHECK(ds.columns[8 + r] == recipes[r].name);
    }
}

TEST_CASE("missing source column") {
    Dataset ds = testutil::random_housing_like(3, 2);
    ds.columns[2] = "Rooms"; // breaks AveRooms
    try {
        derive_features(ds);
        FAIL("expected MissingSourceColumn");
    } catch (const DataError& e) {
        CHECK(e.code() == Errc::missing_source_column);
    }
}

TEST_CASE("spreadsheet-style recomputation on random rows") {
    // independent recomputation of each formula, straight from the table
    const Dataset raw = testutil::random_housing_like(100, 42);
    const Dataset ds = derive_features(raw);
    for (size_t i = 0; i < raw.n_rows(); ++i) {
        const double med_inc = col(raw, i, "MedInc");
        const double house_age = col(raw, i, "HouseAge");
        const double ave_rooms = col(raw, i, "AveRooms");
        const double ave_bedrms = col(raw, i, "AveBedrms");
        const double population = col(raw, i, "Population");
        const double ave_occup = col(raw, i, "AveOccup");
        const double latitude = col(raw, i, "Latitude");
        const double longitude = col(raw, i, "Longitude");
        auto rel_check = [&](const char* name, double expect) {
            const double got = col(ds, i, name);
            CHECK(std::abs(got - expect) <= 1e-12 * std::max(1.0, std::abs(expect)));
        };
        rel_check("Income_per_Room", med_inc / (ave_rooms + 1));
        rel_check("Room_Value_Score", med_inc * ave_rooms);
        rel_check("Location_Score", latitude * longitude / 1000);
        rel_check("Coastal_Proximity", std::abs(latitude - 34.05));
        rel_check("Bedroom_Ratio", ave_bedrms / (ave_rooms + 1));
        rel_check("Population_Density", population / (ave_occup + 1));
        rel_check("Age_Income_Interaction", house_age * med_inc);
        rel_check("Modernization_Score", med_inc / (house_age + 1));
        rel_check("Rooms_per_Person", ave_rooms / (ave_occup + 1));
        rel_check("Income_Density", med_inc * population / 1000);
    }
}

TEST_CASE("row-local: deriving then filtering equals filtering then deriving") {
    const Dataset raw = testutil::random_housing_like(30, 5);
    const std::vector<size_t> keep = {0, 3, 7, 11, 25, 29};
    const Dataset a = derive_features(raw).take_rows(keep);
    const Dataset b = derive_features(raw.take_rows(keep));
    REQUIRE(a.n_rows() == b.n_rows());
    CHECK(a.X.data == b.X.data);
}

TEST_CASE("finite outputs for non-negative inputs") {
    for (int t = 0; t < 200; ++t) {
        const Dataset ds = derive_features(testutil::random_housing_like(1, 1000 + t));
        for (double v : ds.X.data) CHECK(std::isfinite(v));
    }
}

TEST_CASE("negative denominators warn instead of erroring") {
    const Dataset ds = one_row(3, -2, 5, 1, 100, 2, 35, -120); // HouseAge + 1 < 0
    std::vector<std::string> warnings;
    const Dataset out = derive_features(ds, &warnings);
    CHECK(warnings.size() == 1);
    CHECK(std::isfinite(col(out, 0, "Modernization_Score")));
}

TEST_CASE("select_features") {
    const Dataset ds = derive_features(testutil::random_housing_like(10, 9));

    SUBCASE("12-name subset") {
        FeatureSet fs;
        fs.names = {"Income_per_Room", "MedInc",   "Room_Value_Score", "Age_Income_Interaction",
                    "AveRooms",        "HouseAge", "Latitude",         "Longitude",
                    "Population",      "AveOccup", "Bedroom_Ratio",    "Rooms_per_Person"};
        const Dataset sel = select_features(ds, fs);
        CHECK(sel.n_cols() == 12);
        CHECK(sel.columns == fs.names);
        CHECK(sel.y == ds.y);
    }
    SUBCASE("identity selection") {
        FeatureSet fs;
        fs.names = ds.columns;
        const Dataset sel = select_features(ds, fs);
        CHECK(sel.columns == ds.columns);
        CHECK(sel.X.data == ds.X.data);
    }
    SUBCASE("unknown feature") {
        FeatureSet fs;
        fs.names = {"MedInc", "Nonexistent"};
        try {
            select_features(ds, fs);
            FAIL("expected UnknownFeature");
        } catch (const DataError& e) {
            CHECK(e.code() == Errc::unknown_feature);
        }
    }
}

TEST_SUITE_END();
