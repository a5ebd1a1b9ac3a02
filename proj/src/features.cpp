#include "tuberegress/features.hpp"

#include <cmath>
#include <unordered_set>

#include "tuberegress/errors.hpp"

namespace tuberegress {

namespace {

constexpr double kCoastalReferenceLatitude = 34.05;

struct Inputs {
    double med_inc, house_age, ave_rooms, ave_bedrms, population, ave_occup, latitude, longitude;
};

double apply_formula(int id, const Inputs& in) {
    switch (id) {
        case 0: return in.med_inc / (in.ave_rooms + 1.0);                       // Income_per_Room
        case 1: return in.med_inc * in.ave_rooms;                               // Room_Value_Score
        case 2: return (in.latitude * in.longitude) / 1000.0;                   // Location_Score
        case 3: return std::abs(in.latitude - kCoastalReferenceLatitude);       // Coastal_Proximity
        case 4: return in.ave_bedrms / (in.ave_rooms + 1.0);                    // Bedroom_Ratio
        case 5: return in.population / (in.ave_occup + 1.0);                    // Population_Density
        case 6: return in.house_age * in.med_inc;                               // Age_Income_Interaction
        case 7: return in.med_inc / (in.house_age + 1.0);                       // Modernization_Score
        case 8: return in.ave_rooms / (in.ave_occup + 1.0);                     // Rooms_per_Person
        case 9: return (in.med_inc * in.population) / 1000.0;                   // Income_Density
        default: return 0.0;
    }
}

} // namespace

const std::vector<FeatureRecipe>& derived_feature_recipes() {
    static const std::vector<FeatureRecipe> recipes = {
        {"Income_per_Room", {"MedInc", "AveRooms"}, 0},
        {"Room_Value_Score", {"MedInc", "AveRooms"}, 1},
        {"Location_Score", {"Latitude", "Longitude"}, 2},
        {"Coastal_Proximity", {"Latitude"}, 3},
        {"Bedroom_Ratio", {"AveBedrms", "AveRooms"}, 4},
        {"Population_Density", {"Population", "AveOccup"}, 5},
        {"Age_Income_Interaction", {"HouseAge", "MedInc"}, 6},
        {"Modernization_Score", {"MedInc", "HouseAge"}, 7},
        {"Rooms_per_Person", {"AveRooms", "AveOccup"}, 8},
        {"Income_Density", {"MedInc", "Population"}, 9},
    };
    return recipes;
}

Dataset derive_features(const Dataset& ds, std::vector<std::string>* warnings) {
    static const char* kRawNames[8] = {"MedInc",     "HouseAge", "AveRooms", "AveBedrms",
                                       "Population", "AveOccup", "Latitude", "Longitude"};
    size_t raw_idx[8];
    for (int i = 0; i < 8; ++i) {
        if (!ds.has_column(kRawNames[i])) {
            throw DataError(Errc::missing_source_column,
                            std::string("MissingSourceColumn: '") + kRawNames[i] + "'");
        }
        raw_idx[i] = ds.column_index(kRawNames[i]);
    }

    const auto& recipes = derived_feature_recipes();
    const size_t n = ds.n_rows();
    const size_t d = ds.n_cols();

    Dataset out;
    out.columns = ds.columns;
    for (const auto& r : recipes) out.columns.push_back(r.name);
    out.X = Matrix(n, d + recipes.size());
    out.y = ds.y;
    out.target_name = ds.target_name;
    out.provenance = ds.provenance + "; +10 derived features";

    size_t bad_rooms = 0, bad_occup = 0, bad_age = 0;
    for (size_t i = 0; i < n; ++i) {
        auto src = ds.X.row(i);
        auto dst = out.X.row(i);
        std::copy(src.begin(), src.end(), dst.begin());
        Inputs in{src[raw_idx[0]], src[raw_idx[1]], src[raw_idx[2]], src[raw_idx[3]],
                  src[raw_idx[4]], src[raw_idx[5]], src[raw_idx[6]], src[raw_idx[7]]};
        if (in.ave_rooms + 1.0 <= 0.0) ++bad_rooms;
        if (in.ave_occup + 1.0 <= 0.0) ++bad_occup;
        if (in.house_age + 1.0 <= 0.0) ++bad_age;
        for (size_t r = 0; r < recipes.size(); ++r) {
            dst[d + r] = apply_formula(recipes[r].formula_id, in);
        }
    }
    if (warnings) {
        if (bad_rooms) warnings->push_back("AveRooms+1 <= 0 on " + std::to_string(bad_rooms) + " rows");
        if (bad_occup) warnings->push_back("AveOccup+1 <= 0 on " + std::to_string(bad_occup) + " rows");
        if (bad_age) warnings->push_back("HouseAge+1 <= 0 on " + std::to_string(bad_age) + " rows");
    }
    return out;
}

Dataset select_features(const Dataset& ds, const FeatureSet& fs) {
    if (fs.names.empty()) {
        throw DataError(Errc::unknown_feature, "UnknownFeature: empty feature set");
    }
    std::vector<size_t> idx;
    idx.reserve(fs.names.size());
    std::unordered_set<std::string> seen;
    for (const auto& name : fs.names) {
        if (!seen.insert(name).second) {
            throw DataError(Errc::unknown_feature, "UnknownFeature: duplicate name '" + name + "'");
        }
        idx.push_back(ds.column_index(name)); // throws for unknown names
    }

    Dataset out;
    out.columns = fs.names;
    out.X = Matrix(ds.n_rows(), idx.size());
    for (size_t i = 0; i < ds.n_rows(); ++i) {
        auto src = ds.X.row(i);
        auto dst = out.X.row(i);
        for (size_t j = 0; j < idx.size(); ++j) dst[j] = src[idx[j]];
    }
    out.y = ds.y;
    out.target_name = ds.target_name;
    out.provenance = ds.provenance + "; selected " + std::to_string(idx.size()) + " features";
    return out;
}

} // namespace tuberegress
