#pragma once

#include <string>
#include <vector>

#include "tuberegress/dataset.hpp"

namespace tuberegress {

struct FeatureRecipe {
    std::string name;
    std::vector<std::string> inputs;
    int formula_id; // index into the derived-feature table
};

struct FeatureSet {
    std::vector<std::string> names;
};

// The ten derived-feature recipes, in their canonical append order.
const std::vector<FeatureRecipe>& derived_feature_recipes();

// Append the ten derived columns after the raw columns. Formulas are applied
// verbatim; if a (x+1) denominator is <= 0 anywhere a warning line is pushed
// to *warnings (when given) instead of erroring.
Dataset derive_features(const Dataset& ds, std::vector<std::string>* warnings = nullptr);

// Restrict and reorder columns to fs; y unchanged.
Dataset select_features(const Dataset& ds, const FeatureSet& fs);

} // namespace tuberegress
