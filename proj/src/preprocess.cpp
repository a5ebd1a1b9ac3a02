#include "tuberegress/preprocess.hpp"

#include <algorithm>
#include <cmath>

#include "tuberegress/errors.hpp"

namespace tuberegress {

std::string scaler_kind_name(ScalerKind k) {
    switch (k) {
        case ScalerKind::standard: return "standard";
        case ScalerKind::min_max: return "minmax";
        case ScalerKind::robust: return "robust";
    }
    return "?";
}

ScalerKind scaler_kind_from_name(const std::string& name) {
    if (name == "standard") return ScalerKind::standard;
    if (name == "minmax") return ScalerKind::min_max;
    if (name == "robust") return ScalerKind::robust;
    throw ConfigError(Errc::config_invalid, "unknown scaler kind '" + name + "'");
}

bool ColumnPartition::contains(const std::string& name) const {
    return find(name) != nullptr;
}

const ScalerKind* ColumnPartition::find(const std::string& name) const {
    for (const auto& [col, kind] : entries) {
        if (col == name) return &kind;
    }
    return nullptr;
}

void ColumnPartition::add(const std::string& name, ScalerKind kind) {
    if (contains(name)) {
        throw ConfigError(Errc::config_invalid, "column '" + name + "' mapped twice in scaler partition");
    }
    entries.emplace_back(name, kind);
}

ColumnPartition ColumnPartition::restricted_to(const std::vector<std::string>& columns) const {
    ColumnPartition out;
    for (const auto& e : entries) {
        if (std::find(columns.begin(), columns.end(), e.first) != columns.end()) {
            out.entries.push_back(e);
        }
    }
    return out;
}

ColumnPartition default_partition() {
    ColumnPartition p;
    for (const char* c : {"AveRooms", "AveBedrms", "Population", "AveOccup", "Room_Value_Score",
                          "Population_Density", "Income_Density"}) {
        p.add(c, ScalerKind::robust);
    }
    for (const char* c : {"Latitude", "Longitude", "HouseAge", "Location_Score", "Coastal_Proximity"}) {
        p.add(c, ScalerKind::min_max);
    }
    for (const char* c : {"MedInc", "Income_per_Room", "Age_Income_Interaction", "Modernization_Score",
                          "Rooms_per_Person", "Bedroom_Ratio"}) {
        p.add(c, ScalerKind::standard);
    }
    return p;
}

FittedPreprocessor fit_preprocessor(const Dataset& train, const ColumnPartition& partition) {
    if (train.n_rows() < 2) {
        throw DataError(Errc::schema_mismatch, "fit_preprocessor needs at least 2 rows");
    }
    FittedPreprocessor fp;
    fp.fitted_on = train.n_rows();
    fp.scalers.reserve(partition.entries.size());
    for (const auto& [name, kind] : partition.entries) {
        if (!train.has_column(name)) {
            throw DataError(Errc::unknown_column, "UnknownColumn: '" + name + "' not in dataset");
        }
        std::vector<double> col = train.column_copy(train.column_index(name));
        FittedColumnScaler s;
        s.column = name;
        s.kind = kind;
        switch (kind) {
            case ScalerKind::standard: {
                s.center = population_mean(col);
                s.scale = population_std(col);
                break;
            }
            case ScalerKind::min_max: {
                auto [mn, mx] = std::minmax_element(col.begin(), col.end());
                s.center = *mn;
                s.scale = *mx - *mn;
                break;
            }
            case ScalerKind::robust: {
                std::sort(col.begin(), col.end());
                s.center = quantile_sorted(col, 0.5);
                s.scale = quantile_sorted(col, 0.75) - quantile_sorted(col, 0.25);
                break;
            }
        }
        fp.scalers.push_back(std::move(s));
    }
    return fp;
}

Dataset transform(const FittedPreprocessor& fp, const Dataset& ds) {
    Dataset out = ds;
    for (const auto& s : fp.scalers) {
        if (!ds.has_column(s.column)) {
            throw DataError(Errc::schema_mismatch, "SchemaMismatch: fitted column '" + s.column + "' missing");
        }
        const size_t j = ds.column_index(s.column);
        for (size_t i = 0; i < out.n_rows(); ++i) {
            double& v = out.X.at(i, j);
            v = (s.scale == 0.0) ? 0.0 : (v - s.center) / s.scale;
        }
    }
    out.provenance = ds.provenance + "; scaled";
    return out;
}

Dataset inverse_transform(const FittedPreprocessor& fp, const Dataset& ds) {
    Dataset out = ds;
    for (const auto& s : fp.scalers) {
        if (!ds.has_column(s.column)) {
            throw DataError(Errc::schema_mismatch, "SchemaMismatch: fitted column '" + s.column + "' missing");
        }
        if (s.scale == 0.0) {
            throw DataError(Errc::degenerate_column,
                            "DegenerateColumn: '" + s.column + "' has zero scale, not invertible");
        }
        const size_t j = ds.column_index(s.column);
        for (size_t i = 0; i < out.n_rows(); ++i) {
            double& v = out.X.at(i, j);
            v = v * s.scale + s.center;
        }
    }
    out.provenance = ds.provenance + "; unscaled";
    return out;
}

} // namespace tuberegress
