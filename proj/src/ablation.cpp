#include "tuberegress/ablation.hpp"

#include <nlohmann/json.hpp>

#include <string>

#include "tuberegress/errors.hpp"
#include "tuberegress/evaluation.hpp"
#include "tuberegress/parallel.hpp"

namespace tuberegress {

namespace {

uint64_t fnv1a_bytes(const void* data, size_t bytes, uint64_t h = 0xcbf29ce484222325ULL) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (size_t i = 0; i < bytes; ++i) {
        h ^= p[i];
        h *= 0x100000001b3ULL;
    }
    return h;
}

uint64_t digest_dataset(const Dataset& ds) {
    uint64_t h = fnv1a_bytes(ds.X.data.data(), ds.X.data.size() * sizeof(double));
    return fnv1a_bytes(ds.y.data(), ds.y.size() * sizeof(double), h);
}

struct StageSpec {
    char id;
    bool scale;
    bool engineered;
    bool tuned;
};

} // namespace

AblationResult run_ablation(const Dataset& train, const Dataset& test, const AblationConfig& cfg) {
    const Dataset subset = sample_subset(train, cfg.subset_n, cfg.subset_seed);

    AblationResult result;
    result.subset_row_digest = digest_dataset(subset);

    // row-local feature derivation, so deriving once up front keeps all stages
    // on byte-identical row sets
    const Dataset subset_eng = derive_features(subset);
    const Dataset test_eng = derive_features(test);
    const Dataset subset_sel = select_features(subset_eng, cfg.engineered_features);
    const Dataset test_sel = select_features(test_eng, cfg.engineered_features);

    const StageSpec specs[4] = {
        {'A', false, false, false},
        {'B', true, false, false},
        {'C', true, true, false},
        {'D', true, true, true},
    };

    parallel_for(4, cfg.n_jobs, [&](size_t s) {
        const StageSpec& spec = specs[s];
        const Dataset& tr = spec.engineered ? subset_sel : subset;
        const Dataset& te = spec.engineered ? test_sel : test;
        Dataset tr_in = tr;
        Dataset te_in = te;
        if (spec.scale) {
            const ColumnPartition part = cfg.partition.restricted_to(tr.columns);
            const FittedPreprocessor fp = fit_preprocessor(tr, part);
            tr_in = transform(fp, tr);
            te_in = transform(fp, te);
        }
        const SvrParams& params = spec.tuned ? cfg.tuned_params : cfg.default_params;
        SvrModel model;
        try {
            model = svr_fit(tr_in.X, tr_in.y, params);
        } catch (const Error& e) {
            throw FitError(Errc::fit_failed,
                           std::string("ablation stage ") + spec.id + " failed: " + e.what());
        }
        const std::vector<double> pred = svr_predict(model, te_in.X);
        StageOutcome& out = result.stages[s];
        out.id = spec.id;
        out.scaling = spec.scale ? "partition" : "none";
        out.features = spec.engineered ? "engineered" : "raw";
        out.params = spec.tuned ? "tuned" : "default";
        out.test_r2 = r2_score(te.y, pred);
        out.n_features = tr.n_cols();
    });

    const double a = result.stages[0].test_r2;
    const double b = result.stages[1].test_r2;
    const double c = result.stages[2].test_r2;
    const double d = result.stages[3].test_r2;
    result.delta_b_a = b - a;
    result.delta_c_b = c - b;
    result.delta_d_c = d - c;
    result.delta_d_a = d - a;
    if (result.delta_d_a != 0.0) {
        result.scaling_share_pct = 100.0 * result.delta_b_a / result.delta_d_a;
        result.features_share_pct = 100.0 * result.delta_c_b / result.delta_d_a;
        result.tuning_share_pct = 100.0 * result.delta_d_c / result.delta_d_a;
    }
    return result;
}

nlohmann::ordered_json ablation_report(const AblationResult& r) {
    nlohmann::ordered_json stages = nlohmann::ordered_json::array();
    for (const auto& s : r.stages) {
        stages.push_back({
            {"stage", std::string(1, s.id)},
            {"scaling", s.scaling},
            {"features", s.features},
            {"params", s.params},
            {"n_features", s.n_features},
            {"test_r2", s.test_r2},
        });
    }
    nlohmann::ordered_json j;
    j["stages"] = std::move(stages);
    j["deltas"] = {
        {"scaling_b_minus_a", r.delta_b_a},
        {"features_c_minus_b", r.delta_c_b},
        {"tuning_d_minus_c", r.delta_d_c},
        {"total_d_minus_a", r.delta_d_a},
    };
    auto share = [](const std::optional<double>& v) {
        return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
    };
    j["shares_pct"] = {
        {"scaling", share(r.scaling_share_pct)},
        {"features", share(r.features_share_pct)},
        {"tuning", share(r.tuning_share_pct)},
    };
    j["subset_row_digest"] = r.subset_row_digest;
    return j;
}

} // namespace tuberegress
