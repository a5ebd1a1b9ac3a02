#include "tuberegress/config.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <sstream>

#include "tuberegress/errors.hpp"

namespace tuberegress {

using ordered_json = nlohmann::ordered_json;

namespace {

uint64_t fnv1a(const std::string& s) {
    uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string gamma_to_string(const GammaSpec& g) { return gamma_spec_name(g); }

} // namespace

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in.is_open()) {
        throw ConfigError(Errc::config_invalid, "ConfigInvalid: cannot open config file " + path);
    }
    ordered_json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw ConfigError(Errc::config_invalid, "ConfigInvalid: " + path + ": " + e.what());
    }
    ExperimentConfig cfg;
    cfg.apply_json(j);
    return cfg;
}

void ExperimentConfig::apply_json(const ordered_json& j) {
    try {
        if (j.contains("dataset")) dataset_path = j.at("dataset").get<std::string>();
        if (j.contains("target")) target = j.at("target").get<std::string>();
        if (j.contains("out_dir")) out_dir = j.at("out_dir").get<std::string>();
        if (j.contains("seeds")) {
            const auto& s = j.at("seeds");
            if (s.contains("split")) seeds.split = s.at("split").get<uint64_t>();
            if (s.contains("subset")) seeds.subset = s.at("subset").get<uint64_t>();
            if (s.contains("search")) seeds.search = s.at("search").get<uint64_t>();
            if (s.contains("forest")) seeds.forest = s.at("forest").get<uint64_t>();
            if (s.contains("cv")) seeds.cv = s.at("cv").get<uint64_t>();
        }
        if (j.contains("split")) {
            const auto& s = j.at("split");
            if (s.contains("test_fraction")) test_fraction = s.at("test_fraction").get<double>();
            if (s.contains("n_bins")) n_bins = s.at("n_bins").get<size_t>();
        }
        if (j.contains("subset_n")) subset_n = j.at("subset_n").get<size_t>();
        if (j.contains("feature_k")) feature_k = j.at("feature_k").get<size_t>();
        if (j.contains("scaler")) {
            ColumnPartition p;
            const auto& s = j.at("scaler");
            for (const auto& kind_name : {"robust", "minmax", "standard"}) {
                if (!s.contains(kind_name)) continue;
                for (const auto& col : s.at(kind_name)) {
                    p.add(col.get<std::string>(), scaler_kind_from_name(kind_name));
                }
            }
            scaler_override = std::move(p);
        }
        if (j.contains("svr")) {
            const auto& s = j.at("svr");
            if (s.contains("C")) svr_default.C = s.at("C").get<double>();
            if (s.contains("epsilon")) svr_default.epsilon = s.at("epsilon").get<double>();
            if (s.contains("kernel")) svr_default.kernel.kind = kernel_kind_from_name(s.at("kernel").get<std::string>());
            if (s.contains("gamma")) svr_default.kernel.gamma = gamma_spec_from_name(s.at("gamma").is_string() ? s.at("gamma").get<std::string>() : s.at("gamma").dump());
            if (s.contains("coef0")) svr_default.kernel.coef0 = s.at("coef0").get<double>();
            if (s.contains("degree")) svr_default.kernel.degree = s.at("degree").get<int>();
            if (s.contains("tol")) svr_default.tol = s.at("tol").get<double>();
            if (s.contains("max_iter")) svr_default.max_iter = s.at("max_iter").get<long long>();
            if (s.contains("shrinking")) svr_default.shrinking = s.at("shrinking").get<bool>();
            if (s.contains("cache_mb")) svr_default.cache_mb = s.at("cache_mb").get<size_t>();
        }
        if (j.contains("tuned")) {
            const auto& s = j.at("tuned");
            if (s.contains("C")) tuned_C = s.at("C").get<double>();
            if (s.contains("epsilon")) tuned_epsilon = s.at("epsilon").get<double>();
            if (s.contains("gamma")) tuned_gamma = gamma_spec_from_name(s.at("gamma").is_string() ? s.at("gamma").get<std::string>() : s.at("gamma").dump());
        }
        if (j.contains("search")) {
            const auto& s = j.at("search");
            if (s.contains("n_iter")) search_n_iter = s.at("n_iter").get<size_t>();
            if (s.contains("cv")) search_cv = s.at("cv").get<size_t>();
            if (s.contains("c_choices")) search_space.c_choices = s.at("c_choices").get<std::vector<double>>();
            if (s.contains("epsilon_choices")) search_space.epsilon_choices = s.at("epsilon_choices").get<std::vector<double>>();
            if (s.contains("gamma_choices")) {
                search_space.gamma_choices.clear();
                for (const auto& g : s.at("gamma_choices")) {
                    search_space.gamma_choices.push_back(
                        gamma_spec_from_name(g.is_string() ? g.get<std::string>() : g.dump()));
                }
            }
            if (s.contains("kernel")) search_space.kernel = kernel_kind_from_name(s.at("kernel").get<std::string>());
        }
        if (j.contains("cv_folds")) cv_folds = j.at("cv_folds").get<size_t>();
        if (j.contains("forest")) {
            const auto& s = j.at("forest");
            if (s.contains("n_estimators")) forest_estimators = s.at("n_estimators").get<size_t>();
        }
        if (j.contains("knn_k")) knn_k = j.at("knn_k").get<size_t>();
        if (j.contains("ridge_lambda")) ridge_lambda = j.at("ridge_lambda").get<double>();
        if (j.contains("n_jobs")) n_jobs = j.at("n_jobs").get<unsigned>();
        if (j.contains("external_scores")) external_scores = j.at("external_scores").get<std::string>();
    } catch (const Error&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError(Errc::config_invalid, std::string("ConfigInvalid: ") + e.what());
    }

    if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
        throw ConfigError(Errc::config_invalid, "ConfigInvalid: test_fraction must be in (0,1)");
    }
    if (n_bins < 2) {
        throw ConfigError(Errc::config_invalid, "ConfigInvalid: n_bins must be >= 2");
    }
    if (feature_k == 0) {
        throw ConfigError(Errc::config_invalid, "ConfigInvalid: feature_k must be >= 1");
    }
}

void ExperimentConfig::apply_fixture_profile() {
    fixture = true;
    dataset_path = "data/fixture_housing.csv";
    subset_n = 100;
    forest_estimators = 25;
    search_n_iter = 8;
    search_cv = 3;
    cv_folds = 5;
}

ColumnPartition ExperimentConfig::partition() const {
    return scaler_override ? *scaler_override : default_partition();
}

SvrParams ExperimentConfig::tuned_params() const {
    SvrParams p = svr_default;
    p.C = tuned_C;
    p.epsilon = tuned_epsilon;
    p.kernel.kind = KernelSpec::Kind::rbf;
    p.kernel.gamma = tuned_gamma;
    return p;
}

ordered_json ExperimentConfig::canonical_json() const {
    ordered_json j;
    j["dataset"] = dataset_path;
    j["target"] = target;
    j["seeds"] = {{"split", seeds.split}, {"subset", seeds.subset}, {"search", seeds.search},
                  {"forest", seeds.forest}, {"cv", seeds.cv}};
    j["split"] = {{"test_fraction", test_fraction}, {"n_bins", n_bins}};
    j["subset_n"] = subset_n;
    j["feature_k"] = feature_k;
    ordered_json scaler;
    const ColumnPartition part = partition();
    for (const auto& kind : {ScalerKind::robust, ScalerKind::min_max, ScalerKind::standard}) {
        ordered_json names = ordered_json::array();
        for (const auto& [col, k] : part.entries) {
            if (k == kind) names.push_back(col);
        }
        scaler[scaler_kind_name(kind)] = std::move(names);
    }
    j["scaler"] = std::move(scaler);
    j["svr"] = {{"kernel", kernel_kind_name(svr_default.kernel.kind)},
                {"C", svr_default.C},
                {"epsilon", svr_default.epsilon},
                {"gamma", gamma_to_string(svr_default.kernel.gamma)},
                {"coef0", svr_default.kernel.coef0},
                {"degree", svr_default.kernel.degree},
                {"tol", svr_default.tol},
                {"max_iter", svr_default.max_iter},
                {"shrinking", svr_default.shrinking},
                {"cache_mb", svr_default.cache_mb}};
    j["tuned"] = {{"C", tuned_C}, {"epsilon", tuned_epsilon}, {"gamma", gamma_to_string(tuned_gamma)}};
    ordered_json gammas = ordered_json::array();
    for (const auto& g : search_space.gamma_choices) gammas.push_back(gamma_to_string(g));
    j["search"] = {{"n_iter", search_n_iter},
                   {"cv", search_cv},
                   {"kernel", kernel_kind_name(search_space.kernel)},
                   {"c_choices", search_space.c_choices},
                   {"epsilon_choices", search_space.epsilon_choices},
                   {"gamma_choices", std::move(gammas)}};
    j["cv_folds"] = cv_folds;
    j["forest"] = {{"n_estimators", forest_estimators}};
    j["knn_k"] = knn_k;
    j["ridge_lambda"] = ridge_lambda;
    return j;
}

ordered_json ExperimentConfig::echo_json() const {
    ordered_json j = canonical_json();
    j["out_dir"] = out_dir;
    j["n_jobs"] = n_jobs;
    if (!external_scores.empty()) j["external_scores"] = external_scores;
    j["fixture"] = fixture;
    return j;
}

std::string ExperimentConfig::config_hash() const {
    std::ostringstream hex;
    hex << std::hex << fnv1a(canonical_json().dump());
    return hex.str();
}

} // namespace tuberegress
