#include "tuberegress/commands.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>

#include "tuberegress/ablation.hpp"
#include "tuberegress/artifacts.hpp"
#include "tuberegress/baselines.hpp"
#include "tuberegress/errors.hpp"
#include "tuberegress/evaluation.hpp"
#include "tuberegress/importance.hpp"
#include "tuberegress/model_selection.hpp"
#include "tuberegress/rng.hpp"
#include "tuberegress/trees.hpp"

namespace tuberegress {

using ordered_json = nlohmann::ordered_json;
namespace fs = std::filesystem;

namespace {

using artifacts::fmt_double;

struct SplitDatasets {
    Dataset train;
    Dataset test;
};

Dataset load_dataset(const ExperimentConfig& cfg) { return load_csv(cfg.dataset_path, cfg.target); }

// Rebuild the train/test datasets from the stored split indices so every
// downstream command consumes exactly the audited rows.
SplitDatasets load_split(const ExperimentConfig& cfg, const Dataset& ds) {
    const ordered_json payload = artifacts::read(cfg.out_dir, "split", cfg.config_hash());
    const auto train_idx = payload.at("train_indices").get<std::vector<size_t>>();
    const auto test_idx = payload.at("test_indices").get<std::vector<size_t>>();
    SplitDatasets out{ds.take_rows(train_idx), ds.take_rows(test_idx)};
    out.train.provenance = ds.provenance + "; train rows from split artifact";
    out.test.provenance = ds.provenance + "; test rows from split artifact";
    return out;
}

FeatureSet load_feature_set(const ExperimentConfig& cfg) {
    const ordered_json payload = artifacts::read(cfg.out_dir, "importance", cfg.config_hash());
    FeatureSet fs;
    fs.names = payload.at("selected").get<std::vector<std::string>>();
    return fs;
}

SvrParams load_best_params(const ExperimentConfig& cfg) {
    const ordered_json payload = artifacts::read(cfg.out_dir, "tune", cfg.config_hash());
    const auto& best = payload.at("best").at("params");
    SvrParams p = cfg.svr_default;
    p.C = best.at("C").get<double>();
    p.epsilon = best.at("epsilon").get<double>();
    p.kernel.kind = kernel_kind_from_name(best.at("kernel").get<std::string>());
    p.kernel.gamma = gamma_spec_from_name(best.at("gamma").get<std::string>());
    p.kernel.coef0 = best.at("coef0").get<double>();
    p.kernel.degree = best.at("degree").get<int>();
    return p;
}

ordered_json params_json(const SvrParams& p) {
    return {{"C", p.C},
            {"epsilon", p.epsilon},
            {"kernel", kernel_kind_name(p.kernel.kind)},
            {"gamma", gamma_spec_name(p.kernel.gamma)},
            {"coef0", p.kernel.coef0},
            {"degree", p.kernel.degree}};
}

ordered_json metrics_json(const MetricsBundle& m) {
    ordered_json j;
    j["r2"] = m.r2;
    j["rmse"] = m.rmse;
    j["mae"] = m.mae;
    j["explained_variance"] = m.explained_variance;
    j["mape_percent"] = m.mape_percent ? ordered_json(*m.mape_percent) : ordered_json(nullptr);
    return j;
}

// engineered + selected view of a dataset, with derivation warnings printed
Dataset engineer_select(const Dataset& ds, const FeatureSet& fs) {
    std::vector<std::string> warnings;
    const Dataset engineered = derive_features(ds, &warnings);
    for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
    return select_features(engineered, fs);
}

} // namespace

void cmd_eda(const ExperimentConfig& cfg) {
    const Dataset ds = load_dataset(cfg);
    const SummaryStats stats = summary_stats(ds);
    const Matrix corr = correlation_matrix(ds, true);

    ordered_json cols = ordered_json::array();
    for (const auto& c : stats.columns) {
        cols.push_back({{"name", c.name},
                        {"mean", c.mean},
                        {"median", c.median},
                        {"std", c.stddev},
                        {"min", c.min},
                        {"max", c.max},
                        {"q1", c.q1},
                        {"q3", c.q3}});
    }
    ordered_json matrix = ordered_json::array();
    for (size_t i = 0; i < corr.rows; ++i) {
        auto row = corr.row(i);
        matrix.push_back(std::vector<double>(row.begin(), row.end()));
    }
    std::vector<std::string> labels = ds.columns;
    labels.push_back(ds.target_name);

    ordered_json payload;
    payload["n_rows"] = ds.n_rows();
    payload["n_features"] = ds.n_cols();
    payload["columns"] = std::move(cols);
    payload["correlation_labels"] = labels;
    payload["correlations"] = std::move(matrix);
    artifacts::write(cfg.out_dir, "eda", cfg.config_hash(), payload);

    // plot data: box stats, correlation long form, per-column histograms
    {
        std::vector<std::vector<std::string>> rows;
        for (const auto& c : stats.columns) {
            rows.push_back({c.name, fmt_double(c.min), fmt_double(c.q1), fmt_double(c.median),
                            fmt_double(c.q3), fmt_double(c.max)});
        }
        artifacts::write_csv(fs::path(cfg.out_dir) / "fig1_box_stats.csv",
                             {"column", "min", "q1", "median", "q3", "max"}, rows);
    }
    {
        std::vector<std::vector<std::string>> rows;
        for (size_t i = 0; i < corr.rows; ++i) {
            for (size_t j = 0; j < corr.cols; ++j) {
                rows.push_back({labels[i], labels[j], fmt_double(corr.at(i, j))});
            }
        }
        artifacts::write_csv(fs::path(cfg.out_dir) / "fig2_correlations.csv", {"a", "b", "r"}, rows);
    }
    {
        constexpr size_t kBins = 30;
        std::vector<std::vector<std::string>> rows;
        auto histogram = [&](const std::string& name, const std::vector<double>& col) {
            const auto [mn_it, mx_it] = std::minmax_element(col.begin(), col.end());
            const double mn = *mn_it, mx = *mx_it;
            const double width = (mx - mn) / static_cast<double>(kBins);
            std::vector<size_t> counts(kBins, 0);
            for (double v : col) {
                size_t b = width > 0.0 ? std::min<size_t>(static_cast<size_t>((v - mn) / width), kBins - 1) : 0;
                ++counts[b];
            }
            for (size_t b = 0; b < kBins; ++b) {
                rows.push_back({name, fmt_double(mn + width * static_cast<double>(b)),
                                fmt_double(mn + width * static_cast<double>(b + 1)),
                                std::to_string(counts[b])});
            }
        };
        for (size_t j = 0; j < ds.n_cols(); ++j) histogram(ds.columns[j], ds.column_copy(j));
        histogram(ds.target_name, ds.y);
        artifacts::write_csv(fs::path(cfg.out_dir) / "fig_histograms.csv",
                             {"column", "bin_left", "bin_right", "count"}, rows);
    }

    std::cout << "eda: " << ds.n_rows() << " rows, " << ds.n_cols() << " features -> " << cfg.out_dir
              << "/eda.json\n";
}

void cmd_split(const ExperimentConfig& cfg) {
    const Dataset ds = load_dataset(cfg);
    const SplitPair sp = stratified_split(ds, cfg.test_fraction, cfg.n_bins, cfg.seeds.split);

    ordered_json payload;
    payload["n_train"] = sp.train.n_rows();
    payload["n_test"] = sp.test.n_rows();
    payload["test_fraction"] = sp.test_fraction;
    payload["n_bins"] = sp.n_bins;
    payload["seed"] = sp.seed;
    payload["train_target_mean"] = population_mean(sp.train.y);
    payload["test_target_mean"] = population_mean(sp.test.y);
    payload["train_target_std"] = population_std(sp.train.y);
    payload["test_target_std"] = population_std(sp.test.y);
    payload["train_indices"] = sp.train_indices;
    payload["test_indices"] = sp.test_indices;
    artifacts::write(cfg.out_dir, "split", cfg.config_hash(), payload);

    std::cout << "split: train " << sp.train.n_rows() << " / test " << sp.test.n_rows()
              << " (target means " << population_mean(sp.train.y) << " vs " << population_mean(sp.test.y)
              << ")\n";
}

void cmd_importance(const ExperimentConfig& cfg) {
    const Dataset ds = load_dataset(cfg);
    const SplitDatasets split = load_split(cfg, ds);

    std::vector<std::string> warnings;
    const Dataset engineered = derive_features(split.train, &warnings);
    for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
    if (cfg.feature_k > engineered.n_cols()) {
        throw ConfigError(Errc::config_invalid, "ConfigInvalid: feature_k exceeds engineered column count");
    }

    const ImportanceReport report =
        ensemble_scores(engineered, ImportanceWeights{}, cfg.forest_estimators, cfg.seeds.forest, cfg.n_jobs);
    const FeatureSet selected = top_k(report, cfg.feature_k);

    ordered_json entries = ordered_json::array();
    for (const auto& e : report.entries) {
        entries.push_back({{"feature", e.feature},
                           {"mi", e.mi},
                           {"pearson", e.pearson_abs},
                           {"rf", e.rf},
                           {"mi_norm", e.mi_norm},
                           {"pearson_norm", e.pearson_norm},
                           {"rf_norm", e.rf_norm},
                           {"ensemble", e.ensemble},
                           {"rank", e.rank}});
    }
    ordered_json payload;
    payload["weights"] = {{"mi", 0.4}, {"pearson", 0.3}, {"rf", 0.3}};
    payload["forest_size"] = cfg.forest_estimators;
    payload["entries"] = std::move(entries);
    payload["feature_k"] = cfg.feature_k;
    payload["selected"] = selected.names;
    artifacts::write(cfg.out_dir, "importance", cfg.config_hash(), payload);

    std::vector<std::vector<std::string>> rows;
    for (const auto& e : report.entries) {
        rows.push_back({e.feature, fmt_double(e.mi), fmt_double(e.pearson_abs), fmt_double(e.rf),
                        fmt_double(e.ensemble), std::to_string(e.rank)});
    }
    artifacts::write_csv(fs::path(cfg.out_dir) / "fig8_importance.csv",
                         {"feature", "mi", "pearson", "rf", "ensemble", "rank"}, rows);

    std::cout << "importance: top feature " << report.entries.front().feature << ", selected "
              << selected.names.size() << " of " << report.entries.size() << "\n";
}

void cmd_tune(const ExperimentConfig& cfg) {
    const Dataset ds = load_dataset(cfg);
    const SplitDatasets split = load_split(cfg, ds);
    const FeatureSet selected = load_feature_set(cfg);

    const Dataset subset = sample_subset(split.train, cfg.subset_n, cfg.seeds.subset);
    const Dataset subset_sel = engineer_select(subset, selected);

    const SearchResult result =
        randomized_search(subset_sel, cfg.search_space, cfg.search_n_iter, cfg.search_cv,
                          cfg.seeds.search, cfg.partition(), cfg.svr_default, cfg.n_jobs);

    ordered_json trials = ordered_json::array();
    for (const auto& t : result.trials) {
        trials.push_back({{"trial", t.trial_index},
                          {"cell", t.cell_index},
                          {"params", params_json(t.params)},
                          {"fold_scores", t.fold_scores},
                          {"mean_score", t.mean_score}});
    }
    ordered_json payload;
    payload["n_iter"] = cfg.search_n_iter;
    payload["cv"] = cfg.search_cv;
    payload["total_fits"] = result.total_fits;
    payload["trials"] = std::move(trials);
    payload["best"] = {{"trial", result.best_index},
                       {"params", params_json(result.best_params)},
                       {"mean_score", result.best_mean_score}};
    payload["refit"] = {{"n_support_vectors", result.best_model.beta.size()},
                        {"n_iterations", result.best_model.n_iterations},
                        {"converged", result.best_model.converged},
                        {"counted_in_total_fits", false}};
    artifacts::write(cfg.out_dir, "tune", cfg.config_hash(), payload);

    std::cout << "tune: " << result.total_fits << " fits, best mean R2 " << result.best_mean_score
              << " at C=" << result.best_params.C << " eps=" << result.best_params.epsilon
              << " gamma=" << gamma_spec_name(result.best_params.kernel.gamma) << "\n";
}

void cmd_train(const ExperimentConfig& cfg) {
    const Dataset ds = load_dataset(cfg);
    const SplitDatasets split = load_split(cfg, ds);
    const FeatureSet selected = load_feature_set(cfg);
    const SvrParams best = load_best_params(cfg);

    const Dataset subset = sample_subset(split.train, cfg.subset_n, cfg.seeds.subset);
    const Dataset subset_sel = engineer_select(subset, selected);
    const Dataset test_sel = engineer_select(split.test, selected);

    const ColumnPartition part = cfg.partition().restricted_to(subset_sel.columns);
    const FittedPreprocessor fp = fit_preprocessor(subset_sel, part);
    const Dataset train_scaled = transform(fp, subset_sel);
    const Dataset test_scaled = transform(fp, test_sel);

    const SvrModel model = svr_fit(train_scaled.X, train_scaled.y, best);
    const std::vector<double> pred_train = svr_predict(model, train_scaled.X);
    const std::vector<double> pred_test = svr_predict(model, test_scaled.X);
    const MetricsBundle m_train = compute_metrics(subset_sel.y, pred_train);
    const MetricsBundle m_test = compute_metrics(test_sel.y, pred_test);

    ordered_json payload;
    payload["params"] = params_json(best);
    payload["n_train"] = subset_sel.n_rows();
    payload["n_test"] = test_sel.n_rows();
    payload["metrics_train"] = metrics_json(m_train);
    payload["metrics_test"] = metrics_json(m_test);
    payload["r2_gap"] = m_train.r2 - m_test.r2;
    payload["n_support_vectors"] = model.beta.size();
    payload["n_iterations"] = model.n_iterations;
    payload["converged"] = model.converged;
    payload["kkt_gap"] = model.kkt_gap;
    payload["dual_objective"] = model.dual_objective_value;
    artifacts::write(cfg.out_dir, "train", cfg.config_hash(), payload);

    {
        std::ofstream out(fs::path(cfg.out_dir) / "model.json");
        out << svr_model_to_json(model).dump(2) << "\n";
    }
    {
        std::vector<std::vector<std::string>> rows;
        for (size_t i = 0; i < test_sel.n_rows(); ++i) {
            rows.push_back({fmt_double(test_sel.y[i]), fmt_double(pred_test[i]),
                            fmt_double(test_sel.y[i] - pred_test[i])});
        }
        artifacts::write_csv(fs::path(cfg.out_dir) / "predictions.csv", {"y_true", "y_pred", "residual"},
                             rows);
    }

    std::cout << "train: test R2 " << m_test.r2 << ", RMSE " << m_test.rmse << ", MAE " << m_test.mae
              << ", SVs " << model.beta.size() << "\n";
    if (!model.converged) {
        throw FitError(Errc::max_iterations_exceeded,
                       "MaxIterationsExceeded: final gap " + std::to_string(model.kkt_gap));
    }
}

void cmd_crossval(const ExperimentConfig& cfg) {
    const Dataset ds = load_dataset(cfg);
    const SplitDatasets split = load_split(cfg, ds);
    const FeatureSet selected = load_feature_set(cfg);
    const SvrParams best = load_best_params(cfg);

    const Dataset subset = sample_subset(split.train, cfg.subset_n, cfg.seeds.subset);
    const Dataset subset_sel = engineer_select(subset, selected);
    const ColumnPartition part = cfg.partition().restricted_to(subset_sel.columns);

    const FoldScorer scorer = [&](const Dataset& fold_train, const Dataset& fold_val) {
        const FittedPreprocessor fp = fit_preprocessor(fold_train, part);
        const Dataset tr = transform(fp, fold_train);
        const Dataset va = transform(fp, fold_val);
        const SvrModel model = svr_fit(tr.X, tr.y, best);
        return r2_score(fold_val.y, svr_predict(model, va.X));
    };
    const CvResult cv = cross_validate(scorer, subset_sel, cfg.cv_folds, cfg.seeds.cv, cfg.n_jobs);

    ordered_json payload;
    payload["k"] = cfg.cv_folds;
    payload["fold_scores"] = cv.fold_scores;
    payload["mean"] = cv.mean;
    payload["std"] = cv.stddev;
    payload["ci_low"] = cv.ci_low;
    payload["ci_high"] = cv.ci_high;
    artifacts::write(cfg.out_dir, "crossval", cfg.config_hash(), payload);

    std::vector<std::vector<std::string>> rows;
    for (size_t f = 0; f < cv.fold_scores.size(); ++f) {
        rows.push_back({std::to_string(f + 1), fmt_double(cv.fold_scores[f])});
    }
    artifacts::write_csv(fs::path(cfg.out_dir) / "fig11_cv_scores.csv", {"fold", "r2"}, rows);

    std::cout << "crossval: mean R2 " << cv.mean << " +/- " << cv.stddev << ", CI [" << cv.ci_low << ", "
              << cv.ci_high << "]\n";
}

void cmd_ablate(const ExperimentConfig& cfg) {
    const Dataset ds = load_dataset(cfg);
    const SplitDatasets split = load_split(cfg, ds);
    const FeatureSet selected = load_feature_set(cfg);

    AblationConfig acfg;
    acfg.subset_n = cfg.subset_n;
    acfg.subset_seed = cfg.seeds.subset;
    acfg.default_params = cfg.svr_default;
    acfg.tuned_params = cfg.tuned_params();
    acfg.engineered_features = selected;
    acfg.partition = cfg.partition();
    acfg.n_jobs = cfg.n_jobs;

    const AblationResult result = run_ablation(split.train, split.test, acfg);
    ordered_json payload = ablation_report(result);
    payload["default_params"] = params_json(cfg.svr_default);
    payload["tuned_params"] = params_json(cfg.tuned_params());
    artifacts::write(cfg.out_dir, "ablation", cfg.config_hash(), payload);

    std::vector<std::vector<std::string>> rows;
    for (const auto& s : result.stages) {
        rows.push_back({std::string(1, s.id), s.scaling, s.features, s.params, fmt_double(s.test_r2)});
    }
    artifacts::write_csv(fs::path(cfg.out_dir) / "fig13_ablation.csv",
                         {"stage", "scaling", "features", "params", "test_r2"}, rows);

    std::cout << "ablate: A " << result.stages[0].test_r2 << " -> B " << result.stages[1].test_r2
              << " -> C " << result.stages[2].test_r2 << " -> D " << result.stages[3].test_r2 << "\n";
}

void cmd_compare(const ExperimentConfig& cfg) {
    const Dataset ds = load_dataset(cfg);
    const SplitDatasets split = load_split(cfg, ds);
    const FeatureSet selected = load_feature_set(cfg);

    const Dataset train_sel = engineer_select(split.train, selected);
    const Dataset test_sel = engineer_select(split.test, selected);
    const ColumnPartition part = cfg.partition().restricted_to(train_sel.columns);
    const FittedPreprocessor fp = fit_preprocessor(train_sel, part);
    const Dataset train_scaled = transform(fp, train_sel);
    const Dataset test_scaled = transform(fp, test_sel);

    struct Row {
        std::string model;
        double r2;
        std::string source;
    };
    std::vector<Row> rows;

    {
        const LinearModel ols = ols_fit(train_scaled.X, train_scaled.y);
        rows.push_back({"Linear Regression", r2_score(test_sel.y, linear_predict(ols, test_scaled.X)),
                        "internal"});
        const LinearModel ridge = ridge_fit(train_scaled.X, train_scaled.y, cfg.ridge_lambda);
        rows.push_back({"Ridge Regression", r2_score(test_sel.y, linear_predict(ridge, test_scaled.X)),
                        "internal"});
    }
    {
        const KnnModel knn = knn_fit(train_scaled.X, train_scaled.y, cfg.knn_k);
        rows.push_back({"K-Nearest Neighbours", r2_score(test_sel.y, knn_predict(knn, test_scaled.X)),
                        "internal"});
    }
    {
        TreeParams tp;
        tp.seed = derive_seed(cfg.seeds.forest, 0x7472);
        const RegressionTree tree = tree_fit(train_scaled.X, train_scaled.y, tp);
        rows.push_back({"Decision Tree", r2_score(test_sel.y, tree_predict(tree, test_scaled.X)),
                        "internal"});
        TreeParams fp_params;
        fp_params.seed = cfg.seeds.forest;
        const RandomForest forest =
            forest_fit(train_scaled.X, train_scaled.y, cfg.forest_estimators, fp_params, cfg.n_jobs);
        rows.push_back({"Random Forest", r2_score(test_sel.y, forest_predict(forest, test_scaled.X)),
                        "internal"});
    }
    {
        // linear-kernel diagnostic: exhaustive over the C x epsilon grid on
        // the SVR subset, same cv as the main search
        const Dataset subset = sample_subset(split.train, cfg.subset_n, cfg.seeds.subset);
        const Dataset subset_sel = engineer_select(subset, selected);
        ParamSpace linear_space = cfg.search_space;
        linear_space.kernel = KernelSpec::Kind::linear;
        linear_space.gamma_choices = {GammaSpec::scale()};
        const SearchResult lin =
            randomized_search(subset_sel, linear_space, linear_space.grid_size(), cfg.search_cv,
                              derive_seed(cfg.seeds.search, 0x6c696e), cfg.partition(), cfg.svr_default,
                              cfg.n_jobs);
        const Dataset test_lin = transform(lin.best_preprocessor, test_sel);
        rows.push_back({"SVR-Linear Kernel", r2_score(test_sel.y, svr_predict(lin.best_model, test_lin.X)),
                        "internal (subset)"});
    }
    {
        const ordered_json train_payload = artifacts::read(cfg.out_dir, "train", cfg.config_hash());
        rows.push_back({"SVR-RBF (Tuned)", train_payload.at("metrics_test").at("r2").get<double>(),
                        "this work"});
    }
    if (!cfg.external_scores.empty()) {
        std::ifstream in(cfg.external_scores);
        if (!in.is_open()) {
            throw ConfigError(Errc::config_invalid,
                              "ConfigInvalid: cannot open external scores " + cfg.external_scores);
        }
        ordered_json ext;
        try {
            in >> ext;
        } catch (const std::exception& e) {
            throw ConfigError(Errc::config_invalid, std::string("ConfigInvalid: external scores: ") + e.what());
        }
        for (const auto& row : ext) {
            rows.push_back({row.at("model").get<std::string>(), row.at("r2").get<double>(), "external"});
        }
    }

    std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) { return a.r2 > b.r2; });

    ordered_json table = ordered_json::array();
    size_t svr_rank = 0;
    for (size_t i = 0; i < rows.size(); ++i) {
        table.push_back({{"rank", i + 1}, {"model", rows[i].model}, {"test_r2", rows[i].r2},
                         {"source", rows[i].source}});
        if (rows[i].model == "SVR-RBF (Tuned)") svr_rank = i + 1;
    }
    ordered_json payload;
    payload["rows"] = std::move(table);
    payload["svr_rank"] = svr_rank;
    artifacts::write(cfg.out_dir, "compare", cfg.config_hash(), payload);

    std::vector<std::vector<std::string>> csv_rows;
    for (size_t i = 0; i < rows.size(); ++i) {
        csv_rows.push_back({std::to_string(i + 1), rows[i].model, fmt_double(rows[i].r2), rows[i].source});
    }
    artifacts::write_csv(fs::path(cfg.out_dir) / "fig12_model_comparison.csv",
                         {"rank", "model", "test_r2", "source"}, csv_rows);

    std::cout << "compare: " << rows.size() << " rows, SVR-RBF (Tuned) rank " << svr_rank << "\n";
}

void cmd_report(const ExperimentConfig& cfg) {
    const std::string hash = cfg.config_hash();
    ordered_json payload;
    payload["config"] = cfg.echo_json();
    payload["dataset_summary"] = artifacts::read(cfg.out_dir, "eda", hash);
    payload["split"] = artifacts::read(cfg.out_dir, "split", hash);
    payload["importance"] = artifacts::read(cfg.out_dir, "importance", hash);
    payload["search"] = artifacts::read(cfg.out_dir, "tune", hash);
    payload["final_model"] = artifacts::read(cfg.out_dir, "train", hash);
    payload["crossval"] = artifacts::read(cfg.out_dir, "crossval", hash);
    payload["ablation"] = artifacts::read(cfg.out_dir, "ablation", hash);
    payload["comparison"] = artifacts::read(cfg.out_dir, "compare", hash);
    artifacts::write(cfg.out_dir, "report", hash, payload);

    std::cout << "report: merged 8 artifacts -> " << cfg.out_dir << "/report.json (test R2 "
              << payload["final_model"]["metrics_test"]["r2"].get<double>() << ")\n";
}

} // namespace tuberegress
