#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>

#include "tuberegress/commands.hpp"
#include "tuberegress/errors.hpp"

namespace {

struct CliOverrides {
    std::string config_path;
    bool fixture = false;
    std::optional<uint64_t> seed;
    std::optional<size_t> subset;
    std::optional<double> test_frac;
    std::optional<std::string> out;
    std::optional<std::string> external_scores;
    std::optional<std::string> dataset;
    std::optional<unsigned> jobs;
};

tuberegress::ExperimentConfig build_config(const CliOverrides& o) {
    tuberegress::ExperimentConfig cfg;
    if (!o.config_path.empty()) cfg = tuberegress::ExperimentConfig::from_file(o.config_path);
    if (o.fixture) cfg.apply_fixture_profile();
    if (o.seed) {
        cfg.seeds.split = *o.seed;
        cfg.seeds.subset = *o.seed;
        cfg.seeds.cv = *o.seed;
    }
    if (o.subset) cfg.subset_n = *o.subset;
    if (o.test_frac) cfg.test_fraction = *o.test_frac;
    if (o.out) cfg.out_dir = *o.out;
    if (o.external_scores) cfg.external_scores = *o.external_scores;
    if (o.dataset) cfg.dataset_path = *o.dataset;
    if (o.jobs) cfg.n_jobs = *o.jobs;
    return cfg;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"support-vector-regression experiment harness"};
    app.require_subcommand(1);
    app.fallthrough(); // accept global options after the subcommand name

    CliOverrides o;
    app.add_option("--config", o.config_path, "experiment config file (JSON)");
    app.add_flag("--fixture", o.fixture, "run on the bundled 200-row synthetic dataset");
    app.add_option("--seed", o.seed, "override split/subset/cv seeds");
    app.add_option("--subset", o.subset, "override subset_n");
    app.add_option("--test-frac", o.test_frac, "override test fraction");
    app.add_option("--out", o.out, "output directory");
    app.add_option("--external-scores", o.external_scores, "external model scores JSON (compare)");
    app.add_option("--dataset", o.dataset, "override dataset CSV path");
    app.add_option("--jobs", o.jobs, "worker threads (0 = all cores)");

    using Cmd = void (*)(const tuberegress::ExperimentConfig&);
    const std::pair<const char*, Cmd> commands[] = {
        {"eda", tuberegress::cmd_eda},         {"split", tuberegress::cmd_split},
        {"importance", tuberegress::cmd_importance}, {"tune", tuberegress::cmd_tune},
        {"train", tuberegress::cmd_train},     {"crossval", tuberegress::cmd_crossval},
        {"ablate", tuberegress::cmd_ablate},   {"compare", tuberegress::cmd_compare},
        {"report", tuberegress::cmd_report},
    };
    for (const auto& [name, fn] : commands) {
        auto* sub = app.add_subcommand(name);
        sub->callback([&o, fn]() { fn(build_config(o)); });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const tuberegress::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.exit_code();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
