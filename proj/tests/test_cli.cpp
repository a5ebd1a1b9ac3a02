#include <doctest.h>

#include <nlohmann/json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

using ordered_json = nlohmann::ordered_json;
namespace fs = std::filesystem;

TEST_SUITE_BEGIN("cli");

namespace {

const std::string kCli = TUBEREGRESS_CLI_PATH;
const std::string kSrc = TUBEREGRESS_SOURCE_DIR;

int run(const std::string& args) {
    const std::string cmd = kCli + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

std::string fixture_flags(const std::string& out_dir) {
    return "--fixture --dataset " + kSrc + "/data/fixture_housing.csv --out " + out_dir;
}

ordered_json read_artifact(const std::string& out_dir, const std::string& name) {
    std::ifstream in(out_dir + "/" + name + ".json");
    REQUIRE(in.is_open());
    ordered_json j;
    in >> j;
    return j;
}

} // namespace

TEST_CASE("full fixture pipeline produces all artifacts and plot CSVs") {
    const std::string out = "/tmp/tuberegress_cli_test";
    fs::remove_all(out);
    for (const char* cmd : {"eda", "split", "importance", "tune", "train", "crossval",
                            "ablate", "compare", "report"}) {
        CHECK(run(std::string(cmd) + " " + fixture_flags(out)) == 0);
    }

    for (const char* name : {"eda", "split", "importance", "tune", "train", "crossval",
                             "ablation", "compare", "report"}) {
        const ordered_json j = read_artifact(out, name);
        CHECK(j.at("schema_version").get<int>() == 1);
        CHECK(j.contains("config_hash"));
        CHECK(j.contains("payload"));
    }
    for (const char* f : {"fig1_box_stats.csv", "fig2_correlations.csv", "fig_histograms.csv",
                          "fig8_importance.csv", "predictions.csv", "fig11_cv_scores.csv",
                          "fig12_model_comparison.csv", "fig13_ablation.csv", "model.json"}) {
        CHECK(fs::exists(fs::path(out) / f));
    }

    SUBCASE("eda payload follows the pinned schema") {
        const ordered_json eda = read_artifact(out, "eda").at("payload");
        REQUIRE(eda.contains("columns"));
        REQUIRE(eda.contains("correlations"));
        const auto& c0 = eda.at("columns").at(0);
        for (const char* k : {"name", "mean", "median", "std", "min", "max", "q1", "q3"}) {
            CHECK(c0.contains(k));
        }
        CHECK(eda.at("correlations").size() == 9); // 8 features + target
    }

    SUBCASE("search bookkeeping matches n_iter x cv") {
        const ordered_json tune = read_artifact(out, "tune").at("payload");
        CHECK(tune.at("total_fits").get<int>() ==
              tune.at("n_iter").get<int>() * tune.at("cv").get<int>());
        CHECK(tune.at("trials").size() == tune.at("n_iter").get<size_t>());
    }

    SUBCASE("report merges every stage") {
        const ordered_json rep = read_artifact(out, "report").at("payload");
        for (const char* k : {"config", "dataset_summary", "split", "importance", "search",
                              "final_model", "crossval", "ablation", "comparison"}) {
            CHECK(rep.contains(k));
        }
    }
}

TEST_CASE("exit codes") {
    const std::string out = "/tmp/tuberegress_cli_err";
    fs::remove_all(out);

    SUBCASE("missing dataset file -> 3") {
        CHECK(run("eda --dataset /tmp/does_not_exist.csv --out " + out) == 3);
    }
    SUBCASE("invalid config file -> 2") {
        CHECK(run("eda --config /tmp/does_not_exist.json --out " + out) == 2);
    }
    SUBCASE("data validation error -> 3") {
        const std::string bad = "/tmp/tuberegress_bad.csv";
        std::ofstream f(bad);
        f << "MedInc,MedHouseVal\n1,\n";
        f.close();
        CHECK(run("eda --dataset " + bad + " --target-x --out " + out) == 2); // unknown flag
        CHECK(run("eda --dataset " + bad + " --out " + out) == 3);            // MissingValue
    }
    SUBCASE("missing upstream artifact -> 2") {
        CHECK(run("train " + fixture_flags(out + "_fresh")) == 2);
    }
}

TEST_CASE("stale artifacts are refused after a config change") {
    const std::string out = "/tmp/tuberegress_cli_stale";
    fs::remove_all(out);
    REQUIRE(run("eda " + fixture_flags(out)) == 0);
    REQUIRE(run("split " + fixture_flags(out)) == 0);
    // same out dir, different subset_n -> different config hash -> stale
    CHECK(run("importance " + fixture_flags(out) + " --subset 90") == 2);
    // matching config works
    CHECK(run("importance " + fixture_flags(out)) == 0);
}

TEST_CASE("external scores merge into the comparison") {
    const std::string out = "/tmp/tuberegress_cli_ext";
    fs::remove_all(out);
    for (const char* cmd : {"eda", "split", "importance", "tune", "train"}) {
        REQUIRE(run(std::string(cmd) + " " + fixture_flags(out)) == 0);
    }
    const std::string ext = "/tmp/tuberegress_ext.json";
    {
        std::ofstream f(ext);
        f << R"([{"model": "XGBoost", "r2": 0.832}, {"model": "Gradient Boosting", "r2": 0.783},)"
          << R"( {"model": "Lasso Regression", "r2": 0.650}])";
    }
    REQUIRE(run("compare " + fixture_flags(out) + " --external-scores " + ext) == 0);
    const ordered_json cmp = read_artifact(out, "compare").at("payload");
    CHECK(cmp.at("rows").size() == 10); // 7 internal + 3 external
    bool found = false;
    for (const auto& row : cmp.at("rows")) {
        if (row.at("model") == "XGBoost") {
            found = true;
            CHECK(row.at("test_r2").get<double>() == 0.832);
            CHECK(row.at("source") == "external");
        }
    }
    CHECK(found);
}

TEST_SUITE_END();
