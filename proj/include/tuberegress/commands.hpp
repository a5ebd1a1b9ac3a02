#pragma once

#include "tuberegress/config.hpp"

namespace tuberegress {

// One function per CLI subcommand. Each loads its inputs, writes the JSON
// artifact (plus any plot-ready CSVs) into cfg.out_dir and prints a short
// summary to stdout. Errors surface as tuberegress::Error.
void cmd_eda(const ExperimentConfig& cfg);
void cmd_split(const ExperimentConfig& cfg);
void cmd_importance(const ExperimentConfig& cfg);
void cmd_tune(const ExperimentConfig& cfg);
void cmd_train(const ExperimentConfig& cfg);
void cmd_crossval(const ExperimentConfig& cfg);
void cmd_ablate(const ExperimentConfig& cfg);
void cmd_compare(const ExperimentConfig& cfg);
void cmd_report(const ExperimentConfig& cfg);

} // namespace tuberegress
