#pragma once

#include <string>
#include <utility>
#include <vector>

#include "relspec/config.hpp"
#include "relspec/textio.hpp"
#include "relspec/zeta.hpp"

namespace relspec {

// Outcome of one pipeline run. Artifacts are assembled fully in memory and
// only then written, so a failing stage leaves the output directory untouched.
struct ExperimentResult {
  ExperimentConfig config;
  HeatTraceSeries series;
  AsymptoticExpansion expansion;
  ZetaResult zeta;
  std::string output_directory;
  std::vector<std::string> written;  // file names inside output_directory
  std::string manifest;
};

// Full pipeline: validate, build, heat series, expansion, zeta, invariants,
// artifact writing. output_root overrides where relative output directories
// land; errors carry the failing stage name in their message.
ExperimentResult run_experiment(const Config& config, const std::string& output_root = {},
                                int threads = 1);

// The plot-ready artifact contents without touching the file system.
std::vector<std::pair<std::string, std::string>> experiment_artifacts(const ExperimentResult& r);

}  // namespace relspec
