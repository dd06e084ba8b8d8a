// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "linf/greedy_engine.hpp"

namespace linf
{

struct TermSpec
{
  ScalarTerm term;
  std::filesystem::path matrix;  // resolved against the manifest's base directory
  double scale = 1.0;
};

// Optional run defaults carried by a manifest; unset fields keep the RunConfig defaults.
struct ManifestConfig
{
  std::optional<int> r0;
  std::optional<double> omega_max;
  std::optional<double> eps;
  std::optional<int> r_max;
  std::optional<ExpansionMode> mode;
  std::optional<SubspacePolicy> policy;
  std::optional<double> gamma;
  std::optional<std::pair<double, double>> interval;
  std::optional<double> support_tol;
  std::optional<int> max_inner_iters;
};

struct ProblemManifest
{
  Index n = 0, m = 0, p = 0;
  std::vector<TermSpec> b, c, d;
  ManifestConfig config;
  std::filesystem::path base_dir;
};

// JSON layout:
//   {"dimensions": {"n": N, "m": M, "p": P},
//    "B": [{"term": {"k": 0, "tau": 0.0}, "matrix": "B.mtx", "scale": 1.0}, ...],
//    "C": [...], "D": [...],
//    "config": {"r0": 10, "omega_max": 50, "interval": [0, 50], "gamma": -100, ...}}
// Matrix paths are relative to base_dir, which defaults to the manifest's directory.
// Throws ParseError (with line where known) or InvalidConfig.
ProblemManifest read_manifest(const std::filesystem::path &path,
                              std::optional<std::filesystem::path> base_dir = std::nullopt);

// Loads every referenced matrix and assembles the transfer function. Throws ParseError,
// DimensionMismatch naming the factor, or InvalidConfig.
StructuredTF load_problem(const ProblemManifest &manifest);
StructuredTF load_problem(const std::filesystem::path &manifest_path,
                          std::optional<std::filesystem::path> base_dir = std::nullopt);

// Overlays the manifest's config on cfg. The interval also supplies omega_max when the
// manifest does not set one and the interval is finite.
void apply_config(const ManifestConfig &mc, RunConfig &cfg);

// Environment variable naming the directory of optional external benchmark data.
inline constexpr const char *kDataDirEnv = "LINF_DATA_DIR";

}  // namespace linf
