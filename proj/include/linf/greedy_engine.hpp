// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "linf/inner_solvers.hpp"
#include "linf/reduced_model.hpp"

namespace linf
{

enum class ExpansionMode
{
  Full,          // all singular directions, Hermite interpolation of sigma
  DominantOnly,  // dominant singular pair only, one column per side
};

enum class SubspacePolicy
{
  KeepAll,
  LastTwo,
};

struct IterationRecord
{
  double omega = 0.0;          // maximizer of the reduced function
  double sigma_reduced = 0.0;  // its reduced maximum
  Index dim = 0;               // reduced order the maximizer was computed on
  int inner_evaluations = 0;
  double inner_gap = 0.0;
  double seconds = 0.0;
  bool stagnated = false;  // the expansion at omega added no new directions
  bool bisection = false;  // a bisection point was added after stagnation
  bool repaired = false;   // reduced function had a pole on the axis at omega
  double sigma_full = 0.0;  // sigma(H(i omega)) on the full function

  bool operator==(const IterationRecord &) const = default;
};

struct SubspaceState
{
  struct Block
  {
    DenseMatrix v, w;
    std::vector<double> points;
  };

  ExpansionMode mode = ExpansionMode::Full;
  DenseMatrix V, W;
  std::vector<double> points;
  std::vector<IterationRecord> history;
  // Raw expansion blocks; kept only for the LastTwo policy.
  std::vector<Block> blocks;
  // Set by expand() when no direction survived orthogonalization.
  bool stagnated = false;

  Index dim() const { return V.cols(); }
};

struct RunConfig
{
  int r0 = 10;
  // Initial points are spread equidistantly on [0, omega_max]. Problem dependent; required.
  std::optional<double> omega_max;
  double eps = 1.0e-6;
  int r_max = 30;
  ExpansionMode expansion_mode = ExpansionMode::Full;
  SubspacePolicy subspace_policy = SubspacePolicy::KeepAll;
  InnerConfig inner;

  void validate() const;
};

struct ExpansionBlock
{
  DenseMatrix v, w;  // n x q each
  DenseMatrix h;     // H(i omega)
};

// Throws SingularShift.
ExpansionBlock expansion_block(const StructuredTF &tf, double omega, ExpansionMode mode);

// Appends the blocks with two-pass Gram-Schmidt. Columns whose projected norm drops below
// 1e-10 (pre-projection norm + 1) are discarded, after which the larger basis loses its
// newest columns until both have the same width.
SubspaceState expand(SubspaceState state, const DenseMatrix &v_new, const DenseMatrix &w_new);

struct RatioRow
{
  int iterate = 0;  // 1-based index into the maximizer sequence
  double omega = 0.0;
  double error = 0.0;  // |omega_r - omega_final|
  std::optional<double> ratio;        // e_r / e_{r-1}
  std::optional<double> superlinear;  // e_r / (e_{r-1} max(e_{r-2}, e_{r-1}))
  std::optional<double> sigma_error;  // |sigma_reduced_r - norm|

  bool operator==(const RatioRow &) const = default;
};

struct SolverResult
{
  double norm = 0.0;
  double omega_opt = 0.0;
  int iterations = 0;  // expansions after the initial reduced function
  bool converged = false;
  bool max_iterations = false;
  std::vector<double> initial_points;
  std::vector<IterationRecord> history;
  std::vector<RatioRow> ratios;
  std::vector<std::string> warnings;
  Index final_dim = 0;
  double seconds = 0.0;

  bool operator==(const SolverResult &) const = default;
};

// Called after the initial subspace is built and after every expansion.
using IterationObserver = std::function<void(const SubspaceState &)>;

// Throws AllShiftsSingular, InvalidConfig, or inner-solver errors it cannot recover from.
SolverResult run(const StructuredTF &tf, const RunConfig &cfg,
                 const IterationObserver &observer = {});

// Error table of a maximizer sequence against its last element.
std::vector<RatioRow> convergence_ratios(const std::vector<double> &omegas,
                                         const std::vector<double> &sigmas, double norm);

struct InterpolationEntry
{
  double omega = 0.0;
  double matrix_mismatch = 0.0;  // ||H(i w) - H~(i w)||_2
  double h_norm = 0.0;           // ||H(i w)||_2
  double sigma_gap = 0.0;        // sigma_r(w) - sigma(w)
  double derivative_mismatch = 0.0;
  bool simple = true;
};

struct InterpolationReport
{
  std::vector<InterpolationEntry> entries;
  double max_matrix_mismatch = 0.0;
  double min_sigma_gap = 0.0;
  double max_derivative_mismatch = 0.0;
};

InterpolationReport check_interpolation(const StructuredTF &tf, const SubspaceState &state);

}  // namespace linf
