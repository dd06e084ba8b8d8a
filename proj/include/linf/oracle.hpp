// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "linf/reduced_model.hpp"

namespace linf
{

struct SweepResult
{
  std::vector<std::pair<double, double>> grid;  // (omega, sigma), singular shifts left out
  double omega_best = 0.0;
  double sigma_best = 0.0;
  int refinement_iters = 0;
  std::vector<double> skipped;  // grid frequencies where D(i omega) was singular
};

// sigma(omega); may throw SingularShift.
using SigmaFunction = std::function<double(double)>;

// Equispaced sweep of [lo, hi] followed by golden-section refinement around every local
// grid maximum until the bracket is narrower than refine_tol. Throws InvalidConfig.
SweepResult grid_norm(const SigmaFunction &sigma, double lo, double hi, int npoints,
                      double refine_tol);
SweepResult grid_norm(const StructuredTF &tf, double lo, double hi, int npoints,
                      double refine_tol = 1.0e-9);
SweepResult grid_norm(const ReducedModel &rm, double lo, double hi, int npoints,
                      double refine_tol = 1.0e-9);

// Writes "omega,sigma" and one row per non-singular grid point. Returns the row count.
std::size_t sweep_csv(const SigmaFunction &sigma, double lo, double hi, int npoints,
                      std::ostream &out);
std::size_t sweep_csv(const StructuredTF &tf, double lo, double hi, int npoints,
                      std::ostream &out);
std::size_t sweep_csv(const ReducedModel &rm, double lo, double hi, int npoints,
                      std::ostream &out);
// Throws Error when the file cannot be written.
std::size_t sweep_csv(const StructuredTF &tf, double lo, double hi, int npoints,
                      const std::string &path);

}  // namespace linf
