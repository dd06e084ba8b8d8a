// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <limits>
#include <vector>

#include "linf/reduced_model.hpp"

namespace linf
{

struct InnerConfig
{
  double omega_lo = 0.0;
  // May be +inf for Rational models; General models need a finite interval.
  double omega_hi = std::numeric_limits<double>::infinity();
  double bb_rel_tol = 1.0e-9;
  // Lower bound on the second derivative of -sigma; must be negative.
  double curvature_bound = -100.0;
  double support_tol = 1.0e-8;
  int max_inner_iters = 200;

  // Throws InvalidConfig.
  void validate() const;
};

struct SupportSample
{
  double omega = 0.0;
  double sigma = 0.0;
  double slope = 0.0;
};

struct InnerResult
{
  double omega_opt = 0.0;
  double value = 0.0;
  // Quadratic support: envelope bound minus value. Level set: relative tolerance achieved.
  double certified_gap = 0.0;
  int evaluations = 0;
  // Quadratic support only: samples in evaluation order.
  std::vector<SupportSample> trace;
};

// Finite, purely imaginary eigenvalues i*omega (|Re| <= kImagTol (1 + |lambda|)) of the even
// pencil in (E~, A~, B~, C~, level); sorted. Throws PencilSingular.
inline constexpr double kImagTol = 1.0e-8;
std::vector<double> imaginary_crossings(const ReducedModel &rm, double level);

// Level-set iteration for C~(sE~ - A~)^{-1}B~ on [omega_lo, omega_hi]. Throws
// UnboundedOnAxis, NoConvergence or InvalidConfig (model not Rational).
InnerResult bb_norm(const ReducedModel &rm, const InnerConfig &cfg);

// Evaluates (sigma, d sigma / d omega) at omega.
using SigmaEvaluator = std::function<SupportSample(double)>;

// Upper envelope min_k [sigma_k + slope_k (w - w_k) - (gamma / 2) (w - w_k)^2] at omega.
double support_envelope(const std::vector<SupportSample> &samples, double curvature_bound,
                        double omega);

// Global maximization of sigma on a finite interval with quadratic support functions.
// Throws NoConvergence or InvalidBound.
InnerResult qsupport_maximize(const SigmaEvaluator &f, const InnerConfig &cfg);

// Dispatches on classify(rm). The interval is clipped to omega >= 0 for real parents.
InnerResult maximize(const ReducedModel &rm, const InnerConfig &cfg);

}  // namespace linf
