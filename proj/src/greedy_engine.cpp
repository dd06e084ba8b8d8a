// SPDX-License-Identifier: Apache-2.0

#include "linf/greedy_engine.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include <Eigen/SVD>

namespace linf
{

namespace
{

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0)
{
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Orthonormalizes `cols` against `basis` and appends the survivors; returns how many.
Index append_orthonormal(DenseMatrix &basis, const DenseMatrix &cols)
{
  Index added = 0;
  for (Index j = 0; j < cols.cols(); j++)
  {
    DenseVector x = cols.col(j);
    const double pre = x.norm();
    for (int pass = 0; pass < 2; pass++)
    {
      if (basis.cols() > 0)
      {
        x -= basis * (basis.adjoint() * x);
      }
    }
    const double post = x.norm();
    if (!(post >= 1.0e-10 * (pre + 1.0)))
    {
      continue;
    }
    basis.conservativeResize(Eigen::NoChange, basis.cols() + 1);
    basis.col(basis.cols() - 1) = x / post;
    added++;
  }
  return added;
}

bool close_enough(double a, double b, double eps)
{
  const double diff = std::abs(a - b);
  return diff == 0.0 || diff < eps * 0.5 * std::abs(a + b);
}

SubspaceState rebuild_last_two(SubspaceState state)
{
  if (state.blocks.size() > 2)
  {
    state.blocks.erase(state.blocks.begin(), state.blocks.end() - 2);
  }
  const Index n = state.V.rows();
  SubspaceState fresh;
  fresh.mode = state.mode;
  fresh.V = DenseMatrix(n, 0);
  fresh.W = DenseMatrix(n, 0);
  for (const auto &b : state.blocks)
  {
    fresh = expand(std::move(fresh), b.v, b.w);
    fresh.points.insert(fresh.points.end(), b.points.begin(), b.points.end());
  }
  fresh.blocks = std::move(state.blocks);
  fresh.history = std::move(state.history);
  fresh.stagnated = fresh.dim() <= state.dim() && state.stagnated;
  return fresh;
}

// Midpoint between the two largest local maxima of the reduced sigma on the search interval.
double bisection_point(const ReducedModel &rm, const InnerConfig &inner, double omega,
                       const std::vector<double> &points)
{
  double lo = inner.omega_lo, hi = inner.omega_hi;
  if (rm.parent_is_real())
  {
    lo = std::max(lo, 0.0);
  }
  if (!std::isfinite(hi))
  {
    const double far = points.empty() ? omega : *std::max_element(points.begin(), points.end());
    hi = 1.5 * std::max(far, omega) + 1.0;
  }
  constexpr int kSamples = 2001;
  std::vector<double> w(kSamples), s(kSamples, -1.0);
  for (int k = 0; k < kSamples; k++)
  {
    w[k] = lo + (hi - lo) * k / (kSamples - 1);
    try
    {
      s[k] = sigma_max(rm, w[k]).sigma;
    }
    catch (const SingularShift &)
    {
    }
  }
  std::vector<int> peaks;
  for (int k = 0; k < kSamples; k++)
  {
    const bool left = k == 0 || s[k] >= s[k - 1];
    const bool right = k == kSamples - 1 || s[k] >= s[k + 1];
    if (s[k] >= 0.0 && left && right)
    {
      peaks.push_back(k);
    }
  }
  std::sort(peaks.begin(), peaks.end(), [&](int a, int b) { return s[a] > s[b]; });
  if (peaks.size() >= 2)
  {
    return 0.5 * (w[peaks[0]] + w[peaks[1]]);
  }
  double nearest = lo;
  double dist = std::numeric_limits<double>::infinity();
  for (double p : points)
  {
    if (p != omega && std::abs(p - omega) < dist)
    {
      dist = std::abs(p - omega);
      nearest = p;
    }
  }
  return 0.5 * (omega + nearest);
}

}  // namespace

void RunConfig::validate() const
{
  if (r0 < 1)
  {
    throw InvalidConfig("r0 must be at least 1");
  }
  if (!omega_max || !(*omega_max >= 0.0) || !std::isfinite(*omega_max))
  {
    throw InvalidConfig("omega_max is required and must be a finite value >= 0");
  }
  if (!(eps > 0.0))
  {
    throw InvalidConfig("eps must be positive");
  }
  if (r_max < 1)
  {
    throw InvalidConfig("r_max must be at least 1");
  }
  inner.validate();
}

ExpansionBlock expansion_block(const StructuredTF &tf, double omega, ExpansionMode mode)
{
  const Complex s(0.0, omega);
  const auto lu = tf.factorization(s);
  const DenseMatrix Cs = DenseMatrix(tf.c_factor().eval(s));
  const DenseMatrix X = lu->solve(DenseMatrix(tf.b_factor().eval(s)));
  const DenseMatrix Y = lu->solve_adjoint(Cs.adjoint());

  ExpansionBlock block;
  block.h = Cs * X;
  if (mode == ExpansionMode::DominantOnly)
  {
    const SingularTriple t = dominant_triple(block.h);
    block.v = X * t.right;
    block.w = Y * t.left;
  }
  else if (tf.m() == tf.p())
  {
    block.v = X;
    block.w = Y;
  }
  else if (tf.m() < tf.p())
  {
    block.v = X;
    block.w = Y * block.h;
  }
  else
  {
    block.v = X * block.h.adjoint();
    block.w = Y;
  }
  return block;
}

SubspaceState expand(SubspaceState state, const DenseMatrix &v_new, const DenseMatrix &w_new)
{
  if (v_new.rows() != w_new.rows())
  {
    throw DimensionMismatch("expansion", "V and W blocks have different row counts");
  }
  if (state.V.size() == 0)
  {
    state.V = DenseMatrix(v_new.rows(), 0);
    state.W = DenseMatrix(w_new.rows(), 0);
  }
  const Index before = state.V.cols();
  append_orthonormal(state.V, v_new);
  append_orthonormal(state.W, w_new);
  const Index width = std::min(state.V.cols(), state.W.cols());
  state.V.conservativeResize(Eigen::NoChange, width);
  state.W.conservativeResize(Eigen::NoChange, width);
  state.stagnated = width == before;
  return state;
}

std::vector<RatioRow> convergence_ratios(const std::vector<double> &omegas,
                                         const std::vector<double> &sigmas, double norm)
{
  std::vector<RatioRow> rows;
  if (omegas.empty())
  {
    return rows;
  }
  const double target = omegas.back();
  std::vector<double> err;
  for (double w : omegas)
  {
    err.push_back(std::abs(w - target));
  }
  for (std::size_t r = 0; r < omegas.size(); r++)
  {
    RatioRow row;
    row.iterate = static_cast<int>(r) + 1;
    row.omega = omegas[r];
    row.error = err[r];
    if (r >= 1 && err[r - 1] > 0.0)
    {
      row.ratio = err[r] / err[r - 1];
    }
    if (r >= 2)
    {
      const double denom = err[r - 1] * std::max(err[r - 2], err[r - 1]);
      if (denom > 0.0)
      {
        row.superlinear = err[r] / denom;
      }
    }
    if (r < sigmas.size() && std::isfinite(sigmas[r]))
    {
      row.sigma_error = std::abs(sigmas[r] - norm);
    }
    rows.push_back(row);
  }
  return rows;
}

SolverResult run(const StructuredTF &tf, const RunConfig &cfg, const IterationObserver &observer)
{
  cfg.validate();
  const auto t_start = Clock::now();
  SolverResult result;

  const double omega_max = *cfg.omega_max;
  for (int k = 0; k < cfg.r0; k++)
  {
    result.initial_points.push_back(cfg.r0 == 1 ? omega_max
                                                : omega_max * k / (cfg.r0 - 1));
  }

  SubspaceState state;
  state.mode = cfg.expansion_mode;
  state.V = DenseMatrix(tf.n(), 0);
  state.W = DenseMatrix(tf.n(), 0);

  // Best full-function value seen at any expansion point.
  double best_sigma = -1.0, best_omega = 0.0;
  auto note_full = [&](double w, const DenseMatrix &h)
  {
    const double s = dominant_triple(h).sigma;
    if (s > best_sigma)
    {
      best_sigma = s;
      best_omega = w;
    }
    return s;
  };

  auto add_block = [&](SubspaceState st, const ExpansionBlock &b, double w, bool new_block)
  {
    if (cfg.subspace_policy == SubspacePolicy::LastTwo)
    {
      if (new_block || st.blocks.empty())
      {
        st.blocks.push_back({b.v, b.w, {w}});
      }
      else
      {
        auto &last = st.blocks.back();
        DenseMatrix v(last.v.rows(), last.v.cols() + b.v.cols());
        v << last.v, b.v;
        DenseMatrix ww(last.w.rows(), last.w.cols() + b.w.cols());
        ww << last.w, b.w;
        last.v = std::move(v);
        last.w = std::move(ww);
        last.points.push_back(w);
      }
      const Index before = st.dim();
      SubspaceState next = rebuild_last_two(std::move(st));
      next.stagnated = next.dim() <= before && !new_block ? next.stagnated : false;
      return next;
    }
    SubspaceState next = expand(std::move(st), b.v, b.w);
    next.points.push_back(w);
    return next;
  };

  bool any_initial = false;
  double prev_omega = 0.0, prev_sigma = -1.0;
  for (double w : result.initial_points)
  {
    try
    {
      const ExpansionBlock b = expansion_block(tf, w, cfg.expansion_mode);
      const double s = note_full(w, b.h);
      if (s > prev_sigma)
      {
        prev_sigma = s;
        prev_omega = w;
      }
      state = add_block(std::move(state), b, w, !any_initial);
      any_initial = true;
    }
    catch (const SingularShift &e)
    {
      result.warnings.push_back("skipped initial point " + std::to_string(w) + ": " +
                                e.what());
    }
  }
  if (!any_initial)
  {
    throw AllShiftsSingular("every initial interpolation point hit a singular shift");
  }
  if (observer)
  {
    observer(state);
  }

  std::vector<double> omegas, sigmas;
  while (true)
  {
    const auto t_iter = Clock::now();
    IterationRecord rec;
    rec.dim = state.dim();
    const ReducedModel rm = project(tf, state.V, state.W, state.points);

    InnerResult inner;
    try
    {
      inner = maximize(rm, cfg.inner);
    }
    catch (const UnboundedOnAxis &e)
    {
      inner.omega_opt = e.omega();
      inner.value = std::numeric_limits<double>::infinity();
      rec.repaired = true;
      result.warnings.push_back("reduced function unbounded near omega = " +
                                std::to_string(e.omega()) + "; expanding there");
    }
    const double w = inner.omega_opt;
    rec.omega = w;
    rec.sigma_reduced = inner.value;
    rec.inner_evaluations = inner.evaluations;
    rec.inner_gap = inner.certified_gap;
    omegas.push_back(w);
    sigmas.push_back(inner.value);

    if (!rec.repaired && close_enough(w, prev_omega, cfg.eps))
    {
      result.converged = true;
      rec.seconds = seconds_since(t_iter);
      state.history.push_back(rec);
      break;
    }
    if (result.iterations >= cfg.r_max)
    {
      result.max_iterations = true;
      result.warnings.push_back("reached r_max = " + std::to_string(cfg.r_max) +
                                " iterations without convergence");
      rec.seconds = seconds_since(t_iter);
      state.history.push_back(rec);
      break;
    }

    const ExpansionBlock b = expansion_block(tf, w, cfg.expansion_mode);
    rec.sigma_full = note_full(w, b.h);
    state = add_block(std::move(state), b, w, true);
    if (state.stagnated)
    {
      rec.stagnated = true;
      const double wb = bisection_point(rm, cfg.inner, w, state.points);
      try
      {
        const ExpansionBlock bb = expansion_block(tf, wb, cfg.expansion_mode);
        note_full(wb, bb.h);
        state = add_block(std::move(state), bb, wb, false);
        rec.bisection = true;
      }
      catch (const SingularShift &e)
      {
        result.warnings.push_back(std::string("bisection point skipped: ") + e.what());
      }
    }
    result.iterations++;
    prev_omega = w;
    rec.seconds = seconds_since(t_iter);
    state.history.push_back(rec);
    if (observer)
    {
      observer(state);
    }
  }

  const double w_final = omegas.back();
  const double s_final = sigma_max(tf, w_final).sigma;
  state.history.back().sigma_full = s_final;
  result.omega_opt = w_final;
  result.norm = s_final;
  if (best_sigma > s_final)
  {
    result.warnings.push_back("an earlier interpolation point has a larger value; reporting it");
    result.omega_opt = best_omega;
    result.norm = best_sigma;
  }
  result.history = state.history;
  result.final_dim = state.dim();
  result.ratios = convergence_ratios(omegas, sigmas, result.norm);
  result.seconds = seconds_since(t_start);
  return result;
}

InterpolationReport check_interpolation(const StructuredTF &tf, const SubspaceState &state)
{
  InterpolationReport report;
  if (state.points.empty() || state.dim() == 0)
  {
    return report;
  }
  const ReducedModel rm = project(tf, state.V, state.W, state.points);
  report.min_sigma_gap = std::numeric_limits<double>::infinity();
  for (double w : state.points)
  {
    InterpolationEntry e;
    e.omega = w;
    const Complex s(0.0, w);
    const DenseMatrix Hf = tf.eval_H(s);
    const SingularTriple tf_t = dominant_triple(Hf);
    e.h_norm = tf_t.sigma;
    e.simple = tf_t.simple;
    try
    {
      const auto [Hr, dHr] = rm.eval_with_derivative(s);
      const SingularTriple rm_t = dominant_triple(Hr);
      e.matrix_mismatch = dominant_triple(Hf - Hr).sigma;
      e.sigma_gap = rm_t.sigma - tf_t.sigma;
      const double full_slope =
          singular_value_slope(tf_t, Complex(0.0, 1.0) * tf.eval_H_derivative(s));
      const double red_slope = singular_value_slope(rm_t, Complex(0.0, 1.0) * dHr);
      e.derivative_mismatch = std::abs(full_slope - red_slope);
    }
    catch (const SingularShift &)
    {
      e.matrix_mismatch = std::numeric_limits<double>::infinity();
      e.sigma_gap = -std::numeric_limits<double>::infinity();
      e.derivative_mismatch = std::numeric_limits<double>::infinity();
    }
    report.max_matrix_mismatch = std::max(report.max_matrix_mismatch, e.matrix_mismatch);
    report.min_sigma_gap = std::min(report.min_sigma_gap, e.sigma_gap);
    if (e.simple)
    {
      report.max_derivative_mismatch =
          std::max(report.max_derivative_mismatch, e.derivative_mismatch);
    }
    report.entries.push_back(e);
  }
  return report;
}

}  // namespace linf
