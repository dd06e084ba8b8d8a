// SPDX-License-Identifier: Apache-2.0

#include "linf/inner_solvers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/SVD>

// Eigen has no complex generalized eigensolver, so the pencils go through LAPACK.
extern "C"
{
  void zggev_(char *, char *, int *, std::complex<double> *, int *, std::complex<double> *,
              int *, std::complex<double> *, std::complex<double> *, std::complex<double> *,
              int *, std::complex<double> *, int *, std::complex<double> *, int *, double *,
              int *);
}

namespace linf
{

namespace
{

constexpr double kEps = std::numeric_limits<double>::epsilon();

struct PencilEigenvalues
{
  std::vector<Complex> alpha, beta;
};

// Generalized eigenvalues lambda = alpha / beta of A x = lambda B x. Inputs are copied.
PencilEigenvalues generalized_eigenvalues(DenseMatrix A, DenseMatrix B)
{
  char jobvl = 'N', jobvr = 'N';
  int n = static_cast<int>(A.rows());
  int ld = std::max(n, 1);
  int one = 1;
  PencilEigenvalues ev{std::vector<Complex>(n), std::vector<Complex>(n)};
  std::vector<Complex> work(1);
  std::vector<double> rwork(8 * static_cast<std::size_t>(std::max(n, 1)));
  Complex dummy;
  int lwork = -1, info = 0;
  zggev_(&jobvl, &jobvr, &n, A.data(), &ld, B.data(), &ld, ev.alpha.data(), ev.beta.data(),
         &dummy, &one, &dummy, &one, work.data(), &lwork, rwork.data(), &info);
  lwork = std::max(static_cast<int>(work[0].real()), 2 * n);
  work.resize(lwork);
  zggev_(&jobvl, &jobvr, &n, A.data(), &ld, B.data(), &ld, ev.alpha.data(), ev.beta.data(),
         &dummy, &one, &dummy, &one, work.data(), &lwork, rwork.data(), &info);
  if (info != 0)
  {
    throw NoConvergence("zggev failed with info = " + std::to_string(info));
  }
  return ev;
}

// Imaginary parts of the finite eigenvalues lying on the imaginary axis.
std::vector<double> axis_eigenvalues(const PencilEigenvalues &ev, double norm_a, double norm_b,
                                     bool reject_singular)
{
  const double tol_a = 1.0e3 * kEps * std::max(norm_a, 1.0);
  const double tol_b = 1.0e3 * kEps * std::max(norm_b, 1.0);
  std::vector<double> out;
  for (std::size_t k = 0; k < ev.alpha.size(); k++)
  {
    const double a = std::abs(ev.alpha[k]), b = std::abs(ev.beta[k]);
    if (a <= tol_a && b <= tol_b)
    {
      if (reject_singular)
      {
        throw PencilSingular("level-set pencil is numerically singular");
      }
      continue;
    }
    if (b <= tol_b)
    {
      continue;  // infinite eigenvalue
    }
    const Complex lambda = ev.alpha[k] / ev.beta[k];
    if (std::abs(lambda.real()) <= kImagTol * (1.0 + std::abs(lambda)))
    {
      out.push_back(lambda.imag());
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

double sigma_or_unbounded(const ReducedModel &rm, double omega)
{
  try
  {
    return sigma_max(rm, omega).sigma;
  }
  catch (const SingularShift &)
  {
    throw UnboundedOnAxis(omega);
  }
}

bool in_interval(double w, double lo, double hi)
{
  return w >= lo && w <= hi;
}

}  // namespace

void InnerConfig::validate() const
{
  if (!(omega_lo < omega_hi) || std::isnan(omega_lo) || std::isinf(omega_lo))
  {
    throw InvalidConfig("inner interval needs finite omega_lo < omega_hi");
  }
  if (!(curvature_bound < 0.0))
  {
    throw InvalidConfig("curvature bound gamma must be negative");
  }
  if (!(bb_rel_tol > 0.0) || !(support_tol > 0.0))
  {
    throw InvalidConfig("inner tolerances must be positive");
  }
  if (max_inner_iters < 1)
  {
    throw InvalidConfig("max_inner_iters must be at least 1");
  }
}

std::vector<double> imaginary_crossings(const ReducedModel &rm, double level)
{
  if (!(level > 0.0))
  {
    throw InvalidConfig("level must be positive");
  }
  const auto d = descriptor_realization(rm);
  const Index r = rm.dim(), m = rm.m(), p = rm.p();
  const Index size = 2 * r + m + p;

  // Unknowns [x; z; u; w] with (i w E - A) x = B u, C x = level w,
  // (-i w E^* - A^*) z = C^* w, B^* z = level u. M is Hermitian, N skew-Hermitian.
  DenseMatrix M = DenseMatrix::Zero(size, size);
  DenseMatrix N = DenseMatrix::Zero(size, size);
  N.block(0, r, r, r) = -d.E.adjoint();
  N.block(r, 0, r, r) = d.E;
  M.block(0, r, r, r) = d.A.adjoint();
  M.block(0, 2 * r + m, r, p) = d.C.adjoint();
  M.block(r, 0, r, r) = d.A;
  M.block(r, 2 * r, r, m) = d.B;
  M.block(2 * r, r, m, r) = d.B.adjoint();
  M.block(2 * r, 2 * r, m, m) = -level * DenseMatrix::Identity(m, m);
  M.block(2 * r + m, 0, p, r) = d.C;
  M.block(2 * r + m, 2 * r + m, p, p) = -level * DenseMatrix::Identity(p, p);

  const double norm_m = M.norm(), norm_n = N.norm();
  return axis_eigenvalues(generalized_eigenvalues(std::move(M), std::move(N)), norm_m, norm_n,
                          true);
}

InnerResult bb_norm(const ReducedModel &rm, const InnerConfig &cfg)
{
  cfg.validate();
  const auto d = descriptor_realization(rm);
  const double lo = cfg.omega_lo, hi = cfg.omega_hi;

  // Poles of the reduced function on the searched part of the axis.
  const auto poles = axis_eigenvalues(generalized_eigenvalues(d.A, d.E), d.A.norm(),
                                      d.E.norm(), false);
  for (double w : poles)
  {
    if (in_interval(w, lo, hi))
    {
      throw UnboundedOnAxis(w);
    }
  }

  InnerResult res;
  auto consider = [&](double w)
  {
    const double s = sigma_or_unbounded(rm, w);
    res.evaluations++;
    if (s > res.value || res.evaluations == 1)
    {
      res.value = s;
      res.omega_opt = w;
    }
    return s;
  };

  consider(lo);
  if (std::isfinite(hi))
  {
    consider(hi);
  }
  else
  {
    // Strictly proper (E~ invertible) models vanish at infinity; otherwise probe far out.
    Eigen::JacobiSVD<DenseMatrix> svd(d.E);
    const auto &sv = svd.singularValues();
    const bool e_invertible = sv.size() == 0 || sv(sv.size() - 1) > 1.0e-12 * sv(0);
    if (!e_invertible)
    {
      consider(1.0e8 * (1.0 + std::abs(lo)));
    }
  }
  for (double w : rm.points())
  {
    if (in_interval(w, lo, hi))
    {
      consider(w);
    }
  }

  for (int iter = 0; iter < cfg.max_inner_iters; iter++)
  {
    const double level = (1.0 + 2.0 * cfg.bb_rel_tol) * res.value;
    if (!(level > 0.0))
    {
      // H~ vanishes on the interval.
      res.certified_gap = 0.0;
      return res;
    }
    std::vector<double> grid{lo};
    for (double w : imaginary_crossings(rm, level))
    {
      if (w > lo && w < hi)
      {
        grid.push_back(w);
      }
    }
    if (grid.size() == 1)
    {
      res.certified_gap = 2.0 * cfg.bb_rel_tol;
      return res;
    }
    grid.push_back(hi);

    const double previous = res.value;
    for (std::size_t k = 0; k + 1 < grid.size(); k++)
    {
      const double a = grid[k], b = grid[k + 1];
      consider(std::isfinite(b) ? 0.5 * (a + b) : a + std::max(1.0, std::abs(a)));
    }
    if (res.value <= previous)
    {
      // Crossings above the level could not be confirmed by evaluation; the level-set
      // test is at the limit of eigenvalue accuracy.
      res.certified_gap = 2.0 * cfg.bb_rel_tol;
      return res;
    }
  }
  throw NoConvergence("level-set iteration did not converge in " +
                      std::to_string(cfg.max_inner_iters) + " iterations");
}

double support_envelope(const std::vector<SupportSample> &samples, double curvature_bound,
                        double omega)
{
  const double c = -0.5 * curvature_bound;
  double env = std::numeric_limits<double>::infinity();
  for (const auto &s : samples)
  {
    const double dw = omega - s.omega;
    env = std::min(env, s.sigma + s.slope * dw + c * dw * dw);
  }
  return env;
}

namespace
{

struct GapBound
{
  double omega;
  double bound;
};

// Largest value of min(u_a, u_b) on [a, b] for the two adjacent upper supports.
GapBound gap_bound(const SupportSample &a, const SupportSample &b, double c)
{
  auto ua = [&](double x) { return a.sigma + a.slope * (x - a.omega) + c * (x - a.omega) * (x - a.omega); };
  auto ub = [&](double x) { return b.sigma + b.slope * (x - b.omega) + c * (x - b.omega) * (x - b.omega); };
  auto env = [&](double x) { return std::min(ua(x), ub(x)); };

  GapBound best{a.omega, env(a.omega)};
  if (env(b.omega) > best.bound)
  {
    best = {b.omega, env(b.omega)};
  }
  // u_a - u_b is affine in x because both supports share the curvature c.
  const double h = b.omega - a.omega;
  const double k = a.slope - b.slope + 2.0 * c * h;
  if (k > 0.0)
  {
    const double rhs = b.sigma - a.sigma + a.slope * a.omega - b.slope * b.omega +
                       c * h * (a.omega + b.omega);
    const double x = std::clamp(rhs / k, a.omega, b.omega);
    const double tiny = 1.0e-14 * (1.0 + std::abs(x));
    if (x - a.omega > tiny && b.omega - x > tiny && env(x) > best.bound)
    {
      best = {x, env(x)};
    }
  }
  return best;
}

}  // namespace

InnerResult qsupport_maximize(const SigmaEvaluator &f, const InnerConfig &cfg)
{
  cfg.validate();
  if (!std::isfinite(cfg.omega_hi))
  {
    throw InvalidConfig("quadratic-support maximization needs a finite interval");
  }
  const double c = -0.5 * cfg.curvature_bound;

  InnerResult res;
  std::vector<SupportSample> sorted;
  auto add = [&](double w, double bound)
  {
    SupportSample s = f(w);
    s.omega = w;
    res.evaluations++;
    if (s.sigma > bound + 1.0e-9 * (1.0 + std::abs(s.sigma)))
    {
      throw InvalidBound(w, s.sigma, bound);
    }
    res.trace.push_back(s);
    sorted.insert(std::upper_bound(sorted.begin(), sorted.end(), w,
                                   [](double x, const SupportSample &e) { return x < e.omega; }),
                  s);
    if (res.evaluations == 1 || s.sigma > res.value)
    {
      res.value = s.sigma;
      res.omega_opt = w;
    }
  };

  const double inf = std::numeric_limits<double>::infinity();
  add(cfg.omega_lo, inf);
  add(cfg.omega_hi, support_envelope(sorted, cfg.curvature_bound, cfg.omega_hi));

  std::vector<GapBound> gaps;
  while (true)
  {
    gaps.clear();
    for (std::size_t k = 0; k + 1 < sorted.size(); k++)
    {
      gaps.push_back(gap_bound(sorted[k], sorted[k + 1], c));
    }
    const auto top = std::max_element(gaps.begin(), gaps.end(),
                                      [](const GapBound &x, const GapBound &y)
                                      { return x.bound < y.bound; });
    const double upper = std::max(top->bound, res.value);
    res.certified_gap = upper - res.value;
    if (res.certified_gap <= cfg.support_tol * (1.0 + std::abs(res.value)))
    {
      return res;
    }
    if (res.evaluations >= cfg.max_inner_iters)
    {
      throw NoConvergence("quadratic-support search did not reach the tolerance in " +
                          std::to_string(cfg.max_inner_iters) + " evaluations (gap " +
                          std::to_string(res.certified_gap) + ")");
    }
    add(top->omega, support_envelope(sorted, cfg.curvature_bound, top->omega));
  }
}

InnerResult maximize(const ReducedModel &rm, const InnerConfig &cfg)
{
  InnerConfig local = cfg;
  if (rm.parent_is_real())
  {
    local.omega_lo = std::max(local.omega_lo, 0.0);
  }
  if (classify(rm) == ModelClass::Rational)
  {
    return bb_norm(rm, local);
  }
  return qsupport_maximize(
      [&rm](double w) -> SupportSample
      {
        const Complex s(0.0, w);
        try
        {
          const auto [H, dH] = rm.eval_with_derivative(s);
          const SingularTriple t = dominant_triple(H);
          return {w, t.sigma, singular_value_slope(t, Complex(0.0, 1.0) * dH)};
        }
        catch (const SingularShift &)
        {
          throw UnboundedOnAxis(w);
        }
      },
      local);
}

}  // namespace linf
