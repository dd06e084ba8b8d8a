// SPDX-License-Identifier: Apache-2.0

#include "linf/oracle.hpp"

#include <cerrno>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iomanip>

#include "linf/errors.hpp"

namespace linf
{

namespace
{

std::vector<double> linspace(double lo, double hi, int npoints)
{
  std::vector<double> w(npoints);
  for (int k = 0; k < npoints; k++)
  {
    w[k] = (npoints == 1) ? lo : lo + (hi - lo) * k / (npoints - 1);
  }
  if (npoints > 1)
  {
    w.back() = hi;
  }
  return w;
}

void check_interval(double lo, double hi)
{
  if (!std::isfinite(lo) || !std::isfinite(hi) || lo > hi)
  {
    throw InvalidConfig("sweep interval must be finite with lo <= hi");
  }
}

struct Probe
{
  const SigmaFunction &f;
  double best_w, best_s;

  // NaN marks a singular shift.
  double operator()(double w)
  {
    double s;
    try
    {
      s = f(w);
    }
    catch (const SingularShift &)
    {
      return std::nan("");
    }
    if (s > best_s)
    {
      best_s = s;
      best_w = w;
    }
    return s;
  }
};

// Maximizes on [a, b]; returns the number of golden-section steps.
int golden_section(Probe &probe, double a, double b, double tol)
{
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = b - g * (b - a), x2 = a + g * (b - a);
  double f1 = probe(x1), f2 = probe(x2);
  int iters = 0;
  while (b - a >= tol && iters < 500)
  {
    // A singular point inside the bracket is treated as -inf.
    const double v1 = std::isnan(f1) ? -INFINITY : f1;
    const double v2 = std::isnan(f2) ? -INFINITY : f2;
    if (v1 >= v2)
    {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - g * (b - a);
      f1 = probe(x1);
    }
    else
    {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + g * (b - a);
      f2 = probe(x2);
    }
    iters++;
  }
  probe(0.5 * (a + b));
  return iters;
}

SigmaFunction sigma_of(const StructuredTF &tf)
{
  return [&tf](double w) { return sigma_max(tf, w).sigma; };
}

SigmaFunction sigma_of(const ReducedModel &rm)
{
  return [&rm](double w) { return sigma_max(rm, w).sigma; };
}

}  // namespace

SweepResult grid_norm(const SigmaFunction &sigma, double lo, double hi, int npoints,
                      double refine_tol)
{
  if (npoints < 2)
  {
    throw InvalidConfig("npoints must be at least 2");
  }
  if (!(refine_tol > 0.0))
  {
    throw InvalidConfig("refine_tol must be positive");
  }
  check_interval(lo, hi);

  SweepResult res;
  Probe probe{sigma, lo, -1.0};
  const std::vector<double> w = linspace(lo, hi, npoints);
  std::vector<double> s(npoints);
  for (int k = 0; k < npoints; k++)
  {
    s[k] = probe(w[k]);
    if (std::isnan(s[k]))
    {
      res.skipped.push_back(w[k]);
    }
    else
    {
      res.grid.emplace_back(w[k], s[k]);
    }
  }
  if (res.grid.empty())
  {
    throw AllShiftsSingular("every sweep point hit a singular shift");
  }

  for (int k = 0; k < npoints; k++)
  {
    if (std::isnan(s[k]))
    {
      continue;
    }
    const bool left = k == 0 || std::isnan(s[k - 1]) || s[k] >= s[k - 1];
    const bool right = k == npoints - 1 || std::isnan(s[k + 1]) || s[k] >= s[k + 1];
    if (!(left && right))
    {
      continue;
    }
    const double a = w[std::max(k - 1, 0)];
    const double b = w[std::min(k + 1, npoints - 1)];
    if (b - a >= refine_tol)
    {
      res.refinement_iters += golden_section(probe, a, b, refine_tol);
    }
  }
  res.omega_best = probe.best_w;
  res.sigma_best = probe.best_s;
  return res;
}

SweepResult grid_norm(const StructuredTF &tf, double lo, double hi, int npoints,
                      double refine_tol)
{
  return grid_norm(sigma_of(tf), lo, hi, npoints, refine_tol);
}

SweepResult grid_norm(const ReducedModel &rm, double lo, double hi, int npoints,
                      double refine_tol)
{
  return grid_norm(sigma_of(rm), lo, hi, npoints, refine_tol);
}

std::size_t sweep_csv(const SigmaFunction &sigma, double lo, double hi, int npoints,
                      std::ostream &out)
{
  if (npoints < 1)
  {
    throw InvalidConfig("npoints must be at least 1");
  }
  check_interval(lo, hi);
  // A degenerate interval has a single distinct frequency.
  const std::vector<double> w = linspace(lo, hi, lo == hi ? 1 : npoints);
  out << "omega,sigma\n" << std::scientific << std::setprecision(17);
  std::size_t rows = 0;
  for (double x : w)
  {
    double s;
    try
    {
      s = sigma(x);
    }
    catch (const SingularShift &)
    {
      continue;
    }
    out << x << ',' << s << '\n';
    rows++;
  }
  return rows;
}

std::size_t sweep_csv(const StructuredTF &tf, double lo, double hi, int npoints,
                      std::ostream &out)
{
  return sweep_csv(sigma_of(tf), lo, hi, npoints, out);
}

std::size_t sweep_csv(const ReducedModel &rm, double lo, double hi, int npoints,
                      std::ostream &out)
{
  return sweep_csv(sigma_of(rm), lo, hi, npoints, out);
}

std::size_t sweep_csv(const StructuredTF &tf, double lo, double hi, int npoints,
                      const std::string &path)
{
  std::ofstream out(path);
  if (!out)
  {
    throw Error("cannot open " + path + ": " + std::strerror(errno));
  }
  const std::size_t rows = sweep_csv(tf, lo, hi, npoints, out);
  out.flush();
  if (!out)
  {
    throw Error("write to " + path + " failed: " + std::strerror(errno));
  }
  return rows;
}

}  // namespace linf
