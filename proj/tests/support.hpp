// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "linf/fixtures.hpp"
#include "linf/greedy_engine.hpp"

namespace linf::testing
{

inline const Complex kI(0.0, 1.0);

struct Descriptor
{
  DenseMatrix E, A, B, C;
  std::vector<Complex> poles;
};

inline DenseMatrix random_dense(std::mt19937 &rng, Index rows, Index cols)
{
  std::normal_distribution<double> g;
  DenseMatrix M(rows, cols);
  for (Index j = 0; j < cols; j++)
    for (Index i = 0; i < rows; i++)
      M(i, j) = g(rng);
  return M;
}

inline DenseMatrix random_complex(std::mt19937 &rng, Index rows, Index cols)
{
  return random_dense(rng, rows, cols) + kI * random_dense(rng, rows, cols);
}

// Well conditioned: I + 0.3 G / sqrt(n).
inline DenseMatrix random_transform(std::mt19937 &rng, Index n)
{
  return DenseMatrix::Identity(n, n) + (0.3 / std::sqrt(double(n))) * random_dense(rng, n, n);
}

struct DescriptorOptions
{
  double min_decay = 0.1;  // poles have real part <= -min_decay
  double max_decay = 1.0;
  double max_freq = 10.0;  // |imag part| of the poles
  Index algebraic = 0;     // rows of E that are zero before the transform (singular E)
};

// E = T diag(I, 0) S and A = T diag(A0, I) S with A0 block diagonal (1x1 real, 2x2 complex
// pairs), so the finite poles are the eigenvalues of A0.
inline Descriptor random_descriptor(std::mt19937 &rng, Index n, Index m, Index p,
                                    const DescriptorOptions &opt = {})
{
  std::uniform_real_distribution<double> decay(opt.min_decay, opt.max_decay);
  std::uniform_real_distribution<double> freq(0.0, opt.max_freq);
  const Index nd = n - opt.algebraic;
  DenseMatrix A0 = DenseMatrix::Zero(n, n), E0 = DenseMatrix::Zero(n, n);
  Descriptor d;
  Index i = 0;
  while (i < nd)
  {
    const double a = -decay(rng);
    if (i + 1 < nd)
    {
      const double b = freq(rng);
      A0(i, i) = a;
      A0(i + 1, i + 1) = a;
      A0(i, i + 1) = b;
      A0(i + 1, i) = -b;
      d.poles.push_back({a, b});
      d.poles.push_back({a, -b});
      i += 2;
    }
    else
    {
      A0(i, i) = a;
      d.poles.push_back({a, 0.0});
      i++;
    }
  }
  for (Index k = 0; k < nd; k++)
    E0(k, k) = 1.0;
  for (Index k = nd; k < n; k++)
    A0(k, k) = 1.0;
  const DenseMatrix T = random_transform(rng, n), S = random_transform(rng, n);
  d.E = T * E0 * S;
  d.A = T * A0 * S;
  d.B = random_dense(rng, n, m);
  d.C = random_dense(rng, p, n);
  return d;
}

inline StructuredTF to_tf(const Descriptor &d)
{
  return make_descriptor(d.E, d.A, d.B, d.C);
}

inline ReducedModel to_reduced(const DenseMatrix &E, const DenseMatrix &A, const DenseMatrix &B,
                               const DenseMatrix &C, bool parent_is_real = true)
{
  return ReducedModel(DenseFactor({{{0, 0.0}, C}}, "C_factor"),
                      DenseFactor({{{1, 0.0}, E}, {{0, 0.0}, DenseMatrix(-A)}}, "D_factor"),
                      DenseFactor({{{0, 0.0}, B}}, "B_factor"), {}, parent_is_real);
}

inline ReducedModel to_reduced(const Descriptor &d)
{
  return to_reduced(d.E, d.A, d.B, d.C);
}

// C (sE - A)^{-1} B through an explicit inverse.
inline DenseMatrix explicit_H(const Descriptor &d, Complex s)
{
  return d.C * (s * d.E - d.A).inverse() * d.B;
}

inline DenseMatrix dense1(double x)
{
  return DenseMatrix::Constant(1, 1, x);
}

// 1/(s + 1).
inline StructuredTF first_order()
{
  return make_descriptor(dense1(1.0), dense1(-1.0), dense1(1.0), dense1(1.0));
}

// 1/(s + 1) + 1/(s + 2).
inline StructuredTF two_pole()
{
  DenseMatrix A(2, 2);
  A << -1, 0, 0, -2;
  return make_descriptor(DenseMatrix::Identity(2, 2), A, DenseMatrix::Ones(2, 1),
                         DenseMatrix::Ones(1, 2));
}

inline double central_difference(const std::function<double(double)> &f, double x, double h)
{
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

inline double rel_err(double a, double b)
{
  return std::abs(a - b) / std::max(std::abs(b), 1e-300);
}

}  // namespace linf::testing
