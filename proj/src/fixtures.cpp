// SPDX-License-Identifier: Apache-2.0

#include "linf/fixtures.hpp"

#include <vector>

#include "linf/errors.hpp"

namespace linf
{

SparseMatrix delay_T(Index n)
{
  std::vector<Eigen::Triplet<Complex>> t;
  t.emplace_back(0, 0, 1.0);
  t.emplace_back(n - 1, n - 1, 1.0);
  for (Index i = 0; i + 1 < n; i++)
  {
    t.emplace_back(i, i + 1, 1.0);
    t.emplace_back(i + 1, i, 1.0);
  }
  SparseMatrix T(n, n);
  T.setFromTriplets(t.begin(), t.end());
  return T;
}

StructuredTF make_delay_fixture(Index n, double tau, double beta, double theta)
{
  if (n < 2)
  {
    throw InvalidConfig("delay fixture needs n >= 2");
  }
  if (!(tau > 0.0))
  {
    throw InvalidConfig("delay fixture needs tau > 0");
  }
  if (beta == 0.0)
  {
    throw InvalidConfig("delay fixture needs beta != 0");
  }
  const SparseMatrix T = delay_T(n);
  SparseMatrix I(n, n);
  I.setIdentity();
  const SparseMatrix E = T + Complex(theta) * I;
  const SparseMatrix Tm = T - Complex(theta) * I;
  const SparseMatrix A0 = Complex((1.0 / tau) * (1.0 / beta + 1.0)) * Tm;
  const SparseMatrix A1 = Complex((1.0 / tau) * (1.0 / beta - 1.0)) * Tm;

  SparseMatrix B(n, 1);
  B.insert(0, 0) = 1.0;
  B.insert(1, 0) = 1.0;
  SparseMatrix C = SparseMatrix(B.transpose());

  MatrixFactor d({{{1, 0.0}, E}, {{0, 0.0}, SparseMatrix(-A0)}, {{0, tau}, SparseMatrix(-A1)}},
                 "D_factor");
  return StructuredTF(MatrixFactor({{{0, 0.0}, C}}, "C_factor"), std::move(d),
                      MatrixFactor({{{0, 0.0}, B}}, "B_factor"));
}

StructuredTF make_descriptor(const DenseMatrix &E, const DenseMatrix &A, const DenseMatrix &B,
                             const DenseMatrix &C)
{
  auto sp = [](const DenseMatrix &M) { return SparseMatrix(M.sparseView()); };
  return StructuredTF(MatrixFactor({{{0, 0.0}, sp(C)}}, "C_factor"),
                      MatrixFactor({{{1, 0.0}, sp(E)}, {{0, 0.0}, sp(-A)}}, "D_factor"),
                      MatrixFactor({{{0, 0.0}, sp(B)}}, "B_factor"));
}

RunConfig delay_run_config()
{
  RunConfig cfg;
  cfg.r0 = 10;
  cfg.omega_max = 50.0;
  cfg.inner.omega_lo = 0.0;
  cfg.inner.omega_hi = 50.0;
  cfg.inner.curvature_bound = -100.0;
  cfg.inner.support_tol = 1.0e-12;
  cfg.inner.max_inner_iters = 20000;
  return cfg;
}

}  // namespace linf
