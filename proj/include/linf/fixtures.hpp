// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "linf/greedy_engine.hpp"

namespace linf
{

// Tridiagonal matrix of ones on the sub- and superdiagonal plus ones at (1,1) and (n,n).
SparseMatrix delay_T(Index n);

// H(s) = C (sE - A0 - e^{-tau s} A1)^{-1} B with E = theta I + T,
// A0 = (1/tau)(1/beta + 1)(T - theta I), A1 = (1/tau)(1/beta - 1)(T - theta I),
// B = e1 + e2 and C = B^T. Throws InvalidConfig for n < 2, tau <= 0 or beta == 0.
StructuredTF make_delay_fixture(Index n, double tau = 1.0, double beta = 0.01,
                                double theta = 5.0);

// Descriptor system C (sE - A)^{-1} B from dense data.
StructuredTF make_descriptor(const DenseMatrix &E, const DenseMatrix &A, const DenseMatrix &B,
                             const DenseMatrix &C);

// Run settings for the delay fixture: 10 initial points and search interval [0, 50],
// curvature bound -100. The support tolerance is tightened to 1e-12 because the peak is
// sharp (sigma'' near -1.5e3) and omega is only resolved to about sqrt(tol / |sigma''|).
RunConfig delay_run_config();

}  // namespace linf
