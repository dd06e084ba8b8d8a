// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

namespace linf
{

using Complex = std::complex<double>;
using Index = Eigen::Index;
using DenseMatrix = Eigen::MatrixXcd;
using DenseVector = Eigen::VectorXcd;
// Compressed-column storage.
using SparseMatrix = Eigen::SparseMatrix<Complex, Eigen::ColMajor>;

}  // namespace linf
