// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <memory>
#include <vector>

#include "linf/errors.hpp"
#include "linf/types.hpp"

namespace linf
{

// Scalar basis function s^k e^{-tau s}. Closed under differentiation, and covers constant,
// descriptor (k = 1), higher-order (k >= 2) and delay (tau > 0) terms.
struct ScalarTerm
{
  int degree = 0;
  double delay = 0.0;

  bool is_constant() const { return degree == 0 && delay == 0.0; }
  bool operator==(const ScalarTerm &) const = default;
};

Complex eval_term(const ScalarTerm &t, Complex s);
Complex eval_term_derivative(const ScalarTerm &t, Complex s);

// Sum of scalar terms times constant coefficient matrices, f_1(s) M_1 + ... + f_k(s) M_k.
template <typename Matrix>
class BasicFactor
{
public:
  struct Term
  {
    ScalarTerm scalar;
    Matrix coeff;
  };

  BasicFactor() = default;
  // Throws DimensionMismatch (tagged with `name`) if the list is empty or the coefficient
  // shapes disagree, and InvalidConfig for negative degree or delay.
  BasicFactor(std::vector<Term> terms, const std::string &name = "factor");

  Index rows() const { return rows_; }
  Index cols() const { return cols_; }
  const std::vector<Term> &terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }

  // True when every coefficient has zero imaginary part.
  bool is_real() const;

  Matrix eval(Complex s) const;
  Matrix eval_derivative(Complex s) const;

private:
  std::vector<Term> terms_;
  Index rows_ = 0, cols_ = 0;
};

using MatrixFactor = BasicFactor<SparseMatrix>;
using DenseFactor = BasicFactor<DenseMatrix>;

template <typename Matrix>
Matrix eval_factor(const BasicFactor<Matrix> &f, Complex s)
{
  return f.eval(s);
}

template <typename Matrix>
Matrix eval_factor_derivative(const BasicFactor<Matrix> &f, Complex s)
{
  return f.eval_derivative(s);
}

namespace detail
{
class FactorizationCache;
}

// LU factorization of D(s) at one shift. Serves both D(s)^{-1} and D(s)^{-*} solves.
class ShiftFactorization
{
public:
  virtual ~ShiftFactorization() = default;

  virtual DenseMatrix solve(const DenseMatrix &rhs) const = 0;
  virtual DenseMatrix solve_adjoint(const DenseMatrix &rhs) const = 0;
  // Estimated reciprocal 1-norm condition number.
  virtual double rcond() const = 0;
};

// Factorizations with rcond below this are rejected with SingularShift.
inline constexpr double kSingularRcond = 1.0e-14;

// Problems up to this order are factorized densely.
inline constexpr Index kDenseThreshold = 200;

// Factorizes an assembled matrix; throws SingularShift(shift) when it is singular or
// rcond < kSingularRcond.
std::unique_ptr<ShiftFactorization> factorize(const SparseMatrix &A, Complex shift);
std::unique_ptr<ShiftFactorization> factorize(const DenseMatrix &A, Complex shift);

// H(s) = C(s) D(s)^{-1} B(s) with C: p x n, D: n x n, B: n x m.
//
// The object is immutable apart from a small internally synchronized LRU cache of LU
// factorizations keyed by the bit pattern of the shift, so concurrent evaluation is safe.
class StructuredTF
{
public:
  StructuredTF(MatrixFactor c, MatrixFactor d, MatrixFactor b);

  Index n() const { return d_.rows(); }
  Index m() const { return b_.cols(); }
  Index p() const { return c_.rows(); }
  bool is_real() const { return is_real_; }

  const MatrixFactor &c_factor() const { return c_; }
  const MatrixFactor &d_factor() const { return d_; }
  const MatrixFactor &b_factor() const { return b_; }

  // Returns the (possibly cached) factorization of D(s).
  std::shared_ptr<const ShiftFactorization> factorization(Complex s) const;

  DenseMatrix solve_D(Complex s, const DenseMatrix &rhs) const;
  DenseMatrix solve_D_adjoint(Complex s, const DenseMatrix &rhs) const;

  DenseMatrix eval_H(Complex s) const;
  // C'D^{-1}B - C D^{-1} D' D^{-1} B + C D^{-1} B', primes are d/ds.
  DenseMatrix eval_H_derivative(Complex s) const;

  // Number of factorizations computed so far (cache misses).
  std::size_t factorization_count() const;

private:
  MatrixFactor c_, d_, b_;
  bool is_real_ = false;
  std::shared_ptr<detail::FactorizationCache> cache_;
};

inline DenseMatrix solve_D(const StructuredTF &tf, Complex s, const DenseMatrix &rhs)
{
  return tf.solve_D(s, rhs);
}

inline DenseMatrix solve_D_adjoint(const StructuredTF &tf, Complex s, const DenseMatrix &rhs)
{
  return tf.solve_D_adjoint(s, rhs);
}

inline DenseMatrix eval_H(const StructuredTF &tf, Complex s)
{
  return tf.eval_H(s);
}

inline DenseMatrix eval_H_derivative(const StructuredTF &tf, Complex s)
{
  return tf.eval_H_derivative(s);
}

}  // namespace linf
