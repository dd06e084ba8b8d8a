// SPDX-License-Identifier: Apache-2.0

#include "linf/structured_function.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <list>
#include <mutex>
#include <utility>

#include <Eigen/LU>
#include <Eigen/SparseLU>

namespace linf
{

namespace
{

Complex integer_power(Complex s, int k)
{
  Complex r(1.0, 0.0);
  for (int i = 0; i < k; i++)
  {
    r *= s;
  }
  return r;
}

Complex delay_factor(double tau, Complex s)
{
  return tau == 0.0 ? Complex(1.0, 0.0) : std::exp(-tau * s);
}

template <typename Matrix>
Matrix zero_like(Index rows, Index cols)
{
  if constexpr (std::is_same_v<Matrix, DenseMatrix>)
  {
    return DenseMatrix::Zero(rows, cols);
  }
  else
  {
    return Matrix(rows, cols);
  }
}

bool matrix_is_real(const DenseMatrix &M)
{
  return (M.imag().array() == 0.0).all();
}

bool matrix_is_real(const SparseMatrix &M)
{
  for (Index k = 0; k < M.outerSize(); k++)
  {
    for (SparseMatrix::InnerIterator it(M, k); it; ++it)
    {
      if (it.value().imag() != 0.0)
      {
        return false;
      }
    }
  }
  return true;
}

double norm1(const SparseMatrix &A)
{
  double best = 0.0;
  for (Index k = 0; k < A.outerSize(); k++)
  {
    double col = 0.0;
    for (SparseMatrix::InnerIterator it(A, k); it; ++it)
    {
      col += std::abs(it.value());
    }
    best = std::max(best, col);
  }
  return best;
}

// Hager/Higham estimate of ||A^{-1}||_1 from solves with A and A^*.
template <typename Solve, typename AdjointSolve>
double estimate_inverse_norm1(Index n, Solve &&solve, AdjointSolve &&solve_adjoint)
{
  DenseVector x = DenseVector::Constant(n, Complex(1.0 / static_cast<double>(n), 0.0));
  double est = 0.0;
  Index last_j = -1;
  for (int iter = 0; iter < 5; iter++)
  {
    DenseVector y = solve(x);
    const double y_norm = y.cwiseAbs().sum();
    if (iter > 0 && y_norm <= est)
    {
      break;
    }
    est = y_norm;
    DenseVector xi(n);
    for (Index i = 0; i < n; i++)
    {
      const double a = std::abs(y(i));
      xi(i) = a > 0.0 ? y(i) / a : Complex(1.0, 0.0);
    }
    DenseVector z = solve_adjoint(xi);
    Index j = 0;
    z.cwiseAbs().maxCoeff(&j);
    if (iter > 0 && (j == last_j || std::abs(z(j)) <= (z.adjoint() * x)(0).real()))
    {
      break;
    }
    last_j = j;
    x.setZero();
    x(j) = 1.0;
  }

  // Alternating-sign test vector guards against the estimator being fooled.
  DenseVector b(n);
  for (Index i = 0; i < n; i++)
  {
    const double sign = (i % 2 == 0) ? 1.0 : -1.0;
    b(i) = sign * (1.0 + (n > 1 ? static_cast<double>(i) / static_cast<double>(n - 1) : 0.0));
  }
  const double alt = 2.0 * solve(b).cwiseAbs().sum() / (3.0 * static_cast<double>(n));
  return std::max(est, alt);
}

class DenseShiftFactorization final : public ShiftFactorization
{
public:
  explicit DenseShiftFactorization(const DenseMatrix &A) : lu_(A), rcond_(lu_.rcond()) {}

  DenseMatrix solve(const DenseMatrix &rhs) const override { return lu_.solve(rhs); }
  DenseMatrix solve_adjoint(const DenseMatrix &rhs) const override
  {
    return lu_.adjoint().solve(rhs);
  }
  double rcond() const override { return rcond_; }

private:
  Eigen::PartialPivLU<DenseMatrix> lu_;
  double rcond_;
};

class SparseShiftFactorization final : public ShiftFactorization
{
public:
  using Solver = Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>>;

  SparseShiftFactorization(const SparseMatrix &A, Complex shift)
  {
    lu_.analyzePattern(A);
    lu_.factorize(A);
    if (lu_.info() != Eigen::Success)
    {
      throw SingularShift(shift, 0.0);
    }
    const double a_norm = norm1(A);
    const double inv_norm = estimate_inverse_norm1(
        A.rows(), [this](const DenseVector &v) -> DenseVector { return lu_.solve(v); },
        [this](const DenseVector &v) -> DenseVector { return lu_.adjoint().solve(v); });
    rcond_ = (a_norm > 0.0 && std::isfinite(inv_norm) && inv_norm > 0.0)
                 ? 1.0 / (a_norm * inv_norm)
                 : 0.0;
  }

  DenseMatrix solve(const DenseMatrix &rhs) const override { return lu_.solve(rhs); }
  DenseMatrix solve_adjoint(const DenseMatrix &rhs) const override
  {
    // SparseLU's adjoint view is not const-qualified.
    return const_cast<Solver &>(lu_).adjoint().solve(rhs);
  }
  double rcond() const override { return rcond_; }

private:
  Solver lu_;
  double rcond_ = 0.0;
};

void check_rcond(const ShiftFactorization &f, Complex shift)
{
  const double rc = f.rcond();
  if (!(rc >= kSingularRcond))
  {
    throw SingularShift(shift, std::isfinite(rc) ? rc : 0.0);
  }
}

}  // namespace

Complex eval_term(const ScalarTerm &t, Complex s)
{
  return integer_power(s, t.degree) * delay_factor(t.delay, s);
}

Complex eval_term_derivative(const ScalarTerm &t, Complex s)
{
  Complex poly = -t.delay * integer_power(s, t.degree);
  if (t.degree > 0)
  {
    poly += static_cast<double>(t.degree) * integer_power(s, t.degree - 1);
  }
  return poly * delay_factor(t.delay, s);
}

template <typename Matrix>
BasicFactor<Matrix>::BasicFactor(std::vector<Term> terms, const std::string &name)
  : terms_(std::move(terms))
{
  if (terms_.empty())
  {
    throw DimensionMismatch(name, "factor has no terms");
  }
  rows_ = terms_.front().coeff.rows();
  cols_ = terms_.front().coeff.cols();
  for (const auto &t : terms_)
  {
    if (t.coeff.rows() != rows_ || t.coeff.cols() != cols_)
    {
      throw DimensionMismatch(name, "coefficient matrices have different shapes (" +
                                        std::to_string(rows_) + "x" + std::to_string(cols_) +
                                        " vs " + std::to_string(t.coeff.rows()) + "x" +
                                        std::to_string(t.coeff.cols()) + ")");
    }
    if (t.scalar.degree < 0 || !(t.scalar.delay >= 0.0))
    {
      throw InvalidConfig(name + ": scalar terms need degree >= 0 and delay >= 0");
    }
  }
}

template <typename Matrix>
bool BasicFactor<Matrix>::is_real() const
{
  for (const auto &t : terms_)
  {
    if (!matrix_is_real(t.coeff))
    {
      return false;
    }
  }
  return true;
}

template <typename Matrix>
Matrix BasicFactor<Matrix>::eval(Complex s) const
{
  Matrix result = zero_like<Matrix>(rows_, cols_);
  for (const auto &t : terms_)
  {
    result = result + eval_term(t.scalar, s) * t.coeff;
  }
  return result;
}

template <typename Matrix>
Matrix BasicFactor<Matrix>::eval_derivative(Complex s) const
{
  Matrix result = zero_like<Matrix>(rows_, cols_);
  for (const auto &t : terms_)
  {
    result = result + eval_term_derivative(t.scalar, s) * t.coeff;
  }
  return result;
}

template class BasicFactor<SparseMatrix>;
template class BasicFactor<DenseMatrix>;

std::unique_ptr<ShiftFactorization> factorize(const DenseMatrix &A, Complex shift)
{
  auto f = std::make_unique<DenseShiftFactorization>(A);
  check_rcond(*f, shift);
  return f;
}

std::unique_ptr<ShiftFactorization> factorize(const SparseMatrix &A, Complex shift)
{
  std::unique_ptr<ShiftFactorization> f;
  if (A.rows() <= kDenseThreshold)
  {
    f = std::make_unique<DenseShiftFactorization>(DenseMatrix(A));
  }
  else
  {
    f = std::make_unique<SparseShiftFactorization>(A, shift);
  }
  check_rcond(*f, shift);
  return f;
}

namespace detail
{

class FactorizationCache
{
public:
  using Key = std::pair<std::uint64_t, std::uint64_t>;

  static Key key(Complex s)
  {
    return {std::bit_cast<std::uint64_t>(s.real()), std::bit_cast<std::uint64_t>(s.imag())};
  }

  std::shared_ptr<const ShiftFactorization> find(const Key &k)
  {
    std::lock_guard lock(mutex_);
    for (auto it = entries_.begin(); it != entries_.end(); ++it)
    {
      if (it->first == k)
      {
        entries_.splice(entries_.begin(), entries_, it);
        return entries_.front().second;
      }
    }
    return nullptr;
  }

  void insert(const Key &k, std::shared_ptr<const ShiftFactorization> f)
  {
    std::lock_guard lock(mutex_);
    misses_++;
    entries_.emplace_front(k, std::move(f));
    while (entries_.size() > kCapacity)
    {
      entries_.pop_back();
    }
  }

  std::size_t misses() const
  {
    std::lock_guard lock(mutex_);
    return misses_;
  }

private:
  static constexpr std::size_t kCapacity = 8;
  mutable std::mutex mutex_;
  std::list<std::pair<Key, std::shared_ptr<const ShiftFactorization>>> entries_;
  std::size_t misses_ = 0;
};

}  // namespace detail

StructuredTF::StructuredTF(MatrixFactor c, MatrixFactor d, MatrixFactor b)
  : c_(std::move(c)), d_(std::move(d)), b_(std::move(b)),
    cache_(std::make_shared<detail::FactorizationCache>())
{
  if (d_.rows() != d_.cols())
  {
    throw DimensionMismatch("D_factor", "D must be square, got " + std::to_string(d_.rows()) +
                                            "x" + std::to_string(d_.cols()));
  }
  if (b_.rows() != d_.rows())
  {
    throw DimensionMismatch("B_factor", "B has " + std::to_string(b_.rows()) +
                                            " rows but D has order " +
                                            std::to_string(d_.rows()));
  }
  if (c_.cols() != d_.rows())
  {
    throw DimensionMismatch("C_factor", "C has " + std::to_string(c_.cols()) +
                                            " columns but D has order " +
                                            std::to_string(d_.rows()));
  }
  is_real_ = c_.is_real() && d_.is_real() && b_.is_real();
}

std::shared_ptr<const ShiftFactorization> StructuredTF::factorization(Complex s) const
{
  const auto key = detail::FactorizationCache::key(s);
  if (auto hit = cache_->find(key))
  {
    return hit;
  }
  std::shared_ptr<const ShiftFactorization> f = factorize(d_.eval(s), s);
  cache_->insert(key, f);
  return f;
}

DenseMatrix StructuredTF::solve_D(Complex s, const DenseMatrix &rhs) const
{
  if (rhs.rows() != n())
  {
    throw DimensionMismatch("rhs", "expected " + std::to_string(n()) + " rows");
  }
  return factorization(s)->solve(rhs);
}

DenseMatrix StructuredTF::solve_D_adjoint(Complex s, const DenseMatrix &rhs) const
{
  if (rhs.rows() != n())
  {
    throw DimensionMismatch("rhs", "expected " + std::to_string(n()) + " rows");
  }
  return factorization(s)->solve_adjoint(rhs);
}

DenseMatrix StructuredTF::eval_H(Complex s) const
{
  const DenseMatrix X = factorization(s)->solve(DenseMatrix(b_.eval(s)));
  return c_.eval(s) * X;
}

DenseMatrix StructuredTF::eval_H_derivative(Complex s) const
{
  const auto f = factorization(s);
  const DenseMatrix X = f->solve(DenseMatrix(b_.eval(s)));
  const DenseMatrix Y = f->solve_adjoint(DenseMatrix(c_.eval(s).adjoint()));
  const DenseMatrix dB = DenseMatrix(b_.eval_derivative(s));
  const DenseMatrix dDX = d_.eval_derivative(s) * X;
  return c_.eval_derivative(s) * X - Y.adjoint() * dDX + Y.adjoint() * dB;
}

std::size_t StructuredTF::factorization_count() const
{
  return cache_->misses();
}

}  // namespace linf
