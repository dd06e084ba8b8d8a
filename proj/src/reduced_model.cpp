// SPDX-License-Identifier: Apache-2.0

#include "linf/reduced_model.hpp"

#include <Eigen/SVD>

namespace linf
{

ReducedModel::ReducedModel(DenseFactor c, DenseFactor d, DenseFactor b,
                           std::vector<double> points, bool parent_is_real)
  : c_(std::move(c)), d_(std::move(d)), b_(std::move(b)), points_(std::move(points)),
    parent_is_real_(parent_is_real)
{
  if (d_.rows() != d_.cols())
  {
    throw DimensionMismatch("D_factor", "reduced middle factor must be square");
  }
  if (b_.rows() != d_.rows())
  {
    throw DimensionMismatch("B_factor", "reduced B row count differs from reduced order");
  }
  if (c_.cols() != d_.rows())
  {
    throw DimensionMismatch("C_factor", "reduced C column count differs from reduced order");
  }
}

bool ReducedModel::is_real() const
{
  return c_.is_real() && d_.is_real() && b_.is_real();
}

DenseMatrix ReducedModel::eval(Complex s) const
{
  const auto lu = factorize(d_.eval(s), s);
  return c_.eval(s) * lu->solve(b_.eval(s));
}

DenseMatrix ReducedModel::eval_derivative(Complex s) const
{
  return eval_with_derivative(s).second;
}

std::pair<DenseMatrix, DenseMatrix> ReducedModel::eval_with_derivative(Complex s) const
{
  const auto lu = factorize(d_.eval(s), s);
  const DenseMatrix C = c_.eval(s);
  const DenseMatrix X = lu->solve(b_.eval(s));
  const DenseMatrix Y = lu->solve_adjoint(C.adjoint());
  DenseMatrix dH = c_.eval_derivative(s) * X - Y.adjoint() * (d_.eval_derivative(s) * X) +
                   Y.adjoint() * b_.eval_derivative(s);
  return {C * X, std::move(dH)};
}

ReducedModel project(const StructuredTF &tf, const DenseMatrix &V, const DenseMatrix &W,
                     std::vector<double> points)
{
  if (V.cols() != W.cols())
  {
    throw DimensionMismatch("projection", "V has " + std::to_string(V.cols()) +
                                              " columns but W has " +
                                              std::to_string(W.cols()));
  }
  if (V.rows() != tf.n() || W.rows() != tf.n())
  {
    throw DimensionMismatch("projection", "bases must have n = " + std::to_string(tf.n()) +
                                              " rows");
  }
  const DenseMatrix Wh = W.adjoint();

  std::vector<DenseFactor::Term> c_terms, d_terms, b_terms;
  for (const auto &t : tf.c_factor().terms())
  {
    c_terms.push_back({t.scalar, t.coeff * V});
  }
  for (const auto &t : tf.d_factor().terms())
  {
    d_terms.push_back({t.scalar, Wh * (t.coeff * V)});
  }
  for (const auto &t : tf.b_factor().terms())
  {
    b_terms.push_back({t.scalar, Wh * t.coeff});
  }
  return ReducedModel(DenseFactor(std::move(c_terms), "C_factor"),
                      DenseFactor(std::move(d_terms), "D_factor"),
                      DenseFactor(std::move(b_terms), "B_factor"), std::move(points),
                      tf.is_real());
}

SingularTriple dominant_triple(const DenseMatrix &H)
{
  Eigen::JacobiSVD<DenseMatrix> svd(H, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto &s = svd.singularValues();
  SingularTriple t;
  t.sigma = s.size() > 0 ? s(0) : 0.0;
  t.second = s.size() > 1 ? s(1) : 0.0;
  t.simple = (t.sigma - t.second) > kSimpleGap * t.sigma;
  t.right = svd.matrixV().col(0);
  t.left = svd.matrixU().col(0);

  // Fix the phase so that the first non-negligible entry of v is real and positive.
  for (Index i = 0; i < t.right.size(); i++)
  {
    const double a = std::abs(t.right(i));
    if (a > 1.0e-12)
    {
      const Complex phase = std::conj(t.right(i)) / a;
      t.right *= phase;
      t.left *= phase;
      break;
    }
  }
  return t;
}

double singular_value_slope(const SingularTriple &t, const DenseMatrix &dH)
{
  return (t.left.adjoint() * dH * t.right)(0).real();
}

namespace
{

template <typename Model>
SigmaDerivative sigma_slope(const Model &model, double omega)
{
  const Complex s(0.0, omega);
  const SingularTriple t = dominant_triple(model.eval(s));
  const DenseMatrix dH = Complex(0.0, 1.0) * model.eval_derivative(s);
  return {singular_value_slope(t, dH), !t.simple};
}

struct FullModelView
{
  const StructuredTF &tf;
  DenseMatrix eval(Complex s) const { return tf.eval_H(s); }
  DenseMatrix eval_derivative(Complex s) const { return tf.eval_H_derivative(s); }
};

}  // namespace

SingularTriple sigma_max(const ReducedModel &rm, double omega)
{
  return dominant_triple(rm.eval(Complex(0.0, omega)));
}

SingularTriple sigma_max(const StructuredTF &tf, double omega)
{
  return dominant_triple(tf.eval_H(Complex(0.0, omega)));
}

SigmaDerivative sigma_max_derivative(const ReducedModel &rm, double omega)
{
  return sigma_slope(rm, omega);
}

SigmaDerivative sigma_max_derivative(const StructuredTF &tf, double omega)
{
  return sigma_slope(FullModelView{tf}, omega);
}

ModelClass classify(const ReducedModel &rm)
{
  for (const auto *f : {&rm.b_factor(), &rm.c_factor()})
  {
    for (const auto &t : f->terms())
    {
      if (!t.scalar.is_constant())
      {
        return ModelClass::General;
      }
    }
  }
  bool has_linear = false, has_constant = false;
  for (const auto &t : rm.d_factor().terms())
  {
    if (t.scalar.is_constant())
    {
      has_constant = true;
    }
    else if (t.scalar == ScalarTerm{1, 0.0})
    {
      has_linear = true;
    }
    else
    {
      return ModelClass::General;
    }
  }
  return (has_linear && has_constant) ? ModelClass::Rational : ModelClass::General;
}

DescriptorRealization descriptor_realization(const ReducedModel &rm)
{
  if (classify(rm) != ModelClass::Rational)
  {
    throw InvalidConfig("model is not of the form C (sE - A)^{-1} B");
  }
  const Index r = rm.dim();
  DescriptorRealization d{DenseMatrix::Zero(r, r), DenseMatrix::Zero(r, r),
                          DenseMatrix::Zero(r, rm.m()), DenseMatrix::Zero(rm.p(), r)};
  for (const auto &t : rm.d_factor().terms())
  {
    if (t.scalar.degree == 1)
    {
      d.E += t.coeff;
    }
    else
    {
      d.A -= t.coeff;
    }
  }
  for (const auto &t : rm.b_factor().terms())
  {
    d.B += t.coeff;
  }
  for (const auto &t : rm.c_factor().terms())
  {
    d.C += t.coeff;
  }
  return d;
}

}  // namespace linf
