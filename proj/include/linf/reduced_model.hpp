// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <utility>
#include <vector>

#include "linf/structured_function.hpp"

namespace linf
{

// H~(s) = C~(s) D~(s)^{-1} B~(s) with C~_j = C_j V, D~_j = W^* D_j V, B~_j = W^* B_j.
class ReducedModel
{
public:
  ReducedModel(DenseFactor c, DenseFactor d, DenseFactor b, std::vector<double> points = {},
               bool parent_is_real = false);

  Index dim() const { return d_.rows(); }
  Index m() const { return b_.cols(); }
  Index p() const { return c_.rows(); }

  const DenseFactor &c_factor() const { return c_; }
  const DenseFactor &d_factor() const { return d_; }
  const DenseFactor &b_factor() const { return b_; }

  // Interpolation frequencies the projection bases were built from.
  const std::vector<double> &points() const { return points_; }
  bool parent_is_real() const { return parent_is_real_; }
  // All reduced coefficients are real (e.g. real bases of a real parent).
  bool is_real() const;

  DenseMatrix eval(Complex s) const;
  DenseMatrix eval_derivative(Complex s) const;
  // H~(s) and H~'(s) from a single factorization.
  std::pair<DenseMatrix, DenseMatrix> eval_with_derivative(Complex s) const;

private:
  DenseFactor c_, d_, b_;
  std::vector<double> points_;
  bool parent_is_real_ = false;
};

// Throws DimensionMismatch if V and W differ in shape or do not have n rows.
ReducedModel project(const StructuredTF &tf, const DenseMatrix &V, const DenseMatrix &W,
                     std::vector<double> points = {});

// Relative gap sigma_1 - sigma_2 <= kSimpleGap * sigma_1 marks a non-simple top singular value.
inline constexpr double kSimpleGap = 1.0e-8;

struct SingularTriple
{
  double sigma = 0.0;
  double second = 0.0;  // sigma_2, or 0 when min(m, p) = 1
  DenseVector right;    // v, unit m-vector, first nonzero entry real positive
  DenseVector left;     // w, unit p-vector, H v = sigma w
  bool simple = true;
};

// Dominant singular triple of a dense matrix via a full SVD.
SingularTriple dominant_triple(const DenseMatrix &H);

// Re(w^* dH v): derivative of the largest singular value along dH.
double singular_value_slope(const SingularTriple &t, const DenseMatrix &dH);

struct SigmaDerivative
{
  double value = 0.0;
  bool non_simple = false;
};

SingularTriple sigma_max(const ReducedModel &rm, double omega);
SingularTriple sigma_max(const StructuredTF &tf, double omega);

// d/domega sigma(H(i omega)) = Re(w^* i H'(i omega) v).
SigmaDerivative sigma_max_derivative(const ReducedModel &rm, double omega);
SigmaDerivative sigma_max_derivative(const StructuredTF &tf, double omega);

inline DenseMatrix eval_reduced(const ReducedModel &rm, Complex s)
{
  return rm.eval(s);
}

enum class ModelClass
{
  Rational,
  General
};

// Rational iff B~, C~ are constant and D~ uses only the terms s and 1, so
// H~(s) = C~ (s E~ - A~)^{-1} B~.
ModelClass classify(const ReducedModel &rm);

// Descriptor realization of a Rational model; throws InvalidConfig otherwise.
struct DescriptorRealization
{
  DenseMatrix E, A, B, C;
};

DescriptorRealization descriptor_realization(const ReducedModel &rm);

}  // namespace linf
