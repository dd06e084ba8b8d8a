// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <filesystem>
#include <stdexcept>
#include <string>

#include "linf/types.hpp"

namespace linf
{

class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

// D(s) is numerically singular at the requested shift (s is, or is close to, a pole).
class SingularShift : public Error
{
public:
  SingularShift(Complex shift, double rcond);

  Complex shift() const { return shift_; }
  double rcond() const { return rcond_; }

private:
  Complex shift_;
  double rcond_;
};

class DimensionMismatch : public Error
{
public:
  DimensionMismatch(std::string factor, const std::string &detail);

  const std::string &factor() const { return factor_; }

private:
  std::string factor_;
};

class ParseError : public Error
{
public:
  ParseError(std::filesystem::path file, std::size_t line, const std::string &message);

  const std::filesystem::path &file() const { return file_; }
  std::size_t line() const { return line_; }

private:
  std::filesystem::path file_;
  std::size_t line_;
};

class InvalidConfig : public Error
{
public:
  using Error::Error;
};

class NoConvergence : public Error
{
public:
  using Error::Error;
};

class PencilSingular : public Error
{
public:
  using Error::Error;
};

// The reduced function has a pole on the imaginary axis at (or near) omega.
class UnboundedOnAxis : public Error
{
public:
  explicit UnboundedOnAxis(double omega);

  double omega() const { return omega_; }

private:
  double omega_;
};

// An evaluated sample exceeded the quadratic-support upper bound, so the curvature bound
// supplied by the caller does not hold.
class InvalidBound : public Error
{
public:
  InvalidBound(double omega, double sigma, double bound);

  double omega() const { return omega_; }
  double sigma() const { return sigma_; }
  double bound() const { return bound_; }

private:
  double omega_, sigma_, bound_;
};

class AllShiftsSingular : public Error
{
public:
  using Error::Error;
};

}  // namespace linf
