// SPDX-License-Identifier: Apache-2.0

#include "linf/errors.hpp"

#include <sstream>

namespace linf
{

namespace
{

std::string shift_message(Complex s, double rcond)
{
  std::ostringstream os;
  os.precision(17);
  os << "D(s) is singular at s = " << s.real() << (s.imag() < 0 ? " - " : " + ")
     << std::abs(s.imag()) << "i (rcond = " << rcond << ")";
  return os.str();
}

}  // namespace

SingularShift::SingularShift(Complex shift, double rcond)
  : Error(shift_message(shift, rcond)), shift_(shift), rcond_(rcond)
{
}

DimensionMismatch::DimensionMismatch(std::string factor, const std::string &detail)
  : Error("dimension mismatch in " + factor + ": " + detail), factor_(std::move(factor))
{
}

ParseError::ParseError(std::filesystem::path file, std::size_t line, const std::string &message)
  : Error(file.string() + ":" + std::to_string(line) + ": " + message), file_(std::move(file)),
    line_(line)
{
}

UnboundedOnAxis::UnboundedOnAxis(double omega)
  : Error("reduced function is unbounded on the imaginary axis near omega = " +
          std::to_string(omega)),
    omega_(omega)
{
}

InvalidBound::InvalidBound(double omega, double sigma, double bound)
  : Error("sample sigma(" + std::to_string(omega) + ") = " + std::to_string(sigma) +
          " exceeds the quadratic-support bound " + std::to_string(bound) +
          "; the curvature bound is not valid"),
    omega_(omega), sigma_(sigma), bound_(bound)
{
}

}  // namespace linf
