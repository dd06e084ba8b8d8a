// SPDX-License-Identifier: Apache-2.0

#include "linf/matrix_market.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include "linf/errors.hpp"

namespace linf
{

namespace
{

enum class Field
{
  Real,
  Complex,
  Integer,
  Pattern
};

enum class Symmetry
{
  General,
  Symmetric,
  Skew,
  Hermitian
};

std::string lower(std::string s)
{
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

struct Reader
{
  std::istream &in;
  const std::filesystem::path &name;
  std::size_t line_no = 0;

  [[noreturn]] void fail(const std::string &msg) const { throw ParseError(name, line_no, msg); }

  // Next non-comment, non-blank line; false at end of input.
  bool next(std::string &line)
  {
    while (std::getline(in, line))
    {
      line_no++;
      const auto pos = line.find_first_not_of(" \t\r");
      if (pos == std::string::npos || line[pos] == '%')
      {
        continue;
      }
      return true;
    }
    return false;
  }
};

Complex read_value(std::istringstream &ss, Field field, const Reader &r)
{
  double re = 1.0, im = 0.0;
  switch (field)
  {
    case Field::Pattern:
      break;
    case Field::Integer:
    {
      long long v;
      if (!(ss >> v))
      {
        r.fail("expected an integer value");
      }
      re = static_cast<double>(v);
      break;
    }
    case Field::Real:
      if (!(ss >> re))
      {
        r.fail("expected a real value");
      }
      break;
    case Field::Complex:
      if (!(ss >> re >> im))
      {
        r.fail("expected real and imaginary parts");
      }
      break;
  }
  std::string rest;
  if (ss >> rest)
  {
    r.fail("trailing data '" + rest + "'");
  }
  return {re, im};
}

}  // namespace

SparseMatrix read_matrix_market(std::istream &in, const std::filesystem::path &name)
{
  Reader r{in, name};
  std::string line;
  if (!std::getline(in, line))
  {
    throw ParseError(name, 1, "empty file");
  }
  r.line_no = 1;
  std::istringstream hs(line);
  std::string banner, object, format, field_s, sym_s;
  hs >> banner >> object >> format >> field_s >> sym_s;
  if (banner != "%%MatrixMarket" || lower(object) != "matrix")
  {
    r.fail("missing '%%MatrixMarket matrix' header");
  }
  format = lower(format);
  field_s = lower(field_s);
  sym_s = lower(sym_s);

  Field field;
  if (field_s == "real" || field_s == "double")
    field = Field::Real;
  else if (field_s == "complex")
    field = Field::Complex;
  else if (field_s == "integer")
    field = Field::Integer;
  else if (field_s == "pattern")
    field = Field::Pattern;
  else
    r.fail("unsupported field '" + field_s + "'");

  Symmetry sym;
  if (sym_s == "general")
    sym = Symmetry::General;
  else if (sym_s == "symmetric")
    sym = Symmetry::Symmetric;
  else if (sym_s == "skew-symmetric")
    sym = Symmetry::Skew;
  else if (sym_s == "hermitian")
    sym = Symmetry::Hermitian;
  else
    r.fail("unsupported symmetry '" + sym_s + "'");

  const bool coordinate = format == "coordinate";
  if (!coordinate && format != "array")
  {
    r.fail("unsupported format '" + format + "'");
  }
  if (!coordinate && field == Field::Pattern)
  {
    r.fail("pattern field requires coordinate format");
  }
  if (sym == Symmetry::Hermitian && field != Field::Complex)
  {
    r.fail("hermitian storage requires a complex field");
  }

  if (!r.next(line))
  {
    r.fail("missing size line");
  }
  long long rows = 0, cols = 0, nnz = 0;
  {
    std::istringstream ss(line);
    if (!(ss >> rows >> cols) || (coordinate && !(ss >> nnz)) || rows < 0 || cols < 0 ||
        nnz < 0)
    {
      r.fail("malformed size line");
    }
  }
  if (sym != Symmetry::General && rows != cols)
  {
    r.fail("symmetric storage requires a square matrix");
  }

  std::vector<Eigen::Triplet<Complex>> trips;
  auto add = [&](long long i, long long j, Complex v)
  {
    trips.emplace_back(i, j, v);
    if (i == j)
    {
      return;
    }
    switch (sym)
    {
      case Symmetry::General:
        break;
      case Symmetry::Symmetric:
        trips.emplace_back(j, i, v);
        break;
      case Symmetry::Skew:
        trips.emplace_back(j, i, -v);
        break;
      case Symmetry::Hermitian:
        trips.emplace_back(j, i, std::conj(v));
        break;
    }
  };

  if (coordinate)
  {
    trips.reserve(static_cast<std::size_t>(sym == Symmetry::General ? nnz : 2 * nnz));
    for (long long e = 0; e < nnz; e++)
    {
      if (!r.next(line))
      {
        r.fail("expected " + std::to_string(nnz) + " entries, found " + std::to_string(e));
      }
      std::istringstream ss(line);
      long long i, j;
      if (!(ss >> i >> j))
      {
        r.fail("malformed entry indices");
      }
      if (i < 1 || i > rows || j < 1 || j > cols)
      {
        r.fail("entry index out of range");
      }
      if (sym != Symmetry::General && i < j)
      {
        r.fail("entry above the diagonal in symmetric storage");
      }
      if (sym == Symmetry::Skew && i == j)
      {
        r.fail("diagonal entry in skew-symmetric storage");
      }
      add(i - 1, j - 1, read_value(ss, field, r));
    }
  }
  else
  {
    // Column-major; symmetric variants list the lower triangle only.
    for (long long j = 0; j < cols; j++)
    {
      const long long first = (sym == Symmetry::General)  ? 0
                              : (sym == Symmetry::Skew) ? j + 1
                                                          : j;
      for (long long i = first; i < rows; i++)
      {
        if (!r.next(line))
        {
          r.fail("array data ends early");
        }
        std::istringstream ss(line);
        const Complex v = read_value(ss, field, r);
        if (v != Complex(0.0))
        {
          add(i, j, v);
        }
      }
    }
  }
  if (r.next(line))
  {
    r.fail("unexpected data after the last entry");
  }

  SparseMatrix A(rows, cols);
  A.setFromTriplets(trips.begin(), trips.end());
  A.makeCompressed();
  return A;
}

SparseMatrix read_matrix_market(const std::filesystem::path &path)
{
  std::ifstream in(path);
  if (!in)
  {
    throw ParseError(path, 0, "cannot open file");
  }
  return read_matrix_market(in, path);
}

void write_matrix_market(const SparseMatrix &A, std::ostream &out)
{
  bool real = true;
  for (Index k = 0; k < A.outerSize(); k++)
  {
    for (SparseMatrix::InnerIterator it(A, k); it; ++it)
    {
      real = real && it.value().imag() == 0.0;
    }
  }
  out << "%%MatrixMarket matrix coordinate " << (real ? "real" : "complex") << " general\n";
  out << A.rows() << ' ' << A.cols() << ' ' << A.nonZeros() << '\n';
  out << std::setprecision(17);
  for (Index k = 0; k < A.outerSize(); k++)
  {
    for (SparseMatrix::InnerIterator it(A, k); it; ++it)
    {
      out << it.row() + 1 << ' ' << it.col() + 1 << ' ' << it.value().real();
      if (!real)
      {
        out << ' ' << it.value().imag();
      }
      out << '\n';
    }
  }
}

void write_matrix_market(const SparseMatrix &A, const std::filesystem::path &path)
{
  std::ofstream out(path);
  if (!out)
  {
    throw Error("cannot open " + path.string() + " for writing");
  }
  write_matrix_market(A, out);
  if (!out)
  {
    throw Error("write to " + path.string() + " failed");
  }
}

}  // namespace linf
