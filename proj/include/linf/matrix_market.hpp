// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <istream>
#include <ostream>

#include "linf/types.hpp"

namespace linf
{

// Reads coordinate or array Matrix Market data with real, complex, integer or pattern
// fields and general, symmetric, skew-symmetric or hermitian storage. Duplicate coordinate
// entries are summed. Throws ParseError carrying the file name and 1-based line number.
SparseMatrix read_matrix_market(const std::filesystem::path &path);
SparseMatrix read_matrix_market(std::istream &in, const std::filesystem::path &name = "<stream>");

// Writes coordinate/general; the field is `real` when every entry has zero imaginary part.
void write_matrix_market(const SparseMatrix &A, std::ostream &out);
void write_matrix_market(const SparseMatrix &A, const std::filesystem::path &path);

}  // namespace linf
