#pragma once

#include <string>

#include "speclab/types.hpp"

namespace speclab {

/// Matrix Market dense array format, complex general, column-major.
void write_matrix_market(const std::string& path, const ComplexMatrix& a);
ComplexMatrix read_matrix_market(const std::string& path);

std::string matrix_market_string(const ComplexMatrix& a);

}  // namespace speclab
