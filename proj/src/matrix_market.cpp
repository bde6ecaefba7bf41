#include "speclab/matrix_market.hpp"

#include <fstream>
#include <sstream>

namespace speclab {

std::string matrix_market_string(const ComplexMatrix& a) {
  std::ostringstream os;
  os << "%%MatrixMarket matrix array complex general\n";
  os << a.rows() << " " << a.cols() << "\n";
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      os << format_double(a(i, j).real()) << " " << format_double(a(i, j).imag()) << "\n";
    }
  }
  return os.str();
}

void write_matrix_market(const std::string& path, const ComplexMatrix& a) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("write_matrix_market: cannot open " + path);
  out << matrix_market_string(a);
}

ComplexMatrix read_matrix_market(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("read_matrix_market: cannot open " + path);
  std::string line;
  if (!std::getline(in, line) || line.rfind("%%MatrixMarket", 0) != 0) {
    throw std::runtime_error("read_matrix_market: missing MatrixMarket header in " + path);
  }
  {
    std::istringstream hs(line);
    std::string tag, object, fmt, field, symmetry;
    hs >> tag >> object >> fmt >> field >> symmetry;
    if (fmt != "array" || field != "complex" || symmetry != "general") {
      throw std::runtime_error("read_matrix_market: unsupported header '" + line + "'");
    }
  }
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] != '%') break;
  }
  std::istringstream dims(line);
  Eigen::Index rows = 0, cols = 0;
  dims >> rows >> cols;
  if (rows < 1 || cols < 1) throw std::runtime_error("read_matrix_market: bad dimensions in " + path);
  ComplexMatrix a(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) {
      double re = 0.0, im = 0.0;
      if (!(in >> re >> im)) throw std::runtime_error("read_matrix_market: truncated data in " + path);
      a(i, j) = Complex(re, im);
    }
  }
  return a;
}

}  // namespace speclab
