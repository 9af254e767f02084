#include <cctype>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "fracres/error.hpp"
#include "fracres/linop.hpp"

namespace fracres::linop {

cplx parse_complex(const std::string& token) {
  const char* s = token.c_str();
  char* end = nullptr;
  const double a = std::strtod(s, &end);
  require(end != s, ErrorKind::io, "bad matrix entry '" + token + "'");
  if (*end == '\0') return {a, 0.0};
  if (*end == 'i' && end[1] == '\0') return {0.0, a};
  const char* rest = end;
  require(*rest == '+' || *rest == '-', ErrorKind::io, "bad matrix entry '" + token + "'");
  double b = 0.0;
  if ((rest[1] == 'i') && rest[2] == '\0') {
    b = *rest == '-' ? -1.0 : 1.0;
  } else {
    b = std::strtod(rest, &end);
    require(end != rest && *end == 'i' && end[1] == '\0', ErrorKind::io, "bad matrix entry '" + token + "'");
  }
  return {a, b};
}

MatrixOperator read_matrix(std::istream& in) {
  std::string line;
  auto next_line = [&]() -> bool {
    while (std::getline(in, line)) {
      const auto p = line.find_first_not_of(" \t\r");
      if (p == std::string::npos || line[p] == '#') continue;
      return true;
    }
    return false;
  };
  require(next_line(), ErrorKind::io, "matrix file is empty");
  std::istringstream head(line);
  long dim = 0;
  require(static_cast<bool>(head >> dim) && dim > 0, ErrorKind::io, "first line must hold a positive dimension");
  Matrix M(dim, dim);
  for (long i = 0; i < dim; ++i) {
    require(next_line(), ErrorKind::io, "matrix file ends before row " + std::to_string(i));
    std::istringstream row(line);
    std::string tok;
    long j = 0;
    while (row >> tok) {
      require(j < dim, ErrorKind::io, "too many entries in row " + std::to_string(i));
      M(i, j++) = parse_complex(tok);
    }
    require(j == dim, ErrorKind::io, "too few entries in row " + std::to_string(i));
  }
  return MatrixOperator(std::move(M));
}

MatrixOperator read_matrix_file(const std::string& path) {
  std::ifstream f(path);
  require(f.good(), ErrorKind::io, "cannot open " + path);
  return read_matrix(f);
}

}  // namespace fracres::linop
