#pragma once

#include <string>
#include <vector>

#include "l2est/ustat.hpp"

namespace l2est {

struct InputFormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

//! Lossless double formatting (17 significant digits).
std::string format_double(double v);

//! Plain numeric CSV, one observation per row, d columns, optional header
//! row. Ragged rows and non-numeric cells raise InputFormatError naming the
//! row and column.
PointMatrix read_csv(const std::string& path, bool header = false);
void write_csv(const std::string& path, const PointMatrix& pm);

//! Binary column-major float64 container for large runs:
//!   8-byte magic "L2BF0001", uint64 rows, uint64 cols (little-endian),
//!   then rows*cols doubles, column-major.
PointMatrix read_bin(const std::string& path);
void write_bin(const std::string& path, const PointMatrix& pm);

//! Dispatch on extension: ".bin"/".f64" binary, anything else CSV.
PointMatrix read_points(const std::string& path, bool header = false);

}  // namespace l2est
