#include "l2est/io.hpp"

#include <cctype>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace l2est {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

PointMatrix read_csv(const std::string& path, bool header) {
  std::ifstream in(path);
  if (!in) throw InputFormatError("cannot open input file: " + path);
  PointMatrix pm;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (header && lineno == 1) continue;
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    std::size_t col = 0;
    while (std::getline(ss, cell, ',')) {
      ++col;
      try {
        std::size_t used = 0;
        double v = std::stod(cell, &used);
        while (used < cell.size() && std::isspace(static_cast<unsigned char>(cell[used]))) ++used;
        if (used != cell.size()) throw std::invalid_argument(cell);
        row.push_back(v);
      } catch (const std::exception&) {
        throw InputFormatError("non-numeric cell at row " + std::to_string(lineno) + ", column " +
                               std::to_string(col) + ": '" + cell + "'");
      }
    }
    if (pm.d == 0) {
      pm.d = static_cast<int>(row.size());
      if (pm.d == 0) throw InputFormatError("empty first data row");
    } else if (static_cast<int>(row.size()) != pm.d) {
      throw InputFormatError("ragged row " + std::to_string(lineno) + ": expected " +
                             std::to_string(pm.d) + " columns, got " +
                             std::to_string(row.size()));
    }
    pm.data.insert(pm.data.end(), row.begin(), row.end());
    ++pm.n;
  }
  if (pm.n == 0) throw InputFormatError("no data rows in " + path);
  return pm;
}

void write_csv(const std::string& path, const PointMatrix& pm) {
  std::ofstream out(path);
  if (!out) throw InputFormatError("cannot open output file: " + path);
  for (std::size_t i = 0; i < pm.n; ++i) {
    for (int j = 0; j < pm.d; ++j) {
      if (j) out << ',';
      out << format_double(pm.row(i)[j]);
    }
    out << '\n';
  }
}

namespace {
constexpr char kMagic[8] = {'L', '2', 'B', 'F', '0', '0', '0', '1'};
}

PointMatrix read_bin(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputFormatError("cannot open input file: " + path);
  char magic[8];
  in.read(magic, 8);
  if (!in || std::memcmp(magic, kMagic, 8) != 0)
    throw InputFormatError("bad magic in binary file: " + path);
  std::uint64_t rows = 0, cols = 0;
  in.read(reinterpret_cast<char*>(&rows), 8);
  in.read(reinterpret_cast<char*>(&cols), 8);
  if (!in || cols == 0 || rows == 0) throw InputFormatError("bad binary header in " + path);
  std::vector<double> col_major(rows * cols);
  in.read(reinterpret_cast<char*>(col_major.data()),
          static_cast<std::streamsize>(col_major.size() * sizeof(double)));
  if (!in) throw InputFormatError("truncated binary payload in " + path);
  PointMatrix pm;
  pm.n = rows;
  pm.d = static_cast<int>(cols);
  pm.data.resize(rows * cols);
  for (std::uint64_t j = 0; j < cols; ++j)
    for (std::uint64_t i = 0; i < rows; ++i) pm.data[i * cols + j] = col_major[j * rows + i];
  return pm;
}

void write_bin(const std::string& path, const PointMatrix& pm) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputFormatError("cannot open output file: " + path);
  out.write(kMagic, 8);
  std::uint64_t rows = pm.n, cols = pm.d;
  out.write(reinterpret_cast<const char*>(&rows), 8);
  out.write(reinterpret_cast<const char*>(&cols), 8);
  std::vector<double> col_major(rows * cols);
  for (std::uint64_t j = 0; j < cols; ++j)
    for (std::uint64_t i = 0; i < rows; ++i) col_major[j * rows + i] = pm.data[i * cols + j];
  out.write(reinterpret_cast<const char*>(col_major.data()),
            static_cast<std::streamsize>(col_major.size() * sizeof(double)));
}

PointMatrix read_points(const std::string& path, bool header) {
  auto ends_with = [&](const char* suf) {
    std::string s(suf);
    return path.size() >= s.size() && path.compare(path.size() - s.size(), s.size(), s) == 0;
  };
  if (ends_with(".bin") || ends_with(".f64")) return read_bin(path);
  return read_csv(path, header);
}

}  // namespace l2est
