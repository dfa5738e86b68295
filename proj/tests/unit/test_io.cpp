#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "l2est/io.hpp"

using namespace l2est;

namespace {

std::filesystem::path tmp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / name;
}

}  // namespace

TEST_CASE("doubles are formatted losslessly") {
  for (double v : {0.1, 1.0 / 3.0, 1e-17, -2.5e300, 0.0, 85.65971654333334}) {
    CHECK(std::stod(format_double(v)) == v);
  }
}

TEST_CASE("csv round-trip preserves every value") {
  PointMatrix pm;
  pm.n = 3;
  pm.d = 2;
  pm.data = {0.1, -2.0 / 3.0, 1e-12, 4.0, 5.5, -0.0};
  auto path = tmp_file("l2est_io_roundtrip.csv");
  write_csv(path.string(), pm);
  PointMatrix back = read_csv(path.string());
  REQUIRE(back.n == 3);
  REQUIRE(back.d == 2);
  for (std::size_t i = 0; i < pm.data.size(); ++i) CHECK(back.data[i] == pm.data[i]);
}

TEST_CASE("csv errors name the offending cell") {
  auto path = tmp_file("l2est_io_bad.csv");
  {
    std::ofstream out(path);
    out << "1.0,2.0\n3.0,abc\n";
  }
  CHECK_THROWS_WITH_AS(read_csv(path.string()), doctest::Contains("row 2, column 2"),
                       InputFormatError);
  {
    std::ofstream out(path);
    out << "1.0,2.0\n3.0\n";
  }
  CHECK_THROWS_WITH_AS(read_csv(path.string()), doctest::Contains("ragged row 2"),
                       InputFormatError);
}

TEST_CASE("csv header flag skips the first row") {
  auto path = tmp_file("l2est_io_header.csv");
  {
    std::ofstream out(path);
    out << "x,y\n1.0,2.0\n";
  }
  PointMatrix pm = read_csv(path.string(), true);
  CHECK(pm.n == 1);
  CHECK(pm.data == std::vector<double>{1.0, 2.0});
  CHECK_THROWS_AS(read_csv(path.string(), false), InputFormatError);
}

TEST_CASE("binary container round-trips bit-exactly") {
  PointMatrix pm;
  pm.n = 4;
  pm.d = 3;
  pm.data.resize(12);
  for (int i = 0; i < 12; ++i) pm.data[i] = std::exp(static_cast<double>(i)) / 7.0;
  auto path = tmp_file("l2est_io_roundtrip.bin");
  write_bin(path.string(), pm);
  PointMatrix back = read_bin(path.string());
  REQUIRE(back.n == pm.n);
  REQUIRE(back.d == pm.d);
  CHECK(back.data == pm.data);

  // dispatch by extension
  PointMatrix again = read_points(path.string());
  CHECK(again.data == pm.data);
}

TEST_CASE("binary reader rejects corrupt headers") {
  auto path = tmp_file("l2est_io_corrupt.bin");
  {
    std::ofstream out(path, std::ios::binary);
    out << "NOTMAGIC123";
  }
  CHECK_THROWS_AS(read_bin(path.string()), InputFormatError);
}
