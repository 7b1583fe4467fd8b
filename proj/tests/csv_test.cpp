#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <sstream>
#include <string>

#include "unlabeled/csv.hpp"
#include "unlabeled/model.hpp"

using namespace unlabeled;

namespace {

Mat parse(const std::string& text) {
  std::istringstream in(text);
  return csv::read_matrix(in, "a.csv");
}

std::string parse_error(const std::string& text) {
  try {
    parse(text);
  } catch (const ParseError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST(Csv, ReadsPlainRows) {
  const Mat m = parse("1,2\n3.5, -4e-3\n");
  ASSERT_EQ(m.rows(), 2);
  ASSERT_EQ(m.cols(), 2);
  EXPECT_EQ(m(1, 0), 3.5);
  EXPECT_EQ(m(1, 1), -4e-3);
}

TEST(Csv, ToleratesCrlfAndTrailingBlankLines) {
  const Mat m = parse("1,2\r\n3,4\r\n\n\n");
  EXPECT_EQ(m.rows(), 2);
  EXPECT_EQ(m(1, 1), 4.0);
}

TEST(Csv, ErrorsCarryFileAndLine) {
  EXPECT_EQ(parse_error("1,2\n3,abc\n"), "a.csv:2: non-numeric token 'abc'");
  EXPECT_EQ(parse_error("1,2\n3\n"), "a.csv:2: ragged row with 1 values, expected 2");
  EXPECT_EQ(parse_error("1,2,\n"), "a.csv:1: trailing comma");
  EXPECT_EQ(parse_error("1\n\n2\n"), "a.csv:2: blank line inside data");
  EXPECT_EQ(parse_error(""), "a.csv: no data");
  EXPECT_EQ(parse_error("1,nan\n"), "a.csv:1: non-finite value 'nan'");
  EXPECT_EQ(parse_error("1,,2\n"), "a.csv:1: non-numeric token ''");
}

TEST(Csv, VectorNeedsOneColumn) {
  std::istringstream in("1,2\n");
  EXPECT_THROW(csv::read_vector(in, "x.csv"), ParseError);
  std::istringstream ok("1\n-3\n");
  EXPECT_EQ(csv::read_vector(ok, "x.csv"), (Vec(2) << 1, -3).finished());
}

TEST(Csv, RoundTripIsBitExact) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Mat m = gen_matrix(5, 3, Distribution::gaussian, seed);
    m(0, 0) = 0.1;
    m(1, 1) = 1e-300;
    m(2, 2) = -1.7976931348623157e308;
    std::ostringstream out;
    csv::write_matrix(out, m);
    const Mat back = parse(out.str());
    ASSERT_EQ(back.rows(), m.rows());
    for (Index i = 0; i < m.rows(); ++i)
      for (Index j = 0; j < m.cols(); ++j) EXPECT_EQ(back(i, j), m(i, j));
  }
}

TEST(Csv, FileRoundTripAndMissingFile) {
  const auto path = (std::filesystem::temp_directory_path() / "unlabeled_csv_test.csv").string();
  const Mat m = gen_matrix(4, 2, Distribution::uniform, 3);
  csv::write_matrix_file(path, m);
  EXPECT_EQ(csv::read_matrix_file(path), m);
  std::remove(path.c_str());
  try {
    csv::read_matrix_file(path);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find(path), std::string::npos);
  }
}
