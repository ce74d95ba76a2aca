#include <doctest.h>

#include <filesystem>
#include <sstream>

#include "nestedot/error.hpp"
#include "nestedot/path_set.hpp"
#include "support/oracles.hpp"

using namespace nestedot;

namespace {

PathSet parse(const std::string& text, std::size_t t, std::size_t d) {
  std::istringstream in(text);
  return load_csv(in, t, d);
}

ErrorCode parse_error(const std::string& text, std::size_t t, std::size_t d) {
  try {
    parse(text, t, d);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST_CASE("zero rows parse to an all-zero set") {
  PathSet p = parse("0,0,0\n0,0,0\n", 3, 1);
  CHECK(p.n_samples() == 2);
  for (double v : p.values()) CHECK(v == 0.0);
}

TEST_CASE("single row keeps its values in order") {
  PathSet p = parse("0.1,0.5,1.0\n", 3, 1);
  REQUIRE(p.n_samples() == 1);
  CHECK(p.at(0, 0, 0) == 0.1);
  CHECK(p.at(0, 1, 0) == 0.5);
  CHECK(p.at(0, 2, 0) == 1.0);
}

TEST_CASE("rows are time-major") {
  PathSet p = parse("1,2,3,4\n", 2, 2);
  CHECK(p.at(0, 0, 0) == 1.0);
  CHECK(p.at(0, 0, 1) == 2.0);
  CHECK(p.at(0, 1, 0) == 3.0);
  CHECK(p.at(0, 1, 1) == 4.0);
  // flat index (t-1)*d + (j-1)
  CHECK(p.path(0)[1 * 2 + 0] == 3.0);
}

TEST_CASE("header, CRLF and blank lines") {
  PathSet p = parse("t1,t2\r\n1.5,-2\r\n\r\n3,4\r\n", 2, 1);
  CHECK(p.n_samples() == 2);
  CHECK(p.at(0, 1, 0) == -2.0);
  CHECK(p.at(1, 0, 0) == 3.0);
}

TEST_CASE("malformed rows report the line") {
  try {
    parse("1,2\n3\n", 2, 1);
    FAIL("expected MalformedRow");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::MalformedRow);
    REQUIRE(e.line().has_value());
    CHECK(*e.line() == 2);
  }
  CHECK(parse_error("1,abc\n", 2, 1) == ErrorCode::MalformedRow);
  CHECK(parse_error("1,2\nx,y\n", 2, 1) == ErrorCode::MalformedRow);
  CHECK(parse_error("1,2,3\n", 2, 1) == ErrorCode::MalformedRow);
}

TEST_CASE("non-finite values and empty input are rejected") {
  CHECK(parse_error("1,nan\n", 2, 1) == ErrorCode::NonFiniteValue);
  CHECK(parse_error("inf,1\n", 2, 1) == ErrorCode::NonFiniteValue);
  CHECK(parse_error("", 2, 1) == ErrorCode::EmptyInput);
  CHECK(parse_error("a,b\n", 2, 1) == ErrorCode::EmptyInput);
  CHECK_THROWS_AS(PathSet(1, 1, 1, {std::nan("")}), Error);
  CHECK_THROWS_AS(PathSet(2, 1, 1, {1.0}), Error);
}

TEST_CASE("save writes shortest round-trip text") {
  PathSet p(1, 2, 1, {1.5, -2.0});
  std::ostringstream out;
  save_csv(p, out);
  CHECK(out.str() == "1.5,-2\n");
  CHECK(parse(out.str(), 2, 1) == p);
}

TEST_CASE("empty write then load is EmptyInput") {
  std::ostringstream out;
  CHECK(parse_error(out.str(), 1, 1) == ErrorCode::EmptyInput);
}

TEST_CASE("random sets round-trip bit-equal") {
  oracle::Rng rng(7);
  for (int rep = 0; rep < 20; ++rep) {
    std::vector<double> v(10 * 5 * 2);
    for (double& x : v) x = rng.normal() * std::pow(10.0, rng.integer(-8, 8));
    PathSet p(10, 5, 2, v);
    std::stringstream io;
    save_csv(p, io);
    CHECK(load_csv(io, 5, 2) == p);
  }
}

TEST_CASE("file helpers") {
  auto file = std::filesystem::temp_directory_path() / "nestedot_path_set_test.csv";
  PathSet p(2, 1, 1, {0.25, 1e-300});
  save_csv_file(p, file);
  CHECK(load_csv_file(file, 1, 1) == p);
  std::filesystem::remove(file);
  try {
    load_csv_file(file, 1, 1);
    FAIL("expected IoFailure");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::IoFailure);
    CHECK(std::string(e.what()).find(file.string()) != std::string::npos);
  }
}
