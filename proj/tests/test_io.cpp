#include "repglm/data.hpp"

#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <string>

using namespace repglm;

namespace {

std::string write_temp(const char* name, const std::string& text) {
  const std::string path = std::string("/tmp/repglm_test_io_") + name;
  std::ofstream out(path);
  out << text;
  return path;
}

}  // namespace

TEST_SUITE("io") {
  TEST_CASE("dataset reader: intercept, keys and values") {
    const std::string path = write_temp("ok.csv",
                                        "y,x1,x2,key:month\n"
                                        "1,0.5,-2,3\n"
                                        "0,1.25,4,11\n");
    const Dataset d = read_csv_dataset(path);
    CHECK(d.n_rows() == 2);
    REQUIRE(d.n_cols() == 3);  // intercept + 2 covariates
    CHECK(d.column_names[0] == "intercept");
    CHECK(d.X(0, 0) == 1.0);
    CHECK(d.X(1, 1) == 1.25);
    CHECK(d.y(0) == 1.0);
    REQUIRE(d.keys.size() == 1);
    CHECK(d.keys[0].name == "month");
    CHECK(d.keys[0].labels[1] == 11);
    CHECK(d.column("x2") == 2);
    CHECK(d.column("nope") == -1);
    std::remove(path.c_str());
  }

  TEST_CASE("reader errors carry the line number") {
    const std::string missing = write_temp("short.csv",
                                           "y,x1\n"
                                           "1,2\n"
                                           "0\n");
    try {
      read_csv_dataset(missing);
      FAIL("expected io_error");
    } catch (const io_error& e) {
      CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }
    std::remove(missing.c_str());

    const std::string garbage = write_temp("bad.csv",
                                           "y,x1\n"
                                           "1,abc\n");
    CHECK_THROWS_AS(read_csv_dataset(garbage), io_error);
    std::remove(garbage.c_str());

    CHECK_THROWS_AS(read_csv_dataset("/tmp/repglm_does_not_exist.csv"), io_error);
  }

  TEST_CASE("key columns must trail the covariates") {
    const std::string path = write_temp("keymid.csv",
                                        "y,key:month,x1\n"
                                        "1,3,0.5\n");
    CHECK_THROWS_AS(read_csv_dataset(path), io_error);
    std::remove(path.c_str());
  }

  TEST_CASE("writer and reader agree on values and keys") {
    const std::string path = write_temp("rt.csv", "");
    Dataset d;
    d.X.resize(2, 2);
    d.X << 1, 0.123456789012345, 1, -7.5;
    d.y.resize(2);
    d.y << 1, 0;
    d.column_names = {"intercept", "x1"};
    d.keys.push_back(KeyColumn{"DayOfWeek", {2, 6}});
    write_csv_dataset(path, d);
    const Dataset back = read_csv_dataset(path);
    CHECK(back.X == d.X);  // %.17g preserves doubles exactly
    CHECK(back.y == d.y);
    REQUIRE(back.keys.size() == 1);
    CHECK(back.keys[0].labels == d.keys[0].labels);
    std::remove(path.c_str());
  }
}
