#include <doctest.h>

#include <random>

#include "emoharness/csv.hpp"
#include "emoharness/errors.hpp"

using namespace emoharness;

TEST_CASE("quoted fields with commas, quotes and newlines") {
  const auto recs = csv::parse("a,b\n\"x, y\",\"say \"\"hi\"\"\"\n\"multi\nline\",z\n");
  REQUIRE(recs.size() == 3);
  CHECK(recs[1].fields == std::vector<std::string>{"x, y", "say \"hi\""});
  CHECK(recs[2].fields == std::vector<std::string>{"multi\nline", "z"});
  CHECK(recs[2].line == 3);
}

TEST_CASE("CRLF endings, empty fields, missing final newline") {
  const auto recs = csv::parse("a,b,c\r\n1,,3\r\n,,");
  REQUIRE(recs.size() == 3);
  CHECK(recs[1].fields == std::vector<std::string>{"1", "", "3"});
  CHECK(recs[2].fields == std::vector<std::string>{"", "", ""});
}

TEST_CASE("blank lines are skipped") {
  const auto recs = csv::parse("a\n\n1\n\n");
  REQUIRE(recs.size() == 2);
  CHECK(recs[1].line == 3);
}

TEST_CASE("malformed quoting is rejected") {
  CHECK_THROWS_AS(csv::parse("a\n\"open"), ValidationError);
  CHECK_THROWS_AS(csv::parse("a\nab\"c\n"), ValidationError);
  CHECK_THROWS_AS(csv::parse("a\n\"x\"y\n"), ValidationError);
}

TEST_CASE("format then parse is identity on random rows") {
  std::mt19937 rng(42);
  const std::string alphabet = "ab ,\"\n\r'x";
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<std::string> row(1 + rng() % 4);
    for (auto& f : row) {
      const auto len = rng() % 6;
      for (unsigned i = 0; i < len; ++i) f += alphabet[rng() % alphabet.size()];
    }
    const std::string text = csv::format_row({"h"}) + csv::format_row(row);
    const auto recs = csv::parse(text);
    REQUIRE(recs.size() == 2);
    CHECK(recs[1].fields == row);
  }
}
