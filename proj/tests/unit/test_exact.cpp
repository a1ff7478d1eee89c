#include "doctest.h"
#include "srn/exact.hpp"

using namespace srn;

TEST_CASE("integer rank of simple matrices") {
  CHECK(integer_rank({}) == 0);
  CHECK(integer_rank({{0, 0, 0}}) == 0);
  CHECK(integer_rank({{1, 0}, {0, 1}}) == 2);
  CHECK(integer_rank({{1, 2}, {2, 4}}) == 1);
  CHECK(integer_rank({{2, 4, 6}, {1, 2, 3}, {0, 0, 1}}) == 2);
}

TEST_CASE("rank is exact where doubles would drift") {
  // Rows differ by one part in 10^7; floating point elimination with a loose
  // pivot threshold would merge them.
  CHECK(integer_rank({{10000001, 10000000}, {10000000, 9999999}}) == 2);
  CHECK(integer_rank({{1000000, 999999, 0}, {999999, 999998, 0}, {1, 1, 0}}) == 2);
}

TEST_CASE("null space basis is primitive and orthogonal to the rows") {
  std::vector<std::vector<Count>> rows{{1, -1, 0, 0}, {0, 1, -1, 0}};
  auto basis = integer_null_space(rows, 4);
  REQUIRE(basis.size() == 2);
  for (const auto& w : rows) {
    for (const auto& v : basis) {
      Count dot = 0;
      for (std::size_t i = 0; i < v.size(); ++i) dot += w[i] * v[i];
      CHECK(dot == 0);
    }
  }
  for (const auto& v : basis) {
    Count first = 0;
    for (Count c : v) {
      if (c != 0) {
        first = c;
        break;
      }
    }
    CHECK(first > 0);
  }
}

TEST_CASE("null space of a full-rank square system is empty") {
  CHECK(integer_null_space({{1, 0}, {0, 1}}, 2).empty());
}

TEST_CASE("null space scales are reduced to coprime entries") {
  // 2x = 4y has primitive solution (2, 1).
  auto basis = integer_null_space({{2, -4}}, 2);
  REQUIRE(basis.size() == 1);
  CHECK(basis[0] == std::vector<Count>{2, 1});
}
