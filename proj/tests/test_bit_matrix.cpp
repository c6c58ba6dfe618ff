// Copyright 2026 the gf2synth authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <set>
#include <string>
#include <vector>

#include "doctest.h"
#include "gf2synth/bit_matrix.hpp"
#include "gf2synth/error.hpp"
#include "gf2synth/synthesis.hpp"
#include "oracles.hpp"

using gf2synth::BitMatrix;
using oracle::mat;

TEST_SUITE_BEGIN("bit_matrix");

TEST_CASE("row add matches the xor definition") {
  BitMatrix m = BitMatrix::identity(2);
  m.xor_rows(0, 1);
  CHECK(m == mat({"10", "11"}));
}

TEST_CASE("row add is an involution and preserves invertibility") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    BitMatrix m = gf2synth::random_invertible(8, seed);
    const BitMatrix before = m;
    m.xor_rows(3, 5);
    CHECK(oracle::naive_rank(m) == 8);
    m.xor_rows(3, 5);
    CHECK(m == before);
  }
}

TEST_CASE("multiplication identities") {
  const BitMatrix m = oracle::random_matrix(5, 5, 7);
  CHECK(BitMatrix::identity(5) * m == m);
  BitMatrix e01 = BitMatrix::identity(2);
  e01.xor_rows(0, 1);
  CHECK(e01 * BitMatrix::identity(2) == mat({"10", "11"}));
}

TEST_CASE("multiplication agrees with the naive oracle") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const BitMatrix a = oracle::random_matrix(6, 6, 2 * seed);
    const BitMatrix b = oracle::random_matrix(6, 6, 2 * seed + 1);
    CHECK(a * b == oracle::naive_mul(a, b));
  }
  // rectangular shapes and associativity
  const BitMatrix a = oracle::random_matrix(3, 5, 100);
  const BitMatrix b = oracle::random_matrix(5, 4, 101);
  const BitMatrix c = oracle::random_matrix(4, 7, 102);
  CHECK(a * b == oracle::naive_mul(a, b));
  CHECK((a * b) * c == a * (b * c));
}

TEST_CASE("rank") {
  CHECK(BitMatrix(3, 3).rank() == 0);
  CHECK(mat({"11", "11"}).rank() == 1);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const BitMatrix b = oracle::random_full_rank(4, 2, seed);
    CHECK(b.rank() == 2);
    CHECK(b.rank() == oracle::naive_rank(b));
  }
}

TEST_CASE("inverse") {
  CHECK(*BitMatrix::identity(4).inverse() == BitMatrix::identity(4));
  const BitMatrix u = mat({"11", "01"});
  CHECK(*u.inverse() == u);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const BitMatrix m = gf2synth::random_invertible(8, seed);
    CHECK(m * *m.inverse() == BitMatrix::identity(8));
  }
  CHECK(!mat({"11", "11"}).inverse().has_value());
}

TEST_CASE("rcef basics") {
  const BitMatrix root = mat({"10", "01", "00", "00"});
  CHECK(root.rcef() == root);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const BitMatrix m = oracle::random_matrix(6, 4, seed);
    const BitMatrix r = m.rcef();
    CHECK(r.rcef() == r);  // idempotent
    const BitMatrix q = gf2synth::random_invertible(4, seed + 1000);
    CHECK((m * q).rcef() == r);  // column-operation invariance
    CHECK(r.rank() == m.rank());
  }
}

TEST_CASE("rcef pivot convention") {
  // pivots are the topmost ones, strictly increasing; zero columns trail
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const BitMatrix r = oracle::random_matrix(5, 5, seed).rcef();
    int prev_pivot = -1;
    bool seen_zero = false;
    for (std::size_t c = 0; c < r.cols(); ++c) {
      int pivot = -1;
      for (std::size_t i = 0; i < r.rows(); ++i)
        if (r.get(i, c)) {
          pivot = static_cast<int>(i);
          break;
        }
      if (pivot < 0) {
        seen_zero = true;
        continue;
      }
      CHECK(!seen_zero);
      CHECK(pivot > prev_pivot);
      prev_pivot = pivot;
      // pivot row has a single one
      for (std::size_t c2 = 0; c2 < r.cols(); ++c2)
        if (c2 != c) CHECK(!r.get(pivot, c2));
    }
  }
}

TEST_CASE("distinct rcef forms of full-rank 2p x p matrices") {
  // p = 1: three states
  std::set<std::string> forms1;
  for (int bits = 1; bits < 4; ++bits)
    forms1.insert(mat({bits & 1 ? "1" : "0", bits & 2 ? "1" : "0"}).rcef().to_text());
  CHECK(forms1.size() == 3);

  // p = 2: Gaussian binomial (4 choose 2)_2 = 35
  std::set<std::string> forms2;
  for (int bits = 0; bits < 256; ++bits) {
    BitMatrix m(4, 2);
    for (int i = 0; i < 8; ++i)
      if (bits >> i & 1) m.set(i / 2, i % 2, true);
    if (m.rank() == 2) forms2.insert(m.rcef().to_text());
  }
  CHECK(forms2.size() == 35);
}

TEST_CASE("is_northwest") {
  CHECK(BitMatrix::exchange(5).is_northwest());
  CHECK(!BitMatrix::identity(2).is_northwest());
  CHECK(BitMatrix::identity(1).is_northwest());
  // stable under left-multiplication by upper triangular operators
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    BitMatrix upper = BitMatrix::identity(6);
    std::mt19937_64 rng(seed);
    for (std::size_t i = 0; i < 6; ++i)
      for (std::size_t j = i + 1; j < 6; ++j)
        if (rng() & 1) upper.set(i, j, true);
    BitMatrix nw = BitMatrix::exchange(6);
    for (std::size_t i = 0; i < 6; ++i)
      for (std::size_t j = 0; i + j < 5; ++j)
        if (rng() & 1) nw.set(i, j, true);
    REQUIRE(nw.is_northwest());
    CHECK((upper * nw).is_northwest());
  }
}

TEST_CASE("upl on tiny inputs") {
  const auto one = gf2synth::upl_decompose(mat({"1"}));
  CHECK(one.v == mat({"1"}));
  CHECK(one.labels == std::vector<int>{0});

  const auto id = gf2synth::upl_decompose(BitMatrix::identity(6));
  CHECK(id.v == BitMatrix::exchange(6));
  CHECK(id.labels == std::vector<int>{5, 4, 3, 2, 1, 0});
}

TEST_CASE("upl postconditions on random operators") {
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    const BitMatrix a = gf2synth::random_invertible(8, seed);
    const auto upl = gf2synth::upl_decompose(a);
    const gf2synth::LabeledOperator op{upl.v, upl.labels, 1};
    CHECK(gf2synth::check_invariant(gf2synth::LabelInvariant::kRowStep1, op));
    CHECK((upl.v.inverse().value() * a).is_northwest());
  }
}

TEST_CASE("upl rejects singular input") {
  CHECK_THROWS_AS(gf2synth::upl_decompose(mat({"11", "11"})), gf2synth::Error);
  try {
    gf2synth::upl_decompose(mat({"11", "11"}));
  } catch (const gf2synth::Error& e) {
    CHECK(e.code() == gf2synth::Errc::kSingular);
  }
}

TEST_CASE("random_invertible") {
  CHECK(gf2synth::random_invertible(1, 0) == mat({"1"}));
  for (std::uint64_t seed = 0; seed < 100; ++seed)
    CHECK(gf2synth::random_invertible(16, seed).rank() == 16);
  CHECK(gf2synth::random_invertible(16, 42) == gf2synth::random_invertible(16, 42));
}

TEST_CASE("text round trip") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const BitMatrix m = gf2synth::random_invertible(9, seed);
    CHECK(BitMatrix::parse(m.to_text()) == m);
  }
  CHECK_THROWS_AS(BitMatrix::parse("10\n1\n"), gf2synth::Error);   // ragged
  CHECK_THROWS_AS(BitMatrix::parse("10\n1x\n"), gf2synth::Error);  // bad character
  CHECK_THROWS_AS(BitMatrix::parse(""), gf2synth::Error);
}

TEST_SUITE_END();
