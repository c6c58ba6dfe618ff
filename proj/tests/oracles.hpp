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

// Deliberately naive reference implementations the tests check the library
// against. Everything here is O(whatever) and boolean-by-boolean on purpose.

#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "gf2synth/bit_matrix.hpp"
#include "gf2synth/circuit.hpp"

namespace oracle {

using Bool2d = std::vector<std::vector<int>>;

inline Bool2d to_rows(const gf2synth::BitMatrix& m) {
  Bool2d r(m.rows(), std::vector<int>(m.cols(), 0));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) r[i][j] = m.get(i, j);
  return r;
}

inline gf2synth::BitMatrix from_rows(const Bool2d& rows) {
  gf2synth::BitMatrix m(rows.size(), rows.empty() ? 0 : rows[0].size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j)
      if (rows[i][j]) m.set(i, j, true);
  return m;
}

// Rectangular builder from row strings of '0'/'1'.
inline gf2synth::BitMatrix mat(const std::vector<std::string>& rows) {
  gf2synth::BitMatrix m(rows.size(), rows.empty() ? 0 : rows[0].size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j)
      if (rows[i][j] == '1') m.set(i, j, true);
  return m;
}

inline gf2synth::BitMatrix naive_mul(const gf2synth::BitMatrix& a, const gf2synth::BitMatrix& b) {
  gf2synth::BitMatrix r(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) {
      int acc = 0;
      for (std::size_t k = 0; k < a.cols(); ++k) acc ^= (a.get(i, k) & b.get(k, j));
      if (acc) r.set(i, j, true);
    }
  return r;
}

inline std::size_t naive_rank(const gf2synth::BitMatrix& m) {
  Bool2d a = to_rows(m);
  const std::size_t rows = m.rows(), cols = m.cols();
  std::size_t rank = 0;
  for (std::size_t c = 0; c < cols && rank < rows; ++c) {
    std::size_t pivot = rank;
    while (pivot < rows && !a[pivot][c]) ++pivot;
    if (pivot == rows) continue;
    std::swap(a[pivot], a[rank]);
    for (std::size_t r = 0; r < rows; ++r)
      if (r != rank && a[r][c])
        for (std::size_t k = 0; k < cols; ++k) a[r][k] ^= a[rank][k];
    ++rank;
  }
  return rank;
}

// Gate-by-gate simulation on explicit boolean rows.
inline gf2synth::BitMatrix naive_simulate(const gf2synth::CnotCircuit& c) {
  Bool2d m(c.n_qubits(), std::vector<int>(c.n_qubits(), 0));
  for (int i = 0; i < c.n_qubits(); ++i) m[i][i] = 1;
  for (const auto& g : c.gates())
    for (int j = 0; j < c.n_qubits(); ++j) m[g.target][j] ^= m[g.control][j];
  return from_rows(m);
}

inline gf2synth::BitMatrix random_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  gf2synth::BitMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j)
      if (rng() & 1) m.set(i, j, true);
  return m;
}

inline gf2synth::BitMatrix random_full_rank(std::size_t rows, std::size_t cols,
                                            std::uint64_t seed) {
  const std::size_t want = rows < cols ? rows : cols;
  for (std::uint64_t s = seed;; ++s) {
    gf2synth::BitMatrix m = random_matrix(rows, cols, s);
    if (naive_rank(m) == want) return m;
  }
}

}  // namespace oracle
