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

#include "gf2synth/bit_matrix.hpp"

#include <algorithm>
#include <cassert>
#include <random>
#include <sstream>

#include "gf2synth/error.hpp"

namespace gf2synth {

BitMatrix::BitMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), words_((cols + 63) / 64), data_(rows * words_, 0) {}

BitMatrix BitMatrix::identity(std::size_t n) {
  BitMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m.set(i, i, true);
  return m;
}

BitMatrix BitMatrix::exchange(std::size_t n) {
  BitMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m.set(i, n - 1 - i, true);
  return m;
}

void BitMatrix::xor_rows(std::size_t src, std::size_t dst) {
  std::uint64_t* d = row_data(dst);
  const std::uint64_t* s = row_data(src);
  for (std::size_t w = 0; w < words_; ++w) d[w] ^= s[w];
}

void BitMatrix::xor_cols(std::size_t src, std::size_t dst) {
  for (std::size_t r = 0; r < rows_; ++r)
    if (get(r, src)) flip(r, dst);
}

void BitMatrix::swap_rows(std::size_t a, std::size_t b) {
  if (a == b) return;
  std::uint64_t* pa = row_data(a);
  std::uint64_t* pb = row_data(b);
  for (std::size_t w = 0; w < words_; ++w) std::swap(pa[w], pb[w]);
}

BitMatrix BitMatrix::operator*(const BitMatrix& rhs) const {
  if (cols_ != rhs.rows_) fail(Errc::kInvalidArgument, "matrix product dimension mismatch");
  BitMatrix out(rows_, rhs.cols_);
  for (std::size_t i = 0; i < rows_; ++i) {
    std::uint64_t* acc = out.row_data(i);
    for (std::size_t k = 0; k < cols_; ++k) {
      if (!get(i, k)) continue;
      const std::uint64_t* b = rhs.row_data(k);
      for (std::size_t w = 0; w < rhs.words_; ++w) acc[w] ^= b[w];
    }
  }
  return out;
}

BitMatrix BitMatrix::transpose() const {
  BitMatrix out(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c)
      if (get(r, c)) out.set(c, r, true);
  return out;
}

BitMatrix BitMatrix::submatrix(const std::vector<int>& rs, const std::vector<int>& cs) const {
  BitMatrix out(rs.size(), cs.size());
  for (std::size_t i = 0; i < rs.size(); ++i)
    for (std::size_t j = 0; j < cs.size(); ++j)
      if (get(static_cast<std::size_t>(rs[i]), static_cast<std::size_t>(cs[j])))
        out.set(i, j, true);
  return out;
}

bool BitMatrix::is_zero() const {
  for (std::uint64_t w : data_)
    if (w) return false;
  return true;
}

bool BitMatrix::is_identity() const {
  return rows_ == cols_ && *this == identity(rows_);
}

std::size_t BitMatrix::rank() const {
  BitMatrix m = *this;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols_ && r < rows_; ++c) {
    std::size_t pivot = r;
    while (pivot < rows_ && !m.get(pivot, c)) ++pivot;
    if (pivot == rows_) continue;
    m.swap_rows(r, pivot);
    for (std::size_t j = pivot + 1; j < rows_; ++j)
      if (m.get(j, c)) m.xor_rows(r, j);
    ++r;
  }
  return r;
}

std::optional<BitMatrix> BitMatrix::inverse() const {
  if (rows_ != cols_) return std::nullopt;
  BitMatrix m = *this;
  BitMatrix inv = identity(rows_);
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols_; ++c) {
    std::size_t pivot = r;
    while (pivot < rows_ && !m.get(pivot, c)) ++pivot;
    if (pivot == rows_) return std::nullopt;
    m.swap_rows(r, pivot);
    inv.swap_rows(r, pivot);
    for (std::size_t j = 0; j < rows_; ++j) {
      if (j != r && m.get(j, c)) {
        m.xor_rows(r, j);
        inv.xor_rows(r, j);
      }
    }
    ++r;
  }
  return inv;
}

BitMatrix BitMatrix::rref() const {
  BitMatrix m = *this;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols_ && r < rows_; ++c) {
    std::size_t pivot = r;
    while (pivot < rows_ && !m.get(pivot, c)) ++pivot;
    if (pivot == rows_) continue;
    m.swap_rows(r, pivot);
    for (std::size_t j = 0; j < rows_; ++j)
      if (j != r && m.get(j, c)) m.xor_rows(r, j);
    ++r;
  }
  return m;
}

BitMatrix BitMatrix::rcef() const { return transpose().rref().transpose(); }

bool BitMatrix::is_northwest() const {
  if (rows_ != cols_) return false;
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = rows_ - i; j < cols_; ++j)
      if (get(i, j)) return false;
  return true;
}

std::string BitMatrix::to_text() const {
  std::string out;
  out.reserve(rows_ * (cols_ + 1));
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c) out.push_back(get(r, c) ? '1' : '0');
    out.push_back('\n');
  }
  return out;
}

BitMatrix BitMatrix::parse(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    lines.push_back(line);
  }
  if (lines.empty()) fail(Errc::kParse, "empty matrix");
  std::size_t n = lines.size();
  BitMatrix m(n, n);
  for (std::size_t r = 0; r < n; ++r) {
    if (lines[r].size() != n)
      fail(Errc::kParse, "matrix row " + std::to_string(r) + " has length " +
                             std::to_string(lines[r].size()) + ", expected " + std::to_string(n));
    for (std::size_t c = 0; c < n; ++c) {
      char ch = lines[r][c];
      if (ch == '1')
        m.set(r, c, true);
      else if (ch != '0')
        fail(Errc::kParse, std::string("invalid matrix character '") + ch + "'");
    }
  }
  return m;
}

BitMatrix random_invertible(std::size_t n, std::uint64_t seed) {
  if (n == 0) fail(Errc::kInvalidArgument, "matrix dimension must be positive");
  std::mt19937_64 rng(seed);
  for (;;) {
    BitMatrix m(n, n);
    for (std::size_t r = 0; r < n; ++r) {
      std::uint64_t* row = m.row_data(r);
      for (std::size_t w = 0; w < m.words_per_row(); ++w) row[w] = rng();
      std::size_t tail = n % 64;
      if (tail) row[m.words_per_row() - 1] &= (std::uint64_t(1) << tail) - 1;
    }
    if (m.rank() == n) return m;
  }
}

UplResult upl_decompose(const BitMatrix& a) {
  if (a.rows() != a.cols()) fail(Errc::kInvalidArgument, "operator must be square");
  std::size_t n = a.rows();
  if (n == 0) fail(Errc::kInvalidArgument, "operator must be nonempty");
  if (a.rank() != n) fail(Errc::kSingular, "operator is singular");

  BitMatrix m = a;
  BitMatrix u = BitMatrix::identity(n);
  for (int i = static_cast<int>(n) - 1; i >= 0; --i) {
    int pivot = static_cast<int>(n) - 1;
    while (pivot >= 0 && !m.get(pivot, i)) --pivot;
    assert(pivot >= 0);  // column stays nonzero: row/column ops preserve invertibility
    for (int j = 0; j < static_cast<int>(n); ++j) {
      if (j != pivot && m.get(j, i)) {
        m.xor_rows(pivot, j);
        // Record the inverse row operation as a column operation on u.
        u.xor_cols(j, pivot);
      }
    }
    for (int j = i - 1; j >= 0; --j)
      if (m.get(pivot, j)) m.xor_cols(i, j);
  }

  // m is now a permutation matrix; read the label of each row off its one.
  std::vector<int> labels(n, -1);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t j = 0;
    while (j < n && !m.get(i, j)) ++j;
    assert(j < n);
    labels[i] = static_cast<int>(n - 1 - j);
  }
  std::vector<int> inv(n, -1);
  for (std::size_t i = 0; i < n; ++i) inv[labels[i]] = static_cast<int>(i);

  BitMatrix v(n, n);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t r = 0; r < n; ++r)
      if (u.get(r, inv[k])) v.set(r, k, true);
  return UplResult{std::move(v), std::move(labels)};
}

}  // namespace gf2synth
