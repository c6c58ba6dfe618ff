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

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace gf2synth {

// Dense matrix over GF(2), rows packed into 64-bit words.
// Invariant: bits at column positions >= cols() are always zero, so whole-word
// operations (equality, row xor, popcount) need no tail masking.
class BitMatrix {
 public:
  BitMatrix() = default;
  BitMatrix(std::size_t rows, std::size_t cols);

  static BitMatrix identity(std::size_t n);
  // Exchange matrix: ones on the anti-diagonal.
  static BitMatrix exchange(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  bool get(std::size_t r, std::size_t c) const {
    return (data_[r * words_ + c / 64] >> (c % 64)) & 1u;
  }
  void set(std::size_t r, std::size_t c, bool v) {
    std::uint64_t& w = data_[r * words_ + c / 64];
    std::uint64_t m = std::uint64_t(1) << (c % 64);
    w = v ? (w | m) : (w & ~m);
  }
  void flip(std::size_t r, std::size_t c) { data_[r * words_ + c / 64] ^= std::uint64_t(1) << (c % 64); }

  // row dst ^= row src
  void xor_rows(std::size_t src, std::size_t dst);
  // column dst ^= column src
  void xor_cols(std::size_t src, std::size_t dst);
  void swap_rows(std::size_t a, std::size_t b);

  bool operator==(const BitMatrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
  }
  bool operator!=(const BitMatrix& o) const { return !(*this == o); }

  BitMatrix operator*(const BitMatrix& rhs) const;

  BitMatrix transpose() const;
  BitMatrix submatrix(const std::vector<int>& rs, const std::vector<int>& cs) const;

  bool is_zero() const;
  bool is_identity() const;

  std::size_t rank() const;
  std::optional<BitMatrix> inverse() const;

  // Reduced row echelon form (row operations only).
  BitMatrix rref() const;
  // Reduced column echelon form (column operations only): pivot rows strictly
  // increase left to right, each pivot row has a single one, zero columns
  // trail. Canonical representative of the right-multiplication orbit.
  BitMatrix rcef() const;

  // True iff square and a[i][j] == 0 whenever i + j > rows() - 1.
  bool is_northwest() const;

  // One text line per row, characters '0'/'1', trailing newline.
  std::string to_text() const;
  // Parses the to_text format; requires a square, nonempty matrix.
  static BitMatrix parse(const std::string& text);

  std::size_t words_per_row() const { return words_; }
  const std::uint64_t* row_data(std::size_t r) const { return data_.data() + r * words_; }
  std::uint64_t* row_data(std::size_t r) { return data_.data() + r * words_; }

 private:
  std::size_t rows_ = 0, cols_ = 0, words_ = 0;
  std::vector<std::uint64_t> data_;
};

BitMatrix random_invertible(std::size_t n, std::uint64_t seed);

// Result of the triangularisation pass behind the synthesis pipeline:
// v is upper triangular w.r.t. the label order (v[i][labels[i]] == 1 and
// v[j][labels[i]] == 0 for j > i), and inverse(v) * a is northwest triangular.
struct UplResult {
  BitMatrix v;
  std::vector<int> labels;
};

// Decomposes an invertible a into the labelled operator above. Throws
// Errc::kSingular if a is not invertible.
UplResult upl_decompose(const BitMatrix& a);

}  // namespace gf2synth
