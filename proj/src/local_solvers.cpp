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

#include "gf2synth/local_solvers.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <map>

#include "gf2synth/error.hpp"

namespace gf2synth {

namespace {

void sort_layer(std::vector<CnotGate>& layer) {
  std::sort(layer.begin(), layer.end(), [](const CnotGate& a, const CnotGate& b) {
    return a.control != b.control ? a.control < b.control : a.target < b.target;
  });
}

LayeredCircuit replay(const DepthTable& t, std::uint64_t start) {
  std::uint64_t cur = start;
  auto it = t.entries.find(t.canon(cur));
  if (it == t.entries.end())
    fail(Errc::kInvalidArgument, "state is not present in the depth table");
  LayeredCircuit lc(t.graph.n);
  for (int d = it->second.depth; d > 0; --d) {
    const TableEntry& e = t.entries.at(t.canon(cur));
    const Move& mv = t.moves[e.move];
    std::vector<CnotGate> layer = mv.gates;
    sort_layer(layer);
    for (const CnotGate& g : mv.gates) cur = apply_gate_packed(cur, g.control, g.target);
    lc.layers.push_back(std::move(layer));
  }
  if (t.canon(cur) != t.root()) fail(Errc::kVerify, "table replay did not reach the root state");
  return lc;
}

void check_p2_shape(const BitMatrix& b, int p) {
  std::vector<int> top(p), bottom(p), left(p), right(p);
  for (int i = 0; i < p; ++i) {
    top[i] = i;
    bottom[i] = p + i;
    left[i] = i;
    right[i] = p + i;
  }
  if (!b.submatrix(bottom, right).is_zero())
    fail(Errc::kInvalidArgument, "two-block state must have a zero lower-right block");
  if (b.submatrix(bottom, left).rank() != static_cast<std::size_t>(p))
    fail(Errc::kInvalidArgument, "two-block state needs an invertible lower-left block");
  if (b.submatrix(top, right).rank() != static_cast<std::size_t>(p))
    fail(Errc::kInvalidArgument, "two-block state needs an invertible upper-right block");
}

}  // namespace

LayeredCircuit solve_p1(const BitMatrix& b, const DepthTable& t) {
  if (t.problem != Problem::kOne) fail(Errc::kInvalidArgument, "table does not hold problem 1");
  if (b.rows() != static_cast<std::size_t>(2 * t.p) || b.cols() != static_cast<std::size_t>(t.p))
    fail(Errc::kInvalidArgument, "state dimensions do not match the table block size");
  if (b.rank() != b.cols()) fail(Errc::kInvalidArgument, "state must have full column rank");
  return replay(t, pack_columns(b));
}

LayeredCircuit solve_p2(const BitMatrix& b, const DepthTable& t) {
  if (t.problem != Problem::kTwo) fail(Errc::kInvalidArgument, "table does not hold problem 2");
  if (b.rows() != static_cast<std::size_t>(2 * t.p) || b.cols() != static_cast<std::size_t>(2 * t.p))
    fail(Errc::kInvalidArgument, "state dimensions do not match the table block size");
  check_p2_shape(b, t.p);
  return replay(t, pack_columns(b));
}

LayeredCircuit solve_p3(const BitMatrix& a, const DepthTable& t) {
  if (t.problem != Problem::kThree) fail(Errc::kInvalidArgument, "table does not hold problem 3");
  if (a.rows() != static_cast<std::size_t>(t.p) || a.cols() != static_cast<std::size_t>(t.p))
    fail(Errc::kInvalidArgument, "state dimensions do not match the table block size");
  if (a.rank() != a.rows()) fail(Errc::kSingular, "block operator is singular");
  return replay(t, pack_columns(a));
}

namespace {

BitMatrix mat2(int a00, int a01, int a10, int a11) {
  BitMatrix m(2, 2);
  m.set(0, 0, a00);
  m.set(0, 1, a01);
  m.set(1, 0, a10);
  m.set(1, 1, a11);
  return m;
}

}  // namespace

LayeredCircuit box_p1_closed(const BitMatrix& b) {
  if (b.rows() != 2 || b.cols() != 2) fail(Errc::kInvalidArgument, "closed form expects a 2x2 state");
  LayeredCircuit lc(2);
  if (b == mat2(1, 0, 0, 1)) {
    lc.layers.push_back({CnotGate{1, 0}});
    lc.layers.push_back({CnotGate{0, 1}});
    return lc;
  }
  if (b == mat2(1, 1, 0, 1)) {
    lc.layers.push_back({CnotGate{0, 1}});
    return lc;
  }
  fail(Errc::kInvalidArgument, "state is not an upper unitriangular 2x2 matrix");
}

LayeredCircuit box_p2_closed(const BitMatrix& b) {
  if (b.rows() != 2 || b.cols() != 2) fail(Errc::kInvalidArgument, "closed form expects a 2x2 state");
  LayeredCircuit lc(2);
  if (b == mat2(0, 1, 1, 0)) return lc;  // labels already exchanged
  if (b == mat2(1, 1, 0, 1)) {
    lc.layers.push_back({CnotGate{0, 1}});
    lc.layers.push_back({CnotGate{1, 0}});
    return lc;
  }
  if (b == mat2(1, 0, 0, 1)) {
    lc.layers.push_back({CnotGate{0, 1}});
    lc.layers.push_back({CnotGate{1, 0}});
    lc.layers.push_back({CnotGate{0, 1}});
    return lc;
  }
  fail(Errc::kInvalidArgument, "state is not a reachable 2x2 exchange instance");
}

std::vector<std::vector<std::pair<int, int>>> matching_decomposition(const BitMatrix& b) {
  int rows = static_cast<int>(b.rows());
  int cols = static_cast<int>(b.cols());
  std::vector<std::vector<int>> cap(rows, std::vector<int>(cols, 0));
  std::vector<std::vector<char>> real(rows, std::vector<char>(cols, 0));
  std::vector<int> deg_r(rows, 0), deg_c(cols, 0);
  int k = 0;
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j)
      if (b.get(i, j)) {
        cap[i][j] = 1;
        real[i][j] = 1;
        ++deg_r[i];
        ++deg_c[j];
      }
  for (int i = 0; i < rows; ++i) k = std::max(k, deg_r[i]);
  for (int j = 0; j < cols; ++j) k = std::max(k, deg_c[j]);
  if (k == 0) return {};

  // Pad to a k-regular bipartite multigraph with dummy edges; if the matrix
  // is rectangular, pad the short side with virtual vertices first.
  int side = std::max(rows, cols);
  cap.resize(side, std::vector<int>(cols, 0));
  for (auto& row : cap) row.resize(side, 0);
  deg_r.resize(side, 0);
  deg_c.resize(side, 0);
  int r = 0;
  for (int c = 0; c < side; ++c) {
    while (deg_c[c] < k) {
      while (r < side && deg_r[r] >= k) ++r;
      ++cap[r][c];
      ++deg_r[r];
      ++deg_c[c];
    }
  }

  std::vector<std::vector<std::pair<int, int>>> layers;
  std::vector<int> match_col(side, -1);
  for (int layer = 0; layer < k; ++layer) {
    std::fill(match_col.begin(), match_col.end(), -1);
    std::vector<char> visited(side);
    std::function<bool(int)> augment = [&](int row) -> bool {
      for (int c = 0; c < side; ++c) {
        if (cap[row][c] > 0 && !visited[c]) {
          visited[c] = 1;
          if (match_col[c] < 0 || augment(match_col[c])) {
            match_col[c] = row;
            return true;
          }
        }
      }
      return false;
    };
    for (int row = 0; row < side; ++row) {
      std::fill(visited.begin(), visited.end(), 0);
      if (!augment(row))
        fail(Errc::kVerify, "internal error: regular bipartite graph lost a perfect matching");
    }
    std::vector<std::pair<int, int>> out;
    for (int c = 0; c < side; ++c) {
      int row = match_col[c];
      --cap[row][c];
      if (row < rows && c < cols && real[row][c]) {
        real[row][c] = 0;
        out.emplace_back(row, c);
      }
    }
    std::sort(out.begin(), out.end());
    if (!out.empty()) layers.push_back(std::move(out));
  }
  if (static_cast<int>(layers.size()) != k)
    fail(Errc::kVerify, "internal error: edge colouring produced an empty colour class");
  return layers;
}

namespace {

struct Span {
  std::vector<std::uint64_t> basis;  // reduced by leading bit

  // Returns true (and absorbs v) iff v is independent of the span.
  bool insert(std::uint64_t v) {
    for (std::uint64_t b : basis) {
      std::uint64_t r = v ^ b;
      if (r < v) v = r;
    }
    if (!v) return false;
    basis.push_back(v);
    std::sort(basis.rbegin(), basis.rend());
    return true;
  }
};

std::uint64_t row_bits(const BitMatrix& m, int r) { return m.row_data(r)[0]; }

// One-layer repair making the top p x p block invertible: add independent
// bottom rows into span-dependent top rows.
std::vector<CnotGate> invertibility_repair(const BitMatrix& a, int p) {
  Span span;
  std::vector<int> dependent;
  for (int i = 0; i < p; ++i)
    if (!span.insert(row_bits(a, i))) dependent.push_back(i);
  if (dependent.empty()) return {};
  std::vector<CnotGate> layer;
  std::size_t fixed = 0;
  for (int i = p; i < 2 * p && fixed < dependent.size(); ++i) {
    if (span.insert(row_bits(a, i))) {
      layer.push_back(CnotGate{i, dependent[fixed]});
      ++fixed;
    }
  }
  if (fixed != dependent.size())
    fail(Errc::kInvalidArgument, "state does not have full column rank");
  return layer;
}

BitMatrix bottom_times_top_inverse(const BitMatrix& a, int p) {
  std::vector<int> top(p), bottom(p), cols(p);
  for (int i = 0; i < p; ++i) {
    top[i] = i;
    bottom[i] = p + i;
    cols[i] = i;
  }
  auto inv = a.submatrix(top, cols).inverse();
  if (!inv) fail(Errc::kVerify, "internal error: top block is singular after repair");
  return a.submatrix(bottom, cols) * *inv;
}

// Searches v1, v2 such that B + 1*v1' + v2*1' has all row and column weights
// at most floor(p/2). Exhaustive for p <= 10, heuristic above.
bool find_balancers(const BitMatrix& bmat, int p, std::uint64_t& v1_out, std::uint64_t& v2_out) {
  const std::uint64_t ones = (p == 64) ? ~std::uint64_t(0) : ((std::uint64_t(1) << p) - 1);
  const int h = p / 2;
  std::vector<std::uint64_t> brow(p), bcol(p, 0);
  for (int i = 0; i < p; ++i) brow[i] = row_bits(bmat, i);
  for (int j = 0; j < p; ++j)
    for (int i = 0; i < p; ++i) bcol[j] |= ((brow[i] >> j) & 1) << i;

  auto rows_ok = [&](std::uint64_t v1, std::uint64_t v2) {
    for (int i = 0; i < p; ++i) {
      std::uint64_t row = brow[i] ^ v1 ^ (((v2 >> i) & 1) ? ones : 0);
      if (std::popcount(row) > h) return false;
    }
    return true;
  };

  auto candidates_for = [&](std::uint64_t v2, std::uint64_t& forced, std::vector<int>& free_cols) {
    forced = 0;
    free_cols.clear();
    for (int j = 0; j < p; ++j) {
      int w = std::popcount(bcol[j] ^ v2);
      bool zero_ok = w <= h;
      bool one_ok = (p - w) <= h;
      if (zero_ok && one_ok)
        free_cols.push_back(j);
      else if (one_ok)
        forced |= std::uint64_t(1) << j;
    }
  };

  if (p <= 10) {
    for (std::uint64_t v2 = 0; v2 <= ones; ++v2) {
      std::uint64_t forced;
      std::vector<int> free_cols;
      candidates_for(v2, forced, free_cols);
      std::uint64_t combos = std::uint64_t(1) << free_cols.size();
      for (std::uint64_t bits = 0; bits < combos; ++bits) {
        std::uint64_t v1 = forced;
        for (std::size_t t = 0; t < free_cols.size(); ++t)
          if ((bits >> t) & 1) v1 |= std::uint64_t(1) << free_cols[t];
        if (rows_ok(v1, v2)) {
          v1_out = v1;
          v2_out = v2;
          return true;
        }
      }
    }
    return false;
  }
  // Large blocks: majority columns for v2 = 0 only.
  std::uint64_t forced;
  std::vector<int> free_cols;
  candidates_for(0, forced, free_cols);
  if (rows_ok(forced, 0)) {
    v1_out = forced;
    v2_out = 0;
    return true;
  }
  return false;
}

// Gates realizing "flip entry (i, j) of bottom * top^-1": bottom row p+i gains
// top row j.
CnotGate flip_gate(int p, int i, int j) { return CnotGate{j, p + i}; }

void apply_layer(BitMatrix& a, const std::vector<CnotGate>& layer) {
  for (const CnotGate& g : layer)
    a.xor_rows(static_cast<std::size_t>(g.control), static_cast<std::size_t>(g.target));
}

// Shared tail of the all-to-all solvers: drive B = bottom * top^-1 (tracked
// incrementally) to zero with flip layers, optionally balancing first.
void zero_coupling(BitMatrix& a, int p, AllToAllMode mode, LayeredCircuit& out) {
  BitMatrix b = bottom_times_top_inverse(a, p);
  if (b.is_zero()) return;

  std::uint64_t v1 = 0, v2 = 0;
  bool balanced = mode == AllToAllMode::kImproved && find_balancers(b, p, v1, v2);
  const std::uint64_t ones = (p == 64) ? ~std::uint64_t(0) : ((std::uint64_t(1) << p) - 1);

  BitMatrix flips = b;
  if (balanced) {
    // Leave the rank-<=2 pattern M = 1*v1' + v2*1' in place for now.
    for (int i = 0; i < p; ++i) {
      std::uint64_t mrow = v1 ^ (((v2 >> i) & 1) ? ones : 0);
      for (int j = 0; j < p; ++j)
        if ((mrow >> j) & 1) flips.flip(i, j);
    }
  }
  for (const auto& group : matching_decomposition(flips)) {
    std::vector<CnotGate> layer;
    layer.reserve(group.size());
    for (auto [i, j] : group) layer.push_back(flip_gate(p, i, j));
    sort_layer(layer);
    apply_layer(a, layer);
    out.layers.push_back(std::move(layer));
  }
  if (!balanced) return;

  // Cancel duplicate rows and columns of M pairwise; row operations act on
  // bottom qubits, column operations on top qubits, so they share a layer.
  std::vector<std::uint64_t> mrow(p);
  for (int i = 0; i < p; ++i) mrow[i] = v1 ^ (((v2 >> i) & 1) ? ones : 0);
  for (;;) {
    std::map<std::uint64_t, std::vector<int>> rgroups;
    for (int i = 0; i < p; ++i)
      if (mrow[i]) rgroups[mrow[i]].push_back(i);
    std::vector<std::uint64_t> mcol(p, 0);
    for (int i = 0; i < p; ++i)
      for (int j = 0; j < p; ++j) mcol[j] |= ((mrow[i] >> j) & 1) << i;
    std::map<std::uint64_t, std::vector<int>> cgroups;
    for (int j = 0; j < p; ++j)
      if (mcol[j]) cgroups[mcol[j]].push_back(j);

    std::vector<CnotGate> layer;
    std::vector<std::pair<int, int>> row_pairs, col_pairs;
    for (const auto& [value, members] : rgroups) {
      (void)value;
      for (std::size_t t = 0; t + 1 < members.size(); t += 2) {
        row_pairs.emplace_back(members[t], members[t + 1]);
        layer.push_back(CnotGate{p + members[t], p + members[t + 1]});
      }
    }
    for (const auto& [value, members] : cgroups) {
      (void)value;
      for (std::size_t t = 0; t + 1 < members.size(); t += 2) {
        col_pairs.emplace_back(members[t], members[t + 1]);
        layer.push_back(CnotGate{members[t + 1], members[t]});
      }
    }
    if (layer.empty()) break;
    sort_layer(layer);
    apply_layer(a, layer);
    out.layers.push_back(std::move(layer));
    for (auto [keep, drop] : row_pairs) {
      mrow[drop] ^= mrow[keep];
    }
    for (auto [keep, drop] : col_pairs) {
      for (int i = 0; i < p; ++i) mrow[i] ^= ((mrow[i] >> keep) & 1) << drop;
    }
  }

  BitMatrix rem(static_cast<std::size_t>(p), static_cast<std::size_t>(p));
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < p; ++j)
      if ((mrow[i] >> j) & 1) rem.set(i, j, true);
  for (const auto& group : matching_decomposition(rem)) {
    std::vector<CnotGate> layer;
    for (auto [i, j] : group) layer.push_back(flip_gate(p, i, j));
    sort_layer(layer);
    apply_layer(a, layer);
    out.layers.push_back(std::move(layer));
  }
}

}  // namespace

LayeredCircuit alltoall_solve_p1(const BitMatrix& b, AllToAllMode mode) {
  if (b.cols() < 1 || b.cols() > 64 || b.rows() != 2 * b.cols())
    fail(Errc::kInvalidArgument, "state must be 2p x p with p in 1..64");
  int p = static_cast<int>(b.cols());
  if (b.rank() != b.cols()) fail(Errc::kInvalidArgument, "state must have full column rank");

  BitMatrix a = b;
  LayeredCircuit out(2 * p);
  std::vector<CnotGate> repair = invertibility_repair(a, p);
  if (!repair.empty()) {
    sort_layer(repair);
    apply_layer(a, repair);
    out.layers.push_back(std::move(repair));
  }
  zero_coupling(a, p, mode, out);

  std::vector<int> bottom(p), cols(p);
  for (int i = 0; i < p; ++i) {
    bottom[i] = p + i;
    cols[i] = i;
  }
  if (!a.submatrix(bottom, cols).is_zero())
    fail(Errc::kVerify, "internal error: lower block was not cleared");
  return out;
}

LayeredCircuit alltoall_solve_p2(const BitMatrix& b, AllToAllMode mode) {
  if (b.cols() < 2 || b.cols() > 128 || b.cols() % 2 != 0 || b.rows() != b.cols())
    fail(Errc::kInvalidArgument, "state must be 2p x 2p");
  int p = static_cast<int>(b.cols()) / 2;
  if (p > 64) fail(Errc::kInvalidArgument, "block size must be at most 64");
  check_p2_shape(b, p);

  BitMatrix a = b;
  LayeredCircuit out(2 * p);
  std::vector<CnotGate> fold, unfold;
  for (int i = 0; i < p; ++i) fold.push_back(CnotGate{i, p + i});
  for (int i = 0; i < p; ++i) unfold.push_back(CnotGate{p + i, i});
  apply_layer(a, fold);
  out.layers.push_back(std::move(fold));
  apply_layer(a, unfold);
  out.layers.push_back(std::move(unfold));
  // Now a = [B2 0; B1+B2 B3]: clear the lower-left coupling against the
  // invertible top-left block. The top gates used never touch the zero
  // upper-right block and the bottom gates only mix rows of B3.
  zero_coupling(a, p, mode, out);

  std::vector<int> top(p), bottom(p), left(p), right(p);
  for (int i = 0; i < p; ++i) {
    top[i] = i;
    bottom[i] = p + i;
    left[i] = i;
    right[i] = p + i;
  }
  if (!a.submatrix(bottom, left).is_zero() || !a.submatrix(top, right).is_zero())
    fail(Errc::kVerify, "internal error: off-diagonal blocks were not cleared");
  if (a.submatrix(top, left).rank() != static_cast<std::size_t>(p) ||
      a.submatrix(bottom, right).rank() != static_cast<std::size_t>(p))
    fail(Errc::kVerify, "internal error: diagonal blocks are not invertible");
  return out;
}

}  // namespace gf2synth
