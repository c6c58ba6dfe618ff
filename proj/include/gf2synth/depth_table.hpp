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
#include <map>
#include <memory>
#include <string>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "gf2synth/bit_matrix.hpp"
#include "gf2synth/topology.hpp"

namespace gf2synth {

// The three exhaustively tabulated local problems on a two-block / one-block
// neighbourhood:
//   kOne:   reduce a full-rank 2p x p matrix to [I; 0] (zero the lower block),
//           states = column spans, i.e. p-dimensional subspaces of F_2^{2p};
//   kTwo:   reduce a 2p x 2p pair of complementary column spans to
//           ([I; 0], [0; I]); instance classes are the states whose right
//           span is the span of the first p coordinates;
//   kThree: reduce an invertible p x p matrix to the identity.
enum class Problem { kOne = 1, kTwo = 2, kThree = 3 };

// States are packed column-major into a u64: byte j holds column j, bit r of
// that byte holds row r. Requires rows <= 8 and cols <= 8.
std::uint64_t pack_columns(const BitMatrix& m);
BitMatrix unpack_columns(std::uint64_t s, int rows, int cols);

// CNOT(control, target) as a row operation on a packed state.
inline std::uint64_t apply_gate_packed(std::uint64_t s, int control, int target) {
  return s ^ (((s >> control) & 0x0101010101010101ULL) << target);
}

// Reduced column echelon form of the first ncol packed columns.
std::uint64_t rcef_packed(std::uint64_t s, int nrow, int ncol);

inline constexpr std::uint16_t kRootMove = 0xFFFF;
inline constexpr std::uint64_t kDefaultBudget = 2'000'000;
// Above this state-space size the hash-map search refuses to run; Problem 2
// histograms beyond it are served by the streaming bitmap engine.
inline constexpr std::uint64_t kHashTierLimit = 100'000'000;

struct BfsOptions {
  std::uint64_t budget = kDefaultBudget;
  // Problem 2 only: stop as soon as every instance class has been reached.
  // Backpointer chains of found states stay complete, so replay is unaffected.
  bool early_stop = true;
};

struct TableEntry {
  std::uint8_t depth;
  std::uint16_t move;  // index into moves; kRootMove for the root
};

struct DepthTable {
  Problem problem = Problem::kOne;
  int p = 0;
  int state_rows = 0;
  int state_cols = 0;
  ConnectivityGraph graph;
  std::uint64_t fingerprint = 0;
  std::vector<Move> moves;
  std::unordered_map<std::uint64_t, TableEntry> entries;

  // Histogram over the counted population: all states for problems 1 and 3,
  // instance classes only for problem 2. Trailing all-zero depths trimmed.
  std::vector<std::uint64_t> counts_by_depth;
  std::uint64_t counted_total = 0;
  int max_depth = 0;
  std::uint64_t states_explored = 0;
  bool early_stopped = false;

  std::uint64_t root() const;
  std::uint64_t canon(std::uint64_t s) const;
};

// Number of distinct canonical states; saturates at UINT64_MAX.
std::uint64_t state_space_size(Problem problem, int p);

// FNV-1a over (problem, p, vertex count, edge list); identifies a table for
// caching purposes.
std::uint64_t table_fingerprint(Problem problem, int p, const ConnectivityGraph& g);

// Breadth-first search from the problem root over oriented matchings of g.
// For problems 1 and 2, g is the two-block local graph on 2p vertices; for
// problem 3 it is the within-block graph on p vertices. Throws Errc::kBudget
// when the state space or the explored set exceeds the budget.
DepthTable bfs_table(Problem problem, int p, const ConnectivityGraph& g, const BfsOptions& opt = {});

void save_table(const DepthTable& t, const std::string& path);
DepthTable load_table(const std::string& path, Problem problem, int p, const ConnectivityGraph& g);

// In-memory memo plus optional on-disk cache directory (see GF2SYNTH_CACHE).
class TableStore {
 public:
  TableStore() = default;
  explicit TableStore(std::string cache_dir) : dir_(std::move(cache_dir)) {}

  const std::string& cache_dir() const { return dir_; }
  const DepthTable& get(Problem problem, int p, const ConnectivityGraph& g, const BfsOptions& opt = {});

 private:
  std::string dir_;
  std::map<std::tuple<int, int, std::uint64_t>, std::unique_ptr<DepthTable>> memo_;
};

// Depth histogram of Problem-2 instance classes computed with a 2-bit-per-
// state array instead of a hash map: fixed memory (space/4 bytes), no replay
// table. Intended for state spaces beyond kHashTierLimit; requires an
// explicit budget of at least the state-space size.
struct P2HistogramResult {
  std::vector<std::uint64_t> counts_by_depth;
  std::uint64_t class_total = 0;
  std::uint64_t states_explored = 0;
  int max_depth = 0;
  bool early_stopped = false;
};
P2HistogramResult p2_histogram_bitmap(int p, const ConnectivityGraph& g, std::uint64_t budget,
                                      int threads);

}  // namespace gf2synth
