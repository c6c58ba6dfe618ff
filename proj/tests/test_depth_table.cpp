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

#include "gf2synth/depth_table.hpp"

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <vector>

#include "doctest.h"
#include "gf2synth/error.hpp"
#include "gf2synth/topology.hpp"
#include "oracles.hpp"

namespace gf2synth {
namespace {

namespace fs = std::filesystem;

struct TempDir {
  fs::path path;
  TempDir() {
    static std::atomic<int> counter{0};
    path = fs::temp_directory_path() /
           ("gf2synth-dt-" + std::to_string(counter.fetch_add(1)) + "-" +
            std::to_string(std::random_device{}()));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
};

std::uint64_t apply_move_packed(std::uint64_t s, const Move& mv) {
  for (const CnotGate& g : mv.gates) s = apply_gate_packed(s, g.control, g.target);
  return s;
}

// Walk every backpointer chain: each stored move must step to a state exactly
// one level shallower, ending at the root after `depth` layers.
void check_replay(const DepthTable& t) {
  for (const auto& [state, entry] : t.entries) {
    std::uint64_t s = state;
    std::uint8_t depth = entry.depth;
    std::uint16_t mv = entry.move;
    while (depth > 0) {
      REQUIRE(mv != kRootMove);
      REQUIRE(mv < t.moves.size());
      s = t.canon(apply_move_packed(s, t.moves[mv]));
      auto it = t.entries.find(s);
      REQUIRE(it != t.entries.end());
      REQUIRE(it->second.depth == depth - 1);
      depth = it->second.depth;
      mv = it->second.move;
    }
    CHECK(s == t.root());
    CHECK(mv == kRootMove);
  }
}

TEST_SUITE("depth_table") {

TEST_CASE("pack and unpack are inverse") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    int rows = 1 + static_cast<int>(rng() % 8);
    int cols = 1 + static_cast<int>(rng() % 8);
    BitMatrix m = oracle::random_matrix(rows, cols, rng());
    std::uint64_t s = pack_columns(m);
    CHECK(unpack_columns(s, rows, cols) == m);
  }
}

TEST_CASE("packed gate application matches the row operation") {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 50; ++trial) {
    int rows = 2 + static_cast<int>(rng() % 7);
    int cols = 1 + static_cast<int>(rng() % 8);
    BitMatrix m = oracle::random_matrix(rows, cols, rng());
    int c = static_cast<int>(rng() % rows), t = static_cast<int>(rng() % rows);
    if (c == t) continue;
    std::uint64_t s = apply_gate_packed(pack_columns(m), c, t);
    BitMatrix expect = m;
    expect.xor_rows(static_cast<std::size_t>(c), static_cast<std::size_t>(t));
    CHECK(unpack_columns(s, rows, cols) == expect);
  }
}

TEST_CASE("packed rcef matches the matrix rcef") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 60; ++trial) {
    int rows = 2 + static_cast<int>(rng() % 7);
    int cols = 1 + static_cast<int>(rng() % std::min(rows, 8));
    BitMatrix m = oracle::random_matrix(rows, cols, rng());
    std::uint64_t canon = rcef_packed(pack_columns(m), rows, cols);
    CHECK(unpack_columns(canon, rows, cols) == m.rcef());
  }
}

TEST_CASE("state space sizes match the closed forms") {
  CHECK(state_space_size(Problem::kOne, 1) == 3);
  CHECK(state_space_size(Problem::kOne, 2) == 35);
  CHECK(state_space_size(Problem::kOne, 3) == 1395);
  CHECK(state_space_size(Problem::kOne, 4) == 200787);
  CHECK(state_space_size(Problem::kTwo, 1) == 6);
  CHECK(state_space_size(Problem::kTwo, 2) == 560);
  CHECK(state_space_size(Problem::kTwo, 3) == 714240);
  CHECK(state_space_size(Problem::kTwo, 4) == 13158776832ULL);
  CHECK(state_space_size(Problem::kThree, 1) == 1);
  CHECK(state_space_size(Problem::kThree, 2) == 6);
  CHECK(state_space_size(Problem::kThree, 3) == 168);
  CHECK(state_space_size(Problem::kThree, 4) == 20160);
}

TEST_CASE("fingerprints separate problems, sizes, and graphs") {
  ConnectivityGraph c4 = build_layout("ladder:2x2").local_graph;
  ConnectivityGraph k4 = ConnectivityGraph::complete(4);
  CHECK(table_fingerprint(Problem::kOne, 2, c4) == table_fingerprint(Problem::kOne, 2, c4));
  CHECK(table_fingerprint(Problem::kOne, 2, c4) != table_fingerprint(Problem::kTwo, 2, c4));
  CHECK(table_fingerprint(Problem::kOne, 2, c4) != table_fingerprint(Problem::kOne, 2, k4));
}

TEST_CASE("problem-1 table on a single edge") {
  DepthTable t = bfs_table(Problem::kOne, 1, ConnectivityGraph::complete(2));
  CHECK(t.counts_by_depth == std::vector<std::uint64_t>{1, 1, 1});
  CHECK(t.counted_total == 3);
  CHECK(t.max_depth == 2);
  CHECK(t.entries.size() == 3);
  auto root = t.entries.find(t.root());
  REQUIRE(root != t.entries.end());
  CHECK(root->second.depth == 0);
  CHECK(root->second.move == kRootMove);
  check_replay(t);
}

TEST_CASE("problem-1 table on the width-2 ladder cell") {
  DepthTable t = bfs_table(Problem::kOne, 2, build_layout("ladder:2x6").local_graph);
  CHECK(t.counts_by_depth == std::vector<std::uint64_t>{1, 3, 14, 15, 2});
  CHECK(t.counted_total == 35);
  CHECK(t.max_depth == 4);
  check_replay(t);
}

TEST_CASE("problem-2 classes on the width-2 ladder cell") {
  DepthTable t = bfs_table(Problem::kTwo, 2, build_layout("ladder:2x6").local_graph);
  CHECK(t.counts_by_depth == std::vector<std::uint64_t>{0, 0, 1, 7, 8});
  CHECK(t.counted_total == 16);  // 2^{p*p} instance classes
  CHECK(t.max_depth == 4);
  check_replay(t);

  // Without early stopping the walk covers the whole canonical pair space and
  // the class histogram is unchanged.
  BfsOptions full;
  full.early_stop = false;
  DepthTable t2 = bfs_table(Problem::kTwo, 2, build_layout("ladder:2x6").local_graph, full);
  CHECK_FALSE(t2.early_stopped);
  CHECK(t2.entries.size() == state_space_size(Problem::kTwo, 2));
  CHECK(t2.counts_by_depth == t.counts_by_depth);
}

TEST_CASE("problem-2 classes on a single edge") {
  DepthTable t = bfs_table(Problem::kTwo, 1, ConnectivityGraph::complete(2));
  CHECK(t.counts_by_depth == std::vector<std::uint64_t>{0, 0, 1, 1});
  CHECK(t.counted_total == 2);
  check_replay(t);
}

TEST_CASE("problem-3 tables match group orders") {
  DepthTable t1 = bfs_table(Problem::kThree, 1, ConnectivityGraph::empty(1));
  CHECK(t1.counts_by_depth == std::vector<std::uint64_t>{1});
  CHECK(t1.max_depth == 0);

  DepthTable t2 = bfs_table(Problem::kThree, 2, ConnectivityGraph::complete(2));
  CHECK(t2.counts_by_depth == std::vector<std::uint64_t>{1, 2, 2, 1});
  CHECK(t2.counted_total == 6);
  CHECK(t2.max_depth == 3);
  check_replay(t2);

  // 2x2 tile 4-cycle: all of GL(4,2) is reachable.
  DepthTable t4 = bfs_table(Problem::kThree, 4, build_layout("grid:4x4").intra_graph);
  CHECK(t4.counted_total == 20160);
  check_replay(t4);
}

TEST_CASE("problem-1 tables for wider cells match frozen histograms") {
  CHECK(bfs_table(Problem::kOne, 2, build_layout("ladder-diag:2x4").local_graph).counts_by_depth ==
        std::vector<std::uint64_t>{1, 6, 19, 9});
  CHECK(bfs_table(Problem::kOne, 3, build_layout("ladder:3x4").local_graph).counts_by_depth ==
        std::vector<std::uint64_t>{1, 7, 91, 538, 736, 22});
  CHECK(bfs_table(Problem::kOne, 3, ConnectivityGraph::complete(6)).counts_by_depth ==
        std::vector<std::uint64_t>{1, 33, 649, 712});
}

TEST_CASE("problem-2 classes on the diagonal ladder cell") {
  DepthTable t = bfs_table(Problem::kTwo, 2, build_layout("ladder-diag:2x4").local_graph);
  CHECK(t.counts_by_depth == std::vector<std::uint64_t>{0, 0, 2, 10, 4});
  CHECK(t.counted_total == 16);
}

TEST_CASE("canonicalization is a congruence for moves") {
  DepthTable t = bfs_table(Problem::kOne, 2, build_layout("ladder:2x6").local_graph);
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 30; ++trial) {
    BitMatrix m = oracle::random_matrix(4, 2, rng());
    if (m.rank() != 2) continue;
    BitMatrix q = random_invertible(2, rng());
    std::uint64_t s = pack_columns(m);
    std::uint64_t sq = pack_columns(m * q);
    CHECK(t.canon(s) == t.canon(sq));
    for (std::size_t mi = 0; mi < t.moves.size(); mi += 3) {
      CHECK(t.canon(apply_move_packed(s, t.moves[mi])) ==
            t.canon(apply_move_packed(sq, t.moves[mi])));
    }
  }
}

TEST_CASE("bfs rejects undersized budgets and oversized problems") {
  ConnectivityGraph c4 = build_layout("ladder:2x2").local_graph;
  BfsOptions tiny;
  tiny.budget = 10;
  try {
    bfs_table(Problem::kOne, 2, c4, tiny);
    FAIL("expected budget error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::kBudget);
  }
  // A p=4 problem-2 space exceeds the in-memory tier no matter the budget.
  BfsOptions huge;
  huge.budget = UINT64_MAX;
  try {
    bfs_table(Problem::kTwo, 4, ConnectivityGraph::complete(8), huge);
    FAIL("expected tier-limit error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::kBudget);
  }
  CHECK_THROWS_AS(bfs_table(Problem::kOne, 2, ConnectivityGraph::complete(2)), Error);
  CHECK_THROWS_AS(bfs_table(Problem::kOne, 5, ConnectivityGraph::complete(10)), Error);
}

TEST_CASE("table files round trip") {
  TempDir tmp;
  ConnectivityGraph c4 = build_layout("ladder:2x6").local_graph;
  DepthTable t = bfs_table(Problem::kOne, 2, c4);
  std::string path = (tmp.path / "ladder2-p1.tbl").string();
  save_table(t, path);

  DepthTable back = load_table(path, Problem::kOne, 2, c4);
  CHECK(back.counts_by_depth == t.counts_by_depth);
  CHECK(back.counted_total == t.counted_total);
  CHECK(back.max_depth == t.max_depth);
  REQUIRE(back.entries.size() == t.entries.size());
  for (const auto& [k, e] : t.entries) {
    auto it = back.entries.find(k);
    REQUIRE(it != back.entries.end());
    CHECK(it->second.depth == e.depth);
    CHECK(it->second.move == e.move);
  }
  check_replay(back);
}

TEST_CASE("table files are validated on load") {
  TempDir tmp;
  ConnectivityGraph c4 = build_layout("ladder:2x6").local_graph;
  DepthTable t = bfs_table(Problem::kOne, 2, c4);
  std::string path = (tmp.path / "tbl.tbl").string();
  save_table(t, path);

  // Wrong graph, wrong problem, wrong p.
  ConnectivityGraph diag = build_layout("ladder-diag:2x4").local_graph;
  CHECK_THROWS_AS(load_table(path, Problem::kOne, 2, diag), Error);
  CHECK_THROWS_AS(load_table(path, Problem::kTwo, 2, c4), Error);
  CHECK_THROWS_AS(load_table(path, Problem::kThree, 2, ConnectivityGraph::complete(2)), Error);

  // Missing file.
  try {
    load_table((tmp.path / "absent.tbl").string(), Problem::kOne, 2, c4);
    FAIL("expected io error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::kIo);
  }

  // Not a table file at all.
  std::string junk_path = (tmp.path / "junk.tbl").string();
  std::ofstream(junk_path) << "this is not a table\n";
  try {
    load_table(junk_path, Problem::kOne, 2, c4);
    FAIL("expected parse error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::kParse);
  }

  // Truncated records.
  std::string full;
  {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    full = buf.str();
  }
  std::string trunc_path = (tmp.path / "trunc.tbl").string();
  std::ofstream(trunc_path, std::ios::binary) << full.substr(0, full.size() - 7);
  CHECK_THROWS_AS(load_table(trunc_path, Problem::kOne, 2, c4), Error);
}

TEST_CASE("table store memoizes and persists") {
  TempDir tmp;
  ConnectivityGraph c4 = build_layout("ladder:2x6").local_graph;

  TableStore store(tmp.path.string());
  const DepthTable& a = store.get(Problem::kOne, 2, c4);
  const DepthTable& b = store.get(Problem::kOne, 2, c4);
  CHECK(&a == &b);  // memoized
  CHECK(a.counts_by_depth == std::vector<std::uint64_t>{1, 3, 14, 15, 2});

  // One cache file appeared, and a fresh store can serve from it.
  int files = 0;
  for (const auto& entry : fs::directory_iterator(tmp.path)) {
    ++files;
    CHECK(entry.path().extension() == ".tbl");
  }
  CHECK(files == 1);
  TableStore fresh(tmp.path.string());
  CHECK(fresh.get(Problem::kOne, 2, c4).counts_by_depth == a.counts_by_depth);

  // A corrupted cache entry is recomputed, not trusted.
  for (const auto& entry : fs::directory_iterator(tmp.path))
    std::ofstream(entry.path(), std::ios::binary | std::ios::trunc) << "garbage";
  TableStore repaired(tmp.path.string());
  CHECK(repaired.get(Problem::kOne, 2, c4).counts_by_depth == a.counts_by_depth);

  // Without a directory the store still memoizes in memory.
  TableStore memory_only;
  const DepthTable& m1 = memory_only.get(Problem::kThree, 2, ConnectivityGraph::complete(2));
  CHECK(&m1 == &memory_only.get(Problem::kThree, 2, ConnectivityGraph::complete(2)));
}

TEST_CASE("bitmap histogram engine agrees with the hash search") {
  // p=1 on a single edge.
  P2HistogramResult r1 = p2_histogram_bitmap(1, ConnectivityGraph::complete(2), 1000, 1);
  CHECK(r1.counts_by_depth == std::vector<std::uint64_t>{0, 0, 1, 1});
  CHECK(r1.class_total == 2);

  // p=2 on the ladder cell and on K4, single- and multi-threaded.
  for (int threads : {1, 2}) {
    P2HistogramResult r2 = p2_histogram_bitmap(2, build_layout("ladder:2x6").local_graph,
                                               state_space_size(Problem::kTwo, 2), threads);
    CHECK(r2.counts_by_depth == std::vector<std::uint64_t>{0, 0, 1, 7, 8});
    CHECK(r2.class_total == 16);
  }
  BfsOptions full;
  full.early_stop = false;
  ConnectivityGraph k4 = ConnectivityGraph::complete(4);
  DepthTable hash_k4 = bfs_table(Problem::kTwo, 2, k4, full);
  P2HistogramResult bm_k4 = p2_histogram_bitmap(2, k4, 560, 1);
  CHECK(bm_k4.counts_by_depth == hash_k4.counts_by_depth);
  CHECK(bm_k4.class_total == hash_k4.counted_total);
}

TEST_CASE("bitmap histogram engine agrees at p=3") {
  ConnectivityGraph cell = build_layout("ladder:3x4").local_graph;
  DepthTable hash_t = bfs_table(Problem::kTwo, 3, cell);
  CHECK(hash_t.counts_by_depth == std::vector<std::uint64_t>{0, 0, 1, 29, 206, 269, 7});
  P2HistogramResult bm = p2_histogram_bitmap(3, cell, state_space_size(Problem::kTwo, 3), 1);
  CHECK(bm.counts_by_depth == hash_t.counts_by_depth);
  CHECK(bm.class_total == 512);
}

TEST_CASE("bitmap histogram engine requires a full-space budget") {
  try {
    p2_histogram_bitmap(2, ConnectivityGraph::complete(4), 100, 1);
    FAIL("expected budget error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::kBudget);
  }
}

}  // TEST_SUITE

}  // namespace
}  // namespace gf2synth
