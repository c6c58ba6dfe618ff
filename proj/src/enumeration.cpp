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

#include <atomic>
#include <bit>
#include <cassert>
#include <cstring>
#include <memory>
#include <new>
#include <thread>
#include <unordered_map>
#include <vector>

#include "gf2synth/depth_table.hpp"
#include "gf2synth/error.hpp"

namespace gf2synth {

namespace {

// p x p matrices over GF(2) as arrays of column bytes (bit r = row r).
bool invert_small(const std::uint8_t* in, std::uint8_t* out, int p) {
  std::uint8_t m[8], inv[8];
  for (int j = 0; j < p; ++j) {
    m[j] = in[j];
    inv[j] = static_cast<std::uint8_t>(1 << j);
  }
  for (int r = 0; r < p; ++r) {
    int pc = -1;
    for (int j = r; j < p; ++j)
      if ((m[j] >> r) & 1) {
        pc = j;
        break;
      }
    if (pc < 0) return false;
    std::swap(m[r], m[pc]);
    std::swap(inv[r], inv[pc]);
    for (int j = 0; j < p; ++j)
      if (j != r && ((m[j] >> r) & 1)) {
        m[j] ^= m[r];
        inv[j] ^= inv[r];
      }
  }
  // m is now a permutation of the identity reduced to I; inv holds columns of
  // the inverse in the same column order.
  for (int j = 0; j < p; ++j) out[j] = inv[j];
  return true;
}

inline std::uint8_t gather_rows(std::uint8_t byte, const std::uint8_t* rows, int k) {
  std::uint8_t out = 0;
  for (int i = 0; i < k; ++i) out |= static_cast<std::uint8_t>(((byte >> rows[i]) & 1) << i);
  return out;
}

inline std::uint8_t matvec(const std::uint8_t* cols, std::uint8_t v) {
  std::uint8_t acc = 0;
  while (v) {
    int r = std::countr_zero(static_cast<unsigned>(v));
    acc ^= cols[r];
    v &= static_cast<std::uint8_t>(v - 1);
  }
  return acc;
}

struct FormInfo {
  std::uint8_t cols[4];  // the 2p-row column bytes of the canonical left form
  std::uint8_t piv[4];   // pivot row of column j
  std::uint8_t non[4];   // non-pivot rows, ascending
  std::uint8_t r1n[4];   // columns of R1 restricted to non-pivot rows
};

// Two atomic bits per state: 0 unseen, 1 current frontier, 2 done, 3 next.
class TwoBitArray {
 public:
  explicit TwoBitArray(std::uint64_t n) : words_((n + 31) / 32) {
    try {
      data_ = std::make_unique<std::atomic<std::uint64_t>[]>(words_);
    } catch (const std::bad_alloc&) {
      fail(Errc::kBudget, "cannot allocate state array of " + std::to_string(words_ * 8) +
                              " bytes for the streaming search");
    }
    for (std::uint64_t i = 0; i < words_; ++i) data_[i].store(0, std::memory_order_relaxed);
  }

  std::uint64_t words() const { return words_; }
  std::uint64_t load_word(std::uint64_t w) const { return data_[w].load(std::memory_order_relaxed); }
  void store_word(std::uint64_t w, std::uint64_t v) { data_[w].store(v, std::memory_order_relaxed); }

  // Marks state i as "next" iff currently unseen.
  bool try_mark_next(std::uint64_t i) {
    std::atomic<std::uint64_t>& w = data_[i >> 5];
    int shift = static_cast<int>(i & 31) * 2;
    std::uint64_t cur = w.load(std::memory_order_relaxed);
    for (;;) {
      if ((cur >> shift) & 3) return false;
      if (w.compare_exchange_weak(cur, cur | (std::uint64_t(3) << shift),
                                  std::memory_order_relaxed))
        return true;
    }
  }

  void set(std::uint64_t i, std::uint64_t value) {
    std::atomic<std::uint64_t>& w = data_[i >> 5];
    int shift = static_cast<int>(i & 31) * 2;
    std::uint64_t cur = w.load(std::memory_order_relaxed);
    w.store((cur & ~(std::uint64_t(3) << shift)) | (value << shift), std::memory_order_relaxed);
  }

 private:
  std::uint64_t words_;
  std::unique_ptr<std::atomic<std::uint64_t>[]> data_;
};

constexpr std::uint64_t kEvenBits = 0x5555555555555555ULL;

}  // namespace

P2HistogramResult p2_histogram_bitmap(int p, const ConnectivityGraph& g, std::uint64_t budget,
                                      int threads) {
  if (p < 1 || p > 4) fail(Errc::kInvalidArgument, "streaming search supports block sizes 1..4");
  if (g.n != 2 * p) fail(Errc::kInvalidArgument, "graph size does not match block size");
  std::uint64_t space = state_space_size(Problem::kTwo, p);
  if (space > budget)
    fail(Errc::kBudget, "state space of " + std::to_string(space) +
                            " states needs an explicit budget of at least that size");

  // All canonical left forms, found by the (small) Problem-1 search.
  DepthTable p1 = bfs_table(Problem::kOne, p, g, BfsOptions{});
  std::vector<std::uint32_t> forms;
  forms.reserve(p1.entries.size());
  for (const auto& [key, entry] : p1.entries) {
    (void)entry;
    forms.push_back(static_cast<std::uint32_t>(key));
  }
  std::sort(forms.begin(), forms.end());
  std::unordered_map<std::uint32_t, std::uint32_t> form_index;
  form_index.reserve(forms.size() * 2);
  for (std::uint32_t i = 0; i < forms.size(); ++i) form_index.emplace(forms[i], i);

  std::vector<FormInfo> infos(forms.size());
  for (std::size_t i = 0; i < forms.size(); ++i) {
    FormInfo& fi = infos[i];
    std::uint8_t pivot_mask = 0;
    for (int j = 0; j < p; ++j) {
      fi.cols[j] = static_cast<std::uint8_t>((forms[i] >> (8 * j)) & 0xFF);
      fi.piv[j] = static_cast<std::uint8_t>(std::countr_zero(static_cast<unsigned>(fi.cols[j])));
      pivot_mask |= static_cast<std::uint8_t>(1 << fi.piv[j]);
    }
    if (std::popcount(static_cast<unsigned>(pivot_mask)) != p)
      fail(Errc::kInvalidArgument, "canonical form has a malformed pivot set");
    int k = 0;
    for (int r = 0; r < 2 * p && k < p; ++r)
      if (!((pivot_mask >> r) & 1)) fi.non[k++] = static_cast<std::uint8_t>(r);
    for (int j = 0; j < p; ++j) fi.r1n[j] = gather_rows(fi.cols[j], fi.non, p);
  }

  std::vector<Move> moves = oriented_matchings(g);
  const std::uint64_t abits_count = std::uint64_t(1) << (p * p);
  const std::uint64_t class_target = abits_count;
  const std::uint8_t amask = static_cast<std::uint8_t>((1 << p) - 1);
  std::uint64_t right_high_mask = 0;
  for (int j = 0; j < p; ++j)
    right_high_mask |= ((std::uint64_t(0xFF) >> (8 - 2 * p)) & (std::uint64_t(0xFF) << p) & 0xFF)
                       << (8 * (p + j));

  auto index_to_state = [&](std::uint64_t idx) -> std::uint64_t {
    std::uint32_t i1 = static_cast<std::uint32_t>(idx >> (p * p));
    std::uint64_t abits = idx & (abits_count - 1);
    const FormInfo& fi = infos[i1];
    std::uint64_t s = 0;
    for (int j = 0; j < p; ++j) s |= std::uint64_t(fi.cols[j]) << (8 * j);
    for (int j = 0; j < p; ++j) {
      std::uint8_t a = static_cast<std::uint8_t>((abits >> (j * p)) & amask);
      std::uint8_t w = static_cast<std::uint8_t>(1 << fi.non[j]);
      w ^= matvec(fi.cols, a);
      s |= std::uint64_t(w) << (8 * (p + j));
    }
    return s;
  };

  auto state_to_index = [&](std::uint64_t s, bool* is_class) -> std::uint64_t {
    std::uint64_t left = rcef_packed(s, 2 * p, p);
    auto it = form_index.find(static_cast<std::uint32_t>(left));
    if (it == form_index.end())
      fail(Errc::kInvalidArgument, "state outside the enumerated search space");
    const FormInfo& fi = infos[it->second];
    std::uint8_t rp[4], m[4], minv[4], a[4];
    for (int j = 0; j < p; ++j) {
      std::uint8_t right = static_cast<std::uint8_t>((s >> (8 * (p + j))) & 0xFF);
      rp[j] = gather_rows(right, fi.piv, p);
      m[j] = gather_rows(right, fi.non, p) ^ matvec(fi.r1n, rp[j]);
    }
    if (!invert_small(m, minv, p))
      fail(Errc::kInvalidArgument, "state spans are not complementary");
    std::uint64_t abits = 0;
    for (int j = 0; j < p; ++j) {
      a[j] = matvec(rp, minv[j]);
      abits |= std::uint64_t(a[j]) << (j * p);
    }
    *is_class = (s & right_high_mask) == 0;
    return (std::uint64_t(it->second) << (p * p)) | abits;
  };

  TwoBitArray states(space);

  // Root: left [I;0], right [0;I].
  std::uint64_t root_state = 0;
  for (int j = 0; j < 2 * p; ++j) root_state |= std::uint64_t(1) << (j + 8 * j);
  bool root_class = false;
  std::uint64_t root_idx = state_to_index(root_state, &root_class);
  assert(index_to_state(root_idx) == root_state);
  states.set(root_idx, 1);

  P2HistogramResult res;
  res.counts_by_depth.push_back(root_class ? 1 : 0);
  res.class_total = root_class ? 1 : 0;
  res.states_explored = 1;

  int nthreads = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
  if (nthreads < 1) nthreads = 1;
  if (nthreads > 64) nthreads = 64;

  bool done = res.class_total >= class_target;
  while (!done) {
    std::vector<std::uint64_t> marks(nthreads, 0), classes(nthreads, 0);
    std::uint64_t nwords = states.words();
    auto worker = [&](int tid) {
      std::uint64_t lo = nwords * tid / nthreads;
      std::uint64_t hi = nwords * (tid + 1) / nthreads;
      std::uint64_t local_marks = 0, local_classes = 0;
      for (std::uint64_t w = lo; w < hi; ++w) {
        std::uint64_t word = states.load_word(w);
        std::uint64_t frontier = word & kEvenBits & ~(word >> 1);
        while (frontier) {
          int bit = std::countr_zero(frontier);
          frontier &= frontier - 1;
          std::uint64_t idx = w * 32 + static_cast<std::uint64_t>(bit / 2);
          std::uint64_t s = index_to_state(idx);
          for (const Move& mv : moves) {
            std::uint64_t u = s;
            for (const CnotGate& gate : mv.gates)
              u = apply_gate_packed(u, gate.control, gate.target);
            bool is_class = false;
            std::uint64_t uidx = state_to_index(u, &is_class);
            if (states.try_mark_next(uidx)) {
              ++local_marks;
              if (is_class) ++local_classes;
            }
          }
        }
      }
      marks[tid] = local_marks;
      classes[tid] = local_classes;
    };
    if (nthreads == 1) {
      worker(0);
    } else {
      std::vector<std::thread> pool;
      for (int tid = 0; tid < nthreads; ++tid) pool.emplace_back(worker, tid);
      for (auto& th : pool) th.join();
    }
    std::uint64_t level_marks = 0, level_classes = 0;
    for (int tid = 0; tid < nthreads; ++tid) {
      level_marks += marks[tid];
      level_classes += classes[tid];
    }
    res.states_explored += level_marks;
    res.counts_by_depth.push_back(level_classes);
    res.class_total += level_classes;
    if (res.class_total >= class_target) {
      res.early_stopped = true;
      done = true;
    } else if (level_marks == 0) {
      done = true;
    } else {
      // Advance the wavefront: current(1) -> done(2), next(3) -> current(1).
      auto sweeper = [&](int tid) {
        std::uint64_t lo = nwords * tid / nthreads;
        std::uint64_t hi = nwords * (tid + 1) / nthreads;
        for (std::uint64_t w = lo; w < hi; ++w) {
          std::uint64_t word = states.load_word(w);
          if (!word) continue;
          std::uint64_t b0 = word & kEvenBits;
          std::uint64_t b1 = (word >> 1) & kEvenBits;
          std::uint64_t nb1 = b0 ^ b1;
          std::uint64_t nb0 = b0 & b1;
          states.store_word(w, (nb1 << 1) | nb0);
        }
      };
      if (nthreads == 1) {
        sweeper(0);
      } else {
        std::vector<std::thread> pool;
        for (int tid = 0; tid < nthreads; ++tid) pool.emplace_back(sweeper, tid);
        for (auto& th : pool) th.join();
      }
    }
  }

  while (res.counts_by_depth.size() > 1 && res.counts_by_depth.back() == 0)
    res.counts_by_depth.pop_back();
  res.max_depth = static_cast<int>(res.counts_by_depth.size()) - 1;
  return res;
}

}  // namespace gf2synth
