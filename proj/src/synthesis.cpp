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

#include "gf2synth/synthesis.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "gf2synth/error.hpp"

namespace gf2synth {
namespace {

int ceil_log2(int p) {
  int k = 0;
  while ((1 << k) < p) ++k;
  return k;
}

bool is_complete(const ConnectivityGraph& g) {
  return g.edges.size() == static_cast<std::size_t>(g.n) * (g.n - 1) / 2;
}

BitMatrix reindex_operator(const BitMatrix& a, const std::vector<int>& pi) {
  const std::size_t n = a.rows();
  BitMatrix r(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (a.get(pi[i], pi[j])) r.set(i, j, true);
  return r;
}

LayeredCircuit asap_layers(const CnotCircuit& c) {
  LayeredCircuit lc(c.n_qubits());
  std::vector<std::size_t> busy(c.n_qubits(), 0);
  for (const auto& g : c.gates()) {
    const std::size_t at = std::max(busy[g.control], busy[g.target]);
    if (at == lc.layers.size()) lc.layers.emplace_back();
    lc.layers[at].push_back(g);
    busy[g.control] = busy[g.target] = at + 1;
  }
  return lc;
}

class ClosedFormSolver final : public LocalSolver {
 public:
  LayeredCircuit p1(const BitMatrix& b) const override {
    if (b.rows() != 2 || b.cols() != 1) fail(Errc::kInvalidArgument, "closed form expects a 2x1 state");
    LayeredCircuit lc(2);
    const bool top = b.get(0, 0), bot = b.get(1, 0);
    if (!top && !bot) fail(Errc::kInvalidArgument, "zero column has no triangularisation");
    if (top && bot) lc.append_layer({{0, 1}});
    if (!top) {
      lc.append_layer({{1, 0}});
      lc.append_layer({{0, 1}});
    }
    return lc;
  }

  LayeredCircuit p2(const BitMatrix& b) const override {
    if (b.rows() != 2 || b.cols() != 2) fail(Errc::kInvalidArgument, "closed form expects a 2x2 state");
    if (!b.get(1, 0) || !b.get(0, 1) || b.get(1, 1))
      fail(Errc::kInvalidArgument, "state is not a northwest pair instance");
    LayeredCircuit lc(2);
    lc.append_layer({{0, 1}});
    lc.append_layer({{1, 0}});
    if (!b.get(0, 0)) lc.append_layer({{0, 1}});  // full swap
    return lc;
  }

  LayeredCircuit p3(const BitMatrix& b) const override {
    if (b.rows() != 1 || b.cols() != 1 || !b.get(0, 0))
      fail(Errc::kInvalidArgument, "closed form expects a 1x1 identity block");
    return LayeredCircuit(1);
  }

  int d1() const override { return 2; }
  int d2() const override { return 3; }
  int dstar() const override { return 0; }
  const char* name() const override { return "closed-form"; }
};

class TableSolver final : public LocalSolver {
 public:
  TableSolver(const DepthTable* t1, const DepthTable* t2, const DepthTable* t3)
      : t1_(t1), t2_(t2), t3_(t3) {}

  LayeredCircuit p1(const BitMatrix& b) const override {
    if (!t1_) fail(Errc::kInvalidArgument, "no triangularisation table for this solver");
    return solve_p1(b, *t1_);
  }
  LayeredCircuit p2(const BitMatrix& b) const override {
    if (!t2_) fail(Errc::kInvalidArgument, "no pair-reduction table for this solver");
    return solve_p2(b, *t2_);
  }
  LayeredCircuit p3(const BitMatrix& b) const override {
    if (!t3_) fail(Errc::kInvalidArgument, "no within-block table for this solver");
    return solve_p3(b, *t3_);
  }

  int d1() const override { return t1_ ? t1_->max_depth : 0; }
  int d2() const override { return t2_ ? t2_->max_depth : 0; }
  int dstar() const override { return t3_ ? t3_->max_depth : 0; }
  const char* name() const override { return "table"; }

 private:
  const DepthTable* t1_;
  const DepthTable* t2_;
  const DepthTable* t3_;
};

class AllToAllSolver final : public LocalSolver {
 public:
  AllToAllSolver(int p, AllToAllMode mode, const DepthTable* t3) : p_(p), mode_(mode), t3_(t3) {}

  LayeredCircuit p1(const BitMatrix& b) const override { return alltoall_solve_p1(b, mode_); }
  LayeredCircuit p2(const BitMatrix& b) const override { return alltoall_solve_p2(b, mode_); }

  LayeredCircuit p3(const BitMatrix& b) const override {
    if (t3_) return solve_p3(b, *t3_);
    // Large blocks: reduce within the block by running the line pipeline on
    // the inverse (the block is fully connected, so a line circuit complies).
    auto inv = b.inverse();
    if (!inv) fail(Errc::kInvalidArgument, "singular diagonal block");
    return asap_layers(synth_lnn(*inv));
  }

  int d1() const override {
    return mode_ == AllToAllMode::kBasic ? 1 + p_ : 3 + p_ / 2 + ceil_log2(p_);
  }
  int d2() const override {
    return mode_ == AllToAllMode::kBasic ? 2 + p_ : 4 + p_ / 2 + ceil_log2(p_);
  }
  int dstar() const override { return t3_ ? t3_->max_depth : 5 * p_; }
  const char* name() const override {
    return mode_ == AllToAllMode::kBasic ? "alltoall-basic" : "alltoall-improved";
  }

 private:
  int p_;
  AllToAllMode mode_;
  const DepthTable* t3_;
};

Strategy resolve_strategy(Strategy s, const BlockLineLayout& lay) {
  if (s != Strategy::kAuto) return s;
  if (lay.p == 1) return Strategy::kClosedForm;
  if (lay.descriptor.rfind("grid:2x", 0) == 0) return Strategy::kCombined;
  if (is_complete(lay.local_graph))
    return lay.p <= 3 ? Strategy::kTable : Strategy::kAllToAllImproved;
  return Strategy::kTable;
}

void merge_round(std::vector<std::vector<CnotGate>>& round_layers,
                 const std::vector<std::vector<CnotGate>>& unit) {
  if (unit.size() > round_layers.size()) round_layers.resize(unit.size());
  for (std::size_t i = 0; i < unit.size(); ++i)
    round_layers[i].insert(round_layers[i].end(), unit[i].begin(), unit[i].end());
}

std::size_t run_sweep(LabeledOperator& op, const BlockLineLayout& lay, const LocalSolver& solver,
                      int step, bool check, std::vector<std::vector<CnotGate>>& sink) {
  std::size_t emitted = 0;
  for (const auto& round : sorting_network(lay.m)) {
    std::vector<std::vector<CnotGate>> round_layers;
    for (int b : round) merge_round(round_layers, sort_two_block_labels(op, b, step, lay, solver));
    for (auto& layer : round_layers) {
      if (layer.empty()) continue;
      sink.push_back(std::move(layer));
      ++emitted;
    }
    // The full step-2 condition (zeros above blocks with larger labels) only
    // holds once the network finishes; per round we get the step-1 part.
    if (check && !check_invariant(LabelInvariant::kBlockStep1, op))
      fail(Errc::kVerify, "block labelling invariant violated during a sweep round");
  }
  if (check) {
    // With a single block there are no pair moves, so the sweep cannot (and
    // need not) reorder labels: step 3 reduces the lone block regardless.
    if (lay.m > 1) {
      bool sorted_now = true;
      for (std::size_t i = 0; i < op.labels.size(); ++i) sorted_now &= op.labels[i] == (int)i;
      if (!sorted_now) fail(Errc::kVerify, "sweep did not sort the labels");
    }
    if (step == 2 && !check_invariant(LabelInvariant::kBlockStep2, op))
      fail(Errc::kVerify, "operator is not block diagonal after the reduction sweep");
  }
  return emitted;
}

std::size_t run_step3(LabeledOperator& op, const BlockLineLayout& lay, const LocalSolver& solver,
                      std::vector<std::vector<CnotGate>>& sink) {
  const int p = lay.p;
  std::vector<std::vector<CnotGate>> round_layers;
  for (int b = 0; b < lay.m; ++b) {
    const int base = b * p;
    std::vector<int> idx(p);
    std::iota(idx.begin(), idx.end(), base);
    const LayeredCircuit lc = solver.p3(op.a.submatrix(idx, idx));
    std::vector<std::vector<CnotGate>> mapped(lc.layers.size());
    for (std::size_t l = 0; l < lc.layers.size(); ++l)
      for (const auto& g : lc.layers[l]) {
        const CnotGate mg{base + g.control, base + g.target};
        op.a.xor_rows(mg.control, mg.target);
        mapped[l].push_back(mg);
      }
    merge_round(round_layers, mapped);
  }
  std::size_t emitted = 0;
  for (auto& layer : round_layers) {
    if (layer.empty()) continue;
    sink.push_back(std::move(layer));
    ++emitted;
  }
  return emitted;
}

// The sink holds the reduction (circuit * operator = identity) in layout
// coordinates; the circuit for the operator is the reverse, mapped back to
// physical qubit ids. Layers are sorted to make the output deterministic.
CnotCircuit assemble(int n, const std::vector<std::vector<CnotGate>>& reduction,
                     const std::vector<int>& pi) {
  CnotCircuit out(n);
  for (auto it = reduction.rbegin(); it != reduction.rend(); ++it) {
    std::vector<CnotGate> mapped;
    mapped.reserve(it->size());
    for (const auto& g : *it) mapped.push_back({pi[g.control], pi[g.target]});
    std::sort(mapped.begin(), mapped.end(), [](const CnotGate& a, const CnotGate& b) {
      return a.control != b.control ? a.control < b.control : a.target < b.target;
    });
    for (const auto& g : mapped) out.add(g.control, g.target);
  }
  return out;
}

}  // namespace

const char* strategy_name(Strategy s) {
  switch (s) {
    case Strategy::kAuto: return "auto";
    case Strategy::kClosedForm: return "closed-form";
    case Strategy::kTable: return "table";
    case Strategy::kAllToAllBasic: return "alltoall-basic";
    case Strategy::kAllToAllImproved: return "alltoall-improved";
    case Strategy::kCombined: return "combined";
  }
  return "auto";
}

Strategy parse_strategy(const std::string& name) {
  for (Strategy s : {Strategy::kAuto, Strategy::kClosedForm, Strategy::kTable,
                     Strategy::kAllToAllBasic, Strategy::kAllToAllImproved, Strategy::kCombined})
    if (name == strategy_name(s)) return s;
  fail(Errc::kInvalidArgument, "unknown strategy: " + name);
}

std::unique_ptr<LocalSolver> make_solver(const BlockLineLayout& layout, Strategy strategy,
                                         TableStore& store, const SynthOptions& opt) {
  BfsOptions bo;
  bo.budget = opt.budget;
  switch (strategy) {
    case Strategy::kClosedForm:
      if (layout.p != 1)
        fail(Errc::kInvalidArgument, "closed-form strategy needs single-qubit blocks");
      return std::make_unique<ClosedFormSolver>();
    case Strategy::kTable: {
      // Request the pair table first: it has the largest state space, so an
      // out-of-budget architecture fails before any other table is built.
      const DepthTable* t2 = &store.get(Problem::kTwo, layout.p, layout.local_graph, bo);
      const DepthTable* t1 = &store.get(Problem::kOne, layout.p, layout.local_graph, bo);
      const DepthTable* t3 = &store.get(Problem::kThree, layout.p, layout.intra_graph, bo);
      return std::make_unique<TableSolver>(t1, t2, t3);
    }
    case Strategy::kAllToAllBasic:
    case Strategy::kAllToAllImproved: {
      if (!is_complete(layout.local_graph))
        fail(Errc::kInvalidArgument, "all-to-all strategy needs fully connected block pairs");
      if (layout.p > 4 && !is_complete(layout.intra_graph))
        fail(Errc::kInvalidArgument, "all-to-all strategy needs fully connected blocks");
      const DepthTable* t3 = nullptr;
      if (layout.p <= 4) t3 = &store.get(Problem::kThree, layout.p, layout.intra_graph, bo);
      const AllToAllMode mode = strategy == Strategy::kAllToAllBasic ? AllToAllMode::kBasic
                                                                     : AllToAllMode::kImproved;
      return std::make_unique<AllToAllSolver>(layout.p, mode, t3);
    }
    case Strategy::kAuto:
    case Strategy::kCombined: break;
  }
  fail(Errc::kInvalidArgument, "strategy must be resolved before building a solver");
}

bool check_invariant(LabelInvariant inv, const LabeledOperator& op) {
  const BitMatrix& a = op.a;
  const int n = static_cast<int>(a.rows());
  if (static_cast<int>(a.cols()) != n || static_cast<int>(op.labels.size()) != n) return false;
  for (int l : op.labels)
    if (l < 0 || l >= n) return false;

  if (inv == LabelInvariant::kRowStep1 || inv == LabelInvariant::kRowStep2) {
    for (int i = 0; i < n; ++i) {
      const int k = op.labels[i];
      if (!a.get(i, k)) return false;
      for (int j = i + 1; j < n; ++j)
        if (a.get(j, k)) return false;
      if (inv == LabelInvariant::kRowStep2)
        for (int j = 0; j < i; ++j)
          if (op.labels[j] < k && a.get(j, k)) return false;
    }
    return true;
  }

  const int p = op.p;
  if (p <= 0 || n % p != 0) return false;
  const int m = n / p;
  std::vector<std::vector<int>> ks(m);
  for (int b = 0; b < m; ++b) {
    ks[b].assign(op.labels.begin() + b * p, op.labels.begin() + (b + 1) * p);
    std::sort(ks[b].begin(), ks[b].end());
  }
  for (int b = 0; b < m; ++b) {
    std::vector<int> rows(p);
    std::iota(rows.begin(), rows.end(), b * p);
    if (a.submatrix(rows, ks[b]).rank() != static_cast<std::size_t>(p)) return false;
    for (int r = (b + 1) * p; r < n; ++r)
      for (int k : ks[b])
        if (a.get(r, k)) return false;
  }
  if (inv == LabelInvariant::kBlockStep2) {
    for (int b = 0; b < m; ++b)
      for (int j = 0; j < b; ++j)
        if (ks[j].back() < ks[b].front())
          for (int r = j * p; r < (j + 1) * p; ++r)
            for (int k : ks[b])
              if (a.get(r, k)) return false;
  }
  return true;
}

std::vector<std::vector<int>> sorting_network(int m) {
  std::vector<std::vector<int>> rounds;
  if (m < 0) fail(Errc::kInvalidArgument, "negative block count");
  rounds.reserve(m);
  for (int r = 0; r < m; ++r) {
    std::vector<int> pairs;
    for (int b = r % 2; b + 1 < m; b += 2) pairs.push_back(b);
    // A parity with no valid pair (m = 2) would waste the round; compare the
    // other brick instead. Re-comparing a sorted pair is a no-op.
    if (pairs.empty())
      for (int b = (r + 1) % 2; b + 1 < m; b += 2) pairs.push_back(b);
    rounds.push_back(std::move(pairs));
  }
  return rounds;
}

std::vector<std::vector<CnotGate>> sort_two_block_labels(LabeledOperator& op, int b, int step,
                                                         const BlockLineLayout& layout,
                                                         const LocalSolver& solver) {
  const int p = layout.p;
  const int n = layout.n;
  if (op.p != p || static_cast<int>(op.a.rows()) != n || static_cast<int>(op.a.cols()) != n ||
      static_cast<int>(op.labels.size()) != n)
    fail(Errc::kInvalidArgument, "operator does not match the layout");
  if (b < 0 || b + 1 >= layout.m) fail(Errc::kInvalidArgument, "pair index out of range");
  if (step != 1 && step != 2) fail(Errc::kInvalidArgument, "step must be 1 or 2");

  const int base = b * p;
  const auto& sigma = layout.pair_sigma[b];
  std::vector<int> sorted_labels(op.labels.begin() + base, op.labels.begin() + base + 2 * p);
  std::sort(sorted_labels.begin(), sorted_labels.end());

  if (step == 2) {
    const int top_max = *std::max_element(op.labels.begin() + base, op.labels.begin() + base + p);
    const int bot_min =
        *std::min_element(op.labels.begin() + base + p, op.labels.begin() + base + 2 * p);
    if (top_max < bot_min) return {};  // pooled labels already split correctly
  }

  LayeredCircuit lc;
  if (step == 1) {
    BitMatrix local(2 * p, p);
    for (int l = 0; l < 2 * p; ++l)
      for (int c = 0; c < p; ++c)
        if (op.a.get(base + sigma[l], sorted_labels[c])) local.set(l, c, true);
    lc = solver.p1(local);
  } else {
    BitMatrix local(2 * p, 2 * p);
    for (int l = 0; l < 2 * p; ++l)
      for (int c = 0; c < 2 * p; ++c)
        if (op.a.get(base + sigma[l], sorted_labels[c])) local.set(l, c, true);
    lc = solver.p2(local);
  }

  std::vector<std::vector<CnotGate>> out;
  out.reserve(lc.layers.size());
  for (const auto& layer : lc.layers) {
    std::vector<CnotGate> mapped;
    mapped.reserve(layer.size());
    for (const auto& g : layer) {
      const CnotGate mg{base + sigma[g.control], base + sigma[g.target]};
      op.a.xor_rows(mg.control, mg.target);
      mapped.push_back(mg);
    }
    out.push_back(std::move(mapped));
  }
  for (int t = 0; t < 2 * p; ++t) op.labels[base + t] = sorted_labels[t];
  return out;
}

CnotCircuit synth(const BitMatrix& a, const BlockLineLayout& layout, const SynthOptions& opt,
                  SynthStats* stats) {
  if (a.rows() != a.cols() || static_cast<int>(a.rows()) != layout.n)
    fail(Errc::kInvalidArgument, "operator size does not match the architecture");
  if (a.rank() != a.rows()) fail(Errc::kSingular, "operator is singular");

  const Strategy strat = resolve_strategy(opt.strategy, layout);
  if (strat == Strategy::kCombined)
    return synth_combined(a, build_combined_layouts(layout.descriptor), opt, stats);

  TableStore private_store;
  TableStore& store = opt.tables ? *opt.tables : private_store;
  const auto solver = make_solver(layout, strat, store, opt);

  const std::vector<int> pi = layout.flatten();
  BitMatrix at = reindex_operator(a, pi);
  UplResult upl = upl_decompose(at);

  std::vector<std::vector<CnotGate>> sink;
  LabeledOperator op1{std::move(upl.v), std::move(upl.labels), layout.p};
  const std::size_t s1 = run_sweep(op1, layout, *solver, 1, opt.check_invariants, sink);

  BitMatrix nw = std::move(at);
  for (const auto& layer : sink)
    for (const auto& g : layer) nw.xor_rows(g.control, g.target);

  std::vector<int> labels2(layout.n);
  for (int i = 0; i < layout.n; ++i) labels2[i] = layout.n - 1 - i;
  LabeledOperator op2{std::move(nw), std::move(labels2), layout.p};
  const std::size_t s2 = run_sweep(op2, layout, *solver, 2, opt.check_invariants, sink);
  const std::size_t s3 = run_step3(op2, layout, *solver, sink);
  if (!op2.a.is_identity()) fail(Errc::kVerify, "internal: sweeps did not reduce the operator");

  if (stats) {
    stats->strategy = solver->name();
    stats->p = layout.p;
    stats->m = layout.m;
    stats->d1 = solver->d1();
    stats->d2 = solver->d2();
    stats->dstar = solver->dstar();
    stats->step1_layers = s1;
    stats->step2_layers = s2;
    stats->step3_layers = s3;
    stats->depth_bound =
        static_cast<std::size_t>(layout.m) * (stats->d1 + stats->d2) + stats->dstar;
  }
  return assemble(layout.n, sink, pi);
}

CnotCircuit synth_lnn(const BitMatrix& a) {
  const BlockLineLayout line = build_layout("line:" + std::to_string(a.rows()));
  SynthOptions opt;
  opt.strategy = Strategy::kClosedForm;
  return synth(a, line, opt);
}

std::vector<std::vector<CnotGate>> re_block(BitMatrix& a, const BlockLineLayout& coarse,
                                            int p_new, const DepthTable& t3) {
  const int p = coarse.p;
  if (p_new <= 0 || p % p_new != 0) fail(Errc::kInvalidArgument, "new block size must divide p");
  if (static_cast<int>(a.rows()) != coarse.n || a.rows() != a.cols())
    fail(Errc::kInvalidArgument, "operator size does not match the layout");
  const int q = p / p_new;
  // Block-exchange target: the q sub-blocks of size p_new in reversed order.
  BitMatrix tmat(p, p);
  for (int s = 0; s < q; ++s)
    for (int r = 0; r < p_new; ++r) tmat.set(s * p_new + r, (q - 1 - s) * p_new + r, true);

  std::vector<std::vector<CnotGate>> round_layers;
  for (int i = 0; i < coarse.m; ++i) {
    const int base = i * p;
    const int anti = coarse.m - 1 - i;
    std::vector<int> rows(p), cols(p);
    std::iota(rows.begin(), rows.end(), base);
    std::iota(cols.begin(), cols.end(), anti * p);
    const LayeredCircuit lc = solve_p3(a.submatrix(rows, cols) * tmat, t3);
    std::vector<std::vector<CnotGate>> mapped(lc.layers.size());
    for (std::size_t l = 0; l < lc.layers.size(); ++l)
      for (const auto& g : lc.layers[l]) {
        const CnotGate mg{base + g.control, base + g.target};
        a.xor_rows(mg.control, mg.target);
        mapped[l].push_back(mg);
      }
    merge_round(round_layers, mapped);
  }
  std::vector<std::vector<CnotGate>> out;
  for (auto& layer : round_layers)
    if (!layer.empty()) out.push_back(std::move(layer));
  return out;
}

CombinedLayouts build_combined_layouts(const std::string& descriptor) {
  const auto colon = descriptor.find(':');
  const std::string family = descriptor.substr(0, colon);
  int r = 0, c = 0;
  if (colon == std::string::npos ||
      std::sscanf(descriptor.c_str() + colon + 1, "%dx%d", &r, &c) != 2)
    fail(Errc::kParse, "expected <family>:<rows>x<cols>: " + descriptor);

  CombinedLayouts cl;
  BlockLineLayout fine;
  if (family == "grid") {
    const BlockLineLayout g = build_layout(descriptor);
    if (r != 2)
      fail(Errc::kUnsupported, "the combined pass supports grid:2x<c> and altered-grid layouts");
    fine = build_layout("altered-grid:2x" + std::to_string(c));
    if (fine.graph.n != g.graph.n || fine.graph.edges != g.graph.edges)
      fail(Errc::kVerify, "internal: two-row grid views disagree");
    fine.descriptor = descriptor;
  } else if (family == "altered-grid") {
    if (c % 2 != 0)
      fail(Errc::kUnsupported, "the combined pass needs an even number of grid columns");
    fine = build_layout(descriptor);
  } else {
    fail(Errc::kUnsupported, "the combined pass supports grid:2x<c> and altered-grid layouts");
  }
  if (fine.m % 2 != 0)
    fail(Errc::kUnsupported, "the combined pass needs an even number of two-qubit blocks");

  BlockLineLayout co;
  co.descriptor = fine.descriptor;
  co.n = fine.n;
  co.p = 2 * fine.p;
  co.m = fine.m / 2;
  co.graph = fine.graph;
  for (int i = 0; i < co.m; ++i) {
    std::vector<int> blk = fine.blocks[2 * i];
    blk.insert(blk.end(), fine.blocks[2 * i + 1].begin(), fine.blocks[2 * i + 1].end());
    co.blocks.push_back(std::move(blk));
  }
  // Two side-by-side tiles of two vertical dominoes form a 2x4 grid; vertex
  // 2j is the top and 2j+1 the bottom of domino j.
  co.local_graph = ConnectivityGraph::empty(8);
  for (int j = 0; j < 4; ++j) co.local_graph.add_edge(2 * j, 2 * j + 1);
  for (int j = 0; j + 1 < 4; ++j) {
    co.local_graph.add_edge(2 * j, 2 * j + 2);
    co.local_graph.add_edge(2 * j + 1, 2 * j + 3);
  }
  co.intra_graph = ConnectivityGraph::empty(4);
  co.intra_graph.add_edge(0, 1);
  co.intra_graph.add_edge(2, 3);
  co.intra_graph.add_edge(0, 2);
  co.intra_graph.add_edge(1, 3);
  for (int i = 0; i + 1 < co.m; ++i)
    co.pair_sigma.push_back(find_pair_embedding(co.local_graph, co.pair_qubits(i), co.graph));

  cl.coarse = std::move(co);
  cl.fine = std::move(fine);
  return cl;
}

CnotCircuit synth_combined(const BitMatrix& a, const CombinedLayouts& layouts,
                           const SynthOptions& opt, SynthStats* stats) {
  const BlockLineLayout& co = layouts.coarse;
  const BlockLineLayout& fi = layouts.fine;
  if (a.rows() != a.cols() || static_cast<int>(a.rows()) != co.n)
    fail(Errc::kInvalidArgument, "operator size does not match the architecture");
  if (fi.n != co.n || co.p != 2 * fi.p || 2 * co.m != fi.m)
    fail(Errc::kInvalidArgument, "coarse and fine views disagree");
  const std::vector<int> pi = co.flatten();
  if (fi.flatten() != pi) fail(Errc::kInvalidArgument, "coarse and fine views disagree");
  if (a.rank() != a.rows()) fail(Errc::kSingular, "operator is singular");

  TableStore private_store;
  TableStore& store = opt.tables ? *opt.tables : private_store;
  BfsOptions bo;
  bo.budget = opt.budget;
  const DepthTable& t1c = store.get(Problem::kOne, co.p, co.local_graph, bo);
  const DepthTable& t3c = store.get(Problem::kThree, co.p, co.intra_graph, bo);
  const DepthTable& t2f = store.get(Problem::kTwo, fi.p, fi.local_graph, bo);
  const DepthTable& t3f = store.get(Problem::kThree, fi.p, fi.intra_graph, bo);
  const TableSolver coarse_solver(&t1c, nullptr, &t3c);
  const TableSolver fine_solver(nullptr, &t2f, &t3f);

  BitMatrix at = reindex_operator(a, pi);
  UplResult upl = upl_decompose(at);

  std::vector<std::vector<CnotGate>> sink;
  LabeledOperator op1{std::move(upl.v), std::move(upl.labels), co.p};
  const std::size_t s1 = run_sweep(op1, co, coarse_solver, 1, opt.check_invariants, sink);

  BitMatrix nw = std::move(at);
  for (const auto& layer : sink)
    for (const auto& g : layer) nw.xor_rows(g.control, g.target);

  // The coarse pass leaves an invertible 4x4 block on each tile's
  // anti-diagonal; one parallel within-tile pass refines the form to the
  // two-qubit granularity.
  std::size_t sr = 0;
  for (auto& layer : re_block(nw, co, fi.p, t3c)) {
    sink.push_back(std::move(layer));
    ++sr;
  }

  std::vector<int> labels2(fi.n);
  for (int i = 0; i < fi.n; ++i) labels2[i] = fi.n - 1 - i;
  LabeledOperator op2{std::move(nw), std::move(labels2), fi.p};
  const std::size_t s2 = run_sweep(op2, fi, fine_solver, 2, opt.check_invariants, sink);
  const std::size_t s3 = run_step3(op2, fi, fine_solver, sink);
  if (!op2.a.is_identity()) fail(Errc::kVerify, "internal: sweeps did not reduce the operator");

  if (stats) {
    stats->strategy = "combined";
    stats->p = co.p;
    stats->m = co.m;
    stats->d1 = t1c.max_depth;
    stats->d2 = t2f.max_depth;
    stats->dstar = t3c.max_depth + t3f.max_depth;
    stats->step1_layers = s1 + sr;
    stats->step2_layers = s2;
    stats->step3_layers = s3;
    stats->depth_bound = static_cast<std::size_t>(co.m) * t1c.max_depth + t3c.max_depth +
                         static_cast<std::size_t>(fi.m) * t2f.max_depth + t3f.max_depth;
  }
  return assemble(co.n, sink, pi);
}

}  // namespace gf2synth
