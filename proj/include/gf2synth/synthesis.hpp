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

#include <memory>
#include <string>
#include <vector>

#include "gf2synth/bit_matrix.hpp"
#include "gf2synth/circuit.hpp"
#include "gf2synth/depth_table.hpp"
#include "gf2synth/local_solvers.hpp"
#include "gf2synth/topology.hpp"

namespace gf2synth {

enum class Strategy {
  kAuto,
  kClosedForm,        // single-qubit blocks, fixed two-gate/three-gate boxes
  kTable,             // exhaustive local depth tables
  kAllToAllBasic,     // fully connected block pairs, weight-k flip schedule
  kAllToAllImproved,  // fully connected block pairs, balanced flip schedule
  kCombined,          // block size 4 pass re-blocked to block size 2
};

const char* strategy_name(Strategy s);
Strategy parse_strategy(const std::string& name);

struct SynthOptions {
  Strategy strategy = Strategy::kAuto;
  TableStore* tables = nullptr;  // shared table store; a private one is used if null
  std::uint64_t budget = kDefaultBudget;
  // Re-verify the block labelling invariants after every sweep round
  // (diagnostic; fails with Errc::kVerify on violation).
  bool check_invariants = false;
};

struct SynthStats {
  std::string strategy;
  int p = 0;
  int m = 0;
  int d1 = 0, d2 = 0, dstar = 0;
  std::size_t step1_layers = 0, step2_layers = 0, step3_layers = 0;
  std::size_t depth_bound = 0;
};

// Abstract interface the sweeps drive; implementations wire the closed forms,
// the depth tables or the all-to-all solvers to one architecture.
class LocalSolver {
 public:
  virtual ~LocalSolver() = default;
  virtual LayeredCircuit p1(const BitMatrix& b) const = 0;
  virtual LayeredCircuit p2(const BitMatrix& b) const = 0;
  virtual LayeredCircuit p3(const BitMatrix& b) const = 0;
  virtual int d1() const = 0;
  virtual int d2() const = 0;
  virtual int dstar() const = 0;
  virtual const char* name() const = 0;
};

std::unique_ptr<LocalSolver> make_solver(const BlockLineLayout& layout, Strategy strategy,
                                         TableStore& store, const SynthOptions& opt);

// An operator together with per-row column labels, as maintained by the
// sorting sweeps (rows are in layout order, labels are column indices).
struct LabeledOperator {
  BitMatrix a;
  std::vector<int> labels;
  int p = 1;
};

enum class LabelInvariant {
  kRowStep1 = 1,    // a[i][labels[i]] = 1 with zeros below
  kRowStep2 = 2,    // additionally zeros above in rows with smaller labels
  kBlockStep1 = 3,  // per-block: own-label submatrix invertible, zeros below
  kBlockStep2 = 4,  // additionally zeros above in blocks with smaller labels
};

bool check_invariant(LabelInvariant inv, const LabeledOperator& op);

// Odd-even transposition rounds for m blocks: round r holds the left indices
// b = r mod 2, r mod 2 + 2, ... of the pairs (b, b+1) it compares. Running
// all m rounds sorts any initial labelling.
std::vector<std::vector<int>> sorting_network(int m);

// One comparator of the sweep: pools the labels of blocks b and b+1 of op,
// solves the local problem (step 1 or 2) so the smaller half moves to block
// b, updates op in place, and returns the emitted layers in layout row
// indices. No-op (step 2) or zero layers (step 1) when already ordered.
std::vector<std::vector<CnotGate>> sort_two_block_labels(LabeledOperator& op, int b, int step,
                                                         const BlockLineLayout& layout,
                                                         const LocalSolver& solver);

// Synthesizes a connectivity-compliant CNOT circuit for the invertible
// operator a on the given architecture. The result satisfies
// simulate() == a, uses only edges of layout.graph, and its depth is at most
// m*(d1+d2) + dstar for the solver's per-round depths.
CnotCircuit synth(const BitMatrix& a, const BlockLineLayout& layout, const SynthOptions& opt = {},
                  SynthStats* stats = nullptr);

// Line architecture with single-qubit blocks; depth at most 5n.
CnotCircuit synth_lnn(const BitMatrix& a);

// Refines a block-northwest matrix from the coarse granularity to blocks of
// p_new (a divisor of coarse.p): one parallel within-block pass maps each
// invertible anti-diagonal block B to the block-exchange form, which is
// northwest at the finer granularity with identity anti-diagonal blocks.
// Applies the emitted layers to a in place and returns them; added depth is
// at most the table maximum. t3 must be a Problem-3 table on coarse blocks.
std::vector<std::vector<CnotGate>> re_block(BitMatrix& a, const BlockLineLayout& coarse,
                                            int p_new, const DepthTable& t3);

// The two nested views used by the combined pass: the same qubits read as a
// chain of 4-qubit tiles and as the chain of their 2-qubit halves.
struct CombinedLayouts {
  BlockLineLayout coarse;
  BlockLineLayout fine;
};

// Supported descriptors: grid:2x<c> and altered-grid:<r>x<c> with an even
// number of columns.
CombinedLayouts build_combined_layouts(const std::string& descriptor);

// Runs the size-4 triangularisation sweep, re-blocks the result to size-2
// granularity with one parallel within-tile pass, then finishes with the
// size-2 sweep; depth at most m4*d1(4) + dstar(4) + m2*d2(2) + dstar(2).
CnotCircuit synth_combined(const BitMatrix& a, const CombinedLayouts& layouts,
                           const SynthOptions& opt = {}, SynthStats* stats = nullptr);

}  // namespace gf2synth
