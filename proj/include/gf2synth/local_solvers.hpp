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

#include <utility>
#include <vector>

#include "gf2synth/bit_matrix.hpp"
#include "gf2synth/circuit.hpp"
#include "gf2synth/depth_table.hpp"

namespace gf2synth {

// Table-replay solvers. Each walks the backpointers of an exhaustive depth
// table from the given state down to the problem root, emitting one layer per
// move; the returned layer count equals the state's tabulated depth.
//
// solve_p1: b is 2p x p of full column rank; the circuit maps b to a matrix
//           with an invertible top block and a zero bottom block.
// solve_p2: b is 2p x 2p of the form [B1 B3; B2 0] with B2, B3 invertible;
//           the circuit maps b to block-diagonal with invertible blocks.
// solve_p3: a is p x p invertible; the circuit maps a to the identity.
LayeredCircuit solve_p1(const BitMatrix& b, const DepthTable& t);
LayeredCircuit solve_p2(const BitMatrix& b, const DepthTable& t);
LayeredCircuit solve_p3(const BitMatrix& a, const DepthTable& t);

// Closed forms for single-qubit blocks on one pair (qubit 0 above qubit 1).
LayeredCircuit box_p1_closed(const BitMatrix& b);
LayeredCircuit box_p2_closed(const BitMatrix& b);

// Partitions the support of a 0/1 matrix into k partial permutations, where
// k is the maximum row or column weight (a minimum edge colouring of the
// bipartite support graph). Returns k layers of (row, col) positions, each
// layer nonempty with distinct rows and distinct columns.
std::vector<std::vector<std::pair<int, int>>> matching_decomposition(const BitMatrix& b);

enum class AllToAllMode { kBasic, kImproved };

// Solvers for all-to-all connected block pairs of arbitrary block size p
// (qubits 0..p-1 form the top block, p..2p-1 the bottom block).
//
// alltoall_solve_p1: b is 2p x p of full column rank; zeroes the bottom block.
//   Depth at most 1 + p in basic mode and 3 + floor(p/2) + ceil(log2 p) in
//   improved mode (improved falls back to basic if its weight-balancing
//   search fails, which the sizes used here never hit).
// alltoall_solve_p2: b is [B1 B3; B2 0] with B2, B3 invertible; produces a
//   block-diagonal result. Depth at most 2 + p (basic) or
//   4 + floor(p/2) + ceil(log2 p) (improved).
LayeredCircuit alltoall_solve_p1(const BitMatrix& b, AllToAllMode mode);
LayeredCircuit alltoall_solve_p2(const BitMatrix& b, AllToAllMode mode);

}  // namespace gf2synth
