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
#include <string>
#include <utility>
#include <vector>

#include "gf2synth/circuit.hpp"

namespace gf2synth {

// Undirected connectivity graph on vertices 0..n-1; edges normalized (u < v),
// sorted, unique.
struct ConnectivityGraph {
  int n = 0;
  std::vector<std::pair<int, int>> edges;

  static ConnectivityGraph empty(int n);
  static ConnectivityGraph path(int n);
  static ConnectivityGraph complete(int n);

  void add_edge(int u, int v);
  bool has_edge(int u, int v) const;
  std::size_t degree(int v) const;
};

// One parallel layer of CNOTs supported by a graph: an orientation of a
// nonempty matching. Applying a move twice is the identity.
struct Move {
  std::vector<CnotGate> gates;
};

// Every oriented nonempty matching of g, in a fixed deterministic order:
// matchings are enumerated depth-first over lexicographically sorted edges
// (each matching emitted when formed), and for a matching of k edges the 2^k
// orientations are emitted in binary-counter order, bit i flipping edge i.
std::vector<Move> oriented_matchings(const ConnectivityGraph& g);

struct ComplianceReport {
  bool ok = true;
  std::vector<std::size_t> violating_gates;  // indices into circuit.gates()
};

// Checks that every gate acts on an edge of g.
ComplianceReport check_compliance(const CnotCircuit& circuit, const ConnectivityGraph& g);

// A block-line architecture: an ordered chain of m blocks of p qubits whose
// consecutive pairs all induce the same 2p-qubit "local" graph (up to a
// block-preserving isomorphism recorded in pair_sigma).
struct BlockLineLayout {
  std::string descriptor;
  int n = 0;  // total qubits
  int p = 0;  // block size
  int m = 0;  // number of blocks

  std::vector<std::vector<int>> blocks;  // physical qubit ids, block by block
  ConnectivityGraph graph;               // edges synthesis may use
  ConnectivityGraph local_graph;         // canonical two-block graph on 2p vertices
  ConnectivityGraph intra_graph;         // canonical within-block graph on p vertices

  // pair_sigma[i][l] = offset in (blocks[i] ++ blocks[i+1]) hosting canonical
  // local vertex l; a block-preserving isomorphism from local_graph onto the
  // induced subgraph of graph on that pair.
  std::vector<std::vector<int>> pair_sigma;

  std::vector<int> flatten() const;                 // blocks concatenated
  std::vector<int> pair_qubits(int i) const;        // blocks[i] ++ blocks[i+1]
  std::vector<int> pair_map(int i) const;           // canonical local vertex -> physical qubit
};

// Builds a layout from a descriptor:
//   line:<n>
//   ladder:<w>x<len>         w in {2,3,4}
//   ladder-diag:<w>x<len>
//   grid:<r>x<c>             r, c even
//   grid-diag:<r>x<c>
//   altered-grid:<r>x<c>     r even; grid columns chained serpentine as
//                            2-qubit dominoes, with one extra rail edge
//                            closing each band-to-band turn into a 4-cycle
//   blocks-full:p=<p>,m=<m>
// Throws Errc::kParse for malformed descriptors and Errc::kInvalidArgument
// for out-of-range dimensions.
BlockLineLayout build_layout(const std::string& descriptor);

// Block-preserving isomorphism from `local` onto the subgraph of `global`
// induced by pair_qubits (first half = one block, second half = the next).
// Throws Errc::kUnsupported if none exists.
std::vector<int> find_pair_embedding(const ConnectivityGraph& local,
                                     const std::vector<int>& pair_qubits,
                                     const ConnectivityGraph& global);

}  // namespace gf2synth
