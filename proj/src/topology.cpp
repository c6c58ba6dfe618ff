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

#include "gf2synth/topology.hpp"

#include <algorithm>
#include <cassert>
#include <charconv>
#include <functional>

#include "gf2synth/error.hpp"

namespace gf2synth {

ConnectivityGraph ConnectivityGraph::empty(int n) {
  ConnectivityGraph g;
  g.n = n;
  return g;
}

ConnectivityGraph ConnectivityGraph::path(int n) {
  ConnectivityGraph g = empty(n);
  for (int i = 0; i + 1 < n; ++i) g.add_edge(i, i + 1);
  return g;
}

ConnectivityGraph ConnectivityGraph::complete(int n) {
  ConnectivityGraph g = empty(n);
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) g.add_edge(u, v);
  return g;
}

void ConnectivityGraph::add_edge(int u, int v) {
  if (u == v || u < 0 || v < 0 || u >= n || v >= n)
    fail(Errc::kInvalidArgument, "edge endpoint out of range");
  std::pair<int, int> e{std::min(u, v), std::max(u, v)};
  auto it = std::lower_bound(edges.begin(), edges.end(), e);
  if (it == edges.end() || *it != e) edges.insert(it, e);
}

bool ConnectivityGraph::has_edge(int u, int v) const {
  std::pair<int, int> e{std::min(u, v), std::max(u, v)};
  return std::binary_search(edges.begin(), edges.end(), e);
}

std::size_t ConnectivityGraph::degree(int v) const {
  std::size_t d = 0;
  for (const auto& e : edges)
    if (e.first == v || e.second == v) ++d;
  return d;
}

std::vector<Move> oriented_matchings(const ConnectivityGraph& g) {
  std::vector<Move> moves;
  std::vector<std::pair<int, int>> cur;
  std::vector<char> used(static_cast<std::size_t>(g.n), 0);

  std::function<void(std::size_t)> rec = [&](std::size_t start) {
    for (std::size_t i = start; i < g.edges.size(); ++i) {
      auto [u, v] = g.edges[i];
      if (used[u] || used[v]) continue;
      cur.push_back(g.edges[i]);
      used[u] = used[v] = 1;
      std::size_t k = cur.size();
      for (std::uint32_t bits = 0; bits < (std::uint32_t(1) << k); ++bits) {
        Move mv;
        mv.gates.reserve(k);
        for (std::size_t j = 0; j < k; ++j) {
          auto [a, b] = cur[j];
          if ((bits >> j) & 1)
            mv.gates.push_back(CnotGate{b, a});
          else
            mv.gates.push_back(CnotGate{a, b});
        }
        moves.push_back(std::move(mv));
      }
      rec(i + 1);
      used[u] = used[v] = 0;
      cur.pop_back();
    }
  };
  rec(0);
  return moves;
}

ComplianceReport check_compliance(const CnotCircuit& circuit, const ConnectivityGraph& g) {
  if (circuit.n_qubits() != g.n)
    fail(Errc::kInvalidArgument, "circuit width does not match graph size");
  ComplianceReport rep;
  const auto& gates = circuit.gates();
  for (std::size_t i = 0; i < gates.size(); ++i)
    if (!g.has_edge(gates[i].control, gates[i].target)) rep.violating_gates.push_back(i);
  rep.ok = rep.violating_gates.empty();
  return rep;
}

std::vector<int> BlockLineLayout::flatten() const {
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(n));
  for (const auto& b : blocks) out.insert(out.end(), b.begin(), b.end());
  return out;
}

std::vector<int> BlockLineLayout::pair_qubits(int i) const {
  std::vector<int> out = blocks[i];
  out.insert(out.end(), blocks[i + 1].begin(), blocks[i + 1].end());
  return out;
}

std::vector<int> BlockLineLayout::pair_map(int i) const {
  std::vector<int> pq = pair_qubits(i);
  const std::vector<int>& sigma = pair_sigma[i];
  std::vector<int> out(pq.size());
  for (std::size_t l = 0; l < pq.size(); ++l) out[l] = pq[sigma[l]];
  return out;
}

std::vector<int> find_pair_embedding(const ConnectivityGraph& local,
                                     const std::vector<int>& pair_qubits,
                                     const ConnectivityGraph& global) {
  int q = local.n;
  if (static_cast<int>(pair_qubits.size()) != q || q % 2 != 0)
    fail(Errc::kInvalidArgument, "pair size does not match local graph");
  int p = q / 2;

  std::vector<std::vector<char>> aloc(q, std::vector<char>(q, 0));
  std::vector<std::vector<char>> aind(q, std::vector<char>(q, 0));
  for (const auto& e : local.edges) aloc[e.first][e.second] = aloc[e.second][e.first] = 1;
  std::size_t induced = 0;
  for (int a = 0; a < q; ++a)
    for (int b = a + 1; b < q; ++b)
      if (global.has_edge(pair_qubits[a], pair_qubits[b])) {
        aind[a][b] = aind[b][a] = 1;
        ++induced;
      }
  if (induced != local.edges.size())
    fail(Errc::kUnsupported, "block pair does not induce the local connectivity pattern");

  std::vector<int> sigma(q, -1);
  std::vector<char> used(q, 0);
  std::function<bool(int)> dfs = [&](int v) -> bool {
    if (v == q) return true;
    int lo = v < p ? 0 : p;
    int hi = v < p ? p : q;
    for (int cand = lo; cand < hi; ++cand) {
      if (used[cand]) continue;
      bool ok = true;
      for (int u = 0; u < v; ++u) {
        if (aloc[u][v] != aind[sigma[u]][cand]) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      sigma[v] = cand;
      used[cand] = 1;
      if (dfs(v + 1)) return true;
      used[cand] = 0;
      sigma[v] = -1;
    }
    return false;
  };
  if (!dfs(0))
    fail(Errc::kUnsupported, "block pair is not isomorphic to the local connectivity pattern");
  return sigma;
}

namespace {

int parse_uint(const std::string& s, const char* what) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size() || value < 0)
    fail(Errc::kParse, std::string("invalid ") + what + " in architecture descriptor: '" + s + "'");
  return value;
}

std::pair<int, int> parse_dims(const std::string& s) {
  std::size_t pos = s.find('x');
  if (pos == std::string::npos)
    fail(Errc::kParse, "expected '<a>x<b>' dimensions in architecture descriptor: '" + s + "'");
  return {parse_uint(s.substr(0, pos), "dimension"), parse_uint(s.substr(pos + 1), "dimension")};
}

void compute_sigmas(BlockLineLayout& lay) {
  lay.pair_sigma.clear();
  for (int i = 0; i + 1 < lay.m; ++i)
    lay.pair_sigma.push_back(find_pair_embedding(lay.local_graph, lay.pair_qubits(i), lay.graph));
}

BlockLineLayout make_line(int n) {
  if (n < 1) fail(Errc::kInvalidArgument, "line needs at least one qubit");
  BlockLineLayout lay;
  lay.n = n;
  lay.p = 1;
  lay.m = n;
  for (int i = 0; i < n; ++i) lay.blocks.push_back({i});
  lay.graph = ConnectivityGraph::path(n);
  lay.local_graph = ConnectivityGraph::path(2);
  lay.intra_graph = ConnectivityGraph::empty(1);
  compute_sigmas(lay);
  return lay;
}

BlockLineLayout make_ladder(int w, int len, bool diag) {
  if (w < 2 || w > 4) fail(Errc::kInvalidArgument, "ladder width must be 2, 3 or 4");
  if (len < 1) fail(Errc::kInvalidArgument, "ladder length must be positive");
  BlockLineLayout lay;
  lay.n = w * len;
  lay.p = w;
  lay.m = len;
  auto id = [&](int r, int c) { return c * w + r; };  // column-major ids
  lay.graph = ConnectivityGraph::empty(lay.n);
  for (int c = 0; c < len; ++c) {
    lay.blocks.emplace_back();
    for (int r = 0; r < w; ++r) lay.blocks.back().push_back(id(r, c));
    for (int r = 0; r + 1 < w; ++r) lay.graph.add_edge(id(r, c), id(r + 1, c));
    if (c + 1 < len) {
      for (int r = 0; r < w; ++r) lay.graph.add_edge(id(r, c), id(r, c + 1));
      if (diag) {
        for (int r = 0; r + 1 < w; ++r) {
          lay.graph.add_edge(id(r, c), id(r + 1, c + 1));
          lay.graph.add_edge(id(r + 1, c), id(r, c + 1));
        }
      }
    }
  }
  lay.local_graph = ConnectivityGraph::empty(2 * w);
  for (int h = 0; h < 2; ++h)
    for (int r = 0; r + 1 < w; ++r) lay.local_graph.add_edge(h * w + r, h * w + r + 1);
  for (int r = 0; r < w; ++r) lay.local_graph.add_edge(r, w + r);
  if (diag) {
    for (int r = 0; r + 1 < w; ++r) {
      lay.local_graph.add_edge(r, w + r + 1);
      lay.local_graph.add_edge(r + 1, w + r);
    }
  }
  lay.intra_graph = ConnectivityGraph::path(w);
  compute_sigmas(lay);
  return lay;
}

BlockLineLayout make_grid(int rows, int cols, bool diag) {
  if (rows < 2 || cols < 2 || rows % 2 || cols % 2)
    fail(Errc::kInvalidArgument, "grid dimensions must be even and at least 2");
  BlockLineLayout lay;
  lay.n = rows * cols;
  lay.p = 4;
  auto id = [&](int r, int c) { return r * cols + c; };  // row-major ids
  lay.graph = ConnectivityGraph::empty(lay.n);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) {
      if (r + 1 < rows) lay.graph.add_edge(id(r, c), id(r + 1, c));
      if (c + 1 < cols) lay.graph.add_edge(id(r, c), id(r, c + 1));
      if (diag && r + 1 < rows && c + 1 < cols) {
        lay.graph.add_edge(id(r, c), id(r + 1, c + 1));
        lay.graph.add_edge(id(r + 1, c), id(r, c + 1));
      }
    }

  // 2x2 tiles chained serpentine band by band; the first column of each tile
  // is the first met in the traversal direction.
  int bands = rows / 2, tiles = cols / 2;
  lay.m = bands * tiles;
  for (int b = 0; b < bands; ++b) {
    for (int t = 0; t < tiles; ++t) {
      int k = (b % 2 == 0) ? t : tiles - 1 - t;
      int c1 = (b % 2 == 0) ? 2 * k : 2 * k + 1;
      int c2 = (b % 2 == 0) ? 2 * k + 1 : 2 * k;
      lay.blocks.push_back({id(2 * b, c1), id(2 * b + 1, c1), id(2 * b, c2), id(2 * b + 1, c2)});
    }
  }

  lay.local_graph = ConnectivityGraph::empty(8);
  for (int c = 0; c < 4; ++c) lay.local_graph.add_edge(2 * c, 2 * c + 1);
  for (int c = 0; c + 1 < 4; ++c) {
    lay.local_graph.add_edge(2 * c, 2 * c + 2);
    lay.local_graph.add_edge(2 * c + 1, 2 * c + 3);
    if (diag) {
      lay.local_graph.add_edge(2 * c, 2 * c + 3);
      lay.local_graph.add_edge(2 * c + 1, 2 * c + 2);
    }
  }
  lay.intra_graph = ConnectivityGraph::empty(4);
  lay.intra_graph.add_edge(0, 1);
  lay.intra_graph.add_edge(2, 3);
  lay.intra_graph.add_edge(0, 2);
  lay.intra_graph.add_edge(1, 3);
  if (diag) {
    lay.intra_graph.add_edge(0, 3);
    lay.intra_graph.add_edge(1, 2);
  }
  compute_sigmas(lay);
  return lay;
}

BlockLineLayout make_altered_grid(int rows, int cols) {
  if (rows < 2 || rows % 2) fail(Errc::kInvalidArgument, "altered grid needs an even number of rows");
  if (cols < 1) fail(Errc::kInvalidArgument, "altered grid needs at least one column");
  BlockLineLayout lay;
  lay.n = rows * cols;
  lay.p = 2;
  auto id = [&](int r, int c) { return r * cols + c; };
  int bands = rows / 2;
  lay.m = bands * cols;
  lay.graph = ConnectivityGraph::empty(lay.n);
  for (int b = 0; b < bands; ++b)
    for (int c = 0; c < cols; ++c) {
      lay.graph.add_edge(id(2 * b, c), id(2 * b + 1, c));
      if (c + 1 < cols) {
        lay.graph.add_edge(id(2 * b, c), id(2 * b, c + 1));
        lay.graph.add_edge(id(2 * b + 1, c), id(2 * b + 1, c + 1));
      }
    }
  // Band-to-band turns: the grid's own vertical link plus one rail edge
  // closing the stacked pair of dominoes into a 4-cycle.
  for (int b = 0; b + 1 < bands; ++b) {
    int cturn = (b % 2 == 0) ? cols - 1 : 0;
    lay.graph.add_edge(id(2 * b + 1, cturn), id(2 * b + 2, cturn));
    lay.graph.add_edge(id(2 * b, cturn), id(2 * b + 3, cturn));
  }
  for (int b = 0; b < bands; ++b)
    for (int t = 0; t < cols; ++t) {
      int c = (b % 2 == 0) ? t : cols - 1 - t;
      lay.blocks.push_back({id(2 * b, c), id(2 * b + 1, c)});
    }
  lay.local_graph = ConnectivityGraph::empty(4);
  lay.local_graph.add_edge(0, 1);
  lay.local_graph.add_edge(2, 3);
  lay.local_graph.add_edge(0, 2);
  lay.local_graph.add_edge(1, 3);
  lay.intra_graph = ConnectivityGraph::path(2);
  compute_sigmas(lay);
  return lay;
}

BlockLineLayout make_blocks_full(int p, int m) {
  if (p < 1 || p > 64) fail(Errc::kInvalidArgument, "block size must be in 1..64");
  if (m < 1) fail(Errc::kInvalidArgument, "block count must be positive");
  BlockLineLayout lay;
  lay.n = p * m;
  lay.p = p;
  lay.m = m;
  lay.graph = ConnectivityGraph::empty(lay.n);
  for (int b = 0; b < m; ++b) {
    lay.blocks.emplace_back();
    for (int i = 0; i < p; ++i) lay.blocks.back().push_back(b * p + i);
  }
  for (int u = 0; u < lay.n; ++u)
    for (int v = u + 1; v < lay.n; ++v)
      if (v / p - u / p <= 1) lay.graph.add_edge(u, v);
  lay.local_graph = ConnectivityGraph::complete(2 * p);
  lay.intra_graph = ConnectivityGraph::complete(p);
  compute_sigmas(lay);
  return lay;
}

}  // namespace

BlockLineLayout build_layout(const std::string& descriptor) {
  std::size_t colon = descriptor.find(':');
  if (colon == std::string::npos)
    fail(Errc::kParse, "architecture descriptor needs the form '<family>:<params>': '" + descriptor + "'");
  std::string family = descriptor.substr(0, colon);
  std::string rest = descriptor.substr(colon + 1);

  BlockLineLayout lay;
  if (family == "line") {
    lay = make_line(parse_uint(rest, "qubit count"));
  } else if (family == "ladder" || family == "ladder-diag") {
    auto [w, len] = parse_dims(rest);
    lay = make_ladder(w, len, family == "ladder-diag");
  } else if (family == "grid" || family == "grid-diag") {
    auto [r, c] = parse_dims(rest);
    lay = make_grid(r, c, family == "grid-diag");
  } else if (family == "altered-grid") {
    auto [r, c] = parse_dims(rest);
    lay = make_altered_grid(r, c);
  } else if (family == "blocks-full") {
    int p = -1, m = -1;
    std::size_t pos = 0;
    std::string s = rest;
    while (pos < s.size()) {
      std::size_t comma = s.find(',', pos);
      std::string item = s.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
      std::size_t eq = item.find('=');
      if (eq == std::string::npos)
        fail(Errc::kParse, "blocks-full parameters must be 'p=<p>,m=<m>'");
      std::string key = item.substr(0, eq);
      int value = parse_uint(item.substr(eq + 1), "blocks-full parameter");
      if (key == "p")
        p = value;
      else if (key == "m")
        m = value;
      else
        fail(Errc::kParse, "unknown blocks-full parameter '" + key + "'");
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
    if (p < 0 || m < 0) fail(Errc::kParse, "blocks-full needs both p=<p> and m=<m>");
    lay = make_blocks_full(p, m);
  } else {
    fail(Errc::kParse, "unknown architecture family '" + family + "'");
  }
  lay.descriptor = descriptor;
  return lay;
}

}  // namespace gf2synth
