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

#include <algorithm>
#include <cassert>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "gf2synth/error.hpp"

namespace gf2synth {

std::uint64_t pack_columns(const BitMatrix& m) {
  if (m.rows() > 8 || m.cols() > 8) fail(Errc::kInvalidArgument, "matrix too large to pack");
  std::uint64_t s = 0;
  for (std::size_t c = 0; c < m.cols(); ++c) {
    std::uint64_t byte = 0;
    for (std::size_t r = 0; r < m.rows(); ++r)
      if (m.get(r, c)) byte |= std::uint64_t(1) << r;
    s |= byte << (8 * c);
  }
  return s;
}

BitMatrix unpack_columns(std::uint64_t s, int rows, int cols) {
  BitMatrix m(static_cast<std::size_t>(rows), static_cast<std::size_t>(cols));
  for (int c = 0; c < cols; ++c) {
    std::uint64_t byte = (s >> (8 * c)) & 0xFF;
    for (int r = 0; r < rows; ++r)
      if ((byte >> r) & 1) m.set(r, c, true);
  }
  return m;
}

std::uint64_t rcef_packed(std::uint64_t s, int nrow, int ncol) {
  std::uint8_t col[8];
  for (int j = 0; j < ncol; ++j) col[j] = static_cast<std::uint8_t>((s >> (8 * j)) & 0xFF);
  // Pivot columns in pivot-row order; values are read only after the sweep so
  // that eliminations at later pivot rows reach earlier pivot columns too.
  int order[8];
  int nout = 0;
  std::uint8_t used = 0;
  for (int r = 0; r < nrow && nout < ncol; ++r) {
    int pc = -1;
    for (int j = 0; j < ncol; ++j) {
      if (!((used >> j) & 1) && ((col[j] >> r) & 1)) {
        pc = j;
        break;
      }
    }
    if (pc < 0) continue;
    used |= static_cast<std::uint8_t>(1 << pc);
    for (int j = 0; j < ncol; ++j)
      if (j != pc && ((col[j] >> r) & 1)) col[j] ^= col[pc];
    order[nout++] = pc;
  }
  std::uint64_t res = 0;
  for (int j = 0; j < nout; ++j) res |= std::uint64_t(col[order[j]]) << (8 * j);
  return res;
}

std::uint64_t DepthTable::root() const {
  std::uint64_t s = 0;
  switch (problem) {
    case Problem::kOne:
      for (int j = 0; j < p; ++j) s |= std::uint64_t(1) << (j + 8 * j);
      break;
    case Problem::kTwo:
      for (int j = 0; j < 2 * p; ++j) s |= std::uint64_t(1) << (j + 8 * j);
      break;
    case Problem::kThree:
      for (int j = 0; j < p; ++j) s |= std::uint64_t(1) << (j + 8 * j);
      break;
  }
  return s;
}

std::uint64_t DepthTable::canon(std::uint64_t s) const {
  switch (problem) {
    case Problem::kOne:
      return rcef_packed(s, state_rows, state_cols);
    case Problem::kTwo: {
      std::uint64_t lo = rcef_packed(s, state_rows, p);
      std::uint64_t hi = rcef_packed(s >> (8 * p), state_rows, p);
      return lo | (hi << (8 * p));
    }
    case Problem::kThree:
      return s;
  }
  return s;
}

namespace {

// Saturating multiply.
std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > UINT64_MAX / a) return UINT64_MAX;
  return a * b;
}

std::uint64_t gaussian_binomial(int n, int k) {
  // Product over i of (2^(n-i) - 1) / (2^(i+1) - 1); exact at every step when
  // evaluated as a telescoping rational with 128-bit intermediates.
  unsigned __int128 num = 1;
  std::uint64_t result = 1;
  for (int i = 0; i < k; ++i) {
    unsigned __int128 top = (static_cast<unsigned __int128>(1) << (n - i)) - 1;
    unsigned __int128 bot = (static_cast<unsigned __int128>(1) << (i + 1)) - 1;
    num = static_cast<unsigned __int128>(result) * top;
    unsigned __int128 q = num / bot;
    if (num % bot != 0) {
      // Fall back to full-product evaluation; with k <= 8 this cannot happen
      // for the sizes used here, but keep the guard honest.
      fail(Errc::kInvalidArgument, "gaussian binomial evaluation error");
    }
    if (q > UINT64_MAX) return UINT64_MAX;
    result = static_cast<std::uint64_t>(q);
  }
  return result;
}

std::uint64_t gl_order(int p) {
  if (p >= 63) return UINT64_MAX;
  std::uint64_t result = 1;
  for (int i = 0; i < p; ++i) {
    std::uint64_t factor = (std::uint64_t(1) << p) - (std::uint64_t(1) << i);
    result = sat_mul(result, factor);
  }
  return result;
}

bool state_counts_for_histogram(const DepthTable& t, std::uint64_t canon_state) {
  if (t.problem != Problem::kTwo) return true;
  // Instance class: right span equals the span of the first p coordinates.
  for (int j = 0; j < t.p; ++j) {
    std::uint64_t byte = (canon_state >> (8 * (t.p + j))) & 0xFF;
    if (byte != (std::uint64_t(1) << j)) return false;
  }
  return true;
}

}  // namespace

std::uint64_t state_space_size(Problem problem, int p) {
  switch (problem) {
    case Problem::kOne:
      return gaussian_binomial(2 * p, p);
    case Problem::kTwo: {
      if (p > 7) return UINT64_MAX;
      std::uint64_t a = gaussian_binomial(2 * p, p);
      return sat_mul(a, std::uint64_t(1) << (p * p));
    }
    case Problem::kThree:
      return gl_order(p);
  }
  return UINT64_MAX;
}

std::uint64_t table_fingerprint(Problem problem, int p, const ConnectivityGraph& g) {
  std::ostringstream text;
  text << "P" << static_cast<int>(problem) << "|p=" << p << "|n=" << g.n << "|edges=";
  for (std::size_t i = 0; i < g.edges.size(); ++i) {
    if (i) text << ",";
    text << g.edges[i].first << "-" << g.edges[i].second;
  }
  std::uint64_t h = 14695981039346656037ULL;
  for (char ch : text.str()) {
    h ^= static_cast<unsigned char>(ch);
    h *= 1099511628211ULL;
  }
  return h;
}

DepthTable bfs_table(Problem problem, int p, const ConnectivityGraph& g, const BfsOptions& opt) {
  DepthTable t;
  t.problem = problem;
  t.p = p;
  switch (problem) {
    case Problem::kOne:
      t.state_rows = 2 * p;
      t.state_cols = p;
      break;
    case Problem::kTwo:
      t.state_rows = 2 * p;
      t.state_cols = 2 * p;
      break;
    case Problem::kThree:
      t.state_rows = p;
      t.state_cols = p;
      break;
  }
  if (p < 1 || t.state_rows > 8 || t.state_cols > 8)
    fail(Errc::kInvalidArgument, "block size out of range for exhaustive search");
  int want_vertices = (problem == Problem::kThree) ? p : 2 * p;
  if (g.n != want_vertices)
    fail(Errc::kInvalidArgument, "graph size does not match problem block size");

  std::uint64_t space = state_space_size(problem, p);
  if (space > opt.budget)
    fail(Errc::kBudget, "state space of " + std::to_string(space) +
                            " canonical states exceeds the search budget of " +
                            std::to_string(opt.budget));
  if (space > kHashTierLimit)
    fail(Errc::kBudget, "state space of " + std::to_string(space) +
                            " canonical states exceeds the in-memory table limit");

  t.graph = g;
  t.fingerprint = table_fingerprint(problem, p, g);
  t.moves = oriented_matchings(g);
  if (t.moves.size() >= kRootMove) fail(Errc::kInvalidArgument, "too many moves for table encoding");

  std::uint64_t root = t.root();
  assert(t.canon(root) == root);
  t.entries.reserve(static_cast<std::size_t>(space) * 2);
  t.entries.emplace(root, TableEntry{0, kRootMove});

  std::vector<std::uint64_t> counts;
  std::uint64_t counted = 0;
  if (state_counts_for_histogram(t, root)) {
    counts.push_back(1);
    counted = 1;
  } else {
    counts.push_back(0);
  }
  std::uint64_t class_target =
      (problem == Problem::kTwo && opt.early_stop) ? (std::uint64_t(1) << (p * p)) : UINT64_MAX;

  std::vector<std::uint64_t> frontier{root};
  std::vector<std::uint64_t> next;
  bool stopped = false;
  while (!frontier.empty() && !stopped) {
    next.clear();
    std::uint64_t new_count = 0;
    std::uint8_t depth = static_cast<std::uint8_t>(counts.size());
    for (std::uint64_t s : frontier) {
      for (std::size_t mi = 0; mi < t.moves.size() && !stopped; ++mi) {
        std::uint64_t u = s;
        for (const CnotGate& gate : t.moves[mi].gates)
          u = apply_gate_packed(u, gate.control, gate.target);
        std::uint64_t c = t.canon(u);
        auto [it, fresh] = t.entries.emplace(c, TableEntry{depth, static_cast<std::uint16_t>(mi)});
        if (!fresh) continue;
        if (t.entries.size() > opt.budget)
          fail(Errc::kBudget, "explored more than " + std::to_string(opt.budget) +
                                  " canonical states; increase the search budget");
        next.push_back(c);
        if (state_counts_for_histogram(t, c)) {
          ++new_count;
          ++counted;
          if (counted >= class_target) {
            stopped = true;
            t.early_stopped = true;
          }
        }
      }
      if (stopped) break;
    }
    counts.push_back(new_count);
    frontier.swap(next);
  }

  while (counts.size() > 1 && counts.back() == 0) counts.pop_back();
  t.counts_by_depth = std::move(counts);
  t.counted_total = counted;
  t.max_depth = static_cast<int>(t.counts_by_depth.size()) - 1;
  t.states_explored = t.entries.size();
  return t;
}

namespace {

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}
void put_u64(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}
std::uint32_t get_u32(const std::string& in, std::size_t& pos) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= std::uint32_t(static_cast<unsigned char>(in[pos++])) << (8 * i);
  return v;
}
std::uint64_t get_u64(const std::string& in, std::size_t& pos) {
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= std::uint64_t(static_cast<unsigned char>(in[pos++])) << (8 * i);
  return v;
}

constexpr char kMagic[8] = {'G', 'F', '2', 'T', 'B', 'L', '1', '\n'};

std::string fingerprint_hex(std::uint64_t fp) {
  static const char* digits = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i) {
    s[i] = digits[fp & 0xF];
    fp >>= 4;
  }
  return s;
}

}  // namespace

void save_table(const DepthTable& t, const std::string& path) {
  nlohmann::ordered_json header;
  header["problem"] = static_cast<int>(t.problem);
  header["p"] = t.p;
  header["fingerprint"] = fingerprint_hex(t.fingerprint);
  header["moves"] = t.moves.size();
  header["counts_by_depth"] = t.counts_by_depth;
  header["counted_total"] = t.counted_total;
  header["max_depth"] = t.max_depth;
  header["states_explored"] = t.states_explored;
  header["early_stopped"] = t.early_stopped;
  std::string hdr = header.dump();

  std::string out;
  out.append(kMagic, sizeof(kMagic));
  put_u32(out, static_cast<std::uint32_t>(hdr.size()));
  out += hdr;
  put_u64(out, t.entries.size());
  // Sort records for a deterministic file independent of hash-map order.
  std::vector<std::pair<std::uint64_t, TableEntry>> recs(t.entries.begin(), t.entries.end());
  std::sort(recs.begin(), recs.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  for (const auto& [key, e] : recs) {
    put_u64(out, key);
    out.push_back(static_cast<char>(e.depth));
    out.push_back(static_cast<char>(e.move & 0xFF));
    out.push_back(static_cast<char>((e.move >> 8) & 0xFF));
  }

  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) fail(Errc::kIo, "cannot open '" + path + "' for writing");
  f.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!f) fail(Errc::kIo, "failed writing table to '" + path + "'");
}

DepthTable load_table(const std::string& path, Problem problem, int p, const ConnectivityGraph& g) {
  std::ifstream f(path, std::ios::binary);
  if (!f) fail(Errc::kIo, "cannot open table file '" + path + "'");
  std::ostringstream buf;
  buf << f.rdbuf();
  std::string in = buf.str();

  if (in.size() < sizeof(kMagic) + 4 || in.compare(0, sizeof(kMagic), kMagic, sizeof(kMagic)) != 0)
    fail(Errc::kParse, "'" + path + "' is not a depth table file");
  std::size_t pos = sizeof(kMagic);
  std::uint32_t hdr_len = get_u32(in, pos);
  if (pos + hdr_len > in.size()) fail(Errc::kParse, "truncated table header in '" + path + "'");
  nlohmann::json header;
  try {
    header = nlohmann::json::parse(in.substr(pos, hdr_len));
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::kParse, std::string("bad table header: ") + e.what());
  }
  pos += hdr_len;

  DepthTable t;
  t.problem = problem;
  t.p = p;
  t.state_rows = (problem == Problem::kThree) ? p : 2 * p;
  t.state_cols = (problem == Problem::kTwo) ? 2 * p : p;
  t.graph = g;
  t.fingerprint = table_fingerprint(problem, p, g);
  t.moves = oriented_matchings(g);

  if (header.value("problem", -1) != static_cast<int>(problem) || header.value("p", -1) != p ||
      header.value("fingerprint", std::string()) != fingerprint_hex(t.fingerprint) ||
      header.value("moves", std::size_t(0)) != t.moves.size())
    fail(Errc::kParse, "table file '" + path + "' does not match the requested problem");

  t.counts_by_depth = header.value("counts_by_depth", std::vector<std::uint64_t>{});
  t.counted_total = header.value("counted_total", std::uint64_t(0));
  t.max_depth = header.value("max_depth", 0);
  t.states_explored = header.value("states_explored", std::uint64_t(0));
  t.early_stopped = header.value("early_stopped", false);

  if (pos + 8 > in.size()) fail(Errc::kParse, "truncated table file '" + path + "'");
  std::uint64_t count = get_u64(in, pos);
  if (pos + count * 11 > in.size()) fail(Errc::kParse, "truncated table records in '" + path + "'");
  t.entries.reserve(static_cast<std::size_t>(count) * 2);
  for (std::uint64_t i = 0; i < count; ++i) {
    std::uint64_t key = get_u64(in, pos);
    std::uint8_t depth = static_cast<std::uint8_t>(in[pos++]);
    std::uint16_t move = static_cast<std::uint16_t>(
        static_cast<unsigned char>(in[pos]) | (static_cast<unsigned char>(in[pos + 1]) << 8));
    pos += 2;
    if (move != kRootMove && move >= t.moves.size())
      fail(Errc::kParse, "table record references an unknown move");
    t.entries.emplace(key, TableEntry{depth, move});
  }
  if (t.states_explored != t.entries.size())
    fail(Errc::kParse, "table record count does not match its header");
  return t;
}

const DepthTable& TableStore::get(Problem problem, int p, const ConnectivityGraph& g,
                                  const BfsOptions& opt) {
  std::uint64_t fp = table_fingerprint(problem, p, g);
  auto key = std::make_tuple(static_cast<int>(problem), p, fp);
  auto it = memo_.find(key);
  if (it != memo_.end()) return *it->second;

  std::string path;
  if (!dir_.empty())
    path = dir_ + "/P" + std::to_string(static_cast<int>(problem)) + "-p" + std::to_string(p) +
           "-" + fingerprint_hex(fp) + ".tbl";

  std::unique_ptr<DepthTable> table;
  if (!path.empty()) {
    std::ifstream probe(path, std::ios::binary);
    if (probe.good()) {
      probe.close();
      try {
        table = std::make_unique<DepthTable>(load_table(path, problem, p, g));
      } catch (const Error&) {
        table.reset();  // unreadable cache entry: recompute
      }
    }
  }
  bool computed = false;
  if (!table) {
    table = std::make_unique<DepthTable>(bfs_table(problem, p, g, opt));
    computed = true;
  }
  if (computed && !path.empty()) {
    try {
      save_table(*table, path);
    } catch (const Error&) {
      // Cache writes are best-effort; synthesis proceeds without them.
    }
  }
  auto [pos, fresh] = memo_.emplace(key, std::move(table));
  (void)fresh;
  return *pos->second;
}

}  // namespace gf2synth
