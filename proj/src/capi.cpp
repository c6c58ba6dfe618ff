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

#include "gf2synth.h"

#include <chrono>
#include <cstdlib>
#include <cstring>
#include <new>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "gf2synth/bit_matrix.hpp"
#include "gf2synth/circuit.hpp"
#include "gf2synth/depth_table.hpp"
#include "gf2synth/error.hpp"
#include "gf2synth/synthesis.hpp"
#include "gf2synth/topology.hpp"
#include "json.hpp"

namespace {

using gf2synth::BitMatrix;
using gf2synth::BlockLineLayout;
using gf2synth::CnotCircuit;
using gf2synth::Errc;
using gf2synth::Error;
using gf2synth::TableStore;
using json = nlohmann::ordered_json;

thread_local std::string g_last_error = "no error";

gf2s_status to_status(Errc code) {
  switch (code) {
    case Errc::kInvalidArgument: return GF2S_INVALID_ARGUMENT;
    case Errc::kParse: return GF2S_PARSE;
    case Errc::kSingular: return GF2S_SINGULAR;
    case Errc::kVerify: return GF2S_VERIFY;
    case Errc::kBudget: return GF2S_BUDGET;
    case Errc::kIo: return GF2S_IO;
    case Errc::kUnsupported: return GF2S_UNSUPPORTED;
  }
  return GF2S_INVALID_ARGUMENT;
}

char* alloc_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

// Every entry point funnels through here so exceptions never cross the C
// boundary and the thread-local message is always in sync with the status.
template <typename Fn>
gf2s_status guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    g_last_error = e.what();
    return to_status(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return GF2S_BUDGET;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return GF2S_INVALID_ARGUMENT;
  }
}

const char* require(const char* arg, const char* name) {
  if (!arg) gf2synth::fail(Errc::kInvalidArgument, std::string(name) + " must not be null");
  return arg;
}

std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

class Stopwatch {
 public:
  double ms() const {
    const auto d = std::chrono::steady_clock::now() - start_;
    return std::chrono::duration<double, std::milli>(d).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

gf2synth::Strategy strategy_or_auto(const char* name) {
  if (!name || !*name) return gf2synth::Strategy::kAuto;
  return gf2synth::parse_strategy(name);
}

// Independent re-checks of an emitted circuit; the synthesizer's own belief
// is never copied into a report.
struct Verdicts {
  bool functional = false;
  bool compliance = false;
  bool depth_bound = false;
  bool all() const { return functional && compliance && depth_bound; }
};

Verdicts check_circuit(const CnotCircuit& c, const BitMatrix& a, const BlockLineLayout& layout,
                       std::size_t bound) {
  Verdicts v;
  v.functional = c.simulate() == a;
  v.compliance = gf2synth::check_compliance(c, layout.graph).ok;
  v.depth_bound = c.depth() <= bound;
  return v;
}

}  // namespace

struct gf2s_store {
  TableStore store;
};

extern "C" {

const char* gf2s_last_error(void) { return g_last_error.c_str(); }

void gf2s_string_free(char* s) { std::free(s); }

const char* gf2s_version(void) { return "0.1.0"; }

gf2s_status gf2s_store_create(const char* cache_dir_or_null, gf2s_store** out) {
  return guarded([&]() -> gf2s_status {
    if (!out) gf2synth::fail(Errc::kInvalidArgument, "out must not be null");
    auto* s = new gf2s_store();
    if (cache_dir_or_null && *cache_dir_or_null) s->store = TableStore(cache_dir_or_null);
    *out = s;
    return GF2S_OK;
  });
}

void gf2s_store_destroy(gf2s_store* store) { delete store; }

gf2s_status gf2s_synth(gf2s_store* store, const char* matrix_text, const char* arch,
                       const char* strategy_or_null, uint64_t budget, int check_invariants,
                       char** circuit_text_out, char** report_json_out) {
  return guarded([&]() -> gf2s_status {
    const Stopwatch sw;
    const std::string mtext = require(matrix_text, "matrix_text");
    const BlockLineLayout layout = gf2synth::build_layout(require(arch, "arch"));
    const BitMatrix a = BitMatrix::parse(mtext);

    TableStore private_store;
    gf2synth::SynthOptions opt;
    opt.strategy = strategy_or_auto(strategy_or_null);
    opt.tables = store ? &store->store : &private_store;
    if (budget != 0) opt.budget = budget;
    opt.check_invariants = check_invariants != 0;

    gf2synth::SynthStats st;
    const CnotCircuit c = gf2synth::synth(a, layout, opt, &st);
    const Verdicts v = check_circuit(c, a, layout, st.depth_bound);

    json report;
    report["command"] = "synth";
    report["arch"] = layout.descriptor;
    report["n"] = layout.n;
    report["p"] = st.p;
    report["m"] = st.m;
    report["strategy"] = st.strategy;
    report["input_digest"] = "fnv1a:" + hex64(fnv1a64(mtext));
    report["gates"] = c.size();
    report["depth"] = c.depth();
    report["depth_bound"] = st.depth_bound;
    report["d1"] = st.d1;
    report["d2"] = st.d2;
    report["dstar"] = st.dstar;
    report["verdicts"] = {{"functional", v.functional},
                          {"compliance", v.compliance},
                          {"depth_bound", v.depth_bound}};
    report["elapsed_ms"] = sw.ms();

    if (circuit_text_out) *circuit_text_out = alloc_string(c.to_text());
    if (report_json_out) *report_json_out = alloc_string(report.dump(2) + "\n");
    if (!v.all()) {
      g_last_error = "emitted circuit failed an independent check";
      return GF2S_VERIFY;
    }
    return GF2S_OK;
  });
}

gf2s_status gf2s_verify(const char* matrix_text, const char* circuit_text, const char* arch,
                        char** report_json_out, int* all_pass_out) {
  return guarded([&]() -> gf2s_status {
    const Stopwatch sw;
    const std::string mtext = require(matrix_text, "matrix_text");
    const BlockLineLayout layout = gf2synth::build_layout(require(arch, "arch"));
    const BitMatrix a = BitMatrix::parse(mtext);
    const CnotCircuit c = CnotCircuit::parse(require(circuit_text, "circuit_text"));
    if (static_cast<int>(a.rows()) != layout.n)
      gf2synth::fail(Errc::kInvalidArgument, "operator size does not match the architecture");
    if (c.n_qubits() != static_cast<int>(a.rows()))
      gf2synth::fail(Errc::kInvalidArgument, "circuit width does not match the operator");

    const bool functional = c.simulate() == a;
    const auto compliance = gf2synth::check_compliance(c, layout.graph);
    const bool all_pass = functional && compliance.ok;

    json report;
    report["command"] = "verify";
    report["arch"] = layout.descriptor;
    report["n"] = layout.n;
    report["input_digest"] = "fnv1a:" + hex64(fnv1a64(mtext));
    report["gates"] = c.size();
    report["depth"] = c.depth();
    report["verdicts"] = {{"functional", functional}, {"compliance", compliance.ok}};
    report["violating_gates"] = compliance.violating_gates;
    report["elapsed_ms"] = sw.ms();

    if (report_json_out) *report_json_out = alloc_string(report.dump(2) + "\n");
    if (all_pass_out) *all_pass_out = all_pass ? 1 : 0;
    return GF2S_OK;
  });
}

gf2s_status gf2s_enumerate(gf2s_store* store, int problem, const char* arch, uint64_t budget,
                           const char* save_path_or_null, char** histogram_json_out) {
  return guarded([&]() -> gf2s_status {
    const Stopwatch sw;
    if (problem < 1 || problem > 3)
      gf2synth::fail(Errc::kInvalidArgument, "problem must be 1, 2 or 3");
    const auto prob = static_cast<gf2synth::Problem>(problem);
    const BlockLineLayout layout = gf2synth::build_layout(require(arch, "arch"));
    const gf2synth::ConnectivityGraph& g =
        prob == gf2synth::Problem::kThree ? layout.intra_graph : layout.local_graph;
    const int p = layout.p;
    const std::uint64_t space = gf2synth::state_space_size(prob, p);
    const std::uint64_t cap = budget != 0 ? budget : gf2synth::kDefaultBudget;

    json report;
    report["command"] = "enumerate";
    report["problem"] = problem;
    report["arch"] = layout.descriptor;
    report["p"] = p;
    report["fingerprint"] = hex64(gf2synth::table_fingerprint(prob, p, g));
    report["state_space"] = space;

    if (prob == gf2synth::Problem::kTwo && space > gf2synth::kHashTierLimit) {
      // Too many states for the replayable hash search; stream the histogram.
      if (save_path_or_null)
        gf2synth::fail(Errc::kUnsupported,
                       "saving a table cache needs the hash engine; this state space only "
                       "supports the streaming histogram");
      const unsigned hw = std::thread::hardware_concurrency();
      const int threads = hw == 0 ? 1 : static_cast<int>(hw);
      const auto res = gf2synth::p2_histogram_bitmap(p, g, cap, threads);
      report["engine"] = "bitmap";
      report["counts_by_depth"] = res.counts_by_depth;
      report["total"] = res.class_total;
      report["max_depth"] = res.max_depth;
      report["states_explored"] = res.states_explored;
      report["early_stopped"] = res.early_stopped;
    } else {
      gf2synth::BfsOptions bo;
      bo.budget = cap;
      TableStore private_store;
      TableStore& ts = store ? store->store : private_store;
      const gf2synth::DepthTable& t = ts.get(prob, p, g, bo);
      if (save_path_or_null) gf2synth::save_table(t, save_path_or_null);
      report["engine"] = "hash";
      report["counts_by_depth"] = t.counts_by_depth;
      report["total"] = t.counted_total;
      report["max_depth"] = t.max_depth;
      report["states_explored"] = t.states_explored;
      report["early_stopped"] = t.early_stopped;
      if (save_path_or_null) report["saved_to"] = save_path_or_null;
    }
    report["elapsed_ms"] = sw.ms();
    if (histogram_json_out) *histogram_json_out = alloc_string(report.dump(2) + "\n");
    return GF2S_OK;
  });
}

gf2s_status gf2s_bench(gf2s_store* store, const char* arch_pattern, const char* ns_csv,
                       int trials, uint64_t seed, const char* strategy_or_null, uint64_t budget,
                       char** report_json_out) {
  return guarded([&]() -> gf2s_status {
    const Stopwatch sw;
    const std::string pattern = require(arch_pattern, "arch_pattern");
    if (trials <= 0) gf2synth::fail(Errc::kInvalidArgument, "trials must be positive");

    std::vector<int> ns;
    {
      const std::string csv = require(ns_csv, "ns_csv");
      std::size_t pos = 0;
      while (pos <= csv.size()) {
        const std::size_t comma = std::min(csv.find(',', pos), csv.size());
        const std::string tok = csv.substr(pos, comma - pos);
        char* end = nullptr;
        const long v = std::strtol(tok.c_str(), &end, 10);
        if (tok.empty() || !end || *end != '\0' || v <= 0)
          gf2synth::fail(Errc::kParse, "qubit counts must be a comma-separated list of "
                                       "positive integers: " + csv);
        ns.push_back(static_cast<int>(v));
        pos = comma + 1;
      }
    }

    TableStore private_store;
    gf2synth::SynthOptions opt;
    opt.strategy = strategy_or_auto(strategy_or_null);
    opt.tables = store ? &store->store : &private_store;
    if (budget != 0) opt.budget = budget;

    json per_n = json::array();
    double max_slope = 0.0;
    for (int n : ns) {
      BlockLineLayout layout = [&] {
        const std::size_t q = pattern.find('?');
        if (q == std::string::npos) {
          BlockLineLayout l = gf2synth::build_layout(pattern);
          if (l.n != n)
            gf2synth::fail(Errc::kInvalidArgument,
                           "architecture " + pattern + " has " + std::to_string(l.n) +
                               " qubits, not " + std::to_string(n));
          return l;
        }
        for (int v = 1; v <= n; ++v) {
          std::string d = pattern;
          d.replace(q, 1, std::to_string(v));
          try {
            BlockLineLayout l = gf2synth::build_layout(d);
            if (l.n == n) return l;
          } catch (const Error&) {
            // not every substitution parses; keep scanning
          }
        }
        gf2synth::fail(Errc::kInvalidArgument,
                       "no substitution of '?' in " + pattern + " yields " +
                           std::to_string(n) + " qubits");
      }();

      std::mt19937_64 rng(seed ^ (static_cast<std::uint64_t>(n) << 32));
      std::size_t max_depth = 0, total_depth = 0, bound = 0;
      std::string strategy_used;
      for (int t = 0; t < trials; ++t) {
        const BitMatrix a = gf2synth::random_invertible(n, rng());
        gf2synth::SynthStats st;
        const CnotCircuit c = gf2synth::synth(a, layout, opt, &st);
        const Verdicts v = check_circuit(c, a, layout, st.depth_bound);
        if (!v.all())
          gf2synth::fail(Errc::kVerify, "benchmark trial failed an independent check on " +
                                            layout.descriptor);
        max_depth = std::max(max_depth, c.depth());
        total_depth += c.depth();
        bound = st.depth_bound;
        strategy_used = st.strategy;
      }
      const double slope = static_cast<double>(max_depth) / n;
      max_slope = std::max(max_slope, slope);
      per_n.push_back({{"n", n},
                       {"arch", layout.descriptor},
                       {"strategy", strategy_used},
                       {"trials", trials},
                       {"mean_depth", static_cast<double>(total_depth) / trials},
                       {"max_depth", max_depth},
                       {"depth_bound", bound},
                       {"max_depth_over_n", slope}});
    }

    json report;
    report["command"] = "bench";
    report["arch_pattern"] = pattern;
    report["seed"] = seed;
    report["trials"] = trials;
    report["per_n"] = per_n;
    report["max_slope"] = max_slope;
    report["elapsed_ms"] = sw.ms();
    if (report_json_out) *report_json_out = alloc_string(report.dump(2) + "\n");
    return GF2S_OK;
  });
}

}  // extern "C"
