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

// Command-line front end; all the work happens behind the C API.

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "gf2synth.h"

namespace {

// 0 ok, 2 input error, 3 singular operator, 4 verification failure,
// 5 budget exceeded.
int exit_code(gf2s_status st) {
  switch (st) {
    case GF2S_OK: return 0;
    case GF2S_SINGULAR: return 3;
    case GF2S_VERIFY: return 4;
    case GF2S_BUDGET: return 5;
    case GF2S_INVALID_ARGUMENT:
    case GF2S_PARSE:
    case GF2S_IO:
    case GF2S_UNSUPPORTED: return 2;
  }
  return 2;
}

int fail_with(gf2s_status st) {
  std::cerr << "gf2synth: error: " << gf2s_last_error() << "\n";
  return exit_code(st);
}

bool read_file(const std::string& path, std::string& out) {
  std::ifstream in(path, std::ios::binary);
  if (!in.good()) return false;
  std::ostringstream ss;
  ss << in.rdbuf();
  out = ss.str();
  return true;
}

struct StoreHandle {
  gf2s_store* s = nullptr;
  ~StoreHandle() { gf2s_store_destroy(s); }
};

struct StringHandle {
  char* s = nullptr;
  ~StringHandle() { gf2s_string_free(s); }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"CNOT circuit synthesis for block-line architectures"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(gf2s_version()));

  std::string cache_dir;
  if (const char* env = std::getenv("GF2SYNTH_CACHE")) cache_dir = env;
  app.add_option("--cache", cache_dir,
                 "directory for enumerated table caches (env GF2SYNTH_CACHE)");

  std::string arch, input, output, circuit_path, strategy, n_list;
  std::uint64_t budget = 0, seed = 1;
  int problem = 0, trials = 10;
  bool check_invariants = false;

  CLI::App* synth = app.add_subcommand("synth", "compile an operator into a circuit");
  synth->add_option("-a,--arch", arch, "architecture descriptor")->required();
  synth->add_option("-i,--input", input, "operator matrix file")->required();
  synth->add_option("-o,--output", output, "circuit file to write")->required();
  synth->add_option("--strategy", strategy,
                    "auto|closed-form|table|alltoall-basic|alltoall-improved|combined");
  synth->add_option("--budget", budget, "state-space budget for table enumeration");
  synth->add_flag("--check-invariants", check_invariants,
                  "verify the sweep invariants after every round");

  CLI::App* verify = app.add_subcommand("verify", "check a circuit against an operator");
  verify->add_option("-a,--arch", arch, "architecture descriptor")->required();
  verify->add_option("-i,--input", input, "operator matrix file")->required();
  verify->add_option("-c,--circuit", circuit_path, "circuit file to check")->required();

  CLI::App* enumerate = app.add_subcommand("enumerate", "tabulate a local problem's depths");
  enumerate->add_option("-P,--problem", problem, "local problem: 1, 2 or 3")->required();
  enumerate->add_option("-a,--arch", arch, "architecture descriptor")->required();
  enumerate->add_option("-o,--output", output, "write the table cache to this file");
  enumerate->add_option("--budget", budget, "state-space budget (default 2000000)");

  CLI::App* bench = app.add_subcommand("bench", "depth statistics over random operators");
  bench->add_option("-a,--arch", arch, "architecture pattern; '?' is resolved per n")
      ->required();
  bench->add_option("-n,--sizes", n_list, "comma-separated qubit counts")->required();
  bench->add_option("-t,--trials", trials, "random operators per size");
  bench->add_option("-s,--seed", seed, "random seed");
  bench->add_option("--strategy", strategy, "local solver strategy");
  bench->add_option("--budget", budget, "state-space budget for table enumeration");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;  // help/version exit cleanly, usage errors are input errors
  }

  StoreHandle store;
  if (gf2s_status st = gf2s_store_create(cache_dir.empty() ? nullptr : cache_dir.c_str(),
                                         &store.s);
      st != GF2S_OK)
    return fail_with(st);

  const char* strat = strategy.empty() ? nullptr : strategy.c_str();

  if (*synth) {
    std::string matrix;
    if (!read_file(input, matrix)) {
      std::cerr << "gf2synth: error: cannot read " << input << "\n";
      return 2;
    }
    StringHandle circuit, report;
    const gf2s_status st = gf2s_synth(store.s, matrix.c_str(), arch.c_str(), strat, budget,
                                      check_invariants ? 1 : 0, &circuit.s, &report.s);
    if (report.s) std::cout << report.s;
    if (st != GF2S_OK) return fail_with(st);
    std::ofstream out(output, std::ios::binary);
    out << circuit.s;
    if (!out.good()) {
      std::cerr << "gf2synth: error: cannot write " << output << "\n";
      return 2;
    }
    return 0;
  }

  if (*verify) {
    std::string matrix, circ;
    if (!read_file(input, matrix)) {
      std::cerr << "gf2synth: error: cannot read " << input << "\n";
      return 2;
    }
    if (!read_file(circuit_path, circ)) {
      std::cerr << "gf2synth: error: cannot read " << circuit_path << "\n";
      return 2;
    }
    StringHandle report;
    int all_pass = 0;
    const gf2s_status st =
        gf2s_verify(matrix.c_str(), circ.c_str(), arch.c_str(), &report.s, &all_pass);
    if (report.s) std::cout << report.s;
    if (st != GF2S_OK) return fail_with(st);
    if (!all_pass) {
      std::cerr << "gf2synth: error: verification failed\n";
      return 4;
    }
    return 0;
  }

  if (*enumerate) {
    StringHandle histogram;
    const gf2s_status st = gf2s_enumerate(store.s, problem, arch.c_str(), budget,
                                          output.empty() ? nullptr : output.c_str(),
                                          &histogram.s);
    if (histogram.s) std::cout << histogram.s;
    if (st != GF2S_OK) return fail_with(st);
    return 0;
  }

  StringHandle report;
  const gf2s_status st = gf2s_bench(store.s, arch.c_str(), n_list.c_str(), trials, seed, strat,
                                    budget, &report.s);
  if (report.s) std::cout << report.s;
  if (st != GF2S_OK) return fail_with(st);
  return 0;
}
