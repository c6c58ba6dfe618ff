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

#include "gf2synth/circuit.hpp"

#include <algorithm>
#include <sstream>

#include "gf2synth/error.hpp"

namespace gf2synth {

CnotCircuit::CnotCircuit(int n_qubits) : n_qubits_(n_qubits) {
  if (n_qubits <= 0) fail(Errc::kInvalidArgument, "circuit needs at least one qubit");
}

void CnotCircuit::add(int control, int target) {
  if (control < 0 || control >= n_qubits_ || target < 0 || target >= n_qubits_)
    fail(Errc::kInvalidArgument, "gate qubit out of range");
  if (control == target) fail(Errc::kInvalidArgument, "gate control equals target");
  gates_.push_back(CnotGate{control, target});
}

void CnotCircuit::append(const CnotCircuit& other) {
  if (other.n_qubits_ != n_qubits_) fail(Errc::kInvalidArgument, "appending circuit of different width");
  gates_.insert(gates_.end(), other.gates_.begin(), other.gates_.end());
}

BitMatrix CnotCircuit::simulate() const {
  BitMatrix m = BitMatrix::identity(static_cast<std::size_t>(n_qubits_));
  for (const CnotGate& g : gates_) m.xor_rows(static_cast<std::size_t>(g.control), static_cast<std::size_t>(g.target));
  return m;
}

std::size_t CnotCircuit::depth() const {
  std::vector<std::size_t> busy(static_cast<std::size_t>(n_qubits_), 0);
  std::size_t depth = 0;
  for (const CnotGate& g : gates_) {
    std::size_t layer = std::max(busy[g.control], busy[g.target]) + 1;
    busy[g.control] = busy[g.target] = layer;
    depth = std::max(depth, layer);
  }
  return depth;
}

CnotCircuit CnotCircuit::reversed() const {
  CnotCircuit out(n_qubits_);
  out.gates_.assign(gates_.rbegin(), gates_.rend());
  return out;
}

std::string CnotCircuit::to_text() const {
  std::ostringstream out;
  out << "qubits " << n_qubits_ << "\n";
  for (const CnotGate& g : gates_) out << "CNOT " << g.control << " " << g.target << "\n";
  return out.str();
}

CnotCircuit CnotCircuit::parse(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  bool have_header = false;
  CnotCircuit out;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::size_t start = line.find_first_not_of(" \t");
    if (start == std::string::npos) continue;
    if (line[start] == '#') continue;
    std::istringstream ls(line);
    std::string word;
    ls >> word;
    if (!have_header) {
      if (word != "qubits") fail(Errc::kParse, "line " + std::to_string(lineno) + ": expected 'qubits <n>'");
      int n = 0;
      if (!(ls >> n) || n <= 0) fail(Errc::kParse, "line " + std::to_string(lineno) + ": invalid qubit count");
      std::string rest;
      if (ls >> rest) fail(Errc::kParse, "line " + std::to_string(lineno) + ": trailing tokens");
      out = CnotCircuit(n);
      have_header = true;
      continue;
    }
    if (word != "CNOT") fail(Errc::kParse, "line " + std::to_string(lineno) + ": expected 'CNOT <c> <t>'");
    int c = -1, t = -1;
    if (!(ls >> c >> t)) fail(Errc::kParse, "line " + std::to_string(lineno) + ": invalid gate operands");
    std::string rest;
    if (ls >> rest) fail(Errc::kParse, "line " + std::to_string(lineno) + ": trailing tokens");
    if (c < 0 || c >= out.n_qubits_ || t < 0 || t >= out.n_qubits_ || c == t)
      fail(Errc::kParse, "line " + std::to_string(lineno) + ": gate qubits out of range");
    out.gates_.push_back(CnotGate{c, t});
  }
  if (!have_header) fail(Errc::kParse, "missing 'qubits <n>' header");
  return out;
}

CnotCircuit LayeredCircuit::flatten() const {
  CnotCircuit out(n_qubits);
  for (const auto& layer : layers)
    for (const CnotGate& g : layer) out.add(g.control, g.target);
  return out;
}

}  // namespace gf2synth
