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

#include <cstddef>
#include <string>
#include <vector>

#include "gf2synth/bit_matrix.hpp"

namespace gf2synth {

struct CnotGate {
  int control = 0;
  int target = 0;
  bool operator==(const CnotGate& o) const { return control == o.control && target == o.target; }
  bool operator!=(const CnotGate& o) const { return !(*this == o); }
};

// A CNOT(c, t) acts on a linear operator by adding row c into row t.
class CnotCircuit {
 public:
  CnotCircuit() = default;
  explicit CnotCircuit(int n_qubits);

  int n_qubits() const { return n_qubits_; }
  std::size_t size() const { return gates_.size(); }
  const std::vector<CnotGate>& gates() const { return gates_; }

  void add(int control, int target);
  void append(const CnotCircuit& other);

  // Product of the gates' elementary matrices, applied in circuit order to
  // the identity: returns the linear operator the circuit implements.
  BitMatrix simulate() const;

  // Greedy as-soon-as-possible layering: number of layers when every gate is
  // scheduled as early as qubit availability allows.
  std::size_t depth() const;

  CnotCircuit reversed() const;

  // Text format: "qubits <n>" then one "CNOT <c> <t>" line per gate; blank
  // lines and lines starting with '#' are ignored. Round-trips bit-exactly.
  std::string to_text() const;
  static CnotCircuit parse(const std::string& text);

 private:
  int n_qubits_ = 0;
  std::vector<CnotGate> gates_;
};

// Circuit kept as explicit layers of disjoint gates; the synthesis passes
// construct these and flatten at the end.
struct LayeredCircuit {
  int n_qubits = 0;
  std::vector<std::vector<CnotGate>> layers;

  LayeredCircuit() = default;
  explicit LayeredCircuit(int n) : n_qubits(n) {}

  std::size_t depth() const { return layers.size(); }
  std::size_t size() const {
    std::size_t s = 0;
    for (const auto& l : layers) s += l.size();
    return s;
  }
  void append_layer(std::vector<CnotGate> layer) {
    if (!layer.empty()) layers.push_back(std::move(layer));
  }
  void append(const LayeredCircuit& other) {
    for (const auto& l : other.layers) layers.push_back(l);
  }
  CnotCircuit flatten() const;
};

}  // namespace gf2synth
