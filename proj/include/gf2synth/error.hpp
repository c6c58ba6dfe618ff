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

#include <stdexcept>
#include <string>

namespace gf2synth {

// Error categories; the C API maps these 1:1 onto gf2s_status values and the
// CLI maps them onto process exit codes.
enum class Errc {
  kInvalidArgument,
  kParse,
  kSingular,
  kVerify,
  kBudget,
  kIo,
  kUnsupported,
};

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Errc code() const { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

inline const char* errc_name(Errc code) {
  switch (code) {
    case Errc::kInvalidArgument: return "invalid-argument";
    case Errc::kParse: return "parse";
    case Errc::kSingular: return "singular";
    case Errc::kVerify: return "verify";
    case Errc::kBudget: return "budget";
    case Errc::kIo: return "io";
    case Errc::kUnsupported: return "unsupported";
  }
  return "unknown";
}

}  // namespace gf2synth
