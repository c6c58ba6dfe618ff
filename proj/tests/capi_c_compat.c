/* Copyright 2026 the gf2synth authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* Compiled as plain C to pin the header's C compatibility and linkage. */

#include <string.h>

#include "gf2synth.h"

int gf2s_c_compat_probe(void) {
  if (gf2s_version() == 0 || strlen(gf2s_version()) == 0) return 1;

  gf2s_store* store = 0;
  if (gf2s_store_create(0, &store) != GF2S_OK) return 2;

  char* circuit = 0;
  char* report = 0;
  gf2s_status st = gf2s_synth(store, "10\n01\n", "line:2", 0, 0, 0, &circuit, &report);
  if (st != GF2S_OK) {
    gf2s_store_destroy(store);
    return 3;
  }
  if (circuit == 0 || report == 0 || strstr(circuit, "qubits 2") == 0) {
    st = GF2S_VERIFY;
  }
  gf2s_string_free(circuit);
  gf2s_string_free(report);
  gf2s_store_destroy(store);
  return st == GF2S_OK ? 0 : 4;
}
