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

/* C interface of the gf2synth shared library.
 *
 * Matrices and circuits cross the boundary as text:
 *   - matrix: n lines of n characters '0'/'1', one line per row;
 *   - circuit: a "qubits <n>" line followed by "CNOT <control> <target>"
 *     lines; '#' starts a comment.
 * Reports and histograms are returned as JSON strings. Every char** output
 * is owned by the caller and must be released with gf2s_string_free.
 *
 * All functions return GF2S_OK on success. On failure the outputs are left
 * untouched (except where noted) and gf2s_last_error describes the problem
 * for the calling thread.
 */

#ifndef GF2SYNTH_H_
#define GF2SYNTH_H_

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum gf2s_status {
  GF2S_OK = 0,
  GF2S_INVALID_ARGUMENT = 1,
  GF2S_PARSE = 2,
  GF2S_SINGULAR = 3,
  GF2S_VERIFY = 4,
  GF2S_BUDGET = 5,
  GF2S_IO = 6,
  GF2S_UNSUPPORTED = 7
} gf2s_status;

/* Message for the most recent failure on this thread; never NULL. */
const char* gf2s_last_error(void);

/* Releases a string returned through a char** output. NULL is a no-op. */
void gf2s_string_free(char* s);

/* Library version, e.g. "0.1.0". Static storage; do not free. */
const char* gf2s_version(void);

/* A store of enumerated depth tables: an in-memory memo plus an optional
 * on-disk cache directory. Stores are not thread-safe; use one per thread.
 * Passing NULL wherever a store is accepted uses a private throwaway store.
 */
typedef struct gf2s_store gf2s_store;

gf2s_status gf2s_store_create(const char* cache_dir_or_null, gf2s_store** out);
void gf2s_store_destroy(gf2s_store* store);

/* Compiles the operator onto the architecture. strategy_or_null picks the
 * local solver ("auto", "closed-form", "table", "alltoall-basic",
 * "alltoall-improved", "combined"); NULL means "auto". budget caps the
 * enumerated state space (0 means the built-in default). The emitted circuit
 * is re-verified independently (functional, compliance, depth bound) and the
 * verdicts are part of the report; any failed verdict yields GF2S_VERIFY
 * with both outputs still filled, as a bug trap.
 */
gf2s_status gf2s_synth(gf2s_store* store, const char* matrix_text, const char* arch,
                       const char* strategy_or_null, uint64_t budget, int check_invariants,
                       char** circuit_text_out, char** report_json_out);

/* Checks a circuit against an operator and an architecture. The functional
 * and compliance verdicts land in the report and in *all_pass_out; a failed
 * verdict is a successful check, so the status stays GF2S_OK.
 */
gf2s_status gf2s_verify(const char* matrix_text, const char* circuit_text, const char* arch,
                        char** report_json_out, int* all_pass_out);

/* Enumerates the depth table of local problem 1, 2 or 3 for the architecture
 * and reports the depth histogram. Problems 1 and 2 run on the block-pair
 * graph, problem 3 on the within-block graph. save_path_or_null additionally
 * writes the table in the cache file format. Problem-2 spaces beyond the
 * hash-map tier are served by a streaming engine that produces the histogram
 * only (saving is unsupported there) and requires budget >= state space.
 */
gf2s_status gf2s_enumerate(gf2s_store* store, int problem, const char* arch, uint64_t budget,
                           const char* save_path_or_null, char** histogram_json_out);

/* Benchmarks synthesis over random invertible operators. arch_pattern may
 * contain a single '?' placeholder resolved per n so that the qubit count
 * matches (e.g. "line:?", "ladder:2x?", "blocks-full:p=4,m=?"). ns_csv is a
 * comma-separated list of qubit counts. Every trial is verified; any failure
 * aborts with GF2S_VERIFY.
 */
gf2s_status gf2s_bench(gf2s_store* store, const char* arch_pattern, const char* ns_csv,
                       int trials, uint64_t seed, const char* strategy_or_null, uint64_t budget,
                       char** report_json_out);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* GF2SYNTH_H_ */
