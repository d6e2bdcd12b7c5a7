/*
 * This code is licensed under the Apache License, Version 2.0. You may
 * obtain a copy of this license in the LICENSE file in the root directory
 * of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.
 */

#ifndef RECOH_IO_HPP
#define RECOH_IO_HPP

#include <string>

#include "json.hpp"
#include "recoh/channel.hpp"
#include "recoh/state.hpp"

namespace recoh {

using nlohmann::json;

// Matrices are stored row major as nested arrays of [re, im] pairs.
json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const json& j);

// Density matrix files: {"dims": [...], "matrix": [[[re,im],...],...]}.
json state_to_json(const DensityMatrix& rho);
DensityMatrix state_from_json(const json& j, const Tolerances& tol = standard_tolerances());
DensityMatrix load_state(const std::string& path,
                         const Tolerances& tol = standard_tolerances());

// Unitary files: {"matrix": ...}; the matrix must be square and unitary.
Matrix load_unitary(const std::string& path, const Tolerances& tol = standard_tolerances());

// Basis files share the unitary layout; columns are the basis vectors.
OrthonormalBasis load_basis(const std::string& path,
                            const Tolerances& tol = standard_tolerances());

// Channel files: {"in_dims": [...], "out_dims": [...], "kraus": [matrix, ...]}.
json channel_to_json(const KrausChannel& ch);
KrausChannel load_channel(const std::string& path,
                          const Tolerances& tol = standard_tolerances());

// Program files: {"steps": [{"type": ..., ...}, ...]}; see program_from_json
// for the per-type fields.
json program_to_json(const GoiaProgram& prog);
GoiaProgram program_from_json(const json& j);
GoiaProgram load_program(const std::string& path);

// Deterministic serialization: keys sorted, doubles printed with %.17g, two
// space indent. Identical inputs produce identical bytes across platforms.
std::string emit_json(const json& j);

// Same formatting rules on a single line, for log and CSV headers.
std::string emit_json_compact(const json& j);

json parse_json_text(const std::string& text);
json load_json_file(const std::string& path);
void save_json_file(const std::string& path, const json& j);

} // namespace recoh

#endif
