/*
 * This code is licensed under the Apache License, Version 2.0. You may
 * obtain a copy of this license in the LICENSE file in the root directory
 * of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.
 */

#ifndef RECOH_CHANNEL_HPP
#define RECOH_CHANNEL_HPP

#include <cstdint>
#include <variant>
#include <vector>

#include "recoh/state.hpp"

namespace recoh {

// Kraus representation of a completely positive map. Trace preserving when
// sum K^dag K = I; trace non-increasing sets trace_preserving = false.
struct KrausChannel {
  std::vector<Index> in_dims;
  std::vector<Index> out_dims;
  std::vector<Matrix> kraus;
  bool trace_preserving = true;
};

KrausChannel make_channel(std::vector<Matrix> kraus, std::vector<Index> in_dims,
                          std::vector<Index> out_dims,
                          const Tolerances& tol = standard_tolerances());

struct ApplyResult {
  DensityMatrix state;
  double probability;  // 1 for trace-preserving channels
};

// sum_k K rho K^dag, renormalized when the channel is trace non-increasing.
ApplyResult apply(const KrausChannel& ch, const DensityMatrix& rho,
                  const Tolerances& tol = standard_tolerances());

// Witness for the at-most-one-entry-per-column test in the given basis frame.
struct IncoherenceReport {
  bool incoherent = true;
  std::size_t kraus_index = 0;
  Index column = 0;
  std::vector<Index> rows;
};

IncoherenceReport check_incoherent(const KrausChannel& ch, const OrthonormalBasis& basis,
                                   const Tolerances& tol = standard_tolerances());
bool is_incoherent_channel(const KrausChannel& ch, const OrthonormalBasis& basis,
                           const Tolerances& tol = standard_tolerances());

// U = sum_c |v_c><v_c| tensor blocks[c], acting on [basis.dim, block dim].
KrausChannel controlled_unitary(const OrthonormalBasis& basis,
                                const std::vector<Matrix>& blocks,
                                const Tolerances& tol = standard_tolerances());

// Control shifts a cyclic translation on the ancilla: |i,k> -> |i, k+i mod d>.
KrausChannel controlled_translation(Index d_a, Index d_anc);

// True when the state carries no coherence across the control basis blocks.
bool is_cq_state(const DensityMatrix& rho, const OrthonormalBasis& basis,
                 double tol = 1e-9);

struct MeasurementRecord {
  double probability;
  DensityMatrix state;
};

// Measurement on the full B side (all factors but the first). Operators act
// on B and must satisfy sum M^dag M = I_B.
std::vector<MeasurementRecord> measure_on_B(const DensityMatrix& rho,
                                            const std::vector<Matrix>& operators,
                                            const Tolerances& tol = standard_tolerances());

// Same measurement kept as a channel output: appends a classical register
// factor holding the outcome, sum_k (M_k rho M_k^dag) tensor |k><k|.
DensityMatrix measure_to_register(const DensityMatrix& rho,
                                  const std::vector<Matrix>& operators,
                                  const Tolerances& tol = standard_tolerances());

// Program steps of the free class: incoherent local maps on A, unitaries on B
// conditioned on the control basis, ancilla growth on B, discarding B
// factors, and projective measurements of a B factor.
struct StepIncoherentOnA {
  std::vector<Matrix> kraus;  // d_A x d_A each
};
struct StepControlledFromA {
  std::vector<Matrix> blocks;  // one unitary per control label, on all of B
};
struct StepAddAncillaB {
  Index dim;
};
struct StepTraceOutB {
  std::size_t factor;  // index into the current dims list, >= 1
};
struct StepMeasureB {
  std::size_t factor;
  Matrix basis_vectors;  // columns form the measurement basis
};
using GoiaStep = std::variant<StepIncoherentOnA, StepControlledFromA, StepAddAncillaB,
                              StepTraceOutB, StepMeasureB>;

struct GoiaProgram {
  std::vector<GoiaStep> steps;
};

// Walks the program against the starting dims, checking each step is free
// with respect to the control basis. Returns the final dims list of every
// branch (all branches share one shape).
std::vector<Index> validate_program(const GoiaProgram& prog, const std::vector<Index>& in_dims,
                                    const OrthonormalBasis& basis,
                                    const Tolerances& tol = standard_tolerances());

struct ProgramBranch {
  double probability;
  DensityMatrix state;
};

// Evaluates the program, forking on measurements. Branch probabilities sum to
// one up to dropped branches below 1e-14.
std::vector<ProgramBranch> run_program(const GoiaProgram& prog, const DensityMatrix& rho,
                                       const OrthonormalBasis& basis,
                                       const Tolerances& tol = standard_tolerances());

// Draws a length-`depth` program that is free for the given basis and starting
// dims. Ancilla growth stops once the total dimension would pass grow_cap.
GoiaProgram random_goia_program(const std::vector<Index>& dims, const OrthonormalBasis& basis,
                                int depth, std::uint64_t seed, Index grow_cap = 64);

} // namespace recoh

#endif
