/*
 * This code is licensed under the Apache License, Version 2.0. You may
 * obtain a copy of this license in the LICENSE file in the root directory
 * of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.
 */

#ifndef RECOH_MEASURES_HPP
#define RECOH_MEASURES_HPP

#include <cstdint>
#include <optional>

#include "recoh/channel.hpp"
#include "recoh/state.hpp"

namespace recoh {

// Relative entropy of coherence of a single factor: S(diag(rho)) - S(rho).
double coherence_rel_ent(const DensityMatrix& rho_a, const OrthonormalBasis& basis,
                         const Tolerances& tol = standard_tolerances());

struct MeasureResult {
  double value_bits;
  OrthonormalBasis basis;
  DensityMatrix witness;  // the dephased state, the closest free state
};

// Distance from the free set as an entropy difference: S(dephase(rho)) - S(rho).
// The dephased state is the actual minimizer, returned as the witness.
MeasureResult delta_Z(const DensityMatrix& rho, const OrthonormalBasis& basis,
                      const Tolerances& tol = standard_tolerances());

// Draws sum_c p_c |v_c><v_c| tensor rho_c with full-rank B blocks.
DensityMatrix random_cq_state(const std::vector<Index>& dims, const OrthonormalBasis& basis,
                              std::uint64_t seed);

// Samples random free states and checks none beats the dephased witness in
// relative entropy. Fills worst_slack with min over samples of
// S(rho||sigma) - S(rho||witness) and the violator when the check fails.
bool delta_is_min_oracle(const DensityMatrix& rho, const OrthonormalBasis& basis,
                         int n_samples, std::uint64_t seed,
                         double* worst_slack = nullptr,
                         std::optional<DensityMatrix>* violator = nullptr);

// |delta(rho tensor n) - n delta(rho)| with the product control basis.
double additivity_check(const DensityMatrix& rho, const OrthonormalBasis& basis,
                        int n_copies);

// sum_i w_i delta(rho_i) - delta(sum_i w_i rho_i); negative values beyond
// -1e-9 would falsify convexity.
double convexity_check(const std::vector<DensityMatrix>& states,
                       const std::vector<double>& weights, const OrthonormalBasis& basis);

// delta(rho) - sum_branches p_b delta(rho_b) after running the program;
// non-negative up to tolerance when the program is free.
double monotonicity_check(const DensityMatrix& rho, const OrthonormalBasis& basis,
                          const GoiaProgram& prog);

} // namespace recoh

#endif
