/*
 * This code is licensed under the Apache License, Version 2.0. You may
 * obtain a copy of this license in the LICENSE file in the root directory
 * of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.
 */

#ifndef RECOH_OPTIMIZE_HPP
#define RECOH_OPTIMIZE_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "recoh/measures.hpp"
#include "recoh/state.hpp"

namespace recoh {

// Measurement with PSD operators M_k satisfying sum M_k^dag M_k = I.
struct Povm {
  std::vector<Matrix> elements;
  bool rank_one = false;
};

Povm make_povm(std::vector<Matrix> elements, const Tolerances& tol = standard_tolerances());

enum class MeasurementParam {
  Projective,  // rank-1 projective measurements on B
  NaimarkPovm, // rank-1 POVMs with up to rank(Tr_B rho)^2 elements
};

struct OptimizerConfig {
  int restarts = 32;
  int max_sweeps = 500;
  double value_tol = 1e-8;  // minimum improvement per full sweep
  double angle_tol = 1e-6;  // line-search bracket width
  std::uint64_t seed = 0;
  MeasurementParam parameterization = MeasurementParam::Projective;
  int threads = 1;
};

struct BoundResult {
  double value_bits = 0.0;
  std::optional<Povm> povm;               // best measurement (maximization)
  std::optional<OrthonormalBasis> basis;  // best control basis (minimization)
  std::vector<double> restart_values;
  bool converged = true;
};

// Best single-measurement protocol value: max over measurements on B of
// sum_k p_k C(rho_k^A). A lower bound on what the bipartite state can yield;
// never exceeds delta_Z.
BoundResult lqicc_lower_bound(const DensityMatrix& rho, const OrthonormalBasis& basis,
                              const OptimizerConfig& config = {});

// Objective value of a fixed measurement, usable with any valid POVM.
double measured_coherence(const DensityMatrix& rho, const OrthonormalBasis& basis,
                          const Povm& povm);

// min over bases W of delta_W(rho): the basis-independent upper bound
// (one-way information deficit). Returns the minimizing basis.
BoundResult min_basis_delta(const DensityMatrix& rho, const OptimizerConfig& config = {});

struct PureStateResult {
  double delta;
  RealVector schmidt_coeffs;                // descending singular values
  DensityMatrix maximally_correlated_form;  // pure state on [d_A, d_A]
  double translation_residual;              // |delta change| across the T_c route
};

// For pure inputs the bound chain closes: the value equals delta_Z, certified
// by invariance under the controlled-translation construction.
PureStateResult pure_state_recoverable(const Vector& psi, Index d_a, Index d_b,
                                       const OrthonormalBasis& basis);

struct UpperBoundReport {
  double delta;
  double lqicc_lower;
  double gap;
};

UpperBoundReport upper_bound_report(const DensityMatrix& rho, const OrthonormalBasis& basis,
                                    const OptimizerConfig& config = {});

} // namespace recoh

#endif
