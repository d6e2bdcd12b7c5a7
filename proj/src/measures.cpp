/*
 * This code is licensed under the Apache License, Version 2.0. You may
 * obtain a copy of this license in the LICENSE file in the root directory
 * of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.
 */

#include "recoh/measures.hpp"

#include <cmath>
#include <limits>
#include <numeric>

namespace recoh {

double coherence_rel_ent(const DensityMatrix& rho_a, const OrthonormalBasis& basis,
                         const Tolerances& tol) {
  if (rho_a.num_factors() != 1)
    throw validation_error("coherence is computed on a single factor");
  if (basis.dim() != rho_a.total_dim())
    throw validation_error("basis dimension does not match the state");
  DensityMatrix diag = dephase_at(rho_a, basis, 0);
  double c = von_neumann_entropy(diag, tol) - von_neumann_entropy(rho_a, tol);
  return std::max(c, 0.0);
}

MeasureResult delta_Z(const DensityMatrix& rho, const OrthonormalBasis& basis,
                      const Tolerances& tol) {
  if (rho.num_factors() < 2)
    throw validation_error("the monotone needs a bipartite state");
  if (basis.dim() != rho.dim(0))
    throw validation_error("control basis dimension does not match A");
  DensityMatrix pinched = dephase(rho, basis);
  double v = von_neumann_entropy(pinched, tol) - von_neumann_entropy(rho, tol);
  return MeasureResult{std::max(v, 0.0), basis, std::move(pinched)};
}

DensityMatrix random_cq_state(const std::vector<Index>& dims, const OrthonormalBasis& basis,
                              std::uint64_t seed) {
  if (dims.size() < 2) throw validation_error("free states are bipartite");
  Index da = dims[0];
  if (basis.dim() != da)
    throw validation_error("control basis dimension does not match A");
  std::vector<Index> b_dims(dims.begin() + 1, dims.end());
  Index db = std::accumulate(b_dims.begin(), b_dims.end(), Index{1}, std::multiplies<>());

  auto rng = seeded_rng(seed);
  std::exponential_distribution<double> expo(1.0);
  std::vector<double> p(da);
  double total = 0.0;
  for (Index c = 0; c < da; ++c) total += (p[c] = expo(rng));
  // Floor the label weights so the result stays full rank on the A marginal.
  for (Index c = 0; c < da; ++c) p[c] = 0.9 * p[c] / total + 0.1 / da;

  Matrix out = Matrix::Zero(da * db, da * db);
  for (Index c = 0; c < da; ++c) {
    auto block = random_state(b_dims, db, splitmix64(seed * 1315423911ull + c));
    Vector v = basis.vector(c);
    out += p[c] * kron(Matrix(v * v.adjoint()), block.mat());
  }
  return DensityMatrix(dims, std::move(out));
}

bool delta_is_min_oracle(const DensityMatrix& rho, const OrthonormalBasis& basis,
                         int n_samples, std::uint64_t seed, double* worst_slack,
                         std::optional<DensityMatrix>* violator) {
  if (rho.total_dim() > 12)
    throw validation_error("direct minimization oracle is restricted to total dimension 12");
  auto measured = delta_Z(rho, basis);
  double at_witness = relative_entropy(rho, measured.witness);
  double slack = std::numeric_limits<double>::infinity();
  bool ok = true;
  for (int i = 0; i < n_samples; ++i) {
    auto sigma = random_cq_state(rho.dims(), basis, splitmix64(seed) + i);
    double s = relative_entropy(rho, sigma);
    double gap = s - at_witness;
    if (gap < slack) slack = gap;
    if (gap < -1e-9) {
      ok = false;
      if (violator) *violator = sigma;
      break;
    }
  }
  if (worst_slack) *worst_slack = slack;
  return ok;
}

double additivity_check(const DensityMatrix& rho, const OrthonormalBasis& basis,
                        int n_copies) {
  if (n_copies < 2) throw validation_error("additivity needs at least two copies");
  double single = delta_Z(rho, basis).value_bits;
  DensityMatrix many = rho;
  for (int c = 1; c < n_copies; ++c) many = tensor(many, rho);
  // Dephase the control factor of every copy; the copies' controls sit at
  // stride num_factors() in the combined dims list.
  std::size_t stride = rho.num_factors();
  DensityMatrix pinched = many;
  for (int c = 0; c < n_copies; ++c)
    pinched = dephase_at(pinched, basis, static_cast<std::size_t>(c) * stride);
  double multi = von_neumann_entropy(pinched) - von_neumann_entropy(many);
  return std::abs(multi - n_copies * single);
}

double convexity_check(const std::vector<DensityMatrix>& states,
                       const std::vector<double>& weights, const OrthonormalBasis& basis) {
  if (states.empty() || states.size() != weights.size())
    throw validation_error("mixture needs matching states and weights");
  double total = 0.0;
  for (double w : weights) {
    if (w < -1e-12) throw validation_error("mixture weights must be non-negative");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-9)
    throw validation_error("mixture weights must sum to 1");
  const auto& dims = states.front().dims();
  Matrix mix = Matrix::Zero(states.front().total_dim(), states.front().total_dim());
  double avg = 0.0;
  for (std::size_t i = 0; i < states.size(); ++i) {
    if (states[i].dims() != dims)
      throw validation_error("mixture states must share one dims list");
    mix += weights[i] * states[i].mat();
    avg += weights[i] * delta_Z(states[i], basis).value_bits;
  }
  double mixed = delta_Z(DensityMatrix(dims, std::move(mix)), basis).value_bits;
  return avg - mixed;
}

double monotonicity_check(const DensityMatrix& rho, const OrthonormalBasis& basis,
                          const GoiaProgram& prog) {
  double before = delta_Z(rho, basis).value_bits;
  auto branches = run_program(prog, rho, basis);
  double after = 0.0;
  for (const auto& br : branches)
    after += br.probability * delta_Z(br.state, basis).value_bits;
  return before - after;
}

} // namespace recoh
