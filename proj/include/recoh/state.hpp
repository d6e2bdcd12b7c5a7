/*
 * This code is licensed under the Apache License, Version 2.0. You may
 * obtain a copy of this license in the LICENSE file in the root directory
 * of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.
 */

#ifndef RECOH_STATE_HPP
#define RECOH_STATE_HPP

#include <cstdint>
#include <vector>

#include "recoh/errors.hpp"
#include "recoh/linalg.hpp"

namespace recoh {

// Orthonormal basis of a d-dimensional factor, stored as the columns of a
// unitary. Column c is the basis vector with label c.
class OrthonormalBasis {
public:
  OrthonormalBasis(Matrix vectors, const Tolerances& tol = standard_tolerances());
  static OrthonormalBasis computational(Index dim);

  Index dim() const { return vectors_.rows(); }
  const Matrix& vectors() const { return vectors_; }
  Vector vector(Index c) const { return vectors_.col(c); }
  bool is_computational(double tol = 1e-12) const;

private:
  Matrix vectors_;
};

// Density matrix over a tensor product of registered factors. The first
// factor (dims[0]) is the controlling system A; the rest form B.
class DensityMatrix {
public:
  DensityMatrix(std::vector<Index> dims, Matrix mat,
                const Tolerances& tol = standard_tolerances());

  const std::vector<Index>& dims() const { return dims_; }
  const Matrix& mat() const { return mat_; }
  Index total_dim() const { return mat_.rows(); }
  Index dim(std::size_t k) const { return dims_.at(k); }
  std::size_t num_factors() const { return dims_.size(); }

private:
  std::vector<Index> dims_;
  Matrix mat_;
};

struct Spectrum {
  RealVector values;  // ascending
  Matrix vectors;     // column k pairs with values[k]
};

DensityMatrix pure_state(std::vector<Index> dims, const Vector& psi,
                         const Tolerances& tol = standard_tolerances());

DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b);

// Keeps the listed factors (ascending order) and traces out the rest.
DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<std::size_t>& keep);

// Spectral decomposition with reconstruction and PSD checks for states.
Spectrum eig_hermitian(const Matrix& m, const Tolerances& tol = standard_tolerances());

// All entropies are in bits.
double von_neumann_entropy(const DensityMatrix& rho,
                           const Tolerances& tol = standard_tolerances());

// S(rho || sigma); +infinity when rho leaves the support of sigma.
double relative_entropy(const DensityMatrix& rho, const DensityMatrix& sigma,
                        const Tolerances& tol = standard_tolerances());

double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma,
                const Tolerances& tol = standard_tolerances());

// Pinching of factor `subsystem` in the given basis: sum_c P_c rho P_c with
// P_c projecting that factor onto basis vector c.
DensityMatrix dephase_at(const DensityMatrix& rho, const OrthonormalBasis& basis,
                         std::size_t subsystem);

// Pinching of the controlling factor A.
DensityMatrix dephase(const DensityMatrix& rho, const OrthonormalBasis& basis);

// rho = G G^dag / tr(G G^dag) for a total_dim x rank Ginibre draw.
DensityMatrix random_state(std::vector<Index> dims, Index rank, std::uint64_t seed);

Matrix haar_unitary(Index dim, std::mt19937_64& rng);
Matrix haar_unitary(Index dim, std::uint64_t seed);

} // namespace recoh

#endif
