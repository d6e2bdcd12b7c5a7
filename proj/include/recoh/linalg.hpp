/*
 * This code is licensed under the Apache License, Version 2.0. You may
 * obtain a copy of this license in the LICENSE file in the root directory
 * of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.
 */

#ifndef RECOH_LINALG_HPP
#define RECOH_LINALG_HPP

#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace recoh {

using cxd = std::complex<double>;
// Row-major so the in-memory layout matches the row-major JSON file format.
using Matrix = Eigen::Matrix<cxd, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

// Numerical thresholds used by validators and spectral routines.
struct Tolerances {
  double hermitian = 1e-9;    // max |A - A^dag| entry
  double trace = 1e-9;        // |tr(rho) - 1|
  double orthonormal = 1e-9;  // |V^dag V - I| entries
  double eig = 1e-8;          // eigendecomposition reconstruction residual
  double psd = 1e-9;          // eigenvalues below -psd are rejected
  double eig_clamp = 1e-12;   // eigenvalues within this of zero drop out of entropies
  double support = 1e-10;     // kernel cutoff for relative-entropy support checks
  double cptp = 1e-9;         // |sum K^dag K - I| entries
  double incoherent = 1e-10;  // magnitude below which a Kraus entry counts as zero
};

const Tolerances& standard_tolerances();
const Tolerances& strict_tolerances();

// Global cap on the total Hilbert-space dimension of any constructed object.
Index max_total_dim();
void set_max_total_dim(Index cap);

Matrix kron(const Matrix& a, const Matrix& b);
Vector kron_vec(const Vector& a, const Vector& b);
Matrix identity(Index d);

bool is_hermitian(const Matrix& m, double tol);
double max_abs(const Matrix& m);

// Counter-based generator: hashes (seed, counter) so parallel consumers can
// draw independent streams without sharing state.
std::uint64_t splitmix64(std::uint64_t x);
std::mt19937_64 seeded_rng(std::uint64_t seed, std::uint64_t stream = 0);

// Evaluates fn(i) for i in [0, n) on up to `threads` workers, preserving order.
template <typename R, typename Fn>
std::vector<R> parallel_map(std::size_t n, int threads, Fn fn);

} // namespace recoh

#include "recoh/parallel_impl.hpp"

#endif
