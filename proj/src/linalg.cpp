/*
 * This code is licensed under the Apache License, Version 2.0. You may
 * obtain a copy of this license in the LICENSE file in the root directory
 * of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.
 */

#include "recoh/linalg.hpp"

#include <atomic>

namespace recoh {

const Tolerances& standard_tolerances() {
  static const Tolerances t{};
  return t;
}

const Tolerances& strict_tolerances() {
  static const Tolerances t = [] {
    Tolerances s;
    s.hermitian = 1e-11;
    s.trace = 1e-11;
    s.orthonormal = 1e-11;
    s.eig = 1e-10;
    s.psd = 1e-11;
    s.eig_clamp = 1e-14;
    s.support = 1e-12;
    s.cptp = 1e-11;
    s.incoherent = 1e-12;
    return s;
  }();
  return t;
}

namespace {
std::atomic<Index> g_max_total_dim{4096};
}

Index max_total_dim() { return g_max_total_dim.load(); }

void set_max_total_dim(Index cap) { g_max_total_dim.store(cap); }

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Vector kron_vec(const Vector& a, const Vector& b) {
  Vector out(a.size() * b.size());
  for (Index i = 0; i < a.size(); ++i)
    out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

Matrix identity(Index d) { return Matrix::Identity(d, d); }

bool is_hermitian(const Matrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

std::mt19937_64 seeded_rng(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t s = splitmix64(seed ^ splitmix64(stream ^ 0x5bf0363db2a36cd1ull));
  return std::mt19937_64(s);
}

} // namespace recoh
