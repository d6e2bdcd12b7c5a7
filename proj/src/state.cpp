/*
 * This code is licensed under the Apache License, Version 2.0. You may
 * obtain a copy of this license in the LICENSE file in the root directory
 * of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.
 */

#include "recoh/state.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace recoh {

namespace {

Index checked_total(const std::vector<Index>& dims) {
  if (dims.empty()) throw validation_error("dims must be non-empty");
  Index total = 1;
  for (Index d : dims) {
    if (d < 1) throw validation_error("factor dimensions must be positive");
    if (total > max_total_dim() / d) {
      std::ostringstream os;
      os << "total dimension exceeds cap " << max_total_dim();
      throw capacity_error(os.str());
    }
    total *= d;
  }
  return total;
}

// Row/column strides of each factor in the flattened index.
std::vector<Index> strides_of(const std::vector<Index>& dims) {
  std::vector<Index> s(dims.size());
  Index acc = 1;
  for (std::size_t k = dims.size(); k-- > 0;) {
    s[k] = acc;
    acc *= dims[k];
  }
  return s;
}

double xlog2x(double x) { return x * std::log2(x); }

} // namespace

OrthonormalBasis::OrthonormalBasis(Matrix vectors, const Tolerances& tol)
    : vectors_(std::move(vectors)) {
  if (vectors_.rows() == 0 || vectors_.rows() != vectors_.cols())
    throw validation_error("basis must be a non-empty square set of column vectors");
  Matrix gram = vectors_.adjoint() * vectors_;
  gram -= Matrix::Identity(vectors_.rows(), vectors_.rows());
  if (max_abs(gram) > tol.orthonormal)
    throw validation_error("basis vectors are not orthonormal");
}

OrthonormalBasis OrthonormalBasis::computational(Index dim) {
  return OrthonormalBasis(Matrix::Identity(dim, dim));
}

bool OrthonormalBasis::is_computational(double tol) const {
  Matrix diff = vectors_ - Matrix::Identity(vectors_.rows(), vectors_.cols());
  return max_abs(diff) <= tol;
}

DensityMatrix::DensityMatrix(std::vector<Index> dims, Matrix mat, const Tolerances& tol)
    : dims_(std::move(dims)), mat_(std::move(mat)) {
  Index total = checked_total(dims_);
  if (mat_.rows() != total || mat_.cols() != total)
    throw validation_error("matrix shape does not match the product of dims");
  if (!is_hermitian(mat_, tol.hermitian))
    throw validation_error("density matrix is not Hermitian");
  double tr = mat_.trace().real();
  if (std::abs(tr - 1.0) > tol.trace || std::abs(mat_.trace().imag()) > tol.trace)
    throw validation_error("density matrix trace is not 1");
  Eigen::SelfAdjointEigenSolver<Matrix> es(mat_, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw validation_error("eigenvalue computation failed");
  if (es.eigenvalues().minCoeff() < -tol.psd)
    throw validation_error("density matrix has a negative eigenvalue");
}

DensityMatrix pure_state(std::vector<Index> dims, const Vector& psi, const Tolerances& tol) {
  Index total = checked_total(dims);
  if (psi.size() != total)
    throw validation_error("state vector length does not match the product of dims");
  if (std::abs(psi.norm() - 1.0) > tol.trace)
    throw validation_error("state vector is not normalized");
  Matrix rho = psi * psi.adjoint();
  return DensityMatrix(std::move(dims), std::move(rho), tol);
}

DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b) {
  std::vector<Index> dims = a.dims();
  dims.insert(dims.end(), b.dims().begin(), b.dims().end());
  checked_total(dims);
  return DensityMatrix(std::move(dims), kron(a.mat(), b.mat()));
}

DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<std::size_t>& keep) {
  const auto& dims = rho.dims();
  std::vector<std::size_t> ks = keep;
  std::sort(ks.begin(), ks.end());
  ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
  if (ks.empty()) throw validation_error("partial trace must keep at least one factor");
  for (std::size_t k : ks)
    if (k >= dims.size()) throw validation_error("partial trace index out of range");

  std::vector<std::size_t> traced;
  for (std::size_t k = 0; k < dims.size(); ++k)
    if (!std::binary_search(ks.begin(), ks.end(), k)) traced.push_back(k);

  auto strides = strides_of(dims);
  Index dk = 1, dt = 1;
  for (std::size_t k : ks) dk *= dims[k];
  for (std::size_t k : traced) dt *= dims[k];

  auto offset = [&](const std::vector<std::size_t>& factors, Index flat) {
    Index off = 0;
    for (std::size_t pos = factors.size(); pos-- > 0;) {
      std::size_t k = factors[pos];
      off += (flat % dims[k]) * strides[k];
      flat /= dims[k];
    }
    return off;
  };

  Matrix out = Matrix::Zero(dk, dk);
  for (Index i = 0; i < dk; ++i) {
    Index ri = offset(ks, i);
    for (Index j = 0; j < dk; ++j) {
      Index cj = offset(ks, j);
      cxd acc = 0.0;
      for (Index t = 0; t < dt; ++t) {
        Index rt = offset(traced, t);
        acc += rho.mat()(ri + rt, cj + rt);
      }
      out(i, j) = acc;
    }
  }
  std::vector<Index> out_dims;
  for (std::size_t k : ks) out_dims.push_back(dims[k]);
  return DensityMatrix(std::move(out_dims), std::move(out));
}

Spectrum eig_hermitian(const Matrix& m, const Tolerances& tol) {
  if (m.rows() != m.cols()) throw validation_error("eigendecomposition needs a square matrix");
  if (!is_hermitian(m, tol.hermitian))
    throw validation_error("matrix is not Hermitian");
  Eigen::SelfAdjointEigenSolver<Matrix> es(m);
  if (es.info() != Eigen::Success)
    throw validation_error("eigenvalue computation failed");
  Spectrum sp{es.eigenvalues(), es.eigenvectors()};
  Matrix recon = sp.vectors * sp.values.asDiagonal().toDenseMatrix().cast<cxd>() * sp.vectors.adjoint();
  if (max_abs(recon - m) > tol.eig)
    throw validation_error("eigendecomposition reconstruction residual too large");
  return sp;
}

double von_neumann_entropy(const DensityMatrix& rho, const Tolerances& tol) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho.mat(), Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw validation_error("eigenvalue computation failed");
  double s = 0.0;
  for (Index i = 0; i < es.eigenvalues().size(); ++i) {
    double lam = es.eigenvalues()(i);
    if (lam > tol.eig_clamp) s -= xlog2x(lam);
  }
  return std::max(s, 0.0);
}

double relative_entropy(const DensityMatrix& rho, const DensityMatrix& sigma,
                        const Tolerances& tol) {
  if (rho.dims() != sigma.dims())
    throw validation_error("relative entropy needs matching dims");
  Spectrum ss = eig_hermitian(sigma.mat(), tol);

  Index d = sigma.total_dim();
  Matrix kernel = Matrix::Zero(d, d);
  bool has_kernel = false;
  for (Index j = 0; j < d; ++j) {
    if (ss.values(j) <= tol.support) {
      kernel += ss.vectors.col(j) * ss.vectors.col(j).adjoint();
      has_kernel = true;
    }
  }
  if (has_kernel) {
    double leak = (kernel * rho.mat() * kernel).norm();
    if (leak > 1e-8) return std::numeric_limits<double>::infinity();
  }

  Spectrum sr = eig_hermitian(rho.mat(), tol);
  double s = 0.0;
  for (Index i = 0; i < d; ++i) {
    double lam = sr.values(i);
    if (lam > tol.eig_clamp) s += xlog2x(lam);
  }
  for (Index j = 0; j < d; ++j) {
    double sv = ss.values(j);
    if (sv <= tol.support) continue;
    double pop = (ss.vectors.col(j).adjoint() * rho.mat() * ss.vectors.col(j))(0).real();
    s -= pop * std::log2(sv);
  }
  return std::max(s, 0.0);
}

double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma, const Tolerances& tol) {
  if (rho.dims() != sigma.dims())
    throw validation_error("fidelity needs matching dims");
  auto half_power = [&](const DensityMatrix& m) {
    Spectrum sp = eig_hermitian(m.mat(), tol);
    RealVector sq = sp.values.cwiseMax(0.0).cwiseSqrt();
    return Matrix(sp.vectors * sq.asDiagonal().toDenseMatrix().cast<cxd>() * sp.vectors.adjoint());
  };
  // F = (nuclear norm of sqrt(rho) sqrt(sigma))^2, more stable than the
  // spectral form when either state is rank deficient.
  Matrix prod = half_power(rho) * half_power(sigma);
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(prod);
  double f = svd.singularValues().sum();
  f *= f;
  return std::clamp(f, 0.0, 1.0);
}

DensityMatrix dephase_at(const DensityMatrix& rho, const OrthonormalBasis& basis,
                         std::size_t subsystem) {
  const auto& dims = rho.dims();
  if (subsystem >= dims.size()) throw validation_error("dephasing factor index out of range");
  if (basis.dim() != dims[subsystem])
    throw validation_error("basis dimension does not match the dephased factor");

  auto strides = strides_of(dims);
  Index stride = strides[subsystem];
  Index d = dims[subsystem];
  Index total = rho.total_dim();
  auto sub_index = [&](Index flat) { return (flat / stride) % d; };

  Matrix work = rho.mat();
  bool rotated = !basis.is_computational();
  Matrix w;
  if (rotated) {
    Index pre = 1, post = 1;
    for (std::size_t k = 0; k < subsystem; ++k) pre *= dims[k];
    for (std::size_t k = subsystem + 1; k < dims.size(); ++k) post *= dims[k];
    w = kron(kron(identity(pre), basis.vectors()), identity(post));
    work = w.adjoint() * work * w;
  }
  for (Index r = 0; r < total; ++r)
    for (Index c = 0; c < total; ++c)
      if (sub_index(r) != sub_index(c)) work(r, c) = 0.0;
  if (rotated) work = w * work * w.adjoint();
  work = (work + work.adjoint()) / 2.0;
  return DensityMatrix(dims, std::move(work));
}

DensityMatrix dephase(const DensityMatrix& rho, const OrthonormalBasis& basis) {
  return dephase_at(rho, basis, 0);
}

DensityMatrix random_state(std::vector<Index> dims, Index rank, std::uint64_t seed) {
  Index total = checked_total(dims);
  if (rank < 1 || rank > total)
    throw validation_error("rank must lie in [1, total dimension]");
  auto rng = seeded_rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix g(total, rank);
  for (Index i = 0; i < total; ++i)
    for (Index j = 0; j < rank; ++j)
      g(i, j) = cxd(gauss(rng), gauss(rng)) / std::sqrt(2.0);
  Matrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return DensityMatrix(std::move(dims), std::move(rho));
}

Matrix haar_unitary(Index dim, std::mt19937_64& rng) {
  if (dim < 1) throw validation_error("unitary dimension must be positive");
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix g(dim, dim);
  for (Index i = 0; i < dim; ++i)
    for (Index j = 0; j < dim; ++j)
      g(i, j) = cxd(gauss(rng), gauss(rng)) / std::sqrt(2.0);
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
  Eigen::MatrixXcd q = qr.householderQ();
  Eigen::VectorXcd diag = qr.matrixQR().diagonal();
  for (Index j = 0; j < dim; ++j) {
    cxd r = diag(j);
    cxd phase = std::abs(r) > 0 ? r / std::abs(r) : cxd(1.0, 0.0);
    q.col(j) *= phase;
  }
  return q;
}

Matrix haar_unitary(Index dim, std::uint64_t seed) {
  auto rng = seeded_rng(seed);
  return haar_unitary(dim, rng);
}

} // namespace recoh
