/*
 * This code is licensed under the Apache License, Version 2.0. You may
 * obtain a copy of this license in the LICENSE file in the root directory
 * of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.
 */

#include "recoh/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

namespace recoh {

namespace {

constexpr double kProbFloor = 1e-14;

double shannon_bits(const RealVector& p) {
  double s = 0.0;
  for (Index i = 0; i < p.size(); ++i)
    if (p(i) > 1e-12) s -= p(i) * std::log2(p(i));
  return s;
}

double entropy_bits(const Matrix& hermitian) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian, Eigen::EigenvaluesOnly);
  double s = 0.0;
  for (Index i = 0; i < es.eigenvalues().size(); ++i) {
    double lam = es.eigenvalues()(i);
    if (lam > 1e-12) s -= lam * std::log2(lam);
  }
  return s;
}

// Post-multiplies columns (i, j) by the rotation
// [[cos t, -e^{-i phi} sin t], [e^{i phi} sin t, cos t]].
void rotate_cols(Matrix& m, Index i, Index j, double theta, double phi) {
  cxd ph = std::exp(cxd(0.0, phi));
  Vector ci = m.col(i), cj = m.col(j);
  double c = std::cos(theta), s = std::sin(theta);
  m.col(i) = c * ci + ph * s * cj;
  m.col(j) = -std::conj(ph) * s * ci + c * cj;
}

struct SweepResult {
  Matrix unitary;
  double value;
  bool converged;
};

// Derivative-free ascent over the unitary group: cycles through column pairs
// and the two phase slices, coarse-scanning each rotation angle and refining
// the best bracket by golden section.
SweepResult givens_maximize(const std::function<double(const Matrix&)>& f, Matrix w,
                            int max_sweeps, double value_tol, double angle_tol) {
  constexpr int kCoarse = 12;
  constexpr double kGolden = 0.6180339887498949;
  const double lo0 = -M_PI / 2.0, hi0 = M_PI / 2.0;
  const double step = (hi0 - lo0) / kCoarse;
  Index d = w.rows();
  double cur = f(w);
  bool converged = false;

  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double at_sweep_start = cur;
    for (Index i = 0; i + 1 < d; ++i) {
      for (Index j = i + 1; j < d; ++j) {
        for (double phi : {0.0, M_PI / 2.0}) {
          auto value_at = [&](double theta) {
            Matrix cand = w;
            rotate_cols(cand, i, j, theta, phi);
            return f(cand);
          };
          double best_theta = 0.0, best_val = cur;
          for (int k = 0; k < kCoarse; ++k) {
            double theta = lo0 + k * step;
            double v = value_at(theta);
            if (v > best_val) {
              best_val = v;
              best_theta = theta;
            }
          }
          double lo = best_theta - step, hi = best_theta + step;
          double x1 = hi - kGolden * (hi - lo), x2 = lo + kGolden * (hi - lo);
          double f1 = value_at(x1), f2 = value_at(x2);
          while (hi - lo > angle_tol) {
            if (f1 < f2) {
              lo = x1;
              x1 = x2;
              f1 = f2;
              x2 = lo + kGolden * (hi - lo);
              f2 = value_at(x2);
            } else {
              hi = x2;
              x2 = x1;
              f2 = f1;
              x1 = hi - kGolden * (hi - lo);
              f1 = value_at(x1);
            }
          }
          double theta = (f1 > f2) ? x1 : x2;
          double v = std::max(f1, f2);
          if (v > best_val) {
            best_val = v;
            best_theta = theta;
          }
          if (best_val > cur) {
            rotate_cols(w, i, j, best_theta, phi);
            cur = best_val;
          }
        }
      }
    }
    if (cur - at_sweep_start < value_tol) {
      converged = true;
      break;
    }
  }
  return SweepResult{std::move(w), cur, converged};
}

// Runs seeded Haar restarts in parallel and keeps the best value; ties go to
// the earliest restart so results are reproducible.
SweepResult restarted_maximize(Index d, const std::function<double(const Matrix&)>& f,
                               const OptimizerConfig& config,
                               std::vector<double>* restart_values) {
  if (config.restarts < 1) throw validation_error("optimizer needs at least one restart");
  auto runs = parallel_map<SweepResult>(
      static_cast<std::size_t>(config.restarts), config.threads, [&](std::size_t r) {
        Matrix init = haar_unitary(d, splitmix64(config.seed ^ (0x9e3779b97f4a7c15ull * (r + 1))));
        return givens_maximize(f, std::move(init), config.max_sweeps, config.value_tol,
                               config.angle_tol);
      });
  if (restart_values) {
    restart_values->clear();
    for (const auto& run : runs) restart_values->push_back(run.value);
  }
  std::size_t best = 0;
  for (std::size_t r = 1; r < runs.size(); ++r)
    if (runs[r].value > runs[best].value) best = r;
  return runs[best];
}

// A-side rotation of the control basis applied once up front, so objectives
// can treat the control basis as computational.
Matrix rotate_control_frame(const DensityMatrix& rho, const OrthonormalBasis& basis) {
  if (basis.is_computational()) return rho.mat();
  Index db = rho.total_dim() / rho.dim(0);
  Matrix big = kron(basis.vectors(), identity(db));
  return big.adjoint() * rho.mat() * big;
}

// Objective for a rank-1 measurement given by the columns of w: the average
// coherence left on A after reading outcome k off the B side.
double projective_objective(const Matrix& rho_z, Index da, Index db, const Matrix& w) {
  Matrix big = kron(identity(da), w);
  Matrix r = big.adjoint() * rho_z * big;
  double total = 0.0;
  for (Index k = 0; k < w.cols(); ++k) {
    Matrix mk(da, da);
    for (Index a = 0; a < da; ++a)
      for (Index a2 = 0; a2 < da; ++a2) mk(a, a2) = r(a * db + k, a2 * db + k);
    double p = mk.trace().real();
    if (p <= kProbFloor) continue;
    mk /= p;
    mk = (mk + mk.adjoint()) / 2.0;
    RealVector diag = mk.diagonal().real();
    total += p * std::max(shannon_bits(diag) - entropy_bits(mk), 0.0);
  }
  return total;
}

Index support_rank(const Matrix& hermitian, double cutoff) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian, Eigen::EigenvaluesOnly);
  Index r = 0;
  for (Index i = 0; i < es.eigenvalues().size(); ++i)
    if (es.eigenvalues()(i) > cutoff) ++r;
  return r;
}

} // namespace

Povm make_povm(std::vector<Matrix> elements, const Tolerances& tol) {
  if (elements.empty()) throw validation_error("measurement needs at least one element");
  Index db = elements.front().rows();
  Matrix acc = Matrix::Zero(db, db);
  bool rank_one = true;
  for (const auto& m : elements) {
    if (m.rows() != db || m.cols() != db)
      throw validation_error("measurement elements must share one square shape");
    if (!is_hermitian(m, tol.hermitian))
      throw validation_error("measurement element is not Hermitian");
    Eigen::SelfAdjointEigenSolver<Matrix> es(m, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -tol.psd)
      throw validation_error("measurement element is not positive semidefinite");
    if (support_rank(m, 1e-9) > 1) rank_one = false;
    acc += m.adjoint() * m;
  }
  if (max_abs(acc - Matrix::Identity(db, db)) > tol.cptp)
    throw validation_error("measurement elements do not satisfy sum M^dag M = I");
  return Povm{std::move(elements), rank_one};
}

double measured_coherence(const DensityMatrix& rho, const OrthonormalBasis& basis,
                          const Povm& povm) {
  if (rho.num_factors() < 2)
    throw validation_error("measurement protocol needs a bipartite state");
  Index da = rho.dim(0);
  Index db = rho.total_dim() / da;
  if (basis.dim() != da)
    throw validation_error("control basis dimension does not match A");
  if (povm.elements.front().rows() != db)
    throw validation_error("measurement dimension does not match B");
  Matrix rho_z = rotate_control_frame(rho, basis);
  double total = 0.0;
  for (const auto& m : povm.elements) {
    Matrix big = kron(identity(da), m);
    Matrix post = big * rho_z * big.adjoint();
    // A marginal of the unnormalized branch.
    Matrix mk = Matrix::Zero(da, da);
    for (Index a = 0; a < da; ++a)
      for (Index a2 = 0; a2 < da; ++a2)
        for (Index b = 0; b < db; ++b) mk(a, a2) += post(a * db + b, a2 * db + b);
    double p = mk.trace().real();
    if (p <= kProbFloor) continue;
    mk /= p;
    mk = (mk + mk.adjoint()) / 2.0;
    total += p * std::max(shannon_bits(RealVector(mk.diagonal().real())) - entropy_bits(mk), 0.0);
  }
  return total;
}

BoundResult lqicc_lower_bound(const DensityMatrix& rho, const OrthonormalBasis& basis,
                              const OptimizerConfig& config) {
  if (rho.num_factors() < 2)
    throw validation_error("measurement protocol needs a bipartite state");
  Index da = rho.dim(0);
  Index db = rho.total_dim() / da;
  if (basis.dim() != da)
    throw validation_error("control basis dimension does not match A");

  Matrix rho_z = rotate_control_frame(rho, basis);
  Index anc = 1;
  if (config.parameterization == MeasurementParam::NaimarkPovm) {
    // Dilate B far enough to hold rank^2 rank-1 elements.
    Matrix a_marg = Matrix::Zero(da, da);
    for (Index a = 0; a < da; ++a)
      for (Index a2 = 0; a2 < da; ++a2)
        for (Index b = 0; b < db; ++b) a_marg(a, a2) += rho_z(a * db + b, a2 * db + b);
    Index r = support_rank(a_marg, 1e-10);
    anc = (r * r + db - 1) / db;
    if (anc > 1) {
      if (rho.total_dim() > max_total_dim() / anc)
        throw capacity_error("measurement dilation exceeds the dimension cap");
      Matrix anc00 = Matrix::Zero(anc, anc);
      anc00(0, 0) = 1.0;
      rho_z = kron(rho_z, anc00);
      // Regroup (A, B, anc) as (A, B*anc): indices already nest that way.
    }
  }
  Index dsearch = db * anc;

  auto objective = [&, da, dsearch](const Matrix& w) {
    return projective_objective(rho_z, da, dsearch, w);
  };

  BoundResult result;
  auto best = restarted_maximize(dsearch, objective, config, &result.restart_values);
  result.converged = best.converged;
  result.value_bits = std::clamp(best.value, 0.0, std::log2(static_cast<double>(da)));

  // Collapse dilated columns back to measurement operators on B.
  std::vector<Matrix> elements;
  for (Index k = 0; k < dsearch; ++k) {
    Vector m = Vector::Zero(db);
    for (Index b = 0; b < db; ++b) m(b) = best.unitary(b * anc, k);
    double norm = m.norm();
    if (norm < 1e-12) continue;
    elements.push_back(Matrix(m * m.adjoint()) / norm);
  }
  result.povm = make_povm(std::move(elements));

  double delta = delta_Z(rho, basis).value_bits;
  if (result.value_bits > delta + 1e-6)
    throw std::logic_error("measurement protocol value exceeded the upper bound");
  return result;
}

BoundResult min_basis_delta(const DensityMatrix& rho, const OptimizerConfig& config) {
  if (rho.num_factors() < 2)
    throw validation_error("basis search needs a bipartite state");
  Index da = rho.dim(0);
  Index db = rho.total_dim() / da;
  double base_entropy = von_neumann_entropy(rho);

  // Maximize the negated dephased entropy over control bases.
  auto objective = [&, da, db](const Matrix& v) {
    Matrix big = kron(v, identity(db));
    Matrix rot = big.adjoint() * rho.mat() * big;
    double s = 0.0;
    for (Index c = 0; c < da; ++c) {
      Matrix block = rot.block(c * db, c * db, db, db);
      s += entropy_bits((block + block.adjoint()) / 2.0);
    }
    return -s;
  };

  BoundResult result;
  auto best = restarted_maximize(da, objective, config, &result.restart_values);
  for (auto& v : result.restart_values) v = -v - base_entropy;
  result.converged = best.converged;
  result.value_bits =
      std::clamp(-best.value - base_entropy, 0.0, std::log2(static_cast<double>(da)));
  result.basis = OrthonormalBasis(best.unitary);
  return result;
}

PureStateResult pure_state_recoverable(const Vector& psi, Index d_a, Index d_b,
                                       const OrthonormalBasis& basis) {
  if (psi.size() != d_a * d_b)
    throw validation_error("state vector length does not match the dims");
  if (std::abs(psi.norm() - 1.0) > standard_tolerances().trace)
    throw validation_error("state vector is not normalized");
  DensityMatrix rho = pure_state({d_a, d_b}, psi);
  double delta = delta_Z(rho, basis).value_bits;

  // Schmidt spectrum from the coefficient matrix.
  Matrix coeff(d_a, d_b);
  for (Index a = 0; a < d_a; ++a)
    for (Index b = 0; b < d_b; ++b) coeff(a, b) = psi(a * d_b + b);
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(coeff);
  RealVector schmidt = svd.singularValues();

  // Control-label distribution in the given basis.
  Matrix in_frame = basis.vectors().adjoint() * coeff;
  RealVector p(d_a);
  for (Index c = 0; c < d_a; ++c) p(c) = in_frame.row(c).squaredNorm();

  // Maximally correlated form: the B side is relabeled onto a copy of A.
  Vector mc = Vector::Zero(d_a * d_a);
  for (Index c = 0; c < d_a; ++c)
    if (p(c) > 0.0) mc += std::sqrt(p(c)) * kron_vec(basis.vector(c), Vector::Unit(d_a, c));
  DensityMatrix mc_form = pure_state({d_a, d_a}, mc);
  double delta_mc = delta_Z(mc_form, basis).value_bits;

  // Ancilla route: grow B by a translation register and shift it by the
  // control label; the value must not move.
  Vector grown = kron_vec(psi, Vector::Unit(d_a, 0));
  Matrix shift = Matrix::Zero(d_a, d_a);
  for (Index k = 0; k < d_a; ++k) shift((k + 1) % d_a, k) = 1.0;
  Matrix u = Matrix::Zero(d_a * d_b * d_a, d_a * d_b * d_a);
  Matrix power = Matrix::Identity(d_a, d_a);
  for (Index c = 0; c < d_a; ++c) {
    Vector v = basis.vector(c);
    u += kron(Matrix(v * v.adjoint()), kron(identity(d_b), power));
    power = shift * power;
  }
  DensityMatrix translated = pure_state({d_a, d_b, d_a}, u * grown);
  double delta_tc = delta_Z(translated, basis).value_bits;

  double residual = std::max(std::abs(delta_tc - delta), std::abs(delta_mc - delta));
  return PureStateResult{delta, std::move(schmidt), std::move(mc_form), residual};
}

UpperBoundReport upper_bound_report(const DensityMatrix& rho, const OrthonormalBasis& basis,
                                    const OptimizerConfig& config) {
  double delta = delta_Z(rho, basis).value_bits;
  auto lower = lqicc_lower_bound(rho, basis, config);
  return UpperBoundReport{delta, lower.value_bits, delta - lower.value_bits};
}

} // namespace recoh
