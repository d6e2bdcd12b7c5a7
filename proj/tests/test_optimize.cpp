/*
 * This code is licensed under the Apache License, Version 2.0. You may
 * obtain a copy of this license in the LICENSE file in the root directory
 * of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.
 */

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "recoh/optimize.hpp"

using namespace recoh;

namespace {

const double kInvRoot2 = 1.0 / std::sqrt(2.0);

// Qutrit control, qubit target: an even mixture of two coherent control
// states, one tagged by |0> and one tagged by |+> on the target.
DensityMatrix mixed_pair_state() {
  Vector phi(3), chi(3);
  phi << 1.0, 1.0, 0.0;
  phi /= std::sqrt(2.0);
  chi << 0.0, 1.0, 1.0;
  chi /= std::sqrt(2.0);
  Vector b0(2), bp(2);
  b0 << 1.0, 0.0;
  bp << kInvRoot2, kInvRoot2;
  Matrix m = 0.5 * kron(Matrix(phi * phi.adjoint()), Matrix(b0 * b0.adjoint())) +
             0.5 * kron(Matrix(chi * chi.adjoint()), Matrix(bp * bp.adjoint()));
  return DensityMatrix({3, 2}, m);
}

DensityMatrix skewed_mixture(double eps) {
  Vector up(2), dn(2), left(2), right(2);
  up << 1.0, 0.0;
  dn << 0.0, 1.0;
  left << kInvRoot2, -kInvRoot2;
  right << kInvRoot2, kInvRoot2;
  auto pr = [](const Vector& v) { return Matrix(v * v.adjoint()); };
  Matrix m = eps * kron(pr(up), pr(up)) +
             (1.0 - eps) / 2.0 * (kron(pr(left), pr(up)) + kron(pr(right), pr(dn)));
  return DensityMatrix({2, 2}, m);
}

DensityMatrix random_qc_state(Index da, Index nb, std::uint64_t seed) {
  auto rng = seeded_rng(seed);
  std::exponential_distribution<double> expo(1.0);
  std::vector<double> p(nb);
  double total = 0.0;
  for (Index k = 0; k < nb; ++k) total += (p[k] = expo(rng));
  Matrix m = Matrix::Zero(da * nb, da * nb);
  for (Index k = 0; k < nb; ++k) {
    auto block = random_state({da}, da, splitmix64(seed + 31 * k));
    Matrix tag = Matrix::Zero(nb, nb);
    tag(k, k) = 1.0;
    m += (p[k] / total) * kron(block.mat(), tag);
  }
  return DensityMatrix({da, nb}, m);
}

double binary_entropy(double p) {
  if (p <= 0.0 || p >= 1.0) return 0.0;
  return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

OptimizerConfig quick_config(int restarts = 8, std::uint64_t seed = 1) {
  OptimizerConfig cfg;
  cfg.restarts = restarts;
  cfg.seed = seed;
  return cfg;
}

} // namespace

TEST_CASE("povm validation") {
  Matrix h(2, 2);
  h << kInvRoot2, kInvRoot2, kInvRoot2, -kInvRoot2;

  SUBCASE("rank-1 projective set") {
    auto povm = make_povm({h.col(0) * h.col(0).adjoint(), h.col(1) * h.col(1).adjoint()});
    CHECK(povm.rank_one);
    CHECK(povm.elements.size() == 2);
  }
  SUBCASE("interior element set loses the rank-1 flag") {
    Matrix half = Matrix::Identity(2, 2) * kInvRoot2;
    auto povm = make_povm({half, half});
    CHECK_FALSE(povm.rank_one);
  }
  SUBCASE("incomplete set rejected") {
    Matrix p0 = Matrix::Zero(2, 2);
    p0(0, 0) = 1.0;
    CHECK_THROWS_AS(make_povm({p0}), validation_error);
  }
  SUBCASE("non-psd element rejected") {
    Matrix bad(2, 2);
    bad << 1.0, 1.0, 1.0, -0.2;
    CHECK_THROWS_AS(make_povm({bad, bad}), validation_error);
  }
}

TEST_CASE("measurement protocol on the qutrit example") {
  auto rho = mixed_pair_state();
  auto z3 = OrthonormalBasis::computational(3);

  double delta = delta_Z(rho, z3).value_bits;
  CHECK(delta == doctest::Approx(0.8925857177444989).epsilon(1e-10));
  CHECK(coherence_rel_ent(partial_trace(rho, {0}), z3) ==
        doctest::Approx(0.6887218755408671).epsilon(1e-10));

  auto result = lqicc_lower_bound(rho, z3, quick_config());
  CHECK(result.converged);
  CHECK(result.value_bits == doctest::Approx(0.8166710741450021).epsilon(1e-7));
  CHECK(result.value_bits <= delta + 1e-6);
  REQUIRE(result.povm.has_value());
  CHECK(result.povm->rank_one);
  // The returned measurement reproduces the reported value.
  CHECK(measured_coherence(rho, z3, *result.povm) ==
        doctest::Approx(result.value_bits).epsilon(1e-9));

  auto report = upper_bound_report(rho, z3, quick_config());
  CHECK(report.gap == doctest::Approx(delta - result.value_bits).epsilon(1e-6));
  CHECK(report.gap > 0.07);
  CHECK(report.gap < 0.08);
}

TEST_CASE("protocol reductions") {
  auto z = OrthonormalBasis::computational(2);

  SUBCASE("product states yield the A-side coherence for any measurement") {
    auto a = random_state({2}, 2, 21);
    auto b = random_state({3}, 3, 22);
    auto rho = tensor(a, b);
    double expect = coherence_rel_ent(a, z);
    auto result = lqicc_lower_bound(rho, z, quick_config(4));
    CHECK(result.value_bits == doctest::Approx(expect).epsilon(1e-7));
  }
  SUBCASE("quantum-classical states close the gap") {
    for (std::uint64_t s = 0; s < 6; ++s) {
      auto rho = random_qc_state(2, 2, 7000 + s);
      auto report = upper_bound_report(rho, z, quick_config());
      CHECK(std::abs(report.gap) <= 1e-6);
    }
  }
  SUBCASE("maximally correlated pure state is tight") {
    Vector psi = Vector::Zero(4);
    psi(0) = std::sqrt(0.9);
    psi(3) = std::sqrt(0.1);
    auto rho = pure_state({2, 2}, psi);
    double delta = delta_Z(rho, z).value_bits;
    CHECK(delta == doctest::Approx(binary_entropy(0.9)).epsilon(1e-12));
    auto result = lqicc_lower_bound(rho, z, quick_config());
    CHECK(result.value_bits == doctest::Approx(delta).epsilon(1e-7));
  }
}

TEST_CASE("bound ordering holds on random states") {
  auto z = OrthonormalBasis::computational(2);
  for (std::uint64_t s = 0; s < 10; ++s) {
    auto rho = random_state({2, 2}, 3, 3000 + s);
    double delta = delta_Z(rho, z).value_bits;
    double trivial = coherence_rel_ent(partial_trace(rho, {0}), z);
    auto result = lqicc_lower_bound(rho, z, quick_config(6, 40 + s));
    CHECK(result.value_bits <= delta + 1e-6);
    CHECK(result.value_bits >= trivial - 1e-6);
  }
}

TEST_CASE("interior measurements never beat the projective optimum") {
  auto z = OrthonormalBasis::computational(2);
  auto rng = seeded_rng(88);
  std::normal_distribution<double> gauss(0.0, 1.0);

  auto random_interior_povm = [&](Index db, int n) {
    std::vector<Matrix> raw(n);
    Matrix total = Matrix::Zero(db, db);
    for (auto& e : raw) {
      Matrix g(db, db);
      for (Index i = 0; i < db; ++i)
        for (Index j = 0; j < db; ++j) g(i, j) = cxd(gauss(rng), gauss(rng));
      e = g * g.adjoint();
      total += e;
    }
    // Normalize into effects, then take operator square roots.
    auto sp = eig_hermitian(total);
    Matrix inv_root = sp.vectors *
                      sp.values.cwiseSqrt().cwiseInverse().asDiagonal().toDenseMatrix().cast<cxd>() *
                      sp.vectors.adjoint();
    std::vector<Matrix> val;
    for (auto& e : raw) {
      Matrix eff = inv_root * e * inv_root;
      auto se = eig_hermitian((eff + eff.adjoint()) / 2.0);
      val.push_back(se.vectors *
                    se.values.cwiseMax(0.0).cwiseSqrt().asDiagonal().toDenseMatrix().cast<cxd>() *
                    se.vectors.adjoint());
    }
    return make_povm(val);
  };

  for (std::uint64_t s = 0; s < 12; ++s) {
    auto rho = random_state({2, 2}, 4, 5000 + s);
    auto best = lqicc_lower_bound(rho, z, quick_config(8, 60 + s));
    for (int k = 0; k < 8; ++k) {
      auto povm = random_interior_povm(2, 3);
      CHECK(measured_coherence(rho, z, povm) <= best.value_bits + 1e-9);
    }
  }
}

TEST_CASE("dilated measurement search stays within bounds") {
  auto z = OrthonormalBasis::computational(2);
  OptimizerConfig cfg = quick_config(6, 5);
  cfg.parameterization = MeasurementParam::NaimarkPovm;
  for (std::uint64_t s = 0; s < 4; ++s) {
    auto rho = random_state({2, 2}, 2, 6100 + s);
    auto projective = lqicc_lower_bound(rho, z, quick_config(6, 5));
    auto dilated = lqicc_lower_bound(rho, z, cfg);
    double delta = delta_Z(rho, z).value_bits;
    CHECK(dilated.value_bits <= delta + 1e-6);
    // The dilated class contains every projective measurement.
    CHECK(dilated.value_bits >= projective.value_bits - 1e-6);
    REQUIRE(dilated.povm.has_value());
    CHECK(dilated.povm->rank_one);
  }
}

TEST_CASE("basis minimization") {
  SUBCASE("product states zero out at the local eigenbasis") {
    auto a = random_state({2}, 2, 31);
    auto rho = tensor(a, random_state({2}, 2, 32));
    auto result = min_basis_delta(rho, quick_config());
    CHECK(result.value_bits == doctest::Approx(0.0).epsilon(1e-7));
    REQUIRE(result.basis.has_value());
    // Minimizer diagonalizes the A marginal.
    Matrix rot = result.basis->vectors().adjoint() * a.mat() * result.basis->vectors();
    CHECK(std::abs(rot(0, 1)) < 1e-4);
  }
  SUBCASE("singlet scores one bit in every basis") {
    Vector psi = Vector::Zero(4);
    psi(1) = kInvRoot2;
    psi(2) = -kInvRoot2;
    auto rho = pure_state({2, 2}, psi);
    auto result = min_basis_delta(rho, quick_config());
    CHECK(result.value_bits == doctest::Approx(1.0).epsilon(1e-9));
    for (std::uint64_t s = 0; s < 5; ++s) {
      OrthonormalBasis any(haar_unitary(2, 100 + s));
      CHECK(delta_Z(rho, any).value_bits == doctest::Approx(1.0).epsilon(1e-9));
    }
  }
  SUBCASE("skewed mixture prefers the left/right basis") {
    auto rho = skewed_mixture(0.01);
    auto z = OrthonormalBasis::computational(2);
    CHECK(delta_Z(rho, z).value_bits == doctest::Approx(0.9597243325771283).epsilon(1e-10));
    auto result = min_basis_delta(rho, quick_config());
    CHECK(result.value_bits == doctest::Approx(0.000246953).epsilon(1e-3));
    CHECK(result.value_bits < 0.1);
    // Minimizer columns align with (|0> -+ |1>)/sqrt(2) up to phase and order.
    Matrix lr(2, 2);
    lr << kInvRoot2, kInvRoot2, -kInvRoot2, kInvRoot2;
    REQUIRE(result.basis.has_value());
    Matrix overlap = result.basis->vectors().adjoint() * lr;
    double worst = 1.0;
    for (Index j = 0; j < 2; ++j) {
      double best = std::max(std::abs(overlap(0, j)), std::abs(overlap(1, j)));
      worst = std::min(worst, best);
    }
    CHECK(std::acos(std::min(worst, 1.0)) < 0.1);
  }
  SUBCASE("never exceeds the fixed-basis value") {
    for (std::uint64_t s = 0; s < 8; ++s) {
      auto rho = random_state({2, 3}, 3, 7100 + s);
      auto result = min_basis_delta(rho, quick_config(6, 70 + s));
      CHECK(result.value_bits <=
            delta_Z(rho, OrthonormalBasis::computational(2)).value_bits + 1e-6);
      for (std::uint64_t t = 0; t < 3; ++t) {
        OrthonormalBasis any(haar_unitary(2, 500 + 10 * s + t));
        CHECK(result.value_bits <= delta_Z(rho, any).value_bits + 1e-6);
      }
    }
  }
}

TEST_CASE("pure-state protocol") {
  auto z = OrthonormalBasis::computational(2);

  SUBCASE("coherent control with clean target") {
    Vector psi = Vector::Zero(4);
    psi(0) = kInvRoot2;
    psi(2) = kInvRoot2;
    auto r = pure_state_recoverable(psi, 2, 2, z);
    CHECK(r.delta == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.translation_residual < 1e-9);
    CHECK(r.schmidt_coeffs(0) == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("partially correlated pair") {
    Vector psi = Vector::Zero(4);
    psi(0) = std::sqrt(0.9);
    psi(3) = std::sqrt(0.1);
    auto r = pure_state_recoverable(psi, 2, 2, z);
    CHECK(r.delta == doctest::Approx(binary_entropy(0.9)).epsilon(1e-12));
    CHECK(r.translation_residual < 1e-9);
    CHECK(r.schmidt_coeffs(0) == doctest::Approx(std::sqrt(0.9)).epsilon(1e-12));
    CHECK(r.schmidt_coeffs(1) == doctest::Approx(std::sqrt(0.1)).epsilon(1e-12));
    // The relabeled form carries the same value.
    CHECK(delta_Z(r.maximally_correlated_form, z).value_bits ==
          doctest::Approx(r.delta).epsilon(1e-12));
  }
  SUBCASE("random pure states certify the route") {
    std::vector<std::pair<Index, Index>> shapes = {{2, 2}, {2, 3}, {3, 3}};
    for (std::uint64_t s = 0; s < 15; ++s) {
      auto [da, db] = shapes[s % shapes.size()];
      Vector psi = haar_unitary(da * db, 8200 + s).col(0);
      auto r = pure_state_recoverable(psi, da, db, OrthonormalBasis::computational(da));
      auto rho = pure_state({da, db}, psi);
      CHECK(r.delta ==
            doctest::Approx(delta_Z(rho, OrthonormalBasis::computational(da)).value_bits)
                .epsilon(1e-9));
      CHECK(r.translation_residual < 1e-9);
      double sum = r.schmidt_coeffs.squaredNorm();
      CHECK(sum == doctest::Approx(1.0).epsilon(1e-10));
    }
  }
  SUBCASE("rotated control basis keeps the certificate") {
    Vector bell = Vector::Zero(4);
    bell(0) = kInvRoot2;
    bell(3) = kInvRoot2;
    Matrix u = haar_unitary(2, std::uint64_t{77});
    Vector psi = kron(u, identity(2)) * bell;
    auto r = pure_state_recoverable(psi, 2, 2, z);
    CHECK(r.translation_residual < 1e-9);
  }
  SUBCASE("unnormalized input rejected") {
    Vector bad = Vector::Ones(4);
    CHECK_THROWS_AS(pure_state_recoverable(bad, 2, 2, z), validation_error);
  }
}

TEST_CASE("restart determinism") {
  auto rho = random_state({2, 2}, 3, 99);
  auto z = OrthonormalBasis::computational(2);
  auto cfg = quick_config(5, 1234);
  auto r1 = lqicc_lower_bound(rho, z, cfg);
  auto r2 = lqicc_lower_bound(rho, z, cfg);
  CHECK(r1.value_bits == r2.value_bits);
  REQUIRE(r1.restart_values.size() == r2.restart_values.size());
  for (std::size_t i = 0; i < r1.restart_values.size(); ++i)
    CHECK(r1.restart_values[i] == r2.restart_values[i]);
  REQUIRE(r1.povm.has_value());
  REQUIRE(r2.povm.has_value());
  REQUIRE(r1.povm->elements.size() == r2.povm->elements.size());
  for (std::size_t i = 0; i < r1.povm->elements.size(); ++i)
    CHECK(max_abs(r1.povm->elements[i] - r2.povm->elements[i]) == 0.0);
  // Threaded run matches the serial one.
  auto cfg_threads = cfg;
  cfg_threads.threads = 4;
  auto r3 = lqicc_lower_bound(rho, z, cfg_threads);
  CHECK(r3.value_bits == r1.value_bits);
}
