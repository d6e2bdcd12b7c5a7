/*
 * This code is licensed under the Apache License, Version 2.0. You may
 * obtain a copy of this license in the LICENSE file in the root directory
 * of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.
 */

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>
#include <vector>

#include "recoh/channel.hpp"
#include "recoh/dqc1.hpp"
#include "recoh/errors.hpp"
#include "recoh/measures.hpp"
#include "recoh/state.hpp"

using namespace recoh;

namespace {

Matrix alternating_sign_diag(Index dim) {
  Matrix u = Matrix::Zero(dim, dim);
  for (Index i = 0; i < dim; ++i)
    u(i, i) = (i % 2 == 0) ? 1.0 : -1.0;
  return u;
}

// Reference implementation that materializes the full controlled unitary.
Matrix reduced_probe_full(const ProbeSpec& probe, const Matrix& u) {
  const Index d = u.rows();
  Matrix cu = Matrix::Zero(2 * d, 2 * d);
  cu.topLeftCorner(d, d) = identity(d);
  cu.bottomRightCorner(d, d) = u;
  const Matrix rho_in = kron(probe_matrix(probe), Matrix(identity(d) / static_cast<double>(d)));
  const Matrix rho_out = cu * rho_in * cu.adjoint();
  return partial_trace(DensityMatrix({2, d}, rho_out), {0}).mat();
}

} // namespace

TEST_CASE("probe matrix construction and validation") {
  const Matrix plus = probe_matrix({0.5, 1.0, 0.0});
  CHECK(std::abs(plus(0, 0) - cxd(0.5, 0.0)) == 0.0);
  CHECK(std::abs(plus(0, 1) - cxd(0.5, 0.0)) == 0.0);

  const Matrix phased = probe_matrix({0.5, 0.8, 0.7});
  CHECK(std::abs(phased(0, 1) - 0.4 * std::exp(cxd(0.0, 0.7))) < 1e-15);
  CHECK(std::abs(phased(1, 0) - std::conj(phased(0, 1))) == 0.0);

  // The probe must stay positive: p(1-p) >= (a/2)^2.
  CHECK_THROWS_AS(probe_matrix({0.9, 1.0, 0.0}), validation_error);
  CHECK_THROWS_AS(probe_matrix({1.2, 0.0, 0.0}), validation_error);
  CHECK_THROWS_AS(probe_matrix({0.5, -0.1, 0.0}), validation_error);
  CHECK_NOTHROW(probe_matrix({0.9, 0.6, 0.0}));
  CHECK_NOTHROW(DensityMatrix({2}, probe_matrix({0.9, 0.6, 0.3})));
}

TEST_CASE("exact reduced probe for identity and traceless targets") {
  const Dqc1Exact id_run = dqc1_exact({0.5, 1.0, 0.0}, identity(2));
  CHECK(id_run.sx == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(id_run.sy == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(std::abs(id_run.trace_over_dim - cxd(1.0, 0.0)) < 1e-15);

  const Dqc1Exact z_run = dqc1_exact({0.5, 1.0, 0.0}, alternating_sign_diag(2));
  CHECK(z_run.sx == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(z_run.sy == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(std::abs(z_run.trace_over_dim) < 1e-15);

  // Populations never move, only the off-diagonal scales by conj(t).
  const Dqc1Exact skew = dqc1_exact({0.7, 0.5, 0.3}, alternating_sign_diag(8));
  CHECK(skew.reduced_probe(0, 0).real() == doctest::Approx(0.7).epsilon(1e-15));
  CHECK(std::abs(skew.reduced_probe(0, 1)) < 1e-15);

  Matrix not_unitary = identity(3);
  not_unitary(0, 0) = 2.0;
  CHECK_THROWS_AS(dqc1_exact({0.5, 1.0, 0.0}, not_unitary), validation_error);
  CHECK_THROWS_AS(dqc1_exact({0.5, 1.0, 0.0}, Matrix::Zero(2, 3)), validation_error);
}

TEST_CASE("pauli expectations encode the normalized trace") {
  auto rng = seeded_rng(41);
  for (int rep = 0; rep < 10; ++rep) {
    const Matrix u = haar_unitary(8, rng);
    const ProbeSpec probe{0.5, 0.9, 0.25 * rep};
    const Dqc1Exact run = dqc1_exact(probe, u);
    const cxd t = u.trace() / 8.0;
    const cxd recovered = std::exp(cxd(0.0, probe.phase)) * cxd(run.sx, run.sy) / probe.coherence;
    CHECK(std::abs(recovered - t) < 1e-13);
    CHECK(std::abs(run.trace_over_dim - t) < 1e-15);
  }
}

TEST_CASE("exact reduced probe agrees with the full controlled circuit") {
  auto rng = seeded_rng(42);
  const std::vector<Index> dims = {2, 3, 8, 16};
  const std::vector<ProbeSpec> probes = {
      {0.5, 1.0, 0.0}, {0.5, 0.4, 1.1}, {0.8, 0.7, -0.6}, {0.3, 0.2, 2.4}};
  for (Index d : dims) {
    for (const ProbeSpec& probe : probes) {
      const Matrix u = haar_unitary(d, rng);
      const Dqc1Exact fast = dqc1_exact(probe, u);
      CHECK(max_abs(fast.reduced_probe - reduced_probe_full(probe, u)) < 1e-12);
    }
  }
}

TEST_CASE("analytic standard error closed form") {
  CHECK(dqc1_analytic_se(1.0, 1.0, 1e6) == doctest::Approx(1e-3).epsilon(1e-14));
  CHECK(dqc1_analytic_se(1.0, 0.0, 1e6) ==
        doctest::Approx(std::sqrt(2.0) * 1e-3).epsilon(1e-14));
  // Halving a doubles the SE when the trace vanishes.
  CHECK(dqc1_analytic_se(0.5, 0.0, 1e4) / dqc1_analytic_se(1.0, 0.0, 1e4) ==
        doctest::Approx(2.0).epsilon(1e-12));
  CHECK_THROWS_AS(dqc1_analytic_se(0.0, 0.5, 100.0), validation_error);
  CHECK_THROWS_AS(dqc1_analytic_se(1.0, 0.5, 0.0), validation_error);
}

TEST_CASE("sampled estimate converges to the normalized trace") {
  const std::int64_t n = 2'000'000;

  const Dqc1Report id_run = dqc1_sample({0.5, 1.0, 0.0}, identity(4), n, 7);
  CHECK(id_run.runs_per_pauli == n / 2);
  CHECK(id_run.analytic_se == doctest::Approx(1e-3).epsilon(1e-12));
  CHECK(id_run.precision_bits == doctest::Approx(-std::log2(1e-3)).epsilon(1e-12));
  CHECK(std::abs(id_run.estimate - cxd(1.0, 0.0)) < 4.0 * id_run.analytic_se);
  CHECK(id_run.empirical_se == doctest::Approx(id_run.analytic_se).epsilon(0.10));
  CHECK(id_run.probe_coherence_bits == doctest::Approx(1.0).epsilon(1e-12));

  const Dqc1Report z_run = dqc1_sample({0.5, 1.0, 0.0}, alternating_sign_diag(8), n, 11);
  CHECK(z_run.analytic_se == doctest::Approx(std::sqrt(2.0) * 1e-3).epsilon(1e-12));
  CHECK(std::abs(z_run.estimate) < 4.0 * z_run.analytic_se);
  CHECK(z_run.empirical_se == doctest::Approx(z_run.analytic_se).epsilon(0.10));

  auto rng = seeded_rng(43);
  const Matrix u = haar_unitary(4, rng);
  const ProbeSpec probe{0.5, 0.8, 0.7};
  const Dqc1Report haar_run = dqc1_sample(probe, u, n, 13);
  CHECK(std::abs(haar_run.estimate - haar_run.exact_trace_over_dim) <
        5.0 * haar_run.analytic_se);
  CHECK(haar_run.probe_coherence_bits ==
        doctest::Approx(coherence_rel_ent(DensityMatrix({2}, probe_matrix(probe)),
                                          OrthonormalBasis::computational(2)))
            .epsilon(1e-12));
}

TEST_CASE("sampling input validation") {
  CHECK_THROWS_AS(dqc1_sample({0.5, 1.0, 0.0}, identity(2), 3, 0), validation_error);
  CHECK_THROWS_AS(dqc1_sample({0.5, 1.0, 0.0}, identity(2), 0, 0), validation_error);
  CHECK_THROWS_AS(dqc1_sample({0.5, 0.0, 0.0}, identity(2), 100, 0), validation_error);
}

TEST_CASE("estimator scatter matches the analytic standard error") {
  auto rng = seeded_rng(44);
  const Matrix u = haar_unitary(8, rng);
  const ProbeSpec probe{0.5, 1.0, 0.0};
  const std::int64_t n = 20'000;

  const Dqc1Exact exact = dqc1_exact(probe, u);
  const double se = dqc1_analytic_se(probe.coherence, std::abs(exact.trace_over_dim),
                                     static_cast<double>(n / 2));
  const int reps = 100;
  double sq_dev = 0.0;
  int within = 0;
  for (int rep = 0; rep < reps; ++rep) {
    const Dqc1Report run = dqc1_sample(probe, u, n, 1000 + static_cast<std::uint64_t>(rep));
    const double dev = std::abs(run.estimate - exact.trace_over_dim);
    sq_dev += dev * dev;
    if (dev <= 4.0 * se)
      ++within;
  }
  CHECK(within >= reps - 1);
  // RMS deviation of the complex estimate is the quadrature sum of both
  // Pauli SEs, which is exactly the analytic value.
  CHECK(std::sqrt(sq_dev / reps) == doctest::Approx(se).epsilon(0.20));

  // Quadrupling the sample count halves the spread.
  double sq_dev_4n = 0.0;
  for (int rep = 0; rep < reps; ++rep) {
    const Dqc1Report run = dqc1_sample(probe, u, 4 * n, 5000 + static_cast<std::uint64_t>(rep));
    const double dev = std::abs(run.estimate - exact.trace_over_dim);
    sq_dev_4n += dev * dev;
  }
  CHECK(std::sqrt(sq_dev / sq_dev_4n) == doctest::Approx(2.0).epsilon(0.25));
}

TEST_CASE("sampling is deterministic in the seed") {
  const Matrix u = alternating_sign_diag(4);
  const Dqc1Report a = dqc1_sample({0.5, 1.0, 0.0}, u, 10'000, 99);
  const Dqc1Report b = dqc1_sample({0.5, 1.0, 0.0}, u, 10'000, 99);
  CHECK(a.estimate == b.estimate);
  CHECK(a.empirical_se == b.empirical_se);
  const Dqc1Report c = dqc1_sample({0.5, 1.0, 0.0}, u, 10'000, 100);
  CHECK(a.estimate != c.estimate);
}

TEST_CASE("precision residual is exactly -1/2 for the traceless pure probe") {
  const Matrix u = alternating_sign_diag(8);
  // a = 1, p = 1/2 gives one bit of coherence; t = 0 removes the trace term.
  const PrecisionReport report = precision_vs_coherence({0.5, 1.0, 0.0}, u, 10'000, 3);
  CHECK(report.residual == doctest::Approx(-0.5).epsilon(1e-12));
  CHECK(report.prec_analytic - report.half_log2_mc == report.residual);
}

TEST_CASE("precision residual does not depend on the probe count") {
  const Matrix u = alternating_sign_diag(8);
  const ProbeSpec probe{0.5, 0.6, 0.0};
  const PrecisionReport base = precision_vs_coherence(probe, u, 100, 5);
  for (std::int64_t m : {1'000, 10'000, 100'000}) {
    const PrecisionReport report = precision_vs_coherence(probe, u, m, 5);
    CHECK(std::abs(report.residual - base.residual) < 1e-9);
  }
  CHECK_THROWS_AS(precision_vs_coherence(probe, u, 99, 5), validation_error);
}

TEST_CASE("precision residual stays bounded across probe coherences") {
  const Matrix u = alternating_sign_diag(8);
  for (double a : {0.2, 0.4, 0.6, 0.8, 1.0}) {
    const PrecisionReport report = precision_vs_coherence({0.5, a, 0.0}, u, 10'000, 17);
    CHECK(std::abs(report.residual) <= 1.5);
    // Sampled precision tracks the analytic value at m = 1e4.
    CHECK(report.prec_emp == doctest::Approx(report.prec_analytic).epsilon(0.02));
  }
}
