/*
 * This code is licensed under the Apache License, Version 2.0. You may
 * obtain a copy of this license in the LICENSE file in the root directory
 * of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.
 */

#include "recoh/dqc1.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

#include "recoh/errors.hpp"
#include "recoh/measures.hpp"

namespace recoh {

namespace {

double to_unit_double(std::uint64_t x) {
  return static_cast<double>(x >> 11) * 0x1.0p-53;
}

} // namespace

Matrix probe_matrix(const ProbeSpec& probe, const Tolerances& tol) {
  const double p = probe.population;
  const double a = probe.coherence;
  if (!(p >= 0.0 && p <= 1.0))
    throw validation_error("probe population must lie in [0, 1]");
  if (!(a >= 0.0))
    throw validation_error("probe coherence must be nonnegative");
  // PSD condition for the 2x2 probe: det = p(1-p) - (a/2)^2 >= 0.
  if (p * (1.0 - p) - 0.25 * a * a < -tol.psd)
    throw validation_error("probe coherence exceeds the population bound");
  if (!std::isfinite(probe.phase))
    throw validation_error("probe phase must be finite");
  Matrix rho(2, 2);
  const cxd off = 0.5 * a * std::exp(cxd(0.0, probe.phase));
  rho << cxd(p, 0.0), off, std::conj(off), cxd(1.0 - p, 0.0);
  return rho;
}

Dqc1Exact dqc1_exact(const ProbeSpec& probe, const Matrix& u, const Tolerances& tol) {
  const Matrix rho = probe_matrix(probe, tol);
  if (u.rows() != u.cols() || u.rows() < 1)
    throw validation_error("target unitary must be square and nonempty");
  if (u.rows() > max_total_dim())
    throw capacity_error("target unitary exceeds the dimension cap");
  if (max_abs(Matrix(u.adjoint() * u) - identity(u.rows())) > tol.orthonormal)
    throw validation_error("target matrix is not unitary");

  const Index dim = u.rows();
  const cxd t = u.trace() / static_cast<double>(dim);

  // Controlled-U on the maximally mixed target multiplies the probe
  // off-diagonal by conj(t); populations are untouched.
  Dqc1Exact out;
  out.trace_over_dim = t;
  out.reduced_probe = rho;
  out.reduced_probe(0, 1) = rho(0, 1) * std::conj(t);
  out.reduced_probe(1, 0) = rho(1, 0) * t;
  out.sx = 2.0 * out.reduced_probe(1, 0).real();
  out.sy = 2.0 * out.reduced_probe(1, 0).imag();
  return out;
}

double dqc1_analytic_se(double a, double abs_t, double n_per_pauli) {
  if (!(a > 0.0))
    throw validation_error("analytic SE requires a coherent probe (a > 0)");
  if (!(n_per_pauli >= 1.0))
    throw validation_error("analytic SE requires at least one run per Pauli");
  // Var(sigma_x) + Var(sigma_y) = 2 - a^2 |t|^2 for the reduced probe.
  return std::sqrt((2.0 - a * a * abs_t * abs_t) / (a * a * n_per_pauli));
}

Dqc1Report dqc1_sample(const ProbeSpec& probe, const Matrix& u, std::int64_t n_runs,
                       std::uint64_t seed) {
  if (n_runs < 2 || n_runs % 2 != 0)
    throw validation_error("n_runs must be even and at least 2");
  if (!(probe.coherence > 0.0))
    throw validation_error("trace estimation needs a coherent probe (a > 0)");

  const Dqc1Exact exact = dqc1_exact(probe, u);
  const std::int64_t n_half = n_runs / 2;
  const double p_plus_x = 0.5 * (1.0 + exact.sx);
  const double p_plus_y = 0.5 * (1.0 + exact.sy);

  // Counter-based streams: run i draws from splitmix64(base ^ i), so reports
  // are reproducible independent of iteration order.
  const std::uint64_t base = splitmix64(seed ^ 0x6a09e667f3bcc909ull);
  std::int64_t hits_x = 0;
  std::int64_t hits_y = 0;
  for (std::int64_t i = 0; i < n_half; ++i) {
    if (to_unit_double(splitmix64(base ^ static_cast<std::uint64_t>(i))) < p_plus_x)
      ++hits_x;
  }
  for (std::int64_t i = n_half; i < n_runs; ++i) {
    if (to_unit_double(splitmix64(base ^ static_cast<std::uint64_t>(i))) < p_plus_y)
      ++hits_y;
  }

  const double mean_x = static_cast<double>(2 * hits_x - n_half) / static_cast<double>(n_half);
  const double mean_y = static_cast<double>(2 * hits_y - n_half) / static_cast<double>(n_half);

  const double a = probe.coherence;
  Dqc1Report report;
  report.dim = u.rows();
  report.exact_trace_over_dim = exact.trace_over_dim;
  report.estimate = std::exp(cxd(0.0, probe.phase)) * cxd(mean_x, mean_y) / a;
  report.runs_per_pauli = n_half;
  report.analytic_se =
      dqc1_analytic_se(a, std::abs(exact.trace_over_dim), static_cast<double>(n_half));

  // +-1 outcomes give sample variance m/(m-1) (1 - mean^2) per Pauli.
  const double bessel =
      n_half > 1 ? static_cast<double>(n_half) / static_cast<double>(n_half - 1) : 0.0;
  const double var_x = bessel * (1.0 - mean_x * mean_x);
  const double var_y = bessel * (1.0 - mean_y * mean_y);
  report.empirical_se = std::sqrt((var_x + var_y) / static_cast<double>(n_half)) / a;

  report.precision_bits = -std::log2(report.analytic_se);
  report.probe_coherence_bits =
      coherence_rel_ent(DensityMatrix({2}, probe_matrix(probe)),
                        OrthonormalBasis::computational(2));
  return report;
}

PrecisionReport precision_vs_coherence(const ProbeSpec& probe, const Matrix& u,
                                       std::int64_t m_probes, std::uint64_t seed) {
  if (m_probes < 100)
    throw validation_error("precision comparison needs at least 100 probes per Pauli");

  const Dqc1Report report = dqc1_sample(probe, u, 2 * m_probes, seed);
  const double coh = report.probe_coherence_bits;
  if (!(coh > 0.0))
    throw validation_error("probe coherence must be positive for the comparison");

  PrecisionReport out;
  out.prec_emp = -std::log2(report.empirical_se);
  out.prec_analytic = report.precision_bits;
  out.half_log2_mc = 0.5 * std::log2(static_cast<double>(m_probes) * coh);
  out.residual = out.prec_analytic - out.half_log2_mc;
  return out;
}

} // namespace recoh
