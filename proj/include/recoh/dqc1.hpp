/*
 * This code is licensed under the Apache License, Version 2.0. You may
 * obtain a copy of this license in the LICENSE file in the root directory
 * of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.
 */

#ifndef RECOH_DQC1_HPP
#define RECOH_DQC1_HPP

#include <cstdint>

#include "recoh/state.hpp"

namespace recoh {

// One-qubit probe rho = [[p, (a/2)e^{i phase}], [(a/2)e^{-i phase}, 1-p]];
// a = 2|rho_01| is 1 for the maximally coherent probe.
struct ProbeSpec {
  double population = 0.5;
  double coherence = 1.0;
  double phase = 0.0;
};

Matrix probe_matrix(const ProbeSpec& probe,
                    const Tolerances& tol = standard_tolerances());

struct Dqc1Exact {
  Matrix reduced_probe;   // probe state after the controlled unitary
  double sx;              // <sigma_x> of the reduced probe
  double sy;              // <sigma_y>
  cxd trace_over_dim;     // Tr U / dim
};

// Probe after controlled-U on the maximally mixed target. Only Tr U enters,
// so the target register is never materialized.
Dqc1Exact dqc1_exact(const ProbeSpec& probe, const Matrix& u,
                     const Tolerances& tol = standard_tolerances());

struct Dqc1Report {
  Index dim = 0;
  cxd exact_trace_over_dim{};
  cxd estimate{};
  std::int64_t runs_per_pauli = 0;
  double analytic_se = 0.0;
  double empirical_se = 0.0;
  double precision_bits = 0.0;        // -log2(analytic_se)
  double probe_coherence_bits = 0.0;  // coherence of the probe, in bits
};

// SE of the trace estimate when each Pauli mean uses n_per_pauli samples.
double dqc1_analytic_se(double a, double abs_t, double n_per_pauli);

// Monte Carlo run: n_runs fresh probes, half measured along x and half along
// y, estimator (mean_x + i mean_y) / a with the probe phase rotated away.
Dqc1Report dqc1_sample(const ProbeSpec& probe, const Matrix& u, std::int64_t n_runs,
                       std::uint64_t seed);

struct PrecisionReport {
  double prec_emp;       // -log2 of the sampled SE
  double prec_analytic;  // -log2 of the analytic SE at m probes per Pauli
  double half_log2_mc;   // (1/2) log2(m * probe coherence)
  double residual;       // prec_analytic - half_log2_mc, m-independent
};

// Compares trace-estimation precision against the coherence supplied by m
// probes; the residual isolates the |t|- and a-dependent correction.
PrecisionReport precision_vs_coherence(const ProbeSpec& probe, const Matrix& u,
                                       std::int64_t m_probes, std::uint64_t seed);

} // namespace recoh

#endif
