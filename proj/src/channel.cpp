/*
 * This code is licensed under the Apache License, Version 2.0. You may
 * obtain a copy of this license in the LICENSE file in the root directory
 * of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.
 */

#include "recoh/channel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace recoh {

namespace {

constexpr double kBranchFloor = 1e-14;

Index product(const std::vector<Index>& dims) {
  Index p = 1;
  for (Index d : dims) p *= d;
  return p;
}

// I_pre tensor op tensor I_post for the factor at `which`.
Matrix embed_at(const Matrix& op, const std::vector<Index>& dims, std::size_t which) {
  Index pre = 1, post = 1;
  for (std::size_t k = 0; k < which; ++k) pre *= dims[k];
  for (std::size_t k = which + 1; k < dims.size(); ++k) post *= dims[k];
  return kron(kron(identity(pre), op), identity(post));
}

Matrix hermitize(Matrix m) { return (m + m.adjoint()) / 2.0; }

bool check_operator_sum(const std::vector<Matrix>& ops, Index dim, double tol,
                        bool* trace_preserving) {
  Matrix acc = Matrix::Zero(dim, dim);
  for (const auto& k : ops) acc += k.adjoint() * k;
  Matrix diff = acc - Matrix::Identity(dim, dim);
  if (max_abs(diff) <= tol) {
    *trace_preserving = true;
    return true;
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitize(diff), Eigen::EigenvaluesOnly);
  if (es.info() == Eigen::Success && es.eigenvalues().maxCoeff() <= tol) {
    *trace_preserving = false;
    return true;
  }
  return false;
}

} // namespace

KrausChannel make_channel(std::vector<Matrix> kraus, std::vector<Index> in_dims,
                          std::vector<Index> out_dims, const Tolerances& tol) {
  if (kraus.empty()) throw validation_error("channel needs at least one Kraus operator");
  Index din = product(in_dims);
  Index dout = product(out_dims);
  if (in_dims.empty() || out_dims.empty() || din < 1 || dout < 1)
    throw validation_error("channel dims must be non-empty and positive");
  for (const auto& k : kraus)
    if (k.rows() != dout || k.cols() != din)
      throw validation_error("Kraus operator shape does not match channel dims");
  bool tp = true;
  if (!check_operator_sum(kraus, din, tol.cptp, &tp))
    throw validation_error("Kraus operators do not satisfy sum K^dag K <= I");
  return KrausChannel{std::move(in_dims), std::move(out_dims), std::move(kraus), tp};
}

ApplyResult apply(const KrausChannel& ch, const DensityMatrix& rho, const Tolerances& tol) {
  if (ch.in_dims != rho.dims())
    throw validation_error("channel input dims do not match the state");
  Index dout = product(ch.out_dims);
  Matrix out = Matrix::Zero(dout, dout);
  for (const auto& k : ch.kraus) out += k * rho.mat() * k.adjoint();
  out = hermitize(out);
  double p = out.trace().real();
  if (ch.trace_preserving)
    return ApplyResult{DensityMatrix(ch.out_dims, std::move(out), tol), 1.0};
  if (p <= kBranchFloor)
    throw degenerate_branch_error("channel output has vanishing probability");
  out /= p;
  return ApplyResult{DensityMatrix(ch.out_dims, std::move(out), tol), p};
}

IncoherenceReport check_incoherent(const KrausChannel& ch, const OrthonormalBasis& basis,
                                   const Tolerances& tol) {
  Index din = product(ch.in_dims);
  Index dout = product(ch.out_dims);
  if (basis.dim() != din || din != dout)
    throw validation_error("incoherence test needs square Kraus operators in the basis dimension");
  IncoherenceReport report;
  for (std::size_t i = 0; i < ch.kraus.size(); ++i) {
    Matrix k = ch.kraus[i];
    if (!basis.is_computational())
      k = basis.vectors().adjoint() * k * basis.vectors();
    for (Index c = 0; c < din; ++c) {
      std::vector<Index> rows;
      for (Index r = 0; r < dout; ++r)
        if (std::abs(k(r, c)) > tol.incoherent) rows.push_back(r);
      if (rows.size() > 1) {
        report.incoherent = false;
        report.kraus_index = i;
        report.column = c;
        report.rows = std::move(rows);
        return report;
      }
    }
  }
  return report;
}

bool is_incoherent_channel(const KrausChannel& ch, const OrthonormalBasis& basis,
                           const Tolerances& tol) {
  return check_incoherent(ch, basis, tol).incoherent;
}

KrausChannel controlled_unitary(const OrthonormalBasis& basis,
                                const std::vector<Matrix>& blocks, const Tolerances& tol) {
  Index da = basis.dim();
  if (static_cast<Index>(blocks.size()) != da)
    throw validation_error("controlled unitary needs one block per control label");
  Index db = blocks.front().rows();
  Matrix u = Matrix::Zero(da * db, da * db);
  for (Index c = 0; c < da; ++c) {
    const Matrix& blk = blocks[c];
    if (blk.rows() != db || blk.cols() != db)
      throw validation_error("controlled unitary blocks must share one square shape");
    if (max_abs(Matrix(blk.adjoint() * blk - Matrix::Identity(db, db))) > tol.orthonormal)
      throw validation_error("controlled unitary block is not unitary");
    Vector v = basis.vector(c);
    u += kron(Matrix(v * v.adjoint()), blk);
  }
  return make_channel({std::move(u)}, {da, db}, {da, db}, tol);
}

KrausChannel controlled_translation(Index d_a, Index d_anc) {
  if (d_a < 1 || d_anc < d_a)
    throw validation_error("translation ancilla must be at least the control dimension");
  Matrix shift = Matrix::Zero(d_anc, d_anc);
  for (Index k = 0; k < d_anc; ++k) shift((k + 1) % d_anc, k) = 1.0;
  std::vector<Matrix> blocks;
  Matrix power = Matrix::Identity(d_anc, d_anc);
  for (Index i = 0; i < d_a; ++i) {
    blocks.push_back(power);
    power = shift * power;
  }
  return controlled_unitary(OrthonormalBasis::computational(d_a), blocks);
}

bool is_cq_state(const DensityMatrix& rho, const OrthonormalBasis& basis, double tol) {
  if (rho.num_factors() < 2)
    throw validation_error("classical-quantum test needs a bipartite state");
  DensityMatrix pinched = dephase(rho, basis);
  return max_abs(rho.mat() - pinched.mat()) <= tol;
}

std::vector<MeasurementRecord> measure_on_B(const DensityMatrix& rho,
                                            const std::vector<Matrix>& operators,
                                            const Tolerances& tol) {
  if (rho.num_factors() < 2)
    throw validation_error("measurement on B needs a bipartite state");
  Index da = rho.dim(0);
  Index db = rho.total_dim() / da;
  if (operators.empty()) throw validation_error("measurement needs at least one operator");
  bool tp = true;
  for (const auto& m : operators)
    if (m.rows() != db || m.cols() != db)
      throw validation_error("measurement operator shape does not match B");
  if (!check_operator_sum(operators, db, tol.cptp, &tp) || !tp)
    throw validation_error("measurement operators do not satisfy sum M^dag M = I");

  // Outcomes below the probability floor are dropped; the remaining weights
  // still sum to one up to that floor.
  std::vector<MeasurementRecord> records;
  for (const auto& m : operators) {
    Matrix big = kron(identity(da), m);
    Matrix post = hermitize(big * rho.mat() * big.adjoint());
    double p = post.trace().real();
    if (p <= kBranchFloor) continue;
    post /= p;
    records.push_back(MeasurementRecord{p, DensityMatrix(rho.dims(), std::move(post), tol)});
  }
  return records;
}

DensityMatrix measure_to_register(const DensityMatrix& rho,
                                  const std::vector<Matrix>& operators,
                                  const Tolerances& tol) {
  if (rho.num_factors() < 2)
    throw validation_error("measurement on B needs a bipartite state");
  Index da = rho.dim(0);
  Index db = rho.total_dim() / da;
  bool tp = true;
  for (const auto& m : operators)
    if (m.rows() != db || m.cols() != db)
      throw validation_error("measurement operator shape does not match B");
  if (operators.empty() || !check_operator_sum(operators, db, tol.cptp, &tp) || !tp)
    throw validation_error("measurement operators do not satisfy sum M^dag M = I");

  Index n = static_cast<Index>(operators.size());
  std::vector<Index> dims = rho.dims();
  dims.push_back(n);
  if (rho.total_dim() > max_total_dim() / n)
    throw capacity_error("register extension exceeds the dimension cap");
  Matrix out = Matrix::Zero(rho.total_dim() * n, rho.total_dim() * n);
  for (Index k = 0; k < n; ++k) {
    Matrix big = kron(identity(da), operators[k]);
    Matrix tag = Matrix::Zero(n, n);
    tag(k, k) = 1.0;
    out += kron(hermitize(big * rho.mat() * big.adjoint()), tag);
  }
  return DensityMatrix(std::move(dims), hermitize(out), tol);
}

namespace {

struct DimWalker {
  std::vector<Index> dims;
  const OrthonormalBasis& basis;
  const Tolerances& tol;

  Index b_total() const {
    Index p = 1;
    for (std::size_t k = 1; k < dims.size(); ++k) p *= dims[k];
    return p;
  }

  void step(const StepIncoherentOnA& s) {
    Index da = dims[0];
    if (basis.dim() != da)
      throw validation_error("control basis dimension does not match A");
    auto ch = make_channel(s.kraus, {da}, {da}, tol);
    if (!ch.trace_preserving)
      throw validation_error("incoherent step must be trace preserving");
    auto report = check_incoherent(ch, basis, tol);
    if (!report.incoherent) {
      std::ostringstream os;
      os << "step is not incoherent: Kraus " << report.kraus_index << " column "
         << report.column << " hits " << report.rows.size() << " rows";
      throw validation_error(os.str());
    }
  }
  void step(const StepControlledFromA& s) {
    if (static_cast<Index>(s.blocks.size()) != dims[0])
      throw validation_error("controlled step needs one block per control label");
    Index db = b_total();
    for (const auto& blk : s.blocks) {
      if (blk.rows() != db || blk.cols() != db)
        throw validation_error("controlled step block does not match the B dimension");
      if (max_abs(Matrix(blk.adjoint() * blk - Matrix::Identity(db, db))) > tol.orthonormal)
        throw validation_error("controlled step block is not unitary");
    }
  }
  void step(const StepAddAncillaB& s) {
    if (s.dim < 2) throw validation_error("ancilla dimension must be at least 2");
    Index total = product(dims);
    if (total > max_total_dim() / s.dim)
      throw capacity_error("ancilla growth exceeds the dimension cap");
    dims.push_back(s.dim);
  }
  void step(const StepTraceOutB& s) {
    if (s.factor == 0 || s.factor >= dims.size())
      throw validation_error("trace step factor index out of range");
    if (dims.size() < 3)
      throw validation_error("cannot discard the last B factor");
    dims.erase(dims.begin() + static_cast<std::ptrdiff_t>(s.factor));
  }
  void step(const StepMeasureB& s) {
    if (s.factor == 0 || s.factor >= dims.size())
      throw validation_error("measurement step factor index out of range");
    if (s.basis_vectors.rows() != dims[s.factor])
      throw validation_error("measurement basis does not match the factor dimension");
    OrthonormalBasis check(s.basis_vectors, tol);
    (void)check;
  }
};

} // namespace

std::vector<Index> validate_program(const GoiaProgram& prog, const std::vector<Index>& in_dims,
                                    const OrthonormalBasis& basis, const Tolerances& tol) {
  if (in_dims.size() < 2)
    throw validation_error("programs act on bipartite states");
  DimWalker walker{in_dims, basis, tol};
  for (const auto& s : prog.steps)
    std::visit([&](const auto& st) { walker.step(st); }, s);
  return walker.dims;
}

std::vector<ProgramBranch> run_program(const GoiaProgram& prog, const DensityMatrix& rho,
                                       const OrthonormalBasis& basis, const Tolerances& tol) {
  validate_program(prog, rho.dims(), basis, tol);
  std::vector<ProgramBranch> branches{{1.0, rho}};

  auto map_branches = [&](auto&& fn) {
    std::vector<ProgramBranch> next;
    for (const auto& br : branches) fn(br, next);
    branches = std::move(next);
  };

  for (const auto& s : prog.steps) {
    if (const auto* inc = std::get_if<StepIncoherentOnA>(&s)) {
      map_branches([&](const ProgramBranch& br, std::vector<ProgramBranch>& next) {
        const auto& dims = br.state.dims();
        Matrix out = Matrix::Zero(br.state.total_dim(), br.state.total_dim());
        for (const auto& k : inc->kraus) {
          Matrix big = embed_at(k, dims, 0);
          out += big * br.state.mat() * big.adjoint();
        }
        next.push_back({br.probability, DensityMatrix(dims, hermitize(out), tol)});
      });
    } else if (const auto* ctl = std::get_if<StepControlledFromA>(&s)) {
      map_branches([&](const ProgramBranch& br, std::vector<ProgramBranch>& next) {
        const auto& dims = br.state.dims();
        Index da = dims[0];
        Matrix u = Matrix::Zero(br.state.total_dim(), br.state.total_dim());
        for (Index c = 0; c < da; ++c) {
          Vector v = basis.vector(c);
          u += kron(Matrix(v * v.adjoint()), ctl->blocks[c]);
        }
        Matrix out = hermitize(u * br.state.mat() * u.adjoint());
        next.push_back({br.probability, DensityMatrix(dims, std::move(out), tol)});
      });
    } else if (const auto* anc = std::get_if<StepAddAncillaB>(&s)) {
      map_branches([&](const ProgramBranch& br, std::vector<ProgramBranch>& next) {
        Matrix zero = Matrix::Zero(anc->dim, anc->dim);
        zero(0, 0) = 1.0;
        next.push_back(
            {br.probability, tensor(br.state, DensityMatrix({anc->dim}, zero, tol))});
      });
    } else if (const auto* tr = std::get_if<StepTraceOutB>(&s)) {
      map_branches([&](const ProgramBranch& br, std::vector<ProgramBranch>& next) {
        std::vector<std::size_t> keep;
        for (std::size_t k = 0; k < br.state.num_factors(); ++k)
          if (k != tr->factor) keep.push_back(k);
        next.push_back({br.probability, partial_trace(br.state, keep)});
      });
    } else if (const auto* ms = std::get_if<StepMeasureB>(&s)) {
      map_branches([&](const ProgramBranch& br, std::vector<ProgramBranch>& next) {
        const auto& dims = br.state.dims();
        Index d = dims[ms->factor];
        for (Index k = 0; k < d; ++k) {
          Vector w = ms->basis_vectors.col(k);
          Matrix proj = embed_at(Matrix(w * w.adjoint()), dims, ms->factor);
          Matrix post = hermitize(proj * br.state.mat() * proj.adjoint());
          double q = post.trace().real();
          if (q <= kBranchFloor) continue;
          post /= q;
          next.push_back({br.probability * q, DensityMatrix(dims, std::move(post), tol)});
        }
      });
    }
  }
  return branches;
}

GoiaProgram random_goia_program(const std::vector<Index>& dims, const OrthonormalBasis& basis,
                                int depth, std::uint64_t seed, Index grow_cap) {
  if (depth < 1) throw validation_error("program depth must be at least 1");
  if (dims.size() < 2) throw validation_error("programs act on bipartite states");
  Index da = dims[0];
  if (basis.dim() != da)
    throw validation_error("control basis dimension does not match A");

  auto rng = seeded_rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Index> cur = dims;
  GoiaProgram prog;

  auto random_incoherent_kraus = [&]() {
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI);
    std::vector<Matrix> kraus;
    if (unit(rng) < 0.5) {
      // Mixture of injective relabelings: K_a = sum_c amp_{a,c} |pi_a(c)><c|
      // with per-column amplitudes normalized across branches. Injectivity
      // makes sum K^dag K diagonal, so normalization gives completeness.
      std::uniform_int_distribution<int> nk_dist(1, 3);
      int nk = nk_dist(rng);
      std::vector<std::vector<Index>> perms(nk, std::vector<Index>(da));
      std::vector<std::vector<cxd>> amps(nk, std::vector<cxd>(da));
      for (int a = 0; a < nk; ++a) {
        std::iota(perms[a].begin(), perms[a].end(), Index{0});
        std::shuffle(perms[a].begin(), perms[a].end(), rng);
      }
      for (Index c = 0; c < da; ++c) {
        double norm2 = 0.0;
        for (int a = 0; a < nk; ++a) {
          amps[a][c] = cxd(gauss(rng), gauss(rng));
          norm2 += std::norm(amps[a][c]);
        }
        for (int a = 0; a < nk; ++a) amps[a][c] /= std::sqrt(norm2);
      }
      for (int a = 0; a < nk; ++a) {
        Matrix k = Matrix::Zero(da, da);
        for (Index c = 0; c < da; ++c)
          k += amps[a][c] * Matrix(basis.vector(perms[a][c]) * basis.vector(c).adjoint());
        kraus.push_back(std::move(k));
      }
    } else {
      // Classical stochastic map with phases: one rank-one operator per
      // (target, source) pair, weights forming a column-stochastic matrix.
      std::uniform_real_distribution<double> expo(0.05, 1.0);
      for (Index c = 0; c < da; ++c) {
        std::vector<double> w(da);
        double total = 0.0;
        for (Index r = 0; r < da; ++r) total += (w[r] = expo(rng));
        for (Index r = 0; r < da; ++r) {
          cxd amp = std::sqrt(w[r] / total) * std::exp(cxd(0.0, angle(rng)));
          Matrix k = Matrix::Zero(da, da);
          k += amp * Matrix(basis.vector(r) * basis.vector(c).adjoint());
          kraus.push_back(std::move(k));
        }
      }
    }
    return kraus;
  };

  for (int d = 0; d < depth; ++d) {
    Index total = product(cur);
    Index db = total / da;
    bool can_grow = total * 2 <= std::min(grow_cap, max_total_dim());
    bool can_trace = cur.size() >= 3;
    double r = unit(rng);
    if (r < 0.30) {
      prog.steps.emplace_back(StepIncoherentOnA{random_incoherent_kraus()});
    } else if (r < 0.60) {
      std::vector<Matrix> blocks;
      for (Index c = 0; c < da; ++c) blocks.push_back(haar_unitary(db, rng));
      prog.steps.emplace_back(StepControlledFromA{std::move(blocks)});
    } else if (r < 0.70 && can_grow) {
      prog.steps.emplace_back(StepAddAncillaB{2});
      cur.push_back(2);
    } else if (r < 0.80 && can_trace) {
      std::uniform_int_distribution<std::size_t> pick(1, cur.size() - 1);
      std::size_t f = pick(rng);
      prog.steps.emplace_back(StepTraceOutB{f});
      cur.erase(cur.begin() + static_cast<std::ptrdiff_t>(f));
    } else {
      std::uniform_int_distribution<std::size_t> pick(1, cur.size() - 1);
      std::size_t f = pick(rng);
      prog.steps.emplace_back(StepMeasureB{f, haar_unitary(cur[f], rng)});
    }
  }
  return prog;
}

} // namespace recoh
