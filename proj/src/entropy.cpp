#include "matconvex/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace matconvex {

double EntropyReport::value(const std::string& name) const {
  for (const auto& [k, v] : values) {
    if (k == name) return v;
  }
  throw ValidationError("report has no value '" + name + "'");
}

double EntropyReport::slack(const std::string& name) const {
  for (const auto& [k, v] : slacks) {
    if (k == name) return v;
  }
  throw ValidationError("report has no slack '" + name + "'");
}

double EntropyReport::worst_slack() const {
  double worst = kInf;
  for (const auto& [k, v] : slacks) worst = std::min(worst, v);
  return worst;
}

json EntropyReport::to_json() const {
  json v = json::object();
  for (const auto& [k, x] : values) v[k] = x;
  json s = json::object();
  for (const auto& [k, x] : slacks) s[k] = x;
  return {{"values", v}, {"slacks", s}};
}

double spectral_entropy(const HermitianMatrix& m) {
  const auto ev = spectral_decompose(m).eigenvalues;
  double s = 0.0;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev(i) > kEntropyZeroFloor) s -= ev(i) * std::log(ev(i));
  }
  return s;
}

double von_neumann_entropy(const DensityOperator& rho) { return spectral_entropy(rho.matrix()); }

DensityOperator partial_trace(const DensityOperator& rho, std::vector<std::size_t> keep) {
  const Dims& dims = rho.dims();
  if (keep.empty()) throw ValidationError("partial trace needs a nonempty set of kept factors");
  std::sort(keep.begin(), keep.end());
  for (std::size_t i = 0; i < keep.size(); ++i) {
    if (keep[i] >= dims.size()) {
      throw ValidationError("factor index " + std::to_string(keep[i]) + " out of range");
    }
    if (i > 0 && keep[i] == keep[i - 1]) {
      throw ValidationError("factor index " + std::to_string(keep[i]) + " repeated");
    }
  }
  if (keep.size() == dims.size()) return rho;

  std::vector<bool> kept(dims.size(), false);
  for (auto k : keep) kept[k] = true;
  Dims kept_dims, traced_dims;
  for (std::size_t f = 0; f < dims.size(); ++f) (kept[f] ? kept_dims : traced_dims).push_back(dims[f]);
  const Eigen::Index nk = product_of(kept_dims);
  const Eigen::Index nt = product_of(traced_dims);

  // Full index of the basis vector with kept multi-index `a` and traced `t`.
  auto full_index = [&](Eigen::Index a, Eigen::Index t) {
    Eigen::Index idx = 0;
    Eigen::Index a_stride = nk, t_stride = nt;
    for (std::size_t f = 0; f < dims.size(); ++f) {
      Eigen::Index digit;
      if (kept[f]) {
        a_stride /= dims[f];
        digit = (a / a_stride) % dims[f];
      } else {
        t_stride /= dims[f];
        digit = (t / t_stride) % dims[f];
      }
      idx = idx * dims[f] + digit;
    }
    return idx;
  };

  std::vector<std::vector<Eigen::Index>> table(nk, std::vector<Eigen::Index>(nt));
  for (Eigen::Index a = 0; a < nk; ++a) {
    for (Eigen::Index t = 0; t < nt; ++t) table[a][t] = full_index(a, t);
  }
  CMatrix out = CMatrix::Zero(nk, nk);
  const CMatrix& m = rho.matrix().matrix();
  for (Eigen::Index a = 0; a < nk; ++a) {
    for (Eigen::Index b = 0; b < nk; ++b) {
      Complex s = 0.0;
      for (Eigen::Index t = 0; t < nt; ++t) s += m(table[a][t], table[b][t]);
      out(a, b) = s;
    }
  }
  return DensityOperator(HermitianMatrix::hermitian_part(out), kept_dims);
}

double conditional_entropy(const DensityOperator& rho, const std::vector<std::size_t>& part_a,
                           const std::vector<std::size_t>& part_b) {
  for (auto i : part_a) {
    if (std::find(part_b.begin(), part_b.end(), i) != part_b.end()) {
      throw ValidationError("conditional entropy needs disjoint index sets; factor " +
                            std::to_string(i) + " is in both");
    }
  }
  std::vector<std::size_t> ab = part_a;
  ab.insert(ab.end(), part_b.begin(), part_b.end());
  return von_neumann_entropy(partial_trace(rho, ab)) - von_neumann_entropy(partial_trace(rho, part_b));
}

namespace {

void require_psd(const HermitianMatrix& m, const char* what) {
  const double lo = min_eigenvalue(m);
  if (lo < -DensityOperator::kTol) {
    throw DomainError(std::string(what) + " is not positive semidefinite", lo);
  }
}

void require_strictly_positive(const HermitianMatrix& m, const char* what) {
  const double lo = min_eigenvalue(m);
  if (lo <= kSupportThreshold) {
    std::ostringstream os;
    os << what << " must be strictly positive, min eigenvalue " << lo;
    throw ConditioningError(os.str());
  }
}

HermitianMatrix positive_power(const HermitianMatrix& m, double p) {
  return apply_function(m, [p](double x) { return std::pow(std::max(x, 0.0), p); });
}

/// Mean of term(0), ..., term(count - 1) by pairwise summation. Terms are
/// generated in index order, so a shared random stream is consumed
/// deterministically.
template <typename Term>
CMatrix pairwise_sum(std::size_t lo, std::size_t hi, Term& term) {
  if (hi - lo == 1) return term(lo);
  const std::size_t mid = lo + (hi - lo) / 2;
  CMatrix left = pairwise_sum(lo, mid, term);
  return left + pairwise_sum(mid, hi, term);
}

template <typename Term>
CMatrix pairwise_mean(std::size_t count, Term term) {
  if (count == 0) throw ValidationError("Monte Carlo average needs at least one sample");
  return pairwise_sum(0, count, term) / static_cast<double>(count);
}

void require_factors(const DensityOperator& rho, std::size_t count, const char* op) {
  if (rho.factors() != count) {
    std::ostringstream os;
    os << op << " needs a state with exactly " << count << " factors, got " << rho.factors();
    throw ValidationError(os.str());
  }
}

}  // namespace

double relative_entropy(const HermitianMatrix& a, const HermitianMatrix& b) {
  require_same_dim(a, b, "relative entropy");
  require_psd(a, "relative entropy: A");
  require_psd(b, "relative entropy: B");
  const auto sa = spectral_decompose(a);
  const auto sb = spectral_decompose(b);
  double a_log_a = 0.0;
  for (Eigen::Index i = 0; i < sa.eigenvalues.size(); ++i) {
    const double x = sa.eigenvalues(i);
    if (x > kEntropyZeroFloor) a_log_a += x * std::log(x);
  }
  double a_log_b = 0.0;
  for (Eigen::Index j = 0; j < sb.eigenvalues.size(); ++j) {
    const CVector v = sb.eigenvectors.col(j);
    const double weight = v.dot(a.matrix() * v).real();
    if (sb.eigenvalues(j) <= kSupportThreshold) {
      if (weight > kSupportThreshold) return -kInf;
      continue;
    }
    a_log_b += weight * std::log(sb.eigenvalues(j));
  }
  return -(a_log_a - a_log_b);
}

double epsilon_limit_residual(const HermitianMatrix& a, const HermitianMatrix& b, double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw ValidationError("epsilon must lie in (0, 1)");
  require_same_dim(a, b, "epsilon limit");
  require_strictly_positive(a, "A");
  require_strictly_positive(b, "B");
  // Tr[A^{1-e} B^e] - Tr A = Tr[A^{1-e} ((B^e - 1) - (A^e - 1))], with expm1 avoiding the cancellation
  const auto shifted = [eps](double x) { return std::expm1(eps * std::log(x)); };
  const CMatrix diff = apply_function(b, shifted).matrix() - apply_function(a, shifted).matrix();
  const double quotient = (positive_power(a, 1.0 - eps).matrix() * diff).trace().real() / eps;
  return std::abs(quotient - relative_entropy(a, b));
}

double haar_average_residual(const DensityOperator& rho12, std::size_t samples,
                             const RandomSpec& spec) {
  require_factors(rho12, 2, "Haar average");
  const auto d1 = rho12.dims()[0];
  const auto d2 = rho12.dims()[1];
  Rng rng(spec);
  const CMatrix& m = rho12.matrix().matrix();
  const CMatrix id1 = CMatrix::Identity(d1, d1);
  const CMatrix avg = pairwise_mean(samples, [&](std::size_t) {
    const CMatrix u = kron(id1, haar_unitary(d2, rng));
    return CMatrix(u.adjoint() * m * u);
  });
  const CMatrix target =
      kron(partial_trace(rho12, {0}).matrix().matrix(), CMatrix::Identity(d2, d2) / double(d2));
  return (avg - target).norm();
}

CMatrix pinching_basis(const HermitianMatrix& marginal) {
  constexpr double kCluster = 1e-10;
  constexpr double kKeep = 1e-3;
  const auto sd = spectral_decompose(marginal);
  const Eigen::Index n = marginal.dim();
  CMatrix basis(n, n);
  Eigen::Index filled = 0;
  Eigen::Index start = 0;
  while (start < n) {
    Eigen::Index end = start + 1;
    while (end < n && sd.eigenvalues(end) - sd.eigenvalues(end - 1) <= kCluster) ++end;
    const CMatrix v = sd.eigenvectors.middleCols(start, end - start);
    const Eigen::Index want = end - start;
    Eigen::Index got = 0;
    for (Eigen::Index i = 0; i < n && got < want; ++i) {
      CVector w = v * v.row(i).adjoint();  // projection of e_i onto the cluster
      for (Eigen::Index j = filled; j < filled + got; ++j) {
        w -= basis.col(j) * basis.col(j).dot(w);
      }
      const double norm = w.norm();
      if (norm < kKeep) continue;
      basis.col(filled + got) = w / norm;
      ++got;
    }
    if (got != want) throw ConvergenceError("could not complete the pinching basis");
    filled += want;
    start = end;
  }
  return basis;
}

CMatrix product_eigenbasis(const DensityOperator& rho12) {
  require_factors(rho12, 2, "pinching");
  return kron(pinching_basis(partial_trace(rho12, {0}).matrix()),
              pinching_basis(partial_trace(rho12, {1}).matrix()));
}

DensityOperator pinch(const DensityOperator& rho12) {
  const CMatrix w = product_eigenbasis(rho12);
  const CMatrix local = w.adjoint() * rho12.matrix().matrix() * w;
  const CMatrix diag = local.diagonal().real().cast<Complex>().asDiagonal();
  return DensityOperator(HermitianMatrix::hermitian_part(w * diag * w.adjoint()), rho12.dims());
}

DensityOperator pinch_monte_carlo(const DensityOperator& rho12, std::size_t samples,
                                  const RandomSpec& spec) {
  const CMatrix w = product_eigenbasis(rho12);
  const CMatrix local = w.adjoint() * rho12.matrix().matrix() * w;
  const Eigen::Index n = rho12.dim();
  Rng rng(spec);
  const CMatrix avg = pairwise_mean(samples, [&](std::size_t) {
    CVector phase(n);
    for (Eigen::Index i = 0; i < n; ++i) phase(i) = std::polar(1.0, 2.0 * std::numbers::pi * rng.uniform());
    return CMatrix(phase.conjugate().asDiagonal() * local * phase.asDiagonal());
  });
  return DensityOperator(HermitianMatrix::hermitian_part(w * avg * w.adjoint()), rho12.dims());
}

namespace {

double conditional_on_rest(const DensityOperator& rho) {
  std::vector<std::size_t> rest;
  for (std::size_t f = 1; f < rho.factors(); ++f) rest.push_back(f);
  return conditional_entropy(rho, {0}, rest);
}

}  // namespace

double lieb_ruskai_concavity_gap(const DensityOperator& rho_a, const DensityOperator& rho_b,
                                 double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw ValidationError("lambda must lie in [0, 1]");
  if (rho_a.dims() != rho_b.dims()) throw DimensionError("states have different factor dims");
  if (rho_a.factors() < 2) throw ValidationError("Lieb-Ruskai gap needs at least two factors");
  const DensityOperator mix(rho_a.matrix() * (1.0 - lambda) + rho_b.matrix() * lambda, rho_a.dims());
  return conditional_on_rest(mix) -
         ((1.0 - lambda) * conditional_on_rest(rho_a) + lambda * conditional_on_rest(rho_b));
}

EntropyReport subadditivity_report(const DensityOperator& rho12) {
  require_factors(rho12, 2, "subadditivity report");
  const DensityOperator pinched = pinch(rho12);
  const DensityOperator r1 = partial_trace(rho12, {0});
  const DensityOperator r2 = partial_trace(rho12, {1});
  const double s12 = von_neumann_entropy(rho12);
  const double sp = von_neumann_entropy(pinched);
  const double s1 = von_neumann_entropy(r1);
  const double s2 = von_neumann_entropy(r2);
  const double dev = std::max(
      (partial_trace(pinched, {0}).matrix() - r1.matrix()).frobenius_norm(),
      (partial_trace(pinched, {1}).matrix() - r2.matrix()).frobenius_norm());
  EntropyReport r;
  r.values = {{"S12", s12}, {"S_pinched", sp}, {"S1", s1}, {"S2", s2}, {"marginal_deviation", dev}};
  r.slacks = {{"pinching", sp - s12}, {"classical_subadditivity", s1 + s2 - sp}};
  return r;
}

EntropyReport mutual_information_decomposition(const DensityOperator& rho12) {
  require_factors(rho12, 2, "mutual information decomposition");
  const double s12 = von_neumann_entropy(rho12);
  const double sp = von_neumann_entropy(pinch(rho12));
  const double s1 = von_neumann_entropy(partial_trace(rho12, {0}));
  const double s2 = von_neumann_entropy(partial_trace(rho12, {1}));
  const double quantum = sp - s12;
  const double classical = s1 + s2 - sp;
  const double mutual = s1 + s2 - s12;
  EntropyReport r;
  r.values = {{"S12", s12},
              {"S_pinched", sp},
              {"S1", s1},
              {"S2", s2},
              {"mutual_information", mutual},
              {"quantum_part", quantum},
              {"classical_part", classical},
              {"sum_residual", std::abs(quantum + classical - mutual)}};
  r.slacks = {{"quantum_part", quantum}, {"classical_part", classical}};
  return r;
}

DensityOperator uhlmann_tilde(const DensityOperator& rho123) {
  require_factors(rho123, 3, "Uhlmann tilde state");
  const auto d3 = rho123.dims()[2];
  const DensityOperator r12 = partial_trace(rho123, {0, 1});
  return DensityOperator(tensor(r12.matrix(), HermitianMatrix::identity(d3) * (1.0 / d3)),
                         rho123.dims());
}

EntropyReport ssa_report(const DensityOperator& rho123) {
  require_factors(rho123, 3, "SSA report");
  const double s123 = von_neumann_entropy(rho123);
  const double s23 = von_neumann_entropy(partial_trace(rho123, {1, 2}));
  const double s12 = von_neumann_entropy(partial_trace(rho123, {0, 1}));
  const double s2 = von_neumann_entropy(partial_trace(rho123, {1}));
  const DensityOperator tilde = uhlmann_tilde(rho123);
  const double t123 = von_neumann_entropy(tilde);
  const double t23 = von_neumann_entropy(partial_trace(tilde, {1, 2}));
  EntropyReport r;
  r.values = {{"S123", s123},
              {"S23", s23},
              {"S12", s12},
              {"S2", s2},
              {"conditional_123", s123 - s23},
              {"conditional_12", s12 - s2},
              {"tilde_S123", t123},
              {"tilde_conditional", t123 - t23}};
  r.slacks = {{"ssa", (s12 - s2) - (s123 - s23)}};
  return r;
}

std::pair<double, double> uhlmann_coherence(const DensityOperator& rho123, Rng& rng) {
  require_factors(rho123, 3, "Uhlmann coherence");
  const auto& d = rho123.dims();
  const CMatrix u = kron(CMatrix::Identity(d[0] * d[1], d[0] * d[1]), haar_unitary(d[2], rng));
  const DensityOperator turned(
      HermitianMatrix::hermitian_part(u * rho123.matrix().matrix() * u.adjoint()), d);
  return {lieb_ruskai_concavity_gap(rho123, turned, 0.5), ssa_report(rho123).slack("ssa")};
}

DensityOperator density_from_json(const json& doc) {
  const MatrixDocument m = matrix_from_json(doc, "state");
  if (m.dims.empty()) throw ParseError("state files must declare 'dims'", "state.dims");
  try {
    return DensityOperator(HermitianMatrix(m.entries), m.dims);
  } catch (const ValidationError& e) {
    throw ParseError(std::string("invalid state: ") + e.what(), "state.entries");
  }
}

json density_to_json(const DensityOperator& rho) { return matrix_to_json(rho.matrix(), rho.dims()); }

DensityOperator bell_state() {
  CVector psi = CVector::Zero(4);
  psi(0) = psi(3) = 1.0;
  return DensityOperator::pure(psi, {2, 2});
}

DensityOperator ghz_state() {
  CVector psi = CVector::Zero(8);
  psi(0) = psi(7) = 1.0;
  return DensityOperator::pure(psi, {2, 2, 2});
}

}  // namespace matconvex
