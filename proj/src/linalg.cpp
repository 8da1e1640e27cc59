#include "matconvex/linalg.hpp"

#include <cmath>
#include <sstream>

namespace matconvex {

SpectrumWindow::SpectrumWindow(double a, double b) : a_(a), b_(b) {
  if (std::isnan(a) || std::isnan(b) || !(a < b)) {
    std::ostringstream os;
    os << "spectrum window requires a < b, got (" << a << ", " << b << ")";
    throw ValidationError(os.str());
  }
}

bool SpectrumWindow::bounded() const noexcept {
  return std::isfinite(a_) && std::isfinite(b_);
}

std::pair<double, double> SpectrumWindow::compact_core(double shrink) const {
  if (!bounded()) {
    throw DomainError("window " + to_string() +
                          " is unbounded; pass a compact sub-window for sampling",
                      std::isfinite(a_) ? b_ : a_);
  }
  const double delta = shrink * (b_ - a_);
  return {a_ + delta, b_ - delta};
}

std::string SpectrumWindow::to_string() const {
  std::ostringstream os;
  os << "(" << a_ << ", " << b_ << ")";
  return os.str();
}

HermitianMatrix::HermitianMatrix(CMatrix m, Unchecked) : m_(std::move(m)) {}

HermitianMatrix::HermitianMatrix(const CMatrix& m) {
  if (m.rows() == 0 || m.rows() != m.cols()) {
    throw ValidationError("Hermitian matrix must be square with dim >= 1");
  }
  const double scale = 1.0 + m.cwiseAbs().maxCoeff();
  const double asym = (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (asym > kHermiticityTol * scale) {
    std::ostringstream os;
    os << "matrix is not Hermitian: max |H - H*| = " << asym;
    throw ValidationError(os.str());
  }
  m_ = (m + m.adjoint()) * 0.5;
}

HermitianMatrix HermitianMatrix::hermitian_part(const CMatrix& m) {
  if (m.rows() == 0 || m.rows() != m.cols()) {
    throw DimensionError("Hermitian part requires a non-empty square matrix");
  }
  return HermitianMatrix(CMatrix((m + m.adjoint()) * 0.5), Unchecked{});
}

HermitianMatrix HermitianMatrix::identity(Eigen::Index n) {
  if (n < 1) throw ValidationError("dimension must be >= 1");
  return HermitianMatrix(CMatrix::Identity(n, n), Unchecked{});
}

HermitianMatrix HermitianMatrix::zero(Eigen::Index n) {
  if (n < 1) throw ValidationError("dimension must be >= 1");
  return HermitianMatrix(CMatrix::Zero(n, n), Unchecked{});
}

HermitianMatrix HermitianMatrix::diagonal(std::span<const double> values) {
  if (values.empty()) throw ValidationError("dimension must be >= 1");
  CMatrix m = CMatrix::Zero(values.size(), values.size());
  for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
  return HermitianMatrix(std::move(m), Unchecked{});
}

HermitianMatrix HermitianMatrix::diagonal(std::initializer_list<double> values) {
  return diagonal(std::span<const double>(values.begin(), values.size()));
}

HermitianMatrix HermitianMatrix::from_real(const Eigen::MatrixXd& m) {
  return HermitianMatrix(CMatrix(m.cast<Complex>()));
}

HermitianMatrix HermitianMatrix::operator+(const HermitianMatrix& o) const {
  require_same_dim(*this, o, "addition");
  return HermitianMatrix(CMatrix(m_ + o.m_), Unchecked{});
}

HermitianMatrix HermitianMatrix::operator-(const HermitianMatrix& o) const {
  require_same_dim(*this, o, "subtraction");
  return HermitianMatrix(CMatrix(m_ - o.m_), Unchecked{});
}

HermitianMatrix HermitianMatrix::operator-() const {
  return HermitianMatrix(CMatrix(-m_), Unchecked{});
}

HermitianMatrix HermitianMatrix::operator*(double s) const {
  return HermitianMatrix(CMatrix(m_ * s), Unchecked{});
}

CMatrix SpectralDecomposition::reconstruct() const {
  return eigenvectors * eigenvalues.cast<Complex>().asDiagonal() * eigenvectors.adjoint();
}

SpectralDecomposition spectral_decompose(const HermitianMatrix& h) {
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(h.matrix());
  if (solver.info() != Eigen::Success) {
    throw ConvergenceError("Hermitian eigensolver did not converge (dim " +
                           std::to_string(h.dim()) + ")");
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

HermitianMatrix apply_function(const SpectralDecomposition& sd,
                               const std::function<double(double)>& f,
                               const std::optional<SpectrumWindow>& domain) {
  const auto n = sd.eigenvalues.size();
  RVector mapped(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double lam = sd.eigenvalues(i);
    if (domain && !domain->contains(lam)) {
      std::ostringstream os;
      os << "eigenvalue " << lam << " outside function domain " << domain->to_string();
      throw DomainError(os.str(), lam);
    }
    mapped(i) = f(lam);
    if (!std::isfinite(mapped(i))) {
      std::ostringstream os;
      os << "function value at eigenvalue " << lam << " is not finite";
      throw DomainError(os.str(), lam);
    }
  }
  return HermitianMatrix::hermitian_part(sd.eigenvectors * mapped.cast<Complex>().asDiagonal() *
                                         sd.eigenvectors.adjoint());
}

HermitianMatrix apply_function(const HermitianMatrix& h, const std::function<double(double)>& f,
                               const std::optional<SpectrumWindow>& domain) {
  return apply_function(spectral_decompose(h), f, domain);
}

double min_eigenvalue(const HermitianMatrix& h) {
  return spectral_decompose(h).eigenvalues(0);
}

double max_eigenvalue(const HermitianMatrix& h) {
  const auto ev = spectral_decompose(h).eigenvalues;
  return ev(ev.size() - 1);
}

double operator_norm(const HermitianMatrix& h) {
  const auto ev = spectral_decompose(h).eigenvalues;
  return std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
}

bool is_psd(const HermitianMatrix& h, double tol) { return min_eigenvalue(h) >= -tol; }

bool loewner_leq(const HermitianMatrix& a, const HermitianMatrix& b, double tol) {
  require_same_dim(a, b, "Loewner comparison");
  return is_psd(b - a, tol);
}

void require_spectrum_in(const HermitianMatrix& h, const SpectrumWindow& window,
                         const std::string& what) {
  const auto ev = spectral_decompose(h).eigenvalues;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (!window.contains(ev(i))) {
      std::ostringstream os;
      os << what << ": eigenvalue " << ev(i) << " outside " << window.to_string();
      throw DomainError(os.str(), ev(i));
    }
  }
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

HermitianMatrix tensor(const HermitianMatrix& a, const HermitianMatrix& b) {
  return HermitianMatrix::hermitian_part(kron(a.matrix(), b.matrix()));
}

HermitianMatrix inverse(const HermitianMatrix& h, double floor) {
  const auto ev = spectral_decompose(h).eigenvalues;
  const double smallest = ev.cwiseAbs().minCoeff();
  if (smallest < floor) {
    std::ostringstream os;
    os << "matrix is numerically singular: smallest |eigenvalue| = " << smallest;
    throw ConditioningError(os.str());
  }
  return HermitianMatrix::hermitian_part(h.matrix().partialPivLu().inverse());
}

HermitianMatrix sandwich(const HermitianMatrix& outer, const HermitianMatrix& inner) {
  require_same_dim(outer, inner, "sandwich product");
  return HermitianMatrix::hermitian_part(outer.matrix() * inner.matrix() * outer.matrix());
}

void require_same_dim(const HermitianMatrix& a, const HermitianMatrix& b, const char* op) {
  if (a.dim() != b.dim()) {
    std::ostringstream os;
    os << op << ": dimension mismatch " << a.dim() << " vs " << b.dim();
    throw DimensionError(os.str());
  }
}

}  // namespace matconvex
