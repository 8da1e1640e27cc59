#pragma once

#include <complex>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>

#include <Eigen/Dense>

#include "matconvex/error.hpp"

namespace matconvex {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Tolerance on |H(i,j) - conj(H(j,i))| accepted when building a HermitianMatrix
/// from user data, relative to 1 + max|H(i,j)|.
inline constexpr double kHermiticityTol = 1e-12;

/// Open interval (a, b); either end may be infinite.
class SpectrumWindow {
 public:
  SpectrumWindow(double a, double b);

  double lower() const noexcept { return a_; }
  double upper() const noexcept { return b_; }
  bool bounded() const noexcept;
  bool contains(double x) const noexcept { return x > a_ && x < b_; }
  double width() const noexcept { return b_ - a_; }

  /// The closed sub-interval [a + delta, b - delta], delta = shrink * (b - a).
  /// Throws DomainError for an unbounded window.
  std::pair<double, double> compact_core(double shrink = 0.05) const;

  std::string to_string() const;

  friend bool operator==(const SpectrumWindow&, const SpectrumWindow&) = default;

 private:
  double a_;
  double b_;
};

/// Finite-dimensional self-adjoint matrix. The stored form is exactly
/// (H + H*) / 2, so the diagonal is real and the off-diagonal is conjugate
/// symmetric bit for bit.
class HermitianMatrix {
 public:
  /// Checked construction: throws ValidationError if the input is not square,
  /// is empty, or deviates from hermiticity by more than kHermiticityTol.
  explicit HermitianMatrix(const CMatrix& m);

  /// Hermitian part of `m`, without the asymmetry check. For results that are
  /// Hermitian in exact arithmetic and only pick up roundoff asymmetry.
  static HermitianMatrix hermitian_part(const CMatrix& m);

  static HermitianMatrix identity(Eigen::Index n);
  static HermitianMatrix zero(Eigen::Index n);
  static HermitianMatrix diagonal(std::span<const double> values);
  static HermitianMatrix diagonal(std::initializer_list<double> values);
  static HermitianMatrix from_real(const Eigen::MatrixXd& m);

  Eigen::Index dim() const noexcept { return m_.rows(); }
  const CMatrix& matrix() const noexcept { return m_; }
  Complex operator()(Eigen::Index i, Eigen::Index j) const { return m_(i, j); }

  double trace() const { return m_.trace().real(); }
  double frobenius_norm() const { return m_.norm(); }

  HermitianMatrix operator+(const HermitianMatrix& o) const;
  HermitianMatrix operator-(const HermitianMatrix& o) const;
  HermitianMatrix operator-() const;
  HermitianMatrix operator*(double s) const;
  friend HermitianMatrix operator*(double s, const HermitianMatrix& h) { return h * s; }

 private:
  struct Unchecked {};
  HermitianMatrix(CMatrix m, Unchecked);

  CMatrix m_;
};

struct SpectralDecomposition {
  RVector eigenvalues;  // ascending
  CMatrix eigenvectors;  // columns, unitary

  CMatrix reconstruct() const;
};

SpectralDecomposition spectral_decompose(const HermitianMatrix& h);

/// f(H) through the spectral representation. If `domain` is given, every
/// eigenvalue must lie strictly inside it; non-finite f values are rejected
/// as well. Both failures raise DomainError carrying the eigenvalue.
HermitianMatrix apply_function(const HermitianMatrix& h,
                               const std::function<double(double)>& f,
                               const std::optional<SpectrumWindow>& domain = std::nullopt);
HermitianMatrix apply_function(const SpectralDecomposition& sd,
                               const std::function<double(double)>& f,
                               const std::optional<SpectrumWindow>& domain = std::nullopt);

double min_eigenvalue(const HermitianMatrix& h);
double max_eigenvalue(const HermitianMatrix& h);
/// Operator (spectral) norm; for Hermitian input this is the spectral radius.
double operator_norm(const HermitianMatrix& h);
bool is_psd(const HermitianMatrix& h, double tol);
/// A <= B in Loewner order, i.e. B - A is PSD within tol.
bool loewner_leq(const HermitianMatrix& a, const HermitianMatrix& b, double tol);

/// Throws DomainError if some eigenvalue of h is outside `window`.
void require_spectrum_in(const HermitianMatrix& h, const SpectrumWindow& window,
                         const std::string& what);

/// Kronecker product.
CMatrix kron(const CMatrix& a, const CMatrix& b);
HermitianMatrix tensor(const HermitianMatrix& a, const HermitianMatrix& b);

/// Inverse of a Hermitian matrix via LU; ConditioningError if min |eigenvalue| < floor.
HermitianMatrix inverse(const HermitianMatrix& h, double floor = 1e-12);
/// Product a*b*c*... projected back to the Hermitian part; callers guarantee
/// that the exact product is Hermitian.
HermitianMatrix sandwich(const HermitianMatrix& outer, const HermitianMatrix& inner);

void require_same_dim(const HermitianMatrix& a, const HermitianMatrix& b, const char* op);

}  // namespace matconvex
