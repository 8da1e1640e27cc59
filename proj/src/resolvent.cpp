#include "matconvex/resolvent.hpp"

#include <cmath>
#include <sstream>

namespace matconvex {

ResolventPoint::ResolventPoint(double u, SpectrumWindow window) : u_(u), window_(window) {
  if (!std::isfinite(u) || window_.contains(u)) {
    std::ostringstream os;
    os << "resolvent point u = " << u << " must lie outside the window " << window_.to_string();
    throw ValidationError(os.str());
  }
}

namespace {

void check_resolvent_domain(const HermitianMatrix& a, const ResolventPoint& p) {
  const auto ev = spectral_decompose(a).eigenvalues;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (!p.window().contains(ev(i))) {
      std::ostringstream os;
      os << "eigenvalue " << ev(i) << " outside resolvent window " << p.window().to_string();
      throw DomainError(os.str(), ev(i));
    }
    if (std::abs(p.u() - ev(i)) < kResolventSingularity) {
      std::ostringstream os;
      os << "resolvent is near-singular: |u - lambda| = " << std::abs(p.u() - ev(i));
      throw ConditioningError(os.str());
    }
  }
}

}  // namespace

HermitianMatrix resolvent_value(const HermitianMatrix& a, const ResolventPoint& p) {
  check_resolvent_domain(a, p);
  CMatrix shifted = -a.matrix();
  shifted.diagonal().array() += p.u();
  return HermitianMatrix::hermitian_part(p.sign() * shifted.partialPivLu().inverse());
}

HermitianMatrix resolvent_second_derivative(const HermitianMatrix& a, const HermitianMatrix& q,
                                            const ResolventPoint& p) {
  require_same_dim(a, q, "resolvent second derivative");
  const HermitianMatrix r = resolvent_value(a, p);
  const HermitianMatrix root = apply_function(r, [](double x) { return std::sqrt(std::max(x, 0.0)); });
  const CMatrix x = root.matrix() * q.matrix() * r.matrix();
  return HermitianMatrix::hermitian_part(2.0 * x.adjoint() * x);
}

void PickRepresentation::validate() const {
  auto fail = [](const std::string& field, const std::string& why) {
    throw ValidationError("invalid representation field '" + field + "': " + why);
  };
  if (!std::isfinite(alpha)) fail("alpha", "must be finite");
  if (!std::isfinite(beta)) fail("beta", "must be finite");
  if (!std::isfinite(gamma) || gamma < 0.0) fail("gamma", "must be >= 0");
  if (!window.contains(c)) fail("c", "must lie inside the window " + window.to_string());
  for (std::size_t j = 0; j < atoms.size(); ++j) {
    const std::string field = "atoms[" + std::to_string(j) + "]";
    if (!std::isfinite(atoms[j].u) || window.contains(atoms[j].u)) {
      fail(field + ".u", "must lie outside the window " + window.to_string());
    }
    if (!std::isfinite(atoms[j].w) || atoms[j].w <= 0.0) fail(field + ".w", "must be > 0");
  }
}

double pick_eval_scalar(const PickRepresentation& rep, double z) {
  if (!rep.window.contains(z)) {
    std::ostringstream os;
    os << "z = " << z << " outside representation window " << rep.window.to_string();
    throw DomainError(os.str(), z);
  }
  double value = rep.alpha + rep.beta * z + rep.gamma * z * z;
  for (const auto& atom : rep.atoms) {
    const double u = atom.u;
    if (u <= rep.window.lower()) {
      value += atom.w * (z - rep.c) * (1.0 + u * z) / (u - z);
    } else {
      value += atom.w * (rep.c - z) * (1.0 + u * z) / (z - u);
    }
  }
  return value;
}

HermitianMatrix pick_eval_matrix(const PickRepresentation& rep, const HermitianMatrix& a) {
  rep.validate();
  require_spectrum_in(a, rep.window, "Pick representation argument");
  const auto n = a.dim();
  const HermitianMatrix id = HermitianMatrix::identity(n);
  HermitianMatrix out = id * rep.alpha + a * rep.beta +
                        HermitianMatrix::hermitian_part(a.matrix() * a.matrix()) * rep.gamma;
  for (const auto& atom : rep.atoms) {
    const double u = atom.u;
    const double c = rep.c;
    const ResolventPoint p(u, rep.window);
    // (1 + u^2)(u - c) sign f_u(A) - u A + (u c - (1 + u^2)) I
    const HermitianMatrix term = resolvent_value(a, p) * ((1.0 + u * u) * (u - c) * p.sign()) -
                                 a * u + id * (u * c - (1.0 + u * u));
    out = out + term * atom.w;
  }
  return out;
}

HermitianMatrix pick_eval_matrix_spectral(const PickRepresentation& rep, const HermitianMatrix& a) {
  rep.validate();
  return apply_function(a, [&rep](double z) { return pick_eval_scalar(rep, z); }, rep.window);
}

HermitianMatrix pick_second_derivative(const PickRepresentation& rep, const HermitianMatrix& a,
                                       const HermitianMatrix& q) {
  require_same_dim(a, q, "representation second derivative");
  HermitianMatrix out =
      HermitianMatrix::hermitian_part(q.matrix() * q.matrix()) * (2.0 * rep.gamma);
  for (const auto& atom : rep.atoms) {
    const ResolventPoint p(atom.u, rep.window);
    // sign (u - c) = |u - c| on both branches.
    const double weight = atom.w * (1.0 + atom.u * atom.u) * std::abs(atom.u - rep.c);
    out = out + resolvent_second_derivative(a, q, p) * weight;
  }
  return out;
}

ScalarFunction pick_function(const PickRepresentation& rep) {
  rep.validate();
  return ScalarFunction(
      "pick", [rep](double z) { return pick_eval_scalar(rep, z); }, rep.window, {},
      [rep](const HermitianMatrix& m, const HermitianMatrix& q) {
        return pick_second_derivative(rep, m, q);
      });
}

double resolvent_identity_residual(const HermitianMatrix& a, const HermitianMatrix& delta) {
  require_same_dim(a, delta, "resolvent identity");
  const HermitianMatrix ad = a + delta;
  const HermitianMatrix ia = inverse(a);
  const HermitianMatrix iad = inverse(ad);
  const CMatrix r = iad.matrix() - ia.matrix() + ia.matrix() * delta.matrix() * iad.matrix();
  const double scale = operator_norm(ia) * (1.0 + operator_norm(delta) * operator_norm(iad));
  return r.norm() / scale;
}

double elementary_decomposition_residual(double u, double c, double z,
                                         const SpectrumWindow& window) {
  const ResolventPoint p(u, window);
  if (!window.contains(c) || !window.contains(z)) {
    throw DomainError("c and z must lie inside the window", window.contains(c) ? z : c);
  }
  const double lhs = (z - c) * (1.0 + u * z) / (u - z);
  const double rhs = (1.0 + u * u) * (u - c) * p.sign() * p.f(z) - u * z + u * c - (1.0 + u * u);
  return std::abs(lhs - rhs);
}

Verdict certify_representation(const PickRepresentation& rep, Eigen::Index n, std::size_t trials,
                               const RandomSpec& spec, const Tolerances& tol) {
  const ScalarFunction f = pick_function(rep);
  return second_derivative_test(f, rep.window, n, trials, spec, tol);
}

namespace {

double bound_from_json(const json& v, const std::string& where) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s == "inf" || s == "+inf") return kInf;
    if (s == "-inf") return -kInf;
  }
  throw ParseError("window bound must be a number, \"inf\" or \"-inf\"", where);
}

json bound_to_json(double x) {
  if (std::isinf(x)) return x > 0 ? json("inf") : json("-inf");
  return x;
}

double number_field(const json& doc, const char* key, const std::string& where, double fallback,
                    bool required) {
  if (!doc.contains(key)) {
    if (required) throw ParseError(std::string("missing field '") + key + "'", where + "." + key);
    return fallback;
  }
  if (!doc[key].is_number()) throw ParseError(std::string("'") + key + "' must be a number", where + "." + key);
  return doc[key].get<double>();
}

}  // namespace

PickRepresentation pick_from_json(const json& doc) {
  const std::string where = "representation";
  if (!doc.is_object()) throw ParseError("representation must be an object", where);
  for (const auto& [key, value] : doc.items()) {
    if (key != "alpha" && key != "beta" && key != "gamma" && key != "c" && key != "window" &&
        key != "atoms") {
      throw ParseError("unknown field '" + key + "'", where + "." + key);
    }
  }
  if (!doc.contains("window") || !doc["window"].is_array() || doc["window"].size() != 2) {
    throw ParseError("'window' must be a two-element array", where + ".window");
  }
  PickRepresentation rep{
      .alpha = number_field(doc, "alpha", where, 0.0, false),
      .beta = number_field(doc, "beta", where, 0.0, false),
      .gamma = number_field(doc, "gamma", where, 0.0, false),
      .c = number_field(doc, "c", where, 0.0, true),
      .window = SpectrumWindow(bound_from_json(doc["window"][0], where + ".window[0]"),
                               bound_from_json(doc["window"][1], where + ".window[1]")),
      .atoms = {}};
  if (doc.contains("atoms")) {
    if (!doc["atoms"].is_array()) throw ParseError("'atoms' must be an array", where + ".atoms");
    for (std::size_t j = 0; j < doc["atoms"].size(); ++j) {
      const auto& a = doc["atoms"][j];
      const std::string aw = where + ".atoms[" + std::to_string(j) + "]";
      if (!a.is_object()) throw ParseError("atom must be an object {u, w}", aw);
      for (const auto& [key, value] : a.items()) {
        if (key != "u" && key != "w") throw ParseError("unknown field '" + key + "'", aw + "." + key);
      }
      rep.atoms.push_back({number_field(a, "u", aw, 0.0, true), number_field(a, "w", aw, 0.0, true)});
    }
  }
  rep.validate();
  return rep;
}

json pick_to_json(const PickRepresentation& rep) {
  json atoms = json::array();
  for (const auto& a : rep.atoms) atoms.push_back({{"u", a.u}, {"w", a.w}});
  return {{"alpha", rep.alpha},
          {"beta", rep.beta},
          {"gamma", rep.gamma},
          {"c", rep.c},
          {"window", {bound_to_json(rep.window.lower()), bound_to_json(rep.window.upper())}},
          {"atoms", atoms}};
}

}  // namespace matconvex
