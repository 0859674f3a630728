#pragma once

#include <cmath>
#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "finharm/group.hpp"
#include "finharm/linalg.hpp"

namespace finharm {

/// A complex function on a finite group. On a finite group A(G), B(G) and
/// the completely bounded multipliers all coincide with this type.
struct GroupFunction {
  GroupPtr group;
  Vector values;

  GroupFunction(GroupPtr g, Vector v) : group(std::move(g)), values(std::move(v)) {
    if (values.size() != Index(group->order()))
      throw Error(ErrorKind::Dimension, "function length != group order");
  }

  static GroupFunction constant(const GroupPtr& g, cplx c) { return {g, Vector::Constant(Index(g->order()), c)}; }
  static GroupFunction delta(const GroupPtr& g, Elem x) {
    Vector v = Vector::Zero(Index(g->order()));
    v(x) = 1.0;
    return {g, v};
  }
  static GroupFunction indicator(const GroupPtr& g, const std::vector<Elem>& set) {
    Vector v = Vector::Zero(Index(g->order()));
    for (Elem x : set) v(x) = 1.0;
    return {g, v};
  }

  cplx operator()(Elem x) const { return values(x); }
  std::size_t size() const { return group->order(); }
};

inline GroupFunction operator*(const GroupFunction& a, const GroupFunction& b) {
  if (a.group != b.group) throw Error(ErrorKind::GroupMismatch, "pointwise product");
  return {a.group, a.values.cwiseProduct(b.values)};
}

/// Complex weights on G; a probability measure when nonnegative and
/// normalized.
struct Measure {
  GroupPtr group;
  Vector weights;

  Measure(GroupPtr g, Vector w) : group(std::move(g)), weights(std::move(w)) {
    if (weights.size() != Index(group->order()))
      throw Error(ErrorKind::Dimension, "measure length != group order");
  }

  static Measure delta(const GroupPtr& g, Elem x) { return {g, GroupFunction::delta(g, x).values}; }
  static Measure uniform(const GroupPtr& g) {
    return {g, Vector::Constant(Index(g->order()), 1.0 / double(g->order()))};
  }

  bool is_probability(double entry_tol = Tolerances{}.entry_tol) const {
    double total = 0.0;
    for (Index i = 0; i < weights.size(); ++i) {
      if (std::abs(weights(i).imag()) > entry_tol || weights(i).real() < -entry_tol) return false;
      total += weights(i).real();
    }
    return std::abs(total - 1.0) <= entry_tol * std::max<double>(1.0, double(weights.size()));
  }

  std::vector<Elem> support(double entry_tol = Tolerances{}.entry_tol) const {
    std::vector<Elem> s;
    for (Index i = 0; i < weights.size(); ++i)
      if (weights(i).real() > entry_tol) s.push_back(Elem(i));
    return s;
  }
};

inline void require_probability(const Measure& mu, const Tolerances& tol) {
  if (!mu.is_probability(tol.entry_tol)) throw Error(ErrorKind::NotProbability, mu.group->name());
}

struct PDWitness {
  Matrix gram;  // K[x][y] = sigma(x^{-1} y)
  double min_eigenvalue = 0.0;
};

struct PDResult {
  bool positive_definite = false;
  PDWitness witness;
};

inline Matrix pd_gram(const GroupFunction& sigma) {
  const auto& g = *sigma.group;
  const Index n = Index(g.order());
  Matrix k(n, n);
  for (Index x = 0; x < n; ++x)
    for (Index y = 0; y < n; ++y) k(x, y) = sigma(g.mul(g.inv(Elem(x)), Elem(y)));
  return k;
}

/// Positive definiteness through the Gram matrix K[x][y] = sigma(x^{-1}y):
/// Hermitian within entry_tol and min eigenvalue >= -rank_tol * |K|.
inline PDResult is_positive_definite(const GroupFunction& sigma, const Tolerances& tol = {}) {
  PDResult r;
  r.witness.gram = pd_gram(sigma);
  const Matrix& k = r.witness.gram;
  r.witness.min_eigenvalue = min_hermitian_eigenvalue(k);
  if (!is_hermitian(k, tol.entry_tol)) return r;
  Eigen::SelfAdjointEigenSolver<Matrix> es((k + k.adjoint()) * 0.5, Eigen::EigenvaluesOnly);
  const auto& ev = es.eigenvalues();
  const double scale = std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
  r.positive_definite = ev(0) >= -tol.rank_tol * scale;
  return r;
}

/// sigma in P^1(G): positive definite with sigma(e) = 1 (for positive
/// definite sigma the B(G) norm equals sigma(e)).
inline bool in_p1(const GroupFunction& sigma, const Tolerances& tol = {}) {
  return std::abs(sigma(sigma.group->identity()) - 1.0) <= tol.eq_tol &&
         is_positive_definite(sigma, tol).positive_definite;
}

struct LevelSet {
  std::vector<Elem> members;
  /// Present when sigma is in P^1(G); then the level set is a subgroup.
  std::optional<Subgroup> subgroup;
  double eq_tol = 0.0;
};

/// G_sigma = {x : |sigma(x) - 1| <= eq_tol}.
inline LevelSet level_set_one(const GroupFunction& sigma, const Tolerances& tol = {}) {
  LevelSet ls;
  ls.eq_tol = tol.eq_tol;
  for (std::size_t x = 0; x < sigma.size(); ++x)
    if (std::abs(sigma(Elem(x)) - 1.0) <= tol.eq_tol) ls.members.push_back(Elem(x));
  if (in_p1(sigma, tol)) {
    if (!is_subgroup(*sigma.group, ls.members))
      throw Error(ErrorKind::Tolerance, "level set of a P1 function is not a subgroup at eq_tol " +
                                            std::to_string(tol.eq_tol));
    ls.subgroup = Subgroup{sigma.group, ls.members};
  }
  return ls;
}

inline bool is_adapted_measure(const Measure& mu, const Tolerances& tol = {}) {
  require_probability(mu, tol);
  return generated_subgroup(mu.group, mu.support(tol.entry_tol)).order() == mu.group->order();
}

inline bool is_adapted_pd(const GroupFunction& sigma, const Tolerances& tol = {}) {
  if (!in_p1(sigma, tol)) throw Error(ErrorKind::NotPositiveDefinite, "is_adapted_pd");
  const auto ls = level_set_one(sigma, tol);
  return ls.members.size() == 1 && ls.members[0] == sigma.group->identity();
}

/// delta_e: positive definite, sigma(e) = 1 and G_sigma = {e}.
inline GroupFunction construct_adapted(const GroupPtr& g) { return GroupFunction::delta(g, g->identity()); }

struct FourierStieltjes {
  std::vector<Character> characters;
  Vector values;  // values[k] = mu_hat(characters[k])
};

/// mu_hat(gamma) = sum_x conj(gamma(x)) mu(x).
inline FourierStieltjes fs_transform(const Measure& mu) {
  FourierStieltjes out{characters(*mu.group), Vector()};
  out.values.resize(Index(out.characters.size()));
  for (std::size_t k = 0; k < out.characters.size(); ++k)
    out.values(Index(k)) = out.characters[k].values.conjugate().cwiseProduct(mu.weights).sum();
  return out;
}

struct AdaptednessReport {
  bool measure_adapted = false;          // <supp mu> = G
  bool transform_adapted = false;        // {gamma : mu_hat(gamma) = 1} = {1}
  std::vector<std::size_t> level_set;    // indices into characters(G)
  bool agree = false;
  double eq_tol = 0.0;
};

inline AdaptednessReport check_adaptedness_equivalence(const Measure& mu, const Tolerances& tol = {}) {
  AdaptednessReport r;
  r.eq_tol = tol.eq_tol;
  r.measure_adapted = is_adapted_measure(mu, tol);
  const auto ft = fs_transform(mu);
  for (Index k = 0; k < ft.values.size(); ++k)
    if (std::abs(ft.values(k) - 1.0) <= tol.eq_tol) r.level_set.push_back(std::size_t(k));
  // index 0 is the trivial character
  r.transform_adapted = r.level_set.size() == 1 && r.level_set[0] == 0;
  r.agree = r.measure_adapted == r.transform_adapted;
  return r;
}

/// (mu * phi)(x) = sum_t mu(t) phi(x t). This is the convention under which
/// Theta(mu) M_phi = M_{mu * phi} with Theta(mu)(T) = sum_t mu(t) rho(t) T rho(t)^{-1}.
inline GroupFunction convolve(const Measure& mu, const GroupFunction& phi) {
  if (mu.group != phi.group) throw Error(ErrorKind::GroupMismatch, "convolve");
  const auto& g = *phi.group;
  const std::size_t n = g.order();
  Vector out = Vector::Zero(Index(n));
  for (std::size_t t = 0; t < n; ++t) {
    const cplx w = mu.weights(Index(t));
    if (w == cplx(0.0)) continue;
    for (std::size_t x = 0; x < n; ++x) out(Index(x)) += w * phi(g.mul(Elem(x), Elem(t)));
  }
  return {phi.group, out};
}

/// Matrix of phi -> mu * phi.
inline Matrix convolution_matrix(const Measure& mu) {
  const auto& g = *mu.group;
  const Index n = Index(g.order());
  Matrix c = Matrix::Zero(n, n);
  for (Index x = 0; x < n; ++x)
    for (Index t = 0; t < n; ++t) c(x, g.mul(Elem(x), Elem(t))) += mu.weights(t);
  return c;
}

/// (mu * nu)(x) = sum_{st = x} mu(s) nu(t), so that convolve(mu, convolve(nu, .)) = convolve(mu * nu, .).
inline Measure convolve_measures(const Measure& mu, const Measure& nu) {
  if (mu.group != nu.group) throw Error(ErrorKind::GroupMismatch, "convolve_measures");
  const auto& g = *mu.group;
  const Index n = Index(g.order());
  Vector w = Vector::Zero(n);
  for (Index s = 0; s < n; ++s)
    for (Index t = 0; t < n; ++t) w(g.mul(Elem(s), Elem(t))) += mu.weights(s) * nu.weights(t);
  return {mu.group, w};
}

inline Measure convolution_power(const Measure& mu, int k) {
  Measure out = Measure::delta(mu.group, mu.group->identity());
  for (int i = 0; i < k; ++i) out = convolve_measures(out, mu);
  return out;
}

}  // namespace finharm
