#pragma once

#include <algorithm>
#include <vector>

#include "finharm/actions.hpp"

namespace finharm {

struct SupportSet {
  GroupPtr group;
  std::vector<Elem> members;  // sorted
  double entry_tol = 0.0;

  bool contains(Elem x) const { return std::binary_search(members.begin(), members.end(), x); }
  bool empty() const { return members.empty(); }
  bool subset_of(const std::vector<Elem>& other) const {
    return std::all_of(members.begin(), members.end(),
                       [&](Elem x) { return std::find(other.begin(), other.end(), x) != other.end(); });
  }
};

inline bool operator==(const SupportSet& a, const SupportSet& b) { return a.members == b.members; }

/// supp T = {a b^{-1} : |T[a][b]| > entry_tol}. The entries with a b^{-1} = x
/// form the stripe of lambda(x); Theta_hat(phi) scales that stripe by phi(x).
inline SupportSet operator_support(const OperatorMatrix& t, const Tolerances& tol = {}) {
  const auto& g = *t.group;
  std::vector<char> hit(g.order(), 0);
  for (Index a = 0; a < t.n(); ++a)
    for (Index b = 0; b < t.n(); ++b)
      if (std::abs(t.matrix(a, b)) > tol.entry_tol) hit[g.div(Elem(a), Elem(b))] = 1;
  SupportSet s{t.group, {}, tol.entry_tol};
  for (std::size_t x = 0; x < hit.size(); ++x)
    if (hit[x]) s.members.push_back(Elem(x));
  return s;
}

/// Ordinary support of a function, at entry_tol.
inline std::vector<Elem> function_support(const GroupFunction& phi, const Tolerances& tol = {}) {
  std::vector<Elem> s;
  for (std::size_t x = 0; x < phi.size(); ++x)
    if (std::abs(phi(Elem(x))) > tol.entry_tol) s.push_back(Elem(x));
  return s;
}

struct AnnihilatorIdeal {
  Subspace ideal;  // functions phi with Theta_hat(phi)(T) = 0
  SupportSet hull;
  /// Largest residual of phi * delta_y outside the ideal over a basis.
  double ideal_defect = 0.0;
};

/// Matrix of phi -> Theta_hat(phi)(T), from functions to row-major vec(T).
inline Matrix theta_hat_on_operator(const OperatorMatrix& t) {
  const auto& g = *t.group;
  const Index n = t.n();
  Matrix m = Matrix::Zero(n * n, n);
  for (Index a = 0; a < n; ++a)
    for (Index b = 0; b < n; ++b) m(a * n + b, g.div(Elem(a), Elem(b))) = t.matrix(a, b);
  return m;
}

/// {phi : Theta_hat(phi)(T) = 0} and its hull (common zero set). The hull is
/// the definitional support and must agree with operator_support.
inline AnnihilatorIdeal annihilator_ideal(const OperatorMatrix& t, const Tolerances& tol = {}) {
  const Index n = t.n();
  const Matrix map = theta_hat_on_operator(t);
  // rank decisions are relative to |T|; a zero operator annihilates everything
  Subspace ideal = max_abs(t.matrix) <= tol.entry_tol ? Subspace::full(n) : null_space(map, tol);

  SupportSet hull{t.group, {}, tol.entry_tol};
  for (Index x = 0; x < n; ++x)
    if (ideal.projector()(x, x).real() <= tol.eq_tol) hull.members.push_back(Elem(x));

  double defect = 0.0;
  for (Index k = 0; k < ideal.dim(); ++k)
    for (Index y = 0; y < n; ++y) {
      Vector prod = Vector::Zero(n);
      prod(y) = ideal.basis()(y, k);
      defect = std::max(defect, ideal.residual(prod));
    }
  return {std::move(ideal), std::move(hull), defect};
}

/// B_F = {T : supp T ⊆ F} as a subspace of vectorized operators: the span of
/// the matrix units E_ab with a b^{-1} in F.
inline Subspace support_subspace(const GroupPtr& g, const std::vector<Elem>& f) {
  const Index n = Index(g->order());
  std::vector<char> in(std::size_t(n), 0);
  for (Elem x : f) in[std::size_t(x)] = 1;
  std::vector<Index> cols;
  for (Index a = 0; a < n; ++a)
    for (Index b = 0; b < n; ++b)
      if (in[std::size_t(g->div(Elem(a), Elem(b)))]) cols.push_back(a * n + b);
  Matrix basis = Matrix::Zero(n * n, Index(cols.size()));
  for (std::size_t k = 0; k < cols.size(); ++k) basis(cols[k], Index(k)) = 1.0;
  return {n * n, basis};
}

}  // namespace finharm
