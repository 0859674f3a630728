#pragma once

#include <string>
#include <variant>
#include <vector>

#include <unsupported/Eigen/KroneckerProduct>

#include "finharm/functions.hpp"
#include "finharm/group.hpp"
#include "finharm/linalg.hpp"

namespace finharm {

/// A bounded operator on l^2(G) as an |G| x |G| matrix. Under the trace
/// pairing <T, w> = Tr(T w) the same type carries trace-class elements.
struct OperatorMatrix {
  GroupPtr group;
  Matrix matrix;

  OperatorMatrix(GroupPtr g, Matrix m) : group(std::move(g)), matrix(std::move(m)) {
    const Index n = Index(group->order());
    if (matrix.rows() != n || matrix.cols() != n) throw Error(ErrorKind::Dimension, "operator is not |G| x |G|");
  }

  static OperatorMatrix identity(const GroupPtr& g) {
    const Index n = Index(g->order());
    return {g, Matrix::Identity(n, n)};
  }
  static OperatorMatrix unit(const GroupPtr& g, Elem a, Elem b) {
    const Index n = Index(g->order());
    Matrix m = Matrix::Zero(n, n);
    m(a, b) = 1.0;
    return {g, m};
  }
  Index n() const { return matrix.rows(); }
};

/// An operator on l^2(G x G), rows and columns indexed by pairs (x, y) at
/// position x*|G| + y.
struct DoubledOperator {
  GroupPtr group;
  Matrix matrix;
};

inline void require_same_group(const GroupPtr& a, const GroupPtr& b, const char* where) {
  if (a != b) throw Error(ErrorKind::GroupMismatch, where);
}

inline void require_superoperator_cap(const GroupTable& g) {
  if (g.order() > GroupTable::kMaxSuperoperatorOrder)
    throw Error(ErrorKind::SizeCap, "order " + std::to_string(g.order()) + " > " +
                                        std::to_string(GroupTable::kMaxSuperoperatorOrder));
}

inline cplx trace_pairing(const Matrix& t, const Matrix& omega) { return (t * omega).trace(); }
inline cplx trace_pairing(const OperatorMatrix& t, const OperatorMatrix& omega) {
  require_same_group(t.group, omega.group, "trace_pairing");
  return trace_pairing(t.matrix, omega.matrix);
}

// -- regular representations ------------------------------------------------

/// lambda(x)[a][b] = 1 iff a = x b.
inline OperatorMatrix left_regular(const GroupPtr& g, Elem x) {
  const Index n = Index(g->order());
  Matrix m = Matrix::Zero(n, n);
  for (Index b = 0; b < n; ++b) m(g->mul(x, Elem(b)), b) = 1.0;
  return {g, m};
}

/// rho(x)[a][b] = 1 iff b = a x.
inline OperatorMatrix right_regular(const GroupPtr& g, Elem x) {
  const Index n = Index(g->order());
  Matrix m = Matrix::Zero(n, n);
  for (Index a = 0; a < n; ++a) m(a, g->mul(Elem(a), x)) = 1.0;
  return {g, m};
}

inline OperatorMatrix mult_op(const GroupFunction& f) { return {f.group, f.values.asDiagonal()}; }

/// Orthonormal basis of span{lambda(x)} = VN(G), vectorized.
inline Subspace vn_subspace(const GroupPtr& g) {
  const Index n = Index(g->order());
  Matrix basis(n * n, n);
  for (Index x = 0; x < n; ++x) basis.col(x) = vec(left_regular(g, Elem(x)).matrix) / std::sqrt(double(n));
  return {n * n, basis};
}

inline Subspace diagonal_subspace(Index n) {
  Matrix basis = Matrix::Zero(n * n, n);
  for (Index a = 0; a < n; ++a) basis(a * n + a, a) = 1.0;
  return {n * n, basis};
}

// -- superoperators -----------------------------------------------------------

/// Linear map on operators. Three interchangeable representations:
///   Schur   : T -> mask o T (entrywise)
///   ConjSum : T -> sum_k w_k L_k T R_k
///   Dense   : |G|^2 x |G|^2 matrix acting on row-major vec(T)
class Superoperator {
 public:
  struct Schur { Matrix mask; };
  struct Term { cplx weight; Matrix left, right; };
  struct ConjSum { std::vector<Term> terms; };
  struct Dense { Matrix matrix; };
  using Representation = std::variant<Schur, ConjSum, Dense>;

  Superoperator(GroupPtr g, Representation rep) : group_(std::move(g)), rep_(std::move(rep)) {}

  static Superoperator identity(const GroupPtr& g) {
    const Index n = Index(g->order());
    return {g, Schur{Matrix::Ones(n, n)}};
  }

  const GroupPtr& group() const { return group_; }
  const Representation& representation() const { return rep_; }

  Matrix apply(const Matrix& t) const {
    const Index n = Index(group_->order());
    if (t.rows() != n || t.cols() != n) throw Error(ErrorKind::Dimension, "superoperator input");
    return std::visit(
        [&](const auto& r) -> Matrix {
          using R = std::decay_t<decltype(r)>;
          if constexpr (std::is_same_v<R, Schur>) {
            return r.mask.cwiseProduct(t);
          } else if constexpr (std::is_same_v<R, ConjSum>) {
            Matrix out = Matrix::Zero(n, n);
            for (const auto& term : r.terms) out += term.weight * (term.left * t * term.right);
            return out;
          } else {
            return unvec(r.matrix * vec(t), n);
          }
        },
        rep_);
  }

  OperatorMatrix operator()(const OperatorMatrix& t) const {
    require_same_group(group_, t.group, "superoperator application");
    return {group_, apply(t.matrix)};
  }

  /// Column j*n + k holds vec(Phi(E_jk)).
  Matrix dense() const {
    const Index n = Index(group_->order());
    if (const auto* d = std::get_if<Dense>(&rep_)) return d->matrix;
    if (const auto* s = std::get_if<Schur>(&rep_)) return Matrix(vec(s->mask).asDiagonal());
    Matrix d(n * n, n * n);
    for (Index j = 0; j < n; ++j)
      for (Index k = 0; k < n; ++k) {
        Matrix e = Matrix::Zero(n, n);
        e(j, k) = 1.0;
        d.col(j * n + k) = vec(apply(e));
      }
    return d;
  }

 private:
  GroupPtr group_;
  Representation rep_;
};

/// Theta(mu)(T) = sum_t mu(t) rho(t) T rho(t)^{-1}.
inline Superoperator theta(const Measure& mu) {
  Superoperator::ConjSum cs;
  for (Index t = 0; t < mu.weights.size(); ++t) {
    if (mu.weights(t) == cplx(0.0)) continue;
    Matrix r = right_regular(mu.group, Elem(t)).matrix;
    cs.terms.push_back({mu.weights(t), r, r.transpose()});
  }
  return {mu.group, cs};
}

/// Schur mask m[a][b] = sigma(a b^{-1}). It is the only L^inf(G)-bimodule map
/// acting on lambda(x) by sigma(x): lambda(x) is the stripe {(a,b): a b^{-1} = x}.
inline Matrix theta_hat_mask(const GroupFunction& sigma) {
  const auto& g = *sigma.group;
  const Index n = Index(g.order());
  Matrix m(n, n);
  for (Index a = 0; a < n; ++a)
    for (Index b = 0; b < n; ++b) m(a, b) = sigma(g.div(Elem(a), Elem(b)));
  return m;
}

inline Superoperator theta_hat(const GroupFunction& sigma) {
  return {sigma.group, Superoperator::Schur{theta_hat_mask(sigma)}};
}

/// Theta_hat(sigma)(T) as sum_i M_{u_i} T M_{v_i}, where the mask is factored
/// as sum_i u_i v_i^T.
inline OperatorMatrix theta_hat_sum_form(const GroupFunction& sigma, const OperatorMatrix& t,
                                         const Tolerances& tol = {}) {
  require_same_group(sigma.group, t.group, "theta_hat_sum_form");
  const auto fac = psd_factorize(theta_hat_mask(sigma), tol);
  Matrix out = Matrix::Zero(t.n(), t.n());
  for (std::size_t i = 0; i < fac.left.size(); ++i)
    out += fac.left[i].asDiagonal() * t.matrix * fac.right[i].asDiagonal();
  return {t.group, out};
}

/// Transposition on row-major vec: P vec(X) = vec(X^T).
inline Matrix transpose_permutation(Index n) {
  Matrix p = Matrix::Zero(n * n, n * n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) p(j * n + i, i * n + j) = 1.0;
  return p;
}

/// <Phi(T), w> = <T, Phi_*(w)> under the trace pairing.
inline Superoperator pre_adjoint(const Superoperator& phi) {
  const Index n = Index(phi.group()->order());
  return std::visit(
      [&](const auto& r) -> Superoperator {
        using R = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<R, Superoperator::Schur>) {
          return {phi.group(), Superoperator::Schur{r.mask.transpose()}};
        } else if constexpr (std::is_same_v<R, Superoperator::ConjSum>) {
          Superoperator::ConjSum cs;
          for (const auto& term : r.terms) cs.terms.push_back({term.weight, term.right, term.left});
          return {phi.group(), cs};
        } else {
          const Matrix p = transpose_permutation(n);
          return {phi.group(), Superoperator::Dense{p * r.matrix.transpose() * p}};
        }
      },
      phi.representation());
}

// -- quotient map and co-multiplication ---------------------------------------

/// pi(w)(x) = <lambda(x), w> = Tr(lambda(x) w).
inline GroupFunction pi_quotient(const OperatorMatrix& omega) {
  const auto& g = *omega.group;
  const Index n = omega.n();
  Vector v(n);
  for (Index x = 0; x < n; ++x) {
    cplx s = 0.0;
    for (Index b = 0; b < n; ++b) s += omega.matrix(b, g.mul(Elem(x), Elem(b)));
    v(x) = s;
  }
  return {omega.group, v};
}

/// Matrix of pi as a map from row-major vec(w) to functions.
inline Matrix pi_matrix(const GroupPtr& g) {
  const Index n = Index(g->order());
  Matrix m = Matrix::Zero(n, n * n);
  for (Index x = 0; x < n; ++x)
    for (Index b = 0; b < n; ++b) m(x, b * n + g->mul(Elem(x), Elem(b))) = 1.0;
  return m;
}

namespace detail {

inline Index pair_index(Index n, Elem x, Elem y) { return Index(x) * n + y; }

/// (W xi)(x, y) = xi(x, x y), i.e. W delta_(a,b) = delta_(a, a^{-1} b).
inline std::vector<Index> w_map(const GroupTable& g) {
  const Index n = Index(g.order());
  std::vector<Index> m(std::size_t(n * n));
  for (Index a = 0; a < n; ++a)
    for (Index b = 0; b < n; ++b) m[std::size_t(pair_index(n, Elem(a), Elem(b)))] = pair_index(n, Elem(a), g.mul(g.inv(Elem(a)), Elem(b)));
  return m;
}

inline std::vector<Index> flip_map(Index n) {
  std::vector<Index> m(std::size_t(n * n));
  for (Index a = 0; a < n; ++a)
    for (Index b = 0; b < n; ++b) m[std::size_t(a * n + b)] = b * n + a;
  return m;
}

inline std::vector<Index> invert(const std::vector<Index>& p) {
  std::vector<Index> q(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) q[std::size_t(p[i])] = Index(i);
  return q;
}

/// Basis map of W_hat = flip W^* flip.
inline std::vector<Index> w_hat_map(const GroupTable& g) {
  const auto s = flip_map(Index(g.order()));
  const auto w_inv = invert(w_map(g));
  std::vector<Index> p(s.size());
  for (std::size_t q = 0; q < s.size(); ++q) p[q] = s[std::size_t(w_inv[std::size_t(s[q])])];
  return p;
}

inline Matrix permutation_matrix(const std::vector<Index>& p) {
  const Index m = Index(p.size());
  Matrix u = Matrix::Zero(m, m);
  for (Index q = 0; q < m; ++q) u(p[std::size_t(q)], q) = 1.0;
  return u;
}

}  // namespace detail

inline DoubledOperator w_operator(const GroupPtr& g) {
  require_superoperator_cap(*g);
  return {g, detail::permutation_matrix(detail::w_map(*g))};
}
inline DoubledOperator flip_operator(const GroupPtr& g) {
  require_superoperator_cap(*g);
  return {g, detail::permutation_matrix(detail::flip_map(Index(g->order())))};
}
inline DoubledOperator w_hat_operator(const GroupPtr& g) {
  require_superoperator_cap(*g);
  return {g, detail::permutation_matrix(detail::w_hat_map(*g))};
}

/// Gamma_hat(T) = W_hat (1 (x) T) W_hat^*. W_hat is a permutation p of the
/// pair basis, so the conjugation is an index relabelling of 1 (x) T.
inline DoubledOperator comultiplication(const OperatorMatrix& t) {
  const auto& g = *t.group;
  require_superoperator_cap(g);
  const Index n = t.n();
  const auto p = detail::w_hat_map(g);
  Matrix out = Matrix::Zero(n * n, n * n);
  for (Index x = 0; x < n; ++x)
    for (Index y = 0; y < n; ++y)
      for (Index b = 0; b < n; ++b) {
        const cplx v = t.matrix(y, b);
        if (v == cplx(0.0)) continue;
        out(p[std::size_t(x * n + y)], p[std::size_t(x * n + b)]) = v;
      }
  return {t.group, out};
}

/// w . rho, closed form of <w . rho, T> = <w (x) rho, Gamma_hat(T)>:
/// (w . rho)[i][j] = pi(w)(j i^{-1}) rho[i][j], i.e. Theta_hat(pi(w))_*(rho).
inline OperatorMatrix bullet(const OperatorMatrix& omega, const OperatorMatrix& rho) {
  require_same_group(omega.group, rho.group, "bullet");
  require_superoperator_cap(*omega.group);
  const auto& g = *omega.group;
  const auto p = pi_quotient(omega);
  const Index n = omega.n();
  Matrix out(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) out(i, j) = p(g.div(Elem(j), Elem(i))) * rho.matrix(i, j);
  return {omega.group, out};
}

/// w . rho by contracting Gamma_hat(E_ab) against w (x) rho, one matrix unit
/// at a time. Used as an oracle for `bullet`; |G| <= 12.
inline OperatorMatrix bullet_by_contraction(const OperatorMatrix& omega, const OperatorMatrix& rho) {
  require_same_group(omega.group, rho.group, "bullet_by_contraction");
  const Index n = omega.n();
  if (n > 12) throw Error(ErrorKind::SizeCap, "bullet_by_contraction needs |G| <= 12");
  const Matrix wr = Eigen::kroneckerProduct(omega.matrix, rho.matrix).eval();
  Matrix out(n, n);
  for (Index a = 0; a < n; ++a)
    for (Index b = 0; b < n; ++b) {
      const Matrix gamma = comultiplication(OperatorMatrix::unit(omega.group, Elem(a), Elem(b))).matrix;
      // <w . rho, E_ab> = (w . rho)[b][a] = Tr(gamma wr)
      out(b, a) = gamma.transpose().cwiseProduct(wr).sum();
    }
  return {omega.group, out};
}

/// (id (x) w)(X)[i][k] = sum_{j,l} X[(i,j)][(k,l)] w[l][j]
inline Matrix slice_right(const Matrix& x, const Matrix& omega) {
  const Index n = omega.rows();
  Matrix out = Matrix::Zero(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index k = 0; k < n; ++k) {
      cplx s = 0.0;
      for (Index j = 0; j < n; ++j)
        for (Index l = 0; l < n; ++l) s += x(i * n + j, k * n + l) * omega(l, j);
      out(i, k) = s;
    }
  return out;
}

/// (w (x) id)(X)[j][l] = sum_{i,k} X[(i,j)][(k,l)] w[k][i]
inline Matrix slice_left(const Matrix& x, const Matrix& omega) {
  const Index n = omega.rows();
  Matrix out = Matrix::Zero(n, n);
  for (Index j = 0; j < n; ++j)
    for (Index l = 0; l < n; ++l) {
      cplx s = 0.0;
      for (Index i = 0; i < n; ++i)
        for (Index k = 0; k < n; ++k) s += x(i * n + j, k * n + l) * omega(k, i);
      out(j, l) = s;
    }
  return out;
}

enum class Side { Left, Right };

/// Left:  w . T = (id (x) w)(Gamma_hat(T)), which lands in VN(G).
/// Right: T . w = (w (x) id)(Gamma_hat(T)).
inline OperatorMatrix module_action(Side side, const OperatorMatrix& omega, const OperatorMatrix& t) {
  require_same_group(omega.group, t.group, "module_action");
  const Matrix gamma = comultiplication(t).matrix;
  return {t.group, side == Side::Left ? slice_right(gamma, omega.matrix) : slice_left(gamma, omega.matrix)};
}

/// Max deviation of (Gamma_hat (x) id) Gamma_hat from (id (x) Gamma_hat) Gamma_hat
/// over the matrix-unit basis. |G| <= 6.
inline double coassociativity_defect(const GroupPtr& g) {
  const Index n = Index(g->order());
  if (n > 6) throw Error(ErrorKind::SizeCap, "coassociativity check needs |G| <= 6");
  std::vector<Matrix> gamma_units(std::size_t(n * n));
  for (Index u = 0; u < n; ++u)
    for (Index v = 0; v < n; ++v)
      gamma_units[std::size_t(u * n + v)] = comultiplication(OperatorMatrix::unit(g, Elem(u), Elem(v))).matrix;
  auto unit = [n](Index u, Index v) {
    Matrix e = Matrix::Zero(n, n);
    e(u, v) = 1.0;
    return e;
  };

  double worst = 0.0;
  for (Index a = 0; a < n; ++a)
    for (Index b = 0; b < n; ++b) {
      const Matrix& x = gamma_units[std::size_t(a * n + b)];
      Matrix lhs = Matrix::Zero(n * n * n, n * n * n);
      Matrix rhs = lhs;
      // x = sum x[(i,j)][(k,l)] E_ik (x) E_jl
      for (Index r = 0; r < n * n; ++r)
        for (Index c = 0; c < n * n; ++c) {
          const cplx v = x(r, c);
          if (v == cplx(0.0)) continue;
          const Index i = r / n, j = r % n, k = c / n, l = c % n;
          lhs += v * Eigen::kroneckerProduct(gamma_units[std::size_t(i * n + k)], unit(j, l)).eval();
          rhs += v * Eigen::kroneckerProduct(unit(i, k), gamma_units[std::size_t(j * n + l)]).eval();
        }
      worst = std::max(worst, max_abs(lhs - rhs));
    }
  return worst;
}

}  // namespace finharm
