#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "finharm/actions.hpp"
#include "finharm/functions.hpp"
#include "finharm/support.hpp"

namespace finharm {

// -- fixed-point spaces ---------------------------------------------------------

/// Null space of dense(Phi) - id over row-major vectorized operators.
inline Subspace fixed_points(const Superoperator& phi, const Tolerances& tol = {}) {
  const Matrix d = phi.dense();
  return null_space(d - Matrix::Identity(d.rows(), d.cols()), tol);
}

/// H_mu = {phi : mu * phi = phi}; dimension [G : <supp mu>].
inline Subspace harmonic_functions(const Measure& mu, const Tolerances& tol = {}) {
  require_probability(mu, tol);
  const Matrix c = convolution_matrix(mu);
  return null_space(c - Matrix::Identity(c.rows(), c.cols()), tol);
}

/// H_sigma = {sum_x c_x lambda(x) : sigma(x) c_x = c_x} = span{lambda(x) : x in G_sigma},
/// as vectorized operators.
inline Subspace harmonic_functionals(const GroupFunction& sigma, const Tolerances& tol = {}) {
  const Index n = Index(sigma.size());
  const LevelSet ls = level_set_one(sigma, tol);
  const Subspace vn = vn_subspace(sigma.group);
  Matrix basis(n * n, Index(ls.members.size()));
  for (std::size_t k = 0; k < ls.members.size(); ++k) basis.col(Index(k)) = vn.basis().col(ls.members[k]);
  return {n * n, basis};
}

/// Fix(Theta_hat(sigma)).
inline Subspace harmonic_operators(const GroupFunction& sigma, const Tolerances& tol = {}) {
  return fixed_points(theta_hat(sigma), tol);
}

inline std::vector<Matrix> diagonal_units(Index n) {
  std::vector<Matrix> out;
  for (Index a = 0; a < n; ++a) {
    Matrix e = Matrix::Zero(n, n);
    e(a, a) = 1.0;
    out.push_back(std::move(e));
  }
  return out;
}

// -- main theorem -----------------------------------------------------------------

struct HarmonicReport {
  std::string group;
  std::string parameter;
  bool p1 = false;                 // full three-way mode when true
  std::vector<Elem> level_set;     // G_sigma
  bool level_set_is_subgroup = false;

  // A = Fix(Theta_hat(sigma)), B = (H_sigma ∪ L^inf(G))'', C = B_{G_sigma}
  Index dim_fixed = 0, dim_generated = 0, dim_support = 0;
  double dist_fixed_generated = 0.0, dist_fixed_support = 0.0, dist_generated_support = 0.0;
  double lower_inclusion_defect = 0.0;  // B ⊆ A
  double upper_inclusion_defect = 0.0;  // A ⊆ C
  std::optional<double> algebra_defect;  // A closed under products/adjoint

  bool pass = false;
  Tolerances tol;
};

/// Computes Fix(Theta_hat(sigma)), (H_sigma ∪ L^inf(G))'' and B_{G_sigma} by
/// three independent routes. For sigma in P^1(G) all three must coincide;
/// otherwise only the inclusions are checked, and B ⊆ A is only required
/// when G_sigma is a subgroup.
inline HarmonicReport verify_main_theorem(const GroupFunction& sigma, const std::string& parameter,
                                          const Tolerances& tol = {}) {
  const auto& g = sigma.group;
  const Index n = Index(g->order());
  HarmonicReport r;
  r.group = g->name();
  r.parameter = parameter;
  r.tol = tol;
  r.p1 = in_p1(sigma, tol);
  const LevelSet ls = level_set_one(sigma, tol);
  r.level_set = ls.members;
  r.level_set_is_subgroup = is_subgroup(*g, ls.members);

  const Subspace fixed = harmonic_operators(sigma, tol);
  std::vector<Matrix> gens = diagonal_units(n);
  for (Elem h : ls.members) gens.push_back(left_regular(g, h).matrix);
  const Subspace generated = double_commutant(gens, n, tol);
  const Subspace supported = support_subspace(g, ls.members);

  r.dim_fixed = fixed.dim();
  r.dim_generated = generated.dim();
  r.dim_support = supported.dim();
  r.dist_fixed_generated = projector_distance(fixed, generated);
  r.dist_fixed_support = projector_distance(fixed, supported);
  r.dist_generated_support = projector_distance(generated, supported);
  r.lower_inclusion_defect = containment_defect(generated, fixed);
  r.upper_inclusion_defect = containment_defect(fixed, supported);
  if (fixed.dim() <= 64) r.algebra_defect = star_algebra_defect(fixed, n);

  if (r.p1) {
    r.pass = r.dist_fixed_generated <= tol.eq_tol && r.dist_fixed_support <= tol.eq_tol &&
             r.dist_generated_support <= tol.eq_tol;
  } else {
    const bool lower_ok = r.lower_inclusion_defect <= tol.eq_tol || !r.level_set_is_subgroup;
    r.pass = lower_ok && r.upper_inclusion_defect <= tol.eq_tol;
  }
  return r;
}

// -- mu side ------------------------------------------------------------------------

struct CrossedProductReport {
  Index dim_fixed = 0, dim_vn = 0;
  double distance = 0.0;
  bool pass = false;
};

/// Fix(Theta(mu)) against lambda(G)'' = VN(G); they agree when mu is adapted.
inline CrossedProductReport mu_fixed_points_vs_vn(const Measure& mu, const Tolerances& tol = {}) {
  const auto& g = mu.group;
  const Index n = Index(g->order());
  const Subspace fixed = fixed_points(theta(mu), tol);
  std::vector<Matrix> gens;
  for (Index x = 0; x < n; ++x) gens.push_back(left_regular(g, Elem(x)).matrix);
  const Subspace vn = double_commutant(gens, n, tol);
  CrossedProductReport r{fixed.dim(), vn.dim(), projector_distance(fixed, vn), false};
  r.pass = r.distance <= tol.eq_tol;
  return r;
}

// -- limit products -------------------------------------------------------------------

struct LimitResult {
  Matrix value;  // column vector in function mode
  int iterations = 0;
  double residual = 0.0;  // last successive Cesàro difference (max norm)
  bool converged = false;
  std::vector<std::string> warnings;
};

namespace detail {

/// Cesàro averages of s_n = step^n(start), n >= 1, stopping once two
/// successive averages differ by at most tol in max norm.
template <class Step>
LimitResult cesaro_limit(Matrix start, Step step, int max_n, double tol) {
  LimitResult r;
  Matrix s = std::move(start);
  Matrix sum = Matrix::Zero(s.rows(), s.cols());
  Matrix prev;
  for (int k = 1; k <= max_n; ++k) {
    s = step(s);
    sum += s;
    Matrix avg = sum / double(k);
    if (k >= 2) {
      r.residual = max_abs(avg - prev);
      if (r.residual <= tol) {
        r.value = std::move(avg);
        r.iterations = k;
        r.converged = true;
        return r;
      }
    }
    prev = std::move(avg);
    r.iterations = k;
  }
  r.value = std::move(prev);
  return r;
}

inline void check_limit_inputs(const Measure& mu, const Tolerances& tol) {
  require_probability(mu, tol);
  if (!is_adapted_measure(mu, tol)) throw Error(ErrorKind::NotProbability, "limit product needs an adapted measure");
}

}  // namespace detail

/// Product on H_mu: Cesàro limit of sum_x mu^{*n}(x) rho(x)(fg). The n-th term
/// equals (mu *)^n applied to fg, which is what gets iterated.
inline LimitResult limit_product_function(const GroupFunction& f, const GroupFunction& h, const Measure& mu,
                                          int max_n, double tol, const Tolerances& tols = {}) {
  require_same_group(f.group, h.group, "limit_product");
  require_same_group(f.group, mu.group, "limit_product");
  detail::check_limit_inputs(mu, tols);
  LimitResult r;
  const Subspace harm = harmonic_functions(mu, tols);
  std::vector<std::string> warnings;
  if (harm.residual(f.values) > tols.eq_tol) warnings.push_back("first argument is not mu-harmonic");
  if (harm.residual(h.values) > tols.eq_tol) warnings.push_back("second argument is not mu-harmonic");
  const Matrix c = convolution_matrix(mu);
  Matrix start = f.values.cwiseProduct(h.values);
  r = detail::cesaro_limit(start, [&](const Matrix& s) -> Matrix { return c * s; }, max_n, tol);
  r.warnings = std::move(warnings);
  if (!r.converged)
    throw Error(ErrorKind::Convergence, "Cesàro residual " + std::to_string(r.residual) + " after " +
                                            std::to_string(max_n) + " steps");
  return r;
}

/// Product on Fix(Theta(mu)): Cesàro limit of Theta(mu^{*n})(ST).
inline LimitResult limit_product_operator(const OperatorMatrix& s, const OperatorMatrix& t, const Measure& mu,
                                          int max_n, double tol, const Tolerances& tols = {}) {
  require_same_group(s.group, t.group, "limit_product");
  require_same_group(s.group, mu.group, "limit_product");
  detail::check_limit_inputs(mu, tols);
  const Superoperator th = theta(mu);
  const Subspace fix = fixed_points(th, tols);
  std::vector<std::string> warnings;
  if (fix.residual(vec(s.matrix)) > tols.eq_tol) warnings.push_back("first argument is not mu-harmonic");
  if (fix.residual(vec(t.matrix)) > tols.eq_tol) warnings.push_back("second argument is not mu-harmonic");
  LimitResult r = detail::cesaro_limit(
      s.matrix * t.matrix, [&](const Matrix& x) -> Matrix { return th.apply(x); }, max_n, tol);
  r.warnings = std::move(warnings);
  if (!r.converged)
    throw Error(ErrorKind::Convergence, "Cesàro residual " + std::to_string(r.residual) + " after " +
                                            std::to_string(max_n) + " steps");
  return r;
}

// -- ideals in the predual ---------------------------------------------------------------

/// Range of Phi_* - id: the pre-annihilator of Fix(Phi) under the trace pairing.
inline Subspace pre_annihilator_ideal(const Superoperator& phi, const Tolerances& tol = {}) {
  const Matrix d = pre_adjoint(phi).dense();
  return range_space(d - Matrix::Identity(d.rows(), d.cols()), tol);
}

/// max |Tr(T w)| over basis pairs.
inline double trace_pairing_defect(const Subspace& operators, const Subspace& functionals, Index n) {
  double worst = 0.0;
  for (Index i = 0; i < operators.dim(); ++i) {
    const Matrix t = unvec(operators.basis().col(i), n);
    for (Index j = 0; j < functionals.dim(); ++j)
      worst = std::max(worst, std::abs(trace_pairing(t, unvec(functionals.basis().col(j), n))));
  }
  return worst;
}

struct BulletClosure {
  double left = 0.0;   // E . w
  double right = 0.0;  // w . E
};

/// Residual of E_ab . w and w . E_ab outside `ideal` over ideal basis x matrix units.
inline BulletClosure bullet_closure_defect(const Subspace& ideal, const GroupPtr& g) {
  const Index n = Index(g->order());
  BulletClosure out;
  if (ideal.dim() == 0) return out;
  const Matrix complement = Matrix::Identity(n * n, n * n) - ideal.projector();
  std::vector<OperatorMatrix> members;
  for (Index k = 0; k < ideal.dim(); ++k) members.emplace_back(g, unvec(ideal.basis().col(k), n));
  Matrix left(n * n, ideal.dim()), right(n * n, ideal.dim());
  for (Index a = 0; a < n; ++a)
    for (Index b = 0; b < n; ++b) {
      const auto e = OperatorMatrix::unit(g, Elem(a), Elem(b));
      for (Index k = 0; k < ideal.dim(); ++k) {
        left.col(k) = vec(bullet(e, members[std::size_t(k)]).matrix);
        right.col(k) = vec(bullet(members[std::size_t(k)], e).matrix);
      }
      out.left = std::max(out.left, (complement * left).colwise().norm().maxCoeff());
      out.right = std::max(out.right, (complement * right).colwise().norm().maxCoeff());
    }
  return out;
}

struct IdealReport {
  Index dim_ideal = 0, dim_fixed = 0;
  double orthogonality_defect = 0.0;
  BulletClosure closure;
  bool pass = false;
};

/// The ideal I_sigma = range(Theta_hat(sigma)_* - id) checked against Fix(Theta_hat(sigma)):
/// complementary dimensions, trace-pairing orthogonality and two-sided
/// closure under the bullet product.
inline IdealReport sigma_ideal_report(const GroupFunction& sigma, const Tolerances& tol = {}, double closure_tol = 1e-10) {
  const Index n = Index(sigma.size());
  const Superoperator phi = theta_hat(sigma);
  const Subspace ideal = pre_annihilator_ideal(phi, tol);
  const Subspace fixed = fixed_points(phi, tol);
  IdealReport r;
  r.dim_ideal = ideal.dim();
  r.dim_fixed = fixed.dim();
  r.orthogonality_defect = trace_pairing_defect(fixed, ideal, n);
  r.closure = bullet_closure_defect(ideal, sigma.group);
  r.pass = r.dim_ideal + r.dim_fixed == n * n && r.orthogonality_defect <= closure_tol &&
           r.closure.left <= closure_tol && r.closure.right <= closure_tol;
  return r;
}

struct LinftyPerpReport {
  Index dim_perp = 0, dim_augmentation = 0, dim_ideal = 0;
  double offdiagonal_distance = 0.0;       // L^inf_perp vs span of off-diagonal units
  double perp_in_augmentation = 0.0;       // L^inf_perp ⊆ T_0
  std::optional<double> ideal_in_perp;     // I_sigma ⊆ L^inf_perp, when sigma(e) = 1
  BulletClosure closure;
  double quotient_formula = 0.0;           // max |f . g - <f,1> g| on diagonal units
  bool pass = false;
};

inline LinftyPerpReport linfty_perp_suite(const GroupFunction& sigma, const Tolerances& tol = {},
                                          double closure_tol = 1e-10) {
  const auto& g = sigma.group;
  const Index n = Index(g->order());
  LinftyPerpReport r;

  Matrix diag_pairing = Matrix::Zero(n, n * n);  // w -> (<M_delta_x, w>)_x = (w[x][x])_x
  for (Index x = 0; x < n; ++x) diag_pairing(x, x * n + x) = 1.0;
  const Subspace perp = null_space(diag_pairing, tol);
  const Subspace augmentation = null_space(vec(Matrix::Identity(n, n)).transpose(), tol);
  const Subspace ideal = pre_annihilator_ideal(theta_hat(sigma), tol);

  Matrix offdiag = Matrix::Zero(n * n, n * n - n);
  Index col = 0;
  for (Index a = 0; a < n; ++a)
    for (Index b = 0; b < n; ++b)
      if (a != b) offdiag(a * n + b, col++) = 1.0;

  r.dim_perp = perp.dim();
  r.dim_augmentation = augmentation.dim();
  r.dim_ideal = ideal.dim();
  r.offdiagonal_distance = projector_distance(perp, Subspace(n * n, offdiag));
  r.perp_in_augmentation = containment_defect(perp, augmentation);
  if (std::abs(sigma(g->identity()) - 1.0) <= tol.eq_tol) r.ideal_in_perp = containment_defect(ideal, perp);
  r.closure = bullet_closure_defect(perp, g);

  for (Index a = 0; a < n; ++a)
    for (Index b = 0; b < n; ++b) {
      const auto f = OperatorMatrix::unit(g, Elem(a), Elem(a));
      const auto h = OperatorMatrix::unit(g, Elem(b), Elem(b));
      const cplx f_one = trace_pairing(Matrix::Identity(n, n), f.matrix);
      r.quotient_formula = std::max(r.quotient_formula, max_abs(bullet(f, h).matrix - f_one * h.matrix));
    }

  r.pass = r.dim_perp == n * n - n && r.dim_augmentation == n * n - 1 && r.offdiagonal_distance <= tol.eq_tol &&
           r.perp_in_augmentation <= tol.eq_tol && (!r.ideal_in_perp || *r.ideal_in_perp <= tol.eq_tol) &&
           r.closure.left <= closure_tol && r.closure.right <= closure_tol && r.quotient_formula <= closure_tol;
  return r;
}

// -- invariant functions and the commutant identity ------------------------------------------

struct InvariantAlgebraReport {
  Index orbits = 0;
  Index dim_invariant = 0, dim_commutant = 0;
  double distance = 0.0;
  bool pass = false;
};

/// L^inf(G:H) = {f : f(h^{-1} y) = f(y)} as diagonal operators, against the
/// commutant of {lambda(h) : h in H} ∪ L^inf(G).
inline InvariantAlgebraReport invariant_algebra(const Subgroup& h, const Tolerances& tol = {}) {
  const auto& g = h.parent;
  const Index n = Index(g->order());
  std::vector<int> orbit(std::size_t(n), -1);
  int count = 0;
  for (Index y = 0; y < n; ++y) {
    if (orbit[std::size_t(y)] >= 0) continue;
    for (Elem m : h.members) orbit[std::size_t(g->mul(m, Elem(y)))] = count;
    ++count;
  }
  Matrix basis = Matrix::Zero(n * n, count);
  for (Index y = 0; y < n; ++y) basis(y * n + y, orbit[std::size_t(y)]) = 1.0;
  for (int k = 0; k < count; ++k) basis.col(k).normalize();
  const Subspace invariant(n * n, basis);

  std::vector<Matrix> gens = diagonal_units(n);
  for (Elem m : h.members) gens.push_back(left_regular(g, m).matrix);
  const Subspace comm = commutant(gens, n, tol);

  InvariantAlgebraReport r{count, invariant.dim(), comm.dim(), projector_distance(invariant, comm), false};
  r.pass = r.distance <= tol.eq_tol && r.dim_commutant == count;
  return r;
}

// -- Willis ideal --------------------------------------------------------------------------

/// J_mu = range(f -> f - f *' mu) where *' is the pre-adjoint of
/// convolve(mu, .) under <f, phi> = sum_x f(x) phi(x).
inline Subspace willis_ideal(const Measure& mu, const Tolerances& tol = {}) {
  require_probability(mu, tol);
  const Matrix c = convolution_matrix(mu);
  return range_space(Matrix::Identity(c.rows(), c.cols()) - c.transpose(), tol);
}

}  // namespace finharm
