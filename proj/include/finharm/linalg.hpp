#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/QR>
#include <Eigen/SVD>

#include "finharm/error.hpp"
#include "finharm/tolerances.hpp"

namespace finharm {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using Index = Eigen::Index;

/// Row-major vectorization: vec(X)[i*n + j] = X(i, j). Used repo-wide
/// whenever a matrix is treated as an ambient vector.
inline Vector vec(const Matrix& x) {
  Vector v(x.size());
  for (Index i = 0; i < x.rows(); ++i)
    for (Index j = 0; j < x.cols(); ++j) v(i * x.cols() + j) = x(i, j);
  return v;
}

inline Matrix unvec(const Eigen::Ref<const Vector>& v, Index n) {
  if (v.size() != n * n) throw Error(ErrorKind::Dimension, "unvec: length is not n^2");
  Matrix x(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) x(i, j) = v(i * n + j);
  return x;
}

inline double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

/// Linear subspace held as an orthonormal basis (columns) together with
/// its orthogonal projector.
class Subspace {
 public:
  Subspace(Index ambient_dim, Matrix basis) : ambient_(ambient_dim), basis_(std::move(basis)) {
    if (basis_.rows() != ambient_) throw Error(ErrorKind::Dimension, "basis rows != ambient dimension");
    projector_ = basis_ * basis_.adjoint();
  }

  static Subspace zero(Index ambient_dim) { return {ambient_dim, Matrix(ambient_dim, 0)}; }
  static Subspace full(Index ambient_dim) {
    return {ambient_dim, Matrix::Identity(ambient_dim, ambient_dim)};
  }

  Index ambient_dim() const { return ambient_; }
  Index dim() const { return basis_.cols(); }
  const Matrix& basis() const { return basis_; }
  const Matrix& projector() const { return projector_; }
  Vector basis_vector(Index k) const { return basis_.col(k); }

  /// Euclidean distance from v to the subspace.
  double residual(const Vector& v) const { return (v - projector_ * v).norm(); }

 private:
  Index ambient_;
  Matrix basis_;
  Matrix projector_;
};

namespace detail {

/// Keeps a row-compressed copy of a tall stacked matrix: appending blocks
/// and periodically replacing the stack by the R factor of its QR
/// decomposition preserves singular values and right singular vectors.
class RowCompressor {
 public:
  explicit RowCompressor(Index cols) : cols_(cols), stack_(0, cols) {}

  void append(const Matrix& block) {
    if (block.cols() != cols_) throw Error(ErrorKind::Dimension, "row block width mismatch");
    Matrix next(stack_.rows() + block.rows(), cols_);
    next << stack_, block;
    stack_ = std::move(next);
    if (stack_.rows() > 4 * std::max<Index>(cols_, 16)) compress();
  }

  const Matrix& finish() {
    compress();
    return stack_;
  }

 private:
  void compress() {
    if (stack_.rows() <= cols_) return;
    Eigen::HouseholderQR<Matrix> qr(stack_);
    stack_ = qr.matrixQR().topRows(cols_).triangularView<Eigen::Upper>();
  }

  Index cols_;
  Matrix stack_;
};

struct RightSvd {
  Eigen::VectorXd singular;  // descending, length cols
  Matrix v;                  // cols x cols
};

struct FullSvd {
  Eigen::VectorXd singular;
  Matrix u, v;
};

/// Two-sided Jacobi SVD. Eigen 3.4.0's divide-and-conquer BDCSVD was seen to
/// return NaN or inaccurate singular vectors on exactly rank-deficient
/// complex inputs, which is the common case here.
inline FullSvd svd(const Matrix& m, unsigned int options) {
  Eigen::JacobiSVD<Matrix> s(m, options);
  const bool want_u = options & (Eigen::ComputeFullU | Eigen::ComputeThinU);
  const bool want_v = options & (Eigen::ComputeFullV | Eigen::ComputeThinV);
  return {s.singularValues(), want_u ? Matrix(s.matrixU()) : Matrix(), want_v ? Matrix(s.matrixV()) : Matrix()};
}

/// Singular values at or below this are treated as zero.
inline double null_cutoff(double smax, const Tolerances& tol) { return std::max(tol.rank_tol * smax, tol.entry_tol); }

inline RightSvd right_svd(const Matrix& m) {
  const Index c = m.cols();
  Matrix square;
  if (m.rows() > c) {
    Eigen::HouseholderQR<Matrix> qr(m);
    square = qr.matrixQR().topRows(c).triangularView<Eigen::Upper>();
  } else {
    square = Matrix::Zero(c, c);
    square.topRows(m.rows()) = m;
  }
  auto out = svd(square, Eigen::ComputeFullV);
  return {std::move(out.singular), std::move(out.v)};
}

}  // namespace detail

/// Orthonormal basis of the right singular vectors of M with singular value
/// <= max(rank_tol * |M|, entry_tol), after a QR row reduction when M is
/// tall. The absolute floor keeps rounding noise in an otherwise zero M from
/// being read as rank.
inline Subspace null_space(const Matrix& m, const Tolerances& tol = {}) {
  const Index c = m.cols();
  if (c == 0) return Subspace::zero(0);
  if (m.rows() == 0) return Subspace::full(c);
  auto svd = detail::right_svd(m);
  const double cut = detail::null_cutoff(svd.singular(0), tol);
  Index first = 0;  // first index considered null
  while (first < c && svd.singular(first) > cut) ++first;
  return {c, svd.v.rightCols(c - first)};
}

/// Orthonormal basis of the column space of M, same rank rule as null_space.
inline Subspace range_space(const Matrix& m, const Tolerances& tol = {}) {
  const Index r = m.rows();
  if (m.cols() == 0 || r == 0) return Subspace::zero(r);
  const auto svd = detail::svd(m, Eigen::ComputeThinU);
  const auto& s = svd.singular;
  const double cut = detail::null_cutoff(s.size() ? s(0) : 0.0, tol);
  Index rank = 0;
  while (rank < s.size() && s(rank) > cut) ++rank;
  return {r, svd.u.leftCols(rank)};
}

inline Subspace span_of(const std::vector<Vector>& vectors, Index ambient_dim, const Tolerances& tol = {}) {
  Matrix m(ambient_dim, Index(vectors.size()));
  for (std::size_t k = 0; k < vectors.size(); ++k) {
    if (vectors[k].size() != ambient_dim) throw Error(ErrorKind::Dimension, "span_of: vector length");
    m.col(Index(k)) = vectors[k];
  }
  return range_space(m, tol);
}

inline double projector_distance(const Subspace& a, const Subspace& b) {
  if (a.ambient_dim() != b.ambient_dim()) throw Error(ErrorKind::Dimension, "ambient dimensions differ");
  return (a.projector() - b.projector()).norm();
}

/// |P_B P_A - P_A|_F; zero iff A is contained in B.
inline double containment_defect(const Subspace& a, const Subspace& b) {
  if (a.ambient_dim() != b.ambient_dim()) throw Error(ErrorKind::Dimension, "ambient dimensions differ");
  return (b.projector() * a.basis() - a.basis()).norm();
}

inline bool subspace_equal(const Subspace& a, const Subspace& b, const Tolerances& tol = {}) {
  return projector_distance(a, b) <= tol.eq_tol;
}

/// A ⊆ B
inline bool subspace_contains(const Subspace& a, const Subspace& b, const Tolerances& tol = {}) {
  return containment_defect(a, b) <= tol.eq_tol;
}

/// Matrix of X -> AX - XA acting on row-major vec(X).
inline Matrix sylvester_commutator(const Matrix& a) {
  const Index n = a.rows();
  Matrix l = Matrix::Zero(n * n, n * n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j)
      for (Index k = 0; k < n; ++k) {
        l(i * n + j, k * n + j) += a(i, k);  // (AX)_{ij}
        l(i * n + j, i * n + k) -= a(k, j);  // (XA)_{ij}
      }
  return l;
}

/// {X : XA = AX and XA* = A*X for every generator A}, as vectorized n x n
/// matrices.
inline Subspace commutant(const std::vector<Matrix>& generators, Index n, const Tolerances& tol = {}) {
  for (const auto& a : generators)
    if (a.rows() != n || a.cols() != n) throw Error(ErrorKind::Dimension, "commutant: generator is not n x n");
  if (generators.empty()) return Subspace::full(n * n);
  detail::RowCompressor rows(n * n);
  for (const auto& a : generators) {
    rows.append(sylvester_commutator(a));
    if (!a.isApprox(a.adjoint(), 1e-15)) rows.append(sylvester_commutator(a.adjoint()));
  }
  return null_space(rows.finish(), tol);
}

inline std::vector<Matrix> as_matrices(const Subspace& s, Index n) {
  std::vector<Matrix> out;
  out.reserve(std::size_t(s.dim()));
  for (Index k = 0; k < s.dim(); ++k) out.push_back(unvec(s.basis().col(k), n));
  return out;
}

/// S'' computed as the commutant of a basis of S'.
inline Subspace double_commutant(const std::vector<Matrix>& generators, Index n, const Tolerances& tol = {}) {
  const Subspace first = commutant(generators, n, tol);
  return commutant(as_matrices(first, n), n, tol);
}

/// Largest defect of the unital *-algebra axioms over a basis: identity
/// membership, closure under adjoint and under pairwise products.
inline double star_algebra_defect(const Subspace& s, Index n) {
  double worst = s.residual(vec(Matrix::Identity(n, n)));
  const auto mats = as_matrices(s, n);
  for (std::size_t i = 0; i < mats.size(); ++i) {
    worst = std::max(worst, s.residual(vec(mats[i].adjoint())));
    for (std::size_t j = 0; j < mats.size(); ++j) worst = std::max(worst, s.residual(vec(mats[i] * mats[j])));
  }
  return worst;
}

/// K = sum_i left[i] * right[i]^T. `gram` records whether the Hermitian PSD
/// route was taken, in which case right[i] = conj(left[i]).
struct RankFactorization {
  std::vector<Vector> left;
  std::vector<Vector> right;
  bool gram = false;

  Matrix reconstruct(Index rows, Index cols) const {
    Matrix k = Matrix::Zero(rows, cols);
    for (std::size_t i = 0; i < left.size(); ++i) k += left[i] * right[i].transpose();
    return k;
  }
};

inline bool is_hermitian(const Matrix& k, double tol) {
  return k.rows() == k.cols() && max_abs(k - k.adjoint()) <= tol;
}

/// Smallest eigenvalue of the Hermitian part of K.
inline double min_hermitian_eigenvalue(const Matrix& k) {
  Matrix h = (k + k.adjoint()) * 0.5;
  Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

inline RankFactorization psd_factorize(const Matrix& k, const Tolerances& tol = {}) {
  if (k.rows() != k.cols()) throw Error(ErrorKind::Dimension, "psd_factorize: matrix is not square");
  const Index n = k.rows();
  RankFactorization out;
  if (n == 0) return out;
  const double eps = std::numeric_limits<double>::epsilon();

  bool psd = false;
  if (is_hermitian(k, tol.entry_tol)) {
    Matrix h = (k + k.adjoint()) * 0.5;
    Eigen::SelfAdjointEigenSolver<Matrix> es(h);
    const auto& ev = es.eigenvalues();
    const double scale = std::max(std::abs(ev(0)), std::abs(ev(n - 1)));
    if (ev(0) >= -tol.rank_tol * scale) {
      psd = true;
      out.gram = true;
      const double cut = double(n) * eps * scale;
      for (Index i = n - 1; i >= 0; --i) {
        if (ev(i) <= cut) break;
        Vector u = std::sqrt(ev(i)) * es.eigenvectors().col(i);
        out.left.push_back(u);
        out.right.push_back(u.conjugate());
      }
    }
  }
  if (!psd) {
    const auto svd = detail::svd(k, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const auto& s = svd.singular;
    const double cut = double(n) * eps * s(0);
    for (Index i = 0; i < s.size() && s(i) > cut; ++i) {
      out.left.push_back(s(i) * svd.u.col(i));
      out.right.push_back(svd.v.col(i).conjugate());
    }
  }
  const double residual = max_abs(k - out.reconstruct(n, n));
  if (residual > tol.entry_tol)
    throw Error(ErrorKind::Residual, "psd_factorize residual " + std::to_string(residual));
  return out;
}

}  // namespace finharm
