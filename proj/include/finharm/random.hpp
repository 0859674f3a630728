#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

#include "finharm/actions.hpp"
#include "finharm/functions.hpp"

namespace finharm::gen {

using Rng = std::mt19937_64;

inline cplx complex_normal(Rng& rng) {
  std::normal_distribution<double> d;
  const double re = d(rng);
  return {re, d(rng)};
}

inline Vector random_vector(Rng& rng, Index n) {
  Vector v(n);
  for (Index i = 0; i < n; ++i) v(i) = complex_normal(rng);
  return v;
}

inline Matrix random_matrix(Rng& rng, Index n) {
  Matrix m(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) m(i, j) = complex_normal(rng);
  return m;
}

inline GroupFunction random_function(const GroupPtr& g, Rng& rng) {
  return {g, random_vector(rng, Index(g->order()))};
}

/// Each element kept with probability p; never empty unless `allow_empty`.
inline std::vector<Elem> random_subset(const std::vector<Elem>& from, Rng& rng, double p = 0.5, bool allow_empty = false) {
  std::bernoulli_distribution keep(p);
  std::vector<Elem> out;
  do {
    out.clear();
    for (Elem x : from)
      if (keep(rng)) out.push_back(x);
  } while (!allow_empty && out.empty() && !from.empty());
  return out;
}

inline std::vector<Elem> all_elements(const GroupTable& g) {
  std::vector<Elem> all(g.order());
  for (std::size_t x = 0; x < g.order(); ++x) all[x] = Elem(x);
  return all;
}

inline Subgroup random_subgroup(const GroupPtr& g, Rng& rng) {
  const auto subs = all_subgroups(g);
  std::uniform_int_distribution<std::size_t> pick(0, subs.size() - 1);
  return subs[pick(rng)];
}

/// sigma(x) = <lambda(x) xi, xi> / |xi|^2 with xi constant on the cosets H b, so
/// that G_sigma contains H (and equals it for generic xi).
inline GroupFunction random_pd(const GroupPtr& g, Rng& rng, const Subgroup& invariant) {
  const auto& t = *g;
  const std::size_t n = t.order();
  std::vector<int> coset(n, -1);
  int count = 0;
  for (std::size_t b = 0; b < n; ++b) {
    if (coset[b] >= 0) continue;
    for (Elem h : invariant.members) coset[std::size_t(t.mul(h, Elem(b)))] = count;
    ++count;
  }
  const Vector values = random_vector(rng, count);
  Vector xi = Vector::Zero(Index(n));
  for (std::size_t b = 0; b < n; ++b) xi(Index(b)) = values(coset[b]);
  Vector s = Vector::Zero(Index(n));
  for (std::size_t x = 0; x < n; ++x) {
    cplx acc = 0.0;  // sum_a xi(x^{-1} a) conj(xi(a))
    for (std::size_t a = 0; a < n; ++a) acc += xi(t.mul(t.inv(Elem(x)), Elem(a))) * std::conj(xi(Index(a)));
    s(Index(x)) = acc / xi.squaredNorm();
  }
  s(0) = 1.0;
  return {g, s};
}

inline GroupFunction random_pd(const GroupPtr& g, Rng& rng) {
  return random_pd(g, rng, generated_subgroup(g, {}));
}

/// sigma(e) = 1, random complex values elsewhere, and a random subset of
/// the other elements pinned to 1. Usually not positive definite.
inline GroupFunction random_nonpd(const GroupPtr& g, Rng& rng) {
  const Index n = Index(g->order());
  Vector s = random_vector(rng, n) * 0.5;
  s(0) = 1.0;
  std::bernoulli_distribution pin(0.3);
  for (Index x = 1; x < n; ++x)
    if (pin(rng)) s(x) = 1.0;
  return {g, s};
}

/// Positive weights on `support`, normalized.
inline Measure random_measure_on(const GroupPtr& g, const std::vector<Elem>& support, Rng& rng) {
  std::uniform_real_distribution<double> w(0.05, 1.0);
  Vector v = Vector::Zero(Index(g->order()));
  double total = 0.0;
  for (Elem x : support) {
    const double a = w(rng);
    v(x) = a;
    total += a;
  }
  return {g, v / total};
}

/// Probability measure whose support generates G.
inline Measure random_adapted(const GroupPtr& g, Rng& rng) {
  const auto all = all_elements(*g);
  for (;;) {
    auto support = random_subset(all, rng, 0.4);
    if (generated_subgroup(g, support).order() == g->order()) return random_measure_on(g, support, rng);
  }
}

/// Probability measure supported inside a random proper subgroup (the trivial
/// group has none, in which case delta_e is returned).
inline Measure random_nonadapted(const GroupPtr& g, Rng& rng) {
  auto subs = all_subgroups(g);
  subs.pop_back();  // G itself
  if (subs.empty()) return Measure::delta(g, g->identity());
  std::uniform_int_distribution<std::size_t> pick(0, subs.size() - 1);
  const auto& h = subs[pick(rng)];
  return random_measure_on(g, random_subset(h.members, rng, 0.6), rng);
}

/// Random operator whose nonzero entries sit exactly on the stripes
/// {(a, b) : a b^{-1} in stripes}.
inline OperatorMatrix random_operator_on(const GroupPtr& g, const std::vector<Elem>& stripes, Rng& rng) {
  const Index n = Index(g->order());
  std::vector<char> in(std::size_t(n), 0);
  for (Elem x : stripes) in[std::size_t(x)] = 1;
  Matrix m = Matrix::Zero(n, n);
  for (Index a = 0; a < n; ++a)
    for (Index b = 0; b < n; ++b)
      if (in[std::size_t(g->div(Elem(a), Elem(b)))]) {
        cplx z = complex_normal(rng);
        // keep entries well away from entry_tol
        if (std::abs(z) < 0.1) z = 0.1 + std::abs(z);
        m(a, b) = z;
      }
  return {g, m};
}

inline OperatorMatrix random_operator(const GroupPtr& g, Rng& rng) {
  return {g, random_matrix(rng, Index(g->order()))};
}

}  // namespace finharm::gen
