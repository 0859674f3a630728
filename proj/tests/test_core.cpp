#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include <gtest/gtest.h>

#include "finharm/functions.hpp"
#include "finharm/random.hpp"

using namespace finharm;

namespace {

const cplx I1(0.0, 1.0);

/// Throws and checks the ErrorKind.
template <class F>
void expect_error(F&& f, ErrorKind kind) {
  try {
    f();
    ADD_FAILURE() << "no error thrown";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), kind) << e.what();
  }
}

nlohmann::json cayley_doc(const std::string& name, const std::vector<std::vector<int>>& t) {
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < t.size(); ++i) labels.push_back("g" + std::to_string(i));
  return {{"name", name}, {"order", t.size()}, {"elements", labels}, {"table", t}};
}

/// Brute-force group axioms on a table.
void expect_group_axioms(const GroupTable& g) {
  const auto n = Elem(g.order());
  for (Elem a = 0; a < n; ++a) {
    EXPECT_EQ(g.mul(a, g.inv(a)), g.identity());
    EXPECT_EQ(g.mul(g.identity(), a), a);
    for (Elem b = 0; b < n; ++b)
      for (Elem c = 0; c < n; ++c) ASSERT_EQ(g.mul(g.mul(a, b), c), g.mul(a, g.mul(b, c)));
  }
}

}  // namespace

// -- group_core ------------------------------------------------------------------

TEST(Group, TrivialGroup) {
  auto g = make_group(Cyclic{1});
  EXPECT_EQ(g->order(), 1u);
  EXPECT_EQ(g->mul(0, 0), 0);
}

TEST(Group, S3IsNonabelianOfOrderSix) {
  auto g = make_group(Symmetric{3});
  EXPECT_EQ(g->order(), 6u);
  bool found = false;
  for (Elem a = 0; a < 6; ++a)
    for (Elem b = 0; b < 6; ++b) found |= g->mul(a, b) != g->mul(b, a);
  EXPECT_TRUE(found);
  EXPECT_FALSE(g->is_abelian());
}

TEST(Group, KleinFourEveryElementSelfInverse) {
  auto g = make_group(DirectProduct{make_group(Cyclic{2}), make_group(Cyclic{2})});
  EXPECT_EQ(g->order(), 4u);
  for (Elem a = 0; a < 4; ++a) EXPECT_EQ(g->mul(a, a), g->identity());
}

TEST(Group, BuiltinsSatisfyAxioms) {
  for (const char* name : {"Z1", "Z7", "D4", "D5", "S3", "S4", "Q8", "Z2xZ4", "Z3xS3"}) {
    SCOPED_TRACE(name);
    expect_group_axioms(*make_group(name));
  }
}

TEST(Group, QuaternionStructure) {
  auto g = make_group("Q8");
  EXPECT_FALSE(g->is_abelian());
  int order4 = 0, order2 = 0;
  for (Elem a = 0; a < 8; ++a) {
    order4 += g->element_order(a) == 4;
    order2 += g->element_order(a) == 2;
  }
  EXPECT_EQ(order4, 6);
  EXPECT_EQ(order2, 1);  // -1 is the only involution
  EXPECT_EQ(all_subgroups(g).size(), 6u);
}

TEST(Group, SizeCapAndBadKinds) {
  expect_error([] { make_group(Symmetric{6}); }, ErrorKind::SizeCap);
  expect_error([] { make_group(Cyclic{121}); }, ErrorKind::SizeCap);
  expect_error([] { make_group(Cyclic{0}); }, ErrorKind::Schema);
  expect_error([] { make_group("foo"); }, ErrorKind::Schema);
  expect_error([] { make_group("Z"); }, ErrorKind::Schema);
}

TEST(Group, ParseRoundTripAndIdentityRelabel) {
  auto z3 = make_group("Z3");
  auto back = parse_group(to_json(*z3));
  EXPECT_EQ(back->table(), z3->table());
  EXPECT_EQ(back->identity(), 0);

  // Z3 with the identity stored at index 2
  auto moved = parse_group(cayley_doc("Z3'", {{1, 2, 0}, {2, 0, 1}, {0, 1, 2}}));
  EXPECT_EQ(moved->elements()[0], "g2");
  expect_group_axioms(*moved);
}

TEST(Group, ParseErrors) {
  expect_error([] { parse_group(cayley_doc("bad", {{0, 1}, {1, 2}})); }, ErrorKind::Schema);
  expect_error([] { parse_group(nlohmann::json{{"name", "x"}}); }, ErrorKind::Schema);
  expect_error([] { parse_group(cayley_doc("noid", {{1, 0}, {0, 0}})); }, ErrorKind::Identity);
  // identity 0 but element 1 has no inverse
  expect_error([] { parse_group(cayley_doc("noinv", {{0, 1, 2}, {1, 1, 1}, {2, 1, 0}})); }, ErrorKind::Inverse);
}

TEST(Group, NonAssociativeLatinSquareNamesTriple) {
  // order-5 loop (quasigroup with identity): a Latin square that is not a group
  const std::vector<std::vector<int>> t = {
      {0, 1, 2, 3, 4}, {1, 0, 3, 4, 2}, {2, 4, 0, 1, 3}, {3, 2, 4, 0, 1}, {4, 3, 1, 2, 0}};
  for (std::size_t a = 0; a < 5; ++a) {  // oracle: really a Latin square
    std::set<int> row(t[a].begin(), t[a].end()), col;
    for (std::size_t b = 0; b < 5; ++b) col.insert(t[b][a]);
    ASSERT_EQ(row.size(), 5u);
    ASSERT_EQ(col.size(), 5u);
  }
  try {
    parse_group(cayley_doc("loop5", t));
    FAIL() << "accepted a non-associative table";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Associativity);
    EXPECT_NE(std::string(e.what()).find("triple ("), std::string::npos) << e.what();
  }
}

TEST(Group, GeneratedSubgroups) {
  auto z6 = make_group("Z6");
  EXPECT_EQ(generated_subgroup(z6, {}).members, std::vector<Elem>{0});
  EXPECT_EQ(generated_subgroup(z6, {2}).members, (std::vector<Elem>{0, 2, 4}));

  auto s3 = make_group("S3");
  Elem transposition = -1, three_cycle = -1;
  for (Elem a = 1; a < 6; ++a) (s3->element_order(a) == 2 ? transposition : three_cycle) = a;
  EXPECT_EQ(generated_subgroup(s3, {transposition, three_cycle}).order(), 6u);

  gen::Rng rng(1);
  auto d4 = make_group("D4");
  for (int k = 0; k < 20; ++k) {
    auto s = gen::random_subset(gen::all_elements(*d4), rng, 0.2, true);
    auto h = generated_subgroup(d4, s);
    EXPECT_TRUE(is_subgroup(*d4, h.members));
    EXPECT_EQ(generated_subgroup(d4, h.members), h);  // idempotent
    EXPECT_EQ(d4->order() % h.order(), 0u);
  }
}

TEST(Group, SubgroupCounts) {
  // known counts: Z6 4, S3 6, D4 10, Z2xZ2 5, S4 30
  EXPECT_EQ(all_subgroups(make_group("Z6")).size(), 4u);
  EXPECT_EQ(all_subgroups(make_group("S3")).size(), 6u);
  EXPECT_EQ(all_subgroups(make_group("D4")).size(), 10u);
  EXPECT_EQ(all_subgroups(make_group("Z2xZ2")).size(), 5u);
  EXPECT_EQ(all_subgroups(make_group("S4")).size(), 30u);
}

TEST(Characters, Z2AndZ4) {
  auto z2 = characters(*make_group("Z2"));
  ASSERT_EQ(z2.size(), 2u);
  EXPECT_NEAR(std::abs(z2[1].values(1) + 1.0), 0.0, 1e-14);

  // oracle: gamma_k(j) = i^{kj}, every homomorphism Z4 -> 4th roots of unity
  auto g = make_group("Z4");
  auto chars = characters(*g);
  ASSERT_EQ(chars.size(), 4u);
  for (int k = 0; k < 4; ++k) {
    Vector expect(4);
    for (int j = 0; j < 4; ++j) expect(j) = std::pow(I1, k * j);
    const bool present = std::any_of(chars.begin(), chars.end(),
                                     [&](const Character& c) { return (c.values - expect).norm() < 1e-12; });
    EXPECT_TRUE(present) << "k = " << k;
  }
}

TEST(Characters, OrthogonalityAndMultiplicativity) {
  for (const char* name : {"Z1", "Z6", "Z2xZ4", "Z2xZ2xZ2", "Z3xZ3", "Z2xZ6"}) {
    SCOPED_TRACE(name);
    auto g = make_group(name);
    auto chars = characters(*g);
    const auto n = Index(g->order());
    ASSERT_EQ(Index(chars.size()), n);
    EXPECT_NEAR((chars[0].values - Vector::Ones(n)).norm(), 0.0, 1e-12);
    for (std::size_t i = 0; i < chars.size(); ++i) {
      for (Elem a = 0; a < n; ++a)
        for (Elem b = 0; b < n; ++b)
          ASSERT_NEAR(std::abs(chars[i].values(g->mul(a, b)) - chars[i].values(a) * chars[i].values(b)), 0.0, 1e-12);
      for (std::size_t j = 0; j < chars.size(); ++j) {
        const cplx ip = chars[j].values.dot(chars[i].values);  // sum conj(gamma_j) gamma_i
        EXPECT_NEAR(std::abs(ip - (i == j ? double(n) : 0.0)), 0.0, 1e-10);
      }
    }
  }
}

TEST(Characters, NonabelianRejected) {
  expect_error([] { characters(*make_group("S3")); }, ErrorKind::Nonabelian);
}

// -- linalg ----------------------------------------------------------------------

TEST(Linalg, NullSpaceExamples) {
  EXPECT_EQ(null_space(Matrix::Zero(3, 3)).dim(), 3);
  EXPECT_EQ(null_space(Matrix::Identity(3, 3)).dim(), 0);
  Matrix m(2, 2);
  m << 1, 1, 1, 1;
  auto s = null_space(m);
  ASSERT_EQ(s.dim(), 1);
  Vector v(2);
  v << 1.0 / std::sqrt(2.0), -1.0 / std::sqrt(2.0);
  EXPECT_NEAR(std::abs(std::abs(s.basis().col(0).dot(v)) - 1.0), 0.0, 1e-12);
}

/// Oracle: nullity by Gaussian elimination with partial pivoting.
Index nullity_oracle(Matrix m, double tol = 1e-9) {
  Index rank = 0;
  for (Index c = 0; c < m.cols() && rank < m.rows(); ++c) {
    Index piv = rank;
    for (Index r = rank; r < m.rows(); ++r)
      if (std::abs(m(r, c)) > std::abs(m(piv, c))) piv = r;
    if (std::abs(m(piv, c)) <= tol) continue;
    m.row(piv).swap(m.row(rank));
    for (Index r = 0; r < m.rows(); ++r)
      if (r != rank) m.row(r) -= m(r, c) / m(rank, c) * m.row(rank);
    ++rank;
  }
  return m.cols() - rank;
}

TEST(Linalg, NullSpaceMatchesEliminationOnLowRankProducts) {
  gen::Rng rng(7);
  for (int k = 0; k < 30; ++k) {
    const Index rows = 3 + k % 7, cols = 4 + k % 5, rank = 1 + k % 3;
    Matrix a(rows, rank), b(rank, cols);
    for (Index i = 0; i < rows; ++i)
      for (Index j = 0; j < rank; ++j) a(i, j) = gen::complex_normal(rng);
    for (Index i = 0; i < rank; ++i)
      for (Index j = 0; j < cols; ++j) b(i, j) = gen::complex_normal(rng);
    const Matrix m = a * b;
    const auto s = null_space(m);
    EXPECT_EQ(s.dim(), nullity_oracle(m));
    EXPECT_LE((m * s.basis()).norm(), 1e-9 * m.norm());
    const Matrix p = s.projector();
    EXPECT_LE((p * p - p).norm(), 1e-10);
    EXPECT_LE((p - p.adjoint()).norm(), 1e-12);
    EXPECT_NEAR(p.trace().real(), double(s.dim()), 1e-10);
  }
}

TEST(Linalg, SubspaceComparison) {
  auto e = [](Index i) {
    Vector v = Vector::Zero(3);
    v(i) = 1.0;
    return v;
  };
  auto a = span_of({e(0), e(1)}, 3);
  auto b = span_of({e(0) + e(1), e(0) - e(1)}, 3);
  EXPECT_TRUE(subspace_equal(a, b));
  auto s1 = span_of({e(0)}, 3), s2 = span_of({e(1)}, 3);
  EXPECT_FALSE(subspace_equal(s1, s2));
  EXPECT_NEAR(projector_distance(s1, s2), std::sqrt(2.0), 1e-14);
  Vector near = e(0) + 1e-12 * e(1);
  EXPECT_TRUE(subspace_equal(s1, span_of({near}, 3)));
  EXPECT_LT(projector_distance(s1, span_of({near}, 3)), 1e-11);
  EXPECT_TRUE(subspace_contains(s1, a));
  EXPECT_FALSE(subspace_contains(a, s1));
  expect_error([&] { projector_distance(s1, Subspace::zero(4)); }, ErrorKind::Dimension);
}

TEST(Linalg, CommutantExamples) {
  EXPECT_EQ(commutant({Matrix::Identity(3, 3)}, 3).dim(), 9);
  std::vector<Matrix> units;
  for (Index a = 0; a < 3; ++a)
    for (Index b = 0; b < 3; ++b) {
      Matrix e = Matrix::Zero(3, 3);
      e(a, b) = 1.0;
      units.push_back(e);
    }
  EXPECT_EQ(commutant(units, 3).dim(), 1);

  Matrix flip(2, 2);
  flip << 0, 1, 1, 0;
  auto c = commutant({Matrix::Identity(2, 2), flip}, 2);
  EXPECT_EQ(c.dim(), 2);
  EXPECT_TRUE(subspace_equal(c, span_of({vec(Matrix::Identity(2, 2)), vec(flip)}, 4)));
  expect_error([] { commutant({Matrix::Identity(2, 2)}, 3); }, ErrorKind::Dimension);
}

TEST(Linalg, CommutantUsesAdjoints) {
  // commutant of a single nilpotent Jordan block with its adjoint: scalars only
  Matrix j = Matrix::Zero(3, 3);
  j(0, 1) = j(1, 2) = 1.0;
  EXPECT_EQ(commutant({j}, 3).dim(), 1);
}

TEST(Linalg, DoubleCommutantExamples) {
  EXPECT_EQ(double_commutant({}, 3).dim(), 1);

  auto z3 = make_group("Z3");
  std::vector<Matrix> lambda;
  for (Elem x = 0; x < 3; ++x) {
    Matrix m = Matrix::Zero(3, 3);
    for (Elem b = 0; b < 3; ++b) m(z3->mul(x, b), b) = 1.0;
    lambda.push_back(m);
  }
  auto vn = double_commutant(lambda, 3);
  EXPECT_EQ(vn.dim(), 3);
  EXPECT_LE(star_algebra_defect(vn, 3), 1e-10);

  std::vector<Matrix> diag;
  for (Index a = 0; a < 4; ++a) {
    Matrix e = Matrix::Zero(4, 4);
    e(a, a) = 1.0;
    diag.push_back(e);
  }
  auto d = double_commutant(diag, 4);
  EXPECT_EQ(d.dim(), 4);
  EXPECT_TRUE(subspace_equal(d, span_of({vec(diag[0]), vec(diag[1]), vec(diag[2]), vec(diag[3])}, 16)));
}

TEST(Linalg, DoubleCommutantIsClosureAndContainsGenerators) {
  gen::Rng rng(11);
  for (int k = 0; k < 5; ++k) {
    // block-structured random generators give nontrivial algebras
    Matrix a = Matrix::Zero(4, 4);
    a.topLeftCorner(2, 2) = gen::random_matrix(rng, 2);
    a(2, 2) = a(3, 3) = gen::complex_normal(rng);
    auto once = double_commutant({a}, 4);
    auto twice = double_commutant(as_matrices(once, 4), 4);
    EXPECT_LE(projector_distance(once, twice), 1e-8);
    EXPECT_LE(once.residual(vec(a)), 1e-9);
    EXPECT_LE(once.residual(vec(Matrix::Identity(4, 4))), 1e-9);
    EXPECT_LE(star_algebra_defect(once, 4), 1e-8);
  }
}

TEST(Linalg, PsdFactorize) {
  auto eye = psd_factorize(Matrix::Identity(4, 4));
  EXPECT_TRUE(eye.gram);
  EXPECT_EQ(eye.left.size(), 4u);
  EXPECT_LE(max_abs(eye.reconstruct(4, 4) - Matrix::Identity(4, 4)), 1e-12);

  auto ones = psd_factorize(Matrix::Ones(5, 5));
  EXPECT_EQ(ones.left.size(), 1u);
  EXPECT_LE(max_abs(ones.reconstruct(5, 5) - Matrix::Ones(5, 5)), 1e-12);

  Matrix k(2, 2);
  k << 1, 2, 2, 1;  // eigenvalues 3, -1
  auto f = psd_factorize(k);
  EXPECT_FALSE(f.gram);
  EXPECT_LE(max_abs(f.reconstruct(2, 2) - k), 1e-10);

  gen::Rng rng(3);
  Matrix r = gen::random_matrix(rng, 6);
  EXPECT_LE(max_abs(psd_factorize(r).reconstruct(6, 6) - r), 1e-10);
}

TEST(Linalg, TolerancesValidate) {
  Tolerances t;
  EXPECT_NO_THROW(t.validate());
  t.eq_tol = 0.0;
  expect_error([&] { t.validate(); }, ErrorKind::Tolerance);
}

// -- functions ---------------------------------------------------------------------

TEST(Functions, PositiveDefiniteExamples) {
  auto g = make_group("S3");
  EXPECT_TRUE(is_positive_definite(GroupFunction::delta(g, 0)).positive_definite);
  EXPECT_TRUE(is_positive_definite(GroupFunction::constant(g, 1.0)).positive_definite);
  auto z5 = make_group("Z5");
  for (const auto& c : characters(*z5)) {
    auto r = is_positive_definite(GroupFunction(z5, c.values));
    EXPECT_TRUE(r.positive_definite);
    // rank-1 Gram: K = conj(gamma) gamma^T
    EXPECT_LE(max_abs(r.witness.gram - c.values.conjugate() * c.values.transpose()), 1e-12);
  }
  Vector v = Vector::Zero(5);
  v(0) = 1.0;
  v(1) = 2.0;  // |sigma(x)| > sigma(e)
  EXPECT_FALSE(is_positive_definite(GroupFunction(z5, v)).positive_definite);
}

TEST(Functions, RandomPdProperties) {
  gen::Rng rng(5);
  for (const char* name : {"S3", "D4", "Q8", "Z6"}) {
    auto g = make_group(name);
    for (int k = 0; k < 10; ++k) {
      auto sigma = gen::random_pd(g, rng, gen::random_subgroup(g, rng));
      ASSERT_TRUE(in_p1(sigma));
      for (Elem x = 0; x < Elem(g->order()); ++x) {
        EXPECT_LE(std::abs(sigma(x)), 1.0 + 1e-12);
        EXPECT_NEAR(std::abs(sigma(g->inv(x)) - std::conj(sigma(x))), 0.0, 1e-12);
      }
      auto ls = level_set_one(sigma);
      EXPECT_TRUE(ls.subgroup.has_value());
    }
  }
}

TEST(Functions, LevelSets) {
  auto g = make_group("D4");
  EXPECT_EQ(level_set_one(GroupFunction::constant(g, 1.0)).members.size(), 8u);
  EXPECT_EQ(level_set_one(GroupFunction::delta(g, 0)).members, std::vector<Elem>{0});
  for (const auto& h : all_subgroups(g)) {
    auto ind = GroupFunction::indicator(g, h.members);
    EXPECT_TRUE(in_p1(ind));
    auto ls = level_set_one(ind);
    EXPECT_EQ(ls.members, h.members);
    ASSERT_TRUE(ls.subgroup.has_value());
  }
}

TEST(Functions, LevelSetToleranceMisconfiguration) {
  // P1 function whose level set at a huge eq_tol is not a subgroup
  auto g = make_group("Z4");
  Vector v(4);
  v << 1.0, 0.5, 0.0, 0.5;  // (1 + cos)/2 type, PD
  GroupFunction sigma(g, v);
  ASSERT_TRUE(in_p1(sigma));
  Tolerances loose;
  loose.eq_tol = 0.6;  // picks up {0,1,3}
  expect_error([&] { level_set_one(sigma, loose); }, ErrorKind::Tolerance);
}

TEST(Functions, AdaptedMeasures) {
  auto z2 = make_group("Z2");
  EXPECT_FALSE(is_adapted_measure(Measure::delta(z2, 0)));
  for (const char* name : {"Z1", "S3", "D4"}) EXPECT_TRUE(is_adapted_measure(Measure::uniform(make_group(name))));
  auto z4 = make_group("Z4");
  EXPECT_FALSE(is_adapted_measure(Measure::delta(z4, 2)));
  Vector bad(2);
  bad << 0.7, 0.7;
  expect_error([&] { is_adapted_measure(Measure(z2, bad)); }, ErrorKind::NotProbability);
}

TEST(Functions, AdaptedPd) {
  auto g = make_group("S3");
  EXPECT_TRUE(is_adapted_pd(GroupFunction::delta(g, 0)));
  EXPECT_FALSE(is_adapted_pd(GroupFunction::constant(g, 1.0)));
  for (const auto& h : all_subgroups(g))
    if (h.order() > 1 && h.order() < 6) {
      EXPECT_FALSE(is_adapted_pd(GroupFunction::indicator(g, h.members)));
    }
  auto c = construct_adapted(g);
  EXPECT_TRUE(in_p1(c));
  EXPECT_TRUE(is_adapted_pd(c));
  Vector v = Vector::Constant(6, 2.0);
  expect_error([&] { is_adapted_pd(GroupFunction(g, v)); }, ErrorKind::NotPositiveDefinite);
}

TEST(Functions, FourierStieltjes) {
  auto z4 = make_group("Z4");
  auto ft = fs_transform(Measure::delta(z4, 0));
  EXPECT_LE((ft.values - Vector::Ones(4)).norm(), 1e-12);

  auto z5 = make_group("Z5");
  auto u = fs_transform(Measure::uniform(z5));
  EXPECT_NEAR(std::abs(u.values(0) - 1.0), 0.0, 1e-12);
  for (Index k = 1; k < 5; ++k) EXPECT_NEAR(std::abs(u.values(k)), 0.0, 1e-12);

  // (delta_1 + delta_3)/2 on Z4: mu_hat(gamma_k) = cos(k pi / 2)
  Vector w(4);
  w << 0, 0.5, 0, 0.5;
  auto m = fs_transform(Measure(z4, w));
  for (std::size_t k = 0; k < 4; ++k) {
    // identify the character by its value at the generator: i^k
    Index kk = 0;
    for (Index c = 0; c < 4; ++c)
      if (std::abs(m.characters[std::size_t(c)].values(1) - std::pow(I1, int(k))) < 1e-12) kk = c;
    EXPECT_NEAR(std::abs(m.values(kk) - std::cos(double(k) * std::numbers::pi / 2)), 0.0, 1e-12);
  }
  expect_error([] { fs_transform(Measure::uniform(make_group("S3"))); }, ErrorKind::Nonabelian);
}

TEST(Functions, AdaptednessEquivalenceExamples) {
  auto z2 = make_group("Z2");
  auto r = check_adaptedness_equivalence(Measure::delta(z2, 0));
  EXPECT_FALSE(r.measure_adapted);
  EXPECT_FALSE(r.transform_adapted);
  EXPECT_TRUE(r.agree);

  auto r3 = check_adaptedness_equivalence(Measure::uniform(make_group("Z3")));
  EXPECT_TRUE(r3.measure_adapted && r3.transform_adapted);

  auto z6 = make_group("Z6");
  Vector w = Vector::Zero(6);
  w(2) = w(3) = 0.5;
  auto r6 = check_adaptedness_equivalence(Measure(z6, w));
  EXPECT_TRUE(r6.measure_adapted && r6.transform_adapted && r6.agree);
}

TEST(Functions, ConvolutionExamples) {
  gen::Rng rng(9);
  auto z4 = make_group("Z4");
  auto phi = gen::random_function(z4, rng);
  EXPECT_LE((convolve(Measure::delta(z4, 0), phi).values - phi.values).norm(), 1e-14);
  auto avg = convolve(Measure::uniform(z4), phi);
  EXPECT_LE((avg.values - Vector::Constant(4, phi.values.mean())).norm(), 1e-14);
  auto shifted = convolve(Measure::delta(z4, 1), GroupFunction::delta(z4, 0));
  EXPECT_LE((shifted.values - GroupFunction::delta(z4, 3).values).norm(), 1e-14);
  expect_error([&] { convolve(Measure::uniform(make_group("Z3")), phi); }, ErrorKind::GroupMismatch);
}

TEST(Functions, ConvolutionAssociativityAndMatrix) {
  gen::Rng rng(13);
  for (const char* name : {"S3", "D4", "Q8"}) {
    auto g = make_group(name);
    for (int k = 0; k < 10; ++k) {
      auto mu = gen::random_adapted(g, rng), nu = gen::random_adapted(g, rng);
      auto phi = gen::random_function(g, rng);
      auto lhs = convolve(mu, convolve(nu, phi));
      auto rhs = convolve(convolve_measures(mu, nu), phi);
      EXPECT_LE((lhs.values - rhs.values).norm(), 1e-12);
      EXPECT_LE((convolution_matrix(mu) * phi.values - convolve(mu, phi).values).norm(), 1e-12);
    }
    auto mu = gen::random_adapted(g, rng);
    auto p3 = convolution_power(mu, 3);
    EXPECT_LE((p3.weights - convolve_measures(mu, convolve_measures(mu, mu)).weights).norm(), 1e-14);
  }
}
