#include "doctest.h"
#include "hopfcyc/exactla.hpp"
#include "hopfcyc/homology.hpp"
#include "oracle.hpp"

#include <random>

using namespace hopfcyc;

namespace {

SparseMatrix to_sparse(const std::vector<std::vector<mpz_class>>& a, std::size_t n) {
  std::vector<Vec> rows;
  for (const auto& r : a) {
    Vec v;
    for (const auto& x : r) v.push_back(Scalar(x));
    rows.push_back(v);
  }
  return SparseMatrix::from_dense(rows, n);
}

}  // namespace

TEST_CASE("scalar parsing") {
  CHECK(parse_scalar("3/6") == Scalar(1, 2));
  CHECK(parse_scalar("-4") == Scalar(-4));
  CHECK(scalar_str(parse_scalar("-10/5")) == "-2");
  CHECK_THROWS_AS(parse_scalar("1/0"), Error);
  CHECK_THROWS_AS(parse_scalar("abc"), Error);
  CHECK_THROWS_AS(parse_scalar("1//2"), Error);
  CHECK_THROWS_AS(parse_scalar(""), Error);
}

TEST_CASE("sparse matrix basics") {
  auto m = SparseMatrix::from_entries(2, 3, {{0, 1, 2}, {1, 0, Scalar(1, 3)}, {0, 1, -2}, {1, 2, 5}});
  CHECK(m.nnz() == 2);
  CHECK(m.at(1, 2) == 5);
  CHECK(m.at(0, 1) == 0);
  auto t = m.transpose();
  CHECK(t.rows() == 3);
  CHECK(t.at(2, 1) == 5);
  CHECK(t.transpose() == m);
  auto p = m * t;
  CHECK(p.at(1, 1) == Scalar(1, 9) + 25);
  CHECK((m - m).is_zero());
  CHECK(SparseMatrix::identity(3) * t == t);
  CHECK_THROWS_AS(m * m, Error);
}

TEST_CASE("rank agrees with dense Bareiss oracle") {
  std::mt19937_64 g(7);
  for (int trial = 0; trial < 60; ++trial) {
    std::size_t m = 1 + g() % 9, n = 1 + g() % 9, k = g() % 6;
    auto a = oracle::random_rank(g, m, n, k);
    auto s = to_sparse(a, n);
    CHECK(rank(s) == oracle::bareiss_rank(a));
    CHECK(rank(s.transpose()) == rank(s));
    auto kb = kernel_basis(s);
    CHECK(kb.size() + rank(s) == n);
    for (const auto& v : kb) CHECK(s.apply(v).empty());
  }
}

TEST_CASE("canonical solve") {
  std::mt19937_64 g(11);
  for (int trial = 0; trial < 40; ++trial) {
    std::size_t m = 2 + g() % 6, n = 2 + g() % 6, k = 1 + g() % 4;
    auto s = to_sparse(oracle::random_rank(g, m, n, k), n);
    SVec x0;
    for (std::size_t j = 0; j < n; ++j) {
      long num = long(g() % 5) - 2;
      long den = 1 + long(g() % 3);
      Scalar q(num, den);
      q.canonicalize();
      if (q != 0) x0.emplace_back(j, q);
    }
    SVec b = s.apply(x0);
    auto x = solve(s, b);
    REQUIRE(x.has_value());
    CHECK(s.apply(*x) == b);
    // deterministic
    CHECK(*solve(s, b) == *x);
  }
  auto z = SparseMatrix::from_entries(2, 2, {{0, 0, 1}, {0, 1, 1}});
  CHECK_FALSE(solve(z, sv_unit(1)).has_value());
  auto y = solve(z, sv_unit(0, 3));
  REQUIRE(y);
  CHECK(*y == SVec{{0, 3}});
}

TEST_CASE("subspace canonical form and operations") {
  Subspace a = Subspace::span(4, {{{0, 2}, {1, 2}}, {{1, 1}, {2, -1}}});
  Subspace b = Subspace::span(4, {{{0, 1}, {2, 1}}, {{0, 3}, {1, 3}}});
  CHECK(a == b);
  CHECK(a.dim() == 2);
  CHECK(a.contains(SVec{{0, 1}, {2, 1}}));
  CHECK_FALSE(a.contains(sv_unit(3)));
  Subspace c = Subspace::span(4, {sv_unit(2), sv_unit(3)});
  CHECK(a.intersect(c).dim() == 0);
  CHECK(a.sum(c).dim() == 4);
  Subspace d = Subspace::span(4, {sv_unit(0), sv_unit(1)});
  auto i = a.intersect(d);
  CHECK(i.dim() == 1);
  CHECK(i.contains(SVec{{0, 1}, {1, 1}}));
}

TEST_CASE("quotients and induced maps") {
  Subspace r = Subspace::span(3, {{{0, 1}, {1, -1}}});
  Quotient q(3, r);
  CHECK(q.dim() == 2);
  CHECK(q.project(sv_unit(0)) == q.project(sv_unit(1)));
  CHECK(q.project(q.lift(sv_unit(1))) == sv_unit(1));
  // swap of e0,e1 preserves r, so descends
  auto sw = SparseMatrix::from_entries(3, 3, {{0, 1, 1}, {1, 0, 1}, {2, 2, 1}});
  auto ind = induced_map(sw, q, q);
  CHECK(ind == SparseMatrix::identity(2));
  auto bad = SparseMatrix::from_entries(3, 3, {{2, 0, 1}});
  CHECK_THROWS_AS(induced_map(bad, q, q), Error);
  CHECK(q.projection() * q.section() == SparseMatrix::identity(2));
}

TEST_CASE("cohomology of a small complex") {
  // C0 = k, C1 = k^2, C2 = k, d0 = (1,1)^T, d1 = (1,-1)
  auto d0 = SparseMatrix::from_entries(2, 1, {{0, 0, 1}, {1, 0, 1}});
  auto d1 = SparseMatrix::from_entries(1, 2, {{0, 0, 1}, {0, 1, -1}});
  Cohomology h1(d0, d1, 2);
  CHECK(h1.dim() == 0);
  Cohomology h0(SparseMatrix(), d0, 1);
  CHECK(h0.dim() == 0);
  Cohomology h2(d1, SparseMatrix(), 1);
  CHECK(h2.dim() == 0);
  auto z = SparseMatrix::from_entries(1, 2, {});
  Cohomology h1b(d0, z, 2);
  CHECK(h1b.dim() == 1);
  CHECK(h1b.coords(sv_unit(0)) == sv_scale(h1b.coords(sv_unit(1)), -1));
  CHECK_THROWS_AS(Cohomology(d0, SparseMatrix::from_entries(1, 2, {{0, 0, 1}}), 2), Error);
}
