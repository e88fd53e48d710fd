#include "doctest.h"
#include "hopfcyc/cyclic.hpp"
#include "hopfcyc/forms.hpp"
#include "hopfcyc/weil.hpp"

using namespace hopfcyc;

namespace {

AlgebraModel ground_algebra() {
  AlgebraModel a;
  a.name = "k";
  a.dim = 1;
  a.names = {"1"};
  a.mu = {{sv_unit(0)}};
  a.unit = 0;
  a.weight = {0};
  a.h.act = {{sv_unit(0)}};
  return a;
}

SparseMatrix id(std::size_t n) { return SparseMatrix::identity(n); }

// operator identities on one level (raw or induced)
template <class Op>
void check_identities(const OmegaBundle& w, Op op) {
  for (std::size_t k = 0; k <= w.K(); ++k) {
    CAPTURE(k);
    std::size_t n = op(FormOp::Kappa, k).rows();
    if (k + 2 <= w.K()) {
      CHECK((op(FormOp::D, k + 1) * op(FormOp::D, k)).is_zero());
      CHECK((op(FormOp::B, k + 1) * op(FormOp::B, k)).is_zero());
    }
    if (k >= 2) CHECK((op(FormOp::Bh, k - 1) * op(FormOp::Bh, k)).is_zero());
    if (k >= 1 && k + 1 <= w.K()) {
      CHECK((op(FormOp::Bh, k + 1) * op(FormOp::B, k) + op(FormOp::B, k - 1) * op(FormOp::Bh, k)).is_zero());
      SparseMatrix db_bd = op(FormOp::D, k - 1) * op(FormOp::Bh, k) + op(FormOp::Bh, k + 1) * op(FormOp::D, k);
      CHECK(op(FormOp::Kappa, k) == id(n) - db_bd);
    }
    if (k == 0 && w.K() >= 1) CHECK(op(FormOp::Kappa, 0) == id(n) - op(FormOp::Bh, 1) * op(FormOp::D, 0));
  }
}

std::vector<std::size_t> algebra_hc(const HopfAlgebra& h, const ModuleAlgebra& a, const SAYDModule& m,
                                    std::size_t top, bool hoch) {
  auto mod = std::make_shared<CocyclicModule>(build_algebra_cyclic_homology(h, a, m, top + 1).dual());
  CyclicCohomology cc(mod, top);
  auto d = hoch ? cc.hochschild_dims() : cc.cyclic_dims();
  d.resize(top);
  return d;
}

}  // namespace

TEST_CASE("Omega of the ground field") {
  const Bundle& g = ground_bundle();
  OmegaBundle w(g.hopf, ground_algebra(), g.sayd("k"), 4);
  CHECK(w.dim(0) == 1);
  for (std::size_t k = 1; k <= 4; ++k) CHECK(w.dim(k) == 0);
  // Omega / F^n: k in even parity for every n
  for (std::size_t n = 0; n <= 3; ++n) {
    auto s = hodge_level(w, n);
    CHECK(s.h0() == 1);
    CHECK(s.h1() == 0);
  }
}

TEST_CASE("form arithmetic") {
  Bundle b = load_structure_file(fixture_path("trivial_dual"));
  AlgebraModel a = AlgebraModel::from(b.hopf, b.module_algebra("A"));
  // x dx . x = x d(x^2) - x^2 dx = 0 in k[x]/x^2
  CHECK(form_right_mul(a, {1, 1}, 1).empty());
  // dx . x = d(x^2) - x dx = -x dx
  FormVec r = form_right_mul(a, {0, 1}, 1);
  CHECK(r.size() == 1);
  CHECK(r.at({1, 1}) == -1);
  // (dx)(dx) = 1 dx dx
  CHECK(form_mul(a, {0, 1}, {0, 1}).at({0, 1, 1}) == 1);
  CHECK(form_d(a, {0, 1}).empty());
  CHECK(form_d(a, {1, 1}).at({0, 1, 1}) == 1);
}

TEST_CASE("Omega bundle identities, untwisted") {
  for (const char* fx : {"trivial", "trivial_dual"}) {
    CAPTURE(fx);
    Bundle b = load_structure_file(fixture_path(fx));
    OmegaBundle w(b.hopf, AlgebraModel::from(b.hopf, b.module_algebra("A")), b.sayd("k"), 5);
    for (std::size_t k = 0; k <= 5; ++k) CHECK(w.dim(k) == 2);
    check_identities(w, [&](FormOp o, std::size_t k) { return w.raw(o, k); });
    // graded commutators = Im b + Im(1 - kappa)
    for (std::size_t k = 0; k + 1 <= 5; ++k) {
      Subspace s = Subspace::image(w.raw(FormOp::Bh, k + 1)).sum(Subspace::image(id(w.dim(k)) - w.raw(FormOp::Kappa, k)));
      CHECK(s == w.commutators(k));
    }
  }
}

TEST_CASE("Omega bundle identities with coefficients") {
  Bundle b = load_structure_file(fixture_path("kz2_twisted"));
  AlgebraModel a = AlgebraModel::from(b.hopf, b.module_algebra("A"));
  for (const char* m : {"eps", "g_eps"}) {
    CAPTURE(m);
    OmegaBundle w(b.hopf, a, b.sayd(m), 5);
    check_identities(w, [&](FormOp o, std::size_t k) { return w.op(o, k); });
    for (std::size_t k = 0; k + 1 <= 5; ++k) {
      Subspace s = Subspace::image(w.raw(FormOp::Bh, k + 1))
                       .sum(Subspace::image(id(w.dim(k)) - w.raw(FormOp::Kappa, k)))
                       .sum(w.coeff(k).relations());
      CHECK(s == w.nat(k).relations());
    }
  }
  // g_sign is AYD but not stable: b still squares to zero, B does not anticommute with it
  OmegaBundle w(b.hopf, a, b.sayd("g_sign"), 3);
  CHECK((w.op(FormOp::Bh, 1) * w.op(FormOp::Bh, 2)).is_zero());
  CHECK_FALSE((w.op(FormOp::Bh, 2) * w.op(FormOp::B, 1) + w.op(FormOp::B, 0) * w.op(FormOp::Bh, 1)).is_zero());
}

TEST_CASE("Hodge levels against the cyclic module") {
  struct Case {
    const char* fx;
    const char* m;
  };
  for (auto c : {Case{"trivial", "k"}, Case{"trivial_dual", "k"}, Case{"kz2_twisted", "eps"},
                 Case{"kz2_twisted", "g_eps"}}) {
    CAPTURE(c.fx);
    CAPTURE(c.m);
    Bundle b = load_structure_file(fixture_path(c.fx));
    const auto& ma = b.module_algebra("A");
    OmegaBundle w(b.hopf, AlgebraModel::from(b.hopf, ma), b.sayd(c.m), 6);
    CHECK(hodge_cyclic_dims(w) == algebra_hc(b.hopf, ma, b.sayd(c.m), 6, false));
    CHECK(hochschild_dims(w) == algebra_hc(b.hopf, ma, b.sayd(c.m), 6, true));
    auto hh = hochschild_dims(w);
    for (std::size_t n = 1; n + 1 <= 6; ++n) {
      CAPTURE(n);
      auto s = hodge_graded(w, n);
      CHECK(s.squares_zero());
      CHECK((n % 2 ? s.h1() : s.h0()) == hh[n]);
      CHECK((n % 2 ? s.h0() : s.h1()) == 0);
      CHECK(hodge_level(w, n).squares_zero());
    }
    // first level is the X-complex
    auto x = x_complex(w), l1 = hodge_level(w, 1);
    CHECK(x.d0 == l1.d0);
    CHECK(x.d1 == l1.d1);
  }
}

TEST_CASE("truncated polynomial algebra through the generic path") {
  const Bundle& g = ground_bundle();
  FreeAlgebra f = free_algebra(g.hopf, character_module(g.hopf, {1}, 1, "V"), 3);
  Algebra alg = f.model.as_algebra();
  ModuleAlgebra ma;
  ma.alg = &alg;
  ma.h = f.model.h;
  OmegaBundle w(g.hopf, f.model, g.sayd("k"), 4);
  CHECK(hodge_cyclic_dims(w) == algebra_hc(g.hopf, ma, g.sayd("k"), 4, false));
  CHECK(hochschild_dims(w) == algebra_hc(g.hopf, ma, g.sayd("k"), 4, true));
}

TEST_CASE("free algebra: X-complex, small complex and reduced HC") {
  const Bundle& g = ground_bundle();
  Bundle tw = load_structure_file(fixture_path("kz2_twisted"));
  struct Case {
    const HopfAlgebra* h;
    HModule v;
    const SAYDModule* m;
    std::size_t cap;
  };
  std::vector<Case> cases{
      {&g.hopf, character_module(g.hopf, {1}, 1, "V"), &g.sayd("k"), 6},
      {&g.hopf, character_module(g.hopf, {1}, 2, "V"), &g.sayd("k"), 4},
      {&tw.hopf, character_module(tw.hopf, {1, -1}, 1, "V"), &tw.sayd("eps"), 5},
      {&tw.hopf, character_module(tw.hopf, {1, -1}, 1, "V"), &tw.sayd("g_eps"), 5},
      {&tw.hopf, character_module(tw.hopf, {1, -1}, 2, "V"), &tw.sayd("g_eps"), 4},
  };
  for (std::size_t ci = 0; ci < cases.size(); ++ci) {
    const auto& c = cases[ci];
    CAPTURE(ci);
    FreeAlgebra f = free_algebra(*c.h, c.v, c.cap);
    std::size_t K = 4;
    OmegaBundle w(*c.h, f.model, *c.m, K, c.cap);
    auto xr = x_complex_free(w);
    CHECK(xr.x.squares_zero());
    CHECK(xr.h0 == xr.nat_dim);
    CHECK(xr.h1 == 0);
    CHECK(xr.even == 0);
    CHECK(xr.odd == 0);
    if (ci == 0) CHECK(xr.nat_dim == c.cap);
    // reduced HC concentrated in degree 0
    auto hc = hodge_cyclic_dims(w, 1);
    CHECK(hc[0] == xr.nat_dim);
    for (std::size_t n = 1; n < hc.size(); ++n) CHECK(hc[n] == 0);
    // Hochschild homology vanishes above 1
    auto hh = hochschild_dims(w, 1);
    for (std::size_t n = 2; n < hh.size(); ++n) CHECK(hh[n] == 0);
    // de Rham vanishing of the reduced natural forms
    auto dr = derham_dims(w, 1);
    CHECK(dr == std::vector<std::size_t>(K, 0));

    SmallComplex sc(w, f);
    std::string wit;
    CHECK_MESSAGE(sc.homotopy_holds(&wit), wit);
    CHECK(sc.phi_chain_map());
    CHECK(sc.phi_incl_identity());
    CHECK(sc.gamma_bicomplex());
    auto sh = sc.hochschild_dims(1);
    CHECK(sh[0] == hh[0]);
    CHECK(sh[1] == hh[1]);
    CHECK(sc.cyclic_dims(K - 1, 1) == hc);
    CHECK(sc.cyclic_dims(K - 1) == hodge_cyclic_dims(w));
    // (com1) is the expansion of the X-complex
    SparseMatrix tx = sc.to_x();
    CHECK(tx.rows() == tx.cols());
    CHECK(rank(tx) == tx.rows());
    auto x = x_complex(w);
    CHECK(tx * sc.gamma() == x.d0);
    CHECK(x.d1 * tx == sc.b());
  }
}

TEST_CASE("small complex formulas") {
  const Bundle& g = ground_bundle();
  FreeAlgebra f = free_algebra(g.hopf, character_module(g.hopf, {1}, 2, "V"), 3);
  OmegaBundle w(g.hopf, f.model, g.sayd("k"), 3, 3);
  SmallComplex sc(w, f);
  std::size_t x0 = f.index({0}), x1 = f.index({1}), x01 = f.index({0, 1});
  FormVec h = sc.h_raw({0, 0, x01});
  // h_1(1 (x) x0x1) = h_1(x1 (x) x0) - 1 (x) x0 (x) x1 = -(1, x0, x1)
  CHECK(h.size() == 1);
  CHECK(h.at({0, 0, x0, x1}) == -1);
  CHECK(sc.h_raw({0, 0, x0}).empty());
}

TEST_CASE("I-adic filtration of X(T(V))") {
  const Bundle& g = ground_bundle();
  for (std::size_t dv : {1, 2}) {
    CAPTURE(dv);
    std::vector<std::size_t> seen_even;
    for (std::size_t cap : {5, 6}) {
      FreeAlgebra f = free_algebra(g.hopf, character_module(g.hopf, {1}, dv, "V"), cap);
      OmegaBundle w(g.hopf, f.model, g.sayd("k"), 2, cap);
      std::vector<SVec> aug;
      for (std::size_t i = 1; i < f.words.size(); ++i) aug.push_back(sv_unit(i));
      std::optional<XFiltration> prev;
      for (std::size_t p = 0; p <= 4; ++p) {
        CAPTURE(p);
        auto fl = x_filtration(w, aug, p);
        CHECK(fl.quotient.squares_zero());
        CHECK(fl.quotient.h0() == 1);
        CHECK(fl.quotient.h1() == 0);
        if (prev) {
          CHECK(prev->f0.contains(fl.f0));
          CHECK(prev->f1.contains(fl.f1));
        }
        prev = fl;
      }
    }
  }
  // an ideal that the swap action does not preserve
  Bundle tw = load_structure_file(fixture_path("kz2_twisted"));
  HModule swap;
  swap.name = "P";
  swap.dim = 2;
  swap.names = {"x0", "x1"};
  swap.act.act = {{sv_unit(0), sv_unit(1)}, {sv_unit(1), sv_unit(0)}};
  FreeAlgebra f = free_algebra(tw.hopf, swap, 3);
  OmegaBundle w(tw.hopf, f.model, tw.sayd("eps"), 2, 3);
  std::vector<SVec> gen;
  for (std::size_t i = 1; i < f.words.size(); ++i) {
    const auto& wd = f.words[i];
    if (std::find(wd.begin(), wd.end(), 0) != wd.end()) gen.push_back(sv_unit(i));
  }
  try {
    x_filtration(w, gen, 1);
    FAIL("expected descent failure");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DescentFailure);
    CHECK_FALSE(e.witness().empty());
  }
}

TEST_CASE("bar construction and the cotrace") {
  Bundle b = load_structure_file(fixture_path("kz2_twisted"));
  AlgebraModel a = AlgebraModel::from(b.hopf, b.module_algebra("A"));
  BarBundle bb = bar_and_cotrace(a, 4);
  CHECK(bb.norm[1] == id(2));
  for (std::size_t p = 1; p <= 4; ++p) {
    CAPTURE(p);
    std::size_t n = bb.dims[p];
    CHECK(((bb.t[p] - id(n)) * bb.norm[p]).is_zero());
    CHECK((bb.norm[p] * (bb.t[p] - id(n))).is_zero());
    CHECK(Subspace::image(bb.norm[p]) == bb.natural[p]);
    // character count of the cyclic group action
    Scalar tr = 0;
    SparseMatrix pw = id(n);
    for (std::size_t j = 0; j < p; ++j) {
      for (std::size_t i = 0; i < n; ++i) tr += pw.at(i, i);
      pw = bb.t[p] * pw;
    }
    CHECK(Scalar(bb.natural[p].dim()) == tr / p);
    if (p >= 3) CHECK((bb.codiff[p - 1] * bb.codiff[p]).is_zero());
  }
  // p = 2: antisymmetric tensors of a 2-dim space
  CHECK(bb.natural[2].dim() == 1);
}
