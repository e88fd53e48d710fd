#include "doctest.h"
#include "hopfcyc/structures.hpp"

using namespace hopfcyc;

namespace {

bool has_violation(const ValidationReport& r, const std::string& axiom, const std::string& witness = "") {
  for (const auto& c : r.checks)
    if (!c.ok && c.axiom == axiom && (witness.empty() || c.witness == witness)) return true;
  return false;
}

}  // namespace

TEST_CASE("trivial bundle loads and validates") {
  Bundle b = load_structure_file(fixture_path("trivial"));
  CHECK(b.hopf.dim() == 1);
  CHECK(b.coalgebra("point").dim == 1);
  for (const auto& r : b.validate_all()) CHECK_MESSAGE(r.pass(), r.object);
  auto s = validate_sayd(b.hopf, b.sayd("k"));
  CHECK(s.flags["ayd"]);
  CHECK(s.flags["stable"]);
}

TEST_CASE("coalgebra validation") {
  Bundle b = load_structure_file(fixture_path("coalgebras"));
  CHECK(validate_coalgebra(b.coalgebra("point")).pass());
  CHECK(validate_coalgebra(b.coalgebra("kZ2")).pass());
  CHECK(validate_coalgebra(b.coalgebra("comatrix")).pass());
  CHECK(validate_coalgebra(b.coalgebra("dualco")).pass());
  auto r = validate_coalgebra(b.coalgebra("broken"));
  CHECK_FALSE(r.pass());
  CHECK(has_violation(r, "coassociativity", "e[0]"));
}

TEST_CASE("hopf validation") {
  Bundle z2 = load_structure_file(fixture_path("kz2_twisted"));
  CHECK(validate_hopf(z2.hopf).pass());
  Bundle sw = load_structure_file(fixture_path("sweedler"));
  CHECK(validate_hopf(sw.hopf).pass());
  // zeroed antipode breaks the antipode axiom
  HopfAlgebra h = z2.hopf;
  for (auto& v : h.S) v.clear();
  auto r = validate_hopf(h);
  CHECK(has_violation(r, "antipode"));
}

TEST_CASE("antipode is an algebra anti-homomorphism") {
  for (const char* f : {"kz2_twisted", "sweedler", "trivial"}) {
    Bundle b = load_structure_file(fixture_path(f));
    const auto& h = b.hopf;
    for (std::size_t i = 0; i < h.dim(); ++i)
      for (std::size_t j = 0; j < h.dim(); ++j) {
        SVec lhs = h.antipode(h.alg.mu[i][j]);
        SVec rhs = h.mul(h.S[j], h.S[i]);
        CHECK(lhs == rhs);
        CHECK(h.antipode_inv(h.alg.mu[i][j]) == h.mul(h.Sinv[j], h.Sinv[i]));
      }
  }
}

TEST_CASE("iterated coproduct is independent of parenthesization") {
  Bundle sw = load_structure_file(fixture_path("sweedler"));
  const Coalgebra& c = sw.hopf.coalg;
  CHECK(c.iterated_coproduct(sv_unit(2), 0) == Tensor{{{2}, 1}});
  for (std::size_t n = 0; n <= 4; ++n)
    for (std::size_t k = 0; k < 4; ++k)
      CHECK(c.iterated_coproduct(sv_unit(k), n) == c.iterated_coproduct_right(sv_unit(k), n));
  Tensor g3 = c.iterated_coproduct(sv_unit(1), 3);
  CHECK(g3 == Tensor{{{1, 1, 1, 1}, 1}});
  // x: x(x)1(x)1 + g(x)x(x)1 + g(x)g(x)x
  Tensor x2 = c.iterated_coproduct(sv_unit(2), 2);
  CHECK(x2 == Tensor{{{2, 0, 0}, 1}, {{1, 2, 0}, 1}, {{1, 1, 2}, 1}});
}

TEST_CASE("sayd validation flags") {
  Bundle z2 = load_structure_file(fixture_path("kz2_twisted"));
  auto a = validate_sayd(z2.hopf, z2.sayd("g_eps"));
  CHECK(a.pass());
  CHECK(a.flags["ayd"]);
  CHECK(a.flags["stable"]);
  auto n = validate_sayd(z2.hopf, z2.sayd("g_sign"));
  CHECK(n.pass());
  CHECK(n.flags["ayd"]);
  CHECK_FALSE(n.flags["stable"]);
  Bundle sw = load_structure_file(fixture_path("sweedler"));
  CHECK(validate_sayd(sw.hopf, sw.sayd("delta_sign")).flags["ayd"]);
  CHECK(validate_sayd(sw.hopf, sw.sayd("sigma_g")).flags["ayd"]);
  CHECK(validate_sayd(sw.hopf, sw.sayd("sigma_g")).flags["stable"]);
  auto t = validate_sayd(sw.hopf, sw.sayd("trivial"));
  CHECK(t.pass());
  CHECK_FALSE(t.flags["ayd"]);
}

TEST_CASE("module actions") {
  Bundle c = load_structure_file(fixture_path("conjugation"));
  const auto* mc = &c.module_coalgebra("C");
  CHECK(validate_module_coalgebra(c.hopf, *mc).pass());
  CHECK(validate_module_actions(c.hopf, mc, c.module_algebra("A")).pass());
  auto bad = validate_module_actions(c.hopf, mc, c.module_algebra("A_broken"));
  CHECK_FALSE(bad.pass());
  CHECK(has_violation(bad, "c-action multiplicativity c(ab)=c1(a)c2(b)"));
  Bundle z2 = load_structure_file(fixture_path("kz2_twisted"));
  for (const auto& r : z2.validate_all()) CHECK_MESSAGE(r.pass(), r.object);
  Bundle sw = load_structure_file(fixture_path("sweedler"));
  CHECK(validate_module_coalgebra(sw.hopf, sw.module_coalgebra("H")).pass());
}

TEST_CASE("loader errors name the field") {
  std::string base = R"({"schema_version":1,"hopf":{"dim":1,"mu":[[0,0,0,"1"]],"unit":["1"],
    "delta":[[[0,0,"1"]]],"counit":["1"],"antipode":[["1"]],"antipode_inv":[["1"]]},
    "coalgebras":[{"name":"p","dim":1,"delta":[[[0,3,"1"]]],"counit":["1"]}]})";
  try {
    load_structure(base);
    FAIL("expected parse error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ParseError);
    CHECK(std::string(e.what()).find("/coalgebras/0/delta/0/0/1") != std::string::npos);
  }
  std::string lowest = R"({"hopf":{"dim":1,"mu":[[0,0,0,"2/2"]],"unit":["1"],
    "delta":[[[0,0,"1"]]],"counit":["1"],"antipode":[["1"]],"antipode_inv":[["1"]]}})";
  CHECK_THROWS_AS(load_structure(lowest), Error);
  std::string unresolved = R"({"hopf":{"dim":1,"mu":[[0,0,0,"1"]],"unit":["1"],
    "delta":[[[0,0,"1"]]],"counit":["1"],"antipode":[["1"]],"antipode_inv":[["1"]]},
    "actions":[{"kind":"hopf_on_coalgebra","target":"nope","matrices":[[["1"]]]}]})";
  try {
    load_structure(unresolved);
    FAIL("expected unresolved reference");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UnresolvedReference);
  }
  CHECK_THROWS_AS(load_structure("{not json"), Error);
}
