// one pass/fail line per acceptance criterion; exact arithmetic throughout
#include "hopfcyc/cli.hpp"
#include "hopfcyc/cyclic.hpp"
#include "hopfcyc/forms.hpp"
#include "hopfcyc/pairing.hpp"
#include "hopfcyc/structures.hpp"
#include "hopfcyc/weil.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <unistd.h>

using namespace hopfcyc;
namespace fs = std::filesystem;

namespace {

struct Verdict {
  bool ok = true;
  std::vector<std::string> failures;
  std::vector<std::string> facts;

  void require(bool c, const std::string& what) {
    if (!c) {
      ok = false;
      failures.push_back(what);
    }
  }
  void fact(const std::string& s) { facts.push_back(s); }
};

std::string S(std::size_t x) { return std::to_string(x); }

std::string dims(const std::vector<std::size_t>& d) {
  std::string s = "(";
  for (std::size_t i = 0; i < d.size(); ++i) s += (i ? "," : "") + S(d[i]);
  return s + ")";
}

struct Instance {
  const char *file, *coalg, *sayd;
};
// stable coefficient instances over H = k and H = k[Z/2], C = point and k[Z/2]
const std::vector<Instance> kWeilInstances{
    {"trivial", "point", "k"},     {"coalgebras", "kZ2", "k"},   {"kz2_twisted", "C", "eps"},
    {"kz2_twisted", "C", "g_eps"}, {"kz2_twisted", "point", "eps"}, {"kz2_twisted", "point", "g_eps"},
};

std::map<std::string, Bundle>& bundles() {
  static std::map<std::string, Bundle> b;
  return b;
}
const Bundle& bundle(const std::string& f) {
  auto it = bundles().find(f);
  if (it == bundles().end()) it = bundles().emplace(f, load_structure_file(fixture_path(f))).first;
  return it->second;
}

// ---------------------------------------------------------------- 1
Verdict structure_axioms() {
  Verdict v;
  struct Expect {
    bool pass;
    std::map<std::string, bool> flags;
  };
  // hand predictions from the structure constants
  std::map<std::string, std::map<std::string, Expect>> expect{
      {"trivial",
       {{"hopf k", {true, {}}}, {"coalgebra point", {true, {}}}, {"module coalgebra point", {true, {}}},
        {"algebra A", {true, {}}}, {"module algebra A", {true, {{"c_unital", true}}}},
        {"sayd k", {true, {{"ayd", true}, {"stable", true}}}}}},
      {"kz2_twisted",
       {{"hopf kZ2", {true, {}}}, {"coalgebra C", {true, {}}}, {"module coalgebra C", {true, {}}},
        {"coalgebra point", {true, {}}}, {"module coalgebra point", {true, {}}}, {"algebra A", {true, {}}},
        {"module algebra A", {true, {{"c_unital", true}}}},
        {"sayd eps", {true, {{"ayd", true}, {"stable", true}}}},
        {"sayd g_eps", {true, {{"ayd", true}, {"stable", true}}}},
        {"sayd g_sign", {true, {{"ayd", true}, {"stable", false}}}}}},
      {"sweedler",
       {{"hopf sweedler", {true, {}}}, {"coalgebra H", {true, {}}}, {"module coalgebra H", {true, {}}},
        {"coalgebra point", {true, {}}}, {"module coalgebra point", {true, {}}},
        {"sayd delta_sign", {true, {{"ayd", true}, {"stable", true}}}},
        {"sayd sigma_g", {true, {{"ayd", true}, {"stable", true}}}},
        {"sayd trivial", {true, {{"ayd", false}, {"stable", true}}}}}},
      {"coalgebras",
       {{"hopf k", {true, {}}}, {"coalgebra broken", {false, {}}}, {"module coalgebra broken", {true, {}}},
        {"coalgebra comatrix", {true, {}}}, {"module coalgebra comatrix", {true, {}}},
        {"coalgebra dualco", {true, {}}}, {"module coalgebra dualco", {true, {}}}, {"coalgebra kZ2", {true, {}}},
        {"module coalgebra kZ2", {true, {}}}, {"coalgebra point", {true, {}}},
        {"module coalgebra point", {true, {}}}, {"sayd k", {true, {{"ayd", true}, {"stable", true}}}}}},
      {"conjugation",
       {{"hopf kZ2", {true, {}}}, {"coalgebra C", {true, {}}}, {"module coalgebra C", {true, {}}},
        {"algebra A", {true, {}}}, {"module algebra A", {true, {{"c_unital", true}}}},
        {"algebra A_broken", {true, {}}}, {"module algebra A_broken", {false, {{"c_unital", false}}}},
        {"sayd eps", {true, {{"ayd", true}, {"stable", true}}}}}},
  };
  std::size_t objects = 0, failing = 0;
  for (const auto& [file, objs] : expect) {
    auto reps = bundle(file).validate_all();
    v.require(reps.size() == objs.size(), file + ": " + S(reps.size()) + " objects, predicted " + S(objs.size()));
    for (const auto& r : reps) {
      ++objects;
      auto it = objs.find(r.object);
      if (it == objs.end()) {
        v.require(false, file + ": unexpected object " + r.object);
        continue;
      }
      v.require(r.pass() == it->second.pass, file + ": " + r.object + (r.pass() ? " passes" : " fails"));
      if (!r.pass()) {
        ++failing;
        for (const auto& c : r.checks)
          if (!c.ok) v.require(!c.witness.empty(), file + ": " + r.object + ": " + c.axiom + " without witness");
      }
      for (const auto& [k, x] : it->second.flags)
        v.require(r.flags.count(k) && r.flags.at(k) == x, file + ": " + r.object + " flag " + k);
    }
  }
  v.fact(S(objects) + " objects, " + S(failing) + " failing as predicted");
  return v;
}

// ---------------------------------------------------------------- 2
Verdict cocyclic_identities() {
  Verdict v;
  std::size_t built = 0, noncyclic = 0;
  for (const char* file : {"trivial", "trivial_dual", "kz2_twisted", "sweedler", "coalgebras", "conjugation"}) {
    const Bundle& b = bundle(file);
    std::map<std::string, bool> ok_obj;
    for (const auto& r : b.validate_all()) ok_obj[r.object] = r.pass();
    for (const auto& [sn, m] : b.saydm) {
      auto sr = validate_sayd(b.hopf, m);
      if (!sr.pass() || !sr.flags.at("ayd")) continue;
      bool stable = sr.flags.at("stable");
      auto one = [&](const CocyclicModule& mod, const std::string& tag, bool coalgebra_side) {
        ++built;
        auto rep = mod.verify();
        v.require(rep.all_ok(), tag + ": " + rep.first_failure());
        if (stable) v.require(rep.cyclic, tag + ": tau^{n+1} != id on stable coefficients");
        if (!rep.cyclic) {
          ++noncyclic;
          v.require(rep.first_noncyclic >= 0, tag + ": non-cyclic without witness degree");
        }
        if (!stable && coalgebra_side && mod.dims.size() > 1 && mod.dims[1] > 1)
          v.require(!rep.cyclic, tag + ": non-stable coefficients gave tau^{n+1} = id");
      };
      for (const auto& [cn, mc] : b.hc_actions) {
        if (!ok_obj["coalgebra " + cn] || !ok_obj["module coalgebra " + cn]) continue;
        one(build_coalgebra_cocyclic(b.hopf, mc, m, 4), std::string(file) + " C=" + cn + " M=" + sn, true);
      }
      for (const auto& [an, ma] : b.ha_actions) {
        if (!ok_obj["algebra " + an] || !ok_obj["module algebra " + an]) continue;
        one(build_algebra_cocyclic(b.hopf, ma, m, 4), std::string(file) + " A=" + an + " M=" + sn, false);
      }
    }
  }
  v.require(noncyclic > 0, "the non-stable fixture never broke tau^{n+1} = id");
  v.fact(S(built) + " complexes to degree 4, " + S(noncyclic) + " non-cyclic (non-stable)");
  return v;
}

// ---------------------------------------------------------------- 3, 4, 5
constexpr std::size_t kD = 7;

struct WeilCase {
  std::string tag;
  std::unique_ptr<WeilAlgebra> w;
  std::unique_ptr<CyclicCohomology> cc;
};
std::vector<WeilCase>& weil_cases() {
  static std::vector<WeilCase> cs;
  if (cs.empty())
    for (const auto& in : kWeilInstances) {
      const Bundle& b = bundle(in.file);
      WeilCase c;
      c.tag = std::string(in.file) + " C=" + in.coalg + " M=" + in.sayd;
      c.w = std::make_unique<WeilAlgebra>(b.hopf, b.module_coalgebra(in.coalg), b.sayd(in.sayd), kD);
      auto mod = std::make_shared<const CocyclicModule>(
          build_coalgebra_cocyclic(b.hopf, b.module_coalgebra(in.coalg), b.sayd(in.sayd), kD));
      c.cc = std::make_unique<CyclicCohomology>(mod, kD - 1);
      cs.push_back(std::move(c));
    }
  return cs;
}

Verdict weil_acyclicity() {
  Verdict v;
  for (auto& c : weil_cases()) {
    auto d = full_complex(*c.w).dims(kD - 1);
    v.require(d == std::vector<std::size_t>(kD - 1, 0), c.tag + ": H(W nat) = " + dims(d));
  }
  v.fact(S(weil_cases().size()) + " instances, D = " + S(kD) + ", p = 1.." + S(kD - 1));
  return v;
}

Verdict tower_equality() {
  Verdict v;
  std::size_t cells = 0;
  for (auto& c : weil_cases()) {
    auto hc = c.cc->cyclic_dims();
    auto hcq = [&](long q) -> std::size_t { return q < 0 ? 0 : hc.at(static_cast<std::size_t>(q)); };
    for (std::size_t n = 0; n <= 2; ++n) {
      auto t = tower_complex(*c.w, n).dims(kD - 1);
      auto i = ideal_complex(*c.w, n + 1).dims(kD - 1);
      for (std::size_t p = 1; p <= kD - 1; ++p) {
        long q = static_cast<long>(p) - 1 - 2 * static_cast<long>(n);
        cells += 2;
        v.require(t[p - 1] == hcq(q), c.tag + ": n=" + S(n) + " p=" + S(p) + " H=" + S(t[p - 1]) +
                                          " HC^" + std::to_string(q) + "=" + S(hcq(q)));
        v.require(i[p - 1] == hcq(q - 1), c.tag + ": ideal n=" + S(n) + " p=" + S(p) + " H=" + S(i[p - 1]) +
                                              " HC^" + std::to_string(q - 1) + "=" + S(hcq(q - 1)));
      }
    }
  }
  v.fact(S(cells) + " cells equal, n = 0..2");
  return v;
}

Verdict operators_and_sequences() {
  Verdict v;
  std::size_t slots = 0;
  for (auto& c : weil_cases()) {
    auto op = operator_check(*c.w, kD - 1);
    v.require(op.all_ok(), c.tag + ": operators: " + op.witness);
    for (const char* which : {"comw1", "comi1"})
      for (std::size_t n = 0; n <= 2; ++n) {
        auto s = sequence_check(*c.w, which, n, kD - 1);
        slots += s.slots.size();
        for (const auto& sl : s.slots)
          v.require(sl.exact, c.tag + ": " + which + " n=" + S(n) + " not exact at p=" + S(sl.p) + " k=" + S(sl.k) +
                                  " " + sl.slot);
        v.require(s.chain_maps, c.tag + ": " + which + " chain maps: " + s.chain_witness);
      }
  }
  v.fact(S(slots) + " exactness slots");
  return v;
}

// ---------------------------------------------------------------- 6
Verdict free_algebra_homology() {
  Verdict v;
  const Bundle& g = ground_bundle();
  const Bundle& tw = bundle("kz2_twisted");
  struct Case {
    const HopfAlgebra* h;
    HModule vm;
    const SAYDModule* m;
    std::size_t cap;
    std::string tag;
  };
  std::vector<Case> cases{
      {&g.hopf, character_module(g.hopf, {1}, 1, "V"), &g.sayd("k"), 6, "k, dim V = 1"},
      {&g.hopf, character_module(g.hopf, {1}, 2, "V"), &g.sayd("k"), 4, "k, dim V = 2"},
      {&tw.hopf, character_module(tw.hopf, {1, -1}, 1, "V"), &tw.sayd("eps"), 5, "kZ2 sign, M = eps"},
      {&tw.hopf, character_module(tw.hopf, {1, -1}, 1, "V"), &tw.sayd("g_eps"), 5, "kZ2 sign, M = g_eps"},
      {&tw.hopf, character_module(tw.hopf, {1, -1}, 2, "V"), &tw.sayd("g_eps"), 4, "kZ2 sign 2, M = g_eps"},
  };
  std::string nat;
  for (const auto& c : cases) {
    FreeAlgebra f = free_algebra(*c.h, c.vm, c.cap);
    const std::size_t K = 4;
    OmegaBundle w(*c.h, f.model, *c.m, K, c.cap);
    auto xr = x_complex_free(w);
    v.require(xr.x.squares_zero(), c.tag + ": X-complex d^2 != 0");
    v.require(xr.h0 == xr.nat_dim, c.tag + ": X H0 = " + S(xr.h0) + ", nat dim = " + S(xr.nat_dim));
    v.require(xr.h1 == 0, c.tag + ": X H1 = " + S(xr.h1));
    v.require(xr.nat_dim == free_nat_dim(w), c.tag + ": nat dim from commutators differs");
    auto hc = hodge_cyclic_dims(w, 1);
    v.require(hc[0] == xr.nat_dim, c.tag + ": reduced HC_0 = " + S(hc[0]));
    for (std::size_t n = 1; n < hc.size(); ++n) v.require(hc[n] == 0, c.tag + ": reduced HC_" + S(n) + " = " + S(hc[n]));
    auto hh = hochschild_dims(w, 1);
    SmallComplex sc(w, f);
    std::string wit;
    v.require(sc.homotopy_holds(&wit), c.tag + ": small complex homotopy: " + wit);
    auto sh = sc.hochschild_dims(1);
    v.require(sh[0] == hh[0] && sh[1] == hh[1], c.tag + ": small complex HH differs from the full complex");
    for (std::size_t n = 2; n < hh.size(); ++n) v.require(hh[n] == 0, c.tag + ": reduced HH_" + S(n) + " != 0");
    v.require(sc.cyclic_dims(K - 1, 1) == hc, c.tag + ": small complex reduced HC differs");
    v.require(sc.cyclic_dims(K - 1) == hodge_cyclic_dims(w), c.tag + ": small complex HC differs");
    nat += (nat.empty() ? "" : ",") + S(xr.nat_dim);
  }
  v.fact("reduced HC_0 dims (" + nat + "), higher zero");
  return v;
}

// ---------------------------------------------------------------- 7
Verdict cs_identities() {
  Verdict v;
  auto f = cs_identity_check(4);
  std::size_t expansion = 0;
  for (const auto& x : f) {
    v.require(x.holds, "n=" + S(x.n) + ": " + x.identity + " in " + x.quotient);
    if (x.identity.rfind("d(sum", 0) == 0) ++expansion;
  }
  v.require(expansion == 4, "d(sum ...) expansion checked for " + S(expansion) + " of n = 1..4");
  v.fact(S(f.size()) + " memberships, n <= 4");
  return v;
}

// ---------------------------------------------------------------- 8
Verdict pairings() {
  Verdict v;
  std::size_t cups = 0;
  for (auto [file, mod] : std::vector<std::pair<std::string, std::string>>{
           {"trivial", "k"}, {"trivial_dual", "k"}, {"kz2_twisted", "eps"}, {"kz2_twisted", "g_eps"}}) {
    const Bundle& b = bundle(file);
    const auto& m = b.sayd(mod);
    std::string tag = file + " M=" + mod;
    PairingInstance in(b.hopf, b.module_coalgebra(b.selected("coalgebra")), b.module_algebra("A"), m, 1, 6);
    const auto& w = in.weil();
    auto rc = in.rho_sharp().verify(5);
    v.require(rc.ok(), tag + ": rho# " + rc.witness);
    for (std::size_t n = 0; n <= 1; ++n) {
      auto taus = find_traces(b.hopf, in.extension(), m, n, false);
      BlockComplex tc = tower_complex(w, n);
      for (std::size_t p = 1; p <= 5; ++p) {
        Cohomology h = tc.cohomology(p);
        for (std::size_t ti = 0; ti < taus.size(); ++ti)
          for (std::size_t j = 0; j < h.dim(); ++j) {
            std::string at = tag + " n=" + S(n) + " p=" + S(p) + " trace " + S(ti) + " class " + S(j);
            CupResult r = in.cup_even(h.reps()[j], n, p, taus[ti]);
            ++cups;
            v.require(r.closed && r.well_defined, at + ": cup not closed or not well defined");
            if (p >= 2 && tc.dim(p - 1) > 0) {
              SVec x2 = sv_add(h.reps()[j], tc.diff(p - 1).apply(sv_unit(0)));
              v.require(in.cup_even(x2, n, p, taus[ti]).hc_class == r.hc_class, at + ": class moved by a coboundary");
            }
            // trace perturbation by a multiple of another trace is linear in the class
            if (taus.size() > 1) {
              MTrace t2 = taus[ti];
              t2.functional = sv_axpy(t2.functional, Scalar(2, 3), taus[(ti + 1) % taus.size()].functional);
              SVec expect = sv_axpy(r.hc_class, Scalar(2, 3),
                                    in.cup_even(h.reps()[j], n, p, taus[(ti + 1) % taus.size()]).hc_class);
              v.require(in.cup_even(h.reps()[j], n, p, t2).hc_class == expect, at + ": not linear in the trace");
            }
            if (n == 0) {
              SVec raw = w.quotient(Flavor::Nat, p, 0).lift(tc.component(h.reps()[j], p, 0));
              SVec gm = in.bar().norm.at(p).transpose().apply(in.characteristic_map(raw, p - 1, taus[ti]));
              v.require(gm == r.cochain, at + ": differs from the characteristic map");
            }
          }
      }
    }
    auto odd = find_traces(b.hopf, in.extension(), m, 0, true);
    BlockComplex ic = ideal_complex(w, 1);
    for (std::size_t p = 2; p <= 5; ++p) {
      Cohomology h = ic.cohomology(p);
      for (const auto& t : odd)
        for (const auto& x : h.reps()) {
          CupResult r = in.cup_odd(x, 0, p, t);
          ++cups;
          v.require(r.closed && r.well_defined, tag + ": odd cup p=" + S(p) + " not closed or not well defined");
        }
    }
  }

  // splitting perturbation
  {
    const Bundle& b = bundle("trivial");
    PairingInstance in(b.hopf, b.module_coalgebra("point"), b.module_algebra("A"), b.sayd("k"), 2, 7);
    auto taus = find_traces(b.hopf, in.extension(), b.sayd("k"), 1, false);
    BlockComplex tc = tower_complex(in.weil(), 1);
    std::vector<SVec> before, after;
    for (std::size_t p : {3, 5})
      for (const auto& tau : taus) {
        Cohomology h = tc.cohomology(p);
        for (const auto& x : h.reps()) before.push_back(in.cup_even(x, 1, p, tau).hc_class);
      }
    auto& e = in.extension();
    std::vector<SVec> cols;
    for (std::size_t a = 0; a < e.a.dim; ++a) {
      SVec c = e.rho.column(a);
      if (a != e.a.unit) c = sv_axpy(c, Scalar(3, 2), sv_unit(e.pos.at({a, a, a})));
      cols.push_back(c);
    }
    set_splitting(b.hopf, e, SparseMatrix::from_columns(e.dim(), cols));
    in.refresh();
    for (std::size_t p : {3, 5})
      for (const auto& tau : taus) {
        Cohomology h = tc.cohomology(p);
        for (const auto& x : h.reps()) after.push_back(in.cup_even(x, 1, p, tau).hc_class);
      }
    v.require(!before.empty() && before == after, "trivial: classes moved with the splitting");

    std::string meas;
    for (std::size_t n = 0; n <= 1; ++n)
      for (const auto& tau : find_traces(b.hopf, in.extension(), b.sayd("k"), n, false))
        for (std::size_t p = 2 * n + 1; p + 3 <= 7; p += 2) {
          auto s = s_relation(in, n, p, tau);
          v.require(s.truncation, "S relation n=" + S(n) + " p=" + S(p) + ": truncation");
          if (s.defined) {
            v.require(s.proportional, "S relation n=" + S(n) + " p=" + S(p) + ": not proportional");
            meas += (meas.empty() ? "" : ",") + scalar_str(s.measured);
          }
        }
    v.require(!meas.empty(), "S relation never defined");
    v.fact("S rescaling measured (" + meas + ")");
  }

  // comparison factors on the point coalgebra
  auto cmp = compare_pairings({{0, 0}, {0, 1}, {1, 0}});
  std::string fs_;
  for (const auto& f : cmp.factors) {
    std::string mn = "(" + S(f.m) + "," + S(f.n) + ")";
    if (!f.defined) {
      v.require(false, "factor " + mn + " not measurable on the point coalgebra: " + f.note);
      fs_ += " " + mn + "=undefined";
      continue;
    }
    v.require(f.matches, "factor " + mn + " measured " + scalar_str(f.measured) + ", expected " + scalar_str(f.expected));
    fs_ += " " + mn + "=" + scalar_str(f.measured);
  }
  v.fact("factors on the point:" + fs_);
  // supplementary: (1,0) where a size-1 cotrace with a nonzero class exists
  {
    const Bundle& b = bundle("sweedler");
    WeilAlgebra w(b.hopf, b.module_coalgebra("H"), b.sayd("sigma_g"), 5);
    std::string got;
    for (const auto& xi : find_cotraces(w, 1)) {
      auto f = cotrace_factor(w, xi, 1, 0);
      if (!f.defined) continue;
      got += (got.empty() ? "" : ",") + scalar_str(f.measured);
      v.require(f.matches, "(1,0) on Sweedler: measured " + scalar_str(f.measured));
    }
    v.fact("(1,0) on Sweedler H, M = sigma_g: " + (got.empty() ? std::string("undefined") : got));
  }
  v.fact(S(cups) + " cups closed");
  return v;
}

// ---------------------------------------------------------------- 9
struct CliRun {
  int code = -1;
  std::string out, err;
};

std::string slurp(const std::string& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream o;
  o << in.rdbuf();
  return o.str();
}

CliRun cli(const std::string& exe, const std::string& args, const std::string& scratch) {
  std::string o = scratch + "/out", e = scratch + "/err";
  std::string cmd = exe + " " + args + " >" + o + " 2>" + e;
  int st = std::system(cmd.c_str());
  CliRun r;
  r.code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  r.out = slurp(o);
  r.err = slurp(e);
  return r;
}

Verdict determinism(const std::string& exe) {
  Verdict v;
  if (exe.empty()) {
    v.require(false, "no --cli binary given");
    return v;
  }
  fs::path scratch = fs::temp_directory_path() / ("hopfcyc_acceptance_" + std::to_string(::getpid()));
  fs::remove_all(scratch);
  fs::create_directories(scratch);
  std::string cache = (scratch / "cache").string();
  std::vector<std::string> jobs{
      "validate " + fixture_path("kz2_twisted"),
      "cohomology " + fixture_path("trivial") + " --max-degree 4",
      "cohomology " + fixture_path("kz2_twisted") + " --max-degree 5 --mode periodic",
      "weil " + fixture_path("kz2_twisted") + " --max-degree 6 --w-cap 1",
      "pair " + fixture_path("trivial") + " --max-degree 5 --w-cap 1",
      "pair " + fixture_path("kz2_twisted") + " --max-degree 6 --cotrace-size 1",
  };
  std::size_t compared = 0;
  for (const auto& j : jobs)
    for (const char* fmt : {"json", "csv"}) {
      std::string base = j + " --format " + fmt;
      CliRun a = cli(exe, base + " --no-cache", scratch.string());
      CliRun b = cli(exe, base + " --no-cache", scratch.string());
      CliRun c1 = cli(exe, base + " --cache-dir " + cache, scratch.string());
      CliRun c2 = cli(exe, base + " --cache-dir " + cache, scratch.string());
      compared += 3;
      v.require(a.code == 0 && !a.out.empty(), j + ": exit " + std::to_string(a.code) + " " + a.err);
      v.require(a.out == b.out, j + " " + fmt + ": repeated runs differ");
      v.require(a.out == c1.out && a.out == c2.out, j + " " + fmt + ": cached report differs from recomputation");
      v.require(c2.err.find("cache hit") != std::string::npos, j + " " + fmt + ": second cached run missed");
      v.require(a.code == c2.code, j + ": exit code differs on a cache hit");
    }
  std::error_code ec;
  fs::remove_all(scratch, ec);
  v.fact(S(compared) + " byte comparisons over " + S(jobs.size()) + " jobs (json, csv)");
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  std::string exe;
  std::vector<int> only;
  bool verbose = false;
  app.add_option("--cli", exe, "path to the hopfcyc binary");
  app.add_option("--only", only, "criteria to run");
  app.add_flag("--verbose,-v", verbose, "print every failure");
  CLI11_PARSE(app, argc, argv);

  struct Crit {
    int id;
    std::string name;
    double budget;  // seconds
    std::function<Verdict()> run;
  };
  std::vector<Crit> crits{
      {1, "structure axioms", 1, structure_axioms},
      {2, "cocyclic identities", 10, cocyclic_identities},
      {3, "Weil acyclicity", 600, weil_acyclicity},
      {4, "tower dimension equality", 600, tower_equality},
      {5, "homotopy, operators, exact sequences", 60, operators_and_sequences},
      {6, "free algebra homology", 60, free_algebra_homology},
      {7, "cs identities", 10, cs_identities},
      {8, "pairings", 600, pairings},
      {9, "determinism and cache", 600, [&] { return determinism(exe); }},
  };
  int failed = 0;
  for (const auto& c : crits) {
    if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
    auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v.require(false, std::string("exception: ") + e.what());
    }
    double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::ostringstream ts;
    ts << std::fixed << std::setprecision(2) << sec << "s";
    v.require(sec <= c.budget, "over budget (" + ts.str() + " > " + std::to_string(static_cast<int>(c.budget)) + "s)");
    if (!v.ok) ++failed;
    std::cout << "criterion " << c.id << " " << (v.ok ? "PASS" : "FAIL") << "  " << c.name << "  [" << ts.str() << "]";
    for (const auto& f : v.facts) std::cout << "; " << f;
    if (!v.ok) {
      std::cout << "; first failure: " << v.failures.front();
      if (v.failures.size() > 1) std::cout << " (+" << v.failures.size() - 1 << " more)";
    }
    std::cout << "\n";
    if (verbose)
      for (const auto& f : v.failures) std::cout << "    " << f << "\n";
  }
  return failed ? 1 : 0;
}
