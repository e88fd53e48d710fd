#include "hopfcyc/cli.hpp"
#include "hopfcyc/pairing.hpp"

#include <chrono>
#include <ostream>

namespace hopfcyc {

int exit_code_for(ErrorCode c) {
  switch (c) {
    case ErrorCode::ParseError:
    case ErrorCode::UnresolvedReference:
    case ErrorCode::InputShape:
    case ErrorCode::DimensionMismatch:
    case ErrorCode::DegreeOutOfRange:
    case ErrorCode::NotSupported:
      return 2;
    case ErrorCode::Inconsistent:
    case ErrorCode::Internal:
      return 3;
    default:
      return 1;
  }
}

namespace {

std::string S(std::size_t x) { return std::to_string(x); }

struct Loaded {
  Bundle b;
  std::string hash;
};

Loaded load(const RunConfig& cfg, Report& r) {
  std::string text = read_file(cfg.input);
  Loaded l{load_structure(text), sha256_hex(text)};
  r.input_hash = l.hash;
  return l;
}

Report start(const RunConfig& cfg) {
  Report r;
  r.command = cfg.command;
  r.version = cfg.version;
  r.config = {{"max_degree", S(cfg.max_degree)}, {"w_cap", S(cfg.w_cap)},         {"m", S(cfg.m)},
              {"mode", cfg.mode},              {"complex", cfg.complex},         {"signed_rel", cfg.signed_rel ? "true" : "false"}};
  return r;
}

void finish(Report& r) {
  if (r.exit_code == 0 && !r.all_pass()) r.exit_code = 1;
}

std::string dims_str(const std::vector<std::size_t>& d) {
  std::string s = "(";
  for (std::size_t i = 0; i < d.size(); ++i) s += (i ? "," : "") + S(d[i]);
  return s + ")";
}

}  // namespace

Report cmd_validate(const RunConfig& cfg) {
  Report r = start(cfg);
  Loaded l = load(cfg, r);
  Table t{"objects", {"object", "status", "flags"}, {}};
  for (const auto& v : l.b.validate_all()) {
    std::string flags;
    for (const auto& [k, x] : v.flags) flags += (flags.empty() ? "" : " ") + k + ":" + (x ? "true" : "false");
    t.rows.push_back({v.object, v.pass() ? "pass" : "fail", flags});
    for (const auto& c : v.checks) r.check(v.object + ": " + c.axiom, c.ok, c.witness);
    for (const auto& [k, x] : v.flags)
      if (!x) r.notes.push_back(v.object + ": " + k + ": false");
  }
  r.tables.push_back(t);
  finish(r);
  return r;
}

Report cmd_cohomology(const RunConfig& cfg) {
  Report r = start(cfg);
  Loaded l = load(cfg, r);
  const Bundle& b = l.b;
  HomologyMode mode = parse_mode(cfg.mode);
  std::size_t cap = cfg.max_degree;
  const SAYDModule& m = b.sayd(b.selected("sayd"));
  std::shared_ptr<const CocyclicModule> mod;
  if (cfg.complex == "coalgebra") {
    mod = std::make_shared<const CocyclicModule>(
        build_coalgebra_cocyclic(b.hopf, b.module_coalgebra(b.selected("coalgebra")), m, cap + 1));
  } else if (cfg.complex == "algebra") {
    mod = std::make_shared<const CocyclicModule>(
        build_algebra_cocyclic(b.hopf, b.module_algebra(b.selected("algebra")), m, cap + 1));
  } else {
    throw Error(ErrorCode::ParseError, "unknown complex '" + cfg.complex + "' (coalgebra, algebra)");
  }
  IdentityReport ir = mod->verify();
  r.check("cocyclic identities", ir.all_ok(), ir.first_failure());
  r.check("tau^{n+1} = id", ir.cyclic, ir.cyclic ? "" : "degree " + std::to_string(ir.first_noncyclic));
  CyclicCohomology cc(mod, cap);
  Table t{std::string(mode_name(mode)), {"degree", "dim"}, {}};
  if (mode == HomologyMode::Hochschild) {
    auto d = cc.hochschild_dims();
    for (std::size_t q = 0; q < d.size(); ++q) t.rows.push_back({S(q), S(d[q])});
    r.scalars["dims"] = dims_str(d);
  } else if (!ir.cyclic) {
    r.notes.push_back("cyclic operator is not of finite order on these coefficients; only hochschild mode answers");
  } else if (mode == HomologyMode::Cyclic) {
    auto d = cc.cyclic_dims();
    for (std::size_t q = 0; q < d.size(); ++q) t.rows.push_back({S(q), S(d[q])});
    r.scalars["dims"] = dims_str(d);
  } else {
    t.columns = {"parity", "stabilized", "from", "dim", "S ranks"};
    for (std::size_t par = 0; par < 2; ++par) {
      auto p = cc.periodic(par);
      t.rows.push_back({S(par), p.stabilized ? "yes" : "no", p.stabilized ? S(p.from) : "-", p.stabilized ? S(p.dim) : "-",
                        dims_str(p.s_ranks)});
      r.check("periodic parity " + S(par) + " stabilized", p.stabilized,
              p.stabilized ? "" : "UNSTABILIZED: raise --max-degree");
    }
  }
  r.tables.push_back(t);
  finish(r);
  return r;
}

Report cmd_weil(const RunConfig& cfg) {
  Report r = start(cfg);
  Loaded l = load(cfg, r);
  const Bundle& b = l.b;
  std::size_t D = cfg.max_degree;
  if (D < 3) throw Error(ErrorCode::DegreeOutOfRange, "weil needs --max-degree >= 3");
  const ModuleCoalgebra& mc = b.module_coalgebra(b.selected("coalgebra"));
  const SAYDModule& m = b.sayd(b.selected("sayd"));
  WeilOptions opt;
  opt.signed_rel = cfg.signed_rel;
  WeilAlgebra w(b.hopf, mc, m, D, opt);
  auto mod = std::make_shared<const CocyclicModule>(build_coalgebra_cocyclic(b.hopf, mc, m, D));
  CyclicCohomology cc(mod, D - 1);
  auto hc = [&](long q) -> std::size_t { return q < 0 ? 0 : cc.hc(static_cast<std::size_t>(q)).dim(); };

  Table tower{"tower", {"n", "p", "H^p(W_n)", "q", "HC^q", "verdict"}, {}};
  Table ideal{"ideal", {"n", "p", "H^p(I_n+1)", "q", "HC^q", "verdict"}, {}};
  bool teq = true, ieq = true;
  for (std::size_t n = 0; n <= cfg.w_cap; ++n) {
    BlockComplex tc = tower_complex(w, n), ic = ideal_complex(w, n + 1);
    for (std::size_t p = 1; p + 1 <= D; ++p) {
      long q = static_cast<long>(p) - 1 - 2 * static_cast<long>(n);
      std::size_t a = tc.cohomology(p).dim(), c = hc(q);
      teq = teq && a == c;
      tower.rows.push_back({S(n), S(p), S(a), std::to_string(q), S(c), a == c ? "equal" : "unequal"});
      long q2 = q - 1;
      std::size_t a2 = ic.cohomology(p).dim(), c2 = hc(q2);
      ieq = ieq && a2 == c2;
      ideal.rows.push_back({S(n), S(p), S(a2), std::to_string(q2), S(c2), a2 == c2 ? "equal" : "unequal"});
    }
  }
  r.tables.push_back(tower);
  r.tables.push_back(ideal);
  r.check("H^p(W_n nat) = HC^{p-1-2n}", teq);
  r.check("H^p(I_{n+1} nat) = HC^{p-2-2n}", ieq);

  Table acyc{"reduced acyclicity", {"p", "dim"}, {}};
  bool zero = true;
  BlockComplex full = full_complex(w);
  for (std::size_t p = 1; p + 1 <= D; ++p) {
    std::size_t d = full.cohomology(p).dim();
    zero = zero && d == 0;
    acyc.rows.push_back({S(p), S(d)});
  }
  r.tables.push_back(acyc);
  r.check("H^p(W nat) = 0", zero);

  OperatorReport op = operator_check(w, D - 1);
  r.check("operators (homotopy, N(t-1), squares)", op.all_ok(), op.witness);

  Table seq{"sequences", {"sequence", "n", "p", "k", "slot", "exact"}, {}};
  for (const char* which : {"comw1", "comi1"})
    for (std::size_t n = 0; n <= cfg.w_cap; ++n) {
      SequenceReport s = sequence_check(w, which, n, D - 1);
      for (const auto& sl : s.slots)
        seq.rows.push_back({which, S(n), S(sl.p), S(sl.k), sl.slot, sl.exact ? "yes" : "no"});
      r.check(std::string(which) + " n=" + S(n) + " exact", s.all_exact());
      r.check(std::string(which) + " n=" + S(n) + " chain maps", s.chain_maps, s.chain_witness);
    }
  r.tables.push_back(seq);

  Table cs{"cs identities", {"n", "identity", "quotient", "holds"}, {}};
  bool csok = true;
  for (const auto& f : cs_identity_check(2)) {
    cs.rows.push_back({S(f.n), f.identity, f.quotient, f.holds ? "yes" : "no"});
    csok = csok && f.holds;
  }
  r.tables.push_back(cs);
  r.check("cs identities n <= 2", csok);
  finish(r);
  return r;
}

Report cmd_pair(const RunConfig& cfg) {
  Report r = start(cfg);
  Loaded l = load(cfg, r);
  const Bundle& b = l.b;
  std::size_t D = cfg.max_degree, nmax = cfg.w_cap;
  if (D < 3) throw Error(ErrorCode::DegreeOutOfRange, "pair needs --max-degree >= 3");
  const ModuleCoalgebra& mc = b.module_coalgebra(b.selected("coalgebra"));
  const ModuleAlgebra& ma = b.module_algebra(b.selected("algebra"));
  const SAYDModule& m = b.sayd(b.selected("sayd"));
  if (!ma.c || ma.c_source != mc.coalg)
    throw Error(ErrorCode::InputShape, "/actions: algebra " + ma.alg->name + " carries no action of coalgebra " + mc.coalg->name);
  WeilOptions opt;
  opt.signed_rel = cfg.signed_rel;
  PairingInstance in(b.hopf, mc, ma, m, nmax, D, opt);
  const WeilAlgebra& w = in.weil();
  const auto& e = in.extension();

  auto ck = in.rho_sharp().verify(D - 1);
  r.check("rho# filtered DG map", ck.ok(), ck.witness);

  Table traces{"traces", {"order", "even", "odd"}, {}};
  for (std::size_t n = 0; n <= nmax; ++n)
    traces.rows.push_back({S(n), S(find_traces(b.hopf, e, m, n, false).size()), S(find_traces(b.hopf, e, m, n, true).size())});
  r.tables.push_back(traces);

  Table cups{"even cups", {"n", "p", "trace", "class", "closed", "well defined", "HC class"}, {}};
  for (std::size_t n = 0; n <= nmax; ++n) {
    auto taus = find_traces(b.hopf, e, m, n, false);
    BlockComplex tc = tower_complex(w, n);
    for (std::size_t p = 1; p + 1 <= D; ++p) {
      Cohomology h = tc.cohomology(p);
      for (std::size_t ti = 0; ti < taus.size(); ++ti)
        for (std::size_t j = 0; j < h.dim(); ++j) {
          CupResult c = in.cup_even(h.reps()[j], n, p, taus[ti]);
          std::string tag = "cup n=" + S(n) + " p=" + S(p) + " trace=" + S(ti) + " class=" + S(j);
          std::string cls;
          for (const auto& [i, x] : c.hc_class) cls += (cls.empty() ? "" : " ") + S(i) + ":" + scalar_str(x);
          cups.rows.push_back({S(n), S(p), S(ti), S(j), c.closed ? "yes" : "no", c.well_defined ? "yes" : "no",
                               cls.empty() ? "0" : cls});
          r.vectors.push_back({tag, in.bar().dims.at(p), c.cochain});
          r.check(tag + " closed", c.closed);
          r.check(tag + " well defined", c.well_defined);
          if (n == 0) {
            SVec raw = w.quotient(Flavor::Nat, p, 0).lift(tc.component(h.reps()[j], p, 0));
            SVec gm = in.bar().norm.at(p).transpose().apply(in.characteristic_map(raw, p - 1, taus[ti]));
            r.check(tag + " equals the characteristic map", gm == c.cochain);
          }
        }
    }
  }
  r.tables.push_back(cups);

  Table odd{"odd cups", {"n", "p", "trace", "class", "closed", "well defined"}, {}};
  for (std::size_t n = 0; n <= nmax; ++n) {
    auto taus = find_traces(b.hopf, e, m, n, true);
    BlockComplex ic = ideal_complex(w, n + 1);
    for (std::size_t p = 2; p + 1 <= D; ++p) {
      Cohomology h = ic.cohomology(p);
      for (std::size_t ti = 0; ti < taus.size(); ++ti)
        for (std::size_t j = 0; j < h.dim(); ++j) {
          CupResult c = in.cup_odd(h.reps()[j], n, p, taus[ti]);
          std::string tag = "odd cup n=" + S(n) + " p=" + S(p) + " trace=" + S(ti) + " class=" + S(j);
          odd.rows.push_back({S(n), S(p), S(ti), S(j), c.closed ? "yes" : "no", c.well_defined ? "yes" : "no"});
          r.check(tag + " closed", c.closed);
          r.check(tag + " well defined", c.well_defined);
        }
    }
  }
  r.tables.push_back(odd);

  Table srel{"S relation", {"n", "p", "trace", "defined", "truncation", "proportional", "measured"}, {}};
  for (std::size_t n = 0; n <= nmax; ++n) {
    auto taus = find_traces(b.hopf, e, m, n, false);
    for (std::size_t p = 2 * n + 1; p + 3 <= D; ++p)
      for (std::size_t ti = 0; ti < taus.size(); ++ti) {
        auto s = s_relation(in, n, p, taus[ti]);
        srel.rows.push_back({S(n), S(p), S(ti), s.defined ? "yes" : "no", s.truncation ? "yes" : "no",
                             s.proportional ? "yes" : "no", s.defined ? scalar_str(s.measured) : "-"});
        std::string tag = "S relation n=" + S(n) + " p=" + S(p) + " trace=" + S(ti);
        if (n + 1 <= nmax) r.check(tag + " truncation", s.truncation);
        if (s.defined) {
          r.check(tag + " proportional", s.proportional);
          r.scalars[tag] = scalar_str(s.measured);
        }
      }
  }
  r.tables.push_back(srel);

  // cotraces and the cup through forms
  std::size_t mm = cfg.m;
  if (mm + 3 <= D) {
    auto xis = find_cotraces(w, mm);
    if (xis.empty()) {
      r.notes.push_back("no cotraces of size " + S(mm));
    } else {
      std::size_t kmax = 0;
      while (kmax < 2 && mm + 2 * (kmax + 1) + 2 <= D) ++kmax;
      AlgebraModel am = AlgebraModel::from(b.hopf, ma);
      OmegaBundle om(b.hopf, am, m, mm + kmax);
      Table kt{"cotrace cups", {"cotrace", "k", "trace", "closed", "cyclic"}, {}};
      for (std::size_t xi = 0; xi < xis.size(); ++xi) {
        r.vectors.push_back({"cotrace " + S(xi), w.dim(mm + 1, 0), xis[xi]});
        for (std::size_t k = 0; k <= kmax; ++k) {
          auto trs = find_closed_traces(om, k);
          for (std::size_t ti = 0; ti < trs.size(); ++ti) {
            SVec up = khalkhali_cup(om, *mc.coalg, trs[ti], k, w, xis[xi], mm, in.bar());
            bool closed = in.algebra_cyclic().closed(up, mm + k), cyc = in.algebra_cyclic().cyclic(up, mm + k);
            kt.rows.push_back({S(xi), S(k), S(ti), closed ? "yes" : "no", cyc ? "yes" : "no"});
            std::string tag = "cotrace cup xi=" + S(xi) + " k=" + S(k) + " trace=" + S(ti);
            r.vectors.push_back({tag, in.bar().dims.at(mm + k + 1), up});
            r.check(tag + " closed", closed && cyc);
          }
        }
      }
      r.tables.push_back(kt);
    }
  } else {
    r.notes.push_back("cotraces of size " + S(mm) + " need --max-degree >= " + S(mm + 3));
  }

  auto cmp = compare_pairings({{0, 0}, {0, 1}, {1, 0}});
  Table ft{"comparison factors", {"m", "n", "defined", "measured", "expected", "matches", "note"}, {}};
  for (const auto& f : cmp.factors) {
    std::string tag = "factor m=" + S(f.m) + " n=" + S(f.n);
    ft.rows.push_back({S(f.m), S(f.n), f.defined ? "yes" : "no", f.defined ? scalar_str(f.measured) : "-",
                       scalar_str(f.expected), f.matches ? "yes" : "no", f.note});
    if (f.defined) {
      r.scalars[tag] = scalar_str(f.measured);
      r.check(tag + " = (m+1)/(m+n+1)", f.matches);
    }
  }
  for (const auto& n : cmp.notes) r.notes.push_back(n);
  r.tables.push_back(ft);
  finish(r);
  return r;
}

Report cmd_cache(const RunConfig& cfg) {
  Report r = start(cfg);
  r.config = {{"cache_dir", resolve_cache_dir(cfg)}, {"action", cfg.cache_action}};
  ReportCache c(resolve_cache_dir(cfg));
  if (cfg.cache_action == "clear") {
    r.scalars["removed"] = S(c.clear());
  } else if (cfg.cache_action != "list") {
    throw Error(ErrorCode::ParseError, "unknown cache action '" + cfg.cache_action + "' (list, clear)");
  }
  Table t{"entries", {"key"}, {}};
  for (const auto& k : c.list()) t.rows.push_back({k});
  r.scalars["entries"] = S(t.rows.size());
  r.tables.push_back(t);
  return r;
}

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  auto t0 = std::chrono::steady_clock::now();
  try {
    Report r;
    if (cfg.command == "cache") {
      r = cmd_cache(cfg);
    } else {
      std::string key, hash;
      std::optional<ReportCache> cache;
      if (cfg.use_cache) {
        hash = sha256_hex(read_file(cfg.input));
        cache.emplace(resolve_cache_dir(cfg));
        key = ReportCache::key(cfg, hash);
        std::string warn;
        auto hit = cache->get(key, &warn);
        if (!warn.empty()) err << "warning: " << warn << "\n";
        if (hit) {
          r = report_from_json(*hit);
          err << "cache hit " << key << "\n";
        }
      }
      if (r.command.empty()) {
        if (cfg.command == "validate") r = cmd_validate(cfg);
        else if (cfg.command == "cohomology") r = cmd_cohomology(cfg);
        else if (cfg.command == "weil") r = cmd_weil(cfg);
        else if (cfg.command == "pair") r = cmd_pair(cfg);
        else throw Error(ErrorCode::ParseError, "unknown command '" + cfg.command + "'");
        if (cache) {
          try {
            cache->put(key, render_json(r));
          } catch (const std::exception& ex) {
            err << "warning: cache write failed: " << ex.what() << "\n";
          }
        }
      }
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    out << render(r, cfg.format, cfg.timing);
    return r.exit_code;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    if (!e.witness().empty()) {
      err << "witness:";
      for (const auto& [i, c] : e.witness()) err << " " << i << ":" << scalar_str(c);
      err << "\n";
    }
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "error: INTERNAL: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace hopfcyc
