#include "hopfcyc/pairing.hpp"

namespace hopfcyc {

namespace {

std::vector<SVec> reps_of(const BlockComplex& bc, std::size_t p) { return bc.cohomology(p).reps(); }

std::size_t ipow(std::size_t b, std::size_t e) {
  std::size_t r = 1;
  for (std::size_t i = 0; i < e; ++i) r *= b;
  return r;
}

std::vector<std::size_t> decode(std::size_t col, std::size_t p, std::size_t ad) {
  std::vector<std::size_t> v(p);
  for (std::size_t i = p; i-- > 0; col /= ad) v[i] = col % ad;
  return v;
}

// raw index of a block -> (m, word position)
std::map<std::size_t, std::pair<std::size_t, std::size_t>> back_map(const WeilAlgebra& w, std::size_t p,
                                                                   std::size_t k) {
  std::map<std::size_t, std::pair<std::size_t, std::size_t>> r;
  const auto& ws = w.words(p, k);
  for (std::size_t mm = 0; mm < w.module_dim(); ++mm)
    for (std::size_t i = 0; i < ws.size(); ++i) r[w.index(mm, p, k, ws[i])] = {mm, i};
  return r;
}

SVec tensor_to_raw(const WeilAlgebra& w, std::size_t mm, std::size_t p, const std::vector<SVec>& slots) {
  Accum acc;
  std::vector<std::pair<Word, Scalar>> cur{{{}, 1}};
  for (const auto& s : slots) {
    std::vector<std::pair<Word, Scalar>> nxt;
    for (const auto& [u, c] : cur)
      for (const auto& [j, cj] : s) {
        Word v = u;
        v.push_back(static_cast<std::uint16_t>(j));
        nxt.push_back({v, c * cj});
      }
    cur = std::move(nxt);
  }
  for (const auto& [u, c] : cur) acc.add(w.index(mm, p, 0, u), c);
  return acc.take();
}

std::vector<SVec> counit_kernel(const Coalgebra& c) {
  std::size_t j0 = c.basis_index_of_counit_pivot();
  std::vector<SVec> out;
  for (std::size_t j = 0; j < c.dim; ++j) {
    if (j == j0) continue;
    Accum a;
    a.add(j, 1);
    a.add(j0, -c.counit[j] / c.counit[j0]);
    out.push_back(a.take());
  }
  return out;
}

SVec cotrace_conditions(const WeilAlgebra& w, const SVec& v, std::size_t m) {
  std::size_t p = m + 1;
  SVec cyc = sv_axpy(v, -1, w.raw(WeilOp::T, p, 0).apply(v));
  SVec a = w.quotient(Flavor::Coeff, p, 0).project(cyc);
  SVec b = w.quotient(Flavor::Nat, p + 1, 0).project(w.raw(WeilOp::Delta, p, 0).apply(v));
  std::size_t off = w.qdim(Flavor::Coeff, p, 0);
  for (const auto& [i, c] : b) a.emplace_back(off + i, c);
  return a;
}

// C* with basis f0 = eps, f_r = e^j for j != j0
struct DualAlgebra {
  AlgebraModel model;
  std::vector<std::size_t> idx;  // j -> r, j0 -> npos
  std::vector<Vec> values;       // values[r][k] = f_r(e_k)
  std::size_t j0 = 0;

  SVec from_functional(const Vec& v) const {
    Accum a;
    for (std::size_t k = 0; k < v.size(); ++k) {
      if (v[k] == 0) continue;
      if (k == j0) {
        Scalar s = v[k] / values[0][j0];
        a.add(0, s);
        for (std::size_t j = 0; j < v.size(); ++j)
          if (j != j0) a.add(idx[j], -s * values[0][j]);
      } else {
        a.add(idx[k], v[k]);
      }
    }
    return a.take();
  }
};

DualAlgebra dual_algebra(const Coalgebra& c) {
  DualAlgebra d;
  std::size_t n = c.dim;
  d.j0 = c.basis_index_of_counit_pivot();
  d.idx.assign(n, static_cast<std::size_t>(-1));
  d.values.push_back(c.counit);
  std::size_t r = 1;
  for (std::size_t j = 0; j < n; ++j) {
    if (j == d.j0) continue;
    d.idx[j] = r++;
    Vec e(n, 0);
    e[j] = 1;
    d.values.push_back(e);
  }
  AlgebraModel& a = d.model;
  a.name = c.name + "*";
  a.dim = n;
  a.names.push_back("eps");
  for (std::size_t j = 0; j < n; ++j)
    if (j != d.j0) a.names.push_back("e^" + c.names.at(j));
  a.unit = 0;
  a.weight.assign(n, 0);
  a.mu.assign(n, std::vector<SVec>(n));
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y) {
      Vec v(n, 0);
      for (std::size_t k = 0; k < n; ++k)
        for (const auto& t : c.delta[k]) v[k] += t.c * d.values[x][t.i] * d.values[y][t.j];
      a.mu[x][y] = d.from_functional(v);
    }
  return d;
}

// Omega(C*) (x) Omega(A), graded
using Bi = std::map<std::pair<FormKey, FormKey>, Scalar>;

void bi_add(Bi& b, const FormKey& x, const FormKey& y, const Scalar& c) {
  if (c == 0) return;
  auto& s = b[{x, y}];
  s += c;
  if (s == 0) b.erase({x, y});
}

Bi bi_mul(const AlgebraModel& ac, const AlgebraModel& aa, const Bi& l, const Bi& r, std::size_t mc, std::size_t ma) {
  Bi out;
  for (const auto& [kl, cl] : l)
    for (const auto& [kr, cr] : r) {
      std::size_t dc = kl.first.size() + kr.first.size() - 2, da = kl.second.size() + kr.second.size() - 2;
      if (dc > mc || da > ma) continue;
      Scalar sg = ((kl.second.size() - 1) * (kr.first.size() - 1)) % 2 ? -1 : 1;
      FormVec fc = form_mul(ac, kl.first, kr.first), fa = form_mul(aa, kl.second, kr.second);
      for (const auto& [x, cx] : fc)
        for (const auto& [y, cy] : fa) bi_add(out, x, y, sg * cl * cr * cx * cy);
    }
  return out;
}

Bi bi_d(const AlgebraModel& ac, const AlgebraModel& aa, const Bi& b) {
  Bi out;
  for (const auto& [k, c] : b) {
    for (const auto& [x, cx] : form_d(ac, k.first)) bi_add(out, x, k.second, c * cx);
    Scalar sg = (k.first.size() - 1) % 2 ? -1 : 1;
    for (const auto& [y, cy] : form_d(aa, k.second)) bi_add(out, k.first, y, sg * c * cy);
  }
  return out;
}

Scalar integrate(const OmegaBundle& om, const SVec& trace, std::size_t deg, const Accum& raw_in) {
  Accum raw = raw_in;
  SVec v = om.nat(deg).project(raw.take());
  return sv_dot(trace, v);
}

void add_form(const OmegaBundle& om, Accum& acc, std::size_t mm, const FormKey& k, const Scalar& c) {
  FormKey key{mm};
  key.insert(key.end(), k.begin(), k.end());
  std::size_t i = om.index(key);
  if (i == static_cast<std::size_t>(-1)) throw Error(ErrorCode::DegreeOutOfRange, "form outside the window of the bundle");
  acc.add(i, c);
}

}  // namespace

std::vector<SVec> find_closed_traces(const OmegaBundle& w, std::size_t n) {
  if (n > w.K()) throw Error(ErrorCode::DegreeOutOfRange, "trace degree beyond the bundle");
  std::size_t dn = w.nat(n).dim();
  if (n == 0) {
    std::vector<SVec> out;
    for (std::size_t i = 0; i < dn; ++i) out.push_back(sv_unit(i));
    return out;
  }
  return kernel_basis(w.nat_op(FormOp::D, n - 1).transpose());
}

std::vector<SVec> find_cotraces(const WeilAlgebra& w, std::size_t m) {
  std::size_t p = m + 1;
  if (p + 1 > w.max_degree()) throw Error(ErrorCode::DegreeOutOfRange, "max degree too small for cotraces of this size");
  const Coalgebra& c = w.coalgebra();
  std::vector<SVec> ker = counit_kernel(c);
  std::vector<SVec> gens;
  for (std::size_t mm = 0; mm < w.module_dim(); ++mm)
    for (std::size_t c0 = 0; c0 < c.dim; ++c0) {
      std::vector<std::size_t> pick(m, 0);
      if (m > 0 && ker.empty()) break;
      while (true) {
        std::vector<SVec> slots{sv_unit(c0)};
        for (auto z : pick) slots.push_back(ker[z]);
        gens.push_back(tensor_to_raw(w, mm, p, slots));
        std::size_t i = m;
        while (i > 0 && ++pick[i - 1] == ker.size()) pick[--i] = 0;
        if (i == 0) break;
      }
    }
  std::vector<SVec> cols;
  for (const auto& g : gens) cols.push_back(cotrace_conditions(w, g, m));
  std::size_t rows = w.qdim(Flavor::Coeff, p, 0) + w.qdim(Flavor::Nat, p + 1, 0);
  std::vector<SVec> out;
  if (gens.empty()) return out;
  Subspace seen(w.qdim(Flavor::Nat, p, 0));
  for (const auto& comb : kernel_basis(SparseMatrix::from_columns(rows, cols))) {
    Accum a;
    for (const auto& [i, cc] : comb) a.add(gens[i], cc);
    SVec xi = a.take();
    SVec cls = w.quotient(Flavor::Nat, p, 0).project(xi);
    if (cls.empty() || !seen.insert(cls)) continue;
    out.push_back(xi);
  }
  return out;
}

void validate_cotrace(const WeilAlgebra& w, const SVec& xi, std::size_t m) {
  std::size_t p = m + 1;
  const Coalgebra& c = w.coalgebra();
  auto back = back_map(w, p, 0);
  const auto& ws = w.words(p, 0);
  for (std::size_t s = 1; s <= m; ++s) {
    std::map<std::pair<std::size_t, Word>, Scalar> red;
    for (const auto& [i, v] : xi) {
      auto it = back.find(i);
      if (it == back.end()) throw Error(ErrorCode::CotraceInvalid, "entry outside block (m+1, 0)");
      Word u = ws[it->second.second];
      Scalar e = c.counit.at(u[s]);
      u.erase(u.begin() + static_cast<std::ptrdiff_t>(s));
      red[{it->second.first, u}] += v * e;
    }
    for (const auto& [k, v] : red)
      if (v != 0) throw Error(ErrorCode::CotraceInvalid, "not normalized: eps on slot " + std::to_string(s) + " is nonzero");
  }
  SVec cyc = sv_axpy(xi, -1, w.raw(WeilOp::T, p, 0).apply(xi));
  if (!w.relations(Flavor::Coeff, p, 0).contains(cyc)) throw Error(ErrorCode::CotraceInvalid, "not cyclic: (1 - t) xi != 0", cyc);
  SVec del = w.raw(WeilOp::Delta, p, 0).apply(xi);
  if (!w.relations(Flavor::Nat, p + 1, 0).contains(del)) throw Error(ErrorCode::CotraceInvalid, "not closed: delta xi != 0", del);
}

SVec khalkhali_cup(const OmegaBundle& om, const Coalgebra& c, const SVec& trace, std::size_t n, const WeilAlgebra& w,
                   const SVec& xi, std::size_t m, const BarBundle& bar) {
  const AlgebraModel& aa = om.algebra();
  if (!aa.c) throw Error(ErrorCode::InputShape, "the algebra carries no coalgebra action");
  if (c.dim != w.coalgebra_dim()) throw Error(ErrorCode::DimensionMismatch, "coalgebra differs from the Weil coalgebra");
  std::size_t N = m + n, ad = aa.dim;
  if (bar.cap < N + 1 || bar.adim != ad) throw Error(ErrorCode::DegreeOutOfRange, "bar construction too short");
  if (n > om.K()) throw Error(ErrorCode::DegreeOutOfRange, "forms bundle too short");
  DualAlgebra du = dual_algebra(c);
  const AlgebraModel& ac = du.model;

  std::vector<Bi> T(ad), DT(ad);
  for (std::size_t x = 0; x < ad; ++x) {
    for (std::size_t j = 0; j < c.dim; ++j) {
      Vec e(c.dim, 0);
      e[j] = 1;
      SVec f = du.from_functional(e);
      for (const auto& [y, cy] : aa.c->act.at(j).at(x))
        for (const auto& [r, cr] : f) bi_add(T[x], {r}, {y}, cy * cr);
    }
    DT[x] = bi_d(ac, aa, T[x]);
  }

  auto back = back_map(w, m + 1, 0);
  const auto& ws = w.words(m + 1, 0);
  std::vector<std::pair<std::pair<std::size_t, Word>, Scalar>> terms;
  for (const auto& [i, v] : xi) {
    auto it = back.find(i);
    if (it == back.end()) throw Error(ErrorCode::CotraceInvalid, "cotrace entry outside block (m+1, 0)");
    terms.push_back({{it->second.first, ws[it->second.second]}, v});
  }

  Accum vals;
  std::size_t ncols = ipow(ad, N + 1);
  for (std::size_t col = 0; col < ncols; ++col) {
    auto as = decode(col, N + 1, ad);
    Bi prod = T[as[0]];
    for (std::size_t i = 1; i <= N && !prod.empty(); ++i) prod = bi_mul(ac, aa, prod, DT[as[i]], m, n);
    Accum raw;
    for (const auto& [k, cv] : prod) {
      if (k.first.size() != m + 1 || k.second.size() != n + 1) continue;
      for (const auto& [mu, cx] : terms) {
        Scalar v = cx * cv;
        for (std::size_t s = 0; s <= m && v != 0; ++s) v *= du.values[k.first[s]][mu.second[s]];
        if (v != 0) add_form(om, raw, mu.first, k.second, v);
      }
    }
    if (raw.empty()) continue;
    Scalar s = integrate(om, trace, n, raw);
    if (s != 0) vals.add(col, s);
  }
  return bar.norm.at(N + 1).transpose().apply(vals.take());
}

SVec weil_to_forms_cup(const OmegaBundle& om, const SVec& trace, const WeilAlgebra& w, const SVec& x, std::size_t p,
                       std::size_t k, const BarBundle& bar) {
  const AlgebraModel& aa = om.algebra();
  if (!aa.c) throw Error(ErrorCode::InputShape, "the algebra carries no coalgebra action");
  std::size_t L = p - k, ad = aa.dim, dc = w.coalgebra_dim();
  if (bar.cap < L || bar.adim != ad) throw Error(ErrorCode::DegreeOutOfRange, "bar construction too short");
  if (k > om.K()) throw Error(ErrorCode::DegreeOutOfRange, "forms bundle too short");
  auto back = back_map(w, p, k);
  const auto& ws = w.words(p, k);
  Accum vals;
  std::size_t ncols = ipow(ad, L);
  for (std::size_t col = 0; col < ncols; ++col) {
    auto as = decode(col, L, ad);
    Accum raw;
    for (const auto& [i, cx] : x) {
      auto [mm, wi] = back.at(i);
      const Word& u = ws[wi];
      FormVec acc{{{aa.unit}, cx}};
      std::size_t fdeg = 0;
      for (std::size_t s = 0; s < L && !acc.empty(); ++s) {
        bool isw = u[s] >= dc;
        std::size_t c = isw ? u[s] - dc : u[s];
        Scalar sg = fdeg % 2 ? -1 : 1;
        if (isw) sg = -sg;
        FormVec fac;
        for (const auto& [y, cy] : aa.c->act.at(c).at(as[s])) {
          if (isw) {
            for (const auto& [z, cz] : form_d(aa, {y})) form_add(fac, z, cy * cz);
          } else {
            form_add(fac, {y}, cy);
          }
        }
        FormVec nxt;
        for (const auto& [ka, ca] : acc)
          for (const auto& [kf, cf] : fac)
            for (const auto& [kk, ck] : form_mul(aa, ka, kf)) form_add(nxt, kk, sg * ca * cf * ck);
        acc = std::move(nxt);
        if (isw) ++fdeg;
      }
      for (const auto& [kk, ck] : acc) add_form(om, raw, mm, kk, ck);
    }
    if (raw.empty()) continue;
    Scalar s = integrate(om, trace, k, raw);
    if (s != 0) vals.add(col, s);
  }
  return bar.norm.at(L).transpose().apply(vals.take());
}

MTrace trace_from_closed(const OmegaBundle& om, const UniversalExtension& e, const SVec& trace, std::size_t n) {
  if (2 * n > om.K()) throw Error(ErrorCode::DegreeOutOfRange, "forms bundle too short for the trace");
  if (n > e.n_max) throw Error(ErrorCode::DegreeOutOfRange, "trace order beyond the extension cut");
  std::size_t dm = om.module().dim, nr = e.r.dim;
  const Quotient& q = om.nat(2 * n);
  Accum out;
  for (std::size_t mm = 0; mm < dm; ++mm)
    for (std::size_t i = 0; i < nr; ++i) {
      if (e.level(i) != n) continue;
      Accum raw;
      add_form(om, raw, mm, e.keys[i], 1);
      Scalar v = sv_dot(trace, q.project(raw.take()));
      if (v != 0) out.add(mm * nr + i, v);
    }
  return {false, n, out.take()};
}

namespace {

// lhs = c * rhs; false when rhs = 0 and lhs != 0 or the two are not proportional
bool proportional(const SparseMatrix& lhs, const SparseMatrix& rhs, Scalar& c, bool& defined) {
  defined = !lhs.is_zero() && !rhs.is_zero();
  if (rhs.is_zero()) return lhs.is_zero();
  const Entry& e = rhs.entries().front();
  c = lhs.at(e.row, e.col) / e.val;
  c.canonicalize();
  return lhs == rhs.scaled(c);
}

}  // namespace

SRelationReport s_relation(const PairingInstance& in, std::size_t n, std::size_t p, const MTrace& tau) {
  SRelationReport r;
  r.n = n;
  r.p = p;
  const WeilAlgebra& w = in.weil();
  if (p + 3 > w.max_degree()) throw Error(ErrorCode::DegreeOutOfRange, "max degree too small for the S relation");
  if (p < 1 + 2 * n) throw Error(ErrorCode::DegreeOutOfRange, "p must be at least 2n + 1");

  if (n + 1 <= in.extension().n_max) {
    MTrace up = tau;
    up.order = n + 1;
    BlockComplex big = tower_complex(w, n + 1), small = tower_complex(w, n);
    r.truncation = true;
    for (const auto& x : reps_of(big, p)) {
      Accum px;
      for (auto k : small.ks(p)) px.add(small.embed(big.component(x, p, k), p, k));
      CupResult a = in.cup_even(x, n + 1, p, up), b = in.cup_even(px.take(), n, p, tau);
      if (a.cochain != b.cochain) r.truncation = false;
    }
  } else {
    r.note = "truncation not checked: n + 1 beyond the extension cut; ";
  }

  std::size_t q = p - 1 - 2 * n;
  const CyclicCohomology& cc = in.coalgebra_cyclic();
  SparseMatrix ap = alpha_matrix(w, cc, n, p), ap2 = alpha_matrix(w, cc, n, p + 2);
  if (ap2.rows() != ap2.cols() || rank(ap2) != ap2.cols()) {
    r.note += "A_n not invertible in degree " + std::to_string(p + 2);
    return r;
  }
  SparseMatrix sc = cc.s_matrix(q) * ap;
  Solver sol(ap2);
  std::vector<SVec> cols;
  for (const auto& col : sc.column_list()) {
    auto y = sol.solve(col);
    if (!y) throw Error(ErrorCode::Internal, "A_n inverse failed");
    cols.push_back(*y);
  }
  SparseMatrix lifted = SparseMatrix::from_columns(ap2.cols(), cols);
  SparseMatrix rhs = in.cup_matrix(n, p + 2, tau) * lifted;
  SparseMatrix lhs = in.algebra_cyclic().s_matrix(p - 1) * in.cup_matrix(n, p, tau);
  r.proportional = proportional(lhs, rhs, r.measured, r.defined);
  if (!r.defined) r.note += "both sides vanish or one side vanishes";
  return r;
}

PairingComparison compare_pairings(const std::vector<std::pair<std::size_t, std::size_t>>& mn) {
  const Bundle& g = ground_bundle();
  PairingComparison out;
  for (const auto& [m, n] : mn) {
    WeilAlgebra w(g.hopf, g.module_coalgebra("point"), g.sayd("k"), m + 2 * n + 3);
    auto xis = find_cotraces(w, m);
    if (xis.empty()) {
      FactorReport f;
      f.m = m;
      f.n = n;
      f.expected = Scalar(m + 1, m + n + 1);
      f.expected.canonicalize();
      f.note = "no cotrace of size " + std::to_string(m) + " on the point";
      out.factors.push_back(f);
      out.notes.push_back("(" + std::to_string(m) + "," + std::to_string(n) + ") vacuous: " + f.note);
      continue;
    }
    if (m != 0 && n != 0) {
      out.notes.push_back("(" + std::to_string(m) + "," + std::to_string(n) + ") skipped: needs m = 0 or n = 0");
      continue;
    }
    out.factors.push_back(cotrace_factor(w, xis.front(), m, n));
  }
  return out;
}

}  // namespace hopfcyc
