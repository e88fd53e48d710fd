#include "hopfcyc/structures.hpp"

#include <sstream>

namespace hopfcyc {

void tensor_add(Tensor& t, const std::vector<std::size_t>& key, const Scalar& c) {
  if (c == 0) return;
  auto [it, fresh] = t.emplace(key, c);
  if (!fresh) {
    it->second += c;
    if (it->second == 0) t.erase(it);
  }
}

void tensor_add_all(Tensor& t, const Tensor& o, const Scalar& c) {
  for (const auto& [k, v] : o) tensor_add(t, k, v * c);
}

Tensor tensor_clean(Tensor t) {
  for (auto it = t.begin(); it != t.end();) {
    if (it->second == 0) it = t.erase(it);
    else ++it;
  }
  return t;
}

// ---- Coalgebra

Tensor Coalgebra::coproduct(const SVec& x) const {
  Tensor t;
  for (const auto& [k, c] : x)
    for (const auto& d : delta.at(k)) tensor_add(t, {d.i, d.j}, c * d.c);
  return t;
}

Tensor Coalgebra::iterated_coproduct(const SVec& x, std::size_t n) const {
  Tensor t;
  for (const auto& [k, c] : x) tensor_add(t, {k}, c);
  // split the last factor each time
  for (std::size_t r = 0; r < n; ++r) {
    Tensor nt;
    for (const auto& [key, c] : t) {
      std::size_t last = key.back();
      for (const auto& d : delta.at(last)) {
        auto k2 = key;
        k2.back() = d.i;
        k2.push_back(d.j);
        tensor_add(nt, k2, c * d.c);
      }
    }
    t = std::move(nt);
  }
  return t;
}

Tensor Coalgebra::iterated_coproduct_right(const SVec& x, std::size_t n) const {
  Tensor t;
  for (const auto& [k, c] : x) tensor_add(t, {k}, c);
  for (std::size_t r = 0; r < n; ++r) {
    Tensor nt;
    for (const auto& [key, c] : t) {
      std::size_t first = key.front();
      for (const auto& d : delta.at(first)) {
        std::vector<std::size_t> k2{d.i, d.j};
        k2.insert(k2.end(), key.begin() + 1, key.end());
        tensor_add(nt, k2, c * d.c);
      }
    }
    t = std::move(nt);
  }
  return t;
}

Scalar Coalgebra::eps(const SVec& x) const {
  Scalar s = 0;
  for (const auto& [k, c] : x) s += c * counit.at(k);
  return s;
}

std::size_t Coalgebra::basis_index_of_counit_pivot() const {
  for (std::size_t k = 0; k < dim; ++k)
    if (counit[k] != 0) return k;
  throw Error(ErrorCode::InputShape, "counit is zero");
}

SVec Algebra::mul(const SVec& a, const SVec& b) const {
  Accum acc;
  for (const auto& [i, x] : a)
    for (const auto& [j, y] : b) acc.add(mu.at(i).at(j), x * y);
  return acc.take();
}

SVec HopfAlgebra::antipode(const SVec& x) const {
  Accum acc;
  for (const auto& [k, c] : x) acc.add(S.at(k), c);
  return acc.take();
}

SVec HopfAlgebra::antipode_inv(const SVec& x) const {
  Accum acc;
  for (const auto& [k, c] : x) acc.add(Sinv.at(k), c);
  return acc.take();
}

SVec Action::apply(std::size_t h, const SVec& v) const {
  Accum acc;
  for (const auto& [k, c] : v) acc.add(act.at(h).at(k), c);
  return acc.take();
}

SVec Action::apply(const SVec& h, const SVec& v) const {
  Accum acc;
  for (const auto& [a, c] : h) acc.add(apply(a, v), c);
  return acc.take();
}

SVec SAYDModule::act(const SVec& m, std::size_t h) const {
  Accum acc;
  for (const auto& [k, c] : m) acc.add(right.at(h).at(k), c);
  return acc.take();
}

SVec SAYDModule::act(const SVec& m, const SVec& h) const {
  Accum acc;
  for (const auto& [a, c] : h) acc.add(act(m, a), c);
  return acc.take();
}

Tensor SAYDModule::coact(const SVec& m) const {
  Tensor t;
  for (const auto& [k, c] : m)
    for (const auto& [h, mm, x] : coaction.at(k)) tensor_add(t, {h, mm}, c * x);
  return t;
}

bool ValidationReport::pass() const {
  for (const auto& c : checks)
    if (!c.ok) return false;
  return true;
}

std::vector<std::string> ValidationReport::violations() const {
  std::vector<std::string> v;
  for (const auto& c : checks)
    if (!c.ok) v.push_back(c.axiom + " at " + c.witness);
  return v;
}

namespace {

std::string idx(const char* n, std::size_t i) { return std::string(n) + "[" + std::to_string(i) + "]"; }

struct Checker {
  ValidationReport& rep;
  std::map<std::string, std::size_t> pos;
  void record(const std::string& axiom, bool ok, const std::string& witness) {
    auto it = pos.find(axiom);
    if (it == pos.end()) {
      pos[axiom] = rep.checks.size();
      rep.checks.push_back({axiom, ok, ok ? "" : witness});
    } else if (!ok && rep.checks[it->second].ok) {
      rep.checks[it->second].ok = false;
      rep.checks[it->second].witness = witness;
    }
  }
};

Tensor single(const SVec& v) {
  Tensor t;
  for (const auto& [i, c] : v) tensor_add(t, {i}, c);
  return t;
}

// apply coproduct to factor pos of a tensor
Tensor split_at(const Coalgebra& c, const Tensor& t, std::size_t pos) {
  Tensor out;
  for (const auto& [key, x] : t)
    for (const auto& d : c.delta.at(key[pos])) {
      std::vector<std::size_t> k2(key.begin(), key.begin() + pos);
      k2.push_back(d.i);
      k2.push_back(d.j);
      k2.insert(k2.end(), key.begin() + pos + 1, key.end());
      tensor_add(out, k2, x * d.c);
    }
  return out;
}

Tensor counit_at(const Coalgebra& c, const Tensor& t, std::size_t pos) {
  Tensor out;
  for (const auto& [key, x] : t) {
    Scalar e = c.counit.at(key[pos]);
    if (e == 0) continue;
    std::vector<std::size_t> k2(key.begin(), key.begin() + pos);
    k2.insert(k2.end(), key.begin() + pos + 1, key.end());
    tensor_add(out, k2, x * e);
  }
  return out;
}

void check_coalgebra(Checker& ck, const Coalgebra& c, const std::string& pre) {
  for (std::size_t k = 0; k < c.dim; ++k) {
    Tensor d = c.coproduct(sv_unit(k));
    ck.record(pre + "coassociativity", split_at(c, d, 0) == split_at(c, d, 1), idx("e", k));
    Tensor e = single(sv_unit(k));
    ck.record(pre + "counit", counit_at(c, d, 0) == e && counit_at(c, d, 1) == e, idx("e", k));
  }
}

void check_algebra(Checker& ck, const Algebra& a, const std::string& pre) {
  for (std::size_t i = 0; i < a.dim; ++i) {
    SVec ei = sv_unit(i);
    ck.record(pre + "unit", a.mul(a.unit, ei) == ei && a.mul(ei, a.unit) == ei, idx("e", i));
    for (std::size_t j = 0; j < a.dim; ++j)
      for (std::size_t k = 0; k < a.dim; ++k) {
        SVec l = a.mul(a.mu[i][j], sv_unit(k));
        SVec r = a.mul(ei, a.mu[j][k]);
        ck.record(pre + "associativity", l == r,
                  "(" + std::to_string(i) + "," + std::to_string(j) + "," + std::to_string(k) + ")");
      }
  }
}

// (sum a(x)b)(sum a'(x)b') in A(x)A
Tensor mul2(const Algebra& a, const Tensor& x, const Tensor& y) {
  Tensor out;
  for (const auto& [kx, cx] : x)
    for (const auto& [ky, cy] : y) {
      SVec p = a.mu[kx[0]][ky[0]];
      SVec q = a.mu[kx[1]][ky[1]];
      for (const auto& [i, u] : p)
        for (const auto& [j, v] : q) tensor_add(out, {i, j}, cx * cy * u * v);
    }
  return out;
}

}  // namespace

ValidationReport validate_coalgebra(const Coalgebra& c) {
  ValidationReport r;
  r.object = "coalgebra " + c.name;
  Checker ck{r, {}};
  check_coalgebra(ck, c, "");
  return r;
}

ValidationReport validate_algebra(const Algebra& a) {
  ValidationReport r;
  r.object = "algebra " + a.name;
  Checker ck{r, {}};
  check_algebra(ck, a, "");
  return r;
}

ValidationReport validate_hopf(const HopfAlgebra& h) {
  ValidationReport r;
  r.object = "hopf " + h.coalg.name;
  Checker ck{r, {}};
  check_algebra(ck, h.alg, "");
  check_coalgebra(ck, h.coalg, "");
  std::size_t n = h.dim();
  Tensor one2;
  for (const auto& [i, x] : h.alg.unit)
    for (const auto& [j, y] : h.alg.unit) tensor_add(one2, {i, j}, x * y);
  ck.record("coproduct of unit", h.coproduct(h.alg.unit) == one2, "1");
  ck.record("counit of unit", h.eps(h.alg.unit) == 1, "1");
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      std::string w = "(" + std::to_string(i) + "," + std::to_string(j) + ")";
      SVec p = h.alg.mu[i][j];
      ck.record("coproduct multiplicative",
                h.coproduct(p) == mul2(h.alg, h.coproduct(sv_unit(i)), h.coproduct(sv_unit(j))), w);
      ck.record("counit multiplicative", h.eps(p) == h.coalg.counit[i] * h.coalg.counit[j], w);
    }
  for (std::size_t k = 0; k < n; ++k) {
    Accum left, right;
    for (const auto& d : h.coalg.delta[k]) {
      left.add(h.mul(h.S[d.i], sv_unit(d.j)), d.c);
      right.add(h.mul(sv_unit(d.i), h.S[d.j]), d.c);
    }
    SVec target = sv_scale(h.alg.unit, h.coalg.counit[k]);
    ck.record("antipode", left.take() == target && right.take() == target, idx("e", k));
    SVec ek = sv_unit(k);
    ck.record("antipode inverse", h.antipode(h.antipode_inv(ek)) == ek && h.antipode_inv(h.antipode(ek)) == ek,
              idx("e", k));
  }
  return r;
}

ValidationReport validate_sayd(const HopfAlgebra& h, const SAYDModule& m) {
  ValidationReport r;
  r.object = "sayd " + m.name;
  Checker ck{r, {}};
  std::size_t n = h.dim();
  bool ayd = true, stable = true;
  for (std::size_t k = 0; k < m.dim; ++k) {
    SVec ek = sv_unit(k);
    ck.record("right unit", m.act(ek, h.alg.unit) == ek, idx("m", k));
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        ck.record("right module", m.act(m.act(ek, a), b) == m.act(ek, h.alg.mu[a][b]),
                  idx("m", k) + idx("h", a) + idx("h", b));
    Tensor rho = m.coact(ek);
    // (Delta (x) id) rho == (id (x) rho) rho
    Tensor l, rr;
    for (const auto& [key, c] : rho) {
      for (const auto& d : h.coalg.delta[key[0]]) tensor_add(l, {d.i, d.j, key[1]}, c * d.c);
      for (const auto& [k2, c2] : m.coact(sv_unit(key[1]))) tensor_add(rr, {key[0], k2[0], k2[1]}, c * c2);
    }
    ck.record("comodule coassociativity", l == rr, idx("m", k));
    Accum ce;
    for (const auto& [key, c] : rho) ce.add(key[1], c * h.coalg.counit[key[0]]);
    ck.record("comodule counit", ce.take() == ek, idx("m", k));
    // stability: m0 . m-1 = m
    Accum st;
    for (const auto& [key, c] : rho) st.add(m.act(sv_unit(key[1]), key[0]), c);
    if (st.take() != ek) stable = false;
    // anti-Yetter-Drinfeld: rho(m h) = S(h3) m-1 h1 (x) m0 h2
    for (std::size_t a = 0; a < n; ++a) {
      Tensor lhs = m.coact(m.act(ek, a));
      Tensor rhs;
      Tensor h3 = h.coalg.iterated_coproduct(sv_unit(a), 2);
      for (const auto& [hk, hc] : h3)
        for (const auto& [mk, mc] : rho) {
          SVec left = h.mul(h.mul(h.S[hk[2]], sv_unit(mk[0])), sv_unit(hk[0]));
          SVec right = m.act(sv_unit(mk[1]), hk[1]);
          for (const auto& [i, x] : left)
            for (const auto& [j, y] : right) tensor_add(rhs, {i, j}, hc * mc * x * y);
        }
      if (lhs != rhs) ayd = false;
    }
  }
  r.flags["ayd"] = ayd;
  r.flags["stable"] = stable;
  return r;
}

namespace {

void check_module(Checker& ck, const HopfAlgebra& h, const Action& act, std::size_t dim, const std::string& pre) {
  std::size_t n = h.dim();
  if (act.act.size() != n) {
    ck.record(pre + "action shape", false, "matrix count");
    return;
  }
  for (std::size_t x = 0; x < dim; ++x) {
    SVec ex = sv_unit(x);
    ck.record(pre + "unit acts trivially", act.apply(h.alg.unit, ex) == ex, idx("e", x));
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        ck.record(pre + "module", act.apply(a, act.apply(b, ex)) == act.apply(h.alg.mu[a][b], ex),
                  idx("h", a) + idx("h", b) + idx("e", x));
  }
}

}  // namespace

ValidationReport validate_module_coalgebra(const HopfAlgebra& h, const ModuleCoalgebra& mc) {
  ValidationReport r;
  const Coalgebra& c = *mc.coalg;
  r.object = "module coalgebra " + c.name;
  Checker ck{r, {}};
  check_module(ck, h, mc.h, c.dim, "");
  if (!r.pass()) return r;
  for (std::size_t a = 0; a < h.dim(); ++a)
    for (std::size_t k = 0; k < c.dim; ++k) {
      SVec hc = mc.h.apply(a, sv_unit(k));
      Tensor lhs = c.coproduct(hc);
      Tensor rhs;
      for (const auto& d : h.coalg.delta[a])
        for (const auto& e : c.delta[k]) {
          SVec x = mc.h.apply(d.i, sv_unit(e.i));
          SVec y = mc.h.apply(d.j, sv_unit(e.j));
          for (const auto& [i, u] : x)
            for (const auto& [j, v] : y) tensor_add(rhs, {i, j}, d.c * e.c * u * v);
        }
      std::string w = idx("h", a) + idx("c", k);
      ck.record("coproduct compatibility", lhs == rhs, w);
      ck.record("counit compatibility", c.eps(hc) == h.coalg.counit[a] * c.counit[k], w);
    }
  return r;
}

ValidationReport validate_module_actions(const HopfAlgebra& h, const ModuleCoalgebra* mc, const ModuleAlgebra& ma) {
  ValidationReport r;
  const Algebra& A = *ma.alg;
  r.object = "module algebra " + A.name;
  Checker ck{r, {}};
  check_module(ck, h, ma.h, A.dim, "");
  if (!r.pass()) return r;
  std::size_t n = h.dim();
  for (std::size_t a = 0; a < n; ++a) {
    ck.record("action on unit", ma.h.apply(a, A.unit) == sv_scale(A.unit, h.coalg.counit[a]), idx("h", a));
    for (std::size_t x = 0; x < A.dim; ++x)
      for (std::size_t y = 0; y < A.dim; ++y) {
        SVec lhs = ma.h.apply(a, A.mu[x][y]);
        Accum rhs;
        for (const auto& d : h.coalg.delta[a])
          rhs.add(A.mul(ma.h.apply(d.i, sv_unit(x)), ma.h.apply(d.j, sv_unit(y))), d.c);
        ck.record("module algebra", lhs == rhs.take(), idx("h", a) + idx("e", x) + idx("e", y));
      }
  }
  if (ma.c) {
    const Coalgebra& C = *ma.c_source;
    const Action& cact = *ma.c;
    bool unital = true;
    for (std::size_t c = 0; c < C.dim; ++c) {
      if (cact.apply(c, A.unit) != sv_scale(A.unit, C.counit[c])) unital = false;
      for (std::size_t x = 0; x < A.dim; ++x)
        for (std::size_t y = 0; y < A.dim; ++y) {
          SVec lhs = cact.apply(c, A.mu[x][y]);
          Accum rhs;
          for (const auto& d : C.delta[c])
            rhs.add(A.mul(cact.apply(d.i, sv_unit(x)), cact.apply(d.j, sv_unit(y))), d.c);
          ck.record("c-action multiplicativity c(ab)=c1(a)c2(b)", lhs == rhs.take(), idx("c", c) + idx("e", x) + idx("e", y));
        }
    }
    r.flags["c_unital"] = unital;
    if (mc) {
      for (std::size_t a = 0; a < n; ++a)
        for (std::size_t c = 0; c < C.dim; ++c)
          for (std::size_t x = 0; x < A.dim; ++x) {
            SVec hc = mc->h.apply(a, sv_unit(c));
            SVec lhs = cact.apply(hc, sv_unit(x));
            SVec rhs = ma.h.apply(a, cact.apply(c, sv_unit(x)));
            ck.record("c-action equivariance (h(c))(a)=h(c(a))", lhs == rhs, idx("h", a) + idx("c", c) + idx("e", x));
          }
    }
  }
  return r;
}

}  // namespace hopfcyc
