#include "hopfcyc/cyclic.hpp"

#include <functional>

namespace hopfcyc {

namespace {

using Emit = std::function<void(std::size_t, const std::vector<std::size_t>&, const Scalar&)>;
using Rule = std::function<void(std::size_t, const std::vector<std::size_t>&, const Emit&)>;

SparseMatrix raw_op(const TensorIndexer& src, const TensorIndexer& dst, const Rule& f) {
  std::vector<Entry> e;
  std::size_t m;
  std::vector<std::size_t> v;
  for (std::size_t col = 0; col < src.size(); ++col) {
    src.decode(col, m, v);
    f(m, v, [&](std::size_t m2, const std::vector<std::size_t>& v2, const Scalar& c) {
      if (c != 0) e.push_back({dst.encode(m2, v2), col, c});
    });
  }
  return SparseMatrix::from_entries(dst.size(), src.size(), std::move(e));
}

// all terms of f_0 (x) ... (x) f_{r-1}
void expand(const std::vector<SVec>& f, const Scalar& c,
            const std::function<void(const std::vector<std::size_t>&, const Scalar&)>& out) {
  std::vector<std::size_t> key(f.size());
  std::function<void(std::size_t, Scalar)> rec = [&](std::size_t k, Scalar acc) {
    if (k == f.size()) {
      out(key, acc);
      return;
    }
    for (const auto& [i, x] : f[k]) {
      key[k] = i;
      rec(k + 1, acc * x);
    }
  };
  if (c != 0) rec(0, c);
}

// h . (x_0 (x) ... (x) x_{r-1}) via the iterated coproduct
Tensor diagonal_action(const Coalgebra& hc, const Action& act, std::size_t h, const std::vector<std::size_t>& x) {
  Tensor out;
  for (const auto& [hk, c] : hc.iterated_coproduct(sv_unit(h), x.size() - 1)) {
    std::vector<SVec> f;
    for (std::size_t k = 0; k < x.size(); ++k) f.push_back(act.act.at(hk[k]).at(x[k]));
    expand(f, c, [&](const std::vector<std::size_t>& key, const Scalar& v) { tensor_add(out, key, v); });
  }
  return out;
}

SparseMatrix induced(const SparseMatrix& raw, const Quotient& src, const Quotient& dst, const std::string& op,
                     std::size_t n) {
  try {
    return induced_map(raw, src, dst);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::DescentFailure) throw;
    throw Error(ErrorCode::DescentFailure, op + " in degree " + std::to_string(n) + " does not descend to the quotient",
                e.witness());
  }
}

struct CoalgRaw {
  std::size_t top;
  std::vector<TensorIndexer> ix;  // ix[n]: M (x) C^{n+1}
  std::vector<std::vector<SparseMatrix>> delta, sigma;
  std::vector<SparseMatrix> tau;
  std::vector<Subspace> rel;
};

CoalgRaw coalgebra_raw(const HopfAlgebra& h, const ModuleCoalgebra& mc, const SAYDModule& m, std::size_t top,
                       const CocyclicOptions& opt) {
  const Coalgebra& C = *mc.coalg;
  CoalgRaw r;
  r.top = top;
  for (std::size_t n = 0; n <= top; ++n) r.ix.push_back({m.dim, C.dim, n + 1});
  r.delta.resize(top);
  r.sigma.resize(top);
  for (std::size_t n = 0; n < top; ++n) {
    for (std::size_t i = 0; i <= n; ++i)
      r.delta[n].push_back(raw_op(r.ix[n], r.ix[n + 1], [&](std::size_t mm, const auto& v, const Emit& emit) {
        for (const auto& d : C.delta[v[i]]) {
          std::vector<std::size_t> w(v.begin(), v.begin() + i);
          w.push_back(d.i);
          w.push_back(d.j);
          w.insert(w.end(), v.begin() + i + 1, v.end());
          emit(mm, w, d.c);
        }
      }));
    r.delta[n].push_back(raw_op(r.ix[n], r.ix[n + 1], [&](std::size_t mm, const auto& v, const Emit& emit) {
      for (const auto& d : C.delta[v[0]]) {
        std::size_t front = opt.literal_last_coface ? d.i : d.j;
        std::size_t back = opt.literal_last_coface ? d.j : d.i;
        for (const auto& [hm, c] : m.coact(sv_unit(mm))) {
          for (const auto& [y, cy] : mc.h.act.at(hm[0]).at(back)) {
            std::vector<std::size_t> w{front};
            w.insert(w.end(), v.begin() + 1, v.end());
            w.push_back(y);
            emit(hm[1], w, d.c * c * cy);
          }
        }
      }
    }));
    for (std::size_t i = 0; i <= n; ++i)
      r.sigma[n].push_back(raw_op(r.ix[n + 1], r.ix[n], [&](std::size_t mm, const auto& v, const Emit& emit) {
        std::size_t k = opt.literal_codegeneracy ? i : i + 1;
        std::vector<std::size_t> w(v);
        w.erase(w.begin() + k);
        emit(mm, w, C.counit[v[k]]);
      }));
  }
  for (std::size_t n = 0; n <= top; ++n) {
    r.tau.push_back(raw_op(r.ix[n], r.ix[n], [&](std::size_t mm, const auto& v, const Emit& emit) {
      for (const auto& [hm, c] : m.coact(sv_unit(mm)))
        for (const auto& [y, cy] : mc.h.act.at(hm[0]).at(v[0])) {
          std::vector<std::size_t> w(v.begin() + 1, v.end());
          w.push_back(y);
          emit(hm[1], w, c * cy);
        }
    }));
    r.rel.push_back(coefficient_relations(h, m, mc.h, C.dim, n + 1));
  }
  return r;
}

}  // namespace

Subspace coefficient_relations(const HopfAlgebra& h, const SAYDModule& m, const Action& act, std::size_t dv,
                               std::size_t r) {
  TensorIndexer ix{m.dim, dv, r};
  Subspace rel(ix.size());
  std::size_t mm;
  std::vector<std::size_t> v;
  for (std::size_t hb = 0; hb < h.dim(); ++hb) {
    for (std::size_t col = 0; col < ix.size(); ++col) {
      ix.decode(col, mm, v);
      Accum g;
      for (const auto& [k, c] : m.right.at(hb).at(mm)) g.add(ix.encode(k, v), c);
      for (const auto& [key, c] : diagonal_action(h.coalg, act, hb, v)) g.add(ix.encode(mm, key), -c);
      SVec gen = g.take();
      if (!gen.empty()) rel.insert(gen);
    }
  }
  return rel;
}

CocyclicModule build_coalgebra_cocyclic(const HopfAlgebra& h, const ModuleCoalgebra& mc, const SAYDModule& m,
                                        std::size_t top, const CocyclicOptions& opt) {
  CoalgRaw r = coalgebra_raw(h, mc, m, top, opt);
  std::vector<Quotient> q;
  for (std::size_t n = 0; n <= top; ++n) q.emplace_back(r.ix[n].size(), r.rel[n]);
  CocyclicModule c;
  c.label = m.name + " (x)_H " + mc.coalg->name;
  c.top = top;
  for (const auto& x : q) c.dims.push_back(x.dim());
  c.delta.resize(top);
  c.sigma.resize(top);
  for (std::size_t n = 0; n < top; ++n) {
    for (std::size_t i = 0; i <= n + 1; ++i)
      c.delta[n].push_back(induced(r.delta[n][i], q[n], q[n + 1], "delta_" + std::to_string(i), n));
    for (std::size_t i = 0; i <= n; ++i)
      c.sigma[n].push_back(induced(r.sigma[n][i], q[n + 1], q[n], "sigma_" + std::to_string(i), n + 1));
  }
  for (std::size_t n = 0; n <= top; ++n) c.tau.push_back(induced(r.tau[n], q[n], q[n], "tau", n));
  return c;
}

DescentReport verify_coalgebra_descent(const HopfAlgebra& h, const ModuleCoalgebra& mc, const SAYDModule& m,
                                       std::size_t top) {
  CoalgRaw r = coalgebra_raw(h, mc, m, top, {});
  DescentReport rep;
  auto check = [&](const SparseMatrix& op, std::size_t from, std::size_t to, const std::string& name) {
    if (!rep.pass) return;
    for (const auto& g : r.rel[from].basis()) {
      SVec img = op.apply(g);
      if (!r.rel[to].contains(img)) {
        rep.pass = false;
        rep.op = name;
        rep.degree = from;
        rep.witness = g;
        return;
      }
    }
  };
  for (std::size_t n = 0; n <= top; ++n) {
    if (n < top) {
      for (std::size_t i = 0; i <= n + 1; ++i) check(r.delta[n][i], n, n + 1, "delta_" + std::to_string(i));
      for (std::size_t i = 0; i <= n; ++i) check(r.sigma[n][i], n + 1, n, "sigma_" + std::to_string(i));
    }
    check(r.tau[n], n, n, "tau");
  }
  return rep;
}

CyclicModule build_algebra_cyclic_homology(const HopfAlgebra& h, const ModuleAlgebra& ma, const SAYDModule& m,
                                           std::size_t top) {
  const Algebra& A = *ma.alg;
  std::vector<TensorIndexer> ix;
  std::vector<Quotient> q;
  for (std::size_t n = 0; n <= top; ++n) {
    ix.push_back({m.dim, A.dim, n + 1});
    q.emplace_back(ix[n].size(), coefficient_relations(h, m, ma.h, A.dim, n + 1));
  }
  // S^{-1}(h) . a
  auto twist = [&](std::size_t hb, std::size_t a) { return ma.h.apply(h.Sinv.at(hb), sv_unit(a)); };

  CyclicModule c;
  c.label = m.name + " (x)_H " + A.name;
  c.top = top;
  for (const auto& x : q) c.dims.push_back(x.dim());
  c.d.resize(top + 1);
  c.s.resize(top);
  for (std::size_t n = 1; n <= top; ++n) {
    for (std::size_t i = 0; i < n; ++i) {
      SparseMatrix raw = raw_op(ix[n], ix[n - 1], [&](std::size_t mm, const auto& v, const Emit& emit) {
        for (const auto& [p, cp] : A.mu[v[i]][v[i + 1]]) {
          std::vector<std::size_t> w(v.begin(), v.begin() + i);
          w.push_back(p);
          w.insert(w.end(), v.begin() + i + 2, v.end());
          emit(mm, w, cp);
        }
      });
      c.d[n].push_back(induced(raw, q[n], q[n - 1], "d_" + std::to_string(i), n));
    }
    SparseMatrix last = raw_op(ix[n], ix[n - 1], [&](std::size_t mm, const auto& v, const Emit& emit) {
      for (const auto& [hm, ch] : m.coact(sv_unit(mm)))
        for (const auto& [y, cy] : twist(hm[0], v[n]))
          for (const auto& [p, cp] : A.mu[y][v[0]]) {
            std::vector<std::size_t> w{p};
            w.insert(w.end(), v.begin() + 1, v.begin() + n);
            emit(hm[1], w, ch * cy * cp);
          }
    });
    c.d[n].push_back(induced(last, q[n], q[n - 1], "d_" + std::to_string(n), n));
  }
  for (std::size_t n = 0; n < top; ++n)
    for (std::size_t i = 0; i <= n; ++i) {
      SparseMatrix raw = raw_op(ix[n], ix[n + 1], [&](std::size_t mm, const auto& v, const Emit& emit) {
        for (const auto& [u, cu] : A.unit) {
          std::vector<std::size_t> w(v);
          w.insert(w.begin() + i + 1, u);
          emit(mm, w, cu);
        }
      });
      c.s[n].push_back(induced(raw, q[n], q[n + 1], "s_" + std::to_string(i), n));
    }
  for (std::size_t n = 0; n <= top; ++n) {
    SparseMatrix raw = raw_op(ix[n], ix[n], [&](std::size_t mm, const auto& v, const Emit& emit) {
      for (const auto& [hm, ch] : m.coact(sv_unit(mm)))
        for (const auto& [y, cy] : twist(hm[0], v[n])) {
          std::vector<std::size_t> w{y};
          w.insert(w.end(), v.begin(), v.begin() + n);
          emit(hm[1], w, ch * cy);
        }
    });
    c.t.push_back(induced(raw, q[n], q[n], "t", n));
  }
  return c;
}

CocyclicModule build_algebra_cocyclic(const HopfAlgebra& h, const ModuleAlgebra& a, const SAYDModule& m,
                                      std::size_t top) {
  CocyclicModule c = build_algebra_cyclic_homology(h, a, m, top).dual();
  c.label = "Hom_H(" + m.name + " (x) " + a.alg->name + ", k)";
  return c;
}

std::size_t hom_h_constraint_dim(const HopfAlgebra& h, const ModuleAlgebra& ma, const SAYDModule& m, std::size_t n) {
  const Algebra& A = *ma.alg;
  TensorIndexer ix{m.dim, A.dim, n + 1};
  Subspace gens(ix.size());
  std::size_t mm;
  std::vector<std::size_t> v;
  for (std::size_t hb = 0; hb < h.dim(); ++hb)
    for (std::size_t col = 0; col < ix.size(); ++col) {
      ix.decode(col, mm, v);
      // h.(m (x) a) - eps(h) m (x) a with h.(m (x) a) = m S(h1) (x) h2 a
      Accum g;
      for (const auto& d : h.coalg.delta[hb]) {
        SVec ms = m.act(sv_unit(mm), h.S[d.i]);
        Tensor ha = diagonal_action(h.coalg, ma.h, d.j, v);
        for (const auto& [k, ck] : ms)
          for (const auto& [key, c] : ha) g.add(ix.encode(k, key), d.c * ck * c);
      }
      g.add(col, -h.coalg.counit[hb]);
      SVec gen = g.take();
      if (!gen.empty()) gens.insert(gen);
    }
  return ix.size() - gens.dim();
}

}  // namespace hopfcyc
