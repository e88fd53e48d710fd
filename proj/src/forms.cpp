#include "hopfcyc/forms.hpp"

#include <functional>

namespace hopfcyc {

namespace {

SVec drop_unit(const SVec& x, std::size_t unit) {
  SVec r;
  for (const auto& e : x)
    if (e.first != unit) r.push_back(e);
  return r;
}

FormKey with(const FormKey& base, std::size_t x) {
  FormKey k(base);
  k.push_back(x);
  return k;
}

std::size_t rank_of(const SparseMatrix& m) { return m.rows() && m.cols() ? rank(m) : 0; }

SparseMatrix submatrix(const SparseMatrix& m, const std::vector<std::size_t>& rows,
                       const std::vector<std::size_t>& cols) {
  std::vector<std::ptrdiff_t> rp(m.rows(), -1), cp(m.cols(), -1);
  for (std::size_t i = 0; i < rows.size(); ++i) rp[rows[i]] = static_cast<std::ptrdiff_t>(i);
  for (std::size_t i = 0; i < cols.size(); ++i) cp[cols[i]] = static_cast<std::ptrdiff_t>(i);
  std::vector<Entry> e;
  for (const auto& x : m.entries())
    if (rp[x.row] >= 0 && cp[x.col] >= 0)
      e.push_back({static_cast<std::size_t>(rp[x.row]), static_cast<std::size_t>(cp[x.col]), x.val});
  return SparseMatrix::from_entries(rows.size(), cols.size(), std::move(e));
}

std::vector<std::size_t> at_least(const std::vector<std::size_t>& w, std::size_t min_weight) {
  std::vector<std::size_t> r;
  for (std::size_t i = 0; i < w.size(); ++i)
    if (w[i] >= min_weight) r.push_back(i);
  return r;
}

// block assembly for super complexes
struct Blocks {
  std::vector<Entry> e;
  void put(const SparseMatrix& m, std::size_t r0, std::size_t c0) {
    for (const auto& x : m.entries()) e.push_back({x.row + r0, x.col + c0, x.val});
  }
};

}  // namespace

// ----- algebra models

SVec AlgebraModel::mul(const SVec& x, const SVec& y) const {
  Accum a;
  for (const auto& [i, ci] : x)
    for (const auto& [j, cj] : y) a.add(mu.at(i).at(j), ci * cj);
  return a.take();
}

AlgebraModel AlgebraModel::from(const HopfAlgebra& h, const ModuleAlgebra& ma) {
  const Algebra& A = *ma.alg;
  AlgebraModel r;
  r.name = A.name;
  r.dim = A.dim;
  r.names = A.names;
  r.mu = A.mu;
  if (A.unit.size() != 1 || A.unit[0].second != 1)
    throw Error(ErrorCode::NotSupported, "algebra " + A.name + ": unit must be a basis vector");
  r.unit = A.unit[0].first;
  r.weight.assign(A.dim, 0);
  r.h = ma.h;
  if (r.h.act.empty()) {
    r.h.act.assign(h.dim(), {});
    for (std::size_t hb = 0; hb < h.dim(); ++hb)
      for (std::size_t x = 0; x < A.dim; ++x) r.h.act[hb].push_back(sv_unit(x, h.coalg.counit[hb]));
  }
  r.c = ma.c;
  return r;
}

Algebra AlgebraModel::as_algebra() const {
  Algebra a;
  a.name = name;
  a.dim = dim;
  a.names = names;
  a.mu = mu;
  a.unit = sv_unit(unit);
  return a;
}

HModule character_module(const HopfAlgebra& h, const Vec& chi, std::size_t dim, const std::string& name) {
  HModule v;
  v.name = name;
  v.dim = dim;
  for (std::size_t i = 0; i < dim; ++i) v.names.push_back(dim == 1 ? "x" : "x" + std::to_string(i));
  v.act.act.assign(h.dim(), {});
  for (std::size_t hb = 0; hb < h.dim(); ++hb)
    for (std::size_t i = 0; i < dim; ++i) v.act.act[hb].push_back(sv_unit(i, chi.at(hb)));
  return v;
}

std::size_t FreeAlgebra::index(const std::vector<std::size_t>& w) const {
  auto it = pos.find(w);
  if (it == pos.end()) throw Error(ErrorCode::DegreeOutOfRange, "word longer than the cap");
  return it->second;
}

std::string FreeAlgebra::word_name(std::size_t i) const {
  if (words.at(i).empty()) return "1";
  std::string s;
  for (auto l : words[i]) s += v.names.at(l);
  return s;
}

FreeAlgebra free_algebra(const HopfAlgebra& h, const HModule& v, std::size_t cap) {
  FreeAlgebra f;
  f.v = v;
  f.cap = cap;
  f.words.push_back({});
  std::size_t lo = 0;
  for (std::size_t len = 1; len <= cap; ++len) {
    std::size_t hi = f.words.size();
    for (std::size_t i = lo; i < hi; ++i)
      for (std::size_t l = 0; l < v.dim; ++l) f.words.push_back(with(f.words[i], l));
    lo = hi;
  }
  for (std::size_t i = 0; i < f.words.size(); ++i) f.pos[f.words[i]] = i;

  AlgebraModel& a = f.model;
  a.name = "T(" + v.name + ")";
  a.dim = f.words.size();
  for (std::size_t i = 0; i < a.dim; ++i) a.names.push_back(f.word_name(i));
  a.unit = 0;
  for (const auto& w : f.words) a.weight.push_back(w.size());
  a.mu.assign(a.dim, std::vector<SVec>(a.dim));
  for (std::size_t i = 0; i < a.dim; ++i)
    for (std::size_t j = 0; j < a.dim; ++j) {
      if (f.words[i].size() + f.words[j].size() > cap) continue;
      auto w = f.words[i];
      w.insert(w.end(), f.words[j].begin(), f.words[j].end());
      a.mu[i][j] = sv_unit(f.pos.at(w));
    }
  a.h.act.assign(h.dim(), {});
  for (std::size_t hb = 0; hb < h.dim(); ++hb)
    for (std::size_t i = 0; i < a.dim; ++i) {
      const auto& w = f.words[i];
      if (w.empty()) {
        a.h.act[hb].push_back(sv_unit(0, h.coalg.counit[hb]));
        continue;
      }
      Accum acc;
      for (const auto& [hk, c] : h.coalg.iterated_coproduct(sv_unit(hb), w.size() - 1)) {
        // expand the product of the letter images
        std::map<std::vector<std::size_t>, Scalar> cur{{{}, c}};
        for (std::size_t s = 0; s < w.size(); ++s) {
          std::map<std::vector<std::size_t>, Scalar> nxt;
          for (const auto& [pre, pc] : cur)
            for (const auto& [l, lc] : v.act.act.at(hk[s]).at(w[s])) nxt[with(pre, l)] += pc * lc;
          cur = std::move(nxt);
        }
        for (const auto& [ww, cc] : cur) acc.add(f.pos.at(ww), cc);
      }
      a.h.act[hb].push_back(acc.take());
    }
  return f;
}

// ----- form arithmetic

void form_add(FormVec& f, const FormKey& k, const Scalar& c) {
  if (c == 0) return;
  auto [it, fresh] = f.emplace(k, c);
  if (!fresh) {
    it->second += c;
    if (it->second == 0) f.erase(it);
  }
}

FormVec form_right_mul(const AlgebraModel& a, const FormKey& w, std::size_t x) {
  FormVec r;
  if (w.size() == 1) {
    for (const auto& [c, s] : a.mu.at(w[0]).at(x)) form_add(r, {c}, s);
    return r;
  }
  // omega da . x = omega d(ax) - (omega a) dx
  FormKey om(w.begin(), w.end() - 1);
  for (const auto& [c, s] : a.mu.at(w.back()).at(x))
    if (c != a.unit) form_add(r, with(om, c), s);
  if (x != a.unit)
    for (const auto& [t, s] : form_right_mul(a, om, w.back())) form_add(r, with(t, x), -s);
  return r;
}

FormVec form_mul(const AlgebraModel& a, const FormKey& x, const FormKey& y) {
  FormVec r;
  for (const auto& [t, s] : form_right_mul(a, x, y[0])) {
    FormKey k(t);
    k.insert(k.end(), y.begin() + 1, y.end());
    form_add(r, k, s);
  }
  return r;
}

FormVec form_d(const AlgebraModel& a, const FormKey& x) {
  FormVec r;
  if (x[0] == a.unit) return r;
  FormKey k{a.unit};
  k.insert(k.end(), x.begin(), x.end());
  r[k] = 1;
  return r;
}

FormVec form_act(const Coalgebra& hc, const Action& act, const AlgebraModel& a, std::size_t hb, const FormKey& x) {
  FormVec r;
  for (const auto& [hk, c] : hc.iterated_coproduct(sv_unit(hb), x.size() - 1)) {
    FormVec cur{{{}, c}};
    for (std::size_t s = 0; s < x.size(); ++s) {
      SVec img = act.act.at(hk[s]).at(x[s]);
      if (s > 0) img = drop_unit(img, a.unit);
      FormVec nxt;
      for (const auto& [pre, pc] : cur)
        for (const auto& [l, lc] : img) form_add(nxt, with(pre, l), pc * lc);
      cur = std::move(nxt);
    }
    for (const auto& [k, v] : cur) form_add(r, k, v);
  }
  return r;
}

const char* form_op_name(FormOp o) {
  switch (o) {
    case FormOp::D: return "d";
    case FormOp::Bh: return "b";
    case FormOp::Kappa: return "kappa";
    case FormOp::B: return "B";
  }
  return "?";
}

// ----- bundle

OmegaBundle::OmegaBundle(const HopfAlgebra& h, AlgebraModel a, const SAYDModule& m, std::size_t K, std::size_t window)
    : h_(h), a_(std::move(a)), m_(m), K_(K), window_(window) {
  if (a_.weight.size() != a_.dim) a_.weight.assign(a_.dim, 0);
  keys_.resize(K_ + 1);
  std::function<void(FormKey&, std::size_t, std::size_t)> grow = [&](FormKey& k, std::size_t left, std::size_t wt) {
    if (left == 0) {
      keys_[k.size() - 2].push_back(k);
      return;
    }
    for (std::size_t x = 0; x < a_.dim; ++x) {
      if (x == a_.unit || wt + a_.weight[x] > window_) continue;
      k.push_back(x);
      grow(k, left - 1, wt + a_.weight[x]);
      k.pop_back();
    }
  };
  for (std::size_t deg = 0; deg <= K_; ++deg)
    for (std::size_t mm = 0; mm < m_.dim; ++mm)
      for (std::size_t a0 = 0; a0 < a_.dim; ++a0) {
        if (a_.weight[a0] > window_) continue;
        FormKey k{mm, a0};
        grow(k, deg, a_.weight[a0]);
      }
  for (const auto& ks : keys_)
    for (std::size_t i = 0; i < ks.size(); ++i) pos_[ks[i]] = i;
}

std::size_t OmegaBundle::index(const FormKey& key) const {
  auto it = pos_.find(key);
  return it == pos_.end() ? static_cast<std::size_t>(-1) : it->second;
}

std::size_t OmegaBundle::weight(const FormKey& key) const {
  std::size_t w = 0;
  for (std::size_t i = 1; i < key.size(); ++i) w += a_.weight.at(key[i]);
  return w;
}

std::string OmegaBundle::key_name(const FormKey& key) const {
  std::string s = m_.names.empty() ? "m" + std::to_string(key[0]) : m_.names.at(key[0]);
  s += " (x) " + a_.names.at(key[1]);
  for (std::size_t i = 2; i < key.size(); ++i) s += " d" + a_.names.at(key[i]);
  return s;
}

SVec OmegaBundle::twist(std::size_t hb, std::size_t x) const { return a_.h.apply(h_.Sinv.at(hb), sv_unit(x)); }

SVec OmegaBundle::embed(const FormVec& f, std::size_t m) const {
  Accum acc;
  for (const auto& [k, c] : f) {
    FormKey key{m};
    key.insert(key.end(), k.begin(), k.end());
    std::size_t i = index(key);
    if (i == static_cast<std::size_t>(-1)) throw Error(ErrorCode::Internal, "form outside the window: " + key_name(key));
    acc.add(i, c);
  }
  return acc.take();
}

bool OmegaBundle::has(FormOp op, std::size_t k) const {
  switch (op) {
    case FormOp::D:
    case FormOp::B: return k < K_;
    case FormOp::Bh: return k >= 1 && k <= K_;
    case FormOp::Kappa: return k <= K_;
  }
  return false;
}

const SparseMatrix& OmegaBundle::raw(FormOp op, std::size_t k) const {
  if (!has(op, k))
    throw Error(ErrorCode::DegreeOutOfRange, std::string(form_op_name(op)) + " on Omega^" + std::to_string(k));
  auto key = std::make_pair(static_cast<int>(op), k);
  auto it = ops_.find(key);
  if (it == ops_.end()) it = ops_.emplace(key, build(op, k)).first;
  return it->second;
}

SparseMatrix OmegaBundle::build(FormOp op, std::size_t k) const {
  if (op == FormOp::B) {
    const SparseMatrix& kap = raw(FormOp::Kappa, k + 1);
    SparseMatrix sum = SparseMatrix::identity(dim(k + 1)), p = sum;
    for (std::size_t i = 1; i <= k; ++i) {
      p = kap * p;
      sum = sum + p;
    }
    return sum * raw(FormOp::D, k);
  }
  std::size_t tk = op == FormOp::D ? k + 1 : op == FormOp::Bh ? k - 1 : k;
  std::vector<SVec> cols;
  for (const auto& key : keys(k)) {
    std::size_t mm = key[0];
    FormKey f(key.begin() + 1, key.end());
    FormVec out;  // keyed with m in front
    auto put = [&](std::size_t m2, const FormKey& g, const Scalar& c) {
      FormKey full{m2};
      full.insert(full.end(), g.begin(), g.end());
      form_add(out, full, c);
    };
    switch (op) {
      case FormOp::D:
        for (const auto& [g, c] : form_d(a_, f)) put(mm, g, c);
        break;
      case FormOp::Bh: {
        for (std::size_t i = 0; i + 1 <= k; ++i) {
          Scalar sg = i % 2 ? -1 : 1;
          for (const auto& [c, s] : a_.mu.at(f[i]).at(f[i + 1])) {
            if (i > 0 && c == a_.unit) continue;
            FormKey g(f.begin(), f.begin() + i);
            g.push_back(c);
            g.insert(g.end(), f.begin() + i + 2, f.end());
            put(mm, g, sg * s);
          }
        }
        Scalar sg = k % 2 ? -1 : 1;
        for (const auto& [hm, ch] : m_.coact(sv_unit(mm)))
          for (const auto& [y, cy] : twist(hm[0], f[k]))
            for (const auto& [c, s] : a_.mu.at(y).at(f[0])) {
              FormKey g{c};
              g.insert(g.end(), f.begin() + 1, f.begin() + k);
              put(hm[1], g, sg * ch * cy * s);
            }
        break;
      }
      case FormOp::Kappa: {
        if (k == 0) {
          for (const auto& [hm, ch] : m_.coact(sv_unit(mm)))
            for (const auto& [y, cy] : twist(hm[0], f[0])) put(hm[1], {y}, ch * cy);
          break;
        }
        // (-1)^{k-1} m0 (x) d(a') omega with a' = S^{-1}(m-1) a_k
        Scalar sg = (k - 1) % 2 ? -1 : 1;
        FormKey rest(f.begin() + 1, f.begin() + k);
        for (const auto& [hm, ch] : m_.coact(sv_unit(mm)))
          for (const auto& [y, cy] : twist(hm[0], f[k])) {
            if (y == a_.unit) continue;
            for (const auto& [c, s] : a_.mu.at(y).at(f[0])) {
              if (c == a_.unit) continue;
              FormKey g{a_.unit, c};
              g.insert(g.end(), rest.begin(), rest.end());
              put(hm[1], g, sg * ch * cy * s);
            }
            if (f[0] != a_.unit) {
              FormKey g{y, f[0]};
              g.insert(g.end(), rest.begin(), rest.end());
              put(hm[1], g, -sg * ch * cy);
            }
          }
        break;
      }
      case FormOp::B: break;
    }
    Accum acc;
    for (const auto& [g, c] : out) {
      std::size_t i = index(g);
      if (i == static_cast<std::size_t>(-1)) throw Error(ErrorCode::Internal, "form outside the window: " + key_name(g));
      acc.add(i, c);
    }
    cols.push_back(acc.take());
  }
  return SparseMatrix::from_columns(dim(tk), cols);
}

Subspace OmegaBundle::coefficient_span(const std::vector<FormKey>& ks) const {
  std::map<FormKey, std::size_t> local;
  for (std::size_t i = 0; i < ks.size(); ++i) local[ks[i]] = i;
  Subspace rel(ks.size());
  for (const auto& key : ks) {
    FormKey f(key.begin() + 1, key.end());
    for (std::size_t hb = 0; hb < h_.dim(); ++hb) {
      Accum g;
      auto add = [&](const FormKey& k2, const Scalar& c) {
        auto it = local.find(k2);
        if (it == local.end()) throw Error(ErrorCode::Internal, "H-action leaves the key list at " + key_name(k2));
        g.add(it->second, c);
      };
      for (const auto& [m2, c] : m_.right.at(hb).at(key[0])) {
        FormKey k2(key);
        k2[0] = m2;
        add(k2, c);
      }
      for (const auto& [g2, c] : form_act(h_.coalg, a_.h, a_, hb, f)) {
        FormKey k2{key[0]};
        k2.insert(k2.end(), g2.begin(), g2.end());
        add(k2, -c);
      }
      SVec gen = g.take();
      if (!gen.empty()) rel.insert(gen);
    }
  }
  return rel;
}

const Subspace& OmegaBundle::commutators(std::size_t k) const {
  auto it = comm_.find(k);
  if (it != comm_.end()) return it->second;
  Subspace rel(dim(k));
  const std::size_t npos = static_cast<std::size_t>(-1);
  auto gen_add = [&](Accum& g, std::size_t m2, const FormKey& f, const Scalar& c) -> bool {
    FormKey full{m2};
    full.insert(full.end(), f.begin(), f.end());
    std::size_t i = index(full);
    if (i == npos) return false;
    g.add(i, c);
    return true;
  };
  // m (x) omega x - m0 (x) S^{-1}(m-1)(x) omega
  for (const auto& key : keys(k)) {
    FormKey f(key.begin() + 1, key.end());
    std::size_t wt = weight(key);
    for (std::size_t x = 0; x < a_.dim; ++x) {
      if (window_ != no_window && wt + a_.weight[x] > window_) continue;
      Accum g;
      for (const auto& [t, c] : form_right_mul(a_, f, x)) gen_add(g, key[0], t, c);
      for (const auto& [hm, ch] : m_.coact(sv_unit(key[0])))
        for (const auto& [y, cy] : twist(hm[0], x))
          for (const auto& [c, s] : a_.mu.at(y).at(f[0])) {
            FormKey t(f);
            t[0] = c;
            gen_add(g, hm[1], t, -ch * cy * s);
          }
      SVec gen = g.take();
      if (!gen.empty()) rel.insert(gen);
    }
  }
  // m (x) omega dx - (-1)^|omega| m0 (x) d(S^{-1}(m-1) x) omega
  if (k >= 1) {
    Scalar sg = (k - 1) % 2 ? -1 : 1;
    for (const auto& key : keys(k - 1)) {
      FormKey f(key.begin() + 1, key.end());
      std::size_t wt = weight(key);
      for (std::size_t x = 0; x < a_.dim; ++x) {
        if (x == a_.unit) continue;
        if (window_ != no_window && wt + a_.weight[x] > window_) continue;
        Accum g;
        gen_add(g, key[0], with(f, x), 1);
        FormKey rest(f.begin() + 1, f.end());
        for (const auto& [hm, ch] : m_.coact(sv_unit(key[0])))
          for (const auto& [y, cy] : twist(hm[0], x)) {
            if (y == a_.unit) continue;
            for (const auto& [c, s] : a_.mu.at(y).at(f[0])) {
              if (c == a_.unit) continue;
              FormKey t{a_.unit, c};
              t.insert(t.end(), rest.begin(), rest.end());
              gen_add(g, hm[1], t, -sg * ch * cy * s);
            }
            if (f[0] != a_.unit) {
              FormKey t{y, f[0]};
              t.insert(t.end(), rest.begin(), rest.end());
              gen_add(g, hm[1], t, sg * ch * cy);
            }
          }
        SVec gen = g.take();
        if (!gen.empty()) rel.insert(gen);
      }
    }
  }
  return comm_.emplace(k, std::move(rel)).first->second;
}

const Quotient& OmegaBundle::coeff(std::size_t k) const {
  auto it = coeff_.find(k);
  if (it == coeff_.end()) it = coeff_.emplace(k, Quotient(dim(k), coefficient_span(keys(k)))).first;
  return it->second;
}

const Quotient& OmegaBundle::nat(std::size_t k) const {
  auto it = nat_.find(k);
  if (it == nat_.end()) {
    Subspace rel = coeff(k).relations().sum(commutators(k));
    it = nat_.emplace(k, Quotient(dim(k), std::move(rel))).first;
  }
  return it->second;
}

std::vector<std::size_t> OmegaBundle::coeff_weights(std::size_t k) const {
  std::vector<std::size_t> r;
  for (auto f : coeff(k).free_coords()) r.push_back(weight(keys(k)[f]));
  return r;
}

std::vector<std::size_t> OmegaBundle::nat_weights(std::size_t k) const {
  std::vector<std::size_t> r;
  for (auto f : nat(k).free_coords()) r.push_back(weight(keys(k)[f]));
  return r;
}

namespace {
std::size_t op_target(FormOp o, std::size_t k) {
  return o == FormOp::D || o == FormOp::B ? k + 1 : o == FormOp::Bh ? k - 1 : k;
}
}  // namespace

SparseMatrix OmegaBundle::op(FormOp o, std::size_t k) const {
  try {
    return induced_map(raw(o, k), coeff(k), coeff(op_target(o, k)));
  } catch (const Error& e) {
    if (e.code() != ErrorCode::DescentFailure) throw;
    throw Error(ErrorCode::DescentFailure,
                std::string(form_op_name(o)) + " on Omega^" + std::to_string(k) + " does not descend to M (x)_H Omega",
                e.witness());
  }
}

SparseMatrix OmegaBundle::nat_op(FormOp o, std::size_t k) const {
  try {
    return induced_map(raw(o, k), nat(k), nat(op_target(o, k)));
  } catch (const Error& e) {
    if (e.code() != ErrorCode::DescentFailure) throw;
    throw Error(ErrorCode::DescentFailure,
                std::string(form_op_name(o)) + " on Omega^" + std::to_string(k) + " does not descend to Omega_nat",
                e.witness());
  }
}

// ----- super complexes

bool SuperComplex::squares_zero() const { return (d1 * d0).is_zero() && (d0 * d1).is_zero(); }
std::size_t SuperComplex::h0() const { return dim0 - rank_of(d0) - rank_of(d1); }
std::size_t SuperComplex::h1() const { return dim1 - rank_of(d1) - rank_of(d0); }

SuperComplex SuperComplex::restrict_weight(std::size_t min_weight) const {
  auto k0 = at_least(weight0, min_weight), k1 = at_least(weight1, min_weight);
  SuperComplex r;
  r.dim0 = k0.size();
  r.dim1 = k1.size();
  r.d0 = submatrix(d0, k1, k0);
  r.d1 = submatrix(d1, k0, k1);
  for (auto i : k0) r.weight0.push_back(weight0[i]);
  for (auto i : k1) r.weight1.push_back(weight1[i]);
  return r;
}

namespace {

void require_degree(const OmegaBundle& w, std::size_t need, const char* what) {
  if (w.K() < need)
    throw Error(ErrorCode::DegreeOutOfRange,
                std::string(what) + " needs Omega up to degree " + std::to_string(need) + ", built " +
                    std::to_string(w.K()));
}

std::vector<std::size_t> sub_weights(const std::vector<std::size_t>& parent, const Quotient& q) {
  std::vector<std::size_t> r;
  for (auto f : q.free_coords()) r.push_back(parent.at(f));
  return r;
}

// assemble a super complex from graded pieces: piece k has dims[k]; maps[(k, k')] between pieces
SuperComplex assemble(const std::vector<std::size_t>& dims, const std::vector<std::vector<std::size_t>>& weights,
                      const std::map<std::pair<std::size_t, std::size_t>, SparseMatrix>& maps) {
  std::vector<std::size_t> off(dims.size());
  std::size_t n0 = 0, n1 = 0;
  SuperComplex s;
  for (std::size_t k = 0; k < dims.size(); ++k) {
    std::size_t& n = k % 2 ? n1 : n0;
    off[k] = n;
    n += dims[k];
    auto& wv = k % 2 ? s.weight1 : s.weight0;
    wv.insert(wv.end(), weights[k].begin(), weights[k].end());
  }
  Blocks b0, b1;
  for (const auto& [kk, m] : maps) {
    auto [src, dst] = kk;
    if (src % 2 == dst % 2) throw Error(ErrorCode::Internal, "super complex map preserves parity");
    (src % 2 ? b1 : b0).put(m, off[dst], off[src]);
  }
  s.dim0 = n0;
  s.dim1 = n1;
  s.d0 = SparseMatrix::from_entries(n1, n0, std::move(b0.e));
  s.d1 = SparseMatrix::from_entries(n0, n1, std::move(b1.e));
  return s;
}

}  // namespace

SuperComplex hodge_level(const OmegaBundle& w, std::size_t n) {
  require_degree(w, n + 1, "hodge level");
  // top piece Omega^n / b Omega^{n+1}
  Quotient top(w.coeff(n).dim(), Subspace::image(w.op(FormOp::Bh, n + 1)));
  std::vector<std::size_t> dims;
  std::vector<std::vector<std::size_t>> wts;
  for (std::size_t k = 0; k < n; ++k) {
    dims.push_back(w.coeff(k).dim());
    wts.push_back(w.coeff_weights(k));
  }
  dims.push_back(top.dim());
  wts.push_back(sub_weights(w.coeff_weights(n), top));
  std::map<std::pair<std::size_t, std::size_t>, SparseMatrix> maps;
  for (std::size_t k = 1; k <= n; ++k) {
    SparseMatrix b = w.op(FormOp::Bh, k);
    if (k == n) b = b * top.section();
    maps[{k, k - 1}] = b;
  }
  for (std::size_t k = 0; k < n; ++k) {
    SparseMatrix B = w.op(FormOp::B, k);
    if (k + 1 == n) B = top.projection() * B;
    maps[{k, k + 1}] = B;
  }
  return assemble(dims, wts, maps);
}

SuperComplex hodge_graded(const OmegaBundle& w, std::size_t n) {
  require_degree(w, n + 1, "hodge graded piece");
  if (n == 0) throw Error(ErrorCode::DegreeOutOfRange, "graded piece needs n >= 1");
  Quotient top(w.coeff(n).dim(), Subspace::image(w.op(FormOp::Bh, n + 1)));
  Subspace im = Subspace::image(w.op(FormOp::Bh, n));
  auto basis = im.basis();
  auto piv = im.pivots();
  // coordinates of a vector of im in its reduced basis are its values at the pivots
  auto coords = [&](const SparseMatrix& m) {
    std::vector<SVec> cols;
    for (const auto& c : m.column_list()) {
      Accum a;
      for (std::size_t i = 0; i < piv.size(); ++i) a.add(i, sv_get(c, piv[i]));
      cols.push_back(a.take());
    }
    return SparseMatrix::from_columns(piv.size(), cols);
  };
  SparseMatrix bmat = coords(w.op(FormOp::Bh, n) * top.section());
  SparseMatrix Bmat = top.projection() * w.op(FormOp::B, n - 1) * SparseMatrix::from_columns(w.coeff(n - 1).dim(), basis);
  std::vector<std::size_t> wlow;
  auto cw = w.coeff_weights(n - 1);
  for (auto p : piv) wlow.push_back(cw[p]);
  std::vector<std::size_t> dims{basis.size(), top.dim()};
  std::vector<std::vector<std::size_t>> wts{wlow, sub_weights(w.coeff_weights(n), top)};
  // parity of the pieces follows n - 1 and n
  if ((n - 1) % 2 == 0) {
    std::map<std::pair<std::size_t, std::size_t>, SparseMatrix> maps{{{1, 0}, bmat}, {{0, 1}, Bmat}};
    return assemble(dims, wts, maps);
  }
  std::map<std::pair<std::size_t, std::size_t>, SparseMatrix> maps{{{0, 1}, bmat}, {{1, 0}, Bmat}};
  return assemble({top.dim(), basis.size()}, {wts[1], wts[0]}, maps);
}

SuperComplex x_complex(const OmegaBundle& w) {
  require_degree(w, 1, "X-complex");
  SuperComplex s;
  s.dim0 = w.coeff(0).dim();
  s.dim1 = w.nat(1).dim();
  s.d0 = induced_map(w.raw(FormOp::D, 0), w.coeff(0), w.nat(1));
  try {
    s.d1 = induced_map(w.raw(FormOp::Bh, 1), w.nat(1), w.coeff(0));
  } catch (const Error& e) {
    if (e.code() != ErrorCode::DescentFailure) throw;
    throw Error(ErrorCode::DescentFailure, "b does not descend from Omega^1_nat", e.witness());
  }
  s.weight0 = w.coeff_weights(0);
  s.weight1 = w.nat_weights(1);
  return s;
}

std::vector<std::size_t> hochschild_dims(const OmegaBundle& w, std::size_t min_weight) {
  std::vector<std::size_t> r;
  for (std::size_t k = 0; k + 1 <= w.K(); ++k) {
    auto keep = at_least(w.coeff_weights(k), min_weight);
    std::size_t out = 0;
    if (k >= 1) out = rank_of(submatrix(w.op(FormOp::Bh, k), at_least(w.coeff_weights(k - 1), min_weight), keep));
    std::size_t in = rank_of(submatrix(w.op(FormOp::Bh, k + 1), keep, at_least(w.coeff_weights(k + 1), min_weight)));
    r.push_back(keep.size() - out - in);
  }
  return r;
}

std::vector<std::size_t> hodge_cyclic_dims(const OmegaBundle& w, std::size_t min_weight) {
  std::vector<std::size_t> r;
  for (std::size_t n = 0; n + 1 <= w.K(); ++n) {
    SuperComplex s = hodge_level(w, n).restrict_weight(min_weight);
    r.push_back(n % 2 ? s.h1() : s.h0());
  }
  return r;
}

std::vector<std::size_t> derham_dims(const OmegaBundle& w, std::size_t min_weight) {
  std::vector<std::size_t> r;
  for (std::size_t k = 0; k + 1 <= w.K(); ++k) {
    auto keep = at_least(w.nat_weights(k), min_weight);
    std::size_t in = 0;
    if (k >= 1) in = rank_of(submatrix(w.nat_op(FormOp::D, k - 1), keep, at_least(w.nat_weights(k - 1), min_weight)));
    std::size_t out = rank_of(submatrix(w.nat_op(FormOp::D, k), at_least(w.nat_weights(k + 1), min_weight), keep));
    r.push_back(keep.size() - out - in);
  }
  return r;
}

std::size_t free_nat_dim(const OmegaBundle& w) {
  const AlgebraModel& a = w.algebra();
  const SAYDModule& m = w.module();
  std::vector<FormKey> ks;
  for (const auto& k : w.keys(0))
    if (k[1] != a.unit) ks.push_back(k);
  std::map<FormKey, std::size_t> local;
  for (std::size_t i = 0; i < ks.size(); ++i) local[ks[i]] = i;
  Subspace rel = w.coefficient_span(ks);
  // m (x) fg - m0 (x) S^{-1}(m-1)(g) f
  for (const auto& k : ks)
    for (std::size_t g = 0; g < a.dim; ++g) {
      if (w.window() != OmegaBundle::no_window && a.weight[k[1]] + a.weight[g] > w.window()) continue;
      Accum acc;
      auto add = [&](std::size_t m2, std::size_t x, const Scalar& c) {
        auto it = local.find({m2, x});
        if (it != local.end()) acc.add(it->second, c);
      };
      for (const auto& [x, c] : a.mu.at(k[1]).at(g)) add(k[0], x, c);
      for (const auto& [hm, ch] : m.coact(sv_unit(k[0])))
        for (const auto& [y, cy] : a.h.apply(w.hopf().Sinv.at(hm[0]), sv_unit(g)))
          for (const auto& [x, c] : a.mu.at(y).at(k[1])) add(hm[1], x, -ch * cy * c);
      SVec gen = acc.take();
      if (!gen.empty()) rel.insert(gen);
    }
  return ks.size() - rel.dim();
}

XFreeReport x_complex_free(const OmegaBundle& w) {
  XFreeReport r;
  r.x = x_complex(w).restrict_weight(1);
  r.h0 = r.x.dim0 - rank_of(r.x.d1);
  r.h1 = r.x.dim1 - rank_of(r.x.d1) - rank_of(r.x.d0);
  r.even = r.x.h0();
  r.odd = r.x.h1();
  r.nat_dim = free_nat_dim(w);
  return r;
}

}  // namespace hopfcyc
