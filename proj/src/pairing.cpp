#include "hopfcyc/pairing.hpp"

#include <algorithm>

namespace hopfcyc {

namespace {

std::string key_str(const AlgebraModel& a, const FormKey& k) {
  std::string s = a.names.at(k[0]);
  for (std::size_t i = 1; i < k.size(); ++i) s += " d" + a.names.at(k[i]);
  return s;
}

void enumerate(const std::vector<std::size_t>& bar, std::size_t len, FormKey cur, std::vector<FormKey>& out) {
  if (cur.size() == len) {
    out.push_back(cur);
    return;
  }
  for (auto x : bar) {
    cur.push_back(x);
    enumerate(bar, len, cur, out);
    cur.pop_back();
  }
}

FormVec fedosov(const AlgebraModel& a, const FormKey& x, const FormKey& y) {
  FormVec r = form_mul(a, x, y);
  FormVec dx = form_d(a, x), dy = form_d(a, y);
  for (const auto& [kx, cx] : dx)
    for (const auto& [ky, cy] : dy)
      for (const auto& [k, c] : form_mul(a, kx, ky)) form_add(r, k, cx * cy * c);
  return r;
}

std::size_t ipow(std::size_t b, std::size_t e) {
  std::size_t r = 1;
  for (std::size_t i = 0; i < e; ++i) r *= b;
  return r;
}

}  // namespace

// ----- extension

SVec UniversalExtension::element(const FormVec& f) const {
  Accum acc;
  for (const auto& [k, c] : f) {
    auto it = pos.find(k);
    if (it != pos.end()) acc.add(it->second, c);
  }
  return acc.take();
}

Subspace UniversalExtension::ideal_power(std::size_t k) const {
  Subspace s(r.dim);
  for (std::size_t i = 0; i < r.dim; ++i)
    if (level(i) >= k) s.insert(sv_unit(i));
  return s;
}

UniversalExtension build_extension(const HopfAlgebra& h, const ModuleAlgebra& ma, std::size_t n_max) {
  UniversalExtension e;
  e.n_max = n_max;
  e.top = n_max + 1;
  e.a = AlgebraModel::from(h, ma);
  if (!e.a.c || !ma.c_source) throw Error(ErrorCode::InputShape, "algebra " + e.a.name + " carries no coalgebra action");
  e.c = ma.c_source;
  const AlgebraModel& a = e.a;

  std::vector<std::size_t> bar;
  for (std::size_t x = 0; x < a.dim; ++x)
    if (x != a.unit) bar.push_back(x);
  for (std::size_t j = 0; j <= e.top; ++j) {
    std::vector<FormKey> ks;
    for (std::size_t a0 = 0; a0 < a.dim; ++a0) enumerate(bar, 2 * j + 1, {a0}, ks);
    for (auto& k : ks) {
      e.pos[k] = e.keys.size();
      e.keys.push_back(k);
      e.r.weight.push_back(j);
    }
  }

  AlgebraModel& r = e.r;
  r.name = "R(" + a.name + ")";
  r.dim = e.keys.size();
  for (const auto& k : e.keys) r.names.push_back(key_str(a, k));
  r.unit = e.pos.at({a.unit});
  r.mu.assign(r.dim, std::vector<SVec>(r.dim));
  for (std::size_t i = 0; i < r.dim; ++i)
    for (std::size_t j = 0; j < r.dim; ++j) {
      if (r.weight[i] + r.weight[j] > e.top) continue;
      r.mu[i][j] = e.element(fedosov(a, e.keys[i], e.keys[j]));
    }
  auto diag = [&](const Coalgebra& co, const Action& act, std::size_t nb) {
    Action out;
    out.act.assign(nb, {});
    for (std::size_t b = 0; b < nb; ++b)
      for (const auto& k : e.keys) out.act[b].push_back(e.element(form_act(co, act, a, b, k)));
    return out;
  };
  r.h = diag(h.coalg, a.h, h.dim());
  r.c = diag(*e.c, *a.c, e.c->dim);

  // associativity and the two module-algebra conditions
  for (std::size_t i = 0; i < r.dim; ++i)
    for (std::size_t j = 0; j < r.dim; ++j)
      for (std::size_t k = 0; k < r.dim; ++k) {
        if (r.weight[i] + r.weight[j] + r.weight[k] > e.top) continue;
        SVec l = r.mul(r.mu[i][j], sv_unit(k)), rr = r.mul(sv_unit(i), r.mu[j][k]);
        if (l != rr)
          throw Error(ErrorCode::Internal, "Fedosov product not associative on " + r.names[i] + ", " + r.names[j] + ", " +
                                               r.names[k], sv_add(l, sv_scale(rr, -1)));
      }
  auto module_check = [&](const Coalgebra& co, const Action& act, ErrorCode code, const std::string& what) {
    for (std::size_t b = 0; b < co.dim; ++b)
      for (std::size_t i = 0; i < r.dim; ++i)
        for (std::size_t j = 0; j < r.dim; ++j) {
          if (r.weight[i] + r.weight[j] > e.top) continue;
          SVec lhs = act.apply(b, r.mu[i][j]);
          Accum rhs;
          for (const auto& [key, c] : co.coproduct(sv_unit(b)))
            rhs.add(r.mul(act.act[key[0]][i], act.act[key[1]][j]), c);
          SVec diff = sv_add(lhs, sv_scale(rhs.take(), -1));
          if (!diff.empty())
            throw Error(code, what + " " + co.names.at(b) + " on " + r.names[i] + " o " + r.names[j], diff);
        }
  };
  module_check(h.coalg, r.h, ErrorCode::ActionExtensionFailure, "H-action does not respect o:");
  module_check(*e.c, *r.c, ErrorCode::ActionExtensionFailure, "diagonal C-action breaks c(x o y) = c1(x) o c2(y):");

  std::vector<SVec> cols;
  for (std::size_t x = 0; x < a.dim; ++x) cols.push_back(sv_unit(e.pos.at({x})));
  e.rho = SparseMatrix::from_columns(r.dim, cols);
  return e;
}

void set_splitting(const HopfAlgebra& h, UniversalExtension& e, const SparseMatrix& rho) {
  if (rho.rows() != e.r.dim || rho.cols() != e.a.dim) throw Error(ErrorCode::InputShape, "splitting has the wrong shape");
  for (std::size_t x = 0; x < e.a.dim; ++x) {
    SVec low;
    for (const auto& [i, c] : rho.column(x))
      if (e.level(i) == 0) low.emplace_back(i, c);
    if (low != sv_unit(e.pos.at({x}))) throw Error(ErrorCode::InputShape, "not a section of R -> A at " + e.a.names[x]);
  }
  auto linear = [&](const Action& on_a, const Action& on_r, std::size_t nb, const std::string& what) {
    for (std::size_t b = 0; b < nb; ++b)
      for (std::size_t x = 0; x < e.a.dim; ++x) {
        SVec l = rho.apply(on_a.act[b][x]), rr = on_r.apply(b, rho.column(x));
        if (l != rr) throw Error(ErrorCode::InputShape, "splitting is not " + what + "-linear", sv_add(l, sv_scale(rr, -1)));
      }
  };
  linear(e.a.h, e.r.h, h.dim(), "H");
  linear(*e.a.c, *e.r.c, e.c->dim, "C");
  e.rho = rho;
}

Subspace extension_coefficient_relations(const HopfAlgebra& h, const UniversalExtension& e, const SAYDModule& m) {
  return coefficient_relations(h, m, e.r.h, e.r.dim, 1);
}

Subspace twisted_commutators(const HopfAlgebra& h, const UniversalExtension& e, const SAYDModule& m, std::size_t lx,
                             std::size_t lr) {
  const AlgebraModel& r = e.r;
  std::size_t n = r.dim;
  Subspace s(m.dim * n);
  for (std::size_t mm = 0; mm < m.dim; ++mm) {
    Tensor co = m.coact(sv_unit(mm));
    for (std::size_t x = 0; x < n; ++x) {
      if (e.level(x) < lx) continue;
      for (std::size_t y = 0; y < n; ++y) {
        if (e.level(y) < lr || e.level(x) + e.level(y) > e.top) continue;
        Accum acc;
        for (const auto& [i, c] : r.mu[x][y]) acc.add(mm * n + i, c);
        for (const auto& [key, c] : co) {
          SVec ty = r.h.apply(h.Sinv.at(key[0]), sv_unit(y));
          for (const auto& [i, cc] : r.mul(ty, sv_unit(x))) acc.add(key[1] * n + i, -c * cc);
        }
        s.insert(acc.take());
      }
    }
  }
  return s;
}

namespace {

Subspace trace_relations(const HopfAlgebra& h, const UniversalExtension& e, const SAYDModule& m, std::size_t n,
                         bool odd) {
  Subspace rel = extension_coefficient_relations(h, e, m);
  if (!odd) {
    rel = rel.sum(twisted_commutators(h, e, m, 0, 0));
    for (std::size_t mm = 0; mm < m.dim; ++mm)
      for (std::size_t i = 0; i < e.r.dim; ++i)
        if (e.level(i) > n) rel.insert(sv_unit(mm * e.r.dim + i));
  } else {
    rel = rel.sum(twisted_commutators(h, e, m, n, 1)).sum(twisted_commutators(h, e, m, n + 1, 0));
    for (std::size_t mm = 0; mm < m.dim; ++mm)
      for (std::size_t i = 0; i < e.r.dim; ++i)
        if (e.level(i) <= n) rel.insert(sv_unit(mm * e.r.dim + i));
  }
  return rel;
}

}  // namespace

std::vector<MTrace> find_traces(const HopfAlgebra& h, const UniversalExtension& e, const SAYDModule& m,
                                std::size_t order, bool odd) {
  if (order > e.n_max) throw Error(ErrorCode::DegreeOutOfRange, "trace order beyond the extension cut");
  Subspace rel = trace_relations(h, e, m, order, odd);
  std::vector<MTrace> out;
  for (auto& v : kernel_basis(SparseMatrix::from_rows(m.dim * e.r.dim, rel.basis())))
    out.push_back({odd, order, std::move(v)});
  return out;
}

void validate_trace(const HopfAlgebra& h, const UniversalExtension& e, const SAYDModule& m, const MTrace& t) {
  if (t.order > e.n_max) throw Error(ErrorCode::TraceInvalid, "trace order beyond the extension cut");
  for (const auto& v : trace_relations(h, e, m, t.order, t.odd).basis())
    if (sv_dot(t.functional, v) != 0)
      throw Error(ErrorCode::TraceInvalid,
                  std::string(t.odd ? "odd" : "even") + " trace does not vanish on a defining relation", v);
}

MTrace restrict_to_ideal(const UniversalExtension& e, std::size_t dm, const MTrace& t, std::size_t n) {
  MTrace r{true, n, {}};
  for (const auto& [i, c] : t.functional)
    if (i < dm * e.r.dim && e.level(i % e.r.dim) > n) r.functional.emplace_back(i, c);
  return r;
}

// ----- rho#

RhoSharp::RhoSharp(const HopfAlgebra& h, const UniversalExtension& e, const WeilAlgebra& w, const SAYDModule& m,
                   const BarBundle& bar)
    : h_(h), e_(e), w_(w), m_(m), bar_(bar), dc_(w.coalgebra_dim()),
      coeff_rel_(extension_coefficient_relations(h, e, m)) {
  if (e.c->dim != dc_) throw Error(ErrorCode::DimensionMismatch, "coalgebra acting on A differs from the Weil coalgebra");
  if (bar.adim != e.a.dim) throw Error(ErrorCode::DimensionMismatch, "bar construction on another algebra");
}

SparseMatrix RhoSharp::cup(const SparseMatrix& f, std::size_t p, const SparseMatrix& g, std::size_t q) const {
  std::size_t nq = ipow(e_.a.dim, q);
  auto fc = f.column_list(), gc = g.column_list();
  if (fc.size() != ipow(e_.a.dim, p) || gc.size() != nq) throw Error(ErrorCode::DimensionMismatch, "cup of mis-sized maps");
  std::vector<SVec> cols;
  cols.reserve(fc.size() * nq);
  for (const auto& x : fc)
    for (const auto& y : gc) cols.push_back(x.empty() || y.empty() ? SVec{} : e_.r.mul(x, y));
  return SparseMatrix::from_columns(e_.r.dim, cols);
}

SparseMatrix RhoSharp::D(const SparseMatrix& phi, std::size_t p) const {
  if (p + 1 > bar_.cap) throw Error(ErrorCode::DegreeOutOfRange, "bar construction too short for D");
  return (phi * bar_.codiff.at(p + 1)).scaled(-1);
}

const SparseMatrix& RhoSharp::word(const Word& u) const {
  auto it = memo_.find(u);
  if (it != memo_.end()) return it->second;
  SparseMatrix val;
  if (u.size() == 1) {
    std::size_t c = u[0] < dc_ ? u[0] : u[0] - dc_;
    if (u[0] < dc_) {
      std::vector<SVec> cols;
      for (std::size_t x = 0; x < e_.a.dim; ++x) cols.push_back(e_.rho.apply(e_.a.c->act.at(c).at(x)));
      val = SparseMatrix::from_columns(e_.r.dim, cols);
    } else {
      // w_c = del i_c + i_{c1} i_{c2}
      val = D(word({static_cast<std::uint16_t>(c)}), 1);
      for (const auto& t : w_.coalgebra().delta.at(c)) {
        SparseMatrix pr = cup(word({static_cast<std::uint16_t>(t.i)}), 1, word({static_cast<std::uint16_t>(t.j)}), 1);
        val = val + pr.scaled(t.c);
      }
    }
  } else {
    Word pre(u.begin(), u.end() - 1), last{u.back()};
    val = cup(word(pre), WeilAlgebra::degree(pre, dc_), word(last), WeilAlgebra::degree(last, dc_));
  }
  return memo_.emplace(u, std::move(val)).first->second;
}

SparseMatrix RhoSharp::evaluate(const SVec& raw, std::size_t p, std::size_t k) const {
  const auto& ws = w_.words(p, k);
  std::size_t nr = e_.r.dim, cols = ipow(e_.a.dim, p);
  std::map<std::size_t, std::pair<std::size_t, std::size_t>> back;
  for (std::size_t mm = 0; mm < m_.dim; ++mm)
    for (std::size_t i = 0; i < ws.size(); ++i) back[w_.index(mm, p, k, ws[i])] = {mm, i};
  std::vector<Entry> ent;
  for (const auto& [idx, c] : raw) {
    auto [mm, wi] = back.at(idx);
    for (const auto& en : word(ws[wi]).entries()) ent.push_back({mm * nr + en.row, en.col, c * en.val});
  }
  return SparseMatrix::from_entries(m_.dim * nr, cols, std::move(ent));
}

RhoSharp::Check RhoSharp::verify(std::size_t pmax) const {
  Check ck;
  auto fail = [&](bool& flag, const std::string& why) {
    if (ck.witness.empty()) ck.witness = why;
    flag = false;
  };
  for (std::size_t c = 0; c < dc_; ++c)
    for (const auto& en : word({static_cast<std::uint16_t>(dc_ + c)}).entries())
      if (e_.level(en.row) < 1) {
        fail(ck.curvature, "rho#(w_" + w_.coalgebra().names.at(c) + ") leaves I");
        break;
      }
  pmax = std::min({pmax, w_.max_degree() - 1, bar_.cap - 1});
  for (std::size_t p = 1; p <= pmax; ++p)
    for (std::size_t k = 0; 2 * k <= p; ++k) {
      const auto& ws = w_.words(p, k);
      for (const auto& u : ws) {
        const SparseMatrix& val = word(u);
        for (const auto& en : val.entries())
          if (e_.level(en.row) < k) {
            fail(ck.filtration, "rho#(" + w_.word_name(u) + ") below I^" + std::to_string(k));
            break;
          }
        SVec one = w_.unit(u);
        SparseMatrix lhs(e_.r.dim * m_.dim, ipow(e_.a.dim, p + 1));
        if (w_.has_target(WeilOp::D, p, k))
          lhs = lhs + evaluate(w_.raw(WeilOp::D, p, k).apply(one), p + 1, k + 1);
        if (w_.has_target(WeilOp::Delta, p, k))
          lhs = lhs + evaluate(w_.raw(WeilOp::Delta, p, k).apply(one), p + 1, k);
        SparseMatrix rhs = evaluate(one, p, k);
        rhs = D(rhs, p);
        if (!(lhs == rhs)) fail(ck.dg, "rho#(del " + w_.word_name(u) + ") != D rho#(" + w_.word_name(u) + ")");
      }
      for (const auto& v : w_.relations(Flavor::Coeff, p, k).basis())
        for (const auto& col : evaluate(v, p, k).column_list())
          if (!coeff_rel_.contains(col)) {
            fail(ck.h_linear, "coefficient relation in block (" + std::to_string(p) + "," + std::to_string(k) +
                                  ") not sent to M (x)_H R relations");
            break;
          }
    }
  return ck;
}

// ----- cyclic cohomology of A

AlgebraCyclic::AlgebraCyclic(const AlgebraModel& a, std::size_t top) {
  const Bundle& g = ground_bundle();
  alg_ = a.as_algebra();
  ma_.alg = &alg_;
  ma_.h.act.assign(1, {});
  for (std::size_t x = 0; x < a.dim; ++x) ma_.h.act[0].push_back(sv_unit(x));
  mod_ = std::make_shared<const CocyclicModule>(build_algebra_cocyclic(g.hopf, ma_, g.sayd("k"), top + 1));
  for (std::size_t q = 0; q <= top + 1; ++q)
    if (mod_->dims[q] != ipow(a.dim, q + 1))
      throw Error(ErrorCode::Internal, "cochains of A are not the full dual of A^{(x) q+1}");
  cc_ = std::make_unique<CyclicCohomology>(mod_, top);
}

bool AlgebraCyclic::closed(const SVec& phi, std::size_t q) const { return mod_->b(q).apply(phi).empty(); }

bool AlgebraCyclic::cyclic(const SVec& phi, std::size_t q) const { return mod_->lambda(q).apply(phi) == phi; }

SVec AlgebraCyclic::hc_class(const SVec& phi, std::size_t q) const {
  if (!cyclic(phi, q)) throw Error(ErrorCode::NotACocycle, "cochain is not cyclic", phi);
  if (!closed(phi, q)) throw Error(ErrorCode::NotACocycle, "cochain is not closed", phi);
  return cc_->hc_class_of_lambda_cocycle(phi, q);
}

// ----- instance

PairingInstance::PairingInstance(const HopfAlgebra& h, const ModuleCoalgebra& c, const ModuleAlgebra& a,
                                 const SAYDModule& m, std::size_t n_max, std::size_t max_degree, WeilOptions opt)
    : h_(h), c_(c), a_(a), m_(m), D_(max_degree), ext_(build_extension(h, a, n_max)) {
  if (a.c_source != c.coalg) throw Error(ErrorCode::InputShape, "the algebra is not acted on by the selected coalgebra");
  w_ = std::make_unique<WeilAlgebra>(h, c, m, max_degree, opt);
  bar_ = bar_and_cotrace(ext_.a, max_degree + 1);
  rs_ = std::make_unique<RhoSharp>(h, ext_, *w_, m, bar_);
  hca_ = std::make_unique<AlgebraCyclic>(ext_.a, max_degree);
  cmod_ = std::make_shared<const CocyclicModule>(build_coalgebra_cocyclic(h, c, m, max_degree));
  hcc_ = std::make_unique<CyclicCohomology>(cmod_, max_degree - 1);
}

void PairingInstance::refresh() { rs_ = std::make_unique<RhoSharp>(h_, ext_, *w_, m_, bar_); }

CupResult PairingInstance::finish(const std::vector<std::pair<SVec, std::size_t>>& raws, std::size_t p,
                                  const MTrace& tau,
                                  const std::vector<std::pair<std::size_t, std::size_t>>& rel_blocks) const {
  auto value = [&](const SVec& raw, std::size_t k) {
    Accum out;
    SparseMatrix ev = rs_->evaluate(raw, p, k);
    for (const auto& en : ev.entries()) {
      Scalar t = sv_get(tau.functional, en.row);
      if (t != 0) out.add(en.col, t * en.val);
    }
    return bar_.norm.at(p).transpose().apply(out.take());
  };
  CupResult r;
  r.degree = p - 1;
  Accum acc;
  for (const auto& [raw, k] : raws) acc.add(value(raw, k));
  r.cochain = acc.take();
  r.well_defined = true;
  for (const auto& [pp, k] : rel_blocks)
    for (const auto& v : w_->relations(Flavor::Nat, pp, k).basis())
      if (!value(v, k).empty()) {
        r.well_defined = false;
        break;
      }
  r.closed = hca_->closed(r.cochain, p - 1);
  if (r.closed && hca_->cyclic(r.cochain, p - 1)) r.hc_class = hca_->hc_class(r.cochain, p - 1);
  return r;
}

CupResult PairingInstance::cup_even(const SVec& x, std::size_t n, std::size_t p, const MTrace& tau) const {
  if (tau.odd || tau.order != n) throw Error(ErrorCode::TraceInvalid, "cup_even needs an even trace of order " + std::to_string(n));
  validate_trace(h_, ext_, m_, tau);
  BlockComplex tc = tower_complex(*w_, n);
  if (!tc.cohomology(p).is_cycle(x)) throw Error(ErrorCode::NotACocycle, "not a cocycle of W_n nat", x);
  std::vector<std::pair<SVec, std::size_t>> raws;
  std::vector<std::pair<std::size_t, std::size_t>> blocks;
  for (auto k : tc.ks(p)) {
    raws.push_back({w_->quotient(Flavor::Nat, p, k).lift(tc.component(x, p, k)), k});
    blocks.push_back({p, k});
  }
  return finish(raws, p, tau, blocks);
}

CupResult PairingInstance::cup_odd(const SVec& x, std::size_t n, std::size_t p, const MTrace& tau) const {
  if (!tau.odd || tau.order != n) throw Error(ErrorCode::TraceInvalid, "cup_odd needs an odd trace of order " + std::to_string(n));
  validate_trace(h_, ext_, m_, tau);
  BlockComplex ic = ideal_complex(*w_, n + 1);
  if (!ic.cohomology(p).is_cycle(x)) throw Error(ErrorCode::NotACocycle, "not a cocycle of I_{n+1} nat", x);
  std::vector<std::pair<SVec, std::size_t>> raws;
  std::vector<std::pair<std::size_t, std::size_t>> blocks;
  for (auto k : ic.ks(p)) {
    raws.push_back({w_->quotient(Flavor::Nat, p, k).lift(ic.component(x, p, k)), k});
    blocks.push_back({p, k});
  }
  return finish(raws, p, tau, blocks);
}

SparseMatrix PairingInstance::cup_matrix(std::size_t n, std::size_t p, const MTrace& tau) const {
  Cohomology hc = tower_complex(*w_, n).cohomology(p);
  std::vector<SVec> cols;
  for (const auto& x : hc.reps()) {
    CupResult r = cup_even(x, n, p, tau);
    if (!r.closed) throw Error(ErrorCode::Internal, "cup output not closed", r.cochain);
    cols.push_back(r.hc_class);
  }
  return SparseMatrix::from_columns(hca_->cc().hc(p - 1).dim(), cols);
}

SVec PairingInstance::characteristic_map(const SVec& xi, std::size_t q, const MTrace& tau) const {
  std::size_t p = q + 1, nr = ext_.r.dim, ad = ext_.a.dim, dc = w_->coalgebra_dim();
  const auto& ws = w_->words(p, 0);
  std::map<std::size_t, std::pair<std::size_t, std::size_t>> back;
  for (std::size_t mm = 0; mm < m_.dim; ++mm)
    for (std::size_t i = 0; i < ws.size(); ++i) back[w_->index(mm, p, 0, ws[i])] = {mm, i};
  Accum out;
  std::size_t ncols = ipow(ad, p);
  for (const auto& [idx, c] : xi) {
    auto [mm, wi] = back.at(idx);
    const Word& u = ws[wi];
    for (std::size_t col = 0; col < ncols; ++col) {
      std::vector<std::size_t> as(p);
      for (std::size_t i = p, t = col; i-- > 0; t /= ad) as[i] = t % ad;
      SVec prod = sv_unit(ext_.a.unit);
      for (std::size_t i = 0; i < p; ++i) {
        if (u[i] >= dc) throw Error(ErrorCode::InputShape, "characteristic map takes i-words only");
        prod = ext_.a.mul(prod, ext_.a.c->act.at(u[i]).at(as[i]));
      }
      Scalar v = 0;
      for (const auto& [ri, rc] : ext_.rho.apply(prod)) v += rc * sv_get(tau.functional, mm * nr + ri);
      if (v != 0) out.add(col, c * v);
    }
  }
  return out.take();
}

}  // namespace hopfcyc
