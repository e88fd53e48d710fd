#include "hopfcyc/forms.hpp"

namespace hopfcyc {

namespace {

constexpr std::size_t npos = static_cast<std::size_t>(-1);

std::size_t rank_of(const SparseMatrix& m) { return m.rows() && m.cols() ? rank(m) : 0; }

SparseMatrix columns_from(std::size_t rows, const std::vector<SVec>& cols) { return SparseMatrix::from_columns(rows, cols); }

std::vector<std::size_t> at_least(const std::vector<std::size_t>& w, std::size_t min_weight) {
  std::vector<std::size_t> r;
  for (std::size_t i = 0; i < w.size(); ++i)
    if (w[i] >= min_weight) r.push_back(i);
  return r;
}

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

SVec twist_of(const OmegaBundle& w, std::size_t hb, std::size_t x) {
  return w.algebra().h.apply(w.hopf().Sinv.at(hb), sv_unit(x));
}

}  // namespace

// ----- small complex

SmallComplex::SmallComplex(const OmegaBundle& w, const FreeAlgebra& f) : w_(w), f_(f) {
  if (w.K() < 2) throw Error(ErrorCode::DegreeOutOfRange, "small complex needs Omega up to degree 2");
  for (const auto& k : w.keys(1))
    if (f.words.at(k[2]).size() == 1) keys1_.push_back(k);
  for (std::size_t i = 0; i < keys1_.size(); ++i) pos1_[keys1_[i]] = i;
  q1_ = Quotient(keys1_.size(), w.coefficient_span(keys1_));

  std::vector<SVec> inc, gam, ph;
  for (const auto& k : keys1_) inc.push_back(sv_unit(w.index(k)));
  SparseMatrix inc_raw = columns_from(w.dim(1), inc);
  SparseMatrix b_raw = w.raw(FormOp::Bh, 1) * inc_raw;
  auto small = [&](const FormVec& fv) {
    Accum a;
    for (const auto& [k, c] : fv) a.add(pos1_.at(k), c);
    return a.take();
  };
  for (const auto& k : w.keys(1)) ph.push_back(small(phi1_raw(k)));
  for (const auto& k : w.keys(0)) {
    if (k[1] == w.algebra().unit) {
      gam.push_back({});
      continue;
    }
    gam.push_back(small(phi1_raw({k[0], w.algebra().unit, k[1]})));
  }
  SparseMatrix phi_raw = columns_from(keys1_.size(), ph);
  SparseMatrix gam_raw = columns_from(keys1_.size(), gam);
  b_ = induced_map(b_raw, q1_, w.coeff(0));
  incl1_ = induced_map(inc_raw, q1_, w.coeff(1));
  try {
    phi1_ = induced_map(phi_raw, w.coeff(1), q1_);
    gamma_ = induced_map(gam_raw, w.coeff(0), q1_);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::DescentFailure) throw;
    throw Error(ErrorCode::DescentFailure, "phi_1 does not descend to M (x)_H", e.witness());
  }
}

FormVec SmallComplex::phi1_raw(const FormKey& key) const {
  // key (m, f, v1...vn)
  const AlgebraModel& a = w_.algebra();
  const auto& word = f_.words.at(key[2]);
  FormVec r;
  for (std::size_t i = 0; i < word.size(); ++i) {
    std::vector<std::size_t> pre(word.begin(), word.begin() + i), suf(word.begin() + i + 1, word.end());
    std::size_t letter = f_.index({word[i]});
    for (const auto& [hm, ch] : w_.module().coact(sv_unit(key[0]))) {
      SVec y = twist_of(w_, hm[0], f_.index(suf));
      SVec prod = a.mul(a.mul(y, sv_unit(key[1])), sv_unit(f_.index(pre)));
      for (const auto& [c, s] : prod) form_add(r, {hm[1], c, letter}, ch * s);
    }
  }
  return r;
}

FormVec SmallComplex::h_raw(const FormKey& key) const {
  auto it = memo_.find(key);
  if (it != memo_.end()) return it->second;
  const AlgebraModel& a = w_.algebra();
  std::size_t n = key.size() - 2;
  const auto& word = f_.words.at(key.back());
  FormVec r;
  if (word.size() >= 2) {
    std::size_t v = f_.index({word.back()});
    std::size_t fn = f_.index(std::vector<std::size_t>(word.begin(), word.end() - 1));
    for (const auto& [hm, ch] : w_.module().coact(sv_unit(key[0])))
      for (const auto& [c, s] : a.mul(twist_of(w_, hm[0], v), sv_unit(key[1]))) {
        FormKey k2(key);
        k2[0] = hm[1];
        k2[1] = c;
        k2.back() = fn;
        for (const auto& [t, ct] : h_raw(k2)) form_add(r, t, ch * s * ct);
      }
    FormKey k3(key);
    k3.back() = fn;
    k3.push_back(v);
    form_add(r, k3, n % 2 ? -1 : 1);
  }
  memo_.emplace(key, r);
  return r;
}

SparseMatrix SmallComplex::h(std::size_t n) const {
  if (n + 1 > w_.K()) throw Error(ErrorCode::DegreeOutOfRange, "h_n needs Omega^{n+1}");
  auto it = h_.find(n);
  if (it != h_.end()) return it->second;
  SparseMatrix m;
  if (n == 0) {
    m = SparseMatrix(w_.coeff(1).dim(), w_.coeff(0).dim());
  } else {
    std::vector<SVec> cols;
    for (const auto& k : w_.keys(n)) {
      Accum acc;
      for (const auto& [t, c] : h_raw(k)) {
        std::size_t i = w_.index(t);
        if (i == npos) throw Error(ErrorCode::Internal, "h leaves the window");
        acc.add(i, c);
      }
      cols.push_back(acc.take());
    }
    try {
      m = induced_map(columns_from(w_.dim(n + 1), cols), w_.coeff(n), w_.coeff(n + 1));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::DescentFailure) throw;
      throw Error(ErrorCode::DescentFailure, "h_" + std::to_string(n) + " does not descend to M (x)_H", e.witness());
    }
  }
  return h_.emplace(n, m).first->second;
}

bool SmallComplex::homotopy_holds(std::string* witness) const {
  for (std::size_t n = 1; n + 1 <= w_.K(); ++n) {
    SparseMatrix lhs = w_.op(FormOp::Bh, n + 1) * h(n);
    lhs = lhs + h(n - 1) * w_.op(FormOp::Bh, n);
    SparseMatrix rhs = SparseMatrix::identity(w_.coeff(n).dim());
    if (n == 1) rhs = rhs - incl1_ * phi1_;
    if (!(lhs == rhs)) {
      if (witness) *witness = "degree " + std::to_string(n);
      return false;
    }
  }
  return true;
}

bool SmallComplex::phi_chain_map() const {
  return w_.op(FormOp::Bh, 1) == b_ * phi1_ && (phi1_ * w_.op(FormOp::Bh, 2)).is_zero();
}

bool SmallComplex::phi_incl_identity() const { return phi1_ * incl1_ == SparseMatrix::identity(q1_.dim()); }

bool SmallComplex::gamma_bicomplex() const { return (b_ * gamma_).is_zero() && (gamma_ * b_).is_zero(); }

SparseMatrix SmallComplex::to_x() const {
  std::vector<SVec> inc;
  for (const auto& k : keys1_) inc.push_back(sv_unit(w_.index(k)));
  return induced_map(columns_from(w_.dim(1), inc), q1_, w_.nat(1));
}

std::vector<std::size_t> SmallComplex::weights1() const {
  std::vector<std::size_t> r;
  for (auto f : q1_.free_coords()) r.push_back(w_.weight(keys1_[f]));
  return r;
}

std::vector<std::size_t> SmallComplex::hochschild_dims(std::size_t min_weight) const {
  auto k0 = at_least(weights0(), min_weight), k1 = at_least(weights1(), min_weight);
  std::size_t rb = rank_of(submatrix(b_, k0, k1));
  return {k0.size() - rb, k1.size() - rb};
}

std::vector<std::size_t> SmallComplex::cyclic_dims(std::size_t nmax, std::size_t min_weight) const {
  auto k0 = at_least(weights0(), min_weight), k1 = at_least(weights1(), min_weight);
  std::size_t rb = rank_of(submatrix(b_, k0, k1)), rg = rank_of(submatrix(gamma_, k1, k0));
  std::vector<std::size_t> r;
  for (std::size_t n = 0; n <= nmax; ++n) {
    if (n == 0)
      r.push_back(k0.size() - rb);
    else if (n % 2 == 0)
      r.push_back(k0.size() - rg - rb);
    else
      r.push_back(k1.size() - rb - rg);
  }
  return r;
}

// ----- I-adic filtration

Subspace ideal_power(const AlgebraModel& a, const std::vector<SVec>& ideal, std::size_t k) {
  if (k == 0) return Subspace::whole(a.dim);
  Subspace cur = Subspace::span(a.dim, ideal);
  for (std::size_t j = 1; j < k; ++j) {
    Subspace nxt(a.dim);
    for (const auto& x : cur.basis())
      for (const auto& y : ideal) {
        SVec p = a.mul(x, y);
        if (!p.empty()) nxt.insert(p);
      }
    cur = std::move(nxt);
  }
  return cur;
}

XFiltration x_filtration(const OmegaBundle& w, const std::vector<SVec>& ideal, std::size_t p) {
  const AlgebraModel& a = w.algebra();
  const SAYDModule& m = w.module();
  Subspace I = Subspace::span(a.dim, ideal);
  for (const auto& x : I.basis()) {
    for (std::size_t j = 0; j < a.dim; ++j) {
      if (!I.contains(a.mul(x, sv_unit(j))) || !I.contains(a.mul(sv_unit(j), x)))
        throw Error(ErrorCode::InputShape, "ideal basis is not a two-sided ideal", x);
    }
    for (std::size_t hb = 0; hb < w.hopf().dim(); ++hb)
      if (!I.contains(a.h.apply(hb, x)))
        throw Error(ErrorCode::DescentFailure, "ideal is not H-stable", a.h.apply(hb, x));
  }
  std::size_t n = p / 2;
  bool odd = p % 2;
  auto pow = [&](std::size_t k) { return ideal_power(a, ideal, k).basis(); };

  auto raw0 = [&](std::size_t mm, const SVec& x) {
    Accum acc;
    for (const auto& [i, c] : x) {
      std::size_t idx = w.index({mm, i});
      if (idx != npos) acc.add(idx, c);
    }
    return acc.take();
  };
  // m (x) x dy, terms outside the window dropped
  auto raw1 = [&](std::size_t mm, const SVec& x, const SVec& y) {
    Accum acc;
    for (const auto& [i, ci] : x)
      for (const auto& [j, cj] : y) {
        if (j == a.unit) continue;
        std::size_t idx = w.index({mm, i, j});
        if (idx != npos) acc.add(idx, ci * cj);
      }
    return acc.take();
  };

  const Quotient& q0 = w.coeff(0);
  const Quotient& q1 = w.nat(1);
  XFiltration r;
  r.p = p;
  r.f0 = Subspace(q0.dim());
  r.f1 = Subspace(q1.dim());
  auto put0 = [&](const SVec& v) {
    SVec q = q0.project(v);
    if (!q.empty()) r.f0.insert(q);
  };
  auto put1 = [&](const SVec& v) {
    SVec q = q1.project(v);
    if (!q.empty()) r.f1.insert(q);
  };
  auto top = pow(n + 1);
  for (std::size_t mm = 0; mm < m.dim; ++mm)
    for (const auto& x : top) put0(raw0(mm, x));
  if (odd) {
    for (std::size_t mm = 0; mm < m.dim; ++mm) {
      for (const auto& x : top)
        for (std::size_t j = 0; j < a.dim; ++j) put1(raw1(mm, x, sv_unit(j)));
      for (const auto& x : pow(n))
        for (const auto& y : I.basis()) put1(raw1(mm, x, y));
    }
  } else {
    auto low = pow(n);
    for (std::size_t mm = 0; mm < m.dim; ++mm)
      for (const auto& x : low) {
        for (std::size_t j = 0; j < a.dim; ++j) {
          // [m (x) x, r] = m (x) x r - m0 (x) S^{-1}(m-1)(r) x
          SVec g = raw0(mm, a.mul(x, sv_unit(j)));
          for (const auto& [hm, ch] : m.coact(sv_unit(mm)))
            g = sv_axpy(g, -ch, raw0(hm[1], a.mul(twist_of(w, hm[0], j), x)));
          put0(g);
          put1(raw1(mm, x, sv_unit(j)));
        }
      }
  }
  SuperComplex x = x_complex(w);
  Quotient Q0(q0.dim(), r.f0), Q1(q1.dim(), r.f1);
  SuperComplex& s = r.quotient;
  s.dim0 = Q0.dim();
  s.dim1 = Q1.dim();
  try {
    s.d0 = induced_map(x.d0, Q0, Q1);
    s.d1 = induced_map(x.d1, Q1, Q0);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::DescentFailure) throw;
    throw Error(ErrorCode::DescentFailure, "filtration step " + std::to_string(p) + " is not a subcomplex",
                e.witness());
  }
  for (auto f : Q0.free_coords()) s.weight0.push_back(x.weight0[f]);
  for (auto f : Q1.free_coords()) s.weight1.push_back(x.weight1[f]);
  return r;
}

// ----- bar construction

std::size_t BarBundle::index(const std::vector<std::size_t>& a) const {
  std::size_t i = 0;
  for (auto x : a) i = i * adim + x;
  return i;
}

BarBundle bar_and_cotrace(const AlgebraModel& a, std::size_t cap) {
  BarBundle bb;
  bb.cap = cap;
  bb.adim = a.dim;
  bb.dims.assign(cap + 1, 0);
  bb.codiff.resize(cap + 1);
  bb.t.resize(cap + 1);
  bb.norm.resize(cap + 1);
  bb.natural.resize(cap + 1);
  for (std::size_t p = 1; p <= cap; ++p) {
    std::size_t n = 1;
    for (std::size_t i = 0; i < p; ++i) n *= a.dim;
    bb.dims[p] = n;
  }
  auto decode = [&](std::size_t idx, std::size_t p) {
    std::vector<std::size_t> v(p);
    for (std::size_t i = p; i-- > 0;) {
      v[i] = idx % a.dim;
      idx /= a.dim;
    }
    return v;
  };
  for (std::size_t p = 1; p <= cap; ++p) {
    std::vector<SVec> tc, dc;
    for (std::size_t c = 0; c < bb.dims[p]; ++c) {
      auto v = decode(c, p);
      std::vector<std::size_t> r{v.back()};
      r.insert(r.end(), v.begin(), v.end() - 1);
      tc.push_back(sv_unit(bb.index(r), (p - 1) % 2 ? -1 : 1));
      if (p >= 2) {
        Accum acc;
        for (std::size_t i = 0; i + 1 < p; ++i)
          for (const auto& [x, s] : a.mu.at(v[i]).at(v[i + 1])) {
            std::vector<std::size_t> u(v.begin(), v.begin() + i);
            u.push_back(x);
            u.insert(u.end(), v.begin() + i + 2, v.end());
            acc.add(bb.index(u), i % 2 ? -s : s);
          }
        dc.push_back(acc.take());
      }
    }
    bb.t[p] = SparseMatrix::from_columns(bb.dims[p], tc);
    if (p >= 2) bb.codiff[p] = SparseMatrix::from_columns(bb.dims[p - 1], dc);
    SparseMatrix sum = SparseMatrix::identity(bb.dims[p]), pw = sum;
    for (std::size_t j = 1; j < p; ++j) {
      pw = bb.t[p] * pw;
      sum = sum + pw;
    }
    bb.norm[p] = sum;
    bb.natural[p] = Subspace::kernel(SparseMatrix::identity(bb.dims[p]) - bb.t[p]);
  }
  return bb;
}

}  // namespace hopfcyc
