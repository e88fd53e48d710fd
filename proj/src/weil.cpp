#include "hopfcyc/weil.hpp"

#include <cctype>
#include <functional>

namespace hopfcyc {

namespace {

using Emit = std::function<void(std::size_t, const Word&, const Scalar&)>;

Word cat(const Word& a, const Word& b) {
  Word r = a;
  r.insert(r.end(), b.begin(), b.end());
  return r;
}

Word slice(const Word& w, std::size_t from, std::size_t to) { return Word(w.begin() + from, w.begin() + to); }

int koszul(std::size_t a) { return a % 2 ? -1 : 1; }

}  // namespace

const char* flavor_name(Flavor f) {
  switch (f) {
    case Flavor::Raw: return "raw";
    case Flavor::Coeff: return "coeff";
    case Flavor::Nat: return "nat";
    case Flavor::Hat: return "hat";
    case Flavor::X: return "x";
  }
  return "?";
}

const char* op_name(WeilOp o) {
  switch (o) {
    case WeilOp::D: return "d";
    case WeilOp::Delta: return "delta";
    case WeilOp::T: return "t";
    case WeilOp::Norm: return "N";
    case WeilOp::H: return "H";
    case WeilOp::Hnorm: return "H'";
    case WeilOp::Kb: return "b";
    case WeilOp::Kappa: return "kappa";
    case WeilOp::Bt: return "b_t";
  }
  return "?";
}

std::size_t letter_count(const Word& w) { return w.size(); }

WeilAlgebra::WeilAlgebra(const HopfAlgebra& h, const ModuleCoalgebra& c, const SAYDModule& m, std::size_t max_degree,
                         WeilOptions opt)
    : h_(h), c_(c), m_(m), D_(max_degree), dc_(c.coalg->dim), dm_(m.dim), opt_(opt) {
  if (dc_ == 0 || dm_ == 0) throw Error(ErrorCode::InputShape, "empty coalgebra or module");
  if (2 * dc_ > 65535) throw Error(ErrorCode::NotSupported, "coalgebra too large for the word encoding");
}

std::size_t WeilAlgebra::degree(const Word& w, std::size_t dc) {
  std::size_t d = 0;
  for (auto x : w) d += x < dc ? 1 : 2;
  return d;
}

std::size_t WeilAlgebra::w_count(const Word& w, std::size_t dc) {
  std::size_t k = 0;
  for (auto x : w) k += x >= dc;
  return k;
}

const WeilAlgebra::Block& WeilAlgebra::block(std::size_t p, std::size_t k) const {
  if (!valid(p, k))
    throw Error(ErrorCode::DegreeOutOfRange,
                "block (" + std::to_string(p) + "," + std::to_string(k) + ") outside max degree " + std::to_string(D_));
  auto key = std::make_pair(p, k);
  auto it = blocks_.find(key);
  if (it != blocks_.end()) return it->second;
  Block b;
  Word cur;
  std::function<void(std::size_t, std::size_t)> gen = [&](std::size_t ri, std::size_t rw) {
    if (ri == 0 && rw == 0) {
      b.pos.emplace(cur, b.words.size());
      b.words.push_back(cur);
      return;
    }
    for (std::size_t code = 0; code < 2 * dc_; ++code) {
      bool isw = code >= dc_;
      if (isw ? rw == 0 : ri == 0) continue;
      cur.push_back(static_cast<std::uint16_t>(code));
      gen(ri - !isw, rw - isw);
      cur.pop_back();
    }
  };
  gen(p - 2 * k, k);
  return blocks_.emplace(key, std::move(b)).first->second;
}

const std::vector<Word>& WeilAlgebra::words(std::size_t p, std::size_t k) const { return block(p, k).words; }

std::size_t WeilAlgebra::dim(std::size_t p, std::size_t k) const { return dm_ * block(p, k).words.size(); }

std::size_t WeilAlgebra::index(std::size_t m, std::size_t p, std::size_t k, const Word& w) const {
  const Block& b = block(p, k);
  auto it = b.pos.find(w);
  if (it == b.pos.end()) throw Error(ErrorCode::Internal, "word not in block");
  return m * b.words.size() + it->second;
}

SVec WeilAlgebra::unit(const Word& w, std::size_t m) const {
  return sv_unit(index(m, degree(w, dc_), w_count(w, dc_), w));
}

std::string WeilAlgebra::word_name(const Word& w) const {
  std::string s;
  for (auto x : w) {
    s += x < dc_ ? 'i' : 'w';
    if (dc_ > 1) s += std::to_string(x < dc_ ? x : x - dc_);
  }
  return s;
}

Word WeilAlgebra::word_from(const std::string& s) const {
  Word w;
  for (std::size_t i = 0; i < s.size();) {
    char ch = s[i++];
    if (ch != 'i' && ch != 'w') throw Error(ErrorCode::ParseError, "bad letter in word '" + s + "'");
    std::size_t c = 0;
    std::size_t j = i;
    while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) c = c * 10 + (s[j++] - '0');
    i = j;
    if (c >= dc_) throw Error(ErrorCode::ParseError, "letter index out of range in '" + s + "'");
    w.push_back(static_cast<std::uint16_t>(ch == 'i' ? c : dc_ + c));
  }
  return w;
}

std::map<Word, Scalar> WeilAlgebra::act_word(const SVec& hv, const Word& w) const {
  std::map<Word, Scalar> out;
  if (w.empty()) {
    Scalar e = h_.eps(hv);
    if (e != 0) out[w] = e;
    return out;
  }
  for (const auto& [hb, hc] : hv) {
    for (const auto& [key, kc] : h_.coalg.iterated_coproduct(sv_unit(hb), w.size() - 1)) {
      std::vector<SVec> f;
      for (std::size_t j = 0; j < w.size(); ++j) {
        std::size_t c = w[j] < dc_ ? w[j] : w[j] - dc_;
        f.push_back(c_.h.act.at(key[j]).at(c));
      }
      Word cur(w.size());
      std::function<void(std::size_t, Scalar)> rec = [&](std::size_t j, Scalar acc) {
        if (j == w.size()) {
          Scalar& s = out[cur];
          s += acc;
          s.canonicalize();
          return;
        }
        std::uint16_t base = w[j] < dc_ ? 0 : static_cast<std::uint16_t>(dc_);
        for (const auto& [c2, v] : f[j]) {
          cur[j] = static_cast<std::uint16_t>(base + c2);
          rec(j + 1, acc * v);
        }
      };
      rec(0, hc * kc);
    }
  }
  for (auto it = out.begin(); it != out.end();) it = it->second == 0 ? out.erase(it) : std::next(it);
  return out;
}

std::vector<std::pair<std::pair<std::size_t, Word>, Scalar>> WeilAlgebra::kb_terms(std::size_t m, const Word& w) const {
  auto key = std::make_pair(m, w);
  auto it = kb_memo_.find(key);
  if (it != kb_memo_.end()) return it->second;
  std::map<std::pair<std::size_t, Word>, Scalar> acc;
  auto add = [&](std::size_t mm, const Word& u, const Scalar& c) {
    Scalar& s = acc[{mm, u}];
    s += c;
    s.canonicalize();
  };
  std::size_t j = w.size();
  while (j > 0 && w[j - 1] < dc_) --j;
  if (j > 0) {
    std::size_t pos = j - 1;
    Word om = slice(w, 0, pos);
    Word x = slice(w, pos + 1, w.size());
    Word a = cat(Word{static_cast<std::uint16_t>(w[pos] - dc_)}, x);
    std::size_t dom = degree(om, dc_), da = a.size();
    // b(m om da) = (-1)^|om| (m om a - (-1)^{|a||om|} m0 S^-1(m-1)(a) om)
    int s0 = koszul(dom);
    add(m, cat(om, a), s0);
    for (const auto& [hb, m2, c] : m_.coaction.at(m))
      for (const auto& [a2, ac] : act_word(h_.Sinv.at(hb), a)) add(m2, cat(a2, om), -s0 * koszul(da * dom) * c * ac);
    // + om i_c dx
    for (std::size_t q = 0; q < x.size(); ++q) {
      Word u = cat(om, Word{static_cast<std::uint16_t>(w[pos] - dc_)});
      Word xx = x;
      xx[q] = static_cast<std::uint16_t>(xx[q] + dc_);
      u = cat(u, xx);
      for (const auto& [kk, c] : kb_terms(m, u)) add(kk.first, kk.second, koszul(q) * c);
    }
  }
  std::vector<std::pair<std::pair<std::size_t, Word>, Scalar>> out;
  for (auto& [k2, c] : acc)
    if (c != 0) out.emplace_back(k2, c);
  kb_memo_.emplace(key, out);
  return out;
}

std::pair<std::size_t, std::size_t> WeilAlgebra::target(WeilOp op, std::size_t p, std::size_t k) const {
  switch (op) {
    case WeilOp::D: return {p + 1, k + 1};
    case WeilOp::Delta:
    case WeilOp::Bt: return {p + 1, k};
    case WeilOp::H:
    case WeilOp::Hnorm:
    case WeilOp::Kb: return {p - 1, k - 1};
    default: return {p, k};
  }
}

bool WeilAlgebra::has_target(WeilOp op, std::size_t p, std::size_t k) const {
  if (!valid(p, k)) return false;
  switch (op) {
    case WeilOp::H:
    case WeilOp::Hnorm:
    case WeilOp::Kb: return k >= 1;
    case WeilOp::Kappa: return p + 1 <= D_;
    default: {
      auto [p2, k2] = target(op, p, k);
      return valid(p2, k2);
    }
  }
}

const SparseMatrix& WeilAlgebra::raw(WeilOp op, std::size_t p, std::size_t k) const {
  auto key = std::make_tuple(static_cast<int>(op), p, k);
  auto it = ops_.find(key);
  if (it != ops_.end()) return it->second;
  if (!has_target(op, p, k))
    throw Error(ErrorCode::DegreeOutOfRange, std::string(op_name(op)) + " on block (" + std::to_string(p) + "," +
                                                 std::to_string(k) + ") leaves the built range");
  SparseMatrix m = build(op, p, k);
  return ops_.emplace(key, std::move(m)).first->second;
}

SparseMatrix WeilAlgebra::build(WeilOp op, std::size_t p, std::size_t k) const {
  const auto& src = words(p, k);
  std::size_t nsrc = dim(p, k);
  auto [p2, k2] = target(op, p, k);

  if (op == WeilOp::Kappa) {
    SparseMatrix db(nsrc, nsrc);
    if (valid(p + 1, k + 1)) db = raw(WeilOp::Kb, p + 1, k + 1) * raw(WeilOp::D, p, k);
    if (k >= 1) db = db + raw(WeilOp::D, p - 1, k - 1) * raw(WeilOp::Kb, p, k);
    return SparseMatrix::identity(nsrc) - db;
  }
  if (op == WeilOp::Norm) {
    const SparseMatrix& t = raw(WeilOp::T, p, k);
    SparseMatrix acc = SparseMatrix::identity(nsrc), pw = SparseMatrix::identity(nsrc);
    for (std::size_t j = 1; j < p - k; ++j) {
      pw = t * pw;
      acc = acc + pw;
    }
    return acc;
  }
  if (op == WeilOp::Hnorm) return raw(WeilOp::H, p, k).scaled(Scalar(1, static_cast<unsigned long>(p - k)));

  std::size_t ndst = dim(p2, k2);
  std::vector<Entry> ent;
  std::size_t col = 0;
  Emit emit = [&](std::size_t mm, const Word& u, const Scalar& c) {
    if (c != 0) ent.push_back({index(mm, p2, k2, u), col, c});
  };
  // odd derivation given letter images
  auto derivation = [&](std::size_t mm, const Word& w,
                        const std::function<std::vector<std::pair<Word, Scalar>>(std::uint16_t)>& img) {
    std::size_t pre = 0;
    for (std::size_t j = 0; j < w.size(); ++j) {
      int s = koszul(pre);
      for (const auto& [u, c] : img(w[j])) {
        Word r = cat(cat(slice(w, 0, j), u), slice(w, j + 1, w.size()));
        emit(mm, r, s * c);
      }
      pre += letter_deg(w[j]);
    }
  };
  auto d_img = [&](std::uint16_t x) -> std::vector<std::pair<Word, Scalar>> {
    if (x < dc_) return {{Word{static_cast<std::uint16_t>(x + dc_)}, Scalar(1)}};
    return {};
  };
  auto delta_img = [&](std::uint16_t x) {
    std::vector<std::pair<Word, Scalar>> r;
    std::size_t c = x < dc_ ? x : x - dc_;
    auto I = [](std::size_t i) { return static_cast<std::uint16_t>(i); };
    for (const auto& t : c_.coalg->delta.at(c)) {
      if (x < dc_) {
        r.push_back({Word{I(t.i), I(t.j)}, -t.c});
      } else {
        r.push_back({Word{I(t.i + dc_), I(t.j)}, t.c});
        r.push_back({Word{I(t.i), I(t.j + dc_)}, -t.c});
      }
    }
    return r;
  };
  auto h_img = [&](std::uint16_t x) -> std::vector<std::pair<Word, Scalar>> {
    if (x >= dc_) return {{Word{static_cast<std::uint16_t>(x - dc_)}, Scalar(1)}};
    return {};
  };

  std::size_t nw = src.size();
  for (std::size_t mm = 0; mm < dm_; ++mm) {
    for (std::size_t wi = 0; wi < nw; ++wi, ++col) {
      const Word& w = src[wi];
      switch (op) {
        case WeilOp::D: derivation(mm, w, d_img); break;
        case WeilOp::Delta: derivation(mm, w, delta_img); break;
        case WeilOp::H: derivation(mm, w, h_img); break;
        case WeilOp::T: {
          Word x = slice(w, 0, w.size() - 1);
          Word a{w.back()};
          int s = opt_.signed_rel ? koszul(letter_deg(w.back()) * degree(x, dc_)) : 1;
          for (const auto& [hb, m2, c] : m_.coaction.at(mm))
            for (const auto& [a2, ac] : act_word(h_.Sinv.at(hb), a)) emit(m2, cat(a2, x), s * c * ac);
          break;
        }
        case WeilOp::Kb:
          for (const auto& [kk, c] : kb_terms(mm, w)) emit(kk.first, kk.second, c);
          break;
        case WeilOp::Bt: {
          Word x = slice(w, 0, w.size() - 1);
          if (!opt_.literal_bt) {
            // (-1)^|x| m (x) x delta(a), then t below
            int s = koszul(degree(x, dc_));
            for (const auto& [u, c] : delta_img(w.back())) emit(mm, cat(x, u), s * c);
            break;
          }
          // (-1)^|a| m (x) a delta(x), then t below
          int s = koszul(letter_deg(w.back()));
          std::size_t pre = 0;
          for (std::size_t j = 0; j < x.size(); ++j) {
            for (const auto& [u, c] : delta_img(x[j])) {
              Word r = cat(Word{w.back()}, cat(cat(slice(x, 0, j), u), slice(x, j + 1, x.size())));
              emit(mm, r, s * koszul(pre) * c);
            }
            pre += letter_deg(x[j]);
          }
          break;
        }
        default: break;
      }
    }
  }
  SparseMatrix m = SparseMatrix::from_entries(ndst, nsrc, std::move(ent));
  if (op == WeilOp::Bt) return raw(WeilOp::T, p2, k2) * m;
  return m;
}

const Subspace& WeilAlgebra::relations(Flavor f, std::size_t p, std::size_t k) const {
  auto key = std::make_tuple(static_cast<int>(f), p, k);
  auto it = rels_.find(key);
  if (it != rels_.end()) return it->second;
  std::size_t n = dim(p, k);
  Subspace rel(n);
  switch (f) {
    case Flavor::Raw: break;
    case Flavor::Coeff: {
      const auto& ws = words(p, k);
      for (std::size_t hb = 0; hb < h_.dim(); ++hb)
        for (std::size_t mm = 0; mm < dm_; ++mm)
          for (const auto& w : ws) {
            Accum g;
            for (const auto& [m2, c] : m_.right.at(hb).at(mm)) g.add(index(m2, p, k, w), c);
            for (const auto& [u, c] : act_word(sv_unit(hb), w)) g.add(index(mm, p, k, u), -c);
            SVec v = g.take();
            if (!v.empty()) rel.insert(v);
          }
      break;
    }
    case Flavor::Nat: {
      // t has to live on M (x)_H W first
      induced(WeilOp::T, p, k, Flavor::Coeff, Flavor::Coeff);
      rel = relations(Flavor::Coeff, p, k);
      SparseMatrix one_t = SparseMatrix::identity(n) - raw(WeilOp::T, p, k);
      for (const auto& c : one_t.column_list())
        if (!c.empty()) rel.insert(c);
      break;
    }
    case Flavor::X: {
      rel = relations(Flavor::Nat, p, k);
      if (k >= 1 && valid(p - 1, k - 1))
        for (const auto& c : raw(WeilOp::D, p - 1, k - 1).column_list())
          if (!c.empty()) rel.insert(c);
      break;
    }
    case Flavor::Hat: {
      rel = relations(Flavor::Coeff, p, k);
      if (k >= 1 && valid(p - 1, k - 1))
        for (const auto& c : raw(WeilOp::D, p - 1, k - 1).column_list())
          if (!c.empty()) rel.insert(c);
      SparseMatrix one_k = SparseMatrix::identity(n) - raw(WeilOp::Kappa, p, k);
      for (const auto& c : one_k.column_list())
        if (!c.empty()) rel.insert(c);
      break;
    }
  }
  return rels_.emplace(key, std::move(rel)).first->second;
}

const Quotient& WeilAlgebra::quotient(Flavor f, std::size_t p, std::size_t k) const {
  auto key = std::make_tuple(static_cast<int>(f), p, k);
  auto it = quots_.find(key);
  if (it != quots_.end()) return it->second;
  Quotient q(dim(p, k), relations(f, p, k));
  return quots_.emplace(key, std::move(q)).first->second;
}

SparseMatrix WeilAlgebra::induced(WeilOp op, std::size_t p, std::size_t k, Flavor src, Flavor dst) const {
  auto [p2, k2] = target(op, p, k);
  try {
    return induced_map(raw(op, p, k), quotient(src, p, k), quotient(dst, p2, k2));
  } catch (const Error& e) {
    if (e.code() != ErrorCode::DescentFailure) throw;
    throw Error(ErrorCode::DescentFailure,
                std::string(op_name(op)) + " on block (" + std::to_string(p) + "," + std::to_string(k) + ") does not descend from " +
                    flavor_name(src) + " to " + flavor_name(dst),
                e.witness());
  }
}

SparseMatrix WeilAlgebra::change(std::size_t p, std::size_t k, Flavor src, Flavor dst) const {
  return induced_map(SparseMatrix::identity(dim(p, k)), quotient(src, p, k), quotient(dst, p, k));
}

const Bundle& ground_bundle() {
  static const Bundle b = load_structure(R"({
  "schema_version": 1,
  "hopf": {"name": "k", "dim": 1, "names": ["1"], "mu": [[0, 0, 0, "1"]], "unit": ["1"],
           "delta": [[[0, 0, "1"]]], "counit": ["1"], "antipode": [["1"]], "antipode_inv": [["1"]]},
  "coalgebras": [{"name": "point", "dim": 1, "names": ["e"], "delta": [[[0, 0, "1"]]], "counit": ["1"]}],
  "sayd_modules": [{"name": "k", "dim": 1, "right_action": [[["1"]]], "coaction": [[[0, 0, "1"]]]}],
  "select": {"coalgebra": "point", "sayd": "k"}
})");
  return b;
}

}  // namespace hopfcyc
