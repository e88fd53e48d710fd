#include "hopfcyc/exactla.hpp"

#include <algorithm>
#include <set>

namespace hopfcyc {

const char* error_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::InputShape: return "INPUT_SHAPE";
    case ErrorCode::DimensionMismatch: return "DIMENSION_MISMATCH";
    case ErrorCode::Inconsistent: return "INCONSISTENT";
    case ErrorCode::DescentFailure: return "DESCENT_FAILURE";
    case ErrorCode::IdentityFailure: return "IDENTITY_FAILURE";
    case ErrorCode::Unstabilized: return "UNSTABILIZED";
    case ErrorCode::DegreeOutOfRange: return "DEGREE_OUT_OF_RANGE";
    case ErrorCode::NotACocycle: return "NOT_A_COCYCLE";
    case ErrorCode::TraceInvalid: return "TRACE_INVALID";
    case ErrorCode::CotraceInvalid: return "COTRACE_INVALID";
    case ErrorCode::ActionExtensionFailure: return "ACTION_EXTENSION_FAILURE";
    case ErrorCode::CurvatureEscape: return "CURVATURE_ESCAPE";
    case ErrorCode::ParseError: return "PARSE_ERROR";
    case ErrorCode::UnresolvedReference: return "UNRESOLVED_REFERENCE";
    case ErrorCode::NotSupported: return "NOT_SUPPORTED";
    case ErrorCode::Internal: return "INTERNAL";
  }
  return "UNKNOWN";
}

Scalar parse_scalar(const std::string& s0) {
  std::string s;
  for (char ch : s0)
    if (ch != ' ') s += ch;
  if (s.empty()) throw Error(ErrorCode::ParseError, "empty scalar");
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  bool slash = false, digit = false;
  for (std::size_t k = i; k < s.size(); ++k) {
    if (s[k] == '/') {
      if (slash || !digit) throw Error(ErrorCode::ParseError, "bad scalar '" + s0 + "'");
      slash = true;
      digit = false;
    } else if (s[k] >= '0' && s[k] <= '9') {
      digit = true;
    } else {
      throw Error(ErrorCode::ParseError, "bad scalar '" + s0 + "'");
    }
  }
  if (!digit) throw Error(ErrorCode::ParseError, "bad scalar '" + s0 + "'");
  if (s[0] == '+') s = s.substr(1);
  Scalar q;
  q.set_str(s, 10);
  if (q.get_den() == 0) throw Error(ErrorCode::ParseError, "zero denominator in '" + s0 + "'");
  q.canonicalize();
  return q;
}

std::string scalar_str(const Scalar& x) { return x.get_str(); }

SVec sv_unit(std::size_t i, const Scalar& c) {
  if (c == 0) return {};
  return {{i, c}};
}

SVec sv_axpy(const SVec& y, const Scalar& a, const SVec& x) {
  if (a == 0) return y;
  SVec r;
  r.reserve(y.size() + x.size());
  std::size_t i = 0, j = 0;
  while (i < y.size() || j < x.size()) {
    if (j == x.size() || (i < y.size() && y[i].first < x[j].first)) {
      r.push_back(y[i++]);
    } else if (i == y.size() || x[j].first < y[i].first) {
      r.emplace_back(x[j].first, a * x[j].second);
      ++j;
    } else {
      Scalar s = y[i].second + a * x[j].second;
      if (s != 0) r.emplace_back(y[i].first, s);
      ++i;
      ++j;
    }
  }
  return r;
}

SVec sv_add(const SVec& a, const SVec& b) { return sv_axpy(a, 1, b); }

SVec sv_scale(const SVec& v, const Scalar& a) {
  if (a == 0) return {};
  SVec r = v;
  for (auto& [i, c] : r) c *= a;
  return r;
}

Scalar sv_get(const SVec& v, std::size_t i) {
  auto it = std::lower_bound(v.begin(), v.end(), i,
                             [](const auto& p, std::size_t k) { return p.first < k; });
  if (it != v.end() && it->first == i) return it->second;
  return 0;
}

Scalar sv_dot(const SVec& a, const SVec& b) {
  Scalar s = 0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i].first < b[j].first) ++i;
    else if (b[j].first < a[i].first) ++j;
    else s += a[i++].second * b[j++].second;
  }
  return s;
}

SVec sv_from_dense(const Vec& v) {
  SVec r;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v[i] != 0) r.emplace_back(i, v[i]);
  return r;
}

Vec sv_to_dense(const SVec& v, std::size_t n) {
  Vec r(n, Scalar(0));
  for (const auto& [i, c] : v) {
    if (i >= n) throw Error(ErrorCode::DimensionMismatch, "index beyond dimension");
    r[i] = c;
  }
  return r;
}

void Accum::add(std::size_t i, const Scalar& c) {
  if (c == 0) return;
  auto [it, fresh] = m_.emplace(i, c);
  if (!fresh) {
    it->second += c;
    if (it->second == 0) m_.erase(it);
  }
}

void Accum::add(const SVec& v, const Scalar& c) {
  if (c == 0) return;
  for (const auto& [i, x] : v) add(i, x * c);
}

SVec Accum::take() {
  SVec r(m_.begin(), m_.end());
  m_.clear();
  return r;
}

// ---- SparseMatrix

void SparseMatrix::rebuild_ptr() {
  ptr_.assign(rows_ + 1, 0);
  for (const auto& e : e_) ptr_[e.row + 1]++;
  for (std::size_t r = 0; r < rows_; ++r) ptr_[r + 1] += ptr_[r];
}

SparseMatrix SparseMatrix::identity(std::size_t n) {
  std::vector<Entry> e;
  for (std::size_t i = 0; i < n; ++i) e.push_back({i, i, 1});
  return from_entries(n, n, std::move(e));
}

SparseMatrix SparseMatrix::from_entries(std::size_t rows, std::size_t cols, std::vector<Entry> e) {
  for (const auto& x : e)
    if (x.row >= rows || x.col >= cols)
      throw Error(ErrorCode::DimensionMismatch, "matrix entry out of range");
  std::sort(e.begin(), e.end(), [](const Entry& a, const Entry& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  SparseMatrix m(rows, cols);
  for (auto& x : e) {
    if (!m.e_.empty() && m.e_.back().row == x.row && m.e_.back().col == x.col) {
      m.e_.back().val += x.val;
      if (m.e_.back().val == 0) m.e_.pop_back();
    } else if (x.val != 0) {
      m.e_.push_back(std::move(x));
    }
  }
  m.rebuild_ptr();
  return m;
}

SparseMatrix SparseMatrix::from_columns(std::size_t rows, const std::vector<SVec>& cols) {
  std::vector<Entry> e;
  for (std::size_t c = 0; c < cols.size(); ++c)
    for (const auto& [r, v] : cols[c]) e.push_back({r, c, v});
  return from_entries(rows, cols.size(), std::move(e));
}

SparseMatrix SparseMatrix::from_rows(std::size_t cols, const std::vector<SVec>& rows) {
  std::vector<Entry> e;
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (const auto& [c, v] : rows[r]) e.push_back({r, c, v});
  return from_entries(rows.size(), cols, std::move(e));
}

SparseMatrix SparseMatrix::from_dense(const std::vector<Vec>& rows, std::size_t cols) {
  std::vector<Entry> e;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != cols) throw Error(ErrorCode::DimensionMismatch, "ragged dense matrix");
    for (std::size_t c = 0; c < cols; ++c)
      if (rows[r][c] != 0) e.push_back({r, c, rows[r][c]});
  }
  return from_entries(rows.size(), cols, std::move(e));
}

Scalar SparseMatrix::at(std::size_t r, std::size_t c) const {
  auto b = e_.begin() + ptr_[r], en = e_.begin() + ptr_[r + 1];
  auto it = std::lower_bound(b, en, c, [](const Entry& x, std::size_t k) { return x.col < k; });
  if (it != en && it->col == c) return it->val;
  return 0;
}

SVec SparseMatrix::row(std::size_t r) const {
  SVec v;
  for (std::size_t k = ptr_[r]; k < ptr_[r + 1]; ++k) v.emplace_back(e_[k].col, e_[k].val);
  return v;
}

std::vector<SVec> SparseMatrix::row_list() const {
  std::vector<SVec> out(rows_);
  for (const auto& x : e_) out[x.row].emplace_back(x.col, x.val);
  return out;
}

std::vector<SVec> SparseMatrix::column_list() const {
  std::vector<SVec> out(cols_);
  for (const auto& x : e_) out[x.col].emplace_back(x.row, x.val);
  return out;
}

SVec SparseMatrix::column(std::size_t c) const {
  SVec v;
  for (const auto& x : e_)
    if (x.col == c) v.emplace_back(x.row, x.val);
  return v;
}

SparseMatrix SparseMatrix::transpose() const {
  std::vector<Entry> e;
  e.reserve(e_.size());
  for (const auto& x : e_) e.push_back({x.col, x.row, x.val});
  return from_entries(cols_, rows_, std::move(e));
}

SVec SparseMatrix::apply(const SVec& v) const {
  std::vector<Scalar> acc(rows_);
  std::vector<char> hit(rows_, 0);
  for (std::size_t r = 0; r < rows_; ++r) {
    Scalar s = 0;
    std::size_t k = ptr_[r], j = 0;
    while (k < ptr_[r + 1] && j < v.size()) {
      if (e_[k].col < v[j].first) ++k;
      else if (v[j].first < e_[k].col) ++j;
      else s += e_[k++].val * v[j++].second;
    }
    if (s != 0) {
      acc[r] = s;
      hit[r] = 1;
    }
  }
  SVec out;
  for (std::size_t r = 0; r < rows_; ++r)
    if (hit[r]) out.emplace_back(r, acc[r]);
  return out;
}

Vec SparseMatrix::apply(const Vec& v) const {
  if (v.size() != cols_) throw Error(ErrorCode::DimensionMismatch, "apply: vector length");
  Vec out(rows_, Scalar(0));
  for (const auto& x : e_) out[x.row] += x.val * v[x.col];
  return out;
}

SparseMatrix SparseMatrix::operator*(const SparseMatrix& o) const {
  if (cols_ != o.rows_) throw Error(ErrorCode::DimensionMismatch, "matrix product shapes");
  std::vector<Entry> e;
  std::vector<Scalar> acc(o.cols_);
  std::vector<char> hit(o.cols_, 0);
  std::vector<std::size_t> touched;
  for (std::size_t r = 0; r < rows_; ++r) {
    touched.clear();
    for (std::size_t k = ptr_[r]; k < ptr_[r + 1]; ++k) {
      std::size_t mid = e_[k].col;
      for (std::size_t q = o.ptr_[mid]; q < o.ptr_[mid + 1]; ++q) {
        std::size_t c = o.e_[q].col;
        if (!hit[c]) {
          hit[c] = 1;
          acc[c] = 0;
          touched.push_back(c);
        }
        acc[c] += e_[k].val * o.e_[q].val;
      }
    }
    std::sort(touched.begin(), touched.end());
    for (std::size_t c : touched) {
      if (acc[c] != 0) e.push_back({r, c, acc[c]});
      hit[c] = 0;
    }
  }
  return from_entries(rows_, o.cols_, std::move(e));
}

SparseMatrix SparseMatrix::operator+(const SparseMatrix& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw Error(ErrorCode::DimensionMismatch, "matrix sum shapes");
  std::vector<Entry> e = e_;
  e.insert(e.end(), o.e_.begin(), o.e_.end());
  return from_entries(rows_, cols_, std::move(e));
}

SparseMatrix SparseMatrix::operator-(const SparseMatrix& o) const { return *this + o.scaled(-1); }

SparseMatrix SparseMatrix::scaled(const Scalar& a) const {
  if (a == 0) return SparseMatrix(rows_, cols_);
  SparseMatrix m = *this;
  for (auto& x : m.e_) x.val *= a;
  return m;
}

bool SparseMatrix::operator==(const SparseMatrix& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_ || e_.size() != o.e_.size()) return false;
  for (std::size_t k = 0; k < e_.size(); ++k)
    if (e_[k].row != o.e_[k].row || e_[k].col != o.e_[k].col || e_[k].val != o.e_[k].val)
      return false;
  return true;
}

std::vector<Vec> SparseMatrix::to_dense() const {
  std::vector<Vec> d(rows_, Vec(cols_, Scalar(0)));
  for (const auto& x : e_) d[x.row][x.col] = x.val;
  return d;
}

// ---- Echelon

namespace {

// a*x + b*y
ZVec zcomb(const Integer& a, const ZVec& x, const Integer& b, const ZVec& y) {
  ZVec r;
  r.reserve(x.size() + y.size());
  std::size_t i = 0, j = 0;
  Integer t;
  while (i < x.size() || j < y.size()) {
    if (j == y.size() || (i < x.size() && x[i].first < y[j].first)) {
      if (a != 0) r.emplace_back(x[i].first, a * x[i].second);
      ++i;
    } else if (i == x.size() || y[j].first < x[i].first) {
      if (b != 0) r.emplace_back(y[j].first, b * y[j].second);
      ++j;
    } else {
      t = a * x[i].second + b * y[j].second;
      if (t != 0) r.emplace_back(x[i].first, t);
      ++i;
      ++j;
    }
  }
  return r;
}

Integer zget(const ZVec& v, std::size_t i) {
  auto it = std::lower_bound(v.begin(), v.end(), i,
                             [](const auto& p, std::size_t k) { return p.first < k; });
  if (it != v.end() && it->first == i) return it->second;
  return 0;
}

void make_primitive(ZVec& v, ZVec& pay) {
  Integer g = 0;
  for (const auto& [i, c] : v) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
  for (const auto& [i, c] : pay) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
  if (g == 0) return;
  if (!v.empty() && v.front().second < 0) g = -g;
  if (g == 1) return;
  for (auto& [i, c] : v) mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), g.get_mpz_t());
  for (auto& [i, c] : pay) mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), g.get_mpz_t());
}

ZVec clear_denominators(const SVec& v, Integer& L) {
  L = 1;
  for (const auto& [i, c] : v) mpz_lcm(L.get_mpz_t(), L.get_mpz_t(), c.get_den_mpz_t());
  ZVec z;
  z.reserve(v.size());
  for (const auto& [i, c] : v) {
    Integer num = c.get_num() * (L / c.get_den());
    z.emplace_back(i, num);
  }
  return z;
}

}  // namespace

bool Echelon::insert(const SVec& v0) {
  std::size_t id = count_++;
  for (const auto& [i, c] : v0)
    if (i >= n_) throw Error(ErrorCode::DimensionMismatch, "vector index beyond ambient dimension");
  Integer L;
  ZVec v = clear_denominators(v0, L);
  ZVec pay;
  if (track_) pay.emplace_back(id, L);
  // reduce against existing pivots
  std::vector<std::size_t> hits;
  for (const auto& [i, c] : v)
    if (rows_.count(i)) hits.push_back(i);
  for (std::size_t k : hits) {
    Integer vk = zget(v, k);
    if (vk == 0) continue;
    const Row& r = rows_.at(k);
    const Integer& p = r.v.front().second;
    Integer g;
    mpz_gcd(g.get_mpz_t(), p.get_mpz_t(), vk.get_mpz_t());
    Integer a = p / g, b = -vk / g;
    v = zcomb(a, v, b, r.v);
    if (track_) pay = zcomb(a, pay, b, r.pay);
  }
  if (v.empty()) return false;
  make_primitive(v, pay);
  std::size_t piv = v.front().first;
  const Integer p = v.front().second;
  for (auto& [k, r] : rows_) {
    Integer rk = zget(r.v, piv);
    if (rk == 0) continue;
    Integer g;
    mpz_gcd(g.get_mpz_t(), p.get_mpz_t(), rk.get_mpz_t());
    Integer a = p / g, b = -rk / g;
    r.v = zcomb(a, r.v, b, v);
    if (track_) r.pay = zcomb(a, r.pay, b, pay);
    make_primitive(r.v, r.pay);
  }
  rows_.emplace(piv, Row{std::move(v), std::move(pay)});
  return true;
}

SVec Echelon::reduce(const SVec& v, SVec* coeffs) const {
  Accum acc;
  Accum cf;
  acc.add(v);
  for (const auto& [i, c] : v) {
    auto it = rows_.find(i);
    if (it == rows_.end()) continue;
    const Row& r = it->second;
    Scalar f = c / Scalar(r.v.front().second);
    for (const auto& [j, x] : r.v) acc.add(j, -f * Scalar(x));
    if (coeffs)
      for (const auto& [j, x] : r.pay) cf.add(j, f * Scalar(x));
  }
  if (coeffs) *coeffs = cf.take();
  return acc.take();
}

bool Echelon::contains(const SVec& v) const {
  for (const auto& [i, c] : v)
    if (i >= n_) return false;
  return reduce(v).empty();
}

std::vector<std::size_t> Echelon::pivots() const {
  std::vector<std::size_t> p;
  for (const auto& [k, r] : rows_) p.push_back(k);
  return p;
}

std::vector<SVec> Echelon::basis() const {
  std::vector<SVec> out;
  for (const auto& [k, r] : rows_) {
    Scalar p = Scalar(r.v.front().second);
    SVec s;
    for (const auto& [j, x] : r.v) s.emplace_back(j, Scalar(x) / p);
    out.push_back(std::move(s));
  }
  return out;
}

// ---- Subspace

Subspace Subspace::span(std::size_t ambient, const std::vector<SVec>& gens) {
  Subspace s(ambient);
  for (const auto& g : gens) s.insert(g);
  return s;
}

Subspace Subspace::image(const SparseMatrix& m) { return span(m.rows(), m.column_list()); }

Subspace Subspace::kernel(const SparseMatrix& m) { return span(m.cols(), kernel_basis(m)); }

Subspace Subspace::whole(std::size_t n) {
  Subspace s(n);
  for (std::size_t i = 0; i < n; ++i) s.insert(sv_unit(i));
  return s;
}

bool Subspace::contains(const Subspace& o) const {
  if (o.ambient_dim() != ambient_dim()) return false;
  for (const auto& b : o.basis())
    if (!contains(b)) return false;
  return true;
}

bool Subspace::operator==(const Subspace& o) const {
  return ambient_dim() == o.ambient_dim() && dim() == o.dim() && basis() == o.basis();
}

SparseMatrix Subspace::basis_matrix() const { return SparseMatrix::from_columns(ambient_dim(), basis()); }

Subspace Subspace::sum(const Subspace& o) const {
  if (o.ambient_dim() != ambient_dim()) throw Error(ErrorCode::DimensionMismatch, "subspace sum");
  Subspace s = *this;
  for (const auto& b : o.basis()) s.insert(b);
  return s;
}

Subspace Subspace::intersect(const Subspace& o) const {
  if (o.ambient_dim() != ambient_dim()) throw Error(ErrorCode::DimensionMismatch, "subspace intersection");
  // kernel of [A | -B] gives pairs (x, y) with A x = B y
  auto a = basis(), b = o.basis();
  std::vector<SVec> cols = a;
  for (auto& v : b) cols.push_back(sv_scale(v, -1));
  SparseMatrix m = SparseMatrix::from_columns(ambient_dim(), cols);
  Subspace out(ambient_dim());
  for (const auto& k : kernel_basis(m)) {
    Accum acc;
    for (const auto& [i, c] : k)
      if (i < a.size()) acc.add(a[i], c);
    out.insert(acc.take());
  }
  return out;
}

std::size_t rank(const SparseMatrix& m) {
  Echelon e(m.cols());
  for (const auto& r : m.row_list()) e.insert(r);
  return e.rank();
}

std::vector<SVec> kernel_basis(const SparseMatrix& m) {
  Echelon e(m.cols());
  for (const auto& r : m.row_list()) e.insert(r);
  auto piv = e.pivots();
  std::vector<char> is_piv(m.cols(), 0);
  for (auto p : piv) is_piv[p] = 1;
  std::map<std::size_t, Accum> kv;
  for (std::size_t j = 0; j < m.cols(); ++j)
    if (!is_piv[j]) kv[j].add(j, 1);
  for (const auto& row : e.basis()) {
    std::size_t p = row.front().first;
    for (const auto& [j, x] : row)
      if (!is_piv[j]) kv[j].add(p, -x);
  }
  std::vector<SVec> out;
  for (auto& [j, a] : kv) out.push_back(a.take());
  return out;
}

Solver::Solver(const SparseMatrix& m) : cols_(m.cols()), e_(m.rows(), true) {
  for (const auto& c : m.column_list()) e_.insert(c);
}

std::optional<SVec> Solver::solve(const SVec& b) const {
  SVec x;
  SVec rem = e_.reduce(b, &x);
  if (!rem.empty()) return std::nullopt;
  return x;
}

std::optional<SVec> solve(const SparseMatrix& m, const SVec& b) { return Solver(m).solve(b); }

// ---- Quotient

Quotient::Quotient(std::size_t ambient, Subspace rel) : n_(ambient), rel_(std::move(rel)) {
  if (rel_.ambient_dim() != n_) throw Error(ErrorCode::DimensionMismatch, "quotient relations");
  std::vector<char> is_piv(n_, 0);
  for (auto p : rel_.pivots()) is_piv[p] = 1;
  pos_.assign(n_, -1);
  for (std::size_t i = 0; i < n_; ++i)
    if (!is_piv[i]) {
      pos_[i] = static_cast<std::ptrdiff_t>(free_.size());
      free_.push_back(i);
    }
}

SVec Quotient::project(const SVec& v) const {
  SVec r = rel_.reduce(v);
  SVec q;
  q.reserve(r.size());
  for (const auto& [i, c] : r) q.emplace_back(static_cast<std::size_t>(pos_[i]), c);
  return q;
}

SVec Quotient::lift(const SVec& q) const {
  SVec v;
  v.reserve(q.size());
  for (const auto& [i, c] : q) v.emplace_back(free_.at(i), c);
  return v;
}

SparseMatrix Quotient::projection() const {
  std::vector<SVec> cols;
  cols.reserve(n_);
  for (std::size_t j = 0; j < n_; ++j) cols.push_back(project(sv_unit(j)));
  return SparseMatrix::from_columns(dim(), cols);
}

SparseMatrix Quotient::section() const {
  std::vector<SVec> cols;
  for (std::size_t i = 0; i < free_.size(); ++i) cols.push_back(sv_unit(free_[i]));
  return SparseMatrix::from_columns(n_, cols);
}

SparseMatrix induced_map(const SparseMatrix& op, const Quotient& src, const Quotient& dst) {
  if (op.cols() != src.ambient_dim() || op.rows() != dst.ambient_dim())
    throw Error(ErrorCode::DimensionMismatch, "induced_map shapes");
  for (const auto& r : src.relations().basis()) {
    SVec img = op.apply(r);
    if (!dst.relations().contains(img))
      throw Error(ErrorCode::DescentFailure, "operator does not preserve relations", r);
  }
  std::vector<SVec> cols;
  cols.reserve(src.dim());
  for (std::size_t i = 0; i < src.dim(); ++i)
    cols.push_back(dst.project(op.apply(sv_unit(src.free_coords()[i]))));
  return SparseMatrix::from_columns(dst.dim(), cols);
}

}  // namespace hopfcyc
