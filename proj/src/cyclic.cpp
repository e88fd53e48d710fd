#include "hopfcyc/cyclic.hpp"

namespace hopfcyc {

std::size_t TensorIndexer::size() const {
  std::size_t s = dm;
  for (std::size_t k = 0; k < r; ++k) s *= dv;
  return s;
}

std::size_t TensorIndexer::encode(std::size_t m, const std::vector<std::size_t>& v) const {
  std::size_t idx = m;
  for (std::size_t x : v) idx = idx * dv + x;
  return idx;
}

void TensorIndexer::decode(std::size_t idx, std::size_t& m, std::vector<std::size_t>& v) const {
  v.assign(r, 0);
  for (std::size_t k = r; k-- > 0;) {
    v[k] = idx % dv;
    idx /= dv;
  }
  m = idx;
}

bool IdentityReport::all_ok() const {
  for (const auto& c : checks)
    if (!c.ok) return false;
  return true;
}

std::string IdentityReport::first_failure() const {
  for (const auto& c : checks)
    if (!c.ok) return c.relation;
  return "";
}

HomologyMode parse_mode(const std::string& s) {
  if (s == "hochschild") return HomologyMode::Hochschild;
  if (s == "cyclic") return HomologyMode::Cyclic;
  if (s == "periodic") return HomologyMode::Periodic;
  throw Error(ErrorCode::InputShape, "unknown mode '" + s + "'");
}

const char* mode_name(HomologyMode m) {
  switch (m) {
    case HomologyMode::Hochschild: return "hochschild";
    case HomologyMode::Cyclic: return "cyclic";
    case HomologyMode::Periodic: return "periodic";
  }
  return "?";
}

namespace {

SparseMatrix power(const SparseMatrix& m, std::size_t k) {
  SparseMatrix r = SparseMatrix::identity(m.rows());
  for (std::size_t i = 0; i < k; ++i) r = m * r;
  return r;
}

std::string tag(const char* rel, std::size_t n, long i = -1, long j = -1) {
  std::string s = std::string(rel) + " (n=" + std::to_string(n);
  if (i >= 0) s += ", i=" + std::to_string(i);
  if (j >= 0) s += ", j=" + std::to_string(j);
  return s + ")";
}

}  // namespace

IdentityReport CocyclicModule::verify() const {
  IdentityReport rep;
  auto rec = [&](const std::string& name, bool ok) { rep.checks.push_back({name, ok}); };
  for (std::size_t n = 0; n + 1 < top; ++n) {
    // delta_j delta_i = delta_i delta_{j-1}, i < j, C^n -> C^{n+2}
    for (std::size_t j = 1; j <= n + 2; ++j)
      for (std::size_t i = 0; i < j; ++i)
        rec(tag("delta_j delta_i = delta_i delta_{j-1}", n, i, j),
            delta[n + 1][j] * delta[n][i] == delta[n + 1][i] * delta[n][j - 1]);
    // sigma_j sigma_i = sigma_i sigma_{j+1}, i <= j, C^{n+2} -> C^n
    for (std::size_t j = 0; j <= n; ++j)
      for (std::size_t i = 0; i <= j; ++i)
        rec(tag("sigma_j sigma_i = sigma_i sigma_{j+1}", n, i, j),
            sigma[n][j] * sigma[n + 1][i] == sigma[n][i] * sigma[n + 1][j + 1]);
  }
  for (std::size_t n = 0; n < top; ++n) {
    SparseMatrix id = SparseMatrix::identity(dims[n]);
    for (std::size_t j = 0; j <= n; ++j)
      for (std::size_t i = 0; i <= n + 1; ++i) {
        SparseMatrix lhs = sigma[n][j] * delta[n][i];
        std::string nm = tag("sigma_j delta_i", n, i, j);
        if (i == j || i == j + 1) {
          rec(nm, lhs == id);
        } else if (n >= 1 && i < j) {
          rec(nm, lhs == delta[n - 1][i] * sigma[n - 1][j - 1]);
        } else if (n >= 1 && i > j + 1) {
          rec(nm, lhs == delta[n - 1][i - 1] * sigma[n - 1][j]);
        }
      }
    // tau_{n+1} delta_i = delta_{i-1} tau_n, tau_{n+1} delta_0 = delta_{n+1}
    for (std::size_t i = 1; i <= n + 1; ++i)
      rec(tag("tau delta_i = delta_{i-1} tau", n, i), tau[n + 1] * delta[n][i] == delta[n][i - 1] * tau[n]);
    rec(tag("tau delta_0 = delta_last", n), tau[n + 1] * delta[n][0] == delta[n][n + 1]);
    // tau_n sigma_i = sigma_{i-1} tau_{n+1}, tau_n sigma_0 = sigma_n tau_{n+1}^2
    for (std::size_t i = 1; i <= n; ++i)
      rec(tag("tau sigma_i = sigma_{i-1} tau", n, i), tau[n] * sigma[n][i] == sigma[n][i - 1] * tau[n + 1]);
    rec(tag("tau sigma_0 = sigma_n tau^2", n), tau[n] * sigma[n][0] == sigma[n][n] * tau[n + 1] * tau[n + 1]);
  }
  for (std::size_t n = 0; n <= top; ++n) {
    if (!(power(tau[n], n + 1) == SparseMatrix::identity(dims[n]))) {
      if (rep.cyclic) rep.first_noncyclic = static_cast<long>(n);
      rep.cyclic = false;
    }
  }
  return rep;
}

void CocyclicModule::require_identities() const {
  auto r = verify();
  if (!r.all_ok()) throw Error(ErrorCode::IdentityFailure, label + ": " + r.first_failure());
}

SparseMatrix CocyclicModule::lambda(std::size_t n) const {
  return (n % 2 == 0) ? tau[n] : tau[n].scaled(-1);
}

SparseMatrix CocyclicModule::b(std::size_t n) const {
  SparseMatrix r(dims[n + 1], dims[n]);
  for (std::size_t i = 0; i <= n + 1; ++i) r = r + delta[n][i].scaled(i % 2 == 0 ? 1 : -1);
  return r;
}

SparseMatrix CocyclicModule::norm(std::size_t n) const {
  SparseMatrix l = lambda(n);
  SparseMatrix acc = SparseMatrix::identity(dims[n]);
  SparseMatrix p = SparseMatrix::identity(dims[n]);
  for (std::size_t j = 1; j <= n; ++j) {
    p = l * p;
    acc = acc + p;
  }
  return acc;
}

// B = N_{n-1} sigma_{n-1} (tau_n - (-1)^n)
SparseMatrix CocyclicModule::B(std::size_t n) const {
  if (n == 0) throw Error(ErrorCode::DegreeOutOfRange, "B on C^0");
  SparseMatrix b0 = tau[n] - SparseMatrix::identity(dims[n]).scaled(n % 2 == 0 ? 1 : -1);
  return norm(n - 1) * sigma[n - 1][n - 1] * b0;
}

CocyclicModule CyclicModule::dual() const {
  CocyclicModule c;
  c.label = label + " (dual)";
  c.top = top;
  c.dims = dims;
  c.delta.resize(top);
  c.sigma.resize(top);
  for (std::size_t n = 0; n < top; ++n) {
    for (std::size_t i = 0; i <= n + 1; ++i) c.delta[n].push_back(d[n + 1][i].transpose());
    for (std::size_t i = 0; i <= n; ++i) c.sigma[n].push_back(s[n][i].transpose());
  }
  for (std::size_t n = 0; n <= top; ++n) c.tau.push_back(t[n].transpose());
  return c;
}

// ---- CyclicCohomology

CyclicCohomology::CyclicCohomology(std::shared_ptr<const CocyclicModule> mod, std::size_t cap)
    : mod_(std::move(mod)), cap_(cap) {
  if (mod_->top < cap + 1)
    throw Error(ErrorCode::DegreeOutOfRange, "module built to degree " + std::to_string(mod_->top) +
                                                 ", need " + std::to_string(cap + 1));
  hh_.resize(cap + 1);
  hc_.resize(cap + 1);
  hl_.resize(cap + 1);
  lb_.resize(cap + 2);
}

const Cohomology& CyclicCohomology::hh(std::size_t n) const {
  if (n > cap_) throw Error(ErrorCode::DegreeOutOfRange, "hochschild degree beyond cap");
  if (!hh_[n]) {
    SparseMatrix din = n == 0 ? SparseMatrix() : mod_->b(n - 1);
    hh_[n] = std::make_unique<Cohomology>(din, mod_->b(n), mod_->dims[n]);
  }
  return *hh_[n];
}

std::vector<std::size_t> CyclicCohomology::slot_offset(std::size_t n) const {
  std::vector<std::size_t> off{0};
  for (std::size_t k = 0; 2 * k <= n; ++k) off.push_back(off.back() + mod_->dims[n - 2 * k]);
  return off;
}

std::size_t CyclicCohomology::tot_dim(std::size_t n) const { return slot_offset(n).back(); }

SparseMatrix CyclicCohomology::tot_d(std::size_t n) const {
  auto src = slot_offset(n), dst = slot_offset(n + 1);
  std::vector<Entry> e;
  for (std::size_t k = 0; 2 * k <= n; ++k) {
    std::size_t deg = n - 2 * k;
    SparseMatrix bm = mod_->b(deg);
    for (const auto& x : bm.entries()) e.push_back({dst[k] + x.row, src[k] + x.col, x.val});
    if (deg >= 1) {
      SparseMatrix Bm = mod_->B(deg);
      for (const auto& x : Bm.entries()) e.push_back({dst[k + 1] + x.row, src[k] + x.col, x.val});
    }
  }
  return SparseMatrix::from_entries(dst.back(), src.back(), std::move(e));
}

void CyclicCohomology::require_cyclic() const {
  if (cyclic_ < 0) {
    cyclic_ = 1;
    for (std::size_t n = 0; n <= cap_ + 1 && cyclic_ == 1; ++n)
      if (!(power(mod_->tau[n], n + 1) == SparseMatrix::identity(mod_->dims[n]))) cyclic_ = 0;
  }
  if (cyclic_ == 0)
    throw Error(ErrorCode::IdentityFailure, mod_->label + ": tau_n^{n+1} != id, cyclic cohomology undefined");
}

const Cohomology& CyclicCohomology::hc(std::size_t n) const {
  if (n > cap_) throw Error(ErrorCode::DegreeOutOfRange, "cyclic degree beyond cap");
  require_cyclic();
  if (!hc_[n]) {
    SparseMatrix din = n == 0 ? SparseMatrix() : tot_d(n - 1);
    hc_[n] = std::make_unique<Cohomology>(din, tot_d(n), tot_dim(n));
  }
  return *hc_[n];
}

const SparseMatrix& CyclicCohomology::lambda_basis(std::size_t n) const {
  if (!lb_[n]) {
    SparseMatrix one_minus = SparseMatrix::identity(mod_->dims[n]) - mod_->lambda(n);
    lb_[n] = std::make_unique<SparseMatrix>(SparseMatrix::from_columns(mod_->dims[n], kernel_basis(one_minus)));
  }
  return *lb_[n];
}

namespace {

// b restricted to lambda-invariants, in lambda-basis coordinates
SparseMatrix restricted(const SparseMatrix& b, const SparseMatrix& src, const SparseMatrix& dst) {
  Solver sol(dst);
  std::vector<SVec> cols;
  for (const auto& c : src.column_list()) {
    auto x = sol.solve(b.apply(c));
    if (!x) throw Error(ErrorCode::IdentityFailure, "b does not preserve cyclic cochains");
    cols.push_back(*x);
  }
  return SparseMatrix::from_columns(dst.cols(), cols);
}

}  // namespace

const Cohomology& CyclicCohomology::hlambda(std::size_t n) const {
  if (n > cap_) throw Error(ErrorCode::DegreeOutOfRange, "lambda degree beyond cap");
  require_cyclic();
  if (!hl_[n]) {
    SparseMatrix din = n == 0 ? SparseMatrix() : restricted(mod_->b(n - 1), lambda_basis(n - 1), lambda_basis(n));
    SparseMatrix dout = restricted(mod_->b(n), lambda_basis(n), lambda_basis(n + 1));
    hl_[n] = std::make_unique<Cohomology>(din, dout, lambda_basis(n).cols());
  }
  return *hl_[n];
}

std::vector<std::size_t> CyclicCohomology::hochschild_dims() const {
  std::vector<std::size_t> d;
  for (std::size_t n = 0; n <= cap_; ++n) d.push_back(hh(n).dim());
  return d;
}

std::vector<std::size_t> CyclicCohomology::cyclic_dims() const {
  std::vector<std::size_t> d;
  for (std::size_t n = 0; n <= cap_; ++n) d.push_back(hc(n).dim());
  return d;
}

std::vector<std::size_t> CyclicCohomology::lambda_dims() const {
  std::vector<std::size_t> d;
  for (std::size_t n = 0; n <= cap_; ++n) d.push_back(hlambda(n).dim());
  return d;
}

SVec CyclicCohomology::tot_embed(const SVec& x, std::size_t n, std::size_t slot) const {
  auto off = slot_offset(n + 2 * slot);
  SVec r;
  for (const auto& [i, c] : x) r.emplace_back(off[slot] + i, c);
  return r;
}

SVec CyclicCohomology::tot_component(const SVec& x, std::size_t n, std::size_t slot) const {
  auto off = slot_offset(n);
  SVec r;
  for (const auto& [i, c] : x)
    if (i >= off[slot] && i < off[slot + 1]) r.emplace_back(i - off[slot], c);
  return r;
}

SparseMatrix CyclicCohomology::s_chain(std::size_t n) const {
  auto src = slot_offset(n), dst = slot_offset(n + 2);
  std::vector<Entry> e;
  for (std::size_t i = 0; i < src.back(); ++i) e.push_back({dst[1] + i, i, 1});
  return SparseMatrix::from_entries(dst.back(), src.back(), std::move(e));
}

SparseMatrix CyclicCohomology::s_matrix(std::size_t n) const {
  return induced_on_cohomology(s_chain(n), hc(n), hc(n + 2));
}

SVec CyclicCohomology::hc_class_of_lambda_cocycle(const SVec& x, std::size_t n) const {
  return hc(n).coords(tot_embed(x, n, 0));
}

CyclicCohomology::Periodic CyclicCohomology::periodic(std::size_t parity) const {
  Periodic p;
  std::vector<std::size_t> degs;
  for (std::size_t q = parity % 2; q + 2 <= cap_; q += 2) degs.push_back(q);
  std::vector<bool> iso;
  for (std::size_t q : degs) {
    std::size_t r = rank(s_matrix(q));
    p.s_ranks.push_back(r);
    iso.push_back(r == hc(q).dim() && r == hc(q + 2).dim());
  }
  if (iso.empty() || !iso.back()) return p;
  std::size_t k = iso.size();
  while (k > 0 && iso[k - 1]) --k;
  p.stabilized = true;
  p.from = degs[k];
  p.dim = hc(p.from).dim();
  return p;
}

}  // namespace hopfcyc
