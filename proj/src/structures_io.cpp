#include <fstream>
#include <sstream>

#include "hopfcyc/structures.hpp"
#include "json.hpp"

namespace hopfcyc {

using nlohmann::json;

namespace {

[[noreturn]] void fail(ErrorCode code, const std::string& path, const std::string& msg) {
  throw Error(code, path + ": " + msg);
}

const json& field(const json& j, const std::string& key, const std::string& path) {
  if (!j.is_object()) fail(ErrorCode::ParseError, path, "expected object");
  auto it = j.find(key);
  if (it == j.end()) fail(ErrorCode::ParseError, path + "/" + key, "missing field");
  return *it;
}

std::size_t as_index(const json& j, std::size_t bound, const std::string& path) {
  if (!j.is_number_integer() || j.get<long long>() < 0) fail(ErrorCode::ParseError, path, "expected index");
  auto v = j.get<unsigned long long>();
  if (v >= bound) fail(ErrorCode::ParseError, path, "index " + std::to_string(v) + " out of range");
  return static_cast<std::size_t>(v);
}

std::size_t as_count(const json& j, const std::string& path) {
  if (!j.is_number_integer() || j.get<long long>() <= 0) fail(ErrorCode::ParseError, path, "expected positive count");
  return j.get<std::size_t>();
}

Scalar as_scalar(const json& j, const std::string& path) {
  if (!j.is_string()) fail(ErrorCode::ParseError, path, "scalar must be a \"p/q\" string");
  std::string s = j.get<std::string>();
  Scalar q;
  try {
    q = parse_scalar(s);
  } catch (const Error& e) {
    fail(ErrorCode::ParseError, path, e.what());
  }
  // lowest terms, positive denominator
  auto slash = s.find('/');
  if (slash != std::string::npos) {
    Scalar raw;
    raw.get_num().set_str(s.substr(0, slash), 10);
    raw.get_den().set_str(s.substr(slash + 1), 10);
    if (raw.get_den() < 0) fail(ErrorCode::ParseError, path, "negative denominator");
    Integer g;
    Integer a = abs(raw.get_num());
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), raw.get_den().get_mpz_t());
    if (g != 1) fail(ErrorCode::ParseError, path, "scalar '" + s + "' not in lowest terms");
  }
  return q;
}

Vec as_vector(const json& j, std::size_t n, const std::string& path) {
  if (!j.is_array() || j.size() != n) fail(ErrorCode::DimensionMismatch, path, "expected vector of length " + std::to_string(n));
  Vec v;
  for (std::size_t i = 0; i < n; ++i) v.push_back(as_scalar(j[i], path + "/" + std::to_string(i)));
  return v;
}

// dense rows; returns columns as sparse vectors
std::vector<SVec> as_matrix(const json& j, std::size_t n, const std::string& path) {
  if (!j.is_array() || j.size() != n) fail(ErrorCode::DimensionMismatch, path, "expected " + std::to_string(n) + " rows");
  std::vector<Accum> cols(n);
  for (std::size_t r = 0; r < n; ++r) {
    Vec row = as_vector(j[r], n, path + "/" + std::to_string(r));
    for (std::size_t c = 0; c < n; ++c) cols[c].add(r, row[c]);
  }
  std::vector<SVec> out;
  for (auto& a : cols) out.push_back(a.take());
  return out;
}

std::vector<std::string> names_of(const json& j, std::size_t n, const std::string& path, const std::string& prefix) {
  std::vector<std::string> out;
  auto it = j.find("names");
  if (it == j.end()) {
    for (std::size_t i = 0; i < n; ++i) out.push_back(prefix + std::to_string(i));
    return out;
  }
  if (!it->is_array() || it->size() != n) fail(ErrorCode::DimensionMismatch, path + "/names", "wrong length");
  for (const auto& s : *it) out.push_back(s.get<std::string>());
  return out;
}

std::string name_of(const json& j, const std::string& path) {
  const json& n = field(j, "name", path);
  if (!n.is_string()) fail(ErrorCode::ParseError, path + "/name", "expected string");
  return n.get<std::string>();
}

Coalgebra parse_coalgebra(const json& j, const std::string& path) {
  Coalgebra c;
  c.name = j.contains("name") ? name_of(j, path) : "H";
  c.dim = as_count(field(j, "dim", path), path + "/dim");
  c.names = names_of(j, c.dim, path, "e");
  const json& d = field(j, "delta", path);
  if (!d.is_array() || d.size() != c.dim) fail(ErrorCode::DimensionMismatch, path + "/delta", "one entry per basis element");
  c.delta.resize(c.dim);
  for (std::size_t k = 0; k < c.dim; ++k) {
    std::string pk = path + "/delta/" + std::to_string(k);
    if (!d[k].is_array()) fail(ErrorCode::ParseError, pk, "expected list of [i, j, c]");
    for (std::size_t t = 0; t < d[k].size(); ++t) {
      const json& e = d[k][t];
      std::string pt = pk + "/" + std::to_string(t);
      if (!e.is_array() || e.size() != 3) fail(ErrorCode::ParseError, pt, "expected [i, j, c]");
      c.delta[k].push_back({as_index(e[0], c.dim, pt + "/0"), as_index(e[1], c.dim, pt + "/1"), as_scalar(e[2], pt + "/2")});
    }
  }
  c.counit = as_vector(field(j, "counit", path), c.dim, path + "/counit");
  return c;
}

Algebra parse_algebra(const json& j, const std::string& path) {
  Algebra a;
  a.name = j.contains("name") ? name_of(j, path) : "H";
  a.dim = as_count(field(j, "dim", path), path + "/dim");
  a.names = names_of(j, a.dim, path, "e");
  std::vector<std::vector<Accum>> acc(a.dim, std::vector<Accum>(a.dim));
  const json& m = field(j, "mu", path);
  if (!m.is_array()) fail(ErrorCode::ParseError, path + "/mu", "expected list of [i, j, k, c]");
  for (std::size_t t = 0; t < m.size(); ++t) {
    std::string pt = path + "/mu/" + std::to_string(t);
    const json& e = m[t];
    if (!e.is_array() || e.size() != 4) fail(ErrorCode::ParseError, pt, "expected [i, j, k, c]");
    std::size_t i = as_index(e[0], a.dim, pt + "/0"), jj = as_index(e[1], a.dim, pt + "/1");
    acc[i][jj].add(as_index(e[2], a.dim, pt + "/2"), as_scalar(e[3], pt + "/3"));
  }
  a.mu.assign(a.dim, std::vector<SVec>(a.dim));
  for (std::size_t i = 0; i < a.dim; ++i)
    for (std::size_t jj = 0; jj < a.dim; ++jj) a.mu[i][jj] = acc[i][jj].take();
  a.unit = sv_from_dense(as_vector(field(j, "unit", path), a.dim, path + "/unit"));
  return a;
}

Action parse_action(const json& j, std::size_t acting, std::size_t dim, const std::string& path) {
  if (!j.is_array() || j.size() != acting)
    fail(ErrorCode::DimensionMismatch, path, "expected " + std::to_string(acting) + " matrices");
  Action a;
  for (std::size_t h = 0; h < acting; ++h) a.act.push_back(as_matrix(j[h], dim, path + "/" + std::to_string(h)));
  return a;
}

Action counit_action(const HopfAlgebra& h, std::size_t dim) {
  Action a;
  for (std::size_t k = 0; k < h.dim(); ++k) {
    std::vector<SVec> cols;
    for (std::size_t x = 0; x < dim; ++x) cols.push_back(sv_unit(x, h.coalg.counit[k]));
    a.act.push_back(cols);
  }
  return a;
}

}  // namespace

Bundle load_structure(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ParseError, std::string("json: ") + e.what());
  }
  if (!doc.is_object()) fail(ErrorCode::ParseError, "", "document must be an object");
  if (doc.contains("schema_version") && doc["schema_version"] != 1)
    fail(ErrorCode::ParseError, "/schema_version", "unsupported schema version");
  Bundle b;
  const json& hj = field(doc, "hopf", "");
  b.hopf.coalg = parse_coalgebra(hj, "/hopf");
  b.hopf.alg = parse_algebra(hj, "/hopf");
  if (b.hopf.alg.dim != b.hopf.coalg.dim) fail(ErrorCode::DimensionMismatch, "/hopf", "dim");
  b.hopf.S = as_matrix(field(hj, "antipode", "/hopf"), b.hopf.dim(), "/hopf/antipode");
  b.hopf.Sinv = as_matrix(field(hj, "antipode_inv", "/hopf"), b.hopf.dim(), "/hopf/antipode_inv");
  std::size_t nh = b.hopf.dim();

  if (doc.contains("coalgebras")) {
    const json& cs = doc["coalgebras"];
    for (std::size_t i = 0; i < cs.size(); ++i) {
      std::string p = "/coalgebras/" + std::to_string(i);
      Coalgebra c = parse_coalgebra(cs[i], p);
      if (!cs[i].contains("name")) fail(ErrorCode::ParseError, p + "/name", "missing field");
      if (b.coalgebras.count(c.name)) fail(ErrorCode::ParseError, p + "/name", "duplicate name " + c.name);
      b.coalgebras.emplace(c.name, std::move(c));
    }
  }
  if (doc.contains("algebras")) {
    const json& as = doc["algebras"];
    for (std::size_t i = 0; i < as.size(); ++i) {
      std::string p = "/algebras/" + std::to_string(i);
      if (!as[i].contains("name")) fail(ErrorCode::ParseError, p + "/name", "missing field");
      Algebra a = parse_algebra(as[i], p);
      if (b.algebras.count(a.name)) fail(ErrorCode::ParseError, p + "/name", "duplicate name " + a.name);
      b.algebras.emplace(a.name, std::move(a));
    }
  }
  if (doc.contains("sayd_modules")) {
    const json& ms = doc["sayd_modules"];
    for (std::size_t i = 0; i < ms.size(); ++i) {
      std::string p = "/sayd_modules/" + std::to_string(i);
      const json& mj = ms[i];
      SAYDModule m;
      m.name = name_of(mj, p);
      m.dim = as_count(field(mj, "dim", p), p + "/dim");
      m.names = names_of(mj, m.dim, p, "m");
      const json& ra = field(mj, "right_action", p);
      if (!ra.is_array() || ra.size() != nh) fail(ErrorCode::DimensionMismatch, p + "/right_action", "one matrix per H basis element");
      for (std::size_t h = 0; h < nh; ++h)
        m.right.push_back(as_matrix(ra[h], m.dim, p + "/right_action/" + std::to_string(h)));
      const json& co = field(mj, "coaction", p);
      if (!co.is_array() || co.size() != m.dim) fail(ErrorCode::DimensionMismatch, p + "/coaction", "one entry per M basis element");
      m.coaction.resize(m.dim);
      for (std::size_t k = 0; k < m.dim; ++k)
        for (std::size_t t = 0; t < co[k].size(); ++t) {
          std::string pt = p + "/coaction/" + std::to_string(k) + "/" + std::to_string(t);
          const json& e = co[k][t];
          if (!e.is_array() || e.size() != 3) fail(ErrorCode::ParseError, pt, "expected [h, m, c]");
          m.coaction[k].emplace_back(as_index(e[0], nh, pt + "/0"), as_index(e[1], m.dim, pt + "/1"), as_scalar(e[2], pt + "/2"));
        }
      if (b.saydm.count(m.name)) fail(ErrorCode::ParseError, p + "/name", "duplicate name " + m.name);
      b.saydm.emplace(m.name, std::move(m));
    }
  }
  // default H-actions via the counit
  for (auto& [n, c] : b.coalgebras) b.hc_actions[n] = ModuleCoalgebra{&c, counit_action(b.hopf, c.dim)};
  for (auto& [n, a] : b.algebras) b.ha_actions[n] = ModuleAlgebra{&a, counit_action(b.hopf, a.dim), std::nullopt, nullptr};
  if (doc.contains("actions")) {
    const json& acts = doc["actions"];
    for (std::size_t i = 0; i < acts.size(); ++i) {
      std::string p = "/actions/" + std::to_string(i);
      const json& aj = acts[i];
      std::string kind = field(aj, "kind", p).get<std::string>();
      std::string target = field(aj, "target", p).get<std::string>();
      if (kind == "hopf_on_coalgebra") {
        auto it = b.coalgebras.find(target);
        if (it == b.coalgebras.end()) fail(ErrorCode::UnresolvedReference, p + "/target", "no coalgebra '" + target + "'");
        b.hc_actions[target].h = parse_action(field(aj, "matrices", p), nh, it->second.dim, p + "/matrices");
      } else if (kind == "hopf_on_algebra") {
        auto it = b.algebras.find(target);
        if (it == b.algebras.end()) fail(ErrorCode::UnresolvedReference, p + "/target", "no algebra '" + target + "'");
        b.ha_actions[target].h = parse_action(field(aj, "matrices", p), nh, it->second.dim, p + "/matrices");
      } else if (kind == "coalgebra_on_algebra") {
        std::string source = field(aj, "source", p).get<std::string>();
        auto it = b.algebras.find(target);
        if (it == b.algebras.end()) fail(ErrorCode::UnresolvedReference, p + "/target", "no algebra '" + target + "'");
        auto cit = b.coalgebras.find(source);
        if (cit == b.coalgebras.end()) fail(ErrorCode::UnresolvedReference, p + "/source", "no coalgebra '" + source + "'");
        auto& ma = b.ha_actions[target];
        ma.c = parse_action(field(aj, "matrices", p), cit->second.dim, it->second.dim, p + "/matrices");
        ma.c_source = &cit->second;
      } else {
        fail(ErrorCode::ParseError, p + "/kind", "unknown action kind '" + kind + "'");
      }
    }
  }
  if (doc.contains("select")) {
    for (auto& [role, v] : doc["select"].items()) {
      std::string name = v.get<std::string>();
      std::string p = "/select/" + role;
      if (role == "coalgebra" && !b.coalgebras.count(name)) fail(ErrorCode::UnresolvedReference, p, "no coalgebra '" + name + "'");
      if (role == "algebra" && !b.algebras.count(name)) fail(ErrorCode::UnresolvedReference, p, "no algebra '" + name + "'");
      if (role == "sayd" && !b.saydm.count(name)) fail(ErrorCode::UnresolvedReference, p, "no sayd module '" + name + "'");
      b.select[role] = name;
    }
  }
  return b;
}

Bundle load_structure_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return load_structure(ss.str());
}

std::string fixture_path(const std::string& name) {
  return std::string(HOPFCYC_FIXTURE_DIR) + "/" + name + ".json";
}

const Coalgebra& Bundle::coalgebra(const std::string& n) const {
  auto it = coalgebras.find(n);
  if (it == coalgebras.end()) throw Error(ErrorCode::UnresolvedReference, "no coalgebra '" + n + "'");
  return it->second;
}

const Algebra& Bundle::algebra(const std::string& n) const {
  auto it = algebras.find(n);
  if (it == algebras.end()) throw Error(ErrorCode::UnresolvedReference, "no algebra '" + n + "'");
  return it->second;
}

const SAYDModule& Bundle::sayd(const std::string& n) const {
  auto it = saydm.find(n);
  if (it == saydm.end()) throw Error(ErrorCode::UnresolvedReference, "no sayd module '" + n + "'");
  return it->second;
}

const ModuleCoalgebra& Bundle::module_coalgebra(const std::string& n) const {
  auto it = hc_actions.find(n);
  if (it == hc_actions.end()) throw Error(ErrorCode::UnresolvedReference, "no coalgebra '" + n + "'");
  return it->second;
}

const ModuleAlgebra& Bundle::module_algebra(const std::string& n) const {
  auto it = ha_actions.find(n);
  if (it == ha_actions.end()) throw Error(ErrorCode::UnresolvedReference, "no algebra '" + n + "'");
  return it->second;
}

std::string Bundle::selected(const std::string& role) const {
  auto it = select.find(role);
  if (it != select.end()) return it->second;
  // a single candidate is selected implicitly
  if (role == "coalgebra" && coalgebras.size() == 1) return coalgebras.begin()->first;
  if (role == "algebra" && algebras.size() == 1) return algebras.begin()->first;
  if (role == "sayd" && saydm.size() == 1) return saydm.begin()->first;
  throw Error(ErrorCode::UnresolvedReference, "no " + role + " selected");
}

std::vector<ValidationReport> Bundle::validate_all() const {
  std::vector<ValidationReport> out;
  out.push_back(validate_hopf(hopf));
  for (const auto& [n, c] : coalgebras) {
    out.push_back(validate_coalgebra(c));
    out.push_back(validate_module_coalgebra(hopf, hc_actions.at(n)));
  }
  for (const auto& [n, a] : algebras) {
    out.push_back(validate_algebra(a));
    const auto& ma = ha_actions.at(n);
    const ModuleCoalgebra* mc = ma.c_source ? &hc_actions.at(ma.c_source->name) : nullptr;
    out.push_back(validate_module_actions(hopf, mc, ma));
  }
  for (const auto& [n, m] : saydm) out.push_back(validate_sayd(hopf, m));
  return out;
}

}  // namespace hopfcyc
