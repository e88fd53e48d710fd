#pragma once

#include "hopfcyc/exactla.hpp"

#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

namespace hopfcyc {

// element of V1 (x) ... (x) Vr keyed by multi-index
using Tensor = std::map<std::vector<std::size_t>, Scalar>;
void tensor_add(Tensor& t, const std::vector<std::size_t>& key, const Scalar& c);
void tensor_add_all(Tensor& t, const Tensor& o, const Scalar& c = 1);
Tensor tensor_clean(Tensor t);

struct Coproduct2 {
  std::size_t i, j;
  Scalar c;
};

struct Coalgebra {
  std::string name;
  std::size_t dim = 0;
  std::vector<std::string> names;
  std::vector<std::vector<Coproduct2>> delta;  // delta[k] = terms of Delta(e_k)
  Vec counit;

  Tensor coproduct(const SVec& x) const;
  // left-iterated: rank n+1 tensor
  Tensor iterated_coproduct(const SVec& x, std::size_t n) const;
  Tensor iterated_coproduct_right(const SVec& x, std::size_t n) const;
  Scalar eps(const SVec& x) const;
  std::size_t basis_index_of_counit_pivot() const;
};

struct Algebra {
  std::string name;
  std::size_t dim = 0;
  std::vector<std::string> names;
  std::vector<std::vector<SVec>> mu;  // mu[i][j] = e_i e_j
  SVec unit;

  SVec mul(const SVec& a, const SVec& b) const;
  SVec mul_basis(std::size_t i, std::size_t j) const { return mu[i][j]; }
};

struct HopfAlgebra {
  Coalgebra coalg;
  Algebra alg;
  std::vector<SVec> S, Sinv;  // S[j] = S(e_j)

  std::size_t dim() const { return coalg.dim; }
  SVec mul(const SVec& a, const SVec& b) const { return alg.mul(a, b); }
  Tensor coproduct(const SVec& x) const { return coalg.coproduct(x); }
  Scalar eps(const SVec& x) const { return coalg.eps(x); }
  SVec antipode(const SVec& x) const;
  SVec antipode_inv(const SVec& x) const;
};

// left H-action on a space: act[h][x] = e_h . e_x
struct Action {
  std::vector<std::vector<SVec>> act;
  SVec apply(std::size_t h, const SVec& v) const;
  SVec apply(const SVec& h, const SVec& v) const;
};

struct ModuleCoalgebra {
  const Coalgebra* coalg = nullptr;
  Action h;
};

struct ModuleAlgebra {
  const Algebra* alg = nullptr;
  Action h;
  std::optional<Action> c;  // c[c_idx][a_idx]
  const Coalgebra* c_source = nullptr;
};

struct SAYDModule {
  std::string name;
  std::size_t dim = 0;
  std::vector<std::string> names;
  std::vector<std::vector<SVec>> right;  // right[h][m] = e_m . e_h
  // coaction[m] = terms (h, m', c): rho(e_m) = sum c e_h (x) e_m'
  std::vector<std::vector<std::tuple<std::size_t, std::size_t, Scalar>>> coaction;

  SVec act(const SVec& m, std::size_t h) const;
  SVec act(const SVec& m, const SVec& h) const;
  Tensor coact(const SVec& m) const;  // keys {h, m}
};

struct AxiomCheck {
  std::string axiom;
  bool ok = true;
  std::string witness;
};

struct ValidationReport {
  std::string object;
  std::vector<AxiomCheck> checks;
  std::map<std::string, bool> flags;
  bool pass() const;
  std::vector<std::string> violations() const;
};

ValidationReport validate_coalgebra(const Coalgebra& c);
ValidationReport validate_algebra(const Algebra& a);
ValidationReport validate_hopf(const HopfAlgebra& h);
ValidationReport validate_sayd(const HopfAlgebra& h, const SAYDModule& m);
ValidationReport validate_module_coalgebra(const HopfAlgebra& h, const ModuleCoalgebra& c);
ValidationReport validate_module_actions(const HopfAlgebra& h, const ModuleCoalgebra* c, const ModuleAlgebra& a);

struct Bundle {
  HopfAlgebra hopf;
  std::map<std::string, Coalgebra> coalgebras;
  std::map<std::string, Algebra> algebras;
  std::map<std::string, SAYDModule> saydm;
  std::map<std::string, ModuleCoalgebra> hc_actions;  // by coalgebra name
  std::map<std::string, ModuleAlgebra> ha_actions;    // by algebra name
  std::map<std::string, std::string> select;           // role -> name

  Bundle() = default;
  Bundle(const Bundle&) = delete;
  Bundle& operator=(const Bundle&) = delete;
  Bundle(Bundle&&) = default;
  Bundle& operator=(Bundle&&) = default;

  const Coalgebra& coalgebra(const std::string& n) const;
  const Algebra& algebra(const std::string& n) const;
  const SAYDModule& sayd(const std::string& n) const;
  const ModuleCoalgebra& module_coalgebra(const std::string& n) const;
  const ModuleAlgebra& module_algebra(const std::string& n) const;
  std::string selected(const std::string& role) const;  // throws UNRESOLVED_REFERENCE

  std::vector<ValidationReport> validate_all() const;
};

Bundle load_structure(const std::string& json_text);
Bundle load_structure_file(const std::string& path);
std::string fixture_path(const std::string& name);

}  // namespace hopfcyc
