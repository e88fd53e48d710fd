#pragma once

#include "hopfcyc/exactla.hpp"
#include "hopfcyc/homology.hpp"
#include "hopfcyc/structures.hpp"

#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace hopfcyc {

// finite-dimensional algebra with the unit as a basis vector and an optional weight grading
struct AlgebraModel {
  std::string name;
  std::size_t dim = 0;
  std::vector<std::string> names;
  std::vector<std::vector<SVec>> mu;  // mu[i][j] = e_i e_j
  std::size_t unit = 0;
  std::vector<std::size_t> weight;  // all zero when ungraded
  Action h;                         // H acts on A
  std::optional<Action> c;          // C acts on A

  SVec mul(const SVec& x, const SVec& y) const;
  // throws NOT_SUPPORTED unless the unit is a basis vector
  static AlgebraModel from(const HopfAlgebra& h, const ModuleAlgebra& a);
  Algebra as_algebra() const;
};

// H-module V given by its action matrices
struct HModule {
  std::string name;
  std::size_t dim = 0;
  std::vector<std::string> names;
  Action act;
};
// h . v = chi(h) v on every basis vector, chi a character given by its values on the basis of H
HModule character_module(const HopfAlgebra& h, const Vec& chi, std::size_t dim, const std::string& name);

// T(V) modulo words longer than cap; weight = word length
struct FreeAlgebra {
  HModule v;
  std::size_t cap = 0;
  std::vector<std::vector<std::size_t>> words;  // words[0] is the empty word
  std::map<std::vector<std::size_t>, std::size_t> pos;
  AlgebraModel model;

  std::size_t index(const std::vector<std::size_t>& w) const;
  std::string word_name(std::size_t i) const;
};
FreeAlgebra free_algebra(const HopfAlgebra& h, const HModule& v, std::size_t cap);

// ----- normalized forms a0 da1 ... dak: key (a0, a1, ..., ak), a_i != unit for i >= 1
using FormKey = std::vector<std::size_t>;
using FormVec = std::map<FormKey, Scalar>;

void form_add(FormVec& f, const FormKey& k, const Scalar& c);
FormVec form_right_mul(const AlgebraModel& a, const FormKey& w, std::size_t x);
FormVec form_mul(const AlgebraModel& a, const FormKey& x, const FormKey& y);
FormVec form_d(const AlgebraModel& a, const FormKey& x);
// h . form, letter-diagonal
FormVec form_act(const Coalgebra& hc, const Action& act, const AlgebraModel& a, std::size_t hb, const FormKey& x);

enum class FormOp {
  D,      // k -> k+1
  Bh,     // Hochschild b, k -> k-1
  Kappa,  // Karoubi operator, k -> k
  B,      // Connes B = sum kappa^i d, k -> k+1
};
const char* form_op_name(FormOp o);

// M (x) Omega^k(A) for k = 0..K, optionally cut to total weight <= window
class OmegaBundle {
 public:
  static constexpr std::size_t no_window = std::numeric_limits<std::size_t>::max();

  OmegaBundle(const HopfAlgebra& h, AlgebraModel a, const SAYDModule& m, std::size_t K,
              std::size_t window = no_window);

  std::size_t K() const { return K_; }
  std::size_t window() const { return window_; }
  const AlgebraModel& algebra() const { return a_; }
  const HopfAlgebra& hopf() const { return h_; }
  const SAYDModule& module() const { return m_; }

  // keys are (m, a0, a1, ..., ak)
  const std::vector<FormKey>& keys(std::size_t k) const { return keys_.at(k); }
  std::size_t dim(std::size_t k) const { return keys_.at(k).size(); }
  // npos when the key is outside the window
  std::size_t index(const FormKey& key) const;
  std::size_t weight(const FormKey& key) const;
  std::string key_name(const FormKey& key) const;

  const SparseMatrix& raw(FormOp op, std::size_t k) const;
  bool has(FormOp op, std::size_t k) const;

  // M (x)_H Omega^k and its natural quotient by twisted graded commutators
  const Quotient& coeff(std::size_t k) const;
  const Quotient& nat(std::size_t k) const;
  const Subspace& commutators(std::size_t k) const;  // raw generators only, no coefficient relations
  // weights of the free coordinates
  std::vector<std::size_t> coeff_weights(std::size_t k) const;
  std::vector<std::size_t> nat_weights(std::size_t k) const;

  // op induced on M (x)_H Omega; DESCENT_FAILURE otherwise
  SparseMatrix op(FormOp o, std::size_t k) const;
  SparseMatrix nat_op(FormOp o, std::size_t k) const;

  // raw coefficient relations for an arbitrary H-stable list of keys
  Subspace coefficient_span(const std::vector<FormKey>& keys) const;
  // key -> position map helper for sub-lists
  SVec embed(const FormVec& f, std::size_t m) const;

 private:
  const HopfAlgebra& h_;
  AlgebraModel a_;
  const SAYDModule& m_;
  std::size_t K_, window_;
  std::vector<std::vector<FormKey>> keys_;
  std::map<FormKey, std::size_t> pos_;
  mutable std::map<std::pair<int, std::size_t>, SparseMatrix> ops_;
  mutable std::map<std::size_t, Quotient> coeff_, nat_;
  mutable std::map<std::size_t, Subspace> comm_;

  SVec twist(std::size_t hb, std::size_t x) const;  // S^{-1}(e_hb) . e_x
  SparseMatrix build(FormOp op, std::size_t k) const;
};

// Z/2-graded complex X0 <-> X1
struct SuperComplex {
  std::size_t dim0 = 0, dim1 = 0;
  SparseMatrix d0;  // X0 -> X1
  SparseMatrix d1;  // X1 -> X0
  std::vector<std::size_t> weight0, weight1;
  bool squares_zero() const;
  std::size_t h0() const;  // ker d0 / im d1
  std::size_t h1() const;  // ker d1 / im d0
  SuperComplex restrict_weight(std::size_t min_weight) const;
};

// Omega / F^n Omega with b + B; needs K >= n + 1
SuperComplex hodge_level(const OmegaBundle& w, std::size_t n);
// F^{n-1} / F^n, n >= 1; needs K >= n + 1
SuperComplex hodge_graded(const OmegaBundle& w, std::size_t n);
// X(A, M) : M (x)_H A <-> Omega^1_H(A, M)_nat with nat d and b
SuperComplex x_complex(const OmegaBundle& w);

// homology of (M (x)_H Omega, b) in degrees 0..K-1, restricted to weight >= min_weight
std::vector<std::size_t> hochschild_dims(const OmegaBundle& w, std::size_t min_weight = 0);
// cyclic homology via Hodge levels: dim H_n(Omega/F^n) in parity n, n = 0..K-1
std::vector<std::size_t> hodge_cyclic_dims(const OmegaBundle& w, std::size_t min_weight = 0);
// cohomology of (Omega_nat, d) in degrees 0..K-1, restricted to weight >= min_weight
std::vector<std::size_t> derham_dims(const OmegaBundle& w, std::size_t min_weight = 0);

// (M (x)_H F-bar)_nat computed straight from twisted commutators of words
std::size_t free_nat_dim(const OmegaBundle& w);

struct XFreeReport {
  SuperComplex x;          // reduced
  std::size_t h0 = 0;      // coker b on M (x)_H F-bar = reduced HC_0
  std::size_t h1 = 0;      // ker b / im nat d = reduced HC_1
  std::size_t even = 0, odd = 0;  // super homology of the reduced X-complex
  std::size_t nat_dim = 0;        // (M (x)_H F-bar)_nat
};
XFreeReport x_complex_free(const OmegaBundle& w);

// ----- small complex of T(V): M (x)_H (F (x) V) -> M (x)_H F
class SmallComplex {
 public:
  // w must be built on free_algebra(...).model; f is that free algebra
  SmallComplex(const OmegaBundle& w, const FreeAlgebra& f);

  const Quotient& c0() const { return w_.coeff(0); }
  const Quotient& c1() const { return q1_; }
  const SparseMatrix& b() const { return b_; }        // C1 -> C0
  const SparseMatrix& gamma() const { return gamma_; }  // C0 -> C1
  const SparseMatrix& incl1() const { return incl1_; }  // C1 -> Omega^1 (coefficient quotient)
  const SparseMatrix& phi1() const { return phi1_; }    // Omega^1 -> C1
  // h_n : Omega^n -> Omega^{n+1}, n = 0..K-1
  SparseMatrix h(std::size_t n) const;
  // raw recursive formula on one Hochschild key (m, f0, ..., fn)
  FormVec h_raw(const FormKey& key) const;

  // b h_n + h_{n-1} b = id - incl phi on Omega^n for n = 1..K-1
  bool homotopy_holds(std::string* witness = nullptr) const;
  bool phi_chain_map() const;      // phi0 b = b phi1, phi1 b = 0 on Omega^2
  bool phi_incl_identity() const;  // phi o incl = id
  bool gamma_bicomplex() const;    // b gamma = 0, gamma b = 0
  // C1 -> Omega^1_nat, f (x) v -> nat(f dv): iso intertwining (b, gamma) with (b, nat d)
  SparseMatrix to_x() const;

  std::vector<std::size_t> hochschild_dims(std::size_t min_weight = 0) const;  // H_0, H_1
  std::vector<std::size_t> cyclic_dims(std::size_t nmax, std::size_t min_weight = 0) const;
  std::vector<std::size_t> weights0() const { return w_.coeff_weights(0); }
  std::vector<std::size_t> weights1() const;

 private:
  const OmegaBundle& w_;
  const FreeAlgebra& f_;
  std::vector<FormKey> keys1_;
  std::map<FormKey, std::size_t> pos1_;
  Quotient q1_;
  SparseMatrix b_, gamma_, incl1_, phi1_;
  mutable std::map<std::size_t, SparseMatrix> h_;
  mutable std::map<FormKey, FormVec> memo_;
  FormVec phi1_raw(const FormKey& key) const;
};

// ----- I-adic filtration of X(R, M) for an H-stable ideal I of R
struct XFiltration {
  std::size_t p = 0;
  Subspace f0, f1;      // F^p_I X in X coordinates
  SuperComplex quotient;  // X / F^p_I X
};
// ideal: spanning vectors in R; DESCENT_FAILURE if not H-stable, INPUT_SHAPE if not an ideal
XFiltration x_filtration(const OmegaBundle& w, const std::vector<SVec>& ideal, std::size_t p);
// I^k spanned inside R
Subspace ideal_power(const AlgebraModel& a, const std::vector<SVec>& ideal, std::size_t k);

// ----- bar construction B(A) = sum_{p >= 1} A^{(x) p} and the cotrace N
struct BarBundle {
  std::size_t cap = 0, adim = 0;
  std::vector<std::size_t> dims;  // dims[p], p = 0..cap (dims[0] = 0)
  std::vector<SparseMatrix> codiff;  // codiff[p] : A^p -> A^{p-1}, p >= 2
  std::vector<SparseMatrix> t;       // signed cyclic shift on A^p
  std::vector<SparseMatrix> norm;    // 1 + t + ... + t^{p-1}
  std::vector<Subspace> natural;     // ker(1 - t)
  std::size_t index(const std::vector<std::size_t>& a) const;
};
BarBundle bar_and_cotrace(const AlgebraModel& a, std::size_t cap);

}  // namespace hopfcyc
