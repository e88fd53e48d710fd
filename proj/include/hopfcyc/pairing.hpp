#pragma once

#include "hopfcyc/cyclic.hpp"
#include "hopfcyc/exactla.hpp"
#include "hopfcyc/forms.hpp"
#include "hopfcyc/structures.hpp"
#include "hopfcyc/weil.hpp"

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace hopfcyc {

// R = Omega^even(A) with the Fedosov product, cut above form degree 2 (n_max + 1).
// weight of a basis vector = its level (form degree / 2); I^k = levels >= k.
struct UniversalExtension {
  std::size_t n_max = 0, top = 0;  // top = n_max + 1
  AlgebraModel a;
  AlgebraModel r;
  std::vector<FormKey> keys;  // (a0, a1, ..., a_2j)
  std::map<FormKey, std::size_t> pos;
  SparseMatrix rho;  // A -> R
  const Coalgebra* c = nullptr;

  std::size_t dim() const { return r.dim; }
  std::size_t level(std::size_t i) const { return r.weight.at(i); }
  SVec element(const FormVec& f) const;  // forms above the cut are dropped
  Subspace ideal_power(std::size_t k) const;
};

// ACTION_EXTENSION_FAILURE when the diagonal C-action breaks c(x o y) = c1(x) o c2(y)
UniversalExtension build_extension(const HopfAlgebra& h, const ModuleAlgebra& a, std::size_t n_max);
// replace the splitting; INPUT_SHAPE unless it is a section that is H- and C-linear
void set_splitting(const HopfAlgebra& h, UniversalExtension& e, const SparseMatrix& rho);

// spans inside M (x) R, index m * dim R + r
Subspace extension_coefficient_relations(const HopfAlgebra& h, const UniversalExtension& e, const SAYDModule& m);
// m (x) x r - m0 (x) S^-1(m-1)(r) x for x in level >= lx, r in level >= lr
Subspace twisted_commutators(const HopfAlgebra& h, const UniversalExtension& e, const SAYDModule& m,
                             std::size_t lx, std::size_t lr);

struct MTrace {
  bool odd = false;
  std::size_t order = 0;
  SVec functional;  // covector on M (x) R
};
// basis of even traces on M (x)_H R / I^{n+1}, or odd traces on M (x)_H I^{n+1} killing [I^n, I]
std::vector<MTrace> find_traces(const HopfAlgebra& h, const UniversalExtension& e, const SAYDModule& m,
                                std::size_t order, bool odd);
// TRACE_INVALID with the offending relation as witness
void validate_trace(const HopfAlgebra& h, const UniversalExtension& e, const SAYDModule& m, const MTrace& t);
// restriction of an even trace of top order to I^{n+1}
MTrace restrict_to_ideal(const UniversalExtension& e, std::size_t dm, const MTrace& t, std::size_t n);

// DG-algebra map W(C) -> Hom(B(A), R), rho#(i_c) = rho o c, D phi = -phi o b'
class RhoSharp {
 public:
  RhoSharp(const HopfAlgebra& h, const UniversalExtension& e, const WeilAlgebra& w, const SAYDModule& m,
           const BarBundle& bar);

  const UniversalExtension& extension() const { return e_; }
  const BarBundle& bar() const { return bar_; }
  // R x A^{(x) p}, p = degree of the word
  const SparseMatrix& word(const Word& u) const;
  SparseMatrix cup(const SparseMatrix& f, std::size_t p, const SparseMatrix& g, std::size_t q) const;
  SparseMatrix D(const SparseMatrix& phi, std::size_t p) const;
  // raw M (x) W vector of block (p, k) -> (M (x) R) x A^{(x) p}
  SparseMatrix evaluate(const SVec& raw, std::size_t p, std::size_t k) const;

  struct Check {
    bool dg = true;          // rho#(del u) = D rho#(u)
    bool curvature = true;   // rho#(w_c) lands in Hom(A^2, I)
    bool filtration = true;  // words with k letters w land in I^k
    bool h_linear = true;    // coefficient relations go to coefficient relations
    std::string witness;
    bool ok() const { return dg && curvature && filtration && h_linear; }
  };
  Check verify(std::size_t pmax) const;

 private:
  const HopfAlgebra& h_;
  const UniversalExtension& e_;
  const WeilAlgebra& w_;
  const SAYDModule& m_;
  const BarBundle& bar_;
  std::size_t dc_;
  mutable std::map<Word, SparseMatrix> memo_;
  Subspace coeff_rel_;
};

// ordinary cyclic cohomology of A (H = k, M = k); cochains indexed like B(A)
class AlgebraCyclic {
 public:
  AlgebraCyclic(const AlgebraModel& a, std::size_t top);
  const CyclicCohomology& cc() const { return *cc_; }
  bool closed(const SVec& phi, std::size_t q) const;
  bool cyclic(const SVec& phi, std::size_t q) const;
  SVec hc_class(const SVec& phi, std::size_t q) const;  // NOT_A_COCYCLE if not closed and cyclic
  SparseMatrix s_matrix(std::size_t q) const { return cc_->s_matrix(q); }

 private:
  Algebra alg_;
  ModuleAlgebra ma_;
  std::shared_ptr<const CocyclicModule> mod_;
  std::unique_ptr<CyclicCohomology> cc_;
};

struct CupResult {
  std::size_t degree = 0;  // cyclic degree p - 1
  SVec cochain;            // on A^{(x) p}
  bool closed = false;
  bool well_defined = false;  // relations of the source go to zero
  SVec hc_class;              // coordinates in HC^{p-1}(A)
};

// everything needed for the pairings on one (H, C, A, M)
class PairingInstance {
 public:
  PairingInstance(const HopfAlgebra& h, const ModuleCoalgebra& c, const ModuleAlgebra& a, const SAYDModule& m,
                  std::size_t n_max, std::size_t max_degree, WeilOptions opt = {});

  const HopfAlgebra& hopf() const { return h_; }
  const SAYDModule& module() const { return m_; }
  const UniversalExtension& extension() const { return ext_; }
  UniversalExtension& extension() { return ext_; }
  const WeilAlgebra& weil() const { return *w_; }
  const BarBundle& bar() const { return bar_; }
  const RhoSharp& rho_sharp() const { return *rs_; }
  const AlgebraCyclic& algebra_cyclic() const { return *hca_; }
  const CyclicCohomology& coalgebra_cyclic() const { return *hcc_; }
  // rebuild rho# after set_splitting
  void refresh();

  // x in W_n nat tower coordinates (degree p), tau even of order n
  CupResult cup_even(const SVec& x, std::size_t n, std::size_t p, const MTrace& tau) const;
  // x in I_{n+1} nat coordinates (degree p), tau odd of order n
  CupResult cup_odd(const SVec& x, std::size_t n, std::size_t p, const MTrace& tau) const;
  // HC^{p-1}(A) coordinates of the cups of the harvested basis of H^p(W_n nat)
  SparseMatrix cup_matrix(std::size_t n, std::size_t p, const MTrace& tau) const;

  // m (x) c0 (x) ... (x) cq -> tau(m (x) c0(a0) ... cq(aq)), xi raw in block (q+1, 0)
  SVec characteristic_map(const SVec& xi, std::size_t q, const MTrace& tau) const;

 private:
  const HopfAlgebra& h_;
  const ModuleCoalgebra& c_;
  const ModuleAlgebra& a_;
  const SAYDModule& m_;
  std::size_t D_;
  UniversalExtension ext_;
  std::unique_ptr<WeilAlgebra> w_;
  BarBundle bar_;
  std::unique_ptr<RhoSharp> rs_;
  std::unique_ptr<AlgebraCyclic> hca_;
  std::shared_ptr<const CocyclicModule> cmod_;
  std::unique_ptr<CyclicCohomology> hcc_;

  CupResult finish(const std::vector<std::pair<SVec, std::size_t>>& raws, std::size_t p, const MTrace& tau,
                   const std::vector<std::pair<std::size_t, std::size_t>>& rel_blocks) const;
};

// ----- the construction through Omega A and the cotraces of C

// closed graded traces of degree n: covectors on Omega_nat^n vanishing on nat d(Omega^{n-1})
std::vector<SVec> find_closed_traces(const OmegaBundle& w, std::size_t n);
// normalized, cyclic, delta-closed xi in raw coordinates of block (m+1, 0), one per class of M (x)_H
std::vector<SVec> find_cotraces(const WeilAlgebra& w, std::size_t m);
// COTRACE_INVALID naming the failed condition
void validate_cotrace(const WeilAlgebra& w, const SVec& xi, std::size_t m);

// int o ev_xi o tau o rho(cs_{m+n}) o N on A^{(x) m+n+1}; C acts on A through w's algebra model
SVec khalkhali_cup(const OmegaBundle& om, const Coalgebra& c, const SVec& trace, std::size_t n,
                   const WeilAlgebra& w, const SVec& xi, std::size_t m, const BarBundle& bar);
// int o rho_C(x) o N for x raw in block (p, k) of W(C), rho_C : W(C) -> Hom(B(A), Omega A), k = trace degree
SVec weil_to_forms_cup(const OmegaBundle& om, const SVec& trace, const WeilAlgebra& w, const SVec& x,
                       std::size_t p, std::size_t k, const BarBundle& bar);
// the even trace int o (top component) of order n on R / I^{n+1}, from a closed trace of degree 2n
MTrace trace_from_closed(const OmegaBundle& om, const UniversalExtension& e, const SVec& trace, std::size_t n);

// ----- comparisons

struct SRelationReport {
  std::size_t n = 0, p = 0;
  bool defined = false;
  bool truncation = false;     // cup(x, tau o p) = cup(pi x, tau) on every class
  bool proportional = false;   // S_A o cup = measured * cup o (transported S_C)
  Scalar measured;
  std::string note;
};
// x ranges over H^p(W_n nat), tau even of order n; needs n >= 0, p + 3 <= max degree
SRelationReport s_relation(const PairingInstance& in, std::size_t n, std::size_t p, const MTrace& tau);

struct PairingComparison {
  std::vector<FactorReport> factors;  // (m, n) on the point instance
  std::vector<std::string> notes;
};
// factor checks of the final comparison on the ground point instance
PairingComparison compare_pairings(const std::vector<std::pair<std::size_t, std::size_t>>& mn);

}  // namespace hopfcyc
