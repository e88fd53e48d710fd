#pragma once

#include "hopfcyc/exactla.hpp"
#include "hopfcyc/homology.hpp"
#include "hopfcyc/structures.hpp"

#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace hopfcyc {

// index of M (x) V^{(x) r}: m is the most significant digit
struct TensorIndexer {
  std::size_t dm = 1, dv = 1, r = 1;
  std::size_t size() const;
  std::size_t encode(std::size_t m, const std::vector<std::size_t>& v) const;
  void decode(std::size_t idx, std::size_t& m, std::vector<std::size_t>& v) const;
};

struct RelationCheck {
  std::string relation;
  bool ok = true;
};

struct IdentityReport {
  std::vector<RelationCheck> checks;
  bool cyclic = true;            // tau_n^{n+1} = id for all built n
  long first_noncyclic = -1;     // degree witnessing tau^{n+1} != id
  bool all_ok() const;           // everything except the cyclic flag
  std::string first_failure() const;
};

// cochain convention: C^n, delta_i : C^n -> C^{n+1}, sigma_i : C^{n+1} -> C^n
struct CocyclicModule {
  std::string label;
  std::size_t top = 0;  // spaces built for n = 0..top
  std::vector<std::size_t> dims;
  std::vector<std::vector<SparseMatrix>> delta;  // delta[n][i], n < top, i = 0..n+1
  std::vector<std::vector<SparseMatrix>> sigma;  // sigma[n][i] : C^{n+1} -> C^n, n < top, i = 0..n
  std::vector<SparseMatrix> tau;                 // tau[n], n <= top

  IdentityReport verify() const;
  void require_identities() const;  // throws IDENTITY_FAILURE (tau power excluded)

  SparseMatrix lambda(std::size_t n) const;  // (-1)^n tau_n
  SparseMatrix b(std::size_t n) const;       // C^n -> C^{n+1}
  SparseMatrix B(std::size_t n) const;       // C^n -> C^{n-1}, n >= 1
  SparseMatrix norm(std::size_t n) const;    // N = sum lambda^j on C^n
};

// chain convention for homology modules: X_n, d_i : X_n -> X_{n-1}, s_i : X_n -> X_{n+1}
struct CyclicModule {
  std::string label;
  std::size_t top = 0;
  std::vector<std::size_t> dims;
  std::vector<std::vector<SparseMatrix>> d;  // d[n][i], 1 <= n <= top, i = 0..n
  std::vector<std::vector<SparseMatrix>> s;  // s[n][i], n < top, i = 0..n
  std::vector<SparseMatrix> t;

  // transpose into the cocyclic module on the dual spaces
  CocyclicModule dual() const;
};

enum class HomologyMode { Hochschild, Cyclic, Periodic };
HomologyMode parse_mode(const std::string& s);
const char* mode_name(HomologyMode m);

// (b, B) total complex and derived data
class CyclicCohomology {
 public:
  CyclicCohomology(std::shared_ptr<const CocyclicModule> mod, std::size_t cap);

  std::size_t cap() const { return cap_; }
  const CocyclicModule& module() const { return *mod_; }

  std::vector<std::size_t> hochschild_dims() const;
  std::vector<std::size_t> cyclic_dims() const;
  std::vector<std::size_t> lambda_dims() const;

  const Cohomology& hh(std::size_t n) const;
  const Cohomology& hc(std::size_t n) const;  // on Tot^n
  const Cohomology& hlambda(std::size_t n) const;
  const SparseMatrix& lambda_basis(std::size_t n) const;  // C^n x dim, columns span ker(1 - lambda)

  std::size_t tot_dim(std::size_t n) const;
  SparseMatrix tot_d(std::size_t n) const;  // Tot^n -> Tot^{n+1}
  // embed a cochain of C^n into slot k of Tot^{n+2k}
  SVec tot_embed(const SVec& x, std::size_t n, std::size_t slot) const;
  SVec tot_component(const SVec& x, std::size_t n, std::size_t slot) const;

  SparseMatrix s_chain(std::size_t n) const;  // Tot^n -> Tot^{n+2}
  SparseMatrix s_matrix(std::size_t n) const;  // HC^n -> HC^{n+2} on harvested bases

  // class in HC^n of a lambda-invariant b-cocycle of C^n
  SVec hc_class_of_lambda_cocycle(const SVec& x, std::size_t n) const;

  struct Periodic {
    bool stabilized = false;
    std::size_t from = 0;
    std::size_t dim = 0;
    std::vector<std::size_t> s_ranks;  // rank of S : HC^p -> HC^{p+2}
  };
  Periodic periodic(std::size_t parity) const;

 private:
  std::shared_ptr<const CocyclicModule> mod_;
  std::size_t cap_;
  mutable std::vector<std::unique_ptr<Cohomology>> hh_, hc_, hl_;
  mutable std::vector<std::unique_ptr<SparseMatrix>> lb_;
  mutable int cyclic_ = -1;
  std::vector<std::size_t> slot_offset(std::size_t n) const;
  void require_cyclic() const;  // tau^{n+1} = id up to cap + 1, else IDENTITY_FAILURE
};

struct CocyclicOptions {
  bool literal_last_coface = false;  // delta_{n+1} with c0^{(1)} kept in front
  bool literal_codegeneracy = false;  // sigma_i applies eps to c_i
};

// M (x)_H C^{(x) n+1} for n = 0..top
CocyclicModule build_coalgebra_cocyclic(const HopfAlgebra& h, const ModuleCoalgebra& c, const SAYDModule& m,
                                        std::size_t top, const CocyclicOptions& opt = {});

// M (x)_H A^{(x) n+1}, homology convention
CyclicModule build_algebra_cyclic_homology(const HopfAlgebra& h, const ModuleAlgebra& a, const SAYDModule& m,
                                           std::size_t top);
// Hom_H(M (x) A^{(x) n+1}, k) realised as the dual of the quotient above
CocyclicModule build_algebra_cocyclic(const HopfAlgebra& h, const ModuleAlgebra& a, const SAYDModule& m,
                                      std::size_t top);

// dimension of the equivariance-constraint kernel {f : f(h.x) = eps(h) f(x)} on M (x) A^{n+1},
// with h.(m (x) a) = m S(h1) (x) h2 a
std::size_t hom_h_constraint_dim(const HopfAlgebra& h, const ModuleAlgebra& a, const SAYDModule& m, std::size_t n);

struct DescentReport {
  bool pass = true;
  std::string op;
  std::size_t degree = 0;
  SVec witness;
};
DescentReport verify_coalgebra_descent(const HopfAlgebra& h, const ModuleCoalgebra& c, const SAYDModule& m,
                                       std::size_t top);

// generic pieces reused by the Weil and forms modules
Subspace coefficient_relations(const HopfAlgebra& h, const SAYDModule& m, const Action& act, std::size_t dv,
                               std::size_t r);

}  // namespace hopfcyc
