#pragma once

#include "hopfcyc/cyclic.hpp"
#include "hopfcyc/exactla.hpp"
#include "hopfcyc/homology.hpp"
#include "hopfcyc/structures.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <tuple>
#include <vector>

namespace hopfcyc {

// letter code: c < dc is i_c, dc + c is w_c
using Word = std::vector<std::uint16_t>;

struct WeilOptions {
  bool signed_rel = true;  // Koszul sign in the twisted cyclic operator
  // b_t(m x a) = (-1)^|a| t(a delta(x)) instead of (-1)^|x| t(x delta(a));
  // the literal form does not make N and t - 1 chain maps
  bool literal_bt = false;
};

// which relations a block is divided by
enum class Flavor {
  Raw,    // M (x) W
  Coeff,  // M (x)_H W
  Nat,    // + Im(1 - t)
  Hat,    // + Im d + Im(1 - kappa)
  X,      // + Im(1 - t) + Im d
};
const char* flavor_name(Flavor f);

enum class WeilOp {
  D,       // (p,k) -> (p+1,k+1)
  Delta,   // (p,k) -> (p+1,k)
  T,       // (p,k) -> (p,k)
  Norm,    // 1 + t + ... + t^{l-1}
  H,       // homotopy, (p,k) -> (p-1,k-1)
  Hnorm,   // H / (letter count)
  Kb,      // Karoubi b, (p,k) -> (p-1,k-1)
  Kappa,   // 1 - (db + bd)
  Bt,      // (p,k) -> (p+1,k)
};
const char* op_name(WeilOp o);

// M (x) W(C) split into blocks of total degree p and w-count k.
// Everything is built lazily and cached; the object is not thread-safe.
class WeilAlgebra {
 public:
  WeilAlgebra(const HopfAlgebra& h, const ModuleCoalgebra& c, const SAYDModule& m, std::size_t max_degree,
              WeilOptions opt = {});

  std::size_t max_degree() const { return D_; }
  std::size_t coalgebra_dim() const { return dc_; }
  std::size_t module_dim() const { return dm_; }
  const WeilOptions& options() const { return opt_; }
  const Coalgebra& coalgebra() const { return *c_.coalg; }

  bool valid(std::size_t p, std::size_t k) const { return p >= 1 && p <= D_ && 2 * k <= p; }
  const std::vector<Word>& words(std::size_t p, std::size_t k) const;
  std::size_t dim(std::size_t p, std::size_t k) const;  // raw
  std::size_t index(std::size_t m, std::size_t p, std::size_t k, const Word& w) const;
  SVec unit(const Word& w, std::size_t m = 0) const;

  // "i", "w" for one-dimensional C, otherwise "i0", "w1", ...
  std::string word_name(const Word& w) const;
  Word word_from(const std::string& s) const;
  static std::size_t degree(const Word& w, std::size_t dc);
  static std::size_t w_count(const Word& w, std::size_t dc);

  // raw operator, empty 0x0 when the target block is not built
  const SparseMatrix& raw(WeilOp op, std::size_t p, std::size_t k) const;
  std::pair<std::size_t, std::size_t> target(WeilOp op, std::size_t p, std::size_t k) const;
  bool has_target(WeilOp op, std::size_t p, std::size_t k) const;

  const Subspace& relations(Flavor f, std::size_t p, std::size_t k) const;
  const Quotient& quotient(Flavor f, std::size_t p, std::size_t k) const;
  std::size_t qdim(Flavor f, std::size_t p, std::size_t k) const { return quotient(f, p, k).dim(); }
  // op induced between quotients; DESCENT_FAILURE with witness otherwise
  SparseMatrix induced(WeilOp op, std::size_t p, std::size_t k, Flavor src, Flavor dst) const;
  // map between flavors of one block (dst relations must contain src relations)
  SparseMatrix change(std::size_t p, std::size_t k, Flavor src, Flavor dst) const;

 private:
  const HopfAlgebra& h_;
  const ModuleCoalgebra& c_;
  const SAYDModule& m_;
  std::size_t D_, dc_, dm_;
  WeilOptions opt_;

  struct Block {
    std::vector<Word> words;
    std::map<Word, std::size_t> pos;
  };
  mutable std::map<std::pair<std::size_t, std::size_t>, Block> blocks_;
  mutable std::map<std::tuple<int, std::size_t, std::size_t>, SparseMatrix> ops_;
  mutable std::map<std::tuple<int, std::size_t, std::size_t>, Subspace> rels_;
  mutable std::map<std::tuple<int, std::size_t, std::size_t>, Quotient> quots_;
  mutable std::map<std::pair<std::size_t, Word>, std::vector<std::pair<std::pair<std::size_t, Word>, Scalar>>> kb_memo_;

  const Block& block(std::size_t p, std::size_t k) const;
  std::size_t letter_deg(std::uint16_t code) const { return code < dc_ ? 1 : 2; }
  // h . word, diagonal over the letters
  std::map<Word, Scalar> act_word(const SVec& h, const Word& w) const;
  std::vector<std::pair<std::pair<std::size_t, Word>, Scalar>> kb_terms(std::size_t m, const Word& w) const;
  SparseMatrix build(WeilOp op, std::size_t p, std::size_t k) const;
};

// the ground-field structures (H = C = M = k), owned statically
const Bundle& ground_bundle();

// ----- complexes assembled from blocks

// cochain complex in total degrees 1..D built from quotient blocks
struct BlockComplex {
  const WeilAlgebra* w = nullptr;
  Flavor flavor = Flavor::Nat;
  std::size_t kmin = 0, kmax = 0;  // w-count window
  bool use_d = true, use_delta = true;

  std::vector<std::size_t> ks(std::size_t p) const;
  std::vector<std::size_t> offsets(std::size_t p) const;
  std::size_t dim(std::size_t p) const;
  SparseMatrix diff(std::size_t p) const;  // degree p -> p+1
  Cohomology cohomology(std::size_t p) const;  // requires p + 1 <= D
  std::vector<std::size_t> dims(std::size_t pmax) const;  // p = 1..pmax
  SVec component(const SVec& x, std::size_t p, std::size_t k) const;
  SVec embed(const SVec& x, std::size_t p, std::size_t k) const;
};

BlockComplex tower_complex(const WeilAlgebra& w, std::size_t n);      // W_n^H(C,M)_nat
BlockComplex full_complex(const WeilAlgebra& w);                     // W^H(C,M)_nat
BlockComplex ideal_complex(const WeilAlgebra& w, std::size_t n);     // I_{n}: w-count >= n
BlockComplex x_complex(const WeilAlgebra& w, std::size_t n);         // (I^(n)_nat / Im d, delta)

// ----- chain-level maps between the X^n complexes

class WeilChase {
 public:
  explicit WeilChase(const WeilAlgebra& w) : w_(w) {}
  // H^p(X^n) -> H^{p+2}(X^{n+1}); x is a delta-cocycle in X-coordinates of block (p,n)
  SVec phi(const SVec& x, std::size_t p, std::size_t n) const;
  // H^{q}(X^{n+1}) -> H^{q-2}(X^n)
  SVec psi(const SVec& y, std::size_t q, std::size_t n) const;
  // connecting map of 0 -> X^{n-1} -d-> I^(n)_nat -> X^n -> 0, H^q(X^n) -> H^q(X^{n-1})
  SVec delta_star(const SVec& y, std::size_t q, std::size_t n) const;
  // H^p(W_n nat) -> H^p(X^n): top component mod Im d (x in tower coordinates)
  SVec p_map(const SVec& x, std::size_t p, std::size_t n) const;
  // psi^n o p : H^p(W_n nat) -> H^{p-2n}(X^0)
  SVec alpha(const SVec& x, std::size_t p, std::size_t n) const;

 private:
  const WeilAlgebra& w_;
};

// W_0 nat degree q -> lambda-invariant cochains of C^{q-1}: (-1)^q N o lift, a chain map.
// mod must be the coalgebra cocyclic module of the same (H, C, M).
SparseMatrix sigma_to_lambda(const WeilAlgebra& w, const CocyclicModule& mod, std::size_t q);

// sigma(cs_n)(xi) for xi in M (x) C (raw block (1,0)): m (x) i_{c1} w_{c2} ... w_{c(n+1)}
SVec cs_evaluate(const WeilAlgebra& w, const SVec& xi, std::size_t n);

struct FactorReport {
  std::size_t m = 0, n = 0;
  bool defined = false;  // the class of sigma(cs_{m+n})(xi) is nonzero
  Scalar measured;       // phi^n [xi] = measured [sigma(cs_{m+n})(xi)]
  Scalar inverse;        // psi^n [sigma(cs_{m+n})(xi)] = inverse [xi]
  Scalar expected;       // (m+1)/(m+n+1)
  bool matches = false;
  std::string note;
};
// xi: cotrace in raw coordinates of block (m+1, 0). m = 0 for general n, any m for n = 0.
FactorReport cotrace_factor(const WeilAlgebra& w, const SVec& xi, std::size_t m, std::size_t n);

// ----- reports

struct ExactnessSlot {
  std::size_t p = 0, k = 0;
  std::string slot;
  bool exact = true;
};
struct SequenceReport {
  std::string which;
  std::vector<ExactnessSlot> slots;
  bool chain_maps = true;  // N and (t - 1) intertwine the differentials
  std::string chain_witness;
  bool all_exact() const;
};
// which: "comw1" (w-count <= n), "comi1" (w-count >= n), or "longcom" (periodic N / t - 1 slots)
SequenceReport sequence_check(const WeilAlgebra& w, const std::string& which, std::size_t n, std::size_t pmax);

struct CsFinding {
  std::size_t n = 0;
  std::string identity;
  std::string quotient;
  bool holds = false;
};
std::vector<CsFinding> cs_identity_check(std::size_t nmax);

struct OperatorReport {
  bool homotopy = true;     // d H' + H' d = id on raw blocks
  bool h_descends = true;   // H' induced on M (x)_H W and on the nat quotient
  bool norm_kills = true;   // N (t - 1) = (t - 1) N = 0 on M (x)_H W
  bool d_squared = true, delta_squared = true, anticommute = true;
  std::string witness;
  bool all_ok() const { return homotopy && h_descends && norm_kills && d_squared && delta_squared && anticommute; }
};
OperatorReport operator_check(const WeilAlgebra& w, std::size_t pmax);

// beta: H^p(W_n nat) -> H^{p+1}(I_{n+1} nat), connecting map through the acyclic W nat
struct BetaReport {
  std::size_t n = 0, p = 0;
  std::size_t src_dim = 0, dst_dim = 0, rank = 0;
  SparseMatrix matrix;
  bool iso() const { return src_dim == dst_dim && rank == src_dim; }
};
BetaReport beta_map(const WeilAlgebra& w, std::size_t n, std::size_t p);

// psi_n o phi_n = id on H^p(X^n)
bool psi_phi_identity(const WeilAlgebra& w, std::size_t n, std::size_t p);

// c with c * delta*_{n+1} phi_n = phi_{n-1} delta*_n on H^p(X^n), n >= 1
struct ScalingReport {
  std::size_t n = 0, p = 0;
  bool defined = false;  // both sides nonzero on the sampled classes
  bool proportional = false;
  Scalar measured;
};
ScalingReport scaling_check(const WeilAlgebra& w, std::size_t n, std::size_t p);

// transported projection A_{n-1} pi_n A_n^{-1} : HC^q -> HC^{q+2}, q = p - 1 - 2n, against S
struct SCompatReport {
  std::size_t n = 0, p = 0, q = 0;
  bool defined = false;
  bool proportional = false;
  Scalar measured;  // transported pi = measured * S
  bool alpha_iso = false;
};
SCompatReport s_compat(const WeilAlgebra& w, const CyclicCohomology& cc, std::size_t n, std::size_t p);
// A_n : H^p(W_n nat) -> HC^{p-1-2n}, matrix on harvested bases
SparseMatrix alpha_matrix(const WeilAlgebra& w, const CyclicCohomology& cc, std::size_t n, std::size_t p);

std::size_t letter_count(const Word& w);

}  // namespace hopfcyc
