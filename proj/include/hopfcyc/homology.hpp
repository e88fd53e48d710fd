#pragma once

#include "hopfcyc/exactla.hpp"

#include <memory>

namespace hopfcyc {

// H = ker(d_out) / im(d_in) at one spot of a cochain complex
class Cohomology {
 public:
  Cohomology() = default;
  // d_in : C^{p-1} -> C^p, d_out : C^p -> C^{p+1}; either may be empty (0 x n or n x 0)
  Cohomology(const SparseMatrix& d_in, const SparseMatrix& d_out, std::size_t dim_p);

  std::size_t dim() const { return reps_.size(); }
  std::size_t ambient_dim() const { return n_; }
  const Subspace& cycles() const { return cycles_; }
  const Subspace& boundaries() const { return bnd_; }
  const std::vector<SVec>& reps() const { return reps_; }

  bool is_cycle(const SVec& v) const { return cycles_.contains(v); }
  bool is_boundary(const SVec& v) const { return bnd_.contains(v); }
  // coordinates of the class of v in the harvested basis; throws NOT_A_COCYCLE
  SVec coords(const SVec& v) const;
  // representative for given class coordinates
  SVec rep_of(const SVec& coords) const;

 private:
  std::size_t n_ = 0;
  Subspace cycles_, bnd_;
  std::vector<SVec> reps_;
  std::shared_ptr<Solver> solver_;
  std::size_t nb_ = 0;
};

// matrix of the induced map on cohomology: coords of f(rep_j) in target
SparseMatrix induced_on_cohomology(const SparseMatrix& f, const Cohomology& src, const Cohomology& dst);

}  // namespace hopfcyc
