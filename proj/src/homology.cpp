#include "hopfcyc/homology.hpp"

namespace hopfcyc {

Cohomology::Cohomology(const SparseMatrix& d_in, const SparseMatrix& d_out, std::size_t dim_p)
    : n_(dim_p), cycles_(dim_p), bnd_(dim_p) {
  if (d_in.rows() != dim_p && !(d_in.rows() == 0 && d_in.cols() == 0))
    throw Error(ErrorCode::DimensionMismatch, "incoming differential shape");
  if (d_out.cols() != dim_p && !(d_out.rows() == 0 && d_out.cols() == 0))
    throw Error(ErrorCode::DimensionMismatch, "outgoing differential shape");
  auto kb = (d_out.cols() == dim_p) ? kernel_basis(d_out) : kernel_basis(SparseMatrix(0, dim_p));
  cycles_ = Subspace::span(dim_p, kb);
  if (d_in.rows() == dim_p) bnd_ = Subspace::image(d_in);
  if (!cycles_.contains(bnd_))
    throw Error(ErrorCode::IdentityFailure, "d_out * d_in != 0");
  Subspace acc = bnd_;
  for (const auto& k : kb) {
    SVec r = acc.reduce(k);
    if (r.empty()) continue;
    acc.insert(r);
    reps_.push_back(r);
  }
  std::vector<SVec> cols = bnd_.basis();
  nb_ = cols.size();
  for (const auto& r : reps_) cols.push_back(r);
  solver_ = std::make_shared<Solver>(SparseMatrix::from_columns(n_, cols));
}

SVec Cohomology::coords(const SVec& v) const {
  if (!cycles_.contains(v)) throw Error(ErrorCode::NotACocycle, "vector is not a cocycle", v);
  auto x = solver_->solve(v);
  if (!x) throw Error(ErrorCode::Internal, "cocycle outside boundaries + representatives", v);
  SVec c;
  for (const auto& [i, a] : *x)
    if (i >= nb_) c.emplace_back(i - nb_, a);
  return c;
}

SVec Cohomology::rep_of(const SVec& coords) const {
  Accum acc;
  for (const auto& [i, a] : coords) acc.add(reps_.at(i), a);
  return acc.take();
}

SparseMatrix induced_on_cohomology(const SparseMatrix& f, const Cohomology& src, const Cohomology& dst) {
  std::vector<SVec> cols;
  for (const auto& r : src.reps()) cols.push_back(dst.coords(f.apply(r)));
  return SparseMatrix::from_columns(dst.dim(), cols);
}

}  // namespace hopfcyc
