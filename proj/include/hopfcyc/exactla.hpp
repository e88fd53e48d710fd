#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace hopfcyc {

using Scalar = mpq_class;
using Integer = mpz_class;

// sparse vectors: sorted by index, no stored zeros
using SVec = std::vector<std::pair<std::size_t, Scalar>>;
using ZVec = std::vector<std::pair<std::size_t, Integer>>;
using Vec = std::vector<Scalar>;

enum class ErrorCode {
  InputShape,
  DimensionMismatch,
  Inconsistent,
  DescentFailure,
  IdentityFailure,
  Unstabilized,
  DegreeOutOfRange,
  NotACocycle,
  TraceInvalid,
  CotraceInvalid,
  ActionExtensionFailure,
  CurvatureEscape,
  ParseError,
  UnresolvedReference,
  NotSupported,
  Internal,
};

const char* error_name(ErrorCode c);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& msg, SVec witness = {})
      : std::runtime_error(std::string(error_name(code)) + ": " + msg),
        code_(code), witness_(std::move(witness)) {}
  ErrorCode code() const { return code_; }
  const SVec& witness() const { return witness_; }

 private:
  ErrorCode code_;
  SVec witness_;
};

Scalar parse_scalar(const std::string& s);  // "p/q", "p", "-p/q"
std::string scalar_str(const Scalar& x);

// sparse vector helpers
SVec sv_unit(std::size_t i, const Scalar& c = 1);
SVec sv_add(const SVec& a, const SVec& b);
SVec sv_axpy(const SVec& y, const Scalar& a, const SVec& x);  // y + a x
SVec sv_scale(const SVec& v, const Scalar& a);
Scalar sv_get(const SVec& v, std::size_t i);
Scalar sv_dot(const SVec& a, const SVec& b);
SVec sv_from_dense(const Vec& v);
Vec sv_to_dense(const SVec& v, std::size_t n);

// accumulator for building sparse vectors out of many contributions
class Accum {
 public:
  void add(std::size_t i, const Scalar& c);
  void add(const SVec& v, const Scalar& c = 1);
  SVec take();
  bool empty() const { return m_.empty(); }

 private:
  std::map<std::size_t, Scalar> m_;
};

struct Entry {
  std::size_t row, col;
  Scalar val;
};

// coordinate form, sorted by (row, col), no zeros
class SparseMatrix {
 public:
  SparseMatrix() = default;
  SparseMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), ptr_(rows + 1, 0) {}

  static SparseMatrix identity(std::size_t n);
  static SparseMatrix from_entries(std::size_t rows, std::size_t cols, std::vector<Entry> e);
  static SparseMatrix from_columns(std::size_t rows, const std::vector<SVec>& cols);
  static SparseMatrix from_rows(std::size_t cols, const std::vector<SVec>& rows);
  static SparseMatrix from_dense(const std::vector<Vec>& rows, std::size_t cols);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t nnz() const { return e_.size(); }
  const std::vector<Entry>& entries() const { return e_; }

  Scalar at(std::size_t r, std::size_t c) const;
  SVec row(std::size_t r) const;
  std::vector<SVec> row_list() const;
  std::vector<SVec> column_list() const;
  SVec column(std::size_t c) const;

  SparseMatrix transpose() const;
  SVec apply(const SVec& v) const;
  Vec apply(const Vec& v) const;
  SparseMatrix operator*(const SparseMatrix& o) const;
  SparseMatrix operator+(const SparseMatrix& o) const;
  SparseMatrix operator-(const SparseMatrix& o) const;
  SparseMatrix scaled(const Scalar& a) const;
  bool is_zero() const { return e_.empty(); }
  bool operator==(const SparseMatrix& o) const;
  std::vector<Vec> to_dense() const;

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<Entry> e_;
  std::vector<std::size_t> ptr_{0};  // row offsets into e_
  void rebuild_ptr();
};

// echelon rows stored as primitive integer vectors with positive pivot,
// zero at every other pivot (fully reduced). optional payload tracks the
// combination of inserted vectors that produced each row.
class Echelon {
 public:
  explicit Echelon(std::size_t ambient = 0, bool track = false) : n_(ambient), track_(track) {}

  std::size_t ambient() const { return n_; }
  std::size_t rank() const { return rows_.size(); }
  bool tracking() const { return track_; }

  // returns true if the span grew; payload id is the insertion counter
  bool insert(const SVec& v);
  // remainder after reduction (zero at pivots); coeffs receives payload combination
  SVec reduce(const SVec& v, SVec* coeffs = nullptr) const;
  bool contains(const SVec& v) const;
  std::vector<std::size_t> pivots() const;
  std::vector<SVec> basis() const;  // rational rows, pivot normalised to 1
  std::size_t inserted() const { return count_; }

 private:
  struct Row {
    ZVec v;
    ZVec pay;
  };
  std::size_t n_;
  bool track_;
  std::size_t count_ = 0;
  std::map<std::size_t, Row> rows_;
};

class Subspace {
 public:
  explicit Subspace(std::size_t ambient = 0) : e_(ambient) {}
  static Subspace span(std::size_t ambient, const std::vector<SVec>& gens);
  static Subspace image(const SparseMatrix& m);
  static Subspace kernel(const SparseMatrix& m);
  static Subspace whole(std::size_t n);

  std::size_t ambient_dim() const { return e_.ambient(); }
  std::size_t dim() const { return e_.rank(); }
  bool insert(const SVec& v) { return e_.insert(v); }
  SVec reduce(const SVec& v) const { return e_.reduce(v); }
  bool contains(const SVec& v) const { return e_.contains(v); }
  bool contains(const Subspace& o) const;
  bool operator==(const Subspace& o) const;
  std::vector<std::size_t> pivots() const { return e_.pivots(); }
  std::vector<SVec> basis() const { return e_.basis(); }
  SparseMatrix basis_matrix() const;
  Subspace sum(const Subspace& o) const;
  Subspace intersect(const Subspace& o) const;

 private:
  Echelon e_;
};

std::size_t rank(const SparseMatrix& m);
std::vector<SVec> kernel_basis(const SparseMatrix& m);

// canonical solution of m x = b: free variables zero, pivot columns chosen greedily
std::optional<SVec> solve(const SparseMatrix& m, const SVec& b);

class Solver {
 public:
  explicit Solver(const SparseMatrix& m);
  std::optional<SVec> solve(const SVec& b) const;
  std::size_t rank() const { return e_.rank(); }

 private:
  std::size_t cols_;
  Echelon e_;
};

// V / R with basis the non-pivot coordinates of R
class Quotient {
 public:
  Quotient() = default;
  Quotient(std::size_t ambient, Subspace rel);

  std::size_t dim() const { return free_.size(); }
  std::size_t ambient_dim() const { return n_; }
  const Subspace& relations() const { return rel_; }
  const std::vector<std::size_t>& free_coords() const { return free_; }

  SVec project(const SVec& v) const;
  SVec lift(const SVec& q) const;
  SparseMatrix projection() const;
  SparseMatrix section() const;

 private:
  std::size_t n_ = 0;
  Subspace rel_;
  std::vector<std::size_t> free_;
  std::vector<std::ptrdiff_t> pos_;  // ambient coord -> quotient index or -1
};

// matrix of the map induced by op : V -> V' on V/R -> V'/R'
SparseMatrix induced_map(const SparseMatrix& op, const Quotient& src, const Quotient& dst);

}  // namespace hopfcyc
