#pragma once

#include <vector>

#include "dkit/rref.hpp"

namespace dkit {

/// A subspace of a coordinate space, held as its unique reduced-row-echelon
/// basis. Two subspaces are equal iff their stored bases are identical.
class LinearSubspace {
 public:
  LinearSubspace() : ambient_(0), basis_(0, 0, FieldSpec::rationals()) {}

  static LinearSubspace zero(int ambient, FieldSpec field) {
    LinearSubspace s;
    s.ambient_ = ambient;
    s.basis_ = ExactMatrix(0, ambient, field);
    return s;
  }

  static LinearSubspace full(int ambient, FieldSpec field) {
    LinearSubspace s;
    s.ambient_ = ambient;
    s.basis_ = ExactMatrix::identity(ambient, field);
    return s;
  }

  /// Canonicalizes arbitrary spanning rows.
  static LinearSubspace from_rows(const ExactMatrix& rows) {
    RrefBuilder b(rows.cols(), rows.field());
    b.add_matrix_rows(rows);
    return from_builder(b);
  }

  static LinearSubspace from_builder(const RrefBuilder& b) {
    LinearSubspace s;
    s.ambient_ = b.ambient();
    s.basis_ = b.to_matrix();
    return s;
  }

  /// Accepts a matrix that is already in RREF (asserted by rebuilding).
  static LinearSubspace from_rref(const ExactMatrix& m) { return from_rows(m); }

  int ambient_dim() const { return ambient_; }
  int dim() const { return basis_.rows(); }
  FieldSpec field() const { return basis_.field(); }
  const ExactMatrix& basis() const { return basis_; }

  std::vector<FieldElement> basis_vector(int i) const { return basis_.row(i); }

  bool contains(const std::vector<FieldElement>& v) const {
    require(static_cast<int>(v.size()) == ambient_, errc::ambient_mismatch,
            "vector length differs from ambient dimension");
    RrefBuilder b(ambient_, basis_.field());
    b.add_matrix_rows(basis_);
    return b.reduces_to_zero(SparseRow::from_dense(v));
  }

  bool contains(const LinearSubspace& other) const {
    check_ambient(*this, other);
    RrefBuilder b(ambient_, basis_.field());
    b.add_matrix_rows(basis_);
    for (int i = 0; i < other.dim(); ++i)
      if (!b.reduces_to_zero(SparseRow::from_dense(other.basis_vector(i)))) return false;
    return true;
  }

  friend bool operator==(const LinearSubspace& a, const LinearSubspace& b) {
    return a.ambient_ == b.ambient_ && a.basis_ == b.basis_;
  }
  friend bool operator!=(const LinearSubspace& a, const LinearSubspace& b) { return !(a == b); }

  friend LinearSubspace sum(const LinearSubspace& a, const LinearSubspace& b) {
    check_ambient(a, b);
    RrefBuilder bld(a.ambient_, a.basis_.field());
    bld.add_matrix_rows(a.basis_);
    bld.add_matrix_rows(b.basis_);
    return from_builder(bld);
  }

  friend LinearSubspace intersect(const LinearSubspace& a, const LinearSubspace& b) {
    check_ambient(a, b);
    const int p = a.dim(), q = b.dim();
    FieldSpec f = a.basis_.field();
    // kernel of [A^T  B^T]: (x, y) with sum_i x_i a_i = -sum_j y_j b_j
    RrefBuilder bld(p + q, f);
    for (int c = 0; c < a.ambient_; ++c) {
      SparseRow r;
      for (int i = 0; i < p; ++i)
        if (!a.basis_.at(i, c).is_zero()) r.push(i, a.basis_.at(i, c));
      for (int j = 0; j < q; ++j)
        if (!b.basis_.at(j, c).is_zero()) r.push(p + j, b.basis_.at(j, c));
      bld.add_row(std::move(r));
    }
    ExactMatrix ker = bld.kernel_basis();
    RrefBuilder out(a.ambient_, f);
    for (int t = 0; t < ker.rows(); ++t) {
      SparseRow v;
      for (int c = 0; c < a.ambient_; ++c) {
        FieldElement acc(f);
        for (int i = 0; i < p; ++i)
          if (!ker.at(t, i).is_zero()) acc += ker.at(t, i) * a.basis_.at(i, c);
        if (!acc.is_zero()) v.push(c, std::move(acc));
      }
      out.add_row(std::move(v));
    }
    return from_builder(out);
  }

 private:
  static void check_ambient(const LinearSubspace& a, const LinearSubspace& b) {
    require(a.ambient_ == b.ambient_, errc::ambient_mismatch, "subspaces in different ambient spaces");
    require(a.basis_.field() == b.basis_.field(), errc::field_mismatch,
            "subspaces over different fields");
  }

  int ambient_;
  ExactMatrix basis_;
};

/// Solution space of M v = 0 as a canonical subspace of k^cols.
inline LinearSubspace nullspace(const ExactMatrix& m) {
  RrefBuilder b(m.cols(), m.field());
  b.add_matrix_rows(m);
  LinearSubspace s = LinearSubspace::from_rref(b.kernel_basis());
  return s;
}

inline LinearSubspace nullspace(const RrefBuilder& b) {
  return LinearSubspace::from_rref(b.kernel_basis());
}

/// Image of the subspace under coordinate selection (restriction of maps to a
/// sub-window, for instance), re-canonicalized in the smaller ambient space.
inline LinearSubspace project_coordinates(const LinearSubspace& s, const std::vector<int>& coords) {
  RrefBuilder b(static_cast<int>(coords.size()), s.field());
  for (int i = 0; i < s.dim(); ++i) {
    SparseRow r;
    for (size_t j = 0; j < coords.size(); ++j) {
      const FieldElement& v = s.basis().at(i, coords[j]);
      if (!v.is_zero()) r.push(static_cast<int>(j), v);
    }
    b.add_row(std::move(r));
  }
  return LinearSubspace::from_builder(b);
}

}  // namespace dkit
