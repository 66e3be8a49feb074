#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "dkit/matrix.hpp"

namespace dkit {

/// One linear-constraint row, sorted by column with no explicit zeros.
struct SparseRow {
  std::vector<std::pair<int, FieldElement>> ent;

  bool empty() const { return ent.empty(); }
  int leading_col() const { return ent.front().first; }

  void push(int col, FieldElement v) { ent.emplace_back(col, std::move(v)); }

  /// Sort by column and merge duplicate columns; assemblers may push freely.
  void compress() {
    std::sort(ent.begin(), ent.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<std::pair<int, FieldElement>> out;
    out.reserve(ent.size());
    for (auto& [c, v] : ent) {
      if (!out.empty() && out.back().first == c)
        out.back().second += v;
      else
        out.emplace_back(c, std::move(v));
    }
    std::erase_if(out, [](const auto& p) { return p.second.is_zero(); });
    ent = std::move(out);
  }

  static SparseRow from_dense(const std::vector<FieldElement>& v) {
    SparseRow r;
    for (size_t j = 0; j < v.size(); ++j)
      if (!v[j].is_zero()) r.push(static_cast<int>(j), v[j]);
    return r;
  }

  std::vector<FieldElement> to_dense(int ambient, FieldSpec field) const {
    std::vector<FieldElement> v(static_cast<size_t>(ambient), FieldElement(field));
    for (const auto& [c, x] : ent) v[static_cast<size_t>(c)] = x;
    return v;
  }
};

/// r + c*p where p's entries all have column >= p.leading_col().
inline SparseRow sparse_axpy(const SparseRow& r, const FieldElement& c, const SparseRow& p) {
  SparseRow out;
  out.ent.reserve(r.ent.size() + p.ent.size());
  size_t i = 0, j = 0;
  while (i < r.ent.size() || j < p.ent.size()) {
    if (j == p.ent.size() || (i < r.ent.size() && r.ent[i].first < p.ent[j].first)) {
      out.ent.push_back(r.ent[i++]);
    } else if (i == r.ent.size() || p.ent[j].first < r.ent[i].first) {
      out.ent.emplace_back(p.ent[j].first, c * p.ent[j].second);
      ++j;
    } else {
      FieldElement v = r.ent[i].second + c * p.ent[j].second;
      if (!v.is_zero()) out.ent.emplace_back(r.ent[i].first, std::move(v));
      ++i;
      ++j;
    }
  }
  return out;
}

/// Incremental reduced-row-echelon accumulator. Rows are fed one at a time;
/// the stored pivot rows always form the unique RREF of the row space seen so
/// far, so the final output does not depend on insertion order.
class RrefBuilder {
 public:
  RrefBuilder(int ambient, FieldSpec field) : ambient_(ambient), field_(field) {}

  int ambient() const { return ambient_; }
  FieldSpec field() const { return field_; }
  int rank() const { return static_cast<int>(rows_.size()); }

  /// Reduce against current pivot rows; the leftover is in reduced form with
  /// respect to them (zero iff the row lies in the current row space).
  SparseRow reduce(SparseRow r) const {
    size_t idx = 0;
    while (idx < r.ent.size()) {
      const int c = r.ent[idx].first;
      auto it = rows_.find(c);
      if (it == rows_.end()) {
        ++idx;
        continue;
      }
      FieldElement coef = -r.ent[idx].second;
      // pivot rows have leading entry 1 at their pivot column, so the merge
      // cancels column c exactly and touches nothing before idx
      SparseRow tail;
      tail.ent.assign(r.ent.begin() + static_cast<long>(idx), r.ent.end());
      SparseRow merged = sparse_axpy(tail, coef, it->second);
      r.ent.resize(idx);
      r.ent.insert(r.ent.end(), merged.ent.begin(), merged.ent.end());
    }
    return r;
  }

  bool reduces_to_zero(const SparseRow& r) const { return reduce(r).empty(); }

  /// Returns true when the row enlarged the span.
  bool add_row(SparseRow r) {
    r = reduce(std::move(r));
    if (r.empty()) return false;
    FieldElement inv = r.ent.front().second.inverse();
    for (auto& [c, v] : r.ent) v *= inv;
    const int lead = r.leading_col();
    for (auto& [pc, row] : rows_) {
      if (pc >= lead) continue;  // RREF rows are zero left of their pivot
      auto pos = std::lower_bound(row.ent.begin(), row.ent.end(), lead,
                                  [](const auto& p, int c) { return p.first < c; });
      if (pos == row.ent.end() || pos->first != lead) continue;
      row = sparse_axpy(row, -pos->second, r);
    }
    rows_.emplace(lead, std::move(r));
    return true;
  }

  void add_dense_row(const std::vector<FieldElement>& v) { add_row(SparseRow::from_dense(v)); }

  void add_matrix_rows(const ExactMatrix& m) {
    for (int i = 0; i < m.rows(); ++i) add_dense_row(m.row(i));
  }

  std::vector<int> pivot_columns() const {
    std::vector<int> p;
    p.reserve(rows_.size());
    for (const auto& [c, row] : rows_) p.push_back(c);
    return p;
  }

  const std::map<int, SparseRow>& pivot_rows() const { return rows_; }

  /// The canonical RREF matrix (rank x ambient, rows ordered by pivot column).
  ExactMatrix to_matrix() const {
    ExactMatrix m(rank(), ambient_, field_);
    int i = 0;
    for (const auto& [c, row] : rows_) {
      for (const auto& [col, v] : row.ent) m.at(i, col) = v;
      ++i;
    }
    return m;
  }

  /// Canonical basis of {x : R x = 0} where R is the accumulated row space.
  /// Kernel rows are re-canonicalized, so the result is again an RREF basis.
  ExactMatrix kernel_basis() const {
    std::vector<bool> is_pivot(static_cast<size_t>(ambient_), false);
    for (const auto& [c, row] : rows_) is_pivot[static_cast<size_t>(c)] = true;
    RrefBuilder canon(ambient_, field_);
    for (int fc = 0; fc < ambient_; ++fc) {
      if (is_pivot[static_cast<size_t>(fc)]) continue;
      SparseRow v;
      v.push(fc, fe(field_, 1));
      for (const auto& [pc, row] : rows_) {
        auto pos = std::lower_bound(row.ent.begin(), row.ent.end(), fc,
                                    [](const auto& p, int c) { return p.first < c; });
        if (pos != row.ent.end() && pos->first == fc) v.push(pc, -pos->second);
      }
      v.compress();
      canon.add_row(std::move(v));
    }
    return canon.to_matrix();
  }

 private:
  int ambient_;
  FieldSpec field_;
  std::map<int, SparseRow> rows_;  // pivot column -> normalized row
};

/// RREF of a dense matrix.
inline ExactMatrix rref(const ExactMatrix& m) {
  RrefBuilder b(m.cols(), m.field());
  b.add_matrix_rows(m);
  return b.to_matrix();
}

inline int rank(const ExactMatrix& m) {
  RrefBuilder b(m.cols(), m.field());
  b.add_matrix_rows(m);
  return b.rank();
}

/// Any solution of A x = b, or nullopt if inconsistent (free variables 0).
inline std::optional<std::vector<FieldElement>> solve(const ExactMatrix& a,
                                                      const std::vector<FieldElement>& b) {
  require(static_cast<int>(b.size()) == a.rows(), errc::validation_failed, "solve: rhs length mismatch");
  RrefBuilder bld(a.cols() + 1, a.field());
  for (int i = 0; i < a.rows(); ++i) {
    SparseRow r;
    for (int j = 0; j < a.cols(); ++j)
      if (!a.at(i, j).is_zero()) r.push(j, a.at(i, j));
    if (!b[static_cast<size_t>(i)].is_zero()) r.push(a.cols(), b[static_cast<size_t>(i)]);
    bld.add_row(std::move(r));
  }
  std::vector<FieldElement> x(static_cast<size_t>(a.cols()), FieldElement(a.field()));
  for (const auto& [pc, row] : bld.pivot_rows()) {
    if (pc == a.cols()) return std::nullopt;  // pivot in the augmented column
    if (!row.ent.empty() && row.ent.back().first == a.cols())
      x[static_cast<size_t>(pc)] = row.ent.back().second;
  }
  return x;
}

/// Expresses v in the span of independent rows `basis`; nullopt if outside.
inline std::optional<std::vector<FieldElement>> coordinates_in_span(
    const ExactMatrix& basis, const std::vector<FieldElement>& v) {
  return solve(basis.transposed(), v);
}

}  // namespace dkit
