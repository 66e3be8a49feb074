#pragma once

#include <initializer_list>
#include <vector>

#include "dkit/field.hpp"

namespace dkit {

/// Dense row-major matrix of exact field elements.
class ExactMatrix {
 public:
  ExactMatrix() : rows_(0), cols_(0), field_(FieldSpec::rationals()) {}

  ExactMatrix(int rows, int cols, FieldSpec field)
      : rows_(rows), cols_(cols), field_(field),
        e_(static_cast<size_t>(rows) * static_cast<size_t>(cols), FieldElement(field)) {
    require(rows >= 0 && cols >= 0, errc::validation_failed, "negative matrix dimension");
  }

  static ExactMatrix identity(int n, FieldSpec field) {
    ExactMatrix m(n, n, field);
    for (int i = 0; i < n; ++i) m.at(i, i) = fe(field, 1);
    return m;
  }

  /// Rational literal rows, mainly for tests and the built-in catalog.
  static ExactMatrix from_rows(FieldSpec field, std::vector<std::vector<Rational>> rows) {
    const int r = static_cast<int>(rows.size());
    const int c = r == 0 ? 0 : static_cast<int>(rows[0].size());
    ExactMatrix m(r, c, field);
    for (int i = 0; i < r; ++i) {
      require(static_cast<int>(rows[static_cast<size_t>(i)].size()) == c, errc::validation_failed,
              "ragged matrix literal");
      for (int j = 0; j < c; ++j) m.at(i, j) = FieldElement(field, rows[static_cast<size_t>(i)][static_cast<size_t>(j)]);
    }
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  FieldSpec field() const { return field_; }

  FieldElement& at(int i, int j) { return e_[static_cast<size_t>(i) * static_cast<size_t>(cols_) + static_cast<size_t>(j)]; }
  const FieldElement& at(int i, int j) const {
    return e_[static_cast<size_t>(i) * static_cast<size_t>(cols_) + static_cast<size_t>(j)];
  }

  bool is_zero() const {
    for (const auto& x : e_)
      if (!x.is_zero()) return false;
    return true;
  }

  friend bool operator==(const ExactMatrix& a, const ExactMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.field_ == b.field_ && a.e_ == b.e_;
  }
  friend bool operator!=(const ExactMatrix& a, const ExactMatrix& b) { return !(a == b); }

  friend ExactMatrix operator+(const ExactMatrix& a, const ExactMatrix& b) {
    check_shape(a, b);
    ExactMatrix r = a;
    for (size_t i = 0; i < r.e_.size(); ++i) r.e_[i] += b.e_[i];
    return r;
  }

  friend ExactMatrix operator-(const ExactMatrix& a, const ExactMatrix& b) {
    check_shape(a, b);
    ExactMatrix r = a;
    for (size_t i = 0; i < r.e_.size(); ++i) r.e_[i] -= b.e_[i];
    return r;
  }

  friend ExactMatrix operator*(const ExactMatrix& a, const ExactMatrix& b) {
    require(a.field_ == b.field_, errc::field_mismatch, "matrix product over different fields");
    require(a.cols_ == b.rows_, errc::validation_failed, "matrix product shape mismatch");
    ExactMatrix r(a.rows_, b.cols_, a.field_);
    for (int i = 0; i < a.rows_; ++i)
      for (int k = 0; k < a.cols_; ++k) {
        const FieldElement& aik = a.at(i, k);
        if (aik.is_zero()) continue;
        for (int j = 0; j < b.cols_; ++j) {
          const FieldElement& bkj = b.at(k, j);
          if (bkj.is_zero()) continue;
          r.at(i, j) += aik * bkj;
        }
      }
    return r;
  }

  ExactMatrix scaled(const FieldElement& c) const {
    ExactMatrix r = *this;
    for (auto& x : r.e_) x *= c;
    return r;
  }

  ExactMatrix transposed() const {
    ExactMatrix r(cols_, rows_, field_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) r.at(j, i) = at(i, j);
    return r;
  }

  std::vector<FieldElement> row(int i) const {
    std::vector<FieldElement> r;
    r.reserve(static_cast<size_t>(cols_));
    for (int j = 0; j < cols_; ++j) r.push_back(at(i, j));
    return r;
  }

  std::vector<FieldElement> apply(const std::vector<FieldElement>& v) const {
    require(static_cast<int>(v.size()) == cols_, errc::validation_failed, "apply: length mismatch");
    std::vector<FieldElement> r(static_cast<size_t>(rows_), FieldElement(field_));
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j)
        if (!at(i, j).is_zero() && !v[static_cast<size_t>(j)].is_zero())
          r[static_cast<size_t>(i)] += at(i, j) * v[static_cast<size_t>(j)];
    return r;
  }

  ExactMatrix pow(int e) const {
    require(rows_ == cols_ && e >= 0, errc::validation_failed, "matrix power needs square matrix, e >= 0");
    ExactMatrix acc = identity(rows_, field_), base = *this;
    while (e > 0) {
      if (e & 1) acc = acc * base;
      base = base * base;
      e >>= 1;
    }
    return acc;
  }

 private:
  static void check_shape(const ExactMatrix& a, const ExactMatrix& b) {
    require(a.field_ == b.field_, errc::field_mismatch, "matrix sum over different fields");
    require(a.rows_ == b.rows_ && a.cols_ == b.cols_, errc::validation_failed, "matrix shape mismatch");
  }

  int rows_, cols_;
  FieldSpec field_;
  std::vector<FieldElement> e_;
};

}  // namespace dkit
