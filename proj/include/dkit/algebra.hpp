#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "dkit/subspace.hpp"

namespace dkit {

/// Optional label enabling flavor-specific validation and helpers. No
/// algebraic identity is assumed for `generic`.
enum class Flavor { lie, associative, jordan, generic };

inline const char* flavor_name(Flavor f) {
  switch (f) {
    case Flavor::lie: return "lie";
    case Flavor::associative: return "associative";
    case Flavor::jordan: return "jordan";
    case Flavor::generic: return "generic";
  }
  return "?";
}

/// Sparse structure-constant entry: e_i e_j contains c * e_l.
struct StructureEntry {
  int i, j, l;
  FieldElement c;
};

/// Sparse action entry; for a left action e_i . m_a contains c * m_b, for a
/// right action m_a . e_i contains c * m_b (a and i swap index roles).
struct ActionEntry {
  int first, second, target;
  FieldElement c;
};

struct BaseRingStructure;

/// Finite-dimensional algebra over a base field, given by a named basis and a
/// structure-constant tensor. Immutable after construction; `create` runs the
/// flavor validation and names the violating tuple on failure.
class Algebra {
 public:
  static Algebra create(FieldSpec field, int dim, std::vector<std::string> basis_names,
                        Flavor flavor, const std::vector<StructureEntry>& entries) {
    std::vector<FieldElement> tensor(static_cast<size_t>(dim) * dim * dim, FieldElement(field));
    for (const auto& e : entries) {
      require(0 <= e.i && e.i < dim && 0 <= e.j && e.j < dim && 0 <= e.l && e.l < dim,
              errc::validation_failed, "structure entry index out of range");
      require(e.c.raw_spec() == FieldElement(field).raw_spec(), errc::field_mismatch,
              "structure constant in wrong field");
      tensor[tensor_index(dim, e.i, e.j, e.l)] += e.c;
    }
    return from_tensor(field, dim, std::move(basis_names), flavor, std::move(tensor));
  }

  static Algebra from_tensor(FieldSpec field, int dim, std::vector<std::string> basis_names,
                             Flavor flavor, std::vector<FieldElement> tensor) {
    Algebra a;
    a.field_ = field;
    a.dim_ = dim;
    a.flavor_ = flavor;
    if (basis_names.empty())
      for (int i = 0; i < dim; ++i) basis_names.push_back("e" + std::to_string(i));
    require(static_cast<int>(basis_names.size()) == dim, errc::validation_failed,
            "basis name count differs from dimension");
    a.names_ = std::move(basis_names);
    require(tensor.size() == static_cast<size_t>(dim) * dim * dim, errc::validation_failed,
            "tensor size mismatch");
    a.tensor_ = std::move(tensor);
    a.validate();
    return a;
  }

  int dim() const { return dim_; }
  FieldSpec field() const { return field_; }
  Flavor flavor() const { return flavor_; }
  const std::vector<std::string>& basis_names() const { return names_; }

  const FieldElement& structure_coeff(int i, int j, int l) const {
    return tensor_[tensor_index(dim_, i, j, l)];
  }

  /// Coordinates of e_i e_j.
  std::vector<FieldElement> product_basis(int i, int j) const {
    std::vector<FieldElement> v(static_cast<size_t>(dim_), FieldElement(field_));
    for (int l = 0; l < dim_; ++l) v[static_cast<size_t>(l)] = structure_coeff(i, j, l);
    return v;
  }

  std::vector<FieldElement> multiply(const std::vector<FieldElement>& x,
                                     const std::vector<FieldElement>& y) const {
    require(static_cast<int>(x.size()) == dim_ && static_cast<int>(y.size()) == dim_,
            errc::validation_failed, "multiply: coordinate length mismatch");
    std::vector<FieldElement> v(static_cast<size_t>(dim_), FieldElement(field_));
    for (int i = 0; i < dim_; ++i) {
      if (x[static_cast<size_t>(i)].is_zero()) continue;
      for (int j = 0; j < dim_; ++j) {
        if (y[static_cast<size_t>(j)].is_zero()) continue;
        FieldElement xy = x[static_cast<size_t>(i)] * y[static_cast<size_t>(j)];
        for (int l = 0; l < dim_; ++l) {
          const FieldElement& s = structure_coeff(i, j, l);
          if (!s.is_zero()) v[static_cast<size_t>(l)] += xy * s;
        }
      }
    }
    return v;
  }

  /// Matrix of left multiplication by e_i on coordinate columns.
  ExactMatrix left_mult(int i) const {
    ExactMatrix m(dim_, dim_, field_);
    for (int a = 0; a < dim_; ++a)
      for (int l = 0; l < dim_; ++l) m.at(l, a) = structure_coeff(i, a, l);
    return m;
  }

  ExactMatrix right_mult(int i) const {
    ExactMatrix m(dim_, dim_, field_);
    for (int a = 0; a < dim_; ++a)
      for (int l = 0; l < dim_; ++l) m.at(l, a) = structure_coeff(a, i, l);
    return m;
  }

  ExactMatrix left_mult_by(const std::vector<FieldElement>& x) const {
    ExactMatrix m(dim_, dim_, field_);
    for (int i = 0; i < dim_; ++i) {
      if (x[static_cast<size_t>(i)].is_zero()) continue;
      for (int a = 0; a < dim_; ++a)
        for (int l = 0; l < dim_; ++l) {
          const FieldElement& s = structure_coeff(i, a, l);
          if (!s.is_zero()) m.at(l, a) += x[static_cast<size_t>(i)] * s;
        }
    }
    return m;
  }

  ExactMatrix right_mult_by(const std::vector<FieldElement>& x) const {
    ExactMatrix m(dim_, dim_, field_);
    for (int i = 0; i < dim_; ++i) {
      if (x[static_cast<size_t>(i)].is_zero()) continue;
      for (int a = 0; a < dim_; ++a)
        for (int l = 0; l < dim_; ++l) {
          const FieldElement& s = structure_coeff(a, i, l);
          if (!s.is_zero()) m.at(l, a) += x[static_cast<size_t>(i)] * s;
        }
    }
    return m;
  }

  bool has_base_ring() const { return static_cast<bool>(base_); }
  const BaseRingStructure& base_ring() const {
    require(has_base_ring(), errc::missing_k_structure,
            "algebra does not record a base-ring structure");
    return *base_;
  }
  void attach_base_ring(std::shared_ptr<const BaseRingStructure> b) { base_ = std::move(b); }

  friend bool operator==(const Algebra& a, const Algebra& b) {
    return a.field_ == b.field_ && a.dim_ == b.dim_ && a.tensor_ == b.tensor_;
  }

 private:
  static size_t tensor_index(int dim, int i, int j, int l) {
    return (static_cast<size_t>(i) * static_cast<size_t>(dim) + static_cast<size_t>(j)) *
               static_cast<size_t>(dim) +
           static_cast<size_t>(l);
  }

  void validate() const {
    if (flavor_ == Flavor::lie) {
      for (int i = 0; i < dim_; ++i)
        for (int j = i; j < dim_; ++j)
          for (int l = 0; l < dim_; ++l)
            require(structure_coeff(i, j, l) + structure_coeff(j, i, l) == FieldElement(field_),
                    errc::validation_failed,
                    "lie antisymmetry fails at (" + std::to_string(i) + "," + std::to_string(j) +
                        "," + std::to_string(l) + ")");
      for (int i = 0; i < dim_; ++i)
        for (int j = i + 1; j < dim_; ++j)
          for (int l = j + 1; l < dim_; ++l) {
            auto jac = multiply(product_basis(i, j), basis_vector(l));
            auto t2 = multiply(product_basis(j, l), basis_vector(i));
            auto t3 = multiply(product_basis(l, i), basis_vector(j));
            for (int c = 0; c < dim_; ++c)
              require((jac[static_cast<size_t>(c)] + t2[static_cast<size_t>(c)] + t3[static_cast<size_t>(c)]).is_zero(),
                      errc::validation_failed,
                      "jacobi identity fails at (" + std::to_string(i) + "," + std::to_string(j) +
                          "," + std::to_string(l) + ")");
          }
    } else if (flavor_ == Flavor::associative) {
      for (int i = 0; i < dim_; ++i)
        for (int j = 0; j < dim_; ++j)
          for (int l = 0; l < dim_; ++l) {
            auto lhs = multiply(product_basis(i, j), basis_vector(l));
            auto rhs = multiply(basis_vector(i), product_basis(j, l));
            require(lhs == rhs, errc::validation_failed,
                    "associativity fails at (" + std::to_string(i) + "," + std::to_string(j) +
                        "," + std::to_string(l) + ")");
          }
    } else if (flavor_ == Flavor::jordan) {
      for (int i = 0; i < dim_; ++i)
        for (int j = i; j < dim_; ++j)
          for (int l = 0; l < dim_; ++l)
            require(structure_coeff(i, j, l) == structure_coeff(j, i, l), errc::validation_failed,
                    "jordan commutativity fails at (" + std::to_string(i) + "," +
                        std::to_string(j) + "," + std::to_string(l) + ")");
    }
  }

 public:
  std::vector<FieldElement> basis_vector(int i) const {
    std::vector<FieldElement> v(static_cast<size_t>(dim_), FieldElement(field_));
    v[static_cast<size_t>(i)] = fe(field_, 1);
    return v;
  }

  std::vector<FieldElement> zero_vector() const {
    return std::vector<FieldElement>(static_cast<size_t>(dim_), FieldElement(field_));
  }

 private:
  FieldSpec field_ = FieldSpec::rationals();
  int dim_ = 0;
  Flavor flavor_ = Flavor::generic;
  std::vector<std::string> names_;
  std::vector<FieldElement> tensor_;
  std::shared_ptr<const BaseRingStructure> base_;
};

/// Searches for a two-sided unit element; nullopt when the algebra has none.
inline std::optional<std::vector<FieldElement>> find_unit(const Algebra& a) {
  const int n = a.dim();
  if (n == 0) return std::nullopt;
  ExactMatrix sys(2 * n * n, n, a.field());
  std::vector<FieldElement> rhs(static_cast<size_t>(2 * n * n), FieldElement(a.field()));
  int r = 0;
  for (int j = 0; j < n; ++j)
    for (int b = 0; b < n; ++b) {
      for (int i = 0; i < n; ++i) sys.at(r, i) = a.structure_coeff(i, j, b);
      rhs[static_cast<size_t>(r)] = j == b ? fe(a.field(), 1) : FieldElement(a.field());
      ++r;
      for (int i = 0; i < n; ++i) sys.at(r, i) = a.structure_coeff(j, i, b);
      rhs[static_cast<size_t>(r)] = j == b ? fe(a.field(), 1) : FieldElement(a.field());
      ++r;
    }
  return solve(sys, rhs);
}

/// A finite-rank commutative associative unital algebra used as base-change
/// target. Free of finite rank over the base field, hence flat.
class CommutativeExtension {
 public:
  static CommutativeExtension create(Algebra alg, std::vector<FieldElement> unit) {
    require(alg.flavor() == Flavor::associative, errc::validation_failed,
            "extension must be tagged associative");
    for (int i = 0; i < alg.dim(); ++i)
      for (int j = i + 1; j < alg.dim(); ++j)
        require(alg.product_basis(i, j) == alg.product_basis(j, i), errc::validation_failed,
                "extension is not commutative at (" + std::to_string(i) + "," + std::to_string(j) + ")");
    for (int j = 0; j < alg.dim(); ++j) {
      require(alg.multiply(unit, alg.basis_vector(j)) == alg.basis_vector(j) &&
                  alg.multiply(alg.basis_vector(j), unit) == alg.basis_vector(j),
              errc::validation_failed, "designated unit fails the unit law");
    }
    CommutativeExtension k;
    k.alg_ = std::move(alg);
    k.unit_ = std::move(unit);
    return k;
  }

  /// k[x]/(f) as an extension of rank deg f.
  static CommutativeExtension from_modulus(FieldSpec base, const Poly& f) {
    const int d = poly_deg(f);
    require(d >= 1, errc::validation_failed, "modulus must have degree >= 1");
    require(f.back() == 1, errc::validation_failed, "modulus must be monic");
    std::vector<StructureEntry> entries;
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        Poly xij(static_cast<size_t>(i + j) + 1, Rational(0));
        xij.back() = 1;
        Poly rem = poly_divmod(xij, f).second;
        for (int l = 0; l < static_cast<int>(rem.size()); ++l)
          if (rem[static_cast<size_t>(l)] != 0)
            entries.push_back({i, j, l, FieldElement(base, rem[static_cast<size_t>(l)])});
      }
    std::vector<std::string> names{"1"};
    for (int i = 1; i < d; ++i) names.push_back(i == 1 ? "x" : "x^" + std::to_string(i));
    Algebra alg = Algebra::create(base, d, std::move(names), Flavor::associative, entries);
    std::vector<FieldElement> unit(static_cast<size_t>(d), FieldElement(base));
    unit[0] = fe(base, 1);
    return create(std::move(alg), std::move(unit));
  }

  /// The split extension k x k (two orthogonal idempotents).
  static CommutativeExtension split_pair(FieldSpec base) {
    std::vector<StructureEntry> entries{{0, 0, 0, fe(base, 1)}, {1, 1, 1, fe(base, 1)}};
    Algebra alg = Algebra::create(base, 2, {"u0", "u1"}, Flavor::associative, entries);
    return create(std::move(alg), {fe(base, 1), fe(base, 1)});
  }

  const Algebra& algebra() const { return alg_; }
  const std::vector<FieldElement>& unit() const { return unit_; }
  int dim() const { return alg_.dim(); }
  FieldSpec field() const { return alg_.field(); }

 private:
  Algebra alg_;
  std::vector<FieldElement> unit_;
};

/// Recorded base-ring structure on a carrier space: the commutative ring K
/// together with the matrices by which its basis acts.
struct BaseRingStructure {
  CommutativeExtension ring;
  std::vector<ExactMatrix> action;  // one operator per K-basis element
};

/// A k-module with independent left and right actions of an algebra. No
/// compatibility between the two actions is assumed.
class Dimodule {
 public:
  static Dimodule create(Algebra algebra, int dim, const std::vector<ActionEntry>& left,
                         const std::vector<ActionEntry>& right) {
    FieldSpec f = algebra.field();
    const int da = algebra.dim();
    std::vector<FieldElement> lt(static_cast<size_t>(da) * dim * dim, FieldElement(f));
    std::vector<FieldElement> rt(static_cast<size_t>(dim) * da * dim, FieldElement(f));
    for (const auto& e : left) {
      require(0 <= e.first && e.first < da && 0 <= e.second && e.second < dim && 0 <= e.target &&
                  e.target < dim,
              errc::validation_failed, "left action entry out of range");
      lt[left_index(dim, e.first, e.second, e.target)] += e.c;
    }
    for (const auto& e : right) {
      require(0 <= e.first && e.first < dim && 0 <= e.second && e.second < da && 0 <= e.target &&
                  e.target < dim,
              errc::validation_failed, "right action entry out of range");
      rt[right_index(da, dim, e.first, e.second, e.target)] += e.c;
    }
    return from_tensors(std::move(algebra), dim, std::move(lt), std::move(rt));
  }

  static Dimodule from_tensors(Algebra algebra, int dim, std::vector<FieldElement> left,
                               std::vector<FieldElement> right) {
    Dimodule m;
    m.alg_ = std::make_shared<const Algebra>(std::move(algebra));
    m.dim_ = dim;
    require(left.size() == static_cast<size_t>(m.alg_->dim()) * dim * dim &&
                right.size() == static_cast<size_t>(dim) * m.alg_->dim() * dim,
            errc::validation_failed, "action tensor size mismatch");
    m.left_ = std::move(left);
    m.right_ = std::move(right);
    return m;
  }

  const Algebra& algebra() const { return *alg_; }
  int dim() const { return dim_; }
  FieldSpec field() const { return alg_->field(); }

  /// Coefficient of m_b in e_i . m_a.
  const FieldElement& left_coeff(int i, int a, int b) const {
    return left_[left_index(dim_, i, a, b)];
  }
  /// Coefficient of m_b in m_a . e_i.
  const FieldElement& right_coeff(int a, int i, int b) const {
    return right_[right_index(alg_->dim(), dim_, a, i, b)];
  }

  /// Matrix of m -> e_i . m on coordinate columns.
  ExactMatrix left_op(int i) const {
    ExactMatrix m(dim_, dim_, field());
    for (int a = 0; a < dim_; ++a)
      for (int b = 0; b < dim_; ++b) m.at(b, a) = left_coeff(i, a, b);
    return m;
  }

  /// Matrix of m -> m . e_i on coordinate columns.
  ExactMatrix right_op(int i) const {
    ExactMatrix m(dim_, dim_, field());
    for (int a = 0; a < dim_; ++a)
      for (int b = 0; b < dim_; ++b) m.at(b, a) = right_coeff(a, i, b);
    return m;
  }

  bool has_base_ring() const { return static_cast<bool>(base_); }
  const BaseRingStructure& base_ring() const {
    require(has_base_ring(), errc::missing_k_structure,
            "dimodule does not record a base-ring structure");
    return *base_;
  }
  void attach_base_ring(std::shared_ptr<const BaseRingStructure> b) { base_ = std::move(b); }

 private:
  static size_t left_index(int dim, int i, int a, int b) {
    return (static_cast<size_t>(i) * static_cast<size_t>(dim) + static_cast<size_t>(a)) *
               static_cast<size_t>(dim) +
           static_cast<size_t>(b);
  }
  static size_t right_index(int da, int dim, int a, int i, int b) {
    return (static_cast<size_t>(a) * static_cast<size_t>(da) + static_cast<size_t>(i)) *
               static_cast<size_t>(dim) +
           static_cast<size_t>(b);
  }

  std::shared_ptr<const Algebra> alg_;
  int dim_ = 0;
  std::vector<FieldElement> left_, right_;
  std::shared_ptr<const BaseRingStructure> base_;
};

// --------------------------------------------------------------------------
// standard dimodules

/// A acting on itself by left and right multiplication.
inline Dimodule regular_dimodule(const Algebra& a) {
  const int n = a.dim();
  std::vector<FieldElement> lt(static_cast<size_t>(n) * n * n, FieldElement(a.field()));
  std::vector<FieldElement> rt = lt;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int l = 0; l < n; ++l) {
        lt[(static_cast<size_t>(i) * n + j) * n + l] = a.structure_coeff(i, j, l);
        rt[(static_cast<size_t>(j) * n + i) * n + l] = a.structure_coeff(j, i, l);
      }
  return Dimodule::from_tensors(a, n, std::move(lt), std::move(rt));
}

/// The dual space A* with (a.phi)(a') = phi(a'a) and (phi.a)(a') = phi(aa').
inline Dimodule dual_dimodule(const Algebra& a) {
  const int n = a.dim();
  std::vector<FieldElement> lt(static_cast<size_t>(n) * n * n, FieldElement(a.field()));
  std::vector<FieldElement> rt = lt;
  for (int i = 0; i < n; ++i)
    for (int c = 0; c < n; ++c)
      for (int b = 0; b < n; ++b) {
        // e_i . m^c = sum_b s_{b,i,c} m^b ; m^c . e_i = sum_b s_{i,b,c} m^b
        lt[(static_cast<size_t>(i) * n + c) * n + b] = a.structure_coeff(b, i, c);
        rt[(static_cast<size_t>(c) * n + i) * n + b] = a.structure_coeff(i, b, c);
      }
  return Dimodule::from_tensors(a, n, std::move(lt), std::move(rt));
}

/// Canonical dimodule of a Lie module: left action as given, right action
/// m . l = -l . m. The action matrices are validated against the bracket.
inline Dimodule lie_module_to_dimodule(const Algebra& l, const std::vector<ExactMatrix>& action) {
  require(l.flavor() == Flavor::lie, errc::validation_failed, "algebra is not tagged lie");
  require(static_cast<int>(action.size()) == l.dim(), errc::validation_failed,
          "need one action matrix per basis element");
  const int dm = action.empty() ? 0 : action[0].rows();
  for (const auto& m : action)
    require(m.rows() == dm && m.cols() == dm, errc::validation_failed, "action matrices not square");
  for (int i = 0; i < l.dim(); ++i)
    for (int j = 0; j < l.dim(); ++j) {
      ExactMatrix lhs(dm, dm, l.field());
      for (int t = 0; t < l.dim(); ++t) {
        const FieldElement& s = l.structure_coeff(i, j, t);
        if (!s.is_zero()) lhs = lhs + action[static_cast<size_t>(t)].scaled(s);
      }
      ExactMatrix rhs = action[static_cast<size_t>(i)] * action[static_cast<size_t>(j)] -
                        action[static_cast<size_t>(j)] * action[static_cast<size_t>(i)];
      require(lhs == rhs, errc::validation_failed,
              "matrices do not define a Lie module: bracket fails at (" + std::to_string(i) + "," +
                  std::to_string(j) + ")");
    }
  const int da = l.dim();
  std::vector<FieldElement> lt(static_cast<size_t>(da) * dm * dm, FieldElement(l.field()));
  std::vector<FieldElement> rt(static_cast<size_t>(dm) * da * dm, FieldElement(l.field()));
  for (int i = 0; i < da; ++i)
    for (int a = 0; a < dm; ++a)
      for (int b = 0; b < dm; ++b) {
        const FieldElement& v = action[static_cast<size_t>(i)].at(b, a);
        lt[(static_cast<size_t>(i) * dm + a) * dm + b] = v;
        rt[(static_cast<size_t>(a) * da + i) * dm + b] = -v;
      }
  return Dimodule::from_tensors(l, dm, std::move(lt), std::move(rt));
}

/// Validated algebra automorphism with an explicit order certificate. The
/// order is checked by matrix powers at load; it is never inferred.
struct AlgebraAutomorphism {
  std::string name;
  ExactMatrix matrix;
  int order = 1;
};

inline void certify_automorphism(const Algebra& a, const AlgebraAutomorphism& phi) {
  const int n = a.dim();
  require(phi.matrix.rows() == n && phi.matrix.cols() == n, errc::not_automorphism,
          "automorphism matrix has wrong shape");
  require(rank(phi.matrix) == n, errc::not_automorphism, "automorphism matrix is singular");
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      auto lhs = phi.matrix.apply(a.product_basis(i, j));
      auto rhs = a.multiply(phi.matrix.apply(a.basis_vector(i)), phi.matrix.apply(a.basis_vector(j)));
      require(lhs == rhs, errc::not_automorphism,
              "multiplicativity fails at basis pair (" + std::to_string(i) + "," + std::to_string(j) + ")");
    }
  require(phi.order >= 1, errc::not_order_m, "order certificate must be positive");
  ExactMatrix id = ExactMatrix::identity(n, a.field());
  require(phi.matrix.pow(phi.order) == id, errc::not_order_m,
          "matrix^" + std::to_string(phi.order) + " is not the identity");
  for (int d = 1; d < phi.order; ++d)
    if (phi.order % d == 0)
      require(phi.matrix.pow(d) != id, errc::not_order_m,
              "certified order is not exact: matrix^" + std::to_string(d) + " = id");
}

/// Twisted dimodule of Ex. "rings with twisted derivations": carrier A with
/// a . m = phi(a) m and m . a = m a. Derivations into it are the
/// phi-twisted derivations of A.
inline Dimodule twisted_dimodule(const Algebra& a, const ExactMatrix& phi) {
  const int n = a.dim();
  require(phi.rows() == n && phi.cols() == n, errc::not_automorphism, "matrix shape mismatch");
  require(rank(phi) == n, errc::not_automorphism, "twisting map is singular");
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      require(phi.apply(a.product_basis(i, j)) ==
                  a.multiply(phi.apply(a.basis_vector(i)), phi.apply(a.basis_vector(j))),
              errc::not_automorphism,
              "multiplicativity fails at basis pair (" + std::to_string(i) + "," + std::to_string(j) + ")");
  std::vector<FieldElement> lt(static_cast<size_t>(n) * n * n, FieldElement(a.field()));
  std::vector<FieldElement> rt = lt;
  for (int i = 0; i < n; ++i) {
    auto phi_ei = phi.apply(a.basis_vector(i));
    ExactMatrix lm = a.left_mult_by(phi_ei);
    for (int x = 0; x < n; ++x)
      for (int b = 0; b < n; ++b) {
        lt[(static_cast<size_t>(i) * n + x) * n + b] = lm.at(b, x);
        rt[(static_cast<size_t>(x) * n + i) * n + b] = a.structure_coeff(x, i, b);
      }
  }
  return Dimodule::from_tensors(a, n, std::move(lt), std::move(rt));
}

// --------------------------------------------------------------------------
// base change

/// A tensor K of dimension dim(A) * dim(K); basis e_i (x) u_p ordered with p
/// fastest. Records the K-module structure on the result.
inline Algebra base_change_algebra(const Algebra& a, const CommutativeExtension& k) {
  require(a.field() == k.field(), errc::field_mismatch, "base change over a different base field");
  const int da = a.dim(), dk = k.dim();
  const int n = da * dk;
  std::vector<FieldElement> tensor(static_cast<size_t>(n) * n * n, FieldElement(a.field()));
  auto idx = [n](int i, int j, int l) {
    return (static_cast<size_t>(i) * n + static_cast<size_t>(j)) * n + static_cast<size_t>(l);
  };
  for (int i = 0; i < da; ++i)
    for (int p = 0; p < dk; ++p)
      for (int j = 0; j < da; ++j)
        for (int q = 0; q < dk; ++q)
          for (int l = 0; l < da; ++l) {
            const FieldElement& s = a.structure_coeff(i, j, l);
            if (s.is_zero()) continue;
            for (int r = 0; r < dk; ++r) {
              const FieldElement& t = k.algebra().structure_coeff(p, q, r);
              if (!t.is_zero()) tensor[idx(i * dk + p, j * dk + q, l * dk + r)] += s * t;
            }
          }
  std::vector<std::string> names;
  for (int i = 0; i < da; ++i)
    for (int p = 0; p < dk; ++p)
      names.push_back(a.basis_names()[static_cast<size_t>(i)] + "*" +
                      k.algebra().basis_names()[static_cast<size_t>(p)]);
  Algebra ak = Algebra::from_tensor(a.field(), n, std::move(names), a.flavor(), std::move(tensor));
  // record multiplication by 1_A (x) u_p for the K-linearity constraints
  std::vector<ExactMatrix> action;
  for (int p = 0; p < dk; ++p) {
    ExactMatrix m(n, n, a.field());
    for (int j = 0; j < da; ++j)
      for (int q = 0; q < dk; ++q)
        for (int r = 0; r < dk; ++r) {
          const FieldElement& t = k.algebra().structure_coeff(p, q, r);
          if (!t.is_zero()) m.at(j * dk + r, j * dk + q) += t;
        }
    action.push_back(std::move(m));
  }
  ak.attach_base_ring(std::make_shared<const BaseRingStructure>(BaseRingStructure{k, std::move(action)}));
  return ak;
}

/// M (x) K as a dimodule of A (x) K with (a (x) s1) . (m (x) s2) = (a.m) (x) s1 s2.
inline Dimodule base_change_dimodule(const Dimodule& m, const CommutativeExtension& k) {
  require(m.field() == k.field(), errc::field_mismatch, "base change over a different base field");
  Algebra ak = base_change_algebra(m.algebra(), k);
  const int da = m.algebra().dim(), dm = m.dim(), dk = k.dim();
  const int na = da * dk, nm = dm * dk;
  std::vector<FieldElement> lt(static_cast<size_t>(na) * nm * nm, FieldElement(m.field()));
  std::vector<FieldElement> rt(static_cast<size_t>(nm) * na * nm, FieldElement(m.field()));
  for (int i = 0; i < da; ++i)
    for (int a = 0; a < dm; ++a)
      for (int b = 0; b < dm; ++b) {
        const FieldElement& lv = m.left_coeff(i, a, b);
        const FieldElement& rv = m.right_coeff(a, i, b);
        if (lv.is_zero() && rv.is_zero()) continue;
        for (int p = 0; p < dk; ++p)
          for (int q = 0; q < dk; ++q)
            for (int r = 0; r < dk; ++r) {
              const FieldElement& t = k.algebra().structure_coeff(p, q, r);
              if (t.is_zero()) continue;
              if (!lv.is_zero())
                lt[(static_cast<size_t>(i * dk + p) * nm + (a * dk + q)) * nm + (b * dk + r)] += lv * t;
              if (!rv.is_zero())
                rt[(static_cast<size_t>(a * dk + p) * na + (i * dk + q)) * nm + (b * dk + r)] += rv * t;
            }
      }
  Dimodule mk = Dimodule::from_tensors(std::move(ak), nm, std::move(lt), std::move(rt));
  std::vector<ExactMatrix> action;
  for (int p = 0; p < dk; ++p) {
    ExactMatrix op(nm, nm, m.field());
    for (int a = 0; a < dm; ++a)
      for (int q = 0; q < dk; ++q)
        for (int r = 0; r < dk; ++r) {
          const FieldElement& t = k.algebra().structure_coeff(p, q, r);
          if (!t.is_zero()) op.at(a * dk + r, a * dk + q) += t;
        }
    action.push_back(std::move(op));
  }
  mk.attach_base_ring(std::make_shared<const BaseRingStructure>(BaseRingStructure{k, std::move(action)}));
  return mk;
}

/// Reinterprets a rational algebra over a larger base field (coefficients
/// embed; the dimension is unchanged).
inline Algebra algebra_over_field(const Algebra& a, FieldSpec f) {
  require(a.field().is_rationals(), errc::field_mismatch,
          "scalar extension is implemented from Q upward");
  const int n = a.dim();
  std::vector<FieldElement> tensor(static_cast<size_t>(n) * n * n, FieldElement(f));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int l = 0; l < n; ++l) {
        const FieldElement& s = a.structure_coeff(i, j, l);
        if (!s.is_zero()) tensor[(static_cast<size_t>(i) * n + j) * n + l] = FieldElement(f, s.as_rational());
      }
  std::vector<std::string> names = a.basis_names();
  return Algebra::from_tensor(f, n, std::move(names), a.flavor(), std::move(tensor));
}

// --------------------------------------------------------------------------
// structural predicates

/// Span of all basis products, as a canonical subspace of A.
inline LinearSubspace derived_subalgebra(const Algebra& a) {
  RrefBuilder b(a.dim(), a.field());
  for (int i = 0; i < a.dim(); ++i)
    for (int j = 0; j < a.dim(); ++j) {
      SparseRow r;
      for (int l = 0; l < a.dim(); ++l) {
        const FieldElement& s = a.structure_coeff(i, j, l);
        if (!s.is_zero()) r.push(l, s);
      }
      b.add_row(std::move(r));
    }
  return LinearSubspace::from_builder(b);
}

inline bool is_perfect(const Algebra& a) { return derived_subalgebra(a).dim() == a.dim(); }

}  // namespace dkit
