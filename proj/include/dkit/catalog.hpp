#pragma once

#include <functional>
#include <string>
#include <vector>

#include "dkit/algebra.hpp"

namespace dkit {

/// Builds a structure-constant algebra from matrices closed under `prod`;
/// products are re-expressed in the given basis by exact linear solves.
inline Algebra algebra_from_matrix_basis(
    FieldSpec field, std::vector<std::string> names, const std::vector<ExactMatrix>& basis,
    const std::function<ExactMatrix(const ExactMatrix&, const ExactMatrix&)>& prod, Flavor flavor) {
  const int dim = static_cast<int>(basis.size());
  require(dim > 0, errc::validation_failed, "empty matrix basis");
  const int n = basis[0].rows(), m = basis[0].cols();
  ExactMatrix stack(dim, n * m, field);
  for (int b = 0; b < dim; ++b)
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < m; ++c) stack.at(b, r * m + c) = basis[static_cast<size_t>(b)].at(r, c);
  require(rank(stack) == dim, errc::validation_failed, "matrix basis is linearly dependent");
  std::vector<StructureEntry> entries;
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) {
      ExactMatrix p = prod(basis[static_cast<size_t>(i)], basis[static_cast<size_t>(j)]);
      std::vector<FieldElement> flat;
      flat.reserve(static_cast<size_t>(n) * m);
      for (int r = 0; r < n; ++r)
        for (int c = 0; c < m; ++c) flat.push_back(p.at(r, c));
      auto coords = coordinates_in_span(stack, flat);
      require(coords.has_value(), errc::validation_failed,
              "matrix basis is not closed under the product at (" + std::to_string(i) + "," +
                  std::to_string(j) + ")");
      for (int l = 0; l < dim; ++l)
        if (!(*coords)[static_cast<size_t>(l)].is_zero())
          entries.push_back({i, j, l, (*coords)[static_cast<size_t>(l)]});
    }
  return Algebra::create(field, dim, std::move(names), flavor, entries);
}

namespace detail {

inline ExactMatrix unit_matrix(FieldSpec f, int n, int r, int c) {
  ExactMatrix m(n, n, f);
  m.at(r, c) = fe(f, 1);
  return m;
}

inline ExactMatrix mat_bracket(const ExactMatrix& x, const ExactMatrix& y) { return x * y - y * x; }

/// Off-diagonal matrix units in lexicographic order, then h_i = E_ii - E_(i+1)(i+1).
inline std::vector<ExactMatrix> sl_basis(FieldSpec f, int n, std::vector<std::string>* names) {
  std::vector<ExactMatrix> basis;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j) {
        basis.push_back(unit_matrix(f, n, i, j));
        names->push_back("e" + std::to_string(i + 1) + std::to_string(j + 1));
      }
  for (int i = 0; i + 1 < n; ++i) {
    ExactMatrix h(n, n, f);
    h.at(i, i) = fe(f, 1);
    h.at(i + 1, i + 1) = fe(f, -1);
    basis.push_back(h);
    names->push_back("h" + std::to_string(i + 1));
  }
  return basis;
}

inline Algebra make_sl(FieldSpec f, int n) {
  std::vector<std::string> names;
  if (n == 2) {
    // conventional (e, f, h) labels in lexicographic matrix-unit order
    auto basis = sl_basis(f, 2, &names);
    return algebra_from_matrix_basis(f, {"e", "f", "h"}, basis, mat_bracket, Flavor::lie);
  }
  auto basis = sl_basis(f, n, &names);
  return algebra_from_matrix_basis(f, std::move(names), basis, mat_bracket, Flavor::lie);
}

inline Algebra make_gl(FieldSpec f, int n) {
  std::vector<ExactMatrix> basis;
  std::vector<std::string> names;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      basis.push_back(unit_matrix(f, n, i, j));
      names.push_back("E" + std::to_string(i + 1) + std::to_string(j + 1));
    }
  return algebra_from_matrix_basis(f, std::move(names), basis, mat_bracket, Flavor::lie);
}

inline Algebra make_matrix_algebra(FieldSpec f, int n) {
  std::vector<ExactMatrix> basis;
  std::vector<std::string> names;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      basis.push_back(unit_matrix(f, n, i, j));
      names.push_back("E" + std::to_string(i + 1) + std::to_string(j + 1));
    }
  return algebra_from_matrix_basis(
      f, std::move(names), basis, [](const ExactMatrix& x, const ExactMatrix& y) { return x * y; },
      Flavor::associative);
}

inline Algebra make_quaternion(FieldSpec f, const Rational& a, const Rational& b) {
  FieldElement one = fe(f, 1);
  std::vector<StructureEntry> e;
  auto put = [&](int i, int j, int l, Rational c) { e.push_back({i, j, l, FieldElement(f, c)}); };
  for (int x = 0; x < 4; ++x) {
    put(0, x, x, 1);
    if (x != 0) put(x, 0, x, 1);
  }
  put(1, 1, 0, a);            // i^2 = a
  put(2, 2, 0, b);            // j^2 = b
  put(1, 2, 3, 1);            // ij = k
  put(2, 1, 3, -1);           // ji = -k
  put(1, 3, 2, a);            // ik = a j
  put(3, 1, 2, -a);           // ki = -a j
  put(2, 3, 1, -b);           // jk = -b i
  put(3, 2, 1, b);            // kj = b i
  put(3, 3, 0, -a * b);       // k^2 = -ab
  (void)one;
  return Algebra::create(f, 4, {"1", "i", "j", "k"}, Flavor::associative, e);
}

inline Algebra make_heisenberg(FieldSpec f) {
  std::vector<StructureEntry> e{{0, 1, 2, fe(f, 1)}, {1, 0, 2, fe(f, -1)}};
  return Algebra::create(f, 3, {"x", "y", "z"}, Flavor::lie, e);
}

inline Algebra make_abelian(FieldSpec f, int n) {
  return Algebra::create(f, n, {}, Flavor::lie, {});
}

/// Symmetric 2x2 matrices under a o b = (ab + ba)/2.
inline Algebra make_jordan_h2(FieldSpec f) {
  std::vector<ExactMatrix> basis{unit_matrix(f, 2, 0, 0), unit_matrix(f, 2, 1, 1),
                                 unit_matrix(f, 2, 0, 1) + unit_matrix(f, 2, 1, 0)};
  auto circ = [f](const ExactMatrix& x, const ExactMatrix& y) {
    return (x * y + y * x).scaled(fe(f, 1, 2));
  };
  return algebra_from_matrix_basis(f, {"E11", "E22", "S"}, basis, circ, Flavor::jordan);
}

/// Matrix of X -> P X P^{-1} (or any linear map of the representation space)
/// expressed on the structure-constant basis.
inline ExactMatrix automorphism_on_basis(
    FieldSpec field, const std::vector<ExactMatrix>& basis,
    const std::function<ExactMatrix(const ExactMatrix&)>& map) {
  const int dim = static_cast<int>(basis.size());
  const int n = basis[0].rows(), m = basis[0].cols();
  ExactMatrix stack(dim, n * m, field);
  for (int b = 0; b < dim; ++b)
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < m; ++c) stack.at(b, r * m + c) = basis[static_cast<size_t>(b)].at(r, c);
  ExactMatrix out(dim, dim, field);
  for (int b = 0; b < dim; ++b) {
    ExactMatrix img = map(basis[static_cast<size_t>(b)]);
    std::vector<FieldElement> flat;
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < m; ++c) flat.push_back(img.at(r, c));
    auto coords = coordinates_in_span(stack, flat);
    require(coords.has_value(), errc::not_automorphism, "image leaves the basis span");
    for (int l = 0; l < dim; ++l) out.at(l, b) = (*coords)[static_cast<size_t>(l)];
  }
  return out;
}

}  // namespace detail

/// Built-in algebras: sl2, sl3, gl2, gl3, m2, m3, quaternion(a,b),
/// heisenberg, abelianN, jordan-h2. UnknownName otherwise.
inline Algebra catalog_get(const std::string& name) {
  FieldSpec q = FieldSpec::rationals();
  if (name == "sl2") return detail::make_sl(q, 2);
  if (name == "sl3") return detail::make_sl(q, 3);
  if (name == "gl2") return detail::make_gl(q, 2);
  if (name == "gl3") return detail::make_gl(q, 3);
  if (name == "m2") return detail::make_matrix_algebra(q, 2);
  if (name == "m3") return detail::make_matrix_algebra(q, 3);
  if (name == "heisenberg") return detail::make_heisenberg(q);
  if (name == "jordan-h2") return detail::make_jordan_h2(q);
  if (name.rfind("abelian", 0) == 0) {
    int n = std::stoi(name.substr(7));
    require(n >= 0 && n <= 64, errc::unknown_name, "abelian dimension out of range");
    return detail::make_abelian(q, n);
  }
  if (name.rfind("quaternion(", 0) == 0 && name.back() == ')') {
    std::string args = name.substr(11, name.size() - 12);
    auto comma = args.find(',');
    require(comma != std::string::npos, errc::unknown_name, "quaternion needs two parameters");
    Rational a = parse_rational(args.substr(0, comma));
    Rational b = parse_rational(args.substr(comma + 1));
    require(a != 0 && b != 0, errc::validation_failed, "quaternion parameters must be nonzero");
    return detail::make_quaternion(q, a, b);
  }
  fail(errc::unknown_name, "no catalog algebra named '" + name + "'");
}

/// Shipped automorphisms with order certificates:
///   (any, "id"), (sl3, "diagram2"): X -> -X^T, (sl2, "inner-diag"):
///   conjugation by diag(1,-1), (sl3, "zeta3"): conjugation by
///   diag(1, z, z^2) over the third cyclotomic field.
struct LoopCatalogEntry {
  Algebra g;
  AlgebraAutomorphism sigma;
  int order;
};

inline LoopCatalogEntry catalog_automorphism(const std::string& algebra_name,
                                             const std::string& auto_name) {
  FieldSpec q = FieldSpec::rationals();
  if (auto_name == "id") {
    Algebra g = catalog_get(algebra_name);
    AlgebraAutomorphism phi{"id", ExactMatrix::identity(g.dim(), g.field()), 1};
    certify_automorphism(g, phi);
    return {std::move(g), std::move(phi), 1};
  }
  if (algebra_name == "sl3" && auto_name == "diagram2") {
    std::vector<std::string> names;
    auto basis = detail::sl_basis(q, 3, &names);
    Algebra g = catalog_get("sl3");
    ExactMatrix m = detail::automorphism_on_basis(
        q, basis, [](const ExactMatrix& x) { return x.transposed().scaled(fe(x.field(), -1)); });
    AlgebraAutomorphism phi{"diagram2", std::move(m), 2};
    certify_automorphism(g, phi);
    return {std::move(g), std::move(phi), 2};
  }
  if (algebra_name == "sl2" && auto_name == "inner-diag") {
    std::vector<std::string> names;
    auto basis = detail::sl_basis(q, 2, &names);
    Algebra g = catalog_get("sl2");
    ExactMatrix d(2, 2, q);
    d.at(0, 0) = fe(q, 1);
    d.at(1, 1) = fe(q, -1);
    ExactMatrix m = detail::automorphism_on_basis(q, basis, [&](const ExactMatrix& x) {
      return d * x * d;  // d is its own inverse
    });
    AlgebraAutomorphism phi{"inner-diag", std::move(m), 2};
    certify_automorphism(g, phi);
    return {std::move(g), std::move(phi), 2};
  }
  if (algebra_name == "sl3" && auto_name == "zeta3") {
    FieldSpec c3 = cyclotomic_field(3);
    FieldElement z = primitive_root_of_unity(c3, 3);
    std::vector<std::string> names;
    auto basis_q = detail::sl_basis(q, 3, &names);
    std::vector<ExactMatrix> basis;
    for (const auto& b : basis_q) {
      ExactMatrix bb(3, 3, c3);
      for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c)
          if (!b.at(r, c).is_zero()) bb.at(r, c) = FieldElement(c3, b.at(r, c).as_rational());
      basis.push_back(std::move(bb));
    }
    Algebra g = algebra_over_field(catalog_get("sl3"), c3);
    ExactMatrix d(3, 3, c3), dinv(3, 3, c3);
    d.at(0, 0) = fe(c3, 1);
    d.at(1, 1) = z;
    d.at(2, 2) = z * z;
    dinv.at(0, 0) = fe(c3, 1);
    dinv.at(1, 1) = (z * z);  // z^{-1} = z^2
    dinv.at(2, 2) = z;
    ExactMatrix m = detail::automorphism_on_basis(
        c3, basis, [&](const ExactMatrix& x) { return d * x * dinv; });
    AlgebraAutomorphism phi{"zeta3", std::move(m), 3};
    certify_automorphism(g, phi);
    return {std::move(g), std::move(phi), 3};
  }
  fail(errc::unknown_name,
       "no catalog automorphism '" + auto_name + "' for algebra '" + algebra_name + "'");
}

/// Irreducible sl2-module V(n) with basis v_0 .. v_n (highest weight first),
/// as the canonical Lie dimodule.
inline Dimodule sl2_module(const Algebra& sl2, int n) {
  require(sl2.dim() == 3, errc::validation_failed, "sl2_module expects sl2");
  FieldSpec f = sl2.field();
  const int d = n + 1;
  ExactMatrix e(d, d, f), fm(d, d, f), h(d, d, f);
  for (int j = 0; j <= n; ++j) {
    h.at(j, j) = fe(f, n - 2 * j);
    if (j < n) fm.at(j + 1, j) = fe(f, 1);
    if (j > 0) e.at(j - 1, j) = fe(f, static_cast<long>(j) * (n - j + 1));
  }
  return lie_module_to_dimodule(sl2, {e, fm, h});
}

/// Named standard dimodules: regular, dual, adjoint (lie), trivial1, Vn (sl2).
inline Dimodule catalog_module(const Algebra& a, const std::string& name) {
  if (name == "regular") return regular_dimodule(a);
  if (name == "dual") return dual_dimodule(a);
  if (name == "adjoint") {
    require(a.flavor() == Flavor::lie, errc::validation_failed, "adjoint module needs a Lie algebra");
    std::vector<ExactMatrix> ad;
    for (int i = 0; i < a.dim(); ++i) ad.push_back(a.left_mult(i));
    return lie_module_to_dimodule(a, ad);
  }
  if (name == "trivial1") return Dimodule::create(a, 1, {}, {});
  if (name.size() >= 2 && name[0] == 'V') {
    int n = std::stoi(name.substr(1));
    require(n >= 0 && n <= 24, errc::unknown_name, "V(n) out of shipped range");
    return sl2_module(a, n);
  }
  fail(errc::unknown_name, "no catalog module named '" + name + "'");
}

/// Named base-change extensions: dual2 = Q[x]/(x^2), split2 = Q x Q,
/// gauss = Q[x]/(x^2+1), cyclo3 = Q[x]/(x^2+x+1).
inline CommutativeExtension catalog_extension(const std::string& name) {
  FieldSpec q = FieldSpec::rationals();
  if (name == "dual2")
    return CommutativeExtension::from_modulus(q, {rational(0), rational(0), rational(1)});
  if (name == "split2") return CommutativeExtension::split_pair(q);
  if (name == "gauss")
    return CommutativeExtension::from_modulus(q, {rational(1), rational(0), rational(1)});
  if (name == "cyclo3")
    return CommutativeExtension::from_modulus(q, {rational(1), rational(1), rational(1)});
  fail(errc::unknown_name, "no catalog extension named '" + name + "'");
}

}  // namespace dkit
