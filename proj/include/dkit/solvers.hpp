#pragma once

#include <string>
#include <vector>

#include "dkit/algebra.hpp"

namespace dkit {

/// Which scalars a solver keeps linear: the base field k, or the recorded
/// base-change ring K.
enum class Over { k, K };

// Maps f: A -> M are stored as coordinate vectors of Hom(A, M) with the
// target coordinate fastest: f(e_a) = sum_b f[a*dim(M) + b] m_b. This layout
// is global; every solver and report uses it.

inline size_t hom_index(int dim_m, int a, int b) {
  return static_cast<size_t>(a) * static_cast<size_t>(dim_m) + static_cast<size_t>(b);
}

inline int hom_dim(const Algebra& a, const Dimodule& m) { return a.dim() * m.dim(); }

/// Hom vector -> matrix whose columns are the images of the basis.
inline ExactMatrix hom_to_matrix(const Algebra& a, const Dimodule& m,
                                 const std::vector<FieldElement>& f) {
  ExactMatrix mat(m.dim(), a.dim(), a.field());
  for (int x = 0; x < a.dim(); ++x)
    for (int b = 0; b < m.dim(); ++b) mat.at(b, x) = f[hom_index(m.dim(), x, b)];
  return mat;
}

inline std::vector<FieldElement> matrix_to_hom(const ExactMatrix& mat) {
  std::vector<FieldElement> f(static_cast<size_t>(mat.rows()) * static_cast<size_t>(mat.cols()),
                              FieldElement(mat.field()));
  for (int x = 0; x < mat.cols(); ++x)
    for (int b = 0; b < mat.rows(); ++b) f[hom_index(mat.rows(), x, b)] = mat.at(b, x);
  return f;
}

inline void check_dimodule_of(const Algebra& a, const Dimodule& m) {
  require(m.algebra().dim() == a.dim() && m.field() == a.field(), errc::dimodule_mismatch,
          "dimodule does not belong to this algebra");
}

namespace detail {

/// Emits one sparse Leibniz row per (i, j, target coordinate):
/// f(e_i e_j) - f(e_i).e_j - e_i.f(e_j) = 0.
template <class Emit>
void leibniz_rows(const Algebra& a, const Dimodule& m, Emit&& emit) {
  const int da = a.dim(), dm = m.dim();
  for (int i = 0; i < da; ++i)
    for (int j = 0; j < da; ++j)
      for (int c = 0; c < dm; ++c) {
        SparseRow r;
        for (int l = 0; l < da; ++l) {
          const FieldElement& s = a.structure_coeff(i, j, l);
          if (!s.is_zero()) r.push(static_cast<int>(hom_index(dm, l, c)), s);
        }
        for (int b = 0; b < dm; ++b) {
          const FieldElement& s = m.right_coeff(b, j, c);
          if (!s.is_zero()) r.push(static_cast<int>(hom_index(dm, i, b)), -s);
        }
        for (int b = 0; b < dm; ++b) {
          const FieldElement& s = m.left_coeff(i, b, c);
          if (!s.is_zero()) r.push(static_cast<int>(hom_index(dm, j, b)), -s);
        }
        r.compress();
        emit(i, j, c, std::move(r));
      }
}

/// Centroid rows: chi(e_i e_j) = chi(e_i).e_j and chi(e_i e_j) = e_i.chi(e_j).
template <class Emit>
void centroid_rows(const Algebra& a, const Dimodule& m, Emit&& emit) {
  const int da = a.dim(), dm = m.dim();
  for (int i = 0; i < da; ++i)
    for (int j = 0; j < da; ++j)
      for (int c = 0; c < dm; ++c) {
        SparseRow r1, r2;
        for (int l = 0; l < da; ++l) {
          const FieldElement& s = a.structure_coeff(i, j, l);
          if (!s.is_zero()) {
            r1.push(static_cast<int>(hom_index(dm, l, c)), s);
            r2.push(static_cast<int>(hom_index(dm, l, c)), s);
          }
        }
        for (int b = 0; b < dm; ++b) {
          const FieldElement& s = m.right_coeff(b, j, c);
          if (!s.is_zero()) r1.push(static_cast<int>(hom_index(dm, i, b)), -s);
        }
        for (int b = 0; b < dm; ++b) {
          const FieldElement& s = m.left_coeff(i, b, c);
          if (!s.is_zero()) r2.push(static_cast<int>(hom_index(dm, j, b)), -s);
        }
        r1.compress();
        r2.compress();
        emit(std::move(r1));
        emit(std::move(r2));
      }
}

/// Rows forcing f(u_p . a) = u_p . f(a) for every recorded base-ring basis
/// operator pair (U_p on the source, V_p on the target).
inline void relative_linearity_rows(RrefBuilder& bld, int dm,
                                    const std::vector<ExactMatrix>& on_source,
                                    const std::vector<ExactMatrix>& on_target) {
  require(on_source.size() == on_target.size(), errc::r_structure_invalid,
          "source/target base-ring actions differ in rank");
  const int da = on_source.empty() ? 0 : on_source[0].cols();
  for (size_t p = 0; p < on_source.size(); ++p) {
    const ExactMatrix& u = on_source[p];
    const ExactMatrix& v = on_target[p];
    for (int a = 0; a < da; ++a)
      for (int c = 0; c < dm; ++c) {
        SparseRow r;
        for (int x = 0; x < da; ++x) {
          const FieldElement& s = u.at(x, a);
          if (!s.is_zero()) r.push(static_cast<int>(hom_index(dm, x, c)), s);
        }
        for (int b = 0; b < dm; ++b) {
          const FieldElement& s = v.at(c, b);
          if (!s.is_zero()) r.push(static_cast<int>(hom_index(dm, a, b)), -s);
        }
        r.compress();
        bld.add_row(std::move(r));
      }
  }
}

inline void require_k_records(const Algebra& a, const Dimodule& m) {
  require(a.has_base_ring() && m.has_base_ring(), errc::missing_k_structure,
          "K-relative solve needs recorded base-change structure on algebra and dimodule");
  require(a.base_ring().ring.dim() == m.base_ring().ring.dim(), errc::missing_k_structure,
          "algebra and dimodule record different extensions");
}

}  // namespace detail

/// Matrix of delta_A : Hom(A,M) -> Hom(A (x) A, M), whose kernel is
/// Der_k(A, M). Rows are ordered by (i, j, target coordinate).
inline ExactMatrix delta_operator(const Algebra& a, const Dimodule& m) {
  check_dimodule_of(a, m);
  const int dm = m.dim();
  ExactMatrix out(a.dim() * a.dim() * dm, hom_dim(a, m), a.field());
  detail::leibniz_rows(a, m, [&](int i, int j, int c, SparseRow r) {
    const int row = (i * a.dim() + j) * dm + c;
    for (const auto& [col, v] : r.ent) out.at(row, col) = v;
  });
  return out;
}

struct DerivationSpace {
  Over relative_to = Over::k;
  LinearSubspace space;
  int dim() const { return space.dim(); }
};

struct CentroidSpace {
  Over relative_to = Over::k;
  LinearSubspace space;
  int dim() const { return space.dim(); }
};

/// Derivations with explicitly supplied base-ring actions (K-linearity
/// constraints f(u_p . a) = u_p . f(a) on top of Leibniz).
inline DerivationSpace der_space_with_actions(const Algebra& a, const Dimodule& m,
                                              const std::vector<ExactMatrix>& on_algebra,
                                              const std::vector<ExactMatrix>& on_module) {
  check_dimodule_of(a, m);
  RrefBuilder bld(hom_dim(a, m), a.field());
  detail::leibniz_rows(a, m, [&](int, int, int, SparseRow r) { bld.add_row(std::move(r)); });
  detail::relative_linearity_rows(bld, m.dim(), on_algebra, on_module);
  return DerivationSpace{Over::K, nullspace(bld)};
}

inline DerivationSpace der_space(const Algebra& a, const Dimodule& m, Over rel = Over::k) {
  check_dimodule_of(a, m);
  if (rel == Over::K) {
    detail::require_k_records(a, m);
    DerivationSpace d =
        der_space_with_actions(a, m, a.base_ring().action, m.base_ring().action);
    return d;
  }
  RrefBuilder bld(hom_dim(a, m), a.field());
  detail::leibniz_rows(a, m, [&](int, int, int, SparseRow r) { bld.add_row(std::move(r)); });
  return DerivationSpace{Over::k, nullspace(bld)};
}

inline CentroidSpace cent_space(const Algebra& a, const Dimodule& m, Over rel = Over::k) {
  check_dimodule_of(a, m);
  RrefBuilder bld(hom_dim(a, m), a.field());
  detail::centroid_rows(a, m, [&](SparseRow r) { bld.add_row(std::move(r)); });
  if (rel == Over::K) {
    detail::require_k_records(a, m);
    detail::relative_linearity_rows(bld, m.dim(), a.base_ring().action, m.base_ring().action);
  }
  return CentroidSpace{rel, nullspace(bld)};
}

/// Span of the inner derivations d_m(l) = l . m of a canonical Lie dimodule.
inline LinearSubspace ider_lie(const Algebra& l, const Dimodule& m) {
  check_dimodule_of(l, m);
  RrefBuilder bld(hom_dim(l, m), l.field());
  for (int b = 0; b < m.dim(); ++b) {
    SparseRow r;
    for (int a = 0; a < l.dim(); ++a)
      for (int c = 0; c < m.dim(); ++c) {
        const FieldElement& s = m.left_coeff(a, b, c);
        if (!s.is_zero()) r.push(static_cast<int>(hom_index(m.dim(), a, c)), s);
      }
    bld.add_row(std::move(r));
  }
  return LinearSubspace::from_builder(bld);
}

/// Span of the associative inner derivations d_n(b) = b . n - n . b.
inline LinearSubspace ider_assoc(const Algebra& b, const Dimodule& n) {
  check_dimodule_of(b, n);
  RrefBuilder bld(hom_dim(b, n), b.field());
  for (int mb = 0; mb < n.dim(); ++mb) {
    SparseRow r;
    for (int a = 0; a < b.dim(); ++a)
      for (int c = 0; c < n.dim(); ++c) {
        FieldElement v = n.left_coeff(a, mb, c) - n.right_coeff(mb, a, c);
        if (!v.is_zero()) r.push(static_cast<int>(hom_index(n.dim(), a, c)), std::move(v));
      }
    bld.add_row(std::move(r));
  }
  return LinearSubspace::from_builder(bld);
}

struct CohomologyReport {
  LinearSubspace der;
  LinearSubspace ider;
  int h1 = 0;
};

inline CohomologyReport first_cohomology(const Algebra& a, const Dimodule& m,
                                         const LinearSubspace& inner) {
  DerivationSpace der = der_space(a, m, Over::k);
  require(der.space.contains(inner), errc::inner_not_contained,
          "inner derivations escape the derivation space; the input data is inconsistent");
  return CohomologyReport{der.space, inner, der.space.dim() - inner.dim()};
}

/// H^1(L, M) = Der / IDer for a canonical Lie dimodule.
inline CohomologyReport h1_lie(const Algebra& l, const Dimodule& m) {
  return first_cohomology(l, m, ider_lie(l, m));
}

/// HH^1(B, N) = Der / IDer for an associative bimodule-style dimodule.
inline CohomologyReport hh1_assoc(const Algebra& b, const Dimodule& n) {
  return first_cohomology(b, n, ider_assoc(b, n));
}

/// Centroid of A acting on itself contains exactly the scalars iff central.
inline bool is_central(const Algebra& a) {
  if (a.dim() == 0) return false;
  CentroidSpace c = cent_space(a, regular_dimodule(a), Over::k);
  if (c.space.dim() != 1) return false;
  std::vector<FieldElement> id(static_cast<size_t>(a.dim()) * a.dim(), FieldElement(a.field()));
  for (int i = 0; i < a.dim(); ++i) id[hom_index(a.dim(), i, i)] = fe(a.field(), 1);
  return c.space.contains(id);
}

/// Center {x : xb = bx for all b} of an associative algebra.
inline LinearSubspace associative_center(const Algebra& b) {
  RrefBuilder bld(b.dim(), b.field());
  ExactMatrix rows(b.dim() * b.dim(), b.dim(), b.field());
  int r = 0;
  for (int i = 0; i < b.dim(); ++i) {
    ExactMatrix comm = b.left_mult(i) - b.right_mult(i);
    for (int row = 0; row < b.dim(); ++row, ++r)
      for (int col = 0; col < b.dim(); ++col) rows.at(r, col) = comm.at(row, col);
  }
  return nullspace(rows);
}

// ---------------------------------------------------------------------------
// omega: Der_k(A,M) (x) K -> Der_K(A_K, M_K)

struct OmegaReport {
  int dim_der_k = 0;
  int dim_ext = 0;
  int dim_der_rel = 0;  // dim over k of Der_K(A_K, M_K)
  bool dims_match = false;
  bool image_in_der = false;
  bool injective = false;
  bool passed() const { return dims_match && image_in_der && injective; }
};

inline OmegaReport omega_compare(const Algebra& a, const Dimodule& m,
                                 const CommutativeExtension& k) {
  check_dimodule_of(a, m);
  OmegaReport rep;
  DerivationSpace der_k = der_space(a, m, Over::k);
  Algebra ak = base_change_algebra(a, k);
  Dimodule mk = base_change_dimodule(m, k);
  DerivationSpace der_rel = der_space(ak, mk, Over::K);
  rep.dim_der_k = der_k.dim();
  rep.dim_ext = k.dim();
  rep.dim_der_rel = der_rel.dim();
  rep.dims_match = rep.dim_der_k * rep.dim_ext == rep.dim_der_rel;

  const int da = a.dim(), dm = m.dim(), dk = k.dim();
  const int dmk = dm * dk;
  RrefBuilder span(hom_dim(ak, mk), a.field());
  rep.image_in_der = true;
  int produced = 0;
  for (int t = 0; t < der_k.dim(); ++t) {
    auto f = der_k.space.basis_vector(t);
    for (int q = 0; q < dk; ++q) {
      std::vector<FieldElement> w(static_cast<size_t>(hom_dim(ak, mk)), FieldElement(a.field()));
      for (int x = 0; x < da; ++x)
        for (int b = 0; b < dm; ++b) {
          const FieldElement& fv = f[hom_index(dm, x, b)];
          if (fv.is_zero()) continue;
          for (int p = 0; p < dk; ++p)
            for (int rr = 0; rr < dk; ++rr) {
              const FieldElement& s = k.algebra().structure_coeff(q, p, rr);
              if (!s.is_zero())
                w[hom_index(dmk, x * dk + p, b * dk + rr)] += fv * s;
            }
        }
      if (!der_rel.space.contains(w)) rep.image_in_der = false;
      span.add_dense_row(w);
      ++produced;
    }
  }
  rep.injective = span.rank() == produced;
  return rep;
}

// ---------------------------------------------------------------------------
// eta and its section

/// Explicit base-ring structure: a commutative ring R acting on the algebra
/// and on the dimodule by the given operator families.
struct RStructure {
  CommutativeExtension ring;
  std::vector<ExactMatrix> on_algebra;
  std::vector<ExactMatrix> on_module;
};

inline RStructure r_structure_from_records(const Algebra& b, const Dimodule& n) {
  detail::require_k_records(b, n);
  return RStructure{b.base_ring().ring, b.base_ring().action, n.base_ring().action};
}

/// Checks that R acts associatively and unitally on both carriers, that B is
/// an R-algebra, and that N is a (B, R)-dimodule. RStructureInvalid names the
/// first failing law.
inline void validate_r_structure(const Algebra& b, const Dimodule& n, const RStructure& r) {
  const int dr = r.ring.dim();
  require(static_cast<int>(r.on_algebra.size()) == dr && static_cast<int>(r.on_module.size()) == dr,
          errc::r_structure_invalid, "one action operator per R-basis element is required");
  FieldSpec f = b.field();
  auto combine = [&](const std::vector<ExactMatrix>& ops, const std::vector<FieldElement>& coef) {
    ExactMatrix acc(ops[0].rows(), ops[0].cols(), f);
    for (int p = 0; p < dr; ++p)
      if (!coef[static_cast<size_t>(p)].is_zero())
        acc = acc + ops[static_cast<size_t>(p)].scaled(coef[static_cast<size_t>(p)]);
    return acc;
  };
  // unital
  require(combine(r.on_algebra, r.ring.unit()) == ExactMatrix::identity(b.dim(), f),
          errc::r_structure_invalid, "R-unit does not act as identity on the algebra");
  require(combine(r.on_module, r.ring.unit()) == ExactMatrix::identity(n.dim(), f),
          errc::r_structure_invalid, "R-unit does not act as identity on the module");
  // associative: r_p (r_q x) = (r_p r_q) x
  for (int p = 0; p < dr; ++p)
    for (int q = 0; q < dr; ++q) {
      std::vector<FieldElement> prod = r.ring.algebra().product_basis(p, q);
      require(r.on_algebra[static_cast<size_t>(p)] * r.on_algebra[static_cast<size_t>(q)] ==
                  combine(r.on_algebra, prod),
              errc::r_structure_invalid,
              "R-action on the algebra is not associative at (" + std::to_string(p) + "," +
                  std::to_string(q) + ")");
      require(r.on_module[static_cast<size_t>(p)] * r.on_module[static_cast<size_t>(q)] ==
                  combine(r.on_module, prod),
              errc::r_structure_invalid,
              "R-action on the module is not associative at (" + std::to_string(p) + "," +
                  std::to_string(q) + ")");
    }
  // B is an R-algebra: r(ab) = (ra)b = a(rb)
  for (int p = 0; p < dr; ++p)
    for (int i = 0; i < b.dim(); ++i) {
      const ExactMatrix& rp = r.on_algebra[static_cast<size_t>(p)];
      auto rei = rp.apply(b.basis_vector(i));
      require(b.left_mult_by(rei) == rp * b.left_mult(i), errc::r_structure_invalid,
              "(r a) b != r (a b) at r-basis " + std::to_string(p) + ", a = basis " + std::to_string(i));
      require(b.right_mult_by(rei) == rp * b.right_mult(i), errc::r_structure_invalid,
              "a (r b) != r (a b) at r-basis " + std::to_string(p) + ", b = basis " + std::to_string(i));
    }
  // N is a (B, R)-dimodule
  for (int p = 0; p < dr; ++p) {
    const ExactMatrix& rp = r.on_module[static_cast<size_t>(p)];
    const ExactMatrix& rpa = r.on_algebra[static_cast<size_t>(p)];
    for (int i = 0; i < b.dim(); ++i) {
      require(rp * n.left_op(i) == n.left_op(i) * rp, errc::r_structure_invalid,
              "r(a.m) != a.(r m) at r-basis " + std::to_string(p));
      require(rp * n.right_op(i) == n.right_op(i) * rp, errc::r_structure_invalid,
              "r(m.a) != (r m).a at r-basis " + std::to_string(p));
      // (ra).m = r(a.m) and m.(ra) = r(m.a)
      ExactMatrix left_ra(n.dim(), n.dim(), f), right_ra(n.dim(), n.dim(), f);
      auto rei = rpa.apply(b.basis_vector(i));
      for (int x = 0; x < b.dim(); ++x) {
        if (rei[static_cast<size_t>(x)].is_zero()) continue;
        left_ra = left_ra + n.left_op(x).scaled(rei[static_cast<size_t>(x)]);
        right_ra = right_ra + n.right_op(x).scaled(rei[static_cast<size_t>(x)]);
      }
      require(left_ra == rp * n.left_op(i), errc::r_structure_invalid,
              "(r a).m != r(a.m) at r-basis " + std::to_string(p));
      require(right_ra == rp * n.right_op(i), errc::r_structure_invalid,
              "m.(r a) != r(m.a) at r-basis " + std::to_string(p));
    }
  }
}

struct EtaReport {
  int dim_der_k = 0;
  int dim_der_r = 0;   // = dim ker eta
  int dim_image = 0;
  bool values_in_centroid = false;
  bool eta_is_derivation = false;
  bool kernel_is_der_r = false;
  LinearSubspace der_k, der_r, kernel;
  /// eta of each Der_k basis element, as matrices per R-basis element.
  std::vector<std::vector<ExactMatrix>> eta_values;
  bool passed() const { return values_in_centroid && eta_is_derivation && kernel_is_der_r; }
};

/// Materializes eta(d)(r) : b -> d(rb) - r d(b) on a basis of Der_k(B, N),
/// checks it lands in Cent_k(B, N), that eta(d) satisfies the Leibniz rule on
/// R, and that ker(eta) equals Der_R(B, N) as canonical subspaces.
inline EtaReport eta_map(const Algebra& b, const Dimodule& n, const RStructure& r) {
  check_dimodule_of(b, n);
  validate_r_structure(b, n, r);
  EtaReport rep;
  const int dr = r.ring.dim();
  DerivationSpace der_k = der_space(b, n, Over::k);
  DerivationSpace der_r = der_space_with_actions(b, n, r.on_algebra, r.on_module);
  CentroidSpace cent = cent_space(b, n, Over::k);
  rep.der_k = der_k.space;
  rep.der_r = der_r.space;
  rep.dim_der_k = der_k.dim();
  rep.dim_der_r = der_r.dim();
  rep.values_in_centroid = true;
  rep.eta_is_derivation = true;

  const int hd = hom_dim(b, n);
  ExactMatrix eta_columns(dr * hd, der_k.dim(), b.field());
  for (int t = 0; t < der_k.dim(); ++t) {
    ExactMatrix d = hom_to_matrix(b, n, der_k.space.basis_vector(t));
    std::vector<ExactMatrix> vals;
    for (int p = 0; p < dr; ++p) {
      ExactMatrix val = d * r.on_algebra[static_cast<size_t>(p)] - r.on_module[static_cast<size_t>(p)] * d;
      std::vector<FieldElement> vec = matrix_to_hom(val);
      if (!cent.space.contains(vec)) rep.values_in_centroid = false;
      for (int x = 0; x < hd; ++x) eta_columns.at(p * hd + x, t) = vec[static_cast<size_t>(x)];
      vals.push_back(std::move(val));
    }
    // Leibniz on R: eta(d)(r_p r_q) = eta(d)(r_p).r_q + r_p.eta(d)(r_q)
    for (int p = 0; p < dr && rep.eta_is_derivation; ++p)
      for (int q = 0; q < dr && rep.eta_is_derivation; ++q) {
        std::vector<FieldElement> prod = r.ring.algebra().product_basis(p, q);
        ExactMatrix lhs(n.dim(), b.dim(), b.field());
        for (int s = 0; s < dr; ++s)
          if (!prod[static_cast<size_t>(s)].is_zero())
            lhs = lhs + vals[static_cast<size_t>(s)].scaled(prod[static_cast<size_t>(s)]);
        ExactMatrix rhs = vals[static_cast<size_t>(p)] * r.on_algebra[static_cast<size_t>(q)] +
                          r.on_module[static_cast<size_t>(p)] * vals[static_cast<size_t>(q)];
        if (lhs != rhs) rep.eta_is_derivation = false;
      }
    rep.eta_values.push_back(std::move(vals));
  }
  // kernel of eta inside Der_k, mapped back to Hom coordinates
  LinearSubspace alpha = nullspace(eta_columns);
  RrefBuilder ker(hd, b.field());
  for (int t = 0; t < alpha.dim(); ++t) {
    std::vector<FieldElement> combo(static_cast<size_t>(hd), FieldElement(b.field()));
    for (int s = 0; s < der_k.dim(); ++s) {
      const FieldElement& c = alpha.basis().at(t, s);
      if (c.is_zero()) continue;
      auto bs = der_k.space.basis_vector(s);
      for (int x = 0; x < hd; ++x) combo[static_cast<size_t>(x)] += c * bs[static_cast<size_t>(x)];
    }
    ker.add_dense_row(combo);
  }
  rep.kernel = LinearSubspace::from_builder(ker);
  rep.kernel_is_der_r = rep.kernel == der_r.space;
  rep.dim_image = rep.dim_der_k - rep.kernel.dim();
  return rep;
}

struct SectionReport {
  int dim_der_k = 0;       // Der_k(A_S, M)
  int dim_der_s = 0;       // Der_S(A_S, M)
  int dim_der_s_cent = 0;  // Der_k(S, Cent_k(A_S, M))
  bool sigma_values_are_derivations = false;
  bool eta_sigma_is_identity = false;
  bool direct_sum = false;
  LinearSubspace sigma_image;
  bool passed() const {
    return sigma_values_are_derivations && eta_sigma_is_identity && direct_sum;
  }
};

/// The untwisted section sigma(d)(a (x) s) = d(s)(a (x) 1) of eta, for a
/// perfect algebra A, an extension S, and a dimodule M of A_S carrying the
/// S-action. Verifies eta o sigma = id and the split
/// Der_k(A_S, M) = Der_S(A_S, M) (+) sigma(Der_k(S, Cent)).
inline SectionReport sigma_section_untwisted(const Algebra& a, const CommutativeExtension& s,
                                             const Dimodule& m) {
  require(is_perfect(a), errc::not_perfect,
          "sigma section requires a perfect algebra; Cent_k = Cent_S may fail otherwise");
  Algebra as = base_change_algebra(a, s);
  require(m.algebra().dim() == as.dim() && m.field() == as.field(), errc::dimodule_mismatch,
          "dimodule does not belong to A_S");
  require(m.has_base_ring(), errc::missing_k_structure, "dimodule must record the S-action");
  const std::vector<ExactMatrix>& u = as.base_ring().action;   // S on A_S
  const std::vector<ExactMatrix>& v = m.base_ring().action;    // S on M
  const int ds = s.dim();
  FieldSpec f = a.field();

  SectionReport rep;
  DerivationSpace der_k = der_space(as, m, Over::k);
  DerivationSpace der_s = der_space_with_actions(as, m, u, v);
  CentroidSpace cent = cent_space(as, m, Over::k);
  rep.dim_der_k = der_k.dim();
  rep.dim_der_s = der_s.dim();
  const int dc = cent.dim();

  // S-module structure on the centroid: left (s.chi) = V_s o chi, right
  // (chi.s) = chi o U_s, both expressed in the centroid basis.
  std::vector<ExactMatrix> left_on_c(static_cast<size_t>(ds), ExactMatrix(dc, dc, f));
  std::vector<ExactMatrix> right_on_c(static_cast<size_t>(ds), ExactMatrix(dc, dc, f));
  for (int p = 0; p < ds; ++p)
    for (int t = 0; t < dc; ++t) {
      ExactMatrix chi = hom_to_matrix(as, m, cent.space.basis_vector(t));
      auto lcoords = coordinates_in_span(cent.space.basis(), matrix_to_hom(v[static_cast<size_t>(p)] * chi));
      auto rcoords = coordinates_in_span(cent.space.basis(), matrix_to_hom(chi * u[static_cast<size_t>(p)]));
      require(lcoords.has_value() && rcoords.has_value(), errc::validation_failed,
              "centroid is not closed under the S-action");
      for (int x = 0; x < dc; ++x) {
        left_on_c[static_cast<size_t>(p)].at(x, t) = (*lcoords)[static_cast<size_t>(x)];
        right_on_c[static_cast<size_t>(p)].at(x, t) = (*rcoords)[static_cast<size_t>(x)];
      }
    }

  // Der_k(S, Cent): unknowns D(u_q) in centroid coordinates.
  RrefBuilder dsys(ds * dc, f);
  for (int p = 0; p < ds; ++p)
    for (int q = 0; q < ds; ++q) {
      std::vector<FieldElement> prod = s.algebra().product_basis(p, q);
      for (int x = 0; x < dc; ++x) {
        SparseRow row;
        for (int t = 0; t < dc; ++t) {
          for (int w = 0; w < ds; ++w)
            if (!prod[static_cast<size_t>(w)].is_zero() && ((t == x)))
              row.push(w * dc + t, prod[static_cast<size_t>(w)]);
          const FieldElement& rv = right_on_c[static_cast<size_t>(q)].at(x, t);
          if (!rv.is_zero()) row.push(p * dc + t, -rv);
          const FieldElement& lv = left_on_c[static_cast<size_t>(p)].at(x, t);
          if (!lv.is_zero()) row.push(q * dc + t, -lv);
        }
        row.compress();
        dsys.add_row(std::move(row));
      }
    }
  LinearSubspace der_s_cent = nullspace(dsys);
  rep.dim_der_s_cent = der_s_cent.dim();

  // embedding of e_i (x) 1_S into A_S coordinates
  const int da = a.dim();
  std::vector<std::vector<FieldElement>> e_tensor_one;
  for (int i = 0; i < da; ++i) {
    std::vector<FieldElement> vec(static_cast<size_t>(as.dim()), FieldElement(f));
    for (int p = 0; p < ds; ++p) vec[static_cast<size_t>(i * ds + p)] = s.unit()[static_cast<size_t>(p)];
    e_tensor_one.push_back(std::move(vec));
  }

  rep.sigma_values_are_derivations = true;
  rep.eta_sigma_is_identity = true;
  RrefBuilder image(hom_dim(as, m), f);
  for (int t = 0; t < der_s_cent.dim(); ++t) {
    // sigma(D) as a Hom(A_S, M) matrix
    ExactMatrix sig(m.dim(), as.dim(), f);
    std::vector<ExactMatrix> d_of_q;
    for (int q = 0; q < ds; ++q) {
      ExactMatrix dq(m.dim(), as.dim(), f);
      for (int x = 0; x < dc; ++x) {
        const FieldElement& c = der_s_cent.basis().at(t, q * dc + x);
        if (!c.is_zero()) dq = dq + hom_to_matrix(as, m, cent.space.basis_vector(x)).scaled(c);
      }
      d_of_q.push_back(std::move(dq));
    }
    for (int i = 0; i < da; ++i)
      for (int q = 0; q < ds; ++q) {
        auto img = d_of_q[static_cast<size_t>(q)].apply(e_tensor_one[static_cast<size_t>(i)]);
        for (int bb = 0; bb < m.dim(); ++bb) sig.at(bb, i * ds + q) = img[static_cast<size_t>(bb)];
      }
    std::vector<FieldElement> sig_vec = matrix_to_hom(sig);
    if (!der_k.space.contains(sig_vec)) rep.sigma_values_are_derivations = false;
    image.add_dense_row(sig_vec);
    // eta(sigma(D))(u_q) must equal D(u_q) entry-exact
    for (int q = 0; q < ds; ++q) {
      ExactMatrix eta_q = sig * u[static_cast<size_t>(q)] - v[static_cast<size_t>(q)] * sig;
      if (eta_q != d_of_q[static_cast<size_t>(q)]) rep.eta_sigma_is_identity = false;
    }
  }
  rep.sigma_image = LinearSubspace::from_builder(image);
  LinearSubspace total = sum(der_s.space, rep.sigma_image);
  LinearSubspace overlap = intersect(der_s.space, rep.sigma_image);
  rep.direct_sum = total == der_k.space && overlap.dim() == 0 &&
                   rep.sigma_image.dim() == der_s_cent.dim();
  return rep;
}

}  // namespace dkit
