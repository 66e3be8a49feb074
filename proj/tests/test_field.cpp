#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "dkit/field.hpp"

using namespace dkit;

TEST_CASE("rational parse and format round-trip") {
  CHECK(format_rational(parse_rational("3/2")) == "3/2");
  CHECK(format_rational(parse_rational("-4/2")) == "-2");
  CHECK(format_rational(parse_rational("0")) == "0");
  CHECK(format_rational(parse_rational("12")) == "12");
  CHECK_THROWS_AS(parse_rational("1.5"), Error);
  CHECK_THROWS_AS(parse_rational("a/b"), Error);
  CHECK_THROWS_AS(parse_rational("1/0"), Error);
  CHECK_THROWS_AS(parse_rational(""), Error);
}

TEST_CASE("polynomial ext gcd") {
  // gcd(x^2-1, x^2-2x+1) = x-1
  Poly a{rational(-1), rational(0), rational(1)};
  Poly b{rational(1), rational(-2), rational(1)};
  Poly g = poly_gcd(a, b);
  REQUIRE(g == Poly{rational(-1), rational(1)});
  auto [g2, u, v] = poly_ext_gcd(a, b);
  CHECK(g2 == g);
  CHECK(poly_add(poly_mul(u, a), poly_mul(v, b)) == g);
}

TEST_CASE("field spec separability") {
  FieldSpec gauss = FieldSpec::quotient({rational(1), rational(0), rational(1)});
  CHECK(gauss.separable());
  CHECK(gauss.degree() == 2);
  FieldSpec dual = FieldSpec::quotient({rational(0), rational(0), rational(1)});  // x^2
  CHECK_FALSE(dual.separable());
  // interning: same modulus gives the same spec
  CHECK(gauss == FieldSpec::quotient({rational(1), rational(0), rational(1)}));
  CHECK(gauss != FieldSpec::rationals());
  CHECK_THROWS_AS(FieldSpec::quotient({rational(1), rational(2)}), Error);  // not monic
  CHECK_THROWS_AS(FieldSpec::quotient({rational(5)}), Error);              // degree 0
}

TEST_CASE("inverse over Q") {
  FieldSpec q = FieldSpec::rationals();
  FieldElement x(q, rational(2, 3));
  CHECK(x.inverse() == FieldElement(q, rational(3, 2)));
  CHECK_THROWS_AS(FieldElement(q).inverse(), Error);
}

TEST_CASE("inverse in Q[x]/(x^2+1)") {
  FieldSpec gauss = FieldSpec::quotient({rational(1), rational(0), rational(1)});
  FieldElement i = field_generator(gauss);
  CHECK(i * i == fe(gauss, -1));
  CHECK(i.inverse() == -i);  // x * (-x) = -x^2 = 1
  CHECK(i.inverse() * i == fe(gauss, 1));
}

TEST_CASE("non-invertible element in reducible quotient") {
  FieldSpec split = FieldSpec::quotient({rational(-1), rational(0), rational(1)});  // x^2-1
  FieldElement x = field_generator(split);
  FieldElement xm1 = x - fe(split, 1);
  try {
    (void)xm1.inverse();
    FAIL("expected NotInvertible");
  } catch (const Error& e) {
    CHECK(e.code() == errc::not_invertible);
  }
}

TEST_CASE("field axioms in Q[x]/(x^2+1), randomized") {
  FieldSpec gauss = FieldSpec::quotient({rational(1), rational(0), rational(1)});
  std::mt19937 rng(20240817);
  std::uniform_int_distribution<long> num(-9, 9), den(1, 7);
  auto rand_elem = [&] {
    return FieldElement::from_coeffs(
        gauss, {rational(num(rng), den(rng)), rational(num(rng), den(rng))});
  };
  for (int trial = 0; trial < 200; ++trial) {
    FieldElement a = rand_elem(), b = rand_elem(), c = rand_elem();
    CHECK((a * b) * c == a * (b * c));
    CHECK(a * (b + c) == a * b + a * c);
    CHECK(a + b == b + a);
    CHECK(a * b == b * a);
    if (!a.is_zero()) {
      CHECK(a * a.inverse() == FieldElement::one_like(a));
      CHECK((a.inverse()).inverse() == a);
    }
  }
}

TEST_CASE("roots of unity") {
  CHECK(primitive_root_of_unity(FieldSpec::rationals(), 1) == fe(FieldSpec::rationals(), 1));
  CHECK(primitive_root_of_unity(FieldSpec::rationals(), 2) == fe(FieldSpec::rationals(), -1));

  FieldSpec c3 = cyclotomic_field(3);
  FieldElement z = primitive_root_of_unity(c3, 3);
  CHECK(z.pow(3) == FieldElement::one_like(z));
  CHECK(z.pow(1) != FieldElement::one_like(z));
  CHECK(z * z + z + FieldElement::one_like(z) == FieldElement(c3));

  try {
    (void)primitive_root_of_unity(FieldSpec::rationals(), 3);
    FAIL("expected MissingRootOfUnity");
  } catch (const Error& e) {
    CHECK(e.code() == errc::missing_root_of_unity);
  }
}

TEST_CASE("mixed-field operations are rejected") {
  FieldSpec gauss = FieldSpec::quotient({rational(1), rational(0), rational(1)});
  FieldElement a(FieldSpec::rationals(), rational(1));
  FieldElement b(gauss, rational(1));
  CHECK_THROWS_AS(a + b, Error);
}
