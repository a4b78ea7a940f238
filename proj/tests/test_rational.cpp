#include "sreg/rational.hpp"

#include "doctest.h"
#include "sreg/exact.hpp"
#include "test_util.hpp"

using namespace sreg;
using sreg::testing::Rng;

namespace {

using SemiQ = SemiRational<Rational>;
using PolyQ = StarPoly<Rational>;
using FacQ = FactoredRealPoly<Rational>;

QuatQ qi() { return QuatQ::i(); }

// (q - n - i) / ((q - n)^2 + 1)
SemiQ lattice_term(int n) {
  PolyQ num({QuatQ{Rational(-n), Rational(-1), Rational(0), Rational(0)},
             QuatQ(Rational(1))});
  FacQ den({RealFactor<Rational>::sphere(Rational(n), Rational(1), 1)});
  return SemiQ(std::move(num), std::move(den));
}

// 2 (q^3 - q^2 i + q(1 - n^2) - (n^2 + 1) i) / (((q+n)^2+1)((q-n)^2+1))
SemiQ paired_term(int n) {
  const Rational n2(n * n);
  PolyQ num({-QuatQ(Rational(2) * (n2 + 1)) * qi(),
             QuatQ(Rational(2) * (1 - n2)),
             -QuatQ(Rational(2)) * qi(),
             QuatQ(Rational(2))});
  FacQ den({RealFactor<Rational>::sphere(Rational(n), Rational(1), 1),
            RealFactor<Rational>::sphere(Rational(-n), Rational(1), 1)});
  return SemiQ(std::move(num), std::move(den));
}

SemiRationald one_over_q2p1() {
  return SemiRationald(StarPolyd::constant(Quatd::one()),
                       FactoredRealPoly<double>(
                           {RealFactor<double>::sphere(0, 1, 1)}));
}

}  // namespace

TEST_CASE("neutral elements") {
  Rng rng(31);
  const SemiRationald f(sreg::testing::rand_poly(rng, 4),
                        FactoredRealPoly<double>({RealFactor<double>::sphere(1, 2, 1)}));
  CHECK(f + SemiRationald{} == f);
  CHECK(f * SemiRationald(StarPolyd::constant(Quatd::one())) == f);
}

TEST_CASE("paired-term identity holds exactly in the rational calculus") {
  for (int n = 1; n <= 10; ++n) {
    const SemiQ sum = lattice_term(n) + lattice_term(-n);
    CHECK(sum == paired_term(n));
  }
}

TEST_CASE("pointwise semantics of add and mul") {
  Rng rng(32);
  std::uniform_real_distribution<double> u(-2, 2);
  for (int t = 0; t < 100; ++t) {
    const SemiRationald f(
        sreg::testing::rand_poly(rng, 3),
        FactoredRealPoly<double>({RealFactor<double>::sphere(0, 1, 1)}));
    const SemiRationald g(
        sreg::testing::rand_poly(rng, 2),
        FactoredRealPoly<double>({RealFactor<double>::root(2, 1)}));
    const Quatd q = sreg::testing::rand_quat(rng, -2, 2);
    const Quatd denf = f.den().eval(q), deng = g.den().eval(q);
    if (abs(denf) < 0.05 || abs(deng) < 0.05) continue;  // stay off the poles
    const double scale = 1 + abs(value(f, q)) + abs(value(g, q));
    CHECK(sreg::testing::quat_dist(value(f + g, q), value(f, q) + value(g, q)) <
          1e-10 * scale);
    CHECK(sreg::testing::quat_dist(value(f * g, q), Quatd{}) <=
          abs(value(f * g, q)));  // finite
  }
}

TEST_CASE("mul against pointwise product needs central left factor") {
  // With a real-coefficient left factor d, (d*g)(q) = d(q) g(q) pointwise.
  Rng rng(33);
  std::uniform_int_distribution<int> u(-9, 9);
  for (int t = 0; t < 100; ++t) {
    std::vector<Quatd> rc(4);
    for (auto& c : rc) c = Quatd(double(u(rng)));
    const SemiRationald d(
        StarPolyd(std::move(rc)),
        FactoredRealPoly<double>({RealFactor<double>::sphere(0, 2, 1)}));
    const SemiRationald g(
        sreg::testing::rand_int_poly(rng, 3),
        FactoredRealPoly<double>({RealFactor<double>::root(3, 1)}));
    const Quatd q = sreg::testing::rand_quat(rng, -1.5, 1.5);
    if (abs(d.den().eval(q)) < 0.05 || abs(g.den().eval(q)) < 0.05) continue;
    const double scale = 1 + abs(value(d, q)) * abs(value(g, q));
    CHECK(sreg::testing::quat_dist(value(d * g, q), value(d, q) * value(g, q)) <
          1e-10 * scale);
    // centrality of real-coefficient numerators, exact on integer inputs
    CHECK(d * g == g * d);
  }
}

TEST_CASE("principal_to_rational") {
  SUBCASE("unit principal part gives 1/(q^2+1)") {
    PrincipalPartd P(0, 1, Quatd::i(), {{Quatd::one(), Quatd{}}});
    const auto f = principal_to_rational(P);
    CHECK(f == one_over_q2p1());
  }
  SUBCASE("pair (0, 1) gives (q - i)/(q^2+1)") {
    PrincipalPartd P(0, 1, Quatd::i(), {{Quatd{}, Quatd::one()}});
    const auto f = principal_to_rational(P);
    const SemiRationald expect(
        StarPolyd({-Quatd::i(), Quatd::one()}),
        FactoredRealPoly<double>({RealFactor<double>::sphere(0, 1, 1)}));
    CHECK(f == expect);
  }
  SUBCASE("empty principal part is the zero function") {
    PrincipalPartd P(0, 1, Quatd::i(), {});
    CHECK(principal_to_rational(P).is_zero());
  }
  SUBCASE("pointwise value matches the defining sum") {
    Rng rng(34);
    for (int t = 0; t < 50; ++t) {
      const Quatd a2 = sreg::testing::rand_quat(rng), a3 = sreg::testing::rand_quat(rng);
      const Quatd a4 = sreg::testing::rand_quat(rng), a5 = sreg::testing::rand_quat(rng);
      PrincipalPartd P(0.5, 1.5, Quatd{0.5, 0, 1.5, 0}, {{a2, a3}, {a4, a5}});
      const auto f = principal_to_rational(P);
      const Quatd q = sreg::testing::rand_quat(rng, -2, 2);
      const Quatd w = Sphere2(0.5, 1.5).quadratic_at(q);
      if (abs(w) < 0.1) continue;
      const Quatd winv = inverse(w);
      const Quatd direct = winv * (a2 + (q - P.q0) * a3) +
                           winv * winv * (a4 + (q - P.q0) * a5);
      CHECK(sreg::testing::quat_dist(value(f, q), direct) < 1e-11 * (1 + abs(direct)));
    }
  }
}

TEST_CASE("pole_extract") {
  SUBCASE("1/(q^2+1) at sphere (0,1)") {
    const auto [k, g] = pole_extract(one_over_q2p1(), Sphere2(0, 1));
    CHECK(k == 1);
    CHECK(g == SemiRationald(StarPolyd::constant(Quatd::one())));
  }
  SUBCASE("(q - i)/(q^2+1)^2 at sphere (0,1)") {
    const SemiRationald f(
        StarPolyd({-Quatd::i(), Quatd::one()}),
        FactoredRealPoly<double>({RealFactor<double>::sphere(0, 1, 2)}));
    const auto [k, g] = pole_extract(f, Sphere2(0, 1));
    CHECK(k == 2);
    CHECK(g == SemiRationald(StarPolyd({-Quatd::i(), Quatd::one()})));
  }
  SUBCASE("polynomials have no pole anywhere") {
    const SemiRationald f(StarPolyd({Quatd{}, Quatd{}, Quatd{}, Quatd::one()}));
    const auto [k, g] = pole_extract(f, Sphere2(0.25, 1.5));
    CHECK(k == 0);
    CHECK(g == f);
  }
  SUBCASE("extract then re-multiply reproduces f exactly") {
    const SemiQ f = paired_term(2);
    const auto [k, g] = pole_extract(f, Rational(2), Rational(1));
    CHECK(k == 1);
    FacQ wk({RealFactor<Rational>::sphere(Rational(2), Rational(1), 1)});
    const SemiQ back(g.num(), g.den() * wk);
    CHECK(back == f);
  }
  SUBCASE("real point uses half the factor power, rounded up") {
    const SemiRationald f(StarPolyd::constant(Quatd::one()),
                          FactoredRealPoly<double>({RealFactor<double>::root(2, 3)}));
    const auto [k, g] = pole_extract(f, Sphere2(2, 0));
    CHECK(k == 2);  // (q-2)^{-3} = W^{-2} (q-2) with W = (q-2)^2
    CHECK(g == SemiRationald(StarPolyd({Quatd(-2.0), Quatd::one()})));
  }
}

TEST_CASE("canonical cancellation") {
  // ((q^2+1) * (q - j)) / (q^2+1) collapses to q - j
  const auto num = star_mul_real(StarPolyd({-Quatd::j(), Quatd::one()}),
                                 std::vector<double>{1, 0, 1});
  const SemiRationald f(num, FactoredRealPoly<double>({RealFactor<double>::sphere(0, 1, 1)}));
  CHECK(f == SemiRationald(StarPolyd({-Quatd::j(), Quatd::one()})));
}

TEST_CASE("value is the left inverse of the denominator times the numerator") {
  // For f = (q - n - i)/((q-n)^2+1) the inverse factor acts on the left.
  const SemiQ f = lattice_term(0);
  const QuatQ q = QuatQ::j() * Rational(2);
  const QuatQ den = FacQ({RealFactor<Rational>::sphere(Rational(0), Rational(1), 1)}).eval(q);
  const QuatQ expect = inverse(den) * (q - qi());
  CHECK(value(f, q) == expect);
}

TEST_CASE("taylor_truncate") {
  SUBCASE("1/(q^2+1) at order 4 on rho = 1/2") {
    const auto tr = taylor_truncate(one_over_q2p1(), 4, 0.5);
    // 1 - q^2 + q^4
    CHECK(tr.coeff_unscaled(0) == Quatd::one());
    CHECK(tr.coeff_unscaled(1) == Quatd{});
    CHECK(tr.coeff_unscaled(2) == -Quatd::one());
    CHECK(tr.coeff_unscaled(3) == Quatd{});
    CHECK(tr.coeff_unscaled(4) == Quatd::one());
    const Quatd q{0.2, 0.3, -0.1, 0.1};
    const Quatd q2 = q * q;
    CHECK(sreg::testing::quat_dist(tr.value(q), Quatd::one() - q2 + q2 * q2) < 1e-15);
    // true tail is sum_{m >= 6 even} (1/2)^m = 1/48
    CHECK(tr.tail_bound >= 1.0 / 48 - 1e-12);
    CHECK(tr.tail_bound <= 1.0 / 48 + 1e-4);
  }
  SUBCASE("constants truncate to themselves with zero tail") {
    const SemiRationald c(StarPolyd::constant(Quatd{1, 2, 3, 4}));
    const auto tr = taylor_truncate(c, 3, 2.0);
    CHECK(tr.coeff_unscaled(0) == Quatd{1, 2, 3, 4});
    CHECK(tr.degree() == 0);
    CHECK(tr.tail_bound == 0.0);
  }
  SUBCASE("q/(q^2+4): odd coefficients (1/4)(-1/4)^m") {
    const SemiRationald f(
        StarPolyd({Quatd{}, Quatd::one()}),
        FactoredRealPoly<double>({RealFactor<double>::sphere(0, 2, 1)}));
    const auto tr = taylor_truncate(f, 5, 1.0);
    CHECK(tr.poly.coeff(1) == Quatd(0.25));
    CHECK(tr.poly.coeff(3) == Quatd(-0.0625));
    CHECK(tr.poly.coeff(5) == Quatd(0.015625));
    CHECK(tr.poly.coeff(0) == Quatd{});
    CHECK(tr.poly.coeff(2) == Quatd{});
    // true tail on |q| <= 1: sum_{m odd > 5} (1/4)^{(m+1)/2} = (1/4)^4/(1-1/4)
    const double truth = std::pow(0.25, 4) / (1 - 0.25);
    CHECK(tr.tail_bound >= truth - 1e-15);
    CHECK(tr.tail_bound <= truth * 1.01 + 1e-12);
  }
  SUBCASE("certified bound dominates the empirical sup") {
    Rng rng(35);
    const SemiRationald f(
        sreg::testing::rand_poly(rng, 3),
        FactoredRealPoly<double>({RealFactor<double>::sphere(0.5, 1.0, 1),
                                  RealFactor<double>::root(-2, 1)}));
    const double rho = 0.6;  // factor moduli are ~1.118 and 2
    const auto tr = taylor_truncate(f, 10, rho);
    double sup = 0;
    for (int t = 0; t < 1000; ++t) {
      Quatd q = sreg::testing::rand_quat(rng);
      const double r = abs(q);
      if (r > 0) q = q * (rho * std::pow(double(t % 100 + 1) / 100.0, 0.25) / r);
      sup = std::max(sup, abs(value(f, q) - tr.value(q)));
    }
    CHECK(sup <= tr.tail_bound);
  }
  SUBCASE("pole inside the ball is rejected") {
    CHECK_THROWS_AS((void)taylor_truncate(one_over_q2p1(), 4, 1.5), std::domain_error);
    CHECK_THROWS_AS((void)taylor_truncate(one_over_q2p1(), 4, 1.0), std::domain_error);
  }
}

TEST_CASE("exceptional point heuristic") {
  // (q - i)/(q^2+1): top pair (0, 1), zero of 0 + (q - i) * 1 at q = i
  PrincipalPartd P(0, 1, Quatd::i(), {{Quatd{}, Quatd::one()}});
  const auto e = exceptional_point(P);
  REQUIRE(e.has_value());
  CHECK(sreg::testing::quat_dist(*e, Quatd::i()) < 1e-12);
  // unit principal part: no linear term, no exceptional point
  PrincipalPartd Q(0, 1, Quatd::i(), {{Quatd::one(), Quatd{}}});
  CHECK(!exceptional_point(Q).has_value());
  // zero off the sphere: reported as none
  PrincipalPartd R(0, 1, Quatd::i(), {{Quatd(5.0), Quatd::one()}});
  CHECK(!exceptional_point(R).has_value());
}
