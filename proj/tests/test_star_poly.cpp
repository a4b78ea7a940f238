#include "sreg/star_poly.hpp"

#include "doctest.h"
#include "sreg/exact.hpp"
#include "test_util.hpp"

using namespace sreg;
using sreg::testing::Rng;

namespace {
StarPolyd poly(std::vector<Quatd> c) { return StarPolyd(std::move(c)); }
}  // namespace

TEST_CASE("star_mul basics") {
  // (q - i) * (q - j) = q^2 - q(i+j) + k
  const auto f = StarPolyd::linear(Quatd::i());
  const auto g = StarPolyd::linear(Quatd::j());
  const auto fg = star_mul(f, g);
  CHECK(fg == poly({Quatd::k(), Quatd{0, -1, -1, 0}, Quatd::one()}));

  // identity
  const auto one = StarPolyd::constant(Quatd::one());
  Rng rng(21);
  const auto h = sreg::testing::rand_poly(rng, 6);
  CHECK(star_mul(h, one) == h);
  CHECK(star_mul(one, h) == h);
}

TEST_CASE("star_mul matches the brute-force convolution oracle") {
  Rng rng(22);
  for (int t = 0; t < 200; ++t) {
    const auto f = sreg::testing::rand_int_poly(rng, 6);
    const auto g = sreg::testing::rand_int_poly(rng, 6);
    const auto prod = star_mul(f, g);
    const auto oracle = sreg::testing::convolve_oracle(f.coeffs(), g.coeffs());
    REQUIRE(prod.coeffs().size() == oracle.size());
    for (std::size_t n = 0; n < oracle.size(); ++n)
      CHECK(prod.coeffs()[n] == oracle[n]);  // exact on integer coefficients
  }
}

TEST_CASE("star_pow") {
  // (q - i)^{*2} = q^2 - 2qi - 1
  CHECK(star_pow(Quatd::i(), 2) ==
        poly({Quatd(-1.0), Quatd{0, -2, 0, 0}, Quatd::one()}));
  CHECK(star_pow(Quatd::i(), 0) == StarPolyd::constant(Quatd::one()));
  // real center: ordinary binomial
  CHECK(star_pow(Quatd(2.0), 2) == poly({Quatd(4.0), Quatd(-4.0), Quatd(1.0)}));
}

TEST_CASE("eval") {
  // eval(q^2 - 2qi - 1, j) = -2 + 2k
  const auto f = star_pow(Quatd::i(), 2);
  CHECK(eval(f, Quatd::j()) == Quatd{-2, 0, 0, 2});

  CHECK(eval(StarPolyd::constant(Quatd{1, 2, 3, 4}), Quatd{9, -1, 0, 2}) ==
        Quatd{1, 2, 3, 4});

  // q^2 + 1 vanishes on the whole unit sphere of imaginary units
  const auto s = poly({Quatd::one(), Quatd{}, Quatd::one()});
  Rng rng(23);
  for (int t = 0; t < 100; ++t) {
    const auto I = sreg::testing::rand_unit(rng);
    CHECK(abs(eval(s, I.quat())) < 1e-14);
  }
}

TEST_CASE("zero set of q^2 + 1 is exactly the sphere (0, 1)") {
  const auto s = poly({Quatd::one(), Quatd{}, Quatd::one()});
  Rng rng(24);
  for (double x : {-1.0, -0.5, 0.0, 0.5, 1.0}) {
    for (double y : {0.0, 0.5, 1.0, 1.5}) {
      const auto I = sreg::testing::rand_unit(rng);
      const Quatd q = Quatd(x) + y * I;
      const bool zero = abs(eval(s, q)) < 1e-12;
      CHECK(zero == (x == 0.0 && y == 1.0));
    }
  }
}

TEST_CASE("star_divide_linear") {
  SUBCASE("q^2 + 1 by (q - i)") {
    const auto f = poly({Quatd::one(), Quatd{}, Quatd::one()});
    const auto [quot, rem] = star_divide_linear(f, Quatd::i());
    CHECK(quot == poly({Quatd::i(), Quatd::one()}));
    CHECK(rem == Quatd{});
    CHECK(star_mul(StarPolyd::linear(Quatd::i()), quot) == f);
  }
  SUBCASE("constant") {
    const auto [quot, rem] = star_divide_linear(StarPolyd::constant(Quatd{1, 2, 3, 4}),
                                                Quatd::j());
    CHECK(quot.is_zero());
    CHECK(rem == Quatd{1, 2, 3, 4});
  }
  SUBCASE("f = q at q0 = j") {
    const auto [quot, rem] = star_divide_linear(poly({Quatd{}, Quatd::one()}), Quatd::j());
    CHECK(quot == StarPolyd::constant(Quatd::one()));
    CHECK(rem == Quatd::j());
  }
  SUBCASE("reconstruction is exact on integer coefficients") {
    Rng rng(25);
    for (int t = 0; t < 200; ++t) {
      const auto f = sreg::testing::rand_int_poly(rng, 8);
      const Quatd q0 = sreg::testing::rand_int_quat(rng, -3, 3);
      const auto [quot, rem] = star_divide_linear(f, q0);
      const auto back = star_mul(StarPolyd::linear(q0), quot) + StarPolyd::constant(rem);
      CHECK(back == f);
      CHECK(rem == eval(f, q0));
    }
  }
}

TEST_CASE("recenter") {
  SUBCASE("identity at same center") {
    Rng rng(26);
    const auto f = sreg::testing::rand_poly(rng, 5);
    CHECK(recenter(f, Quatd{}) == f);
  }
  SUBCASE("q^2 at real 1 is (q-1)^2 + 2(q-1) + 1") {
    const auto f = poly({Quatd{}, Quatd{}, Quatd::one()});
    const auto g = recenter(f, Quatd(1.0));
    CHECK(g.center() == Quatd(1.0));
    CHECK(g.coeffs() ==
          std::vector<Quatd>{Quatd::one(), Quatd(2.0), Quatd::one()});
  }
  SUBCASE("round trip within 1e-12 of the working scale") {
    Rng rng(27);
    for (int t = 0; t < 100; ++t) {
      const auto f = sreg::testing::rand_poly(rng, 7);
      const auto I = sreg::testing::rand_unit(rng);
      std::uniform_real_distribution<double> u(-2, 2);
      const Quatd c = Quatd(u(rng)) + std::fabs(u(rng)) * I;
      const auto shifted = recenter(f, c);
      // the shifted coefficients grow like |c|^deg; errors scale with them
      double scale = 1;
      for (const auto& a : shifted.coeffs()) scale = std::max(scale, abs(a));
      const auto back = recenter(shifted, Quatd{});
      REQUIRE(back.degree() == f.degree());
      for (std::size_t n = 0; n < f.coeffs().size(); ++n)
        CHECK(sreg::testing::quat_dist(back.coeffs()[n], f.coeffs()[n]) < 1e-12 * scale);
    }
  }
  SUBCASE("off-plane recentering is rejected") {
    const auto f = StarPolyd(std::vector<Quatd>{Quatd::one(), Quatd::one()}, Quatd::i());
    CHECK_THROWS_AS((void)recenter(f, Quatd{0, 0, 2, 0}), std::invalid_argument);
    // a real target is always fine
    CHECK_NOTHROW((void)recenter(f, Quatd(3.0)));
  }
}

TEST_CASE("evaluation agrees across centered representations on the slice") {
  Rng rng(28);
  for (int t = 0; t < 100; ++t) {
    const auto f = sreg::testing::rand_poly(rng, 6);
    const auto I = sreg::testing::rand_unit(rng);
    std::uniform_real_distribution<double> u(-1.5, 1.5);
    const Quatd c = Quatd(u(rng)) + std::fabs(u(rng)) * I;
    const auto g = recenter(f, c);
    const Quatd q = Quatd(u(rng)) + std::fabs(u(rng)) * I;  // on the slice of c
    CHECK(sreg::testing::quat_dist(eval(f, q), eval(g, q)) < 1e-11);
  }
}

TEST_CASE("star algebra properties") {
  Rng rng(29);
  SUBCASE("associative and distributive, exact on integers") {
    for (int t = 0; t < 100; ++t) {
      const auto f = sreg::testing::rand_int_poly(rng, 4);
      const auto g = sreg::testing::rand_int_poly(rng, 4);
      const auto h = sreg::testing::rand_int_poly(rng, 4);
      CHECK(star_mul(star_mul(f, g), h) == star_mul(f, star_mul(g, h)));
      CHECK(star_mul(f, g + h) == star_mul(f, g) + star_mul(f, h));
    }
  }
  SUBCASE("not commutative: (q-i)*(q-j) != (q-j)*(q-i)") {
    const auto a = star_mul(StarPolyd::linear(Quatd::i()), StarPolyd::linear(Quatd::j()));
    const auto b = star_mul(StarPolyd::linear(Quatd::j()), StarPolyd::linear(Quatd::i()));
    CHECK(!(a == b));
  }
  SUBCASE("real-coefficient polynomials are central") {
    for (int t = 0; t < 100; ++t) {
      std::uniform_int_distribution<int> u(-9, 9);
      std::vector<Quatd> rc(5);
      for (auto& c : rc) c = Quatd(double(u(rng)));
      const auto f = StarPolyd(std::move(rc));
      const auto g = sreg::testing::rand_int_poly(rng, 5);
      CHECK(star_mul(f, g) == star_mul(g, f));
    }
  }
  SUBCASE("on-slice evaluation of a product factors pointwise") {
    // Coefficients and points drawn from one plane L_I commute, so the
    // *-product evaluates to the pointwise product there.
    for (int t = 0; t < 200; ++t) {
      const auto I = sreg::testing::rand_unit(rng);
      std::uniform_real_distribution<double> u(-1.2, 1.2);
      auto slice_poly = [&](int deg) {
        std::vector<Quatd> c(static_cast<std::size_t>(deg) + 1);
        for (auto& a : c) a = Quatd(u(rng)) + u(rng) * I;
        return StarPolyd(std::move(c));
      };
      const auto f = slice_poly(4), g = slice_poly(3);
      const Quatd q = Quatd(u(rng)) + u(rng) * I;
      CHECK(sreg::testing::quat_dist(eval(star_mul(f, g), q), eval(f, q) * eval(g, q)) <
            1e-12);
    }
  }
}

TEST_CASE("degree cap guards blow-up") {
  CHECK_THROWS_AS((void)star_pow(Quatd::i(), 600), std::length_error);
  CHECK_NOTHROW((void)star_pow(Quatd::i(), 600, 1024));
  std::vector<Quatd> big(600, Quatd::one());
  CHECK_THROWS_AS((void)StarPolyd(std::move(big)), std::length_error);
}

TEST_CASE("exact scalar instantiation") {
  using P = StarPoly<Rational>;
  const auto f = P({QuatQ(Rational(1)), QuatQ(Rational(0)), QuatQ(Rational(1))});
  const auto [quot, rem] = star_divide_linear(f, QuatQ::i());
  CHECK(rem == QuatQ{});
  CHECK(star_mul(P::linear(QuatQ::i()), quot) == f);
  const auto third = Rational(1) / 3;
  const auto g = P::constant(QuatQ(third)) * QuatQ(Rational(3));
  CHECK(eval(g, QuatQ::j()) == QuatQ(Rational(1)));
}
