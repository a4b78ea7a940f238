#pragma once

// Independent numerical checkers the rest of the toolkit is validated
// against: a discretized slice Cauchy-Riemann residual, the affine-on-spheres
// test, and a sampler comparing a claimed centered expansion with the
// function on a sigma ball.

#include <array>
#include <cmath>
#include <random>

#include "sreg/geometry.hpp"
#include "sreg/quaternion.hpp"
#include "sreg/spherical.hpp"
#include "sreg/star_poly.hpp"

namespace sreg {

// Central-difference approximation of dbar_I f = (1/2)(d/dx + I d/dy) f_I at
// q = x + I y.  O(h^2) for regular f; 1 for the conjugate map.
inline Quatd dbar_residual(const EvalFn& f, const Quatd& q, double h) {
  const auto d = decompose(q);
  const ImaginaryUnit I = d.unit ? *d.unit : ImaginaryUnit::i();
  const Quatd ex = Quatd(1.0), ey = I.quat();
  const Quatd fx = (f(q + h * ex) - f(q - h * ex)) / (2 * h);
  const Quatd fy = (f(q + h * ey) - f(q - h * ey)) / (2 * h);
  return 0.5 * (fx + I.quat() * fy);
}

struct RegularityReport {
  Quatd point;
  ImaginaryUnit unit = ImaginaryUnit::i();
  std::array<double, 3> residuals{};  // at h, h/2, h/4, relative to scale
  double order = 0;                   // estimated convergence order
  bool regular = false;
};

// Residual decay consistent with order >= 1.5 plus a small final residual.
// Thresholds are relative to max(1, |f(q)|) so pole-adjacent magnitudes do
// not produce false negatives.
inline RegularityReport check_regularity(const EvalFn& f, const Quatd& q,
                                         double h = 1e-3, double tol = 1e-6) {
  RegularityReport rep;
  rep.point = q;
  const auto d = decompose(q);
  if (d.unit) rep.unit = *d.unit;
  const double scale = std::max(1.0, abs(f(q)));
  rep.residuals = {abs(dbar_residual(f, q, h)) / scale,
                   abs(dbar_residual(f, q, h / 2)) / scale,
                   abs(dbar_residual(f, q, h / 4)) / scale};
  const double floor_eps = 1e-13;
  const double r01 = rep.residuals[0] / std::max(rep.residuals[1], floor_eps);
  const double r12 = rep.residuals[1] / std::max(rep.residuals[2], floor_eps);
  rep.order = 0.5 * (std::log2(std::max(r01, 1e-6)) + std::log2(std::max(r12, 1e-6)));
  const bool at_noise_floor = rep.residuals[2] < 1e-11;
  rep.regular = rep.residuals[2] < tol && (rep.order >= 1.5 || at_noise_floor);
  return rep;
}

// Step-size sweep for functions with steep but regular content (high-degree
// correction polynomials): a fixed h is either above the h^2 regime or below
// the rounding floor, so try several and keep the best report.
inline RegularityReport check_regularity_adaptive(const EvalFn& f, const Quatd& q,
                                                  double tol = 1e-6) {
  RegularityReport best;
  bool first = true;
  for (double h : {1e-3, 1e-4, 1e-5, 1e-6}) {
    const RegularityReport rep = check_regularity(f, q, h, tol);
    if (rep.regular) return rep;
    if (first || rep.residuals[2] < best.residuals[2]) best = rep;
    first = false;
  }
  return best;
}

// Samples units J on the sphere, fits f(x + yJ) = a + J b from one slice and
// verifies the remaining samples within tol (relative to the sample scale).
inline bool check_affine_on_sphere(const EvalFn& f, const Sphere2& sphere, double tol,
                                   int n_units = 20, unsigned seed = 7) {
  const ImaginaryUnit I = ImaginaryUnit::i();
  const Quatd fp = f(sphere.point(I));
  const Quatd fm = f(Quatd(sphere.x0) - sphere.y0 * I);
  const Quatd a = 0.5 * (fp + fm);
  const Quatd b = 0.5 * (I.quat() * (fm - fp));
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> comp(-1, 1);
  double scale = std::max({1.0, abs(fp), abs(fm)});
  for (int t = 0; t < n_units; ++t) {
    Quatd cand{0, comp(rng), comp(rng), comp(rng)};
    while (im_abs(cand) < 0.1) cand = Quatd{0, comp(rng), comp(rng), comp(rng)};
    const ImaginaryUnit J(cand);
    const Quatd actual = f(sphere.point(J));
    scale = std::max(scale, abs(actual));
    if (abs(actual - (a + J.quat() * b)) > tol * scale) return false;
  }
  return true;
}

struct ExpansionCheck {
  int samples = 0;
  int on_slice = 0;
  double max_mismatch = 0;
  bool pass = false;
};

// Does the claimed centered expansion reproduce f on the sigma ball
// Sigma(q0, R)?  Points are drawn in the ball (rejection in (x, y, J)); the
// report records how many of them lie on the slice of q0 -- off the real
// axis with R < y0 that is all of them.
inline ExpansionCheck check_sigma_expansion(const EvalFn& f, const Quatd& q0,
                                            const StarPoly<double>& coeffs, double R,
                                            double tol = 1e-8, int samples = 200,
                                            unsigned seed = 11) {
  ExpansionCheck rep;
  const StarPolyd claim = coeffs.center() == q0 ? coeffs : recenter(coeffs, q0);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> comp(-1, 1);
  const auto d0 = decompose(q0);
  const ImaginaryUnit I0 = d0.unit ? *d0.unit : ImaginaryUnit::i();
  int tries = 0;
  while (rep.samples < samples && tries < samples * 200) {
    ++tries;
    // alternate exact-slice candidates with random units: for R < y0 the
    // ball is a disc on the slice and only the former can land inside
    ImaginaryUnit J = I0;
    if (tries % 2 == 0) {
      Quatd cand{0, comp(rng), comp(rng), comp(rng)};
      while (im_abs(cand) < 0.1) cand = Quatd{0, comp(rng), comp(rng), comp(rng)};
      J = ImaginaryUnit(cand);
    }
    const double x = d0.x + R * comp(rng);
    const double y = std::fabs(d0.y + R * comp(rng));
    const Quatd q = Quatd(x) + y * J;
    if (!(sigma(q, q0) < R)) continue;
    ++rep.samples;
    if (same_slice(q, q0)) ++rep.on_slice;
    const Quatd fv = f(q);
    const double scale = std::max(1.0, abs(fv));
    rep.max_mismatch = std::max(rep.max_mismatch, abs(fv - eval(claim, q)) / scale);
  }
  rep.pass = rep.samples > 0 && rep.max_mismatch <= tol;
  return rep;
}

}  // namespace sreg
