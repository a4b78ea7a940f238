#pragma once

// Spherical Taylor/Laurent expansions around a sphere x0 + y0*S.
//
// Around a sphere the natural expansion is
//   f(q) = sum_{n >= -k} W(q)^n [A_{2(n+k)} + (q - q0) A_{2(n+k)+1}],
// with W(q) = (q - x0)^2 + y0^2 and q0 a chosen point of the sphere.  The
// even coefficients are iterated remainders at q0, the odd ones at conj(q0);
// every iterate is computable on the plane L_I of q0, where *-inverses of
// linear factors act pointwise.  Extraction from an evaluation oracle runs in
// one of two modes: a one-circle Taylor array with alternating synthetic
// divisions (exact for polynomials, valid when the regular disc on the slice
// is wide against the gap |q0 - conj q0|), or per-coefficient circle means of
// the pointwise remainder recurrence (valid on narrow two-lobe shells).

#include <cmath>
#include <functional>
#include <random>
#include <stdexcept>
#include <vector>

#include "sreg/geometry.hpp"
#include "sreg/quaternion.hpp"
#include "sreg/rational.hpp"
#include "sreg/star_poly.hpp"

namespace sreg {

using EvalFn = std::function<Quatd(const Quatd&)>;

struct SphericalExpansion {
  Sphere2 sphere;
  Quatd q0;  // reference point on the sphere
  int k = 0; // terms start at W^{-k}
  std::vector<Quatd> A;
  double radius = 0;    // shell radius the reconstruction was certified on
  double residual = 0;  // worst relative reconstruction mismatch observed

  // Partial sum of the expansion at q (off the sphere when k > 0).
  Quatd value(const Quatd& q) const {
    const Quatd w = sphere.quadratic_at(q);
    if (k > 0 && norm2(w) == 0.0) throw PoleError(sphere);
    Quatd wn = Quatd::one();
    for (int p = 0; p < k; ++p) wn = wn * inverse(w);
    Quatd acc{};
    for (std::size_t j = 0; 2 * j < A.size(); ++j) {
      const Quatd even = A[2 * j];
      const Quatd odd = 2 * j + 1 < A.size() ? A[2 * j + 1] : Quatd{};
      acc += wn * (even + (q - q0) * odd);
      wn = wn * w;
    }
    return acc;
  }
};

struct SphericalOpts {
  double shell_radius = 0.5;  // R with f regular on U(sphere, R)
  double slice_radius = 0;    // known-regular disc radius on L_{I_q0}; 0 = derive
  double circle_radius = 0;   // 0 = auto
  int samples = 128;
  int certify_samples = 64;
  unsigned seed = 42;
  enum class Path { automatic, wide, narrow } path = Path::automatic;
};

// (q - q0)^{-1} (f(q) - f(q0)) for q on the plane of q0; at q = q0 the slice
// derivative via symmetric differences with two Richardson sweeps.
inline Quatd r_operator_on_slice(const EvalFn& f, const Quatd& q0, const Quatd& q) {
  if (!same_slice(q, q0))
    throw std::invalid_argument("r_operator_on_slice: q is off the plane of q0");
  if (abs(q - q0) > 1e-9) return inverse(q - q0) * (f(q) - f(q0));
  auto diff = [&](double h) { return (f(q0 + Quatd(h)) - f(q0 - Quatd(h))) / (2 * h); };
  const double h = 1e-3;
  const Quatd d0 = diff(h), d1 = diff(h / 2), d2 = diff(h / 4);
  const Quatd r1 = (4.0 * d1 - d0) / 3.0;
  const Quatd r2 = (4.0 * d2 - d1) / 3.0;
  return (16.0 * r2 - r1) / 15.0;
}

namespace detail {

inline ImaginaryUnit reference_unit(const Sphere2& s, const Quatd& q0) {
  if (s.is_real_point() || im_abs(q0) < kRealEps) return ImaginaryUnit::i();
  return ImaginaryUnit(q0);
}

inline void check_on_sphere(const Sphere2& s, const Quatd& q0) {
  if (!s.contains(q0, 1e-9 * (1 + s.modulus())))
    throw std::invalid_argument("reference point q0 is not on the sphere");
}

// Taylor coefficients of f|_{L_I} at p, orders 0..W, by circle quadrature:
// d_n = r^{-n} mean_m e^{-I n theta_m} f(p + r e^{I theta_m}).
inline std::vector<Quatd> slice_taylor_array(const EvalFn& f, const ImaginaryUnit& I,
                                             const Quatd& p, double r, int samples,
                                             int W) {
  const int M = std::max(samples, 2 * (W + 2));
  std::vector<Quatd> vals(static_cast<std::size_t>(M));
  for (int m = 0; m < M; ++m) {
    const double th = 2 * M_PI * m / M;
    const Quatd z = p + r * std::cos(th) + (r * std::sin(th)) * I;
    vals[static_cast<std::size_t>(m)] = f(z);
    if (!std::isfinite(abs(vals[static_cast<std::size_t>(m)])))
      throw std::domain_error("not regular here: oracle blew up on the sample circle");
  }
  double sup = 0;
  for (const auto& v : vals) sup = std::max(sup, abs(v));
  std::vector<Quatd> d(static_cast<std::size_t>(W) + 1);
  for (int n = 0; n <= W; ++n) {
    Quatd acc{};
    for (int m = 0; m < M; ++m) {
      const double th = 2 * M_PI * m / M;
      const Quatd rot = Quatd(std::cos(n * th)) - std::sin(n * th) * I;
      acc += rot * vals[static_cast<std::size_t>(m)];
    }
    Quatd cn = acc / (M * std::pow(r, n));
    // entries below the quadrature noise floor are zeroed; otherwise the
    // divisions amplify pure rounding by |delta|^n
    if (abs(cn) <= 1e-13 * sup / std::pow(r, n)) cn = Quatd{};
    d[static_cast<std::size_t>(n)] = cn;
  }
  return d;
}

// Alternating synthetic divisions on a Taylor array at q0.  Even steps divide
// by (z - q0) (a shift), odd steps evaluate at conj(q0) and divide by
// (z - conj q0) = (t - delta) with delta = conj(q0) - q0.
inline std::vector<Quatd> coeffs_from_taylor_array(std::vector<Quatd> d,
                                                   const Quatd& delta, int j_max) {
  std::vector<Quatd> A;
  A.reserve(static_cast<std::size_t>(j_max) + 1);
  for (int m = 0; m <= j_max && !d.empty(); ++m) {
    if (m % 2 == 0) {
      A.push_back(d[0]);
      d.erase(d.begin());  // divide by t
    } else {
      Quatd v{};  // value at t = delta
      for (std::size_t n = d.size(); n-- > 0;) v = delta * v + d[n];
      A.push_back(v);
      std::vector<Quatd> e(d.size() - 1);
      Quatd carry{};  // e_{n-1} = d_n + delta e_n, descending
      for (std::size_t n = d.size(); n-- > 1;) {
        carry = d[n] + delta * carry;
        e[n - 1] = carry;
      }
      d = std::move(e);
    }
  }
  A.resize(static_cast<std::size_t>(j_max) + 1);
  return A;
}

}  // namespace detail

// Coefficients A_0..A_{j_max} of the spherical expansion of a regular f.
inline SphericalExpansion spherical_coeffs(const EvalFn& f, const Sphere2& sphere,
                                           const Quatd& q0, int j_max,
                                           const SphericalOpts& opts = {}) {
  detail::check_on_sphere(sphere, q0);
  const ImaginaryUnit I = detail::reference_unit(sphere, q0);
  const Quatd base = sphere.is_real_point() ? Quatd(sphere.x0) : q0;
  const Quatd qbar = conj(base);
  const double y0 = sphere.y0;
  const double R = opts.shell_radius;

  const double slice_r =
      opts.slice_radius > 0 ? opts.slice_radius : std::sqrt(y0 * y0 + R * R) - y0;

  bool wide = y0 < 1e-12;
  if (opts.path == SphericalOpts::Path::wide) wide = true;
  else if (opts.path == SphericalOpts::Path::narrow) wide = false;
  else if (!wide) wide = 0.8 * slice_r >= 8.0 * y0;

  SphericalExpansion out;
  out.sphere = sphere;
  out.q0 = base;
  out.k = 0;

  if (wide) {
    const int W = j_max + 24;
    // The truncated divisions converge because slice_r clears the center gap
    // 2 y0; the sample circle itself only trades DFT rounding (grows with
    // max |f| on the circle) against aliasing, so keep it moderate.
    const double r = opts.circle_radius > 0
                         ? opts.circle_radius
                         : std::min(0.8 * slice_r, std::max(2.0 * y0, 1.0));
    auto d = detail::slice_taylor_array(f, I, base, r, opts.samples, W);
    out.A = detail::coeffs_from_taylor_array(std::move(d), qbar - base, j_max);
  } else {
    // per-coefficient circle means of the pointwise remainder recurrence
    const double lobe = std::sqrt(y0 * y0 + 0.8 * R * R) - y0;
    const double r =
        opts.circle_radius > 0 ? opts.circle_radius : std::min(0.75 * y0, lobe);
    if (!(r > 0)) throw std::invalid_argument("spherical_coeffs: empty sample circle");
    out.A.resize(static_cast<std::size_t>(j_max) + 1);
    const int M = opts.samples;
    for (int m = 0; m <= j_max; ++m) {
      const Quatd c = m % 2 == 0 ? base : qbar;
      Quatd mean{};
      for (int t = 0; t < M; ++t) {
        const double th = 2 * M_PI * t / M;
        const Quatd z = c + r * std::cos(th) + (r * std::sin(th)) * I;
        Quatd v = f(z);
        for (int l = 0; l < m; ++l) {
          const Quatd cl = l % 2 == 0 ? base : qbar;
          v = inverse(z - cl) * (v - out.A[static_cast<std::size_t>(l)]);
        }
        mean += v;
      }
      mean = mean / double(M);
      if (!std::isfinite(abs(mean)))
        throw std::domain_error("not regular here: remainder means diverge");
      out.A[static_cast<std::size_t>(m)] = mean;
    }
  }

  // empirical certification on the shell
  out.radius = R;
  if (opts.certify_samples > 0) {
    std::mt19937_64 rng(opts.seed);
    std::uniform_real_distribution<double> u01(0.05, 0.95), ang(0, 2 * M_PI);
    const double lobe = std::sqrt(y0 * y0 + R * R) - y0;
    double worst = 0;
    std::uniform_real_distribution<double> comp(-1, 1);
    for (int s = 0; s < opts.certify_samples; ++s) {
      const double rho = lobe * u01(rng), th = ang(rng);
      const Quatd z = base + rho * std::cos(th) + (rho * std::sin(th)) * I;
      const auto dz = decompose(z);
      Quatd cand{0, comp(rng), comp(rng), comp(rng)};
      while (im_abs(cand) < 0.1) cand = Quatd{0, comp(rng), comp(rng), comp(rng)};
      const Quatd uq = ImaginaryUnit(cand).quat();
      const Quatd q = dz.unit ? Quatd(dz.x) + dz.y * uq : Quatd(dz.x);
      const Quatd fv = f(q);
      const double scale = std::max(1.0, abs(fv));
      worst = std::max(worst, abs(fv - out.value(q)) / scale);
    }
    out.residual = worst;
  }
  return out;
}

// Boundedness probe for W(q)^k f(q) approaching the sphere: radial paths on
// several slices; bounded means no growth beyond 2x over the last decade.
// The approach runs deep: a large smooth background (made of correction
// polynomials, say) masks t^{-2} growth until the principal part overtakes
// it, which can take many decades.
inline bool bounded_at_sphere(const EvalFn& f, const Sphere2& sphere, int k,
                              double start_dist = 0.25) {
  const ImaginaryUnit units[4] = {
      ImaginaryUnit::i(), ImaginaryUnit::j(), ImaginaryUnit::k(),
      ImaginaryUnit(Quatd{0, 1, 1, 1})};
  const double t_min = start_dist * 1e-9;
  double last = 0, prev = 0;
  for (const auto& J : units) {
    const Quatd c = sphere.is_real_point() ? Quatd(sphere.x0) : sphere.point(J);
    for (int a = 0; a < 8; ++a) {
      const double th = 2 * M_PI * a / 8 + 0.1;
      for (double t = start_dist; t >= t_min; t *= 0.5) {
        const Quatd z = c + t * std::cos(th) + (t * std::sin(th)) * J;
        Quatd wv = Quatd::one();
        const Quatd w = sphere.quadratic_at(z);
        for (int p = 0; p < k; ++p) wv = wv * w;
        const double g = abs(wv * f(z));
        if (!std::isfinite(g)) return false;
        if (t >= 10 * t_min) prev = std::max(prev, g);
        if (t < 10 * t_min) last = std::max(last, g);
      }
    }
  }
  return last <= 2.0 * std::max(prev, 1e-300);
}

// Spherical Laurent coefficients of a semiregular f with pole order <= 2k:
// expand g = W^k f and reinterpret indices starting at W^{-k}.
inline SphericalExpansion spherical_laurent(const EvalFn& f, const Sphere2& sphere,
                                            const Quatd& q0, int k, int j_max,
                                            const SphericalOpts& opts = {}) {
  if (k < 0) throw std::invalid_argument("spherical_laurent: negative k");
  if (k > 0 && !bounded_at_sphere(f, sphere, k, std::max(0.05, 0.5 * opts.shell_radius)))
    throw std::domain_error("spherical_laurent: k too small, W^k f still unbounded at the sphere");
  EvalFn g = [f, sphere, k](const Quatd& q) {
    Quatd wv = Quatd::one();
    const Quatd w = sphere.quadratic_at(q);
    for (int p = 0; p < k; ++p) wv = wv * w;
    return wv * f(q);
  };
  SphericalExpansion e = spherical_coeffs(g, sphere, q0, j_max, opts);
  e.k = k;
  return e;
}

struct PrincipalOpts {
  int k_max = 6;
  SphericalOpts expansion{};
};

// Minimal k with W^k f bounded at the sphere, then the negative-index block
// of the spherical Laurent series repacked in descending-power pairs.
inline PrincipalPartd extract_principal_part(const EvalFn& f, const Sphere2& sphere,
                                             int k_max, const SphericalOpts& opts = {}) {
  int k = -1;
  for (int kk = 0; kk <= k_max; ++kk) {
    if (bounded_at_sphere(f, sphere, kk, std::max(0.05, 0.5 * opts.shell_radius))) {
      k = kk;
      break;
    }
  }
  if (k < 0)
    throw std::domain_error("extract_principal_part: order exceeds bound k_max");
  const ImaginaryUnit I = ImaginaryUnit::i();
  const Quatd q0 = sphere.is_real_point() ? Quatd(sphere.x0) : sphere.point(I);
  if (k == 0)
    return PrincipalPartd(sphere.x0, sphere.y0, q0, {});
  const SphericalExpansion e = spherical_laurent(f, sphere, q0, k, 2 * k + 1, opts);
  std::vector<std::pair<Quatd, Quatd>> pairs(static_cast<std::size_t>(k));
  for (int n = 1; n <= k; ++n) {
    const int j = k - n;
    pairs[static_cast<std::size_t>(n - 1)] = {e.A[static_cast<std::size_t>(2 * j)],
                                              e.A[static_cast<std::size_t>(2 * j + 1)]};
  }
  return PrincipalPartd(sphere.x0, sphere.y0, e.q0, std::move(pairs));
}

// f(x + yJ) from the two values on one slice: the restriction of a regular
// function to a sphere is affine in the unit.
inline Quatd representation_extend(const Quatd& f_plus, const Quatd& f_minus,
                                   const ImaginaryUnit& I, const ImaginaryUnit& J) {
  return 0.5 * (f_plus + f_minus) + 0.5 * (J.quat() * I.quat()) * (f_minus - f_plus);
}

// --- slice Laurent coefficients by circle quadrature ---

struct SliceSamples {
  ImaginaryUnit I = ImaginaryUnit::i();
  Quatd p;
  double r = 0;
  std::vector<Quatd> values;  // f(p + r e^{I theta_m}), theta_m = 2 pi m / M

  static SliceSamples collect(const EvalFn& f, const ImaginaryUnit& I, const Quatd& p,
                              double r, int M) {
    if (M < 2 || (M & (M - 1)) != 0)
      throw std::invalid_argument("sample count must be a power of two");
    SliceSamples s;
    s.I = I;
    s.p = p;
    s.r = r;
    s.values.resize(static_cast<std::size_t>(M));
    for (int m = 0; m < M; ++m) {
      const double th = 2 * M_PI * m / M;
      s.values[static_cast<std::size_t>(m)] =
          f(p + r * std::cos(th) + (r * std::sin(th)) * I);
    }
    return s;
  }
};

struct LaurentCoeffs {
  Quatd p;
  int n_min = 0;
  std::vector<Quatd> a;  // a[n - n_min]

  Quatd coeff(int n) const {
    const int idx = n - n_min;
    if (idx < 0 || idx >= static_cast<int>(a.size())) return Quatd{};
    return a[static_cast<std::size_t>(idx)];
  }
};

// a_n = r^{-n} mean_m e^{-I n theta_m} f_m, with the unit factors acting on
// the left; aliasing decays geometrically in the sample count.
inline LaurentCoeffs slice_laurent_coeffs(const SliceSamples& s, int n_min, int n_max) {
  if (n_min > n_max) throw std::invalid_argument("empty coefficient range");
  LaurentCoeffs out;
  out.p = s.p;
  out.n_min = n_min;
  const int M = static_cast<int>(s.values.size());
  out.a.reserve(static_cast<std::size_t>(n_max - n_min) + 1);
  for (int n = n_min; n <= n_max; ++n) {
    Quatd acc{};
    for (int m = 0; m < M; ++m) {
      const double th = 2 * M_PI * m / M;
      const Quatd rot = Quatd(std::cos(n * th)) - std::sin(n * th) * s.I;
      acc += rot * s.values[static_cast<std::size_t>(m)];
    }
    out.a.push_back(acc / (M * std::pow(s.r, n)));
  }
  return out;
}

}  // namespace sreg
