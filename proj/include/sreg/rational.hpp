#pragma once

// Semiregular rational functions N(q) * d(q)^{-1} with a real-coefficient
// denominator d.  Real-coefficient polynomials are central for the *-product
// and slice preserving, so d(q) lies on the plane of q and the pointwise
// value is d(q)^{-1} N(q); the calculus stays exact, associative and order
// insensitive.  Denominators are kept in factored form -- (q - r)^k and
// ((q - x0)^2 + y0^2)^k powers -- and arithmetic preserves that form, so no
// polynomial rootfinding is ever needed.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "sreg/geometry.hpp"
#include "sreg/quaternion.hpp"
#include "sreg/star_poly.hpp"

namespace sreg {

template <class T>
T scalar_abs(const T& v) {
  using std::abs;
  return abs(v);
}

// --- real-coefficient polynomials in factored form ---

template <class T>
struct RealFactor {
  enum class Kind { real_root, sphere };
  Kind kind = Kind::real_root;
  T a{};  // root r, or sphere center x0
  T b{};  // sphere radius y0 > 0 (unused for real roots)
  int power = 0;

  static RealFactor root(T r, int p) { return {Kind::real_root, std::move(r), T{}, p}; }
  static RealFactor sphere(T x0, T y0, int p) {
    if (y0 < T(0)) y0 = -y0;
    if (y0 == T(0)) return root(std::move(x0), 2 * p);  // (q-x0)^2 + 0
    return {Kind::sphere, std::move(x0), std::move(y0), p};
  }

  int degree() const { return (kind == Kind::real_root ? 1 : 2) * power; }

  // Monic expansion of a single copy of the factor.
  std::vector<T> base_poly() const {
    if (kind == Kind::real_root) return {-a, T(1)};
    return {a * a + b * b, T(-2) * a, T(1)};
  }

  friend bool operator==(const RealFactor& f, const RealFactor& g) {
    return f.kind == g.kind && f.a == g.a && f.b == g.b && f.power == g.power;
  }
};

namespace detail {

template <class T>
std::vector<T> conv_real(const std::vector<T>& u, const std::vector<T>& v) {
  if (u.empty() || v.empty()) return {};
  std::vector<T> out(u.size() + v.size() - 1, T(0));
  for (std::size_t i = 0; i < u.size(); ++i)
    for (std::size_t j = 0; j < v.size(); ++j) out[i + j] += u[i] * v[j];
  return out;
}

template <class T>
bool factor_key_less(const RealFactor<T>& f, const RealFactor<T>& g) {
  if (f.kind != g.kind) return f.kind < g.kind;
  if (f.a != g.a) return f.a < g.a;
  return f.b < g.b;
}

template <class T>
bool factor_key_equal(const RealFactor<T>& f, const RealFactor<T>& g) {
  return f.kind == g.kind && f.a == g.a && f.b == g.b;
}

}  // namespace detail

template <class T>
class FactoredRealPoly {
 public:
  FactoredRealPoly() = default;
  explicit FactoredRealPoly(std::vector<RealFactor<T>> factors)
      : factors_(std::move(factors)) {
    normalize();
  }

  static FactoredRealPoly one() { return FactoredRealPoly{}; }

  bool is_one() const { return factors_.empty(); }
  const std::vector<RealFactor<T>>& factors() const { return factors_; }
  std::vector<RealFactor<T>>& factors() { return factors_; }

  int degree() const {
    int d = 0;
    for (const auto& f : factors_) d += f.degree();
    return d;
  }

  std::vector<T> expand() const {
    std::vector<T> out{T(1)};
    for (const auto& f : factors_) {
      const auto base = f.base_poly();
      for (int p = 0; p < f.power; ++p) out = detail::conv_real(out, base);
    }
    return out;
  }

  // Product over factors; all values lie on L_{I_q} and commute.
  Quat<T> eval(const Quat<T>& q) const {
    Quat<T> v = Quat<T>::one();
    for (const auto& f : factors_) {
      Quat<T> base;
      if (f.kind == RealFactor<T>::Kind::real_root) {
        base = q - Quat<T>(f.a);
      } else {
        const Quat<T> d = q - Quat<T>(f.a);
        base = d * d + Quat<T>(f.b * f.b);
      }
      for (int p = 0; p < f.power; ++p) v = v * base;
    }
    return v;
  }

  friend FactoredRealPoly operator*(const FactoredRealPoly& f, const FactoredRealPoly& g) {
    std::vector<RealFactor<T>> all = f.factors_;
    all.insert(all.end(), g.factors_.begin(), g.factors_.end());
    return FactoredRealPoly(std::move(all));
  }

  static FactoredRealPoly lcm(const FactoredRealPoly& f, const FactoredRealPoly& g) {
    return merged(f, g, [](int pf, int pg) { return std::max(pf, pg); });
  }

  // lcm(f, g) / f, used to bring sums over a common denominator.
  static FactoredRealPoly complement(const FactoredRealPoly& f, const FactoredRealPoly& l) {
    return merged(l, f, [](int pl, int pf) { return pl - pf; });
  }

  friend bool operator==(const FactoredRealPoly& f, const FactoredRealPoly& g) {
    return f.factors_ == g.factors_;
  }

 private:
  template <class Combine>
  static FactoredRealPoly merged(const FactoredRealPoly& f, const FactoredRealPoly& g,
                                 Combine combine) {
    std::vector<RealFactor<T>> out;
    std::size_t i = 0, j = 0;
    while (i < f.factors_.size() || j < g.factors_.size()) {
      if (j == g.factors_.size() ||
          (i < f.factors_.size() &&
           detail::factor_key_less(f.factors_[i], g.factors_[j]))) {
        auto fac = f.factors_[i++];
        fac.power = combine(fac.power, 0);
        out.push_back(fac);
      } else if (i == f.factors_.size() ||
                 detail::factor_key_less(g.factors_[j], f.factors_[i])) {
        auto fac = g.factors_[j++];
        fac.power = combine(0, fac.power);
        out.push_back(fac);
      } else {
        auto fac = f.factors_[i++];
        fac.power = combine(fac.power, g.factors_[j++].power);
        out.push_back(fac);
      }
    }
    return FactoredRealPoly(std::move(out));
  }

  void normalize() {
    for (auto& f : factors_) {
      if (f.b < T(0)) f.b = -f.b;
      if (f.kind == RealFactor<T>::Kind::sphere && f.b == T(0)) {
        f.kind = RealFactor<T>::Kind::real_root;
        f.power *= 2;
      }
    }
    std::sort(factors_.begin(), factors_.end(), detail::factor_key_less<T>);
    std::vector<RealFactor<T>> merged_out;
    for (auto& f : factors_) {
      if (!merged_out.empty() && detail::factor_key_equal(merged_out.back(), f)) {
        merged_out.back().power += f.power;
      } else {
        merged_out.push_back(f);
      }
    }
    for (const auto& f : merged_out)
      if (f.power < 0) throw std::invalid_argument("negative factor power");
    std::erase_if(merged_out, [](const RealFactor<T>& f) { return f.power == 0; });
    factors_ = std::move(merged_out);
  }

  std::vector<RealFactor<T>> factors_;
};

// Division of a star polynomial (center 0) by a monic real polynomial.
// Real coefficients commute with everything, so plain synthetic division.
template <class T>
std::pair<StarPoly<T>, std::vector<Quat<T>>> divide_monic_real(
    const StarPoly<T>& f, const std::vector<T>& d) {
  if (d.empty() || d.back() != T(1))
    throw std::invalid_argument("divisor must be monic");
  const std::size_t m = d.size() - 1;
  std::vector<Quat<T>> r(f.coeffs());
  if (m == 0) return {StarPoly<T>(std::move(r), Quat<T>{}, r.size() + 1), {}};
  if (r.size() <= m) return {StarPoly<T>{}, std::move(r)};
  std::vector<Quat<T>> quot(r.size() - m);
  for (std::size_t i = r.size(); i-- > m;) {
    const Quat<T> c = r[i];
    quot[i - m] = c;
    for (std::size_t j = 0; j < m; ++j) r[i - m + j] -= c * d[j];
  }
  r.resize(m);
  const std::size_t cap = quot.size() + 1;
  return {StarPoly<T>(std::move(quot), Quat<T>{}, cap), std::move(r)};
}

template <class T>
StarPoly<T> star_mul_real(const StarPoly<T>& f, const std::vector<T>& d) {
  if (f.is_zero() || d.empty()) return StarPoly<T>{};
  std::vector<Quat<T>> out(f.coeffs().size() + d.size() - 1);
  for (std::size_t i = 0; i < f.coeffs().size(); ++i)
    for (std::size_t j = 0; j < d.size(); ++j) out[i + j] += f.coeffs()[i] * d[j];
  const std::size_t cap = out.size() + 1;
  return StarPoly<T>(std::move(out), Quat<T>{}, cap);
}

template <class T>
class SemiRational {
 public:
  SemiRational() = default;  // zero function

  SemiRational(StarPoly<T> num, FactoredRealPoly<T> den = FactoredRealPoly<T>::one())
      : num_(to_center_zero(num)), den_(std::move(den)) {
    canonicalize();
  }

  const StarPoly<T>& num() const { return num_; }
  const FactoredRealPoly<T>& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }

  friend bool operator==(const SemiRational& f, const SemiRational& g) {
    return f.num_ == g.num_ && f.den_ == g.den_;
  }

 private:
  void canonicalize() {
    if (num_.is_zero()) {
      den_ = FactoredRealPoly<T>::one();
      return;
    }
    double scale = 0;
    for (const auto& c : num_.coeffs())
      scale = std::max(scale, static_cast<double>(scalar_abs(c.w)) +
                                  static_cast<double>(scalar_abs(c.x)) +
                                  static_cast<double>(scalar_abs(c.y)) +
                                  static_cast<double>(scalar_abs(c.z)));
    for (auto& fac : den_.factors()) {
      const auto base = fac.base_poly();
      while (fac.power > 0) {
        auto [quot, rem] = divide_monic_real(num_, base);
        if (!remainder_negligible(rem, scale)) break;
        num_ = std::move(quot);
        --fac.power;
      }
    }
    std::erase_if(den_.factors(), [](const RealFactor<T>& f) { return f.power == 0; });
  }

  static bool remainder_negligible(const std::vector<Quat<T>>& rem, double scale) {
    for (const auto& c : rem) {
      if constexpr (std::is_floating_point_v<T>) {
        const double m = std::fabs(c.w) + std::fabs(c.x) + std::fabs(c.y) + std::fabs(c.z);
        if (m > 1e-12 * (scale + 1.0)) return false;
      } else {
        (void)scale;
        if (!(c == Quat<T>{})) return false;
      }
    }
    return true;
  }

  StarPoly<T> num_;
  FactoredRealPoly<T> den_;
};

using SemiRationald = SemiRational<double>;

template <class T>
SemiRational<T> operator+(const SemiRational<T>& f, const SemiRational<T>& g) {
  if (f.is_zero()) return g;
  if (g.is_zero()) return f;
  const auto l = FactoredRealPoly<T>::lcm(f.den(), g.den());
  const auto cf = FactoredRealPoly<T>::complement(f.den(), l).expand();
  const auto cg = FactoredRealPoly<T>::complement(g.den(), l).expand();
  return SemiRational<T>(star_mul_real(f.num(), cf) + star_mul_real(g.num(), cg), l);
}

template <class T>
SemiRational<T> operator-(const SemiRational<T>& f) {
  return SemiRational<T>(-f.num(), f.den());
}

template <class T>
SemiRational<T> operator-(const SemiRational<T>& f, const SemiRational<T>& g) {
  return f + (-g);
}

template <class T>
SemiRational<T> operator*(const SemiRational<T>& f, const SemiRational<T>& g) {
  const std::size_t cap = f.num().coeffs().size() + g.num().coeffs().size() + 1;
  return SemiRational<T>(star_mul(f.num(), g.num(), cap), f.den() * g.den());
}

// Pointwise value d(q)^{-1} N(q); the inverse acts on the left, matching the
// factored forms ((q-x0)^2+y0^2)^{-k} g(q).
template <class T>
Quat<T> value(const SemiRational<T>& f, const Quat<T>& q) {
  const Quat<T> dv = f.den().eval(q);
  if (norm2(dv) == T(0)) throw std::domain_error("value at a zero of the denominator");
  return inverse(dv) * eval(f.num(), q);
}

// The pole sphere hit by q, if any (within tol on center/radius).
template <class T>
std::optional<Sphere2> pole_sphere_at(const SemiRational<T>& f, const Quatd& q,
                                      double tol = 1e-12) {
  const auto d = decompose(q);
  for (const auto& fac : f.den().factors()) {
    const double a = static_cast<double>(fac.a);
    const double b = fac.kind == RealFactor<T>::Kind::real_root
                         ? 0.0
                         : static_cast<double>(fac.b);
    if (std::fabs(d.x - a) <= tol && std::fabs(d.y - b) <= tol) return Sphere2(a, b);
  }
  return std::nullopt;
}

// --- principal parts ---

// P(q) = sum_{n=1}^{k} ((q-x0)^2+y0^2)^{-n} [A_{2n} + (q-q0) A_{2n+1}]
// with q0 = x0 + y0 I_ref a stored reference point on the sphere.
template <class T>
struct PrincipalPart {
  T x0{}, y0{};
  Quat<T> q0;
  std::vector<std::pair<Quat<T>, Quat<T>>> pairs;  // (A_{2n}, A_{2n+1}), n = 1..k

  PrincipalPart() = default;
  PrincipalPart(T x0_, T y0_, Quat<T> q0_,
                std::vector<std::pair<Quat<T>, Quat<T>>> pairs_)
      : x0(std::move(x0_)), y0(std::move(y0_)), q0(std::move(q0_)),
        pairs(std::move(pairs_)) {
    if (y0 < T(0)) y0 = -y0;
    bool on_sphere;
    if constexpr (std::is_floating_point_v<T>) {
      on_sphere = std::fabs(q0.w - x0) <= 1e-9 * (1.0 + std::fabs(x0)) &&
                  std::fabs(im_abs(to_quatd(q0)) - static_cast<double>(y0)) <=
                      1e-9 * (1.0 + static_cast<double>(y0));
    } else {
      on_sphere = q0.w == x0 && im_norm2(q0) == y0 * y0;
    }
    if (!on_sphere)
      throw std::invalid_argument("principal part: q0 does not lie on the sphere");
    while (!pairs.empty() && pairs.back().first == Quat<T>{} &&
           pairs.back().second == Quat<T>{})
      pairs.pop_back();
  }

  int order() const { return static_cast<int>(pairs.size()); }  // k; spherical order 2k
  bool is_zero() const { return pairs.empty(); }

  Sphere2 sphere() const {
    return Sphere2(static_cast<double>(x0), static_cast<double>(y0));
  }
};

using PrincipalPartd = PrincipalPart<double>;

template <class T>
SemiRational<T> principal_to_rational(const PrincipalPart<T>& P) {
  if (P.is_zero()) return SemiRational<T>{};
  const int k = P.order();
  const std::vector<T> w{P.x0 * P.x0 + P.y0 * P.y0, T(-2) * P.x0, T(1)};
  StarPoly<T> num;
  std::vector<T> wpow{T(1)};  // W^{k-n}, built from n = k downwards
  for (int n = k; n >= 1; --n) {
    const auto& [a_even, a_odd] = P.pairs[static_cast<std::size_t>(n - 1)];
    StarPoly<T> bracket =
        StarPoly<T>::constant(a_even) + StarPoly<T>::linear(P.q0) * a_odd;
    num = num + star_mul_real(bracket, wpow);
    if (n > 1) wpow = detail::conv_real(wpow, w);
  }
  auto den = FactoredRealPoly<T>(
      {RealFactor<T>::sphere(P.x0, P.y0, k)});
  return SemiRational<T>(std::move(num), std::move(den));
}

namespace detail {
template <class T>
bool scalar_close(const T& a, const T& b) {
  if constexpr (std::is_floating_point_v<T>) {
    return std::fabs(a - b) <= 1e-12 * (1.0 + std::fabs(a) + std::fabs(b));
  } else {
    return a == b;
  }
}
}  // namespace detail

// f = ((q-x0)^2+y0^2)^{-k} g with g's denominator coprime to the sphere
// factor; k = 0 when the sphere is not a pole.  For a real point the factor
// (q-x0)^p counts as k = ceil(p/2) sphere powers.
template <class T>
std::pair<int, SemiRational<T>> pole_extract(const SemiRational<T>& f, const T& x0,
                                             const T& y0) {
  int k = 0;
  for (const auto& fac : f.den().factors()) {
    const bool real_case = y0 == T(0) && fac.kind == RealFactor<T>::Kind::real_root &&
                           detail::scalar_close(fac.a, x0);
    const bool sphere_case = fac.kind == RealFactor<T>::Kind::sphere &&
                             detail::scalar_close(fac.a, x0) &&
                             detail::scalar_close(fac.b, y0);
    if (real_case) k = (fac.power + 1) / 2;
    if (sphere_case) k = fac.power;
  }
  if (k == 0) return {0, f};
  std::vector<T> wk{T(1)};
  const std::vector<T> w{x0 * x0 + y0 * y0, T(-2) * x0, T(1)};
  for (int p = 0; p < k; ++p) wk = detail::conv_real(wk, w);
  SemiRational<T> g(star_mul_real(f.num(), wk), f.den());
  return {k, std::move(g)};
}

inline std::pair<int, SemiRationald> pole_extract(const SemiRationald& f,
                                                  const Sphere2& s) {
  return pole_extract(f, s.x0, s.y0);
}

// Heuristic: the single sphere point where the spherical order can drop, read
// off as the zero of A_{2k} + (q - q0) A_{2k+1} when that zero lies on the
// sphere.
inline std::optional<Quatd> exceptional_point(const PrincipalPartd& P) {
  if (P.is_zero()) return std::nullopt;
  const auto& [a_top, b_top] = P.pairs.back();
  if (norm2(b_top) == 0.0) return std::nullopt;
  const Quatd q = P.q0 - a_top * inverse(b_top);
  if (P.sphere().contains(q, 1e-9 * (1.0 + abs(q)))) return q;
  return std::nullopt;
}

// --- certified Taylor truncation ---

// Taylor polynomial of f at 0 on the closed ball |q| <= rho, plus a certified
// sup-norm tail bound.  Coefficients beyond the truncation are majorized two
// ways: exactly-summed |a_m| rho^m up to a working order, then a Cauchy
// estimate sup_{|z|=mu} |N(z)/d(z)| mu^{-m} with mu optimized between rho and
// the nearest factor modulus.  stop_slack lets callers that only compare the
// bound against a threshold skip refining far below it.
inline TruncatedSeries taylor_truncate(const SemiRationald& f, int order, double rho,
                                       double stop_slack = 0.0) {
  if (!(rho > 0)) throw std::invalid_argument("taylor_truncate: rho must be positive");
  if (order < 0) throw std::invalid_argument("taylor_truncate: negative order");

  double smin = std::numeric_limits<double>::infinity();
  for (const auto& fac : f.den().factors()) {
    const double s = fac.kind == RealFactor<double>::Kind::real_root
                         ? std::fabs(fac.a)
                         : std::hypot(fac.a, fac.b);
    smin = std::min(smin, s);
  }
  if (smin <= rho)
    throw std::domain_error("taylor_truncate: a pole sphere meets the closed ball");

  // All series arithmetic runs in the scaled variable u = q / rho: the scaled
  // coefficients a_n rho^n stay representable where raw ones under/overflow.
  std::vector<Quatd> nc(f.num().coeffs());
  {
    double rp = 1;
    for (auto& c : nc) {
      c = c * rp;
      rp *= rho;
    }
  }
  std::vector<double> d = f.den().expand();
  {
    double rp = 1;
    for (auto& c : d) {
      c *= rp;
      rp *= rho;
    }
  }
  const int dd = static_cast<int>(d.size()) - 1;

  auto coeffs_to = [&](int M) {
    // reciprocal series e of d, then a = e (*) N; e is real so order is free
    std::vector<double> e(static_cast<std::size_t>(M) + 1, 0.0);
    e[0] = 1.0 / d[0];
    for (int n = 1; n <= M; ++n) {
      double s = 0;
      for (int m = 1; m <= std::min(n, dd); ++m) s += d[static_cast<std::size_t>(m)] * e[static_cast<std::size_t>(n - m)];
      e[static_cast<std::size_t>(n)] = -s / d[0];
    }
    std::vector<Quatd> a(static_cast<std::size_t>(M) + 1);
    for (int n = 0; n <= M; ++n) {
      Quatd s{};
      for (int k = 0; k <= std::min<int>(n, static_cast<int>(nc.size()) - 1); ++k)
        s += nc[static_cast<std::size_t>(k)] * e[static_cast<std::size_t>(n - k)];
      a[static_cast<std::size_t>(n)] = s;
    }
    return a;
  };

  auto cauchy_remainder = [&](int M) {
    if (f.den().is_one()) return 0.0;  // polynomial: no tail beyond its degree
    double best = std::numeric_limits<double>::infinity();
    const int grid = 24;
    for (int t = 1; t <= grid; ++t) {
      const double mu = rho + (smin - rho) * t / (grid + 1.0);
      double nb = 0, mupow = 1;
      for (const auto& c : f.num().coeffs()) {
        nb += abs(c) * mupow;
        mupow *= mu;
      }
      double dmin = 1;
      for (const auto& fac : f.den().factors()) {
        const double s = fac.kind == RealFactor<double>::Kind::real_root
                             ? std::fabs(fac.a)
                             : std::hypot(fac.a, fac.b);
        const int mult = fac.kind == RealFactor<double>::Kind::real_root
                             ? fac.power
                             : 2 * fac.power;
        for (int p = 0; p < mult; ++p) dmin *= (s - mu);
      }
      const double ratio = rho / mu;
      const double rem = nb / dmin * std::pow(ratio, M + 1) / (1.0 - ratio);
      best = std::min(best, rem);
    }
    return best;
  };

  const bool poly = f.den().is_one();
  int M = poly ? std::max(order, f.num().degree())
               : std::max({2 * order, order + 32, 64});
  std::vector<Quatd> a;
  double partial = 0, remainder = 0;
  for (;;) {
    a = coeffs_to(M);
    partial = 0;
    for (int m = order + 1; m <= M; ++m) partial += abs(a[static_cast<std::size_t>(m)]);
    remainder = poly ? 0.0 : cauchy_remainder(M);
    if (poly || remainder <= std::max(1e-3 * partial, 0.1 * stop_slack) + 1e-300 ||
        M >= (1 << 21))
      break;
    M *= 2;
  }

  a.resize(static_cast<std::size_t>(order) + 1);
  const std::size_t cap = a.size() + 1;
  return TruncatedSeries{StarPolyd(std::move(a), Quatd{}, cap), rho,
                         partial + remainder};
}

}  // namespace sreg
