#pragma once

// Polynomials with right quaternion coefficients under the *-product.
//
// An element is stored as coefficients a_0..a_N against the centered basis
// (q - c)^{*n}, i.e. f(q) = sum_n (q - c)^{*n} a_n, with powers on the left
// and coefficients on the right.  The *-product multiplies coefficient
// sequences by convolution; it agrees with the pointwise product only on the
// plane of the center, which is why evaluation always goes through the
// monomial (center 0) basis first -- an exact change of basis.

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

#include "sreg/quaternion.hpp"

namespace sreg {

inline constexpr std::size_t kDefaultDegreeCap = 512;

template <class T>
class StarPoly {
 public:
  StarPoly() = default;

  explicit StarPoly(std::vector<Quat<T>> coeffs, Quat<T> center = Quat<T>{},
                    std::size_t degree_cap = kDefaultDegreeCap)
      : center_(std::move(center)), coeffs_(std::move(coeffs)) {
    normalize();
    if (coeffs_.size() > degree_cap + 1)
      throw std::length_error("star polynomial exceeds degree cap");
  }

  static StarPoly constant(Quat<T> a) { return StarPoly({std::move(a)}); }
  // q - q0 in the monomial basis.
  static StarPoly linear(const Quat<T>& q0) {
    return StarPoly({-q0, Quat<T>::one()});
  }

  bool is_zero() const { return coeffs_.empty(); }
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  const Quat<T>& center() const { return center_; }
  const std::vector<Quat<T>>& coeffs() const { return coeffs_; }
  Quat<T> coeff(std::size_t n) const {
    return n < coeffs_.size() ? coeffs_[n] : Quat<T>{};
  }

  friend bool operator==(const StarPoly& a, const StarPoly& b) {
    return a.center_ == b.center_ && a.coeffs_ == b.coeffs_;
  }

 private:
  void normalize() {
    while (!coeffs_.empty() && coeffs_.back() == Quat<T>{}) coeffs_.pop_back();
  }

  Quat<T> center_{};
  std::vector<Quat<T>> coeffs_;
};

using StarPolyd = StarPoly<double>;

namespace detail {
template <class T>
void require_same_center(const StarPoly<T>& f, const StarPoly<T>& g) {
  if (!(f.center() == g.center()) && !f.is_zero() && !g.is_zero())
    throw std::invalid_argument("star polynomials have different centers; recenter first");
}
}  // namespace detail

template <class T>
StarPoly<T> operator+(const StarPoly<T>& f, const StarPoly<T>& g) {
  detail::require_same_center(f, g);
  std::vector<Quat<T>> c(std::max(f.coeffs().size(), g.coeffs().size()));
  for (std::size_t n = 0; n < c.size(); ++n) c[n] = f.coeff(n) + g.coeff(n);
  const std::size_t cap = c.size() + 1;
  return StarPoly<T>(std::move(c), f.is_zero() ? g.center() : f.center(), cap);
}

template <class T>
StarPoly<T> operator-(const StarPoly<T>& f) {
  std::vector<Quat<T>> c(f.coeffs());
  for (auto& a : c) a = -a;
  return StarPoly<T>(std::move(c), f.center());
}

template <class T>
StarPoly<T> operator-(const StarPoly<T>& f, const StarPoly<T>& g) {
  return f + (-g);
}

// Right scalar action a_n -> a_n * s.
template <class T>
StarPoly<T> operator*(const StarPoly<T>& f, const Quat<T>& s) {
  std::vector<Quat<T>> c(f.coeffs());
  for (auto& a : c) a = a * s;
  const std::size_t cap = c.size() + 1;
  return StarPoly<T>(std::move(c), f.center(), cap);
}

// Coefficient convolution c_n = sum_k a_k b_{n-k}.
template <class T>
StarPoly<T> star_mul(const StarPoly<T>& f, const StarPoly<T>& g,
                     std::size_t degree_cap = kDefaultDegreeCap) {
  detail::require_same_center(f, g);
  if (f.is_zero() || g.is_zero()) return StarPoly<T>{};
  std::vector<Quat<T>> c(f.coeffs().size() + g.coeffs().size() - 1);
  for (std::size_t i = 0; i < f.coeffs().size(); ++i)
    for (std::size_t j = 0; j < g.coeffs().size(); ++j)
      c[i + j] += f.coeffs()[i] * g.coeffs()[j];
  return StarPoly<T>(std::move(c), f.center(), degree_cap);
}

template <class T>
StarPoly<T> operator*(const StarPoly<T>& f, const StarPoly<T>& g) {
  return star_mul(f, g);
}

// (q - q0)^{*n}, expanded in the monomial basis.
template <class T>
StarPoly<T> star_pow(const Quat<T>& q0, std::size_t n,
                     std::size_t degree_cap = kDefaultDegreeCap) {
  if (n > degree_cap) throw std::length_error("star power exceeds degree cap");
  StarPoly<T> acc = StarPoly<T>::constant(Quat<T>::one());
  const StarPoly<T> lin = StarPoly<T>::linear(q0);
  for (std::size_t m = 0; m < n; ++m) acc = star_mul(acc, lin, degree_cap);
  return acc;
}

// Exact change of basis to center 0: Horner in the *-ring.
template <class T>
StarPoly<T> to_center_zero(const StarPoly<T>& f) {
  if (f.center() == Quat<T>{} || f.is_zero())
    return StarPoly<T>(f.coeffs(), Quat<T>{}, f.coeffs().size() + 1);
  const StarPoly<T> lin = StarPoly<T>::linear(f.center());
  StarPoly<T> acc;
  for (int n = f.degree(); n >= 0; --n) {
    acc = star_mul(lin, acc, f.coeffs().size() + 1) +
          StarPoly<T>::constant(f.coeff(static_cast<std::size_t>(n)));
  }
  return acc;
}

// Horner evaluation of sum q^n a_n (coefficients on the right).
template <class T>
Quat<T> eval(const StarPoly<T>& f, const Quat<T>& q) {
  const StarPoly<T> g = to_center_zero(f);
  Quat<T> v{};
  for (int n = g.degree(); n >= 0; --n)
    v = q * v + g.coeff(static_cast<std::size_t>(n));
  return v;
}

// f = remainder + (q - q0) * quotient, the synthetic division realizing the
// remainder operator; remainder equals eval(f, q0).
template <class T>
std::pair<StarPoly<T>, Quat<T>> star_divide_linear(const StarPoly<T>& f,
                                                   const Quat<T>& q0) {
  const StarPoly<T> g = to_center_zero(f);
  if (g.is_zero()) return {StarPoly<T>{}, Quat<T>{}};
  const auto& a = g.coeffs();
  std::vector<Quat<T>> b(a.size() > 1 ? a.size() - 1 : 0);
  Quat<T> carry{};  // b_{n-1} = a_n + q0 b_n, descending
  for (std::size_t n = a.size(); n-- > 1;) {
    carry = a[n] + q0 * carry;
    b[n - 1] = carry;
  }
  const Quat<T> rem = a[0] + (b.empty() ? Quat<T>{} : q0 * b[0]);
  return {StarPoly<T>(std::move(b), Quat<T>{}, a.size()), rem};
}

// Re-express f against the basis (q - new_center)^{*n}.  Off a common slice
// the recentered expansion would represent a different function, so centers
// must share a plane (real centers lie on every plane).
template <class T>
StarPoly<T> recenter(const StarPoly<T>& f, const Quat<T>& new_center) {
  if (!same_slice(to_quatd(f.center()), to_quatd(new_center)))
    throw std::invalid_argument("recenter: centers lie on different planes");
  StarPoly<T> g = to_center_zero(f);
  std::vector<Quat<T>> out;
  out.reserve(g.coeffs().size());
  while (!g.is_zero()) {
    auto [quot, rem] = star_divide_linear(g, new_center);
    out.push_back(rem);
    g = std::move(quot);
  }
  const std::size_t cap = out.size() + 1;
  return StarPoly<T>(std::move(out), new_center, cap);
}

// A Taylor truncation certified on the ball |q| <= radius, with an upper
// bound for the sup-norm tail sum_{n>N} |a_n| radius^n there.  Coefficients
// are stored against the scaled variable u = q / radius: the raw a_n of deep
// truncations with far poles underflow, while a_n radius^n stay
// representable.
struct TruncatedSeries {
  StarPolyd poly;  // coefficient of (q / radius)^n
  double radius = 1;
  double tail_bound = 0;

  bool is_zero() const { return poly.is_zero(); }
  int degree() const { return poly.degree(); }

  Quatd value(const Quatd& q) const {
    const Quatd u = q / radius;
    Quatd v{};
    for (int n = poly.degree(); n >= 0; --n)
      v = u * v + poly.coeff(static_cast<std::size_t>(n));
    return v;
  }

  // a_n = coeff(n) / radius^n; meaningful while it does not underflow.
  Quatd coeff_unscaled(std::size_t n) const {
    return poly.coeff(n) / std::pow(radius, static_cast<double>(n));
  }
};

}  // namespace sreg
