#pragma once

// Quaternion arithmetic over a generic scalar ring.
//
// Quat<double> is the working type everywhere numerics happen; Quat<T> with an
// exact rational scalar (see exact.hpp) backs the zero-tolerance identity
// checks of the rational calculus.  Components are (w, x, y, z) in the basis
// (1, i, j, k).

#include <cmath>
#include <cstdlib>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>

namespace sreg {

template <class T>
struct Quat {
  T w{}, x{}, y{}, z{};

  constexpr Quat() = default;
  constexpr Quat(T w_, T x_, T y_, T z_)
      : w(std::move(w_)), x(std::move(x_)), y(std::move(y_)), z(std::move(z_)) {}
  // Real embedding.
  constexpr Quat(T real) : w(std::move(real)) {}  // NOLINT(google-explicit-constructor)

  friend constexpr bool operator==(const Quat& a, const Quat& b) {
    return a.w == b.w && a.x == b.x && a.y == b.y && a.z == b.z;
  }
  friend constexpr bool operator!=(const Quat& a, const Quat& b) { return !(a == b); }

  constexpr Quat operator-() const { return {-w, -x, -y, -z}; }

  Quat& operator+=(const Quat& o) {
    w += o.w; x += o.x; y += o.y; z += o.z;
    return *this;
  }
  Quat& operator-=(const Quat& o) {
    w -= o.w; x -= o.x; y -= o.y; z -= o.z;
    return *this;
  }

  friend Quat operator+(Quat a, const Quat& b) { return a += b; }
  friend Quat operator-(Quat a, const Quat& b) { return a -= b; }

  // Hamilton product: i*j = k, j*k = i, k*i = j, and the units anticommute.
  friend Quat operator*(const Quat& a, const Quat& b) {
    return {a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
            a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
            a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
            a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w};
  }
  Quat& operator*=(const Quat& o) { return *this = *this * o; }

  friend Quat operator*(const Quat& a, const T& s) { return {a.w * s, a.x * s, a.y * s, a.z * s}; }
  friend Quat operator*(const T& s, const Quat& a) { return {s * a.w, s * a.x, s * a.y, s * a.z}; }
  friend Quat operator/(const Quat& a, const T& s) { return {a.w / s, a.x / s, a.y / s, a.z / s}; }

  static constexpr Quat zero() { return {}; }
  static constexpr Quat one() { return {T(1), T(0), T(0), T(0)}; }
  static constexpr Quat i() { return {T(0), T(1), T(0), T(0)}; }
  static constexpr Quat j() { return {T(0), T(0), T(1), T(0)}; }
  static constexpr Quat k() { return {T(0), T(0), T(0), T(1)}; }
};

using Quatd = Quat<double>;

template <class T>
constexpr Quat<T> conj(const Quat<T>& q) {
  return {q.w, -q.x, -q.y, -q.z};
}

template <class T>
constexpr T norm2(const Quat<T>& q) {
  return q.w * q.w + q.x * q.x + q.y * q.y + q.z * q.z;
}

template <class T>
constexpr T im_norm2(const Quat<T>& q) {
  return q.x * q.x + q.y * q.y + q.z * q.z;
}

inline double abs(const Quatd& q) { return std::sqrt(norm2(q)); }
inline double im_abs(const Quatd& q) { return std::sqrt(im_norm2(q)); }

// q.conj(q) = |q|^2, so the inverse is conj(q)/|q|^2.
template <class T>
Quat<T> inverse(const Quat<T>& q) {
  T n = norm2(q);
  if (n == T(0)) throw std::domain_error("quaternion inverse of zero");
  return conj(q) / n;
}

template <class T>
Quatd to_quatd(const Quat<T>& q) {
  return {static_cast<double>(q.w), static_cast<double>(q.x),
          static_cast<double>(q.y), static_cast<double>(q.z)};
}
inline const Quatd& to_quatd(const Quatd& q) { return q; }

// Components below a relative eps of kRealEps are treated as a real point;
// slice-membership tests use kSliceParallelEps on normalized imaginary parts.
inline constexpr double kRealEps = 1e-14;
inline constexpr double kSliceParallelEps = 1e-12;

inline bool is_real(const Quatd& q) { return im_abs(q) < kRealEps; }

// An imaginary unit I: Re(I) = 0, |I| = 1, so I^2 = -1.  Constructed by
// normalizing the imaginary part of any non-real quaternion.
class ImaginaryUnit {
 public:
  explicit ImaginaryUnit(const Quatd& q) {
    const double n = im_abs(q);
    if (n < kRealEps)
      throw std::invalid_argument("imaginary unit requires a nonzero imaginary part");
    u_ = Quatd{0.0, q.x / n, q.y / n, q.z / n};
  }

  const Quatd& quat() const { return u_; }
  ImaginaryUnit operator-() const { return ImaginaryUnit(-u_); }

  static ImaginaryUnit i() { return ImaginaryUnit(Quatd::i()); }
  static ImaginaryUnit j() { return ImaginaryUnit(Quatd::j()); }
  static ImaginaryUnit k() { return ImaginaryUnit(Quatd::k()); }

  friend bool operator==(const ImaginaryUnit& a, const ImaginaryUnit& b) {
    return a.u_ == b.u_;
  }

 private:
  Quatd u_;
};

inline Quatd operator*(const ImaginaryUnit& I, const Quatd& q) { return I.quat() * q; }
inline Quatd operator*(const Quatd& q, const ImaginaryUnit& I) { return q * I.quat(); }
inline Quatd operator*(double s, const ImaginaryUnit& I) { return s * I.quat(); }
inline Quatd operator+(double s, const ImaginaryUnit& I) { return Quatd(s) + I.quat(); }

struct Decomposition {
  double x = 0;  // Re(q)
  double y = 0;  // |Im(q)|
  std::optional<ImaginaryUnit> unit;  // nullopt for real points
};

// q = x + y I with y = |Im q| >= 0; the unit is absent iff q is real.
inline Decomposition decompose(const Quatd& q) {
  Decomposition d;
  d.x = q.w;
  d.y = im_abs(q);
  if (d.y >= kRealEps) d.unit = ImaginaryUnit(q);
  return d;
}

// True when q and p lie on a common plane L_I = R + IR.  Real points lie on
// every plane; otherwise the normalized imaginary parts must be parallel
// (same plane means the same unit up to sign).
inline bool same_slice(const Quatd& q, const Quatd& p) {
  const double nq = im_abs(q), np = im_abs(p);
  if (nq < kRealEps || np < kRealEps) return true;
  const Quatd uq{0.0, q.x / nq, q.y / nq, q.z / nq};
  const Quatd up{0.0, p.x / np, p.y / np, p.z / np};
  return abs(uq - up) < kSliceParallelEps || abs(uq + up) < kSliceParallelEps;
}

// --- text format: "a+bi+cj+dk" with optional terms ---

namespace detail {
inline void parse_error(const std::string& s) {
  throw std::invalid_argument("cannot parse quaternion: \"" + s + "\"");
}
}  // namespace detail

inline Quatd parse_quaternion(const std::string& text) {
  Quatd q{};
  std::string s;
  s.reserve(text.size());
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  if (s.empty()) detail::parse_error(text);

  std::size_t pos = 0;
  bool any = false;
  while (pos < s.size()) {
    double sign = 1.0;
    if (s[pos] == '+' || s[pos] == '-') {
      if (s[pos] == '-') sign = -1.0;
      ++pos;
      if (pos == s.size()) detail::parse_error(text);
    } else if (any) {
      detail::parse_error(text);  // terms after the first need a sign
    }
    double mag = 1.0;
    bool have_digits = false;
    {
      const char* begin = s.c_str() + pos;
      char* end = nullptr;
      double v = std::strtod(begin, &end);
      // Reject strtod consuming a sign or exponent that belongs to nothing.
      if (end != begin) {
        mag = v;
        have_digits = true;
        pos += static_cast<std::size_t>(end - begin);
      }
    }
    double* slot = &q.w;
    if (pos < s.size() && (s[pos] == 'i' || s[pos] == 'j' || s[pos] == 'k')) {
      slot = s[pos] == 'i' ? &q.x : s[pos] == 'j' ? &q.y : &q.z;
      ++pos;
    } else if (!have_digits) {
      detail::parse_error(text);
    }
    *slot += sign * mag;
    any = true;
  }
  if (!any) detail::parse_error(text);
  return q;
}

inline std::string format_quaternion(const Quatd& q) {
  std::ostringstream os;
  os.precision(17);
  bool first = true;
  auto emit = [&](double v, const char* unit) {
    if (v == 0.0) return;
    if (!first && v >= 0.0) os << '+';
    if (unit[0] != '\0' && (v == 1.0 || v == -1.0)) {
      os << (v < 0 ? "-" : "") << unit;
    } else {
      os << v << unit;
    }
    first = false;
  };
  emit(q.w, "");
  emit(q.x, "i");
  emit(q.y, "j");
  emit(q.z, "k");
  if (first) os << '0';
  return os.str();
}

}  // namespace sreg
