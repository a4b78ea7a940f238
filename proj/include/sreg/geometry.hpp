#pragma once

// Symmetric-set geometry: the 2-sphere x0 + y0*S of imaginary directions, the
// sigma distance whose balls govern centered series expansions, and the
// symmetric shells U(x0+y0*S, R) = { q : |(q-x0)^2+y0^2| < R^2 }.

#include <cmath>
#include <stdexcept>
#include <string>

#include "sreg/quaternion.hpp"

namespace sreg {

// x0 + y0*S with y0 >= 0; y0 = 0 encodes a real point.  Every point of the
// sphere has the same modulus sqrt(x0^2 + y0^2).
struct Sphere2 {
  double x0 = 0;
  double y0 = 0;

  Sphere2() = default;
  Sphere2(double x, double y) : x0(x), y0(std::fabs(y)) {}

  double modulus() const { return std::hypot(x0, y0); }
  bool is_real_point() const { return y0 == 0.0; }

  Quatd point(const ImaginaryUnit& I) const { return Quatd(x0) + y0 * I; }

  // (q - x0)^2 + y0^2, the real-coefficient quadratic vanishing on the sphere.
  Quatd quadratic_at(const Quatd& q) const {
    const Quatd d = q - Quatd(x0);
    return d * d + Quatd(y0 * y0);
  }

  bool contains(const Quatd& q, double tol = 1e-12) const {
    return std::fabs(q.w - x0) <= tol && std::fabs(im_abs(q) - y0) <= tol;
  }

  friend bool operator==(const Sphere2& a, const Sphere2& b) {
    return a.x0 == b.x0 && a.y0 == b.y0;
  }
};

inline std::string to_string(const Sphere2& s) {
  return "sphere(x0=" + std::to_string(s.x0) + ", y0=" + std::to_string(s.y0) + ")";
}

// Thrown when an evaluation lands on a pole sphere.
class PoleError : public std::runtime_error {
 public:
  explicit PoleError(const Sphere2& s)
      : std::runtime_error("evaluation at a pole: " + to_string(s)), sphere(s) {}
  Sphere2 sphere;
};

inline double omega(const Quatd& q, const Quatd& p) {
  const double dre = q.w - p.w;
  const double sim = im_abs(q) + im_abs(p);
  return std::sqrt(dre * dre + sim * sim);
}

// Euclidean distance when q and p share a plane L_I (a real point shares
// every plane), omega otherwise.  Always >= |q - p|.
inline double sigma(const Quatd& q, const Quatd& p) {
  if (same_slice(q, p)) return abs(q - p);
  return omega(q, p);
}

struct SigmaBall {
  Quatd center;
  double radius = 0;

  SigmaBall(const Quatd& c, double r) : center(c), radius(r) {
    if (!(r > 0)) throw std::invalid_argument("sigma ball needs radius > 0");
  }
  bool contains(const Quatd& q) const { return sigma(q, center) < radius; }
};

struct SymmetricShell {
  Sphere2 sphere;
  double radius = 0;

  SymmetricShell(const Sphere2& s, double r) : sphere(s), radius(r) {
    if (!(r > 0)) throw std::invalid_argument("symmetric shell needs radius > 0");
  }
  bool contains(const Quatd& q) const {
    return abs(sphere.quadratic_at(q)) < radius * radius;
  }
};

inline bool in_sigma_ball(const Quatd& q, const SigmaBall& ball) { return ball.contains(q); }
inline bool in_shell(const Quatd& q, const SymmetricShell& shell) { return shell.contains(q); }

}  // namespace sreg
