#pragma once

// Shared helpers for the test suites: deterministic generators and the
// independent brute-force oracles the derived expectations are frozen from.

#include <cmath>
#include <random>
#include <vector>

#include "sreg/quaternion.hpp"
#include "sreg/star_poly.hpp"

namespace sreg::testing {

using Rng = std::mt19937_64;

inline Quatd rand_quat(Rng& rng, double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  return {u(rng), u(rng), u(rng), u(rng)};
}

inline Quatd rand_int_quat(Rng& rng, int lo = -9, int hi = 9) {
  std::uniform_int_distribution<int> u(lo, hi);
  return {double(u(rng)), double(u(rng)), double(u(rng)), double(u(rng))};
}

inline ImaginaryUnit rand_unit(Rng& rng) {
  for (;;) {
    const Quatd q = rand_quat(rng);
    if (im_abs(q) > 0.1) return ImaginaryUnit(q);
  }
}

inline StarPolyd rand_poly(Rng& rng, int degree, double lo = -1.0, double hi = 1.0) {
  std::vector<Quatd> c(static_cast<std::size_t>(degree) + 1);
  for (auto& a : c) a = rand_quat(rng, lo, hi);
  return StarPolyd(std::move(c));
}

inline StarPolyd rand_int_poly(Rng& rng, int degree, int lo = -9, int hi = 9) {
  std::vector<Quatd> c(static_cast<std::size_t>(degree) + 1);
  for (auto& a : c) a = rand_int_quat(rng, lo, hi);
  return StarPolyd(std::move(c));
}

// Independent O(n^2) convolution, kept free of the production star_mul path.
inline std::vector<Quatd> convolve_oracle(const std::vector<Quatd>& a,
                                          const std::vector<Quatd>& b) {
  if (a.empty() || b.empty()) return {};
  std::vector<Quatd> out(a.size() + b.size() - 1);
  for (std::size_t n = 0; n < out.size(); ++n) {
    Quatd s{};
    for (std::size_t k = 0; k < a.size(); ++k) {
      if (n >= k && n - k < b.size()) s += a[k] * b[n - k];
    }
    out[n] = s;
  }
  return out;
}

// Plain monomial-basis evaluation sum q^n a_n without Horner.
inline Quatd eval_oracle(const std::vector<Quatd>& coeffs, const Quatd& q) {
  Quatd s{}, p = Quatd::one();
  for (const auto& a : coeffs) {
    s += p * a;
    p = p * q;
  }
  return s;
}

inline double quat_dist(const Quatd& a, const Quatd& b) { return abs(a - b); }

}  // namespace sreg::testing
