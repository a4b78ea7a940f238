#pragma once

// Constructive Mittag-Leffler builder on the whole quaternion space.
//
// Given a closed discrete family of pole spheres with principal parts, group
// the spheres into shells between exhaustion radii rho_n (half-integers,
// perturbed off the pole moduli), sum each group's principal parts into a
// rational Q_n, and correct with the Taylor polynomial R_n of Q_n whose
// certified tail on the previous ball is below 2^{-n}.  The result
// f = Q_1 + sum_{n>=2} (Q_n - R_n) converges uniformly on every ball with a
// computable certificate; every point of a sphere x0 + y0*S has the same
// modulus, so shell membership is a single comparison.
//
// The two lattice example series (unit principal parts, and the paired
// arrangement whose one-sided sum diverges) ship as direct evaluators with
// certified truncation.

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sreg/geometry.hpp"
#include "sreg/quaternion.hpp"
#include "sreg/rational.hpp"
#include "sreg/spherical.hpp"
#include "sreg/star_poly.hpp"

namespace sreg {

struct PrescribedPole {
  Sphere2 sphere;
  PrincipalPartd principal;
};

class MLPrescription {
 public:
  enum class Kind { empty, fixed, lattice_unit, lattice_paired };

  MLPrescription() = default;

  static MLPrescription from_list(std::vector<PrescribedPole> poles) {
    MLPrescription p;
    p.kind_ = poles.empty() ? Kind::empty : Kind::fixed;
    p.fixed_ = std::move(poles);
    p.validate();
    return p;
  }

  // Integer lattice n + S: principal part 1/((q-n)^2+1) per sphere (unit),
  // or ((q-n)^2+1)^{-1} (q - n - i) (paired).
  static MLPrescription integer_lattice(bool paired) {
    MLPrescription p;
    p.kind_ = paired ? Kind::lattice_paired : Kind::lattice_unit;
    return p;
  }

  Kind kind() const { return kind_; }
  const std::vector<PrescribedPole>& fixed_poles() const { return fixed_; }

  // Poles with modulus in (lo, hi].
  std::vector<PrescribedPole> poles_in_band(double lo, double hi) const {
    std::vector<PrescribedPole> out;
    if (kind_ == Kind::fixed) {
      for (const auto& p : fixed_) {
        const double m = p.sphere.modulus();
        if (m > lo && m <= hi) out.push_back(p);
      }
      return out;
    }
    if (kind_ == Kind::lattice_unit || kind_ == Kind::lattice_paired) {
      // |n + S| = sqrt(n^2 + 1)
      const auto nmax = static_cast<long long>(std::floor(std::sqrt(
          std::max(0.0, hi * hi - 1.0))));
      for (long long n = -nmax; n <= nmax; ++n) {
        const double m = std::hypot(double(n), 1.0);
        if (!(m > lo && m <= hi)) continue;
        out.push_back(lattice_pole(n, kind_ == Kind::lattice_paired));
      }
    }
    return out;
  }

  // Tight default: probes may legitimately approach a sphere to ~1e-10.
  std::optional<Sphere2> pole_sphere_at(const Quatd& q, double tol = 1e-12) const {
    const auto d = decompose(q);
    if (kind_ == Kind::fixed) {
      for (const auto& p : fixed_)
        if (std::fabs(d.x - p.sphere.x0) <= tol && std::fabs(d.y - p.sphere.y0) <= tol)
          return p.sphere;
      return std::nullopt;
    }
    if (kind_ == Kind::lattice_unit || kind_ == Kind::lattice_paired) {
      const double n = std::round(d.x);
      if (std::fabs(d.x - n) <= tol && std::fabs(d.y - 1.0) <= tol)
        return Sphere2(n, 1);
    }
    return std::nullopt;
  }

  static PrescribedPole lattice_pole(long long n, bool paired) {
    const Sphere2 s(double(n), 1.0);
    const Quatd q0 = Quatd(double(n)) + Quatd::i();
    if (paired)
      return {s, PrincipalPartd(s.x0, 1.0, q0, {{Quatd{}, Quatd::one()}})};
    return {s, PrincipalPartd(s.x0, 1.0, q0, {{Quatd::one(), Quatd{}}})};
  }

 private:
  void validate() const {
    constexpr double kMinSeparation = 1e-6;
    for (std::size_t i = 0; i < fixed_.size(); ++i) {
      for (std::size_t j = i + 1; j < fixed_.size(); ++j) {
        const double d = std::hypot(fixed_[i].sphere.x0 - fixed_[j].sphere.x0,
                                    fixed_[i].sphere.y0 - fixed_[j].sphere.y0);
        if (d == 0.0)
          throw std::invalid_argument("prescription: duplicate pole sphere");
        if (d < kMinSeparation)
          throw std::invalid_argument(
              "prescription: spheres accumulate (separation below 1e-6)");
      }
    }
  }

  Kind kind_ = Kind::empty;
  std::vector<PrescribedPole> fixed_;
};

struct MLGroup {
  SemiRationald q_sum;         // sum of the band's principal parts
  TruncatedSeries correction;  // Taylor polynomial of q_sum on the previous ball
  double bound = 0;            // certified sup |Q_n - R_n| on that ball
  int n_poles = 0;
};

struct MLBuildOptions {
  int n_groups = 40;
  double margin = 1.0 / 32;      // keep pole moduli this far off shell boundaries
  int correction_cap = 1 << 14;  // corrections legitimately need high degree
};

class MLFunction {
 public:
  struct Certified {
    Quatd value;
    double bound = 0;
    int groups_used = 0;
  };

  MLFunction() = default;
  MLFunction(MLPrescription prescription, std::vector<double> rho,
             std::vector<MLGroup> groups)
      : prescription_(std::move(prescription)), rho_(std::move(rho)),
        groups_(std::move(groups)) {}

  const MLPrescription& prescription() const { return prescription_; }
  const std::vector<double>& rho() const { return rho_; }
  const std::vector<MLGroup>& groups() const { return groups_; }

  // Partial construction Q_1 + sum_{n=2}^{N} (Q_n - R_n).
  Quatd eval_partial(const Quatd& q, int n_max) const {
    Quatd acc{};
    for (int n = 1; n <= n_max && n <= int(groups_.size()); ++n) {
      const MLGroup& g = groups_[std::size_t(n - 1)];
      if (!g.q_sum.is_zero()) acc += value(g.q_sum, q);
      if (n >= 2 && !g.correction.is_zero()) acc -= g.correction.value(q);
    }
    return acc;
  }

  Certified eval_certified(const Quatd& q, double eps) const {
    if (const auto s = prescription_.pole_sphere_at(q)) throw PoleError(*s);
    const double a = abs(q);
    int N = 0;
    for (int n = 2; n <= int(groups_.size()); ++n) {
      if (a < rho_at(n - 1)) {
        N = n;
        break;
      }
    }
    if (N == 0)
      throw std::domain_error("eval_certified: point outside built exhaustion; "
                              "rebuild with more groups");
    int Np = N;
    while (std::ldexp(1.0, -Np) > eps) ++Np;
    const double bound = std::ldexp(1.0, -Np);
    if (Np > int(groups_.size())) {
      // For a finite prescription fully inside the exhaustion the groups past
      // the built horizon are identically zero, so the partial sum is exact.
      if (!covered_finite())
        throw std::domain_error("eval_certified: requested eps needs " +
                                std::to_string(Np) + " groups, built " +
                                std::to_string(groups_.size()));
      Np = int(groups_.size());
    }
    return {eval_partial(q, Np), bound, Np};
  }

  bool covered_finite() const {
    if (prescription_.kind() == MLPrescription::Kind::empty) return true;
    if (prescription_.kind() != MLPrescription::Kind::fixed) return false;
    double m = 0;
    for (const auto& p : prescription_.fixed_poles())
      m = std::max(m, p.sphere.modulus());
    return m < rho_.back();
  }

  double rho_at(int n) const { return rho_.at(std::size_t(n - 1)); }  // 1-based

 private:
  MLPrescription prescription_;
  std::vector<double> rho_;     // rho_1 .. rho_N
  std::vector<MLGroup> groups_; // groups 1 .. N
};

// Exhaustion radii at half-integers, perturbed within +-1/8 to keep every
// pole modulus at distance > margin from every boundary.
inline std::vector<double> choose_exhaustion_radii(const MLPrescription& p,
                                                   int n_groups, double margin) {
  static constexpr double kOffsets[] = {0.0,          1.0 / 32,  -1.0 / 32,
                                        1.0 / 16,     -1.0 / 16, 3.0 / 32,
                                        -3.0 / 32,    1.0 / 8,   -1.0 / 8};
  std::vector<double> rho;
  rho.reserve(std::size_t(n_groups));
  for (int n = 1; n <= n_groups; ++n) {
    const double base = n + 0.5;
    const auto nearby = p.poles_in_band(base - 0.3, base + 0.3);
    double best = -1, best_b = base;
    for (const double off : kOffsets) {
      const double b = base + off;
      double clearance = std::numeric_limits<double>::infinity();
      for (const auto& pole : nearby)
        clearance = std::min(clearance, std::fabs(pole.sphere.modulus() - b));
      if (clearance > best) {
        best = clearance;
        best_b = b;
      }
    }
    if (best <= margin)
      throw std::runtime_error(
          "exhaustion radii: pole moduli block every perturbed boundary near " +
          std::to_string(base));
    rho.push_back(best_b);
  }
  return rho;
}

inline MLFunction ml_build(const MLPrescription& p, const MLBuildOptions& opts = {}) {
  const auto rho = choose_exhaustion_radii(p, opts.n_groups, opts.margin);
  std::vector<MLGroup> groups;
  groups.reserve(std::size_t(opts.n_groups));
  for (int n = 1; n <= opts.n_groups; ++n) {
    MLGroup g;
    const double lo = n == 1 ? -1.0 : rho[std::size_t(n - 2)];
    const auto poles = p.poles_in_band(lo, rho[std::size_t(n - 1)]);
    g.n_poles = int(poles.size());
    for (const auto& pole : poles) g.q_sum = g.q_sum + principal_to_rational(pole.principal);
    if (n >= 2 && !g.q_sum.is_zero()) {
      const double ball = rho[std::size_t(n - 2)];
      const double target = std::ldexp(1.0, -n);
      int hi = -1;
      for (int order = 8; order <= opts.correction_cap; order *= 2) {
        if (taylor_truncate(g.q_sum, order, ball, target).tail_bound < target) {
          hi = order;
          break;
        }
      }
      if (hi < 0)
        throw std::runtime_error(
            "ml_build: correction for group " + std::to_string(n) +
            " cannot reach 2^-n below the degree cap; poles hug the shell");
      // The minimal passing order matters: the correction's growth beyond its
      // ball scales like (|q|/ball)^degree, so every spare degree hurts the
      // conditioning of the built function at larger radii.
      int lo = hi / 2;
      while (lo + 1 < hi) {
        const int mid = (lo + hi) / 2;
        if (taylor_truncate(g.q_sum, mid, ball, target).tail_bound < target)
          hi = mid;
        else
          lo = mid;
      }
      g.correction = taylor_truncate(g.q_sum, hi, ball, target);
      g.bound = g.correction.tail_bound;
    }
    groups.push_back(std::move(g));
  }
  return MLFunction(p, rho, std::move(groups));
}

// --- the two lattice example series ---

// f(q) = sum_{n in Z} principal part at n + S, evaluated directly with a
// certified truncation.  kind unit:   P_n = ((q-n)^2+1)^{-1}
//                         kind paired: P_n = ((q-n)^2+1)^{-1} (q - n - i)
// The unit series is summed symmetrically; the paired family only converges
// after combining the n and -n terms.
class LatticeSeries {
 public:
  enum class Kind { unit, paired };

  explicit LatticeSeries(Kind k) : kind_(k) {}
  Kind kind() const { return kind_; }

  struct Certified {
    Quatd value;
    double bound = 0;
    long long terms = 0;
  };

  std::optional<Sphere2> pole_at(const Quatd& q, double tol = 1e-12) const {
    const auto d = decompose(q);
    const double n = std::round(d.x);
    if (std::fabs(d.x - n) <= tol && std::fabs(d.y - 1.0) <= tol)
      return Sphere2(n, 1);
    return std::nullopt;
  }

  // Accelerated evaluation: subtract the mean behaviour c_n of the paired
  // term (a closed-form constant sums it back), leaving an O(1/n^4) series
  // with an explicit integral-comparison tail.
  Certified eval(const Quatd& q, double eps) const {
    if (const auto s = pole_at(q)) throw PoleError(*s);
    const double a = abs(q);
    const long long n0 = std::llround(std::ceil(2 * a + 4));
    const double c4 = kind_ == Kind::unit ? tail_c4_unit(a) : tail_c4_paired(a);
    long long N = std::max<long long>(
        n0, std::llround(std::ceil(std::cbrt(c4 / std::max(eps, 1e-300)))));
    if (N > 50'000'000)
      throw std::invalid_argument("series eval: eps too demanding at this |q|");
    Certified out;
    out.terms = N;
    out.bound = c4 / (3.0 * double(N) * double(N) * double(N));

    // n = 0 term and the closed-form sum of the subtracted means
    const Quatd q2 = q * q;
    if (kind_ == Kind::unit) {
      out.value = inverse(q2 + Quatd(1.0)) + Quatd(2.0 * kSumInvN2P1);
    } else {
      out.value = inverse(q2 + Quatd(1.0)) * (q - Quatd::i()) -
                  2.0 * kSumInvN2P1 * (q + Quatd::i());
    }
    for (long long n = 1; n <= N; ++n) out.value += centered_pair_term(q, double(n));
    return out;
  }

  // Plain symmetric partial sum over |n| <= N of the principal parts.
  Quatd partial_sum(const Quatd& q, long long N) const {
    Quatd acc{};
    for (long long n = -N; n <= N; ++n) {
      const Quatd w = Sphere2(double(n), 1).quadratic_at(q);
      const Quatd winv = inverse(w);
      acc += kind_ == Kind::unit ? winv : winv * (q - double(n) - Quatd::i());
    }
    return acc;
  }

  // Certified bound for the plain symmetric truncation error.
  double partial_tail_bound(double abs_q, long long N) const {
    if (kind_ == Kind::unit) {
      // integral comparison: sum_{|n| > N} 1/((n - a)^2 - 1) per side
      if (double(N) <= abs_q + 1) return std::numeric_limits<double>::infinity();
      return 2.0 / (double(N) - abs_q - 1.0);
    }
    // paired arrangement: terms O(1/n^2) with explicit constant
    if (double(N) <= 2 * (abs_q + 1) + 2) return std::numeric_limits<double>::infinity();
    const double a = abs_q;
    const double c = 2 * (a * a * a + a * a + 2 * a + 2) + 40 * (a + 1);
    return c / double(N);
  }

  // One-sided unpaired arrangement sum_{n=1}^{N} ((q-n)^2+1)^{-1}(q-n-i);
  // its partial sums grow like log N, which is the point of the paired
  // grouping.
  static Quatd unpaired_one_sided_partial(const Quatd& q, long long N) {
    Quatd acc{};
    for (long long n = 1; n <= N; ++n) {
      const Quatd w = Sphere2(double(n), 1).quadratic_at(q);
      acc += inverse(w) * (q - double(n) - Quatd::i());
    }
    return acc;
  }

  // Combined n and -n term minus its subtracted mean c_n.
  Quatd centered_pair_term(const Quatd& q, double n) const {
    const Quatd wp = Sphere2(n, 1).quadratic_at(q);
    const Quatd wm = Sphere2(-n, 1).quadratic_at(q);
    const Quatd dinv = inverse(wp * wm);
    const double n2p1 = n * n + 1;
    const Quatd q2 = q * q;
    if (kind_ == Kind::unit) {
      // pair = 2 (q^2 + n^2 + 1) / D; mean c_n = 2 / (n^2 + 1);
      // pair - c_n = q^2 (6 n^2 - 2 - 2 q^2) / (D (n^2 + 1))
      const Quatd num = q2 * (Quatd(6 * n * n - 2.0) - 2.0 * q2);
      return dinv * num / n2p1;
    }
    // pair = 2 (v - n^2 (q+i)) / D with v = (q^2+1)(q-i);
    // mean c_n = -2 (q+i) / (n^2+1); pair - c_n = 2 (n^2 p1 + p2) / (D (n^2+1))
    const Quatd p1 = -(q2 * q) - 3.0 * (q2 * Quatd::i()) + 2.0 * q;
    const Quatd p2 = q2 * q2 * q + q2 * q2 * Quatd::i() + 3.0 * (q2 * q) +
                     q2 * Quatd::i() + 2.0 * q;
    return dinv * ((n * n) * p1 + p2) * (2.0 / n2p1);
  }

 private:
  // sum_{n>=1} 1/(n^2+1) = (pi coth pi - 1) / 2
  static inline const double kSumInvN2P1 =
      (std::numbers::pi / std::tanh(std::numbers::pi) - 1.0) / 2.0;

  // |centered term| <= c4 / n^4 for n >= 2|q| + 4, so the tail past N is
  // bounded by c4 / (3 N^3).
  static double tail_c4_unit(double a) { return 112.0 * a * a; }
  static double tail_c4_paired(double a) {
    const double p1 = a * a * a + 3 * a * a + 2 * a;
    const double p2 = a * a * a * a * a + a * a * a * a + 3 * a * a * a + a * a + 2 * a;
    return 32.0 * (p1 + p2);
  }

  Kind kind_;
};

inline LatticeSeries example_zsum() { return LatticeSeries(LatticeSeries::Kind::unit); }
inline LatticeSeries example_paired() {
  return LatticeSeries(LatticeSeries::Kind::paired);
}

}  // namespace sreg
