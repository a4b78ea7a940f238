#pragma once

// JSON forms for every wire format: quaternions as [x0,x1,x2,x3], centered
// polynomials, factored rationals, principal parts, expansion dumps, and the
// Mittag-Leffler prescription/function artifacts.  Doubles round-trip
// bit-exactly through nlohmann's shortest-representation printer.

#include <string>
#include <vector>

#include "json.hpp"
#include "sreg/geometry.hpp"
#include "sreg/mittag_leffler.hpp"
#include "sreg/quaternion.hpp"
#include "sreg/rational.hpp"
#include "sreg/spherical.hpp"
#include "sreg/star_poly.hpp"

namespace sreg {

using nlohmann::json;

inline void to_json(json& j, const Quatd& q) { j = json::array({q.w, q.x, q.y, q.z}); }

inline void from_json(const json& j, Quatd& q) {
  if (!j.is_array() || j.size() != 4)
    throw std::invalid_argument("quaternion JSON must be [x0,x1,x2,x3]");
  q = Quatd{j[0].get<double>(), j[1].get<double>(), j[2].get<double>(),
            j[3].get<double>()};
}

inline json star_poly_to_json(const StarPolyd& p) {
  json coeffs = json::array();
  for (const auto& c : p.coeffs()) coeffs.push_back(json(c));
  return json{{"center", p.center()}, {"coeffs", coeffs}};
}

inline StarPolyd star_poly_from_json(const json& j, std::size_t degree_cap = 1 << 15) {
  std::vector<Quatd> coeffs;
  for (const auto& c : j.at("coeffs")) coeffs.push_back(c.get<Quatd>());
  const Quatd center = j.contains("center") ? j["center"].get<Quatd>() : Quatd{};
  return StarPolyd(std::move(coeffs), center, degree_cap);
}

inline json den_to_json(const FactoredRealPoly<double>& d) {
  json out = json::array();
  for (const auto& f : d.factors()) {
    if (f.kind == RealFactor<double>::Kind::real_root)
      out.push_back(json{{"type", "real_root"}, {"r", f.a}, {"power", f.power}});
    else
      out.push_back(json{{"type", "sphere"}, {"x0", f.a}, {"y0", f.b},
                         {"power", f.power}});
  }
  return out;
}

inline FactoredRealPoly<double> den_from_json(const json& j) {
  std::vector<RealFactor<double>> factors;
  for (const auto& f : j) {
    const std::string type = f.at("type").get<std::string>();
    const int power = f.at("power").get<int>();
    if (type == "real_root") {
      factors.push_back(RealFactor<double>::root(f.at("r").get<double>(), power));
    } else if (type == "sphere") {
      factors.push_back(RealFactor<double>::sphere(f.at("x0").get<double>(),
                                                   f.at("y0").get<double>(), power));
    } else {
      throw std::invalid_argument("unknown denominator factor type: " + type);
    }
  }
  return FactoredRealPoly<double>(std::move(factors));
}

inline json semirational_to_json(const SemiRationald& f) {
  return json{{"num", star_poly_to_json(f.num())}, {"den", den_to_json(f.den())}};
}

inline SemiRationald semirational_from_json(const json& j) {
  return SemiRationald(star_poly_from_json(j.at("num")),
                       j.contains("den") ? den_from_json(j["den"])
                                         : FactoredRealPoly<double>::one());
}

// {"x0":..,"y0":..,"k":..,"A":[[..] x 2k],"q0_unit":[..]} with A listing
// (A_2, A_3, ..., A_{2k+1}).
inline json principal_part_to_json(const PrincipalPartd& p) {
  json a = json::array();
  for (const auto& [even, odd] : p.pairs) {
    a.push_back(json(even));
    a.push_back(json(odd));
  }
  json unit = json(Quatd::i());
  if (p.y0 > 0) {
    const auto d = decompose(p.q0);
    if (d.unit) unit = json(d.unit->quat());
  }
  return json{{"x0", p.x0}, {"y0", p.y0}, {"k", p.order()}, {"A", a},
              {"q0_unit", unit}};
}

inline PrincipalPartd principal_part_from_json(const json& j) {
  const double x0 = j.at("x0").get<double>();
  const double y0 = j.at("y0").get<double>();
  const int k = j.at("k").get<int>();
  const Quatd unit_q =
      j.contains("q0_unit") ? j["q0_unit"].get<Quatd>() : Quatd::i();
  const Quatd q0 = y0 == 0.0 ? Quatd(x0)
                             : Quatd(x0) + y0 * ImaginaryUnit(unit_q);
  std::vector<std::pair<Quatd, Quatd>> pairs;
  const auto& a = j.at("A");
  if (static_cast<int>(a.size()) != 2 * k)
    throw std::invalid_argument("principal part: A must list 2k quaternions");
  for (int n = 0; n < k; ++n)
    pairs.emplace_back(a[std::size_t(2 * n)].get<Quatd>(),
                       a[std::size_t(2 * n + 1)].get<Quatd>());
  return PrincipalPartd(x0, y0, q0, std::move(pairs));
}

inline json expansion_to_json(const SphericalExpansion& e) {
  json a = json::array();
  for (const auto& c : e.A) a.push_back(json(c));
  return json{{"sphere", json::array({e.sphere.x0, e.sphere.y0})},
              {"q0", e.q0},
              {"k", e.k},
              {"A", a},
              {"radius", e.radius}};
}

inline SphericalExpansion expansion_from_json(const json& j) {
  SphericalExpansion e;
  e.sphere = Sphere2(j.at("sphere")[0].get<double>(), j.at("sphere")[1].get<double>());
  e.q0 = j.at("q0").get<Quatd>();
  e.k = j.at("k").get<int>();
  for (const auto& c : j.at("A")) e.A.push_back(c.get<Quatd>());
  e.radius = j.at("radius").get<double>();
  return e;
}

inline json prescription_to_json(const MLPrescription& p) {
  switch (p.kind()) {
    case MLPrescription::Kind::lattice_unit:
      return json{{"generator", "integer_lattice"}, {"principal", "unit"}};
    case MLPrescription::Kind::lattice_paired:
      return json{{"generator", "integer_lattice"}, {"principal", "paired"}};
    default: {
      json spheres = json::array();
      for (const auto& pole : p.fixed_poles())
        spheres.push_back(principal_part_to_json(pole.principal));
      return json{{"spheres", spheres}};
    }
  }
}

inline MLPrescription prescription_from_json(const json& j) {
  if (j.contains("generator")) {
    if (j["generator"].get<std::string>() != "integer_lattice")
      throw std::invalid_argument("unknown prescription generator");
    const std::string principal = j.at("principal").get<std::string>();
    if (principal == "unit") return MLPrescription::integer_lattice(false);
    if (principal == "paired") return MLPrescription::integer_lattice(true);
    throw std::invalid_argument("unknown lattice principal kind: " + principal);
  }
  std::vector<PrescribedPole> poles;
  for (const auto& s : j.at("spheres")) {
    PrincipalPartd p = principal_part_from_json(s);
    poles.push_back({p.sphere(), std::move(p)});
  }
  return MLPrescription::from_list(std::move(poles));
}

inline json truncated_series_to_json(const TruncatedSeries& t) {
  json coeffs = json::array();
  for (const auto& c : t.poly.coeffs()) coeffs.push_back(json(c));
  return json{{"radius", t.radius}, {"tail_bound", t.tail_bound}, {"coeffs", coeffs}};
}

inline TruncatedSeries truncated_series_from_json(const json& j) {
  std::vector<Quatd> coeffs;
  for (const auto& c : j.at("coeffs")) coeffs.push_back(c.get<Quatd>());
  const std::size_t cap = coeffs.size() + 1;
  return TruncatedSeries{StarPolyd(std::move(coeffs), Quatd{}, cap),
                         j.at("radius").get<double>(),
                         j.at("tail_bound").get<double>()};
}

inline json ml_function_to_json(const MLFunction& f) {
  json groups = json::array();
  for (const auto& g : f.groups()) {
    groups.push_back(json{{"Q", semirational_to_json(g.q_sum)},
                          {"R", truncated_series_to_json(g.correction)},
                          {"b", g.bound},
                          {"n_poles", g.n_poles}});
  }
  return json{{"type", "ml_function"},
              {"prescription", prescription_to_json(f.prescription())},
              {"rho", f.rho()},
              {"groups", groups}};
}

inline MLFunction ml_function_from_json(const json& j) {
  MLPrescription p = prescription_from_json(j.at("prescription"));
  std::vector<double> rho = j.at("rho").get<std::vector<double>>();
  std::vector<MLGroup> groups;
  for (const auto& g : j.at("groups")) {
    MLGroup grp;
    grp.q_sum = semirational_from_json(g.at("Q"));
    grp.correction = truncated_series_from_json(g.at("R"));
    grp.bound = g.at("b").get<double>();
    grp.n_poles = g.at("n_poles").get<int>();
    groups.push_back(std::move(grp));
  }
  return MLFunction(std::move(p), std::move(rho), std::move(groups));
}

}  // namespace sreg
