// slicereg: evaluate, expand, and verify slice regular and semiregular
// functions of a quaternionic variable; build Mittag-Leffler functions from
// pole prescriptions; export slice grids for plotting.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "sreg/function_spec.hpp"
#include "sreg/grid.hpp"
#include "sreg/json_io.hpp"
#include "sreg/verify.hpp"

namespace {

using namespace sreg;
using nlohmann::json;

constexpr int kExitError = 1;
constexpr int kExitPole = 2;

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  json j;
  in >> j;
  return j;
}

void write_output(const std::string& out_path, const std::string& text) {
  if (out_path.empty() || out_path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + out_path);
  out << text;
}

ImaginaryUnit parse_unit(const std::string& text) {
  return ImaginaryUnit(parse_quaternion(text));
}

int cmd_eval(const std::string& spec_path, const std::string& point, double eps) {
  const FunctionSpec f = load_function_spec_file(spec_path);
  const Quatd q = parse_quaternion(point);
  if (f.has_certificate()) {
    const auto c = f.eval_certified(q, eps);
    std::cout << format_quaternion(c.value) << "\n";
    std::cout << "bound " << c.bound << "\n";
  } else {
    std::cout << format_quaternion(f.eval(q)) << "\n";
  }
  return 0;
}

int cmd_expand(const std::string& spec_path, double x0, double y0, int k, int j_max,
               const std::string& unit, double shell_radius, double slice_radius,
               const std::string& out) {
  const FunctionSpec f = load_function_spec_file(spec_path);
  const Sphere2 sphere(x0, y0);
  const Quatd q0 = sphere.is_real_point() ? Quatd(sphere.x0)
                                          : sphere.point(parse_unit(unit));
  SphericalOpts opts;
  opts.shell_radius = shell_radius;
  opts.slice_radius = slice_radius;
  const SphericalExpansion e =
      k > 0 ? spherical_laurent(f.eval, sphere, q0, k, j_max, opts)
            : spherical_coeffs(f.eval, sphere, q0, j_max, opts);
  write_output(out, expansion_to_json(e).dump(2) + "\n");
  std::cerr << "reconstruction residual " << e.residual << " on shell radius "
            << e.radius << "\n";
  return 0;
}

int cmd_principal_part(const std::string& spec_path, double x0, double y0, int k_max,
                       double shell_radius, const std::string& out) {
  const FunctionSpec f = load_function_spec_file(spec_path);
  SphericalOpts opts;
  opts.shell_radius = shell_radius;
  const PrincipalPartd p =
      extract_principal_part(f.eval, Sphere2(x0, y0), k_max, opts);
  json j = principal_part_to_json(p);
  if (const auto e = exceptional_point(p))
    j["exceptional_point"] = *e;  // heuristic: zero of the top pair on the sphere
  write_output(out, j.dump(2) + "\n");
  return 0;
}

int cmd_ml_build(const std::string& prescription_path, const std::string& out,
                 int n_groups) {
  const MLPrescription p = prescription_from_json(read_json_file(prescription_path));
  MLBuildOptions opts;
  opts.n_groups = n_groups;
  const MLFunction f = ml_build(p, opts);
  write_output(out, ml_function_to_json(f).dump() + "\n");
  std::cout << "# n rho_n poles deg(R_n) b_n\n";
  for (std::size_t n = 1; n <= f.groups().size(); ++n) {
    const auto& g = f.groups()[n - 1];
    std::cout << n << " " << f.rho()[n - 1] << " " << g.n_poles << " "
              << (g.correction.is_zero() ? 0 : g.correction.degree()) << " "
              << g.bound << "\n";
  }
  return 0;
}

int cmd_grid(const std::string& spec_path, const GridSpec& grid,
             const std::string& out) {
  const FunctionSpec f = load_function_spec_file(spec_path);
  if (out.empty() || out == "-") {
    write_grid_csv(std::cout, f, grid);
    return 0;
  }
  std::ofstream os(out, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open output file: " + out);
  write_grid_csv(os, f, grid);
  return 0;
}

int cmd_verify(const std::string& spec_path, const std::string& prescription_path,
               int n_points, int n_spheres, unsigned seed, double eps) {
  const FunctionSpec f = load_function_spec_file(spec_path);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-2.5, 2.5);
  json report;
  bool pass = true;

  // slice regularity at sampled points clear of the poles
  json dbar = json::array();
  int tested = 0;
  for (int t = 0; t < 50 * n_points && tested < n_points; ++t) {
    const Quatd q{u(rng), u(rng), u(rng), u(rng)};
    if (f.pole_at && f.pole_at(q)) continue;
    try {
      // stencil clearance probe
      const double y = im_abs(q);
      if (f.pole_at && f.pole_at(Quatd(q.w) + (y + 0.05) * ImaginaryUnit(
                                                  im_abs(q) > 0.1 ? q : Quatd::i())))
        continue;
    } catch (...) {
    }
    RegularityReport rep;
    try {
      rep = check_regularity_adaptive(f.eval, q);
    } catch (const PoleError&) {
      continue;
    } catch (const std::exception&) {
      continue;
    }
    ++tested;
    if (!rep.regular) {
      pass = false;
      dbar.push_back(json{{"point", rep.point},
                          {"residuals", rep.residuals},
                          {"order", rep.order}});
    }
  }
  report["dbar"] = json{{"points", tested}, {"failures", dbar}};

  // affinity on random non-pole spheres
  json affine_failures = json::array();
  int spheres_tested = 0;
  std::uniform_real_distribution<double> ux(-2.0, 2.0), uy(0.2, 1.8);
  for (int t = 0; t < 50 * n_spheres && spheres_tested < n_spheres; ++t) {
    const Sphere2 s(ux(rng), uy(rng));
    if (f.pole_at && f.pole_at(s.point(ImaginaryUnit::i()))) continue;
    bool ok;
    try {
      ok = check_affine_on_sphere(f.eval, s, 1e-8, 20, unsigned(rng()));
    } catch (const std::exception&) {
      continue;
    }
    ++spheres_tested;
    if (!ok) {
      pass = false;
      affine_failures.push_back(json::array({s.x0, s.y0}));
    }
  }
  report["affinity"] = json{{"spheres", spheres_tested}, {"failures", affine_failures}};

  // principal-part round trip against a prescription
  if (!prescription_path.empty()) {
    const MLPrescription p = prescription_from_json(read_json_file(prescription_path));
    json pp = json::array();
    for (const auto& pole : p.poles_in_band(0, 1e9)) {
      SphericalOpts opts;
      opts.shell_radius = 0.45;
      PrincipalPartd got;
      bool ok = true;
      try {
        got = extract_principal_part(f.eval, pole.sphere, pole.principal.order() + 1,
                                     opts);
      } catch (const std::exception&) {
        ok = false;
      }
      double err = 0;
      if (ok && got.order() == pole.principal.order()) {
        for (std::size_t n = 0; n < got.pairs.size(); ++n) {
          err = std::max(err, abs(got.pairs[n].first - pole.principal.pairs[n].first));
          err = std::max(err, abs(got.pairs[n].second - pole.principal.pairs[n].second));
        }
      } else {
        ok = false;
      }
      if (!ok || err > eps) pass = false;
      pp.push_back(json{{"sphere", json::array({pole.sphere.x0, pole.sphere.y0})},
                        {"order_match", ok},
                        {"max_coeff_error", err}});
    }
    report["principal_parts"] = pp;
  }

  report["pass"] = pass;
  std::cout << report.dump(2) << "\n";
  return pass ? 0 : kExitError;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"slice regular function toolkit"};
  app.require_subcommand(1);

  std::string spec_path, point, out, unit = "i", prescription_path;
  double eps = 1e-8, x0 = 0, y0 = 1, shell_radius = 0.5, slice_radius = 0;
  int k = 0, j_max = 8, k_max = 4, n_groups = 40, n_points = 40, n_spheres = 5;
  unsigned seed = 0;
  GridSpec grid;
  std::string grid_unit = "i";

  auto* eval_cmd = app.add_subcommand("eval", "evaluate a function at a point");
  eval_cmd->add_option("spec", spec_path, "function spec JSON")->required();
  eval_cmd->add_option("point", point, "quaternion, e.g. \"0.5+2i-j\"")->required();
  eval_cmd->add_option("--eps", eps, "certificate target");

  auto* expand_cmd = app.add_subcommand("expand", "spherical expansion around a sphere");
  expand_cmd->add_option("spec", spec_path)->required();
  expand_cmd->add_option("--x0", x0)->required();
  expand_cmd->add_option("--y0", y0)->required();
  expand_cmd->add_option("--k", k, "pole order parameter (0 = regular)");
  expand_cmd->add_option("--jmax", j_max);
  expand_cmd->add_option("--q0-unit", unit, "imaginary unit of the base point");
  expand_cmd->add_option("--shell-radius", shell_radius);
  expand_cmd->add_option("--slice-radius", slice_radius);
  expand_cmd->add_option("--out", out);

  auto* pp_cmd = app.add_subcommand("principal-part", "extract a principal part");
  pp_cmd->add_option("spec", spec_path)->required();
  pp_cmd->add_option("--x0", x0)->required();
  pp_cmd->add_option("--y0", y0)->required();
  pp_cmd->add_option("--kmax", k_max);
  pp_cmd->add_option("--shell-radius", shell_radius);
  pp_cmd->add_option("--out", out);

  auto* ml_cmd = app.add_subcommand("ml-build", "build a Mittag-Leffler function");
  ml_cmd->add_option("prescription", prescription_path)->required();
  ml_cmd->add_option("--out", out)->required();
  ml_cmd->add_option("--groups", n_groups);

  auto* grid_cmd = app.add_subcommand("grid", "sample a slice rectangle to CSV");
  grid_cmd->add_option("spec", spec_path)->required();
  grid_cmd->add_option("--unit", grid_unit, "slice unit");
  grid_cmd->add_option("--xmin", grid.x_min)->required();
  grid_cmd->add_option("--xmax", grid.x_max)->required();
  grid_cmd->add_option("--ymin", grid.y_min)->required();
  grid_cmd->add_option("--ymax", grid.y_max)->required();
  grid_cmd->add_option("--nx", grid.nx)->required();
  grid_cmd->add_option("--ny", grid.ny)->required();
  grid_cmd->add_option("--out", out);

  auto* verify_cmd = app.add_subcommand("verify", "regularity and affinity checks");
  verify_cmd->add_option("spec", spec_path)->required();
  verify_cmd->add_option("--prescription", prescription_path,
                         "check principal parts against this prescription");
  verify_cmd->add_option("--points", n_points);
  verify_cmd->add_option("--spheres", n_spheres);
  verify_cmd->add_option("--seed", seed);
  verify_cmd->add_option("--eps", eps);

  CLI11_PARSE(app, argc, argv);

  try {
    if (eval_cmd->parsed()) return cmd_eval(spec_path, point, eps);
    if (expand_cmd->parsed())
      return cmd_expand(spec_path, x0, y0, k, j_max, unit, shell_radius, slice_radius,
                        out);
    if (pp_cmd->parsed())
      return cmd_principal_part(spec_path, x0, y0, k_max, shell_radius, out);
    if (ml_cmd->parsed()) return cmd_ml_build(prescription_path, out, n_groups);
    if (grid_cmd->parsed()) {
      grid.unit = parse_unit(grid_unit);
      return cmd_grid(spec_path, grid, out);
    }
    if (verify_cmd->parsed())
      return cmd_verify(spec_path, prescription_path, n_points, n_spheres, seed, eps);
  } catch (const sreg::PoleError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitPole;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
