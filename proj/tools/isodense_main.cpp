// isodense: isoperimetric profiles, stability, symmetrization and
// eigenvalue comparisons for Euclidean space with density exp(psi).

#include <cmath>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "isodense/builtins.hpp"
#include "isodense/columnar.hpp"
#include "isodense/existence.hpp"
#include "isodense/profile.hpp"
#include "isodense/spectral.hpp"
#include "isodense/variational.hpp"

using json = nlohmann::ordered_json;
using namespace isodense;

namespace {

constexpr const char* kSchema = "isodense/1";

constexpr const char* kGrammarHelp =
    "Density expressions use one variable (x on the line, r for radial "
    "profiles), decimal literals, + - * / ^ (right-associative ^ binds "
    "tighter than unary minus), parentheses, the functions "
    "exp log sqrt abs sin cos sign, and free identifiers as parameters "
    "bound with --param NAME=VALUE.";

struct DensityArgs {
  std::string expression;
  std::string builtin;
  std::string csv_path;
  std::vector<std::string> params;
  std::string domain = "line";
  double a = 0.0, b = 1.0;

  void attach(CLI::App* cmd) {
    cmd->add_option("--density", expression,
                    "the density f as an expression in x, e.g. exp(-x^2)");
    cmd->add_option("--builtin", builtin,
                    "built-in density: gauss, exp-square, laplace, "
                    "houseroof-flat, houseroof-decay");
    cmd->add_option("--csv", csv_path, "tabulated density (columns t, psi)");
    cmd->add_option("--param", params, "parameter binding NAME=VALUE");
    cmd->add_option("--domain", domain, "line | halfline | compact")
        ->check(CLI::IsMember({"line", "halfline", "compact"}));
    cmd->add_option("--a", a, "left endpoint (compact domain)");
    cmd->add_option("--b", b, "right endpoint (compact domain)");
  }

  expr::Bindings bindings() const {
    expr::Bindings out;
    for (const std::string& p : params) {
      const auto eq = p.find('=');
      if (eq == std::string::npos)
        throw std::invalid_argument("--param expects NAME=VALUE, got " + p);
      out[p.substr(0, eq)] = std::stod(p.substr(eq + 1));
    }
    return out;
  }

  DensityModel build() const {
    const int given = !expression.empty() + !builtin.empty() +
                      !csv_path.empty();
    if (given != 1)
      throw std::invalid_argument(
          "give exactly one of --density, --builtin, --csv");
    if (!builtin.empty()) return builtin_density(builtin);
    if (!csv_path.empty()) return DensityModel::from_csv(csv_path);
    Domain dom = Domain::line();
    if (domain == "halfline") dom = Domain::half_line();
    if (domain == "compact") dom = Domain::compact(a, b);
    return DensityModel::from_density_expression(expression, dom, bindings());
  }
};

void write_output(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    if (!content.empty() && content.back() != '\n') std::cout << '\n';
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot open output file " + path);
  out << content;
  if (!content.empty() && content.back() != '\n') out << '\n';
}

json minimizer_json(const MinimizerDescriptor& m) {
  json j;
  j["kind"] = to_string(m.kind);
  j["x"] = m.x;
  if (!std::isnan(m.y)) j["y"] = m.y;
  j["perimeter"] = m.perimeter;
  j["family"] = m.family;
  if (m.family) {
    auto encode = [](double v) -> json {
      if (v == kInf) return "+inf";
      if (v == -kInf) return "-inf";
      return v;
    };
    j["family_range"] = {encode(m.family_range[0]), encode(m.family_range[1])};
  }
  return j;
}

json profile_json(const ProfileResult& r) {
  json j;
  j["schema"] = kSchema;
  j["volume"] = r.volume;
  j["infimum_perimeter"] = r.infimum_perimeter;
  j["attained"] = r.attained;
  if (r.fleeing_end)
    j["fleeing_end"] = *r.fleeing_end > 0 ? "+inf" : "-inf";
  else
    j["fleeing_end"] = nullptr;
  json ms = json::array();
  for (const MinimizerDescriptor& m : r.minimizers)
    ms.push_back(minimizer_json(m));
  j["minimizers"] = std::move(ms);
  return j;
}

ProfileResult dispatch_profile(const DensityModel& density, double volume,
                               bool free_boundary) {
  const Domain& dom = density.domain();
  if (dom.is_line()) return solve_profile(density, volume);
  if (dom.is_compact())
    return solve_profile_compact(density, volume, free_boundary);
  return solve_profile_halfline(density, volume, free_boundary);
}

ColumnarSet build_set_from_args(const std::string& input,
                                const std::vector<std::string>& disks,
                                const std::vector<std::string>& rects,
                                int random_blobs, unsigned seed, double h,
                                double c, double window) {
  if (!input.empty()) {
    std::ifstream in(input);
    if (!in) throw std::invalid_argument("cannot open " + input);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return columnar_from_json(buffer.str());
  }
  ColumnarSet set = make_columnar(h, c, window);
  auto parse_numbers = [](const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
    return out;
  };
  for (const std::string& d : disks) {
    const auto v = parse_numbers(d);
    if (v.size() != 3)
      throw std::invalid_argument("--disk expects cx,cy,r");
    add_disk(set, v[0], v[1], v[2]);
  }
  for (const std::string& r : rects) {
    const auto v = parse_numbers(r);
    if (v.size() != 4)
      throw std::invalid_argument("--rect expects x0,x1,y0,y1");
    add_rectangle(set, v[0], v[1], v[2], v[3]);
  }
  if (random_blobs > 0) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> pos(-0.6 * window, 0.6 * window);
    std::uniform_real_distribution<double> rad(0.15 * window, 0.35 * window);
    for (int i = 0; i < random_blobs; ++i)
      add_disk(set, pos(rng), pos(rng), rad(rng));
  }
  if (set.empty_set())
    throw std::invalid_argument(
        "empty set: give --input, --disk, --rect, or --random");
  return set;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "isodense: isoperimetric profiles, stability and symmetrization "
      "for densities exp(psi) on Euclidean space"};
  app.footer(kGrammarHelp);
  app.require_subcommand(1);

  std::string output;
  app.add_option("-o,--output", output, "output file (default stdout)")
      ->capture_default_str();
  unsigned seed = 12345;
  app.add_option("--seed", seed, "seed for randomized fixtures")
      ->capture_default_str();

  // ---- profile
  auto* profile_cmd = app.add_subcommand(
      "profile", "isoperimetric profile I_f(V) and minimizers");
  DensityArgs profile_density;
  profile_density.attach(profile_cmd);
  double volume = 1.0;
  profile_cmd->add_option("--volume", volume, "weighted volume V");
  bool free_boundary = false;
  profile_cmd->add_flag("--free", free_boundary,
                        "free boundary (domain endpoints cost nothing)");
  std::vector<double> sweep;
  profile_cmd
      ->add_option("--sweep", sweep, "V0 V1 COUNT: emit CSV rows instead")
      ->expected(3);

  // ---- classify
  auto* classify_cmd =
      app.add_subcommand("classify", "density shape classification");
  DensityArgs classify_density;
  classify_density.attach(classify_cmd);
  double cls_lo = -16.0, cls_hi = 16.0;
  int cls_samples = 512;
  classify_cmd->add_option("--lo", cls_lo, "window start");
  classify_cmd->add_option("--hi", cls_hi, "window end");
  classify_cmd->add_option("--samples", cls_samples, "sample count");

  // ---- stability
  auto* stability_cmd = app.add_subcommand(
      "stability", "stability report for the centered ball of radius r");
  std::string delta_expr = "r^2";
  double radius = 1.0;
  int n_dim = 1;
  int modes = 8;
  std::vector<std::string> delta_params;
  stability_cmd->add_option("--delta", delta_expr,
                            "radial log-density profile delta(r)");
  stability_cmd->add_option("--r", radius, "ball radius");
  stability_cmd->add_option("--n", n_dim, "hypersurface dimension n");
  stability_cmd->add_option("--modes", modes, "highest spherical mode");
  stability_cmd->add_option("--param", delta_params, "NAME=VALUE");

  // ---- meancurv
  auto* meancurv_cmd = app.add_subcommand(
      "meancurv", "generalized mean curvature of spheres and hyperplanes");
  std::string mc_delta = "r^2";
  int mc_n = 1;
  double mc_sphere_r = 0.0;
  double mc_plane_c = 0.0;
  std::string mc_point;
  meancurv_cmd->add_option("--delta", mc_delta, "delta(r)");
  meancurv_cmd->add_option("--n", mc_n, "hypersurface dimension n");
  auto* sphere_opt =
      meancurv_cmd->add_option("--sphere", mc_sphere_r, "sphere radius");
  auto* plane_opt = meancurv_cmd->add_option(
      "--hyperplane", mc_plane_c, "hyperplane offset c");
  meancurv_cmd->add_option("--point", mc_point,
                           "point on the hyperplane, comma-separated");

  // ---- firstvar
  auto* firstvar_cmd = app.add_subcommand(
      "firstvar", "finite-difference check of the first variation");
  std::string fv_delta = "r^2";
  int fv_n = 1;
  double fv_r = 1.0, fv_h = 1e-3;
  std::string fv_u = "const";
  bool fv_hyperplane = false;
  double fv_c = 1.0;
  firstvar_cmd->add_option("--delta", fv_delta, "delta(r)");
  firstvar_cmd->add_option("--n", fv_n, "hypersurface dimension n");
  firstvar_cmd->add_option("--r", fv_r, "sphere radius");
  firstvar_cmd->add_option("--h", fv_h, "finite-difference step");
  firstvar_cmd->add_option("--u", fv_u, "normal velocity: const | harmonic")
      ->check(CLI::IsMember({"const", "harmonic"}));
  firstvar_cmd->add_flag("--hyperplane", fv_hyperplane,
                         "check a hyperplane patch instead of the sphere");
  firstvar_cmd->add_option("--c", fv_c, "hyperplane offset");

  // ---- symmetrize
  auto* symmetrize_cmd = app.add_subcommand(
      "symmetrize", "Steiner symmetrization of planar columnar sets");
  std::string sym_input;
  std::vector<std::string> sym_disks, sym_rects;
  int sym_random = 0;
  double sym_h = 1.0 / 128.0, sym_c = 1.0, sym_window = 1.5;
  int sym_axis = 1;
  bool sym_converge = false;
  bool sym_hsiang = false;
  int sym_hyperplane = 0;
  int sym_max_steps = 64;
  double sym_tol = -1.0;
  std::string sym_log_path;
  symmetrize_cmd->add_option("--input", sym_input, "columnar-set JSON file");
  symmetrize_cmd->add_option("--disk", sym_disks, "add a disk cx,cy,r");
  symmetrize_cmd->add_option("--rect", sym_rects, "add a rectangle x0,x1,y0,y1");
  symmetrize_cmd->add_option("--random", sym_random, "add N random blobs");
  symmetrize_cmd->add_option("--h", sym_h, "grid spacing");
  symmetrize_cmd->add_option("--c", sym_c, "density constant in exp(c|x|^2)");
  symmetrize_cmd->add_option("--window", sym_window, "half-width of the grid");
  symmetrize_cmd->add_option("--axis", sym_axis,
                             "symmetrization axis for a single step (0|1)");
  symmetrize_cmd->add_flag("--converge", sym_converge,
                           "iterate to the centered ball");
  symmetrize_cmd->add_flag("--hsiang", sym_hsiang,
                           "apply one Hsiang reflection instead");
  symmetrize_cmd->add_option("--hyperplane", sym_hyperplane,
                             "Hsiang hyperplane normal (0|1)");
  symmetrize_cmd->add_option("--max-steps", sym_max_steps, "iteration cap");
  symmetrize_cmd->add_option("--tol", sym_tol,
                             "convergence tolerance (default 0.25 h)");
  symmetrize_cmd->add_option("--log", sym_log_path,
                             "write the per-step CSV log here");

  // ---- existence
  auto* existence_cmd = app.add_subcommand(
      "existence", "zeta-criterion table and divergence verdict");
  std::string ex_density = "r^2";
  int ex_n = 1, ex_m_max = 20;
  std::string ex_mode = "radial";
  existence_cmd->add_option("--density", ex_density,
                            "radial log-density delta(r)");
  existence_cmd->add_option("--n", ex_n, "dimension parameter n");
  existence_cmd->add_option("--m-max", ex_m_max, "largest m");
  existence_cmd->add_option("--mode", ex_mode, "radial | annulus")
      ->check(CLI::IsMember({"radial", "annulus"}));

  // ---- annulus-check
  auto* annulus_cmd = app.add_subcommand(
      "annulus-check", "planar annulus isoperimetric inequality");
  std::string ann_input;
  double ann_r0 = 1.0;
  annulus_cmd->add_option("--input", ann_input, "columnar-set JSON file")
      ->required();
  annulus_cmd->add_option("--r0", ann_r0, "inner radius r0");

  // ---- eigen
  auto* eigen_cmd = app.add_subcommand(
      "eigen", "lowest Dirichlet eigenvalue of the drift operator");
  std::string eig_mask;
  double eig_c = 0.0;
  std::string eig_convention = "paper";
  std::vector<double> eig_interval;
  double eig_disk = 0.0;
  double eig_h = 1.0 / 64.0;
  eigen_cmd->add_option("--mask", eig_mask, "mask JSON file");
  eigen_cmd->add_option("--c", eig_c, "density constant");
  eigen_cmd->add_option("--convention", eig_convention, "paper | weighted")
      ->check(CLI::IsMember({"paper", "weighted"}));
  eigen_cmd->add_option("--interval", eig_interval, "1D domain lo hi")
      ->expected(2);
  eigen_cmd->add_option("--disk", eig_disk, "disk of this radius");
  eigen_cmd->add_option("--h", eig_h, "grid spacing for generated domains");

  // ---- faber-krahn
  auto* fk_cmd = app.add_subcommand(
      "faber-krahn", "compare lambda1 against the equal-volume ball");
  std::string fk_mask;
  double fk_c = 1.0;
  std::string fk_convention = "paper";
  std::vector<double> fk_rect;
  double fk_disk_r = 0.0, fk_disk_cx = 0.0, fk_disk_cy = 0.0;
  double fk_h = 1.0 / 64.0;
  fk_cmd->add_option("--mask", fk_mask, "mask JSON file");
  fk_cmd->add_option("--c", fk_c, "density constant");
  fk_cmd->add_option("--convention", fk_convention, "paper | weighted")
      ->check(CLI::IsMember({"paper", "weighted"}));
  fk_cmd->add_option("--rect", fk_rect, "rectangle x0 x1 y0 y1")->expected(4);
  fk_cmd->add_option("--disk", fk_disk_r, "disk radius");
  fk_cmd->add_option("--cx", fk_disk_cx, "disk center x");
  fk_cmd->add_option("--cy", fk_disk_cy, "disk center y");
  fk_cmd->add_option("--h", fk_h, "grid spacing");

  // ---- oracle
  auto* oracle_cmd = app.add_subcommand(
      "oracle", "brute-force isoperimetric search (independent of the "
                "theorem-based solver)");
  DensityArgs oracle_density;
  oracle_density.attach(oracle_cmd);
  double oracle_volume = 1.0;
  int oracle_grid = 384, oracle_components = 2;
  std::vector<double> oracle_window;
  oracle_cmd->add_option("--volume", oracle_volume, "weighted volume V");
  oracle_cmd->add_option("--grid", oracle_grid, "grid points");
  oracle_cmd->add_option("--max-components", oracle_components,
                         "largest number of interval components");
  oracle_cmd->add_option("--window", oracle_window, "window lo hi")
      ->expected(2);

  CLI11_PARSE(app, argc, argv);

  try {
    if (profile_cmd->parsed()) {
      const DensityModel density = profile_density.build();
      if (!sweep.empty()) {
        const int count = static_cast<int>(sweep[2]);
        std::ostringstream csv;
        csv << "V,infimum_perimeter,attained,kind\n";
        for (int i = 0; i < count; ++i) {
          const double v =
              sweep[0] + (sweep[1] - sweep[0]) * i / std::max(1, count - 1);
          const ProfileResult r = dispatch_profile(density, v, free_boundary);
          csv << v << ',' << r.infimum_perimeter << ','
              << (r.attained ? "true" : "false") << ','
              << (r.minimizers.empty() ? std::string("none")
                                       : to_string(r.minimizers[0].kind))
              << '\n';
        }
        write_output(output, csv.str());
      } else {
        const ProfileResult r =
            dispatch_profile(density, volume, free_boundary);
        write_output(output, profile_json(r).dump(2));
      }
    } else if (classify_cmd->parsed()) {
      const DensityModel density = classify_density.build();
      const ShapeReport r =
          classify_shape(density, cls_lo, cls_hi, cls_samples);
      json j;
      j["schema"] = kSchema;
      j["shape"] = to_string(r.shape);
      if (r.change_point)
        j["change_point"] = *r.change_point;
      else
        j["change_point"] = nullptr;
      write_output(output, j.dump(2));
    } else if (stability_cmd->parsed()) {
      DensityArgs args;
      args.params = delta_params;
      const RadialDensity density(
          std::make_shared<ExprLogDensity>(expr::parse(delta_expr),
                                           args.bindings()),
          n_dim);
      const StabilityReport r = ball_stability(density, radius, modes);
      json j;
      j["schema"] = kSchema;
      j["radius"] = r.radius;
      j["delta_second"] = r.delta_second;
      j["stable"] = r.stable;
      json ms = json::array();
      for (auto [l, value] : r.mode_values)
        ms.push_back(json{{"l", l}, {"value", value}});
      j["mode_values"] = std::move(ms);
      write_output(output, j.dump(2));
    } else if (meancurv_cmd->parsed()) {
      const RadialDensity density = RadialDensity::from_expression(
          mc_delta, mc_n);
      json j;
      j["schema"] = kSchema;
      if (sphere_opt->count()) {
        j["surface"] = "sphere";
        j["r"] = mc_sphere_r;
        j["H_psi"] = mean_curvature_sphere(density, mc_sphere_r);
      } else if (plane_opt->count()) {
        std::vector<double> point;
        std::stringstream ss(mc_point);
        std::string item;
        while (std::getline(ss, item, ',')) point.push_back(std::stod(item));
        if (point.empty())
          throw std::invalid_argument("--hyperplane needs --point");
        j["surface"] = "hyperplane";
        j["c"] = mc_plane_c;
        j["H_psi"] = mean_curvature_hyperplane(density, mc_plane_c, point);
      } else {
        throw std::invalid_argument("give --sphere R or --hyperplane C");
      }
      write_output(output, j.dump(2));
    } else if (firstvar_cmd->parsed()) {
      const RadialDensity density =
          RadialDensity::from_expression(fv_delta, fv_n);
      const FirstVariationResult r =
          fv_hyperplane
              ? first_variation_hyperplane(density, fv_c, fv_h)
              : first_variation_sphere(density, fv_r,
                                       fv_u == "const"
                                           ? FlowVelocity::Constant
                                           : FlowVelocity::FirstHarmonic,
                                       fv_h);
      json j;
      j["schema"] = kSchema;
      j["dV_fd"] = r.dV_fd;
      j["dV_analytic"] = r.dV_analytic;
      j["dP_fd"] = r.dP_fd;
      j["dP_analytic"] = r.dP_analytic;
      j["residual_v"] = r.residual_v;
      j["residual_p"] = r.residual_p;
      write_output(output, j.dump(2));
    } else if (symmetrize_cmd->parsed()) {
      ColumnarSet set =
          build_set_from_args(sym_input, sym_disks, sym_rects, sym_random,
                              seed, sym_h, sym_c, sym_window);
      if (sym_tol < 0.0) sym_tol = 0.25 * set.h;
      if (sym_hsiang) {
        const HsiangResult r = hsiang_reflect(set, sym_hyperplane);
        json j;
        j["schema"] = kSchema;
        j["kept_positive"] = r.kept_positive;
        j["volume_positive"] = r.volume_positive;
        j["volume_negative"] = r.volume_negative;
        j["relative_perimeter_positive"] = r.relative_perimeter_positive;
        j["relative_perimeter_negative"] = r.relative_perimeter_negative;
        j["set"] = json::parse(to_json(r.set));
        write_output(output, j.dump(2));
      } else if (sym_converge) {
        const ConvergenceResult r =
            converge_to_ball(set, sym_max_steps, sym_tol);
        std::ostringstream csv;
        csv << "step,angle,volume_before,volume_after,perimeter_before,"
               "perimeter_after,symdiff_previous,symdiff_ball\n";
        for (const SymmetrizationStep& s : r.log)
          csv << s.step << ',' << s.angle << ',' << s.volume_before << ','
              << s.volume_after << ',' << s.perimeter_before << ','
              << s.perimeter_after << ',' << s.symdiff_previous << ','
              << s.symdiff_ball << '\n';
        if (!sym_log_path.empty()) write_output(sym_log_path, csv.str());
        json j;
        j["schema"] = kSchema;
        j["converged"] = r.converged;
        j["steps"] = static_cast<int>(r.log.size());
        j["ball_radius"] = r.ball_radius;
        j["final_symdiff_ball"] =
            r.log.empty() ? 0.0 : r.log.back().symdiff_ball;
        if (sym_log_path.empty()) j["log_csv"] = csv.str();
        j["set"] = json::parse(to_json(r.final_set));
        write_output(output, j.dump(2));
      } else {
        const ColumnarSet out_set = steiner_symmetrize(set, sym_axis);
        write_output(output, to_json(out_set));
      }
    } else if (existence_cmd->parsed()) {
      // --density carries f; the profile is delta = log f.
      expr::Ast f_ast = expr::parse(ex_density);
      expr::Ast delta_ast;
      delta_ast.root = expr::make_unary(expr::UnaryOp::Log, f_ast.root);
      delta_ast.variable = f_ast.variable;
      delta_ast.parameters = f_ast.parameters;
      const RadialDensity density(
          std::make_shared<ExprLogDensity>(std::move(delta_ast)), ex_n);
      const ZetaSequence seq = zeta_sequence(
          density, ex_m_max,
          ex_mode == "radial" ? ZetaMode::RadialFormula
                              : ZetaMode::AnnulusMinMax);
      const DivergenceVerdict verdict =
          divergence_verdict(seq, ex_m_max + 1);
      std::ostringstream csv;
      csv << "m,log_zeta\n";
      for (auto [m, v] : seq.log_values) csv << m << ',' << v << '\n';
      csv << "# verdict (diagnostic): " << to_string(verdict) << '\n';
      write_output(output, csv.str());
    } else if (annulus_cmd->parsed()) {
      std::ifstream in(ann_input);
      if (!in) throw std::invalid_argument("cannot open " + ann_input);
      std::stringstream buffer;
      buffer << in.rdbuf();
      const ColumnarSet set = columnar_from_json(buffer.str());
      const AnnulusCheck r = planar_annulus_inequality_check(set, ann_r0);
      json j;
      j["schema"] = kSchema;
      j["perimeter"] = r.perimeter;
      j["volume"] = r.volume;
      j["holds"] = r.holds;
      j["in_scope"] = r.in_scope;
      write_output(output, j.dump(2));
    } else if (eigen_cmd->parsed()) {
      GridDomain domain;
      if (!eig_mask.empty()) {
        std::ifstream in(eig_mask);
        if (!in) throw std::invalid_argument("cannot open " + eig_mask);
        std::stringstream buffer;
        buffer << in.rdbuf();
        domain = grid_domain_from_json(buffer.str());
      } else if (!eig_interval.empty()) {
        domain = make_interval_domain(eig_interval[0], eig_interval[1], eig_h);
      } else if (eig_disk > 0.0) {
        domain = make_disk_domain(eig_disk, eig_h);
      } else {
        throw std::invalid_argument("give --mask, --interval, or --disk");
      }
      const SignConvention convention = eig_convention == "paper"
                                            ? SignConvention::Paper
                                            : SignConvention::WeightedLaplacian;
      const EigenResult r = lambda1(domain, eig_c, convention);
      json j;
      j["schema"] = kSchema;
      j["lambda1"] = r.lambda1;
      j["iterations"] = r.iterations;
      j["residual"] = r.residual;
      j["h"] = r.h;
      j["convention"] = eig_convention;
      write_output(output, j.dump(2));
    } else if (fk_cmd->parsed()) {
      GridDomain domain;
      if (!fk_mask.empty()) {
        std::ifstream in(fk_mask);
        if (!in) throw std::invalid_argument("cannot open " + fk_mask);
        std::stringstream buffer;
        buffer << in.rdbuf();
        domain = grid_domain_from_json(buffer.str());
      } else if (!fk_rect.empty()) {
        domain = make_rect_domain(fk_rect[0], fk_rect[1], fk_rect[2],
                                  fk_rect[3], fk_h);
      } else if (fk_disk_r > 0.0) {
        domain = make_disk_domain_at(fk_disk_cx, fk_disk_cy, fk_disk_r, fk_h);
      } else {
        throw std::invalid_argument("give --mask, --rect, or --disk");
      }
      const SignConvention convention = fk_convention == "paper"
                                            ? SignConvention::Paper
                                            : SignConvention::WeightedLaplacian;
      const FaberKrahnResult r = faber_krahn_compare(domain, fk_c, convention);
      json j;
      j["schema"] = kSchema;
      j["lambda_domain"] = r.lambda_domain;
      j["lambda_ball"] = r.lambda_ball;
      j["ball_radius"] = r.ball_radius;
      j["holds"] = r.holds;
      j["equality"] = r.equality;
      j["tolerance"] = r.tolerance;
      j["convention"] = fk_convention;
      write_output(output, j.dump(2));
    } else if (oracle_cmd->parsed()) {
      const DensityModel density = oracle_density.build();
      BruteForceOptions opts;
      opts.grid_points = oracle_grid;
      opts.max_components = oracle_components;
      if (!oracle_window.empty())
        opts.window = std::array<double, 2>{oracle_window[0],
                                            oracle_window[1]};
      const BruteForceResult r =
          brute_force_profile(density, oracle_volume, opts);
      json j;
      j["schema"] = kSchema;
      j["perimeter"] = r.perimeter;
      j["volume"] = r.volume;
      j["volume_tolerance"] = r.volume_tolerance;
      j["window"] = {r.window[0], r.window[1]};
      j["cell_width"] = r.cell_width;
      j["truncated"] = r.truncated;
      json region = json::array();
      auto encode = [](double v) -> json {
        if (v == kInf) return "+inf";
        if (v == -kInf) return "-inf";
        return v;
      };
      for (const Interval& iv : r.region.intervals())
        region.push_back({encode(iv.a), encode(iv.b)});
      j["region"] = std::move(region);
      write_output(output, j.dump(2));
    }
  } catch (const NumericError& e) {
    std::cerr << "numeric error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
