#include "annulus/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "annulus/extremal.hpp"
#include "annulus/probes.hpp"

namespace annulus::cli {

using nlohmann::json;

namespace {

[[noreturn]] void usage(const std::string& msg) { throw Error(ErrorCode::UsageError, msg); }

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t");
  const auto e = s.find_last_not_of(" \t");
  return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

bool parse_real(const std::string& s, double& v) {
  if (s.empty()) return false;
  char* end = nullptr;
  v = std::strtod(s.c_str(), &end);
  return end == s.c_str() + s.size() && std::isfinite(v);
}

json jc(cplx z) { return {{"re", z.real()}, {"im", z.imag()}}; }

json jc_list(const std::vector<cplx>& v) {
  json a = json::array();
  for (cplx z : v) a.push_back(jc(z));
  return a;
}

json inner_report_json(const InnerReport& r) {
  return {{"c1", r.c1}, {"c2", r.c2}, {"dev1", r.dev1}, {"dev2", r.dev2}, {"passed", r.passed}};
}

json divisor_report_json(const DivisorReport& d) {
  json ladder = json::array();
  for (auto [n, v] : d.per_truncation) ladder.push_back({{"N", n}, {"estimate", v}});
  return {{"constant_estimate", d.constant_estimate},
          {"per_truncation", ladder},
          {"ring_zero_count", d.ring_zero_count},
          {"extraneous_zero", d.extraneous_zero},
          {"zero_locations_of_kernel", jc_list(d.zero_locations_of_kernel)},
          {"notes", d.notes}};
}

json solution_json(const BiharmonicSolution& s) {
  return {{"n_rho", s.grid.radii.size()},
          {"n_theta", s.grid.angles.size()},
          {"pole_node", jc(s.pole)},
          {"min_value", s.min_value},
          {"max_value", s.max_value},
          {"residual", s.residual},
          {"sign_change_cell_count", s.sign_change_cells.size()},
          {"sign_change_locations", jc_list(s.sign_change_locations)}};
}

void write_grid_csv(std::ostream& os, const std::vector<double>& radii, const std::vector<double>& angles,
                    const std::function<cplx(double, double)>& value) {
  os << "rho,theta,re,im\n";
  os.precision(17);
  for (double rho : radii)
    for (double th : angles) {
      const cplx v = value(rho, th);
      os << rho << ',' << th << ',' << v.real() << ',' << v.imag() << '\n';
    }
}

struct Grid {
  std::vector<double> radii, angles;
  std::function<cplx(double, double)> value;
};

Grid function_grid(double r, int n_rho, int n_theta, const AnalyticFn& f) {
  Grid g;
  for (int i = 0; i < n_rho; ++i) g.radii.push_back(r + (1.0 - r) * i / (n_rho - 1));
  for (int j = 0; j < n_theta; ++j) g.angles.push_back(kTwoPi * j / n_theta);
  g.value = [f](double rho, double th) { return f(std::polar(rho, th)); };
  return g;
}

SpaceTag space_tag(const RunConfig& c) {
  try {
    return {parse_space_kind(c.space), {}};
  } catch (const Error&) {
    usage("--space: unknown space '" + c.space + "'");
  }
}

void require(bool ok, const std::string& flag, const std::string& cmd) {
  if (!ok) usage(flag + " is required for '" + cmd + "'");
}

double boundary_max_abs(const std::function<double(cplx)>& f, const AnnulusDomain& d, int m) {
  double worst = 0.0;
  for (const auto& s : boundary_nodes(d, m)) worst = std::max(worst, std::abs(f(s.point)));
  return worst;
}

// Output of one command: scalars plus an optional polar grid.
struct Outcome {
  json results = json::object();
  std::vector<int> ladder;
  std::optional<Grid> grid;
};

using Handler = std::function<void(const RunConfig&, Outcome&)>;

void cmd_green(const RunConfig& c, Outcome& o) {
  require(c.pole.has_value(), "--pole", c.command);
  const AnnulusDomain d = make_annulus(c.r, c.base_point());
  const GreenFunction g = green(d, *c.pole, c.N);
  o.ladder = {c.N};
  auto& R = o.results;
  R["boundary_residual"] = boundary_max_abs([&](cplx z) { return g(z); }, d, c.m);
  R["log_coefficient"] = g.log_coefficient();
  R["conjugate_period"] = kTwoPi * g.log_coefficient();
  const cplx z0 = c.base_point();
  if (std::abs(z0 - *c.pole) > 1e-12) {
    R["value_at_base"] = g(z0);
    R["symmetry_residual"] = std::abs(g(z0) - green(d, z0, c.N)(*c.pole));
  }
  o.grid = function_grid(c.r, c.n_rho, c.n_theta, [g](cplx z) { return cplx(g(z), 0.0); });
}

void cmd_hmeasure(const RunConfig& c, Outcome& o) {
  const AnnulusDomain d = make_annulus(c.r, c.base_point());
  const HarmonicRepresentation w1 = harmonic_measure(d, 1), w2 = harmonic_measure(d, 2);
  const GreenFunction g = green(d, c.base_point(), c.N);
  double mass[2] = {0.0, 0.0};
  for (const auto& s : boundary_nodes(d, c.m)) mass[s.component - 1] -= s.weight * normal_derivative(g, s) / kTwoPi;
  double sum_dev = 0.0;
  for (int i = 0; i < 32; ++i)
    for (int j = 0; j < 32; ++j) {
      const cplx z = std::polar(c.r + (i + 0.5) * (1.0 - c.r) / 32, kTwoPi * j / 32);
      sum_dev = std::max(sum_dev, std::abs(w1(z) + w2(z) - 1.0));
    }
  o.ladder = {c.N};
  auto& R = o.results;
  R["omega1_at_base"] = w1(c.base_point());
  R["omega2_at_base"] = w2(c.base_point());
  R["mass_outer"] = mass[0];
  R["mass_inner"] = mass[1];
  R["total_mass"] = mass[0] + mass[1];
  R["mass_residual"] = std::max(std::abs(mass[0] - w1(c.base_point())), std::abs(mass[1] - w2(c.base_point())));
  R["partition_of_unity_residual"] = sum_dev;
  o.grid = function_grid(c.r, c.n_rho, c.n_theta, [w1](cplx z) { return cplx(w1(z), 0.0); });
}

void describe_inner(const InnerFunctionSpec& f, const RunConfig& c, json& R) {
  const auto [c1, c2] = f.boundary_moduli();
  R["lambda"] = f.lambda();
  R["z_power"] = f.z_power();
  R["boundary_moduli"] = {{"outer", c1}, {"inner", c2}};
  R["period_residual"] = f.period_residual();
  R["verification"] = inner_report_json(verify_inner(f.as_function(), f.domain(), c.m));
  double zr = 0.0;
  for (cplx z : f.zeros()) zr = std::max(zr, std::abs(f(z)));
  R["max_abs_at_zeros"] = zr;
}

void cmd_blaschke(const RunConfig& c, Outcome& o) {
  require(!c.zeros.empty(), "--zeros", c.command);
  const AnnulusDomain d = make_annulus(c.r, c.base_point());
  BlaschkeOptions opt;
  opt.tol = c.tol;
  const BlaschkeResult b = blaschke_product(d, ZeroSet(c.zeros), opt);
  auto& R = o.results;
  R["factors"] = b.factors;
  R["blaschke_sum"] = b.blaschke_sum;
  describe_inner(b.product, c, R);
  o.grid = function_grid(c.r, c.n_rho, c.n_theta, b.product.as_function());
}

void cmd_singular(const RunConfig& c, Outcome& o) {
  require(!c.atoms.empty(), "--atoms", c.command);
  const AnnulusDomain d = make_annulus(c.r, c.base_point());
  const InnerFunctionSpec s = singular_inner(d, {c.atoms});
  describe_inner(s, c, o.results);
  o.grid = function_grid(c.r, c.n_rho, c.n_theta, s.as_function());
}

void cmd_inner_verify(const RunConfig& c, Outcome& o) {
  require(!c.zeros.empty() || !c.atoms.empty(), "--zeros or --atoms", c.command);
  const AnnulusDomain d = make_annulus(c.r, c.base_point());
  const InnerFunctionSpec f = inner_function(d, c.zeros, {c.atoms});
  auto& R = o.results;
  describe_inner(f, c, R);
  R["measured_period"] = f.measured_period();
  if (c.atoms.empty()) {
    // Orthogonality needs a Laurent expansion, so only for functions analytic on the closure.
    LaurentPolynomial L = to_laurent(f.as_function(), d, c.N, std::max(1024, 4 * c.N + 4));
    const double n = std::sqrt(inner_product(L, L, d, {SpaceKind::SmirnovArclength, {}}, std::max(c.m, 4 * c.N + 4)).real());
    L = L * cplx(1.0 / n);
    R["orthogonality_residual"] = check_orthogonality(L, d, 8);
  }
  o.ladder = {c.N};
  o.grid = function_grid(c.r, c.n_rho, c.n_theta, f.as_function());
}

void cmd_kernel(const RunConfig& c, Outcome& o) {
  const AnnulusDomain d = make_annulus(c.r, c.base_point());
  const SpaceTag tag = space_tag(c);
  const KernelEvaluator K = build_kernel(d, tag, c.N, c.m);
  const cplx z0 = c.base_point();
  auto& R = o.results;
  R["space"] = std::string(to_string(tag.kind));
  R["form"] = K.form() == KernelForm::DiagonalSeries ? "diagonal_series" : "gram_inverse";
  R["condition"] = K.condition();
  R["diagonal_value"] = K(z0, z0).real();
  double worst = 0.0;
  for (int n : {-2, -1, 0, 1, 2}) worst = std::max(worst, reproduce_check(K, LaurentPolynomial::monomial(n), z0).residual);
  R["reproduction_residual"] = worst;
  o.ladder = {c.N};
  o.grid = function_grid(c.r, c.n_rho, c.n_theta, K.section_fn(z0));
}

void cmd_kernel_zeros(const RunConfig& c, Outcome& o) {
  const AnnulusDomain d = make_annulus(c.r, c.base_point());
  const SpaceTag tag = space_tag(c);
  const KernelZeroStudy st = kernel_zero_study(d, tag, c.base_point(), c.N, std::max(256, c.N), c.m, c.tol);
  auto& R = o.results;
  R["space"] = std::string(to_string(tag.kind));
  R["count"] = st.zeros.contour_count;
  R["locations"] = jc_list(st.zeros.locations);
  R["location_residual"] = st.zeros.residual;
  R["truncation"] = st.truncation;
  R["location_change"] = st.location_change;
  R["stable"] = st.stable;
  json ladder = json::array();
  for (auto [n, k] : st.ladder) {
    ladder.push_back({{"N", n}, {"count", k}});
    o.ladder.push_back(n);
  }
  R["ladder"] = ladder;
  if (!st.stable) throw Error(ErrorCode::ConvergenceFail, "zero locations did not settle within --tol");
}

void cmd_extremal(const RunConfig& c, Outcome& o) {
  const AnnulusDomain d = make_annulus(c.r, c.base_point());
  const ExtremalProblem p{d, space_tag(c), c.base_point(), c.zeros, c.N};
  const int m = std::max(c.m, 4 * c.N + 4);
  const LaurentPolynomial G = solve_extremal(p, m);
  const LaurentPolynomial F = solve_extremal_sup(p, m);
  const auto measure = space_measure(d, p.space, m);
  auto& R = o.results;
  R["space"] = std::string(to_string(p.space.kind));
  const double gn = norm([&](cplx z) { return G(z); }, measure);
  R["norm"] = gn;
  R["value_at_base"] = jc(G(p.base));
  double zr = 0.0;
  for (cplx z : p.zeros) zr = std::max(zr, std::abs(G(z)));
  R["max_abs_at_zeros"] = zr;
  const cplx fb = F(p.base);
  double eq = 0.0;
  for (int n = -c.N; n <= c.N; ++n) eq = std::max(eq, std::abs(F.coeff(n) / fb - G.coeff(n)));
  R["sup_form_deviation"] = eq;
  R["sup_form_value"] = fb.real();
  if (p.zeros.size() == 1) R["kernel_identity_deviation"] = extremal_identity_check(p, m);
  if (p.space.kind == SpaceKind::HardyHarmonicMeasure) R["reproduction_residual"] = repro_fact_check(G, p, m);
  o.ladder = {c.N};
  o.grid = function_grid(c.r, c.n_rho, c.n_theta, [G](cplx z) { return G(z); });
}

void cmd_candidate_divisor(const RunConfig& c, Outcome& o) {
  require(c.z1.has_value(), "--z1", c.command);
  const AnnulusDomain d = make_annulus(c.r, c.base_point());
  const CandidateDivisor cd = candidate_divisor(d, *c.z1, c.N, c.m);
  auto& R = o.results;
  R["kernel_zero"] = jc(cd.kernel_zero);
  R["truncation"] = cd.truncation;
  const int count = count_zeros(cd.G, full_ring(d));
  R["ring_zero_count"] = count;
  R["zero_locations"] = jc_list(locate_zeros(cd.G, d, count).locations);
  const auto area = area_nodes(c.r, 1.0, c.m);
  const double gn = norm(cd.G, area);
  R["inner_verification"] =
      inner_report_json(verify_inner([&](cplx z) { return cd.G(z) / gn; }, d, c.m));
  o.ladder = {cd.truncation};
  o.grid = function_grid(c.r, c.n_rho, c.n_theta, cd.G);
}

void cmd_qc_divisor(const RunConfig& c, Outcome& o) {
  const AnnulusDomain d = make_annulus(c.r, c.base_point());
  const QcDivisor q = qc_divisor(d, ZeroSet(c.zeros), {c.atoms});
  auto& R = o.results;
  R["C"] = q.C;
  describe_inner(q.G, c, R);
  double lo = INFINITY, hi = 0.0;
  for (const auto& s : boundary_nodes(d, c.m)) {
    // half-step angles keep clear of atoms
    const double a = std::abs(q.G(s.point * std::polar(1.0, std::numbers::pi / c.m)));
    lo = std::min(lo, a);
    hi = std::max(hi, a);
  }
  R["boundary_modulus_min"] = lo;
  R["boundary_modulus_max"] = hi;
  R["within_bounds"] = lo >= 1.0 - 1e-7 && hi <= q.C + 1e-7;
  const DivisionReport dr = division_bound_check(q.G, q.C, d, 100, c.seed, 8, c.m);
  R["division"] = {{"trials", dr.trials},
                   {"seed", c.seed},
                   {"max_ratio", dr.max_ratio},
                   {"min_ratio", dr.min_ratio},
                   {"within_bounds", dr.within_bounds}};
  o.grid = function_grid(c.r, c.n_rho, c.n_theta, q.G.as_function());
}

void cmd_qc_estimate(const RunConfig& c, Outcome& o) {
  require(c.z1.has_value(), "--z1", c.command);
  const AnnulusDomain d = make_annulus(c.r, c.base_point());
  const std::vector<int> ladder{8, 16, 24, 32};
  const CandidateDivisor cd = candidate_divisor(d, *c.z1, c.N, c.m);
  auto& R = o.results;
  R["kernel_zero"] = jc(cd.kernel_zero);
  R["kernel_truncation"] = cd.truncation;
  R["candidate"] = divisor_report_json(quasicontract_estimate(cd.G, *c.z1, d, ladder, c.m));
  R["control_undivided"] = divisor_report_json(quasicontract_estimate(cd.undivided, *c.z1, d, ladder, c.m));
  o.ladder = ladder;
}

void cmd_schottky_fit(const RunConfig& c, Outcome& o) {
  const AnnulusDomain d = make_annulus(c.r, c.base_point());
  const ExtremalProblem p{d, {SpaceKind::HardyHarmonicMeasure, {}}, c.base_point(), c.zeros, c.N};
  const int m = std::max(c.m, 4 * c.N + 4);
  const LaurentPolynomial G = solve_extremal(p, m);
  const double gn = norm([&](cplx z) { return G(z); }, space_measure(d, p.space, m));
  const AnalyticFn f = [G, gn](cplx z) { return G(z) / gn; };
  const SchottkyFit fit = schottky_fit(f, d, m);
  auto& R = o.results;
  R["lambda1"] = fit.lambda1;
  R["residual"] = fit.residual;
  const InnerReport ir = verify_inner(f, d, c.m);
  R["inner_verification"] = inner_report_json(ir);
  R["relative_modulus_deviation"] = std::max(ir.dev1 / ir.c1, ir.dev2 / ir.c2);
  o.ladder = {c.N};
  o.grid = function_grid(c.r, c.n_rho, c.n_theta, f);
}

void cmd_decomposition(const RunConfig& c, Outcome& o) {
  const AnnulusDomain d = make_annulus(c.r, c.base_point());
  const ExtremalProblem p{d, {SpaceKind::BergmanArea, {}}, c.base_point(), c.zeros, c.N};
  const LaurentPolynomial G = solve_extremal(p, std::max(c.m, 4 * c.N + 4));
  const DecompositionFit fit = bergman_decomposition_residual([G](cplx z) { return G(z); }, d, c.base_point(), c.m);
  auto& R = o.results;
  R["lambda1"] = fit.lambda1;
  R["residual"] = fit.residual;
  R["projection_mean"] = fit.projection_mean;
  R["defect_constant"] = defect_constant(d);
  o.ladder = {c.N};
}

void cmd_biharmonic(const RunConfig& c, Outcome& o) {
  require(c.pole.has_value(), "--pole", c.command);
  const double r = c.disk ? 0.0 : c.r;
  if (!c.disk) make_annulus(c.r, c.base_point());  // geometry validation only
  const RefinementReport rep = biharmonic_refinement(r, *c.pole, c.n_rho, c.n_theta);
  auto& R = o.results;
  R["disk"] = c.disk;
  R["coarse"] = solution_json(rep.coarse);
  R["fine"] = solution_json(rep.fine);
  R["min_value"] = rep.coarse.min_value;
  R["min_over_max"] = rep.coarse.min_value / rep.coarse.max_value;
  R["min_value_change"] = rep.min_value_change;
  R["resolution_warning"] = rep.resolution_warning;
  R["sign_changes_stable"] = rep.sign_changes_stable;
  if (rep.resolution_warning) R["warning"] = "RESOLUTION_WARNING: min_value moved by more than 10% under grid doubling";
  o.ladder = {c.n_rho, 2 * c.n_rho};
  const PolarGrid grid = rep.coarse.grid;
  Grid g{grid.radii, grid.angles, {}};
  const double dt = kTwoPi / static_cast<double>(grid.angles.size());
  g.value = [grid, dt](double rho, double th) {
    std::size_t i = 0;
    while (i + 1 < grid.radii.size() && grid.radii[i] != rho) ++i;
    const auto j = static_cast<Eigen::Index>(std::lround(th / dt)) % grid.values.cols();
    return cplx(grid.values(static_cast<Eigen::Index>(i), j), 0.0);
  };
  o.grid = g;
}

const std::map<std::string, Handler>& handlers() {
  static const std::map<std::string, Handler> h{
      {"green", cmd_green},
      {"hmeasure", cmd_hmeasure},
      {"blaschke", cmd_blaschke},
      {"singular", cmd_singular},
      {"inner-verify", cmd_inner_verify},
      {"kernel", cmd_kernel},
      {"kernel-zeros", cmd_kernel_zeros},
      {"extremal", cmd_extremal},
      {"candidate-divisor", cmd_candidate_divisor},
      {"qc-divisor", cmd_qc_divisor},
      {"qc-estimate", cmd_qc_estimate},
      {"schottky-fit", cmd_schottky_fit},
      {"decomposition", cmd_decomposition},
      {"biharmonic", cmd_biharmonic},
  };
  return h;
}

json config_json(const RunConfig& c) {
  json atoms = json::array();
  for (const auto& a : c.atoms) atoms.push_back({{"point", jc(a.point)}, {"mass", a.mass}});
  json p = {{"r", c.disk ? 0.0 : c.r}, {"base", jc(c.base_point())}, {"zeros", jc_list(c.zeros)},
            {"atoms", atoms},           {"N", c.N},                     {"m", c.m},
            {"tol", c.tol},             {"format", c.format},           {"space", c.space},
            {"seed", c.seed},           {"disk", c.disk},               {"n_rho", c.n_rho},
            {"n_theta", c.n_theta}};
  if (c.pole) p["pole"] = jc(*c.pole);
  if (c.z1) p["z1"] = jc(*c.z1);
  return p;
}

// JSON config values become flag strings so both sources share one parser.
std::string json_to_flag(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number()) {
    std::ostringstream os;
    os.precision(17);
    if (v.is_number_integer()) os << v.get<long long>();
    else os << v.get<double>();
    return os.str();
  }
  if (v.is_array()) {
    std::string s;
    for (const auto& e : v) s += (s.empty() ? "" : ",") + json_to_flag(e);
    return s;
  }
  usage("--config: unsupported value " + v.dump());
}

}  // namespace

const std::vector<std::string>& commands() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& [k, h] : handlers()) v.push_back(k);
    return v;
  }();
  return names;
}

int exit_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::UsageError:
      return 2;
    case ErrorCode::RejectGeometry:
    case ErrorCode::RejectArgument:
      return 3;
    default:
      return 4;
  }
}

cplx parse_complex(const std::string& text) {
  const std::string s = trim(text);
  const std::string angle_sign = "∠";
  std::size_t at = s.find(angle_sign);
  std::size_t skip = angle_sign.size();
  if (at == std::string::npos) {
    at = s.find('@');
    skip = 1;
  }
  double a = 0.0, b = 0.0;
  if (at != std::string::npos) {
    if (!parse_real(s.substr(0, at), a) || !parse_real(s.substr(at + skip), b))
      usage("malformed polar literal '" + text + "'");
    return std::polar(a, b);
  }
  if (!s.empty() && (s.back() == 'i' || s.back() == 'j')) {
    const std::string body = s.substr(0, s.size() - 1);
    // split at the last sign that is not part of an exponent
    std::size_t k = std::string::npos;
    for (std::size_t i = body.size(); i-- > 1;)
      if ((body[i] == '+' || body[i] == '-') && body[i - 1] != 'e' && body[i - 1] != 'E') {
        k = i;
        break;
      }
    std::string re = k == std::string::npos ? "" : body.substr(0, k);
    std::string im = k == std::string::npos ? body : body.substr(k);
    if (im.empty() || im == "+") im = "1";
    if (im == "-") im = "-1";
    if ((!re.empty() && !parse_real(re, a)) || !parse_real(im, b)) usage("malformed complex literal '" + text + "'");
    return {a, b};
  }
  if (!parse_real(s, a)) usage("malformed complex literal '" + text + "'");
  return {a, 0.0};
}

std::vector<cplx> parse_complex_list(const std::string& text) {
  std::vector<cplx> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!trim(item).empty()) out.push_back(parse_complex(item));
  return out;
}

std::vector<SingularAtom> parse_atoms(const std::string& text) {
  std::vector<SingularAtom> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (trim(item).empty()) continue;
    const auto colon = item.rfind(':');
    double mass = 0.0;
    if (colon == std::string::npos || !parse_real(trim(item.substr(colon + 1)), mass))
      usage("--atoms: expected point:mass, got '" + item + "'");
    out.push_back({parse_complex(item.substr(0, colon)), mass});
  }
  return out;
}

RunConfig parse_config(int argc, const char* const* argv) {
  CLI::App app{"Extremal problems, kernels and inner functions on the annulus r < |z| < 1"};
  std::map<std::string, std::string> v;
  const std::vector<std::pair<std::string, std::string>> flags{
      {"--r", "inner radius"},
      {"--base", "base point z0 (default (1+r)/2)"},
      {"--pole", "pole of the Green's function or biharmonic load"},
      {"--zeros", "comma-separated zeros"},
      {"--atoms", "comma-separated boundary atoms point:mass"},
      {"--N", "Laurent truncation (default 64)"},
      {"--m", "quadrature nodes per circle (default 512)"},
      {"--tol", "tolerance (default 1e-8)"},
      {"--out", "output path (default stdout)"},
      {"--format", "json or csv"},
      {"--space", "smirnov | hardy | bergman"},
      {"--seed", "random seed (default 0)"},
      {"--config", "JSON file of flag values; flags override it"},
      {"--z1", "prescribed zero for divisor commands"},
      {"--n-rho", "radial grid points (default 64)"},
      {"--n-theta", "angular grid points (default 64)"},
      {"--grid", "CSV path for a polar grid of the result"},
  };
  std::string command;
  bool disk = false;
  app.add_option("command", command, "one of: green hmeasure blaschke singular inner-verify kernel kernel-zeros "
                                     "extremal candidate-divisor qc-divisor qc-estimate schottky-fit decomposition biharmonic");
  for (const auto& [flag, help] : flags) app.add_option(flag, v[flag], help);
  app.add_flag("--disk", disk, "unit disk grid (biharmonic)");
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    throw;
  } catch (const CLI::ParseError& e) {
    usage(e.what());
  }

  auto given = [&](const std::string& flag) { return app.count(flag) > 0; };
  if (given("--config")) {
    std::ifstream in(v["--config"]);
    if (!in) usage("--config: cannot read '" + v["--config"] + "'");
    json j;
    try {
      in >> j;
    } catch (const json::exception& e) {
      usage(std::string("--config: ") + e.what());
    }
    if (!j.is_object()) usage("--config: expected a JSON object");
    for (const auto& [key, val] : j.items()) {
      std::string flag = "--" + key;
      std::replace(flag.begin() + 2, flag.end(), '_', '-');
      if (key == "command") {
        if (command.empty()) command = json_to_flag(val);
      } else if (key == "disk") {
        if (!given("--disk")) disk = val.is_boolean() ? val.get<bool>() : json_to_flag(val) == "true";
      } else if (!v.count(flag) || flag == "--config") {
        usage("--config: unknown key '" + key + "'");
      } else if (!given(flag)) {
        v[flag] = json_to_flag(val);
      }
    }
  }

  RunConfig c;
  if (command.empty()) usage("missing command");
  if (!handlers().count(command)) usage("unknown command '" + command + "'");
  c.command = command;
  c.disk = disk;
  auto real_flag = [&](const std::string& flag, double& dst) {
    if (v[flag].empty()) return;
    if (!parse_real(trim(v[flag]), dst)) usage(flag + ": expected a real number, got '" + v[flag] + "'");
  };
  auto int_flag = [&](const std::string& flag, int& dst, int lo) {
    if (v[flag].empty()) return;
    double x = 0.0;
    if (!parse_real(trim(v[flag]), x) || x != std::floor(x) || x < lo || x > 1e7)
      usage(flag + ": expected an integer >= " + std::to_string(lo) + ", got '" + v[flag] + "'");
    dst = static_cast<int>(x);
  };
  auto cplx_flag = [&](const std::string& flag, std::optional<cplx>& dst) {
    if (v[flag].empty()) return;
    try {
      dst = parse_complex(v[flag]);
    } catch (const Error& e) {
      usage(flag + ": " + e.what());
    }
  };
  real_flag("--r", c.r);
  real_flag("--tol", c.tol);
  if (!(c.tol > 0.0)) usage("--tol: must be positive");
  cplx_flag("--base", c.base);
  cplx_flag("--pole", c.pole);
  cplx_flag("--z1", c.z1);
  try {
    c.zeros = parse_complex_list(v["--zeros"]);
  } catch (const Error& e) {
    usage(std::string("--zeros: ") + e.what());
  }
  c.atoms = parse_atoms(v["--atoms"]);
  int_flag("--N", c.N, 1);
  int_flag("--m", c.m, 16);
  int_flag("--n-rho", c.n_rho, 2);
  int_flag("--n-theta", c.n_theta, 2);
  if (!v["--seed"].empty()) {
    double s = 0.0;
    if (!parse_real(trim(v["--seed"]), s) || s < 0 || s != std::floor(s)) usage("--seed: expected a non-negative integer");
    c.seed = static_cast<std::uint64_t>(s);
  }
  c.out = v["--out"];
  c.grid = v["--grid"];
  if (!v["--format"].empty()) c.format = v["--format"];
  if (c.format != "json" && c.format != "csv") usage("--format: expected json or csv");
  if (!v["--space"].empty()) c.space = v["--space"];
  (void)space_tag(c);
  if (c.format == "csv" && c.command == "qc-estimate") usage("--format csv: 'qc-estimate' has no grid output");
  if (c.format == "csv" && c.command == "decomposition") usage("--format csv: 'decomposition' has no grid output");
  if (c.disk && c.command != "biharmonic") usage("--disk only applies to 'biharmonic'");
  return c;
}

int run(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  int code = 0;
  json doc;
  doc["command"] = c.command;
  doc["status"] = "ok";
  try {
    handlers().at(c.command)(c, o);
  } catch (const Error& e) {
    code = exit_code(e.code());
    doc["status"] = code == 2 ? "usage_error" : code == 3 ? "rejected" : "unverified";
    doc["error"] = {{"code", std::string(to_string(e.code()))}, {"message", e.what()}};
    err << e.what() << '\n';
  }
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  doc["metadata"] = {{"command", c.command},
                     {"parameters", config_json(c)},
                     {"truncation_ladder", o.ladder},
                     {"tolerances", {{"tol", c.tol}}},
                     {"wall_time_s", wall}};
  doc["results"] = o.results;

  auto write_grid = [&](std::ostream& os) {
    if (o.grid) write_grid_csv(os, o.grid->radii, o.grid->angles, o.grid->value);
  };
  if (!c.grid.empty() && o.grid) {
    std::ofstream g(c.grid);
    if (!g) {
      err << "cannot write grid to " << c.grid << '\n';
      return 2;
    }
    write_grid(g);
    doc["metadata"]["grid_path"] = c.grid;
  }

  const std::string text = doc.dump(2) + "\n";
  if (c.format == "csv") {
    if (c.out.empty()) {
      write_grid(out);
    } else {
      std::ofstream f(c.out);
      std::ofstream j(c.out + ".json");
      if (!f || !j) {
        err << "cannot write " << c.out << '\n';
        return 2;
      }
      write_grid(f);
      j << text;
    }
  } else if (c.out.empty()) {
    out << text;
  } else {
    std::ofstream f(c.out);
    if (!f) {
      err << "cannot write " << c.out << '\n';
      return 2;
    }
    f << text;
  }
  return code;
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig c;
  try {
    c = parse_config(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << "usage: annulus <command> [--r R] [--base Z] [--pole Z] [--zeros Z,...] [--atoms Z:M,...]\n"
           "               [--N 64] [--m 512] [--tol 1e-8] [--space smirnov|hardy|bergman] [--z1 Z]\n"
           "               [--seed 0] [--disk] [--n-rho 64] [--n-theta 64] [--grid PATH]\n"
           "               [--format json|csv] [--out PATH] [--config FILE]\ncommands:";
    for (const auto& name : commands()) out << ' ' << name;
    out << '\n';
    return 0;
  } catch (const Error& e) {
    err << e.what() << '\n';
    return exit_code(e.code());
  }
  return run(c, out, err);
}

}  // namespace annulus::cli
