#include "cli_run.hpp"

#include "manin/cone.hpp"
#include "manin/counting.hpp"
#include "manin/fan.hpp"
#include "manin/fibration.hpp"
#include "manin/fourier.hpp"
#include "manin/heights.hpp"
#include "manin/tauber.hpp"
#include "manin/toric.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>
#include <omp.h>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

namespace manin::cli {

namespace {

using nlohmann::json;

constexpr int kOk = 0;
constexpr int kValidation = 2;
constexpr int kTolerance = 3;
constexpr int kUsage = 64;
constexpr int kBadFan = 65;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Common {
  std::string out;
  std::string format = "json";
  int threads = 0;
};

struct Options {
  Common common;
  std::string fan = "builtin:p1";
  std::string lambda = "rho";
  std::string bounds = "1e3,1e4,1e5,1e6";
  std::string x;
  double pmax = 1e6;
  double s = 2.0;
  double B = 1e6;
  double tol = 1e-4;
  double radius = 200.0;
  double fourier_pmax = 1000;
  std::string oracle = "zeta2";
  double X = 1e5;
  int k = 3;
  double T = 3000.0;
  double panel = 0.5;
  std::vector<double> eps;
  double check_tol = 1e-3;
  int n = 2;
  std::string lambda_fiber = "rho";
  double alpha_base = 2.0;
  std::string section = "x0";
  std::string kind = "all";
  int max_decade = 6;
  int extra_decades = 2;
};

int resolve_threads(int flag) {
  if (flag > 0) return flag;
  if (const char* env = std::getenv("MANIN_TORIC_THREADS")) {
    try {
      int t = std::stoi(env);
      if (t > 0) return t;
    } catch (const std::exception&) {
    }
    throw UsageError("MANIN_TORIC_THREADS must be a positive integer");
  }
  return omp_get_max_threads();
}

std::vector<std::string> split(const std::string& s, char sep = ',') {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep))
    if (!item.empty()) out.push_back(item);
  return out;
}

std::vector<double> parse_doubles(const std::string& s, const char* what) {
  std::vector<double> out;
  for (const auto& t : split(s)) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(t, &used));
      if (used != t.size()) throw std::invalid_argument(t);
    } catch (const std::exception&) {
      throw UsageError(std::string("bad number in ") + what + ": '" + t + "'");
    }
  }
  if (out.empty()) throw UsageError(std::string("empty list for ") + what);
  return out;
}

std::vector<double> parse_lambda(const std::string& s, std::size_t size) {
  if (s == "rho") return std::vector<double>(size, 1.0);
  std::vector<double> v = parse_doubles(s, "--lambda");
  if (v.size() != size)
    throw UsageError("--lambda needs " + std::to_string(size) + " entries");
  for (double x : v)
    if (!(x > 0.0)) throw UsageError("--lambda entries must be positive");
  return v;
}

Fan load_valid_fan(const std::string& spec) {
  Fan fan = load_fan(spec);
  ValidationReport rep = validate_fan(fan);
  if (!rep.ok) {
    std::string msg = "fan '" + spec + "' is not complete and regular:";
    for (const auto& v : rep.violations) msg += " " + v + ";";
    throw ValidationError(msg);
  }
  return fan;
}

json interval_json(const Interval& i) { return {{"value", i.value}, {"lo", i.lo}, {"hi", i.hi}}; }

// key,value rows for objects; nested keys joined with '.'
void flatten(const json& j, const std::string& prefix, std::ostream& os) {
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) flatten(v, prefix.empty() ? k : prefix + "." + k, os);
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], prefix + "." + std::to_string(i), os);
  } else {
    os << prefix << "," << (j.is_string() ? j.get<std::string>() : j.dump()) << "\n";
  }
}

class Sink {
 public:
  explicit Sink(const Common& c) : common_(c) {}

  void emit(const json& j, const std::string& csv = {}) {
    std::ostringstream body;
    if (common_.format == "csv") {
      if (!csv.empty())
        body << csv;
      else
        flatten(j, "", body);
    } else {
      body << j.dump(2) << "\n";
    }
    if (common_.out.empty()) {
      std::cout << body.str();
    } else {
      std::ofstream f(common_.out);
      if (!f) throw UsageError("cannot write '" + common_.out + "'");
      f << body.str();
    }
  }

 private:
  const Common& common_;
};

std::string num(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

// --- subcommands

int cmd_validate(const Options& o, json cfg, Sink& sink) {
  Fan fan = load_fan(o.fan);
  ValidationReport rep = validate_fan(fan);
  json j{{"config", cfg}, {"fan", fan.to_json()}, {"ok", rep.ok}, {"violations", rep.violations}};
  sink.emit(j);
  return rep.ok ? kOk : kValidation;
}

int cmd_constants(const Options& o, json cfg, Sink& sink) {
  Fan fan = load_valid_fan(o.fan);
  LeadingConstant lc = leading_constant(fan, static_cast<std::uint64_t>(o.pmax));
  json j{{"config", cfg},
         {"alpha", to_string(lc.alpha)},
         {"alpha_value", to_double(lc.alpha)},
         {"tau", interval_json(lc.tau)},
         {"theta", lc.theta.value},
         {"theta_lo", lc.theta.lo},
         {"theta_hi", lc.theta.hi},
         {"rank", lc.b},
         {"arch_volume", archimedean_volume(fan)}};
  sink.emit(j);
  return kOk;
}

int cmd_count(const Options& o, json cfg, Sink& sink, int threads) {
  Fan fan = load_valid_fan(o.fan);
  std::vector<double> lambda = parse_lambda(o.lambda, fan.num_rays());
  std::vector<double> bounds = parse_doubles(o.bounds, "--bounds");
  for (double b : bounds)
    if (!(b >= 1.0)) throw UsageError("bounds must be >= 1");
  ExecPolicy exec;
  exec.threads = threads;
  const auto t0 = std::chrono::steady_clock::now();
  CountReport rep = count_N(fan, lambda, bounds, exec, static_cast<std::uint64_t>(o.pmax));
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::cerr << "count: " << rep.nodes << " nodes, " << secs << " s\n";
  std::ostringstream csv;
  csv << "B,N,predicted,ratio\n";
  json rows = json::array();
  for (std::size_t i = 0; i < rep.bounds.size(); ++i) {
    csv << num(rep.bounds[i]) << "," << rep.counts[i] << "," << num(rep.predicted[i]) << ","
        << num(rep.ratio[i]) << "\n";
    rows.push_back({{"B", rep.bounds[i]},
                    {"N", rep.counts[i]},
                    {"predicted", std::isnan(rep.predicted[i]) ? json(nullptr) : json(rep.predicted[i])},
                    {"ratio", std::isnan(rep.ratio[i]) ? json(nullptr) : json(rep.ratio[i])}});
  }
  json j{{"config", cfg}, {"rank", rep.rank}, {"theta", rep.theta}, {"rows", rows}};
  if (rep.fit)
    j["fit"] = {{"a", rep.fit->a},
                {"b", rep.fit->b},
                {"coeffs", rep.fit->coeffs},
                {"leading", rep.fit->leading},
                {"rel_residual", rep.fit->rel_residual},
                {"condition", rep.fit->condition}};
  sink.emit(j, csv.str());
  return kOk;
}

int cmd_height(const Options& o, json cfg, Sink& sink) {
  Fan fan = load_valid_fan(o.fan);
  std::vector<double> lambda = parse_lambda(o.lambda, fan.num_rays());
  std::vector<Rational> x;
  for (const auto& t : split(o.x)) {
    try {
      x.push_back(parse_rational(t));
    } catch (const std::exception&) {
      throw UsageError("bad rational in --x: '" + t + "'");
    }
  }
  if (x.size() != static_cast<std::size_t>(fan.dim()))
    throw UsageError("--x needs " + std::to_string(fan.dim()) + " coordinates");
  for (const auto& q : x)
    if (q == 0) throw UsageError("--x must be a torus point (nonzero coordinates)");
  ValuationProfile prof = valuation_profile(x);
  PLFunction f = PLFunction::real(fan, lambda);
  json local = json::object();
  local["inf"] = local_height(f, Place::infinity(), prof).real();
  for (const auto& [p, v] : prof.val) local[std::to_string(p)] = local_height(f, Place::prime(p), prof).real();
  const double h = global_height_real(f, prof);
  json j{{"config", cfg}, {"height", h}, {"log_height", std::log(h)}, {"local", local}};
  bool integral = true;
  std::vector<long> li;
  for (double l : lambda) {
    integral = integral && l == std::floor(l);
    li.push_back(static_cast<long>(l));
  }
  if (integral) j["exact"] = to_string(global_height_exact(fan, li, prof));
  sink.emit(j);
  return kOk;
}

int cmd_zeta(const Options& o, json cfg, Sink& sink, int threads) {
  Fan fan = load_valid_fan(o.fan);
  std::vector<std::complex<double>> lambda;
  if (o.lambda == "rho") {
    lambda.assign(fan.num_rays(), o.s);
  } else {
    for (double l : parse_lambda(o.lambda, fan.num_rays())) lambda.emplace_back(l);
  }
  for (const auto& l : lambda)
    if (!(l.real() > 1.0)) throw UsageError("zeta needs Re lambda_j > 1");
  ExecPolicy exec;
  exec.threads = threads;
  ZetaPartial z = zeta_partial(fan, lambda, o.B, exec);
  json j{{"config", cfg},
         {"value", {z.value.real(), z.value.imag()}},
         {"points", z.points},
         {"tail", z.tail}};
  sink.emit(j);
  return kOk;
}

bool is_p1xp1(const Fan& fan) {
  if (fan.dim() != 2 || fan.num_rays() != 4) return false;
  std::set<std::vector<long>> rays(fan.rays().begin(), fan.rays().end());
  return rays == std::set<std::vector<long>>{{1, 0}, {-1, 0}, {0, 1}, {0, -1}} &&
         fan.max_cones().size() == 4;
}

int cmd_poisson(const Options& o, json cfg, Sink& sink, int threads) {
  Fan fan = load_valid_fan(o.fan);
  PoissonOptions opt;
  opt.bound = o.B;
  opt.radius = o.radius;
  opt.tol = o.tol;
  opt.pmax = static_cast<std::uint64_t>(o.fourier_pmax);
  opt.threads = threads;
  if (!(opt.tol > 0.0) || !(opt.radius > 0.0)) throw UsageError("--tol and --radius must be positive");
  PoissonReport rep;
  std::string route;
  if (fan.dim() == 1) {
    rep = poisson_check(fan, o.s, opt);
    route = "direct";
  } else if (is_p1xp1(fan)) {
    const Fan p1 = builtin_fan("p1");
    rep = poisson_check_product(p1, p1, o.s, opt);
    route = "factorization";
  } else {
    throw ValidationError("poisson-check handles one-dimensional fans and P1 x P1");
  }
  json j{{"config", cfg},
         {"route", route},
         {"s", rep.s},
         {"direct", rep.direct},
         {"direct_partial", rep.direct_partial},
         {"direct_tail", rep.direct_tail},
         {"fourier", rep.fourier},
         {"fourier_imag", rep.fourier_imag},
         {"quad_error", rep.quad_error},
         {"factorization_error", rep.factorization_error},
         {"rel_diff", rep.rel_diff},
         {"passed", rep.passed}};
  sink.emit(j);
  return rep.passed ? kOk : kTolerance;
}

int cmd_tauber(const Options& o, json cfg, Sink& sink) {
  DirichletOracle f;
  try {
    f = DirichletOracle::by_name(o.oracle);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  if (o.k < 1 || o.k > 6) throw UsageError("--k must be in 1..6");
  if (!(o.X >= 2.0)) throw UsageError("--X must be >= 2");
  PerronOptions opt;
  opt.T = o.T;
  opt.panel = o.panel;
  PerronResult pk = perron_phi_k(f, o.X, o.k, opt);
  std::vector<double> eps =
      o.eps.empty() ? balanced_eps(f, o.k, o.X, pk.value, pk.hi() - pk.lo()) : o.eps;
  if (eps.size() != static_cast<std::size_t>(o.k)) throw UsageError("--eps needs k entries");
  cfg["eps"] = eps;
  DescendResult d = descend_to_count(f, o.k, o.X, eps, opt);
  const double exact = f.count(o.X);
  json j{{"config", cfg},
         {"oracle", f.name},
         {"X", o.X},
         {"k", o.k},
         {"phi_k", {{"value", pk.value}, {"lo", pk.lo()}, {"hi", pk.hi()},
                    {"quad_error", pk.quad_error}, {"tail_bound", pk.tail_bound},
                    {"direct", phi_direct(f, o.X, o.k)}}},
         {"brackets", {{"eta", d.eta}, {"lo", d.bracket.lo}, {"hi", d.bracket.hi},
                       {"perron_points", d.perron_points}}},
         {"N", exact}};
  bool ok = d.bracket.contains(exact);
  j["N_in_bracket"] = ok;
  if (f.pole) {
    const double pred = predict(*f.pole, o.X);
    j["predict"] = pred;
    j["residual"] = exact - pred;
    ResidueCheck rc = residue_consistency(f, o.X, o.k, o.T, o.check_tol);
    ContourCheck cc = contour_independence(f, o.X, o.k, o.T, o.check_tol);
    j["residue_check"] = {{"rel_mismatch", rc.rel_mismatch}, {"passed", rc.passed}};
    j["contour_check"] = {{"diff", cc.diff}, {"allowance", cc.allowance}, {"passed", cc.passed}};
    ok = ok && rc.passed && cc.passed;
  }
  j["passed"] = ok;
  sink.emit(j);
  return ok ? kOk : kTolerance;
}

std::vector<double> parse_fiber_lambda(const std::string& s) {
  if (s == "rho") return {1.0, 1.0};
  std::vector<double> v = parse_doubles(s, "--lambda-fiber");
  if (v.size() != 2) throw UsageError("--lambda-fiber needs 2 entries");
  return v;
}

TorsorSpec torsor(const Options& o) {
  TorsorSpec spec;
  spec.n = o.n;
  if (o.section == "x0")
    spec.section = Section::x0;
  else if (o.section == "x1")
    spec.section = Section::x1;
  else
    throw UsageError("--section must be x0 or x1");
  if (o.n < 0) throw UsageError("--n must be >= 0");
  return spec;
}

int cmd_fibration(const Options& o, json cfg, Sink& sink, int threads) {
  const TorsorSpec spec = torsor(o);
  const std::vector<double> fl = parse_fiber_lambda(o.lambda_fiber);
  if (!(o.alpha_base > 0.0) || !(fl[0] > 0.0) || !(fl[1] > 0.0))
    throw UsageError("classes must be positive");
  ExecPolicy exec;
  exec.threads = threads;
  FibrationZeta fz = fibration_zeta_partial(spec, fl, o.alpha_base, o.B, exec);
  FibrationZeta tz = toric_zeta_partial(hirzebruch_fan(o.n), total_lambda(fl, o.alpha_base), o.B, exec);
  bool same = fz.heights.size() == tz.heights.size();
  double worst = same ? 0.0 : INFINITY;
  if (same)
    for (std::size_t i = 0; i < fz.heights.size(); ++i)
      worst = std::max(worst, std::fabs(fz.heights[i] - tz.heights[i]) / tz.heights[i]);
  const double rel = std::fabs(fz.value - tz.value) / std::fabs(tz.value);
  const bool passed = same && worst < 1e-10 && rel < 1e-10;
  json j{{"config", cfg},
         {"fibration", {{"value", fz.value}, {"points", fz.points},
                        {"tail", std::isfinite(fz.tail) ? json(fz.tail) : json(nullptr)}}},
         {"toric", {{"value", tz.value}, {"points", tz.points}}},
         {"same_multiset_size", same},
         {"max_rel_height_diff", std::isfinite(worst) ? json(worst) : json(nullptr)},
         {"rel_sum_diff", rel},
         {"passed", passed}};
  sink.emit(j);
  return passed ? kOk : kTolerance;
}

int cmd_fibration_constants(const Options& o, json cfg, Sink& sink) {
  const TorsorSpec spec = torsor(o);
  const auto pmax = static_cast<std::uint64_t>(o.pmax);
  FibrationConstant fc = fibration_predicted_constant(spec, pmax);
  const Fan fan = hirzebruch_fan(o.n);
  LeadingConstant lc = leading_constant(fan, pmax);
  const bool alpha_eq = fc.alpha == lc.alpha;
  const bool overlap = fc.tau.lo <= lc.tau.hi && lc.tau.lo <= fc.tau.hi;
  const bool picard = match_picard(fibration_picard(spec), fan).ok;
  json j{{"config", cfg},
         {"fibration", {{"alpha", to_string(fc.alpha)}, {"tau", interval_json(fc.tau)},
                        {"theta", interval_json(fc.theta)}, {"rank", fc.rank}}},
         {"toric", {{"alpha", to_string(lc.alpha)}, {"tau", interval_json(lc.tau)},
                    {"theta", interval_json(lc.theta)}, {"rank", lc.b}}},
         {"alpha_equal", alpha_eq},
         {"tau_overlap", overlap},
         {"picard_match", picard}};
  const bool ok = alpha_eq && overlap && picard && fc.rank == lc.b;
  j["passed"] = ok;
  sink.emit(j);
  return ok ? kOk : kTolerance;
}

int cmd_bounds(const Options& o, json cfg, Sink& sink) {
  std::vector<BoundKind> kinds;
  if (o.kind == "all") {
    kinds = {BoundKind::Plus, BoundKind::Minus, BoundKind::Alpha, BoundKind::Omega};
  } else {
    try {
      kinds = {parse_bound_kind(o.kind)};
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }
  BoundGrid grid;
  grid.max_decade = o.max_decade;
  grid.extra_decades = o.extra_decades;
  if (grid.max_decade < 1 || grid.extra_decades < 1) throw UsageError("decades must be >= 1");
  json reports = json::array();
  std::ostringstream csv;
  csv << "kind,row,params,lhs,rhs,ratio\n";
  bool ok = true;
  for (BoundKind k : kinds) {
    SweepReport rep = verify_integral_bounds(k, grid);
    ok = ok && rep.passed();
    reports.push_back({{"kind", to_string(k)},
                       {"rows", rep.rows.size()},
                       {"base_rows", rep.base_rows},
                       {"sup_base", rep.sup_base},
                       {"sup_extended", rep.sup_extended},
                       {"sup_by_level", rep.sup_by_level},
                       {"finite", rep.finite},
                       {"stable", rep.stable}});
    for (std::size_t i = 0; i < rep.rows.size(); ++i) {
      const auto& r = rep.rows[i];
      std::string params;
      for (std::size_t q = 0; q < r.params.size(); ++q) params += (q ? " " : "") + num(r.params[q]);
      csv << to_string(k) << "," << i << "," << params << "," << num(r.lhs) << "," << num(r.rhs)
          << "," << num(r.ratio) << "\n";
    }
  }
  json j{{"config", cfg}, {"sweeps", reports}, {"passed", ok}};
  sink.emit(j, csv.str());
  return ok ? kOk : kTolerance;
}

const std::set<std::string> kSubcommands{"validate", "constants", "count",     "height",
                                         "zeta",     "poisson-check", "tauber", "fibration",
                                         "bounds-sweep"};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--out", c.out, "output file (default stdout)");
  sub->add_option("--format", c.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  sub->add_option("--threads", c.threads, "OpenMP threads (fallback MANIN_TORIC_THREADS)");
}

}  // namespace

int run(int argc, char** argv) {
  if (argc >= 2) {
    const std::string first = argv[1];
    if (first.rfind("-", 0) != 0 && !kSubcommands.count(first)) {
      std::cerr << "manin: unknown subcommand '" << first << "'\n";
      return kUsage;
    }
  }
  Options o;
  CLI::App app{"Rational points of bounded height on toric varieties"};
  app.require_subcommand(1);

  auto* validate = app.add_subcommand("validate", "check a fan");
  validate->add_option("--fan", o.fan, "builtin:<name> or JSON file")->required();

  auto* constants = app.add_subcommand("constants", "alpha, tau and theta of a fan");
  constants->add_option("--fan", o.fan)->required();
  constants->add_option("--pmax", o.pmax, "Euler product cutoff");

  auto* count = app.add_subcommand("count", "exact N(B) against the prediction");
  count->add_option("--fan", o.fan)->required();
  count->add_option("--lambda", o.lambda, "rho or comma-separated values");
  count->add_option("--bounds", o.bounds, "comma-separated B values");
  count->add_option("--pmax", o.pmax);

  auto* height = app.add_subcommand("height", "height of a torus point");
  height->add_option("--fan", o.fan)->required();
  height->add_option("--lambda", o.lambda);
  height->add_option("--x", o.x, "coordinates, e.g. \"3/2,5\"")->required();

  auto* zeta = app.add_subcommand("zeta", "truncated height zeta function");
  zeta->add_option("--fan", o.fan)->required();
  zeta->add_option("--s", o.s, "lambda = s rho when --lambda is rho");
  zeta->add_option("--lambda", o.lambda);
  zeta->add_option("--B", o.B, "truncation in H(rho)");

  auto* poisson = app.add_subcommand("poisson-check", "Poisson identity at s rho");
  poisson->add_option("--fan", o.fan)->required();
  poisson->add_option("--s", o.s);
  poisson->add_option("--tol", o.tol);
  poisson->add_option("--radius", o.radius, "quadrature cut in m");
  poisson->add_option("--fourier-pmax", o.fourier_pmax, "Euler product cutoff on the Fourier side");
  poisson->add_option("--B", o.B, "direct side bound");

  auto* tauber = app.add_subcommand("tauber", "Perron integrals and descent to N(X)");
  tauber->add_option("--oracle", o.oracle, "zeta, zeta2 or one");
  tauber->add_option("--X", o.X);
  tauber->add_option("--k", o.k);
  tauber->add_option("--T", o.T, "vertical cutoff");
  tauber->add_option("--panel", o.panel, "quadrature panel width");
  tauber->add_option("--eps", o.eps, "eta_j = X^-eps_j, one per level (default: balanced)")
      ->delimiter(',');
  tauber->add_option("--check-tol", o.check_tol);

  auto* fibration = app.add_subcommand("fibration", "fibration against the F_n fan");
  fibration->add_option("--n", o.n);
  fibration->add_option("--lambda-fiber", o.lambda_fiber, "rho or two values");
  fibration->add_option("--alpha-base", o.alpha_base, "base class in units of O(1)");
  fibration->add_option("--B", o.B);
  fibration->add_option("--section", o.section, "x0 or x1");
  auto* fib_constants = fibration->add_subcommand("constants", "Theta from both pipelines");
  fib_constants->add_option("--n", o.n);
  fib_constants->add_option("--pmax", o.pmax);
  fib_constants->add_option("--section", o.section);

  auto* bounds = app.add_subcommand("bounds-sweep", "integral bounds over parameter grids");
  bounds->add_option("--kind", o.kind, "plus, minus, alpha, omega or all");
  bounds->add_option("--max-decade", o.max_decade);
  bounds->add_option("--extra-decades", o.extra_decades);

  for (auto* s : {validate, constants, count, height, zeta, poisson, tauber, fibration, fib_constants, bounds})
    add_common(s, o.common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }
  // fibration enumerates two fibers deep; its default bound is smaller
  if (fibration->parsed() && fibration->count("--B") == 0) o.B = 1e3;

  try {
    const int threads = resolve_threads(o.common.threads);
    omp_set_num_threads(threads);
    CLI::App* sub = app.get_subcommands().front();
    std::string name = sub->get_name();
    if (name == "fibration" && fib_constants->parsed()) name = "fibration constants";
    // count is tabular: CSV unless asked otherwise
    if (name == "count" && count->count("--format") == 0) o.common.format = "csv";

    json cfg{{"subcommand", name}, {"threads", threads}, {"format", o.common.format},
             {"out", o.common.out}};
    auto set = [&](const char* key, const auto& v) { cfg[key] = v; };
    if (name == "validate") set("fan", o.fan);
    if (name == "constants") {
      set("fan", o.fan);
      set("pmax", o.pmax);
    }
    if (name == "count") {
      set("fan", o.fan);
      set("lambda", o.lambda);
      set("bounds", o.bounds);
      set("pmax", o.pmax);
    }
    if (name == "height") {
      set("fan", o.fan);
      set("lambda", o.lambda);
      set("x", o.x);
    }
    if (name == "zeta") {
      set("fan", o.fan);
      set("s", o.s);
      set("lambda", o.lambda);
      set("B", o.B);
    }
    if (name == "poisson-check") {
      set("fan", o.fan);
      set("s", o.s);
      set("tol", o.tol);
      set("radius", o.radius);
      set("fourier_pmax", o.fourier_pmax);
      set("B", o.B);
    }
    if (name == "tauber") {
      set("oracle", o.oracle);
      set("X", o.X);
      set("k", o.k);
      set("T", o.T);
      set("panel", o.panel);
      set("check_tol", o.check_tol);
    }
    if (name == "fibration") {
      set("n", o.n);
      set("lambda_fiber", o.lambda_fiber);
      set("alpha_base", o.alpha_base);
      set("B", o.B);
      set("section", o.section);
    }
    if (name == "fibration constants") {
      set("n", o.n);
      set("pmax", o.pmax);
      set("section", o.section);
    }
    if (name == "bounds-sweep") {
      set("kind", o.kind);
      set("max_decade", o.max_decade);
      set("extra_decades", o.extra_decades);
    }
    std::cerr << "config: " << cfg.dump() << "\n";

    Sink sink(o.common);
    if (name == "validate") return cmd_validate(o, cfg, sink);
    if (name == "constants") return cmd_constants(o, cfg, sink);
    if (name == "count") return cmd_count(o, cfg, sink, threads);
    if (name == "height") return cmd_height(o, cfg, sink);
    if (name == "zeta") return cmd_zeta(o, cfg, sink, threads);
    if (name == "poisson-check") return cmd_poisson(o, cfg, sink, threads);
    if (name == "tauber") return cmd_tauber(o, cfg, sink);
    if (name == "fibration") return cmd_fibration(o, cfg, sink, threads);
    if (name == "fibration constants") return cmd_fibration_constants(o, cfg, sink);
    if (name == "bounds-sweep") return cmd_bounds(o, cfg, sink);
    return kUsage;
  } catch (const FanFormatError& e) {
    std::cerr << "manin: " << e.what() << "\n";
    return kBadFan;
  } catch (const UsageError& e) {
    std::cerr << "manin: " << e.what() << "\n";
    return kUsage;
  } catch (const ValidationError& e) {
    std::cerr << "manin: " << e.what() << "\n";
    return kValidation;
  } catch (const PicardError& e) {
    std::cerr << "manin: " << e.what() << "\n";
    return kValidation;
  } catch (const std::invalid_argument& e) {
    std::cerr << "manin: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "manin: " << e.what() << "\n";
    return kTolerance;
  }
}

}  // namespace manin::cli
