// rank1ks command-line front end. Every subcommand writes a CSV and a JSON
// summary into --out; exit status 0 means success, 1 a verification failure
// and 2 a configuration error.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rank1ks/constants.hpp"
#include "rank1ks/convolution.hpp"
#include "rank1ks/csv.hpp"
#include "rank1ks/errors.hpp"
#include "rank1ks/geometry.hpp"
#include "rank1ks/kernel.hpp"
#include "rank1ks/maximal.hpp"
#include "rank1ks/rearrange.hpp"
#include "rank1ks/suites.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace rank1ks;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFail = 1;
constexpr int kExitConfig = 2;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// "a..b" with a step, both ends included when they land on the grid.
std::vector<double> parse_range(const std::string& text, double step) {
  const auto dots = text.find("..");
  if (dots == std::string::npos) {
    return {std::stod(text)};
  }
  const double a = std::stod(text.substr(0, dots));
  const double b = std::stod(text.substr(dots + 2));
  if (!(step > 0.0) || b < a) throw ConfigError("bad range '" + text + "'");
  std::vector<double> out;
  const long n = std::lround(std::floor((b - a) / step + 1e-9));
  for (long i = 0; i <= n; ++i) out.push_back(a + static_cast<double>(i) * step);
  return out;
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(std::stod(item));
  }
  return out;
}

double parse_q(const std::string& text) {
  if (text == "inf" || text == "infinity") return kInfinity;
  return std::stod(text);
}

/// "a:b,c:d" into an interval set.
IntervalSet parse_intervals(const std::string& text) {
  IntervalSet set;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) throw ConfigError("interval '" + item + "' needs a:b");
    set.push_back({std::stod(item.substr(0, colon)), std::stod(item.substr(colon + 1))});
  }
  return set;
}

struct Output {
  fs::path dir;

  void write_csv(const std::string& name, const CsvTable& t) const {
    fs::create_directories(dir);
    std::ofstream os(dir / (name + ".csv"), std::ios::binary);
    t.write(os);
  }

  void write_json(const std::string& name, const json& j) const {
    fs::create_directories(dir);
    std::ofstream os(dir / (name + ".json"), std::ios::binary);
    os << j.dump(2) << '\n';
  }
};

json summary_json(const SuiteResult& r) {
  json checks = json::array();
  for (const auto& c : r.checks) {
    checks.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
  }
  return {{"suite", r.suite},
          {"criterion", r.criterion},
          {"cases", r.cases},
          {"max_ratio", r.max_ratio},
          {"pinned_constant", r.pinned_constant},
          {"pass", r.pass},
          {"checks", checks}};
}

json simple_summary(const std::string& suite, std::size_t cases, double max_ratio, double pinned,
                    bool pass) {
  return {{"suite", suite},
          {"cases", cases},
          {"max_ratio", max_ratio},
          {"pinned_constant", pinned},
          {"pass", pass}};
}

void print_suite(const SuiteResult& r, double seconds) {
  std::cout << "[" << (r.pass ? "PASS" : "FAIL") << "] " << r.criterion << " " << r.suite
            << "  cases=" << r.cases << "  max_ratio=" << format_double(r.max_ratio)
            << "  pinned=" << format_double(r.pinned_constant) << "  (" << seconds << " s)\n";
  for (const auto& c : r.checks) {
    std::cout << "    " << (c.pass ? "ok   " : "FAIL ") << c.name;
    if (!c.detail.empty()) std::cout << ": " << c.detail;
    std::cout << '\n';
  }
}

int finish_suite(const Output& out, const SuiteResult& r, double seconds) {
  out.write_csv(r.suite, r.csv);
  out.write_json(r.suite, summary_json(r));
  print_suite(r, seconds);
  return r.pass ? kExitOk : kExitFail;
}

template <class F>
std::pair<SuiteResult, double> timed(F&& f) {
  const auto t0 = std::chrono::steady_clock::now();
  SuiteResult r = f();
  const double dt =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return {std::move(r), dt};
}

std::string json_to_arg(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  return v.dump();
}

/// Loads --config before parsing and installs its entries as option
/// defaults, so that explicit flags still win. Keys under a subcommand's
/// name apply to that subcommand only; top-level keys apply to all.
void apply_config(CLI::App& app, int argc, char** argv) {
  std::optional<std::string> path;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--config" && i + 1 < argc) path = argv[i + 1];
    if (a.rfind("--config=", 0) == 0) path = a.substr(9);
  }
  if (!path) return;
  std::ifstream is(*path);
  if (!is) throw ConfigError("cannot open config file '" + *path + "'");
  json cfg;
  try {
    cfg = json::parse(is);
  } catch (const json::parse_error& e) {
    throw ConfigError("malformed config '" + *path + "': " + e.what());
  }
  if (!cfg.is_object()) throw ConfigError("config must be a JSON object");
  for (CLI::App* sub : app.get_subcommands({})) {
    auto apply = [&](const json& section) {
      for (const auto& [key, value] : section.items()) {
        if (value.is_object()) continue;
        CLI::Option* opt = sub->get_option_no_throw("--" + key);
        if (opt != nullptr) opt->default_val(json_to_arg(value));
      }
    };
    apply(cfg);
    if (cfg.contains(sub->get_name())) apply(cfg.at(sub->get_name()));
  }
}

struct Common {
  int m1 = 2;
  int m2 = 0;
  std::uint64_t seed = kDefaultSeed;
  std::string out = "rank1ks_out";
  std::string config;
};

void add_common(CLI::App* sub, Common& c, bool space = true) {
  if (space) {
    sub->add_option("--m1", c.m1, "root multiplicity m1 (>= 1)")->capture_default_str();
    sub->add_option("--m2", c.m2, "root multiplicity m2 (>= 0)")->capture_default_str();
  }
  sub->add_option("--seed", c.seed, "64-bit seed for every random stream")->capture_default_str();
  sub->add_option("--out", c.out, "directory for CSV and JSON artifacts")->capture_default_str();
  sub->add_option("--config", c.config, "JSON config; flags override its entries");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerics and verification suites for rank-one symmetric spaces"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "rank1ks 0.1.0");

  // space-info
  Common c_space;
  auto* space = app.add_subcommand("space-info", "rho, dimension and a radial density table");
  add_common(space, c_space);
  double space_tmax = 5.0, space_step = 0.5;
  space->add_option("--t-max", space_tmax, "largest radius in the table")->capture_default_str();
  space->add_option("--t-step", space_step, "radius step")->capture_default_str();

  // kernel-table
  Common c_kt;
  auto* kt = app.add_subcommand("kernel-table", "psi(t, s) against its comparator");
  add_common(kt, c_kt);
  std::string kt_t = "0..6", kt_s = "-3..3";
  double kt_step = 0.25, kt_tol = kKernelTol;
  kt->add_option("--t", kt_t, "t range a..b")->capture_default_str();
  kt->add_option("--s", kt_s, "s range a..b")->capture_default_str()->allow_extra_args(false);
  kt->add_option("--step", kt_step, "grid step for both ranges")->capture_default_str();
  kt->add_option("--tol", kt_tol, "quadrature tolerance")->capture_default_str();

  // abel
  Common c_abel;
  auto* abel = app.add_subcommand("abel", "Abel transform of a radial indicator and its L^{2,1} ratio");
  add_common(abel, c_abel);
  double abel_R = 5.0, abel_step = 0.05;
  std::string abel_intervals;
  abel->add_option("--radius", abel_R, "ball radius (ignored with --intervals)")->capture_default_str();
  abel->add_option("--intervals", abel_intervals, "union of radial intervals a:b,c:d");
  abel->add_option("--s-step", abel_step, "s grid step over [0, support]")->capture_default_str();

  // lorentz-norm
  Common c_ln;
  auto* ln = app.add_subcommand("lorentz-norm", "L^{p,q} quasinorm of a weighted sample");
  add_common(ln, c_ln, false);
  std::string ln_values = "1,2,3", ln_weights, ln_q = "1";
  double ln_p = 2.0;
  ln->add_option("--values", ln_values, "comma-separated values")->capture_default_str();
  ln->add_option("--weights", ln_weights, "comma-separated weights (default all 1)");
  ln->add_option("--p", ln_p, "exponent p")->capture_default_str();
  ln->add_option("--q", ln_q, "exponent q, or inf")->capture_default_str();

  // suite-backed commands
  Common c_rc, c_chain, c_t8, c_cov, c_verify, c_report;
  bool quick = false;
  auto* rc = app.add_subcommand("rearrange-check", "double rearrangement and embedding checks");
  add_common(rc, c_rc, false);
  rc->add_flag("--quick", quick, "reduced case counts");
  auto* chain = app.add_subcommand("chain-verify", "discrete four-step chain on random models");
  add_common(chain, c_chain, false);
  chain->add_flag("--quick", quick, "reduced case counts");
  auto* t8 = app.add_subcommand("theorem8", "rearranged bound with the weight phi");
  add_common(t8, c_t8, false);
  t8->add_flag("--quick", quick, "reduced case counts");
  auto* cov = app.add_subcommand("covering", "greedy covering selection on random ball families");
  add_common(cov, c_cov, false);
  cov->add_flag("--quick", quick, "reduced case counts");

  // trilinear
  Common c_tri;
  auto* tri = app.add_subcommand("trilinear", "Monte Carlo trilinear form of ball indicators");
  add_common(tri, c_tri);
  std::string tri_radii = "1,2,3,4";
  std::uint64_t tri_n = 1000000;
  tri->add_option("--radii", tri_radii, "comma-separated ball radii")->capture_default_str();
  tri->add_option("--samples", tri_n, "Monte Carlo samples per radius")->capture_default_str();

  // maximal-run
  Common c_max;
  c_max.m1 = 1;
  auto* mx = app.add_subcommand("maximal-run", "pointwise domination of the Euclidean-ball maximal function");
  add_common(mx, c_max);
  int mx_nv = 128, mx_ns = 128, mx_fields = 5;
  double mx_V = 16.0, mx_S = 4.0;
  mx->add_option("--nv", mx_nv, "cells per v-axis")->capture_default_str();
  mx->add_option("--ns", mx_ns, "cells along s")->capture_default_str();
  mx->add_option("--V", mx_V, "half-width of the v box")->capture_default_str();
  mx->add_option("--S", mx_S, "half-height of the s box")->capture_default_str();
  mx->add_option("--fields", mx_fields, "random ball-union fields")->capture_default_str();

  // weak-type
  Common c_wt;
  auto* wt = app.add_subcommand("weak-type", "weak-type ratios on separated balls and nested shells");
  add_common(wt, c_wt, false);
  int wt_kmax = 16, wt_shells = 6;
  double wt_dv = 0.125;
  wt->add_option("--k-max", wt_kmax, "largest number of separated balls (power of 2)")->capture_default_str();
  wt->add_option("--dv", wt_dv, "v cell width for the separation family")->capture_default_str();
  wt->add_option("--shells", wt_shells, "nested shells in the L2 trend family")->capture_default_str();

  // verify / report
  auto* verify = app.add_subcommand("verify", "run verification suites");
  add_common(verify, c_verify, false);
  std::string verify_suite = "all";
  verify->add_option("--suite", verify_suite, "all, a suite name or a criterion number")->capture_default_str();
  verify->add_flag("--quick", quick, "reduced sizes (smoke runs only)");
  auto* report = app.add_subcommand("report", "consolidated table from the JSON summaries in --out");
  add_common(report, c_report, false);

  try {
    apply_config(app, argc, argv);
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  }

  try {
    if (space->parsed()) {
      const SpaceParams sp = make_space(c_space.m1, c_space.m2);
      const Output out{c_space.out};
      std::cout << "m1 = " << sp.m1 << ", m2 = " << sp.m2 << ", dim = " << sp.dim()
                << ", rho = " << format_double(sp.rho) << '\n';
      CsvTable t({"t", "radial_density", "ball_volume"});
      for (double r : parse_range("0.." + format_double(space_tmax), space_step)) {
        t.add(r, radial_density(sp, r), ball_volume(sp, r));
      }
      t.write(std::cout);
      out.write_csv("space-info", t);
      out.write_json("space-info", {{"m1", sp.m1}, {"m2", sp.m2}, {"dim", sp.dim()}, {"rho", sp.rho}});
      return kExitOk;
    }

    if (kt->parsed()) {
      const SpaceParams sp = make_space(c_kt.m1, c_kt.m2);
      const Output out{c_kt.out};
      const KernelTable tab =
          build_kernel_table(sp, parse_range(kt_t, kt_step), parse_range(kt_s, kt_step), kt_tol);
      CsvTable t({"t", "s", "psi", "comparator", "ratio", "method"});
      double worst = 0.0;
      std::size_t n = 0;
      for (std::size_t i = 0; i < tab.t_grid.size(); ++i) {
        for (std::size_t j = 0; j < tab.s_grid.size(); ++j) {
          const double comp = tab.comparator[i * tab.s_grid.size() + j];
          const double psi_v = tab.at(i, j);
          double ratio = std::numeric_limits<double>::quiet_NaN();
          if (std::isfinite(comp) && comp > 0.0 && tab.t_grid[i] > std::fabs(tab.s_grid[j])) {
            ratio = psi_v / comp;
            worst = std::max({worst, ratio, 1.0 / ratio});
            ++n;
          }
          t.add(tab.t_grid[i], tab.s_grid[j], psi_v, comp, ratio, to_string(tab.method));
        }
      }
      const bool pass = worst <= pinned::kKernelComparability;
      out.write_csv("kernel-table", t);
      out.write_json("kernel-table",
                     simple_summary("kernel-table", n, worst, pinned::kKernelComparability, pass));
      std::cout << "points " << n << ", max(ratio, 1/ratio) " << format_double(worst) << " vs "
                << pinned::kKernelComparability << (pass ? "  ok\n" : "  FAIL\n");
      return pass ? kExitOk : kExitFail;
    }

    if (abel->parsed()) {
      const SpaceParams sp = make_space(c_abel.m1, c_abel.m2);
      const Output out{c_abel.out};
      const RadialFunction F = abel_intervals.empty()
                                   ? RadialFunction::ball(abel_R)
                                   : RadialFunction::from_intervals(parse_intervals(abel_intervals));
      std::vector<double> grid;
      for (int i = 0; i * abel_step <= F.support_radius() + 1e-12; ++i) grid.push_back(i * abel_step);
      CsvTable t({"s", "abel"});
      for (double s : grid) t.add(s, abel_transform(sp, F, s));
      const AbelBound b = abel_l21_bound(sp, F, grid);
      const bool pass = b.ratio() <= pinned::kAbelL21;
      out.write_csv("abel", t);
      out.write_json("abel", simple_summary("abel", grid.size(), b.ratio(), pinned::kAbelL21, pass));
      std::cout << "sup " << format_double(b.sup_lhs) << " at s = " << format_double(b.argmax_s)
                << ", L21 size " << format_double(b.rhs) << ", ratio " << format_double(b.ratio())
                << (pass ? "  ok\n" : "  FAIL\n");
      return pass ? kExitOk : kExitFail;
    }

    if (ln->parsed()) {
      const std::vector<double> v = parse_list(ln_values);
      std::vector<double> w = ln_weights.empty() ? std::vector<double>(v.size(), 1.0)
                                                 : parse_list(ln_weights);
      if (w.size() != v.size()) throw ConfigError("--values and --weights differ in length");
      std::vector<Sample> e;
      for (std::size_t i = 0; i < v.size(); ++i) e.push_back({v[i], w[i]});
      const double q = parse_q(ln_q);
      const double norm = lorentz_norm(WeightedSamples(std::move(e)), ln_p, q);
      std::cout << format_double(norm) << '\n';
      const Output out{c_ln.out};
      out.write_json("lorentz-norm", {{"p", ln_p}, {"q", ln_q}, {"norm", norm}});
      return kExitOk;
    }

    const SuiteConfig base_cfg{};
    auto suite_cmd = [&](const Common& c, SuiteResult (*fn)(const SuiteConfig&)) {
      SuiteConfig cfg = base_cfg;
      cfg.seed = c.seed;
      cfg.quick = quick;
      auto [r, dt] = timed([&] { return fn(cfg); });
      return finish_suite(Output{c.out}, r, dt);
    };
    if (rc->parsed()) return suite_cmd(c_rc, rearrangement_suite);
    if (chain->parsed()) return suite_cmd(c_chain, chain_suite);
    if (t8->parsed()) return suite_cmd(c_t8, rearranged_phi_suite);
    if (cov->parsed()) return suite_cmd(c_cov, covering_suite);

    if (tri->parsed()) {
      const SpaceParams sp = make_space(c_tri.m1, c_tri.m2);
      const Output out{c_tri.out};
      const auto rows = endpoint_ratio_sweep(sp, parse_list(tri_radii), tri_n, stream_seed(c_tri.seed, 600));
      CsvTable t({"radius", "estimate", "stderr", "norm_product", "ratio", "rel_stderr"});
      double worst = 0.0;
      for (const auto& r : rows) {
        t.add(r.radius, r.estimate, r.stderr_, r.norm_product, r.ratio, r.rel_stderr());
        worst = std::max(worst, r.ratio);
      }
      t.write(std::cout);
      out.write_csv("trilinear", t);
      out.write_json("trilinear", simple_summary("trilinear", rows.size(), worst, NAN, true));
      return kExitOk;
    }

    if (mx->parsed()) {
      if (c_max.m2 != 0) throw ConfigError("maximal-run needs --m2 0");
      const SpaceParams sp = make_space(c_max.m1, 0);
      const Output out{c_max.out};
      const GridModel g = GridModel::make(sp, mx_nv, mx_ns, mx_V, mx_S);
      const auto tilde_radii = geometric_radii(1.0, 3.0, 4);
      const auto u_list = geometric_radii(0.5 * g.dv(), 2.0 * mx_V, 2);
      CsvTable t({"field", "max_ratio", "violations", "evaluated"});
      double worst = 0.0;
      std::size_t viol = 0;
      FieldGrid ball(g);
      add_ball(ball, std::vector<double>(sp.m1, 0.0), 0.0, 1.0);
      std::vector<FieldGrid> fields{ball};
      Rng rng = make_rng(c_max.seed, 800 + static_cast<std::uint64_t>(sp.m1));
      for (int i = 0; i < mx_fields; ++i) fields.push_back(random_ball_indicator(g, rng));
      for (std::size_t i = 0; i < fields.size(); ++i) {
        const DominationResult d = pointwise_domination_check(fields[i], tilde_radii, u_list);
        t.add(i == 0 ? std::string("unit_ball") : "random_" + std::to_string(i - 1), d.max_ratio,
              d.violations, d.evaluated);
        worst = std::max(worst, d.max_ratio);
        viol += d.violations;
      }
      const bool pass = worst <= pinned::kDomination && viol == 0;
      t.write(std::cout);
      out.write_csv("maximal-run", t);
      out.write_json("maximal-run",
                     simple_summary("maximal-run", fields.size(), worst, pinned::kDomination, pass));
      return pass ? kExitOk : kExitFail;
    }

    if (wt->parsed()) {
      const SpaceParams sp = make_space(1, 0);
      const Output out{c_wt.out};
      if (wt_kmax < 1 || (wt_kmax & (wt_kmax - 1)) != 0) throw ConfigError("--k-max must be a power of 2");
      const double spacing = 106.0;
      const double V = spacing * wt_kmax / 2.0 + 400.0;
      const GridModel g = GridModel::make(sp, static_cast<int>(std::lround(2.0 * V / wt_dv)), 128, V, 4.0);
      const auto radii = geometric_radii(1.0, 2.5, 4);
      CsvTable t({"family", "instance", "weak_norm", "l21_norm", "l2_norm", "ratio_l21", "ratio_l2"});
      double base = 0.0, spread = 1.0;
      std::size_t n = 0;
      for (int k = 1; k <= wt_kmax; k *= 2) {
        const WeakTypeRow r = weak_type_row(k, separated_balls(g, k, wt_kmax, spacing), radii);
        if (k == 1) base = r.ratio();
        spread = std::max({spread, r.ratio() / base, base / r.ratio()});
        t.add("separated", k, r.weak_norm, r.l21_norm, r.l2_norm, r.ratio(), r.ratio_l2());
        ++n;
      }
      // nested shells: only the L2 trend is reported
      const GridModel gs = GridModel::make(sp, 256, 256, 16.0, 4.0);
      FieldGrid f(gs);
      for (int j = 1; j <= wt_shells; ++j) {
        add_ball(f, std::vector<double>{0.0}, 0.0, 0.25 * j);
        const WeakTypeRow r = weak_type_row(j, f, radii);
        t.add("nested_shells", j, r.weak_norm, r.l21_norm, r.l2_norm, r.ratio(), r.ratio_l2());
        ++n;
      }
      const bool pass = spread <= 2.0;
      t.write(std::cout);
      out.write_csv("weak-type", t);
      out.write_json("weak-type", simple_summary("weak-type", n, spread, 2.0, pass));
      return pass ? kExitOk : kExitFail;
    }

    if (verify->parsed()) {
      SuiteConfig cfg;
      cfg.seed = c_verify.seed;
      cfg.quick = quick;
      const Output out{c_verify.out};
      std::vector<SuiteResult> results;
      json all = json::array();
      bool pass = true;
      bool matched = false;
      for (const auto& e : suite_registry()) {
        if (verify_suite != "all" && verify_suite != e.name &&
            verify_suite != std::to_string(e.criterion)) {
          continue;
        }
        matched = true;
        auto [r, dt] = timed([&] { return e.run(cfg); });
        pass = finish_suite(out, r, dt) == kExitOk && pass;
        all.push_back(summary_json(r));
        results.push_back(std::move(r));
      }
      if (verify_suite == "all" || verify_suite == "determinism" || verify_suite == "10") {
        if (results.empty()) {
          for (const auto& e : suite_registry()) results.push_back(e.run(cfg));
        }
        matched = true;
        auto [r, dt] = timed([&] { return determinism_suite(cfg, results); });
        pass = finish_suite(out, r, dt) == kExitOk && pass;
        all.push_back(summary_json(r));
      }
      if (!matched) throw ConfigError("unknown suite '" + verify_suite + "'");
      out.write_json("summary", all);
      std::cout << (pass ? "all suites passed\n" : "verification FAILED\n");
      return pass ? kExitOk : kExitFail;
    }

    if (report->parsed()) {
      const fs::path p = fs::path(c_report.out) / "summary.json";
      std::ifstream is(p);
      if (!is) throw ConfigError("no summary at " + p.string() + "; run verify first");
      const json all = json::parse(is);
      bool pass = true;
      std::cout << "| # | suite | cases | max ratio | pinned | result |\n"
                << "|---|-------|-------|-----------|--------|--------|\n";
      for (const auto& s : all) {
        const bool ok = s.at("pass").get<bool>();
        pass = pass && ok;
        std::cout << "| " << s.value("criterion", 0) << " | " << s.at("suite").get<std::string>()
                  << " | " << s.at("cases").get<std::size_t>() << " | "
                  << format_double(s.at("max_ratio").get<double>()) << " | "
                  << format_double(s.at("pinned_constant").get<double>()) << " | "
                  << (ok ? "pass" : "FAIL") << " |\n";
        for (const auto& c : s.value("checks", json::array())) {
          if (!c.at("pass").get<bool>()) {
            std::cout << "|   | failed: " << c.at("name").get<std::string>() << " | | | | |\n";
          }
        }
      }
      return pass ? kExitOk : kExitFail;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const ContainmentError& e) {
    std::cerr << "containment error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const InvalidArgument& e) {
    std::cerr << "invalid argument: " << e.what() << '\n';
    return kExitConfig;
  } catch (const UnsupportedSpace& e) {
    std::cerr << "unsupported space: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: cannot parse number (" << e.what() << ")\n";
    return kExitConfig;
  }
  return kExitConfig;
}
