#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "pp/cases.hpp"
#include "pp/conditions.hpp"
#include "pp/direct.hpp"
#include "pp/errors.hpp"
#include "pp/format.hpp"
#include "pp/inverse.hpp"
#include "pp/verification.hpp"

namespace fs = std::filesystem;
using namespace pp;

namespace {

struct Options {
  std::string command;
  std::string case_name = "case1";
  std::string scheme = "cn";
  int nx = 200;
  int nt = 200;
  bool paper_rounded_m = false;
  std::optional<double> omega_mollify_width;
  std::string output_dir = ".";
  std::optional<long> seed;
  std::string case_file;
  std::vector<double> snapshot_times;
  std::vector<std::pair<int, int>> grids;
};

struct usage_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};



std::vector<double> parse_real_list(const std::string& text, const char* what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      size_t pos = 0;
      out.push_back(std::stod(item, &pos));
      while (pos < item.size() && std::isspace(static_cast<unsigned char>(item[pos]))) ++pos;
      if (pos != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw usage_error(std::string("malformed ") + what + " entry '" + item + "'");
    }
  }
  if (out.empty()) throw usage_error(std::string(what) + " list is empty");
  return out;
}

std::vector<std::pair<int, int>> parse_grid_list(const std::string& text) {
  std::vector<std::pair<int, int>> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const size_t colon = item.find(':');
    try {
      if (colon == std::string::npos) throw std::invalid_argument(item);
      const int nx = std::stoi(item.substr(0, colon));
      const int nt = std::stoi(item.substr(colon + 1));
      if (nx < 2 || nt < 2) throw std::invalid_argument(item);
      out.emplace_back(nx, nt);
    } catch (const std::exception&) {
      throw usage_error("malformed grids entry '" + item + "' (want nx:nt with nx, nt >= 2)");
    }
  }
  if (out.empty()) throw usage_error("grids list is empty");
  return out;
}

// Flat `key = value` file. Returns (line number, key, value) triples;
// blank lines and lines starting with # are skipped.
std::vector<std::tuple<int, std::string, std::string>> read_kv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw data_error("cannot open config file '" + path + "'");
  std::vector<std::tuple<int, std::string, std::string>> out;
  std::string line;
  int lineno = 0;
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    const auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  };
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const size_t eq = t.find('=');
    if (eq == std::string::npos) {
      throw data_error("config parse error at line " + std::to_string(lineno) +
                       ": expected key = value");
    }
    const std::string key = trim(t.substr(0, eq));
    const std::string value = trim(t.substr(eq + 1));
    if (key.empty()) {
      throw data_error("config parse error at line " + std::to_string(lineno) +
                       ": empty key");
    }
    out.emplace_back(lineno, key, value);
  }
  return out;
}

int parse_int(const std::string& v, int lineno, const std::string& key) {
  try {
    size_t pos = 0;
    const int n = std::stoi(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return n;
  } catch (const std::exception&) {
    throw data_error("config parse error at line " + std::to_string(lineno) +
                     ": malformed integer for '" + key + "'");
  }
}

double parse_real(const std::string& v, int lineno, const std::string& key) {
  try {
    size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw data_error("config parse error at line " + std::to_string(lineno) +
                     ": malformed number for '" + key + "'");
  }
}

bool parse_bool(const std::string& v, int lineno, const std::string& key) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw data_error("config parse error at line " + std::to_string(lineno) +
                   ": malformed boolean for '" + key + "'");
}

std::string normalize_case(const std::string& v) {
  if (v == "1" || v == "case1") return "case1";
  if (v == "2" || v == "case2") return "case2";
  if (v == "custom") return "custom";
  throw usage_error("unknown case '" + v + "' (want 1, 2, case1, case2 or custom)");
}

void apply_config_file(Options& opt, const std::string& path) {
  for (const auto& [lineno, key, value] : read_kv_file(path)) {
    if (key == "command") {
      opt.command = value;
    } else if (key == "case") {
      opt.case_name = normalize_case(value);
    } else if (key == "scheme") {
      opt.scheme = value;
    } else if (key == "nx") {
      opt.nx = parse_int(value, lineno, key);
    } else if (key == "nt") {
      opt.nt = parse_int(value, lineno, key);
    } else if (key == "paper_rounded_m") {
      opt.paper_rounded_m = parse_bool(value, lineno, key);
    } else if (key == "omega_mollify_width") {
      opt.omega_mollify_width = parse_real(value, lineno, key);
    } else if (key == "output_dir") {
      opt.output_dir = value;
    } else if (key == "seed") {
      opt.seed = parse_int(value, lineno, key);
    } else if (key == "case_file") {
      opt.case_file = value;
    } else if (key == "snapshot_times") {
      opt.snapshot_times = parse_real_list(value, "snapshot_times");
    } else if (key == "grids") {
      opt.grids = parse_grid_list(value);
    } else {
      throw data_error("config parse error at line " + std::to_string(lineno) +
                       ": unknown key '" + key + "'");
    }
  }
}

// Custom problem definition, same flat format. Coefficients are constant or
// affine in t, the source profile and initial state are sine modes, omega is
// an indicator window, f_tilde is zero and m comes from a small catalogue.
ManufacturedCase build_custom_case(const std::string& path) {
  double T = 1.0, eta = 1.0, kappa0 = 1.0, kappa1 = 0.0, rho = 1.0;
  double p_amp = 1.0, u0_amp = 1.0, m_scale = 1.0, h_scale = 1.0;
  int p_mode = 1, u0_mode = 1;
  double omega_a = 0.25, omega_b = 0.75;
  std::string m_kind = "zero", f_kind = "cubic", h_kind = "zero";

  for (const auto& [lineno, key, value] : read_kv_file(path)) {
    if (key == "T") T = parse_real(value, lineno, key);
    else if (key == "eta") eta = parse_real(value, lineno, key);
    else if (key == "kappa0") kappa0 = parse_real(value, lineno, key);
    else if (key == "kappa1") kappa1 = parse_real(value, lineno, key);
    else if (key == "rho") rho = parse_real(value, lineno, key);
    else if (key == "p_amp") p_amp = parse_real(value, lineno, key);
    else if (key == "p_mode") p_mode = parse_int(value, lineno, key);
    else if (key == "u0_amp") u0_amp = parse_real(value, lineno, key);
    else if (key == "u0_mode") u0_mode = parse_int(value, lineno, key);
    else if (key == "omega_a") omega_a = parse_real(value, lineno, key);
    else if (key == "omega_b") omega_b = parse_real(value, lineno, key);
    else if (key == "m_kind") m_kind = value;
    else if (key == "m_scale") m_scale = parse_real(value, lineno, key);
    else if (key == "h_kind") h_kind = value;
    else if (key == "h_scale") h_scale = parse_real(value, lineno, key);
    else if (key == "f") f_kind = value;
    else
      throw data_error("case file parse error at line " + std::to_string(lineno) +
                       ": unknown key '" + key + "'");
  }
  if (T <= 0.0) throw usage_error("case file: T must be positive");
  if (omega_b <= omega_a) throw usage_error("case file: need omega_a < omega_b");

  const double pi = std::acos(-1.0);
  const double k_at_T = kappa0 + kappa1 * T;

  TimeFn m, mp;
  if (m_kind == "exp") {
    m = [m_scale](double t) { return m_scale * std::exp(t); };
    mp = [m_scale](double t) { return m_scale * std::exp(t); };
  } else if (m_kind == "quad") {
    m = [m_scale](double t) { return m_scale * (1.0 + t * t); };
    mp = [m_scale](double t) { return 2.0 * m_scale * t; };
  } else if (m_kind == "zero") {
    m = [](double) { return 0.0; };
    mp = [](double) { return 0.0; };
  } else {
    throw usage_error("case file: unknown m_kind '" + m_kind + "'");
  }

  TimeFn h;
  if (h_kind == "exp") h = [h_scale](double t) { return h_scale * std::exp(t); };
  else if (h_kind == "sin2pi") h = [h_scale, pi](double t) { return h_scale * std::sin(2.0 * pi * t); };
  else if (h_kind == "one") h = [h_scale](double) { return h_scale; };
  else if (h_kind == "zero") h = [](double) { return 0.0; };
  else throw usage_error("case file: unknown h_kind '" + h_kind + "'");

  std::function<double(double)> f;
  if (f_kind == "cubic") f = [](double s) { return s * s * s; };
  else if (f_kind == "none") f = [](double) { return 0.0; };
  else throw usage_error("case file: unknown f '" + f_kind + "'");

  ProblemSpec spec{
      .rho = CoefficientField([rho](double, double) { return rho; }, rho, rho, 0.0),
      .eta = CoefficientField([eta](double, double) { return eta; }, eta, eta, 0.0),
      .kappa = CoefficientField(
          [kappa0, kappa1](double t, double) { return kappa0 + kappa1 * t; },
          std::min(kappa0, k_at_T), std::max(kappa0, k_at_T), std::abs(kappa1)),
      .nonlinearity = f,
      .lipschitz_f = 0.0,
      .lipschitz_local_only = true,
      .p = [p_amp, p_mode, pi](double t, double x) {
        return p_amp * t * std::sin(p_mode * pi * x);
      },
      .f_tilde = [](double, double) { return 0.0; },
      .u0 = [u0_amp, u0_mode, pi](double x) {
        return u0_amp * std::sin(u0_mode * pi * x);
      },
      .omega = indicator_window(omega_a, omega_b),
      .measurement = m,
      .measurement_derivative = mp,
      .omega_window = std::optional<std::pair<double, double>>({omega_a, omega_b}),
      .length = 1.0,
  };
  return ManufacturedCase{
      std::move(spec),
      [](double, double) { return std::nan(""); },
      std::move(h),
      "custom",
      T,
      -1,
  };
}

ManufacturedCase build_case(const Options& opt) {
  if (opt.case_name == "case1") return case1(opt.paper_rounded_m);
  if (opt.case_name == "case2") return case2(opt.paper_rounded_m);
  if (opt.case_file.empty()) {
    throw usage_error("case=custom requires a problem-definition file (--case-file)");
  }
  return build_custom_case(opt.case_file);
}

Scheme parse_scheme(const std::string& s) {
  if (s == "cn") return Scheme::CrankNicolson;
  if (s == "rothe") return Scheme::RotheBackwardEuler;
  throw usage_error("unknown scheme '" + s + "' (want cn or rothe)");
}

std::ofstream open_output(const fs::path& dir, const std::string& name) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  const fs::path p = dir / name;
  std::ofstream out(p, std::ios::binary);  // binary: identical bytes everywhere
  if (!out) throw data_error("cannot open output file '" + p.string() + "'");
  return out;
}

std::vector<double> default_snapshots(const Options& opt, double horizon) {
  if (!opt.snapshot_times.empty()) return opt.snapshot_times;
  if (opt.case_name == "case1") return {0.2, 1.0, 1.5, 2.0};
  if (opt.case_name == "case2") return {0.25, 0.5, 0.75, 1.0};
  return {0.25 * horizon, 0.5 * horizon, 0.75 * horizon, horizon};
}

size_t nearest_stored(const Trajectory& traj, double t) {
  size_t best = 0;
  double dist = std::abs(traj.times[0] - t);
  for (size_t s = 1; s < traj.times.size(); ++s) {
    const double d = std::abs(traj.times[s] - t);
    if (d < dist) {
      dist = d;
      best = s;
    }
  }
  return best;
}

void write_solution_csv(std::ofstream out, const Trajectory& traj,
                        const ManufacturedCase& mc, const std::vector<double>& snaps) {
  const SpaceTimeGrid& g = traj.grid;
  out << "t,x,u_num,u_exact,abs_err\n";
  for (double want : snaps) {
    const size_t s = nearest_stored(traj, want);
    const double t = traj.times[s];
    for (int j = 0; j <= g.x_count(); ++j) {
      const double x = g.x(j);
      const double u_num = (j == 0 || j == g.x_count())
                               ? 0.0
                               : traj.states[s].values[static_cast<size_t>(j - 1)];
      const double u_ex = mc.exact_u(t, x);
      out << format_double(t) << ',' << format_double(x) << ','
          << format_double(u_num) << ',' << format_double(u_ex) << ','
          << format_double(std::abs(u_num - u_ex)) << '\n';
    }
  }
}

void write_source_csv(std::ofstream out, const Trajectory& traj,
                      const ManufacturedCase& mc) {
  out << "t,h_num,h_exact,abs_err,denominator\n";
  for (size_t i = 0; i < traj.diagnostics.size(); ++i) {
    const StepRecord& rec = traj.diagnostics[i];
    const double h_num = traj.source_values ? (*traj.source_values)[i] : rec.h;
    const double h_ex = mc.exact_h(rec.t);
    out << format_double(rec.t) << ',' << format_double(h_num) << ','
        << format_double(h_ex) << ',' << format_double(std::abs(h_num - h_ex))
        << ',' << format_double(rec.denominator) << '\n';
  }
}

void write_errors_csv(std::ofstream out, const ErrorTable& tab) {
  out << "t,u_max_err,u_l2_err,h_abs_err\n";
  for (size_t s = 0; s < tab.times.size(); ++s) {
    out << format_double(tab.times[s]) << ',' << format_double(tab.u_max_err[s])
        << ',' << format_double(tab.u_l2_err[s]) << ','
        << format_double(tab.h_abs_err[s]) << '\n';
  }
}

void write_converge_csv(std::ofstream out, const std::vector<ConvergenceRow>& rows) {
  out << "nx,nt,u_final_max_err,h_max_err,order_u,order_h\n";
  for (const ConvergenceRow& r : rows) {
    out << r.nx << ',' << r.nt << ',' << format_double(r.u_final_max_err) << ','
        << format_double(r.h_max_err) << ',' << format_double(r.order_u) << ','
        << format_double(r.order_h) << '\n';
  }
}

int run_command(const Options& opt) {
  if (opt.nx < 2 || opt.nt < 2) throw usage_error("nx and nt must be >= 2");
  const fs::path outdir(opt.output_dir);

  if (opt.command == "check") {
    const ManufacturedCase mc = build_case(opt);
    const SpaceTimeGrid grid(opt.nx, opt.nt, mc.spec.length, mc.horizon);
    const ConditionReport rep = evaluate_conditions(mc.spec, grid);
    const std::string text = check_interpretation_report(rep);
    open_output(outdir, "check.txt") << text;
    std::string summary = "check " + mc.name +
                          ": zeta_lhs = " + format_double(rep.zeta_lhs);
    for (const std::string& n : rep.notes) summary += "; " + n;
    std::printf("%s\n", summary.c_str());
    return 0;
  }

  if (opt.command == "direct") {
    const ManufacturedCase mc = build_case(opt);
    const SpaceTimeGrid grid(opt.nx, opt.nt, mc.spec.length, mc.horizon);
    const DirectSchemeConfig cfg{parse_scheme(opt.scheme), grid, 1};
    const Trajectory traj = run_direct(mc.spec, mc.exact_h, cfg);
    const ErrorTable tab = compute_errors(traj, mc);
    write_solution_csv(open_output(outdir, "solution.csv"), traj, mc,
                       default_snapshots(opt, mc.horizon));
    write_errors_csv(open_output(outdir, "errors.csv"), tab);
    std::printf("direct %s %s nx=%d nt=%d: u final max err = %s (rel %s)\n",
                mc.name.c_str(), opt.scheme.c_str(), opt.nx, opt.nt,
                format_double(tab.u_max_err.back()).c_str(),
                format_double(tab.final_rel_err_u).c_str());
    return 0;
  }

  if (opt.command == "inverse") {
    const ManufacturedCase mc = build_case(opt);
    const SpaceTimeGrid grid(opt.nx, opt.nt, mc.spec.length, mc.horizon);
    const InverseSchemeConfig cfg{opt.scheme == "rothe" ? InverseScheme::RotheCoupled
                                                        : InverseScheme::CnSplitting,
                                  grid, 1, 1e-12, opt.omega_mollify_width};
    (void)parse_scheme(opt.scheme);
    const Trajectory traj = run_inverse(mc.spec, cfg);
    const ErrorTable tab = compute_errors(traj, mc);
    write_solution_csv(open_output(outdir, "solution.csv"), traj, mc,
                       default_snapshots(opt, mc.horizon));
    write_source_csv(open_output(outdir, "source.csv"), traj, mc);
    write_errors_csv(open_output(outdir, "errors.csv"), tab);
    std::printf(
        "inverse %s %s nx=%d nt=%d: u final rel err = %s, h max rel err = %s\n",
        mc.name.c_str(), opt.scheme.c_str(), opt.nx, opt.nt,
        format_double(tab.final_rel_err_u).c_str(),
        format_double(tab.final_rel_err_h).c_str());
    return 0;
  }

  if (opt.command == "converge") {
    const ManufacturedCase mc = build_case(opt);
    const Scheme scheme = parse_scheme(opt.scheme);
    std::vector<std::pair<int, int>> grids = opt.grids;
    if (grids.empty()) {
      grids = scheme == Scheme::CrankNicolson
                  ? std::vector<std::pair<int, int>>{{50, 200}, {100, 800}, {200, 3200}}
                  : std::vector<std::pair<int, int>>{{400, 50}, {400, 100}, {400, 200}};
    }
    const std::vector<ConvergenceRow> rows =
        convergence_study(mc, grids, scheme, false);
    write_converge_csv(open_output(outdir, "converge.csv"), rows);
    std::string orders;
    for (size_t i = 1; i < rows.size(); ++i) {
      if (i > 1) orders += ", ";
      orders += format_double(rows[i].order_u);
    }
    std::printf("converge %s %s: u orders %s\n", mc.name.c_str(),
                opt.scheme.c_str(), orders.c_str());
    return 0;
  }

  throw usage_error("unknown command '" + opt.command +
                    "' (want direct, inverse, converge or check)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"1-D pseudo-parabolic solver: direct runs and recovery of the "
               "time factor h(t) of a separated source from a weighted "
               "spatial-average measurement"};
  app.name("ppsolve");

  std::string command;
  std::string config_path;
  std::string case_name, scheme, output_dir, case_file, snapshot_arg, grids_arg;
  int nx = 0, nt = 0;
  long seed = 0;
  double mollify = 0.0;
  bool rounded = false;

  app.add_option("command", command, "direct | inverse | converge | check");
  app.add_option("--config", config_path, "flat key = value config file");
  app.add_option("--case", case_name, "1, 2, case1, case2 or custom");
  app.add_option("--scheme", scheme, "cn or rothe");
  app.add_option("--nx", nx, "spatial cells (>= 2)");
  app.add_option("--nt", nt, "time steps (>= 2)");
  app.add_flag("--paper-rounded-m", rounded, "use the rounded measurement constant");
  app.add_option("--omega-mollify-width", mollify,
                 "ramp width of the C1 window substituted for an indicator "
                 "omega in the Rothe inverse scheme (0 disables; default 4*dx)");
  app.add_option("--output-dir", output_dir, "directory for CSV output");
  app.add_option("--seed", seed, "seed for perturbation smoke tests");
  app.add_option("--case-file", case_file, "problem definition for case=custom");
  app.add_option("--snapshot-times", snapshot_arg,
                 "comma-separated display times for solution.csv");
  app.add_option("--grids", grids_arg, "comma-separated nx:nt list for converge");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    Options opt;
    if (!config_path.empty()) apply_config_file(opt, config_path);
    // flags the user actually passed override the file
    if (!command.empty()) opt.command = command;
    if (app.count("--case") > 0) opt.case_name = normalize_case(case_name);
    if (app.count("--scheme") > 0) opt.scheme = scheme;
    if (app.count("--nx") > 0) opt.nx = nx;
    if (app.count("--nt") > 0) opt.nt = nt;
    if (app.count("--paper-rounded-m") > 0) opt.paper_rounded_m = rounded;
    if (app.count("--omega-mollify-width") > 0) opt.omega_mollify_width = mollify;
    if (app.count("--output-dir") > 0) opt.output_dir = output_dir;
    if (app.count("--seed") > 0) opt.seed = seed;
    if (app.count("--case-file") > 0) opt.case_file = case_file;
    if (app.count("--snapshot-times") > 0) {
      opt.snapshot_times = parse_real_list(snapshot_arg, "snapshot-times");
    }
    if (app.count("--grids") > 0) opt.grids = parse_grid_list(grids_arg);
    if (opt.command.empty()) {
      throw usage_error("no command given (pass one of direct, inverse, "
                        "converge, check, or command= in the config file)");
    }
    return run_command(opt);
  } catch (const identifiability_error& e) {
    if (e.step >= 0) {
      std::fprintf(stderr, "ppsolve: identifiability failure at step %d (t = %s): %s\n",
                   e.step, format_double(e.time).c_str(), e.what());
    } else {
      std::fprintf(stderr, "ppsolve: identifiability failure: %s\n", e.what());
    }
    return 2;
  } catch (const assumption_error& e) {
    std::fprintf(stderr, "ppsolve: assumption violated: %s\n", e.what());
    return 3;
  } catch (const usage_error& e) {
    std::fprintf(stderr, "ppsolve: usage error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "ppsolve: error: %s\n", e.what());
    return 1;
  }
}
