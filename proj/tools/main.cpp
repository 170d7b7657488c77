// nlad: command-line front end.
//
//   nlad dispersion   growth rates of the homogeneous state per Fourier mode
//   nlad thresholds   critical mode and gamma_c, or gamma_c(L) with --scan-L
//   nlad wnl          amplitude-equation coefficients and bifurcation class
//   nlad branch       analytic small-amplitude branch
//   nlad simulate     one time integration from a config file
//   nlad continuation up/down parameter sweeps from a config file
//
// Exit codes: 0 success, 2 usage error, 3 numerical failure.

#include <CLI11.hpp>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "nlad/config.hpp"
#include "nlad/continuation.hpp"
#include "nlad/errors.hpp"
#include "nlad/io.hpp"
#include "nlad/linear_stability.hpp"
#include "nlad/spectral_solver.hpp"
#include "nlad/weakly_nonlinear.hpp"

using namespace nlad;

namespace {

constexpr int kUsage = 2;
constexpr int kNumerical = 3;

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct ModelFlags {
  double L = 0;
  double u1 = 1;
  double u2 = 1;
  double gamma = 0;
  std::string kernel = "tophat";
  std::string out;  // empty: stdout

  void add(CLI::App* app, bool need_L) {
    auto* o = app->add_option("--L", L, "domain length (> 2)");
    if (need_L) o->required();
    app->add_option("--u1", u1, "equilibrium density of species 1")->capture_default_str();
    app->add_option("--u2", u2, "equilibrium density of species 2")->capture_default_str();
    app->add_option("--gamma", gamma, "advection strength")->capture_default_str();
    app->add_option("--kernel", kernel, "tophat or tabulated:<file>")->capture_default_str();
    app->add_option("-o,--out", out, "output file (default stdout)");
  }

  ModelParams<double> params(double L_value) const {
    RunConfig c;
    c.kernel = kernel;
    c.model.L = L_value;
    c.model.u1_bar = u1;
    c.model.u2_bar = u2;
    c.model.gamma = gamma;
    if (kernel != "tophat" && kernel.rfind("tabulated:", 0) != 0)
      throw UsageError("kernel must be tophat or tabulated:<file>");
    c.finalize();
    return c.model;
  }

  Header header(const std::string& command) const {
    return {{"command", command}, {"L", fmt17(L)},         {"u1_bar", fmt17(u1)},
            {"u2_bar", fmt17(u2)}, {"gamma", fmt17(gamma)}, {"kernel", kernel}};
  }
};

struct Output {
  std::ofstream file;
  std::ostream* os = &std::cout;
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file.open(path);
      if (!file) throw std::runtime_error("cannot write " + path);
      os = &file;
    }
  }
};

std::vector<double> parse_range(const std::string& s) {
  std::vector<double> parts;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ':')) {
    try {
      std::size_t pos = 0;
      parts.push_back(std::stod(tok, &pos));
      if (pos != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw UsageError("range must look like start:stop:step, got " + s);
    }
  }
  if (parts.size() != 3 || !(parts[2] > 0) || parts[1] < parts[0])
    throw UsageError("range must look like start:stop:step with step > 0, got " + s);
  std::vector<double> v;
  const long n = static_cast<long>(std::floor((parts[1] - parts[0]) / parts[2] + 1e-9));
  for (long i = 0; i <= n; ++i) v.push_back(parts[0] + i * parts[2]);
  return v;
}

Side parse_side(const std::string& s) {
  if (s == "plus") return Side::plus;
  if (s == "minus") return Side::minus;
  throw UsageError("side must be plus or minus");
}

// ---------------------------------------------------------------- dispersion

int cmd_dispersion(const ModelFlags& f, int m_max) {
  const auto p = f.params(f.L);
  if (m_max <= 0) m_max = default_mode_window(p);
  const auto pts = dispersion(p, m_max);
  Output out(f.out);
  Header h = f.header("dispersion");
  h.emplace_back("m_max", std::to_string(m_max));
  write_header(*out.os, h);
  *out.os << "m,q,lambda_plus,lambda_minus\n";
  for (const auto& d : pts)
    *out.os << d.m << ',' << fmt17(d.q) << ',' << fmt17(d.lambda_plus) << ',' << fmt17(d.lambda_minus) << '\n';
  return 0;
}

// ---------------------------------------------------------------- thresholds

int cmd_thresholds(const ModelFlags& f, const std::string& scan) {
  if (scan.empty()) {
    if (!(f.L != 0)) throw UsageError("--L or --scan-L is required");
    const auto c = critical_mode(f.params(f.L));
    Output out(f.out);
    *out.os << "m_c = " << c.m_c << '\n'
            << "q_c = " << fmt6(c.q_c) << '\n'
            << "gamma_c_plus = " << fmt6(c.gamma_c_plus) << '\n'
            << "gamma_c_minus = " << fmt6(c.gamma_c_minus) << '\n';
    return 0;
  }
  const auto Ls = parse_range(scan);
  Output out(f.out);
  Header h = f.header("thresholds");
  h.emplace_back("scan_L", scan);
  write_header(*out.os, h);
  *out.os << "L,m_c,q_c,gamma_c_plus,gamma_c_minus\n";
  for (double L : Ls) {
    const auto c = critical_mode(f.params(L));
    *out.os << fmt17(L) << ',' << c.m_c << ',' << fmt17(c.q_c) << ',' << fmt17(c.gamma_c_plus) << ','
            << fmt17(c.gamma_c_minus) << '\n';
  }
  return 0;
}

// ---------------------------------------------------------------- wnl

void print_coefficients(std::ostream& os, const WnlCoefficients<double>& c) {
  os << "gamma_c = " << fmt6(c.gamma_c) << '\n'
     << "q_c = " << fmt6(c.q_c) << '\n'
     << "m_c = " << c.m_c << '\n'
     << "rho2 = " << fmt6(c.rho2) << '\n'
     << "a2 = " << fmt6(c.a2) << '\n'
     << "psi1 = " << fmt6(c.psi1) << '\n'
     << "psi2 = " << fmt6(c.psi2) << '\n'
     << "sigma = " << fmt6(c.sigma) << '\n'
     << "Lambda = " << fmt6(c.Lambda) << '\n'
     << "nu = " << fmt6(c.nu) << '\n'
     << "mu = " << fmt6(c.mu) << '\n'
     << "eta = " << fmt6(c.eta) << '\n'
     << "Gamma = " << (c.Gamma ? fmt6(*c.Gamma) : std::string("undefined")) << '\n'
     << "class = " << to_string(classify(c)) << '\n';
}

int cmd_wnl(const ModelFlags& f, const std::string& side_s, const std::string& scan) {
  const Side side = parse_side(side_s);
  if (scan.empty()) {
    if (!(f.L != 0)) throw UsageError("--L or --scan-L is required");
    const auto c = wnl_coefficients(f.params(f.L), side, Regime::unstable);
    Output out(f.out);
    print_coefficients(*out.os, c);
    return 0;
  }
  const auto Ls = parse_range(scan);
  Output out(f.out);
  Header h = f.header("wnl");
  h.emplace_back("side", side_s);
  h.emplace_back("scan_L", scan);
  write_header(*out.os, h);
  *out.os << "L,gamma_c,q_c,Lambda,Gamma,class\n";
  for (double L : Ls) {
    const auto p = f.params(L);
    *out.os << fmt17(L) << ',';
    try {
      const auto c = wnl_coefficients(p, side, Regime::unstable);
      *out.os << fmt17(c.gamma_c) << ',' << fmt17(c.q_c) << ',' << fmt17(c.Lambda) << ','
              << (c.Gamma ? fmt17(*c.Gamma) : std::string("nan")) << ',' << to_string(classify(c)) << '\n';
    } catch (const SecondHarmonicResonance&) {
      *out.os << "nan,nan,nan,nan,resonance\n";
    }
  }
  return 0;
}

// ---------------------------------------------------------------- branch

int cmd_branch(const ModelFlags& f, const std::string& side_s, double lo_rel, double hi_rel, int points) {
  const Side side = parse_side(side_s);
  if (points < 1) throw UsageError("--points must be positive");
  const auto p = f.params(f.L);
  const double gc = critical_mode(p).gamma_c(sign_of(side));
  const auto b = analytic_branch(p, side, lo_rel * gc, hi_rel * gc, points);
  Output out(f.out);
  Header h = f.header("branch");
  h.emplace_back("side", side_s);
  h.emplace_back("gamma_min_rel", fmt17(lo_rel));
  h.emplace_back("gamma_max_rel", fmt17(hi_rel));
  h.emplace_back("points", std::to_string(points));
  h.emplace_back("class", std::string(to_string(b.kind)));
  write_header(*out.os, h);
  *out.os << "gamma,epsilon,amplitude,second_harmonic,regime,stable\n";
  for (const auto& s : b.points)
    *out.os << fmt17(s.gamma) << ',' << fmt17(s.epsilon) << ',' << fmt17(s.amplitude) << ','
            << fmt17(s.second_harmonic) << ',' << to_string(s.regime) << ',' << (s.stable ? 1 : 0) << '\n';
  return 0;
}

// ---------------------------------------------------------------- config-driven commands

RunConfig resolve_config(const std::string& path, const std::map<std::string, std::string>& overrides) {
  RunConfig c = path.empty() ? RunConfig{} : load_config(path);
  for (const auto& [k, v] : overrides) c.set(k, v);
  c.finalize();
  return c;
}

Header config_header(const std::string& command, const RunConfig& c) {
  Header h{{"command", command}};
  for (auto& e : c.entries()) h.push_back(e);
  return h;
}

StateGrid initial_state(const RunConfig& c) {
  const auto& p = c.model;
  switch (c.initial) {
    case InitialCondition::perturbed:
      return perturbed_homogeneous(p, c.solver.n, c.perturbation, c.noise, c.seed);
    case InitialCondition::wnl: {
      const Side side = p.gamma >= 0 ? Side::plus : Side::minus;
      const double gc = critical_mode(p).gamma_c(sign_of(side));
      const auto w = wnl_coefficients(p, side, regime_of(p.gamma, gc));
      StateGrid s = wnl_profile(p, w, epsilon_of(p.gamma, gc), c.solver.n);
      if (c.perturbation > 0 || c.noise > 0) {
        const StateGrid d = perturbed_homogeneous(p, c.solver.n, c.perturbation, c.noise, c.seed);
        s.u1.array() += d.u1.array() - p.u1_bar;
        s.u2.array() += d.u2.array() - p.u2_bar;
      }
      return s;
    }
    case InitialCondition::checkpoint: {
      const Checkpoint ck = read_checkpoint(c.checkpoint_in);
      if (ck.state.n != c.solver.n) throw UsageError("checkpoint grid size does not match n");
      if (std::abs(ck.state.L - p.L) > 1e-12 * p.L) throw UsageError("checkpoint domain length does not match L");
      return ck.state;
    }
  }
  throw std::logic_error("unhandled initial condition");
}

int cmd_simulate(const RunConfig& c) {
  const StateGrid init = initial_state(c);
  SpectralSolver solver(c.model, c.solver);
  const SimulationResult r = solver.run(init);
  const Header h = config_header("simulate", c);
  {
    std::ofstream f(c.output + "_state.csv");
    if (!f) throw std::runtime_error("cannot write " + c.output + "_state.csv");
    write_header(f, h);
    write_state_csv(f, r.final_state);
  }
  {
    std::ofstream f(c.output + "_series.csv");
    if (!f) throw std::runtime_error("cannot write " + c.output + "_series.csv");
    write_header(f, h);
    write_series_csv(f, r.times, r.amplitude_series);
  }
  write_checkpoint(c.output + ".ckpt", {r.final_state, c.model.gamma, c.model.u1_bar, c.model.u2_bar, r.t_final});

  const BranchPoint bp = make_branch_point(c.model.gamma, r.final_state, r.reached_steady);
  std::cout << "t_final = " << fmt6(r.t_final) << '\n'
            << "dt = " << fmt6(r.dt_used) << '\n'
            << "steady = " << (r.reached_steady ? "yes" : "no") << '\n'
            << "residual = " << fmt6(r.residual) << '\n'
            << "amplitude = " << fmt6(bp.amplitude) << '\n'
            << "total_amplitude = " << fmt6(bp.total_amplitude) << '\n'
            << "mode1_energy_fraction = " << fmt6(bp.mode1_energy_fraction) << '\n'
            << "modulation = " << to_string(classify_modulation(bp)) << '\n'
            << "phase_correlation = " << fmt6(bp.phase_correlation) << '\n'
            << "mass_drift = " << fmt6(r.mass_drift) << '\n'
            << "negative_density = " << (r.negative_density ? "yes" : "no") << '\n';
  if (r.negative_density) std::cerr << "nlad: warning: negative density in the final state\n";
  return 0;
}

void write_sweep(const std::string& path, const Header& h, const std::vector<BranchPoint>& pts, Direction d) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path);
  write_header(f, h);
  write_diagram_csv(f, pts, d);
}

int cmd_continuation(const RunConfig& c) {
  const auto& p = c.model;
  const double sign = (c.gamma_min ? *c.gamma_min : p.gamma) < 0 ? -1.0 : 1.0;
  const Side side = sign > 0 ? Side::plus : Side::minus;
  const double gc = critical_mode(p).gamma_c(sign_of(side));
  std::vector<double> grid;
  if (c.gamma_min) {
    for (int i = 0; i < c.n_points; ++i)
      grid.push_back(*c.gamma_min + (*c.gamma_max - *c.gamma_min) * i / (c.n_points - 1));
  } else {
    grid = default_gamma_grid(gc, c.n_points);
  }

  SweepOptions opt;
  opt.seed_mode = c.seed_mode;
  opt.noise = c.perturbation;
  opt.seed = c.seed;

  std::vector<BranchPoint> up, down;
  if (c.direction != SweepDirection::down) {
    up = sweep(p, grid, c.solver, opt);
    if (c.refine > 1) {
      const auto refined = refine_near_jumps(up, c.refine);
      if (refined.size() != grid.size()) {
        grid = refined;
        up = sweep(p, grid, c.solver, opt);
      }
    }
  }
  if (c.direction != SweepDirection::up) {
    SweepOptions dopt = opt;
    dopt.seed_mode = SeedMode::previous_state;
    if (!up.empty() && up.back().state) dopt.initial = *up.back().state;
    down = sweep(p, std::vector<double>(grid.rbegin(), grid.rend()), c.solver, dopt);
  }

  const Header h = config_header("continuation", c);
  if (!up.empty()) write_sweep(c.output + "_up.csv", h, up, Direction::upward);
  if (!down.empty()) write_sweep(c.output + "_down.csv", h, down, Direction::downward);

  std::optional<std::pair<double, double>> interval;
  if (!up.empty() && !down.empty()) interval = build_diagram(up, down).hysteresis_interval;
  {
    Header hd = h;
    hd.emplace_back("gamma_c", fmt17(gc));
    hd.emplace_back("hysteresis_interval",
                    interval ? fmt17(interval->first) + ":" + fmt17(interval->second) : std::string("none"));
    std::ofstream f(c.output + "_diagram.csv");
    if (!f) throw std::runtime_error("cannot write " + c.output + "_diagram.csv");
    write_header(f, hd);
    write_diagram_csv(f, up, Direction::upward);
    write_diagram_csv(f, down, Direction::downward, false);
  }
  {
    std::ofstream f(c.output + "_analytic.csv");
    if (!f) throw std::runtime_error("cannot write " + c.output + "_analytic.csv");
    Header ha = h;
    try {
      const auto b = analytic_branch(p, side, grid);
      ha.emplace_back("class", std::string(to_string(b.kind)));
      write_header(f, ha);
      f << "gamma,epsilon,amplitude,regime,stable\n";
      for (const auto& s : b.points)
        f << fmt17(s.gamma) << ',' << fmt17(s.epsilon) << ',' << fmt17(s.amplitude) << ',' << to_string(s.regime)
          << ',' << (s.stable ? 1 : 0) << '\n';
    } catch (const std::domain_error& e) {
      ha.emplace_back("class", std::string("unavailable: ") + e.what());
      write_header(f, ha);
      f << "gamma,epsilon,amplitude,regime,stable\n";
    }
  }

  int failed = 0, strong = 0;
  for (const auto* v : {&up, &down})
    for (const auto& b : *v) {
      failed += !b.converged;
      strong += b.converged && classify_modulation(b) == Modulation::StronglyModulated;
    }
  std::cout << "gamma_c = " << fmt6(gc) << '\n'
            << "points = " << up.size() + down.size() << '\n'
            << "not_converged = " << failed << '\n'
            << "strongly_modulated = " << strong << '\n'
            << "hysteresis_interval = "
            << (interval ? fmt6(interval->first) + " .. " + fmt6(interval->second) : std::string("none")) << '\n';
  return 0;
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    for (const auto& e : RunConfig{}.entries()) k.push_back(e.first);
    return k;
  }();
  return keys;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Nonlocal advection-diffusion: linear, weakly nonlinear and numerical analysis"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  ModelFlags df, tf, wf, bf;
  int m_max = 0;
  auto* disp = app.add_subcommand("dispersion", "growth rates lambda+- per mode, CSV");
  df.add(disp, true);
  disp->add_option("--mmax", m_max, "largest mode (default ceil(4L))");

  std::string t_scan;
  auto* thr = app.add_subcommand("thresholds", "critical mode and thresholds");
  tf.add(thr, false);
  thr->add_option("--scan-L", t_scan, "start:stop:step, CSV of gamma_c(L)");

  std::string w_side = "plus", w_scan;
  auto* wnl = app.add_subcommand("wnl", "amplitude-equation coefficients");
  wf.add(wnl, false);
  wnl->add_option("--side", w_side, "plus or minus")->capture_default_str();
  wnl->add_option("--scan-L", w_scan, "start:stop:step, CSV of Lambda(L) and Gamma(L)");

  std::string b_side = "plus";
  double b_lo = 0.9, b_hi = 1.3;
  int b_points = 81;
  auto* br = app.add_subcommand("branch", "analytic small-amplitude branch, CSV");
  bf.add(br, true);
  br->add_option("--side", b_side, "plus or minus")->capture_default_str();
  br->add_option("--gamma-min", b_lo, "lower end, as a multiple of gamma_c")->capture_default_str();
  br->add_option("--gamma-max", b_hi, "upper end, as a multiple of gamma_c")->capture_default_str();
  br->add_option("--points", b_points, "number of gamma values")->capture_default_str();

  std::string sim_cfg, cont_cfg;
  std::map<std::string, std::string> sim_over, cont_over;
  auto* sim = app.add_subcommand("simulate", "one simulation from a config file");
  auto* cont = app.add_subcommand("continuation", "gamma sweeps from a config file");
  sim->add_option("config", sim_cfg, "config file")->check(CLI::ExistingFile);
  cont->add_option("config", cont_cfg, "config file")->check(CLI::ExistingFile);
  // Every config key is also a flag; flags win over the file.
  for (const auto& k : config_keys()) {
    sim->add_option_function<std::string>("--" + k, [&, k](const std::string& v) { sim_over[k] = v; },
                                          "overrides config key " + k);
    cont->add_option_function<std::string>("--" + k, [&, k](const std::string& v) { cont_over[k] = v; },
                                           "overrides config key " + k);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*disp) return cmd_dispersion(df, m_max);
    if (*thr) return cmd_thresholds(tf, t_scan);
    if (*wnl) return cmd_wnl(wf, w_side, w_scan);
    if (*br) return cmd_branch(bf, b_side, b_lo, b_hi, b_points);
    if (*sim) return cmd_simulate(resolve_config(sim_cfg, sim_over));
    if (*cont) return cmd_continuation(resolve_config(cont_cfg, cont_over));
  } catch (const UsageError& e) {
    std::cerr << "nlad: " << e.what() << '\n';
    return kUsage;
  } catch (const ConfigError& e) {
    std::cerr << "nlad: " << e.what() << '\n';
    return kUsage;
  } catch (const ModelError& e) {
    std::cerr << "nlad: " << e.what() << '\n';
    return kUsage;
  } catch (const BlowUp& e) {
    std::cerr << "nlad: numerical blow-up: " << e.what() << " (t = " << fmt6(e.time) << ")\n";
    return kNumerical;
  } catch (const SecondHarmonicResonance& e) {
    std::cerr << "nlad: second-harmonic resonance: " << e.what() << '\n';
    return kNumerical;
  } catch (const ModeNeverDestabilized& e) {
    std::cerr << "nlad: " << e.what() << '\n';
    return kNumerical;
  } catch (const std::invalid_argument& e) {
    std::cerr << "nlad: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "nlad: " << e.what() << '\n';
    return kNumerical;
  }
  return kUsage;
}
