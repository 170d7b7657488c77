#include "nlad/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "nlad/io.hpp"

namespace nlad {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size() || !std::isfinite(d)) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ConfigError("invalid number for '" + key + "': " + v);
  }
}

long long to_int(const std::string& key, const std::string& v) {
  long long out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) throw ConfigError("invalid integer for '" + key + "': " + v);
  return out;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError("invalid boolean for '" + key + "': " + v);
}

}  // namespace

std::string to_string(InitialCondition c) {
  switch (c) {
    case InitialCondition::perturbed:
      return "perturbed";
    case InitialCondition::wnl:
      return "wnl";
    case InitialCondition::checkpoint:
      return "checkpoint";
  }
  return "?";
}

std::string to_string(SweepDirection d) {
  switch (d) {
    case SweepDirection::up:
      return "up";
    case SweepDirection::down:
      return "down";
    case SweepDirection::both:
      return "both";
  }
  return "?";
}

void RunConfig::set(const std::string& key, const std::string& raw) {
  const std::string v = trim(raw);
  if (v.empty()) throw ConfigError("empty value for '" + key + "'");
  if (key == "gamma") model.gamma = to_double(key, v);
  else if (key == "u1_bar") model.u1_bar = to_double(key, v);
  else if (key == "u2_bar") model.u2_bar = to_double(key, v);
  else if (key == "L") model.L = to_double(key, v);
  else if (key == "kernel") {
    if (v != "tophat" && v.rfind("tabulated:", 0) != 0) throw ConfigError("kernel must be tophat or tabulated:<file>");
    kernel = v;
  } else if (key == "n") solver.n = static_cast<int>(to_int(key, v));
  else if (key == "dt") solver.dt = to_double(key, v);
  else if (key == "t_max") solver.t_max = to_double(key, v);
  else if (key == "steady_tol") solver.steady_tol = to_double(key, v);
  else if (key == "dealias") solver.dealias = to_bool(key, v);
  else if (key == "record_every") solver.record_every = static_cast<int>(to_int(key, v));
  else if (key == "check_every") solver.check_every = static_cast<int>(to_int(key, v));
  else if (key == "max_halvings") solver.max_halvings = static_cast<int>(to_int(key, v));
  else if (key == "seed") {
    const long long s = to_int(key, v);
    if (s < 0) throw ConfigError("seed must be nonnegative");
    seed = static_cast<std::uint64_t>(s);
  } else if (key == "initial") {
    if (v == "perturbed") initial = InitialCondition::perturbed;
    else if (v == "wnl") initial = InitialCondition::wnl;
    else if (v.rfind("checkpoint:", 0) == 0) {
      initial = InitialCondition::checkpoint;
      checkpoint_in = v.substr(11);
    } else
      throw ConfigError("initial must be perturbed, wnl or checkpoint:<file>");
  } else if (key == "perturbation") perturbation = to_double(key, v);
  else if (key == "noise") noise = to_double(key, v);
  else if (key == "gamma_min") gamma_min = to_double(key, v);
  else if (key == "gamma_max") gamma_max = to_double(key, v);
  else if (key == "n_points") n_points = static_cast<int>(to_int(key, v));
  else if (key == "direction") {
    if (v == "up") direction = SweepDirection::up;
    else if (v == "down") direction = SweepDirection::down;
    else if (v == "both") direction = SweepDirection::both;
    else throw ConfigError("direction must be up, down or both");
  } else if (key == "seed_mode") {
    try {
      seed_mode = parse_seed_mode(v);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  } else if (key == "refine") refine = static_cast<int>(to_int(key, v));
  else if (key == "output") output = v;
  else throw ConfigError("unknown key: " + key);
}

void RunConfig::finalize() {
  try {
    validate(model);
    solver.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (n_points < 2) throw ConfigError("n_points must be at least 2");
  if (refine < 1) throw ConfigError("refine must be at least 1");
  if (perturbation < 0 || noise < 0) throw ConfigError("perturbation and noise must be nonnegative");
  if (gamma_min && gamma_max && !(std::abs(*gamma_min) < std::abs(*gamma_max)))
    throw ConfigError("|gamma_min| must be below |gamma_max|");
  if (gamma_min.has_value() != gamma_max.has_value()) throw ConfigError("gamma_min and gamma_max go together");
  if (initial == InitialCondition::checkpoint && checkpoint_in.empty()) throw ConfigError("checkpoint path missing");
  if (kernel == "tophat") {
    model.kernel = TopHat{};
  } else {
    try {
      model.kernel = load_tabulated_kernel(kernel.substr(10));
    } catch (const ModelError& e) {
      throw ConfigError(std::string("kernel: ") + e.what());
    }
  }
}

std::vector<std::pair<std::string, std::string>> RunConfig::entries() const {
  std::vector<std::pair<std::string, std::string>> e = {
      {"gamma", fmt17(model.gamma)},
      {"u1_bar", fmt17(model.u1_bar)},
      {"u2_bar", fmt17(model.u2_bar)},
      {"L", fmt17(model.L)},
      {"kernel", kernel},
      {"n", std::to_string(solver.n)},
      {"dt", fmt17(solver.resolved_dt(model.L))},
      {"t_max", fmt17(solver.t_max)},
      {"steady_tol", fmt17(solver.steady_tol)},
      {"dealias", solver.dealias ? "true" : "false"},
      {"record_every", std::to_string(solver.record_every)},
      {"check_every", std::to_string(solver.check_every)},
      {"max_halvings", std::to_string(solver.max_halvings)},
      {"seed", std::to_string(seed)},
      {"initial", initial == InitialCondition::checkpoint ? "checkpoint:" + checkpoint_in : to_string(initial)},
      {"perturbation", fmt17(perturbation)},
      {"noise", fmt17(noise)},
      {"gamma_min", gamma_min ? fmt17(*gamma_min) : "auto"},
      {"gamma_max", gamma_max ? fmt17(*gamma_max) : "auto"},
      {"n_points", std::to_string(n_points)},
      {"direction", to_string(direction)},
      {"seed_mode", std::string(to_string(seed_mode))},
      {"refine", std::to_string(refine)},
      {"output", output},
  };
  return e;
}

RunConfig parse_config(std::istream& in) {
  RunConfig c;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    c.set(trim(t.substr(0, eq)), t.substr(eq + 1));
  }
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config file: " + path);
  return parse_config(f);
}

Tabulated<double> load_tabulated_kernel(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open kernel file: " + path);
  std::vector<double> samples;
  std::string tok;
  while (f >> tok) {
    if (tok[0] == '#') {
      std::getline(f, tok);
      continue;
    }
    samples.push_back(to_double("kernel sample", tok));
  }
  return Tabulated<double>(std::move(samples));
}

}  // namespace nlad
