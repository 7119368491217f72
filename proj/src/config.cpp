#include "hallmhd/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

namespace hallmhd {

const char* to_string(ForcingFamily f) { return f == ForcingFamily::Zero ? "zero" : "manufactured"; }
const char* to_string(ForcingMode m) { return m == ForcingMode::Analytic ? "analytic" : "discrete"; }
const char* to_string(ProblemKind p) {
  switch (p) {
    case ProblemKind::Coupled:
      return "coupled";
    case ProblemKind::Stokes:
      return "stokes";
    case ProblemKind::Maxwell:
      return "maxwell";
  }
  return "?";
}

ForcingMode parse_forcing_mode(const std::string& s) {
  if (s == "analytic") return ForcingMode::Analytic;
  if (s == "discrete") return ForcingMode::Discrete;
  throw ConfigError("forcing_mode must be analytic or discrete, got '" + s + "'");
}

ProblemKind parse_problem(const std::string& s) {
  if (s == "coupled") return ProblemKind::Coupled;
  if (s == "stokes") return ProblemKind::Stokes;
  if (s == "maxwell") return ProblemKind::Maxwell;
  throw ConfigError("problem must be coupled, stokes or maxwell, got '" + s + "'");
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    throw ConfigError("key '" + key + "': not a number: '" + v + "'");
  }
  return out;
}

long long to_integer(const std::string& key, const std::string& v) {
  long long out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    throw ConfigError("key '" + key + "': not an integer: '" + v + "'");
  }
  return out;
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(v);
  while (std::getline(is, item, ',')) out.push_back(trim(item));
  return out;
}

template <typename T, typename Conv>
std::array<T, 3> triple(const std::string& key, const std::string& v, Conv conv) {
  const auto items = split_list(v);
  if (items.size() != 3) throw ConfigError("key '" + key + "' needs three comma-separated values");
  return {static_cast<T>(conv(key, items[0])), static_cast<T>(conv(key, items[1])),
          static_cast<T>(conv(key, items[2]))};
}

}  // namespace

void SolverConfig::validate(bool for_solve) const {
  if (n < 4) throw ConfigError("n must be >= 4");
  if (for_solve && n < 8) throw ConfigError("solve runs need n >= 8");
  if (!(q > 3.0)) throw ConfigError("q must be > 3");
  if (!(mu >= 0.0) || !std::isfinite(mu)) throw ConfigError("mu must be finite and >= 0");
  if (kappa && !(*kappa > 0.0)) throw ConfigError("kappa must be > 0");
  if (!(outer_tol > 0.0 && outer_tol < 1.0)) throw ConfigError("outer_tol must lie in (0, 1)");
  if (!(inner_rtol > 0.0 && inner_rtol < 1.0)) throw ConfigError("inner_rtol must lie in (0, 1)");
  if (max_outer < 1) throw ConfigError("max_outer must be >= 1");
  if (max_inner < 1) throw ConfigError("max_inner must be >= 1");
  if (workers < 1) throw ConfigError("workers must be >= 1");
  if (probe_trials < 1) throw ConfigError("probe_trials must be >= 1");
  if (!std::isfinite(forcing.amplitude)) throw ConfigError("amplitude must be finite");
  for (int m : forcing.modes)
    if (m < 1) throw ConfigError("modes must be positive integers");
}

SolverConfig parse_config(std::istream& is) {
  SolverConfig c;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(lineno) + ": expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string v = trim(line.substr(eq + 1));
    if (v.empty()) throw ConfigError("line " + std::to_string(lineno) + ": empty value for '" + key + "'");
    if (key == "n") {
      c.n = static_cast<int>(to_integer(key, v));
    } else if (key == "q") {
      c.q = to_double(key, v);
    } else if (key == "mu") {
      c.mu = to_double(key, v);
    } else if (key == "kappa") {
      if (v == "off" || v == "none") {
        c.kappa.reset();
      } else {
        c.kappa = to_double(key, v);
      }
    } else if (key == "outer_tol") {
      c.outer_tol = to_double(key, v);
    } else if (key == "inner_rtol") {
      c.inner_rtol = to_double(key, v);
    } else if (key == "max_outer") {
      c.max_outer = static_cast<int>(to_integer(key, v));
    } else if (key == "max_inner") {
      c.max_inner = static_cast<int>(to_integer(key, v));
    } else if (key == "forcing") {
      if (v == "zero") {
        c.forcing.family = ForcingFamily::Zero;
      } else if (v == "manufactured") {
        c.forcing.family = ForcingFamily::Manufactured;
      } else {
        throw ConfigError("forcing must be zero or manufactured, got '" + v + "'");
      }
    } else if (key == "forcing_mode") {
      c.forcing.mode = parse_forcing_mode(v);
    } else if (key == "problem") {
      c.forcing.problem = parse_problem(v);
    } else if (key == "amplitude") {
      c.forcing.amplitude = to_double(key, v);
    } else if (key == "modes") {
      c.forcing.modes = triple<int>(key, v, to_integer);
    } else if (key == "coefficients") {
      c.forcing.coefficients = triple<double>(key, v, to_double);
    } else if (key == "potential") {
      c.forcing.potential = triple<double>(key, v, to_double);
    } else if (key == "seed") {
      const long long s = to_integer(key, v);
      if (s < 0) throw ConfigError("seed must be >= 0");
      c.seed = static_cast<std::uint64_t>(s);
    } else if (key == "probe_trials") {
      c.probe_trials = static_cast<int>(to_integer(key, v));
    } else if (key == "workers") {
      c.workers = static_cast<int>(to_integer(key, v));
    } else {
      throw ConfigError("line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
  }
  c.validate(false);
  return c;
}

SolverConfig load_config(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config file " + path.string());
  return parse_config(is);
}

std::string to_config_text(const SolverConfig& c) {
  std::ostringstream os;
  os.precision(17);
  auto list = [&](const auto& a) {
    std::ostringstream l;
    l.precision(17);
    l << a[0] << "," << a[1] << "," << a[2];
    return l.str();
  };
  os << "n = " << c.n << "\n"
     << "q = " << c.q << "\n"
     << "mu = " << c.mu << "\n";
  if (c.kappa) {
    os << "kappa = " << *c.kappa << "\n";
  } else {
    os << "kappa = off\n";
  }
  os << "outer_tol = " << c.outer_tol << "\n"
     << "inner_rtol = " << c.inner_rtol << "\n"
     << "max_outer = " << c.max_outer << "\n"
     << "max_inner = " << c.max_inner << "\n"
     << "forcing = " << to_string(c.forcing.family) << "\n"
     << "forcing_mode = " << to_string(c.forcing.mode) << "\n"
     << "problem = " << to_string(c.forcing.problem) << "\n"
     << "amplitude = " << c.forcing.amplitude << "\n"
     << "modes = " << list(c.forcing.modes) << "\n"
     << "coefficients = " << list(c.forcing.coefficients) << "\n"
     << "potential = " << list(c.forcing.potential) << "\n"
     << "seed = " << c.seed << "\n"
     << "probe_trials = " << c.probe_trials << "\n"
     << "workers = " << c.workers << "\n";
  return os.str();
}

}  // namespace hallmhd
