/// @file config.hpp
/// @brief Solver configuration and its flat `key = value` file format.
///
/// Recognized keys (defaults in brackets):
///   n [16]               cells per axis
///   q [4]                integrability exponent, must exceed 3
///   mu [1.0]             Hall coefficient
///   kappa [off]          D-set bound on ||B||_W1q
///   outer_tol [1e-8]     Picard tolerance
///   inner_rtol [1e-10]   relative tolerance of every linear solve
///   max_outer [200]      Picard iteration cap
///   max_inner [500]      Krylov iteration cap
///   forcing [zero]       zero | manufactured
///   forcing_mode [analytic]  analytic | discrete
///   problem [coupled]    coupled | stokes | maxwell
///   amplitude [1e-2]     manufactured amplitude a
///   modes [1,1,1]        eigenmode integers (m1,m2,m3)
///   coefficients [1,-1,0]  eigenmode coefficients (alpha,beta,gamma)
///   potential [1,1,1]    stream-potential weights for u*
///   seed [12345]         RNG seed for probes and perturbations
///   probe_trials [3]     perturbations per contraction probe
///   workers [1]          worker threads for independent solves
/// Blank lines and text after '#' are ignored.
#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>

#include "hallmhd/krylov.hpp"

namespace hallmhd {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ForcingFamily { Zero, Manufactured };
enum class ForcingMode { Analytic, Discrete };
enum class ProblemKind { Coupled, Stokes, Maxwell };

const char* to_string(ForcingFamily f);
const char* to_string(ForcingMode m);
const char* to_string(ProblemKind p);
ForcingMode parse_forcing_mode(const std::string& s);
ProblemKind parse_problem(const std::string& s);

struct ForcingSpec {
  ForcingFamily family = ForcingFamily::Zero;
  ForcingMode mode = ForcingMode::Analytic;
  ProblemKind problem = ProblemKind::Coupled;
  double amplitude = 1e-2;
  std::array<int, 3> modes{1, 1, 1};
  std::array<double, 3> coefficients{1.0, -1.0, 0.0};
  std::array<double, 3> potential{1.0, 1.0, 1.0};
};

struct SolverConfig {
  int n = 16;
  double q = 4.0;
  double mu = 1.0;
  std::optional<double> kappa;
  double outer_tol = 1e-8;
  double inner_rtol = 1e-10;
  int max_outer = 200;
  int max_inner = 500;
  ForcingSpec forcing;
  std::uint64_t seed = 12345;
  int probe_trials = 3;
  int workers = 1;

  /// q1 = min(q, 6).
  double q1() const noexcept { return q < 6.0 ? q : 6.0; }
  KrylovSpec krylov() const { return {KrylovMethod::ConjugateGradient, inner_rtol, max_inner}; }
  /// Throws ConfigError on any violated invariant; solve runs also need n >= 8.
  void validate(bool for_solve = true) const;
};

SolverConfig parse_config(std::istream& is);
SolverConfig load_config(const std::filesystem::path& path);
/// Canonical `key = value` rendering (17 significant digits).
std::string to_config_text(const SolverConfig& c);

}  // namespace hallmhd
