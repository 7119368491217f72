/// @file checks.hpp
/// @brief Operator invariant suite behind `hall-steady check-operators`.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace hallmhd {

struct CheckItem {
  std::string name;
  double defect = 0.0;  ///< worst normalized defect over all samples
  double bound = 0.0;
  bool passed() const noexcept { return defect <= bound; }
};

struct OperatorCheckReport {
  int n = 0;
  int samples = 0;
  std::vector<CheckItem> items;
  double poincare_u = 0.0;          ///< from the smallest Laplacian eigenvalue
  double poincare_u_iterated = 0.0; ///< inverse power iteration
  bool all_passed() const noexcept;
};

/// Negative controls: a stencil deliberately broken in one entry.
enum class InjectedFault { None, Curl, Grad };

InjectedFault parse_fault(const std::string& s);

/// Mimetic identities (div curl_e2f, curl_f2e grad, edge_div curl_f2e) on
/// `samples` random fields, summation by parts, interpolation adjointness,
/// cross-cancellation, skew transport, and the Hall matrix properties on
/// 10^4 random (b, xi) with |b| <= 10.
OperatorCheckReport check_operators(int n, std::uint64_t seed, int samples = 100,
                                    InjectedFault fault = InjectedFault::None);

}  // namespace hallmhd
