/// @file krylov.hpp
/// @brief Matrix-free Krylov kernels shared by every linear solve.
///
/// Vectors are flat spans (a field's full storage, constrained entries kept at
/// zero by the operator). Inner products are plain serial sums, so results
/// are bitwise reproducible.
#pragma once

#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace hallmhd {

enum class KrylovMethod { ConjugateGradient, BiCGStab };

struct KrylovSpec {
  KrylovMethod method = KrylovMethod::ConjugateGradient;
  double rtol = 1e-10;
  int maxiter = 500;

  /// Throws std::invalid_argument unless rtol in (0,1) and maxiter >= 1.
  void validate() const;
  KrylovSpec with_method(KrylovMethod m) const {
    KrylovSpec s = *this;
    s.method = m;
    return s;
  }
};

struct KrylovResult {
  bool converged = false;
  int iterations = 0;
  double residual = 0.0;      ///< recomputed ||b - A x||_2 of the returned x
  double rhs_norm = 0.0;      ///< ||b||_2
  double target = 0.0;        ///< absolute stopping threshold on ||b - A x||_2
  std::vector<double> history;
};

class KrylovError : public std::runtime_error {
 public:
  KrylovError(const std::string& what, KrylovResult result)
      : std::runtime_error(what), result_(std::move(result)) {}
  const KrylovResult& result() const noexcept { return result_; }

 private:
  KrylovResult result_;
};

using LinearOp = std::function<void(std::span<const double>, std::span<double>)>;
using Projector = std::function<void(std::span<double>)>;

struct KrylovOptions {
  double target = 0.0;  ///< absolute residual threshold
  int maxiter = 500;
  LinearOp precond;     ///< optional, approximates A^{-1}
  Projector project;    ///< optional, e.g. zero-mean for singular Neumann operators
};

/// Preconditioned CG with minimal-residual smoothing: the reported residual
/// history is monotonically nonincreasing. Requires A symmetric positive
/// (semi-)definite; x holds the initial guess on entry.
KrylovResult conjugate_gradient(const LinearOp& A, std::span<const double> b, std::span<double> x,
                                const KrylovOptions& opt);

/// Right-preconditioned BiCGStab, restarted from the true residual on
/// breakdown or when the recursive residual drifts.
KrylovResult bicgstab(const LinearOp& A, std::span<const double> b, std::span<double> x,
                      const KrylovOptions& opt);

/// Dispatches on spec.method with target = spec.rtol * reference (reference
/// defaults to ||b||_2). Throws KrylovError when the cap is hit first.
KrylovResult krylov_solve(const KrylovSpec& spec, const LinearOp& A, std::span<const double> b,
                          std::span<double> x, const LinearOp& precond = {},
                          const Projector& project = {}, double reference = -1.0,
                          const std::string& label = "linear solve");

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);

}  // namespace hallmhd
