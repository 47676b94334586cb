#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "debias/theta.hpp"

namespace debias {

enum class NuFamily { geometric, polynomial, contraction, gaussian, custom };

/// A positive decreasing envelope ν(i) bounding E(f(X_{i,m}) - f(X_i))^2.
///
/// Built-in families are stored in a common form
///   ν(i) = min(A·r^i, B·(i+1)^{-p})
/// with either branch optional; `custom` wraps a user function and carries no
/// tail bound.
class NuSequence {
 public:
  double operator()(std::uint64_t i) const;
  /// log ν(x) for real x >= 0 (built-in families only).
  double log_at(double x) const;

  NuFamily family() const noexcept { return family_; }
  /// The constructor arguments, in declaration order.
  const std::vector<double>& parameters() const noexcept { return params_; }
  bool has_tail_bound() const noexcept { return family_ != NuFamily::custom; }

  struct Geometric {
    double log_amplitude;
    double log_ratio;  // < 0
  };
  struct Polynomial {
    double log_coefficient;
    double power;
  };
  const std::optional<Geometric>& geometric_branch() const noexcept { return geometric_; }
  const std::optional<Polynomial>& polynomial_branch() const noexcept { return polynomial_; }

  friend NuSequence make_nu_geometric(double c, double xi);
  friend NuSequence make_nu_contraction(double kappa, double kappa_prime,
                                        double gamma, double eta);
  friend NuSequence make_nu_polynomial(double c, double xi);
  friend NuSequence make_nu_gaussian(double kappa_hat, double gamma_hat,
                                     double d, double lambda_min,
                                     double lambda_max);
  friend NuSequence make_nu_custom(std::function<double(std::uint64_t)> eval);

 private:
  NuSequence() = default;

  NuFamily family_ = NuFamily::custom;
  std::vector<double> params_;
  std::optional<Geometric> geometric_;
  std::optional<Polynomial> polynomial_;
  std::function<double(std::uint64_t)> custom_;
};

/// ν(i) = c·e^{-ξi}, 0 < ξ <= 1.
NuSequence make_nu_geometric(double c, double xi);
/// ν(i) = κ²·κ'^γ·η^{γi} for a contractive chain, 0 < η < 1, 0 < γ <= 1.
NuSequence make_nu_contraction(double kappa, double kappa_prime, double gamma,
                               double eta);
/// ν(i) = c·(i+1)^{-ξ}, ξ > 1.
NuSequence make_nu_polynomial(double c, double xi);
/// ν(i) = κ̂²·min((λ_max d)^γ̂ (1 - λ_min/d)^{γ̂ i}, (d²/(i+1))^γ̂).
NuSequence make_nu_gaussian(double kappa_hat, double gamma_hat, double d,
                            double lambda_min, double lambda_max);
/// Arbitrary ν. Accepted for evaluation only; TailSum rejects it.
NuSequence make_nu_custom(std::function<double(std::uint64_t)> eval);

inline constexpr double kDefaultTailTolerance = 1e-9;

/// ν̄(j) = Σ_{i>=j} sqrt(ν(i)/(i+1)) and its θ-weighted variant
/// ν̄_θ(j) = Σ_{i>=j} sqrt(ν(i)·θ(log2(4i+1))/(i+1)), to relative error `tol`.
///
/// Arguments are integer-valued doubles so that very large indices (k·2^l)
/// stay representable. Evaluation is done in log space.
class TailSum {
 public:
  explicit TailSum(NuSequence nu, double tol = kDefaultTailTolerance);

  double operator()(double j) const;
  double log_value(double j) const;

  /// Throws std::invalid_argument for polynomial ν with exponential θ when
  /// δ >= ξ - 1 (the weighted series diverges).
  double theta_weighted(const ThetaFn& theta, double j) const;
  double log_theta_weighted(const ThetaFn& theta, double j) const;

  const NuSequence& nu() const noexcept { return nu_; }
  double tolerance() const noexcept { return tol_; }

 private:
  double log_sum(const ThetaFn* theta, double j) const;
  double log_sum_geometric(const ThetaFn* theta, double j) const;
  double log_sum_polynomial(const ThetaFn* theta, double j) const;
  double log_term(const ThetaFn* theta, double i) const;

  NuSequence nu_;
  double tol_;
};

}  // namespace debias
