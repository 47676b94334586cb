#pragma once

namespace debias {

/// Increasing weight θ with θ(x) = 1 on [0, 1], shaping oblivious level
/// distributions.
///
///  - exponential: θ(x) = 2^{δ(x-1)} for x >= 1, δ > 0
///  - power:       θ(x) = max(1, x)^δ, δ > 1
class ThetaFn {
 public:
  enum class Family { exponential, power };

  static ThetaFn exponential(double delta);
  static ThetaFn power(double delta);

  double operator()(double x) const;
  /// log θ(x), natural log.
  double log(double x) const;

  /// Σ_{l>=0} 1/θ(l), exact for the exponential family (geometric series)
  /// and via ζ(δ) for the power family.
  double inverse_sum() const;

  Family family() const noexcept { return family_; }
  double delta() const noexcept { return delta_; }

 private:
  ThetaFn(Family family, double delta) : family_(family), delta_(delta) {}

  Family family_;
  double delta_;
};

}  // namespace debias
