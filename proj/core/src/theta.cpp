#include "debias/theta.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include <boost/math/special_functions/zeta.hpp>

namespace debias {

ThetaFn ThetaFn::exponential(double delta) {
  if (!(delta > 0.0) || !std::isfinite(delta)) {
    throw std::invalid_argument("ThetaFn::exponential: delta must be positive");
  }
  return ThetaFn(Family::exponential, delta);
}

ThetaFn ThetaFn::power(double delta) {
  if (!(delta > 1.0) || !std::isfinite(delta)) {
    throw std::invalid_argument(
        "ThetaFn::power: delta must exceed 1 for sum 1/theta(l) to converge");
  }
  return ThetaFn(Family::power, delta);
}

double ThetaFn::log(double x) const {
  if (x <= 1.0) return 0.0;
  switch (family_) {
    case Family::exponential:
      return delta_ * (x - 1.0) * std::numbers::ln2;
    case Family::power:
      return delta_ * std::log(x);
  }
  return 0.0;
}

double ThetaFn::operator()(double x) const { return std::exp(log(x)); }

double ThetaFn::inverse_sum() const {
  switch (family_) {
    case Family::exponential:
      // 1 + Σ_{l>=1} 2^{-δ(l-1)}
      return 1.0 + 1.0 / (1.0 - std::exp2(-delta_));
    case Family::power:
      // θ(0) = θ(1) = 1, then l^{-δ}
      return 1.0 + boost::math::zeta(delta_);
  }
  return 0.0;
}

}  // namespace debias
