#include "debias/decay.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

#include <boost/math/quadrature/exp_sinh.hpp>

namespace debias {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Beyond this index consecutive doubles are more than one apart.
constexpr double kExactIndexLimit = 4503599627370496.0;  // 2^52

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

bool positive_finite(double x) { return x > 0.0 && std::isfinite(x); }

}  // namespace

// ---------------------------------------------------------------------------
// NuSequence

double NuSequence::log_at(double x) const {
  if (family_ == NuFamily::custom) {
    return std::log(custom_(static_cast<std::uint64_t>(x)));
  }
  double v = kInf;
  if (geometric_) v = std::min(v, geometric_->log_amplitude + geometric_->log_ratio * x);
  if (polynomial_) {
    v = std::min(v, polynomial_->log_coefficient - polynomial_->power * std::log1p(x));
  }
  return v;
}

double NuSequence::operator()(std::uint64_t i) const {
  if (family_ == NuFamily::custom) return custom_(i);
  return std::exp(log_at(static_cast<double>(i)));
}

NuSequence make_nu_geometric(double c, double xi) {
  require(positive_finite(c), "make_nu_geometric: c must be positive");
  require(xi > 0.0 && xi <= 1.0, "make_nu_geometric: xi must lie in (0, 1]");
  NuSequence nu;
  nu.family_ = NuFamily::geometric;
  nu.params_ = {c, xi};
  nu.geometric_ = NuSequence::Geometric{std::log(c), -xi};
  return nu;
}

NuSequence make_nu_contraction(double kappa, double kappa_prime, double gamma,
                               double eta) {
  require(positive_finite(kappa) && positive_finite(kappa_prime),
          "make_nu_contraction: kappa and kappa' must be positive");
  require(gamma > 0.0 && gamma <= 1.0, "make_nu_contraction: gamma must lie in (0, 1]");
  require(eta > 0.0 && eta < 1.0, "make_nu_contraction: eta must lie in (0, 1)");
  NuSequence nu;
  nu.family_ = NuFamily::contraction;
  nu.params_ = {kappa, kappa_prime, gamma, eta};
  nu.geometric_ = NuSequence::Geometric{
      2.0 * std::log(kappa) + gamma * std::log(kappa_prime), gamma * std::log(eta)};
  return nu;
}

NuSequence make_nu_polynomial(double c, double xi) {
  require(positive_finite(c), "make_nu_polynomial: c must be positive");
  require(xi > 1.0 && std::isfinite(xi),
          "make_nu_polynomial: xi must exceed 1 for sum sqrt(nu(i)/(i+1)) to converge");
  NuSequence nu;
  nu.family_ = NuFamily::polynomial;
  nu.params_ = {c, xi};
  nu.polynomial_ = NuSequence::Polynomial{std::log(c), xi};
  return nu;
}

NuSequence make_nu_gaussian(double kappa_hat, double gamma_hat, double d,
                            double lambda_min, double lambda_max) {
  require(positive_finite(kappa_hat), "make_nu_gaussian: kappa_hat must be positive");
  require(gamma_hat > 0.0 && gamma_hat <= 1.0,
          "make_nu_gaussian: gamma_hat must lie in (0, 1]");
  require(d >= 1.0, "make_nu_gaussian: dimension must be at least 1");
  require(lambda_min > 0.0 && lambda_min <= lambda_max,
          "make_nu_gaussian: need 0 < lambda_min <= lambda_max");
  require(lambda_max <= d, "make_nu_gaussian: lambda_max cannot exceed d = tr(V)");
  require(lambda_min < d, "make_nu_gaussian: lambda_min = d makes nu vanish");
  NuSequence nu;
  nu.family_ = NuFamily::gaussian;
  nu.params_ = {kappa_hat, gamma_hat, d, lambda_min, lambda_max};
  const double log_k2 = 2.0 * std::log(kappa_hat);
  nu.geometric_ = NuSequence::Geometric{log_k2 + gamma_hat * std::log(lambda_max * d),
                                        gamma_hat * std::log1p(-lambda_min / d)};
  nu.polynomial_ = NuSequence::Polynomial{log_k2 + 2.0 * gamma_hat * std::log(d), gamma_hat};
  return nu;
}

NuSequence make_nu_custom(std::function<double(std::uint64_t)> eval) {
  require(static_cast<bool>(eval), "make_nu_custom: empty function");
  NuSequence nu;
  nu.family_ = NuFamily::custom;
  nu.custom_ = std::move(eval);
  return nu;
}

// ---------------------------------------------------------------------------
// TailSum

TailSum::TailSum(NuSequence nu, double tol) : nu_(std::move(nu)), tol_(tol) {
  if (!nu_.has_tail_bound()) {
    throw std::invalid_argument("TailSum: custom nu has no analytic tail majorant");
  }
  require(tol > 0.0 && tol < 1.0, "TailSum: tolerance must lie in (0, 1)");
}

double TailSum::log_term(const ThetaFn* theta, double i) const {
  double v = 0.5 * (nu_.log_at(i) - std::log1p(i));
  if (theta != nullptr) v += 0.5 * theta->log(std::log2(4.0 * i + 1.0));
  return v;
}

double TailSum::log_sum(const ThetaFn* theta, double j) const {
  require(j >= 0.0 && std::floor(j) == j, "TailSum: index must be a non-negative integer");
  if (nu_.geometric_branch()) return log_sum_geometric(theta, j);
  return log_sum_polynomial(theta, j);
}

// Direct summation with a doubling horizon M, stopped once the ratio majorant
// of the remainder falls below tol times the partial sum. All terms are
// scaled by the term at j.
double TailSum::log_sum_geometric(const ThetaFn* theta, double j) const {
  const auto& geo = *nu_.geometric_branch();
  const double base_ratio = std::exp(0.5 * geo.log_ratio);

  auto ratio_bound = [&](double m) {
    double rho = base_ratio;
    if (theta != nullptr) rho *= std::pow(1.0 + 4.0 / (4.0 * m + 1.0), 0.5 * theta->delta());
    return rho;
  };
  auto log_envelope = [&](double m) {
    double v = 0.5 * (geo.log_amplitude + geo.log_ratio * m - std::log1p(m));
    if (theta != nullptr) v += 0.5 * theta->log(std::log2(4.0 * m + 1.0));
    return v;
  };

  const double ref = log_term(theta, j);
  if (j >= kExactIndexLimit) {
    // Neighbouring terms differ only by the ratio; the geometric series is exact
    // to relative order 1/j.
    return ref - std::log1p(-ratio_bound(j));
  }

  double partial = 0.0;
  double i = j;
  double span = 16.0;
  for (;;) {
    const double m = j + span;
    for (; i < m; i += 1.0) partial += std::exp(log_term(theta, i) - ref);
    const double rho = ratio_bound(m);
    if (rho < 1.0) {
      const double majorant = std::exp(log_envelope(m) - ref) / (1.0 - rho);
      if (majorant <= tol_ * partial) break;
    }
    span *= 2.0;
    if (span > 1e13) throw std::runtime_error("TailSum: truncation horizon overflow");
  }
  return ref + std::log(partial);
}

// Direct summation up to M = max(j, M0) and an Euler-Maclaurin remainder
//   Σ_{i>=M} h(i) = ∫_M^∞ h + h(M)/2 - h'(M)/12 + O(h'''(M)).
double TailSum::log_sum_polynomial(const ThetaFn* theta, double j) const {
  const auto& poly = *nu_.polynomial_branch();
  if (theta != nullptr && theta->family() == ThetaFn::Family::exponential) {
    require(theta->delta() < poly.power - 1.0,
            "TailSum: exponential theta with polynomial nu needs delta < xi - 1");
  }
  const double m0 = tol_ < 1e-12 ? 8192.0 : 1024.0;
  const double m = std::max(j, m0);
  const double ref = log_term(theta, j);
  auto h = [&](double x) { return std::exp(log_term(theta, x) - ref); };

  double direct = 0.0;
  for (double i = j; i < m; i += 1.0) direct += h(i);

  const double hm = h(m);
  double integral = 0.0;
  double derivative = 0.0;
  if (theta == nullptr) {
    const double s = 0.5 * (poly.power + 1.0);
    integral = std::exp(0.5 * poly.log_coefficient + (1.0 - s) * std::log1p(m) -
                        std::log(s - 1.0) - ref);
    derivative = -s * hm / (m + 1.0);
  } else {
    const double lm = log_term(theta, m);
    auto scaled = [&](double t) { return std::exp(log_term(theta, m + t) - lm); };
    boost::math::quadrature::exp_sinh<double> integrator;
    integral = hm * integrator.integrate(scaled, 0.0, kInf, 1e-13);
    derivative = h(m + 0.5) - h(m - 0.5);
  }
  return ref + std::log(direct + integral + 0.5 * hm - derivative / 12.0);
}

double TailSum::log_value(double j) const { return log_sum(nullptr, j); }

double TailSum::operator()(double j) const { return std::exp(log_value(j)); }

double TailSum::log_theta_weighted(const ThetaFn& theta, double j) const {
  return log_sum(&theta, j);
}

double TailSum::theta_weighted(const ThetaFn& theta, double j) const {
  return std::exp(log_theta_weighted(theta, j));
}

}  // namespace debias
