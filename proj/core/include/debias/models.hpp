#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <variant>

#include <Eigen/Dense>

#include "debias/chain.hpp"
#include "debias/random.hpp"

namespace debias {

// ---------------------------------------------------------------------------
// AR(1): X_{i+1} = sqrt(η) X_i + U_i, U_i ~ N(0, 1), X_0 = 0, f = identity.

class Ar1Model {
 public:
  using State = double;
  using Innovation = double;

  explicit Ar1Model(double sqrt_eta);

  State initial_state() const noexcept { return 0.0; }
  Innovation sample_innovation(RandomSource& rng) const { return rng.normal(); }
  void advance(State& x, Innovation u) const noexcept { x = sqrt_eta_ * x + u; }
  double functional(State x) const noexcept { return x; }

  double sqrt_eta() const noexcept { return sqrt_eta_; }
  double eta() const noexcept { return sqrt_eta_ * sqrt_eta_; }
  /// Stationary variance 1/(1 - η).
  double stationary_variance() const noexcept { return 1.0 / (1.0 - eta()); }

 private:
  double sqrt_eta_;
};

// ---------------------------------------------------------------------------
// GARCH(1,1) variance: σ²_{i+1} = w + α σ²_i U_i² + β σ²_i, f = 1{σ² > z}.

struct GarchParams {
  double w = 1.2e-6;
  double alpha = 0.05;
  double beta = 0.92;
  double sigma0_sq = 2e-5;
  double threshold = 4e-5;
};

class GarchModel {
 public:
  using State = double;
  using Innovation = double;

  explicit GarchModel(const GarchParams& params);

  State initial_state() const noexcept { return params_.sigma0_sq; }
  Innovation sample_innovation(RandomSource& rng) const { return rng.normal(); }
  void advance(State& s2, Innovation u) const noexcept {
    s2 = params_.w + (params_.alpha * u * u + params_.beta) * s2;
  }
  double functional(State s2) const noexcept {
    return s2 > params_.threshold ? 1.0 : 0.0;
  }

  const GarchParams& params() const noexcept { return params_; }

 private:
  GarchParams params_;
};

// ---------------------------------------------------------------------------
// Single-server FIFO queue driven by the Lindley recursion.

/// Non-negative variate used for interarrival and service times.
class VariateSpec {
 public:
  struct Exponential {
    double rate;
  };
  /// Survival (1 + z/scale)^{-shape}.
  struct Pareto {
    double shape;
    double scale;
  };
  /// Survival p e^{-2pz} + (1-p) e^{-2(1-p)z}; unit mean.
  struct Hyperexponential {
    double p;
  };

  static VariateSpec exponential(double rate);
  static VariateSpec pareto(double shape, double scale);
  static VariateSpec hyperexponential(double p);

  double sample(RandomSource& rng) const;
  double survival(double z) const;
  double mean() const;
  double second_moment() const;

  const std::variant<Exponential, Pareto, Hyperexponential>& kind() const noexcept {
    return kind_;
  }

 private:
  explicit VariateSpec(std::variant<Exponential, Pareto, Hyperexponential> kind)
      : kind_(kind) {}

  std::variant<Exponential, Pareto, Hyperexponential> kind_;
};

class QueueFunctional {
 public:
  static QueueFunctional identity() { return QueueFunctional(false, 0.0); }
  static QueueFunctional indicator(double z) { return QueueFunctional(true, z); }

  double operator()(double waiting) const noexcept {
    if (!is_indicator_) return waiting;
    return waiting > threshold_ ? 1.0 : 0.0;
  }
  bool is_indicator() const noexcept { return is_indicator_; }
  double threshold() const noexcept { return threshold_; }

 private:
  QueueFunctional(bool indicator, double z) : is_indicator_(indicator), threshold_(z) {}

  bool is_indicator_;
  double threshold_;
};

/// Waiting time of successive customers, starting empty. The innovation is
/// U_i = V_i - D_i (service minus interarrival).
class QueueModel {
 public:
  using State = double;
  using Innovation = double;

  QueueModel(VariateSpec interarrival, VariateSpec service, QueueFunctional f);

  State initial_state() const noexcept { return 0.0; }
  Innovation sample_innovation(RandomSource& rng) const {
    const double v = service_.sample(rng);
    return v - interarrival_.sample(rng);
  }
  void advance(State& x, Innovation u) const noexcept {
    x = x + u > 0.0 ? x + u : 0.0;
  }
  double functional(State x) const noexcept { return f_(x); }

  const VariateSpec& interarrival() const noexcept { return interarrival_; }
  const VariateSpec& service() const noexcept { return service_; }

 private:
  VariateSpec interarrival_;
  VariateSpec service_;
  QueueFunctional f_;
};

/// M/H_k/1 with arrival rate λ and hyperexponential service of parameter p.
QueueModel mhk1_queue(double lambda = 0.75, double p = 0.8875);
/// GI/G/1 with Pareto(7, 1) interarrivals, Pareto(7, scale) service, f = 1{X > z}.
QueueModel gig1_pareto_queue(double service_scale = 0.8, double z = 1.0);
/// Pollaczek-Khinchine mean waiting time λE(S²)/(2(1 - λE(S))) for M/G/1.
double pollaczek_khinchine_mean(double lambda, const VariateSpec& service);

// ---------------------------------------------------------------------------
// Random-scan Gaussian chain: X_{i+1} = X_i + (g_i - X_i[j_i]) V e_{j_i}.

using GaussianFunctional = std::function<double(const Eigen::VectorXd&)>;

struct GaussianChainParams {
  Eigen::MatrixXd covariance;
  GaussianFunctional functional;
  double lambda_min = 0.0;
  double lambda_max = 0.0;

  /// Validates V (symmetric, unit diagonal, positive definite) and fills
  /// in its extreme eigenvalues.
  static GaussianChainParams from_covariance(Eigen::MatrixXd covariance,
                                             GaussianFunctional functional);
};

class GaussianModel {
 public:
  using State = Eigen::VectorXd;
  struct Innovation {
    double normal;
    Eigen::Index coordinate;
  };

  explicit GaussianModel(GaussianChainParams params);

  State initial_state() const { return State::Zero(dimension()); }
  Innovation sample_innovation(RandomSource& rng) const;
  void advance(State& x, const Innovation& u) const {
    const double step = u.normal - x[u.coordinate];
    x.noalias() += step * params_.covariance.col(u.coordinate);
  }
  double functional(const State& x) const { return params_.functional(x); }

  Eigen::Index dimension() const noexcept { return params_.covariance.rows(); }
  const GaussianChainParams& params() const noexcept { return params_; }

 private:
  GaussianChainParams params_;
};

/// Symmetric positive-definite matrix with unit diagonal, drawn at random.
Eigen::MatrixXd random_correlation_matrix(Eigen::Index d, RandomSource& rng);

struct OracleEstimate {
  double mean;
  double standard_error;
};

/// Monte Carlo mean of f(X), X ~ N(0, V), sampled exactly through a Cholesky
/// factor. Throws std::invalid_argument if V is not positive definite.
OracleEstimate gaussian_exact_oracle(const Eigen::MatrixXd& covariance,
                                     const GaussianFunctional& f,
                                     std::uint64_t reps, RandomSource& rng);

static_assert(ChainModel<Ar1Model>);
static_assert(ChainModel<GarchModel>);
static_assert(ChainModel<QueueModel>);
static_assert(ChainModel<GaussianModel>);

}  // namespace debias
