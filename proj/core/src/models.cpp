#include "debias/models.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace debias {
namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

Ar1Model::Ar1Model(double sqrt_eta) : sqrt_eta_(sqrt_eta) {
  if (!(sqrt_eta >= 0.0 && sqrt_eta < 1.0)) {
    throw std::invalid_argument("Ar1Model: sqrt(eta) must lie in [0, 1)");
  }
}

GarchModel::GarchModel(const GarchParams& params) : params_(params) {
  if (!(params.w >= 0.0 && params.alpha >= 0.0 && params.beta >= 0.0)) {
    throw std::invalid_argument("GarchModel: w, alpha and beta must be non-negative");
  }
  if (!(params.alpha + params.beta < 1.0)) {
    throw std::invalid_argument("GarchModel: alpha + beta must be below 1");
  }
  if (!(params.sigma0_sq >= 0.0)) {
    throw std::invalid_argument("GarchModel: initial variance must be non-negative");
  }
}

// ---------------------------------------------------------------------------

VariateSpec VariateSpec::exponential(double rate) {
  if (!(rate > 0.0)) throw std::invalid_argument("exponential variate: rate must be positive");
  return VariateSpec(Exponential{rate});
}

VariateSpec VariateSpec::pareto(double shape, double scale) {
  if (!(shape > 2.0)) {
    throw std::invalid_argument("pareto variate: shape must exceed 2 for a finite variance");
  }
  if (!(scale > 0.0)) throw std::invalid_argument("pareto variate: scale must be positive");
  return VariateSpec(Pareto{shape, scale});
}

VariateSpec VariateSpec::hyperexponential(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw std::invalid_argument("hyperexponential variate: p must lie in (0, 1)");
  }
  return VariateSpec(Hyperexponential{p});
}

double VariateSpec::sample(RandomSource& rng) const {
  return std::visit(
      overloaded{
          [&](const Exponential& e) { return rng.exponential(e.rate); },
          [&](const Pareto& p) {
            // inverse CDF, U in [0, 1)
            return p.scale * (std::pow(1.0 - rng.uniform(), -1.0 / p.shape) - 1.0);
          },
          [&](const Hyperexponential& h) {
            const double rate = rng.uniform() < h.p ? 2.0 * h.p : 2.0 * (1.0 - h.p);
            return rng.exponential(rate);
          },
      },
      kind_);
}

double VariateSpec::survival(double z) const {
  if (z < 0.0) return 1.0;
  return std::visit(
      overloaded{
          [&](const Exponential& e) { return std::exp(-e.rate * z); },
          [&](const Pareto& p) { return std::pow(1.0 + z / p.scale, -p.shape); },
          [&](const Hyperexponential& h) {
            return h.p * std::exp(-2.0 * h.p * z) +
                   (1.0 - h.p) * std::exp(-2.0 * (1.0 - h.p) * z);
          },
      },
      kind_);
}

double VariateSpec::mean() const {
  return std::visit(
      overloaded{
          [](const Exponential& e) { return 1.0 / e.rate; },
          [](const Pareto& p) { return p.scale / (p.shape - 1.0); },
          [](const Hyperexponential&) { return 1.0; },
      },
      kind_);
}

double VariateSpec::second_moment() const {
  return std::visit(
      overloaded{
          [](const Exponential& e) { return 2.0 / (e.rate * e.rate); },
          [](const Pareto& p) {
            return 2.0 * p.scale * p.scale / ((p.shape - 1.0) * (p.shape - 2.0));
          },
          [](const Hyperexponential& h) { return 1.0 / (2.0 * h.p * (1.0 - h.p)); },
      },
      kind_);
}

QueueModel::QueueModel(VariateSpec interarrival, VariateSpec service, QueueFunctional f)
    : interarrival_(std::move(interarrival)), service_(std::move(service)), f_(f) {}

QueueModel mhk1_queue(double lambda, double p) {
  return QueueModel(VariateSpec::exponential(lambda), VariateSpec::hyperexponential(p),
                    QueueFunctional::identity());
}

QueueModel gig1_pareto_queue(double service_scale, double z) {
  return QueueModel(VariateSpec::pareto(7.0, 1.0), VariateSpec::pareto(7.0, service_scale),
                    QueueFunctional::indicator(z));
}

double pollaczek_khinchine_mean(double lambda, const VariateSpec& service) {
  const double load = lambda * service.mean();
  if (!(load < 1.0)) throw std::invalid_argument("pollaczek_khinchine_mean: unstable queue");
  return lambda * service.second_moment() / (2.0 * (1.0 - load));
}

// ---------------------------------------------------------------------------

GaussianChainParams GaussianChainParams::from_covariance(Eigen::MatrixXd covariance,
                                                         GaussianFunctional functional) {
  if (covariance.rows() == 0 || covariance.rows() != covariance.cols()) {
    throw std::invalid_argument("GaussianChainParams: covariance must be square and non-empty");
  }
  if (!functional) throw std::invalid_argument("GaussianChainParams: empty functional");
  if (!covariance.isApprox(covariance.transpose(), 1e-12)) {
    throw std::invalid_argument("GaussianChainParams: covariance must be symmetric");
  }
  for (Eigen::Index i = 0; i < covariance.rows(); ++i) {
    if (std::abs(covariance(i, i) - 1.0) > 1e-12) {
      throw std::invalid_argument("GaussianChainParams: covariance must have unit diagonal");
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(covariance, Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success || !(eig.eigenvalues()(0) > 0.0)) {
    throw std::invalid_argument("GaussianChainParams: covariance must be positive definite");
  }
  GaussianChainParams params;
  params.lambda_min = eig.eigenvalues()(0);
  params.lambda_max = eig.eigenvalues()(covariance.rows() - 1);
  params.covariance = std::move(covariance);
  params.functional = std::move(functional);
  return params;
}

GaussianModel::GaussianModel(GaussianChainParams params) : params_(std::move(params)) {
  const auto& v = params_.covariance;
  if (v.rows() == 0 || v.rows() != v.cols() || !params_.functional) {
    throw std::invalid_argument("GaussianModel: malformed parameters");
  }
  for (Eigen::Index i = 0; i < v.rows(); ++i) {
    if (std::abs(v(i, i) - 1.0) > 1e-12) {
      throw std::invalid_argument("GaussianModel: covariance must have unit diagonal");
    }
  }
}

GaussianModel::Innovation GaussianModel::sample_innovation(RandomSource& rng) const {
  const double g = rng.normal();
  const auto d = static_cast<std::uint64_t>(dimension());
  const auto j = std::uniform_int_distribution<std::uint64_t>(0, d - 1)(rng);
  return Innovation{g, static_cast<Eigen::Index>(j)};
}

Eigen::MatrixXd random_correlation_matrix(Eigen::Index d, RandomSource& rng) {
  Eigen::MatrixXd a(d, d);
  for (Eigen::Index j = 0; j < d; ++j) {
    for (Eigen::Index i = 0; i < d; ++i) a(i, j) = rng.normal();
  }
  Eigen::MatrixXd s = a * a.transpose() + static_cast<double>(d) * Eigen::MatrixXd::Identity(d, d);
  const Eigen::VectorXd inv_sd = s.diagonal().cwiseSqrt().cwiseInverse();
  Eigen::MatrixXd v = inv_sd.asDiagonal() * s * inv_sd.asDiagonal();
  v.diagonal().setOnes();
  return 0.5 * (v + v.transpose());
}

OracleEstimate gaussian_exact_oracle(const Eigen::MatrixXd& covariance,
                                     const GaussianFunctional& f, std::uint64_t reps,
                                     RandomSource& rng) {
  if (reps < 2) throw std::invalid_argument("gaussian_exact_oracle: need at least 2 reps");
  Eigen::LLT<Eigen::MatrixXd> llt(covariance);
  if (llt.info() != Eigen::Success) {
    throw std::invalid_argument("gaussian_exact_oracle: covariance is not positive definite");
  }
  const Eigen::MatrixXd lower = llt.matrixL();
  const Eigen::Index d = covariance.rows();
  Eigen::VectorXd z(d);
  Eigen::VectorXd x(d);
  double mean = 0.0;
  double m2 = 0.0;
  for (std::uint64_t r = 0; r < reps; ++r) {
    for (Eigen::Index i = 0; i < d; ++i) z[i] = rng.normal();
    x.noalias() = lower.triangularView<Eigen::Lower>() * z;
    const double v = f(x);
    const double delta = v - mean;
    mean += delta / static_cast<double>(r + 1);
    m2 += delta * (v - mean);
  }
  const double var = m2 / static_cast<double>(reps - 1);
  return {mean, std::sqrt(var / static_cast<double>(reps))};
}

}  // namespace debias
