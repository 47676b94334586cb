#include "debias/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <mutex>
#include <ostream>
#include <thread>

#include "debias/estimators.hpp"
#include "debias/random.hpp"

namespace debias::experiment {
namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& field, const std::string& what) {
  throw ConfigError("field '" + field + "': " + what);
}

const json& require(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object() || !obj.contains(key)) fail(path + key, "is required");
  return obj.at(key);
}

double get_number(const json& obj, const std::string& key, const std::string& path,
                  std::optional<double> fallback = std::nullopt) {
  if (!obj.contains(key)) {
    if (fallback) return *fallback;
    fail(path + key, "is required");
  }
  const json& v = obj.at(key);
  if (!v.is_number()) fail(path + key, "must be a number");
  return v.get<double>();
}

std::uint64_t get_count(const json& v, const std::string& field) {
  if (!v.is_number_integer() || v.get<std::int64_t>() < 0) {
    fail(field, "must be a non-negative integer");
  }
  return v.get<std::uint64_t>();
}

Fraction parse_fraction(const json& v, const std::string& field) {
  if (v.is_number()) {
    const double x = v.get<double>();
    if (!(x >= 0.0 && x <= 1.0)) fail(field, "must lie in [0, 1]");
    constexpr std::uint64_t den = 1'000'000;
    return {static_cast<std::uint64_t>(std::llround(x * static_cast<double>(den))), den};
  }
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    unsigned long long a = 0;
    unsigned long long b = 0;
    char tail = 0;
    if (std::sscanf(s.c_str(), "%llu/%llu%c", &a, &b, &tail) != 2 || b == 0) {
      fail(field, "expected a number or a fraction \"a/b\"");
    }
    if (a > b) fail(field, "must lie in [0, 1]");
    if (b > (1ull << 31)) fail(field, "denominator too large");
    return {a, b};
  }
  fail(field, "expected a number or a fraction \"a/b\"");
}

bool fraction_le(const Fraction& a, const Fraction& b) {
  return a.num * b.den <= b.num * a.den;
}

VariateSpec parse_variate(const json& spec, const std::string& path) {
  const std::string kind = require(spec, "kind", path).get<std::string>();
  try {
    if (kind == "exponential") return VariateSpec::exponential(get_number(spec, "rate", path));
    if (kind == "pareto") {
      return VariateSpec::pareto(get_number(spec, "shape", path),
                                 get_number(spec, "scale", path, 1.0));
    }
    if (kind == "hyperexponential") {
      return VariateSpec::hyperexponential(get_number(spec, "p", path));
    }
  } catch (const std::invalid_argument& e) {
    fail(path.substr(0, path.size() - 1), e.what());
  }
  fail(path + "kind", "unknown variate '" + kind + "'");
}

GaussianFunctional parse_gaussian_functional(const json& spec, Eigen::Index d) {
  const std::string path = "model.functional.";
  const std::string kind = require(spec, "kind", path).get<std::string>();
  const auto index = static_cast<Eigen::Index>(
      get_count(spec.value("index", json(0)), path + "index"));
  if (index >= d) fail(path + "index", "exceeds the dimension");
  if (kind == "indicator") {
    const double z = get_number(spec, "z", path);
    return [index, z](const Eigen::VectorXd& x) { return x[index] > z ? 1.0 : 0.0; };
  }
  if (kind == "coordinate") {
    return [index](const Eigen::VectorXd& x) { return x[index]; };
  }
  fail(path + "kind", "unknown functional '" + kind + "'");
}

template <class F>
void parallel_for(std::uint64_t count, unsigned threads, F&& body) {
  threads = std::max(1u, threads);
  if (threads == 1 || count < 2) {
    for (std::uint64_t i = 0; i < count; ++i) body(i);
    return;
  }
  constexpr std::uint64_t chunk = 16;
  std::atomic<std::uint64_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (;;) {
      const std::uint64_t begin = next.fetch_add(chunk);
      if (begin >= count) return;
      const std::uint64_t end = std::min(count, begin + chunk);
      try {
        for (std::uint64_t i = begin; i < end; ++i) body(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next.store(count);
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  const auto n = static_cast<unsigned>(std::min<std::uint64_t>(threads, count));
  pool.reserve(n);
  for (unsigned t = 0; t < n; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

double resolve_q(const ExperimentConfig& config, const LevelDistribution& levels,
                 std::uint64_t burn_in_prime) {
  switch (config.q_rule.kind) {
    case QRule::Kind::experimental:
      return q_experimental(levels);
    case QRule::Kind::nu_dependent:
      return q_nu_dependent(TailSum(*config.level_family.nu), burn_in_prime);
    case QRule::Kind::fixed:
      return config.q_rule.value;
  }
  return 1.0;
}

struct Replications {
  std::vector<double> values;
  std::vector<std::uint64_t> costs;
};

template <ChainModel M>
ExperimentRow run_one_k(const M& model, const ExperimentConfig& config, std::uint64_t k,
                        unsigned threads) {
  ExperimentRow row;
  row.k = k;
  row.method = config.method;
  row.burn_in = config.burn_frac.of(k);
  row.burn_in_prime = config.burn_prime_frac.of(k);
  row.seed = derive_seed(config.seed, {k});

  const LevelDistribution levels = config.level_family.build(k);
  row.q = resolve_q(config, levels, row.burn_in_prime);

  const EstimatorConfig est{row.k, row.burn_in, row.burn_in_prime, row.q, levels, row.seed};
  if (config.method != Method::lr) est.validate();

  const std::uint64_t reps = config.reps;
  Replications out;
  out.values.resize(reps);
  out.costs.resize(reps);
  std::vector<double> plugin_se(config.method == Method::sulr ? reps : 0);

  parallel_for(reps, threads, [&](std::uint64_t r) {
    switch (config.method) {
      case Method::lr: {
        RandomSource rng = RandomSource::substream(row.seed, r, StreamRole::chain);
        const EstimatorRun run = lr(model, k, row.burn_in, rng);
        out.values[r] = run.value;
        out.costs[r] = run.g_calls;
        break;
      }
      case Method::ulr: {
        const EstimatorRun run = ulr(model, est, r);
        out.values[r] = run.value;
        out.costs[r] = run.g_calls;
        break;
      }
      case Method::sulr: {
        const StratifiedRun run = sulr(model, est, config.n, r);
        out.values[r] = run.run.value;
        out.costs[r] = run.run.g_calls;
        plugin_se[r] = run.standard_error().value_or(std::nan(""));
        break;
      }
      case Method::bias: {
        RandomSource rng = RandomSource::substream(row.seed, r, StreamRole::bias);
        const EstimatorRun run = bias_estimate(model, k, row.burn_in_prime, levels, rng);
        out.values[r] = run.value;
        out.costs[r] = run.g_calls;
        break;
      }
    }
  });

  if (config.method == Method::lr) {
    // The bias of f_{k,b} is estimated from independent BIAS draws with b' = b.
    const std::uint64_t m = config.effective_bias_reps();
    std::vector<double> bias(m);
    parallel_for(m, threads, [&](std::uint64_t r) {
      RandomSource rng = RandomSource::substream(row.seed, r, StreamRole::bias);
      bias[r] = bias_estimate(model, k, row.burn_in, levels, rng).value;
    });
    RunningStats bs;
    for (double v : bias) bs.push(v);
    const double se = bs.variance() ? std::sqrt(*bs.variance() / static_cast<double>(m)) : 0.0;
    row.summary = summarize_biased(out.values, out.costs, {bs.mean(), se});
  } else {
    row.summary = summarize(out.values, out.costs);
  }

  if (config.method == Method::sulr && reps == 1 && std::isfinite(plugin_se[0])) {
    // A lone stratified output carries its own standard error.
    auto& s = row.summary;
    s.std = plugin_se[0];
    s.se = plugin_se[0];
    s.ci95_halfwidth = kZ95 * plugin_se[0];
    s.rmse = plugin_se[0];
    s.cost_times_mse = s.avg_cost * plugin_se[0] * plugin_se[0];
  }
  return row;
}

template <ChainModel M>
SweepRow sweep_one_k(const M& model, const ExperimentConfig& config, std::uint64_t k,
                     unsigned threads) {
  SweepRow row;
  row.k = k;
  row.burn_in = config.burn_frac.of(k);
  const std::uint64_t seed = derive_seed(config.seed, {k});
  const LevelDistribution levels = config.level_family.build(k);

  std::vector<double> lr_values(config.reps);
  parallel_for(config.reps, threads, [&](std::uint64_t r) {
    RandomSource rng = RandomSource::substream(seed, r, StreamRole::chain);
    lr_values[r] = lr(model, k, row.burn_in, rng).value;
  });
  const std::uint64_t m = config.effective_bias_reps();
  std::vector<double> bias(m);
  parallel_for(m, threads, [&](std::uint64_t r) {
    RandomSource rng = RandomSource::substream(seed, r, StreamRole::bias);
    bias[r] = bias_estimate(model, k, row.burn_in, levels, rng).value;
  });

  RunningStats ls;
  for (double v : lr_values) ls.push(v);
  RunningStats bs;
  for (double v : bias) bs.push(v);
  row.abs_bias = std::abs(bs.mean());
  if (auto v = bs.variance()) row.bias_ci95 = kZ95 * std::sqrt(*v / static_cast<double>(m));
  if (auto v = ls.variance()) row.std = std::sqrt(*v);
  return row;
}

void put_number(std::ostream& os, std::optional<double> v) {
  if (!v) return;
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", *v);
  os << buf;
}

}  // namespace

std::string to_string(Method m) {
  switch (m) {
    case Method::lr: return "lr";
    case Method::ulr: return "ulr";
    case Method::sulr: return "sulr";
    case Method::bias: return "bias";
  }
  return "?";
}

LevelDistribution LevelFamily::build(std::uint64_t k) const {
  switch (kind) {
    case Kind::oblivious_exponential:
      return LevelDistribution::oblivious(ThetaFn::exponential(delta));
    case Kind::oblivious_power:
      return LevelDistribution::oblivious(ThetaFn::power(delta));
    case Kind::nu_dependent:
      return LevelDistribution::nu_dependent(TailSum(*nu), k);
  }
  throw std::logic_error("LevelFamily: unknown kind");
}

std::string LevelFamily::name() const {
  switch (kind) {
    case Kind::oblivious_exponential: return "oblivious_exponential";
    case Kind::oblivious_power: return "oblivious_power";
    case Kind::nu_dependent: return "nu_dependent";
  }
  return "?";
}

NuSequence parse_nu(const json& spec) {
  const std::string path = "level_family.nu.";
  const std::string family = require(spec, "family", path).get<std::string>();
  try {
    if (family == "geometric") {
      return make_nu_geometric(get_number(spec, "c", path), get_number(spec, "xi", path));
    }
    if (family == "polynomial") {
      return make_nu_polynomial(get_number(spec, "c", path), get_number(spec, "xi", path));
    }
    if (family == "contraction") {
      return make_nu_contraction(get_number(spec, "kappa", path),
                                 get_number(spec, "kappa_prime", path),
                                 get_number(spec, "gamma", path), get_number(spec, "eta", path));
    }
    if (family == "gaussian") {
      return make_nu_gaussian(get_number(spec, "kappa_hat", path),
                              get_number(spec, "gamma_hat", path), get_number(spec, "d", path),
                              get_number(spec, "lambda_min", path),
                              get_number(spec, "lambda_max", path));
    }
  } catch (const std::invalid_argument& e) {
    fail("level_family.nu", e.what());
  }
  fail(path + "family", "unknown decay family '" + family + "'");
}

AnyModel build_model(const json& spec) {
  const std::string path = "model.";
  const std::string type = require(spec, "type", path).get<std::string>();
  try {
    if (type == "ar1") return Ar1Model(get_number(spec, "sqrt_eta", path));
    if (type == "garch") {
      GarchParams p;
      p.w = get_number(spec, "w", path, p.w);
      p.alpha = get_number(spec, "alpha", path, p.alpha);
      p.beta = get_number(spec, "beta", path, p.beta);
      p.sigma0_sq = get_number(spec, "sigma0_sq", path, p.sigma0_sq);
      p.threshold = get_number(spec, "z", path, p.threshold);
      return GarchModel(p);
    }
    if (type == "queue") {
      if (spec.contains("preset")) {
        const std::string preset = spec.at("preset").get<std::string>();
        if (preset == "mhk1") {
          return mhk1_queue(get_number(spec, "lambda", path, 0.75),
                            get_number(spec, "p", path, 0.8875));
        }
        if (preset == "gig1") {
          return gig1_pareto_queue(get_number(spec, "service_scale", path, 0.8),
                                   get_number(spec, "z", path, 1.0));
        }
        fail(path + "preset", "unknown preset '" + preset + "'");
      }
      VariateSpec a = parse_variate(require(spec, "interarrival", path), path + "interarrival.");
      VariateSpec s = parse_variate(require(spec, "service", path), path + "service.");
      QueueFunctional f = QueueFunctional::identity();
      if (spec.contains("functional")) {
        const json& fs = spec.at("functional");
        const std::string kind = require(fs, "kind", path + "functional.").get<std::string>();
        if (kind == "indicator") {
          f = QueueFunctional::indicator(get_number(fs, "z", path + "functional."));
        } else if (kind != "identity") {
          fail(path + "functional.kind", "unknown functional '" + kind + "'");
        }
      }
      return QueueModel(std::move(a), std::move(s), f);
    }
    if (type == "gaussian") {
      Eigen::MatrixXd v;
      if (spec.contains("covariance")) {
        const json& rows = spec.at("covariance");
        if (!rows.is_array() || rows.empty()) fail(path + "covariance", "must be a square array");
        const auto d = static_cast<Eigen::Index>(rows.size());
        v.resize(d, d);
        for (Eigen::Index i = 0; i < d; ++i) {
          const json& row = rows.at(static_cast<std::size_t>(i));
          if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != d) {
            fail(path + "covariance", "must be a square array");
          }
          for (Eigen::Index j = 0; j < d; ++j) {
            v(i, j) = row.at(static_cast<std::size_t>(j)).get<double>();
          }
        }
      } else {
        const auto d = static_cast<Eigen::Index>(get_count(require(spec, "d", path), path + "d"));
        if (d < 1) fail(path + "d", "must be >= 1");
        RandomSource rng(get_count(spec.value("matrix_seed", json(0)), path + "matrix_seed"));
        v = random_correlation_matrix(d, rng);
      }
      const json fdefault = {{"kind", "indicator"}, {"index", 0}, {"z", 0.5}};
      GaussianFunctional f = parse_gaussian_functional(spec.value("functional", fdefault), v.rows());
      return GaussianModel(GaussianChainParams::from_covariance(std::move(v), std::move(f)));
    }
  } catch (const std::invalid_argument& e) {
    fail("model", e.what());
  }
  fail(path + "type", "unknown model '" + type + "'");
}

ExperimentConfig parse_config(const json& doc) {
  if (!doc.is_object()) fail("<root>", "must be a JSON object");
  if (!doc.contains("schema") || doc.at("schema") != 1) fail("schema", "must equal 1");

  ExperimentConfig c;
  c.model_spec = require(doc, "model", "");
  build_model(c.model_spec);

  const std::string method = doc.value("method", std::string("ulr"));
  if (method == "lr") c.method = Method::lr;
  else if (method == "ulr") c.method = Method::ulr;
  else if (method == "sulr") c.method = Method::sulr;
  else if (method == "bias") c.method = Method::bias;
  else fail("method", "must be one of lr, ulr, sulr, bias");

  const json& ks = require(doc, "k_values", "");
  if (!ks.is_array() || ks.empty()) fail("k_values", "must be a non-empty array");
  for (const auto& k : ks) {
    const std::uint64_t v = get_count(k, "k_values");
    if (v < 2) fail("k_values", "every k must be >= 2");
    c.k_values.push_back(v);
  }

  if (doc.contains("burn_frac")) c.burn_frac = parse_fraction(doc.at("burn_frac"), "burn_frac");
  c.burn_prime_frac = doc.contains("burn_prime_frac")
                          ? parse_fraction(doc.at("burn_prime_frac"), "burn_prime_frac")
                          : c.burn_frac;
  if (!fraction_le(c.burn_frac, c.burn_prime_frac)) {
    fail("burn_frac", "must not exceed burn_prime_frac");
  }
  if (!fraction_le(c.burn_prime_frac, Fraction{1, 2})) {
    fail("burn_prime_frac", "must not exceed 1/2");
  }

  if (doc.contains("reps")) c.reps = get_count(doc.at("reps"), "reps");
  if (c.reps < 1) fail("reps", "must be >= 1");
  if (doc.contains("n")) c.n = get_count(doc.at("n"), "n");
  if (c.n < 1) fail("n", "must be >= 1");
  if (doc.contains("bias_reps")) {
    c.bias_reps = get_count(doc.at("bias_reps"), "bias_reps");
    if (*c.bias_reps < 1) fail("bias_reps", "must be >= 1");
  }

  if (doc.contains("level_family")) {
    const json& lf = doc.at("level_family");
    const std::string kind = require(lf, "kind", "level_family.").get<std::string>();
    if (kind == "oblivious_exponential") {
      c.level_family.kind = LevelFamily::Kind::oblivious_exponential;
      c.level_family.delta = get_number(lf, "delta", "level_family.", 0.5);
      if (!(c.level_family.delta > 0.0)) fail("level_family.delta", "must be positive");
    } else if (kind == "oblivious_power") {
      c.level_family.kind = LevelFamily::Kind::oblivious_power;
      c.level_family.delta = get_number(lf, "delta", "level_family.", 2.0);
      if (!(c.level_family.delta > 1.0)) fail("level_family.delta", "must exceed 1");
    } else if (kind == "nu_dependent") {
      c.level_family.kind = LevelFamily::Kind::nu_dependent;
      c.level_family.nu_spec = require(lf, "nu", "level_family.");
      c.level_family.nu = parse_nu(c.level_family.nu_spec);
      if (c.level_family.nu->family() == NuFamily::custom) {
        fail("level_family.nu", "custom decay has no tail sum");
      }
    } else {
      fail("level_family.kind",
           "must be one of oblivious_exponential, oblivious_power, nu_dependent");
    }
  }

  if (doc.contains("q_rule")) {
    const json& q = doc.at("q_rule");
    if (q.is_string() && q == "experimental") {
      c.q_rule.kind = QRule::Kind::experimental;
    } else if (q.is_string() && q == "nu_dependent") {
      if (!c.level_family.nu) fail("q_rule", "nu_dependent needs a nu_dependent level_family");
      c.q_rule.kind = QRule::Kind::nu_dependent;
    } else if (q.is_object() && q.contains("fixed")) {
      c.q_rule.kind = QRule::Kind::fixed;
      c.q_rule.value = get_number(q, "fixed", "q_rule.");
      if (!(c.q_rule.value > 0.0 && c.q_rule.value <= 1.0)) {
        fail("q_rule.fixed", "must lie in (0, 1]");
      }
    } else {
      fail("q_rule", "must be \"experimental\", \"nu_dependent\" or {\"fixed\": q}");
    }
  }

  if (doc.contains("seed")) c.seed = get_count(doc.at("seed"), "seed");
  if (doc.contains("out")) c.out = doc.at("out").get<std::string>();
  if (doc.contains("sidecar")) c.sidecar = doc.at("sidecar").get<std::string>();
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("config '" + path + "' is not valid JSON: " + e.what());
  }
  return parse_config(doc);
}

unsigned thread_count() {
  if (const char* env = std::getenv("THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

std::vector<ExperimentRow> run_experiment(const ExperimentConfig& config, unsigned threads) {
  const AnyModel model = build_model(config.model_spec);
  std::vector<ExperimentRow> rows;
  for (std::uint64_t k : config.k_values) {
    rows.push_back(std::visit(
        [&](const auto& m) { return run_one_k(m, config, k, threads); }, model));
  }
  return rows;
}

std::vector<SweepRow> sweep_bias_std(const ExperimentConfig& config, unsigned threads) {
  const AnyModel model = build_model(config.model_spec);
  std::vector<SweepRow> rows;
  for (std::uint64_t k : config.k_values) {
    rows.push_back(std::visit(
        [&](const auto& m) { return sweep_one_k(m, config, k, threads); }, model));
  }
  return rows;
}

void write_run_csv(std::ostream& os, const std::vector<ExperimentRow>& rows) {
  os << "k,burn_in,method,mu,ci95,std,rmse,cost,cost_mse\n";
  for (const auto& r : rows) {
    const SummaryRow& s = r.summary;
    os << r.k << ',' << r.burn_in << ',' << to_string(r.method) << ',';
    put_number(os, s.mean);
    os << ',';
    put_number(os, s.ci95_halfwidth);
    os << ',';
    put_number(os, s.std);
    os << ',';
    put_number(os, s.rmse);
    os << ',';
    put_number(os, s.avg_cost);
    os << ',';
    put_number(os, s.cost_times_mse);
    os << '\n';
  }
}

void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
  os << "k,burn_in,abs_bias,bias_ci95,std\n";
  for (const auto& r : rows) {
    os << r.k << ',' << r.burn_in << ',';
    put_number(os, r.abs_bias);
    os << ',';
    put_number(os, r.bias_ci95);
    os << ',';
    put_number(os, r.std);
    os << '\n';
  }
}

json sidecar_json(const ExperimentConfig& config, const std::vector<ExperimentRow>& rows) {
  json doc;
  doc["schema"] = 1;
  doc["model"] = config.model_spec;
  doc["method"] = to_string(config.method);
  doc["reps"] = config.reps;
  if (config.method == Method::sulr) doc["n"] = config.n;
  doc["seed"] = config.seed;
  json family;
  family["kind"] = config.level_family.name();
  if (config.level_family.kind == LevelFamily::Kind::nu_dependent) {
    family["nu"] = config.level_family.nu_spec;
  } else {
    family["delta"] = config.level_family.delta;
  }
  doc["level_family"] = family;
  auto opt = [](const std::optional<double>& v) { return v ? json(*v) : json(nullptr); };
  json list = json::array();
  for (const auto& r : rows) {
    const SummaryRow& s = r.summary;
    list.push_back({{"k", r.k},
                    {"burn_in", r.burn_in},
                    {"burn_in_prime", r.burn_in_prime},
                    {"seed", r.seed},
                    {"q", r.q},
                    {"n_reps", s.n_reps},
                    {"mean", s.mean},
                    {"std", opt(s.std)},
                    {"se", opt(s.se)},
                    {"ci95", opt(s.ci95_halfwidth)},
                    {"rmse", opt(s.rmse)},
                    {"avg_cost", s.avg_cost},
                    {"total_cost", s.total_cost},
                    {"cost_mse", opt(s.cost_times_mse)},
                    {"bias", opt(s.bias)},
                    {"bias_se", opt(s.bias_se)}});
  }
  doc["rows"] = list;
  return doc;
}

void levels_inspect(std::ostream& os, const LevelFamily& family, std::uint64_t k,
                    std::optional<std::uint64_t> burn_in_prime) {
  const LevelDistribution dist = family.build(k);
  char buf[96];
  os << "family " << family.name();
  if (family.kind == LevelFamily::Kind::nu_dependent) {
    os << " k " << k;
  } else {
    std::snprintf(buf, sizeof buf, " delta %.10g", family.delta);
    os << buf;
  }
  os << '\n';
  constexpr unsigned kShown = 20;
  double shown = 0.0;
  for (unsigned l = 0; l <= kShown; ++l) {
    const double p = dist.pmf(l);
    shown += p;
    std::snprintf(buf, sizeof buf, "p_%u %.12g\n", l, p);
    os << buf;
  }
  std::snprintf(buf, sizeof buf, "sum_p %.15g\n", shown + dist.tail(kShown + 1));
  os << buf;
  std::snprintf(buf, sizeof buf, "sum_2l_p %.12g\n", dist.expected_doubling_mass());
  os << buf;
  std::snprintf(buf, sizeof buf, "q_experimental %.12g\n", q_experimental(dist));
  os << buf;
  if (family.kind == LevelFamily::Kind::nu_dependent) {
    const std::uint64_t bp = burn_in_prime.value_or(k / 10);
    std::snprintf(buf, sizeof buf, "q_nu_dependent %.12g\n", q_nu_dependent(TailSum(*family.nu), bp));
    os << buf;
  }
}

}  // namespace debias::experiment
