#include <catch_amalgamated.hpp>

#include <sstream>
#include <string>

#include "debias/experiment.hpp"

using namespace debias;
using namespace debias::experiment;
using nlohmann::json;

namespace {

json base_config() {
  return json::parse(R"({
    "schema": 1,
    "model": {"type": "garch"},
    "method": "ulr",
    "k_values": [50],
    "burn_frac": "1/10",
    "reps": 300,
    "seed": 5
  })");
}

std::string error_of(const json& doc) {
  try {
    parse_config(doc);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("a minimal configuration parses with defaults") {
  const auto c = parse_config(base_config());
  CHECK(c.method == Method::ulr);
  CHECK(c.k_values == std::vector<std::uint64_t>{50});
  CHECK(c.burn_frac.of(3200) == 320);
  CHECK(c.burn_prime_frac.of(3200) == 320);
  CHECK(c.level_family.kind == LevelFamily::Kind::oblivious_exponential);
  CHECK(c.level_family.delta == 0.5);
  CHECK(c.q_rule.kind == QRule::Kind::experimental);
  CHECK(c.effective_bias_reps() == 300);
}

TEST_CASE("decimal burn fractions floor without rounding artefacts") {
  auto doc = base_config();
  doc["burn_frac"] = 0.29;
  doc["burn_prime_frac"] = 0.5;
  const auto c = parse_config(doc);
  CHECK(c.burn_frac.of(100) == 29);
  CHECK(c.burn_prime_frac.of(25) == 12);
}

TEST_CASE("configuration errors name the field") {
  auto doc = base_config();
  doc["schema"] = 2;
  CHECK(error_of(doc).find("schema") != std::string::npos);

  doc = base_config();
  doc.erase("k_values");
  CHECK(error_of(doc).find("k_values") != std::string::npos);

  doc = base_config();
  doc["burn_frac"] = "1/4";
  doc["burn_prime_frac"] = "1/10";
  CHECK(error_of(doc).find("burn_frac") != std::string::npos);

  doc = base_config();
  doc["burn_prime_frac"] = "3/5";
  CHECK(error_of(doc).find("burn_prime_frac") != std::string::npos);

  doc = base_config();
  doc["reps"] = 0;
  CHECK(error_of(doc).find("reps") != std::string::npos);

  doc = base_config();
  doc["method"] = "mlmc";
  CHECK(error_of(doc).find("method") != std::string::npos);

  doc = base_config();
  doc["model"] = {{"type", "garch"}, {"alpha", 0.5}, {"beta", 0.6}};
  CHECK(error_of(doc).find("model") != std::string::npos);

  doc = base_config();
  doc["level_family"] = {{"kind", "oblivious_power"}, {"delta", 1.0}};
  CHECK(error_of(doc).find("level_family.delta") != std::string::npos);

  doc = base_config();
  doc["q_rule"] = "nu_dependent";
  CHECK(error_of(doc).find("q_rule") != std::string::npos);

  doc = base_config();
  doc["q_rule"] = {{"fixed", 1.5}};
  CHECK(error_of(doc).find("q_rule.fixed") != std::string::npos);

  doc = base_config();
  doc["model"] = {{"type", "queue"}, {"interarrival", {{"kind", "pareto"}, {"shape", 2.0}}},
                  {"service", {{"kind", "exponential"}, {"rate", 1.0}}}};
  CHECK(error_of(doc).find("model.interarrival") != std::string::npos);
}

TEST_CASE("every model type builds from JSON") {
  CHECK(std::holds_alternative<Ar1Model>(build_model({{"type", "ar1"}, {"sqrt_eta", 0.5}})));
  CHECK(std::holds_alternative<GarchModel>(build_model({{"type", "garch"}})));
  CHECK(std::holds_alternative<QueueModel>(build_model({{"type", "queue"}, {"preset", "mhk1"}})));
  CHECK(std::holds_alternative<QueueModel>(build_model({{"type", "queue"}, {"preset", "gig1"}})));
  const auto g = build_model(json::parse(
      R"({"type":"gaussian","d":5,"matrix_seed":3,"functional":{"kind":"indicator","index":0,"z":0.5}})"));
  REQUIRE(std::holds_alternative<GaussianModel>(g));
  CHECK(std::get<GaussianModel>(g).dimension() == 5);
  const auto explicit_v = build_model(json::parse(
      R"({"type":"gaussian","covariance":[[1,0.5],[0.5,1]],"functional":{"kind":"coordinate","index":1}})"));
  CHECK(std::get<GaussianModel>(explicit_v).dimension() == 2);
}

TEST_CASE("runs are deterministic and independent of the thread count") {
  auto doc = base_config();
  doc["k_values"] = {40, 80};
  const auto c = parse_config(doc);
  const auto one = run_experiment(c, 1);
  const auto three = run_experiment(c, 3);
  std::ostringstream a;
  std::ostringstream b;
  write_run_csv(a, one);
  write_run_csv(b, three);
  CHECK(a.str() == b.str());
  REQUIRE(one.size() == 2);
  CHECK(one[0].summary.mean == three[0].summary.mean);
  CHECK(one[1].burn_in == 8);
  CHECK(one[0].q == Catch::Approx(0.1231326875));
}

TEST_CASE("CSV layout") {
  auto doc = base_config();
  doc["reps"] = 1;
  const auto rows = run_experiment(parse_config(doc), 1);
  std::ostringstream os;
  write_run_csv(os, rows);
  const std::string text = os.str();
  CHECK(text.rfind("k,burn_in,method,mu,ci95,std,rmse,cost,cost_mse\n", 0) == 0);
  const std::string line = text.substr(text.find('\n') + 1);
  CHECK(line.rfind("50,5,ulr,", 0) == 0);
  // a single replication has no spread: ci95, std, rmse and cost_mse are empty
  CHECK(line.find(",,,") != std::string::npos);
  CHECK(line.back() == '\n');
  CHECK(line[line.size() - 2] == ',');
}

TEST_CASE("LR rows carry the estimated bias in their RMSE") {
  auto doc = base_config();
  doc["method"] = "lr";
  doc["k_values"] = {25};
  doc["reps"] = 2000;
  const auto rows = run_experiment(parse_config(doc), 1);
  const auto& s = rows[0].summary;
  REQUIRE(s.bias);
  CHECK(*s.bias < -0.25);
  CHECK(*s.rmse > *s.std);
  CHECK(s.avg_cost == 25.0);
}

TEST_CASE("SULR rows with one replication report the plug-in error") {
  auto doc = base_config();
  doc["method"] = "sulr";
  doc["n"] = 200;
  doc["reps"] = 1;
  const auto rows = run_experiment(parse_config(doc), 1);
  const auto& s = rows[0].summary;
  REQUIRE(s.std);
  CHECK(*s.ci95_halfwidth == 1.96 * *s.se);
  CHECK(s.avg_cost >= 200.0 * 50.0);
  CHECK(s.total_cost == static_cast<std::uint64_t>(s.avg_cost));
}

TEST_CASE("bias sweep of a constant functional is identically zero") {
  auto doc = base_config();
  doc["model"] = {{"type", "garch"}, {"z", 1e9}};
  doc["k_values"] = {10, 20, 40};
  doc["reps"] = 200;
  const auto rows = sweep_bias_std(parse_config(doc), 1);
  REQUIRE(rows.size() == 3);
  for (const auto& r : rows) {
    CHECK(r.abs_bias == 0.0);
    CHECK(*r.std == 0.0);
    CHECK(*r.bias_ci95 == 0.0);
  }
  std::ostringstream os;
  write_sweep_csv(os, rows);
  CHECK(os.str().rfind("k,burn_in,abs_bias,bias_ci95,std\n10,1,0,0,0\n", 0) == 0);
}

TEST_CASE("ν-dependent level family with ν-dependent q") {
  auto doc = base_config();
  doc["model"] = {{"type", "ar1"}, {"sqrt_eta", 0.5}};
  doc["level_family"] = json::parse(
      R"({"kind":"nu_dependent","nu":{"family":"contraction","kappa":1,"kappa_prime":1.3333333333,"gamma":1,"eta":0.25}})");
  doc["q_rule"] = "nu_dependent";
  doc["k_values"] = {100};
  const auto c = parse_config(doc);
  const auto rows = run_experiment(c, 1);
  CHECK(rows[0].q > 0.0);
  CHECK(rows[0].q < 1.0);
  const auto meta = sidecar_json(c, rows);
  CHECK(meta["level_family"]["kind"] == "nu_dependent");
  CHECK(meta["rows"][0]["burn_in_prime"] == 10);
}

TEST_CASE("levels listing") {
  LevelFamily lf;
  std::ostringstream os;
  levels_inspect(os, lf, 1000, std::nullopt);
  const std::string text = os.str();
  CHECK(text.find("p_0 0.5\n") != std::string::npos);
  CHECK(text.find("p_20 ") != std::string::npos);
  CHECK(text.find("sum_p 1\n") != std::string::npos);
  CHECK(text.find("q_experimental 0.1231326875") != std::string::npos);

  LevelFamily nu;
  nu.kind = LevelFamily::Kind::nu_dependent;
  nu.nu = make_nu_polynomial(1.0, 2.0);
  std::ostringstream os2;
  levels_inspect(os2, nu, 100, 10);
  CHECK(os2.str().find("q_nu_dependent ") != std::string::npos);
}
