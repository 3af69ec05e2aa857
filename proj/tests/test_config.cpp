#include <doctest.h>

#include <string>

#include "vcm/config.hpp"
#include "vcm/io.hpp"

using namespace vcm;

namespace {

const char* kReferenceConfig = R"(# reference plan
name = ref
dictionary.kind = gaussian
dictionary.p = 100
truth.s = 2
truth.s0 = 2
truth.r = 2
truth.nu = 2
sigma = 0.5
n_grid = 512,1024,2048
replicates = 5
seed = 20250601
threads = 2
)";

}  // namespace

TEST_CASE("config parses keys, comments and defaults") {
  const ConfigMap cfg = parse_config_text(kReferenceConfig);
  CHECK(cfg.at("name") == "ref");
  CHECK(cfg.at("n_grid") == "512,1024,2048");

  const ExperimentPlan plan = plan_from_config(cfg);
  CHECK(plan.name == "ref");
  CHECK(plan.dictionary.p == 100);
  CHECK(plan.truth.s() == 2);
  CHECK(plan.truth.s0() == 2);
  CHECK(plan.truth.varying_indices == std::vector<int>{0, 1});
  CHECK(plan.truth.constant_indices == std::vector<int>{2, 3});
  CHECK(plan.sigma == 0.5);
  CHECK(plan.n_grid == std::vector<long>{512, 1024, 2048});
  CHECK(plan.replicates == 5);
  CHECK(plan.master_seed == 20250601);
  CHECK(plan.penalty.mu == 2.0);     // defaulted
  CHECK(plan.solver.rel_tol == 1e-8);  // defaulted
  CHECK(plan.threads == 2);
}

TEST_CASE("unknown keys are rejected by name") {
  try {
    plan_from_config(parse_config_text(std::string(kReferenceConfig) +
                                       "penalty.typo = 3\n"));
    FAIL("expected rejection");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("penalty.typo") != std::string::npos);
  }
}

TEST_CASE("missing required keys are rejected by name") {
  try {
    plan_from_config(parse_config_text("dictionary.kind = gaussian\n"));
    FAIL("expected rejection");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("dictionary.p") != std::string::npos);
  }
}

TEST_CASE("duplicate keys and malformed lines are rejected") {
  CHECK_THROWS_AS(parse_config_text("a = 1\na = 2\n"), std::invalid_argument);
  CHECK_THROWS_AS(parse_config_text("just some text\n"), std::invalid_argument);
}

TEST_CASE("manifest round-trips to an identical plan") {
  const ExperimentPlan plan = plan_from_config(parse_config_text(kReferenceConfig));
  const std::string manifest = manifest_text(plan);
  const ExperimentPlan reparsed = plan_from_config(parse_config_text(manifest));
  CHECK(plan == reparsed);
  CHECK(manifest == manifest_text(reparsed));
}

TEST_CASE("seventeen-digit formatting round-trips doubles") {
  for (double x : {0.1, 1.0 / 3.0, 2.5e-17, 123456.789, -0.0001}) {
    CHECK(std::stod(fmt17(x)) == x);
  }
}
