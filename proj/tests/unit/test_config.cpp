#include <string>

#include <doctest.h>

#include "vrlab/config.hpp"
#include "vrlab/errors.hpp"

using namespace vrlab;

namespace {

std::string error_of(const std::string& text) {
  try {
    parse_config_text(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("missing keys take documented defaults") {
  const SweepConfig cfg = parse_config_text("[model]\ns = 40\n");
  CHECK(cfg.integrator.dt == 1e-3);
  CHECK(cfg.model.s == 40);
  CHECK(cfg.lambda.min == 0.05);
  CHECK(cfg.lambda.max == 3.0);
  CHECK(cfg.lambda.count == 60);
  CHECK(cfg.amplitude.t1 == 60.0);
  CHECK(cfg.amplitude.t_max == 80.0);
  CHECK(cfg.integrator.t_max == 100.0);
}

TEST_CASE("validation names the failing field") {
  CHECK(error_of("[lambda]\nmin = 2\nmax = 1\n").find("lambda.max") != std::string::npos);
  CHECK(error_of("[integrator]\ndt = 0.5\n").find("dt") != std::string::npos);
  CHECK(error_of("[model]\nw = 150\n").find("model.w") != std::string::npos);
  CHECK(error_of("[run]\nworkers = 0\n").find("run.workers") != std::string::npos);
  CHECK(error_of("[amplitude]\nt1 = 90\n").find("amplitude.t_max") != std::string::npos);
}

TEST_CASE("strict parsing with line numbers") {
  CHECK(error_of("[model]\ns = 10\nwidht = 3\n").find("line 3") != std::string::npos);
  CHECK(error_of("[model]\ns = 10\nwidht = 3\n").find("unknown key") != std::string::npos);
  CHECK(error_of("[modle]\n").find("unknown section") != std::string::npos);
  CHECK(error_of("[model]\ns = ten\n").find("line 2") != std::string::npos);
  CHECK(error_of("s = 10\n").find("outside") != std::string::npos);
  CHECK(error_of("[model]\ns 10\n").find("key = value") != std::string::npos);
  CHECK(error_of("[model]\ns = 10\ns = 11\n").find("duplicate") != std::string::npos);
  CHECK(error_of("[model\n").find("malformed") != std::string::npos);
  CHECK_THROWS_AS(parse_config("/nonexistent/vrlab.ini"), ConfigError);
}

TEST_CASE("comments and whitespace") {
  const SweepConfig cfg = parse_config_text("# header\n\n[lambda] \n  count = 7  ; trailing\n[oracle]\nsites = 2, 3\n");
  CHECK(cfg.lambda.count == 7);
  CHECK(cfg.oracle.sites == std::vector<int>{2, 3});
}

TEST_CASE("round trip") {
  SweepConfig cfg;
  cfg.model.kind = "rotor";
  cfg.initial.kind = "rotor";
  cfg.model.l_max = 20;
  cfg.lambda = {0.1, 1.2, 20};
  cfg.integrator.dt = 0.1 / 3.0;
  cfg.seed = 12345678901234ULL;
  cfg.classical.n = 200000;
  cfg.oracle.sites = {2, 4};
  const std::string text = serialize(cfg);
  const SweepConfig back = parse_config_text(text);
  CHECK(back == cfg);
  CHECK(serialize(back) == text);
  CHECK(parse_config_text(serialize(SweepConfig{})) == SweepConfig{});
}

TEST_CASE("lambda grid") {
  LambdaGrid g{0.1, 1.2, 12};
  const auto v = g.values();
  CHECK(v.size() == 12);
  CHECK(v.front() == 0.1);
  CHECK(v.back() == doctest::Approx(1.2).epsilon(1e-15));
  CHECK(LambdaGrid{0.5, 0.5 + 1e-12, 2}.values().size() == 2);
  CHECK(LambdaGrid{0.5, 1.0, 1}.values() == std::vector<double>{0.5});
}
