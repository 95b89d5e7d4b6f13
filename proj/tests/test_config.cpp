#include <doctest.h>

#include <fstream>
#include <sstream>

#include "nbe/config.hpp"
#include "nbe/errors.hpp"

#ifndef NBE_TEST_DATA_DIR
#define NBE_TEST_DATA_DIR "tests/data"
#endif

using namespace nbe;

TEST_CASE("minimal zoo-list config parses") {
  ParseResult r = parse_config("[run]\ntask = zoo-list\n");
  REQUIRE(r.ok());
  CHECK(r.config->task == Task::ZooList);
}

TEST_CASE("missing schedule keys are reported by name") {
  std::string text =
      "[run]\n"
      "task = estimate-nb\n"
      "seed = 1\n"
      "[system]\n"
      "ref = zoo:doubling\n";
  ParseResult r = parse_config(text);
  REQUIRE(!r.ok());
  bool saw_eps = false, saw_n = false, saw_nmax = false;
  for (const auto& e : r.errors) {
    if (e.message.find("epsilons") != std::string::npos) saw_eps = true;
    if (e.message.find("[schedule] n") != std::string::npos) saw_n = true;
    if (e.message.find("n_max") != std::string::npos) saw_nmax = true;
  }
  CHECK(saw_eps);
  CHECK(saw_n);
  CHECK(saw_nmax);
}

TEST_CASE("all problems are reported with line numbers, not first-only") {
  std::string text =
      "[run]\n"
      "task = estimate-nb\n"
      "bogus = 1\n"
      "mode = sideways\n"
      "[mystery]\n"
      "k = v\n";
  ParseResult r = parse_config(text);
  REQUIRE(!r.ok());
  CHECK(r.errors.size() >= 3);
  bool line3 = false, line4 = false, line5 = false;
  for (const auto& e : r.errors) {
    if (e.line == 3) line3 = true;
    if (e.line == 4) line4 = true;
    if (e.line == 5) line5 = true;
  }
  CHECK(line3);
  CHECK(line4);
  CHECK(line5);
}

TEST_CASE("golden config round trip") {
  std::string text =
      "# exercise every section\n"
      "[run]\n"
      "task = estimate-katok\n"
      "seed = 99\n"
      "mode = exact\n"
      "radius = neutralized\n"
      "threads = 2\n"
      "[system]\n"
      "ref = zoo:full-shift-2\n"
      "[set]\n"
      "z = avoid:11\n"
      "ground = 64\n"
      "[schedule]\n"
      "epsilons = 0.5,0.4\n"
      "n = 3..6\n"
      "n_max = 6\n"
      "alpha = -1,4\n"
      "deltas = 0.4,0.2\n"
      "[measure]\n"
      "count = 128\n"
      "init = random\n"
      "push = none\n";
  ParseResult r = parse_config(text);
  REQUIRE(r.ok());
  const RunConfig& c = *r.config;
  CHECK(c.task == Task::EstimateKatok);
  CHECK(c.seed == 99);
  CHECK(c.mode == CoverMode::Exact);
  CHECK(c.threads == 2);
  CHECK(c.z.kind == SetSpec::Kind::AvoidPairs);
  CHECK(c.epsilons == std::vector<double>{0.5, 0.4});
  CHECK(c.n_schedule.size() == 4);
  CHECK(c.n_max == 6);
  CHECK(c.deltas == std::vector<double>{0.4, 0.2});
  CHECK(c.measure_count == 128);

  // canonical form re-parses to the same canonical form
  ParseResult again = parse_config(c.normalized());
  REQUIRE(again.ok());
  CHECK(again.config->normalized() == c.normalized());
}

TEST_CASE("golden config file parses to the frozen dump") {
  std::ifstream cfg(std::string(NBE_TEST_DATA_DIR) + "/golden_nb.cfg");
  REQUIRE(cfg.good());
  std::stringstream cs;
  cs << cfg.rdbuf();
  ParseResult r = parse_config(cs.str());
  REQUIRE(r.ok());
  std::ifstream dump(std::string(NBE_TEST_DATA_DIR) + "/golden_nb.dump");
  REQUIRE(dump.good());
  std::stringstream ds;
  ds << dump.rdbuf();
  CHECK(r.config->normalized() == ds.str());
}

TEST_CASE("schedule sanity") {
  std::string base =
      "[run]\ntask = estimate-nb\nseed = 1\n[system]\nref = zoo:doubling\n[schedule]\n";
  CHECK(!parse_config(base + "epsilons = 0.1,0.2\nn = 4..8\nn_max = 8\n").ok());   // increasing
  CHECK(!parse_config(base + "epsilons = 0.2,0.1\nn = 4..8\nn_max = 6\n").ok());   // n beyond max
  CHECK(parse_config(base + "epsilons = 0.2,0.1\nn = 4..8\nn_max = 8\n").ok());
}

TEST_CASE("map and space descriptors parse and rebuild") {
  for (const char* d :
       {"affine:2,0.000000", "tent:1.500000", "logistic:3.700000", "contraction:0.500000",
        "lshift", "periodic:affine:2,0.000000|affine:3,0.000000"}) {
    MapSequence m = parse_map_descriptor(d);
    CHECK(m.describe() == d);
  }
  MapSequence sw = parse_map_descriptor("switched:7:affine:2,0.000000@0.500000|affine:3,0.000000@0.500000");
  CHECK(sw.rule() == MapSequence::Rule::Switched);
  CHECK(sw.seed() == 7);

  for (const char* s : {"interval", "torus:3", "shift:k=2,L=16", "shift:k=2,L=16,avoid=11"}) {
    Space sp = parse_space_descriptor(s);
    CHECK(sp.describe() == s);
  }
  CHECK_THROWS_AS(parse_map_descriptor("banana:1"), ArgumentError);
  CHECK_THROWS_AS(parse_space_descriptor("banana"), ArgumentError);
}

TEST_CASE("inline systems materialize") {
  std::string text =
      "[run]\ntask = estimate-nb\nseed = 3\n"
      "[system]\nmap = affine:2,0\nspace = interval\n"
      "[schedule]\nepsilons = 0.2\nn = 4..6\nn_max = 6\n";
  ParseResult r = parse_config(text);
  REQUIRE(r.ok());
  System sys = system_from_config(*r.config);
  CHECK(sys.space.kind() == SpaceKind::UnitInterval);
  CHECK(sys.maps.maps()[0].slopes[0] == 2);
}
