#include <doctest.h>

#include <sstream>

#include "fixtures.hpp"
#include "flaglab/errors.hpp"
#include "flaglab/io.hpp"

using namespace flaglab;
using namespace fixtures;

TEST_CASE("matrices in the three JSON shapes") {
  const auto numeric = element_from_json(Json::parse("[[2, 0], [0, 0.5]]"));
  CHECK_FALSE(numeric.has_exact());
  CHECK(numeric.matrix()(1, 1) == 0.5);

  const auto exact = element_from_json(Json::parse(R"([["1", "2"], ["0", "1"]])"));
  REQUIRE(exact.has_exact());
  CHECK(exact.exact() == sanov()[0].exact());

  const auto both = element_from_json(Json::parse(R"({"entries": [[0.2, 0], [0, 5]], "exact": [["1/5", "0"], ["0", "5"]]})"));
  CHECK(both.has_exact());

  CHECK_THROWS_AS(element_from_json(Json::parse(R"({"entries": [[0.3, 0], [0, 5]], "exact": [["1/5", "0"], ["0", "5"]]})")),
                  InvalidInput);
  CHECK_THROWS_AS(element_from_json(Json::parse("[[1, 2, 3], [0, 1, 0]]")), InvalidInput);
  CHECK_THROWS_AS(element_from_json(Json::parse("[[2, 0], [0, 1]]")), InvalidInput);
  CHECK_THROWS_AS(element_from_json(Json::parse(R"([["2", "0"], ["0", "1"]])")), InvalidInput);
  CHECK_THROWS_AS(element_from_json(Json::parse(R"([[1, "x"], [0, 1]])")), InvalidInput);
  CHECK_THROWS_AS(element_from_json(Json::parse("7")), InvalidInput);
}

TEST_CASE("element round trip keeps the exact image") {
  for (const auto& g : strong_schottky()) {
    const auto back = element_from_json(element_to_json(g));
    REQUIRE(back.has_exact());
    CHECK(back.exact() == g.exact());
    CHECK(back.matrix() == g.matrix());
  }
  const auto f = diag2(0.3);
  CHECK(element_from_json(element_to_json(f)).matrix() == f.matrix());
}

TEST_CASE("generator lists") {
  CHECK(generators_from_json(Json::parse(R"([[["1","2"],["0","1"]], [["1","0"],["2","1"]]])")).size() == 2);
  CHECK(generators_from_json(Json::parse(R"({"generators": [[[1,2],[0,1]]]})")).size() == 1);
  CHECK_THROWS_AS(generators_from_json(Json::parse("[]")), InvalidInput);
  CHECK_THROWS_AS(generators_from_json(Json::parse("[[[1,2],[0,1]], [[1,0,0],[0,1,0],[0,0,1]]]")), InvalidInput);
}

TEST_CASE("flags round trip and keep their kind") {
  Rng rng(1);
  const Flag f = random_flag(3, rng);
  const OppositeFlag y = random_opposite_flag(3, rng);
  CHECK(flag_to_json(f).at("kind") == "flag");
  CHECK(flag_to_json(y).at("kind") == "opposite");
  CHECK(flag_distance(flag_from_json(flag_to_json(f)), f) < 1e-15);
  CHECK(opposite_distance(opposite_flag_from_json(flag_to_json(y)), y) < 1e-15);
  CHECK_THROWS_AS(flag_from_json(flag_to_json(y)), InvalidInput);
  CHECK_THROWS_AS(opposite_flag_from_json(flag_to_json(f)), InvalidInput);
  CHECK_THROWS_AS(flag_from_json(Json::parse(R"({"kind": "flag", "frame": [[1, 1], [0, 1]]})")), InvalidInput);
}

TEST_CASE("certificates round trip and re-validate from their margins") {
  const SamplingBudget budget{1000, 3, 1e-6};
  const auto cert = pingpong_certificate(strong_schottky(), 0.1, budget, 4);
  const Json j = to_json(cert);
  CHECK(j.at("verdict") == "pass");
  const auto back = freeness_certificate_from_json(Json::parse(j.dump()));
  CHECK(back.pass == cert.pass);
  CHECK(back.failures_from_margins() == cert.failures);
  CHECK(back.per_generator[1].image_radius == cert.per_generator[1].image_radius);
  CHECK(back.exact_crosscheck->words == cert.exact_crosscheck->words);

  const auto failing = pingpong_certificate({strong_schottky()[0], strong_schottky()[0].power(2)}, 0.1, budget);
  const auto failing_back = freeness_certificate_from_json(to_json(failing));
  CHECK_FALSE(failing_back.pass);
  CHECK(failing_back.failures_from_margins() == failing.failures);

  const auto single = check_contracting(diag2(10.0), 0.1, budget);
  const auto single_back = contraction_certificate_from_json(to_json(single));
  CHECK(single_back.verdict_from_margins() == single.pass);
  CHECK(single_back.seed == 3);
}

TEST_CASE("CSV writers") {
  std::vector<double> norms;
  for (int k = 1; k <= 12; ++k) norms.insert(norms.end(), std::size_t{1} << k, k * 2.0);
  const auto report = estimate_delta(norms, 0.5);
  std::ostringstream growth;
  write_growth_csv(growth, report);
  const std::string g = growth.str();
  CHECK(g.rfind("T,N,logN\n", 0) == 0);
  CHECK(std::count(g.begin(), g.end(), '\n') == static_cast<long>(report.edges.size()) + 1);

  std::ostringstream cone;
  IndicatorPoint empty;
  empty.angle = 0.5;
  write_cone_csv(cone, {IndicatorPoint{0.25, 120, 0.1, ""}, empty});
  CHECK(cone.str() == "angle,tau_hat,sample_size\n0.25,0.10000000000000001,120\n0.5,,0\n");

  std::ostringstream cal;
  write_calibration_csv(cal, {CalibrationRow{0.1, 2, 0.5, 100}, CalibrationRow{0.1, 3, std::nullopt, 100}});
  CHECK(cal.str() == "epsilon,n,R_min_zero_violation,probes\n0.10000000000000001,2,0.5,100\n0.10000000000000001,3,,100\n");
}

TEST_CASE("report fragments") {
  const auto records = enumerate_ball(sanov(), {3, Dedup::Exact, true});
  const Json r = to_json(records.front());
  CHECK(r.at("word") == Json::array({0}));
  CHECK(r.at("kflag").at("kind") == "flag");
  CHECK(r.at("lflag").at("kind") == "opposite");
  CHECK(to_json(zariski_heuristic(records)).at("verdict") == "consistent with Zariski dense");
  CHECK(to_json(anosov_slope(records)).contains("C_hat"));
}

TEST_CASE("file helpers") {
  CHECK_THROWS_AS(read_json_file("/nonexistent/file.json"), InvalidInput);
  const std::string path = "io_test_malformed.json";
  write_text_file(path, "{not json");
  CHECK_THROWS_AS(read_json_file(path), InvalidInput);
  write_text_file(path, R"({"generators": [[["1","2"],["0","1"]]]})");
  CHECK(load_generators(path).size() == 1);
  std::remove(path.c_str());
}
