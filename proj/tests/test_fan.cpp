#include "manin/fan.hpp"

#include <doctest.h>

#include <random>

using namespace manin;

TEST_CASE("builtin fans are complete and regular") {
  for (const char* name : {"p1", "p2", "p1xp1", "hirzebruch-0", "hirzebruch-1", "hirzebruch-2", "hirzebruch-5"}) {
    CAPTURE(name);
    ValidationReport rep = validate_fan(builtin_fan(name));
    CHECK(rep.ok);
    CHECK(rep.violations.empty());
  }
  for (int o : {1, -1})
    for (int n = 0; n <= 3; ++n) CHECK(validate_fan(hirzebruch_fan(n, o)).ok);
}

TEST_CASE("structural errors are FanFormatError") {
  CHECK_THROWS_AS(Fan(1, {{1}, {-1}}, {{0}, {2}}), FanFormatError);
  CHECK_THROWS_AS(Fan(2, {{1, 0}, {0}}, {{0, 1}}), FanFormatError);
  CHECK_THROWS_AS(Fan(2, {{0, 0}, {0, 1}}, {{0, 1}}), FanFormatError);
  CHECK_THROWS_AS(Fan(1, {{1}, {-1}}, {{0, 0}}), FanFormatError);
  CHECK_THROWS_AS(builtin_fan("p7"), FanFormatError);
  CHECK_THROWS_AS(load_fan("/nonexistent/fan.json"), FanFormatError);
  CHECK_THROWS_AS(Fan::from_json(nlohmann::json::parse(R"({"dim": 1, "rays": "x"})")), FanFormatError);
}

TEST_CASE("validation catches incomplete, non-regular and non-primitive fans") {
  // half of P1
  CHECK_FALSE(validate_fan(Fan(1, {{1}}, {{0}})).ok);
  // P2 missing a cone
  CHECK_FALSE(validate_fan(Fan(2, {{1, 0}, {0, 1}, {-1, -1}}, {{0, 1}, {1, 2}})).ok);
  // weighted projective plane P(1,1,2): cone {(0,1), (-1,-2)} has index 1 but
  // {(1,0), (-1,-2)} has index 2
  CHECK_FALSE(validate_fan(Fan(2, {{1, 0}, {0, 1}, {-1, -2}}, {{0, 1}, {1, 2}, {0, 2}})).ok);
  // non-primitive ray
  CHECK_FALSE(validate_fan(Fan(1, {{2}, {-1}}, {{0}, {1}})).ok);
}

TEST_CASE("json round trip") {
  Fan f = builtin_fan("p2");
  Fan g = Fan::from_json(f.to_json());
  CHECK(g.rays() == f.rays());
  CHECK(g.max_cones() == f.max_cones());
  CHECK(g.cones() == f.cones());
}

TEST_CASE("cone lists and counts") {
  Fan p2 = builtin_fan("p2");
  CHECK(p2.cones().size() == 7);  // {0}, 3 rays, 3 max cones
  CHECK(p2.count_cones_of_dim(0) == 1);
  CHECK(p2.count_cones_of_dim(1) == 3);
  CHECK(p2.count_cones_of_dim(2) == 3);
  Fan pp = product_fan(builtin_fan("p1"), builtin_fan("p1"));
  CHECK(pp.num_rays() == 4);
  CHECK(pp.max_cones().size() == 4);
  CHECK(validate_fan(pp).ok);
  Fan p1p2 = product_fan(builtin_fan("p1"), p2);
  CHECK(p1p2.dim() == 3);
  CHECK(p1p2.max_cones().size() == 6);
  CHECK(validate_fan(p1p2).ok);
}

TEST_CASE("anticanonical PL function of P2 has the closed form n1 + n2 - 3 min(0, n1, n2)") {
  Fan p2 = builtin_fan("p2");
  PLFunction rho = PLFunction::anticanonical(p2);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (int i = 0; i < 200; ++i) {
    double n[2] = {u(rng), u(rng)};
    double expect = n[0] + n[1] - 3.0 * std::min({0.0, n[0], n[1]});
    CHECK(pl_evaluate_real(rho, n) == doctest::Approx(expect).epsilon(1e-12));
  }
}

TEST_CASE("PL functions: linear on cones, exact evaluation agrees") {
  Fan f = hirzebruch_fan(2);
  std::vector<double> lam{1.5, 0.5, 2.0, 1.0};
  PLFunction pl = PLFunction::real(f, lam);
  for (std::size_t j = 0; j < f.num_rays(); ++j) {
    std::vector<double> e(f.rays()[j].begin(), f.rays()[j].end());
    CHECK(pl_evaluate_real(pl, e) == doctest::Approx(lam[j]));
  }
  QVec lq{Rational(3, 2), Rational(1, 2), Rational(2), Rational(1)};
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> u(-20, 20);
  for (int i = 0; i < 100; ++i) {
    QVec n{Rational(u(rng), 3), Rational(u(rng), 7)};
    std::vector<double> nd = to_doubles(n);
    CHECK(pl_evaluate_real(pl, nd) == doctest::Approx(to_double(pl_evaluate(f, lq, n))).epsilon(1e-12));
    // positive homogeneity
    std::vector<double> n2{2.5 * nd[0], 2.5 * nd[1]};
    CHECK(pl_evaluate_real(pl, n2) == doctest::Approx(2.5 * pl_evaluate_real(pl, nd)).epsilon(1e-12));
  }
}

TEST_CASE("locate_cone returns nonnegative coordinates") {
  Fan f = builtin_fan("p1xp1");
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int i = 0; i < 100; ++i) {
    double n[2] = {u(rng), u(rng)};
    ConeLocation loc = locate_cone(f, n);
    double back[2] = {0, 0};
    for (std::size_t k = 0; k < loc.coeffs.size(); ++k) {
      CHECK(loc.coeffs[k] >= -1e-12);
      const auto& r = f.rays()[f.max_cones()[loc.cone][k]];
      back[0] += loc.coeffs[k] * r[0];
      back[1] += loc.coeffs[k] * r[1];
    }
    CHECK(back[0] == doctest::Approx(n[0]));
    CHECK(back[1] == doctest::Approx(n[1]));
  }
}
