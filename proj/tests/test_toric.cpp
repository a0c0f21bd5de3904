#include "manin/toric.hpp"

#include "manin/primes.hpp"
#include "manin/special.hpp"

#include <doctest.h>
#include <omp.h>

#include <cmath>

using namespace manin;

TEST_CASE("alpha constants are exact") {
  CHECK(alpha_constant(builtin_fan("p1")) == Rational(1, 2));
  CHECK(alpha_constant(builtin_fan("p2")) == Rational(1, 3));
  CHECK(alpha_constant(builtin_fan("p1xp1")) == Rational(1, 4));
  // F_n: 1 / (2 (n + 2))
  for (int n = 0; n <= 4; ++n) CHECK(alpha_constant(hirzebruch_fan(n)) == Rational(1, 2 * (n + 2)));
  // P3 from its fan: 1/4
  Fan p3(3, {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {-1, -1, -1}},
         {{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}});
  CHECK(alpha_constant(p3) == Rational(1, 4));
}

TEST_CASE("Picard data") {
  PicardData p1 = picard_data(builtin_fan("p1"));
  CHECK(p1.rank == 1);
  CHECK(p1.anticanonical == QVec{Rational(2)});
  PicardData pp = picard_data(builtin_fan("p1xp1"));
  CHECK(pp.rank == 2);
  QVec ac = pp.anticanonical;
  std::sort(ac.begin(), ac.end());
  CHECK(ac == QVec{Rational(2), Rational(2)});
  PicardData p2 = picard_data(builtin_fan("p2"));
  CHECK(p2.anticanonical == QVec{Rational(3)});
  // M maps into the kernel of the quotient
  for (const auto& row : pp.m_rows) CHECK(is_zero(mat_vec(pp.quotient, row)));
}

TEST_CASE("point counts over F_p match closed forms") {
  for (std::uint64_t p : {2, 3, 5, 7, 101}) {
    const Integer P(p);
    CHECK(count_points_mod_p(builtin_fan("p1"), p) == P + 1);
    CHECK(count_points_mod_p(builtin_fan("p2"), p) == P * P + P + 1);
    CHECK(count_points_mod_p(builtin_fan("p1xp1"), p) == (P + 1) * (P + 1));
    CHECK(count_points_mod_p(hirzebruch_fan(3), p) == (P + 1) * (P + 1));
  }
}

TEST_CASE("local factors") {
  auto poly = local_factor_poly(builtin_fan("p1"));
  REQUIRE(poly.size() >= 3);
  CHECK(poly[0] == 1);
  CHECK(poly[1] == 0);
  CHECK(poly[2] == -1);  // (1 - x)(1 + x)
  for (const char* name : {"p2", "p1xp1", "hirzebruch-2"}) {
    auto q = local_factor_poly(builtin_fan(name));
    CHECK(q[0] == 1);
    CHECK(q[1] == 0);
    // against (1 - 1/p)^r #X(F_p) / p^d
    Fan f = builtin_fan(name);
    const int r = static_cast<int>(f.num_rays()) - f.dim();
    for (std::uint64_t p : {2, 3, 11}) {
      long double direct = std::pow(1.0L - 1.0L / p, r) *
                           static_cast<long double>(count_points_mod_p(f, p).convert_to<long long>()) /
                           std::pow(static_cast<long double>(p), f.dim());
      CHECK(static_cast<double>(local_factor(q, p)) == doctest::Approx(static_cast<double>(direct)).epsilon(1e-15));
    }
  }
}

TEST_CASE("archimedean volume against Monte Carlo") {
  for (const char* name : {"p1", "p2", "p1xp1", "hirzebruch-1"}) {
    Fan f = builtin_fan(name);
    MonteCarloEstimate mc = archimedean_volume_mc(f, 200000, 99);
    CAPTURE(name);
    CHECK(std::fabs(mc.mean - archimedean_volume(f)) < 5.0 * mc.stderr_ + 1e-12);
  }
  CHECK(archimedean_volume(builtin_fan("p1")) == 4.0);
  CHECK(archimedean_volume(builtin_fan("p2")) == 12.0);
}

TEST_CASE("Tamagawa intervals contain the classical constants") {
  const double z2 = zeta_real(2.0), z3 = zeta_real(3.0);
  Interval t1 = tamagawa_number(builtin_fan("p1"), 100000);
  Interval t2 = tamagawa_number(builtin_fan("p2"), 100000);
  Interval t3 = tamagawa_number(builtin_fan("p1xp1"), 100000);
  CHECK(t1.contains(24.0 / (kPi * kPi)));
  CHECK(t2.contains(12.0 / z3));
  CHECK(t3.contains(16.0 / (z2 * z2)));
  CHECK(t1.rel_width() < 1e-4);
  CHECK_THROWS(tamagawa_number(builtin_fan("p2"), 10, 1e-6));
}

TEST_CASE("Tamagawa number does not depend on the thread count") {
  const int saved = omp_get_max_threads();
  omp_set_num_threads(1);
  Interval a = tamagawa_number(builtin_fan("p2"), 200000);
  omp_set_num_threads(3);
  Interval b = tamagawa_number(builtin_fan("p2"), 200000);
  omp_set_num_threads(saved);
  CHECK(a.value == b.value);
  CHECK(a.lo == b.lo);
  CHECK(a.hi == b.hi);
}

TEST_CASE("leading constant and predicted count") {
  LeadingConstant lc = leading_constant(builtin_fan("p1"), 100000);
  CHECK(lc.theta.value == doctest::Approx(12.0 / (kPi * kPi)).epsilon(1e-6));
  CHECK(lc.b == 1);
  CHECK(predicted_count(lc, 1e6) == doctest::Approx(1e6 * lc.theta.value));
  LeadingConstant l2 = leading_constant(builtin_fan("p1xp1"), 100000);
  CHECK(l2.b == 2);
  CHECK(predicted_count(l2, 1e4) == doctest::Approx(l2.theta.value * 1e4 * std::log(1e4)));
}
