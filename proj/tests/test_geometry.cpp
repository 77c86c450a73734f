#include <doctest.h>

#include <cmath>
#include <string>

#include "modeguide/geometry.hpp"

using namespace modeguide;

TEST_CASE("validation names the violated constraint") {
  StripConfig c;
  c.a = -1.0;
  try {
    c.validate();
    FAIL("expected GeometryError");
  } catch (const GeometryError& e) {
    CHECK(std::string(e.what()).find("a > 0") != std::string::npos);
  }
  c.a = 1.0;
  c.kind = Kind::TwoWindowEven;
  c.l = 0.5;
  CHECK_THROWS_AS(c.validate(), GeometryError);
  c.l = 1.0;
  CHECK_THROWS_AS(c.validate(), GeometryError);
  c.l = 1.5;
  CHECK_NOTHROW(c.validate());
  c.l.reset();
  CHECK_THROWS_AS(c.validate(), GeometryError);
  StripConfig w;
  w.d = 0.0;
  CHECK_THROWS_AS(w.validate(), GeometryError);
}

TEST_CASE("canonical scaling") {
  StripConfig c;
  c.d = 2.0 * kPi;
  c.a = 2.0;
  c.l = 12.0;
  c.kind = Kind::TwoWindowOdd;
  const CanonicalConfig cc = canonicalize(c);
  CHECK(cc.a() == 1.0);
  CHECK(cc.l() == 6.0);
  CHECK(cc.lambda_scale == 0.25);
  CHECK(cc.base.d == kPi);
  CHECK(cc.to_physical(0.8) == 0.2);
  CHECK(cc.to_canonical(cc.to_physical(0.7)) == doctest::Approx(0.7).epsilon(1e-15));
}

TEST_CASE("kind names round trip") {
  for (Kind k : {Kind::SingleWindowEven, Kind::SingleWindowOdd, Kind::TwoWindowEven, Kind::TwoWindowOdd})
    CHECK(kind_from_name(kind_name(k)) == k);
  CHECK_THROWS(kind_from_name("three_even"));
  CHECK(is_two_window(Kind::TwoWindowOdd));
  CHECK_FALSE(is_two_window(Kind::SingleWindowOdd));
  CHECK(is_odd(Kind::SingleWindowOdd));
}

TEST_CASE("rates from gap keep tiny gaps") {
  const SpectralPoint p = SpectralPoint::from_gap(1e-30);
  CHECK(outside_rate(1, p) == doctest::Approx(1e-15).epsilon(1e-12));
  CHECK(outside_rate(2, p) == doctest::Approx(std::sqrt(3.0)));
  CHECK(outside_rate(3, 0.5) == doctest::Approx(std::sqrt(8.5)));
  CHECK_THROWS_AS(outside_rate(1, 1.5), GeometryError);
  CHECK(window_rate_sq(1, SpectralPoint::from_lambda(0.75)) == doctest::Approx(-0.5));
  CHECK(window_rate_sq(2, 0.5) == doctest::Approx(1.75));
}

TEST_CASE("stable hyperbolic helpers match libm away from the series branch") {
  for (double t : {-2.0, -0.3, 0.4, 3.0})
    for (double x : {0.5, 1.0, 2.5}) {
      const double r = std::sqrt(std::abs(t));
      const double ch = t > 0 ? std::cosh(r * x) : std::cos(r * x);
      const double sc = t > 0 ? std::sinh(r * x) / r : std::sin(r * x) / r;
      CHECK(stable_cosh(t, x) == doctest::Approx(ch).epsilon(1e-14));
      CHECK(stable_sinhc(t, x) == doctest::Approx(sc).epsilon(1e-14));
    }
  // continuity across the series switch at |t x^2| = 1e-2
  const double x = 1.0;
  for (double t : {0.99e-2, 1.01e-2, -0.99e-2, -1.01e-2}) {
    const double r = std::sqrt(std::abs(t));
    const double ch = t > 0 ? std::cosh(r * x) : std::cos(r * x);
    const double sc = t > 0 ? std::sinh(r * x) / r : std::sin(r * x) / r;
    CHECK(stable_cosh(t, x) == doctest::Approx(ch).epsilon(1e-15));
    CHECK(stable_sinhc(t, x) == doctest::Approx(sc).epsilon(1e-15));
  }
  CHECK(stable_sinhc(0.0, 2.0) == 2.0);
  CHECK(stable_cosh(0.0, 2.0) == 1.0);
}

TEST_CASE("mode overlap against composite Simpson") {
  const int n = 20000;
  const double h = kPi / n;
  for (int j : {1, 2, 7}) {
    for (int m : {1, 3, 8}) {
      double s = 0;
      for (int i = 0; i <= n; ++i) {
        const double y = i * h;
        const double w = (i == 0 || i == n) ? 1 : (i % 2 ? 4 : 2);
        s += w * std::sin(j * y) * std::cos((m - 0.5) * y);
      }
      s *= h / 3 * 2 / kPi;
      CHECK(overlap(j, m) == doctest::Approx(s).epsilon(1e-10));
    }
  }
}
