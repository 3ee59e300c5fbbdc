#include "steinchi/test_function.hpp"

#include "support/oracles.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>

using namespace steinchi;
using R = Rational;
using Catch::Approx;

TEST_CASE("derivative examples", "[test_functions]") {
  const TestFunction<R> x = Polynomial<R>::monomial(1);
  CHECK(x.derivative(1) == TestFunction<R>(Polynomial<R>::constant(R(1))));

  const TestFunction<double> s = Sine{3.0};
  CHECK(s.derivative(2) == TestFunction<double>(Sine{3.0, -9.0}));

  const TestFunction<double> e = Exponential{0.5};
  CHECK(e.derivative(3) == TestFunction<double>(Exponential{0.5, 0.125}));

  const TestFunction<double> c = Cosine{2.0};
  CHECK(c.derivative(1) == TestFunction<double>(Sine{2.0, -2.0}));
  CHECK(c.derivative(4) == TestFunction<double>(Cosine{2.0, 16.0}));
}

TEST_CASE("evaluate examples", "[test_functions]") {
  const TestFunction<R> p = Polynomial<R>(std::vector<R>{R(1), R(2)});
  CHECK(p(R(3)) == 7);
  CHECK(TestFunction<double>(Cosine{1.0})(0.0) == 1.0);
  CHECK(TestFunction<double>(Exponential{0.5})(0.0) == 1.0);
}

TEST_CASE("exact evaluation of non-polynomial families is refused", "[test_functions]") {
  const TestFunction<R> s = Sine{1.0};
  try {
    (void)s(R(1));
    FAIL("expected ModeUnsupported");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::ModeUnsupported);
  }
}

TEST_CASE("non-finite parameters are rejected", "[test_functions]") {
  CHECK_THROWS_AS(TestFunction<double>(Exponential{INFINITY}), Error);
  CHECK_THROWS_AS(TestFunction<double>(Sine{NAN}), Error);
}

TEST_CASE("integrability examples", "[test_functions]") {
  const auto spec = WeightSpec<double>::make({1.0, 2.0}, {1.0, 1.0});
  CHECK(integrability_check(TestFunction<double>(Exponential{0.2}), spec).ok);

  const auto bad = integrability_check(TestFunction<double>(Exponential{0.25}), spec);
  CHECK_FALSE(bad.ok);
  CHECK(bad.index == 1u);  // zero-based: the second weight

  const TestFunction<double> poly = Polynomial<double>::monomial(7);
  CHECK(integrability_check(poly, spec).ok);
  CHECK(integrability_check(TestFunction<double>(Sine{100.0}), spec).ok);
}

TEST_CASE("exponential screens with mixed-sign weights", "[test_functions]") {
  const auto neg = WeightSpec<double>::make({-1.0, -3.0}, {2.0, 2.0});
  CHECK(integrability_check(TestFunction<double>(Exponential{10.0}), neg).ok);
  const auto mixed = WeightSpec<double>::make({-1.0, 3.0}, {2.0, 2.0});
  CHECK_FALSE(integrability_check(TestFunction<double>(Exponential{-0.6}), mixed).ok);
  CHECK(integrability_check(TestFunction<double>(Exponential{-0.4}), mixed).ok);
  CHECK(integrability_check(TestFunction<double>(Exponential{0.1}), mixed).ok);
  CHECK_FALSE(variance_check(TestFunction<double>(Exponential{0.1}), mixed).ok);
}

TEST_CASE("derivative composes additively", "[test_functions][property]") {
  oracle::SpecGenerator gen(5);
  std::vector<TestFunction<double>> floats{Exponential{0.3, 2.0}, Exponential{-1.1}, Sine{1.7, -0.5},
                                           Cosine{0.6, 3.0}};
  std::vector<TestFunction<R>> polys;
  for (int rep = 0; rep < 4; ++rep) {
    std::vector<R> c;
    for (int k = 0; k <= 6; ++k) c.push_back(gen.rational(20, 7));
    polys.emplace_back(Polynomial<R>(c));
  }
  std::vector<double> xs;
  for (int j = 0; j < 32; ++j) xs.push_back(-4.0 + 0.27 * j);

  for (std::size_t a = 0; a <= 8; ++a) {
    for (std::size_t b = 0; b <= 8; ++b) {
      for (const auto& f : polys) {
        CHECK(f.derivative(a).derivative(b) == f.derivative(a + b));
      }
      for (const auto& f : floats) {
        const auto lhs = f.derivative(a).derivative(b);
        const auto rhs = f.derivative(a + b);
        for (double x : xs) {
          const double u = lhs(x), v = rhs(x);
          CHECK(std::abs(u - v) <= 1e-12 * std::max(1.0, std::abs(v)));
        }
      }
    }
  }
}

TEST_CASE("polynomial derivatives past the degree vanish", "[test_functions][property]") {
  for (std::size_t d = 0; d <= 8; ++d) {
    const TestFunction<R> f = Polynomial<R>::monomial(d, R(3, 2));
    for (std::size_t k = d + 1; k <= d + 3; ++k) {
      const auto* p = f.derivative(k).polynomial();
      REQUIRE(p != nullptr);
      CHECK(p->is_zero());
    }
    CHECK_FALSE(f.derivative(d).polynomial()->is_zero());
  }
}

TEST_CASE("exponential integrability is monotone in |s|", "[test_functions][property]") {
  oracle::SpecGenerator gen(11);
  for (int trial = 0; trial < 50; ++trial) {
    const auto spec = gen.next(6, 5, 10).convert<double>();
    for (double sign : {1.0, -1.0}) {
      for (double s = 0.02; s < 1.5; s += 0.02) {
        if (!integrability_check(TestFunction<double>(Exponential{sign * s}), spec).ok) continue;
        for (double t = 0.0; t <= s; t += 0.01) {
          CHECK(integrability_check(TestFunction<double>(Exponential{sign * t}), spec).ok);
        }
      }
    }
  }
}
