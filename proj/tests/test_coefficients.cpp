#include "steinchi/coefficients.hpp"

#include "support/oracles.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>

using namespace steinchi;
using R = Rational;

namespace {

std::vector<R> ints(std::initializer_list<long> v) {
  std::vector<R> out;
  for (long x : v) out.emplace_back(x);
  return out;
}

WeightSpec<R> spec_of(std::initializer_list<long> w, std::initializer_list<long> m) {
  return WeightSpec<R>::make(ints(w), ints(m));
}

}  // namespace

TEST_CASE("elementary_symmetric examples", "[coefficients]") {
  const auto w = ints({1, 2, 3});
  CHECK(elementary_symmetric<R>(w) == ints({1, 6, 11, 6}));
  CHECK(elementary_symmetric<R>(ints({5})) == ints({1, 5}));
  CHECK(elementary_symmetric<R>(ints({1, -1})) == ints({1, 0, -1}));
}

TEST_CASE("elementary_symmetric rejects bad input", "[coefficients]") {
  CHECK_THROWS_MATCHES(elementary_symmetric<R>({}), Error,
                       Catch::Matchers::Predicate<Error>([](const Error& e) { return e.code() == Errc::EmptySpec; }));
  try {
    elementary_symmetric<R>(ints({1, 0, 2}));
    FAIL("expected InvalidWeight");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::InvalidWeight);
    CHECK(e.index() == 1u);
  }
}

TEST_CASE("leave_one_out examples", "[coefficients]") {
  const auto w = ints({1, 2, 3});
  const auto loo = leave_one_out<R>(w, 0);
  CHECK(loo == ints({1, 5, 6, 0}));
  // Lambda_2 - lambda_1 Lambda_{1,1} = 11 - 5 = Lambda_{2,1}
  const auto full = elementary_symmetric<R>(w);
  CHECK(full[2] - w[0] * loo[1] == loo[2]);
  CHECK(leave_one_out<R>(ints({5}), 0) == ints({1, 0}));

  try {
    leave_one_out<R>(w, 3);
    FAIL("expected BadIndex");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::BadIndex);
  }
}

TEST_CASE("mu_sequence examples", "[coefficients]") {
  auto a = mu_sequence(spec_of({1, 2, 3}, {1, 1, 1}));
  CHECK(a.mu == 6);
  CHECK(a.seq == ints({0, 14, 48, 36}));

  auto b = mu_sequence(spec_of({1, 2}, {1, 1}));
  CHECK(b.mu == 3);
  CHECK(b.seq == ints({0, 5, 6}));

  auto c = mu_sequence(spec_of({1, -1}, {1, 1}));
  CHECK(c.mu == 0);
  CHECK(c.seq == ints({0, 2, 0}));
}

TEST_CASE("build_table examples", "[coefficients]") {
  const auto b = build_table(spec_of({1, 2}, {1, 1}));
  CHECK(b.lambda_full == ints({1, 3, 2}));
  CHECK(b.mu_seq == ints({0, 5, 6}));
  CHECK(b.mu == 3);

  const auto single = build_table(spec_of({5}, {2}));
  CHECK(single.lambda_full == ints({1, 5}));
  CHECK(single.mu_seq == ints({0, 50}));
  CHECK(single.mu == 10);
}

TEST_CASE("non-integer rational weights and dofs", "[coefficients]") {
  const auto spec = WeightSpec<R>::make({R(1, 2), R(-3, 4)}, {R(1, 3), R(5, 2)});
  const auto t = build_table(spec);
  for (const auto& c : check_identities(t)) CHECK(c.passed);
  CHECK(t.mu == R(1, 6) - R(15, 8));
}

TEST_CASE("repeated weights merge by summing dofs", "[coefficients]") {
  const auto spec = WeightSpec<R>::make(ints({2, 1, 2, 2}), ints({1, 3, 4, 1}));
  REQUIRE(spec.size() == 2);
  CHECK(oracle::to_vec(spec.weights()) == ints({2, 1}));
  CHECK(oracle::to_vec(spec.dofs()) == ints({6, 3}));
  CHECK(spec.merged());
  CHECK(spec.sources()[0] == std::vector<std::size_t>{0, 2, 3});
  CHECK(spec.sources()[1] == std::vector<std::size_t>{1});
}

TEST_CASE("weight spec validation", "[coefficients]") {
  auto code_of = [](auto&& fn) {
    try {
      fn();
    } catch (const Error& e) {
      return e.code();
    }
    return Errc::ParseError;
  };
  CHECK(code_of([] { WeightSpec<R>::make({}, {}); }) == Errc::EmptySpec);
  CHECK(code_of([] { WeightSpec<R>::make(ints({1, 0}), ints({1, 1})); }) == Errc::InvalidWeight);
  CHECK(code_of([] { WeightSpec<R>::make(ints({1}), ints({0})); }) == Errc::InvalidDof);
  CHECK(code_of([] { WeightSpec<R>::make(ints({1, 2}), ints({1})); }) == Errc::InvalidSpec);
  CHECK(code_of([] { WeightSpec<double>::make({NAN}, {1.0}); }) == Errc::InvalidWeight);
}

TEST_CASE("corrupted tables fail the identity checks", "[coefficients]") {
  auto t = assemble_table(spec_of({1, 2, 3}, {1, 2, 3}));
  t.lambda_loo[0][1] += 1;
  std::vector<std::string> failed;
  for (const auto& c : check_identities(t)) {
    if (!c.passed) failed.push_back(c.name);
  }
  CHECK(failed == std::vector<std::string>{"deletion_recurrence", "weighted_loo_sum", "plain_loo_sum"});

  auto u = assemble_table(spec_of({1, 2}, {1, 1}));
  u.mu_seq[2] += 1;
  failed.clear();
  for (const auto& c : check_identities(u)) {
    if (!c.passed) failed.push_back(c.name);
  }
  CHECK(failed == std::vector<std::string>{"mu_r_equals_lambda_r_mu"});
}

TEST_CASE("random specs satisfy every table identity exactly", "[coefficients][property]") {
  oracle::SpecGenerator gen(0xC0FFEE);
  for (int trial = 0; trial < 200; ++trial) {
    const auto spec = gen.next(8, 9, 10);
    INFO("trial " << trial << ", r = " << spec.size());
    const auto t = build_table(spec);  // asserts internally
    for (const auto& c : check_identities(t)) CHECK(c.passed);
    const auto w = oracle::to_vec(spec.weights());
    CHECK(t.mu_seq == oracle::definition_mu(w, oracle::to_vec(spec.dofs())));
  }
}

TEST_CASE("elementary_symmetric matches subset enumeration for r <= 12", "[coefficients][property]") {
  oracle::SpecGenerator gen(7);
  for (std::size_t r = 1; r <= 12; ++r) {
    for (int rep = 0; rep < 3; ++rep) {
      std::vector<R> w;
      while (w.size() < r) {
        R x = gen.rational(9, 4);
        if (!x.is_zero()) w.push_back(x);
      }
      CHECK(elementary_symmetric<R>(w) == oracle::subset_symmetric(w));
      for (std::size_t i = 0; i < r; ++i) {
        auto without = w;
        without.erase(without.begin() + static_cast<std::ptrdiff_t>(i));
        auto expected = r > 1 ? elementary_symmetric<R>(without) : ints({1});
        expected.push_back(0);
        CHECK(leave_one_out<R>(w, i) == expected);
      }
    }
  }
}

TEST_CASE("float mode agrees with exact mode to 1e-12", "[coefficients][property]") {
  oracle::SpecGenerator gen(99);
  auto rel = [](double approx, const R& exact) {
    const double e = exact.convert_to<double>();
    return e == 0.0 ? std::abs(approx) : std::abs(approx - e) / std::abs(e);
  };
  for (int trial = 0; trial < 200; ++trial) {
    const auto exact_spec = gen.next(8, 9, 10);
    const auto ex = build_table(exact_spec);
    const auto fl = build_table(exact_spec.convert<double>());
    for (std::size_t k = 0; k <= ex.order(); ++k) {
      CHECK(rel(fl.lambda_full[k], ex.lambda_full[k]) <= 1e-12);
      CHECK(rel(fl.mu_seq[k], ex.mu_seq[k]) <= 1e-12);
      for (std::size_t i = 0; i < ex.order(); ++i) {
        CHECK(rel(fl.lambda_loo[i][k], ex.lambda_loo[i][k]) <= 1e-12);
      }
    }
    CHECK(rel(fl.mu, ex.mu) <= 1e-12);
  }
}
