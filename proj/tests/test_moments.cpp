#include "steinchi/moments.hpp"

#include "support/oracles.hpp"

#include <catch_amalgamated.hpp>

#include <thread>

using namespace steinchi;
using R = Rational;
using P = Polynomial<R>;

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

TEST_CASE("chisq_raw_moments examples", "[moments]") {
  CHECK(chisq_raw_moments(R(2), 3) == ints({1, 2, 8, 48}));
  CHECK(chisq_raw_moments(R(7, 2), 1) == std::vector<R>{R(1), R(7, 2)});
  CHECK(chisq_raw_moments(R(3), 2) == ints({1, 3, 15}));
  CHECK(chisq_raw_moments(R(3), 0) == ints({1}));
  try {
    chisq_raw_moments(R(3), -1);
    FAIL("expected BadOrder");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::BadOrder);
  }
}

TEST_CASE("cumulants examples", "[moments]") {
  CHECK(cumulants(spec_of({1, 2}, {1, 1}), 3) == ints({3, 10, 72}));
  CHECK(cumulants(spec_of({1, -1}, {1, 1}), 3) == ints({0, 4, 0}));
  CHECK(cumulants(WeightSpec<R>::make({R(1)}, {R(5, 3)}), 2) == std::vector<R>{R(5, 3), R(10, 3)});
}

TEST_CASE("central_moments examples", "[moments]") {
  CHECK(central_moments(spec_of({1, 2}, {1, 1}), 3) == ints({1, 0, 10, 72}));
  const auto sym = central_moments(spec_of({1, -1}, {1, 1}), 9);
  for (std::size_t j = 1; j < sym.size(); j += 2) CHECK(sym[j] == 0);
  CHECK(sym[4] == 144);
  CHECK(central_moments(spec_of({3, -2, 7}, {2, 5, 1}), 1)[1] == 0);
}

TEST_CASE("expect_polynomial examples", "[moments]") {
  CHECK(expect_polynomial(spec_of({1, 2}, {1, 1}), P::monomial(2), Centering::centered) == 10);
  for (auto c : {Centering::centered, Centering::noncentered}) {
    CHECK(expect_polynomial(spec_of({3, -1}, {2, 4}), P::constant(R(-7, 2)), c) == R(-7, 2));
  }
  CHECK(expect_polynomial(spec_of({5}, {2}), P::monomial(1), Centering::noncentered) == 10);
  CHECK(expect_polynomial(spec_of({5}, {2}), P(), Centering::noncentered) == 0);
}

TEST_CASE("expect_operator examples", "[moments]") {
  CHECK(expect_operator(spec_of({1, 2}, {1, 1}), P::monomial(1), Centering::centered) == 0);
  CHECK(expect_operator(spec_of({1, 2, 3}, {1, 1, 1}), P::monomial(3), Centering::centered) == 0);
  CHECK(expect_operator(spec_of({1, -1}, {1, 1}), P::monomial(1), Centering::noncentered) == 0);
}

TEST_CASE("a corrupted table breaks the zero expectation", "[moments]") {
  auto table = assemble_table(spec_of({1, 2}, {1, 1}));
  table.mu_seq[1] += 1;
  CHECK(operator_expectation(table, P::monomial(1), Centering::centered) == -2);
}

TEST_CASE("verify_ibp examples", "[moments]") {
  CHECK(verify_ibp(R(2), P::monomial(2)) == 0);
  CHECK(verify_ibp(R(9, 4), P::constant(R(1))) == 0);
  CHECK(verify_ibp(R(3), P::monomial(1)) == 0);
  // Hand arithmetic for p = 2, f = x^2: E[(Q-2)Q^2] = 48 - 16 = 32 = E[4 Q^2].
  const auto raw = chisq_raw_moments(R(2), 3);
  CHECK(raw[3] - 2 * raw[2] == 4 * raw[2]);
}

TEST_CASE("moment tables are shift consistent", "[moments]") {
  oracle::SpecGenerator gen(3);
  for (int trial = 0; trial < 20; ++trial) {
    const auto t = moment_table(gen.next(5, 5, 10), 8);
    CHECK(t.cumulants.front() == build_table(t.spec).mu);
    CHECK(t.central_moments[0] == 1);
    CHECK(t.central_moments[1] == 0);
    CHECK(shift_consistent(t));
  }
  auto t = moment_table(spec_of({1, 2}, {1, 1}), 4);
  t.raw_moments[3] += 1;
  CHECK_FALSE(shift_consistent(t));
}

TEST_CASE("Theorem battery: zero expectation for every monomial", "[moments][property]") {
  oracle::SpecGenerator gen(1);
  for (int trial = 0; trial < 40; ++trial) {
    const auto spec = gen.next(6, 5, 10);
    for (std::size_t d = 0; d <= 8; ++d) {
      CHECK(operator_expectation(spec, P::monomial(d), Centering::centered) == 0);
      CHECK(operator_expectation(spec, P::monomial(d), Centering::noncentered) == 0);
    }
  }
}

TEST_CASE("integration by parts holds for p in 1..20", "[moments][property]") {
  for (long p = 1; p <= 20; ++p) {
    for (std::size_t d = 0; d <= 8; ++d) CHECK(ibp_residual(R(p), P::monomial(d)) == 0);
  }
  // Non-integer dofs (gamma shape p/2) satisfy the same identity.
  CHECK(ibp_residual(R(7, 3), P::monomial(5)) == 0);
}

TEST_CASE("cumulants are additive over independent blocks", "[moments][property]") {
  oracle::SpecGenerator gen(17);
  for (int trial = 0; trial < 30; ++trial) {
    // Disjoint weight ranges so the union has no repeats.
    const auto a = gen.next(3, 4, 10);
    std::vector<R> w(a.weights().begin(), a.weights().end()), m(a.dofs().begin(), a.dofs().end());
    std::vector<R> wb, mb;
    for (int i = 0; i < 1 + trial % 3; ++i) {
      wb.emplace_back(10 + i + trial);
      mb.emplace_back(1 + (trial + i) % 7);
    }
    const auto b = WeightSpec<R>::make(wb, mb);
    w.insert(w.end(), wb.begin(), wb.end());
    m.insert(m.end(), mb.begin(), mb.end());
    const auto both = WeightSpec<R>::make(w, m);
    const auto ka = cumulants(a, 7), kb = cumulants(b, 7), kab = cumulants(both, 7);
    for (std::size_t j = 0; j < 7; ++j) CHECK(kab[j] == ka[j] + kb[j]);
  }
}

TEST_CASE("scaling weights by c scales kappa_j by c^j", "[moments][property]") {
  oracle::SpecGenerator gen(23);
  for (int trial = 0; trial < 30; ++trial) {
    const auto spec = gen.next(6, 5, 10);
    R c = gen.rational(5, 4);
    if (c.is_zero()) c = R(-3, 2);
    const auto k = cumulants(spec, 8), ks = cumulants(spec.scaled(c), 8);
    R cj = 1;
    for (std::size_t j = 0; j < 8; ++j) {
      cj *= c;
      CHECK(ks[j] == cj * k[j]);
    }
  }
}

TEST_CASE("cumulant recursion agrees with multinomial expansion", "[moments][property]") {
  oracle::SpecGenerator gen(29);
  for (int trial = 0; trial < 20; ++trial) {
    const auto spec = gen.next(3, 5, 10);
    CHECK(central_moments(spec, 6) == central_moments_by_expansion(spec, 6));
  }
}

TEST_CASE("moment cache serves concurrent readers", "[moments]") {
  MomentCache cache;
  const auto spec = spec_of({1, 2, -3}, {1, 2, 3});
  const auto reference = moment_table(spec, 10);
  std::vector<std::jthread> readers;
  std::atomic<int> mismatches{0};
  for (int t = 0; t < 8; ++t) {
    readers.emplace_back([&, t] {
      for (int rep = 0; rep < 50; ++rep) {
        const auto table = cache.get(spec, 4 + (t + rep) % 7);
        const long n = table->order();
        for (long j = 0; j <= std::min(n, 10L); ++j) {
          if (table->raw_moments[j] != reference.raw_moments[j]) ++mismatches;
        }
      }
    });
  }
  readers.clear();
  CHECK(mismatches == 0);
  CHECK(cache.size() == 1);
  CHECK(cache.get(spec, 3)->order() >= 3);
}
