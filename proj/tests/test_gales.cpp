#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "../tests/support/oracles.hpp"
#include "galekit/errors.hpp"
#include "galekit/gales.hpp"

using namespace galekit;

namespace {
Word w(const char* s) { return Word::from_string(s); }
const ValuedProcess doubling = pattern_bettor(w("0")).as_process();
const ValuedProcess one = fair_martingale().as_process();
}  // namespace

TEST_CASE("check_averaging examples") {
  CHECK(check_averaging(one, 10).ok());
  CHECK(check_averaging(doubling, 10).ok());
  const ValuedProcess two_gale("one-as-2-gale", ProcessKind::s_gale, Rational(2),
                               [](const Word&) { return GaleValue(1); });
  const auto report = check_averaging(two_gale, 3);
  REQUIRE_FALSE(report.ok());
  CHECK(report.violations.front().word.empty());
  CHECK(report.violations.front().parent_side == GaleValue(4));
  CHECK(report.violations.front().children_sum == GaleValue(2));
}

TEST_CASE("check_averaging errors") {
  const ValuedProcess negative("neg", ProcessKind::martingale, 1, [](const Word& x) {
    return x.size() == 2 ? GaleValue(-1) : GaleValue(1);
  });
  CHECK_THROWS_AS(check_averaging(negative, 4), InvariantViolation);
  CHECK_THROWS_AS(check_averaging(one, 21), DomainError);
}

TEST_CASE("to_s_gale examples") {
  const auto same = to_s_gale(doubling, 1);
  Word x;
  for (int i = 0; i < 6; ++i) {
    CHECK(same(x) == doubling(x));
    x.push_back(i % 3 == 0);
  }
  CHECK(to_s_gale(one, 0)(w("101")) == GaleValue(Rational(1, 8)));
  CHECK(to_s_gale(doubling, Rational(1, 2))(w("000")) == GaleValue::power_term(1, Rational(3, 2)));
  CHECK(to_s_gale(doubling, Rational(1, 2)).kind() == ProcessKind::s_gale);
  CHECK(to_s_gale(catalog_mixture().as_process(), Rational(1, 2)).kind() == ProcessKind::s_supergale);
}

TEST_CASE("random table martingales average exactly; derived s-gales conserve mass") {
  std::mt19937_64 rng(42);
  for (int i = 0; i < 40; ++i) {
    const auto d = TableMartingale::random(rng, 8).as_process();
    CHECK(check_averaging(d, 10).ok());
    for (const Rational s : {Rational(1, 4), Rational(1, 2), Rational(3, 4)}) {
      const auto g = to_s_gale(d, s);
      const auto rep = check_averaging(g, 6);
      CHECK(rep.ok());
      CHECK(rep.max_log2_residual <= 1e-9);
      for (unsigned n : {0U, 3U, 6U}) CHECK(level_mass(g, n) == d(Word{}));
    }
  }
}

TEST_CASE("strategies match the direct capital formula") {
  for (const auto& m : default_catalog()) {
    Word x = SequenceSource::seeded_random(9).prefix(40);
    const auto along = m.along(x);
    const auto direct = oracle::capital([&](const Word& h) { return m.strategy().stake_on_one(h); }, x);
    CHECK(along.back() == direct);
    CHECK(m.value(x) == direct);
  }
}

TEST_CASE("standard orders") {
  CHECK(standard_order(0)(5) == GaleValue(32));
  CHECK(standard_order(Rational(1, 2))(4) == GaleValue(4));
  CHECK(standard_order(Rational(3, 4))(8) == GaleValue(4));
  CHECK_THROWS_AS(standard_order(1), DomainError);
  CHECK(spot_check_order(standard_order(Rational(1, 3)), 100));
  CHECK(spot_check_order(linear_order(), 100));
}

TEST_CASE("order_success examples") {
  const auto a = order_success(doubling, linear_order(), SequenceSource::zeros(), 10);
  CHECK(a.max_ratio == GaleValue(Rational(512, 5)));
  CHECK(a.verdict == HorizonVerdict::witnessed);
  const Order exp2("2^n", [](std::uint64_t n) { return GaleValue(pow2(static_cast<std::int64_t>(n))); });
  const auto b = order_success(one, exp2, SequenceSource::seeded_random(1), 20);
  CHECK(b.max_ratio <= GaleValue(Rational(1, 2)));
  CHECK(b.verdict == HorizonVerdict::not_witnessed_at_horizon);
  const auto mix = make_mixture({pattern_bettor(w("0"))}).as_process();
  const auto c = order_success(mix, standard_order(Rational(1, 2)), SequenceSource::zeros(), 100);
  CHECK(c.verdict == HorizonVerdict::witnessed);
  CHECK(c.last_witness == 100U);
  CHECK(OrderSuccessReport::kLabel == "finite-horizon approximation");
}

TEST_CASE("strong_success examples") {
  const auto a = strong_success(doubling, SequenceSource::zeros(), 20, 1000);
  CHECK(a.tail_min == GaleValue(1024));
  CHECK(a.consistent);
  CHECK_FALSE(strong_success(doubling, SequenceSource::periodic(w("01")), 20, 2).consistent);
  const auto c = strong_success(one, SequenceSource::seeded_random(4), 20, 2);
  CHECK(c.tail_min == GaleValue(1));
  CHECK_FALSE(c.consistent);
}

TEST_CASE("mixture examples") {
  CHECK(make_mixture({fair_martingale()}).value(Word{}) == Rational(1, 2));
  CHECK(make_mixture({fair_martingale(), pattern_bettor(w("0"))}).value(w("000")) == Rational(5, 2));
  const MixtureSupermartingale empty = make_mixture({});
  CHECK(empty.value(w("0101")) == 0);
  CHECK(check_averaging(empty.as_process(), 4).ok());
  struct Fair : BettingStrategy {
    Rational stake_on_one(const Word&) const override { return Rational(1, 2); }
    std::string name() const override { return "fair"; }
  };
  CHECK_THROWS_AS(make_mixture({Martingale(std::make_shared<Fair>(), 2)}), DomainError);
}

TEST_CASE("catalog mixture is a supermartingale to depth 12") {
  const auto m = catalog_mixture();
  CHECK(m.components().size() == 17);
  for (std::size_t k = 0; k < m.components().size(); ++k) CHECK(m.weight(k) == pow2(-static_cast<int>(k) - 1));
  CHECK(check_averaging(m.as_process(), 12).ok());
}

TEST_CASE("trace csv") {
  const auto r = order_success(doubling, linear_order(), SequenceSource::zeros(), 2);
  std::ostringstream os;
  write_gale_trace_csv(os, r);
  CHECK(os.str() == "n,value,h,ratio,value_float,ratio_float\n1,2/1,1/1,2/1,2,2\n2,4/1,2/1,2/1,4,2\n");
}
