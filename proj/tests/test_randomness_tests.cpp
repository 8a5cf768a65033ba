#include <doctest.h>

#include "galekit/errors.hpp"
#include "galekit/randomness_tests.hpp"

using namespace galekit;

namespace {
Word w(const char* s) { return Word::from_string(s); }
std::vector<Word> words(std::initializer_list<const char*> xs) {
  std::vector<Word> out;
  for (auto x : xs) out.push_back(w(x));
  return out;
}
TestFamily nested_zeros() {
  return TestFamily(TestKind::schnorr, 20, [](unsigned i) { return CylinderFamily::from_words({Word::repeat(0, i)}); });
}
}  // namespace

TEST_CASE("make_schnorr_level examples") {
  const auto a = make_schnorr_level(3, words({"000"}));
  CHECK(a.generators() == words({"000"}));
  CHECK(a.measure().to_rational() == Rational(1, 8));
  const auto b = make_schnorr_level(2, words({"0"}));
  CHECK(b.generators() == words({"00"}));
  CHECK(b.measure().to_rational() == Rational(1, 4));
  const auto c = make_schnorr_level(1, words({"00", "01"}));
  CHECK(c.generators() == words({"00", "01"}));
  CHECK(c.measure().to_rational() == Rational(1, 2));
  CHECK_THROWS_AS(make_schnorr_level(1, words({"000", "111"})), DomainError);
}

TEST_CASE("schnorr levels are exact up to 20") {
  for (unsigned i = 0; i <= 20; ++i) {
    CHECK(make_schnorr_level(i, words({"0", "1"})).measure().to_rational() == pow2(-static_cast<int>(i)));
  }
}

TEST_CASE("test_membership examples") {
  CHECK(test_membership(nested_zeros(), SequenceSource::zeros(), 10) == 10U);
  const TestFamily above_zero(TestKind::schnorr, 20, [](unsigned i) {
    return i == 0 ? CylinderFamily::from_words({Word{}}) : CylinderFamily::from_words({Word::repeat(0, i)});
  });
  CHECK(test_membership(above_zero, SequenceSource::ones(), 10) == 0U);
  CHECK(test_membership(above_zero, SequenceSource::explicit_bits(w("0001")), 10) == 3U);
  CHECK(test_membership(nested_zeros(), SequenceSource::ones(), 0) == 0U);
  // monotone in max_level
  const auto src = SequenceSource::explicit_bits(w("0001"));
  std::optional<unsigned> prev;
  for (unsigned m = 0; m <= 8; ++m) {
    const auto d = test_membership(nested_zeros(), src, m);
    if (prev) CHECK((d && *d >= *prev));
    prev = d;
  }
}

TEST_CASE("test family laws are enforced") {
  const TestFamily bad(TestKind::schnorr, 5, [](unsigned) { return CylinderFamily::from_words({w("0")}); });
  CHECK_NOTHROW(bad.level(1));
  CHECK_THROWS_AS(bad.level(2), InvariantViolation);
  const TestFamily ml(TestKind::martin_lof, 5, [](unsigned i) { return CylinderFamily::from_words({Word::repeat(1, i + 2)}); });
  CHECK_NOTHROW(ml.level(3));
  CHECK_THROWS_AS(ml.level(6), DomainError);
  CHECK(to_string(TestKind::martin_lof) == "martin-lof");
}

TEST_CASE("catalog verdict examples") {
  const auto z = catalog_random_verdict(SequenceSource::zeros(), 64, pow2(10));
  CHECK_FALSE(z.catalog_consistent);
  CHECK(z.per_martingale.front().name == "pattern:0");
  CHECK(z.per_martingale.front().rejected);
  const auto r = catalog_random_verdict(SequenceSource::seeded_random(7), 4096, pow2(20));
  CHECK(r.catalog_consistent);
  const auto p = catalog_random_verdict(SequenceSource::periodic(w("01")), 4096, pow2(10));
  CHECK_FALSE(p.catalog_consistent);
  bool by_01 = false;
  for (const auto& m : p.per_martingale) by_01 = by_01 || (m.name == "pattern:01" && m.rejected);
  CHECK(by_01);
}

TEST_CASE("catalog verdict does not depend on jobs") {
  const auto src = SequenceSource::block_alternating(3);
  const auto a = catalog_random_verdict(src, 1500, pow2(12), default_catalog(), 1);
  const auto b = catalog_random_verdict(src, 1500, pow2(12), default_catalog(), 4);
  REQUIRE(a.per_martingale.size() == b.per_martingale.size());
  for (std::size_t i = 0; i < a.per_martingale.size(); ++i) {
    CHECK(a.per_martingale[i].max_value == b.per_martingale[i].max_value);
    CHECK(a.per_martingale[i].argmax_n == b.per_martingale[i].argmax_n);
  }
}

TEST_CASE("catalog Schnorr test") {
  const auto mixture = catalog_mixture();
  const auto t = catalog_schnorr_test(mixture, 20, 20);
  for (unsigned i : {0U, 1U, 5U, 10U, 20U}) CHECK(t.level(i).measure().to_rational() == pow2(-static_cast<int>(i)));
  CHECK(test_membership(t, SequenceSource::zeros(), 20) == 20U);
  // A source no catalog martingale pushes to 2^(i-1) sits outside level i.
  const auto r = SequenceSource::seeded_random(7);
  const auto v = catalog_random_verdict(r, 20, pow2(10));
  CHECK(v.catalog_consistent);
  const auto deepest = test_membership(t, r, 20);
  CHECK((!deepest || *deepest <= 10));
}

TEST_CASE("minimal words reaching") {
  const auto ws = minimal_words_reaching(catalog_mixture(), pow2(4), 10);
  CHECK_FALSE(ws.empty());
  for (std::size_t i = 0; i < ws.size(); ++i) {
    CHECK(catalog_mixture().value(ws[i]) >= pow2(4));
    for (std::size_t j = 0; j < ws.size(); ++j) {
      if (i != j) CHECK_FALSE(ws[i].is_prefix_of(ws[j]));
    }
  }
}
