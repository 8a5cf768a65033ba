#include <doctest.h>

#include <sstream>

#include "galekit/complexity.hpp"
#include "galekit/errors.hpp"
#include "galekit/reductions.hpp"

using namespace galekit;

namespace {
Word w(const char* s) { return Word::from_string(s); }
const Word x_bits = SequenceSource::seeded_random(1).prefix(64);
}  // namespace

TEST_CASE("expansionary examples") {
  for (std::uint64_t s = 1; s <= 10; ++s) {
    CHECK(expansionary(LevelOracle::always_true(), x_bits, s) == 1U);
    CHECK_FALSE(expansionary(LevelOracle::always_false(), x_bits, s).has_value());
    if (s >= 2) CHECK(expansionary(LevelOracle::only_level(2), x_bits, s) == 2U);
  }
  CHECK(stage_level(LevelOracle::always_true(), 3, x_bits, 7) == 7U);
  CHECK(stage_level(LevelOracle::always_false(), 3, x_bits, 7) == 0U);
}

TEST_CASE("oracles must be anti-monotone") {
  CHECK_THROWS_AS(LevelOracle("grows", [](std::uint64_t, std::uint64_t t, const Word&) { return t > 3; }),
                  InvariantViolation);
  CHECK_NOTHROW(LevelOracle("shrinks", [](std::uint64_t, std::uint64_t t, const Word&) { return t < 3; }));
}

TEST_CASE("oracle files") {
  std::istringstream in("# level 2 up to stage 5 on words starting 1\n2 5 1\n3 100 -\n");
  const auto o = LevelOracle::from_stream(in, "mem");
  CHECK(o.contains(2, 5, w("10")));
  CHECK_FALSE(o.contains(2, 6, w("10")));
  CHECK_FALSE(o.contains(2, 1, w("01")));
  CHECK(o.contains(3, 100, Word{}));
  CHECK_FALSE(o.contains(1, 1, w("1")));
  std::istringstream bad("2 x 1\n");
  CHECK_THROWS_AS(LevelOracle::from_stream(bad, "bad"), IoError);
  CHECK_THROWS_AS(LevelOracle::parse("/nonexistent/oracle"), IoError);
  CHECK(LevelOracle::parse("true").contains(9, 9, w("1")));
}

TEST_CASE("dim1, oracle false: every stage boundary has mixture(tau) <= |tau|") {
  const auto m = catalog_mixture();
  const auto r = wadge_dim1(LevelOracle::always_false(), SequenceSource::seeded_random(1), 5, m);
  REQUIRE(r.trace.size() == 5);
  const Word out = r.output.materialize(1 << 12);
  for (const auto& rec : r.trace) {
    CHECK(rec.first == SearchOutcome::not_needed);
    CHECK(rec.second == SearchOutcome::found);
    CHECK(rec.stage_length > rec.previous_length);
    const Word tau = out.prefix(rec.stage_length.get_ui());
    CHECK(m.value(tau) <= Rational(static_cast<unsigned long>(tau.size())));
    CHECK(*rec.second_value == m.value(tau));
  }
}

TEST_CASE("dim1, oracle level 2: found witnesses reach rate 1/2") {
  const auto m = catalog_mixture();
  const auto r = wadge_dim1(LevelOracle::only_level(2), SequenceSource::zeros(), 5, m);
  const Word out = r.output.materialize(1 << 12);
  int found = 0;
  for (const auto& rec : r.trace) {
    if (rec.s < 2) continue;
    REQUIRE(rec.k == 2U);
    if (rec.first != SearchOutcome::found) {
      CHECK(rec.first == SearchOutcome::witness_not_found);
      continue;
    }
    ++found;
    const Word sigma = out.prefix(rec.first_length.get_ui());
    Rational half_len(static_cast<unsigned long>(sigma.size()), 2);
    half_len.canonicalize();
    CHECK(compare_with_power_of_two(m.value(sigma), half_len) != std::strong_ordering::less);
  }
  CHECK(found >= 1);
}

TEST_CASE("dim1, oracle true: the 2^|sigma| threshold is out of reach") {
  // M(sigma) <= (1 - 2^-17) 2^|sigma| for the 17-component catalog.
  const auto m = catalog_mixture();
  const auto r = wadge_dim1(LevelOracle::always_true(), SequenceSource::zeros(), 3, m, 256);
  for (const auto& rec : r.trace) {
    CHECK(rec.k == 1U);
    CHECK(rec.first == SearchOutcome::witness_not_found);
    CHECK(rec.note.find("substage (a)") != std::string::npos);
  }
}

TEST_CASE("zero stages give empty output") {
  const auto a = wadge_dim1(LevelOracle::always_true(), SequenceSource::zeros(), 0, catalog_mixture());
  CHECK(a.trace.empty());
  CHECK(a.output.length() == 0);
  const auto b = wadge_dimstr(LevelOracle::always_true(), SequenceSource::zeros(), 0, 0, ComplexityModel::v1());
  CHECK(b.trace.empty());
  CHECK(b.output.length() == 0);
}

TEST_CASE("dimstr, alpha 0, oracle false: pads dominate") {
  const auto r = wadge_dimstr(LevelOracle::always_false(), SequenceSource::seeded_random(1), 3, 0,
                              ComplexityModel::v1());
  for (const auto& rec : r.trace) {
    CHECK(rec.stage_length - rec.previous_length ==
          rec.second_length * rec.second_length - rec.previous_length);
    CHECK(rec.pad_length == rec.second_length * rec.second_length - rec.second_length);
  }
  const auto r6 = wadge_dimstr(LevelOracle::always_false(), SequenceSource::seeded_random(1), 6, 0,
                               ComplexityModel::v1());
  const auto e6 = strong_dim_estimate(ComplexityModel::v1(), r6.output.source("Y"), 1 << 14);
  CHECK(e6.value <= Rational(1, 10));
}

TEST_CASE("dimstr, alpha 1/2, oracle true: found witnesses meet their thresholds") {
  const auto model = ComplexityModel::v1();
  const auto r = wadge_dimstr(LevelOracle::always_true(), SequenceSource::zeros(), 3, Rational(1, 2), model);
  const Word out = r.output.materialize(1 << 16);
  for (const auto& rec : r.trace) {
    if (rec.first == SearchOutcome::found) {
      const Word rho = out.prefix(rec.first_length.get_ui());
      CHECK(Rational(static_cast<unsigned long>(model.code_length(rho))) >=
            Rational(1, 2) * Rational(static_cast<unsigned long>(rho.size())));
    }
    if (rec.second == SearchOutcome::found) {
      const Word sigma = out.prefix(rec.second_length.get_ui());
      CHECK(Rational(static_cast<unsigned long>(model.code_length(sigma))) >=
            Rational(3, 2) * Rational(static_cast<unsigned long>(sigma.size())));
    } else {
      CHECK(rec.second == SearchOutcome::witness_not_found);
    }
  }
}

TEST_CASE("stage trace json lines") {
  const auto r = wadge_dimstr(LevelOracle::always_false(), SequenceSource::zeros(), 2, 0, ComplexityModel::v1());
  std::ostringstream os;
  write_stage_trace_jsonl(os, r.trace);
  std::istringstream is(os.str());
  std::string line;
  int lines = 0;
  while (std::getline(is, line)) {
    ++lines;
    CHECK(line.front() == '{');
    CHECK(line.find("\"pad_length\"") != std::string::npos);
  }
  CHECK(lines == 2);
}

TEST_CASE("staged word") {
  StagedWord y;
  y.append_bits(w("101"));
  y.append_zeros(Integer(1) << 70);
  y.append_bits(w("1"));
  CHECK(y.length() == (Integer(1) << 70) + 4);
  CHECK(y.materialize(6) == w("101000"));
  const auto src = y.source("big");
  CHECK_FALSE(src.length().has_value());
  CHECK(src.prefix(5) == w("10100"));
}

TEST_CASE("pi2 dense witness examples") {
  const auto ones = pi2_dense_witness(
      [](std::uint64_t m, std::uint64_t, const Word& x) { return x.count_ones() >= m; }, 5, 64);
  CHECK(ones.word == w("1111"));
  for (const auto& step : ones.steps) CHECK(step.word.count_ones() >= step.m);
  const auto vacuous = pi2_dense_witness([](std::uint64_t, std::uint64_t, const Word&) { return true; }, 5, 64);
  CHECK(vacuous.word.empty());
  try {
    pi2_dense_witness([](std::uint64_t m, std::uint64_t, const Word&) { return m != 0; }, 3, 64);
    FAIL("expected DensityViolated");
  } catch (const DensityViolated& e) {
    CHECK(e.level() == 0);
  }
}
