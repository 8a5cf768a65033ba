#include <doctest.h>

#include <random>

#include "../tests/support/oracles.hpp"
#include "galekit/classify.hpp"
#include "galekit/errors.hpp"

using namespace galekit;

namespace {
Word w(const char* s) { return Word::from_string(s); }

HierarchyFormula has_one() {
  HierarchyFormula f;
  f.name = "exists a 1";
  f.quantifiers = {Quantifier::exists};
  f.kernel = [](const std::vector<std::uint64_t>&, const PrefixView& v) {
    return v.prefix().count_ones() > 0 ? Truth::yes : Truth::no;
  };
  return f;
}

HierarchyFormula ones_cofinal() {
  HierarchyFormula f;
  f.name = "ones cofinal";
  f.quantifiers = {Quantifier::forall, Quantifier::exists};
  f.kernel = [](const std::vector<std::uint64_t>& outer, const PrefixView& v) {
    return v.length >= outer[0] && v.source.bit(v.length - 1) == 1 ? Truth::yes : Truth::no;
  };
  return f;
}

const ApproxReal zero = ApproxReal::constant(0);
const ApproxReal half = ApproxReal::constant(Rational(1, 2));
const ApproxReal one = ApproxReal::constant(1);
}  // namespace

TEST_CASE("eval_bounded examples") {
  CHECK(eval_bounded(has_one(), SequenceSource::zeros(), {100}).verdict == BoundedVerdict::fails_at_bounds);
  const auto p = eval_bounded(has_one(), SequenceSource::periodic(w("01")), {100});
  CHECK(p.verdict == BoundedVerdict::holds_at_bounds);
  CHECK(p.decisive == std::vector<std::uint64_t>{2});
  CHECK(eval_bounded(ones_cofinal(), SequenceSource::periodic(w("01")), {10, 100}).verdict ==
        BoundedVerdict::holds_at_bounds);
  const auto z = eval_bounded(ones_cofinal(), SequenceSource::zeros(), {10, 100});
  CHECK(z.verdict == BoundedVerdict::fails_at_bounds);
  CHECK(z.decisive == std::vector<std::uint64_t>{1});
}

TEST_CASE("eval_bounded preconditions") {
  CHECK_THROWS_AS(eval_bounded(has_one(), SequenceSource::zeros(), {}), DomainError);
  CHECK_THROWS_AS(eval_bounded(has_one(), SequenceSource::zeros(), {0}), DomainError);
  CHECK_THROWS_AS(eval_bounded(has_one(), SequenceSource::zeros(), {3, 4}), DomainError);
  CHECK_THROWS_AS(eval_bounded(has_one(), SequenceSource::explicit_bits(w("01")), {3}), TruncationError);
}

TEST_CASE("Kleene timeouts") {
  HierarchyFormula f;
  f.quantifiers = {Quantifier::exists};
  f.kernel = [](const std::vector<std::uint64_t>&, const PrefixView& v) {
    return v.length == 2 ? Truth::timeout : v.length == 4 ? Truth::yes : Truth::no;
  };
  CHECK(eval_bounded(f, SequenceSource::zeros(), {3}).verdict == BoundedVerdict::kernel_timeout);
  CHECK(eval_bounded(f, SequenceSource::zeros(), {4}).verdict == BoundedVerdict::holds_at_bounds);
  CHECK(eval_bounded(f, SequenceSource::zeros(), {1}).verdict == BoundedVerdict::fails_at_bounds);
}

TEST_CASE("matches the brute-force quantifier tree on random formulas") {
  std::mt19937_64 rng(2024);
  const auto src = SequenceSource::seeded_random(5);
  for (int i = 0; i < 300; ++i) {
    const auto r = oracle::random_formula(rng, 6, i % 2 == 1);
    const Truth expected = oracle::tree_eval(r.formula.quantifiers, r.bounds, r.formula.kernel, src);
    const auto got = eval_bounded(r.formula, src, r.bounds);
    const BoundedVerdict want = expected == Truth::yes  ? BoundedVerdict::holds_at_bounds
                                : expected == Truth::no ? BoundedVerdict::fails_at_bounds
                                                        : BoundedVerdict::kernel_timeout;
    CHECK(got.verdict == want);
  }
}

TEST_CASE("enlarging an existential bound never flips holds to fails") {
  std::mt19937_64 rng(99);
  const auto src = SequenceSource::seeded_random(8);
  for (int i = 0; i < 200; ++i) {
    auto r = oracle::random_formula(rng, 6, false);
    r.formula.quantifiers.back() = Quantifier::exists;
    const auto before = eval_bounded(r.formula, src, r.bounds);
    if (r.formula.quantifiers.size() == 1 && before.verdict == BoundedVerdict::holds_at_bounds) {
      r.bounds.back() += 3;
      CHECK(eval_bounded(r.formula, src, r.bounds).verdict == BoundedVerdict::holds_at_bounds);
    }
  }
}

TEST_CASE("dim-le examples") {
  CHECK(eval_bounded(dim_le_formula(zero), SequenceSource::zeros(), kDimBounds).verdict ==
        BoundedVerdict::holds_at_bounds);
  CHECK(eval_bounded(dim_le_formula(zero), SequenceSource::seeded_random(7), kDimBounds).verdict ==
        BoundedVerdict::fails_at_bounds);
  for (const auto& src : {SequenceSource::zeros(), SequenceSource::seeded_random(7), SequenceSource::block_alternating(2)}) {
    CHECK(eval_bounded(dim_le_formula(one), src, kDimBounds).verdict == BoundedVerdict::holds_at_bounds);
  }
}

TEST_CASE("dim-ge examples") {
  for (const auto& src : {SequenceSource::zeros(), SequenceSource::seeded_random(7), SequenceSource::periodic(w("01"))}) {
    CHECK(eval_bounded(dim_ge_formula(zero), src, kDimBounds).verdict == BoundedVerdict::holds_at_bounds);
  }
  CHECK(eval_bounded(dim_ge_formula(one), SequenceSource::seeded_random(7), kDimBounds).verdict ==
        BoundedVerdict::holds_at_bounds);
  CHECK(eval_bounded(dim_ge_formula(one), SequenceSource::zeros(), kDimBounds).verdict ==
        BoundedVerdict::fails_at_bounds);
}

TEST_CASE("dimstr examples") {
  const auto [le0, ge0] = dimstr_formulas(zero);
  CHECK(le0.kind == KernelKind::enumerable_bounded);
  CHECK(ge0.kind == KernelKind::co_enumerable_bounded);
  CHECK(eval_bounded(le0, SequenceSource::zeros(), kDimstrBounds).verdict == BoundedVerdict::holds_at_bounds);
  const auto [leh, geh] = dimstr_formulas(half);
  CHECK(eval_bounded(geh, SequenceSource::zeros(), kDimstrBounds).verdict == BoundedVerdict::fails_at_bounds);
  const auto [le1, ge1] = dimstr_formulas(one);
  CHECK(eval_bounded(ge1, SequenceSource::seeded_random(7), kDimstrBounds).verdict ==
        BoundedVerdict::holds_at_bounds);
  for (const auto& src : {SequenceSource::zeros(), SequenceSource::seeded_random(7)}) {
    CHECK(eval_bounded(le1, src, kDimstrBounds).verdict == BoundedVerdict::holds_at_bounds);
  }
}

TEST_CASE("dimstr-le local search times out under a tiny step budget") {
  const auto [le, ge] = dimstr_formulas(one, nullptr, 100);
  CHECK(eval_bounded(le, SequenceSource::seeded_random(7), kDimstrBounds).verdict == BoundedVerdict::kernel_timeout);
}

TEST_CASE("complexity cache") {
  ComplexityCache cache;
  const auto src = SequenceSource::seeded_random(3);
  const Word x = src.prefix(300);
  const auto lens = ComplexityModel::v1().prefix_lengths(x);
  for (std::uint64_t n : {300U, 1U, 150U}) {
    CHECK(cache.code_length(src, n) == lens[n]);
    const auto p = cache.program(src, n);
    CHECK(p.length == lens[n]);
    CHECK(p.steps >= p.length + n);
  }
}

TEST_CASE("cdim catalog estimate examples") {
  const auto m = catalog_mixture();
  const auto grid = default_s_grid();
  CHECK(grid.front() == Rational(1, 20));
  CHECK(grid.back() == 1);
  CHECK(cdim_catalog_estimate(SequenceSource::zeros(), m, grid, 2000).value <= Rational(1, 20));
  CHECK(cdim_catalog_estimate(SequenceSource::periodic(w("01")), m, grid, 2000).value <= Rational(1, 20));
  CHECK(cdim_catalog_estimate(SequenceSource::seeded_random(7), m, grid, 2000).value == 1);
  CHECK_THROWS_AS(cdim_catalog_estimate(SequenceSource::zeros(), m, {Rational(1, 2), Rational(1, 4)}, 2000),
                  DomainError);
  CHECK_THROWS_AS(cdim_catalog_estimate(SequenceSource::zeros(), m, grid, 100), DomainError);
}

TEST_CASE("cdim witness agrees with order_success") {
  const auto m = catalog_mixture();
  const auto src = SequenceSource::periodic(w("001"));
  const auto e = cdim_catalog_estimate(src, m, default_s_grid(), 600);
  REQUIRE(e.value < 1);
  REQUIRE(e.witness_n.has_value());
  const auto r = order_success(m.as_process(), standard_order(e.value), src, 600);
  CHECK(r.trace[*e.witness_n - 1].ratio >= GaleValue(1));
  const Rational below = e.value - Rational(1, 20);
  if (below > 0) {
    const auto r2 = order_success(m.as_process(), standard_order(below), src, 600);
    for (std::uint64_t n = kCdimBurnIn; n <= 600; ++n) CHECK(r2.trace[n - 1].ratio < GaleValue(1));
  }
}
