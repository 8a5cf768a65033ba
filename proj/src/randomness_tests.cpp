#include "galekit/randomness_tests.hpp"

#include <algorithm>

#include "galekit/errors.hpp"
#include "galekit/parallel.hpp"

namespace galekit {

std::string_view to_string(TestKind kind) { return kind == TestKind::schnorr ? "schnorr" : "martin-lof"; }

TestFamily::TestFamily(TestKind kind, unsigned depth_limit, LevelFn level)
    : kind_(kind), depth_limit_(depth_limit), level_(std::move(level)) {}

TestFamily TestFamily::from_levels(TestKind kind, std::vector<CylinderFamily> levels) {
  if (levels.empty()) throw DomainError("a test needs at least level 0");
  const auto depth = static_cast<unsigned>(levels.size() - 1);
  return TestFamily(kind, depth, [levels = std::move(levels)](unsigned i) { return levels.at(i); });
}

CylinderFamily TestFamily::level(unsigned i) const {
  if (i > depth_limit_) {
    throw DomainError("test level " + std::to_string(i) + " beyond depth limit " + std::to_string(depth_limit_));
  }
  CylinderFamily family = level_(i);
  const Rational measure = family.measure().to_rational();
  const Rational bound = pow2(-static_cast<std::int64_t>(i));
  const bool ok = kind_ == TestKind::schnorr ? measure == bound : measure <= bound;
  if (!ok) {
    throw InvariantViolation(std::string(to_string(kind_)) + " level " + std::to_string(i) + " has measure " +
                             format_rational(measure));
  }
  return family;
}

namespace {

// Appends a leftmost sub-family of [g] with measure exactly `amount`, where
// 0 < amount <= 2^-|g| is dyadic.
void fill_leftmost(const Word& g, Rational amount, std::vector<Word>& out) {
  Word current = g;
  for (;;) {
    const Rational whole = pow2(-static_cast<std::int64_t>(current.size()));
    if (amount == whole) {
      out.push_back(current);
      return;
    }
    const Rational half = whole / 2;
    Word left = current;
    left.push_back(0);
    if (amount <= half) {
      current = std::move(left);
    } else {
      out.push_back(std::move(left));
      amount -= half;
      current.push_back(1);
    }
  }
}

}  // namespace

CylinderFamily make_schnorr_level(unsigned i, std::vector<Word> seeds) {
  const CylinderFamily pool = CylinderFamily::from_words(std::move(seeds));
  const Rational target = pow2(-static_cast<std::int64_t>(i));
  if (pool.measure().to_rational() < target) {
    throw DomainError("make_schnorr_level: seed words cover " + format_rational(pool.measure().to_rational()) +
                      " < 2^-" + std::to_string(i));
  }
  std::vector<Word> chosen;
  Rational remaining = target;
  for (const Word& g : pool.generators()) {
    if (remaining == 0) break;
    const Rational mass = pow2(-static_cast<std::int64_t>(g.size()));
    if (mass <= remaining) {
      chosen.push_back(g);
      remaining -= mass;
    } else {
      fill_leftmost(g, remaining, chosen);
      remaining = 0;
    }
  }
  return CylinderFamily::from_words(std::move(chosen));
}

std::optional<unsigned> test_membership(const TestFamily& family, const SequenceSource& source,
                                        unsigned max_level) {
  if (max_level > family.depth_limit()) throw DomainError("test_membership: max_level beyond depth limit");
  for (unsigned i = max_level + 1; i-- > 0;) {
    if (member(family.level(i), source)) return i;
  }
  return std::nullopt;
}

CatalogVerdict catalog_random_verdict(const SequenceSource& source, std::uint64_t horizon, const Rational& budget,
                                      const std::vector<Martingale>& catalog, unsigned jobs) {
  if (horizon < 1) throw DomainError("rand-verdict: horizon must be >= 1");
  if (budget <= 0) throw DomainError("rand-verdict: budget must be positive");
  const Word path = source.prefix(horizon);
  CatalogVerdict verdict;
  verdict.horizon = horizon;
  verdict.budget = budget;
  verdict.per_martingale.resize(catalog.size());
  parallel_for(catalog.size(), jobs, [&](std::size_t k) {
    const auto values = catalog[k].along(path);
    MartingaleVerdict& v = verdict.per_martingale[k];
    v.name = catalog[k].name();
    v.max_value = values[1];
    v.argmax_n = 1;
    for (std::uint64_t n = 2; n <= horizon; ++n) {
      if (values[n] > v.max_value) {
        v.max_value = values[n];
        v.argmax_n = n;
      }
    }
    v.rejected = v.max_value >= budget;
  });
  verdict.catalog_consistent =
      std::none_of(verdict.per_martingale.begin(), verdict.per_martingale.end(),
                   [](const MartingaleVerdict& v) { return v.rejected; });
  return verdict;
}

std::vector<Word> minimal_words_reaching(const MixtureSupermartingale& mixture, const Rational& threshold,
                                         unsigned max_length) {
  if (max_length > 30) throw DomainError("minimal_words_reaching: max_length must be <= 30");
  const auto& components = mixture.components();
  std::vector<Word> found;
  Word w;
  auto total = [&](const std::vector<Rational>& values) {
    Rational sum = 0;
    for (std::size_t k = 0; k < values.size(); ++k) sum += mixture.weight(k) * values[k];
    return sum;
  };
  auto walk = [&](auto&& self, const std::vector<Rational>& values) -> void {
    const Rational m = total(values);
    if (m >= threshold) {
      found.push_back(w);
      return;
    }
    const unsigned left = max_length - static_cast<unsigned>(w.size());
    if (left == 0 || m * pow2(left) < threshold) return;
    for (Bit b : {Bit{0}, Bit{1}}) {
      std::vector<Rational> next(values.size());
      for (std::size_t k = 0; k < values.size(); ++k) next[k] = components[k].step(values[k], w, b);
      w.push_back(b);
      self(self, next);
      w.pop_back();
    }
  };
  std::vector<Rational> start;
  for (const auto& c : components) start.push_back(c.initial());
  walk(walk, start);
  return found;
}

TestFamily catalog_schnorr_test(const MixtureSupermartingale& mixture, unsigned word_depth, unsigned depth_limit) {
  if (depth_limit > word_depth) throw DomainError("catalog_schnorr_test: depth limit exceeds word depth");
  return TestFamily(TestKind::schnorr, depth_limit, [mixture, word_depth](unsigned i) {
    if (i == 0) return CylinderFamily::full_space();
    return make_schnorr_level(i, minimal_words_reaching(mixture, pow2(static_cast<std::int64_t>(i) - 1), word_depth));
  });
}

}  // namespace galekit
