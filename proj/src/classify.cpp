#include "galekit/classify.hpp"

#include <mutex>
#include <unordered_map>

#include "galekit/errors.hpp"

namespace galekit {

ApproxReal ApproxReal::constant(const Rational& value) {
  return ApproxReal(format_rational(value), [value](std::uint64_t) { return value; });
}

std::string_view to_string(KernelKind kind) {
  switch (kind) {
    case KernelKind::decidable:
      return "decidable";
    case KernelKind::enumerable_bounded:
      return "enumerable-bounded";
    case KernelKind::co_enumerable_bounded:
      return "co-enumerable-bounded";
  }
  return "?";
}

std::string_view to_string(BoundedVerdict verdict) {
  switch (verdict) {
    case BoundedVerdict::holds_at_bounds:
      return "holds-at-bounds";
    case BoundedVerdict::fails_at_bounds:
      return "fails-at-bounds";
    case BoundedVerdict::kernel_timeout:
      return "kernel-timeout";
  }
  return "?";
}

namespace {

struct Evaluator {
  const HierarchyFormula& formula;
  const SequenceSource& source;
  const std::vector<std::uint64_t>& bounds;
  std::vector<std::uint64_t> outer;
  std::uint64_t calls = 0;

  // Value of the subformula starting at `depth`, plus the decisive path
  // below it.
  Truth eval(std::size_t depth, std::vector<std::uint64_t>& path) {
    const bool universal = formula.quantifiers[depth] == Quantifier::forall;
    const Truth decisive = universal ? Truth::no : Truth::yes;
    const Truth neutral = universal ? Truth::yes : Truth::no;
    const bool innermost = depth + 1 == formula.quantifiers.size();
    bool saw_timeout = false;
    for (std::uint64_t v = 1; v <= bounds[depth]; ++v) {
      std::vector<std::uint64_t> below;
      Truth t;
      if (innermost) {
        ++calls;
        t = formula.kernel(outer, PrefixView{source, v});
      } else {
        outer.push_back(v);
        t = eval(depth + 1, below);
        outer.pop_back();
      }
      if (t == decisive) {
        path.push_back(v);
        path.insert(path.end(), below.begin(), below.end());
        return decisive;
      }
      if (t == Truth::timeout) saw_timeout = true;
    }
    return saw_timeout ? Truth::timeout : neutral;
  }
};

}  // namespace

BoundedEvaluation eval_bounded(const HierarchyFormula& formula, const SequenceSource& source,
                               const std::vector<std::uint64_t>& bounds) {
  if (formula.quantifiers.empty()) throw DomainError("a formula needs at least one quantifier");
  if (bounds.size() != formula.quantifiers.size()) {
    throw DomainError("formula '" + formula.name + "' has " + std::to_string(formula.quantifiers.size()) +
                      " quantifiers but " + std::to_string(bounds.size()) + " bounds were given");
  }
  for (const auto b : bounds) {
    if (b < 1) throw DomainError("every bound must be >= 1");
  }
  if (const auto len = source.length(); len && *len < bounds.back()) {
    throw TruncationError("source has " + std::to_string(*len) + " bits; the innermost bound needs " +
                          std::to_string(bounds.back()));
  }
  Evaluator ev{formula, source, bounds, {}, 0};
  BoundedEvaluation result;
  const Truth t = ev.eval(0, result.decisive);
  result.kernel_calls = ev.calls;
  result.verdict = t == Truth::yes  ? BoundedVerdict::holds_at_bounds
                   : t == Truth::no ? BoundedVerdict::fails_at_bounds
                                    : BoundedVerdict::kernel_timeout;
  return result;
}

// ---- complexity cache ---------------------------------------------------------

struct ComplexityCache::State {
  struct Entry {
    SequenceSource source;
    ComplexityProfile profile;
    std::unordered_map<std::uint64_t, Program> programs;
  };
  std::mutex mutex;
  std::unordered_map<std::uint64_t, std::unique_ptr<Entry>> entries;

  Entry& grown(const SequenceSource& source, std::uint64_t n) {
    auto& slot = entries[source.id()];
    if (!slot) slot = std::make_unique<Entry>(Entry{source, ComplexityProfile(), {}});
    auto& profile = slot->profile;
    if (profile.size() < n) {
      const Word bits = source.prefix(n);
      for (std::size_t i = profile.size(); i < n; ++i) profile.push(bits[i]);
    }
    return *slot;
  }
};

ComplexityCache::ComplexityCache() : state_(std::make_unique<State>()) {}
ComplexityCache::~ComplexityCache() = default;

std::uint64_t ComplexityCache::code_length(const SequenceSource& source, std::uint64_t n) {
  std::lock_guard lock(state_->mutex);
  return state_->grown(source, n).profile.code_length(n);
}

ComplexityCache::Program ComplexityCache::program(const SequenceSource& source, std::uint64_t n) {
  std::lock_guard lock(state_->mutex);
  auto& entry = state_->grown(source, n);
  if (const auto it = entry.programs.find(n); it != entry.programs.end()) return it->second;
  const Word code = encode_prefix(entry.profile, n);
  const DecodeResult decoded = ComplexityModel::v1().decode(code);
  if (decoded.status != DecodeStatus::complete || decoded.consumed != code.size() ||
      decoded.output != source.prefix(n)) {
    throw InvariantViolation("shortest program for a prefix of length " + std::to_string(n) +
                             " does not decode back to it");
  }
  const Program p{code.size(), decoded.steps()};
  entry.programs.emplace(n, p);
  return p;
}

// ---- dimension formulas -------------------------------------------------------

namespace {

Rational rat(std::uint64_t v) { return Rational(static_cast<unsigned long>(v)); }

std::shared_ptr<ComplexityCache> or_new(std::shared_ptr<ComplexityCache> cache) {
  return cache ? std::move(cache) : std::make_shared<ComplexityCache>();
}

Truth truth(bool b) { return b ? Truth::yes : Truth::no; }

}  // namespace

HierarchyFormula dim_le_formula(const ApproxReal& alpha, std::shared_ptr<ComplexityCache> cache) {
  cache = or_new(std::move(cache));
  HierarchyFormula f;
  f.name = "dim-le(" + alpha.label() + ")";
  f.quantifiers = {Quantifier::forall, Quantifier::forall, Quantifier::exists};
  f.kind = KernelKind::decidable;
  f.kernel = [alpha, cache](const std::vector<std::uint64_t>& outer, const PrefixView& view) {
    const std::uint64_t k = outer[0];
    const std::uint64_t big_n = outer[1];
    const std::uint64_t n = view.length;
    if (n < big_n) return Truth::no;
    const Rational bound = (alpha(n) + Rational(1, static_cast<unsigned long>(k))) * rat(n);
    return truth(rat(cache->code_length(view.source, n)) < bound);
  };
  return f;
}

HierarchyFormula dim_ge_formula(const ApproxReal& alpha, std::shared_ptr<ComplexityCache> cache) {
  cache = or_new(std::move(cache));
  HierarchyFormula f;
  f.name = "dim-ge(" + alpha.label() + ")";
  f.quantifiers = {Quantifier::forall, Quantifier::exists, Quantifier::forall};
  f.kind = KernelKind::decidable;
  f.kernel = [alpha, cache](const std::vector<std::uint64_t>& outer, const PrefixView& view) {
    const std::uint64_t k = outer[0];
    const std::uint64_t big_n = outer[1];
    const std::uint64_t n = view.length;
    if (n < big_n) return Truth::yes;
    const Rational bound = (alpha(big_n) - Rational(1, static_cast<unsigned long>(k))) * rat(n);
    return truth(rat(cache->code_length(view.source, n)) > bound);
  };
  return f;
}

std::pair<HierarchyFormula, HierarchyFormula> dimstr_formulas(const ApproxReal& alpha,
                                                              std::shared_ptr<ComplexityCache> cache,
                                                              std::uint64_t decode_steps) {
  cache = or_new(std::move(cache));
  HierarchyFormula le;
  le.name = "dimstr-le(" + alpha.label() + ")";
  le.quantifiers = {Quantifier::forall, Quantifier::exists, Quantifier::forall};
  le.kind = KernelKind::enumerable_bounded;
  le.kernel = [alpha, cache, decode_steps](const std::vector<std::uint64_t>& outer, const PrefixView& view) {
    const std::uint64_t k = outer[0];
    const std::uint64_t big_n = outer[1];
    const std::uint64_t n = view.length;
    if (n < big_n) return Truth::yes;
    const Rational bound = (alpha(big_n) + Rational(1, static_cast<unsigned long>(k))) * rat(n);
    // The local (exists <pi,t>): no program shorter than C(X|n) exists, so the
    // search reduces to running a shortest one under the step budget.
    if (!(rat(cache->code_length(view.source, n)) < bound)) return Truth::no;
    return cache->program(view.source, n).steps <= decode_steps ? Truth::yes : Truth::timeout;
  };

  HierarchyFormula ge;
  ge.name = "dimstr-ge(" + alpha.label() + ")";
  ge.quantifiers = {Quantifier::forall, Quantifier::forall, Quantifier::exists};
  ge.kind = KernelKind::co_enumerable_bounded;
  ge.kernel = [alpha, cache](const std::vector<std::uint64_t>& outer, const PrefixView& view) {
    const std::uint64_t k = outer[0];
    const std::uint64_t big_n = outer[1];
    const std::uint64_t n = view.length;
    if (n < big_n) return Truth::no;
    const Rational bound = (alpha(n) - Rational(1, static_cast<unsigned long>(k))) * rat(n);
    return truth(rat(cache->code_length(view.source, n)) > bound);
  };
  return {std::move(le), std::move(ge)};
}

// ---- cdim ---------------------------------------------------------------------

std::vector<Rational> default_s_grid() {
  std::vector<Rational> grid;
  for (unsigned long i = 1; i <= 20; ++i) grid.emplace_back(i, 20);
  for (auto& s : grid) s.canonicalize();
  return grid;
}

CdimEstimate cdim_catalog_estimate(const SequenceSource& source, const MixtureSupermartingale& mixture,
                                   const std::vector<Rational>& s_grid, std::uint64_t horizon,
                                   std::uint64_t burn_in) {
  if (burn_in < 1 || horizon < burn_in) throw DomainError("cdim estimate: need 1 <= burn_in <= horizon");
  for (std::size_t i = 0; i < s_grid.size(); ++i) {
    if (s_grid[i] <= 0 || s_grid[i] > 1) throw DomainError("grid points must lie in (0,1]");
    if (i > 0 && !(s_grid[i - 1] < s_grid[i])) throw DomainError("grid must be strictly ascending");
  }
  CdimEstimate est;
  est.value = 1;
  est.horizon = horizon;
  const auto values = mixture.along(source.prefix(horizon));
  for (const auto& s : s_grid) {
    if (s == 1) break;
    for (std::uint64_t n = burn_in; n <= horizon; ++n) {
      if (compare_with_power_of_two(values[n], (1 - s) * rat(n)) != std::strong_ordering::less) {
        est.value = s;
        est.witness_n = n;
        return est;
      }
    }
  }
  return est;
}

}  // namespace galekit
