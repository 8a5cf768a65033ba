#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "galekit/bitseq.hpp"
#include "galekit/complexity.hpp"
#include "galekit/gales.hpp"
#include "galekit/rational.hpp"

namespace galekit {

// A computable approximation n -> alpha_hat(n) of a real alpha.
class ApproxReal {
 public:
  ApproxReal(std::string label, std::function<Rational(std::uint64_t)> approximant)
      : label_(std::move(label)), approximant_(std::move(approximant)) {}
  static ApproxReal constant(const Rational& value);

  const std::string& label() const { return label_; }
  Rational operator()(std::uint64_t n) const { return approximant_(n); }

 private:
  std::string label_;
  std::function<Rational(std::uint64_t)> approximant_;
};

enum class Quantifier { forall, exists };
enum class KernelKind { decidable, enumerable_bounded, co_enumerable_bounded };
enum class Truth { yes, no, timeout };

std::string_view to_string(KernelKind kind);

// The innermost variable k1 is consumed as a prefix length: the kernel sees
// the values of k_n..k_2 and the word A|k1.
struct PrefixView {
  const SequenceSource& source;
  std::uint64_t length;
  Word prefix() const { return source.prefix(length); }
};

using Kernel = std::function<Truth(const std::vector<std::uint64_t>& outer, const PrefixView& view)>;

// (Q_n k_n) ... (Q_1 k_1) P(k_n, ..., k_2, A|k_1), quantifiers listed
// outermost first. Every variable ranges over 1..bound.
struct HierarchyFormula {
  std::string name;
  std::vector<Quantifier> quantifiers;
  KernelKind kind = KernelKind::decidable;
  Kernel kernel;
};

enum class BoundedVerdict { holds_at_bounds, fails_at_bounds, kernel_timeout };
std::string_view to_string(BoundedVerdict verdict);

struct BoundedEvaluation {
  BoundedVerdict verdict = BoundedVerdict::fails_at_bounds;
  // Decisive values from the outermost quantifier inward: the witness of a
  // true existential or the counterexample of a false universal. Stops at the
  // first level where every value had to be inspected.
  std::vector<std::uint64_t> decisive;
  std::uint64_t kernel_calls = 0;
};

// Bounded evaluation with three-valued (strong Kleene) combination, so a
// timeout only matters when no other value decides the quantifier.
// DomainError unless bounds.size() == quantifier count and every bound >= 1.
BoundedEvaluation eval_bounded(const HierarchyFormula& formula, const SequenceSource& source,
                               const std::vector<std::uint64_t>& bounds);

// Per-source cache of code lengths C(A|n) and shortest programs, shared by
// the kernels of the dimension formulas. Thread-safe.
class ComplexityCache {
 public:
  ComplexityCache();
  ~ComplexityCache();
  ComplexityCache(const ComplexityCache&) = delete;
  ComplexityCache& operator=(const ComplexityCache&) = delete;

  // C(A|n), n >= 1.
  std::uint64_t code_length(const SequenceSource& source, std::uint64_t n);
  // A shortest codeword for A|n and the steps its decoding takes, verified by
  // decoding. InvariantViolation if it does not decode to A|n.
  struct Program {
    std::uint64_t length;
    std::uint64_t steps;
  };
  Program program(const SequenceSource& source, std::uint64_t n);

 private:
  struct State;
  std::unique_ptr<State> state_;
};

inline constexpr std::uint64_t kDefaultDecodeSteps = std::uint64_t{1} << 20;

// (forall k)(forall N)(exists n) [n >= N and C(X|n) < (alpha_hat(n) + 1/k) n]
HierarchyFormula dim_le_formula(const ApproxReal& alpha, std::shared_ptr<ComplexityCache> cache = nullptr);
// (forall k)(exists N)(forall n) [n >= N implies C(X|n) > (alpha_hat(N) - 1/k) n]
HierarchyFormula dim_ge_formula(const ApproxReal& alpha, std::shared_ptr<ComplexityCache> cache = nullptr);
// First: (forall k)(exists N)(forall n) [n >= N implies
//          (exists <pi,t>) |pi| < (alpha_hat(N) + 1/k) n and pi decodes to X|n in t steps]
//   with the local existential searched up to decode_steps (kind enumerable-bounded).
// Second: (forall k)(forall N)(exists n) [n >= N and C(X|n) > (alpha_hat(n) - 1/k) n]
//   (kind co-enumerable-bounded).
std::pair<HierarchyFormula, HierarchyFormula> dimstr_formulas(const ApproxReal& alpha,
                                                              std::shared_ptr<ComplexityCache> cache = nullptr,
                                                              std::uint64_t decode_steps = kDefaultDecodeSteps);

// Default bound profiles for the shipped examples.
inline const std::vector<std::uint64_t> kDimBounds{4, 16, 4096};
inline const std::vector<std::uint64_t> kDimstrBounds{4, 256, 4096};

struct CdimEstimate {
  Rational value;  // least witnessed grid point, or 1
  std::optional<std::uint64_t> witness_n;
  std::uint64_t horizon = 0;
  static constexpr std::string_view kLabel = "relative to catalog, finite horizon";
};

inline constexpr std::uint64_t kCdimBurnIn = 256;

// Least s in the grid (ascending, within (0,1]) for which the mixture
// reaches 2^((1-s) n) at some n in [burn_in, horizon] along the source.
// Lengths below burn_in are ignored: there h_s is close to 1 and the
// mixture's early fluctuations clear it for nearly every s. s = 1 is the
// fallback and is not evaluated (h_1 is bounded).
CdimEstimate cdim_catalog_estimate(const SequenceSource& source, const MixtureSupermartingale& mixture,
                                   const std::vector<Rational>& s_grid, std::uint64_t horizon,
                                   std::uint64_t burn_in = kCdimBurnIn);

// {1/20, 2/20, ..., 20/20}
std::vector<Rational> default_s_grid();

}  // namespace galekit
