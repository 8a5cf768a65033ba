#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "galekit/bitseq.hpp"
#include "galekit/gale_value.hpp"
#include "galekit/rational.hpp"

namespace galekit {

enum class ProcessKind { martingale, supermartingale, s_gale, s_supergale };

std::string_view to_string(ProcessKind kind);

// A nonnegative exact-valued function on words with its averaging law:
//   martingale       2 d(w)   =  d(w0) + d(w1)
//   supermartingale  2 d(w)   >= d(w0) + d(w1)
//   s-gale           2^s d(w) =  d(w0) + d(w1)
//   s-supergale      2^s d(w) >= d(w0) + d(w1)
// Martingale kinds carry s = 1. Evaluation must be pure.
class ValuedProcess {
 public:
  using Evaluator = std::function<GaleValue(const Word&)>;
  // Values at every prefix 0..|path| of a path; optional fast path.
  using PathEvaluator = std::function<std::vector<GaleValue>(const Word&)>;

  ValuedProcess(std::string name, ProcessKind kind, Rational s, Evaluator evaluate,
                PathEvaluator along_path = {});

  const std::string& name() const { return name_; }
  ProcessKind kind() const { return kind_; }
  const Rational& s() const { return s_; }

  GaleValue operator()(const Word& w) const { return evaluate_(w); }
  std::vector<GaleValue> along(const Word& path) const;

 private:
  std::string name_;
  ProcessKind kind_;
  Rational s_;
  Evaluator evaluate_;
  PathEvaluator along_path_;
};

// A betting strategy: given the history w, it puts a fraction q(w) in [0,1]
// of its capital on the next bit being 1, so that
//   d(w1) = 2 q(w) d(w),   d(w0) = 2 (1 - q(w)) d(w).
class BettingStrategy {
 public:
  virtual ~BettingStrategy() = default;
  virtual Rational stake_on_one(const Word& history) const = 0;
  virtual std::string name() const = 0;
};

class Martingale {
 public:
  explicit Martingale(std::shared_ptr<const BettingStrategy> strategy, Rational initial = 1);

  std::string name() const { return strategy_->name(); }
  const Rational& initial() const { return initial_; }
  const BettingStrategy& strategy() const { return *strategy_; }

  Rational step(const Rational& current, const Word& history, Bit next) const;
  Rational value(const Word& w) const;
  // Values at prefixes 0..|path|.
  std::vector<Rational> along(const Word& path) const;
  ValuedProcess as_process() const;

 private:
  std::shared_ptr<const BettingStrategy> strategy_;
  Rational initial_;
};

// Bets everything on the next bit matching pattern[|w| mod |pattern|].
// pattern "0" is the doubling-on-zero martingale: d(0^n) = 2^n.
Martingale pattern_bettor(const Word& pattern);
// Constant stake q = p on a one.
Martingale frequency_bettor(const Rational& p);
// d == 1.
Martingale fair_martingale();
// At 1-based positions in the set, stakes `stake` of its capital on `favored`;
// elsewhere it does not bet.
Martingale selective_bettor(std::string label, std::function<bool(std::uint64_t)> position_in_set,
                            Bit favored, const Rational& stake);

// A martingale given by an explicit value table on all words of length
// <= depth (built by splitting mass top-down); beyond the table it stops
// betting. Values are looked up, not recomputed.
class TableMartingale {
 public:
  // Random table: each node splits 2 d(w) between its children in a ratio
  // a/b with 1 <= b <= 8 drawn from rng.
  static TableMartingale random(std::mt19937_64& rng, unsigned depth, const Rational& initial = 1);

  unsigned depth() const { return depth_; }
  const Rational& value(const Word& w) const;
  ValuedProcess as_process(std::string name = "table") const;

 private:
  unsigned depth_ = 0;
  std::shared_ptr<const std::vector<Rational>> values_;  // heap order: index (2^|w| - 1) + bits(w)
};

// Weighted sum of normalized martingales; the k-th listed component
// (1-based) has weight 2^(-k). It is a supermartingale (in fact a martingale
// with initial value 1 - 2^(-m) for m components).
class MixtureSupermartingale {
 public:
  MixtureSupermartingale() = default;
  explicit MixtureSupermartingale(std::vector<Martingale> components);

  const std::vector<Martingale>& components() const { return components_; }
  Rational weight(std::size_t index) const;  // 0-based index
  bool empty() const { return components_.empty(); }

  Rational value(const Word& w) const;
  std::vector<Rational> along(const Word& path) const;
  ValuedProcess as_process() const;

 private:
  std::vector<Martingale> components_;
};

// DomainError unless every component has d(lambda) = 1.
MixtureSupermartingale make_mixture(std::vector<Martingale> components);

// The shipped catalog, in weight order:
//   pattern bettors on 0, 1, 01, 10, 001, 010, 100, 011, 101, 110;
//   frequency bettors at p = 1/4, 1/3, 1/2, 2/3, 3/4;
//   selective bettors favoring 0 at powers of two and at even positions.
std::vector<Martingale> default_catalog();
MixtureSupermartingale catalog_mixture();

// ---- averaging checks -------------------------------------------------------

struct AveragingViolation {
  Word word;
  GaleValue parent_side;   // 2^s d(w)
  GaleValue children_sum;  // d(w0) + d(w1)
};

struct AveragingReport {
  std::vector<AveragingViolation> violations;
  std::size_t words_checked = 0;
  // max |log2(2^s d(w)) - log2(d(w0) + d(w1))| over words with both sides > 0
  double max_log2_residual = 0.0;
  bool ok() const { return violations.empty(); }
};

inline constexpr unsigned kDefaultMaxCheckDepth = 20;

// Checks the kind's law at every word of length < depth.
// Throws InvariantViolation on a negative value, DomainError if
// depth > max_depth.
AveragingReport check_averaging(const ValuedProcess& process, unsigned depth,
                                unsigned max_depth = kDefaultMaxCheckDepth);

// d^(s)(w) = 2^((s-1)|w|) d(w); an s-gale from a martingale, an s-supergale
// from a supermartingale.
ValuedProcess to_s_gale(const ValuedProcess& d, const Rational& s);

// sum over |w| = n of 2^(-s n) d(w); equals d(lambda) for an s-gale.
GaleValue level_mass(const ValuedProcess& process, unsigned n);

// ---- orders and success sets -----------------------------------------------

// A nondecreasing unbounded function N -> positive reals. Values must be
// single-term GaleValues (c * 2^e).
class Order {
 public:
  Order(std::string name, std::function<GaleValue(std::uint64_t)> evaluate)
      : name_(std::move(name)), evaluate_(std::move(evaluate)) {}
  const std::string& name() const { return name_; }
  GaleValue operator()(std::uint64_t n) const { return evaluate_(n); }

 private:
  std::string name_;
  std::function<GaleValue(std::uint64_t)> evaluate_;
};

// h_s(n) = 2^((1-s) n). DomainError unless 0 <= s < 1.
Order standard_order(const Rational& s);
// h(n) = n.
Order linear_order();

// True when the order is positive, nondecreasing and strictly grows
// somewhere on [1, horizon].
bool spot_check_order(const Order& h, std::uint64_t horizon);

enum class HorizonVerdict { witnessed, not_witnessed_at_horizon };
std::string_view to_string(HorizonVerdict verdict);

struct GaleTraceRow {
  std::uint64_t n;
  GaleValue value;
  GaleValue order_value;
  GaleValue ratio;
};

struct OrderSuccessReport {
  GaleValue max_ratio;
  std::uint64_t argmax_n = 0;
  std::uint64_t witnessed_count = 0;        // n with d(A|n)/h(n) >= 1
  std::optional<std::uint64_t> last_witness;
  HorizonVerdict verdict = HorizonVerdict::not_witnessed_at_horizon;
  std::uint64_t horizon = 0;
  std::vector<GaleTraceRow> trace;
  static constexpr std::string_view kLabel = "finite-horizon approximation";
};

// Finite-horizon proxy for A in S^h[d]: ratios d(A|n)/h(n) for 1 <= n <= horizon.
OrderSuccessReport order_success(const ValuedProcess& d, const Order& h, const SequenceSource& source,
                                 std::uint64_t horizon);

struct StrongSuccessReport {
  GaleValue tail_min;
  std::uint64_t argmin_n = 0;
  std::uint64_t window_begin = 0;
  std::uint64_t window_end = 0;
  bool consistent = false;  // "consistent-with-strong-success"
  static constexpr std::string_view kLabel = "tail-window proxy for liminf";
};

// min of d(A|n) over n in [horizon/2, horizon] against a threshold.
StrongSuccessReport strong_success(const ValuedProcess& d, const SequenceSource& source,
                                   std::uint64_t horizon, const Rational& threshold);

// CSV: n, value, h, ratio, value_float, ratio_float.
void write_gale_trace_csv(std::ostream& out, const OrderSuccessReport& report);

}  // namespace galekit
