#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "galekit/bitseq.hpp"
#include "galekit/rational.hpp"

namespace galekit {

// Code "v1". A codeword is a 2-bit tag followed by a body:
//   00 literal   gamma(n+1), then the n bits            2 + gamma(n+1) + n
//   01 run       bit b, gamma(n) with n >= 1  -> b^n     3 + gamma(n)
//   10 periodic  3 bits for p-1 (1 <= p <= 8), gamma(n), p pattern bits
//                -> first n bits of pattern^infinity     5 + p + gamma(n)
//   11 concat    codeword(u), codeword(v)  -> uv         2 + |c(u)| + |c(v)|
// gamma(m) is the Elias gamma code of m >= 1: floor(log2 m) zeros, then m in
// binary; its length is 2 floor(log2 m) + 1. Kraft sum S satisfies
// S = 3/4 + S^2/4, whose least solution is S = 1, so the code is prefix-free
// and complete up to a null set.

constexpr unsigned gamma_length(std::uint64_t m) {
  unsigned k = 0;
  while ((m >> (k + 1)) != 0) ++k;
  return 2 * k + 1;
}

namespace code_v1 {
constexpr unsigned kTagBits = 2;
constexpr unsigned kMaxPeriod = 8;
constexpr unsigned kPeriodFieldBits = 3;

constexpr std::uint64_t literal_cost(std::uint64_t n) { return kTagBits + gamma_length(n + 1) + n; }
constexpr std::uint64_t run_cost(std::uint64_t n) { return kTagBits + 1 + gamma_length(n); }
constexpr std::uint64_t periodic_cost(unsigned p, std::uint64_t n) {
  return kTagBits + kPeriodFieldBits + p + gamma_length(n);
}
// Cost of joining two codewords.
constexpr std::uint64_t kPairOverhead = kTagBits;
// C(empty word): the empty literal.
constexpr std::uint64_t kEmptyCost = literal_cost(0);
// C(w) <= |w| + literal_overhead(|w|).
constexpr std::uint64_t literal_overhead(std::uint64_t n) { return literal_cost(n) - n; }
// C(w)/|w| <= 2 once |w| >= kRatioBoundFrom.
constexpr std::uint64_t kRatioBound = 2;
constexpr std::uint64_t kRatioBoundFrom = [] {
  std::uint64_t n = 1;
  while (literal_cost(n) > kRatioBound * n) ++n;
  return n;
}();
}  // namespace code_v1

enum class DecodeStatus { complete, need_more };

struct DecodeResult {
  DecodeStatus status;
  std::size_t consumed = 0;  // bits read; equals the codeword length when complete
  Word output;               // full output, or what is already determined
  // Machine steps: one per bit read plus one per bit written.
  std::uint64_t steps() const { return consumed + output.size(); }
};

enum class LeafKind { literal, run, periodic };

struct Leaf {
  LeafKind kind;
  std::size_t begin;  // segment [begin, end) of the word
  std::size_t end;
  unsigned period = 0;  // periodic only
};

class ComplexityModel {
 public:
  static ComplexityModel v1() { return ComplexityModel(); }
  // "v1" is the only shipped variant; anything else is a DomainError.
  static ComplexityModel by_name(std::string_view name);

  std::string_view name() const { return "v1"; }

  // Decodes the codeword at the start of `bits`. When the input runs out,
  // returns need_more together with the output determined so far.
  DecodeResult decode(const Word& bits) const;

  std::uint64_t code_length(const Word& w) const;
  // A shortest codeword for w; decode(encode(w)) == w.
  Word encode(const Word& w) const;
  // C of every prefix: result[n] = C(w|n) for 0 <= n <= |w|.
  std::vector<std::uint64_t> prefix_lengths(const Word& w) const;
};

// Incremental form of the code-length computation for a growing word. Each
// push is amortized O(log n); pop undoes the last push.
class ComplexityProfile {
 public:
  ComplexityProfile();

  void push(Bit b);
  void pop();
  void truncate(std::size_t n);
  std::size_t size() const { return bits_.size(); }
  const std::vector<Bit>& bits() const { return bits_; }

  // C of the current word's prefix of length n (n <= size()).
  std::uint64_t code_length(std::size_t n) const;
  std::uint64_t code_length() const { return code_length(bits_.size()); }
  // Optimal segmentation of the prefix of length n.
  std::vector<Leaf> segmentation(std::size_t n) const;

 private:
  struct Choice {
    std::uint32_t from;
    LeafKind kind;
    std::uint8_t period;
  };
  // Append-only range-min tables; level l at index j holds the position of
  // the min over (j - 2^l, j].
  struct RangeMin {
    std::vector<std::int64_t> values;
    std::vector<std::vector<std::uint32_t>> levels;
    std::uint32_t better(std::uint32_t a, std::uint32_t b) const;
    void push(std::int64_t value);
    void pop();
    std::int64_t min(std::size_t lo, std::size_t hi) const;  // inclusive
    std::size_t argmin(std::size_t lo, std::size_t hi) const;
  };

  std::vector<Bit> bits_;
  std::vector<std::int64_t> best_;  // best_[j] = C(prefix j) + 2 for j >= 1, best_[0] = 0
  std::vector<Choice> choice_;
  std::vector<std::uint32_t> run_start_;
  // last_break_[p-1][j]: largest t <= j (1-based) with w_t != w_(t-p), else 0
  std::vector<std::vector<std::uint32_t>> last_break_;
  RangeMin shifted_;  // best_[i] - i
  RangeMin plain_;    // best_[i]
};

// A shortest codeword for the profile's prefix of length n.
Word encode_prefix(const ComplexityProfile& profile, std::size_t n);

// Exhaustive oracle: decodes every candidate codeword of length <= max_len,
// pruning candidates whose determined output already disagrees with w.
// max_len must be <= 32.
std::optional<std::uint64_t> brute_force_length(const ComplexityModel& model, const Word& w,
                                                unsigned max_len);

// Shortest codeword length for every word of length <= max_word_len, found by
// decoding every bit string of length <= max_code_len.
// Index: (2^|w| - 1) + value(w). Missing entries hold 0.
std::vector<std::uint32_t> shortest_codeword_table(const ComplexityModel& model,
                                                   unsigned max_word_len, unsigned max_code_len);

struct CodeEnumeration {
  unsigned max_length = 0;
  std::vector<std::uint64_t> count_by_length;  // codewords of each length
  Integer kraft_numerator;                     // sum of 2^(max_length - |c|)
  std::uint64_t prefix_violations = 0;         // codewords extending another codeword
  Rational kraft_sum() const;
};

// Walks every bit string of length <= max_length (max 30) and records which
// are codewords.
CodeEnumeration enumerate_codewords(const ComplexityModel& model, unsigned max_length);

// Codeword counts per length from the grammar of the code, for cross-checking
// the enumeration.
std::vector<Integer> grammar_codeword_counts(unsigned max_length);

// ---- estimators ---------------------------------------------------------------

struct RatioEntry {
  std::uint64_t n;
  std::uint64_t complexity;
  Rational ratio;
};

struct RatioTrace {
  std::vector<RatioEntry> entries;  // n = 1..horizon
  std::uint64_t tail_begin = 0;
  std::uint64_t tail_end = 0;
  Rational running_inf_tail;
  Rational running_sup_tail;
};

struct DimensionEstimate {
  RatioTrace trace;
  Rational value;
  std::uint64_t attained_at = 0;
  static constexpr std::string_view kLabel = "model-relative";
};

// Ratios C(A|n)/n for n = 1..horizon; value is the min over the tail window
// [ceil(tail_fraction * horizon), horizon].
DimensionEstimate dim_estimate(const ComplexityModel& model, const SequenceSource& source,
                               std::uint64_t horizon, const Rational& tail_fraction = Rational(1, 2));
// Same window, max instead of min.
DimensionEstimate strong_dim_estimate(const ComplexityModel& model, const SequenceSource& source,
                                      std::uint64_t horizon,
                                      const Rational& tail_fraction = Rational(1, 2));
// Both from one trace.
std::pair<DimensionEstimate, DimensionEstimate> dimension_estimates(
    const ComplexityModel& model, const SequenceSource& source, std::uint64_t horizon,
    const Rational& tail_fraction = Rational(1, 2));

// CSV: n, C, ratio, ratio_float.
void write_ratio_trace_csv(std::ostream& out, const RatioTrace& trace);

}  // namespace galekit
