#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>

#include "galekit/bitseq.hpp"
#include "galekit/rational.hpp"

namespace galekit {

// Block layout of the dilution f_alpha(X) = x1 y1 x2 y2 ...: x_n holds the
// next 2n-1 bits of X and y_n = 0^(k_n). Blocks are numbered from 1; stream
// offsets are 0-based.
enum class PadRule {
  // k_n = ceil(n (1-alpha)/alpha)
  index_scaled,
  // k_n = ceil((2n-1)(1-alpha)/alpha): pads proportional to the block, so
  // that x-bits make up an alpha fraction of every prefix ending at a block
  // boundary.
  block_scaled,
};

std::string_view to_string(PadRule rule);
PadRule parse_pad_rule(std::string_view text);

class DilutionPlan {
 public:
  // DomainError unless 0 < alpha < 1.
  explicit DilutionPlan(Rational alpha, PadRule rule = PadRule::index_scaled);

  const Rational& alpha() const { return alpha_; }
  PadRule rule() const { return rule_; }

  static std::uint64_t block_length(std::uint64_t n) { return 2 * n - 1; }
  std::uint64_t pad_length(std::uint64_t n) const;
  // k_1 + ... + k_n, in closed form.
  Integer pad_total(std::uint64_t n) const;
  // Offset of the first bit of x_n: |x1 y1 ... x_(n-1) y_(n-1)|.
  Integer block_offset(std::uint64_t n) const;
  // Number of x-blocks started before stream position `pos`, i.e. the n
  // with block_offset(n) <= pos < block_offset(n+1).
  std::uint64_t block_at(const Integer& pos) const;

  // Stream position of source bit i (0-based).
  Integer position_of_source_bit(std::uint64_t i) const;
  // Diluted length for a source of `source_bits` bits: the stream stops
  // right after the last source bit.
  Integer diluted_length(std::uint64_t source_bits) const;

 private:
  Rational alpha_;
  PadRule rule_;
  // k_n = floor((slope (n-1) + intercept) / denominator)
  std::uint64_t slope_ = 0;
  std::uint64_t intercept_ = 0;
  std::uint64_t denominator_ = 1;
};

// DomainError unless 0 < alpha < 1.
SequenceSource dilute(const Rational& alpha, const SequenceSource& source, PadRule rule = PadRule::index_scaled);
SequenceSource undilute(const Rational& alpha, const SequenceSource& diluted, PadRule rule = PadRule::index_scaled);

// ---- selection rules ----------------------------------------------------------

// phi(w) = 1 means "select the bit that follows w". Positions of bits are
// 1-based: the bit following w sits at position |w| + 1.
class SelectionRule {
 public:
  SelectionRule(std::string name, std::function<bool(const Word&)> select)
      : name_(std::move(name)), select_(std::move(select)) {}

  const std::string& name() const { return name_; }
  bool operator()(const Word& history) const { return select_(history); }

 private:
  std::string name_;
  std::function<bool(const Word&)> select_;
};

SelectionRule rule_all();
// Selects iff |w| is even, so phi picks positions 1, 3, 5, ...
SelectionRule rule_even();
// Selects iff |w| + 1 is a power of two.
SelectionRule rule_powers_of_two();
// Selects the bit at 1-based position p iff position_in_set(p).
SelectionRule rule_positions(std::string name, std::function<bool(std::uint64_t)> position_in_set);
// "all", "even", "powers-of-two"; anything else is a DomainError.
SelectionRule parse_rule(std::string_view name);

// Phi(lambda) = lambda; Phi(wi) = Phi(w) i if phi(w) = 1, else Phi(w).
Word apply_selection(const SelectionRule& rule, const Word& w);

struct SelectionReport {
  Word selected;                   // Phi(A|horizon)
  Rational min_ratio;              // min over 1 <= m <= horizon of |Phi(A|m)| / m
  std::uint64_t argmin_m = 0;
};

SelectionReport select_subsequence(const SelectionRule& rule, const SequenceSource& source,
                                   std::uint64_t horizon);

struct StochasticityVerdict {
  bool pass = false;
  Rational frequency;  // of ones
  Rational deviation;  // |frequency - 1/2|
};

// DomainError on an empty word or a negative tolerance.
StochasticityVerdict stochasticity_check(const Word& selected, const Rational& tolerance);

// Forces the bits at the listed 1-based positions to 0.
SequenceSource remove_sparse(const SequenceSource& source, std::string name,
                             std::function<bool(std::uint64_t)> position_in_set);
// D = {1, 2, 4, 8, ...}
bool is_power_of_two_position(std::uint64_t position);

}  // namespace galekit
