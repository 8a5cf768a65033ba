#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "galekit/bitseq.hpp"
#include "galekit/complexity.hpp"
#include "galekit/errors.hpp"
#include "galekit/gales.hpp"
#include "galekit/rational.hpp"

namespace galekit {

// contains(k, t, w): does the cylinder [w] lie in O_(k,t)? Levels and stages
// start at 1. Required to be anti-monotone in t.
class LevelOracle {
 public:
  using Fn = std::function<bool(std::uint64_t k, std::uint64_t t, const Word& w)>;

  // Checks anti-monotonicity on k, t <= 12 and all words of length <= 6;
  // InvariantViolation on failure.
  LevelOracle(std::string name, Fn contains);

  static LevelOracle always_true();
  static LevelOracle always_false();
  // True exactly for level k0.
  static LevelOracle only_level(std::uint64_t k0);
  // Lines "k max_t pattern" ('#' starts a comment; pattern "-" is the empty
  // word): contains(k, t, w) iff some line for k has t <= max_t and
  // pattern a prefix of w. IoError on unreadable or malformed input.
  static LevelOracle from_file(const std::string& path);
  static LevelOracle from_stream(std::istream& in, std::string name);
  // "true", "false", otherwise a file path.
  static LevelOracle parse(const std::string& text);

  const std::string& name() const { return name_; }
  bool contains(std::uint64_t k, std::uint64_t t, const Word& w) const { return contains_(k, t, w); }

 private:
  std::string name_;
  Fn contains_;
};

// t_(k,s) = largest t <= s with contains(k, t, x|s), 0 if none.
std::uint64_t stage_level(const LevelOracle& oracle, std::uint64_t k, const Word& x_prefix, std::uint64_t s);

// k(s): least k <= s with t_(k,s-1) < t_(k,s). x_prefix needs >= s bits.
std::optional<std::uint64_t> expansionary(const LevelOracle& oracle, const Word& x_prefix, std::uint64_t s);

inline constexpr std::uint64_t kDefaultStageBudget = 4096;

enum class SearchOutcome { found, not_needed, witness_not_found };
std::string_view to_string(SearchOutcome outcome);

struct StageRecord {
  std::string variant;  // "dim1" or "dimstr"
  std::uint64_t s = 0;
  std::optional<std::uint64_t> k;
  // dim1: substage (a) gives sigma, (b) gives tau.
  // dimstr: (a) gives rho, (b) gives sigma, (c) the zero pad.
  SearchOutcome first = SearchOutcome::not_needed;
  SearchOutcome second = SearchOutcome::not_needed;
  std::uint64_t first_candidates = 0;
  std::uint64_t second_candidates = 0;
  Integer previous_length;
  Integer first_length;   // |sigma| (dim1) or |rho| (dimstr)
  Integer second_length;  // |tau| (dim1) or |sigma| (dimstr)
  Integer stage_length;   // |Y_s|
  Integer pad_length;     // dimstr: |sigma|^2 - |sigma|
  std::string first_word;   // the explicit bits appended, when short
  std::string second_word;
  // mixture(sigma) or C(rho), and mixture(tau) or C(sigma); empty when not computed.
  std::optional<Rational> first_value;
  std::optional<Rational> second_value;
  std::string note;
};

// A prefix Y_s made of explicit segments and zero runs; lengths may exceed
// 64 bits.
class StagedWord {
 public:
  void append_bits(const Word& bits);
  void append_zeros(const Integer& count);
  const Integer& length() const { return length_; }
  // First min(n, length) bits.
  Word materialize(std::uint64_t n) const;
  // A source over the staged word. Finite when the length fits in 64 bits;
  // otherwise unbounded, and bits past the end read as 0.
  SequenceSource source(std::string description) const;

 private:
  struct Segment {
    Integer start;
    Integer length;
    Word bits;  // empty for a zero run
  };
  std::vector<Segment> segments_;
  Integer length_ = 0;
};

struct ReductionResult {
  StagedWord output;
  std::vector<StageRecord> trace;
};

// The DIM^1 transducer against the given mixture. Substage (a) looks for the
// leftmost minimal sigma extending Y_(s-1) with mixture(sigma) >=
// 2^(|sigma|/k(s)); substage (b) for the leftmost minimal tau extending sigma,
// longer than Y_(s-1), with the mixture nonincreasing strictly inside
// (|sigma|, |tau|) and mixture(tau) <= |tau|. Each search examines at most
// `budget` candidates; a failed search is recorded as witness-not-found and
// the stage continues from sigma = Y_(s-1).
ReductionResult wadge_dim1(const LevelOracle& oracle, const SequenceSource& x, std::uint64_t stages,
                           const MixtureSupermartingale& mixture, std::uint64_t budget = kDefaultStageBudget);

inline constexpr std::uint64_t kMaterializationCap = std::uint64_t{1} << 18;

// The DIM_str^alpha transducer with code length C standing in for K.
// (a) leftmost minimal rho extending Y_(s-1) with C(rho) >= alpha |rho|
//     (skipped for alpha = 0);
// (b) leftmost minimal sigma extending rho with C(sigma) >= (alpha + 1/k(s)) |sigma|,
//     or sigma = rho when k(s) is absent;
// (c) Y_s = sigma 0^(|sigma|^2 - |sigma|).
// When sigma has length <= 1 and equals Y_(s-1), a 0 is appended first so
// the output grows. Searches need Y_(s-1) materialized and are skipped as
// witness-not-found beyond kMaterializationCap bits.
ReductionResult wadge_dimstr(const LevelOracle& oracle, const SequenceSource& x, std::uint64_t stages,
                             const Rational& alpha, const ComplexityModel& model,
                             std::uint64_t budget = kDefaultStageBudget);

// One JSON object per line.
void write_stage_trace_jsonl(std::ostream& out, const std::vector<StageRecord>& trace);

// ---- dense Pi^0_2 witness ----------------------------------------------------------

class DensityViolated : public DomainError {
 public:
  DensityViolated(std::uint64_t m, const std::string& what) : DomainError(what), m_(m) {}
  std::uint64_t level() const { return m_; }

 private:
  std::uint64_t m_;
};

struct DenseWitnessStep {
  std::uint64_t m;
  std::uint64_t k;
  Word word;  // sigma_(m+1)
};

struct DenseWitness {
  Word word;
  std::vector<DenseWitnessStep> steps;
};

// Builds sigma_0 = lambda and, for m < depth, sigma_(m+1) = the leftmost
// minimal extension of sigma_m having some k in [0, budget] with R(m, k, sigma).
// At most `budget` candidate words are tried per level; DensityViolated
// names the first level where that fails.
DenseWitness pi2_dense_witness(const std::function<bool(std::uint64_t, std::uint64_t, const Word&)>& predicate,
                               std::uint64_t depth, std::uint64_t budget);

}  // namespace galekit
