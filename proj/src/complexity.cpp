#include "galekit/complexity.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <ostream>

#include "galekit/errors.hpp"

namespace galekit {
namespace {

// Bit access over a Word.
struct WordReader {
  const Word& word;
  std::size_t size() const { return word.size(); }
  Bit operator[](std::size_t i) const { return word[i]; }
};

// Bit access over the low `length` bits of an integer, first bit most significant.
struct PackedReader {
  std::uint64_t value;
  unsigned length;
  std::size_t size() const { return length; }
  Bit operator[](std::size_t i) const { return static_cast<Bit>((value >> (length - 1 - i)) & 1U); }
};

constexpr std::uint64_t kMaxDecodedLength = std::uint64_t{1} << 32;

// Output sinks. put() returning false stops decoding.
struct DiscardSink {
  bool put(Bit) { return true; }
  bool reserve(std::uint64_t) { return true; }
};

struct WordSink {
  Word& out;
  bool put(Bit b) {
    out.push_back(b);
    return true;
  }
  bool reserve(std::uint64_t n) {
    if (out.size() + n > kMaxDecodedLength) throw DomainError("decoded word too long");
    return true;
  }
};

// Accepts output only while it stays a prefix of target.
struct MatchSink {
  const Word& target;
  std::size_t produced = 0;
  bool put(Bit b) { return produced < target.size() && target[produced++] == b; }
  bool reserve(std::uint64_t n) { return produced + n <= target.size(); }
};

template <class Reader, class Sink>
class Decoder {
 public:
  Decoder(const Reader& bits, Sink& sink) : bits_(bits), sink_(sink) {}

  // False when the input ran out or the sink refused the output.
  bool codeword() {
    Bit t0 = 0;
    Bit t1 = 0;
    if (!read(t0) || !read(t1)) return false;
    switch ((t0 << 1U) | t1) {
      case 0: return literal();
      case 1: return run();
      case 2: return periodic();
      default: return codeword() && codeword();
    }
  }

  std::size_t consumed() const { return pos_; }
  bool rejected() const { return rejected_; }

 private:
  bool read(Bit& b) {
    if (pos_ >= bits_.size()) return false;
    b = bits_[pos_++];
    return true;
  }

  bool gamma(std::uint64_t& m) {
    unsigned zeros = 0;
    Bit b = 0;
    for (;;) {
      if (!read(b)) return false;
      if (b) break;
      if (++zeros > 40) throw DomainError("codeword length field too large");
    }
    m = 1;
    for (unsigned k = 0; k < zeros; ++k) {
      if (!read(b)) return false;
      m = (m << 1U) | b;
    }
    return true;
  }

  bool emit(Bit b) {
    if (!sink_.put(b)) rejected_ = true;
    return !rejected_;
  }

  bool reserve(std::uint64_t n) {
    if (!sink_.reserve(n)) rejected_ = true;
    return !rejected_;
  }

  bool literal() {
    std::uint64_t m = 0;
    if (!gamma(m)) return false;
    for (std::uint64_t k = 0; k + 1 < m; ++k) {
      Bit b = 0;
      if (!read(b) || !emit(b)) return false;
    }
    return true;
  }

  bool run() {
    Bit b = 0;
    // n >= 1, so the first output bit is already known
    if (!read(b) || !emit(b)) return false;
    std::uint64_t n = 0;
    if (!gamma(n) || !reserve(n - 1)) return false;
    for (std::uint64_t k = 1; k < n; ++k) {
      if (!emit(b)) return false;
    }
    return true;
  }

  bool periodic() {
    unsigned p = 0;
    for (unsigned k = 0; k < code_v1::kPeriodFieldBits; ++k) {
      Bit b = 0;
      if (!read(b)) return false;
      p = (p << 1U) | b;
    }
    ++p;
    std::uint64_t n = 0;
    if (!gamma(n) || !reserve(n > p ? n - p : 0)) return false;
    Bit pattern[code_v1::kMaxPeriod];
    for (unsigned k = 0; k < p; ++k) {
      if (!read(pattern[k])) return false;
      if (k < n && !emit(pattern[k])) return false;
    }
    for (std::uint64_t k = p; k < n; ++k) {
      if (!emit(pattern[k % p])) return false;
    }
    return true;
  }

  const Reader& bits_;
  Sink& sink_;
  std::size_t pos_ = 0;
  bool rejected_ = false;
};

void append_gamma(Word& out, std::uint64_t m) {
  const unsigned width = static_cast<unsigned>(std::bit_width(m));
  for (unsigned k = 1; k < width; ++k) out.push_back(0);
  for (unsigned k = width; k-- > 0;) out.push_back(static_cast<Bit>((m >> k) & 1U));
}

void append_leaf(Word& out, const Word& w, const Leaf& leaf) {
  const std::uint64_t n = leaf.end - leaf.begin;
  switch (leaf.kind) {
    case LeafKind::literal:
      out.push_back(0);
      out.push_back(0);
      append_gamma(out, n + 1);
      for (std::size_t t = leaf.begin; t < leaf.end; ++t) out.push_back(w[t]);
      break;
    case LeafKind::run:
      out.push_back(0);
      out.push_back(1);
      out.push_back(w[leaf.begin]);
      append_gamma(out, n);
      break;
    case LeafKind::periodic: {
      out.push_back(1);
      out.push_back(0);
      for (unsigned k = code_v1::kPeriodFieldBits; k-- > 0;) {
        out.push_back(static_cast<Bit>(((leaf.period - 1) >> k) & 1U));
      }
      append_gamma(out, n);
      for (unsigned k = 0; k < leaf.period; ++k) {
        out.push_back(k < n ? w[leaf.begin + k] : Bit{0});
      }
      break;
    }
  }
}

}  // namespace

// ---- ComplexityModel ----------------------------------------------------------

ComplexityModel ComplexityModel::by_name(std::string_view name) {
  if (name != "v1") throw DomainError("unknown complexity model '" + std::string(name) + "' (only v1)");
  return v1();
}

DecodeResult ComplexityModel::decode(const Word& bits) const {
  DecodeResult result{DecodeStatus::need_more, 0, Word{}};
  WordReader reader{bits};
  WordSink sink{result.output};
  Decoder<WordReader, WordSink> decoder(reader, sink);
  if (decoder.codeword()) result.status = DecodeStatus::complete;
  result.consumed = decoder.consumed();
  return result;
}

std::uint64_t ComplexityModel::code_length(const Word& w) const {
  if (w.empty()) return code_v1::kEmptyCost;
  ComplexityProfile profile;
  for (std::size_t i = 0; i < w.size(); ++i) profile.push(w[i]);
  return profile.code_length();
}

std::vector<std::uint64_t> ComplexityModel::prefix_lengths(const Word& w) const {
  ComplexityProfile profile;
  std::vector<std::uint64_t> out;
  out.reserve(w.size() + 1);
  out.push_back(code_v1::kEmptyCost);
  for (std::size_t i = 0; i < w.size(); ++i) {
    profile.push(w[i]);
    out.push_back(profile.code_length());
  }
  return out;
}

Word ComplexityModel::encode(const Word& w) const {
  ComplexityProfile profile;
  for (std::size_t i = 0; i < w.size(); ++i) profile.push(w[i]);
  return encode_prefix(profile, w.size());
}

Word encode_prefix(const ComplexityProfile& profile, std::size_t n) {
  Word out;
  if (n == 0) {
    append_leaf(out, Word{}, Leaf{LeafKind::literal, 0, 0});
    return out;
  }
  const Word w(std::vector<Bit>(profile.bits().begin(), profile.bits().begin() + static_cast<std::ptrdiff_t>(n)));
  const auto leaves = profile.segmentation(n);
  // Right-nested concatenation: 11 c1 11 c2 ... c_k.
  for (std::size_t k = 0; k < leaves.size(); ++k) {
    if (k + 1 < leaves.size()) {
      out.push_back(1);
      out.push_back(1);
    }
    append_leaf(out, w, leaves[k]);
  }
  return out;
}

// ---- ComplexityProfile --------------------------------------------------------

void ComplexityProfile::RangeMin::push(std::int64_t value) {
  values.push_back(value);
  if (levels.empty()) levels.emplace_back();
  const std::size_t j = values.size() - 1;
  levels[0].push_back(static_cast<std::uint32_t>(j));
  for (std::size_t l = 1; (std::size_t{1} << l) <= values.size(); ++l) {
    if (levels.size() <= l) levels.emplace_back();
    auto& level = levels[l];
    level.resize(j + 1);
    const auto& below = levels[l - 1];
    level[j] = better(below[j - (std::size_t{1} << (l - 1))], below[j]);
  }
}

void ComplexityProfile::RangeMin::pop() {
  values.pop_back();
  const std::size_t n = values.size();
  for (auto& level : levels) {
    if (level.size() > n) level.resize(n);
  }
}

std::uint32_t ComplexityProfile::RangeMin::better(std::uint32_t a, std::uint32_t b) const {
  return values[b] < values[a] ? b : a;  // ties keep a
}

std::size_t ComplexityProfile::RangeMin::argmin(std::size_t lo, std::size_t hi) const {
  const std::size_t len = hi - lo + 1;
  const unsigned l = static_cast<unsigned>(std::bit_width(len)) - 1;
  return better(levels[l][lo + (std::size_t{1} << l) - 1], levels[l][hi]);
}

std::int64_t ComplexityProfile::RangeMin::min(std::size_t lo, std::size_t hi) const {
  return values[argmin(lo, hi)];
}

ComplexityProfile::ComplexityProfile() : last_break_(code_v1::kMaxPeriod) {
  best_.push_back(0);
  choice_.push_back({0, LeafKind::literal, 0});
  run_start_.push_back(0);
  for (auto& lb : last_break_) lb.push_back(0);
  shifted_.push(0);
  plain_.push(0);
}

void ComplexityProfile::push(Bit b) {
  if (bits_.size() >= std::numeric_limits<std::uint32_t>::max() - 1) {
    throw DomainError("ComplexityProfile: word too long");
  }
  bits_.push_back(b ? 1 : 0);
  const std::size_t j = bits_.size();  // new prefix length
  const std::size_t t = j - 1;         // 0-based index of the new bit

  run_start_.push_back(j >= 2 && bits_[t] == bits_[t - 1] ? run_start_[j - 1] : static_cast<std::uint32_t>(t));
  for (unsigned p = 1; p <= code_v1::kMaxPeriod; ++p) {
    auto& lb = last_break_[p - 1];
    lb.push_back(t >= p && bits_[t] != bits_[t - p] ? static_cast<std::uint32_t>(j) : lb[j - 1]);
  }

  std::int64_t best = std::numeric_limits<std::int64_t>::max();
  Choice choice{0, LeafKind::literal, 0};
  auto consider = [&](std::int64_t cost, std::size_t from, LeafKind kind, unsigned period) {
    if (cost < best) {
      best = cost;
      choice = {static_cast<std::uint32_t>(from), kind, static_cast<std::uint8_t>(period)};
    }
  };
  const auto pair = static_cast<std::int64_t>(code_v1::kPairOverhead);

  // Literal segment of length len = j - i: len + 1 in [2^k, 2^(k+1)).
  for (unsigned k = 1;; ++k) {
    const std::size_t len_lo = (std::size_t{1} << k) - 1;
    if (len_lo > j) break;
    const std::size_t len_hi = std::min(j, (std::size_t{1} << (k + 1)) - 2);
    const std::size_t lo = j - len_hi;
    const std::size_t hi = j - len_lo;
    const std::int64_t m = shifted_.min(lo, hi);
    const auto cost = m + static_cast<std::int64_t>(j + code_v1::kTagBits + 2 * k + 1) + pair;
    if (cost < best) consider(cost, shifted_.argmin(lo, hi), LeafKind::literal, 0);
  }

  // Run segment of length len in [2^k, 2^(k+1)), starting at or after the run start.
  const std::size_t run_from = run_start_[j];
  for (unsigned k = 0;; ++k) {
    const std::size_t len_lo = std::size_t{1} << k;
    if (len_lo > j - run_from) break;
    const std::size_t len_hi = std::min(j - run_from, (std::size_t{1} << (k + 1)) - 1);
    const std::size_t lo = j - len_hi;
    const std::size_t hi = j - len_lo;
    const auto cost = plain_.min(lo, hi) + static_cast<std::int64_t>(code_v1::kTagBits + 1 + 2 * k + 1) + pair;
    if (cost < best) consider(cost, plain_.argmin(lo, hi), LeafKind::run, 0);
  }

  for (unsigned p = 1; p <= code_v1::kMaxPeriod; ++p) {
    const std::size_t v = last_break_[p - 1][j];
    const std::size_t from = v > p ? v - p : 0;
    for (unsigned k = 0;; ++k) {
      const std::size_t len_lo = std::size_t{1} << k;
      if (len_lo > j - from) break;
      const std::size_t len_hi = std::min(j - from, (std::size_t{1} << (k + 1)) - 1);
      const std::size_t lo = j - len_hi;
      const std::size_t hi = j - len_lo;
      const auto cost = plain_.min(lo, hi) +
                        static_cast<std::int64_t>(code_v1::kTagBits + code_v1::kPeriodFieldBits + p + 2 * k + 1) +
                        pair;
      if (cost < best) consider(cost, plain_.argmin(lo, hi), LeafKind::periodic, p);
    }
  }

  best_.push_back(best);
  choice_.push_back(choice);
  shifted_.push(best - static_cast<std::int64_t>(j));
  plain_.push(best);
}

void ComplexityProfile::pop() {
  if (bits_.empty()) throw DomainError("ComplexityProfile::pop on empty word");
  bits_.pop_back();
  best_.pop_back();
  choice_.pop_back();
  run_start_.pop_back();
  for (auto& lb : last_break_) lb.pop_back();
  shifted_.pop();
  plain_.pop();
}

void ComplexityProfile::truncate(std::size_t n) {
  while (bits_.size() > n) pop();
}

std::uint64_t ComplexityProfile::code_length(std::size_t n) const {
  if (n > bits_.size()) throw DomainError("ComplexityProfile: prefix longer than word");
  if (n == 0) return code_v1::kEmptyCost;
  return static_cast<std::uint64_t>(best_[n] - static_cast<std::int64_t>(code_v1::kPairOverhead));
}

std::vector<Leaf> ComplexityProfile::segmentation(std::size_t n) const {
  if (n > bits_.size()) throw DomainError("ComplexityProfile: prefix longer than word");
  std::vector<Leaf> leaves;
  for (std::size_t j = n; j > 0;) {
    const Choice& c = choice_[j];
    leaves.push_back({c.kind, c.from, j, c.period});
    j = c.from;
  }
  std::reverse(leaves.begin(), leaves.end());
  return leaves;
}

// ---- oracles ------------------------------------------------------------------

std::optional<std::uint64_t> brute_force_length(const ComplexityModel& model, const Word& w,
                                                unsigned max_len) {
  if (max_len > 32) throw DomainError("brute_force_length: max_len must be <= 32");
  (void)model;
  std::optional<std::uint64_t> best;
  // Depth-first over candidate codewords; a candidate is extended only while
  // its determined output is still a prefix of w.
  auto explore = [&](auto&& self, std::uint64_t value, unsigned length) -> void {
    if (best && length >= *best) return;
    PackedReader reader{value, length};
    MatchSink sink{w};
    Decoder<PackedReader, MatchSink> decoder(reader, sink);
    const bool complete = decoder.codeword();
    if (decoder.rejected()) return;
    if (complete) {
      if (decoder.consumed() == length && sink.produced == w.size()) best = length;
      return;
    }
    if (length == max_len) return;
    self(self, value << 1U, length + 1);
    self(self, (value << 1U) | 1U, length + 1);
  };
  explore(explore, 0, 0);
  return best;
}

std::vector<std::uint32_t> shortest_codeword_table(const ComplexityModel& model, unsigned max_word_len,
                                                   unsigned max_code_len) {
  if (max_word_len > 20 || max_code_len > 30) throw DomainError("shortest_codeword_table: bounds too large");
  (void)model;
  std::vector<std::uint32_t> table((std::size_t{1} << (max_word_len + 1)) - 1, 0);
  Word output;
  for (unsigned length = 1; length <= max_code_len; ++length) {
    for (std::uint64_t value = 0; value < (std::uint64_t{1} << length); ++value) {
      output = Word{};
      PackedReader reader{value, length};
      WordSink sink{output};
      Decoder<PackedReader, WordSink> decoder(reader, sink);
      if (!decoder.codeword() || decoder.consumed() != length || output.size() > max_word_len) continue;
      std::size_t index = (std::size_t{1} << output.size()) - 1;
      std::size_t bits = 0;
      for (std::size_t i = 0; i < output.size(); ++i) bits = (bits << 1U) | output[i];
      auto& slot = table[index + bits];
      if (slot == 0) slot = length;  // lengths are visited in increasing order
    }
  }
  return table;
}

Rational CodeEnumeration::kraft_sum() const {
  return Rational(kraft_numerator) / Rational(pow2(max_length));
}

CodeEnumeration enumerate_codewords(const ComplexityModel& model, unsigned max_length) {
  if (max_length > 30) throw DomainError("enumerate_codewords: max_length must be <= 30");
  (void)model;
  CodeEnumeration result;
  result.max_length = max_length;
  result.count_by_length.assign(max_length + 1, 0);
  std::uint64_t kraft = 0;
  auto walk = [&](auto&& self, std::uint64_t value, unsigned length, bool below_codeword) -> void {
    PackedReader reader{value, length};
    DiscardSink sink;
    Decoder<PackedReader, DiscardSink> decoder(reader, sink);
    const bool is_codeword = decoder.codeword() && decoder.consumed() == length;
    if (is_codeword) {
      ++result.count_by_length[length];
      kraft += std::uint64_t{1} << (max_length - length);
      if (below_codeword) ++result.prefix_violations;
    }
    if (length == max_length) return;
    self(self, value << 1U, length + 1, below_codeword || is_codeword);
    self(self, (value << 1U) | 1U, length + 1, below_codeword || is_codeword);
  };
  walk(walk, 0, 0, false);
  mpz_class k;
  mpz_import(k.get_mpz_t(), 1, 1, sizeof(kraft), 0, 0, &kraft);
  result.kraft_numerator = k;
  return result;
}

std::vector<Integer> grammar_codeword_counts(unsigned max_length) {
  std::vector<Integer> total(max_length + 1, 0);
  for (unsigned length = 0; length <= max_length; ++length) {
    Integer count = 0;
    for (std::uint64_t n = 0; code_v1::literal_cost(n) <= length; ++n) {
      if (code_v1::literal_cost(n) == length) count += Integer(1) << static_cast<mp_bitcnt_t>(n);
    }
    for (std::uint64_t n = 1; code_v1::run_cost(n) <= length; ++n) {
      if (code_v1::run_cost(n) == length) count += 2;
    }
    for (unsigned p = 1; p <= code_v1::kMaxPeriod; ++p) {
      for (std::uint64_t n = 1; code_v1::periodic_cost(p, n) <= length; ++n) {
        if (code_v1::periodic_cost(p, n) == length) count += Integer(1) << p;
      }
    }
    if (length >= code_v1::kPairOverhead) {
      const unsigned rest = length - static_cast<unsigned>(code_v1::kPairOverhead);
      for (unsigned a = 0; a <= rest; ++a) count += total[a] * total[rest - a];
    }
    total[length] = count;
  }
  return total;
}

// ---- estimators -----------------------------------------------------------------

namespace {

RatioTrace build_trace(const ComplexityModel& model, const SequenceSource& source, std::uint64_t horizon,
                       const Rational& tail_fraction) {
  (void)model;
  if (horizon < 16) throw DomainError("dimension estimate: horizon must be >= 16");
  if (tail_fraction <= 0 || tail_fraction >= 1) throw DomainError("dimension estimate: tail_fraction must be in (0,1)");
  const Word prefix = source.prefix(horizon);
  ComplexityProfile profile;
  RatioTrace trace;
  trace.entries.reserve(horizon);
  for (std::uint64_t n = 1; n <= horizon; ++n) {
    profile.push(prefix[n - 1]);
    const std::uint64_t c = profile.code_length();
    Rational ratio(static_cast<unsigned long>(c), static_cast<unsigned long>(n));
    ratio.canonicalize();
    trace.entries.push_back({n, c, ratio});
  }
  const Integer begin = ceil(tail_fraction * Rational(static_cast<unsigned long>(horizon)));
  trace.tail_begin = std::max<std::uint64_t>(1, begin.get_ui());
  trace.tail_end = horizon;
  bool first = true;
  for (std::uint64_t n = trace.tail_begin; n <= horizon; ++n) {
    const Rational& r = trace.entries[n - 1].ratio;
    if (first || r < trace.running_inf_tail) trace.running_inf_tail = r;
    if (first || r > trace.running_sup_tail) trace.running_sup_tail = r;
    first = false;
  }
  return trace;
}

std::uint64_t first_attaining(const RatioTrace& trace, const Rational& value) {
  for (std::uint64_t n = trace.tail_begin; n <= trace.tail_end; ++n) {
    if (trace.entries[n - 1].ratio == value) return n;
  }
  return 0;
}

}  // namespace

std::pair<DimensionEstimate, DimensionEstimate> dimension_estimates(const ComplexityModel& model,
                                                                    const SequenceSource& source,
                                                                    std::uint64_t horizon,
                                                                    const Rational& tail_fraction) {
  DimensionEstimate low;
  low.trace = build_trace(model, source, horizon, tail_fraction);
  low.value = low.trace.running_inf_tail;
  low.attained_at = first_attaining(low.trace, low.value);
  DimensionEstimate high;
  high.value = low.trace.running_sup_tail;
  high.attained_at = first_attaining(low.trace, high.value);
  high.trace = low.trace;
  return {std::move(low), std::move(high)};
}

DimensionEstimate dim_estimate(const ComplexityModel& model, const SequenceSource& source, std::uint64_t horizon,
                               const Rational& tail_fraction) {
  DimensionEstimate e;
  e.trace = build_trace(model, source, horizon, tail_fraction);
  e.value = e.trace.running_inf_tail;
  e.attained_at = first_attaining(e.trace, e.value);
  return e;
}

DimensionEstimate strong_dim_estimate(const ComplexityModel& model, const SequenceSource& source,
                                      std::uint64_t horizon, const Rational& tail_fraction) {
  DimensionEstimate e;
  e.trace = build_trace(model, source, horizon, tail_fraction);
  e.value = e.trace.running_sup_tail;
  e.attained_at = first_attaining(e.trace, e.value);
  return e;
}

void write_ratio_trace_csv(std::ostream& out, const RatioTrace& trace) {
  out << "n,C,ratio,ratio_float\n";
  for (const auto& e : trace.entries) {
    out << e.n << ',' << e.complexity << ',' << format_rational(e.ratio) << ',' << to_double(e.ratio) << '\n';
  }
}

}  // namespace galekit
