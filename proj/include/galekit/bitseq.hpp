#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "galekit/rational.hpp"

namespace galekit {

using Bit = std::uint8_t;

// A finite binary word, most-significant (first) bit at index 0.
class Word {
 public:
  Word() = default;
  explicit Word(std::vector<Bit> bits);

  // Parses '0'/'1' characters; anything else is a DomainError.
  static Word from_string(std::string_view text);
  static Word repeat(Bit bit, std::size_t count);

  std::size_t size() const { return bits_.size(); }
  bool empty() const { return bits_.empty(); }
  Bit operator[](std::size_t i) const { return bits_[i]; }
  std::span<const Bit> bits() const { return bits_; }

  void push_back(Bit bit) { bits_.push_back(bit ? 1 : 0); }
  void pop_back() { bits_.pop_back(); }
  Word& append(const Word& other);
  void reserve(std::size_t n) { bits_.reserve(n); }

  Word prefix(std::size_t n) const;
  Word suffix_from(std::size_t start) const;
  bool is_prefix_of(const Word& other) const;
  std::size_t count_ones() const;
  std::string to_string() const;

  // Lexicographic with a proper prefix ordered first.
  friend std::strong_ordering operator<=>(const Word&, const Word&) = default;
  friend bool operator==(const Word&, const Word&) = default;

 private:
  std::vector<Bit> bits_;
};

Word operator+(Word a, const Word& b);

// Length first, then lexicographic: the "leftmost of minimal length" order.
bool shortlex_less(const Word& a, const Word& b);

// Advances w to the next word of the same length in lexicographic order.
// Returns false (leaving w all zeros) after the all-ones word.
bool next_same_length(Word& w);

enum class SourceKind { explicit_list, periodic, seeded_random, transformed, file_backed };

std::string_view to_string(SourceKind kind);

// A binary sequence addressed by 0-based index, evaluated lazily. Sources are
// immutable, cheap to copy (shared implementation) and safe to share between
// threads. A source may be finite (file-backed, explicit, or a transform of a
// finite source); reading past its end raises TruncationError.
class SequenceSource {
 public:
  class Impl {
   public:
    virtual ~Impl() = default;
    virtual Bit bit(std::uint64_t index) const = 0;
    virtual std::optional<std::uint64_t> length() const { return std::nullopt; }
    virtual Word prefix(std::size_t n) const;
    virtual std::string describe() const = 0;

   protected:
    void require_available(std::uint64_t n) const;
  };

  SequenceSource(SourceKind kind, std::shared_ptr<const Impl> impl);

  static SequenceSource explicit_bits(Word bits);
  static SequenceSource file_backed(Word bits, std::string path);
  static SequenceSource periodic(Word pattern);
  static SequenceSource zeros();
  static SequenceSource ones();
  // splitmix64 in counter mode: bit i is bit (63 - i mod 64) of
  // mix(seed + (i/64 + 1) * 0x9E3779B97F4A7C15).
  static SequenceSource seeded_random(std::uint64_t seed);
  // Blocks of doubling length: block j covers positions [2^j - 1, 2^(j+1) - 1);
  // even blocks copy the seeded-random source, odd blocks are zero.
  static SequenceSource block_alternating(std::uint64_t seed);
  static SequenceSource transformed(std::string description,
                                    std::optional<std::uint64_t> length,
                                    std::function<Bit(std::uint64_t)> bit_at);

  SourceKind kind() const { return kind_; }
  Bit bit(std::uint64_t index) const { return impl_->bit(index); }
  Word prefix(std::size_t n) const { return impl_->prefix(n); }
  std::optional<std::uint64_t> length() const { return impl_->length(); }
  std::string description() const { return impl_->describe(); }
  // Distinct for every constructed source; copies share it.
  std::uint64_t id() const { return id_; }

 private:
  SourceKind kind_;
  std::shared_ptr<const Impl> impl_;
  std::uint64_t id_;
};

// A dyadic rational numerator / 2^exponent in lowest terms.
class Dyadic {
 public:
  Dyadic() = default;
  Dyadic(Integer numerator, std::uint64_t exponent);
  static Dyadic from_rational(const Rational& value);  // DomainError if not dyadic

  const Integer& numerator() const { return numerator_; }
  std::uint64_t exponent() const { return exponent_; }
  Rational to_rational() const;

  friend Dyadic operator+(const Dyadic& a, const Dyadic& b);
  friend bool operator==(const Dyadic& a, const Dyadic& b) {
    return a.exponent_ == b.exponent_ && a.numerator_ == b.numerator_;
  }

 private:
  void normalize();
  Integer numerator_ = 0;
  std::uint64_t exponent_ = 0;
};

// Finite union of cylinders [w]. Generators are kept sorted and
// prefix-minimal; the measure is exact.
class CylinderFamily {
 public:
  CylinderFamily() = default;
  // Drops every word that extends another one.
  static CylinderFamily from_words(std::vector<Word> words);
  static CylinderFamily full_space() { return from_words({Word{}}); }

  const std::vector<Word>& generators() const { return generators_; }
  const Dyadic& measure() const { return measure_; }
  bool empty() const { return generators_.empty(); }
  std::size_t max_generator_length() const;

  // Some generator is a prefix of w.
  bool covers(const Word& w) const;

 private:
  std::vector<Word> generators_;
  Dyadic measure_;
};

CylinderFamily cylinder_union(std::span<const CylinderFamily> families);
bool member(const CylinderFamily& family, const SequenceSource& source);

// Bitstream files: ASCII '0'/'1' with whitespace ignored, or packed binary
// ("GKBITS01", little-endian u64 bit count, bytes MSB-first).
enum class BitstreamFormat { ascii, packed };

Word read_bitstream(std::istream& in);
void write_bitstream(std::ostream& out, const Word& bits, BitstreamFormat format);

// "-" means stdin.
SequenceSource load_source(const std::string& path);

}  // namespace galekit
