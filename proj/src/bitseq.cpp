#include "galekit/bitseq.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <bit>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

#include "galekit/errors.hpp"

namespace galekit {

// ---- Word ------------------------------------------------------------------

Word::Word(std::vector<Bit> bits) : bits_(std::move(bits)) {
  for (auto& b : bits_) b = b ? 1 : 0;
}

Word Word::from_string(std::string_view text) {
  std::vector<Bit> bits;
  bits.reserve(text.size());
  for (char c : text) {
    if (c == '0' || c == '1') {
      bits.push_back(static_cast<Bit>(c - '0'));
    } else {
      throw DomainError(std::string("not a binary digit: '") + c + "'");
    }
  }
  return Word(std::move(bits));
}

Word Word::repeat(Bit bit, std::size_t count) { return Word(std::vector<Bit>(count, bit ? 1 : 0)); }

Word& Word::append(const Word& other) {
  bits_.insert(bits_.end(), other.bits_.begin(), other.bits_.end());
  return *this;
}

Word Word::prefix(std::size_t n) const {
  if (n > bits_.size()) throw DomainError("Word::prefix longer than the word");
  return Word(std::vector<Bit>(bits_.begin(), bits_.begin() + static_cast<std::ptrdiff_t>(n)));
}

Word Word::suffix_from(std::size_t start) const {
  if (start > bits_.size()) throw DomainError("Word::suffix_from past the end");
  return Word(std::vector<Bit>(bits_.begin() + static_cast<std::ptrdiff_t>(start), bits_.end()));
}

bool Word::is_prefix_of(const Word& other) const {
  return bits_.size() <= other.bits_.size() &&
         std::equal(bits_.begin(), bits_.end(), other.bits_.begin());
}

std::size_t Word::count_ones() const {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), Bit{1}));
}

std::string Word::to_string() const {
  std::string s;
  s.reserve(bits_.size());
  for (Bit b : bits_) s.push_back(b ? '1' : '0');
  return s;
}

Word operator+(Word a, const Word& b) { return a.append(b); }

bool shortlex_less(const Word& a, const Word& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a < b;
}

bool next_same_length(Word& w) {
  // Binary increment from the right.
  std::vector<Bit> bits(w.bits().begin(), w.bits().end());
  for (std::size_t i = bits.size(); i-- > 0;) {
    if (bits[i] == 0) {
      bits[i] = 1;
      w = Word(std::move(bits));
      return true;
    }
    bits[i] = 0;
  }
  w = Word(std::move(bits));
  return false;
}

// ---- SequenceSource --------------------------------------------------------

std::string_view to_string(SourceKind kind) {
  switch (kind) {
    case SourceKind::explicit_list: return "explicit-list";
    case SourceKind::periodic: return "periodic";
    case SourceKind::seeded_random: return "seeded-random";
    case SourceKind::transformed: return "transformed";
    case SourceKind::file_backed: return "file-backed";
  }
  return "unknown";
}

void SequenceSource::Impl::require_available(std::uint64_t n) const {
  const auto len = length();
  if (len && n > *len) {
    throw TruncationError("source '" + describe() + "' holds " + std::to_string(*len) +
                          " bits, " + std::to_string(n) + " requested");
  }
}

Word SequenceSource::Impl::prefix(std::size_t n) const {
  require_available(n);
  std::vector<Bit> bits(n);
  for (std::size_t i = 0; i < n; ++i) bits[i] = bit(i);
  return Word(std::move(bits));
}

namespace {

std::atomic<std::uint64_t> next_source_id{1};

class ExplicitImpl final : public SequenceSource::Impl {
 public:
  ExplicitImpl(Word bits, std::string label) : bits_(std::move(bits)), label_(std::move(label)) {}
  Bit bit(std::uint64_t index) const override {
    require_available(index + 1);
    return bits_[index];
  }
  std::optional<std::uint64_t> length() const override { return bits_.size(); }
  Word prefix(std::size_t n) const override {
    require_available(n);
    return bits_.prefix(n);
  }
  std::string describe() const override { return label_; }

 private:
  Word bits_;
  std::string label_;
};

class PeriodicImpl final : public SequenceSource::Impl {
 public:
  explicit PeriodicImpl(Word pattern) : pattern_(std::move(pattern)) {
    if (pattern_.empty()) throw DomainError("periodic source needs a nonempty pattern");
  }
  Bit bit(std::uint64_t index) const override { return pattern_[index % pattern_.size()]; }
  std::string describe() const override { return "periodic(" + pattern_.to_string() + ")"; }

 private:
  Word pattern_;
};

std::uint64_t splitmix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

class SeededRandomImpl final : public SequenceSource::Impl {
 public:
  explicit SeededRandomImpl(std::uint64_t seed) : seed_(seed) {}
  Bit bit(std::uint64_t index) const override {
    const std::uint64_t block = splitmix64(seed_ + (index / 64 + 1) * 0x9E3779B97F4A7C15ULL);
    return static_cast<Bit>((block >> (63 - index % 64)) & 1U);
  }
  Word prefix(std::size_t n) const override {
    std::vector<Bit> bits(n);
    for (std::size_t base = 0; base < n; base += 64) {
      const std::uint64_t block = splitmix64(seed_ + (base / 64 + 1) * 0x9E3779B97F4A7C15ULL);
      const std::size_t limit = std::min<std::size_t>(64, n - base);
      for (std::size_t j = 0; j < limit; ++j) bits[base + j] = static_cast<Bit>((block >> (63 - j)) & 1U);
    }
    return Word(std::move(bits));
  }
  std::string describe() const override { return "seeded-random(" + std::to_string(seed_) + ")"; }

 private:
  std::uint64_t seed_;
};

class FunctionImpl final : public SequenceSource::Impl {
 public:
  FunctionImpl(std::string description, std::optional<std::uint64_t> length,
               std::function<Bit(std::uint64_t)> fn)
      : description_(std::move(description)), length_(length), fn_(std::move(fn)) {}
  Bit bit(std::uint64_t index) const override {
    require_available(index + 1);
    return fn_(index) ? 1 : 0;
  }
  std::optional<std::uint64_t> length() const override { return length_; }
  std::string describe() const override { return description_; }

 private:
  std::string description_;
  std::optional<std::uint64_t> length_;
  std::function<Bit(std::uint64_t)> fn_;
};

}  // namespace

SequenceSource::SequenceSource(SourceKind kind, std::shared_ptr<const Impl> impl)
    : kind_(kind), impl_(std::move(impl)), id_(next_source_id.fetch_add(1)) {}

SequenceSource SequenceSource::explicit_bits(Word bits) {
  std::string label = "explicit(" + std::to_string(bits.size()) + " bits)";
  return {SourceKind::explicit_list, std::make_shared<ExplicitImpl>(std::move(bits), std::move(label))};
}

SequenceSource SequenceSource::file_backed(Word bits, std::string path) {
  return {SourceKind::file_backed, std::make_shared<ExplicitImpl>(std::move(bits), "file(" + path + ")")};
}

SequenceSource SequenceSource::periodic(Word pattern) {
  return {SourceKind::periodic, std::make_shared<PeriodicImpl>(std::move(pattern))};
}

SequenceSource SequenceSource::zeros() { return periodic(Word::from_string("0")); }
SequenceSource SequenceSource::ones() { return periodic(Word::from_string("1")); }

SequenceSource SequenceSource::seeded_random(std::uint64_t seed) {
  return {SourceKind::seeded_random, std::make_shared<SeededRandomImpl>(seed)};
}

SequenceSource SequenceSource::block_alternating(std::uint64_t seed) {
  auto random = std::make_shared<SeededRandomImpl>(seed);
  return transformed("block-alternating(" + std::to_string(seed) + ")", std::nullopt,
                     [random](std::uint64_t i) -> Bit {
                       const int block = std::bit_width(i + 1) - 1;
                       return block % 2 == 0 ? random->bit(i) : Bit{0};
                     });
}

SequenceSource SequenceSource::transformed(std::string description, std::optional<std::uint64_t> length,
                                           std::function<Bit(std::uint64_t)> bit_at) {
  return {SourceKind::transformed,
          std::make_shared<FunctionImpl>(std::move(description), length, std::move(bit_at))};
}

// ---- Dyadic ----------------------------------------------------------------

Dyadic::Dyadic(Integer numerator, std::uint64_t exponent)
    : numerator_(std::move(numerator)), exponent_(exponent) {
  normalize();
}

void Dyadic::normalize() {
  if (numerator_ == 0) {
    exponent_ = 0;
    return;
  }
  const auto zeros = mpz_scan1(numerator_.get_mpz_t(), 0);
  const auto shift = std::min<std::uint64_t>(zeros, exponent_);
  mpz_fdiv_q_2exp(numerator_.get_mpz_t(), numerator_.get_mpz_t(), shift);
  exponent_ -= shift;
}

Dyadic Dyadic::from_rational(const Rational& value) {
  if (!is_dyadic(value)) throw DomainError("not a dyadic rational: " + format_rational(value));
  const auto exponent = mpz_sizeinbase(value.get_den_mpz_t(), 2) - 1;
  return Dyadic(value.get_num(), exponent);
}

Rational Dyadic::to_rational() const {
  return Rational(numerator_) * pow2(-static_cast<std::int64_t>(exponent_));
}

Dyadic operator+(const Dyadic& a, const Dyadic& b) {
  const std::uint64_t e = std::max(a.exponent_, b.exponent_);
  Integer na;
  Integer nb;
  mpz_mul_2exp(na.get_mpz_t(), a.numerator_.get_mpz_t(), e - a.exponent_);
  mpz_mul_2exp(nb.get_mpz_t(), b.numerator_.get_mpz_t(), e - b.exponent_);
  return Dyadic(na + nb, e);
}

// ---- CylinderFamily --------------------------------------------------------

CylinderFamily CylinderFamily::from_words(std::vector<Word> words) {
  std::sort(words.begin(), words.end());
  CylinderFamily family;
  for (auto& w : words) {
    // In lexicographic order any word covering w is the last kept generator.
    if (!family.generators_.empty() && family.generators_.back().is_prefix_of(w)) continue;
    family.generators_.push_back(std::move(w));
  }
  for (const auto& g : family.generators_) family.measure_ = family.measure_ + Dyadic(1, g.size());
  return family;
}

std::size_t CylinderFamily::max_generator_length() const {
  std::size_t m = 0;
  for (const auto& g : generators_) m = std::max(m, g.size());
  return m;
}

bool CylinderFamily::covers(const Word& w) const {
  auto it = std::upper_bound(generators_.begin(), generators_.end(), w);
  return it != generators_.begin() && std::prev(it)->is_prefix_of(w);
}

CylinderFamily cylinder_union(std::span<const CylinderFamily> families) {
  std::vector<Word> all;
  for (const auto& f : families) all.insert(all.end(), f.generators().begin(), f.generators().end());
  return CylinderFamily::from_words(std::move(all));
}

bool member(const CylinderFamily& family, const SequenceSource& source) {
  if (family.empty()) return false;
  std::size_t n = family.max_generator_length();
  if (const auto len = source.length()) n = std::min<std::size_t>(n, *len);
  const Word head = source.prefix(n);
  for (const auto& g : family.generators()) {
    if (g.is_prefix_of(head)) return true;
  }
  return false;
}

// ---- bitstream I/O ---------------------------------------------------------

namespace {
constexpr std::array<char, 8> kMagic = {'G', 'K', 'B', 'I', 'T', 'S', '0', '1'};
}

Word read_bitstream(std::istream& in) {
  std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("failed reading bitstream");
  if (data.size() >= kMagic.size() && std::equal(kMagic.begin(), kMagic.end(), data.begin())) {
    if (data.size() < 16) throw IoError("packed bitstream: truncated header");
    std::uint64_t count = 0;
    for (int i = 0; i < 8; ++i) {
      count |= static_cast<std::uint64_t>(static_cast<unsigned char>(data[8 + i])) << (8 * i);
    }
    const std::uint64_t bytes = (count + 7) / 8;
    if (data.size() - 16 < bytes) throw IoError("packed bitstream: payload shorter than bit count");
    std::vector<Bit> bits(count);
    for (std::uint64_t i = 0; i < count; ++i) {
      const auto byte = static_cast<unsigned char>(data[16 + i / 8]);
      bits[i] = static_cast<Bit>((byte >> (7 - i % 8)) & 1U);
    }
    return Word(std::move(bits));
  }
  std::vector<Bit> bits;
  bits.reserve(data.size());
  for (char c : data) {
    if (c == '0' || c == '1') {
      bits.push_back(static_cast<Bit>(c - '0'));
    } else if (c != ' ' && c != '\n' && c != '\r' && c != '\t') {
      throw IoError(std::string("ascii bitstream: unexpected character '") + c + "'");
    }
  }
  return Word(std::move(bits));
}

void write_bitstream(std::ostream& out, const Word& bits, BitstreamFormat format) {
  if (format == BitstreamFormat::ascii) {
    out << bits.to_string() << '\n';
  } else {
    out.write(kMagic.data(), kMagic.size());
    const std::uint64_t count = bits.size();
    for (int i = 0; i < 8; ++i) out.put(static_cast<char>((count >> (8 * i)) & 0xFFU));
    std::string payload((count + 7) / 8, '\0');
    for (std::uint64_t i = 0; i < count; ++i) {
      if (bits[i]) payload[i / 8] = static_cast<char>(payload[i / 8] | (0x80 >> (i % 8)));
    }
    out.write(payload.data(), static_cast<std::streamsize>(payload.size()));
  }
  if (!out) throw IoError("failed writing bitstream");
}

SequenceSource load_source(const std::string& path) {
  if (path == "-") return SequenceSource::file_backed(read_bitstream(std::cin), "<stdin>");
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  return SequenceSource::file_backed(read_bitstream(in), path);
}

}  // namespace galekit
