#include <doctest.h>

#include <random>
#include <sstream>

#include "galekit/bitseq.hpp"
#include "galekit/errors.hpp"

using namespace galekit;

namespace {
Word w(const char* s) { return Word::from_string(s); }

Rational generator_mass(const CylinderFamily& f) {
  Rational total = 0;
  for (const auto& g : f.generators()) total += pow2(-static_cast<std::int64_t>(g.size()));
  return total;
}

CylinderFamily unite(std::vector<CylinderFamily> fs) { return cylinder_union(fs); }

// Cylinder membership of every word of length `len`.
std::vector<bool> coverage(const CylinderFamily& f, std::size_t len) {
  std::vector<bool> out;
  Word x = Word::repeat(0, len);
  do {
    out.push_back(f.covers(x));
  } while (next_same_length(x));
  return out;
}
}  // namespace

TEST_CASE("prefix examples") {
  CHECK(SequenceSource::periodic(w("01")).prefix(4) == w("0101"));
  CHECK(SequenceSource::seeded_random(3).prefix(0).empty());
  CHECK(SequenceSource::zeros().prefix(0).empty());
  const auto r = SequenceSource::seeded_random(7);
  const Word long_prefix = r.prefix(16);
  CHECK(r.prefix(8) == long_prefix.prefix(8));
}

TEST_CASE("prefix determinism across interleavings") {
  const auto r = SequenceSource::seeded_random(11);
  const Word a = r.prefix(1000);
  std::vector<Bit> b(1000);
  for (std::size_t i = 1000; i-- > 0;) b[i] = r.bit(i);
  CHECK(Word(b) == a);
  for (std::size_t n : {1, 63, 64, 65, 500}) CHECK(r.prefix(n) == a.prefix(n));
}

TEST_CASE("file-backed source truncates explicitly") {
  const auto f = SequenceSource::file_backed(w("0110"), "mem");
  CHECK(f.prefix(4) == w("0110"));
  CHECK_THROWS_AS(f.prefix(5), TruncationError);
  CHECK_THROWS_AS(f.bit(4), TruncationError);
}

TEST_CASE("word basics") {
  CHECK(w("01").is_prefix_of(w("011")));
  CHECK_FALSE(w("011").is_prefix_of(w("01")));
  CHECK(w("").is_prefix_of(w("1")));
  CHECK(w("0110").count_ones() == 2);
  CHECK(w("01") + w("10") == w("0110"));
  CHECK(shortlex_less(w("1"), w("00")));
  CHECK(shortlex_less(w("00"), w("01")));
  CHECK_THROWS_AS(Word::from_string("012"), DomainError);
}

TEST_CASE("cylinder union examples") {
  auto a = unite({CylinderFamily::from_words({w("0")}), CylinderFamily::from_words({w("1")})});
  CHECK(a.generators() == std::vector<Word>{w("0"), w("1")});
  CHECK(a.measure().to_rational() == 1);
  auto b = unite({CylinderFamily::from_words({w("0")}), CylinderFamily::from_words({w("00")})});
  CHECK(b.generators() == std::vector<Word>{w("0")});
  CHECK(b.measure().to_rational() == Rational(1, 2));
  auto c = unite({CylinderFamily::from_words({w("01")}), CylinderFamily::from_words({w("10")})});
  CHECK(c.measure().to_rational() == Rational(1, 2));
}

TEST_CASE("member examples") {
  CHECK(member(CylinderFamily::from_words({w("01")}), SequenceSource::periodic(w("01"))));
  CHECK_FALSE(member(CylinderFamily::from_words({w("1")}), SequenceSource::zeros()));
  CHECK_FALSE(member(CylinderFamily(), SequenceSource::seeded_random(1)));
}

TEST_CASE("random families: measure exact, union algebra") {
  std::mt19937_64 rng(5);
  auto random_family = [&] {
    std::vector<Word> words;
    const int count = static_cast<int>(rng() % 6);
    for (int i = 0; i < count; ++i) {
      Word x;
      const int len = static_cast<int>(rng() % 9);
      for (int j = 0; j < len; ++j) x.push_back(rng() & 1);
      words.push_back(x);
    }
    return CylinderFamily::from_words(words);
  };
  for (int trial = 0; trial < 200; ++trial) {
    const auto f = random_family();
    const auto g = random_family();
    const auto h = random_family();
    CHECK(f.measure().to_rational() == generator_mass(f));
    for (std::size_t i = 0; i < f.generators().size(); ++i) {
      for (std::size_t j = 0; j < f.generators().size(); ++j) {
        if (i != j) CHECK_FALSE(f.generators()[i].is_prefix_of(f.generators()[j]));
      }
    }
    const auto fg = unite({f, g});
    CHECK(fg.measure().to_rational() == generator_mass(fg));
    CHECK(fg.measure().to_rational() <= f.measure().to_rational() + g.measure().to_rational());
    // Generators differ only in representation; compare as sets of points.
    CHECK(coverage(unite({f, f}), 9) == coverage(f, 9));
    CHECK(coverage(fg, 9) == coverage(unite({g, f}), 9));
    CHECK(coverage(unite({fg, h}), 9) == coverage(unite({f, unite({g, h})}), 9));
  }
}

TEST_CASE("bitstream formats round-trip") {
  const Word bits = SequenceSource::seeded_random(2).prefix(77);
  for (auto format : {BitstreamFormat::ascii, BitstreamFormat::packed}) {
    std::stringstream ss;
    write_bitstream(ss, bits, format);
    CHECK(read_bitstream(ss) == bits);
  }
  std::stringstream spaced(" 0 1\n1\t0 ");
  CHECK(read_bitstream(spaced) == w("0110"));
  std::stringstream bad("01x");
  CHECK_THROWS_AS(read_bitstream(bad), IoError);
}

TEST_CASE("dyadic arithmetic") {
  CHECK((Dyadic(1, 2) + Dyadic(1, 2)).to_rational() == Rational(1, 2));
  CHECK(Dyadic::from_rational(Rational(3, 8)).exponent() == 3);
  CHECK_THROWS_AS(Dyadic::from_rational(Rational(1, 3)), DomainError);
}
