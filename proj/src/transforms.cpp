#include "galekit/transforms.hpp"

#include <memory>

#include "galekit/errors.hpp"

namespace galekit {
namespace {

// sum_{i=0}^{n-1} floor((a i + b) / m), for m >= 1 and a, b >= 0.
Integer floor_sum(Integer n, Integer m, Integer a, Integer b) {
  Integer total = 0;
  for (;;) {
    if (a >= m) {
      total += n * (n - 1) / 2 * (a / m);
      a %= m;
    }
    if (b >= m) {
      total += n * (b / m);
      b %= m;
    }
    const Integer y_max = a * n + b;
    if (y_max < m) break;
    n = y_max / m;
    b = y_max % m;
    std::swap(m, a);
  }
  return total;
}

Integer square(std::uint64_t n) {
  Integer v(static_cast<unsigned long>(n));
  return v * v;
}

std::uint64_t to_u64(const Integer& v) {
  if (v < 0 || !v.fits_ulong_p()) throw DomainError("position exceeds 64 bits");
  return v.get_ui();
}

std::uint64_t isqrt(std::uint64_t v) {
  Integer r;
  mpz_sqrt(r.get_mpz_t(), Integer(static_cast<unsigned long>(v)).get_mpz_t());
  return r.get_ui();
}

class DilutedImpl final : public SequenceSource::Impl {
 public:
  DilutedImpl(DilutionPlan plan, SequenceSource source)
      : plan_(std::move(plan)), source_(std::move(source)) {
    if (const auto len = source_.length()) length_ = to_u64(plan_.diluted_length(*len));
  }

  Bit bit(std::uint64_t index) const override {
    require_available(index + 1);
    const std::uint64_t n = plan_.block_at(Integer(static_cast<unsigned long>(index)));
    const std::uint64_t offset = index - to_u64(plan_.block_offset(n));
    if (offset >= DilutionPlan::block_length(n)) return 0;
    return source_.bit(to_u64(square(n - 1)) + offset);
  }

  std::optional<std::uint64_t> length() const override { return length_; }

  Word prefix(std::size_t count) const override {
    require_available(count);
    // Walks the blocks in order instead of locating each bit.
    Word out;
    out.reserve(count);
    std::uint64_t consumed = 0;
    for (std::uint64_t n = 1; out.size() < count; ++n) {
      const std::uint64_t x = DilutionPlan::block_length(n);
      for (std::uint64_t t = 0; t < x && out.size() < count; ++t) out.push_back(source_.bit(consumed++));
      const std::uint64_t y = plan_.pad_length(n);
      for (std::uint64_t t = 0; t < y && out.size() < count; ++t) out.push_back(0);
    }
    return out;
  }

  std::string describe() const override {
    return "dilute(" + format_rational(plan_.alpha()) + "," + std::string(to_string(plan_.rule())) + "," +
           source_.description() + ")";
  }

 private:
  DilutionPlan plan_;
  SequenceSource source_;
  std::optional<std::uint64_t> length_;
};

class UndilutedImpl final : public SequenceSource::Impl {
 public:
  UndilutedImpl(DilutionPlan plan, SequenceSource diluted)
      : plan_(std::move(plan)), diluted_(std::move(diluted)) {
    if (const auto len = diluted_.length()) {
      // Count source bits whose stream position lies before the end.
      std::uint64_t lo = 0;
      std::uint64_t hi = *len;  // at most one source bit per stream bit
      while (lo < hi) {
        const std::uint64_t mid = lo + (hi - lo + 1) / 2;
        if (plan_.position_of_source_bit(mid - 1) < Integer(static_cast<unsigned long>(*len))) {
          lo = mid;
        } else {
          hi = mid - 1;
        }
      }
      length_ = lo;
    }
  }

  Bit bit(std::uint64_t index) const override {
    require_available(index + 1);
    return diluted_.bit(to_u64(plan_.position_of_source_bit(index)));
  }

  std::optional<std::uint64_t> length() const override { return length_; }

  Word prefix(std::size_t count) const override {
    require_available(count);
    Word out;
    out.reserve(count);
    if (count == 0) return out;
    const std::uint64_t last = to_u64(plan_.position_of_source_bit(count - 1));
    const Word stream = diluted_.prefix(last + 1);
    std::uint64_t pos = 0;
    for (std::uint64_t n = 1; out.size() < count; ++n) {
      const std::uint64_t x = DilutionPlan::block_length(n);
      for (std::uint64_t t = 0; t < x && out.size() < count; ++t) out.push_back(stream[pos++]);
      pos += plan_.pad_length(n);
    }
    return out;
  }

  std::string describe() const override {
    return "undilute(" + format_rational(plan_.alpha()) + "," + diluted_.description() + ")";
  }

 private:
  DilutionPlan plan_;
  SequenceSource diluted_;
  std::optional<std::uint64_t> length_;
};

}  // namespace

std::string_view to_string(PadRule rule) { return rule == PadRule::index_scaled ? "index-scaled" : "block-scaled"; }

PadRule parse_pad_rule(std::string_view text) {
  if (text == "index-scaled") return PadRule::index_scaled;
  if (text == "block-scaled") return PadRule::block_scaled;
  throw DomainError("unknown pad rule '" + std::string(text) + "' (index-scaled, block-scaled)");
}

DilutionPlan::DilutionPlan(Rational alpha, PadRule rule) : alpha_(std::move(alpha)), rule_(rule) {
  if (alpha_ <= 0 || alpha_ >= 1) throw DomainError("alpha must lie strictly between 0 and 1");
  const Rational ratio = (1 - alpha_) / alpha_;
  const Integer a = ratio.get_num();
  const Integer b = ratio.get_den();
  if (!a.fits_ulong_p() || !b.fits_ulong_p() || a > (Integer(1) << 30) || b > (Integer(1) << 30)) {
    throw DomainError("alpha has too large a numerator or denominator");
  }
  // ceil(c a / b) = floor((c a + b - 1) / b) with c = n or c = 2n - 1.
  slope_ = (rule_ == PadRule::index_scaled ? 1 : 2) * a.get_ui();
  intercept_ = a.get_ui() + b.get_ui() - 1;
  denominator_ = b.get_ui();
}

std::uint64_t DilutionPlan::pad_length(std::uint64_t n) const {
  if (n == 0) throw DomainError("blocks are numbered from 1");
  return (slope_ * (n - 1) + intercept_) / denominator_;
}

Integer DilutionPlan::pad_total(std::uint64_t n) const {
  return floor_sum(Integer(static_cast<unsigned long>(n)), Integer(static_cast<unsigned long>(denominator_)),
                   Integer(static_cast<unsigned long>(slope_)), Integer(static_cast<unsigned long>(intercept_)));
}

Integer DilutionPlan::block_offset(std::uint64_t n) const {
  if (n == 0) throw DomainError("blocks are numbered from 1");
  return square(n - 1) + pad_total(n - 1);
}

std::uint64_t DilutionPlan::block_at(const Integer& pos) const {
  // block_offset(n) >= (n-1)^2, so n <= sqrt(pos) + 1.
  Integer root;
  mpz_sqrt(root.get_mpz_t(), pos.get_mpz_t());
  std::uint64_t lo = 1;
  std::uint64_t hi = to_u64(root) + 1;
  while (lo < hi) {
    const std::uint64_t mid = lo + (hi - lo + 1) / 2;
    if (block_offset(mid) <= pos) {
      lo = mid;
    } else {
      hi = mid - 1;
    }
  }
  return lo;
}

Integer DilutionPlan::position_of_source_bit(std::uint64_t i) const {
  const std::uint64_t n = isqrt(i) + 1;  // (n-1)^2 <= i < n^2
  return block_offset(n) + Integer(static_cast<unsigned long>(i)) - square(n - 1);
}

Integer DilutionPlan::diluted_length(std::uint64_t source_bits) const {
  if (source_bits == 0) return 0;
  return position_of_source_bit(source_bits - 1) + 1;
}

SequenceSource dilute(const Rational& alpha, const SequenceSource& source, PadRule rule) {
  return {SourceKind::transformed, std::make_shared<DilutedImpl>(DilutionPlan(alpha, rule), source)};
}

SequenceSource undilute(const Rational& alpha, const SequenceSource& diluted, PadRule rule) {
  return {SourceKind::transformed, std::make_shared<UndilutedImpl>(DilutionPlan(alpha, rule), diluted)};
}

// ---- selection ----------------------------------------------------------------

bool is_power_of_two_position(std::uint64_t position) {
  return position != 0 && (position & (position - 1)) == 0;
}

SelectionRule rule_all() {
  return SelectionRule("all", [](const Word&) { return true; });
}

SelectionRule rule_even() {
  return SelectionRule("even", [](const Word& w) { return w.size() % 2 == 0; });
}

SelectionRule rule_powers_of_two() {
  return SelectionRule("powers-of-two", [](const Word& w) { return is_power_of_two_position(w.size() + 1); });
}

SelectionRule rule_positions(std::string name, std::function<bool(std::uint64_t)> position_in_set) {
  return SelectionRule(std::move(name),
                       [in_set = std::move(position_in_set)](const Word& w) { return in_set(w.size() + 1); });
}

SelectionRule parse_rule(std::string_view name) {
  if (name == "all") return rule_all();
  if (name == "even") return rule_even();
  if (name == "powers-of-two") return rule_powers_of_two();
  throw DomainError("unknown selection rule '" + std::string(name) + "' (all, even, powers-of-two)");
}

Word apply_selection(const SelectionRule& rule, const Word& w) {
  Word selected;
  Word history;
  history.reserve(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (rule(history)) selected.push_back(w[i]);
    history.push_back(w[i]);
  }
  return selected;
}

SelectionReport select_subsequence(const SelectionRule& rule, const SequenceSource& source, std::uint64_t horizon) {
  if (horizon < 1) throw DomainError("select: horizon must be >= 1");
  const Word prefix = source.prefix(horizon);
  SelectionReport report;
  Word history;
  history.reserve(horizon);
  for (std::uint64_t m = 1; m <= horizon; ++m) {
    if (rule(history)) report.selected.push_back(prefix[m - 1]);
    history.push_back(prefix[m - 1]);
    const Rational ratio(static_cast<unsigned long>(report.selected.size()), static_cast<unsigned long>(m));
    if (m == 1 || ratio < report.min_ratio) {
      report.min_ratio = ratio;
      report.argmin_m = m;
    }
  }
  return report;
}

StochasticityVerdict stochasticity_check(const Word& selected, const Rational& tolerance) {
  if (selected.empty()) throw DomainError("stochasticity check needs a nonempty word");
  if (tolerance < 0) throw DomainError("tolerance must be >= 0");
  StochasticityVerdict v;
  v.frequency = Rational(static_cast<unsigned long>(selected.count_ones()), static_cast<unsigned long>(selected.size()));
  v.deviation = abs(v.frequency - Rational(1, 2));
  v.pass = v.deviation <= tolerance;
  return v;
}

SequenceSource remove_sparse(const SequenceSource& source, std::string name,
                             std::function<bool(std::uint64_t)> position_in_set) {
  return SequenceSource::transformed("remove(" + name + "," + source.description() + ")", source.length(),
                                     [source, in_set = std::move(position_in_set)](std::uint64_t i) -> Bit {
                                       return in_set(i + 1) ? Bit{0} : source.bit(i);
                                     });
}

}  // namespace galekit
