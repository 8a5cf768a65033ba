#include "galekit/gales.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "galekit/errors.hpp"

namespace galekit {

std::string_view to_string(ProcessKind kind) {
  switch (kind) {
    case ProcessKind::martingale: return "martingale";
    case ProcessKind::supermartingale: return "supermartingale";
    case ProcessKind::s_gale: return "s-gale";
    case ProcessKind::s_supergale: return "s-supergale";
  }
  return "unknown";
}

std::string_view to_string(HorizonVerdict verdict) {
  return verdict == HorizonVerdict::witnessed ? "witnessed" : "not-witnessed-at-horizon";
}

// ---- ValuedProcess ----------------------------------------------------------

ValuedProcess::ValuedProcess(std::string name, ProcessKind kind, Rational s, Evaluator evaluate,
                             PathEvaluator along_path)
    : name_(std::move(name)),
      kind_(kind),
      s_(std::move(s)),
      evaluate_(std::move(evaluate)),
      along_path_(std::move(along_path)) {
  if (s_ < 0) throw DomainError("process parameter s must be >= 0");
}

std::vector<GaleValue> ValuedProcess::along(const Word& path) const {
  if (along_path_) return along_path_(path);
  std::vector<GaleValue> out;
  out.reserve(path.size() + 1);
  for (std::size_t n = 0; n <= path.size(); ++n) out.push_back(evaluate_(path.prefix(n)));
  return out;
}

// ---- Martingale -------------------------------------------------------------

Martingale::Martingale(std::shared_ptr<const BettingStrategy> strategy, Rational initial)
    : strategy_(std::move(strategy)), initial_(std::move(initial)) {
  if (initial_ < 0) throw DomainError("martingale initial capital must be >= 0");
}

Rational Martingale::step(const Rational& current, const Word& history, Bit next) const {
  if (current == 0) return current;
  const Rational q = strategy_->stake_on_one(history);
  if (q < 0 || q > 1) throw InvariantViolation(name() + ": stake outside [0,1]");
  return next ? Rational(2 * q * current) : Rational(2 * (1 - q) * current);
}

Rational Martingale::value(const Word& w) const {
  Rational v = initial_;
  Word history;
  history.reserve(w.size());
  for (std::size_t i = 0; i < w.size() && v != 0; ++i) {
    v = step(v, history, w[i]);
    history.push_back(w[i]);
  }
  return v;
}

std::vector<Rational> Martingale::along(const Word& path) const {
  std::vector<Rational> out;
  out.reserve(path.size() + 1);
  out.push_back(initial_);
  Word history;
  history.reserve(path.size());
  for (std::size_t i = 0; i < path.size(); ++i) {
    out.push_back(step(out.back(), history, path[i]));
    history.push_back(path[i]);
  }
  return out;
}

ValuedProcess Martingale::as_process() const {
  auto self = std::make_shared<Martingale>(*this);
  return ValuedProcess(
      name(), ProcessKind::martingale, Rational(1),
      [self](const Word& w) { return GaleValue(self->value(w)); },
      [self](const Word& path) {
        auto values = self->along(path);
        return std::vector<GaleValue>(values.begin(), values.end());
      });
}

namespace {

class PatternStrategy final : public BettingStrategy {
 public:
  explicit PatternStrategy(Word pattern) : pattern_(std::move(pattern)) {
    if (pattern_.empty()) throw DomainError("pattern bettor needs a nonempty pattern");
  }
  Rational stake_on_one(const Word& history) const override {
    return Rational(pattern_[history.size() % pattern_.size()]);
  }
  std::string name() const override { return "pattern:" + pattern_.to_string(); }

 private:
  Word pattern_;
};

class FrequencyStrategy final : public BettingStrategy {
 public:
  explicit FrequencyStrategy(Rational p) : p_(std::move(p)) {
    if (p_ < 0 || p_ > 1) throw DomainError("frequency bettor needs p in [0,1]");
  }
  Rational stake_on_one(const Word&) const override { return p_; }
  std::string name() const override { return "frequency:" + format_rational(p_); }

 private:
  Rational p_;
};

class SelectiveStrategy final : public BettingStrategy {
 public:
  SelectiveStrategy(std::string label, std::function<bool(std::uint64_t)> in_set, Bit favored,
                    Rational stake)
      : label_(std::move(label)), in_set_(std::move(in_set)), favored_(favored), stake_(std::move(stake)) {
    if (stake_ < 0 || stake_ > 1) throw DomainError("selective bettor stake must be in [0,1]");
  }
  Rational stake_on_one(const Word& history) const override {
    if (!in_set_(history.size() + 1)) return Rational(1, 2);
    const Rational toward_one = (1 + stake_) / 2;
    return favored_ ? toward_one : Rational(1 - toward_one);
  }
  std::string name() const override { return "selective:" + label_; }

 private:
  std::string label_;
  std::function<bool(std::uint64_t)> in_set_;
  Bit favored_;
  Rational stake_;
};

}  // namespace

Martingale pattern_bettor(const Word& pattern) {
  return Martingale(std::make_shared<PatternStrategy>(pattern));
}

Martingale frequency_bettor(const Rational& p) {
  return Martingale(std::make_shared<FrequencyStrategy>(p));
}

Martingale fair_martingale() { return frequency_bettor(Rational(1, 2)); }

Martingale selective_bettor(std::string label, std::function<bool(std::uint64_t)> position_in_set,
                            Bit favored, const Rational& stake) {
  return Martingale(
      std::make_shared<SelectiveStrategy>(std::move(label), std::move(position_in_set), favored, stake));
}

// ---- TableMartingale ----------------------------------------------------------

namespace {

std::size_t heap_index(const Word& w) {
  std::size_t index = (std::size_t{1} << w.size()) - 1;
  std::size_t bits = 0;
  for (std::size_t i = 0; i < w.size(); ++i) bits = (bits << 1U) | w[i];
  return index + bits;
}

}  // namespace

TableMartingale TableMartingale::random(std::mt19937_64& rng, unsigned depth, const Rational& initial) {
  if (depth > 24) throw DomainError("TableMartingale depth must be <= 24");
  auto values = std::make_shared<std::vector<Rational>>((std::size_t{1} << (depth + 1)) - 1);
  (*values)[0] = initial;
  std::uniform_int_distribution<int> denominator(1, 8);
  const std::size_t internal = (std::size_t{1} << depth) - 1;
  for (std::size_t i = 0; i < internal; ++i) {
    const int b = denominator(rng);
    const int a = std::uniform_int_distribution<int>(0, b)(rng);
    Rational ratio(a, b);
    ratio.canonicalize();
    const Rational total = 2 * (*values)[i];
    (*values)[2 * i + 1] = total * ratio;
    (*values)[2 * i + 2] = total - (*values)[2 * i + 1];
  }
  TableMartingale t;
  t.depth_ = depth;
  t.values_ = std::move(values);
  return t;
}

const Rational& TableMartingale::value(const Word& w) const {
  if (w.size() <= depth_) return (*values_)[heap_index(w)];
  return (*values_)[heap_index(w.prefix(depth_))];
}

ValuedProcess TableMartingale::as_process(std::string name) const {
  auto self = std::make_shared<TableMartingale>(*this);
  return ValuedProcess(std::move(name), ProcessKind::martingale, Rational(1),
                       [self](const Word& w) { return GaleValue(self->value(w)); });
}

// ---- mixture ----------------------------------------------------------------

MixtureSupermartingale::MixtureSupermartingale(std::vector<Martingale> components)
    : components_(std::move(components)) {
  if (components_.size() > 4096) throw DomainError("mixture: too many components");
}

Rational MixtureSupermartingale::weight(std::size_t index) const {
  return pow2(-static_cast<std::int64_t>(index + 1));
}

Rational MixtureSupermartingale::value(const Word& w) const {
  Rational total = 0;
  for (std::size_t k = 0; k < components_.size(); ++k) total += weight(k) * components_[k].value(w);
  return total;
}

std::vector<Rational> MixtureSupermartingale::along(const Word& path) const {
  std::vector<Rational> total(path.size() + 1, Rational(0));
  std::vector<Rational> current;
  current.reserve(components_.size());
  for (std::size_t k = 0; k < components_.size(); ++k) current.push_back(components_[k].initial());
  Word history;
  history.reserve(path.size());
  for (std::size_t n = 0;; ++n) {
    for (std::size_t k = 0; k < components_.size(); ++k) total[n] += weight(k) * current[k];
    if (n == path.size()) break;
    for (std::size_t k = 0; k < components_.size(); ++k) {
      current[k] = components_[k].step(current[k], history, path[n]);
    }
    history.push_back(path[n]);
  }
  return total;
}

ValuedProcess MixtureSupermartingale::as_process() const {
  auto self = std::make_shared<MixtureSupermartingale>(*this);
  return ValuedProcess(
      "mixture", ProcessKind::supermartingale, Rational(1),
      [self](const Word& w) { return GaleValue(self->value(w)); },
      [self](const Word& path) {
        auto values = self->along(path);
        return std::vector<GaleValue>(values.begin(), values.end());
      });
}

MixtureSupermartingale make_mixture(std::vector<Martingale> components) {
  for (const auto& c : components) {
    if (c.initial() != 1) {
      throw DomainError("mixture component '" + c.name() + "' is not normalized to d(lambda) = 1");
    }
  }
  return MixtureSupermartingale(std::move(components));
}

std::vector<Martingale> default_catalog() {
  std::vector<Martingale> catalog;
  for (const char* p : {"0", "1", "01", "10", "001", "010", "100", "011", "101", "110"}) {
    catalog.push_back(pattern_bettor(Word::from_string(p)));
  }
  for (const Rational& p : {Rational(1, 4), Rational(1, 3), Rational(1, 2), Rational(2, 3), Rational(3, 4)}) {
    catalog.push_back(frequency_bettor(p));
  }
  catalog.push_back(selective_bettor(
      "powers-of-two", [](std::uint64_t pos) { return (pos & (pos - 1)) == 0; }, 0, Rational(1, 2)));
  catalog.push_back(
      selective_bettor("even-positions", [](std::uint64_t pos) { return pos % 2 == 0; }, 0, Rational(1, 2)));
  return catalog;
}

MixtureSupermartingale catalog_mixture() { return make_mixture(default_catalog()); }

// ---- averaging ----------------------------------------------------------------

namespace {

bool is_gale_kind(ProcessKind kind) {
  return kind == ProcessKind::s_gale || kind == ProcessKind::s_supergale;
}

bool requires_equality(ProcessKind kind) {
  return kind == ProcessKind::martingale || kind == ProcessKind::s_gale;
}

}  // namespace

AveragingReport check_averaging(const ValuedProcess& process, unsigned depth, unsigned max_depth) {
  if (depth > max_depth) {
    throw DomainError("check_averaging: depth " + std::to_string(depth) + " exceeds maximum " +
                      std::to_string(max_depth));
  }
  const Rational parent_exponent = is_gale_kind(process.kind()) ? process.s() : Rational(1);
  AveragingReport report;

  auto checked_value = [&](const Word& w) {
    GaleValue v = process(w);
    if (v.sign() < 0) {
      throw InvariantViolation(process.name() + " is negative at '" + w.to_string() + "'");
    }
    return v;
  };

  // Level-order walk; values of the current level are reused as parents.
  std::vector<Word> level{Word{}};
  std::vector<GaleValue> level_values{checked_value(Word{})};
  for (unsigned length = 0; length < depth; ++length) {
    std::vector<Word> next_level;
    std::vector<GaleValue> next_values;
    next_level.reserve(level.size() * 2);
    next_values.reserve(level.size() * 2);
    for (std::size_t i = 0; i < level.size(); ++i) {
      Word w0 = level[i];
      w0.push_back(0);
      Word w1 = level[i];
      w1.push_back(1);
      GaleValue v0 = checked_value(w0);
      GaleValue v1 = checked_value(w1);
      const GaleValue parent = level_values[i].times_power_of_two(parent_exponent);
      const GaleValue children = v0 + v1;
      ++report.words_checked;
      const bool violated = requires_equality(process.kind()) ? !(parent == children) : parent < children;
      if (violated) report.violations.push_back({level[i], parent, children});
      if (parent.sign() > 0 && children.sign() > 0) {
        report.max_log2_residual =
            std::max(report.max_log2_residual, std::fabs(parent.log2() - children.log2()));
      }
      next_level.push_back(std::move(w0));
      next_level.push_back(std::move(w1));
      next_values.push_back(std::move(v0));
      next_values.push_back(std::move(v1));
    }
    level = std::move(next_level);
    level_values = std::move(next_values);
  }
  return report;
}

ValuedProcess to_s_gale(const ValuedProcess& d, const Rational& s) {
  if (s < 0) throw DomainError("to_s_gale: s must be >= 0");
  ProcessKind kind;
  if (d.kind() == ProcessKind::martingale) {
    kind = ProcessKind::s_gale;
  } else if (d.kind() == ProcessKind::supermartingale) {
    kind = ProcessKind::s_supergale;
  } else {
    throw DomainError("to_s_gale expects a martingale or supermartingale");
  }
  const Rational rate = s - 1;
  return ValuedProcess(
      d.name() + "^(" + format_rational(s) + ")", kind, s,
      [d, rate](const Word& w) {
        return d(w).times_power_of_two(rate * Rational(static_cast<unsigned long>(w.size())));
      },
      [d, rate](const Word& path) {
        auto values = d.along(path);
        for (std::size_t n = 0; n < values.size(); ++n) {
          values[n] = values[n].times_power_of_two(rate * Rational(static_cast<unsigned long>(n)));
        }
        return values;
      });
}

GaleValue level_mass(const ValuedProcess& process, unsigned n) {
  if (n > 24) throw DomainError("level_mass: n must be <= 24");
  const Rational scale_exponent =
      -(is_gale_kind(process.kind()) ? process.s() : Rational(1)) * Rational(static_cast<unsigned long>(n));
  GaleValue total;
  Word w = Word::repeat(0, n);
  do {
    total += process(w);
  } while (next_same_length(w));
  return total.times_power_of_two(scale_exponent);
}

// ---- orders -----------------------------------------------------------------

Order standard_order(const Rational& s) {
  if (s < 0) throw DomainError("standard_order: s must be >= 0");
  if (s >= 1) throw DomainError("standard_order: s must be < 1 for the order to be unbounded");
  const Rational rate = 1 - s;
  return Order("h_" + format_rational(s), [rate](std::uint64_t n) {
    return GaleValue::power_term(Rational(1), rate * Rational(static_cast<unsigned long>(n)));
  });
}

Order linear_order() {
  return Order("n", [](std::uint64_t n) { return GaleValue(Rational(static_cast<unsigned long>(n))); });
}

bool spot_check_order(const Order& h, std::uint64_t horizon) {
  GaleValue previous = h(1);
  if (previous.sign() <= 0) return false;
  bool grew = false;
  for (std::uint64_t n = 2; n <= horizon; ++n) {
    GaleValue current = h(n);
    if (current < previous) return false;
    if (current > previous) grew = true;
    previous = std::move(current);
  }
  return grew;
}

OrderSuccessReport order_success(const ValuedProcess& d, const Order& h, const SequenceSource& source,
                                 std::uint64_t horizon) {
  if (horizon < 1) throw DomainError("order_success: horizon must be >= 1");
  const auto values = d.along(source.prefix(horizon));
  OrderSuccessReport report;
  report.horizon = horizon;
  report.trace.reserve(horizon);
  const GaleValue one(1);
  for (std::uint64_t n = 1; n <= horizon; ++n) {
    GaleValue hn = h(n);
    if (!hn.is_single_term() || hn.sign() <= 0) {
      throw InvariantViolation("order '" + h.name() + "' must be a positive single term");
    }
    GaleValue ratio = values[n].divided_by(hn);
    if (n == 1 || ratio > report.max_ratio) {
      report.max_ratio = ratio;
      report.argmax_n = n;
    }
    if (ratio >= one) {
      ++report.witnessed_count;
      report.last_witness = n;
    }
    report.trace.push_back({n, values[n], std::move(hn), std::move(ratio)});
  }
  report.verdict = report.witnessed_count > 0 ? HorizonVerdict::witnessed : HorizonVerdict::not_witnessed_at_horizon;
  return report;
}

StrongSuccessReport strong_success(const ValuedProcess& d, const SequenceSource& source, std::uint64_t horizon,
                                   const Rational& threshold) {
  if (horizon < 1) throw DomainError("strong_success: horizon must be >= 1");
  const auto values = d.along(source.prefix(horizon));
  StrongSuccessReport report;
  report.window_begin = horizon / 2;
  report.window_end = horizon;
  for (std::uint64_t n = report.window_begin; n <= horizon; ++n) {
    if (n == report.window_begin || values[n] < report.tail_min) {
      report.tail_min = values[n];
      report.argmin_n = n;
    }
  }
  report.consistent = report.tail_min >= GaleValue(threshold);
  return report;
}

void write_gale_trace_csv(std::ostream& out, const OrderSuccessReport& report) {
  out << "n,value,h,ratio,value_float,ratio_float\n";
  for (const auto& row : report.trace) {
    out << row.n << ',' << row.value.to_string() << ',' << row.order_value.to_string() << ','
        << row.ratio.to_string() << ',' << row.value.to_double() << ',' << row.ratio.to_double() << '\n';
  }
}

}  // namespace galekit
