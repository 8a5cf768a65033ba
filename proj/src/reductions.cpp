#include "galekit/reductions.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <memory>
#include <ostream>
#include <sstream>

#include <json.hpp>

namespace galekit {

// ---- LevelOracle ------------------------------------------------------------------

LevelOracle::LevelOracle(std::string name, Fn contains) : name_(std::move(name)), contains_(std::move(contains)) {
  if (!contains_) throw DomainError("LevelOracle needs a predicate");
  for (unsigned length = 0; length <= 6; ++length) {
    Word w = Word::repeat(0, length);
    do {
      for (std::uint64_t k = 1; k <= 12; ++k) {
        for (std::uint64_t t = 1; t < 12; ++t) {
          if (contains_(k, t + 1, w) && !contains_(k, t, w)) {
            throw InvariantViolation("oracle '" + name_ + "' is not anti-monotone: O(" + std::to_string(k) + "," +
                                     std::to_string(t + 1) + ") contains [" + w.to_string() + "] but O(" +
                                     std::to_string(k) + "," + std::to_string(t) + ") does not");
          }
        }
      }
    } while (next_same_length(w));
  }
}

LevelOracle LevelOracle::always_true() {
  return LevelOracle("true", [](std::uint64_t, std::uint64_t, const Word&) { return true; });
}

LevelOracle LevelOracle::always_false() {
  return LevelOracle("false", [](std::uint64_t, std::uint64_t, const Word&) { return false; });
}

LevelOracle LevelOracle::only_level(std::uint64_t k0) {
  return LevelOracle("only-" + std::to_string(k0),
                     [k0](std::uint64_t k, std::uint64_t, const Word&) { return k == k0; });
}

LevelOracle LevelOracle::from_stream(std::istream& in, std::string name) {
  struct Entry {
    std::uint64_t max_t;
    Word pattern;
  };
  std::multimap<std::uint64_t, Entry> entries;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::string k_text;
    if (!(fields >> k_text)) continue;
    std::string t_text;
    std::string pattern;
    std::string extra;
    if (!(fields >> t_text >> pattern) || (fields >> extra)) {
      throw IoError(name + ":" + std::to_string(line_number) + ": expected 'k max_t pattern'");
    }
    try {
      const std::uint64_t k = std::stoull(k_text);
      const std::uint64_t max_t = std::stoull(t_text);
      if (k == 0) throw IoError(name + ":" + std::to_string(line_number) + ": levels start at 1");
      entries.emplace(k, Entry{max_t, pattern == "-" ? Word{} : Word::from_string(pattern)});
    } catch (const std::logic_error&) {
      throw IoError(name + ":" + std::to_string(line_number) + ": malformed oracle line");
    }
  }
  if (in.bad()) throw IoError("cannot read oracle " + name);
  auto shared = std::make_shared<const decltype(entries)>(std::move(entries));
  return LevelOracle(std::move(name), [shared](std::uint64_t k, std::uint64_t t, const Word& w) {
    const auto [lo, hi] = shared->equal_range(k);
    for (auto it = lo; it != hi; ++it) {
      if (t <= it->second.max_t && it->second.pattern.is_prefix_of(w)) return true;
    }
    return false;
  });
}

LevelOracle LevelOracle::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open oracle file '" + path + "'");
  return from_stream(in, path);
}

LevelOracle LevelOracle::parse(const std::string& text) {
  if (text == "true") return always_true();
  if (text == "false") return always_false();
  return from_file(text);
}

std::uint64_t stage_level(const LevelOracle& oracle, std::uint64_t k, const Word& x_prefix, std::uint64_t s) {
  if (x_prefix.size() < s) throw DomainError("stage_level: need " + std::to_string(s) + " bits of X");
  const Word w = x_prefix.prefix(s);
  for (std::uint64_t t = s; t >= 1; --t) {
    if (oracle.contains(k, t, w)) return t;
  }
  return 0;
}

std::optional<std::uint64_t> expansionary(const LevelOracle& oracle, const Word& x_prefix, std::uint64_t s) {
  if (s < 1) throw DomainError("expansionary: stages start at 1");
  for (std::uint64_t k = 1; k <= s; ++k) {
    if (stage_level(oracle, k, x_prefix, s - 1) < stage_level(oracle, k, x_prefix, s)) return k;
  }
  return std::nullopt;
}

std::string_view to_string(SearchOutcome outcome) {
  switch (outcome) {
    case SearchOutcome::found: return "found";
    case SearchOutcome::not_needed: return "not-needed";
    case SearchOutcome::witness_not_found: return "witness-not-found";
  }
  return "unknown";
}

// ---- StagedWord -------------------------------------------------------------------

void StagedWord::append_bits(const Word& bits) {
  if (bits.empty()) return;
  const Integer count(static_cast<unsigned long>(bits.size()));
  segments_.push_back({length_, count, bits});
  length_ += count;
}

void StagedWord::append_zeros(const Integer& count) {
  if (count < 0) throw DomainError("StagedWord: negative pad");
  if (count == 0) return;
  segments_.push_back({length_, count, Word{}});
  length_ += count;
}

Word StagedWord::materialize(std::uint64_t n) const {
  Word out;
  const Integer limit = std::min(length_, Integer(static_cast<unsigned long>(n)));
  const std::uint64_t target = limit.get_ui();
  out.reserve(target);
  for (const auto& seg : segments_) {
    if (out.size() >= target) break;
    const std::uint64_t room = target - out.size();
    const std::uint64_t take = seg.length < room ? seg.length.get_ui() : room;
    for (std::uint64_t i = 0; i < take; ++i) out.push_back(seg.bits.empty() ? Bit{0} : seg.bits[i]);
  }
  return out;
}

SequenceSource StagedWord::source(std::string description) const {
  std::optional<std::uint64_t> length;
  if (length_.fits_ulong_p()) length = length_.get_ui();
  auto segments = std::make_shared<const std::vector<Segment>>(segments_);
  return SequenceSource::transformed(std::move(description), length, [segments](std::uint64_t i) -> Bit {
    const Integer index(static_cast<unsigned long>(i));
    auto it = std::upper_bound(segments->begin(), segments->end(), index,
                               [](const Integer& v, const Segment& seg) { return v < seg.start; });
    if (it == segments->begin()) return 0;
    --it;
    if (it->bits.empty() || index >= it->start + it->length) return 0;
    return it->bits[Integer(index - it->start).get_ui()];
  });
}

// ---- DIM^1 transducer -------------------------------------------------------------

namespace {

constexpr std::size_t kShortWord = 256;

std::string short_text(const Word& w) { return w.size() <= kShortWord ? w.to_string() : std::string{}; }

// Mixture state along a growing word.
class MixtureWalker {
 public:
  explicit MixtureWalker(const MixtureSupermartingale& mixture) : mixture_(mixture) {
    frames_.emplace_back();
    for (const auto& c : mixture_.components()) frames_.back().push_back(c.initial());
  }

  void push(Bit b) {
    std::vector<Rational> next(frames_.back().size());
    const auto& components = mixture_.components();
    for (std::size_t k = 0; k < next.size(); ++k) next[k] = components[k].step(frames_.back()[k], word_, b);
    frames_.push_back(std::move(next));
    word_.push_back(b);
  }

  void pop() {
    frames_.pop_back();
    word_.pop_back();
  }

  Rational value() const {
    Rational sum = 0;
    for (std::size_t k = 0; k < frames_.back().size(); ++k) sum += mixture_.weight(k) * frames_.back()[k];
    return sum;
  }

  const Word& word() const { return word_; }

 private:
  const MixtureSupermartingale& mixture_;
  Word word_;
  std::vector<std::vector<Rational>> frames_;
};

// Visits the extensions of the walker's word of exactly `length` more bits in
// lexicographic order, skipping any whose interior steps fail `interior_ok`.
// visit() returns true to stop. Returns true when stopped.
template <class InteriorOk, class Visit>
bool for_each_extension(MixtureWalker& walker, std::size_t length, const InteriorOk& interior_ok,
                        const Visit& visit) {
  if (length == 0) return visit();
  for (Bit b : {Bit{0}, Bit{1}}) {
    const Rational before = length > 1 ? walker.value() : Rational(0);
    walker.push(b);
    const bool proceed = length == 1 || interior_ok(before, walker.value());
    const bool stop = proceed && for_each_extension(walker, length - 1, interior_ok, visit);
    walker.pop();
    if (stop) return true;
  }
  return false;
}

}  // namespace

ReductionResult wadge_dim1(const LevelOracle& oracle, const SequenceSource& x, std::uint64_t stages,
                           const MixtureSupermartingale& mixture, std::uint64_t budget) {
  if (mixture.empty()) throw DomainError("wadge_dim1 needs a nonempty mixture");
  ReductionResult result;
  if (stages == 0) return result;
  const Word x_prefix = x.prefix(stages);
  MixtureWalker walker(mixture);
  auto no_constraint = [](const Rational&, const Rational&) { return true; };
  auto nonincreasing = [](const Rational& before, const Rational& after) { return after <= before; };

  for (std::uint64_t s = 1; s <= stages; ++s) {
    StageRecord rec;
    rec.variant = "dim1";
    rec.s = s;
    rec.k = expansionary(oracle, x_prefix, s);
    const std::size_t previous = walker.word().size();
    rec.previous_length = static_cast<unsigned long>(previous);

    // Substage (a).
    Word sigma_ext;
    if (rec.k) {
      bool found = false;
      std::uint64_t candidates = 0;
      for (std::size_t extra = 0; !found && candidates < budget; ++extra) {
        for_each_extension(walker, extra, no_constraint, [&] {
          if (++candidates > budget) return true;
          const Rational v = walker.value();
          const Rational exponent(static_cast<unsigned long>(walker.word().size()), static_cast<unsigned long>(*rec.k));
          if (compare_with_power_of_two(v, exponent) != std::strong_ordering::less) {
            found = true;
            sigma_ext = walker.word().suffix_from(previous);
            return true;
          }
          return false;
        });
      }
      rec.first_candidates = std::min(candidates, budget);
      rec.first = found ? SearchOutcome::found : SearchOutcome::witness_not_found;
      if (!found) rec.note = "substage (a): no sigma within " + std::to_string(budget) + " candidates";
    }
    for (std::size_t i = 0; i < sigma_ext.size(); ++i) walker.push(sigma_ext[i]);
    const std::size_t sigma_length = walker.word().size();
    rec.first_length = static_cast<unsigned long>(sigma_length);
    rec.first_word = short_text(sigma_ext);
    rec.first_value = walker.value();

    // Substage (b).
    Word tau_ext;
    bool found = false;
    std::uint64_t candidates = 0;
    const std::size_t min_extra = sigma_length > previous ? 0 : 1;
    for (std::size_t extra = min_extra; !found && candidates < budget; ++extra) {
      for_each_extension(walker, extra, nonincreasing, [&] {
        if (++candidates > budget) return true;
        if (walker.value() <= Rational(static_cast<unsigned long>(walker.word().size()))) {
          found = true;
          tau_ext = walker.word().suffix_from(sigma_length);
          return true;
        }
        return false;
      });
    }
    rec.second_candidates = std::min(candidates, budget);
    if (found) {
      rec.second = SearchOutcome::found;
    } else {
      rec.second = SearchOutcome::witness_not_found;
      if (!rec.note.empty()) rec.note += "; ";
      rec.note += "substage (b): no tau within " + std::to_string(budget) + " candidates";
      if (min_extra == 1) tau_ext = Word::from_string("0");
    }
    for (std::size_t i = 0; i < tau_ext.size(); ++i) walker.push(tau_ext[i]);
    rec.second_length = static_cast<unsigned long>(walker.word().size());
    rec.second_word = short_text(tau_ext);
    rec.second_value = walker.value();
    rec.stage_length = rec.second_length;

    result.output.append_bits(sigma_ext + tau_ext);
    result.trace.push_back(std::move(rec));
  }
  return result;
}

// ---- DIM_str^alpha transducer -------------------------------------------------------

namespace {

// Leftmost minimal extension e of the profile's word with
// C(word e) >= rate * |word e|, trying at most `budget` candidates.
std::optional<Word> complexity_search(ComplexityProfile& profile, const Rational& rate, std::uint64_t budget,
                                      std::uint64_t& candidates) {
  const std::size_t base = profile.size();
  std::optional<Word> found;
  auto meets = [&] {
    const Rational lhs(static_cast<unsigned long>(profile.code_length()));
    return lhs >= rate * Rational(static_cast<unsigned long>(profile.size()));
  };
  auto visit = [&](auto&& self, std::size_t left) -> bool {
    if (left == 0) {
      if (++candidates > budget) return true;
      if (meets()) {
        Word e;
        for (std::size_t i = base; i < profile.size(); ++i) e.push_back(profile.bits()[i]);
        found = std::move(e);
        return true;
      }
      return false;
    }
    for (Bit b : {Bit{0}, Bit{1}}) {
      profile.push(b);
      const bool stop = self(self, left - 1);
      profile.pop();
      if (stop) return true;
    }
    return false;
  };
  for (std::size_t extra = 0; !found && candidates < budget; ++extra) visit(visit, extra);
  candidates = std::min(candidates, budget);
  return found;
}

}  // namespace

ReductionResult wadge_dimstr(const LevelOracle& oracle, const SequenceSource& x, std::uint64_t stages,
                             const Rational& alpha, const ComplexityModel& model, std::uint64_t budget) {
  (void)model;  // the profile implements the model's code length
  if (alpha < 0 || alpha >= 1) throw DomainError("wadge_dimstr: alpha must lie in [0,1)");
  ReductionResult result;
  if (stages == 0) return result;
  const Word x_prefix = x.prefix(stages);

  for (std::uint64_t s = 1; s <= stages; ++s) {
    StageRecord rec;
    rec.variant = "dimstr";
    rec.s = s;
    rec.k = expansionary(oracle, x_prefix, s);
    const Integer previous = result.output.length();
    rec.previous_length = previous;

    const bool need_search = alpha > 0 || rec.k.has_value();
    const bool materializable = previous <= Integer(static_cast<unsigned long>(kMaterializationCap));
    ComplexityProfile profile;
    if (need_search && materializable) {
      const Word base = result.output.materialize(kMaterializationCap);
      for (std::size_t i = 0; i < base.size(); ++i) profile.push(base[i]);
    }
    auto cap_note = [&](const char* substage) {
      if (!rec.note.empty()) rec.note += "; ";
      rec.note += std::string(substage) + ": Y_(s-1) longer than the materialization cap";
    };

    // Substage (a).
    Word rho_ext;
    if (alpha > 0) {
      if (!materializable) {
        rec.first = SearchOutcome::witness_not_found;
        cap_note("substage (a)");
      } else if (auto e = complexity_search(profile, alpha, budget, rec.first_candidates)) {
        rec.first = SearchOutcome::found;
        rho_ext = *e;
      } else {
        rec.first = SearchOutcome::witness_not_found;
        rec.note = "substage (a): no rho within " + std::to_string(budget) + " candidates";
      }
      for (std::size_t i = 0; i < rho_ext.size() && materializable; ++i) profile.push(rho_ext[i]);
      if (materializable) rec.first_value = Rational(static_cast<unsigned long>(profile.code_length()));
    }
    rec.first_length = previous + Integer(static_cast<unsigned long>(rho_ext.size()));
    rec.first_word = short_text(rho_ext);

    // Substage (b).
    Word sigma_ext;
    if (rec.k) {
      const Rational rate = alpha + Rational(1, static_cast<unsigned long>(*rec.k));
      if (!materializable) {
        rec.second = SearchOutcome::witness_not_found;
        cap_note("substage (b)");
      } else if (auto e = complexity_search(profile, rate, budget, rec.second_candidates)) {
        rec.second = SearchOutcome::found;
        sigma_ext = *e;
      } else {
        rec.second = SearchOutcome::witness_not_found;
        if (!rec.note.empty()) rec.note += "; ";
        rec.note += "substage (b): no sigma within " + std::to_string(budget) + " candidates";
      }
      for (std::size_t i = 0; i < sigma_ext.size() && materializable; ++i) profile.push(sigma_ext[i]);
      if (materializable) rec.second_value = Rational(static_cast<unsigned long>(profile.code_length()));
    }
    Word explicit_bits = rho_ext + sigma_ext;
    Integer sigma_length = previous + Integer(static_cast<unsigned long>(explicit_bits.size()));
    rec.second_word = short_text(sigma_ext);
    if (explicit_bits.empty() && sigma_length <= 1) {
      explicit_bits.push_back(0);
      sigma_length += 1;
      rec.second_word += "0";
      if (!rec.note.empty()) rec.note += "; ";
      rec.note += "forced growth: appended 0";
    }
    rec.second_length = sigma_length;

    // Substage (c).
    rec.pad_length = sigma_length * sigma_length - sigma_length;
    result.output.append_bits(explicit_bits);
    result.output.append_zeros(rec.pad_length);
    rec.stage_length = result.output.length();
    result.trace.push_back(std::move(rec));
  }
  return result;
}

namespace {
nlohmann::ordered_json value_json(const std::optional<Rational>& v) {
  return v ? nlohmann::ordered_json(format_rational(*v)) : nlohmann::ordered_json(nullptr);
}
}  // namespace

void write_stage_trace_jsonl(std::ostream& out, const std::vector<StageRecord>& trace) {
  for (const auto& rec : trace) {
    const bool dim1 = rec.variant == "dim1";
    const char* first = dim1 ? "sigma" : "rho";
    const char* second = dim1 ? "tau" : "sigma";
    nlohmann::ordered_json j;
    j["variant"] = rec.variant;
    j["s"] = rec.s;
    j["k"] = rec.k ? nlohmann::ordered_json(*rec.k) : nlohmann::ordered_json(nullptr);
    j["previous_length"] = rec.previous_length.get_str();
    j[first] = {{"outcome", to_string(rec.first)},
                {"candidates", rec.first_candidates},
                {"length", rec.first_length.get_str()},
                {"appended", rec.first_word},
                {dim1 ? "mixture" : "C", value_json(rec.first_value)}};
    j[second] = {{"outcome", to_string(rec.second)},
                 {"candidates", rec.second_candidates},
                 {"length", rec.second_length.get_str()},
                 {"appended", rec.second_word},
                 {dim1 ? "mixture" : "C", value_json(rec.second_value)}};
    if (!dim1) j["pad_length"] = rec.pad_length.get_str();
    j["stage_length"] = rec.stage_length.get_str();
    if (!rec.note.empty()) j["note"] = rec.note;
    out << j.dump() << '\n';
  }
}

// ---- dense Pi^0_2 witness ------------------------------------------------------------

DenseWitness pi2_dense_witness(const std::function<bool(std::uint64_t, std::uint64_t, const Word&)>& predicate,
                               std::uint64_t depth, std::uint64_t budget) {
  if (depth < 1) throw DomainError("pi2_dense_witness: depth must be >= 1");
  if (budget < 1) throw DomainError("pi2_dense_witness: budget must be >= 1");
  DenseWitness result;
  for (std::uint64_t m = 0; m < depth; ++m) {
    std::uint64_t candidates = 0;
    bool found = false;
    for (std::size_t extra = 0; !found && candidates < budget; ++extra) {
      Word ext = Word::repeat(0, extra);
      do {
        if (++candidates > budget) break;
        const Word candidate = result.word + ext;
        for (std::uint64_t k = 0; k <= budget; ++k) {
          if (predicate(m, k, candidate)) {
            result.word = candidate;
            result.steps.push_back({m, k, candidate});
            found = true;
            break;
          }
        }
      } while (!found && next_same_length(ext));
    }
    if (!found) {
      throw DensityViolated(m, "density-violated-at-budget: no extension for m = " + std::to_string(m) +
                                   " within " + std::to_string(budget) + " candidates");
    }
  }
  return result;
}

}  // namespace galekit
