#include "cli.hpp"

#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <json.hpp>
#include <memory>
#include <optional>
#include <sstream>

#include "galekit/bitseq.hpp"
#include "galekit/classify.hpp"
#include "galekit/complexity.hpp"
#include "galekit/errors.hpp"
#include "galekit/gales.hpp"
#include "galekit/parallel.hpp"
#include "galekit/randomness_tests.hpp"
#include "galekit/reductions.hpp"
#include "galekit/transforms.hpp"

namespace galekit {
namespace {

using Json = nlohmann::ordered_json;

// Rationals on the command line must be written p/q.
Rational strict_rational(const std::string& text) {
  if (text.find('/') == std::string::npos) {
    throw DomainError("rationals are written p/q (got '" + text + "')");
  }
  return parse_rational(text);
}

std::uint64_t env_seed(std::uint64_t fallback) {
  const char* env = std::getenv("GALEKIT_SEED");
  if (env == nullptr || *env == '\0') return fallback;
  try {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(env, &used);
    if (used != std::string(env).size()) throw std::invalid_argument("trailing text");
    return v;
  } catch (const std::exception&) {
    throw DomainError(std::string("GALEKIT_SEED is not a natural number: '") + env + "'");
  }
}

std::string fmt_double(double v) {
  std::ostringstream os;
  os << std::setprecision(6) << v;
  return os.str();
}

struct Io {
  std::istream& in;
  std::ostream& out;
  std::ostream& err;

  // A bitstream path, "-" for standard input, or a generator
  // "gen:zeros", "gen:ones", "gen:periodic:<pattern>", "gen:seeded-random:<seed>",
  // "gen:block-alternating:<seed>".
  SequenceSource load(const std::string& where) const {
    if (where == "-") return SequenceSource::file_backed(read_bitstream(in), "<stdin>");
    if (where.rfind("gen:", 0) == 0) return generator(where.substr(4));
    std::ifstream file(where, std::ios::binary);
    if (!file) throw IoError("cannot open '" + where + "'");
    return SequenceSource::file_backed(read_bitstream(file), where);
  }

  static SequenceSource generator(const std::string& text) {
    const auto colon = text.find(':');
    const std::string kind = text.substr(0, colon);
    const std::string arg = colon == std::string::npos ? "" : text.substr(colon + 1);
    auto seed = [&] {
      if (arg.empty()) return env_seed(0);
      try {
        return env_seed(std::stoull(arg));
      } catch (const std::logic_error&) {
        throw DomainError("bad seed '" + arg + "'");
      }
    };
    if (kind == "zeros") return SequenceSource::zeros();
    if (kind == "ones") return SequenceSource::ones();
    if (kind == "periodic") return SequenceSource::periodic(Word::from_string(arg.empty() ? "01" : arg));
    if (kind == "seeded-random") return SequenceSource::seeded_random(seed());
    if (kind == "block-alternating") return SequenceSource::block_alternating(seed());
    throw DomainError("unknown generator '" + kind + "'");
  }

  void with_output(const std::string& path, const std::function<void(std::ostream&)>& write) const {
    if (path == "-") {
      write(out);
      out.flush();
      return;
    }
    std::ofstream file(path, std::ios::binary);
    if (!file) throw IoError("cannot write '" + path + "'");
    write(file);
    file.flush();
    if (!file) throw IoError("write to '" + path + "' failed");
  }

  void write_bits(const std::string& path, const Word& bits, const std::string& format) const {
    const BitstreamFormat f = format == "packed" ? BitstreamFormat::packed : BitstreamFormat::ascii;
    with_output(path, [&](std::ostream& os) { write_bitstream(os, bits, f); });
  }
};

std::uint64_t finite_length(const SequenceSource& source, const std::string& what) {
  const auto len = source.length();
  if (!len) throw DomainError(what + " needs a finite input");
  return *len;
}

// Horizon 0 means the whole (finite) input.
std::uint64_t resolve_horizon(const SequenceSource& source, std::uint64_t horizon) {
  if (horizon != 0) return horizon;
  return finite_length(source, "a default horizon");
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream is(text);
  while (std::getline(is, cur, sep)) parts.push_back(cur);
  return parts;
}

std::vector<std::uint64_t> parse_bounds(const std::string& text) {
  std::vector<std::uint64_t> bounds;
  for (const auto& part : split(text, ',')) {
    try {
      std::size_t used = 0;
      const unsigned long long v = std::stoull(part, &used);
      if (used != part.size()) throw std::invalid_argument(part);
      bounds.push_back(v);
    } catch (const std::logic_error&) {
      throw DomainError("bounds are comma-separated naturals (got '" + text + "')");
    }
  }
  return bounds;
}

Json estimate_json(std::string_view estimator, const DimensionEstimate& est, const SequenceSource& source) {
  Json j;
  j["estimator"] = estimator;
  j["label"] = DimensionEstimate::kLabel;
  j["model"] = "v1";
  j["source"] = source.description();
  j["horizon"] = est.trace.tail_end;
  j["tail_begin"] = est.trace.tail_begin;
  j["tail_end"] = est.trace.tail_end;
  j["value"] = format_rational(est.value);
  j["value_float"] = to_double(est.value);
  j["attained_at"] = est.attained_at;
  return j;
}

Martingale find_martingale(const std::string& name) {
  for (const auto& m : default_catalog()) {
    if (m.name() == name) return m;
  }
  std::string names;
  for (const auto& m : default_catalog()) names += (names.empty() ? "" : ", ") + m.name();
  throw DomainError("unknown martingale '" + name + "' (mixture, " + names + ")");
}

class Cli {
 public:
  Cli(Io io) : io_(io) {}

  int run(const std::vector<std::string>& args) {
    CLI::App app{"galekit: constructive-dimension laboratory"};
    app.name("galekit");
    app.require_subcommand(1);
    app.fallthrough();
    jobs_ = default_jobs();
    app.add_option("--jobs", jobs_, "worker threads (results do not depend on it)")->check(CLI::PositiveNumber);

    add_gen(app);
    add_dilution(app, "dilute", true);
    add_dilution(app, "undilute", false);
    add_select(app);
    add_estimate(app, "estimate-dim", false);
    add_estimate(app, "estimate-dimstr", true);
    add_gale_run(app);
    add_schnorr(app);
    add_rand_verdict(app);
    add_wadge(app);
    add_classify(app);
    add_cdim(app);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
      app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
      const auto chosen = app.get_subcommands();
      io_.out << (chosen.empty() ? app.help() : chosen.front()->help());
      return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
      io_.out << app.help("", CLI::AppFormatMode::All);
      return kExitOk;
    } catch (const CLI::ParseError& e) {
      std::string message = e.what();
      for (const auto& a : args) {
        if (a.empty() || a[0] == '-') continue;
        if (app.get_subcommands([&](CLI::App* sub) { return sub->get_name() == a; }).empty()) {
          message = "unknown subcommand '" + a + "'";
        }
        break;
      }
      io_.err << "galekit: " << message << "\n\n" << app.help();
      return kExitUsage;
    }
    try {
      action_();
    } catch (const DomainError& e) {
      io_.err << "galekit: domain error: " << e.what() << '\n';
      return kExitDomain;
    } catch (const IoError& e) {
      io_.err << "galekit: i/o error: " << e.what() << '\n';
      return kExitIo;
    } catch (const std::exception& e) {
      io_.err << "galekit: internal error: " << e.what() << '\n';
      return kExitInternal;
    }
    return kExitOk;
  }

 private:
  Io io_;
  unsigned jobs_ = 1;
  std::function<void()> action_;

  // Options kept alive for the parse; each subcommand owns one struct.
  struct Common {
    std::string in = "-";
    std::string out = "-";
    std::string format = "ascii";
    bool json = false;
  };
  std::vector<std::shared_ptr<void>> keep_;

  template <typename T>
  std::shared_ptr<T> make() {
    auto p = std::make_shared<T>();
    keep_.push_back(p);
    return p;
  }

  static void add_in(CLI::App* sub, Common& c) {
    sub->add_option("--in", c.in, "input bitstream, '-' or gen:<kind>[:arg]")->capture_default_str();
  }
  static void add_out(CLI::App* sub, Common& c) {
    sub->add_option("--out", c.out, "output bitstream or '-'")->capture_default_str();
    sub->add_option("--format", c.format, "output format")
        ->check(CLI::IsMember({"ascii", "packed"}))
        ->capture_default_str();
  }

  void emit(const Common& c, const Json& j, const std::string& human) {
    if (c.json) {
      io_.out << j.dump(2) << '\n';
    } else {
      io_.out << human;
    }
  }

  // ---- gen --------------------------------------------------------------------
  void add_gen(CLI::App& app) {
    struct Opts : Common {
      std::string kind;
      std::uint64_t n = 0;
      std::string pattern = "01";
      std::uint64_t seed = 0;
    };
    auto o = make<Opts>();
    auto* sub = app.add_subcommand("gen", "generate a sequence prefix");
    sub->add_option("--kind", o->kind, "sequence kind")
        ->required()
        ->check(CLI::IsMember({"periodic", "zeros", "ones", "seeded-random", "block-alternating"}));
    sub->add_option("--n", o->n, "number of bits")->required();
    sub->add_option("--pattern", o->pattern, "pattern for periodic")->capture_default_str();
    sub->add_option("--seed", o->seed, "seed (GALEKIT_SEED overrides)")->capture_default_str();
    add_out(sub, *o);
    sub->callback([this, o] {
      action_ = [this, o] {
        const std::uint64_t seed = env_seed(o->seed);
        SequenceSource src = o->kind == "periodic"        ? SequenceSource::periodic(Word::from_string(o->pattern))
                             : o->kind == "zeros"         ? SequenceSource::zeros()
                             : o->kind == "ones"          ? SequenceSource::ones()
                             : o->kind == "seeded-random" ? SequenceSource::seeded_random(seed)
                                                          : SequenceSource::block_alternating(seed);
        io_.write_bits(o->out, src.prefix(o->n), o->format);
      };
    });
  }

  // ---- dilute / undilute ----------------------------------------------------------
  void add_dilution(CLI::App& app, const std::string& name, bool forward) {
    struct Opts : Common {
      std::string alpha;
      std::string pad_rule = "index-scaled";
    };
    auto o = make<Opts>();
    auto* sub = app.add_subcommand(name, forward ? "apply the dilution f_alpha" : "invert the dilution");
    sub->add_option("--alpha", o->alpha, "alpha as p/q, 0 < alpha < 1")->required();
    sub->add_option("--pad-rule", o->pad_rule, "padding rule")
        ->check(CLI::IsMember({"index-scaled", "block-scaled"}))
        ->capture_default_str();
    add_in(sub, *o);
    add_out(sub, *o);
    sub->callback([this, o, forward] {
      action_ = [this, o, forward] {
        const Rational alpha = strict_rational(o->alpha);
        const PadRule rule = parse_pad_rule(o->pad_rule);
        DilutionPlan plan(alpha, rule);  // validates alpha before reading input
        const SequenceSource src = io_.load(o->in);
        const std::uint64_t len = finite_length(src, forward ? "dilute" : "undilute");
        const SequenceSource result = forward ? dilute(alpha, src, rule) : undilute(alpha, src, rule);
        io_.write_bits(o->out, result.prefix(*result.length()), o->format);
        io_.err << (forward ? "diluted " : "undiluted ") << len << " bits to " << *result.length() << '\n';
      };
    });
  }

  // ---- select -----------------------------------------------------------------
  void add_select(CLI::App& app) {
    struct Opts : Common {
      std::string rule = "all";
      std::string tolerance;
    };
    auto o = make<Opts>();
    auto* sub = app.add_subcommand("select", "apply a selection rule");
    sub->add_option("--rule", o->rule, "selection rule")
        ->check(CLI::IsMember({"all", "even", "powers-of-two"}))
        ->capture_default_str();
    sub->add_option("--tolerance", o->tolerance, "report a frequency check at this tolerance (p/q)");
    add_in(sub, *o);
    add_out(sub, *o);
    sub->callback([this, o] {
      action_ = [this, o] {
        const SelectionRule rule = parse_rule(o->rule);
        const std::optional<Rational> tol =
            o->tolerance.empty() ? std::nullopt : std::optional<Rational>(strict_rational(o->tolerance));
        const SequenceSource src = io_.load(o->in);
        const std::uint64_t len = finite_length(src, "select");
        if (len == 0) throw DomainError("select needs a nonempty input");
        const SelectionReport report = select_subsequence(rule, src, len);
        io_.write_bits(o->out, report.selected, o->format);
        io_.err << "selected " << report.selected.size() << " of " << len << " bits; min ratio "
                << format_rational(report.min_ratio) << " at m = " << report.argmin_m << '\n';
        if (tol) {
          if (report.selected.size() == 0) throw DomainError("nothing selected; no frequency to check");
          const auto v = stochasticity_check(report.selected, *tol);
          io_.err << "frequency of ones " << format_rational(v.frequency) << " (deviation "
                  << fmt_double(to_double(v.deviation)) << "): " << (v.pass ? "pass" : "fail") << '\n';
        }
      };
    });
  }

  // ---- estimators ---------------------------------------------------------------
  void add_estimate(CLI::App& app, const std::string& name, bool strong) {
    struct Opts : Common {
      std::uint64_t horizon = 0;
      std::string tail = "1/2";
      std::string model = "v1";
      std::string trace;
    };
    auto o = make<Opts>();
    auto* sub = app.add_subcommand(name, strong ? "estimate strong dimension (Dim)" : "estimate dimension (dim)");
    add_in(sub, *o);
    sub->add_option("--horizon", o->horizon, "prefix length (0 = whole input)")->capture_default_str();
    sub->add_option("--tail", o->tail, "tail window starts at this fraction of the horizon")->capture_default_str();
    sub->add_option("--model", o->model, "complexity model")->capture_default_str();
    sub->add_option("--trace", o->trace, "write the ratio trace as CSV");
    sub->add_flag("--json", o->json, "JSON report");
    sub->callback([this, o, strong] {
      action_ = [this, o, strong] {
        const ComplexityModel model = ComplexityModel::by_name(o->model);
        const Rational tail = strict_rational(o->tail);
        const SequenceSource src = io_.load(o->in);
        const std::uint64_t horizon = resolve_horizon(src, o->horizon);
        const DimensionEstimate est = strong ? strong_dim_estimate(model, src, horizon, tail)
                                             : dim_estimate(model, src, horizon, tail);
        if (!o->trace.empty()) {
          io_.with_output(o->trace, [&](std::ostream& os) { write_ratio_trace_csv(os, est.trace); });
        }
        std::ostringstream human;
        human << (strong ? "Dim" : "dim") << " estimate (" << DimensionEstimate::kLabel << ", model v1, horizon "
              << horizon << ", window [" << est.trace.tail_begin << ", " << est.trace.tail_end
              << "]): " << format_rational(est.value) << " ~ " << fmt_double(to_double(est.value))
              << " at n = " << est.attained_at << '\n';
        emit(*o, estimate_json(strong ? "strong_dim" : "dim", est, src), human.str());
      };
    });
  }

  // ---- gale-run -----------------------------------------------------------------
  void add_gale_run(CLI::App& app) {
    struct Opts : Common {
      std::string martingale = "mixture";
      std::string order = "1/2";
      std::string gale_s;
      std::uint64_t horizon = 0;
      std::string trace;
    };
    auto o = make<Opts>();
    auto* sub = app.add_subcommand("gale-run", "run a martingale or s-gale against an order");
    add_in(sub, *o);
    sub->add_option("--martingale", o->martingale, "'mixture' or a catalog name")->capture_default_str();
    sub->add_option("--order", o->order, "s (p/q, 0 <= s < 1) for h_s(n) = 2^((1-s)n), or 'linear'")
        ->capture_default_str();
    sub->add_option("--gale-s", o->gale_s, "run the s-gale 2^((s-1)n) d instead of d (p/q)");
    sub->add_option("--horizon", o->horizon, "prefix length (0 = whole input)")->capture_default_str();
    sub->add_option("--trace", o->trace, "write the trace as CSV");
    sub->add_flag("--json", o->json, "JSON report");
    sub->callback([this, o] {
      action_ = [this, o] {
        ValuedProcess d = o->martingale == "mixture" ? catalog_mixture().as_process()
                                                     : find_martingale(o->martingale).as_process();
        if (!o->gale_s.empty()) d = to_s_gale(d, strict_rational(o->gale_s));
        const Order h = o->order == "linear" ? linear_order() : standard_order(strict_rational(o->order));
        const SequenceSource src = io_.load(o->in);
        const std::uint64_t horizon = resolve_horizon(src, o->horizon);
        const OrderSuccessReport r = order_success(d, h, src, horizon);
        if (!o->trace.empty()) io_.with_output(o->trace, [&](std::ostream& os) { write_gale_trace_csv(os, r); });
        Json j;
        j["process"] = d.name();
        j["kind"] = to_string(d.kind());
        j["order"] = h.name();
        j["horizon"] = horizon;
        j["label"] = OrderSuccessReport::kLabel;
        j["verdict"] = to_string(r.verdict);
        j["max_ratio"] = r.max_ratio.to_string();
        j["max_ratio_float"] = r.max_ratio.to_double();
        j["argmax_n"] = r.argmax_n;
        j["witnessed_count"] = r.witnessed_count;
        j["last_witness"] = r.last_witness ? Json(*r.last_witness) : Json(nullptr);
        std::ostringstream human;
        human << d.name() << " against " << h.name() << " up to n = " << horizon << ": " << to_string(r.verdict)
              << " (" << r.witnessed_count << " witnesses; max ratio ~ " << fmt_double(r.max_ratio.to_double())
              << " at n = " << r.argmax_n << ")\n";
        emit(*o, j, human.str());
      };
    });
  }

  // ---- schnorr-test -------------------------------------------------------------
  void add_schnorr(CLI::App& app) {
    struct Opts : Common {
      unsigned levels = kDefaultTestDepth;
      unsigned word_depth = 0;
    };
    auto o = make<Opts>();
    auto* sub = app.add_subcommand("schnorr-test", "membership in the catalog Schnorr test");
    add_in(sub, *o);
    sub->add_option("--levels", o->levels, "highest level to check")->capture_default_str();
    sub->add_option("--word-depth", o->word_depth, "longest generator word (0 = levels)");
    sub->add_flag("--json", o->json, "JSON report");
    sub->callback([this, o] {
      action_ = [this, o] {
        if (o->levels < 1 || o->levels > 30) throw DomainError("--levels must lie in [1, 30]");
        const unsigned depth = o->word_depth == 0 ? o->levels : o->word_depth;
        if (depth > 30) throw DomainError("--word-depth must be <= 30");
        const TestFamily test = catalog_schnorr_test(catalog_mixture(), depth, o->levels);
        const SequenceSource src = io_.load(o->in);
        Json levels = Json::array();
        std::optional<unsigned> deepest;
        for (unsigned i = 0; i <= o->levels; ++i) {
          const CylinderFamily level = test.level(i);
          const bool in = member(level, src);
          if (in) deepest = i;
          levels.push_back({{"level", i},
                            {"measure", format_rational(level.measure().to_rational())},
                            {"generators", level.generators().size()},
                            {"member", in}});
        }
        Json j;
        j["kind"] = to_string(test.kind());
        j["label"] = "relative to catalog";
        j["source"] = src.description();
        j["levels"] = levels;
        j["deepest_level"] = deepest ? Json(*deepest) : Json(nullptr);
        j["passes_at_levels"] = !deepest || *deepest < o->levels;
        std::ostringstream human;
        human << "catalog Schnorr test, levels 0.." << o->levels << ": deepest level containing the input = "
              << (deepest ? std::to_string(*deepest) : "none") << '\n';
        emit(*o, j, human.str());
      };
    });
  }

  // ---- rand-verdict -------------------------------------------------------------
  void add_rand_verdict(CLI::App& app) {
    struct Opts : Common {
      std::uint64_t horizon = 0;
      std::string budget = "1048576";
    };
    auto o = make<Opts>();
    auto* sub = app.add_subcommand("rand-verdict", "catalog martingales against a capital budget");
    add_in(sub, *o);
    sub->add_option("--horizon", o->horizon, "prefix length (0 = whole input)")->capture_default_str();
    sub->add_option("--budget", o->budget, "capital that counts as rejection")->capture_default_str();
    sub->add_flag("--json", o->json, "JSON report");
    sub->callback([this, o] {
      action_ = [this, o] {
        const Rational budget = parse_rational(o->budget);
        const SequenceSource src = io_.load(o->in);
        const std::uint64_t horizon = resolve_horizon(src, o->horizon);
        const CatalogVerdict v = catalog_random_verdict(src, horizon, budget, default_catalog(), jobs_);
        Json per = Json::array();
        std::ostringstream human;
        for (const auto& m : v.per_martingale) {
          per.push_back({{"name", m.name},
                         {"max_value", format_rational(m.max_value)},
                         {"log2_max", log2_approx(m.max_value)},
                         {"argmax_n", m.argmax_n},
                         {"rejected", m.rejected}});
          if (m.rejected) human << "rejected by " << m.name << " (capital reaches the budget)\n";
        }
        Json j;
        j["label"] = CatalogVerdict::kLabel;
        j["horizon"] = horizon;
        j["budget"] = format_rational(budget);
        j["catalog_consistent"] = v.catalog_consistent;
        j["martingales"] = per;
        human << (v.catalog_consistent ? "catalog-consistent" : "catalog-rejected") << " ("
              << CatalogVerdict::kLabel << ", horizon " << horizon << ")\n";
        emit(*o, j, human.str());
      };
    });
  }

  // ---- wadge --------------------------------------------------------------------
  void add_wadge(CLI::App& app) {
    struct Opts : Common {
      std::string variant;
      std::string alpha = "0/1";
      std::uint64_t stages = 10;
      std::string oracle = "false";
      std::uint64_t budget = kDefaultStageBudget;
      std::uint64_t emit_bits = 0;
    };
    auto o = make<Opts>();
    auto* sub = app.add_subcommand("wadge", "run a reduction transducer; trace as JSON lines");
    sub->add_option("--variant", o->variant, "transducer")->required()->check(CLI::IsMember({"dim1", "dimstr"}));
    sub->add_option("--alpha", o->alpha, "alpha for dimstr (p/q)")->capture_default_str();
    sub->add_option("--stages", o->stages, "number of stages")->capture_default_str();
    sub->add_option("--oracle", o->oracle, "'true', 'false' or an oracle file")->capture_default_str();
    sub->add_option("--budget", o->budget, "candidates per search")->capture_default_str();
    add_in(sub, *o);
    sub->add_option("--out", o->out, "write the output prefix here (with --emit-bits)");
    sub->add_option("--emit-bits", o->emit_bits, "how many output bits to write");
    sub->add_option("--format", o->format, "output format")->check(CLI::IsMember({"ascii", "packed"}));
    sub->callback([this, o] {
      action_ = [this, o] {
        const Rational alpha = strict_rational(o->alpha);
        if (alpha < 0 || alpha > 1) throw DomainError("alpha must lie in [0, 1]");
        const LevelOracle oracle = LevelOracle::parse(o->oracle);
        const SequenceSource x = io_.load(o->in);
        const ReductionResult r = o->variant == "dim1"
                                      ? wadge_dim1(oracle, x, o->stages, catalog_mixture(), o->budget)
                                      : wadge_dimstr(oracle, x, o->stages, alpha, ComplexityModel::v1(), o->budget);
        write_stage_trace_jsonl(io_.out, r.trace);
        io_.out.flush();
        if (o->emit_bits > 0) {
          if (o->out == "-") throw DomainError("--emit-bits needs --out pointing at a file");
          io_.write_bits(o->out, r.output.materialize(o->emit_bits), o->format);
        }
        io_.err << o->variant << ": " << r.trace.size() << " stages, output length " << r.output.length().get_str()
                << '\n';
      };
    });
  }

  // ---- classify -----------------------------------------------------------------
  void add_classify(CLI::App& app) {
    struct Opts : Common {
      std::string cls;
      std::string alpha;
      std::string bounds;
      std::uint64_t decode_steps = kDefaultDecodeSteps;
    };
    auto o = make<Opts>();
    auto* sub = app.add_subcommand("classify", "bounded evaluation of a dimension formula");
    sub->add_option("--class", o->cls, "formula")
        ->required()
        ->check(CLI::IsMember({"dim-le", "dim-ge", "dimstr-le", "dimstr-ge"}));
    sub->add_option("--alpha", o->alpha, "alpha (p/q), used as a constant approximation")->required();
    add_in(sub, *o);
    sub->add_option("--bounds", o->bounds, "quantifier bounds k,N,n (default 4,16,4096; dimstr 4,256,4096)");
    sub->add_option("--decode-steps", o->decode_steps, "step budget of the local program search")
        ->capture_default_str();
    sub->add_flag("--json", o->json, "JSON report");
    sub->callback([this, o] {
      action_ = [this, o] {
        const ApproxReal alpha = ApproxReal::constant(strict_rational(o->alpha));
        const bool strong = o->cls.rfind("dimstr", 0) == 0;
        const std::vector<std::uint64_t> bounds =
            o->bounds.empty() ? (strong ? kDimstrBounds : kDimBounds) : parse_bounds(o->bounds);
        HierarchyFormula f;
        if (o->cls == "dim-le") f = dim_le_formula(alpha);
        if (o->cls == "dim-ge") f = dim_ge_formula(alpha);
        if (strong) {
          auto pair = dimstr_formulas(alpha, nullptr, o->decode_steps);
          f = o->cls == "dimstr-le" ? std::move(pair.first) : std::move(pair.second);
        }
        const SequenceSource src = io_.load(o->in);
        const BoundedEvaluation e = eval_bounded(f, src, bounds);
        const std::vector<std::string> vars{"k", "N", "n"};
        Json decisive = Json::object();
        for (std::size_t i = 0; i < e.decisive.size(); ++i) decisive[vars[i]] = e.decisive[i];
        Json quantifiers = Json::array();
        for (std::size_t i = 0; i < f.quantifiers.size(); ++i) {
          quantifiers.push_back((f.quantifiers[i] == Quantifier::forall ? "forall " : "exists ") + vars[i]);
        }
        Json j;
        j["class"] = o->cls;
        j["formula"] = f.name;
        j["alpha"] = alpha.label();
        j["quantifiers"] = quantifiers;
        j["kernel_kind"] = to_string(f.kind);
        j["bounds"] = bounds;
        j["verdict"] = to_string(e.verdict);
        j["decisive"] = decisive;
        j["kernel_calls"] = e.kernel_calls;
        std::ostringstream human;
        human << f.name << " at bounds";
        for (auto b : bounds) human << ' ' << b;
        human << ": " << to_string(e.verdict);
        if (!e.decisive.empty()) {
          human << " (decided at";
          for (std::size_t i = 0; i < e.decisive.size(); ++i) human << ' ' << vars[i] << '=' << e.decisive[i];
          human << ')';
        }
        human << '\n';
        emit(*o, j, human.str());
      };
    });
  }

  // ---- cdim-est -----------------------------------------------------------------
  void add_cdim(CLI::App& app) {
    struct Opts : Common {
      std::uint64_t horizon = 0;
      std::string grid;
      std::uint64_t burn_in = kCdimBurnIn;
    };
    auto o = make<Opts>();
    auto* sub = app.add_subcommand("cdim-est", "catalog upper proxy for constructive dimension");
    add_in(sub, *o);
    sub->add_option("--horizon", o->horizon, "prefix length (0 = whole input)")->capture_default_str();
    sub->add_option("--grid", o->grid, "ascending p/q list (default 1/20, 2/20, ..., 1)");
    sub->add_option("--burn-in", o->burn_in, "ignore prefixes shorter than this")->capture_default_str();
    sub->add_flag("--json", o->json, "JSON report");
    sub->callback([this, o] {
      action_ = [this, o] {
        std::vector<Rational> grid;
        if (o->grid.empty()) {
          grid = default_s_grid();
        } else {
          for (const auto& part : split(o->grid, ',')) grid.push_back(strict_rational(part));
        }
        const SequenceSource src = io_.load(o->in);
        const std::uint64_t horizon = resolve_horizon(src, o->horizon);
        const CdimEstimate e = cdim_catalog_estimate(src, catalog_mixture(), grid, horizon, o->burn_in);
        Json j;
        j["label"] = CdimEstimate::kLabel;
        j["horizon"] = horizon;
        j["burn_in"] = o->burn_in;
        j["value"] = format_rational(e.value);
        j["value_float"] = to_double(e.value);
        j["witness_n"] = e.witness_n ? Json(*e.witness_n) : Json(nullptr);
        std::ostringstream human;
        human << "cdim estimate (" << CdimEstimate::kLabel << ", horizon " << horizon
              << "): " << format_rational(e.value);
        if (e.witness_n) human << " (witnessed at n = " << *e.witness_n << ')';
        human << '\n';
        emit(*o, j, human.str());
      };
    });
  }
};

}  // namespace

int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  Cli cli(Io{in, out, err});
  return cli.run(args);
}

}  // namespace galekit
