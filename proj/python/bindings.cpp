#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "cli.hpp"
#include "galekit/classify.hpp"
#include "galekit/complexity.hpp"
#include "galekit/errors.hpp"
#include "galekit/gales.hpp"
#include "galekit/transforms.hpp"

namespace py = pybind11;
using namespace galekit;

namespace {

// Rationals cross the boundary as "p/q" strings; the Python side wraps them
// in fractions.Fraction.
std::string q(const Rational& r) { return format_rational(r); }

Word bits(const std::string& s) { return Word::from_string(s); }

SequenceSource finite(const std::string& s) { return SequenceSource::explicit_bits(bits(s)); }

SequenceSource generator(const std::string& kind, const std::string& arg) {
  if (kind == "zeros") return SequenceSource::zeros();
  if (kind == "ones") return SequenceSource::ones();
  if (kind == "periodic") return SequenceSource::periodic(bits(arg));
  if (kind == "seeded-random") return SequenceSource::seeded_random(std::stoull(arg));
  if (kind == "block-alternating") return SequenceSource::block_alternating(std::stoull(arg));
  throw DomainError("unknown generator kind '" + kind + "'");
}

}  // namespace

PYBIND11_MODULE(_galekit, m) {
  m.doc() = "exact constructive-dimension toolkit";

  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<IoError>(m, "IoError", PyExc_IOError);

  m.def(
      "generate",
      [](const std::string& kind, std::uint64_t n, const std::string& arg) {
        return generator(kind, arg).prefix(n).to_string();
      },
      py::arg("kind"), py::arg("n"), py::arg("arg") = "0");

  m.def("code_length", [](const std::string& w) { return ComplexityModel::v1().code_length(bits(w)); });
  m.def(
      "brute_force_length",
      [](const std::string& w, unsigned max_len) { return brute_force_length(ComplexityModel::v1(), bits(w), max_len); },
      py::arg("word"), py::arg("max_len"));
  m.def("encode", [](const std::string& w) { return ComplexityModel::v1().encode(bits(w)).to_string(); });
  m.def("decode", [](const std::string& code) {
    const auto r = ComplexityModel::v1().decode(bits(code));
    if (r.status != DecodeStatus::complete) throw DomainError("not a complete codeword");
    return py::make_tuple(r.output.to_string(), r.consumed);
  });

  m.def(
      "dimension_estimates",
      [](const std::string& w, const std::string& tail) {
        const auto [d, big_d] =
            dimension_estimates(ComplexityModel::v1(), finite(w), bits(w).size(), parse_rational(tail));
        return py::make_tuple(q(d.value), q(big_d.value));
      },
      py::arg("bits"), py::arg("tail") = "1/2");

  m.def(
      "dilute",
      [](const std::string& w, const std::string& alpha, const std::string& rule) {
        const Rational a = parse_rational(alpha);
        const PadRule r = parse_pad_rule(rule);
        const auto len = DilutionPlan(a, r).diluted_length(bits(w).size());
        return dilute(a, finite(w), r).prefix(len.get_ui()).to_string();
      },
      py::arg("bits"), py::arg("alpha"), py::arg("pad_rule") = "index-scaled");
  m.def(
      "undilute",
      [](const std::string& w, const std::string& alpha, const std::string& rule) {
        const Rational a = parse_rational(alpha);
        const PadRule r = parse_pad_rule(rule);
        const DilutionPlan plan(a, r);
        // Source bits fully contained in the diluted prefix.
        std::uint64_t count = 0;
        while (plan.position_of_source_bit(count) < Integer(static_cast<unsigned long>(w.size()))) ++count;
        return undilute(a, finite(w), r).prefix(count).to_string();
      },
      py::arg("bits"), py::arg("alpha"), py::arg("pad_rule") = "index-scaled");

  m.def("select", [](const std::string& rule, const std::string& w) {
    return apply_selection(parse_rule(rule), bits(w)).to_string();
  });

  m.def(
      "mixture_along",
      [](const std::string& w) {
        std::vector<std::string> out;
        for (const auto& v : catalog_mixture().along(bits(w))) out.push_back(q(v));
        return out;
      },
      py::arg("bits"));

  m.def(
      "cdim_estimate",
      [](const std::string& kind, const std::string& arg, std::uint64_t horizon) {
        const auto e = cdim_catalog_estimate(generator(kind, arg), catalog_mixture(), default_s_grid(), horizon);
        return py::make_tuple(q(e.value), e.witness_n);
      },
      py::arg("kind"), py::arg("arg"), py::arg("horizon"));

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args, const std::string& input) {
        std::istringstream in(input);
        std::ostringstream out, err;
        int code;
        {
          py::gil_scoped_release release;
          code = run_cli(args, in, out, err);
        }
        return py::make_tuple(code, py::bytes(out.str()), err.str());
      },
      py::arg("args"), py::arg("input") = "");
}
