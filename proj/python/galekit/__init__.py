"""Exact constructive-dimension toolkit (bindings to the C++ library)."""

from fractions import Fraction

from . import _galekit
from ._galekit import DomainError, IoError, brute_force_length, code_length, decode, encode, generate, select

__all__ = [
    "DomainError",
    "IoError",
    "brute_force_length",
    "cdim_estimate",
    "code_length",
    "decode",
    "dilute",
    "dimension_estimates",
    "encode",
    "generate",
    "mixture_along",
    "run_cli",
    "select",
    "undilute",
]


def _q(value):
    """Accept Fraction, int or "p/q" and return the "p/q" text the core expects."""
    if isinstance(value, str):
        return value
    f = Fraction(value)
    return f"{f.numerator}/{f.denominator}"


def dimension_estimates(bits, tail=Fraction(1, 2)):
    """(dim, Dim) estimates of a finite bit string, model-relative."""
    d, big_d = _galekit.dimension_estimates(bits, _q(tail))
    return Fraction(d), Fraction(big_d)


def dilute(bits, alpha, pad_rule="index-scaled"):
    return _galekit.dilute(bits, _q(alpha), pad_rule)


def undilute(bits, alpha, pad_rule="index-scaled"):
    return _galekit.undilute(bits, _q(alpha), pad_rule)


def mixture_along(bits):
    """Catalog mixture values at every prefix of bits, lengths 0..len(bits)."""
    return [Fraction(v) for v in _galekit.mixture_along(bits)]


def cdim_estimate(kind, arg="0", horizon=4096):
    value, witness = _galekit.cdim_estimate(kind, str(arg), horizon)
    return Fraction(value), witness


def run_cli(args, input=""):
    """Run one command line in-process; returns (exit code, stdout bytes, stderr text)."""
    return _galekit.run_cli(list(args), input)
