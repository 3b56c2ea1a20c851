"""Recovering the metric graph of a curve from splitting data.

Thin wrapper over the C++ core: rationals come back as fractions.Fraction,
graphs go in as JSON text (the CLI's file format).
"""

from fractions import Fraction

from . import _core
from ._core import Error, gen_graph, verify_prop_a1

__all__ = [
    "Error",
    "split_threshold",
    "preimage_exponent",
    "is_split_ball",
    "distinguish",
    "thm43_witness",
    "p1_edge_length",
    "verify_prop_a1",
    "reconstruct",
    "recover",
    "gen_graph",
]


def _text(x):
    if isinstance(x, str):
        return x
    if x == float("inf"):
        return "inf"
    return str(Fraction(x))


def _fractions(lengths):
    return {k: Fraction(v) for k, v in lengths.items()}


def split_threshold(p, e):
    return Fraction(_core.split_threshold(p, e))


def preimage_exponent(p, e, v):
    return _core.preimage_exponent(p, e, _text(v))


def is_split_ball(p, e, v):
    return _core.is_split_ball(p, e, _text(v))


def distinguish(valpha, vbeta, p):
    report = _core.distinguish(_text(valpha), _text(vbeta), p)
    for key in ("i1_alpha", "i1_beta", "i2_alpha", "i2_beta"):
        report[key]["lo"] = Fraction(report[key]["lo"])
        report[key]["hi"] = Fraction(report[key]["hi"])
    report["length_gap"] = Fraction(report["length_gap"])
    return report


def thm43_witness(valpha, vbeta, p):
    e, a, b = _core.thm43_witness(_text(valpha), _text(vbeta), p)
    return e, int(a), int(b)


def p1_edge_length(vlambda):
    return Fraction(_core.p1_edge_length(_text(vlambda)))


def reconstruct(graph_json):
    return _fractions(_core.reconstruct(graph_json))


def recover(graph_json, p, e_max=64, i_max=256, denom_bound=16):
    return _fractions(_core.recover(graph_json, p, e_max, i_max, denom_bound))
