"""Signomials: finite sums c_a * exp(<a, x>) with exact rational exponents.

Exponent vectors are tuples whose entries are Python ints or Fractions
(integral Fractions are normalized to int; the two hash and compare
identically, so mixed tuples behave as exact rational vectors).  All
coefficient arithmetic is float64.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from types import MappingProxyType

from .errors import InvarianceError, SchemaError
from .groups import DEFAULT_ORBIT_BUDGET


def _canon_entry(value):
    if isinstance(value, bool):
        raise SchemaError("exponent entries must be rational numbers, got a bool")
    if isinstance(value, int):
        return value
    if isinstance(value, Fraction):
        return int(value) if value.denominator == 1 else value
    raise SchemaError(
        "exponent entries must be int or Fraction, got %r" % type(value).__name__
    )


def parse_exponent_entry(obj):
    """JSON exponent entry: an integer or a 'p/q' string."""
    if isinstance(obj, bool):
        raise SchemaError("exponent entries must be integers or 'p/q' strings")
    if isinstance(obj, int):
        return obj
    if isinstance(obj, str):
        try:
            return _canon_entry(Fraction(obj))
        except (ValueError, ZeroDivisionError) as exc:
            raise SchemaError("cannot parse exponent entry %r as p/q" % obj) from exc
    if isinstance(obj, float):
        raise SchemaError(
            "exponent entry %r is a float; exponents are exact, use an integer "
            "or a 'p/q' string" % obj
        )
    raise SchemaError("cannot parse exponent entry %r" % (obj,))


def format_exponent_entry(value):
    if isinstance(value, int):
        return value
    return "%d/%d" % (value.numerator, value.denominator)


def exponent_tuple(seq):
    """Canonicalize a sequence of rationals into an exponent vector."""
    return tuple(_canon_entry(v) for v in seq)


class Signomial:
    """An immutable signomial over a fixed number of variables.

    Terms with coefficient exactly 0.0 are dropped; duplicate exponents are
    merged by addition at construction.
    """

    __slots__ = ("dimension", "_terms")

    def __init__(self, dimension, terms):
        if not isinstance(dimension, int) or dimension < 1:
            raise ValueError("dimension must be a positive integer")
        merged = {}
        for expt, coeff in terms.items() if isinstance(terms, dict) else terms:
            expt = exponent_tuple(expt)
            if len(expt) != dimension:
                raise ValueError(
                    "exponent %r has length %d, expected %d" % (expt, len(expt), dimension)
                )
            coeff = float(coeff)
            if not math.isfinite(coeff):
                raise ValueError("coefficient for %r is not finite" % (expt,))
            merged[expt] = merged.get(expt, 0.0) + coeff
        self.dimension = dimension
        self._terms = {e: c for e, c in sorted(merged.items()) if c != 0.0}

    @property
    def terms(self):
        return MappingProxyType(self._terms)

    @property
    def num_terms(self):
        return len(self._terms)

    def support(self):
        return tuple(self._terms)

    def coefficient(self, expt):
        return self._terms.get(exponent_tuple(expt), 0.0)

    def evaluate(self, x):
        if len(x) != self.dimension:
            raise ValueError("point has length %d, expected %d" % (len(x), self.dimension))
        total = 0.0
        for expt, coeff in self._terms.items():
            dot = 0.0
            for a, xi in zip(expt, x):
                if a:
                    dot += float(a) * xi
            total += coeff * math.exp(dot)
        return total

    __call__ = evaluate

    def scale(self, factor):
        return Signomial(self.dimension, {e: factor * c for e, c in self._terms.items()})

    def __add__(self, other):
        if not isinstance(other, Signomial) or other.dimension != self.dimension:
            return NotImplemented
        out = dict(self._terms)
        for e, c in other._terms.items():
            out[e] = out.get(e, 0.0) + c
        return Signomial(self.dimension, out)

    def __eq__(self, other):
        return (
            isinstance(other, Signomial)
            and self.dimension == other.dimension
            and self._terms == other._terms
        )

    def __hash__(self):
        return hash((self.dimension, tuple(self._terms.items())))

    def __repr__(self):
        return "Signomial(dimension=%d, %d terms)" % (self.dimension, len(self._terms))

    # -- JSON schema -------------------------------------------------------

    @classmethod
    def from_json_dict(cls, obj):
        if not isinstance(obj, dict):
            raise SchemaError("signomial JSON must be an object")
        try:
            dimension = obj["dimension"]
            raw_terms = obj["terms"]
        except KeyError as exc:
            raise SchemaError("signomial JSON requires 'dimension' and 'terms'") from exc
        if not isinstance(dimension, int) or isinstance(dimension, bool) or dimension < 1:
            raise SchemaError("'dimension' must be a positive integer")
        if not isinstance(raw_terms, list):
            raise SchemaError("'terms' must be a list")
        terms = []
        for entry in raw_terms:
            if not isinstance(entry, dict):
                raise SchemaError("each term must be an object")
            try:
                raw_expt = entry["exponent"]
                raw_coeff = entry["coefficient"]
            except KeyError as exc:
                raise SchemaError("each term requires 'exponent' and 'coefficient'") from exc
            if not isinstance(raw_expt, list) or len(raw_expt) != dimension:
                raise SchemaError(
                    "term exponent must be a list of length %d" % dimension
                )
            if isinstance(raw_coeff, bool) or not isinstance(raw_coeff, (int, float)):
                raise SchemaError("term coefficient must be a number")
            terms.append(
                (tuple(parse_exponent_entry(v) for v in raw_expt), float(raw_coeff))
            )
        return cls(dimension, terms)

    @classmethod
    def loads(cls, text):
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise SchemaError("invalid JSON: %s" % exc) from exc
        return cls.from_json_dict(obj)

    def to_json_dict(self):
        return {
            "dimension": self.dimension,
            "terms": [
                {
                    "exponent": [format_exponent_entry(v) for v in expt],
                    "coefficient": coeff,
                }
                for expt, coeff in sorted(self._terms.items())
            ],
        }

    def dumps(self, indent=None):
        return json.dumps(self.to_json_dict(), indent=indent, sort_keys=True)


def parse_signomial(source):
    """Parse a signomial from a JSON string or an already-decoded dict."""
    if isinstance(source, str):
        return Signomial.loads(source)
    return Signomial.from_json_dict(source)


@dataclass(frozen=True)
class SignSupport:
    """Support of a signomial split by coefficient sign."""

    positives: frozenset
    negatives: frozenset


def sign_partition(f):
    pos, neg = [], []
    for expt, coeff in f.terms.items():
        (pos if coeff > 0 else neg).append(expt)
    return SignSupport(frozenset(pos), frozenset(neg))


def symmetrize(f, group, budget=DEFAULT_ORBIT_BUDGET):
    """Reynolds average (1/|G|) sum_sigma sigma.f, computed orbitwise.

    The coefficient of every exponent in an orbit becomes the mean of f's
    coefficients over that orbit, so only orbits of the support are ever
    materialized (never the group itself).
    """
    if group.degree != f.dimension:
        raise ValueError("group degree does not match signomial dimension")
    out = {}
    seen = set()
    for expt, _ in f.terms.items():
        if expt in seen:
            continue
        orb = group.orbit(expt, budget=budget)
        total = sum(f.terms.get(e, 0.0) for e in orb.elements)
        seen.update(orb.elements)
        mean = total / orb.size
        if mean != 0.0:
            for e in orb.elements:
                out[e] = mean
    return Signomial(f.dimension, out)


def check_invariance(f, group, tol=1e-9):
    """True when the group permutes f's terms with matching coefficients.

    Comparison is relative: |c(sigma a) - c(a)| <= tol * max(1, |c(a)|).
    """
    if group.degree != f.dimension:
        raise ValueError("group degree does not match signomial dimension")
    terms = f.terms
    if group.is_young:
        # bucket by canonical form: each bucket must be a complete orbit
        # with (nearly) constant coefficient; avoids touching any generator
        buckets = {}
        for expt, coeff in terms.items():
            buckets.setdefault(group.canonical_form(expt), []).append(coeff)
        for rep, coeffs in buckets.items():
            if len(coeffs) != group.orbit_size(rep):
                return False
            lo, hi = min(coeffs), max(coeffs)
            if hi - lo > tol * max(1.0, abs(lo), abs(hi)):
                return False
        return True
    for g in group.generators():
        for expt, coeff in terms.items():
            image = g.apply(expt)
            other = terms.get(image)
            if other is None or abs(other - coeff) > tol * max(1.0, abs(coeff)):
                return False
    return True


def require_invariant(f, group, tol=1e-9):
    if not check_invariance(f, group, tol=tol):
        raise InvarianceError(
            "signomial coefficients are not constant on group orbits (tol=%g)" % tol
        )
