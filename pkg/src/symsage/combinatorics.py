"""Counting machinery for symmetry-reduced relative-entropy programs.

Everything here is exact integer (or Fraction) arithmetic; conversion to
float happens only at program emission, and only after a magnitude check
against 2**53.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction

from .errors import CountOverflowError

FLOAT_EXACT_LIMIT = 2**53


def orbit_type(alpha):
    """Multiplicity partition of an exponent vector.

    full_type includes the multiplicity of the zero entry; reduced_type drops
    it.  weight is the number of nonzero coordinates.
    """
    counts = {}
    for v in alpha:
        counts[v] = counts.get(v, 0) + 1
    full = tuple(sorted(counts.values(), reverse=True))
    nonzero = tuple(sorted((c for v, c in counts.items() if v != 0), reverse=True))
    return OrbitTypeInfo(
        full_type=full,
        reduced_type=nonzero,
        weight=sum(nonzero),
        length=len(full),
    )


@dataclass(frozen=True)
class OrbitTypeInfo:
    full_type: tuple
    reduced_type: tuple
    weight: int
    length: int


def contingency_count(row_sums, col_sums):
    """Number of nonnegative integer matrices with the given margins.

    Column-by-column DP; the state is the sorted tuple of residual row sums
    (row labels only matter up to permutation, so sorting collapses states).
    Exact big-int result.
    """
    rows = tuple(int(r) for r in row_sums)
    cols = tuple(int(c) for c in col_sums)
    if any(r < 0 for r in rows) or any(c < 0 for c in cols):
        raise ValueError("margins must be nonnegative")
    if sum(rows) != sum(cols):
        return 0
    rows = tuple(sorted((r for r in rows if r > 0), reverse=True))
    cols = tuple(sorted((c for c in cols if c > 0), reverse=True))
    if not cols:
        return 1
    memo = {}

    def compositions(total, caps):
        # nonincreasing caps; prune on the residual-capacity suffix sums
        k = len(caps)
        suffix = [0] * (k + 1)
        for i in range(k - 1, -1, -1):
            suffix[i] = suffix[i + 1] + caps[i]
        out = []
        part = [0] * k

        def rec(i, left):
            if left > suffix[i]:
                return
            if i == k - 1:
                part[i] = left
                out.append(tuple(part))
                return
            for a in range(min(left, caps[i]), -1, -1):
                part[i] = a
                rec(i + 1, left - a)

        rec(0, total)
        return out

    def count(j, state):
        if j == len(cols):
            return 1
        key = (j, state)
        hit = memo.get(key)
        if hit is not None:
            return hit
        total = 0
        for comp in compositions(cols[j], state):
            nxt = tuple(
                sorted((r - a for r, a in zip(state, comp) if r - a > 0), reverse=True)
            )
            total += count(j + 1, nxt)
        memo[key] = total
        return total

    return count(0, rows)


def partial_injection_count(w):
    """Number of partial injections on a w-element set: sum C(w,i)^2 i!.

    Equals the contingency count with both margins (n-w, 1^w) for any
    n >= 2w, which is why reduced program sizes stop growing with n.
    """
    return sum(math.comb(w, i) ** 2 * math.factorial(i) for i in range(w + 1))


def double_coset_count(group, alpha, beta):
    """|Stab(alpha) \\ G / Stab(beta)| for a permutation group G.

    Young groups reduce blockwise to contingency counts of the multiplicity
    partitions.  Generated groups use the Burnside sum over stabilizer pairs
    counting fixed group elements, evaluated as |{(g, t) in G x Stab(beta) :
    g t g^-1 in Stab(alpha)}| / (|Stab(alpha)| |Stab(beta)|).
    """
    alpha, beta = tuple(alpha), tuple(beta)
    if group.is_young:
        total = 1
        for b in group.blocks:
            sub_a = [alpha[i] for i in b]
            sub_b = [beta[i] for i in b]
            lam = _multiplicity_partition(sub_a)
            mu = _multiplicity_partition(sub_b)
            total *= contingency_count(lam, mu)
        return total
    elems = group.elements()
    stab_a = frozenset(g.images for g in elems if g.apply(alpha) == alpha)
    stab_b = [g for g in elems if g.apply(beta) == beta]
    hits = 0
    for g in elems:
        g_inv = g.inverse()
        for t in stab_b:
            if g.compose(t).compose(g_inv).images in stab_a:
                hits += 1
    numer, denom = hits, len(stab_a) * len(stab_b)
    if numer % denom:
        raise ArithmeticError("Burnside sum is not integral; group data corrupt")
    return numer // denom


def _multiplicity_partition(values):
    counts = {}
    for v in values:
        counts[v] = counts.get(v, 0) + 1
    return tuple(sorted(counts.values(), reverse=True))


@dataclass(frozen=True)
class SizePrediction:
    """Predicted conic program size before any program is built."""

    variables: int
    equalities: int
    inequalities: int
    mode: str
    includes_bound_variable: bool

    @property
    def constraints(self):
        return self.equalities + self.inequalities

    def as_tuple(self):
        return (self.variables, self.constraints)


def predict_sizes(a_classes, b_classes, group, mode="reduced", with_bound_variable=False):
    """Exact size of the relative-entropy program for orbit classes (A-hat, B-hat).

    Reduced mode: variables 2 * sum over class pairs of double-coset counts
    (+1 for the bound variable), one equality row per fixed coordinate of
    each Stab(beta-hat), one inequality per class on either side.  Standard
    mode: the unreduced counts 2|A||B| (+1), |B| n equalities, |A| + |B|
    inequalities, with |A| and |B| full orbit-set sizes.
    """
    if mode not in ("reduced", "standard"):
        raise ValueError("mode must be 'reduced' or 'standard'")
    extra = 1 if with_bound_variable else 0
    if mode == "standard":
        size_a = sum(c.size for c in a_classes)
        size_b = sum(c.size for c in b_classes)
        return SizePrediction(
            variables=2 * size_a * size_b + extra,
            equalities=size_b * group.degree,
            inequalities=size_a + size_b,
            mode=mode,
            includes_bound_variable=with_bound_variable,
        )
    pairs = 0
    equalities = 0
    for b in b_classes:
        stab = group.stabilizer(b.representative)
        equalities += stab.fixed_subspace_dimension()
        for a in a_classes:
            pairs += double_coset_count(group, a.representative, b.representative)
    return SizePrediction(
        variables=2 * pairs + extra,
        equalities=equalities,
        inequalities=len(a_classes) + len(b_classes),
        mode=mode,
        includes_bound_variable=with_bound_variable,
    )


def stabilization_threshold(representatives):
    """Smallest n at which reduced sizes stop changing: twice the max weight."""
    w = 0
    for rep in representatives:
        w = max(w, sum(1 for v in rep if v != 0))
    return 2 * w


def pad_exponent(alpha, n):
    alpha = tuple(alpha)
    if n < len(alpha):
        raise ValueError("cannot pad to a smaller dimension")
    return alpha + (0,) * (n - len(alpha))


def count_to_float(value, force=False, what="count"):
    """Convert an exact int/Fraction to float, guarding the 2**53 cliff."""
    if isinstance(value, Fraction):
        magnitude = max(abs(value.numerator), value.denominator)
    else:
        magnitude = abs(int(value))
    if magnitude > FLOAT_EXACT_LIMIT:
        if not force:
            raise CountOverflowError(
                "%s %r exceeds 2**53 and cannot be emitted as float64 exactly; "
                "pass force=True to accept the precision loss" % (what, value)
            )
        warnings.warn(
            "%s %r exceeds 2**53; float64 emission loses precision" % (what, value),
            RuntimeWarning,
            stacklevel=2,
        )
    return float(value)
