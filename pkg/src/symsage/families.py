"""Built-in benchmark families over the full symmetric group.

Each family is a parametrized signomial invariant under S_n, chosen so that
the positive and negative supports exercise different orbit shapes: a
factorial orbit against a fixed point (f1), an axis orbit against a
factorial one (f2), two factorial orbits (f3), two orbits of size n (f4),
and two orbits on each side (g).  Families whose term count grows like n!
are capped because the signomial itself becomes unmanageable, not just the
standard program.
"""

import itertools
import math

from .errors import OrbitBudgetError
from .groups import PermutationGroup
from .signomials import Signomial

FAMILY_NAMES = ("f1", "f2", "f3", "f4", "g")

# families that materialize an orbit of n! terms
FACTORIAL_FAMILIES = frozenset(("f1", "f2", "f3", "g"))

DEFAULT_FAMILY_CAP = 8


def _orbit_terms(base, coefficient):
    """All distinct permutations of base, each with the same coefficient."""
    out = {}
    for perm in itertools.permutations(base):
        out[perm] = coefficient
    return out


def _merge(total, extra):
    for expt, coeff in extra.items():
        value = total.get(expt, 0.0) + coeff
        if value == 0.0:
            total.pop(expt, None)
        else:
            total[expt] = value
    return total


def make_f1(n):
    """n * sum over the orbit of (1, 2, ..., n), minus n at (1, ..., 1)."""
    terms = _orbit_terms(tuple(range(1, n + 1)), float(n))
    return Signomial(n, _merge(terms, {(1,) * n: -float(n)}))


def make_f2(n):
    """Axis terms exp(n^2 x_i) minus the orbit of (1, ..., n) over (n-1)!."""
    terms = {}
    for i in range(n):
        expt = [0] * n
        expt[i] = n * n
        terms[tuple(expt)] = 1.0
    neg = _orbit_terms(tuple(range(1, n + 1)), -1.0 / math.factorial(n - 1))
    return Signomial(n, _merge(terms, neg))


def make_f3(n):
    """Orbit of (2, 8, ..., 2n^2) minus the orbit of (1, ..., n), both
    averaged over the group order."""
    weight = 1.0 / math.factorial(n)
    terms = _orbit_terms(tuple(2 * i * i for i in range(1, n + 1)), weight)
    neg = _orbit_terms(tuple(range(1, n + 1)), -weight)
    return Signomial(n, _merge(terms, neg))


def make_f4(n):
    """Axis terms exp(n^2 x_i) minus the orbit of (n, n-1, ..., n-1); both
    orbits have size n, so the family scales to large n."""
    terms = {}
    for i in range(n):
        expt = [0] * n
        expt[i] = n * n
        terms[tuple(expt)] = 1.0
    for i in range(n):
        expt = [n - 1] * n
        expt[i] = n
        terms[tuple(expt)] = -1.0
    return Signomial(n, terms)


def make_g(n):
    """Two positive orbits (axis points over n, squares over n!) against two
    negative ones (the all-ones point, (1, ..., n) over n!)."""
    terms = {}
    for i in range(n):
        expt = [0] * n
        expt[i] = n * n
        terms[tuple(expt)] = 1.0 / n
    weight = 1.0 / math.factorial(n)
    _merge(terms, _orbit_terms(tuple(i * i for i in range(1, n + 1)), weight))
    _merge(terms, {(1,) * n: -1.0})
    _merge(terms, _orbit_terms(tuple(range(1, n + 1)), -weight))
    return Signomial(n, terms)


_BUILDERS = {
    "f1": make_f1,
    "f2": make_f2,
    "f3": make_f3,
    "f4": make_f4,
    "g": make_g,
}


def generate_family(name, n, cap=DEFAULT_FAMILY_CAP):
    """Instantiate a named family at dimension n.

    Returns the signomial together with the full symmetric group it is
    invariant under.  Factorial families refuse n beyond the cap.
    """
    if name not in _BUILDERS:
        raise ValueError(
            "unknown family %r (choose from %s)" % (name, ", ".join(FAMILY_NAMES))
        )
    if n < 2:
        raise ValueError("family %r needs n >= 2, got %d" % (name, n))
    if name in FACTORIAL_FAMILIES and n > cap:
        raise OrbitBudgetError(
            "family %r materializes %d! terms; n = %d exceeds the cap %d"
            % (name, n, n, cap)
        )
    return _BUILDERS[name](n), PermutationGroup.symmetric(n)
