"""Small fixed problem instances shared across the test modules."""

from symsage.groups import PermutationGroup
from symsage.signomials import Signomial


def make_scale_example():
    """Dimension-3 instance with an axis orbit, a center term and one
    negative orbit; the optimal scale multiplier is (9/4)**(1/3)."""
    f = Signomial(
        3,
        {
            (6, 0, 0): 1.0,
            (0, 6, 0): 1.0,
            (0, 0, 6): 1.0,
            (1, 1, 1): 1.0,
            (1, 2, 2): -1.0,
            (2, 1, 2): -1.0,
            (2, 2, 1): -1.0,
        },
    )
    return f, PermutationGroup.symmetric(3)

SCALE_EXAMPLE_OPTIMUM = (9.0 / 4.0) ** (1.0 / 3.0)


def make_axis_example():
    """Dimension-3 membership instance: degree-7 axis orbit plus origin on
    the positive side, two negative orbits."""
    f = Signomial(
        3,
        {
            (0, 0, 0): 1.0,
            (7, 0, 0): 1.0,
            (0, 7, 0): 1.0,
            (0, 0, 7): 1.0,
            (1, 1, 2): -1.0,
            (1, 2, 1): -1.0,
            (2, 1, 1): -1.0,
            (2, 2, 2): -1.0,
        },
    )
    return f, PermutationGroup.symmetric(3)


def make_hyperbolic_example():
    """exp(x) + exp(-x) - 2: nonnegative with a negative origin coefficient,
    so the bound variable must enter through the origin block."""
    return Signomial(1, {(1,): 1.0, (-1,): 1.0, (0,): -2.0})


def random_young_group(rng, n):
    """A random Young subgroup of S_n (sometimes the full group)."""
    if rng.random() < 0.4:
        return PermutationGroup.symmetric(n)
    positions = list(range(n))
    rng.shuffle(positions)
    blocks = []
    while positions:
        k = rng.randint(1, len(positions))
        blocks.append(tuple(positions[:k]))
        positions = positions[k:]
    return PermutationGroup.young(blocks, n)


def random_invariant_signomial(rng, group, max_terms=4, ensure_negative=True):
    """Symmetrize random terms; returns a nonzero group-invariant signomial."""
    from symsage.signomials import symmetrize

    n = group.degree
    while True:
        terms = {}
        for _ in range(rng.randint(1, max_terms)):
            e = tuple(rng.randint(0, 3) for _ in range(n))
            terms[e] = rng.uniform(0.2, 3.0)
        if ensure_negative:
            e = tuple(rng.randint(0, 3) for _ in range(n))
            terms[e] = -rng.uniform(0.2, 2.0)
        f = symmetrize(Signomial(n, terms), group)
        if f.terms:
            return f
