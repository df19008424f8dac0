"""Finite permutation groups acting on exponent vectors.

A permutation sigma moves the value in coordinate i to coordinate sigma(i),
so (sigma . a)[sigma(i)] = a[i].  Two group flavours are supported:

* Young groups: direct products of full symmetric groups on disjoint blocks
  of coordinates.  The full symmetric group is the single-block case.  All
  Young operations (orbits, stabilizers, canonical forms, counting) use
  multiset combinatorics on the blocks and never enumerate group elements.
* Generated groups: an explicit generator list.  Elements are enumerated by
  breadth-first closure, capped at ENUMERATION_LIMIT; orbits and point
  stabilizers use orbit/transversal computations that only need the
  generators.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

from .errors import (
    GroupEnumerationError,
    NotClosedError,
    OrbitBudgetError,
    SchemaError,
)

ENUMERATION_LIMIT = 1_000_000
DEFAULT_ORBIT_BUDGET = 250_000


class Permutation:
    """A permutation of {0, ..., n-1} stored as an image table."""

    __slots__ = ("images",)

    def __init__(self, images):
        images = tuple(images)
        if sorted(images) != list(range(len(images))):
            raise ValueError("not a permutation of 0..n-1: %r" % (images,))
        self.images = images

    @classmethod
    def identity(cls, n):
        return cls(range(n))

    @classmethod
    def transposition(cls, n, i, j):
        images = list(range(n))
        images[i], images[j] = images[j], images[i]
        return cls(images)

    @classmethod
    def from_one_indexed(cls, images):
        try:
            shifted = [int(v) - 1 for v in images]
        except (TypeError, ValueError) as exc:
            raise SchemaError("generator entries must be integers") from exc
        if any(isinstance(v, bool) for v in images):
            raise SchemaError("generator entries must be integers")
        if sorted(shifted) != list(range(len(shifted))):
            raise SchemaError(
                "generator %r is not a 1-indexed permutation image table" % (list(images),)
            )
        return cls(shifted)

    def to_one_indexed(self):
        return [v + 1 for v in self.images]

    @property
    def degree(self):
        return len(self.images)

    def apply(self, vec):
        """Act on a sequence: the value at i moves to position images[i]."""
        out = [None] * len(self.images)
        for i, p in enumerate(self.images):
            out[p] = vec[i]
        return tuple(out)

    def compose(self, other):
        """self after other: (self*other).apply(v) == self.apply(other.apply(v))."""
        oi = other.images
        si = self.images
        return Permutation(si[oi[i]] for i in range(len(si)))

    __mul__ = compose

    def inverse(self):
        inv = [0] * len(self.images)
        for i, p in enumerate(self.images):
            inv[p] = i
        return Permutation(inv)

    def is_identity(self):
        return all(p == i for i, p in enumerate(self.images))

    def __eq__(self, other):
        return isinstance(other, Permutation) and self.images == other.images

    def __hash__(self):
        return hash(self.images)

    def __repr__(self):
        return "Permutation(%r)" % (list(self.images),)


def distinct_permutations(values):
    """Yield the distinct permutations of a multiset, ascending lex order.

    Classic next-permutation sweep; the number of iterations equals the
    number of distinct arrangements, so repeated values cost nothing extra.
    """
    a = sorted(values)
    n = len(a)
    if n == 0:
        yield ()
        return
    while True:
        yield tuple(a)
        i = n - 2
        while i >= 0 and not a[i] < a[i + 1]:
            i -= 1
        if i < 0:
            return
        j = n - 1
        while not a[i] < a[j]:
            j -= 1
        a[i], a[j] = a[j], a[i]
        a[i + 1 :] = a[: i : -1]


def _multiset_arrangements(values):
    """Number of distinct arrangements of a multiset (exact integer)."""
    counts = {}
    for v in values:
        counts[v] = counts.get(v, 0) + 1
    total = math.factorial(len(values))
    for c in counts.values():
        total //= math.factorial(c)
    return total


@dataclass(frozen=True)
class OrbitClass:
    """An orbit (or suborbit) with its canonical representative and size."""

    representative: tuple
    size: int
    elements: tuple | None = None

    def __iter__(self):
        if self.elements is None:
            raise ValueError("orbit elements were not materialized")
        return iter(self.elements)


class PermutationGroup:
    """A permutation group of fixed degree, Young or generator-presented."""

    def __init__(self, degree, *, blocks=None, generators=None, order_hint=None):
        if degree < 1:
            raise ValueError("degree must be positive")
        self.degree = degree
        if (blocks is None) == (generators is None):
            raise ValueError("exactly one of blocks/generators must be given")
        if blocks is not None:
            blocks = tuple(tuple(sorted(b)) for b in blocks)
            seen = sorted(i for b in blocks for i in b)
            if seen != list(range(degree)):
                raise ValueError("blocks must partition 0..degree-1")
            self.blocks = tuple(sorted(blocks))
            self.gens = None
        else:
            gens = tuple(generators)
            for g in gens:
                if g.degree != degree:
                    raise ValueError("generator degree mismatch")
            self.blocks = None
            self.gens = gens
        self._order = order_hint
        self._elements = None

    # -- constructors ---------------------------------------------------

    @classmethod
    def symmetric(cls, n):
        return cls(n, blocks=[tuple(range(n))])

    @classmethod
    def young(cls, blocks, degree):
        return cls(degree, blocks=blocks)

    @classmethod
    def from_generators(cls, generators, degree):
        return cls(degree, generators=generators)

    @classmethod
    def trivial(cls, n):
        return cls(n, generators=())

    # -- basic structure ------------------------------------------------

    @property
    def is_young(self):
        return self.blocks is not None

    @property
    def is_full_symmetric(self):
        return self.is_young and len(self.blocks) == 1

    def generators(self):
        """A generating set (adjacent block transpositions for Young groups)."""
        if self.is_young:
            gens = []
            for b in self.blocks:
                for i, j in zip(b, b[1:]):
                    gens.append(Permutation.transposition(self.degree, i, j))
            return tuple(gens)
        return self.gens

    def order(self):
        if self._order is None:
            if self.is_young:
                o = 1
                for b in self.blocks:
                    o *= math.factorial(len(b))
                self._order = o
            else:
                self._order = len(self.elements())
        return self._order

    def elements(self, limit=ENUMERATION_LIMIT):
        """All group elements.  Generated groups: BFS closure, hard-capped."""
        if self._elements is not None:
            return self._elements
        if self.is_young:
            if self.order() > limit:
                raise GroupEnumerationError(
                    "Young group of order %d exceeds the enumeration limit %d"
                    % (self.order(), limit)
                )
            per_block = []
            for b in self.blocks:
                per_block.append([list(p) for p in itertools.permutations(b)])
            elems = []
            for combo in itertools.product(*per_block):
                images = [0] * self.degree
                for b, arranged in zip(self.blocks, combo):
                    for pos, img in zip(b, arranged):
                        images[pos] = img
                elems.append(Permutation(images))
            self._elements = tuple(sorted(elems, key=lambda p: p.images))
            return self._elements
        ident = Permutation.identity(self.degree)
        seen = {ident}
        frontier = [ident]
        out = [ident]
        while frontier:
            nxt = []
            for p in frontier:
                for g in self.gens:
                    q = g.compose(p)
                    if q not in seen:
                        if len(seen) >= limit:
                            raise GroupEnumerationError(
                                "generated group exceeds the enumeration limit %d" % limit
                            )
                        seen.add(q)
                        nxt.append(q)
                        out.append(q)
            frontier = nxt
        self._elements = tuple(sorted(out, key=lambda p: p.images))
        return self._elements

    # -- orbits on exponent vectors --------------------------------------

    def _check_degree(self, vec):
        if len(vec) != self.degree:
            raise ValueError(
                "vector length %d does not match group degree %d" % (len(vec), self.degree)
            )

    def canonical_form(self, vec):
        """The lexicographically greatest element of the orbit of vec."""
        self._check_degree(vec)
        if self.is_young:
            out = list(vec)
            for b in self.blocks:
                vals = sorted((vec[i] for i in b), reverse=True)
                for pos, v in zip(b, vals):
                    out[pos] = v
            return tuple(out)
        return max(self._bfs_orbit(vec, DEFAULT_ORBIT_BUDGET))

    def orbit_size(self, vec):
        self._check_degree(vec)
        if self.is_young:
            size = 1
            for b in self.blocks:
                size *= _multiset_arrangements([vec[i] for i in b])
            return size
        return len(self._bfs_orbit(vec, DEFAULT_ORBIT_BUDGET))

    def stabilizer_order(self, vec):
        return self.order() // self.orbit_size(vec)

    def _bfs_orbit(self, vec, budget):
        vec = tuple(vec)
        seen = {vec}
        frontier = [vec]
        while frontier:
            nxt = []
            for v in frontier:
                for g in self.gens:
                    w = g.apply(v)
                    if w not in seen:
                        if len(seen) >= budget:
                            raise OrbitBudgetError(
                                "orbit exceeds the materialization budget %d" % budget
                            )
                        seen.add(w)
                        nxt.append(w)
            frontier = nxt
        return seen

    def orbit(self, vec, budget=DEFAULT_ORBIT_BUDGET):
        """Materialize the orbit of vec as an OrbitClass (elements sorted desc)."""
        self._check_degree(vec)
        if self.is_young:
            size = self.orbit_size(vec)
            if size > budget:
                raise OrbitBudgetError(
                    "orbit of size %d exceeds the materialization budget %d" % (size, budget)
                )
            per_block = []
            for b in self.blocks:
                per_block.append(list(distinct_permutations([vec[i] for i in b])))
            elems = []
            for combo in itertools.product(*per_block):
                out = list(vec)
                for b, vals in zip(self.blocks, combo):
                    for pos, v in zip(b, vals):
                        out[pos] = v
                elems.append(tuple(out))
            elems = sorted(elems, reverse=True)
            return OrbitClass(elems[0], size, tuple(elems))
        elems = sorted(self._bfs_orbit(vec, budget), reverse=True)
        return OrbitClass(elems[0], len(elems), tuple(elems))

    def stabilizer(self, vec):
        """The point stabilizer of vec as a PermutationGroup.

        Young groups refine their blocks by value (the stabilizer of a vector
        inside a Young group is again Young).  Generated groups build Schreier
        generators from an orbit transversal (sifting); the order is inherited
        from the orbit/stabilizer theorem rather than re-enumerated.
        """
        self._check_degree(vec)
        if self.is_young:
            refined = []
            for b in self.blocks:
                by_value = {}
                for i in b:
                    by_value.setdefault(vec[i], []).append(i)
                for key in sorted(by_value, reverse=True):
                    refined.append(tuple(by_value[key]))
            return PermutationGroup(self.degree, blocks=refined)
        vec = tuple(vec)
        transversal = {vec: Permutation.identity(self.degree)}
        frontier = [vec]
        schreier = []
        seen_gens = set()
        while frontier:
            nxt = []
            for v in frontier:
                u_v = transversal[v]
                for g in self.gens:
                    w = g.apply(v)
                    if w in transversal:
                        cand = transversal[w].inverse().compose(g).compose(u_v)
                        if not cand.is_identity() and cand.images not in seen_gens:
                            seen_gens.add(cand.images)
                            schreier.append(cand)
                    else:
                        if len(transversal) >= DEFAULT_ORBIT_BUDGET:
                            raise OrbitBudgetError(
                                "orbit exceeds the materialization budget %d"
                                % DEFAULT_ORBIT_BUDGET
                            )
                        transversal[w] = g.compose(u_v)
                        nxt.append(w)
            frontier = nxt
        hint = self.order() // len(transversal)
        return PermutationGroup(self.degree, generators=schreier, order_hint=hint)

    def orbit_representatives(self, vectors, require_closed=True):
        """Partition a finite closed set of vectors into orbits.

        Returns OrbitClass entries sorted by representative; the elements of
        each class are drawn from the input set (sorted descending, so
        elements[0] is the representative).  Raises NotClosedError when the
        set is not a union of orbits.
        """
        vectors = [tuple(v) for v in vectors]
        for v in vectors:
            self._check_degree(v)
        if len(set(vectors)) != len(vectors):
            raise ValueError("duplicate vectors in orbit partition input")
        if self.is_young:
            groups = {}
            for v in vectors:
                groups.setdefault(self.canonical_form(v), []).append(v)
            classes = []
            for rep in sorted(groups):
                members = sorted(groups[rep], reverse=True)
                size = self.orbit_size(rep)
                if require_closed and len(members) != size:
                    raise NotClosedError(
                        "set is not closed under the group: orbit of %r has size %d, "
                        "only %d present" % (rep, size, len(members))
                    )
                classes.append(OrbitClass(members[0], len(members), tuple(members)))
            return classes
        pool = set(vectors)
        classes = []
        seen = set()
        for v in vectors:
            if v in seen:
                continue
            orb = self._bfs_orbit(v, DEFAULT_ORBIT_BUDGET)
            if require_closed and not orb <= pool:
                missing = sorted(orb - pool)[0]
                raise NotClosedError(
                    "set is not closed under the group: %r is missing" % (missing,)
                )
            members = sorted(orb & pool, reverse=True)
            seen.update(members)
            classes.append(OrbitClass(members[0], len(members), tuple(members)))
        return sorted(classes, key=lambda c: c.representative)

    # suborbits of a subgroup are the same computation on the subgroup
    orbit_partition = orbit_representatives

    # -- coordinate structure ---------------------------------------------

    def position_orbits(self):
        """Orbits of the group on coordinate positions (sorted tuples)."""
        if self.is_young:
            return self.blocks
        parent = list(range(self.degree))

        def find(i):
            while parent[i] != i:
                parent[i] = parent[parent[i]]
                i = parent[i]
            return i

        for g in self.gens:
            for i, p in enumerate(g.images):
                ri, rp = find(i), find(p)
                if ri != rp:
                    parent[ri] = rp
        groups = {}
        for i in range(self.degree):
            groups.setdefault(find(i), []).append(i)
        return tuple(sorted(tuple(sorted(v)) for v in groups.values()))

    def fixed_subspace_dimension(self):
        return len(self.position_orbits())

    # -- transversal lookups ----------------------------------------------

    def mapping_to(self, source, target):
        """Some group element sending source to target (ValueError if none)."""
        source, target = tuple(source), tuple(target)
        self._check_degree(source)
        self._check_degree(target)
        if self.is_young:
            images = [None] * self.degree
            for b in self.blocks:
                by_value = {}
                for i in b:
                    by_value.setdefault(target[i], []).append(i)
                for i in b:
                    slots = by_value.get(source[i])
                    if not slots:
                        raise ValueError("target is not in the orbit of source")
                    images[i] = slots.pop()
            return Permutation(images)
        transversal = {source: Permutation.identity(self.degree)}
        frontier = [source]
        while frontier:
            nxt = []
            for v in frontier:
                for g in self.gens:
                    w = g.apply(v)
                    if w not in transversal:
                        if len(transversal) >= DEFAULT_ORBIT_BUDGET:
                            raise OrbitBudgetError(
                                "orbit exceeds the materialization budget %d"
                                % DEFAULT_ORBIT_BUDGET
                            )
                        transversal[w] = g.compose(transversal[v])
                        if w == target:
                            return transversal[w]
                        nxt.append(w)
            frontier = nxt
        if target == source:
            return transversal[source]
        raise ValueError("target is not in the orbit of source")

    def __repr__(self):
        if self.is_full_symmetric:
            return "PermutationGroup.symmetric(%d)" % self.degree
        if self.is_young:
            return "PermutationGroup.young(%r, %d)" % (list(self.blocks), self.degree)
        return "PermutationGroup.from_generators(<%d gens>, %d)" % (
            len(self.gens),
            self.degree,
        )


# -- JSON interface ------------------------------------------------------


def parse_group(obj):
    """Parse the group JSON schema: degree, kind, optional generators."""
    if not isinstance(obj, dict):
        raise SchemaError("group JSON must be an object")
    try:
        degree = obj["degree"]
        kind = obj["kind"]
    except KeyError as exc:
        raise SchemaError("group JSON requires 'degree' and 'kind'") from exc
    if not isinstance(degree, int) or isinstance(degree, bool) or degree < 1:
        raise SchemaError("'degree' must be a positive integer")
    if kind == "symmetric":
        return PermutationGroup.symmetric(degree)
    if kind == "generated":
        raw = obj.get("generators", [])
        if not isinstance(raw, list):
            raise SchemaError("'generators' must be a list of image tables")
        gens = []
        for table in raw:
            if not isinstance(table, list) or len(table) != degree:
                raise SchemaError(
                    "each generator must be a 1-indexed image table of length %d" % degree
                )
            gens.append(Permutation.from_one_indexed(table))
        return PermutationGroup.from_generators(gens, degree)
    raise SchemaError("unknown group kind %r (expected 'symmetric' or 'generated')" % (kind,))


def group_to_json_dict(group):
    if group.is_full_symmetric:
        return {"degree": group.degree, "kind": "symmetric"}
    return {
        "degree": group.degree,
        "kind": "generated",
        "generators": [g.to_one_indexed() for g in group.generators()],
    }
