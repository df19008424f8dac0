"""Assembly of relative-entropy programs for SAGE membership and bounds.

A signomial f = sum_a c_a exp(<a,x>) with positive support A and negative
support B lies in the SAGE cone iff for every beta in B there are vectors
nu, c >= 0 indexed by A with

    sum_a nu_a (a - beta) = 0,          (balance)
    sum_a nu_a log(nu_a/(e c_a)) <= c_beta,   (relative entropy)

and the per-beta budgets satisfy sum_beta c_a^(beta) <= c_a.  When f is
invariant under a permutation group G, one block per orbit representative
beta-hat suffices, with variables indexed by suborbits of A under
Stab(beta-hat), the balance rows projected onto the fixed subspace of
Stab(beta-hat), and exact stabilizer-ratio weights in the budget rows.

Programs are kept in a structured form (linear rows plus weighted
relative-entropy blocks); canonicalize() lowers them to equality rows plus
a cone of nonnegative slacks and three-dimensional exponential-cone triples
(-t - nu, nu, c), one triple per entropy term.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
import scipy.sparse as sp

from .combinatorics import count_to_float, predict_sizes
from .errors import BuildError, SchemaError
from .groups import DEFAULT_ORBIT_BUDGET, OrbitClass, PermutationGroup
from .signomials import require_invariant


# -- constraint regions ----------------------------------------------------


@dataclass(frozen=True)
class SupportRegion:
    """The set over which nonnegativity is certified: all of R^n or a box."""

    kind: str
    lower: tuple | None = None
    upper: tuple | None = None

    @classmethod
    def free(cls):
        return cls("free")

    @classmethod
    def box(cls, lower, upper):
        lower = tuple(float(v) for v in lower)
        upper = tuple(float(v) for v in upper)
        if len(lower) != len(upper):
            raise ValueError("box bounds must have equal length")
        if not all(math.isfinite(v) for v in lower + upper):
            raise ValueError("box bounds must be finite")
        if any(lo > hi for lo, hi in zip(lower, upper)):
            raise ValueError("box lower bound exceeds upper bound")
        return cls("box", lower, upper)

    def to_json_dict(self):
        if self.kind == "free":
            return {"kind": "free"}
        return {"kind": "box", "lower": list(self.lower), "upper": list(self.upper)}

    @classmethod
    def from_json_dict(cls, obj):
        if not isinstance(obj, dict) or "kind" not in obj:
            raise SchemaError("region must be an object with a 'kind'")
        if obj["kind"] == "free":
            return cls.free()
        if obj["kind"] == "box":
            return cls.box(obj["lower"], obj["upper"])
        raise SchemaError("unknown region kind %r" % (obj["kind"],))


def support_value(region, v):
    """sup_{x in region} <v, x>; +inf off the free region's orthogonal set."""
    if region.kind == "free":
        return 0.0 if all(c == 0 for c in v) else math.inf
    total = 0.0
    for c, lo, hi in zip(v, region.lower, region.upper):
        c = float(c)
        total += c * hi if c >= 0 else c * lo
    return total


# -- structured program -----------------------------------------------------


@dataclass
class RelEntropyBlock:
    """sum_k weight_k nu_k log(nu_k/(e c_k)) + <lhs_linear, x> <= rhs."""

    beta: tuple
    terms: list = field(default_factory=list)  # (nu_index, c_index, weight)
    lhs_linear: dict = field(default_factory=dict)
    rhs_linear: dict = field(default_factory=dict)
    rhs_constant: float = 0.0


@dataclass
class StructureClass:
    rep: tuple
    size: int
    parent_rep: tuple
    nu_index: int
    c_index: int


@dataclass
class StructureBlock:
    beta_rep: tuple
    orbit_size: int
    stab_order: int
    coefficient: float  # rhs before any lambda/delta adjustment
    shifted: bool  # True when this block's rhs carries -lambda
    scaled: bool  # True when this block's rhs is -delta*|coefficient|
    classes: list


@dataclass
class StructureASide:
    rep: tuple
    orbit_size: int
    stab_order: int
    coefficient: float
    has_bound_variable: bool
    row_index: int


@dataclass
class ProgramStructure:
    """Everything a certificate needs to know about how a program was built."""

    kind: str  # membership | bound | scale
    mode: str  # standard | reduced
    dimension: int
    group: PermutationGroup
    region: SupportRegion
    a_side: list
    blocks: list
    lam_index: int | None = None
    delta_index: int | None = None


class ConicProgram:
    """Structured relative-entropy program (pre-canonicalization)."""

    def __init__(self, dimension):
        self.dimension = dimension
        self.var_names = []
        self.nonneg = []
        self.objective = {}  # maximize sum objective[i] * x_i
        self.eq_rows = []  # (coeffs dict, rhs float)
        self.ineq_rows = []  # (coeffs dict, rhs float), meaning lhs <= rhs
        self.blocks = []
        self.structure = None

    def add_variable(self, name, nonneg):
        self.var_names.append(name)
        self.nonneg.append(bool(nonneg))
        return len(self.var_names) - 1

    @property
    def num_variables(self):
        return len(self.var_names)

    @property
    def num_constraints(self):
        return len(self.eq_rows) + len(self.ineq_rows) + len(self.blocks)

    def size_tuple(self):
        return (self.num_variables, self.num_constraints)


def _vec_str(vec):
    return ",".join(str(v) for v in vec)


def _check_region(region, dimension, group=None):
    if region is None:
        return SupportRegion.free()
    if region.kind == "box":
        if len(region.lower) != dimension:
            raise BuildError("box bounds do not match the signomial dimension")
        if group is not None:
            for orbit in group.position_orbits():
                los = {region.lower[i] for i in orbit}
                his = {region.upper[i] for i in orbit}
                if len(los) > 1 or len(his) > 1:
                    raise BuildError(
                        "box region is not invariant under the group "
                        "(bounds differ on coordinate orbit %r)" % (orbit,)
                    )
    return region


# -- standard (unreduced) construction --------------------------------------


def _build_standard_core(dimension, a_items, b_items, region, kind, force=False):
    """Prop.-2.1-style program: one block per beta in B, variables over all of A.

    a_items/b_items: ordered (exponent, coefficient) pairs; coefficients of
    b_items are the block right-hand sides.  kind selects no objective
    ('membership'), a free additive bound variable entering the origin rows
    ('bound'), or a multiplier on the negative coefficients ('scale').
    """
    if b_items and not a_items:
        raise BuildError("empty positive support with nonempty negative support")
    n = dimension
    origin = (0,) * n
    prog = ConicProgram(n)
    trivial = PermutationGroup.trivial(n)
    struct = ProgramStructure(
        kind=kind,
        mode="standard",
        dimension=n,
        group=trivial,
        region=region,
        a_side=[],
        blocks=[],
    )
    prog.structure = struct

    extra_index = None
    if kind == "bound" and b_items is not None:
        extra_index = prog.add_variable("lambda", nonneg=False)
        struct.lam_index = extra_index
        prog.objective = {extra_index: 1.0}
    elif kind == "scale":
        if not b_items:
            raise BuildError("no negative terms: the scale objective is unbounded")
        extra_index = prog.add_variable("delta", nonneg=False)
        struct.delta_index = extra_index
        prog.objective = {extra_index: 1.0}

    a_exponents = [e for e, _ in a_items]
    per_beta = {}
    for beta, cbeta in b_items:
        block = RelEntropyBlock(beta=beta)
        sblock = StructureBlock(
            beta_rep=beta,
            orbit_size=1,
            stab_order=1,
            coefficient=cbeta,
            shifted=False,
            scaled=False,
            classes=[],
        )
        cvars = {}
        for alpha in a_exponents:
            c_idx = prog.add_variable("c[%s][%s]" % (_vec_str(beta), _vec_str(alpha)), True)
            nu_idx = prog.add_variable("nu[%s][%s]" % (_vec_str(beta), _vec_str(alpha)), True)
            cvars[alpha] = c_idx
            block.terms.append((nu_idx, c_idx, 1.0))
            sblock.classes.append(
                StructureClass(rep=alpha, size=1, parent_rep=alpha, nu_index=nu_idx, c_index=c_idx)
            )
        per_beta[beta] = cvars

        # balance rows, one per coordinate (projected trivially)
        for i in range(n):
            row = {}
            for (nu_idx, _, _), alpha in zip(block.terms, a_exponents):
                coef = float(alpha[i] - beta[i])
                if coef != 0.0:
                    row[nu_idx] = coef
            if region.kind == "free":
                prog.eq_rows.append((row, 0.0))
            else:
                p_idx = prog.add_variable("pos[%s][%d]" % (_vec_str(beta), i), True)
                m_idx = prog.add_variable("neg[%s][%d]" % (_vec_str(beta), i), True)
                row[p_idx] = 1.0
                row[m_idx] = -1.0
                prog.eq_rows.append((row, 0.0))
                if region.upper[i] != 0.0:
                    block.lhs_linear[p_idx] = region.upper[i]
                if region.lower[i] != 0.0:
                    block.lhs_linear[m_idx] = -region.lower[i]

        block.rhs_constant = cbeta
        if kind == "bound" and beta == origin:
            block.rhs_linear[extra_index] = -1.0
            sblock.shifted = True
        elif kind == "scale":
            block.rhs_constant = 0.0
            block.rhs_linear[extra_index] = -abs(cbeta)
            sblock.scaled = True
        prog.blocks.append(block)
        struct.blocks.append(sblock)

    for alpha, calpha in a_items:
        row = {}
        for beta, _ in b_items:
            row[per_beta[beta][alpha]] = 1.0
        has_bound = kind == "bound" and alpha == origin
        if has_bound:
            row[extra_index] = 1.0
        prog.ineq_rows.append((row, calpha))
        struct.a_side.append(
            StructureASide(
                rep=alpha,
                orbit_size=1,
                stab_order=1,
                coefficient=calpha,
                has_bound_variable=has_bound,
                row_index=len(prog.ineq_rows) - 1,
            )
        )
    return prog


# -- symmetry-reduced construction -------------------------------------------


def _build_reduced_core(
    dimension,
    group,
    a_classes,
    b_classes,
    coeff_of,
    region,
    kind,
    budget=DEFAULT_ORBIT_BUDGET,
    force=False,
):
    """One entropy block per orbit representative beta-hat.

    Variables are indexed by suborbits of the full positive support under
    Stab(beta-hat); balance rows are summed over the coordinate orbits of
    Stab(beta-hat); budget rows carry exact |Stab(alpha-hat)|/|Stab(beta-hat)|
    ratios times suborbit sizes.
    """
    if b_classes and not a_classes:
        raise BuildError("empty positive support with nonempty negative support")
    n = dimension
    origin = (0,) * n
    prog = ConicProgram(n)
    struct = ProgramStructure(
        kind=kind,
        mode="reduced",
        dimension=n,
        group=group,
        region=region,
        a_side=[],
        blocks=[],
    )
    prog.structure = struct

    extra_index = None
    if kind == "bound":
        extra_index = prog.add_variable("lambda", nonneg=False)
        struct.lam_index = extra_index
        prog.objective = {extra_index: 1.0}
    elif kind == "scale":
        if not b_classes:
            raise BuildError("no negative terms: the scale objective is unbounded")
        extra_index = prog.add_variable("delta", nonneg=False)
        struct.delta_index = extra_index
        prog.objective = {extra_index: 1.0}

    a_full = []
    parent = {}
    for cls in a_classes:
        for el in cls.elements:
            a_full.append(el)
            parent[el] = cls.representative
    a_full.sort()

    stab_orders = {cls.representative: group.stabilizer_order(cls.representative) for cls in a_classes}

    # per a-hat accumulated budget row coefficients {var: Fraction}
    budget_rows = {cls.representative: {} for cls in a_classes}

    for bcls in b_classes:
        beta = bcls.representative
        stab = group.stabilizer(beta)
        stab_order = group.stabilizer_order(beta)
        suborbits = stab.orbit_partition(a_full) if a_full else []
        block = RelEntropyBlock(beta=beta)
        sblock = StructureBlock(
            beta_rep=beta,
            orbit_size=bcls.size,
            stab_order=stab_order,
            coefficient=coeff_of(beta),
            shifted=False,
            scaled=False,
            classes=[],
        )
        class_vars = []
        for sub in suborbits:
            c_idx = prog.add_variable(
                "c[%s][%s]" % (_vec_str(beta), _vec_str(sub.representative)), True
            )
            nu_idx = prog.add_variable(
                "nu[%s][%s]" % (_vec_str(beta), _vec_str(sub.representative)), True
            )
            block.terms.append((nu_idx, c_idx, count_to_float(sub.size, force, "suborbit size")))
            sblock.classes.append(
                StructureClass(
                    rep=sub.representative,
                    size=sub.size,
                    parent_rep=parent[sub.representative],
                    nu_index=nu_idx,
                    c_index=c_idx,
                )
            )
            class_vars.append((sub, nu_idx, c_idx))
            ratio = Fraction(stab_orders[parent[sub.representative]], stab_order) * sub.size
            budget_rows[parent[sub.representative]][c_idx] = ratio

        # balance rows projected onto Stab(beta)'s coordinate orbits
        for pblock in stab.position_orbits():
            row = {}
            for sub, nu_idx, _ in class_vars:
                total = 0
                for el in sub.elements:
                    for i in pblock:
                        total += el[i] - beta[i]
                if total != 0:
                    row[nu_idx] = count_to_float(total, force, "balance coefficient")
            if region.kind == "free":
                prog.eq_rows.append((row, 0.0))
            else:
                p_idx = prog.add_variable(
                    "pos[%s][%s]" % (_vec_str(beta), pblock[0]), True
                )
                m_idx = prog.add_variable(
                    "neg[%s][%s]" % (_vec_str(beta), pblock[0]), True
                )
                row[p_idx] = 1.0
                row[m_idx] = -1.0
                prog.eq_rows.append((row, 0.0))
                up = region.upper[pblock[0]]
                lo = region.lower[pblock[0]]
                if up != 0.0:
                    block.lhs_linear[p_idx] = up
                if lo != 0.0:
                    block.lhs_linear[m_idx] = -lo

        block.rhs_constant = coeff_of(beta)
        if kind == "bound" and beta == origin:
            block.rhs_linear[extra_index] = -1.0
            sblock.shifted = True
        elif kind == "scale":
            block.rhs_constant = 0.0
            block.rhs_linear[extra_index] = -abs(coeff_of(beta))
            sblock.scaled = True
        prog.blocks.append(block)
        struct.blocks.append(sblock)

    for cls in a_classes:
        rep = cls.representative
        row = {
            idx: count_to_float(val, force, "budget coefficient")
            for idx, val in sorted(budget_rows[rep].items())
        }
        has_bound = kind == "bound" and rep == origin
        if has_bound:
            row[extra_index] = 1.0
        prog.ineq_rows.append((row, coeff_of(rep)))
        struct.a_side.append(
            StructureASide(
                rep=rep,
                orbit_size=cls.size,
                stab_order=stab_orders[rep],
                coefficient=coeff_of(rep),
                has_bound_variable=has_bound,
                row_index=len(prog.ineq_rows) - 1,
            )
        )
    return prog


# -- public builders ---------------------------------------------------------


def _split_support(f):
    pos, neg = [], []
    for expt, coeff in f.terms.items():
        (pos if coeff > 0 else neg).append(expt)
    return sorted(pos), sorted(neg)


def build_membership_standard(f, region=None, force=False):
    """Feasibility program deciding membership of f in the SAGE cone."""
    region = _check_region(region, f.dimension)
    pos, neg = _split_support(f)
    a_items = [(e, f.terms[e]) for e in pos]
    b_items = [(e, f.terms[e]) for e in neg]
    return _build_standard_core(f.dimension, a_items, b_items, region, "membership", force)


def build_membership_reduced(f, group, region=None, budget=DEFAULT_ORBIT_BUDGET, force=False):
    """Symmetry-reduced membership program for a G-invariant signomial."""
    if group.degree != f.dimension:
        raise BuildError("group degree does not match signomial dimension")
    require_invariant(f, group)
    region = _check_region(region, f.dimension, group)
    pos, neg = _split_support(f)
    a_classes = group.orbit_representatives(pos) if pos else []
    b_classes = group.orbit_representatives(neg) if neg else []
    _check_budget(a_classes, budget)
    return _build_reduced_core(
        f.dimension, group, a_classes, b_classes, lambda e: f.terms.get(e, 0.0),
        region, "membership", budget, force,
    )


def _check_budget(a_classes, budget):
    total = sum(c.size for c in a_classes)
    if total > budget:
        raise BuildError(
            "positive support of size %d exceeds the materialization budget %d"
            % (total, budget)
        )


def _bound_supports(f):
    """A/B split for the bound program: the origin joins the positive side
    unless f already carries a negative origin coefficient."""
    n = f.dimension
    origin = (0,) * n
    pos, neg = _split_support(f)
    c0 = f.terms.get(origin, 0.0)
    if c0 >= 0 and origin not in pos:
        pos = sorted(pos + [origin])
    return pos, neg, origin


def build_bound_program(f, group=None, region=None, mode="reduced",
                        budget=DEFAULT_ORBIT_BUDGET, force=False):
    """maximize lambda subject to f - lambda in the SAGE cone.

    The bound variable enters through the origin: its coefficient inequality
    when the effective origin coefficient is nonnegative, the origin block's
    right-hand side when f has a negative origin coefficient.
    """
    if mode not in ("standard", "reduced"):
        raise BuildError("mode must be 'standard' or 'reduced'")
    pos, neg, origin = _bound_supports(f)
    coeff_of = lambda e: f.terms.get(e, 0.0)
    if mode == "standard":
        region = _check_region(region, f.dimension)
        a_items = [(e, coeff_of(e)) for e in pos]
        b_items = [(e, coeff_of(e)) for e in neg]
        return _build_standard_core(f.dimension, a_items, b_items, region, "bound", force)
    if group is None:
        raise BuildError("reduced mode requires a group")
    if group.degree != f.dimension:
        raise BuildError("group degree does not match signomial dimension")
    require_invariant(f, group)
    region = _check_region(region, f.dimension, group)
    a_classes = group.orbit_representatives(pos) if pos else []
    b_classes = group.orbit_representatives(neg) if neg else []
    _check_budget(a_classes, budget)
    return _build_reduced_core(
        f.dimension, group, a_classes, b_classes, coeff_of, region, "bound", budget, force
    )


def build_scale_program(f, group=None, region=None, mode="reduced",
                        budget=DEFAULT_ORBIT_BUDGET, force=False):
    """maximize delta subject to scaling every negative coefficient of f by
    delta while staying in the SAGE cone (the coefficient-maximization
    objective; f's negative coefficients set the relative scale pattern)."""
    if mode not in ("standard", "reduced"):
        raise BuildError("mode must be 'standard' or 'reduced'")
    pos, neg = _split_support(f)
    coeff_of = lambda e: f.terms.get(e, 0.0)
    if mode == "standard":
        region = _check_region(region, f.dimension)
        a_items = [(e, coeff_of(e)) for e in pos]
        b_items = [(e, coeff_of(e)) for e in neg]
        return _build_standard_core(f.dimension, a_items, b_items, region, "scale", force)
    if group is None:
        raise BuildError("reduced mode requires a group")
    if group.degree != f.dimension:
        raise BuildError("group degree does not match signomial dimension")
    require_invariant(f, group)
    region = _check_region(region, f.dimension, group)
    a_classes = group.orbit_representatives(pos) if pos else []
    b_classes = group.orbit_representatives(neg) if neg else []
    _check_budget(a_classes, budget)
    return _build_reduced_core(
        f.dimension, group, a_classes, b_classes, coeff_of, region, "scale", budget, force
    )


def predict_program_sizes(f, group=None, kind="bound", mode="reduced"):
    """Exact (variables, constraints) of a build, without building it.

    Uses the closed-form counts: double cosets for the reduced variable
    count, stabilizer fixed-subspace dimensions for the balance rows.  The
    result matches ConicProgram.size_tuple() of the corresponding builder
    for free regions (box regions add slack variables on top).
    """
    if kind not in ("membership", "bound", "scale"):
        raise BuildError("kind must be 'membership', 'bound' or 'scale'")
    if mode not in ("standard", "reduced"):
        raise BuildError("mode must be 'standard' or 'reduced'")
    if kind == "bound":
        pos, neg, _ = _bound_supports(f)
    else:
        pos, neg = _split_support(f)
    if mode == "standard":
        group = PermutationGroup.trivial(f.dimension)
    elif group is None:
        raise BuildError("reduced mode requires a group")
    a_classes = group.orbit_representatives(pos) if pos else []
    b_classes = group.orbit_representatives(neg) if neg else []
    return predict_sizes(
        a_classes, b_classes, group, mode,
        with_bound_variable=kind in ("bound", "scale"),
    )


# -- canonical conic form -----------------------------------------------------


@dataclass
class CanonicalProgram:
    """minimize c'x  s.t.  A x = b,  G x + s = h,  s in R+^l x (K_exp)^e.

    The cone section of (G, h) lists the l nonnegative slack rows first and
    then e exponential-cone triples of three consecutive rows (u, v, w) with
    v exp(u/v) <= w, v > 0 (closure).  Each entropy term nu log(nu/(e c))
    <= t maps to the triple (-t - nu, nu, c).
    """

    c: np.ndarray
    A: sp.csr_matrix
    b: np.ndarray
    G: sp.csr_matrix
    h: np.ndarray
    nonneg_rows: int
    exp_triples: int
    var_names: list
    num_program_vars: int
    objective_offset: float = 0.0
    source: object = None

    @property
    def num_vars(self):
        return len(self.var_names)


def canonicalize(prog):
    """Lower a structured program to canonical conic form (deterministic)."""
    n0 = prog.num_variables
    names = list(prog.var_names)
    t_index = {}
    for bi, block in enumerate(prog.blocks):
        for ti, (nu_idx, c_idx, _) in enumerate(block.terms):
            t_index[(bi, ti)] = len(names)
            names.append("t[%s]" % names[nu_idx][3:] if names[nu_idx].startswith("nu[")
                         else "t[%d.%d]" % (bi, ti))
    n = len(names)

    c = np.zeros(n)
    for idx, val in prog.objective.items():
        c[idx] = -val  # maximize -> minimize

    arows, acols, avals, b = [], [], [], []
    for r, (coeffs, rhs) in enumerate(prog.eq_rows):
        for idx, val in sorted(coeffs.items()):
            if val != 0.0:
                arows.append(r)
                acols.append(idx)
                avals.append(val)
        b.append(rhs)

    grows, gcols, gvals, h = [], [], [], []

    def add_cone_row(coeffs, rhs):
        r = len(h)
        for idx, val in sorted(coeffs.items()):
            if val != 0.0:
                grows.append(r)
                gcols.append(idx)
                gvals.append(val)
        h.append(rhs)

    covered = set()
    for block in prog.blocks:
        for nu_idx, c_idx, _ in block.terms:
            covered.add(nu_idx)
            covered.add(c_idx)

    # nonnegative slack section: declared-nonneg variables not already forced
    # by an exponential triple, then linear inequalities, then block rows
    for idx in range(n0):
        if prog.nonneg[idx] and idx not in covered:
            add_cone_row({idx: -1.0}, 0.0)
    for coeffs, rhs in prog.ineq_rows:
        add_cone_row(dict(coeffs), rhs)
    for bi, block in enumerate(prog.blocks):
        coeffs = dict(block.lhs_linear)
        for ti, (_, _, weight) in enumerate(block.terms):
            coeffs[t_index[(bi, ti)]] = weight
        for idx, val in block.rhs_linear.items():
            coeffs[idx] = coeffs.get(idx, 0.0) - val
        add_cone_row(coeffs, block.rhs_constant)
    nonneg_rows = len(h)

    exp_triples = 0
    for bi, block in enumerate(prog.blocks):
        for ti, (nu_idx, c_idx, _) in enumerate(block.terms):
            t_idx = t_index[(bi, ti)]
            add_cone_row({t_idx: 1.0, nu_idx: 1.0}, 0.0)  # u = -t - nu
            add_cone_row({nu_idx: -1.0}, 0.0)  # v = nu
            add_cone_row({c_idx: -1.0}, 0.0)  # w = c
            exp_triples += 1

    p = len(b)
    q = len(h)
    A = sp.csr_matrix((avals, (arows, acols)), shape=(p, n))
    G = sp.csr_matrix((gvals, (grows, gcols)), shape=(q, n))
    return CanonicalProgram(
        c=c,
        A=A,
        b=np.asarray(b, dtype=float),
        G=G,
        h=np.asarray(h, dtype=float),
        nonneg_rows=nonneg_rows,
        exp_triples=exp_triples,
        var_names=names,
        num_program_vars=n0,
        source=prog,
    )


# -- program JSON export ------------------------------------------------------


def _triplets(mat):
    coo = mat.tocoo()
    order = np.lexsort((coo.col, coo.row))
    return [[int(coo.row[k]), int(coo.col[k]), float(coo.data[k])] for k in order]


def export_program_json(obj):
    """Serialize a program's canonical conic data for external solvers."""
    can = canonicalize(obj) if isinstance(obj, ConicProgram) else obj
    return {
        "format": "program-json",
        "version": 1,
        "variables": list(can.var_names),
        "minimize": [float(v) for v in can.c],
        "objective_offset": can.objective_offset,
        "equalities": {
            "num_rows": int(can.A.shape[0]),
            "triplets": _triplets(can.A),
            "rhs": [float(v) for v in can.b],
        },
        "cone": {
            "num_rows": int(can.G.shape[0]),
            "triplets": _triplets(can.G),
            "rhs": [float(v) for v in can.h],
            "nonneg_rows": can.nonneg_rows,
            "exp_triples": can.exp_triples,
        },
        "notes": (
            "constraints: A x = b and s = h - G x with the first nonneg_rows "
            "entries of s componentwise nonnegative and the remaining rows "
            "grouped into exp_triples consecutive triples (u, v, w) lying in "
            "the exponential cone cl{v exp(u/v) <= w, v > 0}"
        ),
    }


def parse_program_json(obj):
    if isinstance(obj, str):
        obj = json.loads(obj)
    if not isinstance(obj, dict) or obj.get("format") != "program-json":
        raise SchemaError("not a program-json object")
    names = obj["variables"]
    n = len(names)
    eq = obj["equalities"]
    cone = obj["cone"]

    def mat(spec, rows):
        trip = spec["triplets"]
        data = [t[2] for t in trip]
        r = [t[0] for t in trip]
        col = [t[1] for t in trip]
        return sp.csr_matrix((data, (r, col)), shape=(rows, n))

    return CanonicalProgram(
        c=np.asarray(obj["minimize"], dtype=float),
        A=mat(eq, eq["num_rows"]),
        b=np.asarray(eq["rhs"], dtype=float),
        G=mat(cone, cone["num_rows"]),
        h=np.asarray(cone["rhs"], dtype=float),
        nonneg_rows=int(cone["nonneg_rows"]),
        exp_triples=int(cone["exp_triples"]),
        var_names=list(names),
        num_program_vars=n,
        objective_offset=float(obj.get("objective_offset", 0.0)),
    )
