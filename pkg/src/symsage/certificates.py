"""Witness extraction, expansion and independent verification.

A solved program yields a reduced certificate: one entry per negative-orbit
representative holding the (c, nu) values of its suborbit classes, plus the
achieved bound or scale.  Expanding the certificate over coset
representatives reproduces the full AGE decomposition; verification
recomputes every condition from the signomial and the group alone, so a
certificate can be checked in a separate process from the solve.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import CertificateError, OrbitBudgetError, SchemaError
from .groups import DEFAULT_ORBIT_BUDGET, parse_group, group_to_json_dict
from .signomials import Signomial, format_exponent_entry, parse_exponent_entry

CERTIFICATE_FORMAT = "symsage-certificate"
CERTIFICATE_VERSION = 1

# interior-point noise on nonnegative variables: values in [-FLOOR, 0) are
# rounded up to 0, anything more negative invalidates the certificate
NOISE_FLOOR = 1e-12

# total term count allowed when materializing a full AGE decomposition
DEFAULT_EXPANSION_BUDGET = 5_000_000


@dataclass
class CertificateClass:
    """One suborbit of the positive support under Stab(beta)."""

    rep: tuple
    size: int
    parent: tuple  # representative of rep's full-group orbit
    c: float
    nu: float


@dataclass
class CertificateBlock:
    beta: tuple
    coefficient: float  # f's coefficient at beta, before any bound/scale shift
    shifted: bool  # bound variable enters this block's right-hand side
    scaled: bool  # right-hand side is -objective * |coefficient|
    classes: list = field(default_factory=list)

    def rhs(self, objective):
        """The admissible entropy level, which is also the coefficient the
        expanded AGE signomial carries at beta."""
        if self.scaled:
            return -abs(self.coefficient) * objective
        if self.shifted:
            return self.coefficient - objective
        return self.coefficient


@dataclass
class ReducedCertificate:
    kind: str  # membership | bound | scale
    mode: str  # standard | reduced
    dimension: int
    group: object
    objective: float | None  # achieved lambda (bound) or delta (scale)
    blocks: list
    a_side: list  # (representative, coefficient) pairs over the positive orbits

    def to_json_dict(self):
        return {
            "format": CERTIFICATE_FORMAT,
            "version": CERTIFICATE_VERSION,
            "kind": self.kind,
            "mode": self.mode,
            "dimension": self.dimension,
            "objective": self.objective,
            "group": group_to_json_dict(self.group),
            "a_side": [
                {
                    "rep": [format_exponent_entry(v) for v in rep],
                    "coefficient": coeff,
                }
                for rep, coeff in self.a_side
            ],
            "blocks": [
                {
                    "beta": [format_exponent_entry(v) for v in blk.beta],
                    "coefficient": blk.coefficient,
                    "shifted": blk.shifted,
                    "scaled": blk.scaled,
                    "classes": [
                        {
                            "rep": [format_exponent_entry(v) for v in cls.rep],
                            "size": cls.size,
                            "parent": [format_exponent_entry(v) for v in cls.parent],
                            "c": cls.c,
                            "nu": cls.nu,
                        }
                        for cls in blk.classes
                    ],
                }
                for blk in self.blocks
            ],
        }

    def dumps(self, indent=None):
        return json.dumps(self.to_json_dict(), indent=indent, sort_keys=True)

    @classmethod
    def from_json_dict(cls, obj):
        if not isinstance(obj, dict):
            raise SchemaError("certificate JSON must be an object")
        if obj.get("format") != CERTIFICATE_FORMAT:
            raise SchemaError("not a %s document" % CERTIFICATE_FORMAT)
        if obj.get("version") != CERTIFICATE_VERSION:
            raise SchemaError(
                "unsupported certificate version %r" % (obj.get("version"),)
            )
        try:
            kind = obj["kind"]
            mode = obj["mode"]
            dimension = obj["dimension"]
            group = parse_group(obj["group"])
            raw_a = obj["a_side"]
            raw_blocks = obj["blocks"]
        except KeyError as exc:
            raise SchemaError("certificate JSON is missing %s" % exc) from exc
        if kind not in ("membership", "bound", "scale"):
            raise SchemaError("unknown certificate kind %r" % (kind,))
        objective = obj.get("objective")
        if objective is not None:
            objective = float(objective)
        a_side = [
            (_parse_vec(entry, "rep", dimension), float(entry["coefficient"]))
            for entry in _expect_list(raw_a, "a_side")
        ]
        blocks = []
        for entry in _expect_list(raw_blocks, "blocks"):
            classes = [
                CertificateClass(
                    rep=_parse_vec(c, "rep", dimension),
                    size=int(c["size"]),
                    parent=_parse_vec(c, "parent", dimension),
                    c=float(c["c"]),
                    nu=float(c["nu"]),
                )
                for c in _expect_list(entry.get("classes", []), "classes")
            ]
            blocks.append(
                CertificateBlock(
                    beta=_parse_vec(entry, "beta", dimension),
                    coefficient=float(entry["coefficient"]),
                    shifted=bool(entry.get("shifted", False)),
                    scaled=bool(entry.get("scaled", False)),
                    classes=classes,
                )
            )
        return cls(kind, mode, int(dimension), group, objective, blocks, a_side)

    @classmethod
    def loads(cls, text):
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise SchemaError("invalid JSON: %s" % exc) from exc
        return cls.from_json_dict(obj)


def _expect_list(value, what):
    if not isinstance(value, list):
        raise SchemaError("certificate %r must be a list" % what)
    return value


def _parse_vec(entry, key, dimension):
    raw = entry.get(key)
    if not isinstance(raw, list) or len(raw) != dimension:
        raise SchemaError("%r must be a list of length %d" % (key, dimension))
    return tuple(parse_exponent_entry(v) for v in raw)


@dataclass
class AGEDecomposition:
    """Full per-beta decomposition: each part has at most one negative
    coefficient, located at its beta."""

    dimension: int
    betas: list
    parts: list  # Signomial per beta, aligned with betas

    def total(self):
        out = {}
        for part in self.parts:
            for expt, coeff in part.terms.items():
                out[expt] = out.get(expt, 0.0) + coeff
        return Signomial(self.dimension, out)


# -- extraction ---------------------------------------------------------------


def _floor_value(v, what):
    if v >= 0.0:
        return float(v)
    if v >= -NOISE_FLOOR:
        return 0.0
    raise CertificateError(
        "%s is negative beyond the noise floor (%.3e)" % (what, v)
    )


def extract_certificate(result, program):
    """Read the witness out of a solved program's point.

    Tiny negatives on the nonnegative variables are floored to zero, and any
    slack left in a coefficient-budget row is folded into one covering class
    so that the expanded decomposition reconstructs the shifted signomial
    exactly rather than up to the slack.
    """
    status = getattr(result, "status", None)
    if status is not None and getattr(status, "value", status) != "Optimal":
        raise CertificateError(
            "only optimal solves carry a certificate (status %s)"
            % getattr(status, "value", status)
        )
    source = getattr(program, "source", None)
    if source is not None:
        program = source
    struct = getattr(program, "structure", None)
    if struct is None:
        raise CertificateError("program carries no structure metadata")
    if struct.region is not None and struct.region.kind != "free":
        raise CertificateError(
            "certificate extraction supports unconstrained programs only"
        )
    x = result.x_program
    if x.size < program.num_variables:
        raise CertificateError("solver point does not cover the program variables")

    objective = None
    if struct.lam_index is not None:
        objective = float(x[struct.lam_index])
    elif struct.delta_index is not None:
        objective = float(x[struct.delta_index])

    blocks = []
    for sblock in struct.blocks:
        classes = [
            CertificateClass(
                rep=cls.rep,
                size=cls.size,
                parent=cls.parent_rep,
                c=_floor_value(x[cls.c_index], "c[%r][%r]" % (sblock.beta_rep, cls.rep)),
                nu=_floor_value(x[cls.nu_index], "nu[%r][%r]" % (sblock.beta_rep, cls.rep)),
            )
            for cls in sblock.classes
        ]
        blocks.append(
            CertificateBlock(
                beta=sblock.beta_rep,
                coefficient=sblock.coefficient,
                shifted=sblock.shifted,
                scaled=sblock.scaled,
                classes=classes,
            )
        )

    # tighten the budget rows: move leftover slack into one covering class
    # (raising a c value only relaxes its entropy condition)
    stab_orders = {b.beta_rep: b.stab_order for b in struct.blocks}
    for aside in struct.a_side:
        total = Fraction(0)
        lhs = 0.0
        covering = None
        for blk in blocks:
            for cls in blk.classes:
                if cls.parent != aside.rep:
                    continue
                ratio = Fraction(aside.stab_order, stab_orders[blk.beta]) * cls.size
                lhs += float(ratio) * cls.c
                if covering is None:
                    covering = (cls, ratio)
        if aside.has_bound_variable and objective is not None:
            lhs += objective
        slack = aside.coefficient - lhs
        if slack > 0.0 and covering is not None:
            cls, ratio = covering
            cls.c += slack / float(ratio)

    return ReducedCertificate(
        kind=struct.kind,
        mode=struct.mode,
        dimension=struct.dimension,
        group=struct.group,
        objective=objective,
        blocks=blocks,
        a_side=[(a.rep, a.coefficient) for a in struct.a_side],
    )


# -- expansion ----------------------------------------------------------------


def expand_certificate(cert, budget=DEFAULT_EXPANSION_BUDGET):
    """Materialize the full AGE decomposition, one signomial per negative
    exponent, by pushing each block through a transversal of its orbit."""
    group = cert.group
    objective = cert.objective if cert.objective is not None else 0.0

    total_terms = 0
    betas = []
    parts = []
    for blk in cert.blocks:
        stab = group.stabilizer(blk.beta)
        base = {}
        for cls in blk.classes:
            if cls.c == 0.0:
                continue
            for el in stab.orbit(cls.rep).elements:
                base[el] = base.get(el, 0.0) + cls.c
        base[blk.beta] = base.get(blk.beta, 0.0) + blk.rhs(objective)

        orbit = group.orbit(blk.beta)
        total_terms += orbit.size * max(1, len(base))
        if total_terms > budget:
            raise OrbitBudgetError(
                "expansion of more than %d terms exceeds the budget %d"
                % (total_terms, budget)
            )
        for target in orbit.elements:
            rho = group.mapping_to(blk.beta, target)
            betas.append(target)
            parts.append(
                Signomial(
                    cert.dimension,
                    {rho.apply(expt): coeff for expt, coeff in base.items()},
                )
            )
    return AGEDecomposition(cert.dimension, betas, parts)


# -- verification -------------------------------------------------------------


@dataclass
class CertificateReport:
    """Worst violations of the certificate conditions, one entry per check.

    balance, entropy and budget are the three feasibility conditions of the
    reduced witness; nonneg is the most negative stored value; reconstruction
    is the largest coefficient deviation between the expanded decomposition
    and the target signomial (None when the expansion exceeds its budget and
    the check is skipped).
    """

    tolerance: float
    balance: float = 0.0
    entropy: float = 0.0
    budget: float = 0.0
    nonneg: float = 0.0
    reconstruction: float | None = 0.0
    problems: list = field(default_factory=list)

    @property
    def passed(self):
        if self.problems:
            return False
        checks = [self.balance, self.entropy, self.budget, self.nonneg]
        if any(not (v <= self.tolerance) for v in checks):
            return False
        if self.reconstruction is not None:
            return self.reconstruction <= 10.0 * self.tolerance
        return True

    def summary(self):
        recon = (
            "skipped" if self.reconstruction is None
            else "%.3e" % self.reconstruction
        )
        lines = [
            "balance        %.3e" % self.balance,
            "entropy        %.3e" % self.entropy,
            "budget         %.3e" % self.budget,
            "nonnegativity  %.3e" % self.nonneg,
            "reconstruction %s" % recon,
            "result         %s" % ("pass" if self.passed else "FAIL"),
        ]
        lines.extend("problem: %s" % p for p in self.problems)
        return "\n".join(lines)


def _neumaier(values):
    """Compensated summation; float noise stays near one ulp of the total."""
    total = 0.0
    comp = 0.0
    for v in values:
        t = total + v
        if abs(total) >= abs(v):
            comp += (total - t) + v
        else:
            comp += (v - t) + total
        total = t
    return total + comp


def _block_entropy(classes):
    """Weighted relative entropy sum D(nu, e*c); +inf when some c vanishes
    under positive nu (the 'y ln(y/0) = inf' convention)."""
    parts = []
    for cls in classes:
        if cls.nu == 0.0:
            continue
        if cls.c <= 0.0:
            return math.inf
        parts.append(float(cls.size) * cls.nu * (math.log(cls.nu / cls.c) - 1.0))
    return _neumaier(parts)


def _split_signs(f):
    pos, neg = [], []
    for expt, coeff in f.terms.items():
        (pos if coeff > 0 else neg).append(expt)
    return sorted(pos), sorted(neg)


def _target_terms(f, cert):
    """The signomial the expansion must reconstruct."""
    origin = (0,) * cert.dimension
    terms = dict(f.terms)
    if cert.kind == "bound":
        lam = cert.objective or 0.0
        terms[origin] = terms.get(origin, 0.0) - lam
        if terms[origin] == 0.0:
            del terms[origin]
    elif cert.kind == "scale":
        delta = cert.objective or 0.0
        terms = {
            expt: (coeff if coeff > 0 else delta * coeff)
            for expt, coeff in terms.items()
        }
    return terms


def verify_certificate(f, cert, tol=1e-6, expansion_budget=DEFAULT_EXPANSION_BUDGET):
    """Re-derive every certificate condition from f and the group alone.

    Checks, each contributing its worst violation to the report: the structure
    (blocks cover the negative orbits, classes partition the positive
    support), the projected balance equalities, the weighted entropy
    inequalities, the coefficient-budget inequalities with exact orbit
    ratios, nonnegativity of the stored values, and the coefficient-exact
    reconstruction of the target by the expanded decomposition.  Failures
    land in the report; nothing raises.
    """
    report = CertificateReport(tolerance=tol)
    group = cert.group
    if group.degree != f.dimension or cert.dimension != f.dimension:
        report.problems.append("dimension mismatch between f, group and certificate")
        return report

    origin = (0,) * f.dimension
    pos, neg = _split_signs(f)
    if cert.kind == "bound" and f.terms.get(origin, 0.0) >= 0 and origin not in pos:
        pos = sorted(pos + [origin])

    try:
        a_classes = group.orbit_representatives(pos) if pos else []
        b_classes = group.orbit_representatives(neg) if neg else []
    except Exception as exc:
        report.problems.append("support is not a union of orbits: %s" % exc)
        return report

    a_reps = {cls.representative: cls for cls in a_classes}
    expected_betas = {cls.representative for cls in b_classes}
    got_betas = {blk.beta for blk in cert.blocks}
    if got_betas != expected_betas:
        report.problems.append(
            "certificate blocks do not match the negative orbits of f"
        )
        return report

    objective = cert.objective if cert.objective is not None else 0.0
    a_total = sum(cls.size for cls in a_classes)
    stab_orders = {rep: group.stabilizer_order(rep) for rep in a_reps}

    # nonnegativity of stored values
    low = 0.0
    for blk in cert.blocks:
        for cls in blk.classes:
            low = min(low, cls.c, cls.nu)
    report.nonneg = -low

    budget_lhs = {rep: [] for rep in a_reps}
    for blk in cert.blocks:
        stab = group.stabilizer(blk.beta)
        beta_stab_order = group.stabilizer_order(blk.beta)

        covered = 0
        ok = True
        for cls in blk.classes:
            if cls.parent not in a_reps or group.canonical_form(cls.rep) != cls.parent:
                report.problems.append(
                    "class %r of block %r does not lie in the positive support"
                    % (cls.rep, blk.beta)
                )
                ok = False
                continue
            size = stab.orbit_size(cls.rep)
            if size != cls.size:
                report.problems.append(
                    "class %r of block %r has size %d, stored %d"
                    % (cls.rep, blk.beta, size, cls.size)
                )
                ok = False
            covered += size
        if covered != a_total:
            report.problems.append(
                "classes of block %r do not partition the positive support"
                % (blk.beta,)
            )
            ok = False
        if not ok:
            continue

        # balance equalities projected on Stab(beta)'s coordinate orbits
        suborbit_elems = {cls.rep: stab.orbit(cls.rep).elements for cls in blk.classes}
        for pblock in stab.position_orbits():
            terms = []
            for cls in blk.classes:
                coef = 0
                for el in suborbit_elems[cls.rep]:
                    for i in pblock:
                        coef += el[i] - blk.beta[i]
                if coef:
                    terms.append(cls.nu * float(coef))
            residual = abs(_neumaier(terms))
            scale = max(1.0, sum(abs(t) for t in terms))
            report.balance = max(report.balance, residual / scale)

        # entropy inequality against the shifted right-hand side
        rhs = blk.rhs(objective)
        value = _block_entropy(blk.classes)
        report.entropy = max(
            report.entropy, max(0.0, value - rhs) / max(1.0, abs(rhs))
        )

        # accumulate this block's contributions to the budget rows
        for cls in blk.classes:
            ratio = Fraction(stab_orders[cls.parent], beta_stab_order) * cls.size
            budget_lhs[cls.parent].append(float(ratio) * cls.c)

    for rep, contributions in budget_lhs.items():
        lhs = _neumaier(contributions)
        rhs = f.terms.get(rep, 0.0)
        if cert.kind == "bound" and rep == origin:
            lhs += objective
        report.budget = max(
            report.budget, max(0.0, lhs - rhs) / max(1.0, abs(rhs))
        )

    # reconstruction: the expanded decomposition must reproduce the target
    if cert.blocks:
        try:
            expansion = expand_certificate(cert, budget=expansion_budget)
        except OrbitBudgetError:
            report.reconstruction = None
        else:
            achieved = expansion.total().terms
            target = _target_terms(f, cert)
            deviation = 0.0
            for expt in set(achieved) | set(target):
                deviation = max(
                    deviation,
                    abs(achieved.get(expt, 0.0) - target.get(expt, 0.0)),
                )
            report.reconstruction = deviation
    else:
        # no blocks: the target must already be a posynomial
        target = _target_terms(f, cert)
        worst = min(target.values(), default=0.0)
        report.reconstruction = max(0.0, -worst)
    return report
