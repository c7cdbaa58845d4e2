"""R-infinity verdicts with derivation traces.

Each decision procedure applies one sufficient condition and returns a
Verdict whose trace names the rule, states it, and lists the premises (by
step id) it consumed.  Verdicts are three-valued with provenance: the rules
are sufficient conditions, so absence of proof is never reported as disproof.

The combined strategy tries, in order: recorded literature facts, the
finite-survivor theorem, the finite-obstruction-set theorems, the direct
product theorem, the free product theorem, and finally the quotient by a
finite characteristic torsion subgroup; the strongest verdict wins, earliest
rule breaking ties.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import expressions as ex
from .abelian import matrix_rank
from .catalog import lookup_invariants
from .cones import O_CLASS_0, O_CLASS_1, O_CLASS_2, o_class_of

RINFINITY = "RInfinity"
INDEX_TWO = "IndexTwoSubgroupAllRInf"
FINITE_INDEX = "FiniteIndexSubgroupAllRInf"
RVALUE = "ReidemeisterValue"
UNKNOWN = "Unknown"

_STRENGTH = {RINFINITY: 4, INDEX_TWO: 3, FINITE_INDEX: 2, RVALUE: 1, UNKNOWN: 0}

RULE_STATEMENTS = {
    "CatalogFact": "recorded fact with literature citation",
    "ProductFormula": "the surviving-direction set of a direct product is the "
                      "spherical join of the factor sets",
    "ComplementFormula": "the level-one obstruction set of a direct product is the "
                         "union of the embedded factor obstruction sets",
    "FreeProductVanishing": "non-trivial free products have empty surviving-direction "
                            "sets at every level",
    "ThmMain1": "a single rational surviving direction forces infinitely many twisted "
                "conjugacy classes for every automorphism",
    "ThmMain2": "an antipodal rational pair of surviving directions forces an index-two "
                "subgroup of the automorphism group all of whose members have infinitely "
                "many twisted conjugacy classes",
    "ThmGK1": "a non-empty finite set of rational obstructed characters yields a "
              "finite-index subgroup of automorphisms with infinitely many twisted "
              "conjugacy classes",
    "ThmGK2": "obstructed characters that are linearly independent span the dual of the "
              "common-kernel quotient, and then every automorphism has infinitely many "
              "twisted conjugacy classes",
    "ThmFreeProd1": "a free product of two or more non-trivial finite freely "
                    "indecomposable groups has the R-infinity property",
    "ThmFreeProd2": "a free product with one factor of class O^m_1 and every other "
                    "factor of class O^k_0 with k <= m has the R-infinity property",
    "ThmFreeProd3": "a free product whose factor direct product has the R-infinity "
                    "property and which has an abelian factor not infinite cyclic has "
                    "the R-infinity property",
    "ThmSec5Prod1": "H x K has the R-infinity property when H has class O^n_1 and K has "
                    "class O^m_0 with m <= n",
    "ThmSec5Prod2": "Aut(H x K) has an index-two subgroup with infinite Reidemeister "
                    "number throughout when H has class O^n_2 and K has class O^m_0 "
                    "with m <= n",
    "LemRFacts1": "if the induced automorphism on a quotient by a characteristic "
                  "subgroup has infinitely many twisted classes, so does the original",
    "LemRFacts2": "if the induced quotient automorphism has a finite fixed subgroup and "
                  "the restriction to the kernel has infinitely many twisted classes, "
                  "so does the original",
    "LemRFacts3": "for a central extension the twisted class counts multiply: "
                  "R(phi) = R(phi') * R(phi-bar)",
}


@dataclass(frozen=True)
class TraceStep:
    step_id: str
    rule: str
    detail: str
    premises: tuple[str, ...] = ()

    def to_json_dict(self) -> dict:
        return {"id": self.step_id, "rule": self.rule,
                "quote": RULE_STATEMENTS.get(self.rule, ""),
                "detail": self.detail, "premises": list(self.premises)}


@dataclass(frozen=True)
class Verdict:
    conclusion: str
    trace: tuple[TraceStep, ...] = ()
    value: int | float | None = None
    notes: tuple[str, ...] = ()

    @property
    def strength(self) -> int:
        return _STRENGTH[self.conclusion]

    def final_rule(self) -> str | None:
        return self.trace[-1].rule if self.trace else None

    def rules(self) -> list[str]:
        return [s.rule for s in self.trace]

    def to_json_dict(self) -> dict:
        out = {"conclusion": self.conclusion,
               "trace": [s.to_json_dict() for s in self.trace]}
        if self.conclusion == RVALUE:
            out["value"] = "infinity" if self.value == math.inf else self.value
        if self.notes:
            out["notes"] = list(self.notes)
        return out


class _TraceBuilder:
    def __init__(self, prefix: str = "s"):
        self.steps: list[TraceStep] = []
        self.prefix = prefix

    def add(self, rule: str, detail: str, premises=()) -> str:
        step_id = "%s%d" % (self.prefix, len(self.steps) + 1)
        self.steps.append(TraceStep(step_id, rule, detail, tuple(premises)))
        return step_id

    def absorb(self, other: tuple[TraceStep, ...]) -> list[str]:
        """Import another verdict's steps, re-identified; returns the new ids."""
        mapping: dict[str, str] = {}
        new_ids = []
        for step in other:
            new_premises = tuple(mapping.get(p, p) for p in step.premises)
            new_id = self.add(step.rule, step.detail, new_premises)
            mapping[step.step_id] = new_id
            new_ids.append(new_id)
        return new_ids

    def done(self, conclusion: str, value=None, notes=()) -> Verdict:
        return Verdict(conclusion, tuple(self.steps), value, tuple(notes))


def _omega_evidence(expr: ex.GroupExpr, level: int, trace: _TraceBuilder) -> str | None:
    """Record how the surviving-direction set of expr was obtained; returns the
    final step id, or None if the set is unknown."""
    inv = lookup_invariants(expr)
    omega = inv.omega_at(level)
    if omega is None:
        return None
    if expr.node == "atom":
        return trace.add("CatalogFact",
                         "surviving directions of %s at level %d: %s"
                         % (expr.label(), level, omega.cardinality().describe()))
    if expr.node == "free":
        return trace.add("FreeProductVanishing",
                         "surviving directions of %s are empty" % expr.label())
    premises = []
    for f in expr.factors:
        pid = _omega_evidence(f, level, trace)
        if pid is None:
            return None
        premises.append(pid)
    return trace.add("ProductFormula",
                     "join of the factor sets of %s" % expr.label(), premises)


# ---------------------------------------------------------------------------
# individual rules


def decide_main(expr: ex.GroupExpr, level: int = 1) -> Verdict:
    """Finite-survivor rule: one rational direction gives the full property,
    an antipodal rational pair gives an index-two subgroup."""
    trace = _TraceBuilder()
    inv = lookup_invariants(expr)
    omega = inv.omega_at(level)
    if omega is None:
        return Verdict(UNKNOWN, notes=("surviving-direction set unknown at level %d" % level,))
    evidence = _omega_evidence(expr, level, trace)
    card = omega.cardinality()
    if card.kind == "finite" and card.count == 1:
        trace.add("ThmMain1",
                  "%s has exactly one surviving rational direction %s at level %d"
                  % (expr.label(), card.points[0].coords, level),
                  (evidence,))
        return trace.done(RINFINITY)
    if card.kind == "finite" and card.count == 2 and omega.is_antipodal_pair():
        trace.add("ThmMain2",
                  "%s has the antipodal rational pair %s at level %d"
                  % (expr.label(), tuple(p.coords for p in card.points), level),
                  (evidence,))
        return trace.done(INDEX_TWO)
    return Verdict(UNKNOWN,
                   notes=("surviving-direction cardinality %s matches no finite-survivor rule"
                          % card.describe(),))


def decide_gk(expr: ex.GroupExpr) -> Verdict:
    """Finite-obstruction rule, with the basis upgrade when the obstructed
    characters are linearly independent."""
    inv = lookup_invariants(expr)
    sigma_c = inv.sigma1_complement
    if sigma_c is None:
        return Verdict(UNKNOWN, notes=("level-one obstruction set unknown",))
    card = sigma_c.cardinality()
    if card.kind != "finite":
        return Verdict(UNKNOWN,
                       notes=("obstruction set is %s; the finite-obstruction rule needs a "
                              "non-empty finite set" % card.describe(),))
    trace = _TraceBuilder()
    fact = trace.add("CatalogFact",
                     "obstructed characters of %s: %s"
                     % (expr.label(), [p.coords for p in card.points]))
    gk1 = trace.add("ThmGK1", "%d rational obstructed characters" % card.count, (fact,))
    stacked = [list(p.coords) for p in card.points]
    rank = matrix_rank(stacked)
    if rank == card.count:
        # the characters embed the common-kernel quotient in R^count with full
        # rank, so they form a basis of its dual
        trace.add("ThmGK2",
                  "the %d characters are linearly independent and the quotient "
                  "lattice has matching rank %d" % (card.count, rank), (gk1,))
        return trace.done(RINFINITY)
    return trace.done(FINITE_INDEX)


def decide_product(expr: ex.GroupExpr, level: int = 1) -> Verdict:
    """Direct product rule: one factor carries the finite survivor class, the
    complementary factor(s) carry none."""
    if expr.node != "direct":
        return Verdict(UNKNOWN, notes=("not a direct product",))
    for j, head in enumerate(expr.factors):
        rest = [f for i, f in enumerate(expr.factors) if i != j]
        rest_expr = rest[0] if len(rest) == 1 else ex.direct_product(rest)
        head_class = o_class_of(lookup_invariants(head).omega_at(level))
        rest_class = o_class_of(lookup_invariants(rest_expr).omega_at(level))
        if rest_class != O_CLASS_0:
            continue
        if head_class == O_CLASS_1:
            trace = _TraceBuilder()
            h = trace.add("CatalogFact", "%s has class O^%d_1" % (head.label(), level))
            k = trace.add("CatalogFact", "%s has class O^%d_0" % (rest_expr.label(), level))
            trace.add("ThmSec5Prod1", "%s = %s x %s" % (expr.label(), head.label(), rest_expr.label()),
                      (h, k))
            return trace.done(RINFINITY)
        if head_class == O_CLASS_2:
            trace = _TraceBuilder()
            h = trace.add("CatalogFact", "%s has class O^%d_2" % (head.label(), level))
            k = trace.add("CatalogFact", "%s has class O^%d_0" % (rest_expr.label(), level))
            trace.add("ThmSec5Prod2", "%s = %s x %s" % (expr.label(), head.label(), rest_expr.label()),
                      (h, k))
            return trace.done(INDEX_TWO)
    # fall back to the finite-survivor rule on the product's own derived set
    return decide_main(expr, level)


def decide_free_product(expr: ex.GroupExpr) -> Verdict:
    if expr.node != "free":
        return Verdict(UNKNOWN, notes=("not a free product",))
    bad = [f.label() for f in expr.factors if not f.freely_indecomposable]
    if bad:
        return Verdict(UNKNOWN,
                       notes=("hypothesis violation: factors %s are not freely "
                              "indecomposable" % ", ".join(bad),))
    # (1) all factors finite
    if all(f.finite for f in expr.factors):
        trace = _TraceBuilder()
        trace.add("ThmFreeProd1",
                  "%s is a free product of %d non-trivial finite groups"
                  % (expr.label(), len(expr.factors)))
        return trace.done(RINFINITY)
    # (2) one O^m_1 factor, the rest O^k_0 with k <= m (level-one data)
    classes = [lookup_invariants(f).o_class_at(1) for f in expr.factors]
    for j, cls in enumerate(classes):
        if cls != O_CLASS_1:
            continue
        if all(classes[i] == O_CLASS_0 for i in range(len(classes)) if i != j):
            trace = _TraceBuilder()
            h = trace.add("CatalogFact", "%s has class O^1_1" % expr.factors[j].label())
            others = trace.add("CatalogFact",
                               "remaining factors %s have class O^1_0"
                               % ", ".join(f.label() for i, f in enumerate(expr.factors) if i != j))
            trace.add("ThmFreeProd2", expr.label(), (h, others))
            return trace.done(RINFINITY)
    # (3) the direct product of the factors has the property, and some factor
    # is abelian but not infinite cyclic
    witness = next((f for f in expr.factors if f.abelian and not f.is_infinite_cyclic), None)
    if witness is not None:
        bar = ex.direct_product(list(expr.factors))
        sub = decide(bar)
        if sub.conclusion == RINFINITY:
            trace = _TraceBuilder()
            ids = trace.absorb(sub.trace)
            w = trace.add("CatalogFact",
                          "%s is abelian and not infinite cyclic" % witness.label())
            trace.add("ThmFreeProd3",
                      "direct product %s has the property" % bar.label(),
                      tuple(ids[-1:]) + (w,))
            return trace.done(RINFINITY)
        return Verdict(UNKNOWN,
                       notes=("direct-product premise unverified: decide(%s) = %s"
                              % (bar.label(), sub.conclusion),))
    return Verdict(UNKNOWN, notes=("no free-product condition applies",))


@dataclass(frozen=True)
class ExtensionSpec:
    """Premises about a commuting automorphism triple on 1 -> A -> B -> C -> 1."""

    central: bool = False
    r_kernel: int | float | None = None      # R(phi') on A
    r_quotient: int | float | None = None    # R(phi-bar) on C
    fix_quotient_finite: bool | None = None  # |Fix phi-bar| < infinity


def propagate_extension(spec: ExtensionSpec) -> Verdict:
    """Short-exact-sequence bookkeeping for a single automorphism triple."""
    trace = _TraceBuilder()
    if spec.r_quotient == math.inf:
        trace.add("LemRFacts1", "R(phi-bar) is infinite")
        return trace.done(RVALUE, value=math.inf)
    if spec.fix_quotient_finite and spec.r_kernel == math.inf:
        trace.add("LemRFacts2", "finite fixed subgroup on the quotient and R(phi') infinite")
        return trace.done(RVALUE, value=math.inf)
    if spec.central and spec.r_kernel is not None and spec.r_quotient is not None:
        value = spec.r_kernel * spec.r_quotient
        trace.add("LemRFacts3", "central extension: %s * %s" % (spec.r_kernel, spec.r_quotient))
        return trace.done(RVALUE, value=value)
    return Verdict(UNKNOWN, notes=("insufficient premises for the extension rules",))


def _decide_catalog(expr: ex.GroupExpr) -> Verdict:
    inv = lookup_invariants(expr)
    if inv.rinf_known:
        trace = _TraceBuilder()
        trace.add("CatalogFact", "%s: %s" % (expr.label(), inv.rinf_known))
        return trace.done(RINFINITY)
    return Verdict(UNKNOWN)


def _decide_torsion_split(expr: ex.GroupExpr) -> Verdict:
    """Direct products (torsion-free part) x (finite abelian part): quotient by
    the characteristic finite torsion subgroup and lift the property."""
    if expr.node != "direct":
        return Verdict(UNKNOWN)
    torsion_free = [f for f in expr.factors if f.torsion_free and not f.is_trivial]
    finite_abelian = [f for f in expr.factors if f.finite and f.abelian and not f.is_trivial]
    if not finite_abelian or not torsion_free:
        return Verdict(UNKNOWN)
    if len(torsion_free) + len(finite_abelian) != sum(1 for f in expr.factors if not f.is_trivial):
        return Verdict(UNKNOWN)
    core = torsion_free[0] if len(torsion_free) == 1 else ex.direct_product(torsion_free)
    sub = decide(core)
    if sub.conclusion != RINFINITY:
        return Verdict(UNKNOWN)
    trace = _TraceBuilder()
    ids = trace.absorb(sub.trace)
    split = trace.add("CatalogFact",
                      "the torsion elements of %s form the finite characteristic subgroup "
                      "%s, with torsion-free quotient %s"
                      % (expr.label(), " x ".join(f.label() for f in finite_abelian),
                         core.label()))
    trace.add("LemRFacts1",
              "every automorphism induces one on the quotient %s, which has the property"
              % core.label(), tuple(ids[-1:]) + (split,))
    return trace.done(RINFINITY)


def decide(expr: ex.GroupExpr) -> Verdict:
    """Strategy combinator: try every rule, return the strongest verdict,
    earliest rule winning ties.  Deterministic and total on parseable input."""
    stages = [
        _decide_catalog(expr),
        decide_main(expr, 1),
        decide_gk(expr),
        decide_product(expr, 1) if expr.node == "direct" else Verdict(UNKNOWN),
        decide_free_product(expr) if expr.node == "free" else Verdict(UNKNOWN),
        _decide_torsion_split(expr),
    ]
    best = stages[0]
    notes: list[str] = list(best.notes)
    for verdict in stages[1:]:
        notes.extend(verdict.notes)
        if verdict.strength > best.strength:
            best = verdict
    if best.conclusion == UNKNOWN:
        return Verdict(UNKNOWN, notes=tuple(dict.fromkeys(notes)))
    return best


def decide_text(text: str) -> Verdict:
    return decide(ex.parse_group_expr(text))
