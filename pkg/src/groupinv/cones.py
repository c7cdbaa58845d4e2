"""Truncated-cone side of the invariants, as exact polyhedral geometry.

A direction e survives at level n exactly when its whole open quarter-sphere
neighborhood avoids the obstruction set F, i.e. <e, f> <= 0 for every f in F.
The surviving directions therefore form the polar cone of F, which this
module computes exactly over the integers with the double description method
and classifies as trivial / one ray / a full line / higher dimensional.

The product formula says the invariant of a direct product is the spherical
join of the factor invariants; both that and the complement formula for the
level-one obstruction set of a product are implemented on SphereSets.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Iterable, Sequence

from .abelian import matrix_rank
from .spheres import (
    CofinitePoints,
    ConeRegion,
    Direction,
    FinitePoints,
    SphereSet,
    empty_set,
    full_sphere,
    join_all,
    points_set,
    union,
)


class UnsupportedSigma(ValueError):
    pass


class DimensionCapExceeded(ValueError):
    pass


MAX_CONE_DIM = 8


@dataclass(frozen=True)
class RationalCone:
    """{x in R^m : <x, f> <= 0 for all normals f}."""

    dim: int
    normals: tuple[Direction, ...]

    def __init__(self, dim: int, normals: Iterable[Sequence[int] | Direction]):
        ns = []
        for f in normals:
            d = f if isinstance(f, Direction) else Direction(f)
            if len(d) != dim:
                raise ValueError("normal length does not match the cone dimension")
            ns.append(d)
        object.__setattr__(self, "dim", int(dim))
        object.__setattr__(self, "normals", tuple(sorted(set(ns))))

    def contains(self, vec: Sequence[int]) -> bool:
        return all(sum(a * b for a, b in zip(f.coords, vec)) <= 0 for f in self.normals)


@dataclass(frozen=True)
class ConeShape:
    kind: str  # "trivial" | "ray" | "line" | "higher"
    direction: Direction | None = None
    dimension: int = 0

    @staticmethod
    def trivial() -> "ConeShape":
        return ConeShape("trivial", None, 0)

    @staticmethod
    def ray(d: Direction) -> "ConeShape":
        return ConeShape("ray", d, 1)

    @staticmethod
    def line(d: Direction) -> "ConeShape":
        return ConeShape("line", d, 1)

    @staticmethod
    def higher(dim: int) -> "ConeShape":
        return ConeShape("higher", None, dim)


def _primitive(vec: Sequence[int]) -> tuple[int, ...]:
    g = 0
    for c in vec:
        g = gcd(g, abs(c))
    if g <= 1:
        return tuple(vec)
    return tuple(c // g for c in vec)


def _combine(pos: Sequence[int], neg: Sequence[int], fp: int, fn: int) -> tuple[int, ...]:
    """Conic combination lying on <., f> = 0 given <pos,f> = fp > 0 > fn = <neg,f>."""
    return _primitive(tuple(fp * bn - fn * bp for bp, bn in zip(pos, neg)))


def extreme_rays(cone: RationalCone) -> tuple[list[tuple[int, ...]], list[tuple[int, ...]]]:
    """Double description: returns (lineality basis, extreme rays modulo lineality).

    Constraints are inserted one at a time.  While a free line crosses the new
    hyperplane it is folded into a ray; otherwise the surviving rays plus all
    positive/negative boundary combinations are generated and the set is cut
    back to the true extreme rays by an exact rank test (a ray of the cone so
    far is extreme iff its tight normals have rank m - dim(lineality) - 1).
    """
    m = cone.dim
    if m > MAX_CONE_DIM:
        raise DimensionCapExceeded("cone dimension %d exceeds cap %d" % (m, MAX_CONE_DIM))
    if m == 0:
        return [], []
    lines: list[tuple[int, ...]] = [tuple(1 if i == j else 0 for j in range(m)) for i in range(m)]
    rays: list[tuple[int, ...]] = []
    processed: list[Direction] = []

    for f in cone.normals:
        fc = f.coords

        def val(v):
            return sum(a * b for a, b in zip(fc, v))

        hit = next((i for i, l in enumerate(lines) if val(l) != 0), None)
        if hit is not None:
            l0 = lines.pop(hit)
            v0 = val(l0)
            # project the remaining lines into the hyperplane of f
            lines = [_primitive(tuple(v0 * x - val(l) * y for x, y in zip(l, l0)))
                     for l in lines]
            if v0 > 0:
                l0 = tuple(-x for x in l0)
                v0 = -v0
            # slide existing rays along the old line into the hyperplane
            rays = [r if val(r) == 0 else
                    _primitive(tuple((-v0) * x + val(r) * y for x, y in zip(r, l0)))
                    for r in rays]
            rays.append(l0)
        else:
            vals = [val(r) for r in rays]
            kept = [r for r, v in zip(rays, vals) if v <= 0]
            combos = [
                _combine(rp, rn, vp, vn)
                for rp, vp in zip(rays, vals) if vp > 0
                for rn, vn in zip(rays, vals) if vn < 0
            ]
            rays = kept + [c for c in combos if any(c)]
        processed.append(f)
        rays = _minimal_rays(rays, lines, processed, m)
    return lines, rays


def _minimal_rays(rays: list[tuple[int, ...]], lines: list[tuple[int, ...]],
                  normals: list[Direction], m: int) -> list[tuple[int, ...]]:
    # a ray is extreme iff its tight normals cut the space down to a
    # one-dimensional face above the lineality space
    target = m - len(lines) - 1
    out: list[tuple[int, ...]] = []
    for r in rays:
        if not any(r) or r in out or _in_span(r, lines):
            continue
        tight = [list(f.coords) for f in normals
                 if sum(a * b for a, b in zip(f.coords, r)) == 0]
        rank = matrix_rank(tight) if tight else 0
        if rank == target:
            out.append(r)
    return out


def _in_span(vec: Sequence[int], basis: list[tuple[int, ...]]) -> bool:
    if not basis:
        return False
    return matrix_rank(list(basis) + [list(vec)]) == matrix_rank(list(basis))


def cone_rays(cone: RationalCone) -> ConeShape:
    """Exact shape classification of the cone over the rationals."""
    lines, rays = extreme_rays(cone)
    if not lines and not rays:
        return ConeShape.trivial()
    if not lines and len(rays) == 1:
        return ConeShape.ray(Direction(rays[0]))
    if len(lines) == 1 and not rays:
        vec = lines[0]
        lead = next(c for c in vec if c)  # sign of a line is a convention; fix it
        if lead < 0:
            vec = tuple(-c for c in vec)
        return ConeShape.line(Direction(vec))
    dim = matrix_rank([list(v) for v in lines + rays])
    return ConeShape.higher(dim)


# ---------------------------------------------------------------------------
# level invariants from obstruction data


def omega_from_sigma(sigma: SphereSet, m: int) -> SphereSet:
    """Directions whose open quarter-sphere neighborhood avoids the obstruction
    set; exact via the polar cone when the obstruction set is finite."""
    if len(sigma.ambient) != 1 or sigma.ambient[0] != m:
        raise UnsupportedSigma("expected a single-factor ambient of rank %d" % m)
    if sigma.is_empty():
        return empty_set([m])
    if sigma.is_full():
        return full_sphere([m])
    obstructions = _finite_complement(sigma, m)
    if obstructions is None:
        raise UnsupportedSigma("set is neither full, empty, nor cofinite")
    shape = cone_rays(RationalCone(m, obstructions))
    if shape.kind == "trivial":
        return empty_set([m])
    if shape.kind == "ray":
        return points_set([m], [shape.direction.coords])
    if shape.kind == "line":
        return points_set([m], [shape.direction.coords, shape.direction.antipode().coords])
    return SphereSet([m], [(ConeRegion(obstructions),)])


def _finite_complement(sigma: SphereSet, m: int) -> tuple[Direction, ...] | None:
    """Obstruction set F with sigma = sphere minus F, or None outside the fragment."""
    parts = [atom[0] for atom in sigma.atoms]
    if len(parts) == 1 and isinstance(parts[0], CofinitePoints):
        return parts[0].excluded
    if m == 1 and all(isinstance(p, FinitePoints) for p in parts):
        present: set[Direction] = set()
        for p in parts:
            present.update(p.points)
        return tuple(sorted({Direction((1,)), Direction((-1,))} - present))
    return None


def omega_of_product(factors: Sequence[SphereSet | None]) -> SphereSet | None:
    """Spherical join of the factor invariants; unknown factors poison the result."""
    if any(f is None for f in factors):
        return None
    return join_all(list(factors))


def sigma1_complement_of_product(factor_complements: Sequence[SphereSet | None]) -> SphereSet | None:
    """Obstruction set of a direct product at level one: the union of the
    factor obstruction sets embedded along their coordinate blocks (the level
    zero obstruction sets of finitely generated groups are empty)."""
    if any(f is None for f in factor_complements):
        return None
    ambients: list[tuple[int, ...]] = [f.ambient for f in factor_complements]
    full_ambient = tuple(r for amb in ambients for r in amb)
    result = empty_set(full_ambient)
    offset = 0
    from .spheres import EMPTY

    for f in factor_complements:
        width = len(f.ambient)
        before = offset
        after = len(full_ambient) - offset - width
        atoms = [tuple([EMPTY] * before) + atom + tuple([EMPTY] * after) for atom in f.atoms]
        result = union(result, SphereSet(full_ambient, atoms))
        offset += width
    return result


# ---------------------------------------------------------------------------
# structural gates


@dataclass(frozen=True)
class Finite12Report:
    ok: bool
    cardinality: str
    reason: str = ""


def check_finite12(omega: SphereSet) -> Finite12Report:
    """Finite non-empty invariants must be a single point or an antipodal pair."""
    card = omega.cardinality()
    if card.kind != "finite":
        return Finite12Report(ok=True, cardinality=card.describe())
    if card.count == 1:
        return Finite12Report(ok=True, cardinality="1")
    if card.count == 2:
        if omega.is_antipodal_pair():
            return Finite12Report(ok=True, cardinality="2")
        return Finite12Report(ok=False, cardinality="2",
                              reason="two points at distance < pi: %r" % (card.points,))
    return Finite12Report(ok=False, cardinality=str(card.count),
                          reason="finite cardinality outside {1, 2}")


O_CLASS_0 = "O0"
O_CLASS_1 = "O1"
O_CLASS_2 = "O2"
O_CLASS_OTHER = "other"
O_CLASS_UNKNOWN = "unknown"


def o_class_of(omega: SphereSet | None) -> str:
    """Class by invariant cardinality with all points rational (explicit point
    sets are integer vectors, hence rational automatically)."""
    if omega is None:
        return O_CLASS_UNKNOWN
    card = omega.cardinality()
    if card.kind == "zero":
        return O_CLASS_0
    if card.kind == "finite" and card.count == 1:
        return O_CLASS_1
    if card.kind == "finite" and card.count == 2:
        return O_CLASS_2
    return O_CLASS_OTHER


def classify_O(expr, level: int = 1) -> str:
    """O-class of a group expression at the given level, via the catalog."""
    from .catalog import lookup_invariants

    return o_class_of(lookup_invariants(expr).omega_at(level))
