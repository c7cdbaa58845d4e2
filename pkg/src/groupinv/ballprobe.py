"""Empirical connectivity probe on finite Cayley balls.

For atoms with implemented normal forms the radius-r ball of the Cayley graph
is enumerated by breadth-first search, each vertex carrying its image under
the abelianization height map.  A direction survives at level one when the
half-space sublevel sets stay connected after a bounded retreat; the
truncated-cone variant tests the closed-neighborhood analog.  All geometry is
exact: scales are rational and every comparison is a cross-multiplied integer
inequality, never floating point.

A finite window cannot certify the limit behavior, so reports are labelled as
evidence.  Two safeguards keep ball-truncation artifacts out of the evidence:
vertices at distance exactly r are flagged as shell, and connectivity is only
demanded between core vertices well inside the ball (paths may run through
the whole ball).  Both the retreat budget and the core margin are part of the
reported configuration.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from . import expressions as ex
from .catalog import lookup_invariants
from .spheres import Direction
from .unionfind import UnionFind

HALF_SPACE = "halfspace"
TRUNCATED_CONE = "cone"

SUPPORTS_MEMBERSHIP = "SupportsMembership"
SUPPORTS_NON_MEMBERSHIP = "SupportsNonMembership"
INCONCLUSIVE = "Inconclusive"

MAX_RADIUS = 12


class UnsupportedAtom(ValueError):
    pass


class ProbeConfigError(ValueError):
    pass


# ---------------------------------------------------------------------------
# normal forms


def _gens_free_abelian(k):
    def step(key, gen, sign):
        vec = list(key)
        vec[gen] += sign
        return tuple(vec)

    return [("e%d" % (i + 1), i) for i in range(k)], step, lambda key: key


def _gens_free(n):
    def step(key, gen, sign):
        letter = sign * (gen + 1)
        if key and key[-1] == -letter:
            return key[:-1]
        return key + (letter,)

    def height(key):
        h = [0] * n
        for letter in key:
            h[abs(letter) - 1] += 1 if letter > 0 else -1
        return tuple(h)

    return [("x%d" % (i + 1), i) for i in range(n)], step, height


def _bs_normalize(n, p, q, s):
    if q == 0:
        k = s - p
        return (-k, 0, 0) if k < 0 else (0, 0, k)
    while p > 0 and s > 0 and q % n == 0:
        p -= 1
        s -= 1
        q //= n
    return (p, q, s)


def _gens_bs(n):
    # elements t^-p a^q t^s with p, s >= 0 and q not divisible by n when both
    # p and s are positive; multiplication rewrites into that shape exactly
    def step(key, gen, sign):
        p, q, s = key
        if gen == 0:  # a
            if s == 0:
                return _bs_normalize(n, p, q + sign, 0)
            return _bs_normalize(n, p, q + sign * n ** s, s)
        if sign > 0:  # t
            return _bs_normalize(n, p, q, s + 1)
        if s > 0:
            return _bs_normalize(n, p, q, s - 1)
        return _bs_normalize(n, p + 1, q * n, 0)

    # the surviving character direction is written +1, which is the
    # descending side of the stable letter: height = p - s
    def height(key):
        p, q, s = key
        return (p - s,)

    return [("a", 0), ("t", 1)], step, height


def _gens_klein():
    # a^p b^q with b a b^-1 = a^-1
    def step(key, gen, sign):
        p, q = key
        if gen == 0:  # a
            return (p + sign * (-1) ** (q % 2), q)
        return (p, q + sign)

    return [("a", 0), ("b", 1)], step, lambda key: (key[1],)


def _atom_machine(atom: ex.GroupAtom):
    if atom.kind == ex.FREE_ABELIAN and atom.params[0] >= 1:
        k = atom.params[0]
        gens, step, height = _gens_free_abelian(k)
        return tuple([0] * k), gens, step, height, k
    if atom.kind == ex.FREE:
        n = atom.params[0]
        gens, step, height = _gens_free(n)
        return (), gens, step, height, n
    if atom.kind == ex.BAUMSLAG_SOLITAR:
        gens, step, height = _gens_bs(atom.params[0])
        return (0, 0, 0), gens, step, height, 1
    if atom.kind == ex.KLEIN_BOTTLE:
        gens, step, height = _gens_klein()
        return (0, 0), gens, step, height, 1
    raise UnsupportedAtom(
        "no implemented normal form for %s (generalized Thompson groups are presented "
        "infinitely and are rejected by design)" % atom.label())


@dataclass(frozen=True)
class BallGraph:
    atom: ex.GroupAtom
    radius: int
    keys: tuple
    heights: tuple[tuple[int, ...], ...]
    wordlen: tuple[int, ...]
    edges: tuple[tuple[int, int, str], ...]
    neighbors: tuple[tuple[int, ...], ...]
    height_dim: int
    gen_heights: dict[str, tuple[int, ...]] = field(default_factory=dict)

    @property
    def order(self) -> int:
        return len(self.keys)

    def shell(self, index: int) -> bool:
        return self.wordlen[index] == self.radius


def enumerate_ball(atom: ex.GroupAtom, radius: int) -> BallGraph:
    """Breadth-first enumeration of all elements of word length <= radius,
    with exact heights and the full induced edge set."""
    if radius < 2:
        raise ProbeConfigError("radius must be at least 2")
    if radius > MAX_RADIUS:
        raise ProbeConfigError("radius exceeds the configured cap %d" % MAX_RADIUS)
    identity, gens, step, height, dim = _atom_machine(atom)
    dist = {identity: 0}
    order = [identity]
    queue = deque([identity])
    while queue:
        key = queue.popleft()
        d = dist[key]
        if d == radius:
            continue
        for _, gen in gens:
            for sign in (1, -1):
                nxt = step(key, gen, sign)
                if nxt not in dist:
                    dist[nxt] = d + 1
                    order.append(nxt)
                    queue.append(nxt)
    index = {key: i for i, key in enumerate(order)}
    edges = []
    neighbor_sets: list[set[int]] = [set() for _ in order]
    for key in order:
        i = index[key]
        for name, gen in gens:
            nxt = step(key, gen, 1)
            j = index.get(nxt)
            if j is not None and j != i:
                edges.append((i, j, name))
                neighbor_sets[i].add(j)
                neighbor_sets[j].add(i)
    heights = tuple(tuple(height(key)) for key in order)
    gen_heights = {}
    for name, gen in gens:
        moved = step(identity, gen, 1)
        base = height(identity)
        after = height(moved)
        gen_heights[name] = tuple(a - b for a, b in zip(after, base))
    return BallGraph(
        atom=atom,
        radius=radius,
        keys=tuple(order),
        heights=heights,
        wordlen=tuple(dist[key] for key in order),
        edges=tuple(edges),
        neighbors=tuple(tuple(sorted(s)) for s in neighbor_sets),
        height_dim=dim,
        gen_heights=gen_heights,
    )


# ---------------------------------------------------------------------------
# exact sublevel tests


def _ge_scaled_norm(a: int, s: Fraction, norm_sq: int) -> bool:
    """a >= s * sqrt(norm_sq), exactly."""
    sp, sq = s.numerator, s.denominator
    left = a * sq
    if sp <= 0:
        if left >= 0:
            return True
        return left * left <= sp * sp * norm_sq
    if left < 0:
        return False
    return left * left >= sp * sp * norm_sq


def halfspace_test(h: Sequence[int], gamma: Direction, s: Fraction) -> bool:
    a = sum(x * g for x, g in zip(h, gamma.coords))
    return _ge_scaled_norm(a, s, gamma.norm_sq())


def cone_test(h: Sequence[int], gamma: Direction, s: Fraction) -> bool:
    """Half-space membership plus the angle bound tan(angle) <= 1/s; at s = 0
    the angle bound is pi/2 and the test degenerates to the half-space."""
    if s < 0:
        raise ProbeConfigError("truncated cones need s >= 0")
    if not halfspace_test(h, gamma, s):
        return False
    if s == 0:
        a = sum(x * g for x, g in zip(h, gamma.coords))
        return a >= 0
    a = sum(x * g for x, g in zip(h, gamma.coords))
    if a < 0:
        return False
    norm_g = gamma.norm_sq()
    norm_h = sum(x * x for x in h)
    sp, sq = s.numerator, s.denominator
    return sp * sp * (norm_h * norm_g - a * a) <= sq * sq * a * a


def halfspace_subgraph(ball: BallGraph, gamma: Direction, s) -> list[int]:
    s = Fraction(s)
    _check_direction(ball, gamma)
    return [i for i in range(ball.order) if halfspace_test(ball.heights[i], gamma, s)]


def cone_subgraph(ball: BallGraph, gamma: Direction, s) -> list[int]:
    s = Fraction(s)
    _check_direction(ball, gamma)
    return [i for i in range(ball.order) if cone_test(ball.heights[i], gamma, s)]


def _check_direction(ball: BallGraph, gamma: Direction):
    if len(gamma) != ball.height_dim:
        raise ProbeConfigError("direction has %d coordinates, ball heights have %d"
                               % (len(gamma), ball.height_dim))


def _sublevel(ball: BallGraph, gamma: Direction, s: Fraction, mode: str) -> list[int]:
    if mode == HALF_SPACE:
        return halfspace_subgraph(ball, gamma, s)
    if mode == TRUNCATED_CONE:
        return cone_subgraph(ball, gamma, max(s, Fraction(0)))
    raise ProbeConfigError("unknown mode %r" % mode)


# ---------------------------------------------------------------------------
# the probe


@dataclass(frozen=True)
class ProbeConfig:
    radius: int
    direction: Direction
    grid: tuple[Fraction, ...]
    mode: str = HALF_SPACE
    lambda_max: Fraction = Fraction(1)
    core_margin: int | None = None  # defaults to radius - (radius // 2 + 1)

    def __post_init__(self):
        if self.radius < 2:
            raise ProbeConfigError("radius must be at least 2")
        if list(self.grid) != sorted(self.grid) or any(s < 0 for s in self.grid):
            raise ProbeConfigError("grid scales must be non-negative and non-decreasing")
        if self.mode not in (HALF_SPACE, TRUNCATED_CONE):
            raise ProbeConfigError("unknown mode %r" % self.mode)

    @property
    def core_radius(self) -> int:
        if self.core_margin is not None:
            return self.radius - self.core_margin
        return self.radius // 2 + 1


def default_grid(radius: int) -> tuple[Fraction, ...]:
    return tuple(Fraction(j) for j in range(radius // 2 + 1))


@dataclass(frozen=True)
class ProbeRow:
    s: Fraction
    vertices: int
    core_vertices: int
    components: int
    retreat: Fraction | None
    shell_touched: bool
    note: str = ""

    def to_json_dict(self) -> dict:
        return {"s": str(self.s), "vertices": self.vertices,
                "core_vertices": self.core_vertices, "components": self.components,
                "lambda": None if self.retreat is None else str(self.retreat),
                "shell_touched": self.shell_touched, "note": self.note}


@dataclass(frozen=True)
class ProbeReport:
    atom: ex.GroupAtom
    config: ProbeConfig
    rows: tuple[ProbeRow, ...]
    evidence: str

    def to_json_dict(self) -> dict:
        return {
            "atom": self.atom.label(),
            "direction": list(self.config.direction.coords),
            "mode": self.config.mode,
            "radius": self.config.radius,
            "lambda_max": str(self.config.lambda_max),
            "core_radius": self.config.core_radius,
            "rows": [r.to_json_dict() for r in self.rows],
            "evidence": self.evidence,
        }

    def to_csv(self) -> str:
        lines = ["s,vertices,core_vertices,components,lambda,shell_touched,note"]
        for r in self.rows:
            lines.append("%s,%d,%d,%d,%s,%d,%s"
                         % (r.s, r.vertices, r.core_vertices, r.components,
                            "" if r.retreat is None else r.retreat,
                            int(r.shell_touched), r.note))
        return "\n".join(lines)


def _components_covering(ball: BallGraph, allowed: Iterable[int], targets: Sequence[int]) -> int:
    """Number of connected components of the induced subgraph on ``allowed``
    that contain at least one target vertex."""
    allowed = set(allowed)
    uf = UnionFind(ball.order)
    for i, j, _ in ball.edges:
        if i in allowed and j in allowed:
            uf.union(i, j)
    roots = {uf.find(t) for t in targets}
    return len(roots)


def connectivity_probe(ball: BallGraph, gamma: Direction, grid, mode: str = HALF_SPACE,
                       lambda_max=Fraction(1), core_margin: int | None = None) -> ProbeReport:
    """For each scale s, find the least grid retreat that reconnects the core
    of the sublevel set; classify the direction from the row pattern."""
    config = ProbeConfig(radius=ball.radius, direction=gamma,
                         grid=tuple(Fraction(s) for s in grid), mode=mode,
                         lambda_max=Fraction(lambda_max), core_margin=core_margin)
    core_radius = config.core_radius
    rows: list[ProbeRow] = []
    split_seen = False
    evaluated: list[tuple[Fraction, Fraction]] = []  # (s, retreat)
    for s in config.grid:
        sub = _sublevel(ball, gamma, s, mode)
        core = [i for i in sub if ball.wordlen[i] <= core_radius]
        shell_touched = any(ball.shell(i) for i in sub)
        if not core:
            comps = _components_covering(ball, sub, sub) if sub else 0
            rows.append(ProbeRow(s, len(sub), 0, comps, None, shell_touched,
                                 note="no core vertices at this scale"))
            continue
        # retreat levels: grid values below s within budget, then the budget floor
        floor = s - config.lambda_max
        if mode == TRUNCATED_CONE and floor < 0:
            floor = Fraction(0)
        candidates = sorted({g for g in config.grid if floor <= g <= s} | {max(floor, Fraction(0)) if mode == TRUNCATED_CONE else floor},
                            reverse=True)
        retreat = None
        comps = None
        for target in candidates:
            allowed = _sublevel(ball, gamma, target, mode)
            comps = _components_covering(ball, allowed, core)
            if comps == 1:
                retreat = s - target
                break
        if retreat is None:
            split_seen = True
            rows.append(ProbeRow(s, len(sub), len(core), comps, None, shell_touched,
                                 note="core components never merge within the budget"))
        else:
            evaluated.append((s, retreat))
            rows.append(ProbeRow(s, len(sub), len(core), 1, retreat, shell_touched))
    if split_seen:
        evidence = SUPPORTS_NON_MEMBERSHIP
    elif len(evaluated) >= 2:
        descents = [s - lam for s, lam in evaluated]
        increasing = all(b > a for a, b in zip(descents, descents[1:]))
        evidence = SUPPORTS_MEMBERSHIP if increasing else INCONCLUSIVE
    else:
        evidence = INCONCLUSIVE
    return ProbeReport(atom=ball.atom, config=config, rows=tuple(rows), evidence=evidence)


# ---------------------------------------------------------------------------
# direction scans against the catalog


@dataclass(frozen=True)
class ScanRow:
    direction: Direction
    mode: str
    evidence: str
    catalog_member: bool | None
    warn: bool

    def to_json_dict(self) -> dict:
        return {"direction": list(self.direction.coords), "mode": self.mode,
                "evidence": self.evidence, "catalog_member": self.catalog_member,
                "warn": self.warn}


def catalog_membership(atom: ex.GroupAtom, gamma: Direction, mode: str) -> bool | None:
    """Expected membership from the catalog: level-one surviving set for cone
    mode, complement of the obstruction set for half-space mode."""
    inv = lookup_invariants(ex.atom_expr(atom))
    if mode == TRUNCATED_CONE:
        omega = inv.omega_at(1)
        return None if omega is None else omega.member(gamma)
    sigma_c = inv.sigma1_complement
    return None if sigma_c is None else not sigma_c.member(gamma)


def probe_direction_scan(atom: ex.GroupAtom, directions: Sequence[Direction], radius: int,
                         mode: str = HALF_SPACE, grid=None, lambda_max=Fraction(1),
                         core_margin: int | None = None,
                         ball: BallGraph | None = None) -> tuple[list[ScanRow], list[ProbeReport]]:
    """Probe each direction and compare with the catalog where it has data;
    contradictions are flagged WARN (the probe is heuristic, the catalog wins)."""
    if ball is None:
        ball = enumerate_ball(atom, radius)
    if grid is None:
        grid = default_grid(radius)
    rows = []
    reports = []
    for gamma in directions:
        report = connectivity_probe(ball, gamma, grid, mode, lambda_max, core_margin)
        expected = catalog_membership(atom, gamma, mode)
        warn = False
        if expected is True and report.evidence == SUPPORTS_NON_MEMBERSHIP:
            warn = True
        if expected is False and report.evidence == SUPPORTS_MEMBERSHIP:
            warn = True
        rows.append(ScanRow(gamma, mode, report.evidence, expected, warn))
        reports.append(report)
    return rows, reports
