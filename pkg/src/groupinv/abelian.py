"""Exact Reidemeister-number computation for finitely generated abelian groups.

Everything here runs on arbitrary-precision Python integers.  The Smith normal
form keeps track of the unimodular row/column transforms so callers can map
cokernel elements back to coordinates; pivoting always picks the smallest
nonzero entry in absolute value to contain coefficient growth.

For an automorphism ``phi`` of a finitely generated abelian group the number
of twisted conjugacy classes equals ``#Coker(1 - phi)``; the group is
presented as a lattice quotient and the cokernel read off the Smith form of
the stacked relation matrix.  A brute-force orbit counter over multiplication
tables of small finite groups serves as the independent cross-check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

from .unionfind import UnionFind

INFINITE = math.inf

IntMatrix = list[list[int]]


class InvalidAutomorphism(ValueError):
    pass


class InvalidGroupTable(ValueError):
    pass


# ---------------------------------------------------------------------------
# integer matrix helpers


def identity_matrix(n: int) -> IntMatrix:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def mat_mul(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> IntMatrix:
    rows, inner, cols = len(a), len(b), len(b[0]) if b else 0
    out = [[0] * cols for _ in range(rows)]
    for i in range(rows):
        ai = a[i]
        for k in range(inner):
            c = ai[k]
            if c:
                bk = b[k]
                oi = out[i]
                for j in range(cols):
                    oi[j] += c * bk[j]
    return out


def mat_sub(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> IntMatrix:
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def det(m: Sequence[Sequence[int]]) -> int:
    """Exact determinant via fraction-free Bareiss elimination."""
    n = len(m)
    if n == 0:
        return 1
    a = [list(row) for row in m]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def matrix_rank(m: Sequence[Sequence[int]]) -> int:
    """Rank over the rationals, by integer row reduction."""
    a = [list(row) for row in m]
    rows = len(a)
    cols = len(a[0]) if rows else 0
    rank = 0
    for col in range(cols):
        pivot = next((i for i in range(rank, rows) if a[i][col] != 0), None)
        if pivot is None:
            continue
        a[rank], a[pivot] = a[pivot], a[rank]
        for i in range(rows):
            if i != rank and a[i][col] != 0:
                p, q = a[rank][col], a[i][col]
                a[i] = [p * x - q * y for x, y in zip(a[i], a[rank])]
        rank += 1
        if rank == rows:
            break
    return rank


# ---------------------------------------------------------------------------
# Smith normal form


@dataclass
class SmithForm:
    u: IntMatrix
    d: IntMatrix
    v: IntMatrix

    @property
    def diagonal(self) -> list[int]:
        return [self.d[i][i] for i in range(min(len(self.d), len(self.d[0]) if self.d else 0))]


def _min_abs_pivot(a: IntMatrix, start: int) -> tuple[int, int] | None:
    rows = len(a)
    cols = len(a[0]) if rows else 0
    best = None
    best_val = None
    for i in range(start, rows):
        for j in range(start, cols):
            x = abs(a[i][j])
            if x and (best_val is None or x < best_val):
                best, best_val = (i, j), x
                if x == 1:
                    return best
    return best


def smith_normal_form(m: Sequence[Sequence[int]]) -> SmithForm:
    """U * M * V = D with U, V unimodular and D = diag(d1 | d2 | ...), di >= 0."""
    rows = len(m)
    cols = len(m[0]) if rows else 0
    a = [list(row) for row in m]
    u = identity_matrix(rows)
    v = identity_matrix(cols)

    def row_op(i, j, q):  # row_i -= q*row_j
        a[i] = [x - q * y for x, y in zip(a[i], a[j])]
        u[i] = [x - q * y for x, y in zip(u[i], u[j])]

    def col_op(i, j, q):  # col_i -= q*col_j
        for r in range(rows):
            a[r][i] -= q * a[r][j]
        for r in range(cols):
            v[r][i] -= q * v[r][j]

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for r in range(rows):
            a[r][i], a[r][j] = a[r][j], a[r][i]
        for r in range(cols):
            v[r][i], v[r][j] = v[r][j], v[r][i]

    k = 0
    while True:
        pos = _min_abs_pivot(a, k)
        if pos is None:
            break
        pi, pj = pos
        if pi != k:
            swap_rows(k, pi)
        if pj != k:
            swap_cols(k, pj)
        while True:
            # clear the pivot's row and column
            done = True
            for i in range(k + 1, rows):
                if a[i][k]:
                    q = a[i][k] // a[k][k]
                    row_op(i, k, q)
                    if a[i][k]:  # remainder became the smaller pivot
                        swap_rows(k, i)
                        done = False
            for j in range(k + 1, cols):
                if a[k][j]:
                    q = a[k][j] // a[k][k]
                    col_op(j, k, q)
                    if a[k][j]:
                        swap_cols(k, j)
                        done = False
            if done:
                break
        # divisibility: pivot must divide the remaining block
        fixup = False
        p = a[k][k]
        for i in range(k + 1, rows):
            for j in range(k + 1, cols):
                if a[i][j] % p:
                    row_op(k, i, -1)  # add row i to row k, then restart this pivot
                    fixup = True
                    break
            if fixup:
                break
        if fixup:
            continue
        if a[k][k] < 0:
            a[k] = [-x for x in a[k]]
            u[k] = [-x for x in u[k]]
        k += 1
        if k == min(rows, cols):
            break
    return SmithForm(u=u, d=a, v=v)


def abelian_group_from_matrix(m: Sequence[Sequence[int]]) -> tuple[int, list[int]]:
    """Cokernel of the column span of ``m`` inside Z^rows: (free rank, invariant factors > 1)."""
    rows = len(m)
    snf = smith_normal_form(m)
    diag = [d for d in snf.diagonal if d != 0]
    free_rank = rows - len(diag)
    torsion = [d for d in diag if d > 1]
    return free_rank, torsion


# ---------------------------------------------------------------------------
# automorphisms of finitely generated abelian groups


@dataclass(frozen=True)
class FGAbelianAutomorphism:
    """Automorphism of Z^k + Z/d1 + ... + Z/dt as a block matrix [[A,0],[M,T]].

    ``free_part`` A is k x k with det +-1, ``torsion_part`` T acts on the torsion
    generators mod the invariant factors, and ``mixing`` M records the torsion
    components of the images of the free generators (t rows, k columns).
    """

    free_rank: int
    free_part: tuple[tuple[int, ...], ...]
    torsion_factors: tuple[int, ...] = ()
    torsion_part: tuple[tuple[int, ...], ...] = ()
    mixing: tuple[tuple[int, ...], ...] = ()

    @staticmethod
    def from_matrix(free_part: Sequence[Sequence[int]],
                    torsion_factors: Sequence[int] = (),
                    torsion_part: Sequence[Sequence[int]] | None = None,
                    mixing: Sequence[Sequence[int]] | None = None) -> "FGAbelianAutomorphism":
        k = len(free_part)
        t = len(torsion_factors)
        if torsion_part is None:
            torsion_part = identity_matrix(t)
        if mixing is None:
            mixing = [[0] * k for _ in range(t)]
        phi = FGAbelianAutomorphism(
            free_rank=k,
            free_part=tuple(tuple(int(x) for x in row) for row in free_part),
            torsion_factors=tuple(int(d) for d in torsion_factors),
            torsion_part=tuple(tuple(int(x) for x in row) for row in torsion_part),
            mixing=tuple(tuple(int(x) for x in row) for row in mixing),
        )
        phi.validate()
        return phi

    def validate(self) -> None:
        k, t = self.free_rank, len(self.torsion_factors)
        if len(self.free_part) != k or any(len(r) != k for r in self.free_part):
            raise InvalidAutomorphism("free part must be %d x %d" % (k, k))
        if any(d < 2 for d in self.torsion_factors):
            raise InvalidAutomorphism("torsion factors must be >= 2")
        if any(self.torsion_factors[i] % self.torsion_factors[i - 1] for i in range(1, t)):
            raise InvalidAutomorphism("torsion factors must form a divisibility chain")
        if len(self.torsion_part) != t or any(len(r) != t for r in self.torsion_part):
            raise InvalidAutomorphism("torsion part must be %d x %d" % (t, t))
        if len(self.mixing) != t or any(len(r) != k for r in self.mixing):
            raise InvalidAutomorphism("mixing block must be %d x %d" % (t, k))
        if k and abs(det(self.free_part)) != 1:
            raise InvalidAutomorphism("free part is not unimodular")
        # well-defined on the quotient: d_i * T column i must vanish mod the chain
        for i in range(t):
            di = self.torsion_factors[i]
            for j in range(t):
                if (di * self.torsion_part[j][i]) % self.torsion_factors[j]:
                    raise InvalidAutomorphism("torsion block does not respect the relation lattice")
        # invertibility on the torsion subgroup: columns of T plus the relation
        # lattice must generate Z^t (surjective endo of a finite group is bijective)
        if t:
            stacked = [[self.torsion_part[i][j] for j in range(t)]
                       + [self.torsion_factors[j] if i == j else 0 for j in range(t)]
                       for i in range(t)]
            if any(d != 1 for d in smith_normal_form(stacked).diagonal):
                raise InvalidAutomorphism("torsion part is not invertible mod the factors")

    def full_matrix(self) -> IntMatrix:
        k, t = self.free_rank, len(self.torsion_factors)
        n = k + t
        out = [[0] * n for _ in range(n)]
        for i in range(k):
            for j in range(k):
                out[i][j] = self.free_part[i][j]
        for i in range(t):
            for j in range(k):
                out[k + i][j] = self.mixing[i][j]
            for j in range(t):
                out[k + i][k + j] = self.torsion_part[i][j]
        return out


def reidemeister_number(phi: FGAbelianAutomorphism) -> int | float:
    """#Coker(1 - phi) on Z^k + torsion, or INFINITE when the cokernel is infinite."""
    phi.validate()
    k, t = phi.free_rank, len(phi.torsion_factors)
    n = k + t
    if n == 0:
        return 1
    one_minus = mat_sub(identity_matrix(n), phi.full_matrix())
    # columns: relation lattice of the torsion factors, then (1 - phi)
    cols = t + n
    stacked = [[0] * cols for _ in range(n)]
    for i in range(t):
        stacked[k + i][i] = phi.torsion_factors[i]
    for i in range(n):
        for j in range(n):
            stacked[i][t + j] = one_minus[i][j]
    diag = [d for d in smith_normal_form(stacked).diagonal if d != 0]
    if len(diag) < n:
        return INFINITE
    return math.prod(diag)


def fixed_subgroup_trivial(phi: FGAbelianAutomorphism) -> bool:
    """True iff 1 is not an eigenvalue of the free part (torsion-free automorphisms)."""
    if phi.torsion_factors:
        raise InvalidAutomorphism("fixed-subgroup test applies to the torsion-free case")
    one_minus = mat_sub(identity_matrix(phi.free_rank), [list(r) for r in phi.free_part])
    return det(one_minus) != 0


# ---------------------------------------------------------------------------
# finite groups given by multiplication tables


@dataclass
class FiniteGroupTable:
    """Finite group of order <= 512 as an n x n index table, table[i][j] = i*j."""

    table: tuple[tuple[int, ...], ...]
    identity: int = field(init=False)
    inverse: tuple[int, ...] = field(init=False)

    MAX_ORDER = 512

    def __post_init__(self):
        n = len(self.table)
        if n == 0 or n > self.MAX_ORDER:
            raise InvalidGroupTable("order must be between 1 and %d" % self.MAX_ORDER)
        if any(len(row) != n for row in self.table):
            raise InvalidGroupTable("table is not square")
        if any(x < 0 or x >= n for row in self.table for x in row):
            raise InvalidGroupTable("table entries out of range")
        ident = None
        for e in range(n):
            if all(self.table[e][x] == x and self.table[x][e] == x for x in range(n)):
                ident = e
                break
        if ident is None:
            raise InvalidGroupTable("no identity element")
        inv = [None] * n
        for x in range(n):
            for y in range(n):
                if self.table[x][y] == ident and self.table[y][x] == ident:
                    inv[x] = y
                    break
            if inv[x] is None:
                raise InvalidGroupTable("element %d has no inverse" % x)
        if not _associative(self.table):
            raise InvalidGroupTable("table is not associative")
        self.identity = ident
        self.inverse = tuple(inv)

    @property
    def order(self) -> int:
        return len(self.table)

    def mul(self, x: int, y: int) -> int:
        return self.table[x][y]

    def is_abelian(self) -> bool:
        n = self.order
        return all(self.table[i][j] == self.table[j][i] for i in range(n) for j in range(i + 1, n))

    def center(self) -> list[int]:
        n = self.order
        return [z for z in range(n)
                if all(self.table[z][x] == self.table[x][z] for x in range(n))]

    def check_automorphism(self, perm: Sequence[int]) -> None:
        n = self.order
        if sorted(perm) != list(range(n)):
            raise InvalidGroupTable("map is not a permutation")
        for x in range(n):
            for y in range(n):
                if perm[self.table[x][y]] != self.table[perm[x]][perm[y]]:
                    raise InvalidGroupTable("map is not a homomorphism at (%d, %d)" % (x, y))

    def conjugacy_class_count(self) -> int:
        # Burnside on the conjugation action: #classes = sum |C(x)| / |G|
        n = self.order
        total = 0
        for x in range(n):
            total += sum(1 for g in range(n) if self.table[g][x] == self.table[x][g])
        assert total % n == 0
        return total // n


def _associative(table: tuple[tuple[int, ...], ...]) -> bool:
    n = len(table)
    if n <= 64:
        return all(table[table[i][j]][k] == table[i][table[j][k]]
                   for i in range(n) for j in range(n) for k in range(n))
    import numpy as np
    t = np.array(table, dtype=np.int16)
    for i0 in range(0, n, 32):
        chunk = t[i0:i0 + 32]
        lhs = t[chunk, :]    # lhs[x, j, k] = t[t[i0+x, j], k]
        rhs = chunk[:, t]    # rhs[x, j, k] = t[i0+x, t[j, k]]
        if not np.array_equal(lhs, rhs):
            return False
    return True


def brute_force_twisted_classes(group: FiniteGroupTable,
                                automorphism: Sequence[int]) -> tuple[int, list[int]]:
    """Orbit count of the twisted action sigma . alpha = sigma * alpha * phi(sigma)^-1.

    Returns the count and the least-index representative of every class.
    """
    group.check_automorphism(automorphism)
    n = group.order
    uf = UnionFind(n)
    t = group.table
    inv = group.inverse
    for sigma in range(n):
        ps = inv[automorphism[sigma]]
        for alpha in range(n):
            uf.union(alpha, t[t[sigma][alpha]][ps])
    reps = sorted({min(i for i in range(n) if uf.same(i, r)) for r in uf.roots()})
    return uf.components, reps


@dataclass
class CentralExtensionReport:
    valid: bool
    problems: list[str]
    r_sub: int | None = None
    r_total: int | None = None
    r_quot: int | None = None

    @property
    def product_holds(self) -> bool:
        return (self.valid and self.r_sub is not None
                and self.r_total == self.r_sub * self.r_quot)


def verify_central_extension(sub: FiniteGroupTable, total: FiniteGroupTable,
                             quot: FiniteGroupTable,
                             inclusion: Sequence[int], projection: Sequence[int],
                             phi_sub: Sequence[int], phi_total: Sequence[int],
                             phi_quot: Sequence[int]) -> CentralExtensionReport:
    """Check 1 -> A -> B -> C -> 1 central with commuting automorphisms, then
    compute all three twisted-class counts by brute force and compare
    R(phi_total) with R(phi_sub) * R(phi_quot)."""
    problems: list[str] = []
    na, nb, nc = sub.order, total.order, quot.order
    if sorted(set(inclusion)) != sorted(inclusion) or len(inclusion) != na:
        problems.append("inclusion is not injective on A")
    if set(projection) != set(range(nc)) or len(projection) != nb:
        problems.append("projection is not surjective onto C")
    for x in range(na):
        for y in range(na):
            if inclusion[sub.table[x][y]] != total.table[inclusion[x]][inclusion[y]]:
                problems.append("inclusion is not a homomorphism")
                break
        else:
            continue
        break
    for x in range(nb):
        for y in range(nb):
            if projection[total.table[x][y]] != quot.table[projection[x]][projection[y]]:
                problems.append("projection is not a homomorphism")
                break
        else:
            continue
        break
    image = set(inclusion)
    kernel = {b for b in range(nb) if projection[b] == quot.identity}
    if image != kernel:
        problems.append("image of A differs from kernel of the projection")
    centre = set(total.center())
    if not image <= centre:
        problems.append("A is not central in B")
    try:
        sub.check_automorphism(phi_sub)
        total.check_automorphism(phi_total)
        quot.check_automorphism(phi_quot)
    except InvalidGroupTable as exc:
        problems.append(str(exc))
    if not problems:
        for x in range(na):
            if phi_total[inclusion[x]] != inclusion[phi_sub[x]]:
                problems.append("automorphisms do not commute with the inclusion")
                break
        for b in range(nb):
            if phi_quot[projection[b]] != projection[phi_total[b]]:
                problems.append("automorphisms do not commute with the projection")
                break
    if problems:
        return CentralExtensionReport(valid=False, problems=problems)
    r_sub, _ = brute_force_twisted_classes(sub, phi_sub)
    r_total, _ = brute_force_twisted_classes(total, phi_total)
    r_quot, _ = brute_force_twisted_classes(quot, phi_quot)
    return CentralExtensionReport(valid=True, problems=[],
                                  r_sub=r_sub, r_total=r_total, r_quot=r_quot)


# ---------------------------------------------------------------------------
# small table constructors (used by tests and the extension checker)


def cyclic_table(n: int) -> FiniteGroupTable:
    return FiniteGroupTable(tuple(tuple((i + j) % n for j in range(n)) for i in range(n)))


def direct_product_table(a: FiniteGroupTable, b: FiniteGroupTable) -> FiniteGroupTable:
    na, nb = a.order, b.order

    def idx(x, y):
        return x * nb + y

    table = [[0] * (na * nb) for _ in range(na * nb)]
    for x1 in range(na):
        for y1 in range(nb):
            for x2 in range(na):
                for y2 in range(nb):
                    table[idx(x1, y1)][idx(x2, y2)] = idx(a.table[x1][x2], b.table[y1][y2])
    return FiniteGroupTable(tuple(tuple(row) for row in table))
