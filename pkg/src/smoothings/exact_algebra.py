"""Exact integer linear algebra: Smith normal form, abelian groups, subgroups, kernels mod m.

Everything here works on Python ints. Matrices are small (the cohomology engine
reduces complexes before handing them over), so dense list-of-lists is fine.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Sequence


# ----------------------------------------------------------------------------
# matrices


@dataclass(frozen=True)
class IntMatrix:
    rows: int
    cols: int
    entries: tuple  # row-major

    def __post_init__(self):
        if len(self.entries) != self.rows * self.cols:
            raise ValueError(
                f"entries length {len(self.entries)} != {self.rows}x{self.cols}"
            )

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], ncols: int | None = None) -> "IntMatrix":
        rows = [list(r) for r in rows]
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        for r in rows:
            if len(r) != ncols:
                raise ValueError("ragged rows")
        return cls(len(rows), ncols, tuple(int(x) for r in rows for x in r))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls(rows, cols, (0,) * (rows * cols))

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(n, n, tuple(int(i == j) for i in range(n) for j in range(n)))

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i * self.cols + j]

    def to_rows(self) -> list[list[int]]:
        c = self.cols
        return [list(self.entries[i * c:(i + 1) * c]) for i in range(self.rows)]

    def transpose(self) -> "IntMatrix":
        return IntMatrix.from_rows(transpose(self.to_rows(), self.rows, self.cols), self.rows)

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        return IntMatrix.from_rows(matmul(self.to_rows(), other.to_rows(), other.cols), other.cols)

    def is_zero(self) -> bool:
        return not any(self.entries)

    def __repr__(self):
        return f"IntMatrix({self.rows}x{self.cols}, {self.to_rows()})"


def transpose(rows: list[list[int]], nrows: int | None = None, ncols: int | None = None) -> list[list[int]]:
    if nrows is None:
        nrows = len(rows)
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    return [[rows[i][j] for i in range(nrows)] for j in range(ncols)]


def matmul(a: list[list[int]], b: list[list[int]], bcols: int | None = None) -> list[list[int]]:
    if bcols is None:
        bcols = len(b[0]) if b else 0
    bt = transpose(b, len(b), bcols)
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def identity_rows(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def det(rows: list[list[int]]) -> int:
    """Exact determinant by fraction-free Bareiss elimination."""
    n = len(rows)
    if n == 0:
        return 1
    a = [list(r) for r in rows]
    sign, prev = 1, 1
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
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


# ----------------------------------------------------------------------------
# Smith normal form


@dataclass
class SNF:
    """U A V = S with inverses kept alongside (Uinv, Vinv)."""
    U: list
    S: list
    V: list
    Uinv: list
    Vinv: list
    diag: list  # the nonzero diagonal entries, divisibility chain

    @property
    def rank(self) -> int:
        return len(self.diag)


def snf_rows(a: list[list[int]], nrows: int, ncols: int, want_inverses: bool = True) -> SNF:
    """Smith normal form of a dense integer matrix given as rows.

    Pivot rule: the smallest-magnitude nonzero entry of the remaining block,
    ties broken by (row, col). Deterministic for identical input.
    """
    A = [list(r) for r in a]
    U = identity_rows(nrows)
    V = identity_rows(ncols)
    Uinv = identity_rows(nrows) if want_inverses else None
    Vinv = identity_rows(ncols) if want_inverses else None

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]
        if Uinv is not None:
            for r in Uinv:
                r[i], r[j] = r[j], r[i]

    def swap_cols(i, j):
        for r in A:
            r[i], r[j] = r[j], r[i]
        for r in V:
            r[i], r[j] = r[j], r[i]
        if Vinv is not None:
            Vinv[i], Vinv[j] = Vinv[j], Vinv[i]

    def add_row(dst, src, q):
        # row_dst += q * row_src
        rd, rs = A[dst], A[src]
        for j in range(ncols):
            if rs[j]:
                rd[j] += q * rs[j]
        ud, us = U[dst], U[src]
        for j in range(nrows):
            if us[j]:
                ud[j] += q * us[j]
        if Uinv is not None:
            for r in Uinv:
                if r[dst]:
                    r[src] -= q * r[dst]

    def add_col(dst, src, q):
        # col_dst += q * col_src
        for r in A:
            if r[src]:
                r[dst] += q * r[src]
        for r in V:
            if r[src]:
                r[dst] += q * r[src]
        if Vinv is not None:
            vd, vs = Vinv[dst], Vinv[src]
            for j in range(ncols):
                if vd[j]:
                    vs[j] -= q * vd[j]

    def negate_row(i):
        A[i] = [-x for x in A[i]]
        U[i] = [-x for x in U[i]]
        if Uinv is not None:
            for r in Uinv:
                r[i] = -r[i]

    diag = []
    t = 0
    while t < min(nrows, ncols):
        while True:
            best = None
            for i in range(t, nrows):
                row = A[i]
                for j in range(t, ncols):
                    x = row[j]
                    if x and (best is None or abs(x) < best[0]):
                        best = (abs(x), i, j)
                        if best[0] == 1:
                            break
                if best is not None and best[0] == 1:
                    break
            if best is None:
                break
            _, i, j = best
            if i != t:
                swap_rows(i, t)
            if j != t:
                swap_cols(j, t)
            p = A[t][t]
            clean = True
            for i in range(t + 1, nrows):
                x = A[i][t]
                if x:
                    add_row(i, t, -(x // p))
                    if A[i][t]:
                        clean = False
            for j in range(t + 1, ncols):
                x = A[t][j]
                if x:
                    add_col(j, t, -(x // p))
                    if A[t][j]:
                        clean = False
            if not clean:
                continue
            # divisibility: fold a non-multiple back into the pivot row
            bad = None
            for i in range(t + 1, nrows):
                for j in range(t + 1, ncols):
                    if A[i][j] % p:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            add_row(t, bad, 1)
        if best is None:
            break
        if A[t][t] < 0:
            negate_row(t)
        diag.append(A[t][t])
        t += 1
    return SNF(U, A, V, Uinv, Vinv, diag)


def smith_normal_form(A: IntMatrix) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Return (U, S, V) with U A V = S diagonal, s_1 | s_2 | ..., U and V unimodular."""
    res = snf_rows(A.to_rows(), A.rows, A.cols, want_inverses=False)
    return (
        IntMatrix.from_rows(res.U, A.rows),
        IntMatrix.from_rows(res.S, A.cols),
        IntMatrix.from_rows(res.V, A.cols),
    )


# ----------------------------------------------------------------------------
# abelian groups


def _canonical_torsion(orders) -> tuple[int, ...]:
    """Invariant factors (d_1 | d_2 | ...) of a direct sum of cyclic groups."""
    ds = [abs(int(d)) for d in orders if abs(int(d)) > 1]
    ds.sort()
    changed = True
    while changed:
        changed = False
        for i in range(len(ds)):
            for j in range(i + 1, len(ds)):
                a, b = ds[i], ds[j]
                if b % a:
                    g = gcd(a, b)
                    ds[i], ds[j] = g, a * b // g
                    changed = True
        ds = sorted(d for d in ds if d > 1)
    return tuple(ds)


@dataclass(frozen=True)
class AbelianGroup:
    """Z^free_rank + Z/d_1 + ... + Z/d_k with d_1 | ... | d_k, each d_i >= 2."""
    free_rank: int = 0
    torsion: tuple = ()

    def __post_init__(self):
        if self.free_rank < 0:
            raise ValueError("negative free rank")
        t = tuple(self.torsion)
        for a, b in zip(t, t[1:]):
            if b % a:
                raise ValueError(f"not a divisibility chain: {t}")
        if any(d < 2 for d in t):
            raise ValueError(f"invariant factors must be >= 2: {t}")
        object.__setattr__(self, "torsion", t)

    @classmethod
    def from_cyclic(cls, orders: Sequence[int]) -> "AbelianGroup":
        """Direct sum of cyclic groups; order 0 means Z, order 1 is dropped."""
        free = sum(1 for d in orders if d == 0)
        return cls(free, _canonical_torsion(d for d in orders if d != 0))

    @classmethod
    def trivial(cls) -> "AbelianGroup":
        return cls(0, ())

    @classmethod
    def cyclic(cls, m: int) -> "AbelianGroup":
        return cls.from_cyclic([m])

    def __add__(self, other: "AbelianGroup") -> "AbelianGroup":
        return AbelianGroup(
            self.free_rank + other.free_rank,
            _canonical_torsion(self.torsion + other.torsion),
        )

    @property
    def order(self) -> int | None:
        if self.free_rank:
            return None
        o = 1
        for d in self.torsion:
            o *= d
        return o

    @property
    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    @property
    def ngens(self) -> int:
        return self.free_rank + len(self.torsion)

    def moduli(self) -> tuple[int, ...]:
        """Order of each chosen generator; 0 for free ones. Free generators come first."""
        return (0,) * self.free_rank + self.torsion

    def primary_parts(self) -> dict[int, tuple[int, ...]]:
        out: dict[int, list[int]] = {}
        for d in self.torsion:
            for p, e in factorint(d).items():
                out.setdefault(p, []).append(p ** e)
        return {p: tuple(sorted(v)) for p, v in sorted(out.items())}

    def __str__(self):
        parts = []
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank > 1:
            parts.append(f"Z^{self.free_rank}")
        parts += [f"Z/{d}" for d in self.torsion]
        return " + ".join(parts) if parts else "0"

    def to_json(self):
        return {"free_rank": self.free_rank, "torsion": list(self.torsion)}

    @classmethod
    def from_json(cls, d) -> "AbelianGroup":
        return cls(int(d["free_rank"]), tuple(int(x) for x in d["torsion"]))


def factorint(n: int) -> dict[int, int]:
    """Trial division; only ever called on small invariant factors."""
    n = abs(n)
    out: dict[int, int] = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def cokernel_group(A: IntMatrix) -> AbelianGroup:
    """Z^rows modulo the span of the columns of A."""
    if A.rows == 0:
        return AbelianGroup.trivial()
    res = snf_rows(A.to_rows(), A.rows, A.cols, want_inverses=False)
    return AbelianGroup(A.rows - res.rank, tuple(d for d in res.diag if d > 1))


def integer_kernel(rows: list[list[int]], nrows: int, ncols: int) -> list[list[int]]:
    """A Z-basis of {x in Z^ncols : A x = 0}."""
    if ncols == 0:
        return []
    if nrows == 0:
        return identity_rows(ncols)
    res = snf_rows(rows, nrows, ncols, want_inverses=False)
    V = res.V
    return [[V[i][j] for i in range(ncols)] for j in range(res.rank, ncols)]


# ----------------------------------------------------------------------------
# subgroups


@dataclass(frozen=True)
class ModSubgroup:
    ambient: AbelianGroup
    generators: tuple  # tuple of coordinate tuples
    structure: AbelianGroup


def subgroup_structure(ambient: AbelianGroup, generators: Sequence[Sequence[int]]) -> ModSubgroup:
    """Isomorphism type of the subgroup generated by `generators` inside `ambient`.

    Coordinates follow ambient.moduli(): free generators first, then the
    torsion generators in invariant-factor order.
    """
    mods = ambient.moduli()
    N = len(mods)
    gens = []
    for g in generators:
        if len(g) != N:
            raise ValueError(f"generator {tuple(g)} has {len(g)} coordinates, ambient has {N}")
        gens.append(tuple(int(x) % m if m else int(x) for x, m in zip(g, mods)))
    s = len(gens)
    if s == 0:
        return ModSubgroup(ambient, (), AbelianGroup.trivial())
    rel_idx = [i for i, m in enumerate(mods) if m]
    # solve sum c_j g_j = sum y_i d_i e_i over Z, keep c
    M = [[gens[j][i] for j in range(s)] + [-mods[r] if r == i else 0 for r in rel_idx] for i in range(N)]
    ker = integer_kernel(M, N, s + len(rel_idx))
    K = [[v[j] for v in ker] for j in range(s)]
    return ModSubgroup(ambient, tuple(gens), cokernel_group(IntMatrix.from_rows(K, len(ker))))


def kernel_mod(A: Sequence[Sequence[int]], m: int, ncols: int | None = None) -> list[tuple[int, ...]]:
    """Generators of {x in (Z/m)^ncols : A x = 0 mod m}."""
    if m < 2:
        raise ValueError("modulus must be >= 2")
    A = [list(r) for r in A]
    if ncols is None:
        ncols = len(A[0]) if A else 0
    nr = len(A)
    if nr == 0:
        return [tuple(int(i == j) for j in range(ncols)) for i in range(ncols)]
    # A x - m y = 0 over Z
    M = [[x % m for x in A[i]] + [-m if r == i else 0 for r in range(nr)] for i in range(nr)]
    ker = integer_kernel(M, nr, ncols + nr)
    out = []
    for v in ker:
        x = tuple(v[j] % m for j in range(ncols))
        if any(x):
            out.append(x)
    return out


def matrix_rank_mod_p(rows: list[list[int]], p: int) -> int:
    """Rank over the prime field F_p by Gaussian elimination."""
    a = [[x % p for x in r] for r in rows]
    rank = 0
    ncols = len(a[0]) if a else 0
    for c in range(ncols):
        piv = next((i for i in range(rank, len(a)) if a[i][c]), None)
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        inv = pow(a[rank][c], -1, p)
        a[rank] = [x * inv % p for x in a[rank]]
        for i in range(len(a)):
            if i != rank and a[i][c]:
                f = a[i][c]
                a[i] = [(x - f * y) % p for x, y in zip(a[i], a[rank])]
        rank += 1
    return rank


def solve_mod2(rows: list[list[int]], rhs: list[int]) -> list[int] | None:
    """One solution of A x = b over F_2, or None when inconsistent."""
    nr = len(rows)
    nc = len(rows[0]) if rows else 0
    a = [[x & 1 for x in r] + [b & 1] for r, b in zip(rows, rhs)]
    pivots = []
    rank = 0
    for c in range(nc):
        piv = next((i for i in range(rank, nr) if a[i][c]), None)
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        for i in range(nr):
            if i != rank and a[i][c]:
                a[i] = [x ^ y for x, y in zip(a[i], a[rank])]
        pivots.append(c)
        rank += 1
    if any(a[i][nc] for i in range(rank, nr)):
        return None
    x = [0] * nc
    for i, c in enumerate(pivots):
        x[c] = a[i][nc]
    return x
