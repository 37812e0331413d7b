"""Simplicial complexes, chain complexes and cohomology with Z and Z/m coefficients.

Cohomology goes through a Z-chain-homotopy-equivalent reduced complex. The
reduction is a sequence of eliminations on unit pivots (coreductions, in the
sense of Mrozek and Batko), each recorded so that cocycles can be pulled back
to the original complex and pushed forward again. That keeps a product complex
with half a million simplices tractable in pure Python.
"""
from __future__ import annotations

import itertools
from array import array
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from math import comb, gcd
from typing import Iterable, Sequence

import numpy as np
import scipy.sparse as sp

from .exact_algebra import AbelianGroup, IntMatrix, snf_rows

# ----------------------------------------------------------------------------
# facet files


class FacetParseError(ValueError):
    pass


def parse_facets(text: str) -> list[tuple[int, ...]]:
    """One facet per line, whitespace separated vertex ids, '#' comments."""
    facets = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            ids = [int(tok) for tok in line.split()]
        except ValueError as e:
            raise FacetParseError(f"line {lineno}: {e}") from None
        if any(v < 0 for v in ids):
            raise FacetParseError(f"line {lineno}: negative vertex id")
        facets.append(tuple(ids))
    if not facets:
        raise FacetParseError("no facets")
    return facets


def load_facets(path) -> list[tuple[int, ...]]:
    with open(path) as fh:
        return parse_facets(fh.read())


def format_facets(facets: Iterable[Sequence[int]]) -> str:
    return "".join(" ".join(str(v) for v in f) + "\n" for f in facets)


# ----------------------------------------------------------------------------
# simplicial complexes


class SimplicialComplex:
    """Closed face lattice of a facet list; simplices are sorted vertex tuples.

    Within each dimension simplices are in lexicographic order, so identical
    facet lists always give identical numbering.
    """

    def __init__(self, facets: Sequence[Sequence[int]], name: str = ""):
        if not facets:
            raise ValueError("empty facet list")
        clean = set()
        for f in facets:
            if len(f) == 0:
                raise ValueError("empty facet")
            s = tuple(sorted(int(v) for v in f))
            if len(set(s)) != len(s):
                raise ValueError(f"duplicate vertex in facet {tuple(f)}")
            clean.add(s)
        self.name = name
        top = max(len(s) for s in clean) - 1
        self.dim = top
        by_dim: list[set] = [set() for _ in range(top + 1)]
        for s in clean:
            by_dim[len(s) - 1].add(s)
        for k in range(top, 0, -1):
            lower = by_dim[k - 1]
            for s in by_dim[k]:
                for i in range(k + 1):
                    lower.add(s[:i] + s[i + 1:])
        self.simplices: list[list[tuple]] = [sorted(S) for S in by_dim]
        self.index: list[dict] = [{s: i for i, s in enumerate(S)} for S in self.simplices]
        # maximal simplices are exactly the given facets not contained in others
        maximal = [s for s in clean if not _is_proper_face_somewhere(s, by_dim)]
        self.facets = sorted(maximal, key=lambda s: (len(s), s))
        self.is_pure = all(len(s) == top + 1 for s in self.facets)
        self.vertex_count = len(self.simplices[0])

    @property
    def f_vector(self) -> tuple[int, ...]:
        return tuple(len(S) for S in self.simplices)

    def euler_characteristic(self) -> int:
        return sum((-1) ** k * n for k, n in enumerate(self.f_vector))

    def face_array(self, k: int) -> np.ndarray:
        """(f_k, k+1) array; entry [j, i] is the index of simplex j with vertex i removed."""
        S = self.simplices[k]
        idx = self.index[k - 1]
        out = np.empty((len(S), k + 1), dtype=np.int64)
        for j, s in enumerate(S):
            for i in range(k + 1):
                out[j, i] = idx[s[:i] + s[i + 1:]]
        return out

    @cached_property
    def chains(self) -> "ChainComplex":
        return chain_complex(self)

    def __repr__(self):
        return f"SimplicialComplex({self.name or '?'}, f={self.f_vector})"


def _is_proper_face_somewhere(s: tuple, by_dim: list[set]) -> bool:
    k = len(s) - 1
    if k + 1 >= len(by_dim):
        return False
    vs = set(s)
    # a simplex is non-maximal iff it is a face of some (k+1)-simplex
    for t in by_dim[k + 1]:
        if vs.issubset(t):
            return True
    return False


def build_complex(facets: Sequence[Sequence[int]], name: str = "") -> SimplicialComplex:
    return SimplicialComplex(facets, name)


# ----------------------------------------------------------------------------
# chain complexes


class ChainComplex:
    """Free chain complex C_0..C_n with sparse boundary matrices.

    `bd[k]` is a scipy CSC matrix for d_k : C_k -> C_{k-1} (bd[0] has zero rows).
    `simplicial` points back to the complex when the bases are simplices.
    """

    _counter = itertools.count()

    def __init__(self, ranks: Sequence[int], boundaries: dict, simplicial: SimplicialComplex | None = None,
                 name: str = ""):
        self.ranks = tuple(int(r) for r in ranks)
        self.top = len(self.ranks) - 1
        self.simplicial = simplicial
        self.name = name
        self.uid = f"{name or 'cx'}#{next(ChainComplex._counter)}"
        self.bd = []
        for k in range(self.top + 1):
            rows = self.ranks[k - 1] if k > 0 else 0
            M = boundaries.get(k)
            if M is None:
                M = sp.csc_matrix((rows, self.ranks[k]), dtype=np.int64)
            M = sp.csc_matrix(M, dtype=np.int64)
            if M.shape != (rows, self.ranks[k]):
                raise ValueError(f"boundary {k} has shape {M.shape}, expected {(rows, self.ranks[k])}")
            M.eliminate_zeros()
            M.sort_indices()
            self.bd.append(M)
        for k in range(2, self.top + 1):
            if (self.bd[k - 1] @ self.bd[k]).count_nonzero():
                raise ValueError(f"boundary of boundary is nonzero in degree {k}")

    def boundary(self, k: int) -> IntMatrix:
        if k <= 0 or k > self.top:
            r = self.ranks[k - 1] if 0 < k <= self.top + 1 else 0
            c = self.ranks[k] if 0 <= k <= self.top else 0
            return IntMatrix.zeros(r, c)
        return IntMatrix.from_rows(self.bd[k].toarray().tolist(), self.ranks[k])

    def coboundary(self, k: int, cochain, m: int = 0) -> np.ndarray:
        """delta_k applied to a k-cochain; result reduced mod m when m > 0."""
        if k >= self.top:
            return np.zeros(0, dtype=np.int64)
        v = self.bd[k + 1].T @ np.asarray(cochain, dtype=np.int64)
        return v % m if m else v

    @cached_property
    def reduction(self) -> "Reduction":
        return Reduction(self)

    def __repr__(self):
        return f"ChainComplex({self.name or '?'}, ranks={self.ranks})"


def chain_complex(K: SimplicialComplex) -> ChainComplex:
    """Simplicial chains; d(s) = sum_i (-1)^i (s minus vertex i) on sorted vertices."""
    bds = {}
    for k in range(1, K.dim + 1):
        F = K.face_array(k)
        n = F.shape[0]
        signs = np.tile(np.array([(-1) ** i for i in range(k + 1)], dtype=np.int64), n)
        cols = np.repeat(np.arange(n, dtype=np.int64), k + 1)
        bds[k] = sp.csc_matrix((signs, (F.reshape(-1), cols)), shape=(len(K.simplices[k - 1]), n))
    return ChainComplex(K.f_vector, bds, simplicial=K, name=K.name)


def moore_chain_complex(m: int, k: int) -> ChainComplex:
    """C_{k+1} = Z --(m)--> C_k = Z plus a base point in degree 0."""
    if m < 2 or k < 1:
        raise ValueError("need m >= 2 and k >= 1")
    ranks = [1] + [0] * (k - 1) + [1, 1]
    bds = {k + 1: sp.csc_matrix(np.array([[m]], dtype=np.int64))}
    return ChainComplex(ranks, bds, name=f"moore({m},{k})")


def chain_complex_from_matrices(mats: dict[int, Sequence[Sequence[int]]], ranks: Sequence[int],
                                name: str = "") -> ChainComplex:
    bds = {k: sp.csc_matrix(np.array(M, dtype=np.int64).reshape(ranks[k - 1], ranks[k])) for k, M in mats.items()}
    return ChainComplex(ranks, bds, name=name)


# ----------------------------------------------------------------------------
# reduction engine


class _Log:
    """Append-only int log; int64 storage until a value overflows."""

    def __init__(self):
        self.data = array("q")

    def extend(self, vals):
        try:
            self.data.extend(vals)
        except OverflowError:
            self.data = list(self.data)
            self.data.extend(vals)


class Reduction:
    """Z-chain homotopy equivalence between a chain complex and a small one.

    Cells are eliminated in pairs (face f of dim k, cell c of dim k+1) with
    <dc, f> = +-1 and f the only non-kept face of c. Cells that never pair are
    kept; the reduced complex consists of the kept cells. Every elimination only
    adds kept cells to boundaries, so non-kept coboundaries never grow.
    """

    def __init__(self, C: ChainComplex):
        self.C = C
        ranks = C.ranks
        offs = [0]
        for r in ranks:
            offs.append(offs[-1] + r)
        N = offs[-1]
        self.offsets = offs
        dimof = np.repeat(np.arange(len(ranks)), ranks)
        bd: list = [None] * N
        cob: list = [[] for _ in range(N)]
        for k in range(1, C.top + 1):
            M = C.bd[k]
            ptr, ind, dat = M.indptr.tolist(), M.indices.tolist(), M.data.tolist()
            o, ol = offs[k], offs[k - 1]
            for j in range(ranks[k]):
                g = o + j
                d = {}
                for p in range(ptr[j], ptr[j + 1]):
                    f = ol + ind[p]
                    d[f] = dat[p]
                    cob[f].append(g)
                bd[g] = d
        for j in range(ranks[0]):
            bd[j] = {}
        nk = [len(d) for d in bd]
        alive = bytearray(b"\x01") * N
        kept = bytearray(N)
        # per-dimension replay logs, local indices
        pi_log = [_Log() for _ in ranks]      # dim(f)=k: f, lam, nK, (g, v)*
        iota_log = [_Log() for _ in ranks]    # dim(c)=k: c, lam, nX, (x, kappa)*
        queue = deque(g for g in range(N) if nk[g] == 1)
        ptr_next = 0
        while True:
            while queue:
                c = queue.popleft()
                if not alive[c] or kept[c] or nk[c] != 1:
                    continue
                bc = bd[c]
                f = next(g for g in bc if not kept[g])
                lam = bc[f]
                if lam != 1 and lam != -1:
                    continue
                k = int(dimof[f])
                ok, okc = offs[k], offs[k + 1]
                K = [(g, v) for g, v in bc.items() if g != f]
                X = []
                for x in cob[f]:
                    if x == c or not alive[x]:
                        continue
                    bx = bd[x]
                    kap = bx.pop(f)
                    X.append((x, kap))
                    if not kept[x]:
                        nk[x] -= 1
                        if nk[x] == 1:
                            queue.append(x)
                    if K:
                        coef = kap * lam
                        for g, v in K:
                            nv = bx.get(g, 0) - coef * v
                            if nv:
                                bx[g] = nv
                            else:
                                bx.pop(g, None)
                for y in cob[c]:
                    if alive[y]:
                        del bd[y][c]
                        if not kept[y]:
                            nk[y] -= 1
                            if nk[y] == 1:
                                queue.append(y)
                alive[c] = 0
                alive[f] = 0
                bd[c] = None
                bd[f] = None
                rec = [f - ok, lam, len(K)]
                for g, v in K:
                    rec += (g - ok, v)
                pi_log[k].extend(rec)
                rec = [c - okc, lam, len(X)]
                for x, kap in X:
                    rec += (x - okc, kap)
                iota_log[k + 1].extend(rec)
            while ptr_next < N and (not alive[ptr_next] or kept[ptr_next]):
                ptr_next += 1
            if ptr_next == N:
                break
            g = ptr_next
            kept[g] = 1
            for x in cob[g]:
                if alive[x] and not kept[x]:
                    nk[x] -= 1
                    if nk[x] == 1:
                        queue.append(x)
        self.kept = []
        for k in range(len(ranks)):
            self.kept.append([g - offs[k] for g in range(offs[k], offs[k + 1]) if kept[g]])
        # small boundary matrices between kept cells, dense python ints
        self.small_ranks = tuple(len(c) for c in self.kept)
        self.small_bd: list[list[list[int]]] = [[] for _ in ranks]
        for k in range(1, len(ranks)):
            pos = {g: i for i, g in enumerate(self.kept[k - 1])}
            M = [[0] * len(self.kept[k]) for _ in self.kept[k - 1]]
            for j, g in enumerate(self.kept[k]):
                for f, v in bd[offs[k] + g].items():
                    M[pos[f - offs[k - 1]]][j] = v
            self.small_bd[k] = M
        self.pi_log = [lg.data for lg in pi_log]
        self.iota_log = [lg.data for lg in iota_log]
        self._cohom_cache: dict = {}

    # -- cochain transport -------------------------------------------------

    def pull_back(self, k: int, phi_small: Sequence[int], m: int = 0) -> np.ndarray:
        """Cochain on the full complex representing the same class as phi_small."""
        out = np.zeros(self.C.ranks[k], dtype=object if m == 0 else np.int64)
        for i, g in enumerate(self.kept[k]):
            out[g] = phi_small[i]
        log = self.pi_log[k]
        p, L = 0, len(log)
        while p < L:
            f, lam, nK = log[p], log[p + 1], log[p + 2]
            s = 0
            for q in range(p + 3, p + 3 + 2 * nK, 2):
                s += log[q + 1] * out[log[q]]
            out[f] = -lam * s
            p += 3 + 2 * nK
        if m:
            out %= m
        return out

    def push_forward(self, k: int, psi, m: int = 0) -> list[int]:
        """Restrict a full k-cocycle to the kept cells through the recorded eliminations."""
        v = [int(x) for x in psi]
        log = self.iota_log[k]
        p, L = 0, len(log)
        while p < L:
            c, lam, nX = log[p], log[p + 1], log[p + 2]
            vc = v[c]
            if vc:
                t = lam * vc
                for q in range(p + 3, p + 3 + 2 * nX, 2):
                    v[log[q]] -= log[q + 1] * t
            p += 3 + 2 * nX
        out = [v[g] for g in self.kept[k]]
        return [x % m for x in out] if m else out

    # -- cohomology of the small complex --------------------------------------

    def small_coboundary(self, k: int, x: Sequence[int]) -> list[int]:
        """delta on kept cells: (d_{k+1})^T x."""
        if k + 1 >= len(self.small_bd):
            return []
        M = self.small_bd[k + 1]
        n1 = self.small_ranks[k + 1]
        return [sum(M[i][j] * x[i] for i in range(len(x))) for j in range(n1)]

    def cohomology(self, k: int, m: int) -> "SmallCohomology":
        key = (k, m)
        if key not in self._cohom_cache:
            self._cohom_cache[key] = SmallCohomology(self, k, m)
        return self._cohom_cache[key]


class SmallCohomology:
    """H^k(D; Z/m) of the reduced complex D, with generators and coordinates.

    Cocycles: P delta_k Q = S, so x = Q y is a cocycle iff s_i y_i = 0 mod m.
    The cocycle lattice is Q diag(e) with e_i = m / gcd(m, s_i); relations in
    those coordinates are the coboundaries plus diag(m / e_i). A second Smith
    form of the relation matrix gives invariant factors and generators.
    """

    def __init__(self, R: Reduction, k: int, m: int):
        self.k, self.m = k, m
        nk = R.small_ranks[k]
        d1 = R.small_bd[k + 1] if k + 1 < len(R.small_bd) else []
        n1 = R.small_ranks[k + 1] if k + 1 < len(R.small_ranks) else 0
        delta1 = [[d1[i][j] for i in range(nk)] for j in range(n1)]  # n1 x nk
        if n1 and nk:
            s1 = snf_rows(delta1, n1, nk)
            Q, Qinv, sdiag = s1.V, s1.Vinv, s1.diag
        else:
            Q = [[int(i == j) for j in range(nk)] for i in range(nk)]
            Qinv = [r[:] for r in Q]
            sdiag = []
        e = []
        for i in range(nk):
            if i < len(sdiag):
                e.append(0 if m == 0 else m // gcd(m, sdiag[i]))
            else:
                e.append(1)
        live = [i for i in range(nk) if e[i] != 0]
        self._Qinv, self._e, self._live = Qinv, e, live
        d = len(live)
        # relations: coboundaries (columns of delta_{k-1} = d_k^T) in z coordinates
        d0 = R.small_bd[k] if k >= 1 else []
        nprev = R.small_ranks[k - 1] if k >= 1 else 0
        rel_cols = []
        for j in range(nprev):
            x = [d0[j][i] for i in range(nk)]  # column j of d_k^T is row j of d_k
            rel_cols.append(self._z(x))
        if m:
            for t, i in enumerate(live):
                col = [0] * d
                col[t] = m // e[i]
                rel_cols.append(col)
        rel = [[col[t] for col in rel_cols] for t in range(d)]
        if d and rel_cols:
            s2 = snf_rows(rel, d, len(rel_cols))
            U, Uinv, diag2 = s2.U, s2.Uinv, s2.diag
        else:
            U = [[int(i == j) for j in range(d)] for i in range(d)]
            Uinv = [r[:] for r in U]
            diag2 = []
        orders = [diag2[i] if i < len(diag2) else 0 for i in range(d)]
        # generators ordered free first, then torsion in invariant-factor order
        free_idx = [i for i in range(d) if orders[i] == 0]
        tors_idx = [i for i in range(d) if orders[i] > 1]
        self._sel = free_idx + tors_idx
        self.moduli = tuple(orders[i] for i in self._sel)
        self.group = AbelianGroup(len(free_idx), tuple(orders[i] for i in tors_idx))
        self._U = U
        Qdiag = [[Q[r][i] * e[i] for i in live] for r in range(nk)]
        self.generators = []
        for i in self._sel:
            col = [Uinv[t][i] for t in range(d)]
            x = [sum(Qdiag[r][t] * col[t] for t in range(d)) for r in range(nk)]
            self.generators.append([v % m for v in x] if m else x)

    def _z(self, x: Sequence[int]) -> list[int]:
        y = [sum(self._Qinv[i][j] * x[j] for j in range(len(x))) for i in range(len(x))]
        out = []
        for i in self._live:
            if y[i] % self._e[i]:
                raise ValueError("cochain is not a cocycle")
            out.append(y[i] // self._e[i])
        return out

    def coordinates(self, x: Sequence[int]) -> tuple[int, ...]:
        """Class coordinates of a cocycle on the kept cells (reduced mod each order)."""
        if self.m:
            x = [int(v) % self.m for v in x]
        z = self._z(x)
        d = len(z)
        w = [sum(self._U[i][t] * z[t] for t in range(d)) for i in range(d)]
        out = []
        for i, mod in zip(self._sel, self.moduli):
            out.append(w[i] % mod if mod else w[i])
        return tuple(out)


# ----------------------------------------------------------------------------
# classes and cohomology API


@dataclass(frozen=True)
class CohomClass:
    degree: int
    modulus: int
    cochain: tuple
    complex_id: str = ""

    def __add__(self, other: "CohomClass") -> "CohomClass":
        if (self.degree, self.modulus, self.complex_id) != (other.degree, other.modulus, other.complex_id):
            raise ValueError("incompatible classes")
        m = self.modulus
        c = tuple((a + b) % m if m else a + b for a, b in zip(self.cochain, other.cochain))
        return CohomClass(self.degree, m, c, self.complex_id)


def _as_chain(X) -> ChainComplex:
    return X.chains if isinstance(X, SimplicialComplex) else X


def cohomology(X, k: int, m: int = 0) -> tuple[AbelianGroup, list[CohomClass]]:
    """H^k(X; Z/m) (m = 0: integers) with one representative cocycle per generator."""
    C = _as_chain(X)
    if not 0 <= k <= C.top:
        raise ValueError(f"degree {k} out of range 0..{C.top}")
    H = C.reduction.cohomology(k, m)
    basis = [CohomClass(k, m, tuple(int(v) for v in C.reduction.pull_back(k, g, m)), C.uid) for g in H.generators]
    return H.group, basis


def cohomology_group(X, k: int, m: int = 0) -> AbelianGroup:
    C = _as_chain(X)
    if not 0 <= k <= C.top:
        return AbelianGroup.trivial()
    return C.reduction.cohomology(k, m).group


def class_coordinates(X, a: CohomClass) -> tuple[int, ...]:
    """Coordinates of a cocycle in the generator basis returned by `cohomology`."""
    C = _as_chain(X)
    R = C.reduction
    if a.degree < 0 or a.degree > C.top:
        return ()
    if not is_cocycle(C, a.degree, a.cochain, a.modulus):
        raise ValueError("not a cocycle")
    x = R.push_forward(a.degree, a.cochain, a.modulus)
    return R.cohomology(a.degree, a.modulus).coordinates(x)


def is_cocycle(X, k: int, cochain, m: int = 0) -> bool:
    C = _as_chain(X)
    d = C.coboundary(k, np.asarray(cochain, dtype=np.int64), m)
    return not np.any(d)


def homology_group(X, k: int) -> AbelianGroup:
    """H_k(X; Z) via universal coefficients from integral cohomology."""
    C = _as_chain(X)
    free = cohomology_group(C, k, 0).free_rank
    tors = cohomology_group(C, k + 1, 0).torsion if k + 1 <= C.top else ()
    return AbelianGroup(free, tors)


# ----------------------------------------------------------------------------
# products and standard models


def product_complex(K1: SimplicialComplex, K2: SimplicialComplex) -> SimplicialComplex:
    """Staircase triangulation of |K1| x |K2|; vertex (i, j) becomes i * n2 + j.

    Each pair of facets contributes C(d1 + d2, d1) monotone lattice paths.
    Relabelling by position keeps the product order a linear extension.
    """
    if not (K1.is_pure and K2.is_pure):
        raise ValueError("product requires pure complexes")
    v1 = {v: i for i, (v,) in enumerate(K1.simplices[0])}
    v2 = {v: i for i, (v,) in enumerate(K2.simplices[0])}
    n2 = len(v2)
    d1, d2 = K1.dim, K2.dim
    paths = []
    for steps in itertools.combinations(range(d1 + d2), d1):
        i = j = 0
        path = [(0, 0)]
        for t in range(d1 + d2):
            if t in steps:
                i += 1
            else:
                j += 1
            path.append((i, j))
        paths.append(path)
    facets = []
    for s in K1.facets:
        a = [v1[v] for v in s]
        for t in K2.facets:
            b = [v2[v] for v in t]
            for path in paths:
                facets.append(tuple(a[i] * n2 + b[j] for i, j in path))
    return SimplicialComplex(facets, name=f"({K1.name})x({K2.name})")


def sphere_boundary(n: int) -> SimplicialComplex:
    """Boundary of the (n+1)-simplex, a triangulated n-sphere."""
    return SimplicialComplex(list(itertools.combinations(range(n + 2), n + 1)), name=f"S^{n}")


def simplex(n: int) -> SimplicialComplex:
    return SimplicialComplex([tuple(range(n + 1))], name=f"D^{n}")


RP2_FACETS = [
    (0, 1, 2), (0, 2, 3), (0, 3, 4), (0, 4, 5), (0, 1, 5),
    (1, 2, 4), (2, 3, 5), (1, 3, 4), (2, 4, 5), (1, 3, 5),
]


def rp2() -> SimplicialComplex:
    """Six-vertex real projective plane (the hemi-icosahedron)."""
    return SimplicialComplex(RP2_FACETS, name="RP^2")


def cross_polytope_rp(n: int) -> SimplicialComplex:
    """RP^n as the barycentric subdivision of (boundary of the (n+1)-cross-polytope) / antipodal map.

    The quotient is a regular CW complex, so its order complex is simplicial.
    Facet count is 2^n (n+1)!, which limits this to small n.
    """
    # cells of the cross-polytope boundary: sign vectors with support of size 1..n+1
    cells = set()
    for size in range(1, n + 2):
        for supp in itertools.combinations(range(n + 1), size):
            for signs in itertools.product((1, -1), repeat=size):
                cell = tuple(sorted(zip(supp, signs)))
                neg = tuple(sorted((a, -s) for a, s in cell))
                cells.add(min(cell, neg))
    cells = sorted(cells, key=lambda c: (len(c), c))
    label = {c: i for i, c in enumerate(cells)}

    def canon(c):
        neg = tuple(sorted((a, -s) for a, s in c))
        return min(c, neg)

    facets = []
    for c in cells:
        if len(c) != n + 1:
            continue
        # maximal chains of faces of the top cell c, one representative per class
        for order in itertools.permutations(range(n + 1)):
            chain = []
            for t in range(1, n + 2):
                chain.append(label[canon(tuple(sorted(c[i] for i in order[:t])))])
            facets.append(tuple(chain))
    return SimplicialComplex(facets, name=f"RP^{n}")


# ----------------------------------------------------------------------------
# manifold checks


class NotAPseudomanifold(ValueError):
    pass


@dataclass(frozen=True)
class TopStructure:
    orientable: bool
    fundamental_class_mod2: tuple  # coefficient of each top simplex
    h1_zero: bool


def pseudomanifold_check(K: SimplicialComplex) -> None:
    if not K.is_pure:
        raise NotAPseudomanifold("complex is not pure")
    n = K.dim
    if n == 0:
        raise NotAPseudomanifold("dimension 0")
    F = K.face_array(n)
    counts = np.bincount(F.reshape(-1), minlength=len(K.simplices[n - 1]))
    bad = np.nonzero(counts != 2)[0]
    if len(bad):
        s = K.simplices[n - 1][int(bad[0])]
        raise NotAPseudomanifold(f"ridge {s} lies in {int(counts[bad[0]])} facets")


def top_structure(K: SimplicialComplex) -> TopStructure:
    pseudomanifold_check(K)
    n = K.dim
    Hn = homology_group(K, n)
    H1 = homology_group(K, 1)
    return TopStructure(
        orientable=(Hn == AbelianGroup(1, ())),
        fundamental_class_mod2=(1,) * len(K.simplices[n]),
        h1_zero=H1.is_trivial,
    )


def trivial_pi1_certificate(K: SimplicialComplex) -> bool:
    """Sufficient test for a trivial edge-path group.

    Edges of a BFS spanning tree are trivial; a triangle with exactly one
    non-trivial edge makes that edge trivial. True means every edge was killed,
    so pi_1 = 1. False proves nothing.
    """
    if K.dim < 1:
        return True
    edges = K.simplices[1]
    eidx = K.index[1]
    nv = len(K.simplices[0])
    adj: list[list[tuple[int, int]]] = [[] for _ in range(nv)]
    vidx = K.index[0]
    for i, (a, b) in enumerate(edges):
        a, b = vidx[(a,)], vidx[(b,)]
        adj[a].append((b, i))
        adj[b].append((a, i))
    trivial = np.zeros(len(edges), dtype=bool)
    seen = np.zeros(nv, dtype=bool)
    seen[0] = True
    queue = deque([0])
    while queue:
        v = queue.popleft()
        for w, e in adj[v]:
            if not seen[w]:
                seen[w] = True
                trivial[e] = True
                queue.append(w)
    if not seen.all():
        return False
    if K.dim < 2:
        return bool(trivial.all())
    tri_edges = [(eidx[(a, b)], eidx[(a, c)], eidx[(b, c)]) for a, b, c in K.simplices[2]]
    by_edge: list[list[int]] = [[] for _ in edges]
    for t, es in enumerate(tri_edges):
        for e in es:
            by_edge[e].append(t)
    work = deque(range(len(tri_edges)))
    while work:
        es = tri_edges[work.popleft()]
        open_ = [e for e in es if not trivial[e]]
        if len(open_) == 1:
            e = open_[0]
            trivial[e] = True
            work.extend(by_edge[e])
    return bool(trivial.all())


def betti_numbers(X) -> list[int]:
    C = _as_chain(X)
    return [cohomology_group(C, k, 0).free_rank for k in range(C.top + 1)]


def binomial(n: int, k: int) -> int:
    return comb(n, k) if 0 <= k <= n else 0
