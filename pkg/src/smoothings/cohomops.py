"""Cup and cup-i products, Steenrod squares, higher Bocksteins, d_2, Wu and Stiefel-Whitney classes.

Conventions
-----------
Cup products use the front-face/back-face formula on sorted vertex tuples.
Cup-i products use the subset formula

    (a cup_i b)(x) = sum over U in {0..n}, |U| = n - i, of a(x minus U-) b(x minus U+)

where U = {u_1 < ... < u_{n-i}}, U- = {u_j : u_j = j mod 2} and U+ = U \\ U-.
For i = 0 only U = {0..n} minus {p} survives, which is the front/back face rule.

Coefficient operations (Bocksteins, d_2, reduction) run on any ChainComplex.
Anything needing cup-i requires simplicial input and rejects synthetic complexes.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from math import gcd
from operator import itemgetter
from typing import Sequence

import numpy as np

from .complex_core import (
    ChainComplex,
    CohomClass,
    SimplicialComplex,
    _as_chain,
    class_coordinates,
    cohomology,
    cohomology_group,
    is_cocycle,
    top_structure,
)
from .exact_algebra import snf_rows, solve_mod2


class SyntheticInputError(TypeError):
    """Raised when a simplicial-structure operation receives a bare chain complex."""


class SingularPairingError(ValueError):
    """The mod-2 intersection pairing is degenerate, so the input is not a closed manifold."""


class _UndefinedType:
    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self):
        return "Undefined"

    def __bool__(self):
        return False


Undefined = _UndefinedType()


def _simplicial(X) -> SimplicialComplex:
    if isinstance(X, SimplicialComplex):
        return X
    if isinstance(X, ChainComplex) and X.simplicial is not None:
        return X.simplicial
    raise SyntheticInputError("operation needs a simplicial complex, got a synthetic chain complex")


def _same_complex(K: SimplicialComplex, *classes: CohomClass):
    uid = K.chains.uid
    for c in classes:
        if c.complex_id and c.complex_id != uid:
            raise ValueError("class belongs to a different complex")


# ----------------------------------------------------------------------------
# products


def cup(K, a: CohomClass, b: CohomClass) -> CohomClass:
    """Front-face/back-face cup product, coefficients mod a.modulus."""
    K = _simplicial(K)
    _same_complex(K, a, b)
    if a.modulus != b.modulus:
        raise ValueError("moduli differ")
    m = a.modulus
    p, q = a.degree, b.degree
    n = p + q
    if n > K.dim:
        return CohomClass(n, m, (), K.chains.uid)
    ia, ib = K.index[p], K.index[q]
    av, bv = a.cochain, b.cochain
    out = []
    for s in K.simplices[n]:
        x = av[ia[s[:p + 1]]]
        if x:
            x *= bv[ib[s[p:]]]
        out.append(x % m if m else x)
    return CohomClass(n, m, tuple(out), K.chains.uid)


@lru_cache(maxsize=None)
def cup_i_terms(n: int, p: int, q: int, i: int) -> tuple:
    """Vertex positions kept for (a, b) in each surviving term of a cup_i b on an n-simplex."""
    terms = []
    for U in itertools.combinations(range(n + 1), n - i):
        um = [u for j, u in enumerate(U, 1) if u % 2 == j % 2]
        up = [u for j, u in enumerate(U, 1) if u % 2 != j % 2]
        if len(um) != n - p or len(up) != n - q:
            continue
        keep_a = tuple(v for v in range(n + 1) if v not in um)
        keep_b = tuple(v for v in range(n + 1) if v not in up)
        terms.append((keep_a, keep_b))
    return tuple(terms)


def _getter(pos):
    g = itemgetter(*pos)
    return g if len(pos) > 1 else (lambda s, g=g: (g(s),))


def cup_i(K, a: CohomClass, b: CohomClass, i: int) -> tuple:
    """The mod-2 cochain a cup_i b (degree deg a + deg b - i)."""
    if i < 0:
        raise ValueError("cup_i needs i >= 0")
    K = _simplicial(K)
    _same_complex(K, a, b)
    p, q = a.degree, b.degree
    n = p + q - i
    if n > K.dim or n < max(p, q):
        return (0,) * (len(K.simplices[n]) if 0 <= n <= K.dim else 0)
    sa = {s for s, v in zip(K.simplices[p], a.cochain) if v % 2}
    sb = {s for s, v in zip(K.simplices[q], b.cochain) if v % 2}
    if not sa or not sb:
        return (0,) * len(K.simplices[n])
    terms = [(_getter(ka), _getter(kb)) for ka, kb in cup_i_terms(n, p, q, i)]
    out = []
    for s in K.simplices[n]:
        t = 0
        for ga, gb in terms:
            if ga(s) in sa and gb(s) in sb:
                t ^= 1
        out.append(t)
    return tuple(out)


def steenrod_sq(K, k: int, a: CohomClass) -> CohomClass:
    """Sq^k a = a cup_{deg a - k} a, mod 2."""
    K = _simplicial(K)
    if a.modulus != 2:
        raise ValueError("Steenrod squares need mod-2 classes")
    if k < 0:
        raise ValueError("k must be >= 0")
    p = a.degree
    if k > p or p + k > K.dim:
        n = p + k
        size = len(K.simplices[n]) if n <= K.dim else 0
        return CohomClass(n, 2, (0,) * size, K.chains.uid)
    return CohomClass(p + k, 2, cup_i(K, a, a, p - k), K.chains.uid)


def sq3(K, a: CohomClass) -> CohomClass:
    """Sq^3 through the Adem relation Sq^3 = Sq^1 Sq^2."""
    return steenrod_sq(K, 1, steenrod_sq(K, 2, a))


# ----------------------------------------------------------------------------
# coefficient operations


def reduce_class(a: CohomClass, m: int) -> CohomClass:
    """Coefficient reduction Z/M -> Z/m (m | M, or M = 0)."""
    if a.modulus and a.modulus % m:
        raise ValueError(f"cannot reduce mod {a.modulus} to mod {m}")
    return CohomClass(a.degree, m, tuple(int(v) % m for v in a.cochain), a.complex_id)


def _zero_class(C: ChainComplex, k: int, m: int) -> CohomClass:
    size = C.ranks[k] if 0 <= k <= C.top else 0
    return CohomClass(k, m, (0,) * size, C.uid)


def d2_connecting(X, a: CohomClass) -> CohomClass:
    """Connecting map of 0 -> Z/2 -> Z/8 -> Z/4 -> 0: lift, apply delta, divide by 4, reduce mod 2."""
    C = _as_chain(X)
    if a.modulus != 4:
        raise ValueError("d_2 takes mod-4 classes")
    k = a.degree
    if k >= C.top:
        return _zero_class(C, k + 1, 2)
    lift = np.array([int(v) % 4 for v in a.cochain], dtype=np.int64)
    d = C.coboundary(k, lift)
    if np.any(d % 4):
        raise ValueError("not a mod-4 cocycle")
    return CohomClass(k + 1, 2, tuple(int(v) for v in (d // 4) % 2), C.uid)


def _solve_lift(R, k: int, a_small: Sequence[int], r: int):
    """Integral lift of a mod-2 cocycle on kept cells with delta = 0 mod 2^r, or None."""
    nk = R.small_ranks[k]
    n1 = R.small_ranks[k + 1] if k + 1 < len(R.small_ranks) else 0
    a = [int(v) % 2 for v in a_small]
    if n1 == 0:
        return a
    M = R.small_bd[k + 1]
    D = [[M[i][j] for i in range(nk)] for j in range(n1)]
    mod = 2 ** r
    s = snf_rows(D, n1, nk)
    Da = [sum(D[j][i] * a[i] for i in range(nk)) for j in range(n1)]
    b = [sum(s.U[j][t] * Da[t] for t in range(n1)) for j in range(n1)]
    t_vec = [0] * nk
    for j in range(n1):
        if j < s.rank:
            c = 2 * s.diag[j]
            g = gcd(c, mod)
            if b[j] % g:
                return None
            mm = mod // g
            t_vec[j] = (-(b[j] // g) * pow((c // g) % mm, -1, mm)) % mm if mm > 1 else 0
        elif b[j] % mod:
            return None
    y = [sum(s.V[i][j] * t_vec[j] for j in range(nk)) for i in range(nk)]
    return [a[i] + 2 * y[i] for i in range(nk)]


def bockstein_higher(X, r: int, a: CohomClass):
    """beta_r of a mod-2 class: [delta(lift) / 2^r] mod 2, or Undefined when no lift mod 2^r exists.

    Computed on the reduced complex (a Z-chain equivalence, so the answer is the
    same class); the returned representative lives on the original complex.
    The value is determined up to the images of beta_s, s < r.
    """
    if r < 1:
        raise ValueError("r must be >= 1")
    if a.modulus != 2:
        raise ValueError("Bocksteins take mod-2 classes")
    C = _as_chain(X)
    R = C.reduction
    k = a.degree
    if k >= C.top:
        return _zero_class(C, k + 1, 2)
    if not is_cocycle(C, k, a.cochain, 2):
        raise ValueError("not a mod-2 cocycle")
    a_small = R.push_forward(k, a.cochain, 2)
    lift = _solve_lift(R, k, a_small, r)
    if lift is None:
        return Undefined
    d = R.small_coboundary(k, lift)
    v = [(x >> r) % 2 for x in d]
    full = R.pull_back(k + 1, v, 2)
    return CohomClass(k + 1, 2, tuple(int(x) for x in full), C.uid)


def sq2_d2(K, a: CohomClass) -> CohomClass:
    K = _simplicial(K)
    return steenrod_sq(K, 2, d2_connecting(K, a))


# ----------------------------------------------------------------------------
# operation matrices


@dataclass(frozen=True)
class OperationMatrix:
    name: str
    source: tuple  # (degree, modulus)
    target: tuple
    matrix: tuple  # rows indexed by target generators, columns by source generators

    @property
    def is_zero(self) -> bool:
        return not any(any(r) for r in self.matrix)

    def apply(self, x: Sequence[int]) -> tuple:
        m = self.target[1]
        return tuple(sum(c * v for c, v in zip(row, x)) % m for row in self.matrix)

    def to_json(self):
        return {"name": self.name, "source": list(self.source), "target": list(self.target),
                "matrix": [list(r) for r in self.matrix]}

    @classmethod
    def from_json(cls, d) -> "OperationMatrix":
        return cls(d["name"], tuple(d["source"]), tuple(d["target"]), tuple(tuple(r) for r in d["matrix"]))


def operation_matrix(X, name: str, source: tuple, target: tuple, op) -> OperationMatrix:
    """Matrix of a class-level map in the generator bases; skips work when either side is 0."""
    C = _as_chain(X)
    sdeg, smod = source
    tdeg, tmod = target
    Gs = cohomology_group(C, sdeg, smod) if 0 <= sdeg <= C.top else None
    Gt = cohomology_group(C, tdeg, tmod) if 0 <= tdeg <= C.top else None
    ns = Gs.ngens if Gs else 0
    nt = Gt.ngens if Gt else 0
    if ns == 0 or nt == 0:
        return OperationMatrix(name, source, target, tuple(tuple(0 for _ in range(ns)) for _ in range(nt)))
    _, basis = cohomology(C, sdeg, smod)
    cols = []
    for b in basis:
        out = op(b)
        if out is Undefined:
            raise ValueError(f"{name} undefined on a basis class")
        cols.append(class_coordinates(C, out))
    return OperationMatrix(name, source, target, tuple(tuple(c[i] for c in cols) for i in range(nt)))


def sq_matrix(K, k: int, deg: int) -> OperationMatrix:
    return operation_matrix(K, f"Sq{k}", (deg, 2), (deg + k, 2), lambda a: steenrod_sq(K, k, a))


def beta_matrix(X, r: int, deg: int) -> OperationMatrix:
    return operation_matrix(X, f"beta_{r}", (deg, 2), (deg + 1, 2), lambda a: bockstein_higher(X, r, a))


def d2_matrix(X, deg: int) -> OperationMatrix:
    return operation_matrix(X, "d2", (deg, 4), (deg + 1, 2), lambda a: d2_connecting(X, a))


def sq2_d2_matrix(K, deg: int) -> OperationMatrix:
    return operation_matrix(K, "Sq2_d2", (deg, 4), (deg + 3, 2), lambda a: sq2_d2(K, a))


def reduction_matrix(X, deg: int) -> OperationMatrix:
    return operation_matrix(X, "q_red4to2", (deg, 4), (deg, 2), lambda a: reduce_class(a, 2))


def compose(second: OperationMatrix, first: OperationMatrix, name: str) -> OperationMatrix:
    if first.target != second.source:
        raise ValueError("operation matrices do not compose")
    m = second.target[1]
    A, B = second.matrix, first.matrix
    inner = len(B)
    ncols = len(B[0]) if B else 0
    rows = tuple(tuple(sum(A[i][t] * B[t][j] for t in range(inner)) % m for j in range(ncols))
                 for i in range(len(A)))
    return OperationMatrix(name, first.source, second.target, rows)


# ----------------------------------------------------------------------------
# Wu and Stiefel-Whitney classes


def evaluate_top(a: CohomClass) -> int:
    """<a, [M]> mod 2, the fundamental class being the sum of all facets."""
    return sum(int(v) for v in a.cochain) % 2


@dataclass(frozen=True)
class WuSW:
    v1: CohomClass
    v2: CohomClass
    w1: CohomClass
    w2: CohomClass

    def coords(self, K) -> dict:
        return {name: class_coordinates(K, getattr(self, name)) for name in ("v1", "v2", "w1", "w2")}

    def is_spin(self, K) -> bool:
        c = self.coords(K)
        return not any(c["w1"]) and not any(c["w2"])


def wu_class(K, k: int) -> CohomClass:
    """v_k solving <v_k cup x, [M]> = <Sq^k x, [M]> for all x in H^{n-k}(;Z/2)."""
    K = _simplicial(K)
    n = K.dim
    C = K.chains
    Gk, Bk = cohomology(C, k, 2)
    Gnk, Bnk = cohomology(C, n - k, 2)
    if not Bnk or not Bk:
        return _zero_class(C, k, 2)
    pairing = [[evaluate_top(cup(K, e, f)) for e in Bk] for f in Bnk]
    rhs = [evaluate_top(steenrod_sq(K, k, f)) for f in Bnk]
    if len(Bk) != len(Bnk):
        raise SingularPairingError(f"dim H^{k} != dim H^{n - k} mod 2")
    sol = solve_mod2(pairing, rhs)
    if sol is None or _rank2(pairing) < len(Bk):
        raise SingularPairingError("intersection pairing is singular")
    v = _zero_class(C, k, 2)
    for c, e in zip(sol, Bk):
        if c:
            v = v + e
    return v


def _rank2(rows) -> int:
    from .exact_algebra import matrix_rank_mod_p
    return matrix_rank_mod_p(rows, 2) if rows else 0


def wu_and_sw(K) -> WuSW:
    """Wu classes v_1, v_2 and w_1 = v_1, w_2 = v_2 + Sq^1 v_1."""
    K = _simplicial(K)
    top_structure(K)
    v1 = wu_class(K, 1)
    v2 = wu_class(K, 2)
    w2 = v2 + steenrod_sq(K, 1, v1) if K.dim >= 2 else v2
    return WuSW(v1, v2, v1, w2)
