"""Brute-force verifiers for the test suite and `verify`.

Nothing here calls the reduction engine or the Smith normal form; every answer
comes from exhaustive enumeration or from minors.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import gcd, prod

import numpy as np

from .exact_algebra import AbelianGroup, factorint

MAX_ENUM = 2 ** 20


class OracleBoundError(ValueError):
    pass


def _dense_boundary(C, k: int) -> np.ndarray:
    """d_k : C_k -> C_{k-1} as a dense array, (0 x r) or empty shapes out of range."""
    if k < 1 or k > C.top:
        rows = C.ranks[k - 1] if 1 <= k <= C.top + 1 else 0
        cols = C.ranks[k] if 0 <= k <= C.top else 0
        return np.zeros((rows, cols), dtype=np.int64)
    return C.bd[k].toarray().astype(np.int64)


def _all_cochains(m: int, r: int) -> np.ndarray:
    if m ** r > MAX_ENUM:
        raise OracleBoundError(f"{m}^{r} cochains exceed the enumeration bound")
    if r == 0:
        return np.zeros((1, 0), dtype=np.int64)
    return np.array(list(itertools.product(range(m), repeat=r)), dtype=np.int64)


def _encode(X: np.ndarray, m: int) -> np.ndarray:
    if X.shape[1] == 0:
        return np.zeros(X.shape[0], dtype=np.int64)
    w = m ** np.arange(X.shape[1] - 1, -1, -1, dtype=np.int64)
    return (X % m) @ w


@dataclass(frozen=True)
class BruteCohomology:
    order: int
    n_cocycles: int
    n_coboundaries: int
    group: AbelianGroup
    cocycles: np.ndarray  # every mod-m cocycle, one per row


def brute_cohomology(C, k: int, m: int) -> BruteCohomology:
    """H^k(C; Z/m) by listing every cochain."""
    if m < 2:
        raise ValueError("brute_cohomology needs m >= 2")
    rk = C.ranks[k] if 0 <= k <= C.top else 0
    rk1 = C.ranks[k - 1] if 1 <= k <= C.top + 1 else 0
    X = _all_cochains(m, rk)
    delta = _dense_boundary(C, k + 1).T  # C^k -> C^{k+1}
    Z = X[np.all((X @ delta.T) % m == 0, axis=1)] if delta.size else X
    # B^k as the span of coboundaries of basis cochains; |B| <= m^rk
    B = _encode(_span(_dense_boundary(C, k) % m if rk1 else np.zeros((0, rk), dtype=np.int64), m, rk), m)
    order = len(Z) // len(B)
    # |H[n]| = |{z : n z in B}| / |B| pins the invariant factors
    torsion = []
    for p, e in sorted(factorint(m).items()):
        counts = [0]
        for j in range(1, e + 1):
            hit = np.isin(_encode((p ** j) * Z, m), B).sum() // len(B)
            counts.append(round(np.log(hit) / np.log(p)) if hit > 1 else 0)
        at_least = [counts[j] - counts[j - 1] for j in range(1, e + 1)] + [0]
        for j in range(1, e + 1):
            torsion += [p ** j] * (at_least[j - 1] - at_least[j])
    return BruteCohomology(order, len(Z), len(B), AbelianGroup.from_cyclic(torsion), Z)


def _span(G: np.ndarray, m: int, r: int) -> np.ndarray:
    """Every Z/m-combination of the rows of G, deduplicated."""
    S = np.zeros((1, r), dtype=np.int64)
    for g in G:
        if not (g % m).any():
            continue
        S = np.concatenate([(S + t * g) % m for t in range(m)])
        _, idx = np.unique(_encode(S, m), return_index=True)
        S = S[np.sort(idx)]
        if len(S) > MAX_ENUM:
            raise OracleBoundError("span exceeds the enumeration bound")
    return S


def brute_is_coboundary(C, k: int, cochain, m: int) -> bool:
    rk = C.ranks[k]
    rk1 = C.ranks[k - 1] if k >= 1 else 0
    target = np.asarray(cochain, dtype=np.int64) % m
    if not target.any():
        return True
    if rk1 == 0:
        return False
    S = _span(_dense_boundary(C, k) % m, m, rk)
    return bool(np.isin(_encode(target[None, :], m), _encode(S, m))[0])


def _lift_candidates(a, base: int, step: int, window: int, max_dim: int):
    """All integer vectors x with x = a mod base and |x_i| <= window."""
    a = [int(v) % base for v in a]
    if len(a) > max_dim:
        raise OracleBoundError(f"cochain dimension {len(a)} exceeds {max_dim}")
    choices = [[v for v in range(-window, window + 1) if (v - ai) % base == 0] for ai in a]
    if prod(len(c) for c in choices) > MAX_ENUM:
        raise OracleBoundError("lift window too large")
    return itertools.product(*choices)


def brute_bockstein(C, r: int, cochain, k: int, max_dim: int = 24):
    """beta_r of the mod-2 cocycle `cochain` in degree k by searching integral lifts.

    Returns the mod-2 (k+1)-cochain delta(lift)/2^r from the first lift with
    delta(lift) = 0 mod 2^r, or None when no lift in the window |x| <= 2^r + 2
    qualifies.
    """
    if r < 1:
        raise ValueError("r >= 1")
    D = _dense_boundary(C, k + 1).T
    mod = 2 ** r
    for x in _lift_candidates(cochain, 2, 2, mod + 2, max_dim):
        d = D @ np.array(x, dtype=np.int64) if D.size else np.zeros(D.shape[0], dtype=np.int64)
        if np.all(d % mod == 0):
            return tuple(int(v) for v in (d // mod) % 2)
    return None


def brute_d2(C, cochain, k: int, max_dim: int = 24) -> set:
    """All values delta(lift)/4 mod 2 over mod-8 lifts of a mod-4 cocycle."""
    D = _dense_boundary(C, k + 1).T
    out = set()
    for x in _lift_candidates(cochain, 4, 4, 7, max_dim):
        d = D @ np.array(x, dtype=np.int64) if D.size else np.zeros(D.shape[0], dtype=np.int64)
        if np.any(d % 4):
            raise ValueError("not a mod-4 cocycle")
        out.add(tuple(int(v) for v in (d // 4) % 2))
    return out


def brute_subgroup(ambient: AbelianGroup, generators) -> frozenset:
    """Closure of the generators inside a finite ambient group."""
    if ambient.free_rank:
        raise OracleBoundError("ambient must be finite")
    mods = ambient.moduli()
    if prod(mods) > 2 ** 16:
        raise OracleBoundError("ambient larger than 2^16")
    gens = [tuple(int(x) % m for x, m in zip(g, mods)) for g in generators]
    zero = tuple(0 for _ in mods)
    seen = {zero}
    frontier = [zero]
    while frontier:
        nxt = []
        for v in frontier:
            for g in gens:
                w = tuple((a + b) % m for a, b, m in zip(v, g, mods))
                if w not in seen:
                    seen.add(w)
                    nxt.append(w)
        frontier = nxt
    return frozenset(seen)


def _det(M) -> int:
    """Leibniz expansion; fine up to 7 x 7."""
    n = len(M)
    total = 0
    for perm in itertools.permutations(range(n)):
        inv = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        total += (-1) ** inv * prod(M[i][perm[i]] for i in range(n))
    return total


def determinantal_divisors(A) -> list[int]:
    """d_k = gcd of all k x k minors, k = 1..min(shape), stopping at the first zero."""
    A = [list(map(int, r)) for r in A]
    nr = len(A)
    nc = len(A[0]) if A else 0
    out = []
    for k in range(1, min(nr, nc) + 1):
        g = 0
        for rows in itertools.combinations(range(nr), k):
            for cols in itertools.combinations(range(nc), k):
                g = gcd(g, _det([[A[i][j] for j in cols] for i in rows]))
        if g == 0:
            break
        out.append(g)
    return out


def brute_invariant_factors(A) -> list[int]:
    """Nonzero diagonal of the Smith form from the determinantal divisors."""
    d = [1] + determinantal_divisors(A)
    return [d[i] // d[i - 1] for i in range(1, len(d))]


def brute_cokernel_order(A, nrows: int | None = None) -> int | None:
    """|Z^r / im A| by enumerating the column span modulo N = gcd of the r x r minors.

    None when the cokernel is infinite.
    """
    A = [list(map(int, r)) for r in A]
    r = len(A) if nrows is None else nrows
    if r == 0:
        return 1
    d = determinantal_divisors(A) if A and A[0] else []
    if len(d) < r:
        return None
    N = d[r - 1]
    if N == 1:
        return 1
    if N ** r > 2 ** 16:
        raise OracleBoundError("cokernel enumeration too large")
    cols = [tuple(A[i][j] for i in range(r)) for j in range(len(A[0]))]
    span = brute_subgroup(AbelianGroup.from_cyclic([N] * r) if N > 1 else AbelianGroup.trivial(), cols)
    return N ** r // len(span)
