"""CohomProfile: the invariant package the classifier consumes, plus builders and case detectors.

Profiles come from three places:

* `extract_profile` runs the full engine on a triangulated manifold.
* `profile_sphere`, `profile_rp` and `profile_lens9` use one-cell-per-degree
  cellular chain models for every coefficient-level quantity (groups, d_2,
  Bocksteins, reduction) and closed forms for the Steenrod squares.
* `profile_connected_sum` combines two profiles block by block.

Bockstein data is stored per r as a basis of the subspace of H^7(;Z/2) on which
beta_r is defined, together with its values. Values are reduced modulo the
span of all lower-order values, which is exactly the indeterminacy of beta_r.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field, replace
from typing import Sequence

from .cohomops import (
    OperationMatrix,
    bockstein_higher,
    compose,
    d2_matrix,
    reduction_matrix,
    reduce_class,
    sq_matrix,
    wu_and_sw,
)
from .complex_core import (
    ChainComplex,
    CohomClass,
    SimplicialComplex,
    binomial,
    chain_complex_from_matrices,
    class_coordinates,
    cohomology,
    cohomology_group,
    top_structure,
    trivial_pi1_certificate,
)
from .exact_algebra import AbelianGroup, factorint

VERSION = "profile/1"
MAX_ENUM_DIM = 16  # classes in H^7(;Z/2) are enumerated; 2^16 is the ceiling


class ProfileError(ValueError):
    """Malformed profile or violated builder precondition."""


class HypothesisError(ValueError):
    """A theorem hypothesis fails for this profile (maps to CLI exit 3)."""


class UnclassifiedNineManifold(HypothesisError):
    """Non-spin 9-profile outside the Eta / IotaEta dichotomy."""


class NeedsSecondaryOpAssertion(Exception):
    """The branch depends on a secondary operation whose status is Unknown."""

    def __init__(self, needed: Sequence[str], outcomes: dict | None = None):
        self.needed = tuple(needed)
        self.outcomes = outcomes or {}
        super().__init__(f"needs assertion for {', '.join(self.needed)}")


# ----------------------------------------------------------------------------
# F_2 helpers


def f2_rref(vectors: Sequence[Sequence[int]]) -> list[tuple[int, ...]]:
    """Reduced row echelon basis of the span, canonical for the span."""
    rows = [[int(x) & 1 for x in v] for v in vectors]
    if not rows:
        return []
    ncols = len(rows[0])
    basis: list[list[int]] = []
    pivots: list[int] = []
    for c in range(ncols):
        piv = next((i for i, r in enumerate(rows) if r[c]), None)
        if piv is None:
            continue
        pr = rows.pop(piv)
        rows = [[x ^ y for x, y in zip(r, pr)] if r[c] else r for r in rows]
        basis = [[x ^ y for x, y in zip(b, pr)] if b[c] else b for b in basis]
        basis.append(pr)
        pivots.append(c)
    order = sorted(range(len(basis)), key=lambda i: pivots[i])
    return [tuple(basis[i]) for i in order]


def f2_reduce(v: Sequence[int], rref: Sequence[Sequence[int]]) -> tuple[int, ...]:
    v = [int(x) & 1 for x in v]
    for b in rref:
        c = next(i for i, x in enumerate(b) if x)
        if v[c]:
            v = [x ^ y for x, y in zip(v, b)]
    return tuple(v)


def f2_coeffs(v: Sequence[int], basis: Sequence[Sequence[int]]) -> list[int] | None:
    """Coefficients expressing v in `basis` (rows assumed independent), or None."""
    from .exact_algebra import solve_mod2
    if not basis:
        return [] if not any(int(x) & 1 for x in v) else None
    A = [[b[i] for b in basis] for i in range(len(v))]
    return solve_mod2(A, list(v))


# ----------------------------------------------------------------------------
# data types


@dataclass(frozen=True)
class SecondaryOpStatus:
    value: str  # Zero | Nonzero | Unknown
    provenance: str | None  # ForcedByVanishing | UserAsserted | KnownSpace | None

    def __post_init__(self):
        if self.value not in ("Zero", "Nonzero", "Unknown"):
            raise ProfileError(f"bad status {self.value}")
        if self.provenance not in (None, "ForcedByVanishing", "UserAsserted", "KnownSpace"):
            raise ProfileError(f"bad provenance {self.provenance}")

    def to_json(self):
        return {"provenance": self.provenance, "value": self.value}


@dataclass(frozen=True)
class CohomProfile:
    name: str = field(compare=False)
    n: int
    flags: dict
    groups: dict            # key -> AbelianGroup
    ops: dict               # key -> OperationMatrix
    bockstein: dict         # {"r_max", "h7": [...], "image_h7": [...]}
    secondary: dict         # {"phi": SecondaryOpStatus, "psi": SecondaryOpStatus}
    splitting: dict         # q-preimage data for the K~ + A split
    assertions: dict = field(default_factory=dict)
    caveats: tuple = ()
    # set only by the closed-form builders; selects space-specific theorems
    known_space: str | None = field(default=None, compare=False)
    # chain model the coefficient data was computed on; not serialized
    model: object = field(default=None, compare=False, repr=False)

    def group(self, key: str) -> AbelianGroup:
        return self.groups.get(key, AbelianGroup.trivial())

    def op(self, key: str) -> OperationMatrix:
        return self.ops[key]

    # -- serialization ---------------------------------------------------

    def to_json(self) -> dict:
        return {
            "assertions": dict(self.assertions),
            "bockstein": self.bockstein,
            "caveats": list(self.caveats),
            "flags": dict(self.flags),
            "groups": {k: g.to_json() for k, g in self.groups.items()},
            "known_space": self.known_space,
            "n": self.n,
            "name": self.name,
            "ops": {k: o.to_json() for k, o in self.ops.items()},
            "secondary": {k: s.to_json() for k, s in self.secondary.items()},
            "splitting": self.splitting,
            "version": VERSION,
        }

    def dumps(self) -> str:
        return json.dumps(_jsonable(self.to_json()), sort_keys=True, indent=1) + "\n"

    @classmethod
    def from_json(cls, d: dict) -> "CohomProfile":
        if d.get("version") != VERSION:
            raise ProfileError(f"unsupported profile version {d.get('version')!r}")
        try:
            p = cls(
                name=d["name"],
                n=int(d["n"]),
                flags={k: bool(v) for k, v in d["flags"].items()},
                groups={k: AbelianGroup.from_json(g) for k, g in d["groups"].items()},
                ops={k: OperationMatrix.from_json(o) for k, o in d["ops"].items()},
                bockstein=_tuplify_bockstein(d["bockstein"]),
                secondary={k: SecondaryOpStatus(s["value"], s["provenance"]) for k, s in d["secondary"].items()},
                splitting=_tuplify_splitting(d["splitting"]),
                assertions=dict(d.get("assertions", {})),
                caveats=tuple(d.get("caveats", ())),
                known_space=d.get("known_space"),
            )
        except (KeyError, TypeError) as e:
            raise ProfileError(f"malformed profile: {e}") from None
        validate_profile(p)
        return p

    @classmethod
    def loads(cls, text: str) -> "CohomProfile":
        try:
            d = json.loads(text)
        except json.JSONDecodeError as e:
            raise ProfileError(f"not JSON: {e}") from None
        return cls.from_json(d)


def _jsonable(x):
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return x


def _tuplify_bockstein(b):
    return {
        "h7": [{"domain": [tuple(v) for v in e["domain"]], "r": int(e["r"]),
                "values": [tuple(v) for v in e["values"]]} for e in b["h7"]],
        "image_h7": [tuple(v) for v in b["image_h7"]],
        "r_max": int(b["r_max"]),
    }


def _tuplify_splitting(s):
    out = dict(s)
    if out.get("witness") is not None:
        out["witness"] = tuple(out["witness"])
    return out


# ----------------------------------------------------------------------------
# which groups and operations a profile carries


def group_keys(n: int) -> list[str]:
    keys = []
    for k in range(6, n + 1):
        keys += [f"H^{k}(Z)", f"H^{k}(Z/2)", f"H^{k}(Z/4)"]
    keys += ["H^7(Z/28)", "H^7(Z/7)"]
    if n == 10:
        keys.append("H^10(Z/3)")
    return keys


def _parse_group_key(key: str) -> tuple[int, int]:
    deg, coeff = key[2:].split("(")
    coeff = coeff.rstrip(")")
    return int(deg), 0 if coeff == "Z" else int(coeff.split("/")[1])


def op_specs(n: int) -> dict[str, tuple]:
    """key -> (name, source (deg, mod), target (deg, mod))."""
    specs = {}
    for d in sorted({6, 7, n - 1}):
        specs[f"Sq1:{d}"] = ("Sq1", (d, 2), (d + 1, 2))
    for d in sorted({7, 8, n - 2}):
        specs[f"Sq2:{d}"] = ("Sq2", (d, 2), (d + 2, 2))
    for d in (6, 7):
        specs[f"d2:{d}"] = ("d2", (d, 4), (d + 1, 2))
        specs[f"Sq2_d2:{d}"] = ("Sq2_d2", (d, 4), (d + 3, 2))
    specs["q:7"] = ("q_red4to2", (7, 4), (7, 2))
    return specs


def _group_for(groups: dict, n: int, deg: int, mod: int) -> AbelianGroup:
    if deg < 0 or deg > n:
        return AbelianGroup.trivial()
    key = f"H^{deg}(Z)" if mod == 0 else f"H^{deg}(Z/{mod})"
    return groups.get(key, AbelianGroup.trivial())


# ----------------------------------------------------------------------------
# validation


def validate_profile(p: CohomProfile) -> None:
    if not 7 <= p.n <= 10:
        raise ProfileError(f"dimension {p.n} outside 7..10")
    for key in group_keys(p.n):
        if key not in p.groups:
            raise ProfileError(f"missing group {key}")
    for key, (name, src, tgt) in op_specs(p.n).items():
        if key not in p.ops:
            raise ProfileError(f"missing operation {key}")
        M = p.ops[key]
        ns = _group_for(p.groups, p.n, *src).ngens
        nt = _group_for(p.groups, p.n, *tgt).ngens
        if len(M.matrix) != nt or any(len(r) != ns for r in M.matrix):
            raise ProfileError(f"operation {key} has wrong shape")
    n = p.n
    if p.flags["spin"] and not p.ops[f"Sq2:{n - 2}"].is_zero:
        raise ProfileError("spin profile with nonzero Sq^2 into the top degree")
    if p.flags["spin"] and not p.flags["orientable"]:
        raise ProfileError("spin profile must be orientable")
    # exact sequence 0 -> coker Sq^1 -> H^7(;Z/4) -> ker Sq^1 -> 0
    h7 = p.group("H^7(Z/2)").ngens
    r6 = _rank2(p.ops["Sq1:6"].matrix)
    r7 = _rank2(p.ops["Sq1:7"].matrix)
    order4 = p.group("H^7(Z/4)").order or 0
    if order4 != 2 ** ((h7 - r6) + (h7 - r7)):
        raise ProfileError("H^7(;Z/4) order disagrees with the Sq^1 exact sequence")
    if _rank2(p.ops["q:7"].matrix) != h7 - r7:
        raise ProfileError("image of q is not ker Sq^1")
    for k, s in p.secondary.items():
        if s.provenance == "ForcedByVanishing" and not _secondary_forced(p.groups, p.ops, p.n):
            raise ProfileError(f"{k} marked forced but its source and target are nonzero")


def _rank2(M) -> int:
    from .exact_algebra import matrix_rank_mod_p
    return matrix_rank_mod_p([list(r) for r in M], 2) if M and M[0] else 0


def _secondary_forced(groups: dict, ops: dict, n: int) -> bool:
    """Phi and psi map H^6(;Z/4) to H^10(;Z/2); either side trivial forces zero."""
    if n != 10:
        return True
    return groups["H^6(Z/4)"].is_trivial or groups["H^10(Z/2)"].is_trivial


# ----------------------------------------------------------------------------
# assembly shared by all builders


def _r_max(groups: dict) -> int:
    exps = [g.torsion[-1] for key in ("H^7(Z)", "H^8(Z)") if (g := groups.get(key)) is not None and g.torsion]
    if not exps:
        return 0
    e = 1
    for x in exps:
        e = e * x // _gcd(e, x)
    return min(factorint(e).get(2, 0), 8)


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def _bockstein_entries(C: ChainComplex, deg: int, r_max: int) -> list[dict]:
    if deg > C.top or r_max == 0:
        return [{"domain": [], "r": r, "values": []} for r in range(1, r_max + 1)]
    G2, B2 = cohomology(C, deg, 2)
    indet: list = []
    out = []
    for r in range(1, r_max + 1):
        _, Br = cohomology(C, deg, 2 ** r)
        red = [class_coordinates(C, reduce_class(b, 2)) for b in Br]
        dom = f2_rref(red) if G2.ngens else []
        vals = []
        for v in dom:
            cls = None
            for c, b in zip(v, B2):
                if c:
                    cls = b if cls is None else cls + b
            if deg + 1 > C.top:
                vals.append(())
                continue
            val = class_coordinates(C, bockstein_higher(C, r, cls))
            vals.append(f2_reduce(val, f2_rref(indet)) if val else val)
        out.append({"domain": dom, "r": r, "values": vals})
        indet = indet + [v for v in vals if any(v)]
    return out


def _bockstein_data(C: ChainComplex, groups: dict) -> dict:
    r_max = _r_max(groups)
    h7 = _bockstein_entries(C, 7, r_max)
    h6 = _bockstein_entries(C, 6, r_max)
    image = f2_rref([v for e in h6 for v in e["values"] if any(v)])
    return {"h7": h7, "image_h7": image, "r_max": r_max}


def q_preimage_info(groups: dict, qmat: OperationMatrix, w: Sequence[int]) -> int:
    """Largest order among q-preimages of w in H^7(;Z/4): 4, 2, or 0 when w has none."""
    mods = groups["H^7(Z/4)"].moduli()
    Q = [[x & 1 for x in row] for row in qmat.matrix]
    ncols = len(mods)
    from .exact_algebra import solve_mod2
    if ncols == 0:
        return 0
    sol = solve_mod2(Q, list(w)) if Q else ([0] * ncols if not any(w) else None)
    if sol is None:
        return 0
    four = [j for j, m in enumerate(mods) if m == 4]
    if any(sol[j] for j in four):
        return 4
    # search the kernel of q mod 2 for a vector with an odd Z/4 coordinate
    from .exact_algebra import kernel_mod
    ker = kernel_mod(Q, 2, ncols) if Q else [tuple(int(i == j) for j in range(ncols)) for i in range(ncols)]
    if any(v[j] for v in ker for j in four):
        return 4
    return 2 if any(sol) else 0


def enumerate_f2(d: int):
    if d > MAX_ENUM_DIM:
        raise ProfileError(f"H^7(;Z/2) has dimension {d}; enumeration capped at {MAX_ENUM_DIM}")
    return itertools.product((0, 1), repeat=d)


def sq2_witnesses(p_groups: dict, ops: dict) -> list[tuple]:
    """Nonzero w in H^7(;Z/2) with Sq^2 w != 0, in lexicographic order."""
    d = p_groups["H^7(Z/2)"].ngens
    M = ops["Sq2:7"]
    return [w for w in enumerate_f2(d) if any(w) and any(M.apply(w))]


def _splitting(groups: dict, ops: dict) -> dict:
    W = sq2_witnesses(groups, ops)
    if not W:
        return {"A": None, "preimage_max_order": None, "witness": None}
    best = None
    for w in W:
        o = q_preimage_info(groups, ops["q:7"], w)
        if o:
            best = (w, o)
            break
    if best is None:
        best = (W[0], 0)
    w, o = best
    return {"A": 4 if o == 4 else 2, "preimage_max_order": o, "witness": w}


def _secondary(groups: dict, ops: dict, n: int, assertions: dict, known: dict | None) -> dict:
    forced = _secondary_forced(groups, ops, n)
    out = {}
    for key in ("phi", "psi"):
        asserted = assertions.get(key)
        if forced:
            if asserted == "nonzero":
                raise HypothesisError(f"{key} asserted nonzero but H^6(;Z/4) or H^10(;Z/2) vanishes")
            out[key] = SecondaryOpStatus("Zero", "ForcedByVanishing")
        elif asserted in ("zero", "nonzero"):
            out[key] = SecondaryOpStatus("Zero" if asserted == "zero" else "Nonzero", "UserAsserted")
        elif known and key in known:
            out[key] = SecondaryOpStatus(known[key], "KnownSpace")
        else:
            out[key] = SecondaryOpStatus("Unknown", None)
    return out


ASSERTION_VALUES = {
    "phi": ("zero", "nonzero"),
    "psi": ("zero", "nonzero"),
    "psi_shape": ("eta2", "iota_eta2"),
    "pi1": ("trivial",),
}


def parse_assertions(items: Sequence[str] | dict | None) -> dict:
    if not items:
        return {}
    if isinstance(items, dict):
        pairs = list(items.items())
    else:
        pairs = []
        for it in items:
            if "=" not in it:
                raise ProfileError(f"assertion {it!r} is not key=value")
            k, v = it.split("=", 1)
            pairs.append((k.strip(), v.strip()))
    out = {}
    for k, v in pairs:
        if k not in ASSERTION_VALUES or v not in ASSERTION_VALUES[k]:
            raise ProfileError(f"unknown assertion {k}={v}")
        out[k] = v
    return dict(sorted(out.items()))


def apply_assertions(p: CohomProfile, assertions: dict) -> CohomProfile:
    """Profile with extra assertions merged into flags and secondary statuses."""
    merged = dict(sorted({**p.assertions, **assertions}.items()))
    flags = dict(p.flags)
    if merged.get("pi1") == "trivial":
        if not flags["h1_zero"]:
            raise HypothesisError("pi1 asserted trivial but H_1 is nonzero")
        flags["simply_connected_asserted"] = True
    sec = dict(p.secondary)
    for k in ("phi", "psi"):
        if k in merged:
            cur = sec[k]
            want = "Zero" if merged[k] == "zero" else "Nonzero"
            if cur.provenance == "ForcedByVanishing" and cur.value != want:
                raise HypothesisError(f"{k} is forced to vanish")
            if cur.provenance in (None, "UserAsserted"):
                sec[k] = SecondaryOpStatus(want, "UserAsserted")
    q = replace(p, flags=flags, secondary=sec, assertions=merged)
    validate_profile(q)
    return q


def _assemble(name: str, n: int, C: ChainComplex, flags: dict, sq_provider, assertions: dict,
              known_space: str | None = None,
              known_secondary: dict | None = None, caveats=()) -> CohomProfile:
    groups = {}
    for key in group_keys(n):
        deg, m = _parse_group_key(key)
        groups[key] = cohomology_group(C, deg, m) if deg <= C.top else AbelianGroup.trivial()
    ops = {}
    for key, (opname, src, tgt) in op_specs(n).items():
        if opname == "Sq1":
            ops[key] = sq_provider(1, src[0])
        elif opname == "Sq2":
            ops[key] = sq_provider(2, src[0])
        elif opname == "d2":
            ops[key] = d2_matrix(C, src[0])
        elif opname == "Sq2_d2":
            first, second = d2_matrix(C, src[0]), sq_provider(2, src[0] + 1)
            if first.matrix:
                ops[key] = compose(second, first, "Sq2_d2")
            else:
                # empty middle group: shape comes from the outer groups
                ns = _group_for(groups, n, *src).ngens
                nt = _group_for(groups, n, *tgt).ngens
                ops[key] = OperationMatrix("Sq2_d2", src, tgt, tuple((0,) * ns for _ in range(nt)))
        else:
            ops[key] = reduction_matrix(C, 7)
    flags = dict(flags)
    if assertions.get("pi1") == "trivial":
        if not flags["h1_zero"]:
            raise HypothesisError("pi1 asserted trivial but H_1 is nonzero")
        flags["simply_connected_asserted"] = True
    p = CohomProfile(
        name=name,
        n=n,
        flags=dict(sorted(flags.items())),
        groups=groups,
        ops=ops,
        bockstein=_bockstein_data(C, groups),
        secondary=_secondary(groups, ops, n, assertions, known_secondary),
        splitting=_splitting(groups, ops),
        assertions=dict(assertions),
        caveats=tuple(caveats),
        known_space=known_space,
        model=C,
    )
    validate_profile(p)
    return p


# ----------------------------------------------------------------------------
# builders


def extract_profile(K: SimplicialComplex, assertions=None, name: str | None = None) -> CohomProfile:
    """Profile of a triangulated closed manifold, computed by the engine."""
    assertions = parse_assertions(assertions)
    n = K.dim
    if not 7 <= n <= 10:
        raise ProfileError(f"dimension {n} outside 7..10")
    top = top_structure(K)
    sw = wu_and_sw(K)
    spin = top.orientable and sw.is_spin(K)
    flags = {"h1_zero": top.h1_zero, "orientable": top.orientable,
             "simply_connected_asserted": top.h1_zero and trivial_pi1_certificate(K), "spin": spin}
    return _assemble(name or K.name or "complex", n, K.chains, flags,
                     lambda k, d: sq_matrix(K, k, d), assertions)


def _cellular(ranks: Sequence[int], bd: dict[int, int], name: str) -> ChainComplex:
    mats = {k: [[v]] for k, v in bd.items() if ranks[k] and ranks[k - 1]}
    return chain_complex_from_matrices(mats, ranks, name=name)


def _closed_form_sq(C: ChainComplex, rule, name_deg):
    """OperationMatrix from a rule (k, deg) -> 0/1 on one-generator mod-2 groups."""
    def provider(k, deg):
        src = cohomology_group(C, deg, 2) if 0 <= deg <= C.top else AbelianGroup.trivial()
        tgt = cohomology_group(C, deg + k, 2) if 0 <= deg + k <= C.top else AbelianGroup.trivial()
        rows = tuple(tuple(rule(k, deg) % 2 for _ in range(src.ngens)) for _ in range(tgt.ngens))
        return OperationMatrix(f"Sq{k}", (deg, 2), (deg + k, 2), rows)
    return provider


def profile_sphere(n: int) -> CohomProfile:
    if not 7 <= n <= 10:
        raise ProfileError("sphere profiles cover 7 <= n <= 10")
    ranks = [1] + [0] * (n - 1) + [1]
    C = _cellular(ranks, {}, f"S^{n}")
    flags = {"h1_zero": True, "orientable": True, "simply_connected_asserted": True, "spin": True}
    return _assemble(f"S^{n}", n, C, flags, _closed_form_sq(C, lambda k, d: 0, None), {},
                     known_space=f"S^{n}")


def rp_model(n: int) -> ChainComplex:
    """Cellular chains of RP^n: one cell per degree, d_k = 2 for even k, 0 for odd k."""
    return _cellular([1] * (n + 1), {k: (2 if k % 2 == 0 else 0) for k in range(1, n + 1)}, f"RP^{n}")


def lens_model(m: int, n: int = 9) -> ChainComplex:
    """Cellular chains of L^n(m), n odd: d_k = m for even k, 0 for odd k."""
    return _cellular([1] * (n + 1), {k: (m if k % 2 == 0 else 0) for k in range(1, n + 1)}, f"L^{n}({m})")


def profile_rp(n: int, assertions=None) -> CohomProfile:
    """RP^8, RP^9, RP^10 from the cellular model and Sq^i x^j = C(j, i) x^(i+j)."""
    if n not in (8, 9, 10):
        raise ProfileError("projective profiles cover n = 8, 9, 10")
    assertions = parse_assertions(assertions)
    C = rp_model(n)
    w1 = (n + 1) % 2
    w2 = binomial(n + 1, 2) % 2
    flags = {"h1_zero": False, "orientable": n % 2 == 1, "simply_connected_asserted": False,
             "spin": w1 == 0 and w2 == 0}
    if assertions.get("pi1"):
        raise HypothesisError("RP^n has fundamental group Z/2")
    return _assemble(f"RP^{n}", n, C, flags, _closed_form_sq(C, lambda k, d: binomial(d, k), None), assertions,
                     known_space=f"RP^{n}")


def lens_sq(m: int):
    """Sq^k on H^d(L(m);Z/2) in the basis x y^i (d odd), y^i (d even), m even."""
    def rule(k, d):
        if m % 2:
            return 0
        i = d // 2
        if k == 1:
            return 1 if (d % 2 == 1 and (m // 2) % 2 == 1) else 0
        if k == 2:
            return i % 2
        return 0
    return rule


def profile_sphere_product(i: int, j: int, assertions=None) -> CohomProfile:
    """S^i x S^j from its minimal cell structure; all Steenrod squares vanish.

    Secondary operations are left Unknown unless forced or asserted.
    """
    n = i + j
    if not 7 <= n <= 10 or min(i, j) < 1:
        raise ProfileError("sphere products need i, j >= 1 and 7 <= i + j <= 10")
    ranks = [0] * (n + 1)
    for d in (0, i, j, n):
        ranks[d] += 1
    C = _cellular(ranks, {}, f"S^{i}xS^{j}")
    h1 = min(i, j) > 1
    flags = {"h1_zero": h1, "orientable": True, "simply_connected_asserted": h1, "spin": True}
    return _assemble(f"S^{i}xS^{j}", n, C, flags, _closed_form_sq(C, lambda k, d: 0, None),
                     parse_assertions(assertions), known_space=f"S^{i}xS^{j}")


def profile_lens9(m: int) -> CohomProfile:
    """L^9(m); for m = 2 this is RP^9 and the profiles agree field by field."""
    if m < 2:
        raise ProfileError("lens profiles need m >= 2")
    if m == 2:
        return profile_rp(9)
    C = lens_model(m, 9)
    flags = {"h1_zero": False, "orientable": True, "simply_connected_asserted": False, "spin": m % 2 == 1}
    return _assemble(f"L^9({m})", 9, C, flags, _closed_form_sq(C, lens_sq(m), None), {},
                     known_space=f"L^9({m})")


# ----------------------------------------------------------------------------
# connected sums


def _sum_order(ga: AbelianGroup, gb: AbelianGroup) -> list[int]:
    """Position of each concatenated generator in the canonical basis of ga + gb.

    Only valid for 2-groups, where the canonical basis is the concatenation
    stably sorted by order with free generators first.
    """
    mods = list(ga.moduli()) + list(gb.moduli())
    for d in mods:
        if d and d & (d - 1):
            raise ProfileError("block sums are only supported for 2-groups")
    order = sorted(range(len(mods)), key=lambda i: (mods[i] != 0, mods[i]))
    pos = [0] * len(mods)
    for new, old in enumerate(order):
        pos[old] = new
    return pos


def _combine_secondary(p: CohomProfile, q: CohomProfile, forced: bool) -> dict:
    out = {}
    for key in ("phi", "psi"):
        a, b = p.secondary[key], q.secondary[key]
        if forced:
            out[key] = SecondaryOpStatus("Zero", "ForcedByVanishing")
        elif "Nonzero" in (a.value, b.value):
            out[key] = SecondaryOpStatus("Nonzero", a.provenance if a.value == "Nonzero" else b.provenance)
        elif a.value == "Zero" and b.value == "Zero":
            provs = {a.provenance, b.provenance}
            out[key] = SecondaryOpStatus("Zero", "UserAsserted" if "UserAsserted" in provs else "KnownSpace")
        else:
            out[key] = SecondaryOpStatus("Unknown", None)
    return out


def _sum_flags(p: CohomProfile, q: CohomProfile) -> dict:
    return dict(sorted({k: p.flags[k] and q.flags[k] for k in p.flags}.items()))


def profile_connected_sum(p: CohomProfile, q: CohomProfile) -> CohomProfile:
    """M # N. Block sums below the top degree when a summand is orientable.

    With both summands non-orientable the boundary sphere of each punctured
    summand is twice a primitive class, so H_{n-1} gains a free summand and the
    block rule fails in degree n-1. That case is computed on a chain model of
    the sum and needs both summands to carry one.
    """
    if p.n != q.n:
        raise ProfileError("connected sum needs equal dimensions")
    if not p.flags["orientable"] and not q.flags["orientable"]:
        return _nonorientable_sum(p, q)
    n = p.n
    top_src = p if not p.flags["orientable"] else q
    groups = {}
    for key in group_keys(n):
        deg, _ = _parse_group_key(key)
        groups[key] = top_src.groups[key] if deg == n else p.groups[key] + q.groups[key]
    ops = {}
    for key, (_, (sd, sm), (td, tm)) in op_specs(n).items():
        A, B = p.ops[key].matrix, q.ops[key].matrix
        ga_s, gb_s = _group_for(p.groups, n, sd, sm), _group_for(q.groups, n, sd, sm)
        ga_t, gb_t = _group_for(p.groups, n, td, tm), _group_for(q.groups, n, td, tm)
        ns = _group_for(groups, n, sd, sm).ngens
        nt = _group_for(groups, n, td, tm).ngens
        M = [[0] * ns for _ in range(nt)]
        if td > n:
            pass
        elif sd == n:
            M = [list(r) for r in top_src.ops[key].matrix]
        elif td == n:
            # collapse maps M # N -> M, N carry the top class to the top class
            pos = _sum_order(ga_s, gb_s)
            for i in range(nt):
                row = (list(A[i]) if A else [0] * ga_s.ngens) + (list(B[i]) if B else [0] * gb_s.ngens)
                for j, v in enumerate(row):
                    M[i][pos[j]] = v % tm
        else:
            ps, pt = _sum_order(ga_s, gb_s), _sum_order(ga_t, gb_t)
            for i, row in enumerate(A):
                for j, v in enumerate(row):
                    M[pt[i]][ps[j]] = v
            for i, row in enumerate(B):
                for j, v in enumerate(row):
                    M[pt[ga_t.ngens + i]][ps[ga_s.ngens + j]] = v
        ops[key] = OperationMatrix(p.ops[key].name, (sd, sm), (td, tm), tuple(tuple(r) for r in M))
    r = CohomProfile(
        name=f"{p.name}#{q.name}",
        n=n,
        flags=_sum_flags(p, q),
        groups=groups,
        ops=ops,
        bockstein=_sum_bockstein(p, q, groups),
        secondary=_combine_secondary(p, q, _secondary_forced(groups, ops, n)),
        splitting=_splitting(groups, ops),
        assertions=dict(sorted({**p.assertions, **q.assertions}.items())),
        caveats=tuple(sorted(set(p.caveats) | set(q.caveats))),
    )
    validate_profile(r)
    return r


def _embed(v, pos, offset, size):
    out = [0] * size
    for j, x in enumerate(v):
        out[pos[offset + j]] = x
    return tuple(out)


def _lin_comb(coeffs, vecs, size):
    acc = [0] * size
    for c, v in zip(coeffs, vecs):
        if c and v:
            acc = [(x + y) % 2 for x, y in zip(acc, v)]
    return acc


def _entries_upto(p: CohomProfile, r_max: int) -> list[dict]:
    """beta data of p extended past its own r_max.

    Above the 2-torsion exponent a class with vanishing beta_s for all lower s
    lifts integrally, so beta_r is defined on that kernel and is zero there.
    """
    entries = list(p.bockstein["h7"])
    d = p.groups["H^7(Z/2)"].ngens
    nt = _group_for(p.groups, p.n, 8, 2).ngens
    while len(entries) < r_max:
        r = len(entries) + 1
        if not entries:
            dom = [tuple(int(i == j) for j in range(d)) for i in range(d)]
        else:
            last = entries[-1]
            vals = last["values"]
            ker = _f2_kernel([list(v) for v in vals], len(vals)) if nt else [
                tuple(int(i == j) for j in range(len(vals))) for i in range(len(vals))]
            dom = f2_rref([_lin_comb(c, last["domain"], d) for c in ker])
        entries.append({"domain": dom, "r": r, "values": [(0,) * nt for _ in dom]})
    return entries


def _f2_kernel(cols: list[list[int]], ncols: int) -> list[tuple[int, ...]]:
    """Kernel of the map F_2^ncols -> F_2^t sending e_j to cols[j]."""
    from .exact_algebra import kernel_mod
    if ncols == 0:
        return []
    t = len(cols[0]) if cols else 0
    if t == 0:
        return [tuple(int(i == j) for j in range(ncols)) for i in range(ncols)]
    A = [[cols[j][i] for j in range(ncols)] for i in range(t)]
    return f2_rref(kernel_mod(A, 2, ncols))


def _sum_bockstein(p: CohomProfile, q: CohomProfile, groups: dict) -> dict:
    n = p.n
    r_max = _r_max(groups)
    g7 = groups["H^7(Z/2)"]
    pos7 = _sum_order(p.groups["H^7(Z/2)"], q.groups["H^7(Z/2)"])
    a7 = p.groups["H^7(Z/2)"].ngens
    tgt_a, tgt_b = _group_for(p.groups, n, 8, 2), _group_for(q.groups, n, 8, 2)
    tgt = _group_for(groups, n, 8, 2)
    pos8 = None if n == 8 else _sum_order(tgt_a, tgt_b)
    ep, eq = _entries_upto(p, r_max), _entries_upto(q, r_max)
    h7 = []
    indet: list = []
    for r in range(1, r_max + 1):
        dom, vals = [], []
        for e, off_s, off_t in ((ep[r - 1], 0, 0), (eq[r - 1], a7, tgt_a.ngens)):
            for v, val in zip(e["domain"], e["values"]):
                dom.append(_embed(v, pos7, off_s, g7.ngens))
                if not tgt.ngens:
                    vals.append(())
                elif n == 8:
                    vals.append(tuple(val))  # H^8 is the shared top class
                else:
                    vals.append(_embed(val, pos8, off_t, tgt.ngens))
        dom_r = f2_rref(dom)
        new_vals = []
        for v in dom_r:
            acc = _lin_comb(f2_coeffs(v, dom), vals, tgt.ngens)
            new_vals.append(f2_reduce(acc, f2_rref(indet)) if tgt.ngens else ())
        h7.append({"domain": dom_r, "r": r, "values": new_vals})
        indet = indet + [v for v in new_vals if any(v)]
    images = [_embed(v, pos7, 0, g7.ngens) for v in p.bockstein["image_h7"]]
    images += [_embed(v, pos7, a7, g7.ngens) for v in q.bockstein["image_h7"]]
    return {"h7": h7, "image_h7": f2_rref(images), "r_max": r_max}


def sum_model(A: ChainComplex, B: ChainComplex) -> ChainComplex:
    """Chain model of M # N from chain models of M and N.

    Drops one top cell e from each, joins base points by a 1-cell, and adds a
    top cell bounding (d e_A) - (d e_B): the homotopy pushout along the minimal
    model of the boundary sphere.
    """
    import numpy as np
    import scipy.sparse as sp
    n = A.top
    if B.top != n:
        raise ProfileError("chain models of different dimensions")
    ranks = []
    for k in range(n + 1):
        r = A.ranks[k] + B.ranks[k]
        if k == 1:
            r += 1
        if k == n:
            r -= 1
        ranks.append(r)
    bds = {}
    for k in range(1, n + 1):
        blocks = [A.bd[k], B.bd[k]]
        if k == n:
            sA = A.bd[n][:, A.ranks[n] - 1]
            sB = B.bd[n][:, B.ranks[n] - 1]
            top = sp.vstack([sA, -sB])
            M = sp.hstack([sp.block_diag([A.bd[n][:, :A.ranks[n] - 1], B.bd[n][:, :B.ranks[n] - 1]]), top])
        else:
            M = sp.block_diag(blocks)
        if k == 1:
            g = np.zeros((ranks[0], 1), dtype=np.int64)
            g[0, 0], g[A.ranks[0], 0] = 1, -1
            M = sp.hstack([M, sp.csc_matrix(g)])
        bds[k] = sp.csc_matrix(M, dtype=np.int64)
    return ChainComplex(ranks, bds, name=f"{A.name}#{B.name}")


def _nonorientable_sum(p: CohomProfile, q: CohomProfile) -> CohomProfile:
    if p.model is None or q.model is None:
        raise HypothesisError("sum of two non-orientable profiles needs chain models for both summands")
    n = p.n
    C = sum_model(p.model, q.model)
    A, B = p.model, q.model

    def block_class_coords(deg: int) -> list[tuple]:
        """Coordinates in the sum model of the summands' mod-2 basis classes (degree < n)."""
        out = []
        for src, off in ((A, 0), (B, A.ranks[deg])):
            _, basis = cohomology(src, deg, 2)
            for b in basis:
                x = [0] * C.ranks[deg]
                x[off:off + len(b.cochain)] = list(b.cochain)
                out.append(class_coordinates(C, CohomClass(deg, 2, tuple(x), C.uid)))
        return out

    def provider(k: int, deg: int) -> OperationMatrix:
        src = cohomology_group(C, deg, 2) if 0 <= deg <= n else AbelianGroup.trivial()
        tgt = cohomology_group(C, deg + k, 2) if 0 <= deg + k <= n else AbelianGroup.trivial()
        ns, nt = src.ngens, tgt.ngens
        rows = [[0] * ns for _ in range(nt)]
        if ns and nt and deg < n:
            P = block_class_coords(deg)  # row i: image of block basis class i
            Pinv = _f2_inverse([list(r) for r in zip(*P)])  # columns are images
            key = f"Sq{k}:{deg}"
            S = _block_sq(p, q, k, deg, key)
            if deg + k < n:
                Q = [list(r) for r in zip(*block_class_coords(deg + k))]
                S = _f2_mul(Q, S)
            rows = _f2_mul(S, Pinv)
        return OperationMatrix(f"Sq{k}", (deg, 2), (deg + k, 2), tuple(tuple(r) for r in rows))

    flags = _sum_flags(p, q)
    r = _assemble(f"{p.name}#{q.name}", n, C, flags, provider, {}, caveats=tuple(sorted(set(p.caveats) | set(q.caveats))))
    secondary = _combine_secondary(p, q, _secondary_forced(r.groups, r.ops, n))
    return replace(r, secondary=secondary, assertions=dict(sorted({**p.assertions, **q.assertions}.items())))


def _block_sq(p: CohomProfile, q: CohomProfile, k: int, deg: int, key: str) -> list[list[int]]:
    """Sq^k from H^deg of the summands, in the concatenated (unsorted) block basis."""
    n = p.n
    mats = []
    for s in (p, q):
        mats.append([list(r) for r in s.ops[key].matrix])
    a_s = _group_for(p.groups, n, deg, 2).ngens
    b_s = _group_for(q.groups, n, deg, 2).ngens
    if deg + k == n:
        return [(mats[0][0] if mats[0] else [0] * a_s) + (mats[1][0] if mats[1] else [0] * b_s)]
    a_t, b_t = len(mats[0]), len(mats[1])
    out = [[0] * (a_s + b_s) for _ in range(a_t + b_t)]
    for i, row in enumerate(mats[0]):
        out[i][:a_s] = row
    for i, row in enumerate(mats[1]):
        out[a_t + i][a_s:] = row
    return out


def _f2_mul(X, Y):
    inner = len(Y)
    ncols = len(Y[0]) if Y else 0
    return [[sum(X[i][t] * Y[t][j] for t in range(inner)) % 2 for j in range(ncols)] for i in range(len(X))]


def _f2_inverse(M):
    from .exact_algebra import solve_mod2
    d = len(M)
    cols = [solve_mod2(M, [int(i == j) for i in range(d)]) for j in range(d)]
    if any(c is None for c in cols):
        raise ProfileError("block classes do not form a basis of the sum")
    return [[cols[j][i] for j in range(d)] for i in range(d)]


# ----------------------------------------------------------------------------
# case detection


@dataclass(frozen=True)
class CaseResult:
    case: str
    sub_shape: str | None
    evidence: dict

    def to_json(self):
        return {"case": self.case, "evidence": _jsonable(self.evidence), "sub_shape": self.sub_shape}


def beta_value(p: CohomProfile, r: int, w: Sequence[int]):
    """beta_r(w) modulo lower-order indeterminacy; None when beta_r is undefined on w."""
    entries = {e["r"]: e for e in p.bockstein["h7"]}
    e = entries.get(r)
    nt = _group_for(p.groups, p.n, 8, 2).ngens
    if e is None:
        return None
    c = f2_coeffs(w, e["domain"])
    if c is None:
        return None
    acc = [0] * nt
    for ci, val in zip(c, e["values"]):
        if ci and val:
            acc = [(x + y) % 2 for x, y in zip(acc, val)]
    indet = [v for s in range(1, r) for v in entries[s]["values"] if any(v)]
    return f2_reduce(acc, f2_rref(indet)) if nt else ()


def nonzero_betas(p: CohomProfile, w) -> list[tuple[int, tuple]]:
    out = []
    for r in range(1, p.bockstein["r_max"] + 1):
        v = beta_value(p, r, w)
        if v is not None and any(v):
            out.append((r, v))
    return out


def in_beta_image(p: CohomProfile, w) -> bool:
    img = p.bockstein["image_h7"]
    return bool(img) and not any(f2_reduce(w, img))


def nine_case(p: CohomProfile) -> CaseResult:
    if p.n != 9:
        raise ProfileError("nine_case needs n = 9")
    if p.flags["spin"]:
        return CaseResult("Spin", None, {"spin": True})
    sqd = p.ops["Sq2_d2:6"]
    d6 = p.group("H^6(Z/4)")
    for u in _enumerate_group(d6):
        if any(sqd.apply(u)):
            return CaseResult("NonSpinSqd2Nonzero", None, {"u": tuple(u), "value": sqd.apply(u)})
    W = sq2_witnesses(p.groups, p.ops)
    if not W:
        raise UnclassifiedNineManifold("non-spin but Sq^2: H^7 -> H^9 vanishes (non-orientable input?)")
    for w in W:
        if in_beta_image(p, w):
            raise UnclassifiedNineManifold(f"class {w} with Sq^2 w != 0 lies in the image of a Bockstein")
    carriers = [(w, nonzero_betas(p, w)) for w in W]
    hit = [(w, b) for w, b in carriers if b]
    if not hit:
        return CaseResult("NonSpinEta", None, {"W": [tuple(w) for w in W], "betas": "all zero or undefined"})
    w, b = hit[0]
    r, val = b[0]
    return CaseResult("NonSpinIotaEta", None, {"w": tuple(w), "r": r, "beta": tuple(val)})


def _enumerate_group(G: AbelianGroup):
    if G.free_rank:
        raise ProfileError("cannot enumerate an infinite group")
    if (G.order or 1) > 2 ** MAX_ENUM_DIM:
        raise ProfileError("group too large to enumerate")
    return itertools.product(*[range(d) for d in G.torsion])


def carrier_types(p: CohomProfile) -> dict:
    """Which attaching targets H^7(;Z/2) can carry: free S^7 summands or 2-primary Moore summands."""
    d = p.group("H^7(Z/2)").ngens
    free = torsion = None
    for w in enumerate_f2(d):
        if not any(w):
            continue
        b = nonzero_betas(p, w)
        if b and torsion is None:
            torsion = (tuple(w), b[0][0])
        if not b and not in_beta_image(p, w) and free is None:
            free = tuple(w)
    return {"free": free, "torsion": torsion}


def ten_case(p: CohomProfile) -> CaseResult:
    if p.n != 10:
        raise ProfileError("ten_case needs n = 10")
    ev = {"h1_zero": p.flags["h1_zero"]}
    if not p.flags["spin"]:
        return CaseResult("NonSpin", None, ev)
    phi, psi = p.secondary["phi"], p.secondary["psi"]
    ev.update(phi=phi.to_json(), psi=psi.to_json())
    if phi.value == "Unknown":
        raise NeedsSecondaryOpAssertion(["phi"] + (["psi"] if psi.value == "Unknown" else []))
    if phi.value == "Nonzero":
        return CaseResult("SpinPhiNonzero", None, ev)
    if psi.value == "Unknown":
        raise NeedsSecondaryOpAssertion(["psi"])
    if psi.value == "Zero":
        return CaseResult("SpinPhi0Psi0", None, ev)
    shape = p.assertions.get("psi_shape")
    kinds = carrier_types(p)
    ev["carriers"] = kinds
    possible = []
    if kinds["free"] is not None:
        possible.append("EtaSq")
    if kinds["torsion"] is not None:
        possible.append("IotaEtaSq")
    if shape:
        want = "EtaSq" if shape == "eta2" else "IotaEtaSq"
        if want not in possible:
            raise HypothesisError(f"psi_shape={shape} asserted but H^7 has no matching carrier")
        ev["psi_shape"] = "UserAsserted"
        return CaseResult("SpinPhi0PsiNonzero", want, ev)
    if not possible:
        raise HypothesisError("psi nonzero but H^7(;Z/2) has no carrier for eta^2")
    if len(possible) == 2:
        raise NeedsSecondaryOpAssertion(["psi_shape"])
    return CaseResult("SpinPhi0PsiNonzero", possible[0], ev)


def verify_case(p: CohomProfile, res: CaseResult) -> bool:
    """Re-check a case's evidence against the stored matrices."""
    ev = res.evidence
    if res.case == "Spin":
        return p.flags["spin"]
    if res.case == "NonSpinSqd2Nonzero":
        return any(p.ops["Sq2_d2:6"].apply(ev["u"]))
    if res.case == "NonSpinEta":
        return all(any(p.ops["Sq2:7"].apply(w)) and not nonzero_betas(p, w) for w in ev["W"])
    if res.case == "NonSpinIotaEta":
        v = beta_value(p, ev["r"], ev["w"])
        return any(p.ops["Sq2:7"].apply(ev["w"])) and v is not None and tuple(v) == tuple(ev["beta"])
    if res.case in ("NonSpin", "SpinPhiNonzero", "SpinPhi0Psi0", "SpinPhi0PsiNonzero"):
        return ten_case(p) == res
    return False
