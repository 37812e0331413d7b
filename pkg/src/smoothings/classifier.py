"""Concordance structure sets and inertia groups from a CohomProfile.

Every claim carries citation ids from `CITATIONS`. When a branch depends on a
secondary operation whose status is Unknown, the result lists one outcome per
admissible assumption instead of picking one.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .exact_algebra import AbelianGroup, subgroup_structure, kernel_mod
from .profile import (
    CohomProfile,
    HypothesisError,
    NeedsSecondaryOpAssertion,
    ProfileError,
    carrier_types,
    f2_rref,
    nine_case,
    q_preimage_info,
    ten_case,
)

RESULT_VERSION = "result/1"

# neutral ids; the statements are paraphrased as formulas, never quoted
CITATIONS = {
    "theta-split": "0 -> bP_{n+1} -> Theta_n -> coker J_n -> 0 splits; coker J: n=8 Z/2<eps>, n=9 Z/2<mu>+Z/2<eta eps>, n=10 Z/2<eta mu>+Z/3<beta1>",
    "concordance-dim7": "C(M^7) = H^7(M; Theta_7)",
    "concordance-dim8": "C(M^8) = H^7(M;Z/28) + H^8(M;Z/2)",
    "concordance-dim9-spin": "spin M^9: C = H^7(Z/28) + H^8(Z/2) + H^9(Z/2)^3",
    "concordance-dim9-sqd2": "non-spin M^9, Sq^2 d_2 != 0 on H^6(Z/4): C = H^7(Z/28) + H^8(Z/2) + H^9(Z/2)",
    "concordance-dim9-ion": "non-spin M^9, Sq^2 d_2 = 0: C = H^7(Z/7) + H^8(Z/2) + H^9(Z/2) + K~ + A~",
    "concordance-dim10-spin-phi0": "spin M^10, H_1 = 0, Phi = 0: C = H^7(Z/7) + H^8(Z/2) + H^9(Z/2) + H^10(Z/3) + [M, S^7 E]",
    "concordance-dim10-psi0": "psi = 0: [M, S^7 E] = H^10(Z/2) + H^7(Z/4)",
    "concordance-dim10-psi1": "psi != 0: [M, S^7 E] = K~ + A~",
    "concordance-dim10-phi1": "spin M^10, H_1 = 0, Phi != 0: C = H^7(Z/28) + H^8(Z/2) + H^9(Z/2) + H^10(Z/3)",
    "concordance-dim10-nonspin": "non-spin M^10, H_1 = 0: C = H^7(Z/7) + H^10(Z/3) + ker Sq^2|H^8 + ker Sq^2 d_2|H^7(Z/4)",
    "concordance-inertia-dim8": "I_c(M^8) = 0",
    "concordance-inertia-dim9": "oriented M^9: spin -> 0; non-spin, Sq^2 d_2 = 0 -> <eta eps>; non-spin, Sq^2 d_2 != 0 -> <eta eps> + <mu>",
    "concordance-inertia-dim10": "simply connected M^10: spin, Phi = 0 -> 0; spin with Phi != 0, or non-spin -> <eta mu>",
    "homotopy-inertia-dim8": "I_h(M^8) = 0",
    "homotopy-inertia-dim9-spin": "oriented spin M^9: I_h meets Theta_9/bP_10 trivially",
    "homotopy-inertia-dim9-spin-sc": "simply connected spin M^9: I_h = 0",
    "homotopy-inertia-dim9-eta": "non-spin M^9, Sq^2 d_2 = 0, eta-attached top cell: I_h contains <eta eps> + <mu>",
    "homotopy-inertia-dim9-iota-eta": "non-spin M^9, Sq^2 d_2 = 0, Moore-attached top cell: I_h contains <eta eps>, not <mu>",
    "homotopy-inertia-dim9-sqd2": "non-spin M^9, Sq^2 d_2 != 0: I_h contains <eta eps> + <mu>",
    "homotopy-inertia-dim10": "simply connected M^10: spin, Phi = 0, trivial or Moore attaching map -> 0; eta^2 attaching map -> <eta mu>; Phi != 0 or non-spin -> <eta mu>",
    "homotopy-inertia-dim10-oriented-3": "oriented M^10: I_h meets the 3-part of Theta_10 trivially",
    "homotopy-inertia-dim10-nonoriented-3": "non-orientable M^10: I_h contains <beta1>",
    "homotopy-inertia-rp10": "I_h(RP^10) = <beta1> + <eta mu>",
    "inertia-rp8": "self-equivalences of RP^8 are homotopic to diffeomorphisms, so I(RP^8) = I_h(RP^8)",
    "inertia-rp10": "I(RP^10) = Theta_10",
    "inertia-lens9": "I(L^9(m)): m odd -> 0; m = 2 mod 4 -> <eta eps>; 4 | m -> <eta eps> + bP_10",
    "inertia-rp9-unique": "exactly one exotic Sigma in Theta_9 has RP^9 # Sigma diffeomorphic to RP^9",
    "theorem-c": "connected sums of L^9(m), RP^8, RP^10 with homotopy spheres",
}

THETA_GENERATORS = ("epsilon", "eta_epsilon", "mu", "bP", "eta_mu", "beta1")
VALID_GENERATORS = {8: ("epsilon",), 9: ("eta_epsilon", "mu", "bP"), 10: ("eta_mu", "beta1")}
_GEN_ORDERS = {"epsilon": 2, "eta_epsilon": 2, "mu": 2, "eta_mu": 2, "beta1": 3}
_BP = {7: 28, 8: 1, 9: 2, 10: 1}


def theta_constants(n: int) -> dict:
    if not 7 <= n <= 10:
        raise ValueError(f"Theta_n tabulated for 7 <= n <= 10, got {n}")
    bp = AbelianGroup.cyclic(_BP[n]) if _BP[n] > 1 else AbelianGroup.trivial()
    gens = [g for g in VALID_GENERATORS.get(n, ()) if g != "bP"]
    quotient = AbelianGroup.from_cyclic([_GEN_ORDERS[g] for g in gens])
    return {"theta": bp + quotient, "bP": bp, "quotient_gens": gens}


def generator_order(n: int, g: str) -> int:
    if g == "bP":
        return _BP[n]
    return _GEN_ORDERS[g]


@dataclass(frozen=True)
class SubgroupDescriptor:
    n: int
    generators: tuple = ()

    def __post_init__(self):
        gens = tuple(sorted(set(self.generators), key=THETA_GENERATORS.index))
        valid = VALID_GENERATORS.get(self.n, ())
        for g in gens:
            if g not in valid:
                raise ValueError(f"{g} is not a generator of Theta_{self.n} / its bP part")
        object.__setattr__(self, "generators", gens)

    @property
    def structure(self) -> AbelianGroup:
        return AbelianGroup.from_cyclic([generator_order(self.n, g) for g in self.generators])

    def __le__(self, other: "SubgroupDescriptor") -> bool:
        return self.n == other.n and set(self.generators) <= set(other.generators)

    def __str__(self):
        if not self.generators:
            return "0"
        parts = [f"bP_{self.n + 1}" if g == "bP" else f"Z/{generator_order(self.n, g)}<{g}>" for g in self.generators]
        return " + ".join(parts)

    def to_json(self):
        return {"generators": list(self.generators), "structure": str(self.structure), "text": str(self)}


@dataclass(frozen=True)
class InertiaBounds:
    lower: SubgroupDescriptor
    upper: SubgroupDescriptor
    exact: bool

    def __post_init__(self):
        if not self.lower <= self.upper:
            raise ValueError("lower bound exceeds upper bound")
        if self.exact and self.lower != self.upper:
            raise ValueError("exact bounds must coincide")

    @property
    def undetermined(self) -> tuple:
        """Generators of the upper bound whose membership no theorem pins."""
        return tuple(g for g in self.upper.generators if g not in self.lower.generators)

    def to_json(self):
        return {"exact": self.exact, "lower": self.lower.to_json(), "undetermined": list(self.undetermined),
                "upper": self.upper.to_json()}


@dataclass(frozen=True)
class AnnotatedGroup:
    """Direct sum with the cohomological source of each summand."""
    summands: tuple  # (source label, AbelianGroup)

    @property
    def group(self) -> AbelianGroup:
        g = AbelianGroup.trivial()
        for _, s in self.summands:
            g = g + s
        return g

    def to_json(self):
        return {"group": str(self.group), "summands": [[lab, str(g)] for lab, g in self.summands]}


@dataclass
class Trace:
    citations: list = field(default_factory=list)
    caveats: list = field(default_factory=list)

    def cite(self, tid: str):
        if tid not in CITATIONS:
            raise KeyError(f"unknown citation {tid}")
        if tid not in self.citations:
            self.citations.append(tid)

    def caveat(self, text: str):
        if text not in self.caveats:
            self.caveats.append(text)


def _sd(n, *gens) -> SubgroupDescriptor:
    return SubgroupDescriptor(n, tuple(gens))


# ----------------------------------------------------------------------------
# K~ and A~


def _split_a(p: CohomProfile, w, trace: Trace) -> tuple:
    """(A order, K~ group, A~ group) from the preimage-order rule at carrier w."""
    H4 = p.group("H^7(Z/4)")
    order = q_preimage_info(p.groups, p.ops["q:7"], w) if w is not None else 0
    a = 4 if order == 4 else 2
    trace.caveat(f"A = Z/{a} chosen by the q-preimage order rule at w = {tuple(w) if w is not None else None}")
    tors = list(H4.torsion)
    if a in tors:
        tors.remove(a)
        K = AbelianGroup.from_cyclic(tors)
    else:
        # shrink one summand t to t/a; every choice keeps |K~| = |H^7(;Z/4)| / a
        cands = []
        for t in sorted(set(tors)):
            rest = list(tors)
            rest.remove(t)
            g = AbelianGroup.from_cyclic(rest + ([t // a] if t // a > 1 else []))
            if t % a == 0 and g not in cands:
                cands.append(g)
        K = cands[0] if cands else AbelianGroup.trivial()
        trace.caveat(f"H^7(;Z/4) = {H4} has no Z/{a} summand; K~ candidates: "
                     + (", ".join(str(c) for c in cands) or "none") + f"; reporting {K}")
    return a, K, AbelianGroup.cyclic(2 * a)


def _kernel_f2(M) -> int:
    """dim ker of an F_2 matrix given as rows."""
    from .exact_algebra import matrix_rank_mod_p
    ncols = len(M[0]) if M else 0
    return ncols - (matrix_rank_mod_p([list(r) for r in M], 2) if M and ncols else 0)


def _kernel_z4(p: CohomProfile, key: str) -> AbelianGroup:
    """Kernel of an operation H^7(;Z/4) -> (Z/2)^t; it only sees the source mod 2."""
    G = p.group("H^7(Z/4)")
    mods = G.moduli()
    d = len(mods)
    if d == 0:
        return G
    M = [list(r) for r in p.ops[key].matrix]
    if not M:
        return G
    ker2 = kernel_mod(M, 2, d)
    gens = [list(v) for v in ker2] + [[2 * int(i == j) for j in range(d)] for i in range(d) if mods[i] == 4]
    return subgroup_structure(G, gens).structure if gens else AbelianGroup.trivial()


# ----------------------------------------------------------------------------
# concordance


def _h(p, key):
    return p.group(key)


def _concordance(p: CohomProfile, trace: Trace) -> AnnotatedGroup:
    n = p.n
    if n == 7:
        trace.cite("concordance-dim7")
        return AnnotatedGroup((("H^7(;Z/28)", _h(p, "H^7(Z/28)")),))
    if n == 8:
        trace.cite("concordance-dim8")
        return AnnotatedGroup((("H^7(;Z/28)", _h(p, "H^7(Z/28)")), ("H^8(;Z/2)", _h(p, "H^8(Z/2)"))))
    if n == 9:
        if not p.flags["orientable"]:
            raise HypothesisError("the 9-dimensional formulas need an oriented manifold")
        case = nine_case(p)
        h9 = _h(p, "H^9(Z/2)")
        if case.case == "Spin":
            trace.cite("concordance-dim9-spin")
            return AnnotatedGroup((("H^7(;Z/28)", _h(p, "H^7(Z/28)")), ("H^8(;Z/2)", _h(p, "H^8(Z/2)")),
                                   ("H^9(;Z/2+Z/2+Z/2)", h9 + h9 + h9)))
        if case.case == "NonSpinSqd2Nonzero":
            trace.cite("concordance-dim9-sqd2")
            return AnnotatedGroup((("H^7(;Z/28)", _h(p, "H^7(Z/28)")), ("H^8(;Z/2)", _h(p, "H^8(Z/2)")),
                                   ("H^9(;Z/2)", h9)))
        trace.cite("concordance-dim9-ion")
        a, K, At = _split_a(p, p.splitting["witness"], trace)
        return AnnotatedGroup((("H^7(;Z/7)", _h(p, "H^7(Z/7)")), ("H^8(;Z/2)", _h(p, "H^8(Z/2)")),
                               ("H^9(;Z/2)", h9), ("K~", K), (f"A~ (A = Z/{a})", At)))
    # n == 10
    if not p.flags["h1_zero"]:
        raise HypothesisError("the 10-dimensional formulas need H_1(M) = 0")
    case = ten_case(p)
    base7, h8, h9, h10_3 = _h(p, "H^7(Z/7)"), _h(p, "H^8(Z/2)"), _h(p, "H^9(Z/2)"), _h(p, "H^10(Z/3)")
    if case.case == "NonSpin":
        trace.cite("concordance-dim10-nonspin")
        k8 = AbelianGroup.from_cyclic([2] * _kernel_f2(p.ops["Sq2:8"].matrix if p.ops["Sq2:8"].matrix
                                                          else [[0] * h8.ngens]))
        if not p.ops["Sq2:8"].matrix:
            k8 = h8
        return AnnotatedGroup((("H^7(;Z/7)", base7), ("H^10(;Z/3)", h10_3),
                               ("ker Sq^2 on H^8(;Z/2)", k8),
                               ("ker Sq^2 d_2 on H^7(;Z/4)", _kernel_z4(p, "Sq2_d2:7"))))
    if case.case == "SpinPhiNonzero":
        trace.cite("concordance-dim10-phi1")
        return AnnotatedGroup((("H^7(;Z/28)", _h(p, "H^7(Z/28)")), ("H^8(;Z/2)", h8), ("H^9(;Z/2)", h9),
                               ("H^10(;Z/3)", h10_3)))
    trace.cite("concordance-dim10-spin-phi0")
    head = (("H^7(;Z/7)", base7), ("H^8(;Z/2)", h8), ("H^9(;Z/2)", h9), ("H^10(;Z/3)", h10_3))
    if case.case == "SpinPhi0Psi0":
        trace.cite("concordance-dim10-psi0")
        return AnnotatedGroup(head + (("H^10(;Z/2)", _h(p, "H^10(Z/2)")), ("H^7(;Z/4)", _h(p, "H^7(Z/4)"))))
    trace.cite("concordance-dim10-psi1")
    kinds = carrier_types(p)
    w = kinds["free"] if case.sub_shape == "EtaSq" else kinds["torsion"][0]
    a, K, At = _split_a(p, w, trace)
    return AnnotatedGroup(head + (("K~", K), (f"A~ (A = Z/{a})", At)))


def classify_concordance(p: CohomProfile) -> AnnotatedGroup:
    return _concordance(p, Trace())


# ----------------------------------------------------------------------------
# inertia


def _concordance_inertia(p: CohomProfile, trace: Trace) -> SubgroupDescriptor:
    n = p.n
    if n == 8:
        trace.cite("concordance-inertia-dim8")
        return _sd(8)
    if n == 9:
        if not p.flags["orientable"]:
            raise HypothesisError("the 9-dimensional I_c formula needs an oriented manifold")
        trace.cite("concordance-inertia-dim9")
        case = nine_case(p).case
        if case == "Spin":
            return _sd(9)
        if case == "NonSpinSqd2Nonzero":
            return _sd(9, "eta_epsilon", "mu")
        return _sd(9, "eta_epsilon")
    if n == 10:
        if not p.flags["simply_connected_asserted"]:
            raise HypothesisError("the 10-dimensional I_c formula needs a simply connected manifold (assert pi1=trivial)")
        trace.cite("concordance-inertia-dim10")
        if not p.flags["spin"]:
            return _sd(10, "eta_mu")
        phi = p.secondary["phi"].value
        if phi == "Unknown":
            raise NeedsSecondaryOpAssertion(["phi"])
        return _sd(10) if phi == "Zero" else _sd(10, "eta_mu")
    raise HypothesisError("I_c is only tabulated for n = 8, 9, 10")


def concordance_inertia(p: CohomProfile) -> SubgroupDescriptor:
    return _concordance_inertia(p, Trace())


def _full_theta(n):
    return _sd(n, *VALID_GENERATORS[n])


def _lens_order(known: str | None) -> int | None:
    if known == "RP^9":
        return 2
    if known and known.startswith("L^9("):
        return int(known[4:-1])
    return None


def _nine_bounds(p: CohomProfile, trace: Trace) -> InertiaBounds:
    if not p.flags["orientable"]:
        trace.caveat("no I_h theorem covers non-orientable 9-manifolds; bounds are trivial")
        return InertiaBounds(_sd(9), _full_theta(9), False)
    case = nine_case(p).case
    if case == "Spin":
        if p.flags["simply_connected_asserted"]:
            trace.cite("homotopy-inertia-dim9-spin-sc")
            return InertiaBounds(_sd(9), _sd(9), True)
        trace.cite("homotopy-inertia-dim9-spin")
        return InertiaBounds(_sd(9), _sd(9, "bP"), False)
    if case == "NonSpinSqd2Nonzero":
        trace.cite("homotopy-inertia-dim9-sqd2")
        return InertiaBounds(_sd(9, "eta_epsilon", "mu"), _full_theta(9), False)
    if case == "NonSpinEta":
        trace.cite("homotopy-inertia-dim9-eta")
        return InertiaBounds(_sd(9, "eta_epsilon", "mu"), _full_theta(9), False)
    trace.cite("homotopy-inertia-dim9-iota-eta")
    return InertiaBounds(_sd(9, "eta_epsilon"), _sd(9, "eta_epsilon", "bP"), False)


def _ten_bounds(p: CohomProfile, trace: Trace) -> InertiaBounds:
    if p.known_space == "RP^10":
        trace.cite("homotopy-inertia-rp10")
        I = _sd(10, "beta1", "eta_mu")
        return InertiaBounds(I, I, True)
    if not p.flags["simply_connected_asserted"]:
        trace.caveat("pi_1 not known to be trivial: only the 3-primary remarks apply")
        if p.flags["orientable"]:
            trace.cite("homotopy-inertia-dim10-oriented-3")
            return InertiaBounds(_sd(10), _sd(10, "eta_mu"), False)
        trace.cite("homotopy-inertia-dim10-nonoriented-3")
        return InertiaBounds(_sd(10, "beta1"), _full_theta(10), False)
    trace.cite("homotopy-inertia-dim10")
    case = ten_case(p)
    if case.case == "SpinPhi0Psi0" or case.sub_shape == "IotaEtaSq":
        I = _sd(10)
    else:
        # NonSpin, SpinPhiNonzero, or the eta^2-attached shape
        I = _sd(10, "eta_mu")
    return InertiaBounds(I, I, True)


def _homotopy_inertia(p: CohomProfile, trace: Trace) -> InertiaBounds:
    if p.n == 8:
        trace.cite("homotopy-inertia-dim8")
        return InertiaBounds(_sd(8), _sd(8), True)
    if p.n == 10:
        return _ten_bounds(p, trace)
    if p.n != 9:
        raise HypothesisError("I_h is only tabulated for n = 8, 9, 10")
    generic = _nine_bounds(p, trace)
    m = _lens_order(p.known_space)
    if m is None:
        return generic
    # lens rigidity: self-equivalences are homotopic to the identity, so I_h = I
    trace.cite("inertia-lens9")
    if m == 2:
        trace.cite("inertia-rp9-unique")
    I = lens_inertia(m)
    if not (generic.lower <= I <= generic.upper):
        raise AssertionError(f"I(L^9({m})) = {I} violates the general bounds")
    return InertiaBounds(I, I, True)


def homotopy_inertia(p: CohomProfile) -> InertiaBounds:
    return _homotopy_inertia(p, Trace())


def lens_inertia(m: int) -> SubgroupDescriptor:
    """Full inertia group of L^9(m); m = 1 is S^9."""
    if m < 1:
        raise ValueError("m must be positive")
    if m % 2 == 1:
        return _sd(9)
    if m % 4 == 2:
        return _sd(9, "eta_epsilon")
    return _sd(9, "eta_epsilon", "bP")


def _full_inertia(p: CohomProfile, Ih: InertiaBounds | None, trace: Trace) -> SubgroupDescriptor | None:
    known = p.known_space
    if known == "RP^8" and Ih is not None:
        trace.cite("inertia-rp8")
        trace.caveat("I(RP^8) is computed as I_h(RP^8) = 0 from the self-equivalence argument; "
                     "the value Z/2 is rejected since RP^8 # Sigma is not diffeomorphic to RP^8")
        return Ih.lower
    if known == "RP^10":
        trace.cite("inertia-rp10")
        return _full_theta(10)
    if known == "RP^9":
        trace.cite("inertia-rp9-unique")
        return lens_inertia(2)
    if known and known.startswith("L^9("):
        trace.cite("inertia-lens9")
        return lens_inertia(int(known[4:-1]))
    return None


# ----------------------------------------------------------------------------
# aggregate result


@dataclass(frozen=True)
class ClassificationResult:
    name: str
    n: int
    case: str | None
    concordance: AnnotatedGroup | None
    Ic: SubgroupDescriptor | None
    Ih: InertiaBounds | None
    inertia: SubgroupDescriptor | None
    trace: tuple
    caveats: tuple
    assertions: dict
    pending: tuple = ()
    conditional: tuple = ()  # ((assumptions dict, ClassificationResult), ...)

    def to_json(self) -> dict:
        # fixed field order for byte-stable output
        return {
            "version": RESULT_VERSION,
            "name": self.name,
            "n": self.n,
            "case": self.case,
            "assertions": dict(sorted(self.assertions.items())),
            "concordance": self.concordance.to_json() if self.concordance else None,
            "Ic": self.Ic.to_json() if self.Ic else None,
            "Ih": self.Ih.to_json() if self.Ih else None,
            "inertia": self.inertia.to_json() if self.inertia else None,
            "pending": list(self.pending),
            "conditional": [{"assume": dict(sorted(a.items())), "result": r.to_json()} for a, r in self.conditional],
            "trace": [[t, CITATIONS[t]] for t in self.trace],
            "caveats": list(self.caveats),
        }

    def dumps(self) -> str:
        import json
        return json.dumps(self.to_json(), indent=1) + "\n"


def _case_label(p: CohomProfile, trace: Trace) -> str | None:
    try:
        if p.n == 9 and p.flags["orientable"]:
            return nine_case(p).case
        if p.n == 10:
            c = ten_case(p)
            return c.case + (f"/{c.sub_shape}" if c.sub_shape else "")
    except NeedsSecondaryOpAssertion:
        return None
    return None


def _assume(p: CohomProfile, assumptions: dict) -> CohomProfile:
    from .profile import apply_assertions
    return apply_assertions(p, assumptions)


def _pending_branches(p: CohomProfile, needed) -> list[dict]:
    """Admissible assumption sets resolving the given unknowns."""
    out = []
    if "phi" in needed:
        out.append({"phi": "nonzero"})
        base = {"phi": "zero"}
    else:
        base = {}
    psi_unknown = p.secondary["psi"].value == "Unknown" and "psi" not in p.assertions
    if "psi" in needed or ("phi" in needed and psi_unknown):
        out.append({**base, "psi": "zero"})
        for shape in ("eta2", "iota_eta2"):
            out.append({**base, "psi": "nonzero", "psi_shape": shape})
    elif "psi_shape" in needed:
        for shape in ("eta2", "iota_eta2"):
            out.append({**base, "psi_shape": shape})
    elif base:
        out.append(base)
    return out


def classify(p: CohomProfile) -> ClassificationResult:
    trace = Trace()
    for k, v in sorted(p.assertions.items()):
        trace.caveat(f"assumed {k}={v}")
    if p.n not in (7, 8, 9, 10):
        raise ProfileError("classification covers n = 7..10")
    pending: set = set()

    def attempt(fn):
        try:
            return fn(p, trace)
        except NeedsSecondaryOpAssertion as e:
            pending.update(e.needed)
            return None
        except HypothesisError as e:
            trace.caveat(f"{fn.__name__.strip('_').replace('_', ' ')} unavailable: {e}")
            return None

    conc = attempt(_concordance)
    Ic = Ih = inertia = None
    if p.n == 7:
        trace.caveat("inertia in dimension 7 is outside the tabulated theorems")
    else:
        Ic = attempt(_concordance_inertia)
        Ih = attempt(_homotopy_inertia)
        inertia = _full_inertia(p, Ih, trace)
    if Ic is not None and Ih is not None and not Ic <= Ih.lower:
        raise AssertionError(f"I_c {Ic} is not inside the I_h lower bound {Ih.lower}")
    conditional = ()
    if pending:
        branches = []
        for a in _pending_branches(p, pending):
            try:
                q = _assume(p, a)
                if "psi_shape" in a:
                    kinds = carrier_types(q)
                    want = "free" if a["psi_shape"] == "eta2" else "torsion"
                    if kinds[want] is None:
                        continue
                branches.append((a, classify(q)))
            except HypothesisError:
                continue
        conditional = tuple(branches)
    return ClassificationResult(
        name=p.name,
        n=p.n,
        case=_case_label(p, trace),
        concordance=conc,
        Ic=Ic,
        Ih=Ih,
        inertia=inertia,
        trace=tuple(trace.citations),
        caveats=tuple(trace.caveats),
        assertions=dict(p.assertions),
        pending=tuple(sorted(pending)),
        conditional=conditional,
    )


# ----------------------------------------------------------------------------
# regression tables


def theorem_c_rows() -> list[dict]:
    """Theorem C checks: inertia-group predicates against the stated diffeomorphism facts."""
    from .profile import profile_lens9, profile_rp
    rows = []
    for label, m, expect in (("(i)", 5, 1), ("(ii)", 6, 2), ("(iii)", 8, 4)):
        I = classify(profile_lens9(m)).inertia
        got = I.structure.order
        rows.append({"row": label, "space": f"L^9({m})", "claim": f"|I(L^9(m))| = {expect}",
                     "computed": str(I), "pass": got == expect})
    r8 = classify(profile_rp(8)).inertia
    rows.append({"row": "(iv)", "space": "RP^8", "claim": "epsilon not in I(RP^8)", "computed": str(r8),
                 "pass": "epsilon" not in r8.generators})
    r10 = classify(profile_rp(10)).inertia
    rows.append({"row": "(v)", "space": "RP^10", "claim": "I(RP^10) = Theta_10", "computed": str(r10),
                 "pass": r10.structure == theta_constants(10)["theta"]})
    return rows
