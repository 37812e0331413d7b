"""Command line: profile, classify, zoo, ops, verify.

Exit codes: 0 ok, 2 parse error, 3 hypothesis failure, 4 needs a secondary
operation assertion, 5 internal inconsistency.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import classifier as cl
from . import profile as pr
from .complex_core import (
    FacetParseError,
    NotAPseudomanifold,
    build_complex,
    class_coordinates,
    cohomology,
    load_facets,
    moore_chain_complex,
    product_complex,
    sphere_boundary,
)

EXIT_OK, EXIT_PARSE, EXIT_HYPOTHESIS, EXIT_NEEDS_ASSERTION, EXIT_INTERNAL = 0, 2, 3, 4, 5


class UsageError(ValueError):
    pass


# ----------------------------------------------------------------------------
# inputs


def _ints(text: str, count: int | None = None) -> list[int]:
    try:
        vals = [int(x) for x in text.split(",")]
    except ValueError:
        raise UsageError(f"expected integers, got {text!r}") from None
    if count is not None and len(vals) != count:
        raise UsageError(f"expected {count} integers, got {text!r}")
    return vals


def load_profile(path) -> pr.CohomProfile:
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise UsageError(str(e)) from None
    return pr.CohomProfile.loads(text)


def build_profile(spec: str, assertions: dict) -> pr.CohomProfile:
    kind, _, args = spec.partition(":")
    if kind == "sphere":
        p = pr.profile_sphere(*_ints(args, 1))
    elif kind == "rp":
        p = pr.profile_rp(*_ints(args, 1))
    elif kind == "lens9":
        p = pr.profile_lens9(*_ints(args, 1))
    elif kind == "product":
        i, j = _ints(args, 2)
        K = product_complex(sphere_boundary(i), sphere_boundary(j))
        return pr.extract_profile(K, assertions, name=f"S^{i}xS^{j}")
    elif kind == "sum":
        files = args.split(",")
        if len(files) != 2:
            raise UsageError("sum needs two profile files")
        p = pr.profile_connected_sum(load_profile(files[0]), load_profile(files[1]))
    else:
        raise UsageError(f"unknown builder {kind!r}")
    return pr.apply_assertions(p, assertions) if assertions else p


def load_complex(spec: str):
    if spec.startswith("moore:"):
        m, k = _ints(spec[6:], 2)
        return moore_chain_complex(m, k)
    try:
        facets = load_facets(spec)
    except OSError as e:
        raise UsageError(str(e)) from None
    return build_complex(facets, name=Path(spec).stem)


def _profile_from_args(a) -> pr.CohomProfile:
    assertions = pr.parse_assertions(a.assertions or [])
    if getattr(a, "profile", None):
        p = load_profile(a.profile)
        return pr.apply_assertions(p, assertions) if assertions else p
    if a.complex:
        K = load_complex(a.complex)
        if not hasattr(K, "chains"):
            raise UsageError("profiles need a facet file, not a chain complex")
        return pr.extract_profile(K, assertions)
    if a.builder:
        return build_profile(a.builder, assertions)
    raise UsageError("give --complex, --builder or --profile")


# ----------------------------------------------------------------------------
# printing


def profile_summary(p: pr.CohomProfile) -> str:
    lines = [f"profile {p.name}  n={p.n}"]
    lines.append("flags: " + " ".join(f"{k}={int(v)}" for k, v in p.flags.items()))
    for k, g in p.groups.items():
        lines.append(f"  {k:<12} {g}")
    nz = [k for k, o in p.ops.items() if not o.is_zero]
    lines.append("nonzero ops: " + (", ".join(nz) or "none"))
    lines.append("secondary: " + ", ".join(f"{k}={s.value}({s.provenance})" for k, s in p.secondary.items()))
    try:
        if p.n == 9 and p.flags["orientable"]:
            lines.append(f"case: {pr.nine_case(p).case}")
        elif p.n == 10:
            c = pr.ten_case(p)
            lines.append(f"case: {c.case}" + (f"/{c.sub_shape}" if c.sub_shape else ""))
    except pr.NeedsSecondaryOpAssertion as e:
        lines.append("case: pending " + ",".join(e.needed))
    except pr.HypothesisError as e:
        lines.append(f"case: unclassified ({e})")
    for c in p.caveats:
        lines.append(f"caveat: {c}")
    return "\n".join(lines)


def result_table(r: cl.ClassificationResult, indent: str = "") -> str:
    cite = lambda ids: " [" + ", ".join(ids) + "]" if ids else ""
    conc_ids = [t for t in r.trace if t.startswith("concordance-dim")]
    ic_ids = [t for t in r.trace if t.startswith("concordance-inertia")]
    ih_ids = [t for t in r.trace if t.startswith("homotopy-inertia")]
    i_ids = [t for t in r.trace if t.startswith("inertia-")]
    out = [f"{indent}{r.name}  n={r.n}" + (f"  case={r.case}" if r.case else "")]
    if r.concordance is not None:
        out.append(f"{indent}  C(M)  = {r.concordance.group}{cite(conc_ids)}")
        for lab, g in r.concordance.summands:
            out.append(f"{indent}          {lab}: {g}")
    if r.Ic is not None:
        out.append(f"{indent}  I_c   = {r.Ic}{cite(ic_ids)}")
    if r.Ih is not None:
        if r.Ih.exact:
            out.append(f"{indent}  I_h   = {r.Ih.lower}{cite(ih_ids)}")
        else:
            und = f"  undetermined: {', '.join(r.Ih.undetermined)}" if r.Ih.undetermined else ""
            out.append(f"{indent}  I_h  >= {r.Ih.lower}, <= {r.Ih.upper}{und}{cite(ih_ids)}")
    if r.inertia is not None:
        out.append(f"{indent}  I     = {r.inertia}{cite(i_ids)}")
    if r.pending:
        out.append(f"{indent}  pending: {', '.join(r.pending)}")
    for a, sub in r.conditional:
        out.append(f"{indent}  assuming " + " ".join(f"{k}={v}" for k, v in sorted(a.items())) + ":")
        out.append(result_table(sub, indent + "    "))
    for c in r.caveats:
        out.append(f"{indent}  caveat: {c}")
    return "\n".join(out)


# ----------------------------------------------------------------------------
# commands


def cmd_profile(a) -> int:
    p = _profile_from_args(a)
    if a.out:
        Path(a.out).write_text(p.dumps())
    print(profile_summary(p))
    return EXIT_OK


def cmd_classify(a) -> int:
    p = _profile_from_args(a)
    r = cl.classify(p)
    if a.format == "machine":
        sys.stdout.write(r.dumps())
    else:
        print(result_table(r))
    return EXIT_NEEDS_ASSERTION if r.pending else EXIT_OK


def zoo_rows(table: str) -> list[dict]:
    """Rows {row, claim, computed, pass, cite} in fixed order."""
    rows = []
    if table == "lens":
        for m in range(2, 13):
            I = cl.lens_inertia(m)
            if m % 2:
                want, gens = 1, ()
            elif m % 4 == 2:
                want, gens = 2, ("eta_epsilon",)
            else:
                want, gens = 4, ("eta_epsilon", "bP")
            ok = I.structure.order == want and all(g in I.generators for g in gens)
            via = cl.classify(pr.profile_lens9(m)).inertia
            ok = ok and via == I
            if m == 2:
                ok = ok and I.structure.order - 1 == 1
            rows.append({"row": f"L^9({m})", "claim": f"|I| = {want}", "computed": str(I), "pass": ok,
                         "cite": "inertia-lens9"})
    elif table == "rp":
        r8, r9, r10 = (cl.classify(pr.profile_rp(n)) for n in (8, 9, 10))
        rows += [
            {"row": "RP^8 C", "claim": "Z/2 + Z/2", "computed": str(r8.concordance.group),
             "pass": str(r8.concordance.group) == "Z/2 + Z/2", "cite": "concordance-dim8"},
            {"row": "RP^8 I_h", "claim": "0", "computed": str(r8.Ih.lower),
             "pass": r8.Ih.exact and not r8.Ih.lower.generators, "cite": "homotopy-inertia-dim8"},
            {"row": "RP^8 I", "claim": "0", "computed": str(r8.inertia),
             "pass": r8.inertia is not None and not r8.inertia.generators, "cite": "inertia-rp8"},
            {"row": "RP^9 I_c", "claim": "Z/2<eta_epsilon>", "computed": str(r9.Ic),
             "pass": r9.Ic == cl.SubgroupDescriptor(9, ("eta_epsilon",)), "cite": "concordance-inertia-dim9"},
            {"row": "RP^9 I", "claim": "one nontrivial element", "computed": str(r9.inertia),
             "pass": r9.inertia.structure.order == 2, "cite": "inertia-rp9-unique"},
            {"row": "RP^10 I_h", "claim": "Z/2<eta_mu> + Z/3<beta1>", "computed": str(r10.Ih.lower),
             "pass": r10.Ih.exact and set(r10.Ih.lower.generators) == {"eta_mu", "beta1"},
             "cite": "homotopy-inertia-rp10"},
            {"row": "RP^10 I", "claim": "Theta_10", "computed": str(r10.inertia),
             "pass": r10.inertia.structure == cl.theta_constants(10)["theta"], "cite": "inertia-rp10"},
        ]
    elif table == "spheres":
        for n in range(7, 11):
            g = cl.classify_concordance(pr.profile_sphere(n)).group
            t = cl.theta_constants(n)["theta"]
            rows.append({"row": f"S^{n}", "claim": f"C = Theta_{n} = {t}", "computed": str(g), "pass": g == t,
                         "cite": "theta-split"})
    elif table == "theoremC":
        for row in cl.theorem_c_rows():
            rows.append({"row": f"{row['row']} {row['space']}", "claim": row["claim"], "computed": row["computed"],
                         "pass": row["pass"], "cite": "theorem-c"})
    else:
        raise UsageError(f"unknown table {table!r}")
    return rows


def cmd_zoo(a) -> int:
    rows = zoo_rows(a.table)
    w = max(len(r["row"]) for r in rows)
    for r in rows:
        print(f"{r['row']:<{w}}  {'PASS' if r['pass'] else 'FAIL'}  expected {r['claim']}; got {r['computed']}  [{r['cite']}]")
    return EXIT_OK if all(r["pass"] for r in rows) else EXIT_INTERNAL


def _parse_class(X, spec: str):
    try:
        deg, idx, mod = (int(x) for x in spec.split(":"))
    except ValueError:
        raise UsageError(f"class spec must be deg:idx:mod, got {spec!r}") from None
    G, basis = cohomology(X, deg, mod)
    if not 0 <= idx < len(basis):
        raise UsageError(f"H^{deg}(;Z/{mod}) = {G} has no generator {idx}")
    return basis[idx]


def cmd_ops(a) -> int:
    from . import cohomops as co
    X = load_complex(a.complex)
    classes = [_parse_class(X, s) for s in a.cls]
    op = a.op
    if op == "cup":
        if len(classes) != 2:
            raise UsageError("cup needs two --class arguments")
        out = co.cup(X, *classes)
    elif len(classes) != 1:
        raise UsageError(f"{op} takes one --class")
    elif op in ("sq1", "sq2"):
        out = co.steenrod_sq(X, int(op[2]), classes[0])
    elif op == "d2":
        out = co.d2_connecting(X, classes[0])
    elif op.startswith("beta:"):
        out = co.bockstein_higher(X, _ints(op[5:], 1)[0], classes[0])
        if out is co.Undefined:
            print("undefined")
            return EXIT_OK
    else:
        raise UsageError(f"unknown op {op!r}")
    C = X.chains if hasattr(X, "chains") else X
    top = C.top
    coords = class_coordinates(X, out) if out.degree <= top else ()
    print(f"{out.degree}:{','.join(str(c) for c in coords)}:{out.modulus}" + ("  (zero)" if not any(coords) else ""))
    return EXIT_OK


def verify_rows(spec: str | None) -> list[tuple[str, bool]]:
    """Engine against the brute-force oracles on small complexes."""
    from . import oracle as orc
    from .complex_core import cohomology_group, rp2
    from .cohomops import bockstein_higher, d2_connecting, Undefined
    targets = [load_complex(spec)] if spec else [rp2(), sphere_boundary(2), moore_chain_complex(4, 2),
                                                 moore_chain_complex(8, 3)]
    rows = []
    for X in targets:
        C = X.chains if hasattr(X, "chains") else X
        for k in range(C.top + 1):
            for m in (2, 4):
                try:
                    b = orc.brute_cohomology(C, k, m)
                except orc.OracleBoundError:
                    continue
                rows.append((f"{C.name} H^{k}(;Z/{m})", b.group == cohomology_group(C, k, m)))
            if k < C.top:
                _, basis = cohomology(C, k, 2)
                for i, g in enumerate(basis):
                    for r in (1, 2, 3):
                        try:
                            want = orc.brute_bockstein(C, r, g.cochain, k)
                        except orc.OracleBoundError:
                            break
                        got = bockstein_higher(C, r, g)
                        if want is None or got is Undefined:
                            ok = (want is None) == (got is Undefined)
                        else:
                            diff = tuple((x + y) % 2 for x, y in zip(want, got.cochain))
                            ok = orc.brute_is_coboundary(C, k + 1, diff, 2) if r == 1 else \
                                (any(want) == any(got.cochain)) or orc.brute_is_coboundary(C, k + 1, diff, 2)
                        rows.append((f"{C.name} beta_{r} on H^{k} gen {i}", ok))
                _, basis4 = cohomology(C, k, 4)
                for i, g in enumerate(basis4):
                    try:
                        vals = orc.brute_d2(C, g.cochain, k)
                    except orc.OracleBoundError:
                        continue
                    got = d2_connecting(C, g).cochain
                    ok = all(orc.brute_is_coboundary(C, k + 1, tuple((x + y) % 2 for x, y in zip(v, got)), 2)
                             for v in vals)
                    rows.append((f"{C.name} d_2 on H^{k}(;Z/4) gen {i}", ok))
    return rows


def cmd_verify(a) -> int:
    rows = verify_rows(a.complex)
    for name, ok in rows:
        print(f"{'PASS' if ok else 'FAIL'}  {name}")
    return EXIT_OK if all(ok for _, ok in rows) else EXIT_INTERNAL


# ----------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="smoothings", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    def source(sp, profile_file=False):
        g = sp.add_mutually_exclusive_group(required=True)
        g.add_argument("--complex", help="facet file")
        g.add_argument("--builder", help="sphere:n | rp:n | lens9:m | product:i,j | sum:FILE,FILE")
        if profile_file:
            g.add_argument("--profile", help="profile/1 file")
        sp.add_argument("--assert", dest="assertions", nargs="*", metavar="K=V",
                        help="phi=zero|nonzero psi=zero|nonzero psi_shape=eta2|iota_eta2 pi1=trivial")

    sp = sub.add_parser("profile", help="compute a cohomological profile")
    source(sp)
    sp.add_argument("--out", help="write the profile/1 file here")
    sp.set_defaults(func=cmd_profile)

    sp = sub.add_parser("classify", help="concordance set and inertia groups")
    source(sp, profile_file=True)
    sp.add_argument("--format", choices=("table", "machine"), default="table")
    sp.set_defaults(func=cmd_classify)

    sp = sub.add_parser("zoo", help="regression tables with PASS/FAIL")
    sp.add_argument("--table", choices=("lens", "rp", "spheres", "theoremC"), required=True)
    sp.set_defaults(func=cmd_zoo)

    sp = sub.add_parser("ops", help="apply a cohomology operation to a basis class")
    sp.add_argument("--complex", required=True, help="facet file or moore:m,k")
    sp.add_argument("--op", required=True, help="sq1 | sq2 | d2 | beta:r | cup")
    sp.add_argument("--class", dest="cls", action="append", required=True, metavar="DEG:IDX:MOD")
    sp.set_defaults(func=cmd_ops)

    sp = sub.add_parser("verify", help="check the engine against brute-force oracles")
    sp.add_argument("--complex", help="facet file or moore:m,k (default: built-in small complexes)")
    sp.set_defaults(func=cmd_verify)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        a = ap.parse_args(argv)
    except SystemExit as e:
        return EXIT_PARSE if e.code else EXIT_OK
    try:
        return a.func(a)
    except pr.NeedsSecondaryOpAssertion as e:
        print(f"error: needs assertion for {', '.join(e.needed)}", file=sys.stderr)
        return EXIT_NEEDS_ASSERTION
    except pr.HypothesisError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_HYPOTHESIS
    except (UsageError, pr.ProfileError, FacetParseError, NotAPseudomanifold) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_PARSE
    except AssertionError as e:
        print(f"internal inconsistency: {e}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
