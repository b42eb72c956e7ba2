"""skewcalc command line.

Exit codes: 0 all checks pass, 1 some check fails, 2 usage or parse error,
3 only undetermined outcomes (including a degree budget too small to decide).
"""

from __future__ import annotations

import argparse
import json
import sys
from datetime import datetime, timezone
from pathlib import Path

from . import __version__, catalog
from .algebras import (GradedMap, Presentation, center_bounded, default_budget, is_graded_automorphism,
                       transport)
from .ncpoly import Alphabet, CompletionAborted, DegreeBudgetExceeded
from .parser import ParseError, _parse_assumption, parse_presentation_file
from .report import FAIL, PASS, UNDETERMINED, Check, Report
from .scalars import fmt

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_UNDETERMINED = 0, 1, 2, 3


class UsageError(Exception):
    pass


# ------------------------------------------------------------- loading
class Loaded:
    """An algebra from the catalog or a presentation file."""

    def __init__(self, name: str, A: Presentation, mu: GradedMap | None, pf=None, entry=None):
        self.name = name
        self.A = A
        self.mu = mu
        self.pf = pf
        self.entry = entry


def presentation_from_file(pf, label: str) -> Presentation:
    budget = pf.budget if pf.budget is not None else default_budget()
    return Presentation(pf.alphabet, pf.relations, label, budget, pf.cap or 64)


def load(name: str, budget: int | None = None, assume=()) -> Loaded:
    if name in catalog.IDS:
        e = catalog.entry(name)
        A, mu, pf = e.presentation, e.mu, None
    else:
        path = Path(name)
        if not path.exists():
            raise UsageError(f"{name!r} is neither a catalog id ({', '.join(catalog.IDS)}) nor a file")
        pf = parse_presentation_file(path.read_text(encoding="utf-8"))
        e = None
        A = presentation_from_file(pf, path.stem)
        mu = GradedMap(A, A, pf.nakayama, name="mu") if pf.nakayama else None
    if assume:
        ring = A.ring.extend([])
        for text in assume:
            kind, subject = _parse_assumption(text.strip(), 1, 1)
            ring.assume(kind, subject)
        # equal rings compare equal, so build the alphabet by hand to carry the new registry
        alg = Alphabet(A.alg.names, A.alg.degrees, ring, A.alg.declared)
        B = Presentation(alg, [transport(r, alg) for r in A.relations], A.label, A.budget, A.cap,
                         A.description)
        mu = GradedMap(B, B, {k: transport(v, alg) for k, v in mu.images.items()}, mu.graded,
                       mu.name) if mu is not None else None
        A = B
    if budget is not None:
        A = A.with_budget(budget)
        if mu is not None:
            mu = GradedMap(A, A, mu.images, mu.graded, mu.name)
    return Loaded(name, A, mu, pf, e)


def _shifts(text: str) -> list:
    try:
        if ".." in text:
            lo, hi = text.split("..")
            return list(range(int(lo), int(hi) + 1))
        return [int(x) for x in text.split(",")]
    except ValueError:
        raise UsageError(f"bad shift range {text!r}; use a..b or a,b,c") from None


def _timestamp() -> str:
    return datetime.now(timezone.utc).replace(microsecond=0).isoformat()


def _emit(rep: Report, args, text: str | None = None) -> int:
    if getattr(args, "json", False):
        print(rep.to_json(None if args.no_timestamp else _timestamp()))
    else:
        print(text if text is not None else rep.text())
    return rep.exit_code()


# ------------------------------------------------------------ commands
def cmd_catalog(args) -> int:
    rep = Report("catalog")
    lines = []
    for i in catalog.IDS:
        e = catalog.entry(i)
        rep.data.setdefault("entries", []).append({"id": i, "title": e.title, "mu": e.mu.fmt()})
        lines.append(f"{i:8s} {e.title}")
    return _emit(rep, args, "\n".join(lines))


def cmd_nf(args) -> int:
    L = load(args.algebra, args.budget, args.assume)
    f = L.A.parse(args.expr)
    g = L.A.nf(f)
    rep = Report(L.name, data={"input": args.expr, "normal_form": str(g)})
    return _emit(rep, args, str(g))


def cmd_complete(args) -> int:
    L = load(args.file, args.budget, args.assume)
    D = args.degree or L.A.budget
    A = L.A.with_budget(max(D, L.A.budget))
    rs = A.rewrite(D)
    rules = rs.fmt_rules(D)
    hil = rs.hilbert_coeffs(D)
    rep = Report(L.name, data={"degree": D, "rules": rules, "hilbert": hil,
                               "assumed_nonzero": [fmt(c) for c in rs.required_nonzero]})
    text = "\n".join(rules + [f"hilbert: {' '.join(map(str, hil))}"])
    if rs.required_nonzero:
        text += "\nassumed nonzero: " + ", ".join(fmt(c) for c in rs.required_nonzero)
    return _emit(rep, args, text)


def cmd_hilbert(args) -> int:
    L = load(args.algebra, args.budget, args.assume)
    D = args.degree
    A = L.A.with_budget(max(D, L.A.budget)) if args.budget is None else L.A
    hil = A.rewrite(D).hilbert_coeffs(D)
    rep = Report(L.name, data={"degree": D, "hilbert": hil})
    return _emit(rep, args, " ".join(map(str, hil)))


def cmd_verify(args) -> int:
    from .twistnak import verify_catalog

    if args.algebra in catalog.IDS and not args.assume:
        rep = verify_catalog(args.algebra)
        return _emit(rep, args)
    L = load(args.algebra, args.budget, args.assume)
    rep = Report(L.name)
    if L.mu is None:
        raise UsageError("the file has no [nakayama] section")
    chk = is_graded_automorphism(L.mu)
    rep.add(Check.of("mu is a well-defined graded automorphism", chk.ok,
                     chk.reason or L.mu.fmt(), chk.pivots))
    return _emit(rep, args)


def cmd_twist(args) -> int:
    from .twistnak import TwistData, hdet, is_polynomial_ring, twist_nakayama, twist_presentation

    L = load(args.file, args.budget, args.assume)
    pf = L.pf
    if pf is None or pf.twist is None:
        raise UsageError("twist needs a presentation file with a [twists] section")
    A = L.A
    conv = args.convention or pf.twist.convention
    system = [GradedMap(A, A, s, name=f"sigma{k + 1}") for k, s in enumerate(pf.twist.sigmas)]
    T = TwistData(A, system, conv)
    D = args.degree or A.budget
    P = twist_presentation(T, label=f"{L.name}^sigma", budget=max(D, A.budget))
    rs = P.rewrite(D)
    rep = Report(P.label, data={"convention": conv, "relations": [str(r) for r in P.relations],
                                "rules": rs.fmt_rules(D), "hilbert": rs.hilbert_coeffs(D)})
    lines = [f"convention: {conv}", "relations:"] + [f"  {r}" for r in P.relations]
    lines += ["rules:"] + [f"  {r}" for r in rs.fmt_rules(D)]
    lines.append("hilbert: " + " ".join(map(str, rs.hilbert_coeffs(D))))
    if L.mu is not None and pf.twist.index is not None:
        hd = pf.twist.hdet
        if hd is None and is_polynomial_ring(A):
            hd = list(hdet(T))
        if hd is not None:
            mu_t = twist_nakayama(L.mu, T, pf.twist.index, hd, target=P)
            chk = is_graded_automorphism(mu_t)
            rep.add(Check.of("twisted Nakayama map is a graded automorphism", chk.ok, mu_t.fmt()))
            rep.data["nakayama"] = mu_t.fmt()
            lines.append(f"nakayama: {mu_t.fmt()}")
    return _emit(rep, args, "\n".join(lines))


def _matrix_source(args):
    L = load(args.source, args.budget, args.assume)
    if L.mu is None:
        raise UsageError("no Nakayama map: give a catalog id or a file with a [nakayama] section")
    return L, L.mu.matrix()


def cmd_hopf_pattern(args) -> int:
    from .hopf import FINITE_ORDER, IDENTITY, UndecidedStatus, conjugation_map, derive_pattern

    L, M = _matrix_source(args)
    C = conjugation_map(M, L.A.ring)
    mode = {"finite-order": FINITE_ORDER, "identity": IDENTITY}[args.mode]
    rep = Report(L.name)
    try:
        pat = derive_pattern(C, mode, strict=args.strict)
    except UndecidedStatus as e:
        pat = e.pattern
    assumptions = [a.describe() for a in L.A.ring.assumptions]
    status = UNDETERMINED if pat.undecided else PASS
    rep.add(Check(f"coaction pattern ({args.mode})", status, pat.summary(), assumptions))
    rep.data["pattern"] = pat.to_dict()
    text = pat.text()
    if args.verbose:
        text += "\n" + "\n".join(pat.log)
    return _emit(rep, args, text)


def cmd_hopf_power(args) -> int:
    from .hopf import conjugation_map, power_closed_form, verify_closed_form

    L, M = _matrix_source(args)
    C = conjugation_map(M, L.A.ring)
    try:
        i, j = (int(x) - 1 for x in args.entry.split(","))
    except ValueError:
        raise UsageError("--entry takes i,j (1-based)") from None
    cf = power_closed_form(C, (i, j), verify=False)
    ok = verify_closed_form(C, cf)
    rep = Report(L.name, data={"entry": args.entry, "closed_form": str(cf)})
    rep.add(Check.of("inductive check eta(expr(n)) = expr(n+1)", ok, str(cf)))
    return _emit(rep, args, f"eta^n(y{i + 1}{j + 1}) = {cf}")


def cmd_center(args) -> int:
    L = load(args.algebra, args.budget, args.assume)
    D = args.degree
    A = L.A if args.budget is not None else L.A.with_budget(max(D + 1, L.A.budget))
    cen = center_bounded(A, D)
    rep = Report(L.name, data={"center": {str(d): [str(f) for f in b] for d, b in cen.items()}})
    lines = [f"degree {d}: " + (", ".join(str(f) for f in b) if b else "0") for d, b in cen.items()]
    return _emit(rep, args, "\n".join(lines))


def _lnd_presentation(L, shifts, D, N, explicit_budget):
    from .derivations import required_budget

    need = required_budget(L.A, shifts, D, N)
    if explicit_budget is None:
        return L.A.with_budget(max(need, L.A.budget))
    return L.A


def cmd_lnd(args) -> int:
    from .derivations import commutes_with, lnd_search

    L = load(args.algebra, args.budget, args.assume)
    shifts = _shifts(args.shifts)
    A = _lnd_presentation(L, shifts, args.degree, args.nilpotency, args.budget)
    res = lnd_search(A, shifts, args.degree, args.nilpotency)
    rep = Report(L.name, data={"lnd": res.to_dict()})
    status = PASS if res.complete else UNDETERMINED
    rep.add(Check(f"LND search {res.scope}", status, f"{len(res.lnds)} LND(s) found"))
    lines = []
    for r in res.results:
        lines.append(f"shift {r.shift}: {r.status} (derivation space dim {r.dimension})"
                     + (f"; {r.note}" if r.note else ""))
        for d, idx in r.lnds:
            lines.append(f"  {d.fmt()}   nilpotency {idx}")
    if L.mu is not None and res.lnds:
        mu = GradedMap(A, A, L.mu.images, name="mu")
        bad = [d.fmt() for d in res.lnds if commutes_with(d, mu)]
        rep.add(Check.of("every LND commutes with mu", not bad, "; ".join(bad)))
        lines.append("commutes with mu: " + ("yes" if not bad else "no"))
    return _emit(rep, args, "\n".join(lines))


def cmd_ml(args) -> int:
    from .derivations import ml_bounded

    L = load(args.algebra, args.budget, args.assume)
    shifts = _shifts(args.shifts)
    A = _lnd_presentation(L, shifts, args.degree, args.nilpotency, args.budget)
    ml = ml_bounded(A, shifts, args.degree, args.nilpotency)
    rep = Report(L.name, data={"ml": ml.to_dict()})
    rep.add(Check(f"ML certificate {ml.scope}", PASS if ml.complete else UNDETERMINED,
                  "full" if all(ml.full.values()) else "partial"))
    lines = [ml.scope + ("" if ml.complete else " (some shifts undetermined)")]
    for d, b in ml.components.items():
        tag = "full component" if ml.full[d] else f"dim {len(b)}"
        lines.append(f"degree {d}: {tag}")
    return _emit(rep, args, "\n".join(lines))


def _element(text: str, ring=None):
    from .aut5 import InvariantPoly, make_auto
    from .parser import parse_scalar
    from .scalars import ParamRing

    parts = [p.strip() for p in text.split(";")]
    if len(parts) != 3:
        raise UsageError(f"elements are written 'a; u; lambda', got {text!r}")
    ring = ring or ParamRing()
    a = parse_scalar(ring, parts[0])
    u = InvariantPoly.parse(parts[1], ring)
    lam = parse_scalar(ring, parts[2])
    return make_auto(a, u, lam, ring, check=False)


def cmd_aut5(args) -> int:
    from . import aut5
    from .algebras import check_morphism

    rep = Report("a5")
    if args.action == "compose":
        if len(args.items) != 2:
            raise UsageError("compose takes two elements")
        g, h = (_element(t) for t in args.items)
        out = aut5.compose(g, h)
        rep.add(Check.of("composition law agrees with pointwise composition", True, str(out)))
        rep.data["result"] = out.to_dict()
        return _emit(rep, args, str(out))
    if args.action == "inverse":
        if len(args.items) != 1:
            raise UsageError("inverse takes one element")
        g = _element(args.items[0])
        out = aut5.inverse(g)
        rep.add(Check.of("round trip is the identity", True, str(out)))
        rep.data["result"] = out.to_dict()
        return _emit(rep, args, str(out))
    if args.action == "apply":
        if len(args.items) != 2:
            raise UsageError("apply takes an element and an expression")
        g = _element(args.items[0])
        phi = g.map()
        mc = check_morphism(phi)
        A = phi.source
        need = 2 * g.image_degree() * max(1, A.parse(args.items[1]).degree())
        if need > A.budget:
            A = aut5.a5(need)
            phi = g.map(A)
        img = phi.apply(A.parse(args.items[1]))
        rep.add(Check.of("element respects the relations", mc.ok, mc.describe()))
        rep.data["image"] = str(img)
        return _emit(rep, args, str(img))
    # verify
    import random

    rng = random.Random(args.seed)
    els = [aut5.random_element(rng, args.degree) for _ in range(args.count)]
    bad = [str(g) for g in els if not check_morphism(g.map()).ok]
    rep.add(Check.of(f"{args.count} random elements respect the relations", not bad, "; ".join(bad)))
    y2 = [str(g) for g in els if not aut5.verify_y2_image(g)]
    rep.add(Check.of("y2 -> a^2 (y2 + lambda t1^2)", not y2, "; ".join(y2)))
    mism = 0
    for g in els:
        for h in els:
            try:
                aut5.compose(g, h)
            except ArithmeticError:
                mism += 1
    rep.add(Check.of("composition law on all pairs", mism == 0, f"{mism} mismatches"))
    inv_bad = 0
    for g in els:
        try:
            aut5.inverse(g)
        except ArithmeticError:
            inv_bad += 1
    rep.add(Check.of("inverses round-trip", inv_bad == 0, f"{inv_bad} failures"))
    rep.add(Check.of(f"composition law for generic u, u' of degree <= {args.degree}",
                     aut5.verify_law_symbolic(args.degree)))
    for v in ("1", "T1", "Y2", "T1*Y2", "Y2^2"):
        c = aut5.verify_commutation(v)
        rep.add(Check.of(f"commutation identities for v = {v}", c.ok))
    for d in range(1, 9):
        ib = aut5.sigma_invariants(d)
        rep.add(Check.of(f"sigma-invariants of degree {d} are spanned by t1^i y2^j",
                         ib.matches and len(ib.basis) == d // 2 + 1, f"dimension {len(ib.basis)}"))
    return _emit(rep, args)


def full_report(name: str, budget: int | None = None) -> Report:
    """Every applicable check for one algebra."""
    from .derivations import lnd_search
    from .hopf import FINITE_ORDER, NotTriangular, conjugation_map, derive_pattern
    from .twistnak import verify_catalog

    L = load(name, budget)
    if L.entry is not None:
        rep = verify_catalog(name)
    else:
        rep = Report(L.name)
        if L.mu is not None:
            chk = is_graded_automorphism(L.mu)
            rep.add(Check.of("mu is a well-defined graded automorphism", chk.ok, chk.reason or L.mu.fmt()))
    A = L.A
    D = min(A.budget, 6)
    rep.data["hilbert"] = A.rewrite(D).hilbert_coeffs(D)
    cen = center_bounded(A.with_budget(max(A.budget, 5)), 4)
    rep.data["center_dimensions"] = {str(d): len(b) for d, b in cen.items()}
    if L.mu is not None:
        try:
            pat = derive_pattern(conjugation_map(L.mu.matrix(), A.ring), FINITE_ORDER)
            rep.data["pattern"] = pat.to_dict()
        except NotTriangular:
            rep.data["pattern"] = None
    shifts = [-1, 0, 1]
    if A.ring.basis:
        # without rational points the search falls back to generic completion far past degree 6
        rep.add(Check("LND search", UNDETERMINED,
                      "skipped: the parameter ring has constraints, so no rational specialization "
                      "can screen the search; run `skewcalc lnd search` with a larger budget"))
        return rep
    try:
        res = lnd_search(A, shifts, 4, 6)
        rep.data["lnd"] = res.to_dict()
        rep.add(Check(f"LND search {res.scope}", PASS if res.complete else UNDETERMINED,
                      f"{len(res.lnds)} LND(s) found"))
    except DegreeBudgetExceeded as e:
        rep.add(Check("LND search", UNDETERMINED, str(e)))
    return rep


def cmd_report(args) -> int:
    names = list(catalog.IDS) if args.algebra == "all" else [args.algebra]
    reports = [full_report(n, args.budget) for n in names]
    if len(reports) == 1:
        return _emit(reports[0], args)
    codes = [r.exit_code() for r in reports]
    if args.json:
        ts = None if args.no_timestamp else _timestamp()
        print(json.dumps([r.to_dict(ts) for r in reports], indent=2, sort_keys=True))
    else:
        print("\n".join(r.text() for r in reports))
    return EXIT_FAIL if EXIT_FAIL in codes else (EXIT_UNDETERMINED if EXIT_UNDETERMINED in codes else EXIT_OK)


# -------------------------------------------------------------- parser
def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="print the JSON report")
    common.add_argument("--no-timestamp", action="store_true", help="omit the timestamp from JSON")
    common.add_argument("--budget", type=int, default=None, help="degree budget (default: SKEWCALC_BUDGET or 8)")
    common.add_argument("--assume", action="append", default=[],
                        help="extra assumption, e.g. 'p not-root-of-unity' or '{p,q} independent'")

    p = argparse.ArgumentParser(prog="skewcalc", description="Exact computations with graded algebras.")
    p.add_argument("--version", action="version", version=f"skewcalc {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("catalog", parents=[common], help="list catalog algebras")
    c.add_argument("action", choices=["list"])
    c.set_defaults(fn=cmd_catalog)

    c = sub.add_parser("nf", parents=[common], help="normal form of an expression")
    c.add_argument("algebra")
    c.add_argument("expr")
    c.set_defaults(fn=cmd_nf)

    c = sub.add_parser("complete", parents=[common], help="complete a presentation file")
    c.add_argument("file")
    c.add_argument("--degree", type=int, default=None)
    c.set_defaults(fn=cmd_complete)

    c = sub.add_parser("hilbert", parents=[common], help="normal-word counts per degree")
    c.add_argument("algebra")
    c.add_argument("--degree", type=int, default=6)
    c.set_defaults(fn=cmd_hilbert)

    c = sub.add_parser("verify", parents=[common], help="verify a stored Nakayama map")
    c.add_argument("what", choices=["nakayama"])
    c.add_argument("algebra")
    c.set_defaults(fn=cmd_verify)

    c = sub.add_parser("twist", parents=[common], help="twist a presentation file")
    c.add_argument("file")
    c.add_argument("--convention", choices=["left", "right"], default=None)
    c.add_argument("--degree", type=int, default=None)
    c.set_defaults(fn=cmd_twist)

    h = sub.add_parser("hopf", help="coaction patterns of the Nakayama matrix")
    hs = h.add_subparsers(dest="hopf_command", required=True)
    c = hs.add_parser("pattern", parents=[common])
    c.add_argument("source", help="catalog id or file with a [nakayama] section")
    c.add_argument("--mode", choices=["finite-order", "identity"], default="finite-order")
    c.add_argument("--strict", action="store_true", help="fail on undetermined entries")
    c.add_argument("--verbose", action="store_true", help="print the derivation log")
    c.set_defaults(fn=cmd_hopf_pattern)
    c = hs.add_parser("power", parents=[common])
    c.add_argument("source")
    c.add_argument("--entry", required=True, help="i,j (1-based)")
    c.set_defaults(fn=cmd_hopf_power)

    c = sub.add_parser("center", parents=[common], help="central elements by degree")
    c.add_argument("algebra")
    c.add_argument("--degree", type=int, default=4)
    c.set_defaults(fn=cmd_center)

    for name, fn, help_ in (("lnd", cmd_lnd, "search homogeneous LNDs"),
                            ("ml", cmd_ml, "bounded Makar-Limanov certificate")):
        c = sub.add_parser(name, parents=[common], help=help_)
        if name == "lnd":
            c.add_argument("action", choices=["search"])
        c.add_argument("algebra")
        c.add_argument("--shifts", default="-1..3")
        c.add_argument("--degree", type=int, default=4)
        c.add_argument("--nilpotency", type=int, default=6)
        c.set_defaults(fn=fn)

    c = sub.add_parser("aut5", parents=[common], help="automorphisms of A(5); elements are 'a; u; lambda'")
    c.add_argument("action", choices=["compose", "inverse", "apply", "verify"])
    c.add_argument("items", nargs="*")
    c.add_argument("--count", type=int, default=20)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--degree", type=int, default=4)
    c.set_defaults(fn=cmd_aut5)

    c = sub.add_parser("report", parents=[common], help="run every check for an algebra (or 'all')")
    c.add_argument("algebra")
    c.set_defaults(fn=cmd_report)
    return p


def _join_shifts(argv: list) -> list:
    # "--shifts -1..3" would otherwise be read as an unknown option
    out, i = [], 0
    while i < len(argv):
        if argv[i] == "--shifts" and i + 1 < len(argv):
            out.append(f"--shifts={argv[i + 1]}")
            i += 2
        else:
            out.append(argv[i])
            i += 1
    return out


def main(argv=None) -> int:
    parser = build_parser()
    argv = _join_shifts(list(sys.argv[1:] if argv is None else argv))
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK
    try:
        return args.fn(args)
    except (UsageError, ParseError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except CompletionAborted as e:
        print(f"undetermined: {e}", file=sys.stderr)
        return EXIT_UNDETERMINED
    except DegreeBudgetExceeded as e:
        print(f"undetermined: {e}; raise --budget or SKEWCALC_BUDGET", file=sys.stderr)
        return EXIT_UNDETERMINED
    except (ValueError, ArithmeticError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
