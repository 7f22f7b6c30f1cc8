"""Command-line front end.

Every command reads a graph either from ``--graph FILE`` (``-`` for stdin)
or from a built-in germ ``--germ NAME [PARAMS]`` and prints a text table,
or with ``--json`` a machine-readable report.  Exit status is 0 on success,
1 when the input is invalid and 2 when an internal consistency check fails.
"""

import argparse
import json
import sys
import warnings
from fractions import Fraction

from planemono import __version__
from planemono.document import (
    GraphDocument,
    document_hash,
    dumps,
    parse_graph,
    parse_rational,
    serialize_graph,
)
from planemono.dynamics import calculus_identity_suite, separation_bound_check
from planemono.exceptions import InvalidParams, PlanemonoError
from planemono.germs import GERMS, germ_generator
from planemono.graph import (
    check_ample,
    decorate,
    separate,
    suggest_ample,
    validate_graph,
)
from planemono.invariants import invariant_report
from planemono.page import (
    action_order,
    assemble_page,
    candidate_differentials,
    degeneration_feasibility,
    euler_characteristic,
    forbidden_arrows,
)

EXIT_OK, EXIT_INVALID, EXIT_INTERNAL = 0, 1, 2


def _parse_germ(text):
    parts = text.replace(":", " ").replace(",", " ").split()
    if not parts:
        raise InvalidParams("empty germ name")
    name, params = parts[0], parts[1:]
    try:
        params = [int(x) for x in params]
    except ValueError:
        raise InvalidParams(f"germ parameters must be integers: {params}") from None
    return name, params


def load_document(args):
    if args.graph is not None:
        if args.graph == "-":
            text = sys.stdin.read()
        else:
            with open(args.graph, encoding="utf-8") as fh:
                text = fh.read()
        return parse_graph(text)
    name, params = _parse_germ(args.germ or "cusp")
    return GraphDocument(germ_generator(name, params))


def _ample_from_args(args, doc, dec):
    """``--ample`` values in vertex order; with ``--scale s`` they are ``s * b_i / m_i``."""
    if args.ample is None:
        return doc.ample
    values = [parse_rational(x, "--ample") for x in args.ample.split(",")]
    ids = doc.graph.ids
    if len(values) != len(ids):
        raise InvalidParams(f"--ample needs {len(ids)} values (vertex order {ids})")
    if args.scale is None:
        return dict(zip(ids, values))
    scale = parse_rational(args.scale, "--scale")
    return {v: x * dec.mult[v] / scale for v, x in zip(ids, values)}


def _provenance(doc, args, seed=None):
    return {"input_sha256": document_hash(doc), "tool": "planemono",
            "version": __version__, "command": args.command, "seed": seed}


def _page_dict(page):
    return {
        "m": page.m,
        "n": page.n,
        "entries": [
            {"p": p, "q": q, "rank": page.rank(p, q),
             "contributions": [{"vertex": c.vertex, "bm_degree": c.bm_degree, "rank": c.rank}
                               for c in page.entries[(p, q)]]}
            for p, q in sorted(page.entries)],
        "cz": dict(sorted(page.cz.items())),
        "action_key": {v: list(k) for v, k in sorted(page.action_key.items())},
        "euler_characteristic": euler_characteristic(page),
    }


def _page_text(page):
    lines = [f"E^1 page, m = {page.m}, n = {page.n}"]
    lines.append(f"{'p':>6} {'q':>6} {'rank':>6}  contributions")
    for p, q in sorted(page.entries):
        contrib = ", ".join(f"{c.vertex}:H{c.bm_degree}^{c.rank}" for c in page.entries[(p, q)])
        lines.append(f"{p:>6} {q:>6} {page.rank(p, q):>6}  {contrib}")
    if not page.entries:
        lines.append("  (empty)")
    lines.append("CZ: " + ", ".join(f"{v}={x}" for v, x in sorted(page.cz.items())))
    return "\n".join(lines)


def _decorated(args, doc, m=None):
    g = doc.graph
    dec = decorate(g)
    ample = _ample_from_args(args, doc, dec)
    if m is not None and getattr(args, "separate", False):
        g, dec = separate(g, dec, m)
        if g is not doc.graph:
            ample = None
    if ample is None:
        ample = suggest_ample(g)
    return g, dec.with_ample(ample)


def cmd_germ(args):
    name, params = _parse_germ(" ".join(args.germ_words))
    doc = GraphDocument(germ_generator(name, params))
    return serialize_graph(doc), serialize_graph(doc)


def cmd_validate(args):
    doc = load_document(args)
    rep = validate_graph(doc.graph)
    data = {"ok": rep.ok, "connected": rep.connected, "negative_definite": rep.negative_definite,
            "has_arrows": rep.has_arrows, "minors": rep.minors, "problems": rep.problems,
            "provenance": _provenance(doc, args)}
    text = "valid" if rep.ok else "invalid:\n  " + "\n  ".join(rep.problems)
    return data, text


def cmd_decorate(args):
    doc = load_document(args)
    dec = decorate(doc.graph)
    rows = [f"{'vertex':>8} {'self':>5} {'m_i':>5} {'a_i':>6}"]
    for v in doc.graph.vertices:
        rows.append(f"{v.id:>8} {v.self_intersection:>5} {dec.mult[v.id]:>5} "
                    f"{str(dec.discrepancy[v.id]):>6}")
    data = {"multiplicities": dec.mult, "discrepancies": dec.discrepancy,
            "provenance": _provenance(doc, args)}
    return data, "\n".join(rows)


def cmd_ample(args):
    doc = load_document(args)
    g = doc.graph
    dec = decorate(g)
    if args.suggest:
        b = suggest_ample(g)
        rep = check_ample(g, b)
        text = "suggested b: " + ", ".join(f"{v}={b[v]}" for v in g.ids)
    else:
        b = _ample_from_args(args, doc, dec)
        if b is None:
            raise InvalidParams("ample --check needs --ample values or an 'ample' field")
        rep = check_ample(g, b)
        text = ("ample" if rep.ample else "NOT ample") + ": " + ", ".join(
            f"H.{v}={rep.intersections[v]}" for v in g.ids)
    data = {"ample": rep.ample, "b": b, "intersections": rep.intersections,
            "b_over_m": {v: Fraction(b[v]) / dec.mult[v] for v in g.ids},
            "provenance": _provenance(doc, args)}
    return data, text


def cmd_separate(args):
    doc = load_document(args)
    g, dec = separate(doc.graph, decorate(doc.graph), args.m)
    out = GraphDocument(g, None, doc.schema_version, dict(doc.tags))
    data = {"document": json.loads(serialize_graph(out)), "multiplicities": dec.mult,
            "discrepancies": dec.discrepancy, "provenance": _provenance(doc, args)}
    return data, serialize_graph(out).rstrip()


def cmd_page(args):
    doc = load_document(args)
    g, dec = _decorated(args, doc, args.m)
    page = assemble_page(g, dec, args.m, literal_arrows=args.literal_arrows)
    order = action_order(dec, args.m)
    forbidden = forbidden_arrows(page, order)
    cands = [d for r in range(1, max(2, _span(page) + 1))
             for d in candidate_differentials(page, forbidden, r=r)]
    data = {"page": _page_dict(page), "ample": dec.ample, "action_order": order,
            "forbidden": [list(x) for x in forbidden],
            "candidate_differentials": [
                {"r": d.r, "source": list(d.source), "target": list(d.target)} for d in cands],
            "provenance": _provenance(doc, args)}
    text = "\n".join([
        _page_text(page),
        "action order: " + " < ".join("=".join(grp) for grp in order),
        "forbidden column arrows: " + (", ".join(f"{s}->{t}" for s, t in forbidden) or "none"),
        "candidate differentials: " + (", ".join(
            f"d{d.r} {d.source}->{d.target}" for d in cands) or "none"),
    ])
    return data, text


def _span(page):
    cols = {p for p, _ in page.entries}
    return max(cols) - min(cols) if cols else 0


def cmd_invariants(args):
    doc = load_document(args)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        rep = invariant_report(doc.graph, max_m=args.max_m, zeta_order=args.zeta_order)
    data = {"lefschetz": rep.lefschetz, "zeta_coeffs": rep.zeta_coeffs,
            "euler_fiber": rep.euler_fiber, "milnor": rep.milnor,
            "multiplicity": rep.multiplicity, "tangent_cone_ranks": rep.tangent_cone_ranks,
            "tangent_cone_shift": rep.tangent_cone_shift,
            "provenance": _provenance(doc, args)}
    text = "\n".join([
        f"Milnor number mu = {rep.milnor}",
        f"multiplicity nu = {rep.multiplicity}",
        f"Euler characteristic of the fibre = {rep.euler_fiber}",
        "Lefschetz numbers: " + ", ".join(f"L({m})={x}" for m, x in rep.lefschetz.items()),
        f"zeta(t) to t^{args.zeta_order}: " + " ".join(str(c) for c in rep.zeta_coeffs),
        f"tangent cone BM ranks: {rep.tangent_cone_ranks} (degree shift {rep.tangent_cone_shift})",
    ])
    return data, text


def cmd_dynamics(args):
    doc = load_document(args)
    g, dec = doc.graph, decorate(doc.graph)
    if args.separate:
        g, dec = separate(g, dec, args.m)
    sep = separation_bound_check(g, dec, args.m, samples=args.samples, seed=args.seed)
    ident = calculus_identity_suite(samples=min(args.samples, 1000), seed=args.seed)
    data = {"separation": {"m": sep.m, "samples": sep.samples, "ok": sep.ok,
                           "mixed_fixed_points": sep.mixed_fixed_points,
                           "max_closure_error": sep.max_closure_error,
                           "strata": sep.strata},
            "identities": {"ok": ident.ok, "worst": ident.worst},
            "provenance": _provenance(doc, args, seed=args.seed)}
    lines = [f"separation check m = {args.m}: {'pass' if sep.ok else 'FAIL'} "
             f"({sep.mixed_fixed_points} mixed fixed points, closure error "
             f"{sep.max_closure_error:.2e})"]
    for s in sep.strata:
        lines.append(f"  {s['stratum'][0]}-{s['stratum'][1]}: bound {s['bound']:.6f}, "
                     f"m*l in [{s['min']:.6f}, {s['max']:.6f}]")
    lines.append(f"calculus identities: {'pass' if ident.ok else 'FAIL'}")
    for name, w in ident.worst.items():
        lines.append(f"  {name}: worst relative error {w['rel_err']:.2e} at {w['at']:.6f}")
    return data, "\n".join(lines)


def _target(text):
    out = {}
    for item in text.split(","):
        item = item.strip()
        if not item:
            continue
        try:
            deg, rank = item.split(":")
            out[int(deg)] = int(rank)
        except ValueError:
            raise InvalidParams(f"--target entries look like DEGREE:RANK, got {item!r}") from None
    return out


def cmd_feasibility(args):
    doc = load_document(args)
    g, dec = _decorated(args, doc, args.m)
    page = assemble_page(g, dec, args.m)
    forbidden = forbidden_arrows(page, action_order(dec, args.m))
    target = _target(args.target)
    pattern = degeneration_feasibility(page, target, forbidden)
    data = {"feasible": pattern is not None, "target": target,
            "differentials": None if pattern is None else [
                {"r": d.r, "source": list(d.source), "target": list(d.target), "rank": d.rank}
                for d in pattern],
            "page": _page_dict(page), "provenance": _provenance(doc, args)}
    if pattern is None:
        text = "infeasible: no pattern of differential ranks reaches the target"
    else:
        text = "feasible: " + (", ".join(
            f"d{d.r} {d.source}->{d.target} rank {d.rank}" for d in pattern) or "E^1 = E^inf")
    return data, text


COMMANDS = {
    "germ": cmd_germ,
    "validate": cmd_validate,
    "decorate": cmd_decorate,
    "ample": cmd_ample,
    "separate": cmd_separate,
    "page": cmd_page,
    "invariants": cmd_invariants,
    "dynamics": cmd_dynamics,
    "feasibility": cmd_feasibility,
}


def build_parser():
    parser = argparse.ArgumentParser(
        prog="planemono",
        description="Monodromy invariants of plane-curve singularities from resolution graphs.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def graph_cmd(name, help_):
        p = sub.add_parser(name, help=help_)
        src = p.add_mutually_exclusive_group()
        src.add_argument("--graph", help="graph document (JSON), '-' for stdin")
        src.add_argument("--germ", help=f"built-in germ: {', '.join(GERMS)} "
                                        "with parameters, e.g. 'xp-yq 2 5' (default cusp)")
        p.add_argument("--json", action="store_true", help="machine-readable output")
        p.add_argument("--output", help="write the report to this file")
        return p

    p = sub.add_parser("germ", help="print the graph document of a built-in germ")
    p.add_argument("germ_words", metavar="GERM", nargs="+", help="NAME [PARAMS...]")
    p.add_argument("--json", action="store_true")
    p.add_argument("--output")

    graph_cmd("validate", "check the structural invariants of a graph")
    graph_cmd("decorate", "multiplicities and discrepancies")

    p = graph_cmd("ample", "check or suggest an ample divisor")
    mode = p.add_mutually_exclusive_group(required=True)
    mode.add_argument("--check", action="store_true")
    mode.add_argument("--suggest", action="store_true")
    _ample_args(p)

    p = graph_cmd("separate", "blow up until the resolution is m-separating")
    p.add_argument("--m", type=int, required=True)

    p = graph_cmd("page", "first page of the spectral sequence for the m-th iterate")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--separate", action="store_true", help="m-separate the graph first")
    p.add_argument("--literal-arrows", action="store_true",
                   help="give strict-transform pieces punctured-disk topology")
    _ample_args(p)

    p = graph_cmd("invariants", "Lefschetz numbers, zeta function, Milnor number, multiplicity")
    p.add_argument("--max-m", type=int, default=12)
    p.add_argument("--zeta-order", type=int, default=20)

    p = graph_cmd("dynamics", "numeric checks of the radius-zero monodromy")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--samples", type=int, default=10000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--separate", action="store_true", help="m-separate the graph first")

    p = graph_cmd("feasibility", "search for differentials reaching a target limit")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--target", required=True, help="DEGREE:RANK pairs, e.g. '2:2,3:1'")
    p.add_argument("--separate", action="store_true", help="m-separate the graph first")
    _ample_args(p)
    return parser


def _ample_args(p):
    p.add_argument("--ample", help="comma-separated b_i in vertex order (integers or p/q)")
    p.add_argument("--scale", help="read --ample values as s*b_i/m_i for this s")


def _glue_negative_values(argv):
    """Let ``--ample -13,-13,-12`` through argparse, which would read it as an option."""
    out, argv = [], list(argv)
    i = 0
    while i < len(argv):
        if argv[i] in ("--ample", "--scale") and i + 1 < len(argv) \
                and argv[i + 1].startswith("-"):
            out.append(f"{argv[i]}={argv[i + 1]}")
            i += 2
        else:
            out.append(argv[i])
            i += 1
    return out


def run(argv=None, stdout=None, stderr=None):
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    args = parser.parse_args(_glue_negative_values(sys.argv[1:] if argv is None else argv))
    try:
        data, text = COMMANDS[args.command](args)
    except (PlanemonoError, OSError) as exc:
        if isinstance(exc, AssertionError):
            print(f"internal check failed: {exc}", file=stderr)
            return EXIT_INTERNAL
        print(f"error: {exc}", file=stderr)
        return EXIT_INVALID
    except AssertionError as exc:
        print(f"internal check failed: {exc}", file=stderr)
        return EXIT_INTERNAL
    if args.command == "germ":
        out = data
    else:
        out = dumps(data) if args.json else text + "\n"
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(out)
    else:
        stdout.write(out)
    status = EXIT_OK
    if args.command == "validate" and not data["ok"]:
        status = EXIT_INVALID
    if args.command == "dynamics" and not (data["separation"]["ok"] and data["identities"]["ok"]):
        status = EXIT_INTERNAL
    return status


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
