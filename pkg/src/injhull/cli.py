"""Command line: ``injhull generate|invariants|hull|verify``.

Exit status is 0 on success, 1 when a verification assertion fails or a
computation is refused (budget, non-Helly hull), 2 on usage, input or I/O
errors.  JSON output uses sorted keys so identical runs are byte-identical.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import generators
from .errors import BudgetExceeded, InjhullError, MetricMismatch, NotHelly
from .hull import hull_graph
from .invariants import contraction_constant, gromov_delta, morse_constant
from .metric import FiniteMetricSpace, Graph, geodesic_path, graph_metric, read_metric_csv
from .verify.corpus import Corpus, Designated, default_corpus, graph_instance, hull_instance, metric_instance
from .verify.suites import SUITES, VerifyConfig, run_all

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
# computations that ran but refused to produce an answer
_REFUSALS = (BudgetExceeded, NotHelly, MetricMismatch)


class UsageError(Exception):
    pass


# --------------------------------------------------------------------------
# argument helpers


def parse_lambda_eps(text: str) -> list[tuple[Fraction, Fraction]]:
    """``"9,0;1,0"`` -> [(9, 0), (1, 0)]; values may be fractions like ``3/2``."""
    out = []
    for part in text.split(";"):
        part = part.strip()
        if not part:
            continue
        bits = part.split(",")
        if len(bits) != 2:
            raise UsageError(f"bad lambda,eps pair {part!r}")
        try:
            lam, eps = Fraction(bits[0].strip()), Fraction(bits[1].strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise UsageError(f"bad lambda,eps pair {part!r}") from exc
        if lam < 1 or eps < 0:
            raise UsageError(f"need lambda >= 1 and eps >= 0, got {part!r}")
        out.append((lam, eps))
    return out


def parse_subset(text: str, X: FiniteMetricSpace) -> Designated:
    """``Y=0,4,8``, ``Y=geodesic:0..8`` or ``Y=all``."""
    name, sep, body = text.partition("=")
    if not sep:
        name, body = "Y", text
    name, body = name.strip() or "Y", body.strip()
    try:
        if body == "all":
            members = tuple(range(X.n))
            return Designated(name, members)
        if body.startswith("geodesic:"):
            a, dots, b = body[len("geodesic:"):].partition("..")
            if not dots:
                raise UsageError(f"geodesic subset needs 'a..b', got {body!r}")
            a, b = int(a), int(b)
            _check_points(X, (a, b))
            path = geodesic_path(X, a, b)
            return Designated(name, tuple(sorted(path)), path)
        members = tuple(sorted({int(v) for v in body.split(",") if v.strip()}))
    except ValueError as exc:
        raise UsageError(f"bad subset spec {text!r}") from exc
    if not members:
        raise UsageError(f"empty subset {text!r}")
    _check_points(X, members)
    return Designated(name, members)


def _check_points(X, pts):
    bad = [p for p in pts if not 0 <= p < X.n]
    if bad:
        raise UsageError(f"points {bad} outside 0..{X.n - 1}")


def load_input(args) -> tuple[str, FiniteMetricSpace, Graph | None]:
    """Exactly one of --input (graph text or metric CSV) and --generate."""
    if (args.input is None) == (args.generate is None):
        raise UsageError("give exactly one of --input and --generate")
    if args.generate is not None:
        kind, *params = args.generate.split()
        g = generators.generate(kind, params, args.seed)
        return args.generate, graph_metric(g), g
    try:
        text = Path(args.input).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {args.input}: {exc}") from exc
    if text.lstrip().startswith("scale"):
        X = read_metric_csv(text)
        return args.input, X, None
    g = Graph.from_text(text)
    return args.input, graph_metric(g), g


def emit(args, payload: dict, text: str | None = None):
    if args.format == "text" and text is not None:
        out = text
    else:
        out = json.dumps(payload, sort_keys=True, indent=1) + "\n"
    if args.out:
        try:
            Path(args.out).write_text(out)
        except OSError as exc:
            raise UsageError(f"cannot write {args.out}: {exc}") from exc
    else:
        sys.stdout.write(out)


# --------------------------------------------------------------------------
# commands


def cmd_generate(args) -> int:
    g = generators.generate(args.kind, args.params, args.seed)
    text = g.to_text()
    if args.out:
        try:
            Path(args.out).write_text(text)
        except OSError as exc:
            raise UsageError(f"cannot write {args.out}: {exc}") from exc
    else:
        sys.stdout.write(text)
    return EXIT_OK


def invariants_report(X: FiniteMetricSpace, subsets, pairs, slack=None, budget=None) -> dict:
    out = {"n": X.n, "scale": X.scale, "subsets": []}
    for sub in subsets:
        entry = {"name": sub.name, "members": list(sub.members),
                 "contraction": contraction_constant(X, sub.members, slack).to_json(),
                 "morse": [morse_constant(X, sub.members, lam, eps, budget).to_json() for lam, eps in pairs]}
        if len(sub.members) >= 4:
            entry["delta_Y"] = gromov_delta(X, sub.members).to_json()
        out["subsets"].append(entry)
    if X.n >= 4:
        out["delta"] = gromov_delta(X).to_json()
    else:
        out["delta"] = {"invariant": "gromov_delta", "value": 0, "scale": X.scale, "witnesses": {},
                        "vacuous": True}
    return out


def _invariants_text(rep: dict) -> str:
    lines = [f"n={rep['n']} scale={rep['scale']} delta={rep['delta']['value']}"]
    for s in rep["subsets"]:
        lines.append(f"{s['name']} = {s['members']}")
        c = s["contraction"]
        lines.append(f"  contraction D = {c['value']}  {c['witnesses']}")
        for m in s["morse"]:
            w = m["witnesses"]
            tag = "" if w["exact"] else " (lower bound)"
            lines.append(f"  M({w['lambda']},{w['eps']}) = {m['value']}{tag}")
    return "\n".join(lines) + "\n"


def cmd_invariants(args) -> int:
    _, X, _ = load_input(args)
    subsets = [parse_subset(s, X) for s in (args.subset or ["Y=all"])]
    pairs = parse_lambda_eps(args.lambda_eps)
    slack = None if args.slack is None else int(Fraction(args.slack) * X.scale)
    rep = invariants_report(X, subsets, pairs, slack, args.budget)
    emit(args, rep, _invariants_text(rep))
    return EXIT_OK


def cmd_hull(args) -> int:
    _, X, _ = load_input(args)
    H = hull_graph(X, budget=args.budget)
    payload = H.to_json()
    text = f"{H.n} forms, {H.graph.m} edges\n" + "".join(
        f"{i}: {list(f)}\n" for i, f in enumerate(H.forms))
    emit(args, payload, text)
    return EXIT_OK


def _user_corpus(args) -> Corpus:
    name, X, g = load_input(args)
    subsets = [parse_subset(s, X) for s in (args.subset or [])]
    claim = True if args.claim_helly else None
    if g is not None:
        inst = graph_instance("input", g, subsets, "input", X.n, helly_claim=claim)
    else:
        inst = metric_instance("input", X, subsets, "input", X.n, helly_claim=claim)
    insts = [inst]
    if args.with_hull:
        inst.hull_budget = args.budget
        insts.append(hull_instance(inst))
    return Corpus(insts)


def _verify_text(rep: dict) -> str:
    lines = [f"status: {rep['status']} ({rep['instances']} instances)"]
    for name, s in rep["suites"].items():
        c = s["counts"]
        lines.append(f"  {name:32s} {s['status']:8s} pass={c['pass']} fail={c['fail']} "
                     f"vacuous={c['vacuous']} soft_fail={c['soft_fail']}")
    if rep["tables"]["delta_h"]:
        lines.append("(delta, h):")
        for row in rep["tables"]["delta_h"]:
            lines.append(f"  {row['instance']:12s} delta={row['delta']} h={row['h']}")
    if rep["tables"]["contraction_morse"]:
        lines.append("(D, K9):")
        for row in rep["tables"]["contraction_morse"]:
            lines.append(f"  {row['instance']:16s} {row['subset']:10s} D={row['D']} K9={row['K_9_0']}")
    return "\n".join(lines) + "\n"


def cmd_verify(args) -> int:
    suites = None
    if args.suite:
        suites = tuple(s for part in args.suite for s in part.split(",") if s)
        unknown = [s for s in suites if s not in SUITES]
        if unknown:
            raise UsageError(f"unknown suite(s) {unknown}; choose from {', '.join(SUITES)}")
    cfg = VerifyConfig(seed=args.seed, suites=suites)
    if args.slack is not None:
        cfg.slack = int(args.slack)
    if args.budget is not None:
        cfg.morse_budget = args.budget
    if args.input is not None or args.generate is not None:
        corpus = _user_corpus(args)
    else:
        corpus = default_corpus(args.seed)
    rep = run_all(corpus, cfg)
    emit(args, rep, _verify_text(rep))
    return EXIT_FAIL if rep["status"] == "fail" else EXIT_OK


# --------------------------------------------------------------------------
# parser


def _io_flags(p, budget_default):
    p.add_argument("--input", help="graph file ('n m' then 'u v' lines) or metric CSV ('scale=Q' header)")
    p.add_argument("--generate", help='generator spec, e.g. "cycle 8" or "grid 3 3"')
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--budget", type=int, default=budget_default)
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.add_argument("--out", help="output file (default stdout)")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="injhull", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="write a generated graph")
    g.add_argument("kind", choices=sorted(generators.GENERATORS))
    g.add_argument("params", nargs="*")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out")
    g.set_defaults(func=cmd_generate)

    i = sub.add_parser("invariants", help="contraction, Morse and 4-point constants")
    _io_flags(i, 200_000)
    i.add_argument("--subset", action="append", help='"Y=0,4,8", "Y=geodesic:0..8" or "Y=all"')
    i.add_argument("--lambda-eps", default="9,0;1,0", help='pairs, e.g. "9,0;1,0"')
    i.add_argument("--slack", help="projection slack in units (default 1)")
    i.set_defaults(func=cmd_invariants)

    h = sub.add_parser("hull", help="integer injective hull graph as JSON")
    _io_flags(h, 10**7)
    h.set_defaults(func=cmd_hull)

    v = sub.add_parser("verify", help="run the verification suites")
    _io_flags(v, None)
    v.add_argument("--suite", action="append", help=f"suite name(s), comma separated: {', '.join(SUITES)}")
    v.add_argument("--subset", action="append")
    v.add_argument("--slack", type=int)
    v.add_argument("--claim-helly", action="store_true",
                   help="treat the input as Helly (checked by the helly suite)")
    v.add_argument("--with-hull", action="store_true", help="add the hull of the input to the corpus")
    v.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"injhull: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InjhullError as exc:
        err = {"error": exc.witness.kind, "message": str(exc), "witness": exc.witness.to_json()}
        print(json.dumps(err, sort_keys=True), file=sys.stderr)
        return EXIT_FAIL if isinstance(exc, _REFUSALS) else EXIT_USAGE
    except ValueError as exc:
        print(f"injhull: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
