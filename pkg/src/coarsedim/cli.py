"""Command-line entry point: ``coarsedim <command> ...``.

Every command prints one JSON report (or writes it atomically to ``--out``)
with the command and configuration echoed, the seed, a result payload, an
explicit ``ok`` flag and a ``timing`` field.  Exit status: 0 when ok, 1 on a
domain failure, 2 on malformed flags or input files.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
import tempfile
import time
from fractions import Fraction

from .coarse import (
    bornologous_profile,
    check_sandwich,
    closeness,
    distance_distortion,
    identity_map,
    projection_map,
    section_map,
    SampledMap,
)
from .covers import (
    chain_components,
    cover_from_json,
    coset_cover,
    interval_cover_Q,
    ultrametric_cover,
    verify_cover,
)
from .dyadic_graph import MetricGraph, build_graph, compare_metrics, graph_distance
from .exact import DomainError, MalformedInput, format_rational, norm_value_to_json, parse_rational
from .groups import DyadicRationals, Integers, Pruefer, RationalsModZ, fractional_part
from .norms import (
    InducedNorm,
    PNorm,
    QNorm,
    QuotientNorm,
    dyadic_weights,
    norm_from_json,
    weights_from_json,
)
from .samples import as_points, sample_from_json
from .suites import SUITES, run_suite

INTERVAL_MAX_SCALE = 8


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _rational(text: str) -> Fraction:
    try:
        return parse_rational(text)
    except MalformedInput as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _positive(text: str) -> Fraction:
    q = _rational(text)
    if q <= 0:
        raise argparse.ArgumentTypeError(f"{text} must be positive")
    return q


def _load_json(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise MalformedInput(f"cannot read {path}: {exc}") from None


def write_atomic(path: str, text: str):
    folder = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=folder, prefix=".tmp-", suffix=".json")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _dump(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


# ---------------------------------------------------------------------------
# commands; each returns (ok, result)
# ---------------------------------------------------------------------------

def cmd_norm(args):
    if args.space == "Q":
        norm = QNorm()
    elif args.space == "QmodZ":
        norm = QuotientNorm()
    elif args.space == "Qp":
        if args.p is None:
            raise UsageError("--space Qp needs --p")
        norm = PNorm(args.p)
    elif args.weights:
        norm = InducedNorm(weights_from_json(_load_json(args.weights), DyadicRationals(args.p or 2)))
    else:
        norm = InducedNorm(dyadic_weights(args.p or 2))
    x = fractional_part(args.value) if args.space == "QmodZ" else args.value
    return True, {"norm": norm.to_json(), "x": format_rational(Fraction(x)), "value": norm_value_to_json(norm(x))}


def _coset_weight(args):
    if args.group == "QmodZ":
        G = RationalsModZ()
        default = QuotientNorm()
    else:
        G = Pruefer(args.p or 2)
        default = QuotientNorm(G)
    if args.weights:
        obj = _load_json(args.weights)
        if isinstance(obj, dict) and "norm" in obj:
            return G, norm_from_json(obj)
        return G, weights_from_json(obj, G)
    return G, default


def cmd_cover_build(args):
    d = args.scale
    if args.kind == "interval":
        if d > INTERVAL_MAX_SCALE:
            raise UsageError(
                f"interval cover refused for d = {format_rational(d)} > {INTERVAL_MAX_SCALE}: "
                "N = lcm(1..M) with ln M >= d grows doubly exponentially in d")
        cover = interval_cover_Q(d)
    elif args.kind == "ultrametric":
        cover = ultrametric_cover(args.p or 2, d)
    else:
        G, weight = _coset_weight(args)
        cover = coset_cover(G, weight, d, args.cap)
    return True, cover.to_json()


def cmd_cover_verify(args):
    obj = _load_json(args.cover)
    if "result" in obj and isinstance(obj["result"], dict):
        obj = obj["result"]
    cover = cover_from_json(obj)
    sample = sample_from_json(_load_json(args.sample_spec))
    report = verify_cover(cover, sample, workers=args.workers)
    return report.ok, {"cover": cover.to_json(), "verification": report.to_json()}


def cmd_lower_bound(args):
    if args.range < 1:
        raise UsageError("--range must be at least 1")
    comps = chain_components(list(range(args.range + 1)), QNorm(Integers()), args.scale, workers=args.workers)
    return True, comps.to_json()


def _maps(name: str) -> tuple[SampledMap, SampledMap]:
    if name == "p_after_i":
        i, p = section_map(), projection_map()
        return SampledMap(lambda x: p(i(x)), QuotientNorm(), QuotientNorm(), "p∘i"), identity_map(QuotientNorm())
    i, p = section_map(), projection_map()
    return SampledMap(lambda x: i(p(x)), QNorm(), QNorm(), "i∘p"), identity_map(QNorm())


def _reduce_mod_one(sample) -> list:
    return sorted({fractional_part(Fraction(x)) for x in as_points(sample)})


def cmd_coarse_check(args):
    sample = sample_from_json(_load_json(args.sample_spec))
    kind = args.kind
    if kind in ("sandwich-q", "sandwich-quotient", "sandwich-padic"):
        name = {"sandwich-q": "qnorm_ln", "sandwich-quotient": "quotient_thirds", "sandwich-padic": "padic_ln"}[kind]
        if name == "padic_ln" and args.p is None:
            raise UsageError("sandwich-padic needs --p")
        bad = check_sandwich(name, sample, args.p)
        return not bad, {"violations": bad, "n_violations": len(bad)}
    if kind == "distortion":
        bad = distance_distortion(sample, args.p or 2)
        return not bad, {"violations": bad, "n_violations": len(bad)}
    if kind == "profile":
        f = section_map() if args.map == "section" else projection_map()
        if isinstance(f.domain_norm, QuotientNorm):
            sample = _reduce_mod_one(sample)
        radii = [parse_rational(r) for r in args.radii.split(",")]
        prof = bornologous_profile(f, sample, radii)
        return prof.is_monotone(), {"map": f.name, "profile": prof.to_json(), "monotone": prof.is_monotone()}
    f, g = _maps(args.pair)
    if isinstance(f.domain_norm, QuotientNorm):
        sample = _reduce_mod_one(sample)
    return True, {"maps": [f.name, g.name], "sup_distance": norm_value_to_json(closeness(f, g, sample))}


def cmd_graph_build(args):
    G = build_graph(args.window, args.depth)
    write_atomic(args.graph_out, _dump(G.to_json()))
    return True, {"graph_file": args.graph_out, "vertices": len(G.adjacency), "edges": len(G.edges())}


def _load_graph(path: str) -> MetricGraph:
    return MetricGraph.from_json(_load_json(path))


def cmd_graph_dist(args):
    G = _load_graph(args.graph)
    return True, {"from": format_rational(args.x), "to": format_rational(args.y),
                  "distance": graph_distance(G, args.x, args.y)}


def cmd_graph_compare(args):
    G = _load_graph(args.graph)
    return True, compare_metrics(G, window=args.window).to_json()


def cmd_suite(args):
    report = run_suite(args.name, seed=args.seed)
    return report["ok"], report


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="coarsedim", description="Proper group norms, cover witnesses and metric checks.")
    ap.add_argument("--seed", type=int, default=0, help="seed for randomized samples (default 0)")
    ap.add_argument("--out", help="write the report here (atomically) instead of stdout")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("norm", help="evaluate a norm at one element")
    p.add_argument("--space", choices=["Q", "QmodZ", "Qp", "induced"], required=True)
    p.add_argument("--p", type=int)
    p.add_argument("--weights", help="weight file: JSON list of {gen, w}")
    p.add_argument("--value", type=_rational, required=True)
    p.set_defaults(func=cmd_norm)

    cover = sub.add_parser("cover", help="build or verify cover families")
    csub = cover.add_subparsers(dest="action", required=True, parser_class=_Parser)
    b = csub.add_parser("build")
    b.add_argument("--kind", choices=["coset", "interval", "ultrametric"], required=True)
    b.add_argument("--scale", type=_positive, required=True)
    b.add_argument("--p", type=int)
    b.add_argument("--group", choices=["QmodZ", "Pruefer"], default="QmodZ")
    b.add_argument("--weights", help="weight or norm descriptor for coset covers")
    b.add_argument("--cap", type=int, default=10**5)
    b.set_defaults(func=cmd_cover_build)
    v = csub.add_parser("verify")
    v.add_argument("--cover", required=True)
    v.add_argument("--sample-spec", required=True)
    v.add_argument("--workers", type=int)
    v.set_defaults(func=cmd_cover_verify)

    lb = sub.add_parser("lower-bound", help="chain components of Z under ||.||_Q")
    lb.add_argument("--space", choices=["Z"], default="Z")
    lb.add_argument("--scale", type=_positive, required=True)
    lb.add_argument("--range", type=int, required=True)
    lb.add_argument("--workers", type=int)
    lb.set_defaults(func=cmd_lower_bound)

    cc = sub.add_parser("coarse-check", help="sandwich inequalities, profiles, closeness")
    cc.add_argument("--kind", required=True, choices=[
        "sandwich-q", "sandwich-quotient", "sandwich-padic", "distortion", "profile", "closeness"])
    cc.add_argument("--sample-spec", required=True)
    cc.add_argument("--p", type=int)
    cc.add_argument("--map", choices=["section", "projection"], default="section")
    cc.add_argument("--radii", default="1,2,3,4")
    cc.add_argument("--pair", choices=["p_after_i", "i_after_p"], default="p_after_i")
    cc.set_defaults(func=cmd_coarse_check)

    g = sub.add_parser("graph", help="the dyadic metric graph")
    gsub = g.add_subparsers(dest="action", required=True, parser_class=_Parser)
    gb = gsub.add_parser("build")
    gb.add_argument("--window", type=int, required=True)
    gb.add_argument("--depth", type=int, required=True)
    gb.add_argument("--out", dest="graph_out", required=True)
    gb.set_defaults(func=cmd_graph_build)
    gd = gsub.add_parser("dist")
    gd.add_argument("--graph", required=True)
    gd.add_argument("--from", dest="x", type=_rational, required=True)
    gd.add_argument("--to", dest="y", type=_rational, required=True)
    gd.set_defaults(func=cmd_graph_dist)
    gc = gsub.add_parser("compare")
    gc.add_argument("--graph", required=True)
    gc.add_argument("--window", type=_rational)
    gc.set_defaults(func=cmd_graph_compare)

    s = sub.add_parser("suite", help="run a bundled check battery")
    s.add_argument("name", choices=SUITES)
    s.set_defaults(func=cmd_suite)
    return ap


def _config(args) -> dict:
    skip = {"func", "out", "seed", "command", "action"}
    out = {}
    for k, v in sorted(vars(args).items()):
        if k in skip:
            continue
        out[k] = format_rational(v) if isinstance(v, Fraction) else v
    return out


_RATIONAL_FLAGS = {"--value", "--from", "--to", "--scale", "--window"}
_NEGATIVE_RATIONAL = re.compile(r"^-\d+(/\d+)?$")


def _join_negative_values(argv: list[str]) -> list[str]:
    # argparse reads "-3/4" as an option; glue it to its flag as --value=-3/4
    out, i = [], 0
    while i < len(argv):
        if argv[i] in _RATIONAL_FLAGS and i + 1 < len(argv) and _NEGATIVE_RATIONAL.match(argv[i + 1]):
            out.append(f"{argv[i]}={argv[i + 1]}")
            i += 2
        else:
            out.append(argv[i])
            i += 1
    return out


def main(argv=None) -> int:
    argv = _join_negative_values(sys.argv[1:] if argv is None else list(argv))
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return 2
    command = args.command + (f" {args.action}" if getattr(args, "action", None) else "")
    report = {"command": command, "config": _config(args), "seed": args.seed}
    t0 = time.perf_counter()
    status = 0
    try:
        ok, result = args.func(args)
        report["result"] = result
        if args.func is cmd_norm:
            report["value"] = result["value"]
        report["ok"] = bool(ok)
        status = 0 if ok else 1
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return 2
    except MalformedInput as exc:
        print(f"coarsedim: {exc}", file=sys.stderr)
        return 2
    except DomainError as exc:
        report["ok"] = False
        report["error"] = {"type": type(exc).__name__, "message": str(exc)}
        status = 1
    report["timing"] = {"seconds": round(time.perf_counter() - t0, 6)}
    text = _dump(report)
    if args.out:
        write_atomic(args.out, text)
    else:
        sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
