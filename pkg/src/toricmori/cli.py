"""Command-line interface.

Fans travel between subcommands as JSON documents (see
:mod:`toricmori.document`); every subcommand reads a file argument, or
standard input when it is omitted or ``-``, so invocations chain with pipes::

    toricmori build weighted_blowup_plane | toricmori rays
    toricmori build projective_space --n 3 | toricmori threshold --divisor O1

Exit status: 0 on success, 1 when ``verify`` finds a violation, 2 on bad input.
"""

import argparse
import json
import sys
from fractions import Fraction

from .constructions import BUILDERS, LIST_PARAMS, build, corpus
from .divisor import (
    Verdict,
    global_generation,
    q_cartier_data,
    sections_count,
    top_self_intersection,
    very_ample,
)
from .document import (
    DocumentError,
    FanDocument,
    example_document,
    format_rational,
    parse_divisor,
    parse_rational,
)
from .errors import NotAmple, NotCartier, ToricError
from .fan import multiplicity, validate_fan, walls
from .harness import SUITES, expected_checks, run_suite
from .intersect import wall_degree
from .lattice import lattice_index
from .mori import (
    adjoint_report,
    contract_ray,
    mori_cone,
    nef_threshold,
    ray_reports,
)


class InputError(Exception):
    """Raised for anything the user should fix in the invocation or input."""


def _q(x):
    return format_rational(x)


def _read_document(path):
    try:
        text = sys.stdin.read() if path in (None, "-") else open(path, encoding="utf-8").read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}")
    if not text.strip():
        raise InputError("empty input; expected a fan document")
    return FanDocument.from_json(text)


def _write(text, path):
    if path in (None, "-"):
        sys.stdout.write(text)
        return
    try:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as exc:
        raise InputError(f"cannot write {path}: {exc.strerror}")


def _divisor(doc, expr, required=True):
    if expr is None:
        expr = doc.metadata.get("ample")
        if expr is None:
            if required:
                raise InputError("no --divisor given and the document marks no ample divisor")
            return None, None
    return expr, parse_divisor(expr, doc.fan, doc.divisors)


def fan_summary(doc):
    F = doc.fan
    r = validate_fan(F)
    out = {
        "name": doc.metadata.get("example", F.name),
        "rank": F.rank,
        "rays": F.n_rays,
        "max_cones": len(F.max_cones),
        "is_fan": r.is_fan,
        "complete": r.is_complete,
        "convex_support": r.is_convex_support,
        "simplicial": r.is_simplicial,
        "smooth": r.is_smooth,
        "lattice_index": lattice_index(F.rays) if F.rays else 1,
        "divisors": sorted(doc.divisors),
    }
    if r.is_fan and r.is_complete and r.is_simplicial:
        out["picard_number"] = F.n_rays - F.rank
    return out


def _report(doc, per_wall=(), per_ray=(), verdicts=(), **extra):
    rep = {
        "fan_summary": fan_summary(doc) if isinstance(doc, FanDocument) else doc,
        "per_wall": list(per_wall),
        "per_ray": list(per_ray),
        "verdicts": list(verdicts),
    }
    rep.update(extra)
    return rep


def _verdict(name, holds, detail="", ray=None):
    v = {"check": name, "holds": bool(holds), "detail": detail}
    if ray is not None and ray >= 0:
        v["ray"] = ray
    return v


# ---------------------------------------------------------------------------
# text rendering


def _cell(v):
    if v is None:
        return "-"
    if isinstance(v, bool):
        return "yes" if v else "no"
    if isinstance(v, str) and "/" in v and v.endswith("/1"):
        return v[:-2]
    if isinstance(v, (list, tuple)):
        return "(" + ",".join(_cell(x) for x in v) + ")"
    return str(v)


def _table(rows):
    if not rows:
        return ""
    keys = list(rows[0])
    cells = [keys] + [[_cell(r.get(k, "")) for k in keys] for r in rows]
    widths = [max(len(row[i]) for row in cells) for i in range(len(keys))]
    lines = ["  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip() for row in cells]
    return "\n".join(lines) + "\n"


def render_text(rep):
    out = []
    s = rep["fan_summary"]
    if "rank" in s:
        flags = [k for k in ("complete", "convex_support", "simplicial", "smooth") if s.get(k)]
        out.append(f"{s['name'] or 'fan'}: rank {s['rank']}, {s['rays']} rays, "
                   f"{s['max_cones']} maximal cones" + (f" [{', '.join(flags)}]" if flags else ""))
    else:
        out.append(f"{s['name']}: {s['entries']} entries")
    for key in sorted(k for k in rep if k not in ("fan_summary", "per_wall", "per_ray", "verdicts")):
        out.append(f"{key}: {_cell(rep[key])}")
    if rep["per_wall"]:
        out.append("")
        out.append(_table(rep["per_wall"]).rstrip())
    if rep["per_ray"]:
        out.append("")
        out.append(_table(rep["per_ray"]).rstrip())
    if rep["verdicts"]:
        out.append("")
        for v in rep["verdicts"]:
            mark = "PASS" if v["holds"] else "FAIL"
            where = f" ray {v['ray']}" if "ray" in v else ""
            detail = f"  ({v['detail']})" if v["detail"] else ""
            out.append(f"{mark} {v['check']}{where}{detail}")
    return "\n".join(out) + "\n"


def emit(rep, fmt):
    if fmt == "json":
        sys.stdout.write(json.dumps(rep, indent=2, sort_keys=True) + "\n")
    else:
        sys.stdout.write(render_text(rep))


# ---------------------------------------------------------------------------
# subcommands


def _param_value(key, text):
    if key in LIST_PARAMS:
        try:
            return [int(x) for x in text.split(",") if x.strip()]
        except ValueError:
            raise InputError(f"--{key} expects a comma-separated list of integers")
    try:
        return int(text)
    except ValueError:
        raise InputError(f"--{key} expects an integer, got {text!r}")


def _build_params(pairs, extra):
    params = {}
    for p in pairs or []:
        if "=" not in p:
            raise InputError(f"--param expects k=v, got {p!r}")
        k, v = p.split("=", 1)
        params[k.strip()] = v.strip()
    it = iter(extra)
    for tok in it:
        if not tok.startswith("--"):
            raise InputError(f"unexpected argument {tok!r}")
        key = tok[2:]
        if "=" in key:
            key, v = key.split("=", 1)
        else:
            v = next(it, None)
            if v is None:
                raise InputError(f"{tok} needs a value")
        params[key.replace("-", "_")] = v
    return {k: _param_value(k, v) for k, v in params.items()}


def cmd_build(args, extra):
    params = _build_params(args.param, extra)
    ex = build(args.name, **params)
    _write(example_document(ex).to_json(), args.output)
    return 0


def cmd_validate(args):
    doc = _read_document(args.fan)
    r = validate_fan(doc.fan)
    verdicts = [_verdict("is_fan", r.is_fan, "; ".join(r.issues))]
    emit(_report(doc, verdicts=verdicts), args.format)
    return 0 if r.is_fan else 1


def _wall_rows(doc, D=None, data=None):
    F = doc.fan
    simplicial = F.is_simplicial
    rows = []
    for w in walls(F):
        row = {
            "wall": w.label(),
            "rays": sorted(w.wall),
            "cones": list(w.cones),
            "interior": w.interior,
        }
        if simplicial:
            row["multiplicity"] = multiplicity(F, w.wall)
        if D is not None:
            row["degree"] = _q(wall_degree(F, D, w, data)) if w.interior else None
        rows.append(row)
    return rows


def cmd_walls(args):
    doc = _read_document(args.fan)
    emit(_report(doc, per_wall=_wall_rows(doc)), args.format)
    return 0


def cmd_intersect(args):
    doc = _read_document(args.fan)
    name, D = _divisor(doc, args.divisor or "K")
    data = q_cartier_data(doc.fan, D)
    emit(_report(doc, per_wall=_wall_rows(doc, D, data), divisor=name), args.format)
    return 0


def _ray_rows(F, delta=None):
    rows = []
    for rep in ray_reports(F, delta):
        R, p = rep.ray, rep.profile
        row = {
            "ray": R.index,
            "class": [_q(x) for x in R.generator.pairings],
            "walls": [w.label() for w in R.member_walls],
            "length": _q(rep.length),
            "alpha": p.alpha,
            "beta": p.beta,
            "kind": p.kind,
            "dim_A": p.dimA,
            "dim_B": p.dimB,
            "dim_F": p.dimF,
        }
        if delta is not None:
            row["length_with_boundary"] = _q(rep.length_with_boundary)
        if rep.classification is not None:
            c = rep.classification
            row["weighted_blowup"] = c.is_weighted_blowup
        rows.append(row)
    return rows


def _delta(doc, text):
    if text is None:
        return None
    if text in doc.divisors:
        return doc.divisors[text]
    try:
        values = [parse_rational(x.strip(), strict=False) for x in text.split(",")]
    except DocumentError as exc:
        raise InputError(str(exc))
    if len(values) != doc.fan.n_rays:
        raise InputError(f"--delta needs {doc.fan.n_rays} coefficients")
    if any(not (0 <= x <= 1) for x in values):
        raise InputError("boundary coefficients must lie in [0, 1]")
    return values


def cmd_rays(args):
    doc = _read_document(args.fan)
    rows = _ray_rows(doc.fan, _delta(doc, args.delta))
    emit(_report(doc, per_ray=rows), args.format)
    return 0


def cmd_contract(args):
    doc = _read_document(args.fan)
    rays = mori_cone(doc.fan)
    if not 0 <= args.ray < len(rays):
        raise InputError(f"--ray must be between 0 and {len(rays) - 1}")
    c = contract_ray(doc.fan, rays[args.ray])
    W = c.target
    meta = {"contracted_from": doc.metadata.get("example", doc.fan.name), "ray": args.ray,
            "kind": c.profile.kind}
    out = FanDocument(W, {}, meta).to_json()
    if args.output in (None, "-"):
        _write(out, None)
        return 0
    _write(out, args.output)
    row = {
        "ray": args.ray,
        "kind": c.profile.kind,
        "target_rank": W.rank,
        "target_rays": W.n_rays,
        "merged": [list(m) for m in c.merged],
    }
    emit(_report(doc, per_ray=[row], output=args.output), args.format)
    return 0


def cmd_adjoint(args):
    doc = _read_document(args.fan)
    name, D = _divisor(doc, args.divisor)
    coeff = Fraction(doc.fan.rank - 1) if args.coeff is None else _rational_arg(args.coeff)
    rep = adjoint_report(doc.fan, D, coeff)
    verdicts = [_verdict("pe_iff_nef", rep.consistent, f"coefficient {_q(coeff)}")]
    emit(
        _report(doc, verdicts=verdicts, divisor=name, coefficient=_q(coeff),
                pe=rep.pe, nef=rep.nef, sections=rep.sections, consistent=rep.consistent),
        args.format,
    )
    return 0


def cmd_threshold(args):
    doc = _read_document(args.fan)
    name, D = _divisor(doc, args.divisor)
    emit(_report(doc, divisor=name, threshold=_q(nef_threshold(doc.fan, D))), args.format)
    return 0


def cmd_sections(args):
    doc = _read_document(args.fan)
    name, D = _divisor(doc, args.divisor)
    F = doc.fan
    extra = {"divisor": name, "sections": sections_count(F, D)}
    if args.volume:
        extra["volume"] = _q(top_self_intersection(F, D))
    if args.generation:
        extra["globally_generated"] = str(global_generation(F, D, args.search_bound))
        try:
            extra["very_ample"] = str(very_ample(F, D, args.search_bound))
        except (NotCartier, NotAmple) as exc:
            # very ample divisors are Cartier and ample by definition
            extra["very_ample"] = str(Verdict.NO)
            extra["very_ample_reason"] = str(exc)
    emit(_report(doc, **extra), args.format)
    return 0


def _rebuilt_example(doc):
    """The builder output matching a document's metadata, when it still agrees."""
    name, params = doc.metadata.get("example"), doc.metadata.get("params")
    if name not in BUILDERS or not isinstance(params, dict):
        return None
    try:
        ex = build(name, **params)
    except ToricError:
        return None
    return ex if ex.fan == doc.fan else None


def cmd_verify(args):
    if args.corpus:
        entries = [(ex.label, example_document(ex), ex) for ex in corpus()]
    else:
        doc = _read_document(args.fan)
        entries = [(doc.metadata.get("example", "fan"), doc, _rebuilt_example(doc))]
    ok = True
    verdicts = []
    for label, doc, ex in entries:
        ample = None
        if doc.metadata.get("ample") in doc.divisors:
            ample = doc.divisors[doc.metadata["ample"]]
        checks = run_suite(doc.fan, args.suite, ample, _delta(doc, args.delta))
        if ex is not None and args.suite == "all":
            checks += expected_checks(ex)
        for c in checks:
            v = _verdict(c.name, c.holds, c.detail, c.ray)
            if args.corpus:
                v["example"] = label
            verdicts.append(v)
            ok = ok and c.holds
    head = entries[0][1]
    extra = {"suite": args.suite, "ok": ok}
    if args.corpus:
        head = {"name": "corpus", "entries": len(entries)}
        if not args.verbose:
            verdicts = [v for v in verdicts if not v["holds"]]
    emit(_report(head, verdicts=verdicts, **extra), args.format)
    return 0 if ok else 1


def _rational_arg(text):
    try:
        return parse_rational(text, strict=False)
    except DocumentError as exc:
        raise InputError(str(exc))


# ---------------------------------------------------------------------------
# argument parsing


def make_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "text"), default="text")

    def with_fan(sub, name, help_text, divisor=False):
        p = sub.add_parser(name, parents=[common], help=help_text, description=help_text)
        p.add_argument("fan", nargs="?", default="-", help="fan document (default: stdin)")
        if divisor:
            p.add_argument("--divisor", help="divisor name or expression, e.g. K+2*D")
        return p

    parser = argparse.ArgumentParser(prog="toricmori", description="Exact computations on toric fans.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="write a named example as a fan document")
    p.add_argument("name", help=f"one of: {', '.join(sorted(BUILDERS))}")
    p.add_argument("--param", action="append", metavar="K=V", help="builder parameter")
    p.add_argument("-o", "--output", default="-")

    with_fan(sub, "validate", "check the fan axioms")
    with_fan(sub, "walls", "list walls and their adjacent cones")
    with_fan(sub, "intersect", "degrees of a divisor on every wall", divisor=True)
    p = with_fan(sub, "rays", "extremal rays with lengths and contraction profiles")
    p.add_argument("--delta", help="boundary coefficients (list or divisor name)")
    p = with_fan(sub, "contract", "contract an extremal ray")
    p.add_argument("--ray", type=int, required=True)
    p.add_argument("-o", "--output", default="-")
    p = with_fan(sub, "adjoint", "pseudo-effectivity and nefness of K + cD", divisor=True)
    p.add_argument("--coeff", help="coefficient c (default n-1)")
    with_fan(sub, "threshold", "nef threshold of an ample Cartier divisor", divisor=True)
    p = with_fan(sub, "sections", "global sections of a divisor", divisor=True)
    p.add_argument("--volume", action="store_true", help="also report D^n")
    p.add_argument("--generation", action="store_true",
                   help="also test global generation and very ampleness")
    p.add_argument("--search-bound", type=int, default=None)
    p = with_fan(sub, "verify", "run the theorem checks and invariants")
    p.add_argument("--suite", choices=SUITES, default="all")
    p.add_argument("--delta", help="boundary coefficients for the length checks")
    p.add_argument("--corpus", action="store_true", help="verify the shipped corpus instead")
    p.add_argument("-v", "--verbose", action="store_true", help="list passing checks too")
    return parser


COMMANDS = {
    "validate": cmd_validate,
    "walls": cmd_walls,
    "intersect": cmd_intersect,
    "rays": cmd_rays,
    "contract": cmd_contract,
    "adjoint": cmd_adjoint,
    "threshold": cmd_threshold,
    "sections": cmd_sections,
    "verify": cmd_verify,
}


def main(argv=None):
    parser = make_parser()
    args, extra = parser.parse_known_args(argv)
    if extra and args.command != "build":
        parser.error(f"unrecognized arguments: {' '.join(extra)}")
    try:
        if args.command == "build":
            return cmd_build(args, extra)
        return COMMANDS[args.command](args)
    except (InputError, ToricError) as exc:
        print(f"toricmori: error: {exc}", file=sys.stderr)
        return 2


def run(argv=None):
    """Entry point for console scripts: exit with :func:`main`'s status."""
    sys.exit(main(argv))


if __name__ == "__main__":
    run()
