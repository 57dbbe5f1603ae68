"""Batch front door: parse declarative inputs, dispatch, emit canonical output.

Exit codes: 0 success, 2 precondition or parse error, 3 budget exceeded,
4 internal consistency failure.  Output is deterministic: identical inputs
produce byte-identical documents regardless of worker count.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import tempfile
from concurrent.futures import ThreadPoolExecutor

from . import __version__
from .cibridge import adjunction_check, bgg_h, ext_oracle, v_r_pipeline
from .dgmodules import homology_dims
from .errors import (
    BudgetError,
    DGSupportError,
    InputError,
    InternalCheckError,
    ParseError,
    PreconditionError,
)
from .inputfmt import Workspace, load_document, module_text, serialize_module
from .nilpotence import nilpotence_search
from .support import (
    DEFAULT_POINT_BUDGET,
    VarietySet,
    realize,
    support_contains,
    support_points,
)

FIXTURE_ENV = "DGSUPPORT_FIXTURE_DIR"

CONTAINMENT_NOTE = (
    "support containment implies thick-subcategory membership for perfect DG "
    "modules over the graded polynomial ring (Hopkins-type classification); "
    "the verdict is at extension level e={e} and sees only points rational there."
)
EXTERIOR_NOTE = (
    "the support of the twisted tensor module classifies thick subcategories "
    "of finite DG modules over the exterior algebra (Hopkins-type theorem, "
    "exterior case), at extension level e={e}."
)
CI_NOTE = (
    "coordinates are the degree-2 central generators th_1..th_r acting on "
    "Ext; support containment here implies thick-subcategory membership in "
    "the bounded derived category of the complete intersection (Hopkins-type "
    "theorem, artinian ci case), at extension level e={e}."
)


def _parse_field(text: str | None) -> tuple[int | None, int]:
    if not text:
        return None, 1
    parts = text.split(",")
    if len(parts) == 1:
        return int(parts[0]), 1
    if len(parts) == 2:
        return int(parts[0]), int(parts[1])
    raise ParseError(f"--field must be 'p' or 'p,e', got {text!r}")


def _parse_window(text: str | None) -> tuple[int, int] | None:
    if not text:
        return None
    try:
        lo, hi = text.split(":")
        return int(lo), int(hi)
    except ValueError:
        raise ParseError(f"--window must be 'lo:hi', got {text!r}") from None


def _resolve_input(path: str) -> str:
    if os.path.exists(path):
        return path
    fixture_dir = os.environ.get(FIXTURE_ENV)
    if fixture_dir:
        candidate = os.path.join(fixture_dir, path)
        if os.path.exists(candidate):
            return candidate
    raise InputError(f"input file not found: {path}")


def _variety_json(v: VarietySet) -> dict:
    return v.to_json_dict()


def run_job(ws: Workspace, job: dict, defaults: dict) -> tuple[str, str, dict]:
    """Execute one job; returns (title, text body, json body)."""
    command = str(job["command"])
    e = int(job.get("e", defaults.get("e", 1)))
    budget = int(job.get("budget", defaults.get("budget", DEFAULT_POINT_BUDGET)))
    nmax = int(job.get("nmax", defaults.get("nmax", 8)))
    workers = int(defaults.get("workers", 1))

    if command == "support":
        name = str(job["module"])
        v = support_points(ws.module(name), e, budget, workers)
        return (f"support module={name} e={e}", v.to_text(), _variety_json(v))

    if command == "compare":
        left, right = str(job["left"]), str(job["right"])
        verdict = support_contains(ws.module(left), ws.module(right), e, budget, workers)
        lines = [f"left {left}", f"right {right}", f"verdict {verdict}"]
        if verdict.contained:
            lines.append("conclusion " + CONTAINMENT_NOTE.format(e=e))
        body = "\n".join(lines) + "\n"
        jbody = {
            "left": left,
            "right": right,
            "contained": verdict.contained,
            "witness": list(verdict.witness) if verdict.witness else None,
            "e": e,
        }
        return (f"compare left={left} right={right} e={e}", body, jbody)

    if command == "realize":
        name = str(job["ideal"])
        module = realize(ws.ideal(name), ws.ring)
        return (
            f"realize ideal={name}",
            module_text(module),
            serialize_module(module),
        )

    if command == "bgg":
        name = str(job["lambdamodule"])
        module = bgg_h(ws.lambdamodule(name))
        v = support_points(module, e, budget, workers)
        body = module_text(module) + v.to_text() + EXTERIOR_NOTE.format(e=e) + "\n"
        jbody = {"module": serialize_module(module), "support": _variety_json(v)}
        return (f"bgg lambdamodule={name} e={e}", body, jbody)

    if command == "pipeline":
        name = str(job["rmodule"])
        m = ws.rmodule(name)
        v = v_r_pipeline(m, e, budget, workers)
        adj = adjunction_check(m, nmax)
        if not adj.ok:
            raise InternalCheckError(
                f"adjunction dimensions disagree for {name}: {adj.message()}"
            )
        lines = [v.to_text().rstrip("\n")]
        lines.append(
            "adjunction ok over degrees "
            f"[{adj.lo},{adj.hi}]: "
            + " ".join(f"{n}:{adj.ext_dims[n]}" for n in sorted(adj.ext_dims))
        )
        lines.append(CI_NOTE.format(e=e))
        jbody = {
            "support": _variety_json(v),
            "adjunction": {str(n): adj.ext_dims[n] for n in sorted(adj.ext_dims)},
        }
        return (f"pipeline rmodule={name} e={e} nmax={nmax}", "\n".join(lines) + "\n", jbody)

    if command == "ext":
        name = str(job["rmodule"])
        dims = ext_oracle(ws.ci, ws.rmodule(name), nmax)
        body = "ext dims " + " ".join(str(d) for d in dims) + "\n"
        return (f"ext rmodule={name} nmax={nmax}", body, {"dims": dims})

    if command == "nilpotence":
        fname = str(job["morphism"])
        gname = str(job["module"])
        rank_abort = int(job.get("rank_abort", defaults.get("rank_abort", 4096)))
        override = bool(job.get("override_hypothesis", False))
        report = nilpotence_search(
            ws.morphism(fname),
            ws.module(gname),
            n_max=nmax,
            e=e,
            rank_abort=rank_abort,
            budget=budget,
            workers=workers,
            override_hypothesis=override,
        )
        lines = [f"ranks " + " ".join(str(r) for r in report.ranks)]
        lines.append(
            "hypothesis checked at "
            f"{len(report.hypothesis_points)} points"
            + (" plus origin" if report.hypothesis_origin_checked else "")
        )
        if report.n_found is None:
            lines.append(f"exhausted at n_max={report.n_max}: inconclusive")
            jwitness = None
        else:
            lines.append(f"vanishes at n={report.n_found}")
            lines.append("witness generators " + " ".join(
                f"{n}:{d}" for n, d in report.witness_module.generators
            ))
            lines.append("witness [" + ", ".join(str(p) for p in report.witness) + "]")
            lines.append("cycle [" + ", ".join(str(p) for p in report.cycle) + "]")
            if not report.verify_witness():
                raise InternalCheckError("witness boundary re-check failed")
            lines.append("witness re-check: d(witness) = cycle")
            jwitness = [str(p) for p in report.witness]
        jbody = {
            "n_found": report.n_found,
            "n_max": report.n_max,
            "ranks": list(report.ranks),
            "witness": jwitness,
            "cycle": [str(p) for p in report.cycle] if report.cycle else None,
            # the hom complex itself, so the boundary identity can be replayed
            # from this document alone
            "witness_module": (
                serialize_module(report.witness_module) if report.witness_module else None
            ),
        }
        return (
            f"nilpotence morphism={fname} module={gname} nmax={nmax}",
            "\n".join(lines) + "\n",
            jbody,
        )

    if command == "validate":
        targets = []
        if "object" in job:
            wanted = str(job["object"])
            targets = [(kind, name) for kind, name in ws.object_names() if name == wanted]
            if not targets:
                raise InputError(f"no object named {wanted!r}")
        else:
            targets = ws.object_names()
        lines = []
        failures = []
        window = job.get("window") or defaults.get("window")
        for kind, name in targets:
            try:
                if kind == "modules":
                    rep = ws.module(name).validate()
                    ok, msg = rep.ok, rep.message()
                elif kind == "morphisms":
                    rep = ws.morphism(name).validate()
                    ok, msg = rep.ok, rep.message()
                elif kind == "rmodules":
                    problems = ws.rmodule(name).validate()
                    ok, msg = not problems, ("ok" if not problems else problems[0])
                else:
                    problems = ws.lambdamodule(name).validate()
                    ok, msg = not problems, ("ok" if not problems else problems[0])
            except (InputError, ParseError) as ex:
                ok, msg = False, str(ex)
            lines.append(f"{kind[:-1]} {name}: {msg}")
            if not ok:
                failures.append(f"{kind[:-1]} {name}: {msg}")
            elif kind == "modules" and window:
                table = homology_dims(ws.module(name), window[0], window[1])
                lines.append(f"  homology {table}")
        if failures:
            raise PreconditionError("; ".join(failures))
        return ("validate", "\n".join(lines) + "\n", {"objects": lines})

    raise InputError(f"unknown command {command!r}")


def render_text(header: dict, results: list[tuple[str, str, dict]]) -> str:
    lines = [
        f"dgsupport {header['version']}",
        f"input sha256={header['input_sha256']}",
        f"field {header['field']}",
        f"bounds {header['bounds']}",
        f"jobs {len(results)}",
    ]
    for idx, (title, body, _) in enumerate(results, start=1):
        lines.append(f"-- job {idx}: {title}")
        lines.append(body.rstrip("\n"))
    return "\n".join(lines) + "\n"


def render_json(header: dict, results: list[tuple[str, str, dict]]) -> str:
    doc = {
        "version": header["version"],
        "input_sha256": header["input_sha256"],
        "field": header["field"],
        "bounds": header["bounds"],
        "jobs": [
            {"title": title, "result": jbody} for title, _, jbody in results
        ],
    }
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def _write_output(text: str, out_path: str | None) -> None:
    if out_path is None:
        sys.stdout.write(text)
        return
    directory = os.path.dirname(os.path.abspath(out_path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".dgsupport-")
    try:
        with os.fdopen(fd, "w") as handle:
            handle.write(text)
        os.replace(tmp, out_path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dgsupport",
        description=(
            "exact support varieties for perfect DG modules over graded "
            "polynomial rings and complexes over artinian complete intersections"
        ),
    )
    parser.add_argument("--version", action="version", version=f"dgsupport {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("input", help="YAML input document")
        p.add_argument("--field", help="p or p,e; e sets the enumeration extension level")
        p.add_argument("--window", help="lo:hi degree window for homology display")
        p.add_argument("--nmax", type=int, help="homological truncation bound")
        p.add_argument("--budget", type=int, default=DEFAULT_POINT_BUDGET,
                       help="maximum number of enumerated points")
        p.add_argument("--rank-abort", type=int, default=4096,
                       help="abort threshold for tensor-power ranks")
        p.add_argument("--workers", type=int, default=1, help="worker pool size")
        p.add_argument("--out", help="output path (written atomically)")
        p.add_argument("--format", choices=("text", "json"), default="text")

    for name, extra in (
        ("run", ()),
        ("support", ("--module",)),
        ("compare", ("--left", "--right")),
        ("realize", ("--ideal",)),
        ("bgg", ("--lambdamodule",)),
        ("pipeline", ("--rmodule",)),
        ("ext", ("--rmodule",)),
        ("nilpotence", ("--morphism", "--module")),
        ("validate", ("--object",)),
    ):
        p = sub.add_parser(name)
        common(p)
        for flag in extra:
            required = name != "validate"
            p.add_argument(flag, required=required)

    return parser


def _main(argv: list[str] | None) -> int:
    args = build_parser().parse_args(argv)
    path = _resolve_input(args.input)
    with open(path, "rb") as handle:
        raw = handle.read()
    digest = hashlib.sha256(raw).hexdigest()
    ws = Workspace(load_document(raw.decode("utf-8")))

    p_flag, e_flag = _parse_field(args.field)
    if p_flag is not None:
        declared = []
        if "ring" in ws.doc:
            declared.append(int(ws.doc["ring"]["p"]))
        if "ci" in ws.doc:
            declared.append(int(ws.doc["ci"]["p"]))
        if declared and p_flag not in declared:
            raise InputError(
                f"--field p={p_flag} does not match the document (p in {declared})"
            )
    defaults = {
        "e": e_flag,
        "budget": args.budget,
        "workers": max(1, args.workers),
        "rank_abort": args.rank_abort,
        "window": _parse_window(args.window),
    }
    if args.nmax is not None:
        defaults["nmax"] = args.nmax

    if args.command == "run":
        jobs = ws.jobs()
    else:
        job: dict = {"command": args.command}
        for key in ("module", "left", "right", "ideal", "lambdamodule", "rmodule",
                    "morphism", "object"):
            value = getattr(args, key, None)
            if value is not None:
                job[key] = value
        if args.command == "validate" and defaults.get("window"):
            job["window"] = defaults["window"]
        jobs = [job]

    workers = defaults["workers"]
    if workers > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(run_job, ws, j, defaults) for j in jobs]
            results = [f.result() for f in futures]
    else:
        results = [run_job(ws, j, defaults) for j in jobs]

    bounds = (
        f"budget={defaults['budget']} nmax={defaults.get('nmax', 8)} "
        f"rank_abort={defaults['rank_abort']} e={defaults['e']}"
    )
    declared = []
    if "ring" in ws.doc:
        declared.append(f"ring p={int(ws.doc['ring']['p'])}")
    if "ci" in ws.doc:
        exps = ",".join(str(int(x)) for x in ws.doc["ci"]["exponents"])
        declared.append(f"ci p={int(ws.doc['ci']['p'])} exponents=({exps})")
    header = {
        "version": __version__,
        "input_sha256": digest,
        "field": "; ".join(declared) if declared else "none declared",
        "bounds": bounds,
    }
    text = render_json(header, results) if args.format == "json" else render_text(header, results)
    _write_output(text, args.out)
    return 0


def main(argv: list[str] | None = None) -> int:
    try:
        return _main(argv)
    except BudgetError as ex:
        print(f"budget error: {ex}", file=sys.stderr)
        return 3
    except (InputError, ParseError, PreconditionError) as ex:
        print(f"error: {ex}", file=sys.stderr)
        return 2
    except InternalCheckError as ex:
        print(f"internal consistency failure: {ex}", file=sys.stderr)
        return 4
    except DGSupportError as ex:
        print(f"error: {ex}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
