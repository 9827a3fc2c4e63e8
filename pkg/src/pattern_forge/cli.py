"""Command-line interface: render, metrics, validate, check-preserve,
gallery, and serve.

Exit codes: 0 success, 1 invalid spec (error JSON on stderr), 2 I/O
error, 3 check-preserve ran but the value was not preserved. The
PATTERN_FORGE_SEED environment variable overrides spec seeds globally;
an explicit --seed flag wins over the environment.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import re
import sys
from pathlib import Path

from .gallery import run_gallery
from .metrics import SUPERSAMPLE_FACTORS, check_value_preservation, compute_metrics
from .model import HostSymbol, PatternError, SpecError, rect_host
from .pipeline import compile_pattern
from .render import DEFAULT_PADDING, DEFAULT_PRECISION, render_svg
from .specio import parse_host, parse_spec, validate_spec
from .placement import load_records_csv, load_records_json

ENV_SEED = "PATTERN_FORGE_SEED"

_RECT_SHORTHAND = re.compile(r"^rect:(\d+(?:\.\d+)?)[x×](\d+(?:\.\d+)?)$")
_CIRCLE_SHORTHAND = re.compile(r"^circle:(\d+(?:\.\d+)?)$")


def _read_text(path: str) -> str:
    try:
        return Path(path).read_text("utf-8")
    except OSError as exc:
        raise _IoError(f"cannot read {path}: {exc}") from exc


class _IoError(Exception):
    pass


def _load_host(value: str) -> HostSymbol:
    m = _RECT_SHORTHAND.match(value)
    if m:
        return rect_host(float(m.group(1)), float(m.group(2)))
    m = _CIRCLE_SHORTHAND.match(value)
    if m:
        r = float(m.group(1))
        return HostSymbol(kind="point", id="host", center=(r, r), radius=r)
    return parse_host(_read_text(value))


def _load_spec(path: str, data_path: str | None):
    text = _read_text(path)
    if data_path is None:
        return parse_spec(text)
    # Inject external records into a data-driven spec.
    obj = json.loads(text)
    data_text = _read_text(data_path)
    if data_path.endswith(".csv"):
        records = load_records_csv(data_text)
    else:
        records = load_records_json(data_text)
    try:
        obj["arrangement"]["data"]["records"] = records
    except (KeyError, TypeError):
        raise SpecError("/arrangement/data",
                        "--data requires a data-driven spec") from None
    from .specio import build_spec
    return build_spec(obj)


def _resolve_seed(args) -> int | None:
    if getattr(args, "seed", None) is not None:
        return args.seed
    env = os.environ.get(ENV_SEED)
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise SpecError("", f"{ENV_SEED} must be an integer, got {env!r}") from None
    return None


def _cmd_render(args) -> int:
    spec = _load_spec(args.spec, args.data)
    host = _load_host(args.host)
    resolved = compile_pattern(spec, host, seed_override=_resolve_seed(args))
    doc = render_svg(resolved, padding=args.padding, precision=args.precision)
    try:
        Path(args.out).write_bytes(doc.data)
    except OSError as exc:
        raise _IoError(f"cannot write {args.out}: {exc}") from exc
    return 0


def _cmd_metrics(args) -> int:
    spec = _load_spec(args.spec, args.data)
    host = _load_host(args.host)
    resolved = compile_pattern(spec, host, seed_override=_resolve_seed(args))
    metrics = compute_metrics(resolved, supersample=args.supersample)
    json.dump(metrics.to_dict(), sys.stdout)
    sys.stdout.write("\n")
    return 0


def _cmd_validate(args) -> int:
    spec = _load_spec(args.spec, args.data)
    findings = []
    if args.host is not None:
        host = _load_host(args.host)
        findings = [dataclasses.asdict(w) for w in validate_spec(spec, host)]
    json.dump({"valid": True, "warnings": findings}, sys.stdout)
    sys.stdout.write("\n")
    return 0


def _cmd_check_preserve(args) -> int:
    spec_a = _load_spec(args.spec_a, None)
    spec_b = _load_spec(args.spec_b, None)
    host = _load_host(args.host)
    preserved, report = check_value_preservation(
        spec_a, spec_b, host, args.tol, supersample=args.supersample)
    json.dump(report, sys.stdout)
    sys.stdout.write("\n")
    return 0 if preserved else 3


def _cmd_gallery(args) -> int:
    ok, results = run_gallery(args.out, jobs=args.jobs)
    for r in results:
        print(f"{'PASS' if r.passed else 'FAIL'} {r.name}: {r.detail}")
    print(f"gallery: {sum(r.passed for r in results)}/{len(results)} passed; "
          f"index at {Path(args.out) / 'index.html'}")
    return 0 if ok else 1


def _cmd_serve(args) -> int:
    from .server import serve
    serve(port=args.port, bind=args.bind)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pattern-forge",
        description="Compile declarative pattern specs to SVG and metrics.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, with_out=False):
        p.add_argument("spec", help="path to a pattern spec JSON file")
        p.add_argument("--host", required=True,
                       help="host JSON file, rect:WxH, or circle:R")
        p.add_argument("--seed", type=int, default=None,
                       help="override the spec seed")
        p.add_argument("--data", default=None,
                       help="CSV or JSON records for data-driven specs")
        if with_out:
            p.add_argument("--out", required=True, help="output SVG path")

    p = sub.add_parser("render", help="render a spec to SVG")
    add_common(p, with_out=True)
    p.add_argument("--padding", type=float, default=DEFAULT_PADDING)
    p.add_argument("--precision", type=int, default=DEFAULT_PRECISION)
    p.set_defaults(func=_cmd_render)

    p = sub.add_parser("metrics", help="print pattern metrics as JSON")
    add_common(p)
    p.add_argument("--supersample", type=int, default=4,
                   choices=SUPERSAMPLE_FACTORS)
    p.set_defaults(func=_cmd_metrics)

    p = sub.add_parser("validate", help="validate a spec; print warnings")
    p.add_argument("spec")
    p.add_argument("--host", default=None)
    p.add_argument("--data", default=None)
    p.set_defaults(func=_cmd_validate)

    p = sub.add_parser("check-preserve",
                       help="compare the ink ratio of two specs on one host")
    p.add_argument("spec_a")
    p.add_argument("spec_b")
    p.add_argument("--host", required=True)
    p.add_argument("--tol", type=float, default=0.005)
    p.add_argument("--supersample", type=int, default=8,
                   choices=SUPERSAMPLE_FACTORS)
    p.set_defaults(func=_cmd_check_preserve)

    p = sub.add_parser("gallery", help="render the bundled gallery and "
                                       "check every entry's property")
    p.add_argument("--out", required=True)
    p.add_argument("--jobs", type=int, default=4)
    p.set_defaults(func=_cmd_gallery)

    p = sub.add_parser("serve", help="serve the JSON render/metrics endpoint")
    p.add_argument("--port", type=int, default=8765)
    p.add_argument("--bind", default="127.0.0.1")
    p.set_defaults(func=_cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except SpecError as exc:
        json.dump({"path": exc.path, "message": exc.message}, sys.stderr)
        sys.stderr.write("\n")
        return 1
    except PatternError as exc:
        json.dump({"path": "", "message": str(exc)}, sys.stderr)
        sys.stderr.write("\n")
        return 1
    except _IoError as exc:
        json.dump({"message": str(exc)}, sys.stderr)
        sys.stderr.write("\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
