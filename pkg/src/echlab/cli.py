"""Command line interface: ``echlab validate | homology | verify``.

Exit codes: 0 success/pass, 2 verification failed, 3 not stabilized,
4 input error, 5 internal invariant breach.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import time
from pathlib import Path

from . import __version__
from .complexes import parse_coefficients
from .errors import EchError, InvalidData, NotStabilized
from .hf import validate
from .io import REPORT_FORMAT, InputDocument, ParseError, digest, dumps_input, dumps_report, group_json, loads_input
from .ocomplex import MUTATIONS, star_rules

EXIT_OK, EXIT_FAIL, EXIT_UNSTABLE, EXIT_INPUT, EXIT_INTERNAL = 0, 2, 3, 4, 5
CACHE_ENV = "ECHLAB_CACHE_DIR"


class InputError(Exception):
    pass


def _window(text: str) -> tuple:
    try:
        a, b = (int(x) for x in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"window must look like A:B, got {text!r}") from None
    if a > -1 or b < 0:
        raise argparse.ArgumentTypeError("window must contain -1 and 0")
    return (a, b)


def _coeff(text: str) -> str:
    try:
        parse_coefficients(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None
    return text.lower()


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="echlab", description="Exact ech/HF chain complex computations.")
    ap.add_argument("--version", action="version", version=f"echlab {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--report", metavar="PATH", help="write the JSON report here")
        p.add_argument("--cache-dir", metavar="PATH", help=f"result cache (default: ${CACHE_ENV})")

    v = sub.add_parser("validate", help="check an input document")
    v.add_argument("path")
    common(v)

    h = sub.add_parser("homology", help="flavored ech homology per grading")
    h.add_argument("path")
    h.add_argument("--flavor", choices=("inf", "minus", "plus"), default="inf")
    h.add_argument("--g", type=_positive, default=1)
    h.add_argument("--L", type=_positive, default=6)
    h.add_argument("--window", type=_window, default=(-3, 3), metavar="A:B")
    h.add_argument("--coeff", type=_coeff, default="z", help="z, q or f<p>")
    common(h)

    w = sub.add_parser("verify", help="run a verification")
    w.add_argument("statement", choices=("lemma25", "thm24", "collapse", "modules"))
    w.add_argument("path", nargs="?")
    w.add_argument("--g", type=_positive, default=1)
    w.add_argument("--L", type=_positive, default=None)
    w.add_argument("--Lmax", type=_positive, default=8)
    w.add_argument("--window", type=_window, default=None, metavar="A:B")
    w.add_argument("--coeff", type=_coeff, default="z")
    w.add_argument("--corrupt-star", choices=sorted(MUTATIONS), help=argparse.SUPPRESS)
    common(w)
    return ap


def _fix_argv(argv: list[str]) -> list[str]:
    # allow "--window -3:3" (argparse would take -3:3 for an option)
    out = []
    i = 0
    while i < len(argv):
        if argv[i] == "--window" and i + 1 < len(argv):
            out.append("--window=" + argv[i + 1])
            i += 2
            continue
        out.append(argv[i])
        i += 1
    return out


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def _load(path: str) -> tuple[InputDocument, str]:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from None
    doc = loads_input(text)
    return doc, digest(dumps_input(doc))


def cmd_validate(args) -> tuple[int, dict, str]:
    doc, dig = _load(args.path)
    rep = validate(doc.to_hfdata())
    body = {"input_digest": dig, "parameters": {"command": "validate"}, "ok": rep.ok, "violations": rep.violations}
    text = "ok" if rep.ok else "invalid: " + rep.violations[0]
    return (EXIT_OK if rep.ok else EXIT_INPUT), body, text


def _group_str(G) -> str:
    return str(G)


def cmd_homology(args) -> tuple[int, dict, str]:
    from .ech import ech_flavor_homology

    doc, dig = _load(args.path)
    hf = doc.to_hfdata()
    validate(hf).raise_if_failed()
    params = {
        "command": "homology",
        "flavor": args.flavor,
        "g": args.g,
        "L": args.L,
        "window": list(args.window),
        "coeff": args.coeff,
    }
    try:
        res = ech_flavor_homology(hf, args.g, args.flavor, args.L, args.window, args.coeff)
        status = res.status
        code = EXIT_OK
    except NotStabilized as exc:
        res = exc.towers[0] if exc.towers else None
        status = "not-stabilized"
        code = EXIT_UNSTABLE
        if res is None:
            raise
    table = {str(k): group_json(v) for k, v in sorted(res.table.items())}
    body = {
        "input_digest": dig,
        "parameters": {k: (str(v) if isinstance(v, int) else v) for k, v in params.items()},
        "p": str(hf.p),
        "table": table,
        "stabilization": {
            "status": status,
            "interior_gradings": [str(k) for k in res.interior],
            "handle_window": str(res.handle_check.N),
            "handle_stable": res.handle_check.ok,
            "window_stable": res.window_stable,
        },
    }
    lines = [f"{args.flavor} homology, g={args.g}, L={args.L}, window={args.window[0]}:{args.window[1]}, coefficients={args.coeff}, p={hf.p}"]
    interior = set(res.interior)
    for k, v in sorted(res.table.items()):
        mark = "*" if k in interior else " "
        lines.append(f"  {mark} {k:>4}: {_group_str(v)}")
    lines.append(f"status: {status} (* = interior grading, unaffected by the window)")
    if code == EXIT_UNSTABLE:
        lines.append("increase --L or --window")
    return code, body, "\n".join(lines)


def cmd_verify(args) -> tuple[int, dict, str]:
    from . import verify as V

    rules = MUTATIONS[args.corrupt_star] if args.corrupt_star else star_rules
    dig = None
    hf = None
    if args.statement != "lemma25":
        if not args.path:
            raise InputError(f"verify {args.statement} needs an input document")
        doc, dig = _load(args.path)
        hf = doc.to_hfdata()
        validate(hf).raise_if_failed()
    if args.statement == "lemma25":
        rep = V.check_lemma_2_5(args.Lmax, rules)
    elif args.statement == "collapse":
        rep = V.check_collapse(hf, args.g, args.L, args.window or (-2, 2), rules)
    elif args.statement == "thm24":
        if rules is not star_rules:
            raise InputError("--corrupt-star applies to lemma25 and collapse")
        rep = V.check_theorem_2_4(hf, args.g, args.coeff, args.L or 6, args.window or (-3, 3))
    else:
        rep = V.check_module_structure(hf, args.g, args.window or (-3, 3))
    body = {"input_digest": dig, "parameters": {"command": "verify", "corrupt_star": args.corrupt_star}, "report": rep.to_json()}
    code = {V.PASS: EXIT_OK, V.FAIL: EXIT_FAIL, V.UNSTABLE: EXIT_UNSTABLE}[rep.verdict]
    text = f"{rep.statement}: {rep.verdict}" + (f" ({rep.message})" if rep.message else "")
    return code, body, text


COMMANDS = {"validate": cmd_validate, "homology": cmd_homology, "verify": cmd_verify}


# ---------------------------------------------------------------------------
# caching and driver
# ---------------------------------------------------------------------------

def _cache_key(args) -> str | None:
    path = getattr(args, "path", None)
    content = ""
    if path:
        try:
            content = dumps_input(loads_input(Path(path).read_text(encoding="utf-8")))
        except (OSError, InvalidData):
            return None
    params = {k: v for k, v in sorted(vars(args).items()) if k not in ("report", "cache_dir", "path")}
    blob = json.dumps([__version__, digest(content), params], sort_keys=True, default=str)
    return digest(blob)


def run(argv: list[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    ap = build_parser()
    argv = _fix_argv(list(sys.argv[1:] if argv is None else argv))
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    cache_dir = args.cache_dir or os.environ.get(CACHE_ENV)
    key = _cache_key(args) if cache_dir else None
    start = time.perf_counter()
    cached = None
    if key:
        f = Path(cache_dir) / f"{key}.json"
        if f.exists():
            cached = json.loads(f.read_text(encoding="utf-8"))
    if cached is not None:
        code, body, text = cached["exit_code"], cached["body"], cached["text"]
    else:
        try:
            code, body, text = COMMANDS[args.command](args)
        except ParseError as exc:
            print(f"input error: {exc}", file=out)
            return EXIT_INPUT
        except (InvalidData, InputError) as exc:
            print(f"input error: {exc}", file=out)
            return EXIT_INPUT
        except EchError as exc:
            print(f"internal error: {type(exc).__name__}: {exc}", file=out)
            return EXIT_INTERNAL
        if key:
            Path(cache_dir).mkdir(parents=True, exist_ok=True)
            (Path(cache_dir) / f"{key}.json").write_text(
                json.dumps({"exit_code": code, "body": body, "text": text}, sort_keys=True), encoding="utf-8"
            )
    elapsed = time.perf_counter() - start
    print(text, file=out)
    if args.report:
        doc = {"format": REPORT_FORMAT, "engine_version": __version__, "exit_code": str(code)}
        doc.update(body)
        doc["timing"] = {"seconds": round(elapsed, 6), "cached": cached is not None}
        Path(args.report).write_text(dumps_report(doc), encoding="utf-8")
    return code


def main() -> None:  # pragma: no cover - thin wrapper
    sys.exit(run())


if __name__ == "__main__":  # pragma: no cover
    main()
