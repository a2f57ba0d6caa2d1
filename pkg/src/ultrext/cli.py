"""Command line front end: ``ultrext run``, ``ultrext repl`` and ``ultrext check``."""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import replace
from typing import Sequence, TextIO

from . import dsl
from .interp import Session, SessionConfig, execute, run

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


def to_json(rec: dict) -> str:
    return json.dumps(rec, sort_keys=True)


def to_text(rec: dict) -> str:
    status = rec["status"]
    if status == "error":
        return f"{rec['query']}\n  !! {rec.get('detail', 'error')}"
    if rec["precision"] is not None and rec["value"] is None:
        line = f"{rec['query']}\n  => undetermined (needs modulus {rec['precision']['modulus']})"
    else:
        v = rec["value"]
        shown = ("true" if v else "false") if isinstance(v, bool) else str(v)
        line = f"{rec['query']}\n  => {shown}"
    if rec["label"] != "exact":
        line += f"  [{rec['label']}]"
    if "expected" in rec:
        line += f"  (expected {rec['expected']}: {'ok' if status == 'ok' else 'FAILED'})"
    elif status == "fail":
        line += "  FAILED"
    if rec.get("detail") and status != "error":
        line += f"\n  {rec['detail']}"
    if "seconds" in rec:
        line += f"\n  {rec['seconds']:.4f}s"
    return line


def exit_code(records: Sequence[dict]) -> int:
    return EXIT_FAIL if any(r["status"] in ("fail", "error") for r in records) else EXIT_OK


def _seed(arg: int | None) -> int:
    if arg is not None:
        return arg
    env = os.environ.get("ULTREXT_SEED")
    if env is None:
        return 0
    try:
        return int(env)
    except ValueError:
        raise SystemExit(_usage(f"ULTREXT_SEED must be an integer, got {env!r}"))


def _usage(msg: str) -> int:
    print(f"ultrext: {msg}", file=sys.stderr)
    return EXIT_USAGE


def _config(args) -> SessionConfig:
    cfg = SessionConfig(seed=_seed(args.seed), timing=getattr(args, "timing", False))
    if args.backend == "finite":
        if not args.universe or args.universe < 1:
            raise ValueError("--backend finite needs --universe N with N >= 1")
        cfg = replace(cfg, backend="finite", universe=args.universe)
    return cfg


def cmd_run(args, out: TextIO) -> int:
    try:
        cfg = _config(args)
    except ValueError as e:
        return _usage(str(e))
    try:
        with open(args.file, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as e:
        return _usage(f"cannot read {args.file}: {e.strerror}")
    try:
        script = dsl.parse(text)
    except dsl.ParseError as e:
        return _usage(f"{args.file}: {e}")
    records = run(script, cfg, parallel=args.parallel, fail_fast=args.fail_fast)
    fmt = to_json if args.json else to_text
    for r in records:
        print(fmt(r), file=out)
    return exit_code(records)


def cmd_check(args, out: TextIO) -> int:
    from .suites import SUITES, run_suite

    names = list(SUITES) if args.suite == "all" else [args.suite]
    for n in names:
        if n not in SUITES:
            return _usage(f"unknown suite {n!r}; choose from: all, {', '.join(SUITES)}")
    seed = _seed(args.seed)
    code = EXIT_OK
    for n in names:
        rep = run_suite(n, args.trials, seed)
        if args.json:
            print(to_json(rep.to_dict()), file=out)
        else:
            state = "ok" if rep.ok else "FAILED"
            print(
                f"{n}: {state}  resolved={rep.resolved} skipped={rep.skipped} "
                f"failures={len(rep.failures)} seed={seed} ({rep.seconds:.2f}s)",
                file=out,
            )
            for f in rep.failures[:3]:
                print(f"  counterexample: {f}", file=out)
        if not rep.ok:
            code = EXIT_FAIL
    return code


def _env_summary(session: Session) -> list[str]:
    c = session.config
    backend = f"finite {c.universe}" if c.backend == "finite" else "symbolic"
    lines = [f"backend={backend} precision={c.precision} seed={c.seed}"]
    for k, b in sorted(session.env.items()):
        lines.append(f"  {k} : {b.kind}")
    return lines


def repl(session: Session, inp: TextIO, out: TextIO, prompt: bool = True) -> int:
    code = EXIT_OK
    while True:
        if prompt:
            out.write("ux> ")
            out.flush()
        line = inp.readline()
        if not line:
            break
        stripped = line.strip()
        if not stripped:
            continue
        if stripped in (":quit", ":q"):
            break
        if stripped == ":env":
            print("\n".join(_env_summary(session)), file=out)
            continue
        if stripped.startswith(":load"):
            path = stripped[len(":load") :].strip()
            try:
                with open(path, encoding="utf-8") as fh:
                    stripped = fh.read()
            except OSError as e:
                print(f"!! cannot read {path}: {e.strerror}", file=out)
                continue
        try:
            script = dsl.parse(stripped)
        except dsl.ParseError as e:
            print(f"!! {e}", file=out)
            continue
        for stmt in script.statements:
            rec = execute(session, stmt)
            if rec is not None:
                print(to_text(rec), file=out)
                if rec["status"] in ("fail", "error"):
                    code = EXIT_FAIL
    return code


def cmd_repl(args, out: TextIO) -> int:
    try:
        cfg = _config(args)
    except ValueError as e:
        return _usage(str(e))
    repl(Session(cfg), sys.stdin, out, prompt=sys.stdin.isatty())
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ultrext", description="Ultrafilter extensions of first-order models.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--backend", choices=("symbolic", "finite"), default="symbolic")
        sp.add_argument("--universe", type=int, default=0, help="size of the finite universe")
        sp.add_argument("--seed", type=int, default=None, help="random seed (default: $ULTREXT_SEED or 0)")

    r = sub.add_parser("run", help="evaluate a script")
    r.add_argument("file")
    r.add_argument("--json", action="store_true", help="one JSON record per line")
    r.add_argument("--parallel", action="store_true", help="evaluate queries concurrently")
    r.add_argument("--timing", action="store_true", help="add wall-clock seconds to each record")
    r.add_argument("--fail-fast", action="store_true")
    common(r)

    i = sub.add_parser("repl", help="interactive session")
    common(i)

    c = sub.add_parser("check", help="run a differential suite")
    c.add_argument("suite", help="suite name or 'all'")
    c.add_argument("--trials", type=int, default=200)
    c.add_argument("--seed", type=int, default=None)
    c.add_argument("--json", action="store_true")
    return p


def main(argv: Sequence[str] | None = None, out: TextIO | None = None) -> int:
    out = sys.stdout if out is None else out
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK
    try:
        if args.command == "run":
            return cmd_run(args, out)
        if args.command == "check":
            return cmd_check(args, out)
        return cmd_repl(args, out)
    except SystemExit as e:
        return int(e.code or 0)


if __name__ == "__main__":
    sys.exit(main())
