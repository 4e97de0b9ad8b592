"""``workbench run <taskfile>``: run a verification suite and print a report.

Exit status: 0 when every task passes, 1 when any task fails or is refused,
2 on input errors (unreadable file, syntax or validation error).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

from . import __version__
from .runner import CONVENTIONS, PASS, Report, RunConfig, run_tasks
from .taskfile import TaskFileError, parse_task_file

REPORT_SCHEMA = "workbench-report/1"
THREADS_ENV = "WORKBENCH_THREADS"
DEFAULTS = {"format": "human", "max_level": 4, "tor_bound": 6, "threads": 1}


def default_threads() -> int:
    raw = os.environ.get(THREADS_ENV, "")
    try:
        k = int(raw)
    except ValueError:
        return DEFAULTS["threads"]
    return k if k >= 1 else DEFAULTS["threads"]


def report_header(r: Report) -> dict:
    # the thread count used is left out so the body is independent of scheduling
    return {
        "schema": REPORT_SCHEMA,
        "tool": f"workbench {__version__}",
        "suite": r.suite,
        "defaults": {
            "format": DEFAULTS["format"],
            "max_level": DEFAULTS["max_level"],
            "tor_bound": DEFAULTS["tor_bound"],
            "threads": f"${THREADS_ENV} or {DEFAULTS['threads']}",
        },
        "settings": {"max_level": r.config.max_level, "tor_bound": r.config.tor_bound},
        "conventions": CONVENTIONS,
    }


def report_body(r: Report) -> dict:
    return {
        "tasks": [
            {"id": x.id, "op": x.op, "verdict": x.verdict, "bounds": x.bounds,
             "result": x.result, "counterexamples": x.counterexamples}
            for x in r.results
        ],
        "summary": dict(r.counts(), all_pass=r.all_pass),
    }


def emit_report(r: Report, fmt: str = "human") -> str:
    if fmt == "machine":
        doc = {"header": report_header(r), **report_body(r)}
        return json.dumps(doc, sort_keys=True, indent=1, ensure_ascii=True) + "\n"
    if fmt != "human":
        raise ValueError(f"unknown format {fmt!r}")
    h = report_header(r)
    lines = [f"{h['tool']}  report schema {h['schema']}  suite {r.suite or '-'}"]
    d = h["defaults"]
    lines.append("defaults: " + ", ".join(f"{k}={d[k]}" for k in sorted(d)))
    s = h["settings"]
    lines.append("settings: " + ", ".join(f"{k}={s[k]}" for k in sorted(s)))
    lines.append("conventions:")
    for k in sorted(CONVENTIONS):
        lines.append(f"  {k}: {CONVENTIONS[k]}")
    if r.results:
        w_id = max(4, max(len(x.id) for x in r.results))
        w_op = max(2, max(len(x.op) for x in r.results))
        lines.append("")
        lines.append(f"{'task':<{w_id}}  {'op':<{w_op}}  {'verdict':<20}  {'seconds':>8}  bounds")
        lines.append("-" * (w_id + w_op + 46))
        for x in r.results:
            b = ", ".join(f"{k}={x.bounds[k]}" for k in sorted(x.bounds))
            lines.append(f"{x.id:<{w_id}}  {x.op:<{w_op}}  {x.verdict:<20}  {x.seconds:8.3f}  {b}")
            for c in x.counterexamples:
                lines.append(f"{'':<{w_id}}    ! {json.dumps(c, sort_keys=True)}")
    c = r.counts()
    lines.append("")
    lines.append(f"{c[PASS]} passed, {c['fail']} failed, {c['refused-precondition']} refused")
    return "\n".join(lines) + "\n"


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="workbench", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    run = sub.add_parser("run", help="run a task file")
    run.add_argument("taskfile")
    run.add_argument("--format", choices=("human", "machine"), default=DEFAULTS["format"])
    run.add_argument("--max-level", type=int, default=DEFAULTS["max_level"],
                     help="default truncation level for towers (default %(default)s)")
    run.add_argument("--tor-bound", type=int, default=DEFAULTS["tor_bound"],
                     help="default degree bound for derived functors (default %(default)s)")
    run.add_argument("--threads", type=int, default=None,
                     help=f"worker threads (default ${THREADS_ENV} or {DEFAULTS['threads']})")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 2 if e.code else 0
    threads = args.threads if args.threads is not None else default_threads()
    if threads < 1 or args.max_level < 2 or args.tor_bound < 1:
        print("error: --threads >= 1, --max-level >= 2 and --tor-bound >= 1 are required", file=sys.stderr)
        return 2
    try:
        with open(args.taskfile, encoding="utf-8") as fh:
            text = fh.read()
    except (OSError, UnicodeDecodeError) as e:
        print(f"error: cannot read {args.taskfile}: {e}", file=sys.stderr)
        return 2
    try:
        tf = parse_task_file(text)
    except TaskFileError as e:
        print(f"error: {args.taskfile}: {e}", file=sys.stderr)
        return 2
    cfg = RunConfig(args.max_level, args.tor_bound, threads)
    start = time.perf_counter()
    report = run_tasks(tf, cfg)
    sys.stdout.write(emit_report(report, args.format))
    print(f"threads={threads} elapsed={time.perf_counter() - start:.2f}s", file=sys.stderr)
    return 0 if report.all_pass else 1


if __name__ == "__main__":
    sys.exit(main())
