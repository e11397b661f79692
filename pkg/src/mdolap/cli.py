"""Command-line front end.

Subcommands:

    validate  parse a schema, optionally load data, check every constraint
    load      build a snapshot from a schema plus CSV data directory
    query     evaluate a query expression against a snapshot
    repl      interactive analysis loop wrapping the current expression
    serve     run the HTTP service

Exit codes: 0 ok, 1 constraint violations or inconsistent store, 2 parse
or usage errors, 3 I/O errors.  MDOLAP_SNAPSHOT provides the default
snapshot path.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from . import algebra, constraints as cons, dsl, engine, ingest, model, render, service
from .errors import InconsistentStore, MdolapError

EXIT_OK = 0
EXIT_VIOLATIONS = 1
EXIT_USAGE = 2
EXIT_IO = 3


def _read_schema(path: str):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        print(f"error: cannot read schema: {exc}", file=sys.stderr)
        return None, EXIT_IO
    constellation, diagnostics = dsl.parse_schema(text)
    if constellation is None:
        for d in diagnostics:
            print(str(d), file=sys.stderr)
        return None, EXIT_USAGE
    return constellation, EXIT_OK


def _print_constraint_results(results) -> None:
    for r in results:
        status = "holds" if r.holds else "VIOLATED"
        line = f"{r.constraint.describe()}: {status}"
        if r.witnesses:
            shown = ", ".join(str(w) for w in r.witnesses)
            suffix = ", ..." if r.truncated else ""
            line += f" (witnesses: {shown}{suffix})"
        if r.diagnostic:
            line += f" [{r.diagnostic}]"
        print(line)


def cmd_validate(args) -> int:
    constellation, status = _read_schema(args.schema)
    if constellation is None:
        return status
    report = model.validate_schema(constellation)
    for entry in report.entries:
        print(f"{entry.severity}: [{entry.code}] {entry.message}")
    if not report.ok:
        print("schema: INVALID")
        return EXIT_VIOLATIONS
    print("schema: ok")
    if args.data:
        try:
            constellation, reports = ingest.build_from_directory(constellation, args.data)
        except (MdolapError, OSError) as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_IO
        for name, rep in reports.items():
            print(f"{name}: {rep.rows_loaded}/{rep.rows_read} rows loaded")
            for line, reason in rep.rejected:
                print(f"  line {line} rejected: {reason}")
    results = cons.check_all(constellation)
    _print_constraint_results(results)
    if not cons.all_hold(results):
        print("constraints: VIOLATED")
        return EXIT_VIOLATIONS
    print("constraints: all hold")
    return EXIT_OK


def cmd_load(args) -> int:
    constellation, status = _read_schema(args.schema)
    if constellation is None:
        return status
    try:
        constellation, reports = ingest.build_from_directory(constellation, args.data)
    except (MdolapError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    for name, rep in reports.items():
        print(f"{name}: {rep.rows_loaded}/{rep.rows_read} rows loaded")
        for line, reason in rep.rejected:
            print(f"  line {line} rejected: {reason}")
    consistent = cons.constellation_consistent(constellation)
    print(f"consistent: {'yes' if consistent else 'NO'}")
    try:
        ingest.snapshot_save(constellation, args.out)
    except OSError as exc:
        print(f"error: cannot write snapshot: {exc}", file=sys.stderr)
        return EXIT_IO
    print(f"snapshot written to {args.out}")
    return EXIT_OK


def _load_snapshot(args):
    path = args.snapshot or os.environ.get("MDOLAP_SNAPSHOT")
    if not path:
        print("error: no snapshot given (use --snapshot or MDOLAP_SNAPSHOT)", file=sys.stderr)
        return None, EXIT_USAGE
    try:
        return ingest.snapshot_load(path), EXIT_OK
    except OSError as exc:
        print(f"error: cannot read snapshot: {exc}", file=sys.stderr)
        return None, EXIT_IO
    except MdolapError as exc:
        print(f"error: {exc.message}", file=sys.stderr)
        return None, EXIT_IO


def cmd_query(args) -> int:
    constellation, status = _load_snapshot(args)
    if constellation is None:
        return status
    mode = algebra.LEGACY if args.mode == "legacy" else algebra.STRICT
    result, diagnostics = engine.evaluate_text(
        constellation, args.expr, mode, allow_inconsistent=args.override_inconsistent
    )
    if result is None:
        for d in diagnostics:
            print(str(d), file=sys.stderr)
        return EXIT_USAGE
    table, grid = result
    print(render.render_table(constellation, table, grid))
    return EXIT_OK


def cmd_repl(args) -> int:
    constellation, status = _load_snapshot(args)
    if constellation is None:
        return status
    loop = Repl(constellation)
    return loop.run()


class Repl:
    """Interactive loop; every command wraps the current expression and
    re-renders.  The snapshot is never mutated."""

    def __init__(self, constellation: model.Constellation):
        self.c = constellation
        self.expr: dsl.QueryExpr | None = None
        self.mode = algebra.STRICT

    def run(self) -> int:
        print(f"store '{self.c.name}' loaded; type 'help' for commands")
        while True:
            try:
                line = input("mdolap> ")
            except EOFError:
                print()
                return EXIT_OK
            if not line.strip():
                continue
            if line.strip() in ("quit", "exit"):
                return EXIT_OK
            self.dispatch(line.strip())

    def dispatch(self, line: str) -> None:
        words = line.split()
        command, rest = words[0], words[1:]
        try:
            handler = getattr(self, f"do_{command}", None)
            if handler is None:
                print(f"unknown command '{command}'; type 'help'")
                return
            handler(rest)
        except MdolapError as exc:
            print(f"error: {exc.message}")

    def show(self) -> None:
        if self.expr is None:
            return
        print(f"expr: {dsl.format_query(self.expr)}")
        try:
            table, grid = engine.evaluate(self.c, self.expr, self.mode)
        except InconsistentStore as exc:
            print(f"error: {exc.message}")
            return
        print(render.render_table(self.c, table, grid))

    def wrap(self, new_expr: dsl.QueryExpr) -> None:
        """Commit a new expression only once it evaluates."""
        engine.evaluate(self.c, new_expr, self.mode)
        self.expr = new_expr
        self.show()

    def _need_expr(self) -> bool:
        if self.expr is None:
            print("no current expression; start with: display <fact> <rowDim> <colDim> <rowH> <colH>")
            return False
        return True

    def _current_table(self) -> algebra.DimensionalTable:
        return engine.evaluate_table(self.c, self.expr, self.mode)

    def do_help(self, rest) -> None:
        print(
            "commands:\n"
            "  display <fact> <rowDim> <colDim> <rowH> <colH>\n"
            "  drill <dim> <param>\n"
            "  roll <dim> <param>\n"
            "  hrotate <dim> <newHierarchy> [maintain]\n"
            "  drotate <oldDim> <newDim> <hierarchy> [maintain]\n"
            "  mode strict|legacy\n"
            "  expr | reset | help | quit"
        )

    def do_display(self, rest) -> None:
        if len(rest) != 5:
            print("usage: display <fact> <rowDim> <colDim> <rowH> <colH>")
            return
        self.wrap(dsl.DisplayExpr(*rest))

    def do_drill(self, rest) -> None:
        if len(rest) != 2 or not self._need_expr():
            return
        self.wrap(dsl.DrillDownExpr(self.expr, rest[0], rest[1]))

    def do_roll(self, rest) -> None:
        if len(rest) != 2 or not self._need_expr():
            return
        self.wrap(dsl.RollUpExpr(self.expr, rest[0], rest[1]))

    def do_hrotate(self, rest) -> None:
        if len(rest) not in (2, 3) or not self._need_expr():
            if self.expr is not None:
                print("usage: hrotate <dim> <newHierarchy> [maintain]")
            return
        table = self._current_table()
        axis = table.axis_of(rest[0])
        old = table.hierarchy_of(axis)
        flag = len(rest) == 3 and rest[2] == "maintain"
        self.wrap(dsl.HRotateExpr(self.expr, rest[0], old, rest[1], flag))

    def do_drotate(self, rest) -> None:
        if len(rest) not in (3, 4) or not self._need_expr():
            if self.expr is not None:
                print("usage: drotate <oldDim> <newDim> <hierarchy> [maintain]")
            return
        flag = len(rest) == 4 and rest[3] == "maintain"
        self.wrap(dsl.DRotateExpr(self.expr, rest[0], rest[1], rest[2], flag))

    def do_mode(self, rest) -> None:
        if rest not in (["strict"], ["legacy"]):
            print("usage: mode strict|legacy")
            return
        self.mode = algebra.STRICT if rest == ["strict"] else algebra.LEGACY
        self.show()

    def do_expr(self, rest) -> None:
        print(dsl.format_query(self.expr) if self.expr else "(none)")

    def do_reset(self, rest) -> None:
        while not isinstance(self.expr, (dsl.DisplayExpr, type(None))):
            self.expr = self.expr.child
        self.show()


def cmd_serve(args) -> int:
    constellation, status = _load_snapshot(args)
    if constellation is None:
        return status
    server = service.make_server(constellation, args.bind, args.port)
    host, port = server.server_address[:2]
    print(f"serving '{constellation.name}' on http://{host}:{port}", flush=True)
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mdolap", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a schema and its constraints")
    p.add_argument("--schema", required=True)
    p.add_argument("--data", help="directory of CSV files to load before checking")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("load", help="build and save a snapshot")
    p.add_argument("--schema", required=True)
    p.add_argument("--data", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_load)

    p = sub.add_parser("query", help="evaluate a query expression")
    p.add_argument("--snapshot")
    p.add_argument("--expr", required=True)
    p.add_argument("--mode", choices=["strict", "legacy"], default="strict")
    p.add_argument("--override-inconsistent", action="store_true")
    p.set_defaults(func=cmd_query)

    p = sub.add_parser("repl", help="interactive analysis loop")
    p.add_argument("--snapshot")
    p.set_defaults(func=cmd_repl)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--snapshot")
    p.add_argument("--port", type=int, default=8750)
    p.add_argument("--bind", default="127.0.0.1")
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InconsistentStore as exc:
        print(f"error: {exc.message}", file=sys.stderr)
        return EXIT_VIOLATIONS
    except MdolapError as exc:
        print(f"error: {exc.message}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
