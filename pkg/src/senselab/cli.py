"""Operator entry points: serve the platform, simulate kits, print reports.

Exit codes: 0 success, 2 bad configuration or environment, 3 malformed log.
"""

from __future__ import annotations

import argparse
import json
import sqlite3
import sys
import threading
from pathlib import Path

from senselab.analytics import (
    LogFormatError,
    compute_report,
    format_report_table,
    read_event_log,
    write_event_log,
)
from senselab.core import inquiry_to_dict
from senselab.devices import Fault, spawn_class_kit
from senselab.fixtures import (
    DEFAULT_SEED,
    bundled_corpus_dir,
    generate_corpus,
    load_corpus_into_db,
    read_corpus,
    write_corpus,
)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="senselab",
        description="Classroom sensor platform: service, simulator, analytics.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    serve = sub.add_parser("serve", help="run the HTTP service")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8000)
    serve.add_argument("--db", default=":memory:",
                       help="SQLite database path (default: in-memory)")
    serve.add_argument("--photo-dir", default=None,
                       help="store photo bytes as files in this directory")
    serve.add_argument("--fixture", action="store_true",
                       help="load the bundled corpus before serving")
    serve.add_argument("--devices", type=int, default=0, metavar="N",
                       help="spawn a class kit of N devices per sensor type")
    serve.add_argument("--seed", type=int, default=0)
    serve.add_argument("--time-scale", type=float, default=1.0,
                       help="device pacing: wall seconds per simulated second")

    simulate = sub.add_parser("simulate", help="spawn a virtual class kit")
    simulate.add_argument("--count-per-type", type=int, default=20, metavar="N")
    simulate.add_argument("--seed", type=int, default=0)
    simulate.add_argument("--time-scale", type=float, default=1.0)
    simulate.add_argument("--duration", type=float, default=None,
                          help="stop after this many seconds (default: run "
                               "until EOF on stdin)")
    simulate.add_argument("--fault", action="append", default=[],
                          metavar="SERIAL=KIND",
                          help="inject mute|corrupt_crc|slow at startup; "
                               "repeatable")
    simulate.add_argument("--verbose", action="store_true",
                          help="print serial and type per device on stderr")

    report = sub.add_parser("report", help="print the engagement report")
    report.add_argument("path", nargs="?", default=None,
                        help="corpus directory or events.ndjson file "
                             "(default: bundled corpus)")
    report.add_argument("--format", choices=("table", "json"), default="table")

    fixture = sub.add_parser("fixture", help="write the bundled corpus to a directory")
    fixture.add_argument("--out", required=True)
    fixture.add_argument("--seed", type=int, default=DEFAULT_SEED)

    export = sub.add_parser("export", help="export a service database as a corpus")
    export.add_argument("--db", required=True)
    export.add_argument("--out", required=True)
    return parser


def _cmd_serve(args) -> int:
    import uvicorn

    from senselab.service import DeviceGateway, PlatformDB, create_app

    if args.db != ":memory:":
        parent = Path(args.db).expanduser().resolve().parent
        if not parent.is_dir():
            print(f"error: database directory does not exist: {parent}",
                  file=sys.stderr)
            return 2
    try:
        db = PlatformDB(args.db, photo_dir=args.photo_dir)
    except sqlite3.OperationalError as exc:
        print(f"error: cannot open database {args.db}: {exc}", file=sys.stderr)
        return 2

    if args.fixture:
        if db.counts()["inquiries"] == 0:
            load_corpus_into_db(db, read_corpus())
            print(f"loaded fixture corpus: {db.counts()}", file=sys.stderr)
        else:
            print("database not empty; skipping fixture load", file=sys.stderr)

    farm = None
    if args.devices > 0:
        farm = spawn_class_kit(args.devices, seed=args.seed,
                               time_scale=args.time_scale)
        print(f"spawned {len(farm)} virtual devices", file=sys.stderr)
    gateway = DeviceGateway(farm)
    app = create_app(db, gateway)
    try:
        uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    finally:
        gateway.shutdown()
        if farm is not None:
            farm.stop()
        db.close()
    return 0


def _parse_fault(spec: str) -> tuple[int, Fault]:
    try:
        serial_text, kind = spec.split("=", 1)
        return int(serial_text, 0), Fault(kind)
    except (ValueError, KeyError):
        raise SystemExit(f"error: bad --fault spec {spec!r}; "
                         f"expected SERIAL=mute|corrupt_crc|slow")


def _cmd_simulate(args) -> int:
    try:
        farm = spawn_class_kit(args.count_per_type, seed=args.seed,
                               time_scale=args.time_scale)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    try:
        for spec in args.fault:
            serial, fault = _parse_fault(spec)
            farm.inject_fault(serial, fault)
        for device in sorted(farm, key=lambda d: d.serial_number):
            print(f"{device.address[0]}:{device.address[1]}")
            if args.verbose:
                print(f"  serial={device.serial_number:#010x} "
                      f"type={device.sensor_type.wire_name}", file=sys.stderr)
        sys.stdout.flush()
        if args.duration is not None:
            threading.Event().wait(args.duration)
        else:
            # Until EOF; lines of "fault <serial> <kind>" inject live faults.
            for line in sys.stdin:
                parts = line.split()
                if len(parts) == 3 and parts[0] == "fault":
                    try:
                        farm.inject_fault(int(parts[1], 0), Fault(parts[2]))
                        print(f"injected {parts[2]} into {parts[1]}",
                              file=sys.stderr)
                    except (ValueError, KeyError) as exc:
                        print(f"error: {exc}", file=sys.stderr)
    except KeyboardInterrupt:
        pass
    finally:
        farm.stop()
    return 0


def _cmd_report(args) -> int:
    path = Path(args.path) if args.path else bundled_corpus_dir()
    try:
        if path.is_dir():
            corpus = read_corpus(path)
            events, inquiries = corpus.events, corpus.inquiries
        else:
            with open(path, encoding="utf-8") as fh:
                events = list(read_event_log(fh))
            inquiries = []
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except LogFormatError as exc:
        print(f"error: malformed log: {exc}", file=sys.stderr)
        return 3
    report = compute_report(events, inquiries)
    if args.format == "json":
        print(json.dumps(report.to_dict(), indent=2))
    else:
        print(format_report_table(report), end="")
    return 0


def _cmd_fixture(args) -> int:
    corpus = generate_corpus(args.seed)
    write_corpus(corpus, args.out)
    print(f"wrote corpus to {args.out}", file=sys.stderr)
    return 0


def _cmd_export(args) -> int:
    from senselab.service import PlatformDB

    if not Path(args.db).exists():
        print(f"error: no database at {args.db}", file=sys.stderr)
        return 2
    db = PlatformDB(args.db)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    with open(out / "events.ndjson", "w", encoding="utf-8") as fh:
        count = write_event_log(fh, db.events())
    with open(out / "inquiries.ndjson", "w", encoding="utf-8") as fh:
        for inquiry in db.all_inquiries():
            fh.write(json.dumps(inquiry_to_dict(inquiry), separators=(",", ":"))
                     + "\n")
    db.close()
    print(f"exported {count} events -> {out}", file=sys.stderr)
    return 0


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    handlers = {
        "serve": _cmd_serve,
        "simulate": _cmd_simulate,
        "report": _cmd_report,
        "fixture": _cmd_fixture,
        "export": _cmd_export,
    }
    return handlers[args.command](args)


if __name__ == "__main__":
    sys.exit(main())
