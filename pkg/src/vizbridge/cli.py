"""Command-line entry points: serve the bridge, render scripts, run the mock SCE.

Exit codes are a stable contract: 0 success, 2 bind failure, 3 compile or
render failure, 4 protocol failure. The serve port comes from --port or the
DVP_PORT environment variable, with the flag winning.
"""

from __future__ import annotations

import argparse
import json
import os
import signal
import sys
from pathlib import Path

from vizbridge.bridge.server import BridgeServer
from vizbridge.datamodel import CsvError, DataError, EncodingError, load_csv
from vizbridge.gog import CompileError, LexError, ParseError, compile_scene, parse
from vizbridge.mocksce import MockScriptError, run_script, transcript_json
from vizbridge.rendersvg import RenderError, render_scene

EXIT_OK = 0
EXIT_BIND = 2
EXIT_COMPILE = 3
EXIT_PROTOCOL = 4

DEFAULT_PORT = 8750


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="vizbridge",
        description="Visualization kernel: bridge server, script renderer, mock SCE",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    serve = sub.add_parser("serve", help="run the bridge server")
    serve.add_argument("--port", type=int, default=None, help="listen port (beats DVP_PORT)")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument(
        "--data-dir", type=Path, default=None,
        help="directory of CSV files preloaded as variables (name = file stem)",
    )
    serve.add_argument(
        "--ui-dir", type=Path, default=None,
        help="static frontend bundle to serve at / (optional)",
    )

    render = sub.add_parser("render", help="compile a script against a CSV and write SVG")
    render.add_argument("script", type=Path)
    render.add_argument("--data", type=Path, required=True, help="CSV file")
    render.add_argument("-o", "--output", type=Path, required=True)
    render.add_argument("--size", default="800x600", help="canvas WxH in px")

    mock = sub.add_parser("mock-sce", help="run a protocol step script against a server")
    mock.add_argument("script", type=Path, help="JSON step script")
    mock.add_argument("--server", required=True, help="bridge server URL")
    mock.add_argument("-o", "--output", type=Path, default=None,
                      help="transcript file (default: stdout)")
    mock.add_argument("--timeout", type=float, default=30.0)
    return parser


def _resolve_port(flag_port: int | None) -> int:
    if flag_port is not None:
        return flag_port
    env = os.environ.get("DVP_PORT")
    if env:
        try:
            return int(env)
        except ValueError:
            print(f"ignoring non-numeric DVP_PORT={env!r}", file=sys.stderr)
    return DEFAULT_PORT


def cmd_serve(args) -> int:
    port = _resolve_port(args.port)
    try:
        server = BridgeServer(port=port, host=args.host, ui_dir=args.ui_dir)
    except OSError as exc:
        print(f"cannot bind port {port}: {exc}", file=sys.stderr)
        return EXIT_BIND
    if args.data_dir is not None:
        for csv_path in sorted(Path(args.data_dir).glob("*.csv")):
            try:
                ds = load_csv(csv_path.read_bytes(), name=csv_path.stem)
            except (CsvError, EncodingError, DataError) as exc:
                print(f"skipping {csv_path.name}: {exc}", file=sys.stderr)
                continue
            server.kernel.bind(csv_path.stem, ds)
            print(f"loaded {csv_path.stem}: {ds.n_rows}x{ds.n_cols}", file=sys.stderr)

    def on_interrupt(signum, frame):
        # shutdown() blocks until serve_forever exits, so it must not run on
        # the serving thread itself
        import threading

        threading.Thread(target=server.shutdown, daemon=True).start()

    signal.signal(signal.SIGINT, on_interrupt)
    signal.signal(signal.SIGTERM, on_interrupt)
    print(f"bridge listening on http://{args.host}:{server.port}", file=sys.stderr)
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        server.shutdown()
    return EXIT_OK


def _parse_size(text: str) -> tuple[int, int]:
    try:
        w, h = text.lower().split("x")
        return int(w), int(h)
    except ValueError:
        raise RenderError(f"size must look like 800x600, got {text!r}") from None


def cmd_render(args) -> int:
    try:
        source = args.script.read_text(encoding="utf-8")
        data = load_csv(args.data.read_bytes(), name=args.data.stem)
        size = _parse_size(args.size)
        scene = compile_scene(parse(source), data)
        svg = render_scene(scene, size)
    except (LexError, ParseError, CompileError, RenderError,
            CsvError, EncodingError, DataError) as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_COMPILE
    except OSError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_COMPILE
    args.output.write_text(svg, encoding="utf-8")
    return EXIT_OK


def cmd_mock_sce(args) -> int:
    try:
        steps_doc = json.loads(args.script.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        print(f"cannot read step script: {exc}", file=sys.stderr)
        return EXIT_PROTOCOL
    steps = steps_doc["steps"] if isinstance(steps_doc, dict) else steps_doc
    try:
        session = run_script(args.server, steps, timeout=args.timeout)
    except MockScriptError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_PROTOCOL
    text = transcript_json(session)
    if args.output is not None:
        args.output.write_text(text + "\n", encoding="utf-8")
    else:
        print(text)
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    if args.command == "serve":
        return cmd_serve(args)
    if args.command == "render":
        return cmd_render(args)
    return cmd_mock_sce(args)


if __name__ == "__main__":
    sys.exit(main())
