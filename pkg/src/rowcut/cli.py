"""Command-line front end; every command is a thin client of the service.

Commands normally talk to an in-process application instance, so no server
needs to run; pass --server to target a live one instead. Exit codes are
stable: 0 success, 2 malformed input or invalid flags, 3 no detectable
rows, 4 crossing borders, 64 unknown method.
"""

from __future__ import annotations

import argparse
import asyncio
import base64
import sys
from pathlib import Path

import httpx

from .pipeline import METHODS
from .service.app import create_app

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_NO_BANDS = 3
EXIT_CROSS = 4
EXIT_USAGE = 64

_EXIT_BY_ERROR = {
    "NoBands": EXIT_NO_BANDS,
    "DegenerateBands": EXIT_NO_BANDS,
    "BordersCross": EXIT_CROSS,
}


def _post(path: str, payload: dict, server: str | None) -> tuple[int, dict]:
    if server:
        with httpx.Client(base_url=server, timeout=300.0) as client:
            response = client.post(path, json=payload)
            return response.status_code, response.json()

    async def in_process() -> tuple[int, dict]:
        transport = httpx.ASGITransport(app=create_app())
        async with httpx.AsyncClient(
            transport=transport, base_url="http://rowcut.internal"
        ) as client:
            response = await client.post(path, json=payload)
            return response.status_code, response.json()

    return asyncio.run(in_process())


def _fail(status: int, body: object) -> int:
    name, detail = "", body
    if isinstance(body, dict):
        name = str(body.get("error", ""))
        detail = body.get("detail", body)
    print(f"error: {name or status}: {detail}", file=sys.stderr)
    if status == 400:
        return _EXIT_BY_ERROR.get(name, EXIT_INPUT)
    if status == 422:
        return EXIT_INPUT
    return 1


def _options_payload(args: argparse.Namespace) -> dict:
    return {
        "threshold": args.threshold,
        "skew_range_deg": args.skew_range,
        "skew_step_deg": args.skew_step,
        "smooth_window": args.smooth_window,
        "band_threshold": args.band_threshold,
        "epsilon": args.epsilon,
        "resume_lookahead": args.resume_lookahead,
        "exterior_first": not args.interior_first,
    }


def _read_image_b64(path: str) -> str:
    data = Path(path).read_bytes()
    return base64.b64encode(data).decode("ascii")


def _check_method(parser: argparse.ArgumentParser, method: str) -> int | None:
    if method not in METHODS:
        print(
            f"unknown method {method!r}; expected one of {', '.join(METHODS)}",
            file=sys.stderr,
        )
        parser.print_usage(sys.stderr)
        return EXIT_USAGE
    return None


def cmd_segment(parser: argparse.ArgumentParser, args: argparse.Namespace) -> int:
    usage = _check_method(parser, args.method)
    if usage is not None:
        return usage
    try:
        image_b64 = _read_image_b64(args.input)
    except OSError as exc:
        print(f"error: cannot read {args.input}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    payload = {
        "image_b64": image_b64,
        "method": args.method,
        "options": _options_payload(args),
    }
    status, body = _post("/segment", payload, args.server)
    if status != 200:
        return _fail(status, body)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    for k, row_b64 in enumerate(body["rows_b64"]):
        (out_dir / f"row_{k:03d}.pbm").write_bytes(base64.b64decode(row_b64))
    (out_dir / "borders.txt").write_text(body["borders_text"])
    print(
        f"rows={body['row_count']} events={body['event_count']} "
        f"amputated={body['amputated_components']}"
    )
    return EXIT_OK


def cmd_render(parser: argparse.ArgumentParser, args: argparse.Namespace) -> int:
    usage = _check_method(parser, args.method)
    if usage is not None:
        return usage
    try:
        image_b64 = _read_image_b64(args.input)
    except OSError as exc:
        print(f"error: cannot read {args.input}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    payload = {
        "image_b64": image_b64,
        "method": args.method,
        "options": _options_payload(args),
    }
    status, body = _post("/render", payload, args.server)
    if status != 200:
        return _fail(status, body)
    Path(args.out).write_bytes(base64.b64decode(body["overlay_b64"]))
    print(args.out)
    return EXIT_OK


def cmd_gen(parser: argparse.ArgumentParser, args: argparse.Namespace) -> int:
    payload = {
        "rows": args.rows,
        "width": args.width,
        "row_height": args.row_height,
        "overlap": args.overlap,
        "diacritic": args.diacritic,
        "unresolvable": args.unresolvable,
        "seed": args.seed,
    }
    status, body = _post("/generate", payload, args.server)
    if status != 200:
        return _fail(status, body)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "page.pbm").write_bytes(base64.b64decode(body["page_b64"]))
    (out_dir / "truth.txt").write_text(body["truth_text"])
    print(f"components={body['component_count']}")
    return EXIT_OK


def cmd_compare(parser: argparse.ArgumentParser, args: argparse.Namespace) -> int:
    if args.samples < 1:
        print("error: --samples must be at least 1", file=sys.stderr)
        return EXIT_INPUT
    if args.methods:
        unknown = [m for m in args.methods if m not in METHODS]
        if unknown:
            print(f"error: unknown methods {unknown}", file=sys.stderr)
            return EXIT_INPUT
    payload = {
        "samples": args.samples,
        "seed": args.seed,
        "rows": args.rows,
        "width": args.width,
        "row_height": args.row_height,
        "overlap": args.overlap,
        "diacritic": args.diacritic,
        "unresolvable": args.unresolvable,
        "methods": args.methods,
        "options": _options_payload(args),
    }
    status, body = _post("/compare", payload, args.server)
    if status != 200:
        return _fail(status, body)
    print(body["table"], end="")
    Path(args.csv).write_text(body["csv"])
    return EXIT_OK


def cmd_serve(parser: argparse.ArgumentParser, args: argparse.Namespace) -> int:
    import uvicorn

    uvicorn.run(create_app(), host=args.host, port=args.port)
    return EXIT_OK


def _add_options_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--threshold", type=int, default=128)
    sub.add_argument("--skew-range", type=float, default=10.0)
    sub.add_argument("--skew-step", type=float, default=0.25)
    sub.add_argument("--smooth-window", type=int, default=9)
    sub.add_argument("--band-threshold", type=float, default=0.2)
    sub.add_argument("--epsilon", type=float, default=2.0)
    sub.add_argument("--resume-lookahead", type=int, default=3)
    sub.add_argument(
        "--interior-first",
        action="store_true",
        help="try the interior detour before the exterior one",
    )


def _add_corpus_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--rows", type=int, default=4)
    sub.add_argument("--width", type=int, default=400)
    sub.add_argument("--row-height", type=int, default=75)
    sub.add_argument("--overlap", type=float, default=0.6)
    sub.add_argument("--diacritic", type=float, default=0.5)
    sub.add_argument("--unresolvable", type=float, default=0.0)
    sub.add_argument("--seed", type=int, default=42)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rowcut",
        description="Text-row segmentation with straight, bottom-edge, and flexible borders.",
    )
    parser.add_argument(
        "--server",
        default=None,
        help="base URL of a running service; default runs in-process",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    seg = commands.add_parser("segment", help="cut a page into row images")
    seg.add_argument("input", help="PBM/PGM page")
    seg.add_argument("--method", default="flexible")
    seg.add_argument("--out-dir", default=".")
    _add_options_flags(seg)
    seg.set_defaults(func=cmd_segment)

    ren = commands.add_parser("render", help="write a border overlay image")
    ren.add_argument("input", help="PBM/PGM page")
    ren.add_argument("--method", default="flexible")
    ren.add_argument("--out", default="overlay.ppm")
    _add_options_flags(ren)
    ren.set_defaults(func=cmd_render)

    gen = commands.add_parser("gen", help="generate a synthetic page with ground truth")
    _add_corpus_flags(gen)
    gen.add_argument("--out", default=".")
    gen.set_defaults(func=cmd_gen)

    cmp_ = commands.add_parser("compare", help="evaluate all methods over a corpus")
    cmp_.add_argument("--samples", type=int, default=24)
    _add_corpus_flags(cmp_)
    cmp_.add_argument("--methods", nargs="+", default=None)
    cmp_.add_argument("--csv", default="compare.csv")
    _add_options_flags(cmp_)
    cmp_.set_defaults(func=cmd_compare)

    srv = commands.add_parser("serve", help="run the HTTP service")
    srv.add_argument("--host", default="127.0.0.1")
    srv.add_argument("--port", type=int, default=8000)
    srv.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    return args.func(parser, args)


if __name__ == "__main__":
    sys.exit(main())
