"""Thin-client CLI: every subcommand is an HTTP call against the service.

By default the service runs in-process (no socket); ``--server URL``
targets a remote instance and ``serve`` starts one with uvicorn.

Exit codes: 0 success, 2 config error, 3 solver non-convergence,
4 theorem-precondition violation.
"""

from __future__ import annotations

import argparse
import sys

import httpx

from .config import parse_config
from .errors import ToolError
from .reporting import to_csv, to_json

_EXIT_BY_CODE = {"config_error": 2, "solver_error": 3, "precondition_error": 4}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="odelay-lab",
        description="Comparator overdrive-delay analysis toolkit",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, needs_config: bool = True, **kwargs):
        p = sub.add_parser(name, **kwargs)
        p.add_argument("--config", required=needs_config,
                       help="path to the JSON analysis config")
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--out", default=None, help="write output to this file")
        p.add_argument("--server", default=None,
                       help="base URL of a running service (default: in-process)")
        return p

    add("simulate", help="solve one comparator cycle")
    p = add("bounds", help="closed-form delay bounds")
    p.add_argument("--w-at-tc", type=float, default=0.0,
                   help="interference value at the crossing time")
    add("k3", help="worst-case K value over offset and phases")
    add("continuity", help="static-mapping continuity condition")
    p = add("sector", help="one-sided sector difference quotients")
    p.add_argument("--delta", type=float, default=None)
    add("loop", help="multi-cycle constant off-time trajectory")
    p = add("aux", needs_config=False, help="stability auxiliary function")
    p.add_argument("--x", type=float, required=True)
    p.add_argument("--mu", type=float, required=True)
    p = add("sweep", help="Monte Carlo phase sweep against the delay bounds")
    p.add_argument("--draws", type=int, default=1000)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--workers", type=int, default=1)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    return parser


def _client(server: str | None) -> httpx.Client:
    if server:
        return httpx.Client(base_url=server, timeout=600.0)
    # in-process client: same service code, no socket
    from fastapi.testclient import TestClient

    from .service import app

    return TestClient(app)


def _payload(args) -> tuple[str, dict]:
    if args.command == "aux":
        return "aux", {"x": args.x, "mu": args.mu}
    cfg = parse_config(args.config)
    body: dict = {"config": cfg.model_dump()}
    if args.command == "bounds":
        body["w_at_tc"] = args.w_at_tc
    elif args.command == "sector" and args.delta is not None:
        body["delta"] = args.delta
    elif args.command == "sweep":
        body["draws"] = args.draws
        body["workers"] = args.workers
        if args.seed is not None:
            body["seed"] = args.seed
    return args.command, body


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)

    if args.command == "serve":
        import uvicorn

        from .service import app

        uvicorn.run(app, host=args.host, port=args.port)
        return 0

    try:
        name, body = _payload(args)
    except ToolError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code

    with _client(args.server) as client:
        resp = client.post(f"/v1/analyses/{name}", json=body)
    if resp.status_code != 200:
        try:
            detail = resp.json()
        except ValueError:
            detail = {}
        code = detail.get("code", "config_error" if resp.status_code == 422 else "tool_error")
        message = detail.get("message", detail.get("detail", resp.text))
        print(f"error ({code}): {message}", file=sys.stderr)
        return _EXIT_BY_CODE.get(code, 1)

    data = resp.json()
    render = to_csv if args.format == "csv" else to_json
    text = render(data["columns"], data["rows"])
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
