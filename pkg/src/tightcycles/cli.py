"""Command-line client for the workbench service.

Every subcommand builds a request, sends it to the service (in-process by
default; ``--server URL`` targets a running instance) and prints the JSON
response to stdout (or ``--out``).  A one-line run manifest with the
sha256 of the output goes to stderr: identical argv + seed must reproduce
identical output bytes.

Exit codes: 0 ok, 2 invalid input, 3 budget exhausted, 4 internal
consistency failure, 5 a pipeline run archived a link-check violation.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import sys
import time
from typing import Optional

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_BUDGET = 3
EXIT_INTERNAL = 4
EXIT_VIOLATION = 5

_CODE_EXITS = {
    "budget-exhausted": EXIT_BUDGET,
    "internal-consistency": EXIT_INTERNAL,
    "pi-mtc-not-bijective": EXIT_INTERNAL,
    "red-link-violation": EXIT_VIOLATION,
}


class _Client:
    """POSTs to the FastAPI app, in-process unless a server URL is given."""

    def __init__(self, server: Optional[str]):
        if server:
            import httpx

            self._client = httpx.Client(base_url=server, timeout=None)
        else:
            import warnings

            with warnings.catch_warnings():
                # the in-process transport is an implementation detail;
                # keep stderr clean for the manifest
                warnings.simplefilter("ignore")
                from fastapi.testclient import TestClient

                from .service.app import app

            self._client = TestClient(app)

    def post(self, path: str, body: dict) -> tuple[int, dict]:
        resp = self._client.post(path, json=body)
        return resp.status_code, resp.json()


def _read_graph(args) -> dict:
    text = sys.stdin.read() if args.infile in (None, "-") else open(args.infile).read()
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        _fail(f"malformed instance JSON: {exc}", EXIT_INVALID)
    if not isinstance(obj, dict):
        _fail("instance must be a JSON object", EXIT_INVALID)
    return obj


def _fail(message: str, code: int):
    print(json.dumps({"error": message}), file=sys.stderr)
    raise SystemExit(code)


def _flatten_for_csv(command: str, obj: dict) -> list[dict]:
    if command == "density":
        return [dict(level) for level in obj.get("levels", [])]
    if command == "components":
        return [
            {"color": c["color"], "id": c["id"], "size": c["size"]}
            for c in obj.get("components", [])
        ]
    if command == "ramsey":
        return [
            {
                "pattern": obj.get("pattern"),
                "value": obj.get("value"),
                "lower": obj.get("bounds", [None, None])[0],
                "upper": obj.get("bounds", [None, None])[1],
                "examined": obj.get("examined"),
            }
        ]
    if command == "mu":
        return [
            {k: obj.get(k) for k in ("value", "beta", "n", "k", "mode", "examined", "floor_binding")}
        ]
    if command == "pipeline":
        return [
            {
                "L": rec.get("L"),
                "outcome": rec.get("outcome"),
                "matching_size": rec.get("matching_size"),
                "phi": rec.get("weights", {}).get("phi"),
            }
            for rec in obj.get("trace", [])
        ]
    return [obj]


def _emit(args, command: str, status: int, obj: dict, started: float) -> int:
    if args.format == "csv":
        rows = _flatten_for_csv(command, obj)
        buf = io.StringIO()
        if rows:
            writer = csv.DictWriter(buf, fieldnames=list(rows[0].keys()))
            writer.writeheader()
            writer.writerows(rows)
        payload = buf.getvalue().encode()
    else:
        payload = (json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n").encode()
    if args.out in (None, "-"):
        sys.stdout.buffer.write(payload)
        sys.stdout.flush()
    else:
        with open(args.out, "wb") as fh:
            fh.write(payload)
    manifest = {
        "subcommand": command,
        "argv": getattr(args, "effective_argv", sys.argv[1:]),
        "seed": getattr(args, "seed", None),
        "caps": {"budget_nodes": getattr(args, "budget_nodes", None)},
        "wall_time_s": round(time.time() - started, 6),
        "output_sha256": hashlib.sha256(payload).hexdigest(),
    }
    print(json.dumps(manifest, sort_keys=True), file=sys.stderr)
    if status >= 400:
        return _CODE_EXITS.get(obj.get("error", ""), EXIT_INVALID)
    if command == "pipeline" and obj.get("archives"):
        return EXIT_VIOLATION
    if obj.get("status") == "budget-exhausted":
        return EXIT_BUDGET
    return EXIT_OK


def _add_common(p: argparse.ArgumentParser, graph_input: bool = False):
    p.add_argument("--server", default=None, help="remote service URL (default: in-process)")
    p.add_argument("--out", default=None, help="output path (default stdout)")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--budget-nodes", dest="budget_nodes", type=int, default=10**8)
    p.add_argument("--workers", type=int, default=1)
    if graph_input:
        p.add_argument("--in", dest="infile", default=None, help="instance path (default stdin)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tightcycles", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="emit a complete / random / extremal instance")
    kind = p.add_mutually_exclusive_group(required=True)
    kind.add_argument("--complete", action="store_true")
    kind.add_argument("--random", action="store_true")
    kind.add_argument("--extremal", action="store_true")
    p.add_argument("-k", type=int, required=True)
    p.add_argument("-n", type=int, required=True)
    p.add_argument("-i", type=int, default=0)
    p.add_argument("--p-red", default="1/2")
    _add_common(p)

    p = sub.add_parser("components", help="tight components (per colour if coloured)")
    _add_common(p, graph_input=True)

    p = sub.add_parser("walk", help="shortest pseudo-walk between two edges")
    p.add_argument("--edge-from", required=True, help="comma-separated vertices")
    p.add_argument("--edge-to", required=True)
    _add_common(p, graph_input=True)

    p = sub.add_parser("cycle", help="exhaustive tight cycle / path search")
    p.add_argument("--length", type=int, required=True)
    p.add_argument("--color", choices=("R", "B", "any"), default="any")
    p.add_argument("--path", action="store_true", help="search a tight path instead")
    _add_common(p, graph_input=True)

    p = sub.add_parser("matching", help="greedy / maximum / confined-LP matching")
    p.add_argument("--method", choices=("greedy", "maximum", "lp"), required=True)
    p.add_argument("--components", nargs="*", default=None, help="e.g. R:0 B:1 (lp)")
    p.add_argument("--within", default=None, help="e.g. R:0 restricts greedy")
    _add_common(p, graph_input=True)

    p = sub.add_parser("blowup", help="build a blow-up or convert matchings")
    p.add_argument("-r", type=int, required=True)
    p.add_argument("--emit-blown", action="store_true")
    p.add_argument("--convert", choices=("up", "down"), default=None)
    p.add_argument("--rprime", type=int, default=1)
    p.add_argument("--weights", default=None, help="fractional matching JSON path")
    p.add_argument("--density", default=None, help="eps,alpha: blown density report")
    _add_common(p, graph_input=True)

    p = sub.add_parser("pipeline", help="run the matching-growth pipeline")
    p.add_argument("--config", default=None, help="pipeline config JSON path")
    p.add_argument("--trace", default=None, help="also write the trace as JSON lines")
    _add_common(p, graph_input=True)

    p = sub.add_parser("extremal-verify", help="verify a parity instance")
    p.add_argument("-k", type=int, required=True)
    p.add_argument("-n", type=int, required=True)
    p.add_argument("-i", type=int, default=0)
    _add_common(p)

    p = sub.add_parser("ramsey", help="exact small Ramsey numbers")
    p.add_argument("--pattern", choices=("path", "cycle"), required=True)
    p.add_argument("-k", type=int, required=True)
    p.add_argument("-m", type=int, required=True)
    p.add_argument("--n-max", type=int, required=True)
    p.add_argument("--cap", type=int, default=20)
    _add_common(p)

    p = sub.add_parser("mu", help="exact worst-case confined matching number")
    p.add_argument("-k", type=int, required=True)
    p.add_argument("-n", type=int, required=True)
    p.add_argument("--beta", default="0")
    p.add_argument("--mode", choices=("single", "red-blue"), default="single")
    p.add_argument("--cap", type=int, default=20)
    _add_common(p)

    p = sub.add_parser("density", help="(mu, alpha)-density census")
    p.add_argument("--mu", required=True)
    p.add_argument("--alpha", required=True)
    _add_common(p, graph_input=True)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)

    return parser


def _ref(text: str) -> list:
    color, _, cid = text.partition(":")
    return [color, int(cid)]


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    args.effective_argv = list(argv) if argv is not None else sys.argv[1:]
    started = time.time()

    if args.command == "serve":
        import uvicorn

        from .service.app import app

        uvicorn.run(app, host=args.host, port=args.port)
        return EXIT_OK

    client = _Client(args.server)

    if args.command == "gen":
        kind = "complete" if args.complete else "random" if args.random else "extremal"
        body = {
            "kind": kind,
            "k": args.k,
            "n": args.n,
            "i": args.i,
            "p_red": args.p_red,
            "seed": args.seed,
        }
        status, obj = client.post("/gen", body)
        if status < 400:
            merged = dict(obj["graph"])
            if obj.get("extremal"):
                merged["extremal"] = obj["extremal"]
            if merged.get("colors") is None:
                merged.pop("colors", None)
            obj = merged
        return _emit(args, "gen", status, obj, started)

    if args.command == "components":
        status, obj = client.post("/components", {"graph": _read_graph(args)})
        return _emit(args, "components", status, obj, started)

    if args.command == "walk":
        body = {
            "graph": _read_graph(args),
            "edge_from": [int(v) for v in args.edge_from.split(",")],
            "edge_to": [int(v) for v in args.edge_to.split(",")],
        }
        status, obj = client.post("/walk", body)
        return _emit(args, "walk", status, obj, started)

    if args.command == "cycle":
        body = {
            "graph": _read_graph(args),
            "length": args.length,
            "color": args.color,
            "pattern": "path" if args.path else "cycle",
            "budget_nodes": args.budget_nodes,
        }
        status, obj = client.post("/cycle", body)
        return _emit(args, "cycle", status, obj, started)

    if args.command == "matching":
        body = {
            "graph": _read_graph(args),
            "method": args.method,
            "seed": args.seed,
            "budget_nodes": args.budget_nodes,
        }
        if args.components is not None:
            body["components"] = [_ref(c) for c in args.components]
        if args.within is not None:
            body["within"] = _ref(args.within)
        status, obj = client.post("/matching", body)
        return _emit(args, "matching", status, obj, started)

    if args.command == "blowup":
        graph = _read_graph(args)
        if args.density is not None:
            eps, _, alpha = args.density.partition(",")
            body = {"graph": graph, "r": args.r, "eps": eps, "alpha": alpha}
            status, obj = client.post("/blowup/density", body)
            return _emit(args, "density", status, obj, started)
        if args.convert:
            if not args.weights:
                _fail("--convert needs --weights", EXIT_INVALID)
            weights = json.loads(open(args.weights).read())
            body = {
                "graph": graph,
                "r": args.r,
                "direction": args.convert,
                "rprime": args.rprime,
                "weights": weights,
            }
            status, obj = client.post("/blowup/convert", body)
            return _emit(args, "blowup", status, obj, started)
        body = {"graph": graph, "r": args.r, "emit_blown": args.emit_blown}
        status, obj = client.post("/blowup", body)
        return _emit(args, "blowup", status, obj, started)

    if args.command == "pipeline":
        config = json.loads(open(args.config).read()) if args.config else {}
        if "seed" not in config:
            config["seed"] = args.seed
        status, obj = client.post("/pipeline", {"graph": _read_graph(args), "config": config})
        if status < 400 and args.trace:
            with open(args.trace, "w") as fh:
                for rec in obj.get("trace", []):
                    fh.write(json.dumps(rec, sort_keys=True) + "\n")
        return _emit(args, "pipeline", status, obj, started)

    if args.command == "extremal-verify":
        body = {"k": args.k, "n": args.n, "i": args.i, "budget_nodes": args.budget_nodes}
        status, obj = client.post("/extremal-verify", body)
        return _emit(args, "extremal-verify", status, obj, started)

    if args.command == "ramsey":
        body = {
            "pattern": args.pattern,
            "k": args.k,
            "m": args.m,
            "n_max": args.n_max,
            "cap": args.cap,
            "budget_nodes": args.budget_nodes,
            "workers": args.workers,
        }
        status, obj = client.post("/ramsey", body)
        return _emit(args, "ramsey", status, obj, started)

    if args.command == "mu":
        body = {
            "k": args.k,
            "n": args.n,
            "beta": args.beta,
            "mode": args.mode,
            "workers": args.workers,
            "cap": args.cap,
        }
        status, obj = client.post("/mu", body)
        return _emit(args, "mu", status, obj, started)

    if args.command == "density":
        body = {"graph": _read_graph(args), "mu": args.mu, "alpha": args.alpha}
        status, obj = client.post("/density", body)
        return _emit(args, "density", status, obj, started)

    raise AssertionError(f"unhandled command {args.command}")


if __name__ == "__main__":
    sys.exit(main())
