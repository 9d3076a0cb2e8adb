"""Command-line front end.

The CLI is a thin client of the HTTP service: by default it mounts the app
in-process (no server needed), with --server it talks to a running instance.

Exit codes: 0 ok, 2 usage/validation, 3 input parse or IO failure,
4 search returned nothing, 5 internal invariant breach.
"""

from __future__ import annotations

import argparse
import asyncio
import json
import sys
from pathlib import Path

import httpx

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_IO = 3
EXIT_SEARCH = 4
EXIT_INTERNAL = 5


class ServiceClient:
    """POST helper that either talks to a running server or drives the app
    in-process over ASGI (no sockets involved)."""

    def __init__(self, server: str | None):
        self._server = server
        if server is None:
            from .service import app

            self._transport = httpx.ASGITransport(app=app, raise_app_exceptions=False)

    def post(self, path: str, payload: dict) -> httpx.Response:
        if self._server:
            with httpx.Client(base_url=self._server, timeout=600.0) as client:
                return client.post(path, json=payload)

        async def _go():
            async with httpx.AsyncClient(
                transport=self._transport, base_url="http://rvbkit", timeout=600.0
            ) as client:
                return await client.post(path, json=payload)

        return asyncio.run(_go())


class OutputError(OSError):
    pass


def _emit(text: str, out: str | None) -> None:
    if out:
        try:
            Path(out).write_text(text, encoding="utf-8")
        except OSError as exc:
            raise OutputError(f"cannot write {out}: {exc}") from exc
    else:
        sys.stdout.write(text)


def _dump_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _fail(code: int, message: str) -> int:
    print(message, file=sys.stderr)
    return code


def _check(resp: httpx.Response, parse_exit: int = EXIT_USAGE) -> tuple[dict | None, int]:
    """(payload, 0) on success; (None, exit code) with the error printed."""
    if resp.status_code == 200:
        return resp.json(), EXIT_OK
    try:
        detail = resp.json().get("detail")
    except Exception:
        detail = resp.text
    print(f"error ({resp.status_code}): {detail}", file=sys.stderr)
    return None, EXIT_INTERNAL if resp.status_code >= 500 else parse_exit


def _pretty_state(data: dict) -> str:
    import numpy as np

    lines = [f"n = {data['n']}  sector = {data['sector']}  entries = {len(data['amplitudes'])}"]
    lines.append(f"{'bits':<{data['n'] + 2}} {'magnitude':>12} {'phase/pi':>10}")
    for entry in data["amplitudes"]:
        a = complex(entry["re"], entry["im"])
        lines.append(f"{entry['bits']:<{data['n'] + 2}} {abs(a):>12.8f} {np.angle(a) / np.pi:>10.6f}")
    return "\n".join(lines) + "\n"


def _pretty_measure(data: dict) -> str:
    lines = [
        f"n = {data['n']}   e2v = {data['e2v']:.7f}   e2v_max = {data['e2v_max']:.7f}   ic = {data['ic']:.7f}",
        f"homogeneous = {data['homogeneous']}   isotropic = {data['isotropic']}",
        f"{'pair':>8} {'szsz':>12} {'sdots':>12} {'entropy':>10} {'wootters':>10} {'werner_p':>10}",
    ]
    for p in data["pairs"]:
        wp = "-" if p["werner_p"] is None else f"{p['werner_p']:.6f}"
        lines.append(
            f"({p['sites'][0]},{p['sites'][1]}) ".rjust(9)
            + f"{p['szsz']:>12.8f} {p['sdots']:>12.8f} {p['entropy']:>10.6f} {p['wootters']:>10.6f} {wp:>10}"
        )
    return "\n".join(lines) + "\n"


def _measure_csv(data: dict) -> str:
    rows = ["i,j,szsz,sdots,entropy,purity,iconc_term,wootters,werner_p"]
    for p in data["pairs"]:
        wp = "" if p["werner_p"] is None else repr(p["werner_p"])
        rows.append(
            f"{p['sites'][0]},{p['sites'][1]},{p['szsz']!r},{p['sdots']!r},"
            f"{p['entropy']!r},{p['purity']!r},{p['iconc_term']!r},{p['wootters']!r},{wp}"
        )
    return "\n".join(rows) + "\n"


def cmd_rumer(args, client: ServiceClient) -> int:
    data, code = _check(client.post("/rumer", {"n": args.n, "all_matchings": args.all}))
    if data is None:
        return code
    if args.count_only:
        _emit(f"{data['count']}\n", args.out)
        return EXIT_OK
    if args.format == "pretty":
        lines = [f"{data['count']} matchings for n = {data['n']}"]
        lines += [" ".join(f"({i},{j})" for i, j in m["pairs"]) for m in data["matchings"]]
        _emit("\n".join(lines) + "\n", args.out)
    else:
        _emit(_dump_json(data), args.out)
    return EXIT_OK


def cmd_state(args, client: ServiceClient) -> int:
    payload: dict = {"n": args.n}
    if args.family:
        payload["family"] = args.family
    if args.matching:
        try:
            payload["matching"] = json.loads(Path(args.matching).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            return _fail(EXIT_IO, f"cannot read matching file: {exc}")
    data, code = _check(client.post("/state", payload))
    if data is None:
        return code
    _emit(_pretty_state(data) if args.format == "pretty" else _dump_json(data), args.out)
    return EXIT_OK


def cmd_measure(args, client: ServiceClient) -> int:
    try:
        state = json.loads(Path(args.state).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        return _fail(EXIT_IO, f"cannot parse state file: {exc}")
    pairs = None
    if args.pairs and args.pairs != "all":
        try:
            i, j = (int(x) for x in args.pairs.split(","))
            pairs = [(i, j)]
        except ValueError:
            return _fail(EXIT_USAGE, f"--pairs wants 'all' or 'i,j', got {args.pairs!r}")
    payload = {"state": state, "pairs": pairs, "tolerance": args.tolerance}
    data, code = _check(client.post("/measure", payload), parse_exit=EXIT_IO)
    if data is None:
        return code
    if args.format == "pretty":
        _emit(_pretty_measure(data), args.out)
    elif args.format == "csv":
        _emit(_measure_csv(data), args.out)
    else:
        _emit(_dump_json(data), args.out)
    return EXIT_OK


def cmd_solve(args, client: ServiceClient) -> int:
    data, code = _check(
        client.post(
            "/solve",
            {
                "n": args.n,
                "method": args.method,
                "seed": args.seed,
                "restarts": args.restarts,
                "tolerance": args.tolerance,
            },
        )
    )
    if data is None:
        return code
    if data["count"] == 0:
        print(f"no certified state found for n={args.n} ({args.method})", file=sys.stderr)
        return EXIT_SEARCH
    if args.format == "pretty":
        lines = [f"n = {data['n']}  method = {data['method']}  states = {data['count']}  rank = {data['rank']}"]
        for k, (st, cert) in enumerate(zip(data["states"], data["certificates"])):
            flags = cert
            lines.append(
                f"state {k}: e2v = {cert['e2v']:.9f} (max {cert['e2v_max']:.9f})  "
                f"homogeneous = {flags['is_homogeneous']}  isotropic = {flags['is_isotropic']}"
            )
        _emit("\n".join(lines) + "\n", args.out)
    else:
        _emit(_dump_json(data), args.out)
    return EXIT_OK


def cmd_spectrum(args, client: ServiceClient) -> int:
    model = {"iirhm": "iirhm", "ring": "heisenberg_ring", "chain": "heisenberg_chain"}[args.model]
    data, code = _check(client.post("/spectrum", {"model": model, "n": args.n, "j_star": args.jstar}))
    if data is None:
        return code
    if args.format == "pretty":
        lines = [
            f"{data['model']}  n = {data['n']}  J* = {data['j_star']}",
            f"ground energy = {data['ground_energy']:.9f}  degeneracy = {data['ground_degeneracy']}",
            f"{'energy':>14} {'multiplicity':>13} {'S_T':>4}",
        ]
        for lv in data["levels"]:
            lines.append(f"{lv['energy']:>14.9f} {lv['multiplicity']:>13} {lv['s_t']:>4}")
        _emit("\n".join(lines) + "\n", args.out)
    else:
        _emit(_dump_json(data), args.out)
    return EXIT_OK


def cmd_curve(args, client: ServiceClient) -> int:
    data, code = _check(client.post("/curve", {"what": args.what, "n_max": args.n_max}))
    if data is None:
        return code
    rows = ["n,value,ratio"] + [f"{r['n']},{r['value']!r},{r['ratio']!r}" for r in data["rows"]]
    _emit("\n".join(rows) + "\n", args.out)
    return EXIT_OK


def cmd_serve(args, _client=None) -> int:
    import uvicorn

    from .service import app

    uvicorn.run(app, host=args.host, port=args.port)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rvbkit",
        description="valence-bond entanglement toolkit (thin client over the rvbkit service)",
    )
    parser.add_argument("--server", default=None, help="base URL of a running service (default: in-process)")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--format", choices=("json", "csv", "pretty"), default="json")
        p.add_argument("--out", default=None, help="write output to this path instead of stdout")

    p = sub.add_parser("rumer", help="enumerate singlet coverings")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--all", action="store_true", help="include crossing matchings")
    p.add_argument("--count-only", action="store_true")
    common(p)
    p.set_defaults(func=cmd_rumer)

    p = sub.add_parser("state", help="emit a named state or a singlet-cover product state")
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--family", choices=("hs", "hs-conj", "six-a", "six-a-conj", "six-b", "six-c", "six-c-conj"))
    p.add_argument("--matching", help="path to a matching JSON file")
    common(p)
    p.set_defaults(func=cmd_state)

    p = sub.add_parser("measure", help="full entanglement report for a state file")
    p.add_argument("--state", required=True, help="path to a state JSON file")
    p.add_argument("--pairs", default="all", help="'all' or a single pair 'i,j'")
    p.add_argument("--tolerance", type=float, default=None, help="override every certificate threshold")
    common(p)
    p.set_defaults(func=cmd_measure)

    p = sub.add_parser("solve", help="construct maximal-entanglement states")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--method", choices=("exact", "torus"), default="exact")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--restarts", type=int, default=100)
    p.add_argument("--tolerance", type=float, default=None, help="override every certificate threshold")
    common(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("spectrum", help="sector spectrum of a model Hamiltonian")
    p.add_argument("--model", choices=("iirhm", "ring", "chain"), required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--jstar", type=float, default=1.0)
    common(p)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("curve", help="size dependence of the entanglement maxima as CSV")
    p.add_argument("--what", choices=("e2vmax", "iconc"), default="e2vmax")
    p.add_argument("--n-max", type=int, default=100)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_curve, format="csv")

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "serve":
        return cmd_serve(args)
    client = ServiceClient(args.server)
    try:
        return args.func(args, client)
    except httpx.HTTPError as exc:
        return _fail(EXIT_IO, f"transport failure: {exc}")
    except OutputError as exc:
        return _fail(EXIT_IO, str(exc))


if __name__ == "__main__":
    sys.exit(main())
