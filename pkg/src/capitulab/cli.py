"""capitulab command line: a thin client of the service.

By default commands talk to an in-process instance of the app (no
daemon needed, runs stay reproducible); --server redirects the same
requests to a running instance.  JSON goes to stdout, diagnostics to
stderr.  Exit codes: 0 success, 1 verification failure, 2 usage or
parse error.
"""

from __future__ import annotations

import argparse
import json
import sys


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(prog="capitulab")
    top.add_argument("--server", default=None,
                     help="base URL of a running service (default: in-process)")
    sub = top.add_subparsers(dest="command", required=True)

    p = sub.add_parser("cubic-sweep", help="conductor sweep over cyclic cubic fields")
    p.add_argument("--p", type=int, default=2)
    p.add_argument("--N", type=int, default=2)
    p.add_argument("--Nn", type=int, default=2)
    p.add_argument("--bf", type=int, default=7)
    p.add_argument("--Bf", type=int, default=5000)
    p.add_argument("--vHK", type=int, default=4)
    p.add_argument("--vHKn", type=int, default=6)
    p.add_argument("--Bell", type=int, default=500)
    p.add_argument("--fixtures", default=None, help="transcript fixture file")
    p.add_argument("--published-corpus", action="store_true",
                   help="attach the bundled experiment corpus")

    p = sub.add_parser("quad", help="real quadratic field report")
    p.add_argument("m", type=int)
    p.add_argument("--p", type=int, default=3)
    p.add_argument("--N", type=int, default=2)
    p.add_argument("--Bell", type=int, default=500)
    p.add_argument("--vHK", type=int, default=1)
    p.add_argument("--fixtures", default=None)
    p.add_argument("--published-corpus", action="store_true")

    p = sub.add_parser("analyze", help="capitulation verdicts for a fixture file")
    p.add_argument("fixture", help="path to a transcript fixture file, or - for stdin")

    p = sub.add_parser("verify", help="run a named verification suite")
    p.add_argument("suite", choices=["cyclo-norms", "chevalley", "analytic-index", "characters"])
    p.add_argument("--param", action="append", default=[], metavar="KEY=INT",
                   help="suite parameter override (repeatable)")

    p = sub.add_parser("simulate", help="sample admissible filtration ledgers")
    p.add_argument("divisors", help="comma-separated invariant factors, e.g. 9,3")
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, default=1)

    p = sub.add_parser("cyclo", help="cyclotomic-unit calculus")
    cyc = p.add_subparsers(dest="verb", required=True)
    q = cyc.add_parser("norm", help="check the norm relation for (f, m)")
    q.add_argument("f", type=int)
    q.add_argument("m", type=int)
    q = cyc.add_parser("theta", help="cyclotomic number of a fundamental discriminant")
    q.add_argument("f", type=int)
    q = cyc.add_parser("index", help="unit-index exponent vs class number")
    q.add_argument("f", type=int)

    p = sub.add_parser("characters", help="p-adic character calculus")
    ch = p.add_subparsers(dest="verb", required=True)
    q = ch.add_parser("enumerate")
    q.add_argument("d", type=int)
    q.add_argument("p", type=int)
    q = ch.add_parser("decompose")
    q.add_argument("--divisors", required=True, help="comma-separated, e.g. 4,4")
    q.add_argument("--sigma", required=True,
                   help="semicolon-separated rows, e.g. '0,-1;1,-1'")
    q.add_argument("--d", type=int, required=True)
    q.add_argument("--p", type=int, required=True)
    q = ch.add_parser("resolve")
    q.add_argument("--d", type=int, required=True)
    q.add_argument("--data", required=True,
                   help="divisor=value pairs, e.g. '1=1,2=2,3=3,6=30'")

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)

    return top


def _read_fixture(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


def _int_list(text: str) -> list[int]:
    return [int(t) for t in text.split(",") if t.strip()]


def _request_for(args) -> tuple[str, dict]:
    cmd = args.command
    if cmd == "cubic-sweep":
        payload = {
            "config": {k: getattr(args, k) for k in
                       ("p", "N", "Nn", "bf", "Bf", "vHK", "vHKn", "Bell")},
            "fixtures_text": _read_fixture(args.fixtures) if args.fixtures else None,
            "published_corpus": args.published_corpus,
        }
        return "/v1/cubic-sweep", payload
    if cmd == "quad":
        return "/v1/quad", {
            "m": args.m, "p": args.p, "N": args.N, "Bell": args.Bell, "vHK": args.vHK,
            "fixtures_text": _read_fixture(args.fixtures) if args.fixtures else None,
            "published_corpus": args.published_corpus,
        }
    if cmd == "analyze":
        return "/v1/analyze", {"text": _read_fixture(args.fixture)}
    if cmd == "verify":
        params = {}
        for item in args.param:
            key, _, value = item.partition("=")
            params[key] = int(value)
        return "/v1/verify", {"suite": args.suite, "params": params}
    if cmd == "simulate":
        return "/v1/simulate", {
            "divisors": _int_list(args.divisors),
            "n": args.n, "seed": args.seed, "count": args.count,
        }
    if cmd == "cyclo":
        if args.verb == "norm":
            return "/v1/cyclo/norm", {"f": args.f, "m": args.m}
        if args.verb == "theta":
            return "/v1/cyclo/theta", {"f": args.f}
        return "/v1/cyclo/index", {"f": args.f}
    if cmd == "characters":
        if args.verb == "enumerate":
            return "/v1/characters/enumerate", {"d": args.d, "p": args.p}
        if args.verb == "decompose":
            sigma = [_int_list(row) for row in args.sigma.split(";")]
            return "/v1/characters/decompose", {
                "divisors": _int_list(args.divisors), "sigma": sigma,
                "d": args.d, "p": args.p,
            }
        data = {}
        for item in args.data.split(","):
            key, _, value = item.partition("=")
            data[int(key)] = value
        return "/v1/characters/resolve", {"d": args.d, "per_subfield": data}
    raise AssertionError(f"unhandled command {cmd}")


class _InProcessClient:
    """Minimal sync httpx bridge onto the ASGI app (no daemon needed)."""

    def __init__(self):
        import httpx

        from .service import app

        self._httpx = httpx
        self._transport = httpx.ASGITransport(app=app)

    def post(self, url: str, json=None):
        import asyncio

        async def go():
            async with self._httpx.AsyncClient(
                transport=self._transport, base_url="http://capitulab.local", timeout=600.0
            ) as client:
                return await client.post(url, json=json)

        return asyncio.run(go())

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        return False


def _client(server: str | None):
    if server:
        import httpx

        return httpx.Client(base_url=server, timeout=600.0)
    return _InProcessClient()


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    if args.command == "serve":
        import uvicorn

        from .service import app

        uvicorn.run(app, host=args.host, port=args.port)
        return 0

    try:
        endpoint, payload = _request_for(args)
    except OSError as exc:
        print(f"capitulab: {exc}", file=sys.stderr)
        return 2

    with _client(args.server) as client:
        resp = client.post(endpoint, json=payload)
    if resp.status_code in (400, 422):
        detail = resp.json().get("detail", resp.text)
        print(f"capitulab: {detail}", file=sys.stderr)
        return 2
    if resp.status_code != 200:
        print(f"capitulab: service error {resp.status_code}: {resp.text}", file=sys.stderr)
        return 1
    data = resp.json()
    json.dump(data, sys.stdout, indent=2)
    sys.stdout.write("\n")
    if args.command == "verify" and not data.get("passed", False):
        print(f"capitulab: suite {data.get('suite')} failed", file=sys.stderr)
        return 1
    if args.command == "cyclo" and args.verb in ("norm", "index"):
        if not data.get("holds", data.get("match", True)):
            print("capitulab: identity check failed", file=sys.stderr)
            return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
