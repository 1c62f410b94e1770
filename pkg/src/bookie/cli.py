"""Command-line interface.

Exit codes: 0 success, 1 verification failure, 2 usage error (argparse),
3 numeric infeasibility (no real root), 4 I/O failure.
All output is deterministic for fixed flags and seeds: floats print with 17
significant digits and JSON field order is fixed.
"""
from __future__ import annotations

import argparse
import json
import math
import socket
import sys

from . import serialize, verify_suites
from .loss_poly import (
    NoRealRootInBracket,
    biased_coeffs,
    opportunistic_loss,
    opt_poly_coeffs,
    optimal_loss,
    regret,
    regret_factor_asymptotic,
    regret_factor_bounds,
)
from .sim import GamblerSpec, bookmaker_profit, realized_loss, replay_transcript, run_game, transcript_jsonl

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_USAGE = 2
EXIT_INFEASIBLE = 3
EXIT_IO = 4


def _parse_state(text: str) -> list[float]:
    if text.startswith("@"):
        with open(text[1:], "r", encoding="utf-8") as fh:
            data = json.load(fh)
    else:
        data = json.loads(text)
    if not isinstance(data, list) or not data or not all(isinstance(x, (int, float)) for x in data):
        raise ValueError("state must be a non-empty JSON array of numbers")
    return [float(x) for x in data]


def _parse_range(text: str) -> list[int]:
    """'2:6' (inclusive) or '1,10,100' or a single integer."""
    if ":" in text:
        a, b = text.split(":", 1)
        lo, hi = int(a), int(b)
        if hi < lo:
            raise ValueError(f"empty range {text!r}")
        return list(range(lo, hi + 1))
    return [int(x) for x in text.split(",")]


def cmd_loss(args) -> int:
    if (args.horizon is None) != (args.state is None):
        print("error: --horizon and --state go together", file=sys.stderr)
        return EXIT_USAGE
    if args.horizon is not None:
        state = _parse_state(args.state)
        loss = opportunistic_loss(args.horizon, state)
        reg = loss - args.horizon
        coeffs = [float(c) for c in biased_coeffs(args.horizon, state)]
    else:
        if args.T is None or args.K is None:
            print("error: provide --T and --K, or --horizon and --state", file=sys.stderr)
            return EXIT_USAGE
        loss = optimal_loss(args.T, args.K)
        reg = regret(args.T, args.K)
        coeffs = [float(c) for c in opt_poly_coeffs(args.T, args.K)]
    if args.json:
        print(serialize.dumps({"loss": loss, "regret": reg, "poly_coeffs": coeffs}))
    else:
        print(serialize.fmt17(loss))
    return EXIT_OK


def cmd_regret_table(args) -> int:
    t_values = _parse_range(args.T)
    k_values = _parse_range(args.K)
    if not t_values or not k_values:
        print("error: empty T or K range", file=sys.stderr)
        return EXIT_USAGE
    factors = {k: regret_factor_asymptotic(k) for k in sorted(set(k_values))}
    bounds = {k: regret_factor_bounds(k) for k in factors}
    lines = ["T,K,L,R,R_over_sqrtT,beta_K,A_K,B_K"]
    for T in t_values:
        for K in k_values:
            L = optimal_loss(T, K)
            R = regret(T, K)
            a, b = bounds[K]
            cells = [str(T), str(K)] + [
                serialize.fmt17(x) for x in (L, R, R / math.sqrt(T), factors[K], a, b)
            ]
            lines.append(",".join(cells))
    text = "\n".join(lines) + "\n"
    if args.csv:
        with open(args.csv, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_simulate(args) -> int:
    spec = GamblerSpec.parse(args.gambler)
    tr = run_game(
        args.K,
        args.T,
        spec,
        mode=args.mode,
        gamma=args.gamma,
        seed=args.seed,
        epsilon=args.epsilon,
    )
    summary = {
        "seed": tr.seed,
        "gambler": tr.gambler,
        "realized_loss": realized_loss(tr),
        "profit": bookmaker_profit(tr),
    }
    if args.json:
        sys.stdout.write(transcript_jsonl(tr))
        print(serialize.dumps(summary))
    else:
        print(
            f"K={args.K} T={args.T} gambler={tr.gambler} seed={tr.seed} "
            f"realized_loss={serialize.fmt17(summary['realized_loss'])} "
            f"profit={serialize.fmt17(summary['profit'])}"
        )
    return EXIT_OK


def cmd_verify(args) -> int:
    if args.replay:
        with open(args.replay, "r", encoding="utf-8") as fh:
            problems = replay_transcript(fh.read(), mode=args.mode, epsilon=args.epsilon)
        report = {
            "check": "transcript_replay",
            "params": {"file": args.replay},
            "observed": len(problems),
            "expected": 0,
            "tol": 0,
            "pass": not problems,
        }
        print(serialize.dumps(report))
        for p in problems:
            print(serialize.dumps({"check": "transcript_replay_detail", "detail": p, "pass": False}))
        return EXIT_OK if not problems else EXIT_VERIFY_FAILED
    if not args.suite:
        print("error: choose --suite or --replay", file=sys.stderr)
        return EXIT_USAGE
    if args.suite == "identities":
        items = verify_suites.identities_suite(n=args.n, seed=args.seed)
    elif args.suite == "frontier":
        items = verify_suites.frontier_suite(
            games=args.games, max_outcomes=args.max_K, max_rounds=args.max_T, seed=args.seed
        )
    elif args.suite == "exhaustive":
        items = verify_suites.exhaustive_suite(max_outcomes=args.max_K, max_rounds=args.max_T)
    elif args.suite == "grid":
        items = verify_suites.grid_suite()
    else:  # epsilon
        items = verify_suites.epsilon_suite(games=args.games, T=args.T, K=args.epsilon_K, seed=args.seed)
    failures = sum(1 for item in items if not item["pass"])
    for item in items:
        if not item["pass"] or args.verbose:
            print(serialize.dumps(item))
    print(
        serialize.dumps(
            {"suite": args.suite, "checks": len(items), "failures": failures, "pass": failures == 0}
        )
    )
    return EXIT_OK if failures == 0 else EXIT_VERIFY_FAILED


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    app = create_app(cors=args.cors, transcript_path=args.transcript_log)
    sock = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    sock.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
    try:
        sock.bind((args.host, args.port))
    except OSError as exc:
        print(f"error: cannot bind {args.host}:{args.port}: {exc}", file=sys.stderr)
        sock.close()
        return EXIT_IO
    host, port = sock.getsockname()[:2]
    print(f"listening on {host}:{port}", flush=True)
    config = uvicorn.Config(app, log_level="warning")
    server = uvicorn.Server(config)
    server.run(sockets=[sock])
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bookie", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("loss", help="optimal or opportunistic worst-case loss")
    p.add_argument("--T", type=int, help="number of rounds")
    p.add_argument("--K", type=int, help="number of outcomes")
    p.add_argument("--horizon", type=int, help="remaining rounds for a state query")
    p.add_argument("--state", help="committed payouts: JSON array or @file.json")
    p.add_argument("--json", action="store_true", help="emit {loss, regret, poly_coeffs}")
    p.set_defaults(fn=cmd_loss)

    p = sub.add_parser("regret-table", help="CSV of losses, regrets and Hermite factors")
    p.add_argument("--T", required=True, help="rounds: 'a:b' or comma list")
    p.add_argument("--K", required=True, help="outcomes: 'a:b' or comma list")
    p.add_argument("--csv", help="write the CSV to this file instead of stdout")
    p.set_defaults(fn=cmd_regret_table)

    p = sub.add_parser("simulate", help="play one game against a scripted/seeded gambler")
    p.add_argument("--K", type=int, required=True)
    p.add_argument("--T", type=int, required=True)
    p.add_argument("--gambler", default="decisive-seeded", help="e.g. uniform, decisive-fixed:1")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--gamma", type=float, default=1.0, help="overround (>= 1)")
    p.add_argument("--mode", choices=("exact", "epsilon"), default="exact")
    p.add_argument("--epsilon", type=float, default=None)
    p.add_argument("--json", action="store_true", help="emit the JSONL transcript plus a summary record")
    p.set_defaults(fn=cmd_simulate)

    p = sub.add_parser("verify", help="run a verification suite; JSON report lines")
    p.add_argument("--suite", choices=("identities", "frontier", "exhaustive", "grid", "epsilon"))
    p.add_argument("--replay", help="verify a JSONL transcript instead of a suite")
    p.add_argument("--mode", choices=("exact", "epsilon"), default="exact", help="replay engine mode")
    p.add_argument("--epsilon", type=float, default=None, help="replay epsilon")
    p.add_argument("--n", type=int, default=1000, help="identity fuzz instances")
    p.add_argument("--games", type=int, default=None, help="games for frontier/epsilon suites")
    p.add_argument("--max-K", dest="max_K", type=int, default=None)
    p.add_argument("--max-T", dest="max_T", type=int, default=None)
    p.add_argument("--T", type=int, default=50, help="rounds for the epsilon suite")
    p.add_argument("--epsilon-K", dest="epsilon_K", type=int, default=3, help="outcomes for the epsilon suite")
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--verbose", action="store_true", help="print passing checks too")
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("serve", help="run the JSON game service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8080)
    p.add_argument("--cors", action="store_true", help="allow cross-origin browser calls")
    p.add_argument("--transcript-log", help="append accepted bets to this JSONL file")
    p.set_defaults(fn=cmd_serve)

    return parser


def _fill_suite_defaults(args) -> None:
    if getattr(args, "command", "") == "verify":
        if args.games is None:
            args.games = 100 if args.suite == "frontier" else 200
        if args.max_K is None:
            args.max_K = 5 if args.suite == "frontier" else 4
        if args.max_T is None:
            args.max_T = 10 if args.suite == "frontier" else 6


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    _fill_suite_defaults(args)
    try:
        return args.fn(args)
    except NoRealRootInBracket as exc:
        print(f"error: no real root: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
