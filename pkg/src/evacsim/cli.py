"""Command line front end: run, compare, validate, serve.

Exit codes: 0 success, 1 validation or input failure, 2 simulation incomplete.
The run summary mirrors the normalized-value table (mean over runs, sample
std), with phi/xi columns only when the configurations are comparable.
"""

from __future__ import annotations

import argparse
import json
import socket
import sys
from pathlib import Path

from .runner import SimulationIncomplete, ValidationFailure, run_scenario
from .engine import SimParams
from .results import load_manifest, save_results
from .scenario import check_comparability
from .scenario_io import ScenarioFormatError, load_scenario

MAX_CONFIGS = 4  # command-line and UI cap; the library itself accepts more


def _fail(msg: str, code: int = 1) -> int:
    print(f"error: {msg}", file=sys.stderr)
    return code


def _load(path: str):
    try:
        return load_scenario(path)
    except FileNotFoundError:
        raise ScenarioFormatError(f"{path}: file not found")
    except OSError as exc:
        raise ScenarioFormatError(f"{path}: {exc.strerror or exc}")


def _table(headers: list[str], rows: list[list[str]]) -> str:
    widths = [max(len(h), *(len(r[i]) for r in rows)) if rows else len(h)
              for i, h in enumerate(headers)]
    fmt = "  ".join(f"{{:<{w}}}" for w in widths)
    lines = [fmt.format(*headers)]
    for r in rows:
        lines.append(fmt.format(*r))
    return "\n".join(lines)


def _ms(ms) -> str:
    return f"{ms.mean:.3f} ±{ms.std:.3f}"


def _print_summary(bundle) -> None:
    print(f"scenario: {bundle.scenario_name} "
          f"({len(bundle.configurations)} configurations, "
          f"{bundle.runs} runs, seed {bundle.seed})")
    print(f"comparable: {'yes' if bundle.comparable else 'no'}")
    if bundle.comparability is not None and not bundle.comparable:
        for line in bundle.comparability.details:
            print(f"  - {line}")
    print()

    headers = ["config", "t_g'", "t_bar'", "d_bar", "s_bar'", "w_bar'"]
    if bundle.comparable:
        headers += ["phi", "xi"]
    rows = []
    for cr in bundle.configurations:
        agg = cr.aggregate
        row = [cr.config.id,
               _ms(agg.primes["t_g_prime"]),
               _ms(agg.primes["t_bar_prime"]),
               _ms(agg.metrics["d_bar"]),
               _ms(agg.primes["s_bar_prime"]),
               _ms(agg.primes["w_bar_prime"])]
        if bundle.comparable:
            row += [_ms(agg.phi), _ms(agg.xi)]
        rows.append(row)
    print(_table(headers, rows))

    if bundle.comparable:
        print()
        for key, label in (("phi", "[PHI]"), ("xi", "[XI]")):
            order = bundle.ranking[key]
            print(f"{label} best: {order[0]}   order: {' < '.join(order)}")


def cmd_run(args) -> int:
    try:
        scenario = _load(args.scenario)
    except ScenarioFormatError as exc:
        return _fail(str(exc))
    if len(scenario.configurations) > MAX_CONFIGS:
        return _fail(f"scenario has {len(scenario.configurations)} "
                     f"configurations; this command caps at {MAX_CONFIGS}")

    params = SimParams(timestep=args.timestep, preferred_speed=args.speed)
    out_dir = Path(args.out) if args.out else Path("results") / Path(args.scenario).stem

    def progress(done, total):
        print(f"  {done}/{total} configurations finished", file=sys.stderr)

    try:
        bundle = run_scenario(scenario, runs=args.runs, seed=args.seed,
                              params=params, workers=args.workers,
                              progress=progress)
    except ValidationFailure as exc:
        return _fail(f"invalid scenario: {exc}")
    except SimulationIncomplete as exc:
        return _fail(str(exc), code=2)

    save_results(bundle, out_dir, figures=not args.no_figures)
    _print_summary(bundle)
    print(f"\nresults written to {out_dir}")
    return 0


def cmd_compare(args) -> int:
    try:
        doc = load_manifest(args.results_dir)
    except FileNotFoundError as exc:
        return _fail(str(exc))
    except (OSError, json.JSONDecodeError) as exc:
        return _fail(f"{args.results_dir}: {exc}")

    print(f"scenario: {doc.get('scenario', '?')} "
          f"({doc.get('runs', '?')} runs, seed {doc.get('seed', '?')})")
    if not doc.get("comparable", False):
        print("configurations not comparable; phi/xi withheld")
        for line in doc.get("comparability", {}).get("details", []):
            print(f"  - {line}")
        return 0

    rows = []
    for entry in doc["configurations"]:
        agg = entry["aggregate"]
        rows.append([entry["id"],
                     f"{agg['phi']['mean']:.3f} ±{agg['phi']['std']:.3f}",
                     f"{agg['xi']['mean']:.3f} ±{agg['xi']['std']:.3f}"])
    print(_table(["config", "phi", "xi"], rows))
    for key, label in (("phi", "[PHI]"), ("xi", "[XI]")):
        order = doc["ranking"][key]
        print(f"{label} best: {order[0]}   order: {' < '.join(order)}")
    return 0


def cmd_validate(args) -> int:
    try:
        scenario = _load(args.scenario)
    except ScenarioFormatError as exc:
        return _fail(str(exc))
    n = len(scenario.configurations)
    if n >= 2:
        verdict = check_comparability(scenario.configurations)
        if verdict.comparable:
            state = "comparable"
        else:
            state = "not comparable:\n" + "\n".join(
                f"  - {d}" for d in verdict.details)
    else:
        state = "single configuration"
    print(f"OK, {n} configuration{'s' if n != 1 else ''}, {state}")
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    sock = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    sock.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
    try:
        sock.bind((args.host, args.port))
    except OSError as exc:
        return _fail(f"cannot bind {args.host}:{args.port}: {exc}")
    host, port = sock.getsockname()[:2]
    print(f"listening on http://{host}:{port}")
    print("ready")
    sys.stdout.flush()

    app = create_app(workers=args.workers, results_dir=args.results_dir,
                     max_agents=args.max_agents)
    config = uvicorn.Config(app, log_level="warning")
    server = uvicorn.Server(config)
    server.run(sockets=[sock])
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="evacsim",
        description="crowd evacuation simulation and comparison")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="simulate a scenario file")
    p_run.add_argument("scenario")
    p_run.add_argument("--runs", type=int, default=1)
    p_run.add_argument("--seed", type=int, default=0)
    p_run.add_argument("--out", default=None,
                       help="results directory (default results/<scenario>)")
    p_run.add_argument("--timestep", type=float, default=0.1)
    p_run.add_argument("--speed", type=float, default=1.15,
                       help="preferred walking speed, m/s")
    p_run.add_argument("--workers", type=int, default=None)
    p_run.add_argument("--no-figures", action="store_true",
                       help="skip occupancy/trajectory PNG rendering")
    p_run.set_defaults(func=cmd_run)

    p_cmp = sub.add_parser("compare", help="rank configurations from a results directory")
    p_cmp.add_argument("results_dir")
    p_cmp.set_defaults(func=cmd_compare)

    p_val = sub.add_parser("validate", help="check a scenario file")
    p_val.add_argument("scenario")
    p_val.set_defaults(func=cmd_validate)

    p_srv = sub.add_parser("serve", help="start the HTTP job service")
    p_srv.add_argument("--host", default="127.0.0.1")
    p_srv.add_argument("--port", type=int, default=None,
                       help="0 picks a free port (default env PORT or 8080)")
    p_srv.add_argument("--workers", type=int, default=None)
    p_srv.add_argument("--results-dir", default=None)
    p_srv.add_argument("--max-agents", type=int, default=None)
    p_srv.set_defaults(func=cmd_serve)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "serve" and args.port is None:
        import os
        args.port = int(os.environ.get("PORT", "8080"))
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
