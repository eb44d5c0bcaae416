"""
Command-line entry point.

    entrank analyze STATE.json [--json REPORT]
    entrank generate KIND [--dims 2x2] [--rank R] [--seed N] --out STATE.json
    entrank ef STATE.json [--k K] [--restarts N] [--tensor-n N]
    entrank search --dims 3x3 --rank 4 --trials N [--out DIR]

Exit codes: 0 success, 2 invalid input, 3 resource cap.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path


from . import io
from .criteria import analyze
from .ef import DIM_CAP, K_CAP, additivity_explore, ef_minimize, ef_oracle_2q
from .exceptions import BudgetExceeded, EntrankError, ResourceCapExceeded
from .linalg import PSD_TOL, RANK_EPSILON
from .search import run_search
from .states import (
    BipartiteState,
    PureState,
    basis_state,
    bell_state,
    mix,
    random_separable,
    random_state,
    tiles_fixture,
)
from .validation import check_dims

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_CAP = 3

UPPER_BOUND_NOTE = "E_f values are upper bounds realized by explicit ensembles (local search, not a global optimum)"


class UsageError(EntrankError):
    pass


def _common(parser: argparse.ArgumentParser, suppress: bool) -> None:
    default = argparse.SUPPRESS if suppress else None
    parser.add_argument("--json", dest="json_path", metavar="PATH", default=default, help="write a JSON report")
    parser.add_argument("--seed", type=int, default=default if suppress else 0, help="master seed (default 0)")
    parser.add_argument(
        "--epsilon-rank",
        type=float,
        default=default if suppress else RANK_EPSILON,
        help="relative eigenvalue cutoff for numerical rank (default 1e-10)",
    )
    parser.add_argument(
        "--tol-psd",
        type=float,
        default=default if suppress else PSD_TOL,
        help="positivity tolerance (default 1e-9)",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="entrank", description="Distillability and separability tests for bipartite density matrices.")
    _common(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="run every separability/distillability test on a state file")
    p.add_argument("input")
    _common(p, suppress=True)

    p = sub.add_parser("generate", help="write a state file")
    p.add_argument("kind", choices=["bell", "product", "tiles", "random", "random-separable", "mixture"])
    p.add_argument("--out", "-o", help="output path (stdout if omitted)")
    p.add_argument("--dims", default="2x2")
    p.add_argument("--rank", type=int, help="rank for kind=random (default dA*dB)")
    p.add_argument("--terms", type=int, default=4, help="product terms for kind=random-separable")
    p.add_argument("--which", default="phi+", help="Bell state: phi+, phi-, psi+, psi-")
    p.add_argument("--index", default="0,0", help="product basis state i,j for kind=product")
    p.add_argument("--p", type=float, help="weight of |00><00| for kind=mixture")
    p.add_argument("--psi", help="amplitudes a,b,c,d of the pure component for kind=mixture")
    _common(p, suppress=True)

    p = sub.add_parser("ef", help="entanglement-of-formation upper bound")
    p.add_argument("input")
    p.add_argument("--k", type=int, help="ensemble size (default rank^2)")
    p.add_argument("--restarts", type=int, default=20)
    p.add_argument("--max-iter", type=int, default=10_000)
    p.add_argument("--tensor-n", type=int, help="explore rho^(x)n for n = 1..N")
    p.add_argument("--k-cap", type=int, default=K_CAP)
    p.add_argument("--budget", type=float, help="wall-clock budget in seconds for --tensor-n")
    _common(p, suppress=True)

    p = sub.add_parser("search", help="random search for states passing all necessary conditions")
    p.add_argument("--dims", required=True)
    p.add_argument("--rank", type=int, required=True)
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--out", help="directory for summary, histogram and survivor files")
    p.add_argument("--max-write", type=int, default=1000, help="max survivor files written")
    p.add_argument("--inject-tiles", action="store_true", help="also screen the Tiles fixture (needs 3x3)")
    _common(p, suppress=True)
    return parser


def _settings(args, **extra) -> dict:
    out = {"epsilon_rank": args.epsilon_rank, "tol_psd": args.tol_psd, "seed": args.seed}
    out.update(extra)
    return out


def _emit(args, report: dict) -> None:
    if args.json_path:
        io.save_report(args.json_path, report)


def _parse_complex_list(text: str) -> list[complex]:
    try:
        return [complex(tok.strip().replace("i", "j")) for tok in text.split(",")]
    except ValueError:
        raise UsageError(f"cannot parse amplitudes {text!r}; use e.g. '0.7071,0,0,0.7071' or '1,0,0,1j'") from None


def cmd_analyze(args) -> int:
    state, meta = io.load_state(args.input)
    report = analyze(state, args.epsilon_rank, args.tol_psd)
    print(report.summary())
    _emit(args, io.report_envelope("analyze", report.to_dict(), io.file_hash(args.input), _settings(args)))
    return EXIT_OK


def _generate_state(args) -> tuple[BipartiteState, dict]:
    meta = {"provenance": f"entrank generate {args.kind}"}
    if args.kind == "bell":
        return bell_state(args.which).density(), {**meta, "label": f"bell-{args.which}"}
    if args.kind == "tiles":
        return tiles_fixture(), {**meta, "label": "tiles"}
    dA, dB = check_dims(args.dims)
    if args.kind == "product":
        try:
            i, j = (int(x) for x in args.index.split(","))
        except ValueError:
            raise UsageError(f"--index must look like 'i,j', got {args.index!r}") from None
        if not (0 <= i < dA and 0 <= j < dB):
            raise UsageError(f"--index {i},{j} outside {dA}x{dB}")
        return basis_state(i, j, dA, dB).density(), {**meta, "label": f"product-{i}{j}"}
    if args.kind == "random":
        rank = args.rank if args.rank is not None else dA * dB
        return random_state(dA, dB, rank, args.seed), {**meta, "label": f"random-rank{rank}", "seed": args.seed}
    if args.kind == "random-separable":
        state = random_separable(dA, dB, args.terms, args.seed)
        return state, {**meta, "label": f"random-separable{args.terms}", "seed": args.seed}
    # mixture: (p |00><00| + |psi><psi|) / (1 + p)
    if args.p is None or args.psi is None:
        raise UsageError("kind=mixture needs --p and --psi")
    if args.p < 0:
        raise UsageError("--p must be non-negative")
    amps = _parse_complex_list(args.psi)
    if len(amps) != 4:
        raise UsageError("--psi needs four amplitudes a,b,c,d")
    psi = PureState.from_amplitudes(amps, 2, 2)
    state = mix([(args.p / (1 + args.p), basis_state(0, 0, 2, 2)), (1 / (1 + args.p), psi)])
    return state, {**meta, "label": "mixture", "p": args.p, "psi": args.psi}


def cmd_generate(args) -> int:
    state, meta = _generate_state(args)
    text = io.dumps_state(state, meta)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_ef(args) -> int:
    state, _ = io.load_state(args.input)
    settings = _settings(args, k=args.k, restarts=args.restarts, max_iter=args.max_iter)
    if args.tensor_n:
        settings.update(tensor_n=args.tensor_n, k_cap=args.k_cap, budget=args.budget)
        try:
            table = additivity_explore(
                state, args.tensor_n, args.budget, args.k_cap, args.restarts, args.seed, args.epsilon_rank
            )
            payload = table.to_dict()
            payload["complete"] = True
        except BudgetExceeded as exc:
            print(f"budget exhausted: {exc}", file=sys.stderr)
            payload = {"rows": [r.to_dict() for r in exc.partial], "k_cap": args.k_cap, "complete": False}
        print(f"{'n':>3} {'E_f bound':>12} {'per copy':>12} {'k':>5}")
        for row in payload["rows"]:
            print(f"{row['n']:>3} {row['ef_upper_bound']:>12.8f} {row['per_copy']:>12.8f} {row['k']:>5}")
        if payload.get("subadditivity_evidence"):
            print("subadditivity evidence (upper-bound comparison only, not a proof)")
        kind = "additivity"
    else:
        res = ef_minimize(state, args.k, args.restarts, args.seed, args.max_iter, args.epsilon_rank)
        payload = res.to_dict()
        print(f"E_f upper bound: {res.value:.10f} bits (k={res.k}, restarts={res.restarts}, converged={res.converged})")
        if (state.dA, state.dB) == (2, 2):
            oracle = ef_oracle_2q(state)
            payload["oracle_2q"] = oracle
            payload["oracle_difference"] = res.value - oracle
            print(f"two-qubit closed form: {oracle:.10f} bits (difference {res.value - oracle:.3e})")
        kind = "ef"
    payload["caveat"] = UPPER_BOUND_NOTE
    print(UPPER_BOUND_NOTE)
    _emit(args, io.report_envelope(kind, payload, io.file_hash(args.input), settings))
    return EXIT_OK


def cmd_search(args) -> int:
    dA, dB = check_dims(args.dims)
    extra = []
    if args.inject_tiles:
        if (dA, dB) != (3, 3):
            raise UsageError("--inject-tiles needs --dims 3x3")
        extra.append(tiles_fixture())
    try:
        summary = run_search(
            dA, dB, args.rank, args.trials, args.seed, args.epsilon_rank, args.tol_psd,
            keep_survivors=args.max_write, extra_states=extra,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    payload = summary.to_dict()
    print(
        f"{args.trials} trials of rank-{args.rank} {dA}x{dB} states: "
        f"{summary.ppt_count} PPT, {summary.npt_count} NPT "
        f"({summary.npt_flagged_distillable} NPT flagged distillable)"
    )
    print(
        f"survivors: {summary.separable_survivors} separable, "
        f"{summary.candidate_survivors} candidates (pass all necessary conditions; not certified)"
    )
    pr = payload["participation_ratio"]
    if pr["mean"] is not None:
        print(f"participation ratio: min {pr['min']:.4f}, mean {pr['mean']:.4f}, max {pr['max']:.4f}")
    settings = _settings(args, dims=[dA, dB], rank=args.rank, trials=args.trials)
    report = io.report_envelope("search", payload, None, settings)
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        io.save_report(out / "summary.json", report)
        io.save_report(out / "pr_histogram.json", pr)
        for s in summary.survivors:
            stem = f"{s.classification}_{s.trial:07d}"
            io.save_state(out / f"{stem}.json", s.state, {"label": stem, "seed": args.seed, "trial": s.trial})
            io.save_report(out / f"{stem}_report.json", s.report.to_dict())
    _emit(args, report)
    return EXIT_OK


COMMANDS = {"analyze": cmd_analyze, "generate": cmd_generate, "ef": cmd_ef, "search": cmd_search}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        return COMMANDS[args.command](args)
    except ResourceCapExceeded as exc:
        print(f"resource cap: {exc} (state dimension cap {DIM_CAP})", file=sys.stderr)
        return EXIT_CAP
    except (EntrankError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
