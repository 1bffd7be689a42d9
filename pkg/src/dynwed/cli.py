"""Command-line front end: generate, run, verify, and benchmark workloads.

Exit codes: 0 ok, 2 parse error, 3 invalid update, 4 verification guard.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

import numpy as np

from .core import DEL, INF, INS, SUB, Edit, WeightTable, symbols
from .dp_oracle import ed_bounded
from .hardgen import gen_batched, gen_dagger_stream, lift, recompute_thresholds
from .session import Session
from .workload import ParseError, Workload, parse_workload


def _load(path: str) -> Workload:
    return parse_workload(Path(path).read_text())


def cmd_run(args) -> int:
    try:
        wl = _load(args.workload)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 2
    session = Session(wl.X, wl.Y, wl.k, wl.w, lazy_reports=True)
    out = []
    for cmd in wl.commands:
        if cmd[0] == "Q":
            val = session.report()
            if val is INF:
                out.append("D INF")
            else:
                out.append(f"D {val}")
                if args.alignments:
                    _, bps = session.alignment()
                    out.append("A " + " ".join(f"{x} {y}" for x, y in bps))
            continue
        _, tgt, e = cmd
        try:
            session.update(tgt, e)
        except (IndexError, ValueError) as exc:
            print(f"invalid update {cmd!r}: {exc}", file=sys.stderr)
            return 3
    print("\n".join(out))
    return 0


def cmd_verify(args) -> int:
    try:
        wl = _load(args.workload)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 2
    cells = (len(wl.X) + 1) * (2 * wl.k + 1)
    if cells > args.max_verify_cells:
        print(f"guard: {cells} DP cells exceed --max-verify-cells", file=sys.stderr)
        return 4
    session = Session(wl.X, wl.Y, wl.k, wl.w, lazy_reports=True)
    xm = [int(v) for v in wl.X]
    ym = [int(v) for v in wl.Y]
    step = 0
    for cmd in wl.commands:
        step += 1
        if cmd[0] == "Q":
            continue
        _, tgt, e = cmd
        try:
            session.update(tgt, e)
        except (IndexError, ValueError) as exc:
            print(f"invalid update {cmd!r}: {exc}", file=sys.stderr)
            return 3
        model = xm if tgt == "X" else ym
        if e.kind == INS:
            model.insert(e.pos, int(e.sym))
        elif e.kind == DEL:
            model.pop(e.pos)
        else:
            model[e.pos] = int(e.sym)
        got = session.report()
        want, _ = ed_bounded(symbols(xm), symbols(ym), wl.k, wl.w, want_alignment=False)
        if got != want:
            print(f"DIVERGENCE at command {step}: session={got} oracle={want}")
            return 1
    # final state check covers workloads that end in a bare query
    got = session.report()
    want, _ = ed_bounded(symbols(xm), symbols(ym), wl.k, wl.w, want_alignment=False)
    if got != want:
        print(f"DIVERGENCE at end: session={got} oracle={want}")
        return 1
    print("OK")
    return 0


def _gen_random(args, rng) -> tuple[Workload, dict]:
    n, k, sigma, den = args.n, args.k, args.sigma, args.den
    cells = rng.integers(den, 4 * den + 1, size=(sigma + 1, sigma + 1))
    np.fill_diagonal(cells, 0)
    w = WeightTable(sigma, den, cells)
    X = symbols(rng.integers(0, sigma, size=n))
    Y = X.copy()
    commands = []
    xlen, ylen = n, n
    for _ in range(args.updates):
        tgt = "X" if rng.random() < 0.5 else "Y"
        length = xlen if tgt == "X" else ylen
        op = rng.random()
        if op < 0.34 and length > 0:
            e = Edit(SUB, int(rng.integers(0, length)), int(rng.integers(0, sigma)))
        elif op < 0.67 or length == 0:
            e = Edit(INS, int(rng.integers(0, length + 1)), int(rng.integers(0, sigma)))
            length += 1
        else:
            e = Edit(DEL, int(rng.integers(0, length)))
            length -= 1
        if tgt == "X":
            xlen = length
        else:
            ylen = length
        commands.append(("U", tgt, e))
        commands.append(("Q",))
    wl = Workload(n, k, w, X, Y, commands, [f"seed {args.seed}"])
    return wl, {"kind": "random", "n": n, "k": k, "sigma": sigma, "den": den, "seed": args.seed}


def _gen_hard(args, rng) -> tuple[Workload, dict]:
    inst = gen_batched(args.m, args.x, args.y, args.h, args.seed, den=args.den, force=args.force)
    hp = lift(inst)
    k_units = -(-hp.k_tilde_num // hp.w_hat.den)
    wl = Workload(
        len(hp.Xt),
        k_units,
        hp.w_hat,
        hp.Xt,
        hp.Yt,
        [("Q",)],
        [f"seed {args.seed}"],
    )
    r2, k_hat2, k_tilde2 = recompute_thresholds(inst)
    side = {
        "kind": "hard",
        "m": args.m,
        "x": args.x,
        "y": args.y,
        "h": args.h,
        "r": hp.r,
        "k_hat_num": hp.k_hat_num,
        "k_tilde_num": hp.k_tilde_num,
        "den": hp.w_hat.den,
        "seed": args.seed,
        "recheck": [r2, k_hat2, k_tilde2],
    }
    return wl, side


def _gen_dagger(args, rng) -> tuple[Workload, dict]:
    sigma, den = args.sigma, args.den
    cells = rng.integers(den, 3 * den + 1, size=(sigma + 1, sigma + 1))
    np.fill_diagonal(cells, 0)
    w = WeightTable(sigma, den, cells)
    Xs, Ys = [], []
    for _ in range(args.m):
        Xi = [int(v) for v in rng.integers(0, sigma, size=args.x)]
        Yi = list(Xi)
        for _ in range(int(rng.integers(0, 5))):
            pos = int(rng.integers(0, len(Yi)))
            Yi[pos] = (Yi[pos] + 1 + int(rng.integers(0, sigma - 1))) % sigma
        Xs.append(symbols(Xi))
        Ys.append(symbols(Yi))
    wl, expected = gen_dagger_stream(Xs, Ys, [args.k] * args.m, w)
    wl.header_comments.append(f"seed {args.seed}")
    side = {
        "kind": "dagger",
        "m": args.m,
        "x": args.x,
        "k": args.k,
        "seed": args.seed,
        "expected": [int(v) if v is not INF else None for v in expected],
    }
    return wl, side


def cmd_gen(args) -> int:
    rng = np.random.default_rng(args.seed)
    try:
        if args.kind == "random":
            wl, side = _gen_random(args, rng)
        elif args.kind == "hard":
            wl, side = _gen_hard(args, rng)
        else:
            wl, side = _gen_dagger(args, rng)
    except ValueError as exc:
        print(f"infeasible parameters: {exc}", file=sys.stderr)
        return 3
    out = Path(args.out)
    out.write_text(wl.dump())
    out.with_suffix(out.suffix + ".json").write_text(json.dumps(side, indent=2) + "\n")
    print(str(out))
    return 0


def cmd_bench(args) -> int:
    try:
        wl = _load(args.workload)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 2
    rows = []
    for _ in range(args.repetitions):
        t0 = time.perf_counter_ns()
        session = Session(wl.X, wl.Y, wl.k, wl.w, lazy_reports=True)
        rows.append(("init", "session_new", time.perf_counter_ns() - t0))
        for cmd in wl.commands:
            if cmd[0] == "Q":
                t0 = time.perf_counter_ns()
                session.report()
                rows.append(("query", "report", time.perf_counter_ns() - t0))
            else:
                t0 = time.perf_counter_ns()
                session.update(cmd[1], cmd[2])
                rows.append(("edit", "session_update", time.perf_counter_ns() - t0))
    lines = ["phase,n,k,op,median_ns"]
    for phase, op in (("init", "session_new"), ("edit", "session_update"), ("query", "report")):
        samples = sorted(t for p, o, t in rows if p == phase)
        if samples:
            med = samples[len(samples) // 2]
            lines.append(f"{phase},{len(wl.X)},{wl.k},{op},{med}")
    text = "\n".join(lines) + "\n"
    if args.csv:
        Path(args.csv).write_text(text)
    else:
        print(text, end="")
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="wed", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="execute a workload and print answers")
    run.add_argument("workload")
    run.add_argument("-a", "--alignments", action="store_true", help="emit breakpoint lines")
    run.set_defaults(fn=cmd_run)

    ver = sub.add_parser("verify", help="replay against the quadratic oracle")
    ver.add_argument("workload")
    ver.add_argument("--max-verify-cells", type=int, default=1 << 26)
    ver.set_defaults(fn=cmd_verify)

    gen = sub.add_parser("gen", help="generate a workload file")
    gen.add_argument("kind", choices=["random", "hard", "dagger"])
    gen.add_argument("out")
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--n", type=int, default=100)
    gen.add_argument("--k", type=int, default=8)
    gen.add_argument("--sigma", type=int, default=6)
    gen.add_argument("--den", type=int, default=2)
    gen.add_argument("--updates", type=int, default=50)
    gen.add_argument("--m", type=int, default=2)
    gen.add_argument("--x", type=int, default=4)
    gen.add_argument("--y", type=int, default=6)
    gen.add_argument("--h", type=int, default=1)
    gen.add_argument("--force", choices=["yes", "no"], default=None)
    gen.set_defaults(fn=cmd_gen)

    ben = sub.add_parser("bench", help="measure per-phase medians")
    ben.add_argument("workload")
    ben.add_argument("--repetitions", type=int, default=3)
    ben.add_argument("--csv", default=None)
    ben.set_defaults(fn=cmd_bench)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
