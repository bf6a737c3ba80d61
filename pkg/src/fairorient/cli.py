"""Command-line driver: instance files, solving, verification, generation.

The instance file format is line oriented and UTF-8:

    c optional comment
    p fo <n> <m>
    e <u> <v> <w_u> <w_v>     (m lines, vertices 1-based, u != v)

Edge ids are the 0-based order of the ``e`` lines.  Certificates use one
line per edge, in any order but covering every edge exactly once:

    o <edge-id> <1|2|c>

where 1 orients the edge toward its first endpoint, 2 toward its second,
and c leaves it unoriented (charity).  Exit codes: 0 = solved yes / charity
found / certificate valid, 1 = solved no / certificate invalid, 2 = error.
"""

import argparse
import json
import random
import sys
import time
from typing import List, Optional, Tuple

from .core import (
    CHARITY,
    EF,
    EFX,
    MAX_TOTAL_WEIGHT,
    TO_U,
    TO_V,
    CapExceededError,
    InputError,
    Instance,
    PartialOrientation,
    SolveReport,
    UnsupportedInstanceError,
    verify,
)
from .binary_ef import solve_binary
from .decomp import make_nice, read_td
from .dp import solve_ef_mc, solve_efx_mc
from .heavy_ef import classify_heavy, solve_heavy
from .oracle import EXISTS_CAP, MIN_CHARITY_CAP, brute_exists, brute_min_charity
from .reductions import (
    SIMPLE,
    TWO_VERTEX_MULTIGRAPH,
    ef_to_efx,
    partition_to_ef,
    read_dimacs,
    sat2p2n_to_ef,
    sat_to_ef,
    too_to_ef,
)

PROBLEMS = ("ef", "efx", "ef-mc", "efx-mc")
ALGOS = ("auto", "brute", "binary", "heavy", "dp")
GENERATORS = ("sat", "2p2n", "partition", "too", "ef2efx", "random")
DEFAULT_HEAVY_THRESHOLD = 24

_CODE_TO_TEXT = {TO_U: "1", TO_V: "2", CHARITY: "c"}
_TEXT_TO_CODE = {"1": TO_U, "2": TO_V, "c": CHARITY}


# ---------------------------------------------------------------------------
# instance and certificate files


def parse_instance(text: str) -> Instance:
    """Parse the ``p fo`` instance format; errors name 1-based line numbers."""
    header: Optional[Tuple[int, int]] = None
    edges: List[tuple] = []
    edge_lines: List[int] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line == "c" or line.startswith("c "):
            continue
        parts = line.split()
        if parts[0] == "p":
            if header is not None:
                raise InputError(f"line {lineno}: duplicate header")
            if len(parts) != 4 or parts[1] != "fo":
                raise InputError(f"line {lineno}: header must be 'p fo <n> <m>'")
            try:
                n, m = int(parts[2]), int(parts[3])
            except ValueError:
                raise InputError(f"line {lineno}: non-integer header field") from None
            if n < 0 or m < 0:
                raise InputError(f"line {lineno}: negative count in header")
            header = (n, m)
        elif parts[0] == "e":
            if header is None:
                raise InputError(f"line {lineno}: edge before header")
            if len(edges) >= header[1]:
                raise InputError(
                    f"line {lineno}: more than {header[1]} edge lines"
                )
            if len(parts) != 5:
                raise InputError(
                    f"line {lineno}: edge line must be 'e <u> <v> <w_u> <w_v>'"
                )
            try:
                u, v, w_u, w_v = (int(x) for x in parts[1:])
            except ValueError:
                raise InputError(f"line {lineno}: non-integer edge field") from None
            if not (1 <= u <= header[0] and 1 <= v <= header[0]):
                raise InputError(f"line {lineno}: vertex id out of range")
            if u == v:
                raise InputError(f"line {lineno}: loop edge at vertex {u}")
            if w_u < 0 or w_v < 0:
                raise InputError(f"line {lineno}: negative weight")
            if w_u > MAX_TOTAL_WEIGHT or w_v > MAX_TOTAL_WEIGHT:
                raise InputError(f"line {lineno}: weight overflow")
            edges.append((u - 1, v - 1, w_u, w_v))
            edge_lines.append(lineno)
        else:
            raise InputError(f"line {lineno}: unknown line type {parts[0]!r}")
    if header is None:
        raise InputError("missing 'p fo' header")
    if len(edges) != header[1]:
        raise InputError(
            f"header announced {header[1]} edges but found {len(edges)}"
        )
    try:
        return Instance(header[0], edges)
    except InputError as exc:
        # only the aggregate weight bound can still fire here
        raise InputError(f"line {edge_lines[-1] if edge_lines else 1}: {exc}")


def format_instance(inst: Instance) -> str:
    """Inverse of parse_instance on the edge list (1-based vertex ids)."""
    lines = [f"p fo {inst.n} {inst.m}"]
    for u, v, w_u, w_v in inst.edges:
        lines.append(f"e {u + 1} {v + 1} {w_u} {w_v}")
    return "\n".join(lines) + "\n"


def parse_certificate(text: str, m: int) -> PartialOrientation:
    """Parse ``o <edge-id> <1|2|c>`` lines covering every edge exactly once."""
    codes: List[Optional[int]] = [None] * m
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line == "c" or line.startswith("c "):
            continue
        parts = line.split()
        if parts[0] != "o" or len(parts) != 3:
            raise InputError(
                f"line {lineno}: certificate line must be 'o <edge-id> <1|2|c>'"
            )
        try:
            e = int(parts[1])
        except ValueError:
            raise InputError(f"line {lineno}: non-integer edge id") from None
        if not 0 <= e < m:
            raise InputError(f"line {lineno}: edge id {e} out of range")
        if codes[e] is not None:
            raise InputError(f"line {lineno}: duplicate assignment for edge {e}")
        if parts[2] not in _TEXT_TO_CODE:
            raise InputError(f"line {lineno}: unknown code {parts[2]!r}")
        codes[e] = _TEXT_TO_CODE[parts[2]]
    missing = [e for e, c in enumerate(codes) if c is None]
    if missing:
        raise InputError(f"certificate misses edge {missing[0]}")
    return PartialOrientation(codes)


def format_certificate(orientation) -> str:
    lines = [
        f"o {e} {_CODE_TO_TEXT[code]}" for e, code in enumerate(orientation)
    ]
    return "\n".join(lines) + "\n" if lines else ""


# ---------------------------------------------------------------------------
# solve


def _is_binary(inst: Instance) -> bool:
    return all(w_u <= 1 and w_v <= 1 for _, _, w_u, w_v in inst.edges)


def _heavy_count(inst: Instance) -> Optional[int]:
    """Number of heavy edges, or None when the instance is not simple."""
    if not inst.is_simple():
        return None
    heavy, _ = classify_heavy(inst)
    return len(heavy)


def pick_algorithm(inst: Instance, problem: str, heavy_threshold: int) -> str:
    """Resolve --algo auto: binary, then heavy, then dp."""
    if _is_binary(inst) and problem in ("ef", "ef-mc"):
        return "binary"
    if problem == "ef":
        count = _heavy_count(inst)
        if count is not None and count <= heavy_threshold:
            return "heavy"
    return "dp"


def _run_solver(
    inst: Instance,
    problem: str,
    algo: str,
    nd,
    want_certificate: bool,
) -> SolveReport:
    fairness = EFX if problem.startswith("efx") else EF
    minimize = problem.endswith("-mc")
    if algo == "binary":
        if fairness != EF:
            raise UnsupportedInstanceError(
                "the binary algorithm answers EF questions only"
            )
        if not _is_binary(inst):
            raise UnsupportedInstanceError(
                "the binary algorithm requires weights in {0, 1}"
            )
        want = "certificate" if want_certificate else (
            "min_charity" if minimize else "decision"
        )
        return solve_binary(inst, want=want)
    if algo == "heavy":
        if fairness != EF or minimize:
            raise UnsupportedInstanceError(
                "heavy-edge branching decides EF existence only; "
                "use --problem ef or another --algo"
            )
        want = "certificate" if want_certificate else "decision"
        return solve_heavy(inst, want=want)
    if algo == "dp":
        solver = solve_efx_mc if fairness == EFX else solve_ef_mc
        report = solver(inst, nd)
        if minimize:
            return report
        decision = report.min_charity == 0
        return SolveReport(
            decision,
            report.min_charity,
            report.certificate if decision else None,
            report.stats,
        )
    if algo == "brute":
        cap = MIN_CHARITY_CAP if minimize else EXISTS_CAP
        if inst.m > cap:
            raise UnsupportedInstanceError(
                f"brute force is capped at {cap} edges for this problem; "
                f"the instance has {inst.m}"
            )
        if minimize:
            k, cert = brute_min_charity(inst, fairness)
            return SolveReport(True, k, cert, {})
        exists, cert = brute_exists(inst, fairness)
        return SolveReport(exists, None, cert, {})
    raise InputError(f"unknown algorithm {algo!r}")


def cmd_solve(args) -> int:
    inst = parse_instance(_read_text(args.instance))
    nd = None
    if args.td is not None:
        td = read_td(_read_text(args.td))
        nd = make_nice(td)
    algo = args.algo
    if algo == "auto":
        algo = pick_algorithm(inst, args.problem, args.heavy_threshold)
    if args.td is not None and algo != "dp":
        raise UnsupportedInstanceError(
            f"--td applies to the dp algorithm, but {algo} was selected"
        )
    start = time.perf_counter()
    report = _run_solver(inst, args.problem, algo, nd, args.certificate)
    elapsed = time.perf_counter() - start

    minimize = args.problem.endswith("-mc")
    if args.json:
        payload = {
            "problem": args.problem,
            "algorithm": algo,
            "n": inst.n,
            "m": inst.m,
            "decision": report.decision,
            "min_charity": report.min_charity if minimize else None,
            "wall_time_s": elapsed,
            "stats": report.stats,
            "certificate": (
                [_CODE_TO_TEXT[c] for c in report.certificate]
                if args.certificate and report.certificate is not None
                else None
            ),
        }
        print(json.dumps(payload, sort_keys=True))
    else:
        if minimize:
            print(f"min_charity {report.min_charity}")
        else:
            print("yes" if report.decision else "no")
        if args.certificate and report.certificate is not None:
            sys.stdout.write(format_certificate(report.certificate))
    # minimum-charity runs always find their optimum, so they exit 0
    return 0 if minimize or report.decision else 1


# ---------------------------------------------------------------------------
# verify


def cmd_verify(args) -> int:
    inst = parse_instance(_read_text(args.instance))
    orientation = parse_certificate(_read_text(args.certificate_file), inst.m)
    fairness = EFX if args.problem == "efx" else EF
    result = verify(inst, orientation, fairness)
    if result.ok:
        print(f"valid {args.problem} orientation, charity {result.charity}")
        return 0
    i, j = result.witness
    kind = "strongly envies" if fairness == EFX else "envies"
    print(f"invalid: vertex {i + 1} {kind} vertex {j + 1}")
    return 1


# ---------------------------------------------------------------------------
# gen


def _parse_int_list(text: str, flag: str) -> List[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip() != ""]
    except ValueError:
        raise InputError(f"{flag} expects comma-separated integers") from None


def _gen_random(args) -> Instance:
    if args.n is None or args.m is None:
        raise InputError("--from random requires --n and --m")
    n, m = args.n, args.m
    if n < 0 or m < 0:
        raise InputError("--n and --m must be nonnegative")
    if m > 0 and n < 2:
        raise InputError("loopless edges need at least two vertices")
    if args.no_zero_zero and args.max_weight == 0:
        raise InputError("--no-zero-zero is impossible with --max-weight 0")
    rng = random.Random(args.seed)
    if args.simple:
        pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
        if m > len(pairs):
            raise InputError(
                f"a simple graph on {n} vertices has at most {len(pairs)} edges"
            )
        chosen = rng.sample(pairs, m)
    else:
        chosen = []
        for _ in range(m):
            u = rng.randrange(n)
            v = rng.randrange(n - 1)
            if v >= u:
                v += 1
            chosen.append((u, v))
    edges = []
    for u, v in chosen:
        while True:
            w_u = rng.randint(0, args.max_weight)
            w_v = w_u if args.symmetric else rng.randint(0, args.max_weight)
            if args.no_zero_zero and w_u == 0 and w_v == 0:
                continue
            break
        edges.append((u, v, w_u, w_v))
    return Instance(n, edges)


def _gen_too(args) -> Instance:
    if args.n is None or args.too_edges is None or args.capacities is None:
        raise InputError(
            "--from too requires --n, --too-edges, and --capacities"
        )
    edges = []
    for part in args.too_edges.split(";"):
        if part.strip() == "":
            continue
        fields = _parse_int_list(part, "--too-edges")
        if len(fields) != 3:
            raise InputError("--too-edges entries are 'u,v,value' triples")
        edges.append(tuple(fields))
    caps = _parse_int_list(args.capacities, "--capacities")
    return too_to_ef(args.n, edges, caps)


def cmd_gen(args) -> int:
    source = args.from_
    if source == "sat" or source == "2p2n":
        if args.cnf is None:
            raise InputError(f"--from {source} requires --cnf")
        cnf = read_dimacs(_read_text(args.cnf))
        inst = sat_to_ef(cnf) if source == "sat" else sat2p2n_to_ef(cnf)
    elif source == "partition":
        if args.items is None:
            raise InputError("--from partition requires --items")
        items = _parse_int_list(args.items, "--items")
        inst = partition_to_ef(items, mode=args.mode)
    elif source == "too":
        inst = _gen_too(args)
    elif source == "ef2efx":
        if args.instance is None:
            raise InputError("--from ef2efx requires --instance")
        inst = ef_to_efx(parse_instance(_read_text(args.instance)))
    elif source == "random":
        inst = _gen_random(args)
    else:
        raise InputError(f"unknown generator {source!r}")
    text = f"c fairorient gen --from {source}\n" + format_instance(inst)
    if args.output is None or args.output == "-":
        sys.stdout.write(text)
    else:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    return 0


# ---------------------------------------------------------------------------
# driver


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fairorient",
        description="Envy-free and EFX orientations of edge-weighted multigraphs.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    solve = sub.add_parser("solve", help="decide a problem on an instance file")
    solve.add_argument("instance", help="instance file, or - for stdin")
    solve.add_argument("--problem", choices=PROBLEMS, default="ef")
    solve.add_argument("--algo", choices=ALGOS, default="auto")
    solve.add_argument("--td", help="PACE .td tree decomposition for --algo dp")
    solve.add_argument(
        "--certificate", action="store_true", help="emit the orientation found"
    )
    solve.add_argument(
        "--json", action="store_true", help="machine-readable report on stdout"
    )
    solve.add_argument(
        "--heavy-threshold",
        type=int,
        default=DEFAULT_HEAVY_THRESHOLD,
        help="max heavy edges for auto to pick the branching algorithm",
    )
    solve.add_argument(
        "--threads",
        type=int,
        default=1,
        help="accepted for compatibility; execution is sequential",
    )
    solve.set_defaults(func=cmd_solve)

    ver = sub.add_parser("verify", help="check a certificate file")
    ver.add_argument("instance", help="instance file, or - for stdin")
    ver.add_argument("certificate_file", help="certificate file")
    ver.add_argument("--problem", choices=("ef", "efx"), default="ef")
    ver.set_defaults(func=cmd_verify)

    gen = sub.add_parser("gen", help="write an instance file")
    gen.add_argument(
        "--from", dest="from_", choices=GENERATORS, required=True
    )
    gen.add_argument("--output", "-o", help="output file (default stdout)")
    gen.add_argument("--cnf", help="DIMACS CNF file for sat / 2p2n")
    gen.add_argument("--items", help="comma-separated values for partition")
    gen.add_argument(
        "--mode",
        choices=(SIMPLE, TWO_VERTEX_MULTIGRAPH),
        default=SIMPLE,
        help="partition output shape",
    )
    gen.add_argument("--instance", help="instance file for ef2efx")
    gen.add_argument("--n", type=int, help="vertex count (random, too)")
    gen.add_argument("--m", type=int, help="edge count (random)")
    gen.add_argument(
        "--max-weight", type=int, default=3, help="weight bound (random)"
    )
    gen.add_argument("--simple", action="store_true", help="no parallel edges")
    gen.add_argument(
        "--symmetric", action="store_true", help="equal weights per edge"
    )
    gen.add_argument(
        "--no-zero-zero",
        action="store_true",
        help="forbid edges both endpoints value at 0",
    )
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument(
        "--too-edges", help="semicolon-separated u,v,value triples (too)"
    )
    gen.add_argument("--capacities", help="comma-separated targets (too)")
    gen.set_defaults(func=cmd_gen)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "threads", 1) < 1:
        print("error: --threads must be at least 1", file=sys.stderr)
        return 2
    try:
        return args.func(args)
    except (InputError, CapExceededError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
