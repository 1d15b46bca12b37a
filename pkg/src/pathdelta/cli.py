"""Command-line interface: compute, verify, bench.

compute prints the distance between two Newick files.  verify runs the
randomized oracle-equivalence and invariant suite and reports per-property
pass counts.  bench times the fast and quadratic methods over a list of
sizes and emits CSV.  Exit codes: 0 success, 1 verification failure,
2 input/usage error.
"""

from __future__ import annotations

import argparse
import sys
import time

from ._text import format_number
from .distance import distance_between, path_length_distance
from .newick import NewickParseError, parse_newick
from .oracle import Lcg, delta_bruteforce, random_binary_tree
from .segments import build_segment_decomposition, verify_decomposition
from .trees import TreeError, validate_pair

# bench skips the quadratic method above this size to keep runs desk-scale
QUADRATIC_CUTOFF = 20_000


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    return args.func(args)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pathdelta",
        description="Path-length distance between phylogenetic trees.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compute", help="distance between two Newick files")
    p.add_argument("tree1")
    p.add_argument("tree2")
    p.add_argument("--method", choices=("fast", "quadratic"), default="fast")
    p.add_argument("--sqrt", action="store_true",
                   help="also print the metric sqrt(delta)")
    p.add_argument("--topology-only", action="store_true",
                   help="ignore branch lengths; treat every branch as 1")
    p.set_defaults(func=cmd_compute)

    p = sub.add_parser("verify", help="randomized self-verification suite")
    p.add_argument("--min-n", type=int, default=4)
    p.add_argument("--max-n", type=int, default=64)
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--seed", type=int, default=1)
    # deliberately corrupts one trial, to exercise the failure reporting
    p.add_argument("--inject-fault", action="store_true",
                   help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bench", help="time fast vs quadratic methods")
    p.add_argument("--sizes", required=True,
                   help="comma-separated tree sizes, ascending")
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--csv", help="write CSV here instead of stdout")
    p.set_defaults(func=cmd_bench)
    return parser


def _read_tree(path: str, topology_only: bool):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as e:
        print(f"{path}: {e.strerror or e}", file=sys.stderr)
        return None
    try:
        return parse_newick(text, topology_only=topology_only)
    except NewickParseError as e:
        print(f"{path}: {e}", file=sys.stderr)
        return None
    except TreeError as e:
        print(f"{path}: {e}", file=sys.stderr)
        return None


def cmd_compute(args) -> int:
    t1 = _read_tree(args.tree1, args.topology_only)
    t2 = _read_tree(args.tree2, args.topology_only)
    if t1 is None or t2 is None:
        return 2
    try:
        result = distance_between(t1, t2, method=args.method)
    except TreeError as e:
        print(str(e), file=sys.stderr)
        return 2
    print(f"delta={format_number(result.delta)}")
    if args.sqrt:
        print(f"sqrt_delta={format_number(result.sqrt_delta)}")
    return 0


def cmd_verify(args) -> int:
    if args.trials < 1:
        print("verify: --trials must be at least 1", file=sys.stderr)
        return 2
    if not 2 <= args.min_n <= args.max_n:
        print("verify: need 2 <= --min-n <= --max-n", file=sys.stderr)
        return 2

    properties = [
        ("oracle-exact-int", _check_oracle_int),
        ("oracle-close-real", _check_oracle_real),
        ("symmetry", _check_symmetry),
        ("self-distance-zero", _check_self_zero),
        ("decomposition", _check_decomposition),
    ]
    passes = {name: 0 for name, _ in properties}
    rng = Lcg(args.seed)
    failure = None
    for trial in range(args.trials):
        n = args.min_n + rng.below(args.max_n - args.min_n + 1)
        s1 = rng.below(1 << 31)
        s2 = rng.below(1 << 31)
        fault = args.inject_fault and trial == min(2, args.trials - 1)
        for name, check in properties:
            if check(n, s1, s2, fault):
                passes[name] += 1
            elif failure is None:
                failure = (name, trial, n, s1, s2)
    for name, _ in properties:
        print(f"{name}: {passes[name]}/{args.trials} pass")
    if failure:
        name, trial, n, s1, s2 = failure
        print(
            f"FAIL {name} at trial {trial}: n={n} seed1={s1} seed2={s2}; "
            f"reproduce with random_binary_tree(n, seed1) vs "
            f"random_binary_tree(n, seed2)",
            file=sys.stderr,
        )
        return 1
    print("PASS")
    return 0


def _check_oracle_int(n, s1, s2, fault) -> bool:
    a = random_binary_tree(n, seed=s1)
    b = random_binary_tree(n, seed=s2)
    fast = distance_between(a, b).delta
    if fault:
        fast += 1.0
    return fast == delta_bruteforce(a, b)


def _check_oracle_real(n, s1, s2, fault) -> bool:
    a = random_binary_tree(n, seed=s1, lengths="real")
    b = random_binary_tree(n, seed=s2, lengths="real")
    fast = distance_between(a, b).delta
    slow = delta_bruteforce(a, b)
    return abs(fast - slow) <= 1e-8 * max(abs(slow), 1.0)


def _check_symmetry(n, s1, s2, fault) -> bool:
    a = random_binary_tree(n, seed=s1)
    b = random_binary_tree(n, seed=s2)
    return distance_between(a, b).delta == distance_between(b, a).delta


def _check_self_zero(n, s1, s2, fault) -> bool:
    a = random_binary_tree(n, seed=s1)
    return distance_between(a, a).delta == 0.0


def _check_decomposition(n, s1, s2, fault) -> bool:
    from .trees import root_at_taxon

    b = random_binary_tree(n, seed=s2)
    rooted = root_at_taxon(b, b.taxa[0])
    td = build_segment_decomposition(rooted)
    return verify_decomposition(td, rooted).ok


def cmd_bench(args) -> int:
    try:
        sizes = [int(s) for s in args.sizes.split(",") if s.strip()]
    except ValueError:
        print("bench: --sizes must be comma-separated integers",
              file=sys.stderr)
        return 2
    if not sizes:
        print("bench: --sizes is empty", file=sys.stderr)
        return 2
    if any(s < 2 for s in sizes) or sizes != sorted(sizes):
        print("bench: sizes must be >= 2 and ascending", file=sys.stderr)
        return 2

    rows = ["n,method,millis,touched_nodes"]
    for n in sizes:
        a = random_binary_tree(n, seed=args.seed)
        b = random_binary_tree(n, seed=args.seed + 1)
        pair = validate_pair(a, b)

        start = time.perf_counter()
        result = path_length_distance(pair, method="fast")
        millis = (time.perf_counter() - start) * 1000.0
        touched = result.stats.touched_nodes if result.stats else 0
        rows.append(f"{n},fast,{millis:.3f},{touched}")

        if n <= QUADRATIC_CUTOFF:
            start = time.perf_counter()
            path_length_distance(pair, method="quadratic")
            millis = (time.perf_counter() - start) * 1000.0
            rows.append(f"{n},quadratic,{millis:.3f},0")

    text = "\n".join(rows) + "\n"
    if args.csv:
        with open(args.csv, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
