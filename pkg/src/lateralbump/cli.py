"""Command-line entry point.

Every run writes a metadata header echoing its resolved configuration; JSON
documents carry it under ``"metadata"``, CSV files as a leading ``#`` line.
Outputs never depend on the worker count, so it is left out of the header.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from contextlib import contextmanager
from itertools import permutations, product

from . import __version__
from .bitableau import block, diagonal_entry
from .census import (
    census_direct,
    census_tree,
    verify_children_bound,
    verify_inverse_size,
    verify_restriction,
)
from .core import (
    ExponentMatrix,
    MarginPair,
    enumerate_margin_matrices,
    format_matrix,
    format_word,
    matrix_of_permutation,
    parse_word,
    weight,
)
from .errors import LateralBumpError, VerificationFailure
from .insertion import has_lateral_bump, rsk, schensted
from .plancherel import (
    RNG_ID,
    containment_stat,
    first_row_stat,
    lateral_fraction,
    limit_shape_curve,
    shape_frequencies,
    stirling_exact,
    stirling_sequence,
)

SCHEMA_VERSION = 1
SEED_ENV = "LATERALBUMP_SEED"
DEFAULT_SEED = 20250101


def _default_seed() -> int:
    return int(os.environ.get(SEED_ENV, DEFAULT_SEED))


def _metadata(args, uses_rng=False) -> dict:
    config = {k: v for k, v in sorted(vars(args).items()) if k not in ("func", "workers", "output")}
    meta = {"artifact": "lateralbump", "version": __version__, "config": config}
    if uses_rng:
        meta["rng"] = RNG_ID
    return meta


@contextmanager
def _sink(path: str):
    if path == "-":
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh


def _emit(args, meta: dict, rows: list[dict], extra: dict | None = None):
    with _sink(args.output) as fh:
        if args.out == "json":
            doc = {"schema_version": SCHEMA_VERSION, "metadata": meta, **(extra or {}), "rows": rows}
            fh.write(json.dumps(doc, indent=2) + "\n")
        else:
            fh.write("# " + json.dumps({"schema_version": SCHEMA_VERSION, **meta}, sort_keys=True) + "\n")
            if extra:
                fh.write("# " + json.dumps(extra, sort_keys=True) + "\n")
            if rows:
                buf = io.StringIO()
                writer = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
                writer.writeheader()
                writer.writerows(rows)
                fh.write(buf.getvalue())


# -- census --------------------------------------------------------------------

CENSUS_COLUMNS = ["n", "v_count", "c_count", "p_n_exact_num", "p_n_exact_den", "p_n_decimal", "u_count"]


def cmd_census(args) -> int:
    direct = tree = None
    if args.mode in ("tree", "both"):
        tree = census_tree(args.max_n).rows
    if args.mode in ("direct", "both"):
        direct = [census_direct(n, workers=args.workers) for n in range(1, args.max_n + 1)]
    if direct and tree:
        for d, t in zip(direct, tree):
            if d != t:
                raise VerificationFailure("census_direct = census_tree", f"n={d.n}", f"{d} vs {t}")
    rows = direct or tree
    for a, b in zip(rows, rows[1:]):
        if b.p_n > a.p_n:
            raise VerificationFailure("p_n non-increasing", f"n={b.n}")
        if b.v_count > b.n * a.v_count:
            raise VerificationFailure("|V_{n+1}| <= (n+1)|V_n|", f"n={b.n}")
    out = []
    for r in rows:
        d = r.as_dict()
        row = {k: d[k] for k in CENSUS_COLUMNS}
        if args.out == "json":
            row["h_overlap"] = d["h_overlap"]
        out.append(row)
    _emit(args, _metadata(args), out)
    return 0


# -- verify --------------------------------------------------------------------


def _compositions(total: int, parts: int):
    for c in product(range(total + 1), repeat=parts):
        if sum(c) == total:
            yield c


def check_equivalence(n: int) -> dict:
    v = 0
    for w in permutations(range(1, n + 1)):
        d = diagonal_entry(w)
        lateral = has_lateral_bump(w)
        if (d == 0) != lateral or d not in (-1, 0, 1):
            raise VerificationFailure("diagonal entry = 0 <=> lateral bump", format_word(w), f"entry {d}")
        v += not lateral
    return {"check": "equivalence", "n": n, "cases": math.factorial(n), "v_count": v}


def check_rsk_laws(n: int, max_parts: int = 3) -> dict:
    """Shape equality, SSYT validity and the weight law on permutations of
    ``S_n`` and on every matrix with margins of length up to ``max_parts``."""
    cases = 0
    mats = list(_perm_matrices(n))
    for p in range(1, max_parts + 1):
        for q in range(1, max_parts + 1):
            for sigma in _compositions(n, p):
                for pi in _compositions(n, q):
                    mats.extend(enumerate_margin_matrices(MarginPair(sigma, pi)))
    for alpha in mats:
        cases += 1
        P, Q, _ = rsk(alpha)
        witness = format_matrix(alpha)
        if P.shape != Q.shape:
            raise VerificationFailure("shape(P) = shape(Q)", witness)
        sig, pi = alpha.row_sums(), alpha.col_sums()
        if _trim(weight(P)) != _trim(sig) or _trim(weight(Q)) != _trim(pi):
            raise VerificationFailure("weights(P,Q) = margins", witness)
    return {"check": "rsk_laws", "n": n, "cases": cases}


def _trim(t):
    t = list(t)
    while t and t[-1] == 0:
        t.pop()
    return tuple(t)


def _perm_matrices(n):
    for w in permutations(range(1, n + 1)):
        yield matrix_of_permutation(w)


def cmd_verify(args) -> int:
    n_max = args.n
    results = []
    for n in range(1, n_max + 1):
        if n <= args.equivalence_bound:
            results.append(check_equivalence(n))
        if n <= args.inverse_bound:
            r = verify_inverse_size(n)
            results.append({"check": "inverse_size", "n": n, "cases": r.parents})
        if n >= 2:
            results.append({"check": "restriction", "n": n, "cases": verify_restriction(n - 1)})
        if n <= args.laws_bound:
            results.append(check_rsk_laws(n))

    def bound_check(level):
        r = verify_children_bound(level)
        results.append(
            {"check": "children_bound", "n": level.n, "cases": r.members, "u_count": r.u_count}
        )

    census_tree(n_max, on_level=bound_check)
    results.sort(key=lambda r: (r["n"], r["check"]))
    rows = [{"check": r["check"], "n": r["n"], "cases": r["cases"], "status": "pass"} for r in results]
    _emit(args, _metadata(args), rows)
    return 0


# -- block ---------------------------------------------------------------------


def cmd_block(args) -> int:
    m = MarginPair(_ints(args.sigma), _ints(args.pi))
    b = block(m, max_size=args.max_size, workers=args.workers)
    doc = {"schema_version": SCHEMA_VERSION, "metadata": _metadata(args), **b.to_dict()}
    with _sink(args.output) as fh:
        fh.write(json.dumps(doc) + "\n")
    return 0


def _ints(text: str) -> tuple[int, ...]:
    return tuple(int(t) for t in text.split(",")) if text.strip() else ()


# -- insert --------------------------------------------------------------------


def cmd_insert(args) -> int:
    with _sink(args.output) as fh:
        if args.matrix:
            P, Q, trace = rsk(ExponentMatrix.parse(args.matrix))
        else:
            P, trace = schensted(parse_word(args.word))
            Q = None
        if args.trace:
            fh.write(trace.format() + "\n")
        fh.write("P:\n" + str(P) + "\n")
        if Q is not None:
            fh.write("Q:\n" + str(Q) + "\n")
        fh.write(f"lateral={'yes' if trace.lateral else 'no'}\n")
    return 0


# -- sampling ------------------------------------------------------------------


def cmd_sample(args) -> int:
    if args.stat == "lateral":
        batch = lateral_fraction(args.n, args.trials, args.seed, args.workers)
    elif args.stat == "firstrow":
        batch = first_row_stat(args.n, args.trials, args.seed, args.workers)
    else:
        batch = containment_stat(args.n, args.trials, args.seed, args.epsilon, args.workers)
    extra = None
    if args.stat == "shape" and args.n <= 10:
        freq = shape_frequencies(args.n, args.trials, args.seed, args.workers)
        extra = {
            "frequencies": [
                {"shape": str(lam), "count": c}
                for lam, c in sorted(freq.items(), key=lambda kv: kv[0].parts, reverse=True)
            ]
        }
    _emit(args, _metadata(args, uses_rng=True), [batch.as_dict()], extra)
    if args.stat == "firstrow" and batch.extra["implication_failures"]:
        raise VerificationFailure("L^2 >= 2n => repeated column height", f"n={args.n}")
    return 0


def cmd_limitshape(args) -> int:
    curve = limit_shape_curve(args.points)
    rows = [{"theta": f"{t:.12f}", "x": f"{x:.12f}", "y": f"{y:.12f}"} for t, x, y in curve.rows()]
    _emit(args, _metadata(args), rows if args.emit_curve else [])
    return 0


def cmd_stirling(args) -> int:
    table = stirling_sequence(args.n_max)
    scaled = table.scaled
    for i in range(1, len(scaled)):
        if not scaled[i] > scaled[i - 1]:
            raise VerificationFailure("a_n sqrt(pi n) increasing", f"n={i + 1}")
    for n, s in zip(table.n.tolist(), scaled.tolist()):
        if abs(s - 1) > 1 / (7 * n):
            raise VerificationFailure("|a_n sqrt(pi n) - 1| <= 1/(7n)", f"n={n}")
    exact = stirling_exact(min(args.n_max, args.exact_limit)) if args.exact_limit else []
    rows = []
    for n, a, s in table.rows():
        if n == 1 or n % args.stride == 0 or n == args.n_max:
            row = {"n": n, "a_n": f"{a:.15e}", "a_n_sqrt_pi_n": f"{s:.15f}"}
            if n <= len(exact):
                row["a_n_exact"] = f"{exact[n - 1].numerator}/{exact[n - 1].denominator}"
                row["a_n"] = f"{float(exact[n - 1]):.15e}"
                row["a_n_sqrt_pi_n"] = f"{float(exact[n - 1]) * math.sqrt(math.pi * n):.15f}"
            rows.append(row)
    _emit(args, _metadata(args), rows)
    return 0


# -- parser --------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    fmt = argparse.ArgumentDefaultsHelpFormatter
    parser = argparse.ArgumentParser(
        prog="lateralbump",
        description="Lateral bumps in Schensted insertion and vanishing RSK diagonal entries.",
        formatter_class=fmt,
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, out="csv"):
        p.add_argument("--out", choices=("csv", "json"), default=out, help="output format")
        p.add_argument("-o", "--output", default="-", help="output path, '-' for stdout")
        p.add_argument("--workers", type=int, default=1, help="worker processes")

    p = sub.add_parser("census", help="count V_n and C_n", formatter_class=fmt)
    p.add_argument("--max-n", type=int, default=8, help="largest n")
    p.add_argument("--mode", choices=("direct", "tree", "both"), default="both", help="counting route")
    common(p)
    p.set_defaults(func=cmd_census)

    p = sub.add_parser("verify", help="machine-check the lemma suite", formatter_class=fmt)
    p.add_argument("--n", type=int, default=5, help="check all sizes up to n")
    p.add_argument("--equivalence-bound", type=int, default=6, help="largest n for the coefficient oracle")
    p.add_argument("--inverse-bound", type=int, default=6, help="largest n for the fibre-size check")
    p.add_argument("--laws-bound", type=int, default=5, help="largest total mass for RSK weight/shape laws")
    common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("block", help="export an RSK_{sigma,pi} block as JSON", formatter_class=fmt)
    p.add_argument("--sigma", required=True, help="row sums, e.g. 1,1")
    p.add_argument("--pi", required=True, help="column sums, e.g. 1,1")
    p.add_argument("--max-size", type=int, default=10**4, help="largest allowed block dimension")
    common(p, out="json")
    p.set_defaults(func=cmd_block)

    p = sub.add_parser("insert", help="Schensted or RSK insertion with an optional bump trace", formatter_class=fmt)
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--word", help="permutation or injective word, e.g. 31254 or 10,3,7")
    g.add_argument("--matrix", help="exponent matrix, e.g. '1,0,2;0,2,0;1,1,0'")
    p.add_argument("--trace", action="store_true", help="print one line per insertion step")
    p.add_argument("-o", "--output", default="-", help="output path, '-' for stdout")
    p.set_defaults(func=cmd_insert)

    p = sub.add_parser("sample", help="seeded Monte Carlo over uniform permutations", formatter_class=fmt)
    p.add_argument("--n", type=int, required=True, help="permutation size")
    p.add_argument("--trials", type=int, default=10**4, help="number of trials")
    p.add_argument("--seed", type=int, default=_default_seed(), help=f"base seed (env {SEED_ENV})")
    p.add_argument("--stat", choices=("lateral", "firstrow", "shape"), default="lateral", help="statistic")
    p.add_argument("--epsilon", type=float, default=0.15, help="containment slack for --stat shape")
    common(p, out="json")
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("limitshape", help="tabulate the limit-shape curve", formatter_class=fmt)
    p.add_argument("--emit-curve", action="store_true", help="write the (theta, x, y) table")
    p.add_argument("--points", type=int, default=201, help="number of theta samples")
    common(p)
    p.set_defaults(func=cmd_limitshape)

    p = sub.add_parser("stirling", help="a_n = (2n)!/(4^n n!^2) and a_n sqrt(pi n)", formatter_class=fmt)
    p.add_argument("--n-max", type=int, default=1000, help="largest n")
    p.add_argument("--exact-limit", type=int, default=1000, help="use exact rationals up to this n")
    p.add_argument("--stride", type=int, default=1, help="emit every stride-th row")
    common(p)
    p.set_defaults(func=cmd_stirling)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except VerificationFailure as e:
        print(f"FAIL {e.check}", file=sys.stderr)
        print(f"counterexample: {e.witness}", file=sys.stderr)
        if e.detail:
            print(e.detail, file=sys.stderr)
        return 1
    except LateralBumpError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
