"""Command line front end: instance generation, decomposition, algorithm
dispatch, oracle verification, and call-count benchmarks.

Exit codes: 0 success, 2 unreadable or malformed input (argparse shares
this code), 3 validation failure (bad structure for the chosen
algorithm, bound violations), 4 verification mismatch, 5 overflow.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time

import numpy as np

from . import fileio
from .convolution import conv_decomposed, conv_few_values, conv_naive
from .core import (
    Decomposition,
    DirectionViolation,
    MinPlusError,
    MinPlusOutput,
    MonotoneTag,
    OpCounters,
    values_satisfy,
)
from .decompose import (
    decompose_monotone_greedy,
    decompose_nondecreasing,
    decompose_nonincreasing,
    decompose_uniform,
    decomposition_stats,
)
from .generators import (
    planted_matrix_cols,
    planted_matrix_rows,
    planted_mixed_matrix_rows,
    planted_monotone_vector,
    planted_uniform_matrix_cols,
    planted_uniform_matrix_rows,
    planted_uniform_vector,
    random_matrix,
    random_vector,
)
from .product import (
    minplus_decomposed,
    minplus_few_values_product,
    minplus_mixed_uniform,
    minplus_naive,
)

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_VALIDATION = 3
EXIT_MISMATCH = 4
EXIT_OVERFLOW = 5

ALGOS = ("naive", "fig1", "fig2", "fig3", "fig4", "fewvalues")
MATRIX_ALGOS = {"fig1", "fig2", "fewvalues"}
VECTOR_ALGOS = {"fig3", "fig4"}

_MODE_FNS = {
    "nondec": decompose_nondecreasing,
    "noninc": decompose_nonincreasing,
    "greedy": decompose_monotone_greedy,
    "uniform": decompose_uniform,
}

_OPPOSITE = {"nondec": "noninc", "noninc": "nondec"}


def _emit(text: str, out: str | None) -> None:
    if out:
        fileio.write_atomic(out, text)
    else:
        print(text, end="")


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise MinPlusError(message)


def _infer_matrix_direction(inst: fileio.MatrixInstance) -> str:
    def holds(tag: MonotoneTag) -> bool:
        for i, d in enumerate(inst.dec_rows):
            host = inst.A.entries[i]
            if not all(
                values_satisfy(host[list(p.indices)], tag) for p in d.parts
            ):
                return False
        for j, d in enumerate(inst.dec_cols):
            host = inst.B.entries[:, j]
            if not all(
                values_satisfy(host[list(p.indices)], tag) for p in d.parts
            ):
                return False
        return True

    if holds(MonotoneTag.NON_DECREASING):
        return "nondec"
    if holds(MonotoneTag.NON_INCREASING):
        return "noninc"
    raise DirectionViolation(
        "row and column parts do not share one direction; pass --direction"
    )


def _uniform_row_decs(inst: fileio.MatrixInstance):
    if inst.dec_rows is not None:
        return inst.dec_rows
    return [decompose_uniform(inst.A.entries[i]) for i in range(inst.A.n)]


def _uniform_col_decs(inst: fileio.MatrixInstance):
    if inst.dec_cols is not None:
        return inst.dec_cols
    return [decompose_uniform(inst.B.entries[:, j]) for j in range(inst.B.n)]


def _run_algorithm(inst, algo: str, args, counters: OpCounters):
    """Dispatch, returning (MinPlusOutput, params dict for provenance)."""
    threads = getattr(args, "threads", 1)
    block_size = getattr(args, "block_size", None)
    if isinstance(inst, fileio.MatrixInstance):
        _require(
            algo == "naive" or algo in MATRIX_ALGOS,
            f"algorithm {algo} needs a vector instance",
        )
        if algo == "naive":
            return minplus_naive(inst.A, inst.B), {}
        if algo == "fig1":
            _require(
                inst.dec_rows is not None and inst.dec_cols is not None,
                "fig1 requires attached decompositions for A rows and B "
                "cols; run 'minplus decompose' first",
            )
            direction = args.direction or _infer_matrix_direction(inst)
            out = minplus_decomposed(
                inst.A,
                inst.dec_rows,
                inst.B,
                inst.dec_cols,
                direction,
                block_size=block_size,
                counters=counters,
                threads=threads,
            )
            return out, {"direction": direction}
        if algo == "fig2":
            _require(
                inst.dec_rows is not None and inst.dec_cols is not None,
                "fig2 requires attached decompositions for A rows and B "
                "cols; run 'minplus decompose' first",
            )
            out = minplus_mixed_uniform(
                inst.A,
                inst.dec_rows,
                inst.B,
                inst.dec_cols,
                block_size=block_size,
                counters=counters,
                threads=threads,
            )
            return out, {}
        out = minplus_few_values_product(
            inst.A,
            _uniform_row_decs(inst),
            inst.B,
            _uniform_col_decs(inst),
            counters=counters,
        )
        return out, {}
    _require(
        algo == "naive" or algo in VECTOR_ALGOS,
        f"algorithm {algo} needs a matrix instance",
    )
    if algo == "naive":
        return conv_naive(inst.a, inst.b), {}
    if algo == "fig3":
        _require(
            inst.dec_a is not None and inst.dec_b is not None,
            "fig3 requires attached decompositions for a and b; run "
            "'minplus decompose' first",
        )
        out = conv_decomposed(
            inst.a,
            inst.dec_a,
            inst.b,
            inst.dec_b,
            block_size=block_size,
            counters=counters,
            threads=threads,
        )
        return out, {}
    dec_b = inst.dec_b
    if dec_b is None:
        dec_b = decompose_uniform(inst.b.coords)
    n = inst.a.n
    ell = getattr(args, "ell", None)
    if ell is None:
        ell = math.isqrt(n - 1) + 1 if n > 1 else 1
    out = conv_few_values(inst.a, inst.b, dec_b, ell=ell, counters=counters)
    return out, {"ell": str(ell)}


def _generate_instance(algo, kind, n, m_a, m_b, h, direction, seed):
    direction = direction or "nondec"
    rng = np.random.default_rng(seed)
    meta = {"algo": algo, "seed": str(seed)}
    if algo == "naive":
        _require(
            kind in ("matrix", "vector"),
            "the naive generator needs --kind matrix or --kind vector",
        )
        if kind == "matrix":
            return fileio.MatrixInstance(
                random_matrix(rng, n), random_matrix(rng, n), meta=meta
            )
        return fileio.VectorInstance(
            random_vector(rng, n), random_vector(rng, n), meta=meta
        )
    if algo == "fig1":
        meta.update({"m-a": str(m_a), "m-b": str(m_b), "direction": direction})
        A, dec_rows = planted_matrix_rows(rng, n, m_a, direction)
        B, dec_cols = planted_matrix_cols(rng, n, m_b, direction)
        return fileio.MatrixInstance(A, B, tuple(dec_rows), tuple(dec_cols), meta)
    if algo == "fig2":
        meta.update({"m-a": str(m_a), "h": str(h)})
        A, dec_rows = planted_mixed_matrix_rows(rng, n, m_a)
        B, dec_cols = planted_uniform_matrix_cols(rng, n, h)
        return fileio.MatrixInstance(A, B, tuple(dec_rows), tuple(dec_cols), meta)
    if algo == "fewvalues":
        meta.update({"m-a": str(m_a), "m-b": str(m_b)})
        A, dec_rows = planted_uniform_matrix_rows(rng, n, m_a)
        B, dec_cols = planted_uniform_matrix_cols(rng, n, m_b)
        return fileio.MatrixInstance(A, B, tuple(dec_rows), tuple(dec_cols), meta)
    if algo == "fig3":
        meta.update({"m-a": str(m_a), "m-b": str(m_b), "direction": direction})
        a, dec_a = planted_monotone_vector(rng, n, m_a, direction)
        b, dec_b = planted_monotone_vector(rng, n, m_b, _OPPOSITE[direction])
        return fileio.VectorInstance(a, b, dec_a, dec_b, meta)
    meta.update({"h": str(h)})
    a = random_vector(rng, n)
    b, dec_b = planted_uniform_vector(rng, n, h)
    return fileio.VectorInstance(a, b, None, dec_b, meta)


def _first_mismatch(got: MinPlusOutput, want: MinPlusOutput):
    """None when equal; else a human description of the first difference."""
    if got.values.shape != want.values.shape:
        return f"shape {got.values.shape} vs {want.values.shape}"
    diff = (got.finite != want.finite) | (
        got.finite & want.finite & (got.values != want.values)
    )
    where = np.argwhere(diff)
    if where.size == 0:
        return None

    def show(o: MinPlusOutput, pos) -> str:
        return str(o.values[pos]) if o.finite[pos] else "inf"

    pos = tuple(int(x) for x in where[0])
    if got.is_matrix:
        label = f"entry ({pos[0] + 1}, {pos[1] + 1})"
    else:
        label = f"coordinate {pos[0]}"
    return f"{label}: got {show(got, pos)}, expected {show(want, pos)}"


def _cmd_gen(args) -> int:
    _require(args.n is not None, "gen needs --n")
    inst = _generate_instance(
        args.algo,
        args.kind,
        args.n,
        args.m_a,
        args.m_b,
        args.h,
        args.direction,
        args.seed,
    )
    _emit(fileio.serialize(inst), args.out)
    return EXIT_OK


def _stats_line(label: str, dec: Decomposition, host: np.ndarray) -> str:
    st = decomposition_stats(dec, host)
    bound = "-" if st.lower_bound_certificate is None else str(
        st.lower_bound_certificate
    )
    return (
        f"{label}: parts={st.parts_count} direction={st.direction} "
        f"lower-bound={bound}"
    )


def _cmd_decompose(args) -> int:
    inst = fileio.parse_path(args.input)
    fn = _MODE_FNS[args.mode]
    report: list[str] = []
    if isinstance(inst, fileio.VectorInstance):
        _require(
            args.target in ("a", "b", "both"),
            "vector instances take --target a|b|both",
        )
        if args.target in ("a", "both"):
            dec = fn(inst.a.coords)
            inst.dec_a = dec
            line = _stats_line("a", dec, inst.a.coords)
            inst.meta["dec-stats-a"] = line.partition(": ")[2]
            report.append(line)
        if args.target in ("b", "both"):
            dec = fn(inst.b.coords)
            inst.dec_b = dec
            line = _stats_line("b", dec, inst.b.coords)
            inst.meta["dec-stats-b"] = line.partition(": ")[2]
            report.append(line)
    else:
        _require(
            args.target in ("rows", "cols", "both"),
            "matrix instances take --target rows|cols|both",
        )
        n = inst.A.n
        if args.target in ("rows", "both"):
            decs = [fn(inst.A.entries[i]) for i in range(n)]
            m = max(d.part_count for d in decs)
            inst.dec_rows = tuple(d.padded(m) for d in decs)
            line = f"rows: count={n} max-parts={m} mode={args.mode}"
            inst.meta["dec-stats-rows"] = line.partition(": ")[2]
            report.append(line)
        if args.target in ("cols", "both"):
            decs = [fn(inst.B.entries[:, j]) for j in range(n)]
            m = max(d.part_count for d in decs)
            inst.dec_cols = tuple(d.padded(m) for d in decs)
            line = f"cols: count={n} max-parts={m} mode={args.mode}"
            inst.meta["dec-stats-cols"] = line.partition(": ")[2]
            report.append(line)
    if args.out:
        fileio.write_atomic(args.out, fileio.serialize(inst))
        for line in report:
            print(line)
    else:
        print(fileio.serialize(inst), end="")
    return EXIT_OK


def _cmd_compute(args) -> int:
    inst = fileio.parse_path(args.input)
    counters = OpCounters()
    output, params = _run_algorithm(inst, args.algo, args, counters)
    meta = {"algorithm": args.algo}
    meta.update(params)
    if args.block_size is not None:
        meta["block-size"] = str(args.block_size)
    if args.threads != 1:
        meta["threads"] = str(args.threads)
    if "seed" in inst.meta:
        meta["seed"] = inst.meta["seed"]
    for key, value in counters.as_dict().items():
        meta[key.replace("_", "-")] = str(value)
    kind = "result-matrix" if output.is_matrix else "result-vector"
    n = inst.A.n if isinstance(inst, fileio.MatrixInstance) else inst.a.n
    doc = fileio.ResultDocument(kind, n, output, meta)
    _emit(fileio.serialize(doc), args.out)
    return EXIT_OK


def _cmd_verify(args) -> int:
    if args.trials is not None:
        _require(args.input is None, "--trials mode takes no input file")
        _require(args.n is not None, "--trials mode needs --n")
        for t in range(args.trials):
            inst = _generate_instance(
                args.algo,
                args.kind,
                args.n,
                args.m_a,
                args.m_b,
                args.h,
                args.direction,
                args.seed + t,
            )
            got, _ = _run_algorithm(inst, args.algo, args, OpCounters())
            want, _ = _run_algorithm(inst, "naive", args, OpCounters())
            problem = _first_mismatch(got, want)
            if problem is not None:
                print(f"mismatch (trial {t}, seed {args.seed + t}): {problem}")
                return EXIT_MISMATCH
        print(f"all equal ({args.trials} trials)")
        return EXIT_OK
    _require(args.input is not None, "need an input file or --trials")
    inst = fileio.parse_path(args.input)
    got, _ = _run_algorithm(inst, args.algo, args, OpCounters())
    if args.result is not None:
        doc = fileio.parse_path(args.result)
        _require(
            isinstance(doc, fileio.ResultDocument),
            "--result must point at a result document",
        )
        problem = _first_mismatch(doc.output, got)
        source = "stored result"
    else:
        want, _ = _run_algorithm(inst, "naive", args, OpCounters())
        problem = _first_mismatch(got, want)
        source = args.algo
    if problem is not None:
        print(f"mismatch ({source}): {problem}")
        return EXIT_MISMATCH
    print("all equal")
    return EXIT_OK


def _cmd_bench(args) -> int:
    algos = [a.strip() for a in args.algo.split(",") if a.strip()]
    _require(bool(algos), "need at least one algorithm")
    for a in algos:
        _require(a in ALGOS, f"unknown algorithm {a!r}")
    structured = [a for a in algos if a != "naive"]
    _require(
        len(set(structured)) <= 1,
        "bench compares one structured algorithm against naive",
    )
    _require(args.n is not None, "bench needs --n")
    gen_algo = structured[0] if structured else "naive"
    inst = _generate_instance(
        gen_algo,
        args.kind,
        args.n,
        args.m_a,
        args.m_b,
        args.h,
        args.direction,
        args.seed,
    )
    rows = []
    for algo in algos:
        counters = OpCounters()
        t0 = time.perf_counter()
        _run_algorithm(inst, algo, args, counters)
        seconds = time.perf_counter() - t0
        row = {"algorithm": algo, "seconds": round(seconds, 6)}
        row.update(counters.as_dict())
        rows.append(row)
    columns = [
        "algorithm",
        "seconds",
        "witness_matrix_calls",
        "witness_conv_calls",
        "bool_products",
        "bool_convolutions",
    ]
    headers = [c.replace("_", "-") for c in columns]
    table = [[str(row[c]) for c in columns] for row in rows]
    widths = [
        max(len(h), *(len(line[i]) for line in table))
        for i, h in enumerate(headers)
    ]
    print("  ".join(h.ljust(w) for h, w in zip(headers, widths)))
    for line in table:
        print("  ".join(v.ljust(w) for v, w in zip(line, widths)))
    if args.out:
        payload = {
            "n": args.n,
            "seed": args.seed,
            "generator": gen_algo,
            "params": {
                "m-a": args.m_a,
                "m-b": args.m_b,
                "h": args.h,
                "ell": args.ell,
                "direction": args.direction,
                "block-size": args.block_size,
                "threads": args.threads,
            },
            "rows": rows,
        }
        fileio.write_atomic(args.out, json.dumps(payload, indent=2) + "\n")
    return EXIT_OK


def _add_run_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--direction", choices=["nondec", "noninc"], default=None)
    p.add_argument("--block-size", dest="block_size", type=int, default=None)
    p.add_argument("--ell", type=int, default=None)
    p.add_argument("--threads", type=int, default=1)


def _add_gen_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--kind", choices=["matrix", "vector"], default=None)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--m-a", dest="m_a", type=int, default=3)
    p.add_argument("--m-b", dest="m_b", type=int, default=3)
    p.add_argument("--h", dest="h", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="minplus",
        description="(min,+) products and convolutions via monotone "
        "decompositions",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a seeded instance file")
    p.add_argument("--algo", required=True, choices=ALGOS)
    _add_gen_flags(p)
    p.add_argument("--direction", choices=["nondec", "noninc"], default="nondec")
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_gen)

    p = sub.add_parser("decompose", help="attach decompositions to an instance")
    p.add_argument("input")
    p.add_argument("--mode", required=True, choices=sorted(_MODE_FNS))
    p.add_argument(
        "--target",
        default="both",
        choices=["a", "b", "rows", "cols", "both"],
    )
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_decompose)

    p = sub.add_parser("compute", help="run an algorithm, write a result file")
    p.add_argument("input")
    p.add_argument("--algo", required=True, choices=ALGOS)
    _add_run_flags(p)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_compute)

    p = sub.add_parser("verify", help="compare against the naive oracle")
    p.add_argument("input", nargs="?", default=None)
    p.add_argument("--algo", default="naive", choices=ALGOS)
    p.add_argument("--result", default=None)
    p.add_argument("--trials", type=int, default=None)
    _add_gen_flags(p)
    _add_run_flags(p)
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("bench", help="time and count one instance")
    p.add_argument("--algo", required=True, help="comma-separated list")
    _add_gen_flags(p)
    _add_run_flags(p)
    p.add_argument("--out", default=None, help="also write JSON here")
    p.set_defaults(func=_cmd_bench)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except fileio.ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except OverflowError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_OVERFLOW
    except (MinPlusError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
