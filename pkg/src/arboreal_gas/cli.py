"""Command-line front end.

Exit codes are a stable contract: 0 success, 1 verification failure,
2 usage or configuration error.  Exact rationals are passed as "a/b" and
serialized as reduced fraction strings; decimals select the float path.
"""

import argparse
import csv
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

import numpy as np

from . import enumeration, recursion, sampling, stats, streaming, verify
from .configs import pack_states, phi_inverse, unpack_states, StateConfig
from .recursion import GasParams
from .sampling import SamplerSpec
from .tree import TreeShape, edge_count

ENUM_CAP_ENV = "ARBOREAL_GAS_ENUM_CAP"


class UsageError(Exception):
    pass


def _enum_cap():
    raw = os.environ.get(ENUM_CAP_ENV)
    if raw is None:
        return enumeration.DEFAULT_ENUMERATION_CAP
    try:
        return int(raw)
    except ValueError as exc:
        raise UsageError(f"{ENUM_CAP_ENV} must be an integer, got {raw!r}") from exc


def _parse_p(text: str, mode: str):
    """'a/b' is exact; a decimal literal is float-mode only."""
    if "/" in text:
        try:
            p = Fraction(text)
        except (ValueError, ZeroDivisionError) as exc:
            raise UsageError(f"cannot parse rational p {text!r}") from exc
        return p if mode != "float" else float(p)
    try:
        value = float(text)
    except ValueError as exc:
        raise UsageError(f"cannot parse p {text!r}") from exc
    if mode == "exact":
        raise UsageError("exact mode needs a rational p written as a/b")
    return value


def _open_output(path):
    if path in (None, "-"):
        return sys.stdout, False
    return open(path, "w", encoding="utf-8"), True


def _emit_rows(rows, header, fmt, out):
    if fmt == "json":
        json.dump([dict(zip(header, r)) for r in rows], out, indent=2)
        out.write("\n")
    else:
        w = csv.writer(out)
        w.writerow(header)
        w.writerows(rows)


def cmd_recursion(args):
    p = _parse_p(args.p, args.mode)
    params = GasParams(d=args.d, p=p)
    survival = recursion.k_recursive(args.n, params)
    table = recursion.kernel_table(args.n, params)
    exact = params.exact
    partitions = recursion.partition_recursion(args.n, params) if exact else None
    header = ["m", "Z_S", "Z_X", "K", "q", "theta", "alpha"]
    rows = []
    for m in range(args.n + 1):
        z_s, z_x = (str(partitions[m][0]), str(partitions[m][1])) if exact else ("", "")
        kp = table[m] if m >= 1 else None
        rows.append(
            [
                m,
                z_s,
                z_x,
                _fmt(survival.K[m], exact) if not survival.degenerate else "",
                _fmt(survival.q[m], exact),
                _fmt(kp.theta, exact) if kp else "",
                _fmt(kp.alpha, exact) if kp else "",
            ]
        )
    out, close = _open_output(args.output)
    try:
        _emit_rows(rows, header, args.format, out)
    finally:
        if close:
            out.close()
    return 0


def _fmt(x, exact):
    return str(x) if exact else repr(float(x))


def cmd_enumerate(args):
    p = _parse_p(args.p, "exact")
    shape = TreeShape(args.d, args.n, wired=True)
    cap = args.cap if args.cap is not None else _enum_cap()
    try:
        triple = enumeration.enumerate_partitions(shape, p, cap)
    except enumeration.EnumerationCapError as exc:
        raise UsageError(str(exc)) from exc
    doc = {"Z": str(triple.Z), "Z_S": str(triple.Z_S), "Z_X": str(triple.Z_X)}
    if args.dump_measure:
        measure = enumeration.exact_measure(shape, p, cap)
        doc["measure"] = [
            {"forest": "".join(map(str, cfg.bits.tolist())), "probability": str(mass)}
            for cfg, mass in measure.entries
        ]
    out, close = _open_output(args.output)
    try:
        json.dump(doc, out, indent=2)
        out.write("\n")
    finally:
        if close:
            out.close()
    return 0


def _one_sample_record(payload):
    kind, d, p_text, depth, seed, replica, emit_forest = payload
    p = _parse_p(p_text, "any")
    params = GasParams(d=d, p=p)
    if kind == "finite":
        shape = TreeShape(d, depth, wired=True)
        spec = SamplerSpec(shape=shape, params=params, master_seed=seed, replicas=1)
        sc = sampling.sample_states_finite(spec, replica)
    else:
        shape = TreeShape(d, depth, wired=False)
        spec = SamplerSpec(shape=shape, params=params, master_seed=seed, replicas=1)
        sc = sampling.sample_states_limit(spec, replica)
    rec = {
        "replica": replica,
        "seed": sampling.replica_seed(seed, replica),
        "states": pack_states(sc.states),
    }
    if emit_forest:
        rec["forest"] = "".join(map(str, phi_inverse(sc).bits.tolist()))
    return json.dumps(rec)


def cmd_sample(args):
    depth = args.n if args.kind == "finite" else args.depth
    if depth is None:
        raise UsageError(
            "finite sampling needs --n, limit sampling needs --depth"
        )
    if args.stream:
        if args.kind != "limit":
            raise UsageError("--stream is only available for limit windows")
        if args.emit:
            raise UsageError("--stream forbids per-edge emission; pick --stats")
        if not args.stats:
            raise UsageError("--stream requires --stats clusters or --stats edges")
        return _cmd_sample_stream(args, depth)
    payloads = [
        (args.kind, args.d, args.p, depth, args.seed, r, args.emit == "forest")
        for r in range(args.replicas)
    ]
    out, close = _open_output(args.output)
    try:
        if args.workers > 1:
            with ProcessPoolExecutor(max_workers=args.workers) as pool:
                for line in pool.map(_one_sample_record, payloads, chunksize=64):
                    out.write(line + "\n")
        else:
            for payload in payloads:
                out.write(_one_sample_record(payload) + "\n")
    finally:
        if close:
            out.close()
    return 0


def _cmd_sample_stream(args, depth):
    p = _parse_p(args.p, "any")
    params = GasParams(d=args.d, p=p)
    shape = TreeShape(args.d, depth, wired=False)
    spec = SamplerSpec(
        shape=shape, params=params, master_seed=args.seed, replicas=args.replicas
    )
    out, close = _open_output(args.output)
    try:
        if args.stats == "edges":
            ws = streaming.stream_window_stats(spec)
            json.dump(
                {
                    "replicas": ws.replicas,
                    "edges": ws.edges,
                    "state_counts": ws.state_counts.tolist(),
                    "open_fraction": ws.open_fraction,
                    "one_ended_violations": ws.one_ended_violations,
                },
                out,
                indent=2,
            )
            out.write("\n")
        else:
            harvest = streaming.stream_cluster_sizes(
                spec,
                site_max_level=args.site_max_level,
                size_cap=args.size_cap,
            )
            w = csv.writer(out)
            w.writerow(["size", "count"])
            for k in range(1, harvest.size_counts.size):
                w.writerow([k, int(harvest.size_counts[k])])
            w.writerow(["tail", harvest.tail_count])
            w.writerow(["censored", harvest.censored_count])
    finally:
        if close:
            out.close()
    return 0


def cmd_verify(args):
    kwargs = {"d": args.d}
    if args.suite in ("recursion", "pushforward"):
        kwargs["p"] = _parse_p(args.p, "exact")
        kwargs["n"] = args.n if args.n is not None else 2
        kwargs["cap"] = _enum_cap()
    elif args.suite == "kernels":
        kwargs["p"] = _parse_p(args.p, "any")
        if args.n is not None:
            kwargs["n"] = args.n
    elif args.suite == "sampler-gof":
        kwargs["p"] = _parse_p(args.p, "exact")
        kwargs["n"] = args.n if args.n is not None else 2
        kwargs["replicas"] = args.replicas
        kwargs["seed"] = args.seed
    elif args.suite == "gw":
        kwargs["p"] = _parse_p(args.p, "float")
        if args.depth is not None:
            kwargs["depth"] = args.depth
        kwargs["seed"] = args.seed
    elif args.suite == "bernoulli":
        kwargs["p"] = _parse_p(args.p, "float")
        if args.depth is not None:
            kwargs["depth"] = args.depth
        kwargs["replicas"] = args.replicas
        kwargs["seed"] = args.seed
    report = verify.run_suite(args.suite, **kwargs)
    out, close = _open_output(args.output)
    try:
        json.dump(report, out, indent=2)
        out.write("\n")
    finally:
        if close:
            out.close()
    return 0 if report["passed"] else 1


def _load_records(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            lines = [ln for ln in fh if ln.strip()]
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc
    if not lines:
        raise UsageError(f"input file {path} is empty")
    try:
        return [json.loads(ln) for ln in lines]
    except json.JSONDecodeError as exc:
        raise UsageError(f"malformed NDJSON in {path}: {exc}") from exc


def cmd_stats(args):
    depth = args.n if args.kind == "finite" else args.depth
    if depth is None:
        raise UsageError("stats needs --n (finite input) or --depth (limit input)")
    shape = TreeShape(args.d, depth, wired=args.kind == "finite")
    records = _load_records(args.input)
    m = edge_count(shape)
    configs = []
    for rec in records:
        try:
            configs.append(StateConfig(unpack_states(rec["states"], m), shape))
        except (KeyError, ValueError) as exc:
            raise UsageError(f"bad sample record: {exc}") from exc
    doc = {"records": len(configs)}
    sizes_hist = {}
    if args.kind == "finite":
        flags = []
        for sc in configs:
            report = stats.components(phi_inverse(sc))
            flags.append(report.boundary_connected)
            for s in report.component_sizes:
                sizes_hist[s] = sizes_hist.get(s, 0) + 1
        est, se = stats.survival_frequency(flags)
        doc["survival_frequency"] = {"estimate": est, "standard_error": se}
    else:
        collected = []
        for sc in configs:
            collected.extend(
                stats.finite_cluster_samples(
                    sc,
                    site_max_level=args.site_max_level,
                    size_cap=args.size_cap,
                )
            )
        kept = [s for s, censored in collected if not censored]
        for s in kept:
            sizes_hist[s] = sizes_hist.get(s, 0) + 1
        doc["clusters"] = {
            "collected": len(collected),
            "censored": sum(1 for _, c in collected if c),
        }
        if args.gw and kept:
            k_max = args.size_cap
            ref = stats.gw_total_progeny_pmf(args.d, k_max)
            observed = np.zeros(k_max + 1)
            tail_obs = 0
            for s in kept:
                if s <= k_max:
                    observed[s] += 1
                else:
                    tail_obs += 1
            gof = stats.goodness_of_fit(
                np.append(observed[1:], tail_obs),
                np.append(ref.pmf[1:], ref.tail_mass),
            )
            doc["gw_comparison"] = {
                "tv_distance": gof.tv_distance,
                "chi_square": gof.chi_square,
                "p_value": gof.p_value,
                "dof": gof.dof,
            }
    doc["component_size_histogram"] = {
        str(k): v for k, v in sorted(sizes_hist.items())
    }
    out, close = _open_output(args.output)
    try:
        if args.format == "csv":
            w = csv.writer(out)
            w.writerow(["size", "count"])
            for k, v in sorted(sizes_hist.items()):
                w.writerow([k, v])
        else:
            json.dump(doc, out, indent=2)
            out.write("\n")
    finally:
        if close:
            out.close()
    return 0


def build_parser():
    ap = argparse.ArgumentParser(
        prog="arboreal-gas",
        description="Exact computation and simulation for the arboreal gas "
        "on wired d-ary trees.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--d", type=int, required=True, help="branching factor")
        sp.add_argument("--output", default=None, help="output path (default stdout)")

    sp = sub.add_parser("recursion", help="survival/partition recursions")
    common(sp)
    sp.add_argument("--p", required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--mode", choices=["exact", "float"], default="exact")
    sp.add_argument("--format", choices=["csv", "json"], default="csv")
    sp.set_defaults(func=cmd_recursion)

    sp = sub.add_parser("enumerate", help="brute-force partition functions")
    common(sp)
    sp.add_argument("--p", required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--dump-measure", action="store_true")
    sp.add_argument("--cap", type=int, default=None)
    sp.set_defaults(func=cmd_enumerate)

    sp = sub.add_parser("sample", help="draw replicas as NDJSON")
    sp.add_argument("kind", choices=["finite", "limit"])
    common(sp)
    sp.add_argument("--p", required=True)
    sp.add_argument("--n", type=int, default=None, help="wired tree depth")
    sp.add_argument("--depth", type=int, default=None, help="limit window depth")
    sp.add_argument("--replicas", type=int, default=1)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--emit", choices=["forest"], default=None)
    sp.add_argument("--workers", type=int, default=1)
    sp.add_argument("--stream", action="store_true")
    sp.add_argument("--stats", choices=["clusters", "edges"], default=None)
    sp.add_argument("--site-max-level", type=int, default=5)
    sp.add_argument("--size-cap", type=int, default=50)
    sp.set_defaults(func=cmd_sample)

    sp = sub.add_parser("verify", help="run a verification suite")
    common(sp)
    sp.add_argument("--suite", choices=list(verify.SUITES), required=True)
    sp.add_argument("--p", required=True)
    sp.add_argument("--n", type=int, default=None)
    sp.add_argument("--depth", type=int, default=None)
    sp.add_argument("--replicas", type=int, default=10_000)
    sp.add_argument("--seed", type=int, default=1234)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("stats", help="summarize sampled NDJSON")
    common(sp)
    sp.add_argument("--input", required=True)
    sp.add_argument("--kind", choices=["finite", "limit"], default="finite")
    sp.add_argument("--n", type=int, default=None)
    sp.add_argument("--depth", type=int, default=None)
    sp.add_argument("--gw", action="store_true", help="compare clusters to the "
                    "critical branching total-progeny law")
    sp.add_argument("--site-max-level", type=int, default=None,
                    help="restrict cluster collection sites to shallow levels")
    sp.add_argument("--size-cap", type=int, default=50)
    sp.add_argument("--format", choices=["json", "csv"], default="json")
    sp.set_defaults(func=cmd_stats)
    return ap


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse uses 2 for usage errors already
        return int(exc.code or 0)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
