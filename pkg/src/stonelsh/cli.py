"""Command-line entry point.

Subcommands: gen (scene -> dataset CSV), build (dataset -> serialized
index), query (index + fingerprints -> positions), sweep (full
experiment -> metrics CSV), report (metrics CSV -> figures).
"""

from __future__ import annotations

import argparse
import sys

from . import bench, channel, index, report, store
from .errors import StoneLshError


def _int_list(text: str) -> tuple[int, ...]:
    return tuple(int(v) for v in text.split(","))


def _add_scene_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--antennas", type=int, default=32)
    p.add_argument("--subcarriers", type=int, default=8)
    p.add_argument("--carrier-freq-hz", type=float, default=2.68e9)
    p.add_argument("--bandwidth-hz", type=float, default=20e6)
    p.add_argument("--area-side-m", type=float, default=200.0)
    p.add_argument("--n-points", type=int, default=2000)
    p.add_argument(
        "--propagation", choices=["los", "nlos"], default="los"
    )
    p.add_argument("--scatterers", type=int, default=10)
    p.add_argument(
        "--snr-db",
        type=float,
        default=20.0,
        help="per-channel SNR in dB; 'inf' disables noise",
    )


def _scene_from_args(args, seed: int) -> channel.SceneConfig:
    return channel.SceneConfig(
        antennas=args.antennas,
        subcarriers=args.subcarriers,
        carrier_freq_hz=args.carrier_freq_hz,
        bandwidth_hz=args.bandwidth_hz,
        area_side_m=args.area_side_m,
        n_points=args.n_points,
        propagation=args.propagation,
        n_scatterers=args.scatterers,
        snr_db=args.snr_db,
        seed=seed,
    )


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="stonelsh",
        description="LSH-accelerated CSI-fingerprint positioning benchmark",
    )
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate a synthetic scene dataset CSV")
    _add_scene_args(g)
    g.add_argument("--seed", type=int, required=True)
    g.add_argument("--out", required=True, help="dataset CSV path")

    b = sub.add_parser("build", help="build and serialize an index")
    b.add_argument("--data", required=True, help="dataset CSV")
    b.add_argument("--hash-bits", "-L", type=int, required=True, dest="L")
    b.add_argument("--tables", "-T", type=int, required=True, dest="T")
    b.add_argument("--delta", type=int, default=1)
    b.add_argument("--seed", type=int, required=True)
    b.add_argument("--out", required=True, help="index file path")

    q = sub.add_parser("query", help="estimate positions for query fingerprints")
    q.add_argument("--index", required=True, help="serialized index")
    q.add_argument("--data", required=True, help="database dataset CSV")
    q.add_argument("--queries", required=True, help="query dataset CSV")
    q.add_argument("--neighbors", "-K", type=int, default=2, dest="K")
    q.add_argument("--delta", type=int, default=None, help="default: index delta")
    q.add_argument("--out", default=None, help="write x,y CSV here instead of stdout")

    s = sub.add_parser("sweep", help="run the (L, T, delta) experiment sweep")
    _add_scene_args(s)
    s.add_argument("--seed", type=int, required=True, help="master seed")
    s.add_argument("--hash-bits", "-L", type=_int_list, default=(8, 12, 16), dest="L")
    s.add_argument("--tables", "-T", type=_int_list, default=(1, 2, 4, 8), dest="T")
    s.add_argument("--delta", type=_int_list, default=(0, 1, 2))
    s.add_argument("--neighbors", "-K", type=int, default=2, dest="K")
    s.add_argument("--n-queries", type=int, default=200)
    s.add_argument("--repeats", type=int, default=1)
    s.add_argument("--jobs", type=int, default=1)
    s.add_argument("--out", required=True, help="metrics CSV path")

    r = sub.add_parser("report", help="render trade-off figures from a metrics CSV")
    r.add_argument("--metrics", required=True)
    r.add_argument("--out-dir", required=True)
    return p


def _cmd_gen(args) -> None:
    cfg = _scene_from_args(args, args.seed)
    data = channel.generate_scene(cfg)
    store.write_dataset_csv(data, args.out)
    channel.write_config_sidecar(cfg, args.out + ".cfg")
    print(f"wrote {data.count} points (D={data.dim}) to {args.out}")


def _cmd_build(args) -> None:
    data = store.read_dataset_csv(args.data)
    cfg = index.HashConfig(
        dim=data.dim, L=args.L, T=args.T, delta=args.delta, seed=args.seed
    )
    idx = index.build_index(data.fingerprints, cfg)
    index.save_index(idx, args.out)
    print(f"indexed {idx.n_points} points into {args.T} tables -> {args.out}")


def _cmd_query(args) -> None:
    idx = index.load_index(args.index)
    data = store.read_dataset_csv(args.data)
    queries = store.read_dataset_csv(args.queries)
    delta = idx.config.delta if args.delta is None else args.delta
    lines = []
    for i in range(queries.count):
        neigh, _ = store.approx_knn(idx, data, queries.fingerprints[i], args.K, delta)
        est = store.estimate_position(data, neigh)
        lines.append(f"{float(est[0])!r},{float(est[1])!r}")
    text = "x,y\n" + "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _cmd_sweep(args) -> None:
    scene = _scene_from_args(args, seed=0)  # per-repeat seeds come from --seed
    spec = bench.SweepSpec(
        L_values=args.L,
        T_values=args.T,
        delta_values=args.delta,
        K=args.K,
        n_queries=args.n_queries,
        seed=args.seed,
        repeats=args.repeats,
    )
    rows = bench.run_sweep(spec, scene, jobs=args.jobs)
    bench.write_metrics_csv(rows, args.out)
    print(f"wrote {len(rows)} metric rows to {args.out}")


def _cmd_report(args) -> None:
    rows = bench.read_metrics_csv(args.metrics)
    for path in report.render_report(rows, args.out_dir):
        print(f"wrote {path}")


_COMMANDS = {
    "gen": _cmd_gen,
    "build": _cmd_build,
    "query": _cmd_query,
    "sweep": _cmd_sweep,
    "report": _cmd_report,
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        _COMMANDS[args.command](args)
    except StoneLshError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
