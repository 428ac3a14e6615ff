"""Command-line entry point.

Examples:
    ulsim --scheme cnb --zeta 1.3 --slots 2000 --drops 5 --out results/
    ulsim --config run.cfg --sweep zeta=1.3,1.1,0.9,0.7 --out sweep/
    ulsim --scheme fpc --export-plmap --out fpc_run/

All outputs land under --out: summary.json (or sweep.json), cdf.csv with the
per-UE SNR/IoT/throughput CDFs, and optionally plmap.csv.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import config as cfgmod
from . import report
from .engine import build_snapshot


def _parse_sweep(arg: str) -> tuple[str, list[str]]:
    if "=" not in arg:
        raise argparse.ArgumentTypeError("expected --sweep KEY=V1,V2,...")
    key, raw = arg.split("=", 1)
    values = [v for v in raw.split(",") if v]
    if not values:
        raise argparse.ArgumentTypeError("sweep needs at least one value")
    return key.strip(), values


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ulsim",
        description="Uplink multicell simulator with coordinated power control")
    parser.add_argument("--config", type=Path, default=None,
                        help="flat key=value configuration file")
    parser.add_argument("--scheme",
                        choices=["cnb", "fpc", "rlpc", "maxpower"],
                        help="power control scheme")
    parser.add_argument("--zeta", type=float, help="coordination weight")
    parser.add_argument("--seeds", type=int, metavar="N",
                        help="base RNG seed (per-drop seeds derive from it)")
    parser.add_argument("--slots", type=int, help="slots per drop")
    parser.add_argument("--drops", type=int, help="independent drops")
    parser.add_argument("--out", type=Path, default=Path("."),
                        help="output directory")
    parser.add_argument("--sweep", type=_parse_sweep, metavar="KEY=V1,V2,...",
                        help="run once per value of one configuration key")
    parser.add_argument("--export-plmap", action="store_true",
                        help="write the first drop's path-loss map as CSV")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = (cfgmod.parse_config_file(args.config) if args.config
               else dict(cfgmod.DEFAULTS))
        for key, value in (("scheme", args.scheme), ("zeta", args.zeta),
                           ("seed", args.seeds), ("slots", args.slots),
                           ("drops", args.drops)):
            if value is not None:
                cfg = cfgmod.set_key(cfg, key, value)

        out = args.out
        out.mkdir(parents=True, exist_ok=True)

        if args.export_plmap:
            sim = cfgmod.build_sim_config(cfg)
            seed = report._drop_seeds(sim)[0] if sim.n_drops else sim.seed
            snapshot = build_snapshot(sim, seed)
            report.write_plmap_csv(snapshot.plmap.loss_db, out / "plmap.csv")

        if args.sweep:
            key, values = args.sweep
            result = report.run_sweep(cfg, key, values)
            report.write_sweep_json(result, out / "sweep.json")
            for value, summary in zip(result.values, result.summaries):
                report.write_cdf_csv(summary, out / f"cdf_{key}_{value}.csv")
                print(f"{key}={value}: avg={summary.cell_avg_mbps:.3f} Mbps "
                      f"edge={summary.edge_mbps:.4f} Mbps "
                      f"eff={summary.power_efficiency_mbits_per_j:.2f} Mbits/J")
        else:
            summary = report.run_config(cfg)
            report.write_summary_json(summary, out / "summary.json")
            report.write_cdf_csv(summary, out / "cdf.csv")
            print(f"{summary.scheme}: avg={summary.cell_avg_mbps:.3f} Mbps "
                  f"edge={summary.edge_mbps:.4f} Mbps "
                  f"eff={summary.power_efficiency_mbits_per_j:.2f} Mbits/J")
    except (KeyError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
