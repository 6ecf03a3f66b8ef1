"""Command-line entry point: ``dsm-vlc simulate`` and ``dsm-vlc complexity``."""

import argparse
import sys
from pathlib import Path

from dsm_vlc.harness import (
    MODULATIONS,
    emit_outputs,
    load_sim_config,
    run_ber_sweep,
    run_complexity_report,
    write_complexity_csv,
)


def _int_list(text):
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _mod_list(text):
    mods = [v.strip().lower() for v in text.split(",") if v.strip()]
    bad = [m for m in mods if m not in MODULATIONS]
    if bad:
        raise argparse.ArgumentTypeError(f"unknown modulation(s): {', '.join(bad)}")
    return mods


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dsm-vlc", description="DSM over indoor VLC: BER and complexity")
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="run a Monte Carlo BER sweep")
    sim.add_argument("--config", required=True, help="key=value configuration file")
    sim.add_argument("--detector", choices=["ml", "vc-omp", "omp-ga"])
    sim.add_argument("--nt", type=int)
    sim.add_argument("--nr", type=int)
    sim.add_argument("--mod", choices=sorted(MODULATIONS))
    sim.add_argument("--snr-start", type=float)
    sim.add_argument("--snr-stop", type=float)
    sim.add_argument("--snr-step", type=float)
    sim.add_argument("--blocks", type=int)
    sim.add_argument("--seed", type=int)
    sim.add_argument("--out", help="output directory")
    sim.add_argument("--workers", type=int, default=1, help="parallel processes over SNR points")

    cx = sub.add_parser("complexity", help="FLOPs per block for every scheme")
    cx.add_argument("--nt-list", type=_int_list, default=[2, 4])
    cx.add_argument("--mod-list", type=_mod_list, default=["bpsk", "qpsk"])
    cx.add_argument("--out", default="results")
    return parser


def _simulate(args) -> int:
    overrides = {
        "detector": args.detector,
        "nt": args.nt,
        "nr": args.nr,
        "mod": args.mod,
        "snr_start": args.snr_start,
        "snr_stop": args.snr_stop,
        "snr_step": args.snr_step,
        "blocks": args.blocks,
        "seed": args.seed,
        "out": args.out,
    }
    if args.nt is not None and args.nr is None:
        overrides["nr"] = args.nt
    cfg = load_sim_config(args.config, overrides)
    curve = run_ber_sweep(cfg, workers=max(1, args.workers))
    paths = emit_outputs(curve, cfg.out)
    for snr, errs, total, ber in curve.points:
        print(f"{snr:7.2f} dB  errors={errs:<8d} bits={total:<9d} ber={ber:.3e}")
    print(f"wrote {paths['csv']}")
    return 0


def _complexity(args) -> int:
    configs = [(nt, MODULATIONS[m]) for nt in args.nt_list for m in args.mod_list]
    rows = run_complexity_report(configs)
    path = write_complexity_csv(rows, Path(args.out) / "complexity.csv")
    for r in rows:
        print(f"{r['scheme']:>7s} nt={r['nt']} M={r['m_order']}  flops={r['flops_per_block']:>10d}"
              f"  reduction={r['reduction_vs_ml_pct']:8.3f}%")
    print(f"wrote {path}")
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "simulate":
            return _simulate(args)
        return _complexity(args)
    except (OSError, ValueError) as exc:
        print(f"dsm-vlc: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
