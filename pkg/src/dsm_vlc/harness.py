"""Monte Carlo BER sweeps, complexity reports and output files."""

import csv
import hashlib
import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from dsm_vlc.channel import (
    ROOM_KEYS,
    RoomConfig,
    apply_channel,
    build_channel_matrix,
    parse_key_values,
    room_from_mapping,
)
from dsm_vlc.codec import bits_per_block, build_index_table, encode_block
from dsm_vlc.constellation import build_constellation
from dsm_vlc.detectors import DETECTORS, GaParams, ga_detect, ml_detect, vc_omp_detect
from dsm_vlc.flops import count_ml, count_scheme_a, count_scheme_b

MODULATIONS = {"bpsk": 2, "qpsk": 4}
CSV_HEADER = ("snr_db", "bit_errors", "bits_total", "ber")
COMPLEXITY_HEADER = ("scheme", "nt", "nr", "m_order", "flops_per_block", "reduction_vs_ml_pct")

# streams derived per (seed, snr index, block index); the last key picks the consumer
_TX_STREAM = 0
_GA_STREAM = 1


def _detector_name(name: str) -> str:
    key = name.replace("-", "_").lower()
    if key not in DETECTORS:
        raise ValueError(f"unknown detector {name!r}; choose from {', '.join(DETECTORS)}")
    return key


@dataclass
class SimConfig:
    room: RoomConfig = field(default_factory=RoomConfig.default)
    modulation: int = 2
    detector: str = "ml"
    ga: GaParams = field(default_factory=GaParams)
    snr_start: float = 80.0
    snr_stop: float = 120.0
    snr_step: float = 5.0
    blocks: int = 1000
    seed: int = 0
    out: str = "results"
    noiseless: bool = False

    def __post_init__(self):
        self.detector = _detector_name(self.detector)
        build_constellation(self.modulation)
        if not self.snr_step > 0:
            raise ValueError(f"snr step must be > 0, got {self.snr_step}")
        if self.snr_stop < self.snr_start:
            raise ValueError("snr stop must not be below snr start")
        if self.blocks < 1:
            raise ValueError(f"blocks per point must be >= 1, got {self.blocks}")
        if self.room.nt < 2:
            raise ValueError("DSM needs at least two LEDs")

    @property
    def nt(self) -> int:
        return self.room.nt

    @property
    def nr(self) -> int:
        return self.room.nr

    def snr_grid(self) -> list:
        n = int(math.floor((self.snr_stop - self.snr_start) / self.snr_step + 1e-9)) + 1
        return [float(self.snr_start + k * self.snr_step) for k in range(n)]

    def echo(self) -> dict:
        """JSON-friendly description used for metadata and the run identifier."""
        room = self.room
        return {
            "detector": self.detector,
            "nt": self.nt,
            "nr": self.nr,
            "modulation": self.modulation,
            "snr_grid": self.snr_grid(),
            "blocks": self.blocks,
            "seed": self.seed,
            "noiseless": self.noiseless,
            "ga": asdict(self.ga),
            "room": {
                "dims": list(room.room),
                "led_positions": room.led_positions.tolist(),
                "pd_positions": room.pd_positions.tolist(),
                "semi_angle": room.semi_angle,
                "fov": room.fov,
                "responsivity": room.responsivity,
                "pd_area": room.pd_area,
                "filter_gain": room.filter_gain,
                "refractive_index": room.refractive_index,
            },
        }

    def run_id(self) -> str:
        blob = json.dumps(self.echo(), sort_keys=True).encode()
        return hashlib.sha1(blob).hexdigest()[:12]


SIM_KEYS = {
    "detector": str, "mod": str, "snr_start": float, "snr_stop": float, "snr_step": float,
    "blocks": int, "seed": int, "out": str, "population_size": int, "generations": int,
    "crossover_prob": float, "mutation_prob": float, "tournament_size": int,
}


def sim_config_from_mapping(values: dict) -> SimConfig:
    unknown = set(values) - set(ROOM_KEYS) - set(SIM_KEYS)
    if unknown:
        raise ValueError(f"unknown config keys: {', '.join(sorted(unknown))}")
    conv = {}
    for key, typ in SIM_KEYS.items():
        if key in values and values[key] is not None:
            try:
                conv[key] = typ(values[key])
            except ValueError:
                raise ValueError(f"bad value for {key}: {values[key]!r}") from None
    mod = conv.get("mod", "bpsk").lower()
    if mod not in MODULATIONS:
        raise ValueError(f"unknown modulation {mod!r}; choose from {', '.join(MODULATIONS)}")
    ga = GaParams(
        population_size=conv.get("population_size"),
        generations=conv.get("generations", 10),
        crossover_prob=conv.get("crossover_prob", 0.8),
        mutation_prob=conv.get("mutation_prob", 0.05),
        tournament_size=conv.get("tournament_size", 2),
    )
    return SimConfig(
        room=room_from_mapping(values),
        modulation=MODULATIONS[mod],
        detector=conv.get("detector", "ml"),
        ga=ga,
        snr_start=conv.get("snr_start", 80.0),
        snr_stop=conv.get("snr_stop", 120.0),
        snr_step=conv.get("snr_step", 5.0),
        blocks=conv.get("blocks", 1000),
        seed=conv.get("seed", 0),
        out=conv.get("out", "results"),
    )


def load_sim_config(path, overrides: dict = None) -> SimConfig:
    path = Path(path)
    values = parse_key_values(path.read_text(), str(path))
    values.update({k: v for k, v in (overrides or {}).items() if v is not None})
    return sim_config_from_mapping(values)


@dataclass
class BerCurve:
    points: list = field(default_factory=list)  # (snr_db, bit_errors, bits_total, ber)
    metadata: dict = field(default_factory=dict)

    @property
    def ber(self) -> np.ndarray:
        return np.array([p[3] for p in self.points])

    @property
    def snr_db(self) -> np.ndarray:
        return np.array([p[0] for p in self.points])


def _trial_rng(seed: int, snr_index: int, block: int, stream: int) -> np.random.Generator:
    return np.random.default_rng([seed, snr_index, block, stream])


def _run_point(cfg: SimConfig, snr_index: int, snr_db: float):
    """Transmit ``cfg.blocks`` data blocks at one SNR and count bit errors.

    Block 0 is the ``S_0 = I`` reference and carries no data.
    """
    table = build_index_table(cfg.nt)
    c = build_constellation(cfg.modulation)
    model = build_channel_matrix(cfg.room)
    nb = bits_per_block(table, c)
    noise_snr = math.inf if cfg.noiseless else snr_db

    s = np.eye(cfg.nt, dtype=complex)
    y_prev = apply_channel(model, s, noise_snr, _trial_rng(cfg.seed, snr_index, 0, _TX_STREAM))
    errors = 0
    for tau in range(1, cfg.blocks + 1):
        rng = _trial_rng(cfg.seed, snr_index, tau, _TX_STREAM)
        bits = rng.integers(0, 2, nb, dtype=np.uint8)
        s = s @ encode_block(bits, table, c)
        y = apply_channel(model, s, noise_snr, rng)
        if cfg.detector == "ml":
            res = ml_detect(y, y_prev, table, c)
        elif cfg.detector == "vc_omp":
            res = vc_omp_detect(y, y_prev, table, c)
        else:
            res = ga_detect(y, y_prev, table, c, cfg.ga, _trial_rng(cfg.seed, snr_index, tau, _GA_STREAM))
        errors += int(np.count_nonzero(res.bits != bits))
        y_prev = y
    total = cfg.blocks * nb
    return snr_db, errors, total, errors / total


def run_ber_sweep(cfg: SimConfig, workers: int = 1) -> BerCurve:
    """BER versus transmit SNR for one detector.

    Every block draws from its own stream keyed by (seed, snr index, block
    index), so the curve does not depend on ``workers``.
    """
    grid = cfg.snr_grid()
    jobs = [(cfg, k, snr) for k, snr in enumerate(grid)]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            points = list(pool.map(_run_point, *zip(*jobs)))
    else:
        points = [_run_point(*job) for job in jobs]
    meta = {"config": cfg.echo(), "run_id": cfg.run_id()}
    return BerCurve(points=points, metadata=meta)


def run_complexity_report(configs, ga: GaParams = None) -> list:
    """FLOPs per block for each scheme and ``(nt, m_order)`` pair (``nr = nt``)."""
    ga = GaParams() if ga is None else ga
    rows = []
    for nt, m_order in configs:
        nr = nt
        q = build_index_table(nt).q
        ml = count_ml(nt, nr, m_order, q)
        a = count_scheme_a(nt, nr, m_order)
        b = count_scheme_b(nt, nr, m_order, ga.generations, ga.population_size)
        for scheme, flops in (("ml", ml), ("vc_omp", a), ("omp_ga", b)):
            rows.append({
                "scheme": scheme,
                "nt": nt,
                "nr": nr,
                "m_order": m_order,
                "flops_per_block": flops,
                "reduction_vs_ml_pct": round(100.0 * (1.0 - flops / ml), 3),
            })
    return rows


def write_complexity_csv(rows, path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=COMPLEXITY_HEADER, lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
    return path


def compare_curves(curves: dict) -> list:
    """Per-SNR BER of each detector and the relative improvement over ML.

    ``curves`` maps detector name to :class:`BerCurve`; an ``ml`` entry is
    required for the improvement columns. Improvement is ``1 - ber/ber_ml``
    in percent (negative means worse than ML).
    """
    names = list(curves)
    ml = curves.get("ml")
    rows = []
    for k, snr in enumerate(curves[names[0]].snr_db):
        row = {"snr_db": float(snr)}
        for name in names:
            row[f"ber_{name}"] = curves[name].points[k][3]
        if ml is not None:
            base = ml.points[k][3]
            for name in names:
                if name == "ml":
                    continue
                ber = curves[name].points[k][3]
                row[f"improvement_{name}_pct"] = (
                    round(100.0 * (1.0 - ber / base), 3) if base > 0 else float("nan")
                )
        rows.append(row)
    return rows


def _unique_stem(directory: Path, stem: str) -> str:
    candidate, n = stem, 1
    while (directory / f"{candidate}.csv").exists():
        candidate = f"{stem}-{n}"
        n += 1
    return candidate


PLOT_SCRIPT = '''"""Plot the BER curve stored next to this script. Requires matplotlib."""
import csv
import sys
from pathlib import Path

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

src = Path(__file__).with_name({csv_name!r})
snr, ber = [], []
with src.open() as fh:
    for row in csv.DictReader(fh):
        snr.append(float(row["snr_db"]))
        ber.append(float(row["ber"]))

fig, ax = plt.subplots(figsize=(6, 4))
ax.semilogy(snr, [max(b, 1e-7) for b in ber], "o-", label={label!r})
ax.set_xlabel("transmit SNR (dB)")
ax.set_ylabel("BER")
ax.grid(True, which="both", alpha=0.3)
ax.legend()
out = Path(sys.argv[1]) if len(sys.argv) > 1 else src.with_suffix(".png")
fig.savefig(out, dpi=150, bbox_inches="tight")
print(out)
'''


def emit_outputs(curve: BerCurve, directory, name: str = None) -> dict:
    """Write ``<name>.csv``, ``<name>_plot.py`` and ``<name>.meta.json``.

    Existing files are never overwritten; a numeric suffix is added instead.
    """
    directory = Path(directory)
    try:
        directory.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise OSError(f"cannot create output directory {directory}: {exc}") from exc
    if name is None:
        cfg = curve.metadata.get("config", {})
        name = "ber_{}_nt{}_nr{}_m{}_seed{}".format(
            cfg.get("detector", "unknown"), cfg.get("nt", "x"), cfg.get("nr", "x"),
            cfg.get("modulation", "x"), cfg.get("seed", "x"),
        )
    stem = _unique_stem(directory, name)
    paths = {
        "csv": directory / f"{stem}.csv",
        "plot": directory / f"{stem}_plot.py",
        "meta": directory / f"{stem}.meta.json",
    }
    try:
        with paths["csv"].open("w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(CSV_HEADER)
            for snr, errs, total, ber in curve.points:
                w.writerow([repr(float(snr)), int(errs), int(total), repr(float(ber))])
        paths["plot"].write_text(PLOT_SCRIPT.format(csv_name=paths["csv"].name, label=stem))
        paths["meta"].write_text(json.dumps(curve.metadata, indent=2, sort_keys=True) + "\n")
    except OSError as exc:
        raise OSError(f"failed writing outputs under {directory}: {exc}") from exc
    return paths


def read_ber_csv(path) -> list:
    with Path(path).open() as fh:
        return [
            (float(r["snr_db"]), int(r["bit_errors"]), int(r["bits_total"]), float(r["ber"]))
            for r in csv.DictReader(fh)
        ]


def default_workers() -> int:
    return max(1, min(os.cpu_count() or 1, 8))
