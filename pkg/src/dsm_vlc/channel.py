"""Line-of-sight Lambertian VLC channel and AWGN.

LEDs point straight down from the ceiling plane and photodiodes straight up
from the receiving plane, so the emission and incidence angles of a link are
both measured from the vertical.
"""

import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np


class GeometryError(ValueError):
    pass


def square_array(n: int, spacing: float, center_xy, height: float) -> np.ndarray:
    """Place ``n`` elements on a near-square grid centred on ``center_xy``.

    The grid has ``ceil(sqrt(n))`` columns and is filled row by row, so 2
    elements form a 1x2 line and 4 a 2x2 square.
    """
    cols = math.ceil(math.sqrt(n))
    rows = math.ceil(n / cols)
    pts = []
    for k in range(n):
        r, c = divmod(k, cols)
        x = center_xy[0] + (c - (cols - 1) / 2) * spacing
        y = center_xy[1] + (r - (rows - 1) / 2) * spacing
        pts.append((x, y, height))
    return np.array(pts, dtype=float)


@dataclass
class RoomConfig:
    room: tuple = (4.0, 4.0, 3.0)
    led_positions: np.ndarray = None
    pd_positions: np.ndarray = None
    semi_angle: float = 60.0      # LED semi-angle at half power, degrees
    fov: float = 60.0             # lens half-angle field of view, degrees
    responsivity: float = 0.53    # A/W
    pd_area: float = 1e-4         # m^2
    filter_gain: float = 1.0
    refractive_index: float = 1.5

    def __post_init__(self):
        self.room = tuple(float(v) for v in self.room)
        if self.led_positions is None:
            self.led_positions = square_array(2, 1.0, (self.room[0] / 2, self.room[1] / 2), self.room[2])
        if self.pd_positions is None:
            self.pd_positions = square_array(2, 1.0, (self.room[0] / 2, self.room[1] / 2), 0.85)
        self.led_positions = np.atleast_2d(np.asarray(self.led_positions, dtype=float))
        self.pd_positions = np.atleast_2d(np.asarray(self.pd_positions, dtype=float))
        self.validate()

    @classmethod
    def default(cls, nt: int = 2, nr: int = 2, spacing: float = 1.0, led_height: float = 3.0,
                pd_height: float = 0.85, room=(4.0, 4.0, 3.0), **kw) -> "RoomConfig":
        center = (room[0] / 2, room[1] / 2)
        return cls(
            room=room,
            led_positions=square_array(nt, spacing, center, led_height),
            pd_positions=square_array(nr, spacing, center, pd_height),
            **kw,
        )

    @property
    def nt(self) -> int:
        return len(self.led_positions)

    @property
    def nr(self) -> int:
        return len(self.pd_positions)

    def validate(self):
        if not 0 < self.semi_angle < 90:
            raise ValueError(f"semi_angle must lie in (0, 90) degrees, got {self.semi_angle}")
        if not 0 < self.fov <= 90:
            raise ValueError(f"fov must lie in (0, 90] degrees, got {self.fov}")
        if self.responsivity <= 0 or self.pd_area <= 0:
            raise ValueError("responsivity and pd_area must be positive")
        for name in ("led_positions", "pd_positions"):
            pos = getattr(self, name)
            if pos.size == 0:
                raise GeometryError(f"{name} is empty")
            if pos.ndim != 2 or pos.shape[1] != 3:
                raise GeometryError(f"{name} must be a list of 3-D points")
            lo = np.all(pos >= -1e-12)
            hi = np.all(pos <= np.asarray(self.room) + 1e-12)
            if not (lo and hi):
                raise GeometryError(f"{name} has points outside the {self.room} room")

    @property
    def lambertian_order(self) -> float:
        return -math.log(2) / math.log(math.cos(math.radians(self.semi_angle)))


@dataclass(frozen=True)
class ChannelModel:
    h: np.ndarray = field(repr=False)
    lambertian_order: float

    @property
    def nr(self) -> int:
        return self.h.shape[0]

    @property
    def nt(self) -> int:
        return self.h.shape[1]


def lambertian_gain(led, pd, cfg: RoomConfig) -> float:
    """DC gain of the LOS link from ``led`` to ``pd``.

    ``h = (w+1) rho A / (2 pi d^2) cos^w(phi) T_s g(theta) cos(theta)`` with
    ``g = n^2 / sin^2(FOV)`` inside the field of view and zero outside.
    """
    led = np.asarray(led, dtype=float)
    pd = np.asarray(pd, dtype=float)
    delta = led - pd
    d = float(np.linalg.norm(delta))
    if d == 0.0:
        raise GeometryError(f"LED and PD coincide at {tuple(led)}")
    vertical = delta[2]
    if vertical <= 0:
        return 0.0
    cos_angle = vertical / d  # emission and incidence share the vertical axis
    theta = math.acos(min(1.0, cos_angle))
    fov = math.radians(cfg.fov)
    if theta > fov:
        return 0.0
    w = cfg.lambertian_order
    g = cfg.refractive_index**2 / math.sin(fov) ** 2
    return (
        (w + 1) * cfg.responsivity * cfg.pd_area / (2 * math.pi * d**2)
        * cos_angle**w * cfg.filter_gain * g * cos_angle
    )


def build_channel_matrix(cfg: RoomConfig) -> ChannelModel:
    leds, pds = cfg.led_positions, cfg.pd_positions
    if len(leds) == 0 or len(pds) == 0:
        raise GeometryError("need at least one LED and one PD")
    h = np.empty((len(pds), len(leds)))
    for j, pd in enumerate(pds):
        for i, led in enumerate(leds):
            h[j, i] = lambertian_gain(led, pd, cfg)
    h.setflags(write=False)
    return ChannelModel(h, cfg.lambertian_order)


def noise_variance(snr_db: float, symbol_energy: float = 1.0) -> float:
    """Complex noise variance for a transmit SNR of ``E_s / sigma^2``."""
    if math.isinf(snr_db) and snr_db > 0:
        return 0.0
    return symbol_energy * 10.0 ** (-snr_db / 10.0)


def apply_channel(model: ChannelModel, s: np.ndarray, snr_db: float, rng: np.random.Generator) -> np.ndarray:
    """``Y = H S + N`` with circularly symmetric complex Gaussian ``N``.

    ``snr_db=math.inf`` disables the noise and leaves ``rng`` untouched.
    """
    y = model.h @ s
    var = noise_variance(snr_db)
    if var == 0.0:
        return y.astype(complex)
    shape = y.shape
    scale = math.sqrt(var / 2.0)
    noise = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
    return y + scale * noise


# key=value configuration files ------------------------------------------------

ROOM_KEYS = {
    "room_x": float, "room_y": float, "room_z": float, "nt": int, "nr": int,
    "led_height": float, "pd_height": float, "spacing": float, "semi_angle": float,
    "fov": float, "responsivity": float, "area_cm2": float, "refractive_index": float,
    "filter_gain": float,
}


def parse_key_values(text: str, source: str = "<string>") -> dict:
    """Parse ``key = value`` lines; ``#`` starts a comment."""
    out = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{source}:{lineno}: expected key=value, got {raw.strip()!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if not key:
            raise ValueError(f"{source}:{lineno}: empty key")
        out[key] = value
    return out


def room_from_mapping(values: dict) -> RoomConfig:
    """Build a :class:`RoomConfig` from room keys; unknown keys are ignored here."""
    conv = {}
    for key, typ in ROOM_KEYS.items():
        if key in values:
            try:
                conv[key] = typ(values[key])
            except ValueError:
                raise ValueError(f"bad value for {key}: {values[key]!r}") from None
    room = (conv.get("room_x", 4.0), conv.get("room_y", 4.0), conv.get("room_z", 3.0))
    return RoomConfig.default(
        nt=conv.get("nt", 2),
        nr=conv.get("nr", conv.get("nt", 2)),
        spacing=conv.get("spacing", 1.0),
        led_height=conv.get("led_height", room[2]),
        pd_height=conv.get("pd_height", 0.85),
        room=room,
        semi_angle=conv.get("semi_angle", 60.0),
        fov=conv.get("fov", 60.0),
        responsivity=conv.get("responsivity", 0.53),
        pd_area=conv.get("area_cm2", 1.0) * 1e-4,
        refractive_index=conv.get("refractive_index", 1.5),
        filter_gain=conv.get("filter_gain", 1.0),
    )


def load_room_config(path) -> RoomConfig:
    path = Path(path)
    return room_from_mapping(parse_key_values(path.read_text(), str(path)))
