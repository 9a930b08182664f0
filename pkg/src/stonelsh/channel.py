"""Synthetic massive-MIMO-OFDM channel scenes and beamspace features.

A geometric ray model stands in for a full stochastic channel generator:
LoS scenes use the single direct path, non-LoS scenes sum a fixed set of
scene-global scatterer paths with the direct path removed.  Features are
entrywise magnitudes after a unitary DFT across antennas (beamspace) and
a unitary inverse DFT across subcarriers (delay domain).
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .errors import InvalidConfig, PositionOutOfArea
from .seeding import (
    TAG_NOISE,
    TAG_POSITIONS,
    TAG_SCATTERERS,
    derived_rng,
    derived_seed,
)
from .store import Dataset

SPEED_OF_LIGHT = 299_792_458.0


@dataclass(frozen=True)
class SceneConfig:
    antennas: int = 32
    subcarriers: int = 8
    carrier_freq_hz: float = 2.68e9
    bandwidth_hz: float = 20e6
    area_side_m: float = 200.0
    n_points: int = 2000
    propagation: str = "los"
    n_scatterers: int = 10
    snr_db: float = 20.0
    bs_standoff_m: float = 200.0
    seed: int = 0

    def __post_init__(self):
        if self.propagation not in ("los", "nlos"):
            raise InvalidConfig(f"propagation must be los or nlos, got {self.propagation}")
        if min(self.antennas, self.subcarriers, self.n_points) < 1:
            raise InvalidConfig("antennas, subcarriers and n_points must be positive")
        if self.area_side_m <= 0 or self.bandwidth_hz <= 0:
            raise InvalidConfig("area side and bandwidth must be positive")
        if self.propagation == "nlos" and self.n_scatterers < 1:
            raise InvalidConfig("nlos needs at least one scatterer")

    @property
    def dim(self) -> int:
        return self.antennas * self.subcarriers


def basestation_position(config: SceneConfig) -> np.ndarray:
    """Array center: bs_standoff_m behind the midpoint of the y=0 edge,
    broadside facing the area (macro-cell placement).

    Standoff 0 puts the array on the edge itself; the default keeps every
    transmitter out of the array near region, where single-path features
    degenerate.
    """
    return np.array([config.area_side_m / 2.0, -config.bs_standoff_m])


def subcarrier_freqs(config: SceneConfig) -> np.ndarray:
    """Equispaced subcarriers spanning the band edge to edge."""
    s = config.subcarriers
    if s == 1:
        return np.array([config.carrier_freq_hz])
    half = config.bandwidth_hz / 2.0
    return config.carrier_freq_hz + np.linspace(-half, half, s)


def _check_in_area(pos: np.ndarray, config: SceneConfig) -> None:
    side = config.area_side_m
    if not (0.0 <= pos[0] <= side and 0.0 <= pos[1] <= side):
        raise PositionOutOfArea(f"position {pos} outside [0, {side}]^2")


def _path_response(
    config: SceneConfig, sin_theta: float, delay_s: float, amplitude: complex
) -> np.ndarray:
    """Half-wavelength ULA steering outer delay phasing, scaled by amplitude."""
    steer = np.exp(1j * np.pi * np.arange(config.antennas) * sin_theta)
    tone = np.exp(-2j * np.pi * subcarrier_freqs(config) * delay_s)
    return amplitude * np.outer(steer, tone)


def los_channel(pos: np.ndarray, config: SceneConfig) -> np.ndarray:
    """Single direct path with free-space 1/d amplitude."""
    pos = np.asarray(pos, dtype=np.float64)
    _check_in_area(pos, config)
    bs = basestation_position(config)
    d = float(np.linalg.norm(pos - bs))
    sin_theta = (pos[0] - bs[0]) / d if d > 0 else 0.0
    return _path_response(config, sin_theta, d / SPEED_OF_LIGHT, 1.0 / d)


def scene_scatterers(config: SceneConfig) -> tuple[np.ndarray, np.ndarray]:
    """Scatterer positions and per-path phases, fixed by the scene seed and
    shared by every transmitter in the scene."""
    rng = derived_rng(config.seed, TAG_SCATTERERS)
    points = rng.uniform(0.0, config.area_side_m, size=(config.n_scatterers, 2))
    phases = rng.uniform(0.0, 2.0 * np.pi, size=config.n_scatterers)
    return points, phases


def nlos_channel(pos: np.ndarray, config: SceneConfig) -> np.ndarray:
    """Sum of scatterer bounce paths; the direct path is excluded.

    Path p: delay (d_tx->scat + d_scat->bs)/c, angle from the
    scatterer-basestation geometry, amplitude 1/(d1*d2), plus a random
    phase drawn once per (scene, path).
    """
    pos = np.asarray(pos, dtype=np.float64)
    _check_in_area(pos, config)
    bs = basestation_position(config)
    scats, phases = scene_scatterers(config)
    h = np.zeros((config.antennas, config.subcarriers), dtype=np.complex128)
    for p in range(config.n_scatterers):
        d1 = float(np.linalg.norm(pos - scats[p]))
        d2 = float(np.linalg.norm(scats[p] - bs))
        sin_theta = (scats[p, 0] - bs[0]) / d2 if d2 > 0 else 0.0
        amp = np.exp(1j * phases[p]) / max(d1 * d2, 1e-9)
        h += _path_response(config, sin_theta, (d1 + d2) / SPEED_OF_LIGHT, amp)
    return h


def add_noise(h: np.ndarray, snr_db: float, seed: int) -> np.ndarray:
    """h + circularly symmetric complex Gaussian noise at the given SNR.

    snr_db = +inf disables noise.
    """
    if np.isinf(snr_db) and snr_db > 0:
        return h
    sig_power = float(np.sum(np.abs(h) ** 2))
    noise_power = sig_power / 10.0 ** (snr_db / 10.0)
    per_entry = noise_power / h.size
    rng = derived_rng(seed, TAG_NOISE)
    w = rng.normal(scale=np.sqrt(per_entry / 2.0), size=(*h.shape, 2))
    return h + w[..., 0] + 1j * w[..., 1]


def extract_features(h: np.ndarray) -> np.ndarray:
    """Magnitudes of the beamspace/delay-domain channel, flattened row-major.

    Unitary DFT across antennas, unitary inverse DFT across subcarriers;
    both norm-preserving, so the feature l2 norm equals ||h||_F.
    """
    beam = np.fft.fft(h, axis=0, norm="ortho")
    delay = np.fft.ifft(beam, axis=1, norm="ortho")
    return np.abs(delay).reshape(-1)


def _channel(pos: np.ndarray, config: SceneConfig) -> np.ndarray:
    if config.propagation == "los":
        return los_channel(pos, config)
    return nlos_channel(pos, config)


def generate_scene(
    config: SceneConfig, count: int | None = None, stream: int = 0
) -> Dataset:
    """Uniformly placed transmitters with noisy features, reproducible
    from (config.seed, stream).

    Distinct streams (database vs held-out queries) share the scene's
    scatterers but draw disjoint position/noise randomness.
    """
    n = config.n_points if count is None else count
    if n < 1:
        raise InvalidConfig("need at least one point")
    rng = derived_rng(config.seed, TAG_POSITIONS, stream)
    positions = rng.uniform(0.0, config.area_side_m, size=(n, 2))
    fps = np.empty((n, config.dim), dtype=np.float64)
    for i in range(n):
        h = _channel(positions[i], config)
        h = add_noise(h, config.snr_db, derived_seed(config.seed, TAG_NOISE, stream, i))
        fps[i] = extract_features(h)
    return Dataset(fingerprints=fps, positions=positions)


def write_config_sidecar(config: SceneConfig, path: str) -> None:
    """Plain key=value dump so a dataset CSV can be regenerated."""
    with open(path, "w") as fh:
        for key, value in vars(config).items():
            fh.write(f"{key}={value}\n")


def read_config_sidecar(path: str) -> SceneConfig:
    kwargs = {}
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            key, _, value = line.partition("=")
            if key not in SceneConfig.__dataclass_fields__:
                raise InvalidConfig(f"{path}: unknown key {key}")
            field_type = SceneConfig.__dataclass_fields__[key].type
            if field_type == "int":
                kwargs[key] = int(value)
            elif field_type == "float":
                kwargs[key] = float(value)
            else:
                kwargs[key] = value
    return SceneConfig(**kwargs)


def with_seed(config: SceneConfig, seed: int) -> SceneConfig:
    return replace(config, seed=seed)
