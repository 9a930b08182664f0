import numpy as np
import pytest

from stonelsh import channel as ch
from stonelsh.errors import InvalidConfig, PositionOutOfArea


def small_cfg(**kw):
    base = dict(antennas=8, subcarriers=8, n_points=50, seed=0)
    base.update(kw)
    return ch.SceneConfig(**base)


def test_config_validation():
    with pytest.raises(InvalidConfig):
        ch.SceneConfig(propagation="urban")
    with pytest.raises(InvalidConfig):
        ch.SceneConfig(n_points=0)
    with pytest.raises(InvalidConfig):
        ch.SceneConfig(propagation="nlos", n_scatterers=0)


def test_default_scenario_dimensions():
    cfg = ch.SceneConfig()
    assert cfg.dim == 256
    assert cfg.area_side_m**2 == 40_000
    assert cfg.antennas == 32 and cfg.subcarriers == 8


def test_subcarriers_span_band_edge_to_edge():
    freqs = ch.subcarrier_freqs(ch.SceneConfig())
    assert freqs[0] == 2.68e9 - 10e6
    assert freqs[-1] == 2.68e9 + 10e6
    np.testing.assert_allclose(np.diff(freqs), 20e6 / 7)


def test_los_broadside_equal_phase_across_antennas():
    cfg = small_cfg(bs_standoff_m=0.0)
    # directly above the array center: broadside, sin(theta) = 0
    h = ch.los_channel([cfg.area_side_m / 2, 150.0], cfg)
    for s in range(cfg.subcarriers):
        np.testing.assert_allclose(h[:, s], h[0, s])


def test_los_free_space_amplitude_halves_with_distance():
    cfg = small_cfg(bs_standoff_m=0.0)
    h1 = ch.los_channel([cfg.area_side_m / 2, 50.0], cfg)
    h2 = ch.los_channel([cfg.area_side_m / 2, 100.0], cfg)
    np.testing.assert_allclose(np.abs(h2), np.abs(h1) / 2.0)


def test_los_delay_hand_computed():
    cfg = small_cfg(bs_standoff_m=0.0)
    d = 150.0
    tau = d / ch.SPEED_OF_LIGHT
    assert tau * 1e9 == pytest.approx(500.3, abs=0.1)
    # the per-subcarrier phase slope matches exp(-j 2 pi f tau)
    h = ch.los_channel([cfg.area_side_m / 2, d], cfg)
    freqs = ch.subcarrier_freqs(cfg)
    expect = np.exp(-2j * np.pi * freqs * tau) / d
    np.testing.assert_allclose(h[0, :], expect)


def test_channel_position_out_of_area():
    cfg = small_cfg()
    with pytest.raises(PositionOutOfArea):
        ch.los_channel([-1.0, 10.0], cfg)
    with pytest.raises(PositionOutOfArea):
        ch.nlos_channel([10.0, 10.0 + cfg.area_side_m], cfg)


def test_nlos_single_scatterer_rank_one():
    cfg = small_cfg(propagation="nlos", n_scatterers=1)
    h = ch.nlos_channel([30.0, 80.0], cfg)
    s = np.linalg.svd(h, compute_uv=False)
    assert s[1] < 1e-12 * s[0]


def test_nlos_deterministic_per_scene():
    cfg = small_cfg(propagation="nlos")
    a = ch.nlos_channel([30.0, 80.0], cfg)
    b = ch.nlos_channel([30.0, 80.0], cfg)
    np.testing.assert_array_equal(a, b)
    other = ch.nlos_channel([30.0, 80.0], small_cfg(propagation="nlos", seed=1))
    assert not np.allclose(a, other)


def test_nlos_delays_match_geometry_oracle():
    cfg = small_cfg(propagation="nlos", n_scatterers=10)
    pos = np.array([30.0, 80.0])
    bs = ch.basestation_position(cfg)
    scats, phases = ch.scene_scatterers(cfg)
    freqs = ch.subcarrier_freqs(cfg)
    h = np.zeros((cfg.antennas, cfg.subcarriers), dtype=complex)
    for p in range(10):
        d1 = np.linalg.norm(pos - scats[p])
        d2 = np.linalg.norm(scats[p] - bs)
        tau = (d1 + d2) / ch.SPEED_OF_LIGHT
        steer = np.exp(1j * np.pi * np.arange(cfg.antennas) * (scats[p, 0] - bs[0]) / d2)
        h += np.exp(1j * phases[p]) / (d1 * d2) * np.outer(steer, np.exp(-2j * np.pi * freqs * tau))
    np.testing.assert_allclose(ch.nlos_channel(pos, cfg), h, rtol=1e-12)


def test_add_noise_infinite_snr_is_identity():
    h = ch.los_channel([30.0, 80.0], small_cfg())
    np.testing.assert_array_equal(ch.add_noise(h, float("inf"), 0), h)


def test_add_noise_reproducible():
    h = ch.los_channel([30.0, 80.0], small_cfg())
    np.testing.assert_array_equal(ch.add_noise(h, 20.0, 5), ch.add_noise(h, 20.0, 5))
    assert not np.array_equal(ch.add_noise(h, 20.0, 5), ch.add_noise(h, 20.0, 6))


def test_add_noise_empirical_snr():
    h = ch.los_channel([30.0, 80.0], small_cfg())
    sig = np.sum(np.abs(h) ** 2)
    noise = 0.0
    for seed in range(1000):
        w = ch.add_noise(h, 20.0, seed) - h
        noise += np.sum(np.abs(w) ** 2)
    snr_db = 10 * np.log10(sig / (noise / 1000))
    assert snr_db == pytest.approx(20.0, abs=0.5)


def test_features_of_constant_matrix_concentrate():
    cfg = small_cfg()
    h = np.ones((cfg.antennas, cfg.subcarriers), dtype=complex)
    f = ch.extract_features(h)
    assert f[0] == pytest.approx(np.sqrt(cfg.antennas * cfg.subcarriers))
    np.testing.assert_allclose(f[1:], 0.0, atol=1e-12)


def test_features_sparse_for_broadside_los():
    cfg = small_cfg(bs_standoff_m=0.0)
    h = ch.los_channel([cfg.area_side_m / 2, 60.0], cfg)
    f = ch.extract_features(h)
    assert np.max(f**2) >= 0.5 * np.sum(f**2)


def test_features_norm_preserving_and_nonnegative():
    rng = np.random.default_rng(0)
    for _ in range(10):
        h = rng.normal(size=(8, 8)) + 1j * rng.normal(size=(8, 8))
        f = ch.extract_features(h)
        assert np.all(f >= 0)
        assert np.linalg.norm(f) == pytest.approx(np.linalg.norm(h), abs=1e-10)


def test_generate_scene_shapes_and_support():
    cfg = small_cfg()
    one = ch.generate_scene(cfg, count=1)
    assert one.fingerprints.shape == (1, 64)
    data = ch.generate_scene(cfg)
    assert data.count == 50
    assert np.all(data.positions >= 0) and np.all(data.positions <= cfg.area_side_m)
    assert np.all(data.fingerprints >= 0)


def test_generate_scene_position_mean():
    cfg = ch.SceneConfig(antennas=4, subcarriers=4, n_points=2000, seed=3)
    data = ch.generate_scene(cfg)
    center = cfg.area_side_m / 2
    assert np.all(np.abs(data.positions.mean(axis=0) - center) < 5.0)


def test_generate_scene_deterministic_and_stream_disjoint():
    cfg = small_cfg(seed=9)
    a = ch.generate_scene(cfg)
    b = ch.generate_scene(cfg)
    np.testing.assert_array_equal(a.fingerprints, b.fingerprints)
    np.testing.assert_array_equal(a.positions, b.positions)
    q = ch.generate_scene(cfg, count=50, stream=1)
    assert not np.array_equal(q.positions, a.positions)


def test_spatial_coherence_of_los_features():
    # close transmitter pairs must be close in feature space on average,
    # else fingerprinting has nothing to work with
    wins = 0
    for seed in range(10):
        cfg = ch.SceneConfig(antennas=8, subcarriers=8, n_points=200, seed=seed)
        data = ch.generate_scene(cfg)
        pd = np.linalg.norm(data.positions[None] - data.positions[:, None], axis=2)
        fd = np.linalg.norm(data.fingerprints[None] - data.fingerprints[:, None], axis=2)
        iu = np.triu_indices(200, k=1)
        order = np.argsort(pd[iu])
        n_near = max(1, len(order) // 100)
        near_mean = fd[iu][order[:n_near]].mean()
        rng = np.random.default_rng(seed)
        rand_mean = fd[iu][rng.choice(len(order), 500, replace=False)].mean()
        if near_mean < rand_mean:
            wins += 1
    assert wins == 10


def test_config_sidecar_round_trip(tmp_path):
    cfg = ch.SceneConfig(propagation="nlos", seed=42, snr_db=15.0, n_scatterers=7)
    path = tmp_path / "scene.cfg"
    ch.write_config_sidecar(cfg, path)
    assert ch.read_config_sidecar(path) == cfg
