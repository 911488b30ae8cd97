import numpy as np
import pytest

from halfline import (
    GridMismatchError,
    RadialFunction,
    SpectralFunction,
    apply_spectral_evolution,
    free,
    psi0_forward,
    psi0_inverse,
    psi_forward,
    psi_inverse,
    square_barrier,
)
from halfline.spectral import EnergyGrid, RadialGrid


def radial_fn(rg, fn):
    return RadialFunction(grid=rg, values=fn(rg.nodes).astype(complex))


def rel_l2(rg, a, b):
    ref = np.sqrt(np.sum(rg.weights * np.abs(b) ** 2))
    return np.sqrt(np.sum(rg.weights * np.abs(a - b) ** 2)) / ref


def test_grid_invariants(packet_grids):
    eg, rg = packet_grids
    assert np.all(rg.weights > 0)
    assert np.sum(rg.weights) == pytest.approx(rg.r_max, rel=1e-12)
    assert np.all(np.diff(rg.nodes) > 0)
    assert np.all(eg.nodes > 0)
    assert np.all(eg.weights > 0)
    # dE-weights integrate E-functions: int_0^{kmax^2} dE = kmax^2
    assert np.sum(eg.weights) == pytest.approx(eg.k_max**2, rel=1e-12)


def test_psi0_exponential_value(packet_grids):
    # oracle: int_0^inf sin(kr) e^{-r} dr = k/(1+k^2), so the transform of
    # e^{-r} is E^{1/4}/(sqrt(pi)(1+E)); at E=1 that is 1/(2 sqrt(pi))
    eg, rg = packet_grids
    g = psi0_forward(radial_fn(rg, lambda r: np.exp(-r)), eg)
    m = np.argmin(np.abs(eg.nodes - 1.0))
    expect = eg.nodes[m] ** 0.25 / (np.sqrt(np.pi) * (1.0 + eg.nodes[m]))
    assert g.values[m].real == pytest.approx(expect, abs=1e-6)
    assert abs(g.values[m].imag) < 1e-12


def test_psi0_exponential_norm_matches_truncation_oracle(packet_grids):
    # ||Psi0 f||^2 restricted to k <= k_max has the closed form
    # (1/pi) (arctan k_max - k_max/(1+k_max^2)); e^{-r} genuinely keeps
    # 2/(pi k_max) of its squared norm beyond any finite momentum window
    eg, rg = packet_grids
    g = psi0_forward(radial_fn(rg, lambda r: np.exp(-r)), eg)
    kmax = eg.k_max
    expect = np.sqrt((np.arctan(kmax) - kmax / (1 + kmax**2)) / np.pi)
    assert g.norm() == pytest.approx(expect, rel=1e-6)
    # and is therefore measurably below ||f|| = 1/sqrt(2)
    assert abs(g.norm() - 1 / np.sqrt(2)) > 1e-2


def test_psi0_zero_maps_to_zero(packet_grids):
    eg, rg = packet_grids
    z = psi0_forward(radial_fn(rg, lambda r: 0.0 * r), eg)
    assert np.all(z.values == 0.0)
    back = psi0_inverse(z, rg)
    assert np.all(back.values == 0.0)


def test_psi0_gaussian_roundtrip(packet_grids):
    eg, rg = packet_grids
    f = radial_fn(rg, lambda r: np.exp(-((r - 5.0) ** 2)))
    g = psi0_forward(f, eg)
    assert abs(g.norm() - f.norm()) <= 1e-10 * f.norm()
    back = psi0_inverse(g, rg)
    assert rel_l2(rg, back.values, f.values) < 1e-4


def test_gaussian_family_parseval(packet_grids):
    eg, rg = packet_grids
    for c, w in ((3.0, 0.5), (5.0, 1.0), (8.0, 2.0)):
        f = radial_fn(rg, lambda r: np.exp(-(((r - c) / w) ** 2)))
        g = psi0_forward(f, eg)
        assert abs(g.norm() - f.norm()) <= 1e-4 * f.norm()


def test_free_reduction_nodewise(packet_grids):
    eg, rg = packet_grids
    V = free()
    f = radial_fn(rg, lambda r: np.exp(-((r - 5.0) ** 2)))
    g0 = psi0_forward(f, eg)
    g1 = psi_forward(V, f, eg)
    scale = np.max(np.abs(g0.values))
    assert np.max(np.abs(g1.values - g0.values)) <= 1e-10 * scale
    b0 = psi0_inverse(g0, rg)
    b1 = psi_inverse(V, g0, rg)
    assert np.max(np.abs(b1.values - b0.values)) <= 1e-10 * np.max(np.abs(b0.values))


def test_barrier_unitarity(packet_grids):
    eg, rg = packet_grids
    V = square_barrier(4.0, 2.0)
    f = radial_fn(rg, lambda r: np.exp(-((r - 5.0) ** 2)))
    g = psi_forward(V, f, eg)
    assert abs(g.norm() - f.norm()) <= 1e-3 * f.norm()


def test_barrier_roundtrip(packet_grids):
    eg, rg = packet_grids
    V = square_barrier(4.0, 2.0)
    f = radial_fn(rg, lambda r: np.exp(-((r - 5.0) ** 2)))
    g = psi_forward(V, f, eg)
    back = psi_inverse(V, g, rg)
    assert rel_l2(rg, back.values, f.values) < 1e-3


def test_spectral_evolution_phase():
    eg = EnergyGrid.gauss_legendre(4.0, 16, 8)
    g = SpectralFunction(grid=eg, values=np.exp(-eg.nodes).astype(complex))
    same = apply_spectral_evolution(g, 0.0)
    assert np.all(same.values == g.values)
    moved = apply_spectral_evolution(g, 3.7)
    # |e^{-itE} z| = |z| to the last ulp
    assert np.max(np.abs(np.abs(moved.values) - np.abs(g.values))) <= 1e-15
    assert moved.norm() == pytest.approx(g.norm(), rel=1e-14)


def test_grid_mismatch_guard():
    tiny = RadialGrid(nodes=np.array([1.0]), weights=np.array([1.0]), r_max=1.0)
    with pytest.raises(GridMismatchError):
        RadialFunction(grid=tiny, values=np.array([1.0 + 0j]))
    rg = RadialGrid.gauss_legendre(10.0, 4, 8)
    with pytest.raises(GridMismatchError):
        RadialFunction(grid=rg, values=np.full(len(rg), np.nan + 0j))
