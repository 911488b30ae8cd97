"""Unitary spectral transforms diagonalizing the half-line Hamiltonian.

The forward maps take radial wave functions to functions of energy,

    (Psi  f)(E) = 1/(2 sqrt(pi) E^{1/4} |A_+(E)|) int_0^inf phi(r, E) f(r) dr,
    (Psi0 f)(E) = E^{1/4}/sqrt(pi)                int_0^inf phi0(r, E) f(r) dr,

and their inverses integrate the same kernels against dE.  Both pairs
share one symmetric kernel K(E, r) = C(E) phi(r, E): forward multiplies
by radial weights, inverse by energy weights.  Time evolution becomes
multiplication: Psi(e^{-itH} f)(E) = e^{-itE} (Psi f)(E).

All energy integrals substitute E = k^2, dE = 2k dk and use composite
Gauss-Legendre panels in momentum, which removes the E^{-1/4} endpoint
behavior.  Panel counts obey an oscillation budget: the phase k_max * dr
(or r_max * dk) per panel stays below ~8, beyond which the 8-node rule
degrades.

Kernels are cached per (potential, energy grid, radial grid); for real
energies and real potentials they are real float64 arrays of shape
(n_E, n_r), which is the dominant memory cost.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import GridMismatchError
from .jost import jost_sweep
from .potential import Potential
from .radial_ode import regular_solution_matrix

DEFAULT_NODES_PER_PANEL = 8
PHASE_BUDGET = 8.0


def _gauss_panels(a: float, b: float, panels: int, nodes: int):
    xg, wg = np.polynomial.legendre.leggauss(nodes)
    edges = np.linspace(a, b, panels + 1)
    mid = 0.5 * (edges[:-1] + edges[1:])
    half = 0.5 * (edges[1:] - edges[:-1])
    x = (mid[:, None] + half[:, None] * xg[None, :]).ravel()
    w = (half[:, None] * wg[None, :]).ravel()
    return x, w


@dataclass(frozen=True, eq=False)
class RadialGrid:
    """Composite Gauss-Legendre nodes/weights on (0, r_max]."""

    nodes: np.ndarray
    weights: np.ndarray
    r_max: float
    fingerprint: tuple = field(default=None)

    @classmethod
    def gauss_legendre(cls, r_max: float, panels: int, nodes_per_panel: int = DEFAULT_NODES_PER_PANEL):
        x, w = _gauss_panels(0.0, r_max, panels, nodes_per_panel)
        return cls(nodes=x, weights=w, r_max=float(r_max),
                   fingerprint=("r", float(r_max), panels, nodes_per_panel))

    def __len__(self):
        return len(self.nodes)


@dataclass(frozen=True, eq=False)
class EnergyGrid:
    """Energy nodes E_m = k_m^2 from a momentum grid on (0, k_max].

    weights are for dE-integration: u_m = 2 k_m * (momentum weight).
    """

    k: np.ndarray
    nodes: np.ndarray
    weights: np.ndarray
    k_max: float
    fingerprint: tuple = field(default=None)

    @classmethod
    def gauss_legendre(cls, k_max: float, panels: int, nodes_per_panel: int = DEFAULT_NODES_PER_PANEL):
        k, wk = _gauss_panels(0.0, k_max, panels, nodes_per_panel)
        return cls(k=k, nodes=k * k, weights=2.0 * k * wk, k_max=float(k_max),
                   fingerprint=("k", float(k_max), panels, nodes_per_panel))

    def __len__(self):
        return len(self.nodes)


def default_energy_grid() -> EnergyGrid:
    """Standalone energy grid: k in (0, 20], 256 panels x 8 nodes."""
    global _DEFAULT_EGRID
    if _DEFAULT_EGRID is None:
        _DEFAULT_EGRID = EnergyGrid.gauss_legendre(20.0, 256)
    return _DEFAULT_EGRID


_DEFAULT_EGRID: EnergyGrid | None = None


def transform_grids(k_max: float, r_max: float,
                    nodes_per_panel: int = DEFAULT_NODES_PER_PANEL,
                    phase_budget: float = PHASE_BUDGET):
    """Matched (EnergyGrid, RadialGrid) pair resolving all kernel oscillations.

    Panels per side = ceil(k_max * r_max / phase_budget), rounded up to a
    multiple of 64, which keeps >= 6 quadrature nodes per oscillation of
    sin(k r) on both axes.
    """
    panels = int(math.ceil(k_max * r_max / phase_budget))
    panels = ((panels + 63) // 64) * 64
    eg = EnergyGrid.gauss_legendre(k_max, panels, nodes_per_panel)
    rg = RadialGrid.gauss_legendre(r_max, panels, nodes_per_panel)
    nodes_per_osc = len(rg) / (k_max * r_max / (2 * np.pi))
    if nodes_per_osc < 6.0:
        warnings.warn(
            f"radial sampling at {nodes_per_osc:.1f} nodes per oscillation (< 6)",
            stacklevel=2,
        )
    return eg, rg


@dataclass(frozen=True, eq=False)
class RadialFunction:
    grid: RadialGrid
    values: np.ndarray

    def __post_init__(self):
        if len(self.grid) < 2:
            raise GridMismatchError("radial grid has fewer than 2 nodes")
        if not np.all(np.isfinite(self.values)):
            raise GridMismatchError("radial function has non-finite values")

    def norm(self) -> float:
        return float(np.sqrt(np.sum(self.grid.weights * np.abs(self.values) ** 2)))


@dataclass(frozen=True, eq=False)
class SpectralFunction:
    grid: EnergyGrid
    values: np.ndarray

    def __post_init__(self):
        if len(self.grid) < 2:
            raise GridMismatchError("energy grid has fewer than 2 nodes")
        if not np.all(np.isfinite(self.values)):
            raise GridMismatchError("spectral function has non-finite values")

    def norm(self) -> float:
        return float(np.sqrt(np.sum(self.grid.weights * np.abs(self.values) ** 2)))


# ---------------------------------------------------------------------------
# kernel construction and cache
# ---------------------------------------------------------------------------

_KERNEL_CACHE: dict = {}
_KERNEL_CACHE_MAX = 2
_CHUNK_ROWS = 256


def _cache_key(V, eg, rg):
    return (V, eg.fingerprint or id(eg), rg.fingerprint or id(rg))


def spectral_kernel(V: Potential | None, eg: EnergyGrid, rg: RadialGrid) -> np.ndarray:
    """Symmetric transform kernel K[m, j] = C(E_m) phi(r_j, E_m).

    V = None selects the free kernel with its closed-form normalization
    C0 = E^{1/4}/sqrt(pi); otherwise C = 1/(2 sqrt(pi) E^{1/4} |A_+(E)|)
    with |A_+| from the matched Jost pair.
    """
    key = _cache_key(V, eg, rg)
    if key in _KERNEL_CACHE:
        return _KERNEL_CACHE[key]

    k = eg.k
    if V is None:
        C = np.sqrt(k) / np.sqrt(np.pi)
        phi_src: Potential | None = None
    else:
        pairs = jost_sweep(V, eg.nodes)
        mod = np.array([abs(p.A_plus) for p in pairs])
        C = 1.0 / (2.0 * np.sqrt(np.pi) * np.sqrt(k) * mod)
        phi_src = V

    n_e, n_r = len(eg), len(rg)
    K = np.empty((n_e, n_r), dtype=float)
    for start in range(0, n_e, _CHUNK_ROWS):
        stop = min(start + _CHUNK_ROWS, n_e)
        if phi_src is None:
            kk = k[start:stop, None]
            block = np.sin(kk * rg.nodes[None, :]) / kk
        else:
            block = regular_solution_matrix(phi_src, eg.nodes[start:stop], rg.nodes)
        K[start:stop] = C[start:stop, None] * block

    if len(_KERNEL_CACHE) >= _KERNEL_CACHE_MAX:
        _KERNEL_CACHE.pop(next(iter(_KERNEL_CACHE)))
    _KERNEL_CACHE[key] = K
    return K


def _warn_decay(values, weights, what, floor):
    amax = float(np.max(np.abs(values)))
    if amax == 0.0:
        return
    tail = float(np.max(np.abs(values[int(0.99 * len(values)):])))
    if tail > floor * amax:
        warnings.warn(
            f"{what} has not decayed below {floor:g} of its maximum at the grid edge "
            f"(tail ratio {tail / amax:.2e}); truncation may dominate",
            stacklevel=3,
        )


# ---------------------------------------------------------------------------
# transforms
# ---------------------------------------------------------------------------

def psi0_forward(f: RadialFunction, eg: EnergyGrid) -> SpectralFunction:
    """Free spectral transform of a radial function."""
    _warn_decay(f.values, f.grid.weights, "radial function", 1e-8)
    K = spectral_kernel(None, eg, f.grid)
    return SpectralFunction(grid=eg, values=K @ (f.grid.weights * f.values))


def psi0_inverse(g: SpectralFunction, rg: RadialGrid) -> RadialFunction:
    """Inverse free spectral transform."""
    _warn_decay(g.values, g.grid.weights, "spectral function", 1e-6)
    K = spectral_kernel(None, g.grid, rg)
    return RadialFunction(grid=rg, values=K.T @ (g.grid.weights * g.values))


def psi_forward(V: Potential, f: RadialFunction, eg: EnergyGrid) -> SpectralFunction:
    """Spectral transform for the interacting Hamiltonian."""
    _warn_decay(f.values, f.grid.weights, "radial function", 1e-8)
    K = spectral_kernel(V, eg, f.grid)
    return SpectralFunction(grid=eg, values=K @ (f.grid.weights * f.values))


def psi_inverse(V: Potential, g: SpectralFunction, rg: RadialGrid) -> RadialFunction:
    """Inverse spectral transform: the reconstruction of a radial function
    from (the positive part of) its spectral representative."""
    _warn_decay(g.values, g.grid.weights, "spectral function", 1e-6)
    K = spectral_kernel(V, g.grid, rg)
    return RadialFunction(grid=rg, values=K.T @ (g.grid.weights * g.values))


def apply_spectral_evolution(g: SpectralFunction, t: float) -> SpectralFunction:
    """Multiplication by e^{-i t E}; preserves every |value| exactly."""
    return SpectralFunction(grid=g.grid, values=np.exp(-1j * t * g.grid.nodes) * g.values)
