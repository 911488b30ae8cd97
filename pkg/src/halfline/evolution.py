"""Three realizations of e^{-itH} plus the representer correspondence.

* spectral:   Psi^{-1} e^{-itE} Psi  (phase multiplication in energy)
* factorized: Psi^{-1} P_+ F T(t) F^{-1} P_+ Psi, applied literally
  through the full-line grid and the shift
* crank_nicolson: an independent finite-difference propagator for
  i d_t f = (-d_r^2 + V) f with f(0) = f(box) = 0

The representer of a radial function f is g = F^{-1} of its spectral
representative extended by zero to E < 0.  For states built from genuine
half-line data the zero extension is NOT the Hardy extension, so g
carries an O(1) tail on the wrong half-line even in exact arithmetic;
directions are therefore only reported when one half-line holds at least
99.9% of the mass.  See representer_of for the quantitative picture.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.interpolate import CubicSpline
from scipy.linalg import solve_banded

from .errors import OutrunGuardError, SupportGuardError, WraparoundGuardError
from .hardy import (
    E_DOMAIN,
    LineFunction,
    LineGrid,
    default_line_grid,
    embed_positive,
    fourier_forward,
    fourier_inverse,
    positive_part,
    shift,
)
from .potential import Potential, evaluate
from .spectral import (
    EnergyGrid,
    RadialFunction,
    RadialGrid,
    SpectralFunction,
    apply_spectral_evolution,
    psi_forward,
    psi_inverse,
    transform_grids,
)

CN_DEFAULT_DT = 1e-3
CN_DEFAULT_SPACING = 1.0 / 128.0
CN_DEFAULT_BOX = 160.0
OUTRUN_TAIL_FRACTION = 0.02
OUTRUN_MASS_BOUND = 1e-6

DIRECTION_MASS_THRESHOLD = 0.999
SUPPORT_GUARD_THRESHOLD = 0.99


@dataclass(frozen=True)
class EvolutionResult:
    t: float
    method: str
    state: RadialFunction
    norm_drift: float


@dataclass(frozen=True)
class RepresenterPair:
    f: RadialFunction
    g: LineFunction
    direction: str  # outgoing | incoming | unclassified


def _default_egrid_for(rg: RadialGrid) -> EnergyGrid:
    """Energy grid matched to a radial grid under the oscillation budget."""
    if rg.fingerprint and rg.fingerprint[0] == "r":
        _, r_max, panels, npp = rg.fingerprint
        k_max = min(20.0, 8.0 * panels / r_max)
        eg, _ = transform_grids(k_max, r_max, nodes_per_panel=npp)
        return eg
    raise ValueError("cannot infer an energy grid for a custom radial grid")


def evolve_spectral(
    V: Potential, f: RadialFunction, t: float, egrid: EnergyGrid | None = None
) -> EvolutionResult:
    """Evolution by phase multiplication in the spectral representation."""
    eg = egrid or _default_egrid_for(f.grid)
    g = psi_forward(V, f, eg)
    state = psi_inverse(V, apply_spectral_evolution(g, t), f.grid)
    n0 = f.norm()
    return EvolutionResult(
        t=t, method="spectral", state=state,
        norm_drift=abs(state.norm() - n0) / n0 if n0 > 0 else 0.0,
    )


def evolve_factorized(
    V: Potential,
    f: RadialFunction,
    t: float,
    egrid: EnergyGrid | None = None,
    line_grid: LineGrid | None = None,
) -> EvolutionResult:
    """Evolution through the shift on the full line, applied literally:
    transform, embed (zero on E <= 0), F^{-1}, shift by t, F, cut to
    E > 0, transform back."""
    lg = line_grid or default_line_grid()
    if abs(t) > lg.x_max / 4.0:
        raise WraparoundGuardError(
            f"|t| = {abs(t):g} beyond the certified window x_max/4 = {lg.x_max / 4:g}"
        )
    eg = egrid or _default_egrid_for(f.grid)
    g = psi_forward(V, f, eg)
    # threshold_factor: spectral images of wave functions vanish like
    # E^{1/4}, and that factor must not reach the polynomial interpolants
    embedded = embed_positive(g, lg, threshold_factor=True)
    moved = shift(fourier_inverse(embedded), t)
    after = fourier_forward(moved)
    # transport the known diagonal phase through the resampler exactly:
    # interpolate e^{+itE} x (evolved values), reapply e^{-itE} at the
    # energy nodes; a mis-implemented shift would no longer cancel here
    unphased = LineFunction(
        grid=lg, domain=E_DOMAIN, values=np.exp(+1j * t * lg.E) * after.values
    )
    cut = positive_part(unphased, eg, threshold_factor=True)
    evolved = SpectralFunction(
        grid=eg, values=np.exp(-1j * t * eg.nodes) * cut.values
    )
    state = psi_inverse(V, evolved, f.grid)
    n0 = f.norm()
    return EvolutionResult(
        t=t, method="factorized", state=state,
        norm_drift=abs(state.norm() - n0) / n0 if n0 > 0 else 0.0,
    )


def _cell_averaged_potential(V: Potential, centers: np.ndarray, h: float) -> np.ndarray:
    """Average V over each grid cell; restores second-order accuracy at
    the jump nodes of piecewise-constant potentials."""
    if V.is_piecewise:
        edges = np.concatenate(([0.0], np.asarray(V.segment_edges)))
        vals = np.concatenate((np.asarray(V.segment_values), [0.0]))
        # integral of V from 0 to x, piecewise linear in x
        seg_int = np.concatenate(([0.0], np.cumsum(np.diff(edges) * vals[:-1])))

        def antider(x):
            x = np.clip(x, 0.0, None)
            i = np.searchsorted(edges, x, side="right") - 1
            i = np.clip(i, 0, len(edges) - 1)
            return seg_int[i] + (x - edges[i]) * vals[i]

        return (antider(centers + h / 2) - antider(centers - h / 2)) / h
    # Simpson per cell is exact for the piecewise-linear table kind except
    # in the O(h) cells containing a sample kink
    left = evaluate(V, np.clip(centers - h / 2, 0.0, None))
    mid = evaluate(V, centers)
    right = evaluate(V, centers + h / 2)
    return (left + 4.0 * mid + right) / 6.0


def evolve_crank_nicolson(
    V: Potential,
    f: RadialFunction,
    t: float,
    dt: float = CN_DEFAULT_DT,
    box: float = CN_DEFAULT_BOX,
    spacing: float = CN_DEFAULT_SPACING,
) -> EvolutionResult:
    """Unitary Crank-Nicolson stepping on a uniform grid with Dirichlet
    walls at 0 and box; second order in dt and spacing.

    The state is spline-mapped between the radial quadrature grid and the
    uniform grid.  Raises if more than 1e-6 of the mass reaches the outer
    2% of the box (the far wall would reflect it back).
    """
    if dt <= 0:
        raise ValueError("dt must be positive")
    M = int(round(box / spacing))
    rr = np.arange(1, M) * spacing
    Vv = _cell_averaged_potential(V, rr, spacing)

    csp = CubicSpline(
        np.concatenate(([0.0], f.grid.nodes)),
        np.concatenate(([0.0], f.values)),
        bc_type="natural",
    )
    psi = csp(rr).astype(complex)
    psi[rr > f.grid.r_max] = 0.0

    main = 2.0 / spacing**2 + Vv
    off = -1.0 / spacing**2
    steps = int(round(abs(t) / dt))
    gam = 1j * np.sign(t) * dt / 2.0 if steps else 0.0
    ab = np.zeros((3, M - 1), dtype=complex)
    ab[0, 1:] = gam * off
    ab[1, :] = 1.0 + gam * main
    ab[2, :-1] = gam * off

    tail_start = int((1.0 - OUTRUN_TAIL_FRACTION) * (M - 1))
    total0 = float(np.sum(np.abs(psi) ** 2))
    for n in range(steps):
        b = (1.0 - gam * main) * psi
        b[:-1] += -gam * off * psi[1:]
        b[1:] += -gam * off * psi[:-1]
        psi = solve_banded((1, 1), ab, b)
        if (n + 1) % 50 == 0 or n == steps - 1:
            tail = float(np.sum(np.abs(psi[tail_start:]) ** 2))
            if total0 > 0 and tail > OUTRUN_MASS_BOUND * total0:
                raise OutrunGuardError(
                    f"wave reached the far wall: tail mass {tail / total0:.2e} "
                    f"at step {n + 1}"
                )

    back = CubicSpline(
        np.concatenate(([0.0], rr, [box])),
        np.concatenate(([0.0 + 0.0j], psi, [0.0 + 0.0j])),
    )
    vals = back(f.grid.nodes)
    vals[f.grid.nodes > box] = 0.0
    state = RadialFunction(grid=f.grid, values=vals)
    n0 = f.norm()
    return EvolutionResult(
        t=t, method="crank_nicolson", state=state,
        norm_drift=abs(state.norm() - n0) / n0 if n0 > 0 else 0.0,
    )


def halfline_mass_fractions(g: LineFunction) -> tuple[float, float]:
    """(fraction of ||g||^2 on x >= 0, fraction on x < 0)."""
    m_pos = float(np.sum(np.abs(g.values[g.grid.x >= 0]) ** 2))
    m_neg = float(np.sum(np.abs(g.values[g.grid.x < 0]) ** 2))
    tot = m_pos + m_neg
    if tot == 0.0:
        return 0.0, 0.0
    return m_pos / tot, m_neg / tot


def representer_of(
    V: Potential,
    f: RadialFunction,
    egrid: EnergyGrid | None = None,
    line_grid: LineGrid | None = None,
) -> RepresenterPair:
    """g = F^{-1} of the zero-extended spectral representative of f.

    Classified outgoing/incoming when one half-line carries at least
    99.9% of ||g||^2, else unclassified.  Note that the zero extension of
    a positive part is not its Hardy extension: even for f built from a
    Hardy atom's positive part, roughly 25% of the mass of g sits on
    x < 0 (the missing negative-energy Hardy content), so such states
    report unclassified by design of the threshold.
    """
    lg = line_grid or default_line_grid()
    eg = egrid or _default_egrid_for(f.grid)
    p = psi_forward(V, f, eg)
    g = fourier_inverse(embed_positive(p, lg))
    frac_pos, frac_neg = halfline_mass_fractions(g)
    if frac_pos >= DIRECTION_MASS_THRESHOLD:
        direction = "outgoing"
    elif frac_neg >= DIRECTION_MASS_THRESHOLD:
        direction = "incoming"
    else:
        direction = "unclassified"
    return RepresenterPair(f=f, g=g, direction=direction)


def build_from_representer(
    V: Potential,
    g: LineFunction,
    rgrid: RadialGrid,
    egrid: EnergyGrid | None = None,
) -> RadialFunction:
    """f = Psi^{-1} P_+ F g for g supported on one half-line."""
    frac_pos, frac_neg = halfline_mass_fractions(g)
    if max(frac_pos, frac_neg) < SUPPORT_GUARD_THRESHOLD:
        raise SupportGuardError(
            f"representer not one-sided: mass split {frac_pos:.3f}/{frac_neg:.3f}"
        )
    eg = egrid or _default_egrid_for(rgrid)
    p = positive_part(fourier_forward(g), eg)
    return psi_inverse(V, p, rgrid)
