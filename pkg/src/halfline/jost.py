"""Jost functions, wave matrices, the scattering coefficient and resonances.

Outside the support of V the regular solution is a combination of the
two free exponentials,

    phi(r, E) = A_-(E) e^{+i k r} + A_+(E) e^{-i k r},     r > R,  k = sqrt(E),

and matching phi, phi' at r = R gives the unique coefficients

    A_-+ = e^{-+ i k R} ( phi(R) +- phi'(R)/(i k) ) / 2.

For V = 0 these reduce to A_- = 1/(2 i k), A_+ = -1/(2 i k).  All
scattering data derive from the pair: the wave matrices
W_+- = -+ i A_+- / |A_+| and the unimodular coefficient S = A_-/A_+.

Internally everything is a function of the momentum k with E = k^2: the
matched pair is single-valued and analytic in k, and resonances are its
zeros continued into the lower half k-plane.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ContourTooCloseError, NoConvergenceError, ZeroEnergyError
from .potential import Potential
from .radial_ode import integrate_regular, propagate_piecewise

ZERO_ENERGY_GUARD = 1e-12


@dataclass(frozen=True)
class JostPair:
    E: complex
    k: complex
    A_minus: complex
    A_plus: complex


@dataclass(frozen=True)
class WaveMatrixValue:
    E: float
    W_plus: complex
    W_minus: complex


@dataclass(frozen=True)
class Resonance:
    k: complex
    E: complex
    residual: float
    newton_iterations: int


def _match(phi, dphi, k, R):
    """Solve the matching relation at r = R for (A_minus, A_plus)."""
    ik = 1j * k
    A_minus = np.exp(-ik * R) * (phi + dphi / ik) / 2.0
    A_plus = np.exp(ik * R) * (phi - dphi / ik) / 2.0
    return A_minus, A_plus


def jost_pair_momentum(V: Potential, k) -> tuple[complex, complex]:
    """(A_minus, A_plus) as functions of complex momentum k (k != 0)."""
    k = complex(k)
    if abs(k) ** 2 < ZERO_ENERGY_GUARD:
        raise ZeroEnergyError("matching system degenerates at E = 0")
    E = k * k
    R = V.support_radius
    s = integrate_regular(V, E, R)
    A_minus, A_plus = _match(s.phi, s.dphi, k, R)
    return complex(A_minus), complex(A_plus)


def jost_functions(V: Potential, E) -> JostPair:
    """Matched Jost pair at energy E (principal momentum branch k = sqrt(E)).

    Real energies must be positive; complex energies are continued through
    the entire regular solution.
    """
    E = complex(E)
    if abs(E) < ZERO_ENERGY_GUARD:
        raise ZeroEnergyError("|E| below 1e-12: matching system degenerates")
    if E.imag == 0.0 and E.real < 0.0:
        raise ValueError("real energies must be positive (no bound-state branch)")
    k = np.sqrt(E)
    A_minus, A_plus = jost_pair_momentum(V, k)
    return JostPair(E=E, k=complex(k), A_minus=A_minus, A_plus=A_plus)


def wave_matrices(V: Potential, E: float) -> WaveMatrixValue:
    """W_+- (E) = -+ i A_+-(E)/|A_+(E)| for E > 0; both unimodular."""
    if not (np.isreal(E) and E > 0):
        raise ValueError("wave matrices are defined for real E > 0")
    pair = jost_functions(V, float(E))
    mod = abs(pair.A_plus)
    return WaveMatrixValue(
        E=float(E),
        W_plus=-1j * pair.A_plus / mod,
        W_minus=+1j * pair.A_minus / mod,
    )


def s_matrix(V: Potential, E: float) -> complex:
    """Scattering coefficient S(E) := A_-(E)/A_+(E); |S| = 1 for real V."""
    pair = jost_functions(V, float(E))
    return pair.A_minus / pair.A_plus


def jost_sweep(V: Potential, energies) -> list[JostPair]:
    """Jost pairs over an energy grid (vectorized for piecewise kinds)."""
    energies = np.asarray(energies, dtype=float)
    if np.any(energies <= ZERO_ENERGY_GUARD):
        raise ZeroEnergyError("sweep grid contains E <= 1e-12")
    if V.is_piecewise:
        Ec = energies.astype(complex)
        k = np.sqrt(Ec)
        phi, dphi = propagate_piecewise(V, Ec, V.support_radius)
        A_minus, A_plus = _match(phi, dphi, k, V.support_radius)
        return [
            JostPair(E=complex(E), k=complex(kk), A_minus=complex(am), A_plus=complex(ap))
            for E, kk, am, ap in zip(Ec, k, A_minus, A_plus)
        ]
    return [jost_functions(V, E) for E in energies]


# ---------------------------------------------------------------------------
# resonance search: zeros of k -> A_+(k^2) at Im k < 0
# ---------------------------------------------------------------------------

CONTOUR_FLOOR = 1e-6
RESIDUAL_BOUND = 1e-8
NEWTON_MAX_ITERATIONS = 50


def _aplus_on(V: Potential, k_values) -> np.ndarray:
    k = np.asarray(k_values, dtype=complex)
    if V.is_piecewise:
        E = k * k
        phi, dphi = propagate_piecewise(V, E, V.support_radius)
        _, A_plus = _match(phi, dphi, k, V.support_radius)
        return A_plus
    return np.array([jost_pair_momentum(V, kk)[1] for kk in k])


def _box_contour(box, nodes_per_side):
    re0, re1, im0, im1 = box
    corners = [
        re0 + 1j * im0,
        re1 + 1j * im0,
        re1 + 1j * im1,
        re0 + 1j * im1,
        re0 + 1j * im0,
    ]
    pts = []
    for a, b in zip(corners[:-1], corners[1:]):
        t = np.arange(nodes_per_side) / nodes_per_side
        pts.append(a + (b - a) * t)
    pts.append(np.array([corners[-1]]))
    return np.concatenate(pts)


def _winding(V, box, nodes_per_side, scale):
    """Winding number of A_+ around the box boundary, adaptively refined.

    Doubles the node count until the integer winding is stable across one
    doubling.  Raises if |A_+| dips below the contour floor (zero too close
    to the boundary for a trustworthy count).
    """
    prev = None
    nodes = nodes_per_side
    for _ in range(6):
        z = _box_contour(box, nodes)
        vals = _aplus_on(V, z)
        if np.min(np.abs(vals)) < CONTOUR_FLOOR * scale:
            raise ContourTooCloseError(
                f"|A_+| fell below {CONTOUR_FLOOR:g} x contour scale on the boundary"
            )
        w = int(round(float(np.sum(np.angle(vals[1:] / vals[:-1]))) / (2 * np.pi)))
        if prev is not None and w == prev:
            return w
        prev = w
        nodes *= 2
    raise NoConvergenceError("winding number did not stabilize under refinement")


def _newton_zero(V, z0):
    z = complex(z0)
    for it in range(1, NEWTON_MAX_ITERATIONS + 1):
        h = 1e-7 * max(1.0, abs(z))
        f0 = _aplus_on(V, [z])[0]
        d = (_aplus_on(V, [z + h])[0] - _aplus_on(V, [z - h])[0]) / (2 * h)
        if d == 0:
            break
        step = f0 / d
        z = z - step
        if abs(step) < 1e-13 * max(1.0, abs(z)):
            return z, it
    raise NoConvergenceError(
        f"Newton refinement failed within {NEWTON_MAX_ITERATIONS} iterations"
    )


def _collect_zeros(V, box, nodes_per_side, scale, out):
    w = _winding(V, box, nodes_per_side, scale)
    if w == 0:
        return
    re0, re1, im0, im1 = box
    if w == 1 and max(re1 - re0, im1 - im0) < 0.25:
        z0 = 0.5 * (re0 + re1) + 0.5j * (im0 + im1)
        z, it = _newton_zero(V, z0)
        out.append((z, it))
        return
    rem = 0.5 * (re0 + re1)
    imm = 0.5 * (im0 + im1)
    for sub in (
        (re0, rem, im0, imm),
        (rem, re1, im0, imm),
        (re0, rem, imm, im1),
        (rem, re1, imm, im1),
    ):
        _collect_zeros(V, sub, max(nodes_per_side // 2, 64), scale, out)


def find_resonances(
    V: Potential,
    search_box,
    max_count: int = 32,
    boundary_nodes: int = 512,
) -> list[Resonance]:
    """Zeros of the continued A_+ inside a box of the lower half k-plane.

    Argument-principle counting on the boundary, recursive quadrisection
    until each sub-box contains at most one zero, then Newton refinement.
    The number of returned zeros always equals the winding number of the
    original box.

    search_box is (re_min, re_max, im_min, im_max) with im_max < 0.
    """
    re0, re1, im0, im1 = (float(v) for v in search_box)
    if not (re0 < re1 and im0 < im1 and im1 < 0):
        raise ValueError("search box must be strictly inside Im k < 0")
    contour = _box_contour((re0, re1, im0, im1), boundary_nodes)
    scale = float(np.max(np.abs(_aplus_on(V, contour))))
    total = _winding(V, (re0, re1, im0, im1), boundary_nodes, scale)
    if total > max_count:
        raise ValueError(f"winding number {total} exceeds max_count={max_count}")
    found: list[tuple[complex, int]] = []
    if total > 0:
        _collect_zeros(V, (re0, re1, im0, im1), boundary_nodes, scale, found)
    resonances = []
    for z, it in sorted(found, key=lambda p: p[0].real):
        residual = float(abs(_aplus_on(V, [z])[0]))
        if residual > RESIDUAL_BOUND * scale:
            raise NoConvergenceError(
                f"refined zero at k={z:.6g} has residual {residual:.3e} "
                f"above {RESIDUAL_BOUND:g} x scale"
            )
        resonances.append(
            Resonance(k=z, E=z * z, residual=residual, newton_iterations=it)
        )
    if len(resonances) != total:
        raise NoConvergenceError(
            f"located {len(resonances)} zeros but winding number is {total}"
        )
    return resonances
