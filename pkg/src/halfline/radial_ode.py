"""Regular solution of the radial equation -y'' + V y = E y.

The regular solution phi(r, E) is fixed by phi(0, E) = 0, phi'(0, E) = 1
and is entire in E.  For V = 0 it is sin(sqrt(E) r)/sqrt(E), evaluated
through an even power series in sqrt(E) near E = 0 so the value is
branch-independent.

Piecewise-constant potentials are propagated exactly: inside a segment of
constant value v the equation reads y'' = -(E - v) y, so the state
(phi, phi') advances across a width-d segment by the transfer

    [ c        s  ]          c = cos(sqrt(w) d),  s = sin(sqrt(w) d)/sqrt(w),
    [ -w s     c  ]          w = E - v,

both entire in w.  Other kinds use an embedded Dormand-Prince 5(4) pair
on the complex first-order system with adaptive step control.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import StepFailureError
from .potential import Potential, evaluate

DEFAULT_TOL = 1e-10

#: forced maximum step inside the support, as a fraction of the radius
SUPPORT_STEP_FRACTION = 1.0 / 64.0


@dataclass(frozen=True)
class RegularSolutionSample:
    r: float
    E: complex
    phi: complex
    dphi: complex


def trig_pair(w, d):
    """(cos(sqrt(w) d), sin(sqrt(w) d)/sqrt(w)) for complex w, entire in w.

    Switches to the truncated even series when |sqrt(w) d| < 1e-2; the
    next omitted term is below 1e-17 relative there.
    """
    w = np.asarray(w, dtype=complex)
    d = np.asarray(d, dtype=float)
    rt = np.sqrt(w)
    z = rt * d
    zz = z * z
    small = np.abs(z) < 1e-2
    rt_safe = np.where(np.abs(rt) < 1e-150, 1.0, rt)
    z_safe = np.where(small, 1.0, z)
    c = np.where(small, 1.0 - zz / 2 * (1 - zz / 12 * (1 - zz / 30)), np.cos(z_safe))
    s = np.where(
        small,
        d * (1 - zz / 6 * (1 - zz / 20 * (1 - zz / 42))),
        np.sin(z_safe) / rt_safe,
    )
    return c, s


def free_regular(E, r):
    """Free regular solution: (sin(sqrt(E) r)/sqrt(E), cos(sqrt(E) r))."""
    c, s = trig_pair(E, r)
    if np.ndim(s) == 0:
        return complex(s), complex(c)
    return s, c


def _segments_to(V: Potential, r_end: float):
    """Segment list [(start, end, value), ...] covering (0, r_end]."""
    segs = []
    prev = 0.0
    for edge, val in zip(V.segment_edges, V.segment_values):
        if prev >= r_end:
            break
        segs.append((prev, min(edge, r_end), val))
        prev = edge
    if r_end > prev:
        segs.append((prev, r_end, 0.0))
    return segs


def propagate_piecewise(V: Potential, E, r_end: float):
    """Exact (phi, phi') at r_end for a piecewise-constant V; E may be an array."""
    E = np.asarray(E, dtype=complex)
    phi = np.zeros(E.shape, dtype=complex)
    dphi = np.ones(E.shape, dtype=complex)
    for a, b, v in _segments_to(V, r_end):
        w = E - v
        c, s = trig_pair(w, b - a)
        phi, dphi = c * phi + s * dphi, -w * s * phi + c * dphi
    return phi, dphi


# Dormand-Prince 5(4) tableau
_DP_C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])
_DP_A = [
    [],
    [1 / 5],
    [3 / 40, 9 / 40],
    [44 / 45, -56 / 15, 32 / 9],
    [19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729],
    [9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656],
    [35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84],
]
_DP_B5 = np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0])
_DP_B4 = np.array(
    [5179 / 57600, 0.0, 7571 / 16695, 393 / 640, -92097 / 339200, 187 / 2100, 1 / 40]
)


def integrate_regular_rk(
    V: Potential,
    E,
    r_end: float,
    tol: float = DEFAULT_TOL,
    max_step: float | None = None,
    max_steps: int = 200_000,
) -> RegularSolutionSample:
    """Adaptive Dormand-Prince 5(4) integration of the regular solution.

    Works for any potential kind (used as an independent cross-check of
    the exact piecewise propagation).  Breakpoints of the potential are
    forced step endpoints; inside the support the step never exceeds
    R/64 so discontinuities cannot be stepped over.
    """
    E = complex(E)
    if max_step is None:
        max_step = max(r_end / 16.0, 1e-3)
    support_cap = max(V.support_radius * SUPPORT_STEP_FRACTION, 1e-6)

    stops = {r_end}
    for e in V.segment_edges:
        if 0.0 < e < r_end:
            stops.add(float(e))
    for x in V.table_r:
        if 0.0 < x < r_end:
            stops.add(float(x))
    stops = sorted(stops)

    def rhs(r, y):
        return np.array([y[1], (evaluate(V, r) - E) * y[0]], dtype=complex)

    y = np.array([0.0, 1.0], dtype=complex)
    r = 0.0
    h = min(max_step, support_cap, r_end / 8.0)
    nsteps = 0
    for target in stops:
        while r < target - 1e-14 * max(1.0, target):
            cap = max_step if r >= V.support_radius else min(max_step, support_cap)
            h = min(h, cap, target - r)
            k = np.empty((7, 2), dtype=complex)
            k[0] = rhs(r, y)
            for i in range(1, 7):
                yi = y + h * sum(a * k[j] for j, a in enumerate(_DP_A[i]))
                k[i] = rhs(r + _DP_C[i] * h, yi)
            y5 = y + h * (_DP_B5 @ k)
            y4 = y + h * (_DP_B4 @ k)
            scale = tol + tol * np.maximum(np.abs(y), np.abs(y5))
            err = float(np.max(np.abs(y5 - y4) / scale))
            if err <= 1.0:
                r += h
                y = y5
            factor = 0.9 * err ** (-0.2) if err > 0 else 5.0
            h *= min(5.0, max(0.2, factor))
            if h < 1e-14:
                raise StepFailureError(f"step size underflow at r={r:.6g}")
            nsteps += 1
            if nsteps > max_steps:
                raise StepFailureError(
                    f"tolerance {tol:g} not met within {max_steps} steps"
                )
    return RegularSolutionSample(r=r_end, E=E, phi=complex(y[0]), dphi=complex(y[1]))


def integrate_regular(
    V: Potential, E, r_end: float, tol: float = DEFAULT_TOL
) -> RegularSolutionSample:
    """(phi(r_end, E), phi'(r_end, E)) with phi(0)=0, phi'(0)=1.

    Free and piecewise-constant kinds use the exact closed-form
    propagation; sampled tables fall back to the adaptive integrator.
    """
    if r_end <= 0:
        raise ValueError("r_end must be positive")
    if V.kind == "free":
        phi, dphi = free_regular(E, r_end)
        return RegularSolutionSample(r=r_end, E=complex(E), phi=phi, dphi=dphi)
    if V.is_piecewise:
        phi, dphi = propagate_piecewise(V, complex(E), r_end)
        return RegularSolutionSample(
            r=r_end, E=complex(E), phi=complex(phi), dphi=complex(dphi)
        )
    return integrate_regular_rk(V, E, r_end, tol=tol)


def regular_solution_matrix(V: Potential, E_values, r_values) -> np.ndarray:
    """phi(r_j, E_m) as an (n_E, n_r) array.

    For real energies and real potentials the result is real.  Piecewise
    kinds are evaluated segment by segment from the exact transfer states,
    fully vectorized; table kinds integrate once per energy with forced
    stops at every radial node.
    """
    E_values = np.asarray(E_values)
    r_values = np.asarray(r_values, dtype=float)
    real_case = np.isrealobj(E_values) and np.all(np.isreal(E_values))
    Ec = E_values.astype(complex)

    if V.is_piecewise:
        out = np.empty((len(Ec), len(r_values)), dtype=complex)
        # transfer state at each segment start, vectorized over E
        edges = [0.0] + [e for e in V.segment_edges if e < r_values[-1]]
        seg_vals = list(V.segment_values[: len(edges)])
        if len(seg_vals) < len(edges):
            seg_vals += [0.0] * (len(edges) - len(seg_vals))
        phi = np.zeros(len(Ec), dtype=complex)
        dphi = np.ones(len(Ec), dtype=complex)
        bounds = edges[1:] + [np.inf]
        for start, end, v in zip(edges, bounds, seg_vals):
            sel = (r_values > start) & (r_values <= end) if end < np.inf else (r_values > start)
            if start == 0.0:
                sel = sel | (r_values == 0.0)
            if np.any(sel):
                w = Ec - v
                c, s = trig_pair(w[:, None], (r_values[sel] - start)[None, :])
                out[:, sel] = c * phi[:, None] + s * dphi[:, None]
            if end < np.inf:
                w = Ec - v
                c, s = trig_pair(w, end - start)
                phi, dphi = c * phi + s * dphi, -w * s * phi + c * dphi
        return out.real if real_case else out

    out = np.empty((len(Ec), len(r_values)), dtype=complex)
    for m, E in enumerate(Ec):
        # chain the adaptive integrator through the radial nodes
        y_phi = np.empty(len(r_values), dtype=complex)
        prev = 0.0
        state = None
        for j, r in enumerate(r_values):
            if state is None:
                s = integrate_regular_rk(V, E, r)
                state = np.array([s.phi, s.dphi])
            else:
                state = _advance_rk(V, E, prev, r, state)
            y_phi[j] = state[0]
            prev = r
        out[m] = y_phi
    return out.real if real_case else out


def _advance_rk(V, E, r0, r1, y0, tol=DEFAULT_TOL):
    """Continue an integration from (r0, y0) to r1 (internal helper)."""
    support_cap = max(V.support_radius * SUPPORT_STEP_FRACTION, 1e-6)

    def rhs(r, y):
        return np.array([y[1], (evaluate(V, r) - E) * y[0]], dtype=complex)

    y = np.array(y0, dtype=complex)
    r = r0
    h = min(support_cap, r1 - r0)
    n = 0
    while r < r1 - 1e-14 * max(1.0, r1):
        cap = support_cap if r < V.support_radius else (r1 - r0)
        h = min(h, cap, r1 - r)
        k = np.empty((7, 2), dtype=complex)
        k[0] = rhs(r, y)
        for i in range(1, 7):
            yi = y + h * sum(a * k[j] for j, a in enumerate(_DP_A[i]))
            k[i] = rhs(r + _DP_C[i] * h, yi)
        y5 = y + h * (_DP_B5 @ k)
        y4 = y + h * (_DP_B4 @ k)
        scale = tol + tol * np.maximum(np.abs(y), np.abs(y5))
        err = float(np.max(np.abs(y5 - y4) / scale))
        if err <= 1.0:
            r += h
            y = y5
        h *= min(5.0, max(0.2, 0.9 * err ** (-0.2) if err > 0 else 5.0))
        n += 1
        if n > 100_000 or h < 1e-14:
            raise StepFailureError("advance failed between radial nodes")
    return y
