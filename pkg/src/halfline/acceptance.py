"""Acceptance suite: the certified behaviors of this package, one runner
per criterion, shared by the test suite and the CLI `verify` command.

Every runner returns a CriterionResult with the measured metrics, the
pinned tolerances and a pass/fail verdict (runtime budgets included).
Two known-infeasible assertions are kept faithful and simply fail; they
are marked in `notes` and documented in the README:

* criterion 3, member exp(-r): that function violates the Dirichlet
  boundary condition at r = 0, so its sine-spectrum decays like 1/k and
  any finite momentum window k <= k_max loses ~1.27/k_max of its squared
  norm; 1e-4 agreement would need k_max ~ 1e8.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from . import evolution, experiments, hardy, jost, potential, spectral
from .radial_ode import trig_pair


@dataclass
class CriterionResult:
    index: int
    name: str
    passed: bool
    runtime: float
    budget: float
    tolerances: dict
    metrics: dict = field(default_factory=dict)
    notes: str = ""

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        out = f"[{status}] criterion {self.index:2d} ({self.name}): {self.runtime:.1f}s"
        if self.notes:
            out += f"  -- {self.notes}"
        return out


# shared grid pairs (built once per process, reused by the kernel cache)

@lru_cache(maxsize=None)
def packet_grids():
    """Wave-packet pair: k <= 16 resolves width-0.5 Gaussians, r <= 160
    holds every packet for |t| <= 5."""
    return spectral.transform_grids(16.0, 160.0)


@lru_cache(maxsize=None)
def hardy_grids():
    """Hardy round-trip pair: positive parts of atoms have r^{-3/2} radial
    tails, so r_max = 600 keeps the truncated mass under the 1e-3 budget."""
    return spectral.transform_grids(10.0, 600.0)


def _log_energies(n=50, lo=1e-2, hi=1e2):
    return np.logspace(np.log10(lo), np.log10(hi), n)


def _free_pair_formula(E):
    k = np.sqrt(E)
    return 1.0 / (2j * k), -1.0 / (2j * k)


def _well_pair_formula(E, depth, R):
    # independent matching oracle: single-segment transfer written directly
    k = np.sqrt(complex(E))
    kappa = np.sqrt(complex(E) + depth)
    phi = np.sin(kappa * R) / kappa
    dphi = np.cos(kappa * R)
    A_minus = np.exp(-1j * k * R) * (phi + dphi / (1j * k)) / 2
    A_plus = np.exp(+1j * k * R) * (phi - dphi / (1j * k)) / 2
    return A_minus, A_plus


def criterion_1() -> CriterionResult:
    """Free-case Jost goldens: matched pair equals 1/(+-2i sqrt(E))."""
    t0 = time.perf_counter()
    V = potential.free()
    worst = 0.0
    for E in _log_energies():
        pair = jost.jost_functions(V, E)
        am, ap = _free_pair_formula(E)
        worst = max(
            worst,
            abs(pair.A_minus - am) / abs(am),
            abs(pair.A_plus - ap) / abs(ap),
        )
    tol = 1e-12
    return CriterionResult(
        index=1, name="free Jost goldens", passed=worst <= tol,
        runtime=time.perf_counter() - t0, budget=1.0,
        tolerances={"relative": tol}, metrics={"worst_relative": worst},
    )


def criterion_2() -> CriterionResult:
    """Square-well Jost pair vs the closed-form matching oracle."""
    t0 = time.perf_counter()
    V = potential.square_well(10.0, 1.0)
    worst_match = worst_conj = worst_mod = 0.0
    for E in _log_energies():
        pair = jost.jost_functions(V, E)
        am, ap = _well_pair_formula(E, 10.0, 1.0)
        worst_match = max(
            worst_match,
            abs(pair.A_minus - am) / abs(am),
            abs(pair.A_plus - ap) / abs(ap),
        )
        worst_conj = max(
            worst_conj, abs(pair.A_plus - np.conj(pair.A_minus)) / abs(pair.A_plus)
        )
        wm = jost.wave_matrices(V, E)
        s = jost.s_matrix(V, E)
        worst_mod = max(
            worst_mod,
            abs(abs(wm.W_plus) - 1.0),
            abs(abs(wm.W_minus) - 1.0),
            abs(abs(s) - 1.0),
        )
    passed = worst_match <= 1e-9 and worst_conj <= 1e-10 and worst_mod <= 1e-10
    return CriterionResult(
        index=2, name="square-well Jost oracle", passed=passed,
        runtime=time.perf_counter() - t0, budget=5.0,
        tolerances={"match": 1e-9, "conjugate": 1e-10, "unimodular": 1e-10},
        metrics={
            "worst_match": worst_match,
            "worst_conjugate": worst_conj,
            "worst_unimodular": worst_mod,
        },
    )


#: the five-member radial test family (name, callable); exp(-r) is the
#: documented infeasible member
PSI0_FAMILY = (
    ("exp(-r)", lambda r: np.exp(-r)),
    ("gauss_c3_w0.5", lambda r: np.exp(-(((r - 3.0) / 0.5) ** 2))),
    ("gauss_c5_w1", lambda r: np.exp(-(((r - 5.0) / 1.0) ** 2))),
    ("gauss_c8_w2", lambda r: np.exp(-(((r - 8.0) / 2.0) ** 2))),
    ("gauss_c6_w1.5", lambda r: np.exp(-(((r - 6.0) / 1.5) ** 2))),
)

PSI0_TOL = 1e-4
PSI0_INFEASIBLE = ("exp(-r)",)


def psi0_member_metrics(name: str) -> tuple[float, float]:
    """(Parseval deviation, round-trip error), both relative, for a member."""
    eg, rg = packet_grids()
    fn = dict(PSI0_FAMILY)[name]
    f = spectral.RadialFunction(grid=rg, values=fn(rg.nodes).astype(complex))
    nf = f.norm()
    g = spectral.psi0_forward(f, eg)
    back = spectral.psi0_inverse(g, rg)
    parseval = abs(g.norm() - nf) / nf
    roundtrip = (
        float(np.sqrt(np.sum(rg.weights * np.abs(back.values - f.values) ** 2))) / nf
    )
    return parseval, roundtrip


def criterion_3() -> CriterionResult:
    """Psi0 unitarity and round trip on the five-member family."""
    t0 = time.perf_counter()
    metrics = {}
    passed = True
    for name, _ in PSI0_FAMILY:
        parseval, roundtrip = psi0_member_metrics(name)
        metrics[f"{name}_parseval"] = parseval
        metrics[f"{name}_roundtrip"] = roundtrip
        if parseval > PSI0_TOL or roundtrip > PSI0_TOL:
            passed = False
    notes = (
        "member exp(-r) violates the r=0 boundary condition; its 1/k spectral "
        "tail makes 1e-4 unreachable at any desk-scale k_max (see README)"
        if not passed
        else ""
    )
    return CriterionResult(
        index=3, name="Psi0 unitarity + round trip", passed=passed,
        runtime=time.perf_counter() - t0, budget=30.0,
        tolerances={"parseval": PSI0_TOL, "roundtrip": PSI0_TOL},
        metrics=metrics, notes=notes,
    )


def criterion_4() -> CriterionResult:
    """Free reduction: interacting transforms with V=0 match the free ones
    node-wise (the prefactor identity through the matched |A_+|)."""
    t0 = time.perf_counter()
    eg, rg = packet_grids()
    V = potential.free()
    f = spectral.RadialFunction(
        grid=rg, values=np.exp(-(((rg.nodes - 5.0)) ** 2)).astype(complex)
    )
    g0 = spectral.psi0_forward(f, eg)
    g1 = spectral.psi_forward(V, f, eg)
    fwd = float(np.max(np.abs(g1.values - g0.values))) / float(
        np.max(np.abs(g0.values))
    )
    b0 = spectral.psi0_inverse(g0, rg)
    b1 = spectral.psi_inverse(V, g0, rg)
    inv = float(np.max(np.abs(b1.values - b0.values))) / float(
        np.max(np.abs(b0.values))
    )
    tol = 1e-10
    return CriterionResult(
        index=4, name="free reduction of Psi", passed=fwd <= tol and inv <= tol,
        runtime=time.perf_counter() - t0, budget=10.0,
        tolerances={"nodewise": tol}, metrics={"forward": fwd, "inverse": inv},
    )


EVOLUTION_TIMES = (0.5, 1.0, 2.0, 5.0)


def _packet(rg) -> spectral.RadialFunction:
    return spectral.RadialFunction(
        grid=rg, values=np.exp(-(((rg.nodes - 5.0)) ** 2)).astype(complex)
    )


def criterion_5() -> CriterionResult:
    """Spectral evolution vs the Crank-Nicolson oracle."""
    t0 = time.perf_counter()
    eg, rg = packet_grids()
    metrics = {}
    passed = True
    for V, vname in ((potential.free(), "free"), (potential.square_barrier(4.0, 2.0), "barrier")):
        f = _packet(rg)
        nf = f.norm()
        for t in EVOLUTION_TIMES:
            a = evolution.evolve_spectral(V, f, t, egrid=eg).state
            b = evolution.evolve_crank_nicolson(V, f, t).state
            rel = float(np.sqrt(np.sum(rg.weights * np.abs(a.values - b.values) ** 2))) / nf
            metrics[f"{vname}_t{t:g}"] = rel
            if rel > 1e-3:
                passed = False
    return CriterionResult(
        index=5, name="spectral vs Crank-Nicolson", passed=passed,
        runtime=time.perf_counter() - t0, budget=120.0,
        tolerances={"relative_l2": 1e-3}, metrics=metrics,
    )


def criterion_6() -> CriterionResult:
    """Shift-factorized evolution vs spectral evolution."""
    t0 = time.perf_counter()
    eg, rg = packet_grids()
    metrics = {}
    passed = True
    for V, vname in ((potential.free(), "free"), (potential.square_barrier(4.0, 2.0), "barrier")):
        f = _packet(rg)
        nf = f.norm()
        for t in EVOLUTION_TIMES:
            a = evolution.evolve_spectral(V, f, t, egrid=eg).state
            b = evolution.evolve_factorized(V, f, t, egrid=eg).state
            rel = float(np.sqrt(np.sum(rg.weights * np.abs(a.values - b.values) ** 2))) / nf
            metrics[f"{vname}_t{t:g}"] = rel
            if rel > 1e-3:
                passed = False
    return CriterionResult(
        index=6, name="shift factorization", passed=passed,
        runtime=time.perf_counter() - t0, budget=60.0,
        tolerances={"relative_l2": 1e-3}, metrics=metrics,
    )


def criterion_7() -> CriterionResult:
    """Hardy machinery: exact projection algebra plus atom goldens."""
    t0 = time.perf_counter()
    lg = hardy.default_line_grid()
    rng = np.random.default_rng(20260809)
    h = hardy.LineFunction(
        grid=lg, domain=hardy.E_DOMAIN,
        values=(rng.standard_normal(lg.N) + 1j * rng.standard_normal(lg.N))
        * np.exp(-(lg.E / 64.0) ** 2),
    )
    qp = hardy.hardy_projection(h, "+")
    qm = hardy.hardy_projection(h, "-")
    hn = h.norm()
    algebra = max(
        float(np.max(np.abs(qp.values + qm.values - h.values))) / float(np.max(np.abs(h.values))),
        hardy.LineFunction(grid=lg, domain=hardy.E_DOMAIN,
                           values=hardy.hardy_projection(qp, "+").values - qp.values).norm() / hn,
        abs(float(np.real(np.sum(np.conj(qp.values) * qm.values) * lg.dE))) / hn**2,
    )
    # pole-location goldens: 1/(E+i) lives in H^2_+
    pole = hardy.LineFunction(grid=lg, domain=hardy.E_DOMAIN, values=1.0 / (lg.E + 1j))
    pn = pole.norm()
    fixed = hardy.LineFunction(
        grid=lg, domain=hardy.E_DOMAIN,
        values=hardy.hardy_projection(pole, "+").values - pole.values,
    ).norm() / pn
    killed = hardy.hardy_projection(pole, "-").norm() / pn
    # atom near-fixed-points under their own projection
    worst_atom = 0.0
    for n in range(5):
        for hp in ("-", "+"):
            b = hardy.atom(hp, n, lg)
            worst_atom = max(
                worst_atom, hardy.hardy_projection(b, "+" if hp == "-" else "-").norm() / b.norm()
            )
    passed = algebra <= 1e-12 and fixed <= 1e-3 and killed <= 1e-3 and worst_atom <= 1e-3
    return CriterionResult(
        index=7, name="Hardy projections", passed=passed,
        runtime=time.perf_counter() - t0, budget=30.0,
        tolerances={"algebra": 1e-12, "goldens": 1e-3},
        metrics={
            "projection_algebra": algebra,
            "pole_fixed": fixed,
            "pole_killed": killed,
            "worst_atom_leak": worst_atom,
        },
    )


ASYMMETRY_FORWARD_TIMES = (0.5, 1.0, 5.0)


def criterion_8() -> CriterionResult:
    """Time asymmetry: atoms n <= 4 stay in their Hardy space forward in
    time (leakage <= 2e-3) and leave it backward (leakage >= 1e-2)."""
    t0 = time.perf_counter()
    report = experiments.asymmetry_study(
        atom_indices=(0, 1, 2, 3, 4),
        t_list=ASYMMETRY_FORWARD_TIMES + (-1.0,),
    )
    return CriterionResult(
        index=8, name="time asymmetry of Hardy atoms", passed=report.passed,
        runtime=time.perf_counter() - t0, budget=60.0,
        tolerances=report.tolerances, metrics=report.metrics,
    )


def criterion_9() -> CriterionResult:
    """Hardy round trip: Psi(Psi^{-1} p) recovers positive parts of atoms."""
    t0 = time.perf_counter()
    eg, rg = hardy_grids()
    metrics = {}
    passed = True
    for V, vname in ((potential.free(), "free"), (potential.square_barrier(4.0, 2.0), "barrier")):
        rep = experiments.roundtrip_study(V=V, egrid=eg, rgrid=rg)
        for key, val in rep.metrics.items():
            metrics[f"{vname}_{key}"] = val
        passed = passed and rep.passed
    return CriterionResult(
        index=9, name="Hardy positive-part round trip", passed=passed,
        runtime=time.perf_counter() - t0, budget=60.0,
        tolerances={"roundtrip": experiments.ROUNDTRIP_THRESHOLD}, metrics=metrics,
    )


def criterion_10() -> CriterionResult:
    """Density study: nonincreasing approximation error, <= 5% at N = 64."""
    t0 = time.perf_counter()
    report = experiments.hardy_density_study(atom_count=64)
    return CriterionResult(
        index=10, name="Hardy density study", passed=report.passed,
        runtime=time.perf_counter() - t0, budget=60.0,
        tolerances=report.tolerances, metrics=report.metrics,
    )


def _resonance_oracle_scan(depth, R, box):
    """Independent transcendental-equation root scan for the square well:
    zeros of D(k) = i k sin(kappa R) - kappa cos(kappa R), kappa^2 = k^2 + depth."""

    def D(k):
        k = np.asarray(k, dtype=complex)
        kp = np.sqrt(k * k + depth)
        return 1j * k * np.sin(kp * R) - kp * np.cos(kp * R)

    re = np.linspace(box[0], box[1], 481)
    im = np.linspace(box[2], box[3], 321)
    Z = re[None, :] + 1j * im[:, None]
    W = np.abs(D(Z))
    local = np.ones_like(W, dtype=bool)
    local[1:, :] &= W[1:, :] <= W[:-1, :]
    local[:-1, :] &= W[:-1, :] <= W[1:, :]
    local[:, 1:] &= W[:, 1:] <= W[:, :-1]
    local[:, :-1] &= W[:, :-1] <= W[:, 1:]
    roots = []
    for z0 in Z[local]:
        z = complex(z0)
        for _ in range(50):
            h = 1e-7 * max(1.0, abs(z))
            d = (D(z + h) - D(z - h)) / (2 * h)
            step = D(z) / d
            z = z - complex(step)
            if abs(step) < 1e-13 * max(1.0, abs(z)):
                break
        if (
            box[0] - 1e-6 <= z.real <= box[1] + 1e-6
            and box[2] - 1e-6 <= z.imag <= box[3] + 1e-6
            and abs(D(z)) < 1e-10
            and not any(abs(z - r) < 1e-6 for r in roots)
        ):
            roots.append(z)
    return sorted(roots, key=lambda z: z.real)


def criterion_11() -> CriterionResult:
    """Resonance search vs the independent transcendental root scan."""
    t0 = time.perf_counter()
    V = potential.square_well(10.0, 1.0)
    box = (0.1, 6.0, -2.0, -0.01)
    found = jost.find_resonances(V, box)
    oracle = _resonance_oracle_scan(10.0, 1.0, box)
    metrics = {"count_found": len(found), "count_oracle": len(oracle)}
    passed = len(found) == len(oracle) and len(found) > 0
    worst = np.inf if not passed else 0.0
    if passed:
        for r, z in zip(found, oracle):
            worst = max(worst, abs(r.k - z))
        metrics["worst_k_distance"] = worst
        passed = worst <= 1e-6
    # argument-principle self-consistency on the barrier
    Vb = potential.square_barrier(4.0, 2.0)
    found_b = jost.find_resonances(Vb, box)
    metrics["barrier_count"] = len(found_b)
    return CriterionResult(
        index=11, name="resonances vs transcendental scan", passed=passed,
        runtime=time.perf_counter() - t0, budget=60.0,
        tolerances={"k_distance": 1e-6}, metrics=metrics,
    )


ALL_CRITERIA = (
    criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
    criterion_6, criterion_7, criterion_8, criterion_9, criterion_10,
    criterion_11,
)


def run_all(indices=None) -> list[CriterionResult]:
    results = []
    for i, fn in enumerate(ALL_CRITERIA, start=1):
        if indices is not None and i not in indices:
            continue
        res = fn()
        if res.runtime > res.budget:
            res.passed = False
            res.notes = (res.notes + "; " if res.notes else "") + (
                f"runtime {res.runtime:.1f}s over budget {res.budget:.0f}s"
            )
        results.append(res)
    return results
