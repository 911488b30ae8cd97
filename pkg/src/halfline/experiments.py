"""Scripted verification experiments with reproducible pass/fail reports.

Three studies:

* density:   best least-squares approximation of fixed spectral targets
             from growing spans of Hardy-atom positive parts; the error
             must be nonincreasing in the atom count and small at N = 64.
* roundtrip: positive parts p of Hardy atoms survive Psi(Psi^{-1} p) on
             the grid to 1e-3 relative, with a finite, normable radial
             reconstruction in between.
* asymmetry: leakage of evolved Hardy atoms into the opposite Hardy
             space: negligible for forward times, order one backward.

Reports are deterministic functions of their parameter block; re-running
a report from its own serialized parameters reproduces every metric.
Thresholds are acceptance constants of this package, not literature
values, and are recorded in each report.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field

import numpy as np

from .errors import WraparoundGuardError
from .evolution import halfline_mass_fractions, representer_of
from .hardy import (
    E_DOMAIN,
    LineFunction,
    LineGrid,
    atom,
    default_line_grid,
    fourier_inverse,
    positive_part,
)
from .potential import Potential, free, square_barrier, square_well
from .spectral import (
    EnergyGrid,
    SpectralFunction,
    default_energy_grid,
    psi_forward,
    psi_inverse,
    transform_grids,
)

#: versioned fixed target set so reports stay comparable across runs
TARGET_SET_VERSION = "v1"

DENSITY_THRESHOLD = 0.05
ROUNDTRIP_THRESHOLD = 1e-3
FORWARD_LEAK_BOUND = 2e-3
BACKWARD_LEAK_FLOOR = 1e-2
GRAM_CONDITION_LIMIT = 1e12
RIDGE = 1e-10


@dataclass
class ExperimentReport:
    name: str
    parameters: dict
    metrics: dict
    tolerances: dict
    passed: bool
    runtime: float = field(default=0.0)

    def to_json(self) -> str:
        return json.dumps(
            {
                "name": self.name,
                "parameters": self.parameters,
                "metrics": self.metrics,
                "tolerances": self.tolerances,
                "passed": self.passed,
                "runtime": self.runtime,
            },
            indent=2,
            sort_keys=True,
        )

    @classmethod
    def from_json(cls, text: str) -> "ExperimentReport":
        d = json.loads(text)
        return cls(**d)


def _potential_params(V: Potential) -> dict:
    out = {"kind": V.kind, "radius": V.support_radius}
    if V.kind in ("square_well", "square_barrier"):
        out["depth"] = abs(V.segment_values[0])
    return out


def _potential_from_params(p: dict) -> Potential:
    kind = p["kind"]
    if kind == "free":
        return free()
    if kind == "square_well":
        return square_well(p["depth"], p["radius"])
    if kind == "square_barrier":
        return square_barrier(p["depth"], p["radius"])
    raise ValueError(f"experiments support free/square_well/square_barrier, got {kind}")


def _target_values(name: str, eg: EnergyGrid) -> np.ndarray:
    E = eg.nodes
    if name == "gauss_E2_w1":
        return np.exp(-((E - 2.0) / 1.0) ** 2).astype(complex)
    if name == "exp_decay":
        return np.exp(-E).astype(complex)
    if name.startswith("atom_minus_"):
        n = int(name.rsplit("_", 1)[1])
        return positive_part(atom("-", n), eg).values
    raise ValueError(f"unknown target {name!r} in set {TARGET_SET_VERSION}")


def hardy_density_study(
    V: Potential | None = None,
    atom_count: int = 64,
    targets: tuple[str, ...] = ("gauss_E2_w1", "exp_decay"),
    egrid: EnergyGrid | None = None,
) -> ExperimentReport:
    """Least-squares distance of fixed targets to span{positive parts of
    atoms b_0 .. b_{N-1}} for N = 1, 2, 4, ..., atom_count.

    Nested spans make the errors nonincreasing; density is demonstrated,
    not proven, by the final error dropping below the threshold.  The
    potential enters only through one diagnostic metric (the norm of the
    radial realization of the best fit).
    """
    t0 = time.perf_counter()
    V = V if V is not None else free()
    eg = egrid or default_energy_grid()
    sq = np.sqrt(eg.weights)
    design = np.column_stack(
        [positive_part(atom("-", n), eg).values for n in range(atom_count)]
    )
    gram = (design.conj().T * eg.weights) @ design
    gram_cond = float(np.linalg.cond(gram))
    ill = gram_cond > GRAM_CONDITION_LIMIT

    counts = []
    N = 1
    while N < atom_count:
        counts.append(N)
        N *= 2
    counts.append(atom_count)

    metrics: dict = {"gram_condition": gram_cond, "regularized": bool(ill)}
    passed = True
    for tname in targets:
        tgt = _target_values(tname, eg)
        tnorm = float(np.sqrt(np.sum(eg.weights * np.abs(tgt) ** 2)))
        prev = np.inf
        coef_full = None
        for N in counts:
            M = sq[:, None] * design[:, :N]
            y = sq * tgt
            if ill:
                M = np.vstack([M, np.sqrt(RIDGE) * np.eye(N)])
                y = np.concatenate([y, np.zeros(N)])
            coef, *_ = np.linalg.lstsq(M, y, rcond=None)
            resid = (sq[:, None] * design[:, :N]) @ coef - sq * tgt
            err = float(np.sqrt(np.sum(np.abs(resid) ** 2))) / tnorm
            metrics[f"{tname}_err_N{N}"] = err
            if err > prev + 1e-12:
                passed = False
            prev = err
            coef_full = coef
        if prev > DENSITY_THRESHOLD:
            passed = False
        # radial realization of the best fit (the one place V enters)
        fit = design[:, : len(coef_full)] @ coef_full
        eg_t, rg_t = transform_grids(min(10.0, eg.k_max), 60.0)
        fit_vals = np.interp(eg_t.nodes, eg.nodes, fit.real) + 1j * np.interp(
            eg_t.nodes, eg.nodes, fit.imag
        )
        fit_t = SpectralFunction(grid=eg_t, values=fit_vals)
        metrics[f"{tname}_radial_norm"] = psi_inverse(V, fit_t, rg_t).norm()

    report = ExperimentReport(
        name="density",
        parameters={
            "potential": _potential_params(V),
            "atom_count": atom_count,
            "targets": list(targets),
            "target_set": TARGET_SET_VERSION,
            "k_max": eg.k_max,
            "n_energy_nodes": len(eg),
        },
        metrics=metrics,
        tolerances={"final_error": DENSITY_THRESHOLD, "monotone": 0.0},
        passed=passed,
        runtime=time.perf_counter() - t0,
    )
    return report


def roundtrip_study(
    V: Potential | None = None,
    targets: tuple[str, ...] = tuple(f"atom_minus_{n}" for n in range(5)),
    egrid: EnergyGrid | None = None,
    rgrid=None,
) -> ExperimentReport:
    """||Psi(Psi^{-1} p) - p|| <= 1e-3 ||p|| for Hardy positive parts p.

    The intermediate radial reconstruction must be finite and normable;
    its norm is recorded.
    """
    t0 = time.perf_counter()
    V = V if V is not None else free()
    if egrid is None or rgrid is None:
        egrid, rgrid = transform_grids(10.0, 600.0)
    metrics: dict = {}
    passed = True
    for tname in targets:
        p = SpectralFunction(grid=egrid, values=_target_values(tname, egrid))
        f = psi_inverse(V, p, rgrid)
        back = psi_forward(V, f, egrid)
        rel = float(
            np.sqrt(np.sum(egrid.weights * np.abs(back.values - p.values) ** 2))
        ) / p.norm()
        metrics[f"{tname}_roundtrip"] = rel
        metrics[f"{tname}_radial_norm"] = f.norm()
        if rel > ROUNDTRIP_THRESHOLD or not np.isfinite(f.norm()):
            passed = False
    return ExperimentReport(
        name="roundtrip",
        parameters={
            "potential": _potential_params(V),
            "targets": list(targets),
            "target_set": TARGET_SET_VERSION,
            "k_max": egrid.k_max,
            "r_max": rgrid.r_max,
        },
        metrics=metrics,
        tolerances={"roundtrip": ROUNDTRIP_THRESHOLD},
        passed=passed,
        runtime=time.perf_counter() - t0,
    )


def asymmetry_study(
    V: Potential | None = None,
    atom_indices: tuple[int, ...] = (0, 1, 2, 3, 4),
    t_list: tuple[float, ...] = (0.5, 1.0, 5.0, -1.0),
    line_grid: LineGrid | None = None,
    representer_diagnostics: bool = False,
) -> ExperimentReport:
    """Leakage of evolved Hardy atoms into the opposite Hardy space.

    For b in H^2_- the evolved atom e^{-itE} b stays in H^2_- for t >= 0;
    its grid leakage ||Q_+ e^{-itE} b|| / ||b|| = ||P_- F^{-1}(...)|| stays
    at the sampling floor.  Backward evolution pushes mass across x = 0
    and the leakage becomes order one.  Passes iff every forward leakage
    is <= 2e-3 and every backward leakage >= 1e-2.

    With representer_diagnostics=True the study also records, per atom at
    t = 0, the wrong-side mass fraction of the literal zero-extension
    representer of the radial realization; those values sit near 0.25
    (see representer_of) and are reported, not gated.
    """
    t0 = time.perf_counter()
    V = V if V is not None else free()
    lg = line_grid or default_line_grid()
    if any(abs(t) > lg.x_max / 4.0 for t in t_list):
        raise WraparoundGuardError(
            f"t list exceeds the certified shift window x_max/4 = {lg.x_max / 4:g}"
        )
    metrics: dict = {}
    passed = True
    for n in atom_indices:
        b = atom("-", n, lg)
        bnorm = b.norm()
        for t in t_list:
            evolved = LineFunction(
                grid=lg, domain=E_DOMAIN, values=np.exp(-1j * t * lg.E) * b.values
            )
            u = fourier_inverse(evolved)
            neg_mass = float(np.sum(np.abs(u.values[lg.x < 0]) ** 2) * lg.dx)
            leak = float(np.sqrt(neg_mass)) / bnorm
            metrics[f"atom{n}_t{t:+g}_leak"] = leak
            if t >= 0 and leak > FORWARD_LEAK_BOUND:
                passed = False
            if t < 0 and leak < BACKWARD_LEAK_FLOOR:
                passed = False
    if representer_diagnostics:
        eg, rg = transform_grids(10.0, 600.0)
        for n in atom_indices:
            p = positive_part(atom("-", n, lg), eg)
            f = psi_inverse(V, p, rg)
            pair = representer_of(V, f, egrid=eg, line_grid=lg)
            _, frac_neg = halfline_mass_fractions(pair.g)
            metrics[f"atom{n}_representer_negative_mass"] = frac_neg
            metrics[f"atom{n}_representer_direction"] = pair.direction
    return ExperimentReport(
        name="asymmetry",
        parameters={
            "potential": _potential_params(V),
            "atom_indices": list(atom_indices),
            "t_list": list(t_list),
            "line_N": lg.N,
            "line_Emax": lg.E_max,
            "representer_diagnostics": representer_diagnostics,
        },
        metrics=metrics,
        tolerances={
            "forward_leak": FORWARD_LEAK_BOUND,
            "backward_leak_floor": BACKWARD_LEAK_FLOOR,
        },
        passed=passed,
        runtime=time.perf_counter() - t0,
    )


def run_from_parameters(name: str, parameters: dict) -> ExperimentReport:
    """Re-run a study from a report's own parameter block."""
    if name == "density":
        return hardy_density_study(
            V=_potential_from_params(parameters["potential"]),
            atom_count=parameters["atom_count"],
            targets=tuple(parameters["targets"]),
        )
    if name == "roundtrip":
        eg, rg = transform_grids(parameters["k_max"], parameters["r_max"])
        return roundtrip_study(
            V=_potential_from_params(parameters["potential"]),
            targets=tuple(parameters["targets"]),
            egrid=eg,
            rgrid=rg,
        )
    if name == "asymmetry":
        return asymmetry_study(
            V=_potential_from_params(parameters["potential"]),
            atom_indices=tuple(parameters["atom_indices"]),
            t_list=tuple(parameters["t_list"]),
            representer_diagnostics=parameters.get("representer_diagnostics", False),
        )
    raise ValueError(f"unknown experiment {name!r}")
