"""Command-line entry point and run-configuration handling.

Configuration files are flat `section.key = value` text with `#` comments.
Unknown keys are rejected; every omitted key takes a documented default
that is echoed to the log.  Output files are comma-separated with
17-significant-digit floats (round-trip safe), LF newlines, and are
bit-identical across runs of the same configuration on one platform.

Exit codes: 0 success, 1 verification failure, 2 configuration error,
3 numerical guard (the guard name is printed).
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import logging
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import acceptance, experiments, hardy, jost, potential, spectral
from .errors import ConfigError, NumericalGuard, ParseError, ValidationError
from .evolution import (
    evolve_crank_nicolson,
    evolve_factorized,
    evolve_spectral,
    representer_of,
)
from .spectral import RadialFunction

log = logging.getLogger("halfline")

CONFIG_VERSION = 1

COMMANDS = (
    "jost", "resonances", "transform", "evolve", "hardy",
    "density", "roundtrip", "asymmetry", "verify",
)


@dataclass
class RunConfig:
    config_version: int = CONFIG_VERSION
    # potential block
    potential_kind: str = "free"
    potential_depth: float = 10.0
    potential_radius: float = 1.0
    potential_table_path: str = ""
    potential_edges: tuple = ()
    potential_values: tuple = ()
    # grids block
    k_max: float = 16.0
    k_panels: int = 384
    r_max: float = 160.0
    r_panels: int = 384
    nodes_per_panel: int = 8
    line_N: int = hardy.DEFAULT_LINE_N
    line_Emax: float = hardy.DEFAULT_LINE_EMAX
    # tolerances block
    ode_tol: float = 1e-10
    # jost sweep block
    jost_e_min: float = 1e-2
    jost_e_max: float = 1e2
    jost_count: int = 50
    # resonance block
    res_re_min: float = 0.1
    res_re_max: float = 6.0
    res_im_min: float = -2.0
    res_im_max: float = -0.01
    res_max_count: int = 32
    # evolve block
    evolve_method: str = "spectral"
    evolve_times: tuple = (0.5, 1.0, 2.0, 5.0)
    # hardy block
    hardy_atoms: str = "-:4"
    # experiments block
    experiments_select: tuple = ("density", "roundtrip", "asymmetry")
    # output block
    output_dir: str = "out"


# config key -> (field name, parser)
def _parse_bool(s):
    if s.lower() in ("true", "1", "yes"):
        return True
    if s.lower() in ("false", "0", "no"):
        return False
    raise ValueError(f"not a boolean: {s!r}")


def _parse_floats(s):
    return tuple(float(x) for x in s.split(",") if x.strip())


def _parse_names(s):
    return tuple(x.strip() for x in s.split(",") if x.strip())


KEY_TABLE = {
    "config_version": ("config_version", int),
    "potential.kind": ("potential_kind", str),
    "potential.depth": ("potential_depth", float),
    "potential.radius": ("potential_radius", float),
    "potential.table_path": ("potential_table_path", str),
    "potential.edges": ("potential_edges", _parse_floats),
    "potential.values": ("potential_values", _parse_floats),
    "grids.k_max": ("k_max", float),
    "grids.k_panels": ("k_panels", int),
    "grids.r_max": ("r_max", float),
    "grids.r_panels": ("r_panels", int),
    "grids.nodes_per_panel": ("nodes_per_panel", int),
    "grids.line_N": ("line_N", int),
    "grids.line_Emax": ("line_Emax", float),
    "tolerances.ode_tol": ("ode_tol", float),
    "jost.e_min": ("jost_e_min", float),
    "jost.e_max": ("jost_e_max", float),
    "jost.count": ("jost_count", int),
    "resonances.re_min": ("res_re_min", float),
    "resonances.re_max": ("res_re_max", float),
    "resonances.im_min": ("res_im_min", float),
    "resonances.im_max": ("res_im_max", float),
    "resonances.max_count": ("res_max_count", int),
    "evolve.method": ("evolve_method", str),
    "evolve.times": ("evolve_times", _parse_floats),
    "hardy.atoms": ("hardy_atoms", str),
    "experiments.select": ("experiments_select", _parse_names),
    "output.dir": ("output_dir", str),
}


def parse_config(text: str) -> RunConfig:
    """Parse and validate a flat run configuration."""
    cfg = RunConfig()
    seen = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParseError("expected `section.key = value`", line=lineno)
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if key not in KEY_TABLE:
            raise ValidationError("unknown configuration key", key=key)
        if key in seen:
            raise ValidationError("duplicate key", key=key)
        seen.add(key)
        attr, conv = KEY_TABLE[key]
        try:
            setattr(cfg, attr, conv(value))
        except (ValueError, TypeError) as exc:
            raise ParseError(f"bad value for {key}: {exc}", line=lineno) from None
    _validate(cfg)
    for key, (attr, _) in sorted(KEY_TABLE.items()):
        if key not in seen:
            log.info("default applied: %s = %s", key, _format_value(getattr(cfg, attr)))
    return cfg


def _validate(cfg: RunConfig) -> None:
    if cfg.config_version != CONFIG_VERSION:
        raise ValidationError(
            f"unsupported version {cfg.config_version}", key="config_version"
        )
    if cfg.potential_kind not in potential.KINDS:
        raise ValidationError(
            f"kind must be one of {', '.join(potential.KINDS)}", key="potential.kind"
        )
    for key, val in (
        ("grids.k_max", cfg.k_max), ("grids.k_panels", cfg.k_panels),
        ("grids.r_max", cfg.r_max), ("grids.r_panels", cfg.r_panels),
        ("grids.nodes_per_panel", cfg.nodes_per_panel),
        ("grids.line_Emax", cfg.line_Emax), ("tolerances.ode_tol", cfg.ode_tol),
        ("potential.radius", cfg.potential_radius),
        ("jost.count", cfg.jost_count),
    ):
        if val <= 0:
            raise ValidationError("must be positive", key=key)
    n = cfg.line_N
    if n < 4 or (n & (n - 1)) != 0:
        raise ValidationError("must be a power of two >= 4", key="grids.line_N")
    if cfg.evolve_method not in ("spectral", "factorized", "cn"):
        raise ValidationError("method must be spectral|factorized|cn", key="evolve.method")
    for name in cfg.experiments_select:
        if name not in ("density", "roundtrip", "asymmetry"):
            raise ValidationError(f"unknown experiment {name}", key="experiments.select")


def _format_value(v) -> str:
    if isinstance(v, tuple):
        return ",".join(_format_value(x) for x in v)
    if isinstance(v, float):
        return f"{v:.17g}"
    return str(v)


def serialize_config(cfg: RunConfig) -> str:
    """Normalized text form; parse(serialize(parse(x))) is the identity."""
    lines = []
    for key, (attr, _) in sorted(KEY_TABLE.items()):
        lines.append(f"{key} = {_format_value(getattr(cfg, attr))}")
    return "\n".join(lines) + "\n"


def build_potential(cfg: RunConfig) -> potential.Potential:
    kind = cfg.potential_kind
    if kind == "free":
        return potential.free()
    if kind == "square_well":
        return potential.square_well(cfg.potential_depth, cfg.potential_radius)
    if kind == "square_barrier":
        return potential.square_barrier(cfg.potential_depth, cfg.potential_radius)
    if kind == "piecewise_constant":
        return potential.piecewise_constant(cfg.potential_edges, cfg.potential_values)
    table = np.loadtxt(cfg.potential_table_path, delimiter=",")
    return potential.sampled_table(table[:, 0], table[:, 1])


# ---------------------------------------------------------------------------
# output helpers
# ---------------------------------------------------------------------------

def _fmt(x: float) -> str:
    return f"{float(x):.17g}"


def write_csv(path: Path, header: list[str], rows) -> None:
    with open(path, "w", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) for v in row) + "\n")


def _outdir(cfg: RunConfig, override: str | None) -> Path:
    out = override or os.environ.get("HS_OUTPUT_DIR") or cfg.output_dir
    path = Path(out)
    path.mkdir(parents=True, exist_ok=True)
    return path


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def _cmd_jost(cfg: RunConfig, out: Path) -> int:
    V = build_potential(cfg)
    energies = np.logspace(
        np.log10(cfg.jost_e_min), np.log10(cfg.jost_e_max), cfg.jost_count
    )
    pairs = jost.jost_sweep(V, energies)
    rows = []
    for p in pairs:
        w = jost.wave_matrices(V, p.E.real)
        s = p.A_minus / p.A_plus
        rows.append(
            (p.E.real, p.A_minus.real, p.A_minus.imag, p.A_plus.real, p.A_plus.imag,
             w.W_plus.real, w.W_plus.imag, s.real, s.imag)
        )
    write_csv(
        out / "jost.csv",
        ["E", "Re A-", "Im A-", "Re A+", "Im A+", "Re W+", "Im W+", "Re S", "Im S"],
        rows,
    )
    log.info("wrote %s (%d energies)", out / "jost.csv", len(rows))
    return 0


def _cmd_resonances(cfg: RunConfig, out: Path) -> int:
    V = build_potential(cfg)
    box = (cfg.res_re_min, cfg.res_re_max, cfg.res_im_min, cfg.res_im_max)
    found = jost.find_resonances(V, box, max_count=cfg.res_max_count)
    write_csv(
        out / "resonances.csv",
        ["Re k", "Im k", "Re E", "Im E", "residual", "newton_iterations"],
        [(r.k.real, r.k.imag, r.E.real, r.E.imag, r.residual, r.newton_iterations)
         for r in found],
    )
    log.info("wrote %s (%d resonances)", out / "resonances.csv", len(found))
    return 0


def _cfg_grids(cfg: RunConfig):
    eg = spectral.EnergyGrid.gauss_legendre(cfg.k_max, cfg.k_panels, cfg.nodes_per_panel)
    rg = spectral.RadialGrid.gauss_legendre(cfg.r_max, cfg.r_panels, cfg.nodes_per_panel)
    return eg, rg


def _cmd_transform(cfg: RunConfig, out: Path) -> int:
    V = build_potential(cfg)
    eg, rg = _cfg_grids(cfg)
    f = RadialFunction(grid=rg, values=np.exp(-(((rg.nodes - 5.0)) ** 2)).astype(complex))
    g = spectral.psi_forward(V, f, eg)
    back = spectral.psi_inverse(V, g, rg)
    write_csv(out / "transform_radial.csv", ["r", "Re f", "Im f"],
              zip(rg.nodes, f.values.real, f.values.imag))
    write_csv(out / "transform_spectral.csv", ["E", "Re g", "Im g"],
              zip(eg.nodes, g.values.real, g.values.imag))
    err = float(np.sqrt(np.sum(rg.weights * np.abs(back.values - f.values) ** 2))) / f.norm()
    log.info("round-trip relative error: %.3e", err)
    return 0


def _cmd_evolve(cfg: RunConfig, out: Path) -> int:
    V = build_potential(cfg)
    eg, rg = _cfg_grids(cfg)
    f = RadialFunction(grid=rg, values=np.exp(-(((rg.nodes - 5.0)) ** 2)).astype(complex))
    rows = []
    for t in cfg.evolve_times:
        ref = evolve_spectral(V, f, t, egrid=eg)
        if cfg.evolve_method == "spectral":
            res = ref
        elif cfg.evolve_method == "factorized":
            res = evolve_factorized(V, f, t, egrid=eg)
        else:
            res = evolve_crank_nicolson(V, f, t)
        cross = float(
            np.sqrt(np.sum(rg.weights * np.abs(res.state.values - ref.state.values) ** 2))
        ) / f.norm()
        pair = representer_of(V, res.state, egrid=eg)
        from .evolution import halfline_mass_fractions

        _, leak = halfline_mass_fractions(pair.g)
        rows.append((t, res.state.norm(), res.norm_drift, cross, leak))
    write_csv(out / "evolve.csv",
              ["t", "norm", "norm_drift", "cross_method_error", "representer_negative_mass"],
              rows)
    log.info("wrote %s (%d times, method=%s)", out / "evolve.csv", len(rows), cfg.evolve_method)
    return 0


def _cmd_hardy(cfg: RunConfig, out: Path) -> int:
    lg = hardy.LineGrid.make(cfg.line_N, cfg.line_Emax)
    halfplane, _, count = cfg.hardy_atoms.partition(":")
    count = int(count or "4")
    rows = []
    for n in range(count):
        b = hardy.atom(halfplane, n, lg)
        opposite = "+" if halfplane == "-" else "-"
        leak = hardy.hardy_projection(b, opposite).norm() / b.norm()
        rows.append((n, b.norm(), leak))
    write_csv(out / "hardy_atoms.csv", ["n", "norm", "opposite_projection_leak"], rows)
    log.info("wrote %s", out / "hardy_atoms.csv")
    return 0


def _cmd_experiment(name: str, cfg: RunConfig, out: Path) -> int:
    V = build_potential(cfg)
    if name == "density":
        rep = experiments.hardy_density_study(V=V)
    elif name == "roundtrip":
        rep = experiments.roundtrip_study(V=V)
    else:
        rep = experiments.asymmetry_study(V=V, representer_diagnostics=True)
    path = out / f"{name}_report.json"
    path.write_text(rep.to_json() + "\n")
    numeric = {k: v for k, v in rep.metrics.items() if isinstance(v, (int, float))}
    with open(out / f"{name}_metrics.csv", "w", newline="\n") as fh:
        fh.write("metric,value\n")
        for k in sorted(numeric):
            fh.write(f"{k},{_fmt(numeric[k])}\n")
    log.info("%s: passed=%s (%s)", name, rep.passed, path)
    return 0


def _cmd_verify(cfg: RunConfig, out: Path, indices=None) -> int:
    results = acceptance.run_all(indices=indices)
    all_pass = True
    for res in results:
        print(res.line())
        all_pass = all_pass and res.passed
    (out / "verify_report.json").write_text(
        json.dumps([dataclasses.asdict(r) for r in results], indent=2, sort_keys=True)
        + "\n"
    )
    return 0 if all_pass else 1


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="halfline",
        description="half-line scattering toolkit: Jost functions, spectral "
        "transforms, Hardy projections, shift-factorized evolution",
    )
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("config", nargs="?", help="run-configuration file")
    parser.add_argument("--out", help="output directory (overrides HS_OUTPUT_DIR)")
    parser.add_argument("--threads", type=int, default=0,
                        help="worker cap (0 = hardware count)")
    parser.add_argument("--criteria", help="verify only these criteria, e.g. 1,2,7")
    parser.add_argument("-v", "--verbose", action="store_true")

    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0

    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )

    try:
        text = Path(args.config).read_text() if args.config else ""
        cfg = parse_config(text)
        out = _outdir(cfg, args.out)
        if args.command == "jost":
            return _cmd_jost(cfg, out)
        if args.command == "resonances":
            return _cmd_resonances(cfg, out)
        if args.command == "transform":
            return _cmd_transform(cfg, out)
        if args.command == "evolve":
            return _cmd_evolve(cfg, out)
        if args.command == "hardy":
            return _cmd_hardy(cfg, out)
        if args.command in ("density", "roundtrip", "asymmetry"):
            return _cmd_experiment(args.command, cfg, out)
        indices = None
        if args.criteria:
            indices = {int(x) for x in args.criteria.split(",")}
        return _cmd_verify(cfg, out, indices=indices)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except NumericalGuard as exc:
        print(f"numerical guard {exc.guard_name}: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    raise SystemExit(main())
