"""Batch front end: named experiments driven by a plain-text config.

Experiments
-----------
propagate       superposition-beam intensity and phase maps at distance z
exchange        closed-form probe fields for a single uniform input probe
oracle-compare  RK4 integration of the raw probe equations against the
                closed forms; nonzero exit status on tolerance breach
detect          vortex census of the superposition beam (cores table)
dispersion      growth rate and slowdown versus two-photon detuning
sweep           one detect-style sub-run per swept value plus an aggregate

Exit status: 0 success, 1 validation error, 2 oracle tolerance breach,
3 I/O error. Data files are byte-deterministic for identical configs.
"""

from __future__ import annotations

import argparse
import sys
import time
import warnings
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from . import __version__, doublet, outputs, singlet, vortex
from .config import RunConfig, format_config, parse_config, with_overrides
from .errors import AdiabaticityWarning, ConfigError, SimulationError
from .fieldgrid import ComplexField, uniform_field
from .oracle import IntegratorConfig, integrate_doublet, integrate_singlet


@dataclass(frozen=True)
class FileRecord:
    path: str
    sha256: str
    size: int


@dataclass(frozen=True)
class RunManifest:
    version: str
    config: RunConfig
    grid_hash: str
    duration_s: float
    files: tuple[FileRecord, ...]
    notes: tuple[tuple[str, str], ...]


def _emit(outdir: Path, name: str, writer, *args) -> Path:
    path = outdir / name
    path.parent.mkdir(parents=True, exist_ok=True)
    writer(path, *args)
    return path


def _active_params(config: RunConfig):
    return config.singlet.params() if config.scheme == "singlet" else config.doublet.params()


def _beam_at(config: RunConfig, z: float | None = None) -> ComplexField:
    if config.scheme == "singlet":
        return singlet.superposition_beam(config.singlet.params(), config.grid, z=z)
    return doublet.superposition_beam_doublet(config.doublet.params(), config.grid, z=z)


def _pump_total_sq(config: RunConfig, r: np.ndarray) -> np.ndarray:
    if config.scheme == "singlet":
        p = config.singlet.params()
        e1, e2 = singlet.pump_strengths(p, r)
        return e1 * e1 + e2 * e2
    p = config.doublet.params()
    g1_sq, g2_sq = doublet._grouped_radial(p, r)
    return g1_sq + g2_sq


def _peak_radius(config: RunConfig) -> float:
    r = np.linspace(0.0, config.grid.half_extent, 4097)
    return float(r[np.argmax(_pump_total_sq(config, r))])


def _slowdown_at(config: RunConfig, radius: float) -> float:
    if config.scheme == "singlet":
        return singlet.group_slowdown(config.singlet.params(), radius)
    return doublet.group_slowdown_doublet(config.doublet.params(), radius)


def _run_propagate(config: RunConfig, outdir: Path):
    beam = _beam_at(config)
    files = [
        _emit(outdir, "beam_intensity.csv", outputs.write_intensity_csv, beam),
        _emit(outdir, "beam_phase.csv", outputs.write_phase_csv, beam),
        _emit(outdir, "beam_intensity.pgm", outputs.write_intensity_pgm, beam),
        _emit(outdir, "beam_phase.pgm", outputs.write_phase_pgm, beam),
    ]
    return files, [], False


def _run_detect(config: RunConfig, outdir: Path):
    beam0 = _beam_at(config, z=0.0)
    beam = _beam_at(config)
    cores0 = vortex.detect_cores(beam0)
    cores = vortex.detect_cores(beam)
    shift = 0.0
    if cores0 and len(cores0) == len(cores):
        shift = max(
            min(np.hypot(c.x - d.x, c.y - d.y) for d in cores0) for c in cores
        )
    stats = vortex.ring_statistics(cores)
    files = [
        _emit(outdir, "cores.csv", outputs.write_cores_csv, cores),
        _emit(outdir, "beam_intensity.csv", outputs.write_intensity_csv, beam),
        _emit(outdir, "beam_phase.csv", outputs.write_phase_csv, beam),
        _emit(outdir, "beam_intensity.pgm", outputs.write_intensity_pgm, beam),
        _emit(outdir, "beam_phase.pgm", outputs.write_phase_pgm, beam),
    ]
    notes = [
        ("cores.count", str(stats.count)),
        ("cores.mean_radius", repr(stats.mean_radius)),
        ("cores.radius_spread", repr(stats.radius_spread)),
        ("cores.spacing_uniformity", repr(stats.spacing_uniformity)),
        ("cores.count_z0", str(len(cores0))),
        ("cores.max_shift_from_z0", repr(shift)),
    ]
    return files, notes, False


def _exchange_fields(config: RunConfig):
    if config.scheme == "singlet":
        return singlet.vortex_exchange(config.singlet.params(), config.grid, config.amplitude)
    return doublet.vortex_exchange_doublet(config.doublet.params(), config.grid, config.amplitude)


def _run_exchange(config: RunConfig, outdir: Path):
    p1, p2 = _exchange_fields(config)
    r, _ = config.grid.polar()
    mag2 = p2.magnitude()
    ring = float(r.ravel()[int(np.argmax(mag2))])
    cell = max(config.grid.dx, config.grid.dy)
    ring = min(max(ring, 4.0 * cell), 0.9 * config.grid.half_extent)
    charge = vortex.net_charge(p2, ring) if mag2.max() > 0 else 0
    if config.scheme == "singlet":
        expected = config.singlet.l2 - config.singlet.l1
    else:
        expected = -config.doublet.l
    files = [
        _emit(outdir, "probe1_intensity.csv", outputs.write_intensity_csv, p1),
        _emit(outdir, "probe1_phase.csv", outputs.write_phase_csv, p1),
        _emit(outdir, "probe2_intensity.csv", outputs.write_intensity_csv, p2),
        _emit(outdir, "probe2_phase.csv", outputs.write_phase_csv, p2),
        _emit(outdir, "probe1_intensity.pgm", outputs.write_intensity_pgm, p1),
        _emit(outdir, "probe1_phase.pgm", outputs.write_phase_pgm, p1),
        _emit(outdir, "probe2_intensity.pgm", outputs.write_intensity_pgm, p2),
        _emit(outdir, "probe2_phase.pgm", outputs.write_phase_pgm, p2),
        _emit(
            outdir,
            "exchange_report.txt",
            outputs.write_text,
            [
                f"ring_radius = {ring!r}",
                f"probe2_net_charge = {charge}",
                f"expected_charge = {expected}",
            ],
        ),
    ]
    notes = [("exchange.probe2_net_charge", str(charge)), ("exchange.ring_radius", repr(ring))]
    return files, notes, False


def _closed_form_pair(config: RunConfig, p1_0: ComplexField, p2_0: ComplexField):
    if config.scheme == "singlet":
        params = config.singlet.params()
        modes = singlet.superpose(p1_0, p2_0, params)
        return singlet.reconstruct(singlet.propagate(modes, params), params)
    params = config.doublet.params()
    modes = doublet.superpose_doublet(p1_0, p2_0, params)
    return doublet.reconstruct_doublet(doublet.propagate_doublet(modes, params), params)


def _max_rel_dev(numeric: ComplexField, closed: ComplexField, floor: float = 1e-9) -> float:
    ref = np.abs(closed.values)
    mask = ref > floor
    if not np.any(mask):
        return 0.0
    return float((np.abs(numeric.values - closed.values)[mask] / ref[mask]).max())


def _run_oracle_compare(config: RunConfig, outdir: Path):
    params = _active_params(config)
    cfg = IntegratorConfig(steps=config.steps)
    integrate = integrate_singlet if config.scheme == "singlet" else integrate_doublet
    one = uniform_field(config.grid, config.amplitude)
    zero = uniform_field(config.grid, 0.0)

    devs = {}
    n1, n2 = integrate(one, zero, params, cfg)
    if config.scheme == "singlet":
        c1, c2 = singlet.vortex_exchange(params, config.grid, config.amplitude)
    else:
        c1, c2 = doublet.vortex_exchange_doublet(params, config.grid, config.amplitude)
    devs["single_input.probe1"] = _max_rel_dev(n1, c1)
    devs["single_input.probe2"] = _max_rel_dev(n2, c2)

    m1, m2 = integrate(one, one, params, cfg)
    t1, t2 = _closed_form_pair(config, one, one)
    devs["dual_input.probe1"] = _max_rel_dev(m1, t1)
    devs["dual_input.probe2"] = _max_rel_dev(m2, t2)

    worst = max(devs.values())
    breach = worst > config.tolerance
    lines = [f"steps = {config.steps}", f"tolerance = {config.tolerance!r}"]
    lines += [f"max_rel_dev.{name} = {value!r}" for name, value in sorted(devs.items())]
    lines.append(f"worst = {worst!r}")
    lines.append(f"within_tolerance = {not breach}")
    files = [_emit(outdir, "oracle_report.txt", outputs.write_text, lines)]
    notes = [("oracle.worst_rel_dev", repr(worst)), ("oracle.within_tolerance", str(not breach))]
    return files, notes, breach


def _kappa_at(config: RunConfig, radius: float) -> complex:
    if config.scheme == "singlet":
        return singlet.kappa(config.singlet.params(), radius)
    return doublet.kappa_doublet(config.doublet.params(), radius)


def _run_dispersion(config: RunConfig, outdir: Path):
    d = config.dispersion
    radius = d.radius_value()
    if radius is None:
        radius = _peak_radius(config)
    values = np.linspace(d.delta_2f_min, d.delta_2f_max, d.samples)
    rows = []
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", AdiabaticityWarning)
        for d2f in values:
            if config.scheme == "singlet":
                variant = replace(config, singlet=replace(config.singlet, delta_2f=float(d2f)))
            else:
                variant = replace(config, doublet=replace(config.doublet, delta_2f=float(d2f)))
            k = _kappa_at(variant, radius)
            rows.append((float(d2f), k.real, k.imag, _slowdown_at(variant, radius)))
    files = [
        _emit(outdir, "dispersion.csv", outputs.write_table_csv,
              ["delta_2f", "re_kappa", "im_kappa", "slowdown"], rows),
    ]
    notes = [("dispersion.radius", repr(radius))]
    return files, notes, False


def _sweep_variant(config: RunConfig, value: float) -> RunConfig:
    axis = config.sweep.axis
    if config.scheme == "singlet":
        s = config.singlet
        if axis == "l1":
            s = replace(s, l1=int(value))
        elif axis == "strength_ratio":
            s = replace(s, strength1=value * s.strength2)
        elif axis == "delta_2f":
            s = replace(s, delta_2f=value)
        elif axis == "z":
            s = replace(s, z=value)
        return replace(config, singlet=s)
    dset = config.doublet
    if axis == "l1":
        dset = replace(dset, l=int(value))
    elif axis == "strength_ratio":
        dset = replace(dset, strength1=value * dset.strength2)
    elif axis == "delta_2f":
        dset = replace(dset, delta_2f=value)
    elif axis == "delta":
        dset = replace(dset, delta=value)
    elif axis == "z":
        dset = replace(dset, z=value)
    return replace(config, doublet=dset)


def _format_sweep_value(value: float) -> str:
    return str(int(value)) if value == int(value) else repr(value)


def _run_sweep(config: RunConfig, outdir: Path):
    if config.sweep is None:
        raise ConfigError("experiment = sweep requires a [sweep] section")
    files = []
    rows = []
    notes = []
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", AdiabaticityWarning)
        for value in config.sweep.values:
            variant = _sweep_variant(config, value)
            subdir = outdir / f"{config.sweep.axis}_{_format_sweep_value(value)}"
            beam = _beam_at(variant)
            cores = vortex.detect_cores(beam)
            stats = vortex.ring_statistics(cores)
            slowdown = _slowdown_at(variant, _peak_radius(variant))
            files.append(_emit(subdir, "cores.csv", outputs.write_cores_csv, cores))
            rows.append((float(value), stats.count, stats.mean_radius, slowdown))
    files.append(
        _emit(outdir, "sweep.csv", outputs.write_table_csv,
              ["value", "count", "mean_radius", "slowdown"], rows)
    )
    return files, notes, False


_RUNNERS = {
    "propagate": _run_propagate,
    "exchange": _run_exchange,
    "oracle-compare": _run_oracle_compare,
    "detect": _run_detect,
    "dispersion": _run_dispersion,
    "sweep": _run_sweep,
}


def run_experiment(config: RunConfig, quiet: bool = False) -> tuple[RunManifest, bool]:
    """Execute the configured experiment; emits data files plus a manifest
    that lists every emitted file with its checksum."""
    outdir = Path(config.output_dir)
    outdir.mkdir(parents=True, exist_ok=True)
    start = time.perf_counter()
    files, notes, breach = _RUNNERS[config.experiment](config, outdir)
    duration = time.perf_counter() - start

    records = tuple(
        FileRecord(
            path=str(p.relative_to(outdir)),
            sha256=outputs.sha256_of(p),
            size=p.stat().st_size,
        )
        for p in files
    )
    manifest = RunManifest(
        version=__version__,
        config=config,
        grid_hash=outputs.grid_hash(config.grid),
        duration_s=duration,
        files=records,
        notes=tuple(notes),
    )
    _write_manifest(outdir / "manifest.txt", manifest)
    if not quiet:
        print(f"{config.experiment}: wrote {len(records)} files to {outdir}")
        for key, value in notes:
            print(f"  {key} = {value}")
        if breach:
            print(f"  TOLERANCE BREACH (see oracle_report.txt)", file=sys.stderr)
    return manifest, breach


def _write_manifest(path: Path, manifest: RunManifest) -> None:
    lines = [
        f"tool = vortexgain {manifest.version}",
        f"duration_s = {manifest.duration_s!r}",
        f"grid.sha256 = {manifest.grid_hash}",
    ]
    for section_line in format_config(manifest.config).splitlines():
        if not section_line:
            continue
        if section_line.startswith("["):
            prefix = section_line.strip("[]")
            continue
        lines.append(f"config.{prefix}.{section_line}")
    for key, value in manifest.notes:
        lines.append(f"{key} = {value}")
    lines.append(f"files = {len(manifest.files)}")
    for i, record in enumerate(manifest.files):
        lines.append(f"file.{i}.path = {record.path}")
        lines.append(f"file.{i}.sha256 = {record.sha256}")
        lines.append(f"file.{i}.bytes = {record.size}")
    outputs.write_text(path, lines)


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="vortexgain",
        description="Probe propagation and off-axis vortex analysis in double-Raman gain media",
    )
    parser.add_argument("--config", required=True, metavar="PATH", help="run configuration file")
    parser.add_argument("--output", metavar="DIR", help="override [run] output_dir")
    parser.add_argument("--experiment", metavar="NAME", help="override [run] experiment")
    parser.add_argument("--steps", type=int, metavar="N", help="override [oracle] steps")
    parser.add_argument("--quiet", action="store_true", help="suppress progress output and warnings")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    args = parser.parse_args(argv)

    if args.quiet:
        warnings.simplefilter("ignore")

    try:
        text = Path(args.config).read_text(encoding="utf-8")
    except OSError as exc:
        print(f"cannot read config: {exc}", file=sys.stderr)
        return 3

    try:
        config = parse_config(text)
        config = with_overrides(
            config, output_dir=args.output, experiment=args.experiment, steps=args.steps
        )
    except ConfigError as exc:
        print(f"invalid config: {exc}", file=sys.stderr)
        return 1

    try:
        _, breach = run_experiment(config, quiet=args.quiet)
    except ConfigError as exc:
        print(f"invalid config: {exc}", file=sys.stderr)
        return 1
    except SimulationError as exc:
        print(f"run failed: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"I/O failure: {exc}", file=sys.stderr)
        return 3
    return 2 if breach else 0


if __name__ == "__main__":
    raise SystemExit(main())
