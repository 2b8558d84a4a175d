"""Deterministic file emitters: RFC-4180-style CSV, binary PGM (P5), and the
flat key = value manifest. Identical inputs produce byte-identical files."""

from __future__ import annotations

import hashlib
from pathlib import Path

import numpy as np

from .fieldgrid import ComplexField, GridSpec, phase_map

_FMT = "%.17g"


def _grid_columns(grid: GridSpec) -> tuple[np.ndarray, np.ndarray]:
    xx, yy = grid.mesh()
    return xx.ravel(), yy.ravel()


def write_value_csv(path: Path, grid: GridSpec, values: np.ndarray) -> None:
    """x,y,value rows in row-major order (y outer, x inner)."""
    xs, ys = _grid_columns(grid)
    data = np.column_stack([xs, ys, np.asarray(values, dtype=np.float64).ravel()])
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write("x,y,value\r\n")
        np.savetxt(fh, data, fmt=_FMT, delimiter=",", newline="\r\n")


def write_complex_csv(path: Path, field: ComplexField) -> None:
    """x,y,re,im rows in row-major order."""
    xs, ys = _grid_columns(field.grid)
    data = np.column_stack([xs, ys, field.values.real.ravel(), field.values.imag.ravel()])
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write("x,y,re,im\r\n")
        np.savetxt(fh, data, fmt=_FMT, delimiter=",", newline="\r\n")


def write_intensity_csv(path: Path, field: ComplexField) -> None:
    write_value_csv(path, field.grid, field.intensity())


def write_phase_csv(path: Path, field: ComplexField) -> None:
    write_value_csv(path, field.grid, phase_map(field).field.values.real)


def _write_pgm(path: Path, gray: np.ndarray) -> None:
    # image convention: first row is the +y edge of the grid
    flipped = np.ascontiguousarray(gray[::-1, :])
    h, w = flipped.shape
    with open(path, "wb") as fh:
        fh.write(f"P5\n{w} {h}\n255\n".encode("ascii"))
        fh.write(flipped.tobytes())


def write_intensity_pgm(path: Path, field: ComplexField) -> None:
    """8-bit grayscale, intensity normalized to its maximum."""
    intensity = field.intensity()
    peak = intensity.max()
    scaled = intensity / peak if peak > 0 else intensity
    _write_pgm(path, np.rint(255.0 * scaled).astype(np.uint8))


def write_phase_pgm(path: Path, field: ComplexField) -> None:
    """8-bit grayscale, phase mapped linearly from (-pi, pi] onto 0..255."""
    phases = phase_map(field).field.values.real
    _write_pgm(path, np.rint(255.0 * (phases + np.pi) / (2.0 * np.pi)).astype(np.uint8))


def write_cores_csv(path: Path, cores) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write("x,y,charge,r,theta\r\n")
        for c in cores:
            fh.write(
                f"{_FMT % c.x},{_FMT % c.y},{c.charge},{_FMT % c.radius},{_FMT % c.angle}\r\n"
            )


def write_table_csv(path: Path, header: list[str], rows: list[tuple]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(",".join(header) + "\r\n")
        for row in rows:
            cells = [str(v) if isinstance(v, int) else _FMT % v for v in row]
            fh.write(",".join(cells) + "\r\n")


def write_text(path: Path, lines: list[str]) -> None:
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def sha256_of(path: Path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            digest.update(chunk)
    return digest.hexdigest()


def grid_hash(grid: GridSpec) -> str:
    digest = hashlib.sha256()
    digest.update(f"{grid.nx} {grid.ny} {grid.half_extent!r}".encode("ascii"))
    digest.update(grid.xs().tobytes())
    digest.update(grid.ys().tobytes())
    return digest.hexdigest()
