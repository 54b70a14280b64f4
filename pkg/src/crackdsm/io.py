"""Text file formats (scene, far-field tensor, indicator map) and manifests.

All writers are atomic (temp file + rename) and deterministic: floats use
%.17g so write -> read -> write round-trips byte-identically.
"""

from __future__ import annotations

import json
import os
import tempfile
from pathlib import Path

import numpy as np

from .errors import InputMismatchError
from .forward import AcquisitionConfig, FarFieldTensor
from .imaging import ImagingGrid, IndicatorMap
from .scene import Crack, Scene


def _fmt(x):
    return format(float(x), ".17g")


def atomic_write_bytes(path, data):
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or Path("."), prefix=path.name + ".")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def atomic_write_text(path, text):
    atomic_write_bytes(path, text.encode("utf-8"))


# ---------------------------------------------------------------- scene files

_SCENE_HEADER = """\
# crack scene (dimensionless length units)
# fields per line: center_x center_y half_length rotation_radians
# note: cracks given as rotated diagonal parameterizations are encoded with
#   center = rotation applied to the pre-rotation midpoint,
#   angle  = pi/4 + rotation angle,
#   half_length taken as the parameter half-range (arclength-speed sqrt(2)
#   is not folded in; physical length may differ by that factor).
"""


def write_scene(path, scene):
    lines = [_SCENE_HEADER]
    for c in scene.cracks:
        lines.append(f"{_fmt(c.center[0])} {_fmt(c.center[1])} "
                     f"{_fmt(c.half_length)} {_fmt(c.rotation)}\n")
    atomic_write_text(path, "".join(lines))


def read_scene(path):
    cracks = []
    for raw in Path(path).read_text().splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 4:
            raise InputMismatchError(f"bad scene line: {raw!r}")
        cx, cy, half, rot = (float(p) for p in parts)
        cracks.append(Crack((cx, cy), half, rot))
    return Scene(tuple(cracks))


# --------------------------------------------------------------- tensor files


def write_tensor(path, tensor):
    cfg = tensor.config
    lines = ["# far-field tensor v1\n"]
    lines.append(f"F {cfg.n_freq}\n")
    lines.append(f"L {cfg.n_incident}\n")
    lines.append(f"N {cfg.n_obs}\n")
    lines.append("wavenumbers " + " ".join(_fmt(k) for k in cfg.wavenumbers) + "\n")
    lines.append("incident_angles " + " ".join(_fmt(a) for a in cfg.incident_angles) + "\n")
    lines.append("data f l n re im\n")
    for f in range(cfg.n_freq):
        for l in range(cfg.n_incident):
            for n in range(cfg.n_obs):
                v = tensor.values[f, l, n]
                lines.append(f"{f} {l} {n} {_fmt(v.real)} {_fmt(v.imag)}\n")
    atomic_write_text(path, "".join(lines))


def read_tensor(path):
    header = {}
    rows = []
    in_data = False
    for raw in Path(path).read_text().splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if in_data:
            rows.append(line.split())
            continue
        key, _, rest = line.partition(" ")
        if key == "data":
            in_data = True
        else:
            header[key] = rest.split()
    F = int(header["F"][0])
    L = int(header["L"][0])
    N = int(header["N"][0])
    cfg = AcquisitionConfig(
        wavenumbers=tuple(float(k) for k in header["wavenumbers"]),
        n_obs=N,
        incident_angles=tuple(float(a) for a in header["incident_angles"]))
    values = np.zeros((F, L, N), dtype=complex)
    for parts in rows:
        f, l, n = int(parts[0]), int(parts[1]), int(parts[2])
        values[f, l, n] = float(parts[3]) + 1j * float(parts[4])
    return FarFieldTensor(values, cfg)


# ------------------------------------------------------------------ map files


def write_map_csv(path, imap):
    g = imap.grid
    lines = ["# indicator-map-csv v1\n",
             "# x_min,x_max,y_min,y_max,nx,ny\n",
             f"{_fmt(g.x_min)},{_fmt(g.x_max)},{_fmt(g.y_min)},{_fmt(g.y_max)},{g.nx},{g.ny}\n"]
    for row in imap.values:  # y ascending, row-major
        lines.append(",".join(_fmt(v) for v in row) + "\n")
    atomic_write_text(path, "".join(lines))


def read_map_csv(path):
    lines = [ln for ln in Path(path).read_text().splitlines()
             if ln.strip() and not ln.startswith("#")]
    hx = lines[0].split(",")
    grid = ImagingGrid(float(hx[0]), float(hx[1]), float(hx[2]), float(hx[3]),
                       int(hx[4]), int(hx[5]))
    values = np.array([[float(v) for v in ln.split(",")] for ln in lines[1:]])
    if values.shape != grid.shape:
        raise InputMismatchError(
            f"map data shape {values.shape} does not match header {grid.shape}")
    return IndicatorMap(grid, values)


def write_map_pgm(path, imap):
    """16-bit PGM, values scaled by 65535, rows written top (y max) to bottom."""
    g = imap.grid
    scaled = np.clip(np.round(imap.values * 65535.0), 0, 65535).astype(np.uint16)
    header = f"P5\n{g.nx} {g.ny}\n65535\n".encode("ascii")
    body = scaled[::-1].astype(">u2").tobytes()
    atomic_write_bytes(path, header + body)


# ------------------------------------------------------------------ manifests


def write_manifest(path, payload):
    atomic_write_text(path, json.dumps(payload, indent=2, sort_keys=True) + "\n")


def read_manifest(path):
    return json.loads(Path(path).read_text())
