"""Artifact writing: CSV tables, plain PGM heatmaps, JSON, and a checksummed manifest."""

from __future__ import annotations

import csv
import hashlib
import io
import json
import subprocess
from pathlib import Path

import numpy as np


def git_describe() -> str:
    here = Path(__file__).resolve().parent
    try:
        out = subprocess.run(["git", "describe", "--always", "--dirty"], cwd=here,
                             capture_output=True, text=True, timeout=10)
    except (OSError, subprocess.SubprocessError):
        return "unknown"
    return out.stdout.strip() or "unknown"


def fmt(x) -> str:
    if isinstance(x, (float, np.floating)):
        return repr(float(x))
    return str(x)


def csv_bytes(header, rows) -> bytes:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        if isinstance(r, dict):
            r = [r[h] for h in header]
        w.writerow([fmt(x) for x in r])
    return buf.getvalue().encode()


def pgm_bytes(a, levels: int = 255) -> bytes:
    """Plain P2 image of a 2-D array scaled min..max to 0..levels; NaN maps to 0."""
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.size == 0:
        raise ValueError("heatmap needs a nonempty 2-D array")
    fin = np.isfinite(a)
    lo = float(a[fin].min()) if fin.any() else 0.0
    hi = float(a[fin].max()) if fin.any() else 0.0
    span = hi - lo if hi > lo else 1.0
    q = np.zeros(a.shape, dtype=int)
    q[fin] = np.rint((a[fin] - lo) / span * levels).astype(int)
    lines = ["P2", f"# min {lo!r} max {hi!r}", f"{a.shape[1]} {a.shape[0]}", str(levels)]
    for row in q:
        cur = ""
        for v in row:
            s = str(v)
            if len(cur) + len(s) + 1 > 70:
                lines.append(cur)
                cur = s
            else:
                cur = f"{cur} {s}" if cur else s
        lines.append(cur)
    return ("\n".join(lines) + "\n").encode()


def read_pgm(path) -> np.ndarray:
    toks = [t for line in Path(path).read_text().splitlines() if not line.startswith("#") for t in line.split()]
    if toks[0] != "P2":
        raise ValueError("not a plain PGM file")
    w, h = int(toks[1]), int(toks[2])
    return np.array(toks[4:4 + w * h], dtype=int).reshape(h, w)


def sha256(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


class OutputDir:
    """Single-writer artifact directory; refuses to overwrite unless force."""

    def __init__(self, path, force: bool = False):
        self.path = Path(path)
        self.force = force
        self.files: dict = {}
        if self.path.exists() and any(self.path.iterdir()) and not force:
            raise FileExistsError(f"{self.path} is not empty; pass --force to overwrite")
        self.path.mkdir(parents=True, exist_ok=True)

    def _write(self, name: str, data: bytes) -> Path:
        p = self.path / name
        if name in self.files:
            raise ValueError(f"{name} written twice")
        if p.exists() and not self.force:
            raise FileExistsError(f"{p} exists; pass --force to overwrite")
        p.write_bytes(data)
        self.files[name] = sha256(data)
        return p

    def csv(self, name: str, header, rows) -> Path:
        return self._write(name, csv_bytes(header, rows))

    def pgm(self, name: str, a) -> Path:
        return self._write(name, pgm_bytes(a))

    def json(self, name: str, obj) -> Path:
        return self._write(name, (json.dumps(obj, indent=2, sort_keys=True) + "\n").encode())

    def text(self, name: str, s: str) -> Path:
        return self._write(name, s.encode())

    def manifest(self, command: str, config: dict, seed) -> Path:
        body = {
            "command": command,
            "config": config,
            "seed": seed,
            "build": git_describe(),
            "files": dict(sorted(self.files.items())),
        }
        return self._write("manifest.json", (json.dumps(body, indent=2, sort_keys=True) + "\n").encode())


def verify_manifest(path) -> list:
    """Names whose checksum no longer matches; empty when all match."""
    path = Path(path)
    body = json.loads(path.read_text())
    bad = []
    for name, digest in body["files"].items():
        f = path.parent / name
        if not f.exists() or sha256(f.read_bytes()) != digest:
            bad.append(name)
    return bad
