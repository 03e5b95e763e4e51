"""Instance generators and file I/O.

Generated corpora are part of the external contract: the same GeneratorSpec
must produce the same instance on every platform, byte for byte once
written.  To that end randomness comes from an explicitly specified 64-bit
mixing generator (the splitmix64 finalizer applied to a counter stream; see
`random_stream`) rather than from platform RNGs, and point placement uses
only +, -, *, / and sqrt, all of which are correctly rounded under IEEE 754.

File format (JSON, one object per file):

    {"kind": "points", "dim": D, "points": [[x, y, ...], ...]}
    {"kind": "matrix", "matrix": [[0.0, ...], ...]}

Matrix files must be symmetric with a zero diagonal; this is checked at
load time.  The triangle inequality is checked only when asked (O(n^3)).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .metric_core import MetricPath

KINDS = ("euclidean_uniform", "collinear", "convex_polygon", "clustered", "random_metric")

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)
_INV_2_53 = float(2.0 ** -53)


@dataclass(frozen=True)
class GeneratorSpec:
    """What to generate: kind, size, dimension, seed, kind-specific reals."""

    kind: str
    n: int
    dim: int = 2
    seed: int = 0
    params: dict[str, float] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ValueError(f"unknown generator kind {self.kind!r}; expected one of {KINDS}")
        if self.n < 1:
            raise ValueError(f"n must be >= 1, got {self.n}")
        if self.dim < 1:
            raise ValueError(f"dim must be >= 1, got {self.dim}")


def random_stream(seed: int, count: int, offset: int = 0) -> np.ndarray:
    """`count` uniform floats in [0, 1) from the documented generator.

    Word k of the stream (k counted from 0, shifted by `offset`) is
    splitmix64's finalizer applied to seed + (k+1) * 0x9E3779B97F4A7C15,
    with all arithmetic modulo 2^64; the top 53 bits become the float.
    """
    idx = np.arange(offset + 1, offset + count + 1, dtype=np.uint64)
    with np.errstate(over="ignore"):
        z = np.uint64(seed & 0xFFFFFFFFFFFFFFFF) + idx * _GOLDEN
        z ^= z >> np.uint64(30)
        z *= _MIX1
        z ^= z >> np.uint64(27)
        z *= _MIX2
        z ^= z >> np.uint64(31)
    return (z >> np.uint64(11)).astype(np.float64) * _INV_2_53


def generate(spec: GeneratorSpec) -> MetricPath:
    """Build the instance described by `spec` (deterministic)."""
    p = spec.params
    if spec.kind == "euclidean_uniform":
        scale = p.get("scale", 1.0)
        u = random_stream(spec.seed, spec.n * spec.dim)
        pts = u.reshape(spec.n, spec.dim) * scale
        return MetricPath(points=pts)

    if spec.kind == "collinear":
        spacing = p.get("spacing", 1.0)
        pts = np.zeros((spec.n, spec.dim), dtype=np.float64)
        pts[:, 0] = np.arange(spec.n, dtype=np.float64) * spacing
        return MetricPath(points=pts)

    if spec.kind == "convex_polygon":
        if spec.dim != 2:
            raise ValueError("convex_polygon requires dim=2")
        radius = p.get("radius", 1.0)
        spread = p.get("spread", 4.0)
        # Rational circle points: t -> ((1-t^2)/(1+t^2), 2t/(1+t^2)) walks
        # monotonically around the unit circle as t grows, so equally
        # spaced t values give vertices in convex position, in hull order,
        # without transcendental functions.
        if spec.n == 1:
            t = np.zeros(1)
        else:
            t = np.arange(spec.n, dtype=np.float64) / (spec.n - 1) * spread - spread / 2.0
        denom = 1.0 + t * t
        pts = np.stack([(1.0 - t * t) / denom, 2.0 * t / denom], axis=1) * radius
        return MetricPath(points=pts)

    if spec.kind == "clustered":
        clusters = max(1, int(p.get("clusters", 3.0)))
        spread = p.get("spread", 0.05)
        scale = p.get("scale", 1.0)
        centers = random_stream(spec.seed, clusters * spec.dim).reshape(clusters, spec.dim) * scale
        offs = random_stream(spec.seed, spec.n * spec.dim, offset=clusters * spec.dim)
        offs = (offs.reshape(spec.n, spec.dim) - 0.5) * (2.0 * spread)
        # Contiguous blocks of the path sit in the same cluster.
        which = np.minimum((np.arange(spec.n) * clusters) // spec.n, clusters - 1)
        return MetricPath(points=centers[which] + offs)

    if spec.kind == "random_metric":
        low = p.get("low", 0.5)
        high = p.get("high", 1.5)
        if not (0.0 <= low <= high):
            raise ValueError(f"random_metric needs 0 <= low <= high, got ({low}, {high})")
        n = spec.n
        m = n * (n - 1) // 2
        u = random_stream(spec.seed, m) * (high - low) + low
        mat = np.zeros((n, n), dtype=np.float64)
        if n > 1:
            iu = np.triu_indices(n, k=1)
            mat[iu] = u
            mat = mat + mat.T
        # Shortest path closure restores the triangle inequality while
        # keeping symmetry and the zero diagonal exactly.
        for k in range(n):
            np.minimum(mat, mat[:, k, None] + mat[None, k, :], out=mat)
        return MetricPath(matrix=mat)

    raise AssertionError(f"unhandled kind {spec.kind!r}")


def read_instance(file_path: str, validate_triangle: bool = False) -> MetricPath:
    """Load an instance file; raises ValueError with context on bad input."""
    with open(file_path, "r", encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValueError(f"{file_path}: not valid JSON: {exc}") from None
    if not isinstance(doc, dict) or "kind" not in doc:
        raise ValueError(f"{file_path}: expected an object with a 'kind' field")
    kind = doc["kind"]
    if kind == "points":
        for key in ("dim", "points"):
            if key not in doc:
                raise ValueError(f"{file_path}: points instance missing '{key}'")
        pts = doc["points"]
        if not isinstance(pts, list) or not pts:
            raise ValueError(f"{file_path}: 'points' must be a non-empty list")
        dim = doc["dim"]
        for row_no, row in enumerate(pts, start=1):
            if not isinstance(row, list) or len(row) != dim:
                raise ValueError(f"{file_path}: point {row_no} does not have dim={dim} coordinates")
        try:
            return MetricPath(points=pts)
        except ValueError as exc:
            raise ValueError(f"{file_path}: {exc}") from None
    if kind == "matrix":
        if "matrix" not in doc:
            raise ValueError(f"{file_path}: matrix instance missing 'matrix'")
        try:
            return MetricPath(matrix=doc["matrix"], validate_triangle=validate_triangle)
        except ValueError as exc:
            raise ValueError(f"{file_path}: {exc}") from None
    raise ValueError(f"{file_path}: unknown instance kind {kind!r}")


def write_instance(path: MetricPath, file_path: str) -> None:
    """Serialize an instance; equal instances produce byte-identical files."""
    if path._use_matrix:
        doc = {"kind": "matrix", "matrix": path._mat[1:, 1:].tolist()}
    else:
        doc = {"kind": "points", "dim": path.dim, "points": path._pts[1:].tolist()}
    with open(file_path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, sort_keys=True, separators=(",", ":"))
        fh.write("\n")
