"""Correlation distances between position series.

Each series is centred and scaled to a unit vector; the distance between two
entities is the Euclidean distance of their unit vectors, which equals
``sqrt(2 * (1 - C))`` for the Pearson correlation ``C``.  Distances are
computed from the norm form because it stays accurate when ``C`` is close
to 1; correlations are then recovered as ``1 - d**2 / 2``.
"""
from __future__ import annotations

import io
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from crossnet import kernels
from crossnet.errors import LengthMismatch, OutOfRange, TooShort, ZeroVariance
from crossnet.ingest import PositionMatrix


def _as_series(values, name="series") -> np.ndarray:
    x = np.asarray(values, dtype=np.float64)
    if x.ndim != 1:
        raise ValueError(f"{name} must be one-dimensional")
    if x.size < 2:
        raise TooShort(f"{name} needs at least 2 observations, got {x.size}")
    if not np.all(np.isfinite(x)):
        raise ValueError(f"{name} contains non-finite values")
    return x


def normalize(series: Sequence[float]) -> np.ndarray:
    """Centre ``series`` and divide by ``sqrt(n * variance)`` (population variance).

    The result has zero mean and unit Euclidean norm.
    """
    x = _as_series(series)
    if np.all(x == x[0]):
        raise ZeroVariance("constant series has no defined correlation")
    centred = x - np.mean(x)
    scale = math.sqrt(x.size * np.mean(centred * centred))
    if scale == 0.0:  # pragma: no cover - only reachable through underflow
        raise ZeroVariance("series variance underflows to zero")
    return centred / scale


def correlation(x: Sequence[float], y: Sequence[float]) -> float:
    """Pearson correlation from population moments, clamped to [-1, 1]."""
    x = _as_series(x, "x")
    y = _as_series(y, "y")
    if x.size != y.size:
        raise LengthMismatch(f"series lengths differ: {x.size} != {y.size}")
    n = x.size
    mx = math.fsum(x) / n
    my = math.fsum(y) / n
    dx = x - mx
    dy = y - my
    vx = math.fsum(dx * dx)
    vy = math.fsum(dy * dy)
    if np.all(x == x[0]) or np.all(y == y[0]) or vx == 0.0 or vy == 0.0:
        raise ZeroVariance("correlation undefined for a constant series")
    c = math.fsum(dx * dy) / math.sqrt(vx * vy)
    return min(1.0, max(-1.0, c))


def distance(c: float) -> float:
    """Map a correlation in [-1, 1] to ``sqrt(2 * (1 - c))`` in [0, 2]."""
    if not -1.0 <= c <= 1.0:
        raise OutOfRange(f"correlation {c!r} outside [-1, 1]")
    return math.sqrt(2.0 * (1.0 - c))


@dataclass(frozen=True, eq=False)
class DistanceMatrix:
    """Symmetric distance matrix with zero diagonal, rows labelled by entity.

    ``correlations`` is ``None`` for matrices built directly from distances
    (see :meth:`from_distances`); those need not come from any correlation.
    """

    entities: tuple[str, ...]
    distances: np.ndarray
    correlations: np.ndarray | None = None

    def __post_init__(self):
        d = np.array(self.distances, dtype=np.float64)
        N = len(self.entities)
        if d.shape != (N, N):
            raise ValueError(f"distance matrix shape {d.shape} does not match {N} entities")
        if len(set(self.entities)) != N:
            raise ValueError("entity codes must be unique")
        if not np.all(np.isfinite(d)) or np.any(d < 0):
            raise ValueError("distances must be finite and non-negative")
        if not np.array_equal(d, d.T):
            raise ValueError("distance matrix must be symmetric")
        if np.any(np.diag(d) != 0):
            raise ValueError("distance matrix diagonal must be zero")
        d.flags.writeable = False
        object.__setattr__(self, "entities", tuple(self.entities))
        object.__setattr__(self, "distances", d)
        if self.correlations is not None:
            c = np.array(self.correlations, dtype=np.float64)
            c.flags.writeable = False
            object.__setattr__(self, "correlations", c)

    @classmethod
    def from_distances(cls, entities, distances) -> "DistanceMatrix":
        return cls(tuple(entities), distances)

    @property
    def size(self) -> int:
        return len(self.entities)

    def get(self, a: str, b: str) -> float:
        return float(self.distances[self.entities.index(a), self.entities.index(b)])

    def to_csv(self) -> str:
        return format_matrix_csv(self.entities, self.distances)


def format_matrix_csv(entities: Sequence[str], matrix: np.ndarray) -> str:
    buf = io.StringIO()
    buf.write("," + ",".join(entities) + "\n")
    for entity, row in zip(entities, matrix):
        buf.write(entity + "," + ",".join(format(float(v), ".17g") for v in row) + "\n")
    return buf.getvalue()


def normalized_vectors(m: PositionMatrix) -> np.ndarray:
    rows = []
    for entity, series in zip(m.entities, m.positions):
        try:
            rows.append(normalize(series))
        except ZeroVariance:
            raise ZeroVariance(
                f"entity {entity} has a constant position series over "
                f"{m.periods[0]}..{m.periods[-1]}",
                entity=entity,
                window=(m.periods[0], m.periods[-1]),
            ) from None
    return np.ascontiguousarray(np.vstack(rows))


def distance_matrix(m: PositionMatrix) -> DistanceMatrix:
    """Correlation distances over every period of ``m``; slice first for windows."""
    if len(m.entities) < 2:
        raise ValueError("need at least 2 entities")
    if len(m.periods) < 2:
        raise TooShort(f"need at least 2 periods, got {len(m.periods)}")
    rho = normalized_vectors(m)
    d = kernels.pair_distances(rho)
    c = 1.0 - 0.5 * d * d
    np.clip(c, -1.0, 1.0, out=c)
    return DistanceMatrix(m.entities, d, c)
