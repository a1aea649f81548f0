"""Structure beyond the MST: thresholded graphs, redundancy and residuality.

With ``L`` the final single-link merge height, a pair of entities counts as
connected when ``d <= L``.  The boundary is inclusive, so every MST edge
survives the threshold and the thresholded graph is always connected.
"""
from __future__ import annotations

import io
import json
import warnings
from dataclasses import dataclass

import numpy as np

from crossnet import kernels
from crossnet._dot import render_graph
from crossnet.cluster import single_link, threshold_L
from crossnet.errors import EmptyDenominator, NearZeroDistanceWarning, WindowTooLong, ZeroVariance
from crossnet.ingest import PositionMatrix
from crossnet.metric import DistanceMatrix, distance_matrix

DEFAULT_WINDOW = 56
DISTANCE_FLOOR = 1e-9


def _check_threshold(L: float) -> float:
    L = float(L)
    if not L >= 0.0:
        raise ValueError(f"threshold must be a non-negative number, got {L!r}")
    return L


@dataclass(frozen=True, eq=False)
class ProjectedGraph:
    entities: tuple[str, ...]
    weights: np.ndarray
    threshold: float


@dataclass(frozen=True, eq=False)
class BooleanGraph:
    entities: tuple[str, ...]
    adjacency: np.ndarray

    @property
    def edge_count(self) -> int:
        return int(np.triu(self.adjacency, 1).sum())

    def to_dot(self) -> str:
        iu, ju = np.nonzero(np.triu(self.adjacency, 1))
        nodes = [(e, {}) for e in self.entities]
        edges = [(self.entities[i], self.entities[j], {}) for i, j in zip(iu, ju)]
        return render_graph("boolean", nodes, edges)


@dataclass(frozen=True)
class TopologySummary:
    period_from: str | None
    period_to: str | None
    N: int
    L: float
    M: int
    S: int
    R: float

    def to_dict(self) -> dict:
        return {
            "period_from": self.period_from,
            "period_to": self.period_to,
            "N": self.N,
            "L": self.L,
            "M": self.M,
            "S": self.S,
            "R": self.R,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"


@dataclass(frozen=True)
class ResidualitySeries:
    window: int
    points: tuple[tuple[str, float], ...]

    @property
    def values(self) -> np.ndarray:
        return np.array([r for _, r in self.points])

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("window_end,R\n")
        for label, r in self.points:
            buf.write(f"{label},{r:.17g}\n")
        return buf.getvalue()


def project(d: DistanceMatrix, L: float) -> ProjectedGraph:
    """Keep distances at or below ``L``; everything else becomes a null arc."""
    L = _check_threshold(L)
    D = d.distances
    w = np.where(D <= L, D, 0.0)
    np.fill_diagonal(w, 0.0)
    return ProjectedGraph(d.entities, w, L)


def booleanize(b: ProjectedGraph) -> BooleanGraph:
    a = (b.weights != 0).astype(np.int8)
    np.fill_diagonal(a, 0)
    return BooleanGraph(b.entities, a)


def boolean_graph(d: DistanceMatrix, L: float) -> BooleanGraph:
    """Adjacency of pairs with ``d <= L``.

    Unlike ``booleanize(project(d, L))`` this also keeps zero-distance
    pairs, which a weight matrix cannot tell apart from null arcs.
    """
    L = _check_threshold(L)
    a = (d.distances <= L).astype(np.int8)
    np.fill_diagonal(a, 0)
    return BooleanGraph(d.entities, a)


def redundancy(d: DistanceMatrix, L: float) -> tuple[int, int]:
    """``(M, S)``: unordered pairs with ``d <= L`` and the excess over a spanning tree."""
    L = _check_threshold(L)
    N = d.size
    iu, ju = np.triu_indices(N, 1)
    M = int(np.count_nonzero(d.distances[iu, ju] <= L))
    return M, M - (N - 1)


def residuality(d: DistanceMatrix, L: float, eps: float = DISTANCE_FLOOR) -> float:
    """Sum of ``1/d`` over pairs above ``L`` divided by the sum over pairs at or below it.

    Distances under ``eps`` are inverted as ``eps`` and reported through a
    :class:`NearZeroDistanceWarning`.
    """
    L = _check_threshold(L)
    D = np.ascontiguousarray(d.distances)
    above, below, m, clamped = kernels.inverse_sums(D, L, float(eps))
    if m == 0:
        raise EmptyDenominator(f"no pair lies at or below threshold {L!r}")
    if clamped:
        iu, ju = np.nonzero(np.triu(D < eps, 1))
        pairs = ", ".join(f"{d.entities[i]}-{d.entities[j]}" for i, j in zip(iu, ju))
        warnings.warn(
            NearZeroDistanceWarning(f"distances below {eps:g} clamped for pairs: {pairs}"),
            stacklevel=2,
        )
    return above / below


def summarize(m: PositionMatrix) -> TopologySummary:
    """Distance matrix, linkage threshold, redundancy and residuality for one window."""
    d = distance_matrix(m)
    return summarize_distances(d, m.periods[0], m.periods[-1])


def summarize_distances(d: DistanceMatrix, period_from=None, period_to=None) -> TopologySummary:
    L = threshold_L(single_link(d))
    M, S = redundancy(d, L)
    R = residuality(d, L)
    return TopologySummary(period_from, period_to, d.size, L, M, S, R)


def rolling_residuality(m: PositionMatrix, w: int = DEFAULT_WINDOW) -> ResidualitySeries:
    """Residuality over trailing windows of ``w`` quarters, one per quarter."""
    if w < 2:
        raise ValueError(f"window must be at least 2 quarters, got {w}")
    n = len(m.periods)
    if w > n:
        raise WindowTooLong(f"window of {w} quarters exceeds the {n} available")
    points = []
    for end in range(w - 1, n):
        start = end - w + 1
        window = PositionMatrix(m.entities, m.periods[start : end + 1], m.positions[:, start : end + 1])
        try:
            d = distance_matrix(window)
        except ZeroVariance as exc:
            span = (m.periods[start], m.periods[end])
            raise ZeroVariance(
                f"entity {exc.entity} is constant in window {span[0]}..{span[1]}",
                entity=exc.entity,
                window=span,
            ) from None
        L = threshold_L(single_link(d))
        points.append((m.periods[end], residuality(d, L)))
    return ResidualitySeries(w, tuple(points))
