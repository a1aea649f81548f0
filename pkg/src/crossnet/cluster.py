"""Single-linkage clustering, minimum spanning trees and dendrogram output.

The linkage is built agglomeratively and the MST separately with Kruskal's
algorithm; that they share the same edge-weight multiset is checked by the
test suite rather than assumed here.

Both operations first put entities in lexicographic order.  Equal-distance
candidates are then resolved by the smallest (first member, second member)
pair, so results do not depend on the order entities were supplied in.
"""
from __future__ import annotations

import csv
import io
import math
import re
from dataclasses import dataclass
from typing import Iterable, Mapping

import numpy as np

from crossnet import kernels
from crossnet._dot import render_graph
from crossnet.errors import InvalidFactor, UnknownEntity
from crossnet.ingest import Role, RoleAssignment
from crossnet.metric import DistanceMatrix

DEFAULT_DENDRO_FACTOR = 0.7
ROLE_COLORS = {Role.CREDITOR: "green", Role.DEBTOR: "red", Role.NEUTRAL: "gray"}
HIGHLIGHT_WIDTH = "1.5"


@dataclass(frozen=True)
class Merge:
    left: int
    right: int
    distance: float
    cluster: int


@dataclass(frozen=True)
class Linkage:
    """Merge history; leaf ``i`` is ``entities[i]``, merge ``q`` creates cluster ``N + q``."""

    entities: tuple[str, ...]
    merges: tuple[Merge, ...]

    @property
    def heights(self) -> list[float]:
        return [m.distance for m in self.merges]

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["step", "left", "right", "distance", "cluster", "size"])
        sizes = {i: 1 for i in range(len(self.entities))}
        for q, m in enumerate(self.merges, start=1):
            sizes[m.cluster] = sizes[m.left] + sizes[m.right]
            writer.writerow([q, self._label(m.left), self._label(m.right),
                             format(m.distance, ".17g"), m.cluster, sizes[m.cluster]])
        return buf.getvalue()

    def _label(self, node: int) -> str:
        return self.entities[node] if node < len(self.entities) else str(node)


@dataclass(frozen=True)
class Mst:
    entities: tuple[str, ...]
    edges: tuple[tuple[str, str, float], ...]
    total_weight: float

    @property
    def weights(self) -> list[float]:
        return [w for _, _, w in self.edges]


@dataclass(frozen=True)
class DendrogramColoring:
    threshold_factor: float
    cut: float
    cluster_of: Mapping[str, str]
    labels: tuple[str, ...]

    def members(self, label: str) -> list[str]:
        return sorted(e for e, lab in self.cluster_of.items() if lab == label)

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["entity", "cluster"])
        for entity in sorted(self.cluster_of):
            writer.writerow([entity, self.cluster_of[entity]])
        return buf.getvalue()


def _canonical(d: DistanceMatrix) -> tuple[tuple[str, ...], np.ndarray]:
    order = sorted(range(d.size), key=lambda i: d.entities[i])
    idx = np.asarray(order, dtype=np.intp)
    D = np.ascontiguousarray(d.distances[np.ix_(idx, idx)])
    return tuple(d.entities[i] for i in order), D


def single_link(d: DistanceMatrix) -> Linkage:
    if d.size < 2:
        raise ValueError("single-link clustering needs at least 2 entities")
    entities, D = _canonical(d)
    raw = kernels.single_link(D)
    N = len(entities)
    merges = tuple(
        Merge(int(left), int(right), float(dist), N + q)
        for q, (left, right, dist) in enumerate(raw)
    )
    return Linkage(entities, merges)


def mst(d: DistanceMatrix) -> Mst:
    """Kruskal MST of the complete graph; edges sorted by (weight, pair)."""
    entities, D = _canonical(d)
    N = len(entities)
    iu, ju = np.triu_indices(N, 1)
    w = D[iu, ju]
    order = np.lexsort((ju, iu, w))
    iu, ju, w = iu[order], ju[order], w[order]
    chosen = kernels.kruskal(np.ascontiguousarray(iu), np.ascontiguousarray(ju), N)
    edges = tuple((entities[iu[e]], entities[ju[e]], float(w[e])) for e in chosen)
    return Mst(entities, edges, math.fsum(x for _, _, x in edges))


def threshold_L(linkage: Linkage) -> float:
    """Largest merge distance, i.e. the height of the final merge."""
    if not linkage.merges:
        raise ValueError("linkage has no merges")
    return max(m.distance for m in linkage.merges)


def color_dendrogram(linkage: Linkage, T: float = DEFAULT_DENDRO_FACTOR) -> DendrogramColoring:
    """Group entities joined by merges strictly below ``T * L``."""
    if not (0.0 < T <= 1.0):
        raise InvalidFactor(f"dendrogram factor must lie in (0, 1], got {T!r}")
    cut = T * threshold_L(linkage)
    N = len(linkage.entities)
    members: dict[int, list[int]] = {i: [i] for i in range(N)}
    for m in linkage.merges:
        if m.distance < cut:
            members[m.cluster] = members.pop(m.left) + members.pop(m.right)
    groups = sorted(sorted(g) for g in members.values())
    labels = tuple(f"c{k}" for k in range(1, len(groups) + 1))
    cluster_of = {linkage.entities[i]: label for label, g in zip(labels, groups) for i in g}
    return DendrogramColoring(T, cut, cluster_of, labels)


_NEWICK_PLAIN = re.compile(r"^[A-Za-z0-9_.\-]+$")


def _newick_name(name: str) -> str:
    if _NEWICK_PLAIN.match(name):
        return name
    return "'" + name.replace("'", "''") + "'"


def export_newick(linkage: Linkage) -> str:
    """Newick tree; each branch spans the height gap to its parent merge."""
    N = len(linkage.entities)
    text = {i: _newick_name(e) for i, e in enumerate(linkage.entities)}
    height = {i: 0.0 for i in range(N)}
    for m in linkage.merges:
        left = f"{text.pop(m.left)}:{m.distance - height[m.left]:.6f}"
        right = f"{text.pop(m.right)}:{m.distance - height[m.right]:.6f}"
        text[m.cluster] = f"({left},{right})"
        height[m.cluster] = m.distance
    (root,) = text.values()
    return root + ";"


def export_dot(
    tree: Mst,
    roles: Iterable[RoleAssignment] | None = None,
    highlights: Iterable[str] | None = None,
) -> str:
    """DOT rendering of an MST; roles colour nodes, highlighted nodes get a width."""
    known = set(tree.entities)
    role_of = {}
    for a in roles or ():
        if a.entity not in known:
            raise UnknownEntity(f"role given for unknown entity {a.entity!r}")
        role_of[a.entity] = a.role
    wide = set(highlights or ())
    unknown = sorted(wide - known)
    if unknown:
        raise UnknownEntity(f"cannot highlight unknown entities: {', '.join(unknown)}")

    nodes = []
    for entity in sorted(tree.entities):
        attrs = {}
        if entity in role_of:
            attrs["color"] = ROLE_COLORS[role_of[entity]]
        if entity in wide:
            attrs["width"] = HIGHLIGHT_WIDTH
        nodes.append((entity, attrs))
    edges = [(a, b, {"weight": format(w, ".17g")}) for a, b, w in tree.edges]
    return render_graph("mst", nodes, edges)
