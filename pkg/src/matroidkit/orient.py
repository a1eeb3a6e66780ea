"""Degree-constrained graph orientation via matroid intersection.

Every edge of a loopless multigraph is replaced by a pair of opposite
arcs.  One matroid bounds, per vertex, how many incoming arcs may be
picked; the other allows at most one arc per edge.  A maximum common
independent set either yields an orientation meeting every in-degree
lower bound, or a vertex set certifying that none exists.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Mapping, Sequence

from .core import (
    CertificateInvalid,
    DemandOutOfRange,
    ElementSet,
    GroundSet,
    Matroid,
    MatroidKitError,
    PartitionMatroid,
    direct_sum,
    uniform,
)
from .intersect import SplitInput, Trace, edmonds_solve, mixed_solve
from .waves import PairContext


@dataclass(frozen=True)
class DemandGraph:
    """Loopless multigraph with one integer in-degree demand per vertex."""

    vertices: tuple[str, ...]
    edges: tuple[tuple[str, str, str], ...]
    demands: tuple[tuple[str, int], ...]

    @classmethod
    def build(
        cls,
        vertices: Sequence[str],
        edges: Sequence[Sequence[str]],
        demands: Mapping[str, int],
    ) -> "DemandGraph":
        vtuple = tuple(vertices)
        vset = set(vtuple)
        if len(vset) != len(vtuple):
            raise MatroidKitError("vertex names must be distinct")
        cleaned = []
        labels = set()
        for i, edge in enumerate(edges):
            if len(edge) == 3:
                u, v, label = edge
            else:
                u, v = edge
                label = f"e{i}"
            if u not in vset or v not in vset:
                raise MatroidKitError(f"edge endpoint not a vertex: {edge!r}")
            if u == v:
                warnings.warn(f"dropping self-loop edge {label!r}", stacklevel=2)
                continue
            if label in labels:
                raise MatroidKitError(f"duplicate edge label {label!r}")
            labels.add(label)
            cleaned.append((u, v, str(label)))
        graph = cls(
            vtuple,
            tuple(cleaned),
            tuple(sorted((v, int(demands.get(v, 0))) for v in vtuple)),
        )
        for v in vtuple:
            if abs(graph.o(v)) > graph.degree(v):
                raise DemandOutOfRange(
                    f"demand {graph.o(v)} at {v!r} exceeds its degree {graph.degree(v)}"
                )
        return graph

    def o(self, v: str) -> int:
        for name, value in self.demands:
            if name == v:
                return value
        raise MatroidKitError(f"unknown vertex {v!r}")

    def degree(self, v: str) -> int:
        return sum((u == v) + (w == v) for u, w, _ in self.edges)


def effective_lower_bound(g: DemandGraph, v: str, demands=None) -> int:
    """Minimum admissible in-degree at ``v``.

    For a non-negative demand this is the demand itself; for a negative
    demand it asks that all but that many incident edges point inward.
    """
    o = g.o(v) if demands is None else int(demands.get(v, 0))
    return o if o >= 0 else g.degree(v) + o


def above_at(g: DemandGraph, indeg: Mapping[str, int], v: str) -> bool:
    return indeg[v] >= effective_lower_bound(g, v)


def below_at(g: DemandGraph, indeg: Mapping[str, int], v: str) -> bool:
    return indeg[v] <= effective_lower_bound(g, v)


def indegrees(g: DemandGraph, orientation: Mapping[str, str]) -> dict[str, int]:
    indeg = dict.fromkeys(g.vertices, 0)
    for _u, _v, label in g.edges:
        indeg[orientation[label]] += 1
    return indeg


@dataclass(frozen=True)
class OrientInstance:
    """The bidirected intersection instance for a demand graph."""

    graph: DemandGraph
    ground: GroundSet
    M: Matroid
    N: Matroid
    head: tuple[str, ...]
    vertex_blocks: tuple[tuple[str, Matroid, int], ...]


def build_instance(g: DemandGraph) -> OrientInstance:
    """Two arcs per edge; per-vertex in-degree matroids against edge blocks."""
    labels = []
    head = []
    for u, v, label in g.edges:
        labels.append(f"{label}>")
        head.append(v)
        labels.append(f"{label}<")
        head.append(u)
    ground = GroundSet(tuple(labels))
    in_arcs = {v: 0 for v in g.vertices}
    for i, h in enumerate(head):
        in_arcs[h] |= 1 << i

    blocks = []
    for v in g.vertices:
        o = g.o(v)
        delta = ElementSet(ground, in_arcs[v])
        if o >= 0:
            mv = uniform(ground, o).restrict(delta)
        else:
            mv = uniform(ground, -o).restrict(delta).dual()
        blocks.append((v, mv, in_arcs[v]))
    m = direct_sum([mv for _v, mv, _mask in blocks])
    n = PartitionMatroid(
        ground,
        tuple((0b11 << (2 * i), 1) for i in range(len(g.edges))),
    )
    return OrientInstance(g, ground, m, n, tuple(head), tuple(blocks))


@dataclass(frozen=True)
class OrientationOutcome:
    """An orientation plus either success or a deficiency certificate."""

    orientation: tuple[tuple[str, str], ...]
    verdict: str
    v_prime: tuple[str, ...]
    counting_ok: bool | None

    def orientation_dict(self) -> dict[str, str]:
        return dict(self.orientation)


def orient_solve(
    g: DemandGraph,
    solver: str = "classic",
    e1: ElementSet | None = None,
    trace: Trace | None = None,
) -> OrientationOutcome:
    """Solve the orientation problem; deficiency certificates are verified."""
    inst = build_instance(g)
    if solver == "classic":
        cert = edmonds_solve(PairContext(inst.M, inst.N), trace)
    elif solver == "mixed":
        e1 = e1 if e1 is not None else inst.ground.empty()
        e0 = ElementSet(inst.ground, inst.ground.full_mask & ~e1.mask)
        cert = mixed_solve(inst.M, SplitInput(inst.N, e0, e1), trace)
    else:
        raise MatroidKitError(f"unknown solver {solver!r}")

    imask = cert.I.mask
    orientation = {}
    for i, (u, v, label) in enumerate(g.edges):
        fwd = 1 << (2 * i)
        orientation[label] = v if imask & fwd else u
    im = imask & cert.E_M.mask
    v_outside = []
    for v, mv, _mask in inst.vertex_blocks:
        if mv._rank(im & mv.universe_mask) < mv._rank(mv.universe_mask):
            v_outside.append(v)

    indeg = indegrees(g, orientation)
    pairs = tuple(sorted(orientation.items()))
    if all(above_at(g, indeg, v) for v in g.vertices):
        return OrientationOutcome(pairs, "above", (), None)
    out = OrientationOutcome(
        pairs,
        "deficient",
        tuple(sorted(v_outside)),
        None,
    )
    if not verify_outcome(g, out):
        raise CertificateInvalid("deficiency certificate failed verification")
    counting = deficiency_counting_check(g, out.v_prime)
    return OrientationOutcome(pairs, "deficient", out.v_prime, counting)


def verify_outcome(g: DemandGraph, out: OrientationOutcome) -> bool:
    """Re-check the outcome from raw degrees and the published predicates."""
    orientation = out.orientation_dict()
    if sorted(orientation) != sorted(label for _u, _v, label in g.edges):
        return False
    for u, v, label in g.edges:
        if orientation[label] not in (u, v):
            return False
    indeg = indegrees(g, orientation)
    if out.verdict == "above":
        return all(above_at(g, indeg, v) for v in g.vertices)
    if out.verdict != "deficient" or not out.v_prime:
        return False
    vset = set(out.v_prime)
    if not vset <= set(g.vertices):
        return False
    if not all(below_at(g, indeg, v) for v in vset):
        return False
    if not any(indeg[v] < effective_lower_bound(g, v) for v in vset):
        return False
    for u, v, label in g.edges:
        if (u in vset) != (v in vset) and orientation[label] not in vset:
            return False
    return True


def deficiency_counting_check(g: DemandGraph, v_prime: Sequence[str]) -> bool:
    """Total demand on the set exceeds the number of edges meeting it."""
    vset = set(v_prime)
    if not vset:
        return False
    demand = sum(effective_lower_bound(g, v) for v in vset)
    incident = sum(1 for u, v, _ in g.edges if u in vset or v in vset)
    return demand > incident
