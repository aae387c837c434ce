"""Upper accessibility graphs: communication classes, cyclicity, regularity.

The graph has an edge ``x -> y`` exactly when the one-step upper probability
of reaching ``y`` from ``x`` is positive; adjacency is always derived from the
operator's exact rational predicates, never from thresholded floats.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import PreconditionError, UnsupportedOperatorError
from .operators import UpperOperator

_PALETTE = ("steelblue", "darkorange", "seagreen", "orchid", "firebrick", "goldenrod")


@dataclass(frozen=True, eq=False)
class AccessGraph:
    """Directed accessibility graph over labelled states."""

    labels: tuple[str, ...]
    adjacency: np.ndarray  # boolean (n, n); read-only after construction

    def __post_init__(self):
        adj = np.array(self.adjacency, dtype=bool)
        n = len(self.labels)
        if adj.shape != (n, n):
            raise PreconditionError(
                f"adjacency has shape {adj.shape}, expected ({n}, {n})"
            )
        adj.setflags(write=False)
        object.__setattr__(self, "adjacency", adj)

    @property
    def n(self) -> int:
        return len(self.labels)

    def successors(self, x: int) -> tuple[int, ...]:
        return tuple(np.flatnonzero(self.adjacency[x]))

    def edges(self) -> tuple[tuple[int, int], ...]:
        xs, ys = np.nonzero(self.adjacency)
        return tuple(zip(xs.tolist(), ys.tolist()))


@dataclass(frozen=True)
class ClassInfo:
    """A communication class with its structural flags.

    ``cyclicity`` is ``None`` for a class without internal closed paths (a
    singleton with no self-loop); such a class is never regular.  Regularity
    is only asserted for maximal classes.
    """

    members: frozenset[int]
    is_maximal: bool
    is_closed: bool
    cyclicity: int | None
    is_regular: bool


def build_graph(op: UpperOperator) -> AccessGraph:
    """Accessibility graph of ``op``; requires exact edge predicates."""
    if not op.has_exact_predicates:
        raise UnsupportedOperatorError(
            f"{type(op).__name__} provides no exact predicates; "
            "refusing to build a graph from floating-point thresholds"
        )
    n = op.n
    adjacency = np.zeros((n, n), dtype=bool)
    for y in range(n):
        row = op.upper_indicator(y)
        for x in range(n):
            adjacency[x, y] = row[x] > 0
    return AccessGraph(op.space.labels, adjacency)


def _strongly_connected_components(adjacency: np.ndarray) -> list[frozenset[int]]:
    """Iterative Tarjan; components returned in reverse topological order."""
    n = adjacency.shape[0]
    successors = [np.flatnonzero(adjacency[v]).tolist() for v in range(n)]
    index: dict[int, int] = {}
    low: dict[int, int] = {}
    on_stack = [False] * n
    stack: list[int] = []
    counter = 0
    components: list[frozenset[int]] = []
    for root in range(n):
        if root in index:
            continue
        work = [(root, 0)]
        while work:
            v, start = work[-1]
            if start == 0:
                index[v] = low[v] = counter
                counter += 1
                stack.append(v)
                on_stack[v] = True
            descended = False
            for i in range(start, len(successors[v])):
                w = successors[v][i]
                if w not in index:
                    work[-1] = (v, i + 1)
                    work.append((w, 0))
                    descended = True
                    break
                if on_stack[w]:
                    low[v] = min(low[v], index[w])
            if descended:
                continue
            work.pop()
            if low[v] == index[v]:
                component = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    component.append(w)
                    if w == v:
                        break
                components.append(frozenset(component))
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
    return components


def _is_strongly_connected(block: np.ndarray) -> bool:
    n = block.shape[0]
    if n == 1:
        return True

    def reaches_all(adj):
        seen = {0}
        frontier = deque([0])
        while frontier:
            u = frontier.popleft()
            for w in np.flatnonzero(adj[u]):
                if int(w) not in seen:
                    seen.add(int(w))
                    frontier.append(int(w))
        return len(seen) == n

    return reaches_all(block) and reaches_all(block.T)


def cyclicity(graph: AccessGraph, members: Iterable[int]) -> int | None:
    """Greatest common divisor of the lengths of closed paths inside the class.

    Computed as the gcd, over the class-internal edges ``u -> v``, of
    ``level(u) + 1 - level(v)`` with breadth-first levels from an arbitrary
    root; linear in the class size.  Returns ``None`` for a class without
    internal closed paths (cyclicity undefined there).  Raises
    :class:`PreconditionError` when the members are not strongly connected.
    """
    m = tuple(sorted(set(members)))
    if not m:
        raise PreconditionError("cyclicity of an empty class is undefined")
    if m[0] < 0 or m[-1] >= graph.n:
        raise PreconditionError(f"class members out of range: {m}")
    block = graph.adjacency[np.ix_(m, m)]
    if not _is_strongly_connected(block):
        raise PreconditionError("cyclicity requires a strongly connected class")
    if not block.any():
        return None
    level = {0: 0}
    frontier = deque([0])
    while frontier:
        u = frontier.popleft()
        for w in np.flatnonzero(block[u]):
            w = int(w)
            if w not in level:
                level[w] = level[u] + 1
                frontier.append(w)
    g = 0
    for u, v in zip(*np.nonzero(block)):
        g = math.gcd(g, level[int(u)] + 1 - level[int(v)])
    return g


def communication_classes(graph: AccessGraph) -> tuple[ClassInfo, ...]:
    """Communication classes of the graph, ordered by smallest member index.

    Maximality comes from reachability in the condensation (a class is
    maximal when no other class is reachable from it); closedness from a
    direct scan for edges leaving the member set.
    """
    sccs = _strongly_connected_components(graph.adjacency)
    sccs.sort(key=min)
    comp_of = {}
    for k, members in enumerate(sccs):
        for v in members:
            comp_of[v] = k
    c = len(sccs)
    cond = np.zeros((c, c), dtype=bool)
    for x, y in zip(*np.nonzero(graph.adjacency)):
        i, j = comp_of[int(x)], comp_of[int(y)]
        if i != j:
            cond[i, j] = True
    # transitive closure of the condensation
    reach = cond.copy()
    for k in range(c):
        reach |= np.outer(reach[:, k], reach[k, :])
    out = []
    everything = frozenset(range(graph.n))
    for k, members in enumerate(sccs):
        is_maximal = not reach[k].any()
        outside = sorted(everything - members)
        if outside:
            leaving = graph.adjacency[np.ix_(sorted(members), outside)]
            is_closed = not leaving.any()
        else:
            is_closed = True
        cyc = cyclicity(graph, members)
        out.append(
            ClassInfo(
                members=members,
                is_maximal=is_maximal,
                is_closed=is_closed,
                cyclicity=cyc,
                is_regular=bool(is_maximal and cyc == 1),
            )
        )
    return tuple(out)


def is_closed(op: UpperOperator, members: Iterable[int]) -> bool:
    """Exact test that no one-step upper probability leaves the class."""
    inside = frozenset(members)
    if not inside:
        raise PreconditionError("closedness of an empty class is undefined")
    outside = [y for y in range(op.n) if y not in inside]
    return all(
        not op.edge_positive(x, y) for x in sorted(inside) for y in outside
    )


def regularity_oracle(graph: AccessGraph, members: Iterable[int]) -> bool:
    """Boolean-matrix-power regularity check, used to cross-validate the gcd route.

    True exactly when some power ``k <= n^2`` of the class-internal adjacency
    block is all-true and the block stays all-true at ``k + 1``.
    """
    m = tuple(sorted(set(members)))
    block = graph.adjacency[np.ix_(m, m)].astype(np.uint8)
    if not block.any():
        return False
    power = block.copy()
    for _ in range(len(m) ** 2):
        if power.all():
            successor = (power @ block) > 0
            return bool(successor.all())
        power = ((power @ block) > 0).astype(np.uint8)
    return bool(power.all() and ((power @ block) > 0).all())


def to_dot(graph: AccessGraph, classes: Sequence[ClassInfo] | None = None) -> str:
    """Deterministic DOT text, one coloured cluster per communication class.

    Nodes are ordered by state label and maximal classes are marked, so the
    output is byte-stable for a fixed input.
    """
    lines = ["digraph access {", "  rankdir=LR;", '  node [shape=circle];']
    if classes:
        ordered = sorted(classes, key=lambda c: min(graph.labels[i] for i in c.members))
        for k, info in enumerate(ordered):
            member_labels = sorted(graph.labels[i] for i in info.members)
            title = "{" + ", ".join(member_labels) + "}"
            if info.is_maximal:
                title += " (maximal)"
            lines.append(f"  subgraph cluster_{k} {{")
            lines.append(f'    label="{title}";')
            lines.append(f"    color={_PALETTE[k % len(_PALETTE)]};")
            if info.is_maximal:
                lines.append("    penwidth=2;")
            for lab in member_labels:
                lines.append(f'    "{lab}";')
            lines.append("  }")
    else:
        for lab in sorted(graph.labels):
            lines.append(f'  "{lab}";')
    edge_labels = sorted(
        (graph.labels[x], graph.labels[y]) for x, y in graph.edges()
    )
    for src, dst in edge_labels:
        lines.append(f'  "{src}" -> "{dst}";')
    lines.append("}")
    return "\n".join(lines) + "\n"
