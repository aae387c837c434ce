"""Seeded random instance generators and brute-force oracles shared by the tests."""

from __future__ import annotations

import itertools
import random
from fractions import Fraction

import numpy as np

from imclim import (
    AccessGraph,
    CredalFamily,
    CredalOperator,
    Pmf,
    StateSpace,
    build_graph,
    communication_classes,
)

LABELS = "abcdefgh"


def random_pmf(rng: random.Random, n: int, max_den: int = 8) -> Pmf:
    """Random pmf with denominator at most ``max_den`` and a random support."""
    support = sorted(rng.sample(range(n), rng.randint(1, n)))
    q = rng.randint(1, max_den)
    cuts = sorted(rng.randint(0, q) for _ in range(len(support) - 1))
    parts = [b - a for a, b in zip([0] + cuts, cuts + [q])]
    mass = [Fraction(0)] * n
    for idx, part in zip(support, parts):
        mass[idx] = Fraction(part, q)
    return Pmf(tuple(mass))


def random_family(
    rng: random.Random, n: int | None = None, max_pmfs: int = 3, max_den: int = 8
) -> CredalFamily:
    if n is None:
        n = rng.randint(2, 5)
    space = StateSpace(tuple(LABELS[:n]))
    per = tuple(
        tuple(random_pmf(rng, n, max_den) for _ in range(rng.randint(1, max_pmfs)))
        for _ in range(n)
    )
    return CredalFamily(space, per)


def random_operator(rng, n=None, max_pmfs=3, max_den=8) -> CredalOperator:
    return CredalOperator(random_family(rng, n, max_pmfs, max_den))


def random_rational_function(rng: random.Random, n: int) -> tuple[Fraction, ...]:
    return tuple(Fraction(rng.randint(-16, 16), rng.randint(1, 8)) for _ in range(n))


def random_float_function(rng: random.Random, n: int) -> np.ndarray:
    if rng.random() < 0.5:
        return np.array([rng.random() for _ in range(n)])
    return np.array([float(rng.randint(0, 1)) for _ in range(n)])


def random_subset(rng: random.Random, n: int, allow_full: bool = True) -> frozenset[int]:
    while True:
        s = frozenset(i for i in range(n) if rng.random() < 0.5)
        if not s:
            continue
        if not allow_full and len(s) == n:
            continue
        return s


def block_cyclic_operator(
    rng: random.Random, blocks: int, block_size_max: int = 2
) -> tuple[CredalOperator, list[list[int]]]:
    """Single-class operator whose accessibility graph has cyclicity ``blocks``.

    States are grouped into consecutive blocks; every candidate pmf at a state
    in block i is supported inside block i + 1 (mod blocks), so every closed
    path length is a multiple of the block count.
    """
    sizes = [rng.randint(1, block_size_max) for _ in range(blocks)]
    n = sum(sizes)
    partition: list[list[int]] = []
    start = 0
    for size in sizes:
        partition.append(list(range(start, start + size)))
        start += size
    space = StateSpace(tuple(LABELS[:n]))
    per = []
    for b, block in enumerate(partition):
        target = partition[(b + 1) % blocks]
        for _ in block:
            pmfs = []
            for _ in range(rng.randint(1, 2)):
                # spread a random unit mass across the whole target block so
                # the block-to-block structure is strongly connected
                q = rng.randint(len(target), 8)
                cuts = sorted(rng.randint(1, q - 1) for _ in range(len(target) - 1))
                parts = [b2 - a2 for a2, b2 in zip([0] + cuts, cuts + [q])]
                mass = [Fraction(0)] * n
                ok = True
                for idx, part in zip(target, parts):
                    if part <= 0:
                        ok = False
                    mass[idx] = Fraction(part, q)
                if ok:
                    pmfs.append(Pmf(tuple(mass)))
            if not pmfs:
                uniform = Fraction(1, len(target))
                mass = [Fraction(0)] * n
                for idx in target:
                    mass[idx] = uniform
                pmfs.append(Pmf(tuple(mass)))
            per.append(tuple(pmfs))
    return CredalOperator(CredalFamily(space, tuple(per))), partition


def random_single_class_operator(
    rng: random.Random, max_states: int = 4
) -> CredalOperator:
    """Rejection-sample an operator whose graph is one communication class."""
    while True:
        op = random_operator(rng, n=rng.randint(1, max_states))
        classes = communication_classes(build_graph(op))
        if len(classes) == 1:
            return op


def random_scc_graph(rng: random.Random, max_nodes: int = 8) -> AccessGraph:
    """Random strongly connected accessibility graph.

    Mixes two constructions: a directed cycle with optional extra edges
    (controllable cyclicity) and a strongly connected component carved out of
    a dense random digraph.
    """
    if rng.random() < 0.5:
        n = rng.randint(1, max_nodes)
        adjacency = np.zeros((n, n), dtype=bool)
        for i in range(n):
            adjacency[i, (i + 1) % n] = True
        for _ in range(rng.randint(0, n)):
            if rng.random() < 0.5:
                adjacency[rng.randrange(n), rng.randrange(n)] = True
        return AccessGraph(tuple(f"s{i}" for i in range(n)), adjacency)
    n = rng.randint(1, max_nodes)
    p = rng.choice([0.15, 0.3, 0.5])
    adjacency = np.array([[rng.random() < p for _ in range(n)] for _ in range(n)])
    graph = AccessGraph(tuple(f"s{i}" for i in range(n)), adjacency)
    classes = communication_classes(graph)
    members = sorted(rng.choice(classes).members)
    block = adjacency[np.ix_(members, members)]
    return AccessGraph(tuple(f"s{i}" for i in members), block)


# ---------------------------------------------------------------------------
# brute-force oracles


def lower_direct(op: CredalOperator, f) -> tuple[Fraction, ...]:
    """Lower operator by direct per-state minimum expectation (independent of conjugacy)."""
    vals = tuple(Fraction(x) for x in f)
    return tuple(
        min(p.expectation(vals) for p in sets) for sets in op.family.per_state
    )


def brute_force_power(op: CredalOperator, f, steps: int) -> tuple[Fraction, ...]:
    """n-step upper operator by enumerating every per-step pmf selection.

    The iterated maximum decouples per state, so the n-step value equals the
    pointwise maximum of ``M_1 (M_2 (... (M_k f)))`` over all sequences of
    selection matrices, one candidate pmf per state per step.
    """
    family = op.family
    n = len(family.space)
    vals = tuple(Fraction(x) for x in f)
    selections = list(itertools.product(*family.per_state))
    best: list[Fraction] | None = None
    for sequence in itertools.product(selections, repeat=steps):
        vec = vals
        for selection in reversed(sequence):
            vec = tuple(selection[x].expectation(vec) for x in range(n))
        best = list(vec) if best is None else [max(a, b) for a, b in zip(best, vec)]
    return tuple(best)


def brute_force_lower_reach(op, targets: frozenset[int]) -> dict[int, frozenset[int]]:
    """Exact sets {x : lower n-step probability of targets at x > 0} for n = 0..|X|."""
    indicator = tuple(Fraction(int(i in targets)) for i in range(op.n))
    out = {0: frozenset(targets)}
    g = indicator
    for step in range(1, op.n + 1):
        g = op.apply_lower_exact(g)
        out[step] = frozenset(i for i, v in enumerate(g) if v > 0)
    return out


def closed_subsets(op) -> list[frozenset[int]]:
    """All non-empty closed subsets by exhaustive enumeration (small spaces only)."""
    from imclim import is_closed

    n = op.n
    found = []
    for bits in range(1, 2**n):
        subset = frozenset(i for i in range(n) if bits >> i & 1)
        if is_closed(op, subset):
            found.append(subset)
    return found
