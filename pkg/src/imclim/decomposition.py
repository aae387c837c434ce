"""Recursive depth decomposition of the state space and the convergence verdicts.

The decomposition peels the state space level by level: each level takes the
maximal communication classes and the transient states that get absorbed into
them, then recurses on the remaining (unabsorbed) transient states through the
restricted operator.  Verdict ``basis`` strings name entries of the decision
rule table in the project README.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import PreconditionError, UnsupportedOperatorError
from .graphs import ClassInfo, build_graph, communication_classes
from .operators import StateSpace, UpperOperator
from .orbits import OrbitParams, orbit_limit_on_regular_class
from .reachability import StatePartition, partition_states

BASIS_ERGODIC = "Proposition 1"
BASIS_SINGLE_CLASS = "Proposition 2"
BASIS_XM = "Proposition 3"
BASIS_LIMIT_BOUND = "Proposition 4"
BASIS_SUFFICIENT = "Theorem 1"
BASIS_FINITELY_GENERATED = "Theorem 2"
BASIS_CONDITION_FAILED = "Theorem 1 condition not met"

_FOOTNOTE_NOTE = (
    "non-convergence is only certified for finitely generated operators; the "
    "tool applies that direction under full finite generation, although finite "
    "pmf sets on the unabsorbed transient states alone would suffice"
)


@dataclass(frozen=True)
class LevelRecord:
    """One level of the decomposition, with all state sets in original indices."""

    index: int  # 1-based depth
    states: tuple[int, ...]  # original indices analysed at this level
    operator: UpperOperator  # restriction of the original operator to ``states``
    classes: tuple[ClassInfo, ...]
    maximal_classes: tuple[frozenset[int], ...]
    absorbed: frozenset[int]
    remaining: frozenset[int]
    reach_sequence: tuple[frozenset[int], ...]


@dataclass(frozen=True)
class Decomposition:
    space: StateSpace
    levels: tuple[LevelRecord, ...]

    @property
    def depth(self) -> int:
        return len(self.levels)

    def partition_pieces(self) -> tuple[frozenset[int], ...]:
        """All level maximal classes and absorbed sets; together they partition the space."""
        pieces = []
        for level in self.levels:
            pieces.extend(level.maximal_classes)
            if level.absorbed:
                pieces.append(level.absorbed)
        return tuple(pieces)


def decompose(op: UpperOperator) -> Decomposition:
    """Peel the state space until no unabsorbed transient states remain.

    Each level restricts the *original* operator to the current state set --
    the two-cut and one-cut restrictions agree, so no nested restricted
    representations are ever built.  If the operator cannot be restricted at
    some level, the raised :class:`UnsupportedOperatorError` carries the
    completed levels in its ``partial`` attribute.
    """
    levels: list[LevelRecord] = []
    indices = tuple(range(op.n))
    current = op
    while True:
        graph = build_graph(current)
        local_classes = communication_classes(graph)
        part = partition_states(current, local_classes)

        def orig(local_set: Iterable[int]) -> frozenset[int]:
            return frozenset(indices[i] for i in local_set)

        classes = tuple(
            ClassInfo(
                members=orig(c.members),
                is_maximal=c.is_maximal,
                is_closed=c.is_closed,
                cyclicity=c.cyclicity,
                is_regular=c.is_regular,
            )
            for c in local_classes
        )
        record = LevelRecord(
            index=len(levels) + 1,
            states=indices,
            operator=current,
            classes=classes,
            maximal_classes=tuple(orig(m) for m in part.maximal_classes),
            absorbed=orig(part.absorbed_transients),
            remaining=orig(part.unabsorbed_transients),
            reach_sequence=tuple(orig(s) for s in part.reach_sequence),
        )
        levels.append(record)
        if not record.remaining:
            break
        indices = tuple(sorted(record.remaining))
        try:
            current = op.restrict(indices)
        except UnsupportedOperatorError as exc:
            raise UnsupportedOperatorError(
                f"cannot restrict the operator at depth {len(levels) + 1}: {exc}",
                partial=tuple(levels),
            ) from exc
    return Decomposition(op.space, tuple(levels))


@dataclass(frozen=True)
class Witness:
    """The first non-regular level class backing a negative or inconclusive verdict."""

    level: int
    members: tuple[str, ...]
    cyclicity: int | None


@dataclass(frozen=True)
class Verdict:
    convergent: str  # "yes" | "no" | "inconclusive"
    ergodic: str  # "yes" | "no"
    convergent_on_xm: bool
    finitely_generated: bool
    basis: Mapping[str, str]
    witness: Witness | None
    notes: tuple[str, ...] = ()


def _first_nonregular(dec: Decomposition) -> tuple[LevelRecord, ClassInfo] | None:
    for level in dec.levels:
        for info in level.classes:
            if info.is_maximal and info.cyclicity != 1:
                return level, info
    return None


def decide_convergence_on_xm(classes: Sequence[ClassInfo]) -> bool:
    """Orbits converge on the maximal states iff every maximal class has cyclicity 1."""
    return all(c.cyclicity == 1 for c in classes if c.is_maximal)


def decide_ergodicity(
    partition: StatePartition, classes: Sequence[ClassInfo]
) -> str:
    """Every orbit converges to a constant iff there is a single maximal
    communication class, it absorbs everything, and it is regular."""
    maximal = [c for c in classes if c.is_maximal]
    ok = (
        len(maximal) == 1
        and not partition.unabsorbed_transients
        and maximal[0].cyclicity == 1
    )
    return "yes" if ok else "no"


def decide_convergence(op: UpperOperator, dec: Decomposition) -> Verdict:
    """Combine the decomposition into the three-valued convergence verdict.

    All level maximal classes regular certifies convergence for any operator.
    A failed condition refutes convergence only for finitely generated
    operators; otherwise the verdict is "inconclusive", because the condition
    is not necessary in general.
    """
    level1 = dec.levels[0]
    ergodic = decide_ergodicity_from_level(level1)
    convergent_on_xm = decide_convergence_on_xm(level1.classes)
    basis = {
        "ergodic": BASIS_ERGODIC,
        "convergent_on_xm": BASIS_XM,
    }
    offender = _first_nonregular(dec)
    notes: list[str] = []
    if offender is None:
        convergent = "yes"
        witness = None
        basis["convergent"] = BASIS_SUFFICIENT
    else:
        level, info = offender
        witness = Witness(
            level=level.index,
            members=dec.space.labels_of(info.members),
            cyclicity=info.cyclicity,
        )
        if op.is_finitely_generated:
            convergent = "no"
            basis["convergent"] = BASIS_FINITELY_GENERATED
            notes.append(_FOOTNOTE_NOTE)
        else:
            convergent = "inconclusive"
            basis["convergent"] = BASIS_CONDITION_FAILED
            notes.append(
                "the operator is not finitely generated, so a failed condition "
                "does not refute convergence; orbits may still converge"
            )
    return Verdict(
        convergent=convergent,
        ergodic=ergodic,
        convergent_on_xm=convergent_on_xm,
        finitely_generated=op.is_finitely_generated,
        basis=basis,
        witness=witness,
        notes=tuple(notes),
    )


def decide_ergodicity_from_level(level: LevelRecord) -> str:
    maximal = [c for c in level.classes if c.is_maximal]
    ok = (
        len(maximal) == 1
        and not level.remaining
        and maximal[0].cyclicity == 1
    )
    return "yes" if ok else "no"


@dataclass(frozen=True)
class LimitBoundCheck:
    """Numeric domination check for the limit of one sampled orbit."""

    function: tuple[float, ...]
    limit: float
    min_value: float
    dominates: bool
    strict: bool | None  # None when the start function is constant


@dataclass(frozen=True)
class SingleClassReport:
    """For single-class operators the three notions coincide with regularity."""

    members: tuple[str, ...]
    cyclicity: int | None
    regular: bool
    convergent: bool
    ergodic: bool
    basis: str
    limit_bound: LimitBoundCheck | None


def single_class_equivalence_report(
    op: UpperOperator,
    f: Sequence[float] | None = None,
    params: OrbitParams | None = None,
) -> SingleClassReport:
    """Report on an operator whose accessibility graph is a single class.

    Convergence, ergodicity and regularity are equivalent here, so the report
    simply evaluates the cyclicity and mirrors it.  When the class is regular
    the limit-domination check runs on ``f`` (a non-constant ramp by default):
    the constant limit dominates the minimum of the start function, strictly
    when the start is not constant.
    """
    classes = communication_classes(build_graph(op))
    if len(classes) != 1:
        raise PreconditionError(
            f"expected a single communication class, found {len(classes)}"
        )
    info = classes[0]
    regular = info.cyclicity == 1
    limit_bound = None
    if regular:
        if f is None:
            f = np.arange(op.n, dtype=float) / max(1, op.n - 1)
        start = np.asarray(f, dtype=float)
        p = params or OrbitParams()
        phi = orbit_limit_on_regular_class(op, info.members, start, p, classes)
        lowest = float(start.min())
        constant = bool(float(start.max()) == lowest)
        limit_bound = LimitBoundCheck(
            function=tuple(float(v) for v in start),
            limit=phi,
            min_value=lowest,
            dominates=phi >= lowest - p.tolerance,
            strict=None if constant else bool(phi > lowest),
        )
    return SingleClassReport(
        members=op.space.labels_of(info.members),
        cyclicity=info.cyclicity,
        regular=regular,
        convergent=regular,
        ergodic=regular,
        basis=BASIS_SINGLE_CLASS,
        limit_bound=limit_bound,
    )
