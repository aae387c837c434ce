"""Exact upper and lower transition operators over finite state spaces.

The central object is :class:`UpperOperator`: a map on real-valued functions
over a finite state space that is subadditive, positively homogeneous and
dominated by the pointwise maximum.  Two implementations are provided:

* :class:`CredalOperator` -- driven by a finite set of candidate transition
  pmfs per state (a :class:`CredalFamily`); the value at a state is the
  maximum expectation over that state's candidates.
* :class:`CounterexampleOperator` -- a closed-form three-state operator whose
  middle row maximises over a one-parameter curve of pmfs.  It is registered
  under ``builtin:counterexample-5.1``.

Structural predicates (edges, closedness, one-step lower reachability) are
evaluated in exact rational arithmetic so that strict-positivity tests never
depend on the scale of the input.  Numerical iteration lives in
:mod:`imclim.orbits` and uses IEEE doubles.

All types are immutable after construction; operations are pure functions and
safe to share across threads.
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np

from .errors import (
    DimensionMismatchError,
    ModelValidationError,
    NotWellDefinedError,
    UnsupportedOperatorError,
)

RationalLike = Fraction | int

_HALF = Fraction(1, 2)


@dataclass(frozen=True)
class StateSpace:
    """Ordered, immutable collection of distinct state labels."""

    labels: tuple[str, ...]

    def __post_init__(self):
        if not self.labels:
            raise ModelValidationError("a state space needs at least one state")
        if len(set(self.labels)) != len(self.labels):
            dupes = sorted({x for x in self.labels if self.labels.count(x) > 1})
            raise ModelValidationError(f"duplicate state labels: {dupes}")
        object.__setattr__(self, "_pos", {x: i for i, x in enumerate(self.labels)})

    def __len__(self) -> int:
        return len(self.labels)

    def index(self, label: str) -> int:
        try:
            return self._pos[label]
        except KeyError:
            raise ModelValidationError(f"unknown state label '{label}'") from None

    def subset(self, indices: Sequence[int]) -> "StateSpace":
        """Sub-space keeping the original labels, ordered by ascending index."""
        return StateSpace(tuple(self.labels[i] for i in sorted(indices)))

    def labels_of(self, indices: Iterable[int]) -> tuple[str, ...]:
        return tuple(sorted(self.labels[i] for i in indices))


@dataclass(frozen=True)
class Pmf:
    """Probability mass function with exact rational entries.

    Entries are non-negative and sum to exactly one; both checks happen at
    construction time so downstream code never has to revalidate.
    """

    mass: tuple[Fraction, ...]

    def __post_init__(self):
        mass = tuple(Fraction(m) for m in self.mass)
        object.__setattr__(self, "mass", mass)
        negative = [i for i, m in enumerate(mass) if m < 0]
        if negative:
            raise ModelValidationError(f"negative mass at positions {negative}")
        total = sum(mass)
        if total != 1:
            raise ModelValidationError(f"masses sum to {total}, expected exactly 1")

    def __len__(self) -> int:
        return len(self.mass)

    @property
    def support(self) -> frozenset[int]:
        return frozenset(i for i, m in enumerate(self.mass) if m)

    def expectation(self, values: Sequence):
        """Expected value of ``values``; exact when the values are rational."""
        if len(values) != len(self.mass):
            raise DimensionMismatchError(
                f"function has length {len(values)}, pmf has length {len(self.mass)}"
            )
        return sum(m * values[i] for i, m in enumerate(self.mass) if m)

    def restrict(self, keep: Sequence[int]) -> "Pmf | None":
        """Entries on ``keep`` when the support lies inside it, else ``None``."""
        if not self.support <= frozenset(keep):
            return None
        return Pmf(tuple(self.mass[i] for i in keep))

    def as_float(self) -> np.ndarray:
        return np.array([float(m) for m in self.mass])


def onehot(index: int, n: int) -> Pmf:
    """Point mass at ``index`` over ``n`` states."""
    return Pmf(tuple(Fraction(int(i == index)) for i in range(n)))


@dataclass(frozen=True)
class CredalFamily:
    """Per-state finite, non-empty sets of candidate transition pmfs.

    Duplicate pmfs within a state's set are removed and the remainder is put
    into a canonical order, so two families describing the same model compare
    equal.
    """

    space: StateSpace
    per_state: tuple[tuple[Pmf, ...], ...]

    def __post_init__(self):
        n = len(self.space)
        if len(self.per_state) != n:
            raise ModelValidationError(
                f"family lists {len(self.per_state)} states, space has {n}"
            )
        cleaned = []
        for x, pmfs in enumerate(self.per_state):
            label = self.space.labels[x]
            if not pmfs:
                raise ModelValidationError(f"state '{label}' has no candidate pmfs")
            for k, p in enumerate(pmfs):
                if len(p) != n:
                    raise ModelValidationError(
                        f"pmf #{k} for state '{label}' has length {len(p)}, expected {n}"
                    )
            cleaned.append(tuple(sorted(set(pmfs), key=lambda p: p.mass)))
        object.__setattr__(self, "per_state", tuple(cleaned))

    def restrict(self, keep: Sequence[int]) -> "CredalFamily":
        """Family over ``keep`` built from the pmfs supported inside ``keep``.

        Raises :class:`NotWellDefinedError` when some retained state keeps no
        pmf at all.
        """
        keep = tuple(sorted(set(keep)))
        if not keep:
            raise ModelValidationError("cannot restrict to an empty class")
        if keep[0] < 0 or keep[-1] >= len(self.space):
            raise ModelValidationError(f"restriction indices out of range: {keep}")
        sub_space = self.space.subset(keep)
        per = []
        for x in keep:
            kept = [q for p in self.per_state[x] if (q := p.restrict(keep)) is not None]
            if not kept:
                raise NotWellDefinedError(self.space.labels[x], sub_space.labels)
            per.append(tuple(kept))
        return CredalFamily(sub_space, tuple(per))


def validate_family(
    labels: Sequence[str],
    credal_sets: Mapping[str, Sequence[Mapping[str, RationalLike]]],
) -> CredalFamily:
    """Validate a parsed model and assemble the credal family.

    ``credal_sets`` maps each state label to a list of pmfs, each given as a
    ``{target_label: rational}`` mapping; omitted targets carry mass zero.
    Validation errors name the offending state and pmf.
    """
    space = StateSpace(tuple(labels))
    unknown = sorted(set(credal_sets) - set(space.labels))
    if unknown:
        raise ModelValidationError(f"credal sets given for unknown states: {unknown}")
    per_state = []
    for label in space.labels:
        raw = credal_sets.get(label)
        if raw is None:
            raise ModelValidationError(f"no credal set for state '{label}'")
        if not raw:
            raise ModelValidationError(f"empty credal set for state '{label}'")
        pmfs = []
        for k, entry in enumerate(raw):
            bad = sorted(set(entry) - set(space.labels))
            if bad:
                raise ModelValidationError(
                    f"pmf #{k} for state '{label}' assigns mass to unknown states {bad}"
                )
            mass = tuple(Fraction(entry.get(y, 0)) for y in space.labels)
            try:
                pmfs.append(Pmf(mass))
            except ModelValidationError as exc:
                raise ModelValidationError(
                    f"pmf #{k} for state '{label}': {exc}"
                ) from exc
        per_state.append(tuple(pmfs))
    return CredalFamily(space, tuple(per_state))


class UpperOperator(ABC):
    """Upper transition operator over a finite state space.

    Implementations must be subadditive, positively homogeneous and dominated
    by the pointwise maximum; the test suite exercises these properties rather
    than the constructor.  Implementations able to evaluate exactly on
    rational inputs advertise ``has_exact_predicates`` and thereby expose the
    structural predicates used by the graph and reachability machinery; graph
    construction refuses operators without them rather than thresholding
    floating-point values.
    """

    is_finitely_generated: bool = False
    has_exact_predicates: bool = False

    @property
    @abstractmethod
    def space(self) -> StateSpace:
        ...

    @property
    def n(self) -> int:
        return len(self.space)

    @abstractmethod
    def apply(self, f: Sequence[float]) -> np.ndarray:
        """Apply the operator to ``f`` in double precision."""

    def apply_exact(self, f: Sequence[RationalLike]) -> tuple[Fraction, ...]:
        """Apply the operator exactly; only available with exact predicates."""
        raise UnsupportedOperatorError(
            f"{type(self).__name__} has no exact evaluation path"
        )

    # The lower operator is the conjugate map f -> -upper(-f).
    def apply_lower(self, f: Sequence[float]) -> np.ndarray:
        g = np.asarray(f, dtype=float)
        return -self.apply(-g)

    def apply_lower_exact(self, f: Sequence[RationalLike]) -> tuple[Fraction, ...]:
        return tuple(-v for v in self.apply_exact(tuple(-Fraction(x) for x in f)))

    def _target_set(self, targets: int | Iterable[int]) -> frozenset[int]:
        idx = frozenset([targets]) if isinstance(targets, int) else frozenset(targets)
        for i in idx:
            if not 0 <= i < self.n:
                raise ModelValidationError(f"state index {i} out of range 0..{self.n - 1}")
        return idx

    def upper_indicator(self, targets: int | Iterable[int]) -> tuple[Fraction, ...]:
        """Exact per-state upper probability of hitting ``targets`` in one step."""
        idx = self._target_set(targets)
        f = tuple(Fraction(int(i in idx)) for i in range(self.n))
        return self.apply_exact(f)

    def lower_indicator(self, targets: int | Iterable[int]) -> tuple[Fraction, ...]:
        """Exact one-step lower probabilities, via the complement identity.

        Only upper evaluations on rational indicators are ever needed:
        the lower value of a set is one minus the upper value of its
        complement.
        """
        idx = self._target_set(targets)
        complement = frozenset(range(self.n)) - idx
        return tuple(1 - v for v in self.upper_indicator(complement))

    def edge_positive(self, x: int, y: int) -> bool:
        """Exact test for a directed edge ``x -> y`` in the accessibility graph."""
        return self.upper_indicator(y)[x] > 0

    def lower_step_positive(self, x: int, targets: Iterable[int]) -> bool:
        """Exact test that the one-step lower probability of ``targets`` at ``x`` is positive."""
        return self.lower_indicator(targets)[x] > 0

    def restrict(self, keep: Sequence[int]) -> "UpperOperator":
        """Operator restricted to the class ``keep`` (ascending original indices).

        Closed-form operators must register their own restriction rules;
        without them this raises :class:`UnsupportedOperatorError`.
        """
        raise UnsupportedOperatorError(
            f"{type(self).__name__} registers no restriction rules"
        )

    def _check_vector(self, f) -> np.ndarray:
        g = np.asarray(f, dtype=float)
        if g.shape != (self.n,):
            raise DimensionMismatchError(
                f"function has shape {g.shape}, expected ({self.n},)"
            )
        return g


class CredalOperator(UpperOperator):
    """Finitely generated operator: per-state maximum expectation over a finite pmf set."""

    is_finitely_generated = True
    has_exact_predicates = True

    def __init__(self, family: CredalFamily):
        self._family = family
        lengths = [len(s) for s in family.per_state]
        self._starts = np.concatenate(([0], np.cumsum(lengths)[:-1])).astype(np.intp)
        self._matrix = np.array(
            [p.as_float() for sets in family.per_state for p in sets]
        )

    @property
    def family(self) -> CredalFamily:
        return self._family

    @property
    def space(self) -> StateSpace:
        return self._family.space

    def apply(self, f):
        g = self._check_vector(f)
        return np.maximum.reduceat(self._matrix @ g, self._starts)

    def apply_exact(self, f):
        if len(f) != self.n:
            raise DimensionMismatchError(
                f"function has length {len(f)}, expected {self.n}"
            )
        vals = tuple(Fraction(x) for x in f)
        return tuple(
            max(p.expectation(vals) for p in sets) for sets in self._family.per_state
        )

    def edge_positive(self, x, y):
        # max_p p(y) over the candidates at x, without building the full row
        if not 0 <= x < self.n or not 0 <= y < self.n:
            raise ModelValidationError(f"state index out of range: ({x}, {y})")
        return any(p.mass[y] > 0 for p in self._family.per_state[x])

    def restrict(self, keep):
        return CredalOperator(self._family.restrict(keep))


def identity_operator(labels: Sequence[str]) -> CredalOperator:
    """Operator whose only candidate at each state is the point mass on itself."""
    space = StateSpace(tuple(labels))
    n = len(space)
    per = tuple((onehot(i, n),) for i in range(n))
    return CredalOperator(CredalFamily(space, per))


def _curve_max(fa, fb, fc):
    # max over t in [0, 1/2] of (fa - fc) t^2 + (fb - fc) t + fc;
    # concave case checks the interior vertex, everything else the endpoints.
    a2 = fa - fc
    a1 = fb - fc
    best = fc
    half_val = a2 * _HALF * _HALF + a1 * _HALF + fc
    if half_val > best:
        best = half_val
    if a2 < 0:
        vertex = -a1 / (2 * a2)
        if 0 < vertex < _HALF:
            v_val = a2 * vertex * vertex + a1 * vertex + fc
            if v_val > best:
                best = v_val
    return best


class CounterexampleOperator(UpperOperator):
    """Closed-form three-state operator with a continuum of candidates at its middle state.

    On states ``(a, b, c)`` it maps ``f`` to::

        a:  f(a)
        b:  max( f(a), max over t in [0, 1/2] of t^2 f(a) + t f(b) + (1 - t - t^2) f(c) )
        c:  max( f(a), f(b) )

    The inner maximum of the quadratic in ``t`` is taken in closed form over
    the endpoints and the interior vertex, so evaluation is exact on rational
    inputs and the derived edge and lower-step predicates are exact as well.

    Every orbit of this operator converges, yet its restriction to the states
    ``{b, c}`` is a pure swap of cyclicity 2: it is the canonical witness that
    for operators which are *not* finitely generated, the regular-levels
    condition certifies convergence in one direction only.  Note that orbits
    approach their limit at rate O(1/n), not geometrically, so tight
    tolerances need very large iteration budgets.
    """

    is_finitely_generated = False
    has_exact_predicates = True

    _SPACE = StateSpace(("a", "b", "c"))

    @property
    def space(self) -> StateSpace:
        return self._SPACE

    def apply(self, f):
        g = self._check_vector(f)
        fa, fb, fc = float(g[0]), float(g[1]), float(g[2])
        return np.array([fa, max(fa, _curve_max(fa, fb, fc)), max(fa, fb)])

    def apply_exact(self, f):
        if len(f) != 3:
            raise DimensionMismatchError(f"function has length {len(f)}, expected 3")
        fa, fb, fc = (Fraction(x) for x in f)
        return (fa, max(fa, _curve_max(fa, fb, fc)), max(fa, fb))

    def restrict(self, keep):
        keep = tuple(sorted(set(keep)))
        if not keep:
            raise ModelValidationError("cannot restrict to an empty class")
        if keep[0] < 0 or keep[-1] >= 3:
            raise ModelValidationError(f"restriction indices out of range: {keep}")
        if keep == (0, 1, 2):
            return self
        # Candidates that can survive a restriction to a proper subclass: the
        # point masses among the defining pmfs (the curve only touches a point
        # mass at t = 0, where it sits entirely on state c).
        vertex_sets = {
            0: (onehot(0, 3),),
            1: (onehot(0, 3), onehot(2, 3)),
            2: (onehot(0, 3), onehot(1, 3)),
        }
        sub_space = self._SPACE.subset(keep)
        per = []
        for x in keep:
            kept = [q for p in vertex_sets[x] if (q := p.restrict(keep)) is not None]
            if not kept:
                raise NotWellDefinedError(self._SPACE.labels[x], sub_space.labels)
            per.append(tuple(kept))
        return CredalOperator(CredalFamily(sub_space, tuple(per)))


#: Closed-form operators addressable from model sources by name.
BUILTIN_OPERATORS: dict[str, Callable[[], UpperOperator]] = {
    "builtin:counterexample-5.1": CounterexampleOperator,
}
