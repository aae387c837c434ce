"""End-to-end analysis pipeline and its JSON-facing report structure.

``analyze`` runs graph construction, class analysis, the state partition, the
recursive decomposition and all verdicts, and packs the outcome into an
:class:`AnalysisReport` whose ``to_dict`` output validates against
``docs/report.schema.json``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable

from . import __version__
from .decomposition import (
    Decomposition,
    Verdict,
    decide_convergence,
    decompose,
)
from .graphs import AccessGraph, ClassInfo, build_graph, communication_classes
from .operators import StateSpace, UpperOperator
from .orbits import (
    OrbitCheck,
    OrbitComparison,
    OrbitParams,
    oracle_compare,
    search_cycle_witness,
)
from .reachability import StatePartition, partition_states


def _labels(space: StateSpace, members: Iterable[int]) -> list[str]:
    return list(space.labels_of(members))


@dataclass
class AnalysisReport:
    operator: UpperOperator
    graph: AccessGraph
    classes: tuple[ClassInfo, ...]
    partition: StatePartition
    decomposition: Decomposition
    verdict: Verdict
    orbit_evidence: OrbitComparison | None = None
    witness_orbit: OrbitCheck | None = None
    model_name: str | None = None

    def to_dict(self) -> dict:
        space = self.operator.space
        graph_block = {
            "states": list(space.labels),
            "edges": sorted(
                [space.labels[x], space.labels[y]] for x, y in self.graph.edges()
            ),
        }
        classes_block = [
            {
                "members": _labels(space, c.members),
                "maximal": c.is_maximal,
                "closed": c.is_closed,
                "cyclicity": c.cyclicity,
                "regular": c.is_regular,
            }
            for c in self.classes
        ]
        partition_block = {
            "maximal_classes": [
                _labels(space, m) for m in self.partition.maximal_classes
            ],
            "maximal_states": _labels(space, self.partition.maximal_states),
            "absorbed_transients": _labels(space, self.partition.absorbed_transients),
            "unabsorbed_transients": _labels(
                space, self.partition.unabsorbed_transients
            ),
            "reach_sequence": [
                _labels(space, s) for s in self.partition.reach_sequence
            ],
        }
        levels_block = []
        for level in self.decomposition.levels:
            levels_block.append(
                {
                    "level": level.index,
                    "states": _labels(space, level.states),
                    "maximal_classes": [
                        {
                            "members": _labels(space, c.members),
                            "cyclicity": c.cyclicity,
                            "regular": c.is_regular,
                        }
                        for c in level.classes
                        if c.is_maximal
                    ],
                    "absorbed": _labels(space, level.absorbed),
                    "remaining": _labels(space, level.remaining),
                }
            )
        verdict = self.verdict
        verdict_block = {
            "convergent": verdict.convergent,
            "ergodic": verdict.ergodic,
            "convergent_on_maximal_states": verdict.convergent_on_xm,
            "finitely_generated": verdict.finitely_generated,
            "basis": dict(verdict.basis),
            "witness": (
                {
                    "level": verdict.witness.level,
                    "members": list(verdict.witness.members),
                    "cyclicity": verdict.witness.cyclicity,
                }
                if verdict.witness
                else None
            ),
            "notes": list(verdict.notes),
        }
        if self.witness_orbit is not None:
            verdict_block["witness_orbit"] = {
                "function": self.witness_orbit.label,
                "period": self.witness_orbit.period,
            }
        evidence_block = None
        if self.orbit_evidence is not None:
            evidence_block = {
                "verdict": self.orbit_evidence.verdict,
                "agrees": self.orbit_evidence.agrees,
                "discrepancies": list(self.orbit_evidence.discrepancies),
                "note": self.orbit_evidence.note,
                "checks": [
                    {
                        "label": c.label,
                        "period": c.period,
                        "converged": c.converged,
                    }
                    for c in self.orbit_evidence.checks
                ],
            }
        return {
            "tool": {"name": "imclim", "version": __version__},
            "model": {
                "name": self.model_name,
                "states": list(space.labels),
                "finitely_generated": self.operator.is_finitely_generated,
            },
            "graph": graph_block,
            "classes": classes_block,
            "partition": partition_block,
            "decomposition": {
                "depth": self.decomposition.depth,
                "levels": levels_block,
            },
            "verdicts": verdict_block,
            "orbit_evidence": evidence_block,
        }

    def to_json(self, indent: int | None = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent)


def analyze(
    op: UpperOperator,
    model_name: str | None = None,
    orbit_params: OrbitParams | None = None,
    suite_random: int | None = None,
    seed: int = 0,
) -> AnalysisReport:
    """Run the full symbolic pipeline, optionally backed by an orbit suite.

    ``suite_random=None`` skips the numerical cross-check entirely; any
    integer (including 0) runs the indicator suite plus that many random
    functions.  A "no" verdict triggers a best-effort search for a concrete
    cycling orbit regardless.
    """
    graph = build_graph(op)
    classes = communication_classes(graph)
    partition = partition_states(op, classes)
    dec = decompose(op)
    verdict = decide_convergence(op, dec)
    witness_orbit = None
    if verdict.convergent == "no" and verdict.witness is not None:
        members = [op.space.index(label) for label in verdict.witness.members]
        witness_orbit = search_cycle_witness(op, members, orbit_params, seed=seed)
    evidence = None
    if suite_random is not None:
        evidence = oracle_compare(
            op, verdict, params=orbit_params, extra_random=suite_random, seed=seed
        )
    return AnalysisReport(
        operator=op,
        graph=graph,
        classes=classes,
        partition=partition,
        decomposition=dec,
        verdict=verdict,
        orbit_evidence=evidence,
        witness_orbit=witness_orbit,
        model_name=model_name,
    )
