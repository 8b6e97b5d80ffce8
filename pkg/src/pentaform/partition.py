"""Subroots, subforms, and the piece-form partition.

A subroot is a decision node t whose weakly-subsequent quintuples share no
situation with the rest of the form; the root always qualifies.  The subform
at t collects everything weakly after t, and the piece form at t is the
subform minus everything weakly after a strictly later subroot.  The piece
forms partition the whole form, and every piece run ends either at a later
subroot or at a final endnode (never infinitely, for explicit finite forms).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from types import MappingProxyType
from typing import Mapping, Sequence

from .core import Pentaform, Quintuple, validate


@lru_cache(maxsize=None)
def subroots(p: Pentaform) -> frozenset:
    """Decision nodes whose subsequent situations occur nowhere else."""
    # One DFS per decision node; at desk scale clarity beats the incremental
    # algorithms from the literature.
    result = set()
    for w in p.decision_nodes:
        inside = {x for x in p.subtree_nodes(w) if x in p.decision_nodes}
        inside_situations = {p.situation_of(x) for x in inside}
        outside_situations = {p.situation_of(x) for x in p.decision_nodes if x not in inside}
        if inside_situations.isdisjoint(outside_situations):
            result.add(w)
    assert p.root in result
    return frozenset(result)


def subroots_sorted(p: Pentaform) -> list[str]:
    """Subroots ordered by (depth, label); backward induction reverses this."""
    return sorted(subroots(p), key=lambda t: (p.depth(t), t))


def _require_subroot(p: Pentaform, t: str) -> None:
    if t not in subroots(p):
        raise ValueError(f"{t!r} is not a subroot")


def _build(quintuples: Sequence[Quintuple]) -> Pentaform:
    # Propositions guarantee validity of subforms/pieces; revalidate while
    # assertions are on to catch engine bugs, trust the result under -O.
    if __debug__:
        return validate(quintuples)
    return Pentaform(quintuples)


@lru_cache(maxsize=None)
def subform(p: Pentaform, t: str) -> Pentaform:
    """The pentaform of all quintuples weakly after subroot t (root t)."""
    _require_subroot(p, t)
    below = set(p.subtree_nodes(t))
    return _build([q for q in p.quintuples if q.decision_node in below])


@dataclass(frozen=True)
class PiecePartition:
    """Mapping subroot → piece form covering the whole form exactly once."""

    pieces: Mapping[str, Pentaform]

    def __getitem__(self, t: str) -> Pentaform:
        return self.pieces[t]

    def __iter__(self):
        return iter(self.pieces)

    def __len__(self) -> int:
        return len(self.pieces)

    def items(self):
        return self.pieces.items()


@lru_cache(maxsize=None)
def piece_partition(p: Pentaform) -> PiecePartition:
    """Partition the form into piece forms, deepest subroots last.

    Each quintuple belongs to the piece of the nearest subroot weakly before
    its decision node.
    """
    ts = subroots(p)
    owner: dict[str, str] = {}

    def piece_of(w: str) -> str:
        if w in owner:
            return owner[w]
        chain = p.weak_predecessors(w)
        t = next(x for x in reversed(chain) if x in ts)
        for x in reversed(chain):
            owner.setdefault(x, t)
            if x == t:
                break
        return t

    buckets: dict[str, list[Quintuple]] = {t: [] for t in subroots_sorted(p)}
    for q in p.quintuples:
        buckets[piece_of(q.decision_node)].append(q)
    pieces = {t: _build(qs) for t, qs in buckets.items()}
    return PiecePartition(MappingProxyType(pieces))


def piece_form(p: Pentaform, t: str) -> Pentaform:
    """The piece form at subroot t: the subform minus later subforms."""
    _require_subroot(p, t)
    return piece_partition(p)[t]


def piece_situations(p: Pentaform, t: str) -> frozenset:
    return piece_form(p, t).situations


def subform_situations(p: Pentaform, t: str) -> frozenset:
    return subform(p, t).situations


@dataclass(frozen=True)
class PieceEndnodes:
    """Per-piece endnodes split into subroot exits and final endnodes."""

    exits_to_subroots: Mapping[str, frozenset]
    final_endnodes: Mapping[str, frozenset]


def classify_piece_endnodes(p: Pentaform) -> PieceEndnodes:
    """Split each piece's endnodes and verify they tile T ∪ (Y \\ W).

    {{r}} together with the nonempty piece-endnode sets partitions the union
    of the subroots and the final endnodes; a failure here is an engine bug,
    not a user error.
    """
    ts = subroots(p)
    parts = piece_partition(p)
    exits: dict[str, frozenset] = {}
    finals: dict[str, frozenset] = {}
    seen: list[str] = [p.root]
    for t, piece in parts.items():
        ends = piece.endnodes
        exits[t] = frozenset(e for e in ends if e in ts)
        finals[t] = frozenset(e for e in ends if e not in ts)
        assert finals[t] <= p.endnodes
        seen.extend(sorted(ends))
    expected = sorted(ts | p.endnodes)
    assert sorted(seen) == expected, "piece endnodes do not tile the subroots and final endnodes"
    return PieceEndnodes(MappingProxyType(exits), MappingProxyType(finals))


EXIT_TO_SUBROOT = "exit-to-subroot"
FINAL_ENDNODE = "final-endnode"
INFINITE_PIECE = "infinite-piece"  # never arises for explicit finite forms


@dataclass(frozen=True)
class PieceRunClass:
    """Trichotomy tag for one piece run."""

    kind: str
    subroot: str | None = None
    completed_run: tuple[str, ...] | None = None


def classify_piece_run(p: Pentaform, t: str, n: Sequence[str]) -> PieceRunClass:
    """Classify a run of the piece at t: exit to a later subroot, or a final
    endnode completing a full run."""
    piece = piece_form(p, t)
    nt = tuple(n)
    if not piece.is_run(nt):
        raise ValueError(f"{nt!r} is not a run of the piece at {t!r}")
    last = nt[-1]
    if last in subroots(p):
        return PieceRunClass(EXIT_TO_SUBROOT, subroot=last)
    return PieceRunClass(FINAL_ENDNODE, completed_run=p.weak_predecessors(last))
