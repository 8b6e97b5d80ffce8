"""Grand strategies, restrictions, outcomes, and subroot sequences.

A (grand) strategy is a total mapping from situations to feasible actions;
player, subform, and piece restrictions are plain domain restrictions of that
mapping.  Strategies are stored total even though tracing an outcome only
ever reads on-path situations, which keeps the restriction algebra exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from .core import Pentaform
from .partition import piece_form, subform, subroots

Strategy = dict  # situation -> action


def validate_strategy(p: Pentaform, choices: Mapping[str, str]) -> Strategy:
    """Accept a mapping iff it is total on J and feasible at every situation."""
    problems = []
    for j in sorted(p.situations):
        if j not in choices:
            problems.append(f"missing situation {j!r}")
        elif choices[j] not in p.action_set(j):
            problems.append(f"action {choices[j]!r} is infeasible at situation {j!r}")
    extra = sorted(set(choices) - p.situations)
    if extra:
        problems.append(f"unknown situations {extra}")
    if problems:
        raise ValueError("invalid strategy: " + "; ".join(problems))
    return {j: choices[j] for j in sorted(choices)}


def player_situations(p: Pentaform, i: str) -> frozenset:
    """The situations controlled by player i; these partition J over I."""
    if i not in p.players:
        raise ValueError(f"unknown player {i!r}")
    return frozenset(j for j in p.situations if p.player_of(j) == i)


def restrict(s: Mapping[str, str], situations) -> Strategy:
    """Domain-restrict a strategy to the given situations."""
    keep = set(situations)
    return {j: a for j, a in s.items() if j in keep}


def restrict_to_player(p: Pentaform, s: Mapping[str, str], i: str) -> Strategy:
    return restrict(s, player_situations(p, i))


def restrict_to_opponents(p: Pentaform, s: Mapping[str, str], i: str) -> Strategy:
    return restrict(s, set(s) - player_situations(p, i))


def next_node(p: Pentaform, w: str, a: str) -> str:
    """The unique successor of a feasible decision-node/action pair."""
    return p.next_node(w, a)


def trace(p: Pentaform, s: Mapping[str, str]) -> tuple[str, ...]:
    """Follow s from the root of p to an endnode of p."""
    x = p.root
    nodes = [x]
    while x in p.decision_nodes:
        j = p.situation_of(x)
        try:
            a = s[j]
        except KeyError:
            raise ValueError(f"strategy does not cover situation {j!r}") from None
        x = p.next_node(x, a)
        nodes.append(x)
    return tuple(nodes)


def outcome(p: Pentaform, s: Mapping[str, str]) -> tuple[str, ...]:
    """The run traced from the root by obeying s (finite, so it terminates)."""
    return trace(p, s)


def subform_outcome(p: Pentaform, t: str, restriction: Mapping[str, str]) -> tuple[str, ...]:
    """The run of the subform at t under a restriction total on its situations."""
    sub = subform(p, t)
    _require_total(restriction, sub, "subform")
    return trace(sub, restriction)


def piece_outcome(p: Pentaform, t: str, restriction: Mapping[str, str]) -> tuple[str, ...]:
    """The run of the piece at t under a restriction total on its situations."""
    piece = piece_form(p, t)
    _require_total(restriction, piece, "piece")
    return trace(piece, restriction)


def _require_total(restriction: Mapping[str, str], form: Pentaform, what: str) -> None:
    missing = sorted(form.situations - set(restriction))
    if missing:
        raise ValueError(f"restriction is partial on the {what}: missing {missing}")


TERMINATED = "terminated"
INFINITE_DETECTED = "infinite-detected"  # stationary symbolic sequences only


@dataclass(frozen=True)
class SubrootSequence:
    """The strictly increasing chain of subroots visited by obeying s."""

    subroots: tuple[str, ...]
    termination: str
    cycle: tuple[str, ...] | None = None


def subroot_sequence(p: Pentaform, s: Mapping[str, str], t0: str) -> SubrootSequence:
    """Iterate t ↦ last node of the piece outcome at t while it is a subroot.

    Explicit finite pentaforms always terminate; the infinite tag is reserved
    for the stationary module's class-level sequences.
    """
    ts = subroots(p)
    if t0 not in ts:
        raise ValueError(f"{t0!r} is not a subroot")
    seq = [t0]
    while True:
        run = piece_outcome(p, seq[-1], restrict(s, piece_form(p, seq[-1]).situations))
        last = run[-1]
        if last not in ts:
            return SubrootSequence(tuple(seq), TERMINATED)
        seq.append(last)


__all__ = [
    "Strategy", "SubrootSequence", "TERMINATED", "INFINITE_DETECTED",
    "validate_strategy", "player_situations", "restrict", "restrict_to_player",
    "restrict_to_opponents", "next_node", "outcome", "subform_outcome",
    "piece_outcome", "subroot_sequence", "trace",
]
