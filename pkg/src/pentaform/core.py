"""Quintuple sets and validated pentaforms.

A quintuple ⟨player, situation, decision node, action, successor⟩ records one
edge of an extensive-form tree together with who moves there and in which
information situation.  A finite set of such quintuples that satisfies eight
axioms is a *pentaform*; its root, predecessor function, precedence order,
paths, and runs are all derivable from the raw relation, and this module
derives them.

All labels are opaque strings ordered lexicographically, so every operation
iterates in a canonical order and produces deterministic output.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

AXIOM_PLAYER_OF_SITUATION = "Pi<-j"
AXIOM_SITUATION_OF_NODE = "Pj<-w"
AXIOM_ACTION_RECTANGLE = "Pwa"
AXIOM_SUCCESSOR_FUNCTION = "Pwa->y"
AXIOM_PREDECESSOR_FUNCTION = "Pw<-y"
AXIOM_ACTION_OF_SUCCESSOR = "Pa<-y"
AXIOM_NO_CYCLES = "Py"
AXIOM_SINGLE_ROOT = "Pr"

ALL_AXIOMS = (
    AXIOM_PLAYER_OF_SITUATION,
    AXIOM_SITUATION_OF_NODE,
    AXIOM_ACTION_RECTANGLE,
    AXIOM_SUCCESSOR_FUNCTION,
    AXIOM_PREDECESSOR_FUNCTION,
    AXIOM_ACTION_OF_SUCCESSOR,
    AXIOM_NO_CYCLES,
    AXIOM_SINGLE_ROOT,
)

_COORD_NAMES = {"I": "player", "J": "situation", "W": "decision_node", "A": "action", "Y": "successor"}


@dataclass(frozen=True, order=True)
class Quintuple:
    """One ⟨player, situation, decision node, action, successor⟩ record."""

    player: str
    situation: str
    decision_node: str
    action: str
    successor: str

    def key(self) -> tuple[str, str, str, str, str]:
        """Canonical sort key: (situation, decision node, action) first."""
        return (self.situation, self.decision_node, self.action, self.player, self.successor)


QuintupleSet = frozenset  # of Quintuple


@dataclass(frozen=True)
class AxiomViolation:
    axiom: str
    witness: str

    def __str__(self) -> str:
        return f"[{self.axiom}] {self.witness}"


class InvalidPentaform(ValueError):
    """Raised by validate(); carries every violated axiom with a witness."""

    def __init__(self, violations: Sequence[AxiomViolation]):
        self.violations = tuple(violations)
        super().__init__("; ".join(str(v) for v in self.violations))


def project(q: Iterable[Quintuple], coords: str | Sequence[str]) -> set:
    """Project a quintuple set onto a coordinate sequence over {I,J,W,A,Y}.

    A single coordinate yields a set of labels; several yield a set of tuples
    in the requested order.
    """
    letters = list(coords)
    if not letters:
        raise ValueError("projection needs at least one coordinate")
    if len(set(letters)) != len(letters):
        raise ValueError(f"repeated coordinate in {coords!r}")
    try:
        attrs = [_COORD_NAMES[c] for c in letters]
    except KeyError as exc:
        raise ValueError(f"unknown coordinate {exc.args[0]!r}; expected letters from IJWAY") from None
    if len(attrs) == 1:
        attr = attrs[0]
        return {getattr(t, attr) for t in q}
    return {tuple(getattr(t, a) for a in attrs) for t in q}


def situation_slice(q: Iterable[Quintuple], j: str) -> frozenset:
    """All quintuples listing situation j (empty for unknown j)."""
    return frozenset(t for t in q if t.situation == j)


def check_axioms(q: Iterable[Quintuple]) -> list[AxiomViolation]:
    """Evaluate all eight pentaform axioms, returning every violation.

    The axioms are independent diagnostics, so a single bad input can violate
    several at once; each violation comes with one concrete witness.
    """
    quintuples = sorted(set(q), key=Quintuple.key)
    violations: list[AxiomViolation] = []

    player_of: dict[str, str] = {}
    situation_of: dict[str, str] = {}
    succ_of: dict[tuple[str, str], str] = {}
    preds: dict[str, set[str]] = {}
    action_of: dict[str, str] = {}
    pairs_by_situation: dict[str, set[tuple[str, str]]] = {}

    for t in quintuples:
        prev = player_of.setdefault(t.situation, t.player)
        if prev != t.player and not _seen(violations, AXIOM_PLAYER_OF_SITUATION):
            violations.append(AxiomViolation(
                AXIOM_PLAYER_OF_SITUATION,
                f"situation {t.situation!r} is assigned players {prev!r} and {t.player!r}"))
        prev = situation_of.setdefault(t.decision_node, t.situation)
        if prev != t.situation and not _seen(violations, AXIOM_SITUATION_OF_NODE):
            violations.append(AxiomViolation(
                AXIOM_SITUATION_OF_NODE,
                f"decision node {t.decision_node!r} lies in situations {prev!r} and {t.situation!r}"))
        prev = succ_of.setdefault((t.decision_node, t.action), t.successor)
        if prev != t.successor and not _seen(violations, AXIOM_SUCCESSOR_FUNCTION):
            violations.append(AxiomViolation(
                AXIOM_SUCCESSOR_FUNCTION,
                f"pair ({t.decision_node!r}, {t.action!r}) leads to both {prev!r} and {t.successor!r}"))
        preds.setdefault(t.successor, set()).add(t.decision_node)
        prev = action_of.setdefault(t.successor, t.action)
        if prev != t.action and not _seen(violations, AXIOM_ACTION_OF_SUCCESSOR):
            violations.append(AxiomViolation(
                AXIOM_ACTION_OF_SUCCESSOR,
                f"successor {t.successor!r} is reached by actions {prev!r} and {t.action!r}"))
        pairs_by_situation.setdefault(t.situation, set()).add((t.decision_node, t.action))

    for y in sorted(preds):
        ws = preds[y]
        if len(ws) > 1:
            violations.append(AxiomViolation(
                AXIOM_PREDECESSOR_FUNCTION,
                f"successor {y!r} has two predecessors {sorted(ws)[0]!r} and {sorted(ws)[1]!r}"))
            break

    for j in sorted(pairs_by_situation):
        pairs = pairs_by_situation[j]
        nodes = {w for w, _ in pairs}
        acts = {a for _, a in pairs}
        if len(pairs) != len(nodes) * len(acts):
            w, a = sorted((w, a) for w in nodes for a in acts if (w, a) not in pairs)[0]
            violations.append(AxiomViolation(
                AXIOM_ACTION_RECTANGLE,
                f"situation {j!r}: node {w!r} lacks action {a!r} present elsewhere in the situation"))
            break

    decision_nodes = {t.decision_node for t in quintuples}
    successors = set(preds)
    nodes = decision_nodes | successors

    # [Py]: walking the predecessor map must escape Y within |X| steps.  When
    # [Pw<-y] fails the map is not a function; the walk then follows the
    # lexicographically smallest predecessor to stay deterministic.
    pred_choice = {y: min(ws) for y, ws in preds.items()}
    bound = len(nodes)
    for y in sorted(successors):
        x = y
        for _ in range(bound):
            x = pred_choice[x]
            if x not in successors:
                break
        else:
            violations.append(AxiomViolation(
                AXIOM_NO_CYCLES,
                f"predecessor walk from {y!r} never leaves the successor set (cycle)"))
            break

    roots = decision_nodes - successors
    if len(roots) != 1:
        shown = ", ".join(repr(r) for r in sorted(roots)[:3]) if roots else "none"
        violations.append(AxiomViolation(
            AXIOM_SINGLE_ROOT,
            f"decision nodes that are not successors should be a singleton; found {shown}"))

    return violations


def _seen(violations: list[AxiomViolation], axiom: str) -> bool:
    return any(v.axiom == axiom for v in violations)


class Pentaform:
    """A validated quintuple set with its derived tree structure.

    Instances are immutable and are produced by :func:`validate` (or trusted
    internal construction); direct use of ``Pentaform(...)`` skips the axiom
    checks and must only receive known-valid input.
    """

    __slots__ = (
        "quintuples", "players", "situations", "decision_nodes", "actions",
        "successors", "nodes", "endnodes", "root",
        "_pred", "_pred_action", "_children", "_situation_of", "_player_of",
        "_info_sets", "_action_sets", "_next", "_depth", "_hash", "_runs",
    )

    def __init__(self, quintuples: Iterable[Quintuple]):
        qs = tuple(sorted(set(quintuples), key=Quintuple.key))
        self.quintuples = qs
        self.players = frozenset(t.player for t in qs)
        self.situations = frozenset(t.situation for t in qs)
        self.decision_nodes = frozenset(t.decision_node for t in qs)
        self.actions = frozenset(t.action for t in qs)
        self.successors = frozenset(t.successor for t in qs)
        self.nodes = self.decision_nodes | self.successors
        self.endnodes = self.successors - self.decision_nodes
        (self.root,) = self.decision_nodes - self.successors

        self._pred = {t.successor: t.decision_node for t in qs}
        self._pred_action = {t.successor: t.action for t in qs}
        self._next = {(t.decision_node, t.action): t.successor for t in qs}
        self._situation_of = {t.decision_node: t.situation for t in qs}
        self._player_of = {t.situation: t.player for t in qs}
        children: dict[str, list[tuple[str, str]]] = {}
        info: dict[str, set[str]] = {}
        acts: dict[str, set[str]] = {}
        for t in qs:
            children.setdefault(t.decision_node, []).append((t.action, t.successor))
            info.setdefault(t.situation, set()).add(t.decision_node)
            acts.setdefault(t.situation, set()).add(t.action)
        self._children = {w: tuple(sorted(cs)) for w, cs in children.items()}
        self._info_sets = {j: frozenset(v) for j, v in info.items()}
        self._action_sets = {j: frozenset(v) for j, v in acts.items()}

        depth = {self.root: 0}
        stack = [self.root]
        while stack:
            w = stack.pop()
            for _, y in self._children.get(w, ()):
                depth[y] = depth[w] + 1
                if y in self.decision_nodes:
                    stack.append(y)
        self._depth = depth
        self._hash = None
        self._runs = None

    # -- identity ----------------------------------------------------------

    def __eq__(self, other) -> bool:
        return isinstance(other, Pentaform) and self.quintuples == other.quintuples

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self.quintuples)
        return self._hash

    def __len__(self) -> int:
        return len(self.quintuples)

    def __iter__(self) -> Iterator[Quintuple]:
        return iter(self.quintuples)

    def __repr__(self) -> str:
        return f"Pentaform(root={self.root!r}, quintuples={len(self.quintuples)})"

    # -- local structure ----------------------------------------------------

    def situation_of(self, w: str) -> str:
        if w not in self._situation_of:
            raise ValueError(f"{w!r} is not a decision node")
        return self._situation_of[w]

    def player_of(self, j: str) -> str:
        if j not in self._player_of:
            raise ValueError(f"unknown situation {j!r}")
        return self._player_of[j]

    def information_set(self, j: str) -> frozenset:
        if j not in self._info_sets:
            raise ValueError(f"unknown situation {j!r}")
        return self._info_sets[j]

    def action_set(self, j: str) -> frozenset:
        if j not in self._action_sets:
            raise ValueError(f"unknown situation {j!r}")
        return self._action_sets[j]

    def children(self, w: str) -> tuple[tuple[str, str], ...]:
        """Sorted (action, successor) pairs at a decision node."""
        return self._children.get(w, ())

    def next_node(self, w: str, a: str) -> str:
        try:
            return self._next[(w, a)]
        except KeyError:
            raise ValueError(f"({w!r}, {a!r}) is not a feasible decision-node/action pair") from None

    def predecessor(self, y: str) -> str:
        if y not in self._pred:
            raise ValueError(f"{y!r} has no predecessor (not a successor node)")
        return self._pred[y]

    def incoming_action(self, y: str) -> str:
        if y not in self._pred_action:
            raise ValueError(f"{y!r} has no incoming edge")
        return self._pred_action[y]

    def depth(self, x: str) -> int:
        self._require_node(x)
        return self._depth[x]

    def _require_node(self, x: str) -> None:
        if x not in self.nodes:
            raise ValueError(f"unknown node {x!r}")

    # -- precedence, paths, and runs -----------------------------------------

    def weak_predecessors(self, x: str) -> tuple[str, ...]:
        """The root-to-x path, root first (equals {x* | x* ⪯ x})."""
        self._require_node(x)
        chain = [x]
        while chain[-1] != self.root:
            chain.append(self._pred[chain[-1]])
        chain.reverse()
        return tuple(chain)

    def precedes(self, x1: str, x2: str, strict: bool = False) -> bool:
        """Weak (or strict) precedence: a path from x1 to x2 exists."""
        self._require_node(x1)
        self._require_node(x2)
        if x1 == x2:
            return not strict
        if self._depth[x1] >= self._depth[x2]:
            return False
        x = x2
        while self._depth[x] > self._depth[x1]:
            x = self._pred[x]
        return x == x1

    def run_closure(self, nodes: Iterable[str]) -> tuple[str, ...] | None:
        """R(N) when it is a finite run, else None.

        R(N) is a run exactly when N has a ⪯-maximum that is an endnode; a
        non-chain N or a maximum that is still a decision node is not a run.
        """
        ns = set(nodes)
        if not ns:
            raise ValueError("run closure of an empty node set")
        for x in ns:
            self._require_node(x)
        top = max(ns, key=lambda x: (self._depth[x], x))
        chain = self.weak_predecessors(top)
        if not ns.issubset(chain):
            return None
        if top not in self.endnodes:
            return None
        return chain

    def runs(self) -> tuple[tuple[str, ...], ...]:
        """All finite runs, one per endnode, sorted by endnode label."""
        if self._runs is None:
            self._runs = tuple(self.weak_predecessors(y) for y in sorted(self.endnodes))
        return self._runs

    def is_run(self, z: Sequence[str]) -> bool:
        zt = tuple(z)
        return bool(zt) and zt[-1] in self.endnodes and zt == self.weak_predecessors(zt[-1])

    def subtree_nodes(self, x: str) -> list[str]:
        """All nodes weakly after x, in DFS order."""
        self._require_node(x)
        out = []
        stack = [x]
        while stack:
            n = stack.pop()
            out.append(n)
            for _, y in reversed(self._children.get(n, ())):
                stack.append(y)
        return out


def validate(q: Iterable[Quintuple]) -> Pentaform:
    """Check all eight axioms and build the derived structure.

    Raises :class:`InvalidPentaform` carrying every violated axiom with a
    concrete witness; an empty set fails the single-root axiom.
    """
    qs = list(q)
    violations = check_axioms(qs)
    if violations:
        raise InvalidPentaform(violations)
    return Pentaform(qs)
