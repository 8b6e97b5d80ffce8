"""Finitely generated infinite-horizon games and their quotient analysis.

A stationary system is a finite set of piece-class templates with exit rules:
each template endnode either ends the game with a terminal profile or
continues into a fresh copy of some class.  Unfolding from the initial class
generates an infinite pentaform whose subroots are exactly the class paths;
node labels concatenate exit labels, so the piece at path p of class c uses
labels p ⊕ (local label).

Two utility models are supported.  DiscountedAccumulation sums per-visit
rewards with a factor β ∈ (0,1) (terminal profiles are the final summand,
taken at the day they occur).  AbsoluteTerminal takes terminal profiles
as-is and requires an explicit utility profile for every simple class cycle;
infinite runs that settle into a cycle get that profile, and systems whose
class graph admits aperiodic infinite runs are only partially specified.

Everything infinite is analyzed on the finite class quotient: continuation
values solve w_c = r(σ-exit) + β·w_next exactly, and the utility of any
concrete subgame is a positive affine image of the quotient, so one Nash scan
per class settles piecewise-Nashness for all infinitely many pieces at once.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from .core import Pentaform, Quintuple, validate
from .game import (
    Game,
    ResourceCapError,
    Verdict,
    enumerate_piece_profiles,
    is_pure_nash,
    profile_cap,
)
from .numbers import Profile, Scalar, is_finite, make_profile, profiles_equal
from .partition import subroots
from .strategy import trace, validate_strategy


@dataclass(frozen=True)
class Exit:
    """What happens at one template endnode: stop with a profile, or continue
    into `next_class` (the reward is the terminal profile, or the per-visit
    reward of the continue edge)."""

    reward: Mapping[str, Scalar]
    next_class: str | None = None

    @property
    def is_terminal(self) -> bool:
        return self.next_class is None


@dataclass(frozen=True)
class PieceClass:
    """One piece template (a finite pentaform rooted at the empty label) with
    every endnode classified by an exit rule."""

    template: Pentaform
    exits: Mapping[str, Exit]


@dataclass(frozen=True)
class DiscountedAccumulation:
    beta: Fraction


@dataclass(frozen=True)
class AbsoluteTerminal:
    # canonical cycle tuple (min rotation) -> utility profile of runs that
    # settle into that cycle
    cycle_utilities: Mapping[tuple[str, ...], Mapping[str, Scalar]]


StationaryStrategy = dict  # class id -> {template situation -> action}


class StationarySystem:
    """Class templates + exit rules + utility model, validated on construction.

    Validation enforces what the quotient analysis needs: templates rooted at
    the empty label with no interior subroots (so instantiated subroots are
    exactly the class paths), classified endnodes, reachable classes,
    prefix-free continue labels per class, finite rewards under discounting,
    and a declared utility for every simple class cycle under the
    absolute-terminal model.
    """

    def __init__(self, classes: Mapping[str, PieceClass], initial: str, model,
                 stakeholders: Iterable[str]):
        self.stakeholders = frozenset(str(k) for k in stakeholders)
        self.model = model
        self.initial = initial
        if not classes:
            raise ValueError("a stationary system needs at least one class")
        if initial not in classes:
            raise ValueError(f"initial class {initial!r} is not defined")

        normalized: dict[str, PieceClass] = {}
        for cid in sorted(classes):
            cls = classes[cid]
            tmpl = cls.template
            if tmpl.root != "":
                raise ValueError(f"class {cid!r}: template root must be the empty label, got {tmpl.root!r}")
            if not tmpl.players <= self.stakeholders:
                raise ValueError(f"class {cid!r}: players {sorted(tmpl.players - self.stakeholders)} not stakeholders")
            if subroots(tmpl) != frozenset({""}):
                raise ValueError(
                    f"class {cid!r}: template has interior subroots; pieces would not match classes")
            if set(cls.exits) != set(tmpl.endnodes):
                missing = sorted(tmpl.endnodes - set(cls.exits))
                extra = sorted(set(cls.exits) - tmpl.endnodes)
                raise ValueError(f"class {cid!r}: exits mismatch (missing {missing}, extra {extra})")
            exits: dict[str, Exit] = {}
            for label in sorted(cls.exits):
                e = cls.exits[label]
                if e.next_class is not None and e.next_class not in classes:
                    raise ValueError(f"class {cid!r}: exit {label!r} continues into unknown class {e.next_class!r}")
                exits[label] = Exit(make_profile(e.reward, self.stakeholders), e.next_class)
            cont = [label for label in exits if not exits[label].is_terminal]
            for a in cont:
                for b in cont:
                    if a != b and b.startswith(a):
                        raise ValueError(f"class {cid!r}: continue labels {a!r} and {b!r} are not prefix-free")
            normalized[cid] = PieceClass(tmpl, exits)
        self.classes = normalized

        if isinstance(model, DiscountedAccumulation):
            if not isinstance(model.beta, Fraction) or not (0 < model.beta < 1):
                raise ValueError("discount factor must be a Fraction in (0, 1)")
            for cid, cls in self.classes.items():
                for label, e in cls.exits.items():
                    if any(not is_finite(x) for x in e.reward.values()):
                        raise ValueError(f"class {cid!r}: discounted accumulation requires finite rewards ({label!r})")
        elif isinstance(model, AbsoluteTerminal):
            declared = {}
            for cyc, prof in model.cycle_utilities.items():
                declared[canonical_cycle(tuple(cyc))] = make_profile(prof, self.stakeholders)
            needed = set(self._simple_cycles())
            missing = sorted(needed - set(declared))
            extra = sorted(set(declared) - needed)
            if missing or extra:
                raise ValueError(
                    f"absolute-terminal model must declare exactly the simple class cycles; "
                    f"missing {missing}, unknown {extra}")
            self.model = AbsoluteTerminal(declared)
        else:
            raise ValueError(f"unknown utility model {model!r}")

        reachable = self.reachable_from(initial)
        unreachable = sorted(set(self.classes) - reachable)
        if unreachable:
            raise ValueError(f"classes {unreachable} are unreachable from the initial class")

    # -- class graph -----------------------------------------------------------

    def continue_graph(self) -> dict[str, set[str]]:
        return {
            cid: {e.next_class for e in cls.exits.values() if not e.is_terminal}
            for cid, cls in self.classes.items()
        }

    def reachable_from(self, cid: str) -> set[str]:
        graph = self.continue_graph()
        seen = {cid}
        stack = [cid]
        while stack:
            for nxt in graph[stack.pop()]:
                if nxt not in seen:
                    seen.add(nxt)
                    stack.append(nxt)
        return seen

    def _simple_cycles(self) -> list[tuple[str, ...]]:
        return simple_cycles(self.continue_graph())

    def zero_profile(self) -> Profile:
        return {k: Fraction(0) for k in self.stakeholders}

    def __repr__(self) -> str:
        kind = "discounted" if isinstance(self.model, DiscountedAccumulation) else "absolute-terminal"
        return f"StationarySystem(classes={sorted(self.classes)}, initial={self.initial!r}, model={kind})"


def canonical_cycle(cycle: tuple[str, ...]) -> tuple[str, ...]:
    """Rotate a simple cycle so it starts at its smallest class id."""
    if not cycle:
        raise ValueError("empty cycle")
    rotations = [cycle[i:] + cycle[:i] for i in range(len(cycle))]
    return min(rotations)


def simple_cycles(graph: Mapping[str, set[str]]) -> list[tuple[str, ...]]:
    """All simple cycles of a small digraph, each starting at its min node."""
    cycles: list[tuple[str, ...]] = []

    def walk(start: str, node: str, path: list[str], seen: set[str]) -> None:
        for nxt in sorted(graph.get(node, ())):
            if nxt == start:
                cycles.append(tuple(path))
            elif nxt > start and nxt not in seen:
                seen.add(nxt)
                walk(start, nxt, path + [nxt], seen)
                seen.remove(nxt)

    for start in sorted(graph):
        walk(start, start, [start], {start})
    return sorted(cycles)


def _sccs(graph: Mapping[str, set[str]]) -> list[frozenset]:
    reach: dict[str, set[str]] = {}
    for c in graph:
        seen = {c}
        stack = [c]
        while stack:
            for nxt in graph.get(stack.pop(), ()):
                if nxt not in seen:
                    seen.add(nxt)
                    stack.append(nxt)
        reach[c] = seen
    out = []
    for c in graph:
        comp = frozenset(d for d in graph if d in reach[c] and c in reach[d])
        if comp not in out:
            out.append(comp)
    return out


def has_aperiodic_runs(sys: StationarySystem) -> bool:
    """True when some strongly connected component holds two distinct simple
    cycles, i.e. infinite class paths exist that never settle into a lasso."""
    graph = sys.continue_graph()
    cycles = simple_cycles(graph)
    for comp in _sccs(graph):
        if sum(1 for cyc in cycles if set(cyc) <= comp) >= 2:
            return True
    return False


# -- instantiation -------------------------------------------------------------


def _relabel_node(prefix: str, local: str) -> str:
    return prefix + local


def _relabel_situation(prefix: str, local: str) -> str:
    return "+".join(prefix + part for part in local.split("+"))


@dataclass(frozen=True)
class _PieceInstance:
    prefix: str
    class_id: str
    level: int
    accrued: tuple  # sorted (stakeholder, Fraction) pairs; () when unused


def _expand(sys: StationarySystem, depth: int, with_accrued: bool):
    """All piece instances with class-path length ≤ depth, plus the boundary
    continue-exits of the deepest layer."""
    if depth < 1:
        raise ValueError("instantiation depth must be at least 1")
    beta = sys.model.beta if with_accrued else None
    zero = tuple(sorted(sys.zero_profile().items()))
    pieces = [_PieceInstance("", sys.initial, 0, zero)]
    boundary: list[tuple[str, str, _PieceInstance, str]] = []
    frontier = pieces[:]
    for level in range(depth):
        nxt = []
        for inst in frontier:
            cls = sys.classes[inst.class_id]
            for label in sorted(cls.exits):
                e = cls.exits[label]
                if e.is_terminal:
                    continue
                if with_accrued:
                    acc = dict(inst.accrued)
                    step = beta ** inst.level
                    accrued = tuple(sorted((k, acc[k] + step * e.reward[k]) for k in acc))
                else:
                    accrued = zero
                child = _PieceInstance(inst.prefix + label, e.next_class, inst.level + 1, accrued)
                nxt.append(child)
        pieces.extend(nxt)
        frontier = nxt
    for inst in frontier:
        cls = sys.classes[inst.class_id]
        for label in sorted(cls.exits):
            e = cls.exits[label]
            if not e.is_terminal:
                boundary.append((inst.prefix + label, e.next_class, inst, label))
    return pieces, boundary


def _piece_quintuples(sys: StationarySystem, pieces) -> list[Quintuple]:
    out = []
    for inst in pieces:
        for q in sys.classes[inst.class_id].template.quintuples:
            out.append(Quintuple(
                q.player,
                _relabel_situation(inst.prefix, q.situation),
                _relabel_node(inst.prefix, q.decision_node),
                q.action,
                _relabel_node(inst.prefix, q.successor),
            ))
    if len(set(out)) != len(out):
        raise ValueError("template labels collide when concatenated; rename template nodes")
    return out


@dataclass(frozen=True)
class BoundaryExit:
    node: str
    class_id: str
    accrued: Profile  # discounted rewards earned strictly before entering the class
    level: int        # class-path length of the boundary subroot
    low: Profile
    high: Profile


@dataclass(frozen=True)
class BoundedInstantiation:
    """A depth-bounded unfolding whose cut endnodes carry exact value brackets."""

    form: Pentaform
    stakeholders: frozenset
    beta: Fraction
    terminal_utilities: Mapping[str, Profile]
    boundary: Mapping[str, BoundaryExit]

    def game(self, continuation: Mapping[str, Mapping[str, object]]) -> Game:
        """Point-instantiate the brackets with one continuation profile per class."""
        utilities = {y: dict(p) for y, p in self.terminal_utilities.items()}
        for node, b in self.boundary.items():
            if b.class_id not in continuation:
                raise ValueError(f"continuation missing class {b.class_id!r}")
            w = make_profile(continuation[b.class_id], self.stakeholders)
            factor = self.beta ** b.level
            utilities[node] = {k: b.accrued[k] + factor * w[k] for k in b.accrued}
        return Game(self.form, self.stakeholders, utilities)


def instantiate(sys: StationarySystem, depth: int, mode: str = "structural"):
    """Unfold all pieces with class-path length ≤ depth.

    Structural mode returns the validated pentaform only.  Bounded mode
    (discounted models only) additionally prices every true terminal exactly
    and brackets every cut endnode by accrued ± β^level · conceivable bounds.
    """
    if mode == "structural":
        pieces, _ = _expand(sys, depth, with_accrued=False)
        return validate(_piece_quintuples(sys, pieces))
    if mode != "bounded":
        raise ValueError(f"unknown instantiation mode {mode!r}")
    if not isinstance(sys.model, DiscountedAccumulation):
        raise ValueError("bounded instantiation is unsupported for absolute-terminal models")
    beta = sys.model.beta
    pieces, boundary_exits = _expand(sys, depth, with_accrued=True)
    form = validate(_piece_quintuples(sys, pieces))

    terminal_utilities: dict[str, Profile] = {}
    for inst in pieces:
        cls = sys.classes[inst.class_id]
        acc = dict(inst.accrued)
        step = beta ** inst.level
        for label, e in cls.exits.items():
            if e.is_terminal:
                node = _relabel_node(inst.prefix, label)
                terminal_utilities[node] = {k: acc[k] + step * e.reward[k] for k in acc}

    boundary: dict[str, BoundaryExit] = {}
    for node, class_id, inst, label in boundary_exits:
        e = sys.classes[inst.class_id].exits[label]
        acc = dict(inst.accrued)
        step = beta ** inst.level
        accrued = {k: acc[k] + step * e.reward[k] for k in acc}
        level = inst.level + 1
        lo, hi = {}, {}
        for k in sorted(sys.stakeholders):
            b_lo, b_hi = conceivable_bounds(sys, class_id, k)
            factor = beta ** level
            lo[k] = accrued[k] + factor * b_lo
            hi[k] = accrued[k] + factor * b_hi
        boundary[node] = BoundaryExit(node, class_id, accrued, level, lo, hi)
    return BoundedInstantiation(form, sys.stakeholders, beta, terminal_utilities, boundary)


def truncated_game(sys: StationarySystem, depth: int,
                   continuation: Mapping[str, Mapping[str, object]]) -> Game:
    """A finite game cut at `depth` with explicit per-class boundary profiles.

    Works for both utility models; under discounting the boundary profile is
    discounted and added to the accrued rewards, under absolute-terminal it
    is used as-is.
    """
    if isinstance(sys.model, DiscountedAccumulation):
        return instantiate(sys, depth, "bounded").game(continuation)
    pieces, boundary_exits = _expand(sys, depth, with_accrued=False)
    form = validate(_piece_quintuples(sys, pieces))
    utilities: dict[str, Profile] = {}
    for inst in pieces:
        cls = sys.classes[inst.class_id]
        for label, e in cls.exits.items():
            if e.is_terminal:
                utilities[_relabel_node(inst.prefix, label)] = dict(e.reward)
    for node, class_id, _inst, _label in boundary_exits:
        if class_id not in continuation:
            raise ValueError(f"continuation missing class {class_id!r}")
        utilities[node] = make_profile(continuation[class_id], sys.stakeholders)
    return Game(form, sys.stakeholders, utilities)


def induced_strategy(sys: StationarySystem, sigma: Mapping[str, Mapping[str, str]],
                     depth: int) -> dict[str, str]:
    """Replicate a stationary strategy over every piece of a truncation."""
    sigma = validate_stationary_strategy(sys, sigma)
    pieces, _ = _expand(sys, depth, with_accrued=False)
    out: dict[str, str] = {}
    for inst in pieces:
        for local_sit, action in sigma[inst.class_id].items():
            out[_relabel_situation(inst.prefix, local_sit)] = action
    return out


# -- strategies and values ------------------------------------------------------


def validate_stationary_strategy(sys: StationarySystem,
                                 sigma: Mapping[str, Mapping[str, str]]) -> StationaryStrategy:
    """Total and feasible per class template."""
    missing = sorted(set(sys.classes) - set(sigma))
    if missing:
        raise ValueError(f"stationary strategy missing classes {missing}")
    extra = sorted(set(sigma) - set(sys.classes))
    if extra:
        raise ValueError(f"stationary strategy names unknown classes {extra}")
    return {c: validate_strategy(sys.classes[c].template, sigma[c]) for c in sorted(sigma)}


def _sigma_exit(sys: StationarySystem, sigma: StationaryStrategy, cid: str) -> Exit:
    cls = sys.classes[cid]
    end = trace(cls.template, sigma[cid])[-1]
    return cls.exits[end]


def _chain_values(sys: StationarySystem, exit_of: Mapping[str, Exit]) -> dict[str, Profile]:
    """Exact per-class run values when each class commits to one exit.

    Discounted chains fold terminal tails and solve σ-cycles geometrically;
    absolute-terminal chains copy the eventual terminal or declared cycle
    profile back along the chain.
    """
    discounted = isinstance(sys.model, DiscountedAccumulation)
    beta = sys.model.beta if discounted else None
    w: dict[str, Profile] = {}

    def step(e: Exit, nxt: Profile) -> Profile:
        if discounted:
            return {k: e.reward[k] + beta * nxt[k] for k in nxt}
        return dict(nxt)

    for start in sorted(sys.classes):
        if start in w:
            continue
        path: list[str] = []
        pos: dict[str, int] = {}
        cur = start
        while cur not in w and cur not in pos:
            pos[cur] = len(path)
            path.append(cur)
            e = exit_of[cur]
            if e.is_terminal:
                w[cur] = dict(e.reward)
                break
            cur = e.next_class
        if path[-1] not in w and cur in pos:
            cyc = path[pos[cur]:]
            if discounted:
                total = sys.zero_profile()
                for m, d in enumerate(cyc):
                    r = exit_of[d].reward
                    total = {k: total[k] + beta**m * r[k] for k in total}
                denom = 1 - beta ** len(cyc)
                w[cyc[0]] = {k: total[k] / denom for k in total}
                for m in range(len(cyc) - 1, 0, -1):
                    nxt = w[cyc[0]] if m == len(cyc) - 1 else w[cyc[m + 1]]
                    w[cyc[m]] = step(exit_of[cyc[m]], nxt)
            else:
                key = canonical_cycle(tuple(cyc))
                profile = sys.model.cycle_utilities[key]
                for d in cyc:
                    w[d] = dict(profile)
        for d in reversed(path):
            if d in w:
                continue
            e = exit_of[d]
            w[d] = step(e, w[e.next_class])
    return w


def continuation_values(sys: StationarySystem,
                        sigma: Mapping[str, Mapping[str, str]]) -> dict[str, Profile]:
    """The value of entering a fresh piece of each class and obeying σ forever."""
    sigma = validate_stationary_strategy(sys, sigma)
    exit_of = {c: _sigma_exit(sys, sigma, c) for c in sys.classes}
    return _chain_values(sys, exit_of)


def parse_subroot_label(sys: StationarySystem, label: str) -> tuple[list[Exit], str]:
    """Split a subroot label into its continue-exit path; returns the exits
    taken and the class reached."""
    cur = sys.initial
    rest = label
    exits: list[Exit] = []
    while rest:
        cls = sys.classes[cur]
        matches = [lab for lab, e in sorted(cls.exits.items())
                   if not e.is_terminal and rest.startswith(lab)]
        if not matches:
            raise ValueError(f"malformed subroot label {label!r}: no continue exit of class "
                             f"{cur!r} matches {rest!r}")
        lab = matches[0]
        e = cls.exits[lab]
        exits.append(e)
        rest = rest[len(lab):]
        cur = e.next_class
    return exits, cur


def value_at(sys: StationarySystem, sigma: Mapping[str, Mapping[str, str]], label: str) -> Profile:
    """Authentic value at a concrete subroot: accrued rewards plus the
    discounted continuation of its class (continuation alone when absolute)."""
    exits, cid = parse_subroot_label(sys, label)
    w = continuation_values(sys, sigma)
    if not isinstance(sys.model, DiscountedAccumulation):
        return dict(w[cid])
    beta = sys.model.beta
    total = sys.zero_profile()
    for m, e in enumerate(exits):
        total = {k: total[k] + beta**m * e.reward[k] for k in total}
    factor = beta ** len(exits)
    return {k: total[k] + factor * w[cid][k] for k in total}


# -- conceivable bounds -----------------------------------------------------------


def conceivable_bounds(sys: StationarySystem, cid: str, k: str) -> tuple[Scalar, Scalar]:
    """Exact [inf, sup] of continuation utility from a fresh class-c piece."""
    if cid not in sys.classes:
        raise ValueError(f"unknown class {cid!r}")
    if k not in sys.stakeholders:
        raise ValueError(f"unknown stakeholder {k!r}")
    if isinstance(sys.model, DiscountedAccumulation):
        table = _discounted_extremes(sys)
        return table[cid][k]
    candidates = _absolute_candidates(sys, cid)
    values = [prof[k] for prof in candidates]
    return min(values), max(values)


_EXTREMES_CACHE: dict[int, tuple[StationarySystem, dict]] = {}


def _discounted_extremes(sys: StationarySystem) -> dict[str, dict[str, tuple[Scalar, Scalar]]]:
    """Per-class, per-stakeholder value extremes over all stationary exit
    policies (optimal continuations are stationary, so these are the true
    sup/inf over all runs)."""
    cached = _EXTREMES_CACHE.get(id(sys))
    if cached is not None and cached[0] is sys:
        return cached[1]
    cap = profile_cap()
    count = 1
    for cls in sys.classes.values():
        count *= len(cls.exits)
        if count > cap:
            raise ResourceCapError("stationary bound computation exceeds the policy cap")
    class_ids = sorted(sys.classes)
    pools = [sorted(sys.classes[c].exits) for c in class_ids]

    lo: dict[str, dict[str, Scalar]] = {c: {} for c in class_ids}
    hi: dict[str, dict[str, Scalar]] = {c: {} for c in class_ids}

    def rec(idx: int, choice: dict[str, Exit]) -> None:
        if idx == len(class_ids):
            values = _chain_values(sys, choice)
            for c in class_ids:
                for k, v in values[c].items():
                    if k not in lo[c] or v < lo[c][k]:
                        lo[c][k] = v
                    if k not in hi[c] or v > hi[c][k]:
                        hi[c][k] = v
            return
        c = class_ids[idx]
        for label in pools[idx]:
            choice[c] = sys.classes[c].exits[label]
            rec(idx + 1, choice)

    rec(0, {})
    table = {c: {k: (lo[c][k], hi[c][k]) for k in sys.stakeholders} for c in class_ids}
    _EXTREMES_CACHE[id(sys)] = (sys, table)
    return table


def _absolute_candidates(sys: StationarySystem, cid: str) -> list[Profile]:
    """Utility profiles of all defined runs from a fresh class-c piece:
    reachable terminal exits plus declared utilities of reachable cycles."""
    reach = sys.reachable_from(cid)
    out: list[Profile] = []
    for d in sorted(reach):
        for label in sorted(sys.classes[d].exits):
            e = sys.classes[d].exits[label]
            if e.is_terminal:
                out.append(dict(e.reward))
    for cyc, prof in sorted(sys.model.cycle_utilities.items()):
        if cyc[0] in reach:
            out.append(dict(prof))
    if not out:
        raise ValueError(f"class {cid!r} reaches no terminal exit and no declared cycle")
    return out


# -- convergence (called through the convergence module) ---------------------------


def stationary_convergence(sys: StationarySystem, direction: str, depth: int):
    from .convergence import ConvergenceVerdict, FAILS, HOLDS, UNKNOWN

    if isinstance(sys.model, DiscountedAccumulation):
        beta = sys.model.beta
        # Every continuation value lies in [-M/(1-beta), M/(1-beta)] for
        # M = max absolute reward, so the conceivable increment (decrement)
        # after d pieces is at most beta^d * 2M/(1-beta).
        bound_const = 2 * _max_abs_reward(sys) / (1 - beta)
        return ConvergenceVerdict(HOLDS, certificate=(
            f"discounted accumulation with bounded rewards: the conceivable "
            f"{'increment' if direction == 'upper' else 'decrement'} after d pieces is at most "
            f"beta^d * {bound_const} with beta = {beta}, which vanishes "
            f"(at d = {depth} the bound is {beta**depth * bound_const})"))

    # Absolute-terminal: decide each lasso exactly on the quotient.
    for cyc in simple_cycles(sys.continue_graph()):
        run_utility = sys.model.cycle_utilities[cyc]
        for k in sorted(sys.stakeholders):
            limits = []
            for c in cyc:
                lo, hi = conceivable_bounds(sys, c, k)
                limits.append(hi if direction == "upper" else lo)
            assert len(set(limits)) == 1, "conceivable bound must be constant along a cycle"
            limit = limits[0]
            gap = limit - run_utility[k] if direction == "upper" else run_utility[k] - limit
            if gap > 0:
                return ConvergenceVerdict(FAILS, witness={
                    "run": {"prefix": (), "cycle": cyc},
                    "stakeholder": k,
                    "gap": gap,
                    "limit": limit,
                    "run_utility": run_utility[k],
                })
    if has_aperiodic_runs(sys):
        return ConvergenceVerdict(
            UNKNOWN,
            certificate=f"every declared lasso converges, but aperiodic infinite runs exist whose "
                        f"utility the model does not define (checked to depth {depth})")
    return ConvergenceVerdict(HOLDS, certificate=(
        "every infinite run settles into a declared class cycle and its conceivable "
        f"{'increments' if direction == 'upper' else 'decrements'} vanish on the quotient"))


def _max_abs_reward(sys: StationarySystem) -> Scalar:
    values = [x for cls in sys.classes.values() for e in cls.exits.values() for x in e.reward.values()]
    return max(abs(x) for x in values)


# -- quotient piece games and property checkers -------------------------------------


def quotient_piece_game(sys: StationarySystem, cid: str,
                        continuation: Mapping[str, Mapping[str, object]]) -> Game:
    """The class template priced as a piece game: terminal exits
    keep their profiles, continue exits get reward + β·w (or w as-is)."""
    cls = sys.classes[cid]
    discounted = isinstance(sys.model, DiscountedAccumulation)
    beta = sys.model.beta if discounted else None
    utils: dict[str, Profile] = {}
    for label, e in cls.exits.items():
        if e.is_terminal:
            utils[label] = dict(e.reward)
        else:
            w = make_profile(continuation[e.next_class], sys.stakeholders)
            if discounted:
                utils[label] = {k: e.reward[k] + beta * w[k] for k in w}
            else:
                utils[label] = dict(w)
    return Game(cls.template, sys.stakeholders, utils)


def stationary_authentic(sys: StationarySystem, sigma, values, tol: Scalar = Fraction(0)) -> Verdict:
    """Per class: the claimed continuation equals the true value of obeying σ."""
    v = _check_class_values(sys, values)
    truth = continuation_values(sys, sigma)
    for c in sorted(sys.classes):
        if not profiles_equal(v[c], truth[c], tol):
            return Verdict(False, {"class": c, "value": dict(v[c]), "true_value": dict(truth[c])})
    return Verdict(True)


def stationary_persistent(sys: StationarySystem, sigma, values, tol: Scalar = Fraction(0)) -> Verdict:
    """Per class: the value steps to the next class's value through the σ-exit
    (terminal exits compare against the terminal profile itself)."""
    sigma = validate_stationary_strategy(sys, sigma)
    v = _check_class_values(sys, values)
    discounted = isinstance(sys.model, DiscountedAccumulation)
    beta = sys.model.beta if discounted else None
    for c in sorted(sys.classes):
        e = _sigma_exit(sys, sigma, c)
        if e.is_terminal:
            expected = dict(e.reward)
        elif discounted:
            expected = {k: e.reward[k] + beta * v[e.next_class][k] for k in v[e.next_class]}
        else:
            expected = dict(v[e.next_class])
        if not profiles_equal(v[c], expected, tol):
            return Verdict(False, {"class": c, "value": dict(v[c]), "expected": expected})
    return Verdict(True)


def stationary_admissible(sys: StationarySystem, values) -> Verdict:
    """Per class and stakeholder: the value lies inside the conceivable band."""
    v = _check_class_values(sys, values)
    for c in sorted(sys.classes):
        for k in sorted(sys.stakeholders):
            lo, hi = conceivable_bounds(sys, c, k)
            if not (lo <= v[c][k] <= hi):
                return Verdict(False, {
                    "class": c, "stakeholder": k, "value": v[c][k],
                    "inf_conceivable": lo, "sup_conceivable": hi,
                })
    return Verdict(True)


def stationary_piecewise_nash(sys: StationarySystem, sigma, values) -> Verdict:
    """One Nash scan per class on the quotient piece game settles all pieces:
    each concrete piece's utilities are a positive affine image of the
    quotient's, which preserves best responses."""
    sigma = validate_stationary_strategy(sys, sigma)
    v = _check_class_values(sys, values)
    for c in sorted(sys.classes):
        qg = quotient_piece_game(sys, c, v)
        verdict = _piece_nash(qg, sigma[c])
        if not verdict.holds:
            witness = dict(verdict.witness)
            witness["class"] = c
            return Verdict(False, witness)
    return Verdict(True)


def _piece_nash(qg: Game, profile) -> Verdict:
    from .game import nash_check

    return nash_check(qg, profile)


def _check_class_values(sys: StationarySystem, values) -> dict[str, Profile]:
    missing = sorted(set(sys.classes) - set(values))
    if missing:
        raise ValueError(f"class values missing {missing}")
    extra = sorted(set(values) - set(sys.classes))
    if extra:
        raise ValueError(f"class values given for unknown classes {extra}")
    return {c: make_profile(values[c], sys.stakeholders) for c in sorted(values)}


# -- certification ------------------------------------------------------------------


SPE_CERTIFIED = "spe-certified"
REFUTED = "refuted"
INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class Certificate:
    kind: str
    continuation_values: Mapping[str, Profile] | None
    upper: object
    lower: object
    route: str | None = None
    witness: dict | None = None
    reason: str | None = None

    def __bool__(self) -> bool:
        return self.kind == SPE_CERTIFIED


def certify_spe(sys: StationarySystem, sigma) -> Certificate:
    """Decide subgame perfection of a stationary strategy on the quotient.

    Pipeline: (1) convergence verdicts; (2) the authentic continuation values
    (admissible and persistent by construction); (3) one piecewise-Nash scan
    per class.  A failing scan is a genuine one-piece improvement, so it
    refutes regardless of convergence.  A passing scan certifies under
    lower-convergence (upper-convergence strengthens the certificate's
    route).  When lower-convergence fails, a stationary unilateral deviation
    scan may still refute; otherwise the verdict is inconclusive.
    """
    from .convergence import FAILS, HOLDS, lower_convergent, upper_convergent

    sigma = validate_stationary_strategy(sys, sigma)
    up = upper_convergent(sys)
    lo = lower_convergent(sys)
    w = continuation_values(sys, sigma)
    pwn = stationary_piecewise_nash(sys, sigma, w)
    if not pwn.holds:
        return Certificate(REFUTED, w, up, lo, witness=pwn.witness,
                           reason="a one-piece deviation improves on the strategy "
                                  "(the values are authentic, so the improvement is genuine)")
    if lo.status == HOLDS:
        if __debug__:  # true by construction; a failure indicates an engine bug
            assert stationary_authentic(sys, sigma, w).holds
            assert stationary_persistent(sys, sigma, w).holds
            assert stationary_admissible(sys, w).holds
        route = ("authentic values + piecewise-Nash under lower-convergence"
                 + ("; upper-convergence holds as well" if up.status == HOLDS else
                    "; upper-convergence not established"))
        return Certificate(SPE_CERTIFIED, w, up, lo, route=route)
    if lo.status == FAILS:
        deviation = _stationary_deviation_scan(sys, sigma, w)
        if deviation is not None:
            return Certificate(REFUTED, w, up, lo, witness=deviation,
                               reason="lower-convergence fails and a stationary unilateral "
                                      "deviation improves on the strategy from the root")
        return Certificate(INCONCLUSIVE, w, up, lo,
                           reason="lower-convergence fails, so piecewise-Nashness does not "
                                  "certify, and no improving stationary deviation was found")
    return Certificate(INCONCLUSIVE, w, up, lo,
                       reason=f"lower-convergence undecided: {lo.certificate}")


def _stationary_deviation_scan(sys: StationarySystem, sigma, w) -> dict | None:
    """Search per-player stationary deviations for a true-utility improvement
    at the root; exact because deviation values are quotient chain values."""
    players = sorted({p for cls in sys.classes.values() for p in cls.template.players})
    base = w[sys.initial]
    for i in players:
        slots = [(c, j) for c in sorted(sys.classes)
                 for j in sorted(sys.classes[c].template.situations)
                 if sys.classes[c].template.player_of(j) == i]
        pools = [sorted(sys.classes[c].template.action_set(j)) for c, j in slots]
        count = 1
        for pool in pools:
            count *= len(pool)
        if count > profile_cap():
            return None
        from itertools import product as _product

        for combo in _product(*pools):
            if all(sigma[c][j] == a for (c, j), a in zip(slots, combo)):
                continue
            alt = {c: dict(sigma[c]) for c in sigma}
            for (c, j), a in zip(slots, combo):
                alt[c][j] = a
            w_alt = continuation_values(sys, alt)
            if w_alt[sys.initial][i] > base[i]:
                return {
                    "player": i,
                    "deviation": {f"{c}:{j}": a for (c, j), a in zip(slots, combo)
                                  if sigma[c][j] != a},
                    "strategy_utility": base[i],
                    "deviation_utility": w_alt[sys.initial][i],
                }
    return None


# -- synthesis ------------------------------------------------------------------------


@dataclass(frozen=True)
class StationarySolution:
    strategy: StationaryStrategy
    values: dict


@dataclass(frozen=True)
class StationarySolveFailure:
    kind: str  # "no-pure-equilibrium" | "no-convergence"
    class_id: str | None = None


def solve_stationary(sys: StationarySystem, tol: Fraction = Fraction(1, 10**12),
                     max_sweeps: int = 500) -> StationarySolution | StationarySolveFailure:
    """Value iteration over class profiles for discounted models.

    Each sweep replaces every class value by the payoff profile of a pure
    Nash point of its quotient piece game under the current continuation
    (ties broken toward the lexicographically largest action profile, which
    favors staying in the game when indifferent).  Stops when the sup-norm
    change drops below tol and the selected strategy repeats.
    """
    if not isinstance(sys.model, DiscountedAccumulation):
        raise ValueError("solve_stationary requires a discounted-accumulation model")
    w = {c: sys.zero_profile() for c in sys.classes}
    sigma_prev: dict | None = None
    for _ in range(max_sweeps):
        new_w: dict[str, Profile] = {}
        new_sigma: dict[str, dict] = {}
        for c in sorted(sys.classes):
            qg = quotient_piece_game(sys, c, w)
            chosen = None
            for profile in enumerate_piece_profiles(qg.form, largest_first=True):
                if is_pure_nash(qg, profile):
                    chosen = profile
                    break
            if chosen is None:
                return StationarySolveFailure("no-pure-equilibrium", c)
            new_sigma[c] = chosen
            new_w[c] = dict(qg.utilities[trace(qg.form, chosen)[-1]])
        delta = max(abs(new_w[c][k] - w[c][k]) for c in new_w for k in new_w[c])
        stable = sigma_prev == new_sigma
        w, sigma_prev = new_w, new_sigma
        if delta < tol and stable:
            # Polish: evaluate the stabilized strategy exactly and keep the
            # exact fixed point when it still supports the same equilibria.
            exact = continuation_values(sys, new_sigma)
            if all(is_pure_nash(quotient_piece_game(sys, c, exact), new_sigma[c])
                   for c in sorted(sys.classes)):
                return StationarySolution(new_sigma, exact)
            return StationarySolution(new_sigma, w)
    return StationarySolveFailure("no-convergence", None)


def quotient_subroot_sequence(sys: StationarySystem, sigma, start: str | None = None):
    """The class chain visited by obeying σ, as a symbolic subroot sequence;
    a revisited class is an infinite chain with the cycle as witness."""
    from .strategy import INFINITE_DETECTED, SubrootSequence, TERMINATED

    sigma = validate_stationary_strategy(sys, sigma)
    cur = sys.initial if start is None else start
    if cur not in sys.classes:
        raise ValueError(f"unknown class {cur!r}")
    chain = [cur]
    seen = {cur: 0}
    while True:
        e = _sigma_exit(sys, sigma, chain[-1])
        if e.is_terminal:
            return SubrootSequence(tuple(chain), TERMINATED)
        nxt = e.next_class
        if nxt in seen:
            cycle = tuple(chain[seen[nxt]:])
            return SubrootSequence(tuple(chain), INFINITE_DETECTED, cycle=canonical_cycle(cycle))
        seen[nxt] = len(chain)
        chain.append(nxt)
