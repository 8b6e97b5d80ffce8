"""Shared helpers: seeded random corpora and independent brute-force oracles."""

from __future__ import annotations

import random
from itertools import product

import pytest

from pentaform import Game, outcome, player_situations, random_game, utility_of_run
from pentaform.core import Pentaform


def random_strategy(form: Pentaform, rng: random.Random) -> dict:
    return {j: rng.choice(sorted(form.action_set(j))) for j in sorted(form.situations)}


def enumerate_paths_from_root(form: Pentaform) -> dict[str, tuple[str, ...]]:
    """Root-to-node paths by plain DFS over the edge relation (no use of the
    predecessor machinery); the independent oracle for path/run questions."""
    edges: dict[str, list[str]] = {}
    for q in form.quintuples:
        edges.setdefault(q.decision_node, []).append(q.successor)
    paths = {form.root: (form.root,)}
    stack = [form.root]
    while stack:
        x = stack.pop()
        for y in sorted(edges.get(x, ())):
            paths[y] = paths[x] + (y,)
            stack.append(y)
    return paths


def brute_force_runs(form: Pentaform) -> set[tuple[str, ...]]:
    paths = enumerate_paths_from_root(form)
    return {paths[y] for y in form.endnodes}


def brute_force_nash(g: Game, s: dict, cap: int = 50_000) -> bool | None:
    """Literal product enumeration of every player's strategy space; None when
    the space is too large to enumerate."""
    base = utility_of_run(g, outcome(g.form, s))
    for i in sorted(g.form.players):
        sits = sorted(player_situations(g.form, i))
        pools = [sorted(g.form.action_set(j)) for j in sits]
        count = 1
        for pool in pools:
            count *= len(pool)
        if count > cap:
            return None
        for combo in product(*pools):
            alt = dict(s)
            alt.update(zip(sits, combo))
            u = utility_of_run(g, outcome(g.form, alt))
            if u[i] > base[i]:
                return False
    return True


@pytest.fixture(scope="session")
def small_corpus() -> list[Game]:
    return [random_game(seed) for seed in range(120)]


@pytest.fixture(scope="session")
def corpus_strategies(small_corpus) -> list[tuple[Game, dict]]:
    pairs = []
    for idx, g in enumerate(small_corpus):
        rng = random.Random(10_000 + idx)
        for _ in range(2):
            pairs.append((g, random_strategy(g.form, rng)))
    return pairs
