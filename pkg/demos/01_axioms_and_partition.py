"""Tour 1: quintuple sets, the eight axioms, subroots, and piece forms.

A game tree is stored as nothing but a set of five-column rows.  Everything
else (root, predecessors, information sets, subgame boundaries) is derived.
"""

from pentaform import (
    Quintuple,
    check_axioms,
    piece_partition,
    subroots,
    validate,
)
from pentaform.fixtures import entry_game

game = entry_game()
form = game.form

print("The entrant/incumbent game as a quintuple relation:")
for q in form.quintuples:
    print(f"  ({q.player}, {q.situation}, {q.decision_node}, {q.action}, {q.successor})")

print(f"\nderived root: {form.root!r}")
print(f"derived endnodes: {sorted(form.endnodes)}")
print(f"runs: {form.runs()}")

print("\nSubroots are the decision nodes that open self-contained subgames.")
print(f"subroots: {sorted(subroots(form))}  (perfect information: every decision node)")

print("\nThe piece forms partition the 4 quintuples:")
for t, piece in piece_partition(form).items():
    print(f"  piece at {t!r}: {len(piece)} quintuples, endnodes {sorted(piece.endnodes)}")

print("\nBreak an axiom on purpose: give node 6 a second situation.")
broken = set(form.quintuples) | {Quintuple("Ent", "jE2", "6", "g", "10")}
for violation in check_axioms(broken):
    print(f"  violated {violation}")

print("\nAnd an empty relation has no root at all:")
for violation in check_axioms(frozenset()):
    print(f"  violated {violation}")

validate(form.quintuples)
print("\nthe original game validates cleanly")
