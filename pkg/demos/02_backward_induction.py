"""Tour 2: checking and synthesizing equilibria on finite games.

Backward induction runs over the piece partition: deepest pieces first, each
piece game priced by the values already computed below it.
"""

from pentaform import (
    nash_check,
    one_piece_unimprovable,
    piecewise_nash,
    persistent,
    solve_backward,
    spe_check_direct,
)
from pentaform.fixtures import entry_game
from pentaform.numbers import profile_str

game = entry_game()

result = solve_backward(game)
print("backward induction on the entrant/incumbent game")
print(f"  strategy: {result.strategy}")
for t in sorted(result.values):
    print(f"  value at {t!r}: {profile_str(result.values[t])}")

print("\nthe solution passes every checker:")
print(f"  nash:            {nash_check(game, result.strategy).holds}")
print(f"  subgame perfect: {spe_check_direct(game, result.strategy).holds}")
print(f"  persistent:      {persistent(game, result.strategy, result.values).holds}")
print(f"  piecewise-Nash:  {piecewise_nash(game, result.strategy, result.values).holds}")
print(f"  one-piece:       {one_piece_unimprovable(game, result.strategy).holds}")

bad = {"jE": "e", "jI": "f"}
verdict = spe_check_direct(game, bad)
print(f"\nentering ({bad}) is not subgame perfect; the witness re-checks:")
for key in sorted(verdict.witness):
    print(f"  {key}: {verdict.witness[key]}")
