"""Tour 3: an infinite-horizon game certified on its finite quotient.

The wolf/kid/town fable repeats one 8-edge day template forever (until the
wolf attacks).  The day class is the whole analysis surface: continuation
values solve one linear equation, and a single Nash scan of the quotient
piece game covers all infinitely many concrete pieces.
"""

from pentaform import (
    certify_spe,
    continuation_values,
    instantiate,
    solve_stationary,
    subroots,
    value_at,
)
from pentaform.fixtures import cry_wolf, cry_wolf_calm_strategy
from pentaform.numbers import profile_str

wolf = cry_wolf()
calm = cry_wolf_calm_strategy()  # never attack / always cry / never rescue

print("finite truncations of the generated game:")
for depth in (1, 2, 3):
    form = instantiate(wolf, depth)
    print(f"  depth {depth}: {len(form)} quintuples, {len(subroots(form))} subroots")

w = continuation_values(wolf, calm)
print(f"\ncontinuation value of the calm strategy: {profile_str(w['day'])}")
print("authentic values at concrete subroots:")
for label in ("", "6", "7", "77"):
    print(f"  value at {label!r}: {profile_str(value_at(wolf, calm, label))}")
print("(the on-path chain '', '7', '77' shares one value profile)")

cert = certify_spe(wolf, calm)
print(f"\ncertificate: {cert.kind}")
print(f"  upper-convergence: {cert.upper.status}")
print(f"  lower-convergence: {cert.lower.status}")
print(f"  route: {cert.route}")

solution = solve_stationary(wolf)
print("\nvalue iteration over the quotient finds an equilibrium on its own:")
print(f"  strategy: {solution.strategy}")
print(f"  values:   {profile_str(solution.values['day'])}")
print(f"  certified: {certify_spe(wolf, solution.strategy).kind}")
