"""Tour 6: the file formats and the batch CLI.

Every object round-trips through a canonical JSON form, and the `pentaform`
command exposes the library as a batch tool with meaningful exit codes
(0 holds, 1 fails, 2 input error, 3 resource cap, 4 inconclusive).
"""

import pathlib
import tempfile

from pentaform import cli, fileio
from pentaform.fixtures import cry_wolf, cry_wolf_calm_strategy, entry_game, entry_spe_strategy

workdir = pathlib.Path(tempfile.mkdtemp(prefix="pentaform-demo-"))
game_path = workdir / "entry.game"
strategy_path = workdir / "entry_spe.strategy"
system_path = workdir / "crywolf.system"
sigma_path = workdir / "calm.strategy"
dot_path = workdir / "entry.dot"

fileio.save_game(game_path, entry_game())
fileio.save_strategy(strategy_path, entry_spe_strategy())
fileio.save_system(system_path, cry_wolf())
fileio.save_stationary_strategy(sigma_path, cry_wolf_calm_strategy())

print("canonical game file:")
print(game_path.read_text())

assert fileio.load_game(game_path) == entry_game()
print("load(save(game)) == game\n")

for argv in (
    ["validate", str(game_path.with_suffix(".game"))],
    ["check", str(game_path), str(strategy_path), "--property", "spe"],
    ["solve", str(game_path)],
    ["inspect", str(game_path), "--pieces", "--dot", str(dot_path)],
    ["stationary", str(system_path), "convergence"],
    ["stationary", str(system_path), "certify", str(sigma_path)],
):
    print(f"$ pentaform {' '.join(argv)}")
    code = cli.main(argv)
    print(f"(exit {code})\n")

print("DOT export starts with:")
print("\n".join(dot_path.read_text().splitlines()[:6]))
