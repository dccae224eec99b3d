"""Tabulating the delayed-choice weak values over the tuner settings."""
# %%
import numpy as np

from cheshire_mzi.scenarios import sweep

grid = np.linspace(0, 2 * np.pi, 13)
table = sweep(grid, grid)
print(f"{len(table)} rows, {table.flagged} flagged as diverged")

# %%
# Where does the polarization live?  |zR| is large where the tuners steer
# the polarization into the right arm.
zr = np.array([[np.nan if r.diverged else abs(r.zR) for r in table[i * 13:(i + 1) * 13]] for i in range(13)])
print("max |zR| off the poles:", np.nanmax(zr).round(2))
print("theta = pi column:", np.round(zr[6], 3))

# %%
# The same table is available as CSV or JSON for plotting elsewhere.
print(table.to_csv().splitlines()[0])
print(table.to_csv().splitlines()[1])
