"""
Chained games on small networks: bounds and critical visibilities
=================================================================

Each edge of a graph hosts a copy of the k-setting chained game played on a
noisy singlet. We tabulate the four bounds of the game, the foil-model bound
summed over a graph, and the visibility above which the quantum total beats it.
"""

import math

import numpy as np

from netbell import (
    chained_bounds,
    critical_visibility,
    fully_multipartite_visibility,
    line3,
    optimize_k,
    svetlichny_bound,
    triangle,
)

# bounds of one game: local, communication-assisted, quantum, uniform noise
print(" k   B_L  B_S       B_Q  B_N")
for k in range(2, 8):
    b = chained_bounds(k)
    print(f"{k:2d} {b.local:5g} {b.svetlichny:4g} {b.quantum:9.6f} {b.noise:4g}")

# the quantum value approaches the communication bound as k grows
ks = np.arange(2, 51)
ratio = [chained_bounds(int(k)).quantum / chained_bounds(int(k)).svetlichny for k in ks]
print("\nB_Q/B_S at k = 2, 10, 50:", np.round([ratio[0], ratio[8], ratio[-1]], 5))

# foil bound on the triangle and the line, one game per edge
for name, g in (("triangle", triangle()), ("line", line3())):
    bounds = [svetlichny_bound(g, chained_bounds(k)) for k in range(2, 6)]
    vis = [critical_visibility(g, chained_bounds(k)) for k in range(2, 6)]
    print(f"\n{name}: foil bounds {bounds}")
    print(f"{name}: critical visibilities {np.round(vis, 4)}")

# the line cannot be witnessed with CHSH, but more settings help
for name, g in (("triangle", triangle()), ("line", line3())):
    k, v = optimize_k(g, (2, 10))
    print(f"best k on the {name}: {k} (v = {v:.4f})")

# closed form for the triangle at k = 3
print("\n14 / (9 sqrt 3) =", 14 / (9 * math.sqrt(3)))

# fully multipartite graphs: threshold creeps toward 1 as n grows
for n in (3, 4, 6, 10, 20):
    print(f"n = {n:2d}: v_crit = {fully_multipartite_visibility(n):.5f}")
