"""
Brute-force certification of the foil bound
============================================

On three-party graphs with k = 2 or 3 settings per edge the foil model is
small enough to enumerate. One party answers from its own inputs only, the
other two share all inputs. The maximum over every deterministic strategy is
computed with exact integer arithmetic and compared to the closed form.
"""

import time

from netbell import ExpressionTable, chained_bounds, line3, local_max, oracle_max, svetlichny_bound, triangle

for name, g in (("triangle", triangle()), ("line", line3())):
    for k in (2, 3):
        expr = ExpressionTable.chained(g, k)
        t0 = time.perf_counter()
        res = oracle_max(expr, workers=4)
        dt = time.perf_counter() - t0
        print(f"{name:8s} k={k}: oracle {res.bound}, closed form {svetlichny_bound(g, chained_bounds(k)):g},"
              f" local {local_max(expr)}  ({dt:.2f}s)")
        print("   per excluded party:", {v: str(b) for v, b in res.per_vertex.items()})

# doubling the coefficients on one edge changes which party is best excluded
expr = ExpressionTable.chained(triangle(), 2).scaled((0, 1), 2)
res = oracle_max(expr)
print("\nweighted triangle:", res.bound, "excluding party", res.excluded_vertex)
print("per excluded party:", {v: str(b) for v, b in res.per_vertex.items()})
