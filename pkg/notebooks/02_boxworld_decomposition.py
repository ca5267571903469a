"""
Two Tsirelson boxes on a line are not genuinely tripartite nonlocal
===================================================================

Place a Tsirelson box on each edge of the three-party line. The summed CHSH
value is 4 sqrt 2, below the foil bound 6, and in fact the whole distribution
splits into four pieces where one pair communicates and the remaining edge
is local. We check locality of each piece with a linear program.
"""

import math

import numpy as np

from netbell import (
    chsh_score,
    is_local_2222,
    line3,
    pr_mix,
    tensor_line,
    tsirelson_box,
    verify_paper_decomposition,
)

# the PR family interpolates between anti-PR (v = 0) and PR (v = 1)
for v in (0.0, 0.25, 0.5, 0.75, 0.8536, 1.0):
    res = is_local_2222(pr_mix(v))
    print(f"pr_mix({v:.4f}): CHSH {chsh_score(pr_mix(v)):+.3f}  local={res.local}")

# a nonlocal box comes with a separating functional
res = is_local_2222(tsirelson_box())
print("\nTsirelson box witness value", round(res.witness_value, 6), "vs local max", round(res.local_max, 6))

# two Tsirelson boxes on the line
line = tensor_line(tsirelson_box(), tsirelson_box())
total = sum(chsh_score(line.edge_box(e)) for e in line3().edges)
print(f"\nline CHSH total {total:.6f} = 4 sqrt 2 = {4 * math.sqrt(2):.6f}")

# the explicit decomposition
cert = verify_paper_decomposition()
print(f"\nw = (3 + 2 sqrt 2)/6 = {cert.w:.7f}")
for c in cert.components:
    print(f"  weight {c.weight:.6f}: left pr_mix({c.left_v}), right pr_mix({c.right_v}),"
          f" local edge {c.local_edge} local={c.local_edge_is_local}")
print("max reconstruction error", cert.max_reconstruction_error, " ok:", cert.ok)

# any other weight breaks the identity
for w in np.linspace(0.95, 0.99, 5):
    print(f"w = {w:.3f}: error {verify_paper_decomposition(w).max_reconstruction_error:.2e}")
