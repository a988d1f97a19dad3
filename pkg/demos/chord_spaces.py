"""Walk through chord diagrams, the 4T quotient and Lie algebra weights.

Run with ``python3 demos/chord_spaces.py``.
"""

# %%
from __future__ import annotations

import time

from vkit.diagrams import enumerate_chord_diagrams, format_code
from vkit.spaces import chord_quotient, dim_space
from vkit.weights import weight_poly, weight_span_rank

# %% Chord diagrams up to rotation
for m in range(4):
    codes = [format_code(d.code) or "-" for d in enumerate_chord_diagrams(m)]
    print(f"degree {m}: {len(codes)} diagrams: {', '.join(codes)}")

# %% Dimensions of the framed and reduced quotients
print("m  framed  reduced  seconds")
for m in range(7):
    t0 = time.perf_counter()
    f, r = dim_space(m, "framed"), dim_space(m, "reduced")
    print(f"{m}  {f:6d}  {r:7d}  {time.perf_counter() - t0:7.2f}")

# %% A basis of the degree-4 reduced quotient
q = chord_quotient(4, "reduced")
print("reduced basis in degree 4:", [format_code(c) for c in q.basis_codes()])

# %% Weights as polynomials in N
for code in [(), (1, 1), (1, 2, 1, 2), (1, 2, 3, 1, 2, 3)]:
    print(f"{format_code(code) or '-':12s} gl: {weight_poly(code, 'gl')!s:24s} so: {weight_poly(code, 'so')}")

# %% How much of the framed quotient the default gl/so probes detect
for m in range(6):
    print(f"m={m}: dim {dim_space(m, 'framed')}, weight rank {weight_span_rank(m)}")
