"""Evaluate bundled knot presentations and compare them.

Run with ``python3 demos/knots.py``.
"""

# %%
from __future__ import annotations

from vkit.tangle import BUNDLED, EventSequence, connected_sum, evaluate_corrected, evaluate_normalized, evaluate_singular, validate

# %% What each presentation looks like
for name in BUNDLED:
    seq = EventSequence.bundled(name)
    tr = validate(seq)
    print(f"{name:16s} {len(seq.events):2d} events, {tr.c} critical points, {seq.singular_count} double points")

# %% Corrected values: the unknots agree, so do the trefoils
for name in ("round-unknot", "humped-unknot", "infty", "trefoil-13slice", "trefoil-alt"):
    print(f"--- {name}")
    print(evaluate_corrected(EventSequence.bundled(name), 3).to_text(), end="")

# %% Normalized so that the unknot is 1; connected sum multiplies
t = EventSequence.bundled("trefoil-alt")
a = evaluate_normalized(t, 3)
print("trefoil:", a.to_text(), sep="\n", end="")
print("trefoil # trefoil equals the square:", evaluate_normalized(connected_sum(t, t), 3) == a * a)

# %% Singular knots start at the degree of their double points
for name in ("sing1", "sing2"):
    print(name, evaluate_singular(EventSequence.bundled(name), 3, "framed").to_text(), sep="\n", end="")
