"""Solve for a rational associator and check its axioms.

Run with ``python3 demos/associator.py``.
"""

# %%
from __future__ import annotations

from vkit.assoc import export_text, hilbert_dims, normal_basis, solve_associator, verify_axioms

# %% Size of the three-strand algebra in each degree
print("dims of A(3):", hilbert_dims(3, 5))
print("normal words of degree 2:", normal_basis(3, 2))

# %% Degree-by-degree solve
R, phi, logs = solve_associator(4)
for log in logs:
    print(f"degree {log.degree}: {log.unknowns} unknowns, {log.equations} equations, cocycle checks {log.d_mu_zero and log.psi_relations_zero}")

# %% The solution, in words of adjacent generators where possible
print(export_text(phi))

# %% Every residual is exactly zero
for name, res in zip(("pentagon", "hexagon+", "hexagon-"), verify_axioms(R, phi, 4)):
    print(name, "zero" if res.is_zero() else res.to_text())
