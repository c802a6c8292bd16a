"""
Block positivity and entanglement witnesses
===========================================

A Hermitian operator on two qubits can fail to be positive semidefinite and
still give a nonnegative value on every product state.  Such operators are
entanglement witnesses.  The partial transpose of a Bell projector is the
textbook case.
"""

# %%
import numpy as np

from pinonlocal import (
    HermitianOperator,
    eig_hermitian,
    in_psd,
    in_sep_star,
    is_ew,
    min_product_expectation,
    phi_plus_pt,
    positive_part_split,
    projector,
)

w = phi_plus_pt()
print(np.real_if_close(w.entries * 2))  # the swap operator

# %%
# Its spectrum has a single negative eigenvalue, carried by the singlet.
values, vectors = eig_hermitian(w)
print("eigenvalues", np.round(values, 12))
print("lowest eigenvector", np.round(vectors[0].amplitudes, 6))

# %%
# On product states it equals |<a|b>|^2 / 2, so the product minimum is zero.
value, a, b = min_product_expectation(w)
print(f"product minimum {value:.2e}, |<a|b>| = {abs(a.overlap(b)):.2e}")

# %%
# The three membership tests.  PSD and block-positivity refutations are
# certified; a block-positive verdict comes from a multi-start search and is
# flagged as heuristic.
for verdict in (in_psd(w), in_sep_star(w), is_ew(w)):
    print(f"{verdict.cone.value:<9} {verdict.status.value:<4} margin {verdict.margin:+.3f}  {verdict.confidence.value}")

# %%
# Shifting a Bell projector down breaks block positivity; the OUT verdict
# carries the product vector that proves it.
h = projector("phi+") - HermitianOperator.identity(2, 2) * 0.75
v = in_sep_star(h)
print(v.status.value, round(v.margin, 6), round(h.expectation(v.witness), 6))

# %%
# Splitting the witness into orthogonal positive parts.
plus, minus = positive_part_split(w)
print("Tr W+ =", round(plus.trace(), 12), " Tr W- =", round(minus.trace(), 12))
