"""
Playing the guessing game
=========================

Monte Carlo runs of the discrimination game with post-measurement
information, compared with the exact success probabilities of the same
strategies.
"""

# %%
from pinonlocal import (
    build_example4,
    make_pi_context,
    pi_success_probability,
    pi_values,
    pi_witness_lower_bound,
    simulate,
    trivial_strategy,
    witness_strategy,
)

e = build_example4()

# %%
# With S = {1,3}, always reporting (1,2) is already optimal and needs no
# measurement at all.
ctx = make_pi_context(e, [1, 3])
trivial = trivial_strategy(ctx, (1, 2))
res = simulate(e, ctx, trivial, 1_000_000, seed=1)
print(f"trivial: {res.estimate:.5f} +- {res.stderr:.5f}, exact {pi_success_probability(ctx, trivial):.5f}")

# %%
# With S = {1,2}, one projector onto the negative direction of a witness
# difference beats every separable strategy.
ctx = make_pi_context(e, [1, 2])
bound = pi_witness_lower_bound(ctx, (1, 3), (1, 4))
strategy = witness_strategy(ctx, (1, 3), (1, 4))
res = simulate(e, ctx, strategy, 1_000_000, seed=1)
print(f"witness: {res.estimate:.5f} +- {res.stderr:.5f}, bound {bound:.5f}")

# %%
# The optimal global measurement does at least as well.
pg, result = pi_values(e, ctx)
print(f"optimal: {pg:.6f} (certified {result.converged}, {result.iterations} iterations)")
