"""Monte Carlo guessing game with postmeasurement information.

Each trial prepares label ``i`` with probability ``eta_i``, measures the
strategy's POVM over the outcome grid S x S^c, reveals which side of the
partition ``i`` came from and guesses the matching component of the outcome.
Trials run in blocks, each seeded from its own child of a
``numpy.random.SeedSequence`` on the PCG64 generator, so results depend only on
the seed and the block size.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .discrim import check_povm
from .ensembles import PiContext, StateEnsemble, make_pi_context
from .hermlin import ValidationError

DEFAULT_BLOCK = 250_000


@dataclass(frozen=True)
class SimulationResult:
    estimate: float
    stderr: float
    successes: int
    trials: int
    seed: int

    def within(self, value: float, sigmas: float) -> bool:
        return abs(self.estimate - value) <= sigmas * self.stderr


def _outcome_table(context: PiContext, povm: dict) -> np.ndarray:
    """P(outcome | label): rows follow parent labels, columns follow omega."""
    parent = context.parent
    table = np.empty((len(parent), len(context.omega)))
    for r, lab in enumerate(parent.labels):
        rho = parent.state(lab).entries
        for c, w in enumerate(context.omega):
            m = povm.get(w)
            table[r, c] = 0.0 if m is None else float(np.sum(rho * m.entries.T).real)
    table = np.clip(table, 0.0, None)
    return table / table.sum(axis=1, keepdims=True)


def simulate(
    ensemble: StateEnsemble,
    s,
    strategy: dict,
    trials: int,
    seed: int = 0,
    block_size: int = DEFAULT_BLOCK,
) -> SimulationResult:
    """Estimate the success probability of ``strategy`` (outcome -> POVM element)."""
    if trials <= 0:
        raise ValidationError("trials must be positive")
    context = s if isinstance(s, PiContext) else make_pi_context(ensemble, s)
    povm = {tuple(w): m for w, m in strategy.items()}
    extra = set(povm) - set(context.omega)
    if extra:
        raise ValidationError(f"strategy has outcomes outside the grid: {sorted(extra)}")
    check_povm(povm, ensemble.dims)

    table = _outcome_table(context, povm)
    priors = np.asarray(ensemble.priors)
    priors = priors / priors.sum()
    # hit[r, c]: outcome c names label r on label r's side of the partition
    hit = np.zeros_like(table, dtype=bool)
    for r, lab in enumerate(ensemble.labels):
        b = context.pi_bit(lab)
        for c, w in enumerate(context.omega):
            hit[r, c] = w[b] == lab

    n_blocks = -(-trials // block_size)
    children = np.random.SeedSequence(seed).spawn(n_blocks)
    successes = 0
    remaining = trials
    for child in children:
        n = min(block_size, remaining)
        remaining -= n
        rng = np.random.Generator(np.random.PCG64(child))
        per_label = rng.multinomial(n, priors)
        for r, count in enumerate(per_label):
            if count:
                outcomes = rng.multinomial(count, table[r])
                successes += int(outcomes[hit[r]].sum())
    p = successes / trials
    stderr = math.sqrt(p * (1 - p) / trials)
    return SimulationResult(p, stderr, successes, trials, seed)
