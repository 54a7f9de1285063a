"""Discrete-time SIR dynamics on a graph.

Each step every infected node tries to infect each susceptible neighbour
independently with probability ``beta``, then recovers with probability
``gamma``. Nodes infected during a step start transmitting on the next one.
"""

import csv
from dataclasses import dataclass, field

import numpy as np

SUSCEPTIBLE, INFECTED, RECOVERED = 0, 1, 2


class SirInputError(ValueError):
    pass


@dataclass
class SirParams:
    beta: float = 0.3
    gamma: float = 0.5
    initial_infected: int | list = 10
    max_steps: int = 1000

    def __post_init__(self):
        for name in ("beta", "gamma"):
            x = getattr(self, name)
            if not 0.0 <= x <= 1.0:
                raise SirInputError(f"{name} must lie in [0, 1], got {x}")
        if self.max_steps < 0:
            raise SirInputError("max_steps must be non-negative")
        ii = self.initial_infected
        if isinstance(ii, (int, np.integer)):
            if ii < 1:
                raise SirInputError("initial_infected must be >= 1")
        elif len(ii) < 1:
            raise SirInputError("initial_infected must name at least one node")


@dataclass
class SirTrace:
    """Compartment counts per step, starting with the initial state at t=0."""

    t: list = field(default_factory=list)
    S: list = field(default_factory=list)
    I: list = field(default_factory=list)
    R: list = field(default_factory=list)
    meta: dict = field(default_factory=dict)

    def __len__(self):
        return len(self.t)

    def rows(self):
        return list(zip(self.t, self.S, self.I, self.R))

    def write_csv(self, path):
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["t", "S", "I", "R"])
            w.writerows(self.rows())


def run_sir(g, params=None, seed=None):
    """Simulate one SIR epidemic on ``g``.

    Parameters
    ----------
    g : Graph
    params : SirParams, optional
        Defaults to beta=0.3, gamma=0.5, 10 random seed nodes.
    seed : int or numpy.random.Generator, optional

    Returns
    -------
    SirTrace
        Ends when no node is infected or after ``max_steps`` steps.
    """
    if params is None:
        params = SirParams()
    n = g.node_count
    if n == 0:
        raise SirInputError("cannot run SIR on an empty graph")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)

    ii = params.initial_infected
    if isinstance(ii, (int, np.integer)):
        if ii > n:
            raise SirInputError(f"initial_infected={ii} exceeds n={n}")
        seeds = rng.choice(n, size=int(ii), replace=False)
    else:
        seeds = np.unique(np.asarray(ii, dtype=np.int64))
        if seeds.min() < 0 or seeds.max() >= n:
            raise SirInputError("initial infected node id out of range")

    csr = g.to_csr()
    indptr, indices = csr.indptr, csr.indices
    state = np.zeros(n, dtype=np.int8)
    state[seeds] = INFECTED
    infected = np.sort(seeds)

    trace = SirTrace(meta={"beta": params.beta, "gamma": params.gamma,
                           "initial_infected": infected.tolist(),
                           "max_steps": params.max_steps})
    s_count, i_count, r_count = n - infected.size, infected.size, 0

    def record(t):
        trace.t.append(t)
        trace.S.append(s_count)
        trace.I.append(i_count)
        trace.R.append(r_count)

    record(0)
    t = 0
    while i_count > 0 and t < params.max_steps:
        t += 1
        # every (infected, neighbour) contact, neighbour lists concatenated
        starts = indptr[infected]
        lens = indptr[infected + 1] - starts
        total = int(lens.sum())
        if total:
            offs = np.repeat(starts - np.cumsum(lens) + lens, lens) + np.arange(total)
            targets = indices[offs]
            targets = targets[state[targets] == SUSCEPTIBLE]
            hit = targets[rng.random(targets.size) < params.beta]
            new = np.unique(hit)
        else:
            new = np.empty(0, dtype=np.int64)
        recover = infected[rng.random(infected.size) < params.gamma]
        state[recover] = RECOVERED
        state[new] = INFECTED
        infected = np.union1d(infected[state[infected] == INFECTED], new)
        s_count -= new.size
        r_count += recover.size
        i_count = infected.size
        record(t)
    return trace
