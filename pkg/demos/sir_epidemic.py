"""
SIR on a generated contact network
==================================

Spread an infection over a SAGE topology and print the epidemic curve.
"""

import numpy as np

from synthnet import GenParams, SirParams, generate, powerlaw_degree_sequence, run_sir

d = powerlaw_degree_sequence(3000, 2.5, 2, seed=4)
g = generate("sage", GenParams(d.size, d, 0.3), seed=4).graph

# beta: per-contact transmission chance per step; gamma: recovery chance
params = SirParams(beta=0.3, gamma=0.5, initial_infected=10)
trace = run_sir(g, params, seed=np.random.default_rng(1))

peak = int(np.argmax(trace.I))
print(f"peak of {trace.I[peak]} infected at t={peak}; over after t={trace.t[-1]}")
print(f"never infected: {trace.S[-1]} of {g.node_count}")
for t, S, I, R in trace.rows()[:: max(1, len(trace) // 12)]:
    print(f"t={t:3d} S={S:5d} I={I:5d} R={R:5d} " + "#" * (60 * I // g.node_count))
