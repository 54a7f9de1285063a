"""
Measuring and comparing topologies
==================================

Compute the metric report of a reference graph and of a synthetic copy,
then line the distributions up side by side.
"""

import tempfile
from pathlib import Path

import numpy as np

from synthnet import generate, measure, profile
from synthnet.compare import compare, write_comparison
from synthnet.graph import Graph

# reference: a small random graph with some dense pockets
rng = np.random.default_rng(0)
ref = Graph(400)
for _ in range(60):
    members = rng.choice(400, size=rng.integers(3, 7), replace=False)
    for i, a in enumerate(members):
        for b in members[i + 1:]:
            ref.add_edge(int(a), int(b))
for _ in range(300):
    ref.add_edge(*map(int, rng.choice(400, size=2, replace=False)))

prof = profile(ref, "reference")
print(f"n={prof.n} m={prof.m} global_cc={prof.cg_real:.4f} bridges={prof.eb_count}")

real = measure(ref, "reference")
synth = measure(generate("siege", prof.gen_params(), seed=1).graph, "siege")

# hop lengths are exact here; pass sources=256 on big graphs to sample
print("hop lengths", dict(sorted(real.hop_histogram.items())))
print("k-core sizes", real.kcore_nodes)

tables, summary, divergences = compare(real, [synth])
print(summary[0])
print(summary[1][0])
for row in divergences[1]:
    print(f"  {row[1]:18s} {row[2]:.4f}")

with tempfile.TemporaryDirectory() as d:
    files = write_comparison(real, [synth], d)
    print("wrote", sorted(Path(p).name for p in files))
