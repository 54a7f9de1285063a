"""Acceptance suite: one PASS/FAIL line per criterion in the terminal summary.

Criteria that need the SNAP ca-GrQc and oregon1_010428 edge lists fail with
an explanatory message when the files are absent from ``$SYNTHNET_DATA`` (or
``data/``). Lines tagged ``[surrogate]`` rerun the same check on a synthetic
co-authorship graph of ca-GrQc size; they print as INFO, carry no gate and
never stand in for the real-data result. ``(positive)`` marks runs with the
alternative ``rd_check="positive"`` closure test.
"""

import json
import subprocess
import sys
import time
from collections import Counter
from fractions import Fraction

import numpy as np
import pytest
from scipy.stats import spearmanr

from synthnet import metrics as M
from synthnet.epidemics import SirParams, run_sir
from synthnet.generators import (
    ALGORITHMS,
    STALL_FACTOR,
    GenParams,
    edge_budget,
    generate,
    powerlaw_degree_sequence,
    triangle_target,
)
from synthnet.graph import Graph
from synthnet.ingest import parse_snap_edgelist, profile, save_graph

from conftest import find_dataset, random_simple_graph, SNAP_FILES, DATA_DIR
from oracles import (
    avg_cc_brute,
    bridge_count_brute,
    core_numbers_brute,
    global_cc_brute,
    triangles_brute,
)
from surrogate import collaboration_graph

SEEDS = range(10)

# published global clustering per generator on ca-GrQc, and its bridge count
GRQC_TARGETS = {"synth": 0.64378, "sage": 0.48748, "siege": 0.37972}
GRQC_TOLERANCE = 0.10
GRQC_EB_COUNT = 1142
GRQC_BUDGET_S = 5 * 60


def _require(key, criterion, cid):
    path = find_dataset(key)
    if path is None:
        msg = f"dataset {SNAP_FILES[key]}.txt missing from {DATA_DIR}"
        criterion(cid, False, msg)
        pytest.fail(msg + "; download it from SNAP, gunzip into that directory "
                    "or point SYNTHNET_DATA at it")
    return path


_PROFILES = {}


def _profile(key, path):
    if key not in _PROFILES:
        _PROFILES[key] = profile(parse_snap_edgelist(path), key)
    return _PROFILES[key]


def _surrogate_profile():
    if "surrogate" not in _PROFILES:
        _PROFILES["surrogate"] = profile(collaboration_graph(), "surrogate")
    return _PROFILES["surrogate"]


def _runs(prof, step=1, eb_count=None, seeds=SEEDS, rd_check="cover"):
    """Generated graphs per algorithm over ``seeds``."""
    params = prof.gen_params(step=step, rd_check=rd_check)
    if eb_count is not None:
        params = GenParams(params.n, params.degrees, params.cg_target, step, eb_count, rd_check)
    return {alg: [generate(alg, params, np.random.default_rng([s, 1])).graph for s in seeds]
            for alg in ALGORITHMS}


def _median(graphs, fn):
    return float(np.median([fn(g) for g in graphs]))


def _fmt(d):
    return " ".join(f"{k}={v:.5f}" for k, v in d.items())


# -- 1 ----------------------------------------------------------------------

def test_c1_oracle_equivalence(criterion):
    rng = np.random.default_rng(2024)
    elapsed = 0.0
    mismatches = []
    for i in range(200):
        n = int(rng.integers(1, 61))
        p = float(rng.uniform(0.02, 0.3))
        edges = random_simple_graph(rng, n, p)
        g = Graph.from_edges(n, edges)
        t = time.perf_counter()
        got = (M.global_cc(g), M.avg_cc(g), M.triangle_total(g),
               M.core_numbers(g).tolist(), M.bridge_count(g))
        elapsed += time.perf_counter() - t
        want = (global_cc_brute(n, edges), avg_cc_brute(n, edges),
                sum(triangles_brute(n, edges)) // 3,
                core_numbers_brute(n, edges), bridge_count_brute(n, edges))
        # avg_cc is a float mean of exact ratios; compare it to the exact value
        # at the rounding of one correctly rounded division
        same = (got[0] == want[0] and abs(Fraction(got[1]) - want[1]) <= Fraction(1, 10**12)
                and got[2:] == want[2:])
        if not same:
            mismatches.append(i)
    ok = not mismatches and elapsed < 10
    criterion("C1 oracle equivalence", ok,
              f"200 graphs, mismatches={len(mismatches)}, metric time {elapsed:.2f}s (< 10 s)")
    assert not mismatches
    assert elapsed < 10


# -- 2 ----------------------------------------------------------------------

def _simple(g):
    return all(u not in g.adjacency[u] and len(set(g.adjacency[u])) == len(g.adjacency[u])
               for u in range(g.node_count))


def test_c2_stall_regime(criterion):
    failures = []
    for seed in range(20):
        rng = np.random.default_rng([seed, 99])
        n = int(rng.integers(300, 3000))
        d = powerlaw_degree_sequence(n, float(rng.uniform(2.0, 2.4)), 2, seed=seed)
        cg = round(float(rng.uniform(0.5, 0.95)), 3)
        step = int(rng.choice([1, 10, 100]))
        assert triangle_target(d, cg) > edge_budget(d), "not a stall-regime sequence"
        params = GenParams(n, d, cg, step, eb_count=int(rng.integers(0, n // 4)))
        limit = STALL_FACTOR * step
        for alg in ALGORITHMS:
            out = generate(alg, params, seed)
            bounded = all(
                ph["attempts"] <= ph.get("closures", ph["edges"])
                + (ph.get("closures", ph["edges"]) + 1) * limit
                for ph in out.phase_log.values())
            if not (bounded and _simple(out.graph) and out.graph.node_count == n):
                failures.append((seed, alg))
    criterion("C2 stall-regime termination", not failures,
              f"20 seeds x 3 generators, T > M in all; failures={failures}")
    assert not failures


# -- 3 ----------------------------------------------------------------------

def test_c3_grqc_table(criterion):
    path = _require("caGrQc", criterion, "C3 ca-GrQc global CC")
    t = time.perf_counter()
    prof = _profile("caGrQc", path)
    runs = _runs(prof, eb_count=GRQC_EB_COUNT)
    med = {a: _median(gs, M.global_cc) for a, gs in runs.items()}
    elapsed = time.perf_counter() - t
    within = all(abs(med[a] - GRQC_TARGETS[a]) <= GRQC_TOLERANCE for a in ALGORITHMS)
    criterion("C3 ca-GrQc global CC", within and elapsed < GRQC_BUDGET_S,
              f"median {_fmt(med)} vs {_fmt(GRQC_TARGETS)} +/-{GRQC_TOLERANCE}; {elapsed:.0f}s")
    assert elapsed < GRQC_BUDGET_S
    assert within, med


@pytest.mark.parametrize("rd_check", ["cover", "positive"])
def test_c3_surrogate(criterion, rd_check):
    prof = _surrogate_profile()
    runs = _runs(prof, eb_count=prof.eb_count, rd_check=rd_check)
    med = {a: _median(gs, M.global_cc) for a, gs in runs.items()}
    avg = {a: _median(gs, M.avg_cc) for a, gs in runs.items()}
    tag = "" if rd_check == "cover" else " (positive)"
    criterion(f"C3[surrogate] global CC{tag}", None,
              f"{_fmt(med)}; source {prof.cg_real:.5f}")
    criterion(f"C3[surrogate] average CC{tag}", None,
              f"{_fmt(avg)}; source {prof.avg_cc_real:.5f}")


# -- 4 ----------------------------------------------------------------------

def _ordered(med):
    return med["synth"] > med["sage"] > med["siege"]


@pytest.mark.parametrize("key", ["caGrQc", "oregon010428"])
def test_c4_cc_ordering(criterion, key):
    cid = f"C4 CC ordering ({key})"
    path = _require(key, criterion, cid)
    prof = _profile(key, path)
    med = {a: _median(gs, M.global_cc) for a, gs in _runs(prof).items()}
    criterion(cid, _ordered(med), f"median global CC {_fmt(med)}")
    assert _ordered(med), med


@pytest.mark.parametrize("rd_check", ["cover", "positive"])
def test_c4_surrogate(criterion, rd_check):
    runs = _runs(_surrogate_profile(), rd_check=rd_check)
    med = {a: _median(gs, M.global_cc) for a, gs in runs.items()}
    avg = {a: _median(gs, M.avg_cc) for a, gs in runs.items()}
    tag = "" if rd_check == "cover" else " (positive)"
    criterion(f"C4[surrogate] global CC ordering{tag}", None, f"{_ordered(med)}: {_fmt(med)}")
    criterion(f"C4[surrogate] average CC ordering{tag}", None, f"{_ordered(avg)}: {_fmt(avg)}")


# -- 5 ----------------------------------------------------------------------

def _tail_rho(degrees, g):
    want = Counter(int(x) for x in degrees)
    got = M.degree_histogram(g)
    keys = sorted(k for k in set(want) | set(got) if k >= 2)
    rho = spearmanr([want.get(k, 0) for k in keys], [got.get(k, 0) for k in keys])[0]
    return float(rho)


def _c5(prof, rd_check="cover"):
    runs = _runs(prof, eb_count=prof.eb_count, rd_check=rd_check)
    return {a: min(_tail_rho(prof.degree_sequence, g) for g in gs) for a, gs in runs.items()}


def test_c5_degree_fidelity(criterion):
    path = _require("caGrQc", criterion, "C5 degree-tail Spearman")
    rho = _c5(_profile("caGrQc", path))
    ok = all(r >= 0.9 for r in rho.values())
    criterion("C5 degree-tail Spearman", ok, f"min over seeds {_fmt(rho)} (>= 0.9)")
    assert ok, rho


@pytest.mark.parametrize("rd_check", ["cover", "positive"])
def test_c5_surrogate(criterion, rd_check):
    rho = _c5(_surrogate_profile(), rd_check)
    tag = "" if rd_check == "cover" else " (positive)"
    criterion(f"C5[surrogate] degree-tail Spearman{tag}", None,
              f"min over seeds {_fmt(rho)} (gate would be >= 0.9)")


# -- 6 ----------------------------------------------------------------------

def _monotone(table):
    vals = [table[k] for k in sorted(table)]
    return all(a >= b for a, b in zip(vals, vals[1:]))


def test_c6_kcore_monotone(criterion):
    from hypothesis import given, settings, strategies as st

    bad = []

    @given(st.integers(10, 400), st.floats(1.8, 3.2), st.floats(0, 1),
           st.integers(1, 30), st.integers(0, 2**32 - 1))
    @settings(max_examples=60, deadline=None, derandomize=True)
    def prop(n, expo, cg, step, seed):
        d = powerlaw_degree_sequence(n, expo, 1, seed=seed)
        params = GenParams(n, d, round(cg, 3), step, eb_count=seed % 11)
        for alg in ALGORITHMS:
            _, kn, ke = M.kcore(generate(alg, params, seed).graph)
            if not (_monotone(kn) and _monotone(ke)):
                bad.append((n, seed, alg))

    prop()
    criterion("C6 k-core monotone (property)", not bad, f"60 examples x 3 generators, violations={len(bad)}")
    assert not bad


def _max_core(prof):
    runs = _runs(prof, eb_count=prof.eb_count)
    return {a: min(int(M.core_numbers(g).max()) for g in gs) for a, gs in runs.items()}


def test_c6_grqc_core_depth(criterion):
    path = _require("caGrQc", criterion, "C6 ca-GrQc max core >= 5")
    depth = _max_core(_profile("caGrQc", path))
    ok = all(v >= 5 for v in depth.values())
    criterion("C6 ca-GrQc max core >= 5", ok, f"min over seeds {depth}")
    assert ok, depth


def test_c6_surrogate(criterion):
    depth = _max_core(_surrogate_profile())
    criterion("C6[surrogate] max core", None, f"min over seeds {depth} (gate would be >= 5)")


# -- 7 ----------------------------------------------------------------------

def _single_peak(I):
    I = np.asarray(I)
    k = int(I.argmax())
    return (I[k] > I[0] and I[-1] == 0
            and (np.diff(I[:k + 1]) >= 0).all() and (np.diff(I[k:]) <= 0).all())


def test_c7_sir_shape(criterion):
    # caGrQc-scale topology: SAGE run on the co-authorship surrogate profile
    t = time.perf_counter()
    prof = _surrogate_profile()
    g = generate("sage", prof.gen_params(step=1), np.random.default_rng([0, 1])).graph
    good = 0
    conserved = True
    for s in SEEDS:
        tr = run_sir(g, SirParams(beta=0.3, gamma=0.5), np.random.default_rng([s, 2]))
        conserved &= all(a + b + c == g.node_count for a, b, c in zip(tr.S, tr.I, tr.R))
        good += _single_peak(tr.I)
    elapsed = time.perf_counter() - t
    ok = good >= 9 and conserved and elapsed < 30
    criterion("C7 SIR single peak", ok,
              f"{good}/10 single-peak to zero, conserved={conserved}, {elapsed:.1f}s (< 30 s)")
    assert ok


# -- 8 ----------------------------------------------------------------------

SCALE_SCRIPT = """
import json, resource, sys, time
from synthnet.generators import GenParams, generate, powerlaw_degree_sequence
alg = sys.argv[1]
d = powerlaw_degree_sequence(10**6, 2.4, 2, 1000, seed=0)
# clustering and bridge count of com-youtube, the size this mirrors
params = GenParams(d.size, d, 0.0808, 20000, eb_count=667090)
t = time.perf_counter()
out = generate(alg, params, 0)
print(json.dumps({"seconds": time.perf_counter() - t, "edges": out.graph.edge_count,
                  "half_degree_sum": int(d.sum()) // 2,
                  "maxrss_mb": resource.getrusage(resource.RUSAGE_SELF).ru_maxrss / 1024}))
"""


@pytest.mark.slow
@pytest.mark.parametrize("alg", ALGORITHMS)
def test_c8_scale(criterion, alg):
    r = subprocess.run([sys.executable, "-c", SCALE_SCRIPT, alg],
                       capture_output=True, text=True, timeout=1200)
    assert r.returncode == 0, r.stderr
    res = json.loads(r.stdout.strip().splitlines()[-1])
    ok = res["seconds"] < 600 and res["maxrss_mb"] < 8 * 1024
    criterion(f"C8 scale n=1e6 ({alg})", ok,
              f"sum(d)/2={res['half_degree_sum']}, m={res['edges']}, "
              f"{res['seconds']:.1f}s (< 600), peak RSS {res['maxrss_mb']:.0f} MB (< 8192)")
    assert 2.5e6 <= res["half_degree_sum"] <= 3.5e6
    assert ok


# -- 9 ----------------------------------------------------------------------

def test_c9_cli_determinism(criterion, tmp_path):
    src = tmp_path / "src.txt"
    save_graph(collaboration_graph(n=1500, m=4000, seed=8), src)
    cli = [sys.executable, "-m", "synthnet.cli"]
    subprocess.run(cli + ["profile", "--input", str(src), "--out", str(tmp_path / "p")], check=True)
    prof = str(tmp_path / "p" / "profile.json")
    same = {}
    for alg in ALGORITHMS:
        outs = []
        for run in ("a", "b"):
            d = tmp_path / f"{alg}{run}"
            subprocess.run(cli + ["generate", "--input", prof, "--algorithm", alg, "--seed", "7",
                                  "--step", "3", "--out", str(d)], check=True)
            outs.append((d / f"src_{alg}_seed7.txt").read_bytes())
        same[alg] = outs[0] == outs[1]
    ok = all(same.values())
    criterion("C9 CLI determinism", ok, f"byte-identical edge lists: {same}")
    assert ok
