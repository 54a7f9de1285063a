"""Command-line entry point: ``synthnet {profile,generate,measure,sir,compare}``.

Seeds
-----
``--seed S --seeds N`` runs seeds ``S, S+1, ..., S+N-1``. Each stage draws from
its own stream, ``numpy.random.default_rng([S, stage])`` with stage 1 for
generation, 2 for SIR and 3 for hop-length source sampling, so reruns with
the same seed are bit-identical and stages never share random numbers.

Every command writes ``manifest.json`` into its output directory. The output
directory defaults to ``$SYNTHNET_OUT/<command>`` (``./synthnet_out`` when the
variable is unset).
"""

import argparse
import json
import logging
import os
import platform
import sys

import numpy as np
import scipy

from . import __version__
from .compare import write_comparison
from .epidemics import SirParams, run_sir
from .generators import ALGORITHMS, RD_CHECKS, GeneratorInputError, generate
from .ingest import load_graph, load_profile, parse_snap_edgelist, profile, save_graph, save_profile
from .metrics import MetricReport, measure

log = logging.getLogger("synthnet")

STAGE_GENERATE, STAGE_SIR, STAGE_HOPS = 1, 2, 3


def stage_rng(seed, stage):
    return np.random.default_rng([int(seed), stage])


def _out_dir(args):
    out = args.out or os.path.join(os.environ.get("SYNTHNET_OUT", "synthnet_out"), args.command)
    os.makedirs(out, exist_ok=True)
    return out


def _write_manifest(out, args, outputs, extra=None):
    config = {k: v for k, v in vars(args).items() if k != "func"}
    manifest = {
        "command": args.command,
        "argv": sys.argv[1:],
        "config": config,
        "outputs": sorted(os.path.relpath(p, out) for p in outputs),
        "versions": {"synthnet": __version__, "numpy": np.__version__,
                     "scipy": scipy.__version__, "python": platform.python_version()},
    }
    if extra:
        manifest.update(extra)
    with open(os.path.join(out, "manifest.json"), "w") as fh:
        json.dump(manifest, fh, indent=1, sort_keys=True)
        fh.write("\n")


def _seeds(args):
    return [args.seed + i for i in range(args.seeds)]


def cmd_profile(args):
    out = _out_dir(args)
    g = parse_snap_edgelist(args.input)
    name = args.name or os.path.splitext(os.path.basename(args.input))[0]
    p = profile(g, name)
    path = os.path.join(out, "profile.json")
    save_profile(p, path)
    log.info("profile %s: n=%d m=%d cg=%.5f eb=%d", name, p.n, p.m, p.cg_real, p.eb_count)
    _write_manifest(out, args, [path])


def cmd_generate(args):
    out = _out_dir(args)
    prof = load_profile(args.input)
    if args.algorithm == "siege" and prof.eb_count is None:
        raise GeneratorInputError("siege requires eb_count in the profile")
    params = prof.gen_params(step=args.step, cg_target=args.cg, rd_check=args.rd_check)
    outputs = []

    def progress(phase, m):
        log.info("%s phase: %d edges", phase, m)

    for seed in _seeds(args):
        res = generate(args.algorithm, params, stage_rng(seed, STAGE_GENERATE), progress)
        stem = os.path.join(out, f"{prof.name}_{args.algorithm}_seed{seed}")
        meta = {"generator": args.algorithm, "seed": seed, "step": args.step,
                "profile": prof.name, "cg_target": params.cg_target,
                "rd_check": params.rd_check}
        save_graph(res.graph, stem + ".txt", meta)
        summary = res.summary()
        summary.update(meta)
        with open(stem + ".json", "w") as fh:
            json.dump(summary, fh, indent=1, sort_keys=True)
            fh.write("\n")
        outputs += [stem + ".txt", stem + ".json"]
        log.info("seed %d: m=%d", seed, res.graph.edge_count)
    _write_manifest(out, args, outputs)


def cmd_measure(args):
    out = _out_dir(args)
    g = load_graph(args.input)
    sources = None if args.sources is None else (
        "all" if args.sources == "all" else int(args.sources))
    name = args.name or os.path.splitext(os.path.basename(args.input))[0]
    rep = measure(g, name, sources, stage_rng(args.seed, STAGE_HOPS))
    path = os.path.join(out, "report.json")
    rep.save_json(path)
    outputs = [path] + rep.write_csvs(out)
    _write_manifest(out, args, outputs)


def cmd_sir(args):
    out = _out_dir(args)
    g = load_graph(args.input)
    params = SirParams(args.beta, args.gamma, args.initial, args.max_steps)
    outputs = []
    for seed in _seeds(args):
        trace = run_sir(g, params, stage_rng(seed, STAGE_SIR))
        path = os.path.join(out, f"sir_seed{seed}.csv")
        trace.write_csv(path)
        outputs.append(path)
    _write_manifest(out, args, outputs)


def cmd_compare(args):
    out = _out_dir(args)
    real = MetricReport.load_json(args.real)
    synths = [MetricReport.load_json(p) for p in args.input]
    outputs = write_comparison(real, synths, out)
    _write_manifest(out, args, outputs)


def build_parser():
    p = argparse.ArgumentParser(prog="synthnet", description=__doc__.split("\n")[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, seeds=False):
        sp.add_argument("--out", help="output directory")
        sp.add_argument("--seed", type=int, default=0)
        if seeds:
            sp.add_argument("--seeds", type=int, default=1, help="number of consecutive seeds")

    sp = sub.add_parser("profile", help="measure a SNAP edge list into a generator profile")
    sp.add_argument("--input", required=True)
    sp.add_argument("--name")
    common(sp)
    sp.set_defaults(func=cmd_profile)

    sp = sub.add_parser("generate", help="generate topologies from a profile")
    sp.add_argument("--input", required=True, help="profile JSON")
    sp.add_argument("--algorithm", choices=ALGORITHMS, required=True)
    sp.add_argument("--step", type=int, default=1)
    sp.add_argument("--cg", type=float, help="override the profile's target clustering")
    sp.add_argument("--rd-check", choices=RD_CHECKS, default="cover",
                    help="residual-degree test before closing a triangle")
    common(sp, seeds=True)
    sp.set_defaults(func=cmd_generate)

    sp = sub.add_parser("measure", help="compute the metric report of a graph")
    sp.add_argument("--input", required=True)
    sp.add_argument("--name")
    sp.add_argument("--sources", help="BFS sources for hop lengths: 'all' or a count")
    common(sp)
    sp.set_defaults(func=cmd_measure)

    sp = sub.add_parser("sir", help="run SIR epidemics on a graph")
    sp.add_argument("--input", required=True)
    sp.add_argument("--beta", type=float, default=0.3)
    sp.add_argument("--gamma", type=float, default=0.5)
    sp.add_argument("--initial", type=int, default=10, help="number of initially infected nodes")
    sp.add_argument("--max-steps", type=int, default=1000)
    common(sp, seeds=True)
    sp.set_defaults(func=cmd_sir)

    sp = sub.add_parser("compare", help="align a real report with synthetic ones")
    sp.add_argument("--real", required=True, help="report.json of the reference graph")
    sp.add_argument("--input", nargs="+", required=True, help="synthetic report.json files")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_compare)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(name)s: %(message)s", stream=sys.stderr)
    try:
        args.func(args)
    except (OSError, ValueError) as exc:
        print(f"synthnet {args.command}: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
