"""SNAP edge-list input/output and dataset profiles."""

import io
import json
import logging
import os
from dataclasses import dataclass

import numpy as np

from . import metrics
from .graph import Graph

logger = logging.getLogger(__name__)

PROFILE_VERSION = 1
GRAPH_HEADER = "synthnet edge list v1"


class ParseError(ValueError):
    pass


class FormatError(ValueError):
    pass


def _lines(source):
    if isinstance(source, (str, os.PathLike)):
        with open(source, "rb") as fh:
            yield from fh
    elif isinstance(source, (bytes, bytearray)):
        yield from io.BytesIO(source)
    else:
        yield from source


def parse_snap_edgelist(source, remap=True, n=None):
    """Read a SNAP-style whitespace-separated edge list.

    Parameters
    ----------
    source : path, bytes, or binary file object
    remap : bool
        Map external ids to ``0..n-1`` in order of first appearance. The
        original ids end up in ``graph.labels``. With ``remap=False`` ids are
        used as given and must be non-negative.
    n : int, optional
        Node count when ``remap=False``; defaults to ``max id + 1``.

    Returns
    -------
    Graph
        Self-loops and repeated pairs (either orientation) are dropped.
    """
    ids = {}
    pairs = []
    for lineno, raw in enumerate(_lines(source), 1):
        line = raw.strip()
        if not line or line.startswith(b"#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ParseError(f"line {lineno}: expected 2 tokens, got {len(parts)}")
        try:
            a, b = int(parts[0]), int(parts[1])
        except ValueError:
            raise ParseError(f"line {lineno}: non-integer token in {line!r}") from None
        if remap:
            a = ids.setdefault(a, len(ids))
            b = ids.setdefault(b, len(ids))
        elif a < 0 or b < 0:
            raise ParseError(f"line {lineno}: negative node id")
        pairs.append((a, b))

    if remap:
        n = len(ids)
    elif n is None:
        n = max((max(p) for p in pairs), default=-1) + 1
    g = Graph(n)
    loops = dupes = 0
    add = g.add_edge
    for a, b in pairs:
        if a == b:
            loops += 1
        elif not add(a, b):
            dupes += 1
    if remap:
        g.labels = list(ids)
    if loops or dupes:
        logger.warning("dropped %d self-loops and %d duplicate edges", loops, dupes)
    return g


def save_graph(g, path, meta=None):
    """Write ``g`` as a SNAP edge list with dense ids, sorted.

    A header records the node count (so isolated nodes survive) and any
    ``meta`` entries. If ``g.labels`` is set the id map goes to
    ``<path>.ids``, one external id per line.
    """
    e = g.sorted_edges()
    with open(path, "w", newline="\n") as fh:
        fh.write(f"# {GRAPH_HEADER}\n")
        for k in sorted(meta or {}):
            fh.write(f"# {k}: {meta[k]}\n")
        fh.write(f"# Nodes: {g.node_count} Edges: {g.edge_count}\n")
        fh.write("# FromNodeId\tToNodeId\n")
        if e.size:
            np.savetxt(fh, e, fmt="%d", delimiter="\t")
    if g.labels is not None:
        with open(f"{path}.ids", "w") as fh:
            fh.writelines(f"{x}\n" for x in g.labels)


def _header_nodes(path):
    with open(path, "rb") as fh:
        for raw in fh:
            if not raw.startswith(b"#"):
                break
            text = raw[1:].strip().decode("utf-8", "replace")
            if text.startswith("Nodes:"):
                try:
                    return int(text.split()[1])
                except (IndexError, ValueError):
                    raise FormatError(f"bad node count header: {text!r}") from None
    return None


def load_graph(path):
    """Read a graph written by :func:`save_graph`.

    Files with a ``# Nodes:`` header keep their ids as-is; anything else is
    treated as a raw SNAP file and remapped.
    """
    n = _header_nodes(path)
    if n is None:
        return parse_snap_edgelist(path)
    g = parse_snap_edgelist(path, remap=False, n=n)
    if g.node_count != n:
        raise FormatError(f"{path}: node id beyond declared count {n}")
    ids_path = f"{path}.ids"
    if os.path.exists(ids_path):
        with open(ids_path) as fh:
            labels = [int(x) for x in fh.read().split()]
        if len(labels) != n:
            raise FormatError(f"{ids_path}: {len(labels)} ids for {n} nodes")
        g.labels = labels
    return g


@dataclass
class DatasetProfile:
    """Generator inputs measured from a real graph.

    ``cg_real`` is the global clustering coefficient; ``avg_cc_real`` the
    mean local clustering with degree<2 nodes counted as 0.
    """

    name: str
    n: int
    m: int
    degree_sequence: list
    cg_real: float
    eb_count: int
    triangle_total: int
    avg_cc_real: float | None = None

    def to_dict(self):
        return {
            "format_version": PROFILE_VERSION,
            "name": self.name,
            "n": self.n,
            "m": self.m,
            "cg_real": self.cg_real,
            "avg_cc_real": self.avg_cc_real,
            "eb_count": self.eb_count,
            "triangle_total": self.triangle_total,
            "degree_sequence": list(self.degree_sequence),
        }

    @classmethod
    def from_dict(cls, d):
        if d.get("format_version") != PROFILE_VERSION:
            raise FormatError(
                f"profile format_version {d.get('format_version')!r}, expected {PROFILE_VERSION}")
        required = ("name", "n", "m", "degree_sequence", "cg_real", "eb_count",
                    "triangle_total")
        missing = [k for k in required if k not in d]
        if missing:
            raise FormatError(f"profile is missing {', '.join(missing)}")
        p = cls(name=d["name"], n=int(d["n"]), m=int(d["m"]),
                degree_sequence=[int(x) for x in d["degree_sequence"]],
                cg_real=float(d["cg_real"]),
                eb_count=None if d["eb_count"] is None else int(d["eb_count"]),
                triangle_total=int(d["triangle_total"]),
                avg_cc_real=d.get("avg_cc_real"))
        if len(p.degree_sequence) != p.n or sum(p.degree_sequence) != 2 * p.m:
            raise FormatError("degree_sequence inconsistent with n and m")
        return p

    def gen_params(self, step=1, cg_target=None, rd_check="cover"):
        """:class:`~synthnet.generators.GenParams` built from this profile."""
        from .generators import GenParams
        return GenParams(self.n, np.asarray(self.degree_sequence, dtype=np.int64),
                         self.cg_real if cg_target is None else cg_target,
                         step, self.eb_count, rd_check)


def profile(g, name="graph"):
    tri = metrics.triangles_per_node(g)
    d = g.degrees()
    return DatasetProfile(
        name=name,
        n=g.node_count,
        m=g.edge_count,
        degree_sequence=sorted(d.tolist(), reverse=True),
        cg_real=metrics.global_cc(g, tri),
        eb_count=metrics.bridge_count(g),
        triangle_total=metrics.triangle_total(g, tri),
        avg_cc_real=metrics.avg_cc(g, tri),
    )


def save_profile(p, path):
    with open(path, "w") as fh:
        json.dump(p.to_dict(), fh, indent=1)
        fh.write("\n")


def load_profile(path):
    with open(path) as fh:
        try:
            d = json.load(fh)
        except json.JSONDecodeError as exc:
            raise FormatError(f"{path}: {exc}") from None
    return DatasetProfile.from_dict(d)
