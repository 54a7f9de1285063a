"""Residual-degree sampling with periodic renormalization.

Nodes are drawn proportionally to their residual degree as it stood at the
last snapshot. The cumulative weight table is rebuilt only once every
``step`` calls to :meth:`ResidualDistribution.sample_distinct`, so between
snapshots the distribution stays frozen while ``rd`` keeps changing.
:meth:`ResidualDistribution.draw_rows` draws a whole window of samples from
one snapshot at once.
"""

import numpy as np


class ExhaustedDistribution(RuntimeError):
    """Not enough nodes with positive weight to draw the requested sample."""


class ResidualDistribution:
    """Per-node residual degrees plus a frozen cumulative sampling table.

    Parameters
    ----------
    degrees : array_like of int
        Initial residual degrees (usually the input degree sequence).
    step : int
        Number of ``sample_distinct`` calls served by one snapshot.
    rng : numpy.random.Generator
        Source of randomness; all draws come from this stream.
    """

    def __init__(self, degrees, step=1, rng=None):
        rd = np.array(degrees, dtype=np.int64)
        if rd.ndim != 1:
            raise ValueError("degrees must be one-dimensional")
        if (rd < 0).any():
            raise ValueError("residual degrees must be non-negative")
        step = int(step)
        if step < 1:
            raise ValueError(f"step must be >= 1, got {step}")
        self.rd = rd
        self.step = step
        self.rng = rng if rng is not None else np.random.default_rng()
        self.snapshot_weights = None
        self.samples_since_snapshot = 0
        self.snapshots_taken = 0
        self._total = 0
        self._positive = 0
        self._buf = []
        self._pos = 0
        self._k = 2

    def snapshot(self):
        """Freeze the current residual degrees into the cumulative table."""
        cum = np.cumsum(self.rd)
        total = int(cum[-1]) if cum.size else 0
        if total <= 0:
            raise ExhaustedDistribution("all residual degrees are zero")
        self.snapshot_weights = cum
        self._total = total
        self._positive = int(np.count_nonzero(self.rd))
        self.samples_since_snapshot = 0
        self.snapshots_taken += 1
        self._buf = []
        self._pos = 0

    def probabilities(self):
        """Per-node sampling probability under the current snapshot."""
        if self.snapshot_weights is None:
            raise ExhaustedDistribution("no snapshot taken")
        w = np.diff(self.snapshot_weights, prepend=0)
        return w / self._total

    def _refill(self):
        # enough draws for the calls this snapshot has left, plus slack for
        # collisions; the next snapshot discards whatever is unused
        calls_left = max(self.step - self.samples_since_snapshot, 1)
        u = self.rng.random(self._k * calls_left + 8) * self._total
        # sorted queries walk the table in order, far fewer cache misses
        order = np.argsort(u)
        idx = np.empty(u.size, dtype=np.int64)
        idx[order] = np.searchsorted(self.snapshot_weights, u[order], side="right")
        self._buf = idx.tolist()
        self._pos = 0

    def draws(self, size):
        """``size`` independent node ids from the current snapshot.

        Sorted uniforms are built from exponential spacings, located in the
        cumulative table in one ordered pass, then shuffled back into
        independent order.
        """
        if self.snapshot_weights is None:
            raise ExhaustedDistribution("no snapshot taken")
        e = self.rng.standard_exponential(size + 1)
        c = np.cumsum(e)
        u = c[:size] * (self._total / c[size])
        np.minimum(u, np.nextafter(self._total, 0), out=u)
        idx = np.searchsorted(self.snapshot_weights, u, side="right")
        return idx[self.rng.permutation(size)]

    def draw_rows(self, k, rows):
        """``rows`` samples of ``k`` distinct ids each, as a ``(rows, k)`` array.

        Column ``j`` is redrawn wherever it repeats an earlier column of its
        row, which gives the same distribution as sequential redraws in
        :meth:`sample_distinct`. A row still colliding after ``10 * k * step``
        redraws truncates the result there; the caller should take a fresh
        snapshot. Does not touch ``samples_since_snapshot``.
        """
        c = self.draws(rows * k).reshape(rows, k)
        limit = 10 * k * self.step
        cut = rows
        for j in range(1, k):
            bad = np.flatnonzero((c[:cut, j:j + 1] == c[:cut, :j]).any(axis=1))
            tries = 0
            while bad.size and tries < limit:
                tries += 1
                c[bad, j] = self.draws(bad.size)
                bad = bad[(c[bad, j:j + 1] == c[bad, :j]).any(axis=1)]
            if bad.size:
                cut = int(bad[0])
        return c[:cut]

    def _draw(self):
        if self._pos >= len(self._buf):
            self._refill()
        x = self._buf[self._pos]
        self._pos += 1
        return x

    def sample_distinct(self, k):
        """Draw ``k`` pairwise-distinct node ids.

        Each id is drawn from the snapshot distribution; an id that collides
        with one already chosen is redrawn. A snapshot is taken first if none
        exists or the current one has served ``step`` calls.

        Raises
        ------
        ExhaustedDistribution
            If fewer than ``k`` nodes carry positive weight, even after a
            forced refresh of the snapshot.
        """
        self._k = k
        if self.snapshot_weights is None or self.samples_since_snapshot >= self.step:
            self.snapshot()
        if self._positive < k:
            # the frozen table may be stale; retry once on current rd
            self.snapshot()
            if self._positive < k:
                raise ExhaustedDistribution(
                    f"{self._positive} positively weighted nodes, need {k}")
        # fast path: the next k buffered draws are already distinct, which
        # consumes the stream exactly as the loop below would
        pos = self._pos
        if pos + k <= len(self._buf):
            chosen = self._buf[pos:pos + k]
            if len(set(chosen)) == k:
                self._pos = pos + k
                self.samples_since_snapshot += 1
                return chosen
        limit = 10 * k * self.step
        chosen = []
        rejections = 0
        forced = False
        while len(chosen) < k:
            x = self._draw()
            if x in chosen:
                rejections += 1
                if rejections > limit:
                    if forced:
                        raise ExhaustedDistribution(
                            f"could not draw {k} distinct nodes")
                    self.snapshot()
                    if self._positive < k:
                        raise ExhaustedDistribution(
                            f"{self._positive} positively weighted nodes, need {k}")
                    forced = True
                    rejections = 0
                    chosen = []
                continue
            chosen.append(x)
        self.samples_since_snapshot += 1
        return chosen

    def decrement(self, v):
        if self.rd[v] < 1:
            raise RuntimeError(f"residual degree of node {v} is already zero")
        self.rd[v] -= 1

    def decrement_saturating(self, v):
        """Decrement ``rd[v]`` unless it is already zero."""
        if self.rd[v] > 0:
            self.rd[v] -= 1

    def decrement_attenuated(self, v):
        """Decrement ``rd[v]`` only while it is above 1."""
        if self.rd[v] > 1:
            self.rd[v] -= 1
