"""Global, local, smooth, and group sensitivity in closed form.

All formulas are order-statistic arithmetic on the sorted values plus the
domain edges. Order statistics referenced outside 1..n are clamped to the
domain: x~_i = min(Dom) for i < 1 and x~_i = max(Dom) for i > n. The brute
force oracle validates this convention; it is not assumed.

Counting queries (range count, histogram) have constant sensitivity 1 under
the modify-one-record neighbor relation, reported per bin for histograms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dataset import Dataset, DomainBounds, encode_bound
from .errors import PreconditionError
from .queries import (
    HISTOGRAM,
    MAXIMUM,
    MEDIAN,
    RANGE_COUNT,
    SECOND_MAXIMUM,
    QuerySpec,
    evaluate,
)


@dataclass(frozen=True)
class SensitivityReport:
    """Global, local, and smooth sensitivity of one query at one dataset.

    Infinite entries mean the quantity is uncomputable because the domain is
    unbounded on a side the formula needs; they encode as "unbounded" in JSON.
    """

    global_: float
    local: float
    smooth: float
    beta: float

    def to_json_dict(self) -> dict:
        return {
            "global": encode_bound(self.global_),
            "local": encode_bound(self.local),
            "smooth": encode_bound(self.smooth),
            "beta": self.beta,
        }


@dataclass(frozen=True)
class GroupSensitivity:
    """Worst-case |f(y) - f(D)| over datasets y within distance i, for i = 1..g."""

    per_distance: tuple[float, ...]

    def __post_init__(self) -> None:
        if len(self.per_distance) < 1:
            raise PreconditionError("group sensitivity needs g >= 1")
        object.__setattr__(self, "per_distance", tuple(float(v) for v in self.per_distance))

    @property
    def g(self) -> int:
        return len(self.per_distance)

    def entry(self, i: int) -> float:
        """Distance-i bound, 1-based; entry(1) equals the local sensitivity."""
        if not 1 <= i <= self.g:
            raise PreconditionError(f"distance {i} outside 1..{self.g}")
        return self.per_distance[i - 1]


# ---------------------------------------------------------------------------
# clamped order statistics
# ---------------------------------------------------------------------------


def _padded(values: np.ndarray, bounds: DomainBounds) -> np.ndarray:
    # pad[i] is the 1-based order statistic x_i for 1 <= i <= n, with the
    # domain edges at positions 0 and n+1; clamped indexing reads off it.
    return np.concatenate(([bounds.lower], values, [bounds.upper]))


def _stat(pad: np.ndarray, i: int) -> float:
    n = pad.size - 2
    return float(pad[min(max(i, 0), n + 1)])


# ---------------------------------------------------------------------------
# global sensitivity
# ---------------------------------------------------------------------------


def global_sensitivity(q: QuerySpec, bounds: DomainBounds, n: int) -> float:
    """Worst-case |f(D1) - f(D2)| over all neighbor pairs in the whole domain.

    For the order-statistic queries this is the domain length, so it is
    infinite whenever a needed side of the domain is unbounded. Counting
    queries are 1 regardless of the domain.
    """
    if n < 1:
        raise PreconditionError("n must be at least 1")
    if q.kind in (RANGE_COUNT, HISTOGRAM):
        return 1.0
    return bounds.span


# ---------------------------------------------------------------------------
# local sensitivity
# ---------------------------------------------------------------------------


def local_sensitivity(d: Dataset, q: QuerySpec) -> float:
    """Worst-case |f(y) - f(D)| over datasets y differing from D in one record."""
    v = d.values
    n = v.size
    if q.kind == MEDIAN:
        if n % 2 == 0 or n < 3:
            raise PreconditionError(f"median local sensitivity needs odd n >= 3, got {n}")
        m = (n - 1) // 2  # 0-based median position
        return float(max(v[m] - v[m - 1], v[m + 1] - v[m]))
    if q.kind == MAXIMUM:
        if n < 2:
            raise PreconditionError(f"maximum local sensitivity needs n >= 2, got {n}")
        # moving any record to the top of the domain raises the max to max(Dom)
        return float(max(d.bounds.upper - v[-1], v[-1] - v[-2]))
    if q.kind == SECOND_MAXIMUM:
        if n < 3:
            raise PreconditionError(f"second_maximum local sensitivity needs n >= 3, got {n}")
        # depends only on the gaps between the top three values, never on the domain
        return float(max(v[-1] - v[-2], v[-2] - v[-3]))
    return 1.0


# ---------------------------------------------------------------------------
# smooth sensitivity
# ---------------------------------------------------------------------------


def smooth_sensitivity(d: Dataset, q: QuerySpec, beta: float) -> float:
    """max over all datasets y of LS(y) * exp(-beta * d(D, y)), in closed form.

    The max over y at distance k reduces to order-statistic expressions; the
    overall max over k = 0..n stops early once exp(-beta k) times the domain
    span cannot beat the best term found so far.
    """
    if not beta > 0:
        raise PreconditionError(f"beta must be positive, got {beta}")
    if q.kind in (RANGE_COUNT, HISTOGRAM):
        return 1.0  # constant local sensitivity smooths to itself
    if not d.bounds.is_bounded:
        return math.inf
    v = d.values
    n = v.size
    if q.kind == MEDIAN:
        if n % 2 == 0:
            raise PreconditionError(f"median needs an odd number of records, got {n}")
        return _smooth_median(v, d.bounds, beta)
    if q.kind == MAXIMUM:
        return _smooth_maximum(v, d.bounds, beta)
    if n < 2:
        raise PreconditionError(f"second_maximum needs n >= 2, got {n}")
    return _smooth_second_maximum(v, d.bounds, beta)


def _smooth_median(v: np.ndarray, bounds: DomainBounds, beta: float) -> float:
    n = v.size
    M = (n + 1) // 2  # 1-based median index; equals its position in the padded array
    pad = _padded(v, bounds)
    span = bounds.span
    best = 0.0
    for k in range(n + 1):
        decay = math.exp(-beta * k)
        if decay * span <= best:
            break  # distance-k local sensitivity never exceeds the domain span
        t = np.arange(k + 2)
        hi = np.clip(M + t, 0, n + 1)
        lo = np.clip(M + t - k - 1, 0, n + 1)
        a_k = float(np.max(pad[hi] - pad[lo]))
        best = max(best, decay * a_k)
    return best


def _smooth_maximum(v: np.ndarray, bounds: DomainBounds, beta: float) -> float:
    n = v.size
    pad = _padded(v, bounds)
    upper = bounds.upper
    top = float(v[-1])
    best = 0.0
    for k in range(n + 1):
        decay = math.exp(-beta * k)
        if decay * bounds.span <= best:
            break
        a_k = max(upper - _stat(pad, n - k), top - _stat(pad, n - k - 1))
        best = max(best, decay * a_k)
    return best


def _smooth_second_maximum(v: np.ndarray, bounds: DomainBounds, beta: float) -> float:
    n = v.size
    pad = _padded(v, bounds)
    upper = bounds.upper
    top = float(v[-1])
    runner_up = float(v[-2])
    best = 0.0
    for k in range(n + 1):
        decay = math.exp(-beta * k)
        if decay * bounds.span <= best:
            break
        # k modifications can hollow out the values under the kept top pair,
        # or (for k >= 1) plant a record at max(Dom) above a lowered runner-up
        a_k = max(top - _stat(pad, n - k - 1), runner_up - _stat(pad, n - k - 2))
        if k >= 1:
            a_k = max(a_k, upper - _stat(pad, n - k))
        best = max(best, decay * a_k)
    return best


# ---------------------------------------------------------------------------
# group sensitivity
# ---------------------------------------------------------------------------


def group_local_sensitivity(d: Dataset, q: QuerySpec, g: int) -> GroupSensitivity:
    """Per-distance sensitivity ladder: entry i bounds |f(y) - f(D)| at distance <= i.

    Entry 1 equals the local sensitivity; entries are non-decreasing because
    the neighborhoods are nested. Entries become infinite when the formula
    needs a domain edge that is unbounded.
    """
    if g < 1:
        raise PreconditionError(f"group size must be >= 1, got {g}")
    v = d.values
    n = v.size
    pad = _padded(v, d.bounds)
    upper = d.bounds.upper

    if q.kind == MEDIAN:
        if n % 2 == 0 or n < 3:
            raise PreconditionError(f"median group sensitivity needs odd n >= 3, got {n}")
        M = (n + 1) // 2
        med = float(v[M - 1])
        entries = [
            max(_stat(pad, M + i) - med, med - _stat(pad, M - i)) for i in range(1, g + 1)
        ]
    elif q.kind == MAXIMUM:
        if n < 2:
            raise PreconditionError(f"maximum group sensitivity needs n >= 2, got {n}")
        top = float(v[-1])
        entries = [max(upper - top, top - _stat(pad, n - i)) for i in range(1, g + 1)]
    elif q.kind == SECOND_MAXIMUM:
        if n < 3:
            raise PreconditionError(f"second_maximum group sensitivity needs n >= 3, got {n}")
        top = float(v[-1])
        runner_up = float(v[-2])
        entries = []
        for i in range(1, g + 1):
            # one modification can promote the old maximum to second place;
            # two or more can plant a pair of records at max(Dom)
            up = top - runner_up if i == 1 else upper - runner_up
            down = runner_up - _stat(pad, n - i - 1)
            entries.append(max(up, down))
    elif q.kind == RANGE_COUNT:
        c = int(evaluate(d, q))
        entries = [float(min(i, max(c, n - c))) for i in range(1, g + 1)]
    else:
        counts = evaluate(d, q)
        worst = int(max(max(int(c), n - int(c)) for c in counts))
        entries = [float(min(i, worst)) for i in range(1, g + 1)]

    return GroupSensitivity(tuple(entries))


def build_report(d: Dataset, q: QuerySpec, beta: float) -> SensitivityReport:
    """Convenience bundle of global/local/smooth at one dataset and beta."""
    return SensitivityReport(
        global_=global_sensitivity(q, d.bounds, d.n),
        local=local_sensitivity(d, q),
        smooth=smooth_sensitivity(d, q, beta),
        beta=float(beta),
    )
