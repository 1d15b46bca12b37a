"""Path-length distance between two trees on the same taxa.

The distance is the sum over unordered taxon pairs of the squared
difference of path lengths.  It expands into three terms:

    delta = sum p_ij**2 + sum q_ij**2 - 2 * sum p_ij q_ij

The fast method computes the two squared sums in linear time and the inner
product in near-linear time; the quadratic method evaluates the defining
double sum directly from the distance matrices.  The square root of delta
is the actual metric and is reported alongside.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

from .inner_product import SumStats, compute_inner_product
from .oracle import delta_bruteforce
from .squared_paths import sum_squared_paths
from .trees import UnrootedTree, ValidatedPair, validate_pair

__all__ = ["DistanceResult", "path_length_distance", "distance_between"]


@dataclass
class DistanceResult:
    """Distance value plus how it was obtained.

    ``method`` records the route actually taken ("fast" or "quadratic");
    trees with up to three taxa always go through the quadratic route, for
    which the three expansion terms and traversal stats are not available
    (None).  ``clamped`` flags a tiny negative rounding residue that was
    raised to zero.
    """

    delta: float
    sqrt_delta: float
    method: str
    sum_p2: float | None = None
    sum_q2: float | None = None
    inner_product: float | None = None
    clamped: bool = False
    seconds: float = 0.0
    stats: SumStats | None = None


def path_length_distance(
    pair: ValidatedPair, method: str = "fast"
) -> DistanceResult:
    """Distance for a validated pair; ``method`` is "fast" or "quadratic"."""
    if method not in ("fast", "quadratic"):
        raise ValueError(f"unknown method {method!r}")
    start = time.perf_counter()
    if method == "quadratic" or pair.n <= 3:
        delta = delta_bruteforce(pair.t1.unrooted, pair.t2.unrooted)
        return DistanceResult(
            delta=delta,
            sqrt_delta=math.sqrt(delta),
            method="quadratic",
            seconds=time.perf_counter() - start,
        )

    p2 = sum_squared_paths(pair.t1)
    q2 = sum_squared_paths(pair.t2)
    ip, stats = compute_inner_product(pair)
    delta = p2 + q2 - 2.0 * ip
    clamped = False
    if delta < 0.0:
        # the three terms are each sums of nonnegative products, so any
        # negative residue can only be cancellation noise
        scale = p2 + q2 + 2.0 * abs(ip)
        if delta < -1e-9 * max(scale, 1.0):
            raise AssertionError(
                f"negative distance {delta} beyond rounding tolerance"
            )
        delta = 0.0
        clamped = True
    return DistanceResult(
        delta=delta,
        sqrt_delta=math.sqrt(delta),
        method="fast",
        sum_p2=p2,
        sum_q2=q2,
        inner_product=ip,
        clamped=clamped,
        seconds=time.perf_counter() - start,
        stats=stats,
    )


def distance_between(
    t1: UnrootedTree, t2: UnrootedTree, method: str = "fast"
) -> DistanceResult:
    """Validate the two trees as a pair and compute their distance."""
    return path_length_distance(validate_pair(t1, t2), method=method)
