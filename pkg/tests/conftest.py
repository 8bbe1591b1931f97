"""Shared helpers for the test suite."""

from __future__ import annotations

import math

from selfsim import Similitude, WeightedIFS


def random_disjoint_ifs(rng, max_maps: int = 4, min_ratio: float = 0.12,
                        total_span: float = 0.85) -> WeightedIFS:
    """Draw a small weighted system with disjoint level-1 intervals.

    Interval widths and the gaps between them are sampled together and
    rescaled so everything fits in [0,1] with room to spare; weights are
    renormalized so the last one absorbs the rounding, keeping the sum at
    1 within an ulp.
    """
    k = int(rng.integers(2, max_maps + 1))
    widths = min_ratio + rng.random(k) * 0.5
    gaps = rng.random(k + 1) * 0.3
    scale = total_span / (widths.sum() + gaps.sum())
    widths = widths * scale
    gaps = gaps * scale
    maps = []
    x = float(gaps[0])
    for i in range(k):
        maps.append(Similitude(float(widths[i]), x))
        x += float(widths[i]) + float(gaps[i + 1])
    raw = 0.1 + rng.random(k)
    weights = [float(w / raw.sum()) for w in raw]
    weights[-1] = 1.0 - math.fsum(weights[:-1])
    return WeightedIFS(tuple(range(k)), tuple(maps), tuple(weights))
