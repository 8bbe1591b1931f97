"""Mass queries against the self-similar measure of a weighted system.

The measure assigns each cylinder its word's weight product.  Interval
masses are bracketed by depth-limited tree walks, and the regularity scan
measures how cylinder mass scales with cylinder length, which is the
exponent controlling interval masses up to an explicit constant.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations_with_replacement

import numpy as np

from .errors import InputError, PreconditionError, ResourceCapError
from .ifs import DEFAULT_WORD_CAP, WeightedIFS, Word, validate_disjointness


def cylinder_mass(ifs: WeightedIFS, word: Word) -> float:
    """Mass of the word's cylinder: the product of its symbol weights."""
    for s in word.symbols:
        ifs.index(s)
    return word.weight_product


def interval_mass_bounds(
    ifs: WeightedIFS,
    interval: tuple[float, float],
    depth: int,
    cap: int = DEFAULT_WORD_CAP,
) -> tuple[float, float]:
    """Bracket the measure of a closed subinterval of [0,1].

    The lower bound credits cylinders contained in the interval; the upper
    bound additionally counts every depth-limit cylinder whose interior
    meets the interval's interior.  Cylinders that merely touch at an
    endpoint are excluded from the upper bound, matching measures without
    atoms at cylinder endpoints; a single-map system concentrates mass at
    one point and may escape the bracket when that point is an endpoint.
    Deeper walks can only tighten the bracket.
    """
    a, b = float(interval[0]), float(interval[1])
    if not (a <= b):
        raise InputError(f"interval endpoints out of order: {interval!r}")
    if a < -1e-9 or b > 1.0 + 1e-9:
        raise InputError(f"interval {interval!r} is not inside [0,1]")
    if depth < 0:
        raise InputError(f"depth must be nonnegative, got {depth!r}")
    lower = 0.0
    upper = 0.0
    visited = 0
    # Stack entries: (level, slope, intercept, mass).
    stack = [(0, 1.0, 0.0, 1.0)]
    while stack:
        level, slope, intercept, mass = stack.pop()
        visited += 1
        if visited > cap:
            raise ResourceCapError(
                f"interval walk exceeded cap={cap} nodes at depth {depth}")
        lo, hi = intercept, intercept + slope
        if min(hi, b) - max(lo, a) <= 0.0:
            continue
        if lo >= a and hi <= b:
            lower += mass
            upper += mass
            continue
        if level == depth:
            upper += mass
            continue
        for k in range(ifs.size):
            m = ifs.maps[k]
            # Children refine the parent cylinder, so the parent's affine
            # map is applied outermost.
            stack.append((
                level + 1,
                slope * m.ratio,
                intercept + slope * m.translation,
                mass * ifs.weights[k],
            ))
    return (lower, upper)


@dataclass(frozen=True)
class RegularityReport:
    """Observed cylinder mass exponents level by level.

    ``rows`` holds (level, min_exponent, max_exponent) for the exponent
    log(mass)/log(length) over all words of that level.  ``alpha_hat`` is
    the smallest deepest-level exponent clamped to [0,1]; cylinder masses
    then satisfy mass <= prefactor * length^alpha_hat over the scanned
    range, and interval masses inherit the same exponent up to the factor
    ``interval_constant`` = max(ratio^-alpha_hat) * alphabet size for
    intervals no shorter than ``min_scale``.
    """

    depth: int
    alpha_hat: float
    rows: tuple[tuple[int, float, float], ...]
    prefactor: float
    min_scale: float
    interval_constant: float


def regularity_scan(
    ifs: WeightedIFS,
    depth: int,
    cap: int = DEFAULT_WORD_CAP,
) -> RegularityReport:
    """Scan cylinder mass exponents down to the given level.

    Both the mass and the length of a word's cylinder depend only on the
    multiset of its symbols, so the scan enumerates multisets instead of
    words and stays polynomial in the depth.
    """
    if depth < 1:
        raise InputError(f"scan depth must be at least 1, got {depth!r}")
    report = validate_disjointness(ifs)
    if not report:
        pairs = ", ".join(f"{a!r}/{b!r} by {d:.3g}" for a, b, d in report.overlaps)
        raise PreconditionError(f"level-1 intervals overlap beyond endpoints: {pairs}")
    total = sum(math.comb(n + ifs.size - 1, ifs.size - 1) for n in range(1, depth + 1))
    if total > cap:
        raise ResourceCapError(
            f"regularity scan would visit {total} multisets, cap={cap}")
    log_r = [math.log(m.ratio) for m in ifs.maps]
    log_p = [math.log(w) for w in ifs.weights]
    rows = []
    scanned: list[tuple[float, float]] = []
    min_scale = 1.0
    for level in range(1, depth + 1):
        lo_ratio = math.inf
        hi_ratio = -math.inf
        for combo in combinations_with_replacement(range(ifs.size), level):
            lr = math.fsum(log_r[k] for k in combo)
            lp = math.fsum(log_p[k] for k in combo)
            scanned.append((lr, lp))
            ratio = lp / lr
            lo_ratio = min(lo_ratio, ratio)
            hi_ratio = max(hi_ratio, ratio)
            min_scale = min(min_scale, math.exp(lr))
        rows.append((level, lo_ratio, hi_ratio))
    alpha_hat = min(1.0, max(0.0, rows[-1][1]))
    # Prefactor: largest observed mass / length^alpha_hat over the scan.
    prefactor = max(math.exp(lp - alpha_hat * lr) for lr, lp in scanned)
    interval_constant = max(m.ratio ** -alpha_hat for m in ifs.maps) * ifs.size
    return RegularityReport(
        depth=depth,
        alpha_hat=alpha_hat,
        rows=tuple(rows),
        prefactor=max(prefactor, 1.0),
        min_scale=min_scale,
        interval_constant=interval_constant,
    )


def diagonal_mass(
    ifs: WeightedIFS,
    delta: float,
    depth: int,
    cap: int = DEFAULT_WORD_CAP,
) -> tuple[float, float]:
    """Bracket the product-measure mass of the strip |x - y| <= delta.

    Level-``depth`` cylinder pairs are classified by interval distance:
    pairs whose intervals come within ``delta`` of each other feed the
    upper bound, pairs that satisfy the condition for every pair of their
    points feed the lower bound.  A sorted sweep skips pairs separated by
    more than ``delta``.
    """
    if not (delta > 0.0):
        raise InputError(f"strip half-width must be positive, got {delta!r}")
    if depth < 1:
        raise InputError(f"depth must be at least 1, got {depth!r}")
    count = ifs.size ** depth
    if count > cap:
        raise ResourceCapError(
            f"diagonal walk needs {count} level-{depth} cylinders, cap={cap}")
    lo = np.empty(count)
    width = np.empty(count)
    mass = np.empty(count)
    idx = 0
    stack = [(0, 1.0, 0.0, 1.0)]
    while stack:
        level, slope, intercept, w = stack.pop()
        if level == depth:
            lo[idx] = intercept
            width[idx] = slope
            mass[idx] = w
            idx += 1
            continue
        for k in range(ifs.size):
            m = ifs.maps[k]
            # Full enumeration without pruning: either composition order
            # produces the same multiset of level-`depth` cylinders.
            stack.append((level + 1, slope * m.ratio,
                          m.ratio * intercept + m.translation, w * ifs.weights[k]))
    order = np.argsort(lo, kind="stable")
    lo = lo[order]
    hi = lo + width[order]
    mass = mass[order]

    upper = 0.0
    lower = 0.0
    # Diagonal pairs: both points in one cylinder, so distance <= width.
    upper += float(np.dot(mass, mass))
    ok = hi - lo <= delta
    lower += float(np.sum(mass[ok] ** 2))
    pairs = count
    for i in range(count):
        j_end = int(np.searchsorted(lo, hi[i] + delta, side="right"))
        if j_end <= i + 1:
            continue
        pairs += j_end - (i + 1)
        if pairs > cap:
            raise ResourceCapError(
                f"diagonal walk exceeded cap={cap} cylinder pairs")
        sl = slice(i + 1, j_end)
        upper += 2.0 * mass[i] * float(np.sum(mass[sl]))
        good = np.maximum(hi[sl] - lo[i], hi[i] - lo[sl]) <= delta
        lower += 2.0 * mass[i] * float(np.dot(mass[sl], good))
    return (lower, upper)
