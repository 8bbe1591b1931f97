"""Iterated function systems of orientation-preserving similitudes on [0,1].

An instance is a finite alphabet of contractions x -> r*x + b together with
strictly positive probability weights.  Finite words over the alphabet
compose to affine maps whose images are the cylinder intervals; the
stopping families enumerated here are the prefix-free word sets on which
all downstream mass and Fourier computations are built.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import InputError, ResourceCapError

# Interval overlaps up to this length are treated as endpoint touching.
DISJOINT_TOL = 1e-12

# Default ceiling on enumerated words; generous but keeps runaway
# stopping times from exhausting memory.
DEFAULT_WORD_CAP = 50_000_000


@dataclass(frozen=True)
class Similitude:
    """Contraction x -> ratio * x + translation mapping [0,1] into itself."""

    ratio: float
    translation: float

    def __post_init__(self) -> None:
        if not (0.0 < self.ratio < 1.0):
            raise InputError(
                f"contraction ratio must lie strictly between 0 and 1, got {self.ratio!r}")
        if self.translation < 0.0:
            raise InputError(f"translation must be nonnegative, got {self.translation!r}")
        if self.ratio + self.translation > 1.0 + DISJOINT_TOL:
            raise InputError(
                "map must send [0,1] into itself: ratio + translation = "
                f"{self.ratio + self.translation!r} exceeds 1")

    def __call__(self, x: float) -> float:
        return self.ratio * x + self.translation

    @property
    def interval(self) -> tuple[float, float]:
        """Image of [0,1] under the map."""
        return (self.translation, self.translation + self.ratio)

    @property
    def fixed_point(self) -> float:
        return self.translation / (1.0 - self.ratio)


@dataclass(frozen=True)
class WeightedIFS:
    """Alphabet of similitudes with strictly positive weights summing to 1."""

    symbols: tuple
    maps: tuple[Similitude, ...]
    weights: tuple[float, ...]

    def __post_init__(self) -> None:
        if not self.symbols:
            raise InputError("alphabet must be non-empty")
        if len(set(self.symbols)) != len(self.symbols):
            raise InputError(f"alphabet symbols must be distinct, got {self.symbols!r}")
        if len(self.maps) != len(self.symbols) or len(self.weights) != len(self.symbols):
            raise InputError("maps and weights must both match the alphabet length")
        if any(w <= 0.0 for w in self.weights):
            raise InputError("every weight must be strictly positive")
        total = math.fsum(self.weights)
        if abs(total - 1.0) > 1e-12:
            raise InputError(f"weights must sum to 1 within 1e-12, got {total!r}")

    @property
    def size(self) -> int:
        return len(self.symbols)

    @property
    def min_ratio(self) -> float:
        return min(m.ratio for m in self.maps)

    @property
    def max_ratio(self) -> float:
        return max(m.ratio for m in self.maps)

    def index(self, symbol) -> int:
        try:
            return self.symbols.index(symbol)
        except ValueError:
            raise InputError(f"symbol {symbol!r} is not in the alphabet {self.symbols!r}") from None

    def map_for(self, symbol) -> Similitude:
        return self.maps[self.index(symbol)]

    def weight_for(self, symbol) -> float:
        return self.weights[self.index(symbol)]

    def with_weights(self, weights: Sequence[float]) -> "WeightedIFS":
        return WeightedIFS(self.symbols, self.maps, tuple(float(w) for w in weights))


@dataclass(frozen=True)
class Word:
    """A finite word with a composed affine map and its product quantities.

    ``slope`` and ``intercept`` describe a composition of the symbol maps
    as x -> slope * x + intercept, so the word's cylinder interval is
    [intercept, intercept + slope].  Two composition orders appear in this
    module and both are products of the same maps, so ratio_product and
    weight_product are order-free; see compose_word and stopping_words
    for which order each constructor uses.
    """

    symbols: tuple
    ratio_product: float
    weight_product: float
    slope: float
    intercept: float

    def __len__(self) -> int:
        return len(self.symbols)


def compose_word(ifs: WeightedIFS, symbols: Iterable) -> Word:
    """Compose the maps named by ``symbols`` in orbit order.

    The first symbol's map is applied first, so later symbols act
    outermost: the word (a, b) composes to map_b after map_a.  This is the
    order in which a trajectory visits the maps.  The refinement order
    used for cylinder decompositions is the reverse; see stopping_words.
    """
    syms = tuple(symbols)
    slope = 1.0
    intercept = 0.0
    weight = 1.0
    for s in syms:
        m = ifs.map_for(s)
        slope *= m.ratio
        intercept = m.ratio * intercept + m.translation
        weight *= ifs.weight_for(s)
    return Word(syms, slope, weight, slope, intercept)


def cylinder_interval(ifs: WeightedIFS, word: Word) -> tuple[float, float]:
    """Image of [0,1] under the word's composed map."""
    return (word.intercept, word.intercept + word.slope)


def point_from_code(ifs: WeightedIFS, symbols: Iterable) -> tuple[float, float]:
    """Midpoint of a symbolic code's cylinder plus a radius bounding the error.

    The code is read in refinement order: the first symbol picks the
    level-1 cylinder, each following symbol a sub-cylinder within it, so
    any point of the attractor whose expansion extends the code lies
    within ``radius`` of the returned midpoint.
    """
    syms = tuple(symbols)
    if not syms:
        raise InputError("need at least one symbol to locate a point")
    word = compose_word(ifs, reversed(syms))
    return (word.intercept + 0.5 * word.slope, 0.5 * word.slope)


@dataclass(frozen=True)
class DisjointnessReport:
    """Outcome of the pairwise level-1 interval check."""

    ok: bool
    overlaps: tuple[tuple[object, object, float], ...]

    def __bool__(self) -> bool:
        return self.ok


def validate_disjointness(ifs: WeightedIFS) -> DisjointnessReport:
    """Check that level-1 cylinder interiors are pairwise disjoint.

    Endpoint touching (overlap length up to DISJOINT_TOL) is allowed.
    Offending pairs are reported with their overlap length.
    """
    bad = []
    intervals = [m.interval for m in ifs.maps]
    for i in range(len(intervals)):
        for j in range(i + 1, len(intervals)):
            lo = max(intervals[i][0], intervals[j][0])
            hi = min(intervals[i][1], intervals[j][1])
            if hi - lo > DISJOINT_TOL:
                bad.append((ifs.symbols[i], ifs.symbols[j], hi - lo))
    return DisjointnessReport(not bad, tuple(bad))


@dataclass(frozen=True)
class StoppingFamily:
    """Minimal words whose contraction has reached the scale exp(-t)."""

    t: float
    words: tuple[Word, ...]

    def __len__(self) -> int:
        return len(self.words)

    @property
    def total_weight(self) -> float:
        return math.fsum(w.weight_product for w in self.words)


def _moran_exponent_estimate(ratios: Sequence[float]) -> float:
    # Crude bisection for the exponent with sum(r^s) = 1; only used to
    # estimate family sizes in cap-overflow messages.
    if len(ratios) == 1:
        return 0.0
    lo, hi = 0.0, 1.0
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        if sum(r ** mid for r in ratios) > 1.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def stopping_words(ifs: WeightedIFS, t: float, cap: int = DEFAULT_WORD_CAP) -> StoppingFamily:
    """Enumerate the minimal words with contraction factor at most exp(-t).

    A word is emitted exactly when its ratio product drops to exp(-t) or
    below while every proper prefix stays above, so the family is
    prefix-free, carries total weight 1, and every ratio product lies in
    (min_ratio * exp(-t), exp(-t)].  Words are produced in depth-first
    order following the alphabet order.

    The affine data of each word composes the maps in refinement order:
    the first symbol acts outermost, each appended symbol subdivides the
    current cylinder.  The family's cylinders are therefore nested below
    their prefixes and pairwise disjoint up to endpoints, which is what
    the measure decomposition over the family requires (it equals
    compose_word of the reversed symbols).  Raises ResourceCapError when
    more than ``cap`` words would be emitted.
    """
    if not (t > 0.0 and math.isfinite(t)):
        raise InputError(f"stopping time must be positive and finite, got {t!r}")
    if cap < 1:
        raise InputError(f"word cap must be at least 1, got {cap!r}")
    threshold = math.exp(-t)
    out: list[Word] = []
    # Stack entries: (symbols, ratio_product, weight_product, intercept);
    # the refinement-order slope equals the ratio product.  Root
    # descendants pushed in reverse so alphabet order pops first.
    stack: list[tuple[tuple, float, float, float]] = [((), 1.0, 1.0, 0.0)]
    while stack:
        syms, ratio, weight, intercept = stack.pop()
        if syms and ratio <= threshold:
            if len(out) >= cap:
                est = math.exp(_moran_exponent_estimate(
                    [m.ratio for m in ifs.maps]) * t)
                raise ResourceCapError(
                    f"stopping family for t={t!r} exceeds cap={cap} "
                    f"(size estimate about {est:.3g} words)")
            out.append(Word(syms, ratio, weight, ratio, intercept))
            continue
        for k in range(ifs.size - 1, -1, -1):
            m = ifs.maps[k]
            stack.append((
                syms + (ifs.symbols[k],),
                ratio * m.ratio,
                weight * ifs.weights[k],
                intercept + ratio * m.translation,
            ))
    return StoppingFamily(t, tuple(out))
