"""Fourier transform of self-similar measures and decay-rate diagnostics.

The transform at frequency xi is the integral of exp(-2*pi*i*xi*x) against
the measure.  Two evaluators are provided: a certified sum over stopping
cylinders with an explicit error bound, and a Monte Carlo average over
random attractor points with a bias plus sampling bound.  On top of these
sit a dyadic maximum envelope, a log-log decay fit, and the closed-form
polylogarithmic decay exponent together with its frequency threshold.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import InputError
from .ifs import DEFAULT_WORD_CAP, WeightedIFS, stopping_words

TWO_PI = 2.0 * math.pi

# Rows processed per numpy block when evaluating many frequencies at once.
_BLOCK_ENTRIES = 2_000_000


@dataclass(frozen=True)
class SpectralSample:
    """One evaluation of the transform with a certified error bound."""

    xi: float
    value: complex
    error_bound: float
    method: str
    cost: int


@dataclass(frozen=True)
class EnvelopePoint:
    """Maximum modulus over one dyadic frequency block [x, 2x)."""

    x: float
    max_abs: float
    error_bound: float


@dataclass(frozen=True)
class DecayFit:
    """Least-squares fit of log(envelope) against log(log(frequency))."""

    beta_hat: float
    log_c: float
    window: tuple[float, float]
    residual_rms: float
    envelope: tuple[tuple[float, float], ...]


@lru_cache(maxsize=8)
def _cylinder_grid(ifs: WeightedIFS, t: float, cap: int) -> tuple[np.ndarray, np.ndarray]:
    family = stopping_words(ifs, t, cap)
    mid = np.array([w.intercept + 0.5 * w.slope for w in family.words])
    wts = np.array([w.weight_product for w in family.words])
    return mid, wts


def mu_hat_cylinder(
    ifs: WeightedIFS,
    xi: float,
    t: float,
    cap: int = DEFAULT_WORD_CAP,
) -> SpectralSample:
    """Evaluate the transform by collapsing each stopping cylinder to its midpoint.

    Every point of a cylinder sits within exp(-t) of the midpoint, and the
    phase exp(-2*pi*i*xi*x) has Lipschitz constant 2*pi*|xi|, so the
    returned bound pi*|xi|*exp(-t) dominates the true error (using the
    half-width exp(-t)/2 per cylinder).
    """
    mid, wts = _cylinder_grid(ifs, float(t), int(cap))
    value = complex(np.dot(wts, np.exp((-1j * TWO_PI * xi) * mid)))
    return SpectralSample(
        xi=float(xi),
        value=value,
        error_bound=math.pi * abs(xi) * math.exp(-t),
        method="cylinder",
        cost=len(mid),
    )


def mu_hat_monte_carlo(
    ifs: WeightedIFS,
    xi: float,
    samples: int,
    depth: int,
    seed: int,
) -> SpectralSample:
    """Estimate the transform by averaging over random depth-limited points.

    Points are driven from the interval midpoint by ``depth`` random maps
    drawn with the system's weights, so each lands within max_ratio^depth
    of an exactly distributed point; the error bound adds that phase bias
    to a 3/sqrt(samples) sampling term (about three standard deviations
    for a quantity of modulus at most 1).  Deterministic given the seed.
    """
    if samples < 1:
        raise InputError(f"need at least one sample, got {samples!r}")
    if depth < 1:
        raise InputError(f"depth must be at least 1, got {depth!r}")
    rng = np.random.default_rng(seed)
    ratios = np.array([m.ratio for m in ifs.maps])
    trans = np.array([m.translation for m in ifs.maps])
    probs = np.array(ifs.weights)
    probs = probs / probs.sum()
    x = np.full(samples, 0.5)
    for _ in range(depth):
        idx = rng.choice(ifs.size, size=samples, p=probs)
        x = ratios[idx] * x + trans[idx]
    value = complex(np.mean(np.exp((-1j * TWO_PI * xi) * x)))
    bias = math.pi * abs(xi) * ifs.max_ratio ** depth
    return SpectralSample(
        xi=float(xi),
        value=value,
        error_bound=bias + 3.0 / math.sqrt(samples),
        method="monte_carlo",
        cost=samples * depth,
    )


def self_similarity_residual(
    ifs: WeightedIFS,
    xi: float,
    t: float,
    cap: int = DEFAULT_WORD_CAP,
) -> float:
    """Distance between the transform and its one-step refinement.

    The measure equals the weight combination of its images under the
    level-1 maps, so the transform at xi must match the weighted sum of
    child transforms at ratio*xi twisted by the translation phases.  Both
    sides are evaluated with the same stopping time; the reported residual
    is bounded by the parent error bound plus the weighted child bounds.
    """
    parent = mu_hat_cylinder(ifs, xi, t, cap)
    combined = 0j
    for k in range(ifs.size):
        m = ifs.maps[k]
        child = mu_hat_cylinder(ifs, m.ratio * xi, t, cap)
        phase = np.exp(-1j * TWO_PI * xi * m.translation)
        combined += ifs.weights[k] * complex(phase) * child.value
    return abs(parent.value - combined)


def _scan_block(mid: np.ndarray, wts: np.ndarray, xis: np.ndarray) -> np.ndarray:
    out = np.empty(len(xis), dtype=complex)
    rows = max(1, _BLOCK_ENTRIES // max(1, len(mid)))
    for start in range(0, len(xis), rows):
        chunk = xis[start:start + rows]
        phases = np.exp(np.outer(chunk, mid) * (-1j * TWO_PI))
        out[start:start + len(chunk)] = phases @ wts
    return out


def dyadic_scan(
    ifs: WeightedIFS,
    xi_max: float,
    points_per_octave: int,
    t: float,
    cap: int = DEFAULT_WORD_CAP,
    threads: int | None = None,
) -> tuple[tuple[SpectralSample, ...], tuple[EnvelopePoint, ...]]:
    """Evaluate the transform on a geometric grid and reduce to block maxima.

    Blocks start at the powers of two below ``xi_max``; inside the block
    [X, 2X) the grid points are X * 2^(j / points_per_octave).  Each block
    reports its maximum modulus and the largest per-sample error bound.
    Work is split across ``threads`` workers (default 1) without changing
    any computed value.
    """
    if not (xi_max > 1.0):
        raise InputError(f"frequency ceiling must exceed 1, got {xi_max!r}")
    if points_per_octave < 1:
        raise InputError(
            f"need at least one point per octave, got {points_per_octave!r}")
    mid, wts = _cylinder_grid(ifs, float(t), int(cap))
    blocks: list[tuple[float, np.ndarray]] = []
    k = 0
    while 2.0 ** k < xi_max:
        x = 2.0 ** k
        xis = x * 2.0 ** (np.arange(points_per_octave) / points_per_octave)
        xis = xis[xis <= xi_max]
        if len(xis):
            blocks.append((x, xis))
        k += 1
    workers = 1 if threads is None else max(1, int(threads))
    if workers > 1 and len(blocks) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            values = list(pool.map(
                lambda blk: _scan_block(mid, wts, blk[1]), blocks))
    else:
        values = [_scan_block(mid, wts, xis) for _, xis in blocks]
    samples: list[SpectralSample] = []
    envelope: list[EnvelopePoint] = []
    for (x, xis), vals in zip(blocks, values):
        errs = math.pi * np.abs(xis) * math.exp(-t)
        block: list[SpectralSample] = [
            SpectralSample(float(xi), complex(v), float(e), "cylinder", len(mid))
            for xi, v, e in zip(xis, vals, errs)
        ]
        samples.extend(block)
        # The block maximum is taken over the emitted sample values so the
        # envelope agrees with the samples bit for bit.
        envelope.append(EnvelopePoint(float(x), max(abs(s.value) for s in block),
                                      float(errs.max())))
    return tuple(samples), tuple(envelope)


def dyadic_envelope(
    ifs: WeightedIFS,
    xi_max: float,
    points_per_octave: int,
    t: float,
    cap: int = DEFAULT_WORD_CAP,
    threads: int | None = None,
) -> tuple[EnvelopePoint, ...]:
    """Maximum transform modulus over dyadic frequency blocks."""
    return dyadic_scan(ifs, xi_max, points_per_octave, t, cap, threads)[1]


def decay_fit(envelope) -> DecayFit:
    """Fit max|transform| ~ C * (log X)^(-beta) on the dyadic envelope.

    Accepts EnvelopePoint sequences or (x, value) pairs.  Blocks with
    X < e^2 are dropped so log(log X) stays comfortably positive; at least
    4 usable blocks are required.  beta_hat is minus the least-squares
    slope of log(value) against log(log X).
    """
    points: list[tuple[float, float]] = []
    for item in envelope:
        if isinstance(item, EnvelopePoint):
            points.append((item.x, item.max_abs))
        else:
            x, v = item[0], item[1]
            points.append((float(x), float(v)))
    usable = [(x, v) for x, v in points if x >= math.exp(2.0) and v > 0.0]
    if len(usable) < 4:
        raise InputError(
            f"decay fit needs at least 4 blocks with X >= e^2 and positive "
            f"envelope, got {len(usable)}")
    lx = np.log(np.log([x for x, _ in usable]))
    ly = np.log([v for _, v in usable])
    mx = lx.mean()
    my = ly.mean()
    var = float(np.dot(lx - mx, lx - mx))
    slope = float(np.dot(lx - mx, ly - my)) / var
    intercept = my - slope * mx
    pred = intercept + slope * lx
    rms = float(np.sqrt(np.mean((ly - pred) ** 2)))
    return DecayFit(
        beta_hat=-slope,
        log_c=intercept,
        window=(usable[0][0], usable[-1][0]),
        residual_rms=rms,
        envelope=tuple(points),
    )


def theoretical_beta(alpha: float, l: float) -> float:
    """Closed-form decay exponent alpha / (2 * (1 + 2*alpha) * (8*l - 7))."""
    if not (0.0 <= alpha <= 1.0):
        raise InputError(f"regularity exponent must lie in [0,1], got {alpha!r}")
    if not (l >= 2.0):
        raise InputError(f"auxiliary degree must be at least 2, got {l!r}")
    return alpha / (2.0 * (1.0 + 2.0 * alpha) * (8.0 * l - 7.0))


def solve_t_of_xi(alpha: float, l: float, xi: float) -> float:
    """Invert xi = t^e * exp(t) for t > 1, e = (1+alpha)/((1+2*alpha)*(8l-7)).

    The left side is strictly increasing for t > 0, so the root is unique;
    it exists only when log|xi| > 1.  Bisection brackets the root and a few
    Newton steps polish it to full precision.
    """
    if not (0.0 <= alpha <= 1.0):
        raise InputError(f"regularity exponent must lie in [0,1], got {alpha!r}")
    if not (l >= 2.0):
        raise InputError(f"auxiliary degree must be at least 2, got {l!r}")
    target = math.log(abs(xi)) if xi else -math.inf
    if not (target > 1.0):
        raise InputError(
            f"no threshold above 1 exists for |xi| = {abs(xi)!r}; need "
            "log|xi| > 1")
    expo = (1.0 + alpha) / ((1.0 + 2.0 * alpha) * (8.0 * l - 7.0))
    # g(t) = e*log(t) + t - log|xi| changes sign on [1, log|xi|].
    lo, hi = 1.0, target
    for _ in range(100):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if expo * math.log(mid) + mid > target:
            hi = mid
        else:
            lo = mid
    root = 0.5 * (lo + hi)
    for _ in range(4):
        g = expo * math.log(root) + root - target
        root -= g / (expo / root + 1.0)
    return root
