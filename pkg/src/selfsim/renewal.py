"""Renewal-theoretic verification for the log-contraction walk.

A random walk with step law given by the auxiliary measure first crosses
a level t with some overshoot; for non-lattice step laws the overshoot
law stabilises as t grows, with limiting expectation
integral(g * survival) / integral(survival) over the positive half-line.
This module samples overshoots reproducibly, estimates expectations by
Monte Carlo, and evaluates the limit by adaptive quadrature, so the two
can be compared directly.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from .diophantine import AuxiliaryMeasure, lattice_test
from .errors import InputError, PreconditionError

# Fixed Monte Carlo chunk; the sample stream is a pure function of
# (seed, chunk index), so totals do not depend on scheduling.
_CHUNK = 1 << 16


@dataclass(frozen=True)
class PhaseTestFunction:
    """Smooth unimodular observable z -> exp(-2*pi*i*s*exp(-z)).

    Its derivative is bounded by 2*pi*|s|, so c1_bound dominates the
    supremum of |g| plus |g'|.
    """

    s: float

    def __call__(self, z: float) -> complex:
        return complex(np.exp(-2j * math.pi * self.s * math.exp(-z)))

    def apply_array(self, z: np.ndarray) -> np.ndarray:
        return np.exp((-2j * math.pi * self.s) * np.exp(-np.asarray(z)))

    @property
    def c1_bound(self) -> float:
        return 1.0 + 2.0 * math.pi * abs(self.s)


def phase_test_function(s: float) -> PhaseTestFunction:
    """Test observable of strength s, vectorised over overshoot arrays."""
    return PhaseTestFunction(float(s))


@dataclass(frozen=True)
class RenewalResult:
    """Monte Carlo overshoot expectation next to its stationary limit."""

    t: float
    mc_estimate: complex
    mc_stderr: float
    limit_value: complex
    n_samples: int
    seed: int
    lattice: bool


def _chunk_overshoots(
    lam: AuxiliaryMeasure,
    t: float,
    seed: int,
    chunk_index: int,
    count: int,
) -> np.ndarray:
    locs = np.array(lam.locations)
    probs = np.array(lam.masses)
    probs = probs / probs.sum()
    # Enough steps that even all-smallest-step walks cross t.
    steps = int(math.ceil(t / float(locs.min()))) + 2
    key = np.array([seed & 0xFFFFFFFFFFFFFFFF, chunk_index], dtype=np.uint64)
    rng = np.random.Generator(np.random.Philox(key=key))
    draws = rng.choice(len(locs), size=(count, steps), p=probs)
    sums = np.cumsum(locs[draws], axis=1)
    first = np.argmax(sums >= t, axis=1)
    return sums[np.arange(count), first] - t


def sample_overshoot(lam: AuxiliaryMeasure, t: float, seed: int) -> float:
    """One overshoot of the level-t first crossing, deterministic in the seed."""
    if not (t > 0.0 and math.isfinite(t)):
        raise InputError(f"crossing level must be positive and finite, got {t!r}")
    return float(_chunk_overshoots(lam, t, seed, 0, 1)[0])


def _apply_observable(g, z: np.ndarray) -> np.ndarray:
    if hasattr(g, "apply_array"):
        return np.asarray(g.apply_array(z), dtype=complex)
    return np.array([complex(g(float(v))) for v in z], dtype=complex)


def _segment_integral(g, a: float, b: float) -> complex:
    re = quad(lambda z: complex(g(z)).real, a, b,
              epsabs=1e-12, epsrel=1e-12, limit=200)[0]
    im = quad(lambda z: complex(g(z)).imag, a, b,
              epsabs=1e-12, epsrel=1e-12, limit=200)[0]
    return complex(re, im)


def renewal_limit(lam: AuxiliaryMeasure, g, _subdivide: int = 0) -> complex:
    """Stationary overshoot expectation integral(g*p) / integral(p).

    p(z) is the survival function of the step law, a step function
    breaking at the atom locations, so both integrals reduce to segment
    integrals handled by the same adaptive quadrature; the constant
    observable yields exactly 1.  ``_subdivide`` halves every segment
    that many times, which leaves the exact value unchanged and exists to
    let callers cross-check the quadrature.
    """
    numerator = 0j
    denominator = 0j
    prev = 0.0
    pieces = 2 ** max(0, int(_subdivide))
    for loc in lam.locations:
        # Survival is constant on [prev, loc); beyond the last atom it is 0.
        survival = lam.survival(prev)
        edges = np.linspace(prev, loc, pieces + 1)
        for a, b in zip(edges[:-1], edges[1:]):
            seg_g = _segment_integral(g, float(a), float(b))
            seg_1 = _segment_integral(lambda z: 1.0, float(a), float(b))
            numerator += survival * seg_g
            denominator += survival * seg_1
        prev = loc
    return numerator / denominator


def renewal_expectation_mc(
    lam: AuxiliaryMeasure,
    g,
    t: float,
    n_samples: int,
    seed: int,
) -> RenewalResult:
    """Monte Carlo overshoot expectation next to the stationary limit.

    Samples are generated in fixed-size chunks keyed by (seed, chunk
    index), so results are bit-reproducible for a given seed and sample
    count.  The standard error is sqrt(var(g) / n) with the scalar
    variance of the complex values.  A lattice step law never forgets its
    phase, so the estimate need not approach the limit there; that case
    is flagged on the result and raises a warning.
    """
    if not (t > 0.0 and math.isfinite(t)):
        raise InputError(f"crossing level must be positive and finite, got {t!r}")
    if n_samples < 100:
        raise PreconditionError(f"need at least 100 samples, got {n_samples!r}")
    lattice = lattice_test(lam)
    if lattice:
        warnings.warn(
            "lattice step law: the overshoot expectation does not converge "
            "to the stationary limit", stacklevel=2)
    sums_re: list[float] = []
    sums_im: list[float] = []
    sums_sq: list[float] = []
    done = 0
    chunk_index = 0
    while done < n_samples:
        count = min(_CHUNK, n_samples - done)
        z = _chunk_overshoots(lam, t, seed, chunk_index, count)
        vals = _apply_observable(g, z)
        sums_re.append(float(np.sum(vals.real)))
        sums_im.append(float(np.sum(vals.imag)))
        sums_sq.append(float(np.sum(vals.real ** 2 + vals.imag ** 2)))
        done += count
        chunk_index += 1
    mean = complex(math.fsum(sums_re) / n_samples, math.fsum(sums_im) / n_samples)
    variance = max(0.0, math.fsum(sums_sq) / n_samples - abs(mean) ** 2)
    stderr = math.sqrt(variance / n_samples)
    return RenewalResult(
        t=float(t),
        mc_estimate=mean,
        mc_stderr=stderr,
        limit_value=renewal_limit(lam, g),
        n_samples=int(n_samples),
        seed=int(seed),
        lattice=lattice,
    )
