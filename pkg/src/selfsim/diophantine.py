"""Diophantine diagnostics for the log-contraction measure.

The auxiliary measure of a weighted system puts mass p_w at -log(r_w) for
each alphabet symbol.  Its Laplace transform on the imaginary axis detects
near-resonances: frequencies b where 1 - L(i*b) nearly vanishes.  The scan
here tracks how fast those near-zeros decay relative to b^l, the quantity
that quantifies a weak diophantine property of the location ratios.  The
module also hosts continued fractions, a rationality test for location
ratios, and the closed-form linear-forms-in-logarithms constants used by
the integer-digit applications.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import InputError
from .ifs import WeightedIFS

# Rationality detection for location ratios: certified denominators stay
# at or below this cap, with this residual tolerance.
LATTICE_DENOMINATOR_CAP = 10 ** 6
LATTICE_TOL = 1e-11

# Continued fractions stop once denominators pass this guard; beyond it a
# float carries no further usable quotients.
CF_DENOMINATOR_GUARD = 2 ** 50

# A partial quotient this large marks the remainder as zero at float
# precision, i.e. the expansion has effectively terminated.
HUGE_QUOTIENT = 10 ** 8

# Atom locations closer than this are merged.
ATOM_MERGE_TOL = 1e-12

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61)


@dataclass(frozen=True)
class AuxiliaryMeasure:
    """Purely atomic probability measure on the positive half-line.

    ``atoms`` holds (location, mass) pairs with strictly increasing
    locations and positive masses summing to 1.  ``sigma`` is the mean
    location.
    """

    atoms: tuple[tuple[float, float], ...]
    sigma: float

    @property
    def locations(self) -> tuple[float, ...]:
        return tuple(a for a, _ in self.atoms)

    @property
    def masses(self) -> tuple[float, ...]:
        return tuple(m for _, m in self.atoms)

    @property
    def max_location(self) -> float:
        return self.atoms[-1][0]

    def survival(self, z: float) -> float:
        """Mass strictly beyond z."""
        return math.fsum(m for loc, m in self.atoms if loc > z)


def auxiliary_measure(ifs: WeightedIFS) -> AuxiliaryMeasure:
    """Place each symbol's weight at its log contraction -log(ratio).

    Locations within ATOM_MERGE_TOL of each other are merged onto the
    smallest location of the run, accumulating their masses.
    """
    pairs = sorted((-math.log(m.ratio), w) for m, w in zip(ifs.maps, ifs.weights))
    merged: list[tuple[float, float]] = []
    for loc, w in pairs:
        if merged and loc - merged[-1][0] <= ATOM_MERGE_TOL:
            merged[-1] = (merged[-1][0], merged[-1][1] + w)
        else:
            merged.append((loc, w))
    sigma = math.fsum(loc * w for loc, w in merged)
    return AuxiliaryMeasure(tuple(merged), sigma)


def laplace_transform(lam: AuxiliaryMeasure, z: complex) -> complex:
    """Sum of mass * exp(-z * location) over the atoms."""
    return complex(sum(m * cmath.exp(-z * loc) for loc, m in lam.atoms))


@dataclass(frozen=True)
class DiophantineReport:
    """Scan of the resonance gap b -> |1 - L(i*b)| against the power b^l.

    ``rows`` holds (b, gap, scaled) with scaled = b^l * gap, b ascending.
    ``log_c`` is a Baker-type constant when one applies, else nan.
    """

    degree_l: float
    log_c: float
    rows: tuple[tuple[float, float, float], ...]
    lattice: bool

    @property
    def scan_min(self) -> float:
        return min(r[1] for r in self.rows)

    @property
    def scan_argmin(self) -> float:
        return min(self.rows, key=lambda r: r[1])[0]


def _scaled_gap(b: float, gap: float, l: float) -> float:
    # b^l overflows floats long before the product does not matter, so the
    # product is assembled in log space.
    if gap == 0.0:
        return 0.0
    e = l * math.log(b) + math.log(gap)
    if e >= 709.0:
        return math.inf
    return math.exp(e)


def weakly_diophantine_scan(
    lam: AuxiliaryMeasure,
    l: float,
    b_max: float,
    grid: int,
) -> DiophantineReport:
    """Tabulate the resonance gap over [1, b_max] with targeted refinement.

    A uniform grid is augmented near every candidate resonance
    b = 2*pi*k / location, the only frequencies where a single atom's
    phase returns to 1.  The gap can only vanish on the scan when the
    atom locations share a common multiple of 2*pi/b, the lattice case,
    which is also reported.
    """
    if not (l > 0.0 and math.isfinite(l)):
        raise InputError(f"power must be positive and finite, got {l!r}")
    if not (b_max > 1.0):
        raise InputError(f"frequency ceiling must exceed 1, got {b_max!r}")
    if grid < 2:
        raise InputError(f"grid must have at least 2 points, got {grid!r}")
    spacing = (b_max - 1.0) / (grid - 1)
    candidates = [np.linspace(1.0, b_max, grid)]
    offsets = np.array([-1.0, -0.25, 0.0, 0.25, 1.0]) * spacing
    for loc in lam.locations:
        k_lo = max(1, math.ceil(loc / (2.0 * math.pi)))
        k_hi = math.floor(b_max * loc / (2.0 * math.pi))
        if k_hi < k_lo:
            continue
        ks = np.arange(k_lo, k_hi + 1, dtype=float)
        centers = 2.0 * math.pi * ks / loc
        refined = (centers[:, None] + offsets[None, :]).ravel()
        candidates.append(refined[(refined >= 1.0) & (refined <= b_max)])
    bs = np.unique(np.concatenate(candidates))
    locs = np.array(lam.locations)
    masses = np.array(lam.masses)
    transform = np.exp(-1j * np.outer(bs, locs)) @ masses
    gaps = np.abs(1.0 - transform)
    rows = tuple(
        (float(b), float(g), _scaled_gap(float(b), float(g), l))
        for b, g in zip(bs, gaps)
    )
    return DiophantineReport(
        degree_l=float(l),
        log_c=math.nan,
        rows=rows,
        lattice=lattice_test(lam),
    )


@dataclass(frozen=True)
class ContinuedFraction:
    """Partial quotients and convergents of a number in (0,1).

    ``terminating`` marks an expansion that ended because the input is a
    rational (exactly, or at float precision); ``precision_exhausted``
    marks a stop forced by the denominator guard before any such ending.
    """

    quotients: tuple[int, ...]
    convergents: tuple[tuple[int, int], ...]
    terminating: bool
    precision_exhausted: bool


def continued_fraction_expansion(theta: float, n: int) -> ContinuedFraction:
    """Exact continued fraction of the float's binary rational value.

    Up to ``n`` partial quotients of theta = [0; a1, a2, ...] are produced
    by integer Euclid steps on the exact fraction.  The expansion stops
    early with ``terminating`` when the remainder vanishes or a partial
    quotient reaches HUGE_QUOTIENT (the float is that convergent to
    machine precision), and with ``precision_exhausted`` when convergent
    denominators pass CF_DENOMINATOR_GUARD.
    """
    if not (0.0 < theta < 1.0):
        raise InputError(f"continued fractions expect theta in (0,1), got {theta!r}")
    if n < 1:
        raise InputError(f"need at least one quotient, got {n!r}")
    frac = Fraction(theta)
    num, den = frac.numerator, frac.denominator
    quotients: list[int] = []
    convergents: list[tuple[int, int]] = []
    p_prev, p_cur = 1, 0
    q_prev, q_cur = 0, 1
    terminating = False
    exhausted = False
    while len(quotients) < n:
        a = den // num
        rem = den - a * num
        if a >= HUGE_QUOTIENT:
            terminating = True
            break
        p_prev, p_cur = p_cur, a * p_cur + p_prev
        q_prev, q_cur = q_cur, a * q_cur + q_prev
        quotients.append(a)
        convergents.append((p_cur, q_cur))
        if rem == 0:
            terminating = True
            break
        if q_cur > CF_DENOMINATOR_GUARD:
            exhausted = True
            break
        num, den = rem, num
    return ContinuedFraction(tuple(quotients), tuple(convergents),
                             terminating, exhausted)


def classify_ratio(theta: float) -> str:
    """Classify a ratio in (0,1) as 'rational', 'irrational' or 'indeterminate'.

    Certified rational: the expansion terminates at a convergent with
    denominator at most LATTICE_DENOMINATOR_CAP matching theta within
    LATTICE_TOL.  Certified irrational: no convergent under the cap gets
    within LATTICE_TOL.  Anything between is indeterminate; a ratio can
    sit within 1e-12 of a modest fraction without being rational, so a
    close convergent without a terminating expansion proves nothing.
    """
    cf = continued_fraction_expansion(theta, 64)
    best_err = math.inf
    for p, q in cf.convergents:
        if q > LATTICE_DENOMINATOR_CAP:
            break
        best_err = min(best_err, abs(theta - p / q))
    if cf.terminating and cf.convergents and best_err <= LATTICE_TOL:
        p, q = cf.convergents[-1]
        if q <= LATTICE_DENOMINATOR_CAP:
            return "rational"
    if best_err <= LATTICE_TOL:
        return "indeterminate"
    return "irrational"


def classify_lattice(lam: AuxiliaryMeasure) -> str:
    """Tri-state lattice classification of the atom locations.

    The support lies on a lattice c*Z exactly when every pairwise ratio of
    locations is rational.  Returns 'lattice', 'non-lattice' or
    'indeterminate' (some ratio was too close to a fraction to refute but
    not certified rational).
    """
    locs = lam.locations
    if len(locs) == 1:
        return "lattice"
    saw_indeterminate = False
    for i in range(len(locs)):
        for j in range(i + 1, len(locs)):
            ratio = locs[i] / locs[j]
            verdict = classify_ratio(ratio)
            if verdict == "irrational":
                return "non-lattice"
            if verdict == "indeterminate":
                saw_indeterminate = True
    return "indeterminate" if saw_indeterminate else "lattice"


def lattice_test(lam: AuxiliaryMeasure) -> bool:
    """True only for a certified lattice; indeterminate counts as False."""
    return classify_lattice(lam) == "lattice"


def _validate_digit_pair(a1: int, a2: int) -> None:
    for a in (a1, a2):
        if not isinstance(a, int) or isinstance(a, bool) or a < 2:
            raise InputError(f"digits must be integers at least 2, got {a!r}")
    if a1 == a2:
        raise InputError(f"digits must be distinct, got {a1!r} twice")


def matveev_degree(a1: int, a2: int) -> float:
    """Effective power from the two-logarithm lower bound for digits a1, a2.

    The value is 387072 * e^3 * (15.8 + 5.5*log 2) * log(a1*(a1-1)) *
    log(a2*(a2-1)) + 1; it exceeds 2 for every admissible pair.
    """
    _validate_digit_pair(a1, a2)
    w1 = math.log(a1 * (a1 - 1))
    w2 = math.log(a2 * (a2 - 1))
    return 387072.0 * math.exp(3.0) * (15.8 + 5.5 * math.log(2.0)) * w1 * w2 + 1.0


def matveev_log_constant(a1: int, a2: int) -> float:
    """Log of the multiplicative constant paired with matveev_degree.

    With W_i = log(a_i*(a_i-1)) and l the degree, the constant is
    -log(W2) - (l - 1) * log(3*e*W1 / (2*W2)).  The second factor's sign
    follows the inner ratio, so the result is a large negative number when
    3*e*W1 exceeds 2*W2 and a large positive one otherwise.
    """
    _validate_digit_pair(a1, a2)
    w1 = math.log(a1 * (a1 - 1))
    w2 = math.log(a2 * (a2 - 1))
    degree = matveev_degree(a1, a2)
    return -math.log(w2) - (degree - 1.0) * math.log(3.0 * math.e * w1 / (2.0 * w2))


def _integer_root(m: int, k: int) -> int:
    # Round the float estimate, then fix it up exactly.
    r = round(m ** (1.0 / k))
    while r > 1 and r ** k > m:
        r -= 1
    while (r + 1) ** k <= m:
        r += 1
    return r


def _is_perfect_power(m: int) -> bool:
    if m < 4:
        return False
    for k in _SMALL_PRIMES:
        if k > m.bit_length():
            break
        r = _integer_root(m, k)
        if r >= 2 and r ** k == m:
            return True
    return False


def perfect_power_free(a: int) -> bool:
    """True when a*(a-1) is not a perfect power n^m with m >= 2.

    Prime exponents suffice: any proper power is a prime-exponent power.
    a*(a-1) sits strictly between (a-1)^2 and a^2, so squares never occur;
    the check still covers exponent 2 for uniformity.
    """
    if not isinstance(a, int) or isinstance(a, bool) or a < 2:
        raise InputError(f"argument must be an integer at least 2, got {a!r}")
    return not _is_perfect_power(a * (a - 1))
