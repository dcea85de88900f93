"""Leading-term ideals, staircases and Hilbert-function machinery.

Groebner bases are computed with a degree-truncated Buchberger algorithm
(normal selection strategy, final interreduction, deterministic ordering of
generators and output).  Truncation is only allowed for homogeneous ideals,
where discarding S-pairs above the cap is sound because homogeneous
S-polynomials never drop in degree.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from fractions import Fraction
from math import factorial

from .errors import DegenerateIdealError, InputError
from .polynomials import Ordering, Polynomial, divides


class Ideal:
    """A finitely generated ideal, given by nonzero generators."""

    def __init__(self, generators, num_vars):
        generators = list(generators)
        if not generators:
            raise InputError("ideal needs at least one generator")
        for g in generators:
            if not isinstance(g, Polynomial) or g.num_vars != num_vars:
                raise InputError("generators must be polynomials in num_vars variables")
            if g.is_zero():
                raise InputError("zero polynomial is not allowed as a generator")
        self.generators = generators
        self.num_vars = num_vars
        self.homogeneous = all(g.is_homogeneous() for g in generators)

    def __repr__(self):
        return f"Ideal({len(self.generators)} gens, {self.num_vars} vars)"


class GroebnerBasis:
    def __init__(self, ideal, ordering, basis, truncation_degree):
        self.ideal = ideal
        self.ordering = ordering
        self.basis = basis
        self.truncation_degree = truncation_degree
        self.leading_monomials = [g.leading_monomial(ordering) for g in basis]
        self._staircases = {}

    @property
    def num_vars(self):
        return self.ideal.num_vars

    def _check_cap(self, degree, what):
        if self.truncation_degree is not None and degree > self.truncation_degree:
            raise ValueError(
                f"{what} degree {degree} exceeds truncation cap "
                f"{self.truncation_degree}"
            )


@dataclass(frozen=True)
class Staircase:
    """Degree-delta monomials outside LT(I), sorted descending by ordering."""

    delta: int
    exponents: tuple


def _sort_key(ordering):
    return lambda g: (ordering.key(g.leading_monomial(ordering)), sorted(g.terms))


def _s_polynomial(f, g, ordering):
    lmf, lcf = f.leading_term(ordering)
    lmg, lcg = g.leading_term(ordering)
    lcm = tuple(max(a, b) for a, b in zip(lmf, lmg))
    n = f.num_vars
    mf = Polynomial.monomial(tuple(a - b for a, b in zip(lcm, lmf)), n, 1 / lcf)
    mg = Polynomial.monomial(tuple(a - b for a, b in zip(lcm, lmg)), n, 1 / lcg)
    return mf * f - mg * g


def _reduce(f, basis, lms, ordering):
    """Full normal form of f against (basis, lms)."""
    remainder = {}
    work = f
    while not work.is_zero():
        lm, lc = work.leading_term(ordering)
        for g, lmg in zip(basis, lms):
            if divides(lmg, lm):
                quot = Polynomial.monomial(
                    tuple(a - b for a, b in zip(lm, lmg)),
                    f.num_vars,
                    lc / g.terms[lmg],
                )
                work = work - quot * g
                break
        else:
            remainder[lm] = lc
            work = work - Polynomial.monomial(lm, f.num_vars, lc)
    return Polynomial(remainder, f.num_vars)


def groebner(ideal, ordering, degree_cap=None):
    """Buchberger with optional degree truncation (homogeneous ideals only)."""
    if degree_cap is not None and not ideal.homogeneous:
        raise ValueError("degree truncation requires a homogeneous ideal")

    basis = sorted(
        (g.monic(ordering) for g in ideal.generators), key=_sort_key(ordering)
    )
    # drop duplicate generators
    seen = []
    for g in basis:
        if g not in seen:
            seen.append(g)
    basis = seen
    lms = [g.leading_monomial(ordering) for g in basis]

    heap = []
    counter = 0

    def push_pairs(j):
        nonlocal counter
        for i in range(j):
            lcm = tuple(max(a, b) for a, b in zip(lms[i], lms[j]))
            if lcm == tuple(a + b for a, b in zip(lms[i], lms[j])):
                continue  # coprime leading monomials: S-pair reduces to zero
            if degree_cap is not None and sum(lcm) > degree_cap:
                continue
            heapq.heappush(heap, (sum(lcm), counter, i, j))
            counter += 1

    for j in range(len(basis)):
        push_pairs(j)

    while heap:
        _, _, i, j = heapq.heappop(heap)
        s = _s_polynomial(basis[i], basis[j], ordering)
        r = _reduce(s, basis, lms, ordering)
        if not r.is_zero():
            basis.append(r.monic(ordering))
            lms.append(basis[-1].leading_monomial(ordering))
            push_pairs(len(basis) - 1)

    # interreduce: drop elements whose LM is divisible by another LM, then
    # fully reduce each survivor against the rest
    keep = []
    for idx, lm in enumerate(lms):
        if any(
            divides(lms[k], lm) and k != idx and (lms[k] != lm or k < idx)
            for k in range(len(lms))
        ):
            continue
        keep.append(idx)
    reduced = [basis[k] for k in keep]
    changed = True
    while changed:
        changed = False
        for idx in range(len(reduced)):
            others = reduced[:idx] + reduced[idx + 1 :]
            olms = [g.leading_monomial(ordering) for g in others]
            r = _reduce(reduced[idx], others, olms, ordering)
            if r.is_zero():
                reduced.pop(idx)
                changed = True
                break
            r = r.monic(ordering)
            if r != reduced[idx]:
                reduced[idx] = r
                changed = True

    reduced.sort(key=_sort_key(ordering))
    return GroebnerBasis(ideal, ordering, reduced, degree_cap)


def normal_form(f, gb):
    """Remainder of f on division by gb; zero iff f lies in the ideal
    (up to the truncation cap)."""
    if f.num_vars != gb.num_vars:
        raise InputError("variable count mismatch")
    if not f.is_zero():
        gb._check_cap(f.degree(), "polynomial")
    return _reduce(f, gb.basis, gb.leading_monomials, gb.ordering)


def monomials_of_degree(total, nvars):
    """All exponent tuples of the given total degree (recursive stars&bars)."""
    if nvars == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in monomials_of_degree(total - first, nvars - 1):
            yield (first,) + rest


def staircase(gb, delta):
    """M(delta): degree-delta monomials outside LT(I)."""
    if delta < 0:
        raise InputError("degree must be nonnegative")
    gb._check_cap(delta, "staircase")
    cached = gb._staircases.get(delta)
    if cached is not None:
        return cached
    lms = gb.leading_monomials
    exps = [
        e
        for e in monomials_of_degree(delta, gb.num_vars)
        if not any(divides(lm, e) for lm in lms)
    ]
    exps.sort(key=gb.ordering.key, reverse=True)
    sc = Staircase(delta, tuple(exps))
    gb._staircases[delta] = sc
    return sc


def hilbert_function(gb, s):
    return len(staircase(gb, s).exponents)


def sigma(gb, i, s):
    """Sum of the i-th exponent entries over the degree-s staircase."""
    if i < 0 or i >= gb.num_vars:
        raise InputError("variable index out of range")
    return sum(e[i] for e in staircase(gb, s).exponents)


def all_sigmas(gb, s):
    exps = staircase(gb, s).exponents
    return tuple(sum(e[i] for e in exps) for i in range(gb.num_vars))


@dataclass(frozen=True)
class DimensionDegree:
    dimension: int
    degree: int
    hilbert_polynomial: Polynomial  # univariate, exact rational coefficients
    s_stable: int


class WindowTooSmallError(ValueError):
    def __init__(self, message, consistent_prefix):
        super().__init__(message)
        self.consistent_prefix = consistent_prefix


def dimension_and_degree(gb, s_window):
    """Fit the Hilbert polynomial on a window of consecutive degrees.

    The fit uses forward differences; it must be confirmed by at least two
    window values beyond those needed to determine the polynomial.
    """
    points = list(s_window)
    if len(points) < 4:
        raise InputError("window must contain at least 4 degrees")
    if any(b - a != 1 for a, b in zip(points, points[1:])):
        raise InputError("window degrees must be consecutive")
    values = [Fraction(hilbert_function(gb, s)) for s in points]

    row = values
    order = 0
    while order < len(points) - 1 and any(v != 0 for v in row):
        row = [b - a for a, b in zip(row, row[1:])]
        order += 1
    if any(v != 0 for v in row):
        # report the longest prefix on which low-order differences do vanish
        raise WindowTooSmallError(
            "no consistent Hilbert polynomial on the window; grow the window",
            consistent_prefix=points[: len(points) - 1],
        )
    deg = order - 1  # all values zero => deg = -1 (empty variety)
    if deg >= 0 and len(points) < deg + 3:
        raise WindowTooSmallError(
            "window determines the polynomial but leaves <2 confirmations",
            consistent_prefix=points,
        )

    s0 = points[0]
    t = Polynomial.variable(0, 1)
    poly = Polynomial.zero(1)
    # Newton forward form around s0
    diffs = [values]
    for _ in range(max(deg, 0)):
        prev = diffs[-1]
        diffs.append([b - a for a, b in zip(prev, prev[1:])])
    for i in range(deg + 1):
        term = Polynomial.constant(diffs[i][0] / factorial(i), 1)
        for j in range(i):
            term = term * (t - (s0 + j))
        poly = poly + term
    # confirm against every window value
    for s, v in zip(points, values):
        if poly.evaluate((s,)) != v:
            raise WindowTooSmallError(
                "fitted polynomial fails to predict later window values",
                consistent_prefix=points[: deg + 2],
            )

    if deg < 0:
        return DimensionDegree(-1, 0, poly, s0)
    lead = poly.coefficient((deg,))
    degree = factorial(deg) * lead
    if degree.denominator != 1:
        raise ValueError(f"non-integral degree {degree} from Hilbert polynomial")
    return DimensionDegree(deg, int(degree), poly, s0)


def a_estimates(gb, s):
    """Finite-s estimates a_i(s) = sigma_i(s) / (s * HF(s)), exact rationals.

    These carry O(1/s) error against the limiting values; the limit itself is
    never claimed.
    """
    if s < 1:
        raise InputError("s must be >= 1")
    hf = hilbert_function(gb, s)
    if hf == 0:
        raise DegenerateIdealError(f"Hilbert function vanishes at s={s}")
    sig = all_sigmas(gb, s)
    ests = tuple(Fraction(x, s * hf) for x in sig)
    assert sum(ests) == 1
    return ests


def homogenize_ideal(affine_ideal, gb_ordering=Ordering.GREVLEX):
    """Homogenization of an affine ideal, with the new variable in front.

    Homogenizing a Groebner basis w.r.t. a graded ordering (not the raw
    generators) is what actually generates the homogenized ideal.
    """
    gb = groebner(affine_ideal, gb_ordering, degree_cap=None)
    gens = [g.homogenize(0) for g in gb.basis]
    return Ideal(gens, affine_ideal.num_vars + 1)


@dataclass(frozen=True)
class OrderingBoundReport:
    s: int
    lhs: Fraction  # (sigma_1 + ... + sigma_n)(s) / (s * HF(s))
    intermediate_bound: Fraction  # sum_{t<=s} t HF_J(t) / (s * HF(s))
    limit: Fraction  # m / (m+1)
    dimension: int
    holds: bool


def affine_ordering_bound(affine_ideal, s, window=None):
    """Check, at finite s, the exact inequality behind the bound
    a_1 + ... + a_n <= m/(m+1) under the left-graded ordering.

    lhs is computed from the staircase of the homogenized ideal; the
    intermediate bound uses J = I^h + (x0).  The inequality lhs <= intermediate
    is exact at every finite s.
    """
    ih = homogenize_ideal(affine_ideal)
    gb = groebner(ih, Ordering.GRLEX_LEFT, degree_cap=s)
    hf = hilbert_function(gb, s)
    if hf == 0:
        raise DegenerateIdealError(f"HF of homogenization vanishes at s={s}")
    sig = all_sigmas(gb, s)
    lhs = Fraction(sum(sig[1:]), s * hf)

    x0 = Polynomial.variable(0, ih.num_vars)
    j_ideal = Ideal(list(ih.generators) + [x0], ih.num_vars)
    gb_j = groebner(j_ideal, Ordering.GRLEX_LEFT, degree_cap=s)
    inter = Fraction(
        sum(t * hilbert_function(gb_j, t) for t in range(1, s + 1)), s * hf
    )

    if window is None:
        hi = s
        window = range(max(1, hi - 5), hi + 1)
    dd = dimension_and_degree(gb, window)
    m = dd.dimension
    limit = Fraction(m, m + 1) if m >= 0 else Fraction(0)
    return OrderingBoundReport(
        s=s,
        lhs=lhs,
        intermediate_bound=inter,
        limit=limit,
        dimension=m,
        holds=lhs <= inter,
    )
