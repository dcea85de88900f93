"""Exhaustive enumeration of integral points of bounded height.

Desk-scale by design: a budget guard refuses scans that would exceed the
configured number of candidates, and everything enumerated is re-checked with
exact arithmetic.  Affine mode enumerates X(Z,B); projective mode enumerates
one primitive, sign-normalized representative per rational point in the box.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import floor, gcd

from .errors import BudgetExceededError, InputError

DEFAULT_BUDGET = 10**9


@dataclass(frozen=True)
class HeightBox:
    """Per-coordinate height bounds B_i > 0 (rationals)."""

    bounds: tuple

    def __post_init__(self):
        bounds = tuple(Fraction(b) for b in self.bounds)
        if not bounds or any(b <= 0 for b in bounds):
            raise InputError("height bounds must be positive")
        object.__setattr__(self, "bounds", bounds)

    @classmethod
    def uniform(cls, b, n):
        return cls(tuple([b] * n))

    def ranges(self):
        return [int(floor(b)) for b in self.bounds]


@dataclass(frozen=True)
class PointSet:
    mode: str  # "affine" | "projective"
    points: tuple  # integer tuples, sorted lexicographically
    box: HeightBox


def _check_budget(required, budget):
    if required > budget:
        raise BudgetExceededError(required, budget)


def _solvable_coordinate(generators, num_vars):
    """Find (generator, var) with generator = c*x_var + r(other vars),
    c a nonzero constant.  Used to drop one dimension from the scan; purely
    an optimization, results are re-checked against all generators."""
    for g in generators:
        for j in range(num_vars):
            coeff = None
            rest_ok = True
            for e, c in g.terms.items():
                if e[j] == 0:
                    continue
                if e[j] == 1 and all(e[i] == 0 for i in range(num_vars) if i != j):
                    if coeff is not None:
                        rest_ok = False
                        break
                    coeff = c
                else:
                    rest_ok = False
                    break
            if rest_ok and coeff is not None:
                return g, j, coeff
    return None


def enumerate_affine(ideal, b, budget=DEFAULT_BUDGET, use_solver=True):
    """All integer points of the variety with |x_i| <= b, sorted."""
    b = Fraction(b)
    if b <= 0:
        raise InputError("height bound must be positive")
    n = ideal.num_vars
    limit = int(floor(b))
    width = 2 * limit + 1

    solver = _solvable_coordinate(ideal.generators, n) if use_solver else None
    scan_dims = n - 1 if solver else n
    _check_budget(width**scan_dims, budget)

    pts = []
    rng = range(-limit, limit + 1)
    if solver:
        g, j, coeff = solver
        others = [i for i in range(n) if i != j]
        for combo in itertools.product(rng, repeat=n - 1):
            point = [0] * n
            for i, v in zip(others, combo):
                point[i] = v
            point[j] = 0
            residual = g.evaluate(point)
            val = -residual / coeff
            if val.denominator != 1 or abs(val) > b:
                continue
            point[j] = int(val)
            if all(h.evaluate(point) == 0 for h in ideal.generators):
                pts.append(tuple(point))
    else:
        for point in itertools.product(rng, repeat=n):
            if all(h.evaluate(point) == 0 for h in ideal.generators):
                pts.append(point)

    pts.sort()
    return PointSet("affine", tuple(pts), HeightBox.uniform(b, n))


def enumerate_projective(ideal, box, budget=DEFAULT_BUDGET):
    """Primitive, sign-normalized integer representatives of rational points
    on the projective variety within the box."""
    if not ideal.homogeneous:
        raise ValueError("projective enumeration requires a homogeneous ideal")
    n = ideal.num_vars
    if len(box.bounds) != n:
        raise InputError("box dimension must match the ambient variable count")
    limits = box.ranges()
    required = 1
    for lim in limits:
        required *= 2 * lim + 1
    _check_budget(required, budget)

    pts = []
    ranges = [range(-lim, lim + 1) for lim in limits]
    for vec in itertools.product(*ranges):
        first = next((v for v in vec if v != 0), None)
        if first is None or first < 0:
            continue  # zero vector, or the mirror of a normalized vector
        g = 0
        for v in vec:
            g = gcd(g, v)
        if g != 1:
            continue
        if all(h.evaluate(vec) == 0 for h in ideal.generators):
            pts.append(vec)
    pts.sort()
    return PointSet("projective", tuple(pts), box)


def class_index(point, box):
    """Smallest i attaining max_j |x_j|/B_j (exact rational comparison)."""
    ratios = [Fraction(abs(x)) / b for x, b in zip(point, box.bounds)]
    best = max(ratios)
    return ratios.index(best)


def partition_classes(ps, box=None):
    """Partition a projective point set into the n+1 classes S_i, assigning
    each point to the smallest index attaining the maximal scaled coordinate."""
    if ps.mode != "projective":
        raise ValueError("partitioning applies to projective point sets")
    box = box or ps.box
    buckets = [[] for _ in box.bounds]
    for p in ps.points:
        buckets[class_index(p, box)].append(p)
    return [PointSet("projective", tuple(b), box) for b in buckets]


def tau_normalize(point, box):
    """Coordinate-wise exact division by the height bounds; lands in
    [-1,1]^(n+1) for in-box points."""
    if len(point) != len(box.bounds):
        raise InputError("dimension mismatch")
    out = tuple(Fraction(x) / b for x, b in zip(point, box.bounds))
    if any(abs(v) > 1 for v in out):
        raise ValueError(f"point {point} lies outside the box")
    return out
