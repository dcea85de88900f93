"""Independent oracles used by the test suite.

These deliberately avoid the library's staircase / kernel code paths so each
dual-route check keeps one side independent.
"""

import itertools
from fractions import Fraction

from detmethod import monomials_of_degree


def rational_rank(rows):
    """Row-reduction rank over exact rationals."""
    mat = [[Fraction(v) for v in row] for row in rows]
    rank = 0
    ncols = len(mat[0]) if mat else 0
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(mat)) if mat[i][c] != 0), None)
        if piv is None:
            continue
        mat[r], mat[piv] = mat[piv], mat[r]
        pv = mat[r][c]
        mat[r] = [v / pv for v in mat[r]]
        for i in range(len(mat)):
            if i != r and mat[i][c] != 0:
                f = mat[i][c]
                mat[i] = [a - f * b for a, b in zip(mat[i], mat[r])]
        r += 1
        rank += 1
        if r == len(mat):
            break
    return rank


def hilbert_oracle(ideal, s):
    """HF_I(s) for a homogeneous ideal: number of degree-s monomials minus
    the rank of the coefficient matrix of {x^beta * g : |beta| = s - deg g}."""
    n = ideal.num_vars
    cols = list(monomials_of_degree(s, n))
    col_index = {e: i for i, e in enumerate(cols)}
    rows = []
    for g in ideal.generators:
        dg = g.degree()
        if dg > s:
            continue
        for beta in monomials_of_degree(s - dg, n):
            row = [Fraction(0)] * len(cols)
            for e, c in g.terms.items():
                shifted = tuple(a + b for a, b in zip(e, beta))
                row[col_index[shifted]] = c
            rows.append(row)
    if not rows:
        return len(cols)
    return len(cols) - rational_rank(rows)


def exact_determinant(rows):
    """Fraction-exact determinant via elimination (small matrices)."""
    mat = [[Fraction(v) for v in row] for row in rows]
    n = len(mat)
    det = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if mat[i][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            mat[c], mat[piv] = mat[piv], mat[c]
            det = -det
        det *= mat[c][c]
        inv = 1 / mat[c][c]
        for i in range(c + 1, n):
            if mat[i][c] != 0:
                f = mat[i][c] * inv
                mat[i] = [a - f * b for a, b in zip(mat[i], mat[c])]
    return det


def naive_affine_points(ideal, b):
    """Full-box scan without the linear-solve shortcut."""
    limit = int(b)
    rng = range(-limit, limit + 1)
    out = []
    for p in itertools.product(rng, repeat=ideal.num_vars):
        if all(g.evaluate(p) == 0 for g in ideal.generators):
            out.append(p)
    return sorted(out)


def grid_derivative_max(poly, k, box, step=Fraction(1, 100)):
    """Dense-grid sampled max of |d^alpha poly| over the box, |alpha| <= k."""
    m = poly.num_vars
    axes = []
    for lo, hi in box:
        lo, hi = Fraction(lo), Fraction(hi)
        pts = []
        x = lo
        while x <= hi:
            pts.append(x)
            x += step
        if pts[-1] != hi:
            pts.append(hi)
        axes.append(pts)
    best = Fraction(0)
    for order in range(k + 1):
        for alpha in monomials_of_degree(order, m):
            d = poly.partial_derivative(alpha)
            if d.is_zero():
                continue
            for point in itertools.product(*axes):
                v = abs(d.evaluate(point))
                if v > best:
                    best = v
    return best
