"""Exact sparse multivariate polynomials over Q, with graded monomial orderings.

Exponent vectors are plain tuples of nonnegative ints; coefficients are
``fractions.Fraction``.  Everything is exact: no floats enter this module.
All values are treated as immutable after construction and may be shared
freely across workers.
"""

from __future__ import annotations

import enum
import re
from fractions import Fraction
from math import gcd

from .errors import InputError, ParseError

Exponent = tuple  # tuple of nonnegative ints, one entry per variable


class Ordering(enum.Enum):
    """Graded monomial orderings.

    GRLEX_LEFT is the convention used for the affine pipeline: at equal total
    degree, alpha < beta iff the left-most nonzero entry of alpha - beta is
    positive.  This makes the *first* variable the smallest one.  GREVLEX is
    graded reverse lexicographic with x0 > x1 > ... .
    """

    GRLEX_LEFT = "grlex-left"
    GREVLEX = "grevlex"

    def key(self, alpha):
        """Sort key: monomials compare like their keys (larger key = larger)."""
        if self is Ordering.GRLEX_LEFT:
            return (sum(alpha), tuple(-a for a in alpha))
        return (sum(alpha), tuple(-a for a in reversed(alpha)))


def compare(a, b, ordering):
    """Compare exponent vectors; returns -1 (a < b), 0 or 1."""
    if len(a) != len(b):
        raise InputError(f"exponent length mismatch: {len(a)} vs {len(b)}")
    ka, kb = ordering.key(a), ordering.key(b)
    if ka < kb:
        return -1
    if ka > kb:
        return 1
    return 0


def divides(a, b):
    """True if monomial x^a divides x^b."""
    return all(x <= y for x, y in zip(a, b))


def _coeff(c):
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int):
        return Fraction(c)
    raise InputError(f"coefficient must be exact rational, got {type(c).__name__}")


class Polynomial:
    """Sparse polynomial: map from exponent tuple to nonzero Fraction."""

    __slots__ = ("terms", "num_vars", "_hash")

    def __init__(self, terms, num_vars):
        if num_vars < 1:
            raise InputError("num_vars must be positive")
        clean = {}
        for exp, c in terms.items():
            if len(exp) != num_vars:
                raise InputError(
                    f"exponent {exp} has length {len(exp)}, expected {num_vars}"
                )
            if any(e < 0 for e in exp):
                raise InputError(f"negative exponent in {exp}")
            c = _coeff(c)
            if c != 0:
                clean[tuple(exp)] = c
        self.terms = clean
        self.num_vars = num_vars
        self._hash = None

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, num_vars):
        return cls({}, num_vars)

    @classmethod
    def constant(cls, c, num_vars):
        return cls({(0,) * num_vars: c}, num_vars)

    @classmethod
    def variable(cls, i, num_vars):
        exp = [0] * num_vars
        exp[i] = 1
        return cls({tuple(exp): 1}, num_vars)

    @classmethod
    def monomial(cls, exp, num_vars, coeff=1):
        return cls({tuple(exp): coeff}, num_vars)

    # -- basic queries -----------------------------------------------------

    def is_zero(self):
        return not self.terms

    def degree(self):
        """Total degree; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def is_homogeneous(self):
        """Recomputed on every call, never cached or trusted."""
        degs = {sum(e) for e in self.terms}
        return len(degs) <= 1

    def coefficient(self, exp):
        return self.terms.get(tuple(exp), Fraction(0))

    def support(self):
        return set(self.terms)

    def leading_monomial(self, ordering):
        if not self.terms:
            raise ValueError("zero polynomial has no leading monomial")
        return max(self.terms, key=ordering.key)

    def leading_term(self, ordering):
        lm = self.leading_monomial(ordering)
        return lm, self.terms[lm]

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other):
        other = self._promote(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, Fraction(0)) + c
        return Polynomial(out, self.num_vars)

    def __sub__(self, other):
        return self + (-self._promote(other))

    def __neg__(self):
        return Polynomial({e: -c for e, c in self.terms.items()}, self.num_vars)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return Polynomial.zero(self.num_vars)
            return Polynomial(
                {e: c * other for e, c in self.terms.items()}, self.num_vars
            )
        other = self._promote(other)
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, Fraction(0)) + c1 * c2
        return Polynomial(out, self.num_vars)

    __rmul__ = __mul__
    __radd__ = __add__

    def __rsub__(self, other):
        return self._promote(other) - self

    def __pow__(self, k):
        if k < 0:
            raise InputError("negative power")
        out = Polynomial.constant(1, self.num_vars)
        base = self
        while k:
            if k & 1:
                out = out * base
            k >>= 1
            if k:
                base = base * base
        return out

    def _promote(self, other):
        if isinstance(other, Polynomial):
            if other.num_vars != self.num_vars:
                raise InputError("mixing polynomials with different num_vars")
            return other
        if isinstance(other, (int, Fraction)):
            return Polynomial.constant(other, self.num_vars)
        return NotImplemented

    def __eq__(self, other):
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.num_vars == other.num_vars and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.num_vars, frozenset(self.terms.items())))
        return self._hash

    # -- calculus / substitution ------------------------------------------

    def evaluate(self, point):
        """Exact evaluation at a vector of rationals (or ints)."""
        if len(point) != self.num_vars:
            raise InputError(
                f"point has {len(point)} coordinates, expected {self.num_vars}"
            )
        total = Fraction(0)
        for e, c in self.terms.items():
            v = c
            for x, k in zip(point, e):
                if k:
                    v *= Fraction(x) ** k
            total += v
        return total

    def partial_derivative(self, alpha):
        """Iterated formal derivative d^alpha; may return zero."""
        if len(alpha) != self.num_vars:
            raise InputError("multi-index length mismatch")
        out = {}
        for e, c in self.terms.items():
            coeff = c
            new = list(e)
            ok = True
            for i, a in enumerate(alpha):
                if e[i] < a:
                    ok = False
                    break
                for j in range(a):
                    coeff *= e[i] - j
                new[i] = e[i] - a
            if ok and coeff != 0:
                key = tuple(new)
                out[key] = out.get(key, Fraction(0)) + coeff
        return Polynomial(out, self.num_vars)

    def substitute(self, values):
        """Compose: substitute a Polynomial (or scalar) for each variable."""
        if len(values) != self.num_vars:
            raise InputError("substitution length mismatch")
        nv = None
        for v in values:
            if isinstance(v, Polynomial):
                nv = v.num_vars
                break
        if nv is None:
            return self.evaluate(values)
        vals = [
            v if isinstance(v, Polynomial) else Polynomial.constant(v, nv)
            for v in values
        ]
        total = Polynomial.zero(nv)
        for e, c in self.terms.items():
            term = Polynomial.constant(c, nv)
            for v, k in zip(vals, e):
                if k:
                    term = term * (v**k)
            total = total + term
        return total

    def homogenize(self, position=0):
        """Insert a homogenizing variable at `position`."""
        if not self.terms:
            raise ValueError("cannot homogenize the zero polynomial")
        d = self.degree()
        out = {}
        for e, c in self.terms.items():
            pad = d - sum(e)
            new = e[:position] + (pad,) + e[position:]
            out[new] = c
        return Polynomial(out, self.num_vars + 1)

    def dehomogenize(self, position=0):
        """Substitute 1 at `position`, dropping that variable."""
        if position < 0 or position >= self.num_vars:
            raise InputError("variable position out of range")
        out = {}
        for e, c in self.terms.items():
            new = e[:position] + e[position + 1 :]
            out[new] = out.get(new, Fraction(0)) + c
        return Polynomial(out, self.num_vars - 1)

    def monic(self, ordering):
        _, lc = self.leading_term(ordering)
        return self * (1 / lc)

    def primitive_integer(self, ordering=None):
        """Scale to coprime integer coefficients; optionally sign-fix so the
        leading coefficient under `ordering` is positive."""
        if not self.terms:
            return self
        denom_lcm = 1
        for c in self.terms.values():
            denom_lcm = denom_lcm * c.denominator // gcd(denom_lcm, c.denominator)
        ints = {e: c * denom_lcm for e, c in self.terms.items()}
        g = 0
        for c in ints.values():
            g = gcd(g, int(c))
        scaled = {e: Fraction(int(c) // g) for e, c in ints.items()}
        p = Polynomial(scaled, self.num_vars)
        if ordering is not None:
            _, lc = p.leading_term(ordering)
            if lc < 0:
                p = -p
        return p

    def integer_coefficients(self):
        """True if every coefficient is an integer."""
        return all(c.denominator == 1 for c in self.terms.values())

    def __repr__(self):
        return f"Polynomial({format_polynomial(self, Ordering.GRLEX_LEFT)!r})"


# -- text format -----------------------------------------------------------

_TOKEN = re.compile(r"\d+(?:/\d+)?|[A-Za-z_]\w*|[-+*^()]|\S")


class _Tokenizer:
    def __init__(self, text):
        self.tokens = []
        for lineno, line in enumerate(text.splitlines() or [""], start=1):
            body = line.split("#", 1)[0]
            for m in _TOKEN.finditer(body):
                self.tokens.append((m.group(0), lineno, m.start() + 1))
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos][0] if self.pos < len(self.tokens) else None

    def next(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def where(self):
        if self.pos < len(self.tokens):
            _, line, col = self.tokens[self.pos]
            return line, col
        if self.tokens:
            _, line, col = self.tokens[-1]
            return line, col + 1
        return 1, 1

    def error(self, message):
        line, col = self.where()
        raise ParseError(message, line, col)


def parse_polynomial(text, num_vars):
    """Parse the text grammar: vars x0..x{num_vars-1}, integer or rational
    literals p/q, operators + - * ^, parentheses; implicit multiplication is
    a syntax error."""
    tz = _Tokenizer(text)
    if tz.peek() is None:
        tz.error("empty polynomial")
    p = _parse_expr(tz, num_vars)
    if tz.peek() is not None:
        tz.error(f"unexpected token {tz.peek()!r}")
    return p


def _parse_expr(tz, num_vars):
    sign = 1
    if tz.peek() in ("+", "-"):
        tok, _, _ = tz.next()
        sign = -1 if tok == "-" else 1
    total = _parse_term(tz, num_vars) * sign
    while tz.peek() in ("+", "-"):
        tok, _, _ = tz.next()
        term = _parse_term(tz, num_vars)
        total = total + term if tok == "+" else total - term
    return total


def _parse_term(tz, num_vars):
    p = _parse_power(tz, num_vars)
    while tz.peek() == "*":
        tz.next()
        p = p * _parse_power(tz, num_vars)
    return p


def _parse_power(tz, num_vars):
    base = _parse_atom(tz, num_vars)
    if tz.peek() == "^":
        tz.next()
        tok = tz.peek()
        if tok == "-":
            tz.error("negative exponent")
        if tok is None or not tok.isdigit():
            tz.error("expected a nonnegative integer exponent")
        tz.next()
        base = base ** int(tok)
    return base


def _parse_atom(tz, num_vars):
    tok = tz.peek()
    if tok is None:
        tz.error("unexpected end of input")
    if tok == "(":
        tz.next()
        p = _parse_expr(tz, num_vars)
        if tz.peek() != ")":
            tz.error("expected ')'")
        tz.next()
        return p
    if tok == "-":
        tz.next()
        return -_parse_power(tz, num_vars)
    if tok[0].isdigit():
        tz.next()
        if "/" in tok:
            num, den = tok.split("/")
            if int(den) == 0:
                tz.error("zero denominator")
            return Polynomial.constant(Fraction(int(num), int(den)), num_vars)
        return Polynomial.constant(int(tok), num_vars)
    if re.fullmatch(r"x\d+", tok):
        idx = int(tok[1:])
        if idx >= num_vars:
            tz.error(f"unknown variable {tok!r} (have x0..x{num_vars - 1})")
        tz.next()
        return Polynomial.variable(idx, num_vars)
    tz.error(f"unexpected token {tok!r}")


def format_polynomial(poly, ordering=Ordering.GRLEX_LEFT):
    """Render with terms in descending order under `ordering`; round-trip
    stable through parse_polynomial."""
    if poly.is_zero():
        return "0"
    exps = sorted(poly.terms, key=ordering.key, reverse=True)
    parts = []
    for i, e in enumerate(exps):
        c = poly.terms[e]
        neg = c < 0
        c = abs(c)
        factors = []
        for j, k in enumerate(e):
            if k == 1:
                factors.append(f"x{j}")
            elif k > 1:
                factors.append(f"x{j}^{k}")
        if not factors or c != 1:
            factors.insert(0, str(c))
        body = "*".join(factors)
        if i == 0:
            parts.append(("-" if neg else "") + body)
        else:
            parts.append(("- " if neg else "+ ") + body)
    return " ".join(parts)
