"""Exact quadratic irrationals ``(p + q*sqrt(d))/s``.

Every slope search in this package compares rationals against an irrational
cut ``r``.  Restricting ``r`` to quadratic irrationals makes each comparison
a finite integer computation (cross-multiply, then compare squares), so the
searches never touch approximate arithmetic.  Rational *enclosures* of ``r``
are still available, via integer square roots, for picking nearby rational
window endpoints; they are used only to choose parameters, never to decide
an ordering.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt

from .errors import ParameterDomainError, SpecFormatError


def squarefree_part(d: int) -> tuple[int, int]:
    """Return (m, d0) with d = m^2 * d0 and d0 squarefree."""
    if d <= 0:
        raise ParameterDomainError(f"radicand must be positive, got {d}")
    m, d0 = 1, d
    f = 2
    while f * f <= d0:
        while d0 % (f * f) == 0:
            d0 //= f * f
            m *= f
        f += 1
    return m, d0


@dataclass(frozen=True)
class QuadIrrational:
    """The real number (p + q*sqrt(d))/s with q != 0, s > 0, d > 1 squarefree.

    The constraints force irrationality, so comparisons with rationals are
    always strict and decidable by integer arithmetic alone.
    """

    p: int
    q: int
    d: int
    s: int

    def __post_init__(self):
        p, q, d, s = self.p, self.q, self.d, self.s
        if s == 0:
            raise ParameterDomainError("denominator s must be nonzero")
        if q == 0:
            raise ParameterDomainError("q = 0 would make the value rational")
        m, d0 = squarefree_part(d)
        q, d = q * m, d0
        if d == 1:
            raise ParameterDomainError("radicand reduces to a square; value is rational")
        if s < 0:
            p, q, s = -p, -q, -s
        g = gcd(gcd(abs(p), abs(q)), s)
        object.__setattr__(self, "p", p // g)
        object.__setattr__(self, "q", q // g)
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "s", s // g)

    # -- ordering against exact rationals (integer arithmetic only) --------

    def cmp_fraction(self, t: Fraction | int) -> int:
        """Sign of (self - t); never 0 since self is irrational."""
        t = Fraction(t)
        # (p + q sqrt(d))/s - u/v  has the sign of  A + B sqrt(d)  with:
        a = self.p * t.denominator - t.numerator * self.s
        b = self.q * t.denominator
        if b > 0:
            if a >= 0:
                return 1
            return 1 if b * b * self.d > a * a else -1
        if a <= 0:
            return -1
        return 1 if a * a > b * b * self.d else -1

    def __gt__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.cmp_fraction(other) > 0
        return NotImplemented

    def __lt__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.cmp_fraction(other) < 0
        return NotImplemented

    def __ge__(self, other):
        return self.__gt__(other)

    def __le__(self, other):
        return self.__lt__(other)

    # -- rational shifts ----------------------------------------------------

    def add_fraction(self, t: Fraction | int) -> "QuadIrrational":
        t = Fraction(t)
        return QuadIrrational(
            self.p * t.denominator + t.numerator * self.s,
            self.q * t.denominator,
            self.d,
            self.s * t.denominator,
        )

    def sub_fraction(self, t: Fraction | int) -> "QuadIrrational":
        return self.add_fraction(-Fraction(t))

    # -- rational enclosures ------------------------------------------------

    def bracket(self, scale: int = 1 << 20) -> tuple[Fraction, Fraction]:
        """Rational lo < self < hi with hi - lo <= |q| / (scale * s)."""
        root_lo = Fraction(isqrt(self.d * scale * scale), scale)
        root_hi = root_lo + Fraction(1, scale)
        if self.q > 0:
            lo = (self.p + self.q * root_lo) / self.s
            hi = (self.p + self.q * root_hi) / self.s
        else:
            lo = (self.p + self.q * root_hi) / self.s
            hi = (self.p + self.q * root_lo) / self.s
        return lo, hi

    def rational_below(self, gap: Fraction) -> Fraction:
        """A rational q with self - gap < q < self."""
        if gap <= 0:
            raise ParameterDomainError("gap must be positive")
        scale = 2
        while True:
            lo, hi = self.bracket(scale)
            if hi - lo < gap:
                return lo
            scale *= 4

    def rational_above(self, gap: Fraction) -> Fraction:
        """A rational q with self < q < self + gap."""
        if gap <= 0:
            raise ParameterDomainError("gap must be positive")
        scale = 2
        while True:
            lo, hi = self.bracket(scale)
            if hi - lo < gap:
                return hi
            scale *= 4

    def distance_lower_bound(self, t: Fraction) -> Fraction:
        """A positive rational below |self - t|, certified, at least half of it."""
        t = Fraction(t)
        scale = 2
        while True:
            lo, hi = self.bracket(scale)
            if t < lo and (lo - t) >= (hi - lo):
                return lo - t
            if t > hi and (t - hi) >= (hi - lo):
                return t - hi
            scale *= 4

    def __str__(self) -> str:
        return f"({self.p}+{self.q}*sqrt({self.d}))/{self.s}"


_SQRT_COLON = re.compile(r"^sqrt:(\d+)$")
_SQRT_CALL = re.compile(r"^sqrt\((\d+)\)$")
_SQRT_OVER = re.compile(r"^sqrt\((\d+)\)/(\d+)$")
_GENERAL = re.compile(
    r"^\(\s*(-?\d+)\s*([+-])\s*(?:(\d+)\s*\*\s*)?sqrt\((\d+)\)\s*\)\s*(?:/\s*(\d+))?$"
)


def parse_quad_irrational(text: str) -> QuadIrrational:
    """Parse the wire forms ``sqrt:d``, ``sqrt(d)``, ``sqrt(d)/s`` and
    ``(p+q*sqrt(d))/s`` (the ``q*`` and ``/s`` parts optional)."""
    text = text.strip().replace(" ", "")
    m = _SQRT_COLON.match(text) or _SQRT_CALL.match(text)
    if m:
        return QuadIrrational(0, 1, int(m.group(1)), 1)
    m = _SQRT_OVER.match(text)
    if m:
        return QuadIrrational(0, 1, int(m.group(1)), int(m.group(2)))
    m = _GENERAL.match(text)
    if m:
        p = int(m.group(1))
        sign = -1 if m.group(2) == "-" else 1
        q = sign * int(m.group(3) or "1")
        d = int(m.group(4))
        s = int(m.group(5) or "1")
        return QuadIrrational(p, q, d, s)
    raise SpecFormatError(f"cannot parse quadratic irrational {text!r}")
