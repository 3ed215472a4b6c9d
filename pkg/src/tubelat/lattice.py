"""Exact arithmetic on the Grothendieck lattice K0 = Z^n.

The bilinear form <x,y> = x^T E y comes from ``EulerData``; its radical is
spanned by a canonical pair of vectors h0, hinf normalised by their last two
coordinates ((1,0) for h0, (1,1) for hinf).  The slope of a vector is the
ratio -<h0,x>/<hinf,x>, an element of Q union {infinity}, and mu(x) = sum of
coordinates is the total-dimension map (the unique linear map restricting to
dim(M) on dimension vectors, coordinates counting composition factors).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from . import linalg
from .algebra import AlgebraSpec, EulerData, derive_path_basis, euler_data
from .errors import (
    ConsistencyError,
    PreconditionError,
    SpecFormatError,
    UndefinedSlopeError,
    UnsupportedFormError,
)

DimVector = tuple[int, ...]


def vec_add(x: DimVector, y: DimVector) -> DimVector:
    return tuple(a + b for a, b in zip(x, y))


def vec_sub(x: DimVector, y: DimVector) -> DimVector:
    return tuple(a - b for a, b in zip(x, y))


def vec_scale(c: int, x: DimVector) -> DimVector:
    return tuple(c * a for a in x)


def unit_vector(n: int, i: int) -> DimVector:
    return tuple(1 if j == i else 0 for j in range(n))


def mu(x) -> int:
    """Total dimension: the coordinate sum."""
    return sum(x)


@dataclass(frozen=True)
class Slope:
    """A reduced rational b/a or the symbol infinity (stored as 1/0)."""

    numerator: int
    denominator: int

    @staticmethod
    def from_ratio(num: int, den: int) -> "Slope":
        if num == 0 and den == 0:
            raise UndefinedSlopeError("0/0 is not a slope")
        if den == 0:
            # projectively there is a single infinity; normal form is 1/0
            return Slope(1, 0)
        g = gcd(abs(num), abs(den))
        if den < 0:
            num, den = -num, -den
        return Slope(num // g, den // g)

    @staticmethod
    def from_fraction(q: Fraction) -> "Slope":
        return Slope(q.numerator, q.denominator)

    @staticmethod
    def infinity() -> "Slope":
        return Slope(1, 0)

    @property
    def is_infinite(self) -> bool:
        return self.denominator == 0

    def as_fraction(self) -> Fraction:
        if self.is_infinite:
            raise UndefinedSlopeError("infinite slope has no rational value")
        return Fraction(self.numerator, self.denominator)

    def __lt__(self, other: "Slope") -> bool:
        if self.is_infinite:
            return False
        if other.is_infinite:
            return True
        return self.numerator * other.denominator < other.numerator * self.denominator

    def __le__(self, other: "Slope") -> bool:
        return self == other or self < other

    def __gt__(self, other: "Slope") -> bool:
        return other < self

    def __ge__(self, other: "Slope") -> bool:
        return other <= self

    def __str__(self) -> str:
        if self.is_infinite:
            return "inf"
        if self.denominator == 1:
            return str(self.numerator)
        return f"{self.numerator}/{self.denominator}"

    @staticmethod
    def parse(text: str) -> "Slope":
        text = text.strip()
        if text in ("inf", "infinity", "oo"):
            return Slope.infinity()
        q = Fraction(text)
        return Slope.from_fraction(q)


@dataclass(frozen=True)
class RadicalBasis:
    """The canonical pair of radical vectors and their pairing <h0, hinf>."""

    h0: DimVector
    hinf: DimVector
    pairing: int


def radical_basis(euler: EulerData) -> RadicalBasis:
    """Derive h0, hinf from the kernel of the symmetrised form.

    The kernel must have rank 2 and project unimodularly onto the last two
    coordinates, where h0 restricts to (1, 0) and hinf to (1, 1); anything
    else is rejected as outside the supported family of forms.
    """
    n = len(euler.euler)
    sym = [
        [Fraction(euler.euler[i][j] + euler.euler[j][i]) for j in range(n)]
        for i in range(n)
    ]
    kernel = linalg.nullspace(sym, n)
    if len(kernel) != 2:
        raise UnsupportedFormError(
            f"radical has rank {len(kernel)}, expected 2"
        )

    def solve_tail(tail: tuple[int, int]) -> DimVector:
        system = [
            [kernel[0][n - 2], kernel[1][n - 2]],
            [kernel[0][n - 1], kernel[1][n - 1]],
        ]
        coeffs = linalg.solve(system, [Fraction(tail[0]), Fraction(tail[1])], 2)
        if coeffs is None:
            raise UnsupportedFormError(
                "radical does not project onto the last two coordinates"
            )
        vec = [
            coeffs[0] * kernel[0][i] + coeffs[1] * kernel[1][i] for i in range(n)
        ]
        out = []
        for x in vec:
            if x.denominator != 1:
                raise UnsupportedFormError("normalised radical vector is not integral")
            out.append(x.numerator)
        return tuple(out)

    h0 = solve_tail((1, 0))
    hinf = solve_tail((1, 1))
    pairing = euler.bilinear(h0, hinf)
    if pairing <= 0:
        raise UnsupportedFormError(f"pairing <h0, hinf> = {pairing} is not positive")
    return RadicalBasis(h0=h0, hinf=hinf, pairing=pairing)


@dataclass(frozen=True)
class K0Lattice:
    """Bundles the Euler form with the radical basis; all methods are pure."""

    euler: EulerData
    h0: DimVector
    hinf: DimVector
    pairing: int

    @staticmethod
    def for_spec(spec: AlgebraSpec) -> "K0Lattice":
        ed = euler_data(spec, derive_path_basis(spec))
        rad = radical_basis(ed)
        return K0Lattice(euler=ed, h0=rad.h0, hinf=rad.hinf, pairing=rad.pairing)

    @property
    def rank(self) -> int:
        return len(self.euler.euler)

    def check_length(self, x) -> None:
        if len(x) != self.rank:
            raise SpecFormatError(f"vector must have length {self.rank}")

    def bilinear(self, x, y) -> int:
        return self.euler.bilinear(x, y)

    def quadratic(self, x) -> int:
        return self.euler.quadratic(x)

    def mu(self, x) -> int:
        self.check_length(x)
        return mu(x)

    @property
    def mu_h0(self) -> int:
        return mu(self.h0)

    @property
    def mu_hinf(self) -> int:
        return mu(self.hinf)

    def slope(self, x) -> Slope:
        """-<h0,x>/<hinf,x> reduced; zero denominator means infinite slope."""
        self.check_length(x)
        num = -self.bilinear(self.h0, x)
        den = self.bilinear(self.hinf, x)
        if num == 0 and den == 0:
            raise UndefinedSlopeError(
                f"both radical pairings vanish on {tuple(x)}"
            )
        return Slope.from_ratio(num, den)

    def radical_combination(self, a: int, b: int) -> DimVector:
        return vec_add(vec_scale(a, self.h0), vec_scale(b, self.hinf))

    def mu_of_pair(self, a: int, b: int) -> int:
        return a * self.mu_h0 + b * self.mu_hinf

    def radical_decompose(self, x) -> tuple[int, int]:
        """Coefficients (a, b) with x = a*h0 + b*hinf, read off the last two
        coordinates; requires x to be a radical vector."""
        self.check_length(x)
        if self.quadratic(x) != 0:
            raise PreconditionError(f"{tuple(x)} is not radical (chi != 0)")
        a = x[-2] - x[-1]
        b = x[-1]
        if self.radical_combination(a, b) != tuple(x):
            raise ConsistencyError(
                f"radical vector {tuple(x)} is outside the integer span of h0, hinf"
            )
        return a, b
