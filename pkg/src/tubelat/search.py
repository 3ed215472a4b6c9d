"""Certified slope searches in the radical cone.

A nonnegative combination a*h0 + b*hinf has slope b/a and total dimension
mu = a*mu(h0) + b*mu(hinf).  Perturbing by an exceptional vector y shifts the
slope to (b + gamma1)/(a + gamma2) with rational offsets computed from the
pairings of y against h0 and hinf.  Everything here reduces to finitely many
integer comparisons:

* the strip enumerators list all pairs caught between a rational slope bound
  and a perturbed one, with a derived completeness bound on a;
* ``delta_for`` shrinks a slope window until perturbed membership forces
  unperturbed membership, by excluding the finitely many exceptions;
* ``gap_vector`` finds a pair whose slope approaches the irrational cut r
  from below so well that any strictly better approximation from below costs
  more than mu + k in total dimension, and emits the full competitor list as
  a certificate;
* ``tube_parameters`` turns a requested dimension gap d into a choice of k,
  a certified gap vector and the resulting dimension bounds.

The pair (a, b) always ranges over a >= 1, b >= 0: the slope b/a must be
defined, so the a = 0 edge of the natural numbers is excluded throughout.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import ceil, floor, gcd

from .errors import BudgetExhaustedError, PreconditionError, SpecFormatError
from .exceptional import ExceptionalSet
from .lattice import DimVector, K0Lattice, Slope, mu
from .quadirr import QuadIrrational, parse_quad_irrational
from .serialize import frac_to_str, parse_frac


@dataclass(frozen=True)
class PerturbedSlopeParams:
    """Offsets making slope(a*h0 + b*hinf + y) = (b + gamma1)/(a + gamma2)."""

    gamma1: Fraction
    gamma2: Fraction
    y: DimVector


def perturbed_params(lattice: K0Lattice, y) -> PerturbedSlopeParams:
    y = tuple(y)
    return PerturbedSlopeParams(
        gamma1=Fraction(lattice.bilinear(lattice.h0, y), lattice.pairing),
        gamma2=Fraction(-lattice.bilinear(lattice.hinf, y), lattice.pairing),
        y=y,
    )


def perturbed_slope(a: int, b: int, params: PerturbedSlopeParams) -> Fraction | None:
    """The perturbed slope as a rational, or None when its denominator is 0."""
    den = a + params.gamma2
    if den == 0:
        return None
    return (b + params.gamma1) / den


# ---------------------------------------------------------------------------
# Finite strip enumerators
# ---------------------------------------------------------------------------


def _check_strip_args(r1: Fraction, r2: Fraction) -> tuple[Fraction, Fraction]:
    r1, r2 = Fraction(r1), Fraction(r2)
    if not 0 < r1 < r2:
        raise PreconditionError(f"need 0 < r1 < r2, got r1={r1}, r2={r2}")
    return r1, r2


def _a_ceiling(main_bound: Fraction, g2: Fraction) -> int:
    """Largest a that any branch of the case analysis can reach."""
    top = 0
    if main_bound >= 1:
        top = floor(main_bound)
    if g2 < 0:
        top = max(top, ceil(-g2))
    return top


def strip_pairs_below(r1, r2, gamma1, gamma2) -> list[tuple[int, int]]:
    """All (a, b), a >= 1, b >= 0 with b/a <= r1 and perturbed slope >= r2.

    Completeness: when a + gamma2 > 0 the two constraints squeeze
    a <= (gamma1 - r2*gamma2)/(r2 - r1); the remaining branches force
    a <= -gamma2.  Every a up to the larger bound is scanned exactly.
    """
    r1, r2 = _check_strip_args(r1, r2)
    g1, g2 = Fraction(gamma1), Fraction(gamma2)
    a_max = _a_ceiling((g1 - r2 * g2) / (r2 - r1), g2)
    out: list[tuple[int, int]] = []
    for a in range(1, a_max + 1):
        hi = floor(r1 * a)
        if hi < 0:
            continue
        den = a + g2
        if den > 0:
            lo = max(0, ceil(r2 * den - g1))
        elif den == 0:
            lo = max(0, floor(-g1) + 1)  # ratio is +infinity iff b + g1 > 0
        else:
            # ratio >= r2 > 0 with negative denominator forces b + g1 <= r2*den
            hi = min(hi, floor(r2 * den - g1))
            lo = 0
        out.extend((a, b) for b in range(lo, hi + 1))
    return out


def strip_pairs_above(r1, r2, gamma1, gamma2) -> list[tuple[int, int]]:
    """All (a, b), a >= 1, b >= 0 with 0 < perturbed slope <= r1 and b/a >= r2."""
    r1, r2 = _check_strip_args(r1, r2)
    g1, g2 = Fraction(gamma1), Fraction(gamma2)
    a_max = _a_ceiling((r1 * g2 - g1) / (r2 - r1), g2)
    out: list[tuple[int, int]] = []
    for a in range(1, a_max + 1):
        lo = max(0, ceil(r2 * a))
        den = a + g2
        if den > 0:
            lo = max(lo, floor(-g1) + 1)  # positivity: b + g1 > 0
            hi = floor(r1 * den - g1)
        elif den == 0:
            continue  # ratio is infinite or undefined, never in (0, r1]
        else:
            lo = max(lo, ceil(r1 * den - g1))
            hi = ceil(-g1) - 1  # positivity: b + g1 < 0
        out.extend((a, b) for b in range(lo, hi + 1))
    return out


# ---------------------------------------------------------------------------
# Window shrinking (delta selection)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ExceptionRecord:
    """A pair whose perturbed slope sits near r while its raw slope escapes
    the epsilon window; delta is chosen below every such perturbed slope."""

    a: int
    b: int
    y: DimVector
    perturbed: Fraction


@dataclass(frozen=True)
class DeltaResult:
    delta: Fraction
    eps_prime: Fraction
    exceptions: tuple[ExceptionRecord, ...]


def _check_window(r: QuadIrrational, eps: Fraction) -> Fraction:
    eps = Fraction(eps)
    if eps <= 0 or not r > eps:
        raise PreconditionError(f"need 0 < eps < r, got eps={eps}")
    return eps


def delta_for(
    lattice: K0Lattice,
    exceptional: ExceptionalSet,
    r: QuadIrrational,
    eps,
) -> DeltaResult:
    """A delta in (0, eps) such that perturbed slope within delta of r forces
    the raw slope b/a within eps of r, for every a >= 1, b >= 0 and every
    exceptional y.

    Strategy: fix eps' = eps/2, bracket r by rationals, enumerate the
    finitely many candidate exceptions with the two strip enumerators, and
    take delta below every exceptional perturbed slope's distance to r
    (and at most eps').
    """
    eps = _check_window(r, eps)
    eps_prime = eps / 2
    g = eps / 8
    above = r.rational_above(g)  # in (r, r + g)
    below = r.rational_below(g)  # in (r - g, r)
    u1 = above + eps_prime  # in (r + eps', r + eps' + g)
    u2 = above + eps_prime + 2 * g  # in (r + eps' + 2g, r + eps' + 3g)
    t1 = below - (eps - g)  # in (r - eps, r - eps + g)
    t2 = below - eps_prime - 2 * g  # in (r - eps' - 3g, r - eps' - 2g)

    exceptions: list[ExceptionRecord] = []
    seen: set[tuple[int, int, DimVector]] = set()
    for y in exceptional:
        params = perturbed_params(lattice, y)
        candidates = strip_pairs_above(u1, u2, params.gamma1, params.gamma2)
        candidates += strip_pairs_below(t1, t2, params.gamma1, params.gamma2)
        for a, b in candidates:
            rho = perturbed_slope(a, b, params)
            if rho is None:
                continue
            if not (r > rho - eps_prime and r < rho + eps_prime):
                continue  # perturbed slope outside (r - eps', r + eps')
            s = Fraction(b, a)
            if r > s - eps and r < s + eps:
                continue  # raw slope already inside the eps window
            key = (a, b, params.y)
            if key not in seen:
                seen.add(key)
                exceptions.append(ExceptionRecord(a=a, b=b, y=params.y, perturbed=rho))

    exceptions.sort(key=lambda e: (e.a, e.b, e.y))
    delta = eps_prime
    for rec in exceptions:
        delta = min(delta, r.distance_lower_bound(rec.perturbed) / 2)
    return DeltaResult(delta=delta, eps_prime=eps_prime, exceptions=tuple(exceptions))


# ---------------------------------------------------------------------------
# Gap vectors and their certificates
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Witness:
    a: int
    b: int
    mu: int
    slope: Slope


@dataclass(frozen=True)
class GapCertificate:
    """A certified best-from-below approximation in the radical cone.

    ``witnesses`` is the full list of pairs with total dimension at most
    ``budget``; validity means none of them has slope strictly between the
    returned slope and r.
    """

    r: QuadIrrational
    epsilon: Fraction
    k: int
    a: int
    b: int
    mu: int
    budget: int
    mu_weights: tuple[int, int]
    witnesses: tuple[Witness, ...]

    @property
    def slope(self) -> Slope:
        return Slope.from_ratio(self.b, self.a)


def _budget_pairs(w0: int, w1: int, budget: int) -> list[tuple[int, int]]:
    """All (a, b) in N^2 minus the origin with w0*a + w1*b <= budget."""
    out = []
    for a in range(0, budget // w0 + 1):
        rest = budget - w0 * a
        for b in range(0, rest // w1 + 1):
            if a or b:
                out.append((a, b))
    return out


def gap_vector(
    lattice: K0Lattice,
    r: QuadIrrational,
    eps,
    k: int,
    max_mu: int = 200_000,
) -> GapCertificate:
    """Find a*h0 + b*hinf with slope in (r - eps, r) such that every radical
    pair with slope strictly between it and r has total dimension greater
    than mu + k.

    Search order is increasing total dimension, so the certified minimum is
    found without unbounded scans; the emitted witness list makes the search
    strategy irrelevant to correctness.
    """
    eps = _check_window(r, eps)
    if k < 0:
        raise PreconditionError("k must be nonnegative")
    w0, w1 = lattice.mu_h0, lattice.mu_hinf
    for m in range(w0 + w1, max_mu + 1):
        for a in range(1, (m - w1) // w0 + 1):
            rest = m - w0 * a
            if rest % w1:
                continue
            b = rest // w1
            if b < 1:
                continue
            s = Fraction(b, a)
            if not (r < s + eps and r > s):
                continue  # slope outside (r - eps, r)
            if _first_competitor(a, b, r, w0, w1, m + k) is None:
                witnesses = tuple(
                    Witness(a=a2, b=b2, mu=w0 * a2 + w1 * b2, slope=Slope.from_ratio(b2, a2))
                    for a2, b2 in _budget_pairs(w0, w1, m + k)
                )
                return GapCertificate(
                    r=r,
                    epsilon=eps,
                    k=k,
                    a=a,
                    b=b,
                    mu=m,
                    budget=m + k,
                    mu_weights=(w0, w1),
                    witnesses=witnesses,
                )
    raise BudgetExhaustedError(
        f"no certified gap vector with total dimension <= {max_mu}"
    )


def _first_competitor(
    a: int, b: int, r: QuadIrrational, w0: int, w1: int, budget: int
) -> tuple[int, int] | None:
    """A pair within the dimension budget whose slope lies strictly in (b/a, r)."""
    for a2 in range(1, budget // w0 + 1):
        rest = budget - w0 * a2
        for b2 in range(1, rest // w1 + 1):
            if b2 * a > b * a2 and r > Fraction(b2, a2):
                return a2, b2
    return None


def validate_gap_certificate(lattice: K0Lattice, cert: GapCertificate) -> list[str]:
    """Re-derive everything the certificate claims; returns failure messages."""
    failures: list[str] = []
    w0, w1 = lattice.mu_h0, lattice.mu_hinf
    if cert.mu_weights != (w0, w1):
        failures.append(
            f"mu weights {cert.mu_weights} do not match the algebra ({w0}, {w1})"
        )
    if cert.a < 1 or cert.b < 1:
        failures.append("returned pair must have positive coefficients")
    else:
        s = Fraction(cert.b, cert.a)
        if not (cert.r > s and cert.r < s + cert.epsilon):
            failures.append(f"slope {s} is not in (r - eps, r)")
    if cert.mu != w0 * cert.a + w1 * cert.b:
        failures.append("stored mu does not match the pair")
    if cert.budget != cert.mu + cert.k:
        failures.append("budget is not mu + k")

    expected = _budget_pairs(w0, w1, cert.budget)
    got = [(w.a, w.b) for w in cert.witnesses]
    if sorted(got) != expected:
        failures.append("witness list is not the full budget scan")
    for w in cert.witnesses:
        if w.mu != w0 * w.a + w1 * w.b:
            failures.append(f"witness ({w.a},{w.b}) has wrong mu {w.mu}")
            continue
        true_slope = Slope.from_ratio(w.b, w.a) if (w.a or w.b) else None
        if true_slope is None or w.slope != true_slope:
            failures.append(f"witness ({w.a},{w.b}) has wrong slope {w.slope}")
            continue
        if not w.slope.is_infinite:
            s2 = w.slope.as_fraction()
            if cert.a >= 1 and s2 * cert.a > cert.b and cert.r > s2:
                failures.append(
                    f"witness ({w.a},{w.b}) has slope {w.slope} strictly inside "
                    "the certified gap"
                )
    return failures


# ---------------------------------------------------------------------------
# Dimension estimates for quasisimples and tube-parameter selection
# ---------------------------------------------------------------------------


def max_hinf_pairing(lattice: K0Lattice, exceptional: ExceptionalSet) -> int:
    return max(abs(lattice.bilinear(lattice.hinf, y)) for y in exceptional)


def p_bound(lattice: K0Lattice, exceptional: ExceptionalSet) -> int:
    """The uniform bound p: for every exceptional y,
    |(mu(<hinf,y>*h0 - <h0,y>*hinf) + mu(y)) / <h0,hinf>| <= p,
    rounded up to an integer.  Independent of any slope queried later."""
    best = Fraction(0)
    for y in exceptional:
        c_h0 = lattice.bilinear(lattice.hinf, y)
        c_hinf = lattice.bilinear(lattice.h0, y)
        combo = tuple(
            c_h0 * u - c_hinf * v for u, v in zip(lattice.h0, lattice.hinf)
        )
        val = abs(Fraction(mu(combo) + mu(y), lattice.pairing))
        best = max(best, val)
    return ceil(best)


@dataclass(frozen=True)
class QuasisimpleBounds:
    """dim(E) >= lower for quasisimples at slope b/a; when the tube rank
    equals the pairing, dim(E) also lies within p of ``center``."""

    lower: Fraction
    center: Fraction | None
    p: int


def quasisimple_bounds(
    lattice: K0Lattice,
    exceptional: ExceptionalSet,
    a: int,
    b: int,
    n_rho: int,
) -> QuasisimpleBounds:
    if a < 1 or b < 1 or gcd(a, b) != 1:
        raise PreconditionError("need coprime positive integers a, b")
    if n_rho < 1:
        raise PreconditionError("tube rank must be positive")
    threshold = n_rho * max_hinf_pairing(lattice, exceptional)
    if b <= threshold:
        raise PreconditionError(
            f"hypothesis b > {threshold} fails for b = {b} (rank {n_rho})"
        )
    p = p_bound(lattice, exceptional)
    center = Fraction(lattice.mu_of_pair(a, b), lattice.pairing)
    return QuasisimpleBounds(
        lower=center - p,
        center=center if n_rho == lattice.pairing else None,
        p=p,
    )


@dataclass(frozen=True)
class TubeParams:
    """Numeric parameters for a rank-<h0,hinf> tube achieving dimension gap d."""

    a: int
    b: int
    rank: int
    k_used: int
    p: int
    d: int
    lower_bound: Fraction
    threshold: int
    r: QuadIrrational
    epsilon: Fraction
    certificate: GapCertificate

    @property
    def slope(self) -> Slope:
        return Slope.from_ratio(self.b, self.a)


def tube_parameters(
    lattice: K0Lattice,
    exceptional: ExceptionalSet,
    r: QuadIrrational,
    eps,
    d: int,
    max_rounds: int = 64,
) -> TubeParams:
    """Choose the smallest k with k/<h0,hinf> - 2p >= d, run the gap search,
    and shrink the window toward r until the returned numerator clears the
    quasisimple threshold (larger denominators force larger numerators)."""
    eps = _check_window(r, eps)
    if d < 1:
        raise PreconditionError("dimension gap d must be at least 1")
    p = p_bound(lattice, exceptional)
    k = lattice.pairing * (d + 2 * p)
    threshold = lattice.pairing * max_hinf_pairing(lattice, exceptional)

    eps_i = eps
    for _ in range(max_rounds):
        cert = gap_vector(lattice, r, eps_i, k)
        if cert.b > threshold:
            g = gcd(cert.a, cert.b)
            return TubeParams(
                a=cert.a // g,
                b=cert.b // g,
                rank=lattice.pairing,
                k_used=k,
                p=p,
                d=d,
                lower_bound=Fraction(lattice.mu_of_pair(cert.a, cert.b), lattice.pairing) - p,
                threshold=threshold,
                r=r,
                epsilon=eps,
                certificate=cert,
            )
        # shrink: any rational q in (b/a, r) yields a strictly tighter window
        s = Fraction(cert.b, cert.a)
        scale = 1 << 8
        while True:
            lo, _ = r.bracket(scale)
            if lo > s:
                break
            scale *= 4
        eps_i = lo - s
    raise BudgetExhaustedError(
        f"threshold b > {threshold} not reached within {max_rounds} rounds"
    )


def validate_tube_params(
    lattice: K0Lattice, exceptional: ExceptionalSet, tp: TubeParams
) -> list[str]:
    failures: list[str] = []
    p = p_bound(lattice, exceptional)
    if tp.p != p:
        failures.append(f"stored p = {tp.p}, recomputed {p}")
    if tp.rank != lattice.pairing:
        failures.append(f"rank {tp.rank} differs from pairing {lattice.pairing}")
    if Fraction(tp.k_used, lattice.pairing) - 2 * p < tp.d:
        failures.append("k_used does not achieve the requested gap")
    threshold = lattice.pairing * max_hinf_pairing(lattice, exceptional)
    if tp.b <= threshold:
        failures.append(f"b = {tp.b} does not clear the threshold {threshold}")
    if gcd(tp.a, tp.b) != 1:
        failures.append("slope coefficients are not coprime")
    s = Fraction(tp.b, tp.a)
    if not (tp.r > s and tp.r < s + tp.epsilon):
        failures.append(f"slope {s} is not in (r - eps, r)")
    expected_lower = Fraction(lattice.mu_of_pair(tp.a, tp.b), lattice.pairing) - p
    if tp.lower_bound != expected_lower:
        failures.append("lower bound arithmetic is wrong")
    failures.extend(validate_gap_certificate(lattice, tp.certificate))
    return failures


# ---------------------------------------------------------------------------
# Certificate wire format
# ---------------------------------------------------------------------------


def gap_certificate_to_json(cert: GapCertificate) -> dict:
    return {
        "kind": "gap-vector",
        "r": str(cert.r),
        "epsilon": frac_to_str(cert.epsilon),
        "k": cert.k,
        "a": cert.a,
        "b": cert.b,
        "slope": str(cert.slope),
        "mu": cert.mu,
        "budget": cert.budget,
        "mu_weights": list(cert.mu_weights),
        "witnesses": [
            {"a": w.a, "b": w.b, "mu": w.mu, "slope": str(w.slope)}
            for w in cert.witnesses
        ],
    }


def gap_certificate_from_json(data: dict) -> GapCertificate:
    try:
        if data.get("kind") != "gap-vector":
            raise SpecFormatError(f"not a gap-vector certificate: {data.get('kind')!r}")
        witnesses = tuple(
            Witness(
                a=int(w["a"]),
                b=int(w["b"]),
                mu=int(w["mu"]),
                slope=Slope.parse(w["slope"]),
            )
            for w in data["witnesses"]
        )
        return GapCertificate(
            r=parse_quad_irrational(data["r"]),
            epsilon=parse_frac(data["epsilon"]),
            k=int(data["k"]),
            a=int(data["a"]),
            b=int(data["b"]),
            mu=int(data["mu"]),
            budget=int(data["budget"]),
            mu_weights=(int(data["mu_weights"][0]), int(data["mu_weights"][1])),
            witnesses=witnesses,
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise SpecFormatError(f"malformed gap certificate: {exc}") from exc


def tube_params_to_json(tp: TubeParams) -> dict:
    return {
        "kind": "tube-params",
        "a": tp.a,
        "b": tp.b,
        "slope": str(tp.slope),
        "rank": tp.rank,
        "k_used": tp.k_used,
        "p": tp.p,
        "d": tp.d,
        "lower_bound": frac_to_str(tp.lower_bound),
        "threshold": tp.threshold,
        "r": str(tp.r),
        "epsilon": frac_to_str(tp.epsilon),
        "certificate": gap_certificate_to_json(tp.certificate),
    }


def tube_params_from_json(data: dict) -> TubeParams:
    try:
        if data.get("kind") != "tube-params":
            raise SpecFormatError(f"not a tube-params document: {data.get('kind')!r}")
        return TubeParams(
            a=int(data["a"]),
            b=int(data["b"]),
            rank=int(data["rank"]),
            k_used=int(data["k_used"]),
            p=int(data["p"]),
            d=int(data["d"]),
            lower_bound=parse_frac(data["lower_bound"]),
            threshold=int(data["threshold"]),
            r=parse_quad_irrational(data["r"]),
            epsilon=parse_frac(data["epsilon"]),
            certificate=gap_certificate_from_json(data["certificate"]),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise SpecFormatError(f"malformed tube-params document: {exc}") from exc
