import random
from fractions import Fraction
from math import ceil, floor, gcd

import pytest

from tubelat.errors import BudgetExhaustedError, PreconditionError
from tubelat.exceptional import ExceptionalSet
from tubelat.lattice import vec_add
from tubelat.quadirr import QuadIrrational, parse_quad_irrational
from tubelat.search import (
    delta_for,
    gap_certificate_from_json,
    gap_certificate_to_json,
    gap_vector,
    max_hinf_pairing,
    p_bound,
    perturbed_params,
    perturbed_slope,
    quasisimple_bounds,
    strip_pairs_above,
    strip_pairs_below,
    tube_parameters,
    tube_params_from_json,
    tube_params_to_json,
    validate_gap_certificate,
    validate_tube_params,
)

SQRT2 = QuadIrrational(0, 1, 2, 1)


# ---------------------------------------------------------------------------
# Strip enumerators
# ---------------------------------------------------------------------------


def test_strips_empty_without_offsets():
    assert strip_pairs_below(Fraction(13, 10), Fraction(7, 5), 0, 0) == []
    assert strip_pairs_above(Fraction(13, 10), Fraction(7, 5), 0, 0) == []


def test_strip_below_example():
    pairs = strip_pairs_below(Fraction(13, 10), Fraction(7, 5), 2, 0)
    # oracle: direct scan far beyond the derived completeness bound a <= 20
    oracle = [
        (a, b)
        for a in range(1, 201)
        for b in range(0, 13 * a // 10 + 1)
        if 10 * b <= 13 * a and 5 * (b + 2) >= 7 * a
    ]
    assert pairs == oracle
    assert len(pairs) == 22
    assert max(a for a, _ in pairs) == 20


def test_strip_above_example():
    pairs = strip_pairs_above(Fraction(7, 5), Fraction(3, 2), -2, 0)
    oracle = [
        (a, b)
        for a in range(1, 201)
        for b in range(0, 2 * a + 3)
        if 2 * b >= 3 * a and b > 2 and 5 * (b - 2) <= 7 * a
    ]
    assert pairs == oracle
    assert pairs and max(a for a, _ in pairs) <= 20


@pytest.mark.parametrize("g1,g2", [(2, 0), (Fraction(3, 2), -1), (-1, Fraction(1, 2)), (0, -2)])
def test_strip_enlarged_scan_stability(g1, g2):
    r1, r2 = Fraction(13, 10), Fraction(7, 5)
    below = set(strip_pairs_below(r1, r2, g1, g2))
    above = set(strip_pairs_above(r1, r2, g1, g2))
    seen_below, seen_above = set(), set()
    for a in range(1, 400):
        for b in range(0, ceil(r2 * a) + 8):
            den = a + Fraction(g2)
            num = b + Fraction(g1)
            if den > 0:
                ge_r2 = num >= r2 * den
                in_01 = 0 < num <= r1 * den
            elif den == 0:
                ge_r2 = num > 0
                in_01 = False
            else:
                ge_r2 = num <= r2 * den
                in_01 = num < 0 and num >= r1 * den
            if Fraction(b, a) <= r1 and ge_r2:
                assert (a, b) in below
                seen_below.add((a, b))
            if Fraction(b, a) >= r2 and in_01:
                assert (a, b) in above
                seen_above.add((a, b))
    # nothing emitted beyond what the direct predicate scan finds
    assert below == seen_below
    assert above == seen_above


def test_strip_rejects_bad_window():
    with pytest.raises(PreconditionError):
        strip_pairs_below(Fraction(7, 5), Fraction(13, 10), 1, 0)
    with pytest.raises(PreconditionError):
        strip_pairs_above(Fraction(-1, 2), Fraction(1, 2), 1, 0)


# ---------------------------------------------------------------------------
# Perturbed slope identity
# ---------------------------------------------------------------------------


def test_perturbed_slope_identity(lattice, exceptional_set):
    rng = random.Random(15)
    for _ in range(500):
        a, b = rng.randint(0, 25), rng.randint(0, 25)
        y = rng.choice(exceptional_set.elements)
        params = perturbed_params(lattice, y)
        x = vec_add(lattice.radical_combination(a, b), y)
        rho = perturbed_slope(a, b, params)
        num = -lattice.bilinear(lattice.h0, x)
        den = lattice.bilinear(lattice.hinf, x)
        if rho is None:
            assert den == 0
        else:
            assert den != 0 and rho == Fraction(num, den)


# ---------------------------------------------------------------------------
# Delta selection
# ---------------------------------------------------------------------------


def test_delta_vacuous_case(lattice):
    empty = ExceptionalSet(elements=(), bound=0)
    res = delta_for(lattice, empty, SQRT2, Fraction(1, 10))
    assert res.exceptions == ()
    assert res.delta == res.eps_prime == Fraction(1, 20)


def test_delta_basic_contract(lattice, exceptional_set):
    eps = Fraction(1, 10)
    res = delta_for(lattice, exceptional_set, SQRT2, eps)
    assert 0 < res.delta <= res.eps_prime < eps
    again = delta_for(lattice, exceptional_set, SQRT2, eps)
    assert again == res  # deterministic


def test_delta_soundness_oracle_scan(lattice, exceptional_set):
    """Independent rescan: no pair up to a = 600 breaks the implication.

    Any exception satisfies |perturbed - raw| >= eps/2 while the offsets only
    reach |perturbed - raw| <= (|g1| + slope*|g2|)/(a - 1) <= 6/(a - 1), so
    every exception has a <= 121; the scan goes well past five times the
    internal strip bounds for this window.
    """
    eps = Fraction(1, 10)
    res = delta_for(lattice, exceptional_set, SQRT2, eps)
    delta = res.delta
    r = SQRT2
    lo, hi = r.bracket(1 << 24)
    for y in exceptional_set:
        params = perturbed_params(lattice, y)
        for a in range(1, 601):
            den = a + params.gamma2
            if den <= 0:
                b_range = range(0, 6)
            else:
                b_lo = floor((lo - delta) * den - params.gamma1) - 1
                b_hi = ceil((hi + delta) * den - params.gamma1) + 1
                b_range = range(max(0, b_lo), b_hi + 1)
            for b in b_range:
                rho = perturbed_slope(a, b, params)
                if rho is None:
                    continue
                if r > rho - delta and r < rho + delta:
                    s = Fraction(b, a)
                    assert r > s - eps and r < s + eps, (a, b, y, rho)


def test_delta_randomized_probes(lattice, exceptional_set):
    eps = Fraction(1, 10)
    res = delta_for(lattice, exceptional_set, SQRT2, eps)
    rng = random.Random(77)
    for _ in range(10_000):
        a = rng.randint(1, 2000)
        b = rng.randint(0, 3 * a)
        y = rng.choice(exceptional_set.elements)
        params = perturbed_params(lattice, y)
        rho = perturbed_slope(a, b, params)
        if rho is None:
            continue
        if SQRT2 > rho - res.delta and SQRT2 < rho + res.delta:
            s = Fraction(b, a)
            assert SQRT2 > s - eps and SQRT2 < s + eps


def test_delta_rejects_bad_eps(lattice, exceptional_set):
    with pytest.raises(PreconditionError):
        delta_for(lattice, exceptional_set, SQRT2, Fraction(0))
    with pytest.raises(PreconditionError):
        delta_for(lattice, exceptional_set, SQRT2, Fraction(3, 2))


# ---------------------------------------------------------------------------
# Gap vectors
# ---------------------------------------------------------------------------


def oracle_competitors(lattice, a, b, r, budget):
    """Brute force: all pairs within the budget whose slope is strictly
    between b/a and r, by cross multiplication."""
    w0, w1 = lattice.mu_h0, lattice.mu_hinf
    out = []
    for a2 in range(1, budget // w0 + 1):
        for b2 in range(1, (budget - w0 * a2) // w1 + 1):
            if b2 * a > b * a2 and r > Fraction(b2, a2):
                out.append((a2, b2))
    return out


def test_gap_vector_sqrt2_frozen(lattice):
    cert = gap_vector(lattice, SQRT2, Fraction(1, 10), 50)
    assert (cert.a, cert.b) == (5, 7)
    assert cert.mu == 58
    assert cert.budget == 108
    assert str(cert.slope) == "7/5"
    assert validate_gap_certificate(lattice, cert) == []
    # independent oracle: full scan of all a' <= 18, exact comparisons
    assert cert.budget // lattice.mu_h0 == 18
    assert oracle_competitors(lattice, 5, 7, SQRT2, 108) == []
    # the dimension-minimal pair in the open strip (7/5, sqrt(2)) needs a' = 17
    best = None
    for a2 in range(1, 41):
        for b2 in range(1, 2 * a2 + 1):
            if b2 * 5 > 7 * a2 and SQRT2 > Fraction(b2, a2):
                m = lattice.mu_of_pair(a2, b2)
                if best is None or m < best[2]:
                    best = (a2, b2, m)
    assert best == (17, 24, 198)


def test_gap_vector_k_zero(lattice):
    cert = gap_vector(lattice, SQRT2, Fraction(1, 10), 0)
    assert (cert.a, cert.b) == (3, 4)
    assert cert.budget == cert.mu
    assert oracle_competitors(lattice, cert.a, cert.b, SQRT2, cert.budget) == []


def test_gap_vector_window_is_strict(lattice):
    for k in (0, 10, 50):
        cert = gap_vector(lattice, SQRT2, Fraction(1, 10), k)
        s = Fraction(cert.b, cert.a)
        assert SQRT2 > s
        assert SQRT2 < s + Fraction(1, 10)


def test_gap_vector_monotone_in_k(lattice):
    mus = [gap_vector(lattice, SQRT2, Fraction(1, 10), k).mu for k in (0, 10, 20, 50, 80)]
    assert mus == sorted(mus)


def test_gap_vector_budget_exhaustion_is_loud(lattice):
    with pytest.raises(BudgetExhaustedError):
        gap_vector(lattice, SQRT2, Fraction(1, 10), 50, max_mu=40)


def test_gap_certificate_json_round_trip(lattice):
    cert = gap_vector(lattice, SQRT2, Fraction(1, 10), 12)
    data = gap_certificate_to_json(cert)
    assert gap_certificate_from_json(data) == cert


def test_certificate_rejects_witness_mutations(lattice):
    cert = gap_vector(lattice, SQRT2, Fraction(1, 10), 50)
    data = gap_certificate_to_json(cert)

    # slope field edited into the forbidden strip
    bad = gap_certificate_from_json(
        {**data, "witnesses": [dict(w) for w in data["witnesses"]]}
    )
    edited = [dict(w) for w in data["witnesses"]]
    edited[10]["slope"] = "17/12"
    bad = gap_certificate_from_json({**data, "witnesses": edited})
    assert validate_gap_certificate(lattice, bad)

    # a witness pair replaced by one inside the strip
    swapped = [dict(w) for w in data["witnesses"]]
    swapped[3] = {"a": 17, "b": 24, "mu": 198, "slope": "24/17"}
    bad = gap_certificate_from_json({**data, "witnesses": swapped})
    assert validate_gap_certificate(lattice, bad)

    # a dropped witness breaks completeness
    bad = gap_certificate_from_json({**data, "witnesses": data["witnesses"][1:]})
    assert validate_gap_certificate(lattice, bad)


# ---------------------------------------------------------------------------
# p bound and quasisimple estimates
# ---------------------------------------------------------------------------


def test_p_bound_value_and_reversed_fold(lattice, exceptional_set):
    p = p_bound(lattice, exceptional_set)
    assert p == 4
    reversed_set = ExceptionalSet(
        elements=tuple(reversed(exceptional_set.elements)),
        bound=exceptional_set.bound,
    )
    assert p_bound(lattice, reversed_set) == p
    assert p >= 0


def test_quasisimple_bounds_example(lattice, exceptional_set):
    qb = quasisimple_bounds(lattice, exceptional_set, 5, 7, 2)
    assert qb.p == 4
    assert qb.lower == Fraction(58, 2) - 4 == 25
    assert qb.center == 29  # rank equals the pairing, so the band is two-sided

    one_sided = quasisimple_bounds(lattice, exceptional_set, 2, 3, 1)
    assert one_sided.center is None
    assert one_sided.lower == Fraction(24, 2) - 4


def test_quasisimple_bounds_rejections(lattice, exceptional_set):
    assert max_hinf_pairing(lattice, exceptional_set) == 2
    with pytest.raises(PreconditionError):
        quasisimple_bounds(lattice, exceptional_set, 3, 4, 2)  # b = 4 not > 4
    with pytest.raises(PreconditionError):
        quasisimple_bounds(lattice, exceptional_set, 2, 6, 2)  # gcd != 1


# ---------------------------------------------------------------------------
# Tube parameters
# ---------------------------------------------------------------------------


def test_tube_parameters_frozen_example(lattice, exceptional_set):
    tp = tube_parameters(lattice, exceptional_set, SQRT2, Fraction(1, 10), 1)
    assert (tp.a, tp.b) == (5, 7)
    assert tp.rank == 2
    assert tp.p == 4
    assert tp.k_used == 18  # smallest k with k/2 - 2p >= d
    assert tp.lower_bound == 25
    assert gcd(tp.a, tp.b) == 1
    assert validate_tube_params(lattice, exceptional_set, tp) == []
    assert oracle_competitors(lattice, tp.a, tp.b, SQRT2, tp.certificate.budget) == []


def test_tube_parameters_threshold_forces_shrink(lattice, exceptional_set):
    # with a wide window the k = 18 winner is (3, 4); b = 4 fails b > 4 and
    # the window must shrink past slope 4/3
    cert = gap_vector(lattice, SQRT2, Fraction(1, 10), 18)
    assert (cert.a, cert.b) == (3, 4)
    tp = tube_parameters(lattice, exceptional_set, SQRT2, Fraction(1, 10), 1)
    assert tp.b > tp.threshold
    assert Fraction(tp.b, tp.a) > Fraction(4, 3)


def test_tube_parameters_gap_scaling(lattice, exceptional_set):
    for d in (1, 2, 5):
        tp = tube_parameters(lattice, exceptional_set, SQRT2, Fraction(1, 10), d)
        assert Fraction(tp.k_used, 2) - 2 * tp.p >= d
        s = Fraction(tp.b, tp.a)
        assert SQRT2 > s and SQRT2 < s + Fraction(1, 10)


def test_tube_params_json_round_trip(lattice, exceptional_set):
    tp = tube_parameters(lattice, exceptional_set, SQRT2, Fraction(1, 10), 2)
    data = tube_params_to_json(tp)
    assert tube_params_from_json(data) == tp
    assert validate_tube_params(lattice, exceptional_set, tube_params_from_json(data)) == []


def test_other_irrationals(lattice, exceptional_set):
    golden = parse_quad_irrational("(1+sqrt(5))/2")
    cert = gap_vector(lattice, golden, Fraction(1, 10), 20)
    assert validate_gap_certificate(lattice, cert) == []
    assert oracle_competitors(lattice, cert.a, cert.b, golden, cert.budget) == []
    res = delta_for(lattice, exceptional_set, golden, Fraction(1, 16))
    assert 0 < res.delta <= Fraction(1, 32)
