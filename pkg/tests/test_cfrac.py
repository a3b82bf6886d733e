import itertools
import random
from fractions import Fraction
from math import gcd

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from meanders.cfrac import (
    ContinuedFraction,
    FractionError,
    cf_evaluate,
    cf_expand,
    cf_reverse,
    compare_golden,
    derived_quantities,
    enumerate_table,
    is_isotropic,
    load_golden,
    mod_inverse,
    normalize,
    short_morse_polynomial,
    suspended_sigma,
    table_classes,
    table_csv,
)
from meanders.invariants import morse_indices, morse_polynomial
from meanders.three_nose import build_meander_pq


def cf(*terms):
    return ContinuedFraction(terms)


def test_expand_examples():
    assert cf_expand(63, 8) == cf(7, 1, 7)
    assert cf_expand(63, 32) == cf(1, 1, 31)
    for q in range(1, 10):
        assert cf_expand(q, q + 1) == cf(0, 1, q)
    with pytest.raises(FractionError):
        cf_expand(6, 4)


def test_evaluate_examples():
    assert cf_evaluate(cf(7, 1, 7)) == (63, 8)
    for r in range(1, 6):
        for q in range(1, 6):
            assert cf_evaluate(cf(r, 1, q)) == ((r + 1) * (q + 1) - 1, q + 1)
    assert cf_evaluate(cf(0, 1, 4)) == (4, 5)


def test_invalid_fractions():
    with pytest.raises(FractionError):
        ContinuedFraction([1, 2])
    with pytest.raises(FractionError):
        ContinuedFraction([1, 0, 2])
    with pytest.raises(FractionError):
        cf_reverse(cf(0, 1, 3))


def test_normalization():
    assert normalize([2, 3]) == (2, 2, 1)
    assert normalize([2, 2, 1]) == (2, 2, 1)
    assert normalize([1, 2, 3, 1]) == (1, 2, 4)
    assert ContinuedFraction.parse("[2,3]") == cf(2, 2, 1)


@settings(max_examples=200, deadline=None)
@given(st.integers(min_value=2, max_value=500), st.integers(min_value=2, max_value=500))
def test_round_trip(n0, d0):
    if gcd(n0, d0) != 1:
        return
    c = cf_expand(n0, d0)
    assert c.m % 2 == 0
    assert cf_evaluate(c) == (n0, d0)
    assert normalize(c.terms) == c.terms


def _value(terms):
    x = Fraction(terms[-1])
    for b in reversed(terms[:-1]):
        x = b + 1 / x
    return x


@settings(max_examples=100, deadline=None)
@given(st.integers(min_value=3, max_value=400), st.integers(min_value=2, max_value=399))
def test_reverse_gives_inverse(n0, a):
    if a >= n0 or gcd(n0, a) != 1:
        return
    c = cf_expand(n0, a)
    rev = cf_reverse(c)
    assert cf_reverse(rev) == c
    num, den = cf_evaluate(rev)
    assert num == n0 and (a * den) % n0 == 1
    assert _value(rev.terms) == Fraction(num, den)


def test_reverse_examples():
    assert cf_reverse(cf(1, 1, 31)) == cf(31, 1, 1)
    assert cf_evaluate(cf(31, 1, 1))[1] == 2
    assert cf_reverse(cf(7, 1, 7)) == cf(7, 1, 7)


def test_mod_inverse():
    assert mod_inverse(32, 63) == 2
    assert mod_inverse(25, 62) == 5
    assert mod_inverse(1, 17) == 1
    with pytest.raises(FractionError):
        mod_inverse(6, 9)


def test_derived_quantities():
    info = derived_quantities(cf(2, 2, 12))
    assert (info.p - 1, info.q + 1, info.d, info.s, info.n0, info.n) == (37, 25, 15, 1, 62, 63)
    info = derived_quantities(cf(2, 2, 2))
    assert (info.p, info.q, info.n0, info.s, info.d, info.n) == (8, 4, 12, 1, 5, 13)
    for r in range(1, 5):
        for q in range(1, 5):
            info = derived_quantities(cf(r, 1, q))
            assert info.s == 0 and info.d == r + q and info.n == info.n0
    with pytest.raises(FractionError):
        derived_quantities(cf(3))


def test_minimal_index_matches_s():
    for c in table_classes(40):
        info = derived_quantities(c)
        vec = morse_indices(build_meander_pq(info.p, info.q).sigma)
        assert vec.i_min == -info.s
        assert vec.i_max == info.d - info.s


def test_short_morse_polynomial_examples():
    assert short_morse_polynomial(2, 2, 2).coefficients() == (1, 3, 6, 8, 6, 3, 1)
    assert sum(short_morse_polynomial(2, 2, 2).coefficients()[1:]) == 27
    with pytest.raises(FractionError):
        short_morse_polynomial(1, 0, 2)


def test_short_morse_polynomial_product_form():
    for r1 in range(1, 6):
        for r2 in range(1, 6):
            poly = short_morse_polynomial(r1, 1, r2)
            # (x^{r1+1}-1)(x^{r2+1}-1)/(x-1)^2 * (1/x + 1), checked at integer points
            for x in range(2, 6):
                lhs = sum(c * Fraction(x) ** i for i, c in poly.counts.items())
                rhs = Fraction((x ** (r1 + 1) - 1) * (x ** (r2 + 1) - 1), (x - 1) ** 2) * (Fraction(1, x) + 1)
                assert lhs == rhs


def test_short_morse_polynomial_symmetric_in_arguments():
    rng = random.Random(3)
    for _ in range(20):
        b = [rng.randint(1, 9) for _ in range(3)]
        ref = short_morse_polynomial(*b).coefficients()
        assert all(short_morse_polynomial(*perm).coefficients() == ref for perm in itertools.permutations(b))


def test_isotropy():
    assert is_isotropic(cf(7, 1, 7))
    assert is_isotropic(cf(1, 2, 6, 2, 1))
    assert not is_isotropic(cf(1, 1, 31))


def test_table_small():
    classes = table_classes(7)
    assert cf(1, 1, 3) in classes
    assert cf(3, 1, 1) not in classes
    rows = enumerate_table(7)
    assert all(row.rev for row in rows)
    with pytest.raises(FractionError):
        table_classes(2)


def test_table_parallel_is_deterministic():
    assert table_csv(enumerate_table(31, jobs=3)) == table_csv(enumerate_table(31))


def test_golden_fixture_loads():
    golden = load_golden()
    assert len(golden) == 22
    assert sum(1 for row in golden if row[5] == "yes") == 5
    assert compare_golden([], golden)[0].startswith("missing")


def test_suspended_sigma_is_sturm():
    sigma = suspended_sigma(cf(2, 2, 2))
    assert sigma.n == 27
    assert morse_polynomial(sigma, pointed=True).coefficients() == (1, 3, 6, 8, 6, 3, 1)


def test_lattice_column():
    rows = enumerate_table(7, with_lattice=True)
    assert [row.lattice for row in rows] == ["C_{1,3}", "C_{1,3}"]
    assert table_csv(rows, with_lattice=True).splitlines()[0].endswith(",lattice")
