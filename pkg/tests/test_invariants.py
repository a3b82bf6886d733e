import numpy as np
import pytest

from meanders.core import MeanderError, Permutation, identity, suspend
from meanders.invariants import MorsePolynomial, is_morse, morse_indices, morse_polynomial, tally, zero_numbers
from meanders.three_nose import build_meander_pq, chafee_infante_sigma

ROTATED_12 = Permutation([1, 8, 5, 4, 9, 10, 3, 6, 7, 2, 11])


def test_morse_vector_of_rotated_example():
    assert morse_indices(ROTATED_12).values == (0, 1, 2, 1, 2, 3, 2, 1, 0, 1, 0)


def test_morse_vector_small():
    assert morse_indices(Permutation([1, 4, 3, 2, 5])).values == (0, 1, 2, 1, 0)
    assert morse_indices(identity(1)).values == (0,)


def test_morse_requires_meander():
    with pytest.raises(MeanderError):
        morse_indices(Permutation([2, 1, 3]))


def test_formal_indices_of_non_morse_three_nose():
    vec = morse_indices(build_meander_pq(8, 4).sigma)
    assert vec.formal and vec.i_min == -1
    assert not is_morse(build_meander_pq(8, 4).sigma)
    with pytest.raises(MeanderError):
        morse_polynomial(build_meander_pq(8, 4).sigma)
    with pytest.raises(MeanderError):
        zero_numbers(build_meander_pq(8, 4).sigma)
    assert morse_polynomial(build_meander_pq(8, 4).sigma, formal=True)[-1] == 1


def test_euler_characteristic_of_sturm_meanders(small_meanders):
    for sigma in filter(is_morse, small_meanders):
        poly = morse_polynomial(sigma)
        assert sum((-1) ** i * c for i, c in poly.counts.items()) == 1


def test_zero_matrix_structure(small_meanders):
    for sigma in filter(is_morse, small_meanders):
        z = zero_numbers(sigma)
        morse = morse_indices(sigma)
        n = sigma.n
        assert np.array_equal(z.z, z.z.T)
        assert all(z(k, k) == morse[k] for k in range(1, n + 1))
        assert all(z(k + 1, k) == min(morse[k], morse[k + 1]) for k in range(1, n))
        assert not z.z[0, 1:].any() and not z.z[-1, :-1].any()
        assert (z.z >= 0).all()


def test_zero_matrix_chafee_infante():
    # axis order A_1 A_2 B_2 B_1 B_0 sits at meander positions 1 4 3 2 5
    z = zero_numbers(chafee_infante_sigma(2))
    expected = [
        [0, 0, 0, 0, 0],
        [0, 1, 1, 1, 0],
        [0, 1, 2, 1, 0],
        [0, 1, 1, 1, 0],
        [0, 0, 0, 0, 0],
    ]
    assert z.z.tolist() == expected
    assert z.to_dict()["index_base"] == 1


def test_morse_polynomial_chafee_infante():
    assert morse_polynomial(chafee_infante_sigma(3)).coefficients() == (2, 2, 2, 1)
    pointed = morse_polynomial(chafee_infante_sigma(3), pointed=True)
    assert pointed.coefficients() == (1, 2, 2, 2, 1)
    assert pointed.is_reversible()
    assert pointed.total() == 7


def test_morse_polynomial_helpers():
    poly = tally([0, 1, 0, 2, 1, 0, 0])
    assert poly.degree == 2 and poly.coefficients() == (4, 2, 1)
    assert poly.with_star().coefficients() == (1, 4, 2, 1)
    assert not poly.with_star().is_reversible()
    assert MorsePolynomial({0: 3, 1: 3, 2: 1, -1: 1}, pointed=True).is_reversible()
    assert poly.to_dict() == {"lowest": 0, "counts": [4, 2, 1]}


def test_suspension_shifts_indices():
    sigma = ROTATED_12
    big = suspend(sigma)
    n = sigma.n
    old, new = morse_indices(sigma), morse_indices(big)
    assert new[1] == new[n + 2] == 0
    assert all(new[n + 2 - m] == old[m] + 1 for m in range(1, n + 1))
