from collections import Counter
from fractions import Fraction
from math import ceil

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ffembed.errors import BadDensity
from ffembed.rng import SplitMix64, check_density, random_product, random_subset, sample_size, shuffle
from ffembed.space import Space

# published reference outputs of the generator
REFERENCE = {
    0: [0xE220A8397B1DCDAF, 0x6E789E6AA1B965F4, 0x06C45D188009454F],
    1234567: [6457827717110365317, 3203168211198807973, 9817491932198370423],
}


@pytest.mark.parametrize("seed", sorted(REFERENCE))
def test_reference_vectors(seed):
    r = SplitMix64(seed)
    assert [r.next() for _ in range(3)] == REFERENCE[seed]


def test_below_is_in_range_and_roughly_uniform():
    r = SplitMix64(7)
    counts = Counter(r.below(6) for _ in range(6000))
    assert set(counts) == set(range(6))
    assert all(800 < c < 1200 for c in counts.values())
    with pytest.raises(ValueError):
        r.below(0)


@given(st.integers(0, 2**64 - 1), st.integers(0, 50))
def test_shuffle_is_a_permutation(seed, n):
    out = shuffle(list(range(n)), seed)
    assert sorted(out) == list(range(n))
    assert out == shuffle(list(range(n)), seed)


@pytest.mark.parametrize("bad", [0, -1, Fraction(3, 2), 2])
def test_bad_density(bad):
    with pytest.raises(BadDensity):
        check_density(bad)


def test_density_accepts_decimal_text_and_floats():
    assert check_density("0.1") == Fraction(1, 10)
    assert check_density(0.1) == Fraction(1, 10)
    assert sample_size(125, Fraction(1, 10)) == 13


@pytest.mark.parametrize("q,d", [(3, 2), (5, 3), (9, 2)])
def test_random_subset_sizes_and_nesting(q, d):
    sp = Space.of(q, d)
    prev = None
    for k in range(1, 11):
        dens = Fraction(k, 10)
        E = random_subset(sp, dens, 42)
        assert len(E) == ceil(dens * q**d)
        if prev is not None:
            assert prev.issubset(E)
        prev = E
    assert len(random_subset(sp, 1, 3)) == q**d


def test_random_subset_depends_on_seed():
    sp = Space.of(7, 2)
    assert random_subset(sp, Fraction(1, 2), 1) != random_subset(sp, Fraction(1, 2), 2)
    assert random_subset(sp, Fraction(1, 2), 1) == random_subset(sp, Fraction(1, 2), 1)


def test_random_subset_prefix_of_shuffle():
    sp = Space.of(5, 2)
    order = shuffle(list(range(25)), 9)
    assert list(random_subset(sp, Fraction(2, 5), 9).indices) == sorted(order[:10])


@pytest.mark.parametrize("q,d", [(5, 2), (7, 3)])
def test_random_product(q, d):
    sp = Space.of(q, d)
    E = random_product(sp, Fraction(3, 5), 4)
    a = ceil(Fraction(3, 5) * q)
    assert len(E) == a**d
    A = {int(c) for row in E.coords for c in row}
    assert len(A) == a
    assert sorted(A) == sorted(shuffle(list(range(q)), 4)[:a])
