import random

import pytest

from permcoho.abelian import (
    AbelianInvariants,
    cohomology_via_degree_shift,
    kuenneth_homology,
    normalize,
    parse_invariants,
    uct_h2,
)

from oracles import count_homomorphisms, brute_force_hom_count

Z = AbelianInvariants.free(1)
Z2 = AbelianInvariants.cyclic(2)
Z3 = AbelianInvariants.cyclic(3)
Z4 = AbelianInvariants.cyclic(4)
Z6 = AbelianInvariants.cyclic(6)
T = AbelianInvariants.trivial()


def test_normalize_crt():
    assert normalize([2, 3]) == Z6
    assert normalize([2, 4]) == AbelianInvariants(0, (2, 4))
    assert normalize([0, 2, 0]) == AbelianInvariants(2, (2,))


def test_normalize_idempotent_and_order_independent():
    rng = random.Random(7)
    for _ in range(200):
        factors = [rng.randrange(0, 30) for _ in range(rng.randrange(0, 6))]
        a = normalize(factors)
        b = normalize(list(reversed(factors)))
        assert a == b
        assert normalize(a.cyclic_factors()) == a


def test_divisor_chain_enforced():
    with pytest.raises(ValueError):
        AbelianInvariants(0, (4, 2))
    with pytest.raises(ValueError):
        AbelianInvariants(0, (1,))


def test_ext_examples():
    # Ext(Z2, Z) = Z/2  (M/2M with M = Z)
    assert Z2.ext_(Z) == Z2
    assert Z4.tor(Z6) == Z2
    assert Z2.direct_sum(Z).hom(Z4) == Z2.direct_sum(Z4)


def test_functor_symmetry():
    rng = random.Random(11)
    for _ in range(100):
        a = normalize([rng.randrange(0, 12) for _ in range(rng.randrange(0, 4))])
        b = normalize([rng.randrange(0, 12) for _ in range(rng.randrange(0, 4))])
        assert a.tensor(b) == b.tensor(a)
        assert a.tor(b) == b.tor(a)


def test_hom_against_brute_force_counting():
    # 200 randomized small finite groups, |A|, |B| <= 64: the order of
    # Hom(A,B) computed structurally must match explicit counting.
    rng = random.Random(42)
    cases = 0
    while cases < 200:
        src = [rng.choice([2, 3, 4, 5, 6, 8]) for _ in range(rng.randrange(1, 3))]
        dst = [rng.choice([2, 3, 4, 5, 6, 8]) for _ in range(rng.randrange(1, 3))]
        if_order = 1
        for o in src:
            if_order *= o
        for o in dst:
            if_order *= o
        if if_order > 64 * 64:
            continue
        cases += 1
        structural = normalize(src).hom(normalize(dst)).order()
        assert structural == count_homomorphisms(src, dst)
        if if_order <= 2000:
            assert structural == brute_force_hom_count(src, dst)


def test_ext_tor_orders_match_counting():
    # For finite A, B: |Ext(A,B)| = |Hom(A,B)| and |Tor(A,B)| = |A tensor B|.
    rng = random.Random(3)
    for _ in range(100):
        src = [rng.choice([2, 3, 4, 6, 9]) for _ in range(rng.randrange(1, 3))]
        dst = [rng.choice([2, 3, 4, 6, 9]) for _ in range(rng.randrange(1, 3))]
        A, B = normalize(src), normalize(dst)
        assert A.ext_(B).order() == count_homomorphisms(src, dst)
        assert A.tor(B) == A.tensor(B)


def test_uct_h2_cases():
    A = Z4
    # (H1=Z2, H2=0): Ext(Z2, A) = A/2A
    assert uct_h2(Z2, T, A) == Z2
    # (H1=Z2, H2=Z2): A/2A + A[2]
    assert uct_h2(Z2, Z2, A) == AbelianInvariants(0, (2, 2))
    assert uct_h2(T, T, A) == T


def test_kuenneth_z2_z2():
    # H_*(Z2) is Z, Z2, 0, Z2, 0, Z2, ...
    hz2 = [Z, Z2, T, Z2, T, Z2]
    assert kuenneth_homology(hz2, hz2, 3) == AbelianInvariants(0, (2, 2, 2))
    assert kuenneth_homology(hz2, hz2, 4) == AbelianInvariants(0, (2, 2))
    trivial_factor = [Z, T, T, T, T, T]
    for n in range(1, 6):
        assert kuenneth_homology(hz2, trivial_factor, n) == hz2[n]


def test_render_and_parse_roundtrip():
    cases = [T, Z, Z2, Z6, AbelianInvariants(2, (2, 4)), AbelianInvariants(1, (3,))]
    for g in cases:
        assert parse_invariants(g.render()) == g
    assert AbelianInvariants(0, (2, 2, 2)).render() == "Z/2 x Z/2 x Z/2"
    assert T.render() == "0"


def test_primary_list():
    assert Z6.primary_list() == [2, 3]
    assert AbelianInvariants(0, (2, 12)).primary_list() == [2, 3, 4]


def test_degree_shift():
    assert cohomology_via_degree_shift(Z2) == Z2
    with pytest.raises(ValueError):
        cohomology_via_degree_shift(Z)
