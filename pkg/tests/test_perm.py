import pytest

from permcoho.perm import (
    GroupTooLarge,
    PermError,
    Permutation,
    group_from_generators,
    hom_by_images,
    identity_hom,
    inclusion_hom,
    parse_generators,
    parse_permutation,
    spot_check_hom,
    subgroup_index,
    symmetric_group,
)


def test_parse_and_print_roundtrip():
    p = parse_permutation("(1,2)(3,4)")
    assert p.cycle_text() == "(1,2)(3,4)"
    assert parse_permutation("( 1 , 2 ) ( 3 , 4 )") == p
    assert parse_permutation("()").is_identity
    q = parse_permutation("(1,5)(2,6)(3,7)(4,8)")
    assert q.degree == 8
    assert parse_permutation(q.cycle_text()) == q


def test_composition_convention():
    a = parse_permutation("(1,2)", degree=3)
    b = parse_permutation("(2,3)", degree=3)
    # (a*b)(x) = a(b(x)); 1 -> b:1 -> a:2, 2 -> 3 -> 3, 3 -> 2 -> 1
    assert (a * b).cycle_text() == "(1,2,3)"
    assert (a * b) * (a * b).inverse() == Permutation.identity(3)


def test_group_orders():
    assert group_from_generators("(1,2),(3,4)").order == 4
    assert group_from_generators("(1,2),(2,3),(3,4)").order == 24
    assert symmetric_group(5).order == 120


def test_appendix_groups():
    K = group_from_generators(
        "(1,2),(3,4),(5,6),(7,8),(1,3)(2,4),(5,7)(6,8),(1,5)(2,6)(3,7)(4,8),(3,5)(4,6)"
    )
    L = group_from_generators("(1,2),(3,4),(5,6),(7,8),(1,3)(2,4),(5,7)(6,8)", degree=8)
    assert L.order == 64
    assert K.order % 128 == 0  # contains the Sylow 2-subgroup of S8
    assert L.is_subgroup_of(K)
    assert subgroup_index(K, L) == K.order // 64
    s8_order = 40320
    assert (s8_order // K.order) % 2 == 1  # odd index in S8


def test_enumeration_deterministic():
    g1 = group_from_generators("(1,2),(2,3),(3,4)")
    g2 = group_from_generators("(1,2),(2,3),(3,4)")
    assert [p.images for p in g1.elements] == [p.images for p in g2.elements]
    assert g1.elements[0].is_identity
    imgs = [p.images for p in g1.elements]
    assert imgs == sorted(imgs)


def test_closure_invariants():
    G = group_from_generators("(1,2),(2,3),(3,4)")
    n = G.order
    for i in range(n):
        assert G.inv(G.inv(i)) == i
        for j in range(0, n, 5):
            k = G.mul(i, j)
            assert 0 <= k < n


def test_degree_mismatch_rejected():
    a = Permutation.from_cycles([(1, 2)], 2)
    b = Permutation.from_cycles([(3, 4)], 4)
    with pytest.raises(PermError):
        group_from_generators([a, b])


def test_element_cap():
    with pytest.raises(GroupTooLarge):
        group_from_generators("(1,2),(2,3),(3,4),(4,5),(5,6),(6,7)", element_cap=100)


def test_hom_by_images_valid_inclusion():
    G = group_from_generators("(1,2),(2,3),(3,4)")
    H = group_from_generators("(1,2),(3,4)", degree=4)
    f = hom_by_images(H, G, [p for p in H.generators])
    assert f.is_injective()
    assert spot_check_hom(f)


def test_hom_identity():
    G = group_from_generators("(1,2),(2,3)")
    f = identity_hom(G)
    assert f.full_map == tuple(range(G.order))


def test_hom_rejects_non_homomorphism():
    H = group_from_generators("(1,2)", degree=3)
    G = group_from_generators("(1,2,3)")
    img = parse_permutation("(1,2,3)")
    with pytest.raises(PermError, match="not a homomorphism"):
        hom_by_images(H, G, [img])


def test_subgroup_index_examples():
    S4 = group_from_generators("(1,2),(2,3),(3,4)")
    syl = group_from_generators("(1,2),(3,4),(1,3)(2,4)")
    assert subgroup_index(S4, syl) == 3
    assert subgroup_index(S4, S4) == 1
    V = group_from_generators("(1,2),(3,4)")
    with pytest.raises(PermError):
        subgroup_index(V, S4)


def test_inclusion_hom_checks_subgroup():
    S4 = group_from_generators("(1,2),(2,3),(3,4)")
    S3 = group_from_generators("(1,2),(2,3)", degree=4)
    f = inclusion_hom(S3, S4)
    assert f.is_injective()
    S5 = symmetric_group(5)
    with pytest.raises(PermError):
        inclusion_hom(S5, S4)


def test_parse_generator_lists():
    gens = parse_generators("(1,2),(2,3),(3,4)")
    assert [g.degree for g in gens] == [4, 4, 4]
    gens = parse_generators("(1,2)(3,4),(5,6)")
    assert [g.degree for g in gens] == [6, 6]
