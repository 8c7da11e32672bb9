import io
import random

import pytest

from permcoho import exactlin
from permcoho.abelian import AbelianInvariants
from permcoho.exactlin import (
    SparseIntMatrix,
    Subquotient,
    cokernel_invariants,
    hermite_basis,
    hnf,
    kernel_basis,
    mod_m_reduce,
    prime_power_invariants,
    rank,
    rank_mod_p,
    read_triplets,
    snf,
    solve,
    write_triplets,
)

from oracles import dense_smith_diagonal, dense_cokernel_factors


def random_sparse(rng, max_dim=12, max_val=9, density=0.4):
    rows = rng.randrange(1, max_dim + 1)
    cols = rng.randrange(1, max_dim + 1)
    trip = []
    for r in range(rows):
        for c in range(cols):
            if rng.random() < density:
                v = rng.randrange(-max_val, max_val + 1)
                if v:
                    trip.append((r, c, v))
    return SparseIntMatrix.from_triplets(rows, cols, trip)


def is_unimodular(U):
    d = snf(U, witnesses=False, verify=False).diagonal
    return all(x == 1 for x in d)


# -- HNF ---------------------------------------------------------------------


def test_hnf_identity():
    I = SparseIntMatrix.identity(3)
    H, U = hnf(I)
    assert H == I and U == I


def test_hnf_zero():
    Z = SparseIntMatrix.zero(2, 3)
    H, U = hnf(Z)
    assert H == Z
    assert U == SparseIntMatrix.identity(2)


def test_hnf_hand_example():
    # [[2,4],[6,8]]: row reduce by hand -> pivots 2 and 4, H = [[2,0],[0,4]].
    M = SparseIntMatrix.from_dense([[2, 4], [6, 8]])
    H, U = hnf(M)
    assert H.to_dense() == [[2, 0], [0, 4]]
    assert U.mul(M) == H
    assert is_unimodular(U)


def test_hnf_is_canonical_under_row_scrambling():
    rng = random.Random(5)
    for _ in range(50):
        M = random_sparse(rng, max_dim=6)
        rows = M.row_items()
        rng.shuffle(rows)
        M2 = SparseIntMatrix.from_rows(M.rows, M.cols, rows)
        h1 = [r for r in hnf(M)[0].row_items() if r]
        h2 = [r for r in hnf(M2)[0].row_items() if r]
        assert h1 == h2


def test_hnf_transform_property():
    rng = random.Random(6)
    for _ in range(100):
        M = random_sparse(rng)
        H, U = hnf(M)
        assert U.mul(M) == H
        assert is_unimodular(U)
        # echelon shape with positive pivots, reduced above
        pivots = []
        for items in H.row_items():
            if items:
                pivots.append(items[0])
        cols = [c for c, _ in pivots]
        assert cols == sorted(cols)
        for i, (c, d) in enumerate(pivots):
            assert d > 0
            for j in range(i):
                v = H.get(j, c)
                assert 0 <= v < d


# -- SNF ---------------------------------------------------------------------


def test_snf_hand_examples():
    assert snf(SparseIntMatrix.from_dense([[2, 4], [6, 8]])).diagonal == (2, 4)
    assert snf(SparseIntMatrix.from_dense([[1]])).diagonal == (1,)
    assert snf(SparseIntMatrix.from_dense([[6, 0], [0, 10]])).diagonal == (2, 30)


def test_snf_oracle_1000_random():
    # Acceptance: sparse SNF agrees with an independent dense textbook SNF
    # on 1000 random matrices up to 12x12 (UMV = D is checked inside snf()).
    rng = random.Random(2024)
    for i in range(1000):
        M = random_sparse(rng)
        verify = i % 10 == 0  # modular monitor on a sample; UMV checked always
        form = snf(M, witnesses=True, verify=verify)
        assert list(form.diagonal) == dense_smith_diagonal(M.to_dense())
        assert is_unimodular(form.U) and is_unimodular(form.V)


def test_rank_mod_p_matches_snf():
    rng = random.Random(99)
    for _ in range(200):
        M = random_sparse(rng, max_dim=8)
        diag = snf(M, witnesses=False, verify=False).diagonal
        for p in (2, 3, 5, 7):
            expected = sum(1 for d in diag if d and d % p)
            assert rank_mod_p(M, p) == expected


# -- kernels and solving ------------------------------------------------------


def test_kernel_hand_examples():
    M = SparseIntMatrix.from_dense([[1, 1], [1, 1]])
    assert kernel_basis(M) == [(1, -1)]
    inj = SparseIntMatrix.from_dense([[1, 0], [0, 1], [3, 5]])
    assert kernel_basis(inj) == []
    Z = SparseIntMatrix.zero(2, 3)
    assert kernel_basis(Z) == [(1, 0, 0), (0, 1, 0), (0, 0, 1)]


def test_kernel_random_properties():
    rng = random.Random(13)
    for _ in range(200):
        M = random_sparse(rng)
        K = kernel_basis(M)  # includes MK = 0 and rank + |K| = cols checks
        assert rank(M) + len(K) == M.cols


def test_solve_examples():
    I = SparseIntMatrix.identity(2)
    assert solve(I, [3, -1]) == (3, -1)
    M2 = SparseIntMatrix.from_dense([[2]])
    assert solve(M2, [1]) is None
    assert solve(M2, [6]) == (3,)


def test_solve_random():
    rng = random.Random(17)
    hits = 0
    for _ in range(300):
        M = random_sparse(rng, max_dim=7)
        x = [rng.randrange(-4, 5) for _ in range(M.cols)]
        b = M.mulvec(x)
        got = solve(M, list(b))
        assert got is not None
        assert M.mulvec(got) == b
        hits += 1
        # a perturbed rhs must either solve exactly or certify nonexistence
        b2 = list(b)
        b2[rng.randrange(M.rows)] += rng.randrange(1, 4)
        got2 = solve(M, b2)
        if got2 is not None:
            assert list(M.mulvec(got2)) == b2
    assert hits == 300


def test_solve_dimension_mismatch():
    with pytest.raises(ValueError):
        solve(SparseIntMatrix.identity(2), [1, 2, 3])


# -- cokernels and mod m -------------------------------------------------------


def test_cokernel_examples():
    assert cokernel_invariants(SparseIntMatrix.from_dense([[2]])) == AbelianInvariants.cyclic(2)
    assert cokernel_invariants(SparseIntMatrix.identity(4)).is_trivial
    assert cokernel_invariants(
        SparseIntMatrix.from_dense([[2, 0], [0, 0]])
    ) == AbelianInvariants(1, (2,))


def test_cokernel_random_vs_dense():
    rng = random.Random(31)
    for _ in range(200):
        M = random_sparse(rng, max_dim=8)
        free, tors = dense_cokernel_factors(M.to_dense())
        inv = cokernel_invariants(M)
        assert inv.free_rank == free
        assert list(inv.torsion) == tors


def test_mod_m_reduce():
    M = SparseIntMatrix.from_dense([[2, 4], [6, 8]])
    assert mod_m_reduce(M, 2).is_zero()
    assert rank_mod_p(M, 2) == 0
    assert rank_mod_p(SparseIntMatrix.from_dense([[1, 1], [1, 1]]), 2) == 1


def test_prime_power_invariants():
    # coker over Z/4 of multiplication by 2 on Z^2: invariant factors (2, 2)
    M = SparseIntMatrix.from_dense([[2, 0], [0, 2]])
    assert prime_power_invariants(M, 2, 2) == [2, 2]
    assert prime_power_invariants(SparseIntMatrix.from_dense([[1, 0], [0, 8]]), 2, 2) == [4]


# -- subquotients --------------------------------------------------------------


def test_subquotient_simple():
    # L = Z^2, S = <(2,0),(0,3)>: L/S = Z/6
    L = SparseIntMatrix.identity(2)
    sq = Subquotient(2, hermite_basis(L), [{0: 2}, {1: 3}])
    assert sq.invariants == AbelianInvariants.cyclic(6)
    assert sq.class_coords({0: 2, 1: 3}) == (0,)
    assert not sq.is_zero_class({0: 1})


def test_subquotient_free_part():
    # L = Z^3, S = <(2,0,0)>: L/S = Z^2 + Z/2
    sq = Subquotient(3, hermite_basis(SparseIntMatrix.identity(3)), [{0: 2}])
    assert sq.invariants == AbelianInvariants(2, (2,))
    reps = sq.generator_reps()
    assert len(reps) == 3
    # the torsion generator doubles to zero, the free ones do not
    frees = reps[:2]
    tor = reps[2]
    assert sq.is_zero_class({c: 2 * v for c, v in tor.items()})
    for f in frees:
        assert not sq.is_zero_class({c: 2 * v for c, v in f.items()})


def test_subquotient_rejects_outsiders():
    sq_basis = hermite_basis(SparseIntMatrix.from_dense([[2, 0], [0, 2]]))
    with pytest.raises(exactlin.ExactLinError):
        Subquotient(2, sq_basis, [{0: 1}])


# -- I/O -----------------------------------------------------------------------


def test_triplet_roundtrip():
    rng = random.Random(8)
    M = random_sparse(rng)
    buf = io.StringIO()
    write_triplets(M, buf)
    buf.seek(0)
    assert read_triplets(buf) == M


def test_backend_name_reports():
    assert exactlin.backend_name() in {"pure", "compiled"}
