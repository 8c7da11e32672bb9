"""Independent test oracles.

Nothing in here may import the package's elimination engines: the dense
Smith form below is the textbook algorithm on dense lists, used to check
the sparse implementation, and the abelian-group helpers count by brute
force.
"""

from __future__ import annotations

from math import gcd


def dense_smith_diagonal(mat: list[list[int]]) -> list[int]:
    """Textbook Smith normal form diagonal of a dense integer matrix.

    The pivot is always the least-magnitude nonzero entry of the working
    edge (Euclidean shrinking keeps entries small); divisibility against the
    trailing block is restored by pulling the offending row into the edge.
    """
    a = [row[:] for row in mat]
    n = len(a)
    m = len(a[0]) if n else 0
    diag: list[int] = []
    s = 0
    while s < min(n, m):
        # smallest-magnitude nonzero entry of the trailing block -> (s, s)
        best = None
        for i in range(s, n):
            for j in range(s, m):
                v = abs(a[i][j])
                if v and (best is None or v < best[0]):
                    best = (v, i, j)
        if best is None:
            break
        _, bi, bj = best
        a[s], a[bi] = a[bi], a[s]
        for row in a:
            row[s], row[bj] = row[bj], row[s]

        while True:
            # move the least-magnitude edge entry (column s or row s) to (s, s)
            while True:
                best = (abs(a[s][s]), s, s)
                for i in range(s + 1, n):
                    v = abs(a[i][s])
                    if v and v < best[0]:
                        best = (v, i, s)
                for j in range(s + 1, m):
                    v = abs(a[s][j])
                    if v and v < best[0]:
                        best = (v, s, j)
                _, bi, bj = best
                if bi != s:
                    a[s], a[bi] = a[bi], a[s]
                elif bj != s:
                    for row in a:
                        row[s], row[bj] = row[bj], row[s]
                # one floor-division sweep over the edge
                piv = a[s][s]
                for i in range(s + 1, n):
                    if a[i][s]:
                        q = a[i][s] // piv
                        for j in range(s, m):
                            a[i][j] -= q * a[s][j]
                piv = a[s][s]
                for j in range(s + 1, m):
                    if a[s][j]:
                        q = a[s][j] // piv
                        for i in range(s, n):
                            a[i][j] -= q * a[i][s]
                if all(a[i][s] == 0 for i in range(s + 1, n)) and all(
                    a[s][j] == 0 for j in range(s + 1, m)
                ):
                    break
            if a[s][s] < 0:
                for j in range(s, m):
                    a[s][j] = -a[s][j]
            # pull a row with a non-divisible trailing entry into the edge
            piv = a[s][s]
            pulled = False
            for i in range(s + 1, n):
                if any(a[i][j] % piv for j in range(s + 1, m)):
                    for j in range(s, m):
                        a[s][j] += a[i][j]
                    pulled = True
                    break
            if not pulled:
                break
        diag.append(abs(a[s][s]))
        s += 1
    # repair the divisor chain numerically
    changed = True
    while changed:
        changed = False
        for i in range(len(diag)):
            for j in range(i + 1, len(diag)):
                a_, b_ = diag[i], diag[j]
                if a_ and b_ % a_:
                    g = gcd(a_, b_)
                    diag[i], diag[j] = g, a_ * b_ // g
                    changed = True
    diag = sorted(d for d in diag if d)
    diag += [0] * (min(n, m) - len(diag))
    return diag


def dense_rank(mat: list[list[int]]) -> int:
    return sum(1 for d in dense_smith_diagonal(mat) if d)


def dense_cokernel_factors(mat: list[list[int]]) -> tuple[int, list[int]]:
    """(free rank, torsion orders > 1) of Z^rows / column span."""
    diag = dense_smith_diagonal(mat)
    nonzero = [d for d in diag if d]
    free = len(mat) - len(nonzero)
    return free, [d for d in nonzero if d > 1]


def count_homomorphisms(src_orders: list[int], dst_orders: list[int]) -> int:
    """|Hom(A, B)| for A, B finite abelian given as lists of cyclic orders.

    Brute force: a hom is a choice of image for each cyclic generator with
    the order constraint; images of the generator of Z/a are the elements
    killed by a.
    """
    count = 1
    for a in src_orders:
        killed = 1
        for b in dst_orders:
            killed *= gcd(a, b)
        count *= killed
    return count


def brute_force_hom_count(src_orders: list[int], dst_orders: list[int]) -> int:
    """Literally enumerate generator images in the product group and count.

    Only usable for small groups; validates count_homomorphisms and, through
    it, the package's structure-theorem rules.
    """
    from itertools import product

    def elements(orders):
        return list(product(*[range(o) for o in orders]))

    dst = elements(dst_orders)
    total = 0
    for images in product(dst, repeat=len(src_orders)):
        ok = True
        for a, img in zip(src_orders, images):
            if any((a * x) % o for x, o in zip(img, dst_orders)):
                ok = False
                break
        if ok:
            total += 1
    return total
