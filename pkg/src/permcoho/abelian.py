"""Finitely generated abelian groups in canonical divisor-chain form.

A group is stored as a free rank plus a chain of torsion orders
d1 | d2 | ... (each >= 2).  Two isomorphic groups always normalize to the
same representation, so ``==`` is isomorphism and the text rendering is
safe to compare byte-for-byte inside certificates.

>>> print(normalize([2, 3]))
Z/6
>>> print(normalize([2, 4]))
Z/2 x Z/4
>>> print(normalize([0, 2, 0]))
Z^2 x Z/2
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Iterable, Sequence


def _factorint(n: int) -> dict[int, int]:
    # Trial division; every order in this project is tiny.
    out: dict[int, int] = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1 if p == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


@dataclass(frozen=True)
class AbelianInvariants:
    """An abelian group Z^free_rank x Z/d1 x Z/d2 x ... with d1 | d2 | ...."""

    free_rank: int
    torsion: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.free_rank < 0:
            raise ValueError("free rank must be nonnegative")
        prev = 1
        for d in self.torsion:
            if d < 2:
                raise ValueError("torsion orders must be >= 2")
            if d % prev != 0:
                raise ValueError(f"divisor chain violated: {prev} does not divide {d}")
            prev = d

    # -- constructors -------------------------------------------------

    @classmethod
    def trivial(cls) -> "AbelianInvariants":
        return cls(0, ())

    @classmethod
    def free(cls, rank: int) -> "AbelianInvariants":
        return cls(rank, ())

    @classmethod
    def cyclic(cls, n: int) -> "AbelianInvariants":
        """Z for n = 0, else Z/n."""
        if n == 0:
            return cls(1, ())
        if n == 1:
            return cls(0, ())
        return cls(0, (n,))

    @classmethod
    def from_factors(cls, factors: Iterable[int]) -> "AbelianInvariants":
        """Canonicalize a list of cyclic orders; 0 encodes a Z summand."""
        rank = 0
        exps: dict[int, list[int]] = {}
        for d in factors:
            if d < 0:
                raise ValueError("cyclic orders must be >= 0")
            if d == 0:
                rank += 1
            elif d > 1:
                for p, e in _factorint(d).items():
                    exps.setdefault(p, []).append(e)
        # CRT split done; reassemble the divisor chain from the largest
        # prime power of each prime downwards, then flip to ascending order.
        for elist in exps.values():
            elist.sort(reverse=True)
        chain: list[int] = []
        while any(exps.values()):
            d = 1
            for p, elist in exps.items():
                if elist:
                    d *= p ** elist.pop(0)
            chain.append(d)
        chain.reverse()
        return cls(rank, tuple(chain))

    @classmethod
    def from_snf_diagonal(cls, diagonal: Sequence[int], extra_free: int = 0) -> "AbelianInvariants":
        """Group presented by a diagonal relation matrix plus free summands.

        A zero diagonal entry contributes a Z summand, a one contributes
        nothing, anything else a cyclic factor.
        """
        rank = extra_free + sum(1 for d in diagonal if d == 0)
        chain = tuple(abs(d) for d in diagonal if abs(d) > 1)
        return cls.from_factors([0] * rank + list(chain))

    # -- structure ----------------------------------------------------

    @property
    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    @property
    def is_finite(self) -> bool:
        return self.free_rank == 0

    def order(self) -> int:
        """Group order; 0 stands for infinite."""
        if self.free_rank:
            return 0
        n = 1
        for d in self.torsion:
            n *= d
        return n

    def exponent(self) -> int:
        if self.free_rank:
            return 0
        return self.torsion[-1] if self.torsion else 1

    def primary_list(self) -> list[int]:
        """Prime-power decomposition, sorted (GAP's AbelianInvariants order)."""
        out: list[int] = []
        for d in self.torsion:
            for p, e in _factorint(d).items():
                out.append(p**e)
        return sorted(out)

    def cyclic_factors(self) -> list[int]:
        """Divisor chain with 0s for free summands (module generator orders)."""
        return [0] * self.free_rank + list(self.torsion)

    # -- functors (structure-theorem bilinear rules) --------------------

    def direct_sum(self, *others: "AbelianInvariants") -> "AbelianInvariants":
        factors = self.cyclic_factors()
        for o in others:
            factors.extend(o.cyclic_factors())
        return AbelianInvariants.from_factors(factors)

    def tensor(self, other: "AbelianInvariants") -> "AbelianInvariants":
        # Z(x)B = B, Za(x)Zb = Z/gcd(a,b); bilinear over direct sums.
        factors: list[int] = []
        for a in self.cyclic_factors():
            for b in other.cyclic_factors():
                if a == 0:
                    factors.append(b)
                elif b == 0:
                    factors.append(a)
                else:
                    factors.append(gcd(a, b))
        return AbelianInvariants.from_factors(factors)

    def tor(self, other: "AbelianInvariants") -> "AbelianInvariants":
        # Tor(Z,-) = 0, Tor(Za,Zb) = Z/gcd(a,b).
        factors = [
            gcd(a, b)
            for a in self.torsion
            for b in other.torsion
        ]
        return AbelianInvariants.from_factors(factors)

    def ext_(self, other: "AbelianInvariants") -> "AbelianInvariants":
        # Ext(Z,-) = 0, Ext(Za,Zb) = Z/gcd(a,b), Ext(Za,Z) = Z/a.
        factors: list[int] = []
        for a in self.torsion:
            factors.extend(a for _ in range(other.free_rank))
            factors.extend(gcd(a, b) for b in other.torsion)
        return AbelianInvariants.from_factors(factors)

    def hom(self, other: "AbelianInvariants") -> "AbelianInvariants":
        # Hom(Z,B) = B, Hom(Za,Z) = 0, Hom(Za,Zb) = Z/gcd(a,b).
        factors: list[int] = []
        for _ in range(self.free_rank):
            factors.extend(other.cyclic_factors())
        for a in self.torsion:
            factors.extend(gcd(a, b) for b in other.torsion)
        return AbelianInvariants.from_factors(factors)

    # -- rendering ------------------------------------------------------

    def render(self) -> str:
        """Canonical text form "Z^r x Z/d1 x Z/d2 ..." ("0" when trivial)."""
        parts: list[str] = []
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank > 1:
            parts.append(f"Z^{self.free_rank}")
        parts.extend(f"Z/{d}" for d in self.torsion)
        return " x ".join(parts) if parts else "0"

    def __str__(self) -> str:
        return self.render()

    def __repr__(self) -> str:
        return f"AbelianInvariants({self.free_rank}, {self.torsion})"


def normalize(factors: Iterable[int]) -> AbelianInvariants:
    """Canonical divisor-chain form of a direct sum of cyclic groups.

    >>> normalize([6, 10]).torsion
    (2, 30)
    """
    return AbelianInvariants.from_factors(factors)


def parse_invariants(text: str) -> AbelianInvariants:
    """Inverse of :meth:`AbelianInvariants.render`.

    >>> parse_invariants("Z^2 x Z/2 x Z/4")
    AbelianInvariants(2, (2, 4))
    """
    text = text.strip()
    if text == "0":
        return AbelianInvariants.trivial()
    factors: list[int] = []
    for part in text.split("x"):
        part = part.strip()
        if part == "Z":
            factors.append(0)
        elif part.startswith("Z^"):
            factors.extend([0] * int(part[2:]))
        elif part.startswith("Z/"):
            factors.append(int(part[2:]))
        else:
            raise ValueError(f"cannot parse invariant factor {part!r}")
    return AbelianInvariants.from_factors(factors)


def uct_h2(h1: AbelianInvariants, h2: AbelianInvariants, coeff: AbelianInvariants) -> AbelianInvariants:
    """Degree-2 cohomology with trivial coefficients from H_1 and H_2.

    The short exact sequence 0 -> Ext(H_1, M) -> H^2 -> Hom(H_2, M) -> 0
    splits (non-naturally), so the middle term is the direct sum.
    """
    return h1.ext_(coeff).direct_sum(h2.hom(coeff))


def kuenneth_homology(
    ha: Sequence[AbelianInvariants],
    hb: Sequence[AbelianInvariants],
    n: int,
) -> AbelianInvariants:
    """Degree-n homology of a product from graded factor homology.

    ``ha`` and ``hb`` list homology in degrees 0..n with degree 0 equal to Z.
    Output is the tensor terms in total degree n plus Tor terms in total
    degree n - 1.
    """
    for h in (ha, hb):
        if len(h) < n + 1:
            raise ValueError("need factor homology in degrees 0..n")
        if h[0] != AbelianInvariants.free(1):
            raise ValueError("degree-0 homology must be Z")
    out = AbelianInvariants.trivial()
    for i in range(n + 1):
        out = out.direct_sum(ha[i].tensor(hb[n - i]))
    for i in range(n):
        out = out.direct_sum(ha[i].tor(hb[n - 1 - i]))
    return out


def cohomology_via_degree_shift(h_n: AbelianInvariants) -> AbelianInvariants:
    """H^{n+1}(G, Z) from H_n(G, Z) for a finite group, n >= 1.

    Valid only when the displayed homology is finite; for finite groups all
    positive-degree homology is, and H^{n+1}(G, Z) = Hom(H_n, Q/Z) = H_n.
    """
    if not h_n.is_finite:
        raise ValueError("degree shift requires finite homology")
    return h_n
