"""Permutations, finite permutation groups, and verified homomorphisms.

Points are 0-based internally and 1-based in all I/O, matching the usual
cycle notation "(1,2)(3,4)".  Group enumeration is a plain breadth-first
closure with a configurable element cap; elements are then ordered
lexicographically by image sequence, so indexings are reproducible across
runs and platforms.  All values are immutable after construction.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from math import factorial
from typing import Iterable, Sequence

DEFAULT_ELEMENT_CAP = 10**6


class PermError(ValueError):
    pass


class GroupTooLarge(PermError):
    """Raised when closure would exceed the element cap."""


@dataclass(frozen=True)
class Permutation:
    """A bijection on {0, ..., degree-1}, stored as the image tuple."""

    images: tuple[int, ...]

    def __post_init__(self) -> None:
        if sorted(self.images) != list(range(len(self.images))):
            raise PermError(f"not a bijection: {self.images}")

    @property
    def degree(self) -> int:
        return len(self.images)

    @classmethod
    def identity(cls, degree: int) -> "Permutation":
        return cls(tuple(range(degree)))

    @classmethod
    def from_cycles(cls, cycles: Sequence[Sequence[int]], degree: int | None = None) -> "Permutation":
        """Build from 1-based cycles, e.g. [(1, 2), (3, 4)]."""
        pts = [p for cyc in cycles for p in cyc]
        if pts and min(pts) < 1:
            raise PermError("cycle points are 1-based")
        need = max(pts) if pts else 1
        if degree is None:
            degree = need
        elif degree < need:
            raise PermError(f"degree {degree} too small for point {need}")
        images = list(range(degree))
        for cyc in cycles:
            if len(set(cyc)) != len(cyc):
                raise PermError(f"repeated point in cycle {cyc}")
            for i, p in enumerate(cyc):
                images[p - 1] = cyc[(i + 1) % len(cyc)] - 1
        return cls(tuple(images))

    def __mul__(self, other: "Permutation") -> "Permutation":
        """Composition: (a * b)(x) = a(b(x))."""
        if self.degree != other.degree:
            raise PermError("degree mismatch in composition")
        img = self.images
        return Permutation(tuple(img[other.images[i]] for i in range(self.degree)))

    def inverse(self) -> "Permutation":
        inv = [0] * self.degree
        for i, j in enumerate(self.images):
            inv[j] = i
        return Permutation(tuple(inv))

    def __call__(self, point: int) -> int:
        return self.images[point]

    @property
    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.images))

    def order(self) -> int:
        n = 1
        p = self
        while not p.is_identity:
            p = p * self
            n += 1
        return n

    def extend(self, degree: int) -> "Permutation":
        """Same permutation acting on a larger point set."""
        if degree < self.degree:
            raise PermError("cannot shrink a permutation")
        return Permutation(self.images + tuple(range(self.degree, degree)))

    def cycles(self) -> list[tuple[int, ...]]:
        """Nontrivial cycles on 1-based points, each starting at its minimum."""
        seen = [False] * self.degree
        out = []
        for start in range(self.degree):
            if seen[start] or self.images[start] == start:
                seen[start] = True
                continue
            cyc = [start]
            seen[start] = True
            nxt = self.images[start]
            while nxt != start:
                cyc.append(nxt)
                seen[nxt] = True
                nxt = self.images[nxt]
            out.append(tuple(p + 1 for p in cyc))
        return out

    def cycle_text(self) -> str:
        cycs = self.cycles()
        if not cycs:
            return "()"
        return "".join("(" + ",".join(map(str, cyc)) + ")" for cyc in cycs)

    def __str__(self) -> str:
        return self.cycle_text()


_CYCLE_RE = re.compile(r"\(\s*([0-9]+(?:\s*,\s*[0-9]+)*)?\s*\)")


def parse_cycles(text: str) -> list[tuple[int, ...]]:
    """Parse "(1,2)(3,4)" into [(1, 2), (3, 4)]; "()" is the identity."""
    text = text.strip()
    cycles = []
    pos = 0
    while pos < len(text):
        m = _CYCLE_RE.match(text, pos)
        if not m:
            raise PermError(f"malformed cycle notation at {text[pos:]!r}")
        if m.group(1):
            cycles.append(tuple(int(p) for p in m.group(1).split(",")))
        pos = m.end()
        while pos < len(text) and text[pos].isspace():
            pos += 1
    return cycles


def parse_permutation(text: str, degree: int | None = None) -> Permutation:
    return Permutation.from_cycles(parse_cycles(text), degree)


def parse_generators(text: str, degree: int | None = None) -> list[Permutation]:
    """Parse a generator list like "(1,2),(2,3),(3,4)" at a common degree.

    Generators are split on commas that sit outside parentheses; the common
    degree is the largest point mentioned unless given explicitly.
    """
    parts = []
    depth = 0
    cur = ""
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append(cur)
            cur = ""
        else:
            cur += ch
    if cur.strip():
        parts.append(cur)
    all_cycles = [parse_cycles(p) for p in parts if p.strip()]
    if degree is None:
        pts = [p for cycs in all_cycles for cyc in cycs for p in cyc]
        degree = max(pts) if pts else 1
    return [Permutation.from_cycles(cycs, degree) for cycs in all_cycles]


class PermGroup:
    """A finite permutation group with a canonical element enumeration."""

    __slots__ = (
        "generators",
        "degree",
        "elements",
        "order",
        "_index",
        "_inverse",
        "_left_tables",
    )

    def __init__(self, generators: Sequence[Permutation], elements: Sequence[Permutation]):
        self.generators = tuple(generators)
        self.degree = elements[0].degree
        self.elements = tuple(elements)
        self.order = len(elements)
        self._index = {p.images: i for i, p in enumerate(self.elements)}
        self._inverse: list[int] | None = None
        self._left_tables: dict[int, list[int]] = {}

    # -- construction ------------------------------------------------------

    @classmethod
    def from_generators(
        cls, generators: Sequence[Permutation], element_cap: int = DEFAULT_ELEMENT_CAP
    ) -> "PermGroup":
        if not generators:
            raise PermError("need at least one generator (use the identity)")
        degree = generators[0].degree
        for g in generators:
            if g.degree != degree:
                raise PermError("generators must share a degree")
        ident = Permutation.identity(degree)
        seen = {ident.images: ident}
        frontier = [ident]
        while frontier:
            new = []
            for x in frontier:
                for g in generators:
                    y = g * x
                    if y.images not in seen:
                        if len(seen) >= element_cap:
                            raise GroupTooLarge(
                                f"group too large for enumeration backend (cap {element_cap})"
                            )
                        seen[y.images] = y
                        new.append(y)
            frontier = new
        elements = sorted(seen.values(), key=lambda p: p.images)
        return cls(generators, elements)

    # -- element arithmetic on indices ---------------------------------------

    def index(self, p: Permutation) -> int:
        try:
            return self._index[p.images]
        except KeyError:
            raise PermError(f"{p} is not an element of this group") from None

    def contains(self, p: Permutation) -> bool:
        return p.images in self._index

    @property
    def identity_index(self) -> int:
        return self._index[Permutation.identity(self.degree).images]

    def mul(self, i: int, j: int) -> int:
        return self.left_table(i)[j]

    def inv(self, i: int) -> int:
        if self._inverse is None:
            self._inverse = [self._index[p.inverse().images] for p in self.elements]
        return self._inverse[i]

    def left_table(self, i: int) -> list[int]:
        """Index table of left translation j -> elements[i] * elements[j]."""
        tbl = self._left_tables.get(i)
        if tbl is None:
            g = self.elements[i]
            tbl = [self._index[(g * h).images] for h in self.elements]
            self._left_tables[i] = tbl
        return tbl

    def generator_indices(self) -> list[int]:
        return [self.index(g) for g in self.generators]

    # -- subgroup relations ----------------------------------------------------

    def is_subgroup_of(self, other: "PermGroup") -> bool:
        if self.degree != other.degree or other.order % self.order:
            return False
        return all(p.images in other._index for p in self.elements)

    def generator_text(self) -> str:
        return ",".join(g.cycle_text() for g in self.generators)

    def describe(self) -> str:
        return f"<{self.generator_text()}> of order {self.order} on {self.degree} points"

    def __repr__(self) -> str:
        return f"PermGroup({self.describe()})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, PermGroup):
            return NotImplemented
        return self.degree == other.degree and self.elements == other.elements

    def __hash__(self) -> int:
        return hash((self.degree, tuple(p.images for p in self.elements)))


def group_from_generators(
    gens: Sequence[Permutation] | str,
    element_cap: int = DEFAULT_ELEMENT_CAP,
    degree: int | None = None,
) -> PermGroup:
    """Closure of a generator list (or cycle-notation text) with sanity checks.

    The element order must divide degree!; anything else means the closure
    logic miscounted, so it is asserted here.
    """
    if isinstance(gens, str):
        gens = parse_generators(gens, degree)
    elif degree is not None:
        gens = [g.extend(degree) for g in gens]
    G = PermGroup.from_generators(gens, element_cap)
    if factorial(G.degree) % G.order:
        raise PermError("order does not divide degree! (closure bug)")
    return G


def symmetric_group(n: int, degree: int | None = None) -> PermGroup:
    """S_n on points 1..n (as a subgroup of a larger S_degree if asked)."""
    if n < 1:
        raise PermError("n must be >= 1")
    d = degree if degree is not None else max(n, 1)
    if n == 1:
        return group_from_generators([Permutation.identity(max(d, 1))])
    gens = [Permutation.from_cycles([(i, i + 1)], d) for i in range(1, n)]
    return group_from_generators(gens)


def subgroup_index(G: PermGroup, H: PermGroup) -> int:
    """[G : H] for H <= G; parity is index % 2 (odd index drives transfers)."""
    if not H.is_subgroup_of(G):
        raise PermError("H is not a subgroup of G")
    return G.order // H.order


@dataclass(frozen=True)
class GroupHom:
    """A verified homomorphism between permutation groups.

    full_map[i] is the target element index of source element i.  Validity
    is established by the graph criterion: the subgroup of source x target
    generated by the paired generators has order |source| exactly when the
    generator assignment extends to a homomorphism.
    """

    source: PermGroup
    target: PermGroup
    generator_images: tuple[Permutation, ...]
    full_map: tuple[int, ...]

    def apply(self, i: int) -> int:
        return self.full_map[i]

    def apply_perm(self, p: Permutation) -> Permutation:
        return self.target.elements[self.full_map[self.source.index(p)]]

    def is_injective(self) -> bool:
        return len(set(self.full_map)) == self.source.order

    def __repr__(self) -> str:
        imgs = ",".join(p.cycle_text() for p in self.generator_images)
        return f"GroupHom({self.source.describe()} -> [{imgs}])"


def hom_by_images(
    H: PermGroup,
    G: PermGroup,
    imgs: Sequence[Permutation],
    element_cap: int = DEFAULT_ELEMENT_CAP,
) -> GroupHom:
    """Homomorphism H -> G sending generators to imgs, graph-verified."""
    if len(imgs) != len(H.generators):
        raise PermError("need one image per generator")
    img_idx = [G.index(p) for p in imgs]

    ident = (H.identity_index, G.identity_index)
    seen = {ident}
    frontier = [ident]
    gen_pairs = [(H.index(g), gi) for g, gi in zip(H.generators, img_idx)]
    while frontier:
        new = []
        for a, b in frontier:
            for ga, gb in gen_pairs:
                pair = (H.mul(ga, a), G.mul(gb, b))
                if pair not in seen:
                    if len(seen) > element_cap:
                        raise GroupTooLarge("graph closure exceeded the element cap")
                    seen.add(pair)
                    new.append(pair)
        frontier = new
    if len(seen) != H.order:
        raise PermError(
            f"not a homomorphism: graph order {len(seen)} != |H| = {H.order}"
        )
    table = [0] * H.order
    for a, b in seen:
        table[a] = b
    return GroupHom(H, G, tuple(imgs), tuple(table))


def inclusion_hom(H: PermGroup, G: PermGroup) -> GroupHom:
    """The inclusion of a verified subgroup."""
    if not H.is_subgroup_of(G):
        raise PermError("H is not a subgroup of G")
    return hom_by_images(H, G, [G.elements[G.index(g)] for g in H.generators])


def identity_hom(G: PermGroup) -> GroupHom:
    return hom_by_images(G, G, list(G.generators))


def spot_check_hom(f: GroupHom, pair_budget: int = 10**4, seed: int = 0) -> bool:
    """Check f(xy) = f(x)f(y), exhaustively when |H|^2 is small.

    Above raw_budget pairs a seeded sample of pair_budget products is used.
    """
    import random as _random

    H, G = f.source, f.target
    n = H.order
    if n * n <= 10**6:
        pairs = ((x, y) for x in range(n) for y in range(n))
    else:
        rng = _random.Random(seed)
        pairs = ((rng.randrange(n), rng.randrange(n)) for _ in range(pair_budget))
    for x, y in pairs:
        if f.full_map[H.mul(x, y)] != G.mul(f.full_map[x], f.full_map[y]):
            return False
    return True
