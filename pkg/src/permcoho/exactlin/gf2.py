"""GF(2) linear algebra on int bitmasks (bit c = column c).

Used by the cheap mod-2 lane: F2 group-ring resolutions, mod-2 cochain
complexes, and rank cross-checks.  Python ints already give word-parallel
XOR, so a single implementation serves both backends.
"""

from __future__ import annotations


def mask_from_cols(cols) -> int:
    m = 0
    for c in cols:
        m |= 1 << c
    return m


def mask_cols(m: int) -> list[int]:
    out = []
    while m:
        low = (m & -m).bit_length() - 1
        out.append(low)
        m &= m - 1
    return out


def lowest_bit(m: int) -> int:
    return (m & -m).bit_length() - 1


class GF2Echelon:
    """Reduced row echelon basis over GF(2), with optional transforms."""

    __slots__ = ("pivot_row", "pivot_trans", "track")

    def __init__(self, track: bool = False):
        self.pivot_row: dict[int, int] = {}
        self.pivot_trans: dict[int, int] = {}
        self.track = track

    @property
    def rank(self) -> int:
        return len(self.pivot_row)

    def reduce(self, m: int, t: int = 0) -> tuple[int, int]:
        """Reduce a row against the basis; returns (residue, transform)."""
        while m:
            c = lowest_bit(m)
            row = self.pivot_row.get(c)
            if row is None:
                return m, t
            m ^= row
            if self.track:
                t ^= self.pivot_trans[c]
        return 0, t

    def insert(self, m: int, t: int = 0) -> int | None:
        """Insert a row; returns its pivot column or None if dependent."""
        m, t = self.reduce(m, t)
        if not m:
            return None
        c = lowest_bit(m)
        # Keep the basis fully reduced: clear bit c from existing rows.
        for cc, row in self.pivot_row.items():
            if row >> c & 1:
                self.pivot_row[cc] = row ^ m
                if self.track:
                    self.pivot_trans[cc] ^= t
        self.pivot_row[c] = m
        if self.track:
            self.pivot_trans[c] = t
        return c

    def contains(self, m: int) -> bool:
        return self.reduce(m)[0] == 0

    def basis(self) -> list[int]:
        return [self.pivot_row[c] for c in sorted(self.pivot_row)]

    def pivot_cols(self) -> list[int]:
        return sorted(self.pivot_row)


def echelon(rows: list[int], track: bool = False):
    """Canonical RREF of a list of bitmask rows.

    Returns ``(piv_cols, piv_rows, piv_trans, zero_trans)``; transforms are
    None unless ``track``.  ``zero_trans`` spans the left kernel.
    """
    ech = GF2Echelon(track)
    zero_trans: list[int] = []
    for i, m in enumerate(rows):
        t = 1 << i if track else 0
        if track:
            red, tred = ech.reduce(m, t)
            if red:
                ech.insert(red, tred)
            else:
                zero_trans.append(tred)
        else:
            ech.insert(m)
    piv_cols = ech.pivot_cols()
    piv_rows = [ech.pivot_row[c] for c in piv_cols]
    piv_trans = [ech.pivot_trans[c] for c in piv_cols] if track else None
    return piv_cols, piv_rows, piv_trans, (zero_trans if track else None)


def rank(rows: list[int]) -> int:
    ech = GF2Echelon()
    for m in rows:
        ech.insert(m)
    return ech.rank


def kernel(rows_as_cols: list[int], track_dim: int):
    """Right kernel of a matrix given by its columns-as-rows transpose.

    ``rows_as_cols[j]`` is column j of the matrix encoded as a bitmask over
    row indices; returns a list of bitmask kernel vectors over column
    indices (canonical RREF basis).
    """
    _, _, _, zt = echelon(list(rows_as_cols), track=True)
    assert zt is not None
    _, basis, _, _ = echelon(zt)
    return basis


def solve(columns: list[int], b: int) -> int | None:
    """Solve M x = b over GF(2), M given by column bitmasks; x as bitmask."""
    ech = GF2Echelon(track=True)
    for j, col in enumerate(columns):
        ech.insert(col, 1 << j)
    red, t = ech.reduce(b, 0)
    return None if red else t
