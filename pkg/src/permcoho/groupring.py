"""Elements of the integral group ring of a finite permutation group.

Elements are sparse maps from group-element indices (in the group's
canonical enumeration) to integer coefficients.  The augmentation is the
coefficient sum; multiplication is convolution through the group's left
translation tables.
"""

from __future__ import annotations

from .perm import PermGroup


class GroupRingElement:
    """A sparse element of Z[G]."""

    __slots__ = ("group", "coeffs")

    def __init__(self, group: PermGroup, coeffs: dict[int, int] | None = None):
        self.group = group
        self.coeffs = {e: c for e, c in (coeffs or {}).items() if c}

    @classmethod
    def one(cls, group: PermGroup) -> "GroupRingElement":
        return cls(group, {group.identity_index: 1})

    @classmethod
    def basis(cls, group: PermGroup, element_index: int, coeff: int = 1) -> "GroupRingElement":
        return cls(group, {element_index: coeff})

    def augmentation(self) -> int:
        return sum(self.coeffs.values())

    def __add__(self, other: "GroupRingElement") -> "GroupRingElement":
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            nv = out.get(e, 0) + c
            if nv:
                out[e] = nv
            else:
                del out[e]
        return GroupRingElement(self.group, out)

    def __neg__(self) -> "GroupRingElement":
        return GroupRingElement(self.group, {e: -c for e, c in self.coeffs.items()})

    def __sub__(self, other: "GroupRingElement") -> "GroupRingElement":
        return self + (-other)

    def __mul__(self, other: "GroupRingElement") -> "GroupRingElement":
        G = self.group
        out: dict[int, int] = {}
        for e1, c1 in self.coeffs.items():
            tbl = G.left_table(e1)
            for e2, c2 in other.coeffs.items():
                k = tbl[e2]
                nv = out.get(k, 0) + c1 * c2
                if nv:
                    out[k] = nv
                elif k in out:
                    del out[k]
        return GroupRingElement(G, out)

    def scale(self, k: int) -> "GroupRingElement":
        if not k:
            return GroupRingElement(self.group, {})
        return GroupRingElement(self.group, {e: k * c for e, c in self.coeffs.items()})

    def translate(self, g_index: int) -> "GroupRingElement":
        """Left multiplication by the group element with the given index."""
        tbl = self.group.left_table(g_index)
        return GroupRingElement(self.group, {tbl[e]: c for e, c in self.coeffs.items()})

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    def items(self):
        return sorted(self.coeffs.items())

    def __eq__(self, other) -> bool:
        if not isinstance(other, GroupRingElement):
            return NotImplemented
        return self.group == other.group and self.coeffs == other.coeffs

    def __repr__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for e, c in self.items():
            g = self.group.elements[e].cycle_text()
            parts.append(f"{c}*{g}" if c != 1 else g)
        return " + ".join(parts)
