"""Multi-index bookkeeping for the Hermite basis.

Basis functions are labelled by tuples nu in N_0^n.  Truncations keep every
index with total order |nu| <= N, listed in graded order (by |nu|, ties broken
with the first coordinate largest) so that a deeper truncation extends a
shallower one as a prefix.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb


@dataclass(frozen=True)
class MultiIndex:
    """A tuple nu = (nu_1, ..., nu_n) of non-negative integers."""

    entries: tuple[int, ...]
    order: int = field(init=False, compare=False)

    def __post_init__(self):
        if not self.entries:
            raise ValueError("multi-index must have at least one entry")
        if any((not isinstance(k, int)) or k < 0 for k in self.entries):
            raise ValueError(f"multi-index entries must be non-negative integers, got {self.entries}")
        object.__setattr__(self, "order", sum(self.entries))

    @property
    def dim(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __len__(self):
        return len(self.entries)

    def __getitem__(self, j):
        return self.entries[j]


def enumerate_level(n: int, s: int) -> list[MultiIndex]:
    """All multi-indices of dimension n with |nu| = s.

    The first coordinate decreases fastest: (2,0), (1,1), (0,2) for n=2, s=2.
    There are C(s+n-1, n-1) of them.
    """
    if n < 1:
        raise ValueError(f"dimension must be >= 1, got {n}")
    if s < 0:
        raise ValueError(f"level must be >= 0, got {s}")
    out: list[MultiIndex] = []

    def rec(prefix: tuple[int, ...], remaining: int, slots: int):
        if slots == 1:
            out.append(MultiIndex(prefix + (remaining,)))
            return
        for k in range(remaining, -1, -1):
            rec(prefix + (k,), remaining - k, slots - 1)

    rec((), s, n)
    return out


class TruncationSpec:
    """Graded enumeration of {nu : |nu| <= N} in dimension n.

    rank/unrank convert between multi-indices and positions 0..D-1 where
    D = C(N+n, n).  The ordering is graded, so the spec for level N is a
    prefix of the spec for any larger level.
    """

    def __init__(self, dim: int, level: int):
        if dim < 1:
            raise ValueError(f"dimension must be >= 1, got {dim}")
        if level < 0:
            raise ValueError(f"level must be >= 0, got {level}")
        self.dim = dim
        self.level = level
        self._indices: tuple[MultiIndex, ...] = tuple(
            nu for s in range(level + 1) for nu in enumerate_level(dim, s)
        )
        self._rank = {nu.entries: i for i, nu in enumerate(self._indices)}
        assert len(self._indices) == comb(level + dim, dim)

    @property
    def size(self) -> int:
        return len(self._indices)

    @property
    def indices(self) -> tuple[MultiIndex, ...]:
        return self._indices

    def rank(self, nu: MultiIndex) -> int:
        if nu.dim != self.dim:
            raise ValueError(f"multi-index has dimension {nu.dim}, truncation has {self.dim}")
        try:
            return self._rank[nu.entries]
        except KeyError:
            raise ValueError(
                f"multi-index {nu.entries} has order {nu.order} > level cutoff {self.level}"
            ) from None

    def unrank(self, i: int) -> MultiIndex:
        if not 0 <= i < self.size:
            raise ValueError(f"rank {i} out of range [0, {self.size})")
        return self._indices[i]

    def shells(self) -> list[tuple[int, list[MultiIndex]]]:
        """Indices grouped by total order s = 0..N, in enumeration order."""
        groups: list[tuple[int, list[MultiIndex]]] = [(s, []) for s in range(self.level + 1)]
        for nu in self._indices:
            groups[nu.order][1].append(nu)
        return groups

    def __repr__(self):
        return f"TruncationSpec(dim={self.dim}, level={self.level}, size={self.size})"
