"""Finite posets: the underlying spaces of monoid schemes of finite type.

Open subsets are down-closed sets (the Alexandrov topology).  The poset
caches covering relations, maximal points and heights; meets are computed
from down-set intersections.
"""

from __future__ import annotations

import itertools
from typing import Iterable, Optional, Sequence

from .errors import NotOpen


class FinitePoset:
    """An immutable finite poset over hashable points."""

    __slots__ = ("points", "_index", "_leq", "_covers", "_heights")

    def __init__(self, points: Sequence, leq_pairs: Iterable[tuple] = ()):
        points = tuple(points)
        if len(set(points)) != len(points):
            raise ValueError("points must be distinct")
        index = {p: i for i, p in enumerate(points)}
        n = len(points)
        rel = [[False] * n for _ in range(n)]
        for i in range(n):
            rel[i][i] = True
        for x, y in leq_pairs:
            rel[index[x]][index[y]] = True
        # transitive closure
        for k in range(n):
            rk = rel[k]
            for i in range(n):
                if rel[i][k]:
                    ri = rel[i]
                    for j in range(n):
                        if rk[j]:
                            ri[j] = True
        for i in range(n):
            for j in range(n):
                if i != j and rel[i][j] and rel[j][i]:
                    raise ValueError(
                        f"order is not antisymmetric: {points[i]!r} ~ {points[j]!r}"
                    )
        leq = frozenset(
            (i, j) for i in range(n) for j in range(n) if rel[i][j]
        )
        object.__setattr__(self, "points", points)
        object.__setattr__(self, "_index", index)
        object.__setattr__(self, "_leq", leq)
        covers = []
        for i in range(n):
            for j in range(n):
                if i != j and rel[i][j]:
                    if not any(
                        k != i and k != j and rel[i][k] and rel[k][j] for k in range(n)
                    ):
                        covers.append((points[i], points[j]))
        object.__setattr__(self, "_covers", tuple(covers))
        heights = [0] * n
        for i in self._topo_indices():
            below = [heights[j] for j in range(n) if j != i and rel[j][i]]
            heights[i] = 1 + max(below) if below else 0
        object.__setattr__(self, "_heights", tuple(heights))

    def __setattr__(self, name, value):
        raise AttributeError("FinitePoset is immutable")

    def _topo_indices(self):
        n = len(self.points)
        order = sorted(
            range(n), key=lambda i: sum(1 for j in range(n) if (j, i) in self._leq)
        )
        return order

    # -- order ----------------------------------------------------------------

    def leq(self, x, y) -> bool:
        return (self._index[x], self._index[y]) in self._leq

    def lt(self, x, y) -> bool:
        return x != y and self.leq(x, y)

    def covers(self) -> tuple[tuple, ...]:
        """All covering pairs (x, y) with x strictly below y, nothing between."""
        return self._covers

    def maximal_points(self) -> list:
        return [
            p
            for p in self.points
            if not any(self.lt(p, q) for q in self.points)
        ]

    def minimal_points(self) -> list:
        return [
            p
            for p in self.points
            if not any(self.lt(q, p) for q in self.points)
        ]

    def height(self, x) -> int:
        return self._heights[self._index[x]]

    def dim(self) -> int:
        return max(self._heights, default=0)

    def down_set(self, x) -> tuple:
        return tuple(p for p in self.points if self.leq(p, x))

    def strict_down_set(self, x) -> tuple:
        return tuple(p for p in self.points if self.lt(p, x))

    def is_down_closed(self, subset: Iterable) -> bool:
        sub = set(subset)
        return all(
            q in sub
            for p in sub
            for q in self.points
            if self.leq(q, p)
        )

    def require_open(self, subset: Iterable) -> tuple:
        sub = tuple(p for p in self.points if p in set(subset))
        if not self.is_down_closed(sub):
            raise NotOpen(f"{subset!r} is not a down-closed subset")
        return sub

    def down_sets(self) -> list[tuple]:
        """All open (down-closed) subsets; exponential, for small posets."""
        opens = [frozenset()]
        for p in self.points:
            dp = frozenset(self.down_set(p))
            opens.extend(
                u | dp for u in list(opens)
            )
        uniq = sorted(
            {u for u in opens},
            key=lambda u: (len(u), tuple(sorted(self._index[p] for p in u))),
        )
        return [tuple(p for p in self.points if p in u) for u in uniq]

    # -- lattice structure ------------------------------------------------------

    def meet(self, x, y) -> Optional[object]:
        common = [p for p in self.points if self.leq(p, x) and self.leq(p, y)]
        tops = [p for p in common if not any(self.lt(p, q) for q in common)]
        if len(tops) == 1:
            return tops[0]
        return None

    def meet_of(self, points: Sequence) -> tuple[bool, Optional[object]]:
        """(nonempty, meet) of the intersection of down-sets of the points.

        nonempty is False when the intersection is empty; meet is None when
        the intersection is nonempty but has several maximal elements.
        """
        common = [
            p for p in self.points if all(self.leq(p, m) for m in points)
        ]
        if not common:
            return False, None
        tops = [p for p in common if not any(self.lt(p, q) for q in common)]
        return True, (tops[0] if len(tops) == 1 else None)

    def is_meet_semilattice(self) -> bool:
        return all(
            self.meet(x, y) is not None
            for x, y in itertools.combinations(self.points, 2)
        )

    def least(self) -> Optional[object]:
        mins = self.minimal_points()
        if len(mins) == 1 and all(self.leq(mins[0], p) for p in self.points):
            return mins[0]
        return None

    # -- connectivity and products ------------------------------------------------

    def connected_components(self) -> list[list]:
        remaining = set(self.points)
        comps = []
        while remaining:
            seed = next(p for p in self.points if p in remaining)
            comp = {seed}
            frontier = [seed]
            while frontier:
                p = frontier.pop()
                for q in self.points:
                    if q in remaining and q not in comp and (
                        self.leq(p, q) or self.leq(q, p)
                    ):
                        comp.add(q)
                        frontier.append(q)
            comps.append([p for p in self.points if p in comp])
            remaining -= comp
        return comps

    def is_connected(self) -> bool:
        return len(self.connected_components()) <= 1

    def product(self, other: "FinitePoset") -> "FinitePoset":
        points = [(p, q) for p in self.points for q in other.points]
        pairs = [
            ((p1, q1), (p2, q2))
            for (p1, q1) in points
            for (p2, q2) in points
            if self.leq(p1, p2) and other.leq(q1, q2)
        ]
        return FinitePoset(points, pairs)

    def induced(self, subset: Sequence) -> "FinitePoset":
        sub = [p for p in self.points if p in set(subset)]
        return FinitePoset(
            sub, [(x, y) for x in sub for y in sub if self.leq(x, y)]
        )

    def relabel(self, mapping: dict) -> "FinitePoset":
        points = [mapping[p] for p in self.points]
        pairs = [
            (mapping[x], mapping[y]) for (x, y) in self._pairs()
        ]
        return FinitePoset(points, pairs)

    def _pairs(self):
        return [
            (self.points[i], self.points[j]) for (i, j) in self._leq
        ]

    def isomorphic_to(self, other: "FinitePoset") -> bool:
        """Brute-force poset isomorphism test (small posets only)."""
        if len(self.points) != len(other.points):
            return False
        n = len(self.points)
        if sorted(self._heights) != sorted(other._heights):
            return False
        for perm in itertools.permutations(range(n)):
            ok = True
            for i in range(n):
                for j in range(n):
                    if ((i, j) in self._leq) != ((perm[i], perm[j]) in other._leq):
                        ok = False
                        break
                if not ok:
                    break
            if ok:
                return True
        return False

    def __repr__(self):
        return f"FinitePoset({len(self.points)} points, dim {self.dim()})"


def chain(n: int) -> FinitePoset:
    """The n-point chain 0 < 1 < ... < n-1."""
    return FinitePoset(range(n), [(i, i + 1) for i in range(n - 1)])
