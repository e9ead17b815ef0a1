"""Finitely generated abelian groups, homomorphisms, limits and cohomology.

A group is presented as ``Z^n`` modulo the lattice spanned by the columns of
an integer relation matrix; the Smith normal form of that matrix gives the
canonical invariants (free rank and the invariant-factor chain), so equal
groups always compare equal:

    >>> AbGroup.from_relations(2, [(4, 0), (0, 6)])
    AbGroup(rank=0, torsion=(2, 12))

Homomorphisms are integer matrices on the chosen generators, checked to
respect the relation lattices.  Everything downstream - sheaf sections,
both cochain models of cohomology, the split-epimorphism decision used by
the s-flasque test - reduces to Smith normal form computations here.

All values are immutable after construction; operations are pure functions.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .errors import NonCommutingDiagram
from .intmat import (
    Matrix,
    column_lattice_basis,
    kernel_basis,
    lattice_contains,
    preimage_lattice,
    smith_normal_form,
    solve,
    solve_matrix,
)


class AbGroup:
    """Abelian group ``Z^ngens / (column lattice of relations)``."""

    __slots__ = ("ngens", "relations", "rank", "torsion", "_u", "_row_kind", "labels")

    def __init__(self, ngens: int, relations: Matrix, labels: Optional[Sequence[str]] = None):
        if relations.nrows != ngens:
            raise ValueError("relation matrix must have one row per generator")
        object.__setattr__(self, "ngens", ngens)
        object.__setattr__(self, "relations", relations)
        object.__setattr__(self, "labels", tuple(labels) if labels is not None else None)
        u, s, _ = smith_normal_form(relations)
        # In the coordinates y = U x the relation lattice is spanned by the
        # diagonal entries; classify each row of y once.
        row_kind: list[int] = []  # 0 = dead (d=1), d>1 = torsion, -1 = free
        torsion = []
        for i in range(ngens):
            d = s.rows[i][i] if i < min(s.nrows, s.ncols) else 0
            if d == 0:
                row_kind.append(-1)
            elif d == 1:
                row_kind.append(0)
            else:
                row_kind.append(d)
                torsion.append(d)
        object.__setattr__(self, "_u", u)
        object.__setattr__(self, "_row_kind", tuple(row_kind))
        object.__setattr__(self, "rank", row_kind.count(-1))
        object.__setattr__(self, "torsion", tuple(torsion))

    def __setattr__(self, name, value):
        raise AttributeError("AbGroup is immutable")

    @staticmethod
    def from_relations(ngens: int, relation_vectors: Iterable[Sequence[int]],
                       labels: Optional[Sequence[str]] = None) -> "AbGroup":
        vecs = [tuple(v) for v in relation_vectors]
        return AbGroup(ngens, Matrix.from_cols(vecs, ngens), labels)

    @staticmethod
    def free(n: int, labels: Optional[Sequence[str]] = None) -> "AbGroup":
        return AbGroup(n, Matrix.zero(n, 0), labels)

    @staticmethod
    def cyclic(d: int) -> "AbGroup":
        return AbGroup.from_relations(1, [(d,)])

    @staticmethod
    def zero() -> "AbGroup":
        return AbGroup.free(0)

    @staticmethod
    def of_cokernel(m: Matrix) -> "AbGroup":
        """The cokernel of an integer matrix, rows = generators."""
        return AbGroup(m.nrows, m)

    # -- canonical structure ------------------------------------------------

    def canonical(self) -> tuple[int, tuple[int, ...]]:
        return (self.rank, self.torsion)

    def is_zero(self) -> bool:
        return self.rank == 0 and not self.torsion

    def order(self) -> Optional[int]:
        if self.rank:
            return None
        n = 1
        for d in self.torsion:
            n *= d
        return n

    def reduce(self, vec: Sequence[int]) -> tuple[int, ...]:
        """Canonical coordinates of an element: free coordinates first, then
        torsion residues, in Smith row order."""
        y = self._u.apply(vec)
        free = []
        tors = []
        for yi, kind in zip(y, self._row_kind):
            if kind == -1:
                free.append(yi)
            elif kind > 0:
                tors.append(yi % kind)
        return tuple(free + tors)

    def lift(self, canonical: Sequence[int]) -> tuple[int, ...]:
        """A generator-coordinate representative of canonical coordinates."""
        from .intmat import invert_unimodular

        y = [0] * self.ngens
        it = iter(canonical)
        for i, kind in enumerate(self._row_kind):
            if kind == -1:
                y[i] = next(it)
        for i, kind in enumerate(self._row_kind):
            if kind > 0:
                y[i] = next(it)
        return invert_unimodular(self._u).apply(y)

    def contains_zero(self, vec: Sequence[int]) -> bool:
        return all(x == 0 for x in self.reduce(vec))

    def element_order(self, vec: Sequence[int]) -> Optional[int]:
        """Order of the class of vec; None means infinite."""
        y = self._u.apply(vec)
        n = 1
        for yi, kind in zip(y, self._row_kind):
            if kind == -1 and yi != 0:
                return None
            if kind > 0 and yi % kind != 0:
                d = kind // _gcd(kind, yi % kind)
                n = n * d // _gcd(n, d)
        return n

    def compatible_with(self, other: "AbGroup") -> bool:
        """Same generator count and the same relation lattice (so maps may be
        composed across the two presentations)."""
        if self is other:
            return True
        if self.ngens != other.ngens:
            return False
        return all(
            lattice_contains(other.relations, self.relations.col(j))
            for j in range(self.relations.ncols)
        ) and all(
            lattice_contains(self.relations, other.relations.col(j))
            for j in range(other.relations.ncols)
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, AbGroup):
            return NotImplemented
        return self.canonical() == other.canonical()

    def __hash__(self):
        return hash(self.canonical())

    def __str__(self) -> str:
        if self.is_zero():
            return "0"
        parts = []
        if self.rank:
            parts.append(f"Z^{self.rank}")
        parts.extend(f"Z/{d}" for d in self.torsion)
        return " + ".join(parts)

    def __repr__(self):
        return f"AbGroup(rank={self.rank}, torsion={self.torsion})"


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return abs(a)


@dataclass(frozen=True)
class DirectSum:
    """A direct sum with the bookkeeping needed to embed and project."""

    group: AbGroup
    summands: tuple[AbGroup, ...]
    offsets: tuple[int, ...]

    def inject(self, i: int, vec: Sequence[int]) -> tuple[int, ...]:
        out = [0] * self.group.ngens
        off = self.offsets[i]
        for k, x in enumerate(vec):
            out[off + k] = x
        return tuple(out)

    def block(self, i: int, vec: Sequence[int]) -> tuple[int, ...]:
        off = self.offsets[i]
        return tuple(vec[off : off + self.summands[i].ngens])


def direct_sum(groups: Sequence[AbGroup]) -> DirectSum:
    offsets = []
    total = 0
    for g in groups:
        offsets.append(total)
        total += g.ngens
    cols = []
    for g, off in zip(groups, offsets):
        for j in range(g.relations.ncols):
            col = [0] * total
            for k, x in enumerate(g.relations.col(j)):
                col[off + k] = x
            cols.append(col)
    return DirectSum(
        AbGroup(total, Matrix.from_cols(cols, total)), tuple(groups), tuple(offsets)
    )


class AbMap:
    """Homomorphism given by an integer matrix on chosen generators."""

    __slots__ = ("source", "target", "matrix")

    def __init__(self, source: AbGroup, target: AbGroup, matrix: Matrix, check: bool = True):
        if matrix.nrows != target.ngens or matrix.ncols != source.ngens:
            raise ValueError("matrix shape does not match source/target")
        if check:
            for j in range(source.relations.ncols):
                img = matrix.apply(source.relations.col(j))
                if not lattice_contains(target.relations, img):
                    raise ValueError("matrix does not respect the relation lattices")
        object.__setattr__(self, "source", source)
        object.__setattr__(self, "target", target)
        object.__setattr__(self, "matrix", matrix)

    def __setattr__(self, name, value):
        raise AttributeError("AbMap is immutable")

    @staticmethod
    def identity(g: AbGroup) -> "AbMap":
        return AbMap(g, g, Matrix.identity(g.ngens), check=False)

    @staticmethod
    def zero(source: AbGroup, target: AbGroup) -> "AbMap":
        return AbMap(source, target, Matrix.zero(target.ngens, source.ngens), check=False)

    def __call__(self, vec: Sequence[int]) -> tuple[int, ...]:
        return self.matrix.apply(vec)

    def compose(self, other: "AbMap") -> "AbMap":
        """self after other."""
        if not other.target.compatible_with(self.source):
            raise ValueError("composition source/target mismatch")
        return AbMap(other.source, self.target, self.matrix @ other.matrix, check=False)

    def same_as(self, other: "AbMap") -> bool:
        """Equal as homomorphisms (entries may differ by target relations)."""
        if self.matrix.ncols != other.matrix.ncols or self.matrix.nrows != other.matrix.nrows:
            return False
        for j in range(self.matrix.ncols):
            diff = [a - b for a, b in zip(self.matrix.col(j), other.matrix.col(j))]
            if not lattice_contains(self.target.relations, diff):
                return False
        return True

    def is_zero(self) -> bool:
        return all(
            lattice_contains(self.target.relations, self.matrix.col(j))
            for j in range(self.matrix.ncols)
        )

    # -- kernel / image / cokernel -------------------------------------------

    def kernel(self) -> tuple[AbGroup, "AbMap"]:
        """The kernel subgroup with its inclusion into the source."""
        basis = preimage_lattice(self.matrix, self.target.relations)
        rel = solve_matrix(basis, self.source.relations)
        if rel is None:  # source relations always map into the target lattice
            raise AssertionError("source relations escaped the kernel lattice")
        group = AbGroup(basis.ncols, rel)
        incl = AbMap(group, self.source, basis, check=False)
        return group, incl

    def image(self) -> tuple[AbGroup, "AbMap"]:
        """The image subgroup of the target with its inclusion."""
        basis = column_lattice_basis(self.matrix.hstack(self.target.relations))
        rel = solve_matrix(basis, self.target.relations)
        if rel is None:
            raise AssertionError("target relations escaped the image lattice")
        group = AbGroup(basis.ncols, rel)
        incl = AbMap(group, self.target, basis, check=False)
        return group, incl

    def cokernel(self) -> tuple[AbGroup, "AbMap"]:
        """The cokernel with the projection from the target."""
        group = AbGroup(
            self.target.ngens, self.target.relations.hstack(self.matrix),
            labels=self.target.labels,
        )
        proj = AbMap(self.target, group, Matrix.identity(self.target.ngens), check=False)
        return group, proj

    def is_injective(self) -> bool:
        return self.kernel()[0].is_zero()

    def is_surjective(self) -> bool:
        return self.cokernel()[0].is_zero()


@dataclass(frozen=True)
class SplitEpiResult:
    split: bool
    section: Optional[AbMap]
    reason: str
    witness: Optional[tuple[int, ...]]

    def __bool__(self):
        return self.split


def is_split_epi(f: AbMap) -> SplitEpiResult:
    """Decide whether f has a section s with ``f o s = id``.

    The section is found by solving one integer linear system: the unknown
    matrix entries, plus coefficient vectors absorbing the source and target
    relation lattices.  Decidable for all finitely generated abelian groups.
    """
    a, b = f.source.ngens, f.target.ngens
    ra = f.source.relations
    rb = f.target.relations

    def build_system(ncols_id: int):
        # unknowns: vec(S) (a*b, column major), t_j (ra.ncols per target
        # relator), u_j (rb.ncols per identity column)
        n_s = a * b
        n_t = ra.ncols * rb.ncols
        n_u = rb.ncols * ncols_id
        rows = []
        rhs = []
        # S @ rb[:, j] - ra @ t_j == 0, one block of `a` equations per relator
        for j in range(rb.ncols):
            col = rb.col(j)
            for i in range(a):
                row = [0] * (n_s + n_t + n_u)
                for k in range(b):
                    row[i * b + k] = col[k]  # S[i, k]
                for k in range(ra.ncols):
                    row[n_s + j * ra.ncols + k] = -ra.rows[i][k]
                rows.append(row)
                rhs.append(0)
        # F @ S[:, j] - rb @ u_j == e_j for the first ncols_id generators
        for j in range(ncols_id):
            for i in range(b):
                row = [0] * (n_s + n_t + n_u)
                for k in range(a):
                    row[k * b + j] = f.matrix.rows[i][k]  # S[k, j]
                for k in range(rb.ncols):
                    row[n_s + n_t + j * rb.ncols + k] = -rb.rows[i][k]
                rows.append(row)
                rhs.append(1 if i == j else 0)
        return Matrix(rows, n_s + n_t + n_u), rhs

    system, rhs = build_system(b)
    sol = solve(system, rhs)
    if sol is not None:
        entries = [[sol[i * b + k] for k in range(b)] for i in range(a)]
        section = AbMap(f.target, f.source, Matrix(entries, b))
        composite = f.compose(section)
        if not composite.same_as(AbMap.identity(f.target)):
            raise AssertionError("section certificate failed to compose to identity")
        return SplitEpiResult(True, section, "section found", None)

    coker, proj = f.cokernel()
    if not coker.is_zero():
        for j in range(b):
            e = tuple(int(i == j) for i in range(b))
            if any(coker.reduce(e)):
                return SplitEpiResult(False, None, "not surjective", e)
    # surjective but no section; report the first generator prefix that
    # already cannot be split compatibly
    for j in range(1, b + 1):
        sys_j, rhs_j = build_system(j)
        if solve(sys_j, rhs_j) is None:
            e = tuple(int(i == j - 1) for i in range(b))
            return SplitEpiResult(False, None, "no homomorphic section", e)
    return SplitEpiResult(False, None, "no homomorphic section", None)


# -- limits over finite posets ---------------------------------------------


def finite_limit(
    nodes: Sequence,
    groups: dict,
    edge_maps: dict,
) -> tuple[AbGroup, dict]:
    """Limit of a contravariant diagram of abelian groups.

    ``edge_maps[(x, y)]`` is the map ``F_y -> F_x`` attached to the relation
    ``x <= y``; the edges must generate all relations of the index poset.
    The diagram is checked for path independence first.  The limit is the
    kernel of one stacked difference map, and comes with its projections.
    """
    nodes = list(nodes)
    _check_commutes(nodes, edge_maps)
    if not nodes:
        z = AbGroup.zero()
        return z, {}
    dsum = direct_sum([groups[x] for x in nodes])
    index = {x: i for i, x in enumerate(nodes)}
    edges = sorted(edge_maps, key=lambda e: (index[e[0]], index[e[1]]))
    targets = direct_sum([groups[x] for (x, _) in edges])
    rows: list[list[int]] = []
    for e_i, (x, y) in enumerate(edges):
        rho = edge_maps[(x, y)]
        gx = groups[x]
        for r in range(gx.ngens):
            row = [0] * dsum.group.ngens
            off_y = dsum.offsets[index[y]]
            for c in range(groups[y].ngens):
                row[off_y + c] = rho.matrix.rows[r][c]
            row[dsum.offsets[index[x]] + r] -= 1
            rows.append(row)
    diff = AbMap(
        dsum.group,
        targets.group,
        Matrix(rows, dsum.group.ngens) if rows else Matrix.zero(0, dsum.group.ngens),
        check=False,
    )
    limit, incl = diff.kernel()
    projections = {}
    for x in nodes:
        off = dsum.offsets[index[x]]
        block = Matrix(incl.matrix.rows[off : off + groups[x].ngens], incl.matrix.ncols)
        projections[x] = AbMap(limit, groups[x], block, check=False)
    return limit, projections


def _check_commutes(nodes: Sequence, edge_maps: dict) -> None:
    """All composite paths between two nodes must agree (as homomorphisms)."""
    down: dict = {}
    for (x, y), rho in edge_maps.items():
        down.setdefault(y, []).append((x, rho))

    def composites(y, x) -> list[AbMap]:
        out = []
        for (mid, rho) in down.get(y, ()):
            if mid == x:
                out.append(rho)
            out.extend(deeper.compose(rho) for deeper in composites(mid, x))
        return out

    for y in nodes:
        for x in nodes:
            if x == y:
                continue
            comps = composites(y, x)
            for other in comps[1:]:
                if not comps[0].same_as(other):
                    raise NonCommutingDiagram(
                        f"paths from {y!r} to {x!r} give different composites"
                    )


# -- cochain complexes -------------------------------------------------------


class CochainComplex:
    """A bounded complex ``C^0 -> C^1 -> ...`` with d(i+1) o d(i) = 0."""

    __slots__ = ("groups", "diffs")

    def __init__(self, groups: Sequence[AbGroup], diffs: Sequence[AbMap], check: bool = True):
        groups = tuple(groups)
        diffs = tuple(diffs)
        if len(diffs) != max(len(groups) - 1, 0):
            raise ValueError("need exactly one differential between consecutive degrees")
        if check:
            for i, d in enumerate(diffs):
                if d.source is not groups[i] or d.target is not groups[i + 1]:
                    if not (d.source.compatible_with(groups[i]) and d.target.compatible_with(groups[i + 1])):
                        raise ValueError(f"differential {i} has wrong endpoints")
            for i in range(len(diffs) - 1):
                if not diffs[i + 1].compose(diffs[i]).is_zero():
                    raise ValueError(f"d o d != 0 at degree {i}")
        object.__setattr__(self, "groups", groups)
        object.__setattr__(self, "diffs", diffs)

    def __setattr__(self, name, value):
        raise AttributeError("CochainComplex is immutable")

    def __len__(self):
        return len(self.groups)

    def cohomology_data(self, i: int) -> "CohomologyData":
        """Cohomology at degree i together with a class-of-cocycle reducer.

        Degrees outside the support return the zero group: complexes are
        zero there.
        """
        if i < 0 or i >= len(self.groups):
            z = AbGroup.zero()
            return CohomologyData(z, Matrix.zero(0, 0), z)
        ci = self.groups[i]
        if i + 1 < len(self.groups):
            d_i = self.diffs[i]
            cocycles = preimage_lattice(d_i.matrix, self.groups[i + 1].relations)
        else:
            cocycles = Matrix.identity(ci.ngens)
        boundary_cols = ci.relations
        if i > 0:
            boundary_cols = boundary_cols.hstack(self.diffs[i - 1].matrix)
        coords = solve_matrix(cocycles, boundary_cols)
        if coords is None:
            raise AssertionError("boundaries escaped the cocycle lattice")
        return CohomologyData(AbGroup(cocycles.ncols, coords), cocycles, ci)

    def cohomology(self, i: int) -> AbGroup:
        return self.cohomology_data(i).group


@dataclass(frozen=True)
class CohomologyData:
    """Canonical cohomology group plus coordinates for cocycle classes."""

    group: AbGroup
    cocycle_basis: Matrix
    chain_group: AbGroup

    def class_of(self, cocycle: Sequence[int]) -> tuple[int, ...]:
        """Canonical coordinates of the class of a cocycle vector."""
        z = solve(self.cocycle_basis, cocycle)
        if z is None:
            raise ValueError("vector is not a cocycle")
        return self.group.reduce(z)
