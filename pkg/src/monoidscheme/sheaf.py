"""Abelian-group-valued sheaves on finite posets and their cohomology.

A sheaf is the same thing as a contravariant functor on the poset: one
abelian group per point and a restriction map F_y -> F_x for every
covering pair x < y, functorial along chains.  Sections over an open
(down-closed) set are the limit of the stalk diagram.

Two cochain models are implemented and cross-checked:

* the normalized order complex over strict descending chains, which works
  on every poset (degree n holds one copy of the stalk at the chain's
  smallest point, and the face dropping that point composes with the
  restriction);
* the reduced covering complex over meets of the maximal points, defined
  when every pairwise down-set intersection has at most one maximal point.

The s-flasque test follows the inductive structure of "generated by a
collection": ascending by height it splits F_x -> sections below x; the
kernels form the collection, and the splittings assemble into an explicit
isomorphism with the generated functor.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional, Sequence

from .abgroup import (
    AbGroup,
    AbMap,
    CochainComplex,
    SplitEpiResult,
    direct_sum,
    finite_limit,
    is_split_epi,
)
from .errors import ConsistencyError, ModelDisagreement, NotSeparatedPoset
from .intmat import Matrix, solve_matrix
from .poset import FinitePoset


class AbSheaf:
    """Contravariant functor on a finite poset, given on covering pairs."""

    __slots__ = ("base", "stalks", "_cov", "_res_cache", "name")

    def __init__(self, base: FinitePoset, stalks: dict, cov_maps: dict, check: bool = True, name: str = ""):
        self.base = base
        self.stalks = {p: stalks[p] for p in base.points}
        self._cov = dict(cov_maps)
        self._res_cache = {}
        self.name = name
        for x, y in base.covers():
            if (x, y) not in self._cov:
                raise ValueError(f"missing restriction for covering pair {x!r} < {y!r}")
        if check:
            self._check_functorial()

    def restriction(self, x, y) -> AbMap:
        """The map F_y -> F_x for x <= y, composed along covering chains."""
        if x == y:
            return AbMap.identity(self.stalks[x])
        key = (x, y)
        if key in self._res_cache:
            return self._res_cache[key]
        if not self.base.lt(x, y):
            raise ValueError(f"{x!r} is not below {y!r}")
        # any covering step below y with x underneath gives the same composite
        for c, yy in self.base.covers():
            if yy == y and self.base.leq(x, c):
                rho = self.restriction(x, c).compose(self._cov[(c, y)])
                self._res_cache[key] = rho
                return rho
        raise AssertionError("no covering path found in a finite poset")

    def _check_functorial(self):
        for y in self.base.points:
            for x in self.base.points:
                if not self.base.lt(x, y):
                    continue
                composites = [
                    self.restriction(x, c).compose(self._cov[(c, y)])
                    for c, yy in self.base.covers()
                    if yy == y and self.base.leq(x, c)
                ]
                for other in composites[1:]:
                    if not composites[0].same_as(other):
                        raise ConsistencyError(
                            f"restrictions not functorial between {x!r} and {y!r}"
                        )

    def sections(self, opens: Sequence) -> tuple[AbGroup, dict]:
        """F(U) = lim over the open set U, with its projections."""
        u = self.base.require_open(opens)
        sub = self.base.induced(u)
        edges = {
            (x, y): self.restriction(x, y) for x, y in sub.covers()
        }
        return finite_limit(u, {p: self.stalks[p] for p in u}, edges)

    def global_sections(self) -> AbGroup:
        return self.sections(self.base.points)[0]

    def section_map(self, small: Sequence, large: Sequence) -> AbMap:
        """The restriction F(V) -> F(U) for opens U inside V."""
        small = self.base.require_open(small)
        large = self.base.require_open(large)
        if not set(small) <= set(large):
            raise ValueError("first open must be contained in the second")
        gv, projs_v = self.sections(large)
        gu, projs_u = self.sections(small)
        # the map into the limit F(U) determined by the projections of F(V)
        if not small:
            return AbMap.zero(gv, gu)
        stacked_cols = []
        for j in range(gv.ngens):
            e = tuple(int(i == j) for i in range(gv.ngens))
            col = []
            for p in small:
                col.extend(projs_v[p](e))
            stacked_cols.append(col)
        # solve through the inclusion of F(U) into the product of stalks
        incl_rows = []
        for p in small:
            incl_rows.extend(projs_u[p].matrix.rows)
        incl = Matrix(incl_rows, gu.ngens)
        sol = solve_matrix(incl, Matrix.from_cols(stacked_cols, len(incl_rows)))
        if sol is None:
            raise AssertionError("restriction of sections failed to factor")
        return AbMap(gv, gu, sol)


# -- constructors ---------------------------------------------------------------


def constant_sheaf(base: FinitePoset, fibre: AbGroup, name: str = "") -> AbSheaf:
    stalks = {p: fibre for p in base.points}
    cov = {(x, y): AbMap.identity(fibre) for x, y in base.covers()}
    return AbSheaf(base, stalks, cov, check=False, name=name)

def skyscraper(base: FinitePoset, point, fibre: AbGroup, name: str = "") -> AbSheaf:
    zero = AbGroup.zero()
    stalks = {p: (fibre if p == point else zero) for p in base.points}
    cov = {
        (x, y): AbMap.zero(stalks[y], stalks[x]) for x, y in base.covers()
    }
    return AbSheaf(base, stalks, cov, check=False, name=name)


def product_sheaf(f: AbSheaf, g: AbSheaf) -> AbSheaf:
    """The external product on the product poset: stalkwise direct sums."""
    base = f.base.product(g.base)
    stalks = {}
    sums = {}
    for (p, q) in base.points:
        ds = direct_sum([f.stalks[p], g.stalks[q]])
        sums[(p, q)] = ds
        stalks[(p, q)] = ds.group
    cov = {}
    for (x, y) in base.covers():
        (p1, q1), (p2, q2) = x, y
        rho_f = f.restriction(p1, p2) if p1 != p2 else AbMap.identity(f.stalks[p1])
        rho_g = g.restriction(q1, q2) if q1 != q2 else AbMap.identity(g.stalks[q1])
        rows = []
        for r in rho_f.matrix.rows:
            rows.append(tuple(r) + (0,) * rho_g.matrix.ncols)
        for r in rho_g.matrix.rows:
            rows.append((0,) * rho_f.matrix.ncols + tuple(r))
        cov[(x, y)] = AbMap(
            stalks[y], stalks[x], Matrix(rows, stalks[y].ngens), check=False
        )
    return AbSheaf(base, stalks, cov, check=False)


def generated_functor(base: FinitePoset, collection: dict) -> AbSheaf:
    """The functor with A_x the product of the collection below x and
    projections as restrictions."""
    sums = {}
    stalks = {}
    for p in base.points:
        below = [q for q in base.points if base.leq(q, p)]
        ds = direct_sum([collection[q] for q in below])
        sums[p] = (below, ds)
        stalks[p] = ds.group
    cov = {}
    for (x, y) in base.covers():
        below_x, ds_x = sums[x]
        below_y, ds_y = sums[y]
        rows = []
        for q in below_x:
            k = below_y.index(q)
            for r in range(collection[q].ngens):
                row = [0] * ds_y.group.ngens
                row[ds_y.offsets[k] + r] = 1
                rows.append(row)
        cov[(x, y)] = AbMap(
            stalks[y], stalks[x], Matrix(rows, stalks[y].ngens), check=False
        )
    return AbSheaf(base, stalks, cov, check=False)


# -- the two cochain models -------------------------------------------------------


def order_cochain(f: AbSheaf) -> CochainComplex:
    """Normalized complex over strict descending chains.

    Degree n collects one copy of F at the smallest point of each chain
    y_0 > ... > y_n; faces drop a point, and the last face composes with
    the restriction F_{y_{n-1}} -> F_{y_n}.
    """
    base = f.base
    points = list(base.points)
    chains: list[list[tuple]] = [[(p,) for p in points]]
    while True:
        nxt = [
            c + (z,)
            for c in chains[-1]
            for z in points
            if base.lt(z, c[-1])
        ]
        if not nxt:
            break
        chains.append(nxt)
    groups = []
    sums = []
    for level in chains:
        ds = direct_sum([f.stalks[c[-1]] for c in level])
        sums.append(ds)
        groups.append(ds.group)
    diffs = []
    for n in range(len(chains) - 1):
        src, tgt = sums[n], sums[n + 1]
        src_index = {c: k for k, c in enumerate(chains[n])}
        rows: list[list[int]] = [
            [0] * src.group.ngens for _ in range(tgt.group.ngens)
        ]
        for t_k, c in enumerate(chains[n + 1]):
            t_off = tgt.offsets[t_k]
            for i in range(len(c)):
                sub = c[:i] + c[i + 1 :]
                s_k = src_index[sub]
                s_off = src.offsets[s_k]
                sign = -1 if i % 2 else 1
                if i < len(c) - 1:
                    # value stays at the same smallest point
                    for r in range(f.stalks[c[-1]].ngens):
                        rows[t_off + r][s_off + r] += sign
                else:
                    rho = f.restriction(c[-1], c[-2])
                    for r in range(rho.matrix.nrows):
                        for s in range(rho.matrix.ncols):
                            rows[t_off + r][s_off + s] += sign * rho.matrix.rows[r][s]
        diffs.append(
            AbMap(src.group, tgt.group, Matrix(rows, src.group.ngens), check=False)
        )
    return CochainComplex(groups, diffs)


def separated_certificate(base: FinitePoset) -> bool:
    """Every pairwise intersection of maximal down-sets is empty or has a
    unique maximal point."""
    for m1, m2 in itertools.combinations(base.maximal_points(), 2):
        nonempty, meet = base.meet_of([m1, m2])
        if nonempty and meet is None:
            return False
    return True


@dataclass(frozen=True)
class CechData:
    """Reduced covering complex with its indexing: levels[p] lists the
    (p+1)-tuples of chart indices with the meet point (None if empty), and
    sums[p] gives the block offsets inside the degree-p group."""

    complex: CochainComplex
    maximal: tuple
    levels: tuple
    sums: tuple


def reduced_cech(f: AbSheaf) -> CochainComplex:
    return cech_data(f).complex


def cech_data(f: AbSheaf) -> CechData:
    """The covering complex over meets of the maximal points.

    Tuples with empty intersection contribute the zero group; a nonempty
    intersection with two maximal points raises NotSeparatedPoset.
    """
    base = f.base
    maximal = base.maximal_points()
    k = len(maximal)
    zero = AbGroup.zero()
    levels: list[list[tuple[tuple, Optional[object]]]] = []
    for p in range(k):
        level = []
        for combo in itertools.combinations(range(k), p + 1):
            nonempty, meet = base.meet_of([maximal[i] for i in combo])
            if nonempty and meet is None:
                raise NotSeparatedPoset(
                    f"charts {[maximal[i] for i in combo]!r} meet in two maximal points"
                )
            level.append((combo, meet if nonempty else None))
        levels.append(level)
    groups = []
    sums = []
    for level in levels:
        ds = direct_sum([f.stalks[m] if m is not None else zero for _, m in level])
        sums.append(ds)
        groups.append(ds.group)
    diffs = []
    for p in range(len(levels) - 1):
        src, tgt = sums[p], sums[p + 1]
        src_index = {combo: i for i, (combo, _) in enumerate(levels[p])}
        rows = [[0] * src.group.ngens for _ in range(tgt.group.ngens)]
        for t_i, (combo, meet) in enumerate(levels[p + 1]):
            if meet is None:
                continue
            t_off = tgt.offsets[t_i]
            for j in range(len(combo)):
                sub = combo[:j] + combo[j + 1 :]
                s_i = src_index[sub]
                sub_meet = levels[p][s_i][1]
                if sub_meet is None:
                    continue
                rho = f.restriction(meet, sub_meet)
                sign = -1 if j % 2 else 1
                s_off = src.offsets[s_i]
                for r in range(rho.matrix.nrows):
                    for s in range(rho.matrix.ncols):
                        rows[t_off + r][s_off + s] += sign * rho.matrix.rows[r][s]
        diffs.append(
            AbMap(src.group, tgt.group, Matrix(rows, src.group.ngens), check=False)
        )
    return CechData(CochainComplex(groups, diffs), tuple(maximal), tuple(map(tuple, levels)), tuple(sums))


def cohomology(f: AbSheaf, degree: int, crosscheck: bool = True) -> AbGroup:
    """Sheaf cohomology from the order complex.

    When the base is connected and carries the separatedness certificate,
    the reduced covering model is computed as well and must agree.
    """
    result = order_cochain(f).cohomology(degree)
    if crosscheck and f.base.is_connected() and separated_certificate(f.base):
        other = reduced_cech(f).cohomology(degree)
        if result.canonical() != other.canonical():
            raise ModelDisagreement(
                f"H^{degree}: order model {result} vs covering model {other}"
            )
    return result


# -- s-flasque sheaves --------------------------------------------------------------


@dataclass(frozen=True)
class SFlasqueResult:
    flasque: bool
    collection: Optional[dict]  # point -> AbGroup (the A^e family)
    theta: Optional[dict]  # point -> AbMap from F_x onto the generated functor
    failure: Optional[tuple] = None  # (point, non-split AbMap)

    def __bool__(self):
        return self.flasque


def is_s_flasque(f: AbSheaf) -> SFlasqueResult:
    """Decide whether F is generated by a collection of per-point groups.

    Ascending by height, split F_x -> F({y < x}); the kernels form the
    collection and the splittings give kappa_x expressing the complement.
    theta_x stacks kappa_y o res(y, x) over y <= x and is checked to be an
    isomorphism onto the generated functor's stalk.
    """
    base = f.base
    order = sorted(base.points, key=lambda p: (base.height(p), base.points.index(p)))
    collection: dict = {}
    kappas: dict = {}
    for x in order:
        below = base.strict_down_set(x)
        limit, projs = f.sections(below)
        stalk = f.stalks[x]
        cols = []
        for j in range(stalk.ngens):
            e = tuple(int(i == j) for i in range(stalk.ngens))
            col: list[int] = []
            for p in below:
                col.extend(f.restriction(p, x)(e))
            cols.append(col)
        incl_rows: list[Sequence[int]] = []
        for p in below:
            incl_rows.extend(projs[p].matrix.rows)
        incl = Matrix(incl_rows, limit.ngens) if below else Matrix.zero(0, limit.ngens)
        fx_matrix = solve_matrix(incl, Matrix.from_cols(cols, len(incl_rows)))
        if fx_matrix is None:
            raise AssertionError("stalk restrictions failed to factor through the limit")
        fx = AbMap(stalk, limit, fx_matrix, check=False)
        split = is_split_epi(fx)
        if not split:
            return SFlasqueResult(False, None, None, (x, fx))
        ker, incl_k = fx.kernel()
        collection[x] = ker
        # kappa: v |-> coordinates of v - s(f(v)) in the kernel basis
        comp = split.section.compose(fx)
        diff_cols = []
        for j in range(stalk.ngens):
            e = [int(i == j) for i in range(stalk.ngens)]
            w = [a - b for a, b in zip(e, comp.matrix.col(j))]
            diff_cols.append(w)
        coords = solve_matrix(incl_k.matrix, Matrix.from_cols(diff_cols, stalk.ngens))
        if coords is None:
            raise AssertionError("complement did not land in the kernel lattice")
        kappas[x] = AbMap(stalk, ker, coords, check=False)
    gen = generated_functor(base, collection)
    theta = {}
    for x in base.points:
        below = [q for q in base.points if base.leq(q, x)]
        rows: list[Sequence[int]] = []
        for q in below:
            block = kappas[q].compose(f.restriction(q, x))
            rows.extend(block.matrix.rows)
        theta_x = AbMap(
            f.stalks[x], gen.stalks[x], Matrix(rows, f.stalks[x].ngens), check=False
        )
        if not theta_x.kernel()[0].is_zero() or not theta_x.cokernel()[0].is_zero():
            raise ConsistencyError(
                "assembled comparison with the generated functor is not an isomorphism"
            )
        theta[x] = theta_x
    return SFlasqueResult(True, collection, theta)
