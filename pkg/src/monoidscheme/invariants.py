"""The headline invariants: Picard groups, higher unit cohomology, vector
bundle cocycles and their decomposition into line bundles, s-divisor and
Cartier class groups, s-smoothness, and the monoid-algebra exporter.

Vector bundles of rank n are handled through their transition data: for
each pair of charts an element of (units of the overlap)^n x| Sigma_n.
Over a connected separated scheme the symmetric-group part of a cocycle
always trivializes (the constant sheaf has no H^1 there), after which the
cocycle is diagonal and splits into n unit-valued line cocycles whose
classes in Pic are the decomposition.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional, Sequence

from .abgroup import AbGroup, AbMap
from .errors import (
    CocycleInvalid,
    ConsistencyError,
    NotConnected,
    NotSCancellative,
    NotSeparated,
    RequiresCancellative,
)
from .intmat import Matrix, solve_matrix
from .monoid import MonoidPresentation, grothendieck_group
from .scheme import Scheme
from .sheaf import AbSheaf, cech_data, cohomology, is_s_flasque, SFlasqueResult


def pic(x: Scheme) -> AbGroup:
    """The Picard group H^1(X, O*_X)."""
    return unit_cohomology(x, 1)


def unit_cohomology(x: Scheme, degree: int) -> AbGroup:
    return cohomology(x.units_sheaf(), degree)


# -- s-divisors --------------------------------------------------------------------


def s_quotient_sheaf(x: Scheme) -> AbSheaf:
    """The quotient of the constant semi-meromorphic unit sheaf by O*_X.

    Defined (by the construction this package follows) only over
    s-cancellative connected schemes, where the semi-meromorphic units form
    the constant sheaf on the Grothendieck group G of the generic stalk;
    the stalk at x is G modulo the image of the units of O_x.
    """
    holds, witness = x.is_s_cancellative()
    if not holds:
        raise NotSCancellative(f"unit map not injective at covering pair {witness[:2]}")
    if not x.is_connected():
        raise NotConnected("the quotient sheaf needs a connected scheme")
    least = x.least_point()
    if least is None:
        raise NotConnected("no generic point: the scheme has no least element")
    g = grothendieck_group(x.stalks[least])
    ugroups, _ = x.units_data()
    stalks = {}
    for p in x.poset.points:
        hom = x.hom_down(least, p)
        cols = []
        for i in ugroups[p].gen_indices:
            e = [0] * len(x.stalks[p].gens)
            e[i] = 1
            cols.append(hom.apply(e))
        stalks[p] = AbGroup(
            g.ngens,
            g.relations.hstack(Matrix.from_cols(cols, g.ngens)),
            labels=g.labels,
        )
    cov = {
        (a, b): AbMap(stalks[b], stalks[a], Matrix.identity(g.ngens), check=True)
        for a, b in x.poset.covers()
    }
    return AbSheaf(x.poset, stalks, cov, check=False, name="sM*/O*")


def s_divisor_group(x: Scheme) -> tuple[AbGroup, AbMap]:
    """(Div(X), principal map G -> Div(X)) for an s-cancellative connected
    separated scheme."""
    if not x.separated:
        raise NotSeparated("divisors need the separatedness certificate")
    q = s_quotient_sheaf(x)
    least = x.least_point()
    g = grothendieck_group(x.stalks[least])
    div, projs = q.sections(x.poset.points)
    incl_rows: list[Sequence[int]] = []
    for p in x.poset.points:
        incl_rows.extend(projs[p].matrix.rows)
    incl = Matrix(incl_rows, div.ngens)
    cols = []
    for j in range(g.ngens):
        e = [int(i == j) for i in range(g.ngens)]
        cols.append(e * len(x.poset.points))
    sol = solve_matrix(incl, Matrix.from_cols(cols, len(incl_rows)))
    if sol is None:
        raise AssertionError("global classes failed to assemble into sections")
    principal = AbMap(g, div, sol)
    return div, principal


def s_class_group(x: Scheme) -> AbGroup:
    """sCl(X): sections of the quotient sheaf modulo principal divisors.

    Isomorphic to Pic(X) over s-cancellative schemes; the isomorphism is
    asserted and a mismatch raises ConsistencyError.
    """
    div, principal = s_divisor_group(x)
    cls, _ = principal.cokernel()
    p = pic(x)
    if cls.canonical() != p.canonical():
        raise ConsistencyError(f"sCl(X) = {cls} disagrees with Pic(X) = {p}")
    return cls


@dataclass(frozen=True)
class CartierClassGroup:
    group: AbGroup
    cancellativity_bound: int


def cartier_class_group(x: Scheme, bound: int = 4) -> CartierClassGroup:
    """CaCl(X) on a cancellative scheme, where the Cartier and s-divisor
    machineries coincide; cancellativity is bound-verified stalkwise and
    the bound is recorded."""
    verdict = x.is_cancellative(bound)
    if not verdict:
        raise RequiresCancellative(
            f"stalk counterexample to cancellativity: {verdict.witness}"
        )
    return CartierClassGroup(s_class_group(x), bound)


# -- s-smoothness -------------------------------------------------------------------


def is_s_smooth(x: Scheme) -> SFlasqueResult:
    """Is the s-divisor quotient sheaf s-flasque?  Returns the collection
    on success and the failing point otherwise."""
    return is_s_flasque(s_quotient_sheaf(x))


@dataclass(frozen=True)
class VanishingReport:
    groups: dict  # degree -> AbGroup for 2 <= degree <= dim
    s_smooth: Optional[bool]
    violations: tuple

    def ok(self) -> bool:
        return not self.violations


def vanishing_check(x: Scheme) -> VanishingReport:
    """Unit cohomology in degrees 2..dim, flagged against the s-smooth
    vanishing theorem."""
    groups = {
        i: unit_cohomology(x, i) for i in range(2, x.dimension() + 1)
    }
    try:
        smooth = bool(is_s_smooth(x))
    except (NotSCancellative, NotConnected):
        smooth = None
    violations = tuple(
        i for i, g in groups.items() if smooth and not g.is_zero()
    )
    return VanishingReport(groups, smooth, violations)


# -- vector bundle cocycles ------------------------------------------------------------


Perm = tuple  # sigma as a tuple: sigma[k] is the image of k


def perm_mul(sigma: Perm, tau: Perm) -> Perm:
    return tuple(sigma[tau[k]] for k in range(len(sigma)))


def perm_inv(sigma: Perm) -> Perm:
    out = [0] * len(sigma)
    for k, v in enumerate(sigma):
        out[v] = k
    return tuple(out)


@dataclass(frozen=True)
class SemidirectElement:
    """An element (u, sigma) of (units)^n x| Sigma_n over one overlap.

    The unit entries are coordinate vectors in the unit group of the
    overlap's stalk.  Multiplication matches composition of the
    automorphisms of a free module of rank n:
    (u, sigma) (v, tau) = ((u_{tau(k)} + v_k)_k, sigma tau).
    """

    units: tuple[tuple[int, ...], ...]
    perm: Perm

    def __mul__(self, other: "SemidirectElement") -> "SemidirectElement":
        tau = other.perm
        mixed = tuple(
            tuple(a + b for a, b in zip(self.units[tau[k]], other.units[k]))
            for k in range(len(tau))
        )
        return SemidirectElement(mixed, perm_mul(self.perm, tau))

    def inverse(self) -> "SemidirectElement":
        inv = perm_inv(self.perm)
        return SemidirectElement(
            tuple(
                tuple(-a for a in self.units[inv[k]]) for k in range(len(inv))
            ),
            inv,
        )

    @staticmethod
    def identity(rank: int, ngens: int) -> "SemidirectElement":
        return SemidirectElement(
            tuple(tuple([0] * ngens) for _ in range(rank)),
            tuple(range(rank)),
        )


class BundleCocycle:
    """Rank-n transition data over the cover by maximal-point charts.

    ``transitions[(i, j)]`` for chart indices i < j is a SemidirectElement
    over the stalk at the meet of the two chart tops, in the coordinates of
    that stalk's unit group.  g_ii = 1 and g_ji = g_ij^{-1} are implied;
    the triple cocycle condition is checked on construction.
    """

    def __init__(self, scheme: Scheme, rank: int, transitions: dict, check: bool = True):
        self.scheme = scheme
        self.rank = rank
        self.charts = scheme.charts()
        self.transitions = {}
        ugroups, sheaf = scheme.units_data()
        self._sheaf = sheaf
        self._meets = {}
        for i, j in itertools.combinations(range(len(self.charts)), 2):
            nonempty, meet = scheme.poset.meet_of([self.charts[i], self.charts[j]])
            if nonempty and meet is None:
                raise NotSeparated("pairwise chart intersection is not affine")
            self._meets[(i, j)] = meet if nonempty else None
            if meet is None:
                continue
            if (i, j) not in transitions:
                raise CocycleInvalid(f"missing transition for chart pair {(i, j)}")
            value = transitions[(i, j)]
            if not isinstance(value, SemidirectElement):
                value = SemidirectElement(tuple(map(tuple, value[0])), tuple(value[1]))
            expected = sheaf.stalks[meet].ngens
            if len(value.units) != rank or any(len(u) != expected for u in value.units):
                raise CocycleInvalid("transition units have the wrong shape")
            if sorted(value.perm) != list(range(rank)):
                raise CocycleInvalid("transition permutation is not a permutation")
            self.transitions[(i, j)] = value
        if check:
            self._check_cocycle()

    def g(self, i: int, j: int) -> SemidirectElement:
        if i == j:
            return SemidirectElement.identity(self.rank, 0)
        if i < j:
            return self.transitions[(i, j)]
        return self.transitions[(j, i)].inverse()

    def _restrict(self, value: SemidirectElement, src_point, dst_point) -> SemidirectElement:
        rho = self._sheaf.restriction(dst_point, src_point)
        return SemidirectElement(
            tuple(tuple(rho(u)) for u in value.units), value.perm
        )

    def _check_cocycle(self):
        poset = self.scheme.poset
        for i, j, k in itertools.combinations(range(len(self.charts)), 3):
            nonempty, triple = poset.meet_of(
                [self.charts[i], self.charts[j], self.charts[k]]
            )
            if not nonempty:
                continue
            if triple is None:
                raise NotSeparated("triple chart intersection is not affine")
            group = self._sheaf.stalks[triple]
            gij = self._restrict(self.g(i, j), self._meets[(i, j)], triple)
            gjk = self._restrict(self.g(j, k), self._meets[(j, k)], triple)
            gik = self._restrict(self.g(i, k), self._meets[(i, k)], triple)
            prod = gij * gjk
            if prod.perm != gik.perm or any(
                group.reduce(a) != group.reduce(b)
                for a, b in zip(prod.units, gik.units)
            ):
                raise CocycleInvalid(
                    f"cocycle condition fails on charts {(i, j, k)}"
                )

    def conjugate(self, cochain: Sequence[SemidirectElement]) -> "BundleCocycle":
        """The cohomologous cocycle c_i^{-1} g_ij c_j for a 0-cochain with
        values over the whole charts (units of the chart stalks)."""
        new = {}
        for (i, j), value in self.transitions.items():
            meet = self._meets[(i, j)]
            ci = self._restrict_cochain(cochain[i], i, meet)
            cj = self._restrict_cochain(cochain[j], j, meet)
            new[(i, j)] = ci.inverse() * value * cj
        return BundleCocycle(self.scheme, self.rank, new, check=False)

    def _restrict_cochain(self, c: SemidirectElement, chart_idx: int, meet) -> SemidirectElement:
        top = self.charts[chart_idx]
        rho = self._sheaf.restriction(meet, top)
        return SemidirectElement(tuple(tuple(rho(u)) for u in c.units), c.perm)


@dataclass(frozen=True)
class Decomposition:
    """Result of splitting a bundle cocycle into line classes."""

    classes: tuple[tuple[int, ...], ...]  # sorted canonical Pic coordinates
    trivializing_cochain: tuple[SemidirectElement, ...]
    diagonal: "BundleCocycle"


def decompose_bundle(cocycle: BundleCocycle) -> Decomposition:
    """Split a rank-n cocycle into n line-bundle classes in Pic(X).

    (1) project to the symmetric part; (2) trivialize it by the 0-cochain
    read off a spanning tree of the cover rooted at the first chart (the
    constant sheaf has trivial H^1 on a connected separated scheme);
    (3) conjugate, leaving a diagonal cocycle of n unit-valued line
    cocycles; (4) canonicalize each class in the degree-1 covering
    cohomology.  Conjugating the diagonal back with the recorded cochain
    returns the input exactly, which is the coboundary certificate.
    """
    x = cocycle.scheme
    if not x.is_connected():
        raise NotConnected("bundle decomposition needs a connected scheme")
    if not x.separated:
        raise NotSeparated("bundle decomposition needs the separatedness certificate")
    n = cocycle.rank
    ugroups, sheaf = x.units_data()
    charts = cocycle.charts
    taus = []
    for i in range(len(charts)):
        taus.append(cocycle.g(0, i).perm if i else tuple(range(n)))
    cochain = tuple(
        SemidirectElement(
            tuple(tuple([0] * sheaf.stalks[charts[i]].ngens) for _ in range(n)),
            taus[i],
        )
        for i in range(len(charts))
    )
    diagonal = cocycle.conjugate(cochain)
    for (i, j), value in diagonal.transitions.items():
        if value.perm != tuple(range(n)):
            raise AssertionError("symmetric part failed to trivialize")

    data = cech_data(sheaf)
    classifier = data.complex.cohomology_data(1)
    pairs = [combo for combo, meet in data.levels[1]]
    sums = data.sums[1]
    classes = []
    for k in range(n):
        vec = [0] * classifier.chain_group.ngens
        for b, (combo, meet) in enumerate(data.levels[1]):
            if meet is None:
                continue
            i, j = combo
            value = diagonal.transitions[(i, j)].units[k]
            off = sums.offsets[b]
            for t, a in enumerate(value):
                vec[off + t] = a
        classes.append(classifier.class_of(vec))
    return Decomposition(tuple(sorted(classes)), cochain, diagonal)


def line_class(cocycle: BundleCocycle) -> tuple[int, ...]:
    """The Pic class of a rank-1 cocycle."""
    return decompose_bundle(cocycle).classes[0]


# -- export to ring land ------------------------------------------------------------


def export_algebra(m: MonoidPresentation) -> str:
    """Binomial-ideal presentation of the monoid algebra k[M].

    One polynomial variable per generator, an inverse variable with the
    relation g*g_inv - 1 for each inverted generator, and one binomial
    lhs - rhs per relation.  Deterministic and stable across runs.
    """
    variables = list(m.gens)
    for g in sorted(m.inverted, key=list(m.gens).index):
        variables.append(f"{g}_inv")

    def monomial(vec: Sequence[int]) -> str:
        parts = []
        for g, e in zip(m.gens, vec):
            if e == 0:
                continue
            name = g if e > 0 else f"{g}_inv"
            k = abs(e)
            parts.append(name if k == 1 else f"{name}^{k}")
        return "*".join(parts) if parts else "1"

    lines = [f"ring k[{','.join(variables)}]"]
    for l, r in m.relations:
        lines.append(f"{monomial(l)} - {monomial(r)}")
    for g in sorted(m.inverted, key=list(m.gens).index):
        lines.append(f"{g}*{g}_inv - 1")
    return "\n".join(lines) + "\n"
