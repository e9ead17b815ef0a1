"""Monoid schemes of finite type: finite posets with monoid-valued stalks.

A scheme is stored point-expanded: the full prime poset, one localized
presentation per point, and the canonical costalk homomorphism
O_y -> O_x for every covering pair x < y.  Affine schemes come from
:func:`spec`; general ones from :func:`glue`, which identifies chart
points by transporting prime characters along the overlap embeddings
(ambiguities are errors, never resolved heuristically), or from
:func:`product` and :func:`projective_space`.
"""

from __future__ import annotations

import itertools
from typing import Optional, Sequence

from .abgroup import AbMap
from .errors import ConsistencyError, InconsistentGluing, NotSeparated
from .intmat import Matrix
from .monoid import (
    Localization,
    MonoidHom,
    MonoidPresentation,
    PrimeIdeal,
    complete,
    localize,
    primes,
    product_monoid,
    units,
)
from .poset import FinitePoset
from .sheaf import AbSheaf, separated_certificate


class Scheme:
    """A monoid scheme with integer points, display labels, stalks and
    costalk maps on covering pairs."""

    def __init__(self, poset: FinitePoset, labels, stalks, costalks, check: bool = True):
        self.poset = poset
        self.labels = tuple(labels)
        self.stalks = {p: stalks[p] for p in poset.points}
        self.costalks = dict(costalks)
        self._hom_cache: dict = {}
        self._units_cache = None
        self.separated = separated_certificate(poset)
        if check:
            self._check_functorial()

    def label(self, point) -> str:
        return self.labels[self.poset.points.index(point)]

    def stalk(self, point) -> MonoidPresentation:
        return self.stalks[point]

    def hom_down(self, x, y) -> MonoidHom:
        """The composite costalk map O_y -> O_x for x <= y."""
        if x == y:
            return MonoidHom.identity(self.stalks[x])
        key = (x, y)
        if key in self._hom_cache:
            return self._hom_cache[key]
        for c, yy in self.poset.covers():
            if yy == y and self.poset.leq(x, c):
                hom = self.hom_down(x, c).compose(self.costalks[(c, y)])
                self._hom_cache[key] = hom
                return hom
        raise AssertionError("no covering path in a finite poset")

    def _check_functorial(self):
        for y in self.poset.points:
            for x in self.poset.points:
                if not self.poset.lt(x, y):
                    continue
                composites = [
                    self.hom_down(x, c).compose(self.costalks[(c, y)])
                    for c, yy in self.poset.covers()
                    if yy == y and self.poset.leq(x, c)
                ]
                rs = complete(self.stalks[x])
                first = composites[0]
                for other in composites[1:]:
                    for a, b in zip(first.images, other.images):
                        if rs.normal_form(a) != rs.normal_form(b):
                            raise ConsistencyError(
                                f"costalk maps not functorial between {x!r} and {y!r}"
                            )

    # -- derived structure -----------------------------------------------------

    def dimension(self) -> int:
        return self.poset.dim()

    def is_connected(self) -> bool:
        return self.poset.is_connected()

    def least_point(self):
        return self.poset.least()

    def charts(self) -> list:
        """The affine charts: down-sets of the maximal points."""
        return self.poset.maximal_points()

    def units_data(self):
        """Unit groups of all stalks and the sheaf O*_X they assemble into."""
        if self._units_cache is not None:
            return self._units_cache
        ugroups = {p: units(self.stalks[p]) for p in self.poset.points}
        cov = {}
        for x, y in self.poset.covers():
            hom = self.costalks[(x, y)]
            uy, ux = ugroups[y], ugroups[x]
            cols = []
            for i in uy.gen_indices:
                e = [0] * len(self.stalks[y].gens)
                e[i] = 1
                cols.append(ux.express(hom.apply(e)))
            cov[(x, y)] = AbMap(
                uy.group, ux.group, Matrix.from_cols(cols, ux.group.ngens)
            )
        sheaf = AbSheaf(
            self.poset,
            {p: ugroups[p].group for p in self.poset.points},
            cov,
            name="O*_X",
        )
        self._units_cache = (ugroups, sheaf)
        return self._units_cache

    def units_sheaf(self) -> AbSheaf:
        return self.units_data()[1]

    # -- predicates -------------------------------------------------------------

    def is_cancellative(self, bound: int = 4):
        from .decisions import is_cancellative

        for p in self.poset.points:
            verdict = is_cancellative(self.stalks[p], bound)
            if not verdict:
                return verdict
        return verdict

    def is_s_cancellative(self):
        """Exact: injectivity of every covering unit-restriction map."""
        _, sheaf = self.units_data()
        for x, y in self.poset.covers():
            rho = sheaf._cov[(x, y)]
            ker, incl = rho.kernel()
            if not ker.is_zero():
                j = next(
                    j
                    for j in range(ker.ngens)
                    if any(ker.reduce(tuple(int(i == j) for i in range(ker.ngens))))
                )
                return False, (x, y, incl.matrix.col(j))
        return True, None

    def is_smooth(self, bound: int = 4) -> bool:
        from .decisions import is_smooth_monoid

        return all(
            bool(is_smooth_monoid(self.stalks[m], bound)) for m in self.charts()
        )

    def is_torsion_free(self, bound: int = 4) -> bool:
        from .decisions import is_torsion_free

        return all(
            bool(is_torsion_free(self.stalks[p], bound)) for p in self.poset.points
        )

    def __repr__(self):
        return (
            f"<scheme: {len(self.poset.points)} points, dim {self.dimension()},"
            f" {'separated' if self.separated else 'unseparated'}>"
        )


# -- affine schemes ---------------------------------------------------------------


def spec(m: MonoidPresentation) -> Scheme:
    """Spec of a monoid: primes ordered by inclusion, stalks the
    localizations, costalk maps the canonical ones."""
    prs = primes(m)
    n = len(prs)
    locs = [localize(m, p) for p in prs]
    leq_pairs = [
        (i, j) for i in range(n) for j in range(n) if prs[i].issubset(prs[j])
    ]
    poset = FinitePoset(range(n), leq_pairs)
    stalks = {i: locs[i].presentation for i in range(n)}
    costalks = {}
    for x, y in poset.covers():
        images = []
        for g in stalks[y].gens:
            e = [0] * len(m.gens)
            e[m.gens.index(g)] = 1
            images.append(locs[x].send(e))
        costalks[(x, y)] = MonoidHom(stalks[y], stalks[x], images, check=False)
    scheme = Scheme(poset, [str(p) for p in prs], stalks, costalks)
    scheme.primes = prs
    scheme.monoid = m
    return scheme


def product(x: Scheme, y: Scheme) -> Scheme:
    """Product scheme: poset product, stalkwise product monoids."""
    pairs = [(p, q) for p in x.poset.points for q in y.poset.points]
    index = {pq: i for i, pq in enumerate(pairs)}
    leq = [
        (index[(p1, q1)], index[(p2, q2)])
        for (p1, q1) in pairs
        for (p2, q2) in pairs
        if x.poset.leq(p1, p2) and y.poset.leq(q1, q2)
    ]
    poset = FinitePoset(range(len(pairs)), leq)
    stalks = {}
    labels = []
    for i, (p, q) in enumerate(pairs):
        stalks[i] = product_monoid(x.stalks[p], y.stalks[q])
        labels.append(f"({x.label(p)},{y.label(q)})")
    costalks = {}
    for a, b in poset.covers():
        (p1, q1), (p2, q2) = pairs[a], pairs[b]
        np2 = len(x.stalks[p2].gens)
        nq2 = len(y.stalks[q2].gens)
        np1 = len(x.stalks[p1].gens)
        nq1 = len(y.stalks[q1].gens)
        images = []
        if p1 == p2:
            hom = y.costalks[(q1, q2)] if q1 != q2 else MonoidHom.identity(y.stalks[q1])
            for i in range(np2):
                vec = [0] * (np1 + nq1)
                vec[i] = 1
                images.append(vec)
            for i in range(nq2):
                img = hom.images[i]
                images.append([0] * np1 + list(img))
        else:
            hom = x.costalks[(p1, p2)]
            for i in range(np2):
                images.append(list(hom.images[i]) + [0] * nq1)
            for i in range(nq2):
                vec = [0] * (np1 + nq1)
                vec[np1 + i] = 1
                images.append(vec)
        costalks[(a, b)] = MonoidHom(stalks[b], stalks[a], images, check=False)
    return Scheme(poset, labels, stalks, costalks)


def point_scheme() -> Scheme:
    """Spec of the trivial monoid."""
    return spec(MonoidPresentation([]))


# -- gluing -----------------------------------------------------------------------


class Overlap:
    """Gluing datum: an affine overlap with embeddings into two charts.

    The homomorphisms go from the chart monoids INTO the overlap monoid
    (restriction of functions); each must induce an open immersion of the
    overlap spectrum into the chart spectrum.
    """

    def __init__(self, i: int, j: int, w: MonoidPresentation, hom_i: MonoidHom, hom_j: MonoidHom):
        self.i = i
        self.j = j
        self.w = w
        self.hom_i = hom_i
        self.hom_j = hom_j


def _pullback_prime(hom: MonoidHom, q: PrimeIdeal) -> PrimeIdeal:
    chi = tuple(q.evaluate(hom.images[g]) for g in range(len(hom.source.gens)))
    p = PrimeIdeal(hom.source, chi)
    if p not in primes(hom.source):
        raise InconsistentGluing("pulled-back character is not a prime of the chart")
    return p


def _search_preimage(hom: MonoidHom, target_vec, bound: int = 6):
    rs_t = complete(hom.target)
    goal = rs_t.normal_form(target_vec)
    rs_s = complete(hom.source)
    for v in rs_s.ball(bound):
        if rs_t.normal_form(hom.apply(v)) == goal:
            return v
    return None


def _localized_hom(hom: MonoidHom, loc_src: Localization, loc_tgt: Localization) -> MonoidHom:
    """hom: A -> W localized to A_p -> W_q when p is the pullback of q."""
    images = []
    src_pres = loc_src.presentation
    orig_index = {g: i for i, g in enumerate(hom.source.gens)}
    for g in src_pres.gens:
        e = [0] * len(hom.source.gens)
        e[orig_index[g]] = 1
        images.append(loc_tgt.send(hom.apply(e)))
    return MonoidHom(src_pres, loc_tgt.presentation, images, check=False)


def _invert_hom(hom: MonoidHom, bound: int = 6) -> MonoidHom:
    """Inverse of a monoid isomorphism, found by bounded preimage search
    and then validated exactly."""
    images = []
    for j, g in enumerate(hom.target.gens):
        e = [0] * len(hom.target.gens)
        e[j] = 1
        v = _search_preimage(hom, e, bound)
        if v is None:
            raise InconsistentGluing(
                f"no preimage of overlap generator {g!r} within bound {bound}"
            )
        images.append(v)
    inv = MonoidHom(hom.target, hom.source, images)
    rs = complete(hom.source)
    for i in range(len(hom.source.gens)):
        e = [0] * len(hom.source.gens)
        e[i] = 1
        if rs.normal_form(inv.apply(hom.apply(e))) != rs.normal_form(e):
            raise InconsistentGluing("overlap embeddings are not mutually inverse")
    return inv


def glue(
    charts: Sequence[MonoidPresentation],
    overlaps: Sequence[Overlap],
    chart_names: Optional[Sequence[str]] = None,
    require_separated: bool = True,
) -> Scheme:
    """Glue affine charts along open immersions of affine overlaps.

    Points of the overlap spectra are identified with their character
    pullbacks in both charts; the equivalence closure must stay injective
    per chart and yield an antisymmetric order.  Stalks at identified
    points are transported through validated overlap isomorphisms.
    """
    charts = list(charts)
    names = list(chart_names) if chart_names else [f"U{i}" for i in range(len(charts))]
    chart_primes = [primes(c) for c in charts]
    chart_locs = [
        {p: localize(c, p) for p in prs} for c, prs in zip(charts, chart_primes)
    ]

    # union-find on (chart, prime)
    parent: dict = {}

    def find(a):
        while parent.setdefault(a, a) != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    def union(a, b):
        parent[find(a)] = find(b)

    for c_i, prs in enumerate(chart_primes):
        for p in prs:
            find((c_i, p))

    # identification edges with their stalk isomorphisms
    iso_edges: dict = {}
    for ov in overlaps:
        w_primes = primes(ov.w)
        w_locs = {q: localize(ov.w, q) for q in w_primes}
        pulled_i = {q: _pullback_prime(ov.hom_i, q) for q in w_primes}
        pulled_j = {q: _pullback_prime(ov.hom_j, q) for q in w_primes}
        for pulled, side in ((pulled_i, ov.i), (pulled_j, ov.j)):
            if len(set(pulled.values())) != len(w_primes):
                raise InconsistentGluing(
                    f"overlap does not embed injectively into chart {names[side]}"
                )
            image = set(pulled.values())
            for p in image:
                for r in chart_primes[side]:
                    if r.issubset(p) and r not in image:
                        raise InconsistentGluing(
                            f"overlap image in chart {names[side]} is not open"
                        )
            for q1 in w_primes:
                for q2 in w_primes:
                    if q1.issubset(q2) != pulled[q1].issubset(pulled[q2]):
                        raise InconsistentGluing(
                            f"overlap embedding into chart {names[side]} is not an order embedding"
                        )
        for q in w_primes:
            a = (ov.i, pulled_i[q])
            b = (ov.j, pulled_j[q])
            union(a, b)
            alpha_i = _localized_hom(
                ov.hom_i, chart_locs[ov.i][pulled_i[q]], w_locs[q]
            )
            alpha_j = _localized_hom(
                ov.hom_j, chart_locs[ov.j][pulled_j[q]], w_locs[q]
            )
            beta_j = _invert_hom(alpha_j)
            beta_i = _invert_hom(alpha_i)
            iso_edges[(a, b)] = beta_j.compose(alpha_i)
            iso_edges[(b, a)] = beta_i.compose(alpha_j)

    # classes, with ambiguity detection
    classes: dict = {}
    for c_i, prs in enumerate(chart_primes):
        for p in prs:
            classes.setdefault(find((c_i, p)), []).append((c_i, p))
    for members in classes.values():
        per_chart: dict = {}
        for c_i, p in members:
            if c_i in per_chart and per_chart[c_i] != p:
                raise InconsistentGluing(
                    f"two primes of chart {names[c_i]} became identified"
                )
            per_chart[c_i] = p
    roots = sorted(
        classes,
        key=lambda r: min((c_i, p.height_key()) for c_i, p in classes[r]),
    )
    point_of: dict = {}
    for idx, root in enumerate(roots):
        for member in classes[root]:
            point_of[member] = idx
    n = len(roots)

    leq_pairs = set()
    for c_i, prs in enumerate(chart_primes):
        for p in prs:
            for r in prs:
                if p.issubset(r):
                    leq_pairs.add((point_of[(c_i, p)], point_of[(c_i, r)]))
    try:
        poset = FinitePoset(range(n), sorted(leq_pairs))
    except ValueError as exc:
        raise InconsistentGluing(f"glued order is inconsistent: {exc}") from exc

    reps = {idx: min(classes[root]) for idx, root in enumerate(roots)}
    stalks = {
        idx: chart_locs[c_i][p].presentation for idx, (c_i, p) in reps.items()
    }
    labels = [f"{names[c_i]}:{p}" for idx, (c_i, p) in sorted(reps.items())]

    # transport to the representative stalk from any chart containing the point
    to_rep: dict = {}
    for idx, root in enumerate(roots):
        rep = reps[idx]
        to_rep[(idx, rep)] = MonoidHom.identity(stalks[idx])
        frontier = [rep]
        seen = {rep}
        while frontier:
            cur = frontier.pop(0)
            for (a, b), iso in iso_edges.items():
                if a == cur and b not in seen and find(b) == root:
                    # iso : stalk at a -> stalk at b, so extend the transport
                    to_rep[(idx, b)] = iso.compose(to_rep[(idx, cur)])
                    seen.add(b)
                    frontier.append(b)

    def rep_hom_from(idx, member) -> MonoidHom:
        hom = to_rep.get((idx, member))
        if hom is None:
            raise InconsistentGluing(
                "identified points are not connected by overlap isomorphisms"
            )
        return hom

    costalks = {}
    for x, y in poset.covers():
        done = False
        for c_i, prs in enumerate(chart_primes):
            members_x = {m for m in classes[roots[x]] if m[0] == c_i}
            members_y = {m for m in classes[roots[y]] if m[0] == c_i}
            if not members_x or not members_y:
                continue
            (_, px) = next(iter(members_x))
            (_, py) = next(iter(members_y))
            if not px.issubset(py):
                continue
            # canonical localization map inside chart c_i
            loc_x = chart_locs[c_i][px]
            loc_y = chart_locs[c_i][py]
            images = []
            orig_index = {g: k for k, g in enumerate(charts[c_i].gens)}
            for g in loc_y.presentation.gens:
                e = [0] * len(charts[c_i].gens)
                e[orig_index[g]] = 1
                images.append(loc_x.send(e))
            inner = MonoidHom(loc_y.presentation, loc_x.presentation, images, check=False)
            hom_y = rep_hom_from(y, (c_i, py))  # stalk[y] -> chart stalk at y
            # need chart stalk at x -> stalk[x]: invert the transport
            hom_x = rep_hom_from(x, (c_i, px))
            hom_x_inv = _invert_hom(hom_x)
            costalks[(x, y)] = hom_x_inv.compose(inner).compose(hom_y)
            done = True
            break
        if not done:
            raise InconsistentGluing(
                f"covering pair {x}, {y} is not witnessed inside a single chart"
            )

    scheme = Scheme(poset, labels, stalks, costalks)
    scheme.chart_tops = [
        point_of[(c_i, max(chart_primes[c_i], key=lambda p: sum(1 for c in p.chi if c == 0)))]
        for c_i in range(len(charts))
    ]
    if require_separated and not scheme.separated:
        raise NotSeparated("pairwise chart intersections are not all affine")
    return scheme


def projective_space(n: int) -> Scheme:
    """P^n glued from n + 1 free charts along the standard localizations."""
    if n < 1:
        raise ValueError("projective space needs n >= 1")
    charts = []
    for i in range(n + 1):
        gens = [f"x{j}{i}" for j in range(n + 1) if j != i]
        charts.append(MonoidPresentation(gens))
    overlaps = []
    for i, j in itertools.combinations(range(n + 1), 2):
        w_gens = [f"x{k}{i}" for k in range(n + 1) if k != i]
        w = MonoidPresentation(w_gens, inverted=[f"x{j}{i}"])
        w_index = {g: k for k, g in enumerate(w_gens)}

        def evec(name, scale=1, extra=None):
            v = [0] * len(w_gens)
            v[w_index[name]] = scale
            if extra:
                v[w_index[extra]] += -1
            return v

        hom_i = MonoidHom(
            charts[i], w, [evec(g) for g in charts[i].gens], check=False
        )
        images_j = []
        for g in charts[j].gens:
            k = int(g[1:-1])  # gen is x{k}{j}
            if k == i:
                images_j.append(evec(f"x{j}{i}", -1))
            else:
                images_j.append(evec(f"x{k}{i}", 1, extra=f"x{j}{i}"))
        hom_j = MonoidHom(charts[j], w, images_j, check=False)
        overlaps.append(Overlap(i, j, w, hom_i, hom_j))
    scheme = glue(charts, overlaps, chart_names=[f"U{i}" for i in range(n + 1)])
    return scheme
