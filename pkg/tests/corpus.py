"""Shared test corpus: the worked examples, seeded generators, and
independent brute-force oracles.

The oracles here deliberately avoid the library's own machinery: the
congruence closure works on raw exponent vectors with union-find, the
determinant is cofactor expansion, and diagonal cokernels are enumerated
as residue tuples.
"""

from __future__ import annotations

import itertools
import random
from fractions import Fraction

from monoidscheme.abgroup import AbGroup, AbMap
from monoidscheme.intmat import Matrix
from monoidscheme.monoid import MonoidPresentation
from monoidscheme.poset import FinitePoset
from monoidscheme.scheme import Scheme, projective_space, spec, product
from monoidscheme.sheaf import AbSheaf, cech_data, skyscraper


# -- named monoids -----------------------------------------------------------------


def example_66() -> MonoidPresentation:
    """<a,b,e | ab = abe, e^2 = e>, the running s-smooth-not-smooth example."""
    return MonoidPresentation.from_words(
        "a b e", relations=[("a b", "a b e"), ("e e", "e")]
    )


def m_n(n: int) -> MonoidPresentation:
    """<a_1..a_n, e | a_1...a_n = a_1...a_n e, e^2 = e>."""
    gens = [f"a{i}" for i in range(1, n + 1)] + ["e"]
    prod = " ".join(gens[:-1])
    return MonoidPresentation.from_words(
        gens, relations=[(prod, prod + " e"), ("e e", "e")]
    )


def uab() -> MonoidPresentation:
    """<u,a,b | u^2 = ab = u^3>."""
    return MonoidPresentation.from_words(
        "u a b", relations=[("u u", "a b"), ("a b", "u u u")]
    )


def nat(k: int = 1) -> MonoidPresentation:
    return MonoidPresentation.free(k, prefix="t")


def z_monoid() -> MonoidPresentation:
    return MonoidPresentation.from_words("t", inverted="t")


def t23() -> MonoidPresentation:
    """The numerical monoid <t^2, t^3> presented as <u,v | u^3 = v^2>."""
    return MonoidPresentation.from_words("u v", relations=[("u u u", "v v")])


def abc() -> MonoidPresentation:
    """<a,b,c | ab = ac>: not s-cancellative."""
    return MonoidPresentation.from_words("a b c", relations=[("a b", "a c")])


def corpus_monoids() -> list[MonoidPresentation]:
    return [nat(1), nat(2), z_monoid(), example_66(), m_n(3), uab(), t23()]


# -- named schemes -----------------------------------------------------------------


_SCHEME_CACHE: dict = {}


def named_scheme(name: str) -> Scheme:
    if name not in _SCHEME_CACHE:
        builders = {
            "P1": lambda: projective_space(1),
            "P2": lambda: projective_space(2),
            "P1xP1": lambda: product(projective_space(1), projective_space(1)),
            "SpecM": lambda: spec(example_66()),
            "SpecU": lambda: spec(uab()),
            "SpecN": lambda: spec(nat(1)),
            "SpecN2": lambda: spec(nat(2)),
            "SpecM3": lambda: spec(m_n(3)),
        }
        _SCHEME_CACHE[name] = builders[name]()
    return _SCHEME_CACHE[name]


def corpus_schemes() -> list[tuple[str, Scheme]]:
    return [(n, named_scheme(n)) for n in
            ["SpecN", "SpecN2", "SpecM", "SpecU", "P1", "P2", "P1xP1"]]


# -- independent oracles -----------------------------------------------------------


def naive_det(rows) -> int:
    """Cofactor-expansion determinant (oracle, small matrices only)."""
    n = len(rows)
    if n == 0:
        return 1
    if n == 1:
        return rows[0][0]
    total = 0
    for j in range(n):
        if rows[0][j] == 0:
            continue
        minor = [
            [rows[i][k] for k in range(n) if k != j] for i in range(1, n)
        ]
        sign = -1 if j % 2 else 1
        total += sign * rows[0][j] * naive_det(minor)
    return total


def diagonal_cokernel_elements(diag: list[int]):
    """All residue tuples of Z^n / diag lattice (requires all d_i != 0)."""
    return list(itertools.product(*[range(abs(d)) for d in diag]))


def group_exponent_and_order(diag: list[int]) -> tuple[int, int]:
    """(exponent, order) of the product of cyclic groups, by enumeration."""
    elements = diagonal_cokernel_elements(diag)
    order = len(elements)
    exponent = 1
    for el in elements:
        k = 1
        cur = el
        while any(cur):
            cur = tuple((a + b) % d for a, b, d in zip(cur, el, map(abs, diag)))
            k += 1
        exponent = exponent * k // _gcd(exponent, k)
    return exponent, order


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


class CongruenceOracle:
    """Brute-force congruence closure on a ball of exponent vectors.

    Works over the companion encoding so inverted generators are covered.
    Equality verdicts are sound on the ball: the closure only uses words
    inside the ball, so `classes` under-approximates the true congruence;
    pairs it merges are certainly equal in the monoid.
    """

    def __init__(self, pres: MonoidPresentation, degree: int):
        self.pres = pres
        names = list(pres.gens)
        companions = {}
        for i in sorted(pres.inverted_indices):
            companions[i] = len(names)
            names.append(pres.gens[i] + "_opp")
        self.n = len(names)
        rels = []
        for l, r in pres.relations:
            rels.append((self._embed(l, companions), self._embed(r, companions)))
        for i, j in companions.items():
            one = [0] * self.n
            one[i] = 1
            one[j] = 1
            rels.append((tuple(one), tuple([0] * self.n)))
        vectors = [
            v
            for v in itertools.product(range(degree + 1), repeat=self.n)
            if sum(v) <= degree
        ]
        parent = {v: v for v in vectors}

        def find(v):
            while parent[v] != v:
                parent[v] = parent[parent[v]]
                v = parent[v]
            return v

        changed = True
        while changed:
            changed = False
            for l, r in rels:
                for w in vectors:
                    a = tuple(x + y for x, y in zip(l, w))
                    b = tuple(x + y for x, y in zip(r, w))
                    if a in parent and b in parent:
                        ra, rb = find(a), find(b)
                        if ra != rb:
                            parent[ra] = rb
                            changed = True
        self._find = find
        self.vectors = vectors
        self.companions = companions

    def _embed(self, vec, companions):
        out = [0] * self.n
        for i, x in enumerate(vec):
            if x >= 0:
                out[i] = x
            else:
                out[companions[i]] = -x
        return tuple(out)

    def same_class(self, a, b) -> bool:
        ea = self._embed(a, self.companions)
        eb = self._embed(b, self.companions)
        return self._find(ea) == self._find(eb)

    def classes(self) -> list[list[tuple]]:
        byroot: dict = {}
        for v in self.vectors:
            byroot.setdefault(self._find(v), []).append(v)
        return list(byroot.values())


# -- seeded generators ----------------------------------------------------------------


def random_unimodular(n: int, rng: random.Random) -> Matrix:
    m = [[int(i == j) for j in range(n)] for i in range(n)]
    for _ in range(3 * n):
        i, j = rng.randrange(n), rng.randrange(n)
        if i == j:
            continue
        q = rng.randint(-2, 2)
        for k in range(n):
            m[i][k] += q * m[j][k]
    return Matrix(m, n)


_FIBRES = [
    lambda: AbGroup.free(1),
    lambda: AbGroup.free(2),
    lambda: AbGroup.cyclic(2),
    lambda: AbGroup.cyclic(3),
    lambda: AbGroup.cyclic(4),
    lambda: AbGroup.from_relations(2, [(2, 0)]),
]


def fuzz_sheaf(base: FinitePoset, rng: random.Random) -> AbSheaf:
    """A random valid sheaf: a direct sum of up-set-supported constant
    modules (restrictions identity inside, zero outside), occasionally
    twisted by unimodular automorphisms on free stalks."""
    pieces = []
    for _ in range(rng.randint(1, 3)):
        fibre = rng.choice(_FIBRES)()
        seed_point = rng.choice(base.points)
        upset = {p for p in base.points if base.leq(seed_point, p)}
        pieces.append((upset, fibre))
    stalks = {}
    blocks = {}
    for p in base.points:
        groups = [fibre for upset, fibre in pieces if p in upset]
        from monoidscheme.abgroup import direct_sum

        ds = direct_sum(groups)
        blocks[p] = ds
        stalks[p] = ds.group
    cov = {}
    for x, y in base.covers():
        rows = []
        live_y = [k for k, (upset, _) in enumerate(pieces) if y in upset]
        live_x = [k for k, (upset, _) in enumerate(pieces) if x in upset]
        for xi, k in enumerate(live_x):
            fibre = pieces[k][1]
            for r in range(fibre.ngens):
                row = [0] * stalks[y].ngens
                if k in live_y:
                    yj = live_y.index(k)
                    row[blocks[y].offsets[yj] + r] = 1
                rows.append(row)
        cov[(x, y)] = AbMap(stalks[y], stalks[x], Matrix(rows, stalks[y].ngens), check=False)
    sheaf = AbSheaf(base, stalks, cov, check=True)
    if rng.random() < 0.5:
        sheaf = _twist(sheaf, rng)
    return sheaf


def _twist(f: AbSheaf, rng: random.Random) -> AbSheaf:
    """Conjugate free stalks by random unimodular automorphisms."""
    autos = {}
    for p in f.base.points:
        g = f.stalks[p]
        if g.torsion or g.rank != g.ngens:
            autos[p] = Matrix.identity(g.ngens)
        else:
            autos[p] = random_unimodular(g.ngens, rng)
    from monoidscheme.intmat import invert_unimodular

    cov = {}
    for x, y in f.base.covers():
        rho = f.restriction(x, y)
        cov[(x, y)] = AbMap(
            f.stalks[y],
            f.stalks[x],
            autos[x] @ rho.matrix @ invert_unimodular(autos[y]),
            check=False,
        )
    return AbSheaf(f.base, dict(f.stalks), cov, check=True)


def random_line_cocycle(x: Scheme, rng: random.Random) -> dict:
    """A valid unit 1-cocycle on the chart cover, as {pair: coordinate vec}."""
    sheaf = x.units_sheaf()
    data = cech_data(sheaf)
    classifier = data.complex.cohomology_data(1)
    basis = classifier.cocycle_basis
    vec = [0] * classifier.chain_group.ngens
    for j in range(basis.ncols):
        c = rng.randint(-2, 2)
        for i in range(len(vec)):
            vec[i] += c * basis.rows[i][j]
    out = {}
    for b, (combo, meet) in enumerate(data.levels[1]):
        if meet is None:
            continue
        off = data.sums[1].offsets[b]
        width = sheaf.stalks[meet].ngens
        out[combo] = tuple(vec[off : off + width])
    return out


def random_cocycle(x: Scheme, rank: int, rng: random.Random):
    """A seeded valid rank-n cocycle: a diagonal built from valid line
    cocycles, conjugated by a random 0-cochain of units and permutations."""
    from monoidscheme.invariants import BundleCocycle, SemidirectElement

    lines = [random_line_cocycle(x, rng) for _ in range(rank)]
    sheaf = x.units_sheaf()
    charts = x.charts()
    transitions = {}
    for combo in lines[0]:
        transitions[combo] = SemidirectElement(
            tuple(line[combo] for line in lines), tuple(range(rank))
        )
    diagonal = BundleCocycle(x, rank, transitions)
    cochain = []
    for i in range(len(charts)):
        g = sheaf.stalks[charts[i]]
        unit_vecs = tuple(
            tuple(rng.randint(-2, 2) for _ in range(g.ngens)) for _ in range(rank)
        )
        perm = list(range(rank))
        rng.shuffle(perm)
        cochain.append(SemidirectElement(unit_vecs, tuple(perm)))
    scrambled = diagonal.conjugate(cochain)
    return scrambled, diagonal, cochain


def skyscraper_at_generic(name: str, fibre: AbGroup) -> AbSheaf:
    x = named_scheme(name)
    return skyscraper(x.poset, x.least_point(), fibre)
