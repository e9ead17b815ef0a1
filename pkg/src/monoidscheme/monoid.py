"""Finitely presented commutative monoids.

A presentation lists named generators, a subset of formally inverted
generators, and relations between exponent vectors.  The word problem is
solved by completing a commutative rewriting system on exponent vectors
(Knuth-Bendix under the degree-lexicographic order, with inverted
generators encoded through companion inverse generators):

    >>> m = MonoidPresentation.from_words("a b e", relations=[("a b", "a b e"), ("e e", "e")])
    >>> system = complete(m)
    >>> system.normal_form(m.vector("a b e"))
    (1, 1, 0)

Prime ideals are enumerated as multiplicative {0,1}-characters of the
generators, which makes Spec exact and cheap; localization flags the
complement of a prime as inverted and simplifies the presentation.  The
unit group is computed exactly: the non-units form the largest prime
ideal, so the unit generators can be read off the character table and
their relation lattice off the completed rewriting system.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .abgroup import AbGroup
from .errors import CompletionExceededBound, UnitsInconclusive
from .intmat import Matrix

DEFAULT_COMPLETION_EFFORT = 4000


def _deglex_key(vec: Sequence[int]) -> tuple:
    # Bigger key = bigger word.  Ties by degree are broken so that words in
    # later-declared generators are larger ("ab" > "uu" when u is declared
    # before a and b).
    return (sum(vec), tuple(-x for x in vec))


class MonoidPresentation:
    """Immutable presentation of a finitely generated commutative monoid."""

    __slots__ = ("gens", "inverted", "relations", "_hash")

    def __init__(
        self,
        gens: Sequence[str],
        relations: Iterable[tuple[Sequence[int], Sequence[int]]] = (),
        inverted: Iterable[str] = (),
    ):
        gens = tuple(gens)
        if len(set(gens)) != len(gens):
            raise ValueError("generator names must be unique")
        inverted = frozenset(inverted)
        unknown = inverted - set(gens)
        if unknown:
            raise ValueError(f"inverted names not among generators: {sorted(unknown)}")
        inv_idx = {i for i, g in enumerate(gens) if g in inverted}
        canon = set()
        for l, r in relations:
            l = tuple(int(x) for x in l)
            r = tuple(int(x) for x in r)
            if len(l) != len(gens) or len(r) != len(gens):
                raise ValueError("relation vectors must match the generator count")
            for side in (l, r):
                for i, x in enumerate(side):
                    if x < 0 and i not in inv_idx:
                        raise ValueError(
                            f"negative exponent on non-inverted generator {gens[i]!r}"
                        )
            if l == r:
                continue
            pair = (l, r) if _abs_key(l) >= _abs_key(r) else (r, l)
            canon.add(pair)
        object.__setattr__(self, "gens", gens)
        object.__setattr__(self, "inverted", inverted)
        object.__setattr__(self, "relations", tuple(sorted(canon, key=lambda p: (_abs_key(p[0]), _abs_key(p[1])))))
        object.__setattr__(self, "_hash", hash((gens, inverted, self.relations)))

    def __setattr__(self, name, value):
        raise AttributeError("MonoidPresentation is immutable")

    def __eq__(self, other):
        return (
            isinstance(other, MonoidPresentation)
            and self.gens == other.gens
            and self.inverted == other.inverted
            and self.relations == other.relations
        )

    def __hash__(self):
        return self._hash

    # -- constructors ---------------------------------------------------------

    @staticmethod
    def from_words(
        gens: str | Sequence[str],
        relations: Iterable[tuple[str, str]] = (),
        inverted: str | Sequence[str] = (),
    ) -> "MonoidPresentation":
        """Build from whitespace-separated generator words like ``"a b^2"``."""
        if isinstance(gens, str):
            gens = gens.split()
        if isinstance(inverted, str):
            inverted = inverted.split()
        pres = MonoidPresentation(gens, (), inverted)
        rels = [(pres.vector(l), pres.vector(r)) for l, r in relations]
        return MonoidPresentation(gens, rels, inverted)

    @staticmethod
    def free(n: int, prefix: str = "x") -> "MonoidPresentation":
        return MonoidPresentation([f"{prefix}{i+1}" for i in range(n)])

    def vector(self, word: str | dict[str, int]) -> tuple[int, ...]:
        """Exponent vector of a word such as ``"a b^2"`` or ``{"a": 1}``."""
        vec = [0] * len(self.gens)
        idx = {g: i for i, g in enumerate(self.gens)}
        if isinstance(word, dict):
            items = word.items()
        else:
            items = []
            for tok in word.split():
                if tok == "1":
                    continue
                name, _, exp = tok.partition("^")
                items.append((name, int(exp) if exp else 1))
        for name, exp in items:
            if name not in idx:
                raise ValueError(f"unknown generator {name!r}")
            vec[idx[name]] += int(exp)
        return tuple(vec)

    def word(self, vec: Sequence[int]) -> str:
        parts = []
        for g, e in zip(self.gens, vec):
            if e == 1:
                parts.append(g)
            elif e != 0:
                parts.append(f"{g}^{e}")
        return " ".join(parts) if parts else "1"

    @property
    def inverted_indices(self) -> tuple[int, ...]:
        return tuple(i for i, g in enumerate(self.gens) if g in self.inverted)

    def __repr__(self):
        rels = ", ".join(f"{self.word(l)} = {self.word(r)}" for l, r in self.relations)
        inv = f"; inv {sorted(self.inverted)}" if self.inverted else ""
        return f"<monoid {' '.join(self.gens)}{inv} | {rels}>"


def _abs_key(vec: Sequence[int]) -> tuple:
    return (sum(abs(x) for x in vec), tuple(-abs(x) for x in vec), tuple(vec))


# -- rewriting ----------------------------------------------------------------


class _ExtContext:
    """Companion-generator encoding: all exponents become nonnegative."""

    __slots__ = ("pres", "names", "n_orig", "companion")

    def __init__(self, pres: MonoidPresentation):
        self.pres = pres
        self.n_orig = len(pres.gens)
        self.companion = {}
        names = list(pres.gens)
        for i in pres.inverted_indices:
            self.companion[i] = len(names)
            names.append(pres.gens[i] + "'")
        self.names = tuple(names)

    def encode(self, vec: Sequence[int]) -> tuple[int, ...]:
        out = [0] * len(self.names)
        for i, x in enumerate(vec):
            if x >= 0:
                out[i] = x
            else:
                out[self.companion[i]] = -x
        return tuple(out)

    def decode(self, ext: Sequence[int]) -> tuple[int, ...]:
        out = list(ext[: self.n_orig])
        for i, j in self.companion.items():
            out[i] -= ext[j]
        return tuple(out)

    def companion_relations(self):
        for i, j in self.companion.items():
            l = [0] * len(self.names)
            l[i] = 1
            l[j] = 1
            yield (tuple(l), tuple([0] * len(self.names)))


class RewriteSystem:
    """A terminating commutative rewriting system on exponent vectors.

    Every rule strictly decreases the degree-lexicographic order.  When
    ``complete`` is true all critical pairs resolve, so normal forms are
    unique and `equal` decides the word problem.
    """

    __slots__ = ("pres", "rules", "ordering", "complete", "bound_used", "_ext", "_balls")

    def __init__(self, pres, rules, complete, bound_used, ext):
        self.pres = pres
        self.rules = tuple(rules)
        self.ordering = "deglex"
        self.complete = complete
        self.bound_used = bound_used
        self._ext = ext
        self._balls = {}

    def reduce_ext(self, vec: Sequence[int]) -> tuple[int, ...]:
        v = list(vec)
        changed = True
        while changed:
            changed = False
            for l, r in self.rules:
                while all(v[i] >= l[i] for i in range(len(v))):
                    for i in range(len(v)):
                        v[i] += r[i] - l[i]
                    changed = True
        return tuple(v)

    def normal_form(self, vec: Sequence[int]) -> tuple[int, ...]:
        """Unique normal form of an exponent vector (original coordinates)."""
        return self._ext.decode(self.reduce_ext(self._ext.encode(vec)))

    def equal(self, a: Sequence[int], b: Sequence[int]) -> bool:
        return self.normal_form(a) == self.normal_form(b)

    def multiply(self, a: Sequence[int], b: Sequence[int]) -> tuple[int, ...]:
        return self.normal_form(tuple(x + y for x, y in zip(a, b)))

    def power(self, a: Sequence[int], n: int) -> tuple[int, ...]:
        return self.normal_form(tuple(n * x for x in a))

    def is_identity(self, a: Sequence[int]) -> bool:
        return all(x == 0 for x in self.normal_form(a))

    def ball(self, degree: int) -> list[tuple[int, ...]]:
        """All classes of words of length <= degree (companion letters count),
        as normal forms in original coordinates, sorted by deglex."""
        if degree in self._balls:
            return self._balls[degree]
        ext = self._ext
        n = len(ext.names)
        seen = {tuple([0] * n)}
        frontier = [tuple([0] * n)]
        for _ in range(degree):
            new = []
            for v in frontier:
                for g in range(n):
                    w = list(v)
                    w[g] += 1
                    w = self.reduce_ext(w)
                    if w not in seen:
                        seen.add(w)
                        new.append(w)
            frontier = new
        out = sorted(seen, key=_deglex_key)
        result = [ext.decode(v) for v in out]
        self._balls[degree] = result
        return result


_COMPLETION_CACHE: dict[MonoidPresentation, RewriteSystem | CompletionExceededBound] = {}


def complete(pres: MonoidPresentation, effort: int = DEFAULT_COMPLETION_EFFORT) -> RewriteSystem:
    """Complete the presentation's rewriting system (Knuth-Bendix, deglex).

    Raises CompletionExceededBound if confluence is not certified within
    the effort budget; equality answers are then unavailable.
    """
    cached = _COMPLETION_CACHE.get(pres)
    if isinstance(cached, RewriteSystem):
        return cached
    if isinstance(cached, CompletionExceededBound) and cached.bound >= effort:
        raise cached

    ext = _ExtContext(pres)
    eqs = [(ext.encode(l), ext.encode(r)) for l, r in pres.relations]
    eqs.extend(ext.companion_relations())
    rules: list[tuple[tuple[int, ...], tuple[int, ...]]] = []

    def reduce_by(v, rule_list):
        v = list(v)
        changed = True
        while changed:
            changed = False
            for l, r in rule_list:
                if all(v[i] >= l[i] for i in range(len(v))):
                    for i in range(len(v)):
                        v[i] += r[i] - l[i]
                    changed = True
        return tuple(v)

    steps = 0
    queue = list(eqs)
    while queue:
        steps += 1
        if steps > effort:
            err = CompletionExceededBound(
                f"completion of {pres!r} exceeded {effort} steps", effort
            )
            _COMPLETION_CACHE[pres] = err
            raise err
        x, y = queue.pop(0)
        x = reduce_by(x, rules)
        y = reduce_by(y, rules)
        if x == y:
            continue
        if _deglex_key(x) < _deglex_key(y):
            x, y = y, x
        # retire rules the new rule can still reduce
        keep = []
        for l, r in rules:
            if all(l[i] >= x[i] for i in range(len(x))) or all(
                r[i] >= x[i] for i in range(len(x))
            ):
                queue.append((l, r))
            else:
                keep.append((l, r))
        rules = keep
        for l, r in rules:
            # overlaps with disjoint support always resolve
            if any(l[i] and x[i] for i in range(len(x))):
                m = tuple(max(a, b) for a, b in zip(l, x))
                queue.append(
                    (
                        tuple(m[i] - l[i] + r[i] for i in range(len(m))),
                        tuple(m[i] - x[i] + y[i] for i in range(len(m))),
                    )
                )
        rules.append((x, y))

    rules.sort(key=lambda lr: (_deglex_key(lr[0]), _deglex_key(lr[1])))
    system = RewriteSystem(pres, rules, True, effort, ext)
    # confluence re-check: every genuine critical pair resolves
    for (l1, r1), (l2, r2) in itertools.combinations(rules, 2):
        if any(a and b for a, b in zip(l1, l2)):
            m = tuple(max(a, b) for a, b in zip(l1, l2))
            one = system.reduce_ext(tuple(m[i] - l1[i] + r1[i] for i in range(len(m))))
            two = system.reduce_ext(tuple(m[i] - l2[i] + r2[i] for i in range(len(m))))
            if one != two:
                raise AssertionError("completion returned a non-confluent system")
    _COMPLETION_CACHE[pres] = system
    return system


@dataclass(frozen=True)
class Element:
    """A monoid element stored as a normal-form exponent vector."""

    monoid: MonoidPresentation
    vec: tuple[int, ...]

    @staticmethod
    def of(monoid: MonoidPresentation, word_or_vec) -> "Element":
        vec = (
            monoid.vector(word_or_vec)
            if isinstance(word_or_vec, (str, dict))
            else tuple(word_or_vec)
        )
        return Element(monoid, complete(monoid).normal_form(vec))

    @staticmethod
    def one(monoid: MonoidPresentation) -> "Element":
        return Element(monoid, tuple([0] * len(monoid.gens)))

    def __mul__(self, other: "Element") -> "Element":
        if other.monoid != self.monoid:
            raise ValueError("elements of different monoids")
        return Element(self.monoid, complete(self.monoid).multiply(self.vec, other.vec))

    def __pow__(self, n: int) -> "Element":
        return Element(self.monoid, complete(self.monoid).power(self.vec, n))

    def is_identity(self) -> bool:
        return all(x == 0 for x in self.vec)

    def __str__(self):
        return self.monoid.word(self.vec)


def nf(element: Element) -> Element:
    """Idempotent normalization (Element values are already normalized)."""
    return Element.of(element.monoid, element.vec)


def equal(a: Element, b: Element) -> bool:
    return nf(a).vec == nf(b).vec


# -- prime ideals --------------------------------------------------------------


@dataclass(frozen=True)
class PrimeIdeal:
    """A prime ideal, stored as its multiplicative {0,1}-character.

    The ideal is the set of all elements containing a 0-valued generator;
    membership is well defined on congruence classes because the character
    respects every relation.
    """

    monoid: MonoidPresentation
    chi: tuple[int, ...]

    def evaluate(self, vec: Sequence[int]) -> int:
        return 0 if any(c == 0 and x != 0 for c, x in zip(self.chi, vec)) else 1

    def contains(self, vec: Sequence[int]) -> bool:
        return self.evaluate(vec) == 0

    def ideal_generators(self) -> tuple[str, ...]:
        return tuple(g for g, c in zip(self.monoid.gens, self.chi) if c == 0)

    def face(self) -> tuple[str, ...]:
        """Generators of the complement submonoid (inverted on localizing)."""
        return tuple(g for g, c in zip(self.monoid.gens, self.chi) if c == 1)

    def issubset(self, other: "PrimeIdeal") -> bool:
        return all(a >= b for a, b in zip(self.chi, other.chi))

    def height_key(self) -> tuple:
        return (sum(1 for c in self.chi if c == 0), self.chi)

    def __str__(self):
        gens = self.ideal_generators()
        return "(" + ",".join(gens) + ")" if gens else "∅"


def primes(pres: MonoidPresentation) -> tuple[PrimeIdeal, ...]:
    """All prime ideals, sorted by (size, character); the empty ideal first.

    Characters on inverted generators are forced to 1.  There are at most
    2^#generators candidates; a candidate survives iff both sides of every
    relation evaluate equally.
    """
    n = len(pres.gens)
    inv = set(pres.inverted_indices)
    found = []
    for bits in itertools.product((1, 0), repeat=n):
        if any(bits[i] == 0 for i in inv):
            continue
        p = PrimeIdeal(pres, bits)
        if all(p.evaluate(l) == p.evaluate(r) for l, r in pres.relations):
            found.append(p)
    found.sort(key=PrimeIdeal.height_key)
    return tuple(found)


def maximal_prime(pres: MonoidPresentation) -> PrimeIdeal:
    """The ideal of all non-units: the unique largest prime (the union of
    all primes is prime)."""
    prs = primes(pres)
    chi = tuple(min(p.chi[i] for p in prs) for i in range(len(pres.gens)))
    top = PrimeIdeal(pres, chi)
    assert top in prs
    return top


def unit_generator_indices(pres: MonoidPresentation) -> tuple[int, ...]:
    """Indices of generators that are invertible elements (avoid all primes)."""
    chi = maximal_prime(pres).chi
    return tuple(i for i, c in enumerate(chi) if c == 1)


# -- localization ----------------------------------------------------------------


@dataclass(frozen=True)
class Localization:
    """A localized presentation plus the canonical map from the original."""

    source: MonoidPresentation
    presentation: MonoidPresentation
    gen_images: tuple[tuple[int, ...], ...]  # original generator -> new vector

    def send(self, vec: Sequence[int]) -> tuple[int, ...]:
        out = [0] * len(self.presentation.gens)
        for x, img in zip(vec, self.gen_images):
            if x:
                for i, y in enumerate(img):
                    out[i] += x * y
        return tuple(out)

    def hom(self) -> "MonoidHom":
        return MonoidHom(self.source, self.presentation, self.gen_images, check=False)


def localize(pres: MonoidPresentation, at: PrimeIdeal) -> Localization:
    """Invert every generator outside the prime, then simplify.

    Simplification cancels invertible common factors of relations,
    collapses invertible idempotents (e inverted with e^2 = e gives e = 1)
    and eliminates generators defined by a relation g = w with g not in w.
    """
    if at.monoid != pres:
        raise ValueError("prime belongs to a different presentation")
    names = list(pres.gens)
    inverted = set(pres.inverted) | set(at.face())
    rels = [[list(l), list(r)] for l, r in pres.relations]
    # gen_images over the *current* generator list; coordinates are dropped
    # as generators are eliminated
    images: list[list[int]] = [
        [int(i == j) for j in range(len(names))] for i in range(len(pres.gens))
    ]

    def cancel(rel):
        l, r = rel
        for i, g in enumerate(names):
            if g in inverted:
                m = min(l[i], r[i])
                if m:
                    l[i] -= m
                    r[i] -= m

    def substitute(gen_idx: int, expr: list[int]):
        # replace generator gen_idx by expr (a vector not involving it),
        # then drop the coordinate everywhere
        def subst_vec(v):
            k = v[gen_idx]
            if k:
                v = [a + k * b for a, b in zip(v, expr)]
                v[gen_idx] = 0
            return [x for i, x in enumerate(v) if i != gen_idx]

        nonlocal rels, images, names
        rels = [[subst_vec(l), subst_vec(r)] for l, r in rels]
        images = [subst_vec(v) for v in images]
        name = names.pop(gen_idx)
        inverted.discard(name)

    changed = True
    while changed:
        changed = False
        for rel in rels:
            cancel(rel)
        rels = [rel for rel in rels if rel[0] != rel[1]]
        for rel in sorted(rels, key=lambda lr: (_abs_key(lr[0]), _abs_key(lr[1]))):
            for l, r in (rel, rel[::-1]):
                gi = _single_generator(l)
                if gi is None or r[gi] != 0:
                    continue
                g = names[gi]
                ok = g not in inverted or all(
                    x == 0 or names[i] in inverted for i, x in enumerate(r)
                )
                if not ok:
                    continue
                if any(x < 0 for i, x in enumerate(r) if names[i] not in inverted):
                    continue
                substitute(gi, list(r))
                changed = True
                break
            if changed:
                break

    dedup = set()
    final_rels = []
    for l, r in rels:
        pair = (tuple(l), tuple(r))
        if pair[0] != pair[1] and (pair not in dedup and pair[::-1] not in dedup):
            dedup.add(pair)
            final_rels.append(pair)
    result = MonoidPresentation(names, final_rels, inverted & set(names))
    return Localization(pres, result, tuple(tuple(v) for v in images))


def _single_generator(vec: Sequence[int]) -> Optional[int]:
    nz = [(i, x) for i, x in enumerate(vec) if x != 0]
    if len(nz) == 1 and nz[0][1] == 1:
        return nz[0][0]
    return None


def localize_at_element(pres: MonoidPresentation, vec: Sequence[int]) -> Localization:
    """The localization M_f at a single element f (adds a formal inverse).

    Used to decide, exactly, statements of the form "there is n with
    f^n x = f^n y": that holds iff x = y in M_f.
    """
    names = list(pres.gens)
    inv_name = "_s"
    while inv_name in names:
        inv_name += "_"
    names.append(inv_name)
    rels = [(l + (0,), r + (0,)) for l, r in pres.relations]
    rels.append((tuple(vec) + (1,), tuple([0] * len(pres.gens)) + (0,)))
    new = MonoidPresentation(names, rels, set(pres.inverted) | {inv_name})
    images = tuple(
        tuple(int(i == j) for j in range(len(names))) for i in range(len(pres.gens))
    )
    return Localization(pres, new, images)


# -- product, Grothendieck group, units -----------------------------------------


def product_monoid(p: MonoidPresentation, q: MonoidPresentation) -> MonoidPresentation:
    """Disjoint-union generators, union relations; Spec is the poset product."""
    overlap = set(p.gens) & set(q.gens)

    def rename(gens, side):
        out = []
        for g in gens:
            name = f"{g}_{side}" if g in overlap else g
            if name in out:
                raise ValueError(f"cannot disambiguate generator {g!r} in product")
            out.append(name)
        return out

    gens = rename(p.gens, 1) + rename(q.gens, 2)
    np_, nq = len(p.gens), len(q.gens)
    rels = [(l + (0,) * nq, r + (0,) * nq) for l, r in p.relations]
    rels += [((0,) * np_ + l, (0,) * np_ + r) for l, r in q.relations]
    inverted = {gens[i] for i in range(np_) if p.gens[i] in p.inverted}
    inverted |= {gens[np_ + i] for i in range(nq) if q.gens[i] in q.inverted}
    return MonoidPresentation(gens, rels, inverted)


def grothendieck_group(pres: MonoidPresentation) -> AbGroup:
    """The group completion: Z^#gens modulo the span of (lhs - rhs)."""
    cols = [tuple(a - b for a, b in zip(l, r)) for l, r in pres.relations]
    return AbGroup(len(pres.gens), Matrix.from_cols(cols, len(pres.gens)), labels=pres.gens)


@dataclass(frozen=True)
class UnitGroup:
    """The group of invertible elements, with certificates.

    ``group`` is presented on the unit generators (in declaration order);
    ``certificates`` pairs each unit generator with a normal-form inverse in
    the presentation where all units are marked inverted.
    """

    monoid: MonoidPresentation
    gen_indices: tuple[int, ...]
    group: AbGroup
    certificates: tuple[tuple[tuple[int, ...], tuple[int, ...]], ...]

    def express(self, vec: Sequence[int]) -> tuple[int, ...]:
        """Coordinates of a unit element in the unit generators.

        Any vector representing a unit is supported on unit generators.
        """
        support = {i for i, x in enumerate(vec) if x}
        if not support <= set(self.gen_indices):
            raise ValueError("vector is not supported on unit generators")
        return tuple(vec[i] for i in self.gen_indices)

    def gen_names(self) -> tuple[str, ...]:
        return tuple(self.monoid.gens[i] for i in self.gen_indices)


_UNITS_CACHE: dict[MonoidPresentation, UnitGroup] = {}


def units(pres: MonoidPresentation, effort: int = DEFAULT_COMPLETION_EFFORT) -> UnitGroup:
    """Exact unit group M*.

    The unit generators are those avoiding the maximal prime ideal.  Their
    relation lattice is spanned by the completed rules whose left-hand side
    is supported on unit generators: rewriting a unit-supported word only
    ever involves unit-supported words, so those rules generate the whole
    congruence on the unit part.
    """
    if pres in _UNITS_CACHE:
        return _UNITS_CACHE[pres]
    unit_idx = unit_generator_indices(pres)
    localized = MonoidPresentation(
        pres.gens, pres.relations, set(pres.inverted) | {pres.gens[i] for i in unit_idx}
    )
    try:
        rs = complete(localized, effort)
    except CompletionExceededBound as exc:
        raise UnitsInconclusive(
            f"cannot certify the unit group of {pres!r}: completion exceeded bound",
            exc.bound,
        ) from exc
    ext = rs._ext
    unit_ext = set()
    for i in unit_idx:
        unit_ext.add(i)
        if i in ext.companion:
            unit_ext.add(ext.companion[i])
    pos = {g: k for k, g in enumerate(unit_idx)}

    def collapse(ext_vec):
        out = [0] * len(unit_idx)
        for i, x in enumerate(ext_vec):
            if x == 0:
                continue
            if i in pos:
                out[pos[i]] += x
            else:
                # companion of an inverted unit generator
                orig = next(o for o, c in ext.companion.items() if c == i)
                out[pos[orig]] -= x
        return out

    cols = []
    for l, r in rs.rules:
        if all(x == 0 or i in unit_ext for i, x in enumerate(l)):
            if not all(x == 0 or i in unit_ext for i, x in enumerate(r)):
                raise AssertionError("unit-supported rule rewrote to a non-unit word")
            lc, rc = collapse(l), collapse(r)
            cols.append(tuple(a - b for a, b in zip(lc, rc)))
    group = AbGroup(
        len(unit_idx),
        Matrix.from_cols(cols, len(unit_idx)),
        labels=[pres.gens[i] for i in unit_idx],
    )
    certs = []
    for i in unit_idx:
        e = [0] * len(pres.gens)
        e[i] = 1
        inv = rs.normal_form([-x for x in e])
        if any(rs.normal_form([a + b for a, b in zip(e, inv)])):
            raise AssertionError("unit certificate does not multiply to 1")
        certs.append((tuple(e), inv))
    result = UnitGroup(pres, unit_idx, group, tuple(certs))
    _UNITS_CACHE[pres] = result
    return result


# -- homomorphisms ---------------------------------------------------------------


class MonoidHom:
    """A homomorphism given on generators by exponent vectors of the target."""

    __slots__ = ("source", "target", "images")

    def __init__(self, source, target, images, check=True):
        images = tuple(tuple(v) for v in images)
        if len(images) != len(source.gens):
            raise ValueError("need one image per source generator")
        if any(len(v) != len(target.gens) for v in images):
            raise ValueError("image vectors must live in the target")
        self.source = source
        self.target = target
        self.images = images
        if check:
            self.validate()

    def apply(self, vec: Sequence[int]) -> tuple[int, ...]:
        out = [0] * len(self.target.gens)
        for x, img in zip(vec, self.images):
            if x:
                for i, y in enumerate(img):
                    out[i] += x * y
        return tuple(out)

    def compose(self, other: "MonoidHom") -> "MonoidHom":
        """self after other."""
        if other.target != self.source:
            raise ValueError("composition mismatch")
        return MonoidHom(
            other.source, self.target, [self.apply(v) for v in other.images], check=False
        )

    def validate(self):
        rs = complete(self.target)
        for l, r in self.source.relations:
            if rs.normal_form(self.apply(l)) != rs.normal_form(self.apply(r)):
                raise ValueError("homomorphism does not respect a relation")
        inv_idx = set(self.target.inverted_indices)
        for i in self.source.inverted_indices:
            if any(x != 0 and j not in inv_idx for j, x in enumerate(self.images[i])):
                raise ValueError(
                    "image of an inverted generator is not visibly invertible"
                )

    @staticmethod
    def identity(pres: MonoidPresentation) -> "MonoidHom":
        n = len(pres.gens)
        return MonoidHom(
            pres, pres, [[int(i == j) for j in range(n)] for i in range(n)], check=False
        )
