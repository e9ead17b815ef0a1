"""Declarative input language and report generator.

A manifest defines named monoids and schemes and requests computations:

    monoid M { gens: a b e; rel: a b = a b e; rel: e e = e; }
    scheme X = spec(M);
    scheme Y = P(2);
    compute spec(M);
    compute pic(Y);
    compute check(s-smooth, X);

Reports are deterministic: byte-identical across runs for identical input
and flags.  Exit codes: 0 success, 1 a task failed mathematically,
2 usage or syntax errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from typing import Optional, Sequence

from . import invariants
from .decisions import (
    is_cancellative,
    is_s_cancellative,
    is_seminormal,
    is_smooth_monoid,
    is_torsion_free,
)
from .errors import ManifestError, MonoidSchemeError, ParseError
from .monoid import MonoidHom, MonoidPresentation, grothendieck_group, units
from .scheme import Overlap, Scheme, glue, product, projective_space, spec

Word = tuple[tuple[str, int], ...]  # ((generator, exponent), ...) in declaration order


@dataclass(frozen=True)
class MonoidDef:
    name: str
    gens: tuple[str, ...]
    inverted: tuple[str, ...]
    relations: tuple[tuple[Word, Word], ...]


@dataclass(frozen=True)
class SpecDef:
    monoid: str


@dataclass(frozen=True)
class ProjectiveDef:
    n: int


@dataclass(frozen=True)
class ProductDef:
    left: str
    right: str


@dataclass(frozen=True)
class GlueChart:
    name: str
    monoid: str


@dataclass(frozen=True)
class GlueOverlap:
    chart_a: str
    chart_b: str
    monoid: str
    maps_a: tuple[tuple[str, Word], ...]
    maps_b: tuple[tuple[str, Word], ...]


@dataclass(frozen=True)
class GlueDef:
    charts: tuple[GlueChart, ...]
    overlaps: tuple[GlueOverlap, ...]


@dataclass(frozen=True)
class TaskDef:
    op: str
    args: tuple[str, ...]


@dataclass(frozen=True)
class Manifest:
    monoids: tuple[MonoidDef, ...]
    schemes: tuple[tuple[str, object], ...]
    tasks: tuple[TaskDef, ...]


# -- tokenizer -------------------------------------------------------------------


@dataclass(frozen=True)
class Token:
    kind: str  # id, int, punct
    text: str
    line: int
    col: int


_PUNCT = ("->", "{", "}", "(", ")", ";", ":", ",", "=", "^")


def tokenize(text: str) -> list[Token]:
    tokens = []
    line, col = 1, 1
    i = 0
    while i < len(text):
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if ch == "#":
            while i < len(text) and text[i] != "\n":
                i += 1
            continue
        matched = None
        for p in _PUNCT:
            if text.startswith(p, i):
                matched = p
                break
        if matched:
            tokens.append(Token("punct", matched, line, col))
            i += len(matched)
            col += len(matched)
            continue
        if ch.isdigit() or (ch == "-" and i + 1 < len(text) and text[i + 1].isdigit()):
            j = i + 1
            while j < len(text) and text[j].isdigit():
                j += 1
            tokens.append(Token("int", text[i:j], line, col))
            col += j - i
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < len(text) and (text[j].isalnum() or text[j] in "_-'"):
                if text.startswith("->", j):
                    break
                j += 1
            tokens.append(Token("id", text[i:j], line, col))
            col += j - i
            i = j
            continue
        raise ParseError(f"unexpected character {ch!r}", line, col)
    return tokens


class _Parser:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.pos = 0

    def peek(self, ahead: int = 0) -> Optional[Token]:
        k = self.pos + ahead
        return self.tokens[k] if k < len(self.tokens) else None

    def next(self) -> Token:
        tok = self.peek()
        if tok is None:
            last = self.tokens[-1] if self.tokens else Token("punct", "", 1, 1)
            raise ParseError("unexpected end of input", last.line, last.col)
        self.pos += 1
        return tok

    def expect(self, text: str) -> Token:
        tok = self.next()
        if tok.text != text:
            raise ParseError(f"expected {text!r}, found {tok.text!r}", tok.line, tok.col)
        return tok

    def expect_kind(self, kind: str) -> Token:
        tok = self.next()
        if tok.kind != kind:
            raise ParseError(f"expected {kind}, found {tok.text!r}", tok.line, tok.col)
        return tok

    # -- grammar ------------------------------------------------------------

    def manifest(self) -> Manifest:
        monoids = []
        schemes = []
        tasks = []
        while self.peek() is not None:
            tok = self.peek()
            if tok.text == "monoid":
                monoids.append(self.monoid_def())
            elif tok.text == "scheme":
                schemes.append(self.scheme_def())
            elif tok.text == "compute":
                tasks.append(self.compute())
            else:
                raise ParseError(
                    f"expected monoid/scheme/compute, found {tok.text!r}",
                    tok.line,
                    tok.col,
                )
        return Manifest(tuple(monoids), tuple(schemes), tuple(tasks))

    def monoid_def(self) -> MonoidDef:
        self.expect("monoid")
        name = self.expect_kind("id").text
        self.expect("{")
        self.expect("gens")
        self.expect(":")
        gens = []
        while self.peek().kind == "id":
            gens.append(self.next().text)
        self.expect(";")
        inverted: list[str] = []
        relations = []
        while self.peek().text != "}":
            key = self.expect_kind("id").text
            self.expect(":")
            if key == "inv":
                while self.peek().kind == "id":
                    inverted.append(self.next().text)
                self.expect(";")
            elif key == "rel":
                lhs = self.word(gens)
                self.expect("=")
                rhs = self.word(gens)
                self.expect(";")
                relations.append((lhs, rhs))
            else:
                tok = self.peek()
                raise ParseError(f"unknown section {key!r}", tok.line, tok.col)
        self.expect("}")
        return MonoidDef(name, tuple(gens), tuple(inverted), tuple(relations))

    def word(self, gens: Sequence[str]) -> Word:
        tok = self.peek()
        if tok.kind == "int" and tok.text == "1":
            self.next()
            return ()
        exponents: dict[str, int] = {}
        order = {g: i for i, g in enumerate(gens)}
        saw = False
        while self.peek() is not None and self.peek().kind == "id":
            name = self.next().text
            if name not in order:
                raise ParseError(f"unknown generator {name!r}", tok.line, tok.col)
            exp = 1
            if self.peek() is not None and self.peek().text == "^":
                self.next()
                exp = int(self.expect_kind("int").text)
            exponents[name] = exponents.get(name, 0) + exp
            saw = True
        if not saw:
            raise ParseError("expected a word", tok.line, tok.col)
        return tuple(
            (g, exponents[g]) for g in sorted(exponents, key=order.get) if exponents[g]
        )

    def scheme_def(self):
        self.expect("scheme")
        name = self.expect_kind("id").text
        self.expect("=")
        head = self.next()
        if head.text == "spec":
            self.expect("(")
            target = self.expect_kind("id").text
            self.expect(")")
            self.expect(";")
            return (name, SpecDef(target))
        if head.text == "P":
            self.expect("(")
            n = int(self.expect_kind("int").text)
            self.expect(")")
            self.expect(";")
            return (name, ProjectiveDef(n))
        if head.text == "product":
            self.expect("(")
            left = self.expect_kind("id").text
            self.expect(",")
            right = self.expect_kind("id").text
            self.expect(")")
            self.expect(";")
            return (name, ProductDef(left, right))
        if head.text == "glue":
            return (name, self.glue_body(name))
        raise ParseError(f"unknown scheme form {head.text!r}", head.line, head.col)

    def glue_body(self, name: str) -> GlueDef:
        self.expect("{")
        charts: list[GlueChart] = []
        overlaps: list[GlueOverlap] = []
        while self.peek().text != "}":
            key = self.expect_kind("id").text
            if key == "chart":
                cname = self.expect_kind("id").text
                self.expect("=")
                self.expect("spec")
                self.expect("(")
                target = self.expect_kind("id").text
                self.expect(")")
                self.expect(";")
                charts.append(GlueChart(cname, target))
            elif key == "overlap":
                a = self.expect_kind("id").text
                b = self.expect_kind("id").text
                self.expect("=")
                self.expect("spec")
                self.expect("(")
                target = self.expect_kind("id").text
                self.expect(")")
                self.expect("via")
                side1 = self.expect_kind("id").text
                self.expect(":")
                maps1 = self.maplist()
                self.expect(",")
                side2 = self.expect_kind("id").text
                self.expect(":")
                maps2 = self.maplist()
                self.expect(";")
                sides = {side1: maps1, side2: maps2}
                if set(sides) != {a, b}:
                    tok = self.peek()
                    raise ParseError(
                        f"overlap maps must name charts {a!r} and {b!r}",
                        tok.line if tok else 0,
                        tok.col if tok else 0,
                    )
                overlaps.append(GlueOverlap(a, b, target, sides[a], sides[b]))
            else:
                tok = self.peek()
                raise ParseError(f"unknown glue item {key!r}", tok.line, tok.col)
        self.expect("}")
        self.expect(";")
        return GlueDef(tuple(charts), tuple(overlaps))

    def maplist(self) -> tuple[tuple[str, Word], ...]:
        out = []
        while True:
            src = self.expect_kind("id").text
            self.expect("->")
            # overlap generator words are validated during elaboration
            word = self.free_word()
            out.append((src, word))
            nxt = self.peek()
            if nxt is None or nxt.text != ",":
                break
            # a comma followed by `id :` starts the other chart's maplist
            after = self.peek(1)
            after2 = self.peek(2)
            if after is not None and after.kind == "id" and after2 is not None and after2.text == ":":
                break
            self.next()
        return tuple(out)

    def free_word(self) -> Word:
        tok = self.peek()
        if tok.kind == "int" and tok.text == "1":
            self.next()
            return ()
        out: dict[str, int] = {}
        order: list[str] = []
        while self.peek() is not None and self.peek().kind == "id":
            name = self.next().text
            exp = 1
            if self.peek() is not None and self.peek().text == "^":
                self.next()
                exp = int(self.expect_kind("int").text)
            if name not in out:
                out[name] = 0
                order.append(name)
            out[name] += exp
        if not order:
            raise ParseError("expected a word", tok.line, tok.col)
        return tuple((g, out[g]) for g in order if out[g])

    def compute(self) -> TaskDef:
        self.expect("compute")
        op = self.expect_kind("id").text
        self.expect("(")
        args = []
        while self.peek().text != ")":
            tok = self.next()
            if tok.kind not in ("id", "int"):
                raise ParseError(f"bad task argument {tok.text!r}", tok.line, tok.col)
            args.append(tok.text)
            if self.peek().text == ",":
                self.next()
        self.expect(")")
        self.expect(";")
        return TaskDef(op, tuple(args))


def parse(text: str) -> Manifest:
    manifest = _Parser(tokenize(text)).manifest()
    _validate(manifest)
    return manifest


def _validate(manifest: Manifest):
    names = [m.name for m in manifest.monoids] + [n for n, _ in manifest.schemes]
    if len(set(names)) != len(names):
        dupes = sorted({n for n in names if names.count(n) > 1})
        raise ManifestError(f"duplicate names: {dupes}")
    monoid_names = {m.name for m in manifest.monoids}
    scheme_names = {n for n, _ in manifest.schemes}
    for n, body in manifest.schemes:
        if isinstance(body, SpecDef) and body.monoid not in monoid_names:
            raise ManifestError(f"scheme {n}: unknown monoid {body.monoid!r}")
        if isinstance(body, ProductDef):
            for ref in (body.left, body.right):
                if ref not in scheme_names:
                    raise ManifestError(f"scheme {n}: unknown scheme {ref!r}")
        if isinstance(body, GlueDef):
            chart_names = [c.name for c in body.charts]
            if len(set(chart_names)) != len(chart_names):
                raise ManifestError(f"scheme {n}: duplicate chart names")
            for c in body.charts:
                if c.monoid not in monoid_names:
                    raise ManifestError(f"scheme {n}: unknown monoid {c.monoid!r}")
            for ov in body.overlaps:
                if ov.monoid not in monoid_names:
                    raise ManifestError(f"scheme {n}: unknown monoid {ov.monoid!r}")
                for ch in (ov.chart_a, ov.chart_b):
                    if ch not in chart_names:
                        raise ManifestError(f"scheme {n}: unknown chart {ch!r}")


def render(manifest: Manifest) -> str:
    """Deterministic text form; parsing it back gives an equal Manifest."""

    def word(w: Word) -> str:
        if not w:
            return "1"
        return " ".join(g if e == 1 else f"{g}^{e}" for g, e in w)

    lines = []
    for m in manifest.monoids:
        body = [f"gens: {' '.join(m.gens)};"]
        if m.inverted:
            body.append(f"inv: {' '.join(m.inverted)};")
        for l, r in m.relations:
            body.append(f"rel: {word(l)} = {word(r)};")
        lines.append(f"monoid {m.name} {{ {' '.join(body)} }}")
    for name, body in manifest.schemes:
        if isinstance(body, SpecDef):
            lines.append(f"scheme {name} = spec({body.monoid});")
        elif isinstance(body, ProjectiveDef):
            lines.append(f"scheme {name} = P({body.n});")
        elif isinstance(body, ProductDef):
            lines.append(f"scheme {name} = product({body.left}, {body.right});")
        elif isinstance(body, GlueDef):
            items = []
            for c in body.charts:
                items.append(f"chart {c.name} = spec({c.monoid});")
            for ov in body.overlaps:
                ma = ", ".join(f"{g} -> {word(w)}" for g, w in ov.maps_a)
                mb = ", ".join(f"{g} -> {word(w)}" for g, w in ov.maps_b)
                items.append(
                    f"overlap {ov.chart_a} {ov.chart_b} = spec({ov.monoid})"
                    f" via {ov.chart_a}: {ma}, {ov.chart_b}: {mb};"
                )
            lines.append(f"scheme {name} = glue {{ {' '.join(items)} }};")
    for t in manifest.tasks:
        lines.append(f"compute {t.op}({', '.join(t.args)});")
    return "\n".join(lines) + "\n"


# -- elaboration -------------------------------------------------------------------


def _word_vec(pres: MonoidPresentation, w: Word) -> tuple[int, ...]:
    return pres.vector({g: e for g, e in w})


class Workspace:
    """Resolved manifest objects, built on demand with cycle detection."""

    def __init__(self, manifest: Manifest):
        self.manifest = manifest
        self.monoids: dict[str, MonoidPresentation] = {}
        for m in manifest.monoids:
            rels = []
            pres0 = MonoidPresentation(m.gens, (), m.inverted)
            for l, r in m.relations:
                rels.append((_word_vec(pres0, l), _word_vec(pres0, r)))
            self.monoids[m.name] = MonoidPresentation(m.gens, rels, m.inverted)
        self._scheme_defs = dict(manifest.schemes)
        self._schemes: dict[str, Scheme] = {}
        self._building: set[str] = set()

    def scheme(self, name: str) -> Scheme:
        if name in self._schemes:
            return self._schemes[name]
        if name not in self._scheme_defs:
            raise ManifestError(f"unknown scheme {name!r}")
        if name in self._building:
            raise ManifestError(f"cyclic scheme definition through {name!r}")
        self._building.add(name)
        try:
            body = self._scheme_defs[name]
            if isinstance(body, SpecDef):
                built = spec(self.monoids[body.monoid])
            elif isinstance(body, ProjectiveDef):
                built = projective_space(body.n)
            elif isinstance(body, ProductDef):
                built = product(self.scheme(body.left), self.scheme(body.right))
            elif isinstance(body, GlueDef):
                built = self._build_glue(body)
            else:
                raise ManifestError(f"unknown scheme body {body!r}")
        finally:
            self._building.discard(name)
        self._schemes[name] = built
        return built

    def _build_glue(self, body: GlueDef) -> Scheme:
        charts = [self.monoids[c.monoid] for c in body.charts]
        index = {c.name: k for k, c in enumerate(body.charts)}
        overlaps = []
        for ov in body.overlaps:
            w = self.monoids[ov.monoid]
            i, j = index[ov.chart_a], index[ov.chart_b]

            def hom(chart_idx: int, maps) -> MonoidHom:
                chart = charts[chart_idx]
                given = dict(maps)
                images = []
                for g in chart.gens:
                    if g not in given:
                        raise ManifestError(
                            f"overlap map misses chart generator {g!r}"
                        )
                    images.append(_word_vec(w, given[g]))
                return MonoidHom(chart, w, images)

            overlaps.append(Overlap(i, j, w, hom(i, ov.maps_a), hom(j, ov.maps_b)))
        return glue(charts, overlaps, chart_names=[c.name for c in body.charts])

    def target(self, name: str):
        if name in self.monoids:
            return self.monoids[name]
        return self.scheme(name)


# -- running tasks -------------------------------------------------------------------


def _bool_str(value: bool) -> str:
    return "true" if value else "false"


def run_task(ws: Workspace, task: TaskDef, bound: int, default_degree: Optional[int] = None) -> str:
    op, args = task.op, task.args
    if op == "spec":
        x = spec(ws.monoids[args[0]])
        lines = [f"points: {len(x.poset.points)}  dimension: {x.dimension()}"]
        for p in x.poset.points:
            lines.append(f"prime {x.label(p)}")
        for a, b in x.poset.covers():
            lines.append(f"hasse {x.label(a)} < {x.label(b)}")
        return "\n".join(lines)
    if op == "pic":
        return str(invariants.pic(ws.scheme(args[0])))
    if op == "unit_cohomology":
        x = ws.scheme(args[0])
        if len(args) > 1:
            degree = int(args[1])
        else:
            degree = default_degree if default_degree is not None else 1
        return str(invariants.unit_cohomology(x, degree))
    if op == "s_class_group":
        return str(invariants.s_class_group(ws.scheme(args[0])))
    if op == "cartier_class_group":
        result = invariants.cartier_class_group(ws.scheme(args[0]), bound)
        return f"{result.group} (cancellativity verified to degree {result.cancellativity_bound})"
    if op == "units":
        u = units(ws.monoids[args[0]])
        return str(u.group)
    if op == "grothendieck":
        return str(grothendieck_group(ws.monoids[args[0]]))
    if op == "export":
        return invariants.export_algebra(ws.monoids[args[0]]).rstrip("\n")
    if op == "dimension":
        return str(ws.scheme(args[0]).dimension())
    if op == "vanishing":
        x = ws.scheme(args[0])
        report = invariants.vanishing_check(x)
        lines = [
            f"H^{i} = {g}" for i, g in sorted(report.groups.items())
        ] or ["no degrees to check"]
        if report.s_smooth is not None:
            lines.append(f"s-smooth: {_bool_str(report.s_smooth)}")
        lines.append("violations: none" if report.ok() else f"violations: {report.violations}")
        return "\n".join(lines)
    if op == "check":
        return _run_check(ws, args, bound)
    raise ManifestError(f"unknown task {op!r}")


def _run_check(ws: Workspace, args: Sequence[str], bound: int) -> str:
    prop, target_name = args[0], args[1]
    target = ws.target(target_name)
    is_monoid = isinstance(target, MonoidPresentation)
    if prop == "cancellative":
        verdict = (
            is_cancellative(target, bound) if is_monoid else target.is_cancellative(bound)
        )
        if verdict:
            return f"true (verified to degree {verdict.bound})"
        if is_monoid and all(v is not None for v in verdict.witness):
            x, y, a = (target.word(v) for v in verdict.witness)
            return f"false; counterexample (x, y, a) = ({x}, {y}, {a})"
        return f"false; counterexample (x, y, a) = {verdict.witness}"
    if prop == "s-cancellative":
        if is_monoid:
            result = is_s_cancellative(target)
            if result.holds:
                return "true"
            q, p, elem = result.failure
            return f"false; unit kernel between {p} and {q}: {elem}"
        holds, witness = target.is_s_cancellative()
        return "true" if holds else f"false; failure at covering pair {witness[:2]}"
    if prop == "smooth":
        if is_monoid:
            verdict = is_smooth_monoid(target, bound)
            return f"{_bool_str(verdict.value)} (bound {verdict.bound})"
        return _bool_str(target.is_smooth(bound))
    if prop == "torsion-free":
        if is_monoid:
            verdict = is_torsion_free(target, bound)
            return f"{_bool_str(verdict.value)} (bound {verdict.bound})"
        return _bool_str(target.is_torsion_free(bound))
    if prop == "seminormal":
        if not is_monoid:
            raise ManifestError("seminormal applies to monoids")
        verdict = is_seminormal(target, bound)
        out = f"{_bool_str(verdict.value)} (bound {verdict.bound})"
        if verdict.witness is not None:
            out += f"; witness {verdict.witness}"
        return out
    if prop == "s-smooth":
        x = spec(target) if is_monoid else target
        result = invariants.is_s_smooth(x)
        if not result.flasque:
            point, _ = result.failure
            return f"false; not split at {x.label(point)}"
        entries = [
            f"{g} at {x.label(p)}"
            for p, g in result.collection.items()
            if not g.is_zero()
        ]
        return "true; collection: " + (", ".join(entries) if entries else "trivial")
    if prop == "separated":
        return _bool_str(ws.scheme(target_name).separated)
    if prop == "connected":
        return _bool_str(ws.scheme(target_name).is_connected())
    raise ManifestError(f"unknown check property {prop!r}")


def run(manifest: Manifest, bound: int = 8, check_oracles: bool = False,
        parallel: bool = False, as_json: bool = False,
        default_degree: Optional[int] = None) -> tuple[str, int]:
    """Execute all tasks; returns (report, exit_code)."""
    ws = Workspace(manifest)
    results = []

    def execute(task):
        try:
            body = run_task(ws, task, bound, default_degree)
            return {"task": f"{task.op}({', '.join(task.args)})", "status": "ok", "result": body}
        except MonoidSchemeError as exc:
            return {
                "task": f"{task.op}({', '.join(task.args)})",
                "status": "error",
                "error": f"{type(exc).__name__}: {exc}",
            }

    if parallel and len(manifest.tasks) > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=4) as pool:
            results = list(pool.map(execute, manifest.tasks))
    else:
        results = [execute(t) for t in manifest.tasks]

    if check_oracles:
        from .sheaf import order_cochain, reduced_cech, separated_certificate

        for name in sorted(ws._schemes):
            x = ws._schemes[name]
            if not (x.is_connected() and separated_certificate(x.poset)):
                continue
            sheaf = x.units_sheaf()
            order = order_cochain(sheaf)
            covering = reduced_cech(sheaf)
            agree = all(
                order.cohomology(i).canonical() == covering.cohomology(i).canonical()
                for i in range(x.dimension() + 2)
            )
            results.append(
                {
                    "task": f"oracle({name})",
                    "status": "ok" if agree else "error",
                    "result": "cohomology models agree in all degrees"
                    if agree
                    else None,
                    **({} if agree else {"error": "ModelDisagreement"}),
                }
            )

    failed = any(r["status"] == "error" for r in results)
    if as_json:
        payload = {"bound": bound, "check_oracles": check_oracles, "tasks": results}
        return json.dumps(payload, sort_keys=True, indent=2) + "\n", 1 if failed else 0
    lines = ["# monoidscheme report", f"# bound: {bound}"]
    for r in results:
        lines.append("")
        lines.append(f"== compute {r['task']} ==")
        lines.append(r["result"] if r["status"] == "ok" else f"error: {r['error']}")
    return "\n".join(lines) + "\n", 1 if failed else 0


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = argparse.ArgumentParser(
        prog="monoidscheme",
        description="invariants of monoid schemes of finite type",
    )
    parser.add_argument("file", help="manifest file, or - for stdin")
    parser.add_argument("--bound", type=int, default=8, help="global search bound")
    parser.add_argument("--degree", type=int, default=None, help="default cohomology degree")
    parser.add_argument("--json", action="store_true", help="machine-readable report")
    parser.add_argument(
        "--check-oracles",
        action="store_true",
        help="cross-check the two cohomology models on every task",
    )
    parser.add_argument("--parallel", action="store_true", help="run independent tasks concurrently")
    args = parser.parse_args(argv)
    try:
        text = sys.stdin.read() if args.file == "-" else open(args.file, encoding="utf-8").read()
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    try:
        manifest = parse(text)
    except (ParseError, ManifestError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    try:
        report, code = run(
            manifest,
            bound=args.bound,
            check_oracles=args.check_oracles,
            parallel=args.parallel,
            as_json=args.json,
            default_degree=args.degree,
        )
    except MonoidSchemeError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    sys.stdout.write(report)
    return code


if __name__ == "__main__":
    sys.exit(main())
