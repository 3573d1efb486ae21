"""Line-oriented fixture format for splittings, paths, maps and subgroups.

    # comment
    splitting G4 basis a b c d
      vertices p q
      edge a: p -> p label a
      edge e: p -> q
      collapsed a b c d
    path alpha in G4: e c d c^-1 d^-1 e^-1 a b a^-1 b^-1 e
    map fib: R2 -> R2
      vertex v -> v
      edge a -> a b
    subgroup H in F2: ab, a^-1

Indented lines belong to the most recent splitting or map block.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .core import BaseGraph, FreeSplitting, GraphMorphism, format_path, parse_path
from .errors import ParseError, ValidationError
from .subgroup import StallingsGraph
from .words import Basis

NAME = r"[A-Za-z_][A-Za-z0-9_.~^']*"


@dataclass
class PathEntry:
    split: str
    path: tuple


@dataclass
class MapEntry:
    domain: str
    codomain: str
    morphism: GraphMorphism


@dataclass
class SubgroupEntry:
    rank: int
    generators: tuple
    graph: StallingsGraph


@dataclass
class Fixture:
    splittings: dict = field(default_factory=dict)
    paths: dict = field(default_factory=dict)
    maps: dict = field(default_factory=dict)
    subgroups: dict = field(default_factory=dict)

    def path(self, name: str | None = None) -> tuple:
        """(splitting, path) for a named path, or the only one."""
        entry = _pick(self.paths, name, "path")
        return self.splittings[entry.split], entry.path

    def map(self, name: str | None = None) -> GraphMorphism:
        return _pick(self.maps, name, "map").morphism

    def merge(self, other: "Fixture") -> "Fixture":
        """Union of two fixtures; a name may repeat only with an identical definition."""
        out = Fixture(dict(self.splittings), dict(self.paths), dict(self.maps), dict(self.subgroups))
        for attr in ("splittings", "paths", "maps", "subgroups"):
            for k, v in getattr(other, attr).items():
                if k in getattr(out, attr) and getattr(out, attr)[k] != v:
                    raise ValidationError(f"duplicate {attr[:-1]} name {k}")
                getattr(out, attr)[k] = v
        return out


def _pick(table: dict, name, kind: str):
    if name is None:
        if len(table) != 1:
            raise ValidationError(f"fixture has {len(table)} {kind}s; choose one by name")
        return next(iter(table.values()))
    if name not in table:
        raise ValidationError(f"unknown {kind} {name!r}")
    return table[name]


# ---------------------------------------------------------------------------
# parsing


class _Block:
    def __init__(self, kind, name, line, **kw):
        self.kind, self.name, self.line = kind, name, line
        self.vertices: list = []
        self.edges: dict = {}
        self.labels: dict = {}
        self.collapsed: list = []
        self.vmap: dict = {}
        self.emap: dict = {}
        self.__dict__.update(kw)


def parse_fixture(text: str) -> Fixture:
    fx = Fixture()
    block = None

    def close():
        nonlocal block
        if block is not None:
            _finish(fx, block)
        block = None

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        indented = line[0] in " \t"
        body = line.strip()
        col = len(line) - len(line.lstrip()) + 1
        try:
            if indented:
                if block is None:
                    raise ParseError("indented line outside a block", lineno, col)
                _block_line(block, body, lineno, col)
                continue
            close()
            head = body.split(None, 1)[0]
            if head == "splitting":
                m = re.fullmatch(rf"splitting ({NAME})(?: basis ((?:\S+ ?)+)| rank (\d+))?", body)
                if not m:
                    raise ParseError("expected 'splitting NAME basis x y ...' or 'splitting NAME rank n'", lineno, col)
                name = m.group(1)
                if m.group(2):
                    basis = Basis(tuple(m.group(2).split()))
                elif m.group(3):
                    basis = Basis.standard(int(m.group(3)))
                else:
                    raise ParseError("splitting needs a basis or a rank", lineno, col)
                _fresh(fx, name, lineno, col)
                block = _Block("splitting", name, lineno, basis=basis)
            elif head == "map":
                m = re.fullmatch(rf"map ({NAME}): ({NAME}) -> ({NAME})", body)
                if not m:
                    raise ParseError("expected 'map NAME: DOMAIN -> CODOMAIN'", lineno, col)
                name, dom, cod = m.groups()
                for ref in (dom, cod):
                    if ref not in fx.splittings:
                        raise ParseError(f"unknown splitting {ref!r}", lineno, body.index(ref) + col)
                _fresh(fx, name, lineno, col)
                block = _Block("map", name, lineno, domain=dom, codomain=cod)
            elif head == "path":
                m = re.fullmatch(rf"path ({NAME}) in ({NAME}):(.*)", body)
                if not m:
                    raise ParseError("expected 'path NAME in SPLITTING: edges'", lineno, col)
                name, sp, rest = m.groups()
                if sp not in fx.splittings:
                    raise ParseError(f"unknown splitting {sp!r}", lineno, body.index(sp) + col)
                _fresh(fx, name, lineno, col)
                split = fx.splittings[sp]
                path = split.base.check_path(parse_path(rest), immersed=False)
                fx.paths[name] = PathEntry(sp, path)
            elif head == "subgroup":
                m = re.fullmatch(rf"subgroup ({NAME}) in F(\d+):(.*)", body)
                if not m:
                    raise ParseError("expected 'subgroup NAME in Fn: w1, w2, ...'", lineno, col)
                name, n, rest = m.group(1), int(m.group(2)), m.group(3)
                _fresh(fx, name, lineno, col)
                basis = Basis.standard(n)
                gens = tuple(basis.parse(w) for w in rest.split(",") if w.strip())
                fx.subgroups[name] = SubgroupEntry(n, gens, StallingsGraph.from_generators(gens, n))
            else:
                raise ParseError(f"unknown directive {head!r}", lineno, col)
        except ParseError:
            raise
        except ValidationError as exc:
            raise ParseError(str(exc), lineno, col) from None
    try:
        close()
    except ParseError:
        raise
    except ValidationError as exc:
        raise ParseError(str(exc), block.line if block else 0, 1) from None
    return fx


def _fresh(fx: Fixture, name: str, lineno: int, col: int) -> None:
    for table in (fx.splittings, fx.paths, fx.maps, fx.subgroups):
        if name in table:
            raise ParseError(f"duplicate name {name!r}", lineno, col)


def _block_line(block: _Block, body: str, lineno: int, col: int) -> None:
    if block.kind == "splitting":
        if body.startswith("vertices"):
            block.vertices.extend(body.split()[1:])
            return
        if body.startswith("collapsed"):
            block.collapsed.extend(body.split()[1:])
            return
        m = re.fullmatch(rf"edge ({NAME}): ({NAME}) -> ({NAME})(?: label (.+))?", body)
        if not m:
            raise ParseError("expected 'edge NAME: V -> W [label WORD]'", lineno, col)
        nm, s, t, lab = m.groups()
        if nm in block.edges:
            raise ParseError(f"duplicate edge {nm!r}", lineno, col)
        block.edges[nm] = (s, t)
        if lab is not None:
            block.labels[nm] = block.basis.parse(lab)
        return
    m = re.fullmatch(rf"vertex ({NAME}) -> ({NAME})", body)
    if m:
        block.vmap[m.group(1)] = m.group(2)
        return
    m = re.fullmatch(rf"edge ({NAME}) ->(.*)", body)
    if m:
        block.emap[m.group(1)] = parse_path(m.group(2))
        return
    raise ParseError("expected 'vertex V -> W' or 'edge E -> path'", lineno, col)


def _finish(fx: Fixture, block: _Block) -> None:
    if block.kind == "splitting":
        labels = {k: v for k, v in block.labels.items() if v}
        G = BaseGraph.build(block.basis, block.vertices, block.edges, labels)
        fx.splittings[block.name] = FreeSplitting(G, frozenset(block.collapsed))
        return
    dom = fx.splittings[block.domain].base
    cod = fx.splittings[block.codomain].base
    vmap = dict(block.vmap)
    if len(dom.vertices) == 1 and len(cod.vertices) == 1 and not vmap:
        vmap = {dom.vertices[0]: cod.vertices[0]}
    fx.maps[block.name] = MapEntry(block.domain, block.codomain, GraphMorphism.build(dom, cod, vmap, block.emap))


# ---------------------------------------------------------------------------
# emitting


def emit_splitting(name: str, split: FreeSplitting) -> list:
    G = split.base
    lines = [f"splitting {name} basis {' '.join(G.basis.names)}", f"  vertices {' '.join(G.vertices)}"]
    for nm, s, t in G.edges:
        lab = G.edge_label(nm)
        lines.append(f"  edge {nm}: {s} -> {t}" + (f" label {G.basis.format(lab)}" if lab else ""))
    if split.collapsed:
        lines.append(f"  collapsed {' '.join(sorted(split.collapsed))}")
    return lines


def emit_map(name: str, dom: str, cod: str, f: GraphMorphism) -> list:
    lines = [f"map {name}: {dom} -> {cod}"]
    for v in f.domain.vertices:
        lines.append(f"  vertex {v} -> {f.vertex(v)}")
    for nm in f.domain.edge_names:
        lines.append(f"  edge {nm} -> {format_path(f.image((nm, 1)))}".rstrip())
    return lines


def emit_fixture(fx: Fixture) -> str:
    lines: list = []
    for name, split in fx.splittings.items():
        lines += emit_splitting(name, split)
    for name, p in fx.paths.items():
        lines.append(f"path {name} in {p.split}: {format_path(p.path)}")
    for name, m in fx.maps.items():
        lines += emit_map(name, m.domain, m.codomain, m.morphism)
    for name, sg in fx.subgroups.items():
        basis = Basis.standard(sg.rank)
        lines.append(f"subgroup {name} in F{sg.rank}: " + ", ".join(basis.format(g) for g in sg.generators))
    return "\n".join(lines) + ("\n" if lines else "")


# ---------------------------------------------------------------------------
# files and the bundled corpus


def corpus_files() -> list:
    root = resources.files("splitfold") / "corpus"
    return sorted(p.name for p in root.iterdir() if p.name.endswith(".sfd"))


def corpus_text(name: str) -> str:
    return (resources.files("splitfold") / "corpus" / name).read_text(encoding="utf-8")


def resolve(path: str) -> str:
    """Read a fixture file, falling back to the bundled corpus by file name."""
    p = Path(path)
    if p.exists():
        return p.read_text(encoding="utf-8")
    if p.name in corpus_files():
        return corpus_text(p.name)
    raise ValidationError(f"fixture file not found: {path}")


def load(paths) -> Fixture:
    if isinstance(paths, str):
        paths = [paths]
    fx = Fixture()
    for p in paths:
        fx = fx.merge(parse_fixture(resolve(p)))
    return fx
