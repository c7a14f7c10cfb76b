"""Finite combinatorial 2-complexes, boundary words, and vertex links.

A complex is a set of vertices, a list of oriented edges, and a list of
2-cells attached along cyclic words of signed edges.  The link of a vertex
is the multigraph whose nodes are edge-ends at that vertex and whose edges
are the corners cut out by consecutive boundary letters.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

from .errors import ComplexError, NotAWalk


class Letter(NamedTuple):
    """A signed edge traversal in a boundary word, written ``a`` or ``a-``."""

    edge: str
    sign: int

    def inverse(self):
        return Letter(self.edge, -self.sign)

    def __str__(self):
        return self.edge if self.sign > 0 else self.edge + "-"


def parse_letter(token):
    token = token.strip()
    if token.endswith("-"):
        name = token[:-1]
        sign = -1
    else:
        name, sign = token, 1
    if not name:
        raise ComplexError(f"empty edge name in letter {token!r}")
    return Letter(name, sign)


Word = "tuple[Letter, ...]"


def coerce_word(word):
    """Accept a word given as a string (``"a b a- b-"``) or a letter sequence."""
    if isinstance(word, str):
        return tuple(parse_letter(tok) for tok in word.split())
    out = []
    for item in word:
        if isinstance(item, Letter):
            out.append(item)
        elif isinstance(item, str):
            out.append(parse_letter(item))
        else:
            out.append(Letter(str(item[0]), int(item[1])))
    return tuple(out)


def word_inverse(word):
    return tuple(letter.inverse() for letter in reversed(word))


def rotate_word(word, r):
    r %= len(word)
    return word[r:] + word[:r]


def format_word(word):
    return " ".join(str(letter) for letter in word)


class LinkNode(NamedTuple):
    """An edge-end in a vertex link: ``a+`` is the head end, ``a-`` the tail end."""

    edge: str
    end: int

    def __str__(self):
        return self.edge + ("+" if self.end > 0 else "-")


def parse_link_node(token):
    token = token.strip()
    if token.endswith("+"):
        return LinkNode(token[:-1], 1)
    if token.endswith("-"):
        return LinkNode(token[:-1], -1)
    raise ComplexError(f"link node {token!r} must end in + or -")


def head_node(letter):
    """Node where a traversal of ``letter`` arrives."""
    return LinkNode(letter.edge, letter.sign)


def tail_node(letter):
    """Node a traversal of ``letter`` departs from."""
    return LinkNode(letter.edge, -letter.sign)


class Edge(NamedTuple):
    id: str
    source: str
    target: str


class Cell(NamedTuple):
    id: str
    word: tuple


class Corner(NamedTuple):
    """A link edge: the corner of ``cell`` between boundary positions ``position``
    and ``position + 1`` (cyclically).  ``nodes`` is the unordered endpoint pair,
    stored in the orientation induced by the boundary traversal."""

    cell: str
    position: int
    nodes: tuple

    @property
    def key(self):
        return (self.cell, self.position)

    def __str__(self):
        return f"{self.cell}:{self.position}[{self.nodes[0]},{self.nodes[1]}]"


class CornerStep(NamedTuple):
    """A directed traversal of a corner.  A step is never its own reverse,
    so a loop corner traversed once is a reduced cycle of length one."""

    corner: Corner
    reverse: bool = False

    @property
    def start(self):
        return self.corner.nodes[1] if self.reverse else self.corner.nodes[0]

    @property
    def end(self):
        return self.corner.nodes[0] if self.reverse else self.corner.nodes[1]

    def reversed_step(self):
        return CornerStep(self.corner, not self.reverse)


@dataclass(frozen=True)
class TwoComplex:
    vertices: tuple
    edges: tuple
    cells: tuple
    flags: tuple = ()

    def edge_map(self):
        return {e.id: e for e in self.edges}

    def cell_map(self):
        return {c.id: c for c in self.cells}

    @property
    def is_single_vertex(self):
        return len(self.vertices) == 1

    def letter_source(self, letter, emap=None):
        e = (emap or self.edge_map())[letter.edge]
        return e.source if letter.sign > 0 else e.target

    def letter_target(self, letter, emap=None):
        e = (emap or self.edge_map())[letter.edge]
        return e.target if letter.sign > 0 else e.source


def build_complex(edges, cells, vertices=None) -> TwoComplex:
    """Validate raw data and build a TwoComplex.

    Boundary words are stored as given.  Non-reduced words (a letter followed
    cyclically by its inverse) are legal but flagged, since several certificate
    hypotheses require reduced attaching words.
    """
    edge_list = []
    for item in edges:
        e = Edge(str(item[0]), str(item[1]), str(item[2]))
        edge_list.append(e)
    ids = [e.id for e in edge_list]
    if len(set(ids)) != len(ids):
        dup = next(i for i in ids if ids.count(i) > 1)
        raise ComplexError(f"duplicate edge id {dup!r}")

    seen_vertices = []
    for e in edge_list:
        for v in (e.source, e.target):
            if v not in seen_vertices:
                seen_vertices.append(v)
    if vertices is None:
        vertex_set = sorted(seen_vertices)
    else:
        vertex_set = sorted(str(v) for v in vertices)
        missing = [v for v in seen_vertices if v not in vertex_set]
        if missing:
            raise ComplexError(f"edge endpoint {missing[0]!r} not in vertex set")
    if len(set(vertex_set)) != len(vertex_set):
        raise ComplexError("duplicate vertex id")

    emap = {e.id: e for e in edge_list}
    cell_list = []
    flags = []
    for item in cells:
        cid = str(item[0])
        word = coerce_word(item[1])
        if not word:
            raise ComplexError(f"empty boundary word at cell {cid!r}")
        for letter in word:
            if letter.edge not in emap:
                raise ComplexError(f"unknown edge id {letter.edge!r} in cell {cid!r}")
        L = len(word)
        for i in range(L):
            u, w = word[i], word[(i + 1) % L]
            u_target = emap[u.edge].target if u.sign > 0 else emap[u.edge].source
            w_source = emap[w.edge].source if w.sign > 0 else emap[w.edge].target
            if u_target != w_source:
                raise ComplexError(
                    f"non-closed boundary path at cell {cid!r}: "
                    f"letter {u} ends at {u_target!r} but {w} starts at {w_source!r}"
                )
            if w == u.inverse():
                flags.append(
                    f"non-reduced boundary word at cell {cid} position ({i + 1},{(i + 1) % L + 1})"
                )
        cell_list.append(Cell(cid, word))
    cell_ids = [c.id for c in cell_list]
    if len(set(cell_ids)) != len(cell_ids):
        dup = next(i for i in cell_ids if cell_ids.count(i) > 1)
        raise ComplexError(f"duplicate cell id {dup!r}")

    return TwoComplex(
        vertices=tuple(vertex_set),
        edges=tuple(edge_list),
        cells=tuple(cell_list),
        flags=tuple(flags),
    )


def euler_characteristic(X: TwoComplex) -> int:
    return len(X.vertices) - len(X.edges) + len(X.cells)


@dataclass(frozen=True)
class LinkGraph:
    """The link at ``base``: a multigraph on edge-ends, whose edges are corners."""

    base: str
    nodes: tuple
    corners: tuple

    def euler_characteristic(self):
        return len(self.nodes) - len(self.corners)

    def steps(self):
        """All directed corner traversals, forward before reverse, in corner order."""
        out = []
        for c in self.corners:
            out.append(CornerStep(c, False))
            out.append(CornerStep(c, True))
        return out

    def adjacency(self):
        adj = {n: [] for n in self.nodes}
        for step in self.steps():
            adj[step.start].append(step)
        return adj

    def corner_keys(self):
        return {c.key for c in self.corners}


def link_graph(X: TwoComplex, v) -> LinkGraph:
    """Corner convention: consecutive letters (u, w) meeting at v contribute the
    corner joining head(u) and tail(w)."""
    if v not in X.vertices:
        raise ComplexError(f"vertex {v!r} not in complex")
    emap = X.edge_map()
    nodes = []
    for e in X.edges:
        if e.target == v:
            nodes.append(LinkNode(e.id, 1))
        if e.source == v:
            nodes.append(LinkNode(e.id, -1))
    corners = []
    for cell in X.cells:
        word = cell.word
        L = len(word)
        for i in range(L):
            u, w = word[i], word[(i + 1) % L]
            junction = emap[u.edge].target if u.sign > 0 else emap[u.edge].source
            if junction == v:
                corners.append(Corner(cell.id, i, (head_node(u), tail_node(w))))
    return LinkGraph(base=v, nodes=tuple(sorted(nodes)), corners=tuple(corners))


def all_links(X: TwoComplex):
    return {v: link_graph(X, v) for v in X.vertices}


def is_reduced_path(path, G: LinkGraph, cyclic=False) -> bool:
    """True iff no step immediately reverses the previous one.

    ``path`` is a sequence of CornerStep; it must be a walk in G (consecutive
    endpoints match; for ``cyclic`` also around the wrap), else NotAWalk.
    The wrap pair of a cycle is checked as well; a single loop step is a
    reduced cycle because a step never equals its own reverse.
    """
    steps = list(path)
    keys = G.corner_keys()
    for step in steps:
        if step.corner.key not in keys or step.corner not in G.corners:
            raise NotAWalk(f"corner {step.corner} not in link of {G.base!r}")
    for a, b in zip(steps, steps[1:]):
        if a.end != b.start:
            raise NotAWalk(f"step ending at {a.end} followed by step starting at {b.start}")
    if cyclic and steps and steps[-1].end != steps[0].start:
        raise NotAWalk("cycle does not close up")
    for a, b in zip(steps, steps[1:]):
        if b == a.reversed_step():
            return False
    if cyclic and steps and steps[0] == steps[-1].reversed_step():
        return False
    return True


def complex_to_jsonable(X: TwoComplex):
    return {
        "vertices": list(X.vertices),
        "edges": [[e.id, e.source, e.target] for e in X.edges],
        "cells": [[c.id, [str(l) for l in c.word]] for c in X.cells],
    }


def complex_from_jsonable(data) -> TwoComplex:
    return build_complex(
        edges=[tuple(e) for e in data["edges"]],
        cells=[(c[0], c[1]) for c in data["cells"]],
        vertices=data["vertices"],
    )
