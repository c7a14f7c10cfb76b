"""Spherical diagrams: validation, folding detection, and bounded search.

A sphere complex is a list of polygonal faces with boundary words over
sphere edges, each edge occurring exactly twice with opposite signs.  A
diagram map sends faces to cells of a target complex, aligned by a
rotation and an orientation, and sphere edges to edges of the target.

A diagram is reduced when the induced edge path around every sphere
vertex maps to a reduced path in the target link; equivalently no sphere
edge is a folding edge, i.e. its two sides map to the same cell at the
same boundary position with opposite orientations.  Both criteria are
computed and cross-checked.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from typing import NamedTuple

from . import caps
from .complexes import (
    Cell,
    CornerStep,
    Letter,
    TwoComplex,
    build_complex,
    link_graph,
    word_inverse,
)
from .curvature import AngleAssignment, CurvatureReport, TestVerdict, check_gauss_bonnet
from .errors import CapExceeded, IllFormedMap, InvariantViolation
from .unionfind import RollbackUnionFind, UnionFind


@dataclass(frozen=True)
class SphereComplex:
    faces: tuple  # Cell(id, word) with words over sphere edge letters

    def face_map(self):
        return {f.id: f for f in self.faces}

    def occurrences(self):
        """sphere edge id -> list of (face_id, position, sign)."""
        occ = {}
        for face in self.faces:
            for p, letter in enumerate(face.word):
                occ.setdefault(letter.edge, []).append((face.id, p, letter.sign))
        return occ

    def to_jsonable(self):
        return {"faces": {f.id: [str(l) for l in f.word] for f in self.faces}}


def sphere_from_jsonable(data) -> SphereComplex:
    from .complexes import coerce_word

    faces = tuple(Cell(str(fid), coerce_word(word)) for fid, word in sorted(data["faces"].items()))
    return SphereComplex(faces)


@dataclass(frozen=True)
class DiagramMap:
    labels: dict  # sphere edge id -> target edge id
    cellmap: dict  # face id -> (cell id, rotation, orientation)

    def to_jsonable(self):
        return {
            "labels": dict(sorted(self.labels.items())),
            "cellmap": {
                f: {"cell": c, "rotation": r, "orientation": o}
                for f, (c, r, o) in sorted(self.cellmap.items())
            },
        }


def diagram_map_from_jsonable(data) -> DiagramMap:
    labels = {str(k): str(v) for k, v in data["labels"].items()}
    cellmap = {
        str(f): (str(row["cell"]), int(row["rotation"]), int(row["orientation"]))
        for f, row in data["cellmap"].items()
    }
    return DiagramMap(labels, cellmap)


@dataclass(frozen=True)
class FoldingReport:
    folding: tuple  # (sphere edge id, target edge label) pairs
    reduced: bool
    distinct_edge_labels: int
    distinct_folding_labels: int
    nonreduced_vertices: tuple = ()

    def to_jsonable(self):
        return {
            "folding_edges": [list(pair) for pair in self.folding],
            "reduced": self.reduced,
            "distinct_edge_labels": self.distinct_edge_labels,
            "distinct_folding_labels": self.distinct_folding_labels,
            "nonreduced_vertices": [list(v) for v in self.nonreduced_vertices],
        }


# ---------------------------------------------------------------------------
# sphere structure


def _paired_occurrences(S: SphereComplex):
    """Edge id -> ((face, pos) of + occurrence, (face, pos) of - occurrence);
    None when the pairing is violated (witness produced by validate_sphere)."""
    pairs = {}
    for edge, occ in S.occurrences().items():
        if len(occ) != 2:
            return None, {"reason": "pairing", "edge": edge, "count": len(occ)}
        signs = sorted(o[2] for o in occ)
        if signs != [-1, 1]:
            return None, {"reason": "pairing", "edge": edge, "detail": "signs not opposite"}
        plus = next((f, p) for f, p, s in occ if s > 0)
        minus = next((f, p) for f, p, s in occ if s < 0)
        pairs[edge] = (plus, minus)
    return pairs, None


def _partner_table(S: SphereComplex, pairs):
    partner = {}
    for plus, minus in pairs.values():
        partner[plus] = minus
        partner[minus] = plus
    return partner


def _slot_orbits(S: SphereComplex, partner):
    """Orbits of corner slots under the rotation around sphere vertices.

    The slot after corner (f, p) is the corner of the partner of side
    (f, p + 1); orbits are the sphere vertices, listed in order of their
    smallest slot.
    """
    lengths = {f.id: len(f.word) for f in S.faces}
    slots = [(f.id, p) for f in S.faces for p in range(len(f.word))]
    nxt = {}
    for fid, p in slots:
        side = (fid, (p + 1) % lengths[fid])
        nxt[(fid, p)] = partner[side]
    orbits = []
    seen = set()
    for slot in slots:
        if slot in seen:
            continue
        orbit = []
        cur = slot
        while cur not in seen:
            seen.add(cur)
            orbit.append(cur)
            cur = nxt[cur]
        orbits.append(orbit)
    return orbits


def validate_sphere(S: SphereComplex) -> TestVerdict:
    """Pass iff edges pair up with opposite signs, the gluing is connected,
    and the Euler characteristic is 2."""
    if not S.faces:
        return TestVerdict(False, {"reason": "empty"})
    ids = [f.id for f in S.faces]
    if len(set(ids)) != len(ids):
        return TestVerdict(False, {"reason": "duplicate_face_id"})
    pairs, witness = _paired_occurrences(S)
    if witness is not None:
        return TestVerdict(False, witness)
    uf = UnionFind(f.id for f in S.faces)
    for plus, minus in pairs.values():
        uf.union(plus[0], minus[0])
    if uf.count != 1:
        return TestVerdict(False, {"reason": "disconnected", "components": uf.count})
    partner = _partner_table(S, pairs)
    orbits = _slot_orbits(S, partner)
    V = len(orbits)
    E = len(pairs)
    F = len(S.faces)
    chi = V - E + F
    if chi != 2:
        return TestVerdict(False, {"reason": "euler", "chi": chi, "V": V, "E": E, "F": F})
    return TestVerdict(True, None, notes={"V": V, "E": E, "F": F})


def sphere_to_complex(S: SphereComplex) -> TwoComplex:
    """The glued sphere as a 2-complex, with vertices named by slot orbits."""
    pairs, witness = _paired_occurrences(S)
    if witness is not None:
        raise IllFormedMap(f"sphere is not glued coherently: {witness}")
    partner = _partner_table(S, pairs)
    orbits = _slot_orbits(S, partner)
    slot_class = {}
    for i, orbit in enumerate(orbits):
        for slot in orbit:
            slot_class[slot] = f"v{i}"
    lengths = {f.id: len(f.word) for f in S.faces}
    edges = []
    for edge in sorted(pairs):
        (f, p), _ = pairs[edge]
        tail = slot_class[(f, (p - 1) % lengths[f])]
        head = slot_class[(f, p)]
        edges.append((edge, tail, head))
    return build_complex(
        edges=edges,
        cells=[(f.id, f.word) for f in S.faces],
        vertices=sorted({f"v{i}" for i in range(len(orbits))}),
    )


# ---------------------------------------------------------------------------
# diagram maps


def _expected_letter(cell_word, rotation, orientation, p):
    m = len(cell_word)
    if orientation > 0:
        return cell_word[(rotation + p) % m]
    return cell_word[m - 1 - (rotation + p) % m].inverse()


def _side_cell_position(cell_len, rotation, orientation, p):
    if orientation > 0:
        return (rotation + p) % cell_len
    return cell_len - 1 - (rotation + p) % cell_len


def _slot_corner_step(cellmap_entry, cell_word_len, p, corner_lookup):
    """Image of the face corner at position p as a directed corner traversal."""
    cell_id, rotation, orientation = cellmap_entry
    if orientation > 0:
        q = (rotation + p) % cell_word_len
        return CornerStep(corner_lookup[(cell_id, q)], False)
    q = (_side_cell_position(cell_word_len, rotation, orientation, p) - 1) % cell_word_len
    return CornerStep(corner_lookup[(cell_id, q)], True)


def check_diagram(S: SphereComplex, f: DiagramMap, X: TwoComplex) -> FoldingReport:
    """Verify the map and report folding edges and link-path reducedness.

    A sphere edge folds when its two sides map to the same cell at the same
    boundary position with opposite orientations; matching positions rather
    than cells alone keeps the criterion correct for periodic relators.
    """
    sphere_check = validate_sphere(S)
    if not sphere_check.passed:
        raise IllFormedMap(f"sphere validation failed: {sphere_check.witness}")
    cmap = X.cell_map()
    emap = X.edge_map()
    faces = S.face_map()
    if set(f.cellmap) != set(faces):
        raise IllFormedMap("cell map does not cover exactly the sphere faces")
    occ = S.occurrences()
    if set(f.labels) != set(occ):
        raise IllFormedMap("label map does not cover exactly the sphere edges")

    for fid, face in faces.items():
        cell_id, rotation, orientation = f.cellmap[fid]
        if cell_id not in cmap:
            raise IllFormedMap(f"face {fid!r} maps to unknown cell {cell_id!r}")
        word = cmap[cell_id].word
        if len(word) != len(face.word):
            raise IllFormedMap(
                f"face {fid!r} has {len(face.word)} sides but cell {cell_id!r} "
                f"has boundary length {len(word)}"
            )
        if orientation not in (1, -1):
            raise IllFormedMap(f"face {fid!r} has orientation {orientation}, need +1 or -1")
        for p, letter in enumerate(face.word):
            target_edge = f.labels.get(letter.edge)
            if target_edge not in emap:
                raise IllFormedMap(f"sphere edge {letter.edge!r} labeled by unknown edge")
            expected = _expected_letter(word, rotation, orientation, p)
            got = Letter(target_edge, letter.sign)
            if got != expected:
                raise IllFormedMap(
                    f"boundary word mismatch at face {fid!r} position {p}: "
                    f"labeled {got}, cell expects {expected}"
                )

    pairs, _ = _paired_occurrences(S)
    partner = _partner_table(S, pairs)
    orbits = _slot_orbits(S, partner)

    # vertex images: the junction vertex of the image corner, consistent per orbit
    junction = {}
    for cell in X.cells:
        m = len(cell.word)
        for i in range(m):
            junction[(cell.id, i)] = X.letter_target(cell.word[i], emap)
    corner_lookup = {}
    image_vertex = {}
    for orbit_index, orbit in enumerate(orbits):
        images = set()
        for fid, p in orbit:
            cell_id, rotation, orientation = f.cellmap[fid]
            m = len(cmap[cell_id].word)
            if orientation > 0:
                q = (rotation + p) % m
            else:
                q = (_side_cell_position(m, rotation, orientation, p) - 1) % m
            images.add(junction[(cell_id, q)])
        if len(images) != 1:
            raise IllFormedMap(
                f"sphere vertex v{orbit_index} has inconsistent images {sorted(images)}"
            )
        image_vertex[orbit_index] = images.pop()

    links = {}
    for v in set(image_vertex.values()):
        G = link_graph(X, v)
        links[v] = {c.key: c for c in G.corners}

    nonreduced = []
    for orbit_index, orbit in enumerate(orbits):
        lookup = links[image_vertex[orbit_index]]
        steps = []
        for fid, p in orbit:
            cell_id, rotation, orientation = f.cellmap[fid]
            m = len(cmap[cell_id].word)
            steps.append(_slot_corner_step((cell_id, rotation, orientation), m, p, lookup))
        # cyclic backtrack check; a step never equals its own reverse, so a
        # single-corner orbit is reduced
        k = len(steps)
        for i in range(k):
            if steps[(i + 1) % k] == steps[i].reversed_step():
                nonreduced.append((f"v{orbit_index}", i))
                break

    folding = []
    for edge in sorted(pairs):
        (f1, p1), (f2, p2) = pairs[edge]
        c1, r1, o1 = f.cellmap[f1]
        c2, r2, o2 = f.cellmap[f2]
        m1 = len(cmap[c1].word)
        m2 = len(cmap[c2].word)
        q1 = _side_cell_position(m1, r1, o1, p1)
        q2 = _side_cell_position(m2, r2, o2, p2)
        if c1 == c2 and q1 == q2:
            if o1 == o2:
                raise InvariantViolation(
                    "folding edge with equal orientations; alignment bookkeeping broken"
                )
            folding.append((edge, f.labels[edge]))

    reduced = not nonreduced
    if reduced != (not folding):
        raise InvariantViolation(
            "link reducedness and folding-edge detection disagree: "
            f"nonreduced={nonreduced}, folding={folding}"
        )
    labels = sorted(set(f.labels.values()))
    folding_labels = sorted(set(label for _, label in folding))
    return FoldingReport(
        folding=tuple(folding),
        reduced=reduced,
        distinct_edge_labels=len(labels),
        distinct_folding_labels=len(folding_labels),
        nonreduced_vertices=tuple(nonreduced),
    )


def drk_witness_check(report: FoldingReport, k) -> TestVerdict:
    """Single-diagram consistency check of a DR(k) claim: a diagram carrying
    k distinct labels must carry k distinct folding labels."""
    if report.distinct_edge_labels < k:
        return TestVerdict(True, None, notes={"vacuous": True})
    if report.distinct_folding_labels >= k:
        return TestVerdict(True, None)
    return TestVerdict(
        False,
        {
            "reason": "too_few_folding_labels",
            "edge_labels": report.distinct_edge_labels,
            "folding_labels": report.distinct_folding_labels,
            "k": k,
        },
    )


def diagram_gauss_bonnet(S: SphereComplex, f: DiagramMap, X: TwoComplex,
                         omega: AngleAssignment) -> CurvatureReport:
    """Pull the angles back along the diagram map and report curvature on the
    sphere; the total is exactly 4 = 2 chi(sphere)."""
    check_diagram(S, f, X)
    omega.validate_total(X)
    cmap = X.cell_map()
    table = {}
    for face in S.faces:
        cell_id, rotation, orientation = f.cellmap[face.id]
        m = len(cmap[cell_id].word)
        for p in range(m):
            if orientation > 0:
                q = (rotation + p) % m
            else:
                q = (_side_cell_position(m, rotation, orientation, p) - 1) % m
            table[(face.id, p)] = omega.weight((cell_id, q))
    sphere_complex = sphere_to_complex(S)
    report = check_gauss_bonnet(sphere_complex, AngleAssignment(table))
    if report.total != 4:
        raise InvariantViolation(f"pulled-back curvature totals {report.total}, not 4")
    return report


# ---------------------------------------------------------------------------
# bounded exhaustive search


class _FaceType(NamedTuple):
    cell: str
    orientation: int
    sides: tuple  # letters read along the face with rotation 0


def _face_types(X: TwoComplex):
    types = []
    for cell in X.cells:
        types.append(_FaceType(cell.id, 1, cell.word))
        types.append(_FaceType(cell.id, -1, word_inverse(cell.word)))
    return types


def enumerate_diagrams(X: TwoComplex, max_faces, require_reduced=False,
                       prune_isomorphs=True, limit=None):
    """Yield (SphereComplex, DiagramMap) for sphere gluings of at most
    ``max_faces`` cell copies.

    Faces are copies of cells with an orientation; rotations are absorbed
    into the side pairing, so every spherical diagram appears up to
    isomorphism.  Sides glue only to sides carrying the inverse letter,
    which makes each sphere edge occur once with each sign.  With
    ``require_reduced`` the search rejects folding pairs outright; with
    ``prune_isomorphs`` mirror images and copies of interchangeable faces
    are skipped.
    """
    types = _face_types(X)
    count = 0
    for n in range(1, max_faces + 1):
        for multiset in itertools.combinations_with_replacement(range(len(types)), n):
            chosen = [types[t] for t in multiset]
            if prune_isomorphs and chosen[0].orientation < 0:
                continue
            balance = Counter()
            for t in chosen:
                for letter in t.sides:
                    balance[letter] += 1
            if any(balance[l] != balance[l.inverse()] for l in balance):
                continue
            for result in _glue_faces(X, chosen, require_reduced, prune_isomorphs):
                yield result
                count += 1
                if limit is not None and count >= limit:
                    return


def _glue_faces(X, chosen, require_reduced, prune_isomorphs):
    lengths = [len(t.sides) for t in chosen]
    offsets = []
    total = 0
    for L in lengths:
        offsets.append(total)
        total += L
    if total % 2:
        return
    side_face = []
    side_pos = []
    side_letter = []
    for i, t in enumerate(chosen):
        for p, letter in enumerate(t.sides):
            side_face.append(i)
            side_pos.append(p)
            side_letter.append(letter)
    E = total // 2
    F = len(chosen)
    target_V = 2 - F + E
    if target_V < 1:
        return

    def q_of(side):
        i = side_face[side]
        p = side_pos[side]
        t = chosen[i]
        return p if t.orientation > 0 else lengths[i] - 1 - p

    def folds(a, b):
        return (
            chosen[side_face[a]].cell == chosen[side_face[b]].cell
            and q_of(a) == q_of(b)
        )

    partner = [None] * total
    uf = RollbackUnionFind(range(total))  # slots share the side indexing

    def slot(i, p):
        return offsets[i] + p % lengths[i]

    def relations(a, b):
        """Slot identifications induced by gluing sides a (+) and b (-)."""
        fa, pa = side_face[a], side_pos[a]
        fb, pb = side_face[b], side_pos[b]
        return (
            (slot(fa, pa), slot(fb, pb - 1)),
            (slot(fa, pa - 1), slot(fb, pb)),
        )

    touched = [False] * F

    def glue_all():
        free = next((s for s in range(total) if partner[s] is None), None)
        if free is None:
            if uf.count != target_V:
                return
            comp = UnionFind(range(F))
            for s in range(total):
                comp.union(side_face[s], side_face[partner[s]])
            if comp.count != 1:
                return
            yield _assemble(X, chosen, partner, side_letter, side_face, side_pos)
            return
        letter = side_letter[free]
        want = letter.inverse()
        seen_types = set()
        for other in range(free + 1, total):
            if partner[other] is not None or side_letter[other] != want:
                continue
            if prune_isomorphs and not touched[side_face[other]]:
                key = (chosen[side_face[other]].cell,
                       chosen[side_face[other]].orientation,
                       side_pos[other])
                if key in seen_types:
                    continue
                seen_types.add(key)
            plus, minus = (free, other) if letter.sign > 0 else (other, free)
            if require_reduced and folds(plus, minus):
                continue
            mark = uf.mark()
            partner[free] = other
            partner[other] = free
            was_touched = (touched[side_face[free]], touched[side_face[other]])
            touched[side_face[free]] = True
            touched[side_face[other]] = True
            for x, y in relations(plus, minus):
                uf.union(x, y)
            remaining = sum(1 for s in range(total) if partner[s] is None) // 2
            if uf.count >= target_V and uf.count - 2 * remaining <= target_V:
                yield from glue_all()
            uf.rollback(mark)
            partner[free] = None
            partner[other] = None
            touched[side_face[free]] = was_touched[0]
            touched[side_face[other]] = was_touched[1]

    yield from glue_all()


def _assemble(X, chosen, partner, side_letter, side_face, side_pos):
    """Build the SphereComplex and DiagramMap from a complete side pairing."""
    edge_of_side = {}
    labels = {}
    next_edge = 0
    total = len(partner)
    for s in range(total):
        if s in edge_of_side:
            continue
        o = partner[s]
        eid = f"s{next_edge}"
        next_edge += 1
        edge_of_side[s] = eid
        edge_of_side[o] = eid
        labels[eid] = side_letter[s].edge
    faces = []
    cellmap = {}
    side = 0
    for i, t in enumerate(chosen):
        fid = f"f{i}"
        word = []
        for p in range(len(t.sides)):
            letter = side_letter[side]
            word.append(Letter(edge_of_side[side], letter.sign))
            side += 1
        faces.append(Cell(fid, tuple(word)))
        cellmap[fid] = (t.cell, 0, t.orientation)
    S = SphereComplex(tuple(faces))
    return S, DiagramMap(labels, cellmap)


def search_reduced_diagram(X: TwoComplex, max_faces, prune_isomorphs=True, cap=None):
    """First reduced spherical diagram over X with at most ``max_faces``
    faces, or None.  A bounded falsification oracle for DR."""
    if cap is None:
        cap = caps.search_cap(caps.DIAGRAM_FACE_CAP)
    if max_faces > cap:
        raise CapExceeded(f"max_faces {max_faces} exceeds the search cap {cap}")
    for S, f in enumerate_diagrams(
        X, max_faces, require_reduced=True, prune_isomorphs=prune_isomorphs
    ):
        report = check_diagram(S, f, X)
        if report.reduced:
            return S, f
        raise InvariantViolation(
            "search produced a diagram with a folding edge despite pruning"
        )
    return None
