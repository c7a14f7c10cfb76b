import random

import pytest

from drtool import (
    CornerStep,
    LinkNode,
    build_complex,
    euler_characteristic,
    is_reduced_path,
    link_graph,
)
from drtool.complexes import (
    Letter,
    complex_from_jsonable,
    complex_to_jsonable,
    rotate_word,
)
from drtool.errors import ComplexError, NotAWalk

from conftest import make_m2, make_torus, make_trefoil
from genutil import random_complex
from drtool.lots import lot_complex


def corner_pairs(G):
    return sorted(tuple(sorted(map(str, c.nodes))) for c in G.corners)


class TestBuildComplex:
    def test_torus_valid_no_flags(self):
        X = make_torus()
        assert X.flags == ()
        assert [e.id for e in X.edges] == ["a", "b"]

    def test_non_reduced_word_flagged(self):
        X = build_complex(edges=[("a", "*", "*")], cells=[("r1", "a a a-")], vertices=["*"])
        assert "non-reduced boundary word at cell r1 position (2,3)" in X.flags
        # the wrap pair a- a is flagged as well
        assert any("(3,1)" in flag for flag in X.flags)

    def test_non_closed_path_rejected(self):
        with pytest.raises(ComplexError, match="non-closed"):
            build_complex(
                edges=[("a", "v", "w"), ("b", "v", "w")],
                cells=[("r1", "a b")],
            )

    def test_duplicate_edge_id(self):
        with pytest.raises(ComplexError, match="duplicate edge"):
            build_complex(edges=[("a", "*", "*"), ("a", "*", "*")], cells=[])

    def test_unknown_edge_in_word(self):
        with pytest.raises(ComplexError, match="unknown edge"):
            build_complex(edges=[("a", "*", "*")], cells=[("r1", "a z")])

    def test_empty_word_rejected(self):
        with pytest.raises(ComplexError, match="empty boundary word"):
            build_complex(edges=[("a", "*", "*")], cells=[("r1", "")])

    def test_jsonable_round_trip(self):
        X = make_torus()
        assert complex_from_jsonable(complex_to_jsonable(X)) == X


class TestEulerCharacteristic:
    def test_torus(self):
        assert euler_characteristic(make_torus()) == 0

    def test_trefoil_complex(self):
        assert euler_characteristic(lot_complex(make_trefoil())) == 0

    def test_point(self):
        X = build_complex(edges=[], cells=[], vertices=["v"])
        assert euler_characteristic(X) == 1

    def test_m2_is_a_sphere(self):
        assert euler_characteristic(make_m2()) == 2


class TestLinkGraph:
    def test_torus_link_is_a_four_cycle(self):
        G = link_graph(make_torus(), "*")
        assert sorted(map(str, G.nodes)) == ["a+", "a-", "b+", "b-"]
        assert corner_pairs(G) == sorted(
            [("a+", "b-"), ("a+", "b+"), ("a-", "b-"), ("a-", "b+")]
        )
        degrees = {str(n): 0 for n in G.nodes}
        for c in G.corners:
            for n in c.nodes:
                degrees[str(n)] += 1
        assert set(degrees.values()) == {2}

    def test_trefoil_complex_link(self):
        G = link_graph(lot_complex(make_trefoil()), "*")
        assert len(G.nodes) == 6
        assert corner_pairs(G) == sorted(
            [
                ("a+", "c-"),
                ("b+", "c+"),
                ("b-", "c+"),
                ("a-", "c-"),
                ("a-", "b+"),
                ("a+", "c+"),
                ("a+", "c-"),
                ("a-", "b-"),
            ]
        )

    def test_no_cells_gives_isolated_nodes(self):
        X = build_complex(edges=[("a", "v", "v"), ("b", "v", "w")], cells=[])
        G = link_graph(X, "v")
        assert G.corners == ()
        assert sorted(map(str, G.nodes)) == ["a+", "a-", "b-"]

    def test_unknown_vertex(self):
        with pytest.raises(ComplexError):
            link_graph(make_torus(), "nope")

    def test_node_count_sums_to_twice_edges(self):
        rng = random.Random(7)
        for _ in range(25):
            X = random_complex(rng)
            total_nodes = sum(len(link_graph(X, v).nodes) for v in X.vertices)
            assert total_nodes == 2 * len(X.edges)

    def test_corner_count_sums_to_boundary_lengths(self):
        rng = random.Random(8)
        for _ in range(25):
            X = random_complex(rng)
            total_corners = sum(len(link_graph(X, v).corners) for v in X.vertices)
            assert total_corners == sum(len(c.word) for c in X.cells)

    def test_rotation_invariance(self):
        rng = random.Random(9)
        for _ in range(20):
            X = random_complex(rng)
            if not X.cells:
                continue
            rotated = build_complex(
                edges=[(e.id, e.source, e.target) for e in X.edges],
                cells=[
                    (c.id, rotate_word(c.word, rng.randrange(len(c.word))))
                    for c in X.cells
                ],
                vertices=X.vertices,
            )
            for v in X.vertices:
                assert corner_pairs(link_graph(X, v)) == corner_pairs(link_graph(rotated, v))


class TestReducedPaths:
    def test_immediate_backtrack(self):
        G = link_graph(make_torus(), "*")
        step = CornerStep(G.corners[0])
        assert is_reduced_path([step, step.reversed_step()], G) is False

    def test_torus_four_cycle_is_reduced(self):
        G = link_graph(make_torus(), "*")
        by_start = {}
        for s in G.steps():
            by_start.setdefault(s.start, []).append(s)
        # walk the 4-cycle greedily without backtracking
        path = [G.steps()[0]]
        while len(path) < 4:
            nxt = next(
                s for s in by_start[path[-1].end] if s != path[-1].reversed_step()
            )
            path.append(nxt)
        assert path[-1].end == path[0].start
        assert is_reduced_path(path, G, cyclic=True) is True

    def test_single_loop_cycle_is_reduced(self):
        X = build_complex(edges=[("a", "*", "*")], cells=[("r1", "a a-")], vertices=["*"])
        G = link_graph(X, "*")
        loop = next(c for c in G.corners if c.nodes[0] == c.nodes[1])
        assert is_reduced_path([CornerStep(loop)], G, cyclic=True) is True

    def test_not_a_walk(self):
        G = link_graph(make_torus(), "*")
        s0 = CornerStep(G.corners[0])
        bad = next(
            CornerStep(c) for c in G.corners if CornerStep(c).start != s0.end
        )
        with pytest.raises(NotAWalk):
            is_reduced_path([s0, bad], G)

    def test_foreign_corner_rejected(self):
        G = link_graph(make_torus(), "*")
        H = link_graph(make_m2(), "*")
        with pytest.raises(NotAWalk):
            is_reduced_path([CornerStep(H.corners[0])], G)


class TestLinkNodes:
    def test_display(self):
        assert str(LinkNode("a", 1)) == "a+"
        assert str(LinkNode("a", -1)) == "a-"

    def test_letter_display(self):
        assert str(Letter("a", 1)) == "a"
        assert str(Letter("a", -1)) == "a-"
