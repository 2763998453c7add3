from fractions import Fraction
from math import ceil

import numpy as np
import pytest
from hypothesis import given, strategies as st

from parhom import (
    FormatError,
    GraphPartition,
    close_cover,
    closure,
    cover_from_sets,
    cover_stats,
    erdos_renyi,
    load_partition,
    maximal_cells,
    nerve,
    one_skeleton_graph,
    open_cover,
    partition_cell,
    partition_classes,
    partition_graph,
    path_complex,
    random_cover,
    save_partition,
)

from conftest import complexes_with_partitions, small_complexes

PATH4 = path_complex(4)
SPLIT = GraphPartition(np.array([0, 0, 1, 1]), 2)  # {a,b} | {c,d}

EXAMPLE1_SETS = [
    [(0,), (1,), (2,), (0, 1), (1, 2)],
    [(1,), (2,), (3,), (1, 2), (2, 3)],
]


def example1_cover():
    return cover_from_sets(PATH4, EXAMPLE1_SETS)


def label_map(c):
    return {cell: c.label(i) for i, cell in enumerate(c.complex.cells())}


class TestOneSkeleton:
    def test_triangle(self):
        g = one_skeleton_graph(closure([(0, 1, 2)]))
        assert g.n == 3 and g.edges.tolist() == [[0, 1], [0, 2], [1, 2]]

    def test_path(self):
        g = one_skeleton_graph(PATH4)
        assert g.n == 4 and g.edges.tolist() == [[0, 1], [1, 2], [2, 3]]

    def test_vertices_only(self):
        g = one_skeleton_graph(closure([(0,), (1,)]))
        assert g.n == 2 and g.edge_count == 0


class TestPartitionGraph:
    def test_single_part(self):
        P = partition_graph(one_skeleton_graph(PATH4), 1, 0)
        assert P.p == 1 and set(P.part.tolist()) == {0}

    @pytest.mark.parametrize("seed", range(8))
    def test_path_split_is_balanced_with_unit_cut(self, seed):
        P = partition_graph(one_skeleton_graph(PATH4), 2, seed)
        assert sorted(P.as_sets(), key=min) in ([{0, 1}, {2, 3}],)

    def test_too_many_parts(self):
        with pytest.raises(ValueError):
            partition_graph(one_skeleton_graph(PATH4), 5, 0)

    def test_deterministic_per_seed(self):
        g = erdos_renyi(60, 0.1, 4)
        assert np.array_equal(partition_graph(g, 4, 7).part, partition_graph(g, 4, 7).part)

    @given(st.integers(2, 60), st.floats(0, 0.3), st.integers(1, 6),
           st.integers(0, 2**31 - 1))
    def test_balance_cap(self, n, p, parts, seed):
        parts = min(parts, n)
        P = partition_graph(erdos_renyi(n, p, seed), parts, seed)
        assert P.part.shape == (n,)
        assert max(P.sizes()) <= ceil(1.1 * n / parts)
        assert set(P.part.tolist()) <= set(range(parts))


class TestPartitionFiles:
    def test_round_trip(self, tmp_path):
        path = str(tmp_path / "p.part")
        save_partition(SPLIT, path)
        loaded = load_partition(path)
        assert loaded.p == 2 and np.array_equal(loaded.part, SPLIT.part)

    def test_explicit_file(self, tmp_path):
        f = tmp_path / "p.part"
        f.write_text("0\n0\n1\n1\n")
        P = load_partition(str(f), expected_n=4)
        assert P.as_sets() == [{0, 1}, {2, 3}]

    def test_wrong_line_count(self, tmp_path):
        f = tmp_path / "p.part"
        f.write_text("0\n0\n1\n")
        with pytest.raises(FormatError):
            load_partition(str(f), expected_n=4)

    def test_sparse_part_ids_rejected(self, tmp_path):
        f = tmp_path / "p.part"
        f.write_text("0\n2\n")
        with pytest.raises(FormatError, match="dense"):
            load_partition(str(f))


class TestPartitionCell:
    def test_interior_edge(self):
        assert partition_cell(SPLIT, (0, 1)) == 0

    def test_straddling_edge_gets_shared_index(self):
        assert partition_cell(SPLIT, (1, 2)) == 2

    def test_vertex(self):
        assert partition_cell(SPLIT, (2,)) == 1


class TestOpenCover:
    def test_path_classes(self):
        c = open_cover(PATH4, SPLIT)
        assert c.set_cells(0) == {(0,), (1,), (0, 1)}
        assert c.set_cells(1) == {(2,), (3,), (2, 3)}
        assert c.set_cells(2) == {(1, 2)}

    def test_single_part_degenerate(self):
        c = open_cover(PATH4, GraphPartition(np.zeros(4, dtype=np.int64), 1))
        assert c.set_cells(0) == set(PATH4.cells())
        assert c.set_cells(1) == set()

    def test_lone_straddling_edge(self):
        K = closure([(0, 1)])
        c = open_cover(K, GraphPartition(np.array([0, 1]), 2))
        assert c.set_cells(2) == {(0, 1)}

    @given(complexes_with_partitions())
    def test_classes_partition_the_complex(self, KP):
        K, P = KP
        cls = partition_classes(K, P)
        assert cls.shape == (len(K),)
        c = open_cover(K, P)
        seen = [c.set_cells(i) for i in range(P.p + 1)]
        union = set().union(*seen)
        assert union == set(K.cells())
        assert sum(len(s) for s in seen) == len(K)

    @given(complexes_with_partitions())
    def test_open_classes_are_induced_subcomplexes(self, KP):
        K, P = KP
        c = open_cover(K, P)
        for i in range(P.p):
            verts = {v for v in range(K.n_vertices) if P.part[v] == i}
            induced = {s for s in K.cells() if set(s) <= verts}
            assert c.set_cells(i) == induced


class TestCloseCover:
    def test_path_shared_class_closes(self):
        c = close_cover(open_cover(PATH4, SPLIT))
        assert c.set_cells(2) == {(1,), (2,), (1, 2)}
        labels = label_map(c)
        assert labels[(1,)] == (0, 2)
        assert labels[(2,)] == (1, 2)
        assert labels[(0, 1)] == (0,)

    def test_single_part_unchanged(self):
        P1 = GraphPartition(np.zeros(4, dtype=np.int64), 1)
        assert label_map(close_cover(open_cover(PATH4, P1))) == label_map(
            open_cover(PATH4, P1)
        )

    def test_empty_shared_class_unchanged(self):
        K = closure([(0, 1), (2, 3)])
        P = GraphPartition(np.array([0, 0, 1, 1]), 2)
        c = close_cover(open_cover(K, P))
        assert c.set_cells(2) == set()
        assert c.is_closed()

    @given(complexes_with_partitions())
    def test_closed_and_open_classes_preserved(self, KP):
        K, P = KP
        opened = open_cover(K, P)
        closed = close_cover(opened)
        assert closed.is_closed()
        for i in range(P.p):
            assert closed.set_cells(i) == opened.set_cells(i)
        assert closed.set_cells(P.p) >= opened.set_cells(P.p)


class TestNerve:
    def test_example1(self):
        assert set(nerve(example1_cover()).cells()) == {(0,), (1,), (0, 1)}

    def test_partition_path_star(self):
        c = close_cover(open_cover(PATH4, SPLIT))
        assert set(nerve(c).cells()) == {(0,), (1,), (2,), (0, 2), (1, 2)}

    def test_single_set(self):
        c = cover_from_sets(PATH4, [list(PATH4.cells())])
        assert set(nerve(c).cells()) == {(0,)}

    @given(complexes_with_partitions())
    def test_star_shape(self, KP):
        K, P = KP
        c = close_cover(open_cover(K, P))
        N = set(nerve(c).cells())
        for cell in N:
            assert len(cell) <= 2, "partition covers have no triple overlaps"
            if len(cell) == 2:
                assert cell[1] == P.p, "every nerve edge touches the shared set"


class TestCoverStats:
    def test_example1(self):
        st_ = cover_stats(example1_cover())
        assert st_.intersection_size == 3
        assert st_.predicted_blowup == Fraction(13, 7)
        assert st_.triple_free

    def test_path_partition(self):
        c = close_cover(open_cover(PATH4, SPLIT))
        st_ = cover_stats(c, SPLIT)
        assert st_.intersection_size == 2
        assert st_.predicted_blowup == Fraction(11, 7)
        assert st_.graph_balance_ratio == 0.5
        assert st_.cover_balance_ratio == pytest.approx(3 / 7)
        assert st_.edgecut == 1

    def test_single_set(self):
        st_ = cover_stats(cover_from_sets(PATH4, [list(PATH4.cells())]))
        assert st_.predicted_blowup == 1

    def test_triple_overlap_flagged(self):
        sets = [list(PATH4.cells())] * 3
        st_ = cover_stats(cover_from_sets(PATH4, sets))
        assert not st_.triple_free

    @given(complexes_with_partitions())
    def test_lemma_bounds(self, KP):
        K, P = KP
        st_ = cover_stats(close_cover(open_cover(K, P)), P)
        assert st_.triple_free
        assert 1 <= st_.predicted_blowup < 3
        assert st_.part_sizes is not None and sum(st_.part_sizes) == K.n_vertices

    @given(complexes_with_partitions())
    def test_maximal_cells_carry_one_label(self, KP):
        K, P = KP
        c = close_cover(open_cover(K, P))
        labels = label_map(c)
        for cell in maximal_cells(K):
            assert len(labels[cell]) == 1


class TestExplicitAndRandomCovers:
    def test_uncovered_cell_rejected(self):
        with pytest.raises(ValueError, match="not covered"):
            cover_from_sets(PATH4, [EXAMPLE1_SETS[0]])

    def test_random_cover_covers_and_closes(self):
        for seed in range(10):
            K = closure([(0, 1, 2), (2, 3, 4), (4, 5)])
            c = random_cover(K, seed)
            assert c.is_closed()
            union = set().union(*(c.set_cells(i) for i in range(c.set_count)))
            assert union == set(K.cells())

    def test_random_cover_deterministic(self):
        K = closure([(0, 1, 2), (2, 3)])
        a, b = random_cover(K, 3), random_cover(K, 3)
        assert np.array_equal(a.masks, b.masks)
