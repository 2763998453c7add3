"""Shared fixtures and hypothesis strategies.

Random complexes are flag complexes of Erdos-Renyi graphs, optionally
truncated to a lower skeleton; that family exercises every dimension the
engine handles while staying small enough for the dense rank oracle.
"""
from __future__ import annotations

import numpy as np
import pytest
from hypothesis import HealthCheck, settings, strategies as st

from parhom import (
    GraphPartition,
    SimplicialComplex,
    build_boundary_matrix,
    erdos_renyi,
    flag_complex,
    lexicographic_filtration,
    one_skeleton_graph,
    partition_graph,
    rank_oracle,
    skeleton,
)

settings.register_profile(
    "suite",
    deadline=None,
    max_examples=30,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.load_profile("suite")


def oracle_betti(K: SimplicialComplex):
    """Betti numbers through the Gaussian-elimination route only."""
    return rank_oracle(build_boundary_matrix(lexicographic_filtration(K)))


@st.composite
def small_complexes(draw, max_vertices: int = 8, min_vertices: int = 1):
    n = draw(st.integers(min_vertices, max_vertices))
    p = draw(st.floats(0.0, 1.0))
    seed = draw(st.integers(0, 2**31 - 1))
    K = flag_complex(erdos_renyi(n, p, seed), max_dim=n)
    if draw(st.booleans()) and K.dimension > 0:
        K = skeleton(K, draw(st.integers(1, K.dimension)))
    return K


@st.composite
def complexes_with_partitions(draw, max_vertices: int = 8, max_parts: int = 4):
    K = draw(small_complexes(max_vertices=max_vertices))
    p = draw(st.integers(1, min(max_parts, K.n_vertices)))
    seed = draw(st.integers(0, 2**31 - 1))
    if draw(st.booleans()):
        P = partition_graph(one_skeleton_graph(K), p, seed)
    else:
        # arbitrary assignment, not just what the partitioner produces
        part = draw(
            st.lists(
                st.integers(0, p - 1),
                min_size=K.n_vertices,
                max_size=K.n_vertices,
            )
        )
        part = np.array(part, dtype=np.int64)
        part[: p] = np.arange(p)  # keep every part inhabited
        P = GraphPartition(part, p)
    return K, P


@pytest.fixture
def tmp_cplx(tmp_path):
    def write(text: str):
        f = tmp_path / "complex.cplx"
        f.write_text(text)
        return str(f)

    return write
