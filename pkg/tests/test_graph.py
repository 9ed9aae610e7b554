import io

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from corebreak.errors import GraphFormatError
from corebreak.graph import (
    Graph,
    generate_er,
    generate_sf,
    induced_subgraph,
    load_edge_list,
    write_edge_list,
)

from conftest import NINE_NODE_EDGES, cycle_graph


def check_simple(g):
    assert sum(len(a) for a in g.adjacency) == 2 * g.edge_count
    for u in range(g.node_count):
        assert u not in g.adjacency[u]
        for v in g.adjacency[u]:
            assert u in g.adjacency[v]
    assert len(set(g.edges)) == g.edge_count


def test_load_triangle():
    g = load_edge_list(b"# c\n0 1\n1 2\n2 0\n")
    assert (g.node_count, g.edge_count) == (3, 3)


def test_load_drops_loops_and_duplicates(caplog):
    g = load_edge_list(io.BytesIO(b"0 0\n0 1\n0 1\n"))
    assert (g.node_count, g.edge_count) == (2, 1)
    assert g.meta == {"self_loops_dropped": 1, "duplicates_dropped": 1}
    assert "dropped 1 self-loop" in caplog.text


def test_load_snap_style_both_directions():
    g = load_edge_list("# FromNodeId\tToNodeId\n3466\t937\n937\t3466\n937\t5233\n")
    assert (g.node_count, g.edge_count) == (3, 2)
    assert g.labels == (937, 3466, 5233)


@pytest.mark.parametrize("text,needle", [("0 1\n1 x\n", "line 2"), ("0\n", "line 1"), ("0 -1\n", "negative")])
def test_load_malformed(text, needle):
    with pytest.raises(GraphFormatError, match=needle):
        load_edge_list(text)


def test_load_empty():
    with pytest.raises(GraphFormatError):
        load_edge_list("# only comments\n\n")


def test_write_roundtrip_keeps_isolated_nodes():
    g = Graph(5, [(0, 3), (3, 4)])
    buf = io.StringIO()
    write_edge_list(g, buf, {"model": "test"})
    text = buf.getvalue()
    assert text.startswith("# N=5 M=2\n# model=test\n")
    back = load_edge_list(text)
    assert back == g


def test_er_exact_edge_count():
    g = generate_er(1000, 4.0, 11)
    assert g.edge_count == 2000
    check_simple(g)


def test_er_complete_when_at_capacity():
    g = generate_er(4, 3.0, 5)
    assert g.edge_count == 6


def test_er_capacity_error():
    with pytest.raises(ValueError):
        generate_er(4, 3.5, 0)


def test_er_mean_degree_over_seeds():
    for seed in range(30):
        g = generate_er(1000, 3.0, seed)
        assert g.degrees.mean() == 3.0


def test_er_deterministic():
    assert generate_er(200, 5.0, 42) == generate_er(200, 5.0, 42)
    assert generate_er(200, 5.0, 42) != generate_er(200, 5.0, 43)


def test_sf_edge_count_even_degree():
    g = generate_sf(1000, 4.0, 3)
    # K3 seed (3 edges) plus two links per later node
    assert g.edge_count == 3 + 2 * 997
    check_simple(g)


def test_sf_mixed_degree_mean():
    means = [generate_sf(1000, 3.0, s).degrees.mean() for s in range(30)]
    assert all(2.8 <= m <= 3.2 for m in means)


def test_sf_tree_growth():
    import networkx as nx

    g = generate_sf(10, 2.0, 9)
    assert g.edge_count == 9
    assert nx.is_connected(g.to_networkx())


def test_sf_tail_heavier_than_er():
    sf = generate_sf(3000, 4.0, 1)
    er = generate_er(3000, 4.0, 1)
    assert sf.degrees.max() > 3 * er.degrees.max()


def test_sf_tail_exponent_near_three():
    # maximum-likelihood (Hill) estimate on the degree tail, pooled over seeds
    degs = np.concatenate([generate_sf(5000, 6.0, s).degrees for s in range(5)])
    kmin = 6
    tail = degs[degs >= kmin]
    gamma = 1 + tail.size / np.log(tail / (kmin - 0.5)).sum()
    assert 2.5 < gamma < 3.5


def test_sf_rejects_small_degree():
    with pytest.raises(ValueError):
        generate_sf(100, 1.5, 0)


def test_induced_identity_and_triangle():
    g = cycle_graph(3)
    h, keep = induced_subgraph(g, [1, 1, 1])
    assert h == g and keep == [0, 1, 2]
    h, keep = induced_subgraph(g, [1, 1, 0])
    assert h.edge_count == 1 and keep == [0, 1]


def test_induced_nine_node_sequence():
    g = Graph(9, NINE_NODE_EDGES)
    # removing the two first leaves v1~v2, v3~v4 leaves v5 pendant on v6
    h, keep = induced_subgraph(g, [0, 0, 0, 0, 1, 1, 1, 1, 1])
    assert h.degree(keep.index(4)) == 1
    h, keep = induced_subgraph(g, [0, 0, 0, 0, 0, 0, 1, 1, 1])
    assert h.edge_count == 3 and all(h.degree(i) == 2 for i in range(3))


def test_induced_length_mismatch():
    with pytest.raises(ValueError):
        induced_subgraph(cycle_graph(3), [1, 1])


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 40), st.floats(0.5, 6.0), st.integers(0, 2**32), st.data())
def test_induced_edge_set_property(n, k, seed, data):
    k = min(k, n - 1)
    g = generate_er(n, k, seed)
    check_simple(g)
    bits = data.draw(st.lists(st.integers(0, 1), min_size=n, max_size=n))
    h, keep = induced_subgraph(g, bits)
    expected = {(u, v) for u, v in g.edges if bits[u] and bits[v]}
    got = {(keep[a], keep[b]) for a, b in h.edges}
    assert got == expected


def test_directed_index_reverse():
    g = generate_er(30, 4.0, 2)
    d = g.directed
    assert len(d) == 2 * g.edge_count
    for k in range(len(d)):
        assert d.src[d.rev[k]] == d.dst[k] and d.dst[d.rev[k]] == d.src[k]
        assert d.rev[k] != k
        assert d.index(int(d.src[k]), int(d.dst[k])) == k
