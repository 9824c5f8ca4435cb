import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nrgg import (ArgumentError, Norm, build_geometric_graph, build_wscp,
                  distance, dump_wscp, sample_uniform_cube, verify_wscp)
from nrgg.model import PointCloud
from nrgg.wscp import greedy_packing_family


def _graph(n, d, r, seed, norm=Norm.L2):
    return build_geometric_graph(sample_uniform_cube(n, d, seed), r, norm)


def test_packing_family_properties():
    cloud = sample_uniform_cube(300, 2, seed=1)
    delta = 0.07
    fam = greedy_packing_family(cloud, delta, Norm.L2)
    covered = np.zeros(300, dtype=bool)
    for centers in fam.rounds:
        pts = cloud.points[centers]
        # centers of one round are pairwise > 2*delta apart
        for i in range(len(centers)):
            for j in range(i + 1, len(centers)):
                assert distance(pts[i], pts[j], Norm.L2) > 2 * delta
        for k in range(300):
            if not covered[k]:
                covered[k] = any(
                    distance(cloud.points[k], c, Norm.L2) <= delta
                    for c in pts)
    assert covered.all()


def test_build_and_verify_roundtrip():
    g = _graph(400, 2, 0.08, seed=2)
    fam = build_wscp(g)
    rep = verify_wscp(fam, g)
    assert rep.all_ok
    assert rep.size == fam.size == len(fam.parts)
    assert fam.r == g.r


def test_parts_are_disjoint_and_jointly_cover():
    g = _graph(350, 2, 0.06, seed=3)
    fam = build_wscp(g)
    union = np.zeros(g.n, dtype=bool)
    for part in fam.parts:
        counts = np.zeros(g.n, dtype=int)
        for cl in part.cliques:
            for v in cl.members:
                counts[v] += 1
        # cliques of one part never share a vertex
        assert (counts <= 1).all()
        union |= counts > 0
    assert union.all()


def test_cliques_are_cliques_and_separated():
    g = _graph(300, 2, 0.09, seed=4)
    fam = build_wscp(g)
    pts = g.cloud.points
    for part in fam.parts:
        for a in range(len(part.cliques)):
            ca = part.cliques[a]
            for u in ca.members:
                # members lie within r/2 of the anchor, so pairwise <= r
                assert distance(pts[u], pts[ca.anchor], Norm.L2) <= g.r / 2
                for v in ca.members:
                    if u < v:
                        assert g.has_edge(u, v)
            for b in range(a + 1, len(part.cliques)):
                cb = part.cliques[b]
                dmin = min(distance(pts[u], pts[v], Norm.L2)
                           for u in ca.members for v in cb.members)
                assert dmin > g.r
                # separation implies no edge crosses the pair
                assert not any(g.has_edge(u, v)
                               for u in ca.members for v in cb.members)


@settings(deadline=None, max_examples=15)
@given(st.integers(min_value=1, max_value=250),
       st.floats(min_value=0.02, max_value=0.3),
       st.sampled_from(list(Norm)),
       st.integers(min_value=0, max_value=10 ** 6))
def test_verify_accepts_built_families(n, r, norm, seed):
    g = _graph(n, 2, r, seed, norm)
    fam = build_wscp(g)
    rep = verify_wscp(fam, g)
    assert rep.all_ok
    assert rep.size >= 1


def test_family_size_is_dimension_bounded():
    # rounds of two nested greedy packings: the count depends only on
    # packing geometry, not n
    sizes = []
    for n in (100, 500, 2000):
        g = _graph(n, 2, 0.05, seed=5)
        fam = build_wscp(g)
        sizes.append(fam.size)
        assert fam.size <= 64
    assert max(sizes) <= 64


def test_verify_flags_tampering():
    g = _graph(120, 2, 0.15, seed=6)
    fam = build_wscp(g)
    # move one vertex into a clique it does not belong to
    parts = list(fam.parts)
    part0 = parts[0]
    cliques = list(part0.cliques)
    if len(cliques) < 2:
        pytest.skip("instance too small to tamper with")
    donors = [i for i, c in enumerate(cliques[1:], 1) if c.members.size >= 2]
    assert donors, "expected a donor clique with >= 2 members"
    j = donors[0]
    a, b = cliques[0], cliques[j]
    moved = a.__class__(anchor=a.anchor,
                        members=np.append(a.members, b.members[0]))
    rest = b.__class__(anchor=b.anchor, members=b.members[1:])
    cliques[0], cliques[j] = moved, rest
    tampered = fam.__class__(
        r=fam.r, parts=tuple([part0.__class__(cliques=tuple(cliques))]
                             + parts[1:]))
    rep = verify_wscp(tampered, g)
    assert not rep.all_ok


def test_verify_rejects_out_of_range_vertices():
    g = _graph(50, 2, 0.2, seed=7)
    fam = build_wscp(g)
    part = fam.parts[0]
    cl = part.cliques[0]
    bad = cl.__class__(anchor=cl.anchor, members=np.append(cl.members, 50))
    broken = fam.__class__(
        r=fam.r,
        parts=(part.__class__(cliques=(bad,) + part.cliques[1:]),)
        + fam.parts[1:])
    with pytest.raises(ArgumentError):
        verify_wscp(broken, g)


def test_dump_format():
    g = _graph(40, 2, 0.2, seed=8)
    fam = build_wscp(g)
    text = dump_wscp(fam)
    lines = text.strip().splitlines()
    assert lines[0].startswith("P 0 C 0 anchor=")
    seen = set()
    for line in lines:
        assert " members=" in line
        members = line.split(" members=")[1]
        if members:
            seen.update(int(v) for v in members.split(","))
    assert seen <= set(range(g.n))
    assert seen == set(range(g.n))  # union over parts covers V


def test_single_point_graph():
    cloud = PointCloud(d=2, points=np.array([[0.5, 0.5]]))
    g = build_geometric_graph(cloud, 0.1, Norm.L2)
    fam = build_wscp(g)
    assert fam.size == 1
    assert verify_wscp(fam, g).all_ok
