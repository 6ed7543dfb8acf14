"""Shared brute-force oracles.  They use only scalar arithmetic and itertools,
never the vectorised tables or the counters under test."""

import itertools

from hypothesis import strategies as st

from ffembed.gf import field_new
from ffembed.space import PointSet, Space


def bf_norm(coords):
    acc = coords[0].params.zero
    for c in coords:
        acc = acc + c * c
    return acc


def bf_dist(x, y):
    return bf_norm([a - b for a, b in zip(x.coords, y.coords)])


def bf_embeddings(G, E, injective=False):
    """Every labelled map V(G) -> E respecting the edge lengths, by full product."""
    pts = E.points()
    F = E.field
    n = G.n_vertices
    out = []
    for combo in itertools.product(range(len(pts)), repeat=n):
        if injective and len(set(combo)) < n:
            continue
        if all(bf_dist(pts[combo[u]], pts[combo[v]]) == F(lam) for u, v, lam in G.edges):
            out.append(combo)
    return out


def bf_count(G, E):
    """(total, nondegenerate) by edge-by-edge extension over adjacency lists."""
    pts = E.points()
    F = E.field
    lengths = {lam for _, _, lam in G.edges}
    adj = {
        lam: [{j for j, y in enumerate(pts) if bf_dist(x, y) == F(lam)} for x in pts] for lam in lengths
    }
    n = G.n_vertices
    total = nondeg = 0

    def rec(v, assign):
        nonlocal total, nondeg
        if v == n:
            total += 1
            nondeg += len(set(assign)) == n
            return
        cands = set(range(len(pts)))
        for a, b, lam in G.edges:
            if b == v and a < v:
                cands &= adj[lam][assign[a]]
            elif a == v and b < v:
                cands &= adj[lam][assign[b]]
        for c in cands:
            rec(v + 1, assign + [c])

    rec(0, [])
    return total, nondeg


def random_set(space, rnd, density=None):
    """Subset drawn with Python's random module (independent of ffembed.rng)."""
    if density is None:
        density = rnd.uniform(0.2, 1.0)
    keep = [i for i in range(space.size) if rnd.random() < density]
    return PointSet(space, keep or [0])


@st.composite
def pointsets(draw, qs=(3, 5, 7), ds=(2,), min_size=1):
    q = draw(st.sampled_from(qs))
    d = draw(st.sampled_from(ds))
    space = Space(field_new(q), d)
    idx = draw(st.sets(st.integers(0, space.size - 1), min_size=min_size, max_size=space.size))
    return PointSet(space, sorted(idx))
