"""Exact embedding counters.

An embedding of a distance graph G in E is any map phi: V(G) -> E with
||phi(u) - phi(v)|| = lambda_e on every edge; injectivity is *not* required.
Non-degenerate embeddings are the injective ones.  All counts are of labelled
maps and are exact Python integers.

Two independent routes are provided:

* :func:`count_all` / :func:`base_profile` -- generic backtracking over
  bitset adjacency rows, valid for every graph;
* walk propagation (:func:`chain_homomorphism_count`), simplex pair tables
  and the DPs built on them (:func:`simplex_chain_count`,
  :func:`simplex_tree_count`) and the Hölder-chain walk-power count
  (:func:`holder_chain_count`).
"""

from __future__ import annotations

import os
from math import factorial
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import BadParams, BudgetExceeded, FieldMismatch, ZeroDistance
from .graphdef import (
    DistanceGraph,
    components,
    induced_subgraph,
)
from .space import Point, PointSet, neighbor_positions

DEFAULT_BUDGET = 10**9


def default_budget() -> int:
    env = os.environ.get("FFEMBED_BUDGET")
    return int(float(env)) if env else DEFAULT_BUDGET


@dataclass(frozen=True)
class EmbeddingCount:
    total: int
    nondegenerate: int
    degenerate: int

    def __post_init__(self):
        if min(self.total, self.nondegenerate, self.degenerate) < 0:
            raise ValueError("counts are non-negative")
        if self.total != self.nondegenerate + self.degenerate:
            raise ValueError("total must equal nondegenerate + degenerate")

    @classmethod
    def of(cls, total: int, nondegenerate: int) -> "EmbeddingCount":
        return cls(total, nondegenerate, total - nondegenerate)


class BaseProfile:
    """Per-point counts over a PointSet, aligned with its positions."""

    def __init__(self, pointset: PointSet, values: Sequence[int]):
        if len(values) != len(pointset):
            raise ValueError("profile length must match the point set")
        self.pointset = pointset
        self.values = [int(v) for v in values]

    def __getitem__(self, x: Point) -> int:
        pos = self.pointset.position_of(x)
        if pos < 0:
            raise KeyError(x)
        return self.values[pos]

    def __len__(self) -> int:
        return len(self.values)

    def items(self) -> Iterator[tuple[Point, int]]:
        return zip(self.pointset, self.values)

    def total(self) -> int:
        return sum(self.values)

    def as_dict(self) -> dict[Point, int]:
        return dict(self.items())

    def __eq__(self, other):
        return (
            isinstance(other, BaseProfile)
            and self.pointset == other.pointset
            and self.values == other.values
        )

    def __repr__(self):
        return f"BaseProfile(size={len(self.values)}, total={self.total()})"


# --- adjacency -------------------------------------------------------------------


def _tcode(E: PointSet, t) -> int:
    code = E.field.element(t).code if not isinstance(t, int) else int(t)
    if not 0 <= code < E.field.q:
        raise FieldMismatch(f"length {t} is not an element of F_{E.field.q}")
    if code == 0:
        raise ZeroDistance("distance t must be nonzero")
    return code


def neighbor_lists(E: PointSet, t) -> np.ndarray:
    """(N, |S_t|) matrix of neighbour positions in E, padded with -1 (cached)."""
    code = _tcode(E, t)
    key = ("nbr", code)
    if key not in E._cache:
        E._cache[key] = neighbor_positions(E, code)
    return E._cache[key]


def bit_rows(E: PointSet, t) -> list[int]:
    """Adjacency rows at distance t as Python-int bitsets over positions."""
    code = _tcode(E, t)
    key = ("rows", code)
    if key not in E._cache:
        M = neighbor_lists(E, code)
        N = len(E)
        rows = []
        buf = np.zeros(N, dtype=bool)
        for r in M:
            nb = r[r >= 0]
            if nb.size == 0:
                rows.append(0)
                continue
            buf[nb] = True
            rows.append(int.from_bytes(np.packbits(buf, bitorder="little").tobytes(), "little"))
            buf[nb] = False
        E._cache[key] = rows
    return E._cache[key]


def _check_lengths(G: DistanceGraph, E: PointSet) -> None:
    for lam in G.lengths:
        if not 0 < lam < E.field.q:
            raise FieldMismatch(f"edge length code {lam} is not a nonzero element of F_{E.field.q}")


# --- generic backtracking ----------------------------------------------------------


def _plan(G: DistanceGraph, first: int | None = None) -> tuple[list[int], list[list[tuple[int, int]]]]:
    """Greedy most-constrained-first vertex order.

    Returns the order and, per level, the (earlier level, length) pairs that
    constrain the vertex placed there.
    """
    adj = G.adjacency()
    deg = [len(a) for a in adj]
    order: list[int] = []
    level_of: dict[int, int] = {}
    remaining = set(range(G.n_vertices))
    while remaining:
        if first is not None and not order:
            v = first
        else:
            v = max(
                remaining,
                key=lambda u: (sum(1 for w, _ in adj[u] if w in level_of), deg[u], -u),
            )
        level_of[v] = len(order)
        order.append(v)
        remaining.discard(v)
    backs = [
        sorted((level_of[w], lam) for w, lam in adj[v] if level_of[w] < level_of[v])
        for v in order
    ]
    return order, backs


def _estimate(backs, N: int, maxdeg: dict[int, int]) -> int:
    est, width = 0, 1
    for level, back in enumerate(backs[:-1]):
        width *= min(maxdeg[l] for _, l in back) if back else N
        est += width
    return est + 1


def _search(rows: dict[int, list[int]], backs, full: int, prefix: Sequence[int], want_nondeg: bool):
    """Count completions of a partial assignment of the first len(prefix) levels."""
    n = len(backs)
    assign = list(prefix) + [0] * (n - len(prefix))
    used0 = 0
    injective0 = True
    for p in prefix:
        if used0 >> p & 1:
            injective0 = False
        used0 |= 1 << p
    total = 0
    nondeg = 0
    last = n - 1

    def rec(level: int, used: int, injective: bool) -> None:
        nonlocal total, nondeg
        back = backs[level]
        if back:
            j, l = back[0]
            cand = rows[l][assign[j]]
            for j, l in back[1:]:
                cand &= rows[l][assign[j]]
                if not cand:
                    return
        else:
            cand = full
        if level == last:
            total += cand.bit_count()
            if injective:
                nondeg += (cand & ~used).bit_count()
            return
        track = injective and want_nondeg
        while cand:
            low = cand & -cand
            cand ^= low
            assign[level] = low.bit_length() - 1
            if track:
                rec(level + 1, used | low, not (used & low))
            else:
                rec(level + 1, used, False)

    if len(prefix) == n:
        # every vertex is fixed by the prefix
        ok = all(
            rows[l][assign[j]] >> assign[lv] & 1
            for lv, back in enumerate(backs)
            for j, l in back
        )
        return (1, int(ok and injective0)) if ok else (0, 0)
    for lv in range(1, len(prefix)):
        for j, l in backs[lv]:
            if not rows[l][assign[j]] >> assign[lv] & 1:
                return 0, 0
    rec(len(prefix), used0, injective0 and want_nondeg)
    return total, (nondeg if want_nondeg else 0)


def _search_chunk(args):
    rows, backs, full, firsts, want_nondeg = args
    tot = nd = 0
    for p in firsts:
        a, b = _search(rows, backs, full, [p], want_nondeg)
        tot += a
        nd += b
    return tot, nd


def _setup(G: DistanceGraph, E: PointSet, first: int | None, budget: int | None):
    _check_lengths(G, E)
    order, backs = _plan(G, first)
    rows = {lam: bit_rows(E, lam) for lam in G.lengths}
    N = len(E)
    maxdeg = {lam: max((r.bit_count() for r in rs), default=0) for lam, rs in rows.items()}
    est = _estimate(backs, N, maxdeg)
    budget = default_budget() if budget is None else budget
    if est > budget:
        raise BudgetExceeded(est, budget)
    return order, backs, rows, (1 << N) - 1


def count_all(
    G: DistanceGraph, E: PointSet, budget: int | None = None, workers: int = 1
) -> EmbeddingCount:
    """Total, non-degenerate and degenerate embedding counts of G in E."""
    if G.n_vertices == 0:
        return EmbeddingCount.of(1, 1)
    N = len(E)
    if N == 0:
        _check_lengths(G, E)
        return EmbeddingCount.of(0, 0)
    order, backs, rows, full = _setup(G, E, None, budget)
    if workers > 1 and N > 1:
        chunks = [list(range(i, N, workers)) for i in range(workers)]
        with ProcessPoolExecutor(max_workers=workers) as ex:
            parts = list(ex.map(_search_chunk, [(rows, backs, full, c, True) for c in chunks]))
        total = sum(p[0] for p in parts)
        nondeg = sum(p[1] for p in parts)
    else:
        total, nondeg = _search(rows, backs, full, [], True)
    return EmbeddingCount.of(total, nondeg)


def count_total(G: DistanceGraph, E: PointSet, budget: int | None = None) -> int:
    """N_G(E) only; a disconnected G is counted as the product over components."""
    if G.n_vertices == 0:
        return 1
    comps = components(G)
    if len(comps) > 1:
        out = 1
        for comp in comps:
            sub, _ = induced_subgraph(G, comp)
            out *= count_total(sub, E, budget)
            if out == 0:
                return 0
        return out
    if len(E) == 0:
        _check_lengths(G, E)
        return 0
    _, backs, rows, full = _setup(G, E, None, budget)
    return _search(rows, backs, full, [], False)[0]


def base_profile(
    G: DistanceGraph, E: PointSet, budget: int | None = None, nondegenerate: bool = False
) -> BaseProfile:
    """f(x) = number of embeddings of G in E with the base vertex at x."""
    if G.base_vertex is None:
        raise BadParams("graph has no base vertex")
    if len(E) == 0:
        _check_lengths(G, E)
        return BaseProfile(E, [])
    _, backs, rows, full = _setup(G, E, G.base_vertex, budget)
    pick = 1 if nondegenerate else 0
    return BaseProfile(E, [_search(rows, backs, full, [p], nondegenerate)[pick] for p in range(len(E))])


def iter_embeddings(G: DistanceGraph, E: PointSet, injective: bool = False) -> Iterator[tuple[int, ...]]:
    """Embeddings as position tuples (phi(0), ..., phi(n-1)) in lexicographic order."""
    _check_lengths(G, E)
    n, N = G.n_vertices, len(E)
    if n == 0:
        yield ()
        return
    if N == 0:
        return
    rows = {lam: bit_rows(E, lam) for lam in G.lengths}
    back = [[] for _ in range(n)]
    for u, v, lam in G.edges:
        back[v].append((u, lam))
    full = (1 << N) - 1
    assign = [0] * n

    def rec(v: int, used: int):
        cand = full
        for u, lam in back[v]:
            cand &= rows[lam][assign[u]]
        if injective:
            cand &= ~used
        while cand:
            low = cand & -cand
            cand ^= low
            assign[v] = low.bit_length() - 1
            if v == n - 1:
                yield tuple(assign)
            else:
                yield from rec(v + 1, used | low)

    yield from rec(0, 0)


def first_embedding(G: DistanceGraph, E: PointSet, injective: bool = False) -> tuple[Point, ...] | None:
    """Lexicographically first embedding, as points, or None."""
    for tup in iter_embeddings(G, E, injective):
        return tuple(E.point(p) for p in tup)
    return None


# --- structured fast paths -------------------------------------------------------


def _propagate(M: np.ndarray, f: list[int]) -> list[int]:
    """g[y] = sum of f[x] over neighbours x of y (M from neighbor_lists)."""
    if not f:
        return []
    bound = max(f) * M.shape[1]
    if bound < 2**62:
        ext = np.append(np.asarray(f, dtype=np.int64), 0)
        return [int(v) for v in ext[M].sum(axis=1)]
    ext = f + [0]
    return [sum(ext[j] for j in row) for row in M.tolist()]


def chain_homomorphism_count(m: int, t, E: PointSet) -> int:
    """N_{C_m}(E) as the number of m-step walks in the distance-t graph on E."""
    if m < 1:
        raise BadParams("m must be >= 1")
    if len(E) == 0:
        _tcode(E, t)
        return 0
    M = neighbor_lists(E, t)
    f = [1] * len(E)
    for _ in range(m):
        f = _propagate(M, f)
    return sum(f)


def tree_count(T: DistanceGraph, E: PointSet) -> tuple[int, BaseProfile]:
    """N_T(E) for a tree T by leaf-to-root propagation, rooted at the base
    vertex (vertex 0 when unset); also returns the profile at the root."""
    from .graphdef import is_tree
    from .errors import NotATree

    if not is_tree(T):
        raise NotATree("tree_count needs a tree")
    _check_lengths(T, E)
    root = 0 if T.base_vertex is None else T.base_vertex
    adj = T.adjacency()
    order, parent = [root], {root: (None, 0)}
    for v in order:
        for w, lam in adj[v]:
            if w not in parent:
                parent[w] = (v, lam)
                order.append(w)
    F: dict[int, list[int]] = {}
    for v in reversed(order):
        acc = [1] * len(E)
        for w, lam in adj[v]:
            if parent[w][0] == v:
                msg = _propagate(neighbor_lists(E, lam), F.pop(w)) if len(E) else []
                acc = [a * b for a, b in zip(acc, msg)]
        F[v] = acc
    return sum(F[root]), BaseProfile(E, F[root])


def _cliques(mask: int, r: int, rows: list[int]) -> int:
    """Unordered r-cliques inside mask, each seen once in ascending order."""
    if r == 0:
        return 1
    if r == 1:
        return mask.bit_count()
    s = 0
    while mask:
        low = mask & -mask
        mask ^= low
        s += _cliques(mask & rows[low.bit_length() - 1], r - 1, rows)
    return s


def _clique_count_ordered(mask: int, r: int, rows: list[int]) -> int:
    """Ordered r-tuples of pairwise adjacent positions inside mask.

    Adjacency is at a nonzero distance, so the entries are automatically distinct.
    """
    return _cliques(mask, r, rows) * factorial(r)


class PairTable:
    """h(x, y): embeddings of an m-simplex with two marked vertices at x, y."""

    def __init__(self, pointset: PointSet, m: int, entries: dict[tuple[int, int], int]):
        self.pointset = pointset
        self.m = m
        self.entries = entries

    def __call__(self, x: Point, y: Point) -> int:
        i, j = self.pointset.position_of(x), self.pointset.position_of(y)
        if i < 0 or j < 0:
            raise KeyError((x, y))
        return self.entries.get((i, j), 0)

    def total(self) -> int:
        return sum(self.entries.values())

    def row_sums(self) -> list[int]:
        out = [0] * len(self.pointset)
        for (i, _), v in self.entries.items():
            out[i] += v
        return out


def simplex_pair_table(m: int, t, E: PointSet, budget: int | None = None) -> PairTable:
    """Sparse table of h(x, y); nonzero only when ||x - y|| = t."""
    if m < 2:
        raise BadParams("simplex pair tables need m >= 2")
    if len(E) == 0:
        _tcode(E, t)
        return PairTable(E, m, {})
    rows = bit_rows(E, t)
    maxdeg = max((r.bit_count() for r in rows), default=0)
    est = len(E) * maxdeg ** (m - 1)
    budget = default_budget() if budget is None else budget
    if est > budget:
        raise BudgetExceeded(est, budget)
    entries: dict[tuple[int, int], int] = {}
    for x, rx in enumerate(rows):
        nb = rx
        while nb:
            low = nb & -nb
            nb ^= low
            y = low.bit_length() - 1
            if y < x:
                continue
            h = _clique_count_ordered(rx & rows[y], m - 1, rows)
            if h:
                entries[(x, y)] = h
                entries[(y, x)] = h
    return PairTable(E, m, entries)


def _apply_pairs(table: PairTable, f: list[int]) -> list[int]:
    out = [0] * len(f)
    for (x, y), h in table.entries.items():
        if f[x]:
            out[y] += f[x] * h
    return out


def simplex_chain_count(k: int, m: int, t, E: PointSet, budget: int | None = None) -> tuple[int, BaseProfile]:
    """N_{T_k^m}(E) and f_k, the profile at the base node c_0.

    f_1(x) = sum_y h(x, y); f_{j+1}(y) = sum_x f_j(x) h(x, y).  By reversal
    symmetry of the chain the count ending at y equals the count based at y.
    """
    if k < 1:
        raise BadParams("k must be >= 1")
    table = simplex_pair_table(m, t, E, budget)
    f = [1] * len(E)
    for _ in range(k):
        f = _apply_pairs(table, f)
    return sum(f), BaseProfile(E, f)


def simplex_tree_count(
    skeleton: Sequence[tuple[int, int]], m: int, t, E: PointSet, budget: int | None = None
) -> tuple[int, BaseProfile]:
    """N for a tree of m-simplices, by DP over the skeleton rooted at node 0."""
    skeleton = [(int(a), int(b)) for a, b in skeleton]
    n_nodes = len(skeleton) + 1
    adj: list[list[int]] = [[] for _ in range(n_nodes)]
    for a, b in skeleton:
        adj[a].append(b)
        adj[b].append(a)
    table = simplex_pair_table(m, t, E, budget)
    order, parent = [0], {0: None}
    for v in order:
        for w in adj[v]:
            if w not in parent:
                parent[w] = v
                order.append(w)
    if len(order) != n_nodes:
        raise BadParams("skeleton is not a tree")
    F: dict[int, list[int]] = {}
    for v in reversed(order):
        acc = [1] * len(E)
        for c in adj[v]:
            if parent.get(c) == v:
                msg = _apply_pairs(table, F.pop(c))
                acc = [a * b for a, b in zip(acc, msg)]
        F[v] = acc
    return sum(F[0]), BaseProfile(E, F[0])


def walk_matrix(m: int, t, E: PointSet) -> list[list[int]]:
    """W[x][y] = number of m-step walks x -> y in the distance-t graph on E."""
    M = neighbor_lists(E, t)
    N = len(E)
    W = []
    for x in range(N):
        f = [0] * N
        f[x] = 1
        for _ in range(m):
            f = _propagate(M, f)
        W.append(f)
    return W


def holder_chain_count(k: int, m: int, t, E: PointSet) -> int:
    """N_{G_{k,m}}(E) = sum over endpoint pairs of (number of m-walks)^k."""
    if k < 1 or m < 1:
        raise BadParams("k, m must be >= 1")
    if len(E) == 0:
        _tcode(E, t)
        return 0
    return sum(w**k for row in walk_matrix(m, t, E) for w in row if w)


# --- Hölder lower bound ----------------------------------------------------------


def holder_lower_bound(
    H: DistanceGraph,
    S: Iterable[int],
    k: int,
    E: PointSet,
    exponent: str = "proof",
    budget: int | None = None,
) -> Fraction:
    """N_H^k / N_{H\\S}^(k-1) (``exponent="proof"``) or the printed variant
    N_H^k / N_{H\\S}^((k-1) l) (``exponent="printed"``), with l = |V \\ S|.

    When N_{H\\S}(E) = 0 then N_H(E) = 0 as well and the bound is 0.
    """
    S = set(S)
    if k < 1:
        raise BadParams("k must be >= 1")
    if exponent not in ("proof", "printed"):
        raise BadParams("exponent must be 'proof' or 'printed'")
    kept = [v for v in range(H.n_vertices) if v not in S]
    n_h = count_fast(H, E, budget)
    rest, _ = induced_subgraph(H, kept)
    n_rest = count_fast(rest, E, budget)
    if n_rest == 0:
        return Fraction(0)
    power = (k - 1) if exponent == "proof" else (k - 1) * len(kept)
    return Fraction(n_h**k, n_rest**power)



def holder_chain_nondeg_m2(k: int, t, E: PointSet) -> int:
    """N*_{G_{k,2}}(E): ordered endpoint pairs x != y times the number of
    injective choices of k common neighbours, c(c-1)...(c-k+1)."""
    if k < 1:
        raise BadParams("k must be >= 1")
    if len(E) == 0:
        _tcode(E, t)
        return 0
    rows = bit_rows(E, t)
    total = 0
    for x, rx in enumerate(rows):
        for y, ry in enumerate(rows):
            if x == y:
                continue
            c = (rx & ry).bit_count()
            if c >= k:
                f = 1
                for i in range(k):
                    f *= c - i
                total += f
    return total


def count_fast(G: DistanceGraph, E: PointSet, budget: int | None = None) -> int:
    """N_G(E) through the cheapest available route (tree DP for trees)."""
    from .graphdef import is_tree

    if G.n_vertices > 0 and is_tree(G):
        return tree_count(G, E)[0]
    return count_total(G, E, budget)
