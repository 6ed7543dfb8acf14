"""Distance graphs and the configuration families built from them.

Edge lengths are stored as field codes (positive integers) so a graph is not
tied to one field; the counters check them against the field of E.

Canonical vertex numbering per family:

* ``star(k)``: centre 0, leaves 1..k.
* ``chain(m)``: path 0-1-...-m.
* ``simplex(m)``: vertices 0..m.
* ``tree_of_simplices(skel, m)``: skeleton nodes keep their labels
  0..l; the m-1 interior vertices of the simplex on skeleton edge j are
  ``l+1 + j*(m-1) + r``.  ``chain_of_simplices(k, m)`` is the path skeleton
  (0,1), (1,2), ..., so chain node c_i is vertex i.
* ``holder_extension``: original vertices first, then layer i = 1..k-1 of
  copies of S (in ascending order of S).

Every constructor puts the base vertex at 0.
"""

from __future__ import annotations

import io
from dataclasses import dataclass
from typing import Iterable, Sequence, TextIO

from .errors import BadParams, NotATree
from .gf import Scalar


def _length(t) -> int:
    code = t.code if isinstance(t, Scalar) else int(t)
    if code <= 0:
        raise BadParams(f"edge lengths must be nonzero, got {t}")
    return code


@dataclass(frozen=True)
class DistanceGraph:
    n_vertices: int
    edges: tuple[tuple[int, int, int], ...]
    base_vertex: int | None = None
    allow_disconnected: bool = False

    def __post_init__(self):
        seen = set()
        norm = []
        for u, v, lam in self.edges:
            u, v = int(u), int(v)
            if u == v:
                raise BadParams(f"self-loop at {u}")
            if u > v:
                u, v = v, u
            if not (0 <= u and v < self.n_vertices):
                raise BadParams(f"edge ({u},{v}) outside [0,{self.n_vertices})")
            if (u, v) in seen:
                raise BadParams(f"duplicate edge ({u},{v})")
            seen.add((u, v))
            norm.append((u, v, _length(lam)))
        object.__setattr__(self, "edges", tuple(sorted(norm)))
        if self.base_vertex is not None and not 0 <= self.base_vertex < self.n_vertices:
            raise BadParams("base vertex outside the vertex range")
        if self.n_vertices < 0:
            raise BadParams("negative vertex count")
        if not self.allow_disconnected and not is_connected(self):
            raise BadParams("graph is disconnected; pass allow_disconnected=True")

    @property
    def lengths(self) -> frozenset[int]:
        return frozenset(lam for _, _, lam in self.edges)

    def adjacency(self) -> list[list[tuple[int, int]]]:
        adj: list[list[tuple[int, int]]] = [[] for _ in range(self.n_vertices)]
        for u, v, lam in self.edges:
            adj[u].append((v, lam))
            adj[v].append((u, lam))
        return adj

    def degree(self, v: int) -> int:
        return sum(1 for e in self.edges if v in e[:2])

    def with_base(self, base: int | None) -> "DistanceGraph":
        return DistanceGraph(self.n_vertices, self.edges, base, self.allow_disconnected)


def vertex_count(G: DistanceGraph) -> int:
    return G.n_vertices


def edge_count(G: DistanceGraph) -> int:
    return len(G.edges)


def max_degree(G: DistanceGraph) -> int:
    deg = [0] * G.n_vertices
    for u, v, _ in G.edges:
        deg[u] += 1
        deg[v] += 1
    return max(deg, default=0)


def components(G: DistanceGraph) -> list[list[int]]:
    adj = G.adjacency()
    seen = [False] * G.n_vertices
    out = []
    for s in range(G.n_vertices):
        if seen[s]:
            continue
        comp, stack = [], [s]
        seen[s] = True
        while stack:
            u = stack.pop()
            comp.append(u)
            for w, _ in adj[u]:
                if not seen[w]:
                    seen[w] = True
                    stack.append(w)
        out.append(sorted(comp))
    return out


def is_connected(G: DistanceGraph) -> bool:
    return G.n_vertices <= 1 or len(components(G)) == 1


def is_tree(G: DistanceGraph) -> bool:
    return G.n_vertices >= 1 and len(G.edges) == G.n_vertices - 1 and is_connected(G)


def induced_subgraph(G: DistanceGraph, keep: Iterable[int]) -> tuple[DistanceGraph, list[int]]:
    """Subgraph induced on ``keep``, relabelled 0..len-1 in ascending order.

    Returns the graph and the list mapping new labels to old ones.
    """
    keep = sorted(set(keep))
    new = {v: i for i, v in enumerate(keep)}
    edges = tuple((new[u], new[v], lam) for u, v, lam in G.edges if u in new and v in new)
    base = new.get(G.base_vertex) if G.base_vertex is not None else None
    return DistanceGraph(len(keep), edges, base, allow_disconnected=True), keep


# --- families -------------------------------------------------------------------


def single_edge(t=1) -> DistanceGraph:
    return DistanceGraph(2, ((0, 1, t),), 0)


def star(k: int, t=1) -> DistanceGraph:
    if k < 1:
        raise BadParams("a star needs k >= 1 leaves")
    return DistanceGraph(k + 1, tuple((0, i, t) for i in range(1, k + 1)), 0)


def chain(m: int, t=1) -> DistanceGraph:
    if m < 1:
        raise BadParams("an m-chain needs m >= 1")
    return DistanceGraph(m + 1, tuple((i, i + 1, t) for i in range(m)), 0)


def simplex(m: int, t=1) -> DistanceGraph:
    if m < 1:
        raise BadParams("an m-simplex needs m >= 1")
    return DistanceGraph(
        m + 1, tuple((i, j, t) for i in range(m + 1) for j in range(i + 1, m + 1)), 0
    )


def _check_skeleton(skeleton: Sequence[tuple[int, int]]) -> int:
    ell = len(skeleton)
    if ell < 1:
        raise NotATree("the skeleton needs at least one edge")
    verts = {v for e in skeleton for v in e}
    if verts != set(range(ell + 1)):
        raise NotATree("skeleton vertices must be exactly 0..len(skeleton)")
    try:
        skel = DistanceGraph(ell + 1, tuple((a, b, 1) for a, b in skeleton), allow_disconnected=True)
    except BadParams as exc:
        raise NotATree(str(exc)) from exc
    if not is_tree(skel):
        raise NotATree("skeleton has a cycle or is disconnected")
    return ell


def tree_of_simplices(skeleton: Sequence[tuple[int, int]], m: int, t=1) -> DistanceGraph:
    """Replace every skeleton edge by an m-simplex through its two endpoints."""
    if m < 2:
        raise BadParams("trees of simplices need m >= 2")
    skeleton = [(int(a), int(b)) for a, b in skeleton]
    ell = _check_skeleton(skeleton)
    edges = []
    nxt = ell + 1
    for a, b in skeleton:
        members = [a, b] + list(range(nxt, nxt + m - 1))
        nxt += m - 1
        for i in range(len(members)):
            for j in range(i + 1, len(members)):
                edges.append((members[i], members[j], t))
    return DistanceGraph(nxt, tuple(edges), 0)


def path_skeleton(k: int) -> list[tuple[int, int]]:
    return [(i, i + 1) for i in range(k)]


def star_skeleton(ell: int) -> list[tuple[int, int]]:
    return [(0, i) for i in range(1, ell + 1)]


def chain_of_simplices(k: int, m: int, t=1) -> DistanceGraph:
    """T_k^m: k simplices glued consecutively at single chain nodes."""
    if k < 1 or m < 2:
        raise BadParams("chains of simplices need k >= 1 and m >= 2")
    return tree_of_simplices(path_skeleton(k), m, t)


@dataclass(frozen=True)
class HolderSpec:
    base: DistanceGraph
    duplicated: frozenset[int]
    fold: int

    def __post_init__(self):
        object.__setattr__(self, "duplicated", frozenset(int(v) for v in self.duplicated))
        if not self.duplicated:
            raise BadParams("the duplicated set S must be nonempty")
        if not all(0 <= v < self.base.n_vertices for v in self.duplicated):
            raise BadParams("S must be a subset of V(H)")
        if self.fold < 2:
            raise BadParams("a Hölder extension needs fold k >= 2")

    @property
    def kept(self) -> list[int]:
        """V \\ S, ascending."""
        return [v for v in range(self.base.n_vertices) if v not in self.duplicated]


def holder_extension(spec: HolderSpec) -> DistanceGraph:
    """V plus k-1 copies of S; a copy is wired to V\\S like its original and to
    copies in its own layer like the originals are wired to each other."""
    H, S, k = spec.base, sorted(spec.duplicated), spec.fold
    slot = {v: j for j, v in enumerate(S)}
    n = H.n_vertices
    edges = list(H.edges)
    for layer in range(1, k):
        off = n + (layer - 1) * len(S)
        for u, v, lam in H.edges:
            if u in slot and v in slot:
                edges.append((off + slot[u], off + slot[v], lam))
            elif u in slot:
                edges.append((off + slot[u], v, lam))
            elif v in slot:
                edges.append((u, off + slot[v], lam))
    G = DistanceGraph(n + (k - 1) * len(S), tuple(edges), H.base_vertex, allow_disconnected=True)
    if is_connected(G):
        G = DistanceGraph(G.n_vertices, G.edges, G.base_vertex)
    return G


def holder_chain(k: int, m: int, t=1, allow_cycle: bool = False) -> DistanceGraph:
    """G_{k,m}: k internally disjoint m-paths between the endpoints 0 and m."""
    if m < 2:
        raise BadParams("G_{k,m} needs m >= 2")
    if k < 3 and not (k == 2 and allow_cycle):
        raise BadParams("G_{k,m} needs k >= 3 (k = 2 only with allow_cycle=True)")
    return holder_extension(HolderSpec(chain(m, t), frozenset(range(1, m)), k))


def connected_graphs(n: int) -> list[tuple[tuple[int, int], ...]]:
    """Edge sets of all connected labelled simple graphs on vertices 0..n-1."""
    from itertools import combinations

    pairs = list(combinations(range(n), 2))
    out = []
    for mask in range(1 << len(pairs)):
        es = tuple(p for i, p in enumerate(pairs) if mask >> i & 1)
        if len(es) < n - 1:
            continue
        g = DistanceGraph(n, tuple((a, b, 1) for a, b in es), allow_disconnected=True)
        if is_connected(g):
            out.append(es)
    return out


# --- text format ------------------------------------------------------------------


def write_graph(G: DistanceGraph, fp: TextIO) -> None:
    """``n_vertices base_vertex`` (base -1 when absent), then ``u v lambda``."""
    base = -1 if G.base_vertex is None else G.base_vertex
    fp.write(f"{G.n_vertices} {base}\n")
    for u, v, lam in G.edges:
        fp.write(f"{u} {v} {lam}\n")


def read_graph(fp: TextIO) -> DistanceGraph:
    lines = [ln.strip() for ln in fp if ln.strip() and not ln.lstrip().startswith("#")]
    if not lines:
        raise ValueError("empty graph file")
    n, base = (int(v) for v in lines[0].split())
    edges = tuple(tuple(int(v) for v in ln.split()) for ln in lines[1:])
    G = DistanceGraph(n, edges, None if base < 0 else base, allow_disconnected=True)
    if is_connected(G):
        G = DistanceGraph(n, G.edges, G.base_vertex)
    return G


def graph_to_text(G: DistanceGraph) -> str:
    buf = io.StringIO()
    write_graph(G, buf)
    return buf.getvalue()


def graph_from_text(text: str) -> DistanceGraph:
    return read_graph(io.StringIO(text))


def _parse_skeleton(text: str) -> list[tuple[int, int]]:
    out = []
    for part in text.split(","):
        a, b = part.split("-")
        out.append((int(a), int(b)))
    return out


def parse_graph_spec(spec: str, t=1) -> DistanceGraph:
    """Build a graph from ``family[:params]``.

    ``edge``, ``star:K``, ``chain:M``, ``simplex:M``, ``schain:K,M``,
    ``hchain:K,M``, ``tree:0-1,1-2,...``, ``stree:M:0-1,0-2,...``,
    ``file:PATH``.
    """
    family, _, rest = spec.partition(":")
    try:
        if family == "edge":
            return single_edge(t)
        if family == "star":
            return star(int(rest), t)
        if family == "chain":
            return chain(int(rest), t)
        if family == "simplex":
            return simplex(int(rest), t)
        if family == "schain":
            k, m = (int(v) for v in rest.split(","))
            return chain_of_simplices(k, m, t)
        if family == "hchain":
            k, m = (int(v) for v in rest.split(","))
            return holder_chain(k, m, t)
        if family == "tree":
            skel = _parse_skeleton(rest)
            _check_skeleton(skel)
            return DistanceGraph(len(skel) + 1, tuple((a, b, t) for a, b in skel), 0)
        if family == "stree":
            m, _, skel = rest.partition(":")
            return tree_of_simplices(_parse_skeleton(skel), int(m), t)
        if family == "file":
            with open(rest) as fp:
                return read_graph(fp)
    except (ValueError, TypeError) as exc:
        if isinstance(exc, BadParams):
            raise
        raise BadParams(f"cannot parse graph spec {spec!r}: {exc}") from exc
    raise BadParams(f"unknown graph family {family!r}")
