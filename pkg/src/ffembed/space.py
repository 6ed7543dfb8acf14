"""Points of F_q^d, the quadratic form ||x|| = x_1^2 + ... + x_d^2, and point sets.

A point is addressed by its *index* ``sum_i code(x_i) * q**(d-1-i)``, so index
order is lexicographic order on canonical coordinates.  :class:`PointSet`
keeps a sorted array of indices plus a coordinate matrix; all counting in the
higher layers works on positions into that array.

Pair counts are over **ordered** pairs ``(x, y)``; an unordered count is half
of it.
"""

from __future__ import annotations

import functools
import io
from dataclasses import dataclass
from typing import Iterable, Iterator, TextIO

import numpy as np

from .errors import EmptySet, NoSqrtMinusOne, SpaceMismatch, ZeroDistance, BadParams
from .gf import FieldParams, Scalar, field_new, has_sqrt_minus_one

BITSET_LIMIT = 2**24
_CHUNK = 1 << 20


@dataclass(frozen=True)
class Space:
    """The vector space F_q^d."""

    field: FieldParams
    d: int

    def __post_init__(self):
        if self.d < 1:
            raise BadParams("dimension must be >= 1")
        if self.field.q ** self.d >= 2**62:
            raise BadParams(f"F_{self.field.q}^{self.d} is too large to index")

    @classmethod
    def of(cls, q: int, d: int) -> "Space":
        return cls(field_new(q), d)

    @property
    def q(self) -> int:
        return self.field.q

    @functools.cached_property
    def size(self) -> int:
        return self.field.q**self.d

    @functools.cached_property
    def _place(self) -> np.ndarray:
        return np.array([self.q ** (self.d - 1 - i) for i in range(self.d)], dtype=np.int64)

    def encode(self, coords: np.ndarray) -> np.ndarray:
        """Indices of an (N, d) array of coordinate codes."""
        return np.asarray(coords, dtype=np.int64) @ self._place

    def decode(self, indices: np.ndarray) -> np.ndarray:
        idx = np.asarray(indices, dtype=np.int64)
        return (idx[..., None] // self._place) % self.q

    def norms(self, coords: np.ndarray) -> np.ndarray:
        """Vectorised ||x|| over the last axis of a code array."""
        return self.field.vsum_rows(self.field.sq_table[coords])

    def point(self, coords: Iterable) -> "Point":
        pts = tuple(self.field.element(c) for c in coords)
        if len(pts) != self.d:
            raise SpaceMismatch(f"expected {self.d} coordinates, got {len(pts)}")
        return Point(pts)

    def point_at(self, index: int) -> "Point":
        return Point(tuple(Scalar(self.field, int(c)) for c in self.decode(np.int64(index))))

    def index_of(self, x: "Point") -> int:
        self.check(x)
        idx = 0
        for c in x.coords:
            idx = idx * self.q + c.code
        return idx

    def check(self, x: "Point") -> None:
        if len(x.coords) != self.d or any(c.params != self.field for c in x.coords):
            raise SpaceMismatch(f"{x} is not a point of F_{self.q}^{self.d}")

    def __repr__(self):
        return f"Space(q={self.q}, d={self.d})"


@dataclass(frozen=True, order=True)
class Point:
    coords: tuple[Scalar, ...]

    @property
    def d(self) -> int:
        return len(self.coords)

    @property
    def field(self) -> FieldParams:
        return self.coords[0].params

    def __sub__(self, other: "Point") -> "Point":
        _check_pair(self, other)
        return Point(tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __add__(self, other: "Point") -> "Point":
        _check_pair(self, other)
        return Point(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __str__(self):
        return "(" + ",".join(str(c) for c in self.coords) + ")"


def _check_pair(x: Point, y: Point) -> None:
    if x.d != y.d or x.field != y.field:
        raise SpaceMismatch(f"{x} and {y} live in different spaces")


def norm(x: Point) -> Scalar:
    acc = x.field.zero
    for c in x.coords:
        acc = acc + c * c
    return acc


def dist(x: Point, y: Point) -> Scalar:
    return norm(x - y)


class PointSet:
    """A deduplicated, lexicographically ordered subset E of F_q^d."""

    def __init__(self, space: Space, indices):
        idx = np.unique(np.asarray(indices, dtype=np.int64))
        if idx.size and (idx[0] < 0 or idx[-1] >= space.size):
            raise SpaceMismatch("index outside the ambient space")
        idx.flags.writeable = False
        self.space = space
        self.indices = idx
        self._coords: np.ndarray | None = None
        self._member: np.ndarray | None = None
        self._cache: dict = {}

    # -- constructors ---------------------------------------------------------

    @classmethod
    def full(cls, space: Space) -> "PointSet":
        return cls(space, np.arange(space.size, dtype=np.int64))

    @classmethod
    def empty(cls, space: Space) -> "PointSet":
        return cls(space, np.empty(0, dtype=np.int64))

    @classmethod
    def from_points(cls, space: Space, points: Iterable) -> "PointSet":
        pts = [p if isinstance(p, Point) else space.point(p) for p in points]
        return cls(space, [space.index_of(p) for p in pts])

    @classmethod
    def from_coords(cls, space: Space, coords: np.ndarray) -> "PointSet":
        coords = np.asarray(coords, dtype=np.int64).reshape(-1, space.d)
        return cls(space, space.encode(coords))

    # -- basic container protocol ---------------------------------------------

    @property
    def field(self) -> FieldParams:
        return self.space.field

    @property
    def coords(self) -> np.ndarray:
        if self._coords is None:
            c = self.space.decode(self.indices).reshape(-1, self.space.d)
            c.flags.writeable = False
            self._coords = c
        return self._coords

    def __len__(self) -> int:
        return int(self.indices.size)

    def __iter__(self) -> Iterator[Point]:
        for i in self.indices:
            yield self.space.point_at(int(i))

    def point(self, pos: int) -> Point:
        return self.space.point_at(int(self.indices[pos]))

    def points(self) -> list[Point]:
        return list(self)

    def contains_index(self, idx: np.ndarray) -> np.ndarray:
        idx = np.asarray(idx, dtype=np.int64)
        if self.space.size <= BITSET_LIMIT:
            if self._member is None:
                m = np.zeros(self.space.size, dtype=bool)
                m[self.indices] = True
                self._member = m
            return self._member[idx]
        return self.positions(idx) >= 0

    def positions(self, idx: np.ndarray) -> np.ndarray:
        """Position of each index in this set, or -1 when absent."""
        idx = np.asarray(idx, dtype=np.int64)
        if self.indices.size == 0:
            return np.full(idx.shape, -1, dtype=np.int64)
        pos = np.searchsorted(self.indices, idx)
        pos = np.minimum(pos, self.indices.size - 1)
        return np.where(self.indices[pos] == idx, pos, -1)

    def position_of(self, x: Point) -> int:
        return int(self.positions(np.int64(self.space.index_of(x))))

    def __contains__(self, x) -> bool:
        if not isinstance(x, Point):
            return False
        if x.d != self.space.d or x.field != self.space.field:
            return False
        return bool(self.contains_index(np.int64(self.space.index_of(x))))

    def subset(self, keep) -> "PointSet":
        """Sub-PointSet from a boolean mask or an array of positions."""
        keep = np.asarray(keep)
        if keep.dtype == bool:
            return PointSet(self.space, self.indices[keep])
        return PointSet(self.space, self.indices[keep.astype(np.int64)])

    def issubset(self, other: "PointSet") -> bool:
        _check_spaces(self, other)
        return bool(np.all(other.contains_index(self.indices)))

    def __and__(self, other: "PointSet") -> "PointSet":
        _check_spaces(self, other)
        return PointSet(self.space, np.intersect1d(self.indices, other.indices))

    def __sub__(self, other: "PointSet") -> "PointSet":
        _check_spaces(self, other)
        return PointSet(self.space, np.setdiff1d(self.indices, other.indices))

    def __eq__(self, other):
        return (
            isinstance(other, PointSet)
            and self.space == other.space
            and np.array_equal(self.indices, other.indices)
        )

    __hash__ = None

    def translate(self, v: Point) -> "PointSet":
        self.space.check(v)
        shift = np.array([c.code for c in v.coords], dtype=np.int64)
        return PointSet.from_coords(self.space, self.field.vadd(self.coords, shift))

    def __repr__(self):
        return f"PointSet(q={self.space.q}, d={self.space.d}, size={len(self)})"


def _check_spaces(a: PointSet, b: PointSet) -> None:
    if a.space != b.space:
        raise SpaceMismatch(f"{a.space} vs {b.space}")


def _length_code(field: FieldParams, t) -> int:
    return field.element(t).code


# --- spheres, degrees, pair counts ------------------------------------------


@functools.lru_cache(maxsize=256)
def _sphere_cached(q: int, d: int, tcode: int) -> PointSet:
    space = Space.of(q, d)
    found = []
    for start in range(0, space.size, _CHUNK):
        idx = np.arange(start, min(start + _CHUNK, space.size), dtype=np.int64)
        hit = space.norms(space.decode(idx)) == tcode
        found.append(idx[hit])
    return PointSet(space, np.concatenate(found) if found else [])


def sphere(params: FieldParams, d: int, t) -> PointSet:
    """All x in F_q^d with ||x|| = t, by enumeration (cached)."""
    return _sphere_cached(params.q, d, _length_code(params, t))


def neighbor_positions(E: PointSet, t, targets: np.ndarray | None = None) -> np.ndarray:
    """Matrix M with M[i, j] = position in E of ``target_i + s_j`` (s_j on the
    t-sphere), or -1 when that point is not in E.  Targets default to E."""
    tcode = _length_code(E.field, t)
    if tcode == 0:
        raise ZeroDistance("distance t must be nonzero")
    S = sphere(E.field, E.space.d, tcode).coords
    T = E.coords if targets is None else np.asarray(targets, dtype=np.int64).reshape(-1, E.space.d)
    out = np.full((T.shape[0], S.shape[0]), -1, dtype=np.int64)
    if T.shape[0] == 0 or S.shape[0] == 0 or len(E) == 0:
        return out
    rows = max(1, _CHUNK // max(1, S.shape[0]))
    for a in range(0, T.shape[0], rows):
        block = E.field.vadd(T[a : a + rows, None, :], S[None, :, :])
        out[a : a + rows] = E.positions(E.space.encode(block))
    return out


def degrees(E: PointSet, t, targets: np.ndarray | None = None) -> np.ndarray:
    """E*S(x) for every target x (default: every x in E)."""
    return (neighbor_positions(E, t, targets) >= 0).sum(axis=1).astype(np.int64)


def edge_degree(E: PointSet, t, x: Point) -> int:
    """Number of y in E with ||x - y|| = t; x need not lie in E."""
    E.space.check(x)
    target = np.array([[c.code for c in x.coords]], dtype=np.int64)
    return int(degrees(E, t, target)[0])


def pair_count(E: PointSet, t) -> int:
    """Ordered pairs (x, y) in E x E with ||x - y|| = t."""
    if len(E) == 0:
        if _length_code(E.field, t) == 0:
            raise ZeroDistance("distance t must be nonzero")
        return 0
    return int(degrees(E, t).sum())


def distance_set(E: PointSet) -> set[Scalar]:
    """{||x - y|| : x, y in E}."""
    if len(E) == 0:
        raise EmptySet("distance set of an empty set")
    C = E.coords
    seen = np.zeros(E.field.q, dtype=bool)
    rows = max(1, _CHUNK // max(1, len(E)))
    for a in range(0, len(E), rows):
        diff = E.field.vsub(C[a : a + rows, None, :], C[None, :, :])
        seen[E.space.norms(diff).ravel()] = True
    return {Scalar(E.field, int(c)) for c in np.nonzero(seen)[0]}


def isotropic_line(params: FieldParams, d: int = 2) -> PointSet:
    """{(t, i t, 0, ..., 0)} with i the canonical square root of -1."""
    if d < 2:
        raise BadParams("the isotropic line needs d >= 2")
    if not has_sqrt_minus_one(params):
        raise NoSqrtMinusOne(f"-1 is not a square in F_{params.q}")
    i = (-params.one).sqrt()
    space = Space(params, d)
    pts = [space.point([s, s * i] + [0] * (d - 2)) for s in params.elements()]
    return PointSet.from_points(space, pts)


# --- text format --------------------------------------------------------------


def write_pointset(E: PointSet, fp: TextIO, comments: Iterable[str] = ()) -> None:
    """Line 1 ``q d``; ``#`` comment lines; one point per line."""
    fp.write(f"{E.space.q} {E.space.d}\n")
    for c in comments:
        fp.write(f"# {c}\n" if c else "#\n")
    fmt = E.field.format_code
    for row in E.coords:
        fp.write(" ".join(fmt(int(c)) for c in row) + "\n")


def read_pointset(fp: TextIO) -> PointSet:
    header = None
    rows = []
    for raw in fp:
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if header is None:
            q, d = (int(v) for v in line.split())
            header = Space.of(q, d)
            continue
        parts = line.split(" ")
        if len(parts) != header.d:
            raise SpaceMismatch(f"expected {header.d} coordinates in {line!r}")
        rows.append([header.field.parse_code(p) for p in parts])
    if header is None:
        raise ValueError("missing 'q d' header line")
    coords = np.array(rows, dtype=np.int64).reshape(-1, header.d)
    return PointSet.from_coords(header, coords)


def pointset_to_text(E: PointSet, comments: Iterable[str] = ()) -> str:
    buf = io.StringIO()
    write_pointset(E, buf, comments)
    return buf.getvalue()


def pointset_from_text(text: str) -> PointSet:
    return read_pointset(io.StringIO(text))
