"""Refinements of E: the explicit subsets built by the shaving arguments.

Each function returns the exact set the construction defines together with
the per-point values it achieved and the size/degree claims it supports.
Thresholds are exact rationals or certified reals, never floats.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Iterable, Sequence

import numpy as np

from .count import base_profile, simplex_pair_table
from .errors import BadParams, HypothesisNotMet
from .graphdef import DistanceGraph
from .intervals import Real
from .space import PointSet, degrees, write_pointset


@dataclass(frozen=True)
class ShaveParams:
    """Cap multiplier ``lam`` or a two-sided pair ``lam_lo``/``lam_hi``."""

    lam: Fraction | None = None
    lam_lo: Fraction | None = None
    lam_hi: Fraction | None = None
    lengths: tuple[int, ...] = (1,)

    def __post_init__(self):
        for name in ("lam", "lam_lo", "lam_hi"):
            v = getattr(self, name)
            if v is not None:
                v = Fraction(v)
                if v <= 0:
                    raise BadParams(f"{name} must be positive")
                object.__setattr__(self, name, v)
        if (self.lam_lo is None) != (self.lam_hi is None):
            raise BadParams("two-sided shaving needs both lam_lo and lam_hi")
        object.__setattr__(self, "lengths", tuple(int(t) for t in self.lengths))
        if any(t == 0 for t in self.lengths):
            raise BadParams("lengths must be nonzero")


@dataclass
class Claim:
    """One checked inequality ``lhs <relation> rhs``.

    ``asserted`` marks claims whose hypotheses hold, i.e. claims that must be
    true; unasserted claims are still evaluated for information.
    """

    name: str
    relation: str
    lhs: int | Fraction
    rhs: Real | None
    asserted: bool
    holds: bool

    @classmethod
    def check(cls, name: str, lhs, relation: str, rhs, asserted: bool) -> "Claim":
        rhs = Real.of(rhs)
        c = Real.of(lhs).compare(rhs)
        ok = {"<=": c <= 0, ">=": c >= 0, "<": c < 0, ">": c > 0}[relation]
        return cls(name, relation, lhs, rhs, asserted, ok)

    @classmethod
    def fact(cls, name: str, holds: bool, asserted: bool = True) -> "Claim":
        return cls(name, "is", int(holds), None, asserted, bool(holds))

    def to_json(self) -> dict:
        out = {"name": self.name, "relation": self.relation, "lhs": _num(self.lhs)}
        if self.rhs is not None:
            out["rhs"] = self.rhs.at().as_strings()
        out["asserted"] = self.asserted
        out["holds"] = self.holds
        return out


def _num(x) -> str:
    return str(x) if isinstance(x, int) else str(Fraction(x))


@dataclass
class ShaveResult:
    subset: PointSet
    source_size: int
    certified_bounds: tuple[int, int] | None
    hypothesis_met: bool
    claims: list[Claim] = field(default_factory=list)
    stages: dict[str, PointSet] = field(default_factory=dict)
    params: dict[str, object] = field(default_factory=dict)

    @property
    def removed(self) -> int:
        return self.source_size - len(self.subset)

    @property
    def asserted(self) -> bool:
        return any(c.asserted for c in self.claims)

    @property
    def ok(self) -> bool:
        """True unless an asserted claim failed."""
        return all(c.holds for c in self.claims if c.asserted)

    def metadata(self) -> list[str]:
        lines = [f"{k}: {v}" for k, v in self.params.items()]
        lines.append(f"source_size: {self.source_size}")
        lines.append(f"size: {len(self.subset)}")
        lines.append(f"removed: {self.removed}")
        lines.append(f"hypothesis_met: {str(self.hypothesis_met).lower()}")
        if self.certified_bounds is not None:
            lines.append(f"achieved_min: {self.certified_bounds[0]}")
            lines.append(f"achieved_max: {self.certified_bounds[1]}")
        for name, st in self.stages.items():
            lines.append(f"stage {name}: {len(st)}")
        for c in self.claims:
            rhs = "" if c.rhs is None else " " + str(c.rhs)
            lines.append(
                f"claim {c.name}: {_num(c.lhs)} {c.relation}{rhs} "
                f"asserted={str(c.asserted).lower()} holds={str(c.holds).lower()}"
            )
        return lines

    def to_text(self) -> str:
        """The point-set format with the metadata as ``# key: value`` lines."""
        buf = io.StringIO()
        write_pointset(self.subset, buf, self.metadata())
        return buf.getvalue()


def _extrema(values: np.ndarray) -> tuple[int, int] | None:
    return (int(values.min()), int(values.max())) if values.size else None


def _ir_regime(E: PointSet, factor) -> bool:
    """|E| >= factor * q^((d+1)/2)."""
    q, d = E.space.q, E.space.d
    return Real.of(len(E)) >= Real.of(factor) * Real.of(q) ** Fraction(d + 1, 2)


# --- degree caps ------------------------------------------------------------------


def degree_cap_set(E: PointSet, lengths: Iterable, lam) -> ShaveResult:
    """E' = intersection over t in L of {x in E : E*S_t(x) <= lam |E| / q}."""
    lengths = [E.field.element(t).code if not isinstance(t, int) else t for t in lengths]
    lam = Real.of(lam)
    if lam <= 0:
        raise BadParams("lambda must be positive")
    q, N = E.space.q, len(E)
    cap = (lam * N / q).floor()
    keep = np.ones(N, dtype=bool)
    for t in lengths:
        keep &= degrees(E, t) <= cap
    sub = E.subset(keep)
    regime = N > 0 and _ir_regime(E, 2)
    claims = [
        Claim.check("removed", N - len(sub), "<=", 2 * len(lengths) * Real.of(N) / lam, regime)
    ]
    if len(sub):
        recheck = all(int(degrees(E, t, sub.coords).max()) <= cap for t in lengths)
        claims.append(Claim.fact("caps_rechecked", recheck))
    achieved = _extrema(
        np.max(np.stack([degrees(E, t, sub.coords) for t in lengths]), axis=0)
    ) if len(sub) and lengths else None
    return ShaveResult(
        sub,
        N,
        achieved,
        regime,
        claims,
        params={"construction": "degree_cap", "lengths": list(lengths), "lambda": str(lam), "cap": cap},
    )


def shave_one_edge(E: PointSet, t, lam, C=None) -> ShaveResult:
    """E* of the one-edge shaving argument.

    E' caps E*S against |E|; E* floors E'*S against |E'|.  ``C`` is the
    caller's constant with |E| >= C q^((d+1)/2); when omitted the largest
    admissible C = |E| / q^((d+1)/2) is used.
    """
    lam = Real.of(lam)
    if lam <= 0:
        raise BadParams("lambda must be positive")
    q, d, N = E.space.q, E.space.d, len(E)
    scale = Real.of(q) ** Fraction(d + 1, 2)
    C = Real.of(N) / scale if C is None else Real.of(C)
    hyp = C > 4 and Real.of(N) >= C * scale and lam > 2 * C / (C - 4)

    deg_E = degrees(E, t) if N else np.zeros(0, dtype=np.int64)
    cap = (lam * N / q).floor()
    E1 = E.subset(deg_E <= cap)
    deg_E1 = degrees(E1, t) if len(E1) else np.zeros(0, dtype=np.int64)
    floor_ = (Real.of(len(E1)) / (lam * q)).ceil()
    keep = deg_E1 >= floor_
    E2 = E1.subset(keep)
    final = degrees(E, t, E2.coords) if len(E2) else np.zeros(0, dtype=np.int64)

    lo_target = Real.of(N) / (lam * q)
    hi_target = lam * N / q
    claims = [
        Claim.check("size", len(E2), ">=", (1 - 2 / lam) / (2 * lam) * N, hyp),
        Claim.check("first_pass_removed", N - len(E1), "<=", 2 * Real.of(N) / lam, hyp),
    ]
    if final.size:
        claims.append(Claim.check("max_degree", int(final.max()), "<=", hi_target, hyp))
        claims.append(Claim.check("min_degree", int(final.min()), ">=", lo_target, hyp))
    return ShaveResult(
        E2,
        N,
        _extrema(final),
        hyp,
        claims,
        stages={"E'": E1},
        params={
            "construction": "shave_one_edge",
            "t": E.field.element(t).code,
            "lambda": str(lam),
            "C": str(C),
            "cap": cap,
            "floor": floor_,
        },
    )


def general_shave(
    E: PointSet,
    G: DistanceGraph,
    lambda1,
    lambda2,
    N_threshold=None,
    sandwich: bool = False,
    budget: int | None = None,
) -> ShaveResult:
    """Base-point shaving for an arbitrary graph with a base vertex.

    ``lambda2=None`` means the cap never binds.  ``sandwich`` is the caller's
    declaration that |E|^n/(2q^m) <= N_G(F) <= 2|E|^n/q^m for every F with
    |F| > N_threshold; size claims are asserted only when it is declared and
    |E| > 2 N_threshold.  The returned subset is the proof's E*; the window
    set of the statement is kept in ``stages["window"]``.
    """
    if G.base_vertex is None:
        raise BadParams("general shaving needs a base vertex")
    n, m = G.n_vertices, len(G.edges)
    lam1 = Real.of(lambda1)
    if not lam1 > 0 or not lam1 < Fraction(1, 2**n):
        raise BadParams(f"lambda1 must lie in (0, 2^-{n})")
    lam2 = None if lambda2 is None else Real.of(lambda2)
    if lam2 is not None and lam2 < 4:
        raise BadParams("lambda2 must be >= 4")
    lam0 = lam1 * 2 ** (n - 1)
    q, N = E.space.q, len(E)
    unit = Fraction(N ** (n - 1), q**m)

    f = np.array(base_profile(G, E, budget).values, dtype=object)
    if lam2 is None:
        E1 = E
        cap = None
    else:
        cap = (lam2 * unit).floor()
        E1 = E.subset(np.array([v <= cap for v in f], dtype=bool)) if N else E
    g = np.array(base_profile(G, E1, budget).values, dtype=object) if len(E1) else np.zeros(0, dtype=object)
    floor_ = (lam0 * Fraction(len(E1) ** (n - 1), q**m)).ceil()
    E2 = E1.subset(np.array([v >= floor_ for v in g], dtype=bool)) if len(E1) else E1

    win_lo = (lam1 * unit).ceil()
    win_hi = None if lam2 is None else (lam2 * unit).floor()
    in_window = np.array(
        [v >= win_lo and (win_hi is None or v <= win_hi) for v in f], dtype=bool
    )
    W = E.subset(in_window) if N else E

    hyp = bool(sandwich) and N_threshold is not None and Real.of(N) > 2 * Real.of(N_threshold)
    size_rhs = (Real.of(Fraction(1, 2)) - lam0) * (
        (1 - 2 / lam2) ** n if lam2 is not None else 1
    ) * N
    claims = [
        Claim.check("window_size", len(W), ">=", size_rhs, hyp),
        Claim.check("construction_size", len(E2), ">=", size_rhs, hyp),
        Claim.fact("construction_in_window", E2.issubset(W), hyp),
    ]
    fE2 = np.array([f[E.position_of(x)] for x in E2], dtype=object)
    achieved = (int(min(fE2)), int(max(fE2))) if len(fE2) else None
    return ShaveResult(
        E2,
        N,
        achieved,
        hyp,
        claims,
        stages={"E'": E1, "window": W},
        params={
            "construction": "general_shave",
            "n": n,
            "m": m,
            "lambda1": str(lam1),
            "lambda2": "inf" if lam2 is None else str(lam2),
            "lambda0": str(lam0),
            "cap": "none" if cap is None else cap,
            "floor": floor_,
            "sandwich_declared": str(bool(sandwich)).lower(),
        },
    )


# --- sets for the simplex-chain degeneracy count ---------------------------------------


def simplex_profile(m: int, t, E: PointSet, budget: int | None = None) -> list[int]:
    """f_{1,m}(x): embeddings of an m-simplex with a marked vertex at x."""
    if m < 1:
        raise BadParams("m must be >= 1")
    if m == 1:
        return [int(v) for v in degrees(E, t)] if len(E) else []
    return simplex_pair_table(m, t, E, budget).row_sums()


@dataclass
class NondegPrep:
    E_star: ShaveResult
    E_dprime: ShaveResult
    E0: PointSet
    lam: Real
    m: int
    hypothesis_met: bool
    claims: list[Claim]

    def degenerate_bound(self, k: int, size: int) -> Real:
        """(lam')^k |E|^{mk} / q^{k m(m+1)/2 - m}."""
        q = self.E0.space.q
        m = self.m
        return self.lam**k * Fraction(size ** (m * k)) / Real.of(q) ** (k * comb(m + 1, 2) - m)


def nondeg_prep_sets(E: PointSet, m: int, t, lam, budget: int | None = None) -> NondegPrep:
    """E* (cap on f_{1,m}), E'' (cap on f_{1,m-1}) and E_0 = E* & E''."""
    if m < 2:
        raise BadParams("m must be >= 2")
    lam = Real.of(lam)
    if not lam > 0:
        raise BadParams("lambda' must be positive")
    q, d, N = E.space.q, E.space.d, len(E)

    def capped(order: int, name: str) -> ShaveResult:
        prof = np.array(simplex_profile(order, t, E, budget), dtype=object)
        cap = (lam * Fraction(N**order, q ** comb(order + 1, 2))).floor()
        keep = np.array([v <= cap for v in prof], dtype=bool)
        sub = E.subset(keep) if N else E
        kept = prof[keep] if N else prof
        ach = (int(min(kept)), int(max(kept))) if len(kept) else None
        return ShaveResult(sub, N, ach, False, [], params={"construction": name, "cap": cap})

    E_star = capped(m, "simplex_cap")
    E_dd = capped(m - 1, "subsimplex_cap")
    E0 = E_star.subset & E_dd.subset
    thr_m = 12 * (m + 1) ** 2 * Real.of(q) ** (m + Fraction(d - 1, 2))
    if m - 1 >= 2:
        thr_m1 = 12 * m**2 * Real.of(q) ** (m - 1 + Fraction(d - 1, 2))
    else:
        thr_m1 = 2 * Real.of(q) ** Fraction(d + 1, 2)
    hyp = N > 0 and Real.of(N) >= thr_m and Real.of(N) >= thr_m1
    claims = [
        Claim.check("E*_removed", E_star.removed, "<=", 2 * Real.of(N) / lam, hyp),
        Claim.check("E''_removed", E_dd.removed, "<=", 2 * Real.of(N) / lam, hyp),
        Claim.check("E0_removed", N - len(E0), "<=", 4 * Real.of(N) / lam, hyp),
    ]
    return NondegPrep(E_star, E_dd, E0, lam, m, hyp, claims)


def require(result: ShaveResult) -> ShaveResult:
    """Raise HypothesisNotMet when the construction's hypotheses failed."""
    if not result.hypothesis_met:
        raise HypothesisNotMet(result.params.get("construction", "shave"))
    return result


__all__: Sequence[str] = [
    "Claim",
    "NondegPrep",
    "ShaveParams",
    "ShaveResult",
    "degree_cap_set",
    "general_shave",
    "nondeg_prep_sets",
    "require",
    "shave_one_edge",
    "simplex_profile",
]
