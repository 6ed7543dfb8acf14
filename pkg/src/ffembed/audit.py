"""Finite-instance audits of the counting theorems.

``audit(id, E, params)`` evaluates one statement on one set: whether its
hypothesis holds, the exact left side, the right side as a certified real,
and a verdict.  A report whose hypothesis fails is VACUOUS; the inequality
is still evaluated when affordable, for information.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from math import comb
from typing import Callable, Iterable, Mapping

from .count import (
    count_all,
    count_fast,
    holder_chain_nondeg_m2,
    first_embedding,
    holder_chain_count,
    holder_lower_bound,
    simplex_chain_count,
    simplex_pair_table,
    simplex_tree_count,
    tree_count,
)
from .errors import BadParams, BudgetExceeded, Disconnected, MissingParam, NotATree
from .graphdef import (
    DistanceGraph,
    HolderSpec,
    chain,
    chain_of_simplices,
    connected_graphs,
    holder_chain,
    holder_extension,
    is_connected,
    is_tree,
    max_degree,
    parse_graph_spec,
    star_skeleton,
    tree_of_simplices,
)
from .intervals import Real
from .refine import Claim, degree_cap_set, general_shave, shave_one_edge
from .space import PointSet, pair_count, pointset_to_text


class TheoremId(str, Enum):
    IR_PAIR_COUNT = "IR_PAIR_COUNT"
    TREE_EMBED = "TREE_EMBED"
    IP_THRESHOLD = "IP_THRESHOLD"
    HOLDER_LEMMA = "HOLDER_LEMMA"
    HOLDER_COR = "HOLDER_COR"
    DEGEN_GENERAL = "DEGEN_GENERAL"
    SHAVE_ONE_EDGE = "SHAVE_ONE_EDGE"
    SHAVE_GENERAL = "SHAVE_GENERAL"
    HCHAIN_TOTAL = "HCHAIN_TOTAL"
    HCHAIN_NONDEG_A = "HCHAIN_NONDEG_A"
    HCHAIN_NONDEG_B = "HCHAIN_NONDEG_B"
    HCHAIN_SUMMARY = "HCHAIN_SUMMARY"
    SIMPLEX_T1 = "SIMPLEX_T1"
    SCHAIN_TOTAL = "SCHAIN_TOTAL"
    SCHAIN_NONDEG = "SCHAIN_NONDEG"
    STREE_PROP = "STREE_PROP"
    STREE_TOTAL = "STREE_TOTAL"
    STREE_NONDEG = "STREE_NONDEG"


class Verdict(str, Enum):
    HOLDS = "HOLDS"
    VIOLATED = "VIOLATED"
    VACUOUS = "VACUOUS"


THRESHOLD_NOTE = "threshold_exceeds_space"
BUDGET_NOTE = "lhs_skipped_budget"


@dataclass
class TheoremReport:
    id: TheoremId
    params: dict[str, object]
    hypothesis_met: bool
    relation: str
    lhs: int | Fraction | None
    rhs: Real | None
    verdict: Verdict
    claims: list[Claim] = field(default_factory=list)
    witness: list[list[str]] | None = None
    notes: list[str] = field(default_factory=list)
    instance: dict[str, object] = field(default_factory=dict)
    sub_id: str | None = None

    def to_json(self) -> dict:
        rhs = None
        approx = None
        if self.rhs is not None:
            iv = self.rhs.at()
            rhs = iv.as_strings()
            approx = f"{float(iv.mid):.12g}"
        return {
            "id": self.id.value,
            "sub_id": self.sub_id,
            "params": self.params,
            "instance": self.instance,
            "hypothesis_met": self.hypothesis_met,
            "relation": self.relation,
            "lhs": None if self.lhs is None else _num(self.lhs),
            "rhs": rhs,
            "rhs_approx": approx,
            "verdict": self.verdict.value,
            "claims": [c.to_json() for c in self.claims],
            "witness": self.witness,
            "notes": self.notes,
        }

    def to_line(self) -> str:
        return json.dumps(self.to_json(), separators=(",", ":"), ensure_ascii=True)


def _num(x) -> str:
    return str(x) if isinstance(x, int) else str(Fraction(x))


# --- small formulas ---------------------------------------------------------------


def eta(m: int, ell: int) -> int:
    """(l-1)(m+5)(lm/2+1) - (m+2)l, always an integer."""
    v = (ell - 1) * (m + 5) * (Fraction(ell * m, 2) + 1) - (m + 2) * ell
    assert v.denominator == 1
    return int(v)


def _ell_of(k: int) -> int:
    """The integer l with 2^l < k <= 2^(l+1)."""
    if k < 1:
        raise BadParams("k must be >= 1")
    return (k - 1).bit_length() - 1


def ip_threshold(G: DistanceGraph, q: int, d: int) -> Real:
    """12 n^2 q^((d-1)/2 + s), n = vertices, s = maximum degree."""
    if not is_connected(G):
        raise Disconnected("the threshold is stated for connected graphs")
    n, s = G.n_vertices, max_degree(G)
    return 12 * n**2 * Real.of(q) ** (Fraction(d - 1, 2) + s)


@dataclass(frozen=True)
class RegimeSummary:
    k: int
    d: int
    m: int
    q: int
    regime: str
    exponent: Fraction
    log_power: int
    exceptional: bool
    log_branch: Real
    cycle_branch: Real
    chosen: str

    @property
    def threshold(self) -> Real:
        return self.log_branch if self.chosen == "log" else self.cycle_branch

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "d": self.d,
            "m": self.m,
            "q": self.q,
            "regime": self.regime,
            "exponent": str(self.exponent),
            "log_power": self.log_power,
            "exceptional": self.exceptional,
            "log_branch": self.log_branch.at().as_strings(),
            "cycle_branch": self.cycle_branch.at().as_strings(),
            "chosen": self.chosen,
        }


EXCEPTIONAL_TRIPLES = frozenset({(4, 2, 3), (4, 2, 4), (5, 2, 3)})


def _cycle_exponent(d: int, m: int, delta: Fraction) -> Fraction:
    return Fraction(1, 2) * (d + 2 - Fraction(m - 2, m - 1) + delta)


def _branches(k: int, d: int, m: int, q: int, delta: Fraction) -> tuple[Real, Real]:
    Q = Real.of(q)
    lnq = Real.ln(q)
    A = lnq * Q ** max(Fraction(d + 1, 2), Fraction(k))
    c1 = Q ** _cycle_exponent(d, m, delta)
    c2 = lnq ** (m - 2) * Q ** Fraction(d * (k - 2) + 1, k - 1)
    B = c1 if c1 >= c2 else c2
    return A, B


def regime_summary(k: int, d: int, m: int, q: int, delta=None) -> RegimeSummary:
    """Which of the three simplified threshold regimes applies to G_{k,m}."""
    if k < 3:
        raise BadParams("G_{k,m} needs k >= 3")
    if m < 2 or d < 1 or q < 3:
        raise BadParams("need m >= 2, d >= 1, q >= 3")
    delta = Fraction(1, 4 * m * m) if delta is None else Fraction(delta)
    if 2 * k < d + 1:
        regime, exponent, lp = "k<(d+1)/2", Fraction(d + 1, 2), 1
    elif k <= d - 2:
        regime, exponent, lp = "(d+1)/2<=k<=d-2", Fraction(k), 1
    else:
        regime, exponent, lp = "k>=d-1", Fraction(d * (k - 2) + 1, k - 1), m - 2
    A, B = _branches(k, d, m, q, delta)
    chosen = "log" if A <= B else "cycle"
    return RegimeSummary(
        k, d, m, q, regime, exponent, lp, k == 3 or (k, d, m) in EXCEPTIONAL_TRIPLES, A, B, chosen
    )


# --- helpers ------------------------------------------------------------------------

_REQUIRED = object()


def _get(params: Mapping, key: str, default=_REQUIRED):
    if key in params:
        return params[key]
    if default is _REQUIRED:
        raise MissingParam(key)
    return default


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(str(x)) if isinstance(x, float) else Fraction(x)


def _graph(params: Mapping, t: int, key: str = "graph") -> DistanceGraph:
    G = _get(params, key)
    if isinstance(G, str):
        G = parse_graph_spec(G, t)
    return G


def _instance(E: PointSet) -> dict:
    digest = hashlib.sha256(pointset_to_text(E).encode()).hexdigest()[:16]
    return {"q": E.space.q, "d": E.space.d, "size": len(E), "digest": digest}


def _witness(G: DistanceGraph, E: PointSet, injective: bool) -> list[list[str]] | None:
    emb = first_embedding(G, E, injective)
    if emb is None:
        return None
    fmt = E.field.format_code
    return [[fmt(c.code) for c in p.coords] for p in emb]


class _Ctx:
    """Accumulates hypothesis checks, notes and claims for one report."""

    def __init__(self, tid: TheoremId, E: PointSet, params: Mapping):
        self.tid = tid
        self.E = E
        self.q = E.space.q
        self.d = E.space.d
        self.N = len(E)
        self.space_size = E.space.size
        self.budget = params.get("budget")
        self.t = E.field.element(params.get("t", 1)).code
        self.params: dict[str, object] = {"t": self.t}
        self.hyp = True
        self.notes: list[str] = []
        self.claims: list[Claim] = []
        self.witness = None
        self.sub_id = None

    def record(self, **kv):
        for k, v in kv.items():
            self.params[k] = v if isinstance(v, (int, str, bool, list)) or v is None else str(v)

    def require(self, ok: bool, note: str | None = None):
        if not ok:
            self.hyp = False
            if note:
                self.notes.append(note)

    def size_above(self, threshold, strict: bool = True):
        """Hypothesis |E| > threshold (or >=); notes when no subset could qualify."""
        thr = Real.of(threshold)
        size = Real.of(self.N)
        met = size > thr if strict else size >= thr
        cap = Real.of(self.space_size)
        impossible = (cap <= thr) if strict else (cap < thr)
        if impossible and THRESHOLD_NOTE not in self.notes:
            self.notes.append(THRESHOLD_NOTE)
        self.threshold = thr
        self.require(met)

    def compute(self, fn: Callable[[], object]):
        """Run a count; budget overruns are fatal only when the hypothesis holds."""
        try:
            return fn()
        except BudgetExceeded:
            if self.hyp:
                raise
            self.notes.append(BUDGET_NOTE)
            return None

    def claim(self, name: str, lhs, relation: str, rhs):
        if lhs is None:
            return
        self.claims.append(Claim.check(name, lhs, relation, rhs, self.hyp))

    def finish(self) -> TheoremReport:
        if "threshold" not in self.params and hasattr(self, "threshold"):
            self.params["threshold"] = self.threshold.at().as_strings()
        primary = self.claims[0] if self.claims else None
        if not self.hyp:
            verdict = Verdict.VACUOUS
        elif all(c.holds for c in self.claims):
            verdict = Verdict.HOLDS
        else:
            verdict = Verdict.VIOLATED
        return TheoremReport(
            self.tid,
            self.params,
            self.hyp,
            primary.relation if primary else "",
            primary.lhs if primary else None,
            primary.rhs if primary else None,
            verdict,
            self.claims,
            self.witness if verdict is Verdict.HOLDS else None,
            self.notes,
            _instance(self.E),
            self.sub_id,
        )

    def attach_witness(self, G: DistanceGraph, where: PointSet, injective: bool, rhs):
        """Existence is implied when the claimed lower bound is positive."""
        if self.hyp and self.claims and all(c.holds for c in self.claims) and Real.of(rhs) > 0:
            self.witness = _witness(G, where, injective)


# --- per-theorem audits -------------------------------------------------------------------


def _ir(c: _Ctx, params):
    c.require(c.d >= 2, "needs d >= 2")
    pc = pair_count(c.E, c.t)
    err = abs(Fraction(pc) - Fraction(c.N**2, c.q))
    c.record(pair_count=pc)
    c.claim("error", err, "<=", 2 * Real.of(c.q) ** Fraction(c.d - 1, 2) * c.N)


def _tree(c: _Ctx, params):
    T = _graph(params, c.t)
    if not is_tree(T):
        raise NotATree("the tree theorem needs a tree")
    eps = _frac(_get(params, "epsilon"))
    c.require(eps > 0, "needs epsilon > 0")
    k = len(T.edges)
    c.record(graph=_graph_label(params), k=k, epsilon=eps)
    c.size_above(Real.of(c.q) ** (Fraction(c.d + 1, 2) + eps))
    lhs = tree_count(T, c.E)[0]
    rhs = Fraction(c.N ** (k + 1), c.q**k) * (1 - 8 * Real.of(c.q) ** (-2 * eps / (k + 1)))
    c.claim("lower_bound", lhs, ">=", rhs)
    c.attach_witness(T, c.E, False, rhs)


def _ip(c: _Ctx, params):
    G = _graph(params, c.t)
    c.record(graph=_graph_label(params), n=G.n_vertices, s=max_degree(G))
    c.size_above(ip_threshold(G, c.q, c.d), strict=False)
    res = c.compute(lambda: count_all(G, c.E, c.budget))
    if res is not None:
        c.claim("copy_exists", res.nondegenerate, ">=", 1)
        c.attach_witness(G, c.E, True, 1)


def _holder_parts(c: _Ctx, params):
    H = _graph(params, c.t, "base")
    S = sorted(int(v) for v in _get(params, "S"))
    k = int(_get(params, "k"))
    if k < 1:
        raise BadParams("k must be >= 1")
    G = H if k == 1 else holder_extension(HolderSpec(H, frozenset(S), k))
    ell = H.n_vertices - len(set(S))
    c.record(base=_graph_label(params, "base"), S=S, k=k, l=ell)
    c.require(c.d >= 2, "needs d >= 2")
    return H, S, k, G, ell


def _holder(c: _Ctx, params):
    H, S, k, G, ell = _holder_parts(c, params)
    n_g = c.compute(lambda: count_fast(G, c.E, c.budget))
    proof = c.compute(lambda: holder_lower_bound(H, S, k, c.E, "proof", c.budget))
    printed = c.compute(lambda: holder_lower_bound(H, S, k, c.E, "printed", c.budget))
    c.record(N_G=n_g)
    if n_g is not None and proof is not None:
        c.claim("proof_exponent", n_g, ">=", proof)
        c.claim("printed_exponent", n_g, ">=", printed)


def _holder_cor(c: _Ctx, params):
    H, S, k, G, ell = _holder_parts(c, params)
    n_g = c.compute(lambda: count_fast(G, c.E, c.budget))
    n_h = c.compute(lambda: count_fast(H, c.E, c.budget))
    if n_g is None or n_h is None:
        return
    rhs = Fraction(0) if c.N == 0 else Fraction(n_h**k, c.N ** ((k - 1) * ell))
    c.claim("lower_bound", n_g, ">=", rhs)


def _degen(c: _Ctx, params):
    n = int(_get(params, "n"))
    if n < 2:
        raise BadParams("n must be >= 2")
    L = sorted({c.E.field.element(v).code for v in params.get("L", [c.t])})
    eps = _frac(_get(params, "epsilon"))
    c.require(eps > 0, "needs epsilon > 0")
    c.record(n=n, L=L, epsilon=eps, lambda_rule="q^(2 epsilon/n)")
    c.size_above(Real.of(c.q) ** (Fraction(c.d + 1, 2) + eps))
    lam = Real.of(c.q) ** (2 * eps / n)
    E1 = degree_cap_set(c.E, L, lam).subset
    c.record(E_prime=len(E1))
    c.claim("removed", c.N - len(E1), "<=", 2 * len(L) * c.N / lam)

    def all_connected():
        from itertools import product

        total = 0
        for es in connected_graphs(n):
            for lens in product(L, repeat=len(es)):
                G = DistanceGraph(n, tuple((a, b, lam_) for (a, b), lam_ in zip(es, lens)))
                total += count_fast(G, E1, c.budget)
        return total

    n_all = c.compute(all_connected)
    cst = 2 ** (comb(n, 2) - n + 2) * len(L) ** (n - 1) * n ** (n - 2)
    unit = Fraction(c.N**n, c.q ** (n - 1))
    c.claim("connected_total", n_all, "<=", cst * unit)
    G = params.get("graph")
    G = chain(n, L[0]) if G is None else _graph(params, c.t)
    if G.n_vertices != n + 1 or not G.lengths <= set(L):
        raise BadParams("the degenerate-count graph needs n+1 vertices and lengths in L")
    res = c.compute(lambda: count_all(G, E1, c.budget))
    if res is not None:
        c.claim("degenerate", res.degenerate, "<=", n * (n + 1) * unit)


def _shave_one(c: _Ctx, params):
    lam = _get(params, "lambda")
    C = params.get("C")
    c.size_above(4 * Real.of(c.q) ** Fraction(c.d + 1, 2))
    r = shave_one_edge(c.E, c.t, lam, C)
    c.record(**{k: v for k, v in r.params.items() if k not in ("construction", "t")})
    c.record(size=len(r.subset))
    c.require(r.hypothesis_met)
    c.claims.extend(Claim(cl.name, cl.relation, cl.lhs, cl.rhs, c.hyp, cl.holds) for cl in r.claims)


def _shave_general(c: _Ctx, params):
    G = _graph(params, c.t)
    if G.base_vertex is None:
        G = G.with_base(0)
    lam1, lam2 = params.get("lambda1"), params.get("lambda2")
    if lam1 is None or lam2 is None:
        raise MissingParam("lambda1/lambda2")
    N_thr = params.get("N_threshold")
    declared = bool(params.get("sandwich", False))
    if len(G.edges) == 1 and G.n_vertices == 2 and N_thr is None:
        # the pair-count error bound gives the sandwich for |F| >= 4 q^((d+1)/2)
        N_thr = 4 * Real.of(c.q) ** Fraction(c.d + 1, 2)
        declared = True
        c.notes.append("single-edge sandwich from the pair-count bound")
    if N_thr is None:
        c.require(False, "no sandwich threshold declared")
    else:
        c.require(declared, "sandwich hypothesis not declared")
        c.size_above(2 * Real.of(N_thr))
    r = c.compute(lambda: general_shave(c.E, G, lam1, lam2, N_thr, declared, c.budget))
    c.record(graph=_graph_label(params), lambda1=lam1, lambda2=lam2)
    if r is None:
        return
    c.record(window=len(r.stages["window"]), size=len(r.subset))
    c.claims.extend(Claim(cl.name, cl.relation, cl.lhs, cl.rhs, c.hyp, cl.holds) for cl in r.claims)


def _km(params) -> tuple[int, int]:
    return int(_get(params, "k")), int(_get(params, "m"))


def _hchain_total(c: _Ctx, params):
    k, m = _km(params)
    c.record(k=k, m=m)
    ln2 = Real.ln2()
    half = Real.of(c.q) ** Fraction(c.d + 1, 2)
    c.size_above(4 * k / ln2 * half)
    lhs = holder_chain_count(k, m, c.t, c.E) if c.N else 0
    rhs = Fraction(c.N ** (k * m - k + 2), c.q ** (k * m)) * (1 - 4 * m * half / (ln2 * c.N)) ** k if c.N else Real.of(0)
    c.claim("lower_bound", lhs, ">=", rhs)
    c.attach_witness(holder_chain(k, m, c.t), c.E, False, rhs)


def _hchain_nondeg_count(c: _Ctx, k: int, m: int, where: PointSet):
    G = holder_chain(k, m, c.t)
    if m == 2:
        return G, holder_chain_nondeg_m2(k, c.t, where)
    res = c.compute(lambda: count_all(G, where, c.budget))
    return G, (None if res is None else res.nondegenerate)


def _log_branch_rhs(c: _Ctx, k: int, m: int, N: int) -> Real:
    lnq = Real.ln(c.q)
    return Fraction(N ** (k * (m - 1) + 2), c.q ** (k * m)) * (
        1 - 8 * m * k / (Real.ln2() * lnq) - 2 * k * m * lnq ** Fraction(-2, k * m)
    )


def _hchain_nondeg_a(c: _Ctx, params):
    k, m = _km(params)
    branch = params.get("branch", "explicit")
    c.sub_id = branch
    c.record(k=k, m=m, branch=branch)
    Q = Real.of(c.q)
    km = k * m
    if branch == "explicit":
        a = Real.of(km**km) * Q ** Fraction(c.d + 1, 2)
        b = 2 * km**2 * Q**k
        c.size_above(a if a >= b else b)
        rhs = (
            Fraction(c.N ** (k * (m - 1) + 2), 2 * c.q**km) * (1 - Fraction(1, km) - Fraction(2 * km**2 * c.q**k, c.N))
            if c.N
            else Real.of(0)
        )
    elif branch == "log":
        a, b = Q ** Fraction(c.d + 1, 2), Q**k
        c.size_above(Real.ln(c.q) * (a if a >= b else b))
        c.notes.append("asymptotic branch: log read as natural log")
        rhs = _log_branch_rhs(c, k, m, c.N)
    else:
        raise BadParams("branch must be 'explicit' or 'log'")
    G, lhs = _hchain_nondeg_count(c, k, m, c.E)
    c.claim("lower_bound", lhs, ">=", rhs)
    c.attach_witness(G, c.E, True, rhs)


def _nondeg_b_rhs(c: _Ctx, k: int, m: int, delta: Fraction) -> Real:
    Q = Real.of(c.q)
    lnq = Real.ln(c.q)
    N = c.N
    main = Fraction(N ** (k * (m - 1) + 2), c.q ** (k * m))
    return main * (
        1
        - 2 * k * m / lnq
        - 4 * k * m / (Real.ln2() * Q ** (Fraction(1, m - 1) + delta))
        - 2 * lnq ** ((m - 2) * (k - 2) - 1) * Q ** (c.d * (k - 2) + 1) / Fraction(N ** (k - 1))
    )


def _hchain_nondeg_b(c: _Ctx, params):
    k, m = _km(params)
    if m < 2:
        raise BadParams("m must be >= 2")
    delta = _frac(params.get("delta", Fraction(1, 4 * m * m)))
    c.record(k=k, m=m, delta=delta, lambda_rule="ln q")
    c.require(0 < delta < Fraction(1, 2 * m * m), "needs 0 < delta < 1/(2 m^2)")
    c.size_above(Real.of(c.q) ** _cycle_exponent(c.d, m, delta))
    if c.N == 0:
        return
    E1 = degree_cap_set(c.E, [c.t], Real.ln(c.q)).subset
    c.record(E_prime=len(E1))
    G, lhs = _hchain_nondeg_count(c, k, m, E1)
    rhs = _nondeg_b_rhs(c, k, m, delta)
    c.claim("lower_bound", lhs, ">=", rhs)
    c.attach_witness(G, E1, True, rhs)


def _hchain_summary(c: _Ctx, params):
    k, m = _km(params)
    delta = _frac(params.get("delta", Fraction(1, 4 * m * m)))
    rs = regime_summary(k, c.d, m, c.q, delta)
    c.record(k=k, m=m, delta=delta, regime=rs.regime, exceptional=rs.exceptional, chosen=rs.chosen)
    A, B = rs.log_branch, rs.cycle_branch
    c.size_above(A if A <= B else B, strict=False)
    if c.N == 0:
        return
    G, lhs = _hchain_nondeg_count(c, k, m, c.E)
    if Real.of(c.N) >= A:
        c.record(branch="log")
        rhs = _log_branch_rhs(c, k, m, c.N)
    else:
        c.record(branch="cycle")
        rhs = _nondeg_b_rhs(c, k, m, delta)
    c.notes.append("asymptotic statement audited at the given q")
    c.claim("lower_bound", lhs, ">=", rhs)
    c.attach_witness(G, c.E, True, rhs)


def _simplex_t1(c: _Ctx, params):
    m = int(_get(params, "m"))
    if m < 2:
        raise BadParams("m must be >= 2")
    c.record(m=m)
    Q = Real.of(c.q)
    c.size_above(12 * (m + 1) ** 2 * Q ** (m + Fraction(c.d - 1, 2)), strict=False)
    lhs = c.compute(lambda: simplex_pair_table(m, c.t, c.E, c.budget).total())
    if lhs is None:
        return
    main = Fraction(c.N ** (m + 1), c.q ** comb(m + 1, 2))
    err = abs(lhs - main)
    c.claim("error", err, "<=", 6 * (m + 1) ** 2 * c.N**m * Q ** (Fraction(c.d - 1, 2) - Fraction(m * (m - 1), 2)))
    lower = main * (1 - 6 * (m + 1) ** 2 * Q ** (Fraction(c.d - 1, 2) + m) / c.N) if c.N else Real.of(0)
    c.claim("lower_bound", lhs, ">=", lower)
    c.attach_witness(chain_of_simplices(1, m, c.t), c.E, True, lower)


def _schain(c: _Ctx, params, nondeg: bool):
    k, m = _km(params)
    ell = _ell_of(k)
    c.record(k=k, m=m, ell=ell)
    c.require(2 * m < c.d + 1, "needs m < (d+1)/2")
    base = 3 * (m + 1) ** 2 * Real.of(c.q) ** (Fraction(c.d - 1, 2) + m)
    two = Real.of(2)
    if nondeg:
        c.size_above(two ** (k + 2 ** (ell + 1) * (m + 2) + 3) * base)
        const = two ** (2 * k - Fraction(2) ** (ell + 1) * (m + 2) - 3)
    else:
        c.size_above(two ** (ell + 4) * base)
        const = two ** (2 * k - Fraction(2) ** (ell + 1) * (m + 2) - 2)
    G = chain_of_simplices(k, m, c.t)
    if nondeg:
        res = c.compute(lambda: count_all(G, c.E, c.budget))
        lhs = None if res is None else res.nondegenerate
    else:
        lhs = c.compute(lambda: simplex_chain_count(k, m, c.t, c.E, c.budget)[0])
    rhs = Fraction(c.N ** (m * k + 1), c.q ** (k * comb(m + 1, 2))) * const
    c.claim("lower_bound", lhs, ">=", rhs)
    c.attach_witness(G, c.E, nondeg, rhs)


def _skeleton(params) -> list[tuple[int, int]]:
    sk = params.get("skeleton")
    if sk is None:
        return star_skeleton(int(params.get("ell", 2)))
    if isinstance(sk, str):
        return [tuple(int(v) for v in e.split("-")) for e in sk.split(",") if e]
    return [tuple(e) for e in sk]


def _stree(c: _Ctx, params, kind: str):
    m = int(_get(params, "m"))
    sk = _skeleton(params)
    ell = len(sk)
    c.record(m=m, ell=ell, skeleton=",".join(f"{a}-{b}" for a, b in sk))
    Q = Real.of(c.q)
    base = 12 * (m + 1) ** 2 * Q ** (m + Fraction(c.d - 1, 2))
    two = Real.of(2)
    units = Fraction(c.N ** (m * ell + 1), c.q ** (comb(m + 1, 2) * ell))
    if kind == "prop":
        lam = Real.of(_frac(params.get("lambda", 4)))
        c.record(**{"lambda": str(lam.at())})
        if not lam > 2:
            raise BadParams("lambda must exceed 2")
        mu = (1 - 2 / lam) ** (m + 2) / (2 * lam)
        c.size_above(base * mu ** (1 - ell), strict=False)
        rhs = Fraction(1, 2) * lam ** (1 - ell) * (1 - 2 / lam) ** (m * ell + 1) * mu ** ((ell - 1) * (Fraction(ell * m, 2) + 1)) * units
    elif kind == "total":
        e = eta(m, ell)
        c.record(eta=e)
        c.size_above(base * two ** ((ell - 1) * (m + 5)), strict=False)
        rhs = two ** (-e) * units
        c.notes.append("constant audited as printed")
    else:
        e = eta(m, ell)
        c.record(eta=e)
        c.size_above(two ** (e + 3 * ell) * base, strict=False)
        rhs = two ** (-e + 3 * ell + 1) * units
        c.notes.append("constant audited as printed")
    G = tree_of_simplices(sk, m, c.t)
    if kind == "nondeg":
        res = c.compute(lambda: count_all(G, c.E, c.budget))
        lhs = None if res is None else res.nondegenerate
    else:
        lhs = c.compute(lambda: simplex_tree_count(sk, m, c.t, c.E, c.budget)[0])
    c.claim("lower_bound", lhs, ">=", rhs)
    c.attach_witness(G, c.E, kind == "nondeg", rhs)


_AUDITORS: dict[TheoremId, Callable[[_Ctx, Mapping], None]] = {
    TheoremId.IR_PAIR_COUNT: _ir,
    TheoremId.TREE_EMBED: _tree,
    TheoremId.IP_THRESHOLD: _ip,
    TheoremId.HOLDER_LEMMA: _holder,
    TheoremId.HOLDER_COR: _holder_cor,
    TheoremId.DEGEN_GENERAL: _degen,
    TheoremId.SHAVE_ONE_EDGE: _shave_one,
    TheoremId.SHAVE_GENERAL: _shave_general,
    TheoremId.HCHAIN_TOTAL: _hchain_total,
    TheoremId.HCHAIN_NONDEG_A: _hchain_nondeg_a,
    TheoremId.HCHAIN_NONDEG_B: _hchain_nondeg_b,
    TheoremId.HCHAIN_SUMMARY: _hchain_summary,
    TheoremId.SIMPLEX_T1: _simplex_t1,
    TheoremId.SCHAIN_TOTAL: lambda c, p: _schain(c, p, False),
    TheoremId.SCHAIN_NONDEG: lambda c, p: _schain(c, p, True),
    TheoremId.STREE_PROP: lambda c, p: _stree(c, p, "prop"),
    TheoremId.STREE_TOTAL: lambda c, p: _stree(c, p, "total"),
    TheoremId.STREE_NONDEG: lambda c, p: _stree(c, p, "nondeg"),
}


def _graph_label(params: Mapping, key: str = "graph") -> str:
    G = params.get(key)
    if isinstance(G, str):
        return G
    if G is None:
        return ""
    return ";".join(f"{u}-{v}:{lam}" for u, v, lam in G.edges)


def audit(tid: TheoremId | str, E: PointSet, params: Mapping | None = None) -> TheoremReport:
    """Audit one statement on one set; see the module docstring."""
    tid = TheoremId(tid)
    params = dict(params or {})
    ctx = _Ctx(tid, E, params)
    _AUDITORS[tid](ctx, params)
    return ctx.finish()


def tree_theorem_bound(T: DistanceGraph, E: PointSet, epsilon, t=1) -> TheoremReport:
    if not is_tree(T):
        raise NotATree("tree_theorem_bound needs a tree")
    return audit(TheoremId.TREE_EMBED, E, {"graph": T, "epsilon": epsilon, "t": t})


# --- regression corpus ------------------------------------------------------------------


def default_cases(q: int, d: int) -> list[tuple[TheoremId, dict]]:
    """One or more parameter sets per theorem, sized for desk-scale sets."""
    I = TheoremId
    return [
        (I.IR_PAIR_COUNT, {}),
        (I.TREE_EMBED, {"graph": "star:2", "epsilon": Fraction(1, 10)}),
        (I.TREE_EMBED, {"graph": "chain:3", "epsilon": Fraction(1, 100)}),
        (I.IP_THRESHOLD, {"graph": "chain:2"}),
        (I.HOLDER_LEMMA, {"base": "chain:2", "S": [1], "k": 2}),
        (I.HOLDER_LEMMA, {"base": "star:2", "S": [1], "k": 3}),
        (I.HOLDER_COR, {"base": "chain:2", "S": [1], "k": 2}),
        (I.DEGEN_GENERAL, {"n": 3, "epsilon": Fraction(1, 10)}),
        (I.SHAVE_ONE_EDGE, {"lambda": 8}),
        (I.SHAVE_GENERAL, {"graph": "edge", "lambda1": Fraction(1, 16), "lambda2": 8}),
        (I.SHAVE_GENERAL, {"graph": "simplex:2", "lambda1": Fraction(1, 16), "lambda2": 8}),
        (I.HCHAIN_TOTAL, {"k": 3, "m": 2}),
        (I.HCHAIN_NONDEG_A, {"k": 3, "m": 2, "branch": "explicit"}),
        (I.HCHAIN_NONDEG_A, {"k": 3, "m": 2, "branch": "log"}),
        (I.HCHAIN_NONDEG_B, {"k": 3, "m": 2}),
        (I.HCHAIN_SUMMARY, {"k": 3, "m": 2}),
        (I.SIMPLEX_T1, {"m": 2}),
        (I.SCHAIN_TOTAL, {"k": 2, "m": 2}),
        (I.SCHAIN_NONDEG, {"k": 2, "m": 2}),
        (I.STREE_PROP, {"m": 2, "ell": 2}),
        (I.STREE_TOTAL, {"m": 2, "ell": 2}),
        (I.STREE_NONDEG, {"m": 2, "ell": 2}),
    ]


def audit_corpus(
    sets: Iterable[tuple[str, PointSet]], cases: Callable[[int, int], list] = default_cases
) -> list[TheoremReport]:
    """Audit every case on every named set, in order."""
    out = []
    for name, E in sets:
        for tid, params in cases(E.space.q, E.space.d):
            rep = audit(tid, E, params)
            rep.instance["name"] = name
            out.append(rep)
    return out


def write_reports(reports: Iterable[TheoremReport], fp) -> None:
    for r in reports:
        fp.write(r.to_line() + "\n")


__all__ = [
    "RegimeSummary",
    "TheoremId",
    "TheoremReport",
    "Verdict",
    "audit",
    "audit_corpus",
    "default_cases",
    "eta",
    "ip_threshold",
    "regime_summary",
    "tree_theorem_bound",
    "write_reports",
]
