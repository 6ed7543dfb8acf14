"""Command-line front end: ``ffembed {gen,count,profile,shave,audit,sweep}``.

Every command is deterministic given its flags.  Failures exit with status 2
and print one JSON error record on stderr.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from . import audit as audit_mod
from .count import base_profile, count_all
from .errors import BadParams, FFEmbedError, MissingParam
from .gf import field_new
from .graphdef import DistanceGraph, parse_graph_spec
from .refine import degree_cap_set, general_shave, shave_one_edge
from .rng import check_density, random_product, random_subset
from .space import PointSet, Space, isotropic_line, pointset_from_text, pointset_to_text, sphere

CSV_HEADER = ["q", "d", "t", "density", "size", "graph", "total", "nondeg", "degen", "bound", "verdict"]
GENERATORS = ("full", "random", "sphere", "isotropic", "product", "file")
TASKS = ("gen", "count", "profile", "shave", "audit", "sweep")


@dataclass
class ExperimentConfig:
    task: str
    q: int | None = None
    d: int = 2
    t: str = "1"
    generator: str = "full"
    density: Fraction = Fraction(1)
    seed: int | None = None
    set_path: str | None = None
    graph: str = "edge"
    lam: str | None = None
    lambda1: str | None = None
    lambda2: str | None = None
    epsilon: str | None = None
    budget: int | None = None
    workers: int = 1
    out: str | None = None
    theorem: str | None = None
    extra: dict[str, str] = field(default_factory=dict)
    trials: int = 1
    corpus: bool = False
    mode: str = "one-edge"
    densities: str = "0.1:1.0:0.1"
    nondeg: bool = False

    def __post_init__(self):
        if self.task not in TASKS:
            raise BadParams(f"unknown task {self.task!r}")
        if self.generator not in GENERATORS:
            raise BadParams(f"unknown generator {self.generator!r}")
        if self.generator == "file" and not self.set_path:
            raise MissingParam("--set")
        if self.generator != "file" and self.q is None:
            raise MissingParam("--q")
        if self.generator in ("random", "product") and self.seed is None:
            raise MissingParam("--seed (mandatory for randomized generators)")
        self.density = check_density(self.density)


# --- point sets ------------------------------------------------------------------


def build_set(cfg: ExperimentConfig, density=None, seed=None) -> PointSet:
    density = cfg.density if density is None else density
    seed = cfg.seed if seed is None else seed
    if cfg.generator == "file":
        return pointset_from_text(Path(cfg.set_path).read_text())
    space = Space.of(cfg.q, cfg.d)
    if cfg.generator == "full":
        return PointSet.full(space)
    if cfg.generator == "random":
        return random_subset(space, density, seed)
    if cfg.generator == "product":
        return random_product(space, density, seed)
    if cfg.generator == "sphere":
        return sphere(space.field, cfg.d, _t_code(cfg, space))
    return isotropic_line(field_new(cfg.q), cfg.d)


def _t_code(cfg: ExperimentConfig, space: Space) -> int:
    return space.field.parse_code(cfg.t)


def _describe(cfg: ExperimentConfig, density=None, seed=None) -> list[str]:
    density = cfg.density if density is None else density
    seed = cfg.seed if seed is None else seed
    parts = [f"generator: {cfg.generator}"]
    if cfg.generator in ("random", "product"):
        parts += [f"density: {density}", f"seed: {seed}"]
    if cfg.generator == "sphere":
        parts.append(f"t: {cfg.t}")
    if cfg.generator == "file":
        parts.append(f"source: {cfg.set_path}")
    return parts


def _graph(cfg: ExperimentConfig, E: PointSet) -> DistanceGraph:
    return parse_graph_spec(cfg.graph, _t_code(cfg, E.space))


def _fraction(text: str | None, name: str) -> Fraction:
    if text is None:
        raise MissingParam(name)
    return Fraction(text)


# --- tasks ------------------------------------------------------------------------


def _csv_rows(rows: list[list[object]]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    w.writerows(rows)
    return buf.getvalue()


def _count_row(cfg: ExperimentConfig, E: PointSet, density) -> list[object]:
    G = _graph(cfg, E)
    res = count_all(G, E, cfg.budget, cfg.workers)
    n, e = G.n_vertices, len(G.edges)
    bound = Fraction(len(E) ** n, E.space.q**e)
    dens = "" if cfg.generator not in ("random", "product") else str(density)
    return [E.space.q, E.space.d, cfg.t, dens, len(E), cfg.graph, res.total, res.nondegenerate, res.degenerate, str(bound), ""]


def task_gen(cfg: ExperimentConfig) -> str:
    return pointset_to_text(build_set(cfg), _describe(cfg))


def task_count(cfg: ExperimentConfig) -> str:
    return _csv_rows([_count_row(cfg, build_set(cfg), cfg.density)])


def _density_grid(spec: str) -> list[Fraction]:
    try:
        start, stop, step = (Fraction(v) for v in spec.split(":"))
    except ValueError as exc:
        raise BadParams(f"densities must be start:stop:step, got {spec!r}") from exc
    if step <= 0:
        raise BadParams("density step must be positive")
    out = []
    x = start
    while x <= stop:
        out.append(check_density(x))
        x += step
    return out


def task_sweep(cfg: ExperimentConfig) -> str:
    rows = []
    for dens in _density_grid(cfg.densities):
        E = build_set(cfg, density=dens)
        rows.append(_count_row(cfg, E, dens))
    return _csv_rows(rows)


def task_profile(cfg: ExperimentConfig) -> str:
    E = build_set(cfg)
    G = _graph(cfg, E)
    if G.base_vertex is None:
        G = G.with_base(0)
    prof = base_profile(G, E, cfg.budget, nondegenerate=cfg.nondeg)
    fmt = E.field.format_code
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["x", "count"])
    for row, v in zip(E.coords, prof.values):
        w.writerow([" ".join(fmt(int(c)) for c in row), v])
    return buf.getvalue()


def task_shave(cfg: ExperimentConfig) -> str:
    E = build_set(cfg)
    t = _t_code(cfg, E.space)
    if cfg.mode == "one-edge":
        res = shave_one_edge(E, t, _fraction(cfg.lam, "--lambda"), cfg.extra.get("C"))
    elif cfg.mode == "cap":
        res = degree_cap_set(E, [t], _fraction(cfg.lam, "--lambda"))
    elif cfg.mode == "general":
        G = _graph(cfg, E)
        if G.base_vertex is None:
            G = G.with_base(0)
        lam2 = None if cfg.lambda2 in (None, "inf") else Fraction(cfg.lambda2)
        thr = cfg.extra.get("N_threshold")
        res = general_shave(
            E,
            G,
            _fraction(cfg.lambda1, "--lambda1"),
            lam2,
            None if thr is None else Fraction(thr),
            cfg.extra.get("sandwich", "false").lower() == "true",
            cfg.budget,
        )
    else:
        raise BadParams(f"unknown shave mode {cfg.mode!r}")
    return res.to_text()


def _audit_params(cfg: ExperimentConfig) -> dict:
    params: dict[str, object] = {}
    if cfg.graph:
        params["graph"] = cfg.graph
    if cfg.epsilon is not None:
        params["epsilon"] = Fraction(cfg.epsilon)
    if cfg.lam is not None:
        params["lambda"] = Fraction(cfg.lam)
    if cfg.lambda1 is not None:
        params["lambda1"] = Fraction(cfg.lambda1)
    if cfg.lambda2 is not None:
        params["lambda2"] = Fraction(cfg.lambda2)
    if cfg.budget is not None:
        params["budget"] = cfg.budget
    for k, v in cfg.extra.items():
        if k in ("S", "L"):
            params[k] = [int(x) for x in v.split(",") if x]
        elif k in ("k", "m", "n", "ell"):
            params[k] = int(v)
        elif k in ("sandwich",):
            params[k] = v.lower() == "true"
        elif k in ("delta", "C", "N_threshold"):
            params[k] = Fraction(v)
        else:
            params[k] = v
    return params


def task_audit(cfg: ExperimentConfig) -> str:
    buf = io.StringIO()
    if cfg.corpus:
        sets = [("full", PointSet.full(Space.of(cfg.q, cfg.d)))]
        seed = 0 if cfg.seed is None else cfg.seed
        sets.append(("random-half", random_subset(Space.of(cfg.q, cfg.d), Fraction(1, 2), seed)))
        if cfg.q % 4 == 1 and cfg.d >= 2:
            sets.append(("isotropic", isotropic_line(field_new(cfg.q), cfg.d)))
        audit_mod.write_reports(audit_mod.audit_corpus(sets), buf)
        return buf.getvalue()
    if cfg.theorem is None:
        raise MissingParam("--theorem")
    params = _audit_params(cfg)
    for i in range(cfg.trials):
        seed = None if cfg.seed is None else cfg.seed + i
        E = build_set(cfg, seed=seed)
        rep = audit_mod.audit(cfg.theorem, E, {**params, "t": _t_code(cfg, E.space)})
        rep.instance["generator"] = _describe(cfg, seed=seed)
        buf.write(rep.to_line() + "\n")
    return buf.getvalue()


TASK_FUNCS = {
    "gen": task_gen,
    "count": task_count,
    "profile": task_profile,
    "shave": task_shave,
    "audit": task_audit,
    "sweep": task_sweep,
}


def run(cfg: ExperimentConfig, stdout=None) -> int:
    """Execute one configuration; output goes to ``cfg.out`` or stdout."""
    text = TASK_FUNCS[cfg.task](cfg)
    if cfg.out:
        Path(cfg.out).write_text(text)
    else:
        (stdout or sys.stdout).write(text)
    return 0


# --- argument parsing ------------------------------------------------------------------


def _kv(text: str) -> tuple[str, str]:
    key, sep, value = text.partition("=")
    if not sep:
        raise argparse.ArgumentTypeError(f"expected key=value, got {text!r}")
    return key, value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--q", type=int)
    common.add_argument("--d", type=int, default=2)
    common.add_argument("--t", default="1", help="edge length (canonical representative)")
    common.add_argument("--gen", dest="generator", default="full", choices=GENERATORS)
    common.add_argument("--set", dest="set_path", help="point-set file (implies --gen file)")
    common.add_argument("--seed", type=int)
    common.add_argument("--density", default="1")
    common.add_argument("--graph", default="edge", help="family spec, e.g. chain:2, schain:3,2")
    common.add_argument("--lambda", dest="lam")
    common.add_argument("--lambda1")
    common.add_argument("--lambda2")
    common.add_argument("--epsilon")
    common.add_argument("--budget", type=int)
    common.add_argument("--workers", type=int, default=1)
    common.add_argument("--out")
    common.add_argument("--param", action="append", type=_kv, default=[], metavar="KEY=VALUE")

    parser = argparse.ArgumentParser(prog="ffembed", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="task", required=True)
    sub.add_parser("gen", parents=[common], help="write a point set")
    sub.add_parser("count", parents=[common], help="count embeddings (CSV)")
    prof = sub.add_parser("profile", parents=[common], help="per-point counts at the base vertex")
    prof.add_argument("--nondeg", action="store_true")
    sh = sub.add_parser("shave", parents=[common], help="build a refined subset")
    sh.add_argument("--mode", choices=("one-edge", "cap", "general"), default="one-edge")
    au = sub.add_parser("audit", parents=[common], help="audit a theorem (JSON lines)")
    au.add_argument("--theorem", choices=[t.value for t in audit_mod.TheoremId])
    au.add_argument("--trials", type=int, default=1)
    au.add_argument("--corpus", action="store_true")
    sw = sub.add_parser("sweep", parents=[common], help="count over a density grid (CSV)")
    sw.add_argument("--densities", default="0.1:1.0:0.1", help="start:stop:step")
    return parser


def config_from_args(ns: argparse.Namespace) -> ExperimentConfig:
    generator = "file" if ns.set_path else ns.generator
    if ns.task == "sweep" and generator == "full":
        generator = "random"
    return ExperimentConfig(
        task=ns.task,
        q=ns.q,
        d=ns.d,
        t=ns.t,
        generator=generator,
        density=Fraction(ns.density),
        seed=ns.seed,
        set_path=ns.set_path,
        graph=ns.graph,
        lam=ns.lam,
        lambda1=ns.lambda1,
        lambda2=ns.lambda2,
        epsilon=ns.epsilon,
        budget=ns.budget,
        workers=ns.workers,
        out=ns.out,
        theorem=getattr(ns, "theorem", None),
        extra=dict(ns.param),
        trials=getattr(ns, "trials", 1),
        corpus=getattr(ns, "corpus", False),
        mode=getattr(ns, "mode", "one-edge"),
        densities=getattr(ns, "densities", "0.1:1.0:0.1"),
        nondeg=getattr(ns, "nondeg", False),
    )


def _error_record(exc: BaseException) -> str:
    return json.dumps({"error": type(exc).__name__, "message": str(exc)}, separators=(",", ":"))


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        return run(config_from_args(ns))
    except (FFEmbedError, ValueError, KeyError, OSError, ArithmeticError) as exc:
        sys.stderr.write(_error_record(exc) + "\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
