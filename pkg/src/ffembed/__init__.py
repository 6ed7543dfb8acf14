"""Exact counting and refinement of distance-graph embeddings in F_q^d."""

from .audit import TheoremId, TheoremReport, Verdict, audit_corpus, regime_summary, tree_theorem_bound
from .count import EmbeddingCount, base_profile, count_all, count_total, first_embedding, holder_lower_bound
from .errors import *  # noqa: F401,F403
from .gf import FieldParams, Scalar, field_new
from .graphdef import DistanceGraph, chain, chain_of_simplices, holder_chain, parse_graph_spec, simplex, single_edge, star
from .refine import ShaveResult, degree_cap_set, general_shave, shave_one_edge
from .rng import random_product, random_subset
from .space import Point, PointSet, Space, dist, norm, sphere

__version__ = "0.1.0"
