"""Certified connectivity-keeping spiders in k-connected graphs."""

from .connectivity import (
    CutStructure,
    End,
    all_min_cuts,
    check_lemma1,
    cut_structure,
    find_ends,
    fragments_of_cut,
    is_k_connected,
    min_vertex_cut,
    vertex_connectivity,
)
from .extraction import (
    BroomWitness,
    Certificate,
    ReductionPath,
    degree_threshold,
    extract_broom,
    extract_spider,
    reduce_to_target,
    verify_certificate,
)
from .generators import CorpusSpec, circulant, glue_cliques, random_corpus
from .graph import Graph, connected_components, delete_vertices, dump_graph, load_graph, min_degree
from .oracle import OracleReport, brute_kappa, brute_spider_removal, spanning_spider_check, validate_corpus
from .spider import (
    Broom,
    SpiderSpec,
    embed_spider_in_broom,
    enumerate_spider_specs,
    is_spider,
    spec_from_legs,
    verify_embedding,
)

__version__ = "0.1.0"
