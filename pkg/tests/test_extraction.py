import copy
import random

import pytest

from spiderkeep.connectivity import vertex_connectivity
from spiderkeep.errors import BadParameters, CompleteGraph, HypothesisNotMet
from spiderkeep.extraction import (
    Certificate,
    degree_threshold,
    extract_broom,
    extract_spider,
    reduce_to_target,
    verify_certificate,
)
from spiderkeep.generators import CorpusSpec, circulant, glue_cliques, random_corpus
from spiderkeep.graph import complete_graph, cycle_graph, delete_vertices, min_degree
from spiderkeep.oracle import brute_kappa, brute_spider_removal
from spiderkeep.spider import ROOT, enumerate_spider_specs, spec_from_legs


def test_degree_threshold():
    assert degree_threshold(2, 3) == 5
    assert degree_threshold(1, 1) == 1
    assert degree_threshold(3, 1) == 4


def test_broom_in_glued_k6():
    g = glue_cliques(6, 6, 2)
    cert = extract_broom(g, 2, 3)
    witness = set(cert.witness_vertices())
    assert len(witness) == 3
    assert witness <= {0, 1, 2, 3} or witness <= {6, 7, 8, 9}
    assert brute_kappa(delete_vertices(g, witness)) == 2
    assert cert.kappa_after == 2 and cert.verified
    assert len(cert.attachments) == 2
    assert verify_certificate(g, 2, cert).ok


def test_single_vertex_in_glued_k5(oracle):
    g = glue_cliques(5, 5, 2)
    cert = extract_broom(g, 2, 1)
    (v,) = cert.witness_vertices()
    assert v in (0, 1, 2, 5, 6, 7)
    assert oracle.kappa(delete_vertices(g, [v])) >= 2


def test_complete_graph_rejected():
    with pytest.raises(CompleteGraph):
        extract_broom(complete_graph(7), 2, 2)
    with pytest.raises(CompleteGraph):
        extract_spider(complete_graph(7), 2, spec_from_legs([1]))


def test_bad_parameters():
    with pytest.raises(BadParameters):
        extract_broom(glue_cliques(6, 6, 2), 0, 2)


def test_spider_p3_in_glued_k6():
    g = glue_cliques(6, 6, 2)
    s = spec_from_legs([1, 1])
    cert = extract_spider(g, 2, s)
    smap = cert.spider_map
    assert set(smap) == {ROOT, (1, 1), (2, 1)}
    assert g.has_edge(smap[ROOT], smap[(1, 1)]) and g.has_edge(smap[ROOT], smap[(2, 1)])
    assert not set(smap.values()) & {4, 5}
    assert brute_kappa(delete_vertices(g, smap.values())) == 2
    assert brute_spider_removal(g, 2, s) is not None
    assert verify_certificate(g, 2, cert).ok


def test_minimum_degree_gate():
    g = glue_cliques(6, 6, 2)
    assert min_degree(g) == degree_threshold(2, 4) - 1
    with pytest.raises(HypothesisNotMet):
        extract_spider(g, 2, spec_from_legs([1, 1, 1]))
    with pytest.raises(HypothesisNotMet):
        extract_broom(g, 3, 1)


def test_m1_spider_matches_broom():
    g = glue_cliques(6, 7, 2)
    a = extract_spider(g, 2, spec_from_legs([]))
    b = extract_broom(g, 2, 1)
    assert a.witness_vertices() == b.witness_vertices()


def test_reduction_path_examples():
    g = glue_cliques(6, 6, 2)
    rp = reduce_to_target(g, 2)
    assert rp.path == () and rp.s == 0
    c5 = cycle_graph(5)
    rp = reduce_to_target(c5, 1)
    assert rp.s == 1 == vertex_connectivity(c5) - 1
    assert vertex_connectivity(delete_vertices(c5, rp.path)) == 1


def test_reduction_path_bound_on_circulants():
    for n, offsets, k in [(8, {1, 2}, 2), (9, {1, 2}, 3), (10, {1, 2, 3}, 4), (10, {1, 3}, 3)]:
        g = circulant(n, offsets)
        rp = reduce_to_target(g, k)
        kappa = vertex_connectivity(g)
        assert rp.s >= kappa - k
        assert vertex_connectivity(delete_vertices(g, rp.path)) == k
        assert all(g.has_edge(a, b) for a, b in zip(rp.path, rp.path[1:]))


def test_reduction_rejects_low_kappa():
    with pytest.raises(HypothesisNotMet):
        reduce_to_target(cycle_graph(6), 3)


@pytest.fixture(scope="module")
def glued_cert():
    g = glue_cliques(6, 6, 2)
    return g, extract_spider(g, 2, spec_from_legs([1, 1]))


def test_verify_rejects_other_graph(glued_cert):
    g, cert = glued_cert
    verdict = verify_certificate(glue_cliques(6, 7, 2), 2, cert)
    assert not verdict.ok and "digest" in verdict.reasons


def test_verify_rejects_cut_vertex_relabel(glued_cert):
    g, cert = glued_cert
    bad = copy.deepcopy(cert)
    leaf = (1, 1)
    bad.spider_map[leaf] = 4  # a shared clique vertex, adjacent to the whole side
    verdict = verify_certificate(g, 2, bad)
    assert "connectivity" in verdict.reasons
    bad.seal = bad.compute_seal()
    assert verify_certificate(g, 2, bad).reasons == ("connectivity", "kappa_after")


def test_verify_rejects_tampered_fields(glued_cert):
    g, cert = glued_cert
    for field, value, reason in [("verified", False, "verified"), ("kappa_after", 5, "kappa_after"), ("k", 3, "k")]:
        bad = copy.deepcopy(cert)
        setattr(bad, field, value)
        bad.seal = bad.compute_seal()
        assert reason in verify_certificate(g, 2, bad).reasons
    bad = copy.deepcopy(cert)
    bad.spider_map[(2, 1)] = 99
    assert "vertices" in verify_certificate(g, 2, bad).reasons


def test_certificate_json_round_trip(glued_cert):
    g, cert = glued_cert
    back = Certificate.from_json(cert.to_json())
    assert back == cert
    assert verify_certificate(g, 2, back).ok
    assert set(cert.to_dict()) == {
        "n", "digest", "k", "m", "legs", "method", "witness", "kappa_after", "verified", "transcript", "seal"
    }


def test_extraction_transcript_steps_are_adjacent():
    g = glue_cliques(7, 7, 2)
    cert = extract_broom(g, 2, 3)
    deleted = [e["vertex"] for e in cert.transcript if e["event"] == "delete"]
    start = [e for e in cert.transcript if e["event"] == "start"][0]["prefix"]
    walk = start + deleted
    assert all(g.has_edge(a, b) for a, b in zip(walk, walk[1:]))
    assert cert.path == tuple(walk[:-1])


@pytest.mark.parametrize("k", [1, 2, 3])
def test_every_spec_on_small_corpus(k):
    m = 3
    spec = CorpusSpec("random", (9, 12), k=k, delta_min=degree_threshold(k, m), count=6, seed=11 + k)
    for g in random_corpus(spec):
        for s in enumerate_spider_specs(m):
            cert = extract_spider(g, k, s)
            assert verify_certificate(g, k, cert).ok
            assert brute_kappa(delete_vertices(g, cert.witness_vertices()), override=True) >= k


def test_extraction_agrees_with_oracle_existence():
    rng = random.Random(5)
    spec = CorpusSpec("glue", (8, 12), k=2, delta_min=5, count=5, seed=rng.randrange(1000))
    for g in random_corpus(spec):
        for s in enumerate_spider_specs(3):
            assert brute_spider_removal(g, 2, s) is not None
            assert extract_spider(g, 2, s).verified
