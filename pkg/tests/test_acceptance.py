"""Acceptance suite: one test per criterion, each tagged with ``criterion``.

A PASS/FAIL line per criterion is printed in the terminal summary (see
conftest.py).  Run alone with ``pytest tests/test_acceptance.py``.
"""

import os
import subprocess
import sys
import time
from collections import Counter

import pytest

from polar_rewrite.catops import (
    polarized_pushback,
    polarized_pushback_cardinality_violations,
    pushback,
    pushback_cardinality_violations,
    pushout,
    pushout_cardinality_violations,
)
from polar_rewrite.encodings import encode_hpo, encode_sqpo, sqpo_step_reference
from polar_rewrite.graph import Graph
from polar_rewrite.polarity import PolarizedMorphism, maximal_polarization
from polar_rewrite.rewriting import derive, find_matchings, rewrite_step, verify_step
from polar_rewrite.search import are_isomorphic
from polar_rewrite.universal import Bound, verify_universal

from _support import CORPUS_FILES, corpus, corpus_path, mutants, random_instance, random_sqpo, rng, small_diagrams

N_RANDOM = 1000
N_SQPO = 200
SWEEP_BOUND = Bound(3, 2)


def shape(g: Graph) -> Counter:
    return Counter((str(s), str(t)) for s, t in (g.ends[e] for e in g.edges))


def edges(*pairs):
    return {f"e{i}": p for i, p in enumerate(pairs)}


def iso(a, b) -> bool:
    return are_isomorphic(a, b) is not None


def corpus_rules(doc):
    yield from (doc.rule(n) for n in sorted(doc.rules))
    yield from (encode_sqpo(doc.sqpo_rule(n)) for n in sorted(doc.sqpo))
    yield from (encode_hpo(doc.hpo[n].rule) for n in sorted(doc.hpo))


def corpus_steps():
    """Every rule of every corpus file at every match into every graph of the file."""
    for name in CORPUS_FILES:
        doc = corpus(name)
        for p in corpus_rules(doc):
            for g in sorted(doc.graphs):
                for m in find_matchings(p.L.graph, doc.graph(g)):
                    yield rewrite_step(p, m)


def random_steps():
    for i in range(N_RANDOM):
        p, m = random_instance(rng(f"acc{i}"))
        yield rewrite_step(p, m)


def sqpo_cases():
    for i in range(N_SQPO):
        yield random_sqpo(rng(f"accsq{i}"))


def worked_steps():
    doc = corpus("intro.pgr")
    yield rewrite_step(doc.rule("intro"), doc.morphisms["m"].morphism)
    doc = corpus("memory.pgr")
    trace = derive([doc.rule("free"), doc.rule("halt")], doc.graph("G"))
    yield from trace
    doc = corpus("spam.pgr")
    (m,) = find_matchings(doc.rule("spam").L.graph, doc.graph("G"))
    yield rewrite_step(doc.rule("spam"), m)
    doc = corpus("global_update.pgr")
    yield rewrite_step(doc.rule("update"), doc.morphisms["m"].morphism)


def pushback_examples():
    doc = corpus("pushbacks.pgr")
    gra = pushback(doc.morphisms["gra_l"].morphism, doc.morphisms["gra_m"].morphism)
    K, L, G = (doc.polarized(n) for n in ("pol_K", "pol_L", "pol_G"))
    pol = polarized_pushback(
        PolarizedMorphism(K, L, doc.morphisms["pol_l"].morphism),
        PolarizedMorphism(L, G, doc.morphisms["pol_m"].morphism),
    )
    return gra, pol


# --- 1-4: worked examples ---------------------------------------------------


@pytest.mark.criterion(1, "intro rule: H has 4 nodes, 5 edges, iso to the drawn result")
def test_criterion_1_intro():
    t0 = time.perf_counter()
    doc = corpus("intro.pgr")
    G = doc.graph("G")
    assert len(G.nodes) == 3 and len(G.edges) == 5
    step = rewrite_step(doc.rule("intro"), doc.morphisms["m"].morphism)
    H = step.H
    elapsed = time.perf_counter() - t0
    assert len(H.nodes) == 4 and len(H.edges) == 5
    assert shape(H) == Counter({("j", "f1"): 1, ("f1", "x1"): 1, ("f1", "x2"): 1, ("x1", "j"): 1, ("x2", "j"): 1})
    assert iso(H, Graph(["j", "g", "a", "b"], edges(("j", "g"), ("g", "a"), ("g", "b"), ("a", "j"), ("b", "j"))))
    assert ("j", "x") not in shape(H) and ("f", "j") not in shape(H)
    assert verify_step(step.rule, step.match, H, step.h)
    assert elapsed < 1.0


@pytest.mark.criterion(2, "memory freeing: 4 free steps to j->free->nil, halt leaves j")
def test_criterion_2_memory():
    t0 = time.perf_counter()
    doc = corpus("memory.pgr")
    trace = derive([doc.rule("free")], doc.graph("G"))
    (last,) = derive([doc.rule("halt")], trace[-1].H)
    elapsed = time.perf_counter() - t0
    assert len(trace) == 4
    end = trace[-1].H
    assert iso(end, Graph(["j", "f", "n"], edges(("j", "f"), ("f", "n"))))
    assert sorted(end.label(n) or "" for n in end.nodes) == ["", "free", "nil"]
    assert [str(n) for n in last.H.nodes] == ["j"] and not last.H.edges
    for st in [*trace, last]:
        assert verify_step(st.rule, st.match, st.H, st.h)
    assert elapsed < 1.0


@pytest.mark.criterion(3, "spam: 5 nodes, 4 edges out of the single f")
def test_criterion_3_spam():
    doc = corpus("spam.pgr")
    (m,) = find_matchings(doc.rule("spam").L.graph, doc.graph("G"))
    step = rewrite_step(doc.rule("spam"), m)
    H = step.H
    assert len(H.nodes) == 5 and len(H.edges) == 4
    assert iso(H, Graph(["f", "a", "b", "c", "x"], edges(("f", "a"), ("f", "b"), ("f", "c"), ("f", "x")), {"f": "f"}))
    assert verify_step(step.rule, m, H, step.h)


@pytest.mark.criterion(4, "global update: 4 nodes, 5 edges, two parallel n->g")
def test_criterion_4_global():
    doc = corpus("global_update.pgr")
    step = rewrite_step(doc.rule("update"), doc.morphisms["m"].morphism)
    H = step.H
    assert len(H.nodes) == 4 and len(H.edges) == 5
    assert shape(H)[("n", "g")] == 2
    assert iso(H, Graph(["j", "k", "g", "n"], edges(("j", "g"), ("k", "g"), ("g", "k"), ("n", "g"), ("n", "g"))))
    assert verify_step(step.rule, step.match, H, step.h)


# --- 5: pushback examples ---------------------------------------------------


@pytest.mark.criterion(5, "pushback examples: polarized 4 nodes/4 edges, plain 4 nodes/7 edges")
def test_criterion_5_pushbacks():
    gra, pol = pushback_examples()
    D = pol.D
    signs = {str(n): D.sign(n) for n in D.graph.nodes}
    assert signs == {"n1": "+-", "p1": "+", "p2": "-", "q": "+-"}
    got = sorted((str(D.graph.ends[e][0]), str(D.graph.ends[e][1]), D.is_star(e)) for e in D.graph.edges)
    assert got == [("n1", "p2", True), ("p1", "n1", False), ("p1", "q", True), ("q", "p2", True)]
    assert len(gra.D.nodes) == 4 and len(gra.D.edges) == 7
    assert shape(gra.D) == Counter(
        {("n1", "p1"): 1, ("n1", "p2"): 1, ("p1", "n1"): 1, ("p1", "q"): 1, ("p2", "q"): 1, ("q", "p1"): 1, ("q", "p2"): 1}
    )


# --- 6: rewrite oracle ------------------------------------------------------


@pytest.mark.criterion(6, "rewrite oracle: corpus plus 1000 random instances, all mutants rejected")
def test_criterion_6_oracle():
    checked, failures = 0, []
    flipped, linking_mutants, kinds = 0, 0, Counter()
    for step in [*corpus_steps(), *random_steps()]:
        checked += 1
        if not verify_step(step.rule, step.match, step.H, step.h):
            failures.append((step.rule.name, step.match))
            continue
        for kind, H2, h2 in mutants(step.H, step.h):
            kinds[kind] += 1
            rejected = not verify_step(step.rule, step.match, H2, h2)
            if kind == "linking":
                linking_mutants += 1
                flipped += rejected
            else:
                # context and image changes are caught as well
                assert rejected, kind
    print(f"{checked} steps, {linking_mutants} linking-edge mutants, {flipped} rejected; all kinds {dict(kinds)}")
    assert checked >= N_RANDOM + 50
    assert not failures
    assert linking_mutants > 0 and flipped == linking_mutants


# --- 7: universal properties ------------------------------------------------


@pytest.mark.slow
@pytest.mark.criterion(7, "universal properties on every diagram with <=3 nodes, <=2 edges (< 5 min)")
def test_criterion_7_universal_sweep():
    t0 = time.perf_counter()
    n_po = n_pb = 0
    bad = []
    for r, d in small_diagrams("span"):
        rep = verify_universal(pushout(r, d), "pushout", SWEEP_BOUND)
        n_po += 1
        if not rep.ok:
            bad.append(("pushout", r, d, rep.violations[:2]))
    for l, m in small_diagrams("chain"):
        rep = verify_universal(pushback(l, m), "pushback", SWEEP_BOUND)
        n_pb += 1
        if not rep.ok:
            bad.append(("pushback", l, m, rep.violations[:2]))
    elapsed = time.perf_counter() - t0
    print(f"{n_po} pushouts, {n_pb} pushbacks, {len(bad)} violations, {elapsed:.1f} s")
    assert n_po > 0 and n_pb > 0
    assert not bad, bad[:3]
    assert elapsed < 300


# --- 8: sesqui-pushout encoding -----------------------------------------------


@pytest.mark.criterion(8, "encoded SqPO steps agree with the direct construction (200 spans)")
def test_criterion_8_sqpo():
    n = 0
    for q, m in sqpo_cases():
        assert iso(rewrite_step(encode_sqpo(q), m).H, sqpo_step_reference(q, m)), q.name
        n += 1
    assert n >= N_SQPO


# --- 9: cardinality laws ------------------------------------------------------


def all_squares():
    """Every square built by the constructions behind criteria 1-8."""
    steps = [*worked_steps(), *corpus_steps(), *random_steps()]
    for st in steps:
        yield "polarized", st.pushback
        yield "pushout", st.pushout
    gra, pol = pushback_examples()
    yield "pushback", gra
    yield "polarized", pol
    for r, d in small_diagrams("span"):
        yield "pushout", pushout(r, d)
    for l, m in small_diagrams("chain"):
        yield "pushback", pushback(l, m)
    for q, m in sqpo_cases():
        pb = pushback(q.l, m)
        yield "pushback", pb
        yield "pushout", pushout(q.r, pb.d)
        st = rewrite_step(encode_sqpo(q), m)
        yield "polarized", st.pushback
        yield "pushout", st.pushout
    # polarized pushbacks on their own, outside a full step
    for i in range(200):
        p, m = random_instance(rng(f"accpol{i}"))
        yield "polarized", polarized_pushback(p.l, PolarizedMorphism(p.L, maximal_polarization(p.L, m), m))


@pytest.mark.slow
@pytest.mark.criterion(9, "edge-count laws hold on every constructed square")
def test_criterion_9_cardinality():
    check = {
        "pushout": pushout_cardinality_violations,
        "pushback": pushback_cardinality_violations,
        "polarized": polarized_pushback_cardinality_violations,
    }
    counts, bad = Counter(), []
    for kind, sq in all_squares():
        counts[kind] += 1
        v = check[kind](sq)
        if v:
            bad.append((kind, v[:2]))
    print(dict(counts))
    assert all(counts[k] > 0 for k in check)
    assert not bad, bad[:3]


# --- 10: determinism -----------------------------------------------------------


def cli_commands():
    for name in CORPUS_FILES:
        doc = corpus(name)
        path = corpus_path(name)
        for rule in sorted(doc.rules):
            p = doc.rule(rule)
            for g in sorted(doc.graphs):
                if find_matchings(p.L.graph, doc.graph(g)):
                    yield ["apply", path, "--rule", rule, "--target", g, "--emit-intermediates"]
        if doc.rules and "G" in doc.graphs:
            yield ["derive", path, "--target", "G", "--rules", ",".join(sorted(doc.rules))]


@pytest.mark.criterion(10, "apply and derive output is byte-identical over 3 runs")
def test_criterion_10_determinism():
    cmds = list(cli_commands())
    assert any(c[0] == "apply" for c in cmds) and any(c[0] == "derive" for c in cmds)
    runs = []
    for seed in ("1", "2", "3"):
        env = dict(os.environ, PYTHONHASHSEED=seed)
        outs = []
        for c in cmds:
            res = subprocess.run([sys.executable, "-m", "polar_rewrite.cli", *c], capture_output=True, env=env)
            outs.append((res.returncode, res.stdout))
        runs.append(outs)
    assert all(code in (0, 1) for code, _ in runs[0])
    assert runs[0] == runs[1] == runs[2]
    assert sum(code == 0 for code, _ in runs[0]) >= len(cmds) // 2
