import pydot

from polar_rewrite.dot import export_dot
from polar_rewrite.graph import Graph
from polar_rewrite.rewriting import rewrite_step

from _support import corpus


def parse(text):
    (g,) = pydot.graph_from_dot_data(text)
    return g


def test_empty_graph():
    text = export_dot(Graph(), "E")
    g = parse(text)
    assert g.get_type() == "digraph" and not g.get_nodes() and not g.get_edges()


def test_global_update_parallel_edges():
    doc = corpus("global_update.pgr")
    H = rewrite_step(doc.rule("update"), doc.morphisms["m"].morphism).H
    g = parse(export_dot(H, "H"))
    ng = [e for e in g.get_edges() if (e.get_source(), e.get_destination()) == ('"n"', '"g"')]
    assert len(ng) == 2


def test_polarized_host_decorations():
    doc = corpus("first_example.pgr")
    step = rewrite_step(doc.rule("first"), doc.morphisms["m"].morphism)
    text = export_dot(step.G_pol, "G_pol")
    g = parse(text)
    labels = {n.get_name().strip('"'): n.get("label").strip('"') for n in g.get_nodes()}
    assert labels["j"] == "j±"
    assert labels["f"] == "f±"
    assert labels["b"] == "b-"
    assert labels["c"] == "c"
    dashed = {e.get("label").strip('"') for e in g.get_edges() if e.get("style") == "dashed"}
    assert "jf" in dashed and "fa" not in dashed


def test_quoting_and_labels():
    g = Graph(['a"b'.replace('"', "_"), "e@x,y".split("@")[0]], {}, {"e": "cons"})
    text = export_dot(g)
    assert 'tooltip="cons"' in text
    parse(text)


def test_byte_stable():
    doc = corpus("map.pgr")
    G = doc.graph("G")
    assert export_dot(G, "G") == export_dot(G, "G")
