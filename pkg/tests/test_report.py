from decimal import Decimal

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from citecology.corpus import JournalRef
from citecology.exceptions import IncompleteAssignmentError, ParseError
from citecology.factors import FactorAssignment
from citecology.report import emit_report, read_pajek_network, read_pajek_partition, write_pajek
from citecology.similarity import SimilarityGraph


def assign(mapping):
    return FactorAssignment(mapping, {j: 1.0 for j in mapping})


TRIANGLE = SimilarityGraph(("J1", "J2", "J3"), ((0, 1, 0.9), (0, 2, 0.9), (1, 2, 0.9)), 0.2)


def test_triangle_files():
    net, clu = write_pajek(TRIANGLE, assign({"J1": 1, "J2": 1, "J3": 2}))
    assert net == '*Vertices 3\n1 "J1"\n2 "J2"\n3 "J3"\n*Edges\n1 2 0.9\n1 3 0.9\n2 3 0.9\n'
    assert clu == "*Vertices 3\n1\n1\n2\n"


def test_empty_edge_set():
    g = SimilarityGraph(("A", "B"), (), 0.2)
    net, _ = write_pajek(g, assign({"A": 1, "B": 1}))
    assert net.splitlines() == ["*Vertices 2", '1 "A"', '2 "B"', "*Edges"]


def test_impact_cutoff_blanks_label():
    labels = {
        "J1": JournalRef("J1", "Journal One", Decimal("2.5")),
        "J2": JournalRef("J2", "Journal Two", Decimal("1.2")),
        "J3": JournalRef("J3", "Journal Three", Decimal("1.4")),
    }
    net, _ = write_pajek(TRIANGLE, assign({"J1": 1, "J2": 1, "J3": 2}), labels, Decimal("1.4"))
    lines = net.splitlines()
    assert lines[1] == '1 "Journal One"'
    assert lines[2] == '2 ""'
    assert lines[3] == '3 ""'  # strictly greater than the cutoff is required


def test_focal_partition_zero():
    _, clu = write_pajek(TRIANGLE, assign({"J2": 1, "J3": 2}), focal="J1")
    assert clu.splitlines()[1:] == ["0", "1", "2"]


def test_missing_assignment():
    with pytest.raises(IncompleteAssignmentError):
        write_pajek(TRIANGLE, assign({"J1": 1}))


def test_six_significant_digits():
    g = SimilarityGraph(("A", "B", "C"), ((0, 1, 0.123456789), (1, 2, 1 / 3)), 0.0)
    net, _ = write_pajek(g, assign({"A": 1, "B": 1, "C": 1}))
    assert net.splitlines()[-2:] == ["1 2 0.123457", "2 3 0.333333"]


def test_reader_rejects_garbage():
    with pytest.raises(ParseError):
        read_pajek_network("*Vertices 2\n1 \"A\"\n*Edges\n")
    with pytest.raises(ParseError):
        read_pajek_partition("*Vertices 2\n1\n")


@st.composite
def graphs(draw):
    n = draw(st.integers(1, 12))
    names = tuple(draw(st.lists(st.from_regex(r"[A-Za-z][A-Za-z0-9 ._-]{0,10}", fullmatch=True), min_size=n, max_size=n, unique=True)))
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    weights = draw(st.lists(st.floats(0.2, 1.0, exclude_min=True), min_size=len(chosen), max_size=len(chosen)))
    edges = tuple((i, j, float(f"{w:.6g}")) for (i, j), w in zip(chosen, weights))
    parts = draw(st.lists(st.integers(1, 6), min_size=n, max_size=n))
    return SimilarityGraph(names, edges, 0.2), dict(zip(names, parts))


@given(graphs())
@settings(max_examples=150, deadline=None)
def test_pajek_round_trip(gp):
    g, parts = gp
    net, clu = write_pajek(g, assign(parts))
    parsed = read_pajek_network(net)
    assert parsed.labels == g.nodes
    assert parsed.edges == g.edges
    assert read_pajek_partition(clu) == tuple(parts[j] for j in g.nodes)
    rebuilt = SimilarityGraph(parsed.labels, parsed.edges, g.threshold)
    assert rebuilt == g


def test_emit_report_is_canonical():
    doc = {"b": 1, "a": [0.1, Decimal("1.4")], "c": {"z": None, "y": 2.5}}
    assert emit_report(doc) == emit_report(dict(reversed(list(doc.items()))))
    assert '"1.4"' in emit_report(doc)
