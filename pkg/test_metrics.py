# test_metrics.py
import pytest

from graph_core import Graph, SpannerDomainError
from metrics import SpannerMetrics


def _cycle(n):
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def test_identical_graph():
    g = _cycle(5)
    metrics = SpannerMetrics.calculate(g, g)
    assert metrics['edge_ratio'] == 1.0
    assert metrics['max_additive_stretch'] == 0
    assert metrics['max_multiplicative_stretch'] == 1.0
    assert metrics['disconnected_pairs'] == 0
    assert metrics['girth'] == 5


def test_cycle_minus_edge():
    g = _cycle(6)
    h = Graph.from_edges(6, [(i, i + 1) for i in range(5)])
    metrics = SpannerMetrics.calculate(g, h)
    assert metrics['spanner_edges'] == 5
    assert metrics['max_additive_stretch'] == 4
    assert metrics['max_multiplicative_stretch'] == 5.0
    assert metrics['mean_multiplicative_stretch'] > 1.0


def test_disconnected_pairs():
    g = Graph.from_edges(3, [(0, 1), (1, 2)])
    h = Graph.from_edges(3, [(0, 1)])
    metrics = SpannerMetrics.calculate(g, h)
    # Пары (0,2) и (1,2)
    assert metrics['disconnected_pairs'] == 2


def test_requires_subgraph():
    with pytest.raises(SpannerDomainError):
        SpannerMetrics.calculate(Graph.from_edges(3, [(0, 1)]), Graph.from_edges(3, [(1, 2)]))


def test_report():
    g = _cycle(6)
    metrics = SpannerMetrics.calculate(g, g)
    grades = SpannerMetrics.interpret(metrics)
    assert grades['connectivity'][0].startswith("🟢")
    assert grades['sparsity'][0].startswith("🔴")

    report = SpannerMetrics.format_report(metrics, "additive +2", ok=True)
    assert report.endswith("✅ Граница additive +2 выполнена")
    assert "❌" in SpannerMetrics.format_report(metrics, "additive +2", ok=False)
    assert "Граница" not in SpannerMetrics.format_report(metrics)


if __name__ == '__main__':
    test_cycle_minus_edge()
    test_report()
    print("✅ metrics OK")
