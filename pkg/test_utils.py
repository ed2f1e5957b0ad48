# test_utils.py
import pytest

from progress_tracker import ProgressTracker
from sampling_params import (
    SamplingPlan,
    get_additive2_params,
    get_additive_k_params,
    get_cluster_params,
)
from utils import ceil_log2, cleanup_file_safe, config_echo_lines, format_bits, parse_fixed, parse_int_list


def test_ceil_log2():
    assert [ceil_log2(v) for v in (1, 2, 3, 4, 5, 1024, 1025)] == [0, 1, 2, 2, 3, 10, 11]
    with pytest.raises(ValueError):
        ceil_log2(0)


def test_parse_int_list():
    assert parse_int_list("4,16,64") == [4, 16, 64]
    assert parse_int_list("1-3,8,2") == [1, 2, 3, 8]
    with pytest.raises(ValueError):
        parse_int_list("5-2")
    with pytest.raises(ValueError):
        parse_int_list(" , ")


def test_parse_fixed():
    assert parse_fixed(["n=2048", "k = 3"]) == {"n": 2048.0, "k": 3.0}
    with pytest.raises(ValueError):
        parse_fixed(["n2048"])


def test_config_echo_sorted():
    lines = config_echo_lines("spanner-sim run", {"seed": 1, "k": 3})
    assert lines == ["# spanner-sim run", "# k=3", "# seed=1"]


def test_format_bits():
    assert format_bits(100) == "100 бит"
    assert "КиБ" in format_bits(8 * 4096)


def test_cleanup_file_safe(tmp_path):
    path = tmp_path / "partial.csv"
    path.write_text("x", encoding="utf-8")
    assert cleanup_file_safe(path)
    assert not path.exists()
    assert not cleanup_file_safe(path)


def test_sampling_plan():
    plan = SamplingPlan(c=1.0)
    assert plan.failure_target(100) == pytest.approx(0.01)
    assert plan.sample_count(1.0, 100) == 10  # ⌈ln(100/0.01)⌉ = ⌈9.21⌉
    assert plan.rate(0, 100) == 1.0
    assert plan.rate(1e9, 100) < 1e-6
    with pytest.raises(ValueError):
        SamplingPlan(c=0)
    with pytest.raises(ValueError):
        SamplingPlan(delta=1.5)


def test_protocol_params():
    plan = SamplingPlan()
    additive = get_additive2_params(400, 4, plan)
    assert additive.threshold == pytest.approx(40.0)

    additive_k = get_additive_k_params(400, 4, 8, plan)
    assert additive_k.truncated_size == 50
    assert additive_k.threshold == pytest.approx(400 ** 0.5 * 0.5 ** 0.5)

    odd = get_cluster_params(1000, 8, 5, plan)
    assert (odd.ell, odd.odd, odd.iterations) == (2, True, 1)
    even = get_cluster_params(1000, 8, 4, plan)
    assert (even.ell, even.odd, even.iterations) == (2, False, 1)
    assert 0 < even.p0 <= 1


def test_progress_tracker_throttles():
    tracker = ProgressTracker(10, label="test", min_interval=3600, enabled=False)
    assert tracker.update(force=True)
    assert not tracker.update(3)
    assert tracker.percent == 40
    tracker.complete()
    assert tracker.percent == 100


if __name__ == '__main__':
    test_parse_int_list()
    test_sampling_plan()
    test_progress_tracker_throttles()
    print("✅ utils OK")
