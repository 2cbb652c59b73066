import pytest

from maslov_witt.props import FAMILIES, parse_field, replay, run_family

EXPECTED_TO_FAIL = {"phi_swap_literal"}


@pytest.mark.parametrize("name", sorted(FAMILIES))
def test_family_smoke(name):
    out = run_family(name, 12, seed=3)
    assert out["cases"] == 12
    if name in EXPECTED_TO_FAIL:
        assert out["failures"]
    else:
        assert out["failures"] == [], out["failures"][:1]


def test_replay_reproduces_failure():
    f = run_family("phi_swap_literal", 12, seed=3)["failures"][0]
    ok, detail = replay("phi_swap_literal", f["seed"], parse_field(f["field"]), f["g"])
    assert not ok and detail == f["detail"]
