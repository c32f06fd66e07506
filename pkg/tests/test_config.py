import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from fourbody_efimov.config import (
    ConfigError,
    RunConfig,
    defaults_applied,
    dump_config,
    parse_config,
    with_overrides,
)
from fourbody_efimov.errors import ValidationError


def test_minimal_config_defaults(caplog):
    with caplog.at_level("INFO"):
        cfg = parse_config("m_A = 100\nm_B = 100\n")
    assert (cfg.R0, cfg.a_AB, cfg.beta) == (10.0, 100.0, 1e-3)
    assert (cfg.n_max, cfg.alpha_max, cfg.m_max) == (6, 2, 2)
    assert math.isinf(cfg.a_AA)
    echoed = caplog.text
    for key in ("R0", "a_AB", "beta", "n_max", "alpha_max", "m_max"):
        assert f"default applied: {key}" in echoed


def test_comments_quotes_and_auto():
    cfg = parse_config("# header\nm_A = 2  # inline\nm_B = '3'\nR4_max = auto\na_AA = -500\n")
    assert cfg.system.mu34 == pytest.approx(2.0)
    assert cfg.R4_max is None and cfg.a_AA == -500.0


@pytest.mark.parametrize(
    "text,match",
    [
        ("m_A = 1\nm_B = 1\nm_A = 2\n", "line 3: duplicate"),
        ("m_A = 1\nm_B = 1\ncolour = red\n", "line 3: unknown key"),
        ("m_A = 1\nm_B = abc\n", "line 2: malformed"),
        ("m_A = 1\n", "missing required"),
        ("m_A = 1\nm_B = 1\nnonsense\n", "line 3"),
        ("m_A = 1\nm_B = 1\nn_max = 2.5\n", "line 3: malformed"),
        ("m_A = 1\nm_B = 1\nR0 = nan\n", "finite"),
        ("m_A = 1\nm_B = 1\nR4_min = 50\nR4_max = 20\n", "smaller"),
        ("m_A = -1\nm_B = 1\n", "m_A"),
    ],
)
def test_parse_errors(text, match):
    with pytest.raises(ConfigError, match=match):
        parse_config(text)


def test_config_error_is_validation_error():
    assert issubclass(ConfigError, ValidationError)


def test_defaults_applied_lists_missing_keys():
    missing = defaults_applied("m_A = 1\nm_B = 1\nR0 = 5\n")
    assert "R0" not in missing and "beta" in missing and "m_A" not in missing


@given(
    st.floats(1e-2, 1e3),
    st.floats(1e-2, 1e3),
    st.floats(0.5, 50),
    st.one_of(st.just(math.inf), st.floats(-1e6, -1.0)),
    st.integers(1, 8),
)
def test_dump_roundtrip(m_A, m_B, R0, a_AA, n_max):
    cfg = RunConfig(m_A=m_A, m_B=m_B, R0=R0, a_AA=a_AA, n_max=n_max)
    assert parse_config(dump_config(cfg)) == cfg


def test_overrides_do_not_mutate():
    cfg = parse_config("m_A = 1\nm_B = 1\n")
    new = with_overrides(cfg, strict=True, beta=None)
    assert new.strict and not cfg.strict and new.beta == cfg.beta
