from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from conjpoints.config import ConfigError, ExperimentConfig


def test_default_is_valid():
    cfg = ExperimentConfig().validate()
    assert cfg.chart().m == 1


def test_ini_roundtrip():
    cfg = ExperimentConfig(components=("3/2*x^2 - x + 2",), domain=((Fraction(1, 10), Fraction(9, 10)),),
                           Q=(5, 10), c=(Fraction(1), Fraction(4)), seed=42)
    back = ExperimentConfig.from_ini(cfg.to_ini())
    assert back == cfg
    assert back.hash() == cfg.hash()


@given(st.integers(0, 10 ** 6), st.lists(st.integers(1, 500), min_size=1, max_size=4),
       st.fractions(min_value=Fraction(1, 8), max_value=4, max_denominator=16))
def test_roundtrip_property(seed, qs, gamma):
    cfg = ExperimentConfig(seed=seed, Q=tuple(qs), gamma=gamma)
    assert ExperimentConfig.from_ini(cfg.to_ini()) == cfg


def test_hash_tracks_content():
    a = ExperimentConfig()
    assert a.hash() == ExperimentConfig().hash()
    assert a.hash() != a.replace(seed=1).hash()


@pytest.mark.parametrize("text", [
    "[experiment]\nQ =\n",
    "[profile]\nn = 1\nm = 1\n",
    "[experiment]\ngamma = -1/2\n",
    "[manifold]\ndomain = 1, 0\n",
    "[manifold]\ncomponents = x +* 2\n",
    "[profile]\npsi = 1\n",
    "not an ini file",
])
def test_validation_errors(text):
    with pytest.raises(ConfigError):
        ExperimentConfig.from_ini(text)


def test_profile_with_eps_coefficients():
    cfg = ExperimentConfig(n=3, psi=("1, -1", "1, -1"), phi=("eps^4, 1", "1, 1"))
    prof = cfg.profile(Fraction(1, 2))
    assert prof.phi_values(100)[0] == Fraction(100, 16)
