import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from shrinkselect.config import ConfigError, ExperimentConfig, apply_overrides, dump_config, from_dict, parse_config
from shrinkselect.noise import NoiseParams


def test_empty_config_defaults():
    cfg = parse_config()
    assert cfg == ExperimentConfig()
    assert cfg.noise == NoiseParams(a=-1.0, rho1=0.5, rho2=0.5, intensity=1.0)
    assert cfg.bounds.sigma_upper == 0.5
    assert (cfg.replications, cfg.n_values, cfg.steps_per_unit, cfg.eval_points) == (200, (100, 200), 200, 2001)
    assert cfg.grid_preset == "paper-sim"


@pytest.mark.parametrize(
    "override, key",
    [
        ("noise.a=0.1", "noise"),
        ("rho=0.6", "rho"),
        ("rho=0", "rho"),
        ("replications=0", "replications"),
        ("replications=2.5", "replications"),
        ("grid_preset=foo", "grid_preset"),
        ("noise.x=1", "noise.x"),
        ("bogus=1", "bogus"),
        ("noise.rho1=0.4", "noise"),
        ("n_values=[]", "n_values"),
        ("known_sigma=1", "known_sigma"),
        ("noise.a=abc", "noise.a"),
    ],
)
def test_rejections_name_the_key(override, key):
    with pytest.raises(ConfigError) as exc:
        parse_config(overrides=[override])
    assert str(exc.value).startswith(key)


def test_override_syntax():
    with pytest.raises(ConfigError):
        parse_config(overrides=["no-equals"])
    cfg = parse_config(overrides=["noise.a=-0.5", "n_values=[100]", "rho=0.2", "grid_preset=theory"])
    assert cfg.noise.a == -0.5 and cfg.n_values == (100,) and cfg.rho == 0.2 and cfg.grid_preset == "theory"


def test_file_and_overrides(tmp_path):
    f = tmp_path / "c.json"
    f.write_text(json.dumps({"replications": 7, "noise": {"rho2": 0.3}}))
    cfg = parse_config(f, ["root_seed=9"])
    assert (cfg.replications, cfg.noise.rho2, cfg.noise.rho1, cfg.root_seed) == (7, 0.3, 0.5, 9)
    f.write_text("{not json")
    with pytest.raises(ConfigError, match="malformed"):
        parse_config(f)
    f.write_text("[1, 2]")
    with pytest.raises(ConfigError):
        parse_config(f)


def test_overrides_do_not_mutate():
    base = {"noise": {"a": -1.0}}
    apply_overrides(base, ["noise.a=-0.2"])
    assert base == {"noise": {"a": -1.0}}


def test_full_scale():
    cfg = ExperimentConfig().full_scale()
    assert (cfg.replications, cfg.n_values, cfg.steps_per_unit, cfg.eval_points) == (
        1000,
        (100, 200, 500, 1000),
        1000,
        100001,
    )


configs = st.builds(
    lambda n, reps, p, m, a, r1, r2, preset, seed, rho, known, workers: from_dict(
        {
            "n_values": n,
            "replications": reps,
            "eval_points": p,
            "steps_per_unit": m,
            "noise": {"a": a, "rho1": r1, "rho2": r2},
            "grid_preset": preset,
            "root_seed": seed,
            "rho": rho,
            "known_sigma": known,
            "workers": workers,
        }
    ),
    st.lists(st.integers(2, 2000), min_size=1, max_size=4),
    st.integers(1, 5000),
    st.integers(2, 10**5),
    st.integers(100, 2000),
    st.floats(-1.0, 0.0),
    st.floats(0.5, 0.55),
    st.floats(0.0, 0.45),
    st.sampled_from(["theory", "paper-sim"]),
    st.integers(0, 2**63),
    st.one_of(st.none(), st.floats(0.001, 0.499)),
    st.booleans(),
    st.integers(1, 8),
)


@settings(max_examples=60, deadline=None)
@given(configs)
def test_round_trip(cfg):
    assert from_dict(json.loads(dump_config(cfg))) == cfg


@settings(max_examples=20, deadline=None)
@given(configs)
def test_round_trip_through_file(tmp_path_factory, cfg):
    f = tmp_path_factory.mktemp("cfg") / "c.json"
    f.write_text(dump_config(cfg))
    assert parse_config(f) == cfg
