import math

import pytest
from hypothesis import given, strategies as st

import ottospin as o
from ottospin.config import ConfigError


FULL_EXAMPLE = """\
# engine sweep with a custom hot bath
[drive]
nu_initial_khz = 1.8
nu_final_khz = 4.0
n_steps = 2000

[thermal]
hot_option = custom
kt_cold_pev = 5.5
kt_hot_pev = 33.0

[cycle]
tau_us = 250
tau_list_us = 150, 250, 350
t_thermalization_us = 6000
t_cooling_us = 100

[monte_carlo]
samples = 200
noise_width = 0.02
seed = 9

[output]
format = json
path = out.json
lorentzian_fwhm_pev = 0.9
curve_min_pev = -20
curve_max_pev = 20
curve_points = 801

[process]
noise_mix = 0.05
"""


def test_empty_text_yields_defaults():
    cfg = o.parse_config("")
    assert cfg == o.RunConfig()
    assert cfg.nu_initial_khz == 2.0
    assert cfg.nu_final_khz == 3.6
    assert cfg.hot_option == "B"
    assert cfg.tau_list_us == o.DEFAULT_TAU_GRID_US
    assert cfg.mc_samples == 1000
    assert cfg.seed == 0


def test_full_example_parses_every_section():
    cfg = o.parse_config(FULL_EXAMPLE)
    assert cfg.nu_initial_khz == 1.8
    assert cfg.n_steps == 2000
    assert cfg.hot_option == "custom"
    assert cfg.kt_hot_pev == 33.0
    assert cfg.tau_list_us == (150.0, 250.0, 350.0)
    assert cfg.t_cooling_us == 100.0
    assert cfg.mc_samples == 200
    assert cfg.output_format == "json"
    assert cfg.output_path == "out.json"
    assert cfg.curve_points == 801
    assert cfg.process_noise_mix == 0.05


def test_hot_presets_resolve_to_table_values():
    assert o.parse_config("").resolved_kt_hot_pev() == 40.5
    assert o.parse_config("[thermal]\nhot_option = A\n").resolved_kt_hot_pev() == 21.5
    assert o.parse_config(FULL_EXAMPLE).resolved_kt_hot_pev() == 33.0
    assert o.HOT_PRESETS_PEV == {"A": 21.5, "B": 40.5}


def test_round_trip_is_the_identity():
    cfg = o.parse_config(FULL_EXAMPLE)
    assert o.parse_config(o.serialize_config(cfg)) == cfg
    # and for the defaults too
    assert o.parse_config(o.serialize_config(o.RunConfig())) == o.RunConfig()


def test_unknown_key_reports_its_line_number():
    text = "[drive]\nnu_initial_khz = 2.0\nnu_middle_khz = 3.0\n"
    with pytest.raises(ConfigError, match="line 3") as exc:
        o.parse_config(text)
    assert "nu_middle_khz" in str(exc.value)


def test_unknown_section_reports_its_line_number():
    with pytest.raises(ConfigError, match="line 1"):
        o.parse_config("[engine]\nfoo = 1\n")


def test_out_of_range_value_names_the_key_and_line():
    text = "[drive]\nnu_initial_khz = -1\n"
    with pytest.raises(ConfigError, match="line 2") as exc:
        o.parse_config(text)
    assert "nu_initial_khz" in str(exc.value)


def test_malformed_value_reports_its_line():
    with pytest.raises(ConfigError, match="line 2"):
        o.parse_config("[drive]\nnu_initial_khz = fast\n")


def test_duplicate_key_is_rejected():
    text = "[drive]\nnu_initial_khz = 2.0\nnu_initial_khz = 2.5\n"
    with pytest.raises(ConfigError, match="line 3"):
        o.parse_config(text)


def test_key_before_any_section_is_rejected():
    with pytest.raises(ConfigError, match="line 1"):
        o.parse_config("nu_initial_khz = 2.0\n")


def test_line_without_equals_is_rejected():
    with pytest.raises(ConfigError, match="line 2"):
        o.parse_config("[drive]\nnu_initial_khz\n")


def test_custom_hot_option_requires_a_temperature():
    with pytest.raises(ConfigError, match="kt_hot_pev"):
        o.parse_config("[thermal]\nhot_option = custom\n")


def test_preset_hot_option_forbids_a_custom_temperature():
    with pytest.raises(ConfigError):
        o.parse_config("[thermal]\nhot_option = A\nkt_hot_pev = 30.0\n")


def test_curve_window_must_be_ordered():
    text = "[output]\ncurve_min_pev = 10\ncurve_max_pev = -10\n"
    with pytest.raises(ConfigError):
        o.parse_config(text)


def test_bad_hot_option_is_rejected():
    with pytest.raises(ConfigError, match="line 2"):
        o.parse_config("[thermal]\nhot_option = C\n")


def test_to_cycle_config_maps_fields():
    cfg = o.parse_config(FULL_EXAMPLE)
    cyc = o.to_cycle_config(cfg)
    assert cyc.protocol.nu_initial_khz == 1.8
    assert cyc.protocol.nu_final_khz == 4.0
    assert cyc.protocol.tau_us == 250.0
    assert cyc.thermal.kt_cold_pev == 5.5
    assert cyc.thermal.kt_hot_pev == 33.0
    assert cyc.n_steps == 2000
    assert cyc.t_thermalization_us == 6000.0
    assert cyc.t_cooling_us == 100.0
    assert o.to_cycle_config(cfg, tau_us=350.0).protocol.tau_us == 350.0


def test_apply_overrides_filters_none_and_revalidates():
    cfg = o.RunConfig()
    same = o.apply_overrides(cfg, seed=None, output_format=None)
    assert same == cfg
    changed = o.apply_overrides(cfg, seed=5, output_format="json")
    assert changed.seed == 5 and changed.output_format == "json"
    with pytest.raises(ConfigError):
        o.apply_overrides(cfg, mc_samples=0)


def test_apply_overrides_preset_hot_option_displaces_custom_temperature():
    cfg = o.parse_config(FULL_EXAMPLE)  # custom, 33 peV
    back = o.apply_overrides(cfg, hot_option="A")
    assert back.hot_option == "A"
    assert back.kt_hot_pev is None
    assert back.resolved_kt_hot_pev() == 21.5
    # still round-trips cleanly
    assert o.parse_config(o.serialize_config(back)) == back


def test_comment_and_blank_lines_are_ignored():
    text = "\n# leading comment\n\n[drive]\n# inner comment\nnu_initial_khz = 2.2\n\n"
    assert o.parse_config(text).nu_initial_khz == 2.2


@given(
    st.floats(min_value=0.1, max_value=9.9, allow_nan=False),
    st.integers(min_value=1, max_value=10**6),
    st.integers(min_value=0, max_value=2**31 - 1),
    st.sampled_from(["csv", "json"]),
)
def test_round_trip_identity_over_random_configs(nu1, n_steps, seed, fmt):
    cfg = o.apply_overrides(
        o.RunConfig(),
        nu_initial_khz=nu1,
        nu_final_khz=nu1 + 1.0,
        n_steps=n_steps,
        seed=seed,
        output_format=fmt,
    )
    assert o.parse_config(o.serialize_config(cfg)) == cfg


def test_serialized_defaults_mention_every_section():
    text = o.serialize_config(o.RunConfig())
    for section in ("[drive]", "[thermal]", "[cycle]", "[monte_carlo]", "[output]", "[process]"):
        assert section in text
