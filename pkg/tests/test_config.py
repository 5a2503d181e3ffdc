from pathlib import Path

import pytest

from conley.config import ConfigError, load_config, parse_config
from conley.discretization import SystemSpec

BASE = """\
system.name = logistic
system.r = 3.2
grid.cells = 64
ladder.values = 4h, 2h, 0.01
"""


def test_parses_defaults():
    cfg = parse_config(BASE)
    assert isinstance(cfg.system, SystemSpec) and cfg.system.params == {"r": 3.2}
    assert cfg.grid.domain == "unit_interval" and cfg.grid.cells_per_axis == 64
    assert cfg.ladder.values == pytest.approx((4 / 64, 2 / 64, 0.01))
    assert not cfg.ladder.include_identity_floor
    assert cfg.outputs == {"json", "dot", "pgm", "csv"}
    assert cfg.out_dir == Path("conley_out") and cfg.seed is None
    assert cfg.closure_dilation == "none"


def test_comments_and_optional_keys():
    cfg = parse_config(
        "# header\n"
        + BASE
        + "ladder.identity_floor = yes   # trailing\n"
        "omega.closure_dilation = one-cell\n"
        "outputs = json\nout_dir = somewhere\nseed = 7\n"
    )
    assert cfg.ladder.include_identity_floor and cfg.closure_dilation == "one-cell"
    assert cfg.outputs == {"json"} and cfg.out_dir == Path("somewhere") and cfg.seed == 7


def test_shipped_config_loads():
    cfg = load_config(Path(__file__).parent.parent / "configs" / "north_south.cfg")
    assert cfg.system_name == "north_south" and cfg.grid.cells_per_axis == 256
    assert cfg.ladder_text == ("4h", "2h")


def test_synthetic_systems_need_a_domain():
    cfg = parse_config("system.name = empty\ngrid.domain = unit_circle\ngrid.cells = 8\nladder.values = 1h\n")
    assert cfg.system == "empty" and cfg.system_dict()["params"] == {}
    with pytest.raises(ConfigError, match="grid.domain"):
        parse_config("system.name = full\ngrid.cells = 8\nladder.values = 1h\n")


def test_missing_system_names_the_key():
    with pytest.raises(ConfigError, match="'system'"):
        parse_config("grid.cells = 8\nladder.values = 1h\n")


@pytest.mark.parametrize(
    "extra, line, message",
    [
        ("grid.colour = red\n", 5, "unknown key"),
        ("system.r = 3.0\n", 5, "duplicate key"),
        ("this line is wrong\n", 5, "cannot parse"),
        ("seed = soon\n", 5, "seed must be an integer"),
        ("outputs = json, gif\n", 5, "unknown output"),
        ("ladder.identity_floor = maybe\n", 5, "boolean"),
        ("omega.closure_dilation = lots\n", 5, "closure_dilation"),
        ("system.alpha = 0.1\n", 5, "no parameter 'alpha'"),
    ],
)
def test_errors_are_line_anchored(extra, line, message):
    with pytest.raises(ConfigError, match=message) as err:
        parse_config(BASE + extra, source="run.cfg")
    assert err.value.line == line
    assert str(err.value).startswith(f"run.cfg:{line}:")


def test_value_errors_point_at_their_line():
    with pytest.raises(ConfigError) as err:
        parse_config(BASE.replace("3.2", "5.0"))
    assert err.value.line == 1
    with pytest.raises(ConfigError) as err:
        parse_config(BASE.replace("4h, 2h, 0.01", "2h, 4h"))
    assert err.value.line == 4
    with pytest.raises(ConfigError) as err:
        parse_config(BASE.replace("64", "1"))
    assert err.value.line == 3
    with pytest.raises(ConfigError, match="lives on"):
        parse_config(BASE + "grid.domain = unit_circle\n")


def test_unreadable_file(tmp_path):
    with pytest.raises(ConfigError, match="cannot read"):
        load_config(tmp_path / "nope.cfg")
