import math

import numpy as np
import pytest

from alhimcf.config import ConfigError, load_config, parse_config

GOOD = """
# standard run
[ambient]
n = 3
epsilon = 0

[initial]
mode = grid
s0 = 1.0
M = 32
mode 1 0 0.1 0.0
mode 0 1 0.05 0.0   # second mode

[solver]
t_end = 12
record_dt = 0.1
rescale = no

[output]
trace = out.csv
"""


def test_parse_good():
    cfg = parse_config(GOOD)
    assert cfg.ambient.n == 3 and cfg.ambient.theta == pytest.approx(4 * math.pi**2)
    assert cfg.M == 32 and cfg.modes == [((1, 0), 0.1, 0.0), ((0, 1), 0.05, 0.0)]
    assert cfg.solver.t_end == 12.0 and cfg.solver.rescale is False
    assert cfg.output == {"trace": "out.csv"}
    st = cfg.initial_state()
    assert st.u.shape == (32, 32)
    assert st.u[0, 0] == pytest.approx(1.15)


def test_resolved_round_trips():
    cfg = parse_config(GOOD)
    text = cfg.resolved()
    assert "M=32" in text and "mode 1 0 0.1 0.0" in text and "rescale=False" in text


def test_symmetric_genus():
    cfg = parse_config("[ambient]\nn=3\nepsilon=-1\ngenus=3\n[initial]\nmode=symmetric\ns0=2\n"
                       "[solver]\nt_end=1\nrecord_dt=0.5\n")
    assert cfg.ambient.theta == pytest.approx(8 * math.pi)
    assert cfg.initial_state().symmetric


@pytest.mark.parametrize(
    "text,line",
    [
        ("[ambient]\nn=3\nepsilon=0\nfoo=1\n", 4),
        ("[ambient]\nn=3\nepsilon=0\n[bogus]\n", 4),
        ("n=3\n", 1),
        ("[ambient]\nn=three\n", 2),
        ("[ambient]\nn=3\nepsilon=0\n[initial]\nmode=grid\ns0=1\nM=16\nmode 1 0.1 0.0\n", 8),
        ("[ambient]\nn=3\nepsilon=0\n[initial]\nM=15\ns0=1\n[solver]\nt_end=1\nrecord_dt=1\n", 5),
        ("[ambient]\nn=3\nepsilon=0\n[solver]\nrescale=maybe\n", 5),
        ("[ambient]\nn=3\nepsilon=0\n[initial]\njust words\n", 5),
    ],
)
def test_errors_carry_line(text, line):
    with pytest.raises(ConfigError) as info:
        parse_config(text)
    assert info.value.line == line
    assert f"line {line}" in str(info.value)


@pytest.mark.parametrize(
    "text",
    [
        "[ambient]\nn=3\n",
        "[ambient]\nn=3\nepsilon=-1\ngenus=2\n[initial]\nmode=grid\ns0=1\nM=16\n[solver]\nt_end=1\nrecord_dt=1\n",
        "[ambient]\nn=3\nepsilon=-1\ngenus=2\n[initial]\nmode=symmetric\ns0=0.5\n[solver]\nt_end=1\nrecord_dt=1\n",
        "[ambient]\nn=3\nepsilon=0\n[initial]\nmode=symmetric\ns0=0.5\n[solver]\nt_end=1\nrecord_dt=2\n",
        "[ambient]\nn=3\nepsilon=0\n[initial]\nmode=grid\ns0=0.5\n[solver]\nt_end=1\nrecord_dt=1\n",
    ],
)
def test_semantic_errors(text):
    with pytest.raises(ConfigError):
        parse_config(text)


def test_load_config(tmp_path):
    path = tmp_path / "c.cfg"
    path.write_text(GOOD)
    assert np.array_equal(load_config(path).initial_state().u, parse_config(GOOD).initial_state().u)
