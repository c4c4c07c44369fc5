from __future__ import annotations

import io
import json
from fractions import Fraction

import pytest

from mspq.cli import EXIT_CODES, build_config, main, parse_datum, ConfigError


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def test_parse_datum():
    g, gamma, d0, dinf = parse_datum(["g=1", "gamma=rho,rho", "d=1/5,2"])
    assert (g, len(gamma), d0, dinf) == (1, 2, Fraction(1, 5), 2)
    with pytest.raises(ConfigError):
        parse_datum(["g=1"])
    with pytest.raises(ConfigError):
        parse_datum(["g=1", "d=1"])


def test_config_dataclass():
    cfg = build_config(["eval", "g=1", "gamma=rho", "d=0,0", "--kb", "x.kb", "--delta", "1"])
    assert (cfg.command, cfg.kb_path, cfg.fmt, cfg.delta) == ("eval", "x.kb", "table", 1)


def test_enumerate_table():
    code, out, _ = run("enumerate", "g=1", "gamma=rho", "d=0,0")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "datum g=1 gamma=rho d=0,0 graphs=3"
    assert len(lines) == 4


def test_enumerate_graph_filter():
    _, out, _ = run("enumerate", "g=1", "gamma=rho", "d=0,0", "--format", "record")
    recs = [json.loads(line) for line in out.splitlines()]
    assert len(recs) == 3
    gid = recs[1]["id"]
    code, out, _ = run("enumerate", "g=1", "gamma=rho", "d=0,0", "--format", "record", "--graph", gid)
    assert code == 0 and json.loads(out)["id"] == gid
    code, _, err = run("enumerate", "g=1", "gamma=rho", "d=0,0", "--graph", "nope")
    assert code == EXIT_CODES["enumeration"] and err.startswith("error\tenumeration\t")


def test_eval_records():
    code, out, _ = run("eval", "g=1", "gamma=rho", "d=0,0", "--format", "record")
    assert code == 0
    vals = sorted(json.loads(line)["contribution"] for line in out.splitlines())
    assert vals == ["1/5", "25/3", "5/3 + -1 * DTW(g=1;tau0(z1))"]


def test_relation_renders_keys():
    code, out, _ = run("relation", "g=1", "gamma=", "d=1,0")
    assert code == 0
    assert out == "17563/12 + -120 * DTW(g=1;tau0(z1)) + -1 * GW(g=1,d=1) = 0\n"


def test_solve_and_kb(tmp_path):
    kb = str(tmp_path / "base.kb")
    code, out, _ = run("solve", "g=1", "gamma=", "d=1,0", "--for", "GW(g=1,d=1)", "--kb", kb)
    assert (code, out) == (0, "2875/12\n")
    code, out, _ = run("kb", "show", "--kb", kb)
    assert "GW(g=1,d=1) = 2875/12  [solved from g=1 gamma= d=1,0]" in out
    code, out, _ = run("relation", "g=1", "gamma=", "d=1,0", "--kb", kb)
    assert out == "0 = 0\n"


def test_kb_set(tmp_path):
    kb = str(tmp_path / "base.kb")
    assert run("kb", "set", "DTW(g=1;tau0(z1))", "51/5", "--kb", kb)[0] == 0
    code, out, _ = run("relation", "g=1", "gamma=rho", "d=0,0", "--kb", kb)
    assert out == "0 = 0\n"
    code, _, err = run("kb", "set", "FJRW(g=1,k=0)", "2", "--kb", kb)
    assert code == EXIT_CODES["kb"]
    assert run("kb", "set", "bogus", "2", "--kb", kb)[0] == EXIT_CODES["usage"]
    assert run("kb", "frobnicate", "--kb", kb)[0] == EXIT_CODES["usage"]


def test_exit_codes(tmp_path):
    bad = tmp_path / "bad.kb"
    bad.write_text("junk\n")
    assert run("kb", "show", "--kb", str(bad))[0] == EXIT_CODES["kb"]
    assert run("enumerate", "g=x", "d=0,0")[0] == EXIT_CODES["usage"]
    assert run("relation", "g=0", "gamma=", "d=2,1")[0] == EXIT_CODES["enumeration"]
    assert run("relation", "g=1", "gamma=", "d=1,0", "--delta", "1/2")[0] == EXIT_CODES["evaluation"]
    code, _, err = run("solve", "g=1", "gamma=", "d=1,0", "--for", "GW(g=2,d=1)")
    assert code == EXIT_CODES["solve"] and err.startswith("error\tsolve\t")
    assert run("solve", "g=1", "gamma=", "d=1,0", "--for", "???")[0] == EXIT_CODES["usage"]
    assert len(set(EXIT_CODES.values())) == len(EXIT_CODES)


def test_vdim_warning():
    code, _, err = run("relation", "g=1", "gamma=z1", "d=0,0")
    assert err.startswith("warning\tvdim\t")


def test_deterministic_output():
    args = ("eval", "g=1", "gamma=", "d=1,0")
    assert run(*args) == run(*args)
