from __future__ import annotations

import subprocess
import sys
from pathlib import Path

import pytest

from equiloc import _parallel
from equiloc.cli import main, run
from equiloc.errors import InvalidParameter, ParseError, UnsupportedType
from equiloc.geometry import build_orbit, build_toric, coadjoint, dualize, power, product, restrict_subtorus
from equiloc.jobfile import parse_job, parse_space, read_job, serialize_space
from equiloc.lie import build_root_system

from conftest import POLYTOPES

JOBS = Path(__file__).resolve().parent.parent / "jobs"
CORPUS = sorted(JOBS.glob("*.toml"))


def _run_text(text):
    return run(parse_job(text))


def test_quantize_example():
    code, out = _run_text(
        '[space]\ntype = "toric"\nvertices = [[0], [1]]\n'
        '[command]\nname = "quantize"\nk = 2\nbeta = [1]\nwindow = [[-4, 4]]\n'
    )
    assert code == 0
    assert out == "w1,multiplicity\n0,1\n1,1\n2,1\n"


def test_validate_example():
    code, out = _run_text(
        '[space]\ntype = "toric"\nvertices = [[0, 0], [1, 0], [0, 1]]\n[command]\nname = "validate"\n'
    )
    assert code == 0
    rows = out.splitlines()[1:]
    assert rows and all(r.split(",")[1] == "true" for r in rows)


def test_malformed_vector(tmp_path, capsys):
    job = tmp_path / "bad.toml"
    job.write_text('[space]\ntype = "toric"\nvertices = [1,\n')
    assert main([str(job)]) == 4
    err = capsys.readouterr().err
    assert err.startswith("ParseError")
    with pytest.raises(ParseError) as info:
        read_job(job)
    assert info.value.line is not None and info.value.column is not None


def test_parse_errors():
    with pytest.raises(ParseError):
        parse_job('[space]\ntype = "toric"\n')
    with pytest.raises(ParseError):
        parse_job('[command]\nname = "frobnicate"\n')
    with pytest.raises(ParseError):
        parse_job('[command]\nname = "volume"\n')


def test_space_errors():
    with pytest.raises(UnsupportedType):
        parse_job('[space]\ntype = "sphere"\n[command]\nname = "volume"\n')
    with pytest.raises(InvalidParameter):
        parse_job('[space]\ntype = "dual"\nof = "nowhere"\n[command]\nname = "volume"\n')
    with pytest.raises(InvalidParameter):
        parse_job('[space]\ntype = "toric"\nvertices = [["a"], [1]]\n[command]\nname = "volume"\n')


def test_exit_code_computation_error(tmp_path, capsys):
    job = tmp_path / "onwall.toml"
    job.write_text(
        '[space]\ntype = "power"\nof = "o"\nm = 2\n[space.o]\ntype = "coadjoint"\n'
        'root_system = "A1"\nlambda = [1]\n[command]\nname = "martin"\n'
    )
    assert main([str(job)]) == 3
    assert capsys.readouterr().err.startswith("OnWall")


def test_exit_code_failed_check(tmp_path, capsys):
    job = tmp_path / "broken.toml"
    job.write_text(
        '[space]\ntype = "fixed_points"\nrank = 1\n'
        '[[space.points]]\nmoment = [0]\nweights = [[1]]\n'
        '[[space.points]]\nmoment = [1]\nweights = [[1]]\n'
        '[command]\nname = "validate"\n'
    )
    assert main([str(job)]) == 2
    out = capsys.readouterr().out
    assert "euler_sum_vanishing,false" in out


def test_output_paths(tmp_path):
    job = tmp_path / "vol.toml"
    job.write_text('[space]\ntype = "toric"\nvertices = [[0], [3]]\n[command]\nname = "volume"\noutput = "v.csv"\n')
    assert main([str(job)]) == 0
    assert (tmp_path / "v.csv").read_text() == "volume\n3\n"
    target = tmp_path / "explicit.csv"
    assert main([str(job), "-o", str(target)]) == 0
    assert target.read_text() == "volume\n3\n"


SPACES = [
    build_toric(POLYTOPES["triangle"], 2),
    build_toric(POLYTOPES["hirzebruch"], 1),
    coadjoint("A2", (1, 1)),
    coadjoint("B2", (2, 1)),
    build_orbit(build_root_system("A2"), (1, 0)),
    dualize(power(coadjoint("A1", (1,)), 3)),
    restrict_subtorus(build_toric(POLYTOPES["triangle"], 1), [[1, 2]]),
    product(build_toric(POLYTOPES["segment"], 1), coadjoint("A1", (2,))),
]


@pytest.mark.parametrize("index", range(len(SPACES)))
def test_round_trip(index):
    space = SPACES[index]
    assert parse_space(serialize_space(space)) == space


@pytest.mark.parametrize("job", CORPUS, ids=lambda p: p.stem)
def test_corpus_round_trip(job):
    spec = read_job(job)
    if spec.space is not None:
        assert parse_space(serialize_space(spec.space)) == spec.space


@pytest.mark.parametrize("job", CORPUS, ids=lambda p: p.stem)
def test_corpus_succeeds(job):
    code, out = run(read_job(job))
    assert code == 0
    assert out.count("\n") >= 2


def test_thread_count_validation(monkeypatch):
    monkeypatch.setenv(_parallel.ENV_VAR, "0")
    with pytest.raises(ValueError):
        _parallel.worker_count()
    monkeypatch.setenv(_parallel.ENV_VAR, "3")
    assert _parallel.worker_count() == 3


def test_console_script_smoke():
    result = subprocess.run(
        [sys.executable, "-m", "equiloc.cli", str(JOBS / "cp2_volume.toml")],
        capture_output=True, text=True, check=False,
    )
    assert result.returncode == 0
    assert result.stdout == "volume\n9/2\n"
