import csv
import io
import json
import warnings

import numpy as np
import pytest

from antlab.errors import DomainError
from antlab.lab import (
    EXPERIMENTS,
    ExperimentConfig,
    cache_key,
    cache_lookup,
    cache_store,
    cached_sequence,
    read_config_file,
    run_experiment,
)
from antlab.lab.cli import main
from antlab.lab.config import DEFAULT_SEED, parse_angle
from antlab.primes import primes_up_to
from antlab.sequences import SieveParams, build_sequence


def test_constants_shape():
    res = run_experiment(ExperimentConfig("constants", {"prime_limit": "10000"}))
    obj = json.loads(res.to_json())
    assert {"nu", "J", "nu_error", "J_error"} <= set(obj["stats"])
    assert obj["config"]["experiment"] == "constants"


def test_count_small():
    res = run_experiment(ExperimentConfig("count", {"x": "17"}))
    row = dict(zip(res.columns, res.rows[0]))
    assert row["brute_count"] == 1
    assert row["predicted"] is None


def test_unknown_experiment_lists_names():
    with pytest.raises(DomainError) as exc:
        ExperimentConfig("foo")
    for name in EXPERIMENTS:
        assert name in str(exc.value)


def test_unknown_parameter_rejected():
    with pytest.raises(DomainError, match="accepted"):
        ExperimentConfig("count", {"y": "3"})
    with pytest.raises(DomainError):
        run_experiment(ExperimentConfig("count", {"x": "1.5"}))


def test_seed_default():
    assert ExperimentConfig("equidist").seed == DEFAULT_SEED


def test_parse_angle():
    assert parse_angle("pi/2") == pytest.approx(np.pi / 2)
    assert parse_angle("2pi") == pytest.approx(2 * np.pi)
    assert parse_angle("0.25") == 0.25


def test_cache_roundtrip(cache_dir):
    params = SieveParams.standard(10**5)
    key = ("B", params.x, params.X, params.eta)
    assert cache_lookup(key, cache_dir) is None
    seq = build_sequence("B", params)
    cache_store(key, seq, cache_dir)
    got = cache_lookup(key, cache_dir)
    assert got.n.tobytes() == seq.n.tobytes()
    assert got.w.tobytes() == seq.w.tobytes()
    assert got.params == params and got.kind == "B"
    other = SieveParams.standard(10**5, X=params.X * 0.9)
    assert cache_lookup(("B", other.x, other.X, other.eta), cache_dir) is None
    assert cached_sequence("B", params, cache_dir).w.tobytes() == seq.w.tobytes()


def test_cache_prime_table(cache_dir):
    t = primes_up_to(1000)
    cache_store(cache_key("primes", 1000), t, cache_dir)
    got = cache_lookup(cache_key("primes", 1000), cache_dir)
    assert np.array_equal(got.primes, t.primes)


def test_cache_corrupt_entry(cache_dir, tmp_path):
    params = SieveParams.standard(10**5)
    key = ("A", params.x, params.X, params.eta)
    path = cache_store(key, build_sequence("A", params), cache_dir)
    path.write_bytes(b"not a zip archive")
    with pytest.warns(RuntimeWarning, match="corrupt"):
        assert cache_lookup(key, cache_dir) is None
    assert not path.exists()
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        assert len(cached_sequence("A", params, cache_dir)) > 0


def test_read_config_file(tmp_path):
    p = tmp_path / "run.cfg"
    p.write_text("# demo\nx = 1e5\nd-max=300  # trailing\n\nseq=A\n")
    assert read_config_file(str(p)) == {"x": "1e5", "d_max": "300", "seq": "A"}


def test_cli_config_and_override(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("x=1000\nbrute=true\npredict=false\n")
    assert main(["count", "--config", str(cfg), "--x", "2000"]) == 0
    out = capsys.readouterr().out
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["x", "brute_count", "predicted", "ratio"]
    assert rows[1][0] == "2000"


def test_cli_error_exit(capsys):
    assert main(["count", "--x", "abc"]) == 2
    assert "error" in capsys.readouterr().err


def test_cli_writes_file(tmp_path):
    out = tmp_path / "sub" / "m.csv"
    assert main(["--threads", "2", "mitsui", "--x", "10000", "--q", "3", "--theta", "pi/2", "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "count,main,ratio"
    assert len(lines) == 2


def test_gauss_verify_json(tmp_path, capsys):
    assert main(["gauss", "verify", "--trials", "200", "--classes", "3", "--members", "5", "--seed", "4"]) == 0
    obj = json.loads(capsys.readouterr().out)
    assert obj["stats"]["passed"] is True
    assert obj["config"]["seed"] == 4


def test_json_embeds_config_and_csv_has_header():
    res = run_experiment(ExperimentConfig("largesieve", {"n": "50", "q": "5", "trials": "2"}))
    assert json.loads(res.to_json())["config"]["parameters"]["n"] == "50"
    assert res.to_csv().splitlines()[0] == "trial,lhs,bound,ratio,holds"
    st = run_experiment(ExperimentConfig("constants", {"prime_limit": "10000"}, format="csv")).to_csv()
    assert st.splitlines()[0].split(",")[0] == "nu"


def test_csv_reals_roundtrip():
    res = run_experiment(ExperimentConfig("largesieve", {"n": "40", "q": "6", "trials": "3"}))
    parsed = list(csv.reader(io.StringIO(res.to_csv())))[1:]
    for row, raw in zip(parsed, res.rows):
        assert float(row[1]) == raw[1] and float(row[3]) == raw[3]


@pytest.mark.parametrize(
    "argv",
    [
        ["leveldist", "--x", "100000", "--d-max", "300"],
        ["buchstab", "--x", "100000", "--compare"],
        ["bdh", "--x", "60"],
        ["equidist", "--n1", "30", "--n2", "30", "--q-max", "20", "--q0", "3"],
        ["largesieve", "--n", "200", "--q", "12", "--trials", "3"],
        ["mitsui", "--x", "20000", "--q", "5", "--theta", "pi"],
    ],
)
def test_determinism_across_threads(argv, tmp_path):
    outs = []
    for threads in (1, 4):
        out = tmp_path / f"{threads}.out"
        assert main(argv + ["--threads", str(threads), "--seed", "11", "--out", str(out)]) == 0
        outs.append(out.read_bytes())
    assert outs[0] == outs[1]
