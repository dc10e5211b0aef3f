import json

import pytest

from cipolla.cli import AUTO, OutputFormat, RunConfig, main, parse_config


def run(capsys, *args):
    code = main(list(args))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_poly_text(capsys):
    assert run(capsys, "poly", "--n", "0")[1] == "y - 1\n"
    assert run(capsys, "poly", "--n", "2")[1] == "-(y^2 - 6y + 11)/2\n"


def test_poly_json(capsys):
    code, out, _ = run(capsys, "poly", "--n", "2", "--json")
    assert code == 0
    assert json.loads(out) == {"denom": "2", "coeffs": ["-11", "6", "-1"]}


def test_triangle(capsys):
    code, out, _ = run(capsys, "triangle", "--kind", "a", "--N", "7")
    assert code == 0
    assert out.splitlines()[7] == "7: 720 22428 322224 2838570 16775640 66811920 165838848 196993194"


def test_json_roundtrip(capsys):
    _, out, _ = run(capsys, "triangle", "--kind", "b", "--N", "9", "--json")
    assert json.dumps(json.loads(out), separators=(",", ":")) + "\n" == out


def test_deterministic(capsys):
    a = run(capsys, "constants", "--N", "1-3", "--digits", "12", "--json")[1]
    b = run(capsys, "constants", "--N", "1-3", "--digits", "12", "--json")[1]
    assert a == b


def test_ali(capsys):
    code, out, _ = run(capsys, "ali", "--u", "1e10", "--terms", "5", "--json")
    obj = json.loads(out)
    assert code == 0 and obj["theorem"] == "CONCRETE" and obj["N"] == 5
    assert set(obj) >= {"value", "digits", "N", "radius", "theorem"}


def test_li(capsys):
    assert run(capsys, "li", "--x", "2", "--digits", "12")[1].startswith("1.04516378012")


def test_nthprime(capsys):
    assert run(capsys, "nthprime", "--n", "1e6")[1] == "15485863\n"


def test_verify_exit_codes(capsys):
    code, out, _ = run(capsys, "verify", "--check", "tdistance", "--to", "385")
    assert code == 1 and "violations: 1,3,5..7,10" in out
    code, out, _ = run(capsys, "primes", "verify", "--check", "classical", "--to", "1e5")
    assert code == 0


def test_bench(capsys):
    code, out, _ = run(capsys, "bench", "--N", "100", "--csv")
    assert code == 0
    assert out.splitlines()[1].startswith("100,75142,75142,")


def test_roots(capsys):
    _, out, _ = run(capsys, "primes", "roots", "--n", "2", "--digits", "8")
    assert out == "P_2: no real roots\n"


def test_usage_errors(capsys):
    assert run(capsys, "poly")[0] == 2
    assert run(capsys, "ali", "--u", "5", "--terms", "2", "--digits", "3")[0] == 2
    assert run(capsys, "li", "--x", "0.5")[0] == 2
    assert run(capsys, "nthprime", "--n", "1e9", "--sieve-limit", "1000")[0] == 2


def test_env_override(monkeypatch):
    monkeypatch.setenv("CIPOLLA_DIGITS", "44")
    monkeypatch.setenv("CIPOLLA_FORMAT", "json")
    cfg = parse_config(["li", "--x", "3"])
    assert cfg.digits == 44 and cfg.fmt is OutputFormat.JSON
    assert parse_config(["li", "--x", "3", "--digits", "20"]).digits == 20


def test_run_config(tmp_path):
    cfg = RunConfig("poly", cache_dir=tmp_path / "c")
    assert cfg.terms == AUTO and (tmp_path / "c").is_dir()
    with pytest.raises(ValueError):
        RunConfig("poly", digits=5)
    with pytest.raises(ValueError):
        RunConfig("poly", terms=-1)
