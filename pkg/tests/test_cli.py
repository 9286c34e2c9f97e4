import json
import subprocess
import sys

import numpy as np
import pytest

from gammatorsion import cli, verify
from gammatorsion.rootsys import clear_orbit_memo, orbit_array, parse_type


def run(capsys, *args):
    code = cli.main(list(args))
    out, err = capsys.readouterr()
    return code, out, err


def test_info_e7(capsys):
    code, out, _ = run(capsys, "info", "E7")
    assert code == 0
    assert "N(G) = 12" in out
    assert "Lambda/Lambda_r = Z/2" in out


def test_info_a1_shows_q(capsys):
    code, out, _ = run(capsys, "info", "a1")
    assert code == 0 and "q = w1^2" in out


def test_info_d5_json(capsys):
    code, out, _ = run(capsys, "info", "D5", "--format", "json")
    data = json.loads(out)
    assert code == 0
    assert data["fundamental_group"]["invariant_factors"] == [4]
    assert data["dynkin_index"] == 2 and data["schema_version"] == 1
    assert data["roots"] == {"total": 40, "long": 40, "short": 0}


@pytest.mark.parametrize("name, factors", [("F4", [6]), ("A3", []), ("E6", [6])])
def test_torsion_degree2(capsys, name, factors):
    code, out, _ = run(capsys, "torsion", name, "--format", "json")
    data = json.loads(out)
    assert code == 0 and data["invariant_factors"] == factors and data["degree"] == 2


def test_torsion_g2_degree3(capsys):
    code, out, _ = run(capsys, "torsion", "G2", "--degree", "3", "--format", "json")
    data = json.loads(out)
    assert code == 0
    assert len(data["doubled_invariant_factors"]) <= 2
    assert all(2 % f == 0 for f in data["doubled_invariant_factors"])
    assert data["invariant_factors"] == [2, 2]


def test_torsion_plain(capsys):
    code, out, _ = run(capsys, "torsion", "B3")
    assert code == 0
    assert "torsion: Z/2" in out and "order of theta: 2" in out


def test_usage_errors(capsys):
    assert run(capsys, "info", "Q7")[0] == 2
    assert run(capsys, "info", "E9")[0] == 2
    assert run(capsys, "torsion", "G2", "--degree", "4")[0] == 2
    assert run(capsys, "frobnicate")[0] == 2
    assert run(capsys, "orbit", "A2", "1,0,0")[0] == 2
    assert run(capsys, "info", "A2", "--threads", "0")[0] == 2


def test_resource_bounds_give_structured_json(capsys):
    code, out, _ = run(capsys, "torsion", "E7", "--degree", "3", "--format", "json")
    assert code == 3
    assert json.loads(out)["error"]["kind"] == "rank_bound"
    code, out, _ = run(capsys, "orbit", "E8", "1,0,0,0,0,0,0,0", "--orbit-ceiling", "1000", "--format", "json")
    assert code == 3
    err = json.loads(out)
    assert err["error"]["kind"] == "orbit_ceiling" and err["schema_version"] == 1


def test_env_overrides_and_cli_precedence(capsys, monkeypatch):
    monkeypatch.setenv("GAMMATORSION_FORMAT", "json")
    code, out, _ = run(capsys, "torsion", "G2")
    assert json.loads(out)["invariant_factors"] == [2]
    code, out, _ = run(capsys, "torsion", "G2", "--format", "plain")
    assert out.startswith("type G2")
    monkeypatch.setenv("GAMMATORSION_DEGREE", "3")
    code, out, _ = run(capsys, "torsion", "G2")
    assert json.loads(out)["degree"] == 3
    monkeypatch.setenv("GAMMATORSION_THREADS", "many")
    assert run(capsys, "torsion", "G2")[0] == 2


def test_verify_suite(capsys):
    code, out, _ = run(capsys, "verify", "typeA")
    assert code == 0
    assert out.count("PASS") == 5 and "5/5 checks passed" in out


def test_verify_failure_exit_code(capsys, monkeypatch):
    bad = verify.Check("fake", "x", "always fails", False)
    monkeypatch.setitem(verify.SUITES, "typeA", lambda ceiling, threads: [bad])
    code, out, _ = run(capsys, "verify", "typeA", "--format", "json")
    assert code == 1 and json.loads(out)["passed"] is False


def test_thread_count_does_not_change_bytes(capsys):
    outs = {run(capsys, "torsion", "E6", "--format", "json", "--threads", t)[1] for t in ("1", "4", "8")}
    assert len(outs) == 1


class TestOrbitCache:
    E8_W8 = (0, 0, 0, 0, 0, 0, 0, 1)

    def test_store_then_load_e8(self, tmp_path):
        d = parse_type("E8")
        cache = cli.OrbitCache(tmp_path)
        arr = orbit_array(d, self.E8_W8)
        cache.store(d, self.E8_W8, arr)
        loaded = cache.load(d, self.E8_W8)
        assert len(loaded) == 240
        assert np.array_equal(np.array(loaded), arr)

    def test_cold_cache_then_hit(self, capsys, tmp_path):
        args = ("orbit", "E8", "0,0,0,0,0,0,0,1", "--cache-dir", str(tmp_path), "--format", "json")
        code, cold, _ = run(capsys, *args)
        assert code == 0 and json.loads(cold)["size"] == 240
        clear_orbit_memo()
        code, warm, _ = run(capsys, *args)
        assert warm == cold
        files = list(tmp_path.rglob("*.json"))
        assert len(files) == 1 and json.loads(files[0].read_text())["size"] == 240

    def test_checksum_mismatch_recomputes(self, capsys, tmp_path):
        args = ("orbit", "G2", "1,0", "--cache-dir", str(tmp_path), "--format", "json")
        _, first, _ = run(capsys, *args)
        path = next(tmp_path.rglob("*.json"))
        data = json.loads(path.read_text())
        data["orbit"][0] = [99, 99]
        path.write_text(json.dumps(data))
        clear_orbit_memo()
        with pytest.warns(RuntimeWarning, match="corrupt"):
            code, second, _ = run(capsys, *args)
        assert code == 0 and second == first
        assert json.loads(path.read_text())["orbit"] == json.loads(first)["orbit"]

    def test_garbage_file_recomputes(self, capsys, tmp_path):
        d = parse_type("B2")
        cache = cli.OrbitCache(tmp_path)
        p = cache.path(d, (1, 0))
        p.parent.mkdir(parents=True)
        p.write_text("not json")
        with pytest.warns(RuntimeWarning):
            arr = cache.fetch(d, (1, 0), 100)
        assert len(arr) == 4 and cache.load(d, (1, 0)) is not None

    def test_info_with_cache_dir(self, capsys, tmp_path):
        code, out, _ = run(capsys, "info", "F4", "--cache-dir", str(tmp_path))
        assert code == 0 and "N(G) = 6" in out
        assert len(list(tmp_path.rglob("*.json"))) == 4


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "gammatorsion", "torsion", "G2", "--format", "json"],
                         capture_output=True, text=True, check=False)
    assert res.returncode == 0
    assert json.loads(res.stdout)["invariant_factors"] == [2]
    res = subprocess.run([sys.executable, "-m", "gammatorsion", "info", "Z3"], capture_output=True, text=True)
    assert res.returncode == 2 and "cannot parse" in res.stderr
