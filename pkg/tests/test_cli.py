# Copyright (c) 2025 Alibaba Group and its affiliates

# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at

#     http://www.apache.org/licenses/LICENSE-2.0

# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import json

import pandas as pd
import pytest

from arcopuc.asymptotics.convergence import COMPARE_COLUMNS
from arcopuc.commands import conjecture
from arcopuc.commands.compare import default_sweep
from arcopuc.commands.project import RESIDUAL_COLUMNS
from arcopuc.fourext.projection import approx_from_json, samples_to_frame
from arcopuc.lattice.params import lattice_nodes, make_params
from arcopuc.main import run

FAST = ["--tol", "1e-10"]


def read_table(path):
    lines = path.read_text().splitlines()
    meta = dict(
        line[2:].split(": ", 1) for line in lines if line.startswith("# ")
    )
    frame = pd.read_csv(path, comment="#")
    return meta, frame


@pytest.fixture
def samples_csv(tmp_path):
    params = make_params(2, 10, 25)
    values = [complex(x**2, x) for x in lattice_nodes(params).nodes_x]
    path = tmp_path / "samples.csv"
    samples_to_frame(values).to_csv(path, index=False)
    return path


class TestEqm:
    def test_csv_table(self, tmp_path):
        out = tmp_path / "eqm.csv"
        code = run(["eqm", "--alpha", "1/2pi", "--xi", "4", "--grid", "0:1:5", *FAST,
                    "--out", str(out)])
        assert code == 0
        meta, frame = read_table(out)
        assert list(frame.columns) == ["phi", "rho", "I", "L"]
        assert len(frame) == 5
        assert meta["command"] == "eqm"
        assert float(meta["xi"]) == 4.0

    def test_json_to_stdout(self, capsys):
        code = run(["eqm", "--b", "2", "--xi-tilde", "2", "--grid", "0:1/4pi:3",
                    "--format", "json", *FAST])
        assert code == 0
        data = json.loads(capsys.readouterr().out)
        assert data["schema"] == 1
        assert data["columns"] == ["phi", "rho", "I", "L"]
        assert len(data["rows"]) == 3
        assert data["meta"]["b"] == "2"
        assert data["meta"]["xi"] == 4.0

    def test_no_band(self, tmp_path):
        code = run(["eqm", "--alpha", "1/2pi", "--xi", "3/2", "--out",
                    str(tmp_path / "x")])
        assert code == 2
        assert not (tmp_path / "x").exists()


class TestCompare:
    def test_without_sweep(self, tmp_path):
        out = tmp_path / "compare.csv"
        code = run(["compare", "--b", "2", "--M", "10", "--N", "25", "--grid", "0:1:5",
                    "--no-sweep", *FAST, "--out", str(out)])
        assert code == 0
        meta, frame = read_table(out)
        assert list(frame.columns) == COMPARE_COLUMNS
        assert len(frame) == 5
        assert "slope" not in meta
        assert meta["M"] == "10"

    def test_with_sweep(self, tmp_path):
        out = tmp_path / "compare.json"
        code = run(["compare", "--alpha", "1/2pi", "--M", "10", "--N", "25",
                    "--grid", "0.2:0.8:3", "--sweep", "6,8,10", "--format", "json",
                    *FAST, "--out", str(out)])
        assert code == 0
        meta = json.loads(out.read_text())["meta"]
        assert meta["sweep"] == "6,8,10"
        assert "slope" in meta and "slope_C" in meta

    def test_default_sweep(self):
        assert default_sweep(20) == [10, 15, 20]
        assert default_sweep(5) == [4, 5]

    def test_even_sample_count(self, tmp_path):
        code = run(["compare", "--b", "2", "--M", "10", "--N", "24", "--no-sweep",
                    "--out", str(tmp_path / "x")])
        assert code == 64


class TestProject:
    def test_residual_table_and_approx(self, tmp_path, samples_csv):
        out, approx = tmp_path / "residual.csv", tmp_path / "approx.json"
        code = run(["project", "--b", "2", "--M", "10", "--N", "25", "--input",
                    str(samples_csv), "--approx", str(approx), "--out", str(out)])
        assert code == 0
        meta, frame = read_table(out)
        assert list(frame.columns) == RESIDUAL_COLUMNS
        assert list(frame["j"]) == list(range(1, 26))
        assert float(meta["max_abs_E"]) == pytest.approx(frame["abs_E"].max())
        restored = approx_from_json(approx.read_text())
        assert restored.params == make_params(2, 10, 25)

    def test_sample_count_mismatch(self, tmp_path, samples_csv):
        code = run(["project", "--b", "2", "--M", "10", "--N", "27", "--input",
                    str(samples_csv), "--out", str(tmp_path / "x")])
        assert code == 5

    def test_malformed_csv(self, tmp_path):
        bad = tmp_path / "bad.csv"
        bad.write_text("j,re,im\n1,0,0\n2,zero,0\n")
        code = run(["project", "--b", "2", "--M", "1", "--N", "3", "--input",
                    str(bad), "--out", str(tmp_path / "x")])
        assert code == 65

    def test_missing_input(self, tmp_path):
        code = run(["project", "--b", "2", "--M", "1", "--N", "3", "--input",
                    str(tmp_path / "nope.csv")])
        assert code == 5


class TestConjecture:
    def test_evidence_table(self, tmp_path):
        out = tmp_path / "conjecture.csv"
        code = run(["conjecture", "--alphas", "1/3pi,1/2pi", *FAST, "--out", str(out)])
        assert code == 0
        meta, frame = read_table(out)
        assert list(frame["status"]) == ["no_root", "ok"]
        assert frame["xi_solved"].iloc[1] == pytest.approx(2.0, abs=1e-6)
        assert frame["xi_tilde_solved"].iloc[1] == pytest.approx(1.0, abs=1e-6)
        assert meta["mismatches"] == "0"

    def test_mismatch_exit_code(self, tmp_path, monkeypatch):
        monkeypatch.setattr(conjecture, "xi_critical", lambda alpha, spec=None: 5.0)
        code = run(["conjecture", "--alphas", "1/2pi", "--out", str(tmp_path / "c.csv")])
        assert code == 1


class TestUsage:
    @pytest.mark.parametrize(
        "argv",
        [
            ["compare", "--b", "2", "--N", "25"],
            ["eqm", "--b", "2", "--alpha", "1/2pi", "--xi", "4"],
            ["eqm", "--b", "2", "--xi", "4", "--grid", "0:1"],
            ["eqm", "--b", "two", "--xi", "4"],
            ["compare", "--b", "2", "--M", "10", "--N", "25", "--sweep", "7"],
            [],
        ],
    )
    def test_usage_errors(self, argv):
        with pytest.raises(SystemExit) as exc:
            run(argv)
        assert exc.value.code == 64

    def test_bad_config(self, tmp_path):
        config = tmp_path / "bad.ini"
        config.write_text("[QUADRATURE]\nabs_tol = -1\n")
        code = run(["--config", str(config), "eqm", "--b", "2", "--xi", "4"])
        assert code == 64

    def test_missing_config(self, tmp_path):
        missing = str(tmp_path / "none.ini")
        code = run(["--config", missing, "eqm", "--b", "2", "--xi", "4"])
        assert code == 64

    def test_bad_tolerance(self, tmp_path):
        code = run(["eqm", "--b", "2", "--xi", "4", "--tol", "0", "--out",
                    str(tmp_path / "x")])
        assert code == 64
