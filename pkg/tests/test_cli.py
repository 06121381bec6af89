import numpy as np
import pytest

import runner
from wermerset import utils
from wermerset.utils import serialization
from wermerset.utils.construction import Predicate, VerificationReport
from wermerset.utils.errors import PredicateFailure
from wermerset.utils.grid_export import ExportKind, read_csv


@pytest.fixture(autouse=True)
def no_config_file(monkeypatch):
    monkeypatch.delenv(utils.Runner.CONFIG_ENVIRONMENT_VARIABLE, raising=False)


@pytest.fixture
def saved(hand_built, tmp_path):
    path = tmp_path / "construction.toml"
    serialization.save(hand_built, str(path))
    return tmp_path


def run(out, *argv) -> int:
    return runner.main(["--out", str(out), *argv])


class TestUsage:

    def test_no_command(self, tmp_path):
        assert run(tmp_path) == 1

    def test_unknown_command(self, tmp_path, capsys):
        assert run(tmp_path, "frobnicate") == 1
        assert "usage" in capsys.readouterr().err

    def test_missing_required_flag(self, tmp_path):
        assert run(tmp_path, "fiber") == 1

    @pytest.mark.parametrize("value", ["1", "a,b", "1,2,3"])
    def test_bad_point(self, saved, value):
        assert run(saved, "fiber", "--z", value) == 1

    def test_stage_beyond_the_construction(self, saved):
        assert run(saved, "fiber", "--z", "1,0", "--stage", "4") == 1

    def test_missing_construction(self, tmp_path, capsys):
        assert run(tmp_path, "fiber", "--z", "1,0") == 1
        assert "run `build` first" in capsys.readouterr().err

    def test_bad_log_level(self, saved):
        assert run(saved, "--loglevel", "chatty", "fiber", "--z", "1,0") == 1

    def test_config_file(self, saved, tmp_path):
        config = tmp_path / "wermerset.toml"
        config.write_text('mode = "sideways"\n')
        assert runner.main(["--config", str(config), "--out", str(saved), "build", "--stages", "1"]) == 1


class TestErrorHandler:

    @pytest.fixture
    def loaded(self):
        r = utils.Runner()
        r.load_all_extensions()
        r.build_parser()
        return r

    def test_predicate_failure_exit_code(self, loaded, capsys):
        report = VerificationReport(Predicate.C1, 2, -0.5, (0.5j, 0j), 10)
        assert loaded.handle_error(None, PredicateFailure(2, [report])) == 2
        assert "Stage 2 failed C1" in capsys.readouterr().err

    def test_unexpected_error(self, loaded):
        assert loaded.handle_error(None, RuntimeError("boom")) == 1

    def test_commands_are_loaded(self, loaded):
        assert {"build", "verify", "fiber", "potential", "slice", "probe", "monodromy", "diag", "export"} <= set(
            loaded.commands
        )


class TestCommands:

    def test_fiber(self, saved, capsys):
        assert run(saved, "fiber", "--z", "1,0", "--stage", "1", "--samples") == 0
        rows = np.loadtxt(saved / "fiber_stage1.csv", delimiter=",", comments="#", ndmin=2)
        assert np.allclose(rows, [[-1, 0, 1], [1, 0, 1]])
        assert (saved / "fiber_stage1_sublevel.csv").exists()
        assert "Fibre of stage 1" in capsys.readouterr().out

    def test_potential(self, saved):
        assert run(saved, "potential", "--grid", "0.3,0,0.1,4", "--w-slice", "0,0", "--stage", "2") == 0
        export = read_csv(str(saved / "potential_stage2.csv"))
        assert export.kind is ExportKind.POTENTIAL_SLICE
        assert export.values.shape == (4, 4)
        assert export.sentinel == -1.0

    def test_potential_needs_stage_two(self, saved):
        assert run(saved, "potential", "--grid", "0,0,1,4", "--w-slice", "0,0", "--stage", "1") == 1

    def test_slice(self, saved):
        assert run(saved, "slice", "--z", "2.5,0", "--window", "0,0,3,16", "--stage", "2", "--fiber-raster") == 0
        export = read_csv(str(saved / "fiber_slice_stage2.csv"))
        assert export.values.shape == (16, 16)
        assert set(np.unique(export.values)) <= {0.0, 1.0}
        assert (saved / "fiber_slice_stage2.pgm").exists()

    def test_monodromy(self, saved, capsys):
        assert run(saved, "monodromy", "--loop", "0,0,0.5", "--stage", "1") == 0
        assert "SignVector(+) -> SignVector(-)" in capsys.readouterr().out

    def test_probe_rejects_a_circle_through_a_branch_point(self, saved):
        assert run(saved, "probe", "--circle", "0.5,0,0.5", "--k", "1") == 1

    def test_cloud_export(self, saved):
        assert run(saved, "export", "cloud", "--segment", "0.2,0,0.8,0", "--count", "5", "--stage", "2") == 0
        rows = np.loadtxt(saved / "cloud_stage2.csv", delimiter=",", comments="#", ndmin=2)
        assert rows.shape[0] == 20


@pytest.mark.slow
class TestBuild:

    def test_build_then_verify(self, tmp_path):
        assert run(tmp_path, "--mode", "modified", "build", "--stages", "2") == 0
        construction = serialization.load(str(tmp_path / "construction.toml"))
        assert construction.depth == 2
        assert all(report.passed for report in construction.reports)
        assert run(tmp_path, "verify") == 0
        assert run(tmp_path, "diag", "--lev1") == 0
