"""
Unit tests for result directories and run manifests.
"""

import pytest

from skigp.cli.config_file import ExperimentConfig
from skigp.cli.manifest import MANIFEST_NAME, METRICS_NAME, read_run_manifest, write_results
from skigp.core.exceptions import ManifestError
from skigp.core.types import ExperimentResult, MetricsRow
from skigp.gp import ExactGP, dumps, loads
from skigp.kernels import RBFKernel


@pytest.fixture
def result():
    res = ExperimentResult("infill")
    res.rows.append(MetricsRow("mean", 0, mae=0.5, smae=1.0, notes="empirical mean"))
    res.tables["hypers"] = (["name", "value"], [["lengthscale", 2.0], ["sigma2", 0.01]])
    res.models["exact"] = dumps(ExactGP(RBFKernel(2.0), 0.01, mean=None))
    res.traces["exact"] = [-10.0, -5.5, -5.25]
    res.solves["ski_m100"] = [1.0, 0.25, 1e-07]
    res.flags.append("ski m=100: CG did not converge (residual 1.00e-03)")
    return res


@pytest.mark.unit
class TestWriteResults:
    """Test the output directory layout."""

    def test_files_written(self, result, tmp_path):
        cfg = ExperimentConfig(experiment="infill", seed=4)
        manifest = write_results(result, cfg, tmp_path / "out", "0.1.0")
        out = tmp_path / "out"
        assert manifest == out / MANIFEST_NAME
        assert (out / METRICS_NAME).read_text().splitlines()[1].startswith("mean,0,")
        assert (out / "hypers.csv").read_text().splitlines()[0] == "name,value"
        trace = (out / "trace_exact.csv").read_text().splitlines()
        assert trace == ["iteration,log_marginal_likelihood", "0,-10", "1,-5.5", "2,-5.25"]

    def test_cg_residual_trace_written(self, result, tmp_path):
        write_results(result, ExperimentConfig(experiment="infill"), tmp_path, "0.1.0")
        lines = (tmp_path / "cg_ski_m100.csv").read_text().splitlines()
        assert lines == ["iteration,relative_residual", "0,1", "1,0.25", "2,1e-07"]

    def test_no_cg_files_without_solves(self, tmp_path):
        write_results(ExperimentResult("reconstruct"), ExperimentConfig(), tmp_path, "0.1.0")
        assert not list(tmp_path.glob("cg_*.csv"))

    def test_manifest_round_trip(self, result, tmp_path):
        cfg = ExperimentConfig(experiment="infill", seed=4)
        info = read_run_manifest(write_results(result, cfg, tmp_path, "0.1.0"))
        assert info["version"] == 1
        assert info["skigp_version"] == "0.1.0"
        assert info["experiment"] == "infill"
        assert info["seed"] == 4
        assert info["config_sha256"] == cfg.sha256()
        assert info["flags"] == result.flags
        model = loads(info["models"]["exact"])
        assert isinstance(model, ExactGP)
        assert model.mean_spec is None

    def test_rejects_other_files(self, tmp_path):
        path = tmp_path / "bogus.sexp"
        path.write_text("(skigp_model (version 1))")
        with pytest.raises(ManifestError):
            read_run_manifest(path)
        path.write_text("(skigp_run (version 7))")
        with pytest.raises(ManifestError):
            read_run_manifest(path)
        path.write_text("(skigp_run")
        with pytest.raises(ManifestError):
            read_run_manifest(path)
