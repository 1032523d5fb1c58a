"""
Run manifest and result directory writer.

Every experiment run leaves an output directory with ``metrics.csv``, one CSV
per auxiliary table, optional optimizer (``trace_*``) and CG (``cg_*``) trace
CSVs and ``manifest.sexp``::

    (skigp_run
      (version 1)
      (skigp_version "0.1.0")
      (experiment infill)
      (seed 0)
      (config_sha256 "3f1c...")
      (flags "ski m=100: CG did not converge ...")
      (models
        (model (name "ski_m100") (skigp_model (version 1) ...))))
"""

from pathlib import Path
from typing import Any, Dict, List, Union

import sexpdata
from loguru import logger

from ..core.exceptions import ManifestError
from ..core.types import ExperimentResult
from .config_file import ExperimentConfig
from .io import emit_metrics, write_table

RUN_MANIFEST_VERSION = 1
MANIFEST_NAME = "manifest.sexp"
METRICS_NAME = "metrics.csv"

Sym = sexpdata.Symbol


def run_manifest_sexp(result: ExperimentResult, cfg: ExperimentConfig, version: str) -> List:
    """Run manifest as an S-expression tree."""
    models: List[Any] = [Sym("models")]
    for name, text in result.models.items():
        models.append([Sym("model"), [Sym("name"), name], sexpdata.loads(text)])
    sexp = [
        Sym("skigp_run"),
        [Sym("version"), RUN_MANIFEST_VERSION],
        [Sym("skigp_version"), version],
        [Sym("experiment"), Sym(result.experiment)],
        [Sym("seed"), cfg.seed],
        [Sym("config_sha256"), cfg.sha256()],
    ]
    if result.flags:
        sexp.append([Sym("flags")] + list(result.flags))
    sexp.append(models)
    return sexp


def read_run_manifest(path: Union[str, Path]) -> Dict[str, Any]:
    """Read the header fields and model manifests back from a run manifest.

    Returns:
        Dict with version, skigp_version, experiment, seed, config_sha256, flags
        and models (name -> model manifest text)

    Raises:
        ManifestError: If the file is not a supported run manifest
    """
    path = Path(path)
    with open(path, "r", encoding="utf-8") as f:
        text = f.read()
    try:
        sexp = sexpdata.loads(text)
    except Exception as e:
        raise ManifestError(f"{path} is not valid S-expression text: {e}") from e
    if not isinstance(sexp, list) or not sexp or str(sexp[0]) != "skigp_run":
        raise ManifestError(f"{path} is not a skigp run manifest")

    entries = {str(item[0]): item[1:] for item in sexp[1:] if isinstance(item, list) and item}
    version = entries.get("version", [None])[0]
    if version != RUN_MANIFEST_VERSION:
        raise ManifestError(f"Unsupported run manifest version: {version!r}")

    models = {}
    for item in entries.get("models", []):
        name = next(str(e[1]) for e in item[1:] if isinstance(e, list) and str(e[0]) == "name")
        body = next(e for e in item[1:] if isinstance(e, list) and str(e[0]) == "skigp_model")
        models[name] = sexpdata.dumps(body)
    return {
        "version": version,
        "skigp_version": str(entries["skigp_version"][0]),
        "experiment": str(entries["experiment"][0]),
        "seed": int(entries["seed"][0]),
        "config_sha256": str(entries["config_sha256"][0]),
        "flags": [str(flag) for flag in entries.get("flags", [])],
        "models": models,
    }


def write_results(
    result: ExperimentResult, cfg: ExperimentConfig, out_dir: Union[str, Path], version: str
) -> Path:
    """Write metrics, tables, traces and the run manifest under ``out_dir``.

    Returns:
        Path of the written manifest
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    emit_metrics(result.rows, out / METRICS_NAME)
    for name, (header, rows) in result.tables.items():
        write_table(header, rows, out / f"{name}.csv")
    for name, trace in result.traces.items():
        write_table(["iteration", "log_marginal_likelihood"], list(enumerate(trace)), out / f"trace_{name}.csv")
    for name, residuals in result.solves.items():
        write_table(["iteration", "relative_residual"], list(enumerate(residuals)), out / f"cg_{name}.csv")

    manifest = out / MANIFEST_NAME
    with open(manifest, "w", encoding="utf-8") as f:
        f.write(sexpdata.dumps(run_manifest_sexp(result, cfg, version)))
        f.write("\n")
    logger.info(
        f"Wrote {len(result.tables)} tables, {len(result.traces)} traces, {len(result.solves)} CG traces and {manifest} to {out}"
    )
    return manifest
