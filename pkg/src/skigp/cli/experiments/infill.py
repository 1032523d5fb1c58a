"""
Signal infill experiment.

Fills contiguous gaps in a 1D signal with SKI (Toeplitz grid) and FITC over
an m sweep. Both methods share one set of RBF hypers: learned by maximizing
the SKI marginal likelihood on every training point (or an exact GP on an
evenly strided subset), starting from a lengthscale read off the signal's
power spectrum, or taken from the configuration.

Accuracy is the standardized mean absolute error, SMAE = MAE / MAE(empirical
mean), so predicting the training mean scores exactly 1. FITC runs only for
m up to ``fitc_max_m``; each FITC run is compared with the best SKI run that
finished within the same wall time.
"""

import dataclasses
from typing import List, Optional, Tuple

import numpy as np
from loguru import logger

from ...core.config import config
from ...core.exceptions import ConfigError
from ...core.types import Dataset, ExperimentResult, MetricsRow
from ...gp.factory import make_model
from ...gp.learning import LearningResult, learn_hypers
from ...gp.manifest import dumps
from ...interp.grid import padded_grid, regular_grid
from ...kernels.rbf import RBFKernel
from ...structla.fft import fft, next_pow2
from ..config_file import INFILL_METHODS
from ..io import ingest_csv
from ..synthetic import default_gaps, gapped_dataset, infill_signal, split_gaps
from .base import BaseExperiment, timed

DEFAULT_N = 8000
SPAN = (0.0, 200.0)
DEFAULT_M_SWEEP = [400, 800, 1600, 3200, 6400]

BUDGET_COLUMNS = ["fitc_m", "fitc_time_s", "fitc_smae", "ski_m", "ski_time_s", "ski_smae"]


def smae(pred: np.ndarray, target: np.ndarray, train_mean: float) -> float:
    """MAE of pred normalized by the MAE of predicting the training mean."""
    baseline = float(np.mean(np.abs(train_mean - target)))
    if baseline == 0.0:
        return float("nan")
    return float(np.mean(np.abs(pred - target))) / baseline


def spectral_lengthscale(t: np.ndarray, y: np.ndarray, quantile: float = 0.9) -> float:
    """RBF lengthscale 1 / (2 pi f) at the frequency f holding ``quantile`` of the power.

    The signal is resampled by linear interpolation onto a power-of-two
    equispaced grid before its periodogram is taken; the zero frequency is
    excluded. A constant signal gets the full span.
    """
    lo, hi = float(np.min(t)), float(np.max(t))
    size = next_pow2(t.shape[0])
    grid = np.linspace(lo, hi, size)
    order = np.argsort(t, kind="stable")
    resampled = np.interp(grid, t[order], y[order])
    power = np.abs(fft(resampled - resampled.mean())[1 : size // 2 + 1]) ** 2
    cumulative = np.cumsum(power)
    if not cumulative[-1] > 0:
        return hi - lo
    k = int(np.searchsorted(cumulative, quantile * cumulative[-1])) + 1
    freq = k / (size * (grid[1] - grid[0]))
    return 1.0 / (2.0 * np.pi * freq)


class InfillExperiment(BaseExperiment):
    """Gap reconstruction accuracy versus runtime for SKI and FITC."""

    name = "infill"

    def _dataset(self) -> Dataset:
        if self.cfg.data is not None:
            data = ingest_csv(self.cfg.data)
            if self.cfg.gaps:
                if data.X_test is not None:
                    raise ConfigError(
                        "Use either missing targets or configured gaps in a data file, not both",
                        field="gaps",
                    )
                t = data.X[:, 0]
                train, test = split_gaps(t, data.y, self.cfg.gaps)
                data = Dataset(t[train, None], data.y[train], t[test, None], data.y[test])
            return data
        n = self.cfg.n or DEFAULT_N
        t, y = infill_signal(n, SPAN, self.cfg.noise, self.cfg.seed)
        if self.cfg.gaps:
            gaps = self.cfg.gaps
        else:
            gaps = default_gaps(SPAN, spacing=(SPAN[1] - SPAN[0]) / (n - 1))
        return gapped_dataset(t, y, gaps)

    def _learn(self, data: Dataset, kernel: RBFKernel, sigma2: float) -> Tuple[LearningResult, str]:
        lcfg = dataclasses.replace(
            config.learning, max_iters=self.cfg.learn_max_iters, gradient=self.cfg.gradient
        )
        if self.cfg.hypers_from == "ski":
            grid = padded_grid(data.X, [self.cfg.learn_grid_size])
            init = make_model("ski", kernel, sigma2, mean=None, grid=grid, interp="cubic")
            X_fit, y_fit = data.X, data.y
        else:
            stride = max(1, data.n // self.cfg.train_subset)
            X_fit, y_fit = data.X[::stride], data.y[::stride]
            init = make_model("exact", kernel, sigma2, mean=None)
        fit = learn_hypers(init, X_fit, y_fit, lcfg)
        origin = f"learned by {self.cfg.hypers_from} on {X_fit.shape[0]} points"
        logger.info(f"{origin}: {fit.kernel!r}, sigma2={fit.sigma2:.4g}")
        return fit, origin

    def _hypers(self, data: Dataset, result: ExperimentResult) -> Tuple[RBFKernel, float, str]:
        if self.cfg.lengthscale is not None:
            ls = self.cfg.lengthscale
        else:
            ls = spectral_lengthscale(data.X[:, 0], data.y)
            logger.info(f"Spectral lengthscale estimate {ls:.4g}")
        if not self.cfg.learn_hypers:
            return RBFKernel(ls, self.cfg.signal_variance), self.cfg.sigma2, "configured"
        y_var = float(np.var(data.y)) or 1.0
        fit, origin = self._learn(data, RBFKernel(ls, y_var), 0.1 * y_var)
        result.traces["hypers"] = fit.trace
        report = getattr(fit.model, "solve_report", None)
        if report is not None:
            result.solves["hypers"] = report.trace
        result.flags.extend(f"hypers: {flag}" for flag in fit.flags)
        return fit.kernel, fit.sigma2, origin

    def _methods(self) -> List[str]:
        methods = self.cfg.schemes or list(INFILL_METHODS)
        for method in methods:
            if method not in INFILL_METHODS:
                raise ConfigError(
                    f"Unknown infill method '{method}'; expected one of {INFILL_METHODS}",
                    field="schemes",
                    value=method,
                )
        return methods

    def _sweep(self, method: str, sweep: List[int]) -> List[int]:
        if method != "fitc":
            return list(sweep)
        kept = [m for m in sweep if m <= self.cfg.fitc_max_m]
        if len(kept) < len(sweep):
            logger.info(f"FITC limited to m <= {self.cfg.fitc_max_m}: running {kept}")
        return kept

    def _build(self, method: str, m: int, data: Dataset, kernel, sigma2: float, X_eval):
        if method == "ski":
            pts = np.vstack([data.X, X_eval])
            grid = padded_grid(pts, [m])
            return make_model("ski", kernel, sigma2, mean=None, grid=grid, interp="cubic")
        lo, hi = data.bounds()[0]
        U = regular_grid([(lo, hi)], [min(m, data.n)]).points()
        return make_model("fitc", kernel, sigma2, mean=None, inducing=U)

    @staticmethod
    def _budget_table(rows: List[MetricsRow]) -> List[list]:
        """Each FITC run against the best SKI run that took no longer."""
        ski = [r for r in rows if r.method == "ski" and np.isfinite(r.smae)]
        table = []
        for f in (r for r in rows if r.method == "fitc"):
            budget = f.build_time_s + f.solve_time_s
            within = [r for r in ski if r.build_time_s + r.solve_time_s <= budget]
            if within:
                best = min(within, key=lambda r: r.smae)
                table.append(
                    [f.m, budget, f.smae, best.m, best.build_time_s + best.solve_time_s, best.smae]
                )
            else:
                table.append([f.m, budget, f.smae, 0, float("nan"), float("nan")])
        return table

    def _run(self) -> ExperimentResult:
        data = self._dataset()
        methods = self._methods()
        sweep = self.cfg.m_sweep or DEFAULT_M_SWEEP
        result = ExperimentResult(self.name)
        kernel, sigma2, origin = self._hypers(data, result)

        if data.n_test:
            X_eval = data.X_test
            y_eval: Optional[np.ndarray] = data.y_test
        else:
            # nothing held out: score the fit on the training signal
            X_eval, y_eval = data.X, data.y
        train_mean = float(np.mean(data.y))
        result.tables["hypers"] = (
            ["name", "value"],
            [[name, value] for name, value in kernel.to_pairs()] + [["sigma2", sigma2], ["source", origin]],
        )
        predictions = {"t": X_eval[:, 0]}

        if "mean" in methods:
            pred = np.full(X_eval.shape[0], train_mean)
            score = smae(pred, y_eval, train_mean) if y_eval is not None else float("nan")
            mae = float(np.mean(np.abs(pred - y_eval))) if y_eval is not None else float("nan")
            result.rows.append(MetricsRow("mean", 0, mae=mae, smae=score, notes="empirical mean"))

        for method in [name for name in methods if name != "mean"]:
            sizes = self._sweep(method, sweep)
            if not sizes:
                logger.warning(f"No {method} runs: every m exceeds fitc_max_m={self.cfg.fitc_max_m}")
                result.flags.append(f"{method}: skipped, every m exceeds {self.cfg.fitc_max_m}")
                continue
            for m in sizes:
                model = self._build(method, m, data, kernel, sigma2, X_eval)
                _, build_time = timed(lambda: model.fit(data.X, data.y))
                pred, solve_time = timed(lambda: model.predict_mean(X_eval))
                if y_eval is not None:
                    mae = float(np.mean(np.abs(pred - y_eval)))
                    score = smae(pred, y_eval, train_mean)
                else:
                    mae = score = float("nan")
                m_eff = model.m
                name = f"{method}_m{m_eff}"
                result.rows.append(
                    MetricsRow(
                        method=method,
                        m=m_eff,
                        build_time_s=build_time,
                        solve_time_s=solve_time,
                        mae=mae,
                        smae=score,
                        notes="; ".join(model.flags),
                    )
                )
                predictions[name] = pred
                result.models[name] = dumps(model)
                report = getattr(model, "solve_report", None)
                if report is not None:
                    result.solves[name] = report.trace
                logger.info(
                    f"{method:>5} m={m_eff:<5d} smae={score:.4f} "
                    f"fit={build_time:.3f}s predict={solve_time:.3f}s"
                )
                result.flags.extend(f"{method} m={m_eff}: {flag}" for flag in model.flags)

        budget = self._budget_table(result.rows)
        if budget:
            result.tables["budget_comparison"] = (list(BUDGET_COLUMNS), budget)
            for fitc_m, seconds, fitc_smae, ski_m, _, ski_smae in budget:
                if not ski_smae < fitc_smae:
                    result.flags.append(
                        f"fitc m={fitc_m}: no SKI run within {seconds:.3g}s beat SMAE {fitc_smae:.4f}"
                    )

        columns = list(predictions)
        result.tables["predictions"] = (
            columns,
            [list(row) for row in zip(*(predictions[c] for c in columns))],
        )
        return result
