"""
Command-line entry point.

    skigp <reconstruct|kernel-learn|infill> [--config FILE] [--seed N] [--out DIR]
          [--m-sweep a,b,c] [--scheme s[,s...]] [--lengthscale F] [-v | -q]

Values from the configuration file are overridden by flags. Results land in
the output directory (see :mod:`skigp.cli.manifest`).
"""

import sys
from pathlib import Path
from typing import List, Optional

from loguru import logger

from .. import __version__
from ..core.exceptions import ConfigError, SkiGPError
from .config_file import EXPERIMENTS, ExperimentConfig, load_config
from .experiments import EXPERIMENTS as EXPERIMENT_CLASSES
from .manifest import write_results


def _int_list(text: str) -> List[int]:
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise ConfigError(f"--m-sweep expects comma-separated integers, got {text!r}", field="m_sweep")


def build_parser():
    import argparse

    parser = argparse.ArgumentParser(
        prog="skigp",
        description="Structured kernel interpolation experiments",
    )
    parser.add_argument("experiment", choices=EXPERIMENTS, help="Experiment to run")
    parser.add_argument("-c", "--config", help="Configuration file of (key value...) entries")
    parser.add_argument("--seed", type=int, help="Random seed (default 0)")
    parser.add_argument("-o", "--out", help="Output directory (default results)")
    parser.add_argument("--m-sweep", help="Comma-separated grid / inducing sizes")
    parser.add_argument(
        "--scheme",
        help="Comma-separated schemes (reconstruct: linear,cubic,idw,globalgp,fitc; "
        "infill: ski,fitc,mean)",
    )
    parser.add_argument("--lengthscale", type=float, help="RBF lengthscale")
    verbosity = parser.add_mutually_exclusive_group()
    verbosity.add_argument("-v", "--verbose", action="store_true", help="Debug logging")
    verbosity.add_argument("-q", "--quiet", action="store_true", help="Warnings and errors only")
    parser.add_argument("--version", action="version", version=f"skigp {__version__}")
    return parser


def configure_logging(verbose: bool = False, quiet: bool = False) -> None:
    """Route loguru output to stderr at the requested level."""
    level = "DEBUG" if verbose else "WARNING" if quiet else "INFO"
    logger.remove()
    logger.add(sys.stderr, level=level, format="{time:HH:mm:ss} | {level: <8} | {message}")


def resolve_config(args) -> ExperimentConfig:
    """Defaults, then the configuration file, then command-line flags."""
    base = ExperimentConfig(experiment=args.experiment)
    cfg = load_config(args.config, base) if args.config else base
    if cfg.experiment != args.experiment:
        raise ConfigError(
            f"Configuration is for '{cfg.experiment}' but '{args.experiment}' was requested",
            field="experiment",
            value=cfg.experiment,
        )
    if args.seed is not None:
        cfg.seed = args.seed
    if args.out is not None:
        cfg.out = args.out
    if args.m_sweep is not None:
        cfg.m_sweep = _int_list(args.m_sweep)
    if args.scheme is not None:
        cfg.schemes = [s.strip() for s in args.scheme.split(",") if s.strip()]
    if args.lengthscale is not None:
        cfg.lengthscale = args.lengthscale
    return cfg.validate()


def run(cfg: ExperimentConfig) -> Path:
    """Run the configured experiment and write its results."""
    experiment = EXPERIMENT_CLASSES[cfg.experiment](cfg)
    result = experiment.run()
    return write_results(result, cfg, cfg.out, __version__)


def main(argv: Optional[List[str]] = None) -> int:
    """Main entry point"""
    args = build_parser().parse_args(argv)
    configure_logging(args.verbose, args.quiet)
    try:
        cfg = resolve_config(args)
        manifest = run(cfg)
    except (SkiGPError, OSError) as e:
        logger.error(f"{type(e).__name__}: {e}")
        return 1
    logger.info(f"Run manifest: {manifest}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
