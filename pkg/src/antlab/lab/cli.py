"""The ``antlab`` command line."""

from __future__ import annotations

import argparse
import logging
import sys

from ..errors import AntlabError
from ..parallel import set_default_threads
from .config import DEFAULT_SEED, ExperimentConfig, read_config_file
from .experiments import run_experiment


def _globals(parser, suppress):
    d = argparse.SUPPRESS if suppress else None
    g = parser.add_argument_group("global options")
    g.add_argument("--config", metavar="PATH", default=d)
    g.add_argument("--threads", type=int, metavar="N", default=d)
    g.add_argument("--seed", type=int, metavar="S", default=d)
    g.add_argument("--out", metavar="PATH", default=d)
    g.add_argument("--format", choices=("csv", "json"), default=d)
    g.add_argument("-v", "--verbose", action="store_true", default=d if suppress else False)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="antlab", description="Desk-scale experiments on primes of the form a^2 + p^4.")
    _globals(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True)

    def cmd(name, help_, experiment=None, parent=sub):
        p = parent.add_parser(name, help=help_)
        _globals(p, suppress=True)
        p.set_defaults(experiment=experiment or name)
        return p

    S = argparse.SUPPRESS
    p = cmd("constants", "nu and J with error bounds")
    p.add_argument("--prime-limit", dest="prime_limit", default=S)
    p.add_argument("--tol", default=S)

    p = cmd("count", "brute-force prime count against the predicted main term")
    p.add_argument("--x", default=S)
    p.add_argument("--brute", action="store_const", const="true", default=S)
    p.add_argument("--predict", action="store_const", const="true", default=S)

    p = cmd("leveldist", "remainders R_d for d <= D")
    p.add_argument("--x", default=S)
    p.add_argument("--d-max", dest="d_max", default=S)
    p.add_argument("--k", default=S)
    p.add_argument("--seq", choices=("A", "B"), default=S)

    p = cmd("buchstab", "Buchstab decomposition terms and residuals")
    p.add_argument("--x", default=S)
    p.add_argument("--seq", choices=("A", "B"), default=S)
    p.add_argument("--varpi", default=S)
    p.add_argument("--compare", action="store_const", const="true", default=S)

    p = cmd("bdh", "Barban-Davenport-Halberstam statistic for prime weights")
    p.add_argument("--x", default=S)
    p.add_argument("--q-max", dest="q_max", default=S)
    p.add_argument("--weights", choices=("lambda", "theta"), default=S)
    p.add_argument("--main", choices=("exact", "x2"), default=S)

    p = cmd("equidist", "large-moduli equidistribution statistic for random bilinear data")
    p.add_argument("--n1", default=S)
    p.add_argument("--n2", default=S)
    p.add_argument("--q-max", dest="q_max", default=S)
    p.add_argument("--q0", default=S)

    p = cmd("largesieve", "multiplicative large sieve ratios on random vectors")
    p.add_argument("--n", default=S)
    p.add_argument("--q", default=S)
    p.add_argument("--trials", default=S)

    g = sub.add_parser("gauss", help="Gaussian-integer checks")
    gsub = g.add_subparsers(dest="gauss_command", required=True)
    p = cmd("verify", "randomised Gaussian-integer invariant suite", "gauss-verify", gsub)
    p.add_argument("--trials", default=S)
    p.add_argument("--classes", default=S)
    p.add_argument("--members", default=S)

    p = cmd("mitsui", "Gaussian primes in a residue class and sector")
    p.add_argument("--x", default=S)
    p.add_argument("--q", default=S)
    p.add_argument("--theta", default=S)
    p.add_argument("--alpha-re", dest="alpha_re", default=S)
    p.add_argument("--alpha-im", dest="alpha_im", default=S)
    return parser


_GLOBAL_KEYS = {"config", "threads", "seed", "out", "format", "verbose", "command", "gauss_command", "experiment"}


def config_from_args(ns: argparse.Namespace) -> ExperimentConfig:
    values = vars(ns)
    file_values = read_config_file(values["config"]) if values.get("config") else {}
    file_values.pop("experiment", None)
    seed = file_values.pop("seed", None)
    threads = file_values.pop("threads", None)
    fmt = file_values.pop("format", None)
    out = file_values.pop("out", None)
    params = dict(file_values)
    params.update({k: v for k, v in values.items() if k not in _GLOBAL_KEYS and v is not None})
    return ExperimentConfig(
        experiment=values["experiment"],
        parameters=params,
        seed=values["seed"] if values.get("seed") is not None else int(seed) if seed else DEFAULT_SEED,
        output=values.get("out") or out,
        threads=values["threads"] if values.get("threads") is not None else int(threads) if threads else None,
        format=values.get("format") or fmt,
    )


def main(argv=None) -> int:
    ns = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if ns.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = config_from_args(ns)
        set_default_threads(cfg.threads)
        result = run_experiment(cfg)
    except (AntlabError, OSError) as exc:
        print(f"antlab: error: {exc}", file=sys.stderr)
        return 2
    if not cfg.output:
        sys.stdout.write(result.render(cfg.format))
    return 0


if __name__ == "__main__":
    sys.exit(main())
