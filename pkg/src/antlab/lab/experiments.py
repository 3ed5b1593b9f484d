"""Experiment dispatch and result serialisation."""

from __future__ import annotations

import io
import json
import logging
import math
import os
import random
import tempfile
import time
from dataclasses import dataclass, field

import numpy as np

from .. import constants, dirichlet, gaussian, sequences, sieve
from ..errors import CapacityError, PreconditionError
from .cache import cached_sequence
from .config import ExperimentConfig

log = logging.getLogger(__name__)

try:
    from importlib.metadata import version as _pkg_version

    VERSION = _pkg_version("antlab")
except Exception:  # pragma: no cover - running from a source tree
    VERSION = "0.1.0"


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return "%.17g" % float(v)
    return str(v)


def _plain(v):
    # numpy scalars -> python, non-finite floats -> strings
    if isinstance(v, np.generic):
        v = v.item()
    if isinstance(v, float) and not math.isfinite(v):
        return repr(v)
    if isinstance(v, dict):
        return {k: _plain(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_plain(x) for x in v]
    return v


@dataclass
class ExperimentResult:
    config: dict
    stats: dict = field(default_factory=dict)
    columns: list = field(default_factory=list)
    rows: list = field(default_factory=list)
    wall_time: float = 0.0
    version: str = VERSION

    def to_json(self) -> str:
        # wall time is left out so repeated runs are byte-identical
        obj = {
            "config": self.config,
            "version": self.version,
            "stats": _plain(self.stats),
            "columns": self.columns,
            "rows": _plain(self.rows),
        }
        return json.dumps(obj, indent=2, allow_nan=False) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        if self.rows:
            buf.write(",".join(self.columns) + "\n")
            for r in self.rows:
                buf.write(",".join(_fmt(v) for v in r) + "\n")
        else:
            keys = list(self.stats)
            buf.write(",".join(keys) + "\n")
            buf.write(",".join(_fmt(self.stats[k]) for k in keys) + "\n")
        return buf.getvalue()

    def render(self, fmt: str) -> str:
        return self.to_json() if fmt == "json" else self.to_csv()


def write_atomic(path, text: str):
    d = os.path.dirname(os.path.abspath(path))
    os.makedirs(d, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=d, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _params_for(p, x_key="x"):
    return sequences.SieveParams.standard(p[x_key], X=p.get("X"), varpi=p.get("varpi", 0.1))


def _constants(cfg, p):
    nu = constants.compute_nu(p["prime_limit"])
    J = constants.compute_J(p["tol"])
    stats = {"nu": nu.value, "nu_error": nu.error_bound, "J": J.value, "J_error": J.error_bound}
    return stats, [], []


def _count(cfg, p):
    x = p["x"]
    brute = sequences.brute_force_prime_count(x) if p["brute"] else None
    predicted = None
    if p["predict"]:
        if x < 100:
            log.warning("prediction needs x >= 100; left empty for x=%d", x)
        else:
            nu = constants.compute_nu(p["prime_limit"]).value
            predicted = constants.predicted_main(x, nu, constants.compute_J().value)
    ratio = brute / predicted if brute is not None and predicted else None
    return {}, ["x", "brute_count", "predicted", "ratio"], [[x, brute, predicted, ratio]]


def _running_fsum(values):
    """Correctly rounded prefix sums (Shewchuk partials, as in math.fsum)."""
    partials = []
    for x in values:
        i = 0
        for y in partials:
            if abs(x) < abs(y):
                x, y = y, x
            hi = x + y
            lo = y - (hi - x)
            if lo:
                partials[i] = lo
                i += 1
            x = hi
        partials[i:] = [x]
        yield math.fsum(partials)


def _leveldist(cfg, p):
    params = _params_for(p)
    C = cached_sequence(p["seq"], params, cfg.cache_dir, cfg.threads)
    t = sequences.level_table(C, p["d_max"], p["k"])
    weighted = (t.tau.astype(np.float64) ** t.k * t.remainder).tolist()
    rows = [
        [int(d), float(c), float(m), float(r), acc]
        for d, c, m, r, acc in zip(t.d, t.count, t.model, t.remainder, _running_fsum(weighted))
    ]
    stats = {"weighted_sum": t.weighted_sum, "k": t.k, "mu": params.mu, "elements": len(C)}
    return stats, ["d", "count", "model", "remainder", "weighted_sum"], rows


def _buchstab_rows(rep, params):
    rows = [[k, getattr(rep, k)] for k in ("S1", "S2", "S3", "tail", "sifted", "pi")]
    for name in ("T", "U", "V"):
        for n, v in enumerate(getattr(rep, name), 1):
            rows.append([f"{name}{n}", v])
    return rows


def _buchstab(cfg, p):
    params = _params_for(p)
    if not p["compare"]:
        C = cached_sequence(p["seq"], params, cfg.cache_dir, cfg.threads)
        rep = sieve.buchstab_terms(C, params, cfg.threads)
        rows = _buchstab_rows(rep, params)
        rows += [[f"residual_{k}", v] for k, v in rep.residuals.items()]
        return {"n0": params.n0, "max_relative_residual": rep.max_relative_residual()}, ["quantity", "value"], rows
    ra = sieve.buchstab_terms(cached_sequence("A", params, cfg.cache_dir, cfg.threads), params, cfg.threads)
    rb = sieve.buchstab_terms(cached_sequence("B", params, cfg.cache_dir, cfg.threads), params, cfg.threads)
    a_rows = dict((k, v) for k, v in _buchstab_rows(ra, params))
    b_rows = dict((k, v) for k, v in _buchstab_rows(rb, params))
    x, mu = params.x, params.mu
    rows = []
    for k in a_rows:
        d = a_rows[k] - b_rows.get(k, 0.0)
        rows.append([k, a_rows[k], b_rows.get(k, 0.0), d, d / x, d / mu])
    stats = {"x": x, "mu": mu, "n0": params.n0}
    return stats, ["quantity", "A", "B", "difference", "difference_over_x", "difference_over_mu"], rows


def _bdh(cfg, p):
    x = p["x"]
    Q = p["q_max"]
    if Q is None:
        Q = max(1, math.floor(x * x / math.log(x) ** 5))
    c = dirichlet.prime_weight_sequence(x, p["weights"])
    main = "exact_phi" if p["main"] == "exact" else "x_squared"
    res = dirichlet.bdh_statistic(c, c, Q, main=main, x=x, threads=cfg.threads)
    rows = []
    running = 0.0
    for r in res.rows:
        running += r.partial
        rows.append([r.q, r.classes, r.partial, running])
    stats = {"aggregate": res.aggregate, "Q": Q, "normalized": res.aggregate / float(x) ** 4}
    return stats, ["q", "classes", "partial", "cumulative"], rows


def random_sign_sequence(rng: np.random.Generator, N: int) -> sequences.WeightedSequence:
    n = np.arange(1, N + 1, dtype=np.int64)
    return sequences.WeightedSequence(n, rng.choice([-1.0, 1.0], size=N))


def _equidist(cfg, p):
    rng = np.random.default_rng(cfg.seed)
    g = random_sign_sequence(rng, p["n1"])
    d = random_sign_sequence(rng, p["n2"])
    st = dirichlet.theorem2_statistic(g, d, p["q_max"], p["q0"], threads=cfg.threads)
    stats = {
        "aggregate": st.aggregate,
        "Q": st.Q,
        "Q0": st.Q0,
        "N1": st.N1,
        "N2": st.N2,
        "gamma_tau_norm": st.gamma_tau_norm,
        "delta_tau_norm": st.delta_tau_norm,
        "bound_shape": st.bound_shape,
        "ratio": st.ratio,
    }
    rows = []
    for q in sorted(st.errors):
        E = st.errors[q][3]
        rows.append([q, int(len(E)), float(np.sum(np.abs(E) ** 2))])
    return stats, ["q", "classes", "partial"], rows


def _largesieve(cfg, p):
    rng = np.random.default_rng(cfg.seed)
    rows = []
    for t in range(p["trials"]):
        a = sequences.WeightedSequence(
            np.arange(1, p["n"] + 1, dtype=np.int64),
            rng.standard_normal(p["n"]) + 1j * rng.standard_normal(p["n"]),
        )
        chk = dirichlet.classical_large_sieve_check(a, p["q"])
        rows.append([t, chk.lhs, chk.bound, chk.ratio, chk.holds])
    stats = {"max_ratio": max((r[3] for r in rows), default=0.0), "all_hold": all(r[4] for r in rows)}
    return stats, ["trial", "lhs", "bound", "ratio", "holds"], rows


def _gauss_verify(cfg, p):
    rng = random.Random(cfg.seed)
    n = p["trials"]
    report = gaussian.verify_suite(
        rng,
        census=max(1, n // 10),
        roundtrip=n,
        identities=n,
        classes=p["classes"],
        members=p["members"],
        delta_trials=n,
        countw_trials=n,
    )
    return report, [], []


def _mitsui(cfg, p):
    alpha = gaussian.GaussInt(p["alpha_re"], p["alpha_im"])
    count = gaussian.mitsui_count(p["x"], p["q"], alpha, p["theta"], cfg.threads)
    main = gaussian.mitsui_main(p["x"], p["q"], p["theta"])
    return {}, ["count", "main", "ratio"], [[count, main, count / main if main else None]]


RUNNERS = {
    "constants": _constants,
    "count": _count,
    "leveldist": _leveldist,
    "buchstab": _buchstab,
    "bdh": _bdh,
    "equidist": _equidist,
    "largesieve": _largesieve,
    "gauss-verify": _gauss_verify,
    "mitsui": _mitsui,
}


def run_experiment(config: ExperimentConfig) -> ExperimentResult:
    """Run the named experiment; writes ``config.output`` atomically if set."""
    p = config.resolved()
    t0 = time.perf_counter()
    try:
        stats, columns, rows = RUNNERS[config.experiment](config, p)
    except CapacityError as exc:
        raise CapacityError(f"{config.experiment}: {exc} (reduce the size parameters)") from exc
    except PreconditionError as exc:
        raise PreconditionError(f"{config.experiment}: {exc}") from exc
    wall = time.perf_counter() - t0
    log.info("%s finished in %.3f s", config.experiment, wall)
    result = ExperimentResult(config.echo(), stats, columns, rows, wall)
    if config.output:
        write_atomic(config.output, result.render(config.format))
    return result
