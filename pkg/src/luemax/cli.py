"""Command-line front end: every computation as a reproducible batch run.

Each subcommand evaluates a grid of inputs through a work pool (size set by
the LUEMAX_THREADS environment variable, default 1; output order always
follows the input grid) and emits one CSV or JSON document whose first
record is the run manifest.  Probabilities are reported in log space first,
with the plain value derived, and floats in CSV carry 17 significant digits
so they round-trip exactly.  The manifest timestamp honors
SOURCE_DATE_EPOCH, so reruns with that variable pinned are byte-identical.
"""

from __future__ import annotations

import argparse
import io
import json
import math
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from csv import writer as csv_writer
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__
from .airyfred import airy_fredholm_logdet, extract_tw_constant
from .asymptotics import (airy_tail, dlnp_dalpha, lnp_small_alpha,
                          lnp_theorem, soft_edge_alpha)
from .errors import DomainError, LuemaxError
from .exactprob import (EnsembleParams, p_scaled, phat_hankel_oracle,
                        phat_projection, sigma_exact)
from .mcsample import SamplerConfig, dump_samples, ks_distance, sample_largest
from .painleve import (pv_residual, s_state_by_differencing,
                       sigma_form_residual, sigma_from_s)
from .specfun import zeta_prime_minus_one

__all__ = ["RunManifest", "main"]

_FD_STEP = 1e-3  # centered-difference step for d ln P / d alpha cross-checks


@dataclass(frozen=True)
class RunManifest:
    """Provenance block embedded in every output document."""

    subcommand: str
    parameters: dict
    version: str
    seed: int | None
    timestamp: str

    def as_dict(self):
        return {
            "subcommand": self.subcommand,
            "version": self.version,
            "seed": self.seed,
            "timestamp": self.timestamp,
            "parameters": {k: self.parameters[k] for k in sorted(self.parameters)},
        }


def _timestamp():
    pinned = os.environ.get("SOURCE_DATE_EPOCH")
    epoch = int(pinned) if pinned else int(time.time())
    return datetime.fromtimestamp(epoch, timezone.utc).strftime(
        "%Y-%m-%dT%H:%M:%SZ")


def _thread_count():
    raw = os.environ.get("LUEMAX_THREADS", "1")
    try:
        count = int(raw)
    except ValueError:
        raise DomainError(f"LUEMAX_THREADS={raw!r} is not an integer") from None
    if count < 1:
        raise DomainError(f"LUEMAX_THREADS={count} must be >= 1")
    return count


def _pool_map(func, items):
    items = list(items)
    workers = min(_thread_count(), max(len(items), 1))
    if workers == 1:
        return [func(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, items))


def _parse_grid(text, label):
    try:
        values = [float(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise DomainError(f"--{label} expects comma-separated numbers, "
                          f"got {text!r}") from None
    if not values:
        raise DomainError(f"--{label} grid is empty")
    return values


def _format_cell(value):
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return "%.17g" % value
    return str(value)


def _json_cell(value):
    if isinstance(value, (np.floating,)):
        return float(value)
    if isinstance(value, (np.integer,)):
        return int(value)
    return value


def _emit(manifest, columns, rows, fmt, out_path):
    if fmt == "json":
        doc = {
            "manifest": manifest.as_dict(),
            "columns": list(columns),
            "rows": [[_json_cell(v) for v in row] for row in rows],
        }
        text = json.dumps(doc, indent=2) + "\n"
    else:
        buf = io.StringIO()
        sink = csv_writer(buf, lineterminator="\n")
        sink.writerow(["manifest", json.dumps(manifest.as_dict(),
                                              sort_keys=True)])
        sink.writerow(columns)
        for row in rows:
            sink.writerow([_format_cell(v) for v in row])
        text = buf.getvalue()
    if out_path:
        Path(out_path).write_text(text)
    else:
        sys.stdout.write(text)


def _manifest(ns, seed=None):
    skip = {"func", "format", "out", "subcommand"}
    params = {k: v for k, v in vars(ns).items()
              if k not in skip and v is not None}
    return RunManifest(subcommand=ns.func.__name__.removeprefix("_cmd_"),
                       parameters=params, version=__version__, seed=seed,
                       timestamp=_timestamp())


def _alpha_t_grid(ns, n):
    if (ns.alpha is None) == (ns.t is None):
        raise DomainError("exactly one of --alpha or --t is required")
    if ns.alpha is not None:
        alphas = _parse_grid(ns.alpha, "alpha")
        return [(a, 4.0 * n * a) for a in alphas]
    ts = _parse_grid(ns.t, "t")
    return [(t / (4.0 * n), t) for t in ts]


def _cmd_exact(ns):
    params = EnsembleParams(ns.n, ns.gamma)
    grid = _alpha_t_grid(ns, ns.n)
    route = phat_hankel_oracle if ns.method == "hankel" else phat_projection

    def row(point):
        alpha, t = point
        lnp = route(params, t).log_value
        return (alpha, t, lnp, math.exp(lnp))

    return _manifest(ns), ("alpha", "t", "ln_p", "p"), _pool_map(row, grid)


def _cmd_asympt(ns):
    if ns.formula == "airy-tail":
        if ns.s is None:
            raise DomainError("--formula airy-tail requires --s")
        grid = _parse_grid(ns.s, "s")
        rows = _pool_map(lambda s: (s, airy_tail(s), "s^-3"), grid)
        return _manifest(ns), ("s", "value", "remainder"), rows
    if ns.alpha is None:
        raise DomainError(f"--formula {ns.formula} requires --alpha")
    if ns.n is None:
        raise DomainError(f"--formula {ns.formula} requires --n")
    grid = _parse_grid(ns.alpha, "alpha")

    def row(alpha):
        if ns.formula == "lemma":
            rep = dlnp_dalpha(ns.n, ns.gamma, alpha)
            return (ns.n, ns.gamma, alpha, rep.value, rep.remainder_order)
        if ns.formula == "theorem":
            rep = lnp_theorem(ns.n, ns.gamma, alpha)
            return (ns.n, ns.gamma, alpha, rep.value, rep.remainder_order)
        return (ns.n, ns.gamma, alpha, lnp_small_alpha(ns.n, ns.gamma, alpha),
                "n alpha")

    return (_manifest(ns), ("n", "gamma", "alpha", "value", "remainder"),
            _pool_map(row, grid))


def _order_column(rows):
    """Append the empirical convergence order ln(D_prev/D_cur)/ln(n_cur/n_prev)."""
    out = []
    for i, (n, exact, approx, diff) in enumerate(rows):
        if i == 0 or diff == 0.0 or rows[i - 1][3] == 0.0:
            order = ""
        else:
            n_prev, d_prev = rows[i - 1][0], rows[i - 1][3]
            order = math.log(d_prev / diff) / math.log(n / n_prev)
        out.append((n, exact, approx, diff, order))
    return out


def _cmd_compare(ns):
    n_list = [int(round(v)) for v in _parse_grid(ns.n_list, "n-list")]
    if (ns.alpha is None) == (ns.s is None):
        raise DomainError("exactly one of --alpha or --s is required")
    if ns.alpha is not None:
        alpha = float(ns.alpha)

        def row(n):
            params = EnsembleParams(n, ns.gamma)
            # 5-point stencil: truncation ~ h^4 n^2 stays below the n^-2
            # expansion remainder out to n ~ 100
            v = [p_scaled(params, alpha + k * _FD_STEP).log_value
                 for k in (-2, -1, 1, 2)]
            fd = (v[0] - 8.0 * v[1] + 8.0 * v[2] - v[3]) / (12.0 * _FD_STEP)
            approx = dlnp_dalpha(n, ns.gamma, alpha).value
            return (n, fd, approx, abs(approx - fd))

        rows = _order_column(_pool_map(row, n_list))
        return (_manifest(ns),
                ("n", "exact_fd", "expansion", "abs_diff", "order"), rows)

    s = float(ns.s)
    ref = airy_fredholm_logdet(s).log_det

    def row(n):
        params = EnsembleParams(n, ns.gamma)
        lnp = p_scaled(params, soft_edge_alpha(n, s)).log_value
        return (n, lnp, ref, abs(lnp - ref))

    rows = _order_column(_pool_map(row, n_list))
    return (_manifest(ns),
            ("n", "ln_p_exact", "airy_logdet", "abs_diff", "order"), rows)


def _cmd_painleve(ns):
    params = EnsembleParams(ns.n, ns.gamma)
    grid = _parse_grid(ns.t, "t")

    def row(t):
        sv = sigma_exact(params, t)
        res_sigma = abs(sigma_form_residual(sv, ns.n, ns.gamma))
        rel_sigma = res_sigma / (1.0 + (t * sv.sigma_double_prime) ** 2)
        st = s_state_by_differencing(ns.n, ns.gamma, t)
        rel_pv = abs(pv_residual(st, ns.n, ns.gamma)) / (
            1.0 + abs(st.s_double_prime))
        bridged = sigma_from_s(t, st.s, st.s_prime, ns.n, ns.gamma)
        rel_bridge = abs(bridged - sv.sigma) / (1.0 + abs(sv.sigma))
        return (t, sv.sigma, sv.sigma_prime, sv.sigma_double_prime,
                rel_sigma, rel_pv, rel_bridge)

    columns = ("t", "sigma", "sigma_prime", "sigma_double_prime",
               "sigma_form_rel", "pv_rel", "bridge_rel")
    return _manifest(ns), columns, _pool_map(row, grid)


def _cmd_mc(ns):
    params = EnsembleParams(ns.n, ns.gamma)
    config = SamplerConfig(params, ns.samples, ns.seed, ns.scaling)
    ecdf = sample_largest(config)
    if ns.dump:
        dump_samples(ecdf, config, ns.dump)
    lo = float(np.quantile(ecdf.samples, 5e-4))
    hi = float(np.quantile(ecdf.samples, 1.0 - 5e-4))
    grid = np.linspace(lo, hi, ns.grid_points)
    if ns.scaling == "scaled":
        exact = lambda x: math.exp(p_scaled(params, x).log_value)
    else:
        exact = lambda x: math.exp(phat_projection(params, x).log_value)
    ks = ks_distance(ecdf, exact, grid)
    band = 1.63 / math.sqrt(ns.samples)
    rows = [(ns.n, ns.gamma, ns.samples, ns.seed, ns.scaling, ks, band,
             ks <= band)]
    columns = ("n", "gamma", "sample_count", "seed", "scaling",
               "ks_distance", "band_99", "within_band")
    return _manifest(ns, seed=ns.seed), columns, rows


def _cmd_tw(ns):
    s_values = _parse_grid(ns.s, "s")
    c0 = extract_tw_constant(s_values)
    reference = math.log(2.0) / 24.0 + zeta_prime_minus_one()
    rows = [(",".join("%g" % s for s in s_values), c0, reference,
             abs(c0 - reference))]
    return (_manifest(ns), ("s_values", "c0", "reference", "abs_error"), rows)


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="luemax",
        description="Largest-eigenvalue distribution of the beta=2 Laguerre "
                    "ensemble: exact finite-n values, large-n expansions, "
                    "Painleve residuals, Airy-tail checks, Monte Carlo.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def common(p):
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--out", default=None, metavar="PATH")

    p = sub.add_parser("exact", help="exact gap probability at finite n")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--gamma", type=float, default=0.0)
    p.add_argument("--alpha", default=None, help="comma-separated grid")
    p.add_argument("--t", default=None, help="comma-separated grid")
    p.add_argument("--method", choices=("projection", "hankel"),
                   default="projection")
    common(p)
    p.set_defaults(func=_cmd_exact)

    p = sub.add_parser("asympt", help="large-n / small-alpha expansions")
    p.add_argument("--formula", required=True,
                   choices=("lemma", "theorem", "small-alpha", "airy-tail"))
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--gamma", type=float, default=0.0)
    p.add_argument("--alpha", default=None, help="comma-separated grid")
    p.add_argument("--s", default=None, help="comma-separated grid")
    common(p)
    p.set_defaults(func=_cmd_asympt)

    p = sub.add_parser("compare", help="exact vs asymptotic with orders")
    p.add_argument("--n-list", required=True, help="comma-separated n values")
    p.add_argument("--gamma", type=float, default=0.0)
    p.add_argument("--alpha", default=None, help="single value")
    p.add_argument("--s", default=None, help="single value")
    common(p)
    p.set_defaults(func=_cmd_compare)

    p = sub.add_parser("painleve", help="ODE residual table")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--gamma", type=float, default=0.0)
    p.add_argument("--t", required=True, help="comma-separated grid")
    common(p)
    p.set_defaults(func=_cmd_painleve)

    p = sub.add_parser("mc", help="Monte Carlo KS report")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--gamma", type=float, default=0.0)
    p.add_argument("--samples", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--scaling", choices=("unscaled", "scaled"),
                   default="unscaled")
    p.add_argument("--grid-points", type=int, default=201)
    p.add_argument("--dump", default=None, metavar="PATH",
                   help="also write raw samples as CSV")
    common(p)
    p.set_defaults(func=_cmd_mc)

    p = sub.add_parser("tw", help="tail-constant extraction report")
    p.add_argument("--s", required=True, help="comma-separated grid")
    common(p)
    p.set_defaults(func=_cmd_tw)

    return parser


def main(argv=None):
    parser = _build_parser()
    ns = parser.parse_args(argv)
    try:
        manifest, columns, rows = ns.func(ns)
        _emit(manifest, columns, rows, ns.format, ns.out)
    except LuemaxError as err:
        print(f"luemax: error: {err}", file=sys.stderr)
        return err.exit_code
    return 0


if __name__ == "__main__":
    sys.exit(main())
