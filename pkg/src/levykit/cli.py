"""levykit command line: JSON in, CSV or JSON out.

Exit codes: 0 pass, 1 domain failure or tolerance exceeded, 2 usage or
parse error.  Every CSV starts with ``# levykit <command> v1``.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .exceptions import (AlphaOutOfRange, EmptyJumpDistribution, InvalidMeasure, InvalidTriplet,
                         LevyKitError, NonPositiveRadius, NotInIDAlpha, ExistenceFailed)
from .free_bridge import bridge_check
from .integral_map import (CharFn, free_log_cf, inverse_map_exponential, inverse_map_tempered,
                           map_cf, map_triplet, tempered_stable_map)
from .levy_core import Atoms, LevyTriplet, levy_exponent, validate_levy_measure
from .mixing import Exponential, RhoAlpha, check_mixture_integrability
from .sampler import (SimulationScheme, empirical_cf, sample_random_integral,
                      stable_limit_experiment)
from .serialization import load_measure, load_mixing, load_triplet, parse_real_measure

EXIT_OK, EXIT_DOMAIN, EXIT_USAGE = 0, 1, 2

# errors that mean the input itself is unusable
_PARSE_ERRORS = (InvalidTriplet, InvalidMeasure, NonPositiveRadius, FileNotFoundError,
                 json.JSONDecodeError)


class UsageError(Exception):
    pass


@dataclass
class JobConfig:
    command: str
    triplet: Path | None = None
    mixing: Path | None = None
    out: Path | None = None
    grid: tuple = (-2.0, 2.0, 21)
    n: int = 100_000
    seed: int = 0
    alpha: float | None = None
    tolerance: float | None = None
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        for p in (self.triplet, self.mixing):
            if p is not None and not Path(p).is_file():
                raise UsageError(f"no such file: {p}")
        a, b, k = self.grid
        if k < 1 or not (math.isfinite(a) and math.isfinite(b)):
            raise UsageError("grid needs finite ends and at least one point")
        if self.n < 1:
            raise UsageError("--n must be positive")
        if not 0 <= self.seed < 2 ** 64:
            raise UsageError("--seed must fit in an unsigned 64-bit integer")
        if self.tolerance is not None and not self.tolerance > 0:
            raise UsageError("--tolerance must be positive")

    def grid_points(self):
        a, b, k = self.grid
        return np.linspace(a, b, int(k))


def parse_grid(text):
    parts = text.split(":")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError("grid must look like a:b:n")
    try:
        return float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def parse_floats(text):
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


# ------------------------------------------------------------------ output

def _emit_csv(cfg, header, rows, comments=()):
    buf = io.StringIO()
    buf.write(f"# levykit {cfg.command} v1\n")
    for c in comments:
        buf.write(f"# {c}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([_fmt(v) for v in r])
    _write(cfg, buf.getvalue())


def _emit_json(cfg, obj):
    _write(cfg, json.dumps(obj, indent=2, default=_json_default) + "\n")


def _write(cfg, text):
    if cfg.out is None:
        sys.stdout.write(text)
    else:
        Path(cfg.out).write_text(text)


def _fmt(v):
    if isinstance(v, (bool, np.bool_)):
        return "1" if v else "0"
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def _json_default(o):
    if isinstance(o, np.ndarray):
        return o.tolist()
    if isinstance(o, np.generic):
        return o.item()
    if isinstance(o, float) and not math.isfinite(o):
        return str(o)
    raise TypeError(f"not serialisable: {type(o)}")


def _direction(t, cfg):
    d = cfg.extra.get("direction")
    if d is None:
        u = np.zeros(t.dim)
        u[0] = 1.0
        return u
    u = np.asarray(d, dtype=float)
    if u.shape != (t.dim,) or not np.any(u):
        raise UsageError(f"--direction needs {t.dim} components, not all zero")
    return u / np.linalg.norm(u)


def _mixing(cfg, required=True):
    if cfg.alpha is not None and cfg.mixing is not None:
        raise UsageError("give --mixing or --alpha, not both")
    if cfg.alpha is not None:
        if not 0 < cfg.alpha < 2:
            raise AlphaOutOfRange("alpha must lie in (0, 2)")
        return RhoAlpha(cfg.alpha)
    if cfg.mixing is not None:
        return load_mixing(cfg.mixing)
    if required:
        raise UsageError("this command needs --mixing or --alpha")
    return None


def _need_triplet(cfg):
    if cfg.triplet is None:
        raise UsageError(f"{cfg.command} needs --triplet")
    return load_triplet(cfg.triplet)


# ---------------------------------------------------------------- commands

def cmd_validate(cfg):
    if cfg.triplet is None:
        raise UsageError("validate needs --triplet")
    # a measure that fails the Levy test is a domain result here, not bad input
    M = load_measure(cfg.triplet)
    lam = _mixing(cfg, required=False)
    if lam is None:
        diag = validate_levy_measure(M)
        _emit_json(cfg, diag.to_dict())
        return EXIT_OK if diag.is_levy else EXIT_DOMAIN
    diag = check_mixture_integrability(M, lam)
    _emit_json(cfg, diag.to_dict())
    if not diag.is_levy:
        print(f"mixture is not a Levy measure: {diag.to_dict()['breakdown']}", file=sys.stderr)
    return EXIT_OK if diag.is_levy else EXIT_DOMAIN


def cmd_map(cfg):
    t = _need_triplet(cfg)
    lam = _mixing(cfg)
    tol = 1e-8 if cfg.tolerance is None else cfg.tolerance
    mapped = tempered_stable_map(t, cfg.alpha) if cfg.alpha is not None else map_triplet(t, lam)
    u = _direction(t, cfg)
    ys = cfg.grid_points()
    Y = ys[:, None] * u[None, :]
    src = levy_exponent(t, Y)[0]
    out = levy_exponent(mapped.output, Y)[0]
    header = ["y", "re_input", "im_input", "re_mapped", "im_mapped"]
    cols = [ys, src.real, src.imag, out.real, out.imag]
    # the transform path must reproduce the mapped triplet
    diff = float(np.max(np.abs(map_cf(CharFn.from_triplet(t), lam).log_cf(Y) - out)))
    if isinstance(lam, Exponential):
        free = free_log_cf(t, Y)
        header += ["re_free_kernel", "im_free_kernel"]
        cols += [free.real, free.imag]
        diff = max(diff, float(np.max(np.abs(free - out))))
    comments = [f"path_discrepancy={diff!r}", f"tolerance={tol!r}"]
    _emit_csv(cfg, header, zip(*cols), comments)
    if diff > tol:
        print(f"map paths disagree by {diff:.3g} > {tol:.3g}", file=sys.stderr)
        return EXIT_DOMAIN
    return EXIT_OK


def _scheme(cfg, lam):
    eps = cfg.extra.get("eps")
    kw = {} if eps is None else {"jump_truncation": eps}
    return SimulationScheme(seed=cfg.seed, **kw)


def cmd_sample(cfg):
    t = _need_triplet(cfg)
    lam = _mixing(cfg)
    scheme = _scheme(cfg, lam)
    batch = sample_random_integral(t, lam, scheme, cfg.n)
    header = [f"x{k + 1}" for k in range(t.dim)]
    _emit_csv(cfg, header, batch.draws,
              [f"n={batch.n}", f"seed={cfg.seed}", f"declared_bias={batch.declared_bias!r}"])
    if cfg.out is not None:
        Path(str(cfg.out) + ".scheme.json").write_text(batch.scheme_json())
    return EXIT_OK


def cmd_verify_cf(cfg):
    t = _need_triplet(cfg)
    lam = _mixing(cfg)
    scheme = _scheme(cfg, lam)
    batch = sample_random_integral(t, lam, scheme, cfg.n)
    u = _direction(t, cfg)
    ys = cfg.grid_points()
    Y = ys[:, None] * u[None, :]
    emp = empirical_cf(batch, Y).values
    exact = np.exp(map_cf(CharFn.from_triplet(t), lam).log_cf(Y))
    band = (3.0 if cfg.tolerance is None else cfg.tolerance) / math.sqrt(batch.n) + batch.declared_bias
    err = np.abs(emp - exact)
    rows = zip(ys, emp.real, emp.imag, exact.real, exact.imag, err, np.full(len(ys), band), err <= band)
    _emit_csv(cfg, ["y", "re_empirical", "im_empirical", "re_analytic", "im_analytic",
                    "abs_diff", "band", "pass"], rows,
              [f"n={batch.n}", f"seed={cfg.seed}", f"declared_bias={batch.declared_bias!r}"])
    if np.any(err > band):
        print(f"empirical CF leaves the band at {int(np.sum(err > band))} grid points", file=sys.stderr)
        return EXIT_DOMAIN
    return EXIT_OK


def _bridge_partner(text):
    """Classical triplet whose e-image is the free counterpart of ``text``."""
    name, *args = text.split(":")
    vals = [float(a) for a in args]
    if name == "semicircle":
        v = vals[0] if vals else 1.0
        return LevyTriplet.gaussian([[v]])
    if name == "free_poisson":
        rate = vals[0] if vals else 1.0
        jump = vals[1] if len(vals) > 1 else 1.0
        shift = rate * jump if abs(jump) <= 1 else 0.0
        return LevyTriplet([shift], [[0.0]], Atoms([[jump]], [rate]))
    if name == "point":
        return LevyTriplet([vals[0] if vals else 0.0], [[0.0]])
    raise UsageError(f"no default classical partner for {name!r}; pass --triplet")


def cmd_free_bridge(cfg):
    text = cfg.extra.get("nu")
    if not text:
        raise UsageError("free-bridge needs --nu")
    nu = parse_real_measure(text)
    t = load_triplet(cfg.triplet) if cfg.triplet is not None else _bridge_partner(text)
    if t.dim != 1:
        raise UsageError("the bridge lives on the real line")
    tol = 1e-5 if cfg.tolerance is None else cfg.tolerance
    ts = cfg.grid_points()
    if np.any(ts <= 0):
        raise UsageError("free-bridge grid must be positive, e.g. 0.1:3:30")
    disc = [bridge_check(t, nu, [s]) for s in ts]
    _emit_csv(cfg, ["t", "discrepancy", "pass"], ((s, d, d <= tol) for s, d in zip(ts, disc)),
              [f"nu={text}", f"tolerance={tol!r}"])
    return EXIT_OK if max(disc) <= tol else EXIT_DOMAIN


def cmd_stable_limit(cfg):
    t = _need_triplet(cfg)
    if cfg.alpha is None:
        raise UsageError("stable-limit needs --alpha")
    s_list = cfg.extra.get("s") or [1.0, 0.1, 0.01, 0.001]
    tol = 1e-2 if cfg.tolerance is None else cfg.tolerance
    u = _direction(t, cfg)
    Y = cfg.grid_points()[:, None] * u[None, :]
    table = stable_limit_experiment(t.levy_measure, cfg.alpha, s_list, Y)
    _emit_csv(cfg, ["s", "discrepancy"], table.rows(),
              [f"alpha={cfg.alpha!r}", f"c_alpha={table.c_alpha!r}",
               f"strictly_decreasing={table.strictly_decreasing}", f"tolerance={tol!r}"])
    ok = table.strictly_decreasing and table.discrepancy[-1] <= tol
    return EXIT_OK if ok else EXIT_DOMAIN


def cmd_invert(cfg):
    t = _need_triplet(cfg)
    lam = _mixing(cfg)
    tol = 1e-3 if cfg.tolerance is None else cfg.tolerance
    mapped = map_cf(CharFn.from_triplet(t), lam)
    u = _direction(t, cfg)
    ys = cfg.grid_points()
    rows, worst = [], 0.0
    for y in ys:
        yv = y * u
        truth = complex(levy_exponent(t, yv[None, :])[0][0])
        if isinstance(lam, Exponential):
            rec = inverse_map_exponential(mapped, yv)
        elif isinstance(lam, RhoAlpha):
            rec = inverse_map_tempered(mapped, lam.alpha, yv)
        else:
            raise UsageError("inversion is available for exponential and rho_alpha mixing")
        rel = abs(rec - truth) / abs(truth) if truth != 0 else abs(rec)
        worst = max(worst, rel)
        rows.append((y, truth.real, truth.imag, rec.real, rec.imag, rel, rel <= tol))
    _emit_csv(cfg, ["y", "re_true", "im_true", "re_recovered", "im_recovered", "rel_error", "pass"],
              rows, [f"tolerance={tol!r}"])
    return EXIT_OK if worst <= tol else EXIT_DOMAIN


COMMANDS = {
    "validate": cmd_validate,
    "map": cmd_map,
    "sample": cmd_sample,
    "verify-cf": cmd_verify_cf,
    "free-bridge": cmd_free_bridge,
    "stable-limit": cmd_stable_limit,
    "invert": cmd_invert,
}


def build_parser():
    p = argparse.ArgumentParser(prog="levykit", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"levykit {__version__}")
    sub = p.add_subparsers(dest="command", required=True)
    helps = {
        "validate": "check a Levy measure, or its mixture when --mixing/--alpha is given",
        "map": "log-CF of a triplet and of its random-integral image on a grid",
        "sample": "draw samples of the random integral",
        "verify-cf": "compare the empirical CF of samples with the analytic image CF",
        "free-bridge": "compare a free transform with the exponential image log-CF",
        "stable-limit": "discrepancy table of rescaled tempered laws against the stable limit",
        "invert": "recover the source log-CF from its image by Laplace inversion",
    }
    for name, h in helps.items():
        s = sub.add_parser(name, help=h)
        s.add_argument("--triplet", type=Path)
        s.add_argument("--mixing", type=Path)
        s.add_argument("--alpha", type=float)
        s.add_argument("--grid", type=parse_grid, default=None, help="a:b:n")
        s.add_argument("--n", type=int, default=100_000)
        s.add_argument("--seed", type=int, default=0)
        s.add_argument("--out", type=Path)
        s.add_argument("--tolerance", type=float)
        s.add_argument("--direction", type=parse_floats, help="comma separated, for d > 1")
        if name in ("sample", "verify-cf"):
            s.add_argument("--eps", type=float, help="jump truncation radius")
        if name == "free-bridge":
            s.add_argument("--nu", required=True,
                           help="semicircle[:var], free_poisson[:rate[:jump]], point:c, cauchy[:scale]")
        if name == "stable-limit":
            s.add_argument("--s", type=parse_floats, help="comma separated scale list")
    return p


_DEFAULT_GRIDS = {"free-bridge": (0.1, 3.0, 30), "invert": (-0.5, 0.5, 11)}


def config_from_args(ns) -> JobConfig:
    extra = {k: getattr(ns, k) for k in ("direction", "eps", "nu", "s") if getattr(ns, k, None) is not None}
    grid = ns.grid or _DEFAULT_GRIDS.get(ns.command, (-2.0, 2.0, 21))
    return JobConfig(ns.command, ns.triplet, ns.mixing, ns.out, grid, ns.n, ns.seed,
                     ns.alpha, ns.tolerance, extra)


def main(argv=None):
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = config_from_args(ns)
        return COMMANDS[cfg.command](cfg)
    except UsageError as exc:
        print(f"levykit: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except _PARSE_ERRORS as exc:
        print(f"levykit: invalid input: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ExistenceFailed as exc:
        print(f"levykit: {exc}", file=sys.stderr)
        print(json.dumps(exc.report.to_dict(), indent=2, default=_json_default), file=sys.stderr)
        return EXIT_DOMAIN
    except (AlphaOutOfRange, NotInIDAlpha, EmptyJumpDistribution, LevyKitError) as exc:
        print(f"levykit: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
