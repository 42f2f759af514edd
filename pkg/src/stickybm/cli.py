"""Command-line entry point: ``stickybm eval | simulate | verify``.

Options can come from ``--config file.json`` (keys are the long option
names with dashes replaced by underscores); explicit flags win.

Exit codes: 0 success, 1 verification failure, 2 invalid input,
3 numerical tolerance not reached.
"""
import argparse
import csv
import io
import json
import sys

import numpy as np

from . import laplace, laws, simulate, verify
from .errors import DomainError, NumericalError, ResourceError
from .stats import atom_fraction, manifest_json, mean_and_se

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_NUMERIC = 0, 1, 2, 3

EVAL_TARGETS = ("trivariate", "bivariate", "reflected", "marginal", "bm_transform",
                "sbm_transform")

DEFAULTS = {
    "theta": 1.0, "x": 0.0, "t": 1.0, "y": None, "tau": None, "l": None,
    "lam": 1.0, "beta": 1.0, "gamma": 1.0, "y_grid": None, "format": "human", "out": None,
    "n": 10_000, "dt": simulate.DEFAULT_DT, "seed": 0, "threads": None,
    "csv": None, "summary": None, "local_time": "bridge",
    "suites": None, "manifest": None, "mc_n": 100_000, "mc_dt": 1e-4, "bm_n": 20_000,
    "dual_values": None, "tol": None,
}


def _f17(x):
    return format(float(x), ".17g")


def _f6(x):
    return format(float(x), ".6g")


def _parse_grid(text):
    lo, hi, num = text.split(":")
    return np.linspace(float(lo), float(hi), int(num))


def build_parser():
    p = argparse.ArgumentParser(prog="stickybm", description=__doc__.splitlines()[0])
    p.add_argument("--config", help="JSON file with option values")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--theta", type=float)
        sp.add_argument("--x", type=float, help="start point x0 >= 0")
        sp.add_argument("--t", type=float, help="horizon")
        sp.add_argument("--seed", type=int)
        sp.add_argument("--threads", type=int)

    ev = sub.add_parser("eval", help="evaluate a law or transform")
    ev.add_argument("what", choices=EVAL_TARGETS)
    common(ev)
    for name in ("y", "tau", "l", "lam", "beta", "gamma"):
        ev.add_argument(f"--{name}", type=float)
    ev.add_argument("--y-grid", help="lo:hi:num, evaluates over a y grid")
    ev.add_argument("--format", choices=("human", "json", "csv"))
    ev.add_argument("--out", help="write output here instead of stdout")

    sim = sub.add_parser("simulate", help="Monte Carlo samples of (S_t, Gamma_t, L_t)")
    common(sim)
    sim.add_argument("--n", type=int)
    sim.add_argument("--dt", type=float)
    sim.add_argument("--local-time", choices=("bridge", "band"))
    sim.add_argument("--csv", help="sample file")
    sim.add_argument("--summary", help="JSON summary file")

    ver = sub.add_parser("verify", help="run verification suites")
    ver.add_argument("suites", nargs="*",
                     help="any of " + ", ".join(verify.SUITES) + " (default: all)")
    ver.add_argument("--seed", type=int)
    ver.add_argument("--threads", type=int)
    ver.add_argument("--mc-n", type=int)
    ver.add_argument("--mc-dt", type=float)
    ver.add_argument("--bm-n", type=int)
    ver.add_argument("--dual-values", help="comma list for the forward dual grid")
    ver.add_argument("--tol", type=float, help="relative tolerance for forward vs closed-form transforms (default 1e-4)")
    ver.add_argument("--manifest", help="manifest output path")
    return p


def resolve(args):
    """Merge defaults < config file < explicit flags into one dict."""
    cfg = dict(DEFAULTS)
    if args.config:
        with open(args.config) as fh:
            cfg.update(json.load(fh))
    for key, val in vars(args).items():
        if val is not None and val != []:
            cfg[key] = val
    return cfg


def _emit(text, out):
    if out:
        with open(out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _require(cfg, *names):
    missing = [n for n in names if cfg.get(n) is None]
    if missing:
        raise DomainError("missing required option(s): " + ", ".join("--" + m for m in missing))


def _params(cfg):
    return laws.StickyParams(cfg["theta"], cfg["x"], cfg["t"])


def _eval_point(what, cfg, y):
    p = _params(cfg)
    if what == "trivariate":
        _require(cfg, "tau", "l")
        return laws.trivariate_from_x(p, y, cfg["tau"], cfg["l"])._asdict()
    if what == "bivariate":
        _require(cfg, "l")
        return laws.bivariate_from_x(p, y, cfg["l"])._asdict()
    if what == "reflected":
        _require(cfg, "l")
        return laws.bivariate_reflected(p, y, cfg["l"])._asdict()
    if what == "marginal":
        return laws.position_marginal(p, y)._asdict()
    d = laplace.DualTriple(cfg["lam"], cfg["beta"], cfg["gamma"])
    if what == "bm_transform":
        return {"value": laplace.bm_transform(d, y)}
    return {"value": laplace.sbm_transform(d, cfg["theta"], y)}


def cmd_eval(cfg):
    what = cfg["what"]
    if cfg["y_grid"]:
        ys = _parse_grid(cfg["y_grid"])
    else:
        _require(cfg, "y")
        ys = np.array([cfg["y"]])
    rows = [{"y": float(y), **_eval_point(what, cfg, float(y))} for y in ys]
    if what == "marginal" and cfg["y_grid"]:
        p = _params(cfg)
        cum = laws.position_cdf_table(p, ys)
        atom = rows[0]["atom"]
        for r, c in zip(rows, cum):
            r["cumulative"] = float(c + (atom if r["y"] >= 0 else 0.0))
    fmt = cfg["format"]
    if fmt == "json":
        text = json.dumps([{k: float(_f17(v)) for k, v in r.items()} for r in rows],
                          indent=2) + "\n"
    elif fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\r\n")
        w.writerow(list(rows[0]))
        for r in rows:
            w.writerow([_f17(v) for v in r.values()])
        text = buf.getvalue()
    else:
        text = "".join("  ".join(f"{k}={_f6(v)}" for k, v in r.items()) + "\n" for r in rows)
    _emit(text, cfg["out"])
    return EXIT_OK


def samples_csv(batch):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\r\n")
    w.writerow(["s_t", "gamma_t", "l_t", "stuck"])
    for s, g, l, st in zip(batch.s_t, batch.gamma_t, batch.l_t, batch.stuck):
        w.writerow([_f17(s), _f17(g), _f17(l), int(st)])
    return buf.getvalue()


def summary_dict(batch):
    p, se = atom_fraction(batch)
    out = {"meta": batch.meta, "atom_fraction": p, "atom_fraction_se": se}
    for name in ("s_t", "gamma_t", "l_t"):
        m, s = mean_and_se(getattr(batch, name))
        out[f"mean_{name}"] = m
        out[f"mean_{name}_se"] = s
    return out


def cmd_simulate(cfg):
    p = _params(cfg)
    batch = simulate.sample_sbm_batch(p, cfg["n"], cfg["dt"], seed=cfg["seed"],
                                      threads=cfg["threads"], local_time=cfg["local_time"])
    if cfg["csv"]:
        _emit(samples_csv(batch), cfg["csv"])
    summary = summary_dict(batch)
    text = json.dumps(summary, indent=2, sort_keys=True,
                      default=lambda o: None) + "\n"
    if cfg["summary"]:
        _emit(text, cfg["summary"])
    else:
        sys.stdout.write(f"atom fraction {_f6(summary['atom_fraction'])} "
                         f"+- {_f6(summary['atom_fraction_se'])}\n")
        for name in ("s_t", "gamma_t", "l_t"):
            sys.stdout.write(f"mean {name} {_f6(summary['mean_' + name])} "
                             f"+- {_f6(summary['mean_' + name + '_se'])}\n")
    return EXIT_OK


def cmd_verify(cfg):
    names = cfg["suites"] or list(verify.SUITES)
    unknown = [n for n in names if n not in verify.SUITES]
    if unknown:
        raise DomainError("unknown suite(s): " + ", ".join(unknown))
    reports = []
    for name in names:
        if name == "montecarlo":
            r = verify.suite_montecarlo(n=cfg["mc_n"], dt=cfg["mc_dt"], seed=cfg["seed"],
                                        threads=cfg["threads"])
        elif name == "bm-limit":
            r = verify.suite_bm_limit(n=cfg["bm_n"], dt=cfg["mc_dt"], seed=cfg["seed"] + 1,
                                      threads=cfg["threads"])
        elif name == "laplace-forward":
            kw = {}
            if cfg["dual_values"]:
                kw["values"] = tuple(float(v) for v in str(cfg["dual_values"]).split(","))
            if cfg["tol"] is not None:
                kw["tolerance"] = cfg["tol"]
            r = verify.suite_laplace_forward(**kw)
        else:
            r = verify.SUITES[name]()
        reports.extend(r)
        for rep in r:
            sys.stdout.write(rep.line() + "\n")
    config = {k: cfg[k] for k in ("seed", "mc_n", "mc_dt", "bm_n", "dual_values", "tol")}
    config["suites"] = names
    text = manifest_json(reports, config)
    if cfg["manifest"]:
        _emit(text, cfg["manifest"])
    failed = [r.name for r in reports if not r.passed]
    if failed:
        sys.stderr.write("failed: " + "; ".join(failed) + "\n")
        return EXIT_FAIL
    return EXIT_OK


COMMANDS = {"eval": cmd_eval, "simulate": cmd_simulate, "verify": cmd_verify}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = resolve(args)
        return COMMANDS[cfg["command"]](cfg)
    except (DomainError, ValueError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INPUT
    except NumericalError as exc:
        sys.stderr.write(f"numerical error: {exc}\n")
        return EXIT_NUMERIC
    except ResourceError as exc:
        sys.stderr.write(f"resource error: {exc}\n")
        return EXIT_NUMERIC
    except OSError as exc:
        sys.stderr.write(f"io error: {exc}\n")
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
