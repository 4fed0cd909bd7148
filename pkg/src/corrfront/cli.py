"""Command-line entry point.

    corrfront [front|moments|rmt|initstate|verify] [--t 10,100] [--s -6:4:0.25]
              [--lambda 0.25,0.5] [--pattern 10] [--nodes 64] [--out FILE]
              [--config FILE] [--jobs N] [--verbose]

Exit codes: 0 success, 1 validation failure, 2 numerical instability, 3 I/O.
"""

from __future__ import annotations

import argparse
import csv
import io
import logging
import math
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import __version__
from .config import COMMANDS, ExperimentConfig, parse_config
from .errors import ConfigError, DomainError, InstabilityError
from .initcond import pattern_report
from .lattice import correlation_block
from .moments import moments, window_index
from .rmt import g_gse, g_goe, predicted_moment, tw1_cdf

__all__ = ["main", "build_parser", "run", "EXIT_OK", "EXIT_VALIDATION", "EXIT_INSTABILITY", "EXIT_IO"]

log = logging.getLogger("corrfront")

EXIT_OK, EXIT_VALIDATION, EXIT_INSTABILITY, EXIT_IO = 0, 1, 2, 3

_VALUE_FLAGS = ("--t", "--s", "--lambda", "--pattern", "--nodes", "--out", "--config", "--jobs", "--sites")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="corrfront", description="Correlation-front statistics of free fermions.")
    p.add_argument("command", nargs="?", choices=COMMANDS, default=None)
    p.add_argument("--t", help="comma-separated times")
    p.add_argument("--s", help="rescaled position grid min:max:step")
    p.add_argument("--lambda", dest="lam", help="comma-separated lambda values")
    p.add_argument("--pattern", help="unit cell(s) as 0/1 strings, comma-separated")
    p.add_argument("--nodes", help="Gauss-Legendre nodes for Fredholm determinants")
    p.add_argument("--out", help="output CSV path, '-' for stdout")
    p.add_argument("--config", help="key = value config file")
    p.add_argument("--jobs", help="worker threads for grid sweeps")
    p.add_argument("--sites", help="half-width of the front grid (0 = automatic)")
    p.add_argument("--verbose", action="store_true", default=None)
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    return p


def _glue_values(argv):
    # "--s -6:4:1" would be read as two options; bind the value explicitly
    out, it = [], iter(argv)
    for arg in it:
        if arg in _VALUE_FLAGS:
            value = next(it, None)
            out.append(arg if value is None else f"{arg}={value}")
        else:
            out.append(arg)
    return out


def config_from_args(argv) -> ExperimentConfig:
    args = build_parser().parse_args(_glue_values(list(argv)))
    flags = {
        "command": args.command,
        "t": args.t,
        "s": args.s,
        "lambda": args.lam,
        "pattern": args.pattern,
        "nodes": args.nodes,
        "out": args.out,
        "jobs": args.jobs,
        "sites": args.sites,
        "verbose": args.verbose,
    }
    return parse_config(args.config, flags)


# ---------------------------------------------------------------------------
# table builders: each returns (header, rows) in deterministic grid order
# ---------------------------------------------------------------------------


def _sweep(cfg, fn, cells):
    if cfg.jobs > 1 and len(cells) > 1:
        with ThreadPoolExecutor(max_workers=cfg.jobs) as pool:
            return list(pool.map(fn, cells))
    return [fn(c) for c in cells]


def _front_table(cfg):
    header = ["t", "m", "n", "abs_C"]
    rows = []
    for t in cfg.t_list:
        half = cfg.sites or int(math.ceil(2 * t)) + 10
        sites = np.arange(-half, half + 1)
        block = np.abs(correlation_block(cfg.pattern, t, sites, sites))
        for i, m in enumerate(sites):
            rows.extend([t, int(m), int(n), block[i, j]] for j, n in enumerate(sites))
    return header, rows


def _moment_cell(pattern):
    def fn(cell):
        t, s = cell
        l = window_index(t, s)
        m = moments(t, l, 2, pattern=pattern, s=s)
        return t, s, l, m[1], m[2]

    return fn


def _moments_table(cfg):
    header = ["t", "s", "l", "M1", "M2", "predicted_M1", "predicted_M2"]
    cells = [(t, s) for t in cfg.t_list for s in cfg.s_values()]
    lattice = _sweep(cfg, _moment_cell(cfg.pattern), cells)
    predicted = {s: (predicted_moment(1, s), predicted_moment(2, s)) for s in cfg.s_values()}
    return header, [[t, s, l, m1, m2, *predicted[s]] for t, s, l, m1, m2 in lattice]


def _rmt_table(cfg):
    header = ["s", "tw1_cdf"]
    for lam in cfg.lambda_list:
        header += [f"g_gse[{lam:g}]", f"g_goe[{lam:g}]"]

    def fn(s):
        row = [s, tw1_cdf(s, cfg.nodes)]
        for lam in cfg.lambda_list:
            row += [g_gse(lam, s, cfg.nodes), g_goe(lam, s, cfg.nodes)]
        return row

    return header, _sweep(cfg, fn, cfg.s_values())


def _initstate_table(cfg):
    header = ["pattern", "t", "s", "l", "M1", "M2", "coefficient", "A1", "A2", "A1_M1", "A2_M2"]
    rows = []
    for p in cfg.patterns:
        report = pattern_report(p)
        cells = [(t, s) for t in cfg.t_list for s in cfg.s_values()]
        for t, s, l, m1, m2 in _sweep(cfg, _moment_cell(p), cells):
            if report.rescale is None:
                rescaled = ["", "", "", ""]
            else:
                a1, a2 = report.rescale
                rescaled = [a1, a2, a1 * m1, a2 * m2]
            rows.append([p, t, s, l, m1, m2, report.coefficient, *rescaled])
    return header, rows


_TABLES = {
    "front": _front_table,
    "moments": _moments_table,
    "rmt": _rmt_table,
    "initstate": _initstate_table,
}


def _cell(v):
    if isinstance(v, (float, np.floating)):
        return f"{float(v):.17g}"
    return str(v)


def format_csv(cfg, header, rows) -> str:
    buf = io.StringIO()
    buf.write(f"# corrfront {__version__} {cfg.describe()}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_cell(v) for v in row])
    return buf.getvalue()


def _emit(text, path, stdout):
    if path == "-":
        stdout.write(text)
        return
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def run(cfg: ExperimentConfig, stdout=None) -> int:
    stdout = stdout or sys.stdout
    if cfg.command == "verify":
        from .verify import run_checks

        return run_checks(stdout, verbose=cfg.verbose)
    header, rows = _TABLES[cfg.command](cfg)
    _emit(format_csv(cfg, header, rows), cfg.output_path, stdout)
    log.info("wrote %d rows to %s", len(rows), cfg.output_path)
    return EXIT_OK


def _setup_logging(verbose, stream):
    logging.basicConfig(level=logging.INFO if verbose else logging.WARNING, stream=stream,
                        format="%(levelname)s %(name)s: %(message)s", force=True)


def main(argv=None, stdout=None, stderr=None) -> int:
    stderr = stderr or sys.stderr
    argv = sys.argv[1:] if argv is None else list(argv)
    _setup_logging("--verbose" in argv, stderr)
    try:
        cfg = config_from_args(argv)
    except ConfigError as exc:
        for problem in exc.problems:
            print(f"config error: {problem}", file=stderr)
        return EXIT_VALIDATION
    except OSError as exc:
        print(f"I/O error: {exc.filename}: {exc.strerror}", file=stderr)
        return EXIT_IO
    except SystemExit as exc:  # argparse usage errors
        return EXIT_OK if exc.code == 0 else EXIT_VALIDATION

    if cfg.verbose:
        _setup_logging(True, stderr)
        for name, src in sorted(cfg.sources.items()):
            log.info("%s taken from %s", name, src)
    try:
        return run(cfg, stdout)
    except InstabilityError as exc:
        print(f"numerical instability: {exc}", file=stderr)
        return EXIT_INSTABILITY
    except DomainError as exc:
        print(f"validation error: {exc}", file=stderr)
        return EXIT_VALIDATION
    except OSError as exc:
        print(f"I/O error: {exc.filename}: {exc.strerror}", file=stderr)
        return EXIT_IO


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
