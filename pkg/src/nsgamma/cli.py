"""Command-line front end.

    nsgamma spectrum --config run.cfg [--out spec.csv] [--mode exact|paper]
    nsgamma yield    --config run.cfg
    nsgamma sweep    --config run.cfg --param tau_diss_s --from 1e-20 --to 1e-18 --points 5 --log
    nsgamma validate [--config run.cfg] [--out report.csv]

Exit codes: 0 ok, 2 bad configuration, 3 numeric failure; ``validate``
returns the number of failed checks (capped at 125).
"""

from __future__ import annotations

import argparse
import contextlib
import csv
import io
import json
import sys
from dataclasses import fields

import numpy as np

from . import __version__, oracle, spectrum
from .config import RunConfig
from .spectrum import ConfigError, NumericError
from .units import CONSTANTS, DomainError

EXIT_CONFIG = 2
EXIT_NUMERIC = 3
SWEEP_PARAMS = ("tau_diss_s", "d0_fm", "beta2_0", "beta3_0", "hw2_mev", "hw3_mev")


def fmt(x: float) -> str:
    return f"{x:.8e}"


def _round9(x: float) -> float:
    return float(fmt(x))


def _header(kind: str, cfg: RunConfig) -> list[str]:
    return [f"# nsgamma {kind} {__version__}"] + [f"# {line}" for line in cfg.echo_lines()]


@contextlib.contextmanager
def _open_out(path):
    if path is None or path == "-":
        yield sys.stdout
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            yield fh


def _load_config(args) -> RunConfig:
    cfg = RunConfig.from_file(args.config) if args.config else RunConfig()
    if getattr(args, "mode", None):
        cfg = cfg.with_overrides(mode=args.mode)
    return cfg


# -------------------------------------------------------------- commands


def spectrum_table(cfg: RunConfig) -> str:
    params = cfg.to_params()
    spec = spectrum.build_spectrum(params, cfg.grid_spec(), cfg.mode)
    lines = _header("spectrum", cfg)
    lines.append("hw_mev,dE_dhw_per_mev,dN_dhw_per_mev")
    for row in zip(spec.hw, spec.dE_dhw, spec.dN_dhw):
        lines.append(",".join(fmt(v) for v in row))
    return "\n".join(lines) + "\n"


def yield_summary(cfg: RunConfig) -> dict:
    params = cfg.to_params()
    spec = spectrum.build_spectrum(params, cfg.grid_spec(), cfg.mode)
    e_time = spectrum.total_energy_time_domain(params)
    if params.D0 != 0.0:
        rel = abs(spec.E_total - e_time) / e_time
        _, fwhm = spectrum.resonance_fwhm(params, cfg.mode)
    else:
        rel, fwhm = 0.0, 0.0
    out = {
        "n_gamma_per_fission": spec.N_gamma,
        "e_total_mev": spec.E_total,
        "e_total_time_domain_mev": e_time,
        "parseval_rel_error": rel,
        "peak_hw_mev": spec.peak_hw,
        "fwhm_mev": fwhm,
    }
    out = {k: _round9(v) for k, v in out.items()}
    out["mode"] = cfg.mode
    return out


def sweep_values(start: float, stop: float, points: int, log: bool) -> np.ndarray:
    if not start < stop:
        raise ConfigError("from: must be smaller than --to")
    if points < 2:
        raise ConfigError("points: need at least 2")
    if log:
        if not start > 0.0:
            raise ConfigError("from: log sweep needs a positive start")
        return np.geomspace(start, stop, points)
    return np.linspace(start, stop, points)


def sweep_table(cfg: RunConfig, param: str, values) -> str:
    if param not in SWEEP_PARAMS:
        raise ConfigError(f"param: cannot sweep {param!r}; choose from {SWEEP_PARAMS}")
    lines = _header("sweep", cfg)
    lines.append(f"# sweep = {param}")
    lines.append("param_value,n_gamma_per_fission,e_total_mev")
    for v in values:
        c = cfg.with_overrides(**{param: float(v)})
        params = c.to_params()
        n = spectrum.photon_yield_from_params(params, c.mode)
        lower = 0.0 if c.mode == "exact" else spectrum.pole_ir_cutoff(params)
        e = spectrum.frequency_energy(params, c.mode, lower=lower)
        lines.append(",".join(fmt(x) for x in (v, n, e)))
    return "\n".join(lines) + "\n"


def validation_rows(cfg: RunConfig) -> list[oracle.OracleReport]:
    return oracle.run_validation_suite(cfg.to_params())


def report_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    names = [f.name for f in fields(oracle.OracleReport)]
    w.writerow(names)
    for r in rows:
        w.writerow([fmt(v) if isinstance(v, float) else v for v in (getattr(r, n) for n in names)])
    return buf.getvalue()


def report_text(cfg: RunConfig, rows) -> str:
    lines = [f"nsgamma validate {__version__}"]
    lines += [f"  {k} = {v!r}" for k, v in CONSTANTS.as_dict().items()]
    lines += [f"  {line}" for line in cfg.echo_lines()]
    lines.append("")
    for r in rows:
        status = "PASS" if r.passed else ("WARN" if r.kind == "warning" else "FAIL")
        if r.kind == "info":
            status = "INFO"
        lines.append(
            f"{status:4s}  {r.check_name:34s} ref={fmt(r.reference_value)} "
            f"got={fmt(r.test_value)} err={r.rel_error:.2e} tol={r.tolerance:.1e}"
        )
    failures = count_failures(rows)
    lines.append(f"{failures} failed check(s)")
    return "\n".join(lines) + "\n"


def count_failures(rows) -> int:
    return sum(1 for r in rows if r.kind == "check" and not r.passed)


# ------------------------------------------------------------------ main


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="nsgamma", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, config_required=True):
        sp.add_argument("--config", required=config_required, help="key = value run file")
        sp.add_argument("--out", default=None, help="output path (default: standard output)")
        sp.add_argument("--mode", choices=spectrum.MODES, default=None)

    common(sub.add_parser("spectrum", help="write dE/dhw and dN/dhw as CSV"))
    common(sub.add_parser("yield", help="print photon yield summary as JSON"))
    sw = sub.add_parser("sweep", help="photon yield over a range of one parameter")
    common(sw)
    sw.add_argument("--param", required=True, choices=SWEEP_PARAMS)
    sw.add_argument("--from", dest="start", type=float, required=True)
    sw.add_argument("--to", dest="stop", type=float, required=True)
    sw.add_argument("--points", type=int, default=5)
    sw.add_argument("--log", action="store_true", help="geometric spacing")
    common(sub.add_parser("validate", help="run the oracle cross-checks"), config_required=False)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = _load_config(args)
        if args.command == "spectrum":
            text = spectrum_table(cfg)
        elif args.command == "yield":
            text = json.dumps(yield_summary(cfg), indent=2) + "\n"
        elif args.command == "sweep":
            text = sweep_table(cfg, args.param, sweep_values(args.start, args.stop, args.points, args.log))
        else:
            rows = validation_rows(cfg)
            sys.stdout.write(report_text(cfg, rows))
            if args.out:
                with _open_out(args.out) as fh:
                    fh.write(report_csv(rows))
            return min(count_failures(rows), 125)
    except (ConfigError, DomainError) as exc:
        print(f"nsgamma: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericError as exc:
        print(f"nsgamma: numeric error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    with _open_out(args.out) as fh:
        fh.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
