"""Command-line front end.

Configuration is a flat key-value document with dotted section keys::

    model.m = 1
    model.r = 0.5
    model.gamma = 1.0
    model.delta = 1.0
    model.q = 1
    n_modes = 128
    initial.kind = gaussian
    integrator.dt = 1e-3
    integrator.t_end = 1.0
    outputs = out

Lines starting with '#' are comments; unknown or duplicate keys are
rejected.  Subcommands: solve, converge, soliton, invariants.  Values can
be overridden on the command line with repeated ``--override key=value``.

Exit codes: 0 success, 2 configuration or validation error, 3 divergence
of a time integration.  Diagnostics go to stderr; results go to files in
the output directory (plus stdout for the ``invariants`` table).  A run
manifest is written exactly once per run, last, even when the run fails.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass
from pathlib import Path

from . import __version__
from .errors import ConfigError, DivergenceError, ParameterError, ShapeError
from .harness import IntegratorPolicy, self_convergence, soliton_propagation_test
from .initdata import KINDS, InitialDataSpec, build_field
from .invariants import c_pi, e_pi, i_pi, record_invariants
from .model import ModelParams
from .snapshots import SnapshotFormatError, read_snapshot, write_snapshot
from .timestep import IntegratorConfig, default_dt, evolve

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_DIVERGED = 3


def _fmt(x: float) -> str:
    return f"{x:.17g}"


# Schema: key -> (parser, default).  REQUIRED marks keys with no default;
# None defaults mean "derived later".
_REQUIRED = object()


def _parse_bool(s: str) -> bool:
    low = s.lower()
    if low in ("true", "1", "yes"):
        return True
    if low in ("false", "0", "no"):
        return False
    raise ValueError(f"expected a boolean, got {s!r}")


def _parse_int_list(s: str) -> list:
    return [int(p) for p in s.replace(" ", "").split(",") if p]


_SCHEMA = {
    "model.m": (int, 1),
    "model.r": (float, 0.5),
    "model.gamma": (float, 1.0),
    "model.delta": (float, 1.0),
    "model.q": (int, 1),
    "model.domain_scale": (float, 1.0),
    "n_modes": (int, _REQUIRED),
    "seed": (int, 0),
    "outputs": (str, "out"),
    "initial.kind": (str, "gaussian"),
    "initial.amplitude": (float, 1.0),
    "initial.width": (float, 0.5),
    "initial.center": (float, 0.0),
    "initial.speed": (float, 0.5),
    "initial.regularity": (float, 4.0),
    "initial.seed": (int, None),
    "initial.path": (str, None),
    "initial.tol": (float, 1e-10),
    "initial.max_iter": (int, 500),
    "integrator.method": (str, "etdrk4"),
    "integrator.dt": (float, None),
    "integrator.t_end": (float, 1.0),
    "integrator.snapshot_stride": (int, 10),
    "converge.n_values": (_parse_int_list, None),
    "converge.n_ref": (int, None),
    "converge.t_star": (float, None),
    "converge.track_max": (_parse_bool, False),
    "soliton.c": (float, 0.5),
    "soliton.t_star": (float, None),
    "soliton.dt": (float, None),
}


@dataclass(frozen=True)
class RunConfig:
    model: ModelParams
    initial: InitialDataSpec
    integrator: IntegratorConfig
    n_modes: int
    outputs: Path
    seed: int
    raw: dict  # resolved key -> value, echoed into the manifest


def _read_pairs(text: str) -> dict:
    pairs = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            raise ConfigError(
                f"line {lineno}: expected 'key = value', got {stripped!r}", line=lineno
            )
        key, value = stripped.split("=", 1)
        key, value = key.strip(), value.split("#", 1)[0].strip()
        if key not in _SCHEMA:
            raise ConfigError(f"line {lineno}: unknown key {key!r}", key=key, line=lineno)
        if key in pairs:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}", key=key, line=lineno)
        pairs[key] = value
    return pairs


def _apply_overrides(pairs: dict, overrides) -> dict:
    for item in overrides or []:
        if "=" not in item:
            raise ConfigError(f"override must be key=value, got {item!r}")
        key, value = item.split("=", 1)
        key = key.strip()
        if key not in _SCHEMA:
            raise ConfigError(f"unknown override key {key!r}", key=key)
        pairs[key] = value.strip()
    return pairs


def _resolve(pairs: dict) -> dict:
    resolved = {}
    for key, (parser, default) in _SCHEMA.items():
        if key in pairs:
            try:
                resolved[key] = parser(pairs[key])
            except ValueError as exc:
                raise ConfigError(f"key {key!r}: {exc}", key=key) from exc
        elif default is _REQUIRED:
            raise ConfigError(f"missing required key {key!r}", key=key)
        else:
            resolved[key] = default
    return resolved


def parse_config(text: str, overrides=None) -> RunConfig:
    """Parse and fully validate a configuration document."""
    pairs = _apply_overrides(_read_pairs(text), overrides)
    r = _resolve(pairs)

    model = ModelParams(
        m=r["model.m"],
        r=r["model.r"],
        gamma=r["model.gamma"],
        delta=r["model.delta"],
        q=r["model.q"],
        domain_scale=r["model.domain_scale"],
    )
    n_modes = r["n_modes"]
    if n_modes < 1:
        raise ConfigError(f"n_modes must satisfy N >= 1, got {n_modes}", key="n_modes")

    if r["initial.kind"] not in KINDS:
        raise ConfigError(
            f"initial.kind must be one of {KINDS}, got {r['initial.kind']!r}",
            key="initial.kind",
        )
    initial = InitialDataSpec(
        kind=r["initial.kind"],
        amplitude=r["initial.amplitude"],
        width=r["initial.width"],
        center=r["initial.center"],
        speed=r["initial.speed"],
        regularity=r["initial.regularity"],
        seed=r["initial.seed"] if r["initial.seed"] is not None else r["seed"],
        path=r["initial.path"],
        tol=r["initial.tol"],
        max_iter=r["initial.max_iter"],
    )

    t_end = r["integrator.t_end"]
    dt = r["integrator.dt"]
    if dt is None:
        dt = min(default_dt(model, n_modes), t_end)
        r = dict(r)
        r["integrator.dt"] = dt
    integrator = IntegratorConfig(
        method=r["integrator.method"],
        dt=dt,
        t_end=t_end,
        snapshot_stride=r["integrator.snapshot_stride"],
    )

    return RunConfig(
        model=model,
        initial=initial,
        integrator=integrator,
        n_modes=n_modes,
        outputs=Path(r["outputs"]),
        seed=r["seed"],
        raw=r,
    )


class _Manifest:
    """Collects run metadata; written exactly once, as the last output."""

    def __init__(self, command: str, config: RunConfig):
        self.payload = {
            "tool": "benj",
            "version": __version__,
            "command": command,
            "config": {k: self._jsonable(v) for k, v in config.raw.items()},
            "started_utc": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()),
            "finished_utc": None,
            "status": "incomplete",
            "exit_code": None,
            "results": {},
        }
        self.outdir = config.outputs

    @staticmethod
    def _jsonable(v):
        if isinstance(v, (list, tuple)):
            return list(v)
        return v

    def finish(self, status: str, exit_code: int, results: dict | None = None):
        self.payload["finished_utc"] = time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime())
        self.payload["status"] = status
        self.payload["exit_code"] = exit_code
        if results:
            self.payload["results"] = results
        self.outdir.mkdir(parents=True, exist_ok=True)
        with open(self.outdir / "manifest.json", "w") as fh:
            json.dump(self.payload, fh, indent=2, sort_keys=True)
            fh.write("\n")


def _progress(quiet: bool, message: str):
    if not quiet:
        print(message, file=sys.stderr)


def _write_invariants_csv(path: Path, record):
    with open(path, "w", newline="\n") as fh:
        fh.write("t,C,I,E\n")
        for t, c, i, e in zip(record.times, record.C, record.I, record.E):
            fh.write(f"{_fmt(t)},{_fmt(c)},{_fmt(i)},{_fmt(e)}\n")


def _cmd_solve(config: RunConfig, quiet: bool) -> int:
    manifest = _Manifest("solve", config)
    outdir = config.outputs
    outdir.mkdir(parents=True, exist_ok=True)
    try:
        u0 = build_field(config.initial, config.model, config.n_modes)
    except (ParameterError, ShapeError, SnapshotFormatError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        manifest.finish("validation-error", EXIT_CONFIG)
        return EXIT_CONFIG

    written = [(0.0, u0)]
    write_snapshot(outdir / "snap_0000.txt", u0, 0.0)

    def observer(t, field):
        written.append((t, field))
        write_snapshot(outdir / f"snap_{len(written) - 1:04d}.txt", field, t)

    _progress(quiet, f"solve: N={config.n_modes}, dt={config.integrator.dt:g}, "
                     f"t_end={config.integrator.t_end:g}")
    try:
        evolve(u0, config.model, config.integrator, observer=observer)
    except DivergenceError as exc:
        record = record_invariants(written, config.model)
        _write_invariants_csv(outdir / "invariants.csv", record)
        print(f"error: {exc}", file=sys.stderr)
        manifest.finish("divergence", EXIT_DIVERGED, {"failed_at": exc.time})
        return EXIT_DIVERGED

    record = record_invariants(written, config.model)
    _write_invariants_csv(outdir / "invariants.csv", record)
    manifest.finish(
        "ok",
        EXIT_OK,
        {
            "snapshots": len(written),
            "rel_drift_C": record.rel_drift_C,
            "rel_drift_I": record.rel_drift_I,
            "rel_drift_E": record.rel_drift_E,
        },
    )
    _progress(quiet, f"solve: wrote {len(written)} snapshots to {outdir}")
    return EXIT_OK


def _cmd_converge(config: RunConfig, quiet: bool) -> int:
    manifest = _Manifest("converge", config)
    n_values = config.raw["converge.n_values"]
    if not n_values:
        print("error: converge.n_values is required for the converge command",
              file=sys.stderr)
        manifest.finish("validation-error", EXIT_CONFIG)
        return EXIT_CONFIG
    n_ref = config.raw["converge.n_ref"] or 4 * max(n_values)
    t_star = config.raw["converge.t_star"] or config.integrator.t_end
    policy = IntegratorPolicy(
        method=config.integrator.method,
        dt=config.raw["integrator.dt"],
    )
    _progress(quiet, f"converge: N in {n_values}, reference N={n_ref}, t*={t_star:g}")
    try:
        report = self_convergence(
            config.model,
            config.initial,
            n_values,
            n_ref,
            t_star,
            integrator_policy=policy,
            track_max=config.raw["converge.track_max"],
        )
    except (ValueError, ParameterError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        manifest.finish("validation-error", EXIT_CONFIG)
        return EXIT_CONFIG

    outdir = config.outputs
    outdir.mkdir(parents=True, exist_ok=True)
    with open(outdir / "convergence.csv", "w", newline="\n") as fh:
        fh.write("N,error\n")
        for n, err in zip(report.n_values, report.errors):
            fh.write(f"{n},{_fmt(err)}\n")
        rate = report.fitted_rate if report.fitted_rate is not None else float("nan")
        r2 = report.fit_r2 if report.fit_r2 is not None else float("nan")
        fh.write(f"rate,{_fmt(rate)},{_fmt(r2)}\n")

    if report.failures:
        manifest.finish("divergence", EXIT_DIVERGED, {"failures": report.failures})
        print(f"error: {len(report.failures)} member run(s) diverged", file=sys.stderr)
        return EXIT_DIVERGED
    manifest.finish(
        "ok", EXIT_OK, {"fitted_rate": report.fitted_rate, "fit_r2": report.fit_r2}
    )
    _progress(quiet, f"converge: fitted rate {report.fitted_rate}")
    return EXIT_OK


def _cmd_soliton(config: RunConfig, quiet: bool) -> int:
    manifest = _Manifest("soliton", config)
    speed = config.raw["soliton.c"]
    t_star = config.raw["soliton.t_star"] or config.integrator.t_end
    model = config.model
    try:
        if model.gamma == 0.0 and model.m == 1 and model.q == 1:
            profile = None  # closed form available
        else:
            spec = InitialDataSpec(
                kind="petviashvili_wave",
                speed=speed,
                amplitude=config.initial.amplitude,
                width=config.initial.width,
                tol=config.initial.tol,
                max_iter=config.initial.max_iter,
            )
            profile = build_field(spec, model, config.n_modes)
        _progress(quiet, f"soliton: c={speed:g}, N={config.n_modes}, t*={t_star:g}")
        report = soliton_propagation_test(
            speed,
            model,
            config.n_modes,
            t_star,
            dt=config.raw["soliton.dt"] or config.raw["integrator.dt"],
            profile=profile,
            method=config.integrator.method,
        )
    except (ParameterError, ShapeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        manifest.finish("validation-error", EXIT_CONFIG)
        return EXIT_CONFIG
    except DivergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        manifest.finish("divergence", EXIT_DIVERGED, {"failed_at": exc.time})
        return EXIT_DIVERGED

    outdir = config.outputs
    outdir.mkdir(parents=True, exist_ok=True)
    wave = profile if profile is not None else build_field(
        InitialDataSpec(kind="kdv_soliton", speed=speed), model, config.n_modes
    )
    write_snapshot(outdir / "profile.txt", wave, 0.0)
    speed_est = report.speed_estimate if report.speed_estimate is not None else float("nan")
    with open(outdir / "soliton_report.csv", "w", newline="\n") as fh:
        fh.write("c,speed_estimate,speed_error,shape_error_linf,"
                 "rel_drift_C,rel_drift_I,rel_drift_E\n")
        fh.write(
            f"{_fmt(speed)},{_fmt(speed_est)},{_fmt(abs(speed_est - speed))},"
            f"{_fmt(report.shape_error_linf)},{_fmt(report.drifts.rel_drift_C)},"
            f"{_fmt(report.drifts.rel_drift_I)},{_fmt(report.drifts.rel_drift_E)}\n"
        )
    manifest.finish(
        "ok",
        EXIT_OK,
        {
            "speed_estimate": speed_est,
            "shape_error_linf": report.shape_error_linf,
        },
    )
    _progress(quiet, f"soliton: measured speed {speed_est:.6g} "
                     f"(target {speed:g}), shape error {report.shape_error_linf:.3g}")
    return EXIT_OK


def _cmd_invariants(config: RunConfig, files, quiet: bool) -> int:
    if not files:
        print("error: invariants command needs at least one snapshot file",
              file=sys.stderr)
        return EXIT_CONFIG
    rows = []
    for path in files:
        try:
            field, t = read_snapshot(path)
        except (SnapshotFormatError, OSError) as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_CONFIG
        rows.append((t, c_pi(field), i_pi(field), e_pi(field, config.model)))
    rows.sort(key=lambda r: r[0])
    print("t,C,I,E")
    for t, c, i, e in rows:
        print(f"{_fmt(t)},{_fmt(c)},{_fmt(i)},{_fmt(e)}")
    return EXIT_OK


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="benj",
        description="Pseudospectral solver and verification harness for "
                    "Benjamin-type dispersive equations.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("solve", "evolve an initial condition; write snapshots and invariants"),
        ("converge", "bandwidth self-convergence study; write a rate report"),
        ("soliton", "propagate a solitary wave; write profile and report"),
        ("invariants", "recompute invariants from snapshot files"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", required=True, help="path to the config document")
        p.add_argument("--override", action="append", metavar="KEY=VALUE",
                       help="override a config key (repeatable)")
        p.add_argument("--quiet", action="store_true", help="suppress progress output")
        if name == "invariants":
            p.add_argument("files", nargs="*", help="snapshot files to evaluate")
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        text = Path(args.config).read_text()
    except OSError as exc:
        print(f"error: cannot read config: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        config = parse_config(text, args.override)
    except (ConfigError, ParameterError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    try:
        if args.command == "solve":
            return _cmd_solve(config, args.quiet)
        if args.command == "converge":
            return _cmd_converge(config, args.quiet)
        if args.command == "soliton":
            return _cmd_soliton(config, args.quiet)
        if args.command == "invariants":
            return _cmd_invariants(config, args.files, args.quiet)
    except OSError as exc:  # unwritable output directory and kin
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
