"""Command-line runner.

    radwave run CONFIG.yaml
    radwave validate {linear-limit,convergence,closed-form,oracle,signatures,all}
    radwave sweep CONFIG_DIR [--jobs N]

Exit codes: 0 success, 1 validation failure, 2 config error,
3 numerical instability.
"""
from __future__ import annotations

import argparse
import dataclasses
import difflib
import json
import math
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, fields
from pathlib import Path

import yaml

from . import __version__
from .diagnostics import REPORT_FIELDS, energy_report
from .dissipation import CubeConvention, DissipationModel, ModelKind
from .madelung import density
from .scenarios import SCENARIOS, gaussian_packet, get_scenario, make_potential
from .stepper import SCHEMES, InstabilityError, SimState, make_state

EXIT_OK, EXIT_VALIDATION, EXIT_CONFIG, EXIT_UNSTABLE = 0, 1, 2, 3

REPORT_HEADER = "# radwave report v1"
SNAPSHOT_HEADER = "# radwave snapshot v1"
SNAPSHOT_FIELDS = ("x", "re_psi", "im_psi", "density", "velocity", "work_field")


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    """Validated run parameters.  ``None`` means "take the scenario default"."""

    scenario: str = "damped_harmonic"
    model: str = "none"
    kappa: float = 0.0
    cube_convention: str = "literal"
    scheme: str = "strang"
    n_points: int | None = None
    x_min: float | None = None
    x_max: float | None = None
    dt: float | None = None
    n_steps: int | None = None
    x0: float | None = None
    sigma: float | None = None
    p0: float | None = None
    omega: float | None = None
    slope: float | None = None
    report_stride: int = 10
    snapshot_stride: int = 0
    output_dir: str = "output"
    hbar: float = 1.0
    mass: float = 1.0
    density_floor: float = 1e-12
    self_consistent: int = 0

    def __post_init__(self):
        self._validate()
        sc = get_scenario(self.scenario)
        for name in ("n_points", "x_min", "x_max", "dt", "n_steps", "x0",
                     "sigma", "p0", "omega", "slope"):
            if getattr(self, name) is None:
                setattr(self, name, getattr(sc, name))

    def _validate(self):
        if self.scenario not in SCENARIOS:
            raise ConfigError(f"scenario: unknown {self.scenario!r}; "
                              f"expected one of {sorted(SCENARIOS)}")
        _choice("model", self.model, [k.value for k in ModelKind])
        _choice("cube_convention", self.cube_convention,
                [c.value for c in CubeConvention])
        _choice("scheme", self.scheme, sorted(SCHEMES))
        _number("kappa", self.kappa, minimum=0.0)
        _number("hbar", self.hbar, minimum=0.0, strict=True)
        _number("mass", self.mass, minimum=0.0, strict=True)
        _number("density_floor", self.density_floor, minimum=0.0, strict=True)
        _integer("report_stride", self.report_stride, minimum=1)
        _integer("snapshot_stride", self.snapshot_stride, minimum=0)
        _integer("self_consistent", self.self_consistent, minimum=0)
        for name in ("dt", "sigma", "omega"):
            if getattr(self, name) is not None:
                _number(name, getattr(self, name), minimum=0.0, strict=True)
        for name in ("x_min", "x_max", "x0", "p0", "slope"):
            if getattr(self, name) is not None:
                _number(name, getattr(self, name))
        if self.n_points is not None:
            _integer("n_points", self.n_points, minimum=8)
            if self.n_points & (self.n_points - 1):
                raise ConfigError(
                    f"n_points: expected a power of two >= 8, got {self.n_points}")
        if self.n_steps is not None:
            _integer("n_steps", self.n_steps, minimum=0)
        if not isinstance(self.output_dir, str) or not self.output_dir:
            raise ConfigError("output_dir: expected a non-empty path string")

    # -- construction helpers

    def dissipation_model(self) -> DissipationModel:
        return DissipationModel(ModelKind(self.model), self.kappa,
                                CubeConvention(self.cube_convention))

    def initial_state(self) -> SimState:
        from .grid import make_grid

        if not self.x_max > self.x_min:
            raise ConfigError(f"x_max: must exceed x_min ({self.x_min})")
        grid = make_grid(self.n_points, self.x_min, self.x_max)
        sc = get_scenario(self.scenario)
        try:
            psi = gaussian_packet(grid, self.x0, self.sigma, self.p0, self.hbar)
            V = make_potential(grid, sc.potential_kind, omega=self.omega,
                               mass=self.mass, slope=self.slope)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        return make_state(psi, grid, V, self.dissipation_model(), dt=self.dt,
                          hbar=self.hbar, mass=self.mass,
                          density_floor=self.density_floor,
                          self_consistent=self.self_consistent)

    def as_dict(self) -> dict:
        return dataclasses.asdict(self)


def _choice(name, value, options):
    if value not in options:
        raise ConfigError(f"{name}: expected one of {options}, got {value!r}")


def _number(name, value, minimum=None, strict=False):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{name}: expected a number, got {value!r}")
    if not math.isfinite(value):
        raise ConfigError(f"{name}: expected a finite number, got {value!r}")
    if minimum is not None:
        if strict and not value > minimum:
            raise ConfigError(f"{name}: must satisfy {name} > {minimum:g}, got {value!r}")
        if not strict and not value >= minimum:
            raise ConfigError(f"{name}: must satisfy {name} >= {minimum:g}, got {value!r}")


def _integer(name, value, minimum=None):
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"{name}: expected an integer, got {value!r}")
    if minimum is not None and value < minimum:
        raise ConfigError(f"{name}: must satisfy {name} >= {minimum}, got {value!r}")


CONFIG_KEYS = tuple(f.name for f in fields(RunConfig))
FLOAT_KEYS = frozenset(("kappa", "x_min", "x_max", "dt", "x0", "sigma", "p0",
                        "omega", "slope", "hbar", "mass", "density_floor"))


def parse_config(text: str) -> RunConfig:
    """Parse a YAML mapping into a :class:`RunConfig`."""
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        where = f" at line {mark.line + 1}, column {mark.column + 1}" if mark else ""
        problem = getattr(exc, "problem", None) or str(exc)
        raise ConfigError(f"config parse error{where}: {problem}") from None
    if data is None:
        data = {}
    if not isinstance(data, dict):
        raise ConfigError("config must be a mapping of key: value pairs")
    for key in data:
        if key not in CONFIG_KEYS:
            near = difflib.get_close_matches(str(key), CONFIG_KEYS, n=1)
            hint = f"; did you mean {near[0]!r}?" if near else ""
            raise ConfigError(f"unknown key {key!r}{hint}")
    for key, value in data.items():
        # PyYAML reads exponent literals such as 1e-3 as strings
        if key in FLOAT_KEYS and isinstance(value, str):
            try:
                data[key] = float(value)
            except ValueError:
                raise ConfigError(f"{key}: expected a number, got {value!r}") from None
    return RunConfig(**data)


def load_config(path) -> RunConfig:
    return parse_config(Path(path).read_text())


# ------------------------------------------------------------------ output

def _fmt(value) -> str:
    return repr(float(value))


def write_report_csv(stream, state: SimState, config: RunConfig,
                     snapshot_dir: Path | None = None) -> SimState:
    """Evolve ``state`` per ``config`` while streaming report rows to ``stream``.

    On instability the rows written so far remain in ``stream`` and the
    exception propagates with the last good state attached as ``.state``.
    """
    step = SCHEMES[config.scheme]
    stream.write(REPORT_HEADER + "\n")
    stream.write(",".join(REPORT_FIELDS) + "\n")

    def emit(s):
        stream.write(",".join(_fmt(v) for v in energy_report(s).as_row()) + "\n")

    emit(state)
    if snapshot_dir is not None:
        write_snapshot(snapshot_dir, state)
    for i in range(1, config.n_steps + 1):
        try:
            nxt = step(state)
        except InstabilityError as exc:
            exc.state = state
            raise
        state = nxt
        if i % config.report_stride == 0:
            emit(state)
        if snapshot_dir is not None and config.snapshot_stride and \
                i % config.snapshot_stride == 0:
            write_snapshot(snapshot_dir, state)
    return state


def write_snapshot(directory: Path, state: SimState):
    directory.mkdir(parents=True, exist_ok=True)
    path = directory / f"snapshot_{state.steps:08d}.csv"
    cols = (state.grid.x, state.psi.real, state.psi.imag, density(state.psi),
            state.velocity(), state.work.w)
    with open(path, "w", newline="\n") as fh:
        fh.write(SNAPSHOT_HEADER + f" t={_fmt(state.t)}\n")
        fh.write(",".join(SNAPSHOT_FIELDS) + "\n")
        for row in zip(*cols):
            fh.write(",".join(_fmt(v) for v in row) + "\n")


def run(config: RunConfig, base_dir: Path | str = ".") -> int:
    """Execute one configured run; returns the process exit code."""
    out = Path(base_dir) / config.output_dir
    out.mkdir(parents=True, exist_ok=True)
    try:
        state = config.initial_state()
    except (ConfigError, ValueError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    snapshots = out / "snapshots" if config.snapshot_stride else None
    status, message = "ok", ""
    start = time.perf_counter()
    with open(out / "report.csv", "w", newline="\n") as fh:
        try:
            state = write_report_csv(fh, state, config, snapshots)
        except InstabilityError as exc:
            state = exc.state
            status, message = "unstable", str(exc)
    wall = time.perf_counter() - start

    summary = {
        "status": status,
        "message": message,
        "steps_completed": state.steps,
        "final_report": energy_report(state).as_dict(),
        "config": config.as_dict(),
        "wall_time_s": wall,
        "version": __version__,
    }
    with open(out / "summary.json", "w", newline="\n") as fh:
        json.dump(summary, fh, indent=2)
        fh.write("\n")
    if status != "ok":
        print(f"numerical instability: {message}", file=sys.stderr)
        return EXIT_UNSTABLE
    return EXIT_OK


def validate(suite: str, stream=None) -> int:
    from .validation import SUITES

    stream = stream or sys.stdout
    names = list(SUITES) if suite == "all" else [suite]
    if any(n not in SUITES for n in names):
        print(f"unknown suite {suite!r}; expected one of {sorted(SUITES)}",
              file=sys.stderr)
        return EXIT_CONFIG
    failed = 0
    for name in names:
        print(f"== {name}", file=stream)
        for check in SUITES[name]():
            print(check.line(), file=stream)
            failed += not check.passed
    print(f"{failed} check(s) failed" if failed else "all checks passed",
          file=stream)
    return EXIT_VALIDATION if failed else EXIT_OK


def _sweep_one(args):
    path, out_root = args
    try:
        cfg = load_config(path)
    except (ConfigError, TypeError, OSError) as exc:
        print(f"{path}: config error: {exc}", file=sys.stderr)
        return str(path), EXIT_CONFIG
    cfg.output_dir = str(Path(out_root) / Path(path).stem)
    return str(path), run(cfg, Path(path).parent)


def sweep(config_dir, jobs: int = 1) -> int:
    """Run every ``*.yaml``/``*.yml`` in ``config_dir`` into its own output directory."""
    d = Path(config_dir)
    paths = sorted(list(d.glob("*.yaml")) + list(d.glob("*.yml")))
    if not paths:
        print(f"no config files in {d}", file=sys.stderr)
        return EXIT_CONFIG
    tasks = [(p, "sweep_output") for p in paths]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_sweep_one, tasks))
    else:
        results = [_sweep_one(t) for t in tasks]
    for path, code in results:
        print(f"{code}  {path}")
    return max(code for _, code in results)


def _defaults_epilog() -> str:
    lines = ["config keys (YAML) and defaults; None = scenario default:"]
    lines += [f"  {f.name}: {f.default!r}" for f in fields(RunConfig)]
    lines.append("scenarios: " + ", ".join(sorted(SCENARIOS)))
    lines.append("models: " + ", ".join(k.value for k in ModelKind))
    return "\n".join(lines)


def build_parser() -> argparse.ArgumentParser:
    from .validation import SUITES

    parser = argparse.ArgumentParser(
        prog="radwave", description=__doc__.split("\n")[0] or None,
        epilog=_defaults_epilog(),
        formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--version", action="version",
                        version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run one config file")
    p_run.add_argument("config", type=Path)

    p_val = sub.add_parser("validate", help="run a built-in validation suite")
    p_val.add_argument("suite", choices=list(SUITES) + ["all"])

    p_sweep = sub.add_parser("sweep", help="run every config in a directory")
    p_sweep.add_argument("config_dir", type=Path)
    p_sweep.add_argument("--jobs", type=int, default=1)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "run":
        try:
            cfg = load_config(args.config)
        except OSError as exc:
            print(f"cannot read config: {exc}", file=sys.stderr)
            return EXIT_CONFIG
        except (ConfigError, TypeError) as exc:
            print(f"config error: {exc}", file=sys.stderr)
            return EXIT_CONFIG
        return run(cfg, args.config.parent)
    if args.command == "validate":
        return validate(args.suite)
    return sweep(args.config_dir, args.jobs)


if __name__ == "__main__":
    sys.exit(main())
