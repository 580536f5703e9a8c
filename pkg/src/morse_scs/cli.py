"""Command-line entry point: tables, densities, time evolution and Mandel scans.

Usage:
    morse-scs table --molecule hcl --kind oscillator
    morse-scs density --z 2 --gamma 0.6 --points 801 --format json --out fig.json
    morse-scs evolve --z 0.3 --gamma 0 --gamma 0.3 --t-steps 20
    morse-scs mandel-scan --z 0 --z 2 --kind energy --kind oscillator
    morse-scs residual --molecule cs2 --z 1 --gamma 0.3
    morse-scs ho-compare --kind oscillator

Exit codes: 0 success, 1 bad arguments, 2 numerical failure.
"""

from __future__ import annotations

import csv
import io
import itertools
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import click
import numpy as np

from .coefficients import StateParams, build_state, residual
from .errors import DomainError, MorseError, TailError
from .ladders import LadderKind, LadderSpec
from .model import PRESETS, MorseParams
from .observables import (
    QuadratureConfig,
    compute_report,
    density_grid,
    ho_reference,
    mandel_scan,
    vibration_period,
)

__all__ = ["cli", "main", "RunConfig", "TABLE_Z", "TABLE_GAMMA"]

TABLE_Z = (0.1, 0.3, 0.6, 1.0, 2.0, 3.0)
TABLE_GAMMA = (0.0, 0.3, 0.5)
KIND_CHOICES = [k.value for k in LadderKind]


class NumericalFailure(click.ClickException):
    exit_code = 2


@dataclass
class RunConfig:
    molecule: str | None = "hcl"
    nu: float | None = None
    kinds: tuple[str, ...] = ("oscillator",)
    z_list: tuple[complex, ...] = ()
    gamma_list: tuple[complex, ...] = ()
    fmt: str = "csv"
    output: str | None = None
    jobs: int = 1
    extra: dict = field(default_factory=dict)

    def morse(self) -> MorseParams:
        if self.nu is not None:
            return MorseParams(self.nu)
        return MorseParams.from_preset(self.molecule or "hcl")

    def specs(self) -> list[LadderSpec]:
        morse = self.morse()
        return [LadderSpec(LadderKind(k), morse) for k in self.kinds]

    def pairs(self, z_default, gamma_default) -> list[tuple[complex, complex]]:
        zs = self.z_list or tuple(complex(v) for v in z_default)
        gs = self.gamma_list or tuple(complex(v) for v in gamma_default)
        return list(itertools.product(zs, gs))


# -- formatting -------------------------------------------------------------


def _fmt_number(v) -> str:
    if isinstance(v, complex):
        if v.imag == 0:
            return _fmt_number(v.real)
        return f"{v.real:.10g}{v.imag:+.10g}j"
    if isinstance(v, (float, np.floating)):
        return f"{float(v):.10g}"
    return str(v)


def _json_value(v):
    if isinstance(v, complex):
        if v.imag == 0:
            return _json_value(v.real)
        return _fmt_number(v)
    if isinstance(v, (float, np.floating)):
        v = float(v)
        return float(f"{v:.10g}") if math.isfinite(v) else None
    if isinstance(v, np.integer):
        return int(v)
    return v


def render(records: list[dict], fmt: str) -> str:
    """CSV (header + 10 significant digits) or a JSON array of the same records."""
    if fmt == "json":
        return json.dumps([{k: _json_value(v) for k, v in r.items()} for r in records], indent=2) + "\n"
    buf = io.StringIO()
    if records:
        writer = csv.DictWriter(buf, fieldnames=list(records[0].keys()), lineterminator="\n")
        writer.writeheader()
        for r in records:
            writer.writerow({k: _fmt_number(v) for k, v in r.items()})
    return buf.getvalue()


def emit(records: list[dict], cfg: RunConfig) -> None:
    text = render(records, cfg.fmt)
    if cfg.output in (None, "-"):
        click.echo(text, nl=False)
    else:
        with open(cfg.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _parse_complex(ctx, param, values):
    out = []
    for raw in values:
        try:
            out.append(complex(raw.replace(" ", "")))
        except ValueError:
            raise click.BadParameter(f"{raw!r} is not a number of the form 're' or 're+imj'") from None
    return tuple(out)


def _ordered_map(func, items, jobs: int):
    if jobs <= 1:
        return [func(it) for it in items]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(func, items))


# -- shared options ---------------------------------------------------------


def _common(kinds_default: tuple[str, ...]):
    def deco(f):
        opts = [
            click.option("--molecule", type=click.Choice(sorted(PRESETS)), default="hcl", show_default=True),
            click.option("--nu", type=float, default=None, help="Explicit anharmonicity ratio; overrides --molecule."),
            click.option(
                "--kind", "kinds", type=click.Choice(KIND_CHOICES), multiple=True,
                default=kinds_default, show_default=True,
            ),
            click.option("--z", "z_list", multiple=True, callback=_parse_complex, help="Coherence parameter (repeatable)."),
            click.option("--gamma", "gamma_list", multiple=True, callback=_parse_complex, help="Squeezing parameter (repeatable)."),
            click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv", show_default=True),
            click.option("--out", "output", default=None, help="Output path (default stdout)."),
        ]
        for opt in reversed(opts):
            f = opt(f)
        return f

    return deco


def _config(**kw) -> RunConfig:
    known = {k: kw.pop(k) for k in ("molecule", "nu", "kinds", "z_list", "gamma_list", "fmt", "output", "jobs") if k in kw}
    if "kinds" in known:
        known["kinds"] = tuple(known["kinds"])
    return RunConfig(**known, extra=kw)


def _quad(morse: MorseParams) -> QuadratureConfig:
    return QuadratureConfig.for_params(morse)


@click.group(help=__doc__.split("\n\n")[0])
def cli():
    pass


@cli.command("table")
@_common(("oscillator",))
@click.option("--jobs", type=int, default=1, show_default=True, help="Rows computed in parallel.")
def cmd_table(**kw):
    """Dispersion, uncertainty, noise and Mandel Q on a (z, gamma) grid."""
    cfg = _config(**kw)
    items = [(spec, z, g) for spec in cfg.specs() for z, g in cfg.pairs(TABLE_Z, TABLE_GAMMA)]

    def row(item):
        spec, z, g = item
        rec = {"kind": spec.kind.value, "z": z, "gamma": g}
        try:
            r = compute_report(spec, StateParams(z, g), _quad(spec.params))
        except TailError as exc:
            nan = math.nan
            rec.update(var_x=nan, delta_sq=nan, T=nan, Q=nan, residual=nan, mean_N=nan, flag="", error=str(exc))
            return rec
        rec.update(
            var_x=r.var_x, delta_sq=r.delta_sq, T=r.total_noise, Q=r.mandel_Q,
            residual=r.residual, mean_N=r.mean_N, flag="vacuum" if r.vacuum else "", error="",
        )
        return rec

    records = _ordered_map(row, items, cfg.jobs)
    emit(records, cfg)
    failed = [r for r in records if r["error"]]
    if failed:
        raise NumericalFailure(f"{len(failed)} row(s) failed quadrature; see the error column")


@cli.command("density")
@_common(("energy", "oscillator"))
@click.option("--x-min", type=float, default=-1.0, show_default=True)
@click.option("--x-max", type=float, default=4.0, show_default=True)
@click.option("--points", type=int, default=501, show_default=True)
def cmd_density(x_min, x_max, points, **kw):
    """Probability density |Psi(x)|^2, one column per ladder kind."""
    cfg = _config(**kw)
    if points < 1:
        raise click.BadParameter("--points must be >= 1")
    pairs = cfg.pairs((2.0,), (0.0,))
    records = []
    for z, g in pairs:
        grids = {spec.kind.value: density_grid(build_state(spec, StateParams(z, g)), (x_min, x_max), points) for spec in cfg.specs()}
        xs = next(iter(grids.values())).x_values
        for i, x in enumerate(xs):
            rec = {"z": z, "gamma": g} if len(pairs) > 1 else {}
            rec["x"] = float(x)
            for kind, grid in grids.items():
                rec[f"density_{kind}"] = float(grid.density[i])
            records.append(rec)
    emit(records, cfg)


@cli.command("evolve")
@_common(("energy",))
@click.option("--x-min", type=float, default=-1.0, show_default=True)
@click.option("--x-max", type=float, default=3.0, show_default=True)
@click.option("--points", type=int, default=201, show_default=True)
@click.option("--t-max", type=float, default=None, help="Final time [default: one period 2pi/(E1-E0)].")
@click.option("--t-steps", type=int, default=41, show_default=True)
def cmd_evolve(x_min, x_max, points, t_max, t_steps, **kw):
    """Space-time density |Psi(x; t)|^2."""
    cfg = _config(**kw)
    morse = cfg.morse()
    if t_max is None:
        t_max = vibration_period(morse)
    if t_max < 0 or t_steps < 1:
        raise click.BadParameter("need --t-max >= 0 and --t-steps >= 1")
    times = [0.0] if t_max == 0 else np.linspace(0.0, t_max, t_steps).tolist()
    records = []
    for spec in cfg.specs():
        for z, g in cfg.pairs((0.3,), (0.0, 0.3)):
            state = build_state(spec, StateParams(z, g))
            for t in times:
                grid = density_grid(state, (x_min, x_max), points, time=t)
                for x, d in zip(grid.x_values, grid.density):
                    records.append({"kind": spec.kind.value, "z": z, "gamma": g, "t": t, "x": float(x), "density": float(d)})
    emit(records, cfg)


@cli.command("mandel-scan")
@_common(("energy", "oscillator"))
@click.option("--r-min", type=float, default=-3.0, show_default=True)
@click.option("--r-max", type=float, default=3.0, show_default=True)
@click.option("--r-steps", type=int, default=201, show_default=True)
def cmd_mandel_scan(r_min, r_max, r_steps, **kw):
    """Mandel Q along gamma = tanh r."""
    cfg = _config(**kw)
    if r_steps < 1:
        raise click.BadParameter("--r-steps must be >= 1")
    zs = cfg.z_list or (0.0, 0.6, 1.0, 2.0)
    records = []
    for spec in cfg.specs():
        for z in zs:
            if z.imag != 0:
                raise click.BadParameter("mandel-scan takes real z")
            for r, q in mandel_scan(spec, z.real, (r_min, r_max), r_steps):
                records.append({"kind": spec.kind.value, "z": z.real, "r": r, "gamma": math.tanh(r), "Q": q})
    emit(records, cfg)


@cli.command("residual")
@_common(("oscillator", "energy"))
def cmd_residual(**kw):
    """Truncation defect of each state's eigenvalue equation."""
    cfg = _config(**kw)
    records = []
    for spec in cfg.specs():
        for z, g in cfg.pairs(TABLE_Z, TABLE_GAMMA):
            state = build_state(spec, StateParams(z, g))
            rep = residual(spec, state)
            records.append({
                "kind": spec.kind.value, "z": z, "gamma": g,
                "abs_lambda1": abs(rep.lambda1), "abs_lambda0": abs(rep.lambda0),
                "absolute": rep.absolute, "relative_residual": rep.relative_residual,
            })
    emit(records, cfg)


@cli.command("ho-compare")
@_common(("oscillator",))
def cmd_ho_compare(**kw):
    """Morse squeezed states next to the harmonic-oscillator reference."""
    cfg = _config(**kw)
    records = []
    for spec in cfg.specs():
        for z, g in cfg.pairs(TABLE_Z, TABLE_GAMMA):
            params = StateParams(z, g)
            r = compute_report(spec, params, _quad(spec.params))
            h = ho_reference(params)
            records.append({
                "kind": spec.kind.value, "z": z, "gamma": g,
                "var_x": r.var_x, "var_x_ho": h.var_x,
                "delta_sq": r.delta_sq, "delta_sq_ho": h.delta_sq,
                "T": r.total_noise, "T_ho": h.total_noise,
                "Q": r.mandel_Q, "Q_ho": h.mandel_Q,
            })
    emit(records, cfg)


def main(argv: list[str] | None = None) -> int:
    """Run the CLI and return its exit code (1 bad arguments, 2 numerical failure)."""
    try:
        cli.main(args=argv, prog_name="morse-scs", standalone_mode=False)
    except NumericalFailure as exc:
        exc.show()
        return 2
    except click.ClickException as exc:
        exc.show()
        return 1
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except click.Abort:
        return 1
    except DomainError as exc:
        click.echo(f"Error: {exc}", err=True)
        return 1
    except MorseError as exc:
        click.echo(f"Error: {exc}", err=True)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
