"""Command-line front end.

Usage:
    llike decompose --set file:a.txt
    llike mean --family all-primes --variant big-omega --x 1000000
    llike correlate --family sparse-primes --a 1,1 --h 1,2 --x 1000000
    llike grid --family all-primes --grid 1000,10000,100000 --out m.json --svg m.svg
    llike verify --seed 42 --nmax 10000 --sets 20

Exit codes: 0 ok, 2 usage or configuration error, 3 verification failure.
"""

from __future__ import annotations

import functools
import json
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path

import click

from . import bounds, estimators, semigroup, sieve
from .coprime_set import FAMILIES, CoprimeSet, Variant, builtin_family, decompose, validate
from .errors import LLikeError
from .formats import dumps_json, read_set_file, rows_to_csv, svg_line_chart
from .verification import run_suite

EXIT_CONFIG = 2
EXIT_VERIFY = 3
# settings that change speed but never output; kept out of the embedded config
_NON_SEMANTIC = {"workers", "out", "svg", "config"}


@dataclass
class RunConfig:
    """Fully resolved parameters of one command invocation."""

    command: str
    family: str | None = None
    set: str | None = None
    inject: str | None = None
    variant: str = Variant.BIG_OMEGA.value
    xmax: int | None = None
    fmt: str = "json"
    segment_len: int | None = None
    seed: int | None = None
    params: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "RunConfig":
        return cls(**data)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "RunConfig":
        return cls.from_dict(json.loads(text))


def _parse_ints(text, name: str) -> list[int]:
    if text is None or text == "":
        return []
    try:
        return [int(v) for v in str(text).replace(" ", "").split(",") if v]
    except ValueError:
        raise click.BadParameter(f"expected comma-separated integers, got {text!r}", param_hint=name)


def _load_config(ctx, param, path):
    if not path:
        return None
    data = json.loads(Path(path).read_text())
    shared = {k: v for k, v in data.items() if not isinstance(v, dict)}
    default_map = {name: {**shared, **data.get(name, {})} for name in ctx.command.commands}
    ctx.default_map = {**(ctx.default_map or {}), **default_map}
    return path


def set_options(f):
    opts = [
        click.option("--family", type=click.Choice(FAMILIES), help="Built-in generator family."),
        click.option("--set", "set_spec", help="file:PATH or a comma-separated generator list."),
        click.option("--inject", help="Composites injected by augmented-primes (default 6)."),
        click.option("--variant", type=click.Choice([v.value for v in Variant]),
                     default=Variant.BIG_OMEGA.value, show_default=True),
        click.option("--xmax", type=int, help="Largest n the set is materialized for."),
        click.option("--out", type=click.Path(dir_okay=False), help="Write the report here."),
        click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="json",
                     show_default=True),
        click.option("--svg", type=click.Path(dir_okay=False), help="Also write an SVG chart."),
        click.option("--workers", type=int, default=1, show_default=True),
        click.option("--segment-len", type=int, envvar="LLIKE_SEGMENT_LEN",
                     help="Integers per sieve segment (env LLIKE_SEGMENT_LEN)."),
        click.option("--seed", type=int),
    ]
    for opt in reversed(opts):
        f = opt(f)
    return f


class Run:
    """Per-invocation state shared by the command bodies."""

    def __init__(self, command: str, params: dict, need: int):
        self.params = dict(params)
        self.command = command
        self.workers = max(1, params.pop("workers") or 1)
        self.segment_len = params.get("segment_len")
        self.out = params.get("out")
        self.svg = params.get("svg")
        self.fmt = params.get("fmt") or "json"
        xmax = params.get("xmax") or need
        if xmax < need:
            raise LLikeError(f"--xmax {xmax} is below the {need} this command needs")
        self.cset = self._build_set(params, max(xmax, 2))
        resolved = {k: v for k, v in self.params.items()
                    if k not in _NON_SEMANTIC and k not in RunConfig.__dataclass_fields__
                    and k not in ("set_spec",)}
        self.config = RunConfig(
            command, params.get("family"), params.get("set_spec"), params.get("inject"),
            params.get("variant"), xmax, self.fmt, self.segment_len, params.get("seed"), resolved,
        )

    @property
    def kw(self) -> dict:
        return {"workers": self.workers, "segment_len": self.segment_len}

    @staticmethod
    def _build_set(params: dict, xmax: int) -> CoprimeSet:
        family, spec, variant = params.get("family"), params.get("set_spec"), params.get("variant")
        if family and spec:
            raise LLikeError("give either --family or --set, not both")
        if spec:
            if spec.startswith("file:"):
                gens = read_set_file(spec[5:])
                return validate(gens, variant=variant, family=spec, bound=max(xmax, max(gens, default=2)))
            return validate(_parse_ints(spec, "--set"), variant=variant, family="inline",
                            bound=max(xmax, max(_parse_ints(spec, "--set"), default=2)))
        family = family or "all-primes"
        inject = _parse_ints(params.get("inject"), "--inject") or None
        return builtin_family(family, xmax, variant, inject=inject)

    def emit(self, payload: dict, header: list[str] | None = None, rows=None, chart=None):
        if self.out:
            if self.fmt == "csv" and header is not None:
                text = rows_to_csv(header, rows)
            else:
                text = dumps_json({"config": self.config.to_dict(), **payload})
            Path(self.out).write_text(text)
        if self.svg and chart is not None:
            xs, ys, title = chart
            Path(self.svg).write_text(svg_line_chart(xs, [abs(y) for y in ys], title=title))


def command(name: str, **kw):
    """Register a subcommand that maps library errors to exit code 2."""

    def wrap(fn):
        @functools.wraps(fn)
        def body(**params):
            try:
                return fn(**params)
            except (LLikeError, OSError, ValueError) as exc:
                click.echo(f"error: {exc}", err=True)
                sys.exit(EXIT_CONFIG)

        return main.command(name, **kw)(set_options(body))

    return wrap


@click.group()
@click.option("--config", type=click.Path(exists=True, dir_okay=False), callback=_load_config,
              is_eager=True, expose_value=False,
              help="JSON file of option defaults; flags override it.")
def main():
    """Liouville-like functions over pairwise coprime generator sets."""


def _fmt_list(values, limit: int = 20) -> str:
    values = [int(v) for v in values]
    if len(values) <= limit:
        return "{" + ", ".join(map(str, values)) + "}"
    return "{" + ", ".join(map(str, values[:limit])) + f", ... ({len(values)} total)}}"


@command("decompose")
def decompose_cmd(**params):
    """Split the set into composites C and primes P."""
    run = Run("decompose", params, need=2)
    dec = decompose(run.cset)
    click.echo(f"C = {_fmt_list(dec.composites)}")
    click.echo(f"P = {_fmt_list(dec.primes)}")
    click.echo("spf = {" + ", ".join(f"{c}->{p}" for c, p in dec.spf.items()) + "}")
    for name, rs in (("C", dec.recip_sum_C), ("P", dec.recip_sum_P)):
        click.echo(f"sum 1/a over {name} = {rs.value} ({float(rs):.12g}, error <= {rs.error:.3g})")
    rows = [(int(a), "C" if a in dec.spf else "P", dec.spf.get(int(a), "")) for a in run.cset.generators]
    run.emit(
        {"C": list(dec.composites), "P": dec.primes, "spf": dec.spf,
         "recip_sum_C": dec.recip_sum_C.value, "recip_sum_P": dec.recip_sum_P.value},
        ["generator", "part", "spf"], rows,
    )


@command("semigroup")
@click.option("--x", "x", type=int, required=True)
@click.option("--T", "T", type=int, help="Tail threshold for tail_mass.")
@click.option("--lcm-arity", type=int, help="Also report the l-fold lcm moment.")
def semigroup_cmd(**params):
    """Enumerate <C>_x with its reciprocal mass and tail."""
    run = Run("semigroup", params, need=2)
    x = params["x"]
    dec = decompose(run.cset)
    enum = semigroup.enumerate_semigroup(dec.composites, x)
    mass = semigroup.reciprocal_mass(enum)
    click.echo(f"|<C>_{x}| = {enum.count} (sqrt bound {int(x ** 0.5)})")
    click.echo(f"I(x) = {mass.value} ~ {float(mass.value):.12g}; product bound {float(mass.bound):.12g}")
    payload = {"x": x, "count": enum.count, "elements": enum.elements,
               "I": mass.value, "product_bound": mass.bound}
    if params.get("T"):
        tail = semigroup.tail_mass(enum, params["T"])
        click.echo(f"tail above {tail.threshold}: {tail.tail} ~ {float(tail.tail):.6g} "
                   f"(T^-1/2 I(x) = {tail.comparison:.6g})")
        payload["tail"] = {"T": tail.threshold, "value": tail.tail, "comparison": tail.comparison}
    if params.get("lcm_arity"):
        mom = semigroup.lcm_moment(dec.composites, params["lcm_arity"], x)
        click.echo(f"lcm moment (l={params['lcm_arity']}) = {mom.value}; product bound {mom.bound:.6g}")
        payload["lcm_moment"] = {"l": params["lcm_arity"], "value": mom.value, "bound": mom.bound}
    if run.out and run.fmt == "csv":
        Path(run.out).write_text(enum.to_csv())
    else:
        run.emit(payload)


def _report_out(run: Run, rep: estimators.ConvergenceReport, title: str):
    rows = [(x, c, v) for x, c, v in zip(rep.grid, rep.counts, rep.values)]
    run.emit(rep.to_dict(), ["x", "count", "value"], rows, (rep.grid, rep.values, title))


@command("mean")
@click.option("--x", "x", type=int, required=True)
def mean_cmd(**params):
    """Print (1/x) sum_{n <= x} lambda_A(n)."""
    x = params["x"]
    run = Run("mean", params, need=x)
    rep = estimators.mean(run.cset, x, **run.kw)
    click.echo(f"sum = {rep.counts[0]}")
    click.echo(repr(rep.values[0]))
    _report_out(run, rep, "mean value")


def _spec(params) -> estimators.CorrelationSpec:
    a = _parse_ints(params.get("a"), "--a") or [1]
    h = _parse_ints(params.get("h"), "--h") or [0] * len(a)
    k = params.get("k")
    if k is not None and not (k == len(a) == len(h)):
        raise LLikeError(f"--k {k} does not match {len(a)} coefficients and {len(h)} shifts")
    return estimators.CorrelationSpec(tuple(a), tuple(h))


@command("correlate")
@click.option("--k", type=int)
@click.option("--a", "a", help="Coefficients a_1,...,a_k.")
@click.option("--h", "h", help="Shifts h_1,...,h_k.")
@click.option("--x", "x", type=int, required=True)
def correlate_cmd(**params):
    """Print (1/x) sum_{n <= x} prod lambda_A(a_i n + h_i)."""
    spec = _spec(params)
    x = params["x"]
    run = Run("correlate", params, need=spec.reach(x))
    rep = estimators.correlate(run.cset, spec, x, **run.kw)
    click.echo(f"sum = {rep.counts[0]}")
    click.echo(repr(rep.values[0]))
    _report_out(run, rep, f"S_{spec.k} a={list(spec.coeffs)} h={list(spec.shifts)}")


@command("grid")
@click.option("--grid", "grid", required=True, help="Ascending x values, comma-separated.")
@click.option("--a", "a", help="Coefficients (default: the mean).")
@click.option("--h", "h", help="Shifts.")
@click.option("--k", type=int)
def grid_cmd(**params):
    """Partial sums at every grid point from one sieve pass."""
    spec = _spec(params)
    grid = _parse_ints(params["grid"], "--grid")
    if not grid:
        raise LLikeError("--grid is empty")
    run = Run("grid", params, need=spec.reach(max(grid)))
    rep = estimators.convergence_grid(run.cset, spec, grid, **run.kw)
    for x, c, v in zip(rep.grid, rep.counts, rep.values):
        click.echo(f"{x}\t{c}\t{v!r}")
    _report_out(run, rep, "mean value" if spec.is_mean else f"S_{spec.k}")


@command("bounds")
@click.option("--x", "x", type=int, help="Single evaluation point.")
@click.option("--grid", "grid", help="Sweep over these x values instead.")
@click.option("--K", "K", type=float, default=1.0, show_default=True)
@click.option("--y", "y", type=int, help="Lower end for the distance sum.")
def bounds_cmd(**params):
    """Hall-Tenenbaum style bound vs the measured partial sum of lambda_P."""
    xs = _parse_ints(params.get("grid"), "--grid") or ([params["x"]] if params.get("x") else [])
    if not xs:
        raise LLikeError("give --x or --grid")
    run = Run("bounds", params, need=max(xs))
    dec = decompose(run.cset)
    reports = [bounds.hall_tenenbaum_bound(run.cset, dec, x, params["K"], **run.kw) for x in xs]
    for r in reports:
        click.echo(f"x={r.x} recip_sum={r.recip_sum:.12g} bound={r.ht_bound:.6g} "
                   f"empirical={r.empirical} ratio={r.ratio:.6g}")
    payload = {"reports": [r.to_dict() for r in reports]}
    if params.get("y"):
        ds = {x: bounds.distance_sum(dec.primes, params["y"], x) for x in xs if x >= params["y"]}
        for x, v in ds.items():
            click.echo(f"distance_sum(y={params['y']}, x={x}) = {v:.12g}")
        payload["distance_sum"] = {"y": params["y"], "values": ds}
    rows = [(r.x, r.K, r.recip_sum, r.ht_bound, r.empirical, r.ratio) for r in reports]
    run.emit(payload, ["x", "K", "recip_sum", "ht_bound", "empirical", "ratio"], rows,
             ([r.x for r in reports], [r.ratio for r in reports], "empirical / bound"))


@command("verify")
@click.option("--nmax", type=int, default=10_000, show_default=True)
@click.option("--sets", "n_sets", type=int, default=20, show_default=True)
def verify_cmd(**params):
    """Sieve vs trial division and the convolution identity on seeded random sets."""
    params["seed"] = 0 if params.get("seed") is None else params["seed"]
    run = Run("verify", params, need=params["nmax"])
    results = run_suite(params["seed"], params["nmax"], params["n_sets"], **run.kw)
    for name, res in results.items():
        click.echo(f"{name}: {res.checks - len(res.failures)} passed, {len(res.failures)} failed")
        for line in res.failures[:10]:
            click.echo(f"  {line}")
    ok = all(r.ok for r in results.values())
    run.emit({name: {"checks": r.checks, "failures": r.failures} for name, r in results.items()})
    if not ok:
        click.echo("verification FAILED")
        sys.exit(EXIT_VERIFY)
    click.echo("all identities hold")


@command("sieve-dump")
@click.option("--lo", type=int, default=1, show_default=True)
@click.option("--hi", type=int, required=True)
@click.option("--c-part", is_flag=True, help="Include the n_C plane (CSV only).")
@click.option("--binary", is_flag=True, help="Write the LLSV binary dump instead of CSV/JSON.")
def sieve_dump_cmd(**params):
    """Write omega_A, Omega_A, lambda_A (and optionally n_C) over [lo, hi]."""
    run = Run("sieve-dump", params, need=params["hi"])
    table = sieve.sieve_table(run.cset, params["lo"], params["hi"], with_c_part=params["c_part"],
                              **run.kw)
    click.echo(f"[{table.lo}, {table.hi}] lambda sum = {int(table.lam.sum(dtype='int64'))}")
    if not run.out:
        return
    if params["binary"]:
        Path(run.out).write_bytes(table.to_bytes())
    elif run.fmt == "csv":
        Path(run.out).write_text(table.to_csv())
    else:
        run.emit({"lo": table.lo, "hi": table.hi, "omega": table.omega,
                  "big_omega": table.big_omega, "lambda": table.lam,
                  **({"n_C": table.n_C} if table.n_C is not None else {})})


if __name__ == "__main__":
    main()
