"""Command-line front end: batch verification plus one-off queries.

The CLI stays a thin layer over the core package; the same operations back
the HTTP service (see service.py), which `kgsym serve` launches.
"""

from __future__ import annotations

import json
import sys

import click

from .geometry import catalog
from .grammar import ParseError, to_string
from .kernel import KernelError
from .ops import check_vector, derive_conserved, reduce_ansatz
from .reports import Report, render_records, render_table
from .suites import SUITES, SuiteContext, run_suites

_EPS_CHOICES = {"+1": (1,), "-1": (-1,), "both": (1, -1)}


@click.group()
@click.option("--format", "fmt", type=click.Choice(["table", "records"]), default="table",
              help="Human-aligned table or one machine-readable line per check.")
@click.option("--data-dir", type=click.Path(), default=None,
              help="Directory overriding the packaged table data files.")
@click.option("--eps", type=click.Choice(sorted(_EPS_CHOICES)), default="both",
              help="Signature instantiations a zero-test must satisfy.")
@click.option("--jobs", type=int, default=1, help="Parallel suite workers for 'verify all'.")
@click.pass_context
def main(ctx, fmt, data_dir, eps, jobs):
    """Exact symbolic verification of the Klein-Gordon symmetry classification
    on flat 3-space (eps = +1 Euclidean, -1 Minkowski)."""
    ctx.obj = {
        "fmt": fmt,
        "ctx": SuiteContext(data_dir=data_dir, eps_signs=_EPS_CHOICES[eps]),
        "jobs": jobs,
    }


def _emit(obj, reports: list[Report]) -> None:
    if obj["fmt"] == "records":
        click.echo(render_records(reports))
    else:
        click.echo(render_table(reports))


def _exit(reports: list[Report]) -> None:
    sys.exit(0 if all(r.ok for r in reports) else 1)


@main.command("catalog")
@click.pass_obj
def catalog_cmd(obj):
    """Print the ten conformal generators with classes and factors."""
    for k, (X, cls) in enumerate(catalog(obj["ctx"].data_dir), start=1):
        click.echo(f"X{k}: xi = ({to_string(X.xi_t)}, {to_string(X.xi_x)}, "
                   f"{to_string(X.xi_y)})  {cls}")


@main.command("verify")
@click.argument("suite", type=click.Choice([*SUITES, "potentials", "all"]))
@click.option("--table", "table_id", type=click.Choice(["3", "4", "grid", "grid1"]),
              default=None, help="Required with 'verify potentials'.")
@click.pass_obj
def verify_cmd(obj, suite, table_id):
    """Run one verification suite (or 'all'); exit 0 iff no check fails."""
    if suite == "potentials":
        if table_id is None:
            raise click.UsageError("verify potentials requires --table")
        names = [f"potentials-{table_id}"]
    elif suite == "all":
        names = list(SUITES)
    else:
        names = [suite]
    try:
        reports = run_suites(names, obj["ctx"], jobs=obj["jobs"])
    except Exception as err:
        raise click.ClickException(str(err)) from err
    _emit(obj, reports)
    _exit(reports)


@main.command("check")
@click.option("--vector", required=True, help="xi_t,xi_x,xi_y (comma-separated expressions).")
@click.option("--psi", default=None, help="Stated conformal factor (verified against the vector).")
@click.option("--potential", required=True)
@click.option("--eta", default=None, help="Optional u-component, of the form c(t,x,y)*u.")
@click.pass_obj
def check_cmd(obj, vector, psi, potential, eta):
    """Constraint and invariance check for one generator/potential pair."""
    try:
        rep = check_vector(vector, psi, potential, eta, obj["ctx"].eps_signs)
    except (ParseError, KernelError) as err:
        raise click.ClickException(str(err)) from err
    _emit(obj, [rep])
    _exit([rep])


@main.group("derive")
def derive_group():
    """Derivations from the Noether machinery."""


@derive_group.command("conserved")
@click.option("--vector", required=True)
@click.option("--potential", required=True)
@click.option("--eta", default=None)
@click.pass_obj
def derive_conserved_cmd(obj, vector, potential, eta):
    """Noether-derived conserved vector (T^t, T^x, T^y) with its gauge."""
    try:
        out = derive_conserved(vector, potential, eta, obj["ctx"].eps_signs)
    except (ParseError, KernelError) as err:
        raise click.ClickException(str(err)) from err
    click.echo(json.dumps(out, indent=2))
    sys.exit(0 if out["divergence_zero"] else 1)


@main.command("reduce")
@click.option("--ansatz", required=True, help="shape * f(args), e.g. exp(k1*x)*zeta(t,y).")
@click.option("--potential", required=True)
def reduce_cmd(ansatz, potential):
    """Symmetry reduction of the field equation by an invariant ansatz."""
    try:
        out = reduce_ansatz(ansatz, potential)
    except (ParseError, KernelError) as err:
        raise click.ClickException(str(err)) from err
    click.echo(json.dumps(out, indent=2))


@main.command("serve")
@click.option("--host", default="127.0.0.1")
@click.option("--port", default=8000, type=int)
@click.pass_obj
def serve_cmd(obj, host, port):
    """Launch the HTTP verification service."""
    import uvicorn

    from .service import create_app

    uvicorn.run(create_app(obj["ctx"].data_dir), host=host, port=port)


if __name__ == "__main__":
    main()
