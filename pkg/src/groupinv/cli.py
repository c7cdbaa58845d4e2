"""Command-line front end: invariants, verdicts, Reidemeister numbers, the
Cayley-ball probe, and the selfcheck replay of the golden examples.

Every successful invocation prints one JSON document to standard output with
the package version embedded; computation failures print a JSON error object
and exit 1, usage errors exit 2.  Output is deterministic.
"""

from __future__ import annotations

import json
import sys
from fractions import Fraction

import click

from . import __version__
from . import expressions as ex
from .abelian import (
    FGAbelianAutomorphism,
    FiniteGroupTable,
    INFINITE,
    brute_force_twisted_classes,
    reidemeister_number,
)
from .ballprobe import HALF_SPACE, TRUNCATED_CONE, connectivity_probe, default_grid, enumerate_ball
from .catalog import lookup_invariants
from .expressions import parse_group_expr
from .rinf import decide
from .spheres import Direction


def _emit(payload: dict) -> None:
    payload = {"version": __version__, **payload}
    click.echo(json.dumps(payload, indent=2, sort_keys=False))


def _fail(message: str) -> None:
    click.echo(json.dumps({"version": __version__, "error": message}))
    sys.exit(1)


@click.group()
@click.version_option(__version__)
def main():
    """Geometric end-invariants, twisted conjugacy counts, and R-infinity verdicts."""


@main.command()
@click.option("-g", "--group", "text", required=True, help="group expression, e.g. 'BS(1,2) x F(3)'")
@click.option("-n", "--level", default=1, show_default=True, help="invariant level")
def invariants(text: str, level: int):
    """Hom-rank, obstruction set, and surviving directions with provenance."""
    try:
        expr = parse_group_expr(text)
        inv = lookup_invariants(expr)
        _emit({"group": expr.label(), **inv.summary(level)})
    except (ex.ParseError, ValueError) as exc:
        _fail(str(exc))


@main.command()
@click.option("-g", "--group", "text", required=True, help="group expression")
def rinf(text: str):
    """R-infinity verdict with its derivation trace."""
    try:
        expr = parse_group_expr(text)
        verdict = decide(expr)
        _emit({"group": expr.label(), **verdict.to_json_dict()})
    except (ex.ParseError, ValueError) as exc:
        _fail(str(exc))


@main.command()
@click.option("--matrix", default=None, help="JSON matrix for the free part, e.g. '[[-1]]'")
@click.option("--torsion", default=None, help="JSON list of invariant factors, e.g. '[2,4]'")
@click.option("--torsion-map", default=None, help="JSON matrix acting on the torsion part")
@click.option("--mixing", default=None, help="JSON matrix: torsion components of free images")
@click.option("--table", default=None,
              help="JSON n x n multiplication table of a finite group (brute-force path)")
@click.option("--automorphism", default=None,
              help="JSON permutation list; automorphism of the --table group")
def reidemeister(matrix: str | None, torsion: str | None, torsion_map: str | None,
                 mixing: str | None, table: str | None, automorphism: str | None):
    """Twisted conjugacy class count: exact on Z^k + torsion via --matrix,
    or by orbit enumeration over a finite multiplication table via --table."""
    try:
        if (matrix is None) == (table is None):
            raise ValueError("give exactly one of --matrix or --table")
        if table is not None:
            group = FiniteGroupTable(tuple(tuple(row) for row in json.loads(table)))
            perm = (json.loads(automorphism) if automorphism
                    else list(range(group.order)))
            count, reps = brute_force_twisted_classes(group, perm)
            _emit({"reidemeister": count, "representatives": reps})
            return
        free_part = json.loads(matrix)
        factors = json.loads(torsion) if torsion else []
        tmap = json.loads(torsion_map) if torsion_map else None
        mix = json.loads(mixing) if mixing else None
        phi = FGAbelianAutomorphism.from_matrix(free_part, factors, tmap, mix)
        value = reidemeister_number(phi)
        _emit({"reidemeister": "infinity" if value == INFINITE else value})
    except (ValueError, json.JSONDecodeError) as exc:
        _fail(str(exc))


@main.command()
@click.option("--atom", "atom_text", required=True,
              help="probe atom: Z^k, F(n), BS(1,n), or Klein")
@click.option("--dir", "direction_text", required=True,
              help="direction as comma-separated integers, e.g. '1,0'")
@click.option("--mode", type=click.Choice([HALF_SPACE, TRUNCATED_CONE]),
              default=HALF_SPACE, show_default=True)
@click.option("--radius", default=6, show_default=True)
@click.option("--grid", default=None,
              help="comma-separated scales (rationals allowed), e.g. '0,1/2,1,2'")
@click.option("--lambda-max", "lambda_max", default="1", show_default=True,
              help="retreat budget (rational)")
@click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default="json",
              show_default=True)
def probe(atom_text: str, direction_text: str, mode: str, radius: int,
          grid: str | None, lambda_max: str, fmt: str):
    """Connectivity probe of half-space or truncated-cone sublevel sets."""
    try:
        expr = parse_group_expr(atom_text)
        if expr.node != "atom":
            raise ValueError("the probe runs on single atoms, not products")
        gamma = Direction([int(c) for c in direction_text.split(",")])
        scales = (default_grid(radius) if grid is None
                  else [Fraction(chunk) for chunk in grid.split(",")])
        ball = enumerate_ball(expr.atom, radius)
        report = connectivity_probe(ball, gamma, scales, mode, Fraction(lambda_max))
        if fmt == "csv":
            click.echo(report.to_csv())
        else:
            _emit(report.to_json_dict())
    except (ex.ParseError, ValueError) as exc:
        _fail(str(exc))


@main.command()
def selfcheck():
    """Replay the acceptance criteria and the golden examples."""
    from .selfcheck import run_all

    results = run_all()
    for result in results:
        click.echo(result.line(), err=True)
    _emit({"selfcheck": [{"name": r.name, "ok": r.ok, "detail": r.detail} for r in results],
           "ok": all(r.ok for r in results)})
    if not all(r.ok for r in results):
        sys.exit(1)


if __name__ == "__main__":
    main()
