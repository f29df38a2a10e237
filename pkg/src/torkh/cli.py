"""Command line interface: ``torkh kh|lee|s|predict|jones|verify``."""

from __future__ import annotations

import json
import sys
from math import gcd

import click

from . import formulas
from .cache import Cache
from .engine import BigradedTable, BracketTooLarge, ResourceLimit, jones_kauffman, parse_ring
from .lee import filtration_table, gr_dimensions, lee_complex, barnatan_complex, s_invariant
from .links import InvalidParameter, parse_link, parse_orientation
from .verify import (FAIL, PASS, kh_table, verify_filtration, verify_les_additivity,
                     verify_lower_bound, verify_q_relations, verify_recursions)

# crossings allowed without --slow
BUDGET = {"Z": 20, "default": 30}


class LinkArg(click.ParamType):
    name = "link"

    def convert(self, value, param, ctx):
        try:
            return parse_link(value)
        except (InvalidParameter, ValueError) as exc:
            self.fail(str(exc), param, ctx)


class RingArg(click.ParamType):
    name = "ring"

    def convert(self, value, param, ctx):
        if not isinstance(value, str):
            return value
        try:
            return parse_ring(value)
        except ValueError as exc:
            self.fail(str(exc), param, ctx)


LINK = LinkArg()
RING = RingArg()


def _fmt_option(f):
    return click.option("--format", "fmt", type=click.Choice(["json", "csv", "table"]),
                        default="table", show_default=True)(f)


def _common(f):
    f = click.option("--cache-dir", type=click.Path(file_okay=False), default=None,
                     help="Cache directory (defaults to $TORKH_CACHE).")(f)
    f = click.option("--max-generators", type=int, default=None,
                     help="Abort when the running complex grows past this size.")(f)
    f = click.option("--slow", is_flag=True, help="Lift the default crossing budget.")(f)
    return f


def _check_budget(diag, ring, slow):
    limit = BUDGET.get(ring.name, BUDGET["default"])
    if not slow and len(diag.crossings) > limit:
        raise click.UsageError(
            f"{len(diag.crossings)} crossings exceed the default budget of {limit} "
            f"over {ring.name}; pass --slow to run anyway")


def _emit_table(table: BigradedTable, fmt):
    if fmt == "json":
        click.echo(table.dumps())
    elif fmt == "csv":
        click.echo(table.to_csv(), nl=False)
    else:
        click.echo(table.render())


@click.group()
def main():
    """Khovanov and Lee homology of links, with torus-link predictions."""


@main.command()
@click.argument("link", type=LINK)
@click.option("--ring", type=RING, default="Z", show_default=True)
@_fmt_option
@_common
def kh(link, ring, fmt, cache_dir, max_generators, slow):
    """Khovanov homology of LINK."""
    _check_budget(link, ring, slow)
    cache = Cache.from_env(cache_dir)
    try:
        table = kh_table(link, ring, cache, max_generators)
    except ResourceLimit as exc:
        raise click.ClickException(str(exc)) from exc
    _emit_table(table, fmt)


@main.command()
@click.argument("link", type=LINK)
@click.option("--ring", type=RING, default="Q", show_default=True)
@click.option("--levels", is_flag=True, help="Print dim F_j per degree instead of gr.")
@_fmt_option
@_common
def lee(link, ring, levels, fmt, cache_dir, max_generators, slow):
    """Associated graded of the filtered Lee (Bar-Natan in char 2) homology."""
    _check_budget(link, ring, slow)
    if not ring.is_field:
        raise click.BadParameter("Lee homology is computed over a field", param_hint="--ring")
    build = barnatan_complex if ring.characteristic == 2 else lee_complex
    ft = filtration_table(build(link, ring, max_generators=max_generators))
    if levels:
        if fmt == "json":
            click.echo(json.dumps(ft.to_json(), separators=(",", ":")))
        else:
            for row in ft.to_json():
                cells = " ".join(f"{lv['q']}:{lv['dim_F']}" for lv in row["levels"])
                click.echo(f"h={row['h']}  {cells}")
        return
    _emit_table(gr_dimensions(ft), fmt)


@main.command()
@click.argument("link", type=LINK)
@click.option("--orientation", default="", help="Reversed components, e.g. rev=1,3.")
@click.option("--ring", type=RING, default="Q", show_default=True)
@_fmt_option
@_common
def s(link, orientation, ring, fmt, cache_dir, max_generators, slow):
    """s-invariant of LINK with the given components reversed."""
    _check_budget(link, ring, slow)
    try:
        rev = parse_orientation(orientation)
        value = s_invariant(link, rev, ring, max_generators=max_generators)
    except InvalidParameter as exc:
        raise click.BadParameter(str(exc), param_hint="--orientation") from exc
    if fmt == "json":
        out = {"s": value, "orientation": list(rev), "field": ring.name}
        if ring.characteristic == 2:
            out["experimental"] = True
        click.echo(json.dumps(out))
    else:
        click.echo(value)


@main.command()
@click.argument("link", type=LINK)
@_fmt_option
@click.option("--slow", is_flag=True, help="Lift the default crossing cap.")
def jones(link, fmt, slow):
    """Unnormalized Jones polynomial from the Kauffman bracket."""
    try:
        poly = jones_kauffman(link, limit=len(link.crossings) if slow else None)
    except BracketTooLarge as exc:
        raise click.UsageError(f"{exc}; pass --slow to run anyway") from exc
    if fmt == "json":
        click.echo(json.dumps({str(q): c for (_, q), c in sorted(poly.terms.items())}))
    else:
        click.echo(repr(poly))


def _torus_args(target):
    kind, _, body = target.partition(":")
    if kind != "torus":
        raise click.BadParameter("predictions need a torus:n,m link")
    try:
        n, m = (int(v) for v in body.split(","))
    except ValueError as exc:
        raise click.BadParameter(str(exc)) from exc
    return n, m


@main.command()
@click.argument("what", type=click.Choice(["gr", "s", "lee-rank", "staircase", "L", "K",
                                           "relations"]))
@click.argument("target")
@click.option("--orientation", default="", help="Reversed components for `s`.")
@click.option("--family", type=click.Choice(["nn", "n1n"]), default="nn")
@_fmt_option
def predict(what, target, orientation, family, fmt):
    """Closed-form predictions.

    TARGET is ``torus:n,m`` for gr, s and lee-rank, and an integer n for
    staircase, L, K and relations (relations checks 3..n).
    """
    try:
        if what in ("gr", "s", "lee-rank"):
            n, m = _torus_args(target)
            if what == "gr":
                _emit_table(formulas.gr_lee_torus(n, m), fmt)
            elif what == "lee-rank":
                click.echo(json.dumps(formulas.lee_rank_torus(n, m), sort_keys=True))
            else:
                rev = parse_orientation(orientation)
                d = gcd(n, abs(m))
                click.echo(formulas.s_torus(n, m, d - len(rev), len(rev)))
            return
        n = int(target)
        if what == "staircase":
            top = formulas.h_max(n, family)
            fn = formulas.q_nn if family == "nn" else formulas.q_n1n
            rows = {h: fn(n, h) for h in range(top + 1)}
            click.echo(json.dumps(rows) if fmt == "json"
                       else "\n".join(f"{h}\t{v}" for h, v in rows.items()))
        elif what in ("L", "K"):
            poly = formulas.L_poly(n) if what == "L" else formulas.K_poly(n)
            click.echo(json.dumps(poly.to_json()) if fmt == "json" else repr(poly))
        else:
            rep = formulas.check_q_relations(range(3, n + 1))
            click.echo(json.dumps(rep.to_json()))
            sys.exit(0 if rep.ok else 1)
    except InvalidParameter as exc:
        raise click.BadParameter(str(exc)) from exc
    except ValueError as exc:
        raise click.BadParameter(str(exc)) from exc


def _claim_crossings(claim, n, m, i, family):
    if claim == "lower-bound":
        return n * n - (n if family == "nn" else 0)
    if claim == "les":
        m = n - 1 if m is None else m
        return (n - 1) * m + (n - 1 if i is None else i)
    if claim == "recursions":
        return n * n
    return (n - 1) * (n if m is None else m)


@main.command()
@click.argument("claim", type=click.Choice(["lower-bound", "les", "recursions", "filtration",
                                            "relations"]))
@click.option("--n", "n", type=int, required=False)
@click.option("--m", "m", type=int, default=None)
@click.option("--i", "i", type=int, default=None, help="Omit to run every i.")
@click.option("--family", type=click.Choice(["nn", "n1n"]), default="nn")
@click.option("--ring", type=RING, default="Q", show_default=True)
@_fmt_option
@_common
def verify(claim, n, m, i, family, ring, fmt, cache_dir, max_generators, slow):
    """Replay a claim; exit 0 iff every report passes."""
    cache = Cache.from_env(cache_dir)
    if claim != "relations" and n is None:
        raise click.UsageError("--n is required")
    if claim != "relations" and not slow:
        size = _claim_crossings(claim, n, m, i, family)
        limit = BUDGET.get(ring.name if claim != "recursions" else "Q", BUDGET["default"])
        if size > limit:
            raise click.UsageError(
                f"the largest diagram has {size} crossings, over the default budget of "
                f"{limit}; pass --slow to run anyway")
    try:
        if claim == "lower-bound":
            reports = [verify_lower_bound(n, family, ring, cache, max_generators)]
        elif claim == "les":
            m = n - 1 if m is None else m
            idx = [i] if i is not None else range(1, n)
            reports = [verify_les_additivity(n, m, k, ring, cache, max_generators) for k in idx]
        elif claim == "recursions":
            reports = [verify_recursions(n, cache, max_generators)]
        elif claim == "filtration":
            reports = [verify_filtration(n, n if m is None else m, ring, max_generators)]
        else:
            reports = [verify_q_relations(3, n or 200)]
    except InvalidParameter as exc:
        raise click.BadParameter(str(exc)) from exc
    for rep in reports:
        if fmt == "json":
            click.echo(rep.dumps())
        else:
            mark = {PASS: "PASS", FAIL: "FAIL"}.get(rep.status, "SKIP")
            extra = f" witness={rep.witness}" if rep.witness else ""
            params = " ".join(f"{k}={v}" for k, v in rep.params.items())
            click.echo(f"{mark} {rep.claim} {params} ({rep.elapsed_ms} ms){extra}")
    sys.exit(0 if all(r.status == PASS for r in reports) else 1)


if __name__ == "__main__":
    main()
