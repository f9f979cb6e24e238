"""Command line front end.

Every command prints a report (JSON by default, TSV for tables) that embeds
the configuration and its hash.  Exit status: 0 when all checks pass, 2 on a
verification failure, 3 when an enumeration cap is exceeded, 1 on usage errors.
"""

from __future__ import annotations

import hashlib
import json
import sys
from fractions import Fraction

import click

from . import canon, ffla, hall, rep
from . import liealg as la
from . import modbuild as mb
from .ffla import EnumerationTooLarge

EXIT_OK, EXIT_FAIL, EXIT_CAP = 0, 2, 3
SEED = mb.SEED


class VerificationFailed(Exception):
    pass


def _jsonable(x):
    if isinstance(x, Fraction):
        return str(x) if x.denominator != 1 else int(x.numerator)
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (mb.Root, mb.TubeNH, mb.TubeHom, mb.HomSum)):
        return str(x)
    if hasattr(x, "item"):
        return x.item()
    return x


def config_hash(config: dict) -> str:
    blob = json.dumps(_jsonable(config), sort_keys=True).encode()
    return hashlib.sha256(blob).hexdigest()[:16]


def parse_dimvec(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(t) for t in text.replace(" ", "").split(","))
    except ValueError:
        raise click.BadParameter(f"not a dimension vector: {text!r}")


def dimvec_for(Q, text: str) -> tuple[int, ...]:
    v = parse_dimvec(text)
    if len(v) != Q.nv:
        raise click.BadParameter(f"{text!r} has {len(v)} entries, {Q.ctype.name} has {Q.nv} vertices")
    return v


def parse_fields(text: str, type_name: str | None = None) -> tuple[int, ...]:
    if not text:
        return hall.battery_for(type_name or "")
    qs = tuple(int(t) for t in text.split(","))
    for q in qs:
        if q < 3:
            raise click.BadParameter("fields must have q >= 3")
        if type_name and type_name.upper() == "E8" and q % 2 == 0:
            raise click.BadParameter("E8 needs odd characteristic")
        ffla.field_of_order(q)
    return qs


def emit(ctx: click.Context, command: str, config: dict, result, rows: list[dict] | None = None) -> None:
    config = {"command": command, "seed": SEED, "cap": ffla.CAP_OVERRIDE, **config}
    h = config_hash(config)
    if ctx.obj["format"] == "tsv" and rows is not None:
        click.echo(f"# config_hash\t{h}")
        click.echo(f"# config\t{json.dumps(_jsonable(config), sort_keys=True)}")
        if rows:
            cols = list(rows[0])
            click.echo("\t".join(cols))
            for r in rows:
                click.echo("\t".join(_cell(r[c]) for c in cols))
        return
    out = {"config": config, "config_hash": h, "result": result}
    click.echo(json.dumps(_jsonable(out), indent=2, sort_keys=False))


def _cell(v) -> str:
    if isinstance(v, (list, tuple)):
        return ",".join(str(t) for t in v)
    return str(_jsonable(v))


@click.group()
@click.option("--format", "fmt", type=click.Choice(["json", "tsv"]), default="json")
@click.option("--cap", type=int, default=None, envvar="CANHALL_CAP", help="Override every enumeration cap.")
@click.pass_context
def main(ctx: click.Context, fmt: str, cap: int | None) -> None:
    """Canonical algebras, Hall numbers and the Lie algebras built from them."""
    ctx.ensure_object(dict)
    ctx.obj["format"] = fmt
    ffla.CAP_OVERRIDE = cap


@main.command("type-info")
@click.argument("type_name")
@click.pass_context
def type_info(ctx, type_name):
    """Quiver, Cartan, Euler and Coxeter data."""
    Q = canon.build(type_name)
    res = {
        "type": Q.ctype.name,
        "weights": list(Q.weights),
        "vertices": Q.nv,
        "arrows": [(a.name, a.source, a.target) for a in Q.arrows],
        "relation": Q.has_relation,
        "cartan": Q.cartan,
        "euler": Q.euler,
        "coxeter_inverse": Q.coxeter_inv,
        "delta_fixed": canon.coxeter_shift(Q, canon.delta(Q), 1) == canon.delta(Q),
    }
    ok = res["delta_fixed"]
    if Q.r == 3:
        res["coxeter_inverse_matches_closed_form"] = Q.coxeter_inv == canon.coxeter_inverse_display(Q)
        ok = ok and res["coxeter_inverse_matches_closed_form"]
    emit(ctx, "type-info", {"type": type_name}, res)
    if not ok:
        raise VerificationFailed("Coxeter data check failed")


@main.command()
@click.argument("type_name")
@click.option("--shift", "t_max", type=int, default=0, show_default=True)
@click.pass_context
def roots(ctx, type_name, t_max):
    """Positive roots with at most t_max copies of delta."""
    Q = canon.build(type_name)
    rows = []
    for v in canon.roots_enumerate(Q, t_max):
        rows.append({
            "v": v,
            "deg": canon.deg_dynkin(Q, v),
            "org": canon.org(Q, v),
            "rank": canon.rank(Q, v),
            "component": canon.component(Q, v),
        })
    emit(ctx, "roots", {"type": type_name, "shift": t_max}, rows, rows)


@main.command()
@click.argument("type_name")
@click.argument("dimvec")
@click.option("--q", type=int, default=3, show_default=True)
@click.pass_context
def module(ctx, type_name, dimvec, q):
    """Build M(v) and report its invariants."""
    Q = canon.build(type_name)
    F = ffla.field_of_order(q)
    v = dimvec_for(Q, dimvec)
    M = mb.module_for_root(Q, F, v)
    indec = rep.is_indecomposable(M)
    res = {
        "rep": rep.rep_to_json(M),
        "indecomposable": indec,
        "relation": rep.check_relation(M),
        "component": canon.component(Q, v),
        "key": str(mb.to_tube_key(Q, F, mb.key_of(M))),
        "end_dim": rep.end(M).dim,
    }
    emit(ctx, "module", {"type": type_name, "v": v, "q": q}, res)
    if not (indec and res["relation"]):
        raise VerificationFailed("module is not an indecomposable representation")


def _triple(Q, F, x, y, z):
    return tuple(mb.module_for_root(Q, F, dimvec_for(Q, t)) for t in (x, y, z))


@main.command("hall")
@click.argument("type_name")
@click.argument("x")
@click.argument("y")
@click.argument("z")
@click.option("--q-list", default="3", show_default=True)
@click.pass_context
def hall_cmd(ctx, type_name, x, y, z, q_list):
    """F_XY^Z for root modules, with the Riedtmann cross-check."""
    Q = canon.build(type_name)
    per_field = {}
    ok = True
    for q in parse_fields(q_list, type_name):
        F = ffla.field_of_order(q)
        X, Y, Z = _triple(Q, F, x, y, z)
        hv = hall.hall_value(X, Y, Z)
        rr = hall.riedtmann_check(X, Y, Z)
        per_field[q] = {"F": hv.count, "method": hv.method, "riedtmann": str(rr.formula), "ok": rr.ok}
        ok = ok and rr.ok
    emit(ctx, "hall", {"type": type_name, "triple": [x, y, z], "q_list": q_list},
         {"triple": [x, y, z], "per_field": per_field})
    if not ok:
        raise VerificationFailed("Riedtmann formula disagrees with the direct count")


@main.command("hall-poly")
@click.argument("type_name")
@click.argument("x")
@click.argument("y")
@click.argument("z")
@click.option("--q-list", default="", help="Comma separated field sizes (default battery).")
@click.pass_context
def hall_poly_cmd(ctx, type_name, x, y, z, q_list):
    """Interpolated Hall polynomial with held-out validation."""
    Q = canon.build(type_name)
    fields = parse_fields(q_list, type_name)
    try:
        poly = hall.hall_poly(lambda F: _triple(Q, F, x, y, z), fields)
        res = {"triple": [x, y, z], **poly.to_dict()}
        ok = poly.validated
    except hall.NoStablePolynomial as e:
        res, ok = {"triple": [x, y, z], "error": str(e)}, False
    emit(ctx, "hall-poly", {"type": type_name, "triple": [x, y, z], "fields": fields}, res)
    if not ok:
        raise VerificationFailed("no stable polynomial")


@main.command("serre-check")
@click.argument("type_name")
@click.option("--q-list", default="3,4,5,7", show_default=True)
@click.option("--q1/--no-q1", default=True, show_default=True)
@click.pass_context
def serre_check(ctx, type_name, q_list, q1):
    """Verify the Serre relations of the Chevalley generators."""
    fields = parse_fields(q_list, type_name)
    reports = la.serre_check(type_name, fields, q1)
    res = [{"mode": r.mode, "checked": r.checked, "ok": r.ok, "failures": [str(f) for f in r.failures]} for r in reports]
    emit(ctx, "serre-check", {"type": type_name, "fields": fields, "q1": q1}, res)
    if not all(r.ok for r in reports):
        raise VerificationFailed("Serre relation failures")


@main.command()
@click.argument("type_name")
@click.option("--q-list", default="3,4,5,7", show_default=True)
@click.option("--jacobi-samples", type=int, default=None, help="Random triples (default: exhaustive up to dim 15, else 10^4).")
@click.option("--export", type=click.Path(dir_okay=False), default=None, help="Write the structure constants as JSON.")
@click.pass_context
def quotient(ctx, type_name, q_list, jacobi_samples, export):
    """Build the quotient algebra and verify it."""
    Q = canon.build(type_name)
    fields = parse_fields(q_list, type_name)
    A = la.build_quotient(type_name, fields)
    samples = jacobi_samples if jacobi_samples is not None else (None if A.dim <= 15 else 10**4)
    bad_j = la.check_jacobi(A, samples, seed=SEED)
    bad_c = la.check_cartan_action(A, Q)
    expected = Q.ctype.n + len(canon.dynkin_roots(Q))
    tab = A.shift_table
    res = {
        "dimension": A.dim,
        "expected": expected,
        "jacobi_triples": "all" if samples is None else samples,
        "jacobi_failures": [list(t) for t in bad_j[:10]],
        "cartan_failures": len(bad_c),
        "shift_scalars": {",".join(map(str, v)): r for v, r in sorted(tab.scalars.items())},
        "shift_multi_path_checks": tab.multi_path_checks,
        "shift_unusual": {",".join(map(str, v)): r for v, r in tab.unusual().items()},
    }
    if export:
        with open(export, "w") as fh:
            json.dump(_jsonable(A.to_json()), fh, indent=1)
    emit(ctx, "quotient", {"type": type_name, "fields": fields, "jacobi_samples": samples}, res)
    if A.dim != expected or bad_j or bad_c:
        raise VerificationFailed("quotient algebra check failed")


@main.command("basis-figure")
@click.argument("type_name", default="D5")
@click.pass_context
def basis_figure(ctx, type_name):
    """Basis classes by part and component, with degree vectors."""
    rows = []
    for r in la.basis_figure(type_name):
        rows.append({
            "part": "positive" if r["sign"] == "+" else "negative",
            "component": r["component"],
            "deg": r["alpha"],
            "lift": r["lift"],
            "tube": r.get("tube", ""),
        })
    counts: dict = {}
    for r in rows:
        counts[(r["part"], r["component"])] = counts.get((r["part"], r["component"]), 0) + 1
    Q = canon.build(type_name)
    summary = {f"{p}/{c}": n for (p, c), n in sorted(counts.items())}
    summary["cartan"] = Q.ctype.n
    summary["total"] = len(rows) + Q.ctype.n
    if ctx.obj["format"] == "tsv":
        emit(ctx, "basis-figure", {"type": type_name}, None, rows)
        for k, n in summary.items():
            click.echo(f"# count\t{k}\t{n}")
    else:
        emit(ctx, "basis-figure", {"type": type_name}, {"counts": summary, "rows": rows})
    if type_name.upper() == "D5":
        want = {"positive/preprojective": 15, "positive/regular": 5, "negative/preinjective": 15, "negative/regular": 5}
        if any(summary.get(k) != n for k, n in want.items()) or summary["total"] != 45:
            raise VerificationFailed("D5 basis counts differ from 15 + 5")


@main.command("e8-sign")
@click.option("--q", "qs", multiple=True, type=int, help="Fields to report raw counts for (default 3).")
@click.option("--lift-fields", default="3,5,7,9", show_default=True, help="Fields used to fit the coefficients.")
@click.pass_context
def e8_sign(ctx, qs, lift_fields):
    """The two edge brackets of S_inf against M(v) and M(v+delta) in type E8."""
    lift = parse_fields(lift_fields, "E8")
    qs = tuple(qs) or (3,)
    parse_fields(",".join(map(str, qs)), "E8")
    ex = la.sign_example("E8", fields=tuple(sorted(set(lift) | set(qs))))
    res = ex.to_dict()
    res["reported_fields"] = list(qs)
    res["c1_at_one"], res["c2_at_one"] = ex.c1.at_one, ex.c2.at_one
    emit(ctx, "e8-sign", {"q": qs, "lift_fields": lift}, res)
    if (ex.c1.at_one, ex.c2.at_one) != (1, -1) or not (ex.c1.validated and ex.c2.validated):
        raise VerificationFailed("expected c1 = +1 and c2 = -1")


@main.command("tau-orbit")
@click.argument("type_name")
@click.argument("dimvec")
@click.option("--t-max", type=int, default=60, show_default=True)
@click.pass_context
def tau_orbit(ctx, type_name, dimvec, t_max):
    """Smallest t with v Phi^{-t} = v + m delta."""
    Q = canon.build(type_name)
    v = dimvec_for(Q, dimvec)
    pair = canon.tau_delta_pair(Q, v, t_max)
    orbit = [canon.coxeter_shift(Q, v, t) for t in range(0, (pair[0] if pair else 0) + 1)]
    res = {"v": v, "t": pair[0] if pair else None, "m": pair[1] if pair else None, "orbit": orbit}
    emit(ctx, "tau-orbit", {"type": type_name, "v": v, "t_max": t_max}, res)
    if pair is None:
        raise VerificationFailed("no delta shift found within t_max")


@main.command("gr-measure")
@click.argument("type_name")
@click.argument("dimvec")
@click.option("--q", type=int, default=3, show_default=True)
@click.pass_context
def gr_measure(ctx, type_name, dimvec, q):
    """Gabriel-Roiter measure and GR-submodules of M(v)."""
    Q = canon.build(type_name)
    F = ffla.field_of_order(q)
    v = dimvec_for(Q, dimvec)
    M = mb.module_for_root(Q, F, v)
    mu = rep.gr_measure(M)
    subs = rep.gr_submodules(M)
    quotients_ok = all(rep.is_indecomposable(rep.quotient(M, U)) for U, _ in subs)
    res = {
        "lengths": list(mu.lengths),
        "value": str(mu.value),
        "gr_submodules": [list(S.dims) for _, S in subs],
        "quotients_indecomposable": quotients_ok,
    }
    emit(ctx, "gr-measure", {"type": type_name, "v": v, "q": q}, res)
    if not quotients_ok:
        raise VerificationFailed("a GR quotient decomposes")


def run(argv=None) -> int:
    try:
        main.main(args=argv, prog_name="canhall", standalone_mode=False)
    except VerificationFailed as e:
        click.echo(f"verification failed: {e}", err=True)
        return EXIT_FAIL
    except EnumerationTooLarge as e:
        click.echo(f"cap exceeded: {e}", err=True)
        return EXIT_CAP
    except (ValueError, ArithmeticError) as e:
        click.echo(f"error: {e}", err=True)
        return 1
    except click.exceptions.Exit as e:
        return e.exit_code
    except click.ClickException as e:
        # usage errors exit 1 so that 2 keeps meaning a failed verification
        e.show()
        return 1
    except click.exceptions.Abort:
        return 1
    return EXIT_OK


def entry() -> None:
    sys.exit(run())


if __name__ == "__main__":
    entry()
