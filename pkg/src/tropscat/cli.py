"""Command-line front end: tropscat validate | monodromy | singular-locus | gluing-check | scatter | check | act."""
from __future__ import annotations

import json
import sys
from fractions import Fraction
from pathlib import Path

import click

from .algebra.laurent import Laurent, RingElement
from .algebra.text import format_function, format_slab, parse_function, parse_slab
from .formats import schema_errors
from .gluing import check_gluing, check_lifting_condition, check_slab_functions
from .manifold.complex import IntegralTropicalManifold, SchemaError, manifold_from_json
from .manifold.singular import singular_locus
from .manifold.validate import validate_manifold
from .monodromy import (check_positive, check_simple, check_strongly_simple, kappa_table, monodromy,
                        monodromy_polytopes)
from .scattering.consistency import apply_path, check_consistency, complete, initial_diagram, path_crossings
from .scattering.decompose import decompose
from .scattering.diagram import DiagramError, ScatteringDiagram, diagram_from_json

OK, INCONSISTENT, INPUT_ERROR = 0, 2, 1


class InputError(Exception):
    pass


def _plain(x):
    if isinstance(x, Fraction):
        return int(x) if x.denominator == 1 else str(x)
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    return x


def _dump(obj) -> str:
    return json.dumps(_plain(obj), indent=2)


def _read_json(path: str) -> dict:
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise InputError(f"{path}: {e.strerror}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise InputError(f"{path}: line {e.lineno}, column {e.colno}: {e.msg}") from None
    if not isinstance(data, dict):
        raise InputError(f"{path}: top level must be an object")
    return data


def _conform(path: str, data: dict, kind: str):
    errs = schema_errors(data, kind)
    if errs:
        more = f" (and {len(errs) - 1} more)" if len(errs) > 1 else ""
        raise InputError(f"{path}: {errs[0]}{more}")


def _load_manifold(path: str) -> IntegralTropicalManifold:
    data = _read_json(path)
    if "manifold" in data and "cells" not in data:
        data = data["manifold"]
    _conform(path, data, "manifold")
    try:
        return manifold_from_json(data)
    except (SchemaError, KeyError, TypeError, ValueError) as e:
        raise InputError(f"{path}: {e}") from None


def _load_diagram(path: str, order: int | None) -> ScatteringDiagram:
    """A diagram file, or a manifold file turned into its initial diagram."""
    data = _read_json(path)
    _conform(path, data, "manifold" if "cells" in data else "diagram")
    try:
        if "cells" in data:
            m = manifold_from_json(data)
            return initial_diagram(m, order=order or 1)
        return diagram_from_json(data, order)
    except (SchemaError, DiagramError, KeyError, TypeError, ValueError) as e:
        raise InputError(f"{path}: {e}") from None


def _emit(ctx_json: bool, payload: dict, text: str):
    click.echo(_dump(payload) if ctx_json else text)


def _wants_json(as_json: bool, fmt: str) -> bool:
    return as_json or fmt == "json"


def output_options(f):
    f = click.option("--format", "fmt", type=click.Choice(["json", "text"]), default="text",
                     help="Report format.")(f)
    f = click.option("--json", "as_json", is_flag=True, help="Same as --format json.")(f)
    return f


def _run(body):
    try:
        code = body()
    except InputError as e:
        click.echo(f"error: {e}", err=True)
        code = INPUT_ERROR
    except DiagramError as e:
        click.echo(f"error: {e}", err=True)
        code = INPUT_ERROR
    sys.exit(code)


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
@click.version_option(package_name="artifact")
def main():
    """Exact tropical manifolds, gluing data and scattering diagrams."""


def _plural(n: int, word: str, many: str) -> str:
    return f"{n} {word if n == 1 else many}"


@main.command()
@click.argument("path")
@click.option("--certify", type=click.Choice(["simple", "strong"]), default="strong",
              help="Simplicity level to certify.")
@click.option("--allow-boundary", is_flag=True, help="Skip completeness of vertex fans (manifolds with boundary).")
@output_options
def validate(path, certify, allow_boundary, as_json, fmt):
    """Check the manifold axioms, positivity, simplicity and count essential strata."""
    def body():
        m = _load_manifold(path)
        rep = validate_manifold(m, allow_boundary=allow_boundary)
        payload = {"file": path, "valid": rep.ok, "failures": [f.to_json() for f in rep.failures]}
        if not rep.ok:
            lines = ["invalid"] + [f"  {f.axiom}: {f.message}" for f in rep.failures]
            _emit(_wants_json(as_json, fmt), payload, "\n".join(lines))
            return INCONSISTENT
        pos = check_positive(m)
        cert = check_strongly_simple(m) if certify == "strong" else check_simple(m)
        label = "strongly simple" if certify == "strong" else "simple"
        strata = singular_locus(m, essential_only=True)
        payload.update({"positive": pos.ok, label.replace(" ", "_"): cert.ok,
                        "violations": pos.violations + cert.violations,
                        "essential_strata": len(strata)})
        parts = ["valid"]
        if not pos.ok:
            parts.append("not positive")
        parts.append(label if cert.ok else f"not {label}")
        parts.append(_plural(len(strata), "essential stratum", "essential strata"))
        lines = ["; ".join(parts)] + [f"  {v}" for v in pos.violations + cert.violations]
        _emit(_wants_json(as_json, fmt), payload, "\n".join(lines))
        return OK if pos.ok and cert.ok else INCONSISTENT
    _run(body)


@main.command("monodromy")
@click.argument("path")
@click.option("--certify", type=click.Choice(["simple", "strong"]), default=None,
              help="Also certify positivity and simplicity; exit 2 on failure.")
@output_options
def monodromy_cmd(path, certify, as_json, fmt):
    """Monodromy transformations, kappa table and monodromy polytopes."""
    def body():
        m = _load_manifold(path)
        rep = validate_manifold(m, allow_boundary=True)
        if not rep.ok:
            raise InputError(f"{path}: not a valid manifold: {rep.messages()[0]}")
        rows = []
        for (omega, rho), k in sorted(kappa_table(m).items()):
            plus, minus = m.codim_one_sides(rho)
            v = m.vertices(omega)[0]
            t = monodromy(m, v, plus, minus, ("both", omega, rho))
            rows.append({"edge": omega, "facet": rho, "base": v, "kappa": k,
                         "matrix": [[int(x) for x in r] for r in t.matrix], "unipotent": t.is_unipotent()})
        lines = [f"kappa({r['edge']}, {r['facet']}) = {r['kappa']}; monodromy at {r['base']}: {r['matrix']}"
                 f"{' (unipotent)' if r['unipotent'] else ''}" for r in rows]
        if not rows:
            lines = ["no bounded edges in codimension one cells; monodromy is trivial"]
        polys = {t: c.to_json() for t, c in sorted(monodromy_polytopes(m).items())}
        payload = {"file": path, "monodromy": rows, "polytopes": polys}
        code = OK
        if certify:
            pos = check_positive(m)
            cert = check_strongly_simple(m) if certify == "strong" else check_simple(m)
            label = "strongly simple" if certify == "strong" else "simple"
            payload.update({"positive": pos.ok, label.replace(" ", "_"): cert.ok,
                            "violations": pos.violations + cert.violations})
            lines.append(f"{'positive' if pos.ok else 'not positive'}; {label if cert.ok else 'not ' + label}")
            lines += [f"  {v}" for v in pos.violations + cert.violations]
            code = OK if pos.ok and cert.ok else INCONSISTENT
        _emit(_wants_json(as_json, fmt), payload, "\n".join(lines))
        return code
    _run(body)


@main.command("singular-locus")
@click.argument("path")
@click.option("--essential", is_flag=True, help="Only the essential strata.")
@output_options
def singular_locus_cmd(path, essential, as_json, fmt):
    """Strata of the singular locus, cell by cell."""
    def body():
        m = _load_manifold(path)
        strata = singular_locus(m, essential_only=essential)
        lines = [f"{s.cell}: dimension {s.dim}{', essential' if s.essential else ''}" for s in strata]
        n_ess = sum(1 for s in strata if s.essential)
        lines.append(f"{_plural(len(strata), 'stratum', 'strata')} ({n_ess} essential)")
        _emit(_wants_json(as_json, fmt), {"file": path, "strata": [s.to_json() for s in strata]}, "\n".join(lines))
        return OK
    _run(body)


@main.command("gluing-check")
@click.argument("path")
@output_options
def gluing_check(path, as_json, fmt):
    """Cocycle condition, lifting condition and slab-function conditions."""
    def body():
        m = _load_manifold(path)
        reports = {"cocycle": check_gluing(m), "lifting": check_lifting_condition(m),
                   "slab functions": check_slab_functions(m)}
        lines = []
        for name, rep in reports.items():
            lines.append(f"{name}: {'ok' if rep.ok else 'fails'}")
            lines.extend(f"  {msg}" for msg in rep.messages())
        payload = {"file": path, **{k.replace(" ", "_"): r.to_json() for k, r in reports.items()}}
        _emit(_wants_json(as_json, fmt), payload, "\n".join(lines))
        return OK if all(r.ok for r in reports.values()) else INCONSISTENT
    _run(body)


def _diagram_text(d: ScatteringDiagram) -> list[str]:
    head = f"diagram {d.name or '(unnamed)'} at order {d.order}: " \
           f"{_plural(len(d.walls), 'wall', 'walls')}, {_plural(len(d.slabs), 'slab', 'slabs')}"
    lines = [head]
    lines += [f"  {w.describe()}" for w in d.walls]
    lines += [f"  {s.id} on {s.cell} at {s.vertex}: f = {_slab_poly(s)}" for s in d.slabs]
    return lines


def _slab_poly(s) -> str:
    ring = Laurent(s.rank, 0)
    return format_function(RingElement(ring, {(0, m): c for m, c in s.f}))


@main.command()
@click.argument("path", required=False)
@click.option("--in", "in_path", help="Manifold (or diagram) file; alternative to the positional argument.")
@click.option("--order", "order", type=int, required=True, help="Target q-order k.")
@click.option("--diagram", "out", help="Write the completed diagram JSON here.")
@output_options
def scatter(path, in_path, order, out, as_json, fmt):
    """Complete a diagram (or a manifold's initial diagram) to order k."""
    def body():
        src = in_path or path
        if not src:
            raise InputError("no input file")
        if order < 1:
            raise InputError("--order must be at least 1")
        d = complete(_load_diagram(src, order), order)
        rep = check_consistency(d, order)
        payload = d.to_json()
        if out:
            Path(out).write_text(_dump(payload) + "\n")
        lines = _diagram_text(d) + [rep.text().splitlines()[-1]]
        if _wants_json(as_json, fmt):
            click.echo(_dump(payload))
        else:
            click.echo("\n".join(lines))
        return OK if rep.consistent else INCONSISTENT
    _run(body)


@main.command()
@click.argument("path")
@click.option("--order", "order", type=int, default=None, help="q-order k (defaults to the file's order).")
@output_options
def check(path, order, as_json, fmt):
    """Path-ordered products around every joint, and the slab conditions at singular points."""
    def body():
        d = _load_diagram(path, order)
        rep = check_consistency(d, order or d.order)
        _emit(_wants_json(as_json, fmt), rep.to_json(), rep.text())
        return OK if rep.consistent else INCONSISTENT
    _run(body)


@main.command()
@click.argument("path")
@click.option("--path", "chambers", required=True, help='Chamber sequence, e.g. "C0,C1" or "C5,S0,C4".')
@click.option("--element", required=True, help="Function in text form, e.g. \"z^(0,1) + q z^(1,0)\" or \"v\".")
@click.option("--order", "order", type=int, default=None, help="q-order k (defaults to the file's order).")
@output_options
def act(path, chambers, element, order, as_json, fmt):
    """Carry a function across the walls (and slabs) met along a chamber path."""
    def body():
        d = _load_diagram(path, order)
        dec = decompose(d)
        steps = path_crossings(d, chambers, dec)
        slabs = [i for c, _ in steps for k, i, _ in c.items if k == "slab"]
        try:
            if slabs:
                x = parse_slab(element, d.slab(slabs[0]).ring(d.order))
            else:
                x = parse_function(element, Laurent(d.rank, d.order))
        except ValueError as e:
            raise InputError(f"--element: {e}") from None
        y = apply_path(d, chambers, x, dec)
        text = format_slab(y) if slabs else format_function(y)
        _emit(_wants_json(as_json, fmt), {"path": chambers, "element": element, "result": text}, text or "0")
        return OK
    _run(body)


if __name__ == "__main__":
    main()
