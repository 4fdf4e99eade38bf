"""Command-line surface: point construction, queries, projections, flows,
link sampling, retraction, and the named verification suites.

Exit codes: 0 success, 1 invariant failure, 2 usage or parse error,
3 violated mathematical precondition.
"""

from __future__ import annotations

import json
import os
import sys
from fractions import Fraction

import click
import numpy as np

from . import kernels  # noqa: F401  (applies TNN_STRATA_THREADS on import)
from .cells import cell_of, is_tnn, lusztig_point
from .errors import PreconditionError, TnnStrataError
from .fiber import factor_u, rho
from .flow import (
    default_base,
    flow as run_flow,
    link_sample,
    psi,
    retraction as run_retraction,
    str_of,
)
from .perms import (
    Permutation,
    ReducedWord,
    bruhat_less,
    interval,
)
from .ratmat import RatMatrix
from .verify import RunConfig, SUITES, run_suite

EXIT_OK = 0
EXIT_INVARIANT = 1
EXIT_USAGE = 2
EXIT_PRECONDITION = 3


def _fail(code: int, kind: str, message: str):
    click.echo(json.dumps({"error": kind, "message": message}), err=True)
    sys.exit(code)


def _read_matrix(path: str | None) -> RatMatrix:
    try:
        text = sys.stdin.read() if path in (None, "-") else open(path).read()
        return RatMatrix.from_json_obj(json.loads(text))
    except OSError as exc:
        _fail(EXIT_USAGE, "io", str(exc))
    except (ValueError, KeyError, TypeError, ZeroDivisionError) as exc:
        _fail(EXIT_USAGE, "parse", f"bad matrix JSON: {exc}")


def _parse_perm(text: str, name: str = "permutation") -> Permutation:
    try:
        return Permutation.parse(text)
    except (ValueError, TnnStrataError) as exc:
        _fail(EXIT_USAGE, "parse", f"bad {name} {text!r}: {exc}")


def _emit(obj):
    click.echo(json.dumps(obj, sort_keys=True))


def _float_matrix_obj(x: np.ndarray) -> dict:
    return {"n": int(x.shape[0]), "entries": [[float(v) for v in row] for row in x]}


def _guard(fn):
    """Run fn, mapping math preconditions to exit 3."""
    try:
        return fn()
    except PreconditionError as exc:
        _fail(EXIT_PRECONDITION, type(exc).__name__, str(exc))
    except TnnStrataError as exc:
        _fail(EXIT_INVARIANT, type(exc).__name__, str(exc))


@click.group()
def main():
    """Exact-arithmetic toolkit for cells of totally nonnegative unipotent
    matrices: Bruhat combinatorics, cell projections, fiber flows, links."""


_in_opt = click.option("--in", "path", default=None, help="matrix JSON file ('-' or omitted: stdin)")
_u_opt = click.option("--u", "u_text", required=True, help="permutation in one-line notation, e.g. 2,1,3")


@main.command()
@click.option("--word", required=True, help="reduced word, e.g. s1.s2.s1 (empty string for identity)")
@click.option("--n", type=int, required=True, help="matrix size")
@click.option("--params", required=True, help="comma-separated positive rationals, one per letter")
def param(word, n, params):
    """Build the cell point with the given Lusztig parameters."""
    try:
        rw = ReducedWord.parse(word, n)
        ts = [Fraction(p) for p in params.split(",")] if params else []
    except (ValueError, ZeroDivisionError, IndexError) as exc:
        _fail(EXIT_USAGE, "parse", str(exc))
    if len(ts) != len(rw.letters):
        _fail(EXIT_USAGE, "usage", f"need {len(rw.letters)} parameters, got {len(ts)}")
    pt = _guard(lambda: lusztig_point(rw, ts))
    obj = pt.matrix.to_json_obj()
    obj["cell"] = pt.cell.serialize()
    obj["tnn"] = pt.tnn
    _emit(obj)


@main.command("cell-of")
@_in_opt
def cmd_cell_of(path):
    """Identify which cell a totally nonnegative matrix lies in."""
    x = _read_matrix(path)
    w = _guard(lambda: cell_of(x))
    _emit({"cell": w.serialize(), "length": w.length})


@main.command()
@_in_opt
def tnn(path):
    """Test a matrix for total nonnegativity (all minors >= 0)."""
    x = _read_matrix(path)
    _emit({"tnn": _guard(lambda: is_tnn(x))})


@main.command()
@_in_opt
@_u_opt
def project(path, u_text):
    """Project a matrix onto the u-cell (the x_u factor of x = x_u x^u)."""
    x = _read_matrix(path)
    u = _parse_perm(u_text)
    frame = _guard(lambda: factor_u(x, u))
    _emit(
        {
            "x_u": frame.x_u.to_json_obj(),
            "x_upper_u": frame.x_upper_u.to_json_obj(),
            "cell": u.serialize(),
        }
    )


@main.command("rho")
@_in_opt
@_u_opt
@click.option("--base", "base_path", required=True, help="target fiber base point, matrix JSON file")
def cmd_rho(path, u_text, base_path):
    """Move a point into the fiber over a given base point of the u-cell."""
    xt = _read_matrix(path)
    base = _read_matrix(base_path)
    u = _parse_perm(u_text)
    out = _guard(lambda: rho(xt, base, u))
    _emit(out.to_json_obj())


@main.command("psi")
@_in_opt
@_u_opt
def cmd_psi(path, u_text):
    """Evaluate the fiber vector field at a point (exact rational)."""
    x = _read_matrix(path)
    u = _parse_perm(u_text)
    out = _guard(lambda: psi(x, u))
    obj = out.to_json_obj()
    obj["str"] = str(str_of(out))
    _emit(obj)


@main.command("flow")
@_in_opt
@_u_opt
@click.option("--direction", type=click.Choice(["backward", "forward"]), default="backward", show_default=True)
@click.option("--target-str", type=float, default=None, help="forward stopping level")
@click.option("--tol", type=float, default=1e-9, show_default=True)
@click.option("--max-steps", type=int, default=200_000, show_default=True)
@click.option("--snapshot-every", type=int, default=50, show_default=True)
@click.option("--dump-trajectory", "dump", is_flag=True, help="emit JSON-lines {t, str, entries}")
def cmd_flow(path, u_text, direction, target_str, tol, max_steps, snapshot_every, dump):
    """Integrate the gradient-like fiber flow from a point."""
    x = _read_matrix(path)
    u = _parse_perm(u_text)
    if direction == "forward" and target_str is None:
        _fail(EXIT_USAGE, "usage", "forward flow needs --target-str")
    traj = _guard(
        lambda: run_flow(
            np.array(x.to_floats()),
            u,
            direction,
            tol=tol,
            max_steps=max_steps,
            snapshot_every=snapshot_every,
            target_str=target_str,
        )
    )
    if dump:
        for st in traj:
            click.echo(
                json.dumps(
                    {
                        "t": st.time,
                        "str": st.str_value,
                        "entries": [[float(v) for v in row] for row in st.point],
                    }
                )
            )
    final = traj[-1]
    _emit(
        {
            "direction": direction,
            "steps": len(traj),
            "t": final.time,
            "str": final.str_value,
            "stratum": final.stratum.serialize(),
            "final": _float_matrix_obj(final.point),
        }
    )


@main.command("link-sample")
@_u_opt
@click.option("--v", "v_text", required=True, help="upper permutation, one-line notation")
@click.option("--epsilon", type=float, default=1.0, show_default=True)
@click.option("--count", type=int, default=3, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
def cmd_link_sample(u_text, v_text, epsilon, count, seed):
    """Sample points of the link of the u-cell inside Y_[u,v]."""
    u = _parse_perm(u_text, "u")
    v = _parse_perm(v_text, "v")
    sample = _guard(lambda: link_sample(u, v, epsilon, count, seed))
    base_str = float(str_of(np.array(sample.base.to_floats())))
    _emit(
        {
            "u": u.serialize(),
            "v": v.serialize(),
            "epsilon": epsilon,
            "base": sample.base.to_json_obj(),
            "points": [
                {
                    "stratum": w.serialize(),
                    "dim": sample.dimensions[w],
                    "str": float(str_of(pt)),
                    "entries": [[float(x) for x in row] for row in pt],
                }
                for pt, w in sample.points
            ],
            "level": base_str + epsilon,
        }
    )


@main.command("link-census")
@_u_opt
@click.option("--v", "v_text", required=True, help="upper permutation, one-line notation")
@click.option("--epsilon", type=float, default=1.0, show_default=True)
@click.option("--count", type=int, default=2, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
def cmd_link_census(u_text, v_text, epsilon, count, seed):
    """Census of link strata over (u, v]: labels, dimensions, sampled
    per-stratum point counts, and the combinatorial Euler characteristic."""
    u = _parse_perm(u_text, "u")
    v = _parse_perm(v_text, "v")
    if not bruhat_less(u, v):
        _fail(EXIT_PRECONDITION, "NotComparable", f"{u.serialize()} is not strictly below {v.serialize()}")
    sample = _guard(lambda: link_sample(u, v, epsilon, count, seed))
    counts: dict[str, int] = {}
    for _, w in sample.points:
        counts[w.serialize()] = counts.get(w.serialize(), 0) + 1
    strata = [
        {"label": w.serialize(), "dim": d, "points": counts.get(w.serialize(), 0)}
        for w, d in sorted(sample.dimensions.items(), key=lambda kv: (kv[0].length, kv[0].image))
    ]
    euler = sum((-1) ** s["dim"] for s in strata)
    labels_ok = {s["label"] for s in strata} == {
        w.serialize() for w in interval(u, v).elements if w != u
    }
    obj = {
        "u": u.serialize(),
        "v": v.serialize(),
        "strata": strata,
        "euler": euler,
        "euler_ok": euler == 1,
        "labels_ok": labels_ok,
    }
    _emit(obj)
    if not (obj["euler_ok"] and labels_ok):
        sys.exit(EXIT_INVARIANT)


@main.command("retract")
@_in_opt
@_u_opt
@click.option("--v", "v_text", required=True, help="upper permutation, one-line notation")
@click.option("--z", "z_path", required=True, help="retraction target point, matrix JSON file")
@click.option("--tau", type=float, required=True, help="deformation time in [0, 1]")
@click.option("--epsilon", type=float, default=1.0, show_default=True)
def cmd_retract(path, u_text, v_text, z_path, tau, epsilon):
    """Evaluate the deformation retraction of the link toward a point z."""
    x = _read_matrix(path)
    u = _parse_perm(u_text, "u")
    v = _parse_perm(v_text, "v")
    z = _read_matrix(z_path)
    if not 0.0 <= tau <= 1.0:
        _fail(EXIT_USAGE, "usage", "--tau must lie in [0, 1]")
    base = np.array(default_base(u).to_floats())
    out = _guard(
        lambda: run_retraction(
            np.array(x.to_floats()), tau, u, v, z, epsilon, base=base
        )
    )
    obj = _float_matrix_obj(out)
    obj["str"] = float(str_of(out))
    _emit(obj)


@main.command("verify")
@click.argument("suite", type=click.Choice(sorted(SUITES) + ["all"]))
@click.option("--n", type=int, default=4, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--samples", type=int, default=0, help="0 uses each suite's default size")
@click.option("--epsilon", type=float, default=1.0, show_default=True)
@click.option("--tol", type=float, default=1e-9, show_default=True)
@click.option("--max-steps", type=int, default=200_000, show_default=True)
@click.option("--timings", is_flag=True, help="include wall times (breaks byte-stability)")
def cmd_verify(suite, n, seed, samples, epsilon, tol, max_steps, timings):
    """Run a named invariant suite (or 'all'); exit 0 iff no failures."""
    if n < 2:
        _fail(EXIT_USAGE, "usage", "--n must be at least 2")
    if tol <= 0 or epsilon <= 0:
        _fail(EXIT_USAGE, "usage", "--tol and --epsilon must be positive")
    config = RunConfig(
        n=n, seed=seed, epsilon=epsilon, tol=tol, max_steps=max_steps, samples=samples
    )
    reports = _guard(lambda: run_suite(suite, config))
    _emit([r.to_json_obj(timings=timings) for r in reports])
    if any(not r.ok for r in reports):
        sys.exit(EXIT_INVARIANT)


if __name__ == "__main__":
    main()
