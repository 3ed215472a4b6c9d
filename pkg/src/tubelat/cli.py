"""Command-line interface.

Every subcommand maps to exactly one library operation, reads exact-rational
literals ("p/q", "sqrt:d", "(p+q*sqrt(d))/s"), and prints one deterministic
JSON document to stdout.  Domain failures print a machine-readable error
object and exit nonzero.  Setting TUBELAT_OUTPUT_DIR additionally writes a
copy of the output to <dir>/<subcommand>.json.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .algebra import build_c4, spec_from_json, validate_spec
from .errors import PreconditionError, SpecFormatError, TubelatError
from .exceptional import enumerate_exceptional, unit_decompose
from .lattice import K0Lattice
from .pp import (
    PpPair,
    formula_from_json,
    free_realisation,
    pair_open_on,
    pointed_to_json,
    solution_space,
)
from .quadirr import parse_quad_irrational
from .reps import ext_dim, hom_dim, module_slope, rep_from_json
from .search import (
    delta_for,
    gap_certificate_from_json,
    gap_certificate_to_json,
    gap_vector,
    p_bound,
    tube_parameters,
    tube_params_from_json,
    tube_params_to_json,
    validate_gap_certificate,
    validate_tube_params,
)
from .serialize import dumps_canonical, frac_to_str, parse_frac, parse_int_vector


class _Context:
    """Lazily built algebra data shared by the subcommands."""

    def __init__(self, args):
        self.args = args
        self._spec = None
        self._basis = None
        self._lattice = None
        self._exceptional = None

    @property
    def spec(self):
        if self._spec is None:
            if self.args.algebra:
                with open(self.args.algebra, encoding="utf-8") as fh:
                    self._spec = spec_from_json(json.load(fh))
            else:
                self._spec = build_c4(parse_frac(self.args.lam))
        return self._spec

    @property
    def basis(self):
        if self._basis is None:
            from .algebra import derive_path_basis

            self._basis = derive_path_basis(self.spec)
        return self._basis

    @property
    def lattice(self):
        if self._lattice is None:
            self._lattice = K0Lattice.for_spec(self.spec)
        return self._lattice

    @property
    def exceptional(self):
        if self._exceptional is None:
            self._exceptional = enumerate_exceptional(self.lattice)
        return self._exceptional

    def vector(self, text):
        named = {"h0": lambda: self.lattice.h0, "hinf": lambda: self.lattice.hinf}
        if text in named:
            return named[text]()
        return parse_int_vector(text, self.spec.vertex_count)

    def load_rep(self, path):
        with open(path, encoding="utf-8") as fh:
            return rep_from_json(self.spec, json.load(fh))

    def load_formula(self, path):
        with open(path, encoding="utf-8") as fh:
            return formula_from_json(self.spec, json.load(fh))


def _cmd_validate_algebra(ctx: _Context) -> tuple[object, int]:
    report = validate_spec(ctx.spec)
    doc = {
        "ok": report.ok,
        "checks": [
            {"name": c.name, "passed": c.passed, "detail": c.detail}
            for c in report.checks
        ],
    }
    return doc, 0 if report.ok else 1


def _cmd_euler(ctx: _Context) -> tuple[object, int]:
    x = ctx.vector(ctx.args.x)
    y = ctx.vector(ctx.args.y)
    return ctx.lattice.bilinear(x, y), 0


def _cmd_slope(ctx: _Context) -> tuple[object, int]:
    if ctx.args.vec is not None:
        value = ctx.lattice.slope(ctx.vector(ctx.args.vec))
    elif ctx.args.rep is not None:
        value = module_slope(ctx.lattice, ctx.load_rep(ctx.args.rep))
    else:
        raise SpecFormatError("slope needs --vec or a representation file")
    return str(value), 0


def _cmd_omega(ctx: _Context) -> tuple[object, int]:
    ex = ctx.exceptional
    return {
        "bound": ex.bound,
        "count": len(ex),
        "elements": [list(x) for x in ex],
    }, 0


def _cmd_decompose(ctx: _Context) -> tuple[object, int]:
    x = ctx.vector(ctx.args.vec)
    chi = ctx.lattice.quadratic(x)
    if chi == 0:
        a, b = ctx.lattice.radical_decompose(x)
        return {"kind": "radical", "a": a, "b": b}, 0
    if chi == 1:
        a, b, y = unit_decompose(ctx.lattice, x, ctx.exceptional)
        return {"kind": "unit", "a": a, "b": b, "y": list(y)}, 0
    raise PreconditionError(f"chi({tuple(x)}) = {chi}; need 0 or 1 to decompose")


def _cmd_gap_search(ctx: _Context) -> tuple[object, int]:
    cert = gap_vector(
        ctx.lattice,
        parse_quad_irrational(ctx.args.r),
        parse_frac(ctx.args.eps),
        int(ctx.args.k),
    )
    return gap_certificate_to_json(cert), 0


def _cmd_delta(ctx: _Context) -> tuple[object, int]:
    result = delta_for(
        ctx.lattice,
        ctx.exceptional,
        parse_quad_irrational(ctx.args.r),
        parse_frac(ctx.args.eps),
    )
    return {
        "delta": frac_to_str(result.delta),
        "eps_prime": frac_to_str(result.eps_prime),
        "exceptions": [
            {
                "a": e.a,
                "b": e.b,
                "y": list(e.y),
                "perturbed": frac_to_str(e.perturbed),
            }
            for e in result.exceptions
        ],
    }, 0


def _cmd_p_bound(ctx: _Context) -> tuple[object, int]:
    return {"p": p_bound(ctx.lattice, ctx.exceptional)}, 0


def _cmd_tube_params(ctx: _Context) -> tuple[object, int]:
    tp = tube_parameters(
        ctx.lattice,
        ctx.exceptional,
        parse_quad_irrational(ctx.args.r),
        parse_frac(ctx.args.eps),
        int(ctx.args.d),
    )
    return tube_params_to_json(tp), 0


def _cmd_hom(ctx: _Context) -> tuple[object, int]:
    return hom_dim(ctx.load_rep(ctx.args.m), ctx.load_rep(ctx.args.n)), 0


def _cmd_ext(ctx: _Context) -> tuple[object, int]:
    return ext_dim(ctx.basis, ctx.load_rep(ctx.args.m), ctx.load_rep(ctx.args.n)), 0


def _cmd_pp_eval(ctx: _Context) -> tuple[object, int]:
    phi = ctx.load_formula(ctx.args.phi)
    m = ctx.load_rep(ctx.args.m)
    basis_vectors = solution_space(phi, m)
    return {
        "dim": len(basis_vectors),
        "basis": [[frac_to_str(x) for x in vec] for vec in basis_vectors],
    }, 0


def _cmd_pp_free(ctx: _Context) -> tuple[object, int]:
    phi = ctx.load_formula(ctx.args.phi)
    return pointed_to_json(free_realisation(ctx.basis, phi)), 0


def _cmd_pp_pair(ctx: _Context) -> tuple[object, int]:
    phi = ctx.load_formula(ctx.args.phi)
    psi = ctx.load_formula(ctx.args.psi)
    m = ctx.load_rep(ctx.args.m)
    is_open = pair_open_on(PpPair(phi=phi, psi=psi), m)
    return {
        "open": is_open,
        "dim_phi": len(solution_space(phi, m)),
        "dim_psi": len(solution_space(psi, m)),
    }, 0


def _cmd_certify(ctx: _Context) -> tuple[object, int]:
    with open(ctx.args.certificate, encoding="utf-8") as fh:
        data = json.load(fh)
    kind = data.get("kind")
    if kind == "gap-vector":
        cert = gap_certificate_from_json(data)
        failures = validate_gap_certificate(ctx.lattice, cert)
    elif kind == "tube-params":
        tp = tube_params_from_json(data)
        failures = validate_tube_params(ctx.lattice, ctx.exceptional, tp)
    else:
        raise SpecFormatError(f"unknown certificate kind {kind!r}")
    doc = {"kind": kind, "valid": not failures, "failures": failures}
    return doc, 0 if not failures else 1


_COMMANDS = {
    "validate-algebra": _cmd_validate_algebra,
    "euler": _cmd_euler,
    "slope": _cmd_slope,
    "omega": _cmd_omega,
    "decompose": _cmd_decompose,
    "gap-search": _cmd_gap_search,
    "delta": _cmd_delta,
    "p-bound": _cmd_p_bound,
    "tube-params": _cmd_tube_params,
    "hom": _cmd_hom,
    "ext": _cmd_ext,
    "pp-eval": _cmd_pp_eval,
    "pp-free": _cmd_pp_free,
    "pp-pair": _cmd_pp_pair,
    "certify": _cmd_certify,
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tubelat",
        description="Exact lattice arithmetic and certified slope searches "
        "for the tubular algebra C(4,lambda).",
    )
    parser.add_argument(
        "--lambda",
        dest="lam",
        default="2",
        help="parameter for the built-in algebra (exact rational, not 0 or 1)",
    )
    parser.add_argument(
        "--algebra",
        default=None,
        help="JSON file with a user algebra spec (overrides --lambda)",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("validate-algebra")
    p = sub.add_parser("euler")
    p.add_argument("--x", required=True, help='vector: "h0", "hinf" or "[...]"')
    p.add_argument("--y", required=True)
    p = sub.add_parser("slope")
    p.add_argument("--vec", default=None)
    p.add_argument("rep", nargs="?", default=None, help="representation JSON file")
    sub.add_parser("omega")
    p = sub.add_parser("decompose")
    p.add_argument("--vec", required=True)
    p = sub.add_parser("gap-search")
    p.add_argument("--r", required=True)
    p.add_argument("--eps", required=True)
    p.add_argument("--k", required=True, type=int)
    p = sub.add_parser("delta")
    p.add_argument("--r", required=True)
    p.add_argument("--eps", required=True)
    sub.add_parser("p-bound")
    p = sub.add_parser("tube-params")
    p.add_argument("--r", required=True)
    p.add_argument("--eps", required=True)
    p.add_argument("--d", required=True, type=int)
    p = sub.add_parser("hom")
    p.add_argument("m")
    p.add_argument("n")
    p = sub.add_parser("ext")
    p.add_argument("m")
    p.add_argument("n")
    p = sub.add_parser("pp-eval")
    p.add_argument("phi")
    p.add_argument("m")
    p = sub.add_parser("pp-free")
    p.add_argument("phi")
    p = sub.add_parser("pp-pair")
    p.add_argument("phi")
    p.add_argument("psi")
    p.add_argument("m")
    p = sub.add_parser("certify")
    p.add_argument("certificate")
    return parser


def _emit(command: str, text: str, stream) -> None:
    stream.write(text)
    out_dir = os.environ.get("TUBELAT_OUTPUT_DIR")
    if out_dir:
        os.makedirs(out_dir, exist_ok=True)
        with open(os.path.join(out_dir, f"{command}.json"), "w", encoding="utf-8") as fh:
            fh.write(text)


def run(argv=None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    parser = _build_parser()
    args = parser.parse_args(argv)
    ctx = _Context(args)
    try:
        doc, code = _COMMANDS[args.command](ctx)
    except TubelatError as exc:
        _emit(args.command, dumps_canonical({"error": exc.name, "message": str(exc)}), stdout)
        return 1
    except FileNotFoundError as exc:
        _emit(
            args.command,
            dumps_canonical({"error": "io", "message": str(exc)}),
            stdout,
        )
        return 1
    except json.JSONDecodeError as exc:
        _emit(
            args.command,
            dumps_canonical({"error": "malformed-json", "message": str(exc)}),
            stdout,
        )
        return 1
    _emit(args.command, dumps_canonical(doc), stdout)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
