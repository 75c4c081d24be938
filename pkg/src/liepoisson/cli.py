"""Command-line interface: ``lpl <subcommand> ...``.

Reports are JSON and tables/time series are CSV, written to stdout unless
an output path is given.  Output depends only on the flags and the seed
(``--seed``, overridden by the LPL_SEED environment variable).
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import asdict, dataclass, field
from typing import Optional

import numpy as np

from . import algebra as alg
from . import bianchi as bn
from . import deformation as dfm
from . import dim4
from . import field as fb
from . import lie_poisson as lp
from . import spectral as sp
from .errors import LiePoissonError

EXIT_OK, EXIT_FAILURE, EXIT_USAGE = 0, 1, 2


@dataclass
class RunConfig:
    """Everything a run depends on; round-trips through JSON."""

    subcommand: str
    system: Optional[str] = None
    params: dict = field(default_factory=dict)
    output: Optional[str] = None
    extra_outputs: dict = field(default_factory=dict)
    seed: int = 0

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "RunConfig":
        return cls(**json.loads(text))

    @classmethod
    def from_namespace(cls, ns: argparse.Namespace, environ=None) -> "RunConfig":
        environ = os.environ if environ is None else environ
        d = dict(vars(ns))
        sub = d.pop("command")
        if sub == "field":
            sub = f"field {d.pop('field_command')}"
        d.pop("func", None)
        seed = d.pop("seed", 0)
        if environ.get("LPL_SEED", "") != "":
            seed = int(environ["LPL_SEED"])
        output = d.pop("output", None)
        extra = {k: d.pop(k) for k in ("csv", "summary") if k in d and d[k] is not None}
        for k in ("csv", "summary"):
            d.pop(k, None)
        system = d.pop("system", None)
        return cls(sub, system, d, output, extra, seed)


# -- formatting -------------------------------------------------------------

def _clean(x):
    """Plain-Python, JSON-safe copy with -0.0 normalized to 0.0."""
    if isinstance(x, dict):
        return {str(k): _clean(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_clean(v) for v in x]
    if isinstance(x, np.ndarray):
        return _clean(x.tolist())
    if isinstance(x, (np.bool_, bool)):
        return bool(x)
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        if x != x or x in (float("inf"), float("-inf")):
            return str(x)
        return 0.0 if x == 0.0 else x
    return x


def dump_json(obj) -> str:
    return json.dumps(_clean(obj), indent=2) + "\n"


def dump_csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([_fmt_cell(v) for v in r])
    return buf.getvalue()


def _fmt_cell(v):
    if isinstance(v, (float, np.floating)):
        v = float(v)
        return repr(0.0 if v == 0.0 else v)
    return v


def _emit(text: str, path: Optional[str]):
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", newline="") as fh:
            fh.write(text)


def _vec(text: str) -> list[float]:
    try:
        return [float(t) for t in text.replace(" ", "").split(",") if t != ""]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from exc


# -- systems ----------------------------------------------------------------

def build_system(cfg: RunConfig) -> lp.LiePoissonSystem:
    p = cfg.params
    if cfg.system == "prs":
        return lp.prs_system(p.get("alpha") if p.get("alpha") is not None else 2.0)
    if cfg.system == "euler":
        return lp.euler_top(p.get("inertia") or (1.0, 2.0, 3.0), half=bool(p.get("half")))
    if cfg.system == "bianchi":
        if not p.get("type"):
            raise ValueError("--system bianchi needs --type")
        return lp.bianchi_system(bn.BianchiType.parse(p["type"], p.get("eta")))
    raise ValueError(f"unknown system {cfg.system!r}")


# -- subcommands ------------------------------------------------------------

def _tensor_json(c: alg.StructureTensor) -> dict:
    return {"dim": c.dim, "entries": [list(e) for e in c.nonzero_entries()], "text": alg.dumps(c)}


def _bianchi_record(t: bn.BianchiType) -> dict:
    c = bn.bianchi_algebra(t)
    C = bn.casimir_of(t)
    S = bn.singular_set(t)
    return {
        "name": str(t),
        "class": t.klass,
        "tensor": _tensor_json(c),
        "poisson_matrix": lp.poisson_pattern(c),
        "casimir": C.expression,
        "singular_set": {"kind": S.kind, "description": S.description, "basis": S.basis},
        "reversals": [n for n, _ in bn.reversal_transforms(t)],
        "derived_dim": alg.derived_dim(c),
        "killing_form": alg.killing_form(c),
        "deformation_matrix": dfm.recover_M(c).M,
    }


def _dim4_record(e: dim4.Dim4Entry) -> dict:
    lab = e.label()
    return {
        "name": e.name,
        "class": lab.value,
        "expected_class": e.expected_class,
        "tensor": _tensor_json(e.tensor),
        "poisson_matrix": lp.poisson_pattern(e.tensor),
        "M": None if e.M is None else e.M.M,
        "M_printed_transposed": e.printed,
        "char_poly_reference": e.reference_char_poly.text,
        "certificate": lab.certificate,
    }


def cmd_catalog(cfg: RunConfig) -> int:
    p = cfg.params
    out = []
    if p.get("dim4_only"):
        out = [_dim4_record(e) for e in dim4.all_entries()]
    elif p.get("type"):
        out = [_bianchi_record(bn.BianchiType.parse(p["type"], p.get("eta")))]
    else:
        eta = p.get("eta") if p.get("eta") is not None else 0.5
        for lab in bn.LABELS:
            out.append(_bianchi_record(bn.BianchiType(lab, eta if lab in bn.PARAMETRIC else None)))
        if p.get("include_dim4"):
            out += [_dim4_record(e) for e in dim4.all_entries()]
    _emit(dump_json(out), cfg.output)
    return EXIT_OK


def cmd_classify(cfg: RunConfig) -> int:
    c = alg.load(cfg.params["file"])
    res = alg.jacobi_residual(c)
    if res > alg.JACOBI_TOL:
        raise LiePoissonError(f"not a Lie algebra: Jacobi residual {res:.3g}")
    lab = dfm.classify(c)
    rep = {"dim": c.dim, "jacobi_residual": res}
    rep.update(lab.to_dict())
    if "M" not in rep:
        rep["M"] = None
        rep["kernel"] = None
    _emit(dump_json(rep), cfg.output)
    return EXIT_OK


def cmd_simulate(cfg: RunConfig) -> int:
    p = cfg.params
    sysm = build_system(cfg)
    x0 = p.get("x0") or [0.01, 0.01, 1.0]
    tr = lp.integrate(sysm, x0, p["dt"], p["T"], p["scheme"])
    every = max(1, int(p.get("every") or 1))
    keys = list(tr.invariants)
    if "csv" in cfg.extra_outputs:
        header = ["t"] + [f"xi{i + 1}" for i in range(sysm.dim)] + keys
        rows = ([t] + list(x) + [tr.invariants[k][i] for k in keys]
                for i, (t, x) in enumerate(zip(tr.times, tr.states)) if i % every == 0 or i == len(tr.times) - 1)
        _emit(dump_csv(header, rows), cfg.extra_outputs["csv"])
    summary = {
        "system": sysm.name,
        "scheme": p["scheme"],
        "dt": p["dt"],
        "T": p["T"],
        "steps": len(tr.times) - 1,
        "x0": x0,
        "final_state": tr.final,
        "drifts": tr.drifts,
        "diagnostic": tr.diagnostic,
    }
    _emit(dump_json(summary), cfg.output)
    return EXIT_OK if not tr.diagnostic else EXIT_FAILURE


def cmd_linearize(cfg: RunConfig) -> int:
    p = cfg.params
    sysm = build_system(cfg)
    at = np.asarray(p["at"], dtype=float)
    mu = p.get("energy_casimir")
    F = lp.energy_casimir(sysm, mu) if mu else None
    kind = sp.classify_equilibrium(sysm, at, F)
    if kind == "singular":
        gen = sp.linearize_singular(sysm, at)
    elif kind == "regular":
        gen = sp.linearize_regular(sysm, at, F)
    else:
        raise LiePoissonError(f"point {at.tolist()} is {kind}; linearize needs a singular point "
                              "or a regular equilibrium of H + mu C (pass --energy-casimir)")
    rep = {"system": sysm.name, "point": at, "generator": gen.A}
    if gen.h is not None:
        rep["h"] = gen.h
    rep.update(sp.spectrum(gen).to_dict())
    _emit(dump_json(rep), cfg.output)
    return EXIT_OK


def cmd_spectrum_table(cfg: RunConfig) -> int:
    from .tables import spectrum_rows

    header, rows = spectrum_rows(cfg.params["dim"])
    _emit(dump_csv(header, rows), cfg.output)
    return EXIT_OK


def _local_demo_fields(N: int):
    X = fb.lattice(N)
    h = np.array([np.sin(X[1]), np.zeros_like(X[0]), 1.0 + np.cos(X[0])])
    u0 = np.ones_like(X)
    return X, h, u0


def cmd_field_local(cfg: RunConfig) -> int:
    p = cfg.params
    N, t = int(p["N"]), float(p["t"])
    X, h, u0 = _local_demo_fields(N)
    closed = fb.local_chiral_evolution(h, u0, t)
    rates = fb.decay_rates(h)
    header = ["i", "j", "k", "x", "y", "z", "rate", "u1", "u2", "u3"]
    idx = np.indices((N, N, N)).reshape(3, -1).T
    rows = ([i, j, k, X[0][i, j, k], X[1][i, j, k], X[2][i, j, k], rates[i, j, k],
             closed[0][i, j, k], closed[1][i, j, k], closed[2][i, j, k]] for i, j, k in idx)
    _emit(dump_csv(header, rows), cfg.output)
    if "summary" in cfg.extra_outputs:
        rk = fb.integrate_local(h, u0, t, p["dt"])
        summary = {"N": N, "t": t, "dt": p["dt"], "rate_min": rates.min(), "rate_max": rates.max(),
                   "max_abs_diff_vs_rk4": float(np.max(np.abs(rk - closed)))}
        _emit(dump_json(summary), cfg.extra_outputs["summary"])
    return EXIT_OK


def cmd_field_vortex(cfg: RunConfig) -> int:
    p = cfg.params
    K = int(p["K"])
    init = p["init"]
    if init == "beltrami":
        w0 = fb.beltrami(K)
    elif init == "two-beltrami":
        w0 = fb.two_beltrami(K)
    else:
        w0 = fb.random_field(K, cfg.seed, 1.0)
    tr = fb.integrate_field(w0, p["dt"], p["T"])
    every = max(1, int(p.get("every") or 1))
    rows = ([t, e, c] for i, (t, e, c) in enumerate(zip(tr.times, tr.energy, tr.helicity))
            if i % every == 0 or i == len(tr.times) - 1)
    _emit(dump_csv(["t", "E", "C"], rows), cfg.output)
    if "summary" in cfg.extra_outputs:
        summary = {"K": K, "modes": fb.mode_count(K), "init": init, "seed": cfg.seed, "dt": p["dt"], "T": p["T"],
                   "energy_drift": tr.energy_drift, "helicity_drift": tr.helicity_drift,
                   "diagnostic": tr.diagnostic}
        _emit(dump_json(summary), cfg.extra_outputs["summary"])
    return EXIT_OK if not tr.diagnostic else EXIT_FAILURE


COMMANDS = {
    "catalog": cmd_catalog,
    "classify": cmd_classify,
    "simulate": cmd_simulate,
    "linearize": cmd_linearize,
    "spectrum-table": cmd_spectrum_table,
    "field local-demo": cmd_field_local,
    "field vortex": cmd_field_vortex,
}


def run(cfg: RunConfig) -> int:
    """Execute a configuration; errors become a JSON report on stderr."""
    try:
        return COMMANDS[cfg.subcommand](cfg)
    except (LiePoissonError, ValueError, OSError, KeyError) as exc:
        err = {"error": type(exc).__name__, "message": str(exc), "subcommand": cfg.subcommand}
        sys.stderr.write(dump_json(err))
        return EXIT_FAILURE


# -- parser -----------------------------------------------------------------

def _system_args(p: argparse.ArgumentParser):
    p.add_argument("--system", choices=["prs", "euler", "bianchi"], required=True,
                   help="prs rattleback, euler rigid body, or a bianchi type")
    p.add_argument("--alpha", type=float, help="PRS parameter (default 2)")
    p.add_argument("--type", help="Bianchi type label for --system bianchi, e.g. VI or 'VII(0.5)'")
    p.add_argument("--eta", type=float, help="parameter of types VI and VII")
    p.add_argument("--inertia", type=_vec, help="moments I1,I2,I3 for the Euler top (default 1,2,3)")
    p.add_argument("--half", action="store_true", help="Euler top with H = 1/2 sum xi^2/I")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="lpl", description="Lie-Poisson systems from deformed Lie algebras.")
    ap.add_argument("--seed", type=int, default=0, help="seed for randomized steps (env LPL_SEED overrides)")
    sub = ap.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def out(p):
        p.add_argument("-o", "--output", help="write the main output here instead of stdout")

    p = sub.add_parser("catalog", help="structure tensors, Poisson matrices, Casimirs, singular sets (JSON)")
    p.add_argument("--type", help="a single Bianchi type, e.g. IX or 'VI(-1)'")
    p.add_argument("--eta", type=float, help="parameter for VI/VII (default 0.5 when listing all)")
    p.add_argument("--include-dim4", action="store_true", help="append the 4-D algebras")
    p.add_argument("--dim4-only", action="store_true", help="list only the 4-D algebras")
    out(p)

    p = sub.add_parser("classify", help="class A/B/C of a structure-tensor file (JSON)")
    p.add_argument("--file", required=True, help="tensor file: 'dim n' then lines 'l j k value'")
    out(p)

    p = sub.add_parser("simulate", help="integrate Hamilton's equations (JSON summary, optional CSV)")
    _system_args(p)
    p.add_argument("--x0", type=_vec, help="initial state, comma separated (default 0.01,0.01,1)")
    p.add_argument("--dt", type=float, default=1e-3)
    p.add_argument("--T", type=float, default=10.0)
    p.add_argument("--scheme", choices=sorted(lp.STEPPERS), default="rk4")
    p.add_argument("--csv", help="write the time series (t, xi..., H, C...) to this file")
    p.add_argument("--every", type=int, default=1, help="CSV row stride")
    out(p)

    p = sub.add_parser("linearize", help="spectrum at a singular or regular equilibrium (JSON)")
    _system_args(p)
    p.add_argument("--at", type=_vec, required=True, help="equilibrium point, comma separated")
    p.add_argument("--energy-casimir", type=_vec, help="multipliers mu for F = H + mu C")
    out(p)

    p = sub.add_parser("spectrum-table", help="singular-point spectra of the catalog (CSV)")
    p.add_argument("--dim", type=int, choices=[3, 4], default=3)
    out(p)

    p = sub.add_parser("field", help="so(3)-bundle field demos (CSV)")
    fsub = p.add_subparsers(dest="field_command", required=True, metavar="DEMO")
    q = fsub.add_parser("local-demo", help="local type-III evolution and its decay-rate field")
    q.add_argument("--N", type=int, default=16, help="lattice points per side")
    q.add_argument("--t", type=float, default=1.0, help="evaluation time")
    q.add_argument("--dt", type=float, default=1e-3, help="rk4 step for the summary cross-check")
    q.add_argument("--summary", help="write a JSON summary here")
    out(q)
    q = fsub.add_parser("vortex", help="truncated vorticity dynamics on the 3-torus")
    q.add_argument("--K", type=int, default=2, help="keep wavevectors with |k|_inf <= K")
    q.add_argument("--dt", type=float, default=1e-3)
    q.add_argument("--T", type=float, default=1.0)
    q.add_argument("--init", choices=["beltrami", "two-beltrami", "random-seeded"], default="two-beltrami")
    q.add_argument("--every", type=int, default=1, help="CSV row stride")
    q.add_argument("--summary", help="write a JSON summary here")
    out(q)
    return ap


def main(argv=None) -> int:
    ns = build_parser().parse_args(argv)
    return run(RunConfig.from_namespace(ns))


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
