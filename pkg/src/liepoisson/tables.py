"""Symbolic singular-point spectra of the cataloged algebras.

Each row is generated from the structure constants alone: the generator
A_{ja} = c^a_{jk} h^k is assembled with symbolic h, its characteristic
polynomial factored, and Hamiltonian symmetry decided exactly by comparing
p(-lambda) with (-1)^n p(lambda).
"""
from __future__ import annotations

import sympy

from . import bianchi as bn
from . import dim4
from .algebra import StructureTensor

LAM = sympy.Symbol("lambda")
ETAS = (-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0)


def symbolic_generator(c: StructureTensor) -> sympy.Matrix:
    n = c.dim
    h = sympy.symbols(f"h1:{n + 1}", real=True)
    A = sympy.zeros(n, n)
    for j in range(n):
        for a in range(n):
            A[j, a] = sum(sympy.nsimplify(c.c[a, j, k]) * h[k] for k in range(n))
    return A


def _imaginary_sqrt(expr):
    """Rewrite sqrt(-q) as I*sqrt(q) when q is known to be nonnegative."""
    return expr.replace(
        lambda e: e.is_Pow and e.exp == sympy.Rational(1, 2) and (-e.base).is_nonnegative,
        lambda e: sympy.I * sympy.sqrt(sympy.expand(-e.base)),
    )


def spectrum_row(name: str, klass: str, c: StructureTensor) -> list[str]:
    A = symbolic_generator(c)
    n = c.dim
    p = (LAM * sympy.eye(n) - A).det().expand()
    sym = sympy.expand(p.subs(LAM, -LAM) - (-1) ** n * p) == 0
    roots = sympy.roots(sympy.Poly(p, LAM))
    eig = []
    for r in sorted(roots, key=sympy.default_sort_key):
        eig += [str(_imaginary_sqrt(r))] * roots[r]
    return [name, klass, str(sympy.factor(p)), "; ".join(eig), "yes" if sym else "no"]


def spectrum_rows(dim: int):
    header = ["algebra", "class", "char_poly", "eigenvalues", "hamiltonian_symmetric"]
    rows = []
    if dim == 3:
        for t in bn.all_types(ETAS):
            rows.append(spectrum_row(str(t), t.klass, bn.bianchi_algebra(t)))
    elif dim == 4:
        for e in dim4.all_entries():
            rows.append(spectrum_row(e.name, e.label().value, e.tensor))
    else:
        raise ValueError("spectrum tables exist for dim 3 and 4")
    return header, rows
