"""Four-dimensional examples: the mother R + so(3), its deformations, and A4_12.

Deformation matrices are commonly printed transposed (as M^T, the map
acting on brackets); ``printed`` keeps that form and ``M`` is its
transpose, which is what :func:`deform` takes.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from numpy.polynomial import polynomial as P

from . import algebra as alg
from .algebra import StructureTensor
from .deformation import ClassLabel, DeformationMatrix, classify, deform
from .spectral import spectrum

NAMES = ("A4_10", "A4_8", "A4_1", "A4_3", "A4_12")


def mother_r_so3() -> StructureTensor:
    """e1 central; [e2,e3] = e4, [e2,e4] = -e3, [e3,e4] = e2."""
    return StructureTensor.from_table(4, {(2, 3): {4: 1.0}, (2, 4): {3: -1.0}, (3, 4): {2: 1.0}})


def _hi_first(low_first) -> np.ndarray:
    c = np.asarray(low_first, dtype=float)
    c = np.concatenate([c, np.zeros(5 - c.size)])
    return c[::-1].copy()


def _lam(*coefs):
    """Polynomial in lambda given low-degree-first coefficients."""
    return np.array(coefs, dtype=float)


LAM2 = _lam(0, 0, 1)


@dataclass(frozen=True)
class CharPolyDescriptor:
    """A characteristic polynomial in lambda with coefficients depending on h."""

    text: str
    coeffs: Callable[[np.ndarray], np.ndarray]  # h -> highest-degree-first coefficients

    def __call__(self, h) -> np.ndarray:
        return self.coeffs(np.asarray(h, dtype=float))


def _desc(text, fn):
    return CharPolyDescriptor(text, lambda h: _hi_first(fn(h)))


REFERENCE_POLYS = {
    "mother": _desc("lambda^2 (lambda^2 + |h|^2), |h|^2 = (h2)^2+(h3)^2+(h4)^2",
                    lambda h: P.polymul(LAM2, _lam(h[1] ** 2 + h[2] ** 2 + h[3] ** 2, 0, 1))),
    "A4_10": _desc("lambda^2 (lambda^2 + (h4)^2)", lambda h: P.polymul(LAM2, _lam(h[3] ** 2, 0, 1))),
    "A4_8": _desc("lambda^2 (lambda - h4)(lambda + h4)",
                  lambda h: P.polymul(LAM2, P.polymul(_lam(-h[3], 1), _lam(h[3], 1)))),
    "A4_1": _desc("lambda^4", lambda h: _lam(0, 0, 0, 0, 1)),
    "A4_3": _desc("lambda^3 (lambda - h3)", lambda h: P.polymul(_lam(0, 0, 0, 1), _lam(-h[2], 1))),
    # commonly quoted form for A4_12; not monic, see CORRECTED_POLYS
    "A4_12": _desc("lambda^2 [(lambda - h3)^2 + (h4 lambda)^2]",
                   lambda h: P.polymul(LAM2, P.polyadd(P.polymul(_lam(-h[2], 1), _lam(-h[2], 1)),
                                                       _lam(0, 0, h[3] ** 2)))),
}

CORRECTED_POLYS = {
    "A4_12": _desc("lambda^2 [(lambda - h3)^2 + (h4)^2]",
                   lambda h: P.polymul(LAM2, _lam(h[2] ** 2 + h[3] ** 2, -2 * h[2], 1))),
}


@dataclass(frozen=True)
class Dim4Entry:
    name: str
    tensor: StructureTensor
    M: Optional[DeformationMatrix]
    printed: Optional[np.ndarray]
    expected_class: str
    reference_char_poly: CharPolyDescriptor
    symmetric_probes: tuple = field(default=())

    def label(self) -> ClassLabel:
        return classify(self.tensor)


_PRINTED = {
    "A4_10": [[0, 0, 0, 1], [0, 1, 0, 0], [0, 0, 1, 0], [1, 0, 0, 0]],
    "A4_8": [[0, 0, 0, 1], [0, 0, -1, 0], [0, -1, 0, 0], [1, 0, 0, 0]],
    "A4_1": [[0, 0, 0, 1], [0, -1, 0, 0], [0, 0, 0, 0], [1, 0, 0, 0]],
    "A4_3": [[0, -1, 0, 0], [0, 0, 0, 1], [0, 0, 0, 0], [0, 0, 0, 0]],
}
_CLASS = {"A4_10": "A", "A4_8": "A", "A4_1": "A", "A4_3": "B", "A4_12": "C"}

A4_12_TABLE = {(1, 3): {1: 1.0}, (1, 4): {2: -1.0}, (2, 3): {2: 1.0}, (2, 4): {1: 1.0}}


def _zero_h3(h):
    h = np.array(h, dtype=float)
    h[2] = 0.0
    return h


# maps sending a generic h to a non-generic one with a symmetric spectrum
_PROBES = {
    "A4_3": (("h3 = 0", _zero_h3),),
    "A4_12": (("h3 = 0", _zero_h3),),
}


def dim4_entry(name: str) -> Dim4Entry:
    if name not in NAMES:
        raise ValueError(f"unknown 4-D algebra {name!r}; choose from {NAMES}")
    if name == "A4_12":
        c = StructureTensor.from_table(4, A4_12_TABLE)
        return Dim4Entry(name, c, None, None, "C", REFERENCE_POLYS[name], _PROBES[name])
    printed = np.array(_PRINTED[name], dtype=float)
    M = DeformationMatrix(printed.T)
    c = deform(mother_r_so3(), M)
    return Dim4Entry(name, c, M, printed, _CLASS[name], REFERENCE_POLYS[name], _PROBES.get(name, ()))


def mother_entry() -> Dim4Entry:
    return Dim4Entry("mother", mother_r_so3(), DeformationMatrix(np.eye(4)), np.eye(4), "A", REFERENCE_POLYS["mother"])


def all_entries() -> list[Dim4Entry]:
    return [mother_entry()] + [dim4_entry(n) for n in NAMES]


def numeric_char_poly(c: StructureTensor, h) -> np.ndarray:
    """det(lambda I - A) of the singular generator c^a_{jk} h^k, by cofactor expansion."""
    from .spectral import charpoly_laplace

    return charpoly_laplace(alg.coadjoint_matrix(c, h))


@dataclass
class CharPolyReport:
    name: str
    descriptor: str
    trials: int
    max_rel_error: float
    worst_h: list
    worst_diff: list
    passed: bool
    eig_crosscheck: float = 0.0


def rel_coeff_error(p, q) -> float:
    p, q = np.asarray(p, float), np.asarray(q, float)
    return float(np.max(np.abs(p - q)) / max(float(np.max(np.abs(q))), 1e-300))


def verify_char_polys(entry: Dim4Entry, trials: int = 50, seed: int = 0, tol: float = 1e-8,
                      descriptor: CharPolyDescriptor | None = None) -> CharPolyReport:
    """Compare computed characteristic polynomials with a descriptor at random h."""
    desc = descriptor or entry.reference_char_poly
    rng = np.random.default_rng(seed)
    worst = (-1.0, None, None)
    cross = 0.0
    for _ in range(trials):
        h = rng.normal(size=4)
        got = numeric_char_poly(entry.tensor, h)
        # eigenvalue path as an independent check on the cofactor expansion
        ev = np.real(np.poly(np.linalg.eigvals(alg.coadjoint_matrix(entry.tensor, h))))
        cross = max(cross, float(np.max(np.abs(ev - got))) / (1.0 + float(np.max(np.abs(got)))))
        want = desc(h)
        err = rel_coeff_error(got, want)
        if err > worst[0]:
            worst = (err, h.tolist(), (got - want).tolist())
    return CharPolyReport(entry.name, desc.text, trials, worst[0], worst[1], worst[2], worst[0] < tol, cross)


@dataclass
class SymmetryTrials:
    name: str
    trials: int
    symmetric: int
    chiral: int
    exceptions: list  # (description, h, verdict) for probed special h


def symmetry_trials(c: StructureTensor, name: str, trials: int = 100, seed: int = 0,
                    probes=(), h_sampler=None) -> SymmetryTrials:
    """Negation-closure verdicts of the singular generator for random h.

    ``probes`` are (description, map) pairs turning a random h into a
    special one; their verdicts are reported as exceptions when symmetric.
    """
    rng = np.random.default_rng(seed)
    sample = h_sampler or (lambda r: r.normal(size=c.dim))
    sym = 0
    for _ in range(trials):
        h = sample(rng)
        if spectrum(alg.coadjoint_matrix(c, h), kind="singular").symmetric:
            sym += 1
    exc = []
    for desc, fn in probes:
        h = fn(rng.normal(size=c.dim))
        verdict = spectrum(alg.coadjoint_matrix(c, h), kind="singular").symmetry_verdict
        exc.append((desc, h.tolist(), verdict))
    return SymmetryTrials(name, trials, sym, trials - sym, exc)


def deformation_symmetry_check(entry: Dim4Entry, trials: int = 100, seed: int = 0) -> SymmetryTrials:
    return symmetry_trials(entry.tensor, entry.name, trials, seed, entry.symmetric_probes)
