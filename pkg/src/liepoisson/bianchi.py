"""The nine Bianchi types of real 3-dimensional Lie algebras.

Brackets follow the usual table with [e_i, e_j] listed for i < j:

    I      abelian
    II     [e2,e3] = e1                      (Heisenberg)
    III    [e1,e3] = e1
    IV     [e1,e3] = e1, [e2,e3] = e1 + e2
    V      [e1,e3] = e1, [e2,e3] = e2
    VI(h)  [e1,e3] = e1, [e2,e3] = h e2
    VII(h) [e1,e3] = e2, [e2,e3] = -e1 + h e2
    VIII   [e1,e2] = e3, [e1,e3] = e2, [e2,e3] = -e1
    IX     [e1,e2] = e3, [e2,e3] = e1, [e3,e1] = e2   (so(3))
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import algebra as alg
from .algebra import StructureTensor
from .deformation import recover_M
from .functions import CasimirFunction, ScalarFunction, coordinate, quadratic_form

LABELS = ("I", "II", "III", "IV", "V", "VI", "VII", "VIII", "IX")
PARAMETRIC = ("VI", "VII")


def _fmt(x: float) -> str:
    return f"{x:g}"


@dataclass(frozen=True)
class BianchiType:
    label: str
    eta: Optional[float] = None

    def __post_init__(self):
        if self.label not in LABELS:
            raise ValueError(f"unknown Bianchi type {self.label!r}")
        if self.label in PARAMETRIC:
            if self.eta is None:
                raise ValueError(f"type {self.label} needs a parameter eta")
            if not math.isfinite(self.eta):
                raise ValueError("eta must be finite")
            object.__setattr__(self, "eta", float(self.eta))
        elif self.eta is not None:
            raise ValueError(f"type {self.label} takes no parameter")

    @property
    def klass(self) -> str:
        """'A' or 'B' (Bianchi class)."""
        if self.label == "VI":
            return "A" if self.eta == -1.0 else "B"
        if self.label == "VII":
            return "A" if self.eta == 0.0 else "B"
        return "A" if self.label in ("I", "II", "VIII", "IX") else "B"

    def __str__(self):
        return self.label if self.eta is None else f"{self.label}({_fmt(self.eta)})"

    @classmethod
    def parse(cls, text: str, eta: float | None = None) -> "BianchiType":
        """Accepts 'IX', 'vi(-1)', 'VII_0.5', 'VI' with ``eta`` given separately."""
        m = re.fullmatch(r"\s*([IVXivx]+)\s*(?:[(_]\s*([-+0-9.eE]+)\s*\)?)?\s*", text)
        if not m:
            raise ValueError(f"cannot parse Bianchi type {text!r}")
        label = m.group(1).upper()
        if m.group(2) is not None:
            if eta is not None and float(m.group(2)) != eta:
                raise ValueError("conflicting eta values")
            eta = float(m.group(2))
        if label not in PARAMETRIC:
            eta = None
        return cls(label, eta)


def all_types(etas=(-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0)) -> list[BianchiType]:
    """Every type, with VI and VII sampled at ``etas``."""
    out = []
    for lab in LABELS:
        if lab in PARAMETRIC:
            out += [BianchiType(lab, e) for e in etas]
        else:
            out.append(BianchiType(lab))
    return out


def bianchi_algebra(t: BianchiType) -> StructureTensor:
    """Structure tensor of type ``t`` in its standard basis."""
    eta = t.eta
    tables = {
        "I": {},
        "II": {(2, 3): {1: 1.0}},
        "III": {(1, 3): {1: 1.0}},
        "IV": {(1, 3): {1: 1.0}, (2, 3): {1: 1.0, 2: 1.0}},
        "V": {(1, 3): {1: 1.0}, (2, 3): {2: 1.0}},
        "VI": {(1, 3): {1: 1.0}, (2, 3): {2: eta}},
        "VII": {(1, 3): {2: 1.0}, (2, 3): {1: -1.0, 2: eta}},
        "VIII": {(1, 2): {3: 1.0}, (1, 3): {2: 1.0}, (2, 3): {1: -1.0}},
        "IX": {(1, 2): {3: 1.0}, (2, 3): {1: 1.0}, (3, 1): {2: 1.0}},
    }
    return StructureTensor.from_table(3, tables[t.label])


# -- Casimirs ---------------------------------------------------------------

def _const_dist(x):
    return math.inf


def casimir_of(t: BianchiType) -> CasimirFunction:
    """A Casimir of the Lie-Poisson bracket of type ``t``.

    Class A types use the quadratic form 1/2 <xi, M xi> with M recovered
    from the structure constants.  Type I has every function as a Casimir;
    the coordinate xi1 is returned.  Class B Casimirs are defined off the
    zero sets of their denominators and log arguments, which is reflected
    in ``boundary_distance``.
    """
    if t.label == "I":
        f = coordinate(0, 3)
        return ScalarFunction(f.value, f.gradient, f.hessian, name="C_I", expression="xi1")
    if t.klass == "A":
        M = recover_M(bianchi_algebra(t)).M
        q = quadratic_form(M, name=f"C_{t}")
        return ScalarFunction(q.value, q.gradient, q.hessian, name=q.name,
                              expression=_quadratic_expr(M))
    lab, eta = t.label, t.eta
    if lab == "III" or (lab == "VI" and eta == 0.0):
        f = coordinate(1, 3)
        return ScalarFunction(f.value, f.gradient, f.hessian, name=f"C_{t}", expression="xi2")
    if lab == "IV":
        return ScalarFunction(
            value=lambda x: x[1] / x[0] - math.log(abs(x[0])),
            gradient=lambda x: np.array([-x[1] / x[0] ** 2 - 1.0 / x[0], 1.0 / x[0], 0.0]),
            boundary_distance=lambda x: abs(x[0]),
            name="C_IV", expression="xi2/xi1 - log|xi1|",
        )
    if lab == "V":
        return ScalarFunction(
            value=lambda x: x[0] / x[1],
            gradient=lambda x: np.array([1.0 / x[1], -x[0] / x[1] ** 2, 0.0]),
            boundary_distance=lambda x: abs(x[1]),
            name="C_V", expression="xi1/xi2",
        )
    if lab == "VI":
        return ScalarFunction(
            value=lambda x: eta * math.log(abs(x[0])) - math.log(abs(x[1])),
            gradient=lambda x: np.array([eta / x[0], -1.0 / x[1], 0.0]),
            boundary_distance=lambda x: min(abs(x[0]), abs(x[1])),
            name=f"C_{t}", expression=f"{_fmt(eta)}*log|xi1| - log|xi2|",
        )
    return _casimir_vii(eta)


def _casimir_vii(eta: float) -> CasimirFunction:
    name = f"C_VII({_fmt(eta)})"
    if eta * eta > 4.0:
        r = math.sqrt(eta * eta - 4.0)
        lp, lm = (-eta + r) / 2.0, (-eta - r) / 2.0

        def value(x):
            return lm * math.log(abs(lm * x[0] + x[1])) - lp * math.log(abs(lp * x[0] + x[1]))

        def gradient(x):
            dm, dp = lm * x[0] + x[1], lp * x[0] + x[1]
            return np.array([lm * lm / dm - lp * lp / dp, lm / dm - lp / dp, 0.0])

        def dist(x):
            return min(abs(lm * x[0] + x[1]), abs(lp * x[0] + x[1]))

        expr = (f"l- log|-l- xi1 - xi2| - l+ log|l+ xi1 + xi2|, "
                f"l+-=(-eta+-sqrt(eta^2-4))/2 = {lp!r}, {lm!r}")
        return ScalarFunction(value, gradient, boundary_distance=dist, name=name, expression=expr)
    if eta * eta == 4.0:
        s = 1.0 if eta > 0 else -1.0

        def value(x):
            d = x[0] - s * x[1]
            return s * x[1] / d + math.log(abs(d))

        def gradient(x):
            d = x[0] - s * x[1]
            return np.array([-s * x[1] / d ** 2 + 1.0 / d, x[1] / d ** 2, 0.0])

        sg = "-" if s > 0 else "+"
        expr = f"{'' if s > 0 else '-'}xi2/(xi1{sg}xi2) + log|xi1{sg}xi2|"
        return ScalarFunction(value, gradient, boundary_distance=lambda x: abs(x[0] - s * x[1]),
                              name=name, expression=expr)
    a = -eta / 2.0
    w = math.sqrt(1.0 - eta * eta / 4.0)

    def value(x):
        u, v = a * x[0] + x[1], w * x[0]
        return 2 * a * math.atan(u / v) - w * math.log(u * u + v * v)

    def gradient(x):
        u, v = a * x[0] + x[1], w * x[0]
        q = u * u + v * v
        # d atan(u/v) = (v du - u dv)/q;  d log q = 2(u du + v dv)/q
        g1 = 2 * a * (v * a - u * w) / q - w * 2 * (u * a + v * w) / q
        g2 = 2 * a * v / q - w * 2 * u / q
        return np.array([g1, g2, 0.0])

    expr = (f"2a atan((a xi1 + xi2)/(w xi1)) - w log((a xi1 + xi2)^2 + (w xi1)^2), "
            f"a={a!r}, w={w!r}")
    return ScalarFunction(value, gradient, boundary_distance=lambda x: abs(x[0]),
                          name=name, expression=expr)


def _quadratic_expr(M: np.ndarray) -> str:
    terms = []
    for i in range(3):
        for j in range(i, 3):
            coef = M[i, j] * (0.5 if i == j else 1.0)
            if coef:
                mono = f"xi{i + 1}^2" if i == j else f"xi{i + 1}*xi{j + 1}"
                terms.append(f"{coef:+g}*{mono}")
    return " ".join(terms) if terms else "0"


# -- singular sets ----------------------------------------------------------

@dataclass(frozen=True)
class SingularSet:
    """The linear subspace {xi : J(xi) = 0}, spanned by the rows of ``basis``."""

    kind: str
    basis: np.ndarray
    description: str

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    def contains(self, xi, tol: float = 1e-12) -> bool:
        xi = np.asarray(xi, dtype=float)
        P = self.basis.T @ self.basis if self.dim else np.zeros((3, 3))
        return bool(np.linalg.norm(xi - P @ xi) <= tol * (1.0 + np.linalg.norm(xi)))

    def sample(self, rng: np.random.Generator, scale: float = 1.0) -> np.ndarray:
        if self.dim == 0:
            return np.zeros(self.basis.shape[1])
        return rng.normal(scale=scale, size=self.dim) @ self.basis


def singular_set(t: BianchiType) -> SingularSet:
    e = np.eye(3)
    if t.label == "I":
        return SingularSet("all", e, "all of phase space")
    if t.label in ("II", "III") or (t.label == "VI" and t.eta == 0.0):
        return SingularSet("plane", e[1:], "plane xi1 = 0")
    if t.label in ("VIII", "IX"):
        return SingularSet("point", np.zeros((0, 3)), "origin")
    return SingularSet("line", e[2:], "xi3-axis (xi1 = xi2 = 0)")


# -- reversal ----------------------------------------------------------------

REVERSAL_CANDIDATES = {
    "T3": np.diag([1.0, 1.0, -1.0]),
    "T2": np.diag([1.0, -1.0, 1.0]),
    "T12": np.array([[0.0, 1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 1.0]]),
}


def reversal_defect(c: StructureTensor, T: np.ndarray, xi: np.ndarray) -> float:
    """|| T J(T xi) T^T + J(xi) ||_max: zero when T reverses the bracket at xi.

    This is the statement that xi -> T xi maps Hamilton's equations with J
    to those with -J, i.e. it reverses time.
    """
    from .lie_poisson import poisson_matrix

    return float(np.max(np.abs(T @ poisson_matrix(c, T @ xi) @ T.T + poisson_matrix(c, xi))))


def reversal_transforms(t: BianchiType, samples: int = 100, seed: int = 0,
                        tol: float = 1e-12) -> list[tuple[str, np.ndarray]]:
    """Candidate involutions T3, T2, T12 that reverse the type's bracket.

    Each candidate is verified at ``samples`` seeded random points; since
    J is linear the check is exact up to round-off.
    """
    c = bianchi_algebra(t)
    rng = np.random.default_rng(seed)
    pts = rng.normal(size=(samples, 3))
    out = []
    for name, T in REVERSAL_CANDIDATES.items():
        if all(reversal_defect(c, T, x) <= tol * (1.0 + np.abs(x).max()) for x in pts):
            out.append((name, T.copy()))
    return out


def killing_scaled(t: BianchiType) -> np.ndarray:
    """Killing form divided by 2 (so(3) gives -I)."""
    return alg.killing_form(bianchi_algebra(t)) / 2.0
