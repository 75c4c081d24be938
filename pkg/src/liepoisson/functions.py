"""Smooth scalar functions on phase space carried with their derivatives."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .errors import DomainError

Vec = np.ndarray


def _everywhere(xi):
    return np.inf


@dataclass(frozen=True)
class ScalarFunction:
    """A function xi -> f(xi) with gradient and optional analytic Hessian.

    ``boundary_distance(xi)`` returns a nonnegative distance-like number
    measuring how far xi is from the edge of the validity domain (``inf``
    for globally defined functions).  Points with distance below ``guard``
    are considered outside the domain.
    """

    value: Callable[[Vec], float]
    gradient: Callable[[Vec], Vec]
    hessian: Optional[Callable[[Vec], np.ndarray]] = None
    boundary_distance: Callable[[Vec], float] = _everywhere
    name: str = "f"
    expression: str = ""
    guard: float = 1e-3

    def __call__(self, xi) -> float:
        return float(self.value(np.asarray(xi, dtype=float)))

    def grad(self, xi) -> np.ndarray:
        return np.asarray(self.gradient(np.asarray(xi, dtype=float)), dtype=float)

    def in_domain(self, xi, guard: float | None = None) -> bool:
        g = self.guard if guard is None else guard
        return bool(self.boundary_distance(np.asarray(xi, dtype=float)) > g)

    def checked(self, xi) -> float:
        """Evaluate, raising DomainError outside the validity domain."""
        if not self.in_domain(xi, 0.0):
            raise DomainError(f"{self.name} is undefined at {np.asarray(xi).tolist()}")
        return self(xi)

    def hess(self, xi, step: float | None = None) -> np.ndarray:
        """Analytic Hessian when available, else central differences of the gradient."""
        xi = np.asarray(xi, dtype=float)
        if self.hessian is not None:
            return np.asarray(self.hessian(xi), dtype=float)
        h = 1e-5 * (1.0 + np.linalg.norm(xi)) if step is None else step
        n = xi.size
        out = np.empty((n, n))
        for j in range(n):
            e = np.zeros(n)
            e[j] = h
            out[:, j] = (self.grad(xi + e) - self.grad(xi - e)) / (2 * h)
        return 0.5 * (out + out.T)

    def __add__(self, other: "ScalarFunction") -> "ScalarFunction":
        return linear_combination([(1.0, self), (1.0, other)], name=f"{self.name}+{other.name}")


# CasimirFunction is just a ScalarFunction whose gradient lies in Ker J.
CasimirFunction = ScalarFunction


def linear_combination(terms, name: str = "F") -> ScalarFunction:
    """Sum of ``coef * f`` over ``terms = [(coef, f), ...]``."""
    terms = [(float(a), f) for a, f in terms]

    def value(x):
        return sum(a * f.value(x) for a, f in terms)

    def gradient(x):
        return sum(a * np.asarray(f.gradient(x), dtype=float) for a, f in terms)

    def hessian(x):
        return sum(a * np.asarray(f.hessian(x), dtype=float) for a, f in terms)

    analytic = all(f.hessian is not None for _, f in terms)

    def dist(x):
        return min(f.boundary_distance(x) for _, f in terms)

    expr = " + ".join(f"{a:g}*({f.expression or f.name})" for a, f in terms)
    return ScalarFunction(value, gradient, hessian if analytic else None, dist, name=name, expression=expr)


def quadratic_form(Q, name: str = "q") -> ScalarFunction:
    """f(xi) = 1/2 <xi, Q xi> for symmetric Q."""
    Q = np.array(Q, dtype=float)
    Q = 0.5 * (Q + Q.T)
    Q.flags.writeable = False
    return ScalarFunction(
        value=lambda x: 0.5 * float(x @ Q @ x),
        gradient=lambda x: Q @ x,
        hessian=lambda x: Q,
        name=name,
        expression=f"1/2 <xi, Q xi>, Q={Q.tolist()}",
    )


def linear_function(a, name: str = "l") -> ScalarFunction:
    a = np.array(a, dtype=float)
    a.flags.writeable = False
    n = a.size
    return ScalarFunction(
        value=lambda x: float(a @ x),
        gradient=lambda x: a.copy(),
        hessian=lambda x: np.zeros((n, n)),
        name=name,
        expression=f"<{a.tolist()}, xi>",
    )


def coordinate(j: int, n: int, name: str | None = None) -> ScalarFunction:
    """The coordinate function xi -> xi_j (0-based j)."""
    e = np.zeros(n)
    e[j] = 1.0
    f = linear_function(e, name=name or f"xi{j + 1}")
    return ScalarFunction(f.value, f.gradient, f.hessian, name=f.name, expression=f"xi{j + 1}")


@dataclass(frozen=True)
class Polynomial:
    """Dense multivariate polynomial in n variables, degree <= 4.

    Stored as symmetric coefficient tensors c0 + c1.x + x.C2.x/2 + C3[x,x,x]/6
    + C4[x,x,x,x]/24 so that value, gradient and Hessian are einsum contractions.
    """

    coeffs: tuple = field(default_factory=tuple)

    def value(self, x):
        out = 0.0
        for d, t in enumerate(self.coeffs):
            v = t
            for _ in range(d):
                v = v @ x
            out += float(v) / _fact(d)
        return out

    def gradient(self, x):
        n = x.size
        g = np.zeros(n)
        for d, t in enumerate(self.coeffs):
            if d == 0:
                continue
            v = t
            for _ in range(d - 1):
                v = v @ x
            g = g + v / _fact(d - 1)
        return g

    def hessian(self, x):
        n = x.size
        hm = np.zeros((n, n))
        for d, t in enumerate(self.coeffs):
            if d < 2:
                continue
            v = t
            for _ in range(d - 2):
                v = v @ x
            hm = hm + v / _fact(d - 2)
        return hm

    def as_function(self, name: str = "p") -> ScalarFunction:
        return ScalarFunction(self.value, self.gradient, self.hessian, name=name,
                              expression=f"polynomial of degree {len(self.coeffs) - 1}")


def _fact(d):
    return (1, 1, 2, 6, 24, 120)[d]


def _symmetrize(t: np.ndarray) -> np.ndarray:
    import itertools

    perms = list(itertools.permutations(range(t.ndim)))
    return sum(t.transpose(p) for p in perms) / len(perms)


def random_polynomial(n: int, degree: int, rng: np.random.Generator, scale: float = 1.0) -> Polynomial:
    """Random polynomial with Gaussian coefficients up to ``degree`` (<= 4)."""
    if not 0 <= degree <= 4:
        raise ValueError("degree must be in 0..4")
    coeffs = []
    for d in range(degree + 1):
        t = rng.normal(scale=scale, size=(n,) * d) if d else np.array(rng.normal(scale=scale))
        coeffs.append(_symmetrize(t) if d >= 2 else t)
    return Polynomial(tuple(coeffs))
