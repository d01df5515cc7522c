"""Dense complex polynomial arithmetic, all-roots finding, and derivative evaluation.

The root finder is an Ehrlich-Aberth simultaneous iteration (see Bini,
Numer. Algorithms 13, 1996) with deterministic starting points on a circle,
followed by greedy multiplicity clustering and a Newton refinement of each
cluster center on the appropriate derivative.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb

import numpy as np

from .errors import PoleEvaluationError, RootFindingError

TRIM_REL_TOL = 1e-14
CLUSTER_REL_RADIUS = 1e-6
ABERTH_TOL = 1e-12
ABERTH_MAX_ITER = 500

_EPS = np.finfo(float).eps


class Polynomial:
    """Polynomial with dense complex coefficients in ascending degree order.

    Trailing coefficients smaller than ``TRIM_REL_TOL * max|coeff|`` are
    dropped at construction.  The zero polynomial is stored as a single zero
    coefficient and reports degree -1.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        c = np.atleast_1d(np.asarray(coeffs, dtype=complex))
        if c.ndim != 1:
            raise ValueError("coefficients must be one-dimensional")
        scale = float(np.max(np.abs(c))) if c.size else 0.0
        if scale > 0.0:
            keep = np.nonzero(np.abs(c) > TRIM_REL_TOL * scale)[0]
            c = c[: keep[-1] + 1].copy() if keep.size else np.zeros(1, dtype=complex)
        else:
            c = np.zeros(1, dtype=complex)
        c.setflags(write=False)
        self.coeffs = c

    @classmethod
    def from_linear_factors(cls, factors) -> "Polynomial":
        """Exact convolution of ``(z - root)`` factors, in the given order.

        ``factors`` is an iterable of ``(root, multiplicity)`` pairs.
        """
        c = np.array([1.0 + 0.0j])
        for root, mult in factors:
            lin = np.array([-root, 1.0], dtype=complex)
            for _ in range(int(mult)):
                c = np.convolve(c, lin)
        return cls(c)

    @property
    def degree(self) -> int:
        if self.coeffs.size == 1 and self.coeffs[0] == 0:
            return -1
        return self.coeffs.size - 1

    def is_zero(self) -> bool:
        return self.degree < 0

    def __add__(self, other: "Polynomial") -> "Polynomial":
        a, b = self.coeffs, other.coeffs
        if a.size < b.size:
            a, b = b, a
        out = a.copy()
        out[: b.size] += b
        return Polynomial(out)

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + other.scale(-1.0)

    def __mul__(self, other: "Polynomial") -> "Polynomial":
        if self.is_zero() or other.is_zero():
            return Polynomial([0.0])
        return Polynomial(np.convolve(self.coeffs, other.coeffs))

    def scale(self, factor: complex) -> "Polynomial":
        return Polynomial(self.coeffs * factor)

    def derivative(self) -> "Polynomial":
        if self.coeffs.size == 1:
            return Polynomial([0.0])
        return Polynomial(self.coeffs[1:] * np.arange(1, self.coeffs.size))

    def __call__(self, z: complex) -> complex:
        val = 0.0 + 0.0j
        for c in self.coeffs[::-1]:
            val = val * z + c
        return val

    def __eq__(self, other) -> bool:
        return isinstance(other, Polynomial) and np.array_equal(self.coeffs, other.coeffs)

    def __repr__(self) -> str:
        return f"Polynomial({self.coeffs.tolist()})"


def _horner_with_bound(coeffs: np.ndarray, z: complex) -> tuple[complex, float]:
    """Evaluate by Horner and return a running bound on the roundoff in |p(z)|."""
    b = coeffs[-1]
    err = abs(b)
    az = abs(z)
    for c in coeffs[-2::-1]:
        b = b * z + c
        err = abs(b) + az * err
    return b, err * _EPS


@dataclass(frozen=True)
class RootSet:
    """All roots of a polynomial, clustered into (location, multiplicity) pairs."""

    roots: tuple[tuple[complex, int], ...]
    residual: float

    def total_multiplicity(self) -> int:
        return sum(m for _, m in self.roots)

    def to_dict(self) -> dict:
        return {"roots": [[r.real, r.imag, m] for r, m in self.roots]}


def _aberth(coeffs: np.ndarray, tol: float, max_iter: int) -> np.ndarray:
    """Simultaneous root iteration on a monic-normalized coefficient array."""
    n = coeffs.size - 1
    if n == 1:
        return np.array([-coeffs[0] / coeffs[1]])
    c = coeffs / coeffs[-1]
    radius = 1.0 + float(np.max(np.abs(c[:-1])))
    angles = 2.0 * np.pi * np.arange(n) / n + np.pi / (2.0 * n)
    z = radius * np.exp(1j * angles)
    dcoeffs = c[1:] * np.arange(1, n + 1)
    done = np.zeros(n, dtype=bool)
    for _ in range(max_iter):
        moved = False
        for k in range(n):
            if done[k]:
                continue
            pv, bound = _horner_with_bound(c, z[k])
            if abs(pv) <= 4.0 * bound:
                done[k] = True
                continue
            dv, _ = _horner_with_bound(dcoeffs, z[k])
            if dv == 0:
                z[k] += (1e-6 + 1e-6j) * (1.0 + abs(z[k]))
                moved = True
                continue
            newton = pv / dv
            diffs = z[k] - np.delete(z, k)
            if np.any(diffs == 0):
                z[k] += (1e-6 - 1e-6j) * (1.0 + abs(z[k]))
                moved = True
                continue
            denom = 1.0 - newton * np.sum(1.0 / diffs)
            w = newton if denom == 0 else newton / denom
            z[k] -= w
            if abs(w) > tol * (1.0 + abs(z[k])):
                moved = True
            else:
                done[k] = True
        if not moved:
            break
    return z


def _cluster(points: np.ndarray) -> list[list[int]]:
    """Greedy union of approximations within CLUSTER_REL_RADIUS * (1 + |root|)."""
    order = sorted(range(len(points)), key=lambda i: (points[i].real, points[i].imag))
    parent = list(range(len(points)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for a_pos, i in enumerate(order):
        for j in order[a_pos + 1 :]:
            r = CLUSTER_REL_RADIUS * (1.0 + max(abs(points[i]), abs(points[j])))
            if abs(points[i] - points[j]) <= r:
                parent[find(i)] = find(j)
    groups: dict[int, list[int]] = {}
    for i in range(len(points)):
        groups.setdefault(find(i), []).append(i)
    return sorted(groups.values(), key=lambda g: (points[g[0]].real, points[g[0]].imag))


def _refine_multiple(poly: Polynomial, center: complex, mult: int) -> complex:
    # an m-fold root of p is a simple root of the (m-1)-th derivative
    p = poly
    for _ in range(mult - 1):
        p = p.derivative()
    dp = p.derivative()
    z = center
    for _ in range(50):
        pv = p(z)
        dv = dp(z)
        if dv == 0:
            break
        step = pv / dv
        z_new = z - step
        if abs(z_new - center) > 10.0 * CLUSTER_REL_RADIUS * (1.0 + abs(center)):
            return center  # refinement wandered off; keep the cluster mean
        z = z_new
        if abs(step) <= 1e-15 * (1.0 + abs(z)):
            break
    return z


def roots(poly: Polynomial, tol: float = ABERTH_TOL, max_iter: int = ABERTH_MAX_ITER) -> RootSet:
    """All complex roots of ``poly`` with multiplicities.

    Deterministic for a given input.  Raises ``ValueError`` for the zero
    polynomial or a nonzero constant, and ``RootFindingError`` if any
    reported root fails the backward-error residual check.
    """
    if poly.degree < 1:
        raise ValueError("roots are undefined for a constant or zero polynomial")
    coeffs = poly.coeffs
    origin_mult = 0
    while coeffs[0] == 0:
        origin_mult += 1
        coeffs = coeffs[1:]
    found: list[tuple[complex, int]] = []
    if origin_mult:
        found.append((0.0 + 0.0j, origin_mult))
    if coeffs.size > 1:
        approx = _aberth(coeffs, tol, max_iter)
        deflated = Polynomial(coeffs)
        for group in _cluster(approx):
            mult = len(group)
            center = complex(np.mean(approx[group]))
            if mult > 1:
                center = _refine_multiple(deflated, center, mult)
            found.append((center, mult))
    scale = float(np.max(np.abs(poly.coeffs)))
    residual = 0.0
    for r, _ in found:
        residual = max(residual, abs(poly(r)))
        allowed = 1e-8 * scale * (1.0 + abs(r)) ** poly.degree
        if abs(poly(r)) > allowed:
            raise RootFindingError(
                f"root {r} has residual {abs(poly(r)):.3e} above bound {allowed:.3e}"
            )
    ordered = tuple(sorted(found, key=lambda rm: (rm[0].real, rm[0].imag)))
    return RootSet(roots=ordered, residual=residual)


def _falling_factorial(c: int, k: int) -> int:
    f = 1
    for i in range(k):
        f *= c - i
    return f


def _laurent_derivatives(terms: dict, alphac: complex, max_order: int) -> np.ndarray:
    if alphac == 0 and any(c < 0 for c in terms):
        raise PoleEvaluationError(0.0 + 0.0j)
    out = np.zeros(max_order + 1, dtype=complex)
    for c, coef in terms.items():
        for k in range(max_order + 1):
            ff = _falling_factorial(c, k)
            if ff == 0:
                continue
            if alphac == 0:
                if c - k == 0:
                    out[k] += coef * ff
                elif c - k > 0:
                    continue
            else:
                out[k] += coef * ff * alphac ** (c - k)
    return out


def _rational_derivatives(
    numer: Polynomial, denom: Polynomial, alphac: complex, max_order: int, pole_hint=None
) -> np.ndarray:
    q0 = denom(alphac)
    if q0 == 0:
        raise PoleEvaluationError(pole_hint if pole_hint is not None else alphac)
    # Leibniz inversion of N = f * Q gives an exact recurrence for f^(k)(alpha)
    nd = [numer]
    qd = [denom]
    for _ in range(max_order):
        nd.append(nd[-1].derivative())
        qd.append(qd[-1].derivative())
    nvals = np.array([p(alphac) for p in nd])
    qvals = np.array([p(alphac) for p in qd])
    f = np.zeros(max_order + 1, dtype=complex)
    for k in range(max_order + 1):
        acc = nvals[k]
        for i in range(k):
            acc -= comb(k, i) * f[i] * qvals[k - i]
        f[k] = acc / q0
    return f


def derivative_eval(field, alpha: complex, max_order: int) -> np.ndarray:
    """Complex derivatives ``[f(alpha), Df(alpha), ..., D^m f(alpha)]`` of a field.

    Works for both sparse Laurent fields and numerator/denominator rational
    fields, using exact recurrences rather than finite differences.
    """
    alphac = complex(alpha)
    if max_order < 0:
        raise ValueError("max_order must be >= 0")
    if hasattr(field, "terms"):
        return _laurent_derivatives(field.terms, alphac, max_order)
    if hasattr(field, "numerator"):
        pole = None
        for a, _ in field.denominator_spec:
            if alphac == complex(a):
                pole = complex(a)
        return _rational_derivatives(
            field.numerator, field.denominator_polynomial(), alphac, max_order, pole_hint=pole
        )
    raise TypeError(f"unsupported field type {type(field)!r}")


def wronskian_matrix(fields, alpha: complex, order: int | None = None) -> np.ndarray:
    """Matrix B(alpha): column j holds derivatives of field j at orders 0..m-1."""
    if not fields:
        raise ValueError("need at least one field")
    m = len(fields) if order is None else int(order)
    cols = [derivative_eval(f, alpha, m - 1) for f in fields]
    return np.column_stack(cols)
