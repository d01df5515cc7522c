"""Inner products between flow fields.

The Gram route evaluates each field and its first 2^n - 1 derivatives at a
probe point alpha, collects the basis images as columns of B(alpha), and uses
P = (B^-1)^dagger B^-1 so the basis fields come out orthonormal.  The circle
route averages conj(f1) * f2 over uniform unit-circle nodes, which is exact
for Laurent fields once the node count beats the largest exponent spread.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConditioningError
from .fields import (
    LaurentField,
    RepresentationConfig,
    charge_basis_fields,
    position_basis_fields,
)
from .polynomials import derivative_eval

CONDITION_LIMIT = 1e8
PROBE_RADII = (0.3, 0.7, 1.7, 2.9)
PROBE_ANGLES = 16
PROBE_KEEPOUT = 1e-3


@dataclass(frozen=True)
class GramContext:
    """Probe point, basis matrix, and weight matrix for one configuration."""

    config: RepresentationConfig
    alpha: complex
    basis_matrix: np.ndarray  # B: column sigma holds derivatives 0..2^n-1
    weight: np.ndarray  # P = (B^-1)^dagger B^-1, Hermitian positive definite
    condition_estimate: float

    @property
    def order(self) -> int:
        return self.basis_matrix.shape[0]

    def pi(self, field) -> np.ndarray:
        """Evaluation functional: field and derivatives at the probe point."""
        return derivative_eval(field, self.alpha, self.order - 1)

    def to_dict(self) -> dict:
        return {
            "alpha": [self.alpha.real, self.alpha.imag],
            "condition_estimate": self.condition_estimate,
            "basis_matrix": [
                [[v.real, v.imag] for v in row] for row in self.basis_matrix
            ],
            "weight": [[[v.real, v.imag] for v in row] for row in self.weight],
        }


def _basis_fields(cfg: RepresentationConfig):
    if cfg.kind == "charge":
        return charge_basis_fields(cfg.n, cfg.d)
    return position_basis_fields(cfg)


def build_gram(cfg: RepresentationConfig) -> GramContext:
    """Pick the best-conditioned probe point from a fixed candidate grid.

    Candidates on four circles are scanned in a fixed order and the matrix
    with the smallest 2-norm condition number wins; anything above 1e8 is
    rejected as numerically useless.
    """
    fields = _basis_fields(cfg)
    m = len(fields)
    keepout = list(cfg.defects) if cfg.kind == "position" else [0j]
    best = None
    for r in PROBE_RADII:
        for k in range(PROBE_ANGLES):
            alpha = r * np.exp(2j * np.pi * k / PROBE_ANGLES)
            if min(abs(alpha - p) for p in keepout) < PROBE_KEEPOUT:
                continue
            b = np.column_stack([derivative_eval(f, alpha, m - 1) for f in fields])
            cond = float(np.linalg.cond(b))
            if not np.isfinite(cond):
                continue
            if best is None or cond < best[0]:
                best = (cond, complex(alpha), b)
    if best is None or best[0] > CONDITION_LIMIT:
        raise ConditioningError(
            None if best is None else best[1],
            float("inf") if best is None else best[0],
        )
    cond, alpha, b = best
    b_inv = np.linalg.inv(b)
    weight = b_inv.conj().T @ b_inv
    weight = 0.5 * (weight + weight.conj().T)
    return GramContext(cfg, alpha, b, weight, cond)


def inner(f1, f2, ctx: GramContext) -> complex:
    """<f1, f2> with the Gram weight; conjugate-linear in the first slot."""
    v1 = ctx.pi(f1)
    v2 = ctx.pi(f2)
    return complex(v1.conj() @ ctx.weight @ v2)


def gram_norm(field, ctx: GramContext) -> float:
    return float(np.sqrt(max(inner(field, field, ctx).real, 0.0)))


def circle_inner_product(f1: LaurentField, f2: LaurentField, nodes: int | None = None) -> complex:
    """Average conj(f1) * f2 over uniform nodes on the unit circle.

    Exact (equal to the coefficient overlap sum) whenever the node count
    exceeds twice the largest absolute exponent of either field.
    """
    if not isinstance(f1, LaurentField) or not isinstance(f2, LaurentField):
        raise ValueError("the circle inner product is defined for Laurent fields")
    max_exp = max(f1.max_abs_exponent(), f2.max_abs_exponent())
    required = 2 * max_exp + 1
    if nodes is None:
        nodes = 2 * max_exp + 8
    if nodes < required:
        raise ValueError(f"need at least {required} nodes for exponents up to {max_exp}")
    z = np.exp(2j * np.pi * np.arange(nodes) / nodes)

    def values(f):
        out = np.zeros(nodes, dtype=complex)
        for c, a in f.terms.items():
            out += a * z**c
        return out

    return complex(np.mean(np.conj(values(f1)) * values(f2)))
