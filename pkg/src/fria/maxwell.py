"""Upper bounds for the tangential Maxwell constant on convex 3-D domains.

Each bound is the maximum of a Friedrichs arm (controlling gradients) and
a Poincare arm sqrt(eps_max) * diam / pi (controlling rotations).
Convexity of the domain is a caller-asserted precondition; it is not
verified here.
"""

import math
from dataclasses import dataclass

from .friedrichs import (
    BoundReport,
    BoundUnavailable,
    diagonal_bound,
    semidef_bound,
)
from .weights import (
    DiagonalWeight,
    DInterval,
    FullWeight,
    WeightError,
    largest_eigenvalue,
    smallest_eigenvalue,
    tilde_reduction,
)


@dataclass(frozen=True)
class MaxwellInput:
    """Box, permittivity, domain diameter and largest permittivity eigenvalue.

    ``diam`` defaults to the box diagonal and ``eps_max`` to the largest
    eigenvalue of the constant matrix, matching a domain that fills its box.
    """

    box: DInterval
    eps: object
    diam: float = None
    eps_max: float = None

    def __post_init__(self):
        if self.box.d != 3:
            raise WeightError("Maxwell bounds need a 3-dimensional box")
        if self.eps.d != 3:
            raise WeightError("Maxwell bounds need a 3x3 permittivity")
        diam = self.box.diagonal if self.diam is None else float(self.diam)
        if not (math.isfinite(diam) and diam > 0.0):
            raise WeightError(f"diameter must be positive, got {diam}")
        if diam > self.box.diagonal * (1.0 + 1e-12):
            raise WeightError(
                f"diameter {diam} exceeds the box diagonal {self.box.diagonal}"
            )
        eps_max = largest_eigenvalue(self.eps) if self.eps_max is None else float(self.eps_max)
        if eps_max < smallest_eigenvalue(self.eps):
            raise WeightError(
                f"eps_max {eps_max} is below the smallest permittivity eigenvalue"
            )
        object.__setattr__(self, "diam", diam)
        object.__setattr__(self, "eps_max", eps_max)

    def digest(self):
        return {
            "lengths": list(self.box.lengths),
            "eps": self.eps.digest(),
            "diam": self.diam,
            "eps_max": self.eps_max,
        }


def poincare_convex_bound(diam):
    """Poincare constant bound diam/pi for convex domains."""
    diam = float(diam)
    if not (math.isfinite(diam) and diam > 0.0):
        raise WeightError(f"diameter must be positive, got {diam}")
    return diam / math.pi


def maxwell_from_parts(c_feps, eps_max, c_p):
    """Maxwell bound max(c_feps, sqrt(eps_max) * c_p) from its two arms."""
    if min(c_feps, eps_max, c_p) <= 0.0:
        raise ValueError("all inputs must be positive")
    return max(c_feps, math.sqrt(eps_max) * c_p)


def _poincare_arm(inp):
    return math.sqrt(inp.eps_max) * poincare_convex_bound(inp.diam)


def maxwell_coarse(inp):
    """Coarse bound using only the smallest permittivity eigenvalue."""
    eps_min = smallest_eigenvalue(inp.eps)
    if eps_min <= 0.0:
        raise BoundUnavailable(
            f"coarse Maxwell bound undefined: smallest eigenvalue {eps_min} not positive"
        )
    friedrichs_arm = 1.0 / (math.pi * math.sqrt(eps_min * inp.box.inverse_square_sum()))
    return BoundReport(max(friedrichs_arm, _poincare_arm(inp)), "coarse", inp.digest())


def maxwell_diagonal(inp):
    """Per-direction bound for diagonal permittivity.

    Zero directions are tolerated by switching the Friedrichs arm to the
    positive-directions-only bound; the report carries that flag.
    """
    if not isinstance(inp.eps, DiagonalWeight):
        raise WeightError("maxwell_diagonal needs a diagonal permittivity")
    if inp.eps.uniformly_positive:
        fr = diagonal_bound(inp.box, inp.eps)
        method = "thmA"
    else:
        fr = semidef_bound(inp.box, inp.eps)
        method = "semidef"
    value = max(fr.value, _poincare_arm(inp))
    return BoundReport(value, method, inp.digest(), seminorm=fr.seminorm)


def maxwell_full(inp):
    """Bound for full symmetric permittivity via the tilde reduction."""
    if not isinstance(inp.eps, FullWeight):
        raise WeightError("maxwell_full needs a full symmetric permittivity")
    t = tilde_reduction(inp.eps)
    if t.uniformly_positive:
        fr = diagonal_bound(inp.box, t)
        method = "thmA2"
        seminorm = False
    elif all(a >= 0.0 for a in t.entries) and any(a > 0.0 for a in t.entries):
        fr = semidef_bound(inp.box, t)
        method = "semidef"
        seminorm = True
    else:
        raise BoundUnavailable(
            f"tilde reduction diag{t.entries} has no usable positive direction"
        )
    value = max(fr.value, _poincare_arm(inp))
    return BoundReport(value, method, inp.digest(), seminorm=seminorm)


# Only the columns where the largest permittivity eigenvalue is 1; for
# larger anisotropy the Poincare arm grows with sqrt(eps_max) and the
# printed reference values no longer follow the stated bounds.
TABLE3_DELTAS = (1e-6, 1e-4, 1e-2, 1.0)


def table3_rows():
    """Coarse and per-direction Maxwell bounds on the unit cube for
    permittivity diag(1, 1, delta), delta <= 1."""
    box = DInterval((1.0, 1.0, 1.0))
    coarse = []
    diag = []
    for delta in TABLE3_DELTAS:
        inp = MaxwellInput(box, DiagonalWeight((1.0, 1.0, delta)))
        coarse.append(maxwell_coarse(inp).value)
        diag.append(maxwell_diagonal(inp).value)
    return [("coarse", coarse), ("thmA", diag)]
