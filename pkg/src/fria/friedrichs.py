"""Computable upper bounds for the weighted Friedrichs constant.

Every bound applies to functions vanishing on the whole boundary of a
domain enclosed in the axis-parallel box ``DInterval``.  The diagonal
route sharpens the coarse smallest-eigenvalue route and stays finite when
single directions degenerate; full matrices go through the tilde
reduction first.
"""

import math
from dataclasses import dataclass, field

from .weights import (
    DiagonalWeight,
    DInterval,
    FullWeight,
    WeightError,
    smallest_eigenvalue,
    tilde_reduction,
)

METHODS = ("mikhlin", "coarse", "thmA", "thmA2", "semidef", "directional")

# tie-break order for best_bound at equal values
_METHOD_RANK = {"thmA": 0, "thmA2": 1, "semidef": 2, "coarse": 3, "mikhlin": 4}


class BoundUnavailable(ValueError):
    """The requested bound formula does not apply to the given weight."""


@dataclass(frozen=True)
class BoundReport:
    """A computed constant bound plus the formula that produced it.

    ``seminorm`` is set when zero weight directions were dropped, in which
    case the weighted gradient expression on the right-hand side of the
    inequality is only a seminorm.
    """

    value: float
    method: str
    inputs: dict = field(default_factory=dict)
    seminorm: bool = False

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"unknown method tag {self.method!r}")
        if not (math.isfinite(self.value) and self.value > 0.0):
            raise ValueError(f"bound value must be finite and positive, got {self.value}")


def _digest(box, w=None, **extra):
    out = dict(box.digest())
    if w is not None:
        out["weight"] = w.digest()
    out.update(extra)
    return out


def _check_dims(box, w):
    if box.d != w.d:
        raise WeightError(f"box is {box.d}-dimensional but weight is {w.d}-dimensional")


def mikhlin_bound(box):
    """Unweighted box bound 1 / (pi sqrt(sum 1/l_i^2))."""
    value = 1.0 / (math.pi * math.sqrt(box.inverse_square_sum()))
    return BoundReport(value, "mikhlin", _digest(box))


def coarse_bound(box, w):
    """Smallest-eigenvalue bound 1 / (pi sqrt(a_min sum 1/l_i^2)).

    Blows up as the smallest eigenvalue of the weight approaches zero.
    """
    _check_dims(box, w)
    amin = smallest_eigenvalue(w)
    if amin <= 0.0:
        raise BoundUnavailable(
            f"coarse bound undefined: smallest eigenvalue {amin} is not positive"
        )
    value = 1.0 / (math.pi * math.sqrt(amin * box.inverse_square_sum()))
    return BoundReport(value, "coarse", _digest(box, w))


def diagonal_bound(box, w):
    """Per-direction bound 1 / (pi sqrt(sum a_i/l_i^2)) for positive diagonals."""
    if not isinstance(w, DiagonalWeight):
        raise WeightError("diagonal bound needs a diagonal weight")
    _check_dims(box, w)
    if not w.uniformly_positive:
        raise BoundUnavailable(
            "diagonal bound needs strictly positive entries; "
            "route nonnegative weights through semidef_bound"
        )
    s = sum(a / (l * l) for a, l in zip(w.entries, box.lengths))
    return BoundReport(1.0 / (math.pi * math.sqrt(s)), "thmA", _digest(box, w))


def full_bound(box, w):
    """Diagonal bound applied to the tilde reduction of a full matrix."""
    if not isinstance(w, FullWeight):
        raise WeightError("full bound needs a full symmetric weight")
    _check_dims(box, w)
    t = tilde_reduction(w)
    if not t.uniformly_positive:
        raise BoundUnavailable(
            f"tilde not positive definite: reduction diag{t.entries} "
            "has a nonpositive entry"
        )
    value = diagonal_bound(box, t).value
    return BoundReport(value, "thmA2", _digest(box, w))


def semidef_bound(box, w):
    """Diagonal bound summed over the strictly positive directions only.

    Needs a nonnegative diagonal with at least one positive entry.  With
    exactly one positive entry this is the single-direction bound
    l_i / (pi sqrt(a_i)).  The report is flagged: dropping directions
    leaves only a seminorm on the right-hand side.
    """
    if not isinstance(w, DiagonalWeight):
        raise WeightError("semidef bound needs a diagonal weight")
    _check_dims(box, w)
    if any(a < 0.0 for a in w.entries):
        raise BoundUnavailable("semidef bound needs nonnegative entries")
    s = sum(a / (l * l) for a, l in zip(w.entries, box.lengths) if a > 0.0)
    if s == 0.0:
        raise BoundUnavailable("semidef bound needs at least one positive entry")
    value = 1.0 / (math.pi * math.sqrt(s))
    seminorm = any(a == 0.0 for a in w.entries)
    return BoundReport(value, "semidef", _digest(box, w), seminorm=seminorm)


def directional_bound(length, mode="both_ends"):
    """One-dimensional constant for a single coordinate direction.

    ``both_ends``: zero boundary values at both interval ends, constant
    l/pi.  ``one_end``: zero value at one end only, constant l/sqrt(2).
    """
    length = float(length)
    if not (math.isfinite(length) and length > 0.0):
        raise WeightError(f"length must be positive, got {length}")
    if mode == "both_ends":
        return length / math.pi
    if mode == "one_end":
        return length / math.sqrt(2.0)
    raise ValueError(f"unknown mode {mode!r}, expected 'both_ends' or 'one_end'")


def _candidates(box, w):
    cands = []
    if isinstance(w, FullWeight) and w.is_diagonal:
        w = w.diagonal_part()
    if isinstance(w, DiagonalWeight):
        if w.uniformly_positive:
            cands.append(diagonal_bound(box, w))
        elif all(a >= 0.0 for a in w.entries) and any(a > 0.0 for a in w.entries):
            cands.append(semidef_bound(box, w))
    else:
        t = tilde_reduction(w)
        if t.uniformly_positive:
            cands.append(full_bound(box, w))
        elif all(a >= 0.0 for a in t.entries) and any(a > 0.0 for a in t.entries):
            rep = semidef_bound(box, t)
            cands.append(BoundReport(rep.value, "semidef", _digest(box, w), seminorm=True))
    if smallest_eigenvalue(w) > 0.0:
        cands.append(coarse_bound(box, w))
    return cands


def best_bound(box, w):
    """Smallest applicable bound; ties prefer thmA > thmA2 > semidef > coarse."""
    _check_dims(box, w)
    cands = _candidates(box, w)
    if not cands:
        raise BoundUnavailable(
            "no bound applies: weight is indefinite and its tilde reduction "
            "has no positive direction"
        )
    return min(cands, key=lambda r: (r.value, _METHOD_RANK[r.method]))


def coercivity_threshold(bound, eps):
    """Lower limit for the reaction coefficient keeping the
    reaction-diffusion form coercive.

    Any reaction coefficient above ``-eps / bound.value**2`` (with the
    split parameter ``eps`` in (0,1)) certifies unique solvability.
    """
    eps = float(eps)
    if not 0.0 < eps < 1.0:
        raise ValueError(f"eps must lie strictly between 0 and 1, got {eps}")
    return -eps / (bound.value * bound.value)


TABLE1_DELTAS = (1e-6, 1e-4, 1e-2, 1.0, 1e2, 1e4, 1e6)


def table1_rows():
    """Coarse and diagonal bound values on the unit square for
    anisotropy diag(1, delta) over the standard delta grid."""
    box = DInterval((1.0, 1.0))
    coarse = []
    diag = []
    for delta in TABLE1_DELTAS:
        w = DiagonalWeight((1.0, delta))
        coarse.append(coarse_bound(box, w).value)
        diag.append(diagonal_bound(box, w).value)
    return [("coarse", coarse), ("thmA", diag)]
