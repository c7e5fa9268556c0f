"""Constant coefficient matrices and their spectral helpers.

All weights are real and constant over the domain.  Diagonal weights are
stored as their diagonal, full weights as an exactly symmetric d x d tuple
matrix with d <= 3.  Eigenvalues are computed by closed forms (quadratic
formula for d = 2, trigonometric solve of the characteristic cubic for
d = 3), so no linear-algebra package is needed at this size.
"""

import math
from dataclasses import dataclass


class WeightError(ValueError):
    """Invalid weight or box data."""


@dataclass(frozen=True)
class DInterval:
    """Axis-parallel open box prod_i (0, l_i) enclosing the domain."""

    lengths: tuple

    def __post_init__(self):
        lengths = tuple(float(l) for l in self.lengths)
        object.__setattr__(self, "lengths", lengths)
        if not 1 <= len(lengths) <= 3:
            raise WeightError(f"box dimension must be 1, 2 or 3, got {len(lengths)}")
        for l in lengths:
            if not (math.isfinite(l) and l > 0.0):
                raise WeightError(f"box side lengths must be finite and positive, got {l}")

    @property
    def d(self):
        return len(self.lengths)

    @property
    def diagonal(self):
        """Length of the box diagonal, sqrt(sum l_i^2)."""
        return math.sqrt(sum(l * l for l in self.lengths))

    def inverse_square_sum(self):
        return sum(1.0 / (l * l) for l in self.lengths)

    def digest(self):
        return {"lengths": list(self.lengths)}


@dataclass(frozen=True)
class DiagonalWeight:
    """Constant diagonal coefficient matrix diag(a_1..a_d).

    Entries may be negative only as the output of :func:`tilde_reduction`;
    every bound formula checks the sign condition it actually needs.
    """

    entries: tuple

    def __post_init__(self):
        entries = tuple(float(a) for a in self.entries)
        object.__setattr__(self, "entries", entries)
        if not 1 <= len(entries) <= 3:
            raise WeightError(f"weight dimension must be 1, 2 or 3, got {len(entries)}")
        for a in entries:
            if not math.isfinite(a):
                raise WeightError("weight entries must be finite")

    @property
    def d(self):
        return len(self.entries)

    @property
    def uniformly_positive(self):
        return all(a > 0.0 for a in self.entries)

    @property
    def matrix(self):
        return tuple(
            tuple(self.entries[i] if i == j else 0.0 for j in range(self.d))
            for i in range(self.d)
        )

    def digest(self):
        return {"diag": list(self.entries)}


@dataclass(frozen=True)
class FullWeight:
    """Constant symmetric d x d coefficient matrix, symmetry held exactly."""

    entries: tuple

    def __post_init__(self):
        rows = tuple(tuple(float(v) for v in row) for row in self.entries)
        object.__setattr__(self, "entries", rows)
        d = len(rows)
        if not 1 <= d <= 3 or any(len(row) != d for row in rows):
            raise WeightError("full weight must be a square 1x1, 2x2 or 3x3 matrix")
        for i in range(d):
            for j in range(d):
                if not math.isfinite(rows[i][j]):
                    raise WeightError("weight entries must be finite")
                if rows[i][j] != rows[j][i]:
                    raise WeightError(
                        f"matrix not symmetric: entry ({i},{j})={rows[i][j]} "
                        f"differs from ({j},{i})={rows[j][i]}"
                    )

    @classmethod
    def from_upper(cls, values):
        """Build from the upper triangle in row-major order.

        1, 3 or 6 values for d = 1, 2, 3.
        """
        values = [float(v) for v in values]
        if len(values) == 1:
            (a,) = values
            return cls(((a,),))
        if len(values) == 3:
            a, b, c = values
            return cls(((a, b), (b, c)))
        if len(values) == 6:
            a11, a12, a13, a22, a23, a33 = values
            return cls(((a11, a12, a13), (a12, a22, a23), (a13, a23, a33)))
        raise WeightError(
            f"upper triangle needs 1, 3 or 6 values (d = 1, 2, 3), got {len(values)}"
        )

    @property
    def d(self):
        return len(self.entries)

    @property
    def matrix(self):
        return self.entries

    @property
    def is_diagonal(self):
        return all(
            self.entries[i][j] == 0.0
            for i in range(self.d)
            for j in range(self.d)
            if i != j
        )

    def diagonal_part(self):
        return DiagonalWeight(tuple(self.entries[i][i] for i in range(self.d)))

    def digest(self):
        return {"full": [list(row) for row in self.entries]}


def _eig2(a11, a12, a22):
    mean = 0.5 * (a11 + a22)
    r = math.hypot(0.5 * (a11 - a22), a12)
    return (mean - r, mean + r)


def _eig3(m):
    # Trigonometric closed form for the symmetric 3x3 eigenproblem; the
    # acos argument is clamped to [-1, 1] to survive roundoff near
    # repeated eigenvalues.
    a11, a12, a13 = m[0]
    _, a22, a23 = m[1]
    a33 = m[2][2]
    p1 = a12 * a12 + a13 * a13 + a23 * a23
    if p1 == 0.0:
        return tuple(sorted((a11, a22, a33)))
    q = (a11 + a22 + a33) / 3.0
    p2 = (a11 - q) ** 2 + (a22 - q) ** 2 + (a33 - q) ** 2 + 2.0 * p1
    p = math.sqrt(p2 / 6.0)
    b11, b22, b33 = (a11 - q) / p, (a22 - q) / p, (a33 - q) / p
    b12, b13, b23 = a12 / p, a13 / p, a23 / p
    detb = (
        b11 * (b22 * b33 - b23 * b23)
        - b12 * (b12 * b33 - b23 * b13)
        + b13 * (b12 * b23 - b22 * b13)
    )
    r = min(1.0, max(-1.0, 0.5 * detb))
    phi = math.acos(r) / 3.0
    hi = q + 2.0 * p * math.cos(phi)
    lo = q + 2.0 * p * math.cos(phi + 2.0 * math.pi / 3.0)
    mid = 3.0 * q - hi - lo
    # characteristic polynomial coefficients for the Newton polish below
    tr = a11 + a22 + a33
    c2 = (
        a11 * a22
        - a12 * a12
        + a11 * a33
        - a13 * a13
        + a22 * a33
        - a23 * a23
    )
    det = (
        a11 * (a22 * a33 - a23 * a23)
        - a12 * (a12 * a33 - a23 * a13)
        + a13 * (a12 * a23 - a22 * a13)
    )

    def polish(lam):
        # two Newton steps on det(A - lam I); skipped near repeated roots
        # where the derivative degenerates
        scale = max(1.0, abs(lam)) ** 2
        for _ in range(2):
            pval = ((-lam + tr) * lam - c2) * lam + det
            pder = (-3.0 * lam + 2.0 * tr) * lam - c2
            if abs(pder) < 1e-8 * scale:
                return lam
            lam -= pval / pder
        return lam

    return tuple(sorted(polish(lam) for lam in (lo, mid, hi)))


def sym_eigenvalues(w):
    """All eigenvalues of a weight, ascending."""
    if isinstance(w, DiagonalWeight):
        return tuple(sorted(w.entries))
    m = w.matrix
    if w.d == 1:
        return (m[0][0],)
    if w.d == 2:
        return _eig2(m[0][0], m[0][1], m[1][1])
    return _eig3(m)


def smallest_eigenvalue(w):
    return sym_eigenvalues(w)[0]


def largest_eigenvalue(w):
    return sym_eigenvalues(w)[-1]


def tilde_reduction(w):
    """Diagonal minorant: each diagonal entry minus its row's off-diagonal
    magnitudes.  Entries of the result may be negative."""
    if isinstance(w, DiagonalWeight):
        return w
    m = w.matrix
    if w.d == 1:
        return DiagonalWeight((m[0][0],))
    if w.d == 2:
        off = abs(m[0][1])
        return DiagonalWeight((m[0][0] - off, m[1][1] - off))
    a12, a13, a23 = abs(m[0][1]), abs(m[0][2]), abs(m[1][2])
    return DiagonalWeight(
        (m[0][0] - (a12 + a13), m[1][1] - (a12 + a23), m[2][2] - (a13 + a23))
    )


def dominates(w, t):
    """True iff the quadratic form of ``w - t`` is positive semi-definite.

    Holds by construction whenever ``t`` is the tilde reduction of ``w``
    (the difference is diagonally dominant with nonnegative diagonal).
    """
    mw = w.matrix
    mt = t.matrix
    if w.d != t.d:
        raise WeightError("dimension mismatch between weight and reduction")
    diff = tuple(
        tuple(mw[i][j] - mt[i][j] for j in range(w.d)) for i in range(w.d)
    )
    scale = max(1.0, max(abs(v) for row in diff for v in row))
    if w.d == 1:
        lo = diff[0][0]
    elif w.d == 2:
        lo = _eig2(diff[0][0], diff[0][1], diff[1][1])[0]
    else:
        lo = _eig3(diff)[0]
    return lo >= -1e-12 * scale


def parse_weight(text):
    """Parse the CLI matrix syntax.

    ``diag:a,b,c`` gives a diagonal weight; ``full:a11,a12,a13,a22,a23,a33``
    gives a symmetric matrix from its upper triangle (row-major).
    """
    head, sep, body = text.partition(":")
    if not sep:
        raise WeightError(
            f"weight {text!r} must look like 'diag:...' or 'full:...'"
        )
    try:
        values = [float(v) for v in body.split(",") if v != ""]
    except ValueError as exc:
        raise WeightError(f"weight {text!r}: {exc}") from None
    if not values:
        raise WeightError(f"weight {text!r} has no entries")
    if head == "diag":
        if len(values) > 3:
            raise WeightError(f"diagonal weight supports up to 3 entries, got {len(values)}")
        if any(v < 0.0 for v in values):
            raise WeightError("diagonal weight entries must be nonnegative")
        return DiagonalWeight(tuple(values))
    if head == "full":
        return FullWeight.from_upper(values)
    raise WeightError(f"unknown weight kind {head!r}, expected 'diag' or 'full'")
