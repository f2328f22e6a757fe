"""Dense square matrices over the exact backends, plus the numeric
linear algebra (signatures, eigenstructure, form defects) that the
isometry classifier consumes.

Exact matrices are ``Mat`` (entries all LaurentPoly or all ExtScalar);
numeric matrices are plain numpy complex arrays.  ``Mat.evaluate`` maps
one to the other at u = e^{i alpha}.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .scalars import Angle, ExtScalar, LaurentPoly, Surd


class GeometryError(ValueError):
    """A precondition of a geometric operation failed."""


class IndeterminateError(GeometryError):
    """A numerical decision fell within 10x of its threshold; the caller
    must not trust a guess."""

    def __init__(self, message: str, margin: float):
        super().__init__(f"{message} (margin {margin:.3g} < 10)")
        self.margin = margin


def _promote(entry, ring: str, d: int | None):
    if ring == "laurent":
        if isinstance(entry, LaurentPoly):
            return entry
        if isinstance(entry, (int, Fraction)):
            return LaurentPoly.const(entry)
    else:
        if isinstance(entry, ExtScalar):
            if entry.d != d:
                raise ValueError("mixed extension tags in one matrix")
            return entry
        if isinstance(entry, LaurentPoly):
            return ExtScalar.from_laurent(entry, d)  # type: ignore[arg-type]
        if isinstance(entry, Surd):
            return ExtScalar.from_surd(entry, d)  # type: ignore[arg-type]
        if isinstance(entry, (int, Fraction)):
            return ExtScalar.rational(entry, d)  # type: ignore[arg-type]
    raise TypeError(f"cannot promote {entry!r} into {ring} ring")


class Mat:
    """Immutable dense square matrix over one exact scalar ring."""

    __slots__ = ("n", "rows", "ring", "d")

    def __init__(self, rows: Sequence[Sequence], ring: str, d: int | None = None):
        n = len(rows)
        if n < 1 or any(len(r) != n for r in rows):
            raise ValueError("matrix must be square, dimension >= 1")
        if ring not in ("laurent", "ext"):
            raise ValueError(f"unknown ring {ring!r}")
        if ring == "ext" and d is None:
            raise ValueError("ext ring needs the extension tag d")
        self.n = n
        self.ring = ring
        self.d = d
        self.rows = tuple(tuple(_promote(e, ring, d) for e in r) for r in rows)

    @classmethod
    def laurent(cls, rows: Sequence[Sequence]) -> "Mat":
        return cls(rows, "laurent")

    @classmethod
    def ext(cls, rows: Sequence[Sequence], d: int) -> "Mat":
        return cls(rows, "ext", d)

    @classmethod
    def identity(cls, n: int, ring: str = "laurent", d: int | None = None) -> "Mat":
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)], ring, d)

    @classmethod
    def diagonal(cls, diag: Sequence, ring: str = "laurent", d: int | None = None) -> "Mat":
        n = len(diag)
        return cls([[diag[i] if i == j else 0 for j in range(n)] for i in range(n)], ring, d)

    def _zero(self):
        return LaurentPoly.zero() if self.ring == "laurent" else ExtScalar.zero(self.d)

    def _like(self, rows) -> "Mat":
        return Mat(rows, self.ring, self.d)

    def __getitem__(self, ij: tuple[int, int]):
        i, j = ij
        return self.rows[i][j]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Mat):
            return NotImplemented
        return self.ring == other.ring and self.d == other.d and self.rows == other.rows

    def __hash__(self) -> int:
        return hash((self.ring, self.d, self.rows))

    def __add__(self, other: "Mat") -> "Mat":
        self._compat(other)
        return self._like([[a + b for a, b in zip(ra, rb)]
                           for ra, rb in zip(self.rows, other.rows)])

    def __sub__(self, other: "Mat") -> "Mat":
        self._compat(other)
        return self._like([[a - b for a, b in zip(ra, rb)]
                           for ra, rb in zip(self.rows, other.rows)])

    def __neg__(self) -> "Mat":
        return self._like([[-a for a in r] for r in self.rows])

    def _compat(self, other: "Mat") -> None:
        if not isinstance(other, Mat) or other.n != self.n \
                or other.ring != self.ring or other.d != self.d:
            raise ValueError("incompatible matrices")

    def __matmul__(self, other: "Mat") -> "Mat":
        self._compat(other)
        n = self.n
        cols = list(zip(*other.rows))
        out = []
        for i in range(n):
            row = []
            for j in range(n):
                acc = self._zero()
                for a, b in zip(self.rows[i], cols[j]):
                    acc = acc + a * b
                row.append(acc)
            out.append(row)
        return self._like(out)

    def scale(self, s) -> "Mat":
        return self._like([[a * s for a in r] for r in self.rows])

    def transpose(self) -> "Mat":
        return self._like(list(zip(*self.rows)))

    def star(self) -> "Mat":
        """Entrywise u -> u^-1 (no transpose)."""
        return self._like([[e.star() for e in r] for r in self.rows])

    def star_transpose(self) -> "Mat":
        return self.star().transpose()

    def trace(self):
        acc = self._zero()
        for i in range(self.n):
            acc = acc + self.rows[i][i]
        return acc

    def is_identity(self) -> bool:
        one = (LaurentPoly.one() if self.ring == "laurent" else ExtScalar.one(self.d))
        for i in range(self.n):
            for j in range(self.n):
                want = one if i == j else self._zero()
                if self.rows[i][j] != want:
                    return False
        return True

    def is_scalar(self):
        """Return the scalar s if self == s*Id, else None."""
        s = self.rows[0][0]
        for i in range(self.n):
            for j in range(self.n):
                if i == j:
                    if self.rows[i][j] != s:
                        return None
                elif not self.rows[i][j].is_zero:
                    return None
        return s

    def det(self):
        """Exact determinant by cofactor expansion with column-subset
        memoization (fine for the n <= 6 sizes this package meets)."""
        n = self.n
        rows = self.rows
        memo: dict[int, object] = {}

        def minor(mask: int):
            # determinant of rows r.. using the columns present in mask,
            # where r = n - popcount(mask)
            if mask in memo:
                return memo[mask]
            cols = [j for j in range(n) if mask & (1 << j)]
            r = n - len(cols)
            if not cols:
                one = (LaurentPoly.one() if self.ring == "laurent"
                       else ExtScalar.one(self.d))
                return one
            acc = self._zero()
            sign = 1
            for idx, j in enumerate(cols):
                e = rows[r][j]
                if not e.is_zero:
                    sub = minor(mask & ~(1 << j))
                    term = e * sub
                    acc = acc + (term if sign > 0 else -term)
                sign = -sign
            memo[mask] = acc
            return acc

        return minor((1 << n) - 1)

    def inverse(self) -> "Mat":
        """Exact inverse via adjugate / det; det must be a ring unit."""
        n = self.n
        det = self.det()
        det_inv = det.inverse()
        if n == 1:
            return self._like([[det_inv]])
        cof = [[None] * n for _ in range(n)]
        for i in range(n):
            for j in range(n):
                sub = [[self.rows[r][c] for c in range(n) if c != j]
                       for r in range(n) if r != i]
                m = Mat(sub, self.ring, self.d).det()
                cof[i][j] = m if (i + j) % 2 == 0 else -m
        adj_rows = [[cof[j][i] * det_inv for j in range(n)] for i in range(n)]
        return self._like(adj_rows)

    def __pow__(self, k: int) -> "Mat":
        if k < 0:
            return self.inverse() ** (-k)
        out = Mat.identity(self.n, self.ring, self.d)
        base = self
        while k:
            if k & 1:
                out = out @ base
            base = base @ base
            k >>= 1
        return out

    def max_denominator(self) -> int:
        return max(e.max_denominator() for r in self.rows for e in r)

    def is_u_free(self) -> bool:
        """True when no entry involves the deformation parameter."""
        for r in self.rows:
            for e in r:
                if isinstance(e, LaurentPoly):
                    if not e.is_constant:
                        return False
                else:
                    if not all(p.is_constant for p in e.c):
                        return False
        return True

    def evaluate(self, alpha: Angle | None = None) -> np.ndarray:
        """Numeric matrix at u = e^{i alpha} (alpha may be omitted for
        constant matrices)."""
        a = alpha if alpha is not None else Angle.zero()
        return np.array([[e.eval_unit(a) for e in r] for r in self.rows],
                        dtype=complex)

    def __repr__(self) -> str:
        body = "\n ".join("[" + ", ".join(str(e) for e in r) + "]" for r in self.rows)
        return f"Mat({self.ring}, n={self.n})[\n {body}\n]"


# ---------------------------------------------------------------------------
# Hermitian forms
# ---------------------------------------------------------------------------

CONJ_TRANSPOSE = "conj-transpose"      # invariance  g* J g  = J   (Siegel models)
TRANSPOSE_CONJ = "transpose-conj"      # invariance  g^T J conj(g) = J

_CONVENTIONS = (CONJ_TRANSPOSE, TRANSPOSE_CONJ)


def _as_numeric(J) -> np.ndarray:
    if isinstance(J, Mat):
        return J.evaluate()
    return np.asarray(J, dtype=complex)


class HermForm:
    """A Hermitian form together with its invariance convention.

    Hermitianness (J* = J) is verified at construction: exactly for Mat
    input, to 1e-12 (relative) for numeric input.
    """

    __slots__ = ("mat", "convention")

    def __init__(self, J, convention: str = CONJ_TRANSPOSE):
        if convention not in _CONVENTIONS:
            raise ValueError(f"unknown convention {convention!r}")
        if isinstance(J, Mat):
            if J.star_transpose() != J:
                raise GeometryError("form matrix is not hermitian (exact check)")
        else:
            J = np.asarray(J, dtype=complex)
            if not np.all(np.isfinite(J)):
                raise GeometryError("form matrix has non-finite entries")
            scale = max(np.abs(J).max(), 1.0)
            if np.abs(J - J.conj().T).max() > 1e-12 * scale:
                raise GeometryError("form matrix is not hermitian within 1e-12")
        self.mat = J
        self.convention = convention

    @property
    def n(self) -> int:
        return self.mat.n if isinstance(self.mat, Mat) else self.mat.shape[0]

    @property
    def is_exact(self) -> bool:
        return isinstance(self.mat, Mat)

    def numeric(self, alpha: Angle | None = None) -> "HermForm":
        if isinstance(self.mat, Mat):
            return HermForm(self.mat.evaluate(alpha), self.convention)
        return self

    def array(self) -> np.ndarray:
        return _as_numeric(self.mat)

    def pair(self, x: np.ndarray, y: np.ndarray) -> complex:
        """The sesquilinear pairing <x, y> in this form's convention."""
        J = self.array()
        if self.convention == CONJ_TRANSPOSE:
            return complex(y.conj() @ J @ x)
        return complex(x @ J @ y.conj())


def siegel_form(size: int, convention: str = CONJ_TRANSPOSE) -> HermForm:
    """The antidiagonal-corner form 2 Re(z1 conj(z_size)) + sum |z_i|^2,
    as an exact Mat over Q[u,u^-1]."""
    rows = [[0] * size for _ in range(size)]
    rows[0][size - 1] = 1
    rows[size - 1][0] = 1
    for i in range(1, size - 1):
        rows[i][i] = 1
    return HermForm(Mat.laurent(rows), convention)


# ---------------------------------------------------------------------------
# Signatures and eigenstructure (numeric)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Signature:
    plus: int
    minus: int
    zero: int

    def as_tuple(self) -> tuple[int, int, int]:
        return (self.plus, self.minus, self.zero)

    def __str__(self) -> str:
        return f"({self.plus},{self.minus},{self.zero})"


def herm_signature(form: HermForm | np.ndarray, tol: float = 1e-9) -> Signature:
    """Counts of eigenvalues above tol, below -tol, within [-tol, tol]."""
    if isinstance(form, HermForm):
        if form.is_exact and not form.mat.is_u_free():
            raise TypeError("signature of a u-dependent form: evaluate at an "
                            "angle first (form.numeric(alpha))")
        J = form.array()
    else:
        J = HermForm(form).array()  # validates hermitianness
    ev = np.linalg.eigvalsh(J)
    plus = int(np.sum(ev > tol))
    minus = int(np.sum(ev < -tol))
    return Signature(plus, minus, len(ev) - plus - minus)


@dataclass(frozen=True)
class EigenCluster:
    value: complex
    alg: int
    geo: int


@dataclass(frozen=True)
class EigenData:
    clusters: tuple[EigenCluster, ...]
    rank_margin: float  # decisiveness of the worst rank decision, >= 1

    @property
    def n(self) -> int:
        return sum(c.alg for c in self.clusters)

    def is_diagonalizable(self) -> bool:
        return all(c.geo == c.alg for c in self.clusters)


def _cluster_eigenvalues(ev: np.ndarray, rtol: float) -> list[list[complex]]:
    """Greedy union of eigenvalues within relative distance rtol,
    chain-linked: joining requires closeness to any member, so a
    symmetric Jordan scatter around one true value stays together."""
    scale = max(float(np.abs(ev).max()), 1.0)
    groups: list[list[complex]] = []
    for lam in sorted(ev, key=lambda z: (z.real, z.imag)):
        for g in groups:
            if any(abs(lam - w) <= rtol * scale for w in g):
                g.append(complex(lam))
                break
        else:
            groups.append([complex(lam)])
    return groups


def eigen(A: np.ndarray, tol: float = 1e-9, cluster_rtol: float = 1e-7) -> EigenData:
    """Clustered spectrum with algebraic and geometric multiplicities.

    Geometric multiplicity of a cluster is n - rank(A - lambda I), with
    rank read off singular values at threshold tol * ||A||.  The margin
    records how decisively every singular value cleared (or missed) that
    threshold; classify() turns margins < 10 into an explicit
    indeterminate outcome rather than a guess.

    Computed eigenvalues of a defective matrix scatter like eps^(1/k)
    around the true value, which can exceed the base clustering radius.
    Whenever the multiplicities come out inconsistent (a cluster with
    geo < 1 or geo > alg) the radius escalates by 10x, up to 1e-3
    relative, before the result is declared indeterminate.
    """
    A = np.asarray(A, dtype=complex)
    if not np.all(np.isfinite(A)):
        raise GeometryError("matrix has non-finite entries")
    n = A.shape[0]
    ev = np.linalg.eigvals(A)
    norm = max(float(np.linalg.norm(A, 2)), 1e-300)
    thr = tol * norm

    rtol = cluster_rtol
    last: EigenData | None = None
    while rtol <= 1.1e-3:
        clusters = []
        worst = float("inf")
        for group in _cluster_eigenvalues(ev, rtol):
            lam = complex(np.mean(group))
            sv = np.linalg.svd(A - lam * np.eye(n), compute_uv=False)
            rank = int(np.sum(sv > thr))
            for s in sv:
                ratio = (s / thr) if s > thr else (thr / max(s, 1e-300))
                worst = min(worst, ratio)
            clusters.append(EigenCluster(lam, len(group), n - rank))
        last = EigenData(tuple(clusters), worst)
        if all(1 <= c.geo <= c.alg for c in clusters):
            return last
        rtol *= 10.0
    raise IndeterminateError(
        "eigenvalue clustering never reached consistent multiplicities",
        last.rank_margin if last is not None else 1.0)


def eigenvectors_for(A: np.ndarray, lam: complex, tol: float = 1e-9) -> np.ndarray:
    """Orthonormal basis (columns) of the numerical kernel of A - lam I."""
    A = np.asarray(A, dtype=complex)
    n = A.shape[0]
    norm = max(float(np.linalg.norm(A, 2)), 1e-300)
    _, sv, vh = np.linalg.svd(A - lam * np.eye(n))
    keep = sv <= tol * norm
    return vh.conj().T[:, keep]


# ---------------------------------------------------------------------------
# Form invariance
# ---------------------------------------------------------------------------

def _defect_matrix_numeric(g: np.ndarray, form: HermForm) -> np.ndarray:
    J = form.array()
    if form.convention == CONJ_TRANSPOSE:
        return g.conj().T @ J @ g - J
    return g.T @ J @ g.conj() - J


def form_defect(g: np.ndarray, form: HermForm) -> float:
    """Max-entry absolute deviation of g from preserving the form."""
    g = np.asarray(g, dtype=complex)
    return float(np.abs(_defect_matrix_numeric(g, form)).max())


def form_preserved(g: Mat, form: HermForm) -> bool:
    """Exact invariance check over the exact backend (star applied to u,
    valid on the unit circle)."""
    J = form.mat
    if not isinstance(J, Mat):
        raise TypeError("exact check requires an exact form")
    if isinstance(J, Mat) and g.ring == "ext" and J.ring == "laurent":
        J = Mat.ext([[e for e in row] for row in J.rows], g.d)  # lift constants
    if form.convention == CONJ_TRANSPOSE:
        lhs = g.star_transpose() @ J @ g
    else:
        lhs = g.transpose() @ J @ g.star()
    return lhs == J


def det_of(A):
    """Determinant across backends: exact for Mat, LU for numeric."""
    if isinstance(A, Mat):
        return A.det()
    return complex(np.linalg.det(np.asarray(A, dtype=complex)))
