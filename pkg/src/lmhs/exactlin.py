"""Exact linear algebra over Gaussian rationals and polynomial rings.

Scalars are Gaussian rationals (a + b*i with a, b rational) or single-variable
polynomials in a real variable t over them.  Every operation is exact: there is
no floating point anywhere in this module, and none of the algorithms ever
round.  Matrices are immutable after construction and all functions are pure,
so everything here is safe to share between threads.

Serialization conventions: scalars print as "p/q" or "p/q+r/s*i", polynomials
as coefficient arrays lowest-degree-first.
"""

from __future__ import annotations

import re as _re
from fractions import Fraction
from typing import Iterable, Sequence

Q = Fraction

QZERO = Fraction(0)
QONE = Fraction(1)


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"cannot interpret {x!r} as a rational number")


class GaussianScalar:
    """A Gaussian rational a + b*i, with exact Fraction components."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "re", _as_fraction(re))
        object.__setattr__(self, "im", _as_fraction(im))

    def __setattr__(self, name, value):
        raise AttributeError("GaussianScalar is immutable")

    # -- coercion -----------------------------------------------------------

    @staticmethod
    def coerce(x) -> "GaussianScalar":
        if isinstance(x, GaussianScalar):
            return x
        if isinstance(x, (int, Fraction)):
            return GaussianScalar(x)
        raise TypeError(f"cannot coerce {x!r} to GaussianScalar")

    # -- ring operations ----------------------------------------------------

    def __add__(self, other):
        other = GaussianScalar.coerce(other)
        return _gs(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        other = GaussianScalar.coerce(other)
        return _gs(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        return GaussianScalar.coerce(other) - self

    def __neg__(self):
        return _gs(-self.re, -self.im)

    def __mul__(self, other):
        other = GaussianScalar.coerce(other)
        # real scalars dominate in practice; one Fraction product, not four
        if not self.im.numerator and not other.im.numerator:
            return _gs(self.re * other.re, QZERO)
        return _gs(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = GaussianScalar.coerce(other)
        if not self.im.numerator and not other.im.numerator:
            if not other.re.numerator:
                raise ZeroDivisionError("division by zero GaussianScalar")
            return _gs(self.re / other.re, QZERO)
        n = other.re * other.re + other.im * other.im
        if n == 0:
            raise ZeroDivisionError("division by zero GaussianScalar")
        return _gs(
            (self.re * other.re + self.im * other.im) / n,
            (self.im * other.re - self.re * other.im) / n,
        )

    def __rtruediv__(self, other):
        return GaussianScalar.coerce(other) / self

    def __pow__(self, k: int):
        assert k >= 0
        out = G_ONE
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    # -- structure ----------------------------------------------------------

    def conj(self) -> "GaussianScalar":
        return GaussianScalar(self.re, -self.im)

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def is_real(self) -> bool:
        return self.im == 0

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = GaussianScalar(other)
        if not isinstance(other, GaussianScalar):
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __repr__(self):
        return f"GaussianScalar({self.re!r}, {self.im!r})"

    def __str__(self):
        return gaussian_to_str(self)


def _gs(re: Fraction, im: Fraction) -> GaussianScalar:
    # internal constructor for components already known to be Fractions
    s = object.__new__(GaussianScalar)
    object.__setattr__(s, "re", re)
    object.__setattr__(s, "im", im)
    return s


G_ZERO = GaussianScalar(0)
G_ONE = GaussianScalar(1)
G_I = GaussianScalar(0, 1)


def i_power(k: int) -> GaussianScalar:
    """i**k for any integer k (negative allowed)."""
    k %= 4
    return (G_ONE, G_I, -G_ONE, -G_I)[k]


def gaussian_to_str(x: GaussianScalar) -> str:
    def frac(f: Fraction) -> str:
        return f"{f.numerator}/{f.denominator}"

    if x.im == 0:
        return frac(x.re)
    sign = "+" if x.im >= 0 else "-"
    return f"{frac(x.re)}{sign}{frac(abs(x.im))}*i"


_GAUSS_RE = _re.compile(
    r"^\s*(?P<re>[+-]?\d+(?:/\d+)?)\s*"
    r"(?:(?P<sign>[+-])\s*(?P<im>\d+(?:/\d+)?)\s*\*\s*i)?\s*$"
)


def gaussian_from_str(s: str) -> GaussianScalar:
    m = _GAUSS_RE.match(s)
    if m is None:
        raise ValueError(f"cannot parse GaussianScalar from {s!r}")
    re_part = Fraction(m.group("re"))
    im_part = QZERO
    if m.group("im") is not None:
        im_part = Fraction(m.group("im"))
        if m.group("sign") == "-":
            im_part = -im_part
    return GaussianScalar(re_part, im_part)


class PolyScalar:
    """A polynomial in one real variable t, Gaussian rational coefficients.

    Coefficients are stored lowest-degree-first; trailing zeros are stripped,
    so the zero polynomial has an empty coefficient list.  Conjugation
    conjugates coefficients and leaves t alone (t is a real variable).
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [GaussianScalar.coerce(c) for c in coeffs]
        while cs and cs[-1].is_zero():
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, name, value):
        raise AttributeError("PolyScalar is immutable")

    @staticmethod
    def coerce(x) -> "PolyScalar":
        if isinstance(x, PolyScalar):
            return x
        if isinstance(x, (int, Fraction, GaussianScalar)):
            return PolyScalar([x])
        raise TypeError(f"cannot coerce {x!r} to PolyScalar")

    @staticmethod
    def variable() -> "PolyScalar":
        return PolyScalar([0, 1])

    def degree(self) -> int:
        """Degree in t; the zero polynomial has degree -1 by convention."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def leading(self) -> GaussianScalar:
        assert self.coeffs, "zero polynomial has no leading coefficient"
        return self.coeffs[-1]

    def __add__(self, other):
        other = PolyScalar.coerce(other)
        a, b = self.coeffs, other.coeffs
        n = max(len(a), len(b))
        return PolyScalar(
            [
                (a[k] if k < len(a) else G_ZERO) + (b[k] if k < len(b) else G_ZERO)
                for k in range(n)
            ]
        )

    __radd__ = __add__

    def __neg__(self):
        return PolyScalar([-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-PolyScalar.coerce(other))

    def __rsub__(self, other):
        return PolyScalar.coerce(other) - self

    def __mul__(self, other):
        other = PolyScalar.coerce(other)
        if self.is_zero() or other.is_zero():
            return POLY_ZERO
        out = [G_ZERO] * (len(self.coeffs) + len(other.coeffs) - 1)
        for j, a in enumerate(self.coeffs):
            if a.is_zero():
                continue
            for k, b in enumerate(other.coeffs):
                out[j + k] = out[j + k] + a * b
        return PolyScalar(out)

    __rmul__ = __mul__

    def exact_div(self, other: "PolyScalar") -> "PolyScalar":
        """Exact polynomial division; asserts the remainder is zero."""
        other = PolyScalar.coerce(other)
        assert not other.is_zero(), "polynomial division by zero"
        if self.is_zero():
            return POLY_ZERO
        rem = list(self.coeffs)
        dn = other.degree()
        lead = other.coeffs[-1]
        q = [G_ZERO] * (len(rem) - dn) if len(rem) > dn else []
        for top in range(len(rem) - 1, dn - 1, -1):
            c = rem[top]
            if c.is_zero():
                continue
            f = c / lead
            q[top - dn] = f
            for k in range(dn + 1):
                rem[top - dn + k] = rem[top - dn + k] - f * other.coeffs[k]
        assert all(c.is_zero() for c in rem), "non-exact polynomial division"
        return PolyScalar(q)

    def conj(self) -> "PolyScalar":
        return PolyScalar([c.conj() for c in self.coeffs])

    def evaluate(self, t) -> GaussianScalar:
        t = GaussianScalar.coerce(t)
        out = G_ZERO
        for c in reversed(self.coeffs):
            out = out * t + c
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, GaussianScalar)):
            other = PolyScalar.coerce(other)
        if not isinstance(other, PolyScalar):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"PolyScalar({[str(c) for c in self.coeffs]})"


POLY_ZERO = PolyScalar()
POLY_ONE = PolyScalar([1])


def leading_sign(p: PolyScalar) -> tuple[int, int]:
    """(degree, sign of leading coefficient), modelling behavior as t -> +oo.

    The leading coefficient must be real and nonzero; requesting the sign of
    the zero polynomial or of one with genuinely complex leading coefficient
    is a contract error.
    """
    assert isinstance(p, PolyScalar)
    assert not p.is_zero(), "leading_sign of the zero polynomial"
    c = p.leading()
    assert c.is_real(), f"leading coefficient {c} is not real"
    return p.degree(), (1 if c.re > 0 else -1)


class ExactMatrix:
    """A rectangular matrix with GaussianScalar or PolyScalar entries.

    The entry ring must be homogeneous per matrix.  Instances are immutable.
    """

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, entries: Sequence[Sequence], cols: int | None = None):
        data = tuple(tuple(e for e in row) for row in entries)
        rows = len(data)
        inferred = len(data[0]) if rows else (cols if cols is not None else 0)
        assert cols is None or cols == inferred, "explicit column count mismatch"
        assert all(len(r) == inferred for r in data), "ragged matrix"
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", inferred)
        object.__setattr__(self, "entries", data)

    def __setattr__(self, name, value):
        raise AttributeError("ExactMatrix is immutable")

    # -- constructors -------------------------------------------------------

    @staticmethod
    def from_rational(entries: Sequence[Sequence]) -> "ExactMatrix":
        return ExactMatrix(
            [[GaussianScalar.coerce(e) for e in row] for row in entries]
        )

    @staticmethod
    def identity(n: int) -> "ExactMatrix":
        return ExactMatrix(
            [[G_ONE if j == k else G_ZERO for k in range(n)] for j in range(n)]
        )

    @staticmethod
    def zero(rows: int, cols: int) -> "ExactMatrix":
        return ExactMatrix([[G_ZERO] * cols for _ in range(rows)], cols=cols)

    @staticmethod
    def from_columns(cols: Sequence[Sequence], rows: int | None = None) -> "ExactMatrix":
        if not cols:
            assert rows is not None, "empty column list needs an explicit row count"
            return ExactMatrix([[] for _ in range(rows)], cols=0)
        n = len(cols[0])
        assert rows is None or rows == n, "explicit row count mismatch"
        return ExactMatrix([[c[j] for c in cols] for j in range(n)], cols=len(cols))

    # -- access -------------------------------------------------------------

    def __getitem__(self, jk):
        j, k = jk
        return self.entries[j][k]

    def column(self, k: int) -> list:
        return [self.entries[j][k] for j in range(self.rows)]

    def columns(self) -> list[list]:
        return [self.column(k) for k in range(self.cols)]

    def row_list(self) -> list[list]:
        return [list(r) for r in self.entries]

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other):
        assert (self.rows, self.cols) == (other.rows, other.cols)
        return ExactMatrix(
            [
                [self.entries[j][k] + other.entries[j][k] for k in range(self.cols)]
                for j in range(self.rows)
            ]
        )

    def __sub__(self, other):
        assert (self.rows, self.cols) == (other.rows, other.cols)
        return ExactMatrix(
            [
                [self.entries[j][k] - other.entries[j][k] for k in range(self.cols)]
                for j in range(self.rows)
            ]
        )

    def __neg__(self):
        return ExactMatrix([[-e for e in row] for row in self.entries], cols=self.cols)

    def scale(self, c) -> "ExactMatrix":
        return ExactMatrix(
            [[c * e for e in row] for row in self.entries], cols=self.cols
        )

    def __matmul__(self, other: "ExactMatrix") -> "ExactMatrix":
        assert self.cols == other.rows, (
            f"shape mismatch {self.rows}x{self.cols} @ {other.rows}x{other.cols}"
        )
        ot = other.entries
        out = []
        for j in range(self.rows):
            srow = self.entries[j]
            orow = []
            for k in range(other.cols):
                acc = None
                for l in range(self.cols):
                    a = srow[l]
                    if type(a) is GaussianScalar and not (
                        a.re.numerator or a.im.numerator
                    ):
                        continue
                    term = a * ot[l][k]
                    acc = term if acc is None else acc + term
                if acc is None:
                    acc = G_ZERO
                orow.append(acc)
            out.append(orow)
        return ExactMatrix(out, cols=other.cols)

    def transpose(self) -> "ExactMatrix":
        return ExactMatrix(
            [[self.entries[j][k] for j in range(self.rows)] for k in range(self.cols)],
            cols=self.rows,
        )

    def conj(self) -> "ExactMatrix":
        return ExactMatrix(
            [[e.conj() for e in row] for row in self.entries], cols=self.cols
        )

    def hstack(self, other: "ExactMatrix") -> "ExactMatrix":
        assert self.rows == other.rows
        return ExactMatrix(
            [list(self.entries[j]) + list(other.entries[j]) for j in range(self.rows)],
            cols=self.cols + other.cols,
        )

    def vstack(self, other: "ExactMatrix") -> "ExactMatrix":
        assert self.cols == other.cols
        return ExactMatrix(list(self.entries) + list(other.entries), cols=self.cols)

    def take_columns(self, ks: Sequence[int]) -> "ExactMatrix":
        return ExactMatrix(
            [[self.entries[j][k] for k in ks] for j in range(self.rows)],
            cols=len(ks),
        )

    def power(self, k: int) -> "ExactMatrix":
        assert self.rows == self.cols and k >= 0
        out = ExactMatrix.identity(self.rows)
        base = self
        while k:
            if k & 1:
                out = out @ base
            base = base @ base
            k >>= 1
        return out

    def is_zero(self) -> bool:
        return all(e.is_zero() for row in self.entries for e in row)

    def is_rational(self) -> bool:
        return all(
            isinstance(e, GaussianScalar) and e.is_real()
            for row in self.entries
            for e in row
        )

    def map(self, f) -> "ExactMatrix":
        return ExactMatrix([[f(e) for e in row] for row in self.entries], cols=self.cols)

    def __eq__(self, other):
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        return self.entries == other.entries

    def __hash__(self):
        return hash(self.entries)

    def __repr__(self):
        body = "; ".join(
            " ".join(str(e) for e in row) for row in self.entries
        )
        return f"ExactMatrix[{self.rows}x{self.cols}]({body})"


def rref(M: ExactMatrix) -> tuple[ExactMatrix, list[int], int]:
    """Reduced row echelon form over the Gaussian rationals.

    Returns (reduced matrix, pivot column indices, rank).
    """
    A = [list(row) for row in M.entries]
    rows, cols = M.rows, M.cols
    pivots = []
    r = 0
    for c in range(cols):
        pr = None
        for j in range(r, rows):
            if not A[j][c].is_zero():
                pr = j
                break
        if pr is None:
            continue
        A[r], A[pr] = A[pr], A[r]
        piv = A[r][c]
        if piv.re != 1 or piv.im.numerator:
            inv = G_ONE / piv
            A[r] = [e if not (e.re.numerator or e.im.numerator) else inv * e
                    for e in A[r]]
        prow = A[r]
        for j in range(rows):
            if j != r and not A[j][c].is_zero():
                f = A[j][c]
                A[j] = [a if not (b.re.numerator or b.im.numerator) else a - f * b
                        for a, b in zip(A[j], prow)]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return ExactMatrix(A), pivots, len(pivots)


def rank(M: ExactMatrix) -> int:
    return rref(M)[2]


def kernel(M: ExactMatrix) -> "Subspace":
    """Exact basis of the null space of M."""
    R, pivots, rk = rref(M)
    free = [c for c in range(M.cols) if c not in pivots]
    basis_cols = []
    for fc in free:
        v = [G_ZERO] * M.cols
        v[fc] = G_ONE
        for j, pc in enumerate(pivots):
            v[pc] = -R.entries[j][fc]
        basis_cols.append(v)
    # each basis vector has a 1 in its own free column and 0 in the others,
    # so independence is automatic
    return Subspace._trusted(
        M.cols, ExactMatrix.from_columns(basis_cols, rows=M.cols)
    )


def image(M: ExactMatrix) -> "Subspace":
    """Column span of M, with a deterministic basis (earliest pivot columns)."""
    _, pivots, _ = rref(M)
    return Subspace._trusted(M.rows, M.take_columns(pivots))


def solve(M: ExactMatrix, b: Sequence) -> list | None:
    """One solution x of M x = b, or None if the system is inconsistent."""
    aug = M.hstack(ExactMatrix.from_columns([list(b)], rows=M.rows))
    R, pivots, _ = rref(aug)
    if M.cols in pivots:
        return None
    x = [G_ZERO] * M.cols
    for j, pc in enumerate(pivots):
        x[pc] = R.entries[j][M.cols]
    return x


class Subspace:
    """A subspace of an ambient exact vector space, given by basis columns."""

    __slots__ = ("ambient_dim", "basis")

    def __init__(self, ambient_dim: int, basis: ExactMatrix):
        assert basis.rows == ambient_dim or basis.cols == 0, (
            f"basis rows {basis.rows} != ambient {ambient_dim}"
        )
        if basis.cols and basis.rows != ambient_dim:
            raise ValueError("inconsistent ambient dimension")
        if basis.cols:
            assert rank(basis) == basis.cols, "basis columns are dependent"
        else:
            basis = ExactMatrix.zero(ambient_dim, 0)
        object.__setattr__(self, "ambient_dim", ambient_dim)
        object.__setattr__(self, "basis", basis)

    def __setattr__(self, name, value):
        raise AttributeError("Subspace is immutable")

    @classmethod
    def _trusted(cls, ambient_dim: int, basis: ExactMatrix) -> "Subspace":
        # internal: the caller guarantees the columns are independent, so
        # the rank check in __init__ is skipped
        s = object.__new__(cls)
        object.__setattr__(s, "ambient_dim", ambient_dim)
        object.__setattr__(s, "basis", basis)
        return s

    @staticmethod
    def zero(ambient_dim: int) -> "Subspace":
        return Subspace._trusted(ambient_dim, ExactMatrix.zero(ambient_dim, 0))

    @staticmethod
    def full(ambient_dim: int) -> "Subspace":
        return Subspace(ambient_dim, ExactMatrix.identity(ambient_dim))

    @staticmethod
    def span(ambient_dim: int, vectors: Sequence[Sequence]) -> "Subspace":
        cols = [[GaussianScalar.coerce(x) for x in v] for v in vectors]
        M = ExactMatrix.from_columns(cols, rows=ambient_dim)
        return image(M)

    @property
    def dim(self) -> int:
        return self.basis.cols

    def canonical_rows(self) -> ExactMatrix:
        """Row-reduced generators of the space; equal spaces agree on this."""
        R, _, rk = rref(self.basis.transpose())
        return ExactMatrix(R.entries[:rk]) if rk else ExactMatrix.zero(0, self.ambient_dim)

    def contains_vector(self, v: Sequence) -> bool:
        return solve(self.basis, v) is not None if self.dim else all(
            GaussianScalar.coerce(x).is_zero() for x in v
        )

    def contains(self, other: "Subspace") -> bool:
        assert self.ambient_dim == other.ambient_dim, "ambient mismatch"
        if other.dim == 0:
            return True
        stacked = self.basis.hstack(other.basis)
        return rank(stacked) == self.dim

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return (
            self.ambient_dim == other.ambient_dim
            and self.dim == other.dim
            and self.contains(other)
        )

    def __hash__(self):
        return hash((self.ambient_dim, self.canonical_rows()))

    def intersect(self, other: "Subspace") -> "Subspace":
        """Exact basis of the intersection, via the kernel of [U | -V]."""
        assert self.ambient_dim == other.ambient_dim, "ambient mismatch"
        if self.dim == 0 or other.dim == 0:
            return Subspace.zero(self.ambient_dim)
        stacked = self.basis.hstack(-other.basis)
        ker = kernel(stacked)
        vecs = []
        for c in range(ker.dim):
            coeffs = ker.basis.column(c)[: self.dim]
            v = [G_ZERO] * self.ambient_dim
            for j in range(self.ambient_dim):
                acc = G_ZERO
                for k in range(self.dim):
                    acc = acc + self.basis.entries[j][k] * coeffs[k]
                v[j] = acc
            vecs.append(v)
        # the kernel basis maps injectively to these vectors: both basis
        # matrices have independent columns, so they stay independent
        return Subspace._trusted(
            self.ambient_dim,
            ExactMatrix.from_columns(vecs, rows=self.ambient_dim),
        )

    def add(self, other: "Subspace") -> "Subspace":
        assert self.ambient_dim == other.ambient_dim, "ambient mismatch"
        return image(self.basis.hstack(other.basis))

    def conj(self) -> "Subspace":
        return Subspace._trusted(self.ambient_dim, self.basis.conj())

    def apply(self, M: ExactMatrix) -> "Subspace":
        """Image of this subspace under the linear map M."""
        assert M.cols == self.ambient_dim
        return image(M @ self.basis)

    def __repr__(self):
        return f"Subspace(dim {self.dim} of {self.ambient_dim})"


def hermitian_check(H: ExactMatrix) -> bool:
    n = H.rows
    if H.cols != n:
        return False
    for j in range(n):
        for k in range(n):
            if H.entries[j][k] != H.entries[k][j].conj():
                return False
    return True


def _hermitian_reduce(H: ExactMatrix, want_basis: bool):
    """Shared congruence-diagonalization core.

    The form is h(x, y) = x^T H conj(y) on coordinate columns, so H is the
    Gram matrix h(e_j, e_k) and Hermitian means H[k][j] = conj(H[j][k]).
    Returns (values, vectors, null_vectors); vectors is None unless requested.
    """
    assert hermitian_check(H), "hermitian form required (H != H^*)"
    n = H.rows
    A = [[H.entries[j][k] for k in range(n)] for j in range(n)]
    basis = [[G_ONE if j == k else G_ZERO for j in range(n)] for k in range(n)] \
        if want_basis else None
    active = list(range(n))
    values: list[Fraction] = []
    vectors: list[list] = []
    while active:
        piv = None
        for i in active:
            if not A[i][i].is_zero():
                piv = i
                break
        if piv is None:
            # every diagonal vanishes; pull a hyperbolic pair onto the diagonal
            off = None
            for i in active:
                for j in active:
                    if j != i and not A[i][j].is_zero():
                        off = (i, j)
                        break
                if off:
                    break
            if off is None:
                break  # totally zero block: the remaining vectors are null
            i, j = off
            c = A[i][j]
            cc = c.conj()
            # replace e_i by conj(c)*e_i + e_j; new diagonal is 2|c|^2 > 0
            if want_basis:
                basis[i] = [cc * a + b for a, b in zip(basis[i], basis[j])]
            for k in active:
                if k != i:
                    A[i][k] = cc * A[i][k] + A[j][k]
            for k in active:
                if k != i:
                    A[k][i] = A[i][k].conj()
            A[i][i] = GaussianScalar(2 * (c.re * c.re + c.im * c.im))
            piv = i
        d = A[piv][piv]
        assert d.is_real(), "hermitian diagonal must be real"
        values.append(d.re)
        if want_basis:
            vectors.append(list(basis[piv]))
        active.remove(piv)
        inv = G_ONE / d
        col = {j: A[j][piv] for j in active}
        for j in active:
            aj = col[j] * inv
            if aj.is_zero():
                continue
            if want_basis:
                basis[j] = [b - aj * p for b, p in zip(basis[j], basis[piv])]
            for k in active:
                A[j][k] = A[j][k] - aj * A[piv][k]
        for j in active:
            A[j][piv] = G_ZERO
            A[piv][j] = G_ZERO
    nulls = [list(basis[i]) for i in active] if want_basis else [None] * len(active)
    return values, (vectors if want_basis else None), nulls, len(active)


def hermitian_signature(H: ExactMatrix) -> tuple[int, int, int]:
    """Signature (positives, negatives, nulls) of a Hermitian matrix.

    Exact congruence diagonalization with symmetric pivoting: 1x1 pivots when
    a nonzero diagonal entry exists; otherwise a hyperbolic off-diagonal entry
    is promoted (contributing one positive and one negative eigendirection).
    """
    values, _, _, null_count = _hermitian_reduce(H, want_basis=False)
    pos = sum(1 for v in values if v > 0)
    neg = sum(1 for v in values if v < 0)
    assert pos + neg + null_count == H.rows
    return pos, neg, null_count


def hermitian_diagonalize(H: ExactMatrix):
    """Congruence-diagonalize the Hermitian form with Gram matrix H.

    Returns (vectors, values, null_vectors): coordinate columns v_a with
    h(v_a, v_b) = delta_ab * values[a] (values real nonzero) and a list of
    null vectors spanning the radical.
    """
    values, vectors, nulls, _ = _hermitian_reduce(H, want_basis=True)
    return vectors, values, nulls


class ZeroMinorError(ArithmeticError):
    """A leading principal minor vanished where the caller required otherwise."""

    def __init__(self, index: int):
        super().__init__(f"leading principal minor {index} vanishes")
        self.index = index


def _bareiss(M: ExactMatrix, allow_swaps: bool):
    """Fraction-free elimination.  Returns (pivot list, sign) where pivot k is
    the k-th stage pivot; without swaps these are the leading principal minors.
    """
    n = M.rows
    assert M.cols == n, "square matrix required"
    poly_mode = any(
        isinstance(e, PolyScalar) for row in M.entries for e in row
    )

    def lift(e):
        return PolyScalar.coerce(e) if poly_mode else GaussianScalar.coerce(e)

    A = [[lift(e) for e in row] for row in M.entries]
    one = POLY_ONE if poly_mode else G_ONE
    zero = POLY_ZERO if poly_mode else G_ZERO

    def div(a, b):
        return a.exact_div(b) if poly_mode else a / b

    sign = 1
    prev = one
    pivots = []
    for k in range(n):
        if A[k][k].is_zero():
            if not allow_swaps:
                raise ZeroMinorError(k + 1)
            swap = None
            for j in range(k + 1, n):
                if not A[j][k].is_zero():
                    swap = j
                    break
            if swap is None:
                pivots.append(zero)
                return pivots, sign
            A[k], A[swap] = A[swap], A[k]
            sign = -sign
        piv = A[k][k]
        pivots.append(piv)
        for j in range(k + 1, n):
            for l in range(k + 1, n):
                A[j][l] = div(A[j][l] * piv - A[j][k] * A[k][l], prev)
            A[j][k] = zero
        prev = piv
    return pivots, sign


def poly_det(M: ExactMatrix) -> PolyScalar:
    """Exact determinant of a square matrix of polynomial (or scalar) entries.

    Bareiss-style fraction-free elimination with row swaps; intermediate
    divisions are exact by construction.
    """
    assert M.rows == M.cols, "determinant of a non-square matrix"
    if M.rows == 0:
        return POLY_ONE
    pivots, sign = _bareiss(M, allow_swaps=True)
    det = PolyScalar.coerce(pivots[-1])
    return det if sign == 1 else -det


def leading_principal_minors(M: ExactMatrix) -> list[PolyScalar]:
    """All leading principal minors D_1, ..., D_n of a square matrix.

    Computed in a single Bareiss pass without row swaps (the stage-k pivot is
    exactly the k-th leading principal minor).  Raises ZeroMinorError if one
    of them vanishes, since the elimination cannot continue past it.
    """
    pivots, _ = _bareiss(M, allow_swaps=False)
    return [PolyScalar.coerce(p) for p in pivots]
