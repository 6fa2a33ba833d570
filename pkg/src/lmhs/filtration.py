"""Weight and Hodge filtrations, graded pieces, monodromy weight filtration.

Filtrations store only the weights/levels where jumps occur; queries outside
the stored range clamp to the zero or the full subspace.  Graded pieces carry
deterministic representative bases (earliest pivot columns) so reports built
from them are reproducible byte-for-byte.
"""

from __future__ import annotations

from typing import Mapping, Sequence

from .exactlin import (
    ExactMatrix,
    Subspace,
    image,
    kernel,
    rank,
    rref,
    solve,
)


class IncreasingFiltration:
    """An increasing filtration W: W_a <= W_b for a <= b.

    Queries below the lowest stored weight return zero; at and above the
    highest stored weight they return the stored top step, which must be the
    full ambient space (the filtration is exhaustive).
    """

    __slots__ = ("ambient_dim", "steps")

    def __init__(self, ambient_dim: int, steps: Mapping[int, Subspace]):
        assert steps, "a filtration needs at least one step"
        items = sorted(steps.items())
        prev = None
        for w, sub in items:
            assert sub.ambient_dim == ambient_dim, "ambient mismatch in step"
            if prev is not None:
                assert sub.contains(prev), f"W_{w} does not contain the previous step"
            prev = sub
        assert items[-1][1].dim == ambient_dim, "top step must be the full space"
        object.__setattr__(self, "ambient_dim", ambient_dim)
        object.__setattr__(self, "steps", tuple(items))

    def __setattr__(self, name, value):
        raise AttributeError("IncreasingFiltration is immutable")

    def weights(self) -> list[int]:
        return [w for w, _ in self.steps]

    def at(self, w: int) -> Subspace:
        chosen = None
        for sw, sub in self.steps:
            if sw <= w:
                chosen = sub
            else:
                break
        return chosen if chosen is not None else Subspace.zero(self.ambient_dim)

    def min_weight(self) -> int:
        return self.steps[0][0]

    def max_weight(self) -> int:
        return self.steps[-1][0]

    def shift(self, c: int) -> "IncreasingFiltration":
        return IncreasingFiltration(
            self.ambient_dim, {w + c: sub for w, sub in self.steps}
        )

    def apply(self, M: ExactMatrix) -> "IncreasingFiltration":
        """Transport the filtration through an invertible coordinate change."""
        assert M.rows == M.cols == self.ambient_dim
        return IncreasingFiltration(
            self.ambient_dim, {w: sub.apply(M) for w, sub in self.steps}
        )

    def __eq__(self, other):
        if not isinstance(other, IncreasingFiltration):
            return NotImplemented
        if self.ambient_dim != other.ambient_dim:
            return False
        ws = set(self.weights()) | set(other.weights())
        return all(self.at(w) == other.at(w) for w in ws)

    def __repr__(self):
        parts = ", ".join(f"{w}:{sub.dim}" for w, sub in self.steps)
        return f"IncreasingFiltration({parts})"


class DecreasingFiltration:
    """A decreasing filtration F: F^p >= F^q for p <= q.

    Queries above the highest stored level return zero; at and below the
    lowest stored level they return the stored bottom step, which must be the
    full ambient space.
    """

    __slots__ = ("ambient_dim", "steps")

    def __init__(self, ambient_dim: int, steps: Mapping[int, Subspace]):
        assert steps, "a filtration needs at least one step"
        items = sorted(steps.items())
        prev = None
        for p, sub in items:
            assert sub.ambient_dim == ambient_dim, "ambient mismatch in step"
            if prev is not None:
                assert prev.contains(sub), f"F^{p} is not contained in the previous step"
            prev = sub
        assert items[0][1].dim == ambient_dim, "bottom step must be the full space"
        object.__setattr__(self, "ambient_dim", ambient_dim)
        object.__setattr__(self, "steps", tuple(items))

    def __setattr__(self, name, value):
        raise AttributeError("DecreasingFiltration is immutable")

    def levels(self) -> list[int]:
        return [p for p, _ in self.steps]

    def at(self, p: int) -> Subspace:
        chosen = None
        for sp, sub in reversed(self.steps):
            if sp >= p:
                chosen = sub
            else:
                break
        return chosen if chosen is not None else Subspace.zero(self.ambient_dim)

    def min_level(self) -> int:
        return self.steps[0][0]

    def max_level(self) -> int:
        return self.steps[-1][0]

    def conj(self) -> "DecreasingFiltration":
        return DecreasingFiltration(
            self.ambient_dim, {p: sub.conj() for p, sub in self.steps}
        )

    def apply(self, M: ExactMatrix) -> "DecreasingFiltration":
        assert M.rows == M.cols == self.ambient_dim
        return DecreasingFiltration(
            self.ambient_dim, {p: sub.apply(M) for p, sub in self.steps}
        )

    def __eq__(self, other):
        if not isinstance(other, DecreasingFiltration):
            return NotImplemented
        if self.ambient_dim != other.ambient_dim:
            return False
        ps = set(self.levels()) | set(other.levels())
        return all(self.at(p) == other.at(p) for p in ps)

    def __repr__(self):
        parts = ", ".join(f"{p}:{sub.dim}" for p, sub in self.steps)
        return f"DecreasingFiltration({parts})"


class GradedPiece:
    """W_k / W_{k-1}, carried by explicit representative columns.

    The representatives are chosen deterministically: the earliest columns of
    the W_k basis that complete a basis of W_{k-1}.
    """

    __slots__ = ("weight", "reps", "lower", "space")

    def __init__(self, weight: int, reps: ExactMatrix, lower: Subspace, space: Subspace):
        object.__setattr__(self, "weight", weight)
        object.__setattr__(self, "reps", reps)
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "space", space)

    def __setattr__(self, name, value):
        raise AttributeError("GradedPiece is immutable")

    @property
    def dim(self) -> int:
        return self.reps.cols

    @property
    def ambient_dim(self) -> int:
        return self.lower.ambient_dim

    def coordinates(self, v: Sequence) -> list | None:
        """Coordinates of v mod W_{k-1} in the representative basis.

        Returns None when v does not lie in W_k.
        """
        if self.dim == 0 and self.lower.dim == 0:
            from .exactlin import GaussianScalar

            ok = all(GaussianScalar.coerce(x).is_zero() for x in v)
            return [] if ok else None
        sys = self.reps.hstack(self.lower.basis)
        x = solve(sys, v)
        if x is None:
            return None
        return x[: self.dim]

    def __repr__(self):
        return f"GradedPiece(weight {self.weight}, dim {self.dim})"


def graded_piece(W: IncreasingFiltration, k: int) -> GradedPiece:
    lower = W.at(k - 1)
    upper = W.at(k)
    comb = lower.basis.hstack(upper.basis)
    _, pivots, _ = rref(comb)
    rep_cols = [p - lower.dim for p in pivots if p >= lower.dim]
    reps = upper.basis.take_columns(rep_cols)
    return GradedPiece(k, reps, lower, upper)


def induced_map(M: ExactMatrix, src: GradedPiece, tgt: GradedPiece) -> ExactMatrix:
    """The matrix induced by M on representative bases of graded pieces.

    It is a contract error if M does not map the source step into the target
    step (the image of some representative fails to lie in the target space).
    """
    cols = []
    for c in range(src.dim):
        v = src.reps.column(c)
        Mv = [
            sum((M.entries[j][l] * v[l] for l in range(M.cols)), start=v[0] - v[0])
            for j in range(M.rows)
        ]
        coords = tgt.coordinates(Mv)
        if coords is None:
            raise ValueError(
                f"map does not send weight-{src.weight} step into weight-{tgt.weight} step"
            )
        cols.append(coords)
    return ExactMatrix.from_columns(cols, rows=tgt.dim)


def _nilpotency_data(N: ExactMatrix) -> tuple[int, ExactMatrix | None]:
    """(e, N^e) with e the smallest exponent such that N^(e+1) = 0;
    contract error if N is not nilpotent."""
    n = N.rows
    P = ExactMatrix.identity(n)
    e, Pe = -1, None
    for k in range(n + 1):
        if P.is_zero():
            return e, Pe
        e, Pe = k, P
        P = P @ N
    assert P.is_zero(), "matrix is not nilpotent"
    return e, Pe


def _nilpotency_exponent(N: ExactMatrix) -> int:
    """Smallest e with N^(e+1) = 0; contract error if N is not nilpotent."""
    return _nilpotency_data(N)[0]


def _offsets_at(offsets: dict[int, Subspace], l: int, dim: int) -> Subspace:
    chosen = None
    for w in sorted(offsets):
        if w <= l:
            chosen = offsets[w]
        else:
            break
    return chosen if chosen is not None else Subspace.zero(dim)


def _monodromy_offsets(N: ExactMatrix) -> dict[int, Subspace]:
    """Weight filtration of a nilpotent N centered at 0, as offset -> step.

    The standard recursion: with e the top exponent (N^e != 0, N^(e+1) = 0),
    the outer steps are W_e = everything, W_{e-1} = ker N^e, W_{-e} = im N^e,
    W_{-e-1} = 0, and the inner steps are preimages of the weight filtration
    of the map induced by N on ker N^e / im N^e.
    """
    n = N.rows
    if n == 0:
        return {0: Subspace.full(0)}
    e, Ne = _nilpotency_data(N)
    if e <= 0:
        return {0: Subspace.full(n)}
    K = kernel(Ne)
    I = image(Ne)
    # deterministic representatives of ker N^e modulo im N^e
    comb = I.basis.hstack(K.basis)
    _, pivots, _ = rref(comb)
    rep_cols = [p - I.dim for p in pivots if p >= I.dim]
    R = K.basis.take_columns(rep_cols)
    q = R.cols
    if q:
        sys = R.hstack(I.basis)
        nbar_cols = []
        for c in range(q):
            Nv = N @ ExactMatrix.from_columns([R.column(c)], rows=n)
            x = solve(sys, Nv.column(0))
            assert x is not None, "induced map escaped ker N^e + im N^e"
            nbar_cols.append(x[:q])
        Nbar = ExactMatrix.from_columns(nbar_cols, rows=q)
        sub = _monodromy_offsets(Nbar)
    else:
        sub = {}
    out: dict[int, Subspace] = {}
    out[e] = Subspace.full(n)
    out[e - 1] = K
    out[-e] = I
    for l in range(-e + 1, e - 1):
        inner = _offsets_at(sub, l, q)
        lifted = [R @ ExactMatrix.from_columns([inner.basis.column(c)], rows=q)
                  for c in range(inner.dim)]
        vecs = [M.column(0) for M in lifted]
        vecs.extend(I.basis.columns())
        out[l] = Subspace.span(n, vecs)
    return out


def weight_filtration(N: ExactMatrix, d: int) -> IncreasingFiltration:
    """The unique increasing filtration W with N W_i <= W_{i-2} and
    N^l : Gr_{d+l} -> Gr_{d-l} an isomorphism for every l, centered at d.
    """
    assert N.rows == N.cols, "square matrix required"
    assert N.is_rational(), "rational nilpotent matrix required"
    offsets = _monodromy_offsets(N)
    return IncreasingFiltration(N.rows, {d + l: sub for l, sub in offsets.items()})


class WeightAxiomReport:
    """Structured verdict of the two weight-filtration axioms."""

    def __init__(self, failures: list[str]):
        self.failures = list(failures)

    @property
    def ok(self) -> bool:
        return not self.failures

    def __bool__(self):
        return self.ok

    def __repr__(self):
        if self.ok:
            return "WeightAxiomReport(ok)"
        return f"WeightAxiomReport(failures={self.failures!r})"


def check_weight_axioms(
    W: IncreasingFiltration, N: ExactMatrix, d: int
) -> WeightAxiomReport:
    """True iff N W_i <= W_{i-2} and every N^l : Gr_{d+l} -> Gr_{d-l} is an
    isomorphism.  Failures are reported with structured reasons instead of
    raising, so candidate filtrations can be graded.
    """
    failures = []
    lo, hi = W.min_weight(), W.max_weight()
    for w in range(lo, hi + 1):
        img = W.at(w).apply(N)
        if not W.at(w - 2).contains(img):
            failures.append(f"N does not map W_{w} into W_{w-2}")
    span = max(hi - d, d - lo, 0)
    Npow = ExactMatrix.identity(N.rows)
    for l in range(1, span + 1):
        Npow = Npow @ N
        src = graded_piece(W, d + l)
        tgt = graded_piece(W, d - l)
        if src.dim != tgt.dim:
            failures.append(
                f"Gr_{d+l} has dim {src.dim} but Gr_{d-l} has dim {tgt.dim}"
            )
            continue
        if src.dim == 0:
            continue
        try:
            M = induced_map(Npow, src, tgt)
        except ValueError as exc:
            failures.append(f"N^{l} incompatible with filtration: {exc}")
            continue
        if rank(M) != src.dim:
            failures.append(f"N^{l}: Gr_{d+l} -> Gr_{d-l} is not an isomorphism")
    return WeightAxiomReport(failures)
