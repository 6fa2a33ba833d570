"""Mixed Hodge structures: Deligne splitting, compatibility checks, and the
primitive signature tables with their nearby-fiber aggregation formulas.

Conventions.  The real structure is coordinatewise conjugation, so W, N, S
must have rational entries.  S is bilinear with S(u, v) = u^T S v, satisfies
S^T = (-1)^d S, and the primitive Hermitian forms are
(sqrt(-1))^(p-q) S(x, N^(p+q-d) conj(y)) -- linear in x, antilinear in y.
"""

from __future__ import annotations

import random
from fractions import Fraction

from .exactlin import (
    ExactMatrix,
    G_I,
    G_ONE,
    G_ZERO,
    GaussianScalar,
    Subspace,
    gaussian_from_str,
    gaussian_to_str,
    hermitian_check,
    hermitian_signature,
    i_power,
    kernel,
    rank,
)
from .filtration import (
    DecreasingFiltration,
    IncreasingFiltration,
    graded_piece,
    induced_map,
    weight_filtration,
)


def epsilon_sign(a: int) -> int:
    """The sign (-1)^(a(a-1)/2); satisfies eps(a+1) = (-1)^a eps(a)."""
    return -1 if (a * (a - 1) // 2) % 2 else 1


# ---------------------------------------------------------------------------
# serialization helpers (shared with the CLI)
# ---------------------------------------------------------------------------


def matrix_to_json(M: ExactMatrix) -> list[list[str]]:
    return [[gaussian_to_str(e) for e in row] for row in M.entries]


def matrix_from_json(rows: list[list[str]]) -> ExactMatrix:
    return ExactMatrix(
        [[gaussian_from_str(str(e)) if isinstance(e, str) else GaussianScalar.coerce(e)
          for e in row] for row in rows]
    )


def subspace_to_json(sub: Subspace) -> list[list[str]]:
    return [
        [gaussian_to_str(x) for x in sub.basis.column(c)] for c in range(sub.dim)
    ]


def subspace_from_json(ambient_dim: int, cols) -> Subspace:
    vecs = [
        [gaussian_from_str(str(x)) if isinstance(x, str) else GaussianScalar.coerce(x)
         for x in col]
        for col in cols
    ]
    return Subspace.span(ambient_dim, vecs)


class MHSData:
    """Ambient space with W, F, optional nilpotent N and bilinear form S."""

    __slots__ = ("ambient_dim", "d", "W", "F", "N", "S")

    def __init__(
        self,
        ambient_dim: int,
        d: int,
        W: IncreasingFiltration,
        F: DecreasingFiltration,
        N: ExactMatrix | None = None,
        S: ExactMatrix | None = None,
    ):
        assert W.ambient_dim == ambient_dim and F.ambient_dim == ambient_dim
        for _, sub in W.steps:
            assert sub.basis.is_rational(), "W must have rational bases"
        if N is not None:
            assert N.rows == N.cols == ambient_dim
            assert N.is_rational(), "N must be rational"
            assert N.power(ambient_dim).is_zero(), "N must be nilpotent"
        if S is not None:
            # symmetry and nondegeneracy of S are graded by check_situation_b
            # rather than rejected here, so bad inputs can be reported
            assert S.rows == S.cols == ambient_dim
            assert S.is_rational(), "S must be rational"
        object.__setattr__(self, "ambient_dim", ambient_dim)
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "W", W)
        object.__setattr__(self, "F", F)
        object.__setattr__(self, "N", N)
        object.__setattr__(self, "S", S)

    def __setattr__(self, name, value):
        raise AttributeError("MHSData is immutable")

    def s_pair(self, u, v) -> GaussianScalar:
        acc = G_ZERO
        for j in range(self.ambient_dim):
            if GaussianScalar.coerce(u[j]).is_zero():
                continue
            for k in range(self.ambient_dim):
                acc = acc + u[j] * self.S.entries[j][k] * v[k]
        return acc

    # -- JSON ---------------------------------------------------------------

    def to_json(self) -> dict:
        out = {
            "dim": self.ambient_dim,
            "d": self.d,
            "W": [
                {"weight": w, "basis": subspace_to_json(sub)}
                for w, sub in self.W.steps
            ],
            "F": [
                {"level": p, "basis": subspace_to_json(sub)}
                for p, sub in self.F.steps
            ],
        }
        if self.N is not None:
            out["N"] = matrix_to_json(self.N)
        if self.S is not None:
            out["S"] = matrix_to_json(self.S)
        return out

    @staticmethod
    def from_json(obj: dict) -> "MHSData":
        dim = int(obj["dim"])
        d = int(obj["d"])
        W = IncreasingFiltration(
            dim,
            {
                int(step["weight"]): subspace_from_json(dim, step["basis"])
                for step in obj["W"]
            },
        )
        F = DecreasingFiltration(
            dim,
            {
                int(step["level"]): subspace_from_json(dim, step["basis"])
                for step in obj["F"]
            },
        )
        N = matrix_from_json(obj["N"]) if obj.get("N") is not None else None
        S = matrix_from_json(obj["S"]) if obj.get("S") is not None else None
        return MHSData(dim, d, W, F, N, S)


class MHSReport:
    def __init__(self, failures: list[str]):
        self.failures = list(failures)

    @property
    def ok(self) -> bool:
        return not self.failures

    def __bool__(self):
        return self.ok

    def __repr__(self):
        return "MHSReport(ok)" if self.ok else f"MHSReport({self.failures!r})"


def check_mhs(data: MHSData) -> MHSReport:
    """Graded opposedness: for each weight k, the filtration induced by F on
    Gr^W_k is k-opposed to its conjugate.
    """
    failures = []
    W, F = data.W, data.F
    n = data.ambient_dim
    for k in range(W.min_weight(), W.max_weight() + 1):
        wk = W.at(k)
        wk1 = W.at(k - 1)
        gr_dim = wk.dim - wk1.dim
        if gr_dim == 0:
            continue
        for p in range(F.min_level(), F.max_level() + 2):
            A = F.at(p).intersect(wk).add(wk1)
            B = F.conj().at(k - p + 1).intersect(wk).add(wk1)
            a = A.dim - wk1.dim
            b = B.dim - wk1.dim
            if a + b != gr_dim:
                failures.append(
                    f"weight {k}, level {p}: graded dims {a}+{b} != {gr_dim}"
                )
                continue
            if A.intersect(B).dim != wk1.dim:
                failures.append(
                    f"weight {k}, level {p}: induced F^{p} meets conj F^{k-p+1}"
                )
    return MHSReport(failures)


class DeligneSplitting:
    """The bigrading I^{p,q} with W_l = sum_{p+q<=l} and F^r = sum_{p>=r}."""

    __slots__ = ("ambient_dim", "parts")

    def __init__(self, ambient_dim: int, parts: dict[tuple[int, int], Subspace]):
        object.__setattr__(self, "ambient_dim", ambient_dim)
        object.__setattr__(
            self,
            "parts",
            {pq: sub for pq, sub in sorted(parts.items()) if sub.dim > 0},
        )

    def __setattr__(self, name, value):
        raise AttributeError("DeligneSplitting is immutable")

    def part(self, p: int, q: int) -> Subspace:
        return self.parts.get((p, q), Subspace.zero(self.ambient_dim))

    def bigrading(self) -> dict[tuple[int, int], int]:
        return {pq: sub.dim for pq, sub in self.parts.items()}

    def __repr__(self):
        body = ", ".join(f"I^{pq}:{sub.dim}" for pq, sub in self.parts.items())
        return f"DeligneSplitting({body})"


def deligne_splitting(data: MHSData, assume_mhs: bool = False) -> DeligneSplitting:
    """I^{p,q} = F^p  W_{p+q}  (conj F^q  W_{p+q} + sum_{j>=2} conj F^{q-j+1}  W_{p+q-j}).

    Requires check_mhs to pass (contract error otherwise); pass
    assume_mhs=True to skip re-checking when the caller already has.
    """
    if not assume_mhs:
        report = check_mhs(data)
        assert report.ok, f"not a mixed Hodge structure: {report.failures}"
    W, F = data.W, data.F
    Fc = F.conj()
    n = data.ambient_dim
    parts = {}
    lo, hi = F.min_level(), F.max_level()
    for p in range(lo, hi + 1):
        for q in range(lo, hi + 1):
            if W.at(p + q).dim == 0:
                continue
            inner = Fc.at(q).intersect(W.at(p + q))
            jmax = p + q - W.min_weight()
            for j in range(2, jmax + 1):
                inner = inner.add(Fc.at(q - j + 1).intersect(W.at(p + q - j)))
            sub = F.at(p).intersect(W.at(p + q)).intersect(inner)
            if sub.dim:
                parts[(p, q)] = sub
    total = sum(sub.dim for sub in parts.values())
    assert total == n, f"splitting dims {total} do not fill the ambient space {n}"
    return DeligneSplitting(n, parts)


def check_splitting_properties(data: MHSData, splitting: DeligneSplitting) -> MHSReport:
    """Verify the splitting reconstructs W and F, is conjugation-compatible
    modulo lower bidegrees, and is respected by N and paired by S when given.
    """
    failures = []
    n = data.ambient_dim
    W, F = data.W, data.F
    parts = splitting.parts
    # (1) reconstruction of W and F
    for w in range(W.min_weight() - 1, W.max_weight() + 1):
        span = Subspace.zero(n)
        for (p, q), sub in parts.items():
            if p + q <= w:
                span = span.add(sub)
        if span != W.at(w):
            failures.append(f"sum of I^(p,q), p+q<={w}, differs from W_{w}")
    for r in range(F.min_level(), F.max_level() + 1):
        span = Subspace.zero(n)
        for (p, q), sub in parts.items():
            if p >= r:
                span = span.add(sub)
        if span != F.at(r):
            failures.append(f"sum of I^(p,q), p>={r}, differs from F^{r}")
    # direct sum
    if sum(sub.dim for sub in parts.values()) != n:
        failures.append("bigraded dimensions do not add up to the ambient dim")
    # (2) conj I^{q,p} = I^{p,q} modulo lower terms
    for (p, q), sub in parts.items():
        target = splitting.part(p, q)
        lower = Subspace.zero(n)
        for (r, s), other in parts.items():
            if r < q and s < p:
                lower = lower.add(other)
        cspace = target.conj().add(lower)
        ok = all(
            cspace.contains_vector(splitting.part(q, p).basis.column(c))
            for c in range(splitting.part(q, p).dim)
        )
        if not ok:
            failures.append(f"conj I^({q},{p}) escapes I^({p},{q}) + lower terms")
    # (3) N I^{p,q} <= I^{p-1,q-1}
    if data.N is not None:
        for (p, q), sub in parts.items():
            img = sub.apply(data.N)
            if not splitting.part(p - 1, q - 1).contains(img):
                failures.append(f"N I^({p},{q}) escapes I^({p-1},{q-1})")
    # (4) S(I^{p,q}, I^{r,s}) = 0 unless (r,s) = (d-p, d-q)
    if data.S is not None:
        d = data.d
        for (p, q), sub in parts.items():
            for (r, s), other in parts.items():
                if (r, s) == (d - p, d - q):
                    continue
                M = sub.basis.transpose() @ data.S @ other.basis
                if not M.is_zero():
                    failures.append(
                        f"S(I^({p},{q}), I^({r},{s})) nonzero away from duality"
                    )
    return MHSReport(failures)


def check_situation_a(data: MHSData) -> bool:
    """N is a morphism of mixed Hodge structures and W = W(N, d)."""
    assert data.N is not None, "Situation A' needs N"
    N, W, F, d = data.N, data.W, data.F, data.d
    for w in range(W.min_weight(), W.max_weight() + 1):
        if not W.at(w - 2).contains(W.at(w).apply(N)):
            return False
    for p in range(F.min_level(), F.max_level() + 1):
        if not F.at(p - 1).contains(F.at(p).apply(N)):
            return False
    return W == weight_filtration(N, d)


def check_situation_b(data: MHSData) -> bool:
    """(-1)^d-symmetry, infinitesimal isometry, first Hodge-Riemann
    orthogonality S(F^p, F^{d-p+1}) = 0, and the weight orthogonality
    S(W_a, W_b) = 0 for a+b <= 2d-1 that it implies.
    """
    assert data.S is not None, "Situation B' needs S"
    S, d = data.S, data.d
    sign = -1 if d % 2 else 1
    if S.transpose() != (S if sign == 1 else -S):
        return False
    if rank(S) != data.ambient_dim:
        return False
    N = data.N if data.N is not None else ExactMatrix.zero(
        data.ambient_dim, data.ambient_dim
    )
    if not (N.transpose() @ S + S @ N).is_zero():
        return False
    F = data.F
    for p in range(F.min_level(), F.max_level() + 1):
        M = F.at(p).basis.transpose() @ S @ F.at(d - p + 1).basis
        if not M.is_zero():
            return False
    W = data.W
    for a in W.weights():
        b = 2 * d - 1 - a
        M = W.at(a).basis.transpose() @ S @ W.at(b).basis
        if not M.is_zero():
            return False
    return True


def primitive_part(data: MHSData, l: int) -> Subspace:
    """ker(N^{l+1} : Gr_{d+l} -> Gr_{d-l-2}), in Gr_{d+l} rep coordinates."""
    if l < 0:
        return Subspace.zero(0)
    assert data.N is not None
    src = graded_piece(data.W, data.d + l)
    tgt = graded_piece(data.W, data.d - l - 2)
    if src.dim == 0:
        return Subspace.zero(0)
    M = induced_map(data.N.power(l + 1), src, tgt)
    return kernel(M)


class SignatureTable:
    """Primitive signatures s+/s- per bidegree (p,q), with part dimensions."""

    __slots__ = ("d", "entries", "part_dims")

    def __init__(
        self,
        d: int,
        entries: dict[tuple[int, int], tuple[int, int]],
        part_dims: dict[tuple[int, int], int],
    ):
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "entries", dict(sorted(entries.items())))
        object.__setattr__(self, "part_dims", dict(sorted(part_dims.items())))

    def __setattr__(self, name, value):
        raise AttributeError("SignatureTable is immutable")

    def signature(self, p: int, q: int) -> tuple[int, int]:
        return self.entries.get((p, q), (0, 0))

    def part_dim(self, p: int, q: int) -> int:
        return self.part_dims.get((p, q), 0)

    def to_json(self) -> list[dict]:
        return [
            {"p": p, "q": q, "plus": plus, "minus": minus}
            for (p, q), (plus, minus) in self.entries.items()
        ]

    def __repr__(self):
        body = ", ".join(
            f"s^{pq}=({a},{b})" for pq, (a, b) in self.entries.items()
        )
        return f"SignatureTable(d={self.d}; {body})"


def primitive_subspaces(data: MHSData, splitting: DeligneSplitting | None = None):
    """The (p,q)-primitive subspaces I^{p,q} ker N^{p+q-d+1} of the ambient
    space, for p+q >= d.  Returns dict (p,q) -> Subspace.
    """
    if splitting is None:
        splitting = deligne_splitting(data)
    N = data.N if data.N is not None else ExactMatrix.zero(
        data.ambient_dim, data.ambient_dim
    )
    out = {}
    for (p, q), sub in splitting.parts.items():
        l = p + q - data.d
        if l < 0:
            continue
        prim = sub.intersect(kernel(N.power(l + 1)))
        if prim.dim:
            out[(p, q)] = prim
    return out


def signature_table(data: MHSData, splitting: DeligneSplitting | None = None) -> SignatureTable:
    """Exact signatures of (sqrt(-1))^(p-q) S(., N^(p+q-d) conj .) on the
    (p,q)-parts of the primitive subspaces.  The forms must be nondegenerate
    (guaranteed in Situation B'; degeneracy signals bad input).
    """
    assert data.S is not None, "signature table needs S"
    if splitting is None:
        splitting = deligne_splitting(data)
    N = data.N if data.N is not None else ExactMatrix.zero(
        data.ambient_dim, data.ambient_dim
    )
    prims = primitive_subspaces(data, splitting)
    entries = {}
    for (p, q), prim in prims.items():
        l = p + q - data.d
        Nl = N.power(l)
        weil = i_power(p - q)
        B = prim.basis
        pairing = B.transpose() @ data.S @ (Nl @ B.conj())
        H = pairing.scale(weil)
        assert hermitian_check(H), f"primitive form at ({p},{q}) is not Hermitian"
        plus, minus, nulls = hermitian_signature(H)
        if nulls:
            raise ValueError(
                f"degenerate primitive Hermitian block at ({p},{q})"
            )
        entries[(p, q)] = (plus, minus)
    part_dims = {pq: sub.dim for pq, sub in splitting.parts.items()}
    return SignatureTable(data.d, entries, part_dims)


def aggregate_s(table: SignatureTable, p: int, l: int) -> tuple[int, int]:
    """The bold invariants S±^{p, d+l-p} = sum_{r >= max(0,-l)} s±^{p+r, d+l-p+r};
    checks that S+ + S- equals the dimension of the (p, d+l-p)-part of Gr_{d+l}.
    """
    d = table.d
    q = d + l - p
    plus = minus = 0
    rmax = max((P for P, _ in table.entries), default=p) - p
    for r in range(max(0, -l), rmax + 1):
        a, b = table.signature(p + r, q + r)
        plus += a
        minus += b
    expected = table.part_dim(p, q)
    assert plus + minus == expected, (
        f"aggregate S^({p},{q}) = {plus}+{minus} but dim I^({p},{q}) = {expected}"
    )
    return plus, minus


def nearby_index_formula(table: SignatureTable, p: int) -> tuple[int, int]:
    """Predicted signature of S(C., conj .) on the (p, d-p)-part of the
    nearby/orbit Hodge structure: sum_{k=0}^{d} S±^{p,k}, cross-checked
    against the equivalent double sum over l >= p-d, r >= max(0,-l).
    """
    d = table.d
    plus = minus = 0
    for k in range(0, d + 1):
        a, b = aggregate_s(table, p, p + k - d)
        plus += a
        minus += b
    # the double-sum form must agree
    plus2 = minus2 = 0
    for (P, Q), (a, b) in table.entries.items():
        r = P - p
        if r < 0:
            continue
        l = Q - d + p - r
        if l >= p - d and r >= max(0, -l) and 0 <= d + l - p <= d:
            plus2 += a
            minus2 += b
    assert (plus, minus) == (plus2, minus2), (
        f"aggregation forms disagree at p={p}: {(plus, minus)} vs {(plus2, minus2)}"
    )
    return plus, minus


# ---------------------------------------------------------------------------
# random polarized mixed Hodge structures (for property tests)
# ---------------------------------------------------------------------------


def _exp_nilpotent(M: ExactMatrix) -> ExactMatrix:
    n = M.rows
    out = ExactMatrix.identity(n)
    term = ExactMatrix.identity(n)
    k = 1
    while True:
        term = term @ M
        if term.is_zero():
            break
        out = out + term.map(lambda e, k=k: e * Fraction(1, _factorial(k)))
        k += 1
    return out


def _factorial(k: int) -> int:
    out = 1
    for j in range(2, k + 1):
        out *= j
    return out


def _invert(M: ExactMatrix) -> ExactMatrix:
    from .exactlin import rref

    n = M.rows
    R, _, rk = rref(M.hstack(ExactMatrix.identity(n)))
    assert rk == n, "matrix is not invertible"
    return ExactMatrix([[R.entries[j][n + k] for k in range(n)] for j in range(n)])


def random_polarized_mhs(
    rng: random.Random,
    max_dim: int = 10,
    max_d: int = 4,
    polarized: bool = True,
    twist: bool = True,
    transport: bool = True,
):
    """A random Situation (A')+(B') structure with known primitive data.

    Built from a conjugation-symmetric multiset of primitive slots (p,q)
    with 0 <= p,q <= d <= p+q, each carrying a Jordan string of length
    p+q-d+1 and a primitive form value lambda (positive when polarized);
    the Hodge filtration is then twisted by exp of an odd polynomial in N
    (so the result is genuinely non-split) and everything is moved by a
    random rational coordinate change.

    Returns (MHSData, expected) where expected maps (p,q) to the exact
    primitive signature (plus, minus) the signature table must produce.
    """
    d = rng.randrange(1, max_d + 1)
    slots = []  # (p, q, lam); p >= q, a p > q slot stands for the conj pair
    total = 0
    while True:
        p = rng.randrange(0, d + 1)
        q = rng.randrange(max(0, d - p), d + 1)
        if p < q:
            p, q = q, p
        length = p + q - d + 1
        cost = length * (1 if p == q else 2)
        if total + cost > max_dim:
            if slots:
                break
            continue
        lam = Fraction(rng.randrange(1, 5), rng.randrange(1, 4))
        if not polarized and rng.random() < 0.5:
            lam = -lam
        slots.append((p, q, lam))
        total += cost
        if total >= max_dim or rng.random() < 0.3:
            break
    n = total

    N_rows = [[Fraction(0)] * n for _ in range(n)]
    S_rows = [[Fraction(0)] * n for _ in range(n)]
    f_vectors: list[list[GaussianScalar]] = []
    expected: dict[tuple[int, int], list[int]] = {}
    # layout: real slots occupy consecutive indices r = 0..l;
    # complex slots occupy pairs (f_r, g_r) with u_r = f_r + i g_r
    offset = 0
    weight_of: list[int] = []
    ftags: list[tuple[int, int]] = []  # (level contribution info) via vectors below
    fvec_entries: list[tuple[int, list[tuple[int, GaussianScalar]]]] = []
    for (p, q, lam) in slots:
        l = p + q - d
        sgn = 1 if lam > 0 else -1
        if p == q:
            base = offset
            for r in range(l):
                N_rows[base + r + 1][base + r] = Fraction(1)
            for r in range(l + 1):
                s = l - r
                S_rows[base + r][base + s] = (-1) ** r * lam
                weight_of.append(p + q - 2 * r)
            for r in range(l + 1):
                fvec_entries.append((p - r, [(base + r, G_ONE)]))
            key = (p, q)
            acc = expected.setdefault(key, [0, 0])
            acc[0 if sgn > 0 else 1] += 1
            offset += l + 1
        else:
            base = offset  # pairs: index(f_r) = base+2r, index(g_r) = base+2r+1
            mu = i_power(q - p) * GaussianScalar(lam)
            re_mu, im_mu = mu.re, mu.im
            for r in range(l):
                N_rows[base + 2 * r + 2][base + 2 * r] = Fraction(1)
                N_rows[base + 2 * r + 3][base + 2 * r + 1] = Fraction(1)
            for r in range(l + 1):
                s = l - r
                c = Fraction((-1) ** r)
                # S(f_r, f_s) = S(g_r, g_s) = (-1)^r Re(mu)/2,
                # S(f_r, g_s) = -(-1)^r Im(mu)/2, S(g_r, f_s) = (-1)^r Im(mu)/2
                S_rows[base + 2 * r][base + 2 * s] += c * re_mu / 2
                S_rows[base + 2 * r + 1][base + 2 * s + 1] += c * re_mu / 2
                S_rows[base + 2 * r][base + 2 * s + 1] += -c * im_mu / 2
                S_rows[base + 2 * r + 1][base + 2 * s] += c * im_mu / 2
                weight_of.append(p + q - 2 * r)
                weight_of.append(p + q - 2 * r)
            for r in range(l + 1):
                # u_r = f_r + i g_r has type (p-r, q-r)
                fvec_entries.append(
                    (p - r, [(base + 2 * r, G_ONE), (base + 2 * r + 1, G_I)])
                )
                # conj u_r has type (q-r, p-r)
                fvec_entries.append(
                    (q - r, [(base + 2 * r, G_ONE), (base + 2 * r + 1, -G_I)])
                )
            for key in [(p, q), (q, p)]:
                acc = expected.setdefault(key, [0, 0])
                acc[0 if sgn > 0 else 1] += 1
            offset += 2 * (l + 1)
    assert offset == n

    N = ExactMatrix.from_rational(N_rows)
    S = ExactMatrix.from_rational(S_rows)

    # W directly from the string weights (agrees with weight_filtration(N, d))
    wmin, wmax = min(weight_of), max(weight_of)
    W_steps = {}
    for w in range(wmin, wmax + 1):
        vecs = []
        for j, wt in enumerate(weight_of):
            if wt <= w:
                v = [G_ZERO] * n
                v[j] = G_ONE
                vecs.append(v)
        if vecs:
            W_steps[w] = Subspace.span(n, vecs)
    F_steps = {}
    max_level = max(level for level, _ in fvec_entries)
    for k in range(0, max_level + 1):
        vecs = []
        for level, entries in fvec_entries:
            if level >= k:
                v = [G_ZERO] * n
                for j, val in entries:
                    v[j] = val
                vecs.append(v)
        F_steps[k] = Subspace.span(n, vecs)
    F = DecreasingFiltration(n, F_steps)
    W = IncreasingFiltration(n, W_steps)

    if twist:
        # odd polynomials in N are S-infinitesimal isometries; exp of one
        # moves F off the split position without touching W, N, S
        M = ExactMatrix.zero(n, n)
        j = 1
        while j <= n:
            if not N.power(j).is_zero():
                c = GaussianScalar(
                    Fraction(rng.randrange(-2, 3)), Fraction(rng.randrange(-2, 3))
                )
                M = M + N.power(j).scale(c)
            j += 2
        E = _exp_nilpotent(M)
        F = F.apply(E)

    if transport:
        # random unimodular coordinate change: a product of integer shears
        # and sign flips, so the inverse is integral and entries stay small
        rows = [[Fraction(int(j == k)) for k in range(n)] for j in range(n)]
        for _ in range(2 * n):
            i = rng.randrange(n)
            j = rng.randrange(n)
            if i == j:
                continue
            c = rng.choice([-2, -1, 1, 2])
            rows[i] = [a + c * b for a, b in zip(rows[i], rows[j])]
        for j in range(n):
            if rng.random() < 0.25:
                rows[j] = [-a for a in rows[j]]
        T = ExactMatrix.from_rational(rows)
        Tinv = _invert(T)
        W = W.apply(T)
        F = F.apply(T)
        N = T @ N @ Tinv
        S = Tinv.transpose() @ S @ Tinv

    data = MHSData(n, d, W, F, N=N, S=S)
    return data, {pq: tuple(v) for pq, v in expected.items()}
