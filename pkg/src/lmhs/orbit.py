"""Nilpotent-orbit asymptotics: exp(zN)F, opposedness determinants, orbit
signatures in evaluate and asymptotic mode, and the combinatorial identities
behind the minor bookkeeping (standard Young tableaux, Taylor-block minors,
wedge determinants).

The orbit variable is z = a + i t with a a fixed rational (default 0) and t a
real polynomial variable; all asymptotics are exact statements about leading
coefficients of polynomials in t.
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial

from .exactlin import (
    ExactMatrix,
    G_ZERO,
    GaussianScalar,
    PolyScalar,
    POLY_ONE,
    Subspace,
    ZeroMinorError,
    hermitian_check,
    hermitian_diagonalize,
    hermitian_signature,
    i_power,
    leading_principal_minors,
    leading_sign,
    poly_det,
    rank,
)
from .mhs import (
    MHSData,
    check_situation_a,
    check_situation_b,
    deligne_splitting,
    nearby_index_formula,
    primitive_subspaces,
    signature_table,
)


def poly_exp_nilpotent(N: ExactMatrix, z: PolyScalar) -> ExactMatrix:
    """exp(z N) as a matrix of polynomials in t, for nilpotent rational N."""
    n = N.rows
    out = [[PolyScalar([1]) if j == k else PolyScalar() for k in range(n)]
           for j in range(n)]
    P = ExactMatrix.identity(n)
    zk = POLY_ONE
    k = 1
    while True:
        P = P @ N
        if P.is_zero():
            break
        zk = zk * z
        inv = Fraction(1, factorial(k))
        for j in range(n):
            for l in range(n):
                e = P.entries[j][l]
                if not e.is_zero():
                    out[j][l] = out[j][l] + zk * (e * inv)
        k += 1
    return ExactMatrix(out, cols=n)


class WellOrderedBasis:
    """Tagged basis N^r u_i^{p,q} with the primitive u_i h-diagonalized.

    Tags are (p, q, i, r); the order is descending in (p-r, q-r, r, i).
    Restricted to p-r >= k the vectors form a basis of F^k.
    """

    __slots__ = ("data", "entries", "splitting", "prims")

    def __init__(self, data: MHSData, splitting=None):
        assert data.N is not None and data.S is not None
        if splitting is None:
            splitting = deligne_splitting(data)
        prims = primitive_subspaces(data, splitting)
        d = data.d
        items = []
        for (p, q), prim in sorted(prims.items()):
            l = p + q - d
            Nl = data.N.power(l)
            B = prim.basis
            H = (B.transpose() @ data.S @ (Nl @ B.conj())).scale(i_power(p - q))
            assert hermitian_check(H), f"primitive form at ({p},{q}) not Hermitian"
            vectors, values, nulls = hermitian_diagonalize(H)
            assert not nulls, f"degenerate primitive form at ({p},{q})"
            for i, (vec, val) in enumerate(zip(vectors, values)):
                u = B @ ExactMatrix.from_columns([vec], rows=B.cols)
                v = u.column(0)
                for r in range(l + 1):
                    if r:
                        v = (data.N @ ExactMatrix.from_columns([v])).column(0)
                    items.append(
                        {
                            "tag": (p, q, i, r),
                            "vector": list(v),
                            "value": val,
                            "sign": 1 if val > 0 else -1,
                        }
                    )
        items.sort(
            key=lambda it: (
                it["tag"][0] - it["tag"][3],
                it["tag"][1] - it["tag"][3],
                it["tag"][3],
                it["tag"][2],
            ),
            reverse=True,
        )
        object.__setattr__(self, "data", data)
        object.__setattr__(self, "entries", tuple(items))
        object.__setattr__(self, "splitting", splitting)
        object.__setattr__(self, "prims", prims)
        # sanity: the restriction to p - r >= k spans F^k exactly
        F = data.F
        n = data.ambient_dim
        for k in range(F.min_level(), F.max_level() + 1):
            tags, M = self.level_basis(k)
            target = F.at(k)
            assert M.cols == target.dim, (
                f"well-ordered basis count at level {k}: {M.cols} != {target.dim}"
            )
            if M.cols:
                assert rank(M) == M.cols, "well-ordered basis not independent"
                assert target.contains(Subspace(n, M)), (
                    f"well-ordered basis escapes F^{k}"
                )

    def __setattr__(self, name, value):
        raise AttributeError("WellOrderedBasis is immutable")

    def level_basis(self, k: int) -> tuple[list[tuple], ExactMatrix]:
        """Tags and column matrix of the well-ordered basis of F^k."""
        sel = [it for it in self.entries
               if it["tag"][0] - it["tag"][3] >= k]
        cols = [it["vector"] for it in sel]
        M = ExactMatrix.from_columns(cols, rows=self.data.ambient_dim)
        return [it["tag"] for it in sel], M

    def primitive_signs(self) -> dict[tuple[int, int], list[int]]:
        out: dict[tuple[int, int], list[int]] = {}
        for it in self.entries:
            p, q, i, r = it["tag"]
            if r == 0:
                out.setdefault((p, q), []).append(it["sign"])
        return out


class OrbitFiltration:
    """Polynomial column bases of exp((a+it)N) F^k in the well-ordered basis."""

    __slots__ = ("data", "a", "wob", "exp_z", "exp_zbar", "bases")

    def __init__(self, data: MHSData, a: Fraction = Fraction(0), splitting=None):
        assert data.N is not None
        wob = WellOrderedBasis(data, splitting)
        a = Fraction(a)
        z = PolyScalar([GaussianScalar(a), GaussianScalar(0, 1)])
        zbar = z.conj()
        exp_z = poly_exp_nilpotent(data.N, z)
        exp_zbar = poly_exp_nilpotent(data.N, zbar)
        bases = {}
        F = data.F
        for k in range(F.min_level(), F.max_level() + 1):
            tags, M = wob.level_basis(k)
            poly_cols = M.map(PolyScalar.coerce)
            bases[k] = (tags, exp_z @ poly_cols)
        object.__setattr__(self, "data", data)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "wob", wob)
        object.__setattr__(self, "exp_z", exp_z)
        object.__setattr__(self, "exp_zbar", exp_zbar)
        object.__setattr__(self, "bases", bases)

    def __setattr__(self, name, value):
        raise AttributeError("OrbitFiltration is immutable")

    def level(self, k: int) -> ExactMatrix:
        """Polynomial basis columns of exp(zN) F^k."""
        F = self.data.F
        if k <= F.min_level():
            k = F.min_level()
        if k > F.max_level():
            n = self.data.ambient_dim
            return ExactMatrix.from_columns([], rows=n)
        return self.bases[k][1]

    def level_tags(self, k: int) -> list[tuple]:
        F = self.data.F
        if k <= F.min_level():
            k = F.min_level()
        if k > F.max_level():
            return []
        return self.bases[k][0]

    def hermitian_matrix(self, k: int) -> ExactMatrix:
        """The form (sqrt(-1))^d S(., conj .) on exp(zN) F^k, as polynomials
        in t in the well-ordered basis.  Since N is an infinitesimal isometry
        this equals i^d X^T S exp((zbar - z) N) conj(X) with X the constant
        well-ordered basis of F^k, and zbar - z = -2it.
        """
        data = self.data
        assert data.S is not None
        _, X = self.wob.level_basis(max(k, data.F.min_level()))
        m2it = PolyScalar([G_ZERO, GaussianScalar(0, -2)])
        E = poly_exp_nilpotent(data.N, m2it)
        S_poly = data.S.map(PolyScalar.coerce)
        Xp = X.map(PolyScalar.coerce)
        H = Xp.transpose() @ S_poly @ E @ Xp.conj()
        return H.scale(PolyScalar([i_power(data.d)]))


def orbit_filtration(data: MHSData, a: Fraction = Fraction(0)) -> OrbitFiltration:
    return OrbitFiltration(data, a)


def opposedness_degree(data: MHSData, k: int, prims=None) -> int:
    """Predicted leading degree: sum over primitive (p,q) with p >= k and
    q >= d-k+1 of dim * (p-k+1) * (q-d+k)."""
    d = data.d
    if prims is None:
        prims = primitive_subspaces(data)
    total = 0
    for (p, q), prim in prims.items():
        if p >= k and q >= d - k + 1:
            total += prim.dim * (p - k + 1) * (q - d + k)
    return total


def opposedness_polynomial(orb: OrbitFiltration, k: int) -> PolyScalar:
    """Determinant of [basis of exp(zN)F^k | conjugate basis of exp(zN)F^{d-k+1}].

    A nonzero leading coefficient certifies d-opposedness for all large t.
    Raises ValueError("opposedness impossible") on dimension mismatch.
    """
    data = orb.data
    n = data.ambient_dim
    d = data.d
    F = data.F
    A = orb.level(k)
    k2 = d - k + 1
    if k2 > F.max_level():
        X2 = ExactMatrix.from_columns([], rows=n)
    else:
        _, X2 = orb.wob.level_basis(max(k2, F.min_level()))
    B = orb.exp_zbar @ X2.conj().map(PolyScalar.coerce)
    if A.cols + B.cols != n:
        raise ValueError("opposedness impossible")
    return poly_det(A.hstack(B))


def _signature_from_minors(minors: list[PolyScalar]) -> tuple[int, int]:
    pos = neg = 0
    prev_sign = 1
    for P in minors:
        _, s = leading_sign(P)
        if s * prev_sign > 0:
            pos += 1
        else:
            neg += 1
        prev_sign = s
    return pos, neg


def orbit_signature(
    orb: OrbitFiltration,
    k: int,
    method: str = "evaluate",
    t0: Fraction = Fraction(2**10),
    t0_cap: Fraction = Fraction(2**60),
) -> tuple[int, int]:
    """Signature of the Hermitian form i^d S(., conj .) on exp(zN) F^k for
    large t.

    evaluate: exact signature at t = t0, doubling t0 until two consecutive
    evaluations are nondegenerate and agree (cap configurable).
    asymptotic: signs of leading coefficients of consecutive leading
    principal minor ratios in the well-ordered basis.
    """
    H = orb.hermitian_matrix(k)
    if H.rows == 0:
        return (0, 0)
    if method == "asymptotic":
        minors = leading_principal_minors(H)
        return _signature_from_minors(minors)
    assert method == "evaluate", f"unknown method {method!r}"
    prev = None
    t = Fraction(t0)
    while t <= t0_cap:
        Ht = H.map(lambda p: p.evaluate(t))
        assert hermitian_check(Ht)
        pos, neg, nulls = hermitian_signature(Ht)
        if nulls == 0:
            if prev == (pos, neg):
                return pos, neg
            prev = (pos, neg)
        else:
            prev = None
        t *= 2
    raise ArithmeticError(f"signature did not stabilize below t0 cap {t0_cap}")


class AsymptoticReport:
    """Per-level opposedness degrees/signs and per-step minor data."""

    def __init__(self, levels: list[dict]):
        self.levels = levels

    @property
    def ok(self) -> bool:
        return all(not lv.get("failures") for lv in self.levels)

    def to_json(self) -> list[dict]:
        return self.levels

    def __repr__(self):
        return f"AsymptoticReport(ok={self.ok}, levels={len(self.levels)})"


def refined_filtration_check(orb: OrbitFiltration) -> AsymptoticReport:
    """Leading principal minors of the orbit Hermitian matrices in the
    well-ordered basis: all must be nonzero; reports the raw consecutive
    ratio degrees L'_l, and checks the bound k-d <= . <= d on the diagonal
    orders p+q-d-2r (which are the degrees the refined-filtration argument
    actually controls; raw ratio degrees can fall outside the bound).
    """
    data = orb.data
    d = data.d
    out = []
    for k in range(data.F.min_level(), data.F.max_level() + 1):
        entry: dict = {"level": k, "failures": []}
        tags = orb.level_tags(k)
        H = orb.hermitian_matrix(k)
        try:
            opp = opposedness_polynomial(orb, k)
            want = opposedness_degree(data, k, orb.wob.prims)
            entry["opposedness"] = {
                "degree": opp.degree(),
                "predicted_degree": want,
            }
            if opp.degree() != want:
                entry["failures"].append("opposedness degree mismatch")
        except ValueError:
            entry["opposedness"] = "impossible"
        if H.rows == 0:
            entry["minors"] = []
            out.append(entry)
            continue
        try:
            minors = leading_principal_minors(H)
        except ZeroMinorError as exc:
            entry["failures"].append(str(exc))
            out.append(entry)
            continue
        minor_data = []
        prev_deg = 0
        for l, P in enumerate(minors):
            if P.is_zero():
                entry["failures"].append(f"minor {l + 1} vanishes")
                break
            deg, sgn = leading_sign(P)
            ratio_deg = deg - prev_deg
            p, q, i, r = tags[l]
            diag_order = p + q - d - 2 * r
            minor_data.append(
                {
                    "degree": deg,
                    "sign": sgn,
                    "ratio_degree": ratio_deg,
                    "diagonal_order": diag_order,
                }
            )
            if not (k - d <= diag_order <= d):
                entry["failures"].append(
                    f"diagonal order {diag_order} outside [{k - d}, {d}]"
                )
            prev_deg = deg
        entry["minors"] = minor_data
        out.append(entry)
    return AsymptoticReport(out)


class MainTheoremReport:
    def __init__(self, failures: list[str], details: dict):
        self.failures = list(failures)
        self.details = details

    @property
    def ok(self) -> bool:
        return not self.failures

    def __bool__(self):
        return self.ok

    def __repr__(self):
        return (
            "MainTheoremReport(ok)"
            if self.ok
            else f"MainTheoremReport(failures={self.failures!r})"
        )


def verify_main_theorem(
    data: MHSData,
    a: Fraction = Fraction(0),
    t0: Fraction = Fraction(2**10),
    t0_cap: Fraction = Fraction(2**60),
) -> MainTheoremReport:
    """Check that the orbit signatures match the aggregated primitive
    signature formula.

    For large t the form i^d S(., conj .) on exp(zN)F^k splits into the
    induced (j, d-j) pieces with j >= k, so the piece at j has signature
    orbitSignature(j) - orbitSignature(j+1).  Untwisting by the Weil-factor
    ratio i^d / i^(2j-d) = (-1)^(d-j) (which swaps (plus, minus) when
    negative) gives the signature of the form i^(2j-d) S(., conj .) on the
    piece, which must equal nearbyIndexFormula(j).  In the fully polarized
    case all its negatives must vanish: the pieces are positive definite
    and exp(zN)F is a nilpotent orbit.
    """
    failures: list[str] = []
    details: dict = {}
    if not check_situation_a(data):
        return MainTheoremReport(["Situation A' fails"], details)
    if not check_situation_b(data):
        return MainTheoremReport(["Situation B' fails"], details)
    d = data.d
    splitting = deligne_splitting(data)
    table = signature_table(data, splitting)
    details["table"] = table
    nearby = {}
    for p in range(0, d + 1):
        nearby[p] = nearby_index_formula(table, p)
    details["nearby"] = nearby
    polarized = all(m == 0 for (_, m) in table.entries.values())
    details["polarized"] = polarized
    orb = OrbitFiltration(data, a, splitting)
    level_sig = {d + 1: (0, 0)}
    for k in range(0, d + 1):
        got_eval = orbit_signature(orb, k, "evaluate", t0, t0_cap)
        got_asym = orbit_signature(orb, k, "asymptotic")
        if got_eval != got_asym:
            failures.append(
                f"level {k}: evaluate signature {got_eval} != "
                f"asymptotic signature {got_asym}"
            )
        level_sig[k] = got_eval
        try:
            opp = opposedness_polynomial(orb, k)
            want = opposedness_degree(data, k, orb.wob.prims)
            if opp.degree() != want:
                failures.append(
                    f"level {k}: opposedness degree {opp.degree()} != {want}"
                )
        except ValueError as exc:
            failures.append(f"level {k}: {exc}")
    details["levels"] = level_sig
    pieces = {}
    for j in range(d, -1, -1):
        plus = level_sig[j][0] - level_sig[j + 1][0]
        minus = level_sig[j][1] - level_sig[j + 1][1]
        if plus < 0 or minus < 0:
            failures.append(
                f"piece {j}: level signatures do not nest "
                f"({level_sig[j]} vs {level_sig[j + 1]})"
            )
            continue
        if (d - j) % 2:
            plus, minus = minus, plus
        pieces[j] = (plus, minus)
        if pieces[j] != nearby[j]:
            failures.append(
                f"piece {j}: orbit signature {pieces[j]} != "
                f"nearby index {nearby[j]}"
            )
        if polarized and minus != 0:
            failures.append(
                f"piece {j}: polarized case has {minus} negatives"
            )
    details["pieces"] = pieces
    return MainTheoremReport(failures, details)


# ---------------------------------------------------------------------------
# combinatorial identities
# ---------------------------------------------------------------------------


def syt_count(rows: int, cols: int) -> int:
    """Standard Young tableaux of the rows x cols rectangle (hook lengths)."""
    assert rows >= 0 and cols >= 0
    if rows == 0 or cols == 0:
        return 1
    hooks = 1
    for i in range(rows):
        for j in range(cols):
            hooks *= (rows - i) + (cols - j) - 1
    total = factorial(rows * cols)
    assert total % hooks == 0
    return total // hooks


def taylor_minor_identity(n: int, k: int) -> bool:
    """The upper-right k x k minor of the (n+1) x (n+1) Taylor matrix
    (x^(j-i)/(j-i)!) equals syt(n-k+1, k)/((n-k+1)k)! x^((n-k+1)k).
    """
    assert 0 <= k <= n + 1
    x = PolyScalar.variable()

    def cell(r, c):
        e = (n + 1 - k + c) - r
        if e < 0:
            return PolyScalar()
        return PolyScalar([G_ZERO] * e + [GaussianScalar(Fraction(1, factorial(e)))])

    M = ExactMatrix([[cell(r, c) for c in range(k)] for r in range(k)], cols=k)
    det = poly_det(M)
    e = (n - k + 1) * k
    coeff = Fraction(syt_count(n - k + 1, k), factorial(e))
    expected = PolyScalar([G_ZERO] * e + [GaussianScalar(coeff)])
    assert det == expected, f"taylor minor identity fails at n={n}, k={k}"
    return True


def wedge_identity(n: int, k: int, a: Fraction = Fraction(0)) -> bool:
    """On a single Jordan string u, Nu, ..., N^n u, the determinant of
    [e^{zN} N^j u (j=0..n-k) | e^{zbar N} N^j u (j=0..k-1)] equals
    syt(n-k+1,k)/((n-k+1)k)! (zbar - z)^((n-k+1)k), with zbar - z = -2it.
    """
    assert 0 <= k <= n + 1
    m = n + 1
    rows = [[Fraction(0)] * m for _ in range(m)]
    for j in range(m - 1):
        rows[j + 1][j] = Fraction(1)
    N = ExactMatrix.from_rational(rows)
    z = PolyScalar([GaussianScalar(Fraction(a)), GaussianScalar(0, 1)])
    Ez = poly_exp_nilpotent(N, z)
    Ezb = poly_exp_nilpotent(N, z.conj())
    cols = []
    for j in range(0, n - k + 1):
        v = [PolyScalar([1]) if l == j else PolyScalar() for l in range(m)]
        cols.append((Ez @ ExactMatrix.from_columns([v])).column(0))
    for j in range(0, k):
        v = [PolyScalar([1]) if l == j else PolyScalar() for l in range(m)]
        cols.append((Ezb @ ExactMatrix.from_columns([v])).column(0))
    det = poly_det(ExactMatrix.from_columns(cols, rows=m))
    e = (n - k + 1) * k
    coeff = GaussianScalar(Fraction(syt_count(n - k + 1, k), factorial(e)))
    minus2i = GaussianScalar(0, -2)
    expected = PolyScalar([G_ZERO] * e + [coeff * minus2i ** e])
    assert det == expected, f"wedge identity fails at n={n}, k={k}, a={a}"
    return True
