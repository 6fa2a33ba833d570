"""Builders and closed-form evaluators for families of geometric examples:
semistable models of ordinary-double-point smoothings, blowup map assembly,
the Kahler-type index formula, Lefschetz/fiber-product Betti counts, and the
index tables of some non-Kahler Calabi-Yau constructions.
"""

from __future__ import annotations

from fractions import Fraction

from .exactlin import ExactMatrix, GaussianScalar, rank
from .steenbrink import DegenerationData, StratumCohomology

G_ONE = GaussianScalar(1)
G_ZERO = GaussianScalar(0)
I = GaussianScalar(0, 1)


# ---------------------------------------------------------------------------
# quadrics
# ---------------------------------------------------------------------------

def quadric_cohomology(n: int, depth: int = 1) -> StratumCohomology:
    """Cohomology of a smooth n-dimensional quadric with its intersection
    pairing.  Below the middle, degree 2j carries the hyperplane power h^j;
    above the middle the dual generator h^j / 2 is used, so complementary
    pairings are 1.  For even n = 2k the middle carries the two plane
    classes A, B with A.B = (1 - (-1)^k)/2 and A.A = B.B = (1 + (-1)^k)/2.
    """
    assert n >= 1
    cohomology = {}
    for j in range(0, n + 1):
        q = 2 * j
        if q == n:
            continue
        if q > n:
            break
        cohomology[q] = {
            "types": [(j, j)],
            "pairing": ExactMatrix.from_rational([[1]]),
        }
        cohomology[2 * n - q] = {
            "types": [(n - j, n - j)],
            "pairing": ExactMatrix.from_rational([[1]]),
        }
    if n % 2 == 0:
        k = n // 2
        off = Fraction(1 - (-1) ** k, 2)
        diag = Fraction(1 + (-1) ** k, 2)
        cohomology[n] = {
            "types": [(k, k), (k, k)],
            "pairing": ExactMatrix.from_rational([[diag, off], [off, diag]]),
        }
    return StratumCohomology(depth, cohomology)


# ---------------------------------------------------------------------------
# blowup map assembly
# ---------------------------------------------------------------------------

def blowup_restriction(i1_star: ExactMatrix, i2_gysin: ExactMatrix) -> ExactMatrix:
    """Restriction on blowup cohomology H^k(X) + H^{k-2}(B): the block
    assembly [i1* | i2!]."""
    assert i1_star.rows == i2_gysin.rows, "shape mismatch"
    return i1_star.hstack(i2_gysin)


def blowup_gysin(i1_gysin: ExactMatrix, i2_star: ExactMatrix) -> ExactMatrix:
    """Gysin map into blowup cohomology: the stacked block [i1! ; -i2*].
    The negative sign on the second block comes from the excess normal
    direction."""
    assert i1_gysin.cols == i2_star.cols, "shape mismatch"
    return i1_gysin.vstack(-i2_star)


# ---------------------------------------------------------------------------
# ordinary double points
# ---------------------------------------------------------------------------

class ResolutionData:
    """Synthetic middle-degree data of the resolution obtained by blowing up
    every ordinary double point of an m-fold.

    Odd m: signs gives the symplectic middle pairs (sign -1 is a positive
    h^{(m+1)/2} direction of the Hermitian form), rho is the full-rank
    l x (l - R) integer matrix of relation classes among the differences of
    plane classes on the exceptional quadrics.  Even m: vhat_signs are the
    diagonal self-intersections of the middle classes spanning the kernel of
    the restriction to the exceptional loci.
    """

    __slots__ = ("m", "l", "signs", "rho", "vhat_signs")

    def __init__(self, m, l, signs=(), rho=None, vhat_signs=()):
        assert m in (3, 4), "synthetic resolutions cover m = 3 and m = 4"
        assert l >= 0
        if m % 2:
            if rho is None:
                rho = ExactMatrix.zero(l, 0)
            assert rho.rows == l
            assert rank(rho) == rho.cols, "relation matrix must have full rank"
            assert not vhat_signs
        else:
            assert rho is None
            rho = None
            assert all(s in (1, -1) for s in vhat_signs)
        assert all(s in (1, -1) for s in signs)
        self.m = m
        self.l = l
        self.signs = tuple(signs)
        self.rho = rho
        self.vhat_signs = tuple(vhat_signs)

    @property
    def R(self) -> int:
        assert self.m % 2
        return self.l - self.rho.cols

    def middle_signature(self):
        """Signature of the Hermitian form on the middle type sectors."""
        if self.m % 2:
            plus = sum(1 for s in self.signs if s == -1)
            return (plus, len(self.signs) - plus)
        plus = sum(1 for s in self.vhat_signs if s == 1)
        return (plus, len(self.vhat_signs) - plus)


class OdpInput:
    """Inputs of the ordinary-double-point index formula: dimension m, the
    number l of double points, the relation count R (odd m) or the signature
    of the middle form on the restriction kernel V^m (even m), and the
    signature table of the resolution."""

    __slots__ = ("m", "l", "R", "vhat", "table")

    def __init__(self, m, l, R=None, vhat=None, table=None):
        assert m >= 3 and l >= 0
        if m % 2:
            assert R is not None and 0 <= R <= l
            assert vhat is None
        else:
            assert vhat is not None and R is None
        self.m = m
        self.l = l
        self.R = R
        self.vhat = vhat
        self.table = dict(table or {})

    @staticmethod
    def from_resolution(res: ResolutionData) -> "OdpInput":
        plus, minus = res.middle_signature()
        if res.m % 2:
            k = (res.m + 1) // 2
            table = {k: (plus, minus), res.m - k: (plus, minus)}
            return OdpInput(res.m, res.l, R=res.R, table=table)
        return OdpInput(res.m, res.l, vhat=(plus, minus), table={})


def odp_index_formula(inp: OdpInput) -> dict:
    """Signature of S(C., conj .) on H^{k,m-k} of the smoothing, per k."""
    out = {}
    for k in range(0, inp.m + 1):
        plus, minus = inp.table.get(k, (0, 0))
        if inp.m % 2:
            if k in ((inp.m + 1) // 2, (inp.m - 1) // 2):
                plus += inp.R
        else:
            if k == inp.m // 2:
                plus, minus = inp.vhat
                plus += inp.l
        out[k] = (plus, minus)
    return out


def _basis_index(labels):
    return {lab: i for i, lab in enumerate(labels)}


def _fill(matrix, rows, cols, entries):
    ri = _basis_index(rows)
    ci = _basis_index(cols)
    for (r, c), v in entries.items():
        matrix[ri[r]][ci[c]] = GaussianScalar.coerce(v)


def _matrix(rows, cols, entries):
    out = [[G_ZERO] * len(cols) for _ in range(len(rows))]
    _fill(out, rows, cols, entries)
    return ExactMatrix(out, cols=len(cols))


def odp_semistable_model(res: ResolutionData) -> DegenerationData:
    """Two-depth semistable model of a smoothing of l ordinary double points:
    the resolution glued with quadric m-folds E_i along the exceptional
    quadrics Q_i."""
    if res.m % 2:
        return _odp_model_odd(res)
    return _odp_model_even(res)


def _odp_model_odd(res: ResolutionData) -> DegenerationData:
    m, l, rho = res.m, res.l, res.rho
    assert m == 3
    w = rho.cols  # l - R relation classes
    pairs = len(res.signs)

    comps = ["X"] + [f"E{i}" for i in range(l)]
    q2 = ["g"] + [f"e{i}" for i in range(l)] + [f"w{t}" for t in range(w)] \
        + [f"hE{i}" for i in range(l)]
    q3 = [f"a{j}" for j in range(pairs)]  # one label per symplectic pair
    qA = [f"A{i}" for i in range(l)]
    qB = [f"B{i}" for i in range(l)]
    quad2 = [x for i in range(l) for x in (f"A{i}", f"B{i}")]

    n2 = len(q2)
    p3 = [[G_ZERO] * (2 * pairs) for _ in range(2 * pairs)]
    f3 = [[G_ZERO] * (2 * pairs) for _ in range(2 * pairs)]
    types3 = []
    for j, s in enumerate(res.signs):
        p3[2 * j][2 * j + 1] = GaussianScalar.coerce(s)
        p3[2 * j + 1][2 * j] = GaussianScalar.coerce(-s)
        f3[2 * j][2 * j] = G_ONE
        f3[2 * j][2 * j + 1] = G_ONE
        f3[2 * j + 1][2 * j] = I
        f3[2 * j + 1][2 * j + 1] = -I
        types3 += [(2, 1), (1, 2)]
    depth1 = StratumCohomology(1, {
        0: {"types": [(0, 0)] * len(comps), "pairing": ExactMatrix.identity(len(comps))},
        2: {"types": [(1, 1)] * n2, "pairing": ExactMatrix.identity(n2)},
        3: {"types": types3, "pairing": ExactMatrix(p3, cols=2 * pairs),
            "frame": ExactMatrix(f3, cols=2 * pairs)},
        4: {"types": [(2, 2)] * n2, "pairing": ExactMatrix.identity(n2)},
        6: {"types": [(3, 3)] * len(comps), "pairing": ExactMatrix.identity(len(comps))},
    })
    depth2 = StratumCohomology(2, {
        0: {"types": [(0, 0)] * l, "pairing": ExactMatrix.identity(l)},
        2: {"types": [(1, 1)] * (2 * l),
            "pairing": _matrix(quad2, quad2, {
                **{(f"A{i}", f"B{i}"): 1 for i in range(l)},
                **{(f"B{i}", f"A{i}"): 1 for i in range(l)},
            })},
        4: {"types": [(2, 2)] * l, "pairing": ExactMatrix.identity(l)},
    })

    quads = [f"Q{i}" for i in range(l)]
    rest0 = _matrix(quads, comps, {
        **{(f"Q{i}", "X"): -1 for i in range(l)},
        **{(f"Q{i}", f"E{i}"): 1 for i in range(l)},
    })
    rest2_entries = {}
    for i in range(l):
        rest2_entries[(f"A{i}", f"e{i}")] = 1
        rest2_entries[(f"B{i}", f"e{i}")] = 1
        rest2_entries[(f"A{i}", f"hE{i}")] = 1
        rest2_entries[(f"B{i}", f"hE{i}")] = 1
        for t in range(w):
            r = rho.entries[i][t]
            rest2_entries[(f"A{i}", f"w{t}")] = -r
            rest2_entries[(f"B{i}", f"w{t}")] = r
    rest2 = _matrix(quad2, q2, rest2_entries)
    rest4 = _matrix(quads, q2, {
        **{(f"Q{i}", f"e{i}"): -1 for i in range(l)},
        **{(f"Q{i}", f"hE{i}"): 1 for i in range(l)},
    })
    gys0 = _matrix(q2, quads, {
        **{(f"e{i}", f"Q{i}"): -1 for i in range(l)},
        **{(f"hE{i}", f"Q{i}"): 1 for i in range(l)},
    })
    gys2_entries = {}
    for i in range(l):
        gys2_entries[(f"e{i}", f"A{i}")] = 1
        gys2_entries[(f"e{i}", f"B{i}")] = 1
        gys2_entries[(f"hE{i}", f"A{i}")] = 1
        gys2_entries[(f"hE{i}", f"B{i}")] = 1
        for t in range(w):
            r = rho.entries[i][t]
            gys2_entries[(f"w{t}", f"A{i}")] = r
            gys2_entries[(f"w{t}", f"B{i}")] = -r
    gys2 = _matrix(q2, quad2, gys2_entries)
    gys4 = _matrix(comps, quads, {
        **{("X", f"Q{i}"): -1 for i in range(l)},
        **{(f"E{i}", f"Q{i}"): 1 for i in range(l)},
    })
    maps = {}
    if l:
        maps = {
            "gysin": {(1, 0): gys0, (1, 2): gys2, (1, 4): gys4},
            "restriction": {(1, 0): rest0, (1, 2): rest2, (1, 4): rest4},
        }
        return DegenerationData(m, [depth1, depth2], maps["gysin"], maps["restriction"])
    return DegenerationData(m, [depth1])


def _odp_model_even(res: ResolutionData) -> DegenerationData:
    m, l = res.m, res.l
    assert m == 4
    hv = len(res.vhat_signs)

    comps = ["X"] + [f"E{i}" for i in range(l)]
    q2 = ["g"] + [f"e{i}" for i in range(l)] + [f"hE{i}" for i in range(l)]
    mid = [f"v{a}" for a in range(hv)] + [f"q{i}" for i in range(l)] \
        + [x for i in range(l) for x in (f"A{i}", f"B{i}")]
    pmid_entries = {}
    for a, s in enumerate(res.vhat_signs):
        pmid_entries[(f"v{a}", f"v{a}")] = s
    for i in range(l):
        pmid_entries[(f"q{i}", f"q{i}")] = -2
        pmid_entries[(f"A{i}", f"A{i}")] = 1
        pmid_entries[(f"B{i}", f"B{i}")] = 1
    depth1 = StratumCohomology(1, {
        0: {"types": [(0, 0)] * len(comps), "pairing": ExactMatrix.identity(len(comps))},
        2: {"types": [(1, 1)] * len(q2), "pairing": ExactMatrix.identity(len(q2))},
        4: {"types": [(2, 2)] * len(mid), "pairing": _matrix(mid, mid, pmid_entries)},
        6: {"types": [(3, 3)] * len(q2), "pairing": ExactMatrix.identity(len(q2))},
        8: {"types": [(4, 4)] * len(comps), "pairing": ExactMatrix.identity(len(comps))},
    })
    depth2 = StratumCohomology(2, {
        0: {"types": [(0, 0)] * l, "pairing": ExactMatrix.identity(l)},
        2: {"types": [(1, 1)] * l, "pairing": ExactMatrix.identity(l)},
        4: {"types": [(2, 2)] * l, "pairing": ExactMatrix.identity(l)},
        6: {"types": [(3, 3)] * l, "pairing": ExactMatrix.identity(l)},
    })
    quads = [f"Q{i}" for i in range(l)]
    rest0 = _matrix(quads, comps, {
        **{(f"Q{i}", "X"): -1 for i in range(l)},
        **{(f"Q{i}", f"E{i}"): 1 for i in range(l)},
    })
    rest2 = _matrix(quads, q2, {
        **{(f"Q{i}", f"e{i}"): 1 for i in range(l)},
        **{(f"Q{i}", f"hE{i}"): 1 for i in range(l)},
    })
    rest4 = _matrix(quads, mid, {
        **{(f"Q{i}", f"q{i}"): -2 for i in range(l)},
        **{(f"Q{i}", f"A{i}"): 1 for i in range(l)},
        **{(f"Q{i}", f"B{i}"): 1 for i in range(l)},
    })
    rest6 = _matrix(quads, q2, {
        **{(f"Q{i}", f"e{i}"): -1 for i in range(l)},
        **{(f"Q{i}", f"hE{i}"): 1 for i in range(l)},
    })
    gys0 = _matrix(q2, quads, {
        **{(f"e{i}", f"Q{i}"): -1 for i in range(l)},
        **{(f"hE{i}", f"Q{i}"): 1 for i in range(l)},
    })
    gys2 = _matrix(mid, quads, {
        **{(f"q{i}", f"Q{i}"): 1 for i in range(l)},
        **{(f"A{i}", f"Q{i}"): 1 for i in range(l)},
        **{(f"B{i}", f"Q{i}"): 1 for i in range(l)},
    })
    gys4 = _matrix(q2, quads, {
        **{(f"e{i}", f"Q{i}"): 1 for i in range(l)},
        **{(f"hE{i}", f"Q{i}"): 1 for i in range(l)},
    })
    gys6 = _matrix(comps, quads, {
        **{("X", f"Q{i}"): -1 for i in range(l)},
        **{(f"E{i}", f"Q{i}"): 1 for i in range(l)},
    })
    if l:
        gysin = {(1, 0): gys0, (1, 2): gys2, (1, 4): gys4, (1, 6): gys6}
        restriction = {(1, 0): rest0, (1, 2): rest2, (1, 4): rest4, (1, 6): rest6}
        return DegenerationData(m, [depth1, depth2], gysin, restriction)
    return DegenerationData(m, [depth1])


# ---------------------------------------------------------------------------
# Kahler-type index formula
# ---------------------------------------------------------------------------

def kahler_index_formula(hodge: dict, m: int, p: int):
    """Signature of S(C., conj .) on H^{p,m-p} for a degeneration whose
    central fiber carries a class restricting to a Kahler class on each
    component: alternating sums of Hodge numbers down the (p,q) diagonal."""
    for (a, b), v in hodge.items():
        assert hodge.get((b, a), 0) == v, "Hodge numbers must be symmetric"

    def h(a, b):
        if a < 0 or b < 0:
            return 0
        return hodge.get((a, b), 0)

    plus = minus = 0
    r = 0
    while p - 2 * r >= 0:
        d1 = h(p - 2 * r, m - p - 2 * r) - h(p - 2 * r - 1, m - p - 2 * r - 1)
        d2 = h(p - 2 * r - 1, m - p - 2 * r - 1) - h(p - 2 * r - 2, m - p - 2 * r - 2)
        if d1 < 0 or d2 < 0:
            raise ValueError(
                f"negative difference in the Lefschetz chain at p={p}, r={r}"
            )
        plus += d1
        minus += d2
        r += 1
    return plus, minus


def full_signature(hodge: dict, m: int) -> int:
    """Signature of the cup product on an even-dimensional Kahler-type
    fiber: the alternating sum of all Hodge numbers."""
    assert m % 2 == 0
    return sum((-1) ** a * v for (a, b), v in hodge.items())


def k3_hodge_numbers() -> dict:
    return {(0, 0): 1, (1, 1): 20, (2, 0): 1, (0, 2): 1, (2, 2): 1}


# ---------------------------------------------------------------------------
# Lefschetz fibrations and fiber products
# ---------------------------------------------------------------------------

class LefschetzInput:
    """Data of two Lefschetz fibrations with disjoint critical loci:
    dimensions m_i of the total spaces X_i, critical counts d_i, Betti
    vectors of the smooth fibers Y_i, the middle vanishing dimension of Y_i,
    and the middle vanishing dimension of the base locus B_i."""

    __slots__ = ("m1", "m2", "d1", "d2", "betti1", "betti2",
                 "van1", "van2", "van_b1", "van_b2")

    def __init__(self, m1, m2, d1, d2, betti1, betti2, van1, van2,
                 van_b1=0, van_b2=0):
        assert len(betti1) == 2 * (m1 - 1) + 1
        assert len(betti2) == 2 * (m2 - 1) + 1
        self.m1, self.m2 = m1, m2
        self.d1, self.d2 = d1, d2
        self.betti1 = list(betti1)
        self.betti2 = list(betti2)
        self.van1, self.van2 = van1, van2
        self.van_b1, self.van_b2 = van_b1, van_b2

    def factor(self, i):
        assert i in (1, 2)
        if i == 1:
            return self.m1, self.d1, self.betti1, self.van1, self.van_b1
        return self.m2, self.d2, self.betti2, self.van2, self.van_b2


def _get(betti, k):
    if k < 0 or k >= len(betti):
        return 0
    return betti[k]


def lefschetz_middle_betti(inp: LefschetzInput, i: int):
    """Middle Betti number of the blown-up Lefschetz fibration:
    d + h^m(Y) + h^{m-2}(Y) - 2 h_van^{m-1}(Y)."""
    m, d, bY, van, _ = inp.factor(i)
    value = d + _get(bY, m) + _get(bY, m - 2) - 2 * van
    if isinstance(value, int) and value < 0:
        raise ValueError("inconsistent Lefschetz input: negative middle Betti")
    return value


def _kunneth(b1, b2, k):
    if k < 0:
        return 0
    return sum(_get(b1, j) * _get(b2, k - j) for j in range(0, k + 1))


def fiber_product_readings(inp: LefschetzInput) -> dict:
    """Middle-degree Betti number of the fiber product, in both readings of
    the closed formula.  The symmetric reading is the one consistent with
    the tensor-ring dimension count; the printed reading replaces the term
    d2 h^{m1-2}(Y1) by d2 h^{m1-1}(Y1)."""
    m1, d1, b1, v1, _ = inp.factor(1)
    m2, d2, b2, v2, _ = inp.factor(2)
    common = (
        _kunneth(b1, b2, m1 + m2 - 2)
        - v1 * _get(b2, m2 - 1) - _get(b1, m1 - 1) * v2 + v1 * v2
        + _kunneth(b1, b2, m1 + m2 - 4)
        - v1 * _get(b2, m2 - 3) - _get(b1, m1 - 3) * v2
        + d1 * _get(b2, m2 - 2)
        - 2 * (v1 * _get(b2, m2 - 2) + _get(b1, m1 - 2) * v2)
    )
    return {
        "symmetric": common + d2 * _get(b1, m1 - 2),
        "printed": common + d2 * _get(b1, m1 - 1),
    }


def fiber_product_middle_betti(inp: LefschetzInput):
    return fiber_product_readings(inp)["symmetric"]


def _derived_betti(inp: LefschetzInput, i: int):
    """Betti vectors of the base locus B, the pencil total space X and the
    blown-up fibration, derived from the fiber data by weak Lefschetz,
    Poincare duality and the middle Betti formula."""
    m, d, bY, van, van_b = inp.factor(i)
    nB = m - 2
    bB = [0] * (2 * nB + 1)
    for k in range(0, nB):
        bB[k] = _get(bY, k)
        bB[2 * nB - k] = _get(bY, k)
    bB[nB] = _get(bY, nB) + van_b
    bX = [0] * (2 * m + 1)
    for k in range(0, m - 1):
        bX[k] = _get(bY, k)
        bX[2 * m - k] = _get(bY, k)
    fixed = _get(bY, m - 1) - van
    bX[m - 1] = fixed
    bX[m + 1] = fixed
    bX[m] = lefschetz_middle_betti(inp, i) - _get(bB, m - 2)
    bXt = [bX[k] + _get(bB, k - 2) for k in range(0, 2 * m + 1)]
    return bB, bX, bXt


def fiber_product_dim_check(inp: LefschetzInput) -> dict:
    """Check that the fiber-product middle Betti number equals the dimension
    of the middle part of the tensor ring of the two fibrations."""
    M = inp.m1 + inp.m2
    bB1, bX1, bXt1 = _derived_betti(inp, 1)
    bB2, bX2, bXt2 = _derived_betti(inp, 2)
    tensor = (
        _kunneth(bXt1, bXt2, M - 2)
        - _kunneth(bB1, bB2, M - 6)
        - _kunneth(bB1, bX2, M - 4)
        - _kunneth(bX1, bB2, M - 4)
        + _kunneth(bB1, bB2, M - 4)
        - inp.van_b1 * inp.van_b2
    )
    readings = fiber_product_readings(inp)
    value = readings["symmetric"]
    diff = value - tensor
    try:
        ok = bool(diff == 0)
    except TypeError:
        ok = False
    return {
        "ok": ok,
        "fiber_product": value,
        "tensor_ring": tensor,
        "printed_reading": readings["printed"],
    }


def schoen_input() -> LefschetzInput:
    """Two rational elliptic surfaces fibered over the line: 12 singular
    fibers each, elliptic-curve fibers, base locus of 9 points."""
    return LefschetzInput(
        m1=2, m2=2, d1=12, d2=12,
        betti1=[1, 2, 1], betti2=[1, 2, 1],
        van1=2, van2=2, van_b1=8, van_b2=8,
    )


# ---------------------------------------------------------------------------
# non-Kahler Calabi-Yau index tables
# ---------------------------------------------------------------------------

def sano_negative_count(m: int, a: int) -> int:
    """Number of negative directions of S(C., conj .) at the distinguished
    middle rows of the m-fold series built from fiber products."""
    assert m >= 3 and a >= 1
    if m % 2:
        if m % 4 == 3:
            return 0
        return 9 * (27 * a * a - 2 * a + 5) + a + 6
    if m == 4:
        return a + 1
    return a + 2


def sano_index_table(m: int, a: int, hodge=None) -> dict:
    """Per-k rows of the middle Hodge index: negatives are closed-form, and
    positives are h^{k,m-k} minus negatives when the Hodge numbers are
    supplied (hodge maps k to h^{k,m-k})."""
    assert m >= 3 and a >= 1
    neg = sano_negative_count(m, a)
    if m % 2:
        special = {(m + 1) // 2, (m - 1) // 2}
    else:
        special = {m // 2}
    out = {}
    for k in range(0, m + 1):
        n_k = neg if k in special else 0
        if hodge is None:
            out[k] = {"negative": n_k}
        else:
            h = hodge.get(k, 0)
            assert h >= n_k, f"declared h^{k},{m - k} smaller than negatives"
            out[k] = {"negative": n_k, "positive": h - n_k}
    return out


def hashimoto_sano_pic_fixture(a: int) -> dict:
    """The K3 gluing data behind the threefold series X_3(a): the Picard
    action of the automorphism and the (2,2,2) intersection form.  Checks
    that the action is unimodular, preserves the form, and that the glued
    degree-4 composite has full rank 3."""
    assert a >= 1
    M = ExactMatrix.from_rational([
        [1, 4 * a * a - 2 * a, 4 * a * a + 2 * a],
        [0, 1 - 2 * a, -2 * a],
        [0, 2 * a, 1 + 2 * a],
    ])
    G = ExactMatrix.from_rational([[0, 2, 2], [2, 0, 2], [2, 2, 0]])
    det = (M.entries[1][1] * M.entries[2][2] - M.entries[1][2] * M.entries[2][1])
    det = M.entries[0][0] * det
    preserved = (M.transpose() @ G @ M) == G
    composite_rank = rank(G @ M)
    return {
        "matrix": M,
        "form": G,
        "det": det,
        "unimodular": det in (GaussianScalar(1), GaussianScalar(-1)),
        "form_preserved": preserved,
        "composite_rank": composite_rank,
        "ok": preserved and composite_rank == 3,
    }


# ---------------------------------------------------------------------------
# cone singularities over cubic surfaces
# ---------------------------------------------------------------------------

def o16_evaluator(defect: int, resolution_middle: dict) -> dict:
    """Degeneration of threefolds whose central fiber has a cone singularity
    over a cubic surface: the criterion holds exactly when the defect is
    zero, with the weight-4 graded piece dropping by the defect against its
    6-dimensional dual.  resolution_middle maps k to the signature of the
    middle form on H^{k,3-k} of the resolution."""
    assert defect >= 0
    verdict = defect == 0
    gr4_dim = 6 - defect
    table = {k: tuple(v) for k, v in sorted(resolution_middle.items())}
    polarized = verdict and all(minus == 0 for (_, minus) in table.values())
    return {
        "verdict": verdict,
        "gr4_dim": gr4_dim,
        "gr2_dim": 6,
        "criterion_gap": defect,
        "table": table,
        "polarized": polarized,
    }
