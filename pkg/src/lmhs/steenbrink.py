"""Weight spectral sequence of a one-parameter semistable degeneration, built
from combinatorial central-fiber data: stratum cohomology with Poincaré
pairings, Gysin and restriction maps.

Provides the E1/E2 pages, the weight-filtration criterion (the identity-shift
maps on E2 must be isomorphisms), the psi pairings on E1 terms, exact E2
signature tables on monodromy-primitive parts, and the nearby-fiber
Hodge-index report.  A split limit mixed Hodge structure can be extracted in
E2 class coordinates for cross-checking against the abstract machinery.
"""

from __future__ import annotations

from fractions import Fraction

from .exactlin import (
    ExactMatrix,
    G_ZERO,
    GaussianScalar,
    Subspace,
    gaussian_from_str,
    gaussian_to_str,
    hermitian_check,
    hermitian_signature,
    i_power,
    image,
    kernel,
    rank,
    rref,
    solve,
)
from .filtration import DecreasingFiltration, IncreasingFiltration
from .mhs import MHSData, SignatureTable, epsilon_sign, nearby_index_formula


def _matrix_to_json(M: ExactMatrix) -> list[list[str]]:
    return [[gaussian_to_str(GaussianScalar.coerce(e)) for e in row]
            for row in M.entries]


def _matrix_from_json(rows: list[list[str]], cols: int | None = None) -> ExactMatrix:
    return ExactMatrix([[gaussian_from_str(e) for e in row] for row in rows],
                       cols=cols)


def _inverse(M: ExactMatrix) -> ExactMatrix:
    n = M.rows
    assert M.cols == n
    aug = M.hstack(ExactMatrix.identity(n))
    R, pivots, _ = rref(aug)
    assert pivots == list(range(n)), "singular matrix"
    return ExactMatrix([row[n:] for row in R.entries], cols=n)


class StratumCohomology:
    """Cohomology of the depth-l stratum E(l), one merged space per degree.

    Per degree q: dimension, type tags (p', q') with p'+q' = q, the Poincaré
    pairing matrix against degree 2n-q (n the complex dimension of E(l)), and
    an optional complex frame whose columns form a type-split basis (required
    whenever some tag has p' != q'; conjugating the frame must permute its
    columns by the tag swap).
    """

    __slots__ = ("depth", "cohomology")

    def __init__(self, depth: int, cohomology: dict):
        assert depth >= 1
        entries = {}
        for q, entry in cohomology.items():
            types = [tuple(t) for t in entry["types"]]
            dim = entry.get("dim", len(types))
            assert dim == len(types), f"dim/type mismatch at depth {depth} q {q}"
            pairing = entry.get("pairing")
            frame = entry.get("frame")
            entries[q] = {
                "dim": dim,
                "types": types,
                "pairing": pairing,
                "frame": frame,
            }
        self.depth = depth
        self.cohomology = entries

    def dim(self, q: int) -> int:
        entry = self.cohomology.get(q)
        return entry["dim"] if entry else 0

    def types(self, q: int) -> list[tuple[int, int]]:
        entry = self.cohomology.get(q)
        return entry["types"] if entry else []

    def pairing(self, q: int) -> ExactMatrix | None:
        entry = self.cohomology.get(q)
        return entry["pairing"] if entry else None

    def frame(self, q: int) -> ExactMatrix:
        entry = self.cohomology.get(q)
        if entry is None:
            return ExactMatrix.identity(0)
        if entry["frame"] is not None:
            return entry["frame"]
        return ExactMatrix.identity(entry["dim"])

    def to_json(self) -> dict:
        out = {"depth": self.depth, "cohomology": []}
        for q in sorted(self.cohomology):
            e = self.cohomology[q]
            item = {"q": q, "dim": e["dim"], "types": [list(t) for t in e["types"]]}
            if e["pairing"] is not None:
                item["pairing"] = _matrix_to_json(e["pairing"])
            if e["frame"] is not None:
                item["frame"] = _matrix_to_json(e["frame"])
            out["cohomology"].append(item)
        return out

    @staticmethod
    def from_json(blob: dict) -> "StratumCohomology":
        cohomology = {}
        for item in blob["cohomology"]:
            entry = {"dim": item["dim"], "types": [tuple(t) for t in item["types"]]}
            if "pairing" in item:
                entry["pairing"] = _matrix_from_json(item["pairing"])
            if "frame" in item:
                entry["frame"] = _matrix_from_json(item["frame"])
            cohomology[item["q"]] = entry
        return StratumCohomology(blob["depth"], cohomology)


class DegenerationData:
    """Central-fiber data: fiber dimension m, strata by depth, Gysin maps
    gamma (depth l+1 -> depth l, degree +2, type (1,1)) and restriction maps
    theta (depth l -> depth l+1, degree and type preserved).

    gysin[(l, q)]: H^q(E(l+1)) -> H^{q+2}(E(l));
    restriction[(l, q)]: H^q(E(l)) -> H^q(E(l+1)).  Missing keys mean zero.
    """

    __slots__ = ("m", "strata", "gysin", "restriction")

    def __init__(self, m: int, strata, gysin=None, restriction=None):
        self.m = m
        self.strata = {s.depth: s for s in strata}
        self.gysin = dict(gysin or {})
        self.restriction = dict(restriction or {})

    def max_depth(self) -> int:
        return max(self.strata) if self.strata else 0

    def stratum_dim(self, depth: int, q: int) -> int:
        s = self.strata.get(depth)
        return s.dim(q) if s else 0

    def complex_dim(self, depth: int) -> int:
        return self.m - depth + 1

    def gysin_matrix(self, depth: int, q: int) -> ExactMatrix:
        """H^q(E(depth+1)) -> H^{q+2}(E(depth))."""
        M = self.gysin.get((depth, q))
        if M is None:
            return ExactMatrix.zero(
                self.stratum_dim(depth, q + 2), self.stratum_dim(depth + 1, q)
            )
        return M

    def restriction_matrix(self, depth: int, q: int) -> ExactMatrix:
        """H^q(E(depth)) -> H^q(E(depth+1))."""
        M = self.restriction.get((depth, q))
        if M is None:
            return ExactMatrix.zero(
                self.stratum_dim(depth + 1, q), self.stratum_dim(depth, q)
            )
        return M

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "strata": [self.strata[l].to_json() for l in sorted(self.strata)],
            "gysin": [
                {"depth": l, "q": q, "matrix": _matrix_to_json(M)}
                for (l, q), M in sorted(self.gysin.items())
            ],
            "restriction": [
                {"depth": l, "q": q, "matrix": _matrix_to_json(M)}
                for (l, q), M in sorted(self.restriction.items())
            ],
        }

    @staticmethod
    def from_json(blob: dict) -> "DegenerationData":
        strata = [StratumCohomology.from_json(s) for s in blob["strata"]]
        gysin = {
            (g["depth"], g["q"]): _matrix_from_json(g["matrix"])
            for g in blob.get("gysin", [])
        }
        restriction = {
            (t["depth"], t["q"]): _matrix_from_json(t["matrix"])
            for t in blob.get("restriction", [])
        }
        return DegenerationData(blob["m"], strata, gysin, restriction)


class ValidationReport:
    def __init__(self, failures: list[str]):
        self.failures = list(failures)

    @property
    def ok(self) -> bool:
        return not self.failures

    def __repr__(self):
        return (
            "ValidationReport(ok)"
            if self.ok
            else f"ValidationReport(failures={self.failures!r})"
        )


def _conj_permutation(frame: ExactMatrix, types: list) -> list | None:
    """Permutation sigma with conj(column j) == column sigma(j) and swapped
    type tag, or None if none exists."""
    cols = frame.columns()
    sigma = []
    for j, col in enumerate(cols):
        cc = [e.conj() for e in col]
        match = None
        for j2, col2 in enumerate(cols):
            if types[j2] == (types[j][1], types[j][0]) and col2 == cc:
                match = j2
                break
        if match is None:
            return None
        sigma.append(match)
    return sigma


def validate_degeneration_data(data: DegenerationData) -> ValidationReport:
    failures = []
    m = data.m
    if not data.strata:
        return ValidationReport(["no strata"])
    depths = sorted(data.strata)
    if depths != list(range(1, len(depths) + 1)):
        failures.append(f"stratum depths {depths} are not contiguous from 1")
    for depth, s in sorted(data.strata.items()):
        n = data.complex_dim(depth)
        for q, entry in sorted(s.cohomology.items()):
            tag = f"depth {depth} degree {q}"
            if not (0 <= q <= 2 * n):
                failures.append(f"{tag}: degree out of range for dimension {n}")
                continue
            types = entry["types"]
            for (a, b) in types:
                if a + b != q:
                    failures.append(f"{tag}: type ({a},{b}) does not sum to {q}")
            if sorted(types) != sorted((b, a) for (a, b) in types):
                failures.append(f"{tag}: type multiset not conjugation-symmetric")
            dual_dim = s.dim(2 * n - q)
            if entry["dim"] != dual_dim:
                failures.append(f"{tag}: Poincare dual dimension mismatch")
            P = entry["pairing"]
            if entry["dim"]:
                if P is None:
                    failures.append(f"{tag}: missing pairing")
                elif P.rows != entry["dim"] or P.cols != dual_dim:
                    failures.append(f"{tag}: pairing shape mismatch")
                elif rank(P) != min(P.rows, P.cols):
                    failures.append(f"{tag}: degenerate pairing")
                else:
                    Pd = s.pairing(2 * n - q)
                    sign = -1 if (q * (2 * n - q)) % 2 else 1
                    if Pd is not None and Pd != P.transpose().scale(
                        GaussianScalar(sign)
                    ):
                        failures.append(f"{tag}: pairing transpose inconsistency")
            F = entry["frame"]
            if F is not None:
                if F.rows != entry["dim"] or F.cols != entry["dim"]:
                    failures.append(f"{tag}: frame shape mismatch")
                elif rank(F) != F.cols:
                    failures.append(f"{tag}: singular frame")
                elif _conj_permutation(F, types) is None:
                    failures.append(f"{tag}: frame conjugation does not swap types")
            else:
                if any(a != b for (a, b) in types):
                    failures.append(f"{tag}: frame required for types with p' != q'")
    # gamma raises type by (1,1), theta preserves type (checked in frame coords)
    for (depth, q), M in sorted(data.gysin.items()):
        tag = f"gysin depth {depth} degree {q}"
        want = (data.stratum_dim(depth, q + 2), data.stratum_dim(depth + 1, q))
        if (M.rows, M.cols) != want:
            failures.append(f"{tag}: shape {(M.rows, M.cols)} != {want}")
            continue
        failures.extend(_type_shift_failures(data, depth + 1, q, depth, q + 2, M, 1, tag))
    for (depth, q), M in sorted(data.restriction.items()):
        tag = f"restriction depth {depth} degree {q}"
        want = (data.stratum_dim(depth + 1, q), data.stratum_dim(depth, q))
        if (M.rows, M.cols) != want:
            failures.append(f"{tag}: shape {(M.rows, M.cols)} != {want}")
            continue
        failures.extend(_type_shift_failures(data, depth, q, depth + 1, q, M, 0, tag))
    failures.extend(_adjointness_failures(data))
    failures.extend(_d1_square_failures(data))
    return ValidationReport(failures)


def _type_shift_failures(data, src_depth, src_q, tgt_depth, tgt_q, M, shift, tag):
    src = data.strata.get(src_depth)
    tgt = data.strata.get(tgt_depth)
    if src is None or tgt is None or M.rows == 0 or M.cols == 0:
        return []
    Fs = src.frame(src_q)
    Ft = tgt.frame(tgt_q)
    T = _inverse(Ft) @ M.map(GaussianScalar.coerce) @ Fs
    st = src.types(src_q)
    tt = tgt.types(tgt_q)
    out = []
    for i in range(T.rows):
        for j in range(T.cols):
            if T.entries[i][j].is_zero():
                continue
            if (tt[i][0] - st[j][0], tt[i][1] - st[j][1]) != (shift, shift):
                out.append(
                    f"{tag}: entry ({i},{j}) shifts type by "
                    f"({tt[i][0] - st[j][0]},{tt[i][1] - st[j][1]})"
                )
                return out
    return out


def _adjointness_failures(data: DegenerationData) -> list[str]:
    """<gamma x, z> = sigma <x, theta z> blockwise, sigma a sign per block."""
    out = []
    for (depth, q), G in sorted(data.gysin.items()):
        n = data.complex_dim(depth)
        qd = 2 * n - q - 2  # complementary degree on E(depth)
        s = data.strata.get(depth)
        s2 = data.strata.get(depth + 1)
        if s is None or s2 is None:
            continue
        P = s.pairing(q + 2)
        P2 = s2.pairing(q)
        if P is None or P2 is None:
            continue
        T = data.restriction_matrix(depth, qd)
        lhs = G.transpose() @ P.map(GaussianScalar.coerce)
        rhs = P2.map(GaussianScalar.coerce) @ T
        if lhs != rhs and lhs != -rhs:
            out.append(
                f"gysin/restriction adjointness fails at depth {depth} degree {q}"
            )
    return out


def _d1_square_failures(data: DegenerationData) -> list[str]:
    out = []
    for d in range(0, 2 * data.m + 1):
        for r in range(-d - 1, d + 2):
            M1 = d1_matrix(data, d, r)
            M2 = d1_matrix(data, d + 1, r - 1)
            if M1.cols and M2.rows and not (M2 @ M1).is_zero():
                out.append(f"d1 o d1 != 0 at degree {d}, column {-r}")
    return out


class Summand:
    """One twisted stratum summand H^q(E(depth)) inside an E1 term."""

    __slots__ = ("k", "depth", "q", "dim", "twist")

    def __init__(self, k, depth, q, dim, twist):
        self.k = k
        self.depth = depth
        self.q = q
        self.dim = dim
        self.twist = twist

    def __repr__(self):
        return (
            f"Summand(k={self.k}, depth={self.depth}, q={self.q}, "
            f"dim={self.dim}, twist={self.twist})"
        )


def e1_summands(data: DegenerationData, d: int, r: int) -> list[Summand]:
    """Summands of E1^{-r, d+r}: H^{d-r-2k}(E(2k+r+1)) with twist r+k, for
    k >= max(0, -r)."""
    out = []
    k = max(0, -r)
    while True:
        depth = 2 * k + r + 1
        q = d - r - 2 * k
        if depth > data.max_depth() or q < 0:
            break
        dim = data.stratum_dim(depth, q)
        if dim:
            out.append(Summand(k, depth, q, dim, r + k))
        k += 1
    return out


class E1Page:
    def __init__(self, data: DegenerationData, d: int):
        self.d = d
        self.terms = {}
        for r in range(-d, d + 1):
            summands = e1_summands(data, d, r)
            if summands:
                self.terms[r] = summands

    def dim(self, r: int) -> int:
        return sum(s.dim for s in self.terms.get(r, []))


def e1_page(data: DegenerationData, d: int) -> E1Page:
    return E1Page(data, d)


def _offsets(summands: list[Summand]) -> list[int]:
    offs = [0]
    for s in summands:
        offs.append(offs[-1] + s.dim)
    return offs


def d1_matrix(data: DegenerationData, d: int, r: int) -> ExactMatrix:
    """Block matrix of d1 = -gamma + theta from E1^{-r, d+r} (degree d) to
    E1^{-r+1, (d+1)+(r-1)} (degree d+1).  Components whose target summand
    falls outside the truncated range are dropped.
    """
    src = e1_summands(data, d, r)
    tgt = e1_summands(data, d + 1, r - 1)
    so = _offsets(src)
    to = _offsets(tgt)
    tgt_index = {(s.depth, s.q): i for i, s in enumerate(tgt)}
    rows = to[-1]
    cols = so[-1]
    out = [[G_ZERO] * cols for _ in range(rows)]

    def put(block: ExactMatrix, ti: int, si: int, sign: int):
        if block.rows == 0 or block.cols == 0:
            return
        for i in range(block.rows):
            for j in range(block.cols):
                e = GaussianScalar.coerce(block.entries[i][j])
                if sign < 0:
                    e = -e
                out[to[ti] + i][so[si] + j] = out[to[ti] + i][so[si] + j] + e

    for si, s in enumerate(src):
        # theta: E(depth) -> E(depth+1), same degree, k -> k+1
        ti = tgt_index.get((s.depth + 1, s.q))
        if ti is not None:
            put(data.restriction_matrix(s.depth, s.q), ti, si, +1)
        # gamma: E(depth) -> E(depth-1), degree +2, k -> k
        ti = tgt_index.get((s.depth - 1, s.q + 2))
        if ti is not None:
            put(data.gysin_matrix(s.depth - 1, s.q), ti, si, -1)
    return ExactMatrix(out, cols=cols)


def _term_frame(data: DegenerationData, summands: list[Summand]) -> ExactMatrix:
    n = sum(s.dim for s in summands)
    out = [[G_ZERO] * n for _ in range(n)]
    off = 0
    for s in summands:
        F = data.strata[s.depth].frame(s.q)
        for i in range(s.dim):
            for j in range(s.dim):
                out[off + i][off + j] = GaussianScalar.coerce(F.entries[i][j])
        off += s.dim
    return ExactMatrix(out, cols=n)


def _term_sectors(data: DegenerationData, summands: list[Summand]) -> dict:
    """Column indices of each limit-type sector (P, Q) = (p'+twist, q'+twist)
    in the frame coordinates of the term."""
    sectors: dict[tuple[int, int], list[int]] = {}
    off = 0
    for s in summands:
        for j, (a, b) in enumerate(data.strata[s.depth].types(s.q)):
            sectors.setdefault((a + s.twist, b + s.twist), []).append(off + j)
        off += s.dim
    return sectors


def _transport_matrix(src: list[Summand], tgt: list[Summand]) -> ExactMatrix:
    """Identity transport matching summands by (depth, q).  Source summands
    whose shifted index falls outside the target's truncated range are
    dropped; this truncation is what makes the induced shift nilpotent."""
    so = _offsets(src)
    to = _offsets(tgt)
    tgt_index = {(s.depth, s.q): i for i, s in enumerate(tgt)}
    out = [[G_ZERO] * so[-1] for _ in range(to[-1])]
    for si, s in enumerate(src):
        ti = tgt_index.get((s.depth, s.q))
        if ti is None:
            continue
        assert tgt[ti].dim == s.dim
        for i in range(s.dim):
            out[to[ti] + i][so[si] + i] = GaussianScalar.coerce(1)
    return ExactMatrix(out, cols=so[-1])


def _quotient_reps(Z: Subspace, B: Subspace) -> ExactMatrix:
    """Deterministic representatives of Z/B: columns of the canonical Z basis
    that are independent modulo B."""
    cur = B
    chosen = []
    for c in Z.basis.columns():
        if not cur.contains_vector(c):
            chosen.append(c)
            cur = cur.add(
                Subspace(Z.ambient_dim, ExactMatrix.from_columns([c], rows=Z.ambient_dim))
            )
    assert len(chosen) == Z.dim - B.dim
    return ExactMatrix.from_columns(chosen, rows=Z.ambient_dim)


class E2Term:
    """E2^{-r, d+r} with rational class representatives and per-sector data."""

    __slots__ = (
        "d", "r", "summands", "dim_e1", "Z", "B", "reps", "frame",
        "sector_cols", "sector_reps", "sector_B", "sector_dims",
    )

    def __init__(self, data: DegenerationData, d: int, r: int):
        summands = e1_summands(data, d, r)
        n = sum(s.dim for s in summands)
        M_out = d1_matrix(data, d, r)
        M_in = d1_matrix(data, d - 1, r + 1)
        Z = kernel(M_out)
        B = image(M_in)
        assert Z.contains(B), f"d1 image escapes kernel at degree {d}, column {-r}"
        self.d = d
        self.r = r
        self.summands = summands
        self.dim_e1 = n
        self.Z = Z
        self.B = B
        self.reps = _quotient_reps(Z, B)
        frame = _term_frame(data, summands)
        self.frame = frame
        self.sector_cols = _term_sectors(data, summands)
        # sector homology in frame coordinates
        finv = _inverse(frame) if n else frame
        src_in = e1_summands(data, d - 1, r + 1)
        F_in = _term_frame(data, src_in)
        tgt_out = e1_summands(data, d + 1, r - 1)
        F_out_inv = (
            _inverse(_term_frame(data, tgt_out)) if sum(s.dim for s in tgt_out) else None
        )
        Mi = (finv @ M_in.map(GaussianScalar.coerce) @ F_in) if n else M_in
        Mo = (
            (F_out_inv @ M_out.map(GaussianScalar.coerce) @ frame)
            if (n and F_out_inv is not None)
            else ExactMatrix.zero(0, n)
        )
        in_sectors = _term_sectors(data, src_in)
        out_sectors = _term_sectors(data, tgt_out)
        self.sector_reps = {}
        self.sector_B = {}
        self.sector_dims = {}
        for sec, cols in sorted(self.sector_cols.items()):
            Mo_s = Mo.take_columns(cols)
            # d1 preserves the limit type, so rows outside the matching
            # target sector must vanish
            trows = set(out_sectors.get(sec, []))
            for i in range(Mo_s.rows):
                if i not in trows:
                    assert all(e.is_zero() for e in Mo_s.entries[i]), (
                        f"d1 violates type sectors at degree {d}, column {-r}"
                    )
            Z_s = kernel(Mo_s)  # coordinates within the sector columns
            in_cols = in_sectors.get(sec, [])
            bvecs = []
            for c in in_cols:
                col = Mi.column(c)
                bvecs.append([col[i] for i in cols])
                for i in range(len(col)):
                    if i not in set(cols):
                        assert col[i].is_zero(), (
                            f"d1 violates type sectors at degree {d}, column {-r}"
                        )
            B_s = (
                image(ExactMatrix.from_columns(bvecs, rows=len(cols)))
                if bvecs
                else Subspace.zero(len(cols))
            )
            assert Z_s.contains(B_s)
            reps_s = _quotient_reps(Z_s, B_s)
            # lift to full-term frame coordinates
            lifted = []
            for vec in reps_s.columns():
                full = [G_ZERO] * n
                for ci, value in zip(cols, vec):
                    full[ci] = value
                lifted.append(full)
            self.sector_reps[sec] = ExactMatrix.from_columns(lifted, rows=n)
            self.sector_B[sec] = B_s
            self.sector_dims[sec] = reps_s.cols
        assert sum(self.sector_dims.values()) == self.dim, (
            f"sector dimensions do not fill E2 at degree {d}, column {-r}"
        )

    @property
    def dim(self) -> int:
        return self.reps.cols

    def class_coordinates(self, v: list) -> list | None:
        """Coordinates of an E1 kernel vector in the chosen representative
        basis, modulo the boundary space; None if v is not in Z + B."""
        if self.dim_e1 == 0:
            return [] if self.dim == 0 else None
        M = self.reps.hstack(self.B.basis)
        x = solve(M, v)
        if x is None:
            return None
        return x[: self.reps.cols]


class E2Page:
    def __init__(self, data: DegenerationData, d: int):
        self.data = data
        self.d = d
        self.terms = {r: E2Term(data, d, r) for r in range(-d, d + 1)}

    def term(self, r: int) -> E2Term | None:
        return self.terms.get(r)

    def dim(self, r: int) -> int:
        t = self.terms.get(r)
        return t.dim if t else 0

    def hodge_numbers(self) -> dict[tuple[int, int], int]:
        out: dict[tuple[int, int], int] = {}
        for t in self.terms.values():
            for sec, dim in t.sector_dims.items():
                if dim:
                    out[sec] = out.get(sec, 0) + dim
        return out


def e2_page(data: DegenerationData, d: int) -> E2Page:
    return E2Page(data, d)


def _induced_shift(page: E2Page, r: int, power: int) -> ExactMatrix | None:
    """Matrix of the identity-shift map nu^power : E2^{-r, d+r} ->
    E2^{-(r-2 power), ...} in the representative bases, or None if a shifted
    representative fails to define an E2 class (a contract error upstream).
    """
    src = page.term(r)
    tgt = page.term(r - 2 * power)
    sd = src.dim if src else 0
    td = tgt.dim if tgt else 0
    if sd == 0:
        return ExactMatrix.zero(td, 0)
    if tgt is None or td == 0:
        # still must check the shifted classes die in E2
        pass
    T = _transport_matrix(src.summands, tgt.summands if tgt else [])
    cols = []
    for v in src.reps.columns():
        w = (T @ ExactMatrix.from_columns([v], rows=len(v))).column(0)
        if tgt is None:
            if any(not e.is_zero() for e in w):
                return None
            cols.append([])
            continue
        x = tgt.class_coordinates(w)
        if x is None:
            return None
        cols.append(x)
    return ExactMatrix.from_columns(cols, rows=td)


class WeightCriterionReport:
    def __init__(self, d: int, per_r: dict[int, bool]):
        self.d = d
        self.per_r = dict(per_r)

    @property
    def ok(self) -> bool:
        return all(self.per_r.values())

    def __repr__(self):
        return f"WeightCriterionReport(d={self.d}, per_r={self.per_r}, ok={self.ok})"


def weight_criterion(data: DegenerationData, d: int) -> WeightCriterionReport:
    """For each r >= 0, the identity-shift map nu^r must induce an
    isomorphism E2^{-r, d+r} -> E2^{r, d-r}."""
    page = e2_page(data, d)
    per_r = {}
    for r in range(0, d + 1):
        sd = page.dim(r)
        td = page.dim(-r)
        if sd == 0 and td == 0:
            per_r[r] = True
            continue
        if sd != td:
            per_r[r] = False
            continue
        M = _induced_shift(page, r, r)
        assert M is not None, (
            f"shift map fails to descend to E2 at degree {d}, r={r}"
        )
        per_r[r] = rank(M) == sd
    return WeightCriterionReport(d, per_r)


def psi_form(data: DegenerationData, d: int | None = None) -> dict[int, ExactMatrix]:
    """Blockwise pairing matrices on E1 terms: for each r, the pairing of
    E1^{-r, d+r} (degree d) against E1^{r, 2m-d-r} (degree 2m-d), matching
    summand k with summand k+r on the same stratum, with block value
    epsilon(r+d-2m) times the stratum pairing.
    """
    m = data.m
    if d is None:
        d = m
    out = {}
    for r in range(-d, d + 1):
        src = e1_summands(data, d, r)
        tgt = e1_summands(data, 2 * m - d, -r)
        so = _offsets(src)
        to = _offsets(tgt)
        tgt_index = {(s.depth, s.q): i for i, s in enumerate(tgt)}
        M = [[G_ZERO] * to[-1] for _ in range(so[-1])]
        sign = epsilon_sign(r + d - 2 * m)
        for si, s in enumerate(src):
            ti = tgt_index.get((s.depth, 2 * data.complex_dim(s.depth) - s.q))
            if ti is None:
                continue
            P = data.strata[s.depth].pairing(s.q)
            assert P is not None
            for i in range(P.rows):
                for j in range(P.cols):
                    e = GaussianScalar.coerce(P.entries[i][j])
                    M[so[si] + i][to[ti] + j] = e if sign > 0 else -e
        out[r] = ExactMatrix(M, cols=to[-1])
    return out


def _hermitian_gram(data: DegenerationData, summands: list[Summand], r: int) -> ExactMatrix:
    """Block-diagonal Gram of the form S(C., (-N)^r conj .) on the middle-
    degree E1 term, in frame coordinates, without the sector Weil factor
    i^(P-Q): block k carries (-1)^m epsilon(r-m) (-1)^(r+k) F^T P conj(F).
    """
    m = data.m
    n = sum(s.dim for s in summands)
    out = [[G_ZERO] * n for _ in range(n)]
    off = 0
    for s in summands:
        assert s.q == data.complex_dim(s.depth), "hermitian gram needs middle degree"
        P = data.strata[s.depth].pairing(s.q)
        assert P is not None
        F = data.strata[s.depth].frame(s.q)
        block = F.transpose() @ P.map(GaussianScalar.coerce) @ F.conj()
        sign = epsilon_sign(r - m)
        if (m + r + s.k) % 2:
            sign = -sign
        for i in range(s.dim):
            for j in range(s.dim):
                e = block.entries[i][j]
                out[off + i][off + j] = e if sign > 0 else -e
        off += s.dim
    return ExactMatrix(out, cols=n)


def _primitive_sector_basis(page: E2Page, r: int, sec: tuple[int, int]) -> ExactMatrix:
    """Frame-coordinate basis of ker(nu^{r+1}) inside the (P,Q) sector of
    E2^{-r, m+r}, as columns in the E1 term."""
    term = page.term(r)
    X = term.sector_reps[sec]
    if X.cols == 0:
        return X
    tgt = page.term(-r - 2)
    T = _transport_matrix(term.summands, tgt.summands if tgt else [])
    tsec = (sec[0] - r - 1, sec[1] - r - 1)
    cols = []
    for v in X.columns():
        w = (T @ ExactMatrix.from_columns([v], rows=len(v))).column(0)
        if tgt is None or tgt.dim_e1 == 0:
            cols.append([])
            continue
        # coordinates modulo the sector boundary space, in sector coordinates
        tcols = tgt.sector_cols.get(tsec, [])
        wsec = [w[i] for i in tcols]
        for i in range(len(w)):
            if i not in set(tcols):
                assert w[i].is_zero()
        R = tgt.sector_reps.get(tsec)
        R_sec = (
            ExactMatrix.from_columns(
                [[col[i] for i in tcols] for col in R.columns()], rows=len(tcols)
            )
            if R is not None
            else ExactMatrix.from_columns([], rows=len(tcols))
        )
        Bb = tgt.sector_B.get(tsec, Subspace.zero(len(tcols)))
        M = R_sec.hstack(Bb.basis)
        x = solve(M, wsec)
        assert x is not None, "shift map fails to descend on a sector"
        cols.append(x[: R_sec.cols])
    tdim = len(cols[0]) if cols else 0
    induced = ExactMatrix.from_columns(cols, rows=tdim)
    K = kernel(induced)
    return X @ K.basis


def e2_signature_table(data: DegenerationData) -> SignatureTable:
    """Exact signatures of S(C., (-N)^r conj .) on the type sectors of the
    monodromy-primitive parts of E2^{-r, m+r}, r >= 0, at middle degree m.

    Requires the weight criterion to hold at degree m.
    """
    m = data.m
    crit = weight_criterion(data, m)
    assert crit.ok, f"weight criterion fails at degree {m}: {crit.per_r}"
    page = e2_page(data, m)
    entries = {}
    part_dims = {}
    for t in page.terms.values():
        for sec, dim in t.sector_dims.items():
            if dim:
                part_dims[sec] = part_dims.get(sec, 0) + dim
    for r in range(0, m + 1):
        term = page.term(r)
        if term is None or term.dim == 0:
            continue
        G = _hermitian_gram(data, term.summands, r)
        for sec in sorted(term.sector_dims):
            X = _primitive_sector_basis(page, r, sec)
            if X.cols == 0:
                continue
            P, Q = sec
            H = (X.transpose() @ G @ X.conj()).scale(i_power(P - Q))
            assert hermitian_check(H), f"non-Hermitian form at sector {sec}"
            pos, neg, nulls = hermitian_signature(H)
            if nulls:
                raise ValueError(
                    f"degenerate primitive form at sector {sec}, r={r}"
                )
            entries[sec] = (pos, neg)
    return SignatureTable(m, entries, part_dims)


def extract_limit_mhs(data: DegenerationData, d: int) -> MHSData:
    """Split model of the limit mixed Hodge structure on H^d in E2 class
    coordinates: W from the column grading, F from the type sectors, the
    monodromy N given by the identity-shift transport, and (at d = m) the
    rational pairing induced by the psi blocks.
    """
    m = data.m
    page = e2_page(data, d)
    order = [r for r in range(-d, d + 1) if page.dim(r)]  # weight d+r increasing
    offsets = {}
    total = 0
    for r in order:
        offsets[r] = total
        total += page.dim(r)
    assert total > 0, "empty cohomology"
    # weight filtration
    steps = {}
    for r in order:
        w = d + r
        dim_below = offsets[r] + page.dim(r)
        basis = ExactMatrix.from_columns(
            [[1 if i == j else 0 for i in range(total)] for j in range(dim_below)],
            rows=total,
        ).map(GaussianScalar.coerce)
        steps[w] = Subspace(total, basis)
    W = IncreasingFiltration(total, steps)
    # Hodge filtration from sector representatives
    levels = sorted({P for t in page.terms.values() for (P, _) in t.sector_dims})
    fsteps = {}
    for p in levels:
        cols = []
        for r in order:
            term = page.term(r)
            for sec, X in term.sector_reps.items():
                if sec[0] < p or X.cols == 0:
                    continue
                for v in X.columns():
                    sv = (term.frame @ ExactMatrix.from_columns([v], rows=len(v))).column(0)
                    x = term.class_coordinates(sv)
                    assert x is not None
                    full = [G_ZERO] * total
                    for i, e in enumerate(x):
                        full[offsets[r] + i] = e
                    cols.append(full)
        M = ExactMatrix.from_columns(cols, rows=total)
        fsteps[p] = Subspace(total, image(M).basis)
    assert fsteps[levels[0]].dim == total, "sector representatives do not span"
    if levels[-1] + 1 not in fsteps:
        fsteps[levels[-1] + 1] = Subspace.zero(total)
    F = DecreasingFiltration(total, fsteps)
    # monodromy: the shift transport, whose sign convention matches the
    # (-1)^r factor carried by the rational pairing blocks below
    Nrows = [[G_ZERO] * total for _ in range(total)]
    for r in order:
        M = _induced_shift(page, r, 1)
        assert M is not None, "shift map fails to descend to E2"
        if r - 2 not in offsets:
            assert M.rows == 0
            continue
        for i in range(M.rows):
            for j in range(M.cols):
                Nrows[offsets[r - 2] + i][offsets[r] + j] = M.entries[i][j]
    N = ExactMatrix(Nrows, cols=total)
    S = None
    if d == m:
        psi = psi_form(data, m)
        Srows = [[G_ZERO] * total for _ in range(total)]
        for r in order:
            if -r not in offsets:
                continue
            term = page.term(r)
            tgt = page.term(-r)
            # overall factor (-1)^m (-1)^r on top of the psi block sign
            factor = GaussianScalar(-1 if (m + r) % 2 else 1)
            block = term.reps.transpose() @ psi[r] @ tgt.reps
            for i in range(block.rows):
                for j in range(block.cols):
                    Srows[offsets[r] + i][offsets[-r] + j] = block.entries[i][j] * factor
        S = ExactMatrix(Srows, cols=total)
    return MHSData(total, d, W, F, N, S)


class IndexReport:
    """Per-degree criterion verdicts and limit Hodge numbers, plus the
    middle-degree signature table and aggregated nearby-fiber Hodge index."""

    def __init__(self, m, verdict, per_degree, table, signature, failures):
        self.m = m
        self.verdict = verdict
        self.per_degree = per_degree
        self.table = table
        self.signature = signature
        self.failures = list(failures)

    @property
    def ok(self) -> bool:
        return self.verdict and not self.failures

    def to_json(self) -> dict:
        out = {
            "m": self.m,
            "ddbar_verdict": self.verdict,
            "degrees": [
                {
                    "d": d,
                    "criterion": {str(r): v for r, v in info["criterion"].items()},
                    "hodge_numbers": [
                        {"p": p, "q": q, "dim": dim}
                        for (p, q), dim in sorted(info["hodge"].items())
                    ],
                }
                for d, info in sorted(self.per_degree.items())
            ],
            "failures": self.failures,
        }
        if self.signature is not None:
            out["signature"] = [
                {"p": p, "plus": pm[0], "minus": pm[1]}
                for p, pm in sorted(self.signature.items())
            ]
        if self.table is not None:
            out["table"] = self.table.to_json()
        return out


def nearby_hodge_index(data: DegenerationData) -> IndexReport:
    """Criterion verdicts and limit Hodge numbers for every degree, and the
    aggregated signature of S(C., conj .) per (p, m-p) at middle degree when
    the criterion holds there."""
    m = data.m
    failures = []
    per_degree = {}
    verdict = True
    for d in range(0, 2 * m + 1):
        crit = weight_criterion(data, d)
        page = e2_page(data, d)
        hodge = page.hodge_numbers()
        for (p, q), dim in hodge.items():
            if hodge.get((q, p), 0) != dim:
                failures.append(
                    f"degree {d}: limit Hodge numbers not symmetric at ({p},{q})"
                )
        per_degree[d] = {"criterion": crit.per_r, "hodge": hodge}
        verdict = verdict and crit.ok
    table = None
    signature = None
    if weight_criterion(data, m).ok:
        table = e2_signature_table(data)
        signature = {}
        hodge_m = per_degree[m]["hodge"]
        for p in range(0, m + 1):
            plus, minus = nearby_index_formula(table, p)
            signature[p] = (plus, minus)
            want = sum(dim for (a, _), dim in hodge_m.items() if a == p)
            if plus + minus != want:
                failures.append(
                    f"signature at p={p} sums to {plus + minus}, "
                    f"Hodge number is {want}"
                )
    return IndexReport(m, verdict, per_degree, table, signature, failures)
