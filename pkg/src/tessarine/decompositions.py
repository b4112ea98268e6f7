"""Core double-complex factorizations.

Implements the naive SVD of a matrix pair, the Jordan SVD through its
constructive existence proof, the Moore-Penrose pseudoinverse by two
independent constructions (through the Jordan SVD, and by reversing the
image/kernel diagrams), Penrose-axiom verification, existence reports,
and the polar decomposition with conversions in both directions.

Every factorization is re-verified by reconstruction before being
returned; a silent wrong answer is worse than an error.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .dcnum import DEFAULT_TOL, halfplane_sqrt
from .dcmatrix import DCMatrix, max_abs
from .complex_linalg import (
    Blocks,
    DEFAULT_CLUSTER_GAP,
    column_space,
    halfplane_canonical,
    jordan_decomposition,
    jordan_matrix,
    null_space,
    rank,
    sqrt_jordan_factors,
    _block_sort_key,
)
from .errors import (
    ClusterAmbiguity,
    DimensionMismatch,
    NoPseudoinverse,
    NotDiagonalizable,
    PreconditionFailed,
    SingularComponent,
    TessarineError,
    VerificationFailed,
)
from .orthonormal import DCVector, assemble_columns, extend_orthonormal

DEFAULT_RECON_TOL = 1e-7
ZERO_COLUMN_REL = 1e-9
DIAGONALIZABLE_RTOL = 1e-6


class JsvdStatus(str, Enum):
    EXISTS = "exists"
    NOT_EXISTS = "not_exists"
    UNKNOWN = "unknown"


@dataclass(frozen=True, eq=False)
class JordanSVD:
    """Factorization m = u @ s @ v* with s = [J, J] Hermitian-Jordan.

    ``blocks`` is the canonical block list of J (eigenvalues in the
    half-plane); ``residual`` is the verified reconstruction error.
    """

    u: DCMatrix
    s: DCMatrix
    v: DCMatrix
    blocks: Blocks
    residual: float

    def reconstruct(self) -> DCMatrix:
        return self.u @ self.s @ self.v.star()


@dataclass(frozen=True, eq=False)
class PolarDecomposition:
    unitary_factor: DCMatrix
    hermitian_factor: DCMatrix

    def reconstruct(self) -> DCMatrix:
        return self.unitary_factor @ self.hermitian_factor


@dataclass(frozen=True)
class ExistenceReport:
    """Rank quadruple, necessary conditions, and the three-valued verdict."""

    rank_a: int
    rank_b: int
    rank_ab: int
    rank_ba: int
    pinv_exists: bool
    jsvd_nec1: bool | None
    jsvd_nec2: bool | None
    jsvd_nec3: bool | None
    jsvd_status: JsvdStatus
    reason: str | None = None

    def as_dict(self) -> dict:
        return {
            "rank_a": self.rank_a,
            "rank_b": self.rank_b,
            "rank_ab": self.rank_ab,
            "rank_ba": self.rank_ba,
            "pinv_exists": self.pinv_exists,
            "jsvd_nec1": self.jsvd_nec1,
            "jsvd_nec2": self.jsvd_nec2,
            "jsvd_nec3": self.jsvd_nec3,
            "jsvd_status": self.jsvd_status.value,
            "reason": self.reason,
        }


# ---------------------------------------------------------------------------
# Existence tests
# ---------------------------------------------------------------------------


def rank_quadruple(m: DCMatrix, tol: float = DEFAULT_TOL) -> tuple[int, int, int, int]:
    return (
        rank(m.a, tol),
        rank(m.b, tol),
        rank(m.a @ m.b, tol),
        rank(m.b @ m.a, tol),
    )


def pinv_exists(m: DCMatrix, tol: float = DEFAULT_TOL) -> tuple[bool, tuple[int, int, int, int]]:
    """Rank criterion: a pseudoinverse exists iff all four ranks agree."""
    ranks = rank_quadruple(m, tol)
    return len(set(ranks)) == 1, ranks


def _sizes_admit_sqrt(sizes: list[int]) -> bool:
    """Classical pairing criterion on nilpotent Jordan block sizes.

    Sorted descending, consecutive pairs may differ by at most one and a
    final unpaired block must have size 1.
    """
    sizes = sorted(sizes, reverse=True)
    i = 0
    while i + 1 < len(sizes):
        if sizes[i] - sizes[i + 1] > 1:
            return False
        i += 2
    if len(sizes) % 2 == 1 and sizes[-1] != 1:
        return False
    return True


def _sqrt_exists(x: np.ndarray, tol: float, cluster_gap: float) -> bool:
    scale = max_abs(x)
    if scale == 0:
        return True
    jf = jordan_decomposition(x, tol=tol, cluster_gap=cluster_gap)
    zero_tol = cluster_gap * scale
    nil_sizes = [size for lam, size in jf.blocks if abs(lam) <= zero_tol]
    return _sizes_admit_sqrt(nil_sizes)


def jsvd_necessary(
    m: DCMatrix,
    tol: float = DEFAULT_TOL,
    cluster_gap: float = DEFAULT_CLUSTER_GAP,
) -> tuple[bool, bool, bool]:
    """The three necessary conditions for a Jordan SVD of [A, B].

    1. rank(A) = rank(B); 2. AB has a square root; 3. BA has a square
    root.  Root existence is decided on the Jordan structure.
    """
    nec1 = rank(m.a, tol) == rank(m.b, tol)
    nec2 = _sqrt_exists(m.a @ m.b, tol, cluster_gap)
    nec3 = _sqrt_exists(m.b @ m.a, tol, cluster_gap)
    return nec1, nec2, nec3


# ---------------------------------------------------------------------------
# Penrose axioms
# ---------------------------------------------------------------------------


def penrose_check(
    m: DCMatrix, k: DCMatrix, tol: float = 1e-8
) -> tuple[bool, bool, bool, bool]:
    """Check the four Penrose axioms through their component expansion.

    For m = [A,B] and k = [C,D] the axioms expand to ACA=A, BDB=B
    (axiom 1), CAC=C, DBD=D (axiom 2), BD=CA (axiom 3, Hermitian k@m)
    and DB=AC (axiom 4, Hermitian m@k).  Residuals are compared against
    tol relative to the operand scale.
    """
    if m.n != k.n:
        raise DimensionMismatch(f"dimension mismatch: {m.n} vs {k.n}")
    a, b = m.a, m.b
    c, d = k.a, k.b
    ref = tol * max(1.0, m.norm_inf(), k.norm_inf())
    ax1 = max_abs(a @ c @ a - a) <= ref and max_abs(b @ d @ b - b) <= ref
    ax2 = max_abs(c @ a @ c - c) <= ref and max_abs(d @ b @ d - d) <= ref
    ax3 = max_abs(b @ d - c @ a) <= ref
    ax4 = max_abs(d @ b - a @ c) <= ref
    return ax1, ax2, ax3, ax4


# ---------------------------------------------------------------------------
# Naive double-complex SVD
# ---------------------------------------------------------------------------


def naive_dc_svd(
    m: DCMatrix,
    tol: float = DEFAULT_TOL,
    recon_tol: float = DEFAULT_RECON_TOL,
) -> tuple[DCMatrix, DCMatrix, DCMatrix]:
    """Diagonal SVD analogue [A,B] = [P,P^-1] [D,D] [Q^-1,Q].

    Reduces to the eigendecompositions AB = P D^2 P^-1 and
    BA = Q D^2 Q^-1.  Construction: eigendecompose AB, take half-plane
    roots for D, and couple Q = A^-1 P D; this needs A invertible and D
    invertible, otherwise ``SingularComponent`` is raised.
    """
    n = m.n
    scale = m.norm_inf()
    if rank(m.a, tol) < n:
        raise SingularComponent("component A is singular; coupling Q = A^-1 P D fails")
    ab = m.a @ m.b
    lam, pvec = np.linalg.eig(ab)
    sv = np.linalg.svd(pvec, compute_uv=False)
    if sv[-1] <= DIAGONALIZABLE_RTOL * sv[0]:
        raise NotDiagonalizable("AB has a defective eigenvalue at working precision")
    d = np.array([halfplane_sqrt(x) for x in lam])
    if np.min(np.abs(d)) <= np.sqrt(tol) * max(np.max(np.abs(d)), 1e-300):
        raise SingularComponent("diagonal factor D is singular; coupling fails")
    q = np.linalg.solve(m.a, pvec * d)  # A^-1 P D
    u = DCMatrix(pvec, np.linalg.inv(pvec))
    s = DCMatrix(np.diag(d), np.diag(d))
    v = DCMatrix(q, np.linalg.inv(q))
    residual = (u @ s @ v.star() - m).norm_inf()
    if residual > recon_tol * max(scale, 1e-300):
        raise VerificationFailed(
            f"naive SVD residual {residual:.3e} exceeds {recon_tol:.1e} * scale"
        )
    return u, s, v


# ---------------------------------------------------------------------------
# Jordan SVD (constructive route under the pseudoinverse hypothesis)
# ---------------------------------------------------------------------------


def _jordan_pinv(blocks: Blocks) -> np.ndarray:
    """Blockwise pseudoinverse of a canonical Jordan matrix.

    Valid when every block is invertible or the 1x1 zero: invertible
    blocks invert, zero blocks stay zero.
    """
    n = sum(size for _, size in blocks)
    out = np.zeros((n, n), dtype=complex)
    pos = 0
    for lam, size in blocks:
        if lam != 0:
            block = np.diag(np.full(size, lam, dtype=complex)) + np.diag(
                np.ones(size - 1), 1
            )
            out[pos : pos + size, pos : pos + size] = np.linalg.inv(block)
        pos += size
    return out


def _zero_block_positions(blocks: Blocks) -> set[int]:
    positions = set()
    pos = 0
    for lam, size in blocks:
        if lam == 0:
            positions.update(range(pos, pos + size))
        pos += size
    return positions


def jordan_svd(
    m: DCMatrix,
    tol: float = DEFAULT_TOL,
    rng: np.random.Generator | None = None,
    *,
    recon_tol: float = DEFAULT_RECON_TOL,
    cluster_gap: float = DEFAULT_CLUSTER_GAP,
    max_retries: int = 16,
) -> JordanSVD:
    """Jordan SVD through the constructive existence proof.

    Requires the pseudoinverse rank condition (the guaranteed regime).
    Steps: take the half-plane square root of BA along with its Jordan
    form P J P^-1; set V = [P, P^-1] and S = [J, J]; form U' = m V S+
    with S+ = [J+, J+]; replace the zero columns of U' (they sit exactly
    at the zero blocks of J) by a randomized orthonormal extension; and
    verify m = U S V*.
    """
    exists, ranks = pinv_exists(m, tol)
    if not exists:
        raise PreconditionFailed(
            f"rank condition fails: rank(A,B,AB,BA) = {ranks}", report=ranks
        )
    if rng is None:
        rng = np.random.default_rng(0)
    scale = m.norm_inf()

    _, root_jf = sqrt_jordan_factors(m.b @ m.a, tol=tol, cluster_gap=cluster_gap)
    p, j, blocks = root_jf.p, root_jf.j, root_jf.blocks
    v = DCMatrix(p, np.linalg.inv(p))
    s = DCMatrix(j, j)
    j_pinv = _jordan_pinv(blocks)
    s_pinv = DCMatrix(j_pinv, j_pinv)

    u_prime = m @ v @ s_pinv
    threshold = ZERO_COLUMN_REL * max(u_prime.norm_inf(), 1e-300)
    columns = [
        DCVector(u_prime.a[:, k], u_prime.b[k, :]) for k in range(m.n)
    ]
    detected = {k for k, col in enumerate(columns) if col.max_abs() <= threshold}
    structural = _zero_block_positions(blocks)
    if detected != structural:
        raise VerificationFailed(
            f"zero columns of U' at {sorted(detected)} do not match the zero "
            f"Jordan blocks at {sorted(structural)}"
        )

    keep = [columns[k] for k in range(m.n) if k not in detected]
    if detected:
        basis = extend_orthonormal(keep, m.n, rng, max_retries=max_retries)
        fresh = iter(basis[len(keep) :])
        final = [
            next(fresh) if k in detected else columns[k] for k in range(m.n)
        ]
    else:
        final = columns
    u = assemble_columns(final)

    residual = (u @ s @ v.star() - m).norm_inf()
    if residual > recon_tol * max(scale, 1e-300):
        raise VerificationFailed(
            f"Jordan SVD residual {residual:.3e} exceeds {recon_tol:.1e} * scale"
        )
    return JordanSVD(u=u, s=s, v=v, blocks=blocks, residual=residual)


# ---------------------------------------------------------------------------
# Hermitian route and half-plane normalization
# ---------------------------------------------------------------------------


def _halfplane_normalized_factors(
    h: np.ndarray, tol: float, cluster_gap: float
) -> tuple[np.ndarray, np.ndarray, Blocks]:
    """Factor a complex matrix h as h = W Jt Z^-1 with [h,h] = [W,W^-1][Jt,Jt][Z,Z^-1]*.

    Jt is canonical Jordan with half-plane eigenvalues.  Blocks whose
    eigenvalue falls outside the half-plane are sign-flipped; the flip is
    absorbed by the unitary [E,E] (E = +/-1 per block) together with the
    alternating-sign similarity that restores unit superdiagonals.
    """
    jf = jordan_decomposition(h, tol=tol, cluster_gap=cluster_gap)
    axis_tol = cluster_gap * max(max_abs(h), 1e-300)
    pos = 0
    entries = []  # (block, w_cols, z_cols)
    for lam, size in jf.blocks:
        q_cols = jf.p[:, pos : pos + size]
        pos += size
        alt = np.diag([(-1.0) ** i for i in range(size)]).astype(complex)
        if halfplane_canonical(lam, axis_tol):
            entries.append(((lam, size), q_cols, q_cols))
        else:
            entries.append(((-lam, size), q_cols @ (-alt), q_cols @ alt))
    entries.sort(key=lambda t: _block_sort_key(t[0]))
    blocks = tuple(b for b, _, _ in entries)
    w = np.hstack([wc for _, wc, _ in entries])
    z = np.hstack([zc for _, _, zc in entries])
    return w, z, blocks


def polar_to_jsvd(
    pd: PolarDecomposition,
    tol: float = DEFAULT_TOL,
    *,
    recon_tol: float = DEFAULT_RECON_TOL,
    cluster_gap: float = DEFAULT_CLUSTER_GAP,
) -> JordanSVD:
    """Convert a polar decomposition into a Jordan SVD.

    Jordan-decomposes the Hermitian factor [H,H] as Q J Q^-1, giving
    m = (U [Q,Q^-1]) [J,J] [Q,Q^-1]*, then normalizes the eigenvalues of
    J into the half-plane.
    """
    hf = pd.hermitian_factor
    scale = max(hf.norm_inf(), 1e-300)
    if not hf.is_hermitian(tol * max(1.0, scale)):
        raise PreconditionFailed("hermitian factor is not of the form [H, H]")
    h = (hf.a + hf.b) / 2
    w, z, blocks = _halfplane_normalized_factors(h, tol, cluster_gap)
    jt = jordan_matrix(blocks)
    u = pd.unitary_factor @ DCMatrix(w, np.linalg.inv(w))
    s = DCMatrix(jt, jt)
    v = DCMatrix(z, np.linalg.inv(z))
    target = pd.reconstruct()
    residual = (u @ s @ v.star() - target).norm_inf()
    if residual > recon_tol * max(target.norm_inf(), 1e-300):
        raise VerificationFailed(
            f"polar-to-JSVD residual {residual:.3e} exceeds tolerance"
        )
    return JordanSVD(u=u, s=s, v=v, blocks=blocks, residual=residual)


def hermitian_jsvd(
    m: DCMatrix,
    tol: float = DEFAULT_TOL,
    *,
    recon_tol: float = DEFAULT_RECON_TOL,
    cluster_gap: float = DEFAULT_CLUSTER_GAP,
) -> JordanSVD:
    """Jordan SVD of a Hermitian matrix [A, A] via its Jordan decomposition.

    This route does not need the pseudoinverse rank condition, so it
    certifies existence for Hermitian matrices (for example nilpotent
    [J, J]) that have no pseudoinverse.
    """
    if not m.is_hermitian(tol * max(1.0, m.norm_inf())):
        raise PreconditionFailed("matrix is not Hermitian")
    pd = PolarDecomposition(DCMatrix.identity(m.n), m)
    return polar_to_jsvd(pd, tol, recon_tol=recon_tol, cluster_gap=cluster_gap)


def jsvd_to_polar(jsvd: JordanSVD) -> PolarDecomposition:
    """U S V* = (U V*) (V S V*): unitary times Hermitian."""
    return PolarDecomposition(
        unitary_factor=jsvd.u @ jsvd.v.star(),
        hermitian_factor=jsvd.v @ jsvd.s @ jsvd.v.star(),
    )


def polar(
    m: DCMatrix,
    tol: float = DEFAULT_TOL,
    rng: np.random.Generator | None = None,
    *,
    recon_tol: float = DEFAULT_RECON_TOL,
    cluster_gap: float = DEFAULT_CLUSTER_GAP,
    max_retries: int = 16,
) -> PolarDecomposition:
    """Polar decomposition m = U P obtained from the Jordan SVD.

    Exists exactly when the Jordan SVD construction succeeds; errors
    from ``jordan_svd`` propagate unchanged.
    """
    jsvd = jordan_svd(
        m,
        tol,
        rng,
        recon_tol=recon_tol,
        cluster_gap=cluster_gap,
        max_retries=max_retries,
    )
    pd = jsvd_to_polar(jsvd)
    residual = (pd.reconstruct() - m).norm_inf()
    if residual > recon_tol * max(m.norm_inf(), 1e-300):
        raise VerificationFailed(
            f"polar residual {residual:.3e} exceeds {recon_tol:.1e} * scale"
        )
    return pd


# ---------------------------------------------------------------------------
# Pseudoinverse constructions
# ---------------------------------------------------------------------------


def pinv(
    m: DCMatrix,
    tol: float = DEFAULT_TOL,
    rng: np.random.Generator | None = None,
    *,
    recon_tol: float = DEFAULT_RECON_TOL,
    cluster_gap: float = DEFAULT_CLUSTER_GAP,
    max_retries: int = 16,
) -> DCMatrix:
    """Moore-Penrose pseudoinverse via the Jordan SVD: V [J+, J+] U*."""
    exists, ranks = pinv_exists(m, tol)
    if not exists:
        raise NoPseudoinverse(
            f"rank condition fails: rank(A,B,AB,BA) = {ranks}"
        )
    jsvd = jordan_svd(
        m,
        tol,
        rng,
        recon_tol=recon_tol,
        cluster_gap=cluster_gap,
        max_retries=max_retries,
    )
    j_pinv = _jordan_pinv(jsvd.blocks)
    k = jsvd.v @ DCMatrix(j_pinv, j_pinv) @ jsvd.u.star()
    axioms = penrose_check(m, k, recon_tol)
    if not all(axioms):
        raise VerificationFailed(f"Penrose axiom check failed: {axioms}")
    return k


def pinv_via_diagrams(m: DCMatrix, tol: float = DEFAULT_TOL) -> DCMatrix:
    """Pseudoinverse by reversing the image/kernel diagrams.

    With V = Im(B) + ker(A) and V = Im(A) + ker(B) as direct sums, the
    component C inverts A restricted to Im(B) and kills ker(B); D
    inverts B restricted to Im(A) and kills ker(A).  Requires the
    existence conditions Im(AB) = Im(A), Im(BA) = Im(B) and
    rank(A) = rank(B); fails with ``NoPseudoinverse`` otherwise.
    """
    ra, rb, rab, rba = rank_quadruple(m, tol)
    if not (ra == rb == rab == rba):
        raise NoPseudoinverse(
            f"existence conditions fail: rank(A,B,AB,BA) = {(ra, rb, rab, rba)}"
        )
    im_b = column_space(m.b, tol).vectors
    im_a = column_space(m.a, tol).vectors
    ker_a = null_space(m.a, tol).vectors
    ker_b = null_space(m.b, tol).vectors

    c = _reverse_diagram(m.a, im_b, ker_b, tol=tol, name="Im(A) + ker(B)")
    d = _reverse_diagram(m.b, im_a, ker_a, tol=tol, name="Im(B) + ker(A)")
    return DCMatrix(c, d)


def _reverse_diagram(
    a: np.ndarray,
    source_image: np.ndarray,
    kernel: np.ndarray,
    tol: float,
    name: str,
) -> np.ndarray:
    """Build the inverse map x with x (a @ source) = source and x kernel = 0."""
    n = a.shape[0]
    mapped = a @ source_image
    stack = np.hstack([mapped, kernel])
    if stack.shape[1] != n:
        raise NoPseudoinverse(f"direct sum {name} has wrong dimension")
    sv = np.linalg.svd(stack, compute_uv=False)
    if sv.size == 0 or sv[-1] <= max(tol * sv[0], 1e-300):
        raise NoPseudoinverse(f"direct sum decomposition {name} fails at tolerance")
    target = np.hstack(
        [source_image, np.zeros((n, kernel.shape[1]), dtype=complex)]
    )
    return target @ np.linalg.inv(stack)


def block_pinv(
    l: DCMatrix,
    m: DCMatrix,
    tol: float = DEFAULT_TOL,
    rng: np.random.Generator | None = None,
) -> DCMatrix:
    """(L (+) M)+ = L+ (+) M+ implemented as the right-hand side."""
    from .dcmatrix import direct_sum

    return direct_sum(pinv(l, tol, rng), pinv(m, tol, rng))


# ---------------------------------------------------------------------------
# Combined existence report (with construction)
# ---------------------------------------------------------------------------


def attempt_jordan_svd(
    m: DCMatrix,
    tol: float = DEFAULT_TOL,
    rng: np.random.Generator | None = None,
    *,
    recon_tol: float = DEFAULT_RECON_TOL,
    cluster_gap: float = DEFAULT_CLUSTER_GAP,
    max_retries: int = 16,
) -> tuple[JordanSVD | None, ExistenceReport]:
    """Full existence flow: necessary conditions, then construction.

    Status semantics: ``not_exists`` only when a necessary condition
    provably fails; ``exists`` only when a factorization was produced
    and verified (constructive route under the rank condition, or the
    Hermitian route); ``unknown`` otherwise - the exact existence
    boundary is open.
    """
    ranks = rank_quadruple(m, tol)
    rank_ok = len(set(ranks)) == 1
    reason = None
    try:
        nec1, nec2, nec3 = jsvd_necessary(m, tol, cluster_gap)
    except ClusterAmbiguity as ex:
        nec1 = rank(m.a, tol) == rank(m.b, tol)
        nec2 = nec3 = None
        reason = f"ClusterAmbiguity: {ex}"

    jsvd = None
    failed = [
        i + 1 for i, ok in enumerate((nec1, nec2, nec3)) if ok is False
    ]
    if failed:
        status = JsvdStatus.NOT_EXISTS
        reason = f"necessary condition {failed[0]} fails"
    else:
        hermitian = m.is_hermitian(tol * max(1.0, m.norm_inf()))
        if rank_ok or hermitian:
            try:
                if rank_ok:
                    jsvd = jordan_svd(
                        m,
                        tol,
                        rng,
                        recon_tol=recon_tol,
                        cluster_gap=cluster_gap,
                        max_retries=max_retries,
                    )
                else:
                    jsvd = hermitian_jsvd(
                        m, tol, recon_tol=recon_tol, cluster_gap=cluster_gap
                    )
                status = JsvdStatus.EXISTS
            except TessarineError as ex:
                status = JsvdStatus.UNKNOWN
                reason = f"{type(ex).__name__}: {ex}"
        else:
            status = JsvdStatus.UNKNOWN
            reason = "rank condition fails; existence undetermined"

    report = ExistenceReport(
        rank_a=ranks[0],
        rank_b=ranks[1],
        rank_ab=ranks[2],
        rank_ba=ranks[3],
        pinv_exists=rank_ok,
        jsvd_nec1=nec1,
        jsvd_nec2=nec2,
        jsvd_nec3=nec3,
        jsvd_status=status,
        reason=reason,
    )
    return jsvd, report
