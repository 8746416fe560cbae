"""Correspondences: Hilbert spaces with commuting left and right actions.

Both actions are specified on matrix units and extended linearly. The left
data must be a unital *-homomorphism and the right data a unital
*-antihomomorphism, and the two images must commute; construction checks
all of it on unit pairs, which suffices by linearity.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import AlgebraMismatch, NotComposable, NotHomomorphism
from ..numkernel import (
    DEFAULT_TOL,
    as_complex_matrix,
    joint_null_space,
    operator_norm,
    orthonormal_columns,
    polar_unitary,
)
from ..errors import Singular
from .algebras import MultiMatrixAlgebra
from .standard import StandardFormData


def _check_rep(A: MultiMatrixAlgebra, units: tuple[np.ndarray, ...],
               dim: int, anti: bool, tol: float, label: str):
    triples = A.unit_triples()
    if len(units) != len(triples):
        raise ValueError(f"{label}: expected {len(triples)} unit images")
    pos = {t: k for k, t in enumerate(triples)}
    bound = tol * (1.0 + max((operator_norm(U) for U in units), default=0.0))
    for U in units:
        if U.shape != (dim, dim):
            raise ValueError(f"{label}: unit image has wrong shape")
    total = np.zeros((dim, dim), dtype=np.complex128)
    for (b, i, j), U in zip(triples, units):
        if operator_norm(U.conj().T - units[pos[(b, j, i)]]) > bound:
            raise ValueError(f"{label}: star property fails on a unit")
        if i == j:
            total += U
    if operator_norm(total - np.eye(dim)) > bound:
        raise ValueError(f"{label}: representation is not unital")
    for (b, i, j), U in zip(triples, units):
        for (c, k, l), V in zip(triples, units):
            if anti:
                # product reverses: U.V must be the image of e_kl . e_ij
                want = units[pos[(c, k, j)]] if (b == c and i == l) \
                    else np.zeros((dim, dim))
            else:
                want = units[pos[(b, i, l)]] if (b == c and j == k) \
                    else np.zeros((dim, dim))
            if operator_norm(U @ V - want) > bound:
                kind = "antihomomorphism" if anti else "homomorphism"
                raise ValueError(f"{label}: not a {kind} on unit pairs")


@dataclass(frozen=True, eq=False)
class Correspondence:
    """A bimodule Hilbert space between two multi-matrix algebras.

    Instances compare by identity; use correspondences_close to test
    whether two of them carry the same actions numerically.
    """

    left_algebra: MultiMatrixAlgebra
    right_algebra: MultiMatrixAlgebra
    dim: int
    pi_l_units: tuple[np.ndarray, ...]
    pi_r_units: tuple[np.ndarray, ...]
    name: str = field(default="", compare=False)
    validate: bool = field(default=True, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "pi_l_units",
                           tuple(as_complex_matrix(U) for U in self.pi_l_units))
        object.__setattr__(self, "pi_r_units",
                           tuple(as_complex_matrix(U) for U in self.pi_r_units))
        if not self.validate:
            return
        _check_rep(self.left_algebra, self.pi_l_units, self.dim,
                   anti=False, tol=DEFAULT_TOL, label="left action")
        _check_rep(self.right_algebra, self.pi_r_units, self.dim,
                   anti=True, tol=DEFAULT_TOL, label="right action")
        bound = DEFAULT_TOL * (1.0 + max(
            (operator_norm(U) for U in self.pi_l_units + self.pi_r_units),
            default=0.0))
        for U in self.pi_l_units:
            for V in self.pi_r_units:
                if operator_norm(U @ V - V @ U) > bound:
                    raise ValueError("left and right actions do not commute")

    def pi_l(self, x: np.ndarray) -> np.ndarray:
        coords = self.left_algebra.coords(x)
        out = np.zeros((self.dim, self.dim), dtype=np.complex128)
        for c, U in zip(coords, self.pi_l_units):
            if c:
                out += c * U
        return out

    def pi_r(self, y: np.ndarray) -> np.ndarray:
        coords = self.right_algebra.coords(y)
        out = np.zeros((self.dim, self.dim), dtype=np.complex128)
        for c, U in zip(coords, self.pi_r_units):
            if c:
                out += c * U
        return out

    def __repr__(self) -> str:
        return (f"Correspondence({self.name or 'H'}: "
                f"{self.left_algebra!r} | {self.right_algebra!r}, dim={self.dim})")


def correspondences_close(a: Correspondence, b: Correspondence,
                          tol: float = DEFAULT_TOL) -> bool:
    """Same algebra pair, same dimension, and actions within tol."""
    if a is b:
        return True
    if a.left_algebra != b.left_algebra or a.right_algebra != b.right_algebra:
        return False
    if a.dim != b.dim:
        return False
    for U, V in zip(a.pi_l_units + a.pi_r_units, b.pi_l_units + b.pi_r_units):
        if operator_norm(U - V) > tol:
            return False
    return True


@dataclass(frozen=True, eq=False)
class Intertwiner:
    """A linear map between correspondences commuting with both actions."""

    source: Correspondence
    target: Correspondence
    matrix: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "matrix", as_complex_matrix(self.matrix))
        if self.matrix.shape != (self.target.dim, self.source.dim):
            raise ValueError("intertwiner shape mismatch")
        if self.source.left_algebra != self.target.left_algebra or \
                self.source.right_algebra != self.target.right_algebra:
            raise AlgebraMismatch("intertwiner endpoints over different algebras")

    def residual(self) -> float:
        T = self.matrix
        worst = 0.0
        for As, At in zip(self.source.pi_l_units, self.target.pi_l_units):
            worst = max(worst, operator_norm(T @ As - At @ T))
        for As, At in zip(self.source.pi_r_units, self.target.pi_r_units):
            worst = max(worst, operator_norm(T @ As - At @ T))
        return worst

    def is_unitary(self, tol: float = DEFAULT_TOL) -> bool:
        T = self.matrix
        if T.shape[0] != T.shape[1]:
            return False
        d = T.shape[0]
        return operator_norm(T.conj().T @ T - np.eye(d)) <= tol and \
            operator_norm(T @ T.conj().T - np.eye(d)) <= tol

    def compose(self, other: "Intertwiner") -> "Intertwiner":
        if not correspondences_close(other.target, self.source):
            raise NotComposable("intertwiners do not compose")
        return Intertwiner(other.source, self.target, self.matrix @ other.matrix)


def identity_correspondence(std: StandardFormData) -> Correspondence:
    """L²(A) as an (A, A)-correspondence, right action through J."""
    A = std.algebra
    return Correspondence(A, A, std.dim, std.pi_l_units, std.pi_r_units,
                          name=f"L2({A.name})" if A.name else "L2")


def block_correspondence(A: MultiMatrixAlgebra, B: MultiMatrixAlgebra,
                         mult) -> Correspondence:
    """The (A, B)-correspondence with mult[b][c] copies of C^{n_b x m_c}.

    Basis order: (block pair (b, c), copy k, row i, col j), rows fastest
    last. Left action hits the row index, right action the column index.
    """
    mult = [[int(mult[b][c]) for c in range(len(B.block_sizes))]
            for b in range(len(A.block_sizes))]
    if any(m < 0 for row in mult for m in row):
        raise ValueError("multiplicities must be nonnegative")
    index = {}
    dim = 0
    for b, n in enumerate(A.block_sizes):
        for c, m in enumerate(B.block_sizes):
            for k in range(mult[b][c]):
                for i in range(n):
                    for j in range(m):
                        index[(b, c, k, i, j)] = dim
                        dim += 1
    pi_l = []
    for (bb, p, q) in A.unit_triples():
        U = np.zeros((dim, dim), dtype=np.complex128)
        for (b, c, k, i, j), col in index.items():
            if b == bb and i == q:
                U[index[(b, c, k, p, j)], col] = 1.0
        pi_l.append(U)
    pi_r = []
    for (cc, p, q) in B.unit_triples():
        U = np.zeros((dim, dim), dtype=np.complex128)
        for (b, c, k, i, j), col in index.items():
            if c == cc and j == p:
                U[index[(b, c, k, i, q)], col] = 1.0
        pi_r.append(U)
    return Correspondence(A, B, dim, tuple(pi_l), tuple(pi_r))


def vector_correspondence(n: int) -> Correspondence:
    """C^n as a correspondence from M_n to the scalars."""
    A = MultiMatrixAlgebra((n,), name=f"M{n}")
    B = MultiMatrixAlgebra((1,), name="C")
    return block_correspondence(A, B, [[1]])


def conjugate_correspondence(H: Correspondence) -> Correspondence:
    """The conjugate space with n.xi.m given by the adjoint actions.

    In coordinates the conjugate of a vector is its entrywise conjugate, so
    the left action of n becomes conj(pi_r(n*)) and the right action of m
    becomes conj(pi_l(m*)).
    """
    A, B = H.left_algebra, H.right_algebra
    bpos = {t: k for k, t in enumerate(B.unit_triples())}
    apos = {t: k for k, t in enumerate(A.unit_triples())}
    pi_l = [np.conj(H.pi_r_units[bpos[(b, j, i)]])
            for (b, i, j) in B.unit_triples()]
    pi_r = [np.conj(H.pi_l_units[apos[(b, j, i)]])
            for (b, i, j) in A.unit_triples()]
    return Correspondence(B, A, H.dim, tuple(pi_l), tuple(pi_r),
                          name=f"conj({H.name})" if H.name else "",
                          validate=H.validate)


def corr_from_homomorphism(rho_units, source: MultiMatrixAlgebra,
                           std_N: StandardFormData,
                           tol: float = DEFAULT_TOL) -> Correspondence:
    """L²(N)·ρ(1) as an (N, source)-correspondence for a *-hom ρ: source -> N.

    ρ need not be unital; the carrier shrinks to the range of right
    multiplication by the projection ρ(1).
    """
    N = std_N.algebra
    triples = source.unit_triples()
    if len(rho_units) != len(triples):
        raise NotHomomorphism("wrong number of unit images")
    imgs = [as_complex_matrix(U) for U in rho_units]
    pos = {t: k for k, t in enumerate(triples)}
    bound = tol * (1.0 + max((operator_norm(U) for U in imgs), default=0.0))
    for U in imgs:
        if not N.contains(U, tol):
            raise NotHomomorphism("unit image leaves the target algebra")
    for (b, i, j), U in zip(triples, imgs):
        if operator_norm(U.conj().T - imgs[pos[(b, j, i)]]) > bound:
            raise NotHomomorphism("images do not respect the involution")
        for (c, k, l), V in zip(triples, imgs):
            want = imgs[pos[(b, i, l)]] if (b == c and j == k) \
                else np.zeros_like(U)
            if operator_norm(U @ V - want) > bound:
                raise NotHomomorphism("images do not multiply like matrix units")
    unit_img = sum((imgs[pos[t]] for t in triples if t[1] == t[2]),
                   np.zeros((N.dim, N.dim), dtype=np.complex128))

    units = N.matrix_units()
    right_p = np.stack([N.coords(E @ unit_img) for E in units], axis=1)
    Q = orthonormal_columns(right_p, tol)
    pi_l = [Q.conj().T @ L @ Q for L in std_N.pi_l_units]
    pi_r = []
    for t in triples:
        img = imgs[pos[t]]
        R = np.stack([N.coords(E @ img) for E in units], axis=1)
        pi_r.append(Q.conj().T @ R @ Q)
    return Correspondence(N, source, Q.shape[1], tuple(pi_l), tuple(pi_r))


def intertwiner_basis(H: Correspondence, K: Correspondence,
                      tol: float = DEFAULT_TOL) -> np.ndarray:
    """Orthonormal basis of Hom(H, K) as vectorized d_K x d_H matrices."""
    if H.left_algebra != K.left_algebra or H.right_algebra != K.right_algebra:
        raise AlgebraMismatch("correspondences over different algebra pairs")
    dH, dK = H.dim, K.dim
    if dH == 0 or dK == 0:
        return np.zeros((dH * dK, 0), dtype=np.complex128)
    rows = []
    scale = 0.0
    for As, At in zip(H.pi_l_units + H.pi_r_units,
                      K.pi_l_units + K.pi_r_units):
        rows.append(np.kron(At, np.eye(dH)) - np.kron(np.eye(dK), As.T))
        scale = max(scale, operator_norm(As), operator_norm(At))
    return joint_null_space(rows, dH * dK, tol, scale=1.0 + scale)


def unitary_intertwiner(H: Correspondence, K: Correspondence,
                        tol: float = DEFAULT_TOL,
                        seed: int = 0, attempts: int = 8) -> np.ndarray | None:
    """A unitary intertwiner H -> K, or None if none exists numerically."""
    if H.dim != K.dim:
        return None
    if H.dim == 0:
        return np.zeros((0, 0), dtype=np.complex128)
    basis = intertwiner_basis(H, K, tol)
    if basis.shape[1] == 0:
        return None
    rng = np.random.default_rng(seed)
    for _ in range(attempts):
        c = rng.normal(size=basis.shape[1]) + 1j * rng.normal(size=basis.shape[1])
        T = (basis @ c).reshape(K.dim, H.dim)
        try:
            U = polar_unitary(T, tol)
        except Singular:
            continue
        if Intertwiner(H, K, U).residual() <= tol:
            return U
    return None
