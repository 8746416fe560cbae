"""GNS construction and the standard form with its modular data.

L²(A, φ) is realized on the matrix-unit coordinate space of the algebra:
Λ(x) = x·ρ^{1/2} identifies elements with vectors, and the matrix units
are an orthonormal basis for <x, y> = φ(x*y). The involution S(Λx) = Λ(x*)
is assembled as an antilinear matrix and handed to the polar routine; J
and Δ are whatever comes back, never a closed form assumed up front.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import NotFaithful
from ..numkernel import (
    DEFAULT_TOL,
    AntilinearOp,
    commutant,
    hermitian_power,
    matrices_to_columns,
    operator_norm,
    polar_antilinear,
    subspaces_equal,
)
from .algebras import MultiMatrixAlgebra, State


@dataclass(frozen=True)
class StandardFormData:
    """L²(A, φ) with Λ, the modular involution J, and the modular matrix Δ."""

    algebra: MultiMatrixAlgebra
    state: State
    lam: np.ndarray          # coords of x -> coords of Λ(x) = x.rho^{1/2}
    lam_inv: np.ndarray
    S: AntilinearOp
    J: AntilinearOp
    delta: np.ndarray
    delta_half: np.ndarray
    delta_minus_half: np.ndarray
    pi_l_units: tuple[np.ndarray, ...] = field(repr=False, default=())
    pi_r_units: tuple[np.ndarray, ...] = field(repr=False, default=())

    @property
    def dim(self) -> int:
        return self.algebra.vector_dim

    def Lambda(self, x: np.ndarray) -> np.ndarray:
        return self.lam @ self.algebra.coords(x)

    def Lambda_inv(self, v: np.ndarray) -> np.ndarray:
        return self.algebra.from_coords(self.lam_inv @ v)

    def pi_l(self, x: np.ndarray) -> np.ndarray:
        coords = self.algebra.coords(x)
        out = np.zeros((self.dim, self.dim), dtype=np.complex128)
        for c, U in zip(coords, self.pi_l_units):
            if c:
                out += c * U
        return out

    def pi_r(self, y: np.ndarray) -> np.ndarray:
        coords = self.algebra.coords(y)
        out = np.zeros((self.dim, self.dim), dtype=np.complex128)
        for c, U in zip(coords, self.pi_r_units):
            if c:
                out += c * U
        return out

    def cyclic_vector(self) -> np.ndarray:
        """Λ(1), the cyclic and separating vector of the standard form."""
        return self.lam @ self.algebra.coords(self.algebra.identity())

    def modular_twist(self, y: np.ndarray, sign: int = -1) -> np.ndarray:
        """The algebra element with π_l-image Δ^{sign/2}·π_l(y)·Δ^{-sign/2}."""
        if sign not in (-1, 1):
            raise ValueError("sign must be +1 or -1")
        a, b = ((self.delta_minus_half, self.delta_half) if sign == -1
                else (self.delta_half, self.delta_minus_half))
        op = a @ self.pi_l(y) @ b
        twisted = self.Lambda_inv(op @ self.cyclic_vector())
        # the twist stays inside the algebra; detect drift early
        resid = operator_norm(op - self.pi_l(twisted))
        if resid > DEFAULT_TOL * (1.0 + operator_norm(op)):
            raise NotFaithful(f"modular twist left the algebra, residual {resid:.3g}")
        return twisted


def _mult_matrices(A: MultiMatrixAlgebra):
    """Left and right multiplication matrices of every matrix unit."""
    units = A.matrix_units()
    lefts, rights = [], []
    for U in units:
        lcols = [A.coords(U @ E) for E in units]
        rcols = [A.coords(E @ U) for E in units]
        lefts.append(np.stack(lcols, axis=1))
        rights.append(np.stack(rcols, axis=1))
    return lefts, rights


def gns_standard_form(A: MultiMatrixAlgebra, phi: State,
                      tol: float = DEFAULT_TOL) -> StandardFormData:
    """Standard form of (A, φ) with modular data from the polar step."""
    if phi.algebra != A:
        raise NotFaithful("state was built on a different algebra")
    rho = phi.density
    rho_half = hermitian_power(rho, 0.5)
    rho_minus_half = hermitian_power(rho, -0.5)
    units = A.matrix_units()

    lam = np.stack([A.coords(E @ rho_half) for E in units], axis=1)
    lam_inv = np.stack([A.coords(E @ rho_minus_half) for E in units], axis=1)

    # S(ξ) = Λ((Λ^{-1}ξ)*): columns are images of the basis vectors
    s_cols = []
    for E in units:
        x = E @ rho_minus_half
        s_cols.append(A.coords(x.conj().T @ rho_half))
    S = AntilinearOp(np.stack(s_cols, axis=1))
    J, delta = polar_antilinear(S)
    delta_half = hermitian_power(delta, 0.5, tol)
    delta_minus_half = hermitian_power(delta, -0.5, tol)

    lefts, _ = _mult_matrices(A)
    # right action through the modular involution: y -> J y* J
    MJ = J.matrix
    pi_r_units = []
    for b, i, j in A.unit_triples():
        star = lefts[_unit_pos(A, b, j, i)]
        pi_r_units.append(MJ @ np.conj(star @ MJ))
    return StandardFormData(A, phi, lam, lam_inv, S, J, delta,
                            delta_half, delta_minus_half,
                            tuple(lefts), tuple(pi_r_units))


def _unit_pos(A: MultiMatrixAlgebra, b: int, i: int, j: int) -> int:
    pos = 0
    for bb, nn in enumerate(A.block_sizes):
        if bb == b:
            return pos + i * nn + j
        pos += nn * nn
    raise ValueError("block index out of range")


def standard_form_residuals(std: StandardFormData) -> dict[str, float]:
    """Deviation of each defining identity of the standard form.

    Keys: "polar" (S against J.Delta^{1/2}), "involution" (J squared
    against the identity), "commutant" (right action against the
    commutant of the left one), "center" (Delta-conjugation moving a
    central element).
    """
    d = std.dim
    s_built = std.J.compose_linear(std.delta_half).matrix
    polar = operator_norm(s_built - std.S.matrix)
    involution = operator_norm(std.J.compose_antilinear(std.J) - np.eye(d))
    comm = commutant(std.pi_l_units, d)
    _, comm_res = subspaces_equal(comm, matrices_to_columns(std.pi_r_units))
    center = 0.0
    for z in std.algebra.center_basis():
        Z = std.pi_l(z)
        center = max(center, operator_norm(std.delta @ Z - Z @ std.delta))
    return {"polar": polar, "involution": involution,
            "commutant": comm_res, "center": center}
