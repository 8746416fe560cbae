"""Bimodules over finite rings and the maps between them.

A bimodule stores its carrier group plus one integer action matrix per
additive generator of each ring.  The left action must extend to a ring
homomorphism into End(carrier), the right action to an anti-homomorphism,
and the two must commute; all of that is validated exactly on generators
at construction time.

Maps carry a ``sides`` tag: hom computations for one-sided module maps
reuse the same class with ``sides=("right",)`` or ``("left",)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd
from typing import Sequence

from ..errors import NoSolution, RingMismatch
from ..exact import (
    FiniteAbelianGroup,
    IntegerMatrix,
    cokernel,
    solve_congruences,
)
from .base import FiniteRing, cyclic_ring, matrix_ring

BOTH_SIDES = ("left", "right")


def combine_matrices(mats: Sequence[IntegerMatrix], coeffs: Sequence[int]) -> IntegerMatrix:
    """Integer linear combination sum_i coeffs[i] * mats[i]."""
    if not mats:
        return IntegerMatrix.zeros(0, 0)
    rows, cols = mats[0].rows, mats[0].cols
    acc = [[0] * cols for _ in range(rows)]
    for c, m in zip(coeffs, mats):
        if not c:
            continue
        for i in range(rows):
            mrow = m.data[i]
            arow = acc[i]
            for j in range(cols):
                arow[j] += c * mrow[j]
    return IntegerMatrix(acc, rows, cols)


def matrices_congruent(A: IntegerMatrix, B: IntegerMatrix,
                       row_moduli: Sequence[int]) -> bool:
    """Entry-wise congruence modulo the order of each target generator."""
    if A.rows != B.rows or A.cols != B.cols:
        return False
    for i in range(A.rows):
        d = row_moduli[i]
        ra, rb = A.data[i], B.data[i]
        for j in range(A.cols):
            if (ra[j] - rb[j]) % d:
                return False
    return True


def valid_endomorphism(M: IntegerMatrix, factors: Sequence[int]) -> bool:
    """M defines a group endomorphism iff M[i][j] * d_j = 0 (mod d_i)."""
    for i in range(M.rows):
        d = factors[i]
        for j in range(M.cols):
            if (M.data[i][j] * factors[j]) % d:
                return False
    return True


@dataclass(frozen=True)
class Bimodule:
    """An (R, S)-bimodule with commuting validated actions."""

    left_ring: FiniteRing
    right_ring: FiniteRing
    carrier: FiniteAbelianGroup
    left_action: tuple[IntegerMatrix, ...]
    right_action: tuple[IntegerMatrix, ...]
    name: str = field(default="", compare=False)

    def __post_init__(self):
        c = self.carrier
        fs = c.invariant_factors
        n = c.rank
        R, S = self.left_ring, self.right_ring
        if len(self.left_action) != R.rank or len(self.right_action) != S.rank:
            raise ValueError("one action matrix per ring generator required")
        for mats, ring in ((self.left_action, R), (self.right_action, S)):
            dr = ring.additive.invariant_factors
            for l, M in enumerate(mats):
                if M.rows != n or M.cols != n:
                    raise ValueError("action matrix shape mismatch")
                if not valid_endomorphism(M, fs):
                    raise ValueError("action matrix is not an endomorphism")
                scaled = combine_matrices([M], [dr[l]])
                if not matrices_congruent(scaled, IntegerMatrix.zeros(n, n), fs):
                    raise ValueError("action not additive in the ring argument")
        ident = IntegerMatrix.identity(n)
        lam, rho = self.left_action, self.right_action
        for i in range(R.rank):
            for j in range(R.rank):
                want = combine_matrices(lam, R.mult[i][j])
                if not matrices_congruent(lam[i] @ lam[j], want, fs):
                    raise ValueError("left action is not multiplicative")
        if not matrices_congruent(combine_matrices(lam, R.unit), ident, fs):
            raise ValueError("left action is not unital")
        for i in range(S.rank):
            for j in range(S.rank):
                want = combine_matrices(rho, S.mult[i][j])
                if not matrices_congruent(rho[j] @ rho[i], want, fs):
                    raise ValueError("right action is not anti-multiplicative")
        if not matrices_congruent(combine_matrices(rho, S.unit), ident, fs):
            raise ValueError("right action is not unital")
        for L in lam:
            for P in rho:
                if not matrices_congruent(L @ P, P @ L, fs):
                    raise ValueError("left and right actions do not commute")

    # ----------------------------------------------------- element ops

    @property
    def rank(self) -> int:
        return self.carrier.rank

    def act_left(self, r: Sequence[int], m: Sequence[int]) -> tuple[int, ...]:
        mat = combine_matrices(self.left_action, list(r))
        return self.carrier.reduce(mat.apply(list(m)))

    def act_right(self, m: Sequence[int], s: Sequence[int]) -> tuple[int, ...]:
        mat = combine_matrices(self.right_action, list(s))
        return self.carrier.reduce(mat.apply(list(m)))

    def __repr__(self) -> str:
        label = self.name or f"carrier {self.carrier.invariant_factors}"
        return f"Bimodule({label}; {self.left_ring!r} | {self.right_ring!r})"


@dataclass
class BimoduleMap:
    """Additive map between bimodules intertwining the tagged sides."""

    source: Bimodule
    target: Bimodule
    matrix: IntegerMatrix
    sides: tuple[str, ...] = BOTH_SIDES

    def __post_init__(self):
        src, tgt = self.source, self.target
        M = self.matrix
        if M.rows != tgt.rank or M.cols != src.rank:
            raise ValueError("map matrix shape mismatch")
        sfs = src.carrier.invariant_factors
        tfs = tgt.carrier.invariant_factors
        for i in range(M.rows):
            for j in range(M.cols):
                if (M.data[i][j] * sfs[j]) % tfs[i]:
                    raise ValueError("map does not respect generator orders")
        if "left" in self.sides:
            if src.left_ring != tgt.left_ring:
                raise RingMismatch("left rings differ")
            for Ls, Lt in zip(src.left_action, tgt.left_action):
                if not matrices_congruent(M @ Ls, Lt @ M, tfs):
                    raise ValueError("map does not intertwine the left action")
        if "right" in self.sides:
            if src.right_ring != tgt.right_ring:
                raise RingMismatch("right rings differ")
            for Rs, Rt in zip(src.right_action, tgt.right_action):
                if not matrices_congruent(M @ Rs, Rt @ M, tfs):
                    raise ValueError("map does not intertwine the right action")

    def apply(self, m: Sequence[int]) -> tuple[int, ...]:
        return self.target.carrier.reduce(self.matrix.apply(list(m)))

    def after(self, other: "BimoduleMap") -> "BimoduleMap":
        """self composed after other (self . other)."""
        if other.target is not self.source and other.target != self.source:
            raise ValueError("maps are not composable")
        sides = tuple(s for s in self.sides if s in other.sides)
        return BimoduleMap(other.source, self.target, self.matrix @ other.matrix, sides)

    def is_surjective(self) -> bool:
        tfs = list(self.target.carrier.invariant_factors)
        group, _ = cokernel(self.matrix, tfs)
        return group.order == 1

    def is_bijective(self) -> bool:
        return (self.source.carrier.order == self.target.carrier.order
                and self.is_surjective())

    def preimage(self, target_vec: Sequence[int]) -> tuple[int, ...]:
        """Some source element mapping onto target_vec; NoSolution if none."""
        tfs = list(self.target.carrier.invariant_factors)
        sol = solve_congruences(self.matrix, tfs, list(target_vec))
        return self.source.carrier.reduce(sol.particular)


def maps_equal(f: BimoduleMap, g: BimoduleMap) -> bool:
    if f.source.carrier != g.source.carrier or f.target.carrier != g.target.carrier:
        return False
    return matrices_congruent(f.matrix, g.matrix, f.target.carrier.invariant_factors)


def identity_map(M: Bimodule, sides: tuple[str, ...] = BOTH_SIDES) -> BimoduleMap:
    return BimoduleMap(M, M, IntegerMatrix.identity(M.rank), sides)


def invert_bimodule_map(f: BimoduleMap) -> BimoduleMap:
    """Two-sided inverse of a bijective map, found by congruence solving."""
    tgt = f.target
    tfs = list(tgt.carrier.invariant_factors)
    cols = []
    for i in range(tgt.rank):
        e = [1 if j == i else 0 for j in range(tgt.rank)]
        try:
            sol = solve_congruences(f.matrix, tfs, e)
        except NoSolution as exc:
            raise ValueError("map is not surjective, cannot invert") from exc
        cols.append(list(f.source.carrier.reduce(sol.particular)))
    g = BimoduleMap(tgt, f.source, IntegerMatrix.from_columns(cols, f.source.rank), f.sides)
    sfs = f.source.carrier.invariant_factors
    if not matrices_congruent(g.matrix @ f.matrix, IntegerMatrix.identity(f.source.rank), sfs):
        raise ValueError("map is not injective, cannot invert")
    return g


# --------------------------------------------------------- constructors

def regular_bimodule(R: FiniteRing) -> Bimodule:
    """R as an (R, R)-bimodule by left and right multiplication."""
    gens = [tuple(1 if j == i else 0 for j in range(R.rank)) for i in range(R.rank)]
    lam = tuple(R.left_mult_matrix(g) for g in gens)
    rho = tuple(R.right_mult_matrix(g) for g in gens)
    return Bimodule(R, R, R.additive, lam, rho, name=f"{R.name or 'R'} (regular)")


def zero_bimodule(R: FiniteRing, S: FiniteRing) -> Bimodule:
    empty = IntegerMatrix.zeros(0, 0)
    return Bimodule(R, S, FiniteAbelianGroup(()),
                    tuple(empty for _ in range(R.rank)),
                    tuple(empty for _ in range(S.rank)), name="0")


def scalar_bimodule(A: FiniteRing, B: FiniteRing, d: int) -> Bimodule:
    """Z/d with both cyclic rings acting by multiplication.

    Requires A and B to be cyclic ring presentations (single generator
    equal to the unit) with d dividing both characteristics.
    """
    for ring in (A, B):
        if ring.rank != 1 or ring.unit != (1,):
            raise ValueError("scalar bimodules need cyclic rings generated by 1")
    if A.characteristic % d or B.characteristic % d:
        raise ValueError("d must divide both characteristics")
    one = IntegerMatrix([[1]])
    return Bimodule(A, B, FiniteAbelianGroup((d,)), (one,), (one,), name=f"Z/{d}")


def right_module(R: FiniteRing, carrier: FiniteAbelianGroup,
                 action: Sequence[IntegerMatrix], name: str = "") -> Bimodule:
    """A right R-module, packaged with scalar left action by Z/char(R)."""
    char = R.characteristic
    C = cyclic_ring(char)
    n = carrier.rank
    return Bimodule(C, R, carrier, (IntegerMatrix.identity(n),), tuple(action),
                    name=name)


def column_module(R: FiniteRing, n: int, Mn: FiniteRing | None = None) -> Bimodule:
    """R^n as a (M_n(R), R)-bimodule: matrices act on the left, R scales."""
    if Mn is None:
        Mn = matrix_ring(R, n)
    k = R.rank
    fs = R.additive.invariant_factors
    carrier = FiniteAbelianGroup(tuple(fs[l] for l in range(k) for _ in range(n)))
    rank = k * n

    def idx(l: int, a: int) -> int:
        return l * n + a

    lam = []
    for l2 in range(k):
        for i in range(n):
            for j in range(n):
                cols = []
                for l in range(k):
                    for a in range(n):
                        vec = [0] * rank
                        if a == j:
                            for m, cval in enumerate(R.mult[l2][l]):
                                if cval:
                                    vec[idx(m, i)] = cval
                        cols.append(vec)
                lam.append(IntegerMatrix.from_columns(cols, rank))
    rho = []
    for l2 in range(k):
        cols = []
        for l in range(k):
            for a in range(n):
                vec = [0] * rank
                for m, cval in enumerate(R.mult[l][l2]):
                    if cval:
                        vec[idx(m, a)] = cval
                cols.append(vec)
        rho.append(IntegerMatrix.from_columns(cols, rank))
    return Bimodule(Mn, R, carrier, tuple(lam), tuple(rho),
                    name=f"{R.name or 'R'}^{n} (columns)")


def row_module(R: FiniteRing, n: int, Mn: FiniteRing | None = None) -> Bimodule:
    """R^n as an (R, M_n(R))-bimodule: R scales, matrices act on the right."""
    if Mn is None:
        Mn = matrix_ring(R, n)
    k = R.rank
    fs = R.additive.invariant_factors
    carrier = FiniteAbelianGroup(tuple(fs[l] for l in range(k) for _ in range(n)))
    rank = k * n

    def idx(l: int, a: int) -> int:
        return l * n + a

    lam = []
    for l2 in range(k):
        cols = []
        for l in range(k):
            for a in range(n):
                vec = [0] * rank
                for m, cval in enumerate(R.mult[l2][l]):
                    if cval:
                        vec[idx(m, a)] = cval
                cols.append(vec)
        lam.append(IntegerMatrix.from_columns(cols, rank))
    rho = []
    for l2 in range(k):
        for i in range(n):
            for j in range(n):
                cols = []
                for l in range(k):
                    for a in range(n):
                        vec = [0] * rank
                        if a == i:
                            for m, cval in enumerate(R.mult[l][l2]):
                                if cval:
                                    vec[idx(m, j)] = cval
                        cols.append(vec)
                rho.append(IntegerMatrix.from_columns(cols, rank))
    return Bimodule(R, Mn, carrier, tuple(lam), tuple(rho),
                    name=f"{R.name or 'R'}^{n} (rows)")


def bimodule_direct_sum(M1: Bimodule, M2: Bimodule) -> Bimodule:
    """Direct sum, re-presented so the carrier stays in canonical form."""
    if M1.left_ring != M2.left_ring or M1.right_ring != M2.right_ring:
        raise RingMismatch("direct sum needs matching rings on both sides")
    combined = list(M1.carrier.invariant_factors) + list(M2.carrier.invariant_factors)
    n = len(combined)
    group, proj = cokernel(IntegerMatrix.zeros(n, 0), combined)
    n1 = M1.rank

    def block_apply(A1: IntegerMatrix, A2: IntegerMatrix, vec: list[int]) -> list[int]:
        return A1.apply(vec[:n1]) + A2.apply(vec[n1:])

    def transported(A1: IntegerMatrix, A2: IntegerMatrix) -> IntegerMatrix:
        cols = [list(proj.apply(block_apply(A1, A2, proj.section(a))))
                for a in range(group.rank)]
        return IntegerMatrix.from_columns(cols, group.rank)

    lam = tuple(transported(a, b) for a, b in zip(M1.left_action, M2.left_action))
    rho = tuple(transported(a, b) for a, b in zip(M1.right_action, M2.right_action))
    name = f"{M1.name}+{M2.name}" if M1.name and M2.name else ""
    return Bimodule(M1.left_ring, M1.right_ring, group, lam, rho, name=name)
