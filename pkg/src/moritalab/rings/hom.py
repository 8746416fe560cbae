"""Hom groups and endomorphism rings of bimodules, computed exactly.

A module map is a matrix X with X[i][j] * ord(src_j) = 0 (mod ord(tgt_i))
that intertwines the requested actions.  The solution lattice K of those
congruences, modulo the lattice K0 of matrices representing the zero map,
is the hom group; its cokernel presentation supplies coordinates.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence

from ..errors import SearchBudgetExceeded, UnitDegenerate
from ..exact import (
    FiniteAbelianGroup,
    IntegerMatrix,
    cokernel,
    lattice_column_basis,
    solve_congruences,
    solve_integer,
)
from .base import FiniteRing
from .bimodules import BOTH_SIDES, Bimodule, BimoduleMap


def _sides_tuple(side: str) -> tuple[str, ...]:
    if side == "both":
        return BOTH_SIDES
    if side in ("left", "right"):
        return (side,)
    raise ValueError("side must be 'left', 'right', or 'both'")


@dataclass
class HomGroup:
    """All maps source -> target intertwining the tagged sides."""

    source: Bimodule
    target: Bimodule
    sides: tuple[str, ...]
    group: FiniteAbelianGroup
    basis_matrix: IntegerMatrix  # lattice basis of K, one column per basis map
    _proj: "object"

    @property
    def rank(self) -> int:
        return self.group.rank

    def from_coordinates(self, coords: Sequence[int]) -> BimoduleMap:
        vec = self._proj.section_vector(list(coords))
        flat = self.basis_matrix.apply(vec)
        nt, ns = self.target.rank, self.source.rank
        data = [[flat[i * ns + j] for j in range(ns)] for i in range(nt)]
        return BimoduleMap(self.source, self.target, IntegerMatrix(data, nt, ns),
                           self.sides)

    def coordinates(self, f: BimoduleMap | IntegerMatrix) -> tuple[int, ...]:
        M = f.matrix if isinstance(f, BimoduleMap) else f
        flat = [M.data[i][j] for i in range(M.rows) for j in range(M.cols)]
        y = solve_integer(self.basis_matrix, flat)
        if y is None:
            raise ValueError("matrix is not a map in this hom group")
        return self._proj.apply(y)

    def elements(self) -> Iterator[BimoduleMap]:
        for coords in self.group.elements():
            yield self.from_coordinates(coords)


class _CoordProjection:
    """Wraps a cokernel projection with a linear section on coordinates."""

    def __init__(self, proj):
        self.proj = proj

    def apply(self, vec: Sequence[int]) -> tuple[int, ...]:
        return self.proj.apply(vec)

    def section_vector(self, coords: Sequence[int]) -> list[int]:
        out = None
        for a, c in enumerate(coords):
            if not c:
                continue
            s = self.proj.section(a)
            if out is None:
                out = [c * x for x in s]
            else:
                for k, x in enumerate(s):
                    out[k] += c * x
        if out is None:
            ncols = self.proj.section_matrix.rows
            out = [0] * ncols
        return out


def hom_group(M: Bimodule, N: Bimodule, side: str = "right") -> HomGroup:
    sides = _sides_tuple(side)
    if "left" in sides and M.left_ring != N.left_ring:
        raise ValueError("left rings differ")
    if "right" in sides and M.right_ring != N.right_ring:
        raise ValueError("right rings differ")
    nt, ns = N.rank, M.rank
    nvars = nt * ns
    if nvars == 0:
        group, proj = cokernel(IntegerMatrix.zeros(0, 0), [])
        return HomGroup(M, N, sides, group, IntegerMatrix.zeros(0, 0),
                        _CoordProjection(proj))
    cS = M.carrier.invariant_factors
    cT = N.carrier.invariant_factors

    def var(i: int, j: int) -> int:
        return i * ns + j

    rows: list[list[int]] = []
    moduli: list[int] = []
    for i in range(nt):
        for j in range(ns):
            row = [0] * nvars
            row[var(i, j)] = cS[j]
            rows.append(row)
            moduli.append(cT[i])
    action_pairs = []
    if "right" in sides:
        action_pairs += list(zip(M.right_action, N.right_action))
    if "left" in sides:
        action_pairs += list(zip(M.left_action, N.left_action))
    for As, At in action_pairs:
        # X @ As = At @ X entry-wise, modulo target generator orders
        for i in range(nt):
            for j in range(ns):
                row = [0] * nvars
                for k in range(ns):
                    v = As.data[k][j]
                    if v:
                        row[var(i, k)] += v
                for k in range(nt):
                    v = At.data[i][k]
                    if v:
                        row[var(k, j)] -= v
                if any(row):
                    rows.append(row)
                    moduli.append(cT[i])
    A = IntegerMatrix(rows, len(rows), nvars)
    sol = solve_congruences(A, moduli, [0] * len(rows))
    K = lattice_column_basis(sol.kernel)

    zero_cols = []
    for i in range(nt):
        for j in range(ns):
            col = [0] * nvars
            col[var(i, j)] = cT[i]
            zero_cols.append(col)
    K0_in_K = []
    for col in zero_cols:
        y = solve_integer(K, col)
        if y is None:
            raise RuntimeError("zero-map lattice escaped the solution lattice")
        K0_in_K.append(y)
    rank = K.cols
    group, proj = cokernel(IntegerMatrix.from_columns(K0_in_K, rank), [0] * rank)
    return HomGroup(M, N, sides, group, K, _CoordProjection(proj))


@dataclass
class EndomorphismRing:
    """End(M) as a finite ring, with the dictionary back to matrices."""

    ring: FiniteRing
    hom: HomGroup

    def matrix_of(self, coords: Sequence[int]) -> IntegerMatrix:
        return self.hom.from_coordinates(coords).matrix

    def coordinates_of(self, X: IntegerMatrix) -> tuple[int, ...]:
        return self.hom.coordinates(X)


def endomorphism_ring(M: Bimodule, side: str = "right",
                      name: str = "") -> EndomorphismRing:
    """End of M over the given side, composition (f.g)(x) = f(g(x))."""
    if M.rank == 0:
        raise UnitDegenerate("endomorphism ring of the zero module")
    H = hom_group(M, M, side)
    r = H.rank
    basis_mats = [H.from_coordinates([1 if k == a else 0 for k in range(r)]).matrix
                  for a in range(r)]
    mult = tuple(
        tuple(H.coordinates(basis_mats[a] @ basis_mats[b]) for b in range(r))
        for a in range(r)
    )
    unit = H.coordinates(IntegerMatrix.identity(M.rank))
    ring = FiniteRing(H.group, mult, unit, name=name or f"End({M.name})")
    return EndomorphismRing(ring, H)


def end_ring(M: Bimodule, side: str = "right") -> FiniteRing:
    """The endomorphism ring of M alone, without the matrix dictionary."""
    return endomorphism_ring(M, side).ring


def bimodule_isomorphic(M: Bimodule, N: Bimodule,
                        budget: int = 1 << 16) -> BimoduleMap | None:
    """Search for a two-sided bimodule isomorphism M -> N, None if absent."""
    if M.left_ring != N.left_ring or M.right_ring != N.right_ring:
        return None
    if M.carrier != N.carrier:
        return None
    if M.rank == 0:
        return BimoduleMap(M, N, IntegerMatrix.zeros(0, 0), BOTH_SIDES)
    H = hom_group(M, N, side="both")
    if H.group.order > budget:
        raise SearchBudgetExceeded(
            f"hom group of order {H.group.order} exceeds budget {budget}")
    for f in H.elements():
        if f.is_bijective():
            return f
    return None
