"""Balanced tensor products of bimodules over a shared middle ring.

The tensor M (x)_S N is presented on the ambient group generated by the
generator pairs (i, j), with modulus gcd(ord e_i, ord e_j), modulo the
middle-linearity relations (e_i . s) (x) e_j = e_i (x) (s . e_j) taken over
the additive generators s of S.  Everything downstream (induced maps,
associators, unitors) factors through that presentation.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Callable, Sequence

from ..errors import NotBalanced, RingMismatch
from ..exact import CokernelProjection, FiniteAbelianGroup, IntegerMatrix, cokernel
from .bimodules import BOTH_SIDES, Bimodule, BimoduleMap, matrices_congruent


def kron(A: IntegerMatrix, B: IntegerMatrix) -> IntegerMatrix:
    rows = A.rows * B.rows
    cols = A.cols * B.cols
    data = [[0] * cols for _ in range(rows)]
    for i in range(A.rows):
        arow = A.data[i]
        for k in range(B.rows):
            brow = B.data[k]
            out = data[i * B.rows + k]
            for j in range(A.cols):
                a = arow[j]
                if not a:
                    continue
                base = j * B.cols
                for l in range(B.cols):
                    out[base + l] = a * brow[l]
    return IntegerMatrix(data, rows, cols)


@dataclass
class TensorProduct:
    """Presentation of M (x)_S N together with its universal data."""

    left_factor: Bimodule
    right_factor: Bimodule
    module: Bimodule
    projection: CokernelProjection
    ambient_moduli: tuple[int, ...]
    relation_matrix: IntegerMatrix

    @property
    def ambient_size(self) -> int:
        return len(self.ambient_moduli)

    def ambient_index(self, i: int, j: int) -> int:
        return i * self.right_factor.rank + j

    def pure(self, m: Sequence[int], n: Sequence[int]) -> tuple[int, ...]:
        """Image of the pure tensor m (x) n in the quotient coordinates."""
        nN = self.right_factor.rank
        amb = [0] * self.ambient_size
        for i, a in enumerate(m):
            if not a:
                continue
            for j, b in enumerate(n):
                if b:
                    amb[i * nN + j] = a * b
        return self.projection.apply(amb)

    def section(self, a: int) -> list[int]:
        return self.projection.section(a)


def tensor_product(M: Bimodule, N: Bimodule, name: str = "") -> TensorProduct:
    if M.right_ring != N.left_ring:
        raise RingMismatch("middle rings differ, cannot balance the tensor")
    S = M.right_ring
    nM, nN = M.rank, N.rank
    cM = M.carrier.invariant_factors
    cN = N.carrier.invariant_factors
    amb = nM * nN
    moduli = tuple(gcd(cM[i], cN[j]) for i in range(nM) for j in range(nN))

    rel_cols: list[list[int]] = []
    for g in range(S.rank):
        rho = M.right_action[g]
        lam = N.left_action[g]
        for i in range(nM):
            for j in range(nN):
                col = [0] * amb
                for k in range(nM):
                    v = rho.data[k][i]
                    if v:
                        col[k * nN + j] += v
                for l in range(nN):
                    v = lam.data[l][j]
                    if v:
                        col[i * nN + l] -= v
                if any(col):
                    rel_cols.append(col)
    relations = IntegerMatrix.from_columns(rel_cols, amb)
    group, proj = cokernel(relations, list(moduli))

    def transported(act_on_ambient: Callable[[list[int]], list[int]]) -> IntegerMatrix:
        cols = [list(proj.apply(act_on_ambient(proj.section(a))))
                for a in range(group.rank)]
        return IntegerMatrix.from_columns(cols, group.rank)

    lamT = []
    for Lr in M.left_action:
        def act(v: list[int], Lr=Lr) -> list[int]:
            out = [0] * amb
            for i in range(nM):
                row = v[i * nN:(i + 1) * nN]
                if not any(row):
                    continue
                for k in range(nM):
                    c = Lr.data[k][i]
                    if not c:
                        continue
                    base = k * nN
                    for j in range(nN):
                        if row[j]:
                            out[base + j] += c * row[j]
            return out
        lamT.append(transported(act))
    rhoT = []
    for Rt in N.right_action:
        def act(v: list[int], Rt=Rt) -> list[int]:
            out = [0] * amb
            for i in range(nM):
                base = i * nN
                row = v[base:base + nN]
                if not any(row):
                    continue
                img = Rt.apply(row)
                for l in range(nN):
                    if img[l]:
                        out[base + l] += img[l]
            return out
        rhoT.append(transported(act))

    label = name or (f"{M.name}(x){N.name}" if M.name and N.name else "")
    module = Bimodule(M.left_ring, N.right_ring, group, tuple(lamT), tuple(rhoT),
                      name=label)
    return TensorProduct(M, N, module, proj, moduli, relations)


def factor_through_tensor(tp: TensorProduct, ambient_matrix: IntegerMatrix,
                          target: Bimodule,
                          sides: tuple[str, ...] = BOTH_SIDES) -> BimoduleMap:
    """Induce a map on the tensor from a balanced map on generator pairs.

    ambient_matrix columns are indexed by the pairs (i, j); the map must
    kill every balancing relation, otherwise NotBalanced is raised.
    """
    B = ambient_matrix
    if B.rows != target.rank or B.cols != tp.ambient_size:
        raise ValueError("ambient matrix shape mismatch")
    tfs = target.carrier.invariant_factors
    for c in range(B.cols):
        g = tp.ambient_moduli[c]
        for r in range(B.rows):
            if (B.data[r][c] * g) % tfs[r]:
                raise NotBalanced("map does not respect generator pair orders")
    rel = tp.relation_matrix
    image = B @ rel
    if not matrices_congruent(image, IntegerMatrix.zeros(B.rows, rel.cols), tfs):
        raise NotBalanced("map does not kill the balancing relations")
    cols = [list(target.carrier.reduce(B.apply(tp.section(a))))
            for a in range(tp.module.rank)]
    induced = IntegerMatrix.from_columns(cols, target.rank)
    return BimoduleMap(tp.module, target, induced, sides)


def tensor_of_maps(tp_src: TensorProduct, tp_tgt: TensorProduct,
                   f: BimoduleMap, g: BimoduleMap) -> BimoduleMap:
    """The induced map f (x) g between two tensor presentations."""
    if f.source is not tp_src.left_factor and f.source != tp_src.left_factor:
        raise ValueError("f does not start at the source left factor")
    if g.source is not tp_src.right_factor and g.source != tp_src.right_factor:
        raise ValueError("g does not start at the source right factor")
    if f.target != tp_tgt.left_factor or g.target != tp_tgt.right_factor:
        raise ValueError("maps do not land in the target factors")
    amb_map = kron(f.matrix, g.matrix)
    cols = [list(tp_tgt.projection.apply(amb_map.apply(tp_src.section(a))))
            for a in range(tp_src.module.rank)]
    induced = IntegerMatrix.from_columns(cols, tp_tgt.module.rank)
    # well-definedness: relations and pair orders must die in the target
    rel = tp_src.relation_matrix
    for c in range(rel.cols):
        img = tp_tgt.projection.apply(amb_map.apply(rel.column(c)))
        if any(img):
            raise NotBalanced("map pair does not preserve balancing relations")
    zero = [0] * tp_src.ambient_size
    for idx, mod in enumerate(tp_src.ambient_moduli):
        vec = list(zero)
        vec[idx] = mod
        if any(tp_tgt.projection.apply(amb_map.apply(vec))):
            raise NotBalanced("map pair does not respect generator pair orders")
    sides = []
    if "left" in f.sides:
        sides.append("left")
    if "right" in g.sides:
        sides.append("right")
    return BimoduleMap(tp_src.module, tp_tgt.module, induced, tuple(sides))


def tensor_associator(t_ab: TensorProduct, t_ab_c: TensorProduct,
                      t_bc: TensorProduct, t_a_bc: TensorProduct) -> BimoduleMap:
    """Canonical map (A (x) B) (x) C -> A (x) (B (x) C) on presentations."""
    if t_ab_c.left_factor is not t_ab.module:
        raise ValueError("(A(x)B)(x)C must be built on the A(x)B presentation")
    if t_a_bc.right_factor is not t_bc.module:
        raise ValueError("A(x)(B(x)C) must be built on the B(x)C presentation")
    A = t_ab.left_factor
    B = t_ab.right_factor
    C = t_ab_c.right_factor
    nA, nB, nC = A.rank, B.rank, C.rank
    nBC = t_bc.module.rank

    pure_bc = {}
    eB = [0] * nB
    eC = [0] * nC
    for j in range(nB):
        eB[j] = 1
        for k in range(nC):
            eC[k] = 1
            pure_bc[(j, k)] = t_bc.pure(eB, eC)
            eC[k] = 0
        eB[j] = 0

    cols = []
    for a in range(t_ab_c.module.rank):
        v = t_ab_c.section(a)  # indexed by (x, k), x a generator of A(x)B
        amb = [0] * (nA * nBC)
        for x in range(t_ab.module.rank):
            for k in range(nC):
                c1 = v[x * nC + k]
                if not c1:
                    continue
                s = t_ab.section(x)  # indexed by (i, j)
                for i in range(nA):
                    for j in range(nB):
                        c2 = s[i * nB + j]
                        if not c2:
                            continue
                        w = pure_bc[(j, k)]
                        base = i * nBC
                        for y in range(nBC):
                            if w[y]:
                                amb[base + y] += c1 * c2 * w[y]
        cols.append(list(t_a_bc.projection.apply(amb)))
    matrix = IntegerMatrix.from_columns(cols, t_a_bc.module.rank)
    return BimoduleMap(t_ab_c.module, t_a_bc.module, matrix, BOTH_SIDES)


def left_unitor(tp: TensorProduct) -> BimoduleMap:
    """R (x)_R M -> M, r (x) m -> r.m, for tp built on the regular bimodule."""
    M = tp.right_factor
    R = tp.left_factor
    if R.carrier != R.left_ring.additive:
        raise ValueError("left factor is not a regular bimodule presentation")
    cols = []
    for i in range(R.rank):
        act = M.left_action[i]
        for j in range(M.rank):
            cols.append(list(M.carrier.reduce(act.column(j))))
    amb = IntegerMatrix.from_columns(cols, M.rank)
    return factor_through_tensor(tp, amb, M, BOTH_SIDES)


def right_unitor(tp: TensorProduct) -> BimoduleMap:
    """M (x)_S S -> M, m (x) s -> m.s, for tp built on the regular bimodule."""
    M = tp.left_factor
    S = tp.right_factor
    if S.carrier != S.right_ring.additive:
        raise ValueError("right factor is not a regular bimodule presentation")
    cols = []
    for j in range(M.rank):
        for i in range(S.rank):
            act = M.right_action[i]
            cols.append(list(M.carrier.reduce(act.column(j))))
    amb = IntegerMatrix.from_columns(cols, M.rank)
    return factor_through_tensor(tp, amb, M, BOTH_SIDES)
