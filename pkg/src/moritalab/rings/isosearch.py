"""Backtracking search for isomorphisms between finite rings.

The search assigns images to additive generators one at a time.  Products
among already-assigned generators impose congruences that are linear in
the next unknown image, so each level is a congruence solve followed by
enumeration of a (usually small) solution coset; self-products stay
nonlinear and are applied as filters.  Candidate pools that cannot be cut
down linearly (the first level, typically) are filtered with vectorized
element tables.
"""

from __future__ import annotations

from math import gcd, lcm

import numpy as np

from ..errors import NoSolution, SearchBudgetExceeded
from ..exact import IntegerMatrix, cokernel, lattice_column_basis, solve_congruences
from .base import FiniteRing

NODE_CAP = 200_000
COSET_CAP = 1 << 14


def is_ring_isomorphism(A: FiniteRing, B: FiniteRing, T: IntegerMatrix) -> bool:
    """Full independent check that T (A coords -> B coords) is a ring iso."""
    if A.additive != B.additive:
        return False
    if T.rows != B.rank or T.cols != A.rank:
        return False
    fa = A.additive.invariant_factors
    images = [B.additive.reduce(T.column(l)) for l in range(A.rank)]
    for l, img in enumerate(images):
        if fa[l] % B.additive.element_order(img):
            return False
    for i in range(A.rank):
        for j in range(A.rank):
            lhs = B.mul(images[i], images[j])
            acc = B.additive.zero()
            for l, c in enumerate(A.mult[i][j]):
                if c:
                    acc = B.additive.add(acc, B.additive.scale(c, images[l]))
            if lhs != acc:
                return False
    unit_img = B.additive.zero()
    for l, c in enumerate(A.unit):
        if c:
            unit_img = B.additive.add(unit_img, B.additive.scale(c, images[l]))
    if unit_img != B.unit:
        return False
    group, _ = cokernel(T, list(B.additive.invariant_factors))
    return group.order == 1


def _element_table(factors: tuple[int, ...]) -> np.ndarray:
    N = 1
    for d in factors:
        N *= d
    k = len(factors)
    coords = np.empty((N, k), dtype=np.int64)
    rem = np.arange(N, dtype=np.int64)
    for i in range(k - 1, -1, -1):
        coords[:, i] = rem % factors[i]
        rem //= factors[i]
    return coords


def _square_table(X: np.ndarray, ring: FiniteRing) -> np.ndarray:
    k = ring.rank
    acc = np.zeros_like(X)
    for i in range(k):
        Mi = np.array([[ring.mult[i][j][l] for l in range(k)] for j in range(k)],
                      dtype=np.int64)
        acc += X[:, i:i + 1] * (X @ Mi)
    fs = np.array(ring.additive.invariant_factors, dtype=np.int64)
    return acc % fs


def _element_orders(X: np.ndarray, factors: tuple[int, ...]) -> np.ndarray:
    fs = np.array(factors, dtype=np.int64)
    per = fs // np.gcd(X, fs)
    return np.lcm.reduce(per, axis=1)


def _subgroup_order(cols: list[tuple[int, ...]], ring: FiniteRing) -> int:
    if not cols:
        return 1
    M = IntegerMatrix.from_columns([list(c) for c in cols], ring.rank)
    group, _ = cokernel(M, list(ring.additive.invariant_factors))
    return ring.order // group.order


def _left_mult_matrix(B: FiniteRing, t: tuple[int, ...]) -> IntegerMatrix:
    cols = []
    for c in range(B.rank):
        e = tuple(1 if i == c else 0 for i in range(B.rank))
        cols.append(list(B.mul(t, e)))
    return IntegerMatrix.from_columns(cols, B.rank)


def _right_mult_matrix(B: FiniteRing, t: tuple[int, ...]) -> IntegerMatrix:
    cols = []
    for c in range(B.rank):
        e = tuple(1 if i == c else 0 for i in range(B.rank))
        cols.append(list(B.mul(e, t)))
    return IntegerMatrix.from_columns(cols, B.rank)


def _enumerate_coset(particular: list[int], kernel: IntegerMatrix,
                     factors: tuple[int, ...]) -> list[tuple[int, ...]]:
    k = len(factors)
    base = tuple(particular[i] % factors[i] for i in range(k))
    K = lattice_column_basis(kernel)
    gens = [tuple(K.data[i][c] % factors[i] for i in range(k))
            for c in range(K.cols)]
    seen = {base}
    frontier = [base]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = tuple((x[i] + g[i]) % factors[i] for i in range(k))
                if y not in seen:
                    if len(seen) >= COSET_CAP:
                        raise SearchBudgetExceeded(
                            "solution coset too large to enumerate")
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return sorted(seen)


def _is_commutative(R: FiniteRing) -> bool:
    for i in range(R.rank):
        for j in range(i + 1, R.rank):
            if R.mult[i][j] != R.mult[j][i]:
                return False
    return True


def _square_profile(R: FiniteRing) -> tuple[int, int]:
    """(#idempotents, #square-zero elements), invariant under isomorphism."""
    X = _element_table(R.additive.invariant_factors)
    SQ = _square_table(X, R)
    return int((SQ == X).all(axis=1).sum()), int((SQ == 0).all(axis=1).sum())


def _prefix_score(R: FiniteRing) -> int:
    score = 0
    for i in range(R.rank):
        for j in range(R.rank):
            support = [l for l, c in enumerate(R.mult[i][j]) if c]
            if all(l <= max(i, j) for l in support):
                score += 1
    return score


class _Search:
    def __init__(self, D: FiniteRing, C: FiniteRing):
        self.D = D
        self.C = C
        self.k = D.rank
        self.factors = C.additive.invariant_factors
        self.nodes = 0
        self._table: np.ndarray | None = None
        self._squares: np.ndarray | None = None
        self._orders: np.ndarray | None = None
        # level at which each product pair becomes fully determined
        self.pair_level: dict[tuple[int, int], int] = {}
        for i in range(self.k):
            for j in range(self.k):
                support = [l for l, c in enumerate(D.mult[i][j]) if c]
                self.pair_level[(i, j)] = max([i, j] + support)
        usupport = [l for l, c in enumerate(D.unit) if c]
        self.unit_level = max(usupport) if usupport else 0

    def table(self) -> np.ndarray:
        if self._table is None:
            self._table = _element_table(self.factors)
        return self._table

    def squares(self) -> np.ndarray:
        if self._squares is None:
            self._squares = _square_table(self.table(), self.C)
        return self._squares

    def orders(self) -> np.ndarray:
        if self._orders is None:
            self._orders = _element_orders(self.table(), self.factors)
        return self._orders

    def known_sum(self, coeffs, chosen) -> tuple[int, ...]:
        C = self.C
        acc = C.additive.zero()
        for l, c in enumerate(coeffs):
            if c and l < len(chosen):
                acc = C.additive.add(acc, C.additive.scale(c, chosen[l]))
        return acc

    def candidates(self, p: int, chosen: list[tuple[int, ...]]):
        D, C, k = self.D, self.C, self.k
        fs = self.factors
        dp = D.additive.invariant_factors[p]
        rows: list[list[int]] = []
        mods: list[int] = []
        rhs: list[int] = []
        for r in range(k):
            row = [0] * k
            row[r] = dp
            rows.append(row)
            mods.append(fs[r])
            rhs.append(0)
        ident = IntegerMatrix.identity(k)

        def add_block(M: IntegerMatrix, target: tuple[int, ...]):
            for r in range(k):
                rows.append(list(M.data[r]))
                mods.append(fs[r])
                rhs.append(target[r])

        linear = 0
        for (i, j), lvl in self.pair_level.items():
            if lvl != p or (i == p and j == p):
                continue
            coeffs = D.mult[i][j]
            cp = coeffs[p] if p < len(coeffs) else 0
            known = self.known_sum(coeffs, chosen)
            if i == p:
                M = _right_mult_matrix(C, chosen[j])
                block_data = [[M.data[r][c] - (cp if r == c else 0)
                               for c in range(k)] for r in range(k)]
                add_block(IntegerMatrix(block_data, k, k), known)
                linear += 1
            elif j == p:
                M = _left_mult_matrix(C, chosen[i])
                block_data = [[M.data[r][c] - (cp if r == c else 0)
                               for c in range(k)] for r in range(k)]
                add_block(IntegerMatrix(block_data, k, k), known)
                linear += 1
            else:
                prod = C.mul(chosen[i], chosen[j])
                target = C.additive.add(prod, C.additive.neg(known))
                block_data = [[cp if r == c else 0 for c in range(k)]
                              for r in range(k)]
                add_block(IntegerMatrix(block_data, k, k), target)
                linear += 1
        if self.unit_level == p:
            up = D.unit[p]
            known = self.known_sum(D.unit, chosen)
            target = self.C.additive.add(self.C.unit, self.C.additive.neg(known))
            block_data = [[up if r == c else 0 for c in range(k)] for r in range(k)]
            add_block(IntegerMatrix(block_data, k, k), target)
            linear += 1

        if linear:
            A = IntegerMatrix(rows, len(rows), k)
            try:
                sol = solve_congruences(A, mods, rhs)
            except NoSolution:
                return []
            pool = _enumerate_coset(sol.particular, sol.kernel, fs)
        else:
            mask = self.orders() == dp
            if not mask.any():
                return []
            pool_arr = self.table()[mask]
            sq_arr = self.squares()[mask]
            if (p, p) in self.pair_level and self.pair_level[(p, p)] == p:
                coeffs = self.D.mult[p][p]
                cp = coeffs[p]
                known = np.array(self.known_sum(coeffs, chosen), dtype=np.int64)
                fsa = np.array(fs, dtype=np.int64)
                want = (known + cp * pool_arr) % fsa
                keep = (sq_arr == want).all(axis=1)
                pool_arr = pool_arr[keep]
            if len(pool_arr) > COSET_CAP:
                raise SearchBudgetExceeded("level pool too large")
            return [tuple(int(v) for v in row) for row in pool_arr]

        out = []
        square_here = self.pair_level.get((p, p)) == p
        if square_here:
            coeffs = self.D.mult[p][p]
            cp = coeffs[p]
            known = self.known_sum(coeffs, chosen)
        for t in pool:
            if C.additive.element_order(t) != dp:
                continue
            if square_here:
                want = C.additive.add(known, C.additive.scale(cp, t))
                if C.mul(t, t) != want:
                    continue
            out.append(t)
        return out

    def run(self) -> list[tuple[int, ...]] | None:
        return self._dfs([])

    def _dfs(self, chosen: list[tuple[int, ...]]):
        p = len(chosen)
        if p == self.k:
            return list(chosen)
        self.nodes += 1
        if self.nodes > NODE_CAP:
            raise SearchBudgetExceeded("search node budget exhausted")
        expected = 1
        for l in range(p + 1):
            expected *= self.D.additive.invariant_factors[l]
        for t in self.candidates(p, chosen):
            if _subgroup_order(chosen + [t], self.C) != expected:
                continue
            res = self._dfs(chosen + [t])
            if res is not None:
                return res
        return None


def ring_iso_search(A: FiniteRing, B: FiniteRing,
                    order_cap: int = 1 << 16) -> IntegerMatrix | None:
    """Find a ring isomorphism A -> B as a coordinate matrix, or None.

    Raises SearchBudgetExceeded when the ring order exceeds order_cap or
    an intermediate enumeration blows past its internal cap; callers that
    accept the cost pass a larger order_cap.
    """
    if A.additive != B.additive:
        return None
    if A.additive.element_order(A.unit) != B.additive.element_order(B.unit):
        return None
    if _is_commutative(A) != _is_commutative(B):
        return None
    if A.mult == B.mult and A.unit == B.unit:
        return IntegerMatrix.identity(A.rank)
    if A.order > order_cap:
        raise SearchBudgetExceeded(
            f"ring order {A.order} exceeds cap {order_cap}")
    if A.order <= 1 << 12 and _square_profile(A) != _square_profile(B):
        return None

    swapped = _prefix_score(B) > _prefix_score(A)
    D, C = (B, A) if swapped else (A, B)
    images = _Search(D, C).run()
    if images is None:
        return None
    T = IntegerMatrix.from_columns([list(t) for t in images], D.rank)
    if not is_ring_isomorphism(D, C, T):
        return None
    if swapped:
        mods = list(A.additive.invariant_factors)
        cols = []
        for a in range(A.rank):
            e = [1 if i == a else 0 for i in range(A.rank)]
            sol = solve_congruences(T, mods, e)
            cols.append(list(B.additive.reduce(sol.particular)))
        T = IntegerMatrix.from_columns(cols, B.rank)
        if not is_ring_isomorphism(A, B, T):
            return None
    return T
