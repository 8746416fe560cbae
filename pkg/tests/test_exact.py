"""Exact integer core: Smith form, cokernels, congruence systems.

Oracles here are deliberately independent of the code under test: the
quotient-order oracle enumerates cosets with set arithmetic, and the
congruence oracle enumerates candidate solutions directly.
"""

from __future__ import annotations

from itertools import product
from math import gcd, prod

import pytest
from hypothesis import given, settings, strategies as st

from moritalab.errors import InfiniteQuotient, NoSolution
from moritalab.exact import (
    CongruenceSolution,
    FiniteAbelianGroup,
    IntegerMatrix,
    cokernel,
    determinant,
    lattice_column_basis,
    smith_normal_form,
    solve_congruences,
    solve_integer,
)


# ---------------------------------------------------------------- oracles

def subgroup_closure(generators, moduli):
    """All elements of the subgroup of prod(Z/moduli) the generators span."""
    zero = tuple(0 for _ in moduli)
    seen = {zero}
    frontier = [zero]
    gens = [tuple(g[i] % moduli[i] for i in range(len(moduli))) for g in generators]
    while frontier:
        new = []
        for x in frontier:
            for g in gens:
                y = tuple((a + b) % m for a, b, m in zip(x, g, moduli))
                if y not in seen:
                    seen.add(y)
                    new.append(y)
        frontier = new
    return seen


def quotient_order_oracle(A, moduli):
    """|prod(Z/moduli) / <columns of A>| by brute-force enumeration."""
    cols = [A.column(j) for j in range(A.cols)]
    sub = subgroup_closure(cols, moduli)
    return prod(moduli) // len(sub)


def congruence_solutions_oracle(A, moduli, b):
    """All solutions of A x = b (mod moduli) with x enumerated mod L."""
    L = 1
    for m in moduli:
        L = L * m // gcd(L, m) if m else L
    sols = set()
    for x in product(range(L), repeat=A.cols):
        ok = True
        for i in range(A.rows):
            lhs = sum(A.data[i][j] * x[j] for j in range(A.cols)) - b[i]
            if moduli[i]:
                if lhs % moduli[i]:
                    ok = False
                    break
            elif lhs:
                ok = False
                break
        if ok:
            sols.add(x)
    return L, sols


# ---------------------------------------------------------- smith form

def test_snf_two_by_two_coprime_diagonal():
    A = IntegerMatrix([[2, 0], [0, 3]])
    dec = smith_normal_form(A)
    assert dec.diagonal() == [1, 6]
    assert (dec.U @ A @ dec.V) == dec.D


def test_snf_identity_is_fixed():
    A = IntegerMatrix.identity(3)
    dec = smith_normal_form(A)
    assert dec.D == IntegerMatrix.identity(3)
    assert dec.U == IntegerMatrix.identity(3)
    assert dec.V == IntegerMatrix.identity(3)


def test_snf_empty_matrix():
    A = IntegerMatrix.zeros(0, 0)
    dec = smith_normal_form(A)
    assert dec.diagonal() == []
    assert dec.D.rows == 0 and dec.D.cols == 0


def test_snf_zero_matrix():
    A = IntegerMatrix.zeros(2, 3)
    dec = smith_normal_form(A)
    assert dec.diagonal() == [0, 0]


@settings(max_examples=200, derandomize=True)
@given(st.integers(0, 4), st.integers(0, 4), st.data())
def test_snf_properties(m, n, data):
    entries = data.draw(st.lists(st.integers(-5, 5), min_size=m * n, max_size=m * n))
    A = IntegerMatrix([entries[i * n:(i + 1) * n] for i in range(m)], m, n)
    dec = smith_normal_form(A)
    assert (dec.U @ A @ dec.V) == dec.D
    assert abs(determinant(dec.U)) == 1
    assert abs(determinant(dec.V)) == 1
    assert (dec.U @ dec.U_inv) == IntegerMatrix.identity(m)
    assert (dec.V @ dec.V_inv) == IntegerMatrix.identity(n)
    diag = dec.diagonal()
    assert all(d >= 0 for d in diag)
    for a, b in zip(diag, diag[1:]):
        if a == 0:
            assert b == 0
        else:
            assert b % a == 0
    # off-diagonal must vanish
    for i in range(m):
        for j in range(n):
            if i != j:
                assert dec.D.data[i][j] == 0


def test_snf_deterministic():
    A = IntegerMatrix([[4, 6, 2], [6, 4, 8]])
    d1 = smith_normal_form(A)
    d2 = smith_normal_form(A)
    assert d1.U == d2.U and d1.V == d2.V and d1.D == d2.D


# ------------------------------------------------------------- cokernel

def test_cokernel_single_relation():
    # Z/4 modulo the image of multiplication by 2
    group, proj = cokernel(IntegerMatrix([[2]]), [4])
    assert group.invariant_factors == (2,)
    assert proj.apply([1]) != group.zero()
    assert proj.apply([2]) == group.zero()


def test_cokernel_trivial_quotient():
    group, _ = cokernel(IntegerMatrix([[1, 0], [0, 1]]), [0, 0])
    assert group.invariant_factors == ()
    assert group.order == 1


def test_cokernel_infinite_raises():
    with pytest.raises(InfiniteQuotient):
        cokernel(IntegerMatrix.zeros(2, 0), [3, 0])


def test_cokernel_projection_kernel_is_relation_lattice():
    A = IntegerMatrix([[2, 0], [2, 4]])
    moduli = [8, 8]
    group, proj = cokernel(A, moduli)
    # brute force: a vector maps to zero iff it lies in the relation subgroup
    sub = subgroup_closure([A.column(0), A.column(1)], moduli)
    for v in product(range(8), repeat=2):
        in_sub = tuple(v) in sub
        assert (proj.apply(list(v)) == group.zero()) == in_sub


@settings(max_examples=120, derandomize=True)
@given(st.integers(1, 3), st.integers(0, 3), st.data())
def test_cokernel_order_matches_enumeration(n, m, data):
    moduli = data.draw(st.lists(st.sampled_from([2, 3, 4, 6]), min_size=n, max_size=n))
    entries = data.draw(st.lists(st.integers(-4, 4), min_size=n * m, max_size=n * m))
    A = IntegerMatrix([entries[i * m:(i + 1) * m] for i in range(n)], n, m)
    group, proj = cokernel(A, moduli)
    assert group.order == quotient_order_oracle(A, moduli)
    # sections really are preimages
    for a in range(group.rank):
        e = [1 if i == a else 0 for i in range(group.rank)]
        assert list(proj.apply(proj.section(a))) == e


# ---------------------------------------------------- congruence systems

def test_single_congruence_matches_listed_solutions():
    # 2x = 0 (mod 4) has solutions {0, 2} mod 4
    sol = solve_congruences(IntegerMatrix([[2]]), [4], [0])
    L, oracle = congruence_solutions_oracle(IntegerMatrix([[2]]), [4], [0])
    got = set()
    for k in range(-4, 5):
        for col in sol.kernel.columns() or [[0]]:
            got.add(tuple((sol.particular[i] + k * col[i]) % L for i in range(1)))
    assert got == oracle == {(0,), (2,)}


def test_no_solution_raises():
    with pytest.raises(NoSolution):
        solve_congruences(IntegerMatrix([[2]]), [4], [1])
    with pytest.raises(NoSolution):
        solve_congruences(IntegerMatrix([[0]]), [0], [5])


def coset_mod_L(sol: CongruenceSolution, L: int, dim: int):
    """Expand particular + kernel into the full residue set mod L."""
    base = tuple(v % L for v in sol.particular)
    seen = {base}
    frontier = [base]
    cols = sol.kernel.columns()
    while frontier:
        new = []
        for x in frontier:
            for col in cols:
                y = tuple((a + c) % L for a, c in zip(x, col))
                if y not in seen:
                    seen.add(y)
                    new.append(y)
        frontier = new
    return seen


@settings(max_examples=120, derandomize=True)
@given(st.integers(1, 2), st.integers(1, 3), st.data())
def test_congruences_match_enumeration(n, m, data):
    moduli = data.draw(st.lists(st.sampled_from([2, 3, 4]), min_size=n, max_size=n))
    entries = data.draw(st.lists(st.integers(-3, 3), min_size=n * m, max_size=n * m))
    b = data.draw(st.lists(st.integers(-3, 3), min_size=n, max_size=n))
    A = IntegerMatrix([entries[i * m:(i + 1) * m] for i in range(n)], n, m)
    L, oracle = congruence_solutions_oracle(A, moduli, b)
    if L ** m > 10 ** 4:
        return
    try:
        sol = solve_congruences(A, moduli, b)
    except NoSolution:
        assert not oracle
        return
    assert oracle
    assert coset_mod_L(sol, L, m) == oracle


def test_solve_integer_exact():
    M = IntegerMatrix([[2, 1], [0, 3]])
    y = solve_integer(M, [5, 9])
    assert y is not None
    assert M.apply(y) == [5, 9]
    assert solve_integer(IntegerMatrix([[2]]), [3]) is None


def test_lattice_column_basis_spans_same_lattice():
    M = IntegerMatrix([[2, 4, 6], [0, 2, 2]])
    B = lattice_column_basis(M)
    # both generating sets must produce the same subgroup mod a big modulus
    mod = [24, 24]
    assert subgroup_closure(M.columns(), mod) == subgroup_closure(B.columns(), mod)


# ------------------------------------------------------------ the group

def test_group_validation():
    with pytest.raises(ValueError):
        FiniteAbelianGroup((1, 2))
    with pytest.raises(ValueError):
        FiniteAbelianGroup((4, 2))
    g = FiniteAbelianGroup((2, 4))
    assert g.order == 8
    assert g.exponent == 4
    assert len(list(g.elements())) == 8
    assert g.element_order((1, 2)) == 2
    assert g.element_order((0, 1)) == 4
    assert g.element_order((0, 0)) == 1


def test_group_trivial():
    g = FiniteAbelianGroup(())
    assert g.order == 1
    assert list(g.elements()) == [()]
