"""Oracle and property tests for the F2 linear algebra core.

The oracles here are deliberately naive and independent of the package
implementation: rank by maximal-independent-subset search over all row
subsets, kernel/solve by exhaustive vector enumeration.
"""

import itertools

from hypothesis import given, settings, strategies as st

from f2alg.f2linalg import Echelon, F2Matrix, Subspace, bits_of


# ---------------------------------------------------------------- oracles

def oracle_rank(rows, cols):
    """Size of the largest F2-independent subset of the rows."""
    best = 0
    n = len(rows)
    for size in range(n, 0, -1):
        for subset in itertools.combinations(range(n), size):
            # independent iff no nonempty sub-subset XORs to zero
            ok = True
            for k in range(1, 1 << size):
                acc = 0
                for i in range(size):
                    if k >> i & 1:
                        acc ^= rows[subset[i]]
                if acc == 0:
                    ok = False
                    break
            if ok:
                return size
    return 0


def oracle_kernel(rows, cols):
    out = set()
    for v in range(1 << cols):
        if all((r & v).bit_count() % 2 == 0 for r in rows):
            out.add(v)
    return out


def oracle_solutions(rows, cols, b):
    out = set()
    for x in range(1 << cols):
        img = 0
        for i, r in enumerate(rows):
            if (r & x).bit_count() % 2:
                img |= 1 << i
        if img == b:
            out.add(x)
    return out


small_matrix = st.integers(1, 5).flatmap(
    lambda c: st.integers(1, 5).flatmap(
        lambda r: st.lists(st.integers(0, (1 << c) - 1), min_size=r, max_size=r).map(
            lambda data: F2Matrix(r, c, data)
        )
    )
)


# ---------------------------------------------------------------- fixed examples

def test_rank_identity():
    assert F2Matrix(2, 2, [0b01, 0b10]).rank() == 2


def test_rank_zero():
    assert F2Matrix(3, 5).rank() == 0


def test_rank_dependent_rows():
    # rows 110, 011, 101: third is the sum of the first two
    rows = [0b011, 0b110, 0b101]
    m = F2Matrix(3, 3, rows)
    assert m.rank() == 2
    assert m.rank() == oracle_rank(rows, 3)


def test_kernel_identity():
    k = F2Matrix(3, 3, [1, 2, 4]).kernel_basis()
    assert k.dim == 0


def test_kernel_zero_matrix():
    k = F2Matrix(2, 3, [0, 0]).kernel_basis()
    assert k.dim == 3


def test_kernel_one_row():
    # (1 1): kernel is span{(1,1)}
    k = F2Matrix(1, 2, [0b11]).kernel_basis()
    assert k.dim == 1
    assert k.basis == [0b11]
    assert oracle_kernel([0b11], 2) == {0, 0b11}


def test_solve_identity():
    m = F2Matrix(3, 3, [1, 2, 4])
    assert m.solve(0b101) == 0b101


def test_solve_inconsistent():
    assert F2Matrix(2, 2, [0, 0]).solve(0b01) is None


def test_solve_underdetermined_deterministic():
    # (1 1 | 1): solutions {(1,0),(0,1)}; leftmost-pivot with free vars
    # zero picks x = (1,0)
    m = F2Matrix(1, 2, [0b11])
    assert m.solve(1) == 0b01
    assert m.solve(1) in oracle_solutions([0b11], 2, 1)


# ---------------------------------------------------------------- properties

@settings(max_examples=150, deadline=None)
@given(small_matrix)
def test_rank_matches_bruteforce(m):
    assert m.rank() == oracle_rank(m.data, m.cols)


@settings(max_examples=150, deadline=None)
@given(small_matrix)
def test_rank_nullity(m):
    assert m.rank() + m.kernel_basis().dim == m.cols


@settings(max_examples=150, deadline=None)
@given(small_matrix)
def test_kernel_vectors_annihilate(m):
    k = m.kernel_basis()
    assert len(set(oracle_kernel(m.data, m.cols))) == 1 << k.dim
    for v in k.basis:
        assert m.mul_vec(v) == 0


@settings(max_examples=150, deadline=None)
@given(small_matrix, st.integers(0, 31))
def test_solve_exact_or_none(m, seed):
    b = seed & ((1 << m.rows) - 1)
    x = m.solve(b)
    sols = oracle_solutions(m.data, m.cols, b)
    if x is None:
        assert not sols
    else:
        assert m.mul_vec(x) == b
        assert x in sols


@settings(max_examples=100, deadline=None)
@given(small_matrix)
def test_transpose_involution_and_rank(m):
    t = m.transpose()
    assert t.transpose() == m
    assert t.rank() == m.rank()


# ---------------------------------------------------------------- subspaces

def test_subspace_membership_and_sum():
    a = Subspace.span(4, [0b0011, 0b0110])
    b = Subspace.span(4, [0b1100])
    assert a.contains(0b0101)
    assert not a.contains(0b1000)
    s = a.sum(b)
    assert s.dim == 3


@settings(max_examples=100, deadline=None)
@given(
    st.lists(st.integers(0, 63), min_size=0, max_size=4),
    st.lists(st.integers(0, 63), min_size=0, max_size=4),
)
def test_intersection_oracle(u_rows, v_rows):
    u = Subspace.span(6, u_rows)
    v = Subspace.span(6, v_rows)
    w = u.intersect(v)
    members = {x for x in range(64) if u.contains(x) and v.contains(x)}
    assert 1 << w.dim == len(members)
    for r in w.basis:
        assert r in members


def test_left_kernel_tags_certify():
    rows = [0b011, 0b110, 0b101]
    m = F2Matrix(3, 3, rows)
    lk = m.left_kernel()
    assert lk.dim == 1
    combo = lk.basis[0]
    acc = 0
    for i in bits_of(combo):
        acc ^= rows[i]
    assert acc == 0


def test_echelon_incremental_tags():
    e = Echelon()
    e.add(0b011, 1)
    e.add(0b110, 2)
    v, tag = e.add(0b101, 4)
    assert v == 0
    assert tag == 0b111  # 101 = 011 + 110
