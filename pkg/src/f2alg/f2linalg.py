"""Exact linear algebra over F2.

Vectors are Python ints used as packed bitsets: bit j of the int is
coordinate j.  CPython stores ints as arrays of machine words, so XOR of
two n-bit rows is a single C-level pass; this comfortably handles the
~40k-dimensional chain groups that show up downstream.

All elimination is deterministic leftmost-pivot (lowest set bit), so every
representative chosen anywhere in the package is reproducible bit-for-bit.
"""

from __future__ import annotations

from typing import Iterable, Optional


def bits_of(v: int):
    """Indices of set bits of v, ascending."""
    while v:
        low = v & -v
        yield low.bit_length() - 1
        v ^= low


def popcount(v: int) -> int:
    return v.bit_count()


class F2Matrix:
    """Dense bit-packed matrix over F2, row-major.

    ``data[i]`` is row i as an int bitset over the columns.  Immutable by
    convention: no method mutates self after construction.
    """

    __slots__ = ("rows", "cols", "data")

    def __init__(self, rows: int, cols: int, data: Optional[list[int]] = None):
        if data is None:
            data = [0] * rows
        if len(data) != rows:
            raise ValueError("row count mismatch")
        mask = (1 << cols) - 1
        for r in data:
            if r & ~mask:
                raise ValueError("set bits beyond cols")
        self.rows = rows
        self.cols = cols
        self.data = data

    @classmethod
    def from_bitlists(cls, rows: Iterable[Iterable[int]], cols: Optional[int] = None) -> "F2Matrix":
        data = []
        width = 0
        for row in rows:
            v = 0
            n = 0
            for j, b in enumerate(row):
                n = j + 1
                if b & 1:
                    v |= 1 << j
            width = max(width, n)
            data.append(v)
        if cols is None:
            cols = width
        return cls(len(data), cols, data)

    def row(self, i: int) -> int:
        return self.data[i]

    def column(self, j: int) -> int:
        out = 0
        bit = 1 << j
        for i, r in enumerate(self.data):
            if r & bit:
                out |= 1 << i
        return out

    def transpose(self) -> "F2Matrix":
        out = [0] * self.cols
        for i, r in enumerate(self.data):
            v = r
            while v:
                low = v & -v
                out[low.bit_length() - 1] |= 1 << i
                v ^= low
        return F2Matrix(self.cols, self.rows, out)

    def mul_vec(self, x: int) -> int:
        """M.x for a column vector x (bitset over cols); result over rows."""
        out = 0
        for i, r in enumerate(self.data):
            if (r & x).bit_count() & 1:
                out |= 1 << i
        return out

    def apply_rowspace(self, v: int) -> int:
        """XOR of rows selected by bitset v; the map e_i -> row i.

        This is the natural "linear map as table of images" reading used by
        all boundary operators in the package.
        """
        out = 0
        while v:
            low = v & -v
            out ^= self.data[low.bit_length() - 1]
            v ^= low
        return out

    def rank(self) -> int:
        pivots: dict[int, int] = {}
        for r in self.data:
            r = _reduce(r, pivots)
            if r:
                pivots[r & -r] = r
        return len(pivots)

    def kernel_basis(self) -> "Subspace":
        """Reduced-echelon basis of {v : M.v = 0} (right kernel)."""
        return self.transpose().left_kernel()

    def left_kernel(self) -> "Subspace":
        """Combinations of rows summing to zero: {v : v^T.M = 0}."""
        pivots: dict[int, tuple[int, int]] = {}  # lowbit -> (row, tag)
        kernel: list[int] = []
        for i, r in enumerate(self.data):
            tag = 1 << i
            while r:
                low = r & -r
                hit = pivots.get(low)
                if hit is None:
                    pivots[low] = (r, tag)
                    break
                r ^= hit[0]
                tag ^= hit[1]
            else:
                kernel.append(tag)
        return Subspace(self.rows, _echelonize(kernel))

    def solve(self, b: int) -> Optional[int]:
        """Some x with M.x = b, or None.

        Deterministic: elimination proceeds leftmost-pivot over the columns
        of M; free variables are zero.
        """
        # Work with columns as rows: x^T (M^T) = b^T.
        t = self.transpose()
        pivots: dict[int, tuple[int, int]] = {}
        for j, r in enumerate(t.data):
            tag = 1 << j
            while r:
                low = r & -r
                hit = pivots.get(low)
                if hit is None:
                    pivots[low] = (r, tag)
                    break
                r ^= hit[0]
                tag ^= hit[1]
        x = 0
        while b:
            low = b & -b
            hit = pivots.get(low)
            if hit is None:
                return None
            b ^= hit[0]
            x ^= hit[1]
        return x

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, F2Matrix)
            and self.rows == other.rows
            and self.cols == other.cols
            and self.data == other.data
        )

    def __repr__(self) -> str:
        return f"F2Matrix({self.rows}x{self.cols})"

    def to_bitlists(self) -> list[list[int]]:
        return [[(r >> j) & 1 for j in range(self.cols)] for r in self.data]


def _reduce(v: int, pivots: dict[int, int]) -> int:
    """Reduce v against pivot rows keyed by their lowest set bit."""
    while v:
        hit = pivots.get(v & -v)
        if hit is None:
            return v
        v ^= hit
    return 0


def _echelonize(rows: list[int]) -> list[int]:
    """Reduced row echelon over F2, rows keyed and sorted by pivot."""
    pivots: dict[int, int] = {}
    for r in rows:
        r = _reduce(r, pivots)
        if r:
            pivots[r & -r] = r
    # back-substitute so each pivot bit appears in exactly one row
    keys = sorted(pivots, key=lambda p: p.bit_length())
    for idx in range(len(keys) - 1, -1, -1):
        p = keys[idx]
        r = pivots[p]
        for q in keys[:idx]:
            if pivots[q] & p:
                pivots[q] ^= r
    return [pivots[p] for p in keys]


class Subspace:
    """Subspace of F2^ambient_dim with reduced-echelon basis.

    Basis rows are nonzero with strictly increasing pivot positions;
    membership testing is deterministic reduction.
    """

    __slots__ = ("ambient_dim", "basis")

    def __init__(self, ambient_dim: int, basis: Optional[list[int]] = None, *, reduced: bool = True):
        if basis is None:
            basis = []
        if not reduced:
            basis = _echelonize(basis)
        self.ambient_dim = ambient_dim
        self.basis = basis

    @classmethod
    def span(cls, ambient_dim: int, vectors: Iterable[int]) -> "Subspace":
        return cls(ambient_dim, _echelonize(list(vectors)))

    @classmethod
    def full(cls, ambient_dim: int) -> "Subspace":
        return cls(ambient_dim, [1 << i for i in range(ambient_dim)])

    @property
    def dim(self) -> int:
        return len(self.basis)

    def reduce(self, v: int) -> int:
        for r in self.basis:
            low = r & -r
            if v & low:
                v ^= r
        return v

    def contains(self, v: int) -> bool:
        return self.reduce(v) == 0

    def contains_subspace(self, other: "Subspace") -> bool:
        return all(self.contains(r) for r in other.basis)

    def sum(self, other: "Subspace") -> "Subspace":
        if self.ambient_dim != other.ambient_dim:
            raise ValueError("ambient mismatch")
        return Subspace(self.ambient_dim, _echelonize(self.basis + other.basis))

    def intersect(self, other: "Subspace") -> "Subspace":
        """Zassenhaus: eliminate [u | u] from self against [v | 0] from other;
        rows that die on the low half have their high half in the intersection."""
        if self.ambient_dim != other.ambient_dim:
            raise ValueError("ambient mismatch")
        n = self.ambient_dim
        low_mask = (1 << n) - 1
        pivots: dict[int, int] = {}
        out: list[int] = []
        for r in list(other.basis) + [x | (x << n) for x in self.basis]:
            while r & low_mask:
                part = r & low_mask
                hit = pivots.get(part & -part)
                if hit is None:
                    break
                r ^= hit
            if r & low_mask:
                pivots[(r & low_mask) & -(r & low_mask)] = r
            elif r:
                out.append(r >> n)
        return Subspace.span(n, out)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Subspace)
            and self.ambient_dim == other.ambient_dim
            and self.basis == other.basis
        )

    def __repr__(self) -> str:
        return f"Subspace(dim {self.dim} of F2^{self.ambient_dim})"


def rank(m: F2Matrix) -> int:
    return m.rank()


def kernel_basis(m: F2Matrix) -> Subspace:
    return m.kernel_basis()


def solve(m: F2Matrix, b: int) -> Optional[int]:
    return m.solve(b)


class Echelon:
    """Incremental echelon form with optional combination tags.

    Used for kernel/homology bookkeeping: add rows one at a time; a row that
    reduces to zero reports the combination of previously added rows that
    produced it.
    """

    __slots__ = ("pivots", "count")

    def __init__(self):
        self.pivots: dict[int, tuple[int, int]] = {}
        self.count = 0

    def add(self, v: int, tag: int = 0) -> tuple[int, int]:
        """Reduce v (with tag) against the current rows; insert if nonzero.

        Returns the reduced (v, tag).  If v reduced to zero the tag is the
        certificate combination.
        """
        while v:
            hit = self.pivots.get(v & -v)
            if hit is None:
                self.pivots[v & -v] = (v, tag)
                self.count += 1
                return v, tag
            v ^= hit[0]
            tag ^= hit[1]
        return 0, tag

    def reduce(self, v: int, tag: int = 0) -> tuple[int, int]:
        """Reduce without inserting."""
        while v:
            hit = self.pivots.get(v & -v)
            if hit is None:
                return v, tag
            v ^= hit[0]
            tag ^= hit[1]
        return 0, tag

    @property
    def rank(self) -> int:
        return self.count
