"""F2 homology of small finite groups via free resolutions.

Groups are given as permutation groups (order at most 1000).  A free
resolution of the trivial module over the group algebra is built degree
by degree: each boundary's kernel is generated greedily, picking the
first reduced-echelon kernel vector outside the current equivariant
span.  Homology is the honest homology of the tensored-down complex, so
the resolution need not be minimal.  Induced maps along group
homomorphisms come from explicit chain lifts.

Free-module coordinates: rank-r free module over F2[G] has F2 basis
indexed by (generator k, element e) at bit position k*|G| + e, with G
acting by left translation on the element coordinate.
"""

from __future__ import annotations

import re
from itertools import combinations
from typing import Callable, NamedTuple, Optional

from .f2linalg import Echelon, F2Matrix, Subspace, bits_of

MAX_ORDER = 1000
MAX_DEGREE = 6

Perm = tuple


def compose(p: Perm, q: Perm) -> Perm:
    """(p*q)(i) = p(q(i))."""
    return tuple(p[q[i]] for i in range(len(p)))


def inverse(p: Perm) -> Perm:
    out = [0] * len(p)
    for i, j in enumerate(p):
        out[j] = i
    return tuple(out)


class PermGroup:
    """Finite permutation group: elements enumerated and canonically
    ordered lexicographically; multiplication by composition."""

    def __init__(self, degree: int, generators: list[Perm], name: str = ""):
        self.degree = degree
        self.name = name
        ident = tuple(range(degree))
        seen = {ident}
        frontier = [ident]
        gens = [tuple(g) for g in generators]
        while frontier:
            nxt = []
            for p in frontier:
                for g in gens:
                    q = compose(g, p)
                    if q not in seen:
                        if len(seen) >= MAX_ORDER:
                            raise ValueError("group order exceeds budget")
                        seen.add(q)
                        nxt.append(q)
            frontier = nxt
        self.generators = gens
        self.elements = tuple(sorted(seen))
        self.index = {p: i for i, p in enumerate(self.elements)}
        self.identity = self.index[ident]
        self.order = len(self.elements)

    def mult(self, i: int, j: int) -> int:
        return self.index[compose(self.elements[i], self.elements[j])]

    def inv(self, i: int) -> int:
        return self.index[inverse(self.elements[i])]

    def __len__(self) -> int:
        return self.order


# ---------------------------------------------------------------- built-ins

def _matrix_perm(rows: tuple, g: int) -> Perm:
    """Permutation of the 2^g - 1 nonzero vectors induced by an
    invertible F2 matrix given as row bitsets."""
    out = []
    for v in range(1, 1 << g):
        w = 0
        for i in range(g):
            if bin(rows[i] & v).count("1") & 1:
                w |= 1 << i
        out.append(w - 1)
    return tuple(out)


def _gl_gens(g: int) -> tuple[int, list[Perm]]:
    gens = []
    for i in range(g):
        for j in range(g):
            if i == j:
                continue
            rows = tuple((1 << k) | (1 << j if k == i else 0) for k in range(g))
            gens.append(_matrix_perm(rows, g))
    return (1 << g) - 1, gens


def _ut_gens(g: int) -> tuple[int, list[Perm]]:
    gens = []
    for i in range(g):
        for j in range(i + 1, g):
            rows = tuple((1 << k) | (1 << j if k == i else 0) for k in range(g))
            gens.append(_matrix_perm(rows, g))
    return (1 << g) - 1, gens


def builtin_group(name: str) -> PermGroup:
    if (m := re.fullmatch(r"GL\((\d+),2\)", name)) is not None:
        deg, gens = _gl_gens(int(m.group(1)))
        return PermGroup(deg, gens, name)
    if (m := re.fullmatch(r"UT\((\d+),2\)", name)) is not None:
        deg, gens = _ut_gens(int(m.group(1)))
        return PermGroup(deg, gens, name)
    if (m := re.fullmatch(r"S(\d+)", name)) is not None:
        n = int(m.group(1))
        gens = [] if n < 2 else [(1, 0) + tuple(range(2, n)), tuple(range(1, n)) + (0,)]
        return PermGroup(max(n, 1), gens, name)
    if (m := re.fullmatch(r"C(\d+)", name)) is not None:
        n = int(m.group(1))
        return PermGroup(n, [tuple(range(1, n)) + (0,)], name)
    if name == "D8":
        return PermGroup(4, [(1, 2, 3, 0), (0, 3, 2, 1)], name)
    if name == "1":
        return PermGroup(1, [], name)
    raise ValueError(f"unknown built-in group {name!r}")


_CYCLE = re.compile(r"\(([\d\s,]*)\)")


def parse_group(text: str) -> PermGroup:
    """Permutation generators in cycle notation, one per line, or a
    built-in name."""
    text = text.strip()
    if "(" not in text or re.fullmatch(r"\w+\(\d+,\d+\)", text):
        return builtin_group(text)
    perms = []
    degree = 0
    for line in text.splitlines():
        line = line.partition("#")[0].strip()
        if not line:
            continue
        cycles = []
        for m in _CYCLE.finditer(line):
            pts = [int(t) for t in re.split(r"[\s,]+", m.group(1).strip()) if t]
            cycles.append(pts)
            degree = max(degree, max(pts, default=-1) + 1)
        perms.append(cycles)
    out = []
    for cycles in perms:
        p = list(range(degree))
        for pts in cycles:
            for a, b in zip(pts, pts[1:] + pts[:1]):
                p[a] = b
        out.append(tuple(p))
    return PermGroup(degree, out)


# ---------------------------------------------------------------- resolutions

class Resolution(NamedTuple):
    group: PermGroup
    ranks: tuple
    boundaries: tuple  # boundaries[d]: F_d -> F_{d-1}; [0] is the augmentation


def _act(group: PermGroup, e: int, v: int, rank: int) -> int:
    """Left translation by element e on a free-module vector."""
    n = group.order
    row = group.elements[e]
    # translation permutes element coordinates within each generator block
    out = 0
    for bit in bits_of(v):
        k, x = divmod(bit, n)
        out |= 1 << (k * n + group.mult(e, x))
    return out


def resolve(group: PermGroup, d_max: int, *, reverse_ties: bool = False) -> Resolution:
    """Free resolution of the trivial module through degree d_max.

    Kernel generators are picked greedily from the reduced-echelon kernel
    basis (reversed order under reverse_ties; homology dims must not
    depend on this)."""
    if group.order > MAX_ORDER:
        raise ValueError("group order exceeds budget")
    if d_max > MAX_DEGREE + 1:
        # one above the homology-degree budget: the top degree is consumed
        # by the incoming boundary when tensoring down
        raise ValueError("degree exceeds budget")
    n = group.order
    ranks = [1]
    aug = F2Matrix(1, n, [(1 << n) - 1])
    boundaries = [aug]
    for d in range(1, d_max + 1):
        prev = boundaries[-1]
        kernel = prev.kernel_basis()
        basis = list(kernel.basis)
        if reverse_ties:
            basis.reverse()
        span = Echelon()
        gens: list[int] = []
        for v in basis:
            if span.rank == kernel.dim:
                break
            if span.reduce(v)[0] == 0:
                continue
            gens.append(v)
            for e in range(n):
                span.add(_act(group, e, v, ranks[-1]))
        cols = []
        for v in gens:
            for e in range(n):
                cols.append(_act(group, e, v, ranks[-1]))
        ranks.append(len(gens))
        boundaries.append(F2Matrix(len(gens) * n, prev.cols, cols).transpose())
    return Resolution(group, tuple(ranks), tuple(boundaries))


def assert_resolution(res: Resolution) -> None:
    """Exact checks: boundaries compose to zero, exactness, equivariance."""
    n = res.group.order
    for d in range(1, len(res.boundaries)):
        prev, cur = res.boundaries[d - 1], res.boundaries[d]
        t = cur.transpose()
        for col in t.data:
            if prev.mul_vec(col):
                raise AssertionError(f"boundary square nonzero at degree {d}")
        if prev.kernel_basis().dim != cur.rank():
            raise AssertionError(f"resolution not exact at degree {d - 1}")
        for e in range(n):
            for k in range(res.ranks[d]):
                moved = cur.mul_vec(_act(res.group, e, 1 << (k * n), res.ranks[d]))
                direct = _act(res.group, e, cur.mul_vec(1 << (k * n)), res.ranks[d - 1])
                if moved != direct:
                    raise AssertionError(f"boundary not equivariant at degree {d}")


def _collapse(group: PermGroup, v: int, rank: int) -> int:
    """Tensor down over the group algebra: sum each element block."""
    n = group.order
    out = 0
    for k in range(rank):
        block = (v >> (k * n)) & ((1 << n) - 1)
        if bin(block).count("1") & 1:
            out |= 1 << k
    return out


def tensored_boundary(res: Resolution, d: int) -> F2Matrix:
    """The boundary F_d -> F_{d-1} after applying F2 (x)_{F2[G]} -."""
    n = res.group.order
    cur = res.boundaries[d]
    cols = []
    for k in range(res.ranks[d]):
        cols.append(_collapse(res.group, cur.mul_vec(1 << (k * n)), res.ranks[d - 1]))
    return F2Matrix(res.ranks[d], res.ranks[d - 1], cols).transpose()


def homology_dims(res: Resolution) -> tuple:
    """dim H_d for d = 0 .. d_max - 1 (the top built degree is consumed
    by the incoming boundary)."""
    top = len(res.ranks) - 1
    bars = [tensored_boundary(res, d) for d in range(1, top + 1)]
    dims = []
    for d in range(top):
        cycles = res.ranks[d] if d == 0 else bars[d - 1].kernel_basis().dim
        dims.append(cycles - bars[d].rank())
    return tuple(dims)


# ---------------------------------------------------------------- induced maps

class GroupHom:
    """Homomorphism between permutation groups, given on underlying
    permutations; verified on the full multiplication table."""

    def __init__(self, source: PermGroup, target: PermGroup, fn: Callable):
        self.source = source
        self.target = target
        self.images = tuple(target.index[tuple(fn(p))] for p in source.elements)
        for i in range(source.order):
            for j in range(source.order):
                if self.images[source.mult(i, j)] != target.mult(
                    self.images[i], self.images[j]
                ):
                    raise ValueError("not a homomorphism")

    @classmethod
    def identity(cls, group: PermGroup) -> "GroupHom":
        return cls(group, group, lambda p: p)


def chain_lift(hom: GroupHom, r_src: Resolution, r_tgt: Resolution, d_max: int):
    """Lift the homomorphism to a chain map: per-degree generator images
    in the target free module (solved deterministically; always solvable
    over a free resolution)."""
    n_s, n_t = hom.source.order, hom.target.order

    def push(lift: list[int], v: int, rank_t: int) -> int:
        """Apply the equivariant extension of the current degree's lift."""
        out = 0
        for bit in bits_of(v):
            k, e = divmod(bit, n_s)
            out ^= _act(hom.target, hom.images[e], lift[k], rank_t)
        return out

    lifts = [[1 << hom.target.identity]]
    for d in range(1, d_max + 1):
        cur = []
        for k in range(r_src.ranks[d]):
            b = push(lifts[d - 1], r_src.boundaries[d].mul_vec(1 << (k * n_s)),
                     r_tgt.ranks[d - 1])
            x = r_tgt.boundaries[d].solve(b)
            if x is None:
                raise AssertionError("chain lift failed; resolution inexact")
            cur.append(x)
        lifts.append(cur)
    return lifts


def _homology_coords(res: Resolution, d: int):
    """Cycle representatives and the boundary subspace at degree d."""
    bar_in = tensored_boundary(res, d + 1)
    image = Subspace.span(res.ranks[d], bar_in.transpose().data)
    if d == 0:
        cycles = [1 << k for k in range(res.ranks[0])]
    else:
        cycles = list(tensored_boundary(res, d).kernel_basis().basis)
    reps = []
    ech = Echelon()
    for r in image.basis:
        ech.add(r)
    for v in cycles:
        red, _ = ech.add(v)
        if red:
            reps.append(v)
    return reps, image


def induced_map(hom: GroupHom, r_src: Resolution, r_tgt: Resolution, d: int) -> F2Matrix:
    """Matrix of H_d(source) -> H_d(target): column j gives the image of
    the j-th source homology basis vector in target coordinates."""
    lifts = chain_lift(hom, r_src, r_tgt, d)
    n_t = hom.target.order
    reps_s, _ = _homology_coords(r_src, d)
    reps_t, image_t = _homology_coords(r_tgt, d)
    # Subspace.reduce is a canonical linear projection mod the image;
    # coordinates come from membership certificates over projected reps
    coords = Echelon()
    for i, v in enumerate(reps_t):
        coords.add(image_t.reduce(v), 1 << i)
    cols = []
    for v in reps_s:
        w = 0
        for k in bits_of(v):
            w ^= _collapse(hom.target, lifts[d][k], r_tgt.ranks[d])
        rem, tag = coords.reduce(image_t.reduce(w))
        if rem:
            raise AssertionError("image of a cycle not a cycle")
        cols.append(tag)
    return F2Matrix(len(reps_s), len(reps_t), cols).transpose()


# ---------------------------------------------------------------- oracles

def abelianization_f2_dim(group: PermGroup) -> int:
    """dim over F2 of the abelianization tensored with F2, from the
    multiplication table: index of the subgroup generated by commutators
    and squares."""
    n = group.order
    seeds = {group.mult(i, i) for i in range(n)}
    for i, j in combinations(range(n), 2):
        seeds.add(
            group.mult(group.mult(i, j), group.mult(group.inv(i), group.inv(j)))
        )
    sub = {group.identity}
    frontier = list(sub)
    while frontier:
        nxt = []
        for a in frontier:
            for s in seeds:
                b = group.mult(a, s)
                if b not in sub:
                    sub.add(b)
                    nxt.append(b)
        frontier = nxt
    quot = n // len(sub)
    dim = quot.bit_length() - 1
    if 1 << dim != quot:
        raise AssertionError("quotient by commutators and squares not elementary")
    return dim


# ---------------------------------------------------------------- fixtures

def stabilization_hom(g_small: PermGroup, g_big: PermGroup, g: int) -> GroupHom:
    """Block inclusion GL_g -> GL_{g+1} on nonzero-vector permutations."""

    def fn(p: Perm) -> Perm:
        out = []
        low = (1 << g) - 1
        for v in range(1, 1 << (g + 1)):
            x = v & low
            w = (p[x - 1] + 1) if x else 0
            out.append((w | (v & ~low)) - 1)
        return tuple(out)

    return GroupHom(g_small, g_big, fn)
