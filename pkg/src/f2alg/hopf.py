"""Finite-type graded coalgebras and Hopf algebras over F2 as explicit tables.

An algebra is stored extensionally: ordered basis labels per grading,
a multiplication table and a comultiplication table.  Homogeneous linear
combinations are int bitsets over the basis of their grading.

``truncation`` semantics: if None the algebra is complete (every grading
above ``max_grading`` is zero and known to be zero); otherwise gradings
above ``truncation`` are unknown and any operation touching them raises
TruncationError rather than returning partial data.
"""

from __future__ import annotations

import itertools
import json
from typing import Optional

from .f2linalg import bits_of


class TruncationError(Exception):
    pass


Pair = tuple[tuple[int, int], tuple[int, int]]  # ((g1,i1),(g2,i2))


def _xor_key(d: dict, k) -> None:
    if k in d:
        del d[k]
    else:
        d[k] = True


class HopfAlgebra:
    """Connected graded bialgebra over F2 given by tables.

    Over F2 a connected graded bialgebra has a unique antipode, computed on
    demand; so these are Hopf algebras whenever the axiom checks pass.
    """

    def __init__(
        self,
        basis: list[list[str]],
        mult: dict[tuple[int, int, int, int], int],
        comult: dict[tuple[int, int], tuple[Pair, ...]],
        truncation: Optional[int] = None,
    ):
        if not basis or basis[0] != ["1"]:
            raise ValueError("grading 0 must be exactly ['1'] (connectedness)")
        for labels in basis:
            if len(set(labels)) != len(labels):
                raise ValueError("duplicate labels in a grading")
            if list(labels) != sorted(labels):
                raise ValueError("labels must be in canonical (lexicographic) order")
        self.basis = basis
        self.max_grading = len(basis) - 1
        self.truncation = truncation
        self.mult = mult
        self.comult = comult
        self._antipode: Optional[dict[tuple[int, int], int]] = None

    # ------------------------------------------------------------ basics

    @property
    def known_bound(self) -> int:
        return self.max_grading if self.truncation is None else self.truncation

    def dim(self, g: int) -> int:
        if 0 <= g <= self.max_grading:
            return len(self.basis[g])
        if self.truncation is None:
            return 0
        raise TruncationError(f"grading {g} beyond truncation {self.truncation}")

    def label(self, g: int, i: int) -> str:
        return self.basis[g][i]

    def index(self, g: int, label: str) -> int:
        return self.basis[g].index(label)

    def combo_labels(self, g: int, v: int) -> list[str]:
        return [self.basis[g][i] for i in bits_of(v)]

    # ------------------------------------------------------------ structure maps

    def product(self, g1: int, v1: int, g2: int, v2: int) -> int:
        """Product of two homogeneous combos; result in grading g1+g2."""
        g = g1 + g2
        if self.truncation is not None and g > self.truncation:
            raise TruncationError(f"product lands in unknown grading {g}")
        if g > self.max_grading:
            return 0
        out = 0
        for i in bits_of(v1):
            for j in bits_of(v2):
                out ^= self.mult.get((g1, i, g2, j), 0)
        return out

    def coproduct(self, g: int, i: int) -> tuple[Pair, ...]:
        """Full coproduct of a basis element, including 1|x and x|1."""
        if self.truncation is not None and g > self.truncation:
            raise TruncationError(f"coproduct in unknown grading {g}")
        return self.comult[(g, i)]

    def reduced_coproduct(self, g: int, i: int) -> tuple[Pair, ...]:
        return tuple(
            ((g1, i1), (g2, i2))
            for ((g1, i1), (g2, i2)) in self.coproduct(g, i)
            if g1 > 0 and g2 > 0
        )

    def coproduct_combo(self, g: int, v: int) -> dict[Pair, bool]:
        acc: dict[Pair, bool] = {}
        for i in bits_of(v):
            for p in self.coproduct(g, i):
                _xor_key(acc, p)
        return acc

    def is_primitive(self, g: int, i: int) -> bool:
        return not self.reduced_coproduct(g, i)

    # ------------------------------------------------------------ axiom checks

    def check_axioms(self) -> list[tuple[str, bool, Optional[tuple]]]:
        """Exact checks of all bialgebra axioms up to the known bound.

        Returns (axiom_name, passed, first_violation) triples.
        """
        bound = self.known_bound
        report = []

        def gi_pairs(limit):
            for g in range(limit + 1):
                for i in range(self.dim(g)):
                    yield g, i

        # unitality and counitality
        bad = None
        for g, i in gi_pairs(bound):
            if self.product(0, 1, g, 1 << i) != 1 << i or self.product(g, 1 << i, 0, 1) != 1 << i:
                bad = (g, i)
                break
            cp = self.coproduct(g, i)
            left = 0
            right = 0
            for (g1, i1), (g2, i2) in cp:
                if g1 == 0:
                    right ^= 1 << i2
                if g2 == 0:
                    left ^= 1 << i1
            if left != 1 << i or right != 1 << i:
                bad = (g, i)
                break
        report.append(("unit/counit", bad is None, bad))

        # associativity
        bad = None
        for (ga, a), (gb, b) in itertools.product(gi_pairs(bound), repeat=2):
            if bad:
                break
            for gc, c in gi_pairs(bound - ga - gb if ga + gb <= bound else -1):
                lhs = self.product(ga + gb, self.product(ga, 1 << a, gb, 1 << b), gc, 1 << c)
                rhs = self.product(ga, 1 << a, gb + gc, self.product(gb, 1 << b, gc, 1 << c))
                if lhs != rhs:
                    bad = ((ga, a), (gb, b), (gc, c))
                    break
        report.append(("associativity", bad is None, bad))

        # coassociativity
        bad = None
        for g, i in gi_pairs(bound):
            lhs: dict[tuple, bool] = {}
            rhs: dict[tuple, bool] = {}
            for (g1, i1), (g2, i2) in self.coproduct(g, i):
                for (h1, j1), (h2, j2) in self.coproduct(g1, i1):
                    _xor_key(lhs, ((h1, j1), (h2, j2), (g2, i2)))
                for (h1, j1), (h2, j2) in self.coproduct(g2, i2):
                    _xor_key(rhs, ((g1, i1), (h1, j1), (h2, j2)))
            if lhs != rhs:
                bad = (g, i)
                break
        report.append(("coassociativity", bad is None, bad))

        # bialgebra compatibility: psi(ab) = psi(a) psi(b)
        bad = None
        for (ga, a) in gi_pairs(bound):
            if bad:
                break
            for (gb, b) in gi_pairs(bound - ga):
                lhs = self.coproduct_combo(ga + gb, self.product(ga, 1 << a, gb, 1 << b))
                rhs: dict[Pair, bool] = {}
                for (g1, i1), (g2, i2) in self.coproduct(ga, a):
                    for (h1, j1), (h2, j2) in self.coproduct(gb, b):
                        left = (g1 + h1, self.product(g1, 1 << i1, h1, 1 << j1))
                        right = (g2 + h2, self.product(g2, 1 << i2, h2, 1 << j2))
                        for li in bits_of(left[1]):
                            for ri in bits_of(right[1]):
                                _xor_key(rhs, ((left[0], li), (right[0], ri)))
                if lhs != rhs:
                    bad = ((ga, a), (gb, b))
                    break
        report.append(("compatibility", bad is None, bad))
        return report

    def assert_axioms(self) -> None:
        for name, ok, witness in self.check_axioms():
            if not ok:
                raise AssertionError(f"Hopf axiom {name} fails at {witness}")

    # ------------------------------------------------------------ antipode

    def antipode(self, g: int, i: int) -> int:
        """S(x) for a basis element, grading preserved.

        Connected over F2: S(x) = x + sum S(x') x'' over the reduced
        coproduct, recursively by grading.
        """
        if self._antipode is None:
            self._antipode = {(0, 0): 1}
        key = (g, i)
        if key not in self._antipode:
            acc = 1 << i
            for (g1, i1), (g2, i2) in self.reduced_coproduct(g, i):
                acc ^= self.product(g1, self.antipode(g1, i1), g2, 1 << i2)
            self._antipode[key] = acc
        return self._antipode[key]

    # ------------------------------------------------------------ dual

    def dualize(self) -> "HopfAlgebra":
        """Graded dual: mult is the transpose of comult and vice versa.

        Dual labels get a ``~`` suffix (unit stays "1"); the suffix keeps
        lexicographic order, so indices are unchanged.
        """
        basis = [["1"]] + [[lbl + "~" for lbl in layer] for layer in self.basis[1:]]
        mult: dict[tuple[int, int, int, int], int] = {}
        comult: dict[tuple[int, int], tuple[Pair, ...]] = {}
        bound = self.known_bound
        for g in range(bound + 1):
            for k in range(self.dim(g)):
                for (g1, i), (g2, j) in self.coproduct(g, k):
                    key = (g1, i, g2, j)
                    mult[key] = mult.get(key, 0) ^ (1 << k)
        pair_acc: dict[tuple[int, int], dict[Pair, bool]] = {}
        for (g1, i, g2, j), v in self.mult.items():
            g = g1 + g2
            if g > bound:
                continue
            for k in bits_of(v):
                _xor_key(pair_acc.setdefault((g, k), {}), ((g1, i), (g2, j)))
        for g in range(bound + 1):
            for k in range(self.dim(g)):
                pairs = pair_acc.get((g, k), {})
                comult[(g, k)] = tuple(sorted(pairs))
        mult = {k: v for k, v in mult.items() if v}
        return HopfAlgebra(basis, mult, comult, truncation=self.truncation)

    # ------------------------------------------------------------ serialization

    def to_json(self) -> str:
        """Canonical byte-stable JSON: sorted sparse triples."""
        mult_rows = sorted(
            [g1, i, g2, j, sorted(bits_of(v))]
            for (g1, i, g2, j), v in self.mult.items()
            if v
        )
        comult_rows = sorted(
            [g, i, sorted([g1, i1, g2, i2] for ((g1, i1), (g2, i2)) in pairs)]
            for (g, i), pairs in self.comult.items()
        )
        doc = {
            "max_grading": self.max_grading,
            "truncation": self.truncation,
            "basis": self.basis,
            "mult": mult_rows,
            "comult": comult_rows,
        }
        return json.dumps(doc, sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_json(cls, text: str) -> "HopfAlgebra":
        doc = json.loads(text)
        mult = {}
        for g1, i, g2, j, ks in doc["mult"]:
            v = 0
            for k in ks:
                v |= 1 << k
            mult[(g1, i, g2, j)] = v
        comult = {}
        for g, i, pairs in doc["comult"]:
            comult[(g, i)] = tuple(((g1, i1), (g2, i2)) for g1, i1, g2, i2 in pairs)
        return cls(doc["basis"], mult, comult, doc["truncation"])

    def same_tables(self, other: "HopfAlgebra") -> bool:
        """Entrywise equality of basis, mult and comult tables."""
        return (
            self.basis == other.basis
            and self.truncation == other.truncation
            and {k: v for k, v in self.mult.items() if v}
            == {k: v for k, v in other.mult.items() if v}
            and self.comult == other.comult
        )


# ---------------------------------------------------------------- polynomial builder


class PolyHopf(HopfAlgebra):
    """Truncated polynomial Hopf algebra built from generator data.

    Remembers the monomial structure so coalgebra maps can be extended
    multiplicatively from generator images.
    """

    def __init__(self, gens, gen_coproducts, max_grading, truncated):
        """gens: list of (name, grading, power_bound or None).
        gen_coproducts: per generator, list of (exps_left, exps_right) pairs
        (exponent tuples over the generators), the full coproduct.
        """
        self.gens = list(gens)
        self._bounds = [b for (_, _, b) in gens]
        self._gradings = [g for (_, g, _) in gens]
        mons = self._enumerate_monomials(max_grading)
        # canonical order: lexicographic on label within each grading
        self.monomials: list[list[tuple[int, ...]]] = []
        basis = []
        for g in range(max_grading + 1):
            layer = sorted(mons[g], key=self._label)
            self.monomials.append(layer)
            basis.append([self._label(m) for m in layer])
        self._index = {
            (g, m): i for g in range(max_grading + 1) for i, m in enumerate(self.monomials[g])
        }
        mult = {}
        for g1, g2 in itertools.product(range(max_grading + 1), repeat=2):
            if g1 + g2 > max_grading:
                continue
            for i, m1 in enumerate(self.monomials[g1]):
                for j, m2 in enumerate(self.monomials[g2]):
                    p = self._mon_mul(m1, m2)
                    if p is not None:
                        mult[(g1, i, g2, j)] = 1 << self._index[(g1 + g2, p)]
        comult = {}
        for g in range(max_grading + 1):
            for i, m in enumerate(self.monomials[g]):
                comult[(g, i)] = self._mon_coproduct(m, gen_coproducts)
        super().__init__(basis, mult, comult, truncation=max_grading if truncated else None)

    # -- monomial helpers

    def _label(self, m: tuple[int, ...]) -> str:
        if not any(m):
            return "1"
        parts = []
        for (name, _, _), e in zip(self.gens, m):
            if e == 1:
                parts.append(name)
            elif e > 1:
                parts.append(f"{name}^{e}")
        return "*".join(parts)

    def _mon_grading(self, m) -> int:
        return sum(e * g for e, g in zip(m, self._gradings))

    def _mon_mul(self, m1, m2) -> Optional[tuple[int, ...]]:
        out = tuple(a + b for a, b in zip(m1, m2))
        for e, b in zip(out, self._bounds):
            if b is not None and e >= b:
                return None
        return out

    def _enumerate_monomials(self, max_grading):
        mons: list[list[tuple[int, ...]]] = [[] for _ in range(max_grading + 1)]

        def rec(idx, acc, grading):
            if idx == len(self.gens):
                mons[grading].append(tuple(acc))
                return
            _, g, b = self.gens[idx]
            e = 0
            while grading + e * g <= max_grading and (b is None or e < b):
                rec(idx + 1, acc + [e], grading + e * g)
                e += 1

        rec(0, [], 0)
        return mons

    def _mon_coproduct(self, m, gen_coproducts) -> tuple[Pair, ...]:
        zero = tuple(0 for _ in self.gens)
        acc: dict[tuple[tuple[int, ...], tuple[int, ...]], bool] = {(zero, zero): True}
        for gi, e in enumerate(m):
            for _ in range(e):
                nxt: dict[tuple[tuple[int, ...], tuple[int, ...]], bool] = {}
                for (l, r) in acc:
                    for dl, dr in gen_coproducts[gi]:
                        nl = self._mon_mul(l, dl)
                        nr = self._mon_mul(r, dr)
                        if nl is None or nr is None:
                            continue
                        _xor_key(nxt, (nl, nr))
                acc = nxt
        out = []
        for (l, r) in acc:
            gl, gr = self._mon_grading(l), self._mon_grading(r)
            out.append(((gl, self._index[(gl, l)]), (gr, self._index[(gr, r)])))
        return tuple(sorted(out))

    def gen_element(self, name: str) -> tuple[int, int]:
        for idx, (n, g, _) in enumerate(self.gens):
            if n == name:
                m = tuple(1 if k == idx else 0 for k in range(len(self.gens)))
                return g, self._index[(g, m)]
        raise KeyError(name)


def build_a1_star() -> PolyHopf:
    """F2[x1,x2]/(x1^4, x2^2), |x1| = 1, |x2| = 3; the 8-dimensional
    quotient of the dual Steenrod algebra.  Complete (no truncation)."""
    gens = [("x1", 1, 4), ("x2", 3, 2)]
    e = lambda a, b: (a, b)
    cop_x1 = [(e(1, 0), e(0, 0)), (e(0, 0), e(1, 0))]
    cop_x2 = [(e(0, 1), e(0, 0)), (e(2, 0), e(1, 0)), (e(0, 0), e(0, 1))]
    h = PolyHopf(gens, [cop_x1, cop_x2], max_grading=6, truncated=False)
    h.assert_axioms()
    return h


def build_delta_cgl() -> PolyHopf:
    """Stability Hopf algebra for general linear groups over F2, known
    through grading 5: polynomial on sb (grading 1), delta (3), rho (4)
    with psi(delta) = 1|delta + sb|sb^2 + delta|1 and rho primitive.
    Grading-5 coproducts are forced multiplicatively; axioms asserted."""
    gens = [("sb", 1, None), ("delta", 3, None), ("rho", 4, None)]
    z = (0, 0, 0)
    sb = (1, 0, 0)
    sb2 = (2, 0, 0)
    d = (0, 1, 0)
    r = (0, 0, 1)
    cop_sb = [(sb, z), (z, sb)]
    cop_delta = [(d, z), (sb, sb2), (z, d)]
    cop_rho = [(r, z), (z, r)]
    h = PolyHopf(gens, [cop_sb, cop_delta, cop_rho], max_grading=5, truncated=True)
    h.assert_axioms()
    return h


def dualize(h: HopfAlgebra) -> HopfAlgebra:
    return h.dualize()


# ---------------------------------------------------------------- coalgebra maps


class CoalgebraMap:
    """Grading-preserving linear map given per basis element.

    images: dict (g, i) -> bitset in target grading g.
    """

    def __init__(self, source: HopfAlgebra, target: HopfAlgebra, images: dict[tuple[int, int], int]):
        self.source = source
        self.target = target
        self.images = dict(images)
        if self.images.get((0, 0)) != 1:
            raise ValueError("map must send unit to unit")
        bound = min(source.known_bound, target.known_bound)
        for g in range(bound + 1):
            for i in range(source.dim(g)):
                if (g, i) not in self.images:
                    raise ValueError(f"missing image for {source.label(g, i)}")
                if g <= target.known_bound and self.images[(g, i)] >> target.dim(g):
                    raise ValueError("grading-mismatched image assignment")

    @property
    def bound(self) -> int:
        return min(self.source.known_bound, self.target.known_bound)

    def apply(self, g: int, v: int) -> int:
        out = 0
        for i in bits_of(v):
            out ^= self.images[(g, i)]
        return out

    @classmethod
    def from_gen_images(cls, source: PolyHopf, target: HopfAlgebra, gen_images: dict[str, tuple[int, int]]):
        """Extend generator images multiplicatively.  gen_images values are
        (grading, bitset) homogeneous combos in the target."""
        images = {}
        bound = min(source.known_bound, target.known_bound)
        for g in range(bound + 1):
            for i, m in enumerate(source.monomials[g]):
                acc_g, acc_v = 0, 1
                for (name, gg, _), e in zip(source.gens, m):
                    for _ in range(e):
                        ig, iv = gen_images[name]
                        acc_v = target.product(acc_g, acc_v, ig, iv)
                        acc_g += ig
                if acc_g != g and acc_v:
                    raise ValueError("grading-mismatched image assignment")
                images[(g, i)] = acc_v
        return cls(source, target, images)


def build_cgl_to_a1_map(cgl: PolyHopf, a1: PolyHopf) -> CoalgebraMap:
    """The Hopf algebra map from the general-linear stability Hopf algebra
    to the truncated dual Steenrod algebra: sb -> x1, delta -> x2 + x1^3,
    rho -> 0, extended multiplicatively."""
    x1 = a1.gen_element("x1")
    x2 = a1.gen_element("x2")
    x1_cubed = a1.index(3, "x1^3")
    return CoalgebraMap.from_gen_images(
        cgl,
        a1,
        {
            "sb": (1, 1 << x1[1]),
            "delta": (3, (1 << x2[1]) | (1 << x1_cubed)),
            "rho": (4, 0),
        },
    )


def check_hopf_map(f: CoalgebraMap) -> list[tuple[str, bool, Optional[tuple]]]:
    """Pass/fail per axiom with the first violating basis pair on failure."""
    src, tgt = f.source, f.target
    bound = f.bound
    report = []

    bad = None
    for ga in range(bound + 1):
        if bad:
            break
        for gb in range(bound + 1 - ga):
            for a in range(src.dim(ga)):
                for b in range(src.dim(gb)):
                    lhs = f.apply(ga + gb, src.product(ga, 1 << a, gb, 1 << b))
                    rhs = tgt.product(ga, f.apply(ga, 1 << a), gb, f.apply(gb, 1 << b))
                    if lhs != rhs:
                        bad = ((ga, a), (gb, b))
                        break
                if bad:
                    break
            if bad:
                break
    report.append(("multiplicativity", bad is None, bad))

    bad = None
    for g in range(bound + 1):
        for i in range(src.dim(g)):
            lhs: dict[Pair, bool] = {}
            for (g1, i1), (g2, i2) in src.coproduct(g, i):
                for j1 in bits_of(f.apply(g1, 1 << i1)):
                    for j2 in bits_of(f.apply(g2, 1 << i2)):
                        _xor_key(lhs, ((g1, j1), (g2, j2)))
            rhs = tgt.coproduct_combo(g, f.apply(g, 1 << i))
            if lhs != rhs:
                bad = (g, i)
                break
        if bad:
            break
    report.append(("comultiplicativity", bad is None, bad))

    ok_unit = f.images.get((0, 0)) == 1
    report.append(("unit/counit", ok_unit, None if ok_unit else (0, 0)))
    return report
