"""Mod-2 Dyer-Lashof calculus on free E-infinity algebras.

Classes are F2 polynomials in normal operation towers Q^I(x) on bigraded
generators x = (grading g, homological degree d).  The canonical internal
form is upper-indexed; lower indices are a view via Q^s(x) = Q_{s-|x|}(x).

A monomial is a sorted tuple of factors (Generator, upper sequence); a
polynomial is a frozenset of monomials (F2 coefficients implicit).

The Adem relation used for r > 2s is

    Q^r Q^s = sum_i C(i-s-1, 2i-r) Q^{r+s-i} Q^i

kept as configuration data (ADEM_COEFF) so the convention is auditable;
it is pinned by Q^{3,1}(sigma) = 0 (empty sum).  The Nishida relation is

    Sq^a_* Q^s = sum_t C(s-a, a-2t) Q^{s-a+t} Sq^t_*

with binomials of negative top zero and Q^{<0} = 0.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, NamedTuple, Optional


class Generator(NamedTuple):
    name: str
    g: int  # grading, positive
    d: int  # homological degree, nonnegative


Factor = tuple[Generator, tuple[int, ...]]
Monomial = tuple[Factor, ...]
Poly = frozenset  # of Monomial

ZERO: Poly = frozenset()
ONE: Poly = frozenset({()})


def binom_odd(n: int, k: int) -> bool:
    """C(n, k) mod 2, zero outside 0 <= k <= n."""
    return 0 <= k <= n and (k & (n - k)) == 0


def ADEM_COEFF(r: int, s: int, i: int) -> bool:
    """Coefficient of Q^{r+s-i} Q^i in the rewrite of Q^r Q^s, r > 2s."""
    return binom_odd(i - s - 1, 2 * i - r)


# ---------------------------------------------------------------- bidegrees and keys

def factor_bidegree(f: Factor) -> tuple[int, int]:
    gen, seq = f
    return (gen.g << len(seq), sum(seq) + gen.d)


def mono_bidegree(m: Monomial) -> tuple[int, int]:
    g = d = 0
    for f in m:
        fg, fd = factor_bidegree(f)
        g += fg
        d += fd
    return g, d


def factor_key(f: Factor):
    gen, seq = f
    return (gen.name, len(seq), seq)


def mono_sorted(factors: Iterable[Factor]) -> Monomial:
    return tuple(sorted(factors, key=factor_key))


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    return mono_sorted(a + b)


def poly(*monos: Monomial) -> Poly:
    out = set()
    for m in monos:
        out.symmetric_difference_update({m})
    return frozenset(out)


def poly_add(*ps: Poly) -> Poly:
    out: set = set()
    for p in ps:
        out.symmetric_difference_update(p)
    return frozenset(out)


def poly_mul(p: Poly, q: Poly) -> Poly:
    out: set = set()
    for a in p:
        for b in q:
            out.symmetric_difference_update({mono_mul(a, b)})
    return frozenset(out)


def gen_mono(gen: Generator) -> Monomial:
    return ((gen, ()),)


def q_mono_of(gen: Generator, upper: Iterable[int]) -> Monomial:
    return ((gen, tuple(upper)),)


# ---------------------------------------------------------------- index conversion

def lower_form(upper: tuple[int, ...], x: Generator) -> tuple[int, ...]:
    """s_i' = s_i - sum_{j>i} s_j - d(x)."""
    out = []
    for i, s in enumerate(upper):
        out.append(s - sum(upper[i + 1:]) - x.d)
    return tuple(out)


def upper_form(lower: tuple[int, ...], x: Generator) -> tuple[int, ...]:
    """Inverse of lower_form, built from the innermost entry outward."""
    acc = x.d
    out = [0] * len(lower)
    for i in range(len(lower) - 1, -1, -1):
        out[i] = lower[i] + acc
        acc += out[i]
    return tuple(out)


def is_normal(upper: tuple[int, ...], x: Generator) -> bool:
    low = lower_form(upper, x)
    if not low:
        return True
    if low[0] <= 0:
        return False
    return all(low[i] <= low[i + 1] for i in range(len(low) - 1))


# ---------------------------------------------------------------- Q action

def _q_factor(s: int, f: Factor) -> Poly:
    """Q^s on a single normal tower, normalized.  Internal: s may be <= 0."""
    if s < 0:
        return ZERO
    gen, seq = f
    d = sum(seq) + gen.d
    if s < d:
        return ZERO
    if s == d:
        return poly(mono_mul((f,), (f,)))
    if not seq or s <= 2 * seq[0]:
        # prepending s keeps the lower indices ascending and positive
        return poly(q_mono_of(gen, (s,) + seq))
    t = seq[0]
    inner: Factor = (gen, seq[1:])
    out = ZERO
    for i in range((s + 1) // 2, s - t):
        if ADEM_COEFF(s, t, i):
            out = poly_add(out, _q_poly(s + t - i, _q_factor(i, inner)))
    return out


def _q_mono(s: int, m: Monomial) -> Poly:
    """Cartan expansion over the factors of m."""
    if not m:
        return ONE if s == 0 else ZERO
    head, rest = m[0], m[1:]
    out = ZERO
    for i in range(s + 1):
        a = _q_factor(i, head)
        if not a:
            continue
        b = _q_mono(s - i, rest)
        if b:
            out = poly_add(out, poly_mul(a, b))
    return out


def _q_poly(s: int, p: Poly) -> Poly:
    out = ZERO
    for m in p:
        out = poly_add(out, _q_mono(s, m))
    return out


def apply_q(s: int, p: Poly) -> Poly:
    """Q^s on a normalized polynomial; total, fully normalized output."""
    if s < 1:
        raise ValueError("operation index must be positive")
    return _q_poly(s, p)


# ---------------------------------------------------------------- dual Steenrod action

def _sq_factor(a: int, f: Factor, registered) -> Poly:
    if a == 0:
        return poly((f,))
    gen, seq = f
    if not seq:
        if registered:
            img = registered.get((gen.name, a))
            if img is not None:
                return img
        return ZERO
    s = seq[0]
    inner: Factor = (gen, seq[1:])
    out = ZERO
    for t in range(a // 2 + 1):
        if binom_odd(s - a, a - 2 * t):
            out = poly_add(out, _q_poly(s - a + t, _sq_factor(t, inner, registered)))
    return out


def _sq_mono(a: int, m: Monomial, registered) -> Poly:
    if not m:
        return ONE if a == 0 else ZERO
    head, rest = m[0], m[1:]
    out = ZERO
    for i in range(a + 1):
        x = _sq_factor(i, head, registered)
        if not x:
            continue
        y = _sq_mono(a - i, rest, registered)
        if y:
            out = poly_add(out, poly_mul(x, y))
    return out


def dual_steenrod(a: int, p: Poly, registered: Optional[dict] = None) -> Poly:
    """Sq^a_* via Cartan over factors and Nishida past Q's.

    ``registered`` maps (generator name, a) to the polynomial value of
    Sq^a_* on that generator; unregistered positive-degree actions are zero.
    """
    if a < 1:
        raise ValueError("operation index must be positive")
    out = ZERO
    for m in p:
        out = poly_add(out, _sq_mono(a, m, registered))
    return out


# ---------------------------------------------------------------- basis enumeration

def normal_factors(gen: Generator, g_max: int, d_max: int) -> list[Factor]:
    """All normal towers Q^I(gen), including I = (), inside the box."""
    if gen.g <= 0:
        raise ValueError("generator grading must be positive")
    out: list[Factor] = []
    if gen.g <= g_max and gen.d <= d_max:
        out.append((gen, ()))

    def rec(lower_rev: list[int], acc_deg: int, length: int):
        # lower_rev holds lower indices innermost-first; acc_deg is the
        # homological degree of the tower built so far
        if (gen.g << (length + 1)) > g_max:
            return
        cap = lower_rev[-1] if lower_rev else None
        l = 1
        while True:
            if cap is not None and l > cap:
                break
            s = l + acc_deg  # upper index being prepended
            new_deg = acc_deg + s
            if new_deg > d_max:
                break
            nxt = lower_rev + [l]
            upper = tuple(nxt[k] for k in range(len(nxt) - 1, -1, -1))
            out.append((gen, upper_form(tuple(upper), gen)))
            rec(nxt, new_deg, length + 1)
            l += 1

    rec([], gen.d, 0)
    return out


def free_basis(gens: list[Generator], g: int, d: int) -> list[Monomial]:
    """All monomials of bidegree exactly (g, d), in canonical order."""
    pool: list[Factor] = []
    for x in gens:
        pool.extend(normal_factors(x, g, d))
    pool.sort(key=factor_key)
    out: list[Monomial] = []

    def rec(idx: int, acc: list[Factor], rg: int, rd: int):
        if rg == 0:
            if rd == 0:
                out.append(tuple(acc))
            return
        if idx == len(pool):
            return
        f = pool[idx]
        fg, fd = factor_bidegree(f)
        rec(idx + 1, acc, rg, rd)
        k = 1
        while k * fg <= rg and k * fd <= rd:
            rec(idx + 1, acc + [f] * k, rg - k * fg, rd - k * fd)
            k += 1

    rec(0, [], g, d)
    out.sort(key=lambda m: tuple(factor_key(f) for f in m))
    return out


# ---------------------------------------------------------------- ideal quotients

def ideal_quotient_dims(
    gens: list[Generator],
    relations: list[Poly],
    g_max: int,
    d_max: int,
) -> dict[tuple[int, int], int]:
    """dim of free/(ideal) per bidegree in the box.

    The ideal is the span of the relations closed under multiplication by
    all monomials and all Q^s, discarding anything landing outside the box.
    """
    bases: dict[tuple[int, int], list[Monomial]] = {}
    index: dict[tuple[int, int], dict[Monomial, int]] = {}
    for g in range(g_max + 1):
        for d in range(d_max + 1):
            b = free_basis(gens, g, d)
            bases[(g, d)] = b
            index[(g, d)] = {m: i for i, m in enumerate(b)}

    def to_vec(p: Poly, bd) -> int:
        v = 0
        for m in p:
            v |= 1 << index[bd][m]
        return v

    def to_poly(v: int, bd) -> Poly:
        b = bases[bd]
        return frozenset(b[i] for i in range(v.bit_length()) if v >> i & 1)

    from .f2linalg import Echelon

    ech: dict[tuple[int, int], Echelon] = {bd: Echelon() for bd in bases}
    work: list[tuple[tuple[int, int], int]] = []

    def insert(bd, v):
        if not v:
            return
        r, _ = ech[bd].add(v)
        if r:
            work.append((bd, r))

    for p in relations:
        if not p:
            continue
        bd = mono_bidegree(next(iter(p)))
        if any(mono_bidegree(m) != bd for m in p):
            raise ValueError("relations must be bihomogeneous")
        if bd in bases:
            insert(bd, to_vec(p, bd))

    while work:
        (g, d), v = work.pop()
        p = to_poly(v, (g, d))
        for g2 in range(0, g_max - g + 1):
            for d2 in range(0, d_max - d + 1):
                if g2 == 0 and d2 == 0:
                    continue
                for m2 in bases[(g2, d2)]:
                    prod = frozenset(mono_mul(m, m2) for m in p)
                    insert((g + g2, d + d2), to_vec(prod, (g + g2, d + d2)))
        if 2 * g <= g_max:
            for s in range(1, d_max - d + 1):
                img = apply_q(s, p)
                if img:
                    insert((2 * g, d + s), to_vec(img, (2 * g, d + s)))

    return {bd: len(bases[bd]) - ech[bd].rank for bd in sorted(bases)}


# ---------------------------------------------------------------- bar operation

def barred(x: Generator) -> Generator:
    return Generator(x.name + "b", x.g, x.d + 1)


def bar_class(p: Poly) -> Poly:
    """Bar of a class: decomposables die; on a single tower the lower
    indices shift down by one and are evaluated over the barred generator
    (Q_0 = squaring), raising homological degree by one."""
    out = ZERO
    for m in p:
        if len(m) != 1:
            continue  # decomposable
        gen, upper = m[0]
        low = lower_form(upper, gen)
        acc = poly(gen_mono(barred(gen)))
        for j in range(len(low) - 1, -1, -1):
            shifted = low[j] - 1
            if shifted < 0:
                acc = ZERO
                break
            # lower Q_shifted on a homogeneous polynomial of degree deg
            deg = None
            for mm in acc:
                deg = mono_bidegree(mm)[1]
                break
            if deg is None:
                break
            acc = _q_poly(shifted + deg, acc)
        out = poly_add(out, acc)
    return out


# ---------------------------------------------------------------- slope

def slope(m: Monomial) -> Fraction:
    g, d = mono_bidegree(m)
    if g <= 0:
        raise ValueError("slope needs positive grading")
    return Fraction(d, g)


# ---------------------------------------------------------------- text syntax

_ATOM = re.compile(
    r"^(?:(?P<op>[Qq])\[(?P<seq>\d+(?:,\d+)*)\]\((?P<arg>\w+)\)|(?P<gen>\w+))"
    r"(?:\^(?P<pow>\d+))?$"
)


def parse(text: str, gens: dict[str, Generator]) -> Poly:
    """Parse the class syntax: terms joined by '+', factors by '*';
    `Q[2,1](s)` upper towers, `q[1,1](s)` lower towers, `s^2` powers."""
    text = text.strip()
    if text == "0":
        return ZERO
    out = ZERO
    for term in text.split("+"):
        factors: list[Factor] = []
        for atom in term.strip().split("*"):
            m = _ATOM.match(atom.strip())
            if not m:
                raise ValueError(f"bad factor syntax: {atom!r}")
            power = int(m.group("pow") or 1)
            if m.group("gen"):
                name = m.group("gen")
                if name not in gens:
                    raise ValueError(f"unknown generator {name!r}")
                f: Factor = (gens[name], ())
            else:
                name = m.group("arg")
                if name not in gens:
                    raise ValueError(f"unknown generator {name!r}")
                seq = tuple(int(k) for k in m.group("seq").split(","))
                if m.group("op") == "q":
                    seq = upper_form(seq, gens[name])
                if not is_normal(seq, gens[name]):
                    raise ValueError(f"non-normal sequence in {atom!r}")
                f = (gens[name], seq)
            factors.extend([f] * power)
        out = poly_add(out, poly(mono_sorted(factors)))
    return out


def render_factor(f: Factor, power: int) -> str:
    gen, seq = f
    if seq:
        base = f"Q[{','.join(str(s) for s in seq)}]({gen.name})"
    else:
        base = gen.name
    return base if power == 1 else f"{base}^{power}"


def render_mono(m: Monomial) -> str:
    if not m:
        return "1"
    parts = []
    i = 0
    while i < len(m):
        j = i
        while j < len(m) and m[j] == m[i]:
            j += 1
        parts.append(render_factor(m[i], j - i))
        i = j
    return "*".join(parts)


def render(p: Poly) -> str:
    """Canonical printing: terms in descending order of their sorted factor
    keys, factors ascending within a term."""
    if not p:
        return "0"
    monos = sorted(p, key=lambda m: tuple(factor_key(f) for f in m), reverse=True)
    return " + ".join(render_mono(m) for m in monos)


# ---------------------------------------------------------------- standard generators

SIGMA = Generator("s", 1, 0)
NU1 = Generator("n1", 3, 3)
NU2 = Generator("n2", 3, 3)
BETA = Generator("b", 3, 2)
