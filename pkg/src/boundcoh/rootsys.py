"""Root systems, Weyl groups and Chevalley structure constants.

Conventions
-----------
* Bourbaki numbering of simple roots (so G2 has alpha_1 short and highest
  root 3a1+2a2, B_n has alpha_n short, C_n has alpha_n long).
* Cartan matrix entries ``a[i][j] = <alpha_i^vee, alpha_j>``, so the simple
  reflection is ``s_i(alpha_j) = alpha_j - a[i][j] alpha_i``.
* Roots are integer tuples in the simple-root basis; Weyl group elements act
  on that basis by integer matrices (columns are images of simple roots).
"""
from __future__ import annotations

import math
import re
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import product
from typing import Sequence

from .errors import InvalidCartanType, JacobiViolation, SizeLimit

Root = tuple  # integer coordinates in the simple-root basis

MAX_RANK = 6
DEFAULT_ORDER_BOUND = 10**6


# ---------------------------------------------------------------------------
# Cartan data
# ---------------------------------------------------------------------------

def _chain(n: int) -> list[list[int]]:
    a = [[0] * n for _ in range(n)]
    for i in range(n):
        a[i][i] = 2
        if i + 1 < n:
            a[i][i + 1] = a[i + 1][i] = -1
    return a


def cartan_matrix_of(letter: str, n: int) -> list[list[int]]:
    """Standard Cartan matrix of an irreducible type."""
    letter = letter.upper()
    ok = {
        "A": n >= 1, "B": n >= 2, "C": n >= 2, "D": n >= 4,
        "E": n in (6, 7, 8), "F": n == 4, "G": n == 2,
    }
    if not ok.get(letter, False):
        raise InvalidCartanType(f"no root system of type {letter}{n}")
    if letter == "A":
        return _chain(n)
    if letter == "B":
        a = _chain(n)
        a[n - 1][n - 2] = -2
        return a
    if letter == "C":
        a = _chain(n)
        a[n - 2][n - 1] = -2
        return a
    if letter == "D":
        a = _chain(n)
        a[n - 2][n - 1] = a[n - 1][n - 2] = 0
        a[n - 3][n - 1] = a[n - 1][n - 3] = -1
        return a
    if letter == "E":
        # Bourbaki: 1-3-4-5-6(-7-8), with 2 attached to 4
        a = [[2 if i == j else 0 for j in range(n)] for i in range(n)]
        edges = [(0, 2), (2, 3), (3, 4), (1, 3)] + [(k, k + 1) for k in range(4, n - 1)]
        for i, j in edges:
            a[i][j] = a[j][i] = -1
        return a
    if letter == "F":
        a = _chain(4)
        a[2][1] = -2
        return a
    # G2
    return [[2, -3], [-1, 2]]


def weyl_order_of(letter: str, n: int) -> int:
    letter = letter.upper()
    if letter == "A":
        return math.factorial(n + 1)
    if letter in "BC":
        return 2**n * math.factorial(n)
    if letter == "D":
        return 2**(n - 1) * math.factorial(n)
    return {("E", 6): 51840, ("E", 7): 2903040, ("E", 8): 696729600,
            ("F", 4): 1152, ("G", 2): 12}[(letter, n)]


_FACTOR_RE = re.compile(r"^([A-Ga-g])(\d+)$")


@dataclass(frozen=True)
class CartanDatum:
    factors: tuple[tuple[str, int], ...]
    cartan_matrix: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        expected = _block_cartan(self.factors)
        if tuple(map(tuple, expected)) != self.cartan_matrix:
            raise InvalidCartanType("Cartan matrix does not match the declared type")

    @classmethod
    def parse(cls, text: str) -> "CartanDatum":
        """Parse strings like ``"A2"``, ``"a1xA1"``, ``"G2"``."""
        parts = [p.strip() for p in text.strip().lower().split("x")]
        if not parts or any(not p for p in parts):
            raise InvalidCartanType(f"cannot parse Cartan type {text!r}")
        factors = []
        for p in parts:
            m = _FACTOR_RE.match(p)
            if not m:
                raise InvalidCartanType(f"cannot parse Cartan factor {p!r}")
            factors.append((m.group(1).upper(), int(m.group(2))))
        factors = tuple(factors)
        return cls(factors, tuple(map(tuple, _block_cartan(factors))))

    @property
    def name(self) -> str:
        return "x".join(f"{l}{n}" for l, n in self.factors)

    @property
    def rank(self) -> int:
        return len(self.cartan_matrix)

    @property
    def irreducible(self) -> bool:
        return len(self.factors) == 1

    def weyl_order(self) -> int:
        return math.prod(weyl_order_of(l, n) for l, n in self.factors)


def _block_cartan(factors) -> list[list[int]]:
    blocks = [cartan_matrix_of(l, n) for l, n in factors]
    r = sum(len(b) for b in blocks)
    a = [[0] * r for _ in range(r)]
    off = 0
    for b in blocks:
        for i, row in enumerate(b):
            a[off + i][off:off + len(b)] = row
        off += len(b)
    return a


# ---------------------------------------------------------------------------
# Weyl group elements
# ---------------------------------------------------------------------------

def _matmul(a, b):
    n = len(a)
    m = len(b[0])
    return tuple(tuple(sum(a[i][k] * b[k][j] for k in range(len(b))) for j in range(m))
                 for i in range(n))


def _matvec(a, v):
    return tuple(sum(x * y for x, y in zip(row, v)) for row in a)


@dataclass(frozen=True)
class WeylElement:
    word: tuple[int, ...]
    matrix: tuple[tuple[int, ...], ...]

    @property
    def length(self) -> int:
        return len(self.word)

    def __call__(self, v):
        return _matvec(self.matrix, v)

    def is_minus_identity(self) -> bool:
        n = len(self.matrix)
        return all(self.matrix[i][j] == (-1 if i == j else 0) for i in range(n) for j in range(n))


@dataclass(frozen=True)
class WeylEnumeration:
    elements: tuple[WeylElement, ...]
    histogram: tuple[int, ...]

    @property
    def order(self) -> int:
        return len(self.elements)


# ---------------------------------------------------------------------------
# Root system
# ---------------------------------------------------------------------------

def _height(r):
    return sum(r)


def _root_key(r):
    return (_height(r), tuple(r))


def _add(a, b):
    return tuple(x + y for x, y in zip(a, b))


def _sub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def _neg(a):
    return tuple(-x for x in a)


def root_name(r) -> str:
    """Readable label such as ``"a1+2a2"`` or ``"-a1-a2"``."""
    terms = []
    for i, c in enumerate(r, start=1):
        if c == 0:
            continue
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        terms.append(f"{sign}{'' if mag == 1 else mag}a{i}")
    s = "".join(terms) or "0"
    return s[1:] if s.startswith("+") else s


@dataclass(eq=False)
class RootSystem:
    datum: CartanDatum
    order_bound: int = DEFAULT_ORDER_BOUND
    positive_roots: tuple[Root, ...] = field(init=False)

    def __post_init__(self):
        if self.datum.rank > MAX_RANK:
            raise SizeLimit(f"rank {self.datum.rank} exceeds the supported maximum {MAX_RANK}")
        self.positive_roots = tuple(sorted(self._orbit_closure(), key=_root_key))
        self._posset = frozenset(self.positive_roots)

    @classmethod
    def from_type(cls, text: str, **kw) -> "RootSystem":
        return cls(CartanDatum.parse(text), **kw)

    # -- basic data -------------------------------------------------------
    @property
    def rank(self) -> int:
        return self.datum.rank

    @property
    def cartan(self):
        return self.datum.cartan_matrix

    @property
    def name(self) -> str:
        return self.datum.name

    def simple_root(self, i: int) -> Root:
        return tuple(1 if j == i else 0 for j in range(self.rank))

    def reflect(self, i: int, v):
        """Simple reflection s_i applied to v (simple-root coordinates)."""
        pairing = sum(self.cartan[i][j] * v[j] for j in range(self.rank))
        out = list(v)
        out[i] -= pairing
        return tuple(out)

    def _orbit_closure(self):
        seen = {self.simple_root(i) for i in range(self.rank)}
        queue = deque(seen)
        while queue:
            r = queue.popleft()
            for i in range(self.rank):
                s = self.reflect(i, r)
                if s not in seen:
                    seen.add(s)
                    queue.append(s)
        return [r for r in seen if all(c >= 0 for c in r)]

    @property
    def roots(self) -> tuple[Root, ...]:
        return self.positive_roots + tuple(_neg(r) for r in self.positive_roots)

    def is_root(self, v) -> bool:
        return v in self._posset or _neg(v) in self._posset

    def is_positive(self, v) -> bool:
        return v in self._posset

    @cached_property
    def rho(self) -> tuple[Fraction, ...]:
        s = [0] * self.rank
        for r in self.positive_roots:
            s = [a + b for a, b in zip(s, r)]
        return tuple(Fraction(x, 2) for x in s)

    @property
    def highest_root(self) -> Root:
        if not self.datum.irreducible:
            raise InvalidCartanType("highest root is defined for irreducible types only")
        return self.positive_roots[-1]

    @cached_property
    def symmetrizer(self) -> tuple[Fraction, ...]:
        """d_i = (alpha_i, alpha_i)/2 with the shortest root of each factor normalised to 1."""
        n = self.rank
        a = self.cartan
        d: list[Fraction | None] = [None] * n
        for start in range(n):
            if d[start] is not None:
                continue
            comp = [start]
            d[start] = Fraction(1)
            queue = deque([start])
            while queue:
                i = queue.popleft()
                for j in range(n):
                    if j != i and a[i][j] != 0 and d[j] is None:
                        # d_i a_ij = d_j a_ji
                        d[j] = d[i] * a[i][j] / a[j][i]
                        comp.append(j)
                        queue.append(j)
            m = min(d[j] for j in comp)
            for j in comp:
                d[j] = d[j] / m
        return tuple(d)

    def inner(self, u, v) -> Fraction:
        """Invariant form (u, v) with (alpha_i, alpha_j) = d_i a_ij."""
        d = self.symmetrizer
        a = self.cartan
        return sum((d[i] * a[i][j] * u[i] * v[j]
                    for i in range(self.rank) if u[i] for j in range(self.rank) if v[j]),
                   Fraction(0))

    # -- Weyl group -------------------------------------------------------
    @cached_property
    def simple_reflection_matrices(self):
        mats = []
        for i in range(self.rank):
            cols = [self.reflect(i, self.simple_root(j)) for j in range(self.rank)]
            mats.append(tuple(tuple(cols[j][k] for j in range(self.rank)) for k in range(self.rank)))
        return tuple(mats)

    def enumerate_weyl(self, generator_order: Sequence[int] | None = None) -> WeylEnumeration:
        """Breadth-first closure of the simple reflections.

        The word attached to each element is the first one reached, which is
        reduced because breadth-first search explores by length.
        """
        order = self.datum.weyl_order()
        if order > self.order_bound:
            raise SizeLimit(f"Weyl group of {self.name} has order {order} > bound {self.order_bound}")
        gens = list(range(self.rank)) if generator_order is None else list(generator_order)
        if sorted(gens) != list(range(self.rank)):
            raise ValueError("generator_order must be a permutation of the simple indices")
        return self._enumerate(tuple(gens))

    def _enumerate(self, gens: tuple[int, ...]) -> WeylEnumeration:
        cached = getattr(self, "_weyl_cache", {})
        if gens in cached:
            return cached[gens]
        ident = tuple(tuple(1 if i == j else 0 for j in range(self.rank)) for i in range(self.rank))
        refl = self.simple_reflection_matrices
        seen = {ident: ()}
        frontier = [ident]
        while frontier:
            nxt = []
            for m in frontier:
                w = seen[m]
                for i in gens:
                    m2 = _matmul(m, refl[i])
                    if m2 not in seen:
                        seen[m2] = w + (i,)
                        nxt.append(m2)
            frontier = nxt
        elems = tuple(WeylElement(w, m) for m, w in seen.items())
        hist = [0] * (max(e.length for e in elems) + 1)
        for e in elems:
            hist[e.length] += 1
        result = WeylEnumeration(elems, tuple(hist))
        cached[gens] = result
        self._weyl_cache = cached
        return result

    @property
    def weyl(self) -> tuple[WeylElement, ...]:
        return self.enumerate_weyl().elements

    def inversion_count(self, w: WeylElement) -> int:
        return sum(1 for r in self.positive_roots if not self.is_positive(w(r)))

    def longest_element(self) -> WeylElement:
        elems = self.weyl
        top = max(e.length for e in elems)
        longest = [e for e in elems if e.length == top]
        if len(longest) != 1:
            raise AssertionError("longest element is not unique")
        w0 = longest[0]
        if any(self.is_positive(w0(r)) for r in self.positive_roots):
            raise AssertionError("w0 fixes the sign of a positive root")
        return w0

    @property
    def w0(self) -> WeylElement:
        return self.longest_element()

    # -- structure constants ---------------------------------------------
    def p_value(self, a, b) -> int:
        """Largest p with b - p a a root (the a-string through b starts at b - p a)."""
        p = 0
        v = _sub(b, a)
        while self.is_root(v):
            p += 1
            v = _sub(v, a)
        return p

    @cached_property
    def extraspecial_pairs(self) -> dict[Root, tuple[Root, Root]]:
        pairs = {}
        for xi in self.positive_roots:
            for a in self.positive_roots:  # already sorted by (height, coords)
                b = _sub(xi, a)
                if self.is_positive(b):
                    pairs[xi] = (a, b)
                    break
        return pairs

    def structure_constant(self, a, b) -> int:
        """N_{a,b} for arbitrary roots a, b (zero when a+b is not a root)."""
        return self._n(tuple(a), tuple(b))

    def _n(self, a, b) -> int:
        memo = self.__dict__.setdefault("_n_memo", {})
        key = (a, b)
        if key in memo:
            return memo[key]
        val = self._n_uncached(a, b)
        memo[key] = val
        return val

    def _n_uncached(self, a, b) -> int:
        s = _add(a, b)
        if not self.is_root(s):
            return 0
        pa, pb = self.is_positive(a), self.is_positive(b)
        if pa and pb:
            a0, b0 = self.extraspecial_pairs[s]
            if (a, b) == (a0, b0):
                return self.p_value(a0, b0) + 1
            if (b, a) == (a0, b0):
                return -self._n(b, a)
            # four-root relation on (a, b, -a0, -b0)
            total = Fraction(0)
            t = _sub(b, a0)
            if self.is_root(t):
                total += Fraction(self._n(b, _neg(a0)) * self._n(a, _neg(b0)), self.inner(t, t))
            t = _sub(a, a0)
            if self.is_root(t):
                total += Fraction(self._n(_neg(a0), a) * self._n(b, _neg(b0)), self.inner(t, t))
            val = self.inner(s, s) * total / self._n(a0, b0)
            if val.denominator != 1:
                raise JacobiViolation(f"non-integral structure constant at {a}, {b}")
            return int(val)
        if not pa and not pb:
            return -self._n(_neg(a), _neg(b))
        g = _neg(s)  # a + b + g = 0
        if self.is_positive(b) == self.is_positive(g):
            val = self.inner(g, g) / self.inner(a, a) * self._n(b, g)
        else:
            val = self.inner(g, g) / self.inner(b, b) * self._n(g, a)
        if val.denominator != 1:
            raise JacobiViolation(f"non-integral structure constant at {a}, {b}")
        return int(val)

    @cached_property
    def constants(self) -> dict[tuple[Root, Root], int]:
        return chevalley_constants(self)


def chevalley_constants(rs: RootSystem) -> dict[tuple[Root, Root], int]:
    """N_{a,b} for ordered pairs of positive roots whose sum is a root.

    Signs follow the extraspecial-pair normalisation (N = +(p+1) on every
    extraspecial pair).  Magnitudes and the Jacobi identity on the positive
    nilradical are audited before returning.
    """
    table = {}
    for a, b in product(rs.positive_roots, repeat=2):
        if rs.is_positive(_add(a, b)):
            n = rs.structure_constant(a, b)
            if abs(n) != rs.p_value(a, b) + 1:
                raise JacobiViolation(f"|N({a},{b})| = {abs(n)}, expected p+1 = {rs.p_value(a, b) + 1}")
            table[(a, b)] = n
    for (a, b), n in table.items():
        if table[(b, a)] != -n:
            raise JacobiViolation(f"antisymmetry fails at {a}, {b}")
    bad = jacobi_defect(rs.positive_roots, table)
    if bad is not None:
        raise JacobiViolation(f"Jacobi identity fails on {bad}")
    return table


def jacobi_defect(basis, table):
    """First basis triple violating Jacobi for the bracket [x_a, x_b] = N_ab x_{a+b}, or None."""
    def bracket(u: dict, v: dict) -> dict:
        out = {}
        for a, ca in u.items():
            for b, cb in v.items():
                n = table.get((a, b), 0)
                if n:
                    k = _add(a, b)
                    out[k] = out.get(k, 0) + ca * cb * n
        return {k: c for k, c in out.items() if c}

    for x, y, z in product(basis, repeat=3):
        tot = {}
        for u, v, w in ((x, y, z), (y, z, x), (z, x, y)):
            for k, c in bracket(bracket({u: 1}, {v: 1}), {w: 1}).items():
                tot[k] = tot.get(k, 0) + c
        if any(tot.values()):
            return (x, y, z)
    return None


def build_root_system(datum: CartanDatum | str, **kw) -> RootSystem:
    if isinstance(datum, str):
        datum = CartanDatum.parse(datum)
    return RootSystem(datum, **kw)


def enumerate_weyl(rs: RootSystem) -> WeylEnumeration:
    return rs.enumerate_weyl()


def longest_element(rs: RootSystem) -> WeylElement:
    return rs.longest_element()
