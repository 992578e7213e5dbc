"""Dimension bookkeeping for the boundary spectral sequence.

The second page is filled in from axioms about the measurable cohomology of
the group with coefficients in functions on k-fold products of the boundary:

* column 0, row q > 0: continuous Betti number b_q;
* columns 1 and 2, row q > 0: binom(r, q) for even q, zero for odd q;
* columns >= 3, rows > 0: zero;
* row 0, columns 0 and 1: zero (the augmentation cancels the constants);
* row 0, column n+1: the unknown boundary cohomology in degree n;
* d_2 from (0, q+1) to (2, q) vanishes for even q > 0.

Since the sequence converges to zero, every surviving class above row 0 has
to be killed.  The solver walks the pages, and whenever a class can only die
through one differential into an unknown bottom-row cell, that differential
must be injective; the bottom-row dimension is whatever it receives.
Anything that is not forced this way raises instead of guessing.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from math import comb
from pathlib import Path
from typing import Mapping

from ..errors import BoundcohError, InvalidBetti


class LedgerAmbiguity(BoundcohError):
    """The page shape does not force a unique answer."""


@dataclass(frozen=True)
class BettiTable:
    rank: int
    betti: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "betti", tuple(int(b) for b in self.betti))
        if self.rank < 1:
            raise InvalidBetti("rank must be positive")
        if not self.betti or self.betti[0] != 1:
            raise InvalidBetti("b_0 must equal 1")
        if any(b < 0 for b in self.betti):
            raise InvalidBetti("Betti numbers must be non-negative")

    def b(self, q: int) -> int:
        """b_q, zero past the end of the table."""
        return self.betti[q] if 0 <= q < len(self.betti) else 0

    @classmethod
    def parse(cls, rank: int, csv: str) -> "BettiTable":
        try:
            values = [int(x) for x in csv.split(",") if x.strip()]
        except ValueError as exc:
            raise InvalidBetti(f"cannot parse Betti list {csv!r}") from exc
        return cls(int(rank), tuple(values))

    @classmethod
    def from_json(cls, data: Mapping) -> "BettiTable":
        try:
            return cls(int(data["rank"]), tuple(data["betti"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidBetti(f"malformed Betti table: {exc}") from exc

    @classmethod
    def load(cls, path) -> "BettiTable":
        return cls.from_json(json.loads(Path(path).read_text()))

    def to_json(self) -> dict:
        return {"rank": self.rank, "betti": list(self.betti)}

    def default_qmax(self) -> int:
        return self.rank + 4


@dataclass
class LedgerResult:
    dims: dict[int, int]
    e2: dict[tuple[int, int], int]
    e3: dict[tuple[int, int], int]
    events: list[dict] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "dims": {str(n): d for n, d in sorted(self.dims.items())},
            "e2_nonzero": {f"{p},{q}": d for (p, q), d in sorted(self.e2.items()) if d},
            "e3_nonzero": {f"{p},{q}": d for (p, q), d in sorted(self.e3.items()) if d},
            "events": self.events,
        }


def second_page(t: BettiTable, q_max: int) -> dict[tuple[int, int], int]:
    """Known E_2 cells for rows 1..q_max and the two known bottom-row cells."""
    page = {(0, 0): 0, (1, 0): 0}
    for q in range(1, q_max + 1):
        page[(0, q)] = t.b(q)
        for p in (1, 2):
            page[(p, q)] = comb(t.rank, q) if q % 2 == 0 else 0
        for p in range(3, q_max + 3):
            page[(p, q)] = 0
    return page


def _axiom_zero(r: int, src: tuple[int, int]) -> bool:
    p, q = src
    return r == 2 and p == 0 and q >= 2 and (q - 1) % 2 == 0


def _solve(t: BettiTable, q_max: int) -> LedgerResult:
    known = second_page(t, q_max)
    e2 = dict(known)
    # bottom row n+1 for n = 1..q_max; classes of total degree n+1 can only
    # reach them from rows <= n, so rows beyond q_max are irrelevant.  Rows up
    # to q_max can still die two columns further out, so those are tracked too.
    received = {n + 1: 0 for n in range(1, q_max + 3)}
    events = []
    e3 = None

    def is_unknown(c):
        return c[1] == 0 and c[0] in received

    def alive(c):
        return known.get(c, 0) > 0 or is_unknown(c)

    r = 2
    while True:
        if r == 3:
            e3 = dict(known)
        movers = [c for c, d in known.items() if d and c[1] > 0]
        if not movers:
            break
        if r > q_max + 2:
            raise LedgerAmbiguity(f"classes survive past page {r}: {sorted(movers)}")
        for src in sorted(movers):
            p, q = src
            tgt = (p + r, q - r + 1)
            if _axiom_zero(r, src) or not alive(tgt):
                continue
            if not is_unknown(tgt):
                raise LedgerAmbiguity(f"d_{r} from {src} hits the known nonzero cell {tgt}")
            # src must die here: nothing can hit it later and no later target is alive
            for s in range(r, q + 2):
                into = (p - s, q + s - 1)
                if into[0] >= 0 and known.get(into, 0) and not _axiom_zero(s, into):
                    raise LedgerAmbiguity(f"{src} may also be hit by d_{s} from {into}")
                out = (p + s, q - s + 1)
                if s > r and alive(out) and not _axiom_zero(s, src):
                    raise LedgerAmbiguity(f"{src} could die by d_{s} into {out} as well")
            received[tgt[0]] += known[src]
            events.append({"page": r, "source": list(src), "target": list(tgt), "rank": known[src]})
            known[src] = 0
        r += 1
    if e3 is None:
        e3 = dict(known)
    for n in range(1, q_max + 1):
        killed_by_d2 = sum(e["rank"] for e in events if e["page"] == 2 and e["target"][0] == n + 1)
        e3[(n + 1, 0)] = received[n + 1] - killed_by_d2
    dims = {n: received[n + 1] for n in range(1, q_max + 1)}
    return LedgerResult(dims, e2, e3, events)


def ledger_solve(t: BettiTable, q_max: int | None = None) -> LedgerResult:
    """Boundary cohomology dimensions in degrees 1..q_max forced by convergence to zero."""
    if q_max is None:
        q_max = t.default_qmax()
    if q_max < 1:
        raise BoundcohError("q_max must be at least 1")
    return _solve(t, q_max)


def theorem_dims(t: BettiTable, q_max: int | None = None) -> dict[int, int]:
    """Closed form: extra binom(r, q-1) for odd 3 <= q <= r+1, binom(r, q-2) for even 4 <= q <= r+2."""
    if q_max is None:
        q_max = t.default_qmax()
    r = t.rank
    out = {}
    for q in range(1, q_max + 1):
        d = t.b(q)
        if q % 2 == 1 and 3 <= q <= r + 1:
            d += comb(r, q - 1)
        elif q % 2 == 0 and 4 <= q <= r + 2:
            d += comb(r, q - 2)
        out[q] = d
    return out

