"""Exact arithmetic in the quantum torus over q-commuting generators.

Generators ``u, v`` satisfy ``u*v = q**lam(u, v) * v*u`` with ``lam`` an
antisymmetric integer table. Elements are finite sums of canonical monomials
(generators sorted in a fixed total order, integer exponents) with
coefficients in Z[q, q^-1].

Internally a monomial key is a tuple of ``(generator_index, exponent)`` pairs
sorted by index; a coefficient is a ``dict`` mapping q-degree to integer.
Values are never mutated after construction.
"""
from __future__ import annotations

from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass

__all__ = [
    "CommutationTable",
    "ForeignGeneratorError",
    "QElement",
    "QMonomial",
    "format_laurent",
    "mul",
    "normalize_word",
    "q_ratio",
    "scalar_q_pow",
]

Key = tuple  # tuple[tuple[int, int], ...]


class ForeignGeneratorError(KeyError):
    """A generator id that does not belong to the commutation table."""


class CommutationTable:
    """Antisymmetric table ``lam`` over an ordered generator set.

    ``order`` fixes the canonical generator order. ``pairs`` lists
    ``(u, v, s)`` with ``u*v = q**s * v*u``; every omitted pair commutes.
    """

    def __init__(self, order: Sequence[str], pairs: Iterable[tuple[str, str, int]] = ()):
        self.order = tuple(order)
        self.index = {g: i for i, g in enumerate(self.order)}
        if len(self.index) != len(self.order):
            raise ValueError("duplicate generator ids")
        lam: dict[tuple[int, int], int] = {}
        for u, v, s in pairs:
            if s not in (-1, 0, 1):
                raise ValueError(f"lambda({u},{v})={s} outside {{-1,0,1}}")
            if u == v:
                if s:
                    raise ValueError(f"lambda({u},{u}) must be 0")
                continue
            a, b = self._idx(u), self._idx(v)
            if lam.get((a, b), s) != s or lam.get((b, a), -s) != -s:
                raise ValueError(f"inconsistent lambda for ({u},{v})")
            if s:
                lam[a, b] = s
                lam[b, a] = -s
        self._lam = lam
        self._prod_cache: dict[tuple[Key, Key], tuple[int, Key]] = {}

    def _idx(self, g: str) -> int:
        try:
            return self.index[g]
        except KeyError:
            raise ForeignGeneratorError(g) from None

    def lam(self, u: str, v: str) -> int:
        return self._lam.get((self._idx(u), self._idx(v)), 0)

    def lam_idx(self, a: int, b: int) -> int:
        return self._lam.get((a, b), 0)

    def nonzero_pairs(self):
        """Yield ``(u, v, lam(u, v))`` for u before v in canonical order."""
        for (a, b), s in sorted(self._lam.items()):
            if a < b:
                yield self.order[a], self.order[b], s

    def __len__(self) -> int:
        return len(self.order)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CommutationTable):
            return NotImplemented
        return self is other or (self.order == other.order and self._lam == other._lam)

    def __hash__(self) -> int:
        return hash((self.order, frozenset(self._lam.items())))

    def __repr__(self) -> str:
        return f"CommutationTable({len(self.order)} generators, {len(self._lam) // 2} q-pairs)"

    # monomial product on canonical keys: (q-shift, merged key)
    def key_product(self, a: Key, b: Key) -> tuple[int, Key]:
        if not a:
            return 0, b
        if not b:
            return 0, a
        cached = self._prod_cache.get((a, b))
        if cached is not None:
            return cached
        lam = self._lam
        shift = 0
        for g, eg in a:
            for h, eh in b:
                if h >= g:
                    break
                s = lam.get((g, h))
                if s:
                    shift += s * eg * eh
        merged = []
        i = j = 0
        while i < len(a) and j < len(b):
            g, eg = a[i]
            h, eh = b[j]
            if g < h:
                merged.append(a[i])
                i += 1
            elif h < g:
                merged.append(b[j])
                j += 1
            else:
                if eg + eh:
                    merged.append((g, eg + eh))
                i += 1
                j += 1
        merged.extend(a[i:])
        merged.extend(b[j:])
        out = (shift, tuple(merged))
        if len(self._prod_cache) < 500_000:
            self._prod_cache[a, b] = out
        return out


@dataclass(frozen=True)
class QMonomial:
    """``q**qexp`` times the canonical product of generator powers."""

    qexp: int
    key: Key
    table: CommutationTable

    @property
    def exps(self) -> dict[str, int]:
        return {self.table.order[g]: e for g, e in self.key}

    def to_element(self) -> QElement:
        return QElement(self.table, {self.key: {self.qexp: 1}})

    def __str__(self) -> str:
        return f"q^{self.qexp} * " + _format_key(self.key, self.table)


def normalize_word(word: Iterable[tuple[str, int]], table: CommutationTable) -> QMonomial:
    """Sort a word of generator powers into canonical order.

    The q-exponent picked up is the sum of ``lam(g, h) * e_g * e_h`` over
    every pair where ``g`` precedes ``h`` in the word but follows it in the
    canonical order.
    """
    letters = [(table._idx(g), e) for g, e in word if e]
    qexp = 0
    for p in range(len(letters)):
        g, eg = letters[p]
        for r in range(p + 1, len(letters)):
            h, eh = letters[r]
            if g > h:
                qexp += table.lam_idx(g, h) * eg * eh
    exps: dict[int, int] = {}
    for g, e in letters:
        exps[g] = exps.get(g, 0) + e
    key = tuple(sorted((g, e) for g, e in exps.items() if e))
    return QMonomial(qexp, key, table)


def _add_poly(dst: dict[int, int], src: Mapping[int, int], shift: int = 0, scale: int = 1) -> None:
    for k, c in src.items():
        k += shift
        v = dst.get(k, 0) + scale * c
        if v:
            dst[k] = v
        else:
            dst.pop(k, None)


def _mul_poly(a: Mapping[int, int], b: Mapping[int, int], shift: int) -> dict[int, int]:
    out: dict[int, int] = {}
    for ka, ca in a.items():
        for kb, cb in b.items():
            k = ka + kb + shift
            v = out.get(k, 0) + ca * cb
            if v:
                out[k] = v
            else:
                del out[k]
    return out


class QElement:
    """An element of the quantum torus: ``sum coeff(q) * monomial``."""

    __slots__ = ("table", "_terms", "_hash")

    def __init__(self, table: CommutationTable, terms: Mapping[Key, Mapping[int, int]] | None = None):
        self.table = table
        clean: dict[Key, dict[int, int]] = {}
        for key, poly in (terms or {}).items():
            p = {k: c for k, c in poly.items() if c}
            if p:
                clean[key] = p
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, table: CommutationTable, terms: dict[Key, dict[int, int]]) -> QElement:
        obj = cls.__new__(cls)
        obj.table = table
        obj._terms = terms
        obj._hash = None
        return obj

    # constructors
    @classmethod
    def zero(cls, table: CommutationTable) -> QElement:
        return cls._raw(table, {})

    @classmethod
    def one(cls, table: CommutationTable) -> QElement:
        return cls._raw(table, {(): {0: 1}})

    @classmethod
    def q_power(cls, table: CommutationTable, k: int, coeff: int = 1) -> QElement:
        return cls._raw(table, {(): {k: coeff}} if coeff else {})

    @classmethod
    def gen(cls, table: CommutationTable, g: str, exp: int = 1) -> QElement:
        key = ((table._idx(g), exp),) if exp else ()
        return cls._raw(table, {key: {0: 1}})

    @classmethod
    def word(cls, table: CommutationTable, word: Iterable[tuple[str, int]]) -> QElement:
        return normalize_word(word, table).to_element()

    @property
    def terms(self) -> dict[Key, dict[int, int]]:
        return {k: dict(p) for k, p in self._terms.items()}

    def is_zero(self) -> bool:
        return not self._terms

    def is_monomial(self) -> bool:
        """True when the element is ``q**k * m`` for one canonical monomial ``m``."""
        if len(self._terms) != 1:
            return False
        (poly,) = self._terms.values()
        return len(poly) == 1 and next(iter(poly.values())) == 1

    def monomials(self) -> list[tuple[dict[int, int], QMonomial]]:
        return [(dict(p), QMonomial(0, k, self.table)) for k, p in sorted(self._terms.items())]

    def _check(self, other: QElement) -> None:
        if self.table is not other.table and self.table != other.table:
            raise ValueError("elements live over different generator sets")

    def __add__(self, other: QElement) -> QElement:
        if isinstance(other, int):
            other = QElement.q_power(self.table, 0, other)
        self._check(other)
        out = {k: dict(p) for k, p in self._terms.items()}
        for key, poly in other._terms.items():
            dst = out.setdefault(key, {})
            _add_poly(dst, poly)
            if not dst:
                del out[key]
        return QElement._raw(self.table, out)

    __radd__ = __add__

    def __neg__(self) -> QElement:
        return QElement._raw(self.table, {k: {d: -c for d, c in p.items()} for k, p in self._terms.items()})

    def __sub__(self, other: QElement) -> QElement:
        if isinstance(other, int):
            other = QElement.q_power(self.table, 0, other)
        return self + (-other)

    def __mul__(self, other: QElement) -> QElement:
        if isinstance(other, int):
            return self.scale(other)
        return mul(self, other, self.table)

    def __rmul__(self, other: int) -> QElement:
        if isinstance(other, int):
            return self.scale(other)
        return NotImplemented

    def scale(self, c: int) -> QElement:
        if not c:
            return QElement.zero(self.table)
        return QElement._raw(self.table, {k: {d: c * v for d, v in p.items()} for k, p in self._terms.items()})

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int):
            return self == QElement.q_power(self.table, 0, other)
        if not isinstance(other, QElement):
            return NotImplemented
        return self.table == other.table and self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset((k, frozenset(p.items())) for k, p in self._terms.items()))
        return self._hash

    def __repr__(self) -> str:
        return f"QElement({self})"

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for key in sorted(self._terms):
            coeff = format_laurent(self._terms[key])
            if " " in coeff:
                coeff = f"({coeff})"
            parts.append(coeff if not key else f"{coeff} * {_format_key(key, self.table)}")
        return " + ".join(parts)


def format_laurent(poly: Mapping[int, int]) -> str:
    """Render ``sum c_k q^k`` as e.g. ``q^-1 - q^0`` (descending degree)."""
    if not poly:
        return "0"
    out = []
    for k in sorted(poly, reverse=True):
        c = poly[k]
        mag = "" if abs(c) == 1 else f"{abs(c)}*"
        term = f"{mag}q^{k}"
        if not out:
            out.append(term if c > 0 else f"-{term}")
        else:
            out.append(f"+ {term}" if c > 0 else f"- {term}")
    return " ".join(out)


def _format_key(key: Key, table: CommutationTable) -> str:
    if not key:
        return "1"
    return " * ".join(f"{table.order[g]}^{e}" for g, e in key)


def mul(a: QElement, b: QElement, table: CommutationTable | None = None) -> QElement:
    """Product ``a*b``; each monomial product is brought to canonical form."""
    a._check(b)
    if table is not None and table != a.table:
        raise ValueError("table does not match the operands")
    t = a.table
    out: dict[Key, dict[int, int]] = {}
    for ka, pa in a._terms.items():
        for kb, pb in b._terms.items():
            shift, key = t.key_product(ka, kb)
            prod = _mul_poly(pa, pb, shift)
            dst = out.get(key)
            if dst is None:
                out[key] = prod
            else:
                _add_poly(dst, prod)
                if not dst:
                    del out[key]
    return QElement._raw(t, out)


def scalar_q_pow(a: QElement, k: int) -> QElement:
    if not k:
        return a
    return QElement._raw(a.table, {key: {d + k: c for d, c in p.items()} for key, p in a._terms.items()})


def q_ratio(a: QElement, b: QElement) -> int | None:
    """Return ``k`` with ``a == q**k * b``, or None if no such k exists."""
    if b.is_zero():
        raise ZeroDivisionError("q_ratio with zero denominator")
    a._check(b)
    if a._terms.keys() != b._terms.keys():
        return None
    key = next(iter(b._terms))
    k = min(a._terms[key]) - min(b._terms[key])
    return k if scalar_q_pow(b, k) == a else None
