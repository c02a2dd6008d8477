"""Exact scalar arithmetic: rationals and sparse multivariate polynomials.

Rationals are arbitrary-precision ``fractions.Fraction`` values.  Polynomials
(`RingElem`) live over named generators interned as integer ids in a
`GeneratorRegistry`; a monomial is stored as a sorted tuple of generator ids
with repetition (so ``(3, 3, 7)`` means ``g3^2 * g7``), which keeps
multiplication a single C-level merge.  Derivations act on generators through
explicit rules and extend to polynomials by the Leibniz rule.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, Hashable, Iterable, Mapping, Tuple, Union

from .errors import MissingRule

Rational = Fraction
Coeff = Union[int, Fraction]
Monomial = Tuple[int, ...]


def _norm_coeff(c: Coeff) -> Coeff:
    """Collapse integral fractions to int so hot loops stay in int arithmetic."""
    if type(c) is Fraction and c.denominator == 1:
        return c.numerator
    return c


class GeneratorRegistry:
    """Append-only intern table mapping hashable names to generator ids."""

    def __init__(self) -> None:
        self._ids: Dict[Hashable, int] = {}
        self._names: list[Hashable] = []

    def intern(self, name: Hashable) -> int:
        gid = self._ids.get(name)
        if gid is None:
            gid = len(self._names)
            self._names.append(name)
            self._ids[name] = gid
        return gid

    def name(self, gid: int) -> Hashable:
        return self._names[gid]

    def __len__(self) -> int:
        return len(self._names)

    def __contains__(self, name: Hashable) -> bool:
        return name in self._ids


#: Process-wide default registry.  Append-only, safe for concurrent reads.
REGISTRY = GeneratorRegistry()


class RingElem:
    """Sparse multivariate polynomial with exact rational coefficients.

    Immutable by convention: no public mutators, and all operations return
    fresh instances.  Zero coefficients are never stored; the empty monomial
    is the constant term.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Monomial, Coeff] | None = None):
        if terms is None:
            self.terms: Dict[Monomial, Coeff] = {}
        else:
            self.terms = {m: _norm_coeff(c) for m, c in terms.items() if c != 0}

    # -- constructors -------------------------------------------------

    @staticmethod
    def zero() -> "RingElem":
        return _ZERO

    @staticmethod
    def one() -> "RingElem":
        return _ONE

    @staticmethod
    def const(c: Coeff) -> "RingElem":
        c = _norm_coeff(Fraction(c) if not isinstance(c, (int, Fraction)) else c)
        e = RingElem.__new__(RingElem)
        e.terms = {(): c} if c != 0 else {}
        return e

    @staticmethod
    def gen(gid: int) -> "RingElem":
        e = RingElem.__new__(RingElem)
        e.terms = {(gid,): 1}
        return e

    @staticmethod
    def _raw(terms: Dict[Monomial, Coeff]) -> "RingElem":
        """Wrap a dict already free of zero coefficients. Internal."""
        e = RingElem.__new__(RingElem)
        e.terms = terms
        return e

    # -- predicates ---------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def constant_value(self) -> Fraction:
        """Value as a Rational; raises if the element is not constant."""
        if not self.terms:
            return Fraction(0)
        if len(self.terms) == 1 and () in self.terms:
            return Fraction(self.terms[()])
        raise ValueError("RingElem is not constant")

    # -- arithmetic ---------------------------------------------------

    def __add__(self, other: "RingElem | Coeff") -> "RingElem":
        if not isinstance(other, RingElem):
            other = RingElem.const(other)
        if not self.terms:
            return other
        if not other.terms:
            return self
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = out.get(m)
            if s is None:
                out[m] = c
            else:
                s = s + c
                if s:
                    out[m] = _norm_coeff(s)
                else:
                    del out[m]
        return RingElem._raw(out)

    __radd__ = __add__

    def __neg__(self) -> "RingElem":
        return RingElem._raw({m: -c for m, c in self.terms.items()})

    def __sub__(self, other: "RingElem | Coeff") -> "RingElem":
        if not isinstance(other, RingElem):
            other = RingElem.const(other)
        return self + (-other)

    def __rsub__(self, other: Coeff) -> "RingElem":
        return RingElem.const(other) + (-self)

    def __mul__(self, other: "RingElem | Coeff") -> "RingElem":
        if not isinstance(other, RingElem):
            return self.scale(other)
        a, b = self.terms, other.terms
        if not a or not b:
            return _ZERO
        if len(a) > len(b):
            a, b = b, a
        out: Dict[Monomial, Coeff] = {}
        get = out.get
        for m1, c1 in a.items():
            for m2, c2 in b.items():
                key = m1 + m2 if (not m1 or not m2 or m1[-1] <= m2[0]) else tuple(sorted(m1 + m2))
                c = c1 * c2
                s = get(key)
                if s is None:
                    out[key] = c
                else:
                    s = s + c
                    if s:
                        out[key] = s
                    else:
                        del out[key]
        return RingElem._raw({m: _norm_coeff(c) for m, c in out.items()})

    __rmul__ = __mul__

    def scale(self, c: Coeff) -> "RingElem":
        c = _norm_coeff(c)
        if c == 0 or not self.terms:
            return _ZERO
        if c == 1:
            return self
        return RingElem._raw({m: _norm_coeff(v * c) for m, v in self.terms.items()})

    def __pow__(self, k: int) -> "RingElem":
        if k < 0:
            raise ValueError("negative power of a ring element")
        result = _ONE
        base = self
        while k:
            if k & 1:
                result = result * base
            base_needed = k >> 1
            if base_needed:
                base = base * base
            k = base_needed
        return result

    # -- comparison / hashing ------------------------------------------

    def __eq__(self, other: object) -> bool:
        if isinstance(other, RingElem):
            return self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self.terms == RingElem.const(other).terms
        return NotImplemented

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    # -- display -------------------------------------------------------

    def sorted_terms(self) -> list[tuple[Monomial, Coeff]]:
        """Terms in the canonical (graded-lexicographic) order."""
        return sorted(self.terms.items(), key=lambda t: (len(t[0]), t[0]))

    def to_text(self, max_terms: int | None = None) -> str:
        """Canonical text form ``c1*g3^2*g7 + c2*...`` with rationals ``p/q``."""
        if not self.terms:
            return "0"
        parts = []
        items = self.sorted_terms()
        truncated = False
        if max_terms is not None and len(items) > max_terms:
            items = items[:max_terms]
            truncated = True
        for mono, coeff in items:
            factors = []
            i = 0
            while i < len(mono):
                g = mono[i]
                e = 1
                while i + e < len(mono) and mono[i + e] == g:
                    e += 1
                factors.append(f"g{g}" if e == 1 else f"g{g}^{e}")
                i += e
            c = Fraction(coeff)
            cs = f"{c.numerator}/{c.denominator}" if c.denominator != 1 else f"{c.numerator}"
            parts.append(cs if not factors else cs + "*" + "*".join(factors))
        text = " + ".join(parts).replace("+ -", "- ")
        if truncated:
            text += " + ..."
        return text

    def __repr__(self) -> str:
        return f"RingElem({self.to_text(max_terms=8)})"


_ZERO = RingElem._raw({})
_ONE = RingElem._raw({(): 1})


DerivationId = Hashable


class GeneratorRule:
    """Images of generators under a family of derivations.

    ``rules[d][gid]`` is the image of generator ``gid`` under derivation
    ``d``.  A generator without an entry for ``d`` has no defined image and
    triggers `MissingRule` when encountered.
    """

    def __init__(self) -> None:
        self._rules: Dict[DerivationId, Dict[int, RingElem]] = {}

    def set(self, gid: int, d: DerivationId, image: RingElem) -> None:
        self._rules.setdefault(d, {})[gid] = image

    def get(self, gid: int, d: DerivationId) -> RingElem:
        table = self._rules.get(d)
        if table is None or gid not in table:
            raise MissingRule(f"generator {gid} has no rule for derivation {d!r}")
        return table[gid]

    def derivations(self) -> Iterable[DerivationId]:
        return self._rules.keys()


def extend_derivation(rule: GeneratorRule, d: DerivationId, e: RingElem) -> RingElem:
    """Apply the unique Leibniz extension of ``rule`` under ``d`` to ``e``."""
    acc: Dict[Monomial, Coeff] = {}
    for mono, coeff in e.terms.items():
        i = 0
        n = len(mono)
        while i < n:
            g = mono[i]
            j = i + 1
            while j < n and mono[j] == g:
                j += 1
            mult = j - i
            rest = mono[:i] + mono[i + 1:]
            image = rule.get(g, d)
            c = coeff * mult
            for m2, c2 in image.terms.items():
                key = tuple(sorted(rest + m2)) if m2 else rest
                s = acc.get(key)
                if s is None:
                    acc[key] = c * c2
                else:
                    s = s + c * c2
                    if s:
                        acc[key] = s
                    else:
                        del acc[key]
            i = j
    return RingElem._raw({m: _norm_coeff(c) for m, c in acc.items()})
