"""The 2-component skew moment lattice, tau-functions, and time evolutions.

A moment ``m[(k,l),(a,b)]`` pairs degree ``a`` of weight component ``k``
against degree ``b`` of component ``l`` through a skew kernel, so the lattice
satisfies ``m[(k,l),(a,b)] = -m[(l,k),(b,a)]``.  Concrete instances realize
the moments as exact rationals from a finite node set; generic instances
treat each canonical moment as an independent polynomial generator, so a zero
residual computed over a generic instance is a polynomial identity.

Time evolutions act by index shifts: the ``t``-flows raise degrees on
component 1, the ``s``-flows on component 2, and iterated derivatives of
tau-functions are carried as signed sums of index-set Pfaffians.
"""

from __future__ import annotations

import hashlib
import json
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, NamedTuple, Optional, Sequence, Tuple

from .errors import BoundExceeded, InvalidSpec, OddParity
from .exactalg import Coeff, GeneratorRule, REGISTRY, RingElem, extend_derivation
from .pfaffian import _pf_expand

Deriv = Tuple[str, int]          # ("t", n) or ("s", n)
Symbol = Tuple[int, int]         # (component, degree)
SymTuple = Tuple[Symbol, ...]
PfaffianSum = Dict[SymTuple, Coeff]


class MomentKey(NamedTuple):
    k: int
    l: int
    a: int
    b: int

    def canonical(self) -> Tuple["MomentKey", int]:
        """Canonical storage key and sign; sign 0 marks the skew diagonal."""
        left, right = (self.k, self.a), (self.l, self.b)
        if left < right:
            return self, 1
        if left == right:
            return self, 0
        return MomentKey(self.l, self.k, self.b, self.a), -1


def t(n: int) -> Deriv:
    return ("t", n)


def s(n: int) -> Deriv:
    return ("s", n)


def _frac_to_str(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}" if x.denominator != 1 else str(x.numerator)


def _str_to_frac(v) -> Fraction:
    return Fraction(v)


@dataclass(frozen=True)
class InstanceSpec:
    """Description of a moment realization.

    ``bounds = (A1, A2)`` are the maximum materialized degrees per weight
    component; ``A2 = -1`` requests a one-component lattice.  Concrete mode
    needs nodes, per-node weight values, and a skew kernel over the nodes.
    """

    mode: str
    bounds: Tuple[int, int]
    nodes: Optional[Tuple[Fraction, ...]] = None
    w1: Optional[Tuple[Fraction, ...]] = None
    w2: Optional[Tuple[Fraction, ...]] = None
    kernel_type: Optional[str] = None
    kernel_matrix: Optional[Tuple[Tuple[Fraction, ...], ...]] = None
    seed: Optional[int] = None

    def to_json_dict(self) -> dict:
        d: dict = {"mode": self.mode, "bounds": list(self.bounds)}
        if self.mode == "concrete":
            d["nodes"] = [_frac_to_str(x) for x in self.nodes]
            d["w1"] = [_frac_to_str(x) for x in self.w1]
            d["w2"] = [_frac_to_str(x) for x in self.w2]
            kernel: dict = {"type": self.kernel_type}
            if self.kernel_type == "matrix":
                kernel["matrix"] = [[_frac_to_str(x) for x in row] for row in self.kernel_matrix]
            if self.seed is not None:
                kernel["seed"] = self.seed
            d["kernel"] = kernel
        return d

    @staticmethod
    def from_json_dict(d: dict) -> "InstanceSpec":
        try:
            mode = d["mode"]
            bounds = tuple(int(x) for x in d["bounds"])
            if mode == "generic":
                return InstanceSpec(mode="generic", bounds=bounds)
            if mode != "concrete":
                raise InvalidSpec(f"unknown mode {mode!r}")
            nodes = tuple(_str_to_frac(x) for x in d["nodes"])
            w1 = tuple(_str_to_frac(x) for x in d["w1"])
            w2 = tuple(_str_to_frac(x) for x in d["w2"])
            kernel = d["kernel"]
            ktype = kernel["type"]
            matrix = None
            if ktype == "matrix":
                matrix = tuple(tuple(_str_to_frac(x) for x in row) for row in kernel["matrix"])
            return InstanceSpec(mode="concrete", bounds=bounds, nodes=nodes, w1=w1, w2=w2,
                                kernel_type=ktype, kernel_matrix=matrix,
                                seed=kernel.get("seed"))
        except (KeyError, ValueError, TypeError, ZeroDivisionError) as exc:
            raise InvalidSpec(f"malformed instance spec: {exc}") from exc

    def canonical_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True, separators=(",", ":"))

    def instance_hash(self) -> str:
        return hashlib.sha256(self.canonical_json().encode()).hexdigest()[:16]


def _build_kernel(spec: InstanceSpec) -> List[List[Fraction]]:
    n = len(spec.nodes)
    if spec.kernel_type == "sign":
        return [[Fraction(0 if i == j else (1 if j > i else -1)) for j in range(n)]
                for i in range(n)]
    if spec.kernel_type == "matrix":
        m = [[Fraction(x) for x in row] for row in spec.kernel_matrix]
        if len(m) != n or any(len(row) != n for row in m):
            raise InvalidSpec("kernel matrix shape does not match node count")
        for i in range(n):
            for j in range(n):
                if m[i][j] != -m[j][i]:
                    raise InvalidSpec("kernel matrix is not skew-symmetric")
        return m
    if spec.kernel_type == "random":
        rng = random.Random(spec.seed if spec.seed is not None else 0)
        m = [[Fraction(0)] * n for _ in range(n)]
        choices = [x for x in range(-3, 4) if x != 0]
        for i in range(n):
            for j in range(i + 1, n):
                v = Fraction(rng.choice(choices))
                m[i][j] = v
                m[j][i] = -v
        return m
    raise InvalidSpec(f"unknown kernel type {spec.kernel_type!r}")


class MomentAlgebra:
    """Immutable realization of the skew bi-moment lattice within fixed bounds.

    All caches are append-only maps keyed by canonical tuples, so instances
    are safe to share across threads.
    """

    def __init__(self, spec: InstanceSpec):
        if spec.mode not in ("generic", "concrete"):
            raise InvalidSpec(f"unknown mode {spec.mode!r}")
        a1, a2 = spec.bounds
        if a1 < 0:
            raise InvalidSpec("component-1 bound must be nonnegative")
        self.spec = spec
        self.mode = spec.mode
        self.bounds = (a1, a2)
        self.registry = REGISTRY
        self._values: Dict[MomentKey, RingElem] = {}
        self._pf_memo: Dict[SymTuple, object] = {(): RingElem.one()}
        self._pair_memo: Dict[Tuple[SymTuple, SymTuple], RingElem] = {}
        self._tau_deriv_memo: Dict[Tuple[SymTuple, Tuple[Deriv, ...]], PfaffianSum] = {}
        self._rules: Dict[Deriv, Dict[int, RingElem]] = {}

        if spec.mode == "concrete":
            if not spec.nodes or len(spec.nodes) < 2:
                raise InvalidSpec("concrete instance needs at least 2 nodes")
            if len(spec.w1) != len(spec.nodes) or len(spec.w2) != len(spec.nodes):
                raise InvalidSpec("weight vectors must match node count")
            kernel = _build_kernel(spec)
            self._materialize_concrete(kernel)
        else:
            self._materialize_generic()

    # -- construction ---------------------------------------------------

    def _component_pairs(self) -> Iterable[Tuple[int, int]]:
        a1, a2 = self.bounds
        yield (1, 1)
        if a2 >= 0:
            yield (1, 2)
            yield (2, 2)

    def _canonical_keys(self) -> Iterable[MomentKey]:
        a1, a2 = self.bounds
        bound = {1: a1, 2: a2}
        for (k, l) in self._component_pairs():
            for a in range(bound[k] + 1):
                bstart = a + 1 if k == l else 0
                for b in range(bstart, bound[l] + 1):
                    yield MomentKey(k, l, a, b)

    def _materialize_generic(self) -> None:
        for key in self._canonical_keys():
            gid = self.registry.intern(("m",) + tuple(key))
            self._values[key] = RingElem.gen(gid)

    def _materialize_concrete(self, kernel: List[List[Fraction]]) -> None:
        nodes = self.spec.nodes
        n = len(nodes)
        a1, a2 = self.bounds
        maxdeg = max(a1, a2)
        powers = [[nodes[i] ** d for d in range(maxdeg + 1)] for i in range(n)]
        weights = {1: self.spec.w1, 2: self.spec.w2}
        for key in self._canonical_keys():
            wk, wl = weights[key.k], weights[key.l]
            total = Fraction(0)
            for i in range(n):
                wi = wk[i] * powers[i][key.a]
                if wi == 0:
                    continue
                row = kernel[i]
                for j in range(n):
                    sij = row[j]
                    if sij:
                        total += wi * sij * wl[j] * powers[j][key.b]
            self._values[key] = RingElem.const(total)

    # -- moment access ----------------------------------------------------

    def bound(self, comp: int) -> int:
        return self.bounds[comp - 1]

    def value(self, key: MomentKey) -> RingElem:
        canon, sign = key.canonical()
        if sign == 0:
            return RingElem.zero()
        val = self._values.get(canon)
        if val is None:
            raise BoundExceeded(f"moment {tuple(key)} outside bounds {self.bounds}")
        return val if sign > 0 else -val

    def moment(self, k: int, l: int, a: int, b: int) -> RingElem:
        return self.value(MomentKey(k, l, a, b))

    def derive_moment(self, key: MomentKey, d: Deriv) -> RingElem:
        """One-step time evolution of a single moment by index shifts."""
        canon, sign = key.canonical()
        if sign == 0:
            return RingElem.zero()
        flow, n = d
        k, l, a, b = canon
        if flow == "t":
            if (k, l) == (1, 1):
                out = self.value(MomentKey(1, 1, a + n, b)) + self.value(MomentKey(1, 1, a, b + n))
            elif (k, l) == (1, 2):
                out = self.value(MomentKey(1, 2, a + n, b))
            else:
                out = RingElem.zero()
        elif flow == "s":
            if (k, l) == (2, 2):
                out = self.value(MomentKey(2, 2, a + n, b)) + self.value(MomentKey(2, 2, a, b + n))
            elif (k, l) == (1, 2):
                out = self.value(MomentKey(1, 2, a, b + n))
            else:
                out = RingElem.zero()
        else:
            raise ValueError(f"unknown derivation {d!r}")
        return out if sign > 0 else -out

    def rules_for(self, derivs: Iterable[Deriv]) -> GeneratorRule:
        """Leibniz rule table for the generic generators under the given flows.

        Generators whose shifted moments would leave the instance bounds get
        no entry, so touching them raises MissingRule downstream.
        """
        if self.mode != "generic":
            raise InvalidSpec("derivation rule tables exist only in generic mode")
        return self._rule_table(frozenset(derivs))

    # -- Pfaffians over index symbols ----------------------------------

    def _sym_entry(self, s1: Symbol, s2: Symbol) -> RingElem:
        return self.value(MomentKey(s1[0], s2[0], s1[1], s2[1]))

    def pf_symbols(self, syms: SymTuple) -> RingElem:
        """Pfaffian of the moment matrix over a sorted tuple of symbols.

        Memoized per algebra; sub-Pfaffians are shared across every tau,
        linear-form, and derivative computation on this instance.
        """
        val = self._pf_memo.get(syms)
        if val is None:
            val = _pf_expand(syms, self._sym_entry, self._pf_memo)
            if not isinstance(val, RingElem):
                val = RingElem.const(val)
                self._pf_memo[syms] = val
        elif not isinstance(val, RingElem):
            val = RingElem.const(val)
            self._pf_memo[syms] = val
        return val

    def pf_pair(self, a: SymTuple, b: SymTuple) -> RingElem:
        """Cached product Pf(a) * Pf(b), symmetric in the two index sets."""
        key = (a, b) if a <= b else (b, a)
        val = self._pair_memo.get(key)
        if val is None:
            val = self.pf_symbols(key[0]) * self.pf_symbols(key[1])
            self._pair_memo[key] = val
        return val

    # -- tau functions ---------------------------------------------------

    def tau_symbols(self, v: Tuple[int, int]) -> SymTuple:
        v1, v2 = v
        if v1 < 0 or v2 < 0:
            raise ValueError(f"negative tau index {v}")
        if (v1 + v2) % 2:
            raise OddParity(f"tau index {v} has odd total degree")
        if v1 - 1 > self.bounds[0] or v2 - 1 > self.bounds[1]:
            raise BoundExceeded(f"tau index {v} outside bounds {self.bounds}")
        return tuple((1, d) for d in range(v1)) + tuple((2, d) for d in range(v2))

    def tau(self, v: Tuple[int, int]) -> RingElem:
        return self.pf_symbols(self.tau_symbols(v))

    # -- derivative engine -------------------------------------------------

    def ps_derive(self, ps: PfaffianSum, d: Deriv) -> PfaffianSum:
        """One derivation step on a signed sum of index-set Pfaffians.

        Each index of the matching component shifts up by the flow order;
        shifts that collide with an existing index vanish, and re-sorting
        contributes the crossing sign.
        """
        flow, n = d
        comp = 1 if flow == "t" else 2
        bound = self.bounds[comp - 1]
        out: PfaffianSum = {}
        for syms, coeff in ps.items():
            present = set(syms)
            for pos, (c, deg) in enumerate(syms):
                if c != comp:
                    continue
                new = (comp, deg + n)
                if new in present:
                    continue
                if deg + n > bound:
                    raise BoundExceeded(
                        f"derivative shift to degree {deg + n} exceeds bound {bound}")
                crossings = sum(1 for (c2, d2) in syms if c2 == comp and deg < d2 < deg + n)
                shifted = tuple(sorted(syms[:pos] + syms[pos + 1:] + (new,)))
                sgn_coeff = -coeff if crossings % 2 else coeff
                prev = out.get(shifted)
                if prev is None:
                    out[shifted] = sgn_coeff
                else:
                    tot = prev + sgn_coeff
                    if tot:
                        out[shifted] = tot
                    else:
                        del out[shifted]
        return out

    def tau_derivative_sum(self, v: Tuple[int, int], word: Sequence[Deriv]) -> PfaffianSum:
        """Iterated derivative of tau as a signed sum of index-set Pfaffians."""
        base = self.tau_symbols(v)
        word = tuple(sorted(word))
        return self._derive_cached(base, word)

    def _derive_cached(self, base: SymTuple, word: Tuple[Deriv, ...]) -> PfaffianSum:
        if not word:
            return {base: 1}
        key = (base, word)
        ps = self._tau_deriv_memo.get(key)
        if ps is None:
            prev = self._derive_cached(base, word[:-1])
            ps = self.ps_derive(prev, word[-1])
            self._tau_deriv_memo[key] = ps
        return ps

    def ps_eval(self, ps: PfaffianSum) -> RingElem:
        total = RingElem.zero()
        for syms, coeff in ps.items():
            total = total + self.pf_symbols(syms).scale(coeff)
        return total

    def tau_derivative(self, v: Tuple[int, int], word: Sequence[Deriv],
                       cross_check: bool = False) -> RingElem:
        """Iterated tau derivative via the index-shift sum formula.

        With ``cross_check`` (generic mode), the same derivative is recomputed
        by Leibniz expansion over the moment generators and the two results
        must agree exactly.
        """
        value = self.ps_eval(self.tau_derivative_sum(v, word))
        if cross_check:
            leibniz = self.tau_derivative_leibniz(v, word)
            if leibniz != value:
                raise AssertionError(
                    f"tau derivative mismatch at v={v}, word={tuple(word)}")
        return value

    def tau_derivative_leibniz(self, v: Tuple[int, int], word: Sequence[Deriv]) -> RingElem:
        """Iterated tau derivative via Leibniz extension over the generators."""
        rule = self._rule_table(frozenset(word))
        out = self.tau(v)
        for d in sorted(word):
            out = extend_derivation(rule, d, out)
        return out

    def _rule_table(self, derivs: frozenset) -> GeneratorRule:
        merged = GeneratorRule()
        for d in sorted(derivs):
            images = self._rules.get(d)
            if images is None:
                images = {}
                for key in self._canonical_keys():
                    gid = self.registry.intern(("m",) + tuple(key))
                    try:
                        images[gid] = self.derive_moment(key, d)
                    except BoundExceeded:
                        pass
                self._rules[d] = images
            for gid, img in images.items():
                merged.set(gid, d, img)
        return merged


def make_instance(spec: InstanceSpec) -> MomentAlgebra:
    """Materialize all moments of ``spec`` within its bounds."""
    return MomentAlgebra(spec)


def generic_instance(bounds: Tuple[int, int]) -> MomentAlgebra:
    return make_instance(InstanceSpec(mode="generic", bounds=bounds))


def concrete_random_instance(bounds: Tuple[int, int], seed: int,
                             num_nodes: int = 8) -> MomentAlgebra:
    """Concrete instance over small integer nodes with a seeded random kernel."""
    rng = random.Random(seed)
    nodes = tuple(Fraction(x) for x in rng.sample(range(-6, 7), num_nodes))
    w1 = tuple(Fraction(rng.randint(1, 5)) for _ in range(num_nodes))
    w2 = tuple(Fraction(rng.randint(1, 5)) for _ in range(num_nodes))
    spec = InstanceSpec(mode="concrete", bounds=bounds, nodes=nodes, w1=w1, w2=w2,
                        kernel_type="random", seed=rng.randint(0, 2 ** 31))
    return make_instance(spec)
