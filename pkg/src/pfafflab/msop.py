"""Linear forms of multiple skew-orthogonal polynomials and their identities.

A `LinearForm` stores coefficient lists against the two weight components:
the form is ``sum_i c1[i] x^i w1(x) + sum_j c2[j] x^j w2(x)``.  All
constructions here are unnormalized: they carry the Pfaffian normalization
factor through, so every verified statement lives in exact ring arithmetic
(the square-root normalizations of the orthonormal statements never appear;
their squares do, as tau-products).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Tuple

from .errors import DegenerateInstance, EvenParity, InvalidSpec
from .exactalg import RingElem, extend_derivation
from .moments import Deriv, MomentAlgebra, MomentKey, PfaffianSum, s, t
from .pfaffian import nullspace
from .report import VerificationReport


@dataclass(frozen=True)
class LinearForm:
    """Coefficients of a two-component weighted polynomial combination."""

    c1: Tuple[RingElem, ...]
    c2: Tuple[RingElem, ...] = ()

    @property
    def is_zero(self) -> bool:
        return all(c.is_zero for c in self.c1) and all(c.is_zero for c in self.c2)

    def coeff(self, comp: int, deg: int) -> RingElem:
        cs = self.c1 if comp == 1 else self.c2
        return cs[deg] if 0 <= deg < len(cs) else RingElem.zero()

    def scale(self, factor: RingElem) -> "LinearForm":
        return LinearForm(tuple(factor * c for c in self.c1),
                          tuple(factor * c for c in self.c2))

    def __add__(self, other: "LinearForm") -> "LinearForm":
        n1 = max(len(self.c1), len(other.c1))
        n2 = max(len(self.c2), len(other.c2))
        return LinearForm(
            tuple(self.coeff(1, i) + other.coeff(1, i) for i in range(n1)),
            tuple(self.coeff(2, j) + other.coeff(2, j) for j in range(n2)))

    def __sub__(self, other: "LinearForm") -> "LinearForm":
        n1 = max(len(self.c1), len(other.c1))
        n2 = max(len(self.c2), len(other.c2))
        return LinearForm(
            tuple(self.coeff(1, i) - other.coeff(1, i) for i in range(n1)),
            tuple(self.coeff(2, j) - other.coeff(2, j) for j in range(n2)))

    def __neg__(self) -> "LinearForm":
        return LinearForm(tuple(-c for c in self.c1), tuple(-c for c in self.c2))

    def shift(self, comp: int, n: int) -> "LinearForm":
        """Multiply the given component by x^n."""
        if comp == 1:
            return LinearForm((RingElem.zero(),) * n + self.c1, self.c2)
        return LinearForm(self.c1, (RingElem.zero(),) * n + self.c2)

    def residual_sum(self) -> RingElem:
        total = RingElem.zero()
        for c in self.c1 + self.c2:
            total = total + c
        return total

    def first_nonzero(self) -> Optional[RingElem]:
        for c in self.c1 + self.c2:
            if not c.is_zero:
                return c
        return None


ZERO_FORM = LinearForm(())


def _odd_index(v: Tuple[int, int]) -> None:
    if (v[0] + v[1]) % 2 == 0:
        raise EvenParity(f"linear form index {v} must have odd total degree")
    if v[0] < 0 or v[1] < 0:
        raise ValueError(f"negative linear form index {v}")


def _expand_symbols(alg: MomentAlgebra, syms: List[Tuple[int, int]],
                    len1: int, len2: int) -> LinearForm:
    """Expand Pf(syms..., x) along the trailing x slot into a LinearForm.

    The coefficient of the symbol at 0-based position p is (-1)^p times the
    Pfaffian of the remaining symbols.
    """
    c1 = [RingElem.zero()] * len1
    c2 = [RingElem.zero()] * len2
    for pos, (comp, deg) in enumerate(syms):
        rest = tuple(sorted(syms[:pos] + syms[pos + 1:]))
        minor = alg.pf_symbols(rest)
        if pos % 2:
            minor = -minor
        if comp == 1:
            c1[deg] = minor
        else:
            c2[deg] = minor
    return LinearForm(tuple(c1), tuple(c2))


def linear_form_R(alg: MomentAlgebra, v: Tuple[int, int]) -> LinearForm:
    """Unnormalized skew-orthogonal linear form Pf(0..v1-1 | 0..v2-1 | x)."""
    _odd_index(v)
    v1, v2 = v
    syms = [(1, d) for d in range(v1)] + [(2, d) for d in range(v2)]
    return _expand_symbols(alg, syms, v1, v2)


def linear_form_Rtilde(alg: MomentAlgebra, v: Tuple[int, int], b: int) -> LinearForm:
    """Partner form with index v_b - 1 of component b replaced by v_b.

    Its x^(v_b - 1) coefficient on component b is identically zero because
    that index is absent from the Pfaffian.
    """
    _odd_index(v)
    v1, v2 = v
    if b not in (1, 2):
        raise ValueError("component b must be 1 or 2")
    if v[b - 1] < 1:
        raise ValueError(f"Rtilde needs v_{b} >= 1, got {v}")
    if b == 1:
        syms = [(1, d) for d in range(v1 - 1)] + [(1, v1)] + [(2, d) for d in range(v2)]
        return _expand_symbols(alg, syms, v1 + 1, v2)
    syms = [(1, d) for d in range(v1)] + [(2, d) for d in range(v2 - 1)] + [(2, v2)]
    return _expand_symbols(alg, syms, v1, v2 + 1)


def skew_pair(alg: MomentAlgebra, f: LinearForm, g: LinearForm) -> RingElem:
    """Skew inner product: bilinear sum of coefficients against the moments."""
    total = RingElem.zero()
    for k, fk in ((1, f.c1), (2, f.c2)):
        for i, fc in enumerate(fk):
            if fc.is_zero:
                continue
            for l, gl in ((1, g.c1), (2, g.c2)):
                for j, gc in enumerate(gl):
                    if gc.is_zero:
                        continue
                    m = alg.value(MomentKey(k, l, i, j))
                    if m.is_zero:
                        continue
                    total = total + fc * m * gc
    return total


def monomial_form(comp: int, deg: int) -> LinearForm:
    """The elementary form x^deg w_comp(x)."""
    coeffs = (RingElem.zero(),) * deg + (RingElem.one(),)
    return LinearForm(coeffs, ()) if comp == 1 else LinearForm((), coeffs)


def derive_form(alg: MomentAlgebra, f: LinearForm, d: Deriv) -> LinearForm:
    """Time derivative of a form: coefficient derivation plus weight evolution.

    The flow t_n multiplies component 1 by x^n (and s_n component 2), so the
    derived form gains shifted copies of the matching component on top of the
    coefficientwise Leibniz derivative.  Generic instances only: concrete
    coefficient values do not determine their own time dependence.
    """
    if alg.mode != "generic":
        raise InvalidSpec("derive_form needs a generic instance")
    rule = alg.rules_for([d])
    c1 = [extend_derivation(rule, d, c) for c in f.c1]
    c2 = [extend_derivation(rule, d, c) for c in f.c2]
    flow, n = d
    if flow == "t":
        c1 += [RingElem.zero()] * n
        for i, c in enumerate(f.c1):
            c1[i + n] = c1[i + n] + c
    else:
        c2 += [RingElem.zero()] * n
        for j, c in enumerate(f.c2):
            c2[j + n] = c2[j + n] + c
    return LinearForm(tuple(c1), tuple(c2))


def derive_form_structural(alg: MomentAlgebra, v: Tuple[int, int], d: Deriv) -> LinearForm:
    """Derivative of the Pfaffian form at index v through index shifts.

    Mode-agnostic: each coefficient is a signed Pfaffian minor whose
    derivative is the usual shift sum; the weight evolution adds the shifted
    copy of the matching component.
    """
    _odd_index(v)
    v1, v2 = v
    syms = [(1, deg) for deg in range(v1)] + [(2, deg) for deg in range(v2)]
    flow, n = d
    comp = 1 if flow == "t" else 2
    len1, len2 = v1 + (n if comp == 1 else 0), v2 + (n if comp == 2 else 0)
    c1 = [RingElem.zero()] * len1
    c2 = [RingElem.zero()] * len2
    for pos, (cc, deg) in enumerate(syms):
        rest = tuple(sorted(syms[:pos] + syms[pos + 1:]))
        ps: PfaffianSum = {rest: -1 if pos % 2 else 1}
        derived = alg.ps_eval(alg.ps_derive(ps, d))
        base = alg.pf_symbols(rest)
        if pos % 2:
            base = -base
        target = c1 if cc == 1 else c2
        target[deg] = target[deg] + derived
        if cc == comp:
            target[deg + n] = target[deg + n] + base
    return LinearForm(tuple(c1), tuple(c2))


def tau_or_zero(alg: MomentAlgebra, v: Tuple[int, int]) -> RingElem:
    if v[0] < 0 or v[1] < 0:
        return RingElem.zero()
    return alg.tau(v)


def dtau_or_zero(alg: MomentAlgebra, v: Tuple[int, int], d: Deriv) -> RingElem:
    if v[0] < 0 or v[1] < 0:
        return RingElem.zero()
    return alg.tau_derivative(v, [d])


def form_or_zero(alg: MomentAlgebra, v: Tuple[int, int]) -> LinearForm:
    if v[0] < 0 or v[1] < 0:
        return ZERO_FORM
    return linear_form_R(alg, v)


def verify_skew_orthogonality(alg: MomentAlgebra, v: Tuple[int, int],
                              u: Tuple[int, int]) -> VerificationReport:
    """Orthogonality of the unnormalized forms at indices v against u.

    Checks, whenever the index pattern applies:
      <R_v, R_u> = 0 always;
      <R_v, Rtilde1_u> = 0 for u1 < v1, u2 <= v2, and tau(v1-1,v2) tau(v1+1,v2)
        at u = v;
      <R_v, Rtilde2_u> = 0 for u1 <= v1, u2 < v2, and tau(v1,v2-1) tau(v1,v2+1)
        at u = v.
    """
    _odd_index(v)
    _odd_index(u)
    rv = linear_form_R(alg, v)
    checks: List[Tuple[str, RingElem]] = []
    comparable = (u[0] <= v[0] and u[1] <= v[1]) or (v[0] <= u[0] and v[1] <= u[1])
    if comparable:
        # <R_v, R_u> vanishes exactly when one index dominates the other;
        # incomparable pairs carry no orthogonality claim.
        checks.append(("rr", skew_pair(alg, rv, linear_form_R(alg, u))))
    if u[0] >= 1 and (u[0] < v[0] and u[1] <= v[1]):
        checks.append(("rt1-zero", skew_pair(alg, rv, linear_form_Rtilde(alg, u, 1))))
    if u[1] >= 1 and (u[0] <= v[0] and u[1] < v[1]):
        checks.append(("rt2-zero", skew_pair(alg, rv, linear_form_Rtilde(alg, u, 2))))
    if u == v:
        if v[0] >= 1:
            got = skew_pair(alg, rv, linear_form_Rtilde(alg, v, 1))
            want = alg.tau((v[0] - 1, v[1])) * alg.tau((v[0] + 1, v[1]))
            checks.append(("rt1-norm", got - want))
        if v[1] >= 1:
            got = skew_pair(alg, rv, linear_form_Rtilde(alg, v, 2))
            want = alg.tau((v[0], v[1] - 1)) * alg.tau((v[0], v[1] + 1))
            checks.append(("rt2-norm", got - want))
    residual = next((r for _, r in checks if not r.is_zero), RingElem.zero())
    return VerificationReport.from_residual(
        "orthogonality",
        {"v": list(v), "u": list(u), "checks": [name for name, _ in checks]},
        residual, instance_hash=alg.spec.instance_hash())


RECURRENCES = ("sub1", "sub2", "sub3", "sub4")


def verify_recurrence(alg: MomentAlgebra, v: Tuple[int, int], eq: str) -> VerificationReport:
    """Recurrence relations tying neighboring unnormalized forms together.

    Multi-indices with a negative component denote zero scalars and zero
    forms, which settles the boundary cases with zero-index components.
    """
    _odd_index(v)
    v1, v2 = v
    params = {"v": [v1, v2], "eq": eq}

    def skipped(reason: str) -> VerificationReport:
        p = dict(params)
        p["reason"] = reason
        return VerificationReport("recurrences", p, "skipped",
                                  instance_hash=alg.spec.instance_hash())

    if eq == "sub1":
        if v2 < 1:
            return skipped("needs v2 >= 1")
        lhs = form_or_zero(alg, (v1 + 1, v2 + 1)).scale(tau_or_zero(alg, (v1, v2 - 1)))
        rhs = (linear_form_Rtilde(alg, v, 2).scale(alg.tau((v1 + 1, v2)))
               - form_or_zero(alg, v).scale(dtau_or_zero(alg, (v1 + 1, v2), s(1)))
               + form_or_zero(alg, (v1 + 1, v2 - 1)).scale(tau_or_zero(alg, (v1, v2 + 1))))
    elif eq == "sub2":
        if v1 < 1:
            return skipped("needs v1 >= 1")
        lhs = form_or_zero(alg, (v1 + 1, v2 + 1)).scale(tau_or_zero(alg, (v1 - 1, v2)))
        rhs = (form_or_zero(alg, (v1 - 1, v2 + 1)).scale(alg.tau((v1 + 1, v2)))
               - linear_form_Rtilde(alg, v, 1).scale(alg.tau((v1, v2 + 1)))
               + form_or_zero(alg, v).scale(dtau_or_zero(alg, (v1, v2 + 1), t(1))))
    elif eq == "sub3":
        if v1 < 1:
            return skipped("needs v1 >= 1")
        lhs = form_or_zero(alg, v).scale(dtau_or_zero(alg, (v1, v2 - 1), t(1)))
        rhs = (linear_form_Rtilde(alg, v, 1).scale(tau_or_zero(alg, (v1, v2 - 1)))
               + form_or_zero(alg, (v1 + 1, v2 - 1)).scale(tau_or_zero(alg, (v1 - 1, v2)))
               - form_or_zero(alg, (v1 - 1, v2 - 1)).scale(alg.tau((v1 + 1, v2))))
    elif eq == "sub4":
        if v2 < 1:
            return skipped("needs v2 >= 1")
        lhs = form_or_zero(alg, v).scale(dtau_or_zero(alg, (v1 - 1, v2), s(1)))
        rhs = (-form_or_zero(alg, (v1 - 1, v2 + 1)).scale(tau_or_zero(alg, (v1, v2 - 1)))
               + linear_form_Rtilde(alg, v, 2).scale(tau_or_zero(alg, (v1 - 1, v2)))
               + form_or_zero(alg, (v1 - 1, v2 - 1)).scale(alg.tau((v1, v2 + 1))))
    else:
        raise ValueError(f"unknown recurrence {eq!r}")

    diff = lhs - rhs
    residual = diff.first_nonzero() or RingElem.zero()
    return VerificationReport.from_residual("recurrences", params, residual,
                                            instance_hash=alg.spec.instance_hash())


def verify_derivative_relation(alg: MomentAlgebra, v: Tuple[int, int],
                               b: int) -> VerificationReport:
    """d/dt1 of the R form equals Rtilde(b=1); d/ds1 equals Rtilde(b=2).

    Generic instances differentiate coefficientwise through the Leibniz rule;
    concrete ones go through the structural index-shift route.
    """
    _odd_index(v)
    if v[b - 1] < 1:
        return VerificationReport("derivative-relations",
                                  {"v": list(v), "b": b, "reason": f"needs v{b} >= 1"},
                                  "skipped", instance_hash=alg.spec.instance_hash())
    d = t(1) if b == 1 else s(1)
    if alg.mode == "generic":
        derived = derive_form(alg, linear_form_R(alg, v), d)
    else:
        derived = derive_form_structural(alg, v, d)
    diff = derived - linear_form_Rtilde(alg, v, b)
    residual = diff.first_nonzero() or RingElem.zero()
    return VerificationReport.from_residual(
        "derivative-relations", {"v": list(v), "b": b}, residual,
        instance_hash=alg.spec.instance_hash())


# -- independent linear-solve oracle (concrete instances) ------------------


def _concrete_moment(alg: MomentAlgebra, k: int, l: int, a: int, b: int) -> Fraction:
    return alg.value(MomentKey(k, l, a, b)).constant_value()


def msop_via_linsolve(alg: MomentAlgebra, v: Tuple[int, int],
                      b: Optional[int] = None) -> LinearForm:
    """Solve the defining skew-orthogonality conditions directly.

    With ``b=None`` this returns the kernel form (proportional to the
    Pfaffian R construction); with ``b`` given it returns the partner form,
    pinned by zeroing the x^(v_b - 1) coefficient of component b.  Raises
    `DegenerateInstance` when the kernel is not one-dimensional.
    """
    _odd_index(v)
    if alg.mode != "concrete":
        raise InvalidSpec("linear-solve oracle needs a concrete instance")
    v1, v2 = v
    if b is None:
        slots = [(1, d) for d in range(v1)] + [(2, d) for d in range(v2)]
        conds = [(1, k) for k in range(v1)] + [(2, k) for k in range(v2)]
    else:
        if v[b - 1] < 1:
            raise ValueError(f"partner form needs v_{b} >= 1")
        if b == 1:
            slots = [(1, d) for d in range(v1 + 1) if d != v1 - 1] + [(2, d) for d in range(v2)]
            conds = ([(1, k) for k in range(v1 - 1)] + [(1, v1)]
                     + [(2, k) for k in range(v2)])
        else:
            slots = [(1, d) for d in range(v1)] + [(2, d) for d in range(v2 + 1) if d != v2 - 1]
            conds = ([(1, k) for k in range(v1)]
                     + [(2, k) for k in range(v2 - 1)] + [(2, v2)])
    rows = [[_concrete_moment(alg, sc, cc, sd, cd) for (sc, sd) in slots]
            for (cc, cd) in conds]
    basis = nullspace(rows, len(slots))
    if len(basis) != 1:
        raise DegenerateInstance(
            f"kernel dimension {len(basis)} at v={v}, b={b}")
    vec = basis[0]
    len1 = v1 if b != 1 else v1 + 1
    len2 = v2 if b != 2 else v2 + 1
    c1 = [RingElem.zero()] * len1
    c2 = [RingElem.zero()] * len2
    for (comp, deg), val in zip(slots, vec):
        (c1 if comp == 1 else c2)[deg] = RingElem.const(val)
    return LinearForm(tuple(c1), tuple(c2))


def forms_proportional(f: LinearForm, g: LinearForm) -> bool:
    """True when f and g are proportional with a nonzero ratio."""
    if f.is_zero or g.is_zero:
        return False
    coords = [(1, i) for i in range(max(len(f.c1), len(g.c1)))]
    coords += [(2, j) for j in range(max(len(f.c2), len(g.c2)))]
    pairs = [(f.coeff(c, d), g.coeff(c, d)) for c, d in coords]
    for i in range(len(pairs)):
        for j in range(i + 1, len(pairs)):
            if pairs[i][0] * pairs[j][1] != pairs[j][0] * pairs[i][1]:
                return False
    return True


# -- one-component reduction ------------------------------------------------


def sop_form_even(alg: MomentAlgebra, n: int) -> LinearForm:
    """Unnormalized even skew-orthogonal polynomial Pf(0..2n, x)."""
    return linear_form_R(alg, (2 * n + 1, 0))


def sop_form_odd(alg: MomentAlgebra, n: int) -> LinearForm:
    """Unnormalized odd skew-orthogonal polynomial Pf(0..2n-1, 2n+1, x)."""
    return linear_form_Rtilde(alg, (2 * n + 1, 0), 1)


def sop_reduce(alg: MomentAlgebra, n: int) -> Tuple[LinearForm, LinearForm, VerificationReport]:
    """One-component reduction: polynomial pair plus its defining identities.

    Verifies the skew orthogonality against all lower pairs, the spectral
    relation (multiplication by x plus the coefficient t1-derivative maps the
    even member to the odd one), and the second-flow identity
    (d_t2 + d_t1^2) tau_2n = 2 Pf(0..2n-2, 2n+1).
    """
    if alg.bounds[1] >= 0:
        raise InvalidSpec("reduction needs a one-component instance")
    p_even = sop_form_even(alg, n)
    p_odd = sop_form_odd(alg, n)
    checks: List[Tuple[str, RingElem]] = []

    for m in range(n + 1):
        q_even = sop_form_even(alg, m)
        q_odd = sop_form_odd(alg, m)
        checks.append((f"ee-{m}", skew_pair(alg, p_even, q_even)))
        checks.append((f"oo-{m}", skew_pair(alg, p_odd, q_odd)))
        pairing = skew_pair(alg, p_even, q_odd)
        if m == n:
            pairing = pairing - alg.tau((2 * n, 0)) * alg.tau((2 * n + 2, 0))
        checks.append((f"eo-{m}", pairing))
        if m < n:
            checks.append((f"oe-{m}", skew_pair(alg, p_odd, q_even)))

    # Spectral relation: x * p_even + (coefficientwise d_t1) p_even = p_odd.
    syms = [(1, d) for d in range(2 * n + 1)]
    derived = [RingElem.zero()] * (2 * n + 2)
    for pos in range(2 * n + 1):
        rest = tuple(sorted(syms[:pos] + syms[pos + 1:]))
        ps: PfaffianSum = {rest: -1 if pos % 2 else 1}
        derived[pos] = alg.ps_eval(alg.ps_derive(ps, t(1)))
    coeff_deriv = LinearForm(tuple(derived))
    spectral = p_even.shift(1, 1) + coeff_deriv - p_odd
    checks.append(("spectral", spectral.first_nonzero() or RingElem.zero()))

    if n >= 1:
        lhs = alg.tau_derivative((2 * n, 0), [t(2)]) + alg.tau_derivative((2 * n, 0), [t(1), t(1)])
        aux_syms = tuple((1, d) for d in range(2 * n - 1)) + ((1, 2 * n + 1),)
        checks.append(("second-flow", lhs - alg.pf_symbols(aux_syms).scale(2)))

    residual = next((r for _, r in checks if not r.is_zero), RingElem.zero())
    report = VerificationReport.from_residual(
        "sop-dkp", {"n": n, "checks": [name for name, _ in checks]},
        residual, instance_hash=alg.spec.instance_hash())
    return p_even, p_odd, report
