"""Generating polynomials, Hirota operators, lattice equations, Cauchy series."""

from __future__ import annotations

import itertools
from fractions import Fraction
from math import factorial

import pytest

from pfafflab.errors import UnknownEquation
from pfafflab.exactalg import REGISTRY, RingElem
from pfafflab.hierarchy import (PairAccumulator, _eq_lattice, _eq_pfafftoda1,
                                _eq_pfafftoda2, apply_schur_derivation, cauchy_series,
                                hirota_eval, hirota_op, schur_p, schur_slot,
                                verify_equation, verify_miwa_minor)
from pfafflab.moments import InstanceSpec, generic_instance, make_instance, s, t
from pfafflab.msop import linear_form_R


@pytest.fixture(scope="module")
def alg():
    return generic_instance((12, 12))


@pytest.fixture(scope="module")
def one_component():
    return make_instance(InstanceSpec(mode="generic", bounds=(12, -1)))


def odd_indices(max_total):
    return [(a, tot - a) for tot in range(1, max_total + 1, 2) for a in range(tot + 1)]


def even_indices(max_total):
    return [(a, tot - a) for tot in range(0, max_total + 1, 2) for a in range(tot + 1)]


def z(j):
    return RingElem.gen(schur_slot(j))


def test_schur_p_small_orders():
    assert schur_p(-1).is_zero
    assert schur_p(0) == RingElem.one()
    assert schur_p(1) == z(1)
    assert schur_p(2) == z(1) * z(1) * Fraction(1, 2) + z(2)
    assert schur_p(3) == (z(1) ** 3) * Fraction(1, 6) + z(1) * z(2) + z(3)


def test_schur_generating_function():
    """Coefficients of exp(sum z_j x^j) truncated at order 4 match p_k."""
    order = 4
    # exp series in a nilpotent truncation: sum_{m} xi^m / m! with xi of
    # x-degree >= 1, keeping x-degree <= order.
    series = {0: RingElem.one()}
    xi = {j: z(j) for j in range(1, order + 1)}
    power = {0: RingElem.one()}
    for m in range(1, order + 1):
        nxt = {}
        for deg, val in power.items():
            for j, gen in xi.items():
                if deg + j <= order:
                    nxt[deg + j] = nxt.get(deg + j, RingElem.zero()) + val * gen
        power = nxt
        for deg, val in power.items():
            series[deg] = series.get(deg, RingElem.zero()) + val.scale(Fraction(1, factorial(m)))
    for k in range(order + 1):
        assert series.get(k, RingElem.zero()) == schur_p(k)


def test_apply_schur_examples(alg):
    v = (1, 1)
    assert apply_schur_derivation(alg, v, 0, "t") == alg.tau(v)
    assert apply_schur_derivation(alg, v, 1, "t", sign=-1) == -alg.tau_derivative(v, [t(1)])
    expected = (alg.tau_derivative(v, [t(1), t(1)]).scale(Fraction(1, 2))
                - alg.tau_derivative(v, [t(2)]).scale(Fraction(1, 2)))
    assert apply_schur_derivation(alg, v, 2, "t", sign=-1) == expected


def test_miwa_minor_full(alg):
    for v in even_indices(6):
        for comp in ("t", "s"):
            report = verify_miwa_minor(alg, v, comp, 4)
            assert report.status == "pass", (v, comp, report.residual)


def test_miwa_matches_form_coefficients(alg):
    """The hatted-minor expansion reproduces the component-1 coefficients of
    the R form: c1[v1-1-k] = (-1)^(v1-1) p_k(-d~t) tau(v1-1, v2)."""
    for v in [(3, 2), (2, 3), (4, 1)]:
        form = linear_form_R(alg, v)
        v1, v2 = v
        for k in range(v1):
            expected = apply_schur_derivation(alg, (v1 - 1, v2), k, "t", sign=-1)
            if (v1 - 1) % 2:
                expected = -expected
            assert form.c1[v1 - 1 - k] == expected, (v, k)
        # the series terminates: p_k(-d~t) tau vanishes beyond the degree
        assert apply_schur_derivation(alg, (v1 - 1, v2), v1, "t", sign=-1).is_zero


def test_hirota_first_order(alg):
    F, G = (2, 2), (1, 1)
    got = hirota_eval(alg, ((t(1), 1),), F, G)
    want = (alg.tau_derivative(F, [t(1)]) * alg.tau(G)
            - alg.tau(F) * alg.tau_derivative(G, [t(1)]))
    assert got == want


def test_hirota_odd_degree_vanishes_on_diagonal(alg):
    F = (2, 2)
    assert hirota_eval(alg, ((t(1), 1),), F, F).is_zero
    assert hirota_eval(alg, ((s(1), 1), (t(1), 2)), F, F).is_zero


def test_hirota_second_order_diagonal(alg):
    F = (2, 2)
    got = hirota_eval(alg, ((t(1), 2),), F, F)
    want = (alg.tau_derivative(F, [t(1), t(1)]) * alg.tau(F)
            - alg.tau_derivative(F, [t(1)]) * alg.tau_derivative(F, [t(1)])).scale(2)
    assert got == want


def test_hirota_exchange_antisymmetry(alg):
    F, G = (3, 1), (1, 1)
    for mono in [((t(1), 1),), ((t(1), 1), (s(1), 1)), ((t(1), 2), (s(1), 1))]:
        order = sum(e for _, e in mono)
        lhs = hirota_eval(alg, mono, F, G)
        rhs = hirota_eval(alg, mono, G, F)
        assert lhs == (rhs if order % 2 == 0 else -rhs)


def _hirota_direct_offsets(alg, mono, F, G):
    """Two-point expansion with formal offsets, fully inside the ring.

    F(t+e) G(t-e) is expanded with explicit nilpotent offset generators and
    the coefficient of the target offset monomial is extracted.
    """
    exps = dict(mono)
    eps = {d: REGISTRY.intern(("eps",) + tuple(d)) for d in exps}

    def taylor(v, sign):
        total = RingElem.zero()
        for kvec in itertools.product(*[range(e + 1) for e in exps.values()]):
            word = []
            coeff = Fraction(1)
            mono_eps = RingElem.one()
            for (d, e), k in zip(exps.items(), kvec):
                word.extend([d] * k)
                coeff *= Fraction(sign ** k, factorial(k))
                mono_eps = mono_eps * RingElem.gen(eps[d]) ** k
            total = total + (alg.tau_derivative(v, word) * mono_eps).scale(coeff)
        return total

    product = taylor(F, 1) * taylor(G, -1)
    target = sorted(itertools.chain.from_iterable([eps[d]] * e for d, e in exps.items()))
    eps_ids = set(eps.values())
    extracted = {}
    for monomial, coeff in product.terms.items():
        eps_part = sorted(g for g in monomial if g in eps_ids)
        rest = tuple(g for g in monomial if g not in eps_ids)
        if eps_part == target:
            extracted[rest] = extracted.get(rest, 0) + coeff
    scale = 1
    for e in exps.values():
        scale *= factorial(e)
    return RingElem(extracted).scale(scale)


@pytest.mark.parametrize("mono", [((("t", 1), 1),),
                                  ((("t", 1), 2),),
                                  ((("t", 1), 1), (("s", 1), 1)),
                                  ((("t", 1), 2), (("s", 2), 1)),
                                  ((("t", 3), 1),)])
def test_hirota_binomial_matches_direct_expansion(alg, mono):
    F, G = (2, 2), (2, 0)
    assert hirota_eval(alg, mono, F, G) == _hirota_direct_offsets(alg, mono, F, G)


def test_toda_and_mckp_all_indices(alg):
    for v in odd_indices(7):
        for eq in ("pfafftoda1", "pfafftoda2", "mckp"):
            report = verify_equation(alg, eq, {"v": list(v)})
            assert report.status == "pass", (eq, v, report.residual)


def test_isub_families(alg):
    for v in odd_indices(7):
        for j in (1, 2, 3):
            for eq in ("isub1", "isub2", "isub3", "isub4"):
                report = verify_equation(alg, eq, {"v": list(v), "j": j})
                assert report.status == "pass", (eq, v, j, report.residual)


def test_dkp_members(one_component):
    for n2 in (2, 4, 6):
        report = verify_equation(one_component, "dkp", {"n2": n2})
        assert report.status == "pass", report.residual


def test_lattice_family(alg):
    offsets = ((0, 0), (2, 0), (-2, 0), (0, 2), (0, -2), (1, 1), (-1, -1))
    for v in odd_indices(7):
        for du in offsets:
            u = (v[0] + du[0], v[1] + du[1])
            if u[0] < 0 or u[1] < 0 or u[0] + u[1] > 7:
                continue
            for m, n in itertools.product(range(3), repeat=2):
                report = verify_equation(alg, "lattice",
                                         {"v": list(v), "u": list(u), "m": m, "n": n})
                assert report.status == "pass", (v, u, m, n, report.residual)


def _normalized_pairs(acc: PairAccumulator):
    return {k: Fraction(c) for k, c in acc.pairs.items()}


def test_lattice_reduces_to_first_toda_member(alg):
    """(m,n) = (1,1) at u = v is four times the first Toda-type member,
    pair by pair before any expansion."""
    for v in [(1, 2), (2, 1), (3, 2), (2, 3)]:
        lat = _normalized_pairs(_eq_lattice(alg, v, v, 1, 1))
        toda = {k: 4 * Fraction(c)
                for k, c in _eq_pfafftoda1(alg, v).pairs.items()}
        assert lat == toda, v


def test_lattice_reduces_to_second_toda_member(alg):
    """(m,n) = (0,1) at u = (v1-2, v2) is exactly the second member."""
    for v in [(3, 2), (2, 3), (4, 1), (2, 1)]:
        u = (v[0] - 2, v[1])
        lat = _normalized_pairs(_eq_lattice(alg, v, u, 0, 1))
        toda2 = _normalized_pairs(_eq_pfafftoda2(alg, v))
        assert lat == toda2, v


def test_mutated_equations_fail(alg, one_component):
    """The residual machinery detects broken equations."""
    from pfafflab.hierarchy import IDENTITY_OP, op_add, op_scale
    acc = PairAccumulator(one_component)
    op = op_add(op_add(hirota_op((t(1), 4)),
                       op_scale(hirota_op((t(1), 1), (t(3), 1)), -4)),
                op_scale(hirota_op((t(2), 2)), 3))
    acc.add_hirota(op, (6, 0), (6, 0))
    acc.add_scalar_product((4, 0), IDENTITY_OP, (8, 0), IDENTITY_OP, coeff=-23)
    assert not acc.evaluate().is_zero

    wrong = PairAccumulator(alg)
    wrong.add_hirota(hirota_op((t(1), 1)), (4, 2), (4, 4))
    wrong.add_hirota(hirota_op((s(1), 1)), (3, 3), (5, 3), coeff=-1)
    assert not wrong.evaluate().is_zero


def test_unknown_equation(alg):
    with pytest.raises(UnknownEquation):
        verify_equation(alg, "nosuch", {})


def test_cauchy_series_orthogonal_head(alg):
    coeffs, report = cauchy_series(alg, (2, 1), 1, 3)
    assert report.status == "pass"
    assert all(c.is_zero for c in coeffs[:2])
    assert not coeffs[2].is_zero


def test_cauchy_leading_value(alg):
    # Component-1 tower carries (-1)^(v1+1); component-2 is unsigned.
    for v in [(1, 2), (2, 1), (0, 1), (1, 0), (2, 3)]:
        coeffs, report = cauchy_series(alg, v, 1, 0)
        assert report.status == "pass", (v, report.residual)
        lead = coeffs[v[0]]
        want = alg.tau((v[0] + 1, v[1]))
        assert lead == (want if v[0] % 2 else -want), v
        coeffs2, report2 = cauchy_series(alg, v, 2, 0)
        assert report2.status == "pass"
        assert coeffs2[v[1]] == alg.tau((v[0], v[1] + 1))


def test_cauchy_shifted_tower(alg):
    v = (1, 2)
    coeffs, report = cauchy_series(alg, v, 1, 2)
    assert report.status == "pass"
    k1 = apply_schur_derivation(alg, (2, 2), 1, "t", sign=1)
    assert coeffs[2] == k1  # (-1)^(v1+1) = +1 here
    assert k1 == alg.tau_derivative((2, 2), [t(1)])


def test_cauchy_full_sweep(alg):
    for v in odd_indices(5):
        for comp in (1, 2):
            _, report = cauchy_series(alg, v, comp, 3)
            assert report.status == "pass", (v, comp, report.residual)


def test_cauchy_head_vanishes_up_to_seven(alg):
    for v in odd_indices(7):
        for comp in (1, 2):
            coeffs, report = cauchy_series(alg, v, comp, 0)
            assert report.status == "pass", (v, comp, report.residual)
            assert all(c.is_zero for c in coeffs[:v[comp - 1]])
