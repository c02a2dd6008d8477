#!/usr/bin/env python3
"""Worked example on a tiny generic instance.

Prints the first few tau-functions, a skew-orthogonal linear form with its
partner, the pairing values, and one bilinear lattice residual, so the moving
parts are visible end to end.
"""

from __future__ import annotations

from pfafflab.exactalg import REGISTRY
from pfafflab.hierarchy import verify_equation
from pfafflab.moments import generic_instance, t, s
from pfafflab.msop import linear_form_R, linear_form_Rtilde, skew_pair


def pretty(elem) -> str:
    """Render generators as m[kl|ab] instead of bare ids."""
    import re

    def sub(match) -> str:
        name = REGISTRY.name(int(match.group(1)))
        if name[0] == "m":
            _, k, l, a, b = name
            return f"m[{k}{l}|{a}{b}]"
        return match.group(0)

    return re.sub(r"g(\d+)", sub, elem.to_text(max_terms=12))


def main() -> None:
    alg = generic_instance((6, 6))
    print("tau towers over generic moments:")
    for v in [(0, 0), (1, 1), (2, 0), (0, 2), (2, 2)]:
        print(f"  tau{v} = {pretty(alg.tau(v))}")
    print()
    v = (1, 2)
    form = linear_form_R(alg, v)
    partner = linear_form_Rtilde(alg, v, 2)
    print(f"linear form at v={v} (coefficients against x^i w1, x^j w2):")
    print("  c1 =", [pretty(c) for c in form.c1])
    print("  c2 =", [pretty(c) for c in form.c2])
    print("partner form (component-2 slot v2-1 pinned to zero):")
    print("  c1 =", [pretty(c) for c in partner.c1])
    print("  c2 =", [pretty(c) for c in partner.c2])
    print()
    print("pairings:")
    print("  <R, R>        =", pretty(skew_pair(alg, form, form)))
    value = skew_pair(alg, form, partner)
    print("  <R, partner>  =", pretty(value))
    print("  tau(1,1)tau(1,3) =", pretty(alg.tau((1, 1)) * alg.tau((1, 3))))
    print()
    print("derivative of a moment under the first flows:")
    from pfafflab.moments import MomentKey
    print("  d_t1 m[12|00] =", pretty(alg.derive_moment(MomentKey(1, 2, 0, 0), t(1))))
    print("  d_s1 m[12|00] =", pretty(alg.derive_moment(MomentKey(1, 2, 0, 0), s(1))))
    print()
    for eq, params in [("pfafftoda1", {"v": [1, 2]}),
                       ("lattice", {"v": [1, 2], "u": [1, 2], "m": 1, "n": 1})]:
        report = verify_equation(alg, eq, params)
        print(f"{eq} at {params}: {report.status}")


if __name__ == "__main__":
    main()
