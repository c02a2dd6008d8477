"""Command-line front end: generate instances, run suites, emit reports.

Subcommands:
  verify        run verification suites and write a JSON report
  gen-instance  render a deterministic instance file from a template
  explain       print a bilinear equation by its identifier

Exit codes: 0 when every check passes or is skipped, 1 when any check fails,
2 on configuration errors.  Reports are byte-for-byte reproducible for a
fixed (config, seed); pass --timings to embed wall-clock times instead (that
trades reproducibility for profiling).
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

from .errors import ConfigError, DegenerateInstance, InvalidSpec, UnknownEquation
from . import hierarchy, mops, msop
from .moments import (InstanceSpec, MomentAlgebra, concrete_random_instance,
                      generic_instance, make_instance, s, t)
from .pfaffian import (SkewMatrix, determinant, pfaffian, pfaffian_expansion,
                       pfaffian_matchings_oracle, verify_pfaffian_identity)
from .report import VerificationReport
from .exactalg import RingElem

SUITES = ("pfaffian-core", "orthogonality", "recurrences", "derivative-relations",
          "miwa", "hierarchy", "cauchy", "mops", "sop-dkp")

MAX_INDEX_GUARD = 9


@dataclass
class SuiteConfig:
    suites: Tuple[str, ...]
    mode: str = "generic"
    max_total_index: int = 5
    max_order: int = 3
    seed: int = 0
    instance: Optional[str] = None
    report_path: Optional[str] = None
    allow_large: bool = False
    timings: bool = False

    def validate(self) -> None:
        for name in self.suites:
            if name not in SUITES and name != "all":
                raise ConfigError(f"unknown suite {name!r}")
        if self.mode not in ("generic", "concrete"):
            raise ConfigError(f"unknown mode {self.mode!r}")
        if self.max_total_index > MAX_INDEX_GUARD and not self.allow_large:
            raise ConfigError(
                f"max_total_index {self.max_total_index} exceeds the guard "
                f"({MAX_INDEX_GUARD}); pass --allow-large to override")
        if self.max_total_index < 1 or self.max_order < 0:
            raise ConfigError("max_total_index must be >= 1 and max_order >= 0")

    def expanded_suites(self) -> Tuple[str, ...]:
        if "all" in self.suites:
            return SUITES
        return tuple(dict.fromkeys(self.suites))


def _odd_indices(max_total: int) -> List[Tuple[int, int]]:
    return [(a, tot - a) for tot in range(1, max_total + 1, 2) for a in range(tot + 1)]


def _even_indices(max_total: int) -> List[Tuple[int, int]]:
    return [(a, tot - a) for tot in range(0, max_total + 1, 2) for a in range(tot + 1)]


def _auto_bounds(config: SuiteConfig) -> Tuple[int, int]:
    b = config.max_total_index + config.max_order + 2
    return (b, b)


def _build_algebra(config: SuiteConfig) -> MomentAlgebra:
    if config.instance:
        with open(config.instance) as fh:
            try:
                data = json.load(fh)
            except json.JSONDecodeError as exc:
                raise ConfigError(f"malformed instance JSON: {exc}") from exc
        spec = InstanceSpec.from_json_dict(data)
        return make_instance(spec)
    if config.mode == "generic":
        return generic_instance(_auto_bounds(config))
    return concrete_random_instance(_auto_bounds(config), config.seed)


Check = Callable[[], VerificationReport]


def _suite_pfaffian_core(config: SuiteConfig) -> Iterable[Check]:
    rng = random.Random(config.seed)

    def pf_det_check(size: int, case_seed: int) -> Check:
        def run() -> VerificationReport:
            local = random.Random(case_seed)
            m = SkewMatrix.from_function(
                size, lambda i, j: Fraction(local.randint(-9, 9), local.randint(1, 9)))
            pf = pfaffian(m)
            det = determinant(m.dense())
            residual = RingElem.const(pf * pf - det)
            return VerificationReport.from_residual(
                "pfaffian-core", {"check": "pf2-det", "size": size, "seed": case_seed},
                residual)
        return run

    def oracle_check(size: int, case_seed: int) -> Check:
        def run() -> VerificationReport:
            local = random.Random(case_seed)
            m = SkewMatrix.from_function(
                size, lambda i, j: Fraction(local.randint(-9, 9), local.randint(1, 9)))
            residual = RingElem.const(pfaffian_expansion(m) - pfaffian_matchings_oracle(m))
            return VerificationReport.from_residual(
                "pfaffian-core", {"check": "expansion-vs-matchings", "size": size,
                                  "seed": case_seed}, residual)
        return run

    for size in range(2, 11, 2):
        for _ in range(4):
            yield pf_det_check(size, rng.randint(0, 2 ** 30))
    for size in range(2, 11, 2):
        yield oracle_check(size, rng.randint(0, 2 ** 30))
    for star in (0, 2, 4):
        yield (lambda st=star: verify_pfaffian_identity("even", st))
    for star in (1, 3, 5):
        yield (lambda st=star: verify_pfaffian_identity("odd", st))


def _suite_orthogonality(config: SuiteConfig, alg: MomentAlgebra) -> Iterable[Check]:
    indices = _odd_indices(config.max_total_index)
    for v in indices:
        for u in indices:
            yield (lambda vv=v, uu=u: msop.verify_skew_orthogonality(alg, vv, uu))
    if alg.mode == "concrete":
        for v in indices:
            yield (lambda vv=v: _linsolve_check(alg, vv, config))


def _linsolve_check(alg: MomentAlgebra, v: Tuple[int, int],
                    config: SuiteConfig) -> VerificationReport:
    params = {"check": "linsolve-oracle", "v": list(v)}
    current = alg
    for attempt in range(6):
        try:
            lin = msop.msop_via_linsolve(current, v)
            pf_form = msop.linear_form_R(current, v)
            ok = msop.forms_proportional(lin, pf_form)
            for b in (1, 2):
                if v[b - 1] >= 1 and ok:
                    lin_b = msop.msop_via_linsolve(current, v, b)
                    ok = msop.forms_proportional(lin_b, msop.linear_form_Rtilde(current, v, b))
            status = "pass" if ok else "fail"
            return VerificationReport("orthogonality", {**params, "attempt": attempt},
                                      status, "0" if ok else "forms not proportional",
                                      instance_hash=current.spec.instance_hash())
        except DegenerateInstance:
            if attempt == 5:
                break
            current = concrete_random_instance(current.bounds,
                                               config.seed + 1000 * (attempt + 1))
    return VerificationReport("orthogonality", params, "degenerate",
                              instance_hash=current.spec.instance_hash())


def _suite_recurrences(config: SuiteConfig, alg: MomentAlgebra) -> Iterable[Check]:
    for v in _odd_indices(config.max_total_index):
        for eq in msop.RECURRENCES:
            yield (lambda vv=v, ee=eq: msop.verify_recurrence(alg, vv, ee))


def _suite_derivative_relations(config: SuiteConfig, alg: MomentAlgebra) -> Iterable[Check]:
    for v in _odd_indices(config.max_total_index):
        for b in (1, 2):
            yield (lambda vv=v, bb=b: msop.verify_derivative_relation(alg, vv, bb))

    if alg.mode == "generic":
        word_len = min(config.max_order, 3)
        vmax = min(config.max_total_index + 1, 6)
        # Words may stack three order-3 flows, so this check sizes its own
        # instance instead of reusing the shared one.
        bound = (vmax - 1) + 3 * word_len
        b1_alg = generic_instance((bound, bound))
        words = _derivation_words(word_len)
        for v in _even_indices(vmax):
            for word in words:
                yield (lambda vv=v, ww=word: _b1_check(b1_alg, vv, ww))


def _derivation_words(max_len: int) -> List[Tuple]:
    base = [t(1), t(2), t(3), s(1), s(2), s(3)]
    words: List[Tuple] = []
    seen = set()
    for length in range(1, max_len + 1):
        stack = [()]
        for _ in range(length):
            stack = [w + (d,) for w in stack for d in base]
        for w in stack:
            key = tuple(sorted(w))
            if key not in seen:
                seen.add(key)
                words.append(key)
    return words


def _b1_check(alg: MomentAlgebra, v: Tuple[int, int], word: Tuple) -> VerificationReport:
    shift = alg.tau_derivative(v, word)
    leibniz = alg.tau_derivative_leibniz(v, word)
    return VerificationReport.from_residual(
        "derivative-relations",
        {"check": "shift-vs-leibniz", "v": list(v), "word": [list(d) for d in word]},
        shift - leibniz, instance_hash=alg.spec.instance_hash())


def _suite_miwa(config: SuiteConfig, alg: MomentAlgebra) -> Iterable[Check]:
    for v in _even_indices(min(config.max_total_index + 1, 6)):
        for comp in ("t", "s"):
            yield (lambda vv=v, cc=comp: hierarchy.verify_miwa_minor(
                alg, vv, cc, config.max_order))


def _suite_hierarchy(config: SuiteConfig, alg: MomentAlgebra) -> Iterable[Check]:
    odd = _odd_indices(config.max_total_index)
    for v in odd:
        for eq in ("pfafftoda1", "pfafftoda2", "mckp"):
            yield (lambda vv=v, ee=eq: hierarchy.verify_equation(alg, ee, {"v": list(vv)}))
        for j in range(1, min(config.max_order, 3) + 1):
            for eq in ("isub1", "isub2", "isub3", "isub4"):
                yield (lambda vv=v, ee=eq, jj=j: hierarchy.verify_equation(
                    alg, ee, {"v": list(vv), "j": jj}))
    offsets = ((0, 0), (2, 0), (-2, 0), (0, 2), (0, -2), (1, 1), (-1, -1))
    for v in odd:
        for du in offsets:
            u = (v[0] + du[0], v[1] + du[1])
            if u[0] < 0 or u[1] < 0 or u[0] + u[1] > config.max_total_index:
                continue
            for m in range(3):
                for n in range(3):
                    yield (lambda vv=v, uu=u, mm=m, nn=n: hierarchy.verify_equation(
                        alg, "lattice", {"v": list(vv), "u": list(uu), "m": mm, "n": nn}))


def _suite_cauchy(config: SuiteConfig, alg: MomentAlgebra) -> Iterable[Check]:
    for v in _odd_indices(min(config.max_total_index, 5)):
        for comp in (1, 2):
            yield (lambda vv=v, cc=comp: hierarchy.cauchy_series(
                alg, vv, cc, config.max_order)[1])


def _suite_mops(config: SuiteConfig) -> Iterable[Check]:
    seed = config.seed

    def type_table() -> Iterable[Check]:
        wf = mops.random_weight_family(seed + 1, 2, 8)
        idx = [(a, tot - a) for tot in range(1, 5) for a in range(tot + 1)]
        for v in idx:
            for u in idx:
                yield (lambda vv=v, uu=u: mops.verify_type_biorthogonality(wf, vv, uu))

    def mixed_table() -> Iterable[Check]:
        tf = mops.random_two_families(seed + 2, 2, 2, 8)
        pairs = [(u, v) for u in [(1, 0), (0, 1), (1, 1), (2, 1), (1, 2)]
                 for v in [(0, 0), (1, 0), (0, 1), (1, 1), (2, 0)]
                 if sum(u) == sum(v) + 1]
        for u, v in pairs:
            for u2, v2 in [((0, 0), (1, 0)), ((0, 0), (0, 1)), ((1, 0), (1, 1)),
                           ((0, 1), (1, 1)), ((1, 1), (2, 1)), ((1, 1), (1, 2))]:
                yield (lambda a=u, b=v, c=u2, d=v2:
                       mops.verify_mixed_orthogonality(tf, a, b, c, d))

    def mbop_table() -> Iterable[Check]:
        kb = mops.random_kernel_bimoments(seed + 3, 2, 2, 7, 7)
        idx = [(a, b) for a in range(3) for b in range(3)]
        for u in idx:
            for v in idx:
                if sum(u) != sum(v) or sum(u) > 3:
                    continue
                for a in (0, 1):
                    for b in (0, 1):
                        for u2 in idx:
                            for v2 in idx:
                                if sum(u2) != sum(v2) or sum(u2) > 3:
                                    continue
                                yield (lambda uu=u, vv=v, aa=a, bb=b, u3=u2, v3=v2:
                                       mops.verify_mbop(kb, uu, vv, aa, bb, u3, v3))

    def symmetric_table() -> Iterable[Check]:
        sb = mops.random_symmetric_bimoments(seed + 4, 2, 8)
        idx = [(0, 0), (1, 0), (0, 1), (1, 1), (2, 1), (1, 2), (2, 2)]
        for v in idx:
            for b in (0, 1):
                for v2 in idx:
                    yield (lambda vv=v, bb=b, v3=v2: mops.verify_symmetric(sb, vv, bb, v3))

    yield from type_table()
    yield from mixed_table()
    yield from mbop_table()
    yield from symmetric_table()


def _suite_sop_dkp(config: SuiteConfig) -> Iterable[Check]:
    n_max = max(1, (config.max_total_index - 1) // 2)
    bound = 2 * n_max + config.max_order + 3
    if config.mode == "generic":
        alg = make_instance(InstanceSpec(mode="generic", bounds=(bound, -1)))
    else:
        rng = random.Random(config.seed)
        num = max(8, 2 * n_max + 2)
        nodes = tuple(Fraction(x) for x in rng.sample(range(-9, 10), num))
        w = tuple(Fraction(rng.randint(1, 5)) for _ in range(num))
        alg = make_instance(InstanceSpec(
            mode="concrete", bounds=(bound, -1), nodes=nodes, w1=w, w2=w,
            kernel_type="random", seed=config.seed))
    for n in range(n_max + 1):
        yield (lambda nn=n: msop.sop_reduce(alg, nn)[2])
    for n2 in range(2, 2 * n_max + 1, 2):
        yield (lambda k=n2: hierarchy.verify_equation(alg, "dkp", {"n2": k}))


def build_checks(config: SuiteConfig) -> List[Check]:
    checks: List[Check] = []
    shared: Optional[MomentAlgebra] = None

    def algebra() -> MomentAlgebra:
        nonlocal shared
        if shared is None:
            shared = _build_algebra(config)
        return shared

    for suite in config.expanded_suites():
        if suite == "pfaffian-core":
            checks.extend(_suite_pfaffian_core(config))
        elif suite == "orthogonality":
            checks.extend(_suite_orthogonality(config, algebra()))
        elif suite == "recurrences":
            checks.extend(_suite_recurrences(config, algebra()))
        elif suite == "derivative-relations":
            checks.extend(_suite_derivative_relations(config, algebra()))
        elif suite == "miwa":
            checks.extend(_suite_miwa(config, algebra()))
        elif suite == "hierarchy":
            checks.extend(_suite_hierarchy(config, algebra()))
        elif suite == "cauchy":
            checks.extend(_suite_cauchy(config, algebra()))
        elif suite == "mops":
            checks.extend(_suite_mops(config))
        elif suite == "sop-dkp":
            checks.extend(_suite_sop_dkp(config))
    return checks


def _run_check(check: Check) -> VerificationReport:
    start = time.monotonic()
    report = check()
    elapsed = int((time.monotonic() - start) * 1000)
    if report.wall_time_ms == 0:
        report = VerificationReport(report.suite, report.params, report.status,
                                    report.residual, elapsed, report.instance_hash)
    return report


def run_suite(config: SuiteConfig) -> Tuple[int, List[VerificationReport]]:
    config.validate()
    checks = build_checks(config)
    threads = int(os.environ.get("PFAFFLAB_THREADS", "1"))
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            reports = list(pool.map(_run_check, checks))
    else:
        reports = [_run_check(c) for c in checks]
    reports.sort(key=lambda r: r.sort_key())
    failed = sum(1 for r in reports if r.status == "fail")
    if config.report_path:
        payload = {
            "config": {
                "suites": list(config.expanded_suites()),
                "mode": config.mode,
                "max_total_index": config.max_total_index,
                "max_order": config.max_order,
                "seed": config.seed,
                "instance": config.instance,
            },
            "reports": [r.to_dict(with_timing=config.timings) for r in reports],
        }
        with open(config.report_path, "w") as fh:
            json.dump(payload, fh, indent=1, sort_keys=True)
            fh.write("\n")
    return (1 if failed else 0), reports


# -- instance generation ------------------------------------------------------


def gen_instance(template_path: str, seed: int, out_path: str) -> dict:
    try:
        with open(template_path) as fh:
            template = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read template: {exc}") from exc
    mode = template.get("mode", "concrete")
    bounds = tuple(template.get("bounds", [6, 6]))
    if mode == "generic":
        spec = InstanceSpec(mode="generic", bounds=bounds)
    elif mode == "concrete":
        rng = random.Random(seed)
        num = int(template.get("num_nodes", 4))
        if num < 2:
            raise ConfigError("need at least 2 nodes")
        lo, hi = template.get("node_range", [-6, 6])
        pool = [Fraction(x) for x in range(int(lo), int(hi) + 1)]
        if num > len(pool):
            raise ConfigError("node range too small for requested node count")
        nodes = tuple(rng.sample(pool, num))
        w1 = tuple(Fraction(rng.randint(1, 5)) for _ in range(num))
        w2 = tuple(Fraction(rng.randint(1, 5)) for _ in range(num))
        ktype = template.get("kernel", {}).get("type", "random")
        if ktype == "sign":
            matrix = tuple(tuple(Fraction(0 if i == j else (1 if j > i else -1))
                                 for j in range(num)) for i in range(num))
        elif ktype == "random":
            choices = [x for x in range(-3, 4) if x != 0]
            m = [[Fraction(0)] * num for _ in range(num)]
            for i in range(num):
                for j in range(i + 1, num):
                    val = Fraction(rng.choice(choices))
                    m[i][j] = val
                    m[j][i] = -val
            matrix = tuple(tuple(row) for row in m)
        else:
            raise ConfigError(f"unknown kernel template type {ktype!r}")
        spec = InstanceSpec(mode="concrete", bounds=bounds, nodes=nodes, w1=w1, w2=w2,
                            kernel_type="matrix", kernel_matrix=matrix)
    else:
        raise ConfigError(f"unknown template mode {mode!r}")
    payload = spec.to_json_dict()
    with open(out_path, "w") as fh:
        json.dump(payload, fh, indent=1, sort_keys=True)
        fh.write("\n")
    return payload


# -- equation catalogue -------------------------------------------------------

EQUATION_TEXT: Dict[str, str] = {
    "pfafftoda1": (
        "Coupled Toda-type bilinear lattice, first member:\n"
        "  D_t1 tau(v1,v2-1).tau(v1,v2+1) = D_s1 tau(v1+1,v2).tau(v1-1,v2)"),
    "pfafftoda2": (
        "Coupled Toda-type bilinear lattice, second member:\n"
        "  D_s1 D_t1 tau(v1-1,v2).tau(v1-1,v2)\n"
        "    = 2 [ tau(v1,v2-1) tau(v1-2,v2+1) - tau(v1,v2+1) tau(v1-2,v2-1) ]"),
    "mckp": (
        "Modified coupled KP equation:\n"
        "  (D_s2 + D_s1^2) tau(v1,v2-1).tau(v1+1,v2) = 2 tau(v1,v2+1) tau(v1+1,v2-2)"),
    "dkp": (
        "First member of the DKP hierarchy (one-component reduction):\n"
        "  (D_t1^4 - 4 D_t1 D_t3 + 3 D_t2^2) tau(2n).tau(2n) = 24 tau(2n-2) tau(2n+2)"),
    "isub1": (
        "Neighboring-tau hierarchy, first family (t-column of the tilde-2 recurrence):\n"
        "  tau(v1,v2-1) p_j(-Dt~) tau(v1,v2+1)\n"
        "    = -tau(v1+1,v2) d_s1 p_{j-1}(-Dt~) tau(v1-1,v2)\n"
        "      + d_s1 tau(v1+1,v2) p_{j-1}(-Dt~) tau(v1-1,v2)\n"
        "      + tau(v1,v2+1) p_j(-Dt~) tau(v1,v2-1)"),
    "isub2": (
        "Neighboring-tau hierarchy, second family (s-column of the tilde-2 recurrence):\n"
        "  tau(v1,v2-1) p_j(-Ds~) tau(v1+1,v2)\n"
        "    = tau(v1+1,v2) [d_s1 p_{j-1}(-Ds~) + p_j(-Ds~)] tau(v1,v2-1)\n"
        "      - d_s1 tau(v1+1,v2) p_{j-1}(-Ds~) tau(v1,v2-1)\n"
        "      + tau(v1,v2+1) p_{j-2}(-Ds~) tau(v1+1,v2-2)"),
    "isub3": (
        "Neighboring-tau hierarchy, third family (t-column of the tilde-1 recurrence):\n"
        "  d_t1 tau(v1,v2-1) p_{j-1}(-Dt~) tau(v1-1,v2)\n"
        "    = tau(v1,v2-1) [d_t1 p_{j-1}(-Dt~) + p_j(-Dt~)] tau(v1-1,v2)\n"
        "      - tau(v1-1,v2) p_j(-Dt~) tau(v1,v2-1)\n"
        "      + tau(v1+1,v2) p_{j-2}(-Dt~) tau(v1-2,v2-1)"),
    "isub4": (
        "Neighboring-tau hierarchy, fourth family (s-column of the tilde-1 recurrence):\n"
        "  d_t1 tau(v1,v2-1) p_{j-1}(-Ds~) tau(v1,v2-1)\n"
        "    = tau(v1,v2-1) d_t1 p_{j-1}(-Ds~) tau(v1,v2-1)\n"
        "      + tau(v1-1,v2) p_{j-2}(-Ds~) tau(v1+1,v2-2)\n"
        "      - tau(v1+1,v2) p_{j-2}(-Ds~) tau(v1-1,v2-2)"),
    "lattice": (
        "Coupled bilinear lattice family lattice(m,n,u,v), from Cauchy transforms:\n"
        "  (-1)^(u1+v1) (1/n!) D_s1^n [ sum_{j+l=m} (-2)^j/(j! l!)\n"
        "      p_{j+v1-u1-1}(Dt~) D_t1^l ] tau(u1+1,u2).tau(v1-1,v2)\n"
        "  + (-1)^(u1+v1) (1/n!) D_s1^n [ sum_{j+l=m} 2^j/(j! l!)\n"
        "      p_{j+u1-v1-1}(-Dt~) D_t1^l ] tau(u1-1,u2).tau(v1+1,v2)\n"
        "  + (1/m!) D_t1^m [ sum_{j+l=n} (-2)^j/(j! l!)\n"
        "      p_{j+v2-u2-1}(Ds~) D_s1^l ] tau(u1,u2+1).tau(v1,v2-1)\n"
        "  + (1/m!) D_t1^m [ sum_{j+l=n} 2^j/(j! l!)\n"
        "      p_{j+u2-v2-1}(-Ds~) D_s1^l ] tau(u1,u2-1).tau(v1,v2+1) = 0\n"
        "  (p with a negative order is the zero operator; at (m,n)=(1,1), u=v\n"
        "   this is 4x the first Toda-type member, and at (m,n)=(0,1),\n"
        "   u=(v1-2,v2) it is exactly the second)"),
}


def explain(eq_id: str) -> str:
    if eq_id not in EQUATION_TEXT:
        raise UnknownEquation(f"unknown equation id {eq_id!r}; known: "
                              + ", ".join(sorted(EQUATION_TEXT)))
    return EQUATION_TEXT[eq_id]


# -- argument parsing ---------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pfafflab",
        description="Exact verification of skew-orthogonal polynomial and "
                    "bilinear lattice identities over moment instances.")
    sub = parser.add_subparsers(dest="command", required=True)

    pv = sub.add_parser("verify", help="run verification suites")
    pv.add_argument("--suite", nargs="+", default=["all"],
                    help=f"suites to run: {', '.join(SUITES)} or all")
    pv.add_argument("--mode", choices=("generic", "concrete"), default="generic")
    pv.add_argument("--max-index", type=int, default=5, dest="max_index",
                    help="largest total multi-index degree")
    pv.add_argument("--max-order", type=int, default=3, dest="max_order",
                    help="largest derivative / expansion order")
    pv.add_argument("--seed", type=int, default=0)
    pv.add_argument("--instance", default=None, help="instance spec JSON file")
    pv.add_argument("--report", default=None, help="report output path")
    pv.add_argument("--allow-large", action="store_true",
                    help="lift the max-index guard")
    pv.add_argument("--timings", action="store_true",
                    help="embed wall times in the report (not reproducible)")

    pg = sub.add_parser("gen-instance", help="render an instance from a template")
    pg.add_argument("--template", required=True)
    pg.add_argument("--seed", type=int, default=0)
    pg.add_argument("--out", required=True)

    pe = sub.add_parser("explain", help="print an equation by identifier")
    pe.add_argument("eq_id")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "verify":
            config = SuiteConfig(
                suites=tuple(args.suite), mode=args.mode,
                max_total_index=args.max_index, max_order=args.max_order,
                seed=args.seed, instance=args.instance, report_path=args.report,
                allow_large=args.allow_large, timings=args.timings)
            code, reports = run_suite(config)
            by_status: Dict[str, int] = {}
            for r in reports:
                by_status[r.status] = by_status.get(r.status, 0) + 1
            print(f"{len(reports)} checks: " +
                  ", ".join(f"{k}={v}" for k, v in sorted(by_status.items())))
            for r in reports:
                if r.status == "fail":
                    print(f"FAIL {r.suite} {json.dumps(r.params, sort_keys=True)}: "
                          f"{r.residual[:120]}")
            return code
        if args.command == "gen-instance":
            gen_instance(args.template, args.seed, args.out)
            print(f"wrote {args.out}")
            return 0
        if args.command == "explain":
            print(explain(args.eq_id))
            return 0
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except (InvalidSpec, UnknownEquation) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 2


if __name__ == "__main__":
    sys.exit(main())
