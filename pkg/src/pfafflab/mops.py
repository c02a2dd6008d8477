"""Multiple orthogonal polynomial constructors on discrete weight systems.

Everything here is a plain exact linear solve against moment data: type I and
type II multiple orthogonality for a single weight family, the mixed-type
two-family version, the kernel-coupled bi-orthogonal pair, and the symmetric
kernel specialization.  Normalized statements are verified in multiplied-out
form (the normalization constant squared is a product of two block
determinants), which keeps every check inside rational arithmetic.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Sequence, Tuple

from .errors import NotNormal
from .exactalg import RingElem
from .pfaffian import determinant, nullspace, solve_linear
from .report import VerificationReport

Vec = Tuple[Fraction, ...]
Coeffs = List[Fraction]


def _powers(nodes: Vec, maxdeg: int) -> List[List[Fraction]]:
    return [[x ** d for d in range(maxdeg + 1)] for x in nodes]


@dataclass(frozen=True)
class WeightFamily:
    """p weights sampled on a common node set; single-integral moments."""

    nodes: Vec
    weights: Tuple[Vec, ...]

    @property
    def p(self) -> int:
        return len(self.weights)

    def moment(self, i: int, j: int) -> Fraction:
        return sum((x ** j) * w for x, w in zip(self.nodes, self.weights[i]))


def type_i_coeffs(wf: WeightFamily, v: Sequence[int]) -> List[Coeffs]:
    """Coefficient vectors of the type I vector polynomial at multi-index v.

    Row k imposes that x^k pairs to 0 for k < |v|-1 and to 1 at k = |v|-1.
    """
    size = sum(v)
    cols = [(i, d) for i in range(len(v)) for d in range(v[i])]
    rows = [[wf.moment(i, k + d) for (i, d) in cols] for k in range(size)]
    rhs = [Fraction(k == size - 1) for k in range(size)]
    try:
        sol = solve_linear(rows, rhs)
    except ValueError as exc:
        raise NotNormal(f"type I system singular at v={tuple(v)}") from exc
    out: List[Coeffs] = [[Fraction(0)] * v[i] for i in range(len(v))]
    for (i, d), val in zip(cols, sol):
        out[i][d] = val
    return out


def type_ii_coeffs(wf: WeightFamily, v: Sequence[int]) -> Coeffs:
    """Monic type II polynomial of degree |v|, as its full coefficient list."""
    size = sum(v)
    conds = [(i, j) for i in range(len(v)) for j in range(v[i])]
    rows = [[wf.moment(i, j + l) for l in range(size)] for (i, j) in conds]
    rhs = [-wf.moment(i, j + size) for (i, j) in conds]
    try:
        eta = solve_linear(rows, rhs)
    except ValueError as exc:
        raise NotNormal(f"type II system singular at v={tuple(v)}") from exc
    return eta + [Fraction(1)]


def pair_type_ii_type_i(wf: WeightFamily, p_coeffs: Coeffs,
                        a_coeffs: List[Coeffs]) -> Fraction:
    """Single integral of (type II polynomial) x (type I linear form)."""
    total = Fraction(0)
    for i, ai in enumerate(a_coeffs):
        for da, ca in enumerate(ai):
            if ca == 0:
                continue
            for dp, cp in enumerate(p_coeffs):
                if cp:
                    total += cp * ca * wf.moment(i, dp + da)
    return total


def _leq(a: Sequence[int], b: Sequence[int]) -> bool:
    return all(x <= y for x, y in zip(a, b))


def verify_type_biorthogonality(wf: WeightFamily, v: Sequence[int],
                                u: Sequence[int]) -> VerificationReport:
    """The type II against type I pairing table.

    Zero when u <= v componentwise and when |v| <= |u| - 2; one when
    |v| = |u| - 1.  Index pairs matching none of these carry no claim.
    """
    params = {"kind": "type-i-ii", "v": list(v), "u": list(u)}
    applicable = _leq(u, v) or sum(v) <= sum(u) - 2 or sum(v) == sum(u) - 1
    if not applicable:
        return VerificationReport("mops", {**params, "reason": "no claim"}, "skipped")
    got = pair_type_ii_type_i(wf, type_ii_coeffs(wf, v), type_i_coeffs(wf, u))
    want = Fraction(1) if sum(v) == sum(u) - 1 else Fraction(0)
    return VerificationReport.from_residual("mops", params, RingElem.const(got - want))


@dataclass(frozen=True)
class TwoWeightFamilies:
    """Two weight sets on one node grid; product moments couple them."""

    nodes: Vec
    w1: Tuple[Vec, ...]
    w2: Tuple[Vec, ...]

    def moment(self, l: int, k: int, j: int) -> Fraction:
        return sum((x ** j) * a * b
                   for x, a, b in zip(self.nodes, self.w1[l], self.w2[k]))


def mixed_p_coeffs(tf: TwoWeightFamilies, u: Sequence[int],
                   v: Sequence[int]) -> List[Coeffs]:
    """First-family linear form orthogonal to the second family; |u| = |v| + 1."""
    if sum(u) != sum(v) + 1:
        raise ValueError("mixed form needs |u| = |v| + 1")
    cols = [(i, d) for i in range(len(u)) for d in range(u[i])]
    rows = [[tf.moment(i, j, k + d) for (i, d) in cols]
            for j in range(len(v)) for k in range(v[j])]
    basis = nullspace(rows, len(cols))
    if len(basis) != 1:
        raise NotNormal(f"mixed system kernel has dimension {len(basis)}")
    out: List[Coeffs] = [[Fraction(0)] * u[i] for i in range(len(u))]
    for (i, d), val in zip(cols, basis[0]):
        out[i][d] = val
    return out


def mixed_q_coeffs(tf: TwoWeightFamilies, u: Sequence[int],
                   v: Sequence[int]) -> List[Coeffs]:
    """Second-family linear form orthogonal to the first family; |v| = |u| + 1."""
    if sum(v) != sum(u) + 1:
        raise ValueError("mixed dual form needs |v| = |u| + 1")
    cols = [(i, d) for i in range(len(v)) for d in range(v[i])]
    rows = [[tf.moment(j, i, k + d) for (i, d) in cols]
            for j in range(len(u)) for k in range(u[j])]
    basis = nullspace(rows, len(cols))
    if len(basis) != 1:
        raise NotNormal(f"mixed dual kernel has dimension {len(basis)}")
    out: List[Coeffs] = [[Fraction(0)] * v[i] for i in range(len(v))]
    for (i, d), val in zip(cols, basis[0]):
        out[i][d] = val
    return out


def pair_mixed(tf: TwoWeightFamilies, p: List[Coeffs], q: List[Coeffs]) -> Fraction:
    total = Fraction(0)
    for i, ai in enumerate(p):
        for da, ca in enumerate(ai):
            if ca == 0:
                continue
            for j, bj in enumerate(q):
                for db, cb in enumerate(bj):
                    if cb:
                        total += ca * cb * tf.moment(i, j, da + db)
    return total


def verify_mixed_orthogonality(tf: TwoWeightFamilies, u: Sequence[int], v: Sequence[int],
                               u2: Sequence[int], v2: Sequence[int]) -> VerificationReport:
    """Mixed-type orthogonality: the pairing vanishes for u <= u2 or v >= v2."""
    params = {"kind": "mixed", "u": list(u), "v": list(v), "u'": list(u2), "v'": list(v2)}
    if not (_leq(u, u2) or _leq(v2, v)):
        return VerificationReport("mops", {**params, "reason": "no claim"}, "skipped")
    got = pair_mixed(tf, mixed_p_coeffs(tf, u, v), mixed_q_coeffs(tf, u2, v2))
    return VerificationReport.from_residual("mops", params, RingElem.const(got))


@dataclass(frozen=True)
class KernelBimoments:
    """Two node grids coupled by a kernel matrix; double-integral bi-moments."""

    nodes1: Vec
    nodes2: Vec
    kernel: Tuple[Vec, ...]
    w1: Tuple[Vec, ...]
    w2: Tuple[Vec, ...]

    def bimoment(self, a: int, b: int, k: int, l: int) -> Fraction:
        total = Fraction(0)
        for n, x in enumerate(self.nodes1):
            wa = self.w1[a][n] * x ** k
            if wa == 0:
                continue
            row = self.kernel[n]
            for m, y in enumerate(self.nodes2):
                sv = row[m]
                if sv:
                    total += wa * sv * self.w2[b][m] * y ** l
        return total


def _block_matrix(kb: KernelBimoments, u: Sequence[int], v: Sequence[int],
                  widen_col: int | None = None, widen_row: int | None = None
                  ) -> Tuple[List[List[Fraction]], List[Tuple[int, int]], List[Tuple[int, int]]]:
    """Bi-moment block matrix with rows (b, l) over v and columns (a, k) over u.

    ``widen_col``/``widen_row`` widen one block by a single degree.
    """
    cols = [(a, k) for a in range(len(u))
            for k in range(u[a] + (1 if a == widen_col else 0))]
    rows_ix = [(b, l) for b in range(len(v))
               for l in range(v[b] + (1 if b == widen_row else 0))]
    rows = [[kb.bimoment(a, b, k, l) for (a, k) in cols] for (b, l) in rows_ix]
    return rows, rows_ix, cols


def _cofactor_row_expansion(rows: List[List[Fraction]], ncols: int) -> List[Fraction]:
    """Treat the missing last row as symbol slots: coefficient per column."""
    nrows = len(rows) + 1
    out = []
    for c in range(ncols):
        minor = [[row[j] for j in range(ncols) if j != c] for row in rows]
        sign = -1 if (nrows - 1 + c) % 2 else 1
        out.append(sign * determinant(minor))
    return out


def mbop_p_hat(kb: KernelBimoments, u: Sequence[int], v: Sequence[int],
               a: int, b: int) -> List[Coeffs]:
    """First bi-orthogonal form, multiplied through: the plain determinant
    expansion with column block a widened.  The square-root normalization and
    its sign branch never appear; the pairing value is a determinant product.
    """
    rows, _, cols = _block_matrix(kb, u, v, widen_col=a)
    slot_coeffs = _cofactor_row_expansion(rows, len(cols))
    out: List[Coeffs] = [[Fraction(0)] * (u[i] + (1 if i == a else 0))
                         for i in range(len(u))]
    for (i, d), val in zip(cols, slot_coeffs):
        out[i][d] = val
    return out


def mbop_q_hat(kb: KernelBimoments, u: Sequence[int], v: Sequence[int],
               a: int, b: int) -> List[Coeffs]:
    """Second bi-orthogonal form, multiplied through (row block b widened)."""
    rows, rows_ix, _ = _block_matrix(kb, u, v, widen_row=b)
    # Missing last column holds the symbol slots; expand along it.
    n = len(rows)
    out: List[Coeffs] = [[Fraction(0)] * (v[j] + (1 if j == b else 0))
                         for j in range(len(v))]
    for r, (j, l) in enumerate(rows_ix):
        minor = [rows[x] for x in range(n) if x != r]
        sign = -1 if (r + n - 1) % 2 else 1
        out[j][l] = sign * determinant(minor)
    return out


def pair_bimoment(kb: KernelBimoments, p: List[Coeffs], q: List[Coeffs]) -> Fraction:
    total = Fraction(0)
    for i, ai in enumerate(p):
        for da, ca in enumerate(ai):
            if ca == 0:
                continue
            for j, bj in enumerate(q):
                for db, cb in enumerate(bj):
                    if cb:
                        total += ca * cb * kb.bimoment(i, j, da, db)
    return total


def verify_mbop(kb: KernelBimoments, u: Sequence[int], v: Sequence[int],
                a: int, b: int, u2: Sequence[int], v2: Sequence[int]) -> VerificationReport:
    """Bi-orthogonality of the unnormalized pair.

    Zero clauses follow the partial orders; at coinciding indices the pairing
    equals the product of the plain and the widened block determinants.
    """
    params = {"kind": "mbop", "u": list(u), "v": list(v), "a": a, "b": b,
              "u'": list(u2), "v'": list(v2)}
    p = mbop_p_hat(kb, u, v, a, b)
    q = mbop_q_hat(kb, u2, v2, a, b)
    got = pair_bimoment(kb, p, q)
    u_plus = [x + (1 if i == a else 0) for i, x in enumerate(u)]
    v2_plus = [x + (1 if j == b else 0) for j, x in enumerate(v2)]
    if tuple(u) == tuple(u2) and tuple(v) == tuple(v2):
        plain, _, _ = _block_matrix(kb, u, v)
        widened, _, _ = _block_matrix(kb, u, v, widen_col=a, widen_row=b)
        want = determinant(plain) * determinant(widened)
        return VerificationReport.from_residual("mops", params,
                                                RingElem.const(got - want))
    if _leq(u_plus, u2) or _leq(v2_plus, v):
        return VerificationReport.from_residual("mops", params, RingElem.const(got))
    return VerificationReport("mops", {**params, "reason": "no claim"}, "skipped")


@dataclass(frozen=True)
class SymmetricBimoments:
    """One node grid with a symmetric coupling kernel and p weights."""

    nodes: Vec
    kernel: Tuple[Vec, ...]
    weights: Tuple[Vec, ...]

    def bimoment(self, i: int, j: int, k: int, l: int) -> Fraction:
        total = Fraction(0)
        for n, x in enumerate(self.nodes):
            wi = self.weights[i][n] * x ** k
            if wi == 0:
                continue
            row = self.kernel[n]
            for m, y in enumerate(self.nodes):
                sv = row[m]
                if sv:
                    total += wi * sv * self.weights[j][m] * y ** l
        return total


def symmetric_p_hat(sb: SymmetricBimoments, v: Sequence[int], b: int) -> List[Coeffs]:
    """Symmetric bi-orthogonal form, multiplied through, with block b widened."""
    cols = [(i, d) for i in range(len(v)) for d in range(v[i] + (1 if i == b else 0))]
    rows_ix = [(j, l) for j in range(len(v)) for l in range(v[j])]
    rows = [[sb.bimoment(i, j, d, l) for (i, d) in cols] for (j, l) in rows_ix]
    slot_coeffs = _cofactor_row_expansion(rows, len(cols))
    out: List[Coeffs] = [[Fraction(0)] * (v[i] + (1 if i == b else 0))
                         for i in range(len(v))]
    for (i, d), val in zip(cols, slot_coeffs):
        out[i][d] = val
    return out


def pair_symmetric(sb: SymmetricBimoments, p: List[Coeffs], q: List[Coeffs]) -> Fraction:
    total = Fraction(0)
    for i, ai in enumerate(p):
        for da, ca in enumerate(ai):
            if ca == 0:
                continue
            for j, bj in enumerate(q):
                for db, cb in enumerate(bj):
                    if cb:
                        total += ca * cb * sb.bimoment(i, j, da, db)
    return total


def _sym_tau(sb: SymmetricBimoments, v: Sequence[int]) -> Fraction:
    cols = [(i, d) for i in range(len(v)) for d in range(v[i])]
    rows = [[sb.bimoment(i, j, d, l) for (i, d) in cols] for (j, l) in cols]
    return determinant(rows)


def verify_symmetric(sb: SymmetricBimoments, v: Sequence[int], b: int,
                     v2: Sequence[int]) -> VerificationReport:
    """Symmetric bi-orthogonality: zero off the diagonal band, tau-product on it."""
    params = {"kind": "symmetric", "v": list(v), "b": b, "v'": list(v2)}
    v_plus = [x + (1 if i == b else 0) for i, x in enumerate(v)]
    v2_plus = [x + (1 if i == b else 0) for i, x in enumerate(v2)]
    p = symmetric_p_hat(sb, v, b)
    q = symmetric_p_hat(sb, v2, b)
    got = pair_symmetric(sb, p, q)
    if tuple(v) == tuple(v2):
        want = _sym_tau(sb, v) * _sym_tau(sb, v_plus)
        return VerificationReport.from_residual("mops", params,
                                                RingElem.const(got - want))
    if _leq(v_plus, v2) or _leq(v2_plus, v):
        return VerificationReport.from_residual("mops", params, RingElem.const(got))
    return VerificationReport("mops", {**params, "reason": "no claim"}, "skipped")


MOP_KINDS = ("typeI", "typeII", "mixed", "mbop", "symmetric")


def mop_solve(kind: str, system, **params):
    """Solve the defining linear system of the requested orthogonality kind.

    typeI/typeII take a `WeightFamily` and ``v``; mixed takes a
    `TwoWeightFamilies` with ``u, v``; mbop takes a `KernelBimoments` with
    ``u, v, a, b`` and returns the form pair; symmetric takes a
    `SymmetricBimoments` with ``v, b``.
    """
    if kind == "typeI":
        return type_i_coeffs(system, params["v"])
    if kind == "typeII":
        return type_ii_coeffs(system, params["v"])
    if kind == "mixed":
        return mixed_p_coeffs(system, params["u"], params["v"])
    if kind == "mbop":
        u, v, a, b = params["u"], params["v"], params["a"], params["b"]
        return mbop_p_hat(system, u, v, a, b), mbop_q_hat(system, u, v, a, b)
    if kind == "symmetric":
        return symmetric_p_hat(system, params["v"], params["b"])
    raise ValueError(f"unknown constructor kind {kind!r}")


def verify_mop_biorthogonality(kind: str, system, **params) -> VerificationReport:
    """Evaluate the pairing table of the requested kind as exact finite sums."""
    if kind in ("typeI", "typeII"):
        return verify_type_biorthogonality(system, params["v"], params["u"])
    if kind == "mixed":
        return verify_mixed_orthogonality(system, params["u"], params["v"],
                                          params["u2"], params["v2"])
    if kind == "mbop":
        return verify_mbop(system, params["u"], params["v"], params["a"], params["b"],
                           params["u2"], params["v2"])
    if kind == "symmetric":
        return verify_symmetric(system, params["v"], params["b"], params["v2"])
    raise ValueError(f"unknown constructor kind {kind!r}")


# -- seeded random systems for the verification suites -----------------------


def random_weight_family(seed: int, p: int, num_nodes: int) -> WeightFamily:
    rng = random.Random(seed)
    nodes = tuple(Fraction(x) for x in rng.sample(range(-8, 9), num_nodes))
    weights = tuple(tuple(Fraction(rng.randint(1, 6)) for _ in range(num_nodes))
                    for _ in range(p))
    return WeightFamily(nodes, weights)


def random_two_families(seed: int, p1: int, p2: int, num_nodes: int) -> TwoWeightFamilies:
    rng = random.Random(seed)
    nodes = tuple(Fraction(x) for x in rng.sample(range(-8, 9), num_nodes))
    w1 = tuple(tuple(Fraction(rng.randint(1, 6)) for _ in range(num_nodes))
               for _ in range(p1))
    w2 = tuple(tuple(Fraction(rng.randint(1, 6)) for _ in range(num_nodes))
               for _ in range(p2))
    return TwoWeightFamilies(nodes, w1, w2)


def random_kernel_bimoments(seed: int, p1: int, p2: int, n1: int, n2: int) -> KernelBimoments:
    rng = random.Random(seed)
    nodes1 = tuple(Fraction(x) for x in rng.sample(range(-8, 9), n1))
    nodes2 = tuple(Fraction(x) for x in rng.sample(range(-8, 9), n2))
    kernel = tuple(tuple(Fraction(rng.randint(-3, 3)) for _ in range(n2))
                   for _ in range(n1))
    w1 = tuple(tuple(Fraction(rng.randint(1, 6)) for _ in range(n1)) for _ in range(p1))
    w2 = tuple(tuple(Fraction(rng.randint(1, 6)) for _ in range(n2)) for _ in range(p2))
    return KernelBimoments(nodes1, nodes2, kernel, w1, w2)


def random_symmetric_bimoments(seed: int, p: int, num_nodes: int) -> SymmetricBimoments:
    rng = random.Random(seed)
    nodes = tuple(Fraction(x) for x in rng.sample(range(-8, 9), num_nodes))
    kernel = [[Fraction(0)] * num_nodes for _ in range(num_nodes)]
    for i in range(num_nodes):
        for j in range(i, num_nodes):
            val = Fraction(rng.randint(-3, 3))
            kernel[i][j] = val
            kernel[j][i] = val
    weights = tuple(tuple(Fraction(rng.randint(1, 6)) for _ in range(num_nodes))
                    for _ in range(p))
    return SymmetricBimoments(nodes, tuple(tuple(r) for r in kernel), weights)
