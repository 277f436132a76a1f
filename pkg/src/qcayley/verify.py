"""Randomized verification suites, one per proposition.

Each suite draws its own generator from ``SeedSequence([seed, crc32(id)])``
so results do not depend on execution order, and returns the worst
residual it saw against a fixed tolerance.  :func:`run_all` assembles the
report printed by ``qcayley verify``.
"""

from __future__ import annotations

import math
import zlib
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterator

import numpy as np

from . import sampling as smp
from .cayley import DEFAULT_LAMBDA, LambdaParam, basis_compatible, cayley, cayley_invariance, gen_remark, inverse_cayley, left_mult_gap, self_adjoint_iff_unitary
from .embed import chi, chi_inv, least_singular_value, orthocomplement, qinv, rank_h, same_span
from .errors import RangeNotDense
from .hspace import HilbertBasis, QMatrix, QVector, expand, inner, left_mul, polarization, reconstruct
from .qop import (
    Operator,
    PartialOperator,
    classify,
    extends,
    frame_and_action,
    is_antisymmetric,
    is_isometric,
    is_self_adjoint,
    is_symmetric,
    op_scalar_left,
    op_scalar_right,
    operator_deviation,
    shifted_action,
)
from .quat import I, J, K, ONE, Quaternion, hamilton, in_sphere_S, q_inv, q_mul, qabs2, qconj
from .spectral import defect_number, deficiency_index, in_point_s_spectrum, iso_indices, pseudo_resolvent, regular_point, s_spectrum

__all__ = ["SuiteResult", "Context", "SUITES", "PROPOSITIONS", "run_suite", "run_all"]

#: Results that must each have exactly one suite in a report.
PROPOSITIONS = (
    "quat_algebra", "inner_axioms", "P1", "P2", "polar", "Ad1",
    "lft_mul", "lft_mul_op", "sc_mul_aj_op", "N_S_sym",
    "preqn_a", "preqn_b", "preqn_c", "csadj_gen",
    "reg_pt", "pre_set_a", "pre_set_c", "def_con", "pr01", "pr01_rho",
    "Pr2", "pr00_resol", "pr00_neq1", "pr00_rho",
    "Gen_Von_neq", "def_minus", "iso_a", "iso_b", "iso_d", "def_int_ext",
    "Lemma_d_ie", "Lemma_I_U", "Cay1_Cay2", "Cay_Prn_a", "Cay_Prn_b",
    "Cay_Prn_d", "Cay_Prn_e", "Cay_inv", "Cay_Prn1", "ess_Cay",
    "Remark_A_theta", "cor_sa_unitary", "cor1",
    "Lcurl_Lfrak", "Pro_lft", "basis_invariance",
)


@dataclass
class SuiteResult:
    trials: int = 0
    max_residual: float = 0.0
    tol: float = 0.0
    failures: int = 0
    measured: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.failures == 0 and self.trials > 0

    def residual(self, r: float) -> None:
        r = float(r)
        if math.isnan(r) or r > self.max_residual:
            self.max_residual = r
        if not r <= self.tol:
            self.failures += 1

    def check(self, ok: bool) -> None:
        if not ok:
            self.failures += 1

    def to_json(self) -> dict:
        out = {
            "trials": self.trials,
            "max_residual": self.max_residual,
            "tol": self.tol,
            "failures": self.failures,
            "passed": self.passed,
        }
        if self.measured:
            out["measured"] = self.measured
        return out


@dataclass
class Context:
    rng: np.random.Generator
    trials: int
    lam: LambdaParam = DEFAULT_LAMBDA
    extra: list = field(default_factory=list)

    def loop(self, res: SuiteResult, count: int | None = None) -> Iterator[int]:
        for t in range(self.trials if count is None else count):
            res.trials += 1
            yield t


SUITES: dict[str, Callable[[Context], SuiteResult]] = {}


def suite(name: str, tol: float):
    def register(fn):
        if name in SUITES:
            raise RuntimeError(f"suite {name!r} registered twice")

        def run(ctx: Context) -> SuiteResult:
            res = SuiteResult(tol=tol)
            fn(ctx, res)
            return res

        run.__name__ = fn.__name__
        run.__doc__ = fn.__doc__
        SUITES[name] = run
        return fn

    return register


# --- shared generators -----------------------------------------------------


def _maybe_basis(rng, n) -> HilbertBasis:
    return smp.basis(rng, n) if rng.random() < 0.5 else HilbertBasis.standard(n)


def _dense_y(rng, max_n=6) -> tuple[QMatrix, HilbertBasis]:
    n = int(rng.integers(1, max_n + 1))
    b = _maybe_basis(rng, n)
    return smp.class_y(rng, n, b), b


def _partial_y(rng, max_n=6) -> tuple[PartialOperator, HilbertBasis]:
    n = int(rng.integers(2, max_n + 1))
    d = int(rng.integers(1, n + 1))
    b = _maybe_basis(rng, n)
    return smp.partial_class_y(rng, n, d, b), b


def _any_y(ctx: Context, t: int) -> tuple[Operator, HilbertBasis]:
    if t < len(ctx.extra):
        return ctx.extra[t]
    return _dense_y(ctx.rng) if t % 2 == 0 else _partial_y(ctx.rng)


def _y_count(ctx: Context) -> int:
    return ctx.trials + len(ctx.extra)


def _domain_vector(rng, a: Operator) -> QVector:
    dom, _ = frame_and_action(a)
    return dom @ smp.vector(rng, dom.shape[1])


def _isometry(rng, t: int, max_n=6) -> Operator:
    n = int(rng.integers(2, max_n + 1))
    if t % 2 == 0:
        return smp.unitary(rng, n)
    return smp.partial_isometry(rng, n, int(rng.integers(1, n + 1)))


def _qdiff(a: Quaternion, b: Quaternion) -> float:
    return abs(a - b)


def _mu(rng, inside: bool) -> Quaternion:
    u = smp.quaternion(rng)
    u = u / abs(u)
    r = rng.uniform(0.0, 0.9) if inside else rng.uniform(1.1, 3.0)
    return u * r


# --- quaternions and the Hilbert space ---------------------------------------


@suite("quat_algebra", tol=1e-12)
def _quat_algebra(ctx, res):
    """Unit table, associativity, norm multiplicativity, inverses, the sphere S."""
    table = {(I, J): K, (J, K): I, (K, I): J, (J, I): -K, (K, J): -I, (I, K): -J,
             (I, I): -ONE, (J, J): -ONE, (K, K): -ONE}
    for (a, b), c in table.items():
        res.check(q_mul(a, b) == c)
    rng = ctx.rng
    for _ in ctx.loop(res):
        a, b, c = smp.quaternion(rng), smp.quaternion(rng), smp.quaternion(rng)
        scale = abs(a) * abs(b) * abs(c)
        res.residual(_qdiff((a * b) * c, a * (b * c)) / scale)
        res.residual(abs(abs(a * b) - abs(a) * abs(b)) / (abs(a) * abs(b)))
        res.residual(_qdiff((a * b).conj(), b.conj() * a.conj()) / (abs(a) * abs(b)))
        res.residual(_qdiff(a * q_inv(a), ONE))
        res.residual(_qdiff(q_inv(a) * a, ONE))
        u = smp.unit_imaginary(rng)
        res.residual(_qdiff(u * u, -ONE))
        res.check(in_sphere_S(u, 1e-12))


@suite("inner_axioms", tol=1e-11)
def _inner_axioms(ctx, res):
    rng = ctx.rng
    for _ in ctx.loop(res):
        n = int(rng.integers(1, 9))
        phi, psi, om = smp.vector(rng, n), smp.vector(rng, n), smp.vector(rng, n)
        q = smp.quaternion(rng)
        res.residual(_qdiff(inner(phi, psi).conj(), inner(psi, phi)))
        pp = inner(phi, phi)
        res.residual(pp.imag_norm())
        res.check(pp.w > 0)
        res.residual(_qdiff(inner(phi, psi + om), inner(phi, psi) + inner(phi, om)))
        res.residual(_qdiff(inner(phi, psi * q), inner(phi, psi) * q))
        res.residual(_qdiff(inner(phi * q, psi), q.conj() * inner(phi, psi)))
    res.check(inner(QVector.zeros(3), QVector.zeros(3)) == Quaternion())


@suite("P1", tol=1e-10)
def _p1(ctx, res):
    """Parseval, the two-sided expansion of <phi|psi>, and O^perp = {0}."""
    rng = ctx.rng
    for _ in ctx.loop(res):
        n = int(rng.integers(1, 9))
        b = smp.basis(rng, n)
        phi, psi = smp.vector(rng, n), smp.vector(rng, n)
        cols = b.columns
        total = sum((inner(phi, c) * inner(c, psi) for c in cols), Quaternion())
        res.residual(_qdiff(total, inner(phi, psi)))
        parseval = sum(abs(c) ** 2 for c in expand(phi, b))
        res.residual(abs(parseval - phi.norm() ** 2))
        res.check(orthocomplement(b.matrix) is None)


@suite("P2", tol=1e-10)
def _p2(ctx, res):
    """Reconstruction from coefficients and uniqueness of the coefficients."""
    rng = ctx.rng
    for _ in ctx.loop(res):
        n = int(rng.integers(1, 9))
        b = smp.basis(rng, n)
        phi = smp.vector(rng, n)
        res.residual(reconstruct(expand(phi, b), b).max_abs_diff(phi))
        coeffs = [smp.quaternion(rng) for _ in range(n)]
        back = expand(reconstruct(coeffs, b), b)
        res.residual(max(_qdiff(x, y) for x, y in zip(back, coeffs)))


@suite("polar", tol=1e-10)
def _polar(ctx, res):
    rng = ctx.rng
    for _ in ctx.loop(res):
        n = int(rng.integers(1, 9))
        phi, psi = smp.vector(rng, n), smp.vector(rng, n)
        res.residual(_qdiff(polarization(phi, psi), inner(phi, psi)))


@suite("Ad1", tol=1e-11)
def _ad1(ctx, res):
    rng = ctx.rng
    for _ in ctx.loop(res):
        n = int(rng.integers(1, 9))
        a = smp.matrix(rng, n)
        phi, psi = smp.vector(rng, n), smp.vector(rng, n)
        res.residual(_qdiff(inner(psi, a @ phi), inner(a.H @ psi, phi)))
        res.residual(a.H.H.max_abs_diff(a))
        # uniqueness: entries are pinned down by the identity on unit vectors
        k, l = int(rng.integers(n)), int(rng.integers(n))
        ek, el = QVector.unit(n, k), QVector.unit(n, l)
        res.residual(_qdiff(a.H[k, l], inner(ek, a.H @ el)))
        res.residual(_qdiff(inner(el, a @ ek), inner(a.H @ el, ek)))


@suite("lft_mul", tol=1e-11)
def _lft_mul(ctx, res):
    """Left product laws (a)-(f) and additivity in the scalar."""
    rng = ctx.rng
    for _ in ctx.loop(res):
        n = int(rng.integers(1, 9))
        b = smp.basis(rng, n)
        q, p = smp.quaternion(rng), smp.quaternion(rng)
        phi, psi = smp.vector(rng, n), smp.vector(rng, n)

        def L(s, v):
            return left_mul(s, v, b)

        res.residual((L(q, phi + psi) - L(q, phi) - L(q, psi)).norm())
        res.residual(L(q, phi * p).max_abs_diff(L(q, phi) * p))
        res.residual(abs(L(q, phi).norm() - abs(q) * phi.norm()))
        res.residual(L(q, L(p, phi)).max_abs_diff(L(q * p, phi)))
        res.residual(_qdiff(inner(L(q.conj(), phi), psi), inner(phi, L(q, psi))))
        r = float(rng.normal())
        res.residual(L(r, phi).max_abs_diff(phi * r))
        k = int(rng.integers(n))
        res.residual(L(q, b.columns[k]).max_abs_diff(b.columns[k] * q))
        res.residual(L(p + q, phi).max_abs_diff(L(p, phi) + L(q, phi)))


@suite("lft_mul_op", tol=1e-11)
def _lft_mul_op(ctx, res):
    """Matrices of qA and Aq act as phi -> q(A phi) and phi -> A(q phi)."""
    rng = ctx.rng
    for t in ctx.loop(res):
        n = int(rng.integers(1, 7))
        b = smp.basis(rng, n)
        q = smp.quaternion(rng)
        a = smp.matrix(rng, n)
        phi = smp.vector(rng, n)
        res.residual((op_scalar_left(q, a, b) @ phi).max_abs_diff(left_mul(q, a @ phi, b)))
        res.residual((op_scalar_right(a, q, b) @ phi).max_abs_diff(a @ left_mul(q, phi, b)))
        p, pb = _partial_y(rng)
        v = _domain_vector(rng, p)
        res.residual(op_scalar_left(q, p, pb).apply(v).max_abs_diff(left_mul(q, p.apply(v), pb)))
        res.residual(op_scalar_right(p, q, pb).apply(v).max_abs_diff(p.apply(left_mul(q, v, pb))))


@suite("sc_mul_aj_op", tol=1e-11)
def _sc_mul_aj_op(ctx, res):
    """(qA)^H = A^H conj(q) and (Aq)^H = conj(q) A^H."""
    rng = ctx.rng
    for _ in ctx.loop(res):
        n = int(rng.integers(1, 7))
        b = _maybe_basis(rng, n)
        q = smp.quaternion(rng)
        a = smp.matrix(rng, n)
        res.residual(op_scalar_left(q, a, b).H.max_abs_diff(op_scalar_right(a.H, q.conj(), b)))
        res.residual(op_scalar_right(a, q, b).H.max_abs_diff(op_scalar_left(q.conj(), a.H, b)))


@suite("N_S_sym", tol=1e-10)
def _n_s_sym(ctx, res):
    """Symmetric iff <A phi|phi> is real for all phi in the domain."""
    rng = ctx.rng
    for t in ctx.loop(res):
        n = int(rng.integers(1, 7))
        if t % 3 == 0:
            a = smp.hermitian(rng, n)
        elif t % 3 == 1:
            a = smp.matrix(rng, n)
        else:
            a = _partial_y(rng)[0] if rng.random() < 0.5 else smp.partial_operator(rng, n + 1, 1 + n // 2)
        dom, act = frame_and_action(a)
        coeffs = QMatrix(rng.normal(size=(dom.shape[1], 200, 4)))
        phis, aphis = (dom @ coeffs).data, (act @ coeffs).data
        # <A phi|phi> for all 200 probes at once
        vals = hamilton(qconj(aphis), phis).sum(axis=0)
        worst = float((np.linalg.norm(vals[:, 1:], axis=1) / np.maximum(1.0, qabs2(phis).sum(axis=0))).max())
        sym = is_symmetric(a)
        res.check(sym == (worst <= 1e-10))
        if sym:
            res.residual(worst)


# --- norm identities and self-adjointness ----------------------------------------


def _norm2(v: QVector) -> float:
    return v.norm() ** 2


def _apply(a: Operator, v: QVector) -> QVector:
    return a.apply(v) if isinstance(a, PartialOperator) else a @ v


def _shift_apply(a: Operator, q, b: HilbertBasis, v: QVector) -> QVector:
    return _apply(a, v) - left_mul(q, v, b)


@suite("preqn_a", tol=1e-9)
def _preqn_a(ctx, res):
    rng = ctx.rng
    for t in ctx.loop(res, _y_count(ctx)):
        a, b = _any_y(ctx, t)
        q = smp.nonreal_quaternion(rng)
        phi = _domain_vector(rng, a)
        lhs = _norm2(_shift_apply(a, q, b, phi))
        rhs = _norm2(_shift_apply(a, q.w, b, phi)) + q.imag_norm() ** 2 * _norm2(phi)
        res.residual(abs(lhs - rhs) / max(1.0, rhs))
        if isinstance(a, QMatrix):
            qa = op_scalar_left(q, a, b)
            res.residual(qa.H.max_abs_diff(op_scalar_left(q.conj(), a, b)))
            res.residual(qa.max_abs_diff(op_scalar_right(a, q, b)))


def _pure_imag(rng) -> Quaternion:
    return smp.unit_imaginary(rng) * float(rng.uniform(0.2, 3.0))


@suite("preqn_b", tol=1e-9)
def _preqn_b(ctx, res):
    """If qA is anti-symmetric: |(A - conj(q))phi|^2 = |A phi|^2 + |q|^2 |phi|^2."""
    rng = ctx.rng
    for t in ctx.loop(res, _y_count(ctx)):
        a, b = _any_y(ctx, t)
        q = _pure_imag(rng)
        res.check(is_antisymmetric(op_scalar_left(q, a, b)))
        phi = _domain_vector(rng, a)
        lhs = _norm2(_shift_apply(a, q.conj(), b, phi))
        rhs = _norm2(_apply(a, phi)) + q.norm2() * _norm2(phi)
        res.residual(abs(lhs - rhs) / max(1.0, rhs))


@suite("preqn_c", tol=1e-9)
def _preqn_c(ctx, res):
    """If conj(q)A is anti-symmetric: |(A - q)phi|^2 = |A phi|^2 + |q|^2 |phi|^2."""
    rng = ctx.rng
    for t in ctx.loop(res, _y_count(ctx)):
        a, b = _any_y(ctx, t)
        q = _pure_imag(rng)
        res.check(is_antisymmetric(op_scalar_left(q.conj(), a, b)))
        phi = _domain_vector(rng, a)
        lhs = _norm2(_shift_apply(a, q, b, phi))
        rhs = _norm2(_apply(a, phi)) + q.norm2() * _norm2(phi)
        res.residual(abs(lhs - rhs) / max(1.0, rhs))


@suite("csadj_gen", tol=1e-9)
def _csadj_gen(ctx, res):
    """Self-adjoint <=> trivial kernels of A^H - q, A^H - conj(q) <=> both ranges full."""
    rng = ctx.rng
    for t in ctx.loop(res, _y_count(ctx)):
        a, b = _any_y(ctx, t)
        q = smp.nonreal_quaternion(rng)
        n = a.n if isinstance(a, PartialOperator) else a.shape[0]
        ran_q = shifted_action(a, q, b)
        ran_qc = shifted_action(a, q.conj(), b)
        sa = is_self_adjoint(a)
        # ker(A^H - q) = ran(A - conj(q))^perp
        kernels_trivial = orthocomplement(ran_qc) is None and orthocomplement(ran_q) is None
        ranges_full = rank_h(ran_q) == n and rank_h(ran_qc) == n
        res.check(sa == kernels_trivial == ranges_full)


# --- regular points, defect numbers, S-spectrum -------------------------------


def _any_operator(rng, t: int) -> tuple[Operator, HilbertBasis]:
    kind = t % 4
    if kind == 0:
        return _dense_y(rng)
    if kind == 1:
        return _partial_y(rng)
    n = int(rng.integers(2, 7))
    b = _maybe_basis(rng, n)
    if kind == 2:
        return smp.matrix(rng, n), b
    return smp.partial_operator(rng, n, int(rng.integers(1, n + 1))), b


@suite("reg_pt", tol=1e-9)
def _reg_pt(ctx, res):
    """|(A - qI)phi| >= c_q |phi| on the domain, and c_q is attained."""
    rng = ctx.rng
    for t in ctx.loop(res):
        a, b = _any_operator(rng, t)
        q = smp.quaternion(rng)
        cert = regular_point(a, q, b)
        for _ in range(20):
            phi = _domain_vector(rng, a)
            ratio = _shift_apply(a, q, b, phi).norm() / phi.norm()
            res.residual(max(0.0, cert.c_q - ratio))
        # the least right singular vector of chi(A - qI) attains the bound
        c = chi(shifted_action(a, q, b))
        v = np.linalg.svd(c)[2].conj()[-1]
        res.residual(abs(np.linalg.norm(c @ v) - cert.c_q))


@suite("pre_set_a", tol=1e-9)
def _pre_set_a(ctx, res):
    """Balls of radius c_q0 around regular points stay regular."""
    rng = ctx.rng
    for t in ctx.loop(res):
        a, b = _any_operator(rng, t)
        q0 = smp.quaternion(rng)
        c0 = regular_point(a, q0, b)
        if not c0.is_regular:
            continue
        for _ in range(10):
            step = smp.quaternion(rng)
            q = q0 + step * (rng.uniform(0, 0.99) * c0.c_q / abs(step))
            c = regular_point(a, q, b)
            res.check(c.is_regular)
            res.residual(max(0.0, c0.c_q - abs(q - q0) - c.c_q))


@suite("pre_set_c", tol=1e-9)
def _pre_set_c(ctx, res):
    """ran(A - qI) is closed: it and its complement span H^n orthogonally."""
    rng = ctx.rng
    for t in ctx.loop(res):
        a, b = _any_operator(rng, t)
        q = smp.nonreal_quaternion(rng)
        m = shifted_action(a, q, b)
        n = m.shape[0]
        comp = orthocomplement(m)
        if comp is None:
            res.check(rank_h(m) == n)
            continue
        res.residual((comp.H @ m).max_abs() / max(1.0, m.max_abs()))
        res.check(rank_h(QMatrix.hstack(m, comp)) == n)
        res.check(comp.shape[1] == defect_number(a, q, b).d_q)


@suite("def_con", tol=0.0)
def _def_con(ctx, res):
    """Defect number constant on balls inside the regular domain."""
    rng = ctx.rng
    balls = min(ctx.trials, 20)
    per_ball = max(5, min(100, ctx.trials))
    disagreements = 0
    for t in ctx.loop(res, balls):
        a, b = _any_operator(rng, t)
        q0 = smp.nonreal_quaternion(rng)
        rep0 = defect_number(a, q0, b)
        if not rep0.regular:
            continue
        for _ in range(per_ball):
            step = smp.quaternion(rng)
            q = q0 + step * (rng.uniform(0, 0.99) * rep0.c_q / abs(step))
            rep = defect_number(a, q, b)
            if rep.d_q != rep0.d_q or not rep.regular:
                disagreements += 1
    res.residual(disagreements)
    res.measured["samples_per_ball"] = per_ball


def _symmetric_corpus(rng, t: int, lam: Quaternion) -> tuple[Operator, HilbertBasis, Quaternion]:
    kind = t % 4
    if kind == 0:
        a, b = _dense_y(rng)
        return a, b, lam
    if kind == 1:
        n = int(rng.integers(1, 7))
        return smp.hermitian(rng, n), HilbertBasis.standard(n), smp.nonreal_quaternion(rng)
    a, b = _partial_y(rng)
    if kind == 3:
        n = a.n
        a = smp.partial_class_y(rng, n, n, b)
    return a, b, lam


@suite("pr01", tol=0.0)
def _pr01(ctx, res):
    """d_q = d_conj(q) = 0 <=> self-adjoint, for symmetric A with q, conj(q) regular."""
    rng = ctx.rng
    skipped = 0
    for t in ctx.loop(res):
        a, b, q = _symmetric_corpus(rng, t, ctx.lam.value)
        r1, r2 = defect_number(a, q, b), defect_number(a, q.conj(), b)
        if not (r1.regular and r2.regular):
            skipped += 1
            continue
        res.check(((r1.d_q == 0) and (r2.d_q == 0)) == is_self_adjoint(a))
    res.measured["skipped_nonregular"] = skipped


@suite("pr01_rho", tol=0.0)
def _pr01_rho(ctx, res):
    """q, conj(q) regular with zero defect => q in the S-resolvent set."""
    rng = ctx.rng
    for t in ctx.loop(res):
        a, b = _dense_y(rng) if t % 2 == 0 else (smp.hermitian(rng, int(rng.integers(1, 7))), None)
        n = a.shape[0]
        b = b or HilbertBasis.standard(n)
        q = smp.quaternion(rng)
        r1, r2 = defect_number(a, q, b), defect_number(a, q.conj(), b)
        if r1.regular and r2.regular and r1.d_q == 0 and r2.d_q == 0:
            res.check(not in_point_s_spectrum(a, q))


@suite("Pr2", tol=1e-9)
def _pr2(ctx, res):
    """Self-adjoint => S-spectrum real; for real symmetric it is the usual spectrum."""
    rng = ctx.rng
    for t in ctx.loop(res):
        n = int(rng.integers(1, 9))
        if t % 2 == 0:
            s = smp.real_symmetric(rng, n)
            spheres = s_spectrum(QMatrix.from_real(s))
            eig = np.linalg.eigvalsh(s)
            res.check(len(spheres) == len(eig))
            for sp, e in zip(spheres, eig):
                res.residual(abs(sp.re - e))
        else:
            spheres = s_spectrum(smp.hermitian(rng, n))
        for sp in spheres:
            res.residual(sp.im_norm)


@suite("pr00_resol", tol=1e-10)
def _pr00_resol(ctx, res):
    rng = ctx.rng
    for t in ctx.loop(res):
        a, b = _dense_y(rng)
        q = smp.quaternion(rng)
        aq = a - b.left_matrix(q)
        aqc = a - b.left_matrix(q.conj())
        half = 0.5 * (aq @ aqc + aqc @ aq)
        scale = max(1.0, (a @ a).max_abs(), q.norm2())
        res.residual(pseudo_resolvent(a, q).max_abs_diff(half) / scale)


@suite("pr00_neq1", tol=1e-9)
def _pr00_neq1(ctx, res):
    """|Q_q(A)phi| |phi| >= (|(A - conj q)phi|^2 + |(A - q)phi|^2) / 2."""
    rng = ctx.rng
    for t in ctx.loop(res):
        a, b = _dense_y(rng)
        q = smp.quaternion(rng)
        phi = smp.vector(rng, a.shape[0])
        lhs = (pseudo_resolvent(a, q) @ phi).norm() * phi.norm()
        rhs = 0.5 * (_norm2(_shift_apply(a, q.conj(), b, phi)) + _norm2(_shift_apply(a, q, b, phi)))
        res.residual(max(0.0, rhs - lhs) / max(1.0, rhs))


@suite("pr00_rho", tol=0.0)
def _pr00_rho(ctx, res):
    """Regular points of a class-Y operator lie off the S-spectrum."""
    rng = ctx.rng
    for t in ctx.loop(res):
        a, b = _dense_y(rng)
        spheres = s_spectrum(a)
        for _ in range(10):
            q = smp.quaternion(rng)
            if regular_point(a, q, b).is_regular:
                res.check(not in_point_s_spectrum(a, q))
                res.check(all(sp.distance(q) > 1e-9 for sp in spheres))
        # spectrum points themselves are not regular
        sp = spheres[int(rng.integers(len(spheres)))]
        res.check(not regular_point(a, sp.representative(), b).is_regular)


@suite("Gen_Von_neq", tol=1e-9)
def _gen_von_neq(ctx, res):
    """Non-real quaternions are regular with c_q >= |Im q|."""
    rng = ctx.rng
    for t in ctx.loop(res, _y_count(ctx)):
        a, b = _any_y(ctx, t)
        q = smp.nonreal_quaternion(rng)
        cert = regular_point(a, q, b)
        res.check(cert.is_regular)
        res.residual(max(0.0, q.imag_norm() - cert.c_q))


@suite("def_minus", tol=0.0)
def _def_minus(ctx, res):
    """n(A) = d_lam = d_conj(lam); equals n - dim D(A)."""
    for t in ctx.loop(res, _y_count(ctx)):
        a, b = _any_y(ctx, t)
        n_a = deficiency_index(a, ctx.lam, b)
        res.check(n_a == defect_number(a, ctx.lam.conj, b).d_q)
        dom, _ = frame_and_action(a)
        res.check(n_a == dom.shape[0] - dom.shape[1])


# --- isometries ----------------------------------------------------------------


@suite("iso_a", tol=1e-10)
def _iso_a(ctx, res):
    rng = ctx.rng
    for t in ctx.loop(res):
        u = _isometry(rng, t)
        phi, psi = _domain_vector(rng, u), _domain_vector(rng, u)
        res.residual(_qdiff(inner(_apply(u, phi), _apply(u, psi)), inner(phi, psi)))


@suite("iso_b", tol=1e-9)
def _iso_b(ctx, res):
    """U is invertible on its range and U^{-1} is isometric."""
    rng = ctx.rng
    for t in ctx.loop(res):
        u = _isometry(rng, t)
        if isinstance(u, QMatrix):
            inv = qinv(u)
            res.check(is_isometric(inv))
            res.residual((inv @ u).max_abs_diff(QMatrix.identity(u.shape[0])))
        else:
            inv = PartialOperator(u.action, u.domain_frame)
            res.check(is_isometric(inv))
            phi = _domain_vector(rng, u)
            res.residual(inv.apply(u.apply(phi)).max_abs_diff(phi))


@suite("iso_d", tol=1e-9)
def _iso_d(ctx, res):
    """|(U - mu)phi| >= |1 - |mu|| |phi| off the unit sphere."""
    rng = ctx.rng
    for t in ctx.loop(res):
        u = _isometry(rng, t)
        mu = _mu(rng, inside=bool(t % 2))
        cert = regular_point(u, mu)
        res.check(cert.is_regular)
        res.residual(max(0.0, abs(1.0 - abs(mu)) - cert.c_q))


@suite("def_int_ext", tol=0.0)
def _def_int_ext(ctx, res):
    """Defect numbers are constant inside and outside the unit sphere."""
    rng = ctx.rng
    for t in ctx.loop(res):
        u = _isometry(rng, t)
        inside = {defect_number(u, _mu(rng, True)).d_q for _ in range(5)}
        outside = {defect_number(u, _mu(rng, False)).d_q for _ in range(5)}
        res.check(len(inside) == 1 and len(outside) == 1)


def _complement_dim(frame: QMatrix) -> int:
    comp = orthocomplement(frame)
    return 0 if comp is None else comp.shape[1]


@suite("Lemma_d_ie", tol=0.0)
def _lemma_d_ie(ctx, res):
    """d^i = dim ran(U)^perp and d^e = dim D(U)^perp."""
    rng = ctx.rng
    e1, e2 = QVector.unit(2, 0), QVector.unit(2, 1)
    shift = PartialOperator(e1.as_column(), e2.as_column())
    res.check(iso_indices(shift) == (1, 1))
    for t in ctx.loop(res):
        u = _isometry(rng, t)
        dom, act = frame_and_action(u)
        d_i, d_e = iso_indices(u)
        res.check(d_i == _complement_dim(act))
        res.check(d_e == _complement_dim(dom))
        res.check(defect_number(u, _mu(rng, True)).d_q == d_i)
        res.check(defect_number(u, _mu(rng, False)).d_q == d_e)


def _unitary_with_fixed_vector(rng, n: int) -> QMatrix:
    w = smp.unitary(rng, n)
    inner_u = smp.unitary(rng, n - 1).data if n > 1 else np.zeros((0, 0, 4))
    block = np.zeros((n, n, 4))
    block[0, 0, 0] = 1.0
    block[1:, 1:] = inner_u
    return w @ QMatrix(block) @ w.H


@suite("Lemma_I_U", tol=1e-9)
def _lemma_i_u(ctx, res):
    """ran(I - U) dense => ker(I - U) = {0}; fixed vectors are orthogonal to ran(I - U)."""
    rng = ctx.rng
    for t in ctx.loop(res):
        n = int(rng.integers(1, 7))
        u = smp.unitary(rng, n) if t % 2 == 0 else _unitary_with_fixed_vector(rng, n)
        m = QMatrix.identity(n) - u
        dense = rank_h(m, scale=1.0) == n
        res.check(dense == (least_singular_value(m) > 1e-9))
        if not dense:
            comp = orthocomplement(m.H, scale=1.0)  # ker(I - U) = ran((I - U)^H)^perp
            for phi in comp.columns():
                psi = smp.vector(rng, n)
                res.residual(abs(inner(m @ psi, phi)))


# --- Cayley transform --------------------------------------------------------------


@suite("Cay1_Cay2", tol=1e-10)
def _cay1_cay2(ctx, res):
    rng = ctx.rng
    lam = ctx.lam
    for t in ctx.loop(res, _y_count(ctx)):
        a, b = _any_y(ctx, t)
        u = cayley(a, lam, b).transform
        phi = _domain_vector(rng, a)
        psi = _shift_apply(a, lam.conj, b, phi)
        scale = max(1.0, psi.norm())
        res.residual(_apply(u, psi).max_abs_diff(_shift_apply(a, lam.value, b, phi)) / scale)
        dom_u, _ = frame_and_action(u)
        res.check(same_span(dom_u, shifted_action(a, lam.conj, b)))


@suite("Cay_Prn_a", tol=1e-9)
def _cay_prn_a(ctx, res):
    """U_A isometric with D(U_A) = ran(A - conj lam), ran(U_A) = ran(A - lam)."""
    rng = ctx.rng
    for t in ctx.loop(res, _y_count(ctx)):
        a, b = _any_y(ctx, t)
        pair = cayley(a, ctx.lam, b)
        res.residual(pair.residuals["isometry"])
        dom_u, act_u = frame_and_action(pair.transform)
        res.check(same_span(dom_u, shifted_action(a, ctx.lam.conj, b)))
        res.check(same_span(act_u, shifted_action(a, ctx.lam.value, b)))
        psi = _domain_vector(rng, pair.transform)
        res.residual(abs(_apply(pair.transform, psi).norm() - psi.norm()))


@suite("Cay_Prn_b", tol=1e-8)
def _cay_prn_b(ctx, res):
    """ran(I - U_A) = D(A), the two intermediate identities, and A = A_{U_A}."""
    rng = ctx.rng
    lam = ctx.lam
    for t in ctx.loop(res, _y_count(ctx)):
        a, b = _any_y(ctx, t)
        u = cayley(a, lam, b).transform
        dom_u, act_u = frame_and_action(u)
        dom_a, _ = frame_and_action(a)
        res.check(same_span(dom_u - act_u, dom_a))
        phi = _domain_vector(rng, a)
        psi = _shift_apply(a, lam.conj, b, phi)
        u_psi = _apply(u, psi)
        diff = lam.value - lam.conj
        scale = max(1.0, psi.norm(), _apply(a, phi).norm())
        res.residual((psi - u_psi).max_abs_diff(left_mul(diff, phi, b)) / scale)
        lhs = left_mul(lam.value, psi, b) - left_mul(lam.conj, u_psi, b)
        res.residual(lhs.max_abs_diff(left_mul(diff, _apply(a, phi), b)) / scale)
        back = inverse_cayley(u, lam, b)
        res.residual(operator_deviation(a, back))


def _restriction_pair(rng) -> tuple[PartialOperator, Operator, HilbertBasis]:
    """Class-Y A inside a class-Y B (B dense or partial with larger domain)."""
    n = int(rng.integers(2, 7))
    b = _maybe_basis(rng, n)
    s = smp.real_symmetric(rng, n)
    q = smp.real_orthogonal(rng, n)
    d_big = int(rng.integers(1, n + 1))
    d_small = int(rng.integers(1, d_big + 1))
    big = QMatrix.from_real(s)
    small = PartialOperator.restrict(big, QMatrix.from_real(q[:, :d_small]))
    if d_big < n:
        big = PartialOperator.restrict(big, QMatrix.from_real(q[:, :d_big]))
    bm = b.matrix
    if isinstance(big, QMatrix):
        big_b = bm @ big @ bm.H
    else:
        big_b = PartialOperator(bm @ big.domain_frame, bm @ big.action)
    small_b = PartialOperator(bm @ small.domain_frame, bm @ small.action)
    return small_b, big_b, b


@suite("Cay_Prn_d", tol=0.0)
def _cay_prn_d(ctx, res):
    """A subset B <=> U_A subset U_B."""
    rng = ctx.rng
    for t in ctx.loop(res):
        a, big, b = _restriction_pair(rng)
        if t % 2 == 1:
            # perturb A so it is no longer a restriction of B
            extra = PartialOperator.restrict(QMatrix.from_real(smp.real_symmetric(rng, a.n)),
                                             QMatrix.from_real(smp.real_orthogonal(rng, a.n)[:, : a.d]))
            a = PartialOperator(b.matrix @ extra.domain_frame, b.matrix @ extra.action)
        ua = cayley(a, ctx.lam, b).transform
        ub = cayley(big, ctx.lam, b).transform
        res.check(extends(big, a) == extends(ub, ua))


@suite("Cay_Prn_e", tol=0.0)
def _cay_prn_e(ctx, res):
    for t in ctx.loop(res, _y_count(ctx)):
        a, b = _any_y(ctx, t)
        u = cayley(a, ctx.lam, b).transform
        d_i, d_e = iso_indices(u)
        n_a = deficiency_index(a, ctx.lam, b)
        res.check(d_i == d_e == n_a)


@suite("Cay_inv", tol=1e-9)
def _cay_inv(ctx, res):
    """A_U (I - U) psi = (lam - conj(lam) U) psi on D(U)."""
    rng = ctx.rng
    lam = ctx.lam
    for t in ctx.loop(res):
        u = _isometry(rng, t)
        n = u.n if isinstance(u, PartialOperator) else u.shape[0]
        b = _maybe_basis(rng, n)
        try:
            a_u = inverse_cayley(u, lam, b)
        except RangeNotDense:
            res.check(False)
            continue
        psi = _domain_vector(rng, u)
        u_psi = _apply(u, psi)
        lhs = _apply(a_u, psi - u_psi)
        rhs = left_mul(lam.value, psi, b) - left_mul(lam.conj, u_psi, b)
        res.residual(lhs.max_abs_diff(rhs) / max(1.0, rhs.norm()))


def _symmetric_isometry(rng, t: int) -> tuple[Operator, HilbertBasis]:
    """Symmetric isometry in class X with I - U injective on D(U)."""
    n = int(rng.integers(2, 8))
    b = _maybe_basis(rng, n)
    if t % 3 == 0:
        return QMatrix.identity(n) * -1.0, b
    d = int(rng.integers(1, n // 2 + 1))
    q = smp.real_orthogonal(rng, n)
    dom, perp = q[:, :d], q[:, d:]
    w, v = np.linalg.eigh(smp.real_symmetric(rng, d))
    s = (v * np.tanh(w)) @ v.T  # symmetric, spectrum inside (-1, 1)
    wv, vv = np.linalg.eigh(np.eye(d) - s @ s)
    k = (vv * np.sqrt(np.clip(wv, 0.0, None))) @ vv.T
    act = dom @ s + perp[:, :d] @ k
    frame = b.matrix @ QMatrix.from_real(dom)
    action = b.matrix @ QMatrix.from_real(act)
    return PartialOperator(frame, action), b


@suite("Cay_Prn1", tol=1e-9)
def _cay_prn1(ctx, res):
    """Symmetric class-X isometries: A_U is symmetric and has Cayley transform U."""
    rng = ctx.rng
    lam = ctx.lam
    for t in ctx.loop(res):
        u, b = _symmetric_isometry(rng, t)
        res.check(is_symmetric(u) and classify(u, b).in_X and classify(u, b).in_Z)
        a_u = inverse_cayley(u, lam, b)
        res.check(is_symmetric(a_u))
        res.check(classify(a_u, b).in_Y)
        res.residual(operator_deviation(u, cayley(a_u, lam, b).transform))
        psi = _domain_vector(rng, u)
        u_psi = _apply(u, psi)
        phi = psi - u_psi
        val = inner(_apply(a_u, phi), phi)
        lp = left_mul(lam.value, psi, b)
        expect = 2.0 * (inner(lp, psi) - inner(lp, u_psi)).w
        res.residual(_qdiff(val, Quaternion(expect)) / max(1.0, abs(expect)))


@suite("ess_Cay", tol=1e-8)
def _ess_cay(ctx, res):
    """The transform is injective: A is recovered from U_A, for each of two lambdas."""
    rng = ctx.rng
    for t in ctx.loop(res, _y_count(ctx)):
        a, b = _any_y(ctx, t)
        other = LambdaParam(smp.lambda_value(rng))
        for lam in (ctx.lam, other):
            res.residual(operator_deviation(a, inverse_cayley(cayley(a, lam, b).transform, lam, b)))
        a2 = a + QMatrix.from_real(np.eye(a.shape[0])) if isinstance(a, QMatrix) else None
        if a2 is not None:
            u1 = cayley(a, ctx.lam, b).transform
            u2 = cayley(a2, ctx.lam, b).transform
            res.check(operator_deviation(u1, u2) > 1e-6)


@suite("Remark_A_theta", tol=1e-12)
def _remark(ctx, res):
    """Generated block matrices are real, symmetric involutions in class Y."""
    rng = ctx.rng
    in_z = 0
    for _ in ctx.loop(res):
        thetas, signs, perm = smp.remark_params(rng)
        m = gen_remark(thetas, signs, perm)
        n = m.shape[0]
        res.check(m.is_real(0.0))
        res.residual(m.max_abs_diff(m.T))
        res.residual((m @ m).max_abs_diff(QMatrix.identity(n)))
        flags = classify(m)
        res.check(flags.in_Y)
        in_z += flags.in_Z
    # Not asserted: every such matrix has eigenvalue 1, so I - M is singular.
    res.measured["in_Z_fraction"] = in_z / max(1, res.trials)


@suite("cor_sa_unitary", tol=0.0)
def _cor_sa_unitary(ctx, res):
    rng = ctx.rng
    for t in ctx.loop(res, _y_count(ctx)):
        if t >= len(ctx.extra) and t % 4 == 3:
            a, b = smp.partial_class_y(rng, 3, 3), HilbertBasis.standard(3)
        else:
            a, b = _any_y(ctx, t)
        rep = self_adjoint_iff_unitary(a, ctx.lam, b)
        res.check(rep.is_self_adjoint == rep.transform_is_unitary)


@suite("cor1", tol=1e-8)
def _cor1(ctx, res):
    """A unitary U is a Cayley transform of a self-adjoint operator iff ker(I - U) = {0}."""
    rng = ctx.rng
    lam = ctx.lam
    for t in ctx.loop(res):
        n = int(rng.integers(1, 7))
        b = _maybe_basis(rng, n)
        kind = t % 3
        if kind == 0:
            u = cayley(smp.class_y(rng, n, b), lam, b).transform
        elif kind == 1:
            u = QMatrix.identity(n) * -1.0
        else:
            u = QMatrix.identity(n) if rng.random() < 0.5 else _unitary_with_fixed_vector(rng, n)
        trivial_kernel = least_singular_value(QMatrix.identity(n) - u) > 1e-9
        try:
            a_u = inverse_cayley(u, lam, b)
        except RangeNotDense:
            res.check(not trivial_kernel)
            continue
        res.check(trivial_kernel)
        res.check(is_self_adjoint(a_u, 1e-8))
        res.residual(cayley(a_u, lam, b).transform.max_abs_diff(u))


# --- two bases -----------------------------------------------------------------


@suite("Lcurl_Lfrak", tol=1e-11)
def _lcurl_lfrak(ctx, res):
    """Each basis gives a left product: matrix form, multiplicativity, unit."""
    rng = ctx.rng
    for _ in ctx.loop(res):
        n = int(rng.integers(1, 7))
        for b in (smp.basis(rng, n), smp.basis(rng, n)):
            q, p = smp.quaternion(rng), smp.quaternion(rng)
            phi = smp.vector(rng, n)
            res.residual((b.left_matrix(q) @ phi).max_abs_diff(left_mul(q, phi, b)))
            res.residual((b.left_matrix(q) @ b.left_matrix(p)).max_abs_diff(b.left_matrix(q * p)))
            res.residual(b.left_matrix(1.0).max_abs_diff(QMatrix.identity(n)))


def _basis_pair(rng, twisted: bool) -> tuple[HilbertBasis, HilbertBasis]:
    n = int(rng.integers(1, 7))
    b1 = _maybe_basis(rng, n)
    if twisted:
        k = int(rng.integers(n))
        diag = [ONE] * n
        diag[k] = smp.unit_imaginary(rng)
        return b1, HilbertBasis(b1.matrix @ QMatrix.diag(diag))
    return b1, HilbertBasis(b1.matrix @ QMatrix.from_real(smp.real_orthogonal(rng, n)))


@suite("Pro_lft", tol=1e-10)
def _pro_lft(ctx, res):
    """Left products agree iff all cross inner products are real."""
    rng = ctx.rng
    for t in ctx.loop(res):
        b1, b2 = _basis_pair(rng, twisted=bool(t % 2))
        gap = left_mult_gap(b1, b2)
        compatible = basis_compatible(b1, b2)
        res.check(compatible == (gap <= 1e-10))
        if compatible:
            res.residual(gap)


@suite("basis_invariance", tol=1e-9)
def _basis_invariance(ctx, res):
    """Compatible bases give the same Cayley transform."""
    rng = ctx.rng
    for t in ctx.loop(res):
        b1, b2 = _basis_pair(rng, twisted=False)
        n = b1.n
        a = smp.class_y(rng, n, b1) if t % 2 == 0 else smp.partial_class_y(rng, n, int(rng.integers(1, n + 1)), b1)
        rep = cayley_invariance(a, ctx.lam, b1, b2)
        res.check(rep.compatible)
        res.residual(rep.deviation)


# --- checks of the numerical machinery -------------------------------------------


@suite("embed_chi", tol=1e-11)
def _embed_chi(ctx, res):
    """chi is a ring homomorphism compatible with adjoints; chi_inv undoes it."""
    rng = ctx.rng
    for _ in ctx.loop(res):
        n = int(rng.integers(1, 13))
        m, k = smp.matrix(rng, n), smp.matrix(rng, n)
        scale = max(1.0, m.max_abs() * k.max_abs() * n)
        res.residual(np.abs(chi(m @ k) - chi(m) @ chi(k)).max() / scale)
        res.residual(np.abs(chi(m + k) - chi(m) - chi(k)).max())
        res.residual(np.abs(chi(m.H) - chi(m).conj().T).max())
        res.residual(chi_inv(chi(m)).max_abs_diff(m))
        low = smp.matrix(rng, n, 1) @ smp.matrix(rng, 1, n)
        res.check(np.linalg.matrix_rank(chi(low)) == 2 and rank_h(low) == 1)


@suite("Y_characterization", tol=0.0)
def _y_char(ctx, res):
    """In the standard basis, dense class Y = real symmetric matrices."""
    rng = ctx.rng
    for t in ctx.loop(res):
        n = int(rng.integers(1, 9))
        kind = t % 4
        if kind == 0:
            a = QMatrix.from_real(smp.real_symmetric(rng, n))
        elif kind == 1:
            a = smp.hermitian(rng, n)
        elif kind == 2:
            a = QMatrix.from_real(rng.normal(size=(n, n)))
        else:
            a = smp.matrix(rng, n)
        real_sym = a.is_real(1e-12) and a.max_abs_diff(a.T) <= 1e-12
        res.check(classify(a).in_Y == real_sym)


@suite("UA_membership", tol=0.0)
def _ua_membership(ctx, res):
    """How often U_A of a dense class-Y operator lands in Y and in Z (reported, not asserted)."""
    rng = ctx.rng
    in_y = in_z = 0
    for t in ctx.loop(res):
        a, b = _dense_y(rng)
        flags = classify(cayley(a, ctx.lam, b).transform, b)
        in_y += flags.in_Y
        in_z += flags.in_Z
    res.measured["in_Y_fraction"] = in_y / max(1, res.trials)
    res.measured["in_Z_fraction"] = in_z / max(1, res.trials)


# --- driver ------------------------------------------------------------------


def _sub_seed(seed: int, name: str) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([seed, zlib.crc32(name.encode())]))


def run_suite(name: str, seed: int = 0, trials: int = 20, lam: LambdaParam = DEFAULT_LAMBDA,
              extra: list | None = None) -> SuiteResult:
    ctx = Context(_sub_seed(seed, name), trials, lam, list(extra or []))
    return SUITES[name](ctx)


def run_all(seed: int = 0, trials: int = 20, lam: LambdaParam = DEFAULT_LAMBDA,
            extra: list | None = None, jobs: int = 1, only: list[str] | None = None) -> dict:
    """Run every suite and return the report dictionary."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    names = sorted(only or SUITES)

    def one(name):
        return name, run_suite(name, seed, trials, lam, extra)

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = dict(pool.map(one, names))
    else:
        results = dict(map(one, names))
    return {
        "seed": seed,
        "trials": trials,
        "lambda": lam.value.to_json(),
        "propositions": {name: results[name].to_json() for name in names},
        "all_passed": all(r.passed for r in results.values()),
    }
