"""Schmidt-restricted operator norm S(k) and the restricted numerical radius.

For a bipartite operator X,

    |X|_S(k)   = sup |<v|X|w>|   over unit v, w of Schmidt rank <= k,
    radius_k(X) = sup |<v|X|v>|  over unit v of Schmidt rank <= k (X hermitian).

Neither supremum is efficiently computable in general, so this module
produces certified two-sided bounds.  Lower bounds come from alternating
maximization (see-saw): for fixed w the optimal v is the normalized
Schmidt truncation of Xw, and symmetrically, so the objective never
decreases.  Upper bounds come from the operator norm, with closed forms on
rank-one inputs and at k = min(dims).  Block positivity of y = cI - X is
decided through the same bounds, and the restricted numerical radius is
bracketed by bisecting on the shift s in "sI +/- X both k-block positive".
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kyfan
from .errors import ParameterError, PreconditionError
from .linalg import BipartiteOperator, bipartite, eig_hermitian, svd
from .schmidt import PureState, pure_state

EXACTNESS_ATOL = 1e-9
RANK_ONE_RTOL = 1e-12
PSD_RTOL = 1e-10


@dataclass(frozen=True)
class NormInterval:
    """Certified bracket [lower, upper] for a norm value.

    The method tags record which bound produced each endpoint.  exact is set
    when the two endpoints agree to within 1e-9 (in particular on closed-form
    paths, where both are the same number).
    """

    lower: float
    upper: float
    lower_method: str
    upper_method: str
    exact: bool

    def __post_init__(self):
        if not (np.isfinite(self.lower) and np.isfinite(self.upper)):
            raise ParameterError("interval endpoints must be finite")
        if self.lower > self.upper + 1e-12 * max(1.0, abs(self.upper)):
            raise ParameterError(f"inconsistent interval [{self.lower}, {self.upper}]")
        if self.exact and self.upper - self.lower > EXACTNESS_ATOL:
            raise ParameterError("exact flag requires endpoints within 1e-9")

    @property
    def width(self) -> float:
        return self.upper - self.lower


def _exact_interval(value: float, method: str) -> NormInterval:
    return NormInterval(value, value, method, method, True)


def _finish_interval(lower: float, upper: float, lo_tag: str, hi_tag: str) -> NormInterval:
    # A sound lower bound can poke above a sound upper bound only by fp
    # noise; clamp that, but treat anything larger as a real bug.
    if lower > upper:
        if lower - upper > 1e-9 * max(1.0, abs(upper)):
            raise ParameterError(f"bound inconsistency: lower {lower} > upper {upper}")
        lower = upper
    return NormInterval(lower, upper, lo_tag, hi_tag, exact=(upper - lower) <= EXACTNESS_ATOL)


@dataclass(frozen=True)
class SeeSawResult:
    """Best pair found by alternating maximization.

    value equals |<v|X|w>| for the returned pair; objective_trace holds the
    half-step objectives of the winning restart and is nondecreasing.
    """

    v: PureState
    w: PureState
    value: float
    iterations: int
    converged: bool
    seed: int
    objective_trace: tuple[float, ...]


def _check_k(dim_a: int, dim_b: int, k: int) -> None:
    kmax = min(dim_a, dim_b)
    if not isinstance(k, (int, np.integer)) or not 1 <= k <= kmax:
        raise ParameterError(f"k must satisfy 1 <= k <= {kmax}, got {k!r}")


def _check_budgets(restarts: int, max_iter: int, seed: int) -> None:
    if restarts < 1:
        raise ParameterError(f"restarts must be >= 1, got {restarts}")
    if max_iter < 1:
        raise ParameterError(f"max_iter must be >= 1, got {max_iter}")
    if seed < 0:
        raise ParameterError(f"seed must be >= 0, got {seed}")


def _truncate_raw(u: np.ndarray, m: int, n: int, k: int) -> tuple[np.ndarray, float]:
    """Top-k Schmidt truncation of a raw vector, normalized.

    Returns (unit vector, gain) where gain is the l2 norm of the k leading
    Schmidt coefficients of u, i.e. the largest overlap of u with any
    Schmidt-rank-<=k unit vector; the returned vector attains it.
    """
    uu, s, vh = svd(u.reshape(m, n))
    kk = min(k, s.size)
    gain = float(np.linalg.norm(s[:kk]))
    if gain <= 0.0:
        return u.reshape(-1), 0.0
    vec = ((uu[:, :kk] * (s[:kk] / gain)) @ vh[:kk, :]).reshape(-1)
    return vec, gain


def _random_sr_vec(rng: np.random.Generator, m: int, n: int, k: int) -> np.ndarray:
    g = rng.standard_normal((m, n)) + 1j * rng.standard_normal((m, n))
    vec, gain = _truncate_raw(g.reshape(-1), m, n, k)
    if gain <= 0.0:  # vanishing Gaussian draw; practically unreachable
        vec = np.zeros(m * n, dtype=np.complex128)
        vec[0] = 1.0
    return vec


def _basis_product_vec(m: int, n: int) -> np.ndarray:
    vec = np.zeros(m * n, dtype=np.complex128)
    vec[0] = 1.0
    return vec


def seesaw_lower(
    x: BipartiteOperator,
    k: int,
    restarts: int = 32,
    max_iter: int = 500,
    tol: float = 1e-10,
    seed: int = 0,
) -> SeeSawResult:
    """Certified lower bound on |x|_S(k) by alternating maximization.

    Each restart starts from an independent Schmidt-truncated Gaussian w and
    alternates v <- trunc_k(Xw), w <- trunc_k(X^dag v), both normalized; each
    half-step maximizes the objective exactly for the other side fixed, so
    the trace is nondecreasing.  Restart r draws from a stream derived from
    (seed, r), which makes the result independent of evaluation order.
    """
    m, n = x.dims
    _check_k(m, n, k)
    _check_budgets(restarts, max_iter, seed)
    mat = x.mat

    if float(np.max(np.abs(mat))) == 0.0:
        v0 = pure_state(_basis_product_vec(m, n), m, n)
        return SeeSawResult(v0, v0, 0.0, 0, True, seed, ())

    best: tuple[float, int] | None = None
    best_state: tuple[np.ndarray, np.ndarray, int, bool, tuple[float, ...]] | None = None
    for ridx in range(restarts):
        rng = np.random.default_rng([seed, ridx])
        w = _random_sr_vec(rng, m, n, k)
        v = _basis_product_vec(m, n)
        trace: list[float] = []
        prev = -np.inf
        converged = False
        iterations = 0
        for iterations in range(1, max_iter + 1):
            u = mat @ w
            v_new, gain1 = _truncate_raw(u, m, n, k)
            if gain1 <= 0.0:
                converged = True
                break
            v = v_new
            trace.append(gain1)
            u2 = mat.conj().T @ v
            w_new, gain2 = _truncate_raw(u2, m, n, k)
            if gain2 <= 0.0:
                converged = True
                break
            w = w_new
            trace.append(gain2)
            if gain2 - prev <= tol * max(1.0, gain2):
                converged = True
                break
            prev = gain2
        value = float(abs(np.vdot(v, mat @ w)))
        if best is None or value > best[0]:
            best = (value, ridx)
            best_state = (v, w, iterations, converged, tuple(trace))

    assert best is not None and best_state is not None
    v, w, iterations, converged, trace = best_state
    return SeeSawResult(
        v=pure_state(v, m, n, require_normalized=False),
        w=pure_state(w, m, n, require_normalized=False),
        value=best[0],
        iterations=iterations,
        converged=converged,
        seed=seed,
        objective_trace=trace,
    )


def _seesaw_symmetric(
    mat: np.ndarray,
    m: int,
    n: int,
    k: int,
    restarts: int,
    max_iter: int,
    tol: float,
    seed: int,
    stream: int,
) -> tuple[float, np.ndarray]:
    """Alternating maximization of <v|Z|v> over SR<=k for PSD Z.

    Iterates v <- trunc_k(Zv); for positive semidefinite Z the Rayleigh
    objective is nondecreasing under this update.  Returns the best
    (objective, v).
    """
    best_obj = -np.inf
    best_v = _basis_product_vec(m, n)
    for ridx in range(restarts):
        rng = np.random.default_rng([seed, stream, ridx])
        v = _random_sr_vec(rng, m, n, k)
        prev = float(np.real(np.vdot(v, mat @ v)))
        for _ in range(max_iter):
            u = mat @ v
            v_new, gain = _truncate_raw(u, m, n, k)
            if gain <= 0.0:
                break
            v = v_new
            obj = float(np.real(np.vdot(v, mat @ v)))
            if obj - prev <= tol * max(1.0, abs(obj)):
                prev = obj
                break
            prev = obj
        if prev > best_obj:
            best_obj = prev
            best_v = v
    return best_obj, best_v


def sk_pure(v: PureState, k: int) -> float:
    """S(k) norm of the projector |v><v|: sum of the k leading squared Schmidt
    coefficients of v.  Homogeneous of degree 2 in v."""
    _check_k(v.dim_a, v.dim_b, k)
    s = svd(v.matrix())[1]
    return float(np.sum(s[:k] ** 2))


def sk_elementary(v: PureState, w: PureState, k: int) -> float:
    """S(k) norm of the rank-one operator |v><w|: s_k_norm(v) * s_k_norm(w)."""
    if v.dims != w.dims:
        raise ParameterError(f"mismatched dims {v.dims} vs {w.dims}")
    _check_k(v.dim_a, v.dim_b, k)
    sv = svd(v.matrix())[1]
    sw = svd(w.matrix())[1]
    return float(np.linalg.norm(sv[:k]) * np.linalg.norm(sw[:k]))


def _sk_bounds_full(
    x: BipartiteOperator,
    k: int,
    restarts: int,
    max_iter: int,
    tol: float,
    seed: int,
    *,
    lazy_lower: bool = False,
    skip_if_c_at_least: float | None = None,
) -> tuple[NormInterval, SeeSawResult | None]:
    """Bounds on |x|_S(k) plus the pair achieving the lower bound.

    With lazy_lower the see-saw is skipped when the cheap upper bound alone
    already decides the caller's question (upper <= skip_if_c_at_least);
    the reported lower endpoint is then the trivial 0.
    """
    m, n = x.dims
    _check_k(m, n, k)
    _check_budgets(restarts, max_iter, seed)

    u, s, vh = svd(x.mat)
    if s[0] <= 0.0:
        v0 = pure_state(_basis_product_vec(m, n), m, n)
        pair = SeeSawResult(v0, v0, 0.0, 0, True, seed, ())
        return _exact_interval(0.0, "zero_operator"), pair

    if k == min(m, n):
        # At maximal k the restriction is vacuous and the norm is the
        # operator norm; the optimal pair is the leading singular pair.
        v_vec = u[:, 0]
        w_vec = vh[0, :].conj()
        pair = SeeSawResult(
            pure_state(v_vec, m, n, require_normalized=False),
            pure_state(w_vec, m, n, require_normalized=False),
            float(s[0]), 0, True, seed, (float(s[0]),),
        )
        return _exact_interval(float(s[0]), "operator_norm_exact"), pair

    if s.size == 1 or s[1] <= RANK_ONE_RTOL * s[0]:
        v_vec, gv = _truncate_raw(u[:, 0], m, n, k)
        w_vec, gw = _truncate_raw(vh[0, :].conj(), m, n, k)
        value = float(s[0] * gv * gw)
        pair = SeeSawResult(
            pure_state(v_vec, m, n, require_normalized=False),
            pure_state(w_vec, m, n, require_normalized=False),
            value, 0, True, seed, (value,),
        )
        return _exact_interval(value, "rank_one_exact"), pair

    upper = float(s[0])
    if lazy_lower and skip_if_c_at_least is not None and upper <= skip_if_c_at_least:
        return NormInterval(0.0, upper, "trivial", "operator_norm", False), None

    ss = seesaw_lower(x, k, restarts=restarts, max_iter=max_iter, tol=tol, seed=seed)
    return _finish_interval(ss.value, upper, "seesaw", "operator_norm"), ss


def sk_bounds(
    x: BipartiteOperator,
    k: int,
    restarts: int = 32,
    max_iter: int = 500,
    tol: float = 1e-10,
    seed: int = 0,
) -> NormInterval:
    """Certified bracket for |x|_S(k).

    Exact on rank-one inputs (value s_1 * s_k_norm(u_1) * s_k_norm(w_1)) and
    at k = min(dims) (operator norm); otherwise the see-saw lower bound
    against the operator-norm upper bound.
    """
    return _sk_bounds_full(x, k, restarts, max_iter, tol, seed)[0]


def prod_radius_bounds(
    y: BipartiteOperator,
    k: int,
    restarts: int = 32,
    max_iter: int = 500,
    tol: float = 1e-10,
    seed: int = 0,
) -> NormInterval:
    """Certified bracket for the Schmidt-restricted numerical radius of a
    hermitian operator.

    For PSD inputs the radius coincides with |y|_S(k) and the S(k) machinery
    is reused.  Otherwise, for each sign the shifted operator
    +/-y + |y| I is PSD and a symmetric see-saw on it yields a feasible
    vector; the best |<v|y|v>| found is the lower bound, the operator norm
    the upper bound.
    """
    if not y.hermitian:
        raise PreconditionError("prod_radius_bounds requires a hermitian operator")
    m, n = y.dims
    _check_k(m, n, k)
    _check_budgets(restarts, max_iter, seed)

    lam, _ = eig_hermitian(y.mat)
    opn = float(max(abs(lam[0]), abs(lam[-1])))
    if opn == 0.0:
        return _exact_interval(0.0, "zero_operator")
    if lam[-1] >= -PSD_RTOL * max(1.0, opn):
        return sk_bounds(y, k, restarts=restarts, max_iter=max_iter, tol=tol, seed=seed)

    eye = np.eye(m * n, dtype=np.complex128)
    best = 0.0
    for stream, sign in enumerate((1.0, -1.0)):
        shifted = sign * y.mat + opn * eye
        _, v = _seesaw_symmetric(shifted, m, n, k, restarts, max_iter, tol, seed, stream)
        cand = float(abs(np.vdot(v, y.mat @ v)))
        best = max(best, cand)
    return _finish_interval(best, opn, "shifted_seesaw", "operator_norm")


@dataclass(frozen=True)
class BlockPositivityResult:
    """Three-way verdict on k-block positivity of a hermitian operator.

    c is the largest eigenvalue, interval the bracket computed for
    |cI - y|_S(k), and witness (present for certified_negative) a
    Schmidt-rank-<=k pair whose pairing with cI - y exceeds c.
    """

    verdict: str
    c: float
    interval: NormInterval
    witness: SeeSawResult | None


def block_positivity_check(
    y: BipartiteOperator,
    k: int,
    tol: float = 1e-9,
    restarts: int = 32,
    max_iter: int = 500,
    seesaw_tol: float = 1e-10,
    seed: int = 0,
) -> BlockPositivityResult:
    """Decide whether <v|y|v> >= 0 for all Schmidt-rank-<=k vectors v.

    Writes y = cI - X with c the top eigenvalue of y, so X is PSD; y is
    k-block positive exactly when c >= |X|_S(k).  The verdict is
    certified_positive when c clears the upper bound, certified_negative
    when c falls below the lower bound, else undecided.  Comparisons use a
    relative band of tol so exact-boundary cases decide deterministically.
    The see-saw lower bound is only computed when the cheap upper bound
    does not already settle the question.
    """
    if not y.hermitian:
        raise PreconditionError("block_positivity_check requires a hermitian operator")
    m, n = y.dims
    _check_k(m, n, k)

    lam, _ = eig_hermitian(y.mat)
    c = float(lam[0])
    x_mat = c * np.eye(m * n, dtype=np.complex128) - y.mat
    x_mat = (x_mat + x_mat.conj().T) / 2.0
    x = BipartiteOperator(x_mat, m, n, hermitian=True)

    scale = max(1.0, abs(c), float(lam[0] - lam[-1]))
    band = tol * scale

    interval, pair = _sk_bounds_full(
        x, k, restarts, max_iter, seesaw_tol, seed,
        lazy_lower=True, skip_if_c_at_least=c + band,
    )
    if c >= interval.upper - band:
        return BlockPositivityResult("certified_positive", c, interval, None)
    if c < interval.lower - band:
        return BlockPositivityResult("certified_negative", c, interval, pair)
    return BlockPositivityResult("undecided", c, interval, None)


def prod_radius_bisect(
    x: BipartiteOperator,
    k: int,
    depth: int = 30,
    tol: float = 1e-9,
    restarts: int = 8,
    max_iter: int = 500,
    seed: int = 0,
) -> NormInterval:
    """Bracket the restricted numerical radius by bisection.

    The radius of hermitian x is the least shift s making both sI + x and
    sI - x k-block positive, and that property is monotone in s.  Starting
    from [0, |x|], each step queries block positivity at the midpoint; an
    undecided check stops early, leaving a wider but still certified
    bracket.  Endpoints inherit the certification band of the underlying
    checks (tol, relative), since boundary shifts decide positively inside
    that band.  restarts defaults lower than elsewhere because each level
    runs up to two see-saws.
    """
    if not x.hermitian:
        raise PreconditionError("prod_radius_bisect requires a hermitian operator")
    m, n = x.dims
    _check_k(m, n, k)
    if depth < 1:
        raise ParameterError(f"depth must be >= 1, got {depth}")

    lam, _ = eig_hermitian(x.mat)
    opn = float(max(abs(lam[0]), abs(lam[-1])))
    if opn == 0.0:
        return _exact_interval(0.0, "zero_operator")

    eye = np.eye(m * n, dtype=np.complex128)

    def classify(s: float) -> str:
        for sign in (1.0, -1.0):
            shifted = bipartite(s * eye + sign * x.mat, m, n, symmetrize=True)
            res = block_positivity_check(
                shifted, k, tol=tol, restarts=restarts,
                max_iter=max_iter, seed=seed,
            )
            if res.verdict == "certified_negative":
                return "negative"
            if res.verdict == "undecided":
                return "undecided"
        return "positive"

    lo, hi = 0.0, opn
    # The radius never exceeds the operator norm, but verify the top of the
    # bracket decides; one nudge absorbs boundary fp noise.
    if classify(hi) != "positive":
        hi = opn * (1.0 + 1e-9)
        if classify(hi) != "positive":
            return NormInterval(lo, hi, "bisection", "bisection", False)
    for _ in range(depth):
        mid = 0.5 * (lo + hi)
        verdict = classify(mid)
        if verdict == "positive":
            hi = mid
        elif verdict == "negative":
            lo = mid
        else:
            break
    return NormInterval(lo, hi, "bisection", "bisection", exact=(hi - lo) <= EXACTNESS_ATOL)
