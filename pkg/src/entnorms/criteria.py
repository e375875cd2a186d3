"""Schmidt-number detection criteria built on the realignment map.

The workhorse inequality: a density matrix with Schmidt number at most k
satisfies k2_dual(L(rho), k^2) <= 1, where L is the entry reshuffle from
linalg.realign.  Values above 1 therefore certify SN > k.  A weaker trace
variant bounds the trace norm of L(rho) by k, and on pure-state projectors
the dual value equals 1 exactly when the Schmidt rank is at most k, giving
a sharp rank test.  Local filtering (alternating marginal whitening) can
only help: it preserves Schmidt number, so the criterion applied after
filtering is sound as well, and on pure states it provably flattens the
Schmidt spectrum to the maximally entangled state on the support.

The filter iteration itself (pseudo-inverse square roots on supports, trace
renormalization, the tolerance and the iteration cap) is standard scaling
machinery chosen here; only the filter-then-detect composition is part of
the criterion.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kyfan
from .dualnorms import gamma_bounds
from .errors import EntnormsError, NumericalError, ParameterError, PreconditionError
from .linalg import (
    BipartiteOperator,
    bipartite,
    eig_hermitian,
    kron,
    partial_trace,
    realign,
    svd,
)
from .schmidt import PureState
from .sknorm import _check_k

DETECTION_TOL = 1e-9
FILTER_TOL = 1e-9
FILTER_MAX_ITER = 200
SUPPORT_CUTOFF_RTOL = 1e-12


@dataclass(frozen=True)
class DetectionReport:
    """Outcome of one detection criterion on one input.

    detected is always value > threshold + tol; for gen_realign and
    weak_realign on density matrices a detection certifies SN > k.
    filtered marks reports whose value came from the filtered state.
    """

    criterion: str
    k: int
    value: float
    threshold: float
    detected: bool
    filtered: bool
    tol: float

    def __post_init__(self):
        if self.detected != (self.value > self.threshold + self.tol):
            raise ParameterError("detected flag inconsistent with value and threshold")


def _require_density(rho: BipartiteOperator, what: str) -> None:
    if not rho.hermitian:
        raise PreconditionError(f"{what} requires a hermitian density matrix")
    lam, _ = eig_hermitian(rho.mat)
    scale = max(1.0, float(np.max(np.abs(lam))))
    if lam[-1] < -1e-9 * scale:
        raise PreconditionError(f"{what}: input is not PSD (min eigenvalue {lam[-1]:.3e})")
    tr = float(np.real(np.trace(rho.mat)))
    if abs(tr - 1.0) > 1e-9:
        raise PreconditionError(f"{what}: trace {tr} is not 1 within 1e-9")


def realignment_value(rho: BipartiteOperator, k: int) -> float:
    """The dual (k^2, 2)-norm of the realigned operator.

    At most 1 for density matrices of Schmidt number <= k; on pure-state
    projectors it exceeds 1 exactly when the Schmidt rank exceeds k.
    """
    m, n = rho.dims
    _check_k(m, n, k)
    return float(kyfan.k2_dual(realign(rho), k * k))


def detect_schmidt_number(
    rho: BipartiteOperator,
    k: int,
    use_filter: bool = False,
    tol: float = DETECTION_TOL,
    filter_tol: float = FILTER_TOL,
    filter_max_iter: int = FILTER_MAX_ITER,
) -> DetectionReport:
    """Realignment criterion against threshold 1, optionally after a local
    filter.

    Both the raw and the filtered value are sound, so the report carries
    the larger; filtered records whether the filtered path supplied it.  A
    filter that fails or does not converge degrades to the raw value.
    """
    _require_density(rho, "detect_schmidt_number")
    value = realignment_value(rho, k)
    filtered = False
    if use_filter:
        try:
            fr = local_filter(rho, tol=filter_tol, max_iter=filter_max_iter)
            fval = realignment_value(fr.rho, k)
        except EntnormsError:
            fval = None
        if fval is not None and fval > value:
            value = fval
            filtered = True
    return DetectionReport(
        criterion="gen_realign",
        k=k,
        value=value,
        threshold=1.0,
        detected=value > 1.0 + tol,
        filtered=filtered,
        tol=tol,
    )


def weak_realignment(rho: BipartiteOperator, k: int, tol: float = DETECTION_TOL) -> DetectionReport:
    """Trace-norm realignment criterion against threshold k.

    Weaker than detect_schmidt_number: the trace norm of L(rho) is at most
    k times the dual (k^2,2) value, so every weak detection is also a
    detection of the generalized criterion.
    """
    _require_density(rho, "weak_realignment")
    m, n = rho.dims
    _check_k(m, n, k)
    value = float(np.sum(svd(realign(rho))[1]))
    return DetectionReport(
        criterion="weak_realign",
        k=k,
        value=value,
        threshold=float(k),
        detected=value > float(k) + tol,
        filtered=False,
        tol=tol,
    )


def cross_norm_test(
    rho: BipartiteOperator,
    k: int,
    tol: float = DETECTION_TOL,
    restarts: int = 32,
    max_iter: int = 500,
    seed: int = 0,
) -> DetectionReport:
    """Certified gamma_k lower bound against threshold 1.

    Density matrices of Schmidt number <= k have gamma_k exactly 1, so any
    certified lower bound above 1 detects SN > k.  Subsumes the realignment
    value (it is one of the gamma lower bounds) at see-saw cost.
    """
    _require_density(rho, "cross_norm_test")
    gb = gamma_bounds(rho, k, restarts=restarts, max_iter=max_iter, seed=seed)
    return DetectionReport(
        criterion="cross_norm",
        k=k,
        value=gb.lower,
        threshold=1.0,
        detected=gb.lower > 1.0 + tol,
        filtered=False,
        tol=tol,
    )


def pure_state_sr_test(v: PureState, k: int, tol: float = DETECTION_TOL) -> str:
    """Sharp Schmidt-rank test for unit vectors: "sr_at_most_k" when the
    realignment value of |v><v| stays within 1 + tol, else "sr_exceeds_k".

    Agrees with schmidt_rank on every input: the value is 1 exactly at
    SR <= k and strictly larger otherwise.
    """
    m, n = v.dims
    _check_k(m, n, k)
    nrm = v.norm()
    if abs(nrm - 1.0) > 1e-9:
        raise PreconditionError(f"pure_state_sr_test needs a unit vector, norm is {nrm}")
    proj = np.outer(v.amplitudes, v.amplitudes.conj())
    value = realignment_value(bipartite(proj, m, n, symmetrize=True), k)
    return "sr_at_most_k" if value <= 1.0 + tol else "sr_exceeds_k"


@dataclass(frozen=True)
class FilterResult:
    """Filtered state with the accumulated local maps.

    rho equals (f_a tensor f_b) rho_in (f_a tensor f_b)^dag up to trace
    normalization.  iterations counts completed whitening rounds; converged
    reports whether both marginals ended within tolerance of maximally
    mixed on their supports.
    """

    rho: BipartiteOperator
    f_a: np.ndarray
    f_b: np.ndarray
    converged: bool
    iterations: int


def _support_spectrum(marginal: np.ndarray) -> tuple[np.ndarray, np.ndarray, int]:
    lam, vecs = eig_hermitian(marginal)
    cutoff = SUPPORT_CUTOFF_RTOL * max(float(lam[0]), 0.0)
    rank = int(np.sum(lam > cutoff))
    if rank == 0:
        raise NumericalError("marginal has collapsed to zero during filtering")
    return lam, vecs, rank


def _flatness(marginal: np.ndarray) -> float:
    """Frobenius distance from the maximally mixed state on the support."""
    lam, _, rank = _support_spectrum(marginal)
    target = np.zeros_like(lam)
    target[:rank] = 1.0 / rank
    return float(np.linalg.norm(lam - target))


def _pinv_sqrt(marginal: np.ndarray) -> np.ndarray:
    lam, vecs, rank = _support_spectrum(marginal)
    inv = np.zeros_like(lam)
    inv[:rank] = 1.0 / np.sqrt(lam[:rank])
    return (vecs * inv) @ vecs.conj().T


def local_filter(
    rho: BipartiteOperator,
    tol: float = FILTER_TOL,
    max_iter: int = FILTER_MAX_ITER,
) -> FilterResult:
    """Alternating marginal whitening toward the filter normal form.

    Each round applies the pseudo-inverse square root of one marginal on
    its support (a local, invertible-on-support map, so the Schmidt number
    cannot increase), renormalizes the trace, and alternates sides.  Stops
    when both marginals are within tol (Frobenius) of maximally mixed on
    their supports, or after max_iter rounds with converged=False.  On a
    pure state one round flattens the Schmidt coefficients exactly.
    """
    _require_density(rho, "local_filter")
    if max_iter < 0:
        raise ParameterError(f"max_iter must be >= 0, got {max_iter}")
    m, n = rho.dims
    work = rho.mat.copy()
    f_a = np.eye(m, dtype=np.complex128)
    f_b = np.eye(n, dtype=np.complex128)
    eye_m = np.eye(m, dtype=np.complex128)
    eye_n = np.eye(n, dtype=np.complex128)

    for iterations in range(max_iter + 1):
        bp = bipartite(work, m, n, symmetrize=True)
        marg_a = partial_trace(bp, "B")
        marg_b = partial_trace(bp, "A")
        if _flatness(marg_a) <= tol and _flatness(marg_b) <= tol:
            return FilterResult(bp, f_a, f_b, True, iterations)
        if iterations == max_iter:
            return FilterResult(bp, f_a, f_b, False, iterations)

        step_a = _pinv_sqrt(marg_a)
        lift = kron(step_a, eye_n)
        work = lift @ work @ lift.conj().T
        work = _renormalize(work)
        f_a = step_a @ f_a

        marg_b = partial_trace(bipartite(work, m, n, symmetrize=True), "A")
        step_b = _pinv_sqrt(marg_b)
        lift = kron(eye_m, step_b)
        work = lift @ work @ lift.conj().T
        work = _renormalize(work)
        f_b = step_b @ f_b

    raise AssertionError("unreachable")


def _renormalize(work: np.ndarray) -> np.ndarray:
    work = (work + work.conj().T) / 2.0
    tr = float(np.real(np.trace(work)))
    if tr <= 0.0:
        raise NumericalError("filter drove the trace nonpositive")
    return work / tr
