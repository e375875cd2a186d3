"""Command line interface: operator files in, machine-readable reports out.

File format (JSON): {"dims": [m, n], "kind": "state_vector" | "operator" |
"density", "data": nested [re, im] pairs (row-major), "meta": {...}}.
Densities are checked against hermiticity/PSD/unit-trace at 1e-6 on load;
violations are surfaced as warnings in the report, never silently fixed
(commands with stricter preconditions still reject such inputs).

Reports are JSON with a fixed key set: command, inputs (sha256 of the input
file or of the parameter string), k, result, tolerances, seed,
wall_time_ms, warnings.  With the same argv and seed the report is
byte-identical apart from wall_time_ms.  The text format is a human
rendering of the same data and is not a stable interface.

Exit codes: 0 success; 1 input or parameter errors (including usage); 2
numerical failures (svd/eig non-convergence, LP failure); 3 an undecided
verdict when --require-decision was set.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time

import numpy as np

from . import criteria, dualnorms, kyfan, sknorm, states
from .errors import ParameterError
from .linalg import BipartiteOperator, bipartite, inject_svd_failure, kron, partial_transpose, swap_operator
from .schmidt import PureState, pure_state, schmidt_decompose, s_k_dual
from .sknorm import NormInterval

_FILE_KINDS = ("state_vector", "operator", "density")


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with code 2 on usage errors, which this tool reserves
    # for numerical failures; route them to exit 1 instead.
    def error(self, message):
        raise _UsageError(message)


def _to_pairs(arr: np.ndarray) -> list:
    return np.stack([arr.real, arr.imag], axis=-1).tolist()


def _from_pairs(data, shape: tuple[int, ...], path: str) -> np.ndarray:
    try:
        arr = np.array(data, dtype=np.float64)
    except (TypeError, ValueError) as exc:
        raise ParameterError(f"{path}: field 'data' is not numeric [re, im] nesting: {exc}") from exc
    if arr.shape != shape + (2,):
        raise ParameterError(
            f"{path}: field 'data' has shape {arr.shape}, expected {shape + (2,)}"
        )
    if not np.all(np.isfinite(arr)):
        raise ParameterError(f"{path}: field 'data' contains non-finite entries")
    return arr[..., 0] + 1j * arr[..., 1]


def save_operator(path: str, value: PureState | BipartiteOperator, meta: dict | None = None) -> None:
    """Write a state vector or operator to the JSON file format."""
    if isinstance(value, PureState):
        kind = "state_vector"
        dims = [value.dim_a, value.dim_b]
        data = _to_pairs(value.amplitudes)
    else:
        dims = [value.dim_a, value.dim_b]
        tr = float(np.real(np.trace(value.mat)))
        kind = "density" if value.hermitian and abs(tr - 1.0) <= 1e-6 else "operator"
        data = _to_pairs(value.mat)
    doc = {"dims": dims, "kind": kind, "data": data, "meta": dict(meta or {})}
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2)
        fh.write("\n")


def _parse_operator_doc(doc, path: str) -> tuple[PureState | BipartiteOperator, list[str]]:
    if not isinstance(doc, dict):
        raise ParameterError(f"{path}: top level must be a JSON object")
    for field in ("dims", "kind", "data"):
        if field not in doc:
            raise ParameterError(f"{path}: missing field '{field}'")
    dims = doc["dims"]
    if (
        not isinstance(dims, list)
        or len(dims) != 2
        or not all(isinstance(d, int) and d >= 1 for d in dims)
    ):
        raise ParameterError(f"{path}: field 'dims' must be two positive integers")
    m, n = dims
    kind = doc["kind"]
    if kind not in _FILE_KINDS:
        raise ParameterError(f"{path}: field 'kind' must be one of {_FILE_KINDS}, got {kind!r}")
    meta = doc.get("meta", {})
    if not isinstance(meta, dict):
        raise ParameterError(f"{path}: field 'meta' must be an object")

    warnings: list[str] = []
    if kind == "state_vector":
        vec = _from_pairs(doc["data"], (m * n,), path)
        nrm = float(np.linalg.norm(vec))
        if abs(nrm - 1.0) > 1e-6:
            warnings.append(f"state vector norm {nrm:.9g} deviates from 1 beyond 1e-6")
        return pure_state(vec, m, n, require_normalized=False), warnings

    mat = _from_pairs(doc["data"], (m * n, m * n), path)
    value = bipartite(mat, m, n)
    if kind == "density":
        if not value.hermitian:
            warnings.append("density file is not hermitian within tolerance")
        else:
            lam = np.linalg.eigvalsh(value.mat)
            scale = max(1.0, float(np.max(np.abs(lam))))
            if float(lam[0]) < -1e-6 * scale:
                warnings.append(f"density file is not PSD within 1e-6 (min eigenvalue {lam[0]:.3e})")
        tr = float(np.real(np.trace(mat)))
        if abs(tr - 1.0) > 1e-6:
            warnings.append(f"density file trace {tr:.9g} deviates from 1 beyond 1e-6")
    return value, warnings


def _load(path: str) -> tuple[PureState | BipartiteOperator, list[str], str]:
    with open(path, "rb") as fh:
        raw = fh.read()
    digest = hashlib.sha256(raw).hexdigest()
    doc = json.loads(raw.decode("utf-8"))
    value, warnings = _parse_operator_doc(doc, path)
    return value, warnings, digest


def load_operator(path: str) -> PureState | BipartiteOperator:
    """Load a state vector or operator from the JSON file format."""
    return _load(path)[0]


def _as_operator(value: PureState | BipartiteOperator) -> BipartiteOperator:
    """Operator commands accept state vectors by passing to the projector."""
    if isinstance(value, PureState):
        proj = np.outer(value.amplitudes, value.amplitudes.conj())
        return bipartite(proj, value.dim_a, value.dim_b, symmetrize=True)
    return value


def _as_pure(value: PureState | BipartiteOperator, command: str) -> PureState:
    if not isinstance(value, PureState):
        raise ParameterError(f"{command} requires a state_vector input file")
    return value


def _interval_dict(iv: NormInterval) -> dict:
    return {
        "lower": iv.lower,
        "upper": iv.upper,
        "methods": [iv.lower_method, iv.upper_method],
        "exact": iv.exact,
    }


def _param_digest(parts: list) -> str:
    canon = "|".join(str(p) for p in parts)
    return hashlib.sha256(canon.encode("utf-8")).hexdigest()


def _seesaw_kwargs(args) -> dict:
    return {
        "restarts": args.restarts,
        "max_iter": args.max_iter,
        "seed": args.seed,
    }


def _cmd_schmidt(args):
    value, warnings, digest = _load(args.file)
    v = _as_pure(value, "schmidt")
    tol = args.tol if args.tol is not None else 1e-10
    sd = schmidt_decompose(v, tol=tol)
    result = {
        "rank": sd.rank,
        "coefficients": [float(c) for c in sd.coeffs],
    }
    return result, None, {"rank_tol": tol}, warnings, digest, 0


def _cmd_norm(args):
    value, warnings, digest = _load(args.file)
    tol = args.tol if args.tol is not None else 1e-10
    kw = _seesaw_kwargs(args)
    which = args.which

    if which == "sk-dual-vec":
        v = _as_pure(value, "norm --which sk-dual-vec")
        result = {"value": s_k_dual(v, args.k), "method": "closed_form"}
    elif which in ("k2", "k2dual"):
        mat = value.matrix() if isinstance(value, PureState) else value.mat
        fn = kyfan.k2_norm if which == "k2" else kyfan.k2_dual
        result = {"value": float(fn(mat, args.k)), "method": "closed_form"}
    elif which == "sk":
        x = _as_operator(value)
        result = _interval_dict(sknorm.sk_bounds(x, args.k, tol=tol, **kw))
    elif which == "gamma":
        x = _as_operator(value)
        result = _interval_dict(dualnorms.gamma_bounds(x, args.k, tol=tol, **kw))
    elif which == "radius":
        x = _as_operator(value)
        result = _interval_dict(sknorm.prod_radius_bounds(x, args.k, tol=tol, **kw))
    else:
        raise ParameterError(f"unknown norm selector {which!r}")
    return result, args.k, {"tol": tol}, warnings, digest, 0


def _cmd_detect(args):
    value, warnings, digest = _load(args.file)
    rho = _as_operator(value)
    tol = args.tol if args.tol is not None else criteria.DETECTION_TOL
    if args.weak:
        if args.filter:
            raise ParameterError("--weak has no filtered variant; drop --filter")
        report = criteria.weak_realignment(rho, args.k, tol=tol)
    else:
        report = criteria.detect_schmidt_number(rho, args.k, use_filter=args.filter, tol=tol)
    result = {
        "criterion": report.criterion,
        "value": report.value,
        "threshold": report.threshold,
        "detected": report.detected,
        "filtered": report.filtered,
    }
    return result, args.k, {"tol": tol}, warnings, digest, 0


def _cmd_blockpos(args):
    value, warnings, digest = _load(args.file)
    y = _as_operator(value)
    tol = args.tol if args.tol is not None else 1e-9
    res = sknorm.block_positivity_check(
        y, args.k, tol=tol, restarts=args.restarts, max_iter=args.max_iter, seed=args.seed
    )
    result = {
        "verdict": res.verdict,
        "c": res.c,
        "interval": _interval_dict(res.interval),
    }
    forced = 3 if (args.require_decision and res.verdict == "undecided") else 0
    return result, args.k, {"tol": tol}, warnings, digest, forced


def _cmd_witness(args):
    value, warnings, digest = _load(args.file)
    x = _as_operator(value)
    tol = args.tol if args.tol is not None else 1e-10
    wit = dualnorms.best_gamma_witness(x, args.k, tol=tol, **_seesaw_kwargs(args))
    result = {
        "method": wit.method,
        "pairing": wit.pairing,
        "sk_upper": wit.sk_upper,
        "bound": wit.bound,
    }
    return result, args.k, {"tol": tol}, warnings, digest, 0


def _cmd_oracle(args):
    value, warnings, digest = _load(args.file)
    x = _as_operator(value)
    upper, dec = dualnorms.decomposition_oracle(x, args.k, budget=args.budget, seed=args.seed)
    result = {
        "upper": upper,
        "terms": len(dec),
        "weight": dec.weight,
        "residual": dec.residual,
    }
    return result, args.k, {"budget": args.budget}, warnings, digest, 0


def _cmd_probe(args):
    value, warnings, digest = _load(args.file)
    v = _as_pure(value, "probe-conjecture")
    tol = args.tol if args.tol is not None else 1e-10
    probe = dualnorms.conjecture_probe(v, args.k, tol=tol, **_seesaw_kwargs(args))
    result = {
        "candidate": probe.candidate,
        "interval": _interval_dict(probe.interval),
        "inside": probe.inside,
        "gap": probe.gap,
        "in_open_regime": probe.in_open_regime,
    }
    return result, args.k, {"tol": tol}, warnings, digest, 0


def _cmd_gen(args):
    if not args.out:
        raise ParameterError("gen requires --out FILE for the generated state")
    spec = states.EnsembleSpec(
        kind=args.kind,
        dim_a=args.m,
        dim_b=args.n,
        k=args.k,
        p=args.p,
        rank=args.rank,
        terms=args.terms,
        seed=args.seed,
    )
    value = states.generate(spec)
    save_operator(args.out, value, meta={"kind": args.kind, "seed": str(args.seed)})
    digest = _param_digest(
        ["gen", args.kind, args.m, args.n, args.k, args.p, args.terms, args.rank, args.seed]
    )
    result = {
        "kind": args.kind,
        "dims": [args.m, args.n],
        "file_kind": "state_vector" if isinstance(value, PureState) else "density",
        "path": args.out,
    }
    return result, args.k, {}, [], digest, 0


def _cmd_invariance(args):
    m, n, k = args.m, args.n, args.k
    rng = np.random.default_rng(args.seed)
    deviations: list[float] = []
    checks = 0
    swap = swap_operator(m).mat if m == n else None

    def coeffs(vec: np.ndarray) -> np.ndarray:
        return np.linalg.svd(vec.reshape(m, n), compute_uv=False)

    for _ in range(args.trials):
        g = rng.standard_normal(m * n) + 1j * rng.standard_normal(m * n)
        vec = g / np.linalg.norm(g)
        v = pure_state(vec, m, n)
        base_coeffs = coeffs(vec)
        base_sk = sknorm.sk_pure(v, k)
        base_gamma = dualnorms.gamma_pure(v, k)

        rotated = kron(states.haar_unitary(m, rng), states.haar_unitary(n, rng)) @ vec
        transformed = [rotated, vec.conj()]
        if swap is not None:
            transformed.append(swap @ vec)
        for tvec in transformed:
            tv = pure_state(tvec, m, n, require_normalized=False)
            deviations.append(float(np.max(np.abs(coeffs(tvec) - base_coeffs))))
            deviations.append(abs(sknorm.sk_pure(tv, k) - base_sk))
            deviations.append(abs(dualnorms.gamma_pure(tv, k) - base_gamma))
            checks += 3

        prod = [rng.standard_normal(d) + 1j * rng.standard_normal(d) for d in (m, n, m, n)]
        prod = [p / np.linalg.norm(p) for p in prod]
        ketbra = np.outer(np.kron(prod[0], prod[1]), np.kron(prod[2], prod[3]).conj())
        elem = bipartite(ketbra, m, n)
        before = sknorm.sk_bounds(elem, k)
        after = sknorm.sk_bounds(partial_transpose(elem), k)
        deviations.append(abs(before.upper - after.upper))
        checks += 1

    max_dev = max(deviations) if deviations else 0.0
    result = {
        "trials": args.trials,
        "dims": [m, n],
        "checks": checks,
        "max_deviation": max_dev,
        "ok": max_dev <= 1e-9,
    }
    digest = _param_digest(["invariance", m, n, k, args.trials, args.seed])
    return result, k, {"deviation_tol": 1e-9}, [], digest, 0


_HANDLERS = {
    "schmidt": _cmd_schmidt,
    "norm": _cmd_norm,
    "detect": _cmd_detect,
    "blockpos": _cmd_blockpos,
    "witness": _cmd_witness,
    "oracle": _cmd_oracle,
    "probe-conjecture": _cmd_probe,
    "gen": _cmd_gen,
    "invariance": _cmd_invariance,
}


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--tol", type=float, default=None,
                        help="decision tolerance of the command (default per command)")
    common.add_argument("--restarts", type=int, default=32, help="see-saw restarts")
    common.add_argument("--max-iter", type=int, default=500, help="see-saw iteration cap")
    common.add_argument("--seed", type=int, default=0, help="seed for all randomized steps")
    common.add_argument("--format", choices=("json", "text"), default="json",
                        help="report rendering (json is the stable interface)")
    common.add_argument("--out", default=None,
                        help="write the report here instead of stdout (gen: the state file)")
    common.add_argument("--inject-svd-failure", action="store_true",
                        help="testing hook: force the next svd to fail")

    parser = _Parser(prog="entnorms",
                     description="Entanglement norms: bounds, certificates, detection")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("schmidt", parents=[common], help="Schmidt decomposition of a state vector")
    p.add_argument("file")

    p = sub.add_parser("norm", parents=[common], help="norm values and certified brackets")
    p.add_argument("--which", required=True,
                   choices=("sk", "gamma", "radius", "k2", "k2dual", "sk-dual-vec"))
    p.add_argument("--k", type=int, required=True)
    p.add_argument("file")

    p = sub.add_parser("detect", parents=[common], help="Schmidt-number detection criteria")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--filter", action="store_true", help="try a local filter first")
    p.add_argument("--weak", action="store_true", help="trace-norm variant instead")
    p.add_argument("file")

    p = sub.add_parser("blockpos", parents=[common], help="k-block positivity check")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--require-decision", action="store_true",
                   help="exit 3 when the verdict is undecided")
    p.add_argument("file")

    p = sub.add_parser("witness", parents=[common], help="best duality witness for gamma_k")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("file")

    p = sub.add_parser("oracle", parents=[common], help="LP decomposition upper bound on gamma_k")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--budget", type=int, default=2000, help="generator pool size")
    p.add_argument("file")

    p = sub.add_parser("probe-conjecture", parents=[common],
                       help="compare 2*gamma_k - 1 against the robustness bracket")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("file")

    p = sub.add_parser("gen", parents=[common], help="generate a seeded test state")
    p.add_argument("--kind", required=True, choices=states.KINDS)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--p", type=float, default=None)
    p.add_argument("--terms", type=int, default=None)
    p.add_argument("--rank", type=int, default=None)

    p = sub.add_parser("invariance", parents=[common],
                       help="run the isometry-invariance property suite")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--m", type=int, default=3)
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--trials", type=int, default=20)

    return parser


def _render_text(report: dict) -> str:
    lines: list[str] = []

    def emit(key, value, indent):
        pad = "  " * indent
        if isinstance(value, dict):
            lines.append(f"{pad}{key}:")
            for kk, vv in value.items():
                emit(kk, vv, indent + 1)
        elif isinstance(value, list) and value and isinstance(value[0], (dict, list)):
            lines.append(f"{pad}{key}:")
            for i, vv in enumerate(value):
                emit(str(i), vv, indent + 1)
        else:
            lines.append(f"{pad}{key}: {value}")

    for key, value in report.items():
        emit(key, value, 0)
    return "\n".join(lines) + "\n"


def run(argv=None) -> int:
    """Execute one command; returns the process exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"entnorms: error: {exc}", file=sys.stderr)
        return 1
    except SystemExit as exc:  # --help
        return int(exc.code or 0)

    if args.inject_svd_failure:
        inject_svd_failure(True)
    start = time.perf_counter()
    try:
        result, k, tolerances, warnings, digest, forced = _HANDLERS[args.command](args)
    except (ValueError, OSError) as exc:
        print(f"entnorms: error: {exc}", file=sys.stderr)
        return 1
    except RuntimeError as exc:
        print(f"entnorms: numerical failure: {exc}", file=sys.stderr)
        return 2
    finally:
        if args.inject_svd_failure:
            inject_svd_failure(False)

    report = {
        "command": args.command,
        "inputs": digest,
        "k": k,
        "result": result,
        "tolerances": tolerances,
        "seed": args.seed,
        "wall_time_ms": round((time.perf_counter() - start) * 1000.0, 3),
        "warnings": warnings,
    }
    rendered = (
        json.dumps(report, indent=2) + "\n"
        if args.format == "json"
        else _render_text(report)
    )
    if args.command != "gen" and args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(rendered)
    else:
        sys.stdout.write(rendered)
    return forced


def main() -> None:
    sys.exit(run(sys.argv[1:]))
