"""Command-line front end.

Exit codes: 0 all checks pass, 1 usage or I/O error, 2 a mathematical
inequality failed, 3 the quadrature was inconclusive.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .catalog import CATALOG_IDS, verify_example
from .config import RunConfig
from .entropy import (
    QuantumChannel,
    entropy_spec,
    extensivity_trend,
    family_state,
    min_output_entropy,
    proposition_check,
)
from .exceptions import DefinettiError
from .linalg import (
    DensityOperator,
    matrix_from_json,
    matrix_to_json,
    random_density,
    subsystem_count,
)
from .symmetric import symmetric_purification, symmetric_residual, sym_projector, trace_out_ancillas
from .theorem import TheoremParams, error_bound, gentle_lemma_check, main_text_bound, verify_theorem
from .twirl import gamma_operator

EXIT_OK, EXIT_USAGE, EXIT_FAIL, EXIT_INCONCLUSIVE = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# -- output ---------------------------------------------------------------


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    return obj


def dump_json(obj) -> str:
    return json.dumps(_jsonable(obj), sort_keys=True, indent=2)


def render(payload: dict, rows: list[dict], columns: list[str], fmt: str) -> str:
    """JSON (the whole payload) or a CSV/text table of ``rows``."""
    if fmt == "json":
        return dump_json(payload)
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=columns, extrasaction="ignore", lineterminator="\n")
        w.writeheader()
        for row in rows:
            w.writerow({c: _cell(row.get(c)) for c in columns})
        return buf.getvalue().rstrip("\n")
    cells = [[_cell(row.get(c)) for c in columns] for row in rows]
    widths = [max([len(c)] + [len(r[i]) for r in cells]) for i, c in enumerate(columns)]
    lines = ["  ".join(c.ljust(w) for c, w in zip(columns, widths))]
    lines += ["  ".join(v.ljust(w) for v, w in zip(r, widths)) for r in cells]
    return "\n".join(lines)


def _cell(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "pass" if v else "fail"
    if isinstance(v, float):
        return f"{v:.10g}"
    return "" if v is None else str(v)


# -- shared argument handling ---------------------------------------------


def _add_common(p: argparse.ArgumentParser):
    p.add_argument("--config", help="JSON file mirroring RunConfig")
    p.add_argument("--format", choices=("json", "csv", "text"))
    p.add_argument("--seed", type=int)
    p.add_argument("--resolution", type=int)
    p.add_argument("--starts", type=int)


def _add_state(p: argparse.ArgumentParser):
    p.add_argument("--state", help=f"family name: {', '.join(CATALOG_IDS)}, cat, iid0, iidplus, mixed")
    p.add_argument("--state-file", help="JSON matrix {rows, cols, entries}")
    p.add_argument("--d", type=int, default=2)


def _config(args) -> RunConfig:
    cfg = RunConfig.load(args.config) if args.config else RunConfig()
    updates = {}
    if args.resolution is not None:
        updates.setdefault("quadrature", {})["resolution"] = args.resolution
    if args.seed is not None:
        updates.setdefault("quadrature", {})["seed"] = args.seed
        updates.setdefault("optimizer", {})["seed"] = args.seed
    if args.starts is not None:
        updates.setdefault("optimizer", {})["starts"] = args.starts
    if args.format is not None:
        updates["format"] = args.format
    return cfg.replace(**updates) if updates else cfg


def _load_state(args, N: int | None) -> tuple[np.ndarray, int]:
    if bool(args.state) == bool(args.state_file):
        raise UsageError("give exactly one of --state and --state-file")
    if args.state_file:
        m = matrix_from_json(json.loads(Path(args.state_file).read_text()))
        subsystem_count(m.shape[0], args.d)
        return m, args.d
    if N is None:
        raise UsageError("--N is required with --state")
    return family_state(args.state, N)


def _n_range(args) -> range:
    lo = args.N_min
    hi = args.N if args.N is not None else 6
    if lo > hi:
        raise UsageError("--N-min exceeds --N")
    return range(lo, hi + 1)


def _channel(args) -> QuantumChannel:
    if args.channel:
        return QuantumChannel.load(args.channel)
    name = args.channel_name
    if name == "identity":
        return QuantumChannel.identity(args.d)
    if name == "dephasing":
        return QuantumChannel.dephasing(args.p, args.d)
    return QuantumChannel.depolarizing(args.p, args.d)


# -- subcommands ----------------------------------------------------------


def _bound_row(N, n, k, r, d) -> dict:
    p = TheoremParams(n, k, r, d)
    return {"N": N, "n": n, "k": k, "r": r, "d": d, "epsilon": error_bound(p),
            "main_text_epsilon": main_text_bound(N, n, r, d)}


def cmd_bound(args, cfg):
    rows = []
    if args.grid:
        for item in json.loads(Path(args.grid).read_text()):
            d = item.get("d", 2)
            if "k" in item:
                n, k, r = item["n"], item["k"], item["r"]
                rows.append(_bound_row(n + k, n, k, r, d))
            else:
                N, n, r = item["N"], item["n"], item["r"]
                rows.append(_bound_row(N, n, N - n, r, d))
    elif args.alpha is not None:
        if not 0 < args.alpha < 1 or args.N is None:
            raise UsageError("--alpha needs 0 < alpha < 1 and --N (optionally --N-max)")
        for N in range(args.N, (args.N_max or args.N) + 1):
            r = round(N**args.alpha)
            rows.append(_bound_row(N, N - r, r, r, args.d) | {"alpha": args.alpha})
    elif None not in (args.n, args.k, args.r):
        rows.append(_bound_row(args.n + args.k, args.n, args.k, args.r, args.d))
    elif None not in (args.N, args.n, args.r):
        rows.append(_bound_row(args.N, args.n, args.N - args.n, args.r, args.d))
    else:
        raise UsageError("bound needs --n --k --r, --N --n --r, --alpha --N, or --grid")
    cols = ["N", "n", "k", "r", "d", "epsilon", "main_text_epsilon"]
    return {"rows": rows, "config": cfg.to_dict()}, rows, cols, EXIT_OK


def cmd_verify(args, cfg):
    if None in (args.n, args.k, args.r):
        raise UsageError("verify needs --n --k --r")
    rho, d = _load_state(args, args.N if args.N is not None else args.n + args.k)
    report = verify_theorem(rho, d, args.n, args.k, args.r, cfg)
    out = report.to_dict()
    code = {"pass": EXIT_OK, "fail": EXIT_FAIL, "inconclusive": EXIT_INCONCLUSIVE}[report.status]
    rows = [{"check": key, "value": val} for key, val in sorted(report.inequalities.items())]
    rows += [{"check": key, "value": out[key]} for key in
             ("delta", "delta_doubled", "bound_intermediate", "bound_final", "status")]
    return out, rows, ["check", "value"], code


def cmd_catalog(args, cfg):
    ids = CATALOG_IDS if args.id == "all" else (args.id,)
    reports = []
    for ex in ids:
        N = args.N if args.N is not None else 3
        if ex == "Ex4":
            N = 2
        if ex == "Ex6":
            N = min(N, cfg.caps.max_antisym_d)
        n = args.n if args.n is not None and args.n <= N else None
        reports.append(verify_example(ex, N, n, cfg.optimizer).to_dict())
    rows = [{"id": r["id"], "N": r["N"], "n": r["n"], "check": c["name"], "claim": c["claim"],
             "value": c["value"], "status": "pass" if c["passed"] else "fail"}
            for r in reports for c in r["checks"]]
    code = EXIT_OK if all(r["status"] == "pass" for r in reports) else EXIT_FAIL
    payload = {"reports": reports, "config": cfg.to_dict()}
    return payload, rows, ["id", "N", "n", "check", "claim", "value", "status"], code


def cmd_twirl_check(args, cfg):
    n = args.n if args.n is not None else 3
    rng = np.random.default_rng(cfg.quadrature.seed)
    p = sym_projector(n, args.d).matrix
    rows = []
    for t in range(args.trials):
        dim = args.d**n
        a = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
        res = float(np.max(np.abs(gamma_operator(a, args.d, cfg.caps.max_perm_n) @ p - p)))
        rows.append({"trial": t, "residual": res, "pass": res <= args.tol})
    ok = all(r["pass"] for r in rows)
    payload = {"n": n, "d": args.d, "trials": args.trials, "tolerance": args.tol,
               "max_residual": max(r["residual"] for r in rows), "pass": ok,
               "config": cfg.to_dict()}
    return payload, rows, ["trial", "residual", "pass"], EXIT_OK if ok else EXIT_FAIL


def cmd_purify(args, cfg):
    rho, d = _load_state(args, args.N)
    N = subsystem_count(rho.shape[0], d)
    DensityOperator(rho, d, N).validate(cfg.tolerances.herm, cfg.tolerances.psd, cfg.tolerances.tr)
    psi = symmetric_purification(rho, d, tol_psd=cfg.tolerances.psd, tol_herm=cfg.tolerances.herm,
                                 cap=cfg.caps.max_perm_n)
    sym_res = symmetric_residual(psi[:, None], N, d * d)
    red_err = float(np.sum(np.abs(np.linalg.eigvalsh(trace_out_ancillas(psi, d, N) - rho))))
    ok = sym_res <= 1e-8 and red_err <= 1e-8
    payload = {"N": N, "d": d, "effective_d": d * d, "norm": float(np.linalg.norm(psi)),
               "symmetric_residual": sym_res, "reduction_error": red_err, "pass": ok,
               "config": cfg.to_dict()}
    if args.out:
        Path(args.out).write_text(dump_json(matrix_to_json(psi)) + "\n")
        payload["purification_file"] = args.out
    else:
        payload["purification"] = matrix_to_json(psi)
    rows = [{"quantity": k, "value": payload[k]}
            for k in ("norm", "symmetric_residual", "reduction_error", "pass")]
    return payload, rows, ["quantity", "value"], EXIT_OK if ok else EXIT_FAIL


_TREND_COLS = ["N", "value", "floor", "slack", "pass"]


def cmd_entropy(args, cfg):
    channel = _channel(args)
    moe = min_output_entropy(channel, cfg.optimizer)
    rows = [r.to_dict() for r in proposition_check(entropy_spec(channel.d_in), args.family,
                                                     _n_range(args), cfg.optimizer)]
    ok = all(r["pass"] for r in rows)
    payload = {"family": args.family, "min_output_entropy": moe.value,
               "min_output_entropy_certified": moe.certified, "rows": rows,
               "config": cfg.to_dict()}
    return payload, rows, _TREND_COLS, EXIT_OK if ok else EXIT_FAIL


def cmd_extensivity(args, cfg):
    channel = _channel(args)
    rows = [r.to_dict() for r in extensivity_trend(channel, args.family, _n_range(args),
                                                     cfg.optimizer)]
    ok = all(r["pass"] for r in rows)
    payload = {"family": args.family, "rows": rows, "config": cfg.to_dict()}
    return payload, rows, _TREND_COLS, EXIT_OK if ok else EXIT_FAIL


def cmd_gentle_check(args, cfg):
    n = args.n if args.n is not None else 2
    dim = args.d**n
    rng = np.random.default_rng(cfg.quadrature.seed)
    rows = []
    for t in range(args.trials):
        size = int(rng.integers(1, 5))
        w = rng.dirichlet(np.ones(size))
        family = []
        for j in range(size):
            rho = random_density(dim, rng)
            rank = int(rng.integers(0, dim + 1))
            g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
            q, _ = np.linalg.qr(g)
            proj = q[:, :rank] @ q[:, :rank].conj().T
            family.append((rho, proj, w[j]))
        lhs, rhs, ok = gentle_lemma_check(family)
        rows.append({"trial": t, "lhs": lhs, "rhs": rhs, "pass": ok})
    violations = sum(not r["pass"] for r in rows)
    payload = {"trials": args.trials, "dim": dim, "violations": violations, "rows": rows,
               "config": cfg.to_dict()}
    return payload, rows, ["trial", "lhs", "rhs", "pass"], EXIT_OK if not violations else EXIT_FAIL


# -- parser -----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="definetti", description="Numerical checks of the global de Finetti "
                     "representation for symmetric quantum states.")
    parser.add_argument("--version", action="version", version=f"definetti {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("bound", help="ε over parameter tuples")
    _add_common(p)
    for flag in ("--n", "--k", "--r", "--N", "--N-max"):
        p.add_argument(flag, type=int)
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--alpha", type=float, help="n = N - N^α, r = k = N^α (rounded)")
    p.add_argument("--grid", help="JSON list of {n,k,r,d} or {N,n,r,d}")
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("verify", help="decomposition pipeline on one state")
    _add_common(p)
    _add_state(p)
    for flag in ("--n", "--k", "--r", "--N"):
        p.add_argument(flag, type=int)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("catalog", help="checks of the example states")
    _add_common(p)
    p.add_argument("id", nargs="?", default="all", choices=("all",) + CATALOG_IDS)
    p.add_argument("--N", type=int)
    p.add_argument("--n", type=int)
    p.set_defaults(func=cmd_catalog)

    p = sub.add_parser("twirl-check", help="Γ P_Sym = P_Sym on random operators")
    _add_common(p)
    p.add_argument("--n", type=int)
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--trials", type=int, default=10)
    p.add_argument("--tol", type=float, default=1e-8)
    p.set_defaults(func=cmd_twirl_check)

    p = sub.add_parser("purify", help="symmetric purification of a state")
    _add_common(p)
    _add_state(p)
    p.add_argument("--N", type=int)
    p.add_argument("--out", help="write the purification vector to this file")
    p.set_defaults(func=cmd_purify)

    for name, func, help_ in (
        ("entropy", cmd_entropy, "S(ρ^N)/N against min_σ S(σ) with finite-size slack"),
        ("extensivity", cmd_extensivity, "S(E^{⊗N}(ρ^N))/N against min output entropy"),
    ):
        p = sub.add_parser(name, help=help_)
        _add_common(p)
        p.add_argument("--channel", help="JSON list of Kraus matrices")
        p.add_argument("--channel-name", choices=("identity", "dephasing", "depolarizing"),
                       default="identity" if name == "entropy" else "dephasing")
        p.add_argument("--p", type=float, default=1.0)
        p.add_argument("--d", type=int, default=2)
        p.add_argument("--family", default="cat")
        p.add_argument("--N", type=int, help="largest N (default 6)")
        p.add_argument("--N-min", type=int, default=2)
        p.set_defaults(func=func)

    p = sub.add_parser("gentle-check", help="gentle measurement inequality on random families")
    _add_common(p)
    p.add_argument("--n", type=int)
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--trials", type=int, default=100)
    p.set_defaults(func=cmd_gentle_check)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        cfg = _config(args)
        payload, rows, cols, code = args.func(args, cfg)
    except UsageError as exc:
        print(f"definetti: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DefinettiError, OSError, ValueError, KeyError, TypeError) as exc:
        print(f"definetti: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        print(render(payload, rows, cols, cfg.format))
        sys.stdout.flush()
    except BrokenPipeError:
        # downstream closed early (e.g. piped into head); silence the flush at exit
        sys.stdout = open(os.devnull, "w")
    return code


if __name__ == "__main__":
    sys.exit(main())
