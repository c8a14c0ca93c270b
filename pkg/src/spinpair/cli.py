"""Command-line front end: ``spinpair {single,pair,criteria,scan,verify,sample}``.

stdout carries only the report (JSON or CSV); diagnostics and error objects go
to stderr. Exit codes: 0 success, 1 verification/statistical failure, 2 usage.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import secrets
import sys
from dataclasses import dataclass

import numpy as np
from scipy import stats

from spinpair import __version__, bloch, correlations, oracle, pairstate, sampler
from spinpair.bloch import BasisSpec
from spinpair.pairstate import PairKind, PairState

log = logging.getLogger("spinpair")

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

#: p^2 + q^2 mismatch the CLI silently renormalizes (8-significant-digit inputs)
CLI_NORM_SLACK = 1e-7

ANGLE_FLAGS = ("alpha", "theta", "phi", "chi", "delta", "chi2", "delta2")
SCAN_PARAMS = ("alpha", "delta", "chi", "delta2", "chi2")
SCAN_COLUMNS = ("p_ee", "p_eeb", "p_ebe", "p_ebeb", "p_plus", "p_minus", "rho", "p_a_e", "p_b_e")


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    kind: str = "minus"
    p: float | None = None
    q: float | None = None
    alpha: float | None = None
    theta: float | None = None
    phi: float | None = None
    chi: float | None = None
    delta: float | None = None
    chi2: float | None = None
    delta2: float | None = None
    vary: str | None = None
    start: float | None = None
    stop: float | None = None
    steps: int | None = None
    n: int | None = None
    seed: int | None = None
    tol: float = 1e-12
    trials: int = 10000
    workers: int = 1
    format: str = "json"
    normalize: bool = False
    degrees: bool = False
    # flags the chosen subcommand defines; only these are echoed as inputs
    dests: tuple[str, ...] = ()

    @classmethod
    def from_args(cls, ns: argparse.Namespace) -> RunConfig:
        fields = {k: v for k, v in vars(ns).items() if k in cls.__dataclass_fields__}
        cfg = cls(**fields, dests=tuple(k for k in vars(ns) if k != "command"))
        if cfg.degrees:
            for name in ANGLE_FLAGS:
                val = getattr(cfg, name)
                if val is not None:
                    setattr(cfg, name, math.radians(val))
            if cfg.vary is not None:
                cfg.start, cfg.stop = math.radians(cfg.start), math.radians(cfg.stop)
        return cfg

    @property
    def mixed(self) -> bool:
        return self.chi2 is not None or self.delta2 is not None or self.vary in ("chi2", "delta2")

    def inputs(self) -> dict:
        return {k: getattr(self, k) for k in self.dests if getattr(self, k) is not None}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _state_args(p: argparse.ArgumentParser, basis: bool = True) -> None:
    p.add_argument("--kind", choices=["minus", "plus"], default="minus")
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--q", type=float, help="defaults to sqrt(1 - p^2)")
    p.add_argument("--alpha", type=float)
    p.add_argument("--normalize", action="store_true")
    if basis:
        p.add_argument("--chi", type=float)
        p.add_argument("--delta", type=float)
        p.add_argument("--chi2", type=float, help="B's polar angle (mixed-basis mode)")
        p.add_argument("--delta2", type=float, help="B's azimuth (mixed-basis mode)")


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.add_argument("--degrees", action="store_true", help="angle inputs are in degrees")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="spinpair", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    single = sub.add_parser("single", help="one qubit measured along e")
    single.add_argument("--theta", type=float, required=True)
    single.add_argument("--phi", type=float, default=0.0)
    single.add_argument("--chi", type=float, required=True)
    single.add_argument("--delta", type=float, default=0.0)
    _common(single)

    pair = sub.add_parser("pair", help="joint/local statistics of an entangled pair")
    _state_args(pair)
    _common(pair)

    crit = sub.add_parser("criteria", help="singlet/triplet/equal-weight criteria")
    _state_args(crit, basis=False)
    crit.add_argument("--chi", type=float, help="basis for basis-dependent checks (default pi/2)")
    crit.add_argument("--delta", type=float, help="azimuth for basis-dependent checks")
    _common(crit)

    scan = sub.add_parser("scan", help="fringe sweep over one parameter")
    _state_args(scan)
    scan.add_argument("--vary", choices=SCAN_PARAMS, required=True)
    scan.add_argument("--from", dest="start", type=float, required=True)
    scan.add_argument("--to", dest="stop", type=float, required=True)
    scan.add_argument("--steps", type=int, required=True)
    _common(scan)

    verify = sub.add_parser("verify", help="closed forms vs brute-force projection")
    verify.add_argument("--trials", type=int, default=10000)
    verify.add_argument("--seed", type=int, default=None)
    verify.add_argument("--tol", type=float, default=1e-12)
    verify.add_argument("--workers", type=int, default=1)
    _common(verify)

    samp = sub.add_parser("sample", help="Monte Carlo outcome counts")
    _state_args(samp)
    samp.add_argument("--n", type=int, required=True)
    samp.add_argument("--seed", type=int, default=None)
    _common(samp)
    return parser


def _angle(x: float | None, default: float = 0.0) -> float:
    return default if x is None else x


def make_state(cfg: RunConfig) -> PairState:
    p = cfg.p
    if cfg.q is None:
        if not 0.0 <= p <= 1.0:
            raise UsageError(f"--p must lie in [0, 1] when --q is omitted, got {p}")
        q = math.sqrt(1.0 - p * p)
    else:
        q = cfg.q
    if p < 0 or q < 0:
        raise UsageError("--p and --q must be non-negative")
    normalize = cfg.normalize
    norm2 = p * p + q * q
    if not normalize and abs(norm2 - 1.0) <= CLI_NORM_SLACK:
        if abs(norm2 - 1.0) > pairstate.NORM_TOL:
            log.info("renormalizing p, q (p^2 + q^2 = %r)", norm2)
        normalize = True
    try:
        return pairstate.make_pair(cfg.kind, p, q, _angle(cfg.alpha), normalize=normalize)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def make_bases(cfg: RunConfig) -> tuple[BasisSpec, BasisSpec | None]:
    try:
        e = BasisSpec(_angle(cfg.chi), _angle(cfg.delta))
        if not cfg.mixed:
            return e, None
        e2 = BasisSpec(_angle(cfg.chi2, e.chi), _angle(cfg.delta2, _angle(cfg.delta)))
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    return e, e2


def pair_results(state: PairState, e: BasisSpec, e2: BasisSpec | None) -> dict:
    j = correlations.joint_probs(state, e, e2)
    summary = correlations.summarize(state, e, e2)
    p_a = j.marginal_a[0]
    p_b = j.marginal_b[0]
    out = {
        "p_ee": j.p_ee,
        "p_eeb": j.p_eeb,
        "p_ebe": j.p_ebe,
        "p_ebeb": j.p_ebeb,
        "p_plus": summary.p_plus,
        "p_minus": summary.p_minus,
        "rho": summary.rho,
        "visibility": summary.visibility,
        "p_a_e": p_a,
        "p_b_e": p_b,
    }
    if e2 is not None:
        out["basis_dot"] = summary.basis_dot
    return out


def cmd_single(cfg: RunConfig) -> tuple[dict, int]:
    try:
        s = bloch.SingleQubitState.from_angles(cfg.theta, _angle(cfg.phi))
        e = BasisSpec(cfg.chi, _angle(cfg.delta))
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    p_e, p_ebar = bloch.single_measure_probs(s, e)
    return {
        "p_e": p_e,
        "p_ebar": p_ebar,
        "delta_p": bloch.single_delta_p(s, e),
        "visibility": bloch.single_visibility(s, e),
    }, EXIT_OK


def cmd_pair(cfg: RunConfig) -> tuple[dict, int]:
    state = make_state(cfg)
    e, e2 = make_bases(cfg)
    return pair_results(state, e, e2), EXIT_OK


def _report_dict(r: correlations.CriterionReport, basis: BasisSpec | None = None) -> dict:
    out = {"verdict": r.verdict.value, "residuals": dict(r.residuals)}
    if r.diagnostics:
        out["diagnostics"] = dict(r.diagnostics)
    if r.note:
        out["note"] = r.note
    if basis is not None:
        out["basis"] = {"chi": basis.chi, "delta": basis.delta}
    return out


def cmd_criteria(cfg: RunConfig) -> tuple[dict, int]:
    state = make_state(cfg)
    chi = _angle(cfg.chi, math.pi / 2)
    results: dict = {}
    try:
        if state.kind is PairKind.MINUS:
            e = BasisSpec(chi, _angle(cfg.delta))
            results["Singlet_4_12"] = _report_dict(correlations.check_singlet(state))
            results["Triplet_4_15"] = _report_dict(correlations.check_triplet(state, e), e)
            try:
                sol = correlations.equal_weight_basis(state)
                results["EqualWeight_4_19"] = {"m2_plus": sol.m2_plus, "m2_minus": sol.m2_minus}
            except (correlations.NoRealSolution, correlations.Disentangled) as exc:
                results["EqualWeight_4_19"] = {"error": type(exc).__name__}
        else:
            # unless a basis is pinned, test each check at its own candidate azimuth
            e_keep = BasisSpec(chi, _angle(cfg.delta, state.alpha / 2))
            e_flip = BasisSpec(chi, _angle(cfg.delta, (state.alpha - math.pi) / 2))
            results["PlusPreserving_5_13"] = _report_dict(
                correlations.check_plus_preserving(state, e_keep), e_keep
            )
            results["PlusToMinus_5_16"] = _report_dict(
                correlations.check_plus_to_minus(state, e_flip), e_flip
            )
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    return results, EXIT_OK


def scan_rows(cfg: RunConfig) -> list[dict]:
    if cfg.steps is None or cfg.steps < 2:
        raise UsageError("--steps must be >= 2")
    if not cfg.start < cfg.stop:
        raise UsageError("--from must be smaller than --to")
    if getattr(cfg, cfg.vary) is not None:
        raise UsageError(f"--{cfg.vary} conflicts with --vary {cfg.vary}")
    rows = []
    for value in np.linspace(cfg.start, cfg.stop, cfg.steps):
        point = RunConfig(**{**vars(cfg), cfg.vary: float(value)})
        state = make_state(point)
        e, e2 = make_bases(point)
        res = pair_results(state, e, e2)
        rows.append({cfg.vary: float(value), **{k: res[k] for k in SCAN_COLUMNS}})
    return rows


def cmd_scan(cfg: RunConfig) -> tuple[dict, int]:
    return {"vary": cfg.vary, "rows": scan_rows(cfg)}, EXIT_OK


def _seed(cfg: RunConfig) -> int:
    if cfg.seed is None:
        cfg.seed = secrets.randbits(32)
        print(json.dumps({"info": "generated seed", "seed": cfg.seed}), file=sys.stderr)
    return cfg.seed


def cmd_verify(cfg: RunConfig) -> tuple[dict, int]:
    if cfg.trials < 1:
        raise UsageError("--trials must be >= 1")
    if not cfg.tol > 0:
        raise UsageError("--tol must be positive")
    summary = oracle.verify_closed_forms(cfg.trials, _seed(cfg), cfg.tol, workers=max(cfg.workers, 1))
    results = {
        "passed": summary.passed,
        "max_deviation": summary.max_deviation,
        "failing": summary.failing,
    }
    return results, EXIT_OK if summary.passed else EXIT_FAIL


#: healthy runs stay below this chi-square quantile; beyond it the sample command exits 1
SAMPLE_QUANTILE = 0.999


def cmd_sample(cfg: RunConfig) -> tuple[dict, int]:
    if cfg.n is None or cfg.n < 1:
        raise UsageError("--n must be >= 1")
    state = make_state(cfg)
    e, e2 = make_bases(cfg)
    j = correlations.joint_probs(state, e, e2)
    counts = sampler.sample(j, cfg.n, _seed(cfg))
    results = {
        "counts": list(counts.counts),
        "n": counts.n,
        "frequencies": list(counts.frequencies),
        "expected": list(j.as_tuple()),
    }
    code = EXIT_OK
    try:
        stat, dof = sampler.chi_square(counts, j)
    except sampler.InsufficientExpected:
        results.update(chi2=None, dof=None, chi2_threshold=None, chi2_pass=None)
    else:
        threshold = float(stats.chi2.ppf(SAMPLE_QUANTILE, dof))
        ok = stat <= threshold
        results.update(chi2=stat, dof=dof, chi2_threshold=threshold, chi2_pass=ok)
        code = EXIT_OK if ok else EXIT_FAIL
    return results, code


COMMANDS = {
    "single": cmd_single,
    "pair": cmd_pair,
    "criteria": cmd_criteria,
    "scan": cmd_scan,
    "verify": cmd_verify,
    "sample": cmd_sample,
}


def _jsonable(x):
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, float) and math.isinf(x):
        return "inf" if x > 0 else "-inf"
    if isinstance(x, float) and math.isnan(x):
        return "nan"
    return x


def _flatten(d: dict, prefix: str = "") -> dict:
    flat = {}
    for k, v in d.items():
        key = f"{prefix}{k}"
        if isinstance(v, dict):
            flat.update(_flatten(v, key + "."))
        elif isinstance(v, list):
            for i, item in enumerate(v):
                flat[f"{key}.{i}"] = item
        else:
            flat[key] = v
    return flat


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return "inf" if v == math.inf else repr(v)
    return str(v)


def render_csv(command: str, results: dict) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    if command == "scan":
        header = [results["vary"], *SCAN_COLUMNS]
        writer.writerow(header)
        for row in results["rows"]:
            writer.writerow([_cell(row[h]) for h in header])
    else:
        flat = _flatten(results)
        writer.writerow(flat.keys())
        writer.writerow([_cell(v) for v in flat.values()])
    return buf.getvalue()


def render_json(cfg: RunConfig, results: dict) -> str:
    meta = {"version": __version__, "rng_id": None, "seed": None}
    if cfg.command == "sample":
        meta.update(rng_id=sampler.RNG_ID, seed=cfg.seed)
    elif cfg.command == "verify":
        meta.update(rng_id="numpy-pcg64", seed=cfg.seed)
    doc = {"command": cfg.command, "inputs": cfg.inputs(), "results": results, "meta": meta}
    return json.dumps(_jsonable(doc), allow_nan=False) + "\n"


def _fail(kind: str, message: str) -> int:
    print(json.dumps({"error": kind, "message": message}), file=sys.stderr)
    return EXIT_USAGE


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
        cfg = RunConfig.from_args(ns)
        results, code = COMMANDS[cfg.command](cfg)
    except UsageError as exc:
        return _fail("usage", str(exc))
    out = render_csv(cfg.command, results) if cfg.format == "csv" else render_json(cfg, results)
    sys.stdout.write(out)
    return code


if __name__ == "__main__":
    sys.exit(main())
