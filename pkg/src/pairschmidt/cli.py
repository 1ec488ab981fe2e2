"""Command-line front end.

Exit codes: 0 success, 1 property failure, 2 parse/ingest error,
3 normalization error, 4 argument error.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .errors import NormalizationError, RankError, SymmetryError
from .measures import (
    ORACLE_MAX_ENTRIES,
    analyze,
    brute_force_oracle,
    entropy_closed_form,
    reduced_density,
    verify_det_maximum,
)
from .states import (
    DistinguishableState,
    Family,
    TAU_NORM,
    haar_unitary,
    is_normalized,
    norm,
    normalize,
    random_state,
    transform_basis,
)
from .statefile import StateFileError, dump_state, dumps, format_number, load_state, report_document, sha256

EXIT_OK = 0
EXIT_PROPERTY = 1
EXIT_PARSE = 2
EXIT_NORM = 3
EXIT_ARGS = 4

INVARIANCE_TOL = 1e-9
ORACLE_TOL = 1e-12
CLOSED_FORM_TOL = 1e-10


class _Exit(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise _Exit(EXIT_ARGS, message)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", metavar="PATH", help="write output here instead of stdout")
    common.add_argument("--seed", type=int, default=0, help="random seed (default 0)")

    parser = _Parser(
        prog="pairschmidt",
        description="Canonical decompositions and correlation measures for two-particle states.",
        epilog="exit codes: 0 ok, 1 property failure, 2 parse/ingest error, 3 normalization error, 4 argument error",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("analyze", parents=[common], help="correlation report for a state file")
    p.add_argument("input", help="state file (JSON)")
    p.add_argument("--renormalize", action="store_true", help="rescale instead of rejecting unnormalized input")
    p.add_argument("--bits", action="store_true", help="report entropies in bits")
    p.add_argument("--emit-basis", action="store_true", help="include the canonical basis unitaries")

    p = sub.add_parser("random", parents=[common], help="write a random state file")
    p.add_argument("family", choices=[f.value for f in Family])
    p.add_argument("dims", type=int, nargs="+", help="N for identical particles, N M for distinguishable")
    p.add_argument("--rank", type=int, default=None, help="canonical rank (Slater blocks for fermions)")

    p = sub.add_parser("verify", parents=[common], help="basis-invariance and oracle checks")
    p.add_argument("input")
    p.add_argument("--trials", type=int, default=100, help="number of Haar basis changes (default 100)")
    p.add_argument("--renormalize", action="store_true", help="rescale instead of rejecting unnormalized input")
    p.add_argument("--tol", type=float, default=INVARIANCE_TOL, help="invariance tolerance (default 1e-9)")

    p = sub.add_parser("detmax", parents=[common], help="verify the determinant maximum for n weights")
    p.add_argument("n", type=int, help="number of weights, 2..8")
    p.add_argument("--probes", type=int, default=10_000, help="random feasible probes (default 10000)")
    return parser


def _read_state(path: str, renormalize: bool):
    try:
        with open(path, "rb") as fh:
            raw = fh.read()
    except OSError as exc:
        raise _Exit(EXIT_PARSE, f"{path}: {exc.strerror}") from None
    try:
        state = load_state(raw.decode("utf-8"))
    except UnicodeDecodeError:
        raise _Exit(EXIT_PARSE, f"{path}: not UTF-8 text") from None
    except (StateFileError, SymmetryError, ValueError) as exc:
        raise _Exit(EXIT_PARSE, f"{path}: {exc}") from None
    renormalized = False
    if not is_normalized(state, TAU_NORM):
        if not renormalize:
            raise _Exit(
                EXIT_NORM,
                f"{path}: tr(M^H M) = {norm(state):.17g}, expected {state.norm_target:g} "
                "(use --renormalize to rescale)",
            )
        try:
            state = normalize(state)
        except NormalizationError as exc:
            raise _Exit(EXIT_NORM, f"{path}: {exc}") from None
        renormalized = True
    return state, raw, renormalized


def _write(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
        return
    with open(out, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def cmd_analyze(args) -> int:
    state, raw, renormalized = _read_state(args.input, args.renormalize)
    report = analyze(state)
    doc = report_document(
        report,
        input_sha256=sha256(raw),
        renormalized=renormalized,
        bits=args.bits,
        emit_basis=args.emit_basis,
    )
    _write(dumps(doc), args.out)
    return EXIT_OK


def cmd_random(args) -> int:
    try:
        state = random_state(args.family, args.dims, rank=args.rank, seed=args.seed)
    except (RankError, ValueError) as exc:
        raise _Exit(EXIT_ARGS, str(exc)) from None
    _write(dump_state(state), args.out)
    return EXIT_OK


@dataclass
class PropertyCheck:
    name: str
    tol: float
    worst: float = 0.0
    failed_trial: int | None = None
    failed_seed: int | None = None
    skipped: bool = False

    _failed: bool = field(default=False, repr=False)

    def record(self, deviation: float, trial: int | None = None, seed: int | None = None) -> None:
        self.worst = max(self.worst, deviation)
        if deviation > self.tol and not self._failed:
            self._failed = True
            self.failed_trial, self.failed_seed = trial, seed

    @property
    def passed(self) -> bool:
        return self.skipped or self.worst <= self.tol


def _density_gap(state) -> float:
    formula, oracle = reduced_density(state), brute_force_oracle(state)
    if not isinstance(formula, tuple):
        formula, oracle = (formula,), (oracle,)
    return max(float(np.linalg.norm(f.matrix - o.matrix)) for f, o in zip(formula, oracle))


def _report_deviation(base, other) -> tuple[float, float, float]:
    d_entropy = abs(other.entropy - base.entropy)
    d_rank = float(abs(other.rank - base.rank))
    d_coeff = float(np.max(np.abs(other.decomposition.coefficients - base.decomposition.coefficients)))
    return d_entropy, d_rank, d_coeff


def verify_state(state, trials: int, seed: int, tol: float = INVARIANCE_TOL) -> list[PropertyCheck]:
    """Run the invariance/oracle property suite on one state.

    Trial ``k`` draws its Haar unitaries from ``trial_seeds[k]``, itself
    drawn from ``seed``; the failing trial's seed is kept for reproduction.
    """
    base = analyze(state)
    distinguishable = isinstance(state, DistinguishableState)
    n = state.matrix.shape[0]
    m = state.matrix.shape[1]

    identity = PropertyCheck("identity-transform", 0.0)
    entropy = PropertyCheck("entropy-invariance", tol)
    rank = PropertyCheck("rank-invariance", 0.0)
    coeff = PropertyCheck("coefficient-invariance", tol)
    oracle = PropertyCheck("oracle-density", ORACLE_TOL)
    closed = PropertyCheck("closed-form-entropy", CLOSED_FORM_TOL)

    eye_args = (np.eye(n), np.eye(m)) if distinguishable else (np.eye(n),)
    same = analyze(transform_basis(state, *eye_args))
    identity.record(max(_report_deviation(base, same)))
    closed.record(abs(entropy_closed_form(base.decomposition) - base.entropy))
    if n * m <= ORACLE_MAX_ENTRIES:
        oracle.record(_density_gap(state))
    else:
        oracle.skipped = True

    trial_seeds = np.random.default_rng(seed).integers(0, 2**63 - 1, size=trials)
    for k, ts in enumerate(trial_seeds):
        ts = int(ts)
        rng = np.random.default_rng(ts)
        us = (haar_unitary(n, rng), haar_unitary(m, rng)) if distinguishable else (haar_unitary(n, rng),)
        moved = transform_basis(state, *us)
        rep = analyze(moved)
        d_entropy, d_rank, d_coeff = _report_deviation(base, rep)
        entropy.record(d_entropy, k, ts)
        rank.record(d_rank, k, ts)
        coeff.record(d_coeff, k, ts)
        closed.record(abs(entropy_closed_form(rep.decomposition) - rep.entropy), k, ts)
        if not oracle.skipped:
            oracle.record(_density_gap(moved), k, ts)
    return [identity, entropy, rank, coeff, oracle, closed]


def render_checks(state, trials: int, seed: int, checks: list[PropertyCheck]) -> str:
    dims = "x".join(str(d) for d in state.dims)
    lines = [f"verify: family={state.family.value} dims={dims} trials={trials} seed={seed}"]
    for c in checks:
        if c.skipped:
            lines.append(f"{c.name:<24} SKIP  (dimension above oracle limit)")
            continue
        status = "PASS" if c.passed else "FAIL"
        line = f"{c.name:<24} {status}  worst={format_number(c.worst)}  tol={format_number(c.tol)}"
        if not c.passed and c.failed_trial is not None:
            line += f"  first_failure: trial={c.failed_trial} seed={c.failed_seed}"
        lines.append(line)
    ok = all(c.passed for c in checks)
    lines.append(f"result: {'PASS' if ok else 'FAIL'}")
    return "\n".join(lines) + "\n"


def cmd_verify(args) -> int:
    if args.trials < 1:
        raise _Exit(EXIT_ARGS, "--trials must be >= 1")
    if not args.tol >= 0:
        raise _Exit(EXIT_ARGS, "--tol must be >= 0")
    state, _, _ = _read_state(args.input, args.renormalize)
    checks = verify_state(state, args.trials, args.seed, args.tol)
    _write(render_checks(state, args.trials, args.seed, checks), args.out)
    return EXIT_OK if all(c.passed for c in checks) else EXIT_PROPERTY


def cmd_detmax(args) -> int:
    try:
        rec = verify_det_maximum(args.n, probes=args.probes, seed=args.seed)
    except ValueError as exc:
        raise _Exit(EXIT_ARGS, str(exc)) from None
    f = format_number
    lines = [
        f"detmax: n={rec.n} seed={args.seed}",
        f"uniform weight xi = {f(rec.uniform_xi)}",
        f"uniform determinant = {f(rec.uniform_value)}",
        f"gradient max |component| = {f(rec.gradient_max)}  {'PASS' if rec.gradient_ok else 'FAIL'}",
        "hessian eigenvalues = " + " ".join(f(x) for x in rec.hessian_eigenvalues)
        + f"  {'PASS' if rec.hessian_ok else 'FAIL'}",
        f"random probes = {rec.probes}  max = {f(rec.probe_max)}  exceeding = {rec.probes_exceeding}"
        f"  {'PASS' if rec.probe_ok else 'FAIL'}",
        f"result: {'maximum confirmed' if rec.confirmed else 'NOT confirmed'}",
    ]
    _write("\n".join(lines) + "\n", args.out)
    return EXIT_OK if rec.confirmed else EXIT_PROPERTY


_COMMANDS = {"analyze": cmd_analyze, "random": cmd_random, "verify": cmd_verify, "detmax": cmd_detmax}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return _COMMANDS[args.command](args)
    except _Exit as exc:
        print(f"pairschmidt: error: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
