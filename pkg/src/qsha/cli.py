"""
Command-line front end.

Exit codes: 0 when everything verified, 1 when a mathematical counterexample
(or failed internal assertion) was found, 2 on usage or input errors.
"""

import argparse
import json
import logging
import multiprocessing
import os
import signal
import sys
import time
from contextlib import contextmanager

from . import poly
from .errors import ConsistencyError, QshaError, ResourceError, StructuralError
from .paths import build_potential, cyclic_derivative, verify_closed_form_derivatives
from .quiver import (
    CartanData,
    QuiverWithSymmetrizer,
    cartan_to_quiver,
    default_weights,
    extend_quiver,
    require_valid,
)
from .reps import (
    QuiverRep,
    check_euler_trace_identity,
    check_lemma_ZJ,
    is_critical,
    trace_potential,
    zeros,
)
from .shuffle import GENERIC, TWISTED, KernelConfig, ShuffleElement, shuffle_mul
from .yangian import SUITES, build_context, verify_pair

log = logging.getLogger("qsha")

EXIT_OK, EXIT_COUNTEREXAMPLE, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _load_json(path):
    try:
        if path == "-":
            return json.load(sys.stdin)
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"malformed JSON in {path}: {exc}") from None


def _load_quiver(data):
    """A quiver JSON, or a Cartan JSON turned into its quiver with weights m = D."""
    if isinstance(data, dict) and "A" in data:
        cartan = require_valid(CartanData.from_json(data))
        return cartan_to_quiver(cartan), list(cartan.D)
    if not isinstance(data, dict):
        raise StructuralError("quiver JSON must be an object")
    return QuiverWithSymmetrizer.from_json(data), data.get("vertex_weights")


def _render_text(obj, indent=0):
    pad = "  " * indent
    lines = []
    if isinstance(obj, dict):
        for key, val in obj.items():
            if isinstance(val, (dict, list)) and val:
                lines.append(f"{pad}{key}:")
                lines.extend(_render_text(val, indent + 1))
            else:
                lines.append(f"{pad}{key}: {val}")
    elif isinstance(obj, list):
        for val in obj:
            if isinstance(val, (dict, list)):
                lines.append(f"{pad}-")
                lines.extend(_render_text(val, indent + 1))
            else:
                lines.append(f"{pad}- {val}")
    else:
        lines.append(f"{pad}{obj}")
    return lines


def _emit(report, args):
    if args.format == "text":
        text = "\n".join(_render_text(report)) + "\n"
    else:
        text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    if args.output in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(args.output, "w") as fh:
            fh.write(text)


# -- subcommands -------------------------------------------------------------------

def cmd_cartan_to_quiver(args):
    cartan = require_valid(CartanData.from_json(_load_json(args.input)))
    q = cartan_to_quiver(cartan)
    w = default_weights(q, cartan.D)
    report = q.to_json(vertex_weights=cartan.D)
    report["weights"] = w.to_json()
    return EXIT_OK, report


def cmd_potential(args):
    q, _ = _load_quiver(_load_json(args.input))
    eq = extend_quiver(q)
    w = build_potential(eq)
    derivs = {g.name: cyclic_derivative(w, g).to_json() for g in eq.generators()}
    report = {
        "potential": w.to_json(),
        "derivatives": derivs,
        "closed_forms_match": verify_closed_form_derivatives(eq),
    }
    return EXIT_OK, report


def cmd_shuffle(args):
    q, m_vertex = _load_quiver(_load_json(args.quiver))
    if m_vertex is None:
        raise UsageError("the quiver JSON needs vertex_weights for the shuffle kernels")
    weights = default_weights(q, m_vertex)
    mode = TWISTED if args.twisted else GENERIC
    cfg = KernelConfig(q, weights, mode, corrupt_sign=args.corrupt_sign)
    f1 = ShuffleElement.from_json(_load_json(args.f1))
    f2 = ShuffleElement.from_json(_load_json(args.f2))
    for f in (f1, f2):
        if len(f.grade) != q.n_vertices:
            raise StructuralError(f"grade {list(f.grade)} does not match {q.n_vertices} vertices")
    try:
        product = shuffle_mul(f1, f2, cfg)
    except ConsistencyError as exc:
        return EXIT_COUNTEREXAMPLE, {"error": str(exc)}
    return EXIT_OK, product.to_json(mode)


def _verify_worker(payload):
    cartan_json, k, l, suites, R, corrupt, timing, max_terms = payload
    poly.set_term_cap(max_terms)
    ctx = build_context(CartanData.from_json(cartan_json), corrupt_sign=corrupt)
    start = time.perf_counter()
    ok, report = verify_pair(ctx, k, l, suites, R)
    if timing:
        report["timing_ms"] = round((time.perf_counter() - start) * 1000, 3)
    return ok, report


@contextmanager
def _deadline(seconds):
    if not seconds or not hasattr(signal, "SIGALRM"):
        yield
        return

    def _expire(signum, frame):
        raise ResourceError(f"time limit of {seconds} s exceeded")

    old = signal.signal(signal.SIGALRM, _expire)
    signal.setitimer(signal.ITIMER_REAL, seconds)
    try:
        yield
    finally:
        signal.setitimer(signal.ITIMER_REAL, 0)
        signal.signal(signal.SIGALRM, old)


def _parse_pairs(spec, n):
    if spec == "all":
        return [(k, l) for k in range(n) for l in range(n)]
    try:
        k, l = (int(x) for x in spec.split(","))
    except ValueError:
        raise UsageError(f"--pairs expects 'all' or 'k,l', got {spec!r}") from None
    if not (0 <= k < n and 0 <= l < n):
        raise UsageError(f"pair ({k}, {l}) out of range for {n} vertices")
    return [(k, l)]


def cmd_verify(args):
    cartan = require_valid(CartanData.from_json(_load_json(args.input)))
    ctx = build_context(cartan)  # validates the context invariants up front
    suites = SUITES if args.suite == "all" else (args.suite,)
    pairs = _parse_pairs(args.pairs, cartan.n)
    payloads = [
        (cartan.to_json(), k, l, suites, args.max_degree, args.corrupt_sign, args.timing, args.max_terms)
        for k, l in pairs
    ]
    if args.jobs > 1 and len(payloads) > 1:
        with multiprocessing.get_context("fork").Pool(args.jobs) as pool:
            pending = pool.map_async(_verify_worker, payloads)
            try:
                results = pending.get(timeout=args.timeout_s)
            except multiprocessing.TimeoutError:
                pool.terminate()
                raise ResourceError(f"time limit of {args.timeout_s} s exceeded") from None
    else:
        with _deadline(args.timeout_s):
            results = [_verify_worker(p) for p in payloads]
    ok = all(r[0] for r in results)
    report = {
        "cartan": cartan.to_json(),
        "coprime_symmetrizer": ctx.coprime,
        "suite": args.suite,
        "ok": ok,
        "pairs": [r[1] for r in results],
    }
    if args.corrupt_sign:
        report["corrupt_sign"] = True
    return (EXIT_OK if ok else EXIT_COUNTEREXAMPLE), report


def cmd_rep_check(args):
    q, _ = _load_quiver(_load_json(args.quiver))
    eq = extend_quiver(q)
    rep = QuiverRep.from_json(_load_json(args.rep), eq)
    w = build_potential(eq)
    cut = eq.H
    non_cut = eq.H_op + eq.B
    missing = [g.name for g in non_cut if g.name not in rep.matrices]
    if missing:
        raise StructuralError(f"representation lacks matrices for {missing}")
    full = rep.with_matrices({a.name: zeros(*rep.shape(a)) for a in cut if a.name not in rep.matrices})
    base = QuiverRep(eq, rep.dim, {g.name: rep.matrices[g.name] for g in non_cut})
    lemma = check_lemma_ZJ(base, w, cut, trials=args.trials, seed=args.seed)
    euler = check_euler_trace_identity(full, w, cut)
    report = {
        "trW": str(trace_potential(full, w)),
        "critical": is_critical(full, w),
        "J": lemma.in_J,
        "lemma_ZJ": lemma.holds,
        "euler_identity": euler,
    }
    if lemma.witness is not None:
        report["witness"] = {
            "l": {n: [[str(x) for x in row] for row in m.tolist()] for n, m in sorted(lemma.witness.items())},
            "trW": str(lemma.witness_trace),
        }
    ok = lemma.holds and euler
    return (EXIT_OK if ok else EXIT_COUNTEREXAMPLE), report


# -- entry point ---------------------------------------------------------------------

def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--output", "-o", default="-", help="output path; '-' for standard output")
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--max-terms", type=int, default=poly.DEFAULT_TERM_CAP)

    parser = argparse.ArgumentParser(
        prog="qsha", description="Quivers with symmetrizer, shuffle algebras and Yangian relations."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("cartan-to-quiver", parents=[common], help="quiver, symmetrizer and weights of a Cartan matrix")
    p.add_argument("input")
    p.set_defaults(func=cmd_cartan_to_quiver)

    p = sub.add_parser("potential", parents=[common], help="potential W^L and its cyclic derivatives")
    p.add_argument("input", help="quiver JSON (or Cartan JSON)")
    p.set_defaults(func=cmd_potential)

    p = sub.add_parser("shuffle", parents=[common], help="shuffle product of two elements")
    p.add_argument("f1")
    p.add_argument("f2")
    p.add_argument("quiver", help="quiver JSON with vertex_weights (or Cartan JSON)")
    p.add_argument("--twisted", action="store_true", help="sign-twisted product at t1=t2=hbar/2, t3=-hbar")
    p.add_argument("--corrupt-sign", action="store_true", help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_shuffle)

    p = sub.add_parser("verify", parents=[common], help="verify the Yangian relations for a Cartan matrix")
    p.add_argument("input")
    p.add_argument("--suite", choices=("y1", "serre", "closed-forms", "all"), default="all")
    p.add_argument("--max-degree", type=int, default=3, help="mode bound R for the coefficientwise check")
    p.add_argument("--pairs", default="all", help="'all' or 'k,l' (0-based)")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--timeout-s", type=float, default=None)
    p.add_argument("--timing", action="store_true", help="include per-pair timings (breaks byte-identical output)")
    p.add_argument("--corrupt-sign", action="store_true", help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("rep-check", parents=[common], help="evaluate W^L on a representation")
    p.add_argument("quiver")
    p.add_argument("rep")
    p.add_argument("--trials", type=int, default=20)
    p.set_defaults(func=cmd_rep_check)
    return parser


def _setup_logging():
    level = os.environ.get("QSHA_LOG", "WARNING").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING), format="%(levelname)s %(name)s: %(message)s")


def main(argv=None):
    _setup_logging()
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        poly.set_term_cap(args.max_terms)
        if getattr(args, "max_degree", 0) < 0 or getattr(args, "jobs", 1) < 1:
            raise UsageError("--max-degree must be >= 0 and --jobs >= 1")
        code, report = args.func(args)
    except (UsageError, QshaError, ValueError) as exc:
        print(f"qsha: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    finally:
        poly.set_term_cap(poly.DEFAULT_TERM_CAP)
    _emit(report, args)
    return code


if __name__ == "__main__":
    sys.exit(main())
