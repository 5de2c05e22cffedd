"""``cohloss`` command line interface.

Every command prints one JSON report on stdout. Exit status: 0 when all
checks pass, 1 when a physics check fails, 2 on usage or input errors
(nothing is printed on stdout in that case).
"""
import argparse
import json
import sys

import numpy as np

from . import linalg, measures
from .measurement import (
    MUB_PRIMES,
    ProjectiveBasis,
    computational_basis,
    dual_basis_qubit,
    mub_collapse_check,
    mub_family,
    parse_basis,
    project_local,
)
from .measures import MeasureKind
from .search import (
    LossObjective,
    coherence_loss,
    qi_scan,
    search_grid_qubit,
    search_random,
    search_simplex,
)
from .serialization import (
    Report,
    basis_to_dict,
    load_state,
    read_basis,
    state_to_dict,
    tolerance_scale,
    write_state,
)
from .states import counterexample_state

EXACT_TOL = 1e-12
MEASURE_TOL = 1e-9
CHAIN_TOL = 1e-8
COLLAPSE_TOL = 1e-10
EQ2_BASES_PER_SAMPLE = 5


class UsageError(Exception):
    pass


def _max(values, default=0.0):
    values = list(values)
    return max(values) if values else default


def _coherences(rho, kind):
    return {
        "value": measures.coherence(rho, kind),
        "abs_sum": measures.abs_sum(rho),
    }


def cmd_verify_counterexample(args, report):
    kind = MeasureKind.parse(args.measure)
    rho = counterexample_state()
    obj = LossObjective(rho, "B", kind)
    after_comp = project_local(rho, "B", computational_basis(2))
    after_dual = project_local(rho, "B", dual_basis_qubit())
    c_comp = measures.coherence(after_comp, kind)
    c_dual = measures.coherence(after_dual, kind)
    loss_comp = obj.initial - c_comp
    loss_dual = obj.initial - c_dual

    report.results.update(
        measure=kind.value,
        coherence_before=obj.initial,
        coherence_after_computational=c_comp,
        coherence_after_dual=c_dual,
        loss_computational=loss_comp,
        loss_dual=loss_dual,
    )
    report.check("computational_measurement_keeps_state", linalg.max_abs_diff(after_comp.mat, rho.mat), EXACT_TOL)
    report.check("computational_loss_zero", abs(loss_comp), MEASURE_TOL)
    report.check("dual_measurement_gives_maximally_mixed", linalg.max_abs_diff(after_dual.mat, np.eye(4) / 4), EXACT_TOL)
    report.check("dual_coherence_zero", abs(c_dual), MEASURE_TOL)
    # strict: loss_dual > loss_comp, encoded as residual below a negative tolerance
    report.check("refutation_dual_beats_computational", loss_comp - loss_dual, -MEASURE_TOL)


def cmd_measure(args, report):
    kind = MeasureKind.parse(args.measure)
    rho = load_state(args.state)
    report.results.update(
        measure=kind.value,
        dims=[rho.dA, rho.dB],
        value=measures.coherence(rho, kind),
        abs_sum=measures.abs_sum(rho),
        reduced_A=_coherences(rho.reduced("A"), kind),
        reduced_B=_coherences(rho.reduced("B"), kind),
    )


def _resolve_basis(spec, dim):
    return parse_basis(spec, dim, loader=read_basis)


def cmd_project(args, report):
    kind = MeasureKind.parse(args.measure)
    rho = load_state(args.state)
    basis = _resolve_basis(args.basis, rho.side_dim(args.side))
    after = project_local(rho, args.side, basis)
    before_c = measures.coherence(rho, kind)
    after_c = measures.coherence(after, kind)
    report.results.update(
        measure=kind.value,
        side=args.side,
        basis=basis_to_dict(basis),
        coherence_before=before_c,
        coherence_after=after_c,
        loss=before_c - after_c,
        post_state=state_to_dict(after),
    )
    report.check("trace_preserved", abs(complex(np.trace(after.mat)) - 1.0), EXACT_TOL)
    if args.out:
        write_state(args.out, after, name=f"{args.state} measured on {args.side} in {args.basis}")


def cmd_mub(args, report):
    if args.dim not in MUB_PRIMES:
        raise UsageError(f"unsupported dimension {args.dim}: supported dimensions are {list(MUB_PRIMES)}")
    family = mub_family(args.dim)
    report.results.update(dim=args.dim, count=len(family.bases), bases=[basis_to_dict(b) for b in family.bases])
    if args.check:
        report.check("pairwise_unbiased", family.max_residual(), MEASURE_TOL)


def cmd_scan_qi(args, report):
    if args.dB not in MUB_PRIMES:
        raise UsageError(f"unsupported dB {args.dB}: MUBs are available for {list(MUB_PRIMES)}")
    if args.dA < 2:
        raise UsageError("dA must be >= 2")
    if args.dA * args.dB > linalg.MAX_DIM:
        raise UsageError(f"dA * dB must not exceed {linalg.MAX_DIM}")
    kind = MeasureKind.parse(args.measure)
    if kind is MeasureKind.ABS_SUM:
        raise UsageError("scan-qi needs a coherence measure (l1 or relent)")
    scan_rng, basis_rng = linalg.make_rng(args.seed).spawn(2)
    scan = qi_scan(
        args.dA, args.dB, args.samples, scan_rng, kind,
        restarts=args.restarts, max_iters=args.max_iters, search=not args.no_search,
    )
    mubs = mub_family(args.dB).nontrivial()

    ref, additivity, collapse_c, convexity, collapse_state, eq2, search_gap = [], [], [], [], [], [], []
    for s in scan.samples:
        ref.append(abs(s.loss_computational))
        additivity.append(abs(s.coherence - s.weighted_member_coherence))
        collapse_c.extend(abs((s.coherence - loss) - s.marginal_coherence) for loss in s.mub_losses)
        convexity.append(s.marginal_coherence - s.coherence)
        collapse_state.extend(mub_collapse_check(s.ensemble, args.dB, b) for b in mubs)
        rho_a = s.state.reduced("A").mat
        bound = float(np.sum(np.abs(rho_a)))
        for _ in range(EQ2_BASES_PER_SAMPLE):
            basis = ProjectiveBasis(linalg.random_unitary(args.dB, basis_rng))
            after = project_local(s.state, "B", basis)
            eq2.append(bound - measures.abs_sum(after))
        if s.search is not None:
            search_gap.append(s.best_mub_loss - s.search.best_loss)

    missed = sum(1 for s in scan.samples if s.convexity_gap > 1e-9 and not s.violates_proposition)
    n = len(scan.samples)
    report.results.update(
        measure=kind.value,
        dA=args.dA,
        dB=args.dB,
        samples=n,
        proposition_violations=scan.violations,
        violation_fraction=scan.violations / n if n else 0.0,
        strict_convexity_gap_samples=scan.strict_gap_samples,
        search_exceeds_mub=scan.search_exceeds_mub,
        max_search_excess_over_mub=_max(-g for g in search_gap),
        max_convexity_gap=_max(s.convexity_gap for s in scan.samples),
    )
    report.check("reference_basis_loss_zero", _max(ref), MEASURE_TOL)
    report.check("block_additivity", _max(additivity), CHAIN_TOL)
    report.check("mub_measured_coherence_equals_marginal", _max(collapse_c), CHAIN_TOL)
    report.check("marginal_below_joint", _max(convexity), MEASURE_TOL)
    report.check("mub_collapse_to_marginal_times_identity", _max(collapse_state), COLLAPSE_TOL)
    report.check("absolute_sum_lower_bound", _max(eq2), MEASURE_TOL, bases_per_sample=EQ2_BASES_PER_SAMPLE)
    report.check("gap_samples_violate_proposition", missed, 0.0)
    if search_gap:
        report.check("search_not_below_mub", _max(search_gap), MEASURE_TOL)


def cmd_search(args, report):
    kind = MeasureKind.parse(args.measure)
    rho = load_state(args.state)
    obj = LossObjective(rho, args.side, kind)
    if args.method == "grid":
        if obj.dim != 2:
            raise UsageError(f"grid search needs a qubit side; side {args.side} has dimension {obj.dim}")
        outcome = search_grid_qubit(obj, args.resolution)
    elif args.method == "random":
        outcome = search_random(obj, args.samples, args.seed)
    else:
        outcome = search_simplex(obj, args.restarts, args.max_iters, args.seed, threads=args.threads)

    baselines = {"computational": outcome.baseline_loss_reference_basis}
    if obj.dim in MUB_PRIMES:
        for i, b in enumerate(mub_family(obj.dim).nontrivial()):
            baselines[f"mub:{i}"] = coherence_loss(obj, b)
    recomputed = coherence_loss(obj, outcome.best_basis)
    report.results.update(
        measure=kind.value,
        side=args.side,
        method=outcome.method,
        best_loss=outcome.best_loss,
        best_basis=basis_to_dict(outcome.best_basis),
        evaluations=outcome.evaluations,
        coherence_before=obj.initial,
        baseline_losses=baselines,
        metadata=outcome.metadata,
    )
    report.check("best_loss_recomputed", abs(recomputed - outcome.best_loss), EXACT_TOL)


def _measure_arg(p, default="l1"):
    p.add_argument("--measure", default=default, choices=[k.value for k in MeasureKind])


def _side_arg(p):
    p.add_argument("--side", required=True, choices=["A", "B"])


def build_parser():
    parser = argparse.ArgumentParser(prog="cohloss", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify-counterexample", help="reproduce the two-qubit counterexample")
    p.add_argument("--measure", default="l1", choices=["l1", "relent"])
    p.set_defaults(func=cmd_verify_counterexample)

    p = sub.add_parser("measure", help="coherence of a state file or preset")
    p.add_argument("--state", required=True)
    _measure_arg(p)
    p.set_defaults(func=cmd_measure)

    p = sub.add_parser("project", help="measure one subsystem in a chosen basis")
    p.add_argument("--state", required=True)
    _side_arg(p)
    p.add_argument("--basis", required=True, help="computational, dual, mub:<a>, or a basis JSON file")
    p.add_argument("--out", help="write the post-measurement state here")
    _measure_arg(p)
    p.set_defaults(func=cmd_project)

    p = sub.add_parser("mub", help="list (and check) the MUB family of a prime dimension")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--check", action="store_true")
    p.set_defaults(func=cmd_mub)

    p = sub.add_parser("scan-qi", help="random quantum-incoherent states: reference vs MUB vs searched loss")
    p.add_argument("--dA", type=int, required=True)
    p.add_argument("--dB", type=int, required=True)
    p.add_argument("--samples", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--restarts", type=int, default=1)
    p.add_argument("--max-iters", type=int, default=200)
    p.add_argument("--no-search", action="store_true", help="skip the simplex search per sample")
    p.add_argument("--measure", default="l1", choices=["l1", "relent"])
    p.set_defaults(func=cmd_scan_qi)

    p = sub.add_parser("search", help="search the basis of maximal coherence loss")
    p.add_argument("--state", required=True)
    _side_arg(p)
    p.add_argument("--method", required=True, choices=["grid", "random", "simplex"])
    p.add_argument("--resolution", type=int, default=64)
    p.add_argument("--samples", type=int, default=10000)
    p.add_argument("--restarts", type=int, default=8)
    p.add_argument("--max-iters", type=int, default=500)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--measure", default="l1", choices=["l1", "relent"])
    p.set_defaults(func=cmd_search)
    return parser


def _echo(args):
    return {k: v for k, v in sorted(vars(args).items()) if k not in ("func", "command")}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        report = Report(args.command, _echo(args), getattr(args, "seed", None), tolerance_scale())
        args.func(args, report)
        text = report.to_json()
    except (UsageError, ValueError, KeyError, OSError, json.JSONDecodeError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"cohloss: error: {msg}", file=sys.stderr)
        return 2
    sys.stdout.write(text)
    return 0 if report.passed else 1


if __name__ == "__main__":
    sys.exit(main())
