"""Command-line front end.

Subcommands::

    check      verify ball/box/disc conditions of an instance file
    bound      evaluate one bound chain against its functional
    jensen     reverse-Jensen report for a convex oracle
    sharpness  randomized search for near-equality witnesses

Exit codes: 0 success, 1 hypothesis/inequality concern, 2 usage or parse
error. ``--json`` prints one structured document per run (the instance echo
plus a ``results`` block); human output is a fixed-width table. All numbers
are rendered with 17 significant digits so round-trips are lossless.
"""

from __future__ import annotations

import argparse
import math
import sys

import numpy as np

from . import instancefile
from .bounds import (
    BoundChain,
    bound_chebyshev,
    bound_chebyshev_gruss,
    bound_complex_sequence,
    bound_forward_difference,
    bound_forward_difference_self,
    bound_scalar_weighted,
    bound_variance,
)
from .conditions import Enclosure, check_ball, check_box, check_scalar_disc, fit_enclosure
from .errors import (
    ContractViolationError,
    DegenerateInputError,
    EnclosureFitError,
    GrussBoundsError,
    HypothesisError,
    InstanceFormatError,
    SoundnessError,
)
from .functionals import WeightedSequence
from .instancefile import Instance, instance_document
from .jensen import ORACLE_FACTORIES, get_oracle, gradient_check, reverse_jensen
from .sharpness import TARGETS, search
from .space import Space

#: Tags accepted by ``bound --which``; classical single-bound tags run the
#: chain that carries them as final link, equal-weight tags validate weights.
TAG_ALIASES = {"1.2": "2.11", "1.4": "2.7", "1.5": "2.8", "1.7": "1.6", "1.9": "1.8"}
BOUND_TAGS = ("1.2", "1.4", "1.5", "1.6", "1.7", "1.8", "1.9", "2.3", "2.7", "2.8", "2.9", "2.11", "R2.7")

GRADIENT_CHECK_H = 1e-5
GRADIENT_CHECK_MAX_ERR = 1e-6


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _holder_arg(text: str) -> float:
    if text in ("inf", "Infinity"):
        return math.inf
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number > 1 or 'inf', got {text!r}") from None
    if not value > 1.0:
        raise argparse.ArgumentTypeError(f"holder exponent must be > 1, got {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="grussbounds",
        description="Certified bound chains for weighted vector sequences in inner product spaces.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="verify ball/box/disc conditions of an instance file")
    p.add_argument("file")
    p.add_argument("--fit", action="store_true", help="fit enclosures missing from the file")
    p.add_argument("--json", dest="as_json", action="store_true")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("bound", help="evaluate one bound chain against its functional")
    p.add_argument("file")
    p.add_argument("--which", required=True, metavar="TAG", help=f"one of: {', '.join(BOUND_TAGS)}")
    p.add_argument("--fit", action="store_true", help="fit enclosures/discs missing from the file")
    p.add_argument("--unchecked", action="store_true", help="evaluate even if the hypothesis fails")
    p.add_argument("--holder-p", type=_holder_arg, default=None, help="Holder exponent (> 1 or 'inf')")
    p.add_argument("--json", dest="as_json", action="store_true")
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("jensen", help="reverse-Jensen report for a convex oracle")
    p.add_argument("file")
    p.add_argument("--oracle", default=None, help=f"override the file's oracle; one of: {', '.join(sorted(ORACLE_FACTORIES))}")
    p.add_argument("--json", dest="as_json", action="store_true")
    p.set_defaults(func=cmd_jensen)

    p = sub.add_parser("sharpness", help="randomized search for near-equality witnesses")
    p.add_argument("--target", required=True, choices=sorted(TARGETS))
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--dim", type=int, default=1)
    p.add_argument("--budget", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--dump-witness", metavar="PATH", default=None, help="write the witness instance file")
    p.add_argument("--json", dest="as_json", action="store_true")
    p.set_defaults(func=cmd_sharpness)
    return parser


def _load(path: str) -> tuple[Instance, str]:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            text = handle.read()
    except OSError as exc:
        raise InstanceFormatError(f"cannot read {path}: {exc}") from None
    return instancefile.loads(text), instancefile.sha256_hex(text)


def _fit_disc(alphas: np.ndarray) -> tuple[complex, complex]:
    pts = np.asarray(alphas, dtype=np.complex128)[:, None]
    encl = fit_enclosure(Space(1, "complex"), pts)
    return complex(encl.lo[0]), complex(encl.hi[0])


def _echo_document(inst: Instance, fitted: dict, disc) -> dict:
    enclosures = dict(inst.enclosures)
    enclosures.update({k: v for k, v in fitted.items() if k != "disc"})
    return instance_document(
        inst.space,
        weights=inst.weights,
        xs=inst.xs,
        ys=inst.ys,
        zs=inst.zs,
        alphas=inst.alphas,
        enclosures=enclosures,
        disc=disc if disc is not None else inst.disc,
        oracle=inst.oracle,
        holder_p=inst.holder_p,
    )


def _condition_summary(name: str, report) -> dict:
    return {
        "name": name,
        "kind": report.kind,
        "holds": bool(report.holds),
        "min_slack": float(report.min_slack()),
        "failing_indices": [int(i) for i in report.failing_indices()],
    }


def _print_conditions(conditions) -> None:
    print(f"{'condition':<12}{'index':>6}  {'slack':<24}verdict")
    for name, report in conditions:
        for i, (slack, ok) in enumerate(zip(report.slacks, report.verdicts)):
            print(f"{name:<12}{i:>6}  {_fmt(slack):<24}{'ok' if ok else 'FAIL'}")


def cmd_check(args) -> int:
    inst, digest = _load(args.file)
    conditions: list = []
    fitted: dict = {}
    for name, seq in (("x", inst.xs), ("y", inst.ys), ("z", inst.zs)):
        if seq is None:
            continue
        encl = inst.enclosures.get(name)
        if encl is None and args.fit:
            encl = fit_enclosure(inst.space, seq)
            fitted[name] = encl
        if encl is None:
            continue
        conditions.append((f"ball({name})", check_ball(encl, seq)))
        conditions.append((f"box({name})", check_box(encl, seq)))
    disc = inst.disc
    if inst.alphas is not None:
        if disc is None and args.fit:
            disc = _fit_disc(inst.alphas)
            fitted["disc"] = disc
        if disc is not None:
            conditions.append(("disc(alpha)", check_scalar_disc(disc[0], disc[1], inst.alphas)))
    if not conditions:
        raise InstanceFormatError(
            "nothing to check: no enclosure matches a sequence (supply enclosures or pass --fit)"
        )
    all_hold = all(report.holds for _, report in conditions)
    if args.as_json:
        doc = _echo_document(inst, fitted, disc)
        doc["results"] = {
            "command": "check",
            "input_sha256": digest,
            "holds": all_hold,
            "fitted": sorted(fitted),
            "conditions": [_condition_summary(name, report) for name, report in conditions],
        }
        sys.stdout.write(instancefile.dumps(doc))
    else:
        print(f"instance sha256 {digest}")
        print(f"space: {inst.space.field} dim={inst.space.dim}")
        for name in sorted(k for k in fitted if k != "disc"):
            encl = fitted[name]
            print(f"fitted enclosure {name}: diameter {_fmt(encl.diameter)}")
        if "disc" in fitted:
            print(f"fitted disc: a={fitted['disc'][0]}, A={fitted['disc'][1]}")
        _print_conditions(conditions)
        if all_hold:
            print("verdict: all conditions hold")
        else:
            for name, report in conditions:
                if not report.holds:
                    i = int(report.failing_indices()[0])
                    print(f"verdict: {name} fails at index {i} (slack {_fmt(report.slacks[i])})")
    return 0 if all_hold else 1


def evaluate_tag(inst: Instance, which: str, fit: bool, check: bool, holder_p: float | None):
    """Run the chain selected by ``which``; returns (chain, fitted, disc, conditions)."""
    if which not in BOUND_TAGS:
        raise ContractViolationError(f"unknown tag {which!r}; valid tags: {', '.join(BOUND_TAGS)}")
    tag = TAG_ALIASES.get(which, which)
    if inst.weights is None:
        raise InstanceFormatError("instance needs a weights array")
    hp = holder_p if holder_p is not None else (inst.holder_p if inst.holder_p is not None else 2.0)
    fitted: dict = {}

    def need(seq, name):
        if seq is None:
            raise InstanceFormatError(f"tag {which} needs sequences.{name}")
        return seq

    def encl_for(name, seq):
        encl = inst.enclosures.get(name)
        if encl is None:
            if not fit:
                raise InstanceFormatError(
                    f"tag {which} needs the {name!r} enclosure; supply it or pass --fit"
                )
            encl = fit_enclosure(inst.space, seq)
            fitted[name] = encl
        return encl

    def disc_for(alphas):
        disc = inst.disc
        if disc is None:
            if not fit:
                raise InstanceFormatError(f"tag {which} needs the scalar disc a/A; supply it or pass --fit")
            disc = _fit_disc(alphas)
            fitted["disc"] = disc
        return disc

    def require_uniform():
        w = inst.weights.weights
        if float(np.max(np.abs(w * len(w) - 1.0))) > 1e-9:
            raise ContractViolationError(f"tag {which} requires uniform weights")

    disc = None
    if tag == "2.3":
        ws = WeightedSequence(inst.space, inst.weights, xs=need(inst.xs, "xs"), ys=need(inst.ys, "ys"))
        chain = bound_chebyshev(encl_for("x", ws.xs), ws, check=check)
    elif tag == "2.7":
        ws = WeightedSequence(inst.space, inst.weights, xs=need(inst.xs, "xs"), ys=need(inst.ys, "ys"))
        chain = bound_chebyshev_gruss(encl_for("x", ws.xs), encl_for("y", ws.ys), ws, check=check)
    elif tag == "2.8":
        xs = need(inst.xs, "xs")
        chain = bound_variance(encl_for("x", xs), inst.weights, xs, check=check)
    elif tag in ("2.9", "2.11"):
        ws = WeightedSequence(
            inst.space, inst.weights, xs=need(inst.xs, "xs"), alphas=need(inst.alphas, "alphas")
        )
        disc = disc_for(ws.alphas) if tag == "2.11" else None
        chain = bound_scalar_weighted(encl_for("x", ws.xs), ws, disc=disc, check=check)
    elif tag == "R2.7":
        alphas = need(inst.alphas, "alphas")
        disc = disc_for(alphas)
        chain = bound_complex_sequence(disc[0], disc[1], inst.weights, alphas, check=check)
    elif tag == "1.6":
        if which == "1.7":
            require_uniform()
        ws = WeightedSequence(inst.space, inst.weights, xs=need(inst.xs, "xs"), ys=need(inst.ys, "ys"))
        chain = bound_forward_difference(ws, holder_p=hp)
    else:  # "1.8"
        if which == "1.9":
            require_uniform()
        chain = bound_forward_difference_self(inst.space, inst.weights, need(inst.xs, "xs"), holder_p=hp)
    return chain, fitted, disc


def _print_chain(chain: BoundChain) -> None:
    kind = "chain" if chain.ordered else "parallel bounds"
    hyp = "verified" if chain.hypothesis_verified else "UNVERIFIED"
    suffix = "" if not chain.hypothesis_reports else f" (hypothesis {hyp})"
    print(f"{kind} {chain.equation}{suffix}")
    print(f"  {chain.functional_label:<42}= {_fmt(chain.functional_value)}")
    tightest = chain.tightest_index()
    for i, link in enumerate(chain.links):
        marker = "   <- tightest" if i == tightest and len(chain.links) > 1 else ""
        print(f"  <= {link.label:<39}[{link.equation}]  {_fmt(link.value)}{marker}")
    word = "ordering" if chain.ordered else "dominance"
    print(f"{word}: {'holds' if chain.holds() else 'VIOLATED'}")


def _chain_results(chain: BoundChain, names: tuple = ()) -> dict:
    reports = [
        _condition_summary(name, report)
        for name, report in zip(names or [f"hypothesis[{i}]" for i in range(len(chain.hypothesis_reports))], chain.hypothesis_reports)
    ]
    return {
        "equation": chain.equation,
        "functional": {"label": chain.functional_label, "value": chain.functional_value},
        "links": [{"label": l.label, "value": l.value, "equation": l.equation} for l in chain.links],
        "ordered": chain.ordered,
        "tightest": chain.tightest_index() if chain.links else None,
        "hypothesis_verified": chain.hypothesis_verified,
        "holds": chain.holds(),
        "conditions": reports,
    }


def cmd_bound(args) -> int:
    inst, digest = _load(args.file)
    chain, fitted, disc = evaluate_tag(inst, args.which, args.fit, not args.unchecked, args.holder_p)
    if args.as_json:
        doc = _echo_document(inst, fitted, disc)
        doc["results"] = {"command": "bound", "which": args.which, "input_sha256": digest}
        doc["results"].update(_chain_results(chain))
        sys.stdout.write(instancefile.dumps(doc))
    else:
        print(f"instance sha256 {digest}")
        for name in sorted(k for k in fitted if k != "disc"):
            print(f"fitted enclosure {name}: diameter {_fmt(fitted[name].diameter)}")
        if "disc" in fitted:
            print(f"fitted disc: a={fitted['disc'][0]}, A={fitted['disc'][1]}")
        _print_chain(chain)
    return 0 if chain.holds() else 1


def cmd_jensen(args) -> int:
    inst, digest = _load(args.file)
    if inst.space.is_complex:
        raise InstanceFormatError(
            "jensen needs a real space: convexity and gradients are real notions here"
        )
    if inst.weights is None:
        raise InstanceFormatError("instance needs a weights array")
    zs = inst.zs
    if zs is None:
        raise InstanceFormatError("jensen needs sequences.zs")
    name = args.oracle or inst.oracle
    if name is None:
        raise InstanceFormatError("no oracle: set 'oracle' in the file or pass --oracle")
    oracle = get_oracle(name, inst.space)

    err = gradient_check(inst.space, oracle, zs, h=GRADIENT_CHECK_H)
    if err > GRADIENT_CHECK_MAX_ERR:
        print(
            f"gradient check FAILED for oracle {name!r}: max relative error {_fmt(err)} "
            f"> {GRADIENT_CHECK_MAX_ERR:g} at h={GRADIENT_CHECK_H:g}",
            file=sys.stderr,
        )
        return 1

    report = reverse_jensen(
        inst.space,
        oracle,
        inst.weights.weights,
        zs,
        grad_encl=inst.enclosures.get("grad"),
        z_encl=inst.enclosures.get("z"),
    )
    tol = 1e-10 * max(1.0, abs(report.gap), abs(report.pairing_gap))
    gap_ok = report.gap >= -tol and report.gap <= report.pairing_gap + tol
    ok = gap_ok and report.chain.holds()
    if args.as_json:
        doc = _echo_document(inst, {}, None)
        doc["results"] = {
            "command": "jensen",
            "input_sha256": digest,
            "oracle": name,
            "gradient_check_error": err,
            "gap": report.gap,
            "pairing_gap": report.pairing_gap,
            "improvement_ratio": report.improvement_ratio,
            "holds": ok,
        }
        doc["results"].update({"chain": _chain_results(report.chain)})
        sys.stdout.write(instancefile.dumps(doc))
    else:
        print(f"instance sha256 {digest}")
        print(f"oracle {name}: gradient check max relative error {_fmt(err)}")
        print(f"  {'jensen_gap':<42}= {_fmt(report.gap)}")
        print(f"  {'pairing_gap':<42}= {_fmt(report.pairing_gap)}")
        _print_chain(report.chain)
        if report.improvement_ratio is not None:
            print(f"improvement ratio (first link / quarter link): {_fmt(report.improvement_ratio)}")
        print(f"verdict: {'holds' if ok else 'VIOLATED'}")
    return 0 if ok else 1


def cmd_sharpness(args) -> int:
    result = search(args.target, args.n, args.dim, args.budget, args.seed)
    info = TARGETS[args.target]
    inst = instancefile.parse_document(result.witness)
    chain, _, _ = evaluate_tag(inst, info.equation, fit=False, check=True, holder_p=None)
    bound_value = chain.links[info.link_index].value
    if args.dump_witness:
        instancefile.dump(result.witness, args.dump_witness)
    if args.as_json:
        doc = dict(result.witness)
        doc["results"] = {
            "command": "sharpness",
            "target": result.target,
            "target_constant": result.target_constant,
            "achieved_ratio": result.achieved_ratio,
            "trials": result.trials,
            "seed": result.seed,
            "equation": info.equation,
            "link_index": info.link_index,
            "functional_value": chain.functional_value,
            "bound_value": bound_value,
        }
        sys.stdout.write(instancefile.dumps(doc))
    else:
        print(f"target {result.target} (constant {result.target_constant:g}, chain {info.equation})")
        print(f"  achieved ratio = {_fmt(result.achieved_ratio)}")
        print(f"  functional     = {_fmt(chain.functional_value)}")
        print(f"  bound          = {_fmt(bound_value)}")
        print(f"  trials {result.trials}, seed {result.seed}")
        if args.dump_witness:
            print(f"witness written to {args.dump_witness}")
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else 0
    try:
        return args.func(args)
    except HypothesisError as exc:
        print(f"hypothesis violated: {exc}", file=sys.stderr)
        return 1
    except (SoundnessError, EnclosureFitError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (InstanceFormatError, ContractViolationError, DegenerateInputError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except GrussBoundsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
