"""Command line entry point: ``opengbpa <command> ...``."""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

import numpy as np

from .classification import classify_sample
from .combination import Rule, TotalConflictError, combine_all
from .datasets import Schema, resolve_dataset
from .evidence import MassFunction, World, make_frame
from .experiments import (
    STANDARD_FRACTIONS,
    SplitPlan,
    corrected_accuracy,
    report_json,
    run_cross_validation,
    run_open_world,
    run_robustness,
)
from .fuzzy import ModelTable, fit_models
from .generation import generate_for_attribute

SEED_ENV = "GBPA_SEED"


def parse_range(text: str) -> list[float]:
    """``lo:hi:step`` inclusive of ``hi``; ``lo:hi`` picks the published fractions in range; ``a,b,c`` is a list."""
    if ":" not in text:
        return [float(t) for t in text.split(",") if t.strip()]
    parts = [float(t) for t in text.split(":")]
    if len(parts) == 2:
        lo, hi = parts
        return [f for f in STANDARD_FRACTIONS if lo - 1e-9 <= f <= hi + 1e-9]
    lo, hi, step = parts
    if step <= 0:
        raise argparse.ArgumentTypeError("step must be positive")
    n = int(np.floor((hi - lo) / step + 1e-9))
    return [round(lo + i * step, 10) for i in range(n + 1)]


def _seed(args) -> int:
    env = os.environ.get(SEED_ENV)
    return int(env) if env else args.seed


def _emit(text: str, out: str | None) -> None:
    text = text.rstrip("\n") + "\n"
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _render(obj, fmt: str) -> str:
    if fmt == "json":
        return report_json(obj)
    if fmt == "csv":
        return obj.to_csv()
    return obj.to_table()


def cmd_train(args) -> int:
    ds = resolve_dataset(args.data, args.schema)
    classes = args.classes.split(",") if args.classes else list(ds.classes)
    model = fit_models(ds.rows, make_frame(classes), ds.attributes)
    _emit(model.to_csv() if args.format == "csv" else model.to_json(indent=2), args.out)
    return 0


def _load_model(path: str) -> ModelTable:
    text = Path(path).read_text()
    return ModelTable.from_csv(text) if path.endswith(".csv") else ModelTable.from_json(text)


def cmd_gbpa(args) -> int:
    model = _load_model(args.model)
    frame = model.frame
    if args.sweep:
        xs = parse_range(args.sweep)
        subsets = list(frame.power_set())
        rows = [["x", *(frame.format(b) for b in subsets)]]
        for x in xs:
            m = generate_for_attribute(model, args.attribute, x)
            rows.append([f"{x:g}", *(f"{m[b]:.6f}" for b in subsets)])
        _emit("\n".join(",".join(r) for r in rows), args.out)
        return 0
    if args.value is None:
        raise SystemExit("gbpa: give --value or --sweep")
    _emit(generate_for_attribute(model, args.attribute, args.value).to_json(indent=2), args.out)
    return 0


def cmd_combine(args) -> int:
    ms = [MassFunction.from_json(Path(p).read_text()) for p in args.inputs]
    try:
        fused = combine_all(args.rule, ms)
    except TotalConflictError as exc:
        print(f"combine: {exc}", file=sys.stderr)
        return 2
    _emit(fused.to_json(indent=2), args.out)
    return 0


def cmd_classify(args) -> int:
    model = _load_model(args.model)
    sample = [float(v) for v in args.sample.split(",")]
    try:
        decision = classify_sample(model, sample, args.rule, args.world)
    except TotalConflictError as exc:
        print(f"classify: {exc}", file=sys.stderr)
        return 2
    _emit(json.dumps(decision.to_dict(), indent=2), args.out)
    return 0


def cmd_open_world(args) -> int:
    ds = resolve_dataset(args.data, args.schema)
    plan = SplitPlan.leave_out(args.fraction, seed=_seed(args), repeats=args.repeats)
    report = run_open_world(ds, args.frame.split(","), plan, args.rule, args.unknown)
    _emit(_render(report, args.out_format), args.out)
    return 0


def cmd_robustness(args) -> int:
    ds = resolve_dataset(args.data, args.schema)
    result = run_robustness(ds, parse_range(args.fractions), args.repeats, args.rule, args.world, _seed(args))
    _emit(_render(result, args.out_format), args.out)
    return 0


def cmd_cv(args) -> int:
    ds = resolve_dataset(args.data, args.schema)
    result = run_cross_validation(ds, args.k, args.repeats, args.rule, args.world, _seed(args))
    _emit(_render(result, args.out_format), args.out)
    return 0


def cmd_correct(args) -> int:
    print(f"{corrected_accuracy(args.leave_out, args.cross_validation):.6f}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="opengbpa", description=__doc__)
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def data_opts(sp, default="iris"):
        sp.add_argument("--data", default=default,
                        help="CSV path, or 'iris'/'haberman' for the bundled copies")
        sp.add_argument("--schema", choices=[s.value for s in Schema], default=None)

    rules = [r.value for r in Rule]
    worlds = [w.value for w in World]

    sp = sub.add_parser("train", help="fit triangular fuzzy number models")
    data_opts(sp, default=None)
    sp.add_argument("--classes", help="comma-separated frame labels (default: all classes)")
    sp.add_argument("--format", choices=["json", "csv"], default="json")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_train)

    sp = sub.add_parser("gbpa", help="generate the GBPA for one attribute reading")
    sp.add_argument("--model", required=True)
    sp.add_argument("--attribute", required=True)
    sp.add_argument("--value", type=float)
    sp.add_argument("--sweep", help="lo:hi:step; writes a CSV of masses per abscissa")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_gbpa)

    sp = sub.add_parser("combine", help="fuse mass functions stored as JSON")
    sp.add_argument("--rule", choices=rules, required=True)
    sp.add_argument("--in", dest="inputs", nargs="+", required=True)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_combine)

    sp = sub.add_parser("classify", help="classify one sample")
    sp.add_argument("--model", required=True)
    sp.add_argument("--rule", choices=rules, default="mgcr")
    sp.add_argument("--world", choices=worlds, default="open")
    sp.add_argument("--sample", required=True, help="comma-separated attribute values")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_classify)

    exp = sub.add_parser("experiment", help="classification experiments").add_subparsers(
        dest="experiment", required=True)

    def exp_opts(sp, rule, world=True):
        data_opts(sp)
        sp.add_argument("--rule", choices=rules, default=rule)
        if world:
            sp.add_argument("--world", choices=worlds, default="closed")
        sp.add_argument("--repeats", type=int, default=10)
        sp.add_argument("--seed", type=int, default=0, help=f"overridden by ${SEED_ENV}")
        sp.add_argument("--out-format", choices=["table", "csv", "json"], default="table")
        sp.add_argument("--out")

    sp = exp.add_parser("open-world", help="known classes plus injected unknown-class samples")
    exp_opts(sp, "mgcr", world=False)
    sp.add_argument("--frame", required=True, help="comma-separated frame labels, e.g. a,b")
    sp.add_argument("--fraction", type=float, default=0.8)
    sp.add_argument("--unknown", type=int, default=10, help="unknown samples injected per excluded class")
    sp.set_defaults(func=cmd_open_world, repeats=1)

    sp = exp.add_parser("robustness", help="repeated leave-out over training fractions")
    exp_opts(sp, "dempster")
    sp.add_argument("--fractions", default="0.1:0.98")
    sp.set_defaults(func=cmd_robustness)

    sp = exp.add_parser("cv", help="repeated stratified k-fold cross-validation")
    exp_opts(sp, "dempster")
    sp.add_argument("--k", type=int, default=5)
    sp.set_defaults(func=cmd_cv)

    sp = exp.add_parser("correct", help="average a leave-out and a cross-validation accuracy")
    sp.add_argument("leave_out", type=float)
    sp.add_argument("cross_validation", type=float)
    sp.set_defaults(func=cmd_correct)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if args.command == "train" and not args.data:
        raise SystemExit("train: --data is required")
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
