"""The ``forge`` command line: validation, telescoping, groupoid checks,
twists, certificates, convolution demos, K-theory queries, rank-2 tools and
the realization pipelines.

Exit codes: 0 success / all requested certificates succeed, 1 a check failed
or a verdict was not reached, 2 structural input errors.
"""

from __future__ import annotations

import argparse
import ast
import json
import sys

from .convolution_algebra import (
    comp2_identity_sides,
    comp_identity_sides,
    right_action_identity_sides,
    delta,
)
from .dimension_groups import (
    DimGroupElement,
    dg_equal,
    dg_is_positive,
    dimension_group_of,
    k0_corner_class,
    k0_vertex_class,
)
from .families import seeded_bouquet_windows
from .graph_groupoid import render_bisection
from .graph_model import (
    diagram_from_json,
    edge_cycle_automorphism,
    telescope,
    validate_bratteli,
)
from .groupoid_core import (
    Cocycle,
    GroupoidAutomorphism,
    cyclic_multiplier_automorphism,
    full_relation,
    groupoid_from_json,
    identity_automorphism,
    relation_automorphism,
    verify_groupoid_axioms,
    zero_cocycle,
)
from .pipeline import (
    PipelineInputError,
    plan_af_realization,
    plan_rank2_realization,
    verify_report_json,
)
from .rank2_diagrams import (
    build_rank2,
    compute_orders,
    rank2_automorphism,
    rank2_data_from_json,
    telescope_rank2,
)
from .twisted_product import (
    bouquet_twisted_product,
    check_lc,
    check_wfc,
    contracting_bisection_witness,
    twisted_product,
)
from .validation import StructuralError


def _load_json(path: str) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def _dump(data: dict, out: str | None) -> None:
    text = json.dumps(data, indent=2, sort_keys=True)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _parse_levels_vector(text: str) -> tuple[int, tuple[int, ...]]:
    level_str, _, vec_str = text.partition(":")
    return int(level_str), tuple(int(x) for x in vec_str.split(",") if x)


def _alpha_for(spec: str, G):
    if spec == "identity":
        return identity_automorphism(G)
    if spec.startswith("cycle"):
        shift = int(spec.partition(":")[2] or 1)
        points = sorted({u[0] for u in G.units})
        n = len(points)
        return relation_automorphism(G, {p: points[(points.index(p) + shift) % n] for p in points})
    if spec.startswith("multiplier"):
        return cyclic_multiplier_automorphism(G, int(spec.partition(":")[2]))
    mapping = _load_json(spec)
    return GroupoidAutomorphism(
        G, {ast.literal_eval(k): ast.literal_eval(v) for k, v in mapping["map"].items()}
    )


def cmd_validate(args) -> int:
    d = diagram_from_json(_load_json(args.file))
    report = validate_bratteli(d)
    print(report.describe())
    return 0 if report.passed else 1


def cmd_telescope(args) -> int:
    d = diagram_from_json(_load_json(args.file))
    subsequence = tuple(int(x) for x in args.subsequence.split(","))
    result = telescope(d, subsequence)
    _dump(result.to_json(), args.out)
    return 0


def cmd_check_groupoid(args) -> int:
    G = groupoid_from_json(_load_json(args.file))
    report = verify_groupoid_axioms(G)
    print(report.describe())
    return 0 if report.passed else 1


def cmd_twist(args) -> int:
    G = groupoid_from_json(_load_json(args.G))
    alpha = _alpha_for(args.alpha, G)
    if args.H == "hinf":
        model = bouquet_twisted_product(G, alpha)
        print(
            "symbolic twisted product over the infinite bouquet: "
            f"|G| = {len(G)}, degree cocycle, automorphism of order {alpha.order()}"
        )
        return 0
    H = groupoid_from_json(_load_json(args.H))
    if args.cocycle == "zero":
        c = zero_cocycle(H)
    else:
        values = _load_json(args.cocycle)
        c = Cocycle(H, {ast.literal_eval(k): int(v) for k, v in values["values"].items()})
    tw = twisted_product(H, c, G, alpha)
    report = verify_groupoid_axioms(tw.finite_form)
    print(f"twisted product with {len(tw.finite_form)} elements: {report.describe()}")
    if args.out:
        _dump(tw.finite_form.to_json(), args.out)
    return 0 if report.passed else 1


def cmd_certify(args) -> int:
    if args.what == "wfc":
        if args.rank2:
            data, horizon = rank2_data_from_json(_load_json(args.input))
            levels = args.depth + 2
            tele = telescope_rank2(data, levels)
            if not tele.complete:
                print(json.dumps({"status": "unknown", "reason": tele.failure}))
                return 1
            diagram = build_rank2(tele.telescoped, levels)
            cert = check_wfc(diagram, None, args.depth, args.lbound)
        else:
            # certify along the realization route: telescope to meet the
            # growth condition first, then bound the cycle lengths
            from .pipeline import _growth_subsequence

            d = diagram_from_json(_load_json(args.input))
            levels = max(args.depth, args.lbound + 1) + 1
            subseq = _growth_subsequence(d, levels, 4096)
            if subseq is None:
                print(json.dumps({"status": "unknown", "reason": "horizon exhausted"}))
                return 1
            tele = telescope(d, subseq)
            alpha = edge_cycle_automorphism(tele)
            cert = check_wfc(tele, alpha, levels - 1, args.lbound)
        _dump(cert.to_json(), args.out)
        return 0 if cert.is_certificate else 1
    if args.what == "lc":
        d = diagram_from_json(_load_json(args.input))
        alpha = edge_cycle_automorphism(d)
        from .graph_model import enumerate_paths

        sample = []
        for v in d.vertices_at(0):
            for n in range(0, min(3, args.depth + 1)):
                sample.extend(enumerate_paths(d, v, n))
        witness = check_lc(d, alpha, sample[:40])
        _dump(witness.to_json(), args.out)
        return 0
    # contract: build a demonstration witness over the bouquet with trivial G
    G = full_relation([0])
    model = bouquet_twisted_product(G, identity_automorphism(G))
    window = seeded_bouquet_windows(1, args.seed)[0]
    witness = contracting_bisection_witness(model, window, frozenset(G.units), l=1)
    _dump(
        {
            "window": render_bisection(window),
            "witness": witness.to_json(),
        },
        args.out,
    )
    return 0


def cmd_convolve_demo(args) -> int:
    G = full_relation(range(2))
    alpha = relation_automorphism(G, {0: 1, 1: 0})
    model = bouquet_twisted_product(G, alpha)
    ok = True
    shown = 0
    for i, j in [(0, 0), (0, 1)]:
        for g in G.elements[:2]:
            for gp in G.elements[:2]:
                f, fp = delta(G, g), delta(G, gp)
                if args.identity == "comp":
                    lhs, rhs = comp_identity_sides(model, i, j, f, fp)
                elif args.identity == "comp2":
                    lhs, rhs = comp2_identity_sides(model, i, f, fp)
                else:
                    lhs, rhs = right_action_identity_sides(model, i, f, fp)
                same = lhs == rhs
                ok = ok and same
                if shown < 4:
                    print(f"i={i} j={j} f=delta{g} f'=delta{gp}")
                    print(f"  lhs = {lhs.describe()}")
                    print(f"  rhs = {rhs.describe()}")
                    print(f"  equal: {same}")
                    shown += 1
    print(f"identity '{args.identity}' holds on the sampled grid: {ok}")
    return 0 if ok else 1


def cmd_ktheory(args) -> int:
    d = diagram_from_json(_load_json(args.file))
    spec = dimension_group_of(d)
    if args.vertex_class:
        level, vec = _parse_levels_vector(args.vertex_class)
        element = k0_vertex_class(d, (level, vec[0]))
    else:
        level, vec = _parse_levels_vector(args.corner)
        element = k0_corner_class(d, level, vec)
    if args.op == "positive":
        verdict = dg_is_positive(spec, element, args.horizon)
    else:
        if not args.other:
            print("--op equal needs --other level:vector", file=sys.stderr)
            return 2
        lvl2, vec2 = _parse_levels_vector(args.other)
        verdict = dg_equal(spec, element, DimGroupElement(lvl2, vec2), args.horizon)
    _dump(verdict.to_json(), args.out)
    return 0 if verdict.is_yes else 1


def cmd_rank2(args) -> int:
    data, horizon = rank2_data_from_json(_load_json(args.input))
    levels = args.levels or horizon or len(data.T)
    if args.action == "build":
        diagram = build_rank2(data, levels)
        _dump(
            {
                "levels": [list(s) for s in diagram.cycle_sizes],
                "blue_edges": len(diagram.blue),
            },
            args.out,
        )
        return 0
    if args.action == "orders":
        diagram = build_rank2(data, levels)
        orders = compute_orders(diagram)
        _dump(
            {
                "orders_per_level": {
                    str(n): list(orders.orders_at(n)) for n in range(levels - 1)
                },
                "level_lcm": list(orders.level_lcm),
                "m": list(orders.m),
            },
            args.out,
        )
        return 0
    if args.action == "telescope":
        result = telescope_rank2(data, levels)
        _dump(result.to_json(), args.out)
        return 0 if result.complete else 1
    diagram = build_rank2(data, levels)
    auto = rank2_automorphism(diagram)
    _dump(
        {
            "m_sequence": list(auto.orders.m),
            "sample": {
                str(e.label): str(auto.blue_image(e.label))
                for e in diagram.blue[: min(8, len(diagram.blue))]
            },
        },
        args.out,
    )
    return 0


def cmd_realize(args) -> int:
    unit = None
    if args.unit:
        unit = _parse_levels_vector(args.unit)
    if args.target == "af":
        d = diagram_from_json(_load_json(args.input))
        report = plan_af_realization(d, unit_class=unit, depth=args.depth, lbound=args.lbound)
    else:
        data, _ = rank2_data_from_json(_load_json(args.input))
        report = plan_rank2_realization(
            data, unit_class=unit, depth=args.depth, lbound=args.lbound
        )
    _dump(report.to_json(), args.out)
    return 0 if report.ok else 1


def cmd_verify_report(args) -> int:
    ok = verify_report_json(_load_json(args.file))
    print("report re-verifies" if ok else "report FAILED re-verification")
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="forge", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("validate", help="validate a diagram file")
    v.add_argument("file")
    v.set_defaults(fn=cmd_validate)

    t = sub.add_parser("telescope", help="telescope a diagram along a level subsequence")
    t.add_argument("file")
    t.add_argument("--subsequence", required=True)
    t.add_argument("--out")
    t.set_defaults(fn=cmd_telescope)

    g = sub.add_parser("check-groupoid", help="verify groupoid axioms on a dump")
    g.add_argument("file")
    g.set_defaults(fn=cmd_check_groupoid)

    tw = sub.add_parser("twist", help="form a twisted product")
    tw.add_argument("--H", required=True, help="groupoid file or the literal 'hinf'")
    tw.add_argument("--G", required=True)
    tw.add_argument("--alpha", required=True, help="identity | cycle[:k] | multiplier:a | file")
    tw.add_argument("--cocycle", default="zero")
    tw.add_argument("--out")
    tw.set_defaults(fn=cmd_twist)

    c = sub.add_parser("certify", help="produce wfc/lc/contract certificates")
    c.add_argument("what", choices=["wfc", "lc", "contract"])
    c.add_argument("--input")
    c.add_argument("--depth", type=int, default=5)
    c.add_argument("--lbound", type=int, default=20)
    c.add_argument("--rank2", action="store_true")
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--out")
    c.set_defaults(fn=cmd_certify)

    cv = sub.add_parser("convolve-demo", help="print both sides of a module identity")
    cv.add_argument("--identity", choices=["comp", "comp2", "right-action"], required=True)
    cv.set_defaults(fn=cmd_convolve_demo)

    k = sub.add_parser("ktheory", help="equality/positivity queries on diagram classes")
    k.add_argument("file")
    k.add_argument("--class", dest="vertex_class", help="level:index of a vertex class")
    k.add_argument("--corner", help="level:a1,a2,... corner vector")
    k.add_argument("--other", help="level:vector comparand for --op equal")
    k.add_argument("--op", choices=["equal", "positive"], required=True)
    k.add_argument("--horizon", type=int, default=12)
    k.add_argument("--out")
    k.set_defaults(fn=cmd_ktheory)

    r2 = sub.add_parser("rank2", help="rank-2 diagram tools")
    r2.add_argument("action", choices=["build", "orders", "telescope", "automorphism"])
    r2.add_argument("--input", required=True)
    r2.add_argument("--levels", type=int)
    r2.add_argument("--out")
    r2.set_defaults(fn=cmd_rank2)

    rz = sub.add_parser("realize", help="run a realization pipeline")
    rz.add_argument("target", choices=["af", "rank2"])
    rz.add_argument("input")
    rz.add_argument("--unit", help="level:vector unit class")
    rz.add_argument("--depth", type=int, default=5)
    rz.add_argument("--lbound", type=int, default=None)
    rz.add_argument("--out")
    rz.set_defaults(fn=cmd_realize)

    vr = sub.add_parser("verify-report", help="re-verify an emitted report")
    vr.add_argument("file")
    vr.set_defaults(fn=cmd_verify_report)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "command", None) == "realize" and args.lbound is None:
        args.lbound = 20 if args.target == "af" else 50
    try:
        return args.fn(args)
    except StructuralError as exc:
        print(f"structural error: {exc}", file=sys.stderr)
        return 2
    except PipelineInputError as exc:
        print(f"input rejected: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
