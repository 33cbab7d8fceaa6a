"""The realization planners and their self-contained reports."""

import json

import pytest

from groupoid_forge.graph_model import BratteliDiagram, constant_diagram
from groupoid_forge.matrices import as_matrix
from groupoid_forge.pipeline import (
    ANALYTIC_HYPOTHESES,
    PipelineInputError,
    plan_af_realization,
    plan_rank2_realization,
    unit_corner_spec,
    verify_report_json,
)
from groupoid_forge.rank2_diagrams import Rank2Data

CONSTANT2 = Rank2Data(A=(((2,),),), B=(((2,),),), T=((1,), (1,)), repeat_from=0)


class TestAfPlan:
    def test_full_report_without_corner(self):
        report = plan_af_realization(constant_diagram(2), depth=5, lbound=8)
        assert report.ok
        assert report.wfc.is_certificate
        assert report.minimality.is_yes
        assert report.corner is None
        table = report.telescoping["min_multiplicity_per_level"]
        for n in range(6):
            assert table[str(n)] > n

    def test_corner_spec_with_unit(self):
        report = plan_af_realization(
            constant_diagram(2), unit_class=(0, [2]), depth=4, lbound=6
        )
        assert report.ok
        assert report.corner.cylinders == (
            {"vertex": [0, 0], "copies": [1, 2]},
        )
        assert report.ktheory["corner_class_positive"]["value"] == "yes"
        assert report.stabilization["full_relation_truncation"] == 2

    def test_invalid_diagram_rejected_without_report(self):
        bad = BratteliDiagram((1, 2), (as_matrix([[1, 0]]),))
        with pytest.raises(PipelineInputError):
            plan_af_realization(bad)

    def test_negative_unit_rejected(self):
        with pytest.raises(ValueError):
            plan_af_realization(constant_diagram(2), unit_class=(0, [-1]))

    def test_zero_corner_rejected(self):
        with pytest.raises(ValueError, match="nonzero"):
            unit_corner_spec(constant_diagram(2), 0, [0])

    def test_single_vertex_corner_is_one_cylinder(self):
        from groupoid_forge.dimension_groups import k0_vertex_class

        d = constant_diagram(2)
        spec = unit_corner_spec(d, 0, [1])
        assert spec.cylinders == ({"vertex": [0, 0], "copies": [1]},)
        assert spec.k_class == k0_vertex_class(d, (0, 0))

    def test_horizon_exhaustion_gives_unknown(self):
        report = plan_af_realization(
            constant_diagram(2), depth=5, lbound=8, source_cap=3
        )
        assert report.status == "unknown"
        assert not report.telescoping["complete"]

    def test_hypothesis_list_is_fixed(self):
        report = plan_af_realization(constant_diagram(2), depth=3, lbound=4)
        names = [h["name"] for h in report.analytic_hypotheses]
        assert names == [h["name"] for h in ANALYTIC_HYPOTHESES]
        assert all(h["status"] == "NOT COMPUTED" for h in report.analytic_hypotheses)
        assert len(names) == 5

    def test_deterministic(self):
        r1 = plan_af_realization(constant_diagram(2), unit_class=(0, [1]), depth=4, lbound=5)
        r2 = plan_af_realization(constant_diagram(2), unit_class=(0, [1]), depth=4, lbound=5)
        assert r1.to_json() == r2.to_json()

    def test_report_reverifies_from_json(self):
        report = plan_af_realization(constant_diagram(2), unit_class=(0, [2]), depth=4, lbound=5)
        blob = json.loads(json.dumps(report.to_json()))
        assert verify_report_json(blob)

    def test_tampered_report_fails(self):
        report = plan_af_realization(constant_diagram(2), depth=4, lbound=5)
        blob = json.loads(json.dumps(report.to_json()))
        blob["wfc"]["details"]["witness_level_per_shift"]["1"] = 999
        assert not verify_report_json(blob)


class TestRank2Plan:
    def test_full_report(self):
        report = plan_rank2_realization(CONSTANT2, depth=5, lbound=50)
        assert report.ok
        assert report.wfc.is_certificate
        assert report.ktheory["order_inequality_o_gt_n_m_n"]
        assert report.ktheory["order_formula_round_trip"]
        assert report.minimality.is_yes

    def test_figure_prefix_orders_in_report(self):
        # figure data extended by a doubling tail so the sequence continues
        data = Rank2Data(
            A=(((3,),), ((4,),), ((2,),)),
            B=(((1,),), ((2,),), ((2,),)),
            T=((1,), (3,), (6,), (6,)),
            repeat_from=2,
        )
        report = plan_rank2_realization(data, depth=2, lbound=5)
        orders = report.ktheory["orders_per_level"]
        assert orders["0"] == [3]
        assert orders["1"] == [12]

    def test_unit_corner(self):
        report = plan_rank2_realization(CONSTANT2, unit_class=(0, [2]), depth=4, lbound=10)
        assert report.corner is not None
        assert report.ktheory["corner_class_positive"]["value"] == "yes"

    def test_non_diagonal_or_incompatible_t_rejected(self):
        with pytest.raises(Exception):
            Rank2Data(A=(((2,),),), B=(((2,),),), T=((1,), (3,)))

    def test_report_reverifies_from_json(self):
        report = plan_rank2_realization(CONSTANT2, depth=3, lbound=6)
        blob = json.loads(json.dumps(report.to_json()))
        assert verify_report_json(blob)

    def test_horizon_exhaustion(self):
        report = plan_rank2_realization(CONSTANT2, depth=5, lbound=10, source_cap=4)
        assert report.status == "unknown"
        assert report.telescoping["failure"]
