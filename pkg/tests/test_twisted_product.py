"""Twisted products, freeness/contraction certificates, minimality and the
finite principality oracle."""

import pytest

from groupoid_forge.families import rng_for, seeded_twisted_instances
from groupoid_forge.graph_groupoid import (
    InfiniteBouquet,
    basic_proper_subset,
    basic_subset,
    unit_bisection,
)
from groupoid_forge.graph_model import constant_diagram, edge_cycle_automorphism, telescope
from groupoid_forge.groupoid_core import (
    Cocycle,
    cartesian_product,
    cyclic_group_groupoid,
    cyclic_multiplier_automorphism,
    disjoint_union,
    full_relation,
    group_bundle,
    identity_automorphism,
    is_principal,
    isotropy_group,
    relation_automorphism,
    verify_groupoid_axioms,
    weight_cocycle,
    zero_cocycle,
)
from groupoid_forge.rank2_diagrams import Rank2Data, build_rank2, compute_orders, telescope_rank2
from groupoid_forge.twisted_product import (
    bouquet_twisted_product,
    check_lc,
    check_wfc,
    contracting_bisection_witness,
    minimality_verdict,
    principality_criterion,
    product_inverse,
    product_multiply,
    reverify_contracting_witness,
    twisted_product,
)

BQ = InfiniteBouquet()


def three_point_relation_with_cocycle():
    H = full_relation(range(3))
    return H, weight_cocycle(H, {(i, i): i for i in range(3)})


class TestConstruction:
    def test_zero_cocycle_gives_direct_product(self):
        H = full_relation(range(2))
        G = cyclic_group_groupoid(3)
        alpha = cyclic_multiplier_automorphism(G, 2)
        tw = twisted_product(H, zero_cocycle(H), G, alpha)
        direct = cartesian_product(H, G)
        assert tw.finite_form.composition == direct.composition
        assert tw.finite_form.source_map == direct.source_map

    def test_identity_automorphism_gives_direct_product(self):
        H, c = three_point_relation_with_cocycle()
        G = cyclic_group_groupoid(3)
        tw = twisted_product(H, c, G, identity_automorphism(G))
        direct = cartesian_product(H, G)
        assert tw.finite_form.composition == direct.composition

    def test_seeded_instance_passes_axioms(self):
        H, c = three_point_relation_with_cocycle()
        G = cyclic_group_groupoid(3)
        alpha = cyclic_multiplier_automorphism(G, 2)
        tw = twisted_product(H, c, G, alpha)
        assert verify_groupoid_axioms(tw.finite_form).passed

    def test_structure_maps_formulas(self):
        H, c = three_point_relation_with_cocycle()
        G = cyclic_group_groupoid(3)
        alpha = cyclic_multiplier_automorphism(G, 2)
        tw = twisted_product(H, c, G, alpha)
        F = tw.finite_form
        for (h, g) in F.elements:
            assert F.r((h, g)) == (H.r(h), G.r(g))
            assert F.s((h, g)) == (H.s(h), alpha.power(c(h))(G.s(g)))
            assert F.inv((h, g)) == (H.inv(h), alpha.power(c(h))(G.inv(g)))
        for ((x, y), z) in F.composition.items():
            assert F.s(z) == F.s(y) and F.r(z) == F.r(x)

    def test_invalid_cocycle_rejected(self):
        H = full_relation(range(2))
        bad = Cocycle(H, {g: (1 if g == (0, 1) else 0) for g in H.elements})
        G = cyclic_group_groupoid(2)
        with pytest.raises(ValueError):
            twisted_product(H, bad, G, identity_automorphism(G))

    def test_nontrivial_isotropy_from_bundle_component(self):
        # mixed H: a 2-torsion fiber plus a relation carrying the cocycle
        H = disjoint_union(group_bundle({0: 2}), full_relation(range(2)))
        c = weight_cocycle(H, {u: (1 if u[0] == 1 and u[1] == (1, 1) else 0) for u in H.units})
        assert c.value_range() != {0}
        G = full_relation(range(2))
        tw = twisted_product(H, c, G, identity_automorphism(G))
        bundle_unit = ((0, (0, 0)), (0, 0))
        iso = isotropy_group(tw.finite_form, bundle_unit)
        assert len(iso) == 2


class TestWfc:
    def test_identity_on_multiorbit_counterexample(self):
        G = full_relation(range(2))
        cert = check_wfc(G, identity_automorphism(G), depth=1, shift_bound=3)
        assert cert.status == "counterexample"
        assert cert.details["l"] == 1

    def test_finite_certificate_within_bound(self):
        # swapping two orbits has order 2; l = 1 exhibits no collision
        G = disjoint_union(full_relation(range(2)), full_relation(range(2)))
        from groupoid_forge.groupoid_core import GroupoidAutomorphism

        swap = GroupoidAutomorphism(G, {(t, g): (1 - t, g) for (t, g) in G.elements})
        cert = check_wfc(G, swap, depth=1, shift_bound=1)
        assert cert.status == "certificate"
        cert2 = check_wfc(G, swap, depth=1, shift_bound=2)
        assert cert2.status == "counterexample" and cert2.details["l"] == 2

    def test_telescoped_diagram_certificate(self):
        d = telescope(constant_diagram(2), (0, 1, 2, 4, 6, 9, 12, 15, 18, 22, 26))
        alpha = edge_cycle_automorphism(d)
        cert = check_wfc(d, alpha, depth=10, shift_bound=8)
        assert cert.status == "certificate"
        witness = cert.details["witness_level_per_shift"]
        table = cert.details["min_cycle_length_per_level"]
        for l_str, level in witness.items():
            assert table[str(level)] > int(l_str)

    def test_certificate_at_depth_one_past_shift_bound(self):
        # L = 20 with one extra level: every shift finds a witness level
        from groupoid_forge.pipeline import _growth_subsequence

        d = constant_diagram(2)
        sub = _growth_subsequence(d, 22, 4096)
        tele = telescope(d, sub)
        alpha = edge_cycle_automorphism(tele)
        cert = check_wfc(tele, alpha, depth=21, shift_bound=20)
        assert cert.status == "certificate"
        assert set(cert.details["witness_level_per_shift"]) == {
            str(l) for l in range(1, 21)
        }

    def test_bratteli_unknown_when_depth_insufficient(self):
        d = telescope(constant_diagram(2), (0, 1, 2))
        alpha = edge_cycle_automorphism(d)
        cert = check_wfc(d, alpha, depth=2, shift_bound=10)
        assert cert.status == "unknown"

    def test_bratteli_identity_counterexample_with_repetition(self):
        d = constant_diagram(1)
        alpha = edge_cycle_automorphism(d)
        cert = check_wfc(d, alpha, depth=3, shift_bound=2)
        assert cert.status == "counterexample"

    def test_rank2_certificate(self):
        const = Rank2Data(A=(((2,),),), B=(((2,),),), T=((1,), (1,)), repeat_from=0)
        tele = telescope_rank2(const, 7)
        diagram = build_rank2(tele.telescoped, 7)
        cert = check_wfc(diagram, None, depth=5, shift_bound=50)
        assert cert.status == "certificate"
        for n, row in cert.details["inequality"].items():
            assert row["holds"] and row["min_order"] > row["n_times_m_n"]


class TestLc:
    def test_identity_gives_one(self):
        G = full_relation(range(3))
        w = check_lc(G, identity_automorphism(G), [frozenset(G.units)])
        assert w.entries[0].l == 1

    def test_edge_orbit_three(self):
        from groupoid_forge.graph_model import BratteliDiagram, path_from_edges
        from groupoid_forge.matrices import as_matrix

        d = BratteliDiagram((1, 1), (as_matrix([[3]]),))
        alpha = edge_cycle_automorphism(d)
        mu = path_from_edges((d.edges_between(0)[0],))
        w = check_lc(d, alpha, [mu])
        assert w.entries[0].l == 3

    def test_finite_subset_orbit(self):
        G = full_relation(range(3))
        alpha = relation_automorphism(G, {0: 1, 1: 2, 2: 0})
        V = frozenset({(0, 0)})
        w = check_lc(G, alpha, [V])
        assert w.entries[0].l == 3
        back = alpha.power(-3)
        assert frozenset(back(u) for u in V) <= V

    def test_rank2_blue_edge_order_gcd(self):
        # level-2 blue edges of the extended three-level example have order
        # 12 and m_2 = 12, so the least l with F^{l m_2} fixing them is
        # o/gcd(m_2, o) = 1
        data = Rank2Data(
            A=(((3,),), ((4,),), ((2,),)),
            B=(((1,),), ((2,),), ((2,),)),
            T=((1,), (3,), (6,), (6,)),
        )
        diagram = build_rank2(data, 4)
        orders = compute_orders(diagram)
        from groupoid_forge.rank2_diagrams import Rank2Path, rank2_automorphism

        auto = rank2_automorphism(diagram, orders)
        e = diagram.blue_edges_at(2)[0]
        o = orders.edge_orders[e.label]
        m2 = orders.m[2]
        assert (o, m2) == (12, 12)
        import math

        expected = o // math.gcd(m2, o)
        w = check_lc(diagram, auto, [Rank2Path((e.label,), 0)])
        assert w.entries[0].l == expected == 1


class TestContractingWitness:
    def _trivial_model(self):
        G = full_relation([0])
        return bouquet_twisted_product(G, identity_automorphism(G))

    def test_trivial_g_special_case(self):
        # window Z(lam): the witness pair is (lam.lam, lam) when l = 1
        model = self._trivial_model()
        lam = BQ.path([4])
        w = contracting_bisection_witness(model, unit_bisection(lam), frozenset(model.g.units), l=1)
        assert w.bisection.h_part.range_word == BQ.path([4, 4])
        assert w.bisection.h_part.source_word == lam
        assert basic_proper_subset(w.r_set[0], w.s_set[0])

    def test_whole_space_window_extends_by_edge_one(self):
        model = self._trivial_model()
        w = contracting_bisection_witness(
            model, unit_bisection(BQ.unit()), frozenset(model.g.units), l=1
        )
        assert w.lam == BQ.path([1])
        assert w.bisection.h_part.range_word == BQ.path([1, 1])

    def test_nontrivial_g_window(self):
        G = full_relation(range(3))
        alpha = relation_automorphism(G, {0: 1, 1: 2, 2: 0})
        model = bouquet_twisted_product(G, alpha)
        V = frozenset(G.units)
        w = contracting_bisection_witness(model, unit_bisection(BQ.path([1])), V, l=1)
        assert w.s_set[1] == V
        assert reverify_contracting_witness(model, w)

    def test_missing_witness_rejected_with_instruction(self):
        model = self._trivial_model()
        with pytest.raises(ValueError, match="check_lc"):
            contracting_bisection_witness(
                model, unit_bisection(BQ.path([1])), frozenset(model.g.units), l=None
            )

    def test_fifty_seeded_instances(self):
        rng = rng_for(20250809)
        count = 0
        while count < 50:
            G = full_relation(range(rng.randint(1, 3)))
            points = sorted({u[0] for u in G.units})
            shifted = points[1:] + points[:1]
            alpha = relation_automorphism(G, dict(zip(points, shifted)))
            model = bouquet_twisted_product(G, alpha)
            u = BQ.path([rng.randint(0, 6) for _ in range(rng.randint(0, 3))])
            excl = frozenset(BQ.edge(i) for i in rng.sample(range(7), k=rng.choice([0, 1, 2])))
            window_h = unit_bisection(u, excl)
            window_g = frozenset(G.units)
            l = check_lc(G, alpha, [window_g]).entries[0].l
            w = contracting_bisection_witness(model, window_h, window_g, l)
            assert reverify_contracting_witness(model, w)
            assert basic_subset(w.s_set[0], window_h)
            count += 1

    def test_product_calculus_inverse(self):
        model = self._trivial_model()
        w = contracting_bisection_witness(
            model, unit_bisection(BQ.path([2])), frozenset(model.g.units), l=1
        )
        inv = product_inverse(model, w.bisection)
        double = product_multiply(model, w.bisection, inv)
        assert len(double) == 1 and double[0].h_part.is_unit_set()


class TestMinimality:
    def test_single_orbit_yes(self):
        G = full_relation(range(3))
        assert minimality_verdict(G, identity_automorphism(G), 3).is_yes

    def test_two_orbits_with_swap_yes(self):
        from groupoid_forge.groupoid_core import GroupoidAutomorphism

        G = disjoint_union(full_relation(range(2)), full_relation(range(2)))
        swap = GroupoidAutomorphism(G, {(t, g): (1 - t, g) for (t, g) in G.elements})
        assert minimality_verdict(G, swap, 3).is_yes

    def test_two_orbits_identity_no(self):
        G = disjoint_union(full_relation(range(2)), full_relation(range(2)))
        v = minimality_verdict(G, identity_automorphism(G), 3)
        assert v.is_no and v.justification

    def test_bratteli_cofinal_yes(self):
        assert minimality_verdict(constant_diagram(2), None, 4).is_yes

    def test_bratteli_disconnected_unknown(self):
        from groupoid_forge.graph_model import BratteliDiagram
        from groupoid_forge.matrices import as_matrix

        d = BratteliDiagram(
            (2, 2),
            (as_matrix([[1, 0], [0, 1]]),),
        )
        assert minimality_verdict(d, None, 1).value == "unknown"


class TestPrincipalityOracle:
    def test_iff_on_seeded_family(self):
        for (H, c, G, alpha) in seeded_twisted_instances(40, seed=11):
            tw = twisted_product(H, c, G, alpha)
            scanned = is_principal(tw.finite_form)
            predicted, details = principality_criterion(H, c, G, alpha)
            assert scanned == predicted, details
            # on a finite H the cocycle cannot twist isotropy
            assert details["isotropy_cocycle_values"] == []

    def test_criterion_components(self):
        H = full_relation(range(2))
        c = zero_cocycle(H)
        G = cyclic_group_groupoid(2)
        ok, details = principality_criterion(H, c, G, identity_automorphism(G))
        assert not ok and details["g_principal"] is False
        Hb = group_bundle({0: 2})
        ok2, details2 = principality_criterion(
            Hb, zero_cocycle(Hb), full_relation(range(2)),
            identity_automorphism(full_relation(range(2))),
        )
        assert not ok2 and details2["zero_fiber_isotropy_trivial"] is False
