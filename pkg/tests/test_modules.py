import random

import pytest
from hypothesis import given, settings, strategies as st

from oracles import localized_is_free
from thickloci.errors import NotInvertibleError, ValidationError
from thickloci.modules import (
    ModuleMap,
    ModulePres,
    Resolution,
    annihilator,
    cosyzygy,
    direct_sum,
    dual,
    fitting_chain,
    free_module,
    is_free,
    is_mcm,
    is_zero_module,
    minimalize,
    nonfree_locus,
    pd_finite,
    q_locus,
    quotient_by_prime,
    residue_field,
    ring_inverse,
    sequence_is_exact,
    strip_free,
    syzygy,
)
from thickloci.spectra import SpecSubset, singular_locus


def names(subset):
    return sorted(subset.member_names)


class TestMinimalize:
    def test_unit_pivot_kills_generator(self, node):
        m = minimalize(ModulePres(node.ring, [["1"]]))
        assert m.rows == 0 and m.cols == 0

    def test_unit_entry_with_tail(self, dualnum):
        m = minimalize(ModulePres(dualnum.ring, [["x"], ["1+x"]]))
        # 1+x is a unit; after pivoting the remaining module is free
        assert m.cols == 0

    def test_minimal_matrix_unchanged_up_to_zero_columns(self, node):
        m = minimalize(ModulePres(node.ring, [["x", "0"], ["0", "0"]]))
        assert m.rows == 2
        assert m.cols == 1
        assert str(m.matrix[0][0]) == "x"
        assert m.matrix[1][0].is_zero()
        assert m.minimal

    def test_idempotent(self, node):
        m0 = ModulePres(node.ring, [["x", "y"], ["y", "x"]])
        m1 = minimalize(m0)
        assert minimalize(m1) == m1

    def test_ring_inverse(self, dualnum):
        ring = dualnum.ring
        inv = ring_inverse(ring, ring.base.parse("1+x"))
        assert ring.nf(inv * ring.base.parse("1+x")) == ring.base.one()
        with pytest.raises(NotInvertibleError):
            ring_inverse(ring, ring.base.parse("x"))


class TestResolutions:
    def test_betti_of_k_over_node(self, node):
        assert Resolution(node.sample("k")).betti_numbers(5) == (1, 2, 2, 2, 2, 2)

    def test_betti_of_k_over_regular_line(self, regular1):
        assert Resolution(regular1.sample("k")).betti_numbers(2) == (1, 1, 0)

    def test_periodic_resolution_over_ribbon(self, ribbon):
        assert Resolution(ribbon.sample("Rx")).betti_numbers(4) == (1, 1, 1, 1, 1)

    def test_syzygy_swap_over_node(self, node):
        om = syzygy(node.sample("Rx"), 1)
        assert [[str(e) for e in r] for r in om.matrix] == [["y"]]
        assert syzygy(node.sample("R"), 2).rows == 0

    def test_syzygy_of_k_over_node_is_maximal_ideal(self, node):
        om = syzygy(node.sample("k"), 1)
        assert om.rows == 2 and om.cols == 2
        assert Resolution(om).betti_numbers(3) == (2, 2, 2, 2)


class TestFreenessAndPd:
    def test_free_module_detection(self, node):
        assert is_free(free_module(node.ring, 2)) == (True, 2)
        assert is_free(node.sample("k")) == (False, 1)
        assert is_free(ModulePres(node.ring, [["1"]])) == (True, 0)

    def test_pd_verdicts(self, regular1, dualnum, node, ribbon, quad2):
        assert pd_finite(residue_field(regular1.ring)) == 1
        for cat in (dualnum, node, ribbon, quad2):
            assert pd_finite(residue_field(cat.ring)) is None

    def test_pd_of_free_plus_torsion(self, node):
        m = direct_sum(node.sample("R"), node.sample("Rx"))
        assert pd_finite(m) is None

    def test_pd_zero_module(self, node):
        assert pd_finite(ModulePres(node.ring, [["1"]])) == 0


class TestFitting:
    def test_chain_examples(self, node):
        ring = node.ring
        ch = fitting_chain(node.sample("Rx"))
        assert ch.ideals[0] == ring.defining + ringify(ring, ["x"])
        assert ch.ideals[1].is_unit()
        ch_k = fitting_chain(node.sample("k"))
        assert ch_k.ideals[0] == ringify(ring, ["x", "y"])

    def test_free_summand_shifts_chain(self, node):
        ring = node.ring
        m = ModulePres(ring, [["x"], ["0"]])
        ch = fitting_chain(m)
        assert ch.ideals[0] == ring.defining  # no 2-minors: zero in R
        assert ch.ideals[1] == ring.defining + ringify(ring, ["x"])
        assert ch.ideals[2].is_unit()

    @settings(max_examples=20, deadline=None)
    @given(st.integers(0, 10**6))
    def test_fitting_invariance_under_free_padding(self, seed):
        from thickloci.catalog import load

        rng = random.Random(seed)
        cat = load(rng.choice(["NODE", "DUALNUM", "RIBBON"]))
        name = rng.choice([n for n in cat.samples if n != "R"])
        m = cat.sample(name)
        padded = direct_sum(m, free_module(cat.ring, rng.choice([1, 2])))
        a = [i.groebner_basis() for i in fitting_chain(m).ideals]
        b = [i.groebner_basis() for i in fitting_chain(minimalize(padded)).ideals]
        # a rank-r free summand shifts the chain by r and pads below with
        # the zero ideal of R (= the defining ideal upstairs)
        shift = len(b) - len(a)
        assert shift > 0
        assert b[shift:] == a
        zero_gb = cat.ring.defining.groebner_basis()
        assert all(b[i] == zero_gb for i in range(shift))


def ringify(ring, gens):
    from thickloci.groebner import Ideal

    return Ideal(ring.base, [ring.base.parse(g) for g in gens])


class TestNonfreeLocus:
    def test_examples(self, node, ribbon):
        assert names(nonfree_locus(node.sample("Rx"))) == ["m"]
        assert names(nonfree_locus(node.sample("k"))) == ["m"]
        assert names(nonfree_locus(free_module(node.ring, 3))) == []
        assert names(nonfree_locus(ribbon.sample("Rx"))) == ["m", "px"]

    def test_against_localization_oracle(self):
        from thickloci.catalog import load

        for ring_name in ("NODE", "DUALNUM", "RIBBON", "WHITNEY3", "QUAD2", "CUSP", "REGULAR1"):
            cat = load(ring_name)
            for sample_name, module in cat.samples.items():
                got = nonfree_locus(module).member_names
                for p in cat.ring.registry:
                    oracle_free = localized_is_free(module, p)
                    assert (p.name not in got) == oracle_free, (
                        f"{ring_name}/{sample_name} at {p.name}: engine "
                        f"{'free' if p.name not in got else 'nonfree'}, oracle "
                        f"{'free' if oracle_free else 'nonfree'}"
                    )

    def test_zero_module_conventions(self, node):
        zero = ModulePres(node.ring, [["1"]])
        assert is_zero_module(zero)
        assert names(nonfree_locus(zero)) == []
        assert names(q_locus(zero)) == []
        assert is_mcm(zero) == (False, None, -1)


class TestDepthDim:
    def test_node_samples(self, node):
        assert is_mcm(node.sample("Rx")) == (True, 1, 1)
        assert is_mcm(node.sample("k")) == (False, 0, 0)
        assert is_mcm(node.sample("R")) == (True, 1, 1)

    def test_quad2(self, quad2):
        assert is_mcm(residue_field(quad2.ring)) == (True, 0, 0)


class TestDualCosyzygy:
    def test_dual_examples(self, ribbon, node):
        d = dual(ribbon.sample("Rx"))
        assert [[str(e) for e in r] for r in d.matrix] == [["x"]]
        assert is_free(dual(free_module(node.ring, 2))) == (True, 2)
        # over the node, Hom(R/(x), R) = (0:x) = (y) which is R/(x) again
        dn = dual(node.sample("Rx"))
        assert Resolution(dn).betti_numbers(2) == (1, 1, 1)

    def test_cosyzygy_inverts_syzygy(self, node, ribbon, dualnum):
        for cat, name in ((node, "Rx"), (ribbon, "Rx"), (dualnum, "k")):
            m = cat.sample(name)
            back = syzygy(cosyzygy(m), 1)
            assert Resolution(strip_free(back)).betti_numbers(3) == Resolution(m).betti_numbers(3)
            assert nonfree_locus(back) == nonfree_locus(m)

    def test_cosyzygy_requires_mcm(self, node):
        with pytest.raises(ValidationError):
            cosyzygy(node.sample("k"))


class TestQLocus:
    def test_examples(self, node, ribbon, regular1):
        assert names(q_locus(node.sample("k"))) == ["m"]
        assert names(q_locus(ribbon.sample("Rx"))) == ["m", "px"]
        assert names(q_locus(regular1.sample("k"))) == []

    def test_additivity(self, node):
        both = q_locus(direct_sum(node.sample("Rx"), node.sample("k")))
        assert both == q_locus(node.sample("Rx")) | q_locus(node.sample("k"))

    def test_prime_cyclic(self, node, whitney3):
        ring = node.ring
        m = ring.prime("m")
        assert q_locus(quotient_by_prime(ring, m)) == SpecSubset(ring, [m])
        w = whitney3.ring
        for p in w.registry:
            assert q_locus(quotient_by_prime(w, p)) == SpecSubset(w, [p])


class TestAnnihilator:
    def test_cyclic_annihilators(self, node):
        ring = node.ring
        ann = annihilator(node.sample("Rx"))
        assert ann == ringify(ring, ["x"])
        assert annihilator(free_module(ring, 2)) == ring.defining
        assert annihilator(ModulePres(ring, [["1"]])).is_unit()


class TestModuleMaps:
    def test_exactness_checker_accepts_catalog_sequence(self, node):
        seq = node.sequences[0]
        assert sequence_is_exact(seq.inj, seq.surj)

    def test_exactness_checker_rejects_broken_map(self, node):
        ring = node.ring
        inj = ModuleMap(node.sample("Ry"), node.sample("R"), [["x"]])
        bad_surj = ModuleMap(node.sample("R"), node.sample("Ry"), [["1"]])
        assert not sequence_is_exact(inj, bad_surj)

    def test_kernel_of_multiplication(self, ribbon):
        ring = ribbon.ring
        mul_x = ModuleMap(ribbon.sample("R"), ribbon.sample("R"), [["x"]])
        ker = mul_x.kernel_module()
        assert Resolution(ker).betti_numbers(2) == Resolution(ribbon.sample("Rx")).betti_numbers(2)
