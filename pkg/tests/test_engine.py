import json
import math

import pytest
from hypothesis import given, strategies as st

from taaf import catalog, engine
from taaf.engine import (
    CompositeNode,
    TaafNode,
    TaafParams,
    ZeroWeightSumError,
    composite_eval,
    composite_grad,
    neuron_forward,
    taaf_eval,
    taaf_grad,
)

# arbitrary-precision oracle: 2*tanh(2) + 1
TWO_TANH2_PLUS_1 = 2.928055160151634

IDENT = TaafParams(1.0, 1.0, 0.0, 0.0)

params_st = st.builds(
    TaafParams,
    *(st.floats(min_value=-3.0, max_value=3.0, allow_nan=False) for _ in range(4)),
)


def node(a, b, g, d, inner="identity", fixed=None):
    return TaafNode(TaafParams(a, b, g, d), inner, fixed or {})


class TestTaafEval:
    def test_identity_params_reduce_to_inner(self):
        assert taaf_eval(node(1, 1, 0, 0, "relu"), 3.0) == 3.0

    def test_shift_and_scale(self):
        assert taaf_eval(node(2, 1, 0, 5, "relu"), -4.0) == 5.0

    def test_inner_argument_offset(self):
        assert taaf_eval(node(1, 2, -1, 0, "tanh"), 0.5) == 0.0

    def test_identity_reduction_whole_catalog(self, grid):
        for fid in catalog.ids():
            n = node(1, 1, 0, 0, fid)
            for z in grid:
                assert abs(taaf_eval(n, z) - catalog.value(fid, {}, z)) <= 1e-15

    def test_non_finite_params_rejected(self):
        with pytest.raises(ValueError):
            TaafParams(math.inf, 1.0, 0.0, 0.0)

    def test_unknown_inner_rejected(self):
        with pytest.raises(catalog.UnknownActivationError):
            node(1, 1, 0, 0, "nope")


class TestTaafGrad:
    def test_relu_identity_point(self):
        g = taaf_grad(node(1, 1, 0, 0, "relu"), 3.0)
        assert (g.d_z, g.d_alpha, g.d_beta, g.d_gamma, g.d_delta) == (1, 3, 3, 1, 1)

    def test_tanh_origin(self):
        g = taaf_grad(node(1, 1, 0, 0, "tanh"), 0.0)
        assert (g.d_z, g.d_alpha, g.d_beta, g.d_gamma, g.d_delta) == (1, 0, 0, 1, 1)

    def test_hand_expanded_chain_rule(self):
        # cross-check at 3 points: u = 3z + 0.5, s = sigma(u),
        # value = 2s - 1, s' = s(1-s)
        n = node(2, 3, 0.5, -1, "logistic_sigmoid")
        for z in (-1.2, 0.4, 1.0):
            u = 3 * z + 0.5
            s = catalog.value("logistic_sigmoid", {}, u)
            sp = s * (1 - s)
            g = taaf_grad(n, z)
            assert g.d_z == pytest.approx(2 * 3 * sp, rel=1e-15)
            assert g.d_alpha == pytest.approx(s, rel=1e-15)
            assert g.d_beta == pytest.approx(2 * sp * z, rel=1e-15)
            assert g.d_gamma == pytest.approx(2 * sp, rel=1e-15)
            assert g.d_delta == 1.0

    def test_d_delta_is_exactly_one(self):
        for z in (-2.0, 0.0, 1.7):
            assert taaf_grad(node(0.3, -1.2, 0.9, 4.0, "silu"), z).d_delta == 1.0


class TestComposite:
    def test_max_of_z_and_minus_z_is_abs(self, grid):
        comp = CompositeNode("max", (node(1, 1, 0, 0), node(-1, 1, 0, 0)))
        for z in grid:
            assert composite_eval(comp, z) == abs(z)

    def test_sum_with_zero_alphas_is_zero(self, grid):
        comp = CompositeNode("sum", (node(0, 1, 0, 0, "tanh"), node(0, 2, 1, 0, "silu")))
        for z in grid:
            assert composite_eval(comp, z) == 0.0

    def test_weighted_average_of_identical_branches(self, grid):
        b = node(1.3, 0.7, -0.2, 0.5, "tanh")
        comp = CompositeNode("weighted_average", (b, b), weights=(1.0, 1.0))
        for z in grid:
            assert composite_eval(comp, z) == taaf_eval(b, z)

    def test_max_dominates_branches(self, grid):
        comp = CompositeNode("max", (node(1, 1, 0, 0, "tanh"),
                                     node(0.5, 2, 0.3, -0.1, "silu"),
                                     node(-1, 1, 0, 0.2, "sin")))
        for z in grid:
            v = composite_eval(comp, z)
            assert all(v >= taaf_eval(b, z) for b in comp.branches)

    def test_aplu_shaped_sum_matches_piecewise_form(self, grid):
        # relu(z) plus a second hinge a*relu(b - z), built by flipping the
        # inner argument's sign
        a, b = 0.7, 1.3
        comp = CompositeNode("sum", (node(1, 1, 0, 0, "relu"),
                                     node(a, -1, b, 0, "relu")))

        def direct(z):
            return max(z, 0.0) + a * max(b - z, 0.0)

        for z in grid:
            assert composite_eval(comp, z) == pytest.approx(direct(z), abs=1e-15)

    def test_maxout_style_unit(self, grid):
        # max of three affine pieces: w_k * z + b_k via identity inners
        pieces = ((1.0, 0.0), (-0.5, 1.0), (0.2, -0.3))
        comp = CompositeNode("max", tuple(node(w, 1, 0, b) for w, b in pieces))
        for z in grid:
            assert composite_eval(comp, z) == max(w * z + b for w, b in pieces)

    def test_gaussian_mixture_sum(self, grid):
        # weighted sum of shifted gaussian bumps against the direct mixture
        comp = CompositeNode("sum", (node(0.8, 1.5, -0.3, 0, "gaussian_pdf"),
                                     node(-0.4, 0.7, 1.1, 0, "gaussian_pdf")))

        def phi(u):
            return math.exp(-0.5 * u * u) / math.sqrt(2 * math.pi)

        for z in grid:
            direct = 0.8 * phi(1.5 * z - 0.3) + (-0.4) * phi(0.7 * z + 1.1)
            assert composite_eval(comp, z) == pytest.approx(direct, abs=1e-15)

    def test_sine_sigmoid_pair_sum(self, grid):
        # scaled sine plus scaled sigmoid, the two-branch blend
        comp = CompositeNode("sum", (node(0.5, 2.0, 0, 0, "sin"),
                                     node(1.5, 0.8, 0, 0, "logistic_sigmoid")))
        for z in grid:
            direct = 0.5 * math.sin(2.0 * z) + 1.5 * catalog.value(
                "logistic_sigmoid", {}, 0.8 * z)
            assert composite_eval(comp, z) == pytest.approx(direct, abs=1e-15)

    def test_construction_errors(self):
        with pytest.raises(ValueError):
            CompositeNode("max", (node(1, 1, 0, 0),))
        with pytest.raises(ValueError):
            CompositeNode("sum", ())
        with pytest.raises(ZeroWeightSumError):
            CompositeNode("weighted_average", (node(1, 1, 0, 0), node(1, 1, 0, 0)),
                          weights=(1.0, -1.0))
        with pytest.raises(ValueError):
            CompositeNode("sum", (node(1, 1, 0, 0),), weights=(1.0,))
        with pytest.raises(ValueError):
            CompositeNode("median", (node(1, 1, 0, 0),))


class TestCompositeGrad:
    def test_max_active_branch(self):
        comp = CompositeNode("max", (node(1, 1, 0, 0), node(-1, 1, 0, 0)))
        g = composite_grad(comp, 3.0)
        assert g.d_z == 1.0
        assert g.branches[0].d_alpha == 3.0
        assert g.branches[1] == engine._ZERO_GRAD

    def test_max_tie_breaks_to_lowest_index(self):
        comp = CompositeNode("max", (node(1, 1, 0, 0), node(-1, 1, 0, 0)))
        g = composite_grad(comp, 0.0)
        assert g.d_z == 1.0  # branch 0 wins the tie
        assert g.branches[1] == engine._ZERO_GRAD

    def test_weighted_average_identical_branches(self):
        b = node(1.3, 0.7, -0.2, 0.5, "tanh")
        comp = CompositeNode("weighted_average", (b, b), weights=(1.0, 1.0))
        g = composite_grad(comp, 0.9)
        single = taaf_grad(b, 0.9)
        assert g.d_z == pytest.approx(single.d_z, rel=1e-15)
        # identical branches leave the average insensitive to the weights
        assert g.d_weights == (0.0, 0.0)

    def test_sum_d_z_adds_up(self):
        comp = CompositeNode("sum", (node(1, 2, 0, 0, "tanh"), node(0.5, 1, 0.3, 0, "silu")))
        g = composite_grad(comp, 0.4)
        assert g.d_z == pytest.approx(
            taaf_grad(comp.branches[0], 0.4).d_z + taaf_grad(comp.branches[1], 0.4).d_z)


class TestNeuronForward:
    def test_single_input(self):
        assert neuron_forward([1.0], [2.0], node(1, 1, 0, 0, "relu")) == 2.0

    def test_zero_preactivation_matches_taaf_at_zero(self):
        n = node(1.7, 0.9, 0.4, -0.2, "silu")
        assert neuron_forward([1.0, -1.0], [3.0, 3.0], n) == taaf_eval(n, 0.0)

    def test_weighted_sum_oracle(self):
        n = node(2, 1, 0, 1, "tanh")
        got = neuron_forward([0.5, 0.5], [1.0, 3.0], n)
        assert got == pytest.approx(TWO_TANH2_PLUS_1, rel=1e-15)

    def test_length_mismatch(self):
        with pytest.raises(ValueError, match="length mismatch"):
            neuron_forward([1.0], [1.0, 2.0], node(1, 1, 0, 0))

    def test_empty_vectors(self):
        with pytest.raises(ValueError):
            neuron_forward([], [], node(1, 1, 0, 0))


class TestParameterSymmetries:
    @given(p=params_st, c=st.floats(min_value=-2.0, max_value=2.0, allow_nan=False),
           z=st.floats(min_value=-5.0, max_value=5.0, allow_nan=False))
    def test_delta_shift(self, p, c, z):
        n1 = TaafNode(p, "tanh")
        n2 = TaafNode(TaafParams(p.alpha, p.beta, p.gamma, p.delta + c), "tanh")
        assert abs(taaf_eval(n2, z) - (taaf_eval(n1, z) + c)) <= 1e-15

    @given(p=params_st, z=st.floats(min_value=-5.0, max_value=5.0, allow_nan=False))
    def test_alpha_scaling(self, p, z):
        base = TaafNode(TaafParams(p.alpha, p.beta, p.gamma, 0.0), "silu")
        doubled = TaafNode(TaafParams(2 * p.alpha, p.beta, p.gamma, 0.0), "silu")
        assert abs(taaf_eval(doubled, z) - 2 * taaf_eval(base, z)) <= 1e-13

    @pytest.mark.parametrize("fid", ["tanh", "sinh", "sin", "identity", "sgn",
                                     "asinh", "bipolar_sigmoid"])
    def test_odd_inner_sign_symmetry(self, fid, grid):
        p = TaafParams(1.4, -0.8, 0.6, 0.3)
        q = TaafParams(-1.4, 0.8, -0.6, 0.3)
        n1, n2 = TaafNode(p, fid), TaafNode(q, fid)
        for z in grid:
            assert abs(taaf_eval(n1, z) - taaf_eval(n2, z)) <= 1e-13


class TestSerialization:
    def test_taaf_round_trip(self):
        n = node(1.5, -0.25, 0.125, 2.0, "lrelu", {"slope": 0.05})
        again = engine.from_json(engine.to_json(n))
        assert again == n

    def test_composite_round_trip(self):
        comp = CompositeNode("weighted_average",
                             (node(1, 1, 0, 0, "tanh"), node(0.5, 2, 1, -1, "silu")),
                             weights=(0.25, 0.75))
        again = engine.from_json(engine.to_json(comp))
        assert again == comp

    def test_format_shape(self):
        d = json.loads(engine.to_json(node(1, 2, 3, 4, "relu")))
        assert d == {"kind": "taaf",
                     "params": {"alpha": 1.0, "beta": 2.0, "gamma": 3.0, "delta": 4.0},
                     "inner": "relu", "fixed": {}}

    @given(p=params_st)
    def test_round_trip_property(self, p):
        n = TaafNode(p, "tanh")
        assert engine.from_json(engine.to_json(n)) == n
