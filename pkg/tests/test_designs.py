import numpy as np
import pytest

from helpers import expected_table_n8, literal_product
from stbc.clifford import build_generators
from stbc.designs import (
    STBCDesign,
    build_rate1_4group,
    codeword,
    design_from_text,
    design_to_text,
    extend_full_rate,
    generator_matrix,
    layer_design,
    load_design,
    save_design,
    verify_group_decodable,
    verify_theorem1,
)
from stbc.errors import (
    DependentExtensionError,
    DimensionMismatchError,
    UnsupportedSizeError,
)
from stbc.linalg import tilde_vec, vec

rng = np.random.default_rng(99)


class TestRate1Construction:
    def test_n8_shape(self):
        d = build_rate1_4group(3)
        assert d.n_t == d.T == 8
        assert len(d.weights) == 16
        assert [len(g) for g in d.groups] == [4, 4, 4, 4]
        assert d.rate == 1.0

    def test_n8_matches_published_table_entrywise(self):
        cliff = build_generators(3)
        expected = expected_table_n8(cliff)
        d = build_rate1_4group(3)
        for got, want in zip(d.weights, expected):
            assert np.abs(got - want).max() == 0.0

    def test_n8_group1_fourth_entry(self):
        cliff = build_generators(3)
        d = build_rate1_4group(3)
        want = literal_product(cliff, 1, 2, 3, 4, 5, scalar=1j)
        assert np.abs(d.weights[d.groups[0][3]] - want).max() == 0.0

    def test_group_headers(self):
        cliff = build_generators(3)
        d = build_rate1_4group(3)
        for m in range(3):
            header = d.weights[d.groups[m + 1][0]]
            assert np.array_equal(header, cliff.generators[m])

    def test_a1_is_alamouti_array(self):
        d = build_rate1_4group(1)
        assert len(d.weights) == 4
        s = rng.standard_normal(4)
        got = codeword(d, s)
        z1, z2 = s[0] + 1j * s[1], s[2] + 1j * s[3]
        classic = np.array([[z1, z2], [-np.conj(z2), np.conj(z1)]])
        assert np.abs(got - classic).max() < 1e-14

    def test_group1_closes_up_to_sign(self):
        d = build_rate1_4group(3)
        g1 = [d.weights[i] for i in d.groups[0]]
        for a in g1:
            for b in g1:
                prod = a @ b
                hits = [
                    np.abs(prod - sgn * c).max() < 1e-12
                    for c in g1
                    for sgn in (1, -1)
                ]
                assert any(hits)

    @pytest.mark.parametrize("a", [2, 3, 4])
    def test_group1_diagonal_properties(self, a):
        d = build_rate1_4group(a)
        for i in d.groups[0][1:]:
            w = d.weights[i]
            diag = np.diag(w)
            assert np.abs(w - np.diag(diag)).max() == 0.0
            assert np.abs(np.abs(diag.real) - 1).max() == 0.0
            assert np.abs(diag.imag).max() == 0.0
            assert abs(np.trace(w)) == 0.0
            assert np.array_equal(diag[0::2], diag[1::2])

    def test_unsupported_size(self):
        with pytest.raises(UnsupportedSizeError):
            build_rate1_4group(0)


class TestTheorem1:
    @pytest.mark.parametrize("a", [1, 2, 3])
    def test_builtin_designs_pass(self, a):
        report = verify_theorem1(build_rate1_4group(a))
        assert report.passed, report.summary()

    def test_commuting_headers_fail_with_witness(self):
        # g1 and g1g2g3 commute, so placing them as headers of different
        # groups must trip the anticommutation condition
        cliff = build_generators(2)
        weights = (
            np.eye(4, dtype=complex),
            cliff.generators[0].copy(),
            literal_product(cliff, 1, 2, 3),
            cliff.generators[1].copy(),
        )
        bad = STBCDesign(
            n_t=4,
            T=4,
            weights=tuple(np.ascontiguousarray(w) for w in weights),
            groups=((0,), (1,), (2,), (3,)),
        )
        report = verify_theorem1(bad)
        assert not report.passed
        cond5 = next(c for c in report.checks if c.name.startswith("5"))
        assert not cond5.passed
        assert cond5.witnesses

    def test_flipped_sign_fails(self):
        d = build_rate1_4group(2)
        weights = list(np.array(w) for w in d.weights)
        weights[5] = -weights[5]
        corrupted = STBCDesign(
            n_t=4, T=4, weights=tuple(weights), groups=d.groups
        )
        report = verify_theorem1(corrupted)
        assert not report.passed


class TestExtension:
    def test_silver_structure(self):
        base = build_rate1_4group(1)
        silver = extend_full_rate(base, 2)
        assert silver.rate == 2.0
        assert silver.scalars == ((1 + 0j), 1j)
        for i in range(4):
            assert np.abs(silver.weights[4 + i] - 1j * base.weights[i]).max() == 0.0

    def test_n8_layer_multipliers(self):
        cliff = build_generators(3)
        base = build_rate1_4group(3)
        two = extend_full_rate(base, 2)
        assert len(two.weights) == 32
        assert two.rate == 2.0
        # second layer = first layer right-multiplied by generator 4
        f4 = cliff.generators[3]
        for i in range(16):
            assert np.abs(two.weights[16 + i] - base.weights[i] @ f4).max() == 0.0
        three = extend_full_rate(base, 3)
        f6 = cliff.generators[5]
        for i in range(16):
            assert np.abs(three.weights[32 + i] - base.weights[i] @ f6).max() == 0.0

    def test_layer_scalar_applies_to_later_layers(self):
        base = build_rate1_4group(1)
        scal = np.exp(1j * np.pi / 4)
        silver = extend_full_rate(base, 2, layer_scalar=scal)
        assert np.abs(silver.weights[0] - base.weights[0]).max() == 0.0
        assert np.abs(silver.weights[4] - 1j * scal * base.weights[0]).max() < 1e-15

    def test_full_extension_exhausts_at_n_t(self):
        base = build_rate1_4group(2)
        full = extend_full_rate(base, 4)
        assert len(full.weights) == 32
        assert np.linalg.matrix_rank(generator_matrix(full)) == 32

    def test_layer_count_bounds(self):
        base = build_rate1_4group(1)
        with pytest.raises(UnsupportedSizeError):
            extend_full_rate(base, 3)

    def test_non_unit_scalar_rejected(self):
        with pytest.raises(ValueError):
            extend_full_rate(build_rate1_4group(1), 2, layer_scalar=2.0)

    def test_each_layer_is_group_decodable(self):
        design = extend_full_rate(build_rate1_4group(2), 2,
                                  layer_scalar=np.exp(1j * np.pi / 4))
        for layer in range(design.layers):
            sub = layer_design(design, layer)
            assert verify_group_decodable(sub).passed

    def test_dependent_weights_rejected(self):
        w = np.eye(2, dtype=complex)
        with pytest.raises(DependentExtensionError):
            STBCDesign(n_t=2, T=2, weights=(w, w.copy()), groups=((0,), (1,)))


class TestCodeword:
    def test_unit_vector_picks_weight(self):
        d = build_rate1_4group(2)
        e1 = np.zeros(8)
        e1[0] = 1.0
        assert np.array_equal(codeword(d, e1), d.weights[0])

    def test_zero_vector(self):
        d = build_rate1_4group(2)
        assert np.abs(codeword(d, np.zeros(8))).max() == 0.0

    def test_wrong_length_rejected(self):
        d = build_rate1_4group(2)
        with pytest.raises(DimensionMismatchError):
            codeword(d, np.zeros(7))

    def test_energy_scale(self):
        assert build_rate1_4group(2).energy_scale == 1.0
        silver = extend_full_rate(build_rate1_4group(1), 2)
        assert abs(silver.energy_scale - 1 / np.sqrt(2)) < 1e-15


class TestGeneratorMatrix:
    def test_rate1_a2_orthogonal_columns(self):
        g = generator_matrix(build_rate1_4group(2))
        assert g.shape == (32, 8)
        gram = g.T @ g
        assert np.abs(gram - np.diag(np.diag(gram))).max() < 1e-12

    def test_single_weight_design(self):
        d = STBCDesign(
            n_t=2, T=2, weights=(np.eye(2, dtype=complex),), groups=((0,),)
        )
        g = generator_matrix(d)
        assert g.shape == (8, 1)
        assert np.array_equal(g[:, 0], tilde_vec(vec(np.eye(2))))

    def test_full_rate_n2_invertible(self):
        silver = extend_full_rate(build_rate1_4group(1), 2)
        g = generator_matrix(silver)
        assert g.shape == (8, 8)
        assert abs(np.linalg.det(g)) > 1e-6

    def test_consistency_with_codeword(self):
        d = extend_full_rate(build_rate1_4group(2), 2)
        g = generator_matrix(d)
        s = rng.standard_normal(16)
        assert np.abs(g @ s - tilde_vec(vec(codeword(d, s)))).max() < 1e-12


class TestDesignFiles:
    def test_roundtrip(self, tmp_path):
        d = extend_full_rate(build_rate1_4group(2), 2,
                             layer_scalar=np.exp(1j * np.pi / 4))
        path = tmp_path / "design.txt"
        save_design(d, path)
        loaded = load_design(path)
        assert loaded.n_t == d.n_t and loaded.T == d.T
        assert loaded.layers == d.layers
        assert loaded.groups == d.groups
        assert np.abs(np.array(loaded.scalars) - np.array(d.scalars)).max() == 0.0
        for w1, w2 in zip(loaded.weights, d.weights):
            assert np.array_equal(w1, w2)

    def test_header_required(self):
        with pytest.raises(ValueError):
            design_from_text("nonsense\n")

    def test_corrupted_sign_detected(self):
        d = build_rate1_4group(2)
        text = design_to_text(d)
        # flip one sign in the serialized form of a header weight
        corrupted = text.replace("-1.0+0.0i", "1.0+0.0i", 1)
        loaded = design_from_text(corrupted)
        report = verify_theorem1(loaded)
        assert not report.passed
        assert any(c.witnesses for c in report.checks if not c.passed)

    def test_loaded_design_cannot_extend(self):
        d = build_rate1_4group(1)
        loaded = design_from_text(design_to_text(d))
        with pytest.raises(ValueError):
            extend_full_rate(loaded, 2)
