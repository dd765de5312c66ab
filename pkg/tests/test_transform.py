import pytest
from hypothesis import given, settings
import hypothesis.strategies as st

from blokit import (
    BitString,
    FeatureVector,
    InvalidArgumentError,
    MalformedInputError,
    PaddingPolicy,
    ProtectedTemplate,
    TransformParams,
    complement,
    enumerate_preimages,
    from_text,
    random_bits,
    read_template_file,
    segment,
    transform,
    transform_block,
    write_template_file,
)

from conftest import bit_strings, block_multiple_features, transform_params

ZP = TransformParams(5)
TR = TransformParams(5, PaddingPolicy.TRUNCATE)


class TestParams:
    @pytest.mark.parametrize("size", [4, 30, 2])
    def test_even_sizes_rejected(self, size):
        with pytest.raises(InvalidArgumentError):
            TransformParams(size)

    @pytest.mark.parametrize("size", [1, -3, 0])
    def test_too_small_rejected(self, size):
        with pytest.raises(InvalidArgumentError):
            TransformParams(size)

    @pytest.mark.parametrize("size,pivot", [(3, 1), (5, 2), (7, 3)])
    def test_pivot_is_middle(self, size, pivot):
        assert TransformParams(size).pivot_index == pivot


class TestSegment:
    def test_1795_bits_gives_359_blocks_either_policy(self):
        fv = FeatureVector(random_bits(1795, 1))
        for params in (ZP, TR):
            blocks = segment(fv, params)
            assert len(blocks) == 359
            assert all(b.length == 5 for b in blocks)

    def test_zero_pad_extends_with_zero_bits(self):
        assert segment(from_text("1011001"), ZP) == [from_text("10110"), from_text("01000")]

    def test_truncate_drops_trailing_bits(self):
        assert segment(from_text("1011001"), TR) == [from_text("10110")]

    def test_blocks_preserve_order_and_concatenate_back(self):
        fv = random_bits(40, 3)
        blocks = segment(fv, ZP)
        rebuilt = blocks[0]
        for blk in blocks[1:]:
            rebuilt = rebuilt + blk
        assert rebuilt == fv

    def test_empty_input_rejected(self):
        with pytest.raises(InvalidArgumentError):
            segment(BitString(0, 0), ZP)

    def test_truncate_rejects_short_input(self):
        with pytest.raises(InvalidArgumentError):
            segment(from_text("1011"), TR)


class TestTransformBlock:
    @pytest.mark.parametrize(
        "block,expected",
        [
            ("10010", "1010"),
            ("01101", "1010"),
            ("00000", "0000"),
            ("101", "11"),
        ],
    )
    def test_examples(self, block, expected):
        assert transform_block(from_text(block)) == from_text(expected)

    @pytest.mark.parametrize("block", ["1010", "1", ""])
    def test_bad_lengths_rejected(self, block):
        with pytest.raises(InvalidArgumentError):
            transform_block(from_text(block))

    def test_matches_bitwise_definition(self):
        # independent oracle: XOR every non-pivot bit with the middle bit
        for b in (3, 5, 7):
            pivot = (b - 1) // 2
            for value in range(1 << b):
                block = BitString(value, b)
                expected = BitString.from_bits(
                    block[i] ^ block[pivot] for i in range(b) if i != pivot
                )
                assert transform_block(block) == expected

    def test_all_32_blocks_cover_16_outputs_twice(self):
        fibers = {}
        for value in range(32):
            out = transform_block(BitString(value, 5))
            fibers.setdefault(out, []).append(BitString(value, 5))
        assert len(fibers) == 16
        assert all(len(pair) == 2 for pair in fibers.values())
        for out, (x, y) in fibers.items():
            assert x == complement(y)


class TestTransform:
    def test_1795_bits_gives_1436_bit_template(self):
        tpl = transform(FeatureVector(random_bits(1795, 7)), ZP)
        assert tpl.data.length == 1436
        assert tpl.block_count == 359
        assert tpl.original_length == 1795

    def test_two_block_worked_example(self):
        assert transform(from_text("1001010000"), ZP).data == from_text("10101000")

    def test_all_zero_input(self):
        assert transform(from_text("0" * 10), ZP).data == from_text("0" * 8)

    def test_deterministic(self):
        fv = FeatureVector(random_bits(1795, 3))
        assert transform(fv, ZP) == transform(fv, ZP)

    @settings(max_examples=300)
    @given(transform_params(), bit_strings(min_length=1, max_length=80))
    def test_length_law(self, params, bs):
        b = params.block_size
        if params.padding is PaddingPolicy.TRUNCATE and bs.length < b:
            with pytest.raises(InvalidArgumentError):
                transform(bs, params)
            return
        tpl = transform(bs, params)
        assert tpl.data.length == tpl.block_count * (b - 1)
        if bs.length % b == 0:
            assert tpl.data.length == bs.length * (b - 1) // b

    @settings(max_examples=1000)
    @given(block_multiple_features())
    def test_complement_invariance(self, fv_params):
        fv, params = fv_params
        assert transform(complement(fv.data), params) == transform(fv, params)

    @settings(max_examples=200)
    @given(block_multiple_features(max_blocks=6))
    def test_fiber_membership(self, fv_params):
        fv, params = fv_params
        tpl = transform(fv, params)
        preimages = {p.data for p in enumerate_preimages(tpl, 1 << tpl.block_count)}
        assert fv.data in preimages

    def test_zero_padded_input_is_in_its_own_fiber(self):
        fv = from_text("1011001")
        tpl = transform(fv, ZP)
        padded = from_text("1011001000")
        assert padded in {p.data for p in enumerate_preimages(tpl, 4)}


class TestProtectedTemplateInvariants:
    def test_data_length_checked(self):
        with pytest.raises(InvalidArgumentError):
            ProtectedTemplate(BitString(0, 7), ZP, original_length=10, block_count=2)

    def test_block_count_policy_consistency_checked(self):
        with pytest.raises(InvalidArgumentError):
            ProtectedTemplate(BitString(0, 8), ZP, original_length=20, block_count=2)

    def test_at_least_one_block(self):
        with pytest.raises(InvalidArgumentError):
            ProtectedTemplate(BitString(0, 0), ZP, original_length=0, block_count=0)


class TestTemplateFile:
    def test_round_trip(self, tmp_path):
        tpl = transform(FeatureVector(random_bits(1795, 5)), ZP)
        path = tmp_path / "t.blo"
        write_template_file(path, tpl)
        assert read_template_file(path) == tpl

    def test_round_trip_truncate_policy(self, tmp_path):
        tpl = transform(FeatureVector(random_bits(23, 5)), TR)
        path = tmp_path / "t.blo"
        write_template_file(path, tpl)
        loaded = read_template_file(path)
        assert loaded == tpl
        assert loaded.params.padding is PaddingPolicy.TRUNCATE

    def test_header_layout(self, tmp_path):
        tpl = transform(from_text("1001010000"), ZP)
        path = tmp_path / "t.blo"
        write_template_file(path, tpl)
        raw = path.read_bytes()
        assert raw[:4] == b"BLO1"
        assert raw[4] == 1
        assert raw[5] == 0
        assert int.from_bytes(raw[6:8], "big") == 5
        assert int.from_bytes(raw[8:12], "big") == 10
        assert int.from_bytes(raw[12:16], "big") == 8
        assert raw[16:] == tpl.data.pack()

    @pytest.mark.parametrize(
        "mutate",
        [
            lambda raw: b"XLO1" + raw[4:],
            lambda raw: raw[:4] + b"\x02" + raw[5:],
            lambda raw: raw[:5] + b"\x07" + raw[6:],
            lambda raw: raw[:16],
            lambda raw: raw[:8],
        ],
    )
    def test_corrupt_files_rejected(self, tmp_path, mutate):
        tpl = transform(FeatureVector(random_bits(40, 5)), ZP)
        path = tmp_path / "t.blo"
        write_template_file(path, tpl)
        path.write_bytes(mutate(path.read_bytes()))
        with pytest.raises(MalformedInputError):
            read_template_file(path)
