import json

import pytest

from blokit import (
    AnalysisReport,
    BitString,
    CapacityError,
    FeatureVector,
    InvalidArgumentError,
    TransformParams,
    census_fibers,
    complement,
    fiber_census,
    from_text,
    linkability_study,
    random_bits,
    recovery_probability,
    revocability_check,
    transform,
)

ZP = TransformParams(5)


class TestFiberCensus:
    @pytest.mark.parametrize(
        "bits,block,distinct,fiber",
        [
            (5, 5, 16, 2),
            (10, 5, 256, 4),
            (15, 5, 4096, 8),
            (9, 3, 64, 8),
        ],
    )
    def test_exhaustive_counts(self, bits, block, distinct, fiber):
        report = fiber_census(bits, block)
        f = report.findings
        assert f["distinct_templates"] == distinct
        assert f["fiber_size"] == fiber
        assert f["fiber_size_uniform"] is True
        assert f["impostors_per_template"] == fiber - 1
        assert f["distinct_templates"] * f["fiber_size"] == 1 << bits

    def test_partition_is_exact_at_10_5(self):
        fibers = census_fibers(10, 5)
        assert sum(len(m) for m in fibers.values()) == 1 << 10
        seen = set()
        for members in fibers.values():
            assert len(members) == 4
            seen.update(members)
        assert seen == set(range(1 << 10))

    def test_fibers_agree_with_public_transform(self):
        # independent check of the census grouping through the public API
        fibers = census_fibers(10, 5)
        for tpl_value, members in list(fibers.items())[:32]:
            for member in members:
                tpl = transform(BitString(member, 10), ZP)
                assert tpl.data == BitString(tpl_value, 8)

    def test_capacity_bound(self):
        with pytest.raises(CapacityError):
            fiber_census(25, 5)

    def test_indivisible_length_rejected(self):
        with pytest.raises(InvalidArgumentError):
            fiber_census(12, 5)


class TestRecoveryProbability:
    def test_single_block_analytic_rate(self):
        report = recovery_probability(5, 5, trials=200, seed=1)
        assert report.findings["analytic_rate"] == 0.5
        assert report.findings["analytic_rate_symbolic"] == "2^-1"

    def test_two_blocks_converges_to_quarter(self):
        report = recovery_probability(10, 5, trials=20_000, seed=2)
        f = report.findings
        assert f["analytic_rate"] == 0.25
        assert abs(f["empirical_rate"] - 0.25) <= 3 * f["std_error"]
        assert f["within_3_std_errors"] is True

    def test_deterministic_given_seed(self):
        a = recovery_probability(10, 5, trials=500, seed=9)
        b = recovery_probability(10, 5, trials=500, seed=9)
        assert a.findings == b.findings

    def test_seed_changes_trials(self):
        a = recovery_probability(10, 5, trials=500, seed=1)
        b = recovery_probability(10, 5, trials=500, seed=2)
        assert a.findings["successes"] != b.findings["successes"]

    def test_indivisible_length_rejected(self):
        with pytest.raises(InvalidArgumentError):
            recovery_probability(12, 5, trials=10, seed=1)

    def test_exhaustive_oracle_at_20_bits(self):
        # every fiber at (20, 5) has 16 members, so recovery rate is exactly 1/16
        report = recovery_probability(20, 5, trials=20_000, seed=3)
        f = report.findings
        assert f["analytic_rate"] == 0.0625
        assert abs(f["empirical_rate"] - 0.0625) <= 3 * f["std_error"]


class TestLinkabilityStudy:
    def test_blo_templates_always_link(self):
        for seed in (1, 2, 3):
            report = linkability_study(10, 5, ZP, seed=seed, feature_bits=100)
            assert report.findings["link_rate"] == 1.0

    def test_pair_counts(self):
        report = linkability_study(10, 5, ZP, seed=1, feature_bits=50)
        assert report.findings["same_user_pairs"] == 10 * 10
        assert report.findings["cross_user_pairs"] == 5 * 45

    def test_identical_users_collide(self):
        fv = FeatureVector(random_bits(50, 4))
        report = linkability_study(2, 2, ZP, seed=0, features=[fv, fv])
        assert report.findings["cross_user_collision_rate"] == 1.0

    def test_distinct_random_users_do_not_collide(self):
        report = linkability_study(10, 5, ZP, seed=5, feature_bits=1795)
        assert report.findings["cross_user_collision_rate"] == 0.0

    def test_keyed_baseline_breaks_linkage(self):
        report = linkability_study(
            10, 5, ZP, seed=6, keyed_baseline=True, feature_bits=1795
        )
        assert report.findings["template_bits"] == 1436
        assert report.findings["link_rate"] == 1.0
        assert report.findings["keyed_link_rate"] == 0.0
        assert "control" in report.findings["keyed_baseline_note"]

    def test_degenerate_counts_rejected(self):
        with pytest.raises(InvalidArgumentError):
            linkability_study(1, 5, ZP, seed=1)
        with pytest.raises(InvalidArgumentError):
            linkability_study(5, 1, ZP, seed=1)

    def test_features_length_checked(self):
        with pytest.raises(InvalidArgumentError):
            linkability_study(3, 2, ZP, seed=1, features=[FeatureVector(random_bits(10, 1))])


class TestRevocabilityCheck:
    def test_repeated_enrollment_is_constant(self):
        fv = FeatureVector(random_bits(1795, 8))
        report = revocability_check(fv, ZP, attempts=100)
        assert report.findings["distinct_templates"] == 1

    def test_one_flipped_non_pivot_bit_changes_template(self):
        fv = from_text("10010")
        other = from_text("00010")  # flips b1, a non-pivot position
        t1 = transform(fv, ZP)
        t2 = transform(other, ZP)
        assert t1.data != t2.data

    def test_complement_feature_gives_same_template(self):
        fv = FeatureVector(random_bits(25, 9))
        r1 = revocability_check(fv, ZP, attempts=2)
        r2 = revocability_check(FeatureVector(complement(fv.data)), ZP, attempts=2)
        assert r1.findings == r2.findings
        assert transform(complement(fv.data), ZP) == transform(fv, ZP)

    def test_needs_two_attempts(self):
        with pytest.raises(InvalidArgumentError):
            revocability_check(FeatureVector(random_bits(10, 1)), ZP, attempts=1)


class TestReportRendering:
    def test_text_is_tab_separated_key_values(self):
        report = fiber_census(10, 5)
        lines = report.to_text().splitlines()
        assert lines[0] == "kind\tcensus"
        assert lines[-1].startswith("verdict\t")
        assert all(len(line.split("\t")) == 2 for line in lines)

    def test_json_round_trips_same_content(self):
        report = recovery_probability(10, 5, trials=100, seed=1)
        doc = json.loads(report.to_json())
        assert doc["kind"] == "recovery"
        assert doc["parameters"] == report.parameters
        assert doc["findings"] == report.findings
        assert doc["verdict"] == report.verdict

    def test_verdict_values_appear_in_findings(self):
        report = revocability_check(FeatureVector(random_bits(10, 1)), ZP, attempts=5)
        assert str(report.findings["distinct_templates"]) in report.verdict

    def test_booleans_render_lowercase(self):
        report = AnalysisReport(kind="x", findings={"flag": True}, verdict="v")
        assert "finding.flag\ttrue" in report.to_text()
