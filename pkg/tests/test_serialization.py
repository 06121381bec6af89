from fractions import Fraction

import numpy as np
import pytest
import toml

from wermerset.utils import serialization
from wermerset.utils.construction import Construction, GridConfig
from wermerset.utils.errors import InvariantViolation, SchemaMismatch


class TestFormatting:

    def test_reals_keep_every_bit(self):
        for value in (0.1, 1 / 3, 2.0 ** -1000, -1e300):
            assert serialization.parse_real(serialization.format_real(value)) == value

    def test_complex_pairs(self):
        assert serialization.format_complex(1 - 2j) == ["1", "-2"]
        assert serialization.parse_complex(["0.5", "-0.25"]) == 0.5 - 0.25j

    def test_rationals(self):
        assert serialization.format_rational(Fraction(-3, 6)) == "-1/2"
        assert serialization.format_rational(0) == "0/1"


class TestRoundTrip:

    def test_identical_text(self, hand_built):
        text = serialization.dumps(hand_built)
        assert serialization.dumps(serialization.loads(text)) == text

    def test_stages_survive(self, hand_built):
        loaded = serialization.loads(serialization.dumps(hand_built))
        assert loaded.depth == hand_built.depth
        assert loaded.mode == hand_built.mode
        assert loaded.table.points == hand_built.table.points
        for before, after in zip(hand_built.stages, loaded.stages):
            assert after.eps_exponent == before.eps_exponent
            assert after.c == before.c and after.rho == before.rho and after.m == before.m
            assert np.array_equal(after.p.coeffs, before.p.coeffs)
        assert loaded.stages[0].Z_roots is not None and len(loaded.stages[0].Z_roots) == 0
        assert loaded.stages[-1].Z is None

    def test_file_round_trip(self, hand_built, tmp_path):
        path = str(tmp_path / "construction.toml")
        serialization.save(hand_built, path)
        assert serialization.dumps(serialization.load(path)) == serialization.dumps(hand_built)

    def test_document_is_plain_toml(self, hand_built):
        document = toml.loads(serialization.dumps(hand_built))
        assert document["schema_version"] == serialization.SCHEMA_VERSION
        assert len(document["stages"]) == 3
        assert document["stages"][1]["eps_exponent"] == 40
        assert document["branch_points"][1] == ["1/1", "0/1"]


class TestLoadChecks:

    def test_schema_version(self, hand_built):
        document = serialization.to_document(hand_built)
        document["schema_version"] = 99
        with pytest.raises(SchemaMismatch):
            serialization.from_document(document)

    @pytest.mark.parametrize(
        "field, value, predicate",
        [
            ("eps_exponent", 5, "EPS_MONOTONE"),
            ("rho", "3.5", "RHO_GAP"),
            ("n", 7, "STAGE_INDEX"),
            ("c", "-0.05", "C_LADDER"),
        ],
    )
    def test_tampered_stage(self, hand_built, field, value, predicate):
        document = serialization.to_document(hand_built)
        document["stages"][1][field] = value
        with pytest.raises(InvariantViolation) as raised:
            serialization.from_document(document)
        assert raised.value.predicate == predicate

    def test_wrong_degree(self, hand_built):
        document = serialization.to_document(hand_built)
        document["stages"][2] = dict(document["stages"][1], n=3, eps_exponent=120, rho="7")
        with pytest.raises(InvariantViolation) as raised:
            serialization.from_document(document)
        assert raised.value.predicate == "DEG_W"

    def test_wermer_ladder(self, hand_built):
        document = serialization.to_document(hand_built)
        document["mode"] = "wermer"
        document["stages"][1]["c"] = "0.5"
        with pytest.raises(InvariantViolation) as raised:
            serialization.from_document(document)
        assert raised.value.predicate == "C_LADDER"


@pytest.mark.slow
def test_built_round_trip(built):
    text = serialization.dumps(built)
    loaded = serialization.loads(text)
    assert serialization.dumps(loaded) == text
    assert [report.predicate for report in loaded.reports] == [report.predicate for report in built.reports]


def test_grid_settings_survive_a_second_round_trip(hand_built):
    # the fixture passes integer densities
    text = serialization.dumps(hand_built)
    reloaded = serialization.loads(text)
    assert isinstance(reloaded.config.z_grid, float)
    assert serialization.dumps(serialization.loads(serialization.dumps(reloaded))) == text


@pytest.mark.slow
def test_builds_are_deterministic():
    config = GridConfig(z_grid=8, w_grid=8, max_stage=2)
    first = Construction.start(config).advance()
    second = Construction.start(config).advance()
    assert serialization.dumps(first) == serialization.dumps(second)


@pytest.mark.slow
def test_deep_round_trip(deep_built, tmp_path):
    path = str(tmp_path / "construction.toml")
    serialization.save(deep_built, path)
    loaded = serialization.load(path)
    assert loaded.depth == 4
    assert serialization.dumps(loaded) == serialization.dumps(deep_built)
