import json

import numpy as np
import pytest
from hypothesis import given, strategies as st

from lngm import (Branch, ConstraintKind, GeneratorConfig, InstanceFormatError,
                  ProblemInstance, branch_interval, build_transform, corpus,
                  detect_joint_definiteness, generate_random, psi_eval,
                  read_instance, solve, spectral_decompose, write_instance)


class TestGenerator:
    def test_deterministic_per_seed(self):
        a = generate_random(GeneratorConfig(n=4, seed=42))
        b = generate_random(GeneratorConfig(n=4, seed=42))
        np.testing.assert_array_equal(a.A1, b.A1)
        np.testing.assert_array_equal(a.b1, b.b1)
        assert a.c1 == b.c1

    def test_distinct_seeds_differ(self):
        a = generate_random(GeneratorConfig(n=4, seed=1))
        b = generate_random(GeneratorConfig(n=4, seed=2))
        assert not np.array_equal(a.A1, b.A1)

    def test_entry_bounds(self):
        inst = generate_random(GeneratorConfig(n=100, seed=9))
        assert np.abs(inst.A1).max() <= 100.0
        assert np.abs(inst.b1).max() <= 100.0
        np.testing.assert_array_equal(inst.A0, np.eye(100))
        np.testing.assert_array_equal(inst.b0, np.zeros(100))

    def test_anchor_value_pinned(self):
        inst = generate_random(GeneratorConfig(n=2, seed=42))
        det = detect_joint_definiteness(inst.A0, inst.A1)
        _, TP = build_transform(inst, det)
        spec = spectral_decompose(TP)
        ctx = branch_interval(spec, Branch.PSI1)
        anchor = ctx.U1 + 0.8 * (ctx.U2 - ctx.U1)
        assert psi_eval(ctx, anchor) == pytest.approx(1.0, abs=1e-8)

    def test_anchor_fraction_respected(self):
        cfg = GeneratorConfig(n=3, seed=5, anchor_fraction=0.3)
        inst = generate_random(cfg)
        det = detect_joint_definiteness(inst.A0, inst.A1)
        _, TP = build_transform(inst, det)
        ctx = branch_interval(spectral_decompose(TP), Branch.PSI1)
        anchor = ctx.U1 + 0.3 * (ctx.U2 - ctx.U1)
        assert psi_eval(ctx, anchor) == pytest.approx(1.0, abs=1e-8)

    def test_generated_instances_certify(self):
        for seed in (42, 7, 101):
            inst = generate_random(GeneratorConfig(n=2, seed=seed))
            assert solve(inst).lngm_count >= 1

    def test_concave_target_branch(self):
        inst = generate_random(GeneratorConfig(n=2, seed=3,
                                               target_branch=Branch.PSI3))
        np.testing.assert_array_equal(inst.A0, -np.eye(2))
        rep = solve(inst)
        assert rep.sgn == -1
        assert rep.lngm_count == 1

    def test_config_validation(self):
        with pytest.raises(ValueError):
            GeneratorConfig(n=1, seed=0)
        with pytest.raises(ValueError):
            GeneratorConfig(n=3, seed=0, entry_range=(5.0, -5.0))
        with pytest.raises(ValueError):
            GeneratorConfig(n=3, seed=0, anchor_fraction=1.0)
        with pytest.raises(ValueError):
            GeneratorConfig(n=3, seed=0, target_branch=Branch.PSI2)


class TestCorpus:
    def test_expected_names_present(self):
        names = set(corpus())
        assert {"psi-roots-eq", "psi-roots-gtr", "psi-roots-max",
                "martinez-1d", "unit-sphere"} <= names

    def test_entries_have_outcomes(self):
        for name, entry in corpus().items():
            assert entry.applicability in ("solver", "detection", "verifier")
            if entry.applicability == "solver":
                assert entry.expected_lngm_count is not None

    def test_detection_entries_are_degenerate(self):
        for name, entry in corpus().items():
            det = detect_joint_definiteness(entry.instance.A0, entry.instance.A1)
            if entry.applicability in ("detection", "verifier"):
                assert not det.is_definite, name
            else:
                assert det.is_definite, name


class TestSerialization:
    def test_corpus_round_trips_bitwise(self, tmp_path):
        for name, entry in corpus().items():
            path = tmp_path / f"{name}.json"
            write_instance(entry.instance, path)
            back = read_instance(path)
            np.testing.assert_array_equal(back.A0, entry.instance.A0)
            np.testing.assert_array_equal(back.b0, entry.instance.b0)
            np.testing.assert_array_equal(back.A1, entry.instance.A1)
            np.testing.assert_array_equal(back.b1, entry.instance.b1)
            assert back.c1 == entry.instance.c1
            assert back.kind == entry.instance.kind

    @given(st.lists(st.floats(-1e12, 1e12, allow_nan=False), min_size=3, max_size=3),
           st.floats(-1e12, 1e12, allow_nan=False))
    def test_random_payload_round_trips(self, diag, c1):
        import tempfile
        inst = ProblemInstance(np.diag(diag), np.array(diag), np.eye(3),
                               np.zeros(3), c1, ConstraintKind.INEQUALITY)
        with tempfile.TemporaryDirectory() as tmp:
            path = f"{tmp}/x.json"
            write_instance(inst, path)
            back = read_instance(path)
        np.testing.assert_array_equal(back.A0, inst.A0)
        assert back.c1 == inst.c1

    def test_kind_mapping(self, tmp_path):
        inst = corpus()["psi-roots-gtr"].instance
        path = tmp_path / "gtr.json"
        write_instance(inst, path)
        data = json.loads(path.read_text())
        assert data["kind"] == "inequality"
        assert read_instance(path).kind is ConstraintKind.INEQUALITY

    def _write(self, tmp_path, payload):
        path = tmp_path / "bad.json"
        path.write_text(json.dumps(payload))
        return path

    def test_non_square_matrix_rejected(self, tmp_path):
        payload = {"n": 2, "A0": [[1.0, 0.0]], "b0": [0.0, 0.0],
                   "A1": [[1.0, 0.0], [0.0, 1.0]], "b1": [0.0, 0.0],
                   "c1": 0.0, "kind": "equality"}
        with pytest.raises(InstanceFormatError, match="A0"):
            read_instance(self._write(tmp_path, payload))

    def test_unknown_field_rejected(self, tmp_path):
        payload = {"n": 1, "A0": [[1.0]], "b0": [0.0], "A1": [[1.0]],
                   "b1": [0.0], "c1": 0.0, "kind": "equality", "extra": 1}
        with pytest.raises(InstanceFormatError, match="unknown"):
            read_instance(self._write(tmp_path, payload))

    def test_missing_field_rejected(self, tmp_path):
        payload = {"n": 1, "A0": [[1.0]], "b0": [0.0], "A1": [[1.0]],
                   "b1": [0.0], "kind": "equality"}
        with pytest.raises(InstanceFormatError, match="missing"):
            read_instance(self._write(tmp_path, payload))

    def test_bad_kind_rejected(self, tmp_path):
        payload = {"n": 1, "A0": [[1.0]], "b0": [0.0], "A1": [[1.0]],
                   "b1": [0.0], "c1": 0.0, "kind": "between"}
        with pytest.raises(InstanceFormatError, match="kind"):
            read_instance(self._write(tmp_path, payload))

    def test_non_finite_rejected(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text('{"n": 1, "A0": [[1.0]], "b0": [0.0], "A1": [[NaN]], '
                        '"b1": [0.0], "c1": 0.0, "kind": "equality"}')
        with pytest.raises(InstanceFormatError, match="finite|JSON"):
            read_instance(path)

    def test_dimension_inconsistency_rejected(self, tmp_path):
        payload = {"n": 3, "A0": [[1.0]], "b0": [0.0], "A1": [[1.0]],
                   "b1": [0.0], "c1": 0.0, "kind": "equality"}
        with pytest.raises(InstanceFormatError, match="3x3"):
            read_instance(self._write(tmp_path, payload))

    def test_not_json_rejected(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("not json {")
        with pytest.raises(InstanceFormatError, match="JSON"):
            read_instance(path)
