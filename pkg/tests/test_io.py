import json

import numpy as np
import pytest

from qfgur import io
from qfgur.core import werner_state
from qfgur.errors import ParseError
from qfgur.families import gellmann_148, pauli_zx


def write(tmp_path, name, obj):
    path = tmp_path / name
    path.write_text(obj if isinstance(obj, str) else json.dumps(obj, indent=2))
    return path


class TestRoundTrip:
    def test_measurement_set(self, tmp_path):
        for mset in (pauli_zx(), gellmann_148()):
            path = write(tmp_path, "m.json", io.measurement_set_to_obj(mset))
            back = io.read_measurement_set(path)
            np.testing.assert_allclose(back.pool, mset.pool, atol=1e-15)
            assert back.label == mset.label

    def test_state(self, tmp_path):
        state = werner_state("qutrit", 0.4)
        back = io.read_state(write(tmp_path, "s.json", io.state_to_obj(state)))
        np.testing.assert_allclose(back.matrix, state.matrix)
        assert back.split == (3, 3)

    def test_complex_entries_and_povm(self, tmp_path):
        obj = {
            "dim": 2,
            "measurements": [
                {"label": "Y", "kind": "projective", "vectors": [[0.7071067811865476, [0, 0.7071067811865476]],
                                                               [0.7071067811865476, [0, -0.7071067811865476]]]},
                {"label": "half", "kind": "povm", "elements": [[[0.5, 0], [0, 0.5]], [[0.5, 0], [0, 0.5]]]},
            ],
        }
        mset = io.read_measurement_set(write(tmp_path, "y.json", obj))
        assert mset[0].is_projective and not mset[1].is_projective
        assert mset[0].elements[0][1, 0] == pytest.approx(0.5j)
        assert mset.label == "y"


class TestErrors:
    def test_line_of_bad_measurement(self, tmp_path):
        obj = io.measurement_set_to_obj(pauli_zx())
        obj["measurements"][1]["vectors"][1] = [0.7071067811865476, 0.7071067811865476]
        path = write(tmp_path, "bad.json", obj)
        line = [i for i, t in enumerate(path.read_text().splitlines(), 1) if '"vectors"' in t][1]
        with pytest.raises(ParseError, match=rf"bad\.json:{line}: measurements\[1\]: NonOrthonormal"):
            io.read_measurement_set(path)

    def test_invalid_json_line(self, tmp_path):
        with pytest.raises(ParseError, match=r":3: invalid JSON"):
            io.read_measurement_set(write(tmp_path, "x.json", '{\n "dim": 2,\n "measurements": [,]\n}'))

    @pytest.mark.parametrize(
        "obj",
        [
            [],
            {"measurements": []},
            {"measurements": [{"kind": "projective"}]},
            {"measurements": [{"kind": "weird", "vectors": [[1, 0], [0, 1]]}]},
            {"measurements": [{"vectors": [[1, "a"], [0, 1]]}]},
            {"dim": 3, "measurements": [{"vectors": [[1, 0], [0, 1]]}]},
            {"weights": [2.0], "measurements": [{"vectors": [[1, 0], [0, 1]]}]},
        ],
    )
    def test_malformed_sets(self, tmp_path, obj):
        with pytest.raises(ParseError):
            io.read_measurement_set(write(tmp_path, "m.json", obj))

    def test_bad_state(self, tmp_path):
        with pytest.raises(ParseError, match="InvalidState"):
            io.read_state(write(tmp_path, "s.json", {"dim": 2, "matrix": [[1, 0], [0, 1]]}))
        with pytest.raises(ParseError, match="BadFactorization"):
            io.read_state(write(tmp_path, "s.json", {"dim": 2, "split": [2, 2], "matrix": [[1, 0], [0, 0]]}))

    def test_missing_file(self, tmp_path):
        with pytest.raises(ParseError, match="cannot read"):
            io.read_state(tmp_path / "nope.json")


class TestFormatting:
    def test_rounded(self):
        out = io.rounded({"a": np.float64(1 + 2**-0.5), "b": np.array([1e-17, 2.0]), "c": np.bool_(True), "d": None})
        assert out == {"a": 1.707106781187, "b": [0.0, 2.0], "c": True, "d": None}

    def test_format_number(self):
        assert io.format_number((3 + 5**0.5) / 2) == "2.618033988750"
        assert io.format_number(-1e-15) == "0.000000000000"
        assert io.format_number(7) == "7"
        assert io.format_number(False) == "false"
