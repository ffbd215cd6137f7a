import json

import pytest

from microinject.config import InvariantError, ParseError, parse_config
from microinject.control import ControllerVariant
from microinject.sim import TrajectoryKind


def base_config():
    return {
        "frame": {"alpha": 0.5, "dx": 0.5, "dy": 0.5, "fx": 2.0, "fy": 4.0},
        "masses": {"mx": 1.0, "my": 1.0, "mp": 1.0},
        "impedance": {"m": 1.0, "b": 20.0, "k": 100.0},
        "trajectory": {
            "kind": "Quintic",
            "start": [0.0, 0.0],
            "end": [1.5, 0.5],
            "duration": 3.0,
        },
        "membrane": {"stiffness": 50.0, "damping": 2.0, "contact_x": 1.0},
        "fed": [0.5, 0.0],
        "run": {"t_end": 5.0, "dt": 0.001, "variants": ["StageConsistent"]},
        "seed": 0,
    }


def dumps(cfg):
    return json.dumps(cfg)


class TestHappyPath:
    def test_minimal_document(self):
        cfg = parse_config(dumps(base_config()))
        assert cfg.frame.fx == 2.0
        assert cfg.masses.total_x == 3.0
        assert cfg.impedance.k == 100.0
        assert cfg.trajectory.kind is TrajectoryKind.QUINTIC
        assert cfg.membrane.contact_x == 1.0
        assert (cfg.fed.fex, cfg.fed.fey) == (0.5, 0.0)
        assert cfg.t_end == 5.0 and cfg.dt == 0.001
        assert cfg.variants == (ControllerVariant.STAGE_CONSISTENT,)
        assert cfg.seed == 0

    def test_sinusoid_document(self):
        doc = base_config()
        doc["trajectory"] = {
            "kind": "Sinusoid",
            "start": [0.0, 0.0],
            "duration": 4.0,
            "amplitude": [0.5, 0.2],
            "frequency": 0.5,
        }
        cfg = parse_config(dumps(doc))
        assert cfg.trajectory.kind is TrajectoryKind.SINUSOID
        assert cfg.trajectory.frequency == 0.5

    def test_all_variants_accepted(self):
        doc = base_config()
        doc["run"]["variants"] = ["Corrected", "SimPaper", "McPaper",
                                  "StageConsistent"]
        cfg = parse_config(dumps(doc))
        assert len(cfg.variants) == 4


class TestStructuralErrors:
    def test_invalid_json(self):
        with pytest.raises(ParseError, match="invalid JSON"):
            parse_config("{not json")

    def test_top_level_unknown_key(self):
        doc = base_config()
        doc["frames"] = doc.pop("frame")
        with pytest.raises(ParseError, match="unknown key 'frames'"):
            parse_config(dumps(doc))

    def test_nested_unknown_key(self):
        doc = base_config()
        doc["masses"]["mz"] = 1.0
        with pytest.raises(ParseError, match="unknown key 'masses.mz'"):
            parse_config(dumps(doc))

    def test_missing_key(self):
        doc = base_config()
        del doc["impedance"]
        with pytest.raises(ParseError, match="missing key 'impedance'"):
            parse_config(dumps(doc))

    def test_wrong_type(self):
        doc = base_config()
        doc["masses"]["mx"] = "heavy"
        with pytest.raises(ParseError, match="masses.mx must be a number"):
            parse_config(dumps(doc))

    def test_bool_is_not_a_number(self):
        doc = base_config()
        doc["frame"]["fx"] = True
        with pytest.raises(ParseError, match="frame.fx must be a number"):
            parse_config(dumps(doc))

    def test_fed_must_be_pair(self):
        doc = base_config()
        doc["fed"] = [1.0]
        with pytest.raises(ParseError, match="fed must be an array of two numbers"):
            parse_config(dumps(doc))

    def test_unknown_variant_name(self):
        doc = base_config()
        doc["run"]["variants"] = ["Corected"]
        with pytest.raises(ParseError, match=r"run.variants\[0\]"):
            parse_config(dumps(doc))

    def test_unknown_trajectory_kind(self):
        doc = base_config()
        doc["trajectory"]["kind"] = "Cubic"
        with pytest.raises(ParseError, match="trajectory.kind"):
            parse_config(dumps(doc))

    def test_sinusoid_forbids_end(self):
        doc = base_config()
        doc["trajectory"] = {
            "kind": "Sinusoid", "start": [0, 0], "duration": 1.0,
            "amplitude": [1, 0], "frequency": 1.0, "end": [1, 1],
        }
        with pytest.raises(ParseError, match="trajectory.end"):
            parse_config(dumps(doc))

    def test_quintic_forbids_frequency(self):
        doc = base_config()
        doc["trajectory"]["frequency"] = 2.0
        with pytest.raises(ParseError, match="trajectory.frequency"):
            parse_config(dumps(doc))

    def test_seed_must_be_integer(self):
        doc = base_config()
        doc["seed"] = 1.5
        with pytest.raises(ParseError, match="seed must be an integer"):
            parse_config(dumps(doc))


class TestInvariantErrors:
    def test_negative_mass(self):
        doc = base_config()
        doc["masses"]["mx"] = -1.0
        with pytest.raises(InvariantError, match="masses.mx must be > 0"):
            parse_config(dumps(doc))

    @pytest.mark.parametrize("section,key", [
        ("frame", "dx"), ("frame", "dy"), ("frame", "fx"), ("frame", "fy"),
        ("impedance", "m"), ("impedance", "b"), ("impedance", "k"),
    ])
    def test_positivity_constraints(self, section, key):
        doc = base_config()
        doc[section][key] = 0.0
        with pytest.raises(InvariantError, match=f"{section}.{key} must be > 0"):
            parse_config(dumps(doc))

    def test_membrane_non_negative(self):
        doc = base_config()
        doc["membrane"]["stiffness"] = -2.0
        with pytest.raises(InvariantError, match="membrane.stiffness must be >= 0"):
            parse_config(dumps(doc))

    def test_run_steps_positive(self):
        doc = base_config()
        doc["run"]["dt"] = 0.0
        with pytest.raises(InvariantError, match="run.dt must be > 0"):
            parse_config(dumps(doc))

    def test_empty_variants(self):
        doc = base_config()
        doc["run"]["variants"] = []
        with pytest.raises(InvariantError, match="no variants selected"):
            parse_config(dumps(doc))

    def test_negative_seed(self):
        doc = base_config()
        doc["seed"] = -1
        with pytest.raises(InvariantError, match="seed must be >= 0"):
            parse_config(dumps(doc))

    def test_non_finite_number(self):
        doc = base_config()
        text = dumps(doc).replace('"alpha": 0.5', '"alpha": Infinity')
        with pytest.raises(InvariantError, match="frame.alpha must be finite"):
            parse_config(text)
