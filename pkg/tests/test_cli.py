"""Scenario runner: subcommands, reports, validation, determinism, curves."""

import copy
import json

import pytest

from probdistort.cli import main

DISTORT = {
    "kind": "distort",
    "parameters": {
        "states": ["w1", "w2", "w3"],
        "psi": [2, 1, 1],
        "alpha": 1.0,
        "belief": {"w1": 0.5, "w2": 0.25, "w3": 0.25},
    },
}

AUDIT_PW = {
    "kind": "coherence-audit",
    "parameters": {
        "states": ["w1", "w2", "w3"],
        "distortion": {"kind": "power-weighted", "psi": [2, 1, 1], "alpha": 2.0},
        "trials": 200,
        "seed": 5,
    },
}

AUDIT_SMOOTH = {
    "kind": "coherence-audit",
    "parameters": {
        "states": ["w1", "w2", "w3"],
        "distortion": {"kind": "additive-smoothing", "epsilon": 0.1},
        "trials": 100,
        "seed": 5,
    },
}

GRETHER_UPDATE = {
    "kind": "grether",
    "parameters": {
        "states": ["w1", "w2"],
        "signals": ["t1", "t2"],
        "action": "update",
        "f": {"kind": "power-weighted", "psi": [2, 1], "alpha": 1.0},
        "g": {"kind": "identity"},
        "prior": {"w1": 0.5, "w2": 0.5},
        "experiment": [[0.8, 0.2], [0.4, 0.6]],
        "theta": "t1",
    },
}

MOTIVATED = {
    "kind": "motivated",
    "parameters": {
        "states": ["w1", "w2"],
        "utilities": [0.6931471805599453, 0.0],
        "K": 1.0,
        "Lambda": 1.0,
        "prior": {"w1": 0.5, "w2": 0.5},
    },
}

CURVE = {
    "kind": "curve",
    "parameters": {"psi": [1, 1], "alphas": [2.0, 0.5], "grid": 99},
}


def write(tmp_path, scenario, name="scenario.json"):
    path = tmp_path / name
    path.write_text(json.dumps(scenario))
    return str(path)


def run(scenario, tmp_path, *extra, kind=None, out="report.json"):
    spath = write(tmp_path, scenario)
    argv = [kind or scenario["kind"], "--scenario", spath, "--quiet"]
    if out is not None:
        argv += ["--out", str(tmp_path / out)]
    argv += list(extra)
    code = main(argv)
    report = None
    if out is not None and (tmp_path / out).exists() and out.endswith(".json"):
        report = json.loads((tmp_path / out).read_text())
    return code, report


class TestBasicScenarios:
    def test_distort_report_values(self, tmp_path):
        code, report = run(DISTORT, tmp_path)
        assert code == 0
        out = report["results"]["distorted"]
        assert out["w1"] == pytest.approx(2 / 3, abs=1e-12)
        assert out["w2"] == pytest.approx(1 / 6, abs=1e-12)
        assert report["provenance"]["version"]

    def test_condition_scenario(self, tmp_path):
        scenario = {
            "kind": "condition",
            "parameters": {
                "states": ["w1", "w2", "w3"],
                "belief": {"w1": 0.5, "w2": 0.25, "w3": 0.25},
                "event": ["w1", "w2"],
            },
        }
        code, report = run(scenario, tmp_path)
        assert code == 0
        assert report["results"]["conditional"]["w1"] == pytest.approx(2 / 3)
        assert report["results"]["event_prob"] == pytest.approx(0.75)

    def test_identify_scenario(self, tmp_path):
        scenario = {
            "kind": "identify",
            "parameters": {
                "states": ["w1", "w2", "w3"],
                "distortion": {"kind": "power-weighted", "psi": [2, 1, 1], "alpha": 2.0},
            },
        }
        code, report = run(scenario, tmp_path)
        assert code == 0
        assert report["results"]["alpha"] == pytest.approx(2.0, rel=1e-9)
        assert report["results"]["psi"]["w1"] == pytest.approx(0.5, abs=1e-12)

    def test_grether_update_values(self, tmp_path):
        code, report = run(GRETHER_UPDATE, tmp_path)
        assert code == 0
        post = report["results"]["posterior"]
        assert post["w1"] == pytest.approx(0.8, abs=1e-12)
        assert post["w2"] == pytest.approx(0.2, abs=1e-12)

    def test_motivated_compare_passes(self, tmp_path):
        code, report = run(MOTIVATED, tmp_path)
        assert code == 0
        assert report["results"]["passed"]
        assert report["results"]["distorted"]["w1"] == pytest.approx(2 / 3, abs=1e-9)

    def test_weighted_utility_value(self, tmp_path):
        scenario = {
            "kind": "weighted-utility",
            "parameters": {
                "outcomes": [0.0, 1.0],
                "probs": [0.5, 0.5],
                "psi": [1.0, 2.0],
                "u": [0.0, 1.0],
            },
        }
        code, report = run(scenario, tmp_path)
        assert code == 0
        assert report["results"]["value"] == pytest.approx(2 / 3, abs=1e-12)

    def test_dutch_book_scenario(self, tmp_path):
        scenario = {
            "kind": "dutch-book",
            "parameters": {
                "states": ["w1", "w2", "w3"],
                "distortion": {"kind": "additive-smoothing", "epsilon": 0.1},
                "belief": {"w1": 0.6, "w2": 0.2, "w3": 0.2},
                "event": ["w1", "w2"],
                "stake": 1.0,
            },
        }
        code, report = run(scenario, tmp_path)
        assert code == 0
        book = report["results"]["book"]
        assert book["win_state"] == "w1"
        assert book["value_condition_first"] == pytest.approx(0.0140845, abs=1e-6)
        assert book["value_distort_first"] == pytest.approx(-0.0140845, abs=1e-6)

    def test_dynamics_limit_scenario(self, tmp_path):
        scenario = {
            "kind": "dynamics",
            "parameters": {
                "states": ["a", "b"],
                "psi": [4.0, 1.0],
                "alpha": 0.5,
                "action": "limit",
                "belief": {"a": 0.35, "b": 0.65},
            },
        }
        code, report = run(scenario, tmp_path)
        assert code == 0
        assert report["results"]["kind"] == "support_rule"
        assert report["results"]["limit"]["a"] == pytest.approx(16 / 17, abs=1e-12)

    def test_gs_audit_scenarios(self, tmp_path):
        base = {
            "kind": "gs",
            "parameters": {
                "states": ["w1", "w2", "w3"],
                "signals": ["t1", "t2"],
                "action": "audit-marginality",
                "distortion": {"kind": "weighted", "psi": [2, 1, 1]},
                "trials": 50,
                "seed": 3,
            },
        }
        code, report = run(base, tmp_path)
        assert code == 0 and report["results"]["passed"]
        bad = copy.deepcopy(base)
        bad["parameters"]["distortion"] = {"kind": "power", "psi": [1, 1, 1], "alpha": 2.0}
        code, report = run(bad, tmp_path)
        assert code == 1 and not report["results"]["passed"]


class TestExitCodes:
    def test_audit_failure_exits_one_with_witness(self, tmp_path):
        code, report = run(AUDIT_SMOOTH, tmp_path)
        assert code == 1
        witness = report["results"]["witness"]
        assert set(witness["belief"]) == {"w1", "w2", "w3"}
        assert len(witness["event"]) >= 1

    def test_audit_pass_exits_zero(self, tmp_path):
        code, report = run(AUDIT_PW, tmp_path)
        assert code == 0
        assert report["results"]["max_deviation"] < 1e-10

    def test_kind_mismatch_is_input_error(self, tmp_path, capsys):
        code, _ = run(DISTORT, tmp_path, kind="condition", out=None)
        assert code == 2
        assert "kind" in capsys.readouterr().err

    def test_missing_file_is_input_error(self, tmp_path):
        assert main(["distort", "--scenario", str(tmp_path / "nope.json"), "--quiet"]) == 2

    def test_invalid_json_is_input_error(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text("{not json")
        assert main(["distort", "--scenario", str(path), "--quiet"]) == 2

    def test_missing_seed_is_input_error(self, tmp_path, capsys):
        scenario = copy.deepcopy(AUDIT_PW)
        del scenario["parameters"]["seed"]
        code, _ = run(scenario, tmp_path, out=None)
        assert code == 2
        assert "seed" in capsys.readouterr().err

    def test_seed_flag_fills_missing_seed(self, tmp_path):
        scenario = copy.deepcopy(AUDIT_PW)
        del scenario["parameters"]["seed"]
        code, _ = run(scenario, tmp_path, "--seed", "9")
        assert code == 0


class TestSchemaRejection:
    @pytest.mark.parametrize("field", ["states", "psi", "alpha", "belief"])
    def test_distort_required_fields(self, tmp_path, capsys, field):
        scenario = copy.deepcopy(DISTORT)
        del scenario["parameters"][field]
        code, _ = run(scenario, tmp_path, out=None)
        assert code == 2
        assert field in capsys.readouterr().err

    @pytest.mark.parametrize("field", ["states", "distortion", "trials", "seed"])
    def test_audit_required_fields(self, tmp_path, capsys, field):
        scenario = copy.deepcopy(AUDIT_PW)
        del scenario["parameters"][field]
        code, _ = run(scenario, tmp_path, out=None)
        assert code == 2
        assert field in capsys.readouterr().err

    @pytest.mark.parametrize(
        "field", ["states", "signals", "action", "f", "g", "prior", "experiment", "theta"]
    )
    def test_grether_required_fields(self, tmp_path, capsys, field):
        scenario = copy.deepcopy(GRETHER_UPDATE)
        del scenario["parameters"][field]
        code, _ = run(scenario, tmp_path, out=None)
        assert code == 2
        assert field in capsys.readouterr().err

    @pytest.mark.parametrize("field", ["states", "utilities", "K", "Lambda", "prior"])
    def test_motivated_required_fields(self, tmp_path, capsys, field):
        scenario = copy.deepcopy(MOTIVATED)
        del scenario["parameters"][field]
        code, _ = run(scenario, tmp_path, out=None)
        assert code == 2
        assert field in capsys.readouterr().err

    @pytest.mark.parametrize("field", ["psi", "alphas", "grid"])
    def test_curve_required_fields(self, tmp_path, capsys, field):
        scenario = copy.deepcopy(CURVE)
        del scenario["parameters"][field]
        code, _ = run(scenario, tmp_path, out="curve.csv")
        assert code == 2
        assert field in capsys.readouterr().err

    def test_bad_belief_sum_names_field(self, tmp_path, capsys):
        scenario = copy.deepcopy(DISTORT)
        scenario["parameters"]["belief"] = {"w1": 0.9, "w2": 0.3, "w3": 0.25}
        code, _ = run(scenario, tmp_path, out=None)
        assert code == 2
        assert "belief" in capsys.readouterr().err

    OTHER_KINDS = {
        "condition": (
            {
                "kind": "condition",
                "parameters": {
                    "states": ["a", "b"],
                    "belief": {"a": 0.5, "b": 0.5},
                    "event": ["a"],
                },
            },
            ["states", "belief", "event"],
        ),
        "identify": (
            {
                "kind": "identify",
                "parameters": {
                    "states": ["a", "b"],
                    "distortion": {"kind": "identity"},
                },
            },
            ["states", "distortion"],
        ),
        "dutch-book": (
            {
                "kind": "dutch-book",
                "parameters": {
                    "states": ["a", "b", "c"],
                    "distortion": {"kind": "additive-smoothing", "epsilon": 0.1},
                    "belief": {"a": 0.6, "b": 0.2, "c": 0.2},
                    "event": ["a", "b"],
                    "stake": 1.0,
                },
            },
            ["states", "distortion", "belief", "event", "stake"],
        ),
        "dynamic-consistency": (
            {
                "kind": "dynamic-consistency",
                "parameters": {
                    "states": ["a", "b", "c"],
                    "distortion": {"kind": "identity"},
                    "trials": 20,
                    "seed": 1,
                },
            },
            ["states", "distortion", "trials", "seed"],
        ),
        "weighted-utility": (
            {
                "kind": "weighted-utility",
                "parameters": {
                    "outcomes": [0.0, 1.0],
                    "probs": [0.5, 0.5],
                    "psi": [1.0, 2.0],
                    "u": [0.0, 1.0],
                },
            },
            ["outcomes", "probs", "psi", "u"],
        ),
        "gs": (
            {
                "kind": "gs",
                "parameters": {
                    "states": ["a", "b", "c"],
                    "signals": ["t1", "t2"],
                    "action": "audit-marginality",
                    "distortion": {"kind": "weighted", "psi": [1, 1, 1]},
                    "trials": 10,
                    "seed": 1,
                },
            },
            ["states", "signals", "action", "distortion", "trials", "seed"],
        ),
        "dynamics": (
            {
                "kind": "dynamics",
                "parameters": {
                    "states": ["a", "b"],
                    "psi": [4, 1],
                    "alpha": 0.5,
                    "action": "limit",
                    "belief": {"a": 0.5, "b": 0.5},
                },
            },
            ["states", "psi", "alpha", "action", "belief"],
        ),
    }

    @pytest.mark.parametrize(
        "kind,field",
        [(k, f) for k, (_, fields) in sorted(OTHER_KINDS.items()) for f in fields],
    )
    def test_remaining_kinds_required_fields(self, tmp_path, capsys, kind, field):
        template, _ = self.OTHER_KINDS[kind]
        scenario = copy.deepcopy(template)
        del scenario["parameters"][field]
        code, _ = run(scenario, tmp_path, out=None)
        assert code == 2
        assert field in capsys.readouterr().err

    @pytest.mark.parametrize("kind", sorted(OTHER_KINDS))
    def test_remaining_kind_templates_run_clean(self, tmp_path, kind):
        template, _ = self.OTHER_KINDS[kind]
        code, _ = run(copy.deepcopy(template), tmp_path)
        assert code == 0


class TestOverrides:
    def test_trials_and_tol_flags_override_scenario(self, tmp_path):
        code, report = run(AUDIT_PW, tmp_path, "--trials", "17", "--tol", "1e-6")
        assert code == 0
        assert report["provenance"]["trials"] == 17
        assert report["results"]["tol"] == pytest.approx(1e-6)


class TestDeterminism:
    def test_results_section_is_byte_identical(self, tmp_path):
        _, first = run(AUDIT_SMOOTH, tmp_path, out="a.json")
        _, second = run(AUDIT_SMOOTH, tmp_path, out="b.json")
        a = json.dumps(first["results"], sort_keys=True)
        b = json.dumps(second["results"], sort_keys=True)
        assert a == b

    def test_different_seed_changes_witness(self, tmp_path):
        _, first = run(AUDIT_SMOOTH, tmp_path, out="a.json")
        reseeded = copy.deepcopy(AUDIT_SMOOTH)
        reseeded["parameters"]["seed"] = 6
        _, second = run(reseeded, tmp_path, out="b.json")
        assert first["results"]["witness"] != second["results"]["witness"]


class TestCurve:
    def _rows(self, tmp_path, scenario=CURVE):
        code, _ = run(scenario, tmp_path, out="curve.csv")
        assert code == 0
        lines = (tmp_path / "curve.csv").read_text().strip().splitlines()
        assert lines[0] == "p,alpha,phi_p"
        rows = [tuple(float(v) for v in line.split(",")) for line in lines[1:]]
        return rows

    def test_curves_monotone_increasing(self, tmp_path):
        scenario = {
            "kind": "curve",
            "parameters": {"psi": [2.5, 1.0], "alphas": [0.5, 1.0, 2.0, 4.0], "grid": 60},
        }
        rows = self._rows(tmp_path, scenario)
        for alpha in {r[1] for r in rows}:
            ys = [r[2] for r in rows if r[1] == alpha]
            assert all(b > a for a, b in zip(ys, ys[1:]))

    def test_equal_weights_cross_diagonal_at_half(self, tmp_path):
        rows = self._rows(tmp_path)
        at_half = [r for r in rows if r[0] == 0.5]
        assert len(at_half) == 2
        for _, _, phi in at_half:
            assert phi == pytest.approx(0.5, abs=1e-9)

    def test_s_shape_above_and_below_diagonal(self, tmp_path):
        rows = self._rows(tmp_path)
        for p, alpha, phi in rows:
            if p == 0.5:
                continue
            below = phi < p
            if alpha == 2.0:
                assert below == (p < 0.5)
            else:
                assert below == (p > 0.5)
