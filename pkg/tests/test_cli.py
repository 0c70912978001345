import json

import pytest
from click.testing import CliRunner

from conftest import manifest_path, z
from modules.cli import tasks
from modules.cli.commands import EXIT_INTERNAL, EXIT_INVALID, cli, render_report
from modules.cli.manifest import parse_manifest, serialize_manifest
from modules.cli.tasks import COMMANDS, _parse_settings, form_pool, run
from modules.mc_deform.deform import t1_basis
from modules.polycalc.grammar import PolyParseError
from modules.settings import DEFAULT_SETTINGS
from modules.tot_cech.linalg import InvariantViolation


def _load(name):
    with open(manifest_path(name), encoding="utf-8") as fh:
        return parse_manifest(fh.read())


def test_reversed_component_flips_sign():
    m = _load("so3")
    assert m.setup.pi.coeff(1, 3) == z(3, 2)
    assert m.setup.pi.coeff(3, 1) == -z(3, 2)


@pytest.mark.parametrize("text", [
    '{"n": 2, "poisson": [{"indices": [2, 2], "coeff": "1"}]}',
    '{"n": 2, "poisson": [{"indices": [1], "coeff": "1"}]}',
    '{"n": 2, "poisson": [{"indices": [1, 2], "coeff": "1"}, {"indices": [2, 1], "coeff": "z1"}]}',
    '{"n": 2, "codim": 3}',
    '{"n": 2, "frobnicate": 1}',
    '{"n": 0}',
    '{"codim": 1}',
    '{"n": 2, "order": "three"}',
    '{"n": 2, "carrier": "spinor"}',
    '[1, 2]',
])
def test_invalid_manifests(text):
    with pytest.raises(ValueError):
        parse_manifest(text)


def test_grammar_errors_inside_manifest():
    with pytest.raises(PolyParseError):
        parse_manifest('{"n": 2, "poisson": [{"indices": [1, 2], "coeff": "2z1"}]}')


def test_grammar_error_location_is_not_repeated():
    with pytest.raises(PolyParseError) as err:
        parse_manifest('{"n": 2, "poisson": [{"indices": [1, 2], "coeff": "2z1"}]}')
    message = str(err.value)
    assert message.startswith("poisson: ")
    assert message.count("(line ") == 1


def test_json_syntax_error_is_located():
    with pytest.raises(PolyParseError) as err:
        parse_manifest('{"n": 3,\n "codim": }')
    assert err.value.line == 2


def test_manifest_round_trip():
    for name in ("so3", "symplectic_c4", "hypersurface", "obstructed_point"):
        m = _load(name)
        assert parse_manifest(serialize_manifest(m)) == m


def test_empty_bivector_is_allowed():
    m = parse_manifest('{"n": 2}')
    assert m.setup.pi.is_zero()


def test_settings_are_bounded_not_clamped():
    with pytest.raises(ValueError):
        _parse_settings({"order": 99})
    with pytest.raises(ValueError):
        _parse_settings({"arity": 0})
    with pytest.raises(ValueError):
        _parse_settings({"cap": True})
    s = _parse_settings({"order": 5, "degree": None})
    assert s["order"] == 5
    assert "degree" not in s
    assert s["arity"] == DEFAULT_SETTINGS["arity"]


def test_unbounded_commands_need_explicit_caps():
    m = parse_manifest('{"n": 2, "codim": 1}')
    for command in ("t1", "obstructions"):
        with pytest.raises(ValueError, match="degree"):
            run(command, m)
    with pytest.raises(ValueError, match="order"):
        run("mc-extend", _load("so3"))
    assert run("t1", m, {"degree": 0})["results"]["dimension"] == 1


def test_cli_rejects_missing_and_out_of_range_caps():
    result = CliRunner().invoke(cli, ["mc-extend", "--manifest", manifest_path("so3")])
    assert result.exit_code == EXIT_INVALID
    result = CliRunner().invoke(cli, ["mc-extend", "--manifest", manifest_path("obstructed_point"), "--order", "99"])
    assert result.exit_code == EXIT_INVALID


TRUNCATED = json.dumps({
    "n": 4, "codim": 2, "degree": 2, "cap": 2,
    "poisson": [{"indices": [1, 3], "coeff": "1 + z1"}, {"indices": [2, 4], "coeff": "1"}],
})


def test_non_homogeneous_slices_are_flagged():
    m = parse_manifest(TRUNCATED)
    results = run("t1", m)["results"]
    assert results["truncated"] is True
    assert results["cap"] == 2
    assert list(results["slices"]) == ["0..2"]
    assert results["dimension"] == len(t1_basis(m.setup, 0, 2))
    results = run("obstructions", m)["results"]
    assert results["truncated"] is True
    assert list(results["slices"]) == ["0..2"]


def test_non_homogeneous_slices_need_a_cap():
    doc = json.loads(TRUNCATED)
    del doc["cap"]
    with pytest.raises(ValueError):
        run("t1", parse_manifest(json.dumps(doc)))


def test_homogeneous_slices_are_not_truncated():
    results = run("t1", _load("symplectic_c4"))["results"]
    assert results["truncated"] is False
    assert results["cap"] is None


def test_form_pool_is_seeded(so3):
    assert form_pool(so3, 5, 7) == form_pool(so3, 5, 7)
    assert len(form_pool(so3, 500, 0)) == 3 + 3 + 9 + 3


def test_check_poisson_report():
    report = run("check-poisson", _load("so3"))
    assert report["command"] == "check-poisson"
    assert report["results"] == {"result": True}
    assert report["provenance"]["library"] == "coisocalc"
    assert report["provenance"]["bounds"]["degree"] == 1


def test_check_coisotropic_report():
    results = run("check-coisotropic", _load("symplectic_c4"))["results"]
    assert results["result"] is True
    assert set(results["characterizations"].values()) == {True}


def test_t1_report():
    m = _load("symplectic_c4")
    assert run("t1", m, {"degree": 0})["results"]["dimension"] == 2
    results = run("t1", m)["results"]
    assert results["slices"] == {"0": 2, "1": 3, "2": 4}
    assert results["dimension"] == 9


def test_obstructions_report():
    assert run("obstructions", _load("symplectic_c4"))["results"]["dimension"] == 0
    assert run("obstructions", _load("obstructed_point"))["results"]["dimension"] == 1


def test_mc_extend_reports():
    results = run("mc-extend", _load("obstructed_point"))["results"]
    assert results["status"] == "obstructed"
    assert results["reached_order"] == 2
    assert len(results["steps"]) == 1

    results = run("mc-extend", _load("symplectic_c4"))["results"]
    assert results["status"] == "extended"
    assert results["reached_order"] == 5
    assert len(results["steps"]) == 3


def test_lp_differential_report():
    results = run("lp-differential", _load("hypersurface"))["results"]["results"]
    assert len(results) == 1
    assert results[0]["squares_to_zero"] is True


def test_commands_needing_missing_inputs():
    with pytest.raises(ValueError):
        run("lp-differential", _load("so3"))
    with pytest.raises(ValueError):
        run("derived-brackets", _load("so3"))
    with pytest.raises(ValueError):
        run("no-such-command", _load("so3"))


def test_fixture_commands():
    m = parse_manifest('{"fixture": "sl2_eps", "arity": 4}')
    assert run("derived-brackets", m)["results"]["brackets"] == {"2,2": {"5": "-2"}}
    assert run("linf-verify", m)["results"]["linf_relations"] is True
    m = parse_manifest('{"fixture": "disk_three_open"}')
    assert run("tot-verify", m)["results"]["matches_expected"] is True


def test_reports_are_deterministic():
    m = _load("so3")
    assert render_report(run("anchor", m)) == render_report(run("anchor", m))


def test_every_command_is_registered():
    assert sorted(cli.commands) == sorted(COMMANDS)


def test_cli_writes_report(tmp_path):
    out = tmp_path / "report.json"
    result = CliRunner().invoke(cli, ["check-poisson", "--manifest", manifest_path("so3"), "--out", str(out)])
    assert result.exit_code == 0
    report = json.loads(out.read_text(encoding="utf-8"))
    assert report["results"]["result"] is True


def test_cli_overrides(tmp_path):
    out = tmp_path / "t1.json"
    args = ["t1", "--manifest", manifest_path("symplectic_c4"), "--degree", "0", "--out", str(out)]
    result = CliRunner().invoke(cli, args)
    assert result.exit_code == 0
    assert json.loads(out.read_text(encoding="utf-8"))["results"]["dimension"] == 2


def test_cli_invalid_manifest(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"n": 2, "poisson": [{"indices": [1, 1], "coeff": "1"}]}', encoding="utf-8")
    result = CliRunner().invoke(cli, ["check-poisson", "--manifest", str(bad)])
    assert result.exit_code == EXIT_INVALID


def test_cli_missing_manifest(tmp_path):
    result = CliRunner().invoke(cli, ["check-poisson", "--manifest", str(tmp_path / "absent.json")])
    assert result.exit_code == EXIT_INVALID


def test_cli_invariant_violation(monkeypatch):
    def broken(manifest, settings):
        raise InvariantViolation("d² ≠ 0")

    monkeypatch.setitem(tasks.COMMANDS, "check-poisson", broken)
    result = CliRunner().invoke(cli, ["check-poisson", "--manifest", manifest_path("so3")])
    assert result.exit_code == EXIT_INTERNAL
