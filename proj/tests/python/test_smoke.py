import json
import os
from pathlib import Path

import pytest

import fedplan

FIXTURES = Path(os.environ.get("FEDPLAN_FIXTURES_DIR", Path(__file__).resolve().parents[1] / "fixtures"))
NET = FIXTURES / "nets" / "fig1.json"


def host(name):
    return str(FIXTURES / name / "host" / "federation.json")


def test_semver():
    r = fedplan.parse_range("^1.2.3")
    assert str(r) == ">=1.2.3 <2.0.0"
    assert fedplan.satisfies(r, fedplan.parse_version("1.9.0"))
    assert fedplan.parse_version("1.2.3") in r
    assert fedplan.intersect(r, fedplan.parse_range("^2.0.0")).empty
    best = fedplan.highest_satisfying(
        fedplan.parse_range("^18.0.0"), [fedplan.Version(18, 0, 0), fedplan.Version(18, 2, 0), fedplan.Version(19, 0, 0)]
    )
    assert best == fedplan.Version(18, 2, 0)


def test_errors_carry_codes():
    with pytest.raises(fedplan.FedError) as info:
        fedplan.parse_version("1.2")
    assert info.value.code == "E-BAD-VERSION"


def test_is_subtype():
    wide = {"kind": "record", "fields": {"a": {"type": {"kind": "string"}}, "b": {"type": {"kind": "number"}}}}
    narrow = {"kind": "record", "fields": {"a": {"type": {"kind": "string"}}}}
    assert fedplan.is_subtype(wide, narrow)
    assert not fedplan.is_subtype(narrow, wide)


def test_fig1_workspace():
    fed = fedplan.Federation(host("fig1"))
    assert fed.applications == ["host", "remote"]
    assert fed.diagnostics == []
    assert fed.waterfall_depth() == 3
    graph = fed.graph()
    assert len(graph["nodes"]) == 3
    lazy = fed.plan("lazy")
    assert lazy["longestChain"] == 3
    report = fed.simulate("lazy", str(NET))
    assert report["timeToInteractiveMs"] == 600.0
    net = json.loads(NET.read_text())
    reports = fed.compare(net)
    assert [r["strategy"] for r in reports] == list(fedplan.STRATEGIES)
    assert reports[1]["timeToInteractiveMs"] <= reports[0]["timeToInteractiveMs"]
    spans = fed.trace("lazy", net)
    assert len(spans) == 1 + 2 * report["requestCount"]
    assert 'style=dashed' in fed.dot()


def test_resolution_and_types():
    fed = fedplan.Federation(host("strict-conflict"))
    res = fed.resolve_shares()
    assert res["conflicts"][0]["code"] == "E-STRICT-SINGLETON"
    mismatch = fedplan.Federation(host("type-mismatch"))
    codes = [d["code"] for d in mismatch.check_types()]
    assert codes == ["E-TYPE-MISMATCH", "E-MISSING-EXPORT", "E-NO-INTERFACE"]


def test_invalid_workspace_reports_diagnostics():
    fed = fedplan.Federation(host("invalid"))
    assert any(d["code"] == "E-DANGLING-EXPOSE" for d in fed.diagnostics)
    with pytest.raises(fedplan.FedError):
        fed.graph()
