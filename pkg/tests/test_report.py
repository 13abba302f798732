import json

import numpy as np
import pytest
import yaml

from RHSActions import __version__
from RHSActions.report import SCHEMA_VERSION, ReportDocument, canonical_json, json_line, plain


def test_plain_reduces_numpy_and_containers():
    data = {1: np.int64(3), "flags": (np.bool_(True), False), "set": {3, 1, 2}, "table": np.arange(3)}
    assert plain(data) == {"1": 3, "flags": [True, False], "set": [1, 2, 3], "table": [0, 1, 2]}


def test_plain_rejects_other_values():
    with pytest.raises(TypeError):
        plain({"x": 1.5})


def test_canonical_json_is_sorted_and_ascii():
    text = canonical_json({"b": 1, "a": ["é"]})
    assert text == '{\n  "a": [\n    "\\u00e9"\n  ],\n  "b": 1\n}\n'
    assert json.loads(text) == {"a": ["é"], "b": 1}


def test_json_line_is_compact():
    assert json_line({"spec": "C(1)", "order": 1}) == '{"order":1,"spec":"C(1)"}'


def test_deterministic_document_has_no_timestamp():
    document = ReportDocument.create("period", "Q(8)", "Q(8)", {"period": 4}, deterministic=True)
    data = document.to_dict()
    assert data["timestamp"] is None
    assert data["schema_version"] == SCHEMA_VERSION
    assert data["tool_version"] == __version__
    assert data["normalized_spec"] == "Q(8)"
    assert data["errors"] == {}
    assert document.to_json() == ReportDocument.create("period", "Q(8)", "Q(8)", {"period": 4}, deterministic=True).to_json()


def test_timestamped_document():
    document = ReportDocument.create("period", "Q(8)", "Q(8)", {"period": 4})
    assert document.timestamp.endswith("+00:00")


def test_text_rendering_holds_the_same_content():
    document = ReportDocument.create("h2", "C(4)", "C(4)", {"invariant_factors": [2]}, {"x": {"tag": "t"}}, True)
    assert yaml.safe_load(document.to_text()) == json.loads(document.to_json())
