"""Wire protocol: framing, id echo, schema, and degenerate inputs."""

from __future__ import annotations

import json

from render_harness.classify import ERROR_CLASSES, TAXONOMY_VERSION, classify_failure

RESPONSE_KEYS = {"id", "status", "error_class", "stderr_tail", "image_path", "wall_ms"}


def test_taxonomy_matches_wire_contract() -> None:
    assert TAXONOMY_VERSION == 1
    assert ERROR_CLASSES == (
        "none",
        "syntax",
        "missing_symbol",
        "data_shape",
        "timeout",
        "sandbox_violation",
        "empty_image",
        "other",
    )


def test_classify_defaults_to_other() -> None:
    assert classify_failure("something entirely novel") == "other"
    assert classify_failure("") == "other"


def test_response_schema_and_id_echo(worker) -> None:
    resp = worker.request("pass", request_id="abc-123", zzz="ignored-field")
    assert set(resp) == RESPONSE_KEYS
    assert resp["id"] == "abc-123"
    assert resp["status"] == "error"  # ran fine but produced no image
    assert resp["error_class"] == "empty_image"
    assert resp["image_path"] is None
    assert isinstance(resp["wall_ms"], int)


def test_malformed_line_gets_error_response(worker) -> None:
    worker.send_raw("this is not json\n")
    resp = worker.read_response()
    assert resp["id"] is None
    assert resp["status"] == "error"
    assert resp["error_class"] == "other"
    assert "unparsable" in resp["stderr_tail"]


def test_non_object_json_is_protocol_error(worker) -> None:
    worker.send_raw(json.dumps([1, 2, 3]) + "\n")
    resp = worker.read_response()
    assert resp["id"] is None
    assert resp["error_class"] == "other"


def test_request_without_code(worker) -> None:
    resp = worker.request(None, request_id="nocode")
    assert resp["id"] == "nocode"
    assert resp["status"] == "error"
    assert resp["error_class"] == "other"
    assert "code" in resp["stderr_tail"]


def test_request_without_out_path(worker) -> None:
    resp = worker.request("pass", request_id="noout", out_path=None)
    assert resp["id"] == "noout"
    assert resp["error_class"] == "other"
    assert "out_path" in resp["stderr_tail"]


def test_blank_lines_are_skipped(worker) -> None:
    worker.send_raw("\n\n")
    resp = worker.request("raise SystemExit(4)", request_id="after-blank")
    assert resp["id"] == "after-blank"


def test_responses_arrive_in_request_order(worker) -> None:
    ids = [f"seq-{i}" for i in range(5)]
    for rid in ids:  # pipelined: all requests written before any read
        worker.send_raw(
            json.dumps(
                {"id": rid, "code": "raise SystemExit(2)", "out_path": "x.jpg"}
            )
            + "\n"
        )
    got = [worker.read_response()["id"] for _ in ids]
    assert got == ids
