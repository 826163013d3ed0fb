import pytest

from camlens.store import CaptureStore, UnknownCaptureError


def add_capture(store, label="thing", prob=0.9):
    return store.add(
        image_bytes=b"P6\n1 1\n255\n\x00\x00\x00",
        image_ext="ppm",
        grid_h=2,
        grid_w=2,
        predictions=[{"index": 0, "label": label, "probability": prob}],
        cam_grids=[[[0.0, 1.0], [0.5, 0.25]]],
    )


def test_empty_store(tmp_path):
    store = CaptureStore(tmp_path)
    assert store.list() == []
    assert len(store) == 0


def test_add_and_get(tmp_path):
    store = CaptureStore(tmp_path)
    rec = add_capture(store)
    assert store.get(rec.id).predictions[0]["label"] == "thing"
    assert store.image_path(rec.id).read_bytes().startswith(b"P6")


def test_tag_and_filter(tmp_path):
    store = CaptureStore(tmp_path)
    recs = [add_capture(store) for _ in range(3)]
    store.tag(recs[1].id, "funny", "chair -> plunger")
    funny = store.list(tag="funny")
    assert [r.id for r in funny] == [recs[1].id]
    assert funny[0].note == "chair -> plunger"


def test_unknown_id_and_tag(tmp_path):
    store = CaptureStore(tmp_path)
    with pytest.raises(UnknownCaptureError):
        store.tag("cap-999999", "funny")
    rec = add_capture(store)
    with pytest.raises(ValueError):
        store.tag(rec.id, "hilarious")


def test_newest_first_ordering(tmp_path):
    store = CaptureStore(tmp_path)
    ids = [add_capture(store).id for _ in range(4)]
    listed = [r.id for r in store.list()]
    assert listed == list(reversed(ids))


def test_replay_round_trip(tmp_path):
    store = CaptureStore(tmp_path)
    a = add_capture(store, "first")
    b = add_capture(store, "second")
    store.tag(a.id, "impressive", "wow")
    del store

    again = CaptureStore(tmp_path)
    assert len(again) == 2
    assert again.get(a.id).tag == "impressive"
    assert again.get(a.id).note == "wow"
    assert again.get(b.id).tag == "none"
    assert [r.id for r in again.list()] == [b.id, a.id]
    # ids keep growing after a restart
    c = add_capture(again, "third")
    assert c.id > b.id
