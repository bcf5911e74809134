import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from geozones.errors import SchemaError, StorageError
from geozones.geo import GeoPoint
from geozones.ingest import PhotoRecord, RawTweet
from geozones.store import DocumentStore, photo_body, tweet_body

VALID_PHOTO = {"geo": {"latitude": 6.24, "longitude": -75.58, "accuracy": 6}, "name": "parque"}
VALID_TWEET = {
    "coordinates": {"coordinates": {"latitude": 6.24, "longitude": -75.58}, "type": "Point"},
    "source": "app",
    "text": "hola",
}
UNTAGGED_TWEET = {"coordinates": None, "source": "app", "text": "sin posición"}


class TestPut:
    def test_photo_round_trip(self, tmp_path):
        with DocumentStore(tmp_path) as store:
            doc_id = store.put("photo", VALID_PHOTO)
            assert store.get("photo", doc_id).body == VALID_PHOTO

    def test_missing_nested_field_names_path(self, tmp_path):
        body = {"geo": {"latitude": 6.24, "accuracy": 6}, "name": "x"}
        with DocumentStore(tmp_path) as store:
            with pytest.raises(SchemaError) as excinfo:
                store.put("photo", body)
        assert excinfo.value.path == "photo.geo.longitude"

    def test_identical_bodies_get_distinct_ids(self, tmp_path):
        with DocumentStore(tmp_path) as store:
            first = store.put("tweet", VALID_TWEET)
            second = store.put("tweet", VALID_TWEET)
        assert first != second

    def test_out_of_range_latitude_rejected(self, tmp_path):
        body = {"geo": {"latitude": 95.0, "longitude": 0.0, "accuracy": 6}, "name": "x"}
        with DocumentStore(tmp_path) as store:
            with pytest.raises(SchemaError):
                store.put("photo", body)

    def test_tweet_without_coordinates_is_valid(self, tmp_path):
        with DocumentStore(tmp_path) as store:
            store.put("tweet", UNTAGGED_TWEET)
            assert store.stats().tweet_count == 1

    def test_nothing_persisted_on_validation_failure(self, tmp_path):
        with DocumentStore(tmp_path) as store:
            with pytest.raises(SchemaError):
                store.put("tweet", {"source": "app"})
            assert store.stats().tweet_count == 0

    def test_durability_across_reopen(self, tmp_path):
        with DocumentStore(tmp_path) as store:
            doc_id = store.put("photo", VALID_PHOTO)
        with DocumentStore(tmp_path) as store:
            assert store.get("photo", doc_id).body == VALID_PHOTO
            assert store.put("photo", VALID_PHOTO) == doc_id + 1


class TestScan:
    def test_insertion_order(self, tmp_path):
        bodies = [dict(VALID_TWEET, text=f"t{i}") for i in range(3)]
        with DocumentStore(tmp_path) as store:
            for body in bodies:
                store.put("tweet", body)
            scanned = list(store.scan("tweet"))
        assert [d.body["text"] for d in scanned] == ["t0", "t1", "t2"]
        assert [d.doc_id for d in scanned] == [0, 1, 2]

    def test_geo_only_filter(self, tmp_path):
        with DocumentStore(tmp_path) as store:
            store.put("tweet", VALID_TWEET)
            store.put("tweet", UNTAGGED_TWEET)
            store.put("tweet", VALID_TWEET)
            assert len(list(store.scan("tweet", geo_only=True))) == 2
            assert len(list(store.scan("tweet"))) == 3

    def test_empty_store(self, tmp_path):
        with DocumentStore(tmp_path) as store:
            assert list(store.scan("tweet")) == []
            assert list(store.scan("photo")) == []

    def test_corrupt_line_detected(self, tmp_path):
        with DocumentStore(tmp_path) as store:
            store.put("tweet", VALID_TWEET)
        path = tmp_path / "tweet.jsonl"
        line = json.loads(path.read_text(encoding="utf-8"))
        line["body"]["text"] = "tampered beyond the declared length"
        path.write_text(json.dumps(line) + "\n", encoding="utf-8")
        with DocumentStore(tmp_path) as store:
            with pytest.raises(StorageError):
                list(store.scan("tweet"))


class TestStats:
    def test_fresh_store(self, tmp_path):
        with DocumentStore(tmp_path) as store:
            stats = store.stats()
        assert (stats.tweet_count, stats.photo_count) == (0, 0)

    def test_counts_after_puts(self, tmp_path):
        with DocumentStore(tmp_path) as store:
            for _ in range(5):
                store.put("tweet", VALID_TWEET)
            assert store.stats().tweet_count == 5
            assert store.stats().photo_count == 0

    @settings(max_examples=25, deadline=None)
    @given(workload=st.lists(st.sampled_from(["tweet", "photo"]), max_size=12))
    def test_counts_equal_scan_lengths(self, tmp_path_factory, workload):
        directory = tmp_path_factory.mktemp("store")
        with DocumentStore(directory) as store:
            for collection in workload:
                store.put(collection, VALID_TWEET if collection == "tweet" else VALID_PHOTO)
            stats = store.stats()
            assert stats.tweet_count == len(list(store.scan("tweet")))
            assert stats.photo_count == len(list(store.scan("photo")))


class TestLocking:
    def test_second_writer_rejected(self, tmp_path):
        with DocumentStore(tmp_path):
            with pytest.raises(StorageError):
                DocumentStore(tmp_path)

    def test_reader_allowed_alongside_writer(self, tmp_path):
        with DocumentStore(tmp_path) as writer:
            writer.put("tweet", VALID_TWEET)
            reader = DocumentStore(tmp_path, read_only=True)
            assert len(list(reader.scan("tweet"))) == 1

    def test_read_only_store_rejects_put(self, tmp_path):
        DocumentStore(tmp_path).close()
        reader = DocumentStore(tmp_path, read_only=True)
        with pytest.raises(StorageError):
            reader.put("tweet", VALID_TWEET)

    def test_lock_released_on_close(self, tmp_path):
        DocumentStore(tmp_path).close()
        DocumentStore(tmp_path).close()


class TestBodyBuilders:
    def test_tweet_body_shape(self):
        raw = RawTweet(coordinates=GeoPoint(6.24, -75.58), source="app", text="hola")
        assert tweet_body(raw) == VALID_TWEET | {"source": "app", "text": "hola"}

    def test_untagged_tweet_body(self):
        raw = RawTweet(coordinates=None, source="app", text="x")
        assert tweet_body(raw)["coordinates"] is None

    def test_photo_body_shape(self):
        record = PhotoRecord(photo_id="1", name="parque", location=GeoPoint(6.24, -75.58), accuracy=6)
        assert photo_body(record) == VALID_PHOTO
