"""
Catalog service tests on the in-memory SQLite catalog.
"""

import pytest

from services.catalog_service import KINDS, canonical_json, content_hash, split_status


@pytest.mark.database
class TestContentHash:
    """Canonical JSON and hashing"""

    def test_key_order_does_not_matter(self):
        """Dictionaries with the same items hash the same."""
        assert content_hash({"q": 4, "k": 2}) == content_hash({"k": 2, "q": 4})

    def test_canonical_form(self):
        """Sorted keys, no whitespace."""
        assert canonical_json({"b": [1, 2], "a": 0}) == '{"a":0,"b":[1,2]}'


@pytest.mark.database
class TestCatalogService:
    """Recording, lookup and counts"""

    def test_record_is_idempotent(self, catalog_service):
        """Recording the same payload twice stores it once."""
        payload = {"q": 4, "n": 16, "k": 4}
        digest, added = catalog_service.record("code", payload)
        again, added_again = catalog_service.record("code", {"k": 4, "n": 16, "q": 4})
        assert added and not added_again
        assert digest == again
        assert catalog_service.count()["code"] == 1

    def test_get(self, catalog_service):
        """Stored payloads come back as parsed JSON."""
        digest, _ = catalog_service.record("eaqecc", {"key": [16, 9, 5, 1]})
        assert catalog_service.get(digest) == {"key": [16, 9, 5, 1]}
        assert catalog_service.get("0" * 64) is None

    def test_unknown_kind(self, catalog_service):
        """Only the known kinds are accepted."""
        with pytest.raises(ValueError):
            catalog_service.record("table", {})

    def test_record_many_skips_duplicates(self, catalog_service):
        """Duplicates inside a batch and already-stored payloads are skipped."""
        catalog_service.record("eaqecc", {"key": [1]})
        added = catalog_service.record_many("eaqecc", [{"key": [1]}, {"key": [2]}, {"key": [2]}, {"key": [3]}])
        assert added == 2
        assert catalog_service.count()["eaqecc"] == 3

    def test_count_lists_every_kind(self, catalog_service):
        """Kinds with no entries count as zero."""
        catalog_service.record("outcome", {"rule": "reduce"})
        counts = catalog_service.count()
        assert set(counts) == set(KINDS)
        assert counts == {"code": 0, "outcome": 1, "eaqecc": 0}

    def test_list_entries(self, catalog_service):
        """Entries filter by kind and respect the limit."""
        catalog_service.record_many("eaqecc", [{"key": [i]} for i in range(5)])
        catalog_service.record("code", {"q": 3})
        assert len(catalog_service.list_entries()) == 6
        codes = catalog_service.list_entries(kind="code")
        assert [entry["payload"] for entry in codes] == [{"q": 3}]
        assert len(catalog_service.list_entries(kind="eaqecc", limit=2)) == 2


@pytest.mark.database
class TestWitnessStatus:
    """The witness flag is stored beside the entry, not hashed into it"""

    ROW = {"q": 4, "family": 1, "h": "", "n": 16, "k_logical": 9, "d": 5, "c": 1, "mds": "eq1", "shape_id": 1}

    def test_status_is_outside_the_hash(self):
        """A row hashes the same whatever its witness flag says."""
        identity, witnessed = split_status({**self.ROW, "witnessed": "true"})
        assert identity == self.ROW and witnessed is True
        assert split_status({"q": 3}) == ({"q": 3}, None)

    def test_later_witness_updates_the_entry(self, catalog_service):
        """false then true gives one entry that ends up witnessed."""
        digest, added = catalog_service.record("eaqecc", {**self.ROW, "witnessed": "false"})
        assert added and catalog_service.is_witnessed(digest) is False
        again, added_again = catalog_service.record("eaqecc", {**self.ROW, "witnessed": "true"})
        assert again == digest and not added_again
        assert catalog_service.count()["eaqecc"] == 1
        assert catalog_service.is_witnessed(digest) is True
        assert catalog_service.get(digest) == self.ROW

    def test_unwitnessed_run_keeps_the_status(self, catalog_service):
        """A later run without witnessing does not clear the flag."""
        catalog_service.record_many("eaqecc", [{**self.ROW, "witnessed": "true"}])
        added = catalog_service.record_many("eaqecc", [{**self.ROW, "witnessed": "false"}])
        assert added == 0
        [entry] = catalog_service.list_entries(kind="eaqecc")
        assert entry["witnessed"] is True
        assert "witnessed" not in entry["payload"]

    def test_batch_promotes_a_pending_entry(self, catalog_service):
        """Within one batch the witnessed copy wins."""
        added = catalog_service.record_many(
            "eaqecc", [{**self.ROW, "witnessed": "false"}, {**self.ROW, "witnessed": "true"}]
        )
        assert added == 1
        assert catalog_service.is_witnessed(content_hash(self.ROW)) is True

    def test_entries_without_status(self, catalog_service):
        """Codes and outcomes carry no witness flag."""
        digest, _ = catalog_service.record("code", {"q": 3})
        assert catalog_service.is_witnessed(digest) is None
        assert "witnessed" not in catalog_service.list_entries(kind="code")[0]
