"""
Catalog service for handling the content-addressed results store
"""
import hashlib
import json
import logging
from typing import Any, Iterable, Optional

from sqlalchemy.orm import Session
from sqlmodel import func, select

from dependencies.config import Settings
from models import CatalogEntry

logger = logging.getLogger(__name__)

KINDS = ("code", "outcome", "eaqecc")

# Status keys that change between runs; they live in their own column, outside the hash
STATUS_KEYS = ("witnessed",)


def canonical_json(payload: Any) -> str:
    """Sorted keys, no whitespace, integers only for field elements"""
    return json.dumps(payload, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def content_hash(payload: Any) -> str:
    return hashlib.sha256(canonical_json(payload).encode("utf-8")).hexdigest()


def split_status(payload: Any) -> tuple[Any, Optional[bool]]:
    """Identity part of a payload and its witnessed flag, if it carries one"""
    if not isinstance(payload, dict) or not any(key in payload for key in STATUS_KEYS):
        return payload, None
    identity = {key: value for key, value in payload.items() if key not in STATUS_KEYS}
    return identity, payload.get("witnessed") in (True, "true")


class CatalogService:
    """Service for catalog operations"""

    def __init__(self, session: Session, settings: Settings):
        self.session = session
        self.settings = settings

    def _promote(self, entry: CatalogEntry, witnessed: Optional[bool]) -> bool:
        if witnessed and not entry.witnessed:
            entry.witnessed = True
            self.session.add(entry)
            logger.info("catalog: %s %s is now witnessed", entry.kind, entry.content_hash[:12])
            return True
        return False

    def record(self, kind: str, payload: Any) -> tuple[str, bool]:
        """Store a payload; returns its hash and whether it was new

        The hash covers the identity keys only, so re-recording a tuple with a
        new witness status updates the existing entry.
        """
        if kind not in KINDS:
            raise ValueError(f"unknown catalog kind {kind!r}")
        identity, witnessed = split_status(payload)
        digest = content_hash(identity)
        entry = self.session.get(CatalogEntry, digest)
        if entry is not None:
            if self._promote(entry, witnessed):
                self.session.commit()
            logger.debug("catalog: %s %s already present", kind, digest[:12])
            return digest, False
        self.session.add(
            CatalogEntry(content_hash=digest, kind=kind, payload=canonical_json(identity), witnessed=witnessed)
        )
        self.session.commit()
        logger.info("catalog: recorded %s %s", kind, digest[:12])
        return digest, True

    def record_many(self, kind: str, payloads: Iterable[Any]) -> int:
        """Store several payloads in one transaction; returns how many were new"""
        if kind not in KINDS:
            raise ValueError(f"unknown catalog kind {kind!r}")
        added = 0
        promoted = 0
        pending: dict[str, CatalogEntry] = {}
        for payload in payloads:
            identity, witnessed = split_status(payload)
            digest = content_hash(identity)
            entry = pending.get(digest) or self.session.get(CatalogEntry, digest)
            if entry is not None:
                promoted += self._promote(entry, witnessed)
                continue
            entry = CatalogEntry(content_hash=digest, kind=kind, payload=canonical_json(identity), witnessed=witnessed)
            pending[digest] = entry
            self.session.add(entry)
            added += 1
        self.session.commit()
        logger.info("catalog: recorded %d new %s entries, %d newly witnessed", added, kind, promoted)
        return added

    def get(self, digest: str) -> Optional[dict]:
        entry = self.session.get(CatalogEntry, digest)
        if entry is None:
            return None
        return json.loads(entry.payload)

    def is_witnessed(self, digest: str) -> Optional[bool]:
        """Witness status of an entry; None when it has none or is absent"""
        entry = self.session.get(CatalogEntry, digest)
        return None if entry is None else entry.witnessed

    def list_entries(self, kind: Optional[str] = None, limit: Optional[int] = None):
        """Get catalog entries, oldest first"""
        query = select(CatalogEntry).order_by(CatalogEntry.created_at, CatalogEntry.content_hash)
        if kind is not None:
            query = query.where(CatalogEntry.kind == kind)
        if limit is not None:
            query = query.limit(limit)
        entries = self.session.execute(query).scalars().all()
        return [
            {
                "content_hash": entry.content_hash,
                "kind": entry.kind,
                "created_at": entry.created_at.isoformat(),
                "payload": json.loads(entry.payload),
                **({"witnessed": entry.witnessed} if entry.witnessed is not None else {}),
            }
            for entry in entries
        ]

    def count(self) -> dict[str, int]:
        """Number of entries per kind"""
        rows = self.session.execute(
            select(CatalogEntry.kind, func.count(CatalogEntry.content_hash).label("count"))  # type: ignore
            .group_by(CatalogEntry.kind)
        ).all()
        counts = {kind: 0 for kind in KINDS}
        counts.update({kind: count for kind, count in rows})
        return counts
