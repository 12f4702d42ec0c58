# =========================
# models.py
# Catalog models
# =========================
from datetime import datetime, timezone
from typing import Optional

from sqlmodel import Field, SQLModel


class CatalogEntry(SQLModel, table=True):
    __tablename__ = "catalog_entries"  # type: ignore

    content_hash: str = Field(primary_key=True, max_length=64)
    kind: str = Field(index=True, nullable=False)  # code, outcome, eaqecc
    payload: str = Field(nullable=False)  # canonical JSON, identity keys only
    witnessed: Optional[bool] = Field(default=None, nullable=True)  # eaqecc rows only; never reset to False
    created_at: datetime = Field(default_factory=lambda: datetime.now(timezone.utc))
