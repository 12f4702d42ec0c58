from typing import Generator

from sqlalchemy import create_engine
from sqlalchemy.orm import Session, sessionmaker
from sqlalchemy.pool import StaticPool
from sqlmodel import SQLModel

from .config import Settings, get_settings


def catalog_url(settings: Settings) -> str:
    """SQLAlchemy URL for the catalog; a bare path means a SQLite file"""
    catalog = settings.catalog
    if "://" in catalog:
        return catalog
    if catalog == ":memory:":
        return "sqlite://"
    return f"sqlite:///{catalog}"


def create_database_engine(settings: Settings | None = None):
    """Create catalog engine from settings"""
    settings = settings or get_settings()
    url = catalog_url(settings)
    extra = {}
    if url.startswith("sqlite"):
        extra["connect_args"] = {"check_same_thread": False}
    if url == "sqlite://":
        # in-memory catalog must share one connection
        extra["poolclass"] = StaticPool
    return create_engine(
        url,
        echo=settings.environment == "development",
        future=True,
        **extra
    )


def create_catalog_tables(engine) -> None:
    """Create catalog tables if they do not exist yet"""
    import models  # noqa: F401  registers the table metadata

    SQLModel.metadata.create_all(engine)


def create_session_factory(engine=None):
    """Create session factory from engine"""
    if engine is None:
        engine = create_database_engine()
    return sessionmaker(
        bind=engine,
        expire_on_commit=False,
        autoflush=False,
        autocommit=False
    )


def get_db_session(session_factory: sessionmaker | None = None) -> Generator[Session, None, None]:
    """Yield a catalog session and close it afterwards"""
    if session_factory is None:
        session_factory = create_session_factory()
    session = session_factory()
    try:
        yield session
    finally:
        session.close()
