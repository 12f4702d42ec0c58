"""
Dependency wiring tests

Settings, catalog engine/session factories and the service factories used by
hullman.py.
"""

import pytest

from dependencies.config import Settings
from dependencies.database import catalog_url, create_database_engine, create_session_factory
from dependencies.services import (
    get_catalog_service,
    get_code_service,
    get_table_service,
    get_verify_service,
    get_witness_service,
)
from services.catalog_service import CatalogService
from services.code_service import CodeService
from services.table_service import TableService
from services.verify_service import VerifyService
from services.witness_service import WitnessService
from tests.dependencies import get_test_settings


class TestConfiguration:
    """Test configuration and settings."""

    def test_test_settings_defaults(self):
        """Test that test settings have correct defaults."""
        settings = get_test_settings()

        assert settings.catalog == ":memory:"
        assert settings.environment == "testing"
        assert settings.search_seed == 1729
        assert settings.golden_dir.endswith("golden")

    def test_environment_overrides(self, monkeypatch):
        """HULLSMITH_ variables override the defaults."""
        monkeypatch.setenv("HULLSMITH_SEARCH_SEED", "7")
        monkeypatch.setenv("HULLSMITH_WITNESS_MAX_Q", "11")
        settings = Settings()
        assert settings.search_seed == 7
        assert settings.witness_max_q == 11

    def test_settings_validation(self):
        """Test that settings validation works."""
        settings = Settings(catalog="sqlite:///test.db", environment="test", max_minors=10)
        assert settings.catalog == "sqlite:///test.db"
        assert settings.max_minors == 10


class TestDatabaseDependencies:
    """Test database dependency functions."""

    @pytest.mark.parametrize(
        "catalog,url",
        [
            (":memory:", "sqlite://"),
            ("results.db", "sqlite:///results.db"),
            ("postgresql://u@h/db", "postgresql://u@h/db"),
        ],
    )
    def test_catalog_url(self, catalog, url):
        """Bare paths become SQLite URLs; full URLs pass through."""
        assert catalog_url(get_test_settings(catalog=catalog)) == url

    def test_create_session_factory(self):
        """Test session factory creation."""
        engine = create_database_engine(get_test_settings())
        session_factory = create_session_factory(engine)
        assert session_factory is not None
        engine.dispose()


@pytest.mark.services
class TestServiceDependencies:
    """Factories hand settings through to the services."""

    def test_services_receive_settings(self, test_settings):
        """Each factory returns its service bound to the given settings."""
        for factory, cls in [
            (get_code_service, CodeService),
            (get_table_service, TableService),
            (get_witness_service, WitnessService),
            (get_verify_service, VerifyService),
        ]:
            service = factory(test_settings)
            assert isinstance(service, cls)
            assert service.settings is test_settings

    def test_catalog_service(self, test_db_session, test_settings):
        """The catalog service wraps the given session."""
        service = get_catalog_service(test_db_session, test_settings)
        assert isinstance(service, CatalogService)
        assert service.session is test_db_session

    def test_search_params_follow_settings(self, test_settings_with_overrides):
        """The configured seed reaches the kernel search."""
        settings = test_settings_with_overrides(search_seed=42, kernel_search_batch=64)
        params = get_code_service(settings).search_params
        assert params.seed == 42
        assert params.batch == 64
