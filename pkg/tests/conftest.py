from tests.dependencies import (  # noqa: F401
    catalog_service,
    cli_settings,
    full_field_q3,
    full_field_q4,
    gf9,
    gf16,
    gf25,
    test_db_session,
    test_settings,
    test_settings_with_overrides,
)
