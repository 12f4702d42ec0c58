from typing import Optional

from sqlalchemy.orm import Session

from .config import Settings, get_settings


def get_catalog_service(session: Session, settings: Optional[Settings] = None):
    """Get CatalogService instance"""
    from services.catalog_service import CatalogService
    return CatalogService(session=session, settings=settings or get_settings())


def get_code_service(settings: Optional[Settings] = None):
    """Get CodeService instance"""
    from services.code_service import CodeService
    return CodeService(settings=settings or get_settings())


def get_table_service(settings: Optional[Settings] = None):
    """Get TableService instance"""
    from services.table_service import TableService
    return TableService(settings=settings or get_settings())


def get_witness_service(settings: Optional[Settings] = None):
    """Get WitnessService instance"""
    from services.witness_service import WitnessService
    return WitnessService(settings=settings or get_settings())


def get_verify_service(settings: Optional[Settings] = None):
    """Get VerifyService instance"""
    from services.verify_service import VerifyService
    return VerifyService(settings=settings or get_settings())
