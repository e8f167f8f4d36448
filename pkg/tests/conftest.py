from datetime import date, datetime, timedelta, timezone

import pytest

from itil_forge import Engine

T0 = datetime(2016, 3, 1, 9, 0, 0, tzinfo=timezone.utc)


def at(**kwargs) -> datetime:
    """T0 shifted by the given timedelta kwargs."""
    return T0 + timedelta(**kwargs)


@pytest.fixture
def engine():
    return Engine(log_path=None)


@pytest.fixture
def vendor(engine):
    return engine.register_vendor(
        name="TechCorp",
        contact="044-2611",
        authorized_for=["Servers", "Laptops", "NetworkingDevice", "Storage"],
        actor="admin",
        ts=T0,
    )


@pytest.fixture
def asset(engine, vendor):
    return engine.register_asset(
        device="HP Proliant DL 380 G5",
        category="Servers",
        vendor_id=vendor.id,
        location="Server room",
        purchase_date=date(2016, 1, 1),
        warranty_months=36,
        actor="admin",
        ts=T0,
    )


@pytest.fixture
def project(engine):
    return engine.create_project(name="HQ-Rollout", organization="Acme", actor="admin", ts=T0)
