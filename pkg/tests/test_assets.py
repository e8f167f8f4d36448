import itertools
import json
from datetime import date

import pytest

from itil_forge.assets import (
    LicensePool,
    WarrantyStatus,
    add_months,
    render_assets_csv,
)
from itil_forge.errors import NotFound, StateConflict, ValidationFailed
from itil_forge.state import to_jsonable

from conftest import T0, at


def oracle_expiry(purchase: date, months: int) -> date:
    """Independent month addition: jump, then walk the day down until valid."""
    total = purchase.month + months
    year = purchase.year + (total - 1) // 12
    month = (total - 1) % 12 + 1
    day = purchase.day
    while True:
        try:
            return date(year, month, day)
        except ValueError:
            day -= 1


def register(engine, vendor, **kw):
    defaults = dict(
        device="ThinkPad T460", category="Laptops", vendor_id=vendor.id, location="HQ",
        purchase_date=date(2016, 1, 1), warranty_months=12, actor="admin", ts=T0,
    )
    defaults.update(kw)
    return engine.register_asset(**defaults)


def test_first_asset_tag(engine, vendor):
    asset = register(engine, vendor)
    assert asset.tag == "AST000001"


def test_tags_are_monotonic_by_enumeration(engine, vendor):
    tags = [register(engine, vendor).tag for _ in range(25)]
    assert tags == [f"AST{n:06d}" for n in range(1, 26)]


def test_negative_warranty_rejected(engine, vendor):
    with pytest.raises(ValidationFailed):
        register(engine, vendor, warranty_months=-1)


def test_thousand_registrations_are_distinct(engine, vendor):
    tags = {register(engine, vendor).tag for _ in range(1000)}
    assert len(tags) == 1000


@pytest.mark.parametrize(
    "purchase,months,on,expected",
    [
        (date(2016, 1, 1), 12, date(2016, 6, 1), WarrantyStatus.InWarranty),
        (date(2016, 1, 1), 12, date(2017, 1, 1), WarrantyStatus.OutOfWarranty),  # expiry day is out
        (date(2016, 1, 1), 12, date(2016, 12, 31), WarrantyStatus.InWarranty),
        (date(2016, 1, 1), 0, date(2016, 1, 1), WarrantyStatus.OutOfWarranty),
        (date(2016, 1, 31), 1, date(2016, 2, 28), WarrantyStatus.InWarranty),   # clamps to Feb 29
        (date(2016, 1, 31), 1, date(2016, 2, 29), WarrantyStatus.OutOfWarranty),
        (date(2015, 1, 31), 1, date(2015, 2, 28), WarrantyStatus.OutOfWarranty),  # non-leap clamp
        (date(2016, 11, 30), 3, date(2017, 2, 27), WarrantyStatus.InWarranty),
        (date(2016, 11, 30), 3, date(2017, 2, 28), WarrantyStatus.OutOfWarranty),
    ],
)
def test_warranty_boundaries(engine, vendor, purchase, months, on, expected):
    asset = register(engine, vendor, purchase_date=purchase, warranty_months=months)
    assert engine.warranty_status(tag=asset.tag, on_date=on) == expected


def test_add_months_matches_independent_oracle():
    samples = [
        (date(2016, 1, 31), 1), (date(2015, 1, 31), 1), (date(2016, 1, 1), 12),
        (date(2016, 11, 30), 3), (date(2000, 2, 29), 12), (date(2016, 5, 31), 48),
        (date(1999, 12, 31), 2), (date(2016, 8, 31), 6),
    ]
    for purchase, months in samples:
        assert add_months(purchase, months) == oracle_expiry(purchase, months)


def test_warranty_date_before_purchase_rejected(engine, vendor):
    asset = register(engine, vendor)
    with pytest.raises(ValidationFailed):
        engine.warranty_status(tag=asset.tag, on_date=date(2015, 12, 31))


# ----------------------------------------------------------------- licenses

def test_pool_boundary_allocation(engine, vendor):
    asset = register(engine, vendor)
    engine.create_license_pool(product="Windows XP", total=1000, actor="admin", ts=T0)
    for i in range(999):
        engine.allocate_license(
            product="Windows XP", user=f"user{i}", asset_tag=asset.tag, actor="admin", ts=at(minutes=i)
        )
    pool = engine.allocate_license(
        product="Windows XP", user="user999", asset_tag=asset.tag, actor="admin", ts=at(hours=20)
    )
    assert len(pool.allocations) == 1000
    with pytest.raises(StateConflict) as err:
        engine.allocate_license(
            product="Windows XP", user="overflow", asset_tag=asset.tag, actor="admin", ts=at(hours=21)
        )
    assert err.value.code == "pool-exhausted"


def test_duplicate_allocation_rejected(engine, vendor):
    asset = register(engine, vendor)
    engine.create_license_pool(product="WinZip", total=10, actor="admin", ts=T0)
    engine.allocate_license(product="WinZip", user="amy", asset_tag=asset.tag, actor="admin", ts=at(minutes=1))
    with pytest.raises(StateConflict) as err:
        engine.allocate_license(product="WinZip", user="amy", asset_tag=asset.tag, actor="admin", ts=at(minutes=2))
    assert err.value.code == "duplicate-allocation"


def test_release_then_reallocate(engine, vendor):
    asset = register(engine, vendor)
    engine.create_license_pool(product="Office", total=1, actor="admin", ts=T0)
    engine.allocate_license(product="Office", user="amy", asset_tag=asset.tag, actor="admin", ts=at(minutes=1))
    engine.release_license(product="Office", user="amy", asset_tag=asset.tag, actor="admin", ts=at(minutes=2))
    pool = engine.allocate_license(
        product="Office", user="bob", asset_tag=asset.tag, actor="admin", ts=at(minutes=3)
    )
    assert [(u, a) for u, a, _ in pool.allocations] == [("bob", asset.tag)]


def test_exhaustive_small_pool_never_over_allocates():
    """All operation sequences up to length 6 over a tiny universe."""
    pairs = [("u1", "a1"), ("u1", "a2"), ("u2", "a1")]
    ops = [("alloc", p) for p in pairs] + [("release", p) for p in pairs]
    for total in (0, 1, 2, 3):
        for length in range(1, 7):
            for seq in itertools.product(ops, repeat=length):
                pool = LicensePool(product="x", total=total)
                for op, (user, tag) in seq:
                    try:
                        if op == "alloc":
                            pool.allocate(user, tag, T0)
                        else:
                            pool.release(user, tag)
                    except (StateConflict, NotFound):
                        pass
                    assert len(pool.allocations) <= total


# --------------------------------------------------------------- server doc

SERVER_DOC = dict(
    name="HP Proliant DL 380 G5 (8 SAS HDD with each 146GB capacity)",
    configuration="Xeon processor/ 2.73 GHz/ 8GB RAM",
    operating_system="Windows 2003 (R2) server OS",
    applications=["ADS(User accounts, group policies)", "DNS", "DHCP", "Print Server"],
    antivirus="McAfee 8.5",
    policies=[
        "Prevent accessing control panel",
        "Prevent modifying date and time",
        "Software Deployment (Ms Office 2003, McAfee 8.5, Win Zip, Adobe, Internet explorer 8.0)",
    ],
    dhcp_range=("192.160.2.10", "192.160.2.225"),
    print_servers=["HP Colour LaserJet 4600n", "HP LaserJet 4100n"],
)


def test_server_doc_accepts_verbatim_dhcp_range(engine, asset):
    doc = engine.record_server_doc(asset_tag=asset.tag, actor="admin", ts=at(hours=1), **SERVER_DOC)
    assert doc.dhcp_range == ("192.160.2.10", "192.160.2.225")
    assert doc.version == 1


def test_server_doc_rejects_inverted_dhcp_range(engine, asset):
    bad = dict(SERVER_DOC, dhcp_range=("192.160.2.225", "192.160.2.10"))
    with pytest.raises(ValidationFailed):
        engine.record_server_doc(asset_tag=asset.tag, actor="admin", ts=at(hours=1), **bad)


def test_server_doc_versions_are_retained(engine, asset):
    engine.record_server_doc(asset_tag=asset.tag, actor="admin", ts=at(hours=1), **SERVER_DOC)
    v2 = engine.record_server_doc(
        asset_tag=asset.tag, actor="admin", ts=at(hours=2), **dict(SERVER_DOC, antivirus="McAfee 9.0")
    )
    versions = engine.state.server_docs[asset.tag]
    assert v2.version == 2
    assert [d.version for d in versions] == [1, 2]
    assert versions[0].antivirus == "McAfee 8.5"


def test_server_doc_requires_server_like_asset(engine, vendor):
    laptop = register(engine, vendor)
    with pytest.raises(ValidationFailed):
        engine.record_server_doc(asset_tag=laptop.tag, actor="admin", ts=at(hours=1), **SERVER_DOC)


def test_server_doc_round_trips_through_serialization(engine, asset):
    doc = engine.record_server_doc(asset_tag=asset.tag, actor="admin", ts=at(hours=1), **SERVER_DOC)
    encoded = json.dumps(to_jsonable(doc), sort_keys=True)
    decoded = json.loads(encoded)
    assert decoded["dhcp_range"] == ["192.160.2.10", "192.160.2.225"]
    assert decoded["name"] == SERVER_DOC["name"]
    assert decoded["applications"] == SERVER_DOC["applications"]


# -------------------------------------------------------------------- ports

def test_port_register_and_fault(engine):
    engine.register_port(port_id="D-014", kind="Data", location="Conf room", actor="admin", ts=T0)
    port = engine.mark_port(port_id="D-014", status="Faulty", note="no link", actor="admin", ts=at(hours=1))
    assert port.status.value == "Faulty"
    assert port.notes == "no link"


def test_unknown_port_is_not_found(engine):
    with pytest.raises(NotFound):
        engine.mark_port(port_id="P-999", status="Faulty", note="?", actor="admin", ts=T0)


def test_duplicate_port_id_rejected(engine):
    engine.register_port(port_id="V-001", kind="Voice", location="Reception", actor="admin", ts=T0)
    with pytest.raises(StateConflict):
        engine.register_port(port_id="V-001", kind="Voice", location="Reception", actor="admin", ts=T0)


# -------------------------------------------------------------------- power

@pytest.mark.parametrize("load,expected", [(3.5, 7.0), (12.25, 24.5), (0.875, 1.75)])
def test_power_plan_doubles_exactly(engine, load, expected):
    plan = engine.plan_power(room="Server room", measured_avg_load=load, actor="admin", ts=T0)
    assert plan.allocated_load == expected
    assert plan.approved is False


def test_power_plan_rejects_zero_load(engine):
    with pytest.raises(ValidationFailed):
        engine.plan_power(room="Server room", measured_avg_load=0, actor="admin", ts=T0)


def test_power_plan_approval(engine):
    engine.plan_power(room="Server room", measured_avg_load=3.5, actor="admin", ts=T0)
    plan = engine.approve_power_plan(room="Server room", actor="mgmt", ts=at(hours=1))
    assert plan.approved


def test_assets_export_csv(engine, vendor):
    register(engine, vendor)
    text = render_assets_csv(list(engine.state.assets.values()))
    lines = text.splitlines()
    assert lines[0].startswith("Tag,Device,Category,Vendor")
    assert lines[1].startswith("AST000001,ThinkPad T460,Laptops")
