"""Asset, license, server-documentation, port and power-plan records.

Asset tags are "AST" + six digits, monotonically increasing. License pools
can never over-allocate. Power allocation is always exactly double the
measured average load.
"""

from __future__ import annotations

import csv
import io
from calendar import monthrange
from dataclasses import dataclass, field
from datetime import date, datetime
from enum import Enum
from typing import TYPE_CHECKING

from .errors import NotFound, StateConflict, ValidationFailed
from .events import EventDraft, iso, parse_ts
from .procurement import DeviceCategory, coerce_category

if TYPE_CHECKING:  # pragma: no cover
    from .state import EngineState

SERVER_LIKE = {DeviceCategory.Servers, DeviceCategory.Storage}


class AssetStatus(str, Enum):
    Active = "Active"
    Retired = "Retired"


class WarrantyStatus(str, Enum):
    InWarranty = "InWarranty"
    OutOfWarranty = "OutOfWarranty"


class PortKind(str, Enum):
    Data = "Data"
    Voice = "Voice"


class PortStatus(str, Enum):
    OK = "OK"
    Faulty = "Faulty"


@dataclass
class Asset:
    tag: str
    device: str
    category: DeviceCategory
    vendor_id: str
    location: str
    purchase_date: date
    warranty_months: int
    status: AssetStatus = AssetStatus.Active


@dataclass
class LicensePool:
    product: str
    total: int
    allocations: list[tuple[str, str, datetime]] = field(default_factory=list)

    def holds(self, user: str, asset_tag: str) -> bool:
        return any(u == user and a == asset_tag for u, a, _ in self.allocations)

    def allocate(self, user: str, asset_tag: str, ts: datetime) -> None:
        if self.holds(user, asset_tag):
            raise StateConflict(
                "duplicate-allocation", f"{self.product}: ({user}, {asset_tag}) already allocated"
            )
        if len(self.allocations) >= self.total:
            raise StateConflict(
                "pool-exhausted", f"{self.product}: all {self.total} licenses are allocated"
            )
        self.allocations.append((user, asset_tag, ts))

    def release(self, user: str, asset_tag: str) -> None:
        if not self.holds(user, asset_tag):
            raise NotFound("allocation-not-found", f"{self.product}: ({user}, {asset_tag}) not allocated")
        self.allocations = [t for t in self.allocations if not (t[0] == user and t[1] == asset_tag)]


@dataclass
class ServerDoc:
    name: str
    configuration: str
    operating_system: str
    applications: list[str]
    antivirus: str
    policies: list[str]
    dhcp_range: tuple[str, str] | None
    print_servers: list[str]
    version: int = 1
    recorded_at: datetime | None = None


@dataclass
class PortRecord:
    port_id: str
    kind: PortKind
    location: str
    status: PortStatus = PortStatus.OK
    notes: str = ""


@dataclass
class PowerPlan:
    room: str
    measured_avg_load: float
    allocated_load: float
    approved: bool = False


def add_months(day: date, months: int) -> date:
    """Calendar-month addition with end-of-month clamping."""
    index = day.year * 12 + (day.month - 1) + months
    year, month0 = divmod(index, 12)
    last = monthrange(year, month0 + 1)[1]
    return date(year, month0 + 1, min(day.day, last))


def warranty_status(asset: Asset, on_date: date) -> WarrantyStatus:
    """In warranty strictly before purchase + warranty months; the expiry day is out."""
    if on_date < asset.purchase_date:
        raise ValidationFailed(
            "date-before-purchase",
            f"{iso_date(on_date)} precedes purchase date {iso_date(asset.purchase_date)}",
        )
    expiry = add_months(asset.purchase_date, asset.warranty_months)
    return WarrantyStatus.InWarranty if on_date < expiry else WarrantyStatus.OutOfWarranty


def iso_date(day: date) -> str:
    return day.isoformat()


def _check_octets(address: str) -> tuple[int, ...]:
    parts = address.split(".")
    if len(parts) != 4 or not all(p.isdigit() and int(p) <= 255 for p in parts):
        raise ValidationFailed("bad-address", f"{address!r} is not a dotted-quad address")
    return tuple(int(p) for p in parts)


def validate_dhcp_range(start: str, end: str) -> None:
    if _check_octets(start) > _check_octets(end):
        raise ValidationFailed("bad-dhcp-range", f"DHCP start {start} is beyond end {end}")


def get_asset(state: "EngineState", tag: str) -> Asset:
    asset = state.assets.get(tag)
    if asset is None:
        raise NotFound("asset-not-found", f"no asset {tag}")
    return asset


def get_pool(state: "EngineState", product: str) -> LicensePool:
    pool = state.license_pools.get(product)
    if pool is None:
        raise NotFound("pool-not-found", f"no license pool for {product!r}")
    return pool


# ---------------------------------------------------------------- commands

def register_asset(
    state: "EngineState",
    *,
    device: str,
    category: DeviceCategory,
    vendor_id: str,
    location: str,
    purchase_date: date,
    warranty_months: int,
    ts: datetime,
) -> list[EventDraft]:
    if not device.strip():
        raise ValidationFailed("empty-device", "device description must be non-empty")
    if warranty_months < 0:
        raise ValidationFailed("bad-warranty", f"warranty months must be >= 0, got {warranty_months}")
    if vendor_id and vendor_id not in state.vendors:
        raise NotFound("vendor-not-found", f"no vendor {vendor_id}")
    tag = state.next_id("asset", "AST")
    payload = {
        "tag": tag,
        "device": device,
        "category": category.value,
        "vendor_id": vendor_id,
        "location": location,
        "purchase_date": iso_date(purchase_date),
        "warranty_months": warranty_months,
        "at": iso(ts),
    }
    return [EventDraft("asset", tag, "asset_registered", payload)]


def retire_asset(state: "EngineState", *, tag: str, ts: datetime) -> list[EventDraft]:
    asset = get_asset(state, tag)
    if asset.status == AssetStatus.Retired:
        raise StateConflict("already-retired", f"asset {tag} is already retired")
    return [EventDraft("asset", tag, "asset_retired", {"tag": tag, "at": iso(ts)})]


def create_license_pool(state: "EngineState", *, product: str, total: int, ts: datetime) -> list[EventDraft]:
    if not product.strip():
        raise ValidationFailed("empty-product", "product name must be non-empty")
    if total < 0:
        raise ValidationFailed("bad-total", f"license total must be >= 0, got {total}")
    if product in state.license_pools:
        raise StateConflict("pool-exists", f"license pool for {product!r} already exists")
    payload = {"product": product, "total": total, "at": iso(ts)}
    return [EventDraft("license_pool", product, "license_pool_created", payload)]


def allocate_license(
    state: "EngineState", *, product: str, user: str, asset_tag: str, ts: datetime
) -> list[EventDraft]:
    pool = get_pool(state, product)
    get_asset(state, asset_tag)
    if not user.strip():
        raise ValidationFailed("empty-user", "user must be non-empty")
    if pool.holds(user, asset_tag):
        raise StateConflict("duplicate-allocation", f"{product}: ({user}, {asset_tag}) already allocated")
    if len(pool.allocations) >= pool.total:
        raise StateConflict("pool-exhausted", f"{product}: all {pool.total} licenses are allocated")
    payload = {"product": product, "user": user, "asset_tag": asset_tag, "at": iso(ts)}
    return [EventDraft("license_pool", product, "license_allocated", payload)]


def release_license(
    state: "EngineState", *, product: str, user: str, asset_tag: str, ts: datetime
) -> list[EventDraft]:
    pool = get_pool(state, product)
    if not pool.holds(user, asset_tag):
        raise NotFound("allocation-not-found", f"{product}: ({user}, {asset_tag}) not allocated")
    payload = {"product": product, "user": user, "asset_tag": asset_tag, "at": iso(ts)}
    return [EventDraft("license_pool", product, "license_released", payload)]


def record_server_doc(
    state: "EngineState",
    *,
    asset_tag: str,
    name: str,
    configuration: str,
    operating_system: str,
    applications: list[str],
    antivirus: str,
    policies: list[str],
    dhcp_range: tuple[str, str] | None,
    print_servers: list[str],
    ts: datetime,
) -> list[EventDraft]:
    asset = get_asset(state, asset_tag)
    if asset.category not in SERVER_LIKE:
        raise ValidationFailed(
            "not-server-like",
            f"asset {asset_tag} is {asset.category.value}; server documentation applies to "
            f"{sorted(c.value for c in SERVER_LIKE)}",
        )
    if dhcp_range is not None:
        validate_dhcp_range(dhcp_range[0], dhcp_range[1])
    version = len(state.server_docs.get(asset_tag, [])) + 1
    payload = {
        "asset_tag": asset_tag,
        "version": version,
        "name": name,
        "configuration": configuration,
        "operating_system": operating_system,
        "applications": list(applications),
        "antivirus": antivirus,
        "policies": list(policies),
        "dhcp_range": list(dhcp_range) if dhcp_range else None,
        "print_servers": list(print_servers),
        "at": iso(ts),
    }
    return [EventDraft("asset", asset_tag, "server_doc_recorded", payload)]


def register_port(
    state: "EngineState", *, port_id: str, kind: PortKind, location: str, notes: str, ts: datetime
) -> list[EventDraft]:
    if not port_id.strip():
        raise ValidationFailed("empty-port-id", "port id must be non-empty")
    if port_id in state.ports:
        raise StateConflict("port-exists", f"port {port_id} is already registered")
    payload = {"port_id": port_id, "kind": kind.value, "location": location, "notes": notes, "at": iso(ts)}
    return [EventDraft("port", port_id, "port_registered", payload)]


def mark_port(
    state: "EngineState", *, port_id: str, status: PortStatus, note: str, ts: datetime
) -> list[EventDraft]:
    if port_id not in state.ports:
        raise NotFound("port-not-found", f"no port {port_id}")
    payload = {"port_id": port_id, "status": status.value, "note": note, "at": iso(ts)}
    return [EventDraft("port", port_id, "port_status_marked", payload)]


def plan_power(state: "EngineState", *, room: str, measured_avg_load: float, ts: datetime) -> list[EventDraft]:
    if not room.strip():
        raise ValidationFailed("empty-room", "room must be non-empty")
    if measured_avg_load <= 0:
        raise ValidationFailed("bad-load", f"measured average load must be > 0 kW, got {measured_avg_load}")
    payload = {
        "room": room,
        "measured_avg_load": measured_avg_load,
        "allocated_load": 2 * measured_avg_load,
        "at": iso(ts),
    }
    return [EventDraft("power_plan", room, "power_plan_created", payload)]


def approve_power_plan(state: "EngineState", *, room: str, ts: datetime) -> list[EventDraft]:
    plan = state.power_plans.get(room)
    if plan is None:
        raise NotFound("plan-not-found", f"no power plan for room {room!r}")
    if plan.approved:
        raise StateConflict("already-approved", f"power plan for {room!r} is already approved")
    return [EventDraft("power_plan", room, "power_plan_approved", {"room": room, "at": iso(ts)})]


# ------------------------------------------------------------------ exports

def render_assets_csv(assets: list[Asset]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["Tag", "Device", "Category", "Vendor", "Location", "Purchase date", "Warranty (months)", "Status"])
    for a in assets:
        writer.writerow([
            a.tag, a.device, a.category.value, a.vendor_id, a.location,
            iso_date(a.purchase_date), a.warranty_months, a.status.value,
        ])
    return buf.getvalue()


def render_licenses_csv(pools: list[LicensePool]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["Product", "Total", "Allocated", "User", "Asset tag", "Allocated at"])
    for pool in pools:
        if not pool.allocations:
            writer.writerow([pool.product, pool.total, 0, "", "", ""])
        for user, tag, at in pool.allocations:
            writer.writerow([pool.product, pool.total, len(pool.allocations), user, tag, iso(at)])
    return buf.getvalue()


# ---------------------------------------------------------------- appliers

def _apply_asset_registered(state: "EngineState", payload: dict) -> None:
    asset = Asset(
        tag=payload["tag"],
        device=payload["device"],
        category=DeviceCategory(payload["category"]),
        vendor_id=payload["vendor_id"],
        location=payload["location"],
        purchase_date=date.fromisoformat(payload["purchase_date"]),
        warranty_months=payload["warranty_months"],
    )
    state.assets[asset.tag] = asset
    state.bump_counter("asset", asset.tag, "AST")


def _apply_asset_retired(state: "EngineState", payload: dict) -> None:
    state.assets[payload["tag"]].status = AssetStatus.Retired


def _apply_license_pool_created(state: "EngineState", payload: dict) -> None:
    state.license_pools[payload["product"]] = LicensePool(product=payload["product"], total=payload["total"])


def _apply_license_allocated(state: "EngineState", payload: dict) -> None:
    pool = state.license_pools[payload["product"]]
    pool.allocations.append((payload["user"], payload["asset_tag"], parse_ts(payload["at"])))


def _apply_license_released(state: "EngineState", payload: dict) -> None:
    pool = state.license_pools[payload["product"]]
    pool.allocations = [
        t for t in pool.allocations if not (t[0] == payload["user"] and t[1] == payload["asset_tag"])
    ]


def _apply_server_doc_recorded(state: "EngineState", payload: dict) -> None:
    doc = ServerDoc(
        name=payload["name"],
        configuration=payload["configuration"],
        operating_system=payload["operating_system"],
        applications=list(payload["applications"]),
        antivirus=payload["antivirus"],
        policies=list(payload["policies"]),
        dhcp_range=tuple(payload["dhcp_range"]) if payload["dhcp_range"] else None,
        print_servers=list(payload["print_servers"]),
        version=payload["version"],
        recorded_at=parse_ts(payload["at"]),
    )
    state.server_docs.setdefault(payload["asset_tag"], []).append(doc)


def _apply_port_registered(state: "EngineState", payload: dict) -> None:
    state.ports[payload["port_id"]] = PortRecord(
        port_id=payload["port_id"],
        kind=PortKind(payload["kind"]),
        location=payload["location"],
        notes=payload["notes"],
    )


def _apply_port_status_marked(state: "EngineState", payload: dict) -> None:
    port = state.ports[payload["port_id"]]
    port.status = PortStatus(payload["status"])
    if payload["note"]:
        port.notes = payload["note"]


def _apply_power_plan_created(state: "EngineState", payload: dict) -> None:
    state.power_plans[payload["room"]] = PowerPlan(
        room=payload["room"],
        measured_avg_load=payload["measured_avg_load"],
        allocated_load=payload["allocated_load"],
    )


def _apply_power_plan_approved(state: "EngineState", payload: dict) -> None:
    state.power_plans[payload["room"]].approved = True


APPLIERS = {
    "asset_registered": _apply_asset_registered,
    "asset_retired": _apply_asset_retired,
    "license_pool_created": _apply_license_pool_created,
    "license_allocated": _apply_license_allocated,
    "license_released": _apply_license_released,
    "server_doc_recorded": _apply_server_doc_recorded,
    "port_registered": _apply_port_registered,
    "port_status_marked": _apply_port_status_marked,
    "power_plan_created": _apply_power_plan_created,
    "power_plan_approved": _apply_power_plan_approved,
}
