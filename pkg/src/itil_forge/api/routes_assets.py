from datetime import date

from fastapi import APIRouter
from fastapi.responses import PlainTextResponse

from ..assets import render_assets_csv, render_licenses_csv
from ..store import Engine
from . import schemas, views
from .deps import ActorDep, EngineDep

router = APIRouter(tags=["assets"])


@router.post("/assets", status_code=201)
def register_asset(body: schemas.AssetRegister, engine: Engine = EngineDep, actor: str = ActorDep):
    asset = engine.register_asset(
        device=body.device, category=body.category, vendor_id=body.vendor_id, location=body.location,
        purchase_date=body.purchase_date, warranty_months=body.warranty_months, actor=actor, ts=body.ts,
    )
    return views.asset_view(asset)


@router.get("/assets")
def list_assets(engine: Engine = EngineDep, actor: str = ActorDep):
    with engine.lock:
        return [views.asset_view(a) for a in engine.state.assets.values()]


@router.get("/assets/export.csv", response_class=PlainTextResponse)
def export_assets(engine: Engine = EngineDep, actor: str = ActorDep):
    with engine.lock:
        text = render_assets_csv(list(engine.state.assets.values()))
    return PlainTextResponse(text, media_type="text/csv")


@router.get("/assets/{tag}")
def get_asset(tag: str, engine: Engine = EngineDep, actor: str = ActorDep):
    from ..assets import get_asset as _get

    with engine.lock:
        return views.asset_view(_get(engine.state, tag))


@router.get("/assets/{tag}/warranty")
def warranty(tag: str, on: date, engine: Engine = EngineDep, actor: str = ActorDep):
    status = engine.warranty_status(tag=tag, on_date=on)
    return {"tag": tag, "on": on.isoformat(), "status": status.value}


@router.post("/assets/{tag}/retire")
def retire_asset(tag: str, body: schemas.GateClose, engine: Engine = EngineDep, actor: str = ActorDep):
    return views.asset_view(engine.retire_asset(tag=tag, actor=actor, ts=body.ts))


@router.post("/assets/{tag}/server-docs", status_code=201)
def record_server_doc(
    tag: str, body: schemas.ServerDocIn, engine: Engine = EngineDep, actor: str = ActorDep
):
    doc = engine.record_server_doc(
        asset_tag=tag, actor=actor, ts=body.ts, name=body.name, configuration=body.configuration,
        operating_system=body.operating_system, applications=body.applications, antivirus=body.antivirus,
        policies=body.policies, dhcp_range=body.dhcp_range, print_servers=body.print_servers,
    )
    return views.server_doc_view(doc)


@router.get("/assets/{tag}/server-docs")
def list_server_docs(tag: str, engine: Engine = EngineDep, actor: str = ActorDep):
    from ..assets import get_asset as _get

    with engine.lock:
        _get(engine.state, tag)
        return [views.server_doc_view(d) for d in engine.state.server_docs.get(tag, [])]


@router.post("/licenses", status_code=201)
def create_pool(body: schemas.LicensePoolCreate, engine: Engine = EngineDep, actor: str = ActorDep):
    pool = engine.create_license_pool(product=body.product, total=body.total, actor=actor, ts=body.ts)
    return views.pool_view(pool)


@router.get("/licenses")
def list_pools(engine: Engine = EngineDep, actor: str = ActorDep):
    with engine.lock:
        return [views.pool_view(p) for p in engine.state.license_pools.values()]


@router.get("/licenses/export.csv", response_class=PlainTextResponse)
def export_licenses(engine: Engine = EngineDep, actor: str = ActorDep):
    with engine.lock:
        text = render_licenses_csv(list(engine.state.license_pools.values()))
    return PlainTextResponse(text, media_type="text/csv")


@router.get("/licenses/{product}")
def get_pool(product: str, engine: Engine = EngineDep, actor: str = ActorDep):
    from ..assets import get_pool as _get

    with engine.lock:
        return views.pool_view(_get(engine.state, product))


@router.post("/licenses/{product}/allocations", status_code=201)
def allocate(product: str, body: schemas.LicenseAllocation, engine: Engine = EngineDep, actor: str = ActorDep):
    pool = engine.allocate_license(
        product=product, user=body.user, asset_tag=body.asset_tag, actor=actor, ts=body.ts
    )
    return views.pool_view(pool)


@router.post("/licenses/{product}/release")
def release(product: str, body: schemas.LicenseAllocation, engine: Engine = EngineDep, actor: str = ActorDep):
    pool = engine.release_license(
        product=product, user=body.user, asset_tag=body.asset_tag, actor=actor, ts=body.ts
    )
    return views.pool_view(pool)


@router.post("/ports", status_code=201)
def register_port(body: schemas.PortRegister, engine: Engine = EngineDep, actor: str = ActorDep):
    port = engine.register_port(
        port_id=body.port_id, kind=body.kind, location=body.location, notes=body.notes, actor=actor, ts=body.ts
    )
    return views.port_view(port)


@router.get("/ports")
def list_ports(engine: Engine = EngineDep, actor: str = ActorDep):
    with engine.lock:
        return [views.port_view(p) for p in engine.state.ports.values()]


@router.post("/ports/{port_id}/status")
def mark_port(port_id: str, body: schemas.PortMark, engine: Engine = EngineDep, actor: str = ActorDep):
    port = engine.mark_port(port_id=port_id, status=body.status, note=body.note, actor=actor, ts=body.ts)
    return views.port_view(port)


@router.post("/power-plans", status_code=201)
def plan_power(body: schemas.PowerPlanCreate, engine: Engine = EngineDep, actor: str = ActorDep):
    plan = engine.plan_power(room=body.room, measured_avg_load=body.measured_avg_load, actor=actor, ts=body.ts)
    return views.power_view(plan)


@router.get("/power-plans")
def list_power_plans(engine: Engine = EngineDep, actor: str = ActorDep):
    with engine.lock:
        return [views.power_view(p) for p in engine.state.power_plans.values()]


@router.post("/power-plans/{room}/approve")
def approve_power_plan(room: str, body: schemas.GateClose, engine: Engine = EngineDep, actor: str = ActorDep):
    return views.power_view(engine.approve_power_plan(room=room, actor=actor, ts=body.ts))
