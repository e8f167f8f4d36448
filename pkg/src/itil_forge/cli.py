"""Administrative command-line client; a pure HTTP consumer of the API.

Exit codes: 0 success, 2 connection failure, 3 validation error (HTTP 400),
4 state conflict or rule violation (409/422), 5 not found (404), 1 anything
else. With --json the raw API response is printed unmodified.
"""

from __future__ import annotations

import json
import sys

import click
import httpx

EXIT_BY_STATUS = {400: 3, 404: 5, 409: 4, 422: 4}


def make_client(server: str, token: str) -> httpx.Client:
    return httpx.Client(base_url=server, headers={"Authorization": f"Bearer {token}"}, timeout=30.0)


class Session:
    def __init__(self, server: str, token: str, as_json: bool):
        self.server = server
        self.token = token
        self.as_json = as_json
        self._client: httpx.Client | None = None

    @property
    def client(self) -> httpx.Client:
        if self._client is None:
            self._client = make_client(self.server, self.token)
        return self._client

    def call(self, method: str, path: str, body: dict | None = None, params: dict | None = None):
        try:
            response = self.client.request(method, path, json=body, params=params)
        except httpx.HTTPError as exc:
            click.echo(f"connection failure: {exc}", err=True)
            sys.exit(2)
        if response.status_code >= 400:
            try:
                error = response.json()
                message = f"{error.get('code', 'error')}: {error.get('message', '')}"
                if error.get("details"):
                    message += f" {json.dumps(error['details'])}"
            except ValueError:
                message = response.text
            click.echo(f"error ({response.status_code}) {message}", err=True)
            sys.exit(EXIT_BY_STATUS.get(response.status_code, 1))
        if "text/csv" in response.headers.get("content-type", "") or (
            "text/plain" in response.headers.get("content-type", "")
        ):
            return response.text
        return response.json()

    def show(self, data) -> None:
        if isinstance(data, str):
            click.echo(data, nl=not data.endswith("\n"))
            return
        if self.as_json:
            click.echo(json.dumps(data, indent=2, sort_keys=True))
            return
        _render(data)


def _render(data, indent: str = "") -> None:
    if isinstance(data, list):
        if not data:
            click.echo(f"{indent}(empty)")
        for item in data:
            if isinstance(item, dict):
                head = item.get("id") or item.get("tag") or item.get("product") or item.get("port_id") \
                    or item.get("room") or item.get("service") or item.get("period") or ""
                click.echo(f"{indent}- {head}".rstrip())
                _render({k: v for k, v in item.items()}, indent + "  ")
            else:
                click.echo(f"{indent}- {item}")
        return
    if isinstance(data, dict):
        for key, value in data.items():
            if isinstance(value, (dict, list)) and value:
                click.echo(f"{indent}{key}: {json.dumps(value, sort_keys=True)}")
            else:
                click.echo(f"{indent}{key}: {value if value is not None else '-'}")
        return
    click.echo(f"{indent}{data}")


pass_session = click.make_pass_decorator(Session)


@click.group()
@click.option("--server", envvar="ITIL_FORGE_SERVER", default="http://127.0.0.1:8321", show_default=True)
@click.option("--token", envvar="ITIL_FORGE_TOKEN", default="dev-token")
@click.option("--json", "as_json", is_flag=True, help="print raw JSON responses")
@click.pass_context
def main(ctx, server, token, as_json):
    """itil-forge administration client."""
    ctx.obj = Session(server, token, as_json)


# ------------------------------------------------------------------ project

@main.group()
def project():
    """Lifecycle projects and phase gates."""


@project.command("create")
@click.option("--name", required=True)
@click.option("--organization", required=True)
@pass_session
def project_create(session, name, organization):
    session.show(session.call("POST", "/projects", {"name": name, "organization": organization}))


@project.command("list")
@pass_session
def project_list(session):
    session.show(session.call("GET", "/projects"))


@project.command("show")
@click.argument("project_id")
@pass_session
def project_show(session, project_id):
    session.show(session.call("GET", f"/projects/{project_id}"))


@project.command("evidence")
@click.argument("project_id")
@click.option("--phase", required=True)
@click.option("--kind", required=True)
@click.option("--doc-ref", required=True)
@pass_session
def project_evidence(session, project_id, phase, kind, doc_ref):
    session.show(session.call(
        "POST", f"/projects/{project_id}/evidence", {"phase": phase, "kind": kind, "doc_ref": doc_ref}
    ))


@project.command("close-gate")
@click.argument("project_id")
@click.option("--phase", required=True)
@pass_session
def project_close_gate(session, project_id, phase):
    session.show(session.call("POST", f"/projects/{project_id}/gates/{phase}/close", {}))


@project.command("advance")
@click.argument("project_id")
@pass_session
def project_advance(session, project_id):
    session.show(session.call("POST", f"/projects/{project_id}/advance", {}))


# ------------------------------------------------------------------- vendor

@main.group()
def vendor():
    """Vendors, scorecards and renewal."""


@vendor.command("register")
@click.option("--name", required=True)
@click.option("--contact", default="")
@click.option("--authorized-for", "categories", multiple=True)
@pass_session
def vendor_register(session, name, contact, categories):
    session.show(session.call(
        "POST", "/vendors", {"name": name, "contact": contact, "authorized_for": list(categories)}
    ))


@vendor.command("list")
@pass_session
def vendor_list(session):
    session.show(session.call("GET", "/vendors"))


@vendor.command("show")
@click.argument("vendor_id")
@pass_session
def vendor_show(session, vendor_id):
    session.show(session.call("GET", f"/vendors/{vendor_id}"))


@vendor.command("report")
@click.argument("vendor_id")
@click.option("--quarter", "period", required=True, help="e.g. 2016Q3")
@click.option("--text", is_flag=True)
@pass_session
def vendor_report(session, vendor_id, period, text):
    params = {"period": period}
    if text:
        params["format"] = "text"
    session.show(session.call("GET", f"/vendors/{vendor_id}/reports", params=params))


@vendor.command("annual")
@click.argument("vendor_id")
@click.option("--year", type=int, required=True)
@click.option("--text", is_flag=True)
@pass_session
def vendor_annual(session, vendor_id, year, text):
    params = {"year": year}
    if text:
        params["format"] = "text"
    session.show(session.call("GET", f"/vendors/{vendor_id}/reports/annual", params=params))


@vendor.command("survey")
@click.argument("vendor_id")
@click.option("--period", required=True)
@click.option("--scores", required=True, help="comma-separated 1..5 scores")
@pass_session
def vendor_survey(session, vendor_id, period, scores):
    values = [int(s) for s in scores.split(",") if s.strip()]
    session.show(session.call(
        "POST", f"/vendors/{vendor_id}/surveys", {"period": period, "scores": values}
    ))


@vendor.command("renewal-eval")
@click.argument("vendor_id")
@click.option("--year", type=int, required=True)
@pass_session
def vendor_renewal(session, vendor_id, year):
    session.show(session.call("POST", f"/vendors/{vendor_id}/renewal-evaluation", {"year": year}))


# -------------------------------------------------------------- procurement

@main.group()
def procurement():
    """Requirement, quotations, approvals, LOP closure."""


@procurement.command("submit")
@click.option("--project", "project_id", required=True)
@click.option("--doc", "requirement_doc", required=True)
@pass_session
def procurement_submit(session, project_id, requirement_doc):
    session.show(session.call(
        "POST", "/procurements", {"project_id": project_id, "requirement_doc": requirement_doc}
    ))


@procurement.command("list")
@pass_session
def procurement_list(session):
    session.show(session.call("GET", "/procurements"))


@procurement.command("show")
@click.argument("request_id")
@pass_session
def procurement_show(session, request_id):
    session.show(session.call("GET", f"/procurements/{request_id}"))


@procurement.command("import-csv")
@click.argument("request_id")
@click.option("--vendor", "vendor_id", required=True)
@click.option("--file", "path", type=click.Path(exists=True), required=True)
@pass_session
def procurement_import_csv(session, request_id, vendor_id, path):
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    session.show(session.call(
        "POST", f"/procurements/{request_id}/quotations/import-csv",
        {"vendor_id": vendor_id, "csv": text},
    ))


@procurement.command("attach")
@click.argument("request_id")
@click.option("--vendor", "vendor_id", required=True)
@click.option("--lines-file", "path", type=click.Path(exists=True), required=True,
              help="JSON array of quotation lines")
@pass_session
def procurement_attach(session, request_id, vendor_id, path):
    with open(path, "r", encoding="utf-8") as fh:
        lines = json.load(fh)
    session.show(session.call(
        "POST", f"/procurements/{request_id}/quotations", {"vendor_id": vendor_id, "lines": lines}
    ))


@procurement.command("select")
@click.argument("request_id")
@click.option("--vendor", "vendor_id", required=True)
@click.option("--justification", default="")
@pass_session
def procurement_select(session, request_id, vendor_id, justification):
    session.show(session.call(
        "POST", f"/procurements/{request_id}/select",
        {"vendor_id": vendor_id, "justification": justification},
    ))


@procurement.command("approve")
@click.argument("request_id")
@click.option("--role", required=True)
@click.option("--approver", required=True)
@click.option("--status", type=click.Choice(["Approved", "NotApproved"]), default="Approved")
@click.option("--reason", default="")
@click.option("--date", default=None)
@pass_session
def procurement_approve(session, request_id, role, approver, status, reason, date):
    session.show(session.call(
        "POST", f"/procurements/{request_id}/approvals",
        {"role": role, "approver_name": approver, "status": status, "reason": reason, "date": date},
    ))


@procurement.command("close-lop")
@click.argument("request_id")
@pass_session
def procurement_close_lop(session, request_id):
    session.show(session.call("POST", f"/procurements/{request_id}/close-lop", {}))


@procurement.command("notify-vendor")
@click.argument("request_id")
@pass_session
def procurement_notify(session, request_id):
    session.show(session.call("POST", f"/procurements/{request_id}/notify-vendor", {}))


@procurement.command("ack")
@click.argument("request_id")
@click.option("--message", default="")
@pass_session
def procurement_ack(session, request_id, message):
    session.show(session.call("POST", f"/procurements/{request_id}/vendor-ack", {"message": message}))


# -------------------------------------------------------------------- asset

@main.group()
def asset():
    """Asset registry and server documentation."""


@asset.command("register")
@click.option("--device", required=True)
@click.option("--category", required=True)
@click.option("--vendor", "vendor_id", default="")
@click.option("--location", default="")
@click.option("--purchase-date", required=True)
@click.option("--warranty-months", type=int, required=True)
@pass_session
def asset_register(session, device, category, vendor_id, location, purchase_date, warranty_months):
    session.show(session.call("POST", "/assets", {
        "device": device, "category": category, "vendor_id": vendor_id, "location": location,
        "purchase_date": purchase_date, "warranty_months": warranty_months,
    }))


@asset.command("list")
@pass_session
def asset_list(session):
    session.show(session.call("GET", "/assets"))


@asset.command("show")
@click.argument("tag")
@pass_session
def asset_show(session, tag):
    session.show(session.call("GET", f"/assets/{tag}"))


@asset.command("warranty")
@click.argument("tag")
@click.option("--on", "on_date", required=True)
@pass_session
def asset_warranty(session, tag, on_date):
    session.show(session.call("GET", f"/assets/{tag}/warranty", params={"on": on_date}))


@asset.command("retire")
@click.argument("tag")
@pass_session
def asset_retire(session, tag):
    session.show(session.call("POST", f"/assets/{tag}/retire", {}))


@asset.command("server-doc")
@click.argument("tag")
@click.option("--file", "path", type=click.Path(exists=True), required=True,
              help="JSON document with the server-doc fields")
@pass_session
def asset_server_doc(session, tag, path):
    with open(path, "r", encoding="utf-8") as fh:
        doc = json.load(fh)
    session.show(session.call("POST", f"/assets/{tag}/server-docs", doc))


@asset.command("server-docs")
@click.argument("tag")
@pass_session
def asset_server_docs(session, tag):
    session.show(session.call("GET", f"/assets/{tag}/server-docs"))


@asset.command("export")
@pass_session
def asset_export(session):
    session.show(session.call("GET", "/assets/export.csv"))


# ------------------------------------------------------------------ license

@main.group("license")
def license_group():
    """License pools and allocations."""


@license_group.command("create")
@click.option("--product", required=True)
@click.option("--total", type=int, required=True)
@pass_session
def license_create(session, product, total):
    session.show(session.call("POST", "/licenses", {"product": product, "total": total}))


@license_group.command("allocate")
@click.argument("product")
@click.option("--user", required=True)
@click.option("--asset", "asset_tag", required=True)
@pass_session
def license_allocate(session, product, user, asset_tag):
    session.show(session.call(
        "POST", f"/licenses/{product}/allocations", {"user": user, "asset_tag": asset_tag}
    ))


@license_group.command("release")
@click.argument("product")
@click.option("--user", required=True)
@click.option("--asset", "asset_tag", required=True)
@pass_session
def license_release(session, product, user, asset_tag):
    session.show(session.call(
        "POST", f"/licenses/{product}/release", {"user": user, "asset_tag": asset_tag}
    ))


@license_group.command("list")
@pass_session
def license_list(session):
    session.show(session.call("GET", "/licenses"))


@license_group.command("show")
@click.argument("product")
@pass_session
def license_show(session, product):
    session.show(session.call("GET", f"/licenses/{product}"))


@license_group.command("export")
@pass_session
def license_export(session):
    session.show(session.call("GET", "/licenses/export.csv"))


# --------------------------------------------------------------------- port

@main.group()
def port():
    """Data and voice port records."""


@port.command("register")
@click.option("--id", "port_id", required=True)
@click.option("--kind", type=click.Choice(["Data", "Voice"]), required=True)
@click.option("--location", default="")
@click.option("--notes", default="")
@pass_session
def port_register(session, port_id, kind, location, notes):
    session.show(session.call("POST", "/ports", {
        "port_id": port_id, "kind": kind, "location": location, "notes": notes,
    }))


@port.command("mark")
@click.argument("port_id")
@click.option("--status", type=click.Choice(["OK", "Faulty"]), required=True)
@click.option("--note", default="")
@pass_session
def port_mark(session, port_id, status, note):
    session.show(session.call("POST", f"/ports/{port_id}/status", {"status": status, "note": note}))


@port.command("list")
@pass_session
def port_list(session):
    session.show(session.call("GET", "/ports"))


# -------------------------------------------------------------------- power

@main.group()
def power():
    """Power-load plans (allocation is double the measured load)."""


@power.command("plan")
@click.option("--room", required=True)
@click.option("--load", "measured", type=float, required=True)
@pass_session
def power_plan(session, room, measured):
    session.show(session.call("POST", "/power-plans", {"room": room, "measured_avg_load": measured}))


@power.command("approve")
@click.argument("room")
@pass_session
def power_approve(session, room):
    session.show(session.call("POST", f"/power-plans/{room}/approve", {}))


@power.command("list")
@pass_session
def power_list(session):
    session.show(session.call("GET", "/power-plans"))


# ------------------------------------------------------------------- change

@main.group()
def change():
    """Change requests through CAB, scheduling, test and release."""


@change.command("submit")
@click.option("--project", "project_id", required=True)
@click.option("--target", required=True)
@click.option("--kind", type=click.Choice(["Software", "Hardware"]), default="Software")
@click.option("--priority", type=click.Choice(["Normal", "Emergency"]), default="Normal")
@click.option("--downtime", "downtime_estimate_minutes", type=int, required=True)
@click.option("--risk", "risk_note", required=True)
@click.option("--alternate", "alternate_solution", required=True)
@click.option("--roi", "roi_justification", required=True)
@click.option("--department", "departments", multiple=True, required=True)
@click.option("--vendor", "vendor_id", default=None)
@pass_session
def change_submit(session, project_id, target, kind, priority, downtime_estimate_minutes,
                  risk_note, alternate_solution, roi_justification, departments, vendor_id):
    session.show(session.call("POST", "/changes", {
        "project_id": project_id, "target": target, "kind": kind, "priority": priority,
        "downtime_estimate_minutes": downtime_estimate_minutes, "risk_note": risk_note,
        "alternate_solution": alternate_solution, "roi_justification": roi_justification,
        "affected_departments": list(departments), "vendor_id": vendor_id,
    }))


@change.command("cab")
@click.argument("change_id")
@click.option("--approve/--reject", default=True)
@click.option("--signoff", required=True)
@click.option("--reason", default="")
@pass_session
def change_cab(session, change_id, approve, signoff, reason):
    session.show(session.call("POST", f"/changes/{change_id}/cab", {
        "approve": approve, "head_signoff": signoff, "reason": reason,
    }))


@change.command("schedule")
@click.argument("change_id")
@click.option("--at", "when", required=True, help="ISO timestamp of the change window")
@click.option("--now", default=None, help="reference time for the notice window")
@pass_session
def change_schedule(session, change_id, when, now):
    session.show(session.call("POST", f"/changes/{change_id}/schedule", {"when": when, "now": now}))


@change.command("test-run")
@click.argument("change_id")
@click.option("--dummy-input", required=True)
@click.option("--outcome", type=click.Choice(["Pass", "Fail"]), required=True)
@click.option("--at", default=None)
@click.option("--tester", default="")
@pass_session
def change_test_run(session, change_id, dummy_input, outcome, at, tester):
    session.show(session.call("POST", f"/changes/{change_id}/test-runs", {
        "dummy_input": dummy_input, "outcome": outcome, "at": at, "tester": tester,
    }))


@change.command("release")
@click.argument("change_id")
@click.option("--approver", required=True)
@click.option("--at", default=None)
@pass_session
def change_release(session, change_id, approver, at):
    session.show(session.call("POST", f"/changes/{change_id}/release", {"approver": approver, "at": at}))


@change.command("list")
@pass_session
def change_list(session):
    session.show(session.call("GET", "/changes"))


@change.command("show")
@click.argument("change_id")
@pass_session
def change_show(session, change_id):
    session.show(session.call("GET", f"/changes/{change_id}"))


@change.command("digest")
@click.option("--project", "project_id", required=True)
@click.option("--quarter", required=True)
@click.option("--text", is_flag=True)
@pass_session
def change_digest(session, project_id, quarter, text):
    params = {"project_id": project_id, "quarter": quarter}
    if text:
        params["format"] = "text"
    session.show(session.call("GET", "/changes/digest", params=params))


# ------------------------------------------------------------------- ticket

@main.group()
def ticket():
    """Incident tickets with escalation."""


@ticket.command("open")
@click.option("--category", type=click.Choice(["Application", "Hardware", "application", "hardware"]),
              required=True)
@click.option("--issue", required=True)
@click.option("--username", required=True)
@click.option("--asset", "asset_tag", required=True)
@click.option("--risk", "risk_level", type=click.Choice(["Low", "Medium", "High", "Critical"]),
              default="Medium")
@click.option("--scope", type=click.Choice(["SingleUser", "Department"]), default="SingleUser")
@click.option("--department", default=None)
@pass_session
def ticket_open(session, category, issue, username, asset_tag, risk_level, scope, department):
    data = session.call("POST", "/tickets", {
        "category": category.capitalize(), "issue": issue, "username": username,
        "asset_tag": asset_tag, "risk_level": risk_level, "scope": scope, "department": department,
    })
    if session.as_json:
        session.show(data)
    else:
        click.echo(data["id"])


@ticket.command("analyze")
@click.argument("ticket_id")
@click.option("--root-cause", default=None)
@pass_session
def ticket_analyze(session, ticket_id, root_cause):
    session.show(session.call("POST", f"/tickets/{ticket_id}/analyze", {"root_cause": root_cause}))


@ticket.command("attempt")
@click.argument("ticket_id")
@click.option("--text", required=True)
@pass_session
def ticket_attempt(session, ticket_id, text):
    session.show(session.call("POST", f"/tickets/{ticket_id}/attempts", {"text": text}))


@ticket.command("resolve")
@click.argument("ticket_id")
@click.option("--resolution", required=True)
@click.option("--permanence", type=click.Choice(["Permanent", "Temporary"]), required=True)
@click.option("--at", default=None)
@pass_session
def ticket_resolve(session, ticket_id, resolution, permanence, at):
    session.show(session.call("POST", f"/tickets/{ticket_id}/resolve", {
        "resolution": resolution, "permanence": permanence, "at": at,
    }))


@ticket.command("escalate")
@click.argument("ticket_id")
@click.option("--to-level", type=click.Choice(["L2", "L3", "Expert"]), required=True)
@click.option("--reason", required=True)
@click.option("--at", default=None)
@pass_session
def ticket_escalate(session, ticket_id, to_level, reason, at):
    session.show(session.call("POST", f"/tickets/{ticket_id}/escalate", {
        "to_level": to_level, "reason": reason, "at": at,
    }))


@ticket.command("close")
@click.argument("ticket_id")
@click.option("--kind", "closure_kind", type=click.Choice(["Solved", "ProcurementApproved"]),
              default="Solved")
@click.option("--approval-ref", default=None)
@click.option("--at", default=None)
@pass_session
def ticket_close(session, ticket_id, closure_kind, approval_ref, at):
    session.show(session.call("POST", f"/tickets/{ticket_id}/close", {
        "closure_kind": closure_kind, "approval_ref": approval_ref, "at": at,
    }))


@ticket.command("list")
@click.option("--state", default=None)
@click.option("--queue", default=None, help="'priority' for the routed queue")
@pass_session
def ticket_list(session, state, queue):
    params = {}
    if state:
        params["state"] = state
    if queue:
        params["queue"] = queue
    session.show(session.call("GET", "/tickets", params=params))


@ticket.command("show")
@click.argument("ticket_id")
@pass_session
def ticket_show(session, ticket_id):
    session.show(session.call("GET", f"/tickets/{ticket_id}"))


@ticket.command("breaches")
@click.option("--now", default=None)
@pass_session
def ticket_breaches(session, now):
    params = {"now": now} if now else {}
    session.show(session.call("GET", "/tickets/breaches", params=params))


@ticket.command("export")
@pass_session
def ticket_export(session):
    session.show(session.call("GET", "/tickets/export.csv"))


# ------------------------------------------------------------------- outage

@main.group()
def outage():
    """Outage register and user notification."""


@outage.command("contacts")
@click.option("--service", required=True)
@click.option("--users", required=True, help="comma-separated contact points")
@pass_session
def outage_contacts(session, service, users):
    values = [u.strip() for u in users.split(",") if u.strip()]
    session.show(session.call("POST", "/outages/contacts", {"service": service, "users": values}))


@outage.command("open")
@click.option("--service", required=True)
@click.option("--start", default=None)
@click.option("--alternate", "alternate_endpoint", default=None)
@pass_session
def outage_open(session, service, start, alternate_endpoint):
    session.show(session.call("POST", "/outages", {
        "service": service, "start": start, "alternate_endpoint": alternate_endpoint,
    }))


@outage.command("close")
@click.argument("service")
@click.option("--end", default=None)
@click.option("--now", default=None)
@pass_session
def outage_close(session, service, end, now):
    session.show(session.call("POST", f"/outages/{service}/close", {"end": end, "now": now}))


@outage.command("list")
@pass_session
def outage_list(session):
    session.show(session.call("GET", "/outages"))


# ------------------------------------------------------------ notifications

@main.group()
def notification():
    """Emitted notifications."""


@notification.command("list")
@click.option("--kind", default=None)
@click.option("--entity", "entity_id", default=None)
@pass_session
def notification_list(session, kind, entity_id):
    params = {}
    if kind:
        params["kind"] = kind
    if entity_id:
        params["entity_id"] = entity_id
    session.show(session.call("GET", "/notifications", params=params))


@main.group()
def events():
    """Audit event feed."""


@events.command("list")
@click.option("--since-seq", type=int, default=0)
@click.option("--limit", type=int, default=None)
@pass_session
def events_list(session, since_seq, limit):
    params = {"since_seq": since_seq}
    if limit is not None:
        params["limit"] = limit
    session.show(session.call("GET", "/events", params=params))


# --------------------------------------------------------------------- seed

@main.command()
@click.argument("fixture_file", type=click.Path(exists=True), required=False)
@click.option("--dump", is_flag=True, help="print the built-in demo fixture instead of running it")
@pass_session
def seed(session, fixture_file, dump):
    """Populate an empty server from a fixture (JSON array of API calls)."""
    from .fixtures import build_demo_fixture

    if fixture_file:
        with open(fixture_file, "r", encoding="utf-8") as fh:
            calls = json.load(fh)
    else:
        calls = build_demo_fixture()
    if dump:
        click.echo(json.dumps(calls, indent=2))
        return
    existing = session.call("GET", "/events", params={"limit": 1})
    if existing:
        click.echo("refusing to seed: the store is not empty", err=True)
        sys.exit(4)
    for call in calls:
        session.call(call["method"], call["path"], call.get("body"))
    click.echo(f"seeded {len(calls)} API calls")


# -------------------------------------------------------------------- serve

@main.command()
@click.option("--config", "config_path", type=click.Path(), default=None)
@pass_session
def serve(session, config_path):
    """Run the API server (config file + env overrides)."""
    import uvicorn

    from .api import create_app
    from .config import ConfigError, load_config

    try:
        config = load_config(config_path)
    except ConfigError as exc:
        click.echo(f"invalid configuration: {exc}", err=True)
        sys.exit(1)
    host, _, port = config.listen.rpartition(":")
    app = create_app(config)
    uvicorn.run(app, host=host, port=int(port), log_level="info")


if __name__ == "__main__":
    main()
