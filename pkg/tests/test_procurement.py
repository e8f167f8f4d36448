from dataclasses import fields as dc_fields

import pytest

from itil_forge.errors import NotFound, RuleViolation, StateConflict, ValidationFailed
from itil_forge.notifications import NotificationKind
from itil_forge.procurement import (
    CSV_HEADER,
    FIELD_COLUMNS,
    QuotationLine,
    parse_quotation_csv,
    render_quotation_csv,
)

from conftest import T0, at


def make_line(serial=1, device="Switch 24p", device_type="NetworkingDevice", qty=2, price=150000, **kw):
    from itil_forge.procurement import DeviceCategory

    defaults = dict(
        serial=serial,
        device=device,
        device_type=DeviceCategory(device_type),
        manufacturer="Cisco",
        purpose="Core network",
        warranty_months=24,
        vendor_id="",
        authorized_flag=True,
        vendor_contact="",
        location="HQ floor 2",
        quantity=qty,
        unit_price=price,
        quotation_person="S. Kumar",
    )
    defaults.update(kw)
    return QuotationLine(**defaults)


@pytest.fixture
def second_vendor(engine):
    return engine.register_vendor(
        name="NetSupplies", contact="044-9000",
        authorized_for=["NetworkingDevice", "Desktops"], actor="admin", ts=T0,
    )


@pytest.fixture
def request_(engine, project):
    return engine.submit_requirement(
        project_id=project.id, requirement_doc="req-sheet.xls", actor="admin", ts=at(hours=1)
    )


def test_requirement_needs_strategy_phase(engine, project, request_):
    for kind in engine.config.gate_checklists["Strategy"]:
        engine.submit_evidence(
            project_id=project.id, phase="Strategy", kind=kind, doc_ref=f"doc-{kind}",
            actor="admin", ts=at(hours=2),
        )
    engine.close_gate(project_id=project.id, phase="Strategy", actor="admin", ts=at(hours=3))
    engine.advance_phase(project_id=project.id, actor="admin", ts=at(hours=4))
    with pytest.raises(RuleViolation):
        engine.submit_requirement(
            project_id=project.id, requirement_doc="late.xls", actor="admin", ts=at(hours=5)
        )


def test_requirement_needs_doc_ref(engine, project):
    with pytest.raises(ValidationFailed):
        engine.submit_requirement(project_id=project.id, requirement_doc="  ", actor="admin", ts=at(hours=1))


def test_attach_quotation_stores_lines_and_notifies_vendor(engine, vendor, request_):
    engine.attach_quotation(
        request_id=request_.id, vendor_id=vendor.id,
        lines=[make_line(), make_line(serial=2, device="Laptop T460", device_type="Laptops", qty=10, price=6500000)],
        actor="admin", ts=at(hours=2),
    )
    req = engine.get_procurement(request_.id)
    assert len(req.quotations) == 1
    assert len(req.quotations[0].lines) == 2
    assert all(line.vendor_id == vendor.id for line in req.quotations[0].lines)
    kinds = [n.kind for n in engine.state.notifications.values()]
    assert kinds.count(NotificationKind.QuotationReceived) == 1


def test_unauthorized_category_names_the_category(engine, second_vendor, request_):
    with pytest.raises(RuleViolation) as err:
        engine.attach_quotation(
            request_id=request_.id, vendor_id=second_vendor.id,
            lines=[make_line(device="Blade server", device_type="Servers")],
            actor="admin", ts=at(hours=2),
        )
    assert err.value.details["category"] == "Servers"


def test_empty_line_list_rejected(engine, vendor, request_):
    with pytest.raises(ValidationFailed):
        engine.attach_quotation(request_id=request_.id, vendor_id=vendor.id, lines=[], actor="admin", ts=at(hours=2))


def quotation_total(quotation):
    # direct-summation oracle
    total = 0
    for line in quotation.lines:
        total += line.quantity * line.unit_price
    return total


def test_select_lowest_total_of_three(engine, vendor, second_vendor, request_):
    third = engine.register_vendor(
        name="CheapNet", contact="044-1111", authorized_for=["NetworkingDevice"], actor="admin", ts=T0
    )
    engine.attach_quotation(
        request_id=request_.id, vendor_id=vendor.id,
        lines=[make_line(qty=3, price=200000)], actor="admin", ts=at(hours=2),
    )
    engine.attach_quotation(
        request_id=request_.id, vendor_id=second_vendor.id,
        lines=[make_line(qty=3, price=180000)], actor="admin", ts=at(hours=3),
    )
    engine.attach_quotation(
        request_id=request_.id, vendor_id=third.id,
        lines=[make_line(qty=3, price=170000), make_line(serial=2, qty=1, price=5000)],
        actor="admin", ts=at(hours=4),
    )
    req = engine.get_procurement(request_.id)
    totals = {q.vendor_id: quotation_total(q) for q in req.quotations}
    assert totals == {vendor.id: 600000, second_vendor.id: 540000, third.id: 515000}
    cheapest = min(totals, key=totals.get)
    assert cheapest == third.id
    engine.select_vendor(
        request_id=request_.id, vendor_id=cheapest, justification="lowest total", actor="admin", ts=at(hours=5)
    )
    assert engine.get_procurement(request_.id).selected_vendor == third.id


def test_single_quotation_is_insufficient_competition(engine, vendor, request_):
    engine.attach_quotation(
        request_id=request_.id, vendor_id=vendor.id, lines=[make_line()], actor="admin", ts=at(hours=2)
    )
    with pytest.raises(RuleViolation) as err:
        engine.select_vendor(
            request_id=request_.id, vendor_id=vendor.id, justification="only one", actor="admin", ts=at(hours=3)
        )
    assert err.value.code == "insufficient-competition"


def test_select_requires_vendor_with_quotation(engine, vendor, second_vendor, request_):
    engine.attach_quotation(
        request_id=request_.id, vendor_id=vendor.id, lines=[make_line()], actor="admin", ts=at(hours=2)
    )
    engine.attach_quotation(
        request_id=request_.id, vendor_id=second_vendor.id, lines=[make_line()], actor="admin", ts=at(hours=3)
    )
    with pytest.raises(ValidationFailed):
        engine.select_vendor(
            request_id=request_.id, vendor_id="VND999999", justification="?", actor="admin", ts=at(hours=4)
        )


@pytest.fixture
def selected(engine, vendor, second_vendor, request_):
    engine.attach_quotation(
        request_id=request_.id, vendor_id=vendor.id, lines=[make_line()], actor="admin", ts=at(hours=2)
    )
    engine.attach_quotation(
        request_id=request_.id, vendor_id=second_vendor.id, lines=[make_line(price=140000)],
        actor="admin", ts=at(hours=3),
    )
    engine.select_vendor(
        request_id=request_.id, vendor_id=second_vendor.id, justification="lowest", actor="admin", ts=at(hours=4)
    )
    return engine.get_procurement(request_.id)


def approve_all(engine, request_id, when):
    for role, name in [
        ("IT", "Ira"), ("ProjectManagement", "Pam"), ("Operations", "Omar"), ("FinanceHead", "Fay"),
    ]:
        engine.record_approval(
            request_id=request_id, role=role, approver_name=name, status="Approved", actor=name, ts=when
        )


def test_four_approvals_make_overall_approved(engine, selected):
    approve_all(engine, selected.id, at(hours=5))
    assert engine.get_procurement(selected.id).overall_status() == "Approved"


def test_finance_rejection_makes_overall_not_approved(engine, selected):
    engine.record_approval(
        request_id=selected.id, role="FinanceHead", approver_name="Fay", status="NotApproved",
        reason="over budget", actor="Fay", ts=at(hours=5),
    )
    assert engine.get_procurement(selected.id).overall_status() == "NotApproved"


def test_duplicate_role_decision_rejected(engine, selected):
    engine.record_approval(
        request_id=selected.id, role="IT", approver_name="Ira", status="Approved", actor="Ira", ts=at(hours=5)
    )
    with pytest.raises(StateConflict):
        engine.record_approval(
            request_id=selected.id, role="IT", approver_name="Ira", status="Approved", actor="Ira", ts=at(hours=6)
        )


def test_not_approved_needs_reason(engine, selected):
    with pytest.raises(ValidationFailed):
        engine.record_approval(
            request_id=selected.id, role="IT", approver_name="Ira", status="NotApproved",
            reason="", actor="Ira", ts=at(hours=5),
        )


def test_quotations_freeze_once_any_approval_exists(engine, vendor, selected):
    engine.record_approval(
        request_id=selected.id, role="IT", approver_name="Ira", status="Approved", actor="Ira", ts=at(hours=5)
    )
    with pytest.raises(StateConflict) as err:
        engine.attach_quotation(
            request_id=selected.id, vendor_id=vendor.id, lines=[make_line(serial=9)],
            actor="admin", ts=at(hours=6),
        )
    assert err.value.code == "quotations-frozen"


def test_close_lop_blocked_until_fully_approved(engine, selected):
    for role, name in [("IT", "Ira"), ("ProjectManagement", "Pam"), ("Operations", "Omar")]:
        engine.record_approval(
            request_id=selected.id, role=role, approver_name=name, status="Approved", actor=name, ts=at(hours=5)
        )
    with pytest.raises(RuleViolation) as err:
        engine.close_lop(request_id=selected.id, actor="admin", ts=at(hours=6))
    assert err.value.details["missing_roles"] == ["FinanceHead"]


def test_close_lop_emits_strategy_evidence_and_copies(engine, project, selected):
    from itil_forge.lifecycle import Phase

    approve_all(engine, selected.id, at(hours=5))
    engine.close_lop(request_id=selected.id, actor="admin", ts=at(hours=6))
    req = engine.get_procurement(selected.id)
    assert req.lop_closed
    kinds = engine.get_project(project.id).gates[Phase.Strategy].collected_kinds()
    assert "ProcurementClosure" in kinds
    approvals = [n for n in engine.state.notifications.values() if n.kind == NotificationKind.VendorApproval]
    assert len(approvals) == 1
    assert sorted(approvals[0].audience) == ["finance", "management", f"vendor:{req.selected_vendor}"]


def test_close_lop_twice_rejected(engine, selected):
    approve_all(engine, selected.id, at(hours=5))
    engine.close_lop(request_id=selected.id, actor="admin", ts=at(hours=6))
    with pytest.raises(StateConflict):
        engine.close_lop(request_id=selected.id, actor="admin", ts=at(hours=7))


def test_vendor_ack_is_idempotent_and_keeps_first_timestamp(engine, selected):
    approve_all(engine, selected.id, at(hours=5))
    engine.close_lop(request_id=selected.id, actor="admin", ts=at(hours=6))
    ack = engine.record_vendor_ack(
        request_id=selected.id, message="All has been seen", actor="vendor", ts=at(hours=7)
    )
    again = engine.record_vendor_ack(
        request_id=selected.id, message="duplicate", actor="vendor", ts=at(hours=9)
    )
    assert again["at"] == ack["at"]
    assert again["message"] == "All has been seen"


def test_lop_closed_implies_four_approvals(engine, selected):
    approve_all(engine, selected.id, at(hours=5))
    engine.close_lop(request_id=selected.id, actor="admin", ts=at(hours=6))
    req = engine.get_procurement(selected.id)
    approved = [d for d in req.approvals.values() if d.status == "Approved"]
    assert req.lop_closed and len(approved) == 4
    assert {d.role.value for d in approved} == {"IT", "ProjectManagement", "Operations", "FinanceHead"}


# ------------------------------------------------------------------- sheet

def test_quotation_line_fields_mirror_the_sheet_columns():
    field_names = [f.name for f in dc_fields(QuotationLine)]
    assert list(FIELD_COLUMNS) == field_names
    assert list(FIELD_COLUMNS.values()) == CSV_HEADER


def test_csv_header_is_verbatim():
    assert ",".join(CSV_HEADER) == (
        "Sl.,Device,Device Type,Manufacturer,Propose,Warranty,Vendor,Authorized or not,"
        "Vendor contact no,Location,Quantity,Price (in RS),Quotation person"
    )


def test_csv_round_trip():
    lines = [make_line(vendor_id="VND000001", vendor_contact="044-2611"),
             make_line(serial=2, device="Laptop", device_type="Laptops", qty=5, price=6550099,
                       vendor_id="VND000001", vendor_contact="044-2611")]
    text = render_quotation_csv(lines)
    assert text.splitlines()[0] == ",".join(CSV_HEADER)
    parsed = parse_quotation_csv(text)
    assert parsed == lines


def test_csv_rejects_wrong_header():
    with pytest.raises(ValidationFailed) as err:
        parse_quotation_csv("Sl.,Device\n1,Switch\n")
    assert err.value.code == "bad-csv-header"


def test_csv_import_through_engine(engine, vendor, request_):
    text = render_quotation_csv([make_line(vendor_id=vendor.id, vendor_contact="044-2611")])
    engine.import_quotation_csv(
        request_id=request_.id, vendor_id=vendor.id, csv_text=text, actor="admin", ts=at(hours=2)
    )
    assert len(engine.get_procurement(request_.id).quotations) == 1


def test_unknown_vendor_is_not_found(engine, request_):
    with pytest.raises(NotFound):
        engine.attach_quotation(
            request_id=request_.id, vendor_id="VND000099", lines=[make_line()], actor="admin", ts=at(hours=2)
        )
