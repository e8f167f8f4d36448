"""Deterministic demo dataset, expressed as a JSON array of API calls.

One project walks all five phases, 50 tickets land across the four 2016
quarters (all resolved or closed), one vendor gets a full survey year and a
renewal evaluation. Entity ids are deterministic, so the fixture can refer
to them literally.
"""

from __future__ import annotations

PROJECT = "PRJ000001"
VENDOR = "VND000001"
VENDOR2 = "VND000002"
REQUEST = "PRQ000001"
CHANGE = "CHG000001"
CHANGE2 = "CHG000002"

_Q_MONTHS = {1: "01", 2: "04", 3: "07", 4: "10"}
_RISKS = ["Low", "Medium", "High", "Critical"]
_DEPTS = ["Sales", "HR", "Finance", "Operations"]


def _call(method: str, path: str, body: dict | None = None) -> dict:
    call = {"method": method, "path": path}
    if body is not None:
        call["body"] = body
    return call


def _ts(month: str, day: int, hour: int = 9, minute: int = 0) -> str:
    return f"2016-{month}-{day:02d}T{hour:02d}:{minute:02d}:00+00:00"


def _line(serial: int, device: str, device_type: str, qty: int, price: int) -> dict:
    return {
        "serial": serial, "device": device, "device_type": device_type, "manufacturer": "HP",
        "purpose": "HQ rollout", "warranty_months": 36, "vendor_contact": "044-2611",
        "location": "HQ", "quantity": qty, "unit_price": price, "quotation_person": "S. Kumar",
    }


def _evidence(phase: str, kind: str, day: int, month: str = "01") -> dict:
    return _call(
        "POST",
        f"/projects/{PROJECT}/evidence",
        {"phase": phase, "kind": kind, "doc_ref": f"doc-{phase}-{kind}", "ts": _ts(month, day)},
    )


def _tickets() -> list[dict]:
    calls: list[dict] = []
    counters = {"Application": 0, "Hardware": 0}
    prefix = {"Application": "apl", "Hardware": "hrd"}
    per_quarter = {1: 13, 2: 13, 3: 12, 4: 12}
    n = 0
    for quarter, count in per_quarter.items():
        month = _Q_MONTHS[quarter]
        for i in range(count):
            n += 1
            category = "Application" if n % 2 == 0 else "Hardware"
            counters[category] += 1
            tid = f"{prefix[category]}{counters[category]:06d}"
            risk = _RISKS[n % 4]
            department_scoped = n % 5 == 0
            asset_tag = f"AST{(n % 3) + 1:06d}"
            opened = _ts(month, 5 + (i % 20), 9)
            calls.append(_call("POST", "/tickets", {
                "category": category,
                "issue": f"{'login failure' if category == 'Application' else 'hardware fault'} case {n}",
                "username": f"user{n:02d}",
                "asset_tag": asset_tag,
                "risk_level": risk,
                "scope": "Department" if department_scoped else "SingleUser",
                "department": _DEPTS[n % 4] if department_scoped else None,
                "ts": opened,
            }))
            calls.append(_call("POST", f"/tickets/{tid}/analyze", {
                "root_cause": f"root cause {n}" if n % 3 == 0 else None,
                "ts": _ts(month, 5 + (i % 20), 9, 10),
            }))
            expert_case = risk == "Critical" and n == 15
            if n % 10 == 0 or expert_case:
                calls.append(_call("POST", f"/tickets/{tid}/escalate", {
                    "to_level": "Expert" if expert_case else "L2",
                    "reason": "needs a senior engineer",
                    "at": _ts(month, 5 + (i % 20), 9, 30),
                    "ts": _ts(month, 5 + (i % 20), 9, 30),
                }))
            if n % 17 == 0:
                # closed through the procurement-approval path, never resolved
                calls.append(_call("POST", f"/tickets/{tid}/close", {
                    "closure_kind": "ProcurementApproved",
                    "approval_ref": REQUEST,
                    "at": _ts(month, 6 + (i % 20), 15),
                    "ts": _ts(month, 6 + (i % 20), 15),
                }))
                continue
            calls.append(_call("POST", f"/tickets/{tid}/resolve", {
                "resolution": f"applied fix {n}",
                "permanence": "Permanent" if n % 3 else "Temporary",
                "at": _ts(month, 5 + (i % 20), 10 + (n % 3)),
                "ts": _ts(month, 5 + (i % 20), 10 + (n % 3)),
            }))
            if n % 2 == 0:
                calls.append(_call("POST", f"/tickets/{tid}/close", {
                    "closure_kind": "Solved",
                    "at": _ts(month, 5 + (i % 20), 14),
                    "ts": _ts(month, 5 + (i % 20), 14),
                }))
    return calls


def _outages() -> list[dict]:
    calls = [_call("POST", "/outages/contacts", {
        "service": "netbanking", "users": ["+91-98-40-1", "+91-98-40-2"], "ts": _ts("01", 2),
    })]
    for quarter in (1, 2, 3, 4):
        month = _Q_MONTHS[quarter]
        start = _ts(month, 12, 22, 0)
        end = _ts(month, 12, 22, 40)
        late_by = 20 if quarter == 3 else 5  # Q3's restoration notice goes out late
        notice_minute = 40 + late_by
        notified = _ts(month, 12, 22 + notice_minute // 60, notice_minute % 60)
        calls.append(_call("POST", "/outages", {
            "service": "netbanking", "start": start,
            "alternate_endpoint": "alt.netbanking.example" if quarter % 2 else None,
            "ts": start,
        }))
        calls.append(_call("POST", "/outages/netbanking/close", {
            "end": end, "now": notified, "ts": notified,
        }))
    return calls


def build_demo_fixture() -> list[dict]:
    calls: list[dict] = []
    calls.append(_call("POST", "/vendors", {
        "name": "TechCorp Systems", "contact": "044-2611-9000",
        "authorized_for": ["Servers", "Storage", "Laptops", "NetworkingDevice"],
        "ts": _ts("01", 4),
    }))
    calls.append(_call("POST", "/vendors", {
        "name": "OfficeSupply Co", "contact": "044-2611-9001",
        "authorized_for": ["Desktops", "Laptops", "NetworkingDevice"],
        "ts": _ts("01", 4),
    }))
    calls.append(_call("POST", "/projects", {
        "name": "HQ-Rollout", "organization": "Acme Industries", "ts": _ts("01", 4),
    }))

    # Strategy: requirement -> quotations -> selection -> four approvals -> LOP
    calls.append(_call("POST", "/procurements", {
        "project_id": PROJECT, "requirement_doc": "requirement-details.xls", "ts": _ts("01", 5),
    }))
    calls.append(_call("POST", f"/procurements/{REQUEST}/quotations", {
        "vendor_id": VENDOR,
        "lines": [_line(1, "HP Proliant DL 380 G5", "Servers", 2, 45000000),
                  _line(2, "ThinkPad T460", "Laptops", 40, 6500000)],
        "ts": _ts("01", 6),
    }))
    calls.append(_call("POST", f"/procurements/{REQUEST}/quotations", {
        "vendor_id": VENDOR2,
        "lines": [_line(1, "Latitude laptops", "Laptops", 40, 6900000)],
        "ts": _ts("01", 7),
    }))
    calls.append(_call("POST", f"/procurements/{REQUEST}/select", {
        "vendor_id": VENDOR, "justification": "authorized for all categories, lowest total",
        "ts": _ts("01", 8),
    }))
    for role, name in [("IT", "I. Menon"), ("ProjectManagement", "P. Rao"),
                       ("Operations", "O. Das"), ("FinanceHead", "F. Iyer")]:
        calls.append(_call("POST", f"/procurements/{REQUEST}/approvals", {
            "role": role, "approver_name": name, "status": "Approved", "date": "2016-01-09",
            "ts": _ts("01", 9),
        }))
    calls.append(_call("POST", f"/procurements/{REQUEST}/close-lop", {"ts": _ts("01", 10)}))
    calls.append(_call("POST", f"/procurements/{REQUEST}/vendor-ack", {
        "message": "All has been seen by the vendor", "ts": _ts("01", 11),
    }))
    calls.append(_evidence("Strategy", "RequirementDoc", 5))
    calls.append(_evidence("Strategy", "ManagementApproval", 9))
    calls.append(_call("POST", f"/projects/{PROJECT}/gates/Strategy/close", {"ts": _ts("01", 12)}))
    calls.append(_call("POST", f"/projects/{PROJECT}/advance", {"ts": _ts("01", 12)}))

    # Design: assets, ports, power plan, design documents
    for device, category in [("HP Proliant DL 380 G5", "Servers"),
                             ("HP StorageWorks", "Storage"),
                             ("ThinkPad T460", "Laptops")]:
        calls.append(_call("POST", "/assets", {
            "device": device, "category": category, "vendor_id": VENDOR, "location": "HQ",
            "purchase_date": "2016-01-10", "warranty_months": 36, "ts": _ts("01", 13),
        }))
    for i, kind in enumerate(["Data", "Data", "Voice", "Data"], start=1):
        calls.append(_call("POST", "/ports", {
            "port_id": f"{'D' if kind == 'Data' else 'V'}-{i:03d}", "kind": kind,
            "location": "Conf room" if i == 1 else "HQ floor 1", "ts": _ts("01", 14),
        }))
    calls.append(_call("POST", "/power-plans", {
        "room": "Server room", "measured_avg_load": 3.5, "ts": _ts("01", 15),
    }))
    calls.append(_call("POST", "/power-plans/Server room/approve", {"ts": _ts("01", 16)}))
    for kind in ["DesignDoc", "LoadPlan", "PortMap", "ManagementApproval"]:
        calls.append(_evidence("Design", kind, 17))
    calls.append(_call("POST", f"/projects/{PROJECT}/gates/Design/close", {"ts": _ts("01", 18)}))
    calls.append(_call("POST", f"/projects/{PROJECT}/advance", {"ts": _ts("01", 18)}))

    # Transition: one change through the full flow, one rejected
    calls.append(_call("POST", "/changes", {
        "project_id": PROJECT, "target": "payroll-app", "kind": "Software", "priority": "Normal",
        "downtime_estimate_minutes": 45,
        "risk_note": "payroll data at risk during cut-over; records are confidential",
        "alternate_solution": "fall back to the legacy payroll sheet",
        "roi_justification": "closes payroll two days faster each month",
        "affected_departments": ["HR", "Finance"], "vendor_id": VENDOR, "ts": _ts("01", 19),
    }))
    calls.append(_call("POST", f"/changes/{CHANGE}/cab", {
        "approve": True, "head_signoff": "C. Advisory", "ts": _ts("01", 20),
    }))
    calls.append(_call("POST", f"/changes/{CHANGE}/schedule", {
        "when": _ts("01", 25, 22), "now": _ts("01", 20, 10), "ts": _ts("01", 20, 10),
    }))
    calls.append(_call("POST", f"/changes/{CHANGE}/test-runs", {
        "dummy_input": "dummy payroll row 001", "outcome": "Fail", "tester": "qa-1",
        "at": _ts("01", 25, 23), "ts": _ts("01", 25, 23),
    }))
    calls.append(_call("POST", f"/changes/{CHANGE}/test-runs", {
        "dummy_input": "dummy payroll row 002", "outcome": "Pass", "tester": "qa-1",
        "at": _ts("01", 26, 0), "ts": _ts("01", 26, 0),
    }))
    calls.append(_call("POST", f"/changes/{CHANGE}/release", {
        "approver": "O. Das", "at": _ts("01", 26, 2), "ts": _ts("01", 26, 2),
    }))
    calls.append(_call("POST", "/changes", {
        "project_id": PROJECT, "target": "crm-app", "kind": "Software", "priority": "Normal",
        "downtime_estimate_minutes": 120,
        "risk_note": "customer records exposed during migration",
        "alternate_solution": "none identified yet",
        "roi_justification": "unclear",
        "affected_departments": ["Sales"], "vendor_id": VENDOR2, "ts": _ts("01", 21),
    }))
    calls.append(_call("POST", f"/changes/{CHANGE2}/cab", {
        "approve": False, "head_signoff": "C. Advisory", "reason": "no budget this quarter",
        "ts": _ts("01", 22),
    }))
    calls.append(_evidence("Transition", "ChangeLog", 27))
    calls.append(_evidence("Transition", "TestRunReport", 27))
    calls.append(_call("POST", f"/projects/{PROJECT}/gates/Transition/close", {"ts": _ts("01", 28)}))
    calls.append(_call("POST", f"/projects/{PROJECT}/advance", {"ts": _ts("01", 28)}))

    # Operation: server documentation, licenses, the support handbook
    calls.append(_call("POST", "/assets/AST000001/server-docs", {
        "name": "HP Proliant DL 380 G5 (8 SAS HDD with each 146GB capacity)",
        "configuration": "Xeon processor/ 2.73 GHz/ 8GB RAM",
        "operating_system": "Windows 2003 (R2) server OS",
        "applications": ["ADS(User accounts, group policies)", "DNS", "DHCP", "Print Server"],
        "antivirus": "McAfee 8.5",
        "policies": ["Prevent accessing control panel", "Prevent modifying date and time"],
        "dhcp_range": ["192.160.2.10", "192.160.2.225"],
        "print_servers": ["HP Colour LaserJet 4600n", "HP LaserJet 4100n"],
        "ts": _ts("01", 29),
    }))
    calls.append(_call("POST", "/licenses", {"product": "Windows XP", "total": 1000, "ts": _ts("01", 29)}))
    for i in range(1, 41):
        calls.append(_call("POST", "/licenses/Windows XP/allocations", {
            "user": f"user{i:02d}", "asset_tag": "AST000003", "ts": _ts("01", 29, 10, i),
        }))
    calls.append(_evidence("Operation", "SupportHandbook", 30))
    calls.append(_call("POST", f"/projects/{PROJECT}/gates/Operation/close", {"ts": _ts("02", 1)}))
    calls.append(_call("POST", f"/projects/{PROJECT}/advance", {"ts": _ts("02", 1)}))

    calls.extend(_tickets())
    calls.extend(_outages())

    # quarterly satisfaction surveys plus the year-end consolidation inputs
    for quarter, scores in [(1, [4, 5, 4]), (2, [5, 4]), (3, [4, 4, 5, 3]), (4, [5, 5, 4])]:
        calls.append(_call("POST", f"/vendors/{VENDOR}/surveys", {
            "period": f"2016Q{quarter}", "scores": scores, "ts": _ts(_Q_MONTHS[quarter], 28),
        }))

    # CSI closes on the annual report, then the renewal decision is recorded
    calls.append(_evidence("CSI", "AnnualReport", 30, month="12"))
    calls.append(_call("POST", f"/projects/{PROJECT}/gates/CSI/close", {"ts": _ts("12", 31)}))
    calls.append(_call("POST", f"/vendors/{VENDOR}/renewal-evaluation", {"year": 2016, "ts": _ts("12", 31)}))
    return calls
