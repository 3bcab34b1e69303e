"""JSON serialization of proof reports and an offline re-check.

Schema (version 1)::

    {
      "schema": "hlcert.proof-report",
      "schema_version": 1,
      "k": int,
      "verdict": "proven" | "not_proven",
      "facts": [{"name": str, "holds": bool, "kind": "computed" | "derived",
                 "evidence": {...}}, ...],
      "notes": [str, ...],
      "provenance": {"version": str, "python": str, "numpy": str, ...}
    }

Rationals are written as strings ("231/1000") so they round-trip exactly;
every other number is a JSON float.  ``revalidate`` re-derives each
computed fact from the numbers embedded in its evidence, without
re-running any quadrature or optimization.
"""

from __future__ import annotations

import json
import math
from fractions import Fraction

from .certify import ProofReport

SCHEMA = "hlcert.proof-report"
SCHEMA_VERSION = 1


def to_dict(report: ProofReport) -> dict:
    return {
        "schema": SCHEMA,
        "schema_version": SCHEMA_VERSION,
        "k": report.k,
        "verdict": report.verdict,
        "facts": [
            {"name": f.name, "holds": f.holds, "kind": f.kind, "evidence": f.evidence}
            for f in report.facts
        ],
        "notes": list(report.notes),
        "provenance": dict(report.provenance),
    }


def dumps(report: ProofReport | dict) -> str:
    data = report if isinstance(report, dict) else to_dict(report)
    return json.dumps(data, indent=2, sort_keys=True) + "\n"


def loads(text: str) -> dict:
    data = json.loads(text)
    if data.get("schema") != SCHEMA:
        raise ValueError("not a proof report")
    if data.get("schema_version") != SCHEMA_VERSION:
        raise ValueError(f"unsupported schema version {data.get('schema_version')}")
    return data


# -- offline checks -----------------------------------------------------------

def _check_endpoint(ev: dict) -> list[str]:
    errs = []
    quad = ev["h_xx_bound"] / (192 * ev["N"] ** 2)
    if quad > ev["quad_error_per_integral"]:
        errs.append("quadrature error understated")
    total = 2 * (ev["quad_error_per_integral"] + ev["fp_error_per_integral"])
    if not total < ev["threshold"]:
        errs.append("total error not below threshold")
    if not ev["estimate"] - ev["threshold"] > 0:
        errs.append("estimate does not clear threshold")
    if not ev["fp_ledger_margin"] < 1e-4:
        errs.append("rounding error exceeds the relative rule")
    return errs


def _check_budget(ev: dict) -> list[str]:
    errs = []
    total = Fraction(0)
    for row in ev["rows"]:
        j, delta, eta = row["j"], Fraction(row["delta_j"]), Fraction(row["eta_j"])
        if eta != delta * math.factorial(j) * 2**j / 2:
            errs.append(f"row {j}: eta identity broken")
        quad = row["h_xx_bound"] / (192 * row["N_j"] ** 2)
        if quad > row["quad_error"]:
            errs.append(f"row {j}: quadrature error understated")
        if not row["quad_error"] + row["fp_error"] < eta:
            errs.append(f"row {j}: error exceeds eta")
        if not row["fp_ledger_margin"] < 1e-4:
            errs.append(f"row {j}: rounding error exceeds the relative rule")
        total += delta
    rem = Fraction(ev["remainder_delta"])
    if ev["remainder_bound"] > rem:
        errs.append("remainder exceeds its allotment")
    if total + rem != Fraction(ev["total_delta"]):
        errs.append("total delta is not the sum of its parts")
    return errs


def _check_sign(ev: dict) -> list[str]:
    dbar = [Fraction(v) for v in ev["dbar"]]
    n = len(dbar) - 1
    coeffs = [d / math.factorial(j) for j, d in enumerate(dbar)]
    coeffs[0] += Fraction(ev["total_delta"])
    x = Fraction(-1, 2)
    ok = True
    for i in range(max(n - 2, 0)):
        v = sum(coeffs[l] * math.perm(l, i) * x ** (l - i) for l in range(i, n + 1))
        ok &= v < 0
    if n >= 2:
        c2 = dbar[n] / 2
        disc = dbar[n - 1] ** 2 - 4 * (dbar[n - 2] + (Fraction(ev["total_delta"]) if n == 2 else 0)) * c2
        ok &= c2 < 0 and disc < 0
    else:
        ok &= all(sum(c * y**l for l, c in enumerate(coeffs)) < 0 for y in (x, -x))
    claimed = ev["verdict"] == "negative_on_interval"
    return [] if ok == claimed else ["sign chain does not match the claimed verdict"]


def _check_parseval(ev: dict) -> list[str]:
    return [] if ev["plus"] == ev["minus"] else ["means differ"]


def _check_k0(ev: dict) -> list[str]:
    errs = []
    for s in ev["samples"]:
        p, f0, fh = s["p"], s["f0"], s["f_half"]
        if p == 2:
            good = abs(f0 - fh) < 1e-9
        elif p > 2:
            good = f0 > fh and s["max_dphi_dy"] < 0
        else:
            good = fh > f0 and s["min_dphi_dy"] > 0
        if not good:
            errs.append(f"p={p}: ordering or derivative sign fails")
    return errs


def _check_fact(fact: dict) -> list[str]:
    ev = fact["evidence"]
    if "estimate" in ev and "threshold" in ev:
        return _check_endpoint(ev)
    if "rows" in ev:
        return _check_budget(ev)
    if "dbar" in ev:
        return _check_sign(ev)
    if "plus" in ev and "degree" in ev:
        return _check_parseval(ev)
    if "samples" in ev:
        return _check_k0(ev)
    if fact["kind"] == "derived" or fact["name"].startswith("certified constants"):
        return []
    return ["unrecognized fact"]


def revalidate(data: dict) -> dict[str, list[str]]:
    """Problems found per fact; an empty dict means the report re-checks.

    A fact that claims to hold but fails the arithmetic is reported, as is
    a verdict that disagrees with the facts.
    """
    problems: dict[str, list[str]] = {}
    deltas = {f["evidence"]["total_delta"] for f in data["facts"] if "total_delta" in f["evidence"]}
    if len(deltas) > 1:
        problems["total_delta"] = ["budget and sign facts use different total deltas"]
    for fact in data["facts"]:
        errs = _check_fact(fact)
        if fact["holds"] and errs:
            problems[fact["name"]] = errs
    all_hold = all(f["holds"] for f in data["facts"])
    if (data["verdict"] == "proven") != all_hold:
        problems["verdict"] = ["verdict disagrees with the facts"]
    return problems
