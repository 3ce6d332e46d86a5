"""JSON documents for instances, certificates and reduction sources.

Instance document (all indices 1-based)::

    {"m": 3,
     "rule": {"kind": "approval", "r": 2},      # or plurality, veto, borda,
                                                # {"kind": "custom", "alpha": [...]}
     "voters": [{"weight": 2, "pref": [2, 3, 1], "pa": 1, "pb": 1}, ...],
     "F": 1, "B": 2, "mode": "destructive", "designated": 3,
     "provenance": {...}}                       # optional, written by generate

``pref`` may list only the top of a ranking; the candidates it leaves out
follow in ascending order.  ``pa`` and ``pb`` default to 1.

Digests are SHA-256 over the canonical serialization (sorted keys, no
whitespace).
"""

from __future__ import annotations

import hashlib
import json
from typing import Any

from .attacks import AttackCertificate
from .core import PreferenceList, ProtectionInstance, ScoringRule, Voter, build_scoring_rule, validate_instance
from .errors import E_ALPHA, E_BUDGET, E_KEY, E_MODE, E_PARSE, E_PRICE, E_STRUCT, E_WEIGHT, ProtectionError
from .reductions import BilevelKnapsackInstance, ExistsForall3DMInstance, PartitionInstance, ThreeDMInstance
from .solvers import DefenseCertificate, Verdict

FULL_PREF_LIMIT = 64


def canonical_json(doc: Any) -> str:
    return json.dumps(doc, sort_keys=True, separators=(",", ":"))


def digest(doc: Any) -> str:
    return hashlib.sha256(canonical_json(doc).encode()).hexdigest()


def dump(doc: Any) -> str:
    """Human-readable serialization; instance voters stay one per line."""
    if isinstance(doc, dict) and isinstance(doc.get("voters"), list):
        rest = json.dumps({k: v for k, v in doc.items() if k != "voters"}, sort_keys=True)
        body = ",\n".join("  " + json.dumps(v, sort_keys=True) for v in doc["voters"])
        sep = ", " if len(doc) > 1 else ""
        return rest[:-1] + sep + '"voters": [\n' + body + "\n]}\n"
    return json.dumps(doc, sort_keys=True, indent=1) + "\n"


def load_json(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ProtectionError(E_PARSE, f"{exc.msg} at line {exc.lineno}, column {exc.colno}") from None


def _int(doc, key, where, default=None, minimum=None, code=E_STRUCT):
    if key not in doc:
        if default is not None:
            return default
        raise ProtectionError(E_STRUCT, f"missing key {key!r}", where)
    v = doc[key]
    if not isinstance(v, int) or isinstance(v, bool):
        raise ProtectionError(code, f"{key} must be an integer, got {v!r}", f"{where}.{key}" if where else key)
    if minimum is not None and v < minimum:
        raise ProtectionError(code, f"{key} must be at least {minimum}, got {v}", f"{where}.{key}" if where else key)
    return v


def _keys(doc, allowed, where):
    if not isinstance(doc, dict):
        raise ProtectionError(E_STRUCT, "expected an object", where)
    extra = sorted(set(doc) - set(allowed))
    if extra:
        raise ProtectionError(E_KEY, f"unknown keys {extra}", where)


def _int_list(v, where):
    if not isinstance(v, list) or any(not isinstance(x, int) or isinstance(x, bool) for x in v):
        raise ProtectionError(E_STRUCT, "expected a list of integers", where)
    return v


def _parse_rule(doc, m) -> ScoringRule:
    _keys(doc, {"kind", "r", "alpha"}, "rule")
    kind = doc.get("kind")
    r = doc.get("r")
    alpha = doc.get("alpha")
    if alpha is not None:
        alpha = _int_list(alpha, "rule.alpha")
    if r is not None and (not isinstance(r, int) or isinstance(r, bool)):
        raise ProtectionError(E_ALPHA, f"r must be an integer, got {r!r}", "rule.r")
    return build_scoring_rule(kind, m, r=r, alpha=alpha)


def instance_from_doc(doc: dict) -> ProtectionInstance:
    _keys(doc, {"m", "rule", "voters", "F", "B", "mode", "designated", "provenance"}, "")
    m = _int(doc, "m", "", minimum=2)
    if "rule" not in doc:
        raise ProtectionError(E_STRUCT, "missing key 'rule'")
    rule = _parse_rule(doc["rule"], m)
    raw = doc.get("voters")
    if not isinstance(raw, list):
        raise ProtectionError(E_STRUCT, "voters must be a list", "voters")
    voters = []
    for j, v in enumerate(raw, 1):
        where = f"voters[{j}]"
        _keys(v, {"weight", "pref", "pa", "pb"}, where)
        if "pref" not in v:
            raise ProtectionError(E_STRUCT, "missing key 'pref'", where)
        pref = PreferenceList(tuple(_int_list(v["pref"], f"{where}.pref")), m)
        voters.append(
            Voter(
                _int(v, "weight", where, minimum=1, code=E_WEIGHT),
                pref,
                _int(v, "pa", where, default=1, minimum=1, code=E_PRICE),
                _int(v, "pb", where, default=1, minimum=1, code=E_PRICE),
            )
        )
    mode = doc.get("mode")
    if mode not in ("constructive", "destructive"):
        raise ProtectionError(E_MODE, f"mode must be 'constructive' or 'destructive', got {mode!r}", "mode")
    inst = ProtectionInstance(
        m,
        tuple(voters),
        rule,
        _int(doc, "F", "", minimum=0, code=E_BUDGET),
        _int(doc, "B", "", minimum=0, code=E_BUDGET),
        mode,
        _int(doc, "designated", ""),
    )
    for diag in validate_instance(inst):
        if diag.level == "error":
            raise ProtectionError(diag.code, diag.message, diag.field)
    return inst


def parse_instance(text: str) -> ProtectionInstance:
    return instance_from_doc(load_json(text))


def rule_to_doc(rule: ScoringRule) -> dict:
    m = rule.m
    if rule.alpha == tuple(range(m - 1, -1, -1)):
        return {"kind": "borda"}
    shape = rule.approval_shape()
    if shape and shape[1:] == (1, 0):
        return {"kind": "approval", "r": shape[0]}
    return {"kind": "custom", "alpha": list(rule.alpha)}


def pref_to_list(pref: PreferenceList) -> list[int]:
    return list(pref.order) if pref.m <= FULL_PREF_LIMIT else list(pref.canonical)


def instance_to_doc(instance: ProtectionInstance, provenance: dict | None = None) -> dict:
    doc = {
        "m": instance.m,
        "rule": rule_to_doc(instance.rule),
        "voters": [
            {"weight": v.weight, "pref": pref_to_list(v.pref), "pa": v.price_award, "pb": v.price_bribe}
            for v in instance.voters
        ],
        "F": instance.defense_budget,
        "B": instance.attack_budget,
        "mode": instance.mode.value,
        "designated": instance.designated,
    }
    if provenance is not None:
        doc["provenance"] = provenance
    return doc


def serialize_instance(instance: ProtectionInstance, provenance: dict | None = None) -> str:
    return dump(instance_to_doc(instance, provenance))


def instance_digest(instance: ProtectionInstance) -> str:
    return digest(instance_to_doc(instance))


# -- certificates --------------------------------------------------------------


def attack_to_doc(cert: AttackCertificate | None) -> dict | None:
    if cert is None:
        return None
    return {
        "bribed": sorted(cert.bribed),
        "new_prefs": {str(j): pref_to_list(p) for j, p in sorted(cert.new_prefs.items())},
        "cost": cert.cost,
    }


def attack_from_doc(doc: dict, m: int) -> AttackCertificate:
    _keys(doc, {"bribed", "new_prefs", "cost"}, "counterattack")
    prefs = {}
    for key, order in (doc.get("new_prefs") or {}).items():
        try:
            j = int(key)
        except ValueError:
            raise ProtectionError(E_STRUCT, f"voter key {key!r} is not an integer", "counterattack.new_prefs") from None
        prefs[j] = PreferenceList(tuple(_int_list(order, f"counterattack.new_prefs.{key}")), m)
    return AttackCertificate(
        frozenset(_int_list(doc.get("bribed", []), "counterattack.bribed")), prefs, _int(doc, "cost", "counterattack")
    )


def defense_to_doc(cert: DefenseCertificate | None) -> dict | None:
    if cert is None:
        return None
    return {"awarded": sorted(cert.awarded), "cost": cert.cost}


def defense_from_doc(doc: dict) -> DefenseCertificate:
    _keys(doc, {"awarded", "cost"}, "defense")
    return DefenseCertificate(frozenset(_int_list(doc.get("awarded", []), "defense.awarded")), _int(doc, "cost", "defense"))


def verdict_to_doc(verdict: Verdict | None, instance: ProtectionInstance, explanation: str | None = None) -> dict:
    if verdict is None:
        doc = {"verdict": "undecided", "solver": None, "defense": None, "counterattack": None}
    else:
        doc = {
            "verdict": "protected" if verdict.protected else "unprotected",
            "solver": verdict.solver,
            "defense": defense_to_doc(verdict.defense),
            "counterattack": attack_to_doc(verdict.counterattack),
        }
    doc["instance_digest"] = instance_digest(instance)
    if explanation:
        doc["explanation"] = explanation
    return doc


# -- reduction sources ---------------------------------------------------------

FAMILIES = ("dneg", "partition", "ef3dm", "tdm")


def _triples(v, where):
    if not isinstance(v, list) or any(not isinstance(t, list) or len(t) != 3 for t in v):
        raise ProtectionError(E_STRUCT, "expected a list of [w, x, y] triples", where)
    return tuple(tuple(_int_list(t, where)) for t in v)


def source_from_doc(doc: dict):
    """Returns ``(family, source, options)``."""
    if not isinstance(doc, dict) or doc.get("family") not in FAMILIES:
        raise ProtectionError(E_STRUCT, f"source needs a family in {FAMILIES}", "family")
    family = doc["family"]
    if family == "dneg":
        _keys(doc, {"family", "items", "F", "B", "W"}, "")
        items = doc.get("items")
        if not isinstance(items, list) or any(not isinstance(it, list) or len(it) != 2 for it in items):
            raise ProtectionError(E_STRUCT, "items must be a list of [reserve_price, pack_price]", "items")
        items = tuple(tuple(_int_list(it, "items")) for it in items)
        src = BilevelKnapsackInstance(items, _int(doc, "F", ""), _int(doc, "B", ""), _int(doc, "W", ""))
        return family, src, {}
    if family == "partition":
        _keys(doc, {"family", "values", "q", "lift"}, "")
        src = PartitionInstance(tuple(_int_list(doc.get("values"), "values")), _int(doc, "q", ""))
        return family, src, {"lift": bool(doc.get("lift", False))}
    if family == "ef3dm":
        _keys(doc, {"family", "n", "M1", "M2", "t", "r", "xi"}, "")
        src = ExistsForall3DMInstance(
            _int(doc, "n", ""), _triples(doc.get("M1", []), "M1"), _triples(doc.get("M2", []), "M2"), _int(doc, "t", "")
        )
        xi = doc.get("xi")
        return family, src, {"r": _int(doc, "r", "", default=4), "xi": None if xi is None else _int(doc, "xi", "")}
    _keys(doc, {"family", "zeta", "triples", "d", "r"}, "")
    src = ThreeDMInstance(_int(doc, "zeta", ""), _triples(doc.get("triples", []), "triples"), _int(doc, "d", ""))
    return family, src, {"r": _int(doc, "r", "", default=3)}


def source_to_doc(family: str, src, **options) -> dict:
    if family == "dneg":
        return {"family": family, "items": [list(it) for it in src.items], "F": src.reserve_budget,
                "B": src.pack_budget, "W": src.threshold}
    if family == "partition":
        return {"family": family, "values": list(src.values), "q": src.half_sum, "lift": bool(options.get("lift"))}
    if family == "ef3dm":
        doc = {"family": family, "n": src.n, "M1": [list(t) for t in src.triples_m1],
               "M2": [list(t) for t in src.triples_m2], "t": src.t, "r": options.get("r", 4)}
        if options.get("xi") is not None:
            doc["xi"] = options["xi"]
        return doc
    if family == "tdm":
        return {"family": family, "zeta": src.zeta, "triples": [list(t) for t in src.triples], "d": src.d,
                "r": options.get("r", 3)}
    raise ProtectionError(E_STRUCT, f"unknown family {family!r}", "family")


def generate_from_doc(doc: dict) -> tuple[ProtectionInstance, dict]:
    """Build the election for a source document; returns it with its provenance block."""
    from . import reductions as red

    family, src, opts = source_from_doc(doc)
    if family == "dneg":
        inst = red.gen_from_dneg(src)
    elif family == "partition":
        inst = red.gen_from_partition_prime(red.lift_partition(src) if opts["lift"] else src)
    elif family == "ef3dm":
        inst = red.gen_from_ef3dm(src, r=opts["r"], xi=opts["xi"])
    else:
        inst = red.gen_from_3dm(src, r=opts["r"])
    return inst, {"family": family, "source_digest": digest(doc)}
