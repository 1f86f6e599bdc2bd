"""System description: components, microgrids, network tree, cyber topology.

A case is loaded from a JSON document (see ``data/rbts6f4.json``) and turned
into immutable dataclasses.  Validation happens once, at parse time, so the
rest of the package can assume a consistent model.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Iterable, Mapping

import numpy as np

COMPONENT_KINDS = (
    "line", "transformer", "busbar", "switch", "physical-der", "physical-ess",
    "dms", "mgcc", "mc", "lc", "cbc", "cyber-link", "upstream",
)
CYBER_KINDS = frozenset({"dms", "mgcc", "mc", "lc", "cbc", "cyber-link"})
SWITCH_ROLES = ("feeder", "poi", "internal", "backup")
GRID = "grid"
BACKUP = "backup"


class CaseError(ValueError):
    """Raised when a case document is malformed or inconsistent."""


@dataclass(frozen=True)
class ComponentSpec:
    id: str
    kind: str
    failure_rate: float
    repair_rate: float
    distribution: str = "exponential"

    @property
    def is_cyber(self) -> bool:
        return self.kind in CYBER_KINDS

    @property
    def unavailability(self) -> float:
        if self.failure_rate == 0:
            return 0.0
        return self.failure_rate / (self.failure_rate + self.repair_rate)


@dataclass(frozen=True)
class EssSpec:
    max_charge: float
    max_discharge: float
    charge_eff: float
    discharge_eff: float
    soc_min: float
    soc_max: float
    charge_cost: float
    discharge_cost: float
    physical: str | None = None
    mc: str | None = None
    section: str | None = None


@dataclass(frozen=True)
class DieselSpec:
    id: str
    max_output: float
    fuel_cost: float
    emission_cost: float
    physical: str | None = None
    mc: str | None = None
    section: str | None = None

    @property
    def cost(self) -> float:
        return self.fuel_cost + self.emission_cost


@dataclass(frozen=True)
class RenewableSpec:
    capacity: float
    physical: str | None = None
    mc: str | None = None
    section: str | None = None


@dataclass(frozen=True)
class LoadPointSpec:
    id: str
    bus: int
    peak_load: float
    segments: tuple[tuple[float, float], ...]
    transformer: str | None = None
    lc: str | None = None
    section: str | None = None
    sector: str | None = None


@dataclass(frozen=True)
class SectionSpec:
    id: str
    lines: tuple[str, ...] = ()


@dataclass(frozen=True)
class MicrogridSpec:
    tag: str
    mgcc: str
    sections: tuple[SectionSpec, ...]
    wind: RenewableSpec | None
    pv: RenewableSpec | None
    diesels: tuple[DieselSpec, ...]
    ess: EssSpec | None
    load_points: tuple[LoadPointSpec, ...]

    @property
    def section_ids(self) -> tuple[str, ...]:
        return tuple(s.id for s in self.sections)

    @property
    def mcs(self) -> tuple[str, ...]:
        out = [d.mc for d in self.diesels]
        for der in (self.wind, self.pv, self.ess):
            if der is not None:
                out.append(der.mc)
        return tuple(m for m in out if m)


@dataclass(frozen=True)
class SwitchSpec:
    """A switched (or solid, when ``id`` is None) connection between sections."""

    id: str | None
    role: str
    ends: tuple[str, str]
    cbc: str | None = None
    controllers: tuple[str, ...] = ()
    normally_open: bool = False


@dataclass(frozen=True)
class LineSpec:
    """Directed POI line: ``sending`` is the upstream MG."""

    id: str
    sending: str
    receiving: str
    capacity: float
    switch: str


@dataclass(frozen=True)
class BackupSpec:
    section: str
    bus: int
    switch: str
    capacity: float
    enabled: bool = False


@dataclass(frozen=True)
class MmgGraph:
    root: str
    lines: tuple[LineSpec, ...]
    substation_capacity: float
    feeder_switch: str
    backup: BackupSpec | None = None

    def children(self, mg: str) -> tuple[str, ...]:
        return tuple(l.receiving for l in self.lines if l.sending == mg)

    def parent_line(self, mg: str) -> LineSpec | None:
        for l in self.lines:
            if l.receiving == mg:
                return l
        return None

    def subtree(self, mg: str) -> tuple[str, ...]:
        out = [mg]
        for c in self.children(mg):
            out.extend(self.subtree(c))
        return tuple(out)

    def topological(self) -> tuple[str, ...]:
        """Microgrids ordered root first."""
        return self.subtree(self.root)


@dataclass(frozen=True)
class CyberEdge:
    id: str
    a: str
    b: str


@dataclass(frozen=True)
class SegmentCatalog:
    """Microgrid load segments: unique interruption costs, ascending.

    ``weights[l, r]`` is the share of load point ``l`` that belongs to
    microgrid segment ``r``; ``mapping`` sends (load point id, load point
    segment index) to ``r``.
    """

    costs: tuple[float, ...]
    load_ids: tuple[str, ...]
    weights: np.ndarray
    mapping: Mapping[tuple[str, int], int]

    def __len__(self) -> int:
        return len(self.costs)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SegmentCatalog):
            return NotImplemented
        return (self.costs == other.costs and self.load_ids == other.load_ids
                and np.array_equal(self.weights, other.weights)
                and dict(self.mapping) == dict(other.mapping))

    __hash__ = None  # type: ignore[assignment]

    def demand(self, frac: np.ndarray) -> np.ndarray:
        """Segment demand (MW) for per-load-point fractions of peak load.

        ``frac`` has shape (n_load_points,) or (n_load_points, T).
        """
        return self.weights.T @ np.asarray(frac, dtype=float)


@dataclass(frozen=True)
class CaseModel:
    name: str
    components: Mapping[str, ComponentSpec]
    microgrids: tuple[MicrogridSpec, ...]
    graph: MmgGraph
    switches: Mapping[str, SwitchSpec]
    cyber_edges: tuple[CyberEdge, ...]
    dms: str
    upstream: str
    upstream_link: str | None
    sectors: Mapping[str, tuple[tuple[float, float], ...]] = field(default_factory=dict)
    series: Mapping[str, Any] = field(default_factory=dict)
    defaults: Mapping[str, Any] = field(default_factory=dict)

    def mg(self, tag: str) -> MicrogridSpec:
        for m in self.microgrids:
            if m.tag == tag:
                return m
        raise KeyError(tag)

    @property
    def mg_tags(self) -> tuple[str, ...]:
        return tuple(m.tag for m in self.microgrids)

    def section_owner(self) -> dict[str, str]:
        return {s.id: m.tag for m in self.microgrids for s in m.sections}

    def catalog(self, tag: str) -> SegmentCatalog:
        return aggregate_segments(self.mg(tag))

    def load_points(self) -> tuple[LoadPointSpec, ...]:
        return tuple(lp for m in self.microgrids for lp in m.load_points)


def aggregate_segments(mg: MicrogridSpec) -> SegmentCatalog:
    """Merge load-point segments with equal interruption cost into MG segments."""
    costs = sorted({c for lp in mg.load_points for _, c in lp.segments})
    index = {c: r for r, c in enumerate(costs)}
    weights = np.zeros((len(mg.load_points), len(costs)))
    mapping = {}
    for l, lp in enumerate(mg.load_points):
        for k, (theta, c) in enumerate(lp.segments):
            r = index[c]
            weights[l, r] += theta * lp.peak_load
            mapping[(lp.id, k)] = r
    return SegmentCatalog(tuple(costs), tuple(lp.id for lp in mg.load_points),
                          weights, mapping)


# --------------------------------------------------------------------------
# parsing


def _require(doc: Mapping[str, Any], key: str, where: str) -> Any:
    if key not in doc:
        raise CaseError(f"{where}: missing field '{key}'")
    return doc[key]


def _num(doc: Mapping[str, Any], key: str, where: str, default: Any = None) -> float:
    if key not in doc:
        if default is None:
            raise CaseError(f"{where}: missing field '{key}'")
        return float(default)
    try:
        return float(doc[key])
    except (TypeError, ValueError):
        raise CaseError(f"{where}.{key}: expected a number, got {doc[key]!r}") from None


def _parse_component(doc: Mapping[str, Any], i: int) -> ComponentSpec:
    where = f"components[{i}]"
    cid = str(_require(doc, "id", where))
    kind = str(_require(doc, "kind", where))
    if kind not in COMPONENT_KINDS:
        raise CaseError(f"{where} ({cid}): unknown kind '{kind}'")
    lam = _num(doc, "failure_rate", where, 0.0)
    mu = _num(doc, "repair_rate", where, 0.0)
    dist = str(doc.get("distribution", "exponential"))
    if lam < 0 or mu < 0:
        raise CaseError(f"{where} ({cid}): rates must be non-negative")
    if lam > 0 and mu <= 0:
        raise CaseError(f"{where} ({cid}): repair_rate must be > 0 when failure_rate > 0")
    if dist != "exponential":
        raise CaseError(f"{where} ({cid}): only exponential sojourn times are supported")
    return ComponentSpec(cid, kind, lam, mu, dist)


def _segments(doc: Mapping[str, Any], sectors: Mapping[str, Any], where: str):
    if "segments" in doc:
        raw = doc["segments"]
    elif "sector" in doc:
        if doc["sector"] not in sectors:
            raise CaseError(f"{where}: unknown sector '{doc['sector']}'")
        raw = sectors[doc["sector"]]
    else:
        raise CaseError(f"{where}: load point needs 'segments' or 'sector'")
    segs = tuple((float(t), float(c)) for t, c in raw)
    if not segs:
        raise CaseError(f"{where}: empty segment list")
    if any(not (0 < t <= 1) for t, _ in segs):
        raise CaseError(f"{where}: segment proportions must lie in (0, 1]")
    if abs(sum(t for t, _ in segs) - 1.0) > 1e-9:
        raise CaseError(f"{where}: segment proportions sum to {sum(t for t, _ in segs)!r}, not 1")
    return segs


def _parse_mg(doc: Mapping[str, Any], i: int, sectors) -> MicrogridSpec:
    where = f"microgrids[{i}]"
    tag = str(_require(doc, "tag", where))
    where = f"microgrids[{i}] ({tag})"
    sections = tuple(SectionSpec(str(s["id"]), tuple(s.get("lines", ())))
                     for s in doc.get("sections", ()))
    if not sections:
        sections = (SectionSpec(f"{tag}.A", tuple(doc.get("lines", ()))),)
    first = sections[0].id

    def ren(key):
        d = doc.get(key)
        if not d:
            return None
        return RenewableSpec(_num(d, "capacity", f"{where}.{key}"), d.get("physical"),
                             d.get("mc"), d.get("section", first))

    diesels = tuple(
        DieselSpec(str(d.get("id", f"{tag}.DE{k + 1}")), _num(d, "max_output", f"{where}.diesel[{k}]"),
                   _num(d, "fuel_cost", f"{where}.diesel[{k}]", 0.0),
                   _num(d, "emission_cost", f"{where}.diesel[{k}]", 0.0),
                   d.get("physical"), d.get("mc"), d.get("section", first))
        for k, d in enumerate(doc.get("diesel", ())))
    for d in diesels:
        if d.max_output <= 0:
            raise CaseError(f"{where}: diesel {d.id} max_output must be > 0")
    ess = None
    if doc.get("ess"):
        e = doc["ess"]
        w = f"{where}.ess"
        ess = EssSpec(_num(e, "max_charge", w), _num(e, "max_discharge", w),
                      _num(e, "charge_eff", w, 1.0), _num(e, "discharge_eff", w, 1.0),
                      _num(e, "soc_min", w, 0.0), _num(e, "soc_max", w),
                      _num(e, "charge_cost", w, 0.0), _num(e, "discharge_cost", w, 0.0),
                      e.get("physical"), e.get("mc"), e.get("section", first))
        if not (0 <= ess.soc_min <= ess.soc_max):
            raise CaseError(f"{w}: need 0 <= soc_min <= soc_max")
        if ess.max_charge < 0 or ess.max_discharge < 0:
            raise CaseError(f"{w}: rates must be non-negative")
        if not (0 < ess.charge_eff <= 1 and 0 < ess.discharge_eff <= 1):
            raise CaseError(f"{w}: efficiencies must lie in (0, 1]")
    lps = []
    for k, lp in enumerate(doc.get("load_points", ())):
        w = f"{where}.load_points[{k}]"
        lps.append(LoadPointSpec(str(_require(lp, "id", w)), int(lp.get("bus", k + 1)),
                                 _num(lp, "peak_load", w), _segments(lp, sectors, w),
                                 lp.get("transformer"), lp.get("lc"), lp.get("section", first),
                                 lp.get("sector")))
    return MicrogridSpec(tag, str(_require(doc, "mgcc", where)), sections, ren("wind"), ren("pv"),
                         diesels, ess, tuple(lps))


def parse_case_document(doc: Mapping[str, Any]) -> CaseModel:
    """Build and validate a :class:`CaseModel` from a decoded JSON document."""
    comps: dict[str, ComponentSpec] = {}
    for i, c in enumerate(_require(doc, "components", "case")):
        spec = _parse_component(c, i)
        if spec.id in comps:
            raise CaseError(f"components[{i}]: duplicate id '{spec.id}'")
        comps[spec.id] = spec
    sectors = {k: tuple((float(t), float(c)) for t, c in v) for k, v in doc.get("sectors", {}).items()}
    mgs = tuple(_parse_mg(m, i, sectors) for i, m in enumerate(_require(doc, "microgrids", "case")))
    tags = [m.tag for m in mgs]
    if len(set(tags)) != len(tags):
        raise CaseError("microgrids: duplicate tag")
    sec_owner = {s.id: m.tag for m in mgs for s in m.sections}

    sub = _require(doc, "substation", "case")
    root = str(_require(sub, "microgrid", "substation"))
    switches: dict[str, SwitchSpec] = {}
    solid = 0

    def add_switch(sw: SwitchSpec):
        nonlocal solid
        key = sw.id
        if key is None:
            solid += 1
            key = f"__solid{solid}"
        if key in switches:
            raise CaseError(f"switch '{key}' defined twice")
        switches[key] = sw

    feeder_sw = str(_require(sub, "switch", "substation"))
    root_mg = next((m for m in mgs if m.tag == root), None)
    if root_mg is None:
        raise CaseError(f"substation.microgrid: unknown microgrid '{root}'")
    add_switch(SwitchSpec(feeder_sw, "feeder", (GRID, str(sub.get("section", root_mg.sections[0].id))),
                          sub.get("cbc"), tuple(sub.get("controllers", ()))))
    lines = []
    for i, l in enumerate(doc.get("lines", ())):
        where = f"lines[{i}]"
        snd, rcv = str(_require(l, "from", where)), str(_require(l, "to", where))
        for m in (snd, rcv):
            if m not in tags:
                raise CaseError(f"{where}: unknown microgrid '{m}'")
        line = LineSpec(str(l.get("id", f"{snd}-{rcv}")), snd, rcv, _num(l, "capacity", where),
                        str(_require(l, "switch", where)))
        lines.append(line)
        ends = (str(l.get("from_section", next(m for m in mgs if m.tag == snd).sections[-1].id)),
                str(l.get("to_section", next(m for m in mgs if m.tag == rcv).sections[0].id)))
        add_switch(SwitchSpec(line.switch, "poi", ends, l.get("cbc"), tuple(l.get("controllers", ()))))
    for m_doc, m in zip(doc["microgrids"], mgs):
        for k, s in enumerate(m_doc.get("internal_switches", ())):
            a, b = s["between"]
            add_switch(SwitchSpec(s.get("switch"), "internal", (str(a), str(b)), s.get("cbc"),
                                  tuple(s.get("controllers", (m.mgcc,))) if s.get("switch") else ()))
    backup = None
    if doc.get("backup"):
        b = doc["backup"]
        backup = BackupSpec(str(_require(b, "section", "backup")), int(b.get("bus", 0)),
                            str(_require(b, "switch", "backup")), _num(b, "capacity", "backup"),
                            bool(b.get("enabled", False)))
        add_switch(SwitchSpec(backup.switch, "backup", (BACKUP, backup.section), b.get("cbc"),
                              tuple(b.get("controllers", ())), normally_open=True))
    graph = MmgGraph(root, tuple(lines), _num(sub, "capacity", "substation"), feeder_sw, backup)

    ctrl = _require(doc, "control", "case")
    edges = tuple(CyberEdge(str(e["id"]), str(e["a"]), str(e["b"])) for e in doc.get("cyber_edges", ()))
    case = CaseModel(
        name=str(doc.get("name", "case")), components=comps, microgrids=mgs, graph=graph,
        switches=switches, cyber_edges=edges, dms=str(_require(ctrl, "dms", "control")),
        upstream=str(_require(ctrl, "upstream", "control")), upstream_link=ctrl.get("upstream_link"),
        sectors=sectors, series=dict(doc.get("series", {})), defaults=dict(doc.get("defaults", {})),
    )
    _validate(case, sec_owner)
    return case


def _validate(case: CaseModel, sec_owner: Mapping[str, str]) -> None:
    comps = case.components

    def ref(cid, what, kinds=None):
        if cid is None:
            return
        if cid not in comps:
            raise CaseError(f"{what}: dangling component reference '{cid}'")
        if kinds and comps[cid].kind not in kinds:
            raise CaseError(f"{what}: '{cid}' has kind {comps[cid].kind}, expected {sorted(kinds)}")

    def sec(sid, what):
        if sid not in sec_owner:
            raise CaseError(f"{what}: unknown section '{sid}'")

    ref(case.dms, "control.dms", {"dms"})
    ref(case.upstream, "control.upstream", {"upstream"})
    ref(case.upstream_link, "control.upstream_link", {"cyber-link"})
    for m in case.microgrids:
        ref(m.mgcc, f"{m.tag}.mgcc", {"mgcc"})
        for s in m.sections:
            for l in s.lines:
                ref(l, f"{s.id}.lines", {"line", "busbar"})
        ders = [d for d in (m.wind, m.pv, m.ess) if d is not None] + list(m.diesels)
        for d in ders:
            ref(d.physical, f"{m.tag} DER", {"physical-der", "physical-ess"})
            ref(d.mc, f"{m.tag} DER", {"mc"})
            sec(d.section, f"{m.tag} DER")
        for lp in m.load_points:
            ref(lp.transformer, f"{lp.id}.transformer", {"transformer"})
            ref(lp.lc, f"{lp.id}.lc", {"lc"})
            sec(lp.section, f"{lp.id}")
    for key, sw in case.switches.items():
        if sw.id is not None:
            ref(sw.id, f"switch {key}", {"switch"})
        ref(sw.cbc, f"switch {key}.cbc", {"cbc"})
        for c in sw.controllers:
            ref(c, f"switch {key}.controllers", {"dms", "mgcc"})
        for e in sw.ends:
            if e not in (GRID, BACKUP):
                sec(e, f"switch {key}")
    for e in case.cyber_edges:
        ref(e.id, "cyber_edges", {"cyber-link"})
        ref(e.a, f"cyber edge {e.id}")
        ref(e.b, f"cyber edge {e.id}")
    _check_radial(case)


def _check_radial(case: CaseModel) -> None:
    g = case.graph
    tags = set(case.mg_tags)
    if g.root not in tags:
        raise CaseError(f"substation.microgrid: unknown microgrid '{g.root}'")
    seen_pairs = set()
    parents: dict[str, str] = {}
    for l in g.lines:
        pair = frozenset((l.sending, l.receiving))
        if pair in seen_pairs or l.sending == l.receiving:
            raise CaseError(f"line {l.id}: duplicate or reversed connection {l.sending}-{l.receiving}")
        seen_pairs.add(pair)
        if l.receiving in parents or l.receiving == g.root:
            raise CaseError(f"line {l.id}: network is not radial (second feed into {l.receiving})")
        parents[l.receiving] = l.sending
    reached = set(g.subtree(g.root)) if len(parents) < len(tags) + 1 else set()
    if reached != tags:
        raise CaseError("network is not radial: microgrids unreachable from the substation "
                        f"({sorted(tags - reached)})")
    # sections of one MG must form a tree through switches/solid joints
    for m in case.microgrids:
        ids = set(m.section_ids)
        adj = {s: set() for s in ids}
        for sw in case.switches.values():
            a, b = sw.ends
            if a in ids and b in ids:
                adj[a].add(b)
                adj[b].add(a)
        start = m.sections[0].id
        stack, seen = [start], {start}
        while stack:
            for n in adj[stack.pop()]:
                if n not in seen:
                    seen.add(n)
                    stack.append(n)
        if seen != ids:
            raise CaseError(f"{m.tag}: sections {sorted(ids - seen)} are not connected")


def parse_case(path: str | Path) -> CaseModel:
    """Load a case file.  Errors carry the field path or JSON line number."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise CaseError(f"{path}: {exc.strerror}") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CaseError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from None
    case = parse_case_document(doc)
    series = dict(case.series)
    if "csv" in series and not Path(series["csv"]).is_absolute():
        series["csv"] = str((path.parent / series["csv"]).resolve())
        case = _replace(case, series=series)
    return case


def _replace(case: CaseModel, **kw) -> CaseModel:
    from dataclasses import replace
    return replace(case, **kw)


def bundled_case_path() -> Path:
    return Path(__file__).parent / "data" / "rbts6f4.json"


def load_bundled_case() -> CaseModel:
    return parse_case(bundled_case_path())


# --------------------------------------------------------------------------
# serialization


def _drop_none(d: dict) -> dict:
    return {k: v for k, v in d.items() if v is not None}


def case_to_document(case: CaseModel) -> dict:
    """Inverse of :func:`parse_case_document`."""
    comps = [_drop_none({"id": c.id, "kind": c.kind, "failure_rate": c.failure_rate,
                         "repair_rate": c.repair_rate})
             for c in case.components.values()]
    mgs = []
    for m in case.microgrids:
        d: dict[str, Any] = {"tag": m.tag, "mgcc": m.mgcc,
                             "sections": [{"id": s.id, "lines": list(s.lines)} for s in m.sections]}
        for key, r in (("wind", m.wind), ("pv", m.pv)):
            if r is not None:
                d[key] = _drop_none({"capacity": r.capacity, "physical": r.physical, "mc": r.mc,
                                     "section": r.section})
        d["diesel"] = [_drop_none({"id": g.id, "max_output": g.max_output, "fuel_cost": g.fuel_cost,
                                   "emission_cost": g.emission_cost, "physical": g.physical,
                                   "mc": g.mc, "section": g.section}) for g in m.diesels]
        if m.ess is not None:
            e = m.ess
            d["ess"] = _drop_none({"max_charge": e.max_charge, "max_discharge": e.max_discharge,
                                   "charge_eff": e.charge_eff, "discharge_eff": e.discharge_eff,
                                   "soc_min": e.soc_min, "soc_max": e.soc_max,
                                   "charge_cost": e.charge_cost, "discharge_cost": e.discharge_cost,
                                   "physical": e.physical, "mc": e.mc, "section": e.section})
        d["load_points"] = [_drop_none({"id": lp.id, "bus": lp.bus, "peak_load": lp.peak_load,
                                        "segments": [list(s) for s in lp.segments],
                                        "transformer": lp.transformer, "lc": lp.lc,
                                        "section": lp.section, "sector": lp.sector})
                            for lp in m.load_points]
        d["internal_switches"] = [
            _drop_none({"switch": sw.id, "cbc": sw.cbc, "between": list(sw.ends),
                        "controllers": list(sw.controllers) if sw.id else None})
            for sw in case.switches.values()
            if sw.role == "internal" and sw.ends[0] in m.section_ids]
        mgs.append(d)
    g = case.graph
    feeder = case.switches[g.feeder_switch]
    doc: dict[str, Any] = {
        "name": case.name,
        "components": comps,
        "sectors": {k: [list(s) for s in v] for k, v in case.sectors.items()},
        "microgrids": mgs,
        "substation": _drop_none({"microgrid": g.root, "section": feeder.ends[1], "capacity": g.substation_capacity,
                                  "switch": g.feeder_switch, "cbc": feeder.cbc,
                                  "controllers": list(feeder.controllers)}),
        "lines": [],
        "control": _drop_none({"dms": case.dms, "upstream": case.upstream,
                               "upstream_link": case.upstream_link}),
        "cyber_edges": [{"id": e.id, "a": e.a, "b": e.b} for e in case.cyber_edges],
        "series": dict(case.series),
        "defaults": dict(case.defaults),
    }
    for l in g.lines:
        sw = case.switches[l.switch]
        doc["lines"].append(_drop_none({"id": l.id, "from": l.sending, "to": l.receiving,
                                        "capacity": l.capacity, "switch": l.switch, "cbc": sw.cbc,
                                        "controllers": list(sw.controllers),
                                        "from_section": sw.ends[0], "to_section": sw.ends[1]}))
    if g.backup is not None:
        b = g.backup
        sw = case.switches[b.switch]
        doc["backup"] = _drop_none({"section": b.section, "bus": b.bus, "switch": b.switch,
                                    "capacity": b.capacity, "enabled": b.enabled, "cbc": sw.cbc,
                                    "controllers": list(sw.controllers)})
    return doc


def dumps_case(case: CaseModel) -> str:
    return json.dumps(case_to_document(case), indent=1, sort_keys=True)


def iter_component_ids(case: CaseModel, kinds: Iterable[str]) -> list[str]:
    kinds = set(kinds)
    return sorted(c.id for c in case.components.values() if c.kind in kinds)
