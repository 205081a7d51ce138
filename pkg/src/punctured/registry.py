"""Curve registry: built-in curves plus user JSON files (one curve per document)."""

from __future__ import annotations

import json
from importlib import resources
from pathlib import Path

from .counting import ELLIPTIC, CurveSpec, Surjectivity


class UnknownCurveError(KeyError):
    pass


def curve_from_json(obj: dict) -> CurveSpec:
    kind = obj["kind"]
    return CurveSpec(
        kind=kind,
        label=obj["label"],
        conductor=int(obj["conductor"]),
        ainvs=tuple(obj.get("ainvs", ())) if kind == ELLIPTIC else (),
        f=tuple(obj.get("f", ())),
        h=tuple(obj.get("h", ())),
        attested_trivial_mw=bool(obj.get("attested_trivial_mw", False)),
        surjective=Surjectivity.from_json(obj.get("surjective", [])),
        provenance=obj.get("provenance", ""),
    )


def curve_to_json(curve: CurveSpec) -> dict:
    out = {"label": curve.label, "kind": curve.kind}
    if curve.kind == ELLIPTIC:
        out["ainvs"] = list(curve.ainvs)
    else:
        out["f"] = list(curve.f)
        out["h"] = list(curve.h)
    out["conductor"] = curve.conductor
    out["attested_trivial_mw"] = curve.attested_trivial_mw
    out["surjective"] = curve.surjective.to_json()
    if curve.provenance:
        out["provenance"] = curve.provenance
    return out


def dump_curve(curve: CurveSpec, path) -> None:
    Path(path).write_text(json.dumps(curve_to_json(curve), indent=2) + "\n")


def load_curve(path) -> CurveSpec:
    return curve_from_json(json.loads(Path(path).read_text()))


class CurveRegistry:
    def __init__(self, curves=()):
        self._curves: dict[str, CurveSpec] = {}
        for c in curves:
            self.add(c)

    def add(self, curve: CurveSpec) -> None:
        if curve.label in self._curves:
            raise ValueError(f"duplicate curve label {curve.label!r}")
        self._curves[curve.label] = curve

    def __getitem__(self, label: str) -> CurveSpec:
        try:
            return self._curves[label]
        except KeyError:
            raise UnknownCurveError(label) from None

    def __contains__(self, label: str) -> bool:
        return label in self._curves

    def labels(self) -> list[str]:
        return sorted(self._curves)

    def load(self, path) -> None:
        """Add curves from a JSON file or from every ``*.json`` in a directory."""
        path = Path(path)
        files = sorted(path.glob("*.json")) if path.is_dir() else [path]
        for fp in files:
            self.add(load_curve(fp))

    @classmethod
    def builtin(cls) -> "CurveRegistry":
        reg = cls()
        for entry in sorted(resources.files("punctured.data").iterdir(), key=lambda e: e.name):
            if entry.name.endswith(".json"):
                reg.add(curve_from_json(json.loads(entry.read_text())))
        return reg


def builtin_curve(label: str) -> CurveSpec:
    return CurveRegistry.builtin()[label]
