"""Artifact files: versioned JSON wrappers around every machine kind.

Table machines serialize their transition tables; converted machines
(the two-run transducer and the deterministic signed one) serialize the
construction recipe instead, since their reachable state spaces are
lazy, and are rebuilt on load with the recorded delay and chain length.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any

from .buchi import BuchiAutomaton, DetBuchi, LazySubsetGraph
from .convert import (
    HatTransducer,
    SignedDetTransducer,
    compose_signed_to_binary,
)
from .pwl import PwlFunction
from .transducer import DetFst, Fst

SCHEMA_VERSION = 1

KINDS = ("pwl", "buchi", "detbuchi", "fst", "detfst")


class ArtifactError(ValueError):
    pass


@dataclass
class Artifact:
    kind: str
    obj: Any
    provenance: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "kind": self.kind,
            "payload": _payload_json(self.kind, self.obj),
            "provenance": self.provenance,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=1)

    def save(self, path: str) -> None:
        with open(path, "w") as fh:
            fh.write(self.dumps() + "\n")


def _payload_json(kind: str, obj) -> dict:
    if kind == "pwl":
        return obj.to_json()
    if kind in ("buchi", "detbuchi"):
        return obj.to_json()
    if kind in ("fst", "detfst"):
        if isinstance(obj, (Fst, DetFst)):
            return {"table": obj.to_json()}
        if isinstance(obj, HatTransducer):
            det = obj.det
            core = det.aut if isinstance(det, LazySubsetGraph) else det
            if isinstance(det, LazySubsetGraph):
                return {
                    "construction": "ahat",
                    "delay": obj.delay,
                    "chain_nodes": obj.chain_nodes,
                    "graph": core.to_json(),
                    "graph_kind": "subset-of-buchi",
                }
            return {
                "construction": "ahat",
                "delay": obj.delay,
                "chain_nodes": obj.chain_nodes,
                "graph": core.to_json(),
                "graph_kind": "detbuchi",
            }
        if isinstance(obj, SignedDetTransducer):
            inner = _payload_json("fst", obj.ahat)
            return {"construction": "adet", "source": inner}
        if hasattr(obj, "first"):  # composed adapter
            return {
                "construction": "signed_binary_composite",
                "source": _payload_json("detfst", obj.first),
            }
    raise ArtifactError(f"cannot serialize kind {kind!r}: {type(obj).__name__}")


def _payload_load(kind: str, data: dict):
    if kind == "pwl":
        return PwlFunction.from_json(data)
    if kind == "buchi":
        return BuchiAutomaton.from_json(data)
    if kind == "detbuchi":
        return DetBuchi.from_json(data)
    if kind in ("fst", "detfst"):
        if "table" in data:
            cls = DetFst if kind == "detfst" else Fst
            return cls.from_json(data["table"])
        cons = data.get("construction")
        if cons == "ahat":
            if data["graph_kind"] == "subset-of-buchi":
                det = LazySubsetGraph(BuchiAutomaton.from_json(data["graph"]))
            else:
                det = DetBuchi.from_json(data["graph"])
            return HatTransducer(
                det, delay=data["delay"], chain_nodes=data["chain_nodes"]
            )
        if cons == "adet":
            return SignedDetTransducer(_payload_load("fst", data["source"]))
        if cons == "signed_binary_composite":
            return compose_signed_to_binary(_payload_load("detfst", data["source"]))
    raise ArtifactError(f"cannot load kind {kind!r} payload")


def load(path: str) -> Artifact:
    with open(path) as fh:
        data = json.load(fh)
    return loads_json(data)


def loads_json(data: dict) -> Artifact:
    if not isinstance(data, dict) or "kind" not in data or "payload" not in data:
        raise ArtifactError("not an artifact file")
    if data.get("schema_version") != SCHEMA_VERSION:
        raise ArtifactError(f"unsupported schema version {data.get('schema_version')}")
    kind = data["kind"]
    if kind not in KINDS:
        raise ArtifactError(f"unknown artifact kind {kind!r}")
    obj = _payload_load(kind, data["payload"])
    return Artifact(kind=kind, obj=obj, provenance=data.get("provenance", {}))
